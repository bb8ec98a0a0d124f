//! Presented (co/Hopf) algebras: finite-type graded modules with structure
//! constants for the differential, product and reduced diagonal.
//!
//! Everything is stored reduced: the basis spans the augmentation ideal /
//! coaugmentation coideal, the unit is implicit, and the coproduct is the
//! reduced diagonal. Products of reduced elements stay reduced (augmented
//! algebras), and the full diagonal of x is x⊗1 + 1⊗x + Δ̄x.

use crate::error::{AlgError, Result};
use crate::graded::{Element, GradedModule, LinearMap, Window};
use crate::ring::Ring;
use std::collections::BTreeMap;

pub type Pos = (i64, usize);

/// A term of a tensor square: coefficient times a pair of basis positions.
pub type PairTerm<R> = (<R as Ring>::Elem, Pos, Pos);

#[derive(Clone, Debug)]
pub struct PresentedBialgebra<R: Ring> {
    pub ring: R,
    pub module: GradedModule,
    pub d: LinearMap<R>,
    /// Structure constants of the product on reduced basis pairs. `None`
    /// when the object is only a coalgebra.
    pub product: Option<BTreeMap<(Pos, Pos), Element<R>>>,
    /// Reduced diagonal on the basis. `None` when the object is only an
    /// algebra.
    pub coproduct: Option<BTreeMap<Pos, Vec<PairTerm<R>>>>,
}

impl<R: Ring> PresentedBialgebra<R> {
    pub fn window(&self) -> Window {
        self.module.window
    }

    pub fn is_algebra(&self) -> bool {
        self.product.is_some()
    }

    pub fn is_coalgebra(&self) -> bool {
        self.coproduct.is_some()
    }

    pub fn differential(&self, x: &Element<R>) -> Element<R> {
        self.d.apply(&self.ring, x)
    }

    /// Product of reduced elements; fails when a needed structure constant
    /// would lie outside the window.
    pub fn product(&self, x: &Element<R>, y: &Element<R>) -> Result<Element<R>> {
        let table = self
            .product
            .as_ref()
            .ok_or_else(|| AlgError::Other("object carries no product".into()))?;
        let mut out = Element::zero();
        for ((dx, ix), cx) in &x.terms {
            for ((dy, iy), cy) in &y.terms {
                self.window().check(dx + dy)?;
                if let Some(e) = table.get(&((*dx, *ix), (*dy, *iy))) {
                    let c = self.ring.mul(cx, cy);
                    for ((td, ti), tc) in &e.terms {
                        out.add_term(&self.ring, *td, *ti, self.ring.mul(tc, &c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced diagonal of an element.
    pub fn reduced_diagonal(&self, x: &Element<R>) -> Result<Vec<PairTerm<R>>> {
        let table = self
            .coproduct
            .as_ref()
            .ok_or_else(|| AlgError::Other("object carries no coproduct".into()))?;
        let mut acc: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        for (pos, c) in &x.terms {
            if let Some(terms) = table.get(pos) {
                for (tc, p1, p2) in terms {
                    let v = self.ring.mul(tc, c);
                    let e = acc.entry((*p1, *p2)).or_insert_with(|| self.ring.zero());
                    *e = self.ring.add(e, &v);
                }
            }
        }
        Ok(acc
            .into_iter()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(|((p1, p2), c)| (c, p1, p2))
            .collect())
    }

    /// Left-normed iterated reduced diagonal: Δ̄^{(1)} = id and
    /// Δ̄^{(k)} = (Δ̄ ⊗ 1^{⊗k-2}) ∘ Δ̄^{(k-1)}. Δ̄ has degree 0, so no
    /// Koszul signs appear.
    pub fn iterated_reduced_diagonal(
        &self,
        x: &Element<R>,
        k: usize,
    ) -> Result<Vec<(R::Elem, Vec<Pos>)>> {
        assert!(k >= 1);
        let mut terms: Vec<(R::Elem, Vec<Pos>)> = x
            .terms
            .iter()
            .map(|(p, c)| (c.clone(), vec![*p]))
            .collect();
        for _ in 1..k {
            let mut next = Vec::new();
            for (c, word) in &terms {
                let head: Element<R> = Element::single(word[0].0, word[0].1, c.clone(), &self.ring);
                for (tc, p1, p2) in self.reduced_diagonal(&head)? {
                    let mut w = vec![p1, p2];
                    w.extend_from_slice(&word[1..]);
                    next.push((tc, w));
                }
            }
            terms = next;
        }
        Ok(terms)
    }

    /// Check that iterated reduced diagonals vanish within `cap` steps on
    /// every basis element.
    pub fn check_conilpotent(&self, cap: usize) -> Result<()> {
        for (d, i) in self.module.positions() {
            let x: Element<R> = Element::basis(d, i, &self.ring);
            let mut k = 1usize;
            loop {
                let t = self.iterated_reduced_diagonal(&x, k)?;
                if t.is_empty() {
                    break;
                }
                k += 1;
                if k > cap {
                    return Err(AlgError::AxiomViolation {
                        axiom: "conilpotency".into(),
                        witness: format!("{} in degree {d}", self.module.label(d, i)),
                    });
                }
            }
        }
        Ok(())
    }

    fn basis_pairs_in_window(&self) -> Vec<(Pos, Pos)> {
        let mut out = Vec::new();
        for p1 in self.module.positions() {
            for p2 in self.module.positions() {
                if self.window().contains(p1.0 + p2.0) {
                    out.push((p1, p2));
                }
            }
        }
        out
    }

    pub fn check_associativity(&self) -> Result<()> {
        for (p1, p2) in self.basis_pairs_in_window() {
            for p3 in self.module.positions() {
                if !self.window().contains(p1.0 + p2.0 + p3.0) {
                    continue;
                }
                let a: Element<R> = Element::basis(p1.0, p1.1, &self.ring);
                let b: Element<R> = Element::basis(p2.0, p2.1, &self.ring);
                let c: Element<R> = Element::basis(p3.0, p3.1, &self.ring);
                let left = self.product(&self.product(&a, &b)?, &c)?;
                let right = self.product(&a, &self.product(&b, &c)?)?;
                if left != right {
                    return Err(AlgError::AxiomViolation {
                        axiom: "associativity".into(),
                        witness: format!(
                            "({}, {}, {})",
                            self.module.label(p1.0, p1.1),
                            self.module.label(p2.0, p2.1),
                            self.module.label(p3.0, p3.1)
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn check_coassociativity(&self) -> Result<()> {
        for (d, i) in self.module.positions() {
            let x: Element<R> = Element::basis(d, i, &self.ring);
            let mut left: BTreeMap<(Pos, Pos, Pos), R::Elem> = BTreeMap::new();
            let mut right: BTreeMap<(Pos, Pos, Pos), R::Elem> = BTreeMap::new();
            for (c, p1, p2) in self.reduced_diagonal(&x)? {
                let head: Element<R> = Element::basis(p1.0, p1.1, &self.ring);
                for (c2, q1, q2) in self.reduced_diagonal(&head)? {
                    let v = self.ring.mul(&c, &c2);
                    let e = left.entry((q1, q2, p2)).or_insert_with(|| self.ring.zero());
                    *e = self.ring.add(e, &v);
                }
                let tail: Element<R> = Element::basis(p2.0, p2.1, &self.ring);
                for (c2, q1, q2) in self.reduced_diagonal(&tail)? {
                    let v = self.ring.mul(&c, &c2);
                    let e = right.entry((p1, q1, q2)).or_insert_with(|| self.ring.zero());
                    *e = self.ring.add(e, &v);
                }
            }
            left.retain(|_, c| !self.ring.is_zero(c));
            right.retain(|_, c| !self.ring.is_zero(c));
            if left != right {
                return Err(AlgError::AxiomViolation {
                    axiom: "coassociativity".into(),
                    witness: format!("{} in degree {d}", self.module.label(d, i)),
                });
            }
        }
        Ok(())
    }

    /// Leibniz rule for the product and the coderivation rule for the
    /// reduced diagonal, both against the stored differential.
    pub fn check_differential_compatibility(&self) -> Result<()> {
        if self.is_algebra() {
            for (p1, p2) in self.basis_pairs_in_window() {
                let a: Element<R> = Element::basis(p1.0, p1.1, &self.ring);
                let b: Element<R> = Element::basis(p2.0, p2.1, &self.ring);
                let lhs = self.differential(&self.product(&a, &b)?);
                let rhs = self.product(&self.differential(&a), &b)?.add(
                    &self.ring,
                    &self
                        .product(&a, &self.differential(&b))?
                        .scale(&self.ring, &self.ring.sign_one(p1.0)),
                );
                if lhs != rhs {
                    return Err(AlgError::AxiomViolation {
                        axiom: "Leibniz rule".into(),
                        witness: format!(
                            "({}, {})",
                            self.module.label(p1.0, p1.1),
                            self.module.label(p2.0, p2.1)
                        ),
                    });
                }
            }
        }
        if self.is_coalgebra() {
            for (d, i) in self.module.positions() {
                let x: Element<R> = Element::basis(d, i, &self.ring);
                let mut lhs: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
                for (c, p1, p2) in self.reduced_diagonal(&self.differential(&x))? {
                    let e = lhs.entry((p1, p2)).or_insert_with(|| self.ring.zero());
                    *e = self.ring.add(e, &c);
                }
                let mut rhs: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
                for (c, p1, p2) in self.reduced_diagonal(&x)? {
                    let head: Element<R> = Element::basis(p1.0, p1.1, &self.ring);
                    for (q, qc) in self.differential(&head).terms {
                        let v = self.ring.mul(&c, &qc);
                        let e = rhs.entry((q, p2)).or_insert_with(|| self.ring.zero());
                        *e = self.ring.add(e, &v);
                    }
                    let tail: Element<R> = Element::basis(p2.0, p2.1, &self.ring);
                    for (q, qc) in self.differential(&tail).terms {
                        let v = self.ring.signed(&self.ring.mul(&c, &qc), p1.0);
                        let e = rhs.entry((p1, q)).or_insert_with(|| self.ring.zero());
                        *e = self.ring.add(e, &v);
                    }
                }
                lhs.retain(|_, c| !self.ring.is_zero(c));
                rhs.retain(|_, c| !self.ring.is_zero(c));
                if lhs != rhs {
                    return Err(AlgError::AxiomViolation {
                        axiom: "coderivation rule".into(),
                        witness: format!("{} in degree {d}", self.module.label(d, i)),
                    });
                }
            }
        }
        Ok(())
    }

    /// Hopf compatibility Δ(xy) = Δ(x)Δ(y) on all basis pairs with
    /// products in the window.
    pub fn check_hopf_compatibility(&self) -> Result<()> {
        for (p1, p2) in self.basis_pairs_in_window() {
            let x: Element<R> = Element::basis(p1.0, p1.1, &self.ring);
            let y: Element<R> = Element::basis(p2.0, p2.1, &self.ring);
            if self.hopf_defect(&x, p1.0, &y, p2.0)?.is_some() {
                return Err(AlgError::AxiomViolation {
                    axiom: "Hopf compatibility".into(),
                    witness: format!(
                        "({}, {})",
                        self.module.label(p1.0, p1.1),
                        self.module.label(p2.0, p2.1)
                    ),
                });
            }
        }
        Ok(())
    }

    /// Difference between Δ̄(xy) and the reduced part of Δ(x)Δ(y) for
    /// homogeneous reduced x, y; `None` when they agree.
    #[allow(clippy::type_complexity)]
    pub fn hopf_defect(
        &self,
        x: &Element<R>,
        xdeg: i64,
        y: &Element<R>,
        ydeg: i64,
    ) -> Result<Option<Vec<PairTerm<R>>>> {
        let ring = self.ring.clone();
        let mut expected: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        fn add<R: Ring>(
            ring: &R,
            coeff: R::Elem,
            a: &Element<R>,
            b: &Element<R>,
            acc: &mut BTreeMap<(Pos, Pos), R::Elem>,
        ) {
            if ring.is_zero(&coeff) {
                return;
            }
            for (pa, ca) in &a.terms {
                for (pb, cb) in &b.terms {
                    let v = ring.mul(&coeff, &ring.mul(ca, cb));
                    let e = acc.entry((*pa, *pb)).or_insert_with(|| ring.zero());
                    *e = ring.add(e, &v);
                }
            }
        }
        // x⊗y and (-1)^{|x||y|} y⊗x
        add(&ring, ring.one(), x, y, &mut expected);
        add(&ring, ring.sign_one(xdeg * ydeg), y, x, &mut expected);
        let dy = self.reduced_diagonal(y)?;
        let dx = self.reduced_diagonal(x)?;
        for (c, q1, q2) in &dy {
            let yp: Element<R> = Element::basis(q1.0, q1.1, &ring);
            let ypp: Element<R> = Element::basis(q2.0, q2.1, &ring);
            // (x⊗1)(y'⊗y'') = xy'⊗y''
            add(&ring, c.clone(), &self.product(x, &yp)?, &ypp, &mut expected);
            // (1⊗x)(y'⊗y'') = (-1)^{|x||y'|} y'⊗xy''
            add(
                &ring,
                ring.signed(c, xdeg * q1.0),
                &yp,
                &self.product(x, &ypp)?,
                &mut expected,
            );
        }
        for (c, p1m, p2m) in &dx {
            let xp: Element<R> = Element::basis(p1m.0, p1m.1, &ring);
            let xpp: Element<R> = Element::basis(p2m.0, p2m.1, &ring);
            // (x'⊗x'')(y⊗1) = (-1)^{|x''||y|} x'y⊗x''
            add(
                &ring,
                ring.signed(c, p2m.0 * ydeg),
                &self.product(&xp, y)?,
                &xpp,
                &mut expected,
            );
            // (x'⊗x'')(1⊗y) = x'⊗x''y
            add(&ring, c.clone(), &xp, &self.product(&xpp, y)?, &mut expected);
            // (x'⊗x'')(y'⊗y'') = (-1)^{|x''||y'|} x'y'⊗x''y''
            for (c2, q1, q2) in &dy {
                let yp: Element<R> = Element::basis(q1.0, q1.1, &ring);
                let ypp: Element<R> = Element::basis(q2.0, q2.1, &ring);
                let coeff = ring.signed(&ring.mul(c, c2), p2m.0 * q1.0);
                add(
                    &ring,
                    coeff,
                    &self.product(&xp, &yp)?,
                    &self.product(&xpp, &ypp)?,
                    &mut expected,
                );
            }
        }
        let mut actual: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        for (c, p1m, p2m) in self.reduced_diagonal(&self.product(x, y)?)? {
            let e = actual.entry((p1m, p2m)).or_insert_with(|| ring.zero());
            *e = ring.add(e, &c);
        }
        expected.retain(|_, c| !ring.is_zero(c));
        actual.retain(|_, c| !ring.is_zero(c));
        if expected == actual {
            Ok(None)
        } else {
            let mut defect = Vec::new();
            for (k, c) in &expected {
                let a = actual.get(k).cloned().unwrap_or_else(|| ring.zero());
                let diff = ring.sub(&a, c);
                if !ring.is_zero(&diff) {
                    defect.push((diff, k.0, k.1));
                }
            }
            for (k, c) in &actual {
                if !expected.contains_key(k) {
                    defect.push((c.clone(), k.0, k.1));
                }
            }
            Ok(Some(defect))
        }
    }

    pub fn check_commutative(&self) -> Result<()> {
        for (p1, p2) in self.basis_pairs_in_window() {
            let a: Element<R> = Element::basis(p1.0, p1.1, &self.ring);
            let b: Element<R> = Element::basis(p2.0, p2.1, &self.ring);
            let xy = self.product(&a, &b)?;
            let yx = self
                .product(&b, &a)?
                .scale(&self.ring, &self.ring.sign_one(p1.0 * p2.0));
            if xy != yx {
                return Err(AlgError::AxiomViolation {
                    axiom: "commutativity".into(),
                    witness: format!(
                        "({}, {})",
                        self.module.label(p1.0, p1.1),
                        self.module.label(p2.0, p2.1)
                    ),
                });
            }
        }
        Ok(())
    }

    /// The underlying chain complex.
    pub fn complex(&self) -> crate::graded::ChainComplex<R> {
        crate::graded::ChainComplex::new(self.ring.clone(), self.module.clone(), self.d.clone())
    }

    /// Run every applicable axiom check.
    pub fn validate(&self, conilpotency_cap: usize) -> Result<()> {
        self.complex().check_dd_zero()?;
        self.check_differential_compatibility()?;
        if self.is_algebra() {
            self.check_associativity()?;
        }
        if self.is_coalgebra() {
            self.check_coassociativity()?;
            self.check_conilpotent(conilpotency_cap)?;
        }
        if self.is_algebra() && self.is_coalgebra() {
            self.check_hopf_compatibility()?;
        }
        Ok(())
    }
}

/// Degreewise linear dual with transposed structure constants and Koszul
/// signs: (df)(x) = -(-1)^{|f|} f(dx), pairing ⟨f⊗g, x⊗y⟩ =
/// (-1)^{|g||x|} f(x)g(y).
pub fn dualize<R: Ring>(x: &PresentedBialgebra<R>) -> Result<PresentedBialgebra<R>> {
    let ring = x.ring.clone();
    let window = Window::new(-x.window().max, -x.window().min);
    let mut module = GradedModule::new(window);
    // dual basis position of (d, i) is (-d, i); per-degree order is kept
    for (d, i) in x.module.positions() {
        let idx = module.add_basis_label(-d, format!("{}^", x.module.label(d, i)))?;
        debug_assert_eq!(idx, i);
    }
    let mut dmap = LinearMap::zero(-1);
    for (sd, si) in x.module.positions() {
        // f = dual of (sd, si); df pairs against source degree sd + 1
        let mut col = Element::zero();
        for (td, ti) in x.module.positions() {
            if td != sd + 1 {
                continue;
            }
            let image = x.d.column(td, ti);
            if let Some(c) = image.terms.get(&(sd, si)) {
                let v = ring.neg(&ring.signed(c, sd));
                col.add_term(&ring, -td, ti, v);
            }
        }
        dmap.set_column(-sd, si, col);
    }
    // product on the dual from the coproduct
    let product = match &x.coproduct {
        None => None,
        Some(cop) => {
            let mut table: BTreeMap<(Pos, Pos), Element<R>> = BTreeMap::new();
            for (z, terms) in cop {
                for (c, p1, p2) in terms {
                    let f = (-p1.0, p1.1);
                    let g = (-p2.0, p2.1);
                    if !window.contains(f.0 + g.0) {
                        continue;
                    }
                    let sign = ring.signed(c, g.0 * p1.0);
                    table
                        .entry((f, g))
                        .or_insert_with(Element::zero)
                        .add_term(&ring, -z.0, z.1, sign);
                }
            }
            // every in-window pair needs an entry, possibly zero
            for p1 in module.positions() {
                for p2 in module.positions() {
                    if window.contains(p1.0 + p2.0) {
                        table.entry((p1, p2)).or_insert_with(Element::zero);
                    }
                }
            }
            Some(table)
        }
    };
    // coproduct on the dual from the product
    let coproduct = match &x.product {
        None => None,
        Some(prod) => {
            let mut acc: BTreeMap<Pos, BTreeMap<(Pos, Pos), R::Elem>> = BTreeMap::new();
            for ((px, py), e) in prod {
                for (z, c) in &e.terms {
                    let f = (-px.0, px.1);
                    let g = (-py.0, py.1);
                    let sign = ring.signed(c, g.0 * px.0);
                    let m = acc.entry((-z.0, z.1)).or_default();
                    let slot = m.entry((f, g)).or_insert_with(|| ring.zero());
                    *slot = ring.add(slot, &sign);
                }
            }
            let mut table: BTreeMap<Pos, Vec<PairTerm<R>>> = BTreeMap::new();
            for (z, m) in acc {
                let terms: Vec<PairTerm<R>> = m
                    .into_iter()
                    .filter(|(_, c)| !ring.is_zero(c))
                    .map(|((a, b), c)| (c, a, b))
                    .collect();
                table.insert(z, terms);
            }
            for p in module.positions() {
                table.entry(p).or_default();
            }
            Some(table)
        }
    };
    Ok(PresentedBialgebra {
        ring,
        module,
        d: dmap,
        product,
        coproduct,
    })
}

fn binomial_coeff<R: Ring>(ring: &R, n: u64, k: u64) -> R::Elem {
    let mut acc = ring.one();
    // C(n, k) = Π (n-k+i)/i computed as an exact integer product first
    let mut num = 1i128;
    let mut den = 1i128;
    for i in 1..=k {
        num *= (n - k + i) as i128;
        den *= i as i128;
    }
    let q = num / den;
    debug_assert_eq!(num % den, 0);
    // fold into the ring through repeated i64 chunks (desk scale: fits)
    acc = ring.mul(&acc, &ring.from_int(q as i64));
    acc
}

/// The tensor Hopf algebra T(V) on primitive generators: words as basis,
/// concatenation product, unshuffle coproduct. Truncated by the window and
/// an explicit maximum word length.
pub fn tensor_hopf<R: Ring>(
    ring: R,
    generators: &[(&str, i64)],
    window: Window,
    max_len: usize,
) -> Result<PresentedBialgebra<R>> {
    let mut module = GradedModule::new(window);
    let mut words: Vec<(Vec<usize>, i64)> = Vec::new();
    let mut layer: Vec<(Vec<usize>, i64)> = vec![(vec![], 0)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, deg) in &layer {
            for (gi, (_, gd)) in generators.iter().enumerate() {
                let nd = deg + gd;
                if !window.contains(nd) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(gi);
                next.push((nw, nd));
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    words.sort_by(|a, b| (a.1, a.0.len(), &a.0).cmp(&(b.1, b.0.len(), &b.0)));
    let mut pos_of: BTreeMap<Vec<usize>, Pos> = BTreeMap::new();
    for (w, deg) in &words {
        let label = w
            .iter()
            .map(|&gi| generators[gi].0.to_string())
            .collect::<Vec<_>>()
            .join("·");
        let idx = module.add_basis_label(*deg, label)?;
        pos_of.insert(w.clone(), (*deg, idx));
    }
    let mut product: BTreeMap<(Pos, Pos), Element<R>> = BTreeMap::new();
    for (w1, p1) in &pos_of {
        for (w2, p2) in &pos_of {
            if !window.contains(p1.0 + p2.0) {
                continue;
            }
            let mut cat = w1.clone();
            cat.extend_from_slice(w2);
            let img = match pos_of.get(&cat) {
                Some(p) => Element::basis(p.0, p.1, &ring),
                None => {
                    return Err(AlgError::Other(format!(
                        "word length cap {max_len} too small for in-window products"
                    )))
                }
            };
            product.insert((*p1, *p2), img);
        }
    }
    // unshuffle coproduct with Koszul signs
    let mut coproduct: BTreeMap<Pos, Vec<PairTerm<R>>> = BTreeMap::new();
    for (w, p) in &pos_of {
        let n = w.len();
        let degs: Vec<i64> = w.iter().map(|&gi| generators[gi].1).collect();
        let mut terms: Vec<PairTerm<R>> = Vec::new();
        if n >= 2 {
            for mask in 1..(1u32 << n) - 1 {
                let left: Vec<usize> =
                    (0..n).filter(|b| mask >> b & 1 == 1).map(|b| w[b]).collect();
                let right: Vec<usize> =
                    (0..n).filter(|b| mask >> b & 1 == 0).map(|b| w[b]).collect();
                let (Some(pl), Some(pr)) = (pos_of.get(&left), pos_of.get(&right)) else {
                    return Err(AlgError::Other(
                        "window too small for unshuffle components".into(),
                    ));
                };
                // Koszul sign: letters sent right jump over later letters
                // sent left
                let mut exp = 0i64;
                for i in 0..n {
                    for j in (i + 1)..n {
                        if mask >> i & 1 == 0 && mask >> j & 1 == 1 {
                            exp += degs[i] * degs[j];
                        }
                    }
                }
                terms.push((ring.sign_one(exp), *pl, *pr));
            }
        }
        // merge duplicate pairs (equal-letter shuffles can repeat)
        let mut acc: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        for (c, a, b) in terms {
            let e = acc.entry((a, b)).or_insert_with(|| ring.zero());
            *e = ring.add(e, &c);
        }
        let merged: Vec<PairTerm<R>> = acc
            .into_iter()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|((a, b), c)| (c, a, b))
            .collect();
        coproduct.insert(*p, merged);
    }
    Ok(PresentedBialgebra {
        ring,
        module,
        d: LinearMap::zero(-1),
        product: Some(product),
        coproduct: Some(coproduct),
    })
}

/// The divided-power Hopf algebra on one generator of even degree:
/// basis g_1, g_2, ... with |g_n| = n·degree, g_m·g_n = C(m+n, n) g_{m+n},
/// Δ̄ g_n = Σ_{0<i<n} g_i ⊗ g_{n-i}.
pub fn divided_power_hopf<R: Ring>(
    ring: R,
    degree: i64,
    window: Window,
) -> Result<PresentedBialgebra<R>> {
    assert!(degree >= 2 && degree % 2 == 0, "even positive degree");
    let max_n = (window.max / degree).max(0) as u64;
    assert!(max_n >= 1, "window too small to hold a generator");
    let mut module = GradedModule::new(window);
    let mut pos: Vec<Pos> = Vec::new();
    for n in 1..=max_n {
        let idx = module.add_basis_label(n as i64 * degree, format!("g{n}"))?;
        pos.push((n as i64 * degree, idx));
    }
    let mut product = BTreeMap::new();
    for m in 1..=max_n {
        for n in 1..=max_n {
            if !window.contains((m + n) as i64 * degree) {
                continue;
            }
            let c = binomial_coeff(&ring, m + n, n);
            let img = Element::single(
                pos[(m + n - 1) as usize].0,
                pos[(m + n - 1) as usize].1,
                c,
                &ring,
            );
            product.insert((pos[(m - 1) as usize], pos[(n - 1) as usize]), img);
        }
    }
    let mut coproduct: BTreeMap<Pos, Vec<PairTerm<R>>> = BTreeMap::new();
    coproduct.insert(pos[0], Vec::new());
    for n in 2..=max_n {
        let mut terms = Vec::new();
        for i in 1..n {
            terms.push((ring.one(), pos[(i - 1) as usize], pos[(n - i - 1) as usize]));
        }
        coproduct.insert(pos[(n - 1) as usize], terms);
    }
    Ok(PresentedBialgebra {
        ring,
        module,
        d: LinearMap::zero(-1),
        product: Some(product),
        coproduct: Some(coproduct),
    })
}

/// The truncated polynomial algebra R[v]/v^{t+1} on one even generator, as
/// an algebra only: a commutative brace-trivial input for the bar
/// construction, with nonzero merge terms in its bar differential.
pub fn truncated_polynomial<R: Ring>(
    ring: R,
    degree: i64,
    truncation: u64,
    window: Window,
) -> Result<PresentedBialgebra<R>> {
    assert!(degree % 2 == 0, "even degree keeps signs trivial");
    let mut module = GradedModule::new(window);
    let mut pos: Vec<Pos> = Vec::new();
    for n in 1..=truncation {
        let d = n as i64 * degree;
        if !window.contains(d) {
            break;
        }
        let idx = module.add_basis_label(d, format!("v^{n}"))?;
        pos.push((d, idx));
    }
    let stored = pos.len() as u64;
    let mut product = BTreeMap::new();
    for m in 1..=stored {
        for n in 1..=stored {
            if !window.contains((m + n) as i64 * degree) {
                continue;
            }
            let img = if m + n <= truncation.min(stored) {
                Element::basis(
                    pos[(m + n - 1) as usize].0,
                    pos[(m + n - 1) as usize].1,
                    &ring,
                )
            } else if m + n <= truncation {
                return Err(AlgError::Other(
                    "window cuts the truncated polynomial below its truncation".into(),
                ));
            } else {
                Element::zero()
            };
            product.insert((pos[(m - 1) as usize], pos[(n - 1) as usize]), img);
        }
    }
    Ok(PresentedBialgebra {
        ring,
        module,
        d: LinearMap::zero(-1),
        product: Some(product),
        coproduct: None,
    })
}

/// A commutative presented algebra viewed as a brace algebra with all
/// braces zero.
#[derive(Clone, Debug)]
pub struct TrivialBraceAlgebra<R: Ring> {
    pub pres: std::rc::Rc<PresentedBialgebra<R>>,
}

impl<R: Ring> TrivialBraceAlgebra<R> {
    pub fn new(pres: std::rc::Rc<PresentedBialgebra<R>>) -> Result<Self> {
        pres.check_commutative()?;
        Ok(TrivialBraceAlgebra { pres })
    }
}

impl<R: Ring> crate::brace::S2Algebra<R> for TrivialBraceAlgebra<R> {
    fn ring(&self) -> R {
        self.pres.ring.clone()
    }
    fn module(&self) -> &GradedModule {
        &self.pres.module
    }
    fn differential(&self, x: &Element<R>) -> Result<Element<R>> {
        Ok(self.pres.differential(x))
    }
    fn product(&self, x: &Element<R>, y: &Element<R>) -> Result<Element<R>> {
        self.pres.product(x, y)
    }
    fn brace(&self, _x: &Element<R>, _args: &[Element<R>]) -> Result<Element<R>> {
        Ok(Element::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{QQ, ZZ};

    #[test]
    fn tensor_hopf_validates() {
        let t = tensor_hopf(ZZ, &[("v", 2)], Window::new(0, 8), 4).unwrap();
        t.validate(8).unwrap();
        assert_eq!(t.module.rank(2), 1);
        assert_eq!(t.module.rank(4), 1);
        assert_eq!(t.module.rank(6), 1);
        // Δ̄(v·v) = 2·(v⊗v)? no: unshuffles of (v,v): two splittings, both
        // v⊗v, even degree so both +1
        let p = t.module.find(4, "v·v").unwrap();
        let terms = t.reduced_diagonal(&Element::basis(4, p, &ZZ)).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, ZZ.from_int(2));
    }

    #[test]
    fn tensor_hopf_two_generators_odd() {
        let t = tensor_hopf(ZZ, &[("a", 1), ("b", 1)], Window::new(0, 4), 4).unwrap();
        t.validate(8).unwrap();
        // Δ̄(a·b) = a⊗b + (-1)^{|a||b|} b⊗a = a⊗b − b⊗a
        let ab = t.module.find(2, "a·b").unwrap();
        let terms = t.reduced_diagonal(&Element::basis(2, ab, &ZZ)).unwrap();
        assert_eq!(terms.len(), 2);
        let a = (1i64, t.module.find(1, "a").unwrap());
        let b = (1i64, t.module.find(1, "b").unwrap());
        for (c, p1, p2) in terms {
            if p1 == a && p2 == b {
                assert_eq!(c, ZZ.one());
            } else {
                assert_eq!((p1, p2), (b, a));
                assert_eq!(c, ZZ.from_int(-1));
            }
        }
    }

    #[test]
    fn divided_power_validates() {
        let g = divided_power_hopf(QQ, 2, Window::new(0, 10)).unwrap();
        g.validate(8).unwrap();
        g.check_commutative().unwrap();
        // g1·g1 = 2 g2
        let p1 = g.module.find(2, "g1").unwrap();
        let x: Element<QQ> = Element::basis(2, p1, &QQ);
        let sq = g.product(&x, &x).unwrap();
        let p2 = g.module.find(4, "g2").unwrap();
        assert_eq!(sq.terms[&(4, p2)], QQ.from_int(2));
    }

    #[test]
    fn truncated_polynomial_nilpotence() {
        let a = truncated_polynomial(ZZ, 2, 2, Window::new(0, 12)).unwrap();
        a.validate(8).unwrap();
        a.check_commutative().unwrap();
        let v = a.module.find(2, "v^1").unwrap();
        let x: Element<ZZ> = Element::basis(2, v, &ZZ);
        let x2 = a.product(&x, &x).unwrap();
        assert!(!x2.is_zero());
        let x3 = a.product(&x2, &x).unwrap();
        assert!(x3.is_zero());
    }

    #[test]
    fn dual_is_involutive_on_tensor_hopf() {
        let t = tensor_hopf(ZZ, &[("v", 2)], Window::new(0, 6), 3).unwrap();
        let d = dualize(&t).unwrap();
        d.validate(8).unwrap();
        let dd = dualize(&d).unwrap();
        assert_eq!(dd.module.window, t.module.window);
        for (k, v) in t.product.as_ref().unwrap() {
            assert_eq!(&dd.product.as_ref().unwrap()[k], v, "at {k:?}");
        }
        for (k, v) in t.coproduct.as_ref().unwrap() {
            assert_eq!(&dd.coproduct.as_ref().unwrap()[k], v, "at {k:?}");
        }
    }

    #[test]
    fn dual_of_differential_squares_to_zero() {
        // d(b) = 2a in degrees 2 -> 1
        let mut module = GradedModule::new(Window::new(0, 3));
        let ia = module.add_basis_label(1, "a").unwrap();
        let ib = module.add_basis_label(2, "b").unwrap();
        let mut d = LinearMap::zero(-1);
        d.set_column(2, ib, Element::single(1, ia, ZZ.from_int(2), &ZZ));
        let x = PresentedBialgebra {
            ring: ZZ,
            module,
            d,
            product: None,
            coproduct: None,
        };
        let xd = dualize(&x).unwrap();
        xd.complex().check_dd_zero().unwrap();
        let col = xd.d.column(-1, ia);
        assert_eq!(col.terms.len(), 1);
        let (&(td, _), c) = col.terms.iter().next().unwrap();
        assert_eq!(td, -2);
        assert_eq!(c * c, ZZ.from_int(4));
    }

    #[test]
    fn non_coassociative_is_rejected() {
        // Δ̄c = a⊗b only, with Δ̄a = b⊗b: (Δ̄⊗1)Δ̄c has a term, (1⊗Δ̄)Δ̄c
        // does not
        let mut module = GradedModule::new(Window::new(0, 6));
        let ia = module.add_basis_label(2, "a").unwrap();
        let ib = module.add_basis_label(1, "b").unwrap();
        let ic = module.add_basis_label(3, "c").unwrap();
        let mut coproduct: BTreeMap<Pos, Vec<PairTerm<ZZ>>> = BTreeMap::new();
        coproduct.insert((3, ic), vec![(ZZ.one(), (2, ia), (1, ib))]);
        coproduct.insert((2, ia), vec![(ZZ.one(), (1, ib), (1, ib))]);
        coproduct.insert((1, ib), vec![]);
        let x = PresentedBialgebra {
            ring: ZZ,
            module,
            d: LinearMap::zero(-1),
            product: None,
            coproduct: Some(coproduct),
        };
        let err = x.check_coassociativity().unwrap_err();
        assert!(matches!(err, AlgError::AxiomViolation { .. }));
    }
}
