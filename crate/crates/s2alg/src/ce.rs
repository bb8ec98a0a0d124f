//! Graded Lie algebras, universal enveloping algebras with a straightened
//! PBW basis, the Chevalley–Eilenberg coalgebra inside the bar
//! construction, its dual commutative algebra, and the comparison twisting
//! morphism.
//!
//! The ground ring must contain 1/2.

use crate::barcobar::{BarHopf, HopfLike};
use crate::brace::S2Algebra;
use crate::error::{AlgError, Result};
use crate::graded::{koszul_permutation_sign, Element, GradedModule, LinearMap, Window};
use crate::presented::{PairTerm, Pos, PresentedBialgebra};
use crate::ring::Ring;
use std::collections::BTreeMap;
use std::rc::Rc;

/// A connected, nonnegatively graded, finite-type differential graded Lie
/// algebra presented by structure constants on an ordered basis.
#[derive(Clone, Debug)]
pub struct GradedLieAlgebra<R: Ring> {
    pub ring: R,
    pub basis: Vec<(String, i64)>,
    /// [x_i, x_j] = Σ c·x_k, stored for all ordered pairs (i, j).
    pub bracket: BTreeMap<(usize, usize), Vec<(R::Elem, usize)>>,
    pub differential: BTreeMap<usize, Vec<(R::Elem, usize)>>,
}

impl<R: Ring> GradedLieAlgebra<R> {
    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].1
    }

    fn bracket_of(&self, i: usize, j: usize) -> Vec<(R::Elem, usize)> {
        self.bracket.get(&(i, j)).cloned().unwrap_or_default()
    }

    fn d_of(&self, i: usize) -> Vec<(R::Elem, usize)> {
        self.differential.get(&i).cloned().unwrap_or_default()
    }

    /// Graded antisymmetry, Jacobi, derivation differential, degree
    /// positivity, and availability of 1/2.
    pub fn validate(&self) -> Result<()> {
        let ring = &self.ring;
        let two = ring.from_int(2);
        if ring.inv(&two).is_none() {
            return Err(AlgError::Other(format!(
                "1/2 must be invertible in {}",
                ring.name()
            )));
        }
        for (i, (l, d)) in self.basis.iter().enumerate() {
            if *d < 1 {
                return Err(AlgError::AxiomViolation {
                    axiom: "connected positive grading".into(),
                    witness: format!("{l} has degree {d}"),
                });
            }
            let _ = i;
        }
        let n = self.basis.len();
        // bracket and differential terms must have the right degrees
        for ((i, j), terms) in &self.bracket {
            for (c, k) in terms {
                if !ring.is_zero(c) && self.degree(*k) != self.degree(*i) + self.degree(*j) {
                    return Err(AlgError::AxiomViolation {
                        axiom: "bracket grading".into(),
                        witness: format!(
                            "[{}, {}] hits {}",
                            self.basis[*i].0, self.basis[*j].0, self.basis[*k].0
                        ),
                    });
                }
            }
        }
        for (i, terms) in &self.differential {
            for (c, k) in terms {
                if !ring.is_zero(c) && self.degree(*k) != self.degree(*i) - 1 {
                    return Err(AlgError::AxiomViolation {
                        axiom: "differential grading".into(),
                        witness: self.basis[*i].0.clone(),
                    });
                }
            }
        }
        let combine = |terms: &[(R::Elem, usize)]| -> BTreeMap<usize, R::Elem> {
            let mut m = BTreeMap::new();
            for (c, k) in terms {
                let e = m.entry(*k).or_insert_with(|| ring.zero());
                *e = ring.add(e, c);
            }
            m.retain(|_, c| !ring.is_zero(c));
            m
        };
        // antisymmetry
        for i in 0..n {
            for j in 0..n {
                let lhs = combine(&self.bracket_of(i, j));
                let sign = self
                    .ring
                    .sign_one(self.degree(i) * self.degree(j) + 1);
                let rhs = combine(
                    &self
                        .bracket_of(j, i)
                        .into_iter()
                        .map(|(c, k)| (ring.mul(&c, &sign), k))
                        .collect::<Vec<_>>(),
                );
                if lhs != rhs {
                    return Err(AlgError::AxiomViolation {
                        axiom: "graded antisymmetry".into(),
                        witness: format!("({}, {})", self.basis[i].0, self.basis[j].0),
                    });
                }
            }
        }
        // Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut lhs: BTreeMap<usize, R::Elem> = BTreeMap::new();
                    for (c, k) in self.bracket_of(y, z) {
                        for (c2, m) in self.bracket_of(x, k) {
                            let e = lhs.entry(m).or_insert_with(|| ring.zero());
                            *e = ring.add(e, &ring.mul(&c, &c2));
                        }
                    }
                    let mut rhs: BTreeMap<usize, R::Elem> = BTreeMap::new();
                    for (c, k) in self.bracket_of(x, y) {
                        for (c2, m) in self.bracket_of(k, z) {
                            let e = rhs.entry(m).or_insert_with(|| ring.zero());
                            *e = ring.add(e, &ring.mul(&c, &c2));
                        }
                    }
                    let s = ring.sign_one(self.degree(x) * self.degree(y));
                    for (c, k) in self.bracket_of(x, z) {
                        for (c2, m) in self.bracket_of(y, k) {
                            let e = rhs.entry(m).or_insert_with(|| ring.zero());
                            *e = ring.add(e, &ring.mul(&s, &ring.mul(&c, &c2)));
                        }
                    }
                    lhs.retain(|_, c| !ring.is_zero(c));
                    rhs.retain(|_, c| !ring.is_zero(c));
                    if lhs != rhs {
                        return Err(AlgError::AxiomViolation {
                            axiom: "Jacobi identity".into(),
                            witness: format!(
                                "({}, {}, {})",
                                self.basis[x].0, self.basis[y].0, self.basis[z].0
                            ),
                        });
                    }
                }
            }
        }
        // d is a bracket derivation and squares to zero
        for i in 0..n {
            let mut dd: BTreeMap<usize, R::Elem> = BTreeMap::new();
            for (c, k) in self.d_of(i) {
                for (c2, m) in self.d_of(k) {
                    let e = dd.entry(m).or_insert_with(|| ring.zero());
                    *e = ring.add(e, &ring.mul(&c, &c2));
                }
            }
            dd.retain(|_, c| !ring.is_zero(c));
            if !dd.is_empty() {
                return Err(AlgError::AxiomViolation {
                    axiom: "d∘d = 0 on the Lie algebra".into(),
                    witness: self.basis[i].0.clone(),
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let mut lhs: BTreeMap<usize, R::Elem> = BTreeMap::new();
                for (c, k) in self.bracket_of(i, j) {
                    for (c2, m) in self.d_of(k) {
                        let e = lhs.entry(m).or_insert_with(|| ring.zero());
                        *e = ring.add(e, &ring.mul(&c, &c2));
                    }
                }
                let mut rhs: BTreeMap<usize, R::Elem> = BTreeMap::new();
                for (c, k) in self.d_of(i) {
                    for (c2, m) in self.bracket_of(k, j) {
                        let e = rhs.entry(m).or_insert_with(|| ring.zero());
                        *e = ring.add(e, &ring.mul(&c, &c2));
                    }
                }
                let s = ring.sign_one(self.degree(i));
                for (c, k) in self.d_of(j) {
                    for (c2, m) in self.bracket_of(i, k) {
                        let e = rhs.entry(m).or_insert_with(|| ring.zero());
                        *e = ring.add(e, &ring.mul(&s, &ring.mul(&c, &c2)));
                    }
                }
                lhs.retain(|_, c| !ring.is_zero(c));
                rhs.retain(|_, c| !ring.is_zero(c));
                if lhs != rhs {
                    return Err(AlgError::AxiomViolation {
                        axiom: "differential is a bracket derivation".into(),
                        witness: format!("({}, {})", self.basis[i].0, self.basis[j].0),
                    });
                }
            }
        }
        Ok(())
    }
}

type Monomial = Vec<usize>;

fn monomial_label<R: Ring>(l: &GradedLieAlgebra<R>, m: &Monomial) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter()
        .map(|&i| l.basis[i].0.clone())
        .collect::<Vec<_>>()
        .join("·")
}

fn monomial_degree<R: Ring>(l: &GradedLieAlgebra<R>, m: &Monomial) -> i64 {
    m.iter().map(|&i| l.degree(i)).sum()
}

fn is_pbw<R: Ring>(l: &GradedLieAlgebra<R>, m: &Monomial) -> bool {
    for w in m.windows(2) {
        if w[0] > w[1] {
            return false;
        }
        if w[0] == w[1] && l.degree(w[0]) % 2 != 0 {
            return false;
        }
    }
    true
}

/// Straighten a word in the Lie basis into PBW normal form:
/// yx → (-1)^{|x||y|} xy + [y,x] on descending pairs, and xx → ½[x,x] on
/// odd-degree repeats.
fn straighten<R: Ring>(
    l: &GradedLieAlgebra<R>,
    word: &Monomial,
    coeff: &R::Elem,
) -> BTreeMap<Monomial, R::Elem> {
    let ring = &l.ring;
    let mut out: BTreeMap<Monomial, R::Elem> = BTreeMap::new();
    let mut stack: Vec<(Monomial, R::Elem)> = vec![(word.clone(), coeff.clone())];
    while let Some((w, c)) = stack.pop() {
        if ring.is_zero(&c) {
            continue;
        }
        // leftmost violation
        let mut violation = None;
        for p in 0..w.len().saturating_sub(1) {
            if w[p] > w[p + 1] || (w[p] == w[p + 1] && l.degree(w[p]) % 2 != 0) {
                violation = Some(p);
                break;
            }
        }
        match violation {
            None => {
                let e = out.entry(w).or_insert_with(|| ring.zero());
                *e = ring.add(e, &c);
            }
            Some(p) => {
                let (i, j) = (w[p], w[p + 1]);
                if i == j {
                    // odd square: xx = ½[x,x]
                    let half = ring.inv(&ring.from_int(2)).expect("1/2 available");
                    for (bc, k) in l.bracket_of(i, i) {
                        let mut w2 = w.clone();
                        w2.splice(p..p + 2, [k]);
                        stack.push((w2, ring.mul(&c, &ring.mul(&half, &bc))));
                    }
                } else {
                    // yx = (-1)^{|y||x|} xy + [y, x]
                    let sign = ring.sign_one(l.degree(i) * l.degree(j));
                    let mut swapped = w.clone();
                    swapped.swap(p, p + 1);
                    stack.push((swapped, ring.mul(&c, &sign)));
                    for (bc, k) in l.bracket_of(i, j) {
                        let mut w2 = w.clone();
                        w2.splice(p..p + 2, [k]);
                        stack.push((w2, ring.mul(&c, &bc)));
                    }
                }
            }
        }
    }
    out.retain(|_, c| !ring.is_zero(c));
    out
}

/// Joinability of random straightening orders: associativity of the
/// straightened product on sampled triples.
pub fn check_straightening_confluence<R: Ring>(
    l: &GradedLieAlgebra<R>,
    cutoff: i64,
) -> Result<()> {
    let ring = &l.ring;
    let n = l.basis.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if l.degree(a) + l.degree(b) + l.degree(c) > cutoff {
                    continue;
                }
                let left = {
                    let ab = straighten(l, &vec![a, b], &ring.one());
                    let mut acc: BTreeMap<Monomial, R::Elem> = BTreeMap::new();
                    for (m, mc) in ab {
                        let mut w = m.clone();
                        w.push(c);
                        for (r, rc) in straighten(l, &w, &mc) {
                            let e = acc.entry(r).or_insert_with(|| ring.zero());
                            *e = ring.add(e, &rc);
                        }
                    }
                    acc.retain(|_, x| !ring.is_zero(x));
                    acc
                };
                let right = {
                    let bc = straighten(l, &vec![b, c], &ring.one());
                    let mut acc: BTreeMap<Monomial, R::Elem> = BTreeMap::new();
                    for (m, mc) in bc {
                        let mut w = vec![a];
                        w.extend(m);
                        for (r, rc) in straighten(l, &w, &mc) {
                            let e = acc.entry(r).or_insert_with(|| ring.zero());
                            *e = ring.add(e, &rc);
                        }
                    }
                    acc.retain(|_, x| !ring.is_zero(x));
                    acc
                };
                if left != right {
                    return Err(AlgError::NonConfluentStraightening(
                        format!("({},{})·{}", l.basis[a].0, l.basis[b].0, l.basis[c].0),
                        format!("{}·({},{})", l.basis[a].0, l.basis[b].0, l.basis[c].0),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// The universal enveloping algebra within the cutoff, as a presented Hopf
/// algebra with PBW monomial basis, primitive generators, and the
/// straightened product.
pub fn enveloping<R: Ring>(
    l: &GradedLieAlgebra<R>,
    cutoff: i64,
) -> Result<PresentedBialgebra<R>> {
    l.validate()?;
    check_straightening_confluence(l, cutoff.min(12))?;
    let ring = l.ring.clone();
    let window = Window::new(0, cutoff);
    // enumerate PBW monomials of degree 1..=cutoff
    let mut monomials: Vec<Monomial> = Vec::new();
    let mut layer: Vec<Monomial> = vec![vec![]];
    loop {
        let mut next = Vec::new();
        for m in &layer {
            let start = m.last().map_or(0, |&x| x);
            for i in start..l.basis.len() {
                let mut m2 = m.clone();
                m2.push(i);
                if !is_pbw(l, &m2) {
                    continue;
                }
                if monomial_degree(l, &m2) <= cutoff {
                    next.push(m2);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        monomials.extend(next.iter().cloned());
        layer = next;
    }
    monomials.sort_by_key(|m| (monomial_degree(l, m), m.len(), m.clone()));
    let mut module = GradedModule::new(window);
    let mut pos_of: BTreeMap<Monomial, Pos> = BTreeMap::new();
    for m in &monomials {
        let d = monomial_degree(l, m);
        let idx = module.add_basis_label(d, monomial_label(l, m))?;
        pos_of.insert(m.clone(), (d, idx));
    }
    let to_element = |terms: &BTreeMap<Monomial, R::Elem>| -> Result<Element<R>> {
        let mut e = Element::zero();
        for (m, c) in terms {
            let p = pos_of
                .get(m)
                .ok_or_else(|| AlgError::WindowExceeded(monomial_degree(l, m), 0, cutoff))?;
            e.add_term(&ring, p.0, p.1, c.clone());
        }
        Ok(e)
    };
    // product by straightening
    let mut product: BTreeMap<(Pos, Pos), Element<R>> = BTreeMap::new();
    for (m1, p1) in &pos_of {
        for (m2, p2) in &pos_of {
            if !window.contains(p1.0 + p2.0) {
                continue;
            }
            let mut w = m1.clone();
            w.extend_from_slice(m2);
            let s = straighten(l, &w, &ring.one());
            product.insert((*p1, *p2), to_element(&s)?);
        }
    }
    // differential: derivation extension of d_L
    let mut dmap = LinearMap::zero(-1);
    for (m, p) in &pos_of {
        let mut col: Element<R> = Element::zero();
        let mut before = 0i64;
        for (i, &g) in m.iter().enumerate() {
            for (c, k) in l.d_of(g) {
                let mut w = m.clone();
                w[i] = k;
                let s = straighten(l, &w, &ring.signed(&c, before));
                for ((d2, i2), c2) in to_element(&s)?.terms {
                    col.add_term(&ring, d2, i2, c2);
                }
            }
            before += l.degree(g);
        }
        dmap.set_column(p.0, p.1, col);
    }
    // coproduct: generators primitive, extended multiplicatively; compute
    // Δ(m) = Π (x⊗1 + 1⊗x) with Koszul signs, keep the reduced part
    let mut coproduct: BTreeMap<Pos, Vec<PairTerm<R>>> = BTreeMap::new();
    for (m, p) in &pos_of {
        let mut pairs: Vec<(R::Elem, Monomial, Monomial)> = vec![(ring.one(), vec![], vec![])];
        for &g in m {
            let mut next = Vec::new();
            for (c, left, right) in &pairs {
                // x into the left factor: moves past the right factor's
                // degree? appended on the left word end: passes nothing on
                // the left side, but jumps over the accumulated right word
                let sign = ring.signed(c, l.degree(g) * monomial_degree(l, right));
                let mut left2 = left.clone();
                left2.push(g);
                next.push((sign, left2, right.clone()));
                // x into the right factor: no jump
                let mut right2 = right.clone();
                right2.push(g);
                next.push((c.clone(), left.clone(), right2));
            }
            pairs = next;
        }
        let mut acc: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        for (c, left, right) in pairs {
            if left.is_empty() || right.is_empty() {
                continue;
            }
            let ls = straighten(l, &left, &c);
            for (lm, lc) in ls {
                let rs = straighten(l, &right, &lc);
                for (rm, rc) in rs {
                    let lp = pos_of
                        .get(&lm)
                        .ok_or_else(|| AlgError::WindowExceeded(0, 0, cutoff))?;
                    let rp = pos_of
                        .get(&rm)
                        .ok_or_else(|| AlgError::WindowExceeded(0, 0, cutoff))?;
                    let e = acc.entry((*lp, *rp)).or_insert_with(|| ring.zero());
                    *e = ring.add(e, &rc);
                }
            }
        }
        let terms: Vec<PairTerm<R>> = acc
            .into_iter()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|((a, b), c)| (c, a, b))
            .collect();
        coproduct.insert(*p, terms);
    }
    Ok(PresentedBialgebra {
        ring,
        module,
        d: dmap,
        product: Some(product),
        coproduct: Some(coproduct),
    })
}

/// PBW dimension oracle: the graded count of monomials equals that of the
/// free graded-commutative algebra on the basis.
pub fn pbw_dimension_oracle<R: Ring>(
    l: &GradedLieAlgebra<R>,
    ul: &PresentedBialgebra<R>,
    cutoff: i64,
) -> Result<()> {
    // polynomial count: iterate generators, convolving degree series
    let mut dims = vec![0usize; cutoff as usize + 1];
    dims[0] = 1;
    for (label, d) in &l.basis {
        let _ = label;
        let step = *d as usize;
        let mut next = vec![0usize; cutoff as usize + 1];
        for (deg, &count) in dims.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let odd = *d % 2 != 0;
            let mut power = 0usize;
            loop {
                let nd = deg + power * step;
                if nd > cutoff as usize {
                    break;
                }
                next[nd] += count;
                power += 1;
                if odd && power > 1 {
                    break;
                }
            }
        }
        dims = next;
    }
    for deg in 1..=cutoff {
        let expected = dims[deg as usize];
        let got = ul.module.rank(deg);
        if expected != got {
            return Err(AlgError::AxiomViolation {
                axiom: "PBW dimension count".into(),
                witness: format!("degree {deg}: {got} monomials vs {expected} expected"),
            });
        }
    }
    Ok(())
}

/// The Chevalley–Eilenberg coalgebra: wedge words of suspended generators
/// with the differential extracted through the inclusion into the bar
/// construction of the enveloping algebra.
pub struct CeComplex<R: Ring> {
    pub ring: R,
    pub pres: PresentedBialgebra<R>,
    /// wedge words as sorted generator index lists
    pub words: BTreeMap<Pos, Vec<usize>>,
    pub inclusion: LinearMap<R>,
    pub bar: Rc<BarHopf<R>>,
}

/// An algebra wrapped for the bar construction when no brace structure is
/// wanted: braces fail loudly if anything asks for them.
struct AlgebraOnly<R: Ring> {
    pres: Rc<PresentedBialgebra<R>>,
}

impl<R: Ring> S2Algebra<R> for AlgebraOnly<R> {
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
        Err(AlgError::Other(
            "no brace structure on a plain enveloping algebra".into(),
        ))
    }
}

/// Build the CE coalgebra inside Bar(UL) up to the cutoff.
pub fn ce_complex<R: Ring>(
    l: &GradedLieAlgebra<R>,
    ul: Rc<PresentedBialgebra<R>>,
    cutoff: i64,
) -> Result<CeComplex<R>> {
    let ring = l.ring.clone();
    let window = Window::new(0, cutoff);
    let alg: Rc<dyn S2Algebra<R>> = Rc::new(AlgebraOnly { pres: ul.clone() });
    let max_len = (cutoff / (1 + l.basis.iter().map(|b| b.1).min().unwrap_or(1))).max(1) as usize;
    let bar = Rc::new(BarHopf::new(alg, window, max_len)?);
    // generator positions inside UL
    let gen_pos: Vec<Pos> = (0..l.basis.len())
        .map(|i| {
            let d = l.degree(i);
            let idx = ul.module.find(d, &l.basis[i].0)?;
            Ok((d, idx))
        })
        .collect::<Result<_>>()?;
    // wedge words: sorted index sequences, repeats only for even
    // suspension degree (|x| odd)
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    loop {
        let mut next = Vec::new();
        for w in &layer {
            let start = w.last().map_or(0, |&x| x);
            for i in start..l.basis.len() {
                if w.last() == Some(&i) && (l.degree(i) + 1) % 2 != 0 {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(i);
                let deg: i64 = w2.iter().map(|&g| l.degree(g) + 1).sum();
                if deg <= cutoff {
                    next.push(w2);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    words.sort_by_key(|w| {
        (
            w.iter().map(|&g| l.degree(g) + 1).sum::<i64>(),
            w.len(),
            w.clone(),
        )
    });
    let mut module = GradedModule::new(window);
    let mut pos_of: BTreeMap<Vec<usize>, Pos> = BTreeMap::new();
    let mut word_of: BTreeMap<Pos, Vec<usize>> = BTreeMap::new();
    for w in &words {
        let deg: i64 = w.iter().map(|&g| l.degree(g) + 1).sum();
        let label = format!(
            "Σ{}",
            w.iter()
                .map(|&g| l.basis[g].0.clone())
                .collect::<Vec<_>>()
                .join("∧Σ")
        );
        let idx = module.add_basis_label(deg, label)?;
        pos_of.insert(w.clone(), (deg, idx));
        word_of.insert((deg, idx), w.clone());
    }
    // inclusion: sum over permutations with Koszul signs on the suspended
    // degrees
    let mut inclusion = LinearMap::zero(0);
    for (w, p) in &pos_of {
        let degs: Vec<i64> = w.iter().map(|&g| l.degree(g) + 1).collect();
        let mut img: Element<R> = Element::zero();
        for perm in permutations(w.len()) {
            // movement[i] = target slot of factor i
            let mut movement = vec![0usize; w.len()];
            for (slot, &src) in perm.iter().enumerate() {
                movement[src] = slot;
            }
            let sign = koszul_permutation_sign(&degs, &movement);
            let letters: Vec<Pos> = perm.iter().map(|&i| gen_pos[w[i]]).collect();
            let bp = bar.word_pos(&letters)?;
            img.add_term(&ring, bp.0, bp.1, ring.sign_one(sign));
        }
        inclusion.set_column(p.0, p.1, img);
    }
    // CE differential: push through the bar differential and solve against
    // the inclusion, using the sorted tensor word as the leading term
    let mut dmap = LinearMap::zero(-1);
    for (_w, p) in &pos_of {
        let img = inclusion.column(p.0, p.1);
        let dimg = HopfLike::differential(bar.as_ref(), &img)?;
        // extract coefficients on sorted words
        let mut col: Element<R> = Element::zero();
        for (w2, p2) in &pos_of {
            if p2.0 != p.0 - 1 {
                continue;
            }
            let sorted_letters: Vec<Pos> = w2.iter().map(|&i| gen_pos[i]).collect();
            let bp = bar.word_pos(&sorted_letters)?;
            if let Some(c) = dimg.terms.get(&(bp.0, bp.1)) {
                col.add_term(&ring, p2.0, p2.1, c.clone());
            }
        }
        // verify the subcoalgebra property: d(ν w) = ν(candidate)
        let mut check: Element<R> = Element::zero();
        for ((d2, i2), c) in &col.terms {
            let sub = inclusion.column(*d2, *i2);
            check = check.add(&ring, &sub.scale(&ring, c));
        }
        if check != dimg {
            return Err(AlgError::AxiomViolation {
                axiom: "CE subcomplex of the bar construction".into(),
                witness: module.label(p.0, p.1).to_string(),
            });
        }
        dmap.set_column(p.0, p.1, col);
    }
    // unshuffle coproduct on wedge words
    let mut coproduct: BTreeMap<Pos, Vec<PairTerm<R>>> = BTreeMap::new();
    for (w, p) in &pos_of {
        let n = w.len();
        let degs: Vec<i64> = w.iter().map(|&g| l.degree(g) + 1).collect();
        let mut acc: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        if n >= 2 {
            for mask in 1..(1u32 << n) - 1 {
                let left: Vec<usize> =
                    (0..n).filter(|b| mask >> b & 1 == 1).map(|b| w[b]).collect();
                let right: Vec<usize> =
                    (0..n).filter(|b| mask >> b & 1 == 0).map(|b| w[b]).collect();
                let (Some(pl), Some(pr)) = (pos_of.get(&left), pos_of.get(&right)) else {
                    return Err(AlgError::Other("cutoff too small for unshuffles".into()));
                };
                let mut exp = 0i64;
                for i in 0..n {
                    for j in (i + 1)..n {
                        if mask >> i & 1 == 0 && mask >> j & 1 == 1 {
                            exp += degs[i] * degs[j];
                        }
                    }
                }
                let e = acc.entry((*pl, *pr)).or_insert_with(|| ring.zero());
                *e = ring.add(e, &ring.sign_one(exp));
            }
        }
        let terms: Vec<PairTerm<R>> = acc
            .into_iter()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|((a, b), c)| (c, a, b))
            .collect();
        coproduct.insert(*p, terms);
    }
    let pres = PresentedBialgebra {
        ring: ring.clone(),
        module,
        d: dmap,
        product: None,
        coproduct: Some(coproduct),
    };
    pres.check_coassociativity()?;
    Ok(CeComplex {
        ring,
        pres,
        words: word_of,
        inclusion,
        bar,
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut p2 = p.clone();
                    p2.push(v);
                    next.push(p2);
                }
            }
        }
        out = next;
    }
    out
}

/// Verify that the inclusion is a map of coalgebras degreewise
/// (deconcatenation against the unshuffle coproduct) and cocommutative.
pub fn check_ce_inclusion<R: Ring>(ce: &CeComplex<R>) -> Result<()> {
    let ring = &ce.ring;
    for p in ce.pres.module.positions() {
        let x: Element<R> = Element::basis(p.0, p.1, ring);
        // (ν⊗ν)Δ̄_{CE} = Δ̄_{bar} ν
        let mut lhs: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        for (c, a, b) in ce.pres.reduced_diagonal(&x)? {
            let va = ce.inclusion.column(a.0, a.1);
            let vb = ce.inclusion.column(b.0, b.1);
            for (pa, ca) in &va.terms {
                for (pb, cb) in &vb.terms {
                    let v = ring.mul(&c, &ring.mul(ca, cb));
                    let e = lhs.entry((*pa, *pb)).or_insert_with(|| ring.zero());
                    *e = ring.add(e, &v);
                }
            }
        }
        let img = ce.inclusion.column(p.0, p.1);
        let mut rhs: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        for (c, a, b) in ce.bar.reduced_diagonal(&img)? {
            let e = rhs.entry((a, b)).or_insert_with(|| ring.zero());
            *e = ring.add(e, &c);
        }
        lhs.retain(|_, c| !ring.is_zero(c));
        rhs.retain(|_, c| !ring.is_zero(c));
        if lhs != rhs {
            return Err(AlgError::AxiomViolation {
                axiom: "inclusion is a coalgebra map".into(),
                witness: ce.pres.module.label(p.0, p.1).to_string(),
            });
        }
        // cocommutativity of the CE coproduct
        let mut flipped: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        for (c, a, b) in ce.pres.reduced_diagonal(&x)? {
            let e = flipped.entry((b, a)).or_insert_with(|| ring.zero());
            *e = ring.add(e, &ring.signed(&c, a.0 * b.0));
        }
        let mut plain: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        for (c, a, b) in ce.pres.reduced_diagonal(&x)? {
            let e = plain.entry((a, b)).or_insert_with(|| ring.zero());
            *e = ring.add(e, &c);
        }
        flipped.retain(|_, c| !ring.is_zero(c));
        plain.retain(|_, c| !ring.is_zero(c));
        if flipped != plain {
            return Err(AlgError::AxiomViolation {
                axiom: "CE coalgebra is cocommutative".into(),
                witness: ce.pres.module.label(p.0, p.1).to_string(),
            });
        }
    }
    Ok(())
}

/// The comparison twisting morphism α: (UL)^∨ → C*(L), dual of the
/// projection C_*(L) → L → UL: duals of single generators map to the
/// corresponding dual wedge generators, everything else to zero.
pub fn alpha<R: Ring>(
    l: &GradedLieAlgebra<R>,
    ul_dual: &PresentedBialgebra<R>,
    ce_dual: &PresentedBialgebra<R>,
    ul: &PresentedBialgebra<R>,
    ce: &CeComplex<R>,
) -> Result<crate::barcobar::Twisting<R>> {
    let ring = l.ring.clone();
    let mut map = BTreeMap::new();
    for i in 0..l.basis.len() {
        let d = l.degree(i);
        // dual basis positions keep indices under dualize
        let ul_idx = ul.module.find(d, &l.basis[i].0)?;
        let ce_idx = ce
            .pres
            .module
            .find(d + 1, &format!("Σ{}", l.basis[i].0))?;
        let src = (-d, ul_idx);
        if !ul_dual.module.window.contains(-d) {
            continue;
        }
        let tgt: Element<R> = Element::basis(-(d + 1), ce_idx, &ring);
        let _ = ce_dual;
        map.insert(src, tgt);
    }
    Ok(crate::barcobar::Twisting { map })
}
