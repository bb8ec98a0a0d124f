//! The free brace-algebra cobar model: the free complexity-two algebra on
//! the desuspended coideal with differential d + ∂_Δ, the ideal identifying
//! [c₁c₂] with its brace expansion, the projection π to the classical
//! cobar, the section ι, the retraction r onto the primitively generated
//! part, and the deformation-retraction homotopy h.
//!
//! Elements are kept in Σ-coinvariant normal form: the sequence is
//! relabeled so that first occurrences increase, the generator word is
//! permuted accordingly, and the Koszul sign is absorbed into the
//! coefficient.

use crate::barcobar::Cobar;
use crate::brace::evaluate;
use crate::error::{AlgError, Result};
use crate::graded::{koszul_permutation_sign, Element, Window};
use crate::presented::{tensor_hopf, Pos, PresentedBialgebra};
use crate::ring::Ring;
use crate::snf::{field_echelon, field_reduce, hermite_column_basis, hermite_member, IMat};
use crate::surjection::{
    brace_generator, compose, differential_basis, enumerate_filtered, insertion_homotopy_elem,
    OperadElement, Surjection,
};
use num_bigint::BigInt;
use num_traits::Zero;
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

/// A normal-form basis pair: canonical sequence and generator word (the
/// word stores positions in the coalgebra's reduced basis; the generator
/// degree is position degree minus one).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FreeTerm {
    pub op: Surjection,
    pub word: Vec<Pos>,
}

impl FreeTerm {
    pub fn degree(&self) -> i64 {
        self.op.degree() + self.word.iter().map(|p| p.0 - 1).sum::<i64>()
    }
}

/// A formal sum of normal-form pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement<R: Ring> {
    pub terms: BTreeMap<FreeTerm, R::Elem>,
}

impl<R: Ring> Default for FreeElement<R> {
    fn default() -> Self {
        FreeElement {
            terms: BTreeMap::new(),
        }
    }
}

impl<R: Ring> FreeElement<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Insert a (possibly non-canonical) pair, normalizing first.
    pub fn insert(&mut self, ring: &R, op: &Surjection, word: &[Pos], coeff: R::Elem) {
        if ring.is_zero(&coeff) {
            return;
        }
        debug_assert_eq!(op.arity(), word.len());
        let rho = op.canonical_relabeling();
        let canon = op.rename(&rho).expect("relabeling is a permutation");
        let degs: Vec<i64> = word.iter().map(|p| p.0 - 1).collect();
        let perm: Vec<usize> = (0..word.len()).map(|i| rho[i] - 1).collect();
        let sign = koszul_permutation_sign(&degs, &perm);
        let mut new_word = vec![(0i64, 0usize); word.len()];
        for (i, p) in word.iter().enumerate() {
            new_word[perm[i]] = *p;
        }
        let c = ring.signed(&coeff, sign);
        let key = FreeTerm {
            op: canon,
            word: new_word,
        };
        let e = self.terms.entry(key);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ring.add(o.get(), &c);
                if ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.insert(ring, &t.op, &t.word, c.clone());
        }
        out
    }

    pub fn sub(&self, ring: &R, other: &Self) -> Self {
        self.add(ring, &other.scale(ring, &ring.from_int(-1)))
    }

    pub fn scale(&self, ring: &R, c: &R::Elem) -> Self {
        let mut out = FreeElement::zero();
        if ring.is_zero(c) {
            return out;
        }
        for (t, a) in &self.terms {
            out.terms.insert(t.clone(), ring.mul(a, c));
        }
        out
    }

    pub fn basis(ring: &R, op: &Surjection, word: &[Pos]) -> Self {
        let mut out = FreeElement::zero();
        out.insert(ring, op, word, ring.one());
        out
    }

    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(FreeTerm::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

/// Working context for the free cobar model over a Hopf algebra C,
/// together with the classical cobar construction on the same window.
pub struct TildeCobar<R: Ring> {
    pub ring: R,
    pub hopf: Rc<PresentedBialgebra<R>>,
    pub cobar: Rc<Cobar<R>>,
    /// Primitive generator positions (for the retraction and homotopy).
    pub generators: Vec<Pos>,
    pub max_arity: usize,
    pub max_opdegree: i64,
    twist_cache: RefCell<BTreeMap<Pos, FreeElement<R>>>,
    h_cache: RefCell<BTreeMap<FreeTerm, FreeElement<R>>>,
}

impl<R: Ring> TildeCobar<R> {
    pub fn new(
        hopf: Rc<PresentedBialgebra<R>>,
        generators: Vec<Pos>,
        cobar_window: Window,
        cobar_max_len: usize,
        max_arity: usize,
        max_opdegree: i64,
    ) -> Result<Self> {
        let ring = hopf.ring.clone();
        let cobar = Rc::new(Cobar::new(hopf.clone(), cobar_window, cobar_max_len)?);
        Ok(TildeCobar {
            ring,
            hopf,
            cobar,
            generators,
            max_arity,
            max_opdegree,
            twist_cache: RefCell::new(BTreeMap::new()),
            h_cache: RefCell::new(BTreeMap::new()),
        })
    }

    fn letter_degree(p: Pos) -> i64 {
        p.0 - 1
    }

    /// Operadic grafting γ(outer; z_1,...,z_r) applied to the concatenated
    /// words, with the Koszul signs of moving each inner operation past the
    /// earlier letters.
    pub fn graft(&self, outer: &OperadElement<R>, inner: &[FreeElement<R>]) -> FreeElement<R> {
        let ring = &self.ring;
        let mut out = FreeElement::zero();
        // multilinear expansion of the inner elements
        let mut tuples: Vec<(R::Elem, Vec<(&FreeTerm, ())>)> = vec![(ring.one(), Vec::new())];
        let mut words: Vec<Vec<&FreeTerm>> = vec![Vec::new()];
        let mut coeffs: Vec<R::Elem> = vec![ring.one()];
        for z in inner {
            let mut next_words = Vec::new();
            let mut next_coeffs = Vec::new();
            for (w, c) in words.iter().zip(&coeffs) {
                for (t, tc) in &z.terms {
                    let mut w2 = w.clone();
                    w2.push(t);
                    next_words.push(w2);
                    next_coeffs.push(ring.mul(c, tc));
                }
            }
            words = next_words;
            coeffs = next_coeffs;
        }
        tuples.clear();
        for (terms, coeff) in words.iter().zip(&coeffs) {
            // Koszul: op of slot i moves past letters of slots < i
            let mut sign = 0i64;
            let mut before = 0i64;
            for t in terms.iter() {
                sign += t.op.degree() * before;
                before += t.word.iter().map(|p| Self::letter_degree(*p)).sum::<i64>();
            }
            // compose outer with the inner sequences, descending slots
            let mut acc = outer.clone();
            for (i, t) in terms.iter().enumerate().rev() {
                let v = OperadElement::basis(ring.clone(), t.op.clone());
                acc = compose(&acc, i + 1, &v).expect("slot in range");
            }
            let mut word: Vec<Pos> = Vec::new();
            for t in terms.iter() {
                word.extend_from_slice(&t.word);
            }
            let c = ring.signed(coeff, sign);
            for (seq, sc) in &acc.terms {
                out.insert(ring, seq, &word, ring.mul(sc, &c));
            }
        }
        out
    }

    /// Product in the free algebra.
    pub fn product(&self, x: &FreeElement<R>, y: &FreeElement<R>) -> FreeElement<R> {
        let two = Surjection::normalize(&[1, 2], 2).unwrap().unwrap();
        self.graft(
            &OperadElement::basis(self.ring.clone(), two),
            &[x.clone(), y.clone()],
        )
    }

    /// Brace in the free algebra.
    pub fn brace(&self, x: &FreeElement<R>, args: &[FreeElement<R>]) -> FreeElement<R> {
        let gen = brace_generator(args.len());
        let mut inner = vec![x.clone()];
        inner.extend_from_slice(args);
        self.graft(&OperadElement::basis(self.ring.clone(), gen), &inner)
    }

    /// The generator [c] of the free algebra.
    pub fn generator(&self, c: Pos) -> FreeElement<R> {
        let one = Surjection::normalize(&[1], 1).unwrap().unwrap();
        FreeElement::basis(&self.ring, &one, &[c])
    }

    /// Operadic part of the differential plus the internal differential of
    /// the letters.
    pub fn d_internal(&self, x: &FreeElement<R>) -> Result<FreeElement<R>> {
        let ring = &self.ring;
        let mut out = FreeElement::zero();
        for (t, c) in &x.terms {
            // (d op)(word)
            for (s, sc) in differential_basis(ring, &t.op).terms {
                out.insert(ring, &s, &t.word, ring.mul(&sc, c));
            }
            // (-1)^{|op|} Σ_i ± op(..., d c_i, ...)
            let mut before = t.op.degree();
            for (i, p) in t.word.iter().enumerate() {
                let e: Element<R> = Element::basis(p.0, p.1, ring);
                let dc = self.hopf.differential(&e);
                for ((td, ti), tc) in &dc.terms {
                    let mut w = t.word.clone();
                    w[i] = (*td, *ti);
                    out.insert(
                        ring,
                        &t.op,
                        &w,
                        ring.signed(&ring.mul(tc, c), before),
                    );
                }
                before += Self::letter_degree(*p);
            }
        }
        Ok(out)
    }

    /// The coproduct part ∂_Δ: the derivation sending [c] to
    /// (-1)^{|c̄^{(1)}|}[c̄^{(1)}]·[c̄^{(2)}].
    pub fn d_delta(&self, x: &FreeElement<R>) -> Result<FreeElement<R>> {
        let ring = &self.ring;
        let two = Surjection::normalize(&[1, 2], 2).unwrap().unwrap();
        let mut out = FreeElement::zero();
        for (t, c) in &x.terms {
            let mut before = t.op.degree();
            for (i, p) in t.word.iter().enumerate() {
                let e: Element<R> = Element::basis(p.0, p.1, ring);
                for (dc, p1, p2) in self.hopf.reduced_diagonal(&e)? {
                    // splice (1,2)(c',c'') into slot i+1
                    let composed = compose(
                        &OperadElement::basis(ring.clone(), t.op.clone()),
                        i + 1,
                        &OperadElement::basis(ring.clone(), two.clone()),
                    )?;
                    let mut w: Vec<Pos> = Vec::with_capacity(t.word.len() + 1);
                    w.extend_from_slice(&t.word[..i]);
                    w.push(p1);
                    w.push(p2);
                    w.extend_from_slice(&t.word[i + 1..]);
                    let sign = before + p1.0; // derivation sign + (-1)^{|c'|}
                    for (seq, sc) in &composed.terms {
                        out.insert(
                            ring,
                            seq,
                            &w,
                            ring.signed(&ring.mul(sc, &ring.mul(&dc, c)), sign),
                        );
                    }
                }
                before += Self::letter_degree(*p);
            }
        }
        Ok(out)
    }

    /// The full differential ∂ = d + ∂_Δ.
    pub fn differential(&self, x: &FreeElement<R>) -> Result<FreeElement<R>> {
        Ok(self.d_internal(x)?.add(&self.ring, &self.d_delta(x)?))
    }

    /// π: evaluate the sequence through the brace structure of the
    /// classical cobar construction.
    pub fn pi(&self, x: &FreeElement<R>) -> Result<Element<R>> {
        let ring = &self.ring;
        let mut out = Element::zero();
        for (t, c) in &x.terms {
            let args: Vec<Element<R>> = t
                .word
                .iter()
                .map(|p| self.cobar.letter(*p))
                .collect::<Result<_>>()?;
            let v = evaluate(
                self.cobar.as_ref(),
                &OperadElement::basis(ring.clone(), t.op.clone()),
                &args,
            )?;
            out = out.add(ring, &v.scale(ring, c));
        }
        Ok(out)
    }

    /// ι: send the cobar word [c_1|...|c_k] to (1,...,k)([c_1],...,[c_k]).
    pub fn iota(&self, x: &Element<R>) -> Result<FreeElement<R>> {
        let ring = &self.ring;
        let mut out = FreeElement::zero();
        for ((d, i), c) in &x.terms {
            let word = self.cobar.words[&(*d, *i)].clone();
            let entries: Vec<usize> = (1..=word.len()).collect();
            let op = Surjection::normalize(&entries, word.len())?
                .ok_or_else(|| AlgError::Other("empty cobar word".into()))?;
            out.insert(ring, &op, &word, c.clone());
        }
        Ok(out)
    }

    /// The Hopf-twisting extension f: C̄ -> free algebra on the primitive
    /// generators, f(v) = [v] on generators, extended by the Hopf twisting
    /// recursion on the first letter. Requires C = TV on the stored
    /// generators.
    pub fn free_twist(&self, c: Pos) -> Result<FreeElement<R>> {
        if let Some(v) = self.twist_cache.borrow().get(&c) {
            return Ok(v.clone());
        }
        let ring = &self.ring;
        if self.generators.contains(&c) {
            let v = self.generator(c);
            self.twist_cache.borrow_mut().insert(c, v.clone());
            return Ok(v);
        }
        // c must be a product v·rest of a generator and a shorter word;
        // find it through the product table
        let (head, rest) = self.split_first_letter(c)?;
        let c1: Element<R> = Element::basis(head.0, head.1, ring);
        let f_c1 = self.free_twist(head)?;
        let rest_elem: Element<R> = Element::basis(rest.0, rest.1, ring);
        let _ = c1;
        // Σ_k (-1)^α f(head){f(rest^{(1)}),...,f(rest^{(k)})}
        let mut out = FreeElement::zero();
        let cap = 64usize;
        let depth = crate::barcobar::conilpotency_depth(self.hopf.as_ref(), &rest_elem, cap)?;
        for k in 1..=depth.max(1) {
            for (coeff, word) in
                crate::barcobar::iterated_reduced_diagonal(self.hopf.as_ref(), &rest_elem, k)?
            {
                let mut alpha = (k as i64) * (head.0 - 1);
                for (i, part) in word.iter().enumerate() {
                    alpha += (k as i64 - 1 - i as i64) * (part.0 - 1);
                }
                let args: Vec<FreeElement<R>> = word
                    .iter()
                    .map(|p| self.free_twist(*p))
                    .collect::<Result<_>>()?;
                if args.iter().any(FreeElement::is_zero) {
                    continue;
                }
                let b = self.brace(&f_c1, &args);
                out = out.add(ring, &b.scale(ring, &ring.signed(&coeff, alpha)));
            }
        }
        self.twist_cache.borrow_mut().insert(c, out.clone());
        Ok(out)
    }

    /// Split a non-generator basis element of TV as (first generator,
    /// remaining word), using the product structure.
    fn split_first_letter(&self, c: Pos) -> Result<(Pos, Pos)> {
        for &g in &self.generators {
            for rest in self.hopf.module.positions() {
                if g.0 + rest.0 != c.0 {
                    continue;
                }
                let ge: Element<R> = Element::basis(g.0, g.1, &self.ring);
                let re: Element<R> = Element::basis(rest.0, rest.1, &self.ring);
                let prod = self.hopf.product(&ge, &re)?;
                if prod.terms.len() == 1 {
                    let ((pd, pi), pc) = prod.terms.iter().next().unwrap();
                    if (*pd, *pi) == c && *pc == self.ring.one() {
                        return Ok((g, rest));
                    }
                }
            }
        }
        Err(AlgError::NotPrimitivelyGenerated(format!(
            "{} does not split as generator · word",
            self.hopf.module.label(c.0, c.1)
        )))
    }

    /// The retraction r onto the free algebra on primitive generators:
    /// replace each generator [c] by its brace expansion f(c) and graft.
    pub fn retract(&self, x: &FreeElement<R>) -> Result<FreeElement<R>> {
        let ring = &self.ring;
        let mut out = FreeElement::zero();
        for (t, c) in &x.terms {
            let inner: Vec<FreeElement<R>> = t
                .word
                .iter()
                .map(|p| self.free_twist(*p))
                .collect::<Result<_>>()?;
            let g = self.graft(
                &OperadElement::basis(ring.clone(), t.op.clone()),
                &inner,
            );
            out = out.add(ring, &g.scale(ring, c));
        }
        Ok(out)
    }

    /// p = r ∘ ι ∘ π, computed on free elements.
    pub fn p(&self, x: &FreeElement<R>) -> Result<FreeElement<R>> {
        self.retract(&self.iota(&self.pi(x)?)?)
    }

    /// The first repeated value (the repeated value whose first occurrence
    /// is earliest) and the set of values occurring before it.
    pub fn j_and_s(op: &Surjection) -> Option<(usize, BTreeSet<usize>)> {
        let entries = op.entries();
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &v in entries {
            *counts.entry(v).or_insert(0) += 1;
        }
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for &v in entries {
            if seen.contains(&v) {
                continue;
            }
            if counts[&v] >= 2 {
                return Some((v, seen));
            }
            seen.insert(v);
        }
        None
    }

    /// The homotopy h on a normal-form basis pair with primitive letters.
    pub fn homotopy(&self, x: &FreeElement<R>) -> Result<FreeElement<R>> {
        let ring = &self.ring;
        let mut out = FreeElement::zero();
        for (t, c) in &x.terms {
            let v = self.homotopy_basis(t)?;
            out = out.add(ring, &v.scale(ring, c));
        }
        Ok(out)
    }

    fn homotopy_basis(&self, t: &FreeTerm) -> Result<FreeElement<R>> {
        if let Some(v) = self.h_cache.borrow().get(t) {
            return Ok(v.clone());
        }
        for p in &t.word {
            if !self.generators.contains(p) {
                return Err(AlgError::NotPrimitivelyGenerated(format!(
                    "homotopy needs primitive letters, got {}",
                    self.hopf.module.label(p.0, p.1)
                )));
            }
        }
        let ring = &self.ring;
        let result: FreeElement<R>;
        if t.op.degree() == 0 {
            result = FreeElement::zero();
        } else {
            let blocks = t.op.product_blocks();
            if blocks.len() >= 2 {
                // derivation rule h(xy) = h(x)p(y) + (-1)^{|x|} x h(y),
                // splitting at the first block
                let k1 = blocks[0].arity();
                let (w1, w2) = t.word.split_at(k1);
                let rest_entries: Vec<usize> = t.op.entries()[blocks[0].entries().len()..]
                    .iter()
                    .map(|&v| v - k1)
                    .collect();
                let rest_op = Surjection::normalize(&rest_entries, t.op.arity() - k1)?
                    .expect("block split is valid");
                let xe = FreeElement::basis(ring, &blocks[0], w1);
                let ye = FreeElement::basis(ring, &rest_op, w2);
                let xdeg = blocks[0].degree() + w1.iter().map(|p| p.0 - 1).sum::<i64>();
                let hx = self.homotopy(&xe)?;
                let hy = self.homotopy(&ye)?;
                let py = self.p(&ye)?;
                let left = self.product(&hx, &py);
                let right = self.product(&xe, &hy).scale(ring, &ring.sign_one(xdeg));
                result = left.add(ring, &right);
            } else if all_distinct(&t.word) {
                result = self.homotopy_indecomposable(t)?;
            } else {
                // naturality: run the distinct-letter universal model and
                // substitute the actual letters
                result = self.homotopy_by_naturality(t)?;
            }
        }
        self.h_cache.borrow_mut().insert(t.clone(), result.clone());
        Ok(result)
    }

    fn homotopy_indecomposable(&self, t: &FreeTerm) -> Result<FreeElement<R>> {
        let ring = &self.ring;
        let x = FreeElement::basis(ring, &t.op, &t.word);
        let px = self.p(&x)?;
        let hdx = self.homotopy(&self.differential(&x)?)?;
        let y = x.sub(ring, &px).sub(ring, &hdx);
        // extract o: every term uses the same letter multiset; with
        // distinct letters each term rewrites uniquely over the fixed word
        let mut o = OperadElement::zero(ring.clone(), t.op.arity());
        for (term, c) in &y.terms {
            let perm = word_permutation(&term.word, &t.word).ok_or_else(|| {
                AlgError::Other("homotopy cycle left the letter multiset".into())
            })?;
            // term.op(term.word) = ±(perm·term.op)(t.word)
            let degs: Vec<i64> = term.word.iter().map(|p| p.0 - 1).collect();
            let movement: Vec<usize> = perm.iter().map(|&v| v - 1).collect();
            let sign = koszul_permutation_sign(&degs, &movement);
            let renamed = term.op.rename(&perm)?;
            o.add_term(renamed, ring.signed(c, sign));
        }
        debug_assert!(
            crate::surjection::differential(&o).is_zero(),
            "o must be a cycle"
        );
        let Some((j, s)) = Self::j_and_s(&t.op) else {
            // no repeated value but positive degree cannot happen
            return Err(AlgError::Other("indecomposable with no repeats".into()));
        };
        let b = insertion_homotopy_elem(j, &s, &o)?;
        for seq in b.terms.keys() {
            if seq.complexity() > 2 {
                return Err(AlgError::Other(format!(
                    "homotopy image {seq} left the complexity-two suboperad"
                )));
            }
        }
        let mut out = FreeElement::zero();
        for (seq, c) in &b.terms {
            out.insert(ring, seq, &t.word, c.clone());
        }
        Ok(out)
    }

    fn homotopy_by_naturality(&self, t: &FreeTerm) -> Result<FreeElement<R>> {
        let ring = &self.ring;
        let k = t.word.len();
        let degs: Vec<i64> = t.word.iter().map(|p| p.0).collect();
        let gens: Vec<(String, i64)> = (0..k)
            .map(|i| (format!("u{i}"), degs[i]))
            .collect();
        let gen_refs: Vec<(&str, i64)> = gens.iter().map(|(s, d)| (s.as_str(), *d)).collect();
        // generator weight is conserved: the tensor Hopf model only needs
        // words of at most k letters, and the cobar side only degrees up
        // to the total degree of x
        let tv_top: i64 = degs.iter().sum();
        let cobar_top: i64 = self.max_opdegree + degs.iter().map(|d| d - 1).sum::<i64>();
        let model_hopf = Rc::new(tensor_hopf(
            ring.clone(),
            &gen_refs,
            Window::new(0, tv_top),
            k,
        )?);
        let model_gens: Vec<Pos> = gen_refs
            .iter()
            .map(|(s, d)| (*d, model_hopf.module.find(*d, s).unwrap()))
            .collect();
        let model = TildeCobar::new(
            model_hopf.clone(),
            model_gens.clone(),
            Window::new(0, cobar_top.max(1)),
            k,
            self.max_arity,
            self.max_opdegree,
        )?;
        let model_word: Vec<Pos> = model_gens.clone();
        let hx = model.homotopy(&FreeElement::basis(ring, &t.op, &model_word))?;
        // substitute the actual letters for the formal generators
        let mut out = FreeElement::zero();
        for (term, c) in &hx.terms {
            let actual: Vec<Pos> = term
                .word
                .iter()
                .map(|p| {
                    let idx = model_gens.iter().position(|g| g == p).expect("model letter");
                    t.word[idx]
                })
                .collect();
            out.insert(ring, &term.op, &actual, c.clone());
        }
        Ok(out)
    }

    /// Enumerate the normal-form basis in a total degree, within the arity
    /// and operadic-degree bounds, with letters drawn from `letters`.
    pub fn enumerate_basis(
        &self,
        letters: &[Pos],
        total_degree: i64,
        max_arity: usize,
        max_opdegree: i64,
    ) -> Vec<FreeTerm> {
        let mut out = Vec::new();
        for arity in 1..=max_arity {
            for opdeg in 0..=max_opdegree {
                for op in enumerate_filtered(arity, opdeg, 2) {
                    if op.degree() != opdeg || !op.is_canonical() {
                        continue;
                    }
                    // words over letters with letter degrees summing right
                    let need = total_degree - opdeg;
                    let mut words: Vec<Vec<Pos>> = vec![vec![]];
                    for _ in 0..arity {
                        let mut next = Vec::new();
                        for w in &words {
                            for &l in letters {
                                let mut w2 = w.clone();
                                w2.push(l);
                                next.push(w2);
                            }
                        }
                        words = next;
                    }
                    for w in words {
                        let deg: i64 = w.iter().map(|p| p.0 - 1).sum();
                        if deg == need {
                            out.push(FreeTerm {
                                op: op.clone(),
                                word: w,
                            });
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Spanning set of the brace-expansion ideal in one total degree:
    /// composites with exactly one slot holding an ideal generator
    /// g(c1,c2) = [c1 c2] − Σ ± [c1]{...} and basis generators elsewhere.
    pub fn ideal_span(
        &self,
        degree: i64,
        max_arity: usize,
        max_opdegree: i64,
    ) -> Result<Vec<FreeElement<R>>> {
        let ring = &self.ring;
        let all_letters: Vec<Pos> = self.hopf.module.positions().collect();
        // ideal generators g(c1, c2)
        let mut gens: Vec<(i64, FreeElement<R>)> = Vec::new();
        for p1 in self.hopf.module.positions() {
            for p2 in self.hopf.module.positions() {
                if !self.hopf.module.window.contains(p1.0 + p2.0) {
                    continue;
                }
                let c1: Element<R> = Element::basis(p1.0, p1.1, ring);
                let c2: Element<R> = Element::basis(p2.0, p2.1, ring);
                let prod = self.hopf.product(&c1, &c2)?;
                let mut g = FreeElement::zero();
                let one = Surjection::normalize(&[1], 1).unwrap().unwrap();
                for ((d, i), c) in &prod.terms {
                    g.insert(ring, &one, &[(*d, *i)], c.clone());
                }
                // minus the brace expansion Σ (-1)^α [c1]{...}
                let cap = 64usize;
                let depth =
                    crate::barcobar::conilpotency_depth(self.hopf.as_ref(), &c2, cap)?;
                for k in 1..=depth.max(1) {
                    for (coeff, word) in crate::barcobar::iterated_reduced_diagonal(
                        self.hopf.as_ref(),
                        &c2,
                        k,
                    )? {
                        let mut alpha = (k as i64) * (p1.0 - 1);
                        for (i, part) in word.iter().enumerate() {
                            alpha += (k as i64 - 1 - i as i64) * (part.0 - 1);
                        }
                        let args: Vec<FreeElement<R>> =
                            word.iter().map(|p| self.generator(*p)).collect();
                        let b = self.brace(&self.generator(p1), &args);
                        g = g.sub(ring, &b.scale(ring, &ring.signed(&coeff, alpha)));
                    }
                }
                if !g.is_zero() {
                    let gdeg = p1.0 + p2.0 - 2;
                    gens.push((gdeg, g));
                }
            }
        }
        let mut span = Vec::new();
        for (gdeg, g) in &gens {
            for arity in 1..=max_arity {
                for opdeg in 0..=max_opdegree {
                    for op in enumerate_filtered(arity, opdeg, 2) {
                        if !op.is_canonical() {
                            continue;
                        }
                        // slot for the ideal generator, letters elsewhere
                        for slot in 0..arity {
                            let need = degree - opdeg - gdeg;
                            let mut rest: Vec<Vec<Pos>> = vec![vec![]];
                            for _ in 0..arity - 1 {
                                let mut next = Vec::new();
                                for w in &rest {
                                    for &l in &all_letters {
                                        let mut w2 = w.clone();
                                        w2.push(l);
                                        next.push(w2);
                                    }
                                }
                                rest = next;
                            }
                            for w in rest {
                                let deg: i64 = w.iter().map(|p| p.0 - 1).sum();
                                if deg != need {
                                    continue;
                                }
                                let mut inner: Vec<FreeElement<R>> = Vec::new();
                                let mut wi = w.iter();
                                for s in 0..arity {
                                    if s == slot {
                                        inner.push(g.clone());
                                    } else {
                                        inner.push(self.generator(*wi.next().unwrap()));
                                    }
                                }
                                let z = self.graft(
                                    &OperadElement::basis(ring.clone(), op.clone()),
                                    &inner,
                                );
                                if !z.is_zero() {
                                    span.push(z);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(span)
    }
}

/// Outcome of the deformation-retraction verification.
#[derive(Clone, Debug, Default)]
pub struct RetractionReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RetractionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check ∂h + h∂ = 1 − p, h² = 0, hp = ph = 0, p² = p and the
/// three-or-more-occurrences property of the homotopy images, on every
/// normal-form basis element with letters from `t.generators`, arity up to
/// `t.max_arity`, operadic degree up to `t.max_opdegree`.
pub fn verify_retraction<R: Ring>(t: &TildeCobar<R>) -> Result<RetractionReport> {
    let ring = &t.ring;
    let mut report = RetractionReport::default();
    let gen_degrees: i64 = 0;
    let _ = gen_degrees;
    let max_total: i64 = t.max_opdegree
        + t.generators
            .iter()
            .map(|p| p.0 - 1)
            .max()
            .unwrap_or(0)
            * t.max_arity as i64;
    for total in 0..=max_total {
        for term in t.enumerate_basis(&t.generators, total, t.max_arity, t.max_opdegree) {
            report.checked += 1;
            let x = FreeElement::basis(ring, &term.op, &term.word);
            let hx = t.homotopy(&x)?;
            let px = t.p(&x)?;
            let dx = t.differential(&x)?;
            let lhs = t.differential(&hx)?.add(ring, &t.homotopy(&dx)?);
            let rhs = x.sub(ring, &px);
            if lhs != rhs {
                report
                    .failures
                    .push(format!("∂h + h∂ ≠ 1 − p at {term:?}"));
            }
            if !t.homotopy(&hx)?.is_zero() {
                report.failures.push(format!("h² ≠ 0 at {term:?}"));
            }
            if !t.homotopy(&px)?.is_zero() {
                report.failures.push(format!("hp ≠ 0 at {term:?}"));
            }
            if !t.p(&hx)?.is_zero() {
                report.failures.push(format!("ph ≠ 0 at {term:?}"));
            }
            let ppx = t.p(&px)?;
            if ppx != px {
                report.failures.push(format!("p² ≠ p at {term:?}"));
            }
            // homotopy images consist of sequences with a value occurring
            // at least three times
            for img in hx.terms.keys() {
                let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
                for &v in img.op.entries() {
                    *counts.entry(v).or_insert(0) += 1;
                }
                if !counts.values().any(|&c| c >= 3) {
                    report.failures.push(format!(
                        "homotopy image {} lacks a value occurring three times",
                        img.op
                    ));
                }
            }
        }
    }
    // π ∘ ι = id on the cobar basis
    for pos in t.cobar.words.keys() {
        let x: Element<R> = Element::basis(pos.0, pos.1, ring);
        match t.iota(&x).and_then(|ix| t.pi(&ix)) {
            Ok(back) => {
                if back != x {
                    report.failures.push(format!("π∘ι ≠ id at {pos:?}"));
                }
            }
            Err(e) => report.failures.push(format!("π∘ι error at {pos:?}: {e}")),
        }
    }
    Ok(report)
}

/// Check the derivation-homotopy law h(xy) = h(x)p(y) ± x h(y) on products
/// of basis elements.
pub fn verify_derivation_law<R: Ring>(
    t: &TildeCobar<R>,
    max_each_degree: i64,
) -> Result<RetractionReport> {
    let ring = &t.ring;
    let mut report = RetractionReport::default();
    let mut pool: Vec<FreeTerm> = Vec::new();
    for total in 0..=max_each_degree {
        pool.extend(t.enumerate_basis(&t.generators, total, 2, 2));
    }
    for a in &pool {
        for b in &pool {
            if a.op.arity() + b.op.arity() > t.max_arity {
                continue;
            }
            if a.degree() + b.degree() > t.max_opdegree + 3 {
                continue;
            }
            report.checked += 1;
            let x = FreeElement::basis(ring, &a.op, &a.word);
            let y = FreeElement::basis(ring, &b.op, &b.word);
            let xy = t.product(&x, &y);
            let lhs = t.homotopy(&xy)?;
            let rhs = t
                .product(&t.homotopy(&x)?, &t.p(&y)?)
                .add(
                    ring,
                    &t.product(&x, &t.homotopy(&y)?)
                        .scale(ring, &ring.sign_one(a.degree())),
                );
            if lhs != rhs {
                report
                    .failures
                    .push(format!("derivation law fails at {a:?} · {b:?}"));
            }
        }
    }
    Ok(report)
}

fn all_distinct(word: &[Pos]) -> bool {
    let set: BTreeSet<Pos> = word.iter().copied().collect();
    set.len() == word.len()
}

/// The permutation π (as a value map) with π-applied `from` equal to `to`,
/// when the words are permutations of each other with distinct letters:
/// slot i of `from` holds the letter of slot π(i) of ... the convention is
/// chosen so that renaming the sequence by π matches re-indexing the word.
fn word_permutation(from: &[Pos], to: &[Pos]) -> Option<Vec<usize>> {
    if from.len() != to.len() {
        return None;
    }
    let mut perm = vec![0usize; from.len()];
    let mut used = vec![false; to.len()];
    for (i, f) in from.iter().enumerate() {
        let mut found = None;
        for (j, t) in to.iter().enumerate() {
            if !used[j] && t == f {
                found = Some(j);
                break;
            }
        }
        let j = found?;
        used[j] = true;
        perm[i] = j + 1;
    }
    Some(perm)
}

/// Coordinates of free elements in a fixed degree, for ideal membership.
pub struct IdealWitness<R: Ring> {
    pub degree: i64,
    pub basis: Vec<FreeTerm>,
    pub index: BTreeMap<FreeTerm, usize>,
    pub span: Vec<FreeElement<R>>,
    // over Z: Hermite column basis; over a field: echelon rows
    hermite: Option<IMat>,
    echelon: Option<Vec<Vec<R::Elem>>>,
}

impl<R: Ring> IdealWitness<R> {
    pub fn new(
        ring: &R,
        degree: i64,
        basis: Vec<FreeTerm>,
        span: Vec<FreeElement<R>>,
    ) -> Result<Self> {
        let index: BTreeMap<FreeTerm, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let coords = |z: &FreeElement<R>| -> Result<Vec<R::Elem>> {
            let mut v = vec![ring.zero(); basis.len()];
            for (t, c) in &z.terms {
                let i = index.get(t).ok_or_else(|| {
                    AlgError::Other(format!("ideal span leaves the enumerated basis: {t:?}"))
                })?;
                v[*i] = c.clone();
            }
            Ok(v)
        };
        let mut hermite = None;
        let mut echelon = None;
        if ring.is_field() {
            let rows: Vec<Vec<R::Elem>> =
                span.iter().map(&coords).collect::<Result<_>>()?;
            let (e, _) = field_echelon(ring, &rows);
            echelon = Some(e);
        } else {
            // integer lattice: columns are the span vectors
            let mut m: IMat = vec![vec![BigInt::zero(); span.len()]; basis.len()];
            for (j, z) in span.iter().enumerate() {
                let v = coords(z)?;
                for (i, c) in v.iter().enumerate() {
                    let s = ring.show(c);
                    m[i][j] = s
                        .parse()
                        .map_err(|_| AlgError::Other("non-integer ideal coefficient".into()))?;
                }
            }
            hermite = Some(hermite_column_basis(&m));
        }
        Ok(IdealWitness {
            degree,
            basis,
            index,
            span,
            hermite,
            echelon,
        })
    }

    pub fn contains(&self, ring: &R, z: &FreeElement<R>) -> Result<bool> {
        if z.is_zero() {
            return Ok(true);
        }
        let mut v = vec![ring.zero(); self.basis.len()];
        for (t, c) in &z.terms {
            match self.index.get(t) {
                Some(i) => v[*i] = c.clone(),
                None => return Ok(false),
            }
        }
        if let Some(e) = &self.echelon {
            let r = field_reduce(ring, e, &v);
            return Ok(r.iter().all(|c| ring.is_zero(c)));
        }
        if let Some(h) = &self.hermite {
            let iv: Vec<BigInt> = v
                .iter()
                .map(|c| ring.show(c).parse().expect("integer"))
                .collect();
            return Ok(hermite_member(h, &iv));
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brace::S2Algebra;
    use crate::ring::{ZMod, ZZ};

    fn setup(ring_kind: u8) -> (TildeCobar<ZZ>, Vec<Pos>) {
        let _ = ring_kind;
        let hopf = Rc::new(
            tensor_hopf(ZZ, &[("c1", 2), ("c2", 2), ("c3", 2)], Window::new(0, 8), 4).unwrap(),
        );
        let gens: Vec<Pos> = ["c1", "c2", "c3"]
            .iter()
            .map(|s| (2i64, hopf.module.find(2, s).unwrap()))
            .collect();
        let t = TildeCobar::new(hopf, gens.clone(), Window::new(0, 8), 4, 3, 4).unwrap();
        (t, gens)
    }

    #[test]
    fn normal_form_relabeling() {
        let (t, gens) = setup(0);
        // (2,1)(g1,g2) normalizes to ±(1,2)(g2,g1); letters have odd
        // shifted degree 1, so the Koszul sign is -1
        let op = Surjection::parse("(2,1)");
        let e = FreeElement::basis(&t.ring, &op, &[gens[0], gens[1]]);
        assert_eq!(e.terms.len(), 1);
        let (term, c) = e.terms.iter().next().unwrap();
        assert_eq!(term.op, Surjection::parse("(1,2)"));
        assert_eq!(term.word, vec![gens[1], gens[0]]);
        assert_eq!(*c, ZZ.from_int(-1));
    }

    #[test]
    fn pi_iota_identity() {
        let (t, _) = setup(0);
        for (pos, _) in t.cobar.words.clone() {
            if pos.0 > 5 {
                continue;
            }
            let x: Element<ZZ> = Element::basis(pos.0, pos.1, &ZZ);
            let back = t.pi(&t.iota(&x).unwrap()).unwrap();
            assert_eq!(back, x, "π∘ι = id at {pos:?}");
        }
    }

    #[test]
    fn differential_squares_to_zero() {
        let (t, gens) = setup(0);
        let terms = t.enumerate_basis(&gens, 5, 3, 4);
        for term in terms {
            let x = FreeElement::basis(&t.ring, &term.op, &term.word);
            let dd = t.differential(&t.differential(&x).unwrap()).unwrap();
            assert!(dd.is_zero(), "∂² ≠ 0 on {term:?}");
        }
        // also on a non-primitive generator letter
        let c12 = (4i64, t.hopf.module.find(4, "c1·c2").unwrap());
        let x = t.generator(c12);
        let dd = t.differential(&t.differential(&x).unwrap()).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn pi_is_a_chain_map() {
        let (t, gens) = setup(0);
        for term in t.enumerate_basis(&gens, 5, 3, 3) {
            let x = FreeElement::basis(&t.ring, &term.op, &term.word);
            let lhs = t.pi(&t.differential(&x).unwrap()).unwrap();
            let rhs = S2Algebra::differential(t.cobar.as_ref(), &t.pi(&x).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "π chain map at {term:?}");
        }
    }

    #[test]
    fn worked_example_over_z2() {
        // x = (1,2,3,1)([c1],[c2],[c3]): o = (1,2,3,1)+(1,2,1,3)+(2,1,3,1),
        // h(x) = (1,2,1,3,1)([c1],[c2],[c3])
        let hopf = Rc::new(
            tensor_hopf(
                ZMod::new(2),
                &[("c1", 2), ("c2", 2), ("c3", 2)],
                Window::new(0, 8),
                4,
            )
            .unwrap(),
        );
        let gens: Vec<Pos> = ["c1", "c2", "c3"]
            .iter()
            .map(|s| (2i64, hopf.module.find(2, s).unwrap()))
            .collect();
        let t = TildeCobar::new(hopf, gens.clone(), Window::new(0, 8), 4, 3, 4).unwrap();
        let op = Surjection::parse("(1,2,3,1)");
        let x = FreeElement::basis(&t.ring, &op, &gens);
        // p(x) corresponds to (1,2,1,3) + (2,1,3,1) over Z/2
        let px = t.p(&x).unwrap();
        let mut expect = FreeElement::zero();
        expect.insert(&t.ring, &Surjection::parse("(1,2,1,3)"), &gens, 1);
        expect.insert(&t.ring, &Surjection::parse("(2,1,3,1)"), &gens, 1);
        assert_eq!(px, expect, "p(x) = [c1c2][c3] + [c2][c1c3]");
        let hx = t.homotopy(&x).unwrap();
        let mut expect_h = FreeElement::zero();
        expect_h.insert(&t.ring, &Surjection::parse("(1,2,1,3,1)"), &gens, 1);
        assert_eq!(hx, expect_h, "h(x) = (1,2,1,3,1)(c)");
    }

    #[test]
    fn homotopy_vanishes_in_degree_zero() {
        let (t, gens) = setup(0);
        let op = Surjection::parse("(1,2)");
        let x = FreeElement::basis(&t.ring, &op, &[gens[0], gens[1]]);
        assert!(t.homotopy(&x).unwrap().is_zero());
    }

    #[test]
    fn retraction_kills_ideal_generators() {
        let (t, _) = setup(0);
        // r of the ideal generator g(c1, c2) is zero
        let span = t.ideal_span(3, 2, 2).unwrap();
        assert!(!span.is_empty());
        for z in &span {
            let r = t.retract(z).unwrap();
            assert!(r.is_zero(), "retraction must kill the ideal: {z:?}");
        }
    }

    #[test]
    fn pi_kills_ideal() {
        let (t, _) = setup(0);
        for d in 2..=4i64 {
            for z in t.ideal_span(d, 2, 2).unwrap() {
                assert!(t.pi(&z).unwrap().is_zero(), "π must kill the ideal");
            }
        }
    }
}
