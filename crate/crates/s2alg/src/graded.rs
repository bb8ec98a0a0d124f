//! Graded modules with chosen bases, sparse elements, linear maps of fixed
//! shift, and chain complexes.
//!
//! Grading is homological (differentials have degree -1); cochain-type
//! objects live in nonpositive degrees via the identification C^n = C_{-n}.
//! Every computation is confined to an explicit degree window and fails
//! loudly outside it.

use crate::error::{AlgError, Result};
use crate::ring::Ring;
use std::collections::BTreeMap;
use std::fmt;

/// Closed degree interval `[min, max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub min: i64,
    pub max: i64,
}

impl Window {
    pub fn new(min: i64, max: i64) -> Self {
        assert!(min <= max, "empty window");
        Window { min, max }
    }
    pub fn symmetric(n: i64) -> Self {
        Window::new(-n, n)
    }
    pub fn contains(&self, d: i64) -> bool {
        self.min <= d && d <= self.max
    }
    pub fn check(&self, d: i64) -> Result<()> {
        if self.contains(d) {
            Ok(())
        } else {
            Err(AlgError::WindowExceeded(d, self.min, self.max))
        }
    }
    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }
}

/// A degreewise finite graded module with an ordered basis in each degree.
///
/// Labels are opaque strings, unique within a degree. Degrees not listed are
/// zero inside the declared window.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedModule {
    pub window: Window,
    basis: BTreeMap<i64, Vec<String>>,
    index: BTreeMap<(i64, String), usize>,
}

impl GradedModule {
    pub fn new(window: Window) -> Self {
        GradedModule {
            window,
            basis: BTreeMap::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn add_basis_label(&mut self, degree: i64, label: impl Into<String>) -> Result<usize> {
        self.window.check(degree)?;
        let label = label.into();
        if self.index.contains_key(&(degree, label.clone())) {
            return Err(AlgError::AxiomViolation {
                axiom: "basis labels unique within a degree".into(),
                witness: format!("{label} in degree {degree}"),
            });
        }
        let v = self.basis.entry(degree).or_default();
        v.push(label.clone());
        let idx = v.len() - 1;
        self.index.insert((degree, label), idx);
        Ok(idx)
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.basis.get(&degree).map_or(0, Vec::len)
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        self.basis.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn label(&self, degree: i64, idx: usize) -> &str {
        &self.basis[&degree][idx]
    }

    pub fn find(&self, degree: i64, label: &str) -> Result<usize> {
        self.index
            .get(&(degree, label.to_string()))
            .copied()
            .ok_or_else(|| AlgError::UnknownLabel(label.to_string(), degree))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.basis.keys().copied()
    }

    pub fn total_rank(&self) -> usize {
        self.basis.values().map(Vec::len).sum()
    }

    /// Iterate over all `(degree, index)` basis positions in order.
    pub fn positions(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.basis
            .iter()
            .flat_map(|(&d, v)| (0..v.len()).map(move |i| (d, i)))
    }
}

/// A sparse homogeneous-or-not element: terms keyed by `(degree, basis index)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Element<R: Ring> {
    pub terms: BTreeMap<(i64, usize), R::Elem>,
}

impl<R: Ring> fmt::Debug for Element<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.terms)
    }
}

impl<R: Ring> Default for Element<R> {
    fn default() -> Self {
        Element {
            terms: BTreeMap::new(),
        }
    }
}

impl<R: Ring> Element<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(degree: i64, idx: usize, ring: &R) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((degree, idx), ring.one());
        Element { terms }
    }

    pub fn single(degree: i64, idx: usize, coeff: R::Elem, ring: &R) -> Self {
        let mut e = Element::zero();
        e.add_term(ring, degree, idx, coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, ring: &R, degree: i64, idx: usize, coeff: R::Elem) {
        if ring.is_zero(&coeff) {
            return;
        }
        let entry = self.terms.entry((degree, idx));
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ring.add(o.get(), &coeff);
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
        for ((d, i), c) in &other.terms {
            out.add_term(ring, *d, *i, c.clone());
        }
        out
    }

    pub fn sub(&self, ring: &R, other: &Self) -> Self {
        self.add(ring, &other.scale(ring, &ring.from_int(-1)))
    }

    pub fn scale(&self, ring: &R, c: &R::Elem) -> Self {
        if ring.is_zero(c) {
            return Element::zero();
        }
        let mut out = Element::zero();
        for ((d, i), a) in &self.terms {
            out.add_term(ring, *d, *i, ring.mul(a, c));
        }
        out
    }

    pub fn neg(&self, ring: &R) -> Self {
        self.scale(ring, &ring.from_int(-1))
    }

    /// The common degree of all terms, if homogeneous (zero is any degree).
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|(d, _)| *d);
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn show(&self, ring: &R, module: &GradedModule) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((d, i), c)| format!("{}*{}", ring.show(c), module.label(*d, *i)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A degree-homogeneous linear map given by sparse columns.
///
/// The column at source position `(d, i)` is an element of the target in
/// degree `d + shift`; missing columns are zero.
#[derive(Clone, Debug)]
pub struct LinearMap<R: Ring> {
    pub shift: i64,
    pub cols: BTreeMap<(i64, usize), Element<R>>,
}

impl<R: Ring> LinearMap<R> {
    pub fn zero(shift: i64) -> Self {
        LinearMap {
            shift,
            cols: BTreeMap::new(),
        }
    }

    pub fn set_column(&mut self, degree: i64, idx: usize, value: Element<R>) {
        if !value.is_zero() {
            self.cols.insert((degree, idx), value);
        }
    }

    pub fn column(&self, degree: i64, idx: usize) -> Element<R> {
        self.cols
            .get(&(degree, idx))
            .cloned()
            .unwrap_or_else(Element::zero)
    }

    pub fn apply(&self, ring: &R, x: &Element<R>) -> Element<R> {
        let mut out = Element::zero();
        for ((d, i), c) in &x.terms {
            for ((td, ti), tc) in self.column(*d, *i).terms {
                out.add_term(ring, td, ti, ring.mul(&tc, c));
            }
        }
        out
    }

    /// Dense block of the map from source degree `d`, as rows of target
    /// coefficients: `block[j][i]` is the coefficient of target basis `j`
    /// in the image of source basis `i`.
    pub fn block(
        &self,
        ring: &R,
        source: &GradedModule,
        target: &GradedModule,
        d: i64,
    ) -> Vec<Vec<R::Elem>> {
        let n = source.rank(d);
        let m = target.rank(d + self.shift);
        let mut out = vec![vec![ring.zero(); n]; m];
        for i in 0..n {
            for ((td, tj), c) in self.column(d, i).terms {
                debug_assert_eq!(td, d + self.shift);
                out[tj][i] = c;
            }
        }
        out
    }
}

/// A chain complex: a graded module plus a differential of degree -1.
#[derive(Clone, Debug)]
pub struct ChainComplex<R: Ring> {
    pub ring: R,
    pub module: GradedModule,
    pub d: LinearMap<R>,
}

impl<R: Ring> ChainComplex<R> {
    pub fn new(ring: R, module: GradedModule, d: LinearMap<R>) -> Self {
        assert_eq!(d.shift, -1, "differential must have degree -1");
        ChainComplex { ring, module, d }
    }

    /// Check d(d(x)) = 0 on every basis element of every stored degree.
    pub fn check_dd_zero(&self) -> Result<()> {
        for (deg, idx) in self.module.positions() {
            let once = self.d.column(deg, idx);
            let twice = self.d.apply(&self.ring, &once);
            if !twice.is_zero() {
                return Err(AlgError::AxiomViolation {
                    axiom: "d∘d = 0".into(),
                    witness: format!("{} in degree {deg}", self.module.label(deg, idx)),
                });
            }
        }
        Ok(())
    }

    pub fn differential(&self, x: &Element<R>) -> Element<R> {
        self.d.apply(&self.ring, x)
    }
}

/// Koszul sign of the permutation sending slot `i` to slot `perm[i]`
/// (0-based), acting on homogeneous factors of the given degrees: the sign
/// accumulated when the factor originally at slot i moves to slot perm[i].
pub fn koszul_permutation_sign(degrees: &[i64], perm: &[usize]) -> i64 {
    // product over pairs i < j with perm[i] > perm[j] of (-1)^{|x_i||x_j|}
    let mut exp = 0i64;
    for i in 0..degrees.len() {
        for j in (i + 1)..degrees.len() {
            if perm[i] > perm[j] {
                exp += degrees[i] * degrees[j];
            }
        }
    }
    exp.rem_euclid(2)
}

/// Tensor product of chain complexes with the Koszul sign rule.
///
/// Basis labels are `l1⊗l2`; the degree window is intersected so that all
/// pair degrees stay representable.
pub fn tensor<R: Ring>(x: &ChainComplex<R>, y: &ChainComplex<R>) -> Result<ChainComplex<R>> {
    let ring = x.ring.clone();
    let window = Window::new(
        x.module.window.min + y.module.window.min,
        x.module.window.max + y.module.window.max,
    );
    let mut module = GradedModule::new(window);
    // index map (dx, ix, dy, iy) -> (deg, idx)
    let mut pos = BTreeMap::new();
    for (dx, ix) in x.module.positions() {
        for (dy, iy) in y.module.positions() {
            let label = format!("{}⊗{}", x.module.label(dx, ix), y.module.label(dy, iy));
            let idx = module.add_basis_label(dx + dy, label)?;
            pos.insert((dx, ix, dy, iy), (dx + dy, idx));
        }
    }
    let mut d = LinearMap::zero(-1);
    for (&(dx, ix, dy, iy), &(deg, idx)) in &pos {
        let mut col = Element::zero();
        // d(x)⊗y
        for ((td, ti), c) in x.d.column(dx, ix).terms {
            if let Some(&(pd, pi)) = pos.get(&(td, ti, dy, iy)) {
                debug_assert_eq!(pd, deg - 1);
                col.add_term(&ring, pd, pi, c);
            }
        }
        // (-1)^{|x|} x⊗d(y)
        for ((td, ti), c) in y.d.column(dy, iy).terms {
            if let Some(&(pd, pi)) = pos.get(&(dx, ix, td, ti)) {
                col.add_term(&ring, pd, pi, ring.signed(&c, dx));
            }
        }
        d.set_column(deg, idx, col);
    }
    Ok(ChainComplex::new(ring, module, d))
}

/// Shift a complex by `k`: degrees move up by `k` and the differential picks
/// up the sign (-1)^k, the Koszul rule for R[k]⊗C.
pub fn suspend<R: Ring>(x: &ChainComplex<R>, k: i64) -> ChainComplex<R> {
    let ring = x.ring.clone();
    let window = Window::new(x.module.window.min + k, x.module.window.max + k);
    let mut module = GradedModule::new(window);
    for (d0, i0) in x.module.positions() {
        let label = x.module.label(d0, i0).to_string();
        let idx = module.add_basis_label(d0 + k, label).expect("in window");
        debug_assert_eq!(idx, i0);
    }
    let mut d = LinearMap::zero(-1);
    for ((sd, si), col) in &x.d.cols {
        let mut shifted = Element::zero();
        for ((td, ti), c) in &col.terms {
            shifted.add_term(&ring, td + k, *ti, ring.signed(c, k));
        }
        d.set_column(sd + k, *si, shifted);
    }
    ChainComplex::new(ring, module, d)
}

/// Mapping cone of a chain map f: X -> Y (degree 0): cone_n = X_{n-1} ⊕ Y_n
/// with d(x, y) = (-d x, f(x) + d y). Acyclicity of the cone in a window is
/// the quasi-isomorphism test used throughout.
pub fn mapping_cone<R: Ring>(
    x: &ChainComplex<R>,
    y: &ChainComplex<R>,
    f: &LinearMap<R>,
) -> Result<ChainComplex<R>> {
    assert_eq!(f.shift, 0, "cone needs a degree-0 chain map");
    let ring = x.ring.clone();
    let window = Window::new(
        y.module.window.min.min(x.module.window.min + 1),
        y.module.window.max.max(x.module.window.max + 1),
    );
    let mut module = GradedModule::new(window);
    let mut xpos = BTreeMap::new();
    let mut ypos = BTreeMap::new();
    for n in window.min..=window.max {
        for i in 0..x.module.rank(n - 1) {
            let idx = module.add_basis_label(n, format!("x:{}", x.module.label(n - 1, i)))?;
            xpos.insert((n - 1, i), (n, idx));
        }
        for i in 0..y.module.rank(n) {
            let idx = module.add_basis_label(n, format!("y:{}", y.module.label(n, i)))?;
            ypos.insert((n, i), (n, idx));
        }
    }
    let mut d = LinearMap::zero(-1);
    for (&(dx, ix), &(n, idx)) in &xpos {
        let mut col = Element::zero();
        for ((td, ti), c) in x.d.column(dx, ix).terms {
            if let Some(&(cd, ci)) = xpos.get(&(td, ti)) {
                debug_assert_eq!(cd, n - 1);
                col.add_term(&ring, cd, ci, ring.neg(&c));
            }
        }
        for ((td, ti), c) in f.column(dx, ix).terms {
            if let Some(&(cd, ci)) = ypos.get(&(td, ti)) {
                debug_assert_eq!(cd, n - 1);
                col.add_term(&ring, cd, ci, c);
            }
        }
        d.set_column(n, idx, col);
    }
    for (&(dy, iy), &(n, idx)) in &ypos {
        let mut col = Element::zero();
        for ((td, ti), c) in y.d.column(dy, iy).terms {
            if let Some(&(cd, ci)) = ypos.get(&(td, ti)) {
                col.add_term(&ring, cd, ci, c);
            }
        }
        d.set_column(n, idx, col);
    }
    Ok(ChainComplex::new(ring, module, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ZZ;

    fn interval_complex() -> ChainComplex<ZZ> {
        // 0 -> Z --2--> Z -> 0 in degrees 1, 0
        let mut m = GradedModule::new(Window::new(-1, 2));
        m.add_basis_label(0, "e0").unwrap();
        m.add_basis_label(1, "e1").unwrap();
        let mut d = LinearMap::zero(-1);
        d.set_column(1, 0, Element::single(0, 0, ZZ.from_int(2), &ZZ));
        ChainComplex::new(ZZ, m, d)
    }

    #[test]
    fn dd_zero_and_apply() {
        let c = interval_complex();
        c.check_dd_zero().unwrap();
        let x = Element::basis(1, 0, &ZZ);
        let dx = c.differential(&x);
        assert_eq!(dx.terms[&(0, 0)], ZZ.from_int(2));
    }

    #[test]
    fn suspension_sign() {
        let c = interval_complex();
        let s = suspend(&c, 1);
        // d(Σ e1) = -Σ(d e1)
        let col = s.d.column(2, 0);
        assert_eq!(col.terms[&(1, 0)], ZZ.from_int(-2));
        let back = suspend(&s, -1);
        assert_eq!(back.d.column(1, 0).terms, c.d.column(1, 0).terms);
        let s0 = suspend(&c, 0);
        assert_eq!(s0.d.column(1, 0).terms, c.d.column(1, 0).terms);
    }

    #[test]
    fn tensor_unit_and_koszul() {
        // X = Z in degree 0 acts as the unit object
        let mut m = GradedModule::new(Window::new(0, 0));
        m.add_basis_label(0, "1").unwrap();
        let unit = ChainComplex::new(ZZ, m, LinearMap::zero(-1));
        let c = interval_complex();
        let t = tensor(&unit, &c).unwrap();
        assert_eq!(t.module.rank(0), 1);
        assert_eq!(t.module.rank(1), 1);
        assert_eq!(t.d.column(1, 0).terms[&(0, 0)], ZZ.from_int(2));
        t.check_dd_zero().unwrap();

        // Koszul: with x' in degree 2, dx' = x (degree 1), y a degree-1
        // cycle: d(x'⊗y) = x⊗y (sign (+1)^{|x'|} on the x'⊗dy term, absent).
        let mut mx = GradedModule::new(Window::new(0, 2));
        mx.add_basis_label(1, "x").unwrap();
        mx.add_basis_label(2, "x'").unwrap();
        let mut dx = LinearMap::zero(-1);
        dx.set_column(2, 0, Element::basis(1, 0, &ZZ));
        let cx = ChainComplex::new(ZZ, mx, dx);
        let mut my = GradedModule::new(Window::new(0, 1));
        my.add_basis_label(1, "y").unwrap();
        let cy = ChainComplex::new(ZZ, my, LinearMap::zero(-1));
        let t2 = tensor(&cx, &cy).unwrap();
        let dcol = t2.d.column(3, 0);
        assert_eq!(dcol.terms.len(), 1);
        assert_eq!(dcol.terms[&(2, 0)], ZZ.from_int(1));
    }

    #[test]
    fn koszul_sign_swap() {
        assert_eq!(koszul_permutation_sign(&[1, 1], &[1, 0]), 1);
        assert_eq!(koszul_permutation_sign(&[2, 1], &[1, 0]), 0);
        assert_eq!(koszul_permutation_sign(&[1, 1, 1], &[2, 0, 1]), 0);
    }
}
