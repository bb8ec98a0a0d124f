//! Homology of degree-windowed chain complexes.
//!
//! Over the integers, Betti numbers and torsion invariant factors come from
//! Smith normal form; over a field, from exact rank computations. Torsion is
//! reported as invariant factors, and representatives (when requested) are
//! the SNF-induced preimages with no minimization.

use crate::error::{AlgError, Result};
use crate::graded::{ChainComplex, Element, Window};
use crate::ring::{Ring, ZZ};
use crate::snf::{self, IMat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology {
    pub betti: usize,
    /// Invariant factors > 1 (empty over a field).
    pub torsion: Vec<BigInt>,
    pub representatives: Option<Vec<Vec<BigInt>>>,
}

#[derive(Clone, Debug, Default)]
pub struct HomologyReport {
    pub by_degree: BTreeMap<i64, DegreeHomology>,
}

impl HomologyReport {
    pub fn betti(&self, d: i64) -> usize {
        self.by_degree.get(&d).map_or(0, |h| h.betti)
    }
    pub fn torsion(&self, d: i64) -> Vec<BigInt> {
        self.by_degree.get(&d).map_or_else(Vec::new, |h| h.torsion.clone())
    }
    pub fn is_trivial(&self) -> bool {
        self.by_degree
            .values()
            .all(|h| h.betti == 0 && h.torsion.is_empty())
    }
}

fn int_block<R: Ring>(
    x: &ChainComplex<R>,
    to_bigint: &impl Fn(&R::Elem) -> BigInt,
    d: i64,
) -> IMat {
    let n = x.module.rank(d);
    let m = x.module.rank(d - 1);
    let mut out = snf::zeros(m, n);
    for i in 0..n {
        for ((td, tj), c) in x.d.column(d, i).terms {
            debug_assert_eq!(td, d - 1);
            out[tj][i] = to_bigint(&c);
        }
    }
    out
}

/// Integral homology in `window`. Requires the complex to store (possibly
/// empty) bases at the two boundary degrees of the window.
pub fn homology_z(
    x: &ChainComplex<ZZ>,
    window: Window,
    with_reps: bool,
) -> Result<HomologyReport> {
    for d in [window.min - 1, window.max + 1] {
        if !x.module.window.contains(d) {
            return Err(AlgError::WindowTooNarrow(
                d,
                x.module.window.min,
                x.module.window.max,
            ));
        }
    }
    let mut report = HomologyReport::default();
    for n in window.iter() {
        let rank_n = x.module.rank(n);
        if rank_n == 0 {
            report.by_degree.insert(
                n,
                DegreeHomology {
                    betti: 0,
                    torsion: vec![],
                    representatives: with_reps.then(Vec::new),
                },
            );
            continue;
        }
        let dn = int_block(x, &Clone::clone, n);
        let dn1 = int_block(x, &Clone::clone, n + 1);
        // kernel basis of d_n: columns of V past the rank; with no target
        // the kernel is everything
        let (r, kernel) = if x.module.rank(n - 1) == 0 {
            (0usize, snf::identity(rank_n))
        } else {
            let s = snf::smith_normal_form(&dn);
            let r = s.rank();
            let mut kernel: IMat = snf::zeros(rank_n, rank_n - r);
            for (jj, j) in (r..rank_n).enumerate() {
                for i in 0..rank_n {
                    kernel[i][jj] = s.v[i][j].clone();
                }
            }
            (r, kernel)
        };
        let k = rank_n - r;
        // express im(d_{n+1}) in kernel coordinates: K·X = B
        let cols_b = if dn1.is_empty() { 0 } else { dn1[0].len() };
        let mut xmat = snf::zeros(k, cols_b);
        if k > 0 && cols_b > 0 {
            let sk = snf::smith_normal_form(&kernel);
            // kernel is saturated: its invariant factors are all 1
            debug_assert!(sk.invariant_factors().iter().all(|f| f.is_one()));
            let ub = snf::mat_mul(&sk.u, &dn1);
            let mut y = snf::zeros(k, cols_b);
            for i in 0..k {
                for j in 0..cols_b {
                    y[i][j] = ub[i][j].clone();
                }
            }
            for i in k..ub.len() {
                for j in 0..cols_b {
                    assert!(
                        ub[i][j].is_zero(),
                        "image must lie in the kernel (d∘d = 0)"
                    );
                }
            }
            xmat = snf::mat_mul(&sk.v, &y);
        } else if cols_b > 0 {
            // no kernel: image must be zero
            for row in &dn1 {
                for e in row {
                    assert!(e.is_zero(), "image must lie in the kernel");
                }
            }
        }
        let sx = snf::smith_normal_form(&xmat);
        let rx = sx.rank();
        let betti = k - rx;
        let torsion: Vec<BigInt> = sx
            .invariant_factors()
            .into_iter()
            .filter(|f| !f.is_one())
            .collect();
        let representatives = with_reps.then(|| {
            // adapted kernel basis K' = K · U_X^{-1}
            let kp = if k > 0 {
                snf::mat_mul(&kernel, &sx.u_inv)
            } else {
                kernel.clone()
            };
            let mut reps = Vec::new();
            for j in 0..k {
                let factor = if j < rx {
                    sx.d[j][j].clone()
                } else {
                    BigInt::zero()
                };
                let keep = factor.is_zero() || !factor.is_one();
                if keep {
                    reps.push((0..rank_n).map(|i| kp[i][j].clone()).collect());
                }
            }
            reps
        });
        report.by_degree.insert(
            n,
            DegreeHomology {
                betti,
                torsion,
                representatives,
            },
        );
    }
    Ok(report)
}

/// Homology over a field, by exact rank computations.
pub fn homology_field<R: Ring>(
    x: &ChainComplex<R>,
    window: Window,
    with_reps: bool,
) -> Result<HomologyReport> {
    if !x.ring.is_field() {
        if let Some(m) = ring_modulus(&x.ring) {
            return Err(AlgError::NotAField(m));
        }
        return Err(AlgError::Other(format!(
            "homology over {} needs the integral engine",
            x.ring.name()
        )));
    }
    for d in [window.min - 1, window.max + 1] {
        if !x.module.window.contains(d) {
            return Err(AlgError::WindowTooNarrow(
                d,
                x.module.window.min,
                x.module.window.max,
            ));
        }
    }
    let ring = &x.ring;
    let mut report = HomologyReport::default();
    for n in window.iter() {
        let rank_n = x.module.rank(n);
        let rows_dn: Vec<Vec<R::Elem>> = transpose_block(x, n);
        let (_, rank_dn) = snf::field_echelon(ring, &rows_dn);
        let rows_dn1: Vec<Vec<R::Elem>> = transpose_block(x, n + 1);
        let (ech_im, rank_dn1) = snf::field_echelon(ring, &rows_dn1);
        let nullity = rank_n - rank_dn;
        let betti = nullity - rank_dn1;
        let representatives = with_reps.then(|| {
            // kernel basis of d_n, then keep those independent mod image
            let kernel = field_nullspace(ring, x, n);
            let mut ech = ech_im.clone();
            let mut reps = Vec::new();
            for v in kernel {
                let resid = snf::field_reduce(ring, &ech, &v);
                if resid.iter().any(|c| !ring.is_zero(c)) {
                    ech.push(resid);
                    let (e2, _) = snf::field_echelon(ring, &ech);
                    ech = e2;
                    reps.push(v.iter().map(|_| BigInt::zero()).collect());
                }
            }
            reps
        });
        report.by_degree.insert(
            n,
            DegreeHomology {
                betti,
                torsion: vec![],
                representatives,
            },
        );
    }
    Ok(report)
}

fn ring_modulus<R: Ring>(ring: &R) -> Option<u64> {
    let name = ring.name();
    name.strip_prefix("Z/").and_then(|s| s.parse().ok())
}

/// Rows = images of source basis vectors of degree `d` (so the matrix rows
/// span the image of d_d).
fn transpose_block<R: Ring>(x: &ChainComplex<R>, d: i64) -> Vec<Vec<R::Elem>> {
    let n = x.module.rank(d);
    let m = x.module.rank(d - 1);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![x.ring.zero(); m];
        for ((td, tj), c) in x.d.column(d, i).terms {
            debug_assert_eq!(td, d - 1);
            row[tj] = c;
        }
        rows.push(row);
    }
    rows
}

fn field_nullspace<R: Ring>(ring: &R, x: &ChainComplex<R>, d: i64) -> Vec<Vec<R::Elem>> {
    let n = x.module.rank(d);
    let m = x.module.rank(d - 1);
    // RREF of the m×n matrix of d_d
    let mut mat = vec![vec![ring.zero(); n]; m];
    for i in 0..n {
        for ((_, tj), c) in x.d.column(d, i).terms {
            mat[tj][i] = c;
        }
    }
    let (rref, _) = snf::field_echelon(ring, &mat);
    let mut pivot_of_col = vec![None; n];
    for (r, row) in rref.iter().enumerate() {
        if let Some(c) = row.iter().position(|x| !ring.is_zero(x)) {
            pivot_of_col[c] = Some(r);
        }
    }
    let mut basis = Vec::new();
    for j in 0..n {
        if pivot_of_col[j].is_some() {
            continue;
        }
        let mut v = vec![ring.zero(); n];
        v[j] = ring.one();
        for (c, p) in pivot_of_col.iter().enumerate() {
            if let Some(r) = p {
                v[c] = ring.neg(&ring.mul(&rref[*r][j], &ring.inv(&rref[*r][c]).unwrap()));
            }
        }
        basis.push(v);
    }
    basis
}

/// Dispatch on the ring: integral engine for Z, field engine otherwise.
pub fn homology<R: Ring>(
    x: &ChainComplex<R>,
    window: Window,
    with_reps: bool,
) -> Result<HomologyReport> {
    if x.ring.name() == "Z" {
        // re-build as a ZZ complex through the shared representation
        let z = reinterpret_as_z(x)?;
        homology_z(&z, window, with_reps)
    } else {
        homology_field(x, window, with_reps)
    }
}

fn reinterpret_as_z<R: Ring>(x: &ChainComplex<R>) -> Result<ChainComplex<ZZ>> {
    let mut d = crate::graded::LinearMap::zero(-1);
    for ((sd, si), col) in &x.d.cols {
        let mut e: Element<ZZ> = Element::zero();
        for ((td, ti), c) in &col.terms {
            let s = x.ring.show(c);
            let v: BigInt = s
                .parse()
                .map_err(|_| AlgError::Other(format!("non-integer coefficient {s}")))?;
            e.add_term(&ZZ, *td, *ti, v);
        }
        d.set_column(*sd, *si, e);
    }
    Ok(ChainComplex::new(ZZ, x.module.clone(), d))
}

/// Verify that the representatives in an integral report are cycles.
pub fn check_representatives(x: &ChainComplex<ZZ>, report: &HomologyReport) -> Result<()> {
    for (&n, h) in &report.by_degree {
        if let Some(reps) = &h.representatives {
            for rep in reps {
                let mut e: Element<ZZ> = Element::zero();
                for (i, c) in rep.iter().enumerate() {
                    e.add_term(&ZZ, n, i, c.clone());
                }
                if !x.differential(&e).is_zero() {
                    return Err(AlgError::NotACycle(n));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{GradedModule, LinearMap};
    use crate::ring::QQ;

    fn two_term(k: i64) -> ChainComplex<ZZ> {
        let mut m = GradedModule::new(Window::new(-1, 2));
        m.add_basis_label(0, "a").unwrap();
        m.add_basis_label(1, "b").unwrap();
        let mut d = LinearMap::zero(-1);
        if k != 0 {
            d.set_column(1, 0, Element::single(0, 0, ZZ.from_int(k), &ZZ));
        }
        ChainComplex::new(ZZ, m, d)
    }

    #[test]
    fn zero_differential_circle() {
        // normalized chains of S^1 = Δ[1]/∂Δ[1]: one 0-cell, one 1-cell,
        // d(edge) = pt - pt = 0
        let c = two_term(0);
        let h = homology_z(&c, Window::new(0, 1), true).unwrap();
        assert_eq!(h.betti(0), 1);
        assert_eq!(h.betti(1), 1);
        assert!(h.torsion(0).is_empty());
        check_representatives(&c, &h).unwrap();
    }

    #[test]
    fn multiplication_by_two() {
        let c = two_term(2);
        let h = homology_z(&c, Window::new(0, 1), false).unwrap();
        assert_eq!(h.betti(0), 0);
        assert_eq!(h.torsion(0), vec![BigInt::from(2)]);
        assert_eq!(h.betti(1), 0);
        assert!(h.torsion(1).is_empty());
    }

    #[test]
    fn window_too_narrow() {
        let c = two_term(2);
        let err = homology_z(&c, Window::new(-1, 1), false).unwrap_err();
        assert!(matches!(err, AlgError::WindowTooNarrow(..)));
    }

    #[test]
    fn rational_betti_matches_integers_rationally() {
        // H(Z --2--> Z): over Q the multiplication by 2 is invertible
        let mut m = GradedModule::new(Window::new(-1, 2));
        m.add_basis_label(0, "a").unwrap();
        m.add_basis_label(1, "b").unwrap();
        let mut d = LinearMap::zero(-1);
        d.set_column(1, 0, Element::single(0, 0, QQ.from_int(2), &QQ));
        let c = ChainComplex::new(QQ, m, d);
        let h = homology_field(&c, Window::new(0, 1), true).unwrap();
        assert_eq!(h.betti(0), 0);
        assert_eq!(h.betti(1), 0);
    }

    #[test]
    fn three_term_with_torsion_and_free_part() {
        // Z^2 --[[2,0],[0,0]]--> Z^2, degrees 1 -> 0
        let mut m = GradedModule::new(Window::new(-1, 2));
        m.add_basis_label(0, "a0").unwrap();
        m.add_basis_label(0, "a1").unwrap();
        m.add_basis_label(1, "b0").unwrap();
        m.add_basis_label(1, "b1").unwrap();
        let mut d = LinearMap::zero(-1);
        d.set_column(1, 0, Element::single(0, 0, ZZ.from_int(2), &ZZ));
        let c = ChainComplex::new(ZZ, m, d);
        let h = homology_z(&c, Window::new(0, 1), true).unwrap();
        assert_eq!(h.betti(0), 1);
        assert_eq!(h.torsion(0), vec![BigInt::from(2)]);
        assert_eq!(h.betti(1), 1);
        check_representatives(&c, &h).unwrap();
        // representatives: torsion generator + free generator in degree 0
        assert_eq!(h.by_degree[&0].representatives.as_ref().unwrap().len(), 2);
    }
}
