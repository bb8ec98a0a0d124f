//! Smith and Hermite normal forms over the integers, with unimodular
//! transformation matrices, plus exact rank/echelon reduction over fields.
//!
//! Matrices are dense `Vec<Vec<_>>` row-major; everything here is desk scale.

use crate::ring::Ring;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;

pub fn zeros(r: usize, c: usize) -> IMat {
    vec![vec![BigInt::zero(); c]; r]
}

pub fn identity(n: usize) -> IMat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let r = a.len();
    let inner = if r > 0 { a[0].len() } else { 0 };
    let c = if b.is_empty() { 0 } else { b[0].len() };
    assert_eq!(inner, b.len(), "shape mismatch");
    let mut out = zeros(r, c);
    for i in 0..r {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..c {
                let p = &a[i][k] * &b[k][j];
                out[i][j] += p;
            }
        }
    }
    out
}

/// Result of `smith_normal_form`: U·M·V = D with U, V unimodular and D
/// diagonal with d_i | d_{i+1}, all d_i >= 0. The inverses are tracked so
/// callers can change basis back.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IMat,
    pub u_inv: IMat,
    pub d: IMat,
    pub v: IMat,
    pub v_inv: IMat,
}

impl Snf {
    pub fn rank(&self) -> usize {
        let n = self.d.len().min(if self.d.is_empty() { 0 } else { self.d[0].len() });
        (0..n).filter(|&i| !self.d[i][i].is_zero()).count()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.len().min(if self.d.is_empty() { 0 } else { self.d[0].len() });
        (0..n)
            .map(|i| self.d[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

struct SnfCalc {
    m: IMat,
    u: IMat,
    u_inv: IMat,
    v: IMat,
    v_inv: IMat,
    rows: usize,
    cols: usize,
}

impl SnfCalc {
    fn new(m: IMat) -> Self {
        let rows = m.len();
        let cols = if rows > 0 { m[0].len() } else { 0 };
        SnfCalc {
            m,
            u: identity(rows),
            u_inv: identity(rows),
            v: identity(cols),
            v_inv: identity(cols),
            rows,
            cols,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.m.swap(a, b);
        self.u.swap(a, b);
        // inverse of a swap is the same swap, applied as a column op on u_inv
        for row in self.u_inv.iter_mut() {
            row.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.m.iter_mut() {
            row.swap(a, b);
        }
        for row in self.v.iter_mut() {
            row.swap(a, b);
        }
        self.v_inv.swap(a, b);
    }

    /// row[a] += q * row[b];  tracked as U := E·U, U_inv := U_inv·E^{-1}.
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let p = q * &self.m[b][j];
            self.m[a][j] += p;
        }
        for j in 0..self.rows {
            let p = q * &self.u[b][j];
            self.u[a][j] += p;
        }
        for i in 0..self.rows {
            let p = q * &self.u_inv[i][a];
            self.u_inv[i][b] -= p;
        }
    }

    /// col[a] += q * col[b].
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let p = q * &self.m[i][b];
            self.m[i][a] += p;
        }
        for i in 0..self.cols {
            let p = q * &self.v[i][b];
            self.v[i][a] += p;
        }
        for j in 0..self.cols {
            let p = q * &self.v_inv[a][j];
            self.v_inv[b][j] -= p;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            self.m[a][j] = -self.m[a][j].clone();
        }
        for j in 0..self.rows {
            self.u[a][j] = -self.u[a][j].clone();
        }
        for i in 0..self.rows {
            self.u_inv[i][a] = -self.u_inv[i][a].clone();
        }
    }

    fn pivot_at(&self, from: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in from..self.rows {
            for j in from..self.cols {
                if self.m[i][j].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if self.m[i][j].abs() < self.m[bi][bj].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }

    fn process(&mut self) {
        let mut t = 0usize;
        while let Some((pi, pj)) = self.pivot_at(t) {
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            // clear column and row below/right of the pivot
            let mut dirty = true;
            while dirty {
                dirty = false;
                for i in (t + 1)..self.rows {
                    if self.m[i][t].is_zero() {
                        continue;
                    }
                    let q = -(&self.m[i][t] / &self.m[t][t]);
                    self.add_row(i, t, &q);
                    if !self.m[i][t].is_zero() {
                        // remainder smaller than pivot: swap up and restart
                        self.swap_rows(t, i);
                        dirty = true;
                    }
                }
                for j in (t + 1)..self.cols {
                    if self.m[t][j].is_zero() {
                        continue;
                    }
                    let q = -(&self.m[t][j] / &self.m[t][t]);
                    self.add_col(j, t, &q);
                    if !self.m[t][j].is_zero() {
                        self.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            if self.m[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        // enforce divisibility d_i | d_{i+1}
        let n = self.rows.min(self.cols);
        let mut i = 0;
        while i + 1 < n {
            if self.m[i][i].is_zero() || self.m[i + 1][i + 1].is_zero() {
                i += 1;
                continue;
            }
            if (&self.m[i + 1][i + 1] % &self.m[i][i]).is_zero() {
                i += 1;
                continue;
            }
            // fold the next diagonal entry into column i and re-run from i
            self.add_col(i, i + 1, &BigInt::one());
            let mut t = i;
            while let Some((pi, pj)) = self.pivot_at(t) {
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let mut dirty = true;
                while dirty {
                    dirty = false;
                    for r in (t + 1)..self.rows {
                        if self.m[r][t].is_zero() {
                            continue;
                        }
                        let q = -(&self.m[r][t] / &self.m[t][t]);
                        self.add_row(r, t, &q);
                        if !self.m[r][t].is_zero() {
                            self.swap_rows(t, r);
                            dirty = true;
                        }
                    }
                    for c in (t + 1)..self.cols {
                        if self.m[t][c].is_zero() {
                            continue;
                        }
                        let q = -(&self.m[t][c] / &self.m[t][t]);
                        self.add_col(c, t, &q);
                        if !self.m[t][c].is_zero() {
                            self.swap_cols(t, c);
                            dirty = true;
                        }
                    }
                }
                if self.m[t][t].is_negative() {
                    self.negate_row(t);
                }
                t += 1;
            }
            i = 0; // divisibility may have been disturbed upstream
        }
    }
}

/// Smith normal form U·M·V = D over the integers.
pub fn smith_normal_form(m: &IMat) -> Snf {
    let mut calc = SnfCalc::new(m.clone());
    calc.process();
    Snf {
        u: calc.u,
        u_inv: calc.u_inv,
        d: calc.m,
        v: calc.v,
        v_inv: calc.v_inv,
    }
}

/// Column-style Hermite normal form: returns a matrix whose nonzero columns
/// form a triangular basis of the integer column span of `m`.
pub fn hermite_column_basis(m: &IMat) -> IMat {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut w = m.clone();
    let mut pivot_col = 0usize;
    for r in 0..rows {
        if pivot_col >= cols {
            break;
        }
        loop {
            // find column with the smallest nonzero entry in row r
            let mut best: Option<usize> = None;
            for j in pivot_col..cols {
                if w[r][j].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(j),
                    Some(b) => {
                        if w[r][j].abs() < w[r][b].abs() {
                            best = Some(j);
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            for row in w.iter_mut() {
                row.swap(pivot_col, b);
            }
            let mut again = false;
            for j in (pivot_col + 1)..cols {
                if w[r][j].is_zero() {
                    continue;
                }
                let q = &w[r][j] / &w[r][pivot_col];
                for i in 0..rows {
                    let p = &q * &w[i][pivot_col];
                    w[i][j] -= p;
                }
                if !w[r][j].is_zero() {
                    again = true;
                }
            }
            if !again {
                break;
            }
        }
        if !w[r][pivot_col].is_zero() {
            if w[r][pivot_col].is_negative() {
                for i in 0..rows {
                    w[i][pivot_col] = -w[i][pivot_col].clone();
                }
            }
            // reduce earlier columns against this pivot
            for j in 0..pivot_col {
                if w[r][j].is_zero() {
                    continue;
                }
                let q = w[r][j].div_floor(&w[r][pivot_col]);
                for i in 0..rows {
                    let p = &q * &w[i][pivot_col];
                    w[i][j] -= p;
                }
            }
            pivot_col += 1;
        }
    }
    w
}

/// Decide membership of `v` in the integer column span described by a
/// Hermite column basis (as returned by `hermite_column_basis`).
pub fn hermite_member(h: &IMat, v: &[BigInt]) -> bool {
    let rows = h.len();
    if rows == 0 {
        return v.iter().all(BigInt::is_zero);
    }
    let cols = h[0].len();
    let mut r = v.to_vec();
    let mut col = 0usize;
    for i in 0..rows {
        if r[i].is_zero() {
            continue;
        }
        // find a column with pivot in row i
        let mut found = None;
        for j in col..cols {
            if !h[i][j].is_zero() && (0..i).all(|k| h[k][j].is_zero()) {
                found = Some(j);
                break;
            }
        }
        match found {
            Some(j) => {
                if !(&r[i] % &h[i][j]).is_zero() {
                    return false;
                }
                let q = &r[i] / &h[i][j];
                for k in 0..rows {
                    let p = &q * &h[k][j];
                    r[k] -= p;
                }
                col = j + 1;
            }
            None => return false,
        }
    }
    r.iter().all(BigInt::is_zero)
}

pub fn determinant(m: &IMat) -> BigInt {
    // Bareiss fraction-free elimination
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    assert_eq!(m[0].len(), n, "determinant needs a square matrix");
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let swap = ((k + 1)..n).find(|&i| !a[i][k].is_zero());
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Row-echelon reduction over a field; returns (reduced rows, rank).
/// Rows are reduced in place; zero rows are dropped.
pub fn field_echelon<R: Ring>(ring: &R, rows: &[Vec<R::Elem>]) -> (Vec<Vec<R::Elem>>, usize) {
    assert!(ring.is_field(), "echelon reduction needs a field");
    let mut work: Vec<Vec<R::Elem>> = rows.to_vec();
    let cols = work.first().map_or(0, Vec::len);
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pivot) = (rank..work.len()).find(|&i| !ring.is_zero(&work[i][c])) else {
            continue;
        };
        work.swap(rank, pivot);
        let inv = ring.inv(&work[rank][c]).expect("field inverse");
        for x in work[rank].iter_mut() {
            *x = ring.mul(x, &inv);
        }
        for i in 0..work.len() {
            if i != rank && !ring.is_zero(&work[i][c]) {
                let f = work[i][c].clone();
                for j in 0..cols {
                    let t = ring.mul(&work[rank][j], &f);
                    work[i][j] = ring.sub(&work[i][j], &t);
                }
            }
        }
        rank += 1;
    }
    work.truncate(rank);
    (work, rank)
}

/// Reduce `v` against echelon rows; returns the residue.
pub fn field_reduce<R: Ring>(ring: &R, echelon: &[Vec<R::Elem>], v: &[R::Elem]) -> Vec<R::Elem> {
    let mut r = v.to_vec();
    for row in echelon {
        let Some(c) = row.iter().position(|x| !ring.is_zero(x)) else {
            continue;
        };
        if !ring.is_zero(&r[c]) {
            let f = ring.mul(&r[c], &ring.inv(&row[c]).expect("pivot unit"));
            for j in 0..r.len() {
                let t = ring.mul(&row[j], &f);
                r[j] = ring.sub(&r[j], &t);
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_i64(m: &[&[i64]]) -> IMat {
        m.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn check_snf(m: &IMat) {
        let s = smith_normal_form(m);
        let umv = mat_mul(&mat_mul(&s.u, m), &s.v);
        assert_eq!(umv, s.d, "U·M·V = D");
        assert_eq!(determinant(&s.u).abs(), BigInt::one(), "U unimodular");
        assert_eq!(determinant(&s.v).abs(), BigInt::one(), "V unimodular");
        assert_eq!(mat_mul(&s.u, &s.u_inv), identity(m.len()));
        let c = if m.is_empty() { 0 } else { m[0].len() };
        assert_eq!(mat_mul(&s.v, &s.v_inv), identity(c));
        // diagonal with divisibility
        for i in 0..s.d.len() {
            for j in 0..c {
                if i != j {
                    assert!(s.d[i][j].is_zero(), "off-diagonal zero");
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility {f:?}");
        }
    }

    #[test]
    fn snf_pinned_examples() {
        // zero matrix
        let z = from_i64(&[&[0]]);
        let s = smith_normal_form(&z);
        assert!(s.d[0][0].is_zero());
        // identity
        let id = identity(3);
        let s = smith_normal_form(&id);
        assert_eq!(s.d, identity(3));
        // [[2,4],[6,8]] -> diag(2,4); oracle: d1*d2 = |det| = 8
        let m = from_i64(&[&[2, 4], &[6, 8]]);
        check_snf(&m);
        let s = smith_normal_form(&m);
        assert_eq!(s.d[0][0], BigInt::from(2));
        assert_eq!(s.d[1][1], BigInt::from(4));
        assert_eq!(&s.d[0][0] * &s.d[1][1], determinant(&m).abs());
    }

    #[test]
    fn snf_shapes_and_empty() {
        check_snf(&from_i64(&[&[6, 10, 15]]));
        check_snf(&from_i64(&[&[2], &[3], &[4]]));
        check_snf(&from_i64(&[&[4, 6], &[6, 9], &[10, 15]]));
        let empty: IMat = vec![];
        let s = smith_normal_form(&empty);
        assert!(s.invariant_factors().is_empty());
    }

    #[test]
    fn hermite_membership() {
        let m = from_i64(&[&[2, 0], &[0, 3]]);
        let h = hermite_column_basis(&m);
        assert!(hermite_member(&h, &[BigInt::from(4), BigInt::from(3)]));
        assert!(!hermite_member(&h, &[BigInt::from(1), BigInt::from(0)]));
        let m2 = from_i64(&[&[2, 1]]);
        let h2 = hermite_column_basis(&m2);
        assert!(hermite_member(&h2, &[BigInt::from(1)]));
    }

    #[test]
    fn echelon_over_q() {
        use crate::ring::QQ;
        let rows = vec![
            vec![QQ.from_int(1), QQ.from_int(2)],
            vec![QQ.from_int(2), QQ.from_int(4)],
        ];
        let (e, rank) = field_echelon(&QQ, &rows);
        assert_eq!(rank, 1);
        let res = field_reduce(&QQ, &e, &[QQ.from_int(3), QQ.from_int(6)]);
        assert!(res.iter().all(|x| QQ.is_zero(x)));
        let res2 = field_reduce(&QQ, &e, &[QQ.from_int(0), QQ.from_int(1)]);
        assert!(!res2.iter().all(|x| QQ.is_zero(x)));
    }
}
