//! The surjection operad: nondegenerate surjective integer sequences with
//! the Berger–Fresse sign conventions.
//!
//! A basis element of arity `n` and degree `d` is a surjection
//! `u: {1,..,n+d} -> {1,..,n}` with no two adjacent entries equal, written
//! as the list `(u(1),...,u(n+d))`. Degenerate or non-surjective sequences
//! are identified with zero at construction time.
//!
//! Signs are organized around *caesuras*: position `i` is a caesura when the
//! value `u(i)` occurs again later. A sequence of degree `d` has exactly `d`
//! caesuras, and each caesura carries a degree-one symbol; the differential,
//! composition and insertion-homotopy signs below are the Koszul signs of
//! how these symbols move. The conventions are pinned by the test suite
//! through d(1,2,1) = (2,1) - (1,2), the homotopy-operator law
//! dh + hd = 1 + t, the Leibniz rule for ∘_i, and d∘d = 0.

use crate::error::{AlgError, Result};
use crate::ring::Ring;
use itertools::Itertools;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A nondegenerate surjective sequence; basis element of the operad.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Surjection {
    arity: usize,
    entries: Vec<usize>,
}

impl fmt::Display for Surjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.entries.iter().join(","))
    }
}

impl Surjection {
    /// Validate `entries` over `{1,..,arity}`. Returns `None` when the
    /// sequence is degenerate (adjacent repeats) or not surjective, which
    /// both represent zero; `InvalidValue` when an entry is out of range.
    pub fn normalize(entries: &[usize], arity: usize) -> Result<Option<Surjection>> {
        for &e in entries {
            if e < 1 || e > arity {
                return Err(AlgError::InvalidValue(e as i64, arity));
            }
        }
        for w in entries.windows(2) {
            if w[0] == w[1] {
                return Ok(None);
            }
        }
        let seen: BTreeSet<usize> = entries.iter().copied().collect();
        if seen.len() != arity {
            return Ok(None);
        }
        Ok(Some(Surjection {
            arity,
            entries: entries.to_vec(),
        }))
    }

    /// Shorthand used by tests: panics on invalid or zero input.
    pub fn parse(text: &str) -> Surjection {
        let entries: Vec<usize> = text
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|s| s.trim().parse().expect("integer entry"))
            .collect();
        let arity = entries.iter().copied().max().unwrap_or(0);
        Surjection::normalize(&entries, arity)
            .expect("entries in range")
            .expect("nondegenerate surjection")
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.entries.len() as i64 - self.arity as i64
    }

    /// Positions (0-based) whose value occurs again later.
    pub fn caesuras(&self) -> Vec<usize> {
        let mut remaining: BTreeMap<usize, usize> = BTreeMap::new();
        for &v in &self.entries {
            *remaining.entry(v).or_insert(0) += 1;
        }
        let mut out = Vec::new();
        for (i, &v) in self.entries.iter().enumerate() {
            let r = remaining.get_mut(&v).unwrap();
            *r -= 1;
            if *r > 0 {
                out.push(i);
            }
        }
        out
    }

    /// Maximum over value pairs of the number of order switches in their
    /// restricted subsequence; `u` lies in the complexity-`n` suboperad
    /// exactly when this is at most `n`.
    pub fn complexity(&self) -> usize {
        if self.arity <= 1 {
            return 1;
        }
        let mut max = 1usize;
        for a in 1..=self.arity {
            for b in (a + 1)..=self.arity {
                let mut switches = 0usize;
                let mut last = 0usize;
                for &v in &self.entries {
                    if v == a || v == b {
                        if last != 0 && last != v {
                            switches += 1;
                        }
                        last = v;
                    }
                }
                max = max.max(switches);
            }
        }
        max
    }

    /// Rename values by `perm` (1-based: value `v` becomes `perm[v-1]`).
    /// The basis action carries no sign; Koszul signs appear only on the
    /// algebra side of coinvariants.
    pub fn rename(&self, perm: &[usize]) -> Result<Surjection> {
        if perm.len() != self.arity {
            return Err(AlgError::ArityMismatch {
                expected: self.arity,
                got: perm.len(),
            });
        }
        let entries: Vec<usize> = self.entries.iter().map(|&v| perm[v - 1]).collect();
        Surjection::normalize(&entries, self.arity)?.ok_or_else(|| {
            AlgError::Other(format!("renaming by non-permutation {perm:?}"))
        })
    }

    /// The permutation sending each value to the rank of its first
    /// occurrence, so that `rename` by it yields the canonical form in
    /// which first occurrences appear in increasing order.
    pub fn canonical_relabeling(&self) -> Vec<usize> {
        let mut perm = vec![0usize; self.arity];
        let mut next = 1usize;
        for &v in &self.entries {
            if perm[v - 1] == 0 {
                perm[v - 1] = next;
                next += 1;
            }
        }
        perm
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_relabeling() == (1..=self.arity).collect::<Vec<_>>()
    }

    /// Split as a concatenation of value-disjoint blocks (the finest such
    /// splitting). A sequence with one block is indecomposable as a product.
    pub fn product_blocks(&self) -> Vec<Surjection> {
        let mut last_pos: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, &v) in self.entries.iter().enumerate() {
            last_pos.insert(v, i);
        }
        let mut blocks = Vec::new();
        let mut start = 0usize;
        let mut reach = 0usize;
        for (i, &v) in self.entries.iter().enumerate() {
            reach = reach.max(last_pos[&v]);
            if reach == i {
                let seg = &self.entries[start..=i];
                let vals: BTreeSet<usize> = seg.iter().copied().collect();
                let mut rank = BTreeMap::new();
                for (r, v) in vals.iter().enumerate() {
                    rank.insert(*v, r + 1);
                }
                let entries: Vec<usize> = seg.iter().map(|v| rank[v]).collect();
                blocks.push(Surjection {
                    arity: vals.len(),
                    entries,
                });
                start = i + 1;
            }
        }
        blocks
    }
}

/// Homogeneous linear combination of surjections of one arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperadElement<R: Ring> {
    pub ring: R,
    pub arity: usize,
    pub terms: BTreeMap<Surjection, R::Elem>,
}

impl<R: Ring> OperadElement<R> {
    pub fn zero(ring: R, arity: usize) -> Self {
        OperadElement {
            ring,
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(ring: R, u: Surjection) -> Self {
        let arity = u.arity();
        let mut terms = BTreeMap::new();
        terms.insert(u, ring.one());
        OperadElement { ring, arity, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, u: Surjection, c: R::Elem) {
        debug_assert_eq!(u.arity(), self.arity);
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(u) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.ring.add(o.get(), &c);
                if self.ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (u, c) in &other.terms {
            out.add_term(u.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.ring.from_int(-1)))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = OperadElement::zero(self.ring.clone(), self.arity);
        for (u, a) in &self.terms {
            out.add_term(u.clone(), self.ring.mul(a, c));
        }
        out
    }

    pub fn coeff(&self, u: &Surjection) -> R::Elem {
        self.terms.get(u).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// The common degree of all terms, when homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Surjection::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn show(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(u, c)| format!("{}*{}", self.ring.show(c), u))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Differential of a single surjection: the signed sum over single-entry
/// deletions, with degenerate or non-surjective deletions giving zero.
///
/// Deleting a caesura that is the m-th caesura from the left (0-based)
/// carries (-1)^m; deleting the final occurrence of a value occurring at
/// least twice carries (-1)^{m+1} where m indexes the caesura at the
/// previous occurrence of that value. Deleting the only occurrence of a
/// value is non-surjective, hence zero.
pub fn differential_basis<R: Ring>(ring: &R, u: &Surjection) -> OperadElement<R> {
    let caesuras = u.caesuras();
    let caesura_index: BTreeMap<usize, usize> = caesuras
        .iter()
        .enumerate()
        .map(|(m, &pos)| (pos, m))
        .collect();
    let mut out = OperadElement::zero(ring.clone(), u.arity());
    let entries = u.entries();
    for i in 0..entries.len() {
        let sign_exp = if let Some(&m) = caesura_index.get(&i) {
            m as i64
        } else {
            // final occurrence; find the previous occurrence of this value
            match (0..i).rev().find(|&p| entries[p] == entries[i]) {
                Some(prev) => caesura_index[&prev] as i64 + 1,
                None => continue, // value occurs once: deletion not surjective
            }
        };
        let mut deleted = entries.to_vec();
        deleted.remove(i);
        if let Some(s) = Surjection::normalize(&deleted, u.arity()).expect("values in range") {
            out.add_term(s, ring.sign_one(sign_exp));
        }
    }
    out
}

pub fn differential<R: Ring>(x: &OperadElement<R>) -> OperadElement<R> {
    let mut out = OperadElement::zero(x.ring.clone(), x.arity);
    for (u, c) in &x.terms {
        for (s, sc) in differential_basis(&x.ring, u).terms {
            out.add_term(s, x.ring.mul(&sc, c));
        }
    }
    out
}

/// Operadic composition `u ∘_slot v` (slot is 1-based) on basis elements.
///
/// The composite is the sum over decompositions of `v`'s sequence into
/// `p` consecutive blocks overlapping in exactly one position, where `p`
/// is the number of occurrences of `slot` in `u`; each term's sign is the
/// parity of the permutation rearranging the caesura symbols of `u`
/// followed by those of `v` into their left-to-right order in the
/// composite.
pub fn compose_basis<R: Ring>(
    ring: &R,
    u: &Surjection,
    slot: usize,
    v: &Surjection,
) -> Result<OperadElement<R>> {
    let k = u.arity();
    let l = v.arity();
    if slot < 1 || slot > k {
        return Err(AlgError::SlotOutOfRange(slot, k));
    }
    let out_arity = k + l - 1;
    let mut out = OperadElement::zero(ring.clone(), out_arity);

    let ue = u.entries();
    let ve = v.entries();
    let occurrences: Vec<usize> = (0..ue.len()).filter(|&i| ue[i] == slot).collect();
    let p = occurrences.len();
    let u_caesuras = u.caesuras();
    let u_caesura_sym: BTreeMap<usize, usize> = u_caesuras
        .iter()
        .enumerate()
        .map(|(m, &pos)| (pos, m))
        .collect();
    let du = u_caesuras.len();
    let v_caesuras = v.caesuras();
    let v_caesura_sym: BTreeMap<usize, usize> = v_caesuras
        .iter()
        .enumerate()
        .map(|(m, &pos)| (pos, du + m))
        .collect();

    // value relabeling
    let relabel_u = |w: usize| if w < slot { w } else { w + l - 1 };
    let relabel_v = |w: usize| w + slot - 1;

    // enumerate weakly increasing cut tuples 0 = s_0 <= s_1 <= ... <= s_p = len-1
    let len = ve.len();
    let mut cuts = vec![0usize; p + 1];
    cuts[p] = len - 1;
    // iterative enumeration of s_1..s_{p-1}
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(partial) = stack.pop() {
        if partial.len() == p.saturating_sub(1) {
            let mut s = Vec::with_capacity(p + 1);
            s.push(0usize);
            s.extend(partial.iter().copied());
            s.push(len - 1);
            if p == 0 {
                continue;
            }
            // build composite and symbol order
            let mut entries: Vec<usize> = Vec::with_capacity(ue.len() - p + len + p - 1);
            let mut symbols: Vec<usize> = Vec::with_capacity(du + v_caesuras.len());
            let mut occ_idx = 0usize;
            for (i, &w) in ue.iter().enumerate() {
                if w == slot {
                    let t = occ_idx;
                    occ_idx += 1;
                    for q in s[t]..=s[t + 1] {
                        entries.push(relabel_v(ve[q]));
                        if q < s[t + 1] {
                            if let Some(&sym) = v_caesura_sym.get(&q) {
                                symbols.push(sym);
                            }
                        } else if t < p - 1 {
                            // duplicated cut position: caesura from u's
                            // symbol at this occurrence of the slot value
                            symbols.push(u_caesura_sym[&occurrences[t]]);
                        } else if let Some(&sym) = v_caesura_sym.get(&q) {
                            symbols.push(sym);
                        }
                    }
                } else {
                    entries.push(relabel_u(w));
                    if let Some(&sym) = u_caesura_sym.get(&i) {
                        symbols.push(sym);
                    }
                }
            }
            let inversions = {
                let mut inv = 0i64;
                for a in 0..symbols.len() {
                    for b in (a + 1)..symbols.len() {
                        if symbols[a] > symbols[b] {
                            inv += 1;
                        }
                    }
                }
                inv
            };
            let term = Surjection::normalize(&entries, out_arity)?
                .expect("composite of nondegenerate surjections is nondegenerate");
            out.add_term(term, ring.sign_one(inversions));
            continue;
        }
        let low = *partial.last().unwrap_or(&0);
        for next in low..len {
            let mut ext = partial.clone();
            ext.push(next);
            stack.push(ext);
        }
    }
    Ok(out)
}

pub fn compose<R: Ring>(
    u: &OperadElement<R>,
    slot: usize,
    v: &OperadElement<R>,
) -> Result<OperadElement<R>> {
    let ring = u.ring.clone();
    let mut out = OperadElement::zero(ring.clone(), u.arity + v.arity - 1);
    for (us, uc) in &u.terms {
        for (vs, vc) in &v.terms {
            let part = compose_basis(&ring, us, slot, vs)?;
            let c = ring.mul(uc, vc);
            for (w, wc) in part.terms {
                out.add_term(w, ring.mul(&wc, &c));
            }
        }
    }
    Ok(out)
}

/// Left symmetric-group action: rename values by `perm` on every term.
pub fn sigma_act<R: Ring>(perm: &[usize], x: &OperadElement<R>) -> Result<OperadElement<R>> {
    let mut out = OperadElement::zero(x.ring.clone(), x.arity);
    for (u, c) in &x.terms {
        out.add_term(u.rename(perm)?, c.clone());
    }
    Ok(out)
}

/// The arity-1 unit `(1)`.
pub fn unit_surjection() -> Surjection {
    Surjection::normalize(&[1], 1).unwrap().unwrap()
}

/// The generator whose evaluation is the `n`-argument brace
/// `x{y_1,...,y_n}`: the sequence `(1,2,1,3,1,...,1,n+1,1)` of arity `n+1`
/// and degree `n`. For `n = 0` this is the unit `(1)`.
pub fn brace_generator(n: usize) -> Surjection {
    let mut entries = vec![1usize];
    for k in 2..=(n + 1) {
        entries.push(k);
        entries.push(1);
    }
    Surjection::normalize(&entries, n + 1).unwrap().unwrap()
}

/// Insert `j` just before the first entry whose value is not in `s`
/// (equivalently after the maximal initial prefix of entries in `s`);
/// degenerate insertions give `None` (zero).
pub fn insertion_homotopy(
    j: usize,
    s: &BTreeSet<usize>,
    u: &Surjection,
) -> Result<Option<Surjection>> {
    if s.contains(&j) {
        return Err(AlgError::Other(format!("insertion value {j} lies in S")));
    }
    let pos = u
        .entries()
        .iter()
        .position(|v| !s.contains(v))
        .unwrap_or(u.entries().len());
    let mut entries = u.entries().to_vec();
    entries.insert(pos, j);
    Surjection::normalize(&entries, u.arity())
}

/// Linear extension of [`insertion_homotopy`].
pub fn insertion_homotopy_elem<R: Ring>(
    j: usize,
    s: &BTreeSet<usize>,
    x: &OperadElement<R>,
) -> Result<OperadElement<R>> {
    let mut out = OperadElement::zero(x.ring.clone(), x.arity);
    for (u, c) in &x.terms {
        if let Some(t) = insertion_homotopy(j, s, u)? {
            out.add_term(t, c.clone());
        }
    }
    Ok(out)
}

/// True when the entries of `s` occur exactly once in `u` and form its
/// initial prefix. On this domain the homotopy-operator law
/// `dh_{(j,S)} + h_{(j,S)}d = 1 + t_{(j,S)}` holds identically; outside it
/// the law can fail (the insertion point does not commute with deleting
/// the entry at the prefix boundary).
pub fn s_prefix_form(s: &BTreeSet<usize>, u: &Surjection) -> bool {
    let n = s.len();
    let e = u.entries();
    if n > e.len() {
        return false;
    }
    e[..n].iter().all(|v| s.contains(v)) && e[n..].iter().all(|v| !s.contains(v))
}

/// The defect operator in dh + hd = 1 + t: zero if `j` occurs more than
/// once; minus the sequence if `j` occurs once as the first entry not in
/// `s`; otherwise minus the sequence with `j`'s occurrence moved just
/// before the first entry not in `s`.
pub fn t_operator<R: Ring>(
    ring: &R,
    j: usize,
    s: &BTreeSet<usize>,
    u: &Surjection,
) -> Result<OperadElement<R>> {
    if s.contains(&j) {
        return Err(AlgError::Other(format!("insertion value {j} lies in S")));
    }
    let occurrences: Vec<usize> = u
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == j)
        .map(|(i, _)| i)
        .collect();
    let mut out = OperadElement::zero(ring.clone(), u.arity());
    if occurrences.len() != 1 {
        return Ok(out);
    }
    let jpos = occurrences[0];
    let first_not_in_s = u
        .entries()
        .iter()
        .position(|v| !s.contains(v))
        .expect("j itself is not in S");
    if jpos == first_not_in_s {
        out.add_term(u.clone(), ring.from_int(-1));
        return Ok(out);
    }
    let mut entries = u.entries().to_vec();
    entries.remove(jpos);
    let insert_at = entries
        .iter()
        .position(|v| !s.contains(v))
        .unwrap_or(entries.len());
    entries.insert(insert_at, j);
    if let Some(t) = Surjection::normalize(&entries, u.arity())? {
        out.add_term(t, ring.from_int(-1));
    }
    Ok(out)
}

/// All nondegenerate surjections of the given arity and degree.
pub fn enumerate_surjections(arity: usize, degree: i64) -> Vec<Surjection> {
    assert!(degree >= 0);
    let len = arity + degree as usize;
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(len);
    fn rec(
        arity: usize,
        len: usize,
        cur: &mut Vec<usize>,
        missing: &mut BTreeSet<usize>,
        out: &mut Vec<Surjection>,
    ) {
        if cur.len() == len {
            if missing.is_empty() {
                out.push(Surjection {
                    arity,
                    entries: cur.clone(),
                });
            }
            return;
        }
        if missing.len() > len - cur.len() {
            return;
        }
        for v in 1..=arity {
            if cur.last() == Some(&v) {
                continue;
            }
            let was_missing = missing.remove(&v);
            cur.push(v);
            rec(arity, len, cur, missing, out);
            cur.pop();
            if was_missing {
                missing.insert(v);
            }
        }
    }
    let mut missing: BTreeSet<usize> = (1..=arity).collect();
    rec(arity, len, &mut cur, &mut missing, &mut out);
    out
}

/// All surjections of the given arity, degrees `0..=max_degree`, with
/// complexity at most `max_complexity`.
pub fn enumerate_filtered(
    arity: usize,
    max_degree: i64,
    max_complexity: usize,
) -> Vec<Surjection> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        for s in enumerate_surjections(arity, d) {
            if s.complexity() <= max_complexity {
                out.push(s);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ZZ;

    fn s(text: &str) -> Surjection {
        Surjection::parse(text)
    }

    fn elem(text: &str) -> OperadElement<ZZ> {
        OperadElement::basis(ZZ, s(text))
    }

    #[test]
    fn normalize_examples() {
        assert!(Surjection::normalize(&[1, 1, 2], 2).unwrap().is_none());
        assert!(Surjection::normalize(&[1, 3], 3).unwrap().is_none());
        let u = Surjection::normalize(&[1, 2, 1], 2).unwrap().unwrap();
        assert_eq!(u.degree(), 1);
        assert!(matches!(
            Surjection::normalize(&[1, 5], 2),
            Err(AlgError::InvalidValue(5, 2))
        ));
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(s("(1,2,1,2)").complexity(), 3);
        assert_eq!(s("(1,2,3,4,5)").complexity(), 1);
        assert_eq!(s("(1,2,1,3,1)").complexity(), 2);
        assert_eq!(s("(1,2,1)").complexity(), 2);
        assert_eq!(unit_surjection().complexity(), 1);
    }

    #[test]
    fn complexity_brute_force_oracle() {
        // oracle: count blocks in the pair-restricted subsequence directly
        for u in enumerate_surjections(3, 2) {
            let mut expected = 1usize;
            for a in 1..=3usize {
                for b in (a + 1)..=3 {
                    let sub: Vec<usize> = u
                        .entries()
                        .iter()
                        .copied()
                        .filter(|&v| v == a || v == b)
                        .collect();
                    let blocks = 1 + sub.windows(2).filter(|w| w[0] != w[1]).count();
                    let switches = blocks - 1;
                    expected = expected.max(switches);
                }
            }
            assert_eq!(u.complexity(), expected, "{u}");
        }
    }

    #[test]
    fn differential_pinned() {
        // d(1,2,1) = (2,1) - (1,2)
        let d = differential(&elem("(1,2,1)"));
        assert_eq!(d.coeff(&s("(2,1)")), ZZ.from_int(1));
        assert_eq!(d.coeff(&s("(1,2)")), ZZ.from_int(-1));
        assert_eq!(d.terms.len(), 2);
        // d(1,2) = 0
        assert!(differential(&elem("(1,2)")).is_zero());
        // d(1,2,1,3,1): exactly the three stated faces
        let d = differential(&elem("(1,2,1,3,1)"));
        let faces: BTreeSet<Surjection> = d.terms.keys().cloned().collect();
        let expect: BTreeSet<Surjection> =
            [s("(2,1,3,1)"), s("(1,2,3,1)"), s("(1,2,1,3)")].into_iter().collect();
        assert_eq!(faces, expect);
    }

    #[test]
    fn compose_unit_laws() {
        let u = elem("(1,2,1,3,1)");
        let one = OperadElement::basis(ZZ, unit_surjection());
        for slot in 1..=3 {
            assert_eq!(compose(&u, slot, &one).unwrap(), u);
        }
        let v = compose(&one, 1, &u).unwrap();
        assert_eq!(v, u);
    }

    #[test]
    fn compose_products() {
        // (1,2)∘1(1,2) = (1,2,3) = (1,2)∘2(1,2)
        let m = elem("(1,2)");
        let a = compose(&m, 1, &m).unwrap();
        let b = compose(&m, 2, &m).unwrap();
        assert_eq!(a.coeff(&s("(1,2,3)")), ZZ.from_int(1));
        assert_eq!(a.terms.len(), 1);
        assert_eq!(a, b);
    }

    #[test]
    fn compose_pinned_coefficient() {
        // coefficient of (1,2,1)∘2(brace_n) in (brace_n)∘1(1,2,1) is (-1)^n
        for n in 1..=3usize {
            let b = OperadElement::basis(ZZ, brace_generator(n));
            let cup1 = elem("(1,2,1)");
            let lhs = compose(&b, 1, &cup1).unwrap();
            let rhs = compose(&cup1, 2, &b).unwrap();
            assert_eq!(rhs.terms.len(), 1, "right side is a single term");
            let (target, tc) = rhs.terms.iter().next().unwrap();
            assert_eq!(*tc, ZZ.from_int(1));
            assert_eq!(lhs.coeff(target), ZZ.sign_one(n as i64), "n = {n}");
        }
    }

    #[test]
    fn insertion_homotopy_pinned() {
        let empty = BTreeSet::new();
        assert_eq!(
            insertion_homotopy(1, &empty, &s("(2,1,3,1)")).unwrap(),
            Some(s("(1,2,1,3,1)"))
        );
        assert_eq!(insertion_homotopy(1, &empty, &s("(1,2,3,1)")).unwrap(), None);
        let sset: BTreeSet<usize> = [1].into_iter().collect();
        assert_eq!(
            insertion_homotopy(2, &sset, &s("(1,3,2)")).unwrap(),
            Some(s("(1,2,3,2)"))
        );
    }

    #[test]
    fn t_operator_pinned() {
        let empty = BTreeSet::new();
        // j occurs twice: zero
        assert!(t_operator(&ZZ, 1, &empty, &s("(2,1,3,1)")).unwrap().is_zero());
        // j first entry not in S: minus the sequence
        let t = t_operator(&ZZ, 1, &empty, &s("(1,2,3)")).unwrap();
        assert_eq!(t.coeff(&s("(1,2,3)")), ZZ.from_int(-1));
        // otherwise: delete and reinsert at the front
        let t = t_operator(&ZZ, 1, &empty, &s("(2,1,3)")).unwrap();
        assert_eq!(t.coeff(&s("(1,2,3)")), ZZ.from_int(-1));
        assert_eq!(t.terms.len(), 1);
    }

    #[test]
    fn sigma_identity_and_transposition() {
        let u = elem("(1,2)");
        let id = sigma_act(&[1, 2], &u).unwrap();
        assert_eq!(id, u);
        let sw = sigma_act(&[2, 1], &u).unwrap();
        assert_eq!(sw.coeff(&s("(2,1)")), ZZ.from_int(1));
    }

    #[test]
    fn sigma_commutes_with_differential_small() {
        // exhaustive arity <= 3, degree <= 3
        for arity in 1..=3usize {
            let perms: Vec<Vec<usize>> =
                (1..=arity).permutations(arity).collect();
            for d in 0..=3i64 {
                for u in enumerate_surjections(arity, d) {
                    let x = OperadElement::basis(ZZ, u);
                    for p in &perms {
                        let a = differential(&sigma_act(p, &x).unwrap());
                        let b = sigma_act(p, &differential(&x)).unwrap();
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_group_action_law() {
        let u = elem("(1,2,1,3)");
        let p1 = vec![2usize, 3, 1];
        let p2 = vec![3usize, 1, 2];
        // (p1∘p2)·u = p1·(p2·u) with (p1∘p2)(v) = p1[p2[v]]
        let composed: Vec<usize> = (1..=3).map(|v| p1[p2[v - 1] - 1]).collect();
        let a = sigma_act(&composed, &u).unwrap();
        let b = sigma_act(&p1, &sigma_act(&p2, &u).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn canonical_relabeling_basics() {
        let u = s("(2,1,3,1)");
        let perm = u.canonical_relabeling();
        assert_eq!(perm, vec![2, 1, 3]);
        let c = u.rename(&perm).unwrap();
        assert_eq!(c, s("(1,2,3,2)"));
        assert!(c.is_canonical());
    }

    #[test]
    fn product_block_splitting() {
        let u = s("(2,1,3)");
        let blocks = u.product_blocks();
        assert_eq!(blocks.len(), 3);
        let v = s("(1,2,1,3)");
        let blocks = v.product_blocks();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0], s("(1,2,1)"));
        assert_eq!(blocks[1], s("(1)"));
        assert_eq!(s("(1,2,1)").product_blocks().len(), 1);
    }

    #[test]
    fn enumerate_counts() {
        // arity 2, degree 1: (1,2,1) and (2,1,2)
        assert_eq!(enumerate_surjections(2, 1).len(), 2);
        // arity 1: only (1) in degree 0
        assert_eq!(enumerate_surjections(1, 0).len(), 1);
        assert_eq!(enumerate_surjections(1, 1).len(), 0);
    }
}
