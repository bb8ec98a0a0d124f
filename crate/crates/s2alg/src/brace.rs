//! Brace algebras: evaluation of complexity-two sequences through brace
//! expressions, the brace differential/multiplication identities, the
//! cochain-level Steenrod square, and the built-in circle algebras.
//!
//! A complexity-two algebra structure is given by a product and a family of
//! brace operations `x{y_1,...,y_n}` of degree `+n`. Every complexity-two
//! sequence factors (up to relabeling and sign) as a composite of brace
//! generators and products; [`parse_sequence`] computes that factorization
//! and [`evaluate`] runs it with the operadic Koszul signs, extracting the
//! composite's coefficient from the operad itself so that no sign is ever
//! guessed.

use crate::error::{AlgError, Result};
use crate::graded::{koszul_permutation_sign, Element, GradedModule};
use crate::ring::Ring;
use crate::surjection::{
    brace_generator, compose_basis, differential, unit_surjection, OperadElement, Surjection,
};
use std::collections::BTreeMap;

/// Evaluation contract for a brace algebra over a reduced (augmentation
/// ideal) basis. The unit is implicit; braces vanish on unit inputs, which
/// [`evaluate_with_units`] realizes operadically.
pub trait S2Algebra<R: Ring> {
    fn ring(&self) -> R;
    /// Reduced basis, degreewise finite in the working window.
    fn module(&self) -> &GradedModule;
    fn differential(&self, x: &Element<R>) -> Result<Element<R>>;
    fn product(&self, x: &Element<R>, y: &Element<R>) -> Result<Element<R>>;
    /// The n-argument brace, n >= 1.
    fn brace(&self, x: &Element<R>, args: &[Element<R>]) -> Result<Element<R>>;
}

/// Brace with the convention x{} = x, used by the identity checkers.
pub fn brace0<R: Ring, A: S2Algebra<R> + ?Sized>(
    alg: &A,
    x: &Element<R>,
    args: &[Element<R>],
) -> Result<Element<R>> {
    if args.is_empty() {
        Ok(x.clone())
    } else {
        alg.brace(x, args)
    }
}

/// Rooted expression tree for a complexity-two sequence: products of
/// scopes, braces for repeated values, leaves for argument slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BraceExpression {
    Leaf(usize),
    Product(Vec<BraceExpression>),
    Brace(usize, Vec<BraceExpression>),
}

impl BraceExpression {
    pub fn leaf_slots(&self) -> Vec<usize> {
        match self {
            BraceExpression::Leaf(v) => vec![*v],
            BraceExpression::Product(cs) => cs.iter().flat_map(|c| c.leaf_slots()).collect(),
            BraceExpression::Brace(h, cs) => {
                let mut out = vec![*h];
                out.extend(cs.iter().flat_map(|c| c.leaf_slots()));
                out
            }
        }
    }
}

/// Parse a complexity-two sequence into its brace expression. The scopes
/// (first-to-last occurrence intervals of each value) must form a laminar
/// family nesting inside single gaps; otherwise the sequence has some pair
/// alternating three or more times and `NotComplexityTwo` is returned.
pub fn parse_sequence(u: &Surjection) -> Result<BraceExpression> {
    let entries = u.entries();
    let mut first = BTreeMap::new();
    let mut last = BTreeMap::new();
    for (i, &v) in entries.iter().enumerate() {
        first.entry(v).or_insert(i);
        last.insert(v, i);
    }
    let complexity = u.complexity();
    if complexity > 2 {
        return Err(AlgError::NotComplexityTwo(complexity));
    }
    fn segment(
        entries: &[usize],
        lo: usize,
        hi: usize, // inclusive
        first: &BTreeMap<usize, usize>,
        last: &BTreeMap<usize, usize>,
    ) -> Result<BraceExpression> {
        let mut factors = Vec::new();
        let mut p = lo;
        while p <= hi {
            let v = entries[p];
            if first[&v] != p || last[&v] > hi {
                return Err(AlgError::NotComplexityTwo(3));
            }
            if last[&v] == p {
                factors.push(BraceExpression::Leaf(v));
                p += 1;
                continue;
            }
            // brace head: one argument per gap between consecutive
            // occurrences of v
            let occs: Vec<usize> = (p..=last[&v]).filter(|&i| entries[i] == v).collect();
            let mut args = Vec::new();
            for w in occs.windows(2) {
                args.push(segment(entries, w[0] + 1, w[1] - 1, first, last)?);
            }
            factors.push(BraceExpression::Brace(v, args));
            p = last[&v] + 1;
        }
        match factors.len() {
            0 => Err(AlgError::Other("empty segment".into())),
            1 => Ok(factors.pop().unwrap()),
            _ => Ok(BraceExpression::Product(factors)),
        }
    }
    segment(entries, 0, entries.len() - 1, &first, &last)
}

fn product_generator(m: usize) -> Surjection {
    let entries: Vec<usize> = (1..=m).collect();
    Surjection::normalize(&entries, m).unwrap().unwrap()
}

/// Rebuild the expression operadically: returns the single-term composite
/// and the exponent k of its coefficient, so that in the operad
/// `composite = (-1)^k · sequence`.
fn tree_operadic<R: Ring>(ring: &R, expr: &BraceExpression) -> Result<(Surjection, i64)> {
    fn plug<R: Ring>(
        ring: &R,
        base: Surjection,
        children: Vec<(Surjection, i64)>,
        first_slot: usize,
    ) -> Result<(Surjection, i64)> {
        let mut acc = base;
        let mut exp = children.iter().map(|c| c.1).sum::<i64>();
        for (i, (child, _)) in children.into_iter().enumerate().rev() {
            let composed = compose_basis(ring, &acc, first_slot + i, &child)?;
            assert_eq!(composed.terms.len(), 1, "tree composite must be a single term");
            let (seq, coeff) = composed.terms.into_iter().next().unwrap();
            if coeff == ring.from_int(-1) {
                exp += 1;
            } else {
                assert_eq!(coeff, ring.one(), "tree composite coefficient must be ±1");
            }
            acc = seq;
        }
        Ok((acc, exp))
    }
    match expr {
        BraceExpression::Leaf(_) => Ok((unit_surjection(), 0)),
        BraceExpression::Product(cs) => {
            let children: Vec<(Surjection, i64)> = cs
                .iter()
                .map(|c| tree_operadic(ring, c))
                .collect::<Result<_>>()?;
            plug(ring, product_generator(cs.len()), children, 1)
        }
        BraceExpression::Brace(_, cs) => {
            let children: Vec<(Surjection, i64)> = cs
                .iter()
                .map(|c| tree_operadic(ring, c))
                .collect::<Result<_>>()?;
            plug(ring, brace_generator(cs.len()), children, 2)
        }
    }
}

fn homogeneous_parts<R: Ring>(ring: &R, x: &Element<R>) -> Vec<(i64, Element<R>)> {
    let mut parts: BTreeMap<i64, Element<R>> = BTreeMap::new();
    for ((d, i), c) in &x.terms {
        parts
            .entry(*d)
            .or_default()
            .add_term(ring, *d, *i, c.clone());
    }
    parts.into_iter().collect()
}

/// Evaluate a complexity-two operad element on (possibly inhomogeneous)
/// arguments, multilinearly, with all Koszul signs.
pub fn evaluate<R: Ring, A: S2Algebra<R> + ?Sized>(
    alg: &A,
    z: &OperadElement<R>,
    args: &[Element<R>],
) -> Result<Element<R>> {
    let ring = alg.ring();
    if z.arity != args.len() {
        return Err(AlgError::ArityMismatch {
            expected: z.arity,
            got: args.len(),
        });
    }
    // multilinear expansion into homogeneous argument tuples
    let mut tuples: Vec<Vec<Element<R>>> = vec![Vec::new()];
    for a in args {
        let parts = homogeneous_parts(&ring, a);
        let mut next = Vec::new();
        for t in &tuples {
            for (_, p) in &parts {
                let mut t2 = t.clone();
                t2.push(p.clone());
                next.push(t2);
            }
        }
        tuples = next;
        if tuples.is_empty() {
            return Ok(Element::zero());
        }
    }
    let mut out = Element::zero();
    for tuple in tuples {
        for (u, c) in &z.terms {
            let v = evaluate_basis(alg, u, &tuple)?;
            for ((d, i), vc) in v.terms {
                out.add_term(&ring, d, i, ring.mul(&vc, c));
            }
        }
    }
    Ok(out)
}

fn evaluate_basis<R: Ring, A: S2Algebra<R> + ?Sized>(
    alg: &A,
    u: &Surjection,
    args: &[Element<R>],
) -> Result<Element<R>> {
    let ring = alg.ring();
    if args.iter().any(Element::is_zero) {
        return Ok(Element::zero());
    }
    let degs: Vec<i64> = args
        .iter()
        .map(|a| a.degree().expect("homogeneous argument"))
        .collect();
    // canonicalize the sequence, permuting arguments with the Koszul sign
    let rho = u.canonical_relabeling();
    let u0 = u.rename(&rho)?;
    let perm: Vec<usize> = (0..args.len()).map(|i| rho[i] - 1).collect();
    let koszul = koszul_permutation_sign(&degs, &perm);
    let mut new_args: Vec<Element<R>> = vec![Element::zero(); args.len()];
    let mut new_degs = vec![0i64; args.len()];
    for (i, a) in args.iter().enumerate() {
        new_args[perm[i]] = a.clone();
        new_degs[perm[i]] = degs[i];
    }
    let expr = parse_sequence(&u0)?;
    debug_assert_eq!(
        expr.leaf_slots(),
        (1..=u0.arity()).collect::<Vec<_>>(),
        "parse reads slots in order"
    );
    let (seq, kappa) = tree_operadic(&ring, &expr)?;
    assert_eq!(seq, u0, "operadic recomposition must reproduce the sequence");

    struct Part<R: Ring> {
        value: Element<R>,
        opdeg: i64,
        leafdeg: i64,
    }
    fn eval<R: Ring, A: S2Algebra<R> + ?Sized>(
        alg: &A,
        ring: &R,
        expr: &BraceExpression,
        args: &[Element<R>],
        degs: &[i64],
    ) -> Result<Part<R>> {
        match expr {
            BraceExpression::Leaf(v) => Ok(Part {
                value: args[*v - 1].clone(),
                opdeg: 0,
                leafdeg: degs[*v - 1],
            }),
            BraceExpression::Product(cs) => {
                let parts: Vec<Part<R>> = cs
                    .iter()
                    .map(|c| eval(alg, ring, c, args, degs))
                    .collect::<Result<_>>()?;
                let mut sign = 0i64;
                let mut before = 0i64;
                for p in &parts {
                    sign += p.opdeg * before;
                    before += p.leafdeg;
                }
                let mut value = parts[0].value.clone();
                for p in &parts[1..] {
                    value = alg.product(&value, &p.value)?;
                }
                Ok(Part {
                    value: value.scale(ring, &ring.sign_one(sign)),
                    opdeg: parts.iter().map(|p| p.opdeg).sum(),
                    leafdeg: before,
                })
            }
            BraceExpression::Brace(h, cs) => {
                let head_deg = degs[*h - 1];
                let parts: Vec<Part<R>> = cs
                    .iter()
                    .map(|c| eval(alg, ring, c, args, degs))
                    .collect::<Result<_>>()?;
                let mut sign = 0i64;
                let mut before = head_deg;
                for p in &parts {
                    sign += p.opdeg * before;
                    before += p.leafdeg;
                }
                let values: Vec<Element<R>> = parts.iter().map(|p| p.value.clone()).collect();
                let value = alg.brace(&args[*h - 1], &values)?;
                Ok(Part {
                    value: value.scale(ring, &ring.sign_one(sign)),
                    opdeg: cs.len() as i64 + parts.iter().map(|p| p.opdeg).sum::<i64>(),
                    leafdeg: before,
                })
            }
        }
    }
    let part = eval(alg, &ring, &expr, &new_args, &new_degs)?;
    Ok(part.value.scale(&ring, &ring.sign_one(koszul + kappa)))
}

/// Evaluate with possible unit components in the arguments: an argument is
/// `unit_coeff · 1 + reduced`. The unit in slot `i` acts by the operadic
/// restriction: zero unless the value `i` occurs exactly once, in which
/// case its entry is deleted and the values renumbered.
pub fn evaluate_with_units<R: Ring, A: S2Algebra<R> + ?Sized>(
    alg: &A,
    z: &OperadElement<R>,
    args: &[(R::Elem, Element<R>)],
) -> Result<(R::Elem, Element<R>)> {
    let ring = alg.ring();
    let mut unit_out = ring.zero();
    let mut out = Element::zero();
    for mask in 0..(1u32 << args.len()) {
        let unit_slots: Vec<usize> = (0..args.len()).filter(|b| mask >> b & 1 == 1).collect();
        let mut coeff = ring.one();
        for &s in &unit_slots {
            coeff = ring.mul(&coeff, &args[s].0);
        }
        if ring.is_zero(&coeff) {
            continue;
        }
        let reduced_args: Vec<Element<R>> = (0..args.len())
            .filter(|b| mask >> b & 1 == 0)
            .map(|b| args[b].1.clone())
            .collect();
        for (u, c) in &z.terms {
            let Some(restricted) = restrict_units(u, &unit_slots)? else {
                continue;
            };
            let total = ring.mul(c, &coeff);
            match restricted {
                None => {
                    // all slots were plugged with units and the sequence
                    // collapsed to the arity-zero operad unit
                    unit_out = ring.add(&unit_out, &total);
                }
                Some(r) => {
                    let v =
                        evaluate(alg, &OperadElement::basis(ring.clone(), r), &reduced_args)?;
                    for ((d, i), vc) in v.terms {
                        out.add_term(&ring, d, i, ring.mul(&vc, &total));
                    }
                }
            }
        }
    }
    Ok((unit_out, out))
}

/// Plug operad units into the given (0-based) slots: `Ok(None)` means zero;
/// `Ok(Some(None))` means the arity-0 unit; otherwise the restricted
/// surjection.
#[allow(clippy::type_complexity)]
fn restrict_units(u: &Surjection, unit_slots: &[usize]) -> Result<Option<Option<Surjection>>> {
    let mut entries: Vec<usize> = u.entries().to_vec();
    let mut removed: Vec<usize> = Vec::new();
    for &s in unit_slots {
        let v = s + 1;
        let occurrences = entries.iter().filter(|&&w| w == v).count();
        if occurrences != 1 {
            return Ok(None);
        }
        let pos = entries.iter().position(|&w| w == v).unwrap();
        entries.remove(pos);
        for w in entries.windows(2) {
            if w[0] == w[1] {
                return Ok(None);
            }
        }
        removed.push(v);
    }
    if entries.is_empty() {
        return Ok(Some(None));
    }
    // renumber the surviving values order-preservingly
    removed.sort_unstable();
    let renumber = |w: usize| w - removed.iter().filter(|&&r| r < w).count();
    let entries: Vec<usize> = entries.iter().map(|&w| renumber(w)).collect();
    let arity = u.arity() - removed.len();
    Ok(Surjection::normalize(&entries, arity)?.map(Some))
}

/// Verify the brace differential identity on homogeneous inputs:
///
/// d(x{y_1..y_n}) = (-1)^n x{y_1..y_{n-1}} y_n
///   + (-1)^{|x||y_1| + (n-1)|y_1|} y_1 x{y_2..y_n}
///   + Σ_{i=2}^n (-1)^{i-1} x{y_1,..,y_{i-1}y_i,..,y_n}
///   + (-1)^n dx{y_1..y_n}
///   + Σ_{i=1}^n (-1)^{γ_i} x{y_1,..,dy_i,..,y_n},  γ_i = n+|x|+Σ_{j<i}|y_j|.
pub fn check_identity_diff<R: Ring, A: S2Algebra<R> + ?Sized>(
    alg: &A,
    x: &Element<R>,
    ys: &[Element<R>],
) -> Result<()> {
    let ring = alg.ring();
    let n = ys.len() as i64;
    assert!(n >= 1);
    let xdeg = x.degree().expect("homogeneous x");
    let ydeg: Vec<i64> = ys
        .iter()
        .map(|y| y.degree().expect("homogeneous y"))
        .collect();
    let lhs = alg.differential(&alg.brace(x, ys)?)?;
    let mut rhs: Element<R> = Element::zero();
    // (-1)^n x{y_1..y_{n-1}} y_n
    let head = brace0(alg, x, &ys[..ys.len() - 1])?;
    rhs = rhs.add(
        &ring,
        &alg.product(&head, &ys[ys.len() - 1])?
            .scale(&ring, &ring.sign_one(n)),
    );
    // (-1)^{|x||y_1| + (n-1)|y_1|} y_1 x{y_2..y_n}
    let tail = brace0(alg, x, &ys[1..])?;
    rhs = rhs.add(
        &ring,
        &alg.product(&ys[0], &tail)?
            .scale(&ring, &ring.sign_one(xdeg * ydeg[0] + (n - 1) * ydeg[0])),
    );
    // merge terms
    for i in 2..=ys.len() {
        let mut merged: Vec<Element<R>> = Vec::new();
        merged.extend_from_slice(&ys[..i - 2]);
        merged.push(alg.product(&ys[i - 2], &ys[i - 1])?);
        merged.extend_from_slice(&ys[i..]);
        rhs = rhs.add(
            &ring,
            &alg.brace(x, &merged)?
                .scale(&ring, &ring.sign_one(i as i64 - 1)),
        );
    }
    // (-1)^n dx{y...}
    rhs = rhs.add(
        &ring,
        &alg.brace(&alg.differential(x)?, ys)?
            .scale(&ring, &ring.sign_one(n)),
    );
    // internal differentials of the arguments
    for i in 1..=ys.len() {
        let mut with_d = ys.to_vec();
        with_d[i - 1] = alg.differential(&ys[i - 1])?;
        let gamma = n + xdeg + ydeg[..i - 1].iter().sum::<i64>();
        rhs = rhs.add(
            &ring,
            &alg.brace(x, &with_d)?.scale(&ring, &ring.sign_one(gamma)),
        );
    }
    if lhs == rhs {
        Ok(())
    } else {
        Err(AlgError::AxiomViolation {
            axiom: "brace differential identity".into(),
            witness: format!(
                "lhs {} != rhs {}",
                lhs.show(&ring, alg.module()),
                rhs.show(&ring, alg.module())
            ),
        })
    }
}

/// Verify the brace multiplication identity on homogeneous inputs:
///
/// (xy){y_1..y_n} = Σ_{i=0}^n (-1)^{γ_i} x{y_1..y_i} y{y_{i+1}..y_n},
/// γ_i = (Σ_{k<=i}|y_k|)|y| + (n-i)(|x| + Σ_{j<=i}|y_j|).
pub fn check_identity_mult<R: Ring, A: S2Algebra<R> + ?Sized>(
    alg: &A,
    x: &Element<R>,
    y: &Element<R>,
    ys: &[Element<R>],
) -> Result<()> {
    let ring = alg.ring();
    let n = ys.len() as i64;
    assert!(n >= 1);
    let xdeg = x.degree().expect("homogeneous x");
    let ydeg = y.degree().expect("homogeneous y");
    let adeg: Vec<i64> = ys
        .iter()
        .map(|a| a.degree().expect("homogeneous arg"))
        .collect();
    let lhs = alg.brace(&alg.product(x, y)?, ys)?;
    let mut rhs: Element<R> = Element::zero();
    for i in 0..=ys.len() {
        let left = brace0(alg, x, &ys[..i])?;
        let right = brace0(alg, y, &ys[i..])?;
        let ysum: i64 = adeg[..i].iter().sum();
        let gamma = ysum * ydeg + (n - i as i64) * (xdeg + ysum);
        let term = alg
            .product(&left, &right)?
            .scale(&ring, &ring.sign_one(gamma));
        rhs = rhs.add(&ring, &term);
    }
    if lhs == rhs {
        Ok(())
    } else {
        Err(AlgError::AxiomViolation {
            axiom: "brace multiplication identity".into(),
            witness: format!(
                "lhs {} != rhs {}",
                lhs.show(&ring, alg.module()),
                rhs.show(&ring, alg.module())
            ),
        })
    }
}

/// Master action law: evaluating a composite agrees with nested evaluation,
/// with the operadic Koszul sign.
pub fn check_master_action_law<R: Ring, A: S2Algebra<R> + ?Sized>(
    alg: &A,
    u: &Surjection,
    slot: usize,
    v: &Surjection,
    args: &[Element<R>],
) -> Result<()> {
    let ring = alg.ring();
    assert_eq!(args.len(), u.arity() + v.arity() - 1);
    let composite = compose_basis(&ring, u, slot, v)?;
    let lhs = evaluate(alg, &composite, args)?;
    let inner_args = &args[slot - 1..slot - 1 + v.arity()];
    let inner = evaluate(
        alg,
        &OperadElement::basis(ring.clone(), v.clone()),
        inner_args,
    )?;
    let mut outer_args: Vec<Element<R>> = Vec::new();
    outer_args.extend_from_slice(&args[..slot - 1]);
    outer_args.push(inner);
    outer_args.extend_from_slice(&args[slot - 1 + v.arity()..]);
    let before: i64 = args[..slot - 1]
        .iter()
        .map(|a| a.degree().expect("homogeneous"))
        .sum();
    let rhs = evaluate(
        alg,
        &OperadElement::basis(ring.clone(), u.clone()),
        &outer_args,
    )?
    .scale(&ring, &ring.sign_one(v.degree() * before));
    if lhs == rhs {
        Ok(())
    } else {
        Err(AlgError::AxiomViolation {
            axiom: "master action law".into(),
            witness: format!(
                "{u} ∘_{slot} {v}: {} != {}",
                lhs.show(&ring, alg.module()),
                rhs.show(&ring, alg.module())
            ),
        })
    }
}

/// Chain-map law: d(u(args)) = (du)(args) + (-1)^{|u|} Σ_i ± u(.., d a_i, ..).
pub fn check_chain_map_law<R: Ring, A: S2Algebra<R> + ?Sized>(
    alg: &A,
    u: &Surjection,
    args: &[Element<R>],
) -> Result<()> {
    let ring = alg.ring();
    let x = OperadElement::basis(ring.clone(), u.clone());
    let lhs = alg.differential(&evaluate(alg, &x, args)?)?;
    let mut rhs = evaluate(alg, &differential(&x), args)?;
    for i in 0..args.len() {
        let mut with_d = args.to_vec();
        with_d[i] = alg.differential(&args[i])?;
        let before: i64 = args[..i]
            .iter()
            .map(|a| a.degree().expect("homogeneous"))
            .sum();
        let term =
            evaluate(alg, &x, &with_d)?.scale(&ring, &ring.sign_one(u.degree() + before));
        rhs = rhs.add(&ring, &term);
    }
    if lhs == rhs {
        Ok(())
    } else {
        Err(AlgError::AxiomViolation {
            axiom: "evaluation chain-map law".into(),
            witness: format!(
                "{u}: {} != {}",
                lhs.show(&ring, alg.module()),
                rhs.show(&ring, alg.module())
            ),
        })
    }
}

/// Equivariance: evaluating the renamed sequence equals evaluating the
/// original on permuted arguments with the Koszul sign.
pub fn check_equivariance<R: Ring, A: S2Algebra<R> + ?Sized>(
    alg: &A,
    u: &Surjection,
    perm: &[usize],
    args: &[Element<R>],
) -> Result<()> {
    let ring = alg.ring();
    let renamed = u.rename(perm)?;
    let lhs = evaluate(alg, &OperadElement::basis(ring.clone(), renamed), args)?;
    // slot s of the renamed sequence receives args[s]; slot v of u then
    // sees args[perm[v]]: the argument at position perm[v]-1 moves to
    // position v-1
    let degs: Vec<i64> = args
        .iter()
        .map(|a| a.degree().expect("homogeneous"))
        .collect();
    let mut new_args = vec![Element::zero(); args.len()];
    let mut movement = vec![0usize; args.len()];
    for v in 0..args.len() {
        new_args[v] = args[perm[v] - 1].clone();
        movement[perm[v] - 1] = v;
    }
    let sign = koszul_permutation_sign(&degs, &movement);
    let rhs = evaluate(
        alg,
        &OperadElement::basis(ring.clone(), u.clone()),
        &new_args,
    )?
    .scale(&ring, &ring.sign_one(sign));
    if lhs == rhs {
        Ok(())
    } else {
        Err(AlgError::AxiomViolation {
            axiom: "evaluation equivariance".into(),
            witness: format!("{u} under {perm:?}"),
        })
    }
}

/// The cochain-level Steenrod operation: for a cycle z of upper degree n
/// with 2 = 0 in the coefficients, the representative z{z} of upper degree
/// 2n-1.
pub fn steenrod_sq<R: Ring, A: S2Algebra<R> + ?Sized>(
    alg: &A,
    z: &Element<R>,
) -> Result<Element<R>> {
    let ring = alg.ring();
    assert!(
        ring.is_zero(&ring.add(&ring.one(), &ring.one())),
        "Steenrod square needs coefficients with 2 = 0"
    );
    let dz = alg.differential(z)?;
    if !dz.is_zero() {
        return Err(AlgError::NotACycle(z.degree().unwrap_or(0)));
    }
    if z.is_zero() {
        return Ok(Element::zero());
    }
    alg.brace(z, std::slice::from_ref(z))
}

/// Cochains of the circle: reduced basis {x} in degree -1, zero
/// differential, x·x = 0 and x{x} = -x, every other basis brace zero.
#[derive(Clone, Debug)]
pub struct CircleCochains<R: Ring> {
    ring: R,
    module: GradedModule,
}

impl<R: Ring> CircleCochains<R> {
    pub fn new(ring: R) -> Self {
        let mut module = GradedModule::new(crate::graded::Window::new(-1, 0));
        module.add_basis_label(-1, "x").unwrap();
        CircleCochains { ring, module }
    }

    pub fn x(&self) -> Element<R> {
        Element::basis(-1, 0, &self.ring)
    }
}

impl<R: Ring> S2Algebra<R> for CircleCochains<R> {
    fn ring(&self) -> R {
        self.ring.clone()
    }
    fn module(&self) -> &GradedModule {
        &self.module
    }
    fn differential(&self, _x: &Element<R>) -> Result<Element<R>> {
        Ok(Element::zero())
    }
    fn product(&self, _x: &Element<R>, _y: &Element<R>) -> Result<Element<R>> {
        Ok(Element::zero())
    }
    fn brace(&self, x: &Element<R>, args: &[Element<R>]) -> Result<Element<R>> {
        if args.len() != 1 {
            return Ok(Element::zero());
        }
        let cx = x
            .terms
            .get(&(-1, 0))
            .cloned()
            .unwrap_or_else(|| self.ring.zero());
        let cy = args[0]
            .terms
            .get(&(-1, 0))
            .cloned()
            .unwrap_or_else(|| self.ring.zero());
        let c = self.ring.neg(&self.ring.mul(&cx, &cy));
        Ok(Element::single(-1, 0, c, &self.ring))
    }
}

/// Cohomology of the circle: the same underlying algebra with all braces
/// zero (the commutative model).
#[derive(Clone, Debug)]
pub struct CircleCohomology<R: Ring> {
    ring: R,
    module: GradedModule,
}

impl<R: Ring> CircleCohomology<R> {
    pub fn new(ring: R) -> Self {
        let mut module = GradedModule::new(crate::graded::Window::new(-1, 0));
        module.add_basis_label(-1, "x").unwrap();
        CircleCohomology { ring, module }
    }

    pub fn x(&self) -> Element<R> {
        Element::basis(-1, 0, &self.ring)
    }
}

impl<R: Ring> S2Algebra<R> for CircleCohomology<R> {
    fn ring(&self) -> R {
        self.ring.clone()
    }
    fn module(&self) -> &GradedModule {
        &self.module
    }
    fn differential(&self, _x: &Element<R>) -> Result<Element<R>> {
        Ok(Element::zero())
    }
    fn product(&self, _x: &Element<R>, _y: &Element<R>) -> Result<Element<R>> {
        Ok(Element::zero())
    }
    fn brace(&self, _x: &Element<R>, _args: &[Element<R>]) -> Result<Element<R>> {
        Ok(Element::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ZMod, ZZ};
    use crate::surjection::enumerate_filtered;

    fn s(text: &str) -> Surjection {
        Surjection::parse(text)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_sequence(&s("(1,2,3)")).unwrap(),
            BraceExpression::Product(vec![
                BraceExpression::Leaf(1),
                BraceExpression::Leaf(2),
                BraceExpression::Leaf(3)
            ])
        );
        assert_eq!(
            parse_sequence(&s("(1,2,1,3,1)")).unwrap(),
            BraceExpression::Brace(1, vec![BraceExpression::Leaf(2), BraceExpression::Leaf(3)])
        );
        assert_eq!(
            parse_sequence(&s("(1,2,3,1)")).unwrap(),
            BraceExpression::Brace(
                1,
                vec![BraceExpression::Product(vec![
                    BraceExpression::Leaf(2),
                    BraceExpression::Leaf(3)
                ])]
            )
        );
        assert!(matches!(
            parse_sequence(&s("(1,2,1,2)")),
            Err(AlgError::NotComplexityTwo(_))
        ));
    }

    #[test]
    fn circle_cochains_pinned() {
        let a = CircleCochains::new(ZZ);
        let x = a.x();
        // x{x} = -x
        let b = a.brace(&x, std::slice::from_ref(&x)).unwrap();
        assert_eq!(b, x.neg(&ZZ));
        // evaluate (1,2,1) as the brace
        let e = evaluate(
            &a,
            &OperadElement::basis(ZZ, s("(1,2,1)")),
            &[x.clone(), x.clone()],
        )
        .unwrap();
        assert_eq!(e, x.neg(&ZZ));
        // evaluate (1,2) is the product
        let e = evaluate(
            &a,
            &OperadElement::basis(ZZ, s("(1,2)")),
            &[x.clone(), x.clone()],
        )
        .unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn circle_vanishing_fact() {
        // At arity 2, w(x,x) = 0 unless w is a relabeling of (1,2,1). At
        // higher arity the operad structure forces nested one-argument
        // brace shapes (like (1,2,3,2,1) = (1,2,1)∘2(1,2,1)) to act by ±x
        // as well; every other shape vanishes because x·x = 0 and the
        // higher braces vanish.
        fn nested_cup1_shape(e: &BraceExpression) -> bool {
            match e {
                BraceExpression::Leaf(_) => true,
                BraceExpression::Brace(_, args) => {
                    args.len() == 1 && nested_cup1_shape(&args[0])
                }
                BraceExpression::Product(_) => false,
            }
        }
        let a = CircleCochains::new(ZZ);
        let x = a.x();
        for arity in 2..=3usize {
            for w in enumerate_filtered(arity, 3, 2) {
                let args = vec![x.clone(); arity];
                let v = evaluate(&a, &OperadElement::basis(ZZ, w.clone()), &args).unwrap();
                let rho = w.canonical_relabeling();
                let shape = parse_sequence(&w.rename(&rho).unwrap()).unwrap();
                let expect_nonzero = w.degree() > 0 && nested_cup1_shape(&shape);
                if arity == 2 {
                    assert_eq!(expect_nonzero, w.degree() == 1);
                }
                assert_eq!(
                    !v.is_zero(),
                    expect_nonzero,
                    "{w} on (x,..,x) gave {v:?}"
                );
            }
        }
    }

    #[test]
    fn unit_inputs_kill_braces() {
        let a = CircleCochains::new(ZZ);
        let x = a.x();
        let one = (ZZ.one(), Element::zero());
        let red = (ZZ.zero(), x.clone());
        let (u, v) = evaluate_with_units(
            &a,
            &OperadElement::basis(ZZ, s("(1,2,1)")),
            &[red.clone(), one.clone()],
        )
        .unwrap();
        assert!(ZZ.is_zero(&u) && v.is_zero());
        let (u, v) = evaluate_with_units(
            &a,
            &OperadElement::basis(ZZ, s("(1,2,1)")),
            &[one.clone(), red.clone()],
        )
        .unwrap();
        assert!(ZZ.is_zero(&u) && v.is_zero());
        // the product with a unit is the identity
        let (u, v) =
            evaluate_with_units(&a, &OperadElement::basis(ZZ, s("(1,2)")), &[one, red]).unwrap();
        assert!(ZZ.is_zero(&u));
        assert_eq!(v, x);
    }

    #[test]
    fn identities_on_circle_algebras() {
        let a = CircleCochains::new(ZZ);
        let x = a.x();
        for n in 1..=3usize {
            let ys = vec![x.clone(); n];
            check_identity_diff(&a, &x, &ys).unwrap();
            check_identity_mult(&a, &x, &x, &ys).unwrap();
        }
        let h = CircleCohomology::new(ZZ);
        let x = h.x();
        for n in 1..=3usize {
            let ys = vec![x.clone(); n];
            check_identity_diff(&h, &x, &ys).unwrap();
            check_identity_mult(&h, &x, &x, &ys).unwrap();
        }
    }

    #[test]
    fn master_action_law_on_circle() {
        let a = CircleCochains::new(ZZ);
        let x = a.x();
        for u in enumerate_filtered(2, 2, 2) {
            for v in enumerate_filtered(2, 2, 2) {
                for slot in 1..=2usize {
                    let args = vec![x.clone(); 3];
                    check_master_action_law(&a, &u, slot, &v, &args).unwrap();
                }
            }
        }
    }

    #[test]
    fn equivariance_on_circle() {
        let a = CircleCochains::new(ZZ);
        let x = a.x();
        for u in enumerate_filtered(2, 2, 2) {
            check_equivariance(&a, &u, &[2, 1], &[x.clone(), x.clone()]).unwrap();
        }
    }

    #[test]
    fn steenrod_on_circle() {
        let a = CircleCochains::new(ZMod::new(2));
        let x = a.x();
        // Sq^0([x]) = [x{x}] = [x] ≠ 0
        let sq = steenrod_sq(&a, &x).unwrap();
        assert_eq!(sq, x);
        let h = CircleCohomology::new(ZMod::new(2));
        let x = h.x();
        assert!(steenrod_sq(&h, &x).unwrap().is_zero());
        assert!(steenrod_sq(&h, &Element::zero()).unwrap().is_zero());
    }
}
