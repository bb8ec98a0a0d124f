//! Text input formats: structure-constant files for presented
//! (co/Hopf)algebras and bracket files for graded Lie algebras.
//!
//! Both formats are line based; `#` starts a comment. Coefficients are
//! exact integers or fractions `p/q`. Ingestion validates every applicable
//! axiom and reports the first violation with a witness.

use crate::ce::GradedLieAlgebra;
use crate::error::{AlgError, Result};
use crate::graded::{Element, GradedModule, LinearMap, Window};
use crate::presented::{PairTerm, Pos, PresentedBialgebra};
use crate::ring::Ring;
use std::collections::BTreeMap;

/// The ring named in an input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    Rationals,
    Mod(u64),
}

impl RingSpec {
    pub fn parse(s: &str) -> Option<RingSpec> {
        match s {
            "z" | "Z" => Some(RingSpec::Integers),
            "q" | "Q" => Some(RingSpec::Rationals),
            _ => {
                let m = s.strip_prefix("zmod:")?;
                m.parse().ok().map(RingSpec::Mod)
            }
        }
    }
    pub fn name(&self) -> String {
        match self {
            RingSpec::Integers => "z".into(),
            RingSpec::Rationals => "q".into(),
            RingSpec::Mod(m) => format!("zmod:{m}"),
        }
    }
}

#[derive(Debug, Clone)]
enum Line {
    Ring(String),
    Generator(String, i64),
    Diff(String, String),
    Prod(String, String, String),
    Coprod(String, String),
    Bracket(String, String, String),
}

fn tokenize(path_text: &str) -> Result<Vec<(usize, Line)>> {
    let mut out = Vec::new();
    for (lineno, raw) in path_text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| AlgError::SchemaError {
            line: lineno + 1,
            msg: msg.into(),
        };
        let mut parts = line.splitn(2, '=');
        let head = parts.next().unwrap().trim();
        let rhs = parts.next().map(str::trim);
        let words: Vec<&str> = head.split_whitespace().collect();
        let parsed = match (words.as_slice(), rhs) {
            (["ring", r], None) => Line::Ring(r.to_string()),
            (["generator", l, d], None) => Line::Generator(
                l.to_string(),
                d.parse().map_err(|_| err("bad degree"))?,
            ),
            (["diff", l], Some(r)) => Line::Diff(l.to_string(), r.to_string()),
            (["prod", a, b], Some(r)) => {
                Line::Prod(a.to_string(), b.to_string(), r.to_string())
            }
            (["coprod", l], Some(r)) => Line::Coprod(l.to_string(), r.to_string()),
            (["bracket", a, b], Some(r)) => {
                Line::Bracket(a.to_string(), b.to_string(), r.to_string())
            }
            _ => return Err(err("expected ring/generator/diff/prod/coprod/bracket")),
        };
        out.push((lineno + 1, parsed));
    }
    Ok(out)
}

fn parse_lincomb<R: Ring>(
    ring: &R,
    text: &str,
    lineno: usize,
) -> Result<Vec<(R::Elem, String)>> {
    let text = text.trim();
    if text == "0" {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for term in text.split('+') {
        let term = term.trim();
        if term.is_empty() {
            continue;
        }
        let (coeff, label) = match term.split_once('*') {
            Some((c, l)) => {
                let c = ring.parse(c.trim()).ok_or(AlgError::SchemaError {
                    line: lineno,
                    msg: format!("bad coefficient {c}"),
                })?;
                (c, l.trim().to_string())
            }
            None => (ring.one(), term.to_string()),
        };
        out.push((coeff, label));
    }
    Ok(out)
}

fn parse_pair_lincomb<R: Ring>(
    ring: &R,
    text: &str,
    lineno: usize,
) -> Result<Vec<(R::Elem, String, String)>> {
    let text = text.trim();
    if text == "0" {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for term in text.split('+') {
        let term = term.trim();
        if term.is_empty() {
            continue;
        }
        let (coeff, pair) = match term.split_once('*') {
            Some((c, l)) => {
                let c = ring.parse(c.trim()).ok_or(AlgError::SchemaError {
                    line: lineno,
                    msg: format!("bad coefficient {c}"),
                })?;
                (c, l.trim())
            }
            None => (ring.one(), term),
        };
        let (a, b) = pair.split_once('|').ok_or(AlgError::SchemaError {
            line: lineno,
            msg: format!("pair term needs a|b, got {pair}"),
        })?;
        out.push((coeff, a.trim().to_string(), b.trim().to_string()));
    }
    Ok(out)
}

/// The ring declaration of a file, before generic parsing.
pub fn declared_ring(text: &str) -> Result<RingSpec> {
    for (lineno, line) in tokenize(text)? {
        if let Line::Ring(r) = line {
            return RingSpec::parse(&r).ok_or(AlgError::SchemaError {
                line: lineno,
                msg: format!("unknown ring {r}"),
            });
        }
    }
    Err(AlgError::SchemaError {
        line: 0,
        msg: "missing ring declaration".into(),
    })
}

/// Parse a structure-constant file into a presented bialgebra over `ring`
/// and validate its axioms. Unlisted in-window products and coproducts are
/// zero; the window is the span of the declared generator degrees.
pub fn parse_bialgebra<R: Ring>(ring: R, text: &str) -> Result<PresentedBialgebra<R>> {
    let lines = tokenize(text)?;
    let mut degrees: BTreeMap<String, i64> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    for (lineno, line) in &lines {
        if let Line::Generator(l, d) = line {
            if degrees.insert(l.clone(), *d).is_some() {
                return Err(AlgError::SchemaError {
                    line: *lineno,
                    msg: format!("duplicate generator {l}"),
                });
            }
            order.push(l.clone());
        }
    }
    if order.is_empty() {
        return Err(AlgError::SchemaError {
            line: 0,
            msg: "no generators declared".into(),
        });
    }
    let min = *degrees.values().min().unwrap();
    let max = *degrees.values().max().unwrap();
    let window = Window::new(min.min(0), max);
    let mut module = GradedModule::new(window);
    let mut pos: BTreeMap<String, Pos> = BTreeMap::new();
    for l in &order {
        let d = degrees[l];
        let idx = module.add_basis_label(d, l.clone())?;
        pos.insert(l.clone(), (d, idx));
    }
    let lookup = |l: &str, lineno: usize| -> Result<Pos> {
        pos.get(l).copied().ok_or(AlgError::SchemaError {
            line: lineno,
            msg: format!("unknown label {l}"),
        })
    };
    let mut d = LinearMap::zero(-1);
    let mut product: BTreeMap<(Pos, Pos), Element<R>> = BTreeMap::new();
    let mut coproduct: BTreeMap<Pos, Vec<PairTerm<R>>> = BTreeMap::new();
    let mut has_prod = false;
    let mut has_coprod = false;
    for (lineno, line) in &lines {
        match line {
            Line::Diff(l, rhs) => {
                let p = lookup(l, *lineno)?;
                let mut col = Element::zero();
                for (c, target) in parse_lincomb(&ring, rhs, *lineno)? {
                    let t = lookup(&target, *lineno)?;
                    if t.0 != p.0 - 1 {
                        return Err(AlgError::SchemaError {
                            line: *lineno,
                            msg: format!("diff term {target} does not drop degree by one"),
                        });
                    }
                    col.add_term(&ring, t.0, t.1, c);
                }
                d.set_column(p.0, p.1, col);
            }
            Line::Prod(a, b, rhs) => {
                has_prod = true;
                let pa = lookup(a, *lineno)?;
                let pb = lookup(b, *lineno)?;
                let mut e = Element::zero();
                for (c, target) in parse_lincomb(&ring, rhs, *lineno)? {
                    let t = lookup(&target, *lineno)?;
                    if t.0 != pa.0 + pb.0 {
                        return Err(AlgError::SchemaError {
                            line: *lineno,
                            msg: format!("product term {target} has the wrong degree"),
                        });
                    }
                    e.add_term(&ring, t.0, t.1, c);
                }
                product.insert((pa, pb), e);
            }
            Line::Coprod(l, rhs) => {
                has_coprod = true;
                let p = lookup(l, *lineno)?;
                let mut terms = Vec::new();
                for (c, a, b) in parse_pair_lincomb(&ring, rhs, *lineno)? {
                    let ta = lookup(&a, *lineno)?;
                    let tb = lookup(&b, *lineno)?;
                    if ta.0 + tb.0 != p.0 {
                        return Err(AlgError::SchemaError {
                            line: *lineno,
                            msg: format!("coproduct pair {a}|{b} has the wrong degree"),
                        });
                    }
                    terms.push((c, ta, tb));
                }
                coproduct.insert(p, terms);
            }
            Line::Bracket(..) => {
                return Err(AlgError::SchemaError {
                    line: *lineno,
                    msg: "bracket lines belong to Lie-algebra files".into(),
                })
            }
            _ => {}
        }
    }
    if has_prod {
        for p1 in module.positions() {
            for p2 in module.positions() {
                if window.contains(p1.0 + p2.0) {
                    product.entry((p1, p2)).or_insert_with(Element::zero);
                }
            }
        }
    }
    if has_coprod {
        for p in module.positions() {
            coproduct.entry(p).or_default();
        }
    }
    let out = PresentedBialgebra {
        ring,
        module,
        d,
        product: has_prod.then_some(product),
        coproduct: has_coprod.then_some(coproduct),
    };
    out.validate(64)?;
    Ok(out)
}

/// Parse a Lie-algebra bracket file and validate antisymmetry, Jacobi and
/// the derivation property. Missing reversed brackets are filled in by
/// graded antisymmetry.
pub fn parse_lie<R: Ring>(ring: R, text: &str) -> Result<GradedLieAlgebra<R>> {
    let lines = tokenize(text)?;
    let mut basis: Vec<(String, i64)> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for (lineno, line) in &lines {
        if let Line::Generator(l, d) = line {
            if index.contains_key(l) {
                return Err(AlgError::SchemaError {
                    line: *lineno,
                    msg: format!("duplicate generator {l}"),
                });
            }
            index.insert(l.clone(), basis.len());
            basis.push((l.clone(), *d));
        }
    }
    let lookup = |l: &str, lineno: usize| -> Result<usize> {
        index.get(l).copied().ok_or(AlgError::SchemaError {
            line: lineno,
            msg: format!("unknown label {l}"),
        })
    };
    let mut bracket: BTreeMap<(usize, usize), Vec<(R::Elem, usize)>> = BTreeMap::new();
    let mut differential: BTreeMap<usize, Vec<(R::Elem, usize)>> = BTreeMap::new();
    for (lineno, line) in &lines {
        match line {
            Line::Bracket(a, b, rhs) => {
                let ia = lookup(a, *lineno)?;
                let ib = lookup(b, *lineno)?;
                let mut terms = Vec::new();
                for (c, t) in parse_lincomb(&ring, rhs, *lineno)? {
                    terms.push((c, lookup(&t, *lineno)?));
                }
                bracket.insert((ia, ib), terms);
            }
            Line::Diff(l, rhs) => {
                let i = lookup(l, *lineno)?;
                let mut terms = Vec::new();
                for (c, t) in parse_lincomb(&ring, rhs, *lineno)? {
                    terms.push((c, lookup(&t, *lineno)?));
                }
                differential.insert(i, terms);
            }
            Line::Prod(..) | Line::Coprod(..) => {
                return Err(AlgError::SchemaError {
                    line: *lineno,
                    msg: "prod/coprod lines belong to bialgebra files".into(),
                })
            }
            _ => {}
        }
    }
    // fill missing reversed brackets by graded antisymmetry
    let keys: Vec<(usize, usize)> = bracket.keys().copied().collect();
    for (i, j) in keys {
        if !bracket.contains_key(&(j, i)) {
            let sign = ring.sign_one(basis[i].1 * basis[j].1 + 1);
            let rev: Vec<(R::Elem, usize)> = bracket[&(i, j)]
                .iter()
                .map(|(c, k)| (ring.mul(c, &sign), *k))
                .collect();
            bracket.insert((j, i), rev);
        }
    }
    let l = GradedLieAlgebra {
        ring,
        basis,
        bracket,
        differential,
    };
    l.validate()?;
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{QQ, ZZ};

    #[test]
    fn parse_tensor_like_hopf_file() {
        let text = "\
# a primitive generator and its square
ring z
generator v 2
generator vv 4
prod v v = vv
coprod vv = 2*v|v
coprod v = 0
";
        assert_eq!(declared_ring(text).unwrap(), RingSpec::Integers);
        let b = parse_bialgebra(ZZ, text).unwrap();
        assert!(b.is_algebra() && b.is_coalgebra());
        b.check_hopf_compatibility().unwrap();
    }

    #[test]
    fn non_coassociative_file_is_rejected() {
        let text = "\
ring z
generator a 2
generator b 1
generator c 3
coprod c = a|b
coprod a = b|b
coprod b = 0
";
        let err = parse_bialgebra(ZZ, text).unwrap_err();
        match err {
            AlgError::AxiomViolation { axiom, witness } => {
                assert_eq!(axiom, "coassociativity");
                assert!(witness.contains('c'), "witness names the element: {witness}");
            }
            other => panic!("expected AxiomViolation, got {other:?}"),
        }
    }

    #[test]
    fn parse_heisenberg_lie_file() {
        let text = "\
ring q
generator x 2
generator y 2
generator z 4
bracket x y = z
";
        let l = parse_lie(QQ, text).unwrap();
        assert_eq!(l.basis.len(), 3);
        // reversed bracket filled in: [y,x] = -z
        assert_eq!(l.bracket[&(1, 0)][0].0, QQ.from_int(-1));
    }

    #[test]
    fn bad_bracket_grading_is_rejected() {
        let bad = "\
ring q
generator a 1
generator b 2
bracket a b = a
";
        let err = parse_lie(QQ, bad).unwrap_err();
        assert!(matches!(err, AlgError::AxiomViolation { ref axiom, .. } if axiom == "bracket grading"));
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        // Jacobi on (x,z,w): [x,[z,w]] = 0, but
        // [[x,z],w] + [z,[x,w]] = [w,w] + [z,v] = t ≠ 0
        let broken = "\
ring q
generator x 2
generator z 4
generator w 6
generator v 8
generator t 12
bracket x z = w
bracket x w = v
bracket z v = t
";
        let err = parse_lie(QQ, broken).unwrap_err();
        assert!(matches!(err, AlgError::AxiomViolation { ref axiom, .. } if axiom == "Jacobi identity"));
    }
}
