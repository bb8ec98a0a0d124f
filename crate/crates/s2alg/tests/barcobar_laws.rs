//! Cross-module laws: the circle computation in the bar construction, the
//! brace identities and action laws on cobar, twisting-morphism round
//! trips, and naturality of the cobar braces.

use s2alg::barcobar::*;
use s2alg::brace::*;
use s2alg::graded::{Element, Window};
use s2alg::presented::{tensor_hopf, Pos, PresentedBialgebra};
use s2alg::ring::{Ring, ZMod, ZZ};
use s2alg::surjection::{enumerate_filtered, OperadElement};
use std::collections::BTreeMap;
use std::rc::Rc;

fn circle_bar(ring: ZZ) -> (BarHopf<ZZ>, Vec<Pos>) {
    let a: Rc<dyn S2Algebra<ZZ>> = Rc::new(CircleCochains::new(ring));
    let bar = BarHopf::new(a, Window::new(0, 0), 8).unwrap();
    // t_n = [x|..|x] all live in degree 0, indexed by length
    let mut t: Vec<Pos> = vec![(0, 0); 9];
    for (pos, w) in &bar.words {
        t[w.len()] = *pos;
    }
    (bar, t)
}

#[test]
fn circle_cochain_bar_product_table() {
    // t_1 t_n = t_n t_1 = n t_n + (n+1) t_{n+1} over Z, exactly
    let (bar, t) = circle_bar(ZZ);
    for n in 1..=5usize {
        let t1: Element<ZZ> = Element::basis(t[1].0, t[1].1, &ZZ);
        let tn: Element<ZZ> = Element::basis(t[n].0, t[n].1, &ZZ);
        let left = bar.cup(&t1, &tn).unwrap();
        let right = bar.cup(&tn, &t1).unwrap();
        assert_eq!(left, right, "t_1 t_{n} = t_{n} t_1");
        let mut expect: Element<ZZ> = Element::zero();
        expect.add_term(&ZZ, t[n].0, t[n].1, ZZ.from_int(n as i64));
        expect.add_term(&ZZ, t[n + 1].0, t[n + 1].1, ZZ.from_int(n as i64 + 1));
        assert_eq!(left, expect, "t_1 t_{n}");
    }
}

#[test]
fn circle_cohomology_bar_product_table() {
    // with trivial braces: t'_1 t'_n = (n+1) t'_{n+1}
    let a: Rc<dyn S2Algebra<ZZ>> = Rc::new(CircleCohomology::new(ZZ));
    let bar = BarHopf::new(a, Window::new(0, 0), 8).unwrap();
    let mut t: Vec<Pos> = vec![(0, 0); 9];
    for (pos, w) in &bar.words {
        t[w.len()] = *pos;
    }
    for n in 1..=5usize {
        let t1: Element<ZZ> = Element::basis(t[1].0, t[1].1, &ZZ);
        let tn: Element<ZZ> = Element::basis(t[n].0, t[n].1, &ZZ);
        let left = bar.cup(&t1, &tn).unwrap();
        let right = bar.cup(&tn, &t1).unwrap();
        assert_eq!(left, right);
        let mut expect: Element<ZZ> = Element::zero();
        expect.add_term(&ZZ, t[n + 1].0, t[n + 1].1, ZZ.from_int(n as i64 + 1));
        assert_eq!(left, expect);
    }
}

#[test]
fn numerical_vs_divided_power_distinction() {
    // t_1 t_1 has a t_1 term in B(cochains) and none in B(cohomology)
    let (bar, t) = circle_bar(ZZ);
    let t1: Element<ZZ> = Element::basis(t[1].0, t[1].1, &ZZ);
    let sq = bar.cup(&t1, &t1).unwrap();
    assert_eq!(sq.terms.get(&t[1]), Some(&ZZ.one()));
    let a: Rc<dyn S2Algebra<ZZ>> = Rc::new(CircleCohomology::new(ZZ));
    let bar2 = BarHopf::new(a, Window::new(0, 0), 8).unwrap();
    let mut t2: Vec<Pos> = vec![(0, 0); 9];
    for (pos, w) in &bar2.words {
        t2[w.len()] = *pos;
    }
    let t1c: Element<ZZ> = Element::basis(t2[1].0, t2[1].1, &ZZ);
    let sq2 = bar2.cup(&t1c, &t1c).unwrap();
    assert_eq!(sq2.terms.get(&t2[1]), None);
}

#[test]
fn bar_cup_is_unital_coalgebra_map_left_nondecreasing() {
    let (bar, _) = circle_bar(ZZ);
    let positions: Vec<Pos> = bar.module.positions().collect();
    for &p in &positions {
        let w = &bar.words[&p];
        if w.len() > 4 {
            continue;
        }
        for &q in &positions {
            let wq = &bar.words[&q];
            if w.len() + wq.len() > 6 {
                continue;
            }
            let x: Element<ZZ> = Element::basis(p.0, p.1, &ZZ);
            let y: Element<ZZ> = Element::basis(q.0, q.1, &ZZ);
            let c = bar.cup(&x, &y).unwrap();
            // left non-decreasing: every term has length >= len(w)
            for (pos, _) in &c.terms {
                assert!(bar.words[pos].len() >= w.len(), "left length dropped");
            }
            // coalgebra map: Δ̄(x·y) = Σ ±(x'·y')⊗(x''·y'') with the full
            // diagonals; checked through the tensor-coalgebra formula
            let lhs = bar.deconcat(&c).unwrap();
            let mut rhs: BTreeMap<(Pos, Pos), <ZZ as Ring>::Elem> = BTreeMap::new();
            let mut add_pairs =
                |l: &Element<ZZ>, r: &Element<ZZ>, sign: i64, rhs: &mut BTreeMap<_, _>| {
                    for (pl, cl) in &l.terms {
                        for (pr, cr) in &r.terms {
                            let v = ZZ.signed(&ZZ.mul(cl, cr), sign);
                            let e: &mut <ZZ as Ring>::Elem =
                                rhs.entry((*pl, *pr)).or_insert_with(|| ZZ.zero());
                            *e = ZZ.add(e, &v);
                        }
                    }
                };
            // Δ(x) = x⊗1 + 1⊗x + Δ̄x, similarly y; the tensor-square
            // product with the twist map, reduced part
            let dx = bar.deconcat(&x).unwrap();
            let dy = bar.deconcat(&y).unwrap();
            // x⊗y term and (-1)^{|x||y|} y⊗x term
            add_pairs(&x, &y, 0, &mut rhs);
            add_pairs(&y, &x, p.0 * q.0, &mut rhs);
            for (c2, y1, y2) in &dy {
                let ya: Element<ZZ> = Element::single(y1.0, y1.1, c2.clone(), &ZZ);
                let yb: Element<ZZ> = Element::basis(y2.0, y2.1, &ZZ);
                add_pairs(&bar.cup(&x, &ya).unwrap(), &yb, 0, &mut rhs);
                add_pairs(&ya, &bar.cup(&x, &yb).unwrap(), p.0 * y1.0, &mut rhs);
            }
            for (c1, x1, x2) in &dx {
                let xa: Element<ZZ> = Element::single(x1.0, x1.1, c1.clone(), &ZZ);
                let xb: Element<ZZ> = Element::basis(x2.0, x2.1, &ZZ);
                add_pairs(&bar.cup(&xa, &y).unwrap(), &xb, x2.0 * q.0, &mut rhs);
                add_pairs(&xa, &bar.cup(&xb, &y).unwrap(), 0, &mut rhs);
                for (c2, y1, y2) in &dy {
                    let ya: Element<ZZ> = Element::single(y1.0, y1.1, c2.clone(), &ZZ);
                    let yb: Element<ZZ> = Element::basis(y2.0, y2.1, &ZZ);
                    add_pairs(
                        &bar.cup(&xa, &ya).unwrap(),
                        &bar.cup(&xb, &yb).unwrap(),
                        x2.0 * y1.0,
                        &mut rhs,
                    );
                }
            }
            let mut lhs_map: BTreeMap<(Pos, Pos), <ZZ as Ring>::Elem> = BTreeMap::new();
            for (c, a, b) in lhs {
                let e = lhs_map.entry((a, b)).or_insert_with(|| ZZ.zero());
                *e = ZZ.add(e, &c);
            }
            lhs_map.retain(|_, c| !ZZ.is_zero(c));
            rhs.retain(|_, c| !ZZ.is_zero(c));
            assert_eq!(lhs_map, rhs, "coalgebra-map law at {p:?},{q:?}");
        }
    }
}

#[test]
fn bar_cup_associative_on_circle() {
    let (bar, t) = circle_bar(ZZ);
    for a in 1..=2usize {
        for b in 1..=2usize {
            for c in 1..=2usize {
                let x: Element<ZZ> = Element::basis(t[a].0, t[a].1, &ZZ);
                let y: Element<ZZ> = Element::basis(t[b].0, t[b].1, &ZZ);
                let z: Element<ZZ> = Element::basis(t[c].0, t[c].1, &ZZ);
                let l = bar.cup(&bar.cup(&x, &y).unwrap(), &z).unwrap();
                let r = bar.cup(&x, &bar.cup(&y, &z).unwrap()).unwrap();
                assert_eq!(l, r, "associativity at t_{a}, t_{b}, t_{c}");
            }
        }
    }
}

#[test]
fn master_action_and_chain_map_laws_on_cobar() {
    let c = Rc::new(tensor_hopf(ZZ, &[("v", 2), ("w", 2)], Window::new(0, 8), 4).unwrap());
    let omega = Cobar::new(c.clone(), Window::new(0, 8), 8).unwrap();
    let basis: Vec<Element<ZZ>> = omega
        .module
        .positions()
        .filter(|p| p.0 <= 2)
        .map(|p| Element::basis(p.0, p.1, &ZZ))
        .collect();
    let ops = enumerate_filtered(2, 2, 2);
    for u in &ops {
        for v in &ops {
            for slot in 1..=2usize {
                for x in basis.iter().take(3) {
                    for y in basis.iter().take(3) {
                        for z in basis.iter().take(3) {
                            let args = vec![x.clone(), y.clone(), z.clone()];
                            check_master_action_law(&omega, u, slot, v, &args).unwrap();
                        }
                    }
                }
            }
        }
        for x in basis.iter().take(3) {
            for y in basis.iter().take(3) {
                check_chain_map_law(&omega, u, &[x.clone(), y.clone()]).unwrap();
            }
        }
    }
}

#[test]
fn twisting_round_trip_through_bar() {
    // the coalgebra map associated to the universal twisting morphism
    // C -> ΩC restricts back to it
    let c: Rc<PresentedBialgebra<ZZ>> =
        Rc::new(tensor_hopf(ZZ, &[("v", 2)], Window::new(0, 6), 3).unwrap());
    let omega = Rc::new(Cobar::new(c.clone(), Window::new(0, 6), 6).unwrap());
    let f = universal_twisting(&omega).unwrap();
    let omega_alg: Rc<dyn S2Algebra<ZZ>> = omega.clone();
    let bar = BarHopf::new(omega_alg, Window::new(0, 6), 6).unwrap();
    let phi = coalgebra_map_from_twisting(c.as_ref(), &bar, &f, 16).unwrap();
    let proj = bar_projection(&bar);
    for p in c.module.positions() {
        let img = phi.column(p.0, p.1);
        let back = proj.apply(&ZZ, &img);
        assert_eq!(back, f.map[&p], "round trip at {p:?}");
    }
}

#[test]
fn cobar_brace_naturality() {
    // Hopf map T(v,w) -> T(v) sending w to 0 induces a brace-preserving
    // map on cobar constructions
    let big = Rc::new(tensor_hopf(ZZ, &[("v", 2), ("w", 2)], Window::new(0, 6), 3).unwrap());
    let small = Rc::new(tensor_hopf(ZZ, &[("v", 2)], Window::new(0, 6), 3).unwrap());
    let ob = Cobar::new(big.clone(), Window::new(0, 6), 6).unwrap();
    let os = Cobar::new(small.clone(), Window::new(0, 6), 6).unwrap();
    // letter map: word in {v,w} -> word in {v} or zero
    let map_letter = |p: &Pos| -> Option<Pos> {
        let label = big.module.label(p.0, p.1);
        if label.contains('w') {
            None
        } else {
            Some((p.0, small.module.find(p.0, label).unwrap()))
        }
    };
    let map_elem = |x: &Element<ZZ>, ob: &Cobar<ZZ>, os: &Cobar<ZZ>| -> Element<ZZ> {
        let mut out = Element::zero();
        for (p, c) in &x.terms {
            let w = &ob.words[p];
            let mapped: Option<Vec<Pos>> = w.iter().map(map_letter).collect();
            if let Some(mw) = mapped {
                let q = os.word_pos(&mw).unwrap();
                out.add_term(&ZZ, q.0, q.1, c.clone());
            }
        }
        out
    };
    let b = ob
        .module
        .positions()
        .filter(|p| p.0 <= 2)
        .map(|p| Element::basis(p.0, p.1, &ZZ))
        .collect::<Vec<_>>();
    for x in &b {
        for y in &b {
            let fx = map_elem(x, &ob, &os);
            let fy = map_elem(y, &ob, &os);
            let lhs = map_elem(&ob.brace(x, std::slice::from_ref(y)).unwrap(), &ob, &os);
            let rhs = os.brace(&fx, std::slice::from_ref(&fy)).unwrap();
            assert_eq!(lhs, rhs, "brace naturality");
            let lhs = map_elem(&S2Algebra::product(&ob, x, y).unwrap(), &ob, &os);
            let rhs = S2Algebra::product(&os, &fx, &fy).unwrap();
            assert_eq!(lhs, rhs, "product naturality");
        }
    }
}

#[test]
fn steenrod_well_defined_on_classes() {
    // perturb a cycle by a boundary in ΩC ⊗ Z/2 for C with nonzero merge
    // differential and compare Steenrod representatives up to boundaries
    let z2 = ZMod::new(2);
    let c = Rc::new(tensor_hopf(z2.clone(), &[("v", 2), ("w", 2)], Window::new(0, 10), 5).unwrap());
    let omega = Cobar::new(c.clone(), Window::new(0, 8), 8).unwrap();
    // z = [v·v] has degree 3; d[v·v] = 2[v|v] = 0 mod 2, so z is a cycle
    let vv = c.module.find(4, "v·v").unwrap();
    let z = omega.letter((4, vv)).unwrap();
    assert!(S2Algebra::differential(&omega, &z).unwrap().is_zero());
    let sq_z = steenrod_sq(&omega, &z).unwrap();
    assert!(!sq_z.is_zero());
    // a degree-3 boundary: b = d([v·w|w]) = [v|w|w] + [w|v|w] mod 2
    let vw = c.module.find(4, "v·w").unwrap();
    let w = c.module.find(2, "w").unwrap();
    let prep = omega.word_pos(&[(4, vw), (2, w)]).unwrap();
    let pre: Element<ZMod> = Element::basis(prep.0, prep.1, &z2);
    let b = S2Algebra::differential(&omega, &pre).unwrap();
    assert!(!b.is_zero());
    let z2e = z.add(&z2, &b);
    let sq_z2 = steenrod_sq(&omega, &z2e).unwrap();
    // difference must be a boundary: reduce against the image of d
    let diff = sq_z.add(&z2, &sq_z2);
    let deg = diff.degree().unwrap_or(3);
    let pres = omega.present().unwrap();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let rank = pres.module.rank(deg);
    for i in 0..pres.module.rank(deg + 1) {
        let col = pres.d.column(deg + 1, i);
        let mut row = vec![0u64; rank];
        for ((td, ti), cc) in col.terms {
            assert_eq!(td, deg);
            row[ti] = cc;
        }
        rows.push(row);
    }
    let (ech, _) = s2alg::snf::field_echelon(&z2, &rows);
    let mut v = vec![0u64; rank];
    for ((d, i), cc) in &diff.terms {
        assert_eq!(*d, deg);
        v[*i] = *cc;
    }
    let red = s2alg::snf::field_reduce(&z2, &ech, &v);
    assert!(
        red.iter().all(|x| z2.is_zero(x)),
        "Sq changed by a non-boundary under cycle perturbation"
    );
}
