//! Named verification suites behind the command-line driver. Each suite
//! appends pass/fail checks to a [`Report`]; every acceptance-level
//! statement is runnable through exactly one suite.

use crate::barcobar::{
    algebra_map_from_twisting, bar_projection, coalgebra_map_from_twisting, is_hopf_twisting,
    is_twisting, universal_twisting, BarHopf, Cobar, HopfLike,
};
use crate::brace::{
    check_identity_diff, check_identity_mult, check_master_action_law, evaluate, steenrod_sq,
    CircleCochains, CircleCohomology, S2Algebra,
};
use crate::ce::{
    alpha, ce_complex, check_ce_inclusion, enveloping, pbw_dimension_oracle, GradedLieAlgebra,
};
use crate::error::{AlgError, Result};
use crate::graded::{mapping_cone, ChainComplex, Element, LinearMap, Window};
use crate::homology::homology;
use crate::ingest::RingSpec;
use crate::presented::{
    divided_power_hopf, dualize, tensor_hopf, Pos, PresentedBialgebra, TrivialBraceAlgebra,
};
use crate::report::Report;
use crate::ring::{Ring, ZMod, QQ, ZZ};
use crate::surjection::{
    brace_generator, compose, differential, enumerate_filtered, enumerate_surjections,
    insertion_homotopy_elem, s_prefix_form, sigma_act, t_operator, OperadElement, Surjection,
};
use crate::tilde::{verify_derivation_law, verify_retraction, FreeElement, IdealWitness, TildeCobar};
use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub max_arity: usize,
    pub max_degree: i64,
    pub op_degree: i64,
    pub generators: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_arity: 4,
            max_degree: 6,
            op_degree: 4,
            generators: 3,
            seed: 0,
        }
    }
}

pub const SUITE_NAMES: [&str; 8] = [
    "operad",
    "braces",
    "bar-s1",
    "cobar",
    "hopf-twist",
    "retraction",
    "ce",
    "duality",
];

pub fn run_suite(name: &str, ring: &RingSpec, cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    match name {
        "operad" => suite_operad(cfg, report),
        "braces" => suite_braces(cfg, report),
        "bar-s1" => suite_bar_s1(cfg, report),
        "cobar" => suite_cobar(report),
        "hopf-twist" => suite_hopf_twist(report),
        "retraction" => suite_retraction(ring, cfg, report),
        "ce" => suite_ce(report),
        "duality" => suite_duality(report),
        other => Err(AlgError::Other(format!("unknown suite {other}"))),
    }
}

fn outcome(r: Result<()>) -> std::result::Result<(), String> {
    r.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- operad

fn suite_operad(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    // pinned differential
    let d121 = differential(&OperadElement::basis(ZZ, Surjection::parse("(1,2,1)")));
    let mut expect = OperadElement::zero(ZZ, 2);
    expect.add_term(Surjection::parse("(2,1)"), ZZ.one());
    expect.add_term(Surjection::parse("(1,2)"), ZZ.from_int(-1));
    report.record(
        "operad.d121",
        "d(1,2,1) = (2,1) - (1,2)",
        if d121 == expect {
            Ok(())
        } else {
            Err(format!("got {}", d121.show()))
        },
    );

    // d∘d = 0 exhaustively
    let mut dd = Ok(());
    'outer: for arity in 1..=cfg.max_arity {
        for degree in 0..=cfg.max_degree {
            for u in enumerate_surjections(arity, degree) {
                let x = OperadElement::basis(ZZ, u.clone());
                if !differential(&differential(&x)).is_zero() {
                    dd = Err(format!("d² ≠ 0 at {u}"));
                    break 'outer;
                }
            }
        }
    }
    report.record(
        "operad.dd",
        format!(
            "d∘d = 0 for all surjections of arity ≤ {} and degree ≤ {}",
            cfg.max_arity, cfg.max_degree
        ),
        dd,
    );

    // Leibniz rule for ∘_i
    let mut pool: Vec<Surjection> = Vec::new();
    for arity in 1..=3usize {
        for degree in 0..=3i64 {
            pool.extend(enumerate_surjections(arity, degree));
        }
    }
    let mut leibniz = Ok(());
    'l: for u in &pool {
        for v in &pool {
            for slot in 1..=u.arity() {
                let ue = OperadElement::basis(ZZ, u.clone());
                let ve = OperadElement::basis(ZZ, v.clone());
                let lhs = differential(&compose(&ue, slot, &ve)?);
                let rhs = compose(&differential(&ue), slot, &ve)?.add(
                    &compose(&ue, slot, &differential(&ve))?.scale(&ZZ.sign_one(u.degree())),
                );
                if lhs != rhs {
                    leibniz = Err(format!("fails at {u} ∘_{slot} {v}"));
                    break 'l;
                }
            }
        }
    }
    report.record(
        "operad.leibniz",
        "d(u ∘_i v) = du ∘_i v + (-1)^{|u|} u ∘_i dv for arity ≤ 3, degree ≤ 3",
        leibniz,
    );

    // pinned composition coefficient
    let mut coeff = Ok(());
    for n in 1..=3usize {
        let b = OperadElement::basis(ZZ, brace_generator(n));
        let cup1 = OperadElement::basis(ZZ, Surjection::parse("(1,2,1)"));
        let lhs = compose(&b, 1, &cup1)?;
        let rhs = compose(&cup1, 2, &b)?;
        let (target, _) = rhs.terms.iter().next().expect("single term");
        if lhs.coeff(target) != ZZ.sign_one(n as i64) {
            coeff = Err(format!("coefficient at n = {n} is {}", ZZ.show(&lhs.coeff(target))));
        }
    }
    report.record(
        "operad.compose-coefficient",
        "the coefficient of (1,2,1)∘2(brace_n) in (brace_n)∘1(1,2,1) is (-1)^n, n = 1,2,3",
        coeff,
    );

    // homotopy-operator law on its exact domain, over Z and Z/2
    fn homotopy_law<R: Ring>(ring: R) -> std::result::Result<usize, String> {
        let mut checked = 0usize;
        for arity in 1..=3usize {
            for degree in 0..=3i64 {
                for u in enumerate_surjections(arity, degree) {
                    for j in 1..=arity {
                        let others: Vec<usize> = (1..=arity).filter(|&v| v != j).collect();
                        for mask in 0..(1u32 << others.len()) {
                            let s: BTreeSet<usize> = others
                                .iter()
                                .enumerate()
                                .filter(|(b, _)| mask >> b & 1 == 1)
                                .map(|(_, &v)| v)
                                .collect();
                            let once = s.iter().all(|v| {
                                u.entries().iter().filter(|&&w| w == *v).count() == 1
                            });
                            if !once || !s_prefix_form(&s, &u) {
                                continue;
                            }
                            checked += 1;
                            let x = OperadElement::basis(ring.clone(), u.clone());
                            let lhs = differential(&insertion_homotopy_elem(j, &s, &x).unwrap())
                                .add(&insertion_homotopy_elem(j, &s, &differential(&x)).unwrap());
                            let rhs = x.add(&t_operator(&ring, j, &s, &u).unwrap());
                            if lhs != rhs {
                                return Err(format!("fails at {u}, j={j}, S={s:?}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(checked)
    }
    let law_z = homotopy_law(ZZ);
    let law_z2 = homotopy_law(ZMod::new(2));
    report.record(
        "operad.homotopy-law",
        "dh_(j,S) + h_(j,S)d = 1 + t_(j,S) for arity ≤ 3, degree ≤ 3, S-entries occurring once as the initial prefix, over Z and Z/2",
        match (&law_z, &law_z2) {
            (Ok(a), Ok(_)) if *a > 300 => Ok(()),
            (Ok(a), Ok(_)) => Err(format!("domain unexpectedly small: {a} cases")),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        },
    );
    // the stated precondition without the prefix requirement is sharp:
    // the recorded counterexample fails the unrestricted law
    let sharp = {
        let u = Surjection::parse("(1,2,1)");
        let s: BTreeSet<usize> = [2].into_iter().collect();
        let x = OperadElement::basis(ZZ, u.clone());
        let lhs = differential(&insertion_homotopy_elem(1, &s, &x)?)
            .add(&insertion_homotopy_elem(1, &s, &differential(&x))?);
        let rhs = x.add(&t_operator(&ZZ, 1, &s, &u)?);
        if lhs.is_zero() && rhs == x {
            Ok(())
        } else {
            Err("expected boundary counterexample changed".into())
        }
    };
    report.record(
        "operad.homotopy-law-boundary",
        "outside prefix form the law genuinely fails: dh+hd = 0 ≠ 1+t on (1,2,1) with j=1, S={2}",
        sharp,
    );

    // equivariance of the differential under value renaming
    let mut equi = Ok(());
    'e: for arity in 1..=3usize {
        for degree in 0..=3i64 {
            for u in enumerate_surjections(arity, degree) {
                let x = OperadElement::basis(ZZ, u.clone());
                let perm: Vec<usize> = (1..=arity).rev().collect();
                let a = differential(&sigma_act(&perm, &x)?);
                let b = sigma_act(&perm, &differential(&x))?;
                if a != b {
                    equi = Err(format!("fails at {u}"));
                    break 'e;
                }
            }
        }
    }
    report.record(
        "operad.sigma-differential",
        "the symmetric-group action commutes with the differential (arity ≤ 3, degree ≤ 3)",
        equi,
    );

    // complexity filtration respected by composition
    let mut filt = Ok(());
    'f: for u in &pool {
        for v in &pool {
            let bound = u.complexity().max(v.complexity());
            for slot in 1..=u.arity() {
                let c = compose(
                    &OperadElement::basis(ZZ, u.clone()),
                    slot,
                    &OperadElement::basis(ZZ, v.clone()),
                )?;
                if c.terms.keys().any(|w| w.complexity() > bound) {
                    filt = Err(format!("{u} ∘_{slot} {v} raised complexity"));
                    break 'f;
                }
            }
        }
    }
    report.record(
        "operad.complexity-subadditive",
        "composition of complexity ≤ m and ≤ n elements has complexity ≤ max(m,n)",
        filt,
    );
    Ok(())
}

// ---------------------------------------------------------------- braces

/// The non-primitively generated Hopf algebra with nonzero differential:
/// the bar construction of Z[v]/v^3 (|v| = 2) with its cup product.
fn bar_of_truncated_polynomial<R: Ring>(ring: R, window_top: i64) -> Result<PresentedBialgebra<R>> {
    let a = Rc::new(crate::presented::truncated_polynomial(
        ring.clone(),
        2,
        3,
        Window::new(0, 2 * window_top),
    )?);
    let alg: Rc<dyn S2Algebra<R>> = Rc::new(TrivialBraceAlgebra::new(a)?);
    let bar = BarHopf::new(alg, Window::new(0, window_top), 4)?;
    bar.present()
}

fn identity_checks_for_cobar<R: Ring>(
    ring: R,
    hopf: Rc<PresentedBialgebra<R>>,
    input_degree_cap: i64,
    window_top: i64,
    label: &str,
) -> std::result::Result<usize, String> {
    let omega = Cobar::new(hopf, Window::new(0, window_top), window_top as usize + 2)
        .map_err(|e| e.to_string())?;
    let mut basis: Vec<Element<R>> = Vec::new();
    for p in omega.module.positions() {
        if p.0 >= 1 && p.0 <= input_degree_cap {
            basis.push(Element::basis(p.0, p.1, &ring));
        }
    }
    let deg = |e: &Element<R>| e.degree().unwrap();
    let mut checked = 0usize;
    for x in &basis {
        // identity 2 with n = 1..=3 arguments
        for y1 in &basis {
            if deg(x) + deg(y1) + 1 > input_degree_cap + 1 {
                continue;
            }
            checked += 1;
            check_identity_diff(&omega, x, std::slice::from_ref(y1))
                .map_err(|e| format!("[{label}] {e}"))?;
            for y2 in &basis {
                if deg(x) + deg(y1) + deg(y2) + 2 > input_degree_cap + 2 {
                    continue;
                }
                checked += 1;
                check_identity_diff(&omega, x, &[y1.clone(), y2.clone()])
                    .map_err(|e| format!("[{label}] {e}"))?;
                check_identity_mult(&omega, x, y1, std::slice::from_ref(y2))
                    .map_err(|e| format!("[{label}] {e}"))?;
                for y3 in &basis {
                    if deg(x) + deg(y1) + deg(y2) + deg(y3) + 3 > input_degree_cap + 3 {
                        continue;
                    }
                    checked += 1;
                    check_identity_diff(&omega, x, &[y1.clone(), y2.clone(), y3.clone()])
                        .map_err(|e| format!("[{label}] {e}"))?;
                    check_identity_mult(&omega, x, y1, &[y2.clone(), y3.clone()])
                        .map_err(|e| format!("[{label}] {e}"))?;
                }
            }
        }
    }
    Ok(checked)
}

fn suite_braces(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    let cap = cfg.max_degree.min(6);
    // C = T(v)
    let tv = Rc::new(tensor_hopf(ZZ, &[("v", 2)], Window::new(0, cap + 4), cap as usize + 2)?);
    let r1 = identity_checks_for_cobar(ZZ, tv, cap, cap + 4, "ΩT(v)");
    report.record(
        "braces.identities-tv",
        "brace differential and multiplication identities hold exactly on ΩC for C = T(v)",
        r1.map(|_| ()),
    );
    // C = T(v,w)
    let tvw = Rc::new(tensor_hopf(
        ZZ,
        &[("v", 2), ("w", 2)],
        Window::new(0, cap + 4),
        cap as usize + 2,
    )?);
    let r2 = identity_checks_for_cobar(ZZ, tvw, cap.min(4), cap + 4, "ΩT(v,w)");
    report.record(
        "braces.identities-tvw",
        "brace differential and multiplication identities hold exactly on ΩC for C = T(v,w)",
        r2.map(|_| ()),
    );
    // C = B(Z[v]/v^3): non-primitively generated, nonzero differential
    let ba = Rc::new(bar_of_truncated_polynomial(ZZ, 7)?);
    {
        // sanity: the differential is nonzero and [v|v] is not primitive
        let vv = ba.module.find(6, "⟨v^1|v^1⟩")?;
        let x: Element<ZZ> = Element::basis(6, vv, &ZZ);
        if ba.differential(&x).is_zero() || ba.reduced_diagonal(&x)?.is_empty() {
            report.record(
                "braces.nonprimitive-model",
                "B(Z[v]/v^3) has a nonzero differential and a non-primitive basis element",
                Err("model degenerated".into()),
            );
        } else {
            report.record(
                "braces.nonprimitive-model",
                "B(Z[v]/v^3) has a nonzero differential and a non-primitive basis element",
                Ok(()),
            );
        }
    }
    let r3 = identity_checks_for_cobar(ZZ, ba, cap, cap + 4, "ΩB(Z[v]/v^3)");
    report.record(
        "braces.identities-nonprimitive",
        "brace identities hold exactly on ΩC for the non-primitively generated C with nonzero differential",
        r3.map(|_| ()),
    );
    // master action law on the circle algebra and a cobar sample
    let master = (|| -> Result<()> {
        let a = CircleCochains::new(ZZ);
        let x = a.x();
        for u in enumerate_filtered(2, 2, 2) {
            for v in enumerate_filtered(2, 2, 2) {
                for slot in 1..=2usize {
                    check_master_action_law(&a, &u, slot, &v, &vec![x.clone(); 3])?;
                }
            }
        }
        Ok(())
    })();
    report.record(
        "braces.master-action-law",
        "evaluating a composite equals nested evaluation with operadic Koszul signs",
        outcome(master),
    );
    Ok(())
}

// ---------------------------------------------------------------- bar-s1

fn circle_t_basis<R: Ring>(bar: &BarHopf<R>) -> Vec<Pos> {
    let mut t: Vec<Pos> = vec![(0, 0); bar.max_len + 1];
    for (pos, w) in &bar.words {
        t[w.len()] = *pos;
    }
    t
}

fn suite_bar_s1(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    let n_max = cfg.generators.max(5);
    let a: Rc<dyn S2Algebra<ZZ>> = Rc::new(CircleCochains::new(ZZ));
    let bar = BarHopf::new(a, Window::new(0, 0), n_max + 2)?;
    let t = circle_t_basis(&bar);
    let mut table = Vec::new();
    let mut cochain_ok = Ok(());
    for n in 1..=n_max {
        let t1: Element<ZZ> = Element::basis(t[1].0, t[1].1, &ZZ);
        let tn: Element<ZZ> = Element::basis(t[n].0, t[n].1, &ZZ);
        let left = bar.cup(&t1, &tn)?;
        let right = bar.cup(&tn, &t1)?;
        let mut expect: Element<ZZ> = Element::zero();
        expect.add_term(&ZZ, t[n].0, t[n].1, ZZ.from_int(n as i64));
        expect.add_term(&ZZ, t[n + 1].0, t[n + 1].1, ZZ.from_int(n as i64 + 1));
        if left != expect || right != expect {
            cochain_ok = Err(format!("t_1 t_{n} computed incorrectly"));
        }
        table.push(format!("t1*t{n} = {n}*t{n} + {}*t{}", n + 1, n + 1));
    }
    report.record(
        "bar-s1.numerical",
        "t_1 t_n = t_n t_1 = n t_n + (n+1) t_{n+1} in the bar construction of the circle cochains",
        cochain_ok,
    );
    let h: Rc<dyn S2Algebra<ZZ>> = Rc::new(CircleCohomology::new(ZZ));
    let bar2 = BarHopf::new(h, Window::new(0, 0), n_max + 2)?;
    let t2 = circle_t_basis(&bar2);
    let mut cohom_ok = Ok(());
    for n in 1..=n_max {
        let t1: Element<ZZ> = Element::basis(t2[1].0, t2[1].1, &ZZ);
        let tn: Element<ZZ> = Element::basis(t2[n].0, t2[n].1, &ZZ);
        let left = bar2.cup(&t1, &tn)?;
        let mut expect: Element<ZZ> = Element::zero();
        expect.add_term(&ZZ, t2[n + 1].0, t2[n + 1].1, ZZ.from_int(n as i64 + 1));
        if left != expect {
            cohom_ok = Err(format!("t'_1 t'_{n} computed incorrectly"));
        }
    }
    report.record(
        "bar-s1.divided-power",
        "t'_1 t'_n = t'_n t'_1 = (n+1) t'_{n+1} in the bar construction of the circle cohomology",
        cohom_ok,
    );
    // the two Hopf algebras differ: t1*t1 has a t1 term only on one side
    let distinct = {
        let t1: Element<ZZ> = Element::basis(t[1].0, t[1].1, &ZZ);
        let sq = bar.cup(&t1, &t1)?;
        let t1c: Element<ZZ> = Element::basis(t2[1].0, t2[1].1, &ZZ);
        let sq2 = bar2.cup(&t1c, &t1c)?;
        if sq.terms.contains_key(&t[1]) && !sq2.terms.contains_key(&t2[1]) {
            Ok(())
        } else {
            Err("t_1 t_1 term pattern did not distinguish the two Hopf algebras".into())
        }
    };
    report.record(
        "bar-s1.distinction",
        "t_1 t_1 has a t_1 term for the cochain braces and none for the trivial braces",
        distinct,
    );
    // Steenrod obstruction over Z/2
    let sq = (|| -> Result<()> {
        let a = CircleCochains::new(ZMod::new(2));
        let x = a.x();
        let s = steenrod_sq(&a, &x)?;
        if s != x {
            return Err(AlgError::Other("Sq^0[x] must be [x]".into()));
        }
        let h = CircleCohomology::new(ZMod::new(2));
        let x = h.x();
        if !steenrod_sq(&h, &x)?.is_zero() {
            return Err(AlgError::Other("Sq^0 must vanish for trivial braces".into()));
        }
        Ok(())
    })();
    report.record(
        "bar-s1.steenrod",
        "over Z/2, Sq^0[x] = [x] ≠ 0 for the circle cochains and Sq^0 = 0 for its cohomology",
        outcome(sq),
    );
    Ok(())
}

// ---------------------------------------------------------------- cobar

fn suite_cobar(report: &mut Report) -> Result<()> {
    // counit negative test: the canonical algebra map from the cobar of
    // the bar fails to preserve a two-argument brace
    let run = || -> Result<String> {
        let c = Rc::new(tensor_hopf(
            ZZ,
            &[("v", 2), ("w", 2), ("u", 2)],
            Window::new(0, 8),
            4,
        )?);
        let a = Rc::new(Cobar::new(c.clone(), Window::new(0, 6), 6)?);
        let pv = (2i64, c.module.find(2, "v")?);
        let pw = (2i64, c.module.find(2, "w")?);
        let pu = (2i64, c.module.find(2, "u")?);
        let xw = a.word_pos(&[pv, pw])?;
        let x: Element<ZZ> = Element::basis(xw.0, xw.1, &ZZ);
        let y = a.letter(pu)?;
        let brace_a = a.brace(&x, &[y.clone(), y.clone()])?;
        if brace_a.is_zero() {
            return Err(AlgError::NoWitness(
                "the two-argument brace vanished in the target".into(),
            ));
        }
        // bar of A, just wide enough to hold the witness letters
        let a_alg: Rc<dyn S2Algebra<ZZ>> = a.clone();
        let ba = Rc::new(BarHopf::new(a_alg, Window::new(0, 3), 2)?);
        let omega_ba = Cobar::new(ba.clone(), Window::new(0, 3), 3)?;
        let bx = ba.word_pos(&[xw])?;
        let by = ba.word_pos(&[a.word_pos(&[pu])?])?;
        let obx = omega_ba.letter(bx)?;
        let oby = omega_ba.letter(by)?;
        let brace_oba = omega_ba.brace(&obx, &[oby.clone(), oby.clone()])?;
        if !brace_oba.is_zero() {
            return Err(AlgError::Other(
                "singleton higher brace must vanish in the cobar of the bar".into(),
            ));
        }
        // the algebra map from the bar projection sends the witnesses back
        let proj = bar_projection(&ba);
        let g = algebra_map_from_twisting(&omega_ba, a.as_ref(), &proj)?;
        let gx = g.apply(&ZZ, &obx);
        let gy = g.apply(&ZZ, &oby);
        if gx != x || gy != y {
            return Err(AlgError::Other("counit did not restore the letters".into()));
        }
        let mapped = g.apply(&ZZ, &brace_oba);
        let target = a.brace(&gx, &[gy.clone(), gy])?;
        if mapped.is_zero() && !target.is_zero() {
            Ok(format!(
                "brace image 0 vs {}",
                target.show(&ZZ, &a.module)
            ))
        } else {
            Err(AlgError::NoWitness("no discrepancy found".into()))
        }
    };
    match run() {
        Ok(_witness) => report.record(
            "cobar.counit-negative",
            "the canonical map from cobar of bar to the algebra fails to preserve a two-argument brace",
            Ok(()),
        ),
        Err(e) => report.record(
            "cobar.counit-negative",
            "the canonical map from cobar of bar to the algebra fails to preserve a two-argument brace",
            Err(e.to_string()),
        ),
    }
    Ok(())
}

// ------------------------------------------------------------ hopf-twist

fn unit_map_quasi_iso<R: Ring>(
    ring: R,
    c: Rc<PresentedBialgebra<R>>,
    top: i64,
    bar_len: usize,
    label: &str,
) -> Result<()> {
    let omega = Rc::new(Cobar::new(c.clone(), Window::new(0, top), top as usize)?);
    let f = universal_twisting(&omega)?;
    let omega_alg: Rc<dyn S2Algebra<R>> = omega.clone();
    let bar = BarHopf::new(omega_alg, Window::new(0, top), bar_len)?;
    let phi = coalgebra_map_from_twisting(c.as_ref(), &bar, &f, 64)?;
    // chain map
    for p in c.module.positions() {
        let x: Element<R> = Element::basis(p.0, p.1, &ring);
        let lhs = phi.apply(&ring, &c.differential(&x));
        let rhs = HopfLike::differential(&bar, &phi.apply(&ring, &x))?;
        if lhs != rhs {
            return Err(AlgError::AxiomViolation {
                axiom: format!("[{label}] unit map is a chain map"),
                witness: c.module.label(p.0, p.1).to_string(),
            });
        }
    }
    // coalgebra map
    for p in c.module.positions() {
        let x: Element<R> = Element::basis(p.0, p.1, &ring);
        let img = phi.apply(&ring, &x);
        let mut lhs: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        for (cf, a, b) in bar.reduced_diagonal(&img)? {
            let e = lhs.entry((a, b)).or_insert_with(|| ring.zero());
            *e = ring.add(e, &cf);
        }
        let mut rhs: BTreeMap<(Pos, Pos), R::Elem> = BTreeMap::new();
        for (cf, a, b) in c.reduced_diagonal(&x)? {
            let pa = phi.column(a.0, a.1);
            let pb = phi.column(b.0, b.1);
            for (qa, ca) in &pa.terms {
                for (qb, cb) in &pb.terms {
                    let v = ring.mul(&cf, &ring.mul(ca, cb));
                    let e = rhs.entry((*qa, *qb)).or_insert_with(|| ring.zero());
                    *e = ring.add(e, &v);
                }
            }
        }
        lhs.retain(|_, v| !ring.is_zero(v));
        rhs.retain(|_, v| !ring.is_zero(v));
        if lhs != rhs {
            return Err(AlgError::AxiomViolation {
                axiom: format!("[{label}] unit map is a coalgebra map"),
                witness: c.module.label(p.0, p.1).to_string(),
            });
        }
    }
    // multiplicative (Hopf map)
    for p1 in c.module.positions() {
        for p2 in c.module.positions() {
            if !c.module.window.contains(p1.0 + p2.0) {
                continue;
            }
            let x: Element<R> = Element::basis(p1.0, p1.1, &ring);
            let y: Element<R> = Element::basis(p2.0, p2.1, &ring);
            let lhs = phi.apply(&ring, &c.product(&x, &y)?);
            let rhs = bar.cup(&phi.apply(&ring, &x), &phi.apply(&ring, &y))?;
            if lhs != rhs {
                return Err(AlgError::AxiomViolation {
                    axiom: format!("[{label}] unit map is multiplicative"),
                    witness: format!(
                        "({}, {})",
                        c.module.label(p1.0, p1.1),
                        c.module.label(p2.0, p2.1)
                    ),
                });
            }
        }
    }
    // quasi-isomorphism through the mapping cone
    let cx = c.complex();
    let mut d = LinearMap::zero(-1);
    for pos in bar.words.keys() {
        if pos.0 - 1 < 0 {
            continue;
        }
        d.set_column(pos.0, pos.1, bar.differential_word(*pos)?);
    }
    let cy = ChainComplex::new(ring.clone(), bar.module.clone(), d);
    let cone = mapping_cone(&cx, &cy, &phi)?;
    let h = homology(&cone, Window::new(1, top - 1), false)?;
    if !h.is_trivial() {
        return Err(AlgError::AxiomViolation {
            axiom: format!("[{label}] unit map is a homology isomorphism"),
            witness: format!("{:?}", h.by_degree),
        });
    }
    Ok(())
}

fn suite_hopf_twist(report: &mut Report) -> Result<()> {
    // the universal twisting morphism is a Hopf twisting morphism
    let univ = (|| -> Result<()> {
        let c = Rc::new(tensor_hopf(ZZ, &[("v", 2)], Window::new(0, 6), 3)?);
        let omega = Rc::new(Cobar::new(c.clone(), Window::new(0, 6), 6)?);
        let f = universal_twisting(&omega)?;
        is_twisting(c.as_ref(), omega.as_ref(), &f)?;
        is_hopf_twisting(c.as_ref(), omega.as_ref(), &f, 16)
    })();
    report.record(
        "hopf-twist.universal",
        "the universal twisting morphism into the cobar construction is a Hopf twisting morphism",
        outcome(univ),
    );
    // unit map for C = T(v), |v| = 2, over Z and Q
    let t1 = unit_map_quasi_iso(
        ZZ,
        Rc::new(tensor_hopf(ZZ, &[("v", 2)], Window::new(0, 6), 3)?),
        6,
        3,
        "T(v)/Z",
    );
    report.record(
        "hopf-twist.unit-tv-z",
        "C → B(ΩC) is a Hopf-algebra map and a homology isomorphism for C = T(v), |v| = 2, over Z",
        outcome(t1),
    );
    let t2 = unit_map_quasi_iso(
        QQ,
        Rc::new(tensor_hopf(QQ, &[("v", 2)], Window::new(0, 6), 3)?),
        6,
        3,
        "T(v)/Q",
    );
    report.record(
        "hopf-twist.unit-tv-q",
        "C → B(ΩC) is a Hopf-algebra map and a homology isomorphism for C = T(v), |v| = 2, over Q",
        outcome(t2),
    );
    // unit map for the divided-power Hopf algebra
    let d1 = unit_map_quasi_iso(
        ZZ,
        Rc::new(divided_power_hopf(ZZ, 2, Window::new(0, 6))?),
        6,
        3,
        "Γ/Z",
    );
    report.record(
        "hopf-twist.unit-divided-z",
        "C → B(ΩC) is a Hopf-algebra map and a homology isomorphism for the divided-power Hopf algebra over Z",
        outcome(d1),
    );
    let d2 = unit_map_quasi_iso(
        QQ,
        Rc::new(divided_power_hopf(QQ, 2, Window::new(0, 6))?),
        6,
        3,
        "Γ/Q",
    );
    report.record(
        "hopf-twist.unit-divided-q",
        "C → B(ΩC) is a Hopf-algebra map and a homology isomorphism for the divided-power Hopf algebra over Q",
        outcome(d2),
    );
    Ok(())
}

// ------------------------------------------------------------ retraction

fn suite_retraction(ring: &RingSpec, cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    fn run<R: Ring>(ring: R, cfg: &SuiteConfig, report: &mut Report, tag: &str) -> Result<()> {
        let names: Vec<String> = (1..=cfg.generators).map(|i| format!("c{i}")).collect();
        let refs: Vec<(&str, i64)> = names.iter().map(|n| (n.as_str(), 2i64)).collect();
        let weight = cfg.generators.min(cfg.max_arity) as i64;
        let top = 2 * weight.max(2) + cfg.op_degree;
        let hopf = Rc::new(tensor_hopf(
            ring.clone(),
            &refs,
            Window::new(0, top),
            cfg.generators.max(2) * 2,
        )?);
        let gens: Vec<Pos> = names
            .iter()
            .map(|n| Ok((2i64, hopf.module.find(2, n)?)))
            .collect::<Result<_>>()?;
        let t = TildeCobar::new(
            hopf,
            gens.clone(),
            Window::new(0, top),
            cfg.max_arity + cfg.op_degree as usize,
            cfg.max_arity,
            cfg.op_degree,
        )?;
        let rep = verify_retraction(&t)?;
        report.record(
            format!("retraction.identities-{tag}"),
            "∂h + h∂ = 1 − p, h² = 0, hp = ph = 0, p² = p and π∘ι = id on the free cobar model",
            if rep.ok() {
                Ok(())
            } else {
                Err(rep.failures.join("; "))
            },
        );
        let der = verify_derivation_law(&t, 3)?;
        report.record(
            format!("retraction.derivation-{tag}"),
            "h(xy) = h(x)p(y) + (-1)^{|x|} x h(y) on products",
            if der.ok() {
                Ok(())
            } else {
                Err(der.failures.join("; "))
            },
        );
        // the worked example (meaningful over Z/2 and over Z)
        if cfg.generators >= 3 {
            let op = Surjection::parse("(1,2,3,1)");
            let word = [gens[0], gens[1], gens[2]];
            let x = FreeElement::basis(&t.ring, &op, &word);
            let hx = t.homotopy(&x)?;
            let mut expect = FreeElement::zero();
            expect.insert(
                &t.ring,
                &Surjection::parse("(1,2,1,3,1)"),
                &word,
                t.ring.one(),
            );
            let px = t.p(&x)?;
            let mut opx = FreeElement::zero();
            opx.insert(&t.ring, &Surjection::parse("(1,2,1,3)"), &word, t.ring.one());
            opx.insert(&t.ring, &Surjection::parse("(2,1,3,1)"), &word, t.ring.one());
            let o_alpha = x.sub(&t.ring, &px);
            let mut o_expect = FreeElement::zero();
            o_expect.insert(&t.ring, &op, &word, t.ring.one());
            // over Z/2 the projection terms have coefficient 1; over Z they
            // carry signs, so only assert the support there
            let example_ok = if t.ring.name() == "Z/2" {
                hx == expect
                    && o_alpha
                        == o_expect.add(&t.ring, &opx.scale(&t.ring, &t.ring.from_int(-1)))
            } else {
                hx.terms.len() == 1
                    && hx.terms.keys().next().map(|k| k.op.to_string())
                        == Some("(1,2,1,3,1)".into())
            };
            report.record(
                format!("retraction.worked-example-{tag}"),
                "h((1,2,3,1)(c)) = (1,2,1,3,1)(c) with o = (1,2,3,1)+(1,2,1,3)+(2,1,3,1)",
                if example_ok {
                    Ok(())
                } else {
                    Err(format!("h(x) = {hx:?}"))
                },
            );
        }
        // ideal stability: ∂(I_d) ⊆ I_{d-1} and π(I_d) = 0
        let mut ideal_ok: std::result::Result<(), String> = Ok(());
        for d in 2..=(2 + cfg.op_degree.min(3)) {
            let span = t.ideal_span(d, 2, 2)?;
            if span.is_empty() {
                continue;
            }
            let lower = t.ideal_span(d - 1, 3, 3)?;
            let letters: Vec<Pos> = t.hopf.module.positions().collect();
            let mut basis = t.enumerate_basis(&letters, d - 1, 4, 4);
            for z in &lower {
                basis.extend(z.terms.keys().cloned());
            }
            basis.sort();
            basis.dedup();
            let witness = IdealWitness::new(&t.ring, d - 1, basis, lower)?;
            for z in &span {
                if !t.pi(z)?.is_zero() {
                    ideal_ok = Err(format!("π does not kill I_{d}"));
                }
                let dz = t.differential(z)?;
                if !witness.contains(&t.ring, &dz)? {
                    ideal_ok = Err(format!("∂ I_{d} is not inside I_{}", d - 1));
                }
            }
        }
        report.record(
            format!("retraction.ideal-{tag}"),
            "∂(I_d) ⊆ I_{d-1} and π(I_d) = 0 for the brace-expansion ideal",
            ideal_ok,
        );
        Ok(())
    }
    match ring {
        RingSpec::Integers => run(ZZ, cfg, report, "z")?,
        RingSpec::Rationals => run(QQ, cfg, report, "q")?,
        RingSpec::Mod(m) => run(ZMod::new(*m), cfg, report, &format!("zmod{m}"))?,
    }
    Ok(())
}

// ----------------------------------------------------------------- ce

fn lie_abelian() -> GradedLieAlgebra<QQ> {
    GradedLieAlgebra {
        ring: QQ,
        basis: vec![("ξ".into(), 2)],
        bracket: BTreeMap::new(),
        differential: BTreeMap::new(),
    }
}

fn lie_heisenberg() -> GradedLieAlgebra<QQ> {
    let mut bracket = BTreeMap::new();
    bracket.insert((0usize, 1usize), vec![(QQ.one(), 2usize)]);
    bracket.insert((1usize, 0usize), vec![(QQ.from_int(-1), 2usize)]);
    GradedLieAlgebra {
        ring: QQ,
        basis: vec![("x".into(), 2), ("y".into(), 2), ("z".into(), 4)],
        bracket,
        differential: BTreeMap::new(),
    }
}

fn ce_comparison(l: &GradedLieAlgebra<QQ>, cutoff: i64, tag: &str, report: &mut Report) -> Result<()> {
    let run = || -> Result<()> {
        let ul = Rc::new(enveloping(l, cutoff)?);
        pbw_dimension_oracle(l, &ul, cutoff)?;
        let uld = Rc::new(dualize(&ul)?);
        uld.validate(64)?;
        let ce = ce_complex(l, ul.clone(), cutoff)?;
        check_ce_inclusion(&ce)?;
        let ced = Rc::new(dualize(&ce.pres)?);
        let cstar = TrivialBraceAlgebra::new(ced.clone())?;
        let a = alpha(l, &uld, &ced, &ul, &ce)?;
        is_twisting(uld.as_ref(), &cstar, &a)?;
        is_hopf_twisting(uld.as_ref(), &cstar, &a, 64)?;
        // the algebra map from the cobar of the dual enveloping algebra
        let window = Window::new(-cutoff, 0);
        let omega = Cobar::new(uld.clone(), window, cutoff as usize)?;
        let map = algebra_map_from_twisting(&omega, &cstar, &a)?;
        // chain map
        let om_pres = omega.present()?;
        for p in om_pres.module.positions() {
            let x: Element<QQ> = Element::basis(p.0, p.1, &QQ);
            let lhs = map.apply(&QQ, &om_pres.differential(&x));
            let rhs = ced.differential(&map.apply(&QQ, &x));
            if lhs != rhs {
                return Err(AlgError::AxiomViolation {
                    axiom: "comparison map is a chain map".into(),
                    witness: om_pres.module.label(p.0, p.1).to_string(),
                });
            }
        }
        // quasi-isomorphism via the cone
        let cone = mapping_cone(&om_pres.complex(), &ced.complex(), &map)?;
        let h = homology(&cone, Window::new(-cutoff + 1, -1), false)?;
        if !h.is_trivial() {
            return Err(AlgError::AxiomViolation {
                axiom: "comparison map is a homology isomorphism".into(),
                witness: format!("{:?}", h.by_degree),
            });
        }
        // inclusion CE -> bar(UL) is a quasi-isomorphism as well
        let cone2 = mapping_cone(&ce.pres.complex(), &ce.bar.present()?.complex(), &ce.inclusion)?;
        let h2 = homology(&cone2, Window::new(1, cutoff - 1), false)?;
        if !h2.is_trivial() {
            return Err(AlgError::AxiomViolation {
                axiom: "CE inclusion is a homology isomorphism".into(),
                witness: format!("{:?}", h2.by_degree),
            });
        }
        // sampled brace compatibility of the induced free-model map: the
        // ideal generators evaluate to zero in the trivial-brace target
        let tilde = TildeCobar::new(uld.clone(), vec![], window, cutoff as usize, 2, 2)?;
        for d in (-cutoff + 1)..=-2 {
            for z in tilde.ideal_span(d, 2, 2)? {
                let mut image: Element<QQ> = Element::zero();
                for (term, coeff) in &z.terms {
                    let args: Vec<Element<QQ>> = term
                        .word
                        .iter()
                        .map(|g| a.map.get(g).cloned().unwrap_or_else(Element::zero))
                        .collect();
                    let v = evaluate(
                        &cstar,
                        &OperadElement::basis(QQ, term.op.clone()),
                        &args,
                    )?;
                    image = image.add(&QQ, &v.scale(&QQ, coeff));
                }
                if !image.is_zero() {
                    return Err(AlgError::AxiomViolation {
                        axiom: "free-model comparison kills the ideal".into(),
                        witness: format!("degree {d}"),
                    });
                }
            }
        }
        Ok(())
    };
    report.record(
        format!("ce.compare-{tag}"),
        "the comparison twisting morphism is Hopf and induces a homology isomorphism onto the CE cochain algebra",
        outcome(run()),
    );
    Ok(())
}

fn suite_ce(report: &mut Report) -> Result<()> {
    let abelian = lie_abelian();
    ce_comparison(&abelian, 8, "abelian", report)?;
    let heis = lie_heisenberg();
    ce_comparison(&heis, 8, "heisenberg", report)?;
    Ok(())
}

// --------------------------------------------------------------- duality

/// Decide whether a diagonal sign map turns the given basis bijection into
/// an isomorphism of presented objects, comparing every structure both
/// sides carry. Signs are solved as an F2 linear system.
fn diagonal_iso_exists<R: Ring>(
    x: &PresentedBialgebra<R>,
    y: &PresentedBialgebra<R>,
    correspond: &BTreeMap<Pos, Pos>,
) -> Result<()> {
    let ring = &x.ring;
    let vars: BTreeMap<Pos, usize> = x
        .module
        .positions()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    if vars.len() != correspond.len() {
        return Err(AlgError::Other("correspondence is not total".into()));
    }
    let mut equations: Vec<(Vec<usize>, bool)> = Vec::new();
    let parity = |a: &R::Elem, b: &R::Elem| -> Result<bool> {
        if a == b {
            Ok(false)
        } else if *a == ring.neg(b) {
            Ok(true)
        } else {
            Err(AlgError::Other(
                "structure constants differ by more than a sign".into(),
            ))
        }
    };
    // differential: c_q φ(q) = c'_{c(q)} φ(p)
    for (p, &vp) in &vars {
        let dx = x.d.column(p.0, p.1);
        let dy = y.d.column(correspond[p].0, correspond[p].1);
        let mut dy_map: BTreeMap<Pos, R::Elem> =
            dy.terms.iter().map(|(q, c)| (*q, c.clone())).collect();
        for (q, c) in &dx.terms {
            let cq = correspond
                .get(q)
                .ok_or_else(|| AlgError::Other("target outside correspondence".into()))?;
            let c2 = dy_map
                .remove(cq)
                .ok_or_else(|| AlgError::Other(format!("missing differential term at {q:?}")))?;
            equations.push((vec![vars[q], vp], parity(c, &c2)?));
        }
        if !dy_map.is_empty() {
            return Err(AlgError::Other("extra differential terms on the right".into()));
        }
    }
    // product: φ(p)φ(q) c'_r = φ(r) c_r
    if let (Some(px), Some(py)) = (&x.product, &y.product) {
        for ((p, q), e) in px {
            let key = (correspond[p], correspond[q]);
            let e2 = py
                .get(&key)
                .ok_or_else(|| AlgError::Other("missing product entry".into()))?;
            let mut e2_map: BTreeMap<Pos, R::Elem> =
                e2.terms.iter().map(|(r, c)| (*r, c.clone())).collect();
            for (r, c) in &e.terms {
                let cr = correspond[r];
                let c2 = e2_map
                    .remove(&cr)
                    .ok_or_else(|| AlgError::Other("missing product term".into()))?;
                equations.push((vec![vars[p], vars[q], vars[r]], parity(c, &c2)?));
            }
            if !e2_map.is_empty() {
                return Err(AlgError::Other("extra product terms on the right".into()));
            }
        }
    }
    // coproduct: φ(a)φ(b) c' = φ(p) c
    if let (Some(cx), Some(cy)) = (&x.coproduct, &y.coproduct) {
        for (p, terms) in cx {
            let t2 = cy
                .get(&correspond[p])
                .ok_or_else(|| AlgError::Other("missing coproduct entry".into()))?;
            let mut t2_map: BTreeMap<(Pos, Pos), R::Elem> = t2
                .iter()
                .map(|(c, a, b)| ((*a, *b), c.clone()))
                .collect();
            for (c, a, b) in terms {
                let key = (correspond[a], correspond[b]);
                let c2 = t2_map
                    .remove(&key)
                    .ok_or_else(|| AlgError::Other("missing coproduct term".into()))?;
                equations.push((vec![vars[a], vars[b], vars[p]], parity(c, &c2)?));
            }
            if !t2_map.is_empty() {
                return Err(AlgError::Other("extra coproduct terms on the right".into()));
            }
        }
    }
    // F2 Gaussian elimination
    let n = vars.len();
    let mut rows: Vec<(Vec<bool>, bool)> = Vec::new();
    for (idxs, rhs) in equations {
        let mut row = vec![false; n];
        for i in idxs {
            row[i] = !row[i];
        }
        rows.push((row, rhs));
    }
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; n];
    let mut stored: Vec<(Vec<bool>, bool)> = Vec::new();
    for (mut row, mut rhs) in rows {
        loop {
            let Some(c) = row.iter().position(|&b| b) else {
                if rhs {
                    return Err(AlgError::Other(
                        "sign system is inconsistent: no diagonal isomorphism".into(),
                    ));
                }
                break;
            };
            match pivot_row_of_col[c] {
                None => {
                    pivot_row_of_col[c] = Some(stored.len());
                    stored.push((row, rhs));
                    break;
                }
                Some(r) => {
                    let (prow, prhs) = stored[r].clone();
                    for (a, b) in row.iter_mut().zip(&prow) {
                        *a ^= *b;
                    }
                    rhs ^= prhs;
                }
            }
        }
    }
    Ok(())
}

fn suite_duality(report: &mut Report) -> Result<()> {
    // (ΩC)^∨ ≅ B(C^∨) for C = T(v), degreewise ≤ 6
    let first = (|| -> Result<()> {
        let c = Rc::new(tensor_hopf(ZZ, &[("v", 2)], Window::new(0, 6), 3)?);
        let omega = Cobar::new(c.clone(), Window::new(0, 6), 6)?;
        let omega_dual = dualize(&omega.present()?)?;
        let cd = Rc::new(dualize(&c)?);
        let cd_alg: Rc<dyn S2Algebra<ZZ>> = Rc::new(TrivialBraceAlgebra::new(cd.clone())?);
        let bar = BarHopf::new(cd_alg, Window::new(-6, 0), 6)?;
        // compare as coalgebras with differential: drop the bar cup side
        let mut bar_pres = bar.present_coalgebra()?;
        bar_pres.product = None;
        let mut xd = omega_dual;
        xd.product = None;
        let mut correspond: BTreeMap<Pos, Pos> = BTreeMap::new();
        for (pos, word) in &omega.words {
            let dual_word: Vec<Pos> = word.iter().map(|p| (-p.0, p.1)).collect();
            let bp = bar.word_pos(&dual_word)?;
            correspond.insert((-pos.0, pos.1), bp);
        }
        diagonal_iso_exists(&xd, &bar_pres, &correspond)
    })();
    report.record(
        "duality.cobar-dual",
        "the dual of the cobar construction is the bar construction of the dual, degreewise ≤ 6",
        outcome(first),
    );
    // (BA)^∨ ≅ Ω(A^∨) for A = Z[v]/v^3, degreewise ≤ 6
    let second = (|| -> Result<()> {
        let a = Rc::new(crate::presented::truncated_polynomial(
            ZZ,
            2,
            3,
            Window::new(0, 12),
        )?);
        let alg: Rc<dyn S2Algebra<ZZ>> = Rc::new(TrivialBraceAlgebra::new(a.clone())?);
        let bar = BarHopf::new(alg, Window::new(0, 6), 3)?;
        let bar_dual = dualize(&bar.present()?)?;
        let ad = Rc::new(dualize(&a)?);
        let omega = Cobar::new(ad.clone(), Window::new(-6, 0), 3)?;
        let mut om_pres = omega.present()?;
        // compare as algebras with differential
        let mut xd = bar_dual;
        xd.coproduct = None;
        om_pres.coproduct = None;
        let mut correspond: BTreeMap<Pos, Pos> = BTreeMap::new();
        for (pos, word) in &bar.words {
            let dual_word: Vec<Pos> = word.iter().map(|p| (-p.0, p.1)).collect();
            let op = omega.word_pos(&dual_word)?;
            correspond.insert((-pos.0, pos.1), op);
        }
        diagonal_iso_exists(&xd, &om_pres, &correspond)
    })();
    report.record(
        "duality.bar-dual",
        "the dual of the bar construction is the cobar construction of the dual, degreewise ≤ 6",
        outcome(second),
    );
    Ok(())
}
