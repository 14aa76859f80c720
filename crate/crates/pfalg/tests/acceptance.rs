//! The acceptance suite: one test per criterion, each printing a verdict
//! line. All checks are exact; the runtime bounds are asserted where the
//! criterion states one.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pfalg_core::algebra::{generated_congruence, is_congruence, natural_le, FinAlgebra};
use pfalg_core::catalog::{self, GateMode, LawStatus, Universe};
use pfalg_core::filters::{
    enumerate_filters, eps_congruence, is_prime_minus, is_prime_override, is_separating_for,
    is_weakly_prime, maximal_separating_filter, principal_filter,
};
use pfalg_core::pfun::{all_pfuns, generate_subalgebra, FinSet, PFun, DEFAULT_CLOSURE_CAP};
use pfalg_core::repr::{represent, route_for};
use pfalg_core::search::{CertOutcome, SearchLimits};
use pfalg_core::syntax::{check_lawset, eval_term, law_holds, Law, LawOutcome, Signature, Sym};

fn pass(n: usize, what: &str) {
    println!("criterion {n}: PASS — {what}");
}

/// Criterion 1: every non-quarantined catalog law set passes exhaustive
/// checking over the nine functions of its home universe, and over PT(3)
/// for laws with at most three variables; the only failures are the two
/// documented transcription items. The comparison-operation identity suite
/// is not an axiom law set and is covered by criterion 8 instead.
#[test]
fn criterion_1_soundness_sweep() {
    let started = Instant::now();
    let p22 = Universe::P(2, 2).build();
    let pt2 = Universe::Pt(2).build();
    let pt3 = Universe::Pt(3).build();
    let mut failing_texts: Vec<String> = Vec::new();
    let mut swept_laws = 0usize;
    let mut seen_pt3: Vec<String> = Vec::new();
    for name in catalog::lawset_names() {
        let entry = catalog::load_lawset(name).unwrap();
        if entry.signature.contains(Sym::K) {
            continue; // operation-definition suite, handled by criterion 8
        }
        let home = if entry.home_universe == Universe::Pt(2) {
            &pt2
        } else {
            &p22
        };
        let outcomes = catalog::soundness_gate(&entry.laws, home, GateMode::Exhaustive).unwrap();
        for o in &outcomes {
            swept_laws += 1;
            if let LawStatus::Quarantined(_) = o.status {
                if !failing_texts.contains(&o.law.text()) {
                    failing_texts.push(o.law.text());
                }
            }
        }
        for law in &entry.laws {
            if law.variables().len() <= 3 && !seen_pt3.contains(&law.text()) {
                seen_pt3.push(law.text());
                let out =
                    catalog::soundness_gate(std::slice::from_ref(law), &pt3, GateMode::Exhaustive)
                        .unwrap();
                if let LawStatus::Quarantined(_) = out[0].status {
                    if !failing_texts.contains(&law.text()) {
                        failing_texts.push(law.text());
                    }
                }
            }
        }
    }
    let documented: Vec<String> = catalog::documented_quarantined_texts()
        .into_iter()
        .filter(|t| !t.contains('K'))
        .collect();
    failing_texts.sort();
    let mut expected = documented.clone();
    expected.sort();
    assert_eq!(
        failing_texts, expected,
        "sweep failures must be exactly the two documented transcription items"
    );
    assert_eq!(expected.len(), 2);
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "sweep took {elapsed:?}, over the 60 s budget"
    );
    pass(
        1,
        &format!(
            "{swept_laws} laws swept, {} PT(3) reruns, 2 documented failures, {elapsed:?}",
            seen_pt3.len()
        ),
    );
}

fn random_generators(rng: &mut ChaCha8Rng, pool: &[PFun]) -> Vec<(String, PFun)> {
    let k = 1 + rng.random_range(0..3usize);
    (0..k)
        .map(|i| {
            let f = pool[rng.random_range(0..pool.len())].clone();
            (format!("f{i}"), f)
        })
        .collect()
}

/// Criterion 2: choose-family + build + verify reports zero failures for
/// (a) the minus example, (b) the lifted update example, and (c) fifty
/// random generated subalgebras per supported signature row.
#[test]
fn criterion_2_representation_round_trips() {
    let started = Instant::now();

    let pq = catalog::load_example("properqe").unwrap();
    let (_, _, report) = represent(&pq.algebra, &Signature::new([Sym::Mns])).unwrap();
    assert!(report.all_pass(), "minus example: {report:?}");

    let ucq = catalog::load_example("updatecapqv").unwrap();
    let (_, _, report) = represent(
        &ucq.algebra,
        &Signature::new([Sym::Res, Sym::Cap, Sym::Upd]),
    )
    .unwrap();
    assert!(report.all_pass(), "update example: {report:?}");

    let rows: Vec<Vec<Sym>> = vec![
        // composition-free rows
        vec![Sym::Res],
        vec![Sym::Res, Sym::Cap],
        vec![Sym::Mns],
        vec![Sym::Mns, Sym::Cap],
        vec![Sym::Mns, Sym::Ovr],
        vec![Sym::Mns, Sym::Ovr, Sym::Cap],
        vec![Sym::Mns, Sym::Upd],
        vec![Sym::Mns, Sym::Upd, Sym::Cap],
        vec![Sym::Res, Sym::Cap, Sym::Ovr],
        vec![Sym::Res, Sym::Cap, Sym::Upd],
        // rows with composition
        vec![Sym::Cmp, Sym::Res],
        vec![Sym::Cmp, Sym::Res, Sym::Cap],
        vec![Sym::Cmp, Sym::Mns],
        vec![Sym::Cmp, Sym::Mns, Sym::Cap],
        vec![Sym::Cmp, Sym::Mns, Sym::Ovr],
        vec![Sym::Cmp, Sym::Mns, Sym::Ovr, Sym::Cap],
        vec![Sym::Cmp, Sym::Mns, Sym::Upd],
        vec![Sym::Cmp, Sym::Mns, Sym::Upd, Sym::Cap],
        vec![Sym::Cmp, Sym::Res, Sym::Cap, Sym::Ovr],
        vec![Sym::Cmp, Sym::Res, Sym::Cap, Sym::Upd],
        // rows with the domain operation
        vec![Sym::Cmp, Sym::Dom],
        vec![Sym::Cmp, Sym::Dom, Sym::Cap],
        vec![Sym::Cmp, Sym::Dom, Sym::Mns],
        vec![Sym::Cmp, Sym::Dom, Sym::Mns, Sym::Cap],
        vec![Sym::Cmp, Sym::Dom, Sym::Mns, Sym::Ovr],
        vec![Sym::Cmp, Sym::Dom, Sym::Mns, Sym::Upd],
        vec![Sym::Cmp, Sym::Dom, Sym::Cap, Sym::Ovr],
        vec![Sym::Cmp, Sym::Dom, Sym::Cap, Sym::Upd],
    ];
    let x2 = FinSet::indexed("X", "x", 2);
    let y2 = FinSet::indexed("Y", "y", 2);
    let p22 = all_pfuns(&x2, &y2);
    let pt2 = all_pfuns(&x2, &x2);
    let mut built = 0usize;
    for row in &rows {
        let sig = Signature::new(row.iter().copied());
        assert!(route_for(&sig).is_some(), "row {sig} must be supported");
        let endo = sig.contains(Sym::Cmp) || sig.contains(Sym::Dom);
        let pool = if endo { &pt2 } else { &p22 };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let gens = random_generators(&mut rng, pool);
            let closure = generate_subalgebra(&gens, &sig, DEFAULT_CLOSURE_CAP).unwrap();
            let (_, rep, report) =
                represent(&closure.algebra, &sig).unwrap_or_else(|e| panic!("row {sig}: {e}"));
            assert!(
                report.all_pass(),
                "row {sig}, {} elements: {report:?}",
                closure.algebra.size()
            );
            assert!(rep.images.len() == rep.algebra.size());
            built += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(300),
        "round-trips took {elapsed:?}, over the 5 min budget"
    );
    pass(
        2,
        &format!(
            "2 worked examples + {built} random subalgebras over {} rows, {elapsed:?}",
            rows.len()
        ),
    );
}

/// Criterion 3: the minus example's congruence and quotient violation, and
/// exit 0 from `reproduce properqe`. The printed witness tuple is provably
/// vacuous (its first hypothesis is its conclusion), so the recomputed
/// first violation (a,c,a,b) is asserted and the printed claim (c,d,a,b)
/// is asserted to be no violation at all.
#[test]
fn criterion_3_properqe_reproduction() {
    let ex = catalog::load_example("properqe").unwrap();
    let alg = &ex.algebra;
    let theta = ex.theta.as_ref().unwrap();
    let e = alg.index_of("e").unwrap();
    let f = alg.index_of("f").unwrap();
    assert_eq!(generated_congruence(alg, &[(e, f)]).unwrap(), theta.clone());
    assert!(is_congruence(alg, theta).unwrap());

    let quot = ex.quotient.as_ref().unwrap();
    let (law, violation) = ex.violation.as_ref().unwrap();
    match law_holds(quot, law).unwrap() {
        LawOutcome::Violated(v) => assert_eq!(&v, violation),
        LawOutcome::Holds => panic!("quotient must violate the quasiequation"),
    }
    let labels: Vec<&str> = violation
        .assignment
        .iter()
        .map(|&i| quot.label(i))
        .collect();
    assert_eq!(labels, ["a", "c", "a", "b"]);

    // the printed tuple cannot witness anything: (x-y)∘s = x∘s when x-y = x
    let assign = |l: &str| quot.index_of(l).unwrap();
    let printed = [
        ("x", assign("c")),
        ("y", assign("d")),
        ("s", assign("a")),
        ("t", assign("b")),
    ];
    let env: Vec<(String, usize)> = printed.iter().map(|(v, i)| (v.to_string(), *i)).collect();
    let hyp1_l = eval_term(quot, &law.hypotheses[0].0, &env).unwrap();
    let hyp1_r = eval_term(quot, &law.hypotheses[0].1, &env).unwrap();
    let hyp2_l = eval_term(quot, &law.hypotheses[1].0, &env).unwrap();
    let hyp2_r = eval_term(quot, &law.hypotheses[1].1, &env).unwrap();
    let con_l = eval_term(quot, &law.conclusion.0, &env).unwrap();
    let con_r = eval_term(quot, &law.conclusion.1, &env).unwrap();
    assert_eq!(
        (hyp1_l, hyp1_r),
        (con_l, con_r),
        "hypothesis 1 is the conclusion here"
    );
    assert!(
        !(hyp1_l == hyp1_r && hyp2_l == hyp2_r && con_l != con_r),
        "the printed tuple must not be a violation"
    );

    let out = Command::new(env!("CARGO_BIN_EXE_pfalg"))
        .args(["reproduce", "properqe"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "reproduce properqe exited {:?}",
        out.status.code()
    );
    pass(
        3,
        "congruence, quotient violation at (a,c,a,b), reproduce exits 0",
    );
}

/// Criterion 4: the skew-lattice example evaluates ((e⊔i)∩i)⊔e to e while
/// e⊔i is 1, and the intersection/override axiom comes back violated.
#[test]
fn criterion_4_droi_reproduction() {
    let ex = catalog::load_example("droi").unwrap();
    let alg = &ex.algebra;
    let e = alg.index_of("e").unwrap();
    let i = alg.index_of("i").unwrap();
    let one = alg.index_of("1").unwrap();
    let ei = alg.op2(Sym::Ovr, e, i);
    assert_eq!(ei, one);
    let lhs = alg.op2(Sym::Ovr, alg.op2(Sym::Cap, ei, i), e);
    assert_eq!(lhs, e);
    let (law, violation) = ex.violation.as_ref().unwrap();
    match law_holds(alg, law).unwrap() {
        LawOutcome::Violated(v) => {
            assert_eq!(&v, violation);
            let labels: Vec<&str> = v.assignment.iter().map(|&k| alg.label(k)).collect();
            assert_eq!(labels, ["e", "i"]);
        }
        LawOutcome::Holds => panic!("the axiom must be violated"),
    }
    pass(4, "((e⊔i)∩i)⊔e = e, e⊔i = 1, axiom violated at (e,i)");
}

/// Criterion 5: the update example's recomputed tables, the {e,0}
/// congruence for all four operations, the quotient violation, and the
/// printed-table diff being exactly the three documented cells.
#[test]
fn criterion_5_updatecapqv_reproduction() {
    let ex = catalog::load_example("updatecapqv").unwrap();
    let alg = &ex.algebra;
    // tables agree with recomputing on the stored concrete functions
    for sym in [Sym::Res, Sym::Upd, Sym::Cap, Sym::Cmp] {
        for x in 0..alg.size() {
            for y in 0..alg.size() {
                let direct =
                    pfalg_core::pfun::apply_concrete(sym, &[&ex.elements[x], &ex.elements[y]])
                        .unwrap();
                assert_eq!(ex.elements[alg.op2(sym, x, y)], direct);
            }
        }
    }
    let theta = ex.theta.as_ref().unwrap();
    let e = alg.index_of("e").unwrap();
    let z = alg.zero().unwrap();
    assert_eq!(theta.nontrivial_blocks(), vec![vec![e, z]]);
    assert!(is_congruence(alg, theta).unwrap());
    let (law, violation) = ex.violation.as_ref().unwrap();
    assert!(!law.is_equation());
    let quot = ex.quotient.as_ref().unwrap();
    match law_holds(quot, law).unwrap() {
        LawOutcome::Violated(v) => assert_eq!(&v, violation),
        LawOutcome::Holds => panic!("quotient must violate the update quasiequation"),
    }
    assert_eq!(
        ex.discrepancies,
        vec![
            "res(d,1): recomputed 1, printed a",
            "upd(d,1): recomputed 1, printed a",
            "upd(d,c): recomputed 1, printed a",
        ]
    );
    let out = Command::new(env!("CARGO_BIN_EXE_pfalg"))
        .args(["reproduce", "updatecapqv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("discrepancy: res(d,1): recomputed 1, printed a"));
    pass(
        5,
        "tables recomputed, congruence holds, quotient violation, 3-cell diff reported",
    );
}

fn res_reduct(alg: &FinAlgebra) -> FinAlgebra {
    let n = alg.size();
    let mut res = vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            res[x * n + y] = alg.res(x, y).unwrap();
        }
    }
    FinAlgebra::new(
        alg.labels().to_vec(),
        BTreeMap::from([(Sym::Res, res)]),
        alg.zero(),
        alg.one(),
    )
    .unwrap()
}

/// Criterion 6: filter-theory properties on the catalog algebras and 100
/// random generated bands (seed 0): every filter's merging congruence is a
/// congruence of the restriction reduct, principal filters separate,
/// maximal separating filters pass the primeness predicate matching the
/// host, and the intersection biconditional holds in intersection hosts.
#[test]
fn criterion_6_filter_theory_suite() {
    let mut hosts: Vec<(String, FinAlgebra)> = Vec::new();
    hosts.push((
        "properqe".into(),
        catalog::load_example("properqe").unwrap().algebra,
    ));
    hosts.push((
        "updatecapqv".into(),
        catalog::load_example("updatecapqv").unwrap().algebra,
    ));
    hosts.push((
        "droi".into(),
        catalog::load_example("droi").unwrap().algebra,
    ));
    let x2 = FinSet::indexed("X", "x", 2);
    let y2 = FinSet::indexed("Y", "y", 2);
    let pool = all_pfuns(&x2, &y2);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for k in 0..100 {
        let gens = random_generators(&mut rng, &pool);
        let sig = Signature::new([Sym::Res]);
        let closure = generate_subalgebra(&gens, &sig, DEFAULT_CLOSURE_CAP).unwrap();
        hosts.push((format!("random-{k}"), closure.algebra));
    }

    let mut filters_checked = 0usize;
    let mut maxsep_checked = 0usize;
    for (name, alg) in &hosts {
        let reduct = res_reduct(alg);
        for f in enumerate_filters(alg).unwrap() {
            let eps = eps_congruence(alg, &f).unwrap();
            assert!(
                is_congruence(&reduct, &eps.partition).unwrap(),
                "{name}: eps of {} is no congruence",
                f.describe(alg)
            );
            // the filter and its complement are unions of merging classes
            for block in eps.partition.blocks() {
                let inside = block.iter().filter(|&&x| f.contains(x)).count();
                assert!(
                    inside == 0 || inside == block.len(),
                    "{name}: {} splits a class",
                    f.describe(alg)
                );
            }
            filters_checked += 1;
        }
        for a in 0..alg.size() {
            for b in 0..alg.size() {
                if natural_le(alg, a, b).unwrap() {
                    continue;
                }
                let up = principal_filter(alg, a).unwrap();
                assert!(
                    is_separating_for(alg, &up, a, b).unwrap(),
                    "{name}: principal filter of {a} fails to separate ({a},{b})"
                );
                let max = maximal_separating_filter(alg, a, b).unwrap();
                assert!(is_separating_for(alg, &max, a, b).unwrap());
                // the finitised maximality consequence: anything outside a
                // maximal filter is merged below some member
                for y in 0..alg.size() {
                    if max.contains(y) {
                        continue;
                    }
                    let found = max.members().iter().any(|&fm| {
                        let fy = alg.res(fm, y).unwrap();
                        alg.res(fy, a).unwrap() == alg.res(fy, b).unwrap()
                    });
                    assert!(
                        found,
                        "{name}: no member of the maximal ({a},{b})-separating filter merges below {y}"
                    );
                }
                let sig = alg.signature();
                if sig.contains(Sym::Mns) {
                    assert!(
                        is_prime_minus(alg, &max).unwrap(),
                        "{name}: maximal filter not prime (minus sense)"
                    );
                } else if sig.contains(Sym::Ovr) && sig.contains(Sym::Cap) {
                    assert!(
                        is_prime_override(alg, &max).unwrap(),
                        "{name}: maximal filter not prime (override sense)"
                    );
                } else if sig.contains(Sym::Upd) && sig.contains(Sym::Cap) {
                    assert!(
                        is_weakly_prime(alg, &max).unwrap(),
                        "{name}: maximal filter not weakly prime"
                    );
                }
                maxsep_checked += 1;
            }
        }
        if alg.signature().contains(Sym::Cap) {
            for f in enumerate_filters(alg).unwrap() {
                let eps = eps_congruence(alg, &f).unwrap();
                for x in 0..alg.size() {
                    for y in 0..alg.size() {
                        let lhs = f.contains(x) && f.contains(y) && eps.partition.same_block(x, y);
                        let rhs = f.contains(alg.op2(Sym::Cap, x, y));
                        assert_eq!(lhs, rhs, "{name}: intersection biconditional at ({x},{y})");
                    }
                }
            }
        }
    }
    pass(
        6,
        &format!(
            "{} hosts, {filters_checked} filters, {maxsep_checked} maximal separating filters",
            hosts.len()
        ),
    );
}

/// Criterion 7: irredundance certificates for the five-law intersection
/// base at sizes up to 4, each independently re-verified; the other trimmed
/// bases are attempted with bounded-failure reporting allowed.
#[test]
fn criterion_7_irredundance_certificates() {
    let started = Instant::now();
    let entry = catalog::load_lawset("capslick").unwrap();
    let sig = Signature::new([Sym::Res, Sym::Cap]);
    let limits = SearchLimits::default();
    let certs =
        pfalg_core::search::irredundance_certificates(&sig, &entry.laws, 4, &limits).unwrap();
    assert_eq!(certs.len(), 5);
    for cert in &certs {
        match &cert.outcome {
            CertOutcome::Model {
                algebra,
                witness,
                size,
            } => {
                assert!(*size <= 4);
                // independent re-verification of the certificate
                let rest: Vec<Law> = entry
                    .laws
                    .iter()
                    .filter(|l| l.name != cert.omitted.name)
                    .cloned()
                    .collect();
                let report = check_lawset(algebra, &rest).unwrap();
                assert!(report.all_hold(), "certificate fails the remaining laws");
                match law_holds(algebra, &cert.omitted).unwrap() {
                    LawOutcome::Violated(v) => {
                        assert_eq!(v.assignment, witness.assignment)
                    }
                    LawOutcome::Holds => panic!("certificate satisfies the omitted law"),
                }
            }
            CertOutcome::NoneUpToBound { .. } => {
                panic!("no certificate for {}", cert.omitted.name)
            }
        }
    }

    // attempts; bounded failure is allowed, errors are not. The search
    // signature is every symbol the printed laws mention, so definitional
    // laws stay falsifiable.
    for name in ["slickminus", "slickskew", "bestoverint"] {
        let entry = catalog::load_lawset(name).unwrap();
        let mut sig = Signature::default();
        for law in &entry.laws {
            for s in law.symbols() {
                sig = sig.with(s);
            }
        }
        let limits = SearchLimits {
            node_cap: Some(3_000_000),
            ..SearchLimits::default()
        };
        let certs =
            pfalg_core::search::irredundance_certificates(&sig, &entry.laws, 4, &limits).unwrap();
        let found = certs
            .iter()
            .filter(|c| matches!(c.outcome, CertOutcome::Model { .. }))
            .count();
        println!(
            "criterion 7 note: {name}: {found}/{} certificates within bounds",
            certs.len()
        );
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(300),
        "irredundance took {elapsed:?}, over the 5 min budget"
    );
    pass(7, &format!("5/5 certificates re-verified, {elapsed:?}"));
}

/// Criterion 8: the derived-law suites pass exhaustively on the two-point
/// universes: the alternative quasiequation, the restriction-domain
/// consequences, the sound update/minus laws, the meet biconditional, left
/// distributivity, and all non-quarantined interdefinability and comparison
/// identities.
#[test]
fn criterion_8_derived_law_suite() {
    let p22 = Universe::P(2, 2).build();
    let pt2 = Universe::Pt(2).build();
    let mut checked = 0usize;
    for name in [
        "altqi",
        "leftunionminus",
        "extralaws",
        "minusupvar-sound",
        "nicemeet",
        "left-distributivity",
        "interdef-s1-bullets",
        "comparison-identities",
    ] {
        let entry = catalog::load_lawset(name).unwrap();
        let home = if entry.home_universe == Universe::Pt(2) {
            &pt2
        } else {
            &p22
        };
        let sound = entry.sound_laws();
        let outcomes = catalog::soundness_gate(&sound, home, GateMode::Exhaustive).unwrap();
        for o in &outcomes {
            assert!(
                o.status.is_sound(),
                "{name}: {} fails exhaustively",
                o.law.name
            );
            checked += 1;
        }
    }
    pass(
        8,
        &format!("{checked} derived laws and identities pass exhaustively"),
    );
}

/// Criterion 9: `reproduce all --json` twice is byte-identical.
#[test]
fn criterion_9_determinism() {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_pfalg"))
            .args(["reproduce", "all", "--json"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let a = run();
    let b = run();
    assert_eq!(a, b, "reproduce all --json must be byte-identical");
    assert!(!a.is_empty());
    pass(9, &format!("{} bytes, byte-identical across runs", a.len()));
}

/// The exit-code contract of the command line.
#[test]
fn cli_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pfalg");
    // invalid size: usage error
    let out = Command::new(bin)
        .args(["search", "--laws", "rnb", "--size", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // reproduce all: everything holds
    let out = Command::new(bin)
        .args(["reproduce", "all"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // catalog-list works
    let out = Command::new(bin).args(["catalog-list"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("borlido") && text.contains("quarantined:1"));
}
