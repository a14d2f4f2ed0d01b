//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

use std::io::Write;
use std::time::{Duration, Instant};

use propclust::audit::{
    audit, dprf_check, if_min_beta, pf_min_alpha, q_core_min_alpha, q_if_min_beta, q_tc_min_alpha, rank_jr_check,
    rank_pjr_check, rank_pjr_plus_check, reevaluate_deviation, tc_min_alpha, uprf_check, AuditParams, AuditReport,
    AuditResult, Notion, RankCaps, Witness,
};
use propclust::fixtures::{fixture, Fixture, FixtureId};
use propclust::generate::{corpus_instance, generate, CandidateMode, Family, GenSpec};
use propclust::io::OutcomeFile;
use propclust::oracle;
use propclust::{
    expanding_approvals, fair_greedy_capture, greedy_capture, restricted_solve, CandidateSet, Instance, Outcome,
    Rational, RestrictedRule, Seed,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

/// Written straight to stderr so the line shows up even when libtest
/// captures test output.
fn report(n: u32, failures: &[String], detail: String) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "criterion {n}: {verdict} ({detail})");
    for f in failures.iter().take(10) {
        let _ = writeln!(err, "    {f}");
    }
}

fn finish(n: u32, failures: Vec<String>, detail: String) {
    report(n, &failures, detail);
    assert!(failures.is_empty(), "criterion {n} failed: {} problem(s), first: {}", failures.len(), failures[0]);
}

fn r(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

fn gammas() -> [Rational; 3] {
    [r(3, 2), r(2, 1), r(4, 1)]
}

fn gf(g: Rational) -> f64 {
    *g.numer() as f64 / *g.denom() as f64
}

fn value(rep: &AuditReport) -> f64 {
    rep.value().expect("value notion")
}

fn same(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= TOL
}

/// `a ≤ b + 10⁻⁹`, with `∞ ≤ ∞`.
fn le(a: f64, b: f64) -> bool {
    b == f64::INFINITY || a <= b + TOL
}

fn fx(id: &str) -> Fixture {
    fixture(&id.parse::<FixtureId>().unwrap()).unwrap()
}

fn w_of(f: &Fixture, labels: &str) -> Outcome {
    Outcome::external(f.points(labels).unwrap())
}

fn passes(rep: &AuditReport) -> Option<bool> {
    if rep.is_exact() || rep.result == AuditResult::Violation {
        rep.passed()
    } else {
        None
    }
}

fn corpus(count: u64, max_n: usize, max_c: usize) -> Vec<Instance> {
    (0..count).map(|s| corpus_instance(s, max_n, max_c, 5).unwrap()).collect()
}

/// Greedy capture, expanding approvals and two random outcomes.
fn outcomes(inst: &Instance, seed: u64) -> Vec<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![greedy_capture(inst).unwrap().0, expanding_approvals(inst).unwrap().0];
    let cands = inst.candidates().to_vec();
    let full = inst.k().min(cands.len());
    for size in [full, rng.gen_range(1..=full)] {
        let mut c = cands.clone();
        c.shuffle(&mut rng);
        c.truncate(size);
        out.push(Outcome::external(c));
    }
    out
}

#[test]
fn criterion_1_worked_examples() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            fails.push(what.to_string());
        }
    };

    let fig2a = fx("fig2a");
    let inst5 = fig2a.instance().unwrap();
    let inst4 = inst5.with_k(4).unwrap();
    let w5 = w_of(&fig2a, "1,2,3,6,9");
    let w4 = w_of(&fig2a, "1,2,6,7");
    check(same(value(&pf_min_alpha(&inst5, &w5).unwrap()), 1.0), "fig2a k=5: pf = 1");
    let qc = q_core_min_alpha(&inst5, &w5, 3, None).unwrap();
    let qc_witness = match &qc.witness {
        Some(Witness::Deviation { candidates, .. }) => candidates.clone(),
        _ => Vec::new(),
    };
    check(
        same(value(&qc), 10.0 / 3.0) && qc_witness == fig2a.points("6,9,10").unwrap(),
        &format!("fig2a k=5: q-core(q=3) = 10/3 with C'={{6,9,10}} (computed {} with C' ids {:?})", value(&qc), qc_witness),
    );
    let ifr = if_min_beta(&inst4, &w4).unwrap();
    check(
        same(value(&ifr), 2.0) && matches!(ifr.witness, Some(Witness::Agent { agent: 7, .. })),
        "fig2a k=4: if = 2 at agent 8",
    );
    let tc = tc_min_alpha(&inst4, &w4, r(1, 1)).unwrap();
    let group = [7, 8, 9];
    let c9 = fig2a.points("9").unwrap();
    let out_sum: f64 = group.iter().map(|&i| inst4.space().dist_q(inst4.agents()[i], w4.centers(), 1).unwrap()).sum();
    let dev_sum: f64 = group.iter().map(|&i| inst4.agent_dist(i, c9[0])).sum();
    check(
        value(&tc) >= 2.0 - TOL
            && same(out_sum, 4.0)
            && same(dev_sum, 2.0)
            && same(reevaluate_deviation(&inst4, &w4, &group, &c9, 1, true), 2.0),
        "fig2a k=4: tc(γ=1) ≥ 2 with ({8,9,10}, 9), sums 4 vs 2",
    );

    let caps = RankCaps::default();
    let fig2b = fx("fig2b");
    let (inst, w) = (fig2b.instance().unwrap(), w_of(&fig2b, "1,2,3,6,9"));
    check(passes(&dprf_check(&inst, &w, &caps).unwrap()) == Some(false), "fig2b: DPRF violated");
    check(passes(&uprf_check(&inst, &w, &caps).unwrap()) == Some(true), "fig2b: UPRF passes");

    let fig3a = fx("fig3a");
    let (inst, w) = (fig3a.instance().unwrap(), w_of(&fig3a, "1,2,3,6"));
    check(passes(&rank_jr_check(&inst, &w).unwrap()) == Some(true), "fig3a: rank-JR passes");
    check(passes(&rank_pjr_check(&inst, &w, &caps).unwrap()) == Some(false), "fig3a: rank-PJR violated");

    let fig3b = fx("fig3b");
    let (inst, w) = (fig3b.instance().unwrap(), w_of(&fig3b, "1,2,3,9"));
    check(passes(&rank_pjr_check(&inst, &w, &caps).unwrap()) == Some(true), "fig3b: rank-PJR passes");
    let plus = rank_pjr_plus_check(&inst, &w, &caps).unwrap();
    check(
        plus.rank_violation().is_some_and(|v| same(v.threshold_y, 3.0) && v.witness_candidates == vec![5]),
        "fig3b: rank-PJR+ violated at y=3 with candidate 6",
    );

    let path = fx("path_uprf");
    let (inst, w) = (path.instance().unwrap(), w_of(&path, "c"));
    check(passes(&uprf_check(&inst, &w, &caps).unwrap()) == Some(true), "path_uprf: UPRF passes");
    check(passes(&rank_jr_check(&inst, &w).unwrap()) == Some(false), "path_uprf: rank-JR violated");

    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), &format!("total time {elapsed:?} < 1 s"));
    finish(1, fails, format!("worked examples in {elapsed:?}"));
}

#[test]
fn criterion_2_rule_axioms() {
    let start = Instant::now();
    let caps = RankCaps::default();
    let mut fails = Vec::new();
    let insts = corpus(500, 12, 12);
    for (s, inst) in insts.iter().enumerate() {
        let gc = greedy_capture(inst).unwrap().0;
        if passes(&rank_jr_check(inst, &gc).unwrap()) != Some(true) {
            fails.push(format!("seed {s}: greedy capture fails rank-JR"));
        }
        let ea = expanding_approvals(inst).unwrap().0;
        if passes(&rank_pjr_plus_check(inst, &ea, &caps).unwrap()) != Some(true) {
            fails.push(format!("seed {s}: expanding approvals not certified rank-PJR+"));
        }
        if passes(&rank_pjr_check(inst, &ea, &caps).unwrap()) != Some(true) {
            fails.push(format!("seed {s}: expanding approvals not certified rank-PJR"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        fails.push(format!("took {elapsed:?} > 60 s"));
    }
    finish(2, fails, format!("{} instances in {elapsed:?}", insts.len()));
}

#[test]
fn criterion_3_theorem_bounds() {
    let start = Instant::now();
    let caps = RankCaps::default();
    let mut fails: Vec<String> = Vec::new();
    let mut applied = [0usize; 6];
    let bound = |fails: &mut Vec<String>, ok: bool, what: String| {
        if !ok {
            fails.push(what);
        }
    };
    let sqrt2 = 2f64.sqrt();
    for (s, inst) in corpus(500, 12, 12).iter().enumerate() {
        let within = inst.agents_within_candidates();
        let qs: Vec<usize> = (1..=3).filter(|&q| q <= inst.k()).collect();
        for (o, w) in outcomes(inst, s as u64).iter().enumerate() {
            let tag = format!("seed {s} outcome {o}");
            let pf = value(&pf_min_alpha(inst, w).unwrap());
            let ifv = within.then(|| value(&if_min_beta(inst, w).unwrap()));
            let tcs: Vec<(Rational, f64)> =
                gammas().iter().map(|&g| (g, value(&tc_min_alpha(inst, w, g).unwrap()))).collect();

            if passes(&rank_jr_check(inst, w).unwrap()) == Some(true) {
                applied[0] += 1;
                bound(&mut fails, le(pf, 1.0 + sqrt2), format!("{tag}: rank-JR but pf = {pf}"));
                if let Some(v) = ifv {
                    bound(&mut fails, le(v, 2.0), format!("{tag}: rank-JR but if = {v}"));
                }
                for &(g, v) in &tcs {
                    let b = 2.0 * gf(g) / (gf(g) - 1.0);
                    bound(&mut fails, le(v, b), format!("{tag}: rank-JR but tc(γ={g}) = {v}"));
                }
            }

            let pjr = passes(&rank_pjr_check(inst, w, &caps).unwrap()) == Some(true);
            let uprf = passes(&uprf_check(inst, w, &caps).unwrap()) == Some(true);
            if uprf {
                applied[2] += 1;
                bound(&mut fails, le(pf, (3.0 + 17f64.sqrt()) / 2.0), format!("{tag}: UPRF but pf = {pf}"));
                if let Some(v) = ifv {
                    bound(&mut fails, le(v, 3.0), format!("{tag}: UPRF but if = {v}"));
                }
                for &(g, v) in &tcs {
                    let b = 3.0 * gf(g) / (gf(g) - 1.0);
                    bound(&mut fails, le(v, b), format!("{tag}: UPRF but tc(γ={g}) = {v}"));
                }
            }
            if !(pjr || (uprf && within)) {
                continue;
            }
            for &q in &qs {
                let qc = value(&q_core_min_alpha(inst, w, q, None).unwrap());
                let qif = (within && inst.k() <= inst.n() && q <= w.len())
                    .then(|| value(&q_if_min_beta(inst, w, q).unwrap()));
                let qtcs: Vec<(Rational, f64)> = gammas()
                    .iter()
                    .map(|&g| (g, value(&q_tc_min_alpha(inst, w, q, g, Some(2 * q - 1)).unwrap())))
                    .collect();
                if pjr {
                    applied[1] += 1;
                    bound(&mut fails, le(qc, 3.0 + 2.0 * sqrt2), format!("{tag}: rank-PJR but {q}-core = {qc}"));
                    if let Some(v) = qif {
                        bound(&mut fails, le(v, 3.0), format!("{tag}: rank-PJR but {q}-if = {v}"));
                    }
                    for &(g, v) in &qtcs {
                        let b = (3.0 * gf(g) + 1.0) / (gf(g) - 1.0);
                        bound(&mut fails, le(v, b), format!("{tag}: rank-PJR but {q}-tc(γ={g}) = {v}"));
                    }
                }
                if uprf && within {
                    applied[3] += 1;
                    bound(&mut fails, le(qc, (5.0 + 33f64.sqrt()) / 2.0), format!("{tag}: UPRF but {q}-core = {qc}"));
                    for &(g, v) in &qtcs {
                        let b = (5.0 * gf(g) + 1.0) / (gf(g) - 1.0);
                        bound(&mut fails, le(v, b), format!("{tag}: UPRF but {q}-tc(γ={g}) = {v}"));
                    }
                }
            }
        }
    }

    // fair greedy capture on N = C instances
    for s in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + s);
        let n = rng.gen_range(2..=12);
        let k = rng.gen_range(1..=n.min(5));
        let family = if s % 2 == 0 { Family::Euclidean } else { Family::Graph };
        let inst = generate(&GenSpec::new(family, n, k, rng.gen())).unwrap().to_instance().unwrap();
        for q in (1..=3).filter(|&q| q <= k) {
            for seed in 0..20 {
                let w = fair_greedy_capture(&inst, q, Seed(seed)).unwrap().0;
                applied[4] += 1;
                let tag = format!("fgc instance {s} q={q} seed {seed}");
                let qc = value(&q_core_min_alpha(&inst, &w, q, None).unwrap());
                bound(&mut fails, le(qc, 5.0), format!("{tag}: {q}-core = {qc}"));
                if q <= w.len() {
                    let v = value(&q_if_min_beta(&inst, &w, q).unwrap());
                    bound(&mut fails, le(v, 3.0), format!("{tag}: {q}-if = {v}"));
                }
                for g in gammas() {
                    let v = value(&q_tc_min_alpha(&inst, &w, q, g, Some(2 * q - 1)).unwrap());
                    let b = 5.0 * gf(g) / (gf(g) - 1.0);
                    bound(&mut fails, le(v, b), format!("{tag}: {q}-tc(γ={g}) = {v}"));
                }
            }
        }
    }

    // restricted candidates: bounds on the full instance
    for (s, inst) in corpus(500, 12, 12).iter().enumerate().filter(|(_, i)| i.agents_within_candidates() && i.k() <= i.n()) {
        let gc = restricted_solve(inst, RestrictedRule::GreedyCapture).unwrap().0;
        let pf = value(&pf_min_alpha(inst, &gc).unwrap());
        bound(&mut fails, le(pf, 3.0), format!("seed {s}: restricted greedy capture has pf = {pf}"));
        let ea = restricted_solve(inst, RestrictedRule::ExpandingApprovals).unwrap().0;
        let mut ws = vec![ea];
        ws.extend(outcomes(inst, 7 * s as u64).into_iter().skip(2));
        for w in ws {
            let mut pts: Vec<usize> = inst.agents().to_vec();
            pts.extend(w.centers());
            pts.sort_unstable();
            pts.dedup();
            let restricted = inst.with_candidates(CandidateSet::List(pts)).unwrap();
            if passes(&rank_pjr_check(&restricted, &w, &caps).unwrap()) != Some(true) {
                continue;
            }
            applied[5] += 1;
            for q in (1..=3).filter(|&q| q <= inst.k()) {
                let qc = value(&q_core_min_alpha(inst, &w, q, None).unwrap());
                bound(&mut fails, le(qc, 5.0), format!("seed {s}: restricted rank-PJR but {q}-core = {qc}"));
            }
        }
    }
    let elapsed = start.elapsed();
    finish(
        3,
        fails,
        format!(
            "premises held: rank-JR {}, rank-PJR×q {}, UPRF {}, UPRF N⊆C×q {}, fgc {}, restricted rank-PJR {}; {elapsed:?}",
            applied[0], applied[1], applied[2], applied[3], applied[4], applied[5]
        ),
    );
}

#[test]
fn criterion_4_cross_notion() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut checked = 0usize;
    for (s, inst) in corpus(500, 12, 12).iter().enumerate() {
        let within = inst.agents_within_candidates();
        let equal = inst.agents_equal_candidates();
        for (o, w) in outcomes(inst, s as u64).iter().enumerate() {
            checked += 1;
            let tag = format!("seed {s} outcome {o}");
            let pf = value(&pf_min_alpha(inst, w).unwrap());
            if within {
                let ifv = value(&if_min_beta(inst, w).unwrap());
                if !le(ifv, 1.0 + pf) {
                    fails.push(format!("{tag}: if {ifv} > 1 + pf {pf}"));
                }
                if !le(pf, 2.0 * ifv) {
                    fails.push(format!("{tag}: pf {pf} > 2·if {ifv}"));
                }
                if equal && !le(pf, 1.0 + ifv) {
                    fails.push(format!("{tag}: pf {pf} > 1 + if {ifv} with N = C"));
                }
            }
            for g in gammas() {
                let tc = value(&tc_min_alpha(inst, w, g).unwrap());
                let b = gf(g) * (pf + 1.0) / (gf(g) - 1.0);
                if !le(tc, b) {
                    fails.push(format!("{tag}: tc(γ={g}) {tc} > γ(pf+1)/(γ−1) = {b}"));
                }
            }
            if !within {
                continue;
            }
            for q in (1..=3).filter(|&q| q <= inst.k() && q <= w.len()) {
                let qc = value(&q_core_min_alpha(inst, w, q, None).unwrap());
                if inst.k() > inst.n() {
                    continue;
                }
                let qif = value(&q_if_min_beta(inst, w, q).unwrap());
                if !le(qif, 1.0 + 2.0 * qc) {
                    fails.push(format!("{tag}: {q}-if {qif} > 1 + 2·{q}-core {qc}"));
                }
                if !le(qc, 2.0 * qif) {
                    fails.push(format!("{tag}: {q}-core {qc} > 2·{q}-if {qif}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    finish(4, fails, format!("{checked} outcomes in {elapsed:?}"));
}

#[test]
fn criterion_5_tightness() {
    let mut fails = Vec::new();
    let none = AuditParams::default;
    let mut expect = |id: &str, w: &str, notion: Notion, params: AuditParams, ok: &dyn Fn(&AuditReport) -> bool| {
        let f = fx(id);
        let inst = f.instance().unwrap();
        let rep = audit(&inst, &w_of(&f, w), notion, &params).unwrap();
        if !ok(&rep) {
            fails.push(format!("{id} W={{{w}}} {notion} {:?}: got {:?}", params, rep.result));
        }
    };
    let exactly = |v: f64| move |rep: &AuditReport| rep.value().is_some_and(|x| same(x, v));
    expect("fig4a(α=2)", "2,3", Notion::Pf, none(), &exactly(2.0));
    expect("fig4a(α=2)", "2,3", Notion::If, none(), &exactly(3.0));
    expect("fig4b(β=2)", "w1,w2", Notion::If, none(), &exactly(2.0));
    expect("fig4b(β=2)", "w1,w2", Notion::Pf, none(), &exactly(3.0));
    expect("fig4c(β=2)", "w", Notion::If, none(), &exactly(2.0));
    expect("fig4c(β=2)", "w", Notion::Pf, none(), &exactly(4.0));
    let gamma2 = AuditParams { gamma: Some(r(2, 1)), ..Default::default() };
    expect("lb_tc(α=1,γ=2,n=400,k=4)", "c1", Notion::Tc, gamma2, &|rep| {
        rep.value().is_some_and(|v| (v - 3.0).abs() <= 0.05 * 3.0)
    });
    let q = 2;
    for cap in [2 * q, 2 * q + 1] {
        let p = AuditParams { q: Some(q), gamma: Some(r(1, 1)), size_cap: Some(cap), ..Default::default() };
        expect("qtc_blocks(q=2,n=10,k=4)", "a1,b1,b2,b3", Notion::QTc, p, &|rep| rep.value() == Some(f64::INFINITY));
    }
    let pass = |rep: &AuditReport| rep.result == AuditResult::Pass && rep.is_exact();
    expect("qtc_blocks(q=2,n=10,k=4)", "a1,b1,b2,b3", Notion::RankPjr, none(), &pass);
    expect("qtc_blocks(q=2,n=10,k=4)", "a1,b1,b2,b3", Notion::Uprf, none(), &pass);
    expect("qtc_blocks(q=2,n=10,k=4)", "a1,b1,b2,b3", Notion::QIf, AuditParams { q: Some(q), ..Default::default() }, &exactly(1.0));
    finish(5, fails, "fig4a/b/c, lb_tc, qtc_blocks".into());
}

/// Compares a fast report with the oracle result for the same question.
fn agree(fast: propclust::Result<AuditReport>, slow: propclust::Result<oracle::OracleResult>) -> Result<(), String> {
    match (fast, slow) {
        (Ok(f), Ok(o)) => match (&f.result, o.value, o.pass) {
            (AuditResult::Value(a), Some(b), _) if same(*a, b) => Ok(()),
            (AuditResult::Pass, _, Some(true)) | (AuditResult::Violation, _, Some(false)) => Ok(()),
            (res, v, p) => Err(format!("fast {res:?} vs oracle value {v:?} pass {p:?}")),
        },
        (Err(_), Err(_)) => Ok(()),
        (Ok(f), Err(e)) => Err(format!("fast {:?} but oracle error {e}", f.result)),
        (Err(e), Ok(o)) => Err(format!("fast error {e} but oracle {:?}/{:?}", o.value, o.pass)),
    }
}

fn compare_all(inst: &Instance, w: &Outcome, tag: &str, fails: &mut Vec<String>) -> usize {
    let caps = RankCaps::default();
    let mut count = 0;
    let mut cmp = |what: String, res: Result<(), String>| {
        count += 1;
        if let Err(e) = res {
            fails.push(format!("{tag} {what}: {e}"));
        }
    };
    cmp("pf".into(), agree(pf_min_alpha(inst, w), oracle::oracle_pf(inst, w)));
    cmp("if".into(), agree(if_min_beta(inst, w), oracle::oracle_if(inst, w)));
    for g in [r(1, 1), r(3, 2), r(2, 1)] {
        cmp(format!("tc γ={g}"), agree(tc_min_alpha(inst, w, g), oracle::oracle_tc(inst, w, g)));
    }
    for q in (1..=3).filter(|&q| q <= inst.k()) {
        cmp(format!("{q}-core"), agree(q_core_min_alpha(inst, w, q, None), oracle::oracle_qcore(inst, w, q, inst.k())));
        cmp(format!("{q}-if"), agree(q_if_min_beta(inst, w, q), oracle::oracle_qif(inst, w, q)));
        for g in [r(1, 1), r(2, 1)] {
            cmp(
                format!("{q}-tc γ={g}"),
                agree(q_tc_min_alpha(inst, w, q, g, None), oracle::oracle_qtc(inst, w, q, g, inst.k())),
            );
        }
    }
    for axiom in [Notion::RankJr, Notion::RankPjr, Notion::RankPjrPlus, Notion::Dprf, Notion::Uprf] {
        let fast = match axiom {
            Notion::RankJr => rank_jr_check(inst, w),
            Notion::RankPjr => rank_pjr_check(inst, w, &caps),
            Notion::RankPjrPlus => rank_pjr_plus_check(inst, w, &caps),
            Notion::Dprf => dprf_check(inst, w, &caps),
            _ => uprf_check(inst, w, &caps),
        };
        cmp(axiom.to_string(), agree(fast, oracle::oracle_rank(inst, w, axiom)));
    }
    count
}

#[test]
fn criterion_6_oracle_equivalence() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut compared = 0;
    for s in 0..500u64 {
        let inst = corpus_instance(50_000 + s, 8, 8, 5).unwrap();
        for (o, w) in outcomes(&inst, s).iter().enumerate() {
            compared += compare_all(&inst, w, &format!("seed {s} outcome {o}"), &mut fails);
        }
    }
    let stated = [
        ("fig2a", "1,2,3,6,9"),
        ("fig2a(k=4)", "1,2,6,7"),
        ("fig2b", "1,2,3,6,9"),
        ("fig3a", "1,2,3,6"),
        ("fig3b", "1,2,3,9"),
        ("fig4a(2)", "2,3"),
        ("fig4b(2)", "w1,w2"),
        ("fig4c(2)", "w"),
        ("path_uprf", "c"),
        ("qtc_blocks(2,10,4)", "a1,b1,b2,b3"),
    ];
    for (id, w) in stated {
        let f = fx(id);
        compared += compare_all(&f.instance().unwrap(), &w_of(&f, w), id, &mut fails);
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(600) {
        fails.push(format!("took {elapsed:?} > 10 min"));
    }
    finish(6, fails, format!("{compared} comparisons in {elapsed:?}"));
}

fn run_everything(insts: &[Instance]) -> Vec<String> {
    let mut out = Vec::new();
    for (s, inst) in insts.iter().enumerate() {
        let runs = [
            greedy_capture(inst),
            expanding_approvals(inst),
            fair_greedy_capture(inst, 1, Seed(s as u64)),
            fair_greedy_capture(inst, inst.k().min(2), Seed(99)),
        ];
        for run in runs {
            match run {
                Ok((w, trace)) => out.push(OutcomeFile::new(&w, Some(trace)).to_json()),
                Err(e) => out.push(format!("error: {e}")),
            }
        }
        let w = greedy_capture(inst).unwrap().0;
        for notion in Notion::ALL {
            let params = AuditParams { q: Some(inst.k().min(2)), gamma: Some(r(3, 2)), ..Default::default() };
            match audit(inst, &w, notion, &params) {
                Ok(rep) => out.push(serde_json::to_string(&rep).unwrap()),
                Err(e) => out.push(format!("error: {e}")),
            }
        }
    }
    out
}

#[test]
fn criterion_7_determinism() {
    let insts: Vec<Instance> = (0..40u64)
        .map(|s| {
            let n = 4 + (s as usize % 9);
            let family = if s % 2 == 0 { Family::Euclidean } else { Family::Graph };
            let spec = GenSpec { family, n, k: 1 + (s as usize % 5).min(n - 1), mode: CandidateMode::Agents, extra: 0, seed: s };
            generate(&spec).unwrap().to_instance().unwrap()
        })
        .chain((0..40).map(|s| corpus_instance(s, 10, 10, 5).unwrap()))
        .collect();
    let first = run_everything(&insts);
    let second = run_everything(&insts);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run_everything(&insts));
    let wide = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap().install(|| run_everything(&insts));
    let mut fails = Vec::new();
    for (name, other) in [("second run", &second), ("1 thread", &single), ("8 threads", &wide)] {
        if let Some(i) = (0..first.len()).find(|&i| first[i] != other[i]) {
            fails.push(format!("{name} differs at artifact {i}"));
        }
        if first.len() != other.len() {
            fails.push(format!("{name} produced {} artifacts, expected {}", other.len(), first.len()));
        }
    }
    finish(7, fails, format!("{} artifacts compared byte-for-byte across 4 runs", first.len()));
}
