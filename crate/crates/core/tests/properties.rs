use proptest::prelude::*;

use propclust::audit::{
    pf_min_alpha, q_core_min_alpha, rank_jr_check, rank_pjr_check, reevaluate_deviation, tc_min_alpha, uprf_check,
    AuditReport, RankCaps, Witness,
};
use propclust::fixtures::repro_all;
use propclust::generate::corpus_instance;
use propclust::io::{InstanceFile, OutcomeFile};
use propclust::{expanding_approvals, greedy_capture, Instance, Outcome, Rational};

fn close(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= 1e-9 * a.abs().max(1.0)
}

/// A reported value above 1 must come with a witness that re-evaluates to it.
fn witness_sound(inst: &Instance, w: &Outcome, rep: &AuditReport, q: usize, sums: bool) -> bool {
    let v = rep.value().unwrap();
    match &rep.witness {
        Some(Witness::Deviation { agents, candidates, .. }) => {
            close(reevaluate_deviation(inst, w, agents, candidates, q, sums), v)
        }
        None => v == 1.0,
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witnesses_reevaluate(seed in 0u64..100_000) {
        let inst = corpus_instance(seed, 10, 10, 4).unwrap();
        for w in [greedy_capture(&inst).unwrap().0, Outcome::external(inst.candidates()[..1].to_vec())] {
            prop_assert!(witness_sound(&inst, &w, &pf_min_alpha(&inst, &w).unwrap(), 1, false));
            prop_assert!(witness_sound(&inst, &w, &tc_min_alpha(&inst, &w, Rational::new(2, 1)).unwrap(), 1, true));
            let q = inst.k().min(2);
            prop_assert!(witness_sound(&inst, &w, &q_core_min_alpha(&inst, &w, q, None).unwrap(), q, false));
        }
    }

    #[test]
    fn rank_violations_recheck(seed in 0u64..100_000) {
        let inst = corpus_instance(seed, 10, 10, 4).unwrap();
        let w = Outcome::external(inst.candidates()[..1].to_vec());
        let caps = RankCaps::default();
        for rep in [rank_jr_check(&inst, &w).unwrap(), rank_pjr_check(&inst, &w, &caps).unwrap(), uprf_check(&inst, &w, &caps).unwrap()] {
            if let Some(v) = rep.rank_violation() {
                prop_assert!(v.recheck(&inst, &w));
            }
        }
    }

    #[test]
    fn rules_open_at_most_k_candidates(seed in 0u64..100_000) {
        let inst = corpus_instance(seed, 12, 12, 5).unwrap();
        for w in [greedy_capture(&inst).unwrap().0, expanding_approvals(&inst).unwrap().0] {
            prop_assert!(w.len() <= inst.k());
            prop_assert!(w.centers().iter().all(|&c| inst.is_candidate(c)));
            let back = OutcomeFile::parse(&OutcomeFile::new(&w, None).to_json()).unwrap().outcome();
            prop_assert_eq!(back.centers(), w.centers());
        }
    }

    #[test]
    fn instance_json_round_trips(seed in 0u64..100_000) {
        let inst = corpus_instance(seed, 10, 10, 4).unwrap();
        let json = InstanceFile::from_instance(&inst).to_json();
        let again = InstanceFile::parse(&json).unwrap().to_instance().unwrap();
        prop_assert_eq!(InstanceFile::from_instance(&again).to_json(), json);
    }
}

#[test]
fn every_repro_row_matches() {
    let rows = repro_all().unwrap();
    assert!(rows.len() > 40);
    for row in rows {
        assert!(row.matched, "{} {} {}: expected {}, computed {}", row.fixture, row.notion, row.params, row.expected, row.computed);
    }
}
