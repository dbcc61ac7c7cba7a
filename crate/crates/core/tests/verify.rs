use blockscope::verify::catalog::{run_catalog, Catalog, Status};
use blockscope::verify::{analyze_recipe, CaseLabel, Options, QOrderReading};
use blockscope::{preset, Limits};
use proptest::prelude::*;

fn analyze(name: &str, opts: &Options) -> blockscope::verify::GroupReport {
    analyze_recipe(name, &preset(name).unwrap(), 2, opts).unwrap()
}

#[test]
fn shipped_catalog_passes() {
    let rep = run_catalog(&Catalog::shipped(), None, &Options::default());
    for e in &rep.entries {
        assert_eq!(e.status, Status::Pass, "{}: {:?} {:?}", e.name, e.error, e.expectations);
    }
    assert_eq!(rep.exit_code(), 0);
    assert!(rep.entries.len() >= 15);
}

#[test]
fn empty_catalog_is_a_pass() {
    let rep = run_catalog(&Catalog::parse(r#"{"entries": []}"#).unwrap(), None, &Options::default());
    assert!(rep.entries.is_empty());
    assert_eq!(rep.exit_code(), 0);
}

#[test]
fn capped_entry_is_errored_and_others_still_run() {
    let cat = Catalog::parse(
        r#"{"entries": [
            {"name": "big", "recipe": {"kind": "symmetric", "n": 9}},
            {"name": "a4", "recipe": "a4", "expected_case": "P_equals_Q"}
        ]}"#,
    )
    .unwrap();
    let opts = Options {
        limits: Limits {
            max_enumerated_order: 10_000,
            ..Limits::default()
        },
        ..Options::default()
    };
    let rep = run_catalog(&cat, None, &opts);
    assert_eq!(rep.entry("big").unwrap().status, Status::Errored);
    assert!(!rep.entry("big").unwrap().internal_error);
    assert_eq!(rep.entry("a4").unwrap().status, Status::Pass);
    assert_eq!(rep.exit_code(), 1);
}

#[test]
fn wrong_expectation_fails_the_entry() {
    let cat = Catalog::parse(r#"{"entries": [{"name": "s4", "recipe": "s4", "expected": {"l_b": 3}}]}"#).unwrap();
    let rep = run_catalog(&cat, None, &Options::default());
    assert_eq!(rep.entries[0].status, Status::Fail);
    assert_eq!(rep.exit_code(), 1);
}

#[test]
fn filter_selects_by_expected_case() {
    let rep = run_catalog(&Catalog::shipped(), Some(CaseLabel::CaseI), &Options::default());
    let names: Vec<&str> = rep.entries.iter().map(|e| e.name.as_str()).collect();
    assert_eq!(names, ["q4z3xz2", "a4xz2"]);
}

#[test]
fn strict_reading_moves_order_sixteen_out_of_scope() {
    let strict = Options {
        q_reading: QOrderReading::LessThan16,
        ..Options::default()
    };
    assert_eq!(analyze("q4s3", &Options::default()).case_label, Some(CaseLabel::CaseII));
    assert_eq!(analyze("q4s3", &strict).case_label, Some(CaseLabel::OutOfScopeQTooLarge));
    assert_eq!(analyze("s4", &strict).case_label, Some(CaseLabel::CaseII));
}

#[test]
fn lower_defect_multiplicities_sum_to_l_on_catalog() {
    let rep = run_catalog(&Catalog::shipped(), None, &Options::default());
    for e in &rep.entries {
        let r = e.report.as_ref().unwrap();
        for b in &r.blocks {
            let rows = b.lower_defect.as_ref().unwrap();
            assert_eq!(rows.iter().map(|x| x.multiplicity).sum::<usize>(), b.l, "{} block {}", e.name, b.index);
        }
    }
}

#[test]
fn weights_match_l_on_in_scope_entries() {
    let rep = run_catalog(&Catalog::shipped(), None, &Options::default());
    let mut n = 0;
    for e in &rep.entries {
        let r = e.report.as_ref().unwrap();
        if r.case_label.is_some_and(CaseLabel::in_scope) {
            assert_eq!(r.principal().weights, Some(r.principal().l), "{}", e.name);
            n += 1;
        }
    }
    assert!(n >= 8);
}

#[test]
fn reports_serialize_deterministically() {
    for name in ["q4s3", "s5", "a4xz2"] {
        let a = serde_json::to_string(&analyze(name, &Options::default())).unwrap();
        let b = serde_json::to_string(&analyze(name, &Options::default())).unwrap();
        assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn verdicts_are_seed_independent(seed in any::<u64>()) {
        for name in ["s4", "a4", "q4z3xz2", "q4z6"] {
            let base = analyze(name, &Options::default());
            let other = analyze(name, &Options { seed, ..Options::default() });
            prop_assert_eq!(base.case_label, other.case_label);
            prop_assert_eq!(base.pass, other.pass);
            prop_assert_eq!(
                base.blocks.iter().map(|b| (b.k, b.l, b.defect)).collect::<Vec<_>>(),
                other.blocks.iter().map(|b| (b.k, b.l, b.defect)).collect::<Vec<_>>()
            );
        }
    }
}
