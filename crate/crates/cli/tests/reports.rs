use std::collections::BTreeMap;

use proptest::prelude::*;
use toeplab::report::{Bound, ExperimentReport, Metric, Status, SCHEMA_VERSION};
use toeplab::{run_experiment, RunConfig};
use toeplab_core::GridConfig;

fn bound() -> impl Strategy<Value = Bound> {
    prop_oneof![
        (-1e6..1e6f64).prop_map(Bound::AtMost),
        (-1e6..1e6f64).prop_map(Bound::AtLeast),
        (-1e6..1e6f64, 0.0..1.0f64).prop_map(|(t, e)| Bound::Near(t, e)),
        Just(Bound::Info),
    ]
}

fn report() -> impl Strategy<Value = ExperimentReport> {
    (
        "[a-z_]{1,12}",
        prop::collection::btree_map("[a-z0-9_]{1,8}", (prop::num::f64::NORMAL | prop::num::f64::ZERO, bound()), 0..6),
        prop::collection::btree_map("[a-z]{1,6}", prop::collection::vec((any::<f64>(), any::<f64>()), 0..5), 0..3),
        prop::collection::vec(".{0,20}", 0..3),
        any::<u64>(),
        0.0..100.0f64,
    )
        .prop_map(|(id, metrics, artifacts, notes, seed, wall_time)| {
            let metrics: BTreeMap<String, Metric> =
                metrics.into_iter().map(|(k, (v, b))| (k, Metric::new(v, b))).collect();
            let artifacts = artifacts
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().filter(|(a, b)| a.is_finite() && b.is_finite()).map(|(a, b)| [a, b]).collect()))
                .collect();
            let status = if metrics.values().all(|m| m.passed) { Status::Pass } else { Status::Fail };
            ExperimentReport {
                schema_version: SCHEMA_VERSION,
                experiment_id: id,
                status,
                metrics,
                artifacts,
                notes,
                config: GridConfig::default(),
                seed,
                wall_time,
            }
        })
}

proptest! {
    #[test]
    fn reports_round_trip_through_json(r in report()) {
        let back = ExperimentReport::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(back, r);
    }
}

#[test]
fn runs_are_deterministic_for_a_fixed_seed() {
    for id in ["blaschke_kernel_dimensions", "crofoot_isometry_blaschke", "outer_maximal_construction"] {
        let rc = RunConfig { seed: 17, ..RunConfig::default() };
        let a = run_experiment(id, &rc).unwrap();
        let b = run_experiment(id, &rc).unwrap();
        let strip = |r: &ExperimentReport| {
            r.metrics.iter().filter(|(k, _)| !k.contains("seconds")).map(|(k, m)| (k.clone(), m.value)).collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b), "{id}");
        assert_eq!(a.artifacts, b.artifacts);
        assert_eq!(a.seed, 17);
    }
}

#[test]
fn status_follows_metrics() {
    let r = run_experiment("dim_K_zn", &RunConfig::default().with_param("n", 7)).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert!(r.metrics.values().all(|m| m.passed));
}
