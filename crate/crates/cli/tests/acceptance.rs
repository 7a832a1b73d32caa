//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use toeplab::{run_experiment, ExperimentReport, RunConfig, Status};
use toeplab_core::GridConfig;

struct Run {
    id: &'static str,
    config: RunConfig,
    /// Metrics echoed on the summary line.
    show: &'static [&'static str],
}

fn run(id: &'static str, show: &'static [&'static str]) -> Run {
    Run { id, config: RunConfig::default(), show }
}

struct Criterion {
    number: u32,
    title: &'static str,
    runs: Vec<Run>,
    /// Extra bound on a metric of one of the runs: (run index, metric, maximum).
    extra: Option<(usize, &'static str, f64)>,
}

fn criteria() -> Vec<Criterion> {
    let refined = RunConfig {
        grid: GridConfig { grid_size: 1 << 18, truncation: 1 << 14, ..GridConfig::default() },
        ..RunConfig::default()
    };
    vec![
        Criterion {
            number: 1,
            title: "Gram constant a = (1+2i)/5",
            runs: vec![run("kernel_z_7_2", &["a_error", "a_conj_error", "runtime_seconds"])],
            extra: None,
        },
        Criterion {
            number: 2,
            title: "half-integer family",
            runs: vec![run("half_integer_family", &["n9_dimension", "n9_basis_residual", "n9_non_membership"])],
            extra: None,
        },
        Criterion {
            number: 3,
            title: "half-circle sign has trivial kernel",
            runs: vec![run("pm_one_symbol", &["dimension_64", "dimension_128", "gap_128"])],
            extra: None,
        },
        Criterion {
            number: 4,
            title: "model-space dimensions",
            runs: vec![run("blaschke_kernel_dimensions", &["mismatches", "uncertain", "max_seconds_per_run"])],
            extra: None,
        },
        Criterion {
            number: 5,
            title: "conjugation suite",
            runs: vec![run("conjugation_suite", &["K_z5_involution", "K_B_pairing", "K_Ez_image_error"])],
            extra: None,
        },
        Criterion {
            number: 6,
            title: "maximal-function equivalence",
            runs: vec![run("maximal_equivalence", &["route_agreement", "expected_verdicts"])],
            extra: None,
        },
        Criterion {
            number: 7,
            title: "Crofoot isometry",
            runs: vec![
                run("crofoot_isometry_E", &["lambda_0_isometry_defect", "lambda_1_isometry_defect"]),
                run("crofoot_isometry_blaschke", &["lambda_1_isometry_defect", "lambda_1_sampled_isometry_defect"]),
            ],
            extra: None,
        },
        Criterion {
            number: 8,
            title: "eigenfunction goldens in K_{z^5}",
            runs: vec![run(
                "eigenfunction_K_z5",
                &["one_minus_z_4_eigen_residual", "z_minus_z3_eigen_residual", "z_no_eigenvalue"],
            )],
            extra: None,
        },
        Criterion {
            number: 9,
            title: "outer maximal construction",
            runs: vec![run("outer_maximal_construction", &["outer", "maximal", "max_eigen_error"])],
            extra: None,
        },
        Criterion {
            number: 10,
            title: "Wiener-Hopf reconstruction",
            runs: vec![run("wiener_hopf_blaschke", &["max_reconstruction_error", "max_basis_residual"])],
            extra: None,
        },
        Criterion {
            number: 11,
            title: "rigidity probes",
            runs: vec![run("rigidity_probes", &["two_plus_z_gap", "one_plus_z_dimension", "reproducing_kernel_gap"])],
            extra: None,
        },
        Criterion {
            number: 12,
            title: "near backward-shift invariance",
            runs: vec![
                run("near_invariance", &["max_residual", "bases_checked"]),
                Run { id: "near_invariance", config: refined, show: &["branch_tier_max_residual"] },
            ],
            extra: Some((1, "branch_tier_max_residual", 1e-6)),
        },
    ]
}

fn summary(r: &ExperimentReport, show: &[&str]) -> String {
    let values: Vec<String> =
        show.iter().map(|m| format!("{m}={:.3e}", r.metric(m).unwrap_or(f64::NAN))).collect();
    let grid = if r.config == GridConfig::default() { String::new() } else { format!("@M={} ", r.config.grid_size) };
    format!("{}{} {:?} [{}]", grid, r.experiment_id, r.status, values.join(", "))
}

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let mut ok = true;
        let mut parts = Vec::new();
        let mut reports = Vec::new();
        for r in &c.runs {
            match run_experiment(r.id, &r.config) {
                Ok(rep) => {
                    ok &= rep.status == Status::Pass;
                    if rep.status != Status::Pass {
                        parts.push(format!("failed: {}", rep.failed_metrics().join(", ")));
                    }
                    parts.push(summary(&rep, r.show));
                    reports.push(Some(rep));
                }
                Err(e) => {
                    ok = false;
                    parts.push(format!("{}: error {e}", r.id));
                    reports.push(None);
                }
            }
        }
        if let Some((i, metric, max)) = c.extra {
            let v = reports[i].as_ref().and_then(|r| r.metric(metric)).unwrap_or(f64::NAN);
            let within = v <= max;
            ok &= within;
            parts.push(format!("{metric} {v:.3e} <= {max:.0e}: {within}"));
        }
        let mark = if ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {mark} {} ({:.2}s): {}",
            c.number,
            c.title,
            start.elapsed().as_secs_f64(),
            parts.join("; ")
        );
        if !ok {
            failed.push(c.number);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
