use std::time::Instant;

use rand::Rng;
use toeplab_core::boundary_core::{BoundaryFunction, HardyFunction, ONE};
use toeplab_core::hayashi::{halfinteger_symbol_kernel, half_integer_symbol, HalfIntegerKernel};
use toeplab_core::inner_functions::{fbp_wiener_hopf, make_inner, InnerSpec};
use toeplab_core::toeplitz_engine::{
    kernel_inclusion_probe, near_invariance_residuals, residual_in_kernel, Inclusion, ToeplitzSymbol, DEFAULT_SECTION,
};

use super::{kernel_at, max_of, RunConfig};
use crate::error::CliError;
use crate::report::ReportBuilder;
use crate::sampling;

pub fn dim_k_zn(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let n = rc.param_usize("n", 5)?;
    if n == 0 || n > DEFAULT_SECTION / 2 {
        return Err(CliError::ConfigInvalid(format!("n must lie in 1..={}", DEFAULT_SECTION / 2)));
    }
    let (k, certain) = kernel_at(&ToeplitzSymbol::monomial(rc.grid, -(n as i64)), DEFAULT_SECTION)?;
    b.near("dimension", k.dimension as f64, n as f64, 0.0);
    b.check("certain", certain);
    b.info("gap", k.gap);
    b.at_most("max_residual", k.max_residual(), rc.grid.tol_residual);
    Ok(())
}

/// Zeros of modulus at most this in the random Blaschke products.
const ZERO_RADIUS: f64 = 0.85;

pub fn blaschke_kernel_dimensions(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let mut rng = rc.rng();
    let mut mismatches = 0usize;
    let mut uncertain = 0usize;
    let mut worst_time: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    let mut counts = Vec::new();
    for _ in 0..20 {
        let spec = sampling::blaschke(&mut rng, 6, ZERO_RADIUS);
        let start = Instant::now();
        let theta = make_inner(spec.clone(), cfg)?;
        let (k, certain) = kernel_at(&ToeplitzSymbol::conj_inner(&theta), DEFAULT_SECTION)?;
        worst_time = worst_time.max(start.elapsed().as_secs_f64());
        if k.dimension != spec.zero_count() {
            mismatches += 1;
        }
        if !certain {
            uncertain += 1;
        }
        worst_residual = worst_residual.max(k.max_residual());
        counts.push(toeplab_core::Complex64::new(spec.zero_count() as f64, k.dimension as f64));
    }
    b.near("mismatches", mismatches as f64, 0.0, 0.0);
    b.near("uncertain", uncertain as f64, 0.0, 0.0);
    b.at_most("max_seconds_per_run", worst_time, 2.0);
    b.at_most("max_residual", worst_residual, cfg.tol_residual);
    b.artifact("zero_count_vs_dimension", &counts);
    Ok(())
}

pub fn wiener_hopf_blaschke(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let mut rng = rc.rng();
    let mut worst_rebuild: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    for _ in 0..50 {
        let theta = make_inner(sampling::blaschke(&mut rng, 6, 0.9), cfg)?;
        let wh = fbp_wiener_hopf(&theta)?;
        worst_rebuild = worst_rebuild.max(wh.reconstruction_error);
        let g = ToeplitzSymbol::conj_inner(&theta);
        for v in wh.model_space_basis() {
            worst_residual = worst_residual.max(residual_in_kernel(&g, &v)?);
        }
    }
    b.at_most("max_reconstruction_error", worst_rebuild, 1e-9);
    b.at_most("max_basis_residual", worst_residual, 1e-7);
    Ok(())
}

/// Acceptance level for the backward-shift residuals.
pub const NEAR_INVARIANCE_TOL: f64 = 1e-6;

pub fn near_invariance(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let mut rng = rc.rng();
    let mut symbols: Vec<(String, ToeplitzSymbol)> = Vec::new();
    for n in 1..=6 {
        symbols.push((format!("conj_z{n}"), ToeplitzSymbol::monomial(cfg, -n)));
    }
    for i in 0..5 {
        let theta = make_inner(sampling::blaschke(&mut rng, 5, 0.8), cfg)?;
        symbols.push((format!("conj_blaschke{i}"), ToeplitzSymbol::conj_inner(&theta)));
    }
    let theta = make_inner(sampling::blaschke_exact(&mut rng, 2, 0.7).times(&InnerSpec::monomial(2)), cfg)?;
    symbols.push(("conj_z2_blaschke".into(), ToeplitzSymbol::conj_inner(&theta)));
    let o = BoundaryFunction::from_fn(cfg, |z| 2.0 + z);
    let zb = BoundaryFunction::monomial(cfg, -1);
    symbols.push(("rigid_2_plus_z".into(), ToeplitzSymbol::new(&zb * &(&o.conj() / &o))));
    symbols.push((
        "z_minus_one_conj_z3".into(),
        ToeplitzSymbol::new(BoundaryFunction::from_fn(cfg, |z| (z - ONE) * z.conj().powi(3))),
    ));
    symbols.push(("half_circle_sign".into(), ToeplitzSymbol::half_circle_sign(cfg)));

    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    let mut excluded = Vec::new();
    for (name, g) in &symbols {
        let (k, certain) = kernel_at(g, 64)?;
        if !(certain && k.verified) {
            excluded.push(name.clone());
            continue;
        }
        let r = max_of(near_invariance_residuals(g, &k.vectors)?);
        b.info(format!("{name}_residual"), r);
        worst = worst.max(r);
        checked += 1;
    }
    b.at_most("max_residual", worst, NEAR_INVARIANCE_TOL);
    b.near("bases_checked", checked as f64, symbols.len() as f64, 0.0);
    for name in excluded {
        b.note(format!("{name}: kernel basis not verified, excluded"));
    }

    // Structured bases of the branch-cut family sit on a sampled residual
    // floor of about 6e-5, so they are reported at their own tier.
    let mut branch: f64 = 0.0;
    for n in [3i64, 5, 7, 9] {
        if let HalfIntegerKernel::Finite { rep, .. } = halfinteger_symbol_kernel(n, cfg)? {
            let r = max_of(near_invariance_residuals(&half_integer_symbol(cfg, n), &rep.basis)?);
            branch = branch.max(r);
        }
    }
    b.info("branch_tier_max_residual", branch);
    b.note(format!(
        "structured (1+z)^(1/2) z^j bases: max backward-shift residual {branch:.2e} at the branch tier ({:.0e}), not part of max_residual",
        cfg.tol_branch
    ));
    Ok(())
}

pub fn kernel_inclusion_examples(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let z2 = ToeplitzSymbol::monomial(cfg, -2);
    let z3 = ToeplitzSymbol::monomial(cfg, -3);
    let size = 64;
    let verdict = |h: &ToeplitzSymbol, g: &ToeplitzSymbol| kernel_inclusion_probe(h, g, size).map(|r| r.verdict);
    b.check("z2_in_z3", verdict(&z2, &z3)? == Inclusion::Included);
    b.check("z3_not_in_z2", verdict(&z3, &z2)? == Inclusion::NotIncluded);
    let shifted = ToeplitzSymbol::new(BoundaryFunction::from_fn(cfg, |z| (z - ONE) * z.conj().powi(3)));
    let plain = ToeplitzSymbol::new(BoundaryFunction::from_fn(cfg, |z| z * z.conj().powi(3)));
    b.check("shifted_in_plain", verdict(&shifted, &plain)? == Inclusion::Included);
    b.check("plain_in_shifted", verdict(&plain, &shifted)? == Inclusion::Included);
    Ok(())
}

pub fn multiplier_criterion(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let mut rng = rc.rng();
    let mut worst: f64 = 0.0;
    let mut empty = 0usize;
    for _ in 0..20 {
        let p = sampling::disk_point(&mut rng, 0.7);
        let q = sampling::disk_point(&mut rng, 0.7);
        let d = sampling::disk_point(&mut rng, 0.7);
        let w = HardyFunction::from_fn(cfg, |z| (ONE - p * z) * (ONE - q * z) / (ONE - d * z));
        let mut spec = sampling::blaschke(&mut rng, 4, 0.8);
        spec.power = rng.random_range(0..3);
        let h = ToeplitzSymbol::conj_inner(&make_inner(spec, cfg)?);
        let (k, _) = kernel_at(&h, DEFAULT_SECTION)?;
        if k.vectors.is_empty() {
            empty += 1;
        }
        let wb = w.boundary();
        let g = ToeplitzSymbol::new(&h.boundary * &(&wb.conj() / wb));
        for v in &k.vectors {
            worst = worst.max(residual_in_kernel(&g, &(wb * v.boundary()))?);
        }
    }
    b.at_most("max_residual", worst, cfg.tol_residual);
    b.near("empty_kernels", empty as f64, 0.0, 0.0);
    b.info("pairs", 20.0);
    Ok(())
}
