use std::time::Instant;

use toeplab_core::boundary_core::{BoundaryFunction, HardyFunction, ONE};
use toeplab_core::hayashi::{
    halfinteger_symbol_kernel, half_integer_symbol, herglotz_parameters, isometric_multiplier_finite,
    piecewise_jump_exponents, HalfIntegerKernel,
};
use toeplab_core::toeplitz_engine::{ToeplitzSymbol, DEFAULT_SECTION};

use super::{c, kernel_at, RunConfig};
use crate::error::CliError;
use crate::report::ReportBuilder;

pub fn kernel_z_7_2(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let start = Instant::now();
    let cfg = rc.grid;
    let rep = match halfinteger_symbol_kernel(7, cfg)? {
        HalfIntegerKernel::Finite { rep, .. } => rep,
        HalfIntegerKernel::Trivial { .. } => return Err(CliError::Computation("expected a finite kernel".into())),
    };
    let iso = isometric_multiplier_finite(&rep)?;
    let a = c(0.2, 0.4);
    let params = iso.factor_parameters.clone().unwrap_or_default();
    let dist = |t: toeplab_core::Complex64| params.iter().map(|p| (p - t).norm()).fold(f64::INFINITY, f64::min);
    b.at_most("a_error", dist(a), 1e-6);
    b.at_most("a_conj_error", dist(a.conj()), 1e-6);
    b.near("dimension", rep.degree_n as f64, 3.0, 0.0);
    b.at_most("basis_residual", rep.max_residual(), cfg.tol_branch);
    b.at_most("isometry_defect", iso.isometry_defect, cfg.tol_branch);
    b.at_most("alpha_defect", iso.alpha_defect, cfg.tol_residual);
    b.near("u_norm", iso.u.norm(), 1.0, cfg.tol_residual);
    let u0 = iso.u.at_origin();
    b.check("u_at_origin_positive", u0.re > 0.0 && u0.im.abs() <= 1e-12);
    b.info("gram_condition", iso.gram_condition);
    b.artifact("polynomial_factor", &iso.polynomial_factor);
    b.artifact("factor_parameters", &params);
    b.artifact("alpha_zeros", &iso.alpha_zeros.clone().unwrap_or_default());
    b.at_most("runtime_seconds", start.elapsed().as_secs_f64(), 5.0);
    Ok(())
}

pub fn half_integer_family(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    for n in [1i64, 3, 5, 7, 9] {
        let expected = ((n - 1) / 2) as f64;
        let (k, certain) = kernel_at(&half_integer_symbol(cfg, n), DEFAULT_SECTION)?;
        b.near(format!("n{n}_dimension"), k.dimension as f64, expected, 0.0);
        b.check(format!("n{n}_certain"), certain);
        b.info(format!("n{n}_gap"), k.gap);
        b.info(format!("n{n}_numerical_basis_residual"), k.max_residual());
        match halfinteger_symbol_kernel(n, cfg)? {
            HalfIntegerKernel::Trivial { residual, .. } => {
                b.at_least(format!("n{n}_non_membership"), residual, 1e-2);
            }
            HalfIntegerKernel::Finite { rep, non_membership_residual } => {
                b.at_most(format!("n{n}_basis_residual"), rep.max_residual(), 1e-4);
                b.at_least(format!("n{n}_non_membership"), non_membership_residual, 1e-2);
            }
        }
    }
    b.note("numerical_basis_residual is the finite-section null vector residual; membership is certified by the structured basis (1+z)^{1/2} z^j");
    Ok(())
}

pub fn pm_one_symbol(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let g = ToeplitzSymbol::half_circle_sign(rc.grid);
    for size in [64usize, 128] {
        let (k, certain) = kernel_at(&g, size)?;
        b.near(format!("dimension_{size}"), k.dimension as f64, 0.0, 0.0);
        b.check(format!("certain_{size}"), certain);
        b.info(format!("gap_{size}"), k.gap);
        b.info(format!("smallest_singular_ratio_{size}"), k.singular_values[0] / k.singular_values.last().copied().unwrap_or(1.0));
    }
    let jumps = piecewise_jump_exponents(&g)?;
    b.near("jump_count", jumps.jumps.len() as f64, 2.0, 0.0);
    for (i, j) in jumps.jumps.iter().enumerate() {
        b.near(format!("jump{i}_exponent_re"), j.exponent.re, -0.5, 1e-9);
        b.near(format!("jump{i}_exponent_im"), j.exponent.im, 0.0, 1e-9);
    }
    b.check("not_regular2", !jumps.regular2);
    Ok(())
}

pub fn jump_exponents(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let sign = piecewise_jump_exponents(&ToeplitzSymbol::half_circle_sign(cfg))?;
    b.check("sign_not_regular2", !sign.regular2);
    for (i, j) in sign.jumps.iter().enumerate() {
        b.near(format!("sign_jump{i}_exponent_re"), j.exponent.re, -0.5, 1e-9);
    }
    let root = piecewise_jump_exponents(&ToeplitzSymbol::half_power(cfg, 1, -1))?;
    b.near("root_jump_count", root.jumps.len() as f64, 1.0, 0.0);
    b.near("root_exponent_re", root.jumps[0].exponent.re, -0.5, 1e-9);
    b.check("root_not_regular2", !root.regular2);
    let smooth = BoundaryFunction::from_fn(cfg, |z| (2.0 + z) / (2.0 + z.conj()));
    let smooth = piecewise_jump_exponents(&ToeplitzSymbol::new(smooth))?;
    b.near("continuous_jump_count", smooth.jumps.len() as f64, 0.0, 0.0);
    b.check("continuous_regular2", smooth.regular2);
    Ok(())
}

pub fn herglotz_linear(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let s = std::f64::consts::SQRT_2;
    let u = HardyFunction::from_fn(cfg, |z| (ONE + z) / s);
    let alpha = BoundaryFunction::monomial(cfg, 1);
    let h = herglotz_parameters(&u, &alpha)?;
    let f_want = BoundaryFunction::from_fn(cfg, |z| ONE + z);
    let b_want = BoundaryFunction::from_fn(cfg, |z| z / (2.0 + z));
    let a_want = BoundaryFunction::from_fn(cfg, |z| (ONE + z) * s / (2.0 + z));
    let tol = cfg.tol_residual;
    b.at_most("herglotz_error", h.herglotz.max_distance(&f_want), tol);
    b.at_most("b_error", h.b.max_distance(&b_want), tol);
    b.at_most("a_error", h.a.max_distance(&a_want), tol);
    b.at_most("b_sup", h.b_sup, 1.0 + tol);
    b.near("herglotz_at_origin", h.herglotz.at_origin().re, 1.0, tol);
    let ua_want = a_want.zip(&b_want.zip(&alpha, |bv, av| bv * av), |av, abv| av / (ONE - abv));
    b.at_most("u_alpha_error", h.u_alpha.max_distance(&ua_want), tol);
    Ok(())
}
