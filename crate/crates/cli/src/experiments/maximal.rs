use std::f64::consts::PI;

use num_complex::Complex64;
use toeplab_core::boundary_core::{outer_test, BoundaryFunction, HardyFunction, OuterVerdict, ONE, ZERO};
use toeplab_core::conjugation_lab::{conjugate_in_kernel, ConjugationContext};
use toeplab_core::factorization::{
    inner_outer, maximal_factorisation, maximal_test, maximal_test_by_zero_count, modified_factorisation,
    square_rigidity_probe, Rigidity,
};
use toeplab_core::inner_functions::{make_inner, model_kernels, InnerFunction, InnerSpec};
use toeplab_core::toeplitz_engine::{residual_in_kernel, ToeplitzSymbol, DEFAULT_SECTION};
use toeplab_core::GridConfig;

use super::{c, flag, RunConfig};
use crate::error::CliError;
use crate::report::ReportBuilder;

pub struct Instance {
    pub name: &'static str,
    pub symbol: ToeplitzSymbol,
    pub function: HardyFunction,
    pub maximal: bool,
}

fn blaschke(cfg: GridConfig, zeros: &[Complex64]) -> Result<InnerFunction, CliError> {
    Ok(make_inner(InnerSpec::blaschke(zeros), cfg)?)
}

fn real_poly(cfg: GridConfig, coeffs: &[f64]) -> HardyFunction {
    let v: Vec<Complex64> = coeffs.iter().map(|&x| c(x, 0.0)).collect();
    HardyFunction::polynomial(cfg, &v)
}

/// `z̄·conj(O)/O`, whose kernel is spanned by `O` when `O^{±1}` is bounded.
fn rigid_symbol(o: &BoundaryFunction) -> ToeplitzSymbol {
    let zb = BoundaryFunction::monomial(*o.config(), -1);
    ToeplitzSymbol::new((&zb * &(&o.conj() / o)).map(|v| v / v.norm()))
}

/// Registered maximal and non-maximal kernel elements.
pub fn maximal_instances(cfg: GridConfig) -> Result<Vec<Instance>, CliError> {
    let z5 = ToeplitzSymbol::monomial(cfg, -5);
    let t1 = blaschke(cfg, &[c(0.5, 0.0)])?;
    let t2 = blaschke(cfg, &[c(0.0, 0.4), c(-0.5, 0.1)])?;
    let t3 = blaschke(cfg, &[c(0.5, 0.0), c(-0.3, 0.4), c(0.2, -0.6)])?;
    let two_plus_z = real_poly(cfg, &[2.0, 1.0]);
    let inst = |name, symbol, function, maximal| Instance { name, symbol, function, maximal };
    Ok(vec![
        inst("k_tilde_0_blaschke1", ToeplitzSymbol::conj_inner(&t1), model_kernels(&t1, ZERO)?.k_tilde, true),
        inst("k_tilde_lambda_blaschke3", ToeplitzSymbol::conj_inner(&t3), model_kernels(&t3, c(0.3, 0.2))?.k_tilde, true),
        inst("k_0_blaschke2", ToeplitzSymbol::conj_inner(&t2), model_kernels(&t2, ZERO)?.k, false),
        inst("one_in_K_z2", ToeplitzSymbol::monomial(cfg, -2), real_poly(cfg, &[1.0]), false),
        inst("one_minus_z_4_in_K_z5", z5.clone(), real_poly(cfg, &[1.0, -4.0, 6.0, -4.0, 1.0]), true),
        inst("z2_one_minus_z_2_in_K_z5", z5.clone(), real_poly(cfg, &[0.0, 0.0, 1.0, -2.0, 1.0]), true),
        inst("z_in_K_z5", z5.clone(), real_poly(cfg, &[0.0, 1.0]), false),
        inst("z4_in_K_z5", z5.clone(), real_poly(cfg, &[0.0, 0.0, 0.0, 0.0, 1.0]), true),
        inst("one_plus_z4_in_K_z5", z5, real_poly(cfg, &[1.0, 0.0, 0.0, 0.0, 1.0]), true),
        inst("z_plus_z2_in_K_z3", ToeplitzSymbol::monomial(cfg, -3), real_poly(cfg, &[0.0, 1.0, 1.0]), true),
        inst("z2_in_K_z4", ToeplitzSymbol::monomial(cfg, -4), real_poly(cfg, &[0.0, 0.0, 1.0]), false),
        inst("two_plus_z_rigid", rigid_symbol(two_plus_z.boundary()), two_plus_z, true),
    ])
}

/// Maximality read off the conjugate `C f`: analytic and outer.
pub fn conjugation_route(g: &ToeplitzSymbol, f: &HardyFunction) -> Result<bool, CliError> {
    let ctx = ConjugationContext::new(g.clone())?;
    let cf = conjugate_in_kernel(&ctx, f)?;
    let analytic = cf.defect() <= g.coefficient_tolerance() * cf.norm().max(1.0);
    Ok(analytic && outer_test(&cf)?.verdict == OuterVerdict::Outer)
}

pub fn maximal_equivalence(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let instances = maximal_instances(rc.grid)?;
    let mut agree = 0usize;
    let mut truth = 0usize;
    let mut winding = 0usize;
    for inst in &instances {
        let via_conjugation = conjugation_route(&inst.symbol, &inst.function)?;
        let direct = maximal_test(&inst.symbol, &inst.function)?.maximal;
        let zeros = maximal_test_by_zero_count(&inst.symbol, &inst.function)?.maximal;
        b.info(format!("{}_maximal", inst.name), flag(direct));
        agree += usize::from(via_conjugation == direct);
        truth += usize::from(direct == inst.maximal);
        winding += usize::from(zeros == direct);
    }
    let n = instances.len() as f64;
    b.near("instances", n, 12.0, 0.0);
    b.near("route_agreement", agree as f64, n, 0.0);
    b.near("expected_verdicts", truth as f64, n, 0.0);
    b.near("zero_count_agreement", winding as f64, n, 0.0);
    Ok(())
}

fn factor_check(
    b: &mut ReportBuilder,
    label: &str,
    f: &HardyFunction,
    inner: &BoundaryFunction,
    outer: &BoundaryFunction,
    tol: f64,
) -> Result<(), CliError> {
    let pair = inner_outer(f)?;
    let cfg = *f.config();
    b.at_most(format!("{label}_residual"), pair.residual, cfg.tol_residual);
    // Outer factors are normalised positive at the origin.
    let o = outer.scale(Complex64::from_polar(1.0, -outer.coeff(0).arg()));
    let scale = o.sup_norm();
    b.at_most(format!("{label}_outer_error"), pair.outer.max_distance(&o) / scale, tol);
    b.at_most(format!("{label}_inner_error"), pair.inner.max_distance(inner), tol);
    b.check(format!("{label}_outer_is_outer"), outer_test(&pair.outer)?.verdict == OuterVerdict::Outer);
    Ok(())
}

pub fn inner_outer_examples(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let z2 = BoundaryFunction::monomial(cfg, 2);
    let one_plus_z = BoundaryFunction::from_fn(cfg, |z| ONE + z);
    let f = HardyFunction::assume(&z2 * &one_plus_z);
    factor_check(b, "z2_one_plus_z", &f, &z2, &one_plus_z, 1e-6)?;

    let theta = blaschke(cfg, &[c(0.5, 0.0), c(0.0, 0.3)])?;
    let pair = model_kernels(&theta, ZERO)?;
    let ratio = pair.k_tilde.boundary() / pair.k.boundary();
    factor_check(b, "k_tilde", &pair.k_tilde, &ratio, pair.k.boundary(), 1e-6)?;

    let e = make_inner(InnerSpec::atom_at_one(), cfg)?;
    let two_plus_z = BoundaryFunction::from_fn(cfg, |z| 2.0 + z);
    let f = HardyFunction::assume(e.boundary() * &two_plus_z);
    factor_check(b, "e_two_plus_z", &f, e.boundary(), &two_plus_z, 1e-6)?;

    let one = BoundaryFunction::constant(cfg, ONE);
    let quartic = BoundaryFunction::from_fn(cfg, |z| (ONE - z).powi(4));
    factor_check(b, "one_minus_z_4", &HardyFunction::assume(quartic.clone()), &one, &quartic, 1e-6)?;
    Ok(())
}

pub fn maximal_factorisation_examples(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let tol = cfg.tol_residual;
    let g = ToeplitzSymbol::monomial(cfg, -3);
    let f = HardyFunction::from_fn(cfg, |z| z * z);
    let m = maximal_factorisation(&g, &f)?;
    b.at_most("monomial_reconstruction", m.reconstruction_residual, tol);
    b.at_most("monomial_inner_error", m.inner_factor.max_distance(&BoundaryFunction::monomial(cfg, 2)), tol);
    b.at_most("monomial_outer_error", m.outer_factor.max_distance(&BoundaryFunction::constant(cfg, ONE)), tol);

    let theta = blaschke(cfg, &[c(0.5, 0.0), c(-0.2, 0.6)])?;
    let g = ToeplitzSymbol::conj_inner(&theta);
    let pair = model_kernels(&theta, ZERO)?;
    let m = maximal_factorisation(&g, &pair.k_tilde)?;
    b.at_most("theta_reconstruction", m.reconstruction_residual, tol);
    let z = BoundaryFunction::monomial(cfg, 1);
    let (k, kt) = (pair.k.boundary(), pair.k_tilde.boundary());
    let rebuilt = &(&(&z * kt) / k) * &(k / &k.conj());
    b.at_most("theta_identity", rebuilt.max_distance(theta.boundary()), 1e-12);

    let m0 = modified_factorisation(&g, &pair.k_tilde, ZERO)?;
    let same = m0.unimodular_part.max_distance(&m.unimodular_part).max(m0.ratio_part.max_distance(&m.ratio_part));
    b.at_most("modified_at_zero_matches", same, 1e-12);
    let ml = modified_factorisation(&g, &pair.k_tilde, c(0.3, 0.2))?;
    b.at_most("modified_reconstruction", ml.reconstruction_residual, tol);
    b.at_most("modified_unimodular_defect", ml.unimodular_part.unimodular_defect(), 1e-12);
    Ok(())
}

/// Argument-principle zero count of `h` on `|w| = r` from point values.
fn winding(h: impl Fn(Complex64) -> Complex64, r: f64, points: usize) -> i64 {
    let vals: Vec<Complex64> =
        (0..points).map(|k| h(Complex64::from_polar(r, 2.0 * PI * k as f64 / points as f64))).collect();
    let total: f64 = (0..points).map(|k| (vals[(k + 1) % points] / vals[k]).arg()).sum();
    (total / (2.0 * PI)).round() as i64
}

pub fn e_maximal_function(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let spec = InnerSpec::atom_at_one();
    let e = make_inner(spec.clone(), cfg)?;
    let pair = model_kernels(&e, ZERO)?;
    let k0 = 1.0 - (-2.0f64).exp();
    let kt0 = -2.0 * (-1.0f64).exp();
    let (k, kt) = (pair.k.boundary(), pair.k_tilde.boundary());
    let zb = BoundaryFunction::monomial(cfg, -1);
    let f = &zb * &(&kt.scale(c(k0, 0.0)) - &k.scale(c(kt0, 0.0)));
    let g = ToeplitzSymbol::conj_inner(&e).times(&ToeplitzSymbol::monomial(cfg, 1));
    let ctx = ConjugationContext::new(g.clone())?;
    let display = &k.scale(c(k0, 0.0)) - &kt.scale(c(kt0, 0.0));
    let cf = ctx.apply(&f);
    b.at_most("conjugate_matches_display", cf.max_distance(&display), 1e-12);

    let o = |w: Complex64| {
        let ew = spec.eval(w);
        let kw = ONE - e.eval(ZERO).conj() * ew;
        let ktw = if w.norm() < 1e-12 { c(kt0, 0.0) } else { (ew - e.eval(ZERO)) / w };
        kw * k0 - ktw * kt0
    };
    let o0 = o(ZERO);
    b.near("outer_at_origin", o0.re, k0 * k0 - kt0 * kt0, 1e-12);
    b.at_least("outer_at_origin_positive", o0.re, 0.0);
    for r in [0.5, 0.9, 0.95] {
        b.near(format!("zeros_inside_{r}"), winding(o, r, 1 << 16) as f64, 0.0, 0.0);
    }
    b.info("sampled_kernel_residual", residual_in_kernel(&g, &f)?);
    b.note("E is not resolved on the grid; maximality is certified by pointwise evaluation inside the disk");
    Ok(())
}

pub fn rigidity_probes(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let theta = blaschke(cfg, &[c(0.5, 0.0), c(0.0, -0.4)])?;
    let cases = [
        ("two_plus_z", HardyFunction::from_fn(cfg, |z| 2.0 + z), Rigidity::RigidAtScale, 1usize),
        ("one_plus_z", HardyFunction::from_fn(cfg, |z| ONE + z), Rigidity::NotRigid, 2),
        ("reproducing_kernel", model_kernels(&theta, c(0.3, 0.1))?.k, Rigidity::RigidAtScale, 1),
    ];
    for (label, o, verdict, dim) in cases {
        let r = square_rigidity_probe(&o, DEFAULT_SECTION)?;
        b.check(format!("{label}_verdict"), r.verdict == verdict);
        b.near(format!("{label}_dimension"), r.dimension as f64, dim as f64, 0.0);
        b.at_least(format!("{label}_gap"), r.gap, toeplab_core::toeplitz_engine::GAP_RATIO);
    }
    Ok(())
}
