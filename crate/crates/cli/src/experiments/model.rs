use rand::Rng;
use toeplab_core::boundary_core::ZERO;
use toeplab_core::inner_functions::{
    conjugate_kernel_value, crofoot, crofoot_exact_norms, crofoot_two_point as two_point_transform, kernel_value, make_inner, model_kernels,
    InnerSpec, KernelExpansion,
};

use super::{c, RunConfig};
use crate::error::CliError;
use crate::report::ReportBuilder;
use crate::sampling;

const SAMPLES: usize = 50;

fn crofoot_isometry(
    rc: &RunConfig,
    b: &mut ReportBuilder,
    spec: &InnerSpec,
    tol: f64,
    sampled_tol: Option<f64>,
) -> Result<(), CliError> {
    let cfg = rc.grid;
    let mut rng = rc.rng();
    let theta = make_inner(spec.clone(), cfg)?;
    for (label, lambda) in [("lambda_0", ZERO), ("lambda_1", c(0.3, 0.2))] {
        let t = crofoot(&theta, lambda)?;
        let mut defect: f64 = 0.0;
        let mut residual: f64 = 0.0;
        let mut sampled: f64 = 0.0;
        for _ in 0..SAMPLES {
            let m = rng.random_range(1..=4);
            let nodes: Vec<_> = (0..m).map(|_| sampling::disk_point(&mut rng, 0.9)).collect();
            let weights = sampling::coefficients(&mut rng, m);
            let (nf, nm, res) = crofoot_exact_norms(spec, &t, &nodes, &weights);
            defect = defect.max((nm / nf - 1.0).abs());
            residual = residual.max(res / nf);
            let f = KernelExpansion::model_space_element(&nodes, &weights, |w| t.theta_lambda_value(spec, w))
                .samples(&t.theta_lambda);
            let mf = t.multiplier.boundary() * &f;
            sampled = sampled.max((mf.norm() / f.norm() - 1.0).abs());
        }
        b.at_most(format!("{label}_isometry_defect"), defect, tol);
        b.at_most(format!("{label}_model_space_residual"), residual, tol);
        match sampled_tol {
            Some(st) => {
                b.at_most(format!("{label}_sampled_isometry_defect"), sampled, st);
            }
            None => b.info(format!("{label}_sampled_isometry_defect"), sampled),
        }
        b.info(format!("{label}_theta_at_lambda_modulus"), t.theta_at_lambda.norm());
    }
    Ok(())
}

pub fn crofoot_isometry_e(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    crofoot_isometry(rc, b, &InnerSpec::atom_at_one(), 1e-5, None)?;
    b.note("norms from the reproducing-kernel calculus; the sampled defect is limited by the unresolved spectrum of E");
    Ok(())
}

pub fn crofoot_isometry_blaschke(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let mut rng = rc.rng();
    let spec = sampling::blaschke_exact(&mut rng, 5, 0.8);
    let zeros: Vec<_> = spec.zeros.clone();
    b.artifact("zeros", &zeros);
    let rc = RunConfig { seed: rc.seed.wrapping_add(1), ..rc.clone() };
    crofoot_isometry(&rc, b, &spec, 1e-6, Some(1e-6))
}

pub fn crofoot_two_point(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let cfg = rc.grid;
    let mut rng = rc.rng();
    let lambda = c(0.3, 0.2);
    for (label, spec) in [("blaschke", sampling::blaschke_exact(&mut rng, 3, 0.8)), ("e", InnerSpec::atom_at_one())] {
        let theta = make_inner(spec, cfg)?;
        let one = crofoot(&theta, lambda)?;
        let two = two_point_transform(&theta, lambda, lambda)?;
        b.at_most(format!("{label}_transform_distance"), two.theta_pair.max_distance(&one.theta_lambda), 1e-10);
        let s = (1.0 - one.theta_at_lambda.norm_sqr()).sqrt();
        let scaled = one.multiplier.boundary().scale(c(s, 0.0));
        b.at_most(format!("{label}_multiplier_distance"), two.multiplier.max_distance(&scaled), 1e-10);
    }
    Ok(())
}

pub fn model_kernels_e(rc: &RunConfig, b: &mut ReportBuilder) -> Result<(), CliError> {
    let spec = InnerSpec::atom_at_one();
    let theta = make_inner(spec.clone(), rc.grid)?;
    let e = (-1.0f64).exp();
    let k0 = kernel_value(&spec, ZERO, ZERO);
    let kt0 = conjugate_kernel_value(&spec, ZERO, ZERO);
    b.near("k_at_origin", k0.re, 1.0 - e * e, 1e-14);
    b.near("k_at_origin_im", k0.im, 0.0, 1e-14);
    b.near("k_tilde_at_origin", kt0.re, -2.0 * e, 1e-12);
    b.note("k~_0(0) = E'(0) = -2/e by direct differentiation of exp((z+1)/(z-1))");
    let pair = model_kernels(&theta, ZERO)?;
    b.at_least("k_min_modulus", pair.k_min_modulus, 1.0 - e - 1e-12);
    let expansion = KernelExpansion::model_space_element(&[ZERO], &[c(1.0, 0.0)], |w| spec.eval(w));
    b.near("k_norm_squared", expansion.norm_sqr(), 1.0 - e * e, 1e-14);
    // E·z̄·conj(k̃) = k holds pointwise on the circle.
    let zb = toeplab_core::BoundaryFunction::monomial(rc.grid, -1);
    let image = &(theta.boundary() * &zb) * &pair.k_tilde.conj();
    b.at_most("conjugation_identity", image.max_distance(&pair.k), 1e-12);
    Ok(())
}
