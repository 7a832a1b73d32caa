//! Inner–outer factorisation, maximal-function tests and symbol factorisations.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary_core::{
    outer_test, BoundaryError, LOG_NOISE_FLOOR, BoundaryFunction, GridConfig, HardyFunction, OuterCertificate, OuterVerdict, ONE, ZERO,
};
use crate::toeplitz_engine::{numerical_kernel, residual_in_kernel, KernelError, ToeplitzSymbol};

/// Fraction of clamped samples beyond which boundary zeros are not isolated.
pub const MAX_CLAMPED_FRACTION: f64 = 0.05;
/// Radius of the circle used by the zero-counting maximality check.
pub const WINDING_RADIUS: f64 = 0.98;

const FIT_HALF_WINDOW: i64 = 6;
const ZERO_CANDIDATE_LEVEL: f64 = 0.05;
const UNRELIABLE_LEVEL: f64 = 1e-7;

#[derive(Debug, Error, Clone)]
pub enum FactorError {
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("{:.2}% of samples fall below the log clamp", 100.0 * .fraction)]
    TooManyBoundaryZeros { fraction: f64 },
    #[error("factorisation failed: {0}")]
    FactorisationFailed(String),
    #[error("function is not in the kernel (residual {residual:.3e} > {tolerance:.1e})")]
    NotInKernel { residual: f64, tolerance: f64 },
    #[error("function is not maximal in the kernel")]
    NotMaximal,
    #[error("function is not outer")]
    NotOuter,
    #[error("point {lambda} is not inside the open unit disk")]
    LambdaOutsideDisk { lambda: Complex64 },
    #[error("symbol is not unimodular")]
    NotUnimodular,
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error("kernel computation failed: {0}")]
    Kernel(Box<KernelError>),
}

impl From<KernelError> for FactorError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::Factorisation(f) => f,
            KernelError::ZeroFunction => FactorError::ZeroFunction,
            other => FactorError::Kernel(Box::new(other)),
        }
    }
}

/// Zero of the boundary function at `exp(i·angle)` with (possibly fractional) order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryZero {
    pub angle: f64,
    pub order: f64,
}

#[derive(Clone, Debug)]
pub struct InnerOuterPair {
    pub inner: BoundaryFunction,
    pub outer: HardyFunction,
    /// `‖f − inner·outer‖ / ‖f‖`.
    pub residual: f64,
    pub boundary_zeros: Vec<BoundaryZero>,
    pub clamped_fraction: f64,
}

/// `c₀ + 2Σ_{n≥1} c_n zⁿ` for a real sample vector.
pub fn analytic_completion(cfg: GridConfig, u: &[f64]) -> BoundaryFunction {
    let b = BoundaryFunction::from_samples(cfg, u.iter().map(|&x| Complex64::new(x, 0.0)).collect());
    let m = cfg.grid_size;
    let c = b.coeffs();
    let mut w = vec![ZERO; m];
    w[0] = Complex64::new(c[0].re, 0.0);
    for n in 1..m / 2 {
        w[n] = c[n] * 2.0;
    }
    BoundaryFunction::from_coeffs(cfg, w)
}

fn log_dist(t: f64, tau: f64) -> f64 {
    (2.0 * ((t - tau) / 2.0).sin()).abs().max(1e-300).ln()
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Least-squares fit of `m·log|2 sin((t−τ)/2)| + cubic(t−τ)` near sample `k`.
fn local_fit(cfg: &GridConfig, raw: &[f64], k: usize) -> (f64, f64, f64) {
    let m = cfg.grid_size as i64;
    let h = 2.0 * PI / m as f64;
    let tk = cfg.angle(k);
    let idx: Vec<usize> = (-FIT_HALF_WINDOW..=FIT_HALF_WINDOW).map(|j| (k as i64 + j).rem_euclid(m) as usize).collect();
    let tt: Vec<f64> = (-FIT_HALF_WINDOW..=FIT_HALF_WINDOW).map(|j| tk + j as f64 * h).collect();
    let rhs = DVector::from_iterator(idx.len(), idx.iter().map(|&i| raw[i]));
    let solve = |tau: f64| -> (f64, f64) {
        let a = DMatrix::from_fn(tt.len(), 5, |r, c| {
            let d = tt[r] - tau;
            match c {
                0 => log_dist(tt[r], tau),
                1 => 1.0,
                _ => d.powi(c as i32 - 1),
            }
        });
        match a.clone().svd(true, true).solve(&rhs, 1e-14) {
            Ok(x) => ((&a * &x - &rhs).norm_squared(), x[0]),
            Err(_) => (f64::INFINITY, 0.0),
        }
    };
    let mut best = (f64::INFINITY, tk);
    for i in 0..40 {
        let tau = tk - h + (i as f64 + 0.5) / 40.0 * 2.0 * h;
        let (r, _) = solve(tau);
        if r < best.0 {
            best = (r, tau);
        }
    }
    let (tau, res) = golden_min(|x| solve(x).0, best.1 - h / 20.0, best.1 + h / 20.0, 80);
    let order = solve(tau).1;
    (tau, order, (res / tt.len() as f64).sqrt())
}

fn high_frequency_energy(cfg: GridConfig, u: &[f64]) -> f64 {
    let b = BoundaryFunction::from_samples(cfg, u.iter().map(|&x| Complex64::new(x, 0.0)).collect());
    let m = cfg.grid_size as i64;
    b.coeffs()
        .iter()
        .enumerate()
        .filter(|(k, _)| cfg.index(*k).abs() > m / 8)
        .map(|(_, c)| c.norm_sqr())
        .sum()
}

/// Locates isolated boundary zeros and their orders from `log|f|`.
fn locate_boundary_zeros(cfg: &GridConfig, a: &[f64], raw: &[f64], sup: f64) -> Vec<BoundaryZero> {
    let m = cfg.grid_size;
    let h = 2.0 * PI / m as f64;
    let mut found: Vec<BoundaryZero> = Vec::new();
    for k in 0..m {
        let prev = a[(k + m - 1) % m];
        let next = a[(k + 1) % m];
        if !(a[k] <= prev && a[k] <= next && a[k] < ZERO_CANDIDATE_LEVEL * sup) {
            continue;
        }
        let (tau, mut order, rms) = local_fit(cfg, raw, k);
        if !(order >= 0.1 && rms < 0.1) {
            continue;
        }
        let half = (2.0 * order).round() / 2.0;
        if (order - half).abs() < 0.05 {
            order = half;
        }
        let near = found.iter().any(|z| {
            let d = (z.angle - tau).rem_euclid(2.0 * PI);
            d.min(2.0 * PI - d) < 3.0 * h
        });
        if !near {
            found.push(BoundaryZero { angle: tau, order });
        }
    }
    found
}

/// Replaces deflated log samples next to boundary zeros, where `|f|` is too
/// small to carry relative precision, by a local quartic through the
/// reliable neighbours.
fn repair_unreliable(cfg: &GridConfig, u: &mut [f64], a: &[f64], sup: f64, zeros: &[BoundaryZero]) {
    let m = cfg.grid_size as i64;
    let h = 2.0 * PI / m as f64;
    let level = UNRELIABLE_LEVEL * sup;
    for z in zeros {
        let centre = ((z.angle / h - 0.5).round() as i64).rem_euclid(m);
        let at = |j: i64| (centre + j).rem_euclid(m) as usize;
        let mut left = 0i64;
        while left < m / 8 && a[at(-left - 1)] < level {
            left += 1;
        }
        let mut right = 0i64;
        while right < m / 8 && a[at(right + 1)] < level {
            right += 1;
        }
        let bad: Vec<i64> = (-left..=right).filter(|&j| a[at(j)] < level).collect();
        if bad.is_empty() {
            continue;
        }
        let span = left.max(right) + 1;
        let good: Vec<i64> = (-(2 * span + 8)..=(2 * span + 8))
            .filter(|&j| (j < -left || j > right) && a[at(j)] >= level)
            .collect();
        if good.len() < 10 {
            continue;
        }
        let d = |j: i64| {
            let t = cfg.angle(at(j));
            let mut x = t - z.angle;
            x -= 2.0 * PI * (x / (2.0 * PI)).round();
            x / (span as f64 * h)
        };
        let design = DMatrix::from_fn(good.len(), 5, |r, c| d(good[r]).powi(c as i32));
        let rhs = DVector::from_iterator(good.len(), good.iter().map(|&j| u[at(j)]));
        if let Ok(x) = design.svd(true, true).solve(&rhs, 1e-14) {
            for &j in &bad {
                let t = d(j);
                u[at(j)] = (0..5).map(|c| x[c] * t.powi(c as i32)).sum();
            }
        }
    }
}

/// Inner–outer factorisation from the boundary modulus.
///
/// Isolated boundary zeros are divided out as `(1 − e^{-iτ}z)^m` before the
/// log-modulus is completed, then multiplied back into the outer factor.
pub fn inner_outer(f: &HardyFunction) -> Result<InnerOuterPair, FactorError> {
    let cfg = *f.config();
    let m = cfg.grid_size;
    let a: Vec<f64> = f.samples().iter().map(|s| s.norm()).collect();
    let sup = a.iter().cloned().fold(0.0, f64::max);
    if sup == 0.0 {
        return Err(FactorError::ZeroFunction);
    }
    let floor = cfg.tol_coeff * sup;
    let clamped = a.iter().filter(|&&x| x < floor).count();
    let clamped_fraction = clamped as f64 / m as f64;
    if clamped_fraction > MAX_CLAMPED_FRACTION {
        return Err(FactorError::TooManyBoundaryZeros { fraction: clamped_fraction });
    }
    let raw: Vec<f64> = a.iter().map(|x| x.max(1e-300).ln()).collect();
    let mut zeros = locate_boundary_zeros(&cfg, &a, &raw, sup);

    let mut u = raw.clone();
    let h = 2.0 * PI / m as f64;
    let angles: Vec<f64> = (0..m).map(|k| cfg.angle(k)).collect();
    for z in zeros.iter_mut() {
        let deflate = |tau: f64| -> Vec<f64> {
            u.iter().zip(&angles).map(|(v, &t)| v - z.order * log_dist(t, tau)).collect()
        };
        let (tau, _) = golden_min(
            |tau| high_frequency_energy(cfg, &deflate(tau)),
            z.angle - h / 20.0,
            z.angle + h / 20.0,
            60,
        );
        z.angle = tau;
        u = deflate(tau);
    }
    repair_unreliable(&cfg, &mut u, &a, sup, &zeros);
    let lf = (LOG_NOISE_FLOOR * sup).ln();
    for v in u.iter_mut() {
        *v = v.max(lf);
    }

    let l = analytic_completion(cfg, &u);
    let mut outer = l.map(|v| v.exp());
    for z in &zeros {
        let zeta = Complex64::from_polar(1.0, z.angle);
        let d = BoundaryFunction::from_fn(cfg, |w| (ONE - zeta.conj() * w).powf(z.order));
        outer = &outer * &d;
    }
    let o0 = outer.coeff(0);
    if o0.norm() > 0.0 {
        outer = outer.scale(Complex64::from_polar(1.0, -o0.arg()));
    }
    let inner = f.boundary().zip(&outer, |fv, ov| {
        let q = fv / ov;
        let n = q.norm();
        if n > 0.0 && n.is_finite() {
            q / n
        } else {
            ONE
        }
    });
    let residual = (f.boundary() - &(&inner * &outer)).norm() / f.norm();
    Ok(InnerOuterPair {
        inner,
        outer: HardyFunction::assume(outer),
        residual,
        boundary_zeros: zeros,
        clamped_fraction,
    })
}

fn check_membership(g: &ToeplitzSymbol, f: &BoundaryFunction) -> Result<f64, FactorError> {
    let residual = residual_in_kernel(g, f)?;
    let tolerance = g.residual_tolerance();
    if residual > tolerance {
        return Err(FactorError::NotInKernel { residual, tolerance });
    }
    Ok(residual)
}

/// `conj(g·z·f)`, analytic whenever `f ∈ ker T_g`.
pub fn conjugate_partner(g: &ToeplitzSymbol, f: &BoundaryFunction) -> HardyFunction {
    let z = BoundaryFunction::monomial(*f.config(), 1);
    HardyFunction::assume((&(&g.boundary * &z) * f).conj())
}

fn analytic_within(g: &ToeplitzSymbol, h: &HardyFunction) -> bool {
    h.defect() <= g.coefficient_tolerance() * h.norm().max(1.0)
}

#[derive(Clone, Debug)]
pub struct MaximalCertificate {
    pub maximal: bool,
    /// `conj(g·z·f)`.
    pub partner: HardyFunction,
    pub analytic: bool,
    pub outer: Option<OuterCertificate>,
    pub kernel_residual: f64,
}

/// Maximality of `f` in `ker T_g` via outerness of `conj(g·z·f)`.
pub fn maximal_test(g: &ToeplitzSymbol, f: &HardyFunction) -> Result<MaximalCertificate, FactorError> {
    if !g.unimodular {
        return Err(FactorError::NotUnimodular);
    }
    let kernel_residual = check_membership(g, f)?;
    let partner = conjugate_partner(g, f);
    let analytic = analytic_within(g, &partner);
    let outer = if analytic { Some(outer_test(&partner)?) } else { None };
    let maximal = outer.as_ref().map(|c| c.verdict == OuterVerdict::Outer).unwrap_or(false);
    Ok(MaximalCertificate { maximal, partner, analytic, outer, kernel_residual })
}

#[derive(Clone, Debug)]
pub struct ZeroCountCertificate {
    pub maximal: bool,
    /// Zeros of `conj(g·z·f)` inside the circle of radius `radius`.
    pub zero_count: i64,
    pub radius: f64,
    pub min_modulus_on_circle: f64,
    pub analytic: bool,
}

/// Winding number of an analytic function around `|z| = r`.
pub fn zero_count(h: &HardyFunction, r: f64) -> (i64, f64) {
    let cfg = *h.config();
    let m = cfg.grid_size;
    let mut c = vec![ZERO; m];
    let mut rn = 1.0;
    for (n, slot) in c.iter_mut().enumerate().take(m / 2) {
        *slot = h.coeff(n as i64) * rn;
        rn *= r;
    }
    let s = BoundaryFunction::from_coeffs(cfg, c);
    let v = s.samples();
    let mut total = 0.0;
    for k in 0..m {
        total += (v[(k + 1) % m] / v[k]).arg();
    }
    ((total / (2.0 * PI)).round() as i64, s.min_modulus())
}

/// Maximality via the factorisation `g·f = z̄·conj(O)`: the partner
/// `conj(g·z·f)` must be analytic and zero-free in the disk.
///
/// Zeros are counted by the argument principle on `|z| = WINDING_RADIUS`, so
/// zero-type inner factors are detected and singular inner factors are not.
pub fn maximal_test_by_zero_count(g: &ToeplitzSymbol, f: &HardyFunction) -> Result<ZeroCountCertificate, FactorError> {
    if !g.unimodular {
        return Err(FactorError::NotUnimodular);
    }
    check_membership(g, f)?;
    let partner = conjugate_partner(g, f);
    let analytic = analytic_within(g, &partner);
    let (count, min_mod) = zero_count(&partner, WINDING_RADIUS);
    Ok(ZeroCountCertificate {
        maximal: analytic && count == 0,
        zero_count: count,
        radius: WINDING_RADIUS,
        min_modulus_on_circle: min_mod,
        analytic,
    })
}

/// Factors of `g = conj(z·I)·conj(O)/O` (or the modified variant).
#[derive(Clone, Debug)]
pub struct MaxFactorisation {
    pub inner_factor: BoundaryFunction,
    pub outer_factor: HardyFunction,
    pub lambda: Option<Complex64>,
    /// `conj(z·I)`, or `conj(B_λ·I)` for the modified variant.
    pub unimodular_part: BoundaryFunction,
    /// `conj(O)/O`, or `conj(O)(1−λz̄)/(O(1−λ̄z))`.
    pub ratio_part: BoundaryFunction,
    /// Largest samplewise distance between the product and `g`.
    pub reconstruction_residual: f64,
}

/// Factorises `g` through a maximal function `f = I·O`; the outer factor is
/// `conj(g)·z̄·conj(f)` and `I = f/O`.
pub fn maximal_factorisation(g: &ToeplitzSymbol, f: &HardyFunction) -> Result<MaxFactorisation, FactorError> {
    let cert = maximal_test(g, f)?;
    if !cert.maximal {
        return Err(FactorError::NotMaximal);
    }
    let cfg = *f.config();
    let mut outer = cert.partner.boundary().clone();
    let o0 = outer.coeff(0);
    outer = outer.scale(Complex64::from_polar(1.0, -o0.arg()));
    let inner = unit_ratio(f.boundary(), &outer);
    let z = BoundaryFunction::monomial(cfg, 1);
    let unimodular_part = (&z * &inner).conj();
    let ratio_part = &outer.conj() / &outer;
    let reconstruction_residual = (&unimodular_part * &ratio_part).max_distance(&g.boundary);
    Ok(MaxFactorisation {
        inner_factor: inner,
        outer_factor: HardyFunction::assume(outer),
        lambda: None,
        unimodular_part,
        ratio_part,
        reconstruction_residual,
    })
}

fn unit_ratio(num: &BoundaryFunction, den: &BoundaryFunction) -> BoundaryFunction {
    num.zip(den, |a, b| {
        let q = a / b;
        let n = q.norm();
        if n > 0.0 && n.is_finite() {
            q / n
        } else {
            ONE
        }
    })
}

/// Variant using `z = B_λ·(1−λ̄z)/(1−λz̄)`.
pub fn modified_factorisation(
    g: &ToeplitzSymbol,
    f: &HardyFunction,
    lambda: Complex64,
) -> Result<MaxFactorisation, FactorError> {
    if lambda.norm() >= 1.0 {
        return Err(FactorError::LambdaOutsideDisk { lambda });
    }
    let base = maximal_factorisation(g, f)?;
    let cfg = *f.config();
    let b = BoundaryFunction::from_fn(cfg, |z| (z - lambda) / (ONE - lambda.conj() * z));
    let o = base.outer_factor.boundary();
    let unimodular_part = (&b * &base.inner_factor).conj();
    let ratio_part = BoundaryFunction::from_fn(cfg, |z| (ONE - lambda * z.conj()) / (ONE - lambda.conj() * z));
    let ratio_part = &(&o.conj() / o) * &ratio_part;
    let reconstruction_residual = (&unimodular_part * &ratio_part).max_distance(&g.boundary);
    Ok(MaxFactorisation { lambda: Some(lambda), unimodular_part, ratio_part, reconstruction_residual, ..base })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rigidity {
    RigidAtScale,
    NotRigid,
    Uncertain,
}

#[derive(Clone, Debug)]
pub struct RigidityReport {
    pub verdict: Rigidity,
    pub dimension: usize,
    pub gap: f64,
}

/// Dimension of `ker T_{z̄·conj(O)/O}` at a fixed section size; one means
/// `O²` is rigid at this scale.
pub fn square_rigidity_probe(o: &HardyFunction, size: usize) -> Result<RigidityReport, FactorError> {
    if outer_test(o)?.verdict != OuterVerdict::Outer {
        return Err(FactorError::NotOuter);
    }
    let cfg = *o.config();
    let zb = BoundaryFunction::monomial(cfg, -1);
    let sym = &zb * &(&o.conj() / o.boundary());
    let sym = sym.map(|v| v / v.norm());
    let g = ToeplitzSymbol::new(sym);
    match numerical_kernel(&g, size) {
        Ok(k) => {
            let verdict = match k.dimension {
                1 => Rigidity::RigidAtScale,
                0 => Rigidity::Uncertain,
                _ => Rigidity::NotRigid,
            };
            Ok(RigidityReport { verdict, dimension: k.dimension, gap: k.gap })
        }
        Err(KernelError::UncertainDimension(k)) => {
            Ok(RigidityReport { verdict: Rigidity::Uncertain, dimension: k.dimension, gap: k.gap })
        }
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner_functions::{make_inner, model_kernels, InnerSpec};

    fn cfg() -> GridConfig {
        GridConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hardy(f: impl Fn(Complex64) -> Complex64) -> HardyFunction {
        HardyFunction::from_fn(cfg(), f)
    }

    fn inner_matches(pair: &InnerOuterPair, want: &BoundaryFunction) -> f64 {
        // The inner factor is unique up to a unimodular constant.
        let r = &pair.inner / want;
        let mean = r.mean();
        r.map(|v| v - mean).sup_norm()
    }

    #[test]
    fn factors_with_boundary_zero() {
        let f = hardy(|z| z * z * (ONE + z));
        let p = inner_outer(&f).unwrap();
        assert!(inner_matches(&p, &BoundaryFunction::monomial(cfg(), 2)) < 1e-6);
        assert!(p.residual < 1e-7);
        assert_eq!(p.boundary_zeros.len(), 1);
        assert!((p.boundary_zeros[0].order - 1.0).abs() < 1e-12);
        assert!(p.outer.at_origin().re > 0.0 && p.outer.at_origin().im.abs() < 1e-12);
    }

    #[test]
    fn higher_order_zero_and_square_root() {
        let f = hardy(|z| (ONE - z).powi(4));
        let p = inner_outer(&f).unwrap();
        assert!(inner_matches(&p, &BoundaryFunction::constant(cfg(), ONE)) < 1e-6);
        let f = hardy(|z| (ONE + z).sqrt());
        let p = inner_outer(&f).unwrap();
        assert!(inner_matches(&p, &BoundaryFunction::constant(cfg(), ONE)) < 1e-6);
        assert!((p.boundary_zeros[0].order - 0.5).abs() < 1e-12);
    }

    #[test]
    fn singular_factor_times_invertible_outer() {
        let e = make_inner(InnerSpec::atom_at_one(), cfg()).unwrap();
        let f = HardyFunction::assume(e.boundary() * &BoundaryFunction::from_fn(cfg(), |z| c(2.0, 0.0) + z));
        let p = inner_outer(&f).unwrap();
        assert!(inner_matches(&p, e.boundary()) < 1e-10);
        assert!(p.outer.max_distance(&BoundaryFunction::from_fn(cfg(), |z| c(2.0, 0.0) + z)) < 1e-10);
    }

    #[test]
    fn conjugate_kernel_splits_into_quotient_and_kernel() {
        let theta = make_inner(InnerSpec::blaschke(&[c(0.3, 0.2), c(-0.5, 0.1), c(0.0, 0.6)]), cfg()).unwrap();
        let mk = model_kernels(&theta, ZERO).unwrap();
        let p = inner_outer(&mk.k_tilde).unwrap();
        assert!(p.outer.distance(mk.k.boundary()) / mk.k.norm() < 1e-8);
        let want = &mk.k_tilde.boundary().clone() / mk.k.boundary();
        assert!(inner_matches(&p, &want) < 1e-8);
    }

    #[test]
    fn too_many_zeros_rejected() {
        let f = HardyFunction::assume(BoundaryFunction::from_angle_fn(cfg(), |t| {
            if t.abs() < 0.5 {
                ZERO
            } else {
                ONE
            }
        }));
        assert!(matches!(inner_outer(&f), Err(FactorError::TooManyBoundaryZeros { .. })));
    }

    #[test]
    fn maximal_examples() {
        let theta = make_inner(InnerSpec::blaschke(&[c(0.4, 0.1), c(-0.2, -0.5)]), cfg()).unwrap();
        let g = ToeplitzSymbol::conj_inner(&theta);
        let mk = model_kernels(&theta, c(0.3, -0.2)).unwrap();
        assert!(maximal_test(&g, &mk.k_tilde).unwrap().maximal);
        assert!(maximal_test_by_zero_count(&g, &mk.k_tilde).unwrap().maximal);

        let g2 = ToeplitzSymbol::monomial(cfg(), -2);
        let one = HardyFunction::constant(cfg(), ONE);
        assert!(!maximal_test(&g2, &one).unwrap().maximal);
        assert_eq!(maximal_test_by_zero_count(&g2, &one).unwrap().zero_count, 1);

        let g5 = ToeplitzSymbol::monomial(cfg(), -5);
        let f = HardyFunction::polynomial(cfg(), &[ONE, c(-4.0, 0.0), c(6.0, 0.0), c(-4.0, 0.0), ONE]);
        assert!(maximal_test(&g5, &f).unwrap().maximal);
        assert!(maximal_test_by_zero_count(&g5, &f).unwrap().maximal);

        let z = HardyFunction::polynomial(cfg(), &[ZERO, ONE]);
        assert!(matches!(maximal_test(&ToeplitzSymbol::monomial(cfg(), -1), &z), Err(FactorError::NotInKernel { .. })));
    }

    #[test]
    fn factorisation_of_monomial_symbol() {
        let g = ToeplitzSymbol::monomial(cfg(), -4);
        let f = HardyFunction::polynomial(cfg(), &[ZERO, ZERO, ZERO, ONE]);
        let mf = maximal_factorisation(&g, &f).unwrap();
        assert!(mf.inner_factor.max_distance(&BoundaryFunction::monomial(cfg(), 3)) < 1e-12);
        assert!(mf.outer_factor.max_distance(&BoundaryFunction::constant(cfg(), ONE)) < 1e-12);
        assert!(mf.reconstruction_residual < 1e-12);
        let m0 = modified_factorisation(&g, &f, ZERO).unwrap();
        assert!(m0.unimodular_part.max_distance(&mf.unimodular_part) < 1e-14);
        let ml = modified_factorisation(&g, &f, c(0.3, 0.4)).unwrap();
        assert!(ml.reconstruction_residual < 1e-12);
        assert!(ml.unimodular_part.unimodular_defect() < 1e-12);
        assert!(matches!(modified_factorisation(&g, &f, c(1.0, 0.0)), Err(FactorError::LambdaOutsideDisk { .. })));
    }

    #[test]
    fn rigidity_examples() {
        let r = square_rigidity_probe(&hardy(|z| c(2.0, 0.0) + z), 64).unwrap();
        assert_eq!(r.verdict, Rigidity::RigidAtScale);
        let r = square_rigidity_probe(&hardy(|z| ONE + z), 64).unwrap();
        assert_eq!(r.verdict, Rigidity::NotRigid);
        assert_eq!(r.dimension, 2);
    }
}
