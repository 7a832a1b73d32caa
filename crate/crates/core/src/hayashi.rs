//! Finite-dimensional kernels `w·K_{zⁿ}`, isometric multipliers and jump analysis.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary_core::{
    inner_product, outer_test, BoundaryError, BoundaryFunction, GridConfig, HardyFunction, OuterVerdict, ONE, ZERO,
};
use crate::linalg::{condition_number, gram, polynomial_roots, solve_hpd};
use crate::toeplitz_engine::{numerical_kernel, residual_in_kernel, KernelError, ToeplitzSymbol, DEFAULT_SECTION};

/// Gram matrices above this condition number are rejected.
pub const MAX_GRAM_CONDITION: f64 = 1e12;
/// Largest degree for which the zeros of the inner factor are extracted.
pub const MAX_ROOT_DEGREE: usize = 8;
/// Seed for the random isometry checks.
pub const ISOMETRY_SEED: u64 = 0x5eed;
pub const ISOMETRY_SAMPLES: usize = 50;

#[derive(Debug, Error, Clone)]
pub enum HayashiError {
    #[error("Gram matrix condition number {condition:.3e} exceeds {MAX_GRAM_CONDITION:.0e}")]
    IllConditionedGram { condition: f64 },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("n = {n} is even; the half-integer family needs odd n")]
    EvenN { n: i64 },
    #[error("n = {n} must be positive")]
    NonpositiveN { n: i64 },
    #[error("function is not outer")]
    NotOuter,
    #[error("value at the origin {value} is not positive")]
    NonpositiveAtZero { value: Complex64 },
    #[error("one-sided limit at angle {angle} did not converge (spread {spread:.3e})")]
    LimitEstimationFailed { angle: f64, spread: f64 },
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// `ker T_g = w·K_{zⁿ}` with basis `{w·z^j : j < n}`.
#[derive(Clone, Debug)]
pub struct FiniteKernelRep {
    pub multiplier_w: HardyFunction,
    pub degree_n: usize,
    pub basis: Vec<HardyFunction>,
    /// Residuals of the basis under the symbol, when one is attached.
    pub residuals: Vec<f64>,
    pub symbol: Option<ToeplitzSymbol>,
}

impl FiniteKernelRep {
    pub fn new(w: HardyFunction, n: usize, symbol: Option<ToeplitzSymbol>) -> Result<Self, HayashiError> {
        if n == 0 {
            return Err(HayashiError::ZeroDegree);
        }
        let basis: Vec<HardyFunction> = (0..n).map(|j| w.shift(j)).collect();
        let residuals = match &symbol {
            Some(g) => basis.iter().map(|b| residual_in_kernel(g, b)).collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        Ok(FiniteKernelRep { multiplier_w: w, degree_n: n, basis, residuals, symbol })
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// `ker T_g = u·K_{zα}` with `u` multiplying isometrically.
#[derive(Clone, Debug)]
pub struct IsometricRep {
    pub u: HardyFunction,
    pub alpha_boundary: BoundaryFunction,
    /// `w − (projection of w onto span{w·z^j : 1 ≤ j < n})`.
    pub orthogonal_vector: HardyFunction,
    /// `P` with `𝒰 = w·P`, `P(0) = 1`, as Taylor coefficients.
    pub polynomial_factor: Vec<Complex64>,
    /// The `a_k` in `P = Π(1 − a_k z)`, when extracted.
    pub factor_parameters: Option<Vec<Complex64>>,
    /// Zeros of the inner function `α`.
    pub alpha_zeros: Option<Vec<Complex64>>,
    pub gram_condition: f64,
    /// Max over random `f ∈ K_{zα}` of `|‖u·f‖/‖f‖ − 1|`.
    pub isometry_defect: f64,
    /// Relative negative-frequency norm of the samples of `α`.
    pub alpha_defect: f64,
}

fn eval_poly(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(ZERO, |acc, &a| acc * z + a)
}

/// Orthogonal vector and isometric multiplier for `w·K_{zⁿ}` via the Gram
/// normal equations of `{w·z^j : 1 ≤ j < n}`.
pub fn isometric_multiplier_finite(rep: &FiniteKernelRep) -> Result<IsometricRep, HayashiError> {
    let w = &rep.multiplier_w;
    let cfg = *w.config();
    let n = rep.degree_n;
    let tail: Vec<BoundaryFunction> = (1..n).map(|j| w.shift(j).into_boundary()).collect();
    let mut p = vec![ONE];
    let mut gram_condition = 1.0;
    if !tail.is_empty() {
        let g = gram(&tail);
        gram_condition = condition_number(&g);
        if gram_condition > MAX_GRAM_CONDITION {
            return Err(HayashiError::IllConditionedGram { condition: gram_condition });
        }
        let rhs = DVector::from_iterator(tail.len(), tail.iter().map(|b| inner_product(w, b)));
        let x = solve_hpd(&g, &rhs).ok_or(HayashiError::IllConditionedGram { condition: f64::INFINITY })?;
        p.extend(x.iter().map(|v| -v));
    }
    let pb = BoundaryFunction::polynomial(cfg, &p);
    let big_u = HardyFunction::assume(w.boundary() * &pb);
    let un = big_u.norm();
    let phase = {
        let u0 = big_u.at_origin();
        if u0.norm() > 0.0 {
            u0.conj() / u0.norm()
        } else {
            ONE
        }
    };
    let u = big_u.scale(phase / un);

    let zn1 = BoundaryFunction::monomial(cfg, n as i64 - 1);
    let alpha_boundary = (&zn1 * &pb.conj()) / &pb;
    let alpha_boundary = alpha_boundary.map(|v| v / v.norm());
    let alpha_defect = alpha_boundary.negative_part_norm() / alpha_boundary.norm();

    let (factor_parameters, alpha_zeros) = if n >= 2 && n - 1 <= MAX_ROOT_DEGREE {
        let roots = polynomial_roots(&p);
        let params: Vec<Complex64> = roots.iter().map(|r| ONE / r).collect();
        let zeros: Vec<Complex64> = params.iter().map(|a| a.conj()).collect();
        (Some(params), Some(zeros))
    } else if n == 1 {
        (Some(Vec::new()), Some(Vec::new()))
    } else {
        (None, None)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(ISOMETRY_SEED);
    let mut isometry_defect: f64 = 0.0;
    for _ in 0..ISOMETRY_SAMPLES {
        let q: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let f = &BoundaryFunction::polynomial(cfg, &q) / &pb;
        let uf = u.boundary() * &f;
        isometry_defect = isometry_defect.max((uf.norm() / f.norm() - 1.0).abs());
    }
    Ok(IsometricRep {
        u,
        alpha_boundary,
        orthogonal_vector: big_u,
        polynomial_factor: p,
        factor_parameters,
        alpha_zeros,
        gram_condition,
        isometry_defect,
        alpha_defect,
    })
}

/// Herglotz data of `|u|²` and the associated functions `b`, `a`, `u_α`.
#[derive(Clone, Debug)]
pub struct HerglotzParameters {
    /// `c₀ + 2Σ_{n≥1} c_n zⁿ` for the Fourier coefficients `c_n` of `|u|²`.
    pub herglotz: HardyFunction,
    pub b: HardyFunction,
    pub a: HardyFunction,
    pub u_alpha: HardyFunction,
    pub b_sup: f64,
}

pub fn herglotz_parameters(u: &HardyFunction, alpha: &BoundaryFunction) -> Result<HerglotzParameters, HayashiError> {
    if outer_test(u)?.verdict != OuterVerdict::Outer {
        return Err(HayashiError::NotOuter);
    }
    let u0 = u.at_origin();
    if u0.re <= 0.0 || u0.im.abs() > 1e-10 * u0.norm() {
        return Err(HayashiError::NonpositiveAtZero { value: u0 });
    }
    let cfg = *u.config();
    let m = cfg.grid_size;
    let mod2 = u.boundary().map(|v| Complex64::new(v.norm_sqr(), 0.0));
    let c = mod2.coeffs();
    let mut w = vec![ZERO; m];
    w[0] = Complex64::new(c[0].re, 0.0);
    for k in 1..m / 2 {
        w[k] = c[k] * 2.0;
    }
    let f = BoundaryFunction::from_coeffs(cfg, w);
    let b = f.map(|v| (v - ONE) / (v + ONE));
    let a = f.zip(u.boundary(), |fv, uv| uv * 2.0 / (fv + ONE));
    let ab = alpha * &b;
    let u_alpha = a.zip(&ab, |av, abv| av / (ONE - abv));
    let b_sup = b.sup_norm();
    Ok(HerglotzParameters {
        herglotz: HardyFunction::assume(f),
        b: HardyFunction::assume(b),
        a: HardyFunction::assume(a),
        u_alpha: HardyFunction::assume(u_alpha),
        b_sup,
    })
}

/// `(1+z)^{1/2}` on the principal branch.
pub fn half_power_multiplier(cfg: GridConfig) -> HardyFunction {
    HardyFunction::from_fn(cfg, |z| (ONE + z).sqrt())
}

/// `z̄^{n/2}` with the branch cut at `-1`.
pub fn half_integer_symbol(cfg: GridConfig, n: i64) -> ToeplitzSymbol {
    ToeplitzSymbol::half_power(cfg, -n, -1)
}

#[derive(Clone, Debug)]
pub enum HalfIntegerKernel {
    Trivial {
        /// Residual of `(1+z)^{1/2}` under the symbol.
        residual: f64,
        /// Numerical kernel dimension at the default section size.
        numerical_dimension: Option<usize>,
    },
    Finite {
        rep: FiniteKernelRep,
        /// Residual of `(1+z)^{1/2}·z^N`, which lies outside the kernel.
        non_membership_residual: f64,
    },
}

/// Kernel of `T_{z̄^{n/2}}`: trivial for `n = 1`, otherwise
/// `(1+z)^{1/2}·K_{z^N}` with `N = (n−1)/2`.
pub fn halfinteger_symbol_kernel(n: i64, cfg: GridConfig) -> Result<HalfIntegerKernel, HayashiError> {
    if n <= 0 {
        return Err(HayashiError::NonpositiveN { n });
    }
    if n % 2 == 0 {
        return Err(HayashiError::EvenN { n });
    }
    let g = half_integer_symbol(cfg, n);
    let w = half_power_multiplier(cfg);
    let big_n = ((n - 1) / 2) as usize;
    if big_n == 0 {
        let residual = residual_in_kernel(&g, &w)?;
        let numerical_dimension = match numerical_kernel(&g, DEFAULT_SECTION) {
            Ok(k) => Some(k.dimension),
            Err(KernelError::UncertainDimension(_)) => None,
            Err(e) => return Err(e.into()),
        };
        return Ok(HalfIntegerKernel::Trivial { residual, numerical_dimension });
    }
    let non_membership_residual = residual_in_kernel(&g, &w.shift(big_n))?;
    let rep = FiniteKernelRep::new(w, big_n, Some(g))?;
    Ok(HalfIntegerKernel::Finite { rep, non_membership_residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub angle: f64,
    pub exponent: Complex64,
    pub left: Complex64,
    pub right: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpAnalysis {
    pub jumps: Vec<Jump>,
    /// No exponent has real part `−1/2`.
    pub regular2: bool,
}

fn extrapolate_to_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut acc = ZERO;
    for i in 0..xs.len() {
        let mut l = 1.0;
        for j in 0..xs.len() {
            if i != j {
                l *= (0.0 - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += ys[i] * l;
    }
    acc
}

/// One-sided limits at `angle` from the four nearest samples on each side.
pub fn one_sided_limits(g: &BoundaryFunction, angle: f64) -> Result<(Complex64, Complex64), HayashiError> {
    let cfg = g.config();
    let m = cfg.grid_size as i64;
    let h = 2.0 * PI / m as f64;
    let c = angle.rem_euclid(2.0 * PI);
    let first_right = (c / h - 0.5).ceil() as i64;
    let s = g.samples();
    let side = |dir: i64| -> Result<Complex64, HayashiError> {
        let idx: Vec<i64> = (0..4).map(|j| if dir > 0 { first_right + j } else { first_right - 1 - j }).collect();
        let xs: Vec<f64> = idx.iter().map(|&k| (k as f64 + 0.5) * h - c).collect();
        let ys: Vec<Complex64> = idx.iter().map(|&k| s[k.rem_euclid(m) as usize]).collect();
        let four = extrapolate_to_zero(&xs, &ys);
        let three = extrapolate_to_zero(&xs[..3], &ys[..3]);
        let spread = (four - three).norm();
        if spread > 1e-6 * four.norm().max(1.0) || four.norm() < 1e-12 {
            return Err(HayashiError::LimitEstimationFailed { angle, spread });
        }
        Ok(four)
    };
    Ok((side(-1)?, side(1)?))
}

/// `α = log(g(c⁻)/g(c⁺)) / (2πi)` at each jump, with `Re α ∈ [−1/2, 1/2)`.
pub fn piecewise_jump_exponents(g: &ToeplitzSymbol) -> Result<JumpAnalysis, HayashiError> {
    let mut jumps = Vec::new();
    for &angle in &g.jump_points {
        let (left, right) = one_sided_limits(&g.boundary, angle)?;
        let q = left / right;
        let mut re = q.arg() / (2.0 * PI);
        let im = -q.norm().ln() / (2.0 * PI);
        re -= (re + 0.5 + 1e-9).floor();
        jumps.push(Jump { angle, exponent: Complex64::new(re, im), left, right });
    }
    let regular2 = !jumps.iter().any(|j| (j.exponent.re + 0.5).abs() <= 1e-6);
    Ok(JumpAnalysis { jumps, regular2 })
}

/// Samples of `q/P` for a polynomial `q`, an element of `K_{zα}`.
pub fn alpha_space_element(cfg: GridConfig, q: &[Complex64], p: &[Complex64]) -> BoundaryFunction {
    BoundaryFunction::from_fn(cfg, |z| eval_poly(q, z) / eval_poly(p, z))
}

/// Least-squares coefficients of `w` against `{w·z^j : 1 ≤ j < n}` from a
/// dense Gram matrix; used as an oracle for the normal equations.
pub fn projection_coefficients(w: &HardyFunction, n: usize) -> Option<Vec<Complex64>> {
    let tail: Vec<BoundaryFunction> = (1..n).map(|j| w.shift(j).into_boundary()).collect();
    if tail.is_empty() {
        return Some(Vec::new());
    }
    let m = w.config().grid_size;
    let a = DMatrix::from_fn(m, tail.len(), |r, c| tail[c].samples()[r]);
    let b = DVector::from_iterator(m, w.samples().iter().cloned());
    a.svd(true, true).solve(&b, 1e-14).ok().map(|x| x.iter().cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> GridConfig {
        GridConfig::default()
    }

    #[test]
    fn monomial_kernel_is_already_isometric() {
        let w = HardyFunction::constant(cfg(), ONE);
        let rep = FiniteKernelRep::new(w, 4, Some(ToeplitzSymbol::monomial(cfg(), -4))).unwrap();
        assert!(rep.max_residual() < 1e-14);
        let iso = isometric_multiplier_finite(&rep).unwrap();
        assert!(iso.u.max_distance(&BoundaryFunction::constant(cfg(), ONE)) < 1e-12);
        assert!(iso.isometry_defect < 1e-12);
        assert!(iso.alpha_boundary.max_distance(&BoundaryFunction::monomial(cfg(), 3)) < 1e-12);
    }

    #[test]
    fn gram_schmidt_constant_for_seven_halves() {
        let rep = match halfinteger_symbol_kernel(7, cfg()).unwrap() {
            HalfIntegerKernel::Finite { rep, .. } => rep,
            _ => panic!("expected a finite kernel"),
        };
        let iso = isometric_multiplier_finite(&rep).unwrap();
        let a = Complex64::new(0.2, 0.4);
        let params = iso.factor_parameters.unwrap();
        let err = params.iter().map(|p| (p - a).norm().min((p - a.conj()).norm())).fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
        assert!(iso.isometry_defect < 1e-4);
        assert!((iso.u.norm() - 1.0).abs() < 1e-12);
        assert!(iso.u.at_origin().re > 0.0);
        assert!(iso.alpha_defect < 1e-10);
    }

    #[test]
    fn half_integer_family() {
        match halfinteger_symbol_kernel(1, cfg()).unwrap() {
            HalfIntegerKernel::Trivial { residual, .. } => assert!(residual > 0.5),
            _ => panic!("n = 1 is trivial"),
        }
        for n in [3, 5, 7, 9] {
            match halfinteger_symbol_kernel(n, cfg()).unwrap() {
                HalfIntegerKernel::Finite { rep, non_membership_residual } => {
                    assert_eq!(rep.degree_n as i64, (n - 1) / 2);
                    assert!(rep.max_residual() <= 1e-4, "{}", rep.max_residual());
                    assert!(non_membership_residual >= 1e-2);
                }
                _ => panic!("n = {n} is finite"),
            }
        }
        assert!(matches!(halfinteger_symbol_kernel(4, cfg()), Err(HayashiError::EvenN { n: 4 })));
    }

    #[test]
    fn herglotz_of_linear_outer() {
        let s = 2f64.sqrt();
        let u = HardyFunction::from_fn(cfg(), |z| (ONE + z) / s);
        let alpha = BoundaryFunction::monomial(cfg(), 1);
        let h = herglotz_parameters(&u, &alpha).unwrap();
        assert!(h.herglotz.max_distance(&BoundaryFunction::from_fn(cfg(), |z| ONE + z)) < 1e-12);
        assert!(h.b.max_distance(&BoundaryFunction::from_fn(cfg(), |z| z / (2.0 + z))) < 1e-12);
        assert!(h.a.max_distance(&BoundaryFunction::from_fn(cfg(), |z| (ONE + z) * s / (2.0 + z))) < 1e-12);
        assert!(h.b_sup <= 1.0 + 1e-12);
        let one = HardyFunction::constant(cfg(), ONE);
        let h = herglotz_parameters(&one, &alpha).unwrap();
        assert!(h.b.sup_norm() < 1e-14 && h.u_alpha.max_distance(one.boundary()) < 1e-14);
        let neg = HardyFunction::constant(cfg(), -ONE);
        assert!(matches!(herglotz_parameters(&neg, &alpha), Err(HayashiError::NonpositiveAtZero { .. })));
    }

    #[test]
    fn jump_exponents() {
        let g = ToeplitzSymbol::half_circle_sign(cfg());
        let j = piecewise_jump_exponents(&g).unwrap();
        assert_eq!(j.jumps.len(), 2);
        for jump in &j.jumps {
            assert!((jump.exponent - Complex64::new(-0.5, 0.0)).norm() < 1e-9);
        }
        assert!(!j.regular2);
        let g = ToeplitzSymbol::half_power(cfg(), 1, -1);
        let j = piecewise_jump_exponents(&g).unwrap();
        assert_eq!(j.jumps.len(), 1);
        assert!((j.jumps[0].exponent.re + 0.5).abs() < 1e-9);
        let smooth = ToeplitzSymbol::new(BoundaryFunction::from_fn(cfg(), |z| 2.0 + z));
        let j = piecewise_jump_exponents(&smooth).unwrap();
        assert!(j.jumps.is_empty() && j.regular2);
    }
}
