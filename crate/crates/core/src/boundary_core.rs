//! Sampled functions on the unit circle.
//!
//! A [`BoundaryFunction`] stores `grid_size` samples at the half-cell offset
//! nodes `exp(i·2π(k + 1/2)/M)`. The offset keeps every node away from `±1`,
//! which is where the branch cuts, jumps and singular atoms of the standard
//! examples live. Fourier coefficients are derived lazily with an FFT and a
//! phase correction for the offset.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Deref, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundaryError {
    #[error("aliasing overflow: tail energy {tail:.3e} above index N exceeds {limit:.3e}")]
    AliasingOverflow { tail: f64, limit: f64 },
    #[error("evaluation point |z| = {modulus} is too close to the unit circle")]
    EvaluationTooCloseToBoundary { modulus: f64 },
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("function is not analytic: largest negative coefficient {defect:.3e}")]
    NotAnalytic { defect: f64 },
    #[error("invalid grid configuration: {0}")]
    InvalidConfig(String),
}

/// Grid and tolerance settings shared by every sampled function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub grid_size: usize,
    pub truncation: usize,
    pub tol_coeff: f64,
    pub tol_residual: f64,
    pub tol_outer: f64,
    /// Relaxed residual tier for symbols with branch cuts or jumps.
    pub tol_branch: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            grid_size: 4096,
            truncation: 256,
            tol_coeff: 1e-10,
            tol_residual: 1e-7,
            tol_outer: 1e-3,
            tol_branch: 1e-4,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<(), BoundaryError> {
        if !self.grid_size.is_power_of_two() || self.grid_size < 8 {
            return Err(BoundaryError::InvalidConfig(format!(
                "grid_size {} is not a power of two >= 8",
                self.grid_size
            )));
        }
        if self.truncation == 0 || self.grid_size < 4 * self.truncation + 4 {
            return Err(BoundaryError::InvalidConfig(format!(
                "grid_size {} must be at least 4*truncation+4 = {}",
                self.grid_size,
                4 * self.truncation + 4
            )));
        }
        let tols = [
            ("tol_coeff", self.tol_coeff),
            ("tol_residual", self.tol_residual),
            ("tol_outer", self.tol_outer),
            ("tol_branch", self.tol_branch),
        ];
        for (name, v) in tols {
            if !(v > 0.0 && v.is_finite()) {
                return Err(BoundaryError::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Angle of node `k`, in `(0, 2π)`.
    pub fn angle(&self, k: usize) -> f64 {
        2.0 * PI * (k as f64 + 0.5) / self.grid_size as f64
    }

    pub fn point(&self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.angle(k))
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.grid_size).map(|k| self.point(k)).collect()
    }

    /// Storage slot of Fourier index `n` in FFT order.
    pub fn slot(&self, n: i64) -> usize {
        n.rem_euclid(self.grid_size as i64) as usize
    }

    /// Fourier index stored in slot `k`; slot `M/2` carries index `-M/2`.
    pub fn index(&self, k: usize) -> i64 {
        let m = self.grid_size;
        if k < m / 2 {
            k as i64
        } else {
            k as i64 - m as i64
        }
    }
}

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|p| {
        let mut p = p.borrow_mut();
        let (planner, cache) = &mut *p;
        cache
            .entry((len, inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    })
}

fn samples_to_coeffs(cfg: &GridConfig, samples: &[Complex64]) -> Vec<Complex64> {
    let m = cfg.grid_size;
    let mut buf = samples.to_vec();
    plan(m, false).process(&mut buf);
    let scale = 1.0 / m as f64;
    for (k, c) in buf.iter_mut().enumerate() {
        let n = cfg.index(k) as f64;
        *c *= Complex64::from_polar(scale, -n * PI / m as f64);
    }
    buf
}

fn coeffs_to_samples(cfg: &GridConfig, coeffs: &[Complex64]) -> Vec<Complex64> {
    let m = cfg.grid_size;
    let mut buf: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * Complex64::from_polar(1.0, cfg.index(k) as f64 * PI / m as f64))
        .collect();
    plan(m, true).process(&mut buf);
    buf
}

/// Equispaced samples on the circle with a cached Fourier view.
#[derive(Clone)]
pub struct BoundaryFunction {
    cfg: GridConfig,
    samples: Vec<Complex64>,
    coeffs: OnceLock<Vec<Complex64>>,
}

impl fmt::Debug for BoundaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryFunction")
            .field("grid_size", &self.cfg.grid_size)
            .field("norm", &self.norm())
            .finish()
    }
}

impl BoundaryFunction {
    pub fn from_samples(cfg: GridConfig, samples: Vec<Complex64>) -> Self {
        assert_eq!(samples.len(), cfg.grid_size, "sample count must equal grid_size");
        BoundaryFunction { cfg, samples, coeffs: OnceLock::new() }
    }

    pub fn from_fn(cfg: GridConfig, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_samples(cfg, (0..cfg.grid_size).map(|k| f(cfg.point(k))).collect())
    }

    /// Samples `f(t)` with `t` in `(-π, π)`.
    pub fn from_angle_fn(cfg: GridConfig, f: impl Fn(f64) -> Complex64) -> Self {
        let s = (0..cfg.grid_size)
            .map(|k| {
                let t = cfg.angle(k);
                f(if t > PI { t - 2.0 * PI } else { t })
            })
            .collect();
        Self::from_samples(cfg, s)
    }

    /// Builds a function from full FFT-ordered coefficients.
    pub fn from_coeffs(cfg: GridConfig, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), cfg.grid_size);
        let samples = coeffs_to_samples(&cfg, &coeffs);
        let lock = OnceLock::new();
        let _ = lock.set(coeffs);
        BoundaryFunction { cfg, samples, coeffs: lock }
    }

    pub fn from_terms(cfg: GridConfig, terms: &[(i64, Complex64)]) -> Self {
        let mut c = vec![ZERO; cfg.grid_size];
        for &(n, v) in terms {
            c[cfg.slot(n)] += v;
        }
        Self::from_coeffs(cfg, c)
    }

    /// `Σ c_j z^j` for the given Taylor coefficients.
    pub fn polynomial(cfg: GridConfig, coeffs: &[Complex64]) -> Self {
        let terms: Vec<_> = coeffs.iter().enumerate().map(|(j, &c)| (j as i64, c)).collect();
        Self::from_terms(cfg, &terms)
    }

    pub fn constant(cfg: GridConfig, c: Complex64) -> Self {
        Self::from_samples(cfg, vec![c; cfg.grid_size])
    }

    pub fn monomial(cfg: GridConfig, n: i64) -> Self {
        Self::from_fn(cfg, |z| z.powi(n as i32))
    }

    pub fn config(&self) -> &GridConfig {
        &self.cfg
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// All `grid_size` coefficients in FFT order.
    pub fn coeffs(&self) -> &[Complex64] {
        self.coeffs.get_or_init(|| samples_to_coeffs(&self.cfg, &self.samples))
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        let half = (self.cfg.grid_size / 2) as i64;
        if n < -half || n >= half {
            return ZERO;
        }
        self.coeffs()[self.cfg.slot(n)]
    }

    /// Coefficients `c_{-N} .. c_N`.
    pub fn coeff_window(&self) -> Vec<Complex64> {
        let n = self.cfg.truncation as i64;
        (-n..=n).map(|j| self.coeff(j)).collect()
    }

    /// Taylor coefficients `c_0 .. c_{len-1}`.
    pub fn taylor(&self, len: usize) -> Vec<Complex64> {
        (0..len as i64).map(|j| self.coeff(j)).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.cfg.grid_size as f64
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Largest `| |f| - 1 |` over the grid.
    pub fn unimodular_defect(&self) -> f64 {
        self.samples.iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest modulus among negative-index coefficients.
    pub fn negative_defect(&self) -> f64 {
        let c = self.coeffs();
        let m = self.cfg.grid_size;
        c[m / 2..].iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// L² norm of the negative-index part.
    pub fn negative_part_norm(&self) -> f64 {
        let c = self.coeffs();
        let m = self.cfg.grid_size;
        c[m / 2..].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Energy carried by indices with `|n| > N`.
    pub fn tail_energy(&self) -> f64 {
        let n = self.cfg.truncation as i64;
        self.coeffs()
            .iter()
            .enumerate()
            .filter(|(k, _)| self.cfg.index(*k).abs() > n)
            .map(|(_, c)| c.norm_sqr())
            .sum()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_samples(self.cfg, self.samples.iter().map(|&s| f(s)).collect())
    }

    /// Samplewise combination with another function on the same grid.
    pub fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_same_grid(self, other);
        Self::from_samples(
            self.cfg,
            self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    pub fn conj(&self) -> Self {
        self.map(|s| s.conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|s| s * c)
    }

    pub fn recip(&self) -> Self {
        self.map(|s| s.inv())
    }

    pub fn abs(&self) -> Self {
        self.map(|s| Complex64::new(s.norm(), 0.0))
    }

    /// Multiplication by `z^n`.
    pub fn shift(&self, n: i64) -> Self {
        let cfg = self.cfg;
        Self::from_samples(
            cfg,
            self.samples
                .iter()
                .enumerate()
                .map(|(k, &s)| s * Complex64::from_polar(1.0, n as f64 * cfg.angle(k)))
                .collect(),
        )
    }

    pub fn mean(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() / self.cfg.grid_size as f64
    }

    /// Largest samplewise distance to `other`.
    pub fn max_distance(&self, other: &Self) -> f64 {
        assert_same_grid(self, other);
        self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// L² distance to `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

fn assert_same_grid(a: &BoundaryFunction, b: &BoundaryFunction) {
    assert_eq!(a.cfg.grid_size, b.cfg.grid_size, "operands live on different grids");
}

macro_rules! samplewise_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&BoundaryFunction> for &BoundaryFunction {
            type Output = BoundaryFunction;
            fn $m(self, rhs: &BoundaryFunction) -> BoundaryFunction {
                self.zip(rhs, |a, b| a $op b)
            }
        }
        impl $tr<BoundaryFunction> for BoundaryFunction {
            type Output = BoundaryFunction;
            fn $m(self, rhs: BoundaryFunction) -> BoundaryFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BoundaryFunction> for BoundaryFunction {
            type Output = BoundaryFunction;
            fn $m(self, rhs: &BoundaryFunction) -> BoundaryFunction {
                (&self).$m(rhs)
            }
        }
        impl $tr<Complex64> for &BoundaryFunction {
            type Output = BoundaryFunction;
            fn $m(self, rhs: Complex64) -> BoundaryFunction {
                self.map(|a| a $op rhs)
            }
        }
        impl $tr<Complex64> for BoundaryFunction {
            type Output = BoundaryFunction;
            fn $m(self, rhs: Complex64) -> BoundaryFunction {
                self.map(|a| a $op rhs)
            }
        }
    };
}

samplewise_op!(Add, add, +);
samplewise_op!(Sub, sub, -);
samplewise_op!(Mul, mul, *);
samplewise_op!(Div, div, /);

impl Neg for &BoundaryFunction {
    type Output = BoundaryFunction;
    fn neg(self) -> BoundaryFunction {
        self.map(|a| -a)
    }
}

/// An element of H²: a boundary function with recorded analyticity defect.
///
/// `defect` is the largest negative-index coefficient. Functions produced by
/// [`project_plus`] have defect zero; functions that are analytic in theory
/// but under-resolved on the grid (singular atoms, branch cuts) keep their
/// measured defect so callers can choose a tolerance tier.
#[derive(Clone, Debug)]
pub struct HardyFunction {
    f: BoundaryFunction,
    defect: f64,
}

impl Deref for HardyFunction {
    type Target = BoundaryFunction;
    fn deref(&self) -> &BoundaryFunction {
        &self.f
    }
}

impl HardyFunction {
    /// Validates `|c_n| <= tol_coeff·max(1, ‖f‖)` for every `n < 0`.
    pub fn new(f: BoundaryFunction) -> Result<Self, BoundaryError> {
        let h = Self::assume(f);
        if h.is_resolved() {
            Ok(h)
        } else {
            Err(BoundaryError::NotAnalytic { defect: h.defect })
        }
    }

    /// Wraps `f` without rejecting it; the defect is still measured.
    pub fn assume(f: BoundaryFunction) -> Self {
        let defect = f.negative_defect();
        HardyFunction { f, defect }
    }

    pub fn polynomial(cfg: GridConfig, coeffs: &[Complex64]) -> Self {
        HardyFunction { f: BoundaryFunction::polynomial(cfg, coeffs), defect: 0.0 }
    }

    pub fn from_fn(cfg: GridConfig, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::assume(BoundaryFunction::from_fn(cfg, f))
    }

    pub fn constant(cfg: GridConfig, c: Complex64) -> Self {
        HardyFunction { f: BoundaryFunction::constant(cfg, c), defect: 0.0 }
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    /// True when the negative coefficients are below `tol_coeff` (scaled).
    pub fn is_resolved(&self) -> bool {
        self.defect <= self.f.cfg.tol_coeff * self.f.norm().max(1.0)
    }

    pub fn boundary(&self) -> &BoundaryFunction {
        &self.f
    }

    pub fn into_boundary(self) -> BoundaryFunction {
        self.f
    }

    pub fn scale(&self, c: Complex64) -> Self {
        HardyFunction { f: self.f.scale(c), defect: self.defect * c.norm() }
    }

    pub fn normalized(&self) -> Self {
        self.scale(Complex64::new(1.0 / self.norm(), 0.0))
    }

    /// Value at the origin, `c_0`.
    pub fn at_origin(&self) -> Complex64 {
        self.f.coeff(0)
    }

    /// Product of two analytic functions; the defect is re-measured.
    pub fn times(&self, other: &HardyFunction) -> Self {
        Self::assume(&self.f * &other.f)
    }

    pub fn plus(&self, other: &HardyFunction) -> Self {
        Self::assume(&self.f + &other.f)
    }

    pub fn minus(&self, other: &HardyFunction) -> Self {
        Self::assume(&self.f - &other.f)
    }

    pub fn shift(&self, n: usize) -> Self {
        Self::assume(self.f.shift(n as i64))
    }
}

/// Riesz projection: zero every negative-index coefficient.
pub fn project_plus(f: &BoundaryFunction) -> HardyFunction {
    let cfg = f.cfg;
    let mut c = f.coeffs().to_vec();
    for v in &mut c[cfg.grid_size / 2..] {
        *v = ZERO;
    }
    HardyFunction { f: BoundaryFunction::from_coeffs(cfg, c), defect: 0.0 }
}

/// Projection onto the closed span of `z̄, z̄², …`.
pub fn project_minus(f: &BoundaryFunction) -> BoundaryFunction {
    let cfg = f.cfg;
    let mut c = f.coeffs().to_vec();
    for v in &mut c[..cfg.grid_size / 2] {
        *v = ZERO;
    }
    BoundaryFunction::from_coeffs(cfg, c)
}

/// Samplewise product with the aliasing guard on the tail above index N.
pub fn pointwise_multiply(
    f: &BoundaryFunction,
    g: &BoundaryFunction,
) -> Result<BoundaryFunction, BoundaryError> {
    let p = f * g;
    let tail = p.tail_energy();
    let tol = f.cfg.tol_coeff;
    if tail > 1e3 * tol {
        return Err(BoundaryError::AliasingOverflow { tail, limit: 1e3 * tol });
    }
    if tail > tol {
        log::warn!("product tail energy {tail:.3e} above index N exceeds tol_coeff");
    }
    Ok(p)
}

pub fn complex_conjugate(f: &BoundaryFunction) -> BoundaryFunction {
    f.conj()
}

/// `Σ_n c_n(f)·conj(c_n(g))` over the whole discrete spectrum, computed as
/// the sample mean of `f·ḡ`.
pub fn inner_product(f: &BoundaryFunction, g: &BoundaryFunction) -> Complex64 {
    assert_same_grid(f, g);
    f.samples.iter().zip(&g.samples).map(|(a, b)| a * b.conj()).sum::<Complex64>()
        / f.cfg.grid_size as f64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskValue {
    pub value: Complex64,
    /// `‖h‖·|z|^{N+1}/(1−|z|)`.
    pub error_bound: f64,
}

/// Partial Taylor sum `Σ_{n≤N} c_n z^n`.
pub fn evaluate_in_disk(h: &HardyFunction, z: Complex64) -> Result<DiskValue, BoundaryError> {
    let cfg = h.cfg;
    let r = z.norm();
    if r > 1.0 - 10.0 * cfg.tol_coeff {
        return Err(BoundaryError::EvaluationTooCloseToBoundary { modulus: r });
    }
    let n = cfg.truncation;
    let mut acc = ZERO;
    for j in (0..=n as i64).rev() {
        acc = acc * z + h.coeff(j);
    }
    Ok(DiskValue { value: acc, error_bound: h.norm() * r.powi(n as i32 + 1) / (1.0 - r) })
}

/// Relative modulus below which samples count as numerical zeros.
pub const LOG_NOISE_FLOOR: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OuterVerdict {
    Outer,
    NotOuter,
    Borderline,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OuterCertificate {
    pub verdict: OuterVerdict,
    pub log_modulus_at_origin: f64,
    pub mean_log_modulus: f64,
    pub gap: f64,
    pub clamped_fraction: f64,
}

/// Jensen test: an outer function has `log|h(0)|` equal to the circle mean
/// of `log|h|`. Logs are clamped at `LOG_NOISE_FLOOR` relative to `sup|h|`.
pub fn outer_test(h: &HardyFunction) -> Result<OuterCertificate, BoundaryError> {
    let cfg = h.cfg;
    let sup = h.sup_norm();
    if sup == 0.0 || h.norm() <= cfg.tol_coeff * 1e-3 {
        return Err(BoundaryError::ZeroFunction);
    }
    let floor = LOG_NOISE_FLOOR.ln();
    let clamp = |v: f64| (v / sup).ln().max(floor);
    let mut clamped = 0usize;
    let mut sum = 0.0;
    for s in h.samples() {
        let l = (s.norm() / sup).ln();
        if l < floor {
            clamped += 1;
        }
        sum += l.max(floor);
    }
    let mean = sum / cfg.grid_size as f64;
    let at0 = clamp(h.at_origin().norm());
    let gap = mean - at0;
    let verdict = if gap.abs() < cfg.tol_outer {
        OuterVerdict::Outer
    } else if gap.abs() > 10.0 * cfg.tol_outer {
        OuterVerdict::NotOuter
    } else {
        OuterVerdict::Borderline
    };
    Ok(OuterCertificate {
        verdict,
        log_modulus_at_origin: at0 + sup.ln(),
        mean_log_modulus: mean + sup.ln(),
        gap,
        clamped_fraction: clamped as f64 / cfg.grid_size as f64,
    })
}
