//! Finite sections of Toeplitz operators and numerical kernels.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary_core::{project_plus, BoundaryFunction, GridConfig, HardyFunction, ONE, ZERO};
use crate::factorization::{inner_outer, FactorError};
use crate::inner_functions::InnerFunction;
use crate::linalg::svd_ascending;

/// Singular values below this fraction of the largest are kernel candidates.
pub const KERNEL_CEILING: f64 = 1e-2;
/// Minimal ratio between the first rejected and last accepted singular value.
pub const GAP_RATIO: f64 = 10.0;
/// Default finite-section size.
pub const DEFAULT_SECTION: usize = 128;

#[derive(Debug, Error, Clone)]
pub enum KernelError {
    #[error("section size {size} exceeds truncation {truncation}")]
    SizeExceedsTruncation { size: usize, truncation: usize },
    #[error("kernel dimension uncertain: gap ratio {:.3} below {GAP_RATIO}", .0.gap)]
    UncertainDimension(Box<KernelBasis>),
    #[error("function is identically zero")]
    ZeroFunction,
    #[error(transparent)]
    Factorisation(#[from] FactorError),
}

/// Accuracy tier of a symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tier {
    /// Smooth symbols resolved on the grid.
    Standard,
    /// Jumps or branch cuts: coefficients decay algebraically.
    Branch,
    /// Singular inner factors: spectrum not resolved by the grid.
    Singular,
}

#[derive(Clone, Debug)]
pub struct ToeplitzSymbol {
    pub boundary: BoundaryFunction,
    pub unimodular: bool,
    /// Angles in `(-π, π]` of the discontinuities.
    pub jump_points: Vec<f64>,
    pub tier: Tier,
}

impl ToeplitzSymbol {
    pub fn new(boundary: BoundaryFunction) -> Self {
        let unimodular = boundary.unimodular_defect() <= 10.0 * boundary.config().tol_coeff;
        ToeplitzSymbol { boundary, unimodular, jump_points: Vec::new(), tier: Tier::Standard }
    }

    pub fn with_jumps(mut self, jumps: Vec<f64>) -> Self {
        if !jumps.is_empty() && self.tier == Tier::Standard {
            self.tier = Tier::Branch;
        }
        self.jump_points = jumps;
        self
    }

    pub fn with_tier(mut self, tier: Tier) -> Self {
        self.tier = tier;
        self
    }

    /// `conj(θ)`, whose kernel is the model space `K_θ`.
    pub fn conj_inner(theta: &InnerFunction) -> Self {
        let tier = if theta.has_atoms() { Tier::Singular } else { Tier::Standard };
        ToeplitzSymbol::new(theta.boundary().conj()).with_tier(tier)
    }

    /// `z^n` for any integer `n`.
    pub fn monomial(cfg: GridConfig, n: i64) -> Self {
        ToeplitzSymbol::new(BoundaryFunction::monomial(cfg, n))
    }

    /// `z^{n/2}` with the principal branch cut at `-1` (`cut = -1`) or at `1`.
    pub fn half_power(cfg: GridConfig, n: i64, cut: i32) -> Self {
        let b = if cut < 0 {
            BoundaryFunction::from_angle_fn(cfg, |t| Complex64::from_polar(1.0, n as f64 * t / 2.0))
        } else {
            BoundaryFunction::from_fn(cfg, |z| {
                let t = z.arg().rem_euclid(2.0 * PI);
                Complex64::from_polar(1.0, n as f64 * t / 2.0)
            })
        };
        let jumps = if n % 2 != 0 { vec![if cut < 0 { PI } else { 0.0 }] } else { Vec::new() };
        ToeplitzSymbol::new(b).with_jumps(jumps)
    }

    /// `+1` on the upper half circle, `-1` on the lower one.
    pub fn half_circle_sign(cfg: GridConfig) -> Self {
        let b = BoundaryFunction::from_angle_fn(cfg, |t| if t > 0.0 { ONE } else { -ONE });
        ToeplitzSymbol::new(b).with_jumps(vec![0.0, PI])
    }

    pub fn config(&self) -> &GridConfig {
        self.boundary.config()
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.boundary.coeff(n)
    }

    /// Residual threshold for kernel membership under this symbol.
    pub fn residual_tolerance(&self) -> f64 {
        match self.tier {
            Tier::Standard => self.config().tol_residual,
            Tier::Branch | Tier::Singular => self.config().tol_branch,
        }
    }

    /// Threshold on negative Fourier coefficients for analyticity checks.
    pub fn coefficient_tolerance(&self) -> f64 {
        match self.tier {
            Tier::Standard => self.config().tol_coeff,
            Tier::Branch | Tier::Singular => self.config().tol_branch,
        }
    }

    pub fn times(&self, other: &ToeplitzSymbol) -> ToeplitzSymbol {
        let mut jumps = self.jump_points.clone();
        for &j in &other.jump_points {
            if !jumps.iter().any(|&k| (k - j).abs() < 1e-12) {
                jumps.push(j);
            }
        }
        let tier = worst_tier(self.tier, other.tier);
        ToeplitzSymbol::new(&self.boundary * &other.boundary).with_jumps(jumps).with_tier(tier)
    }

    pub fn conj(&self) -> ToeplitzSymbol {
        ToeplitzSymbol {
            boundary: self.boundary.conj(),
            unimodular: self.unimodular,
            jump_points: self.jump_points.clone(),
            tier: self.tier,
        }
    }

    pub fn scale(&self, c: Complex64) -> ToeplitzSymbol {
        ToeplitzSymbol::new(self.boundary.scale(c))
            .with_jumps(self.jump_points.clone())
            .with_tier(self.tier)
    }
}

pub fn worst_tier(a: Tier, b: Tier) -> Tier {
    use Tier::*;
    match (a, b) {
        (Singular, _) | (_, Singular) => Singular,
        (Branch, _) | (_, Branch) => Branch,
        _ => Standard,
    }
}

/// Orthonormal basis of a numerical kernel with its certificate.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub vectors: Vec<HardyFunction>,
    /// `‖P⁺(g·v)‖` against the full symbol, one per vector.
    pub residuals: Vec<f64>,
    pub dimension: usize,
    /// First rejected over last accepted singular value.
    pub gap: f64,
    /// Normalised singular values of the section, ascending.
    pub singular_values: Vec<f64>,
    pub section_size: usize,
    pub tolerance: f64,
    /// Every residual is within `tolerance`.
    pub verified: bool,
}

impl KernelBasis {
    pub fn is_certain(&self) -> bool {
        self.gap >= GAP_RATIO
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    pub fn boundaries(&self) -> Vec<BoundaryFunction> {
        self.vectors.iter().map(|v| v.boundary().clone()).collect()
    }
}

pub fn toeplitz_matrix(g: &ToeplitzSymbol, size: usize) -> Result<DMatrix<Complex64>, KernelError> {
    let truncation = g.config().truncation;
    if size > truncation {
        return Err(KernelError::SizeExceedsTruncation { size, truncation });
    }
    Ok(DMatrix::from_fn(size, size, |j, k| g.coeff(j as i64 - k as i64)))
}

/// `‖P⁺(g·f)‖ / ‖f‖`.
pub fn residual_in_kernel(g: &ToeplitzSymbol, f: &BoundaryFunction) -> Result<f64, KernelError> {
    let n = f.norm();
    if n == 0.0 {
        return Err(KernelError::ZeroFunction);
    }
    Ok(project_plus(&(&g.boundary * f)).norm() / n)
}

/// Null space of the finite section, sized by a singular-value gap and
/// re-verified against the full symbol.
///
/// The section keeps `2·size` rows so that a column block cannot lose its
/// image past the last row (the square section of `T_z` is singular).
///
/// Candidates are singular values at most `KERNEL_CEILING·σ_max`; the
/// dimension is their count and it is certain when the next singular value
/// is at least `GAP_RATIO` times larger (for an empty kernel, when `σ_min`
/// is `GAP_RATIO` times the ceiling).
pub fn numerical_kernel(g: &ToeplitzSymbol, size: usize) -> Result<KernelBasis, KernelError> {
    let cfg = *g.config();
    if size > cfg.truncation {
        return Err(KernelError::SizeExceedsTruncation { size, truncation: cfg.truncation });
    }
    let rows = (2 * size).min(cfg.grid_size / 2);
    let t = DMatrix::from_fn(rows, size, |j, k| g.coeff(j as i64 - k as i64));
    let (s, v) = svd_ascending(&t);
    let smax = s.last().cloned().unwrap_or(0.0);
    let norm: Vec<f64> = s.iter().map(|x| if smax > 0.0 { x / smax } else { 0.0 }).collect();
    let d = norm.iter().take_while(|&&x| x <= KERNEL_CEILING).count();
    let gap = if smax == 0.0 || d == size {
        1.0
    } else if d == 0 {
        norm[0] / KERNEL_CEILING
    } else if norm[d - 1] == 0.0 {
        f64::INFINITY
    } else {
        norm[d] / norm[d - 1]
    };
    let mut vectors = Vec::with_capacity(d);
    let mut residuals = Vec::with_capacity(d);
    for col in 0..d {
        let coeffs: Vec<Complex64> = (0..size).map(|r| v[(r, col)]).collect();
        let h = HardyFunction::polynomial(cfg, &coeffs);
        residuals.push(residual_in_kernel(g, &h)?);
        vectors.push(h);
    }
    let tolerance = g.residual_tolerance();
    let verified = residuals.iter().all(|&r| r <= tolerance);
    if !verified {
        log::warn!(
            "kernel vectors not verified at tolerance {tolerance:.1e}: max residual {:.3e}",
            residuals.iter().cloned().fold(0.0, f64::max)
        );
    }
    let basis = KernelBasis {
        vectors,
        residuals,
        dimension: d,
        gap,
        singular_values: norm,
        section_size: size,
        tolerance,
        verified,
    };
    if basis.is_certain() {
        Ok(basis)
    } else {
        Err(KernelError::UncertainDimension(Box::new(basis)))
    }
}

/// Unimodular symbol `z̄·conj(I)·conj(O)/O` whose kernel is the smallest
/// Toeplitz kernel containing `f = I·O`.
pub fn minimal_kernel_symbol(f: &HardyFunction) -> Result<ToeplitzSymbol, KernelError> {
    let pair = inner_outer(f)?;
    let cfg = *f.config();
    let zb = BoundaryFunction::monomial(cfg, -1);
    let o = pair.outer.boundary();
    let sym = &(&zb * &pair.inner.conj()) * &(&o.conj() / o);
    let sym = sym.map(|v| v / v.norm());
    let g = ToeplitzSymbol::new(sym);
    let r = residual_in_kernel(&g, f)?;
    if r > g.residual_tolerance() {
        return Err(FactorError::FactorisationFailed(format!(
            "minimal symbol leaves residual {r:.3e}"
        ))
        .into());
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Inclusion {
    Included,
    NotIncluded,
    Uncertain,
}

#[derive(Clone, Debug)]
pub struct InclusionReport {
    pub verdict: Inclusion,
    pub dimension: usize,
    pub max_residual: f64,
}

/// Is `ker T_h ⊂ ker T_g`? Each basis vector of `ker T_h` is tested under `g`.
pub fn kernel_inclusion_probe(
    h: &ToeplitzSymbol,
    g: &ToeplitzSymbol,
    size: usize,
) -> Result<InclusionReport, KernelError> {
    let basis = numerical_kernel(h, size)?;
    let tol = g.residual_tolerance();
    let mut max_residual: f64 = 0.0;
    for v in &basis.vectors {
        max_residual = max_residual.max(residual_in_kernel(g, v)?);
    }
    let verdict = if !basis.verified {
        Inclusion::Uncertain
    } else if max_residual <= tol {
        Inclusion::Included
    } else if max_residual > 100.0 * tol {
        Inclusion::NotIncluded
    } else {
        Inclusion::Uncertain
    };
    Ok(InclusionReport { verdict, dimension: basis.dimension, max_residual })
}

/// Basis of the combinations vanishing at the origin.
pub fn vanishing_at_origin(vectors: &[HardyFunction]) -> Vec<HardyFunction> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let vals: Vec<Complex64> = vectors.iter().map(|v| v.at_origin()).collect();
    let (p, vp) = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, v)| (i, *v))
        .unwrap_or((0, ZERO));
    if vp.norm() == 0.0 {
        return vectors.to_vec();
    }
    vectors
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != p)
        .map(|(i, v)| v.minus(&vectors[p].scale(vals[i] / vp)))
        .collect()
}

/// Backward shift `(f − f(0))/z`.
pub fn backward_shift(f: &HardyFunction) -> HardyFunction {
    let cfg = *f.config();
    let mut c = f.coeffs().to_vec();
    c[0] = ZERO;
    let shifted = BoundaryFunction::from_coeffs(cfg, c).shift(-1);
    HardyFunction::assume(shifted)
}

/// Residuals of `S*f` under `g` for a basis of the zero-at-origin part of
/// the kernel spanned by `vectors`.
pub fn near_invariance_residuals(g: &ToeplitzSymbol, vectors: &[HardyFunction]) -> Result<Vec<f64>, KernelError> {
    vanishing_at_origin(vectors)
        .iter()
        .map(|f| {
            let s = backward_shift(f);
            if s.norm() == 0.0 {
                Ok(0.0)
            } else {
                residual_in_kernel(g, &s)
            }
        })
        .collect()
}
