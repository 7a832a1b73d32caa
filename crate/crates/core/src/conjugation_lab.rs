//! The natural conjugation `f ↦ conj(g)·z̄·conj(f)` on `ker T_g`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary_core::{inner_product, outer_test, BoundaryFunction, HardyFunction, OuterVerdict, ONE};
use crate::factorization::{inner_outer, maximal_test, FactorError};
use crate::inner_functions::{InnerFunction, InnerSpec};
use crate::toeplitz_engine::{
    kernel_inclusion_probe, minimal_kernel_symbol, numerical_kernel, residual_in_kernel, Inclusion, KernelBasis,
    KernelError, ToeplitzSymbol,
};

/// Relative negative-frequency norm below which a unimodular ratio is analytic.
pub const ANALYTIC_RATIO_TOL: f64 = 1e-6;
/// Relative negative-frequency norm above which it is certainly not.
pub const NON_ANALYTIC_RATIO_TOL: f64 = 1e-3;

#[derive(Debug, Error, Clone)]
pub enum ConjError {
    #[error("symbol is not unimodular")]
    NotUnimodular,
    #[error("function is not in the kernel (residual {residual:.3e} > {tolerance:.1e})")]
    NotInKernel { residual: f64, tolerance: f64 },
    #[error("function is not maximal in the kernel")]
    NotMaximal,
    #[error("prescribed inner factor does not divide the inner factor (defect {defect:.3e})")]
    AlphaDoesNotDivideInner { defect: f64 },
    #[error("kernel basis failed verification")]
    UnverifiedKernel,
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Clone, Debug)]
pub struct ConjugationContext {
    pub symbol: ToeplitzSymbol,
    pub kernel: Option<KernelBasis>,
}

impl ConjugationContext {
    pub fn new(symbol: ToeplitzSymbol) -> Result<Self, ConjError> {
        if !symbol.unimodular {
            return Err(ConjError::NotUnimodular);
        }
        Ok(ConjugationContext { symbol, kernel: None })
    }

    /// Context with a numerically computed, verified kernel basis.
    pub fn with_kernel(symbol: ToeplitzSymbol, size: usize) -> Result<Self, ConjError> {
        let mut ctx = Self::new(symbol)?;
        let basis = numerical_kernel(&ctx.symbol, size)?;
        if !basis.verified {
            return Err(ConjError::UnverifiedKernel);
        }
        ctx.kernel = Some(basis);
        Ok(ctx)
    }

    pub fn tolerance(&self) -> f64 {
        self.symbol.residual_tolerance()
    }

    fn check(&self, f: &BoundaryFunction) -> Result<f64, ConjError> {
        let residual = residual_in_kernel(&self.symbol, f)?;
        let tolerance = self.tolerance();
        if residual > tolerance {
            return Err(ConjError::NotInKernel { residual, tolerance });
        }
        Ok(residual)
    }

    /// `conj(g)·z̄·conj(f)` without the membership check.
    pub fn apply(&self, f: &BoundaryFunction) -> BoundaryFunction {
        let zb = BoundaryFunction::monomial(*f.config(), -1);
        &(&self.symbol.boundary.conj() * &zb) * &f.conj()
    }
}

pub fn conjugate_in_kernel(ctx: &ConjugationContext, f: &HardyFunction) -> Result<HardyFunction, ConjError> {
    ctx.check(f)?;
    Ok(HardyFunction::assume(ctx.apply(f)))
}

#[derive(Clone, Debug)]
pub struct EigenReport {
    /// Verified eigenvalue of the conjugation, if any.
    pub eigenvalue: Option<Complex64>,
    /// `⟨Cf, f⟩ / ‖f‖²`.
    pub candidate: Complex64,
    /// `‖Cf − candidate·f‖ / ‖f‖`.
    pub residual: f64,
    /// Maximality of `α·f` for the inner factor `α` of `f`.
    pub inner_times_f_maximal: Option<bool>,
}

pub fn eigenfunction_test(ctx: &ConjugationContext, f: &HardyFunction) -> Result<EigenReport, ConjError> {
    let cf = conjugate_in_kernel(ctx, f)?;
    let candidate = inner_product(&cf, f) / f.norm_sqr();
    let residual = (cf.boundary() - &f.boundary().scale(candidate)).norm() / f.norm();
    let eigenvalue = (residual <= ctx.tolerance()).then_some(candidate);
    let inner_times_f_maximal = inner_outer(f).ok().and_then(|p| {
        let af = HardyFunction::assume(&p.inner * f.boundary());
        maximal_test(&ctx.symbol, &af).ok().map(|c| c.maximal)
    });
    Ok(EigenReport { eigenvalue, candidate, residual, inner_times_f_maximal })
}

/// `(I, O)` with `O = C f` and `I = f/O`, so that `C(I·O) = O`.
fn require_maximal(ctx: &ConjugationContext, f: &HardyFunction) -> Result<(BoundaryFunction, BoundaryFunction), ConjError> {
    let cert = match maximal_test(&ctx.symbol, f) {
        Ok(c) => c,
        Err(FactorError::NotInKernel { residual, tolerance }) => return Err(ConjError::NotInKernel { residual, tolerance }),
        Err(e) => return Err(e.into()),
    };
    if !cert.maximal {
        return Err(ConjError::NotMaximal);
    }
    let outer = cert.partner.into_boundary();
    let inner = f.boundary().zip(&outer, |a, b| {
        let q = a / b;
        let n = q.norm();
        if n > 0.0 && n.is_finite() {
            q / n
        } else {
            ONE
        }
    });
    Ok((inner, outer))
}

/// `O·(μ + I)` for a maximal `f = I·O`: an outer maximal function with
/// `C(O^M) = conj(μ)·O^M`.
pub fn outer_maximal(ctx: &ConjugationContext, f: &HardyFunction, mu: Complex64) -> Result<HardyFunction, ConjError> {
    let (_, outer) = require_maximal(ctx, f)?;
    // O·I = f, so O·(μ + I) = μ·O + f.
    Ok(HardyFunction::assume(&outer.scale(mu) + f.boundary()))
}

fn relative_negative_norm(w: &BoundaryFunction) -> f64 {
    let n = w.norm();
    if n == 0.0 {
        0.0
    } else {
        w.negative_part_norm() / n
    }
}

/// `α·O·(λ + I·conj(α))` for a maximal `f = I·O` and an inner `α` dividing `I`.
pub fn prescribed_inner_maximal(
    ctx: &ConjugationContext,
    f: &HardyFunction,
    alpha: &InnerFunction,
    lam: Complex64,
) -> Result<HardyFunction, ConjError> {
    let (inner, outer) = require_maximal(ctx, f)?;
    let quotient = &inner * &alpha.boundary().conj();
    let defect = relative_negative_norm(&quotient);
    if defect > ANALYTIC_RATIO_TOL {
        return Err(ConjError::AlphaDoesNotDivideInner { defect });
    }
    let a = alpha.boundary();
    Ok(HardyFunction::assume(&(a * &outer) * &(&quotient + lam)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxOrder {
    Precedes,
    Succeeds,
    Equivalent,
    Incomparable,
    Uncertain,
}

#[derive(Clone, Debug)]
pub struct MaxOrderVerdict {
    pub relation: MaxOrder,
    /// `I₂·conj(I₁)`.
    pub witness: BoundaryFunction,
    /// Relative negative-frequency norms of `I₂·conj(I₁)` and `I₁·conj(I₂)`.
    pub forward_defect: f64,
    pub backward_defect: f64,
    /// Inclusions `K_min(f₁) ⊂ K_min(f₂)` and the reverse, when both
    /// numerical kernels have a certain dimension.
    pub kernel_cross_check: Option<(Inclusion, Inclusion)>,
}

enum Membership {
    Yes,
    No,
    Unknown,
}

fn membership(defect: f64) -> Membership {
    if defect <= ANALYTIC_RATIO_TOL {
        Membership::Yes
    } else if defect >= NON_ANALYTIC_RATIO_TOL {
        Membership::No
    } else {
        Membership::Unknown
    }
}

fn order_from(forward: Membership, backward: Membership) -> MaxOrder {
    use Membership::*;
    match (forward, backward) {
        (Yes, Yes) => MaxOrder::Equivalent,
        (Yes, No) => MaxOrder::Precedes,
        (No, Yes) => MaxOrder::Succeeds,
        (No, No) => MaxOrder::Incomparable,
        _ => MaxOrder::Uncertain,
    }
}

/// Order of the inner factors: `f₁` precedes `f₂` when `I₁` divides `I₂`.
pub fn max_order_compare(f1: &HardyFunction, f2: &HardyFunction) -> Result<MaxOrderVerdict, ConjError> {
    let i1 = inner_outer(f1)?.inner;
    let i2 = inner_outer(f2)?.inner;
    let witness = &i2 * &i1.conj();
    let back = &i1 * &i2.conj();
    let forward_defect = relative_negative_norm(&witness);
    let backward_defect = relative_negative_norm(&back);
    let relation = order_from(membership(forward_defect), membership(backward_defect));
    let kernel_cross_check = kernel_order_cross_check(f1, f2, 64);
    Ok(MaxOrderVerdict { relation, witness, forward_defect, backward_defect, kernel_cross_check })
}

fn kernel_order_cross_check(f1: &HardyFunction, f2: &HardyFunction, size: usize) -> Option<(Inclusion, Inclusion)> {
    let s1 = minimal_kernel_symbol(f1).ok()?;
    let s2 = minimal_kernel_symbol(f2).ok()?;
    let a = kernel_inclusion_probe(&s1, &s2, size).ok()?.verdict;
    let b = kernel_inclusion_probe(&s2, &s1, size).ok()?.verdict;
    Some((a, b))
}

/// Exact divisibility of structured inner functions: zero multisets
/// (with the monomial power as zeros at the origin) and atom masses.
pub fn structured_divides(a: &InnerSpec, b: &InnerSpec) -> bool {
    let with_origin = |s: &InnerSpec| -> Vec<Complex64> {
        let mut z = s.zeros.clone();
        z.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), s.power as usize));
        z
    };
    let mut pool = with_origin(b);
    for z in &with_origin(a) {
        match pool.iter().position(|w| (w - z).norm() <= 1e-12) {
            Some(i) => {
                pool.swap_remove(i);
            }
            None => return false,
        }
    }
    let mass = |s: &InnerSpec, angle: f64| -> f64 {
        s.atoms
            .iter()
            .filter(|t| (Complex64::from_polar(1.0, t.angle) - Complex64::from_polar(1.0, angle)).norm() <= 1e-12)
            .map(|t| t.mass)
            .sum()
    };
    a.atoms.iter().all(|t| mass(a, t.angle) <= mass(b, t.angle) + 1e-12)
}

pub fn structured_order(a: &InnerSpec, b: &InnerSpec) -> MaxOrder {
    match (structured_divides(a, b), structured_divides(b, a)) {
        (true, true) => MaxOrder::Equivalent,
        (true, false) => MaxOrder::Precedes,
        (false, true) => MaxOrder::Succeeds,
        (false, false) => MaxOrder::Incomparable,
    }
}

/// True when `h` is outer by the Jensen test.
pub fn is_outer(h: &HardyFunction) -> bool {
    outer_test(h).map(|c| c.verdict == OuterVerdict::Outer).unwrap_or(false)
}

/// Unimodular rotation making `v` real and positive.
pub fn phase_of(v: Complex64) -> Complex64 {
    if v.norm() == 0.0 {
        ONE
    } else {
        v / v.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_core::{GridConfig, ZERO};
    use crate::inner_functions::{make_inner, model_kernels};

    fn cfg() -> GridConfig {
        GridConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(c: &[f64]) -> HardyFunction {
        let v: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        HardyFunction::polynomial(cfg(), &v)
    }

    fn k5() -> ConjugationContext {
        ConjugationContext::new(ToeplitzSymbol::monomial(cfg(), -5)).unwrap()
    }

    #[test]
    fn conjugation_examples() {
        let ctx = k5();
        let f = poly(&[1.0, -4.0, 6.0, -4.0, 1.0]);
        assert!(conjugate_in_kernel(&ctx, &f).unwrap().max_distance(&f) < 1e-12);
        // z²(1−z)² maps to (z−1)².
        let f = poly(&[0.0, 0.0, 1.0, -2.0, 1.0]);
        let cf = conjugate_in_kernel(&ctx, &f).unwrap();
        assert!(cf.max_distance(poly(&[1.0, -2.0, 1.0]).boundary()) < 1e-12);
        assert!(is_outer(&cf));
        let bad = poly(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(conjugate_in_kernel(&ctx, &bad), Err(ConjError::NotInKernel { .. })));
    }

    #[test]
    fn conjugate_kernel_maps_to_kernel() {
        let theta = make_inner(InnerSpec::blaschke(&[c(0.5, 0.1), c(-0.3, 0.4)]), cfg()).unwrap();
        let ctx = ConjugationContext::new(ToeplitzSymbol::conj_inner(&theta)).unwrap();
        let mk = model_kernels(&theta, c(0.2, 0.3)).unwrap();
        let ck = conjugate_in_kernel(&ctx, &mk.k_tilde).unwrap();
        assert!(ck.max_distance(mk.k.boundary()) < 1e-10);
    }

    #[test]
    fn eigen_examples() {
        let ctx = k5();
        let r = eigenfunction_test(&ctx, &poly(&[1.0, -4.0, 6.0, -4.0, 1.0])).unwrap();
        assert!((r.eigenvalue.unwrap() - ONE).norm() < 1e-12 && r.residual < 1e-8);
        assert_eq!(r.inner_times_f_maximal, Some(true));
        let r = eigenfunction_test(&ctx, &poly(&[0.0, 1.0, 0.0, -1.0])).unwrap();
        assert!((r.eigenvalue.unwrap() + ONE).norm() < 1e-12);
        assert_eq!(r.inner_times_f_maximal, Some(true));
        let r = eigenfunction_test(&ctx, &poly(&[0.0, 1.0])).unwrap();
        assert!(r.eigenvalue.is_none());
        assert_eq!(r.inner_times_f_maximal, Some(false));
    }

    #[test]
    fn outer_maximal_monomial_kernel() {
        let ctx = k5();
        let f = poly(&[0.0, 0.0, 0.0, 0.0, 1.0]);
        let om = outer_maximal(&ctx, &f, ONE).unwrap();
        assert!(om.max_distance(poly(&[1.0, 0.0, 0.0, 0.0, 1.0]).boundary()) < 1e-12);
        assert!(is_outer(&om));
        assert!(maximal_test(&ctx.symbol, &om).unwrap().maximal);
        let mu = c(0.6, 0.8);
        let om = outer_maximal(&ctx, &f, mu).unwrap();
        let cm = conjugate_in_kernel(&ctx, &om).unwrap();
        assert!(cm.max_distance(&om.boundary().scale(mu.conj())) < 1e-12);
        assert!(matches!(outer_maximal(&ctx, &poly(&[0.0, 1.0]), ONE), Err(ConjError::NotMaximal)));
    }

    #[test]
    fn prescribed_inner_examples() {
        let ctx = k5();
        let f = poly(&[0.0, 0.0, 0.0, 0.0, 1.0]);
        let z2 = make_inner(InnerSpec::monomial(2), cfg()).unwrap();
        let r = prescribed_inner_maximal(&ctx, &f, &z2, ONE).unwrap();
        assert!(r.max_distance(poly(&[0.0, 0.0, 1.0, 0.0, 1.0]).boundary()) < 1e-12);
        assert!(maximal_test(&ctx.symbol, &r).unwrap().maximal);
        let z4 = make_inner(InnerSpec::monomial(4), cfg()).unwrap();
        let r = prescribed_inner_maximal(&ctx, &f, &z4, ONE).unwrap();
        assert!(r.max_distance(&f.boundary().scale(c(2.0, 0.0))) < 1e-12);
        let b = make_inner(InnerSpec::blaschke(&[c(0.5, 0.0)]), cfg()).unwrap();
        assert!(matches!(
            prescribed_inner_maximal(&ctx, &f, &b, ONE),
            Err(ConjError::AlphaDoesNotDivideInner { .. })
        ));
    }

    #[test]
    fn order_examples() {
        let f1 = poly(&[0.0, 1.0, 1.0]);
        let f2 = poly(&[0.0, 0.0, 0.0, 1.0, 1.0]);
        let v = max_order_compare(&f1, &f2).unwrap();
        assert_eq!(v.relation, MaxOrder::Precedes);
        assert_eq!(v.kernel_cross_check, Some((Inclusion::Included, Inclusion::NotIncluded)));
        assert_eq!(max_order_compare(&f2, &f1).unwrap().relation, MaxOrder::Succeeds);
        let o = |z: Complex64| c(2.0, 0.0) + z;
        let b = HardyFunction::from_fn(cfg(), |z| (z - c(0.5, 0.0)) / (ONE - 0.5 * z) * o(z));
        let zo = HardyFunction::from_fn(cfg(), |z| z * o(z));
        assert_eq!(max_order_compare(&b, &zo).unwrap().relation, MaxOrder::Incomparable);
        let zo2 = zo.scale(c(0.0, 1.0));
        assert_eq!(max_order_compare(&zo, &zo2).unwrap().relation, MaxOrder::Equivalent);
    }

    #[test]
    fn structured_order_examples() {
        let z = InnerSpec::monomial(1);
        let z3 = InnerSpec::monomial(3);
        assert_eq!(structured_order(&z, &z3), MaxOrder::Precedes);
        let b = InnerSpec::blaschke(&[c(0.5, 0.0)]);
        assert_eq!(structured_order(&b, &z), MaxOrder::Incomparable);
        let e = InnerSpec::atom_at_one();
        assert_eq!(structured_order(&e, &e.times(&b)), MaxOrder::Precedes);
        assert_eq!(structured_order(&InnerSpec::default(), &InnerSpec::blaschke(&[ZERO])), MaxOrder::Precedes);
    }
}
