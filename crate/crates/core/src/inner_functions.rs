//! Structured inner functions, model-space kernels, Crofoot transforms and
//! the Wiener–Hopf splitting of finite Blaschke products.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary_core::{project_plus, BoundaryFunction, GridConfig, HardyFunction, ONE, ZERO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InnerError {
    #[error("Blaschke zero {zero} is not inside the open unit disk")]
    ZeroOnOrOutsideDisk { zero: Complex64 },
    #[error("singular atom mass {mass} must be positive")]
    NonpositiveMass { mass: f64 },
    #[error("constant factor {constant} is not unimodular")]
    NonUnimodularConstant { constant: Complex64 },
    #[error("point {lambda} is not inside the open unit disk")]
    LambdaOutsideDisk { lambda: Complex64 },
    #[error("|theta(lambda)| = {modulus} is unimodular to working precision")]
    ThetaUnimodularAtLambda { modulus: f64 },
    #[error("inner function has singular atoms; not a finite Blaschke product")]
    NotFiniteBlaschke,
}

/// Point mass of the singular measure, at `exp(i·angle)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub angle: f64,
    pub mass: f64,
}

impl Atom {
    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }
}

#[derive(Serialize, Deserialize)]
struct RawInner {
    #[serde(default)]
    zeros: Vec<[f64; 2]>,
    #[serde(default)]
    atoms: Vec<[f64; 2]>,
    #[serde(default)]
    power: u32,
    #[serde(default = "unit")]
    constant: [f64; 2],
}

fn unit() -> [f64; 2] {
    [1.0, 0.0]
}

/// Zeros, atoms, monomial power and unimodular constant.
///
/// JSON form: `{"zeros":[[re,im],..], "atoms":[[angle,mass],..], "power":n, "constant":[re,im]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawInner", into = "RawInner")]
pub struct InnerSpec {
    pub zeros: Vec<Complex64>,
    pub atoms: Vec<Atom>,
    pub power: u32,
    pub constant: Complex64,
}

impl From<RawInner> for InnerSpec {
    fn from(r: RawInner) -> Self {
        InnerSpec {
            zeros: r.zeros.iter().map(|z| Complex64::new(z[0], z[1])).collect(),
            atoms: r.atoms.iter().map(|a| Atom { angle: a[0], mass: a[1] }).collect(),
            power: r.power,
            constant: Complex64::new(r.constant[0], r.constant[1]),
        }
    }
}

impl From<InnerSpec> for RawInner {
    fn from(s: InnerSpec) -> Self {
        RawInner {
            zeros: s.zeros.iter().map(|z| [z.re, z.im]).collect(),
            atoms: s.atoms.iter().map(|a| [a.angle, a.mass]).collect(),
            power: s.power,
            constant: [s.constant.re, s.constant.im],
        }
    }
}

impl Default for InnerSpec {
    fn default() -> Self {
        InnerSpec { zeros: Vec::new(), atoms: Vec::new(), power: 0, constant: ONE }
    }
}

impl InnerSpec {
    pub fn monomial(n: u32) -> Self {
        InnerSpec { power: n, ..Default::default() }
    }

    pub fn blaschke(zeros: &[Complex64]) -> Self {
        InnerSpec { zeros: zeros.to_vec(), ..Default::default() }
    }

    /// `E(z) = exp((z+1)/(z−1))`: unit atom at `1`.
    pub fn atom_at_one() -> Self {
        InnerSpec { atoms: vec![Atom { angle: 0.0, mass: 1.0 }], ..Default::default() }
    }

    /// Product of two inner functions.
    pub fn times(&self, other: &InnerSpec) -> InnerSpec {
        InnerSpec {
            zeros: self.zeros.iter().chain(&other.zeros).cloned().collect(),
            atoms: self.atoms.iter().chain(&other.atoms).cloned().collect(),
            power: self.power + other.power,
            constant: self.constant * other.constant,
        }
    }

    pub fn validate(&self) -> Result<(), InnerError> {
        for &a in &self.zeros {
            if !(a.norm() < 1.0) {
                return Err(InnerError::ZeroOnOrOutsideDisk { zero: a });
            }
        }
        for at in &self.atoms {
            if !(at.mass > 0.0) {
                return Err(InnerError::NonpositiveMass { mass: at.mass });
            }
        }
        if (self.constant.norm() - 1.0).abs() > 1e-12 {
            return Err(InnerError::NonUnimodularConstant { constant: self.constant });
        }
        Ok(())
    }

    /// Zeros counted with multiplicity, including those at the origin.
    pub fn zero_count(&self) -> usize {
        self.zeros.len() + self.power as usize
    }

    fn factors(&self, z: Complex64) -> Vec<(Complex64, Complex64)> {
        let mut out = Vec::with_capacity(self.zero_count() + self.atoms.len());
        for &a in &self.zeros {
            let d = ONE - a.conj() * z;
            out.push(((z - a) / d, (1.0 - a.norm_sqr()) / (d * d)));
        }
        for _ in 0..self.power {
            out.push((z, ONE));
        }
        for at in &self.atoms {
            let p = at.point();
            let d = p - z;
            let v = atom_factor(p, at.mass, z);
            out.push((v, v * (-2.0 * at.mass * p / (d * d))));
        }
        out
    }

    /// Value at `z`; exact formula, valid in the closed disk away from atoms.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.factors(z).iter().fold(self.constant, |acc, (v, _)| acc * v)
    }

    /// Derivative at an interior point.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let f = self.factors(z);
        let n = f.len();
        let mut prefix = vec![ONE; n + 1];
        for i in 0..n {
            prefix[i + 1] = prefix[i] * f[i].0;
        }
        let mut suffix = ONE;
        let mut acc = ZERO;
        for i in (0..n).rev() {
            acc += f[i].1 * prefix[i] * suffix;
            suffix *= f[i].0;
        }
        acc * self.constant
    }
}

fn atom_factor(p: Complex64, mass: f64, z: Complex64) -> Complex64 {
    let d = p - z;
    if d.norm() < 1e-300 {
        return ONE;
    }
    (-mass * (p + z) / d).exp()
}

/// An inner function with its boundary samples.
#[derive(Clone, Debug)]
pub struct InnerFunction {
    spec: InnerSpec,
    samples: BoundaryFunction,
}

pub fn make_inner(spec: InnerSpec, cfg: GridConfig) -> Result<InnerFunction, InnerError> {
    spec.validate()?;
    let samples = BoundaryFunction::from_fn(cfg, |z| {
        let v = spec.eval(z);
        // Renormalise away rounding so |θ| = 1 holds samplewise.
        v / v.norm()
    });
    Ok(InnerFunction { spec, samples })
}

impl InnerFunction {
    pub fn spec(&self) -> &InnerSpec {
        &self.spec
    }

    pub fn boundary(&self) -> &BoundaryFunction {
        &self.samples
    }

    pub fn config(&self) -> &GridConfig {
        self.samples.config()
    }

    /// The samples viewed as an element of H², with measured defect.
    pub fn hardy(&self) -> HardyFunction {
        HardyFunction::assume(self.samples.clone())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.spec.eval(z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        self.spec.derivative(z)
    }

    pub fn has_atoms(&self) -> bool {
        !self.spec.atoms.is_empty()
    }

    /// Relative norm of the negative-frequency content of the samples.
    /// Zero up to rounding for Blaschke products; large for singular atoms,
    /// whose spectrum is not resolved by any practical grid.
    pub fn resolution_defect(&self) -> f64 {
        self.samples.negative_part_norm() / self.samples.norm()
    }

    pub fn times(&self, other: &InnerFunction) -> InnerFunction {
        InnerFunction { spec: self.spec.times(&other.spec), samples: &self.samples * &other.samples }
    }
}

/// The pair `k_λ`, `k̃_λ` of the model space `K_θ`.
#[derive(Clone, Debug)]
pub struct ModelKernelPair {
    pub k: HardyFunction,
    pub k_tilde: HardyFunction,
    pub lambda: Complex64,
    pub theta_at_lambda: Complex64,
    /// `min |k|` on the grid; positive certifies invertibility in H^∞.
    pub k_min_modulus: f64,
}

impl ModelKernelPair {
    /// `k_λ(λ) = (1 − |θ(λ)|²)/(1 − |λ|²) = ‖k_λ‖²`.
    pub fn k_at_lambda(&self) -> f64 {
        (1.0 - self.theta_at_lambda.norm_sqr()) / (1.0 - self.lambda.norm_sqr())
    }
}

fn check_disk(lambda: Complex64) -> Result<(), InnerError> {
    if lambda.norm() < 1.0 {
        Ok(())
    } else {
        Err(InnerError::LambdaOutsideDisk { lambda })
    }
}

/// `k_λ(w) = (1 − conj(θ(λ))θ(w))/(1 − λ̄w)` at an interior point.
pub fn kernel_value(theta: &InnerSpec, lambda: Complex64, w: Complex64) -> Complex64 {
    (ONE - theta.eval(lambda).conj() * theta.eval(w)) / (ONE - lambda.conj() * w)
}

/// `k̃_λ(w) = (θ(w) − θ(λ))/(w − λ)`, equal to `θ'(λ)` at `w = λ`.
pub fn conjugate_kernel_value(theta: &InnerSpec, lambda: Complex64, w: Complex64) -> Complex64 {
    if (w - lambda).norm() < 1e-8 {
        return theta.derivative(lambda);
    }
    (theta.eval(w) - theta.eval(lambda)) / (w - lambda)
}

pub fn model_kernels(theta: &InnerFunction, lambda: Complex64) -> Result<ModelKernelPair, InnerError> {
    check_disk(lambda)?;
    let cfg = *theta.config();
    let c = theta.eval(lambda);
    let th = theta.boundary();
    let k = th.zip(&BoundaryFunction::from_fn(cfg, |z| z), |t, z| (ONE - c.conj() * t) / (ONE - lambda.conj() * z));
    let k_tilde = if lambda.norm() > 0.9 && !theta.has_atoms() {
        synthetic_division(th, lambda)
    } else {
        th.zip(&BoundaryFunction::from_fn(cfg, |z| z), |t, z| (t - c) / (z - lambda))
    };
    let k_min_modulus = k.min_modulus();
    Ok(ModelKernelPair {
        k: HardyFunction::assume(k),
        k_tilde: HardyFunction::assume(k_tilde),
        lambda,
        theta_at_lambda: c,
        k_min_modulus,
    })
}

/// `(θ − c)/(z − λ)` from the Taylor coefficients of `θ`; stable for `λ`
/// close to the circle where samplewise division loses digits.
fn synthetic_division(theta: &BoundaryFunction, lambda: Complex64) -> BoundaryFunction {
    let cfg = *theta.config();
    let half = cfg.grid_size / 2;
    let t = theta.taylor(half);
    let mut q = vec![ZERO; cfg.grid_size];
    let mut acc = ZERO;
    for n in (0..half - 1).rev() {
        acc = t[n + 1] + lambda * acc;
        q[n] = acc;
    }
    BoundaryFunction::from_coeffs(cfg, q)
}

/// Orthogonal projection onto `K_θ`: `f − θ·P⁺(θ̄ f)`.
pub fn model_projection(theta: &InnerFunction, f: &BoundaryFunction) -> HardyFunction {
    let th = theta.boundary();
    let inside = project_plus(&(&th.conj() * f));
    HardyFunction::assume(f - &(th * inside.boundary()))
}

/// Crofoot transform `θ_λ` with the isometric multiplier `K_{θ_λ} → K_θ`.
#[derive(Clone, Debug)]
pub struct CrofootTransform {
    pub theta_lambda: BoundaryFunction,
    pub multiplier: HardyFunction,
    pub theta_at_lambda: Complex64,
    pub lambda: Complex64,
}

impl CrofootTransform {
    /// `θ_λ(w)` at an interior point.
    pub fn theta_lambda_value(&self, theta: &InnerSpec, w: Complex64) -> Complex64 {
        let c = self.theta_at_lambda;
        let t = theta.eval(w);
        (t - c) / (ONE - c.conj() * t)
    }
}

pub fn crofoot(theta: &InnerFunction, lambda: Complex64) -> Result<CrofootTransform, InnerError> {
    check_disk(lambda)?;
    let c = theta.eval(lambda);
    if c.norm() >= 1.0 - theta.config().tol_coeff {
        return Err(InnerError::ThetaUnimodularAtLambda { modulus: c.norm() });
    }
    let th = theta.boundary();
    let theta_lambda = th.map(|t| (t - c) / (ONE - c.conj() * t));
    let s = (1.0 - c.norm_sqr()).sqrt();
    let multiplier = HardyFunction::assume(th.map(|t| (ONE - c.conj() * t) / s));
    Ok(CrofootTransform { theta_lambda, multiplier, theta_at_lambda: c, lambda })
}

/// Two-point variant: `K_θ = k_λ(1 − λ̄₁z)·K_{θ_{λ₁,λ}}` with
/// `θ_{λ₁,λ} = B_{λ₁}·k̃_λ/k_λ`. The multiplier is not isometric unless
/// `λ₁ = λ`, and no norm relation is claimed.
#[derive(Clone, Debug)]
pub struct TwoPointCrofoot {
    pub theta_pair: BoundaryFunction,
    pub multiplier: HardyFunction,
}

pub fn crofoot_two_point(
    theta: &InnerFunction,
    lambda1: Complex64,
    lambda: Complex64,
) -> Result<TwoPointCrofoot, InnerError> {
    check_disk(lambda1)?;
    let pair = model_kernels(theta, lambda)?;
    let cfg = *theta.config();
    let z = BoundaryFunction::from_fn(cfg, |z| z);
    let b1 = z.map(|z| (z - lambda1) / (ONE - lambda1.conj() * z));
    let theta_pair = &(&b1 * pair.k_tilde.boundary()) / pair.k.boundary();
    let multiplier = HardyFunction::assume(pair.k.boundary() * &z.map(|z| ONE - lambda1.conj() * z));
    Ok(TwoPointCrofoot { theta_pair, multiplier })
}

/// `B = B₋·zⁿ·B₊` for a finite Blaschke product.
#[derive(Clone, Debug)]
pub struct WienerHopf {
    pub b_minus: BoundaryFunction,
    pub index: usize,
    pub b_plus: HardyFunction,
    pub reconstruction_error: f64,
}

impl WienerHopf {
    /// `{B₊ z^j : j < n}`, a basis of `K_B`.
    pub fn model_space_basis(&self) -> Vec<HardyFunction> {
        (0..self.index).map(|j| self.b_plus.shift(j)).collect()
    }
}

pub fn fbp_wiener_hopf(b: &InnerFunction) -> Result<WienerHopf, InnerError> {
    if b.has_atoms() {
        return Err(InnerError::NotFiniteBlaschke);
    }
    let cfg = *b.config();
    let spec = b.spec();
    let mut zeros = spec.zeros.clone();
    zeros.extend(std::iter::repeat(ZERO).take(spec.power as usize));
    let n = zeros.len();
    let b_plus = BoundaryFunction::from_fn(cfg, |z| {
        zeros.iter().fold(ONE, |acc, a| acc / (ONE - a.conj() * z))
    });
    let b_minus = BoundaryFunction::from_fn(cfg, |z| {
        let zb = z.conj();
        zeros.iter().fold(spec.constant, |acc, &a| acc * (ONE - a * zb))
    });
    let rebuilt = &(&b_minus * &b_plus) * &BoundaryFunction::monomial(cfg, n as i64);
    let reconstruction_error = rebuilt.max_distance(b.boundary());
    Ok(WienerHopf { b_minus, index: n, b_plus: HardyFunction::assume(b_plus), reconstruction_error })
}

/// Exact calculus on `span{ s_μ, φ·s_μ }` with Szegő kernels
/// `s_μ(z) = 1/(1 − μ̄z)` and an inner function `φ` known through its
/// values at the nodes. Represents `F = Σ_j (a_j + b_j φ) s_{μ_j}`.
///
/// Inner products reduce to interior point evaluations,
/// `⟨s_j, s_k⟩ = 1/(1 − μ̄_j μ_k)` and `⟨φ s_j, s_k⟩ = φ(μ_k)/(1 − μ̄_j μ_k)`,
/// so norms are available even when `φ` cannot be resolved on a grid.
#[derive(Clone, Debug)]
pub struct KernelExpansion {
    pub nodes: Vec<Complex64>,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub phi_at_nodes: Vec<Complex64>,
}

impl KernelExpansion {
    /// `Σ_j w_j k^φ_{μ_j}`, an element of the model space `K_φ`.
    pub fn model_space_element(nodes: &[Complex64], weights: &[Complex64], phi: impl Fn(Complex64) -> Complex64) -> Self {
        let phi_at_nodes: Vec<Complex64> = nodes.iter().map(|&m| phi(m)).collect();
        KernelExpansion {
            nodes: nodes.to_vec(),
            a: weights.to_vec(),
            b: weights.iter().zip(&phi_at_nodes).map(|(w, p)| -w * p.conj()).collect(),
            phi_at_nodes,
        }
    }

    fn szego(&self, j: usize, k: usize) -> Complex64 {
        ONE / (ONE - self.nodes[j].conj() * self.nodes[k])
    }

    pub fn norm_sqr(&self) -> f64 {
        let n = self.nodes.len();
        let mut acc = ZERO;
        for j in 0..n {
            for k in 0..n {
                let s = self.szego(j, k);
                let (aj, bj, ak, bk) = (self.a[j], self.b[j], self.a[k], self.b[k]);
                acc += s
                    * (aj * ak.conj()
                        + bj * bk.conj()
                        + aj * bk.conj() * self.phi_at_nodes[j].conj()
                        + bj * ak.conj() * self.phi_at_nodes[k]);
            }
        }
        acc.re
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().max(0.0).sqrt()
    }

    /// `‖P⁺(φ̄F)‖`, zero exactly when `F ∈ K_φ`. Uses
    /// `P⁺(φ̄ s_μ) = conj(φ(μ))·s_μ`.
    pub fn model_space_residual(&self) -> f64 {
        let c: Vec<Complex64> = (0..self.nodes.len())
            .map(|j| self.a[j] * self.phi_at_nodes[j].conj() + self.b[j])
            .collect();
        let mut acc = ZERO;
        for j in 0..c.len() {
            for k in 0..c.len() {
                acc += self.szego(j, k) * c[j] * c[k].conj();
            }
        }
        acc.re.max(0.0).sqrt()
    }

    /// Value at an interior point, given `φ` there.
    pub fn eval(&self, w: Complex64, phi_w: Complex64) -> Complex64 {
        (0..self.nodes.len())
            .map(|j| (self.a[j] + self.b[j] * phi_w) / (ONE - self.nodes[j].conj() * w))
            .sum()
    }

    /// Boundary samples, given boundary samples of `φ`.
    pub fn samples(&self, phi: &BoundaryFunction) -> BoundaryFunction {
        let cfg = *phi.config();
        let z = BoundaryFunction::from_fn(cfg, |z| z);
        z.zip(phi, |z, p| self.eval(z, p))
    }
}

/// Exact Crofoot isometry check for `f = Σ w_j k^{θ_λ}_{μ_j}`.
///
/// Returns `(‖f‖, ‖M f‖, ‖P⁺(θ̄·M f)‖)`, all from point evaluations of `θ`.
pub fn crofoot_exact_norms(
    theta: &InnerSpec,
    transform: &CrofootTransform,
    nodes: &[Complex64],
    weights: &[Complex64],
) -> (f64, f64, f64) {
    let c = transform.theta_at_lambda;
    let f = KernelExpansion::model_space_element(nodes, weights, |w| transform.theta_lambda_value(theta, w));
    let s = (1.0 - c.norm_sqr()).sqrt();
    // (1 − c̄θ)(a + b θ_λ) with θ_λ = (θ − c)/(1 − c̄θ) is linear in θ.
    let a: Vec<Complex64> = f.a.iter().zip(&f.b).map(|(a, b)| (a - b * c) / s).collect();
    let b: Vec<Complex64> = f.a.iter().zip(&f.b).map(|(a, b)| (b - a * c.conj()) / s).collect();
    let image = KernelExpansion {
        nodes: nodes.to_vec(),
        a,
        b,
        phi_at_nodes: nodes.iter().map(|&m| theta.eval(m)).collect(),
    };
    (f.norm(), image.norm(), image.model_space_residual())
}

/// Angle of a boundary point normalised to `(-π, π]`.
pub fn principal_angle(t: f64) -> f64 {
    let mut a = t.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> GridConfig {
        GridConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn make_inner_examples() {
        let z3 = make_inner(InnerSpec::monomial(3), cfg()).unwrap();
        assert!(z3.boundary().max_distance(&BoundaryFunction::monomial(cfg(), 3)) < 1e-13);
        let e = make_inner(InnerSpec::atom_at_one(), cfg()).unwrap();
        assert_abs_diff_eq!(e.eval(ZERO).re, (-1.0f64).exp(), epsilon = 1e-15);
        assert!(e.boundary().unimodular_defect() < 1e-14);
        let b = make_inner(InnerSpec::blaschke(&[c(0.5, 0.0)]), cfg()).unwrap();
        assert_abs_diff_eq!(b.eval(ZERO).re, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn make_inner_rejects_bad_specs() {
        let bad = InnerSpec::blaschke(&[c(1.0, 0.0)]);
        assert!(matches!(make_inner(bad, cfg()), Err(InnerError::ZeroOnOrOutsideDisk { .. })));
        let neg = InnerSpec { atoms: vec![Atom { angle: 0.0, mass: -1.0 }], ..Default::default() };
        assert!(matches!(make_inner(neg, cfg()), Err(InnerError::NonpositiveMass { .. })));
    }

    #[test]
    fn descriptor_round_trip() {
        let s: InnerSpec =
            serde_json::from_str(r#"{"zeros":[[0.5,0.1]],"atoms":[[0.0,1.0]],"power":2}"#).unwrap();
        assert_eq!(s.zeros, vec![c(0.5, 0.1)]);
        assert_eq!(s.power, 2);
        assert_eq!(s.constant, ONE);
        let back: InnerSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn derivative_of_e_at_origin() {
        // E'(z) = E(z)·(−2/(z−1)²), so E'(0) = −2/e.
        let e = InnerSpec::atom_at_one();
        assert_abs_diff_eq!(e.derivative(ZERO).re, -2.0 / 1f64.exp(), epsilon = 1e-15);
        let h = 1e-6;
        let fd = (e.eval(c(h, 0.0)) - e.eval(c(-h, 0.0))) / (2.0 * h);
        assert!((fd - e.derivative(ZERO)).norm() < 1e-8);
    }

    #[test]
    fn kernels_of_monomial() {
        let th = make_inner(InnerSpec::monomial(4), cfg()).unwrap();
        let p = model_kernels(&th, ZERO).unwrap();
        assert!(p.k.max_distance(&BoundaryFunction::constant(cfg(), ONE)) < 1e-13);
        assert!(p.k_tilde.max_distance(&BoundaryFunction::monomial(cfg(), 3)) < 1e-13);
    }

    #[test]
    fn kernels_of_e_at_origin() {
        let e = InnerSpec::atom_at_one();
        let e2 = (-2.0f64).exp();
        assert_abs_diff_eq!(kernel_value(&e, ZERO, ZERO).re, 1.0 - e2, epsilon = 1e-15);
        assert_abs_diff_eq!(conjugate_kernel_value(&e, ZERO, ZERO).re, -2.0 / 1f64.exp(), epsilon = 1e-12);
    }

    #[test]
    fn reproducing_norm_identity() {
        let th = make_inner(InnerSpec::blaschke(&[c(0.3, 0.2), c(-0.5, 0.1)]), cfg()).unwrap();
        let lam = c(0.2, -0.4);
        let p = model_kernels(&th, lam).unwrap();
        assert_abs_diff_eq!(p.k.norm_sqr(), p.k_at_lambda(), epsilon = 1e-12);
        assert!(p.k_min_modulus > 0.0);
    }

    #[test]
    fn synthetic_division_matches_samplewise() {
        let th = make_inner(InnerSpec::blaschke(&[c(0.3, 0.2)]), cfg()).unwrap();
        let lam = c(0.95, 0.0);
        let cth = th.eval(lam);
        let a = synthetic_division(th.boundary(), lam);
        let z = BoundaryFunction::from_fn(cfg(), |z| z);
        let b = th.boundary().zip(&z, |t, z| (t - cth) / (z - lam));
        assert!(a.max_distance(&b) < 1e-9);
    }

    #[test]
    fn projection_examples() {
        let th = make_inner(InnerSpec::monomial(2), cfg()).unwrap();
        let f = BoundaryFunction::polynomial(cfg(), &[ONE, ONE, ZERO, ONE]);
        let r = model_projection(&th, &f);
        assert!(r.max_distance(&BoundaryFunction::polynomial(cfg(), &[ONE, ONE])) < 1e-13);
        let b = make_inner(InnerSpec::blaschke(&[c(0.4, 0.1)]), cfg()).unwrap();
        let h = BoundaryFunction::polynomial(cfg(), &[ONE, c(0.0, 2.0)]);
        assert!(model_projection(&b, &(b.boundary() * &h)).norm() < 1e-12);
        let k = model_kernels(&b, c(0.1, 0.3)).unwrap().k;
        assert!(model_projection(&b, &k).max_distance(&k) < 1e-12);
    }

    #[test]
    fn crofoot_examples() {
        let th = make_inner(InnerSpec::monomial(3), cfg()).unwrap();
        let t = crofoot(&th, ZERO).unwrap();
        assert!(t.theta_lambda.max_distance(th.boundary()) < 1e-14);
        assert!(t.multiplier.max_distance(&BoundaryFunction::constant(cfg(), ONE)) < 1e-14);

        let e = make_inner(InnerSpec::atom_at_one(), cfg()).unwrap();
        let t = crofoot(&e, ZERO).unwrap();
        let ei = (-1.0f64).exp();
        let want = e.boundary().map(|v| (ONE - ei * v) / (1.0 - ei * ei).sqrt());
        assert!(t.multiplier.max_distance(&want) < 1e-14);

        let unit = InnerSpec { constant: c(0.0, 1.0), ..Default::default() };
        let u = make_inner(unit, cfg()).unwrap();
        assert!(matches!(crofoot(&u, ZERO), Err(InnerError::ThetaUnimodularAtLambda { .. })));
    }

    #[test]
    fn two_point_crofoot_reduces_to_one_point() {
        let th = make_inner(InnerSpec::blaschke(&[c(0.3, 0.2), c(-0.1, 0.6)]), cfg()).unwrap();
        let lam = c(0.2, 0.1);
        let one = crofoot(&th, lam).unwrap();
        let two = crofoot_two_point(&th, lam, lam).unwrap();
        assert!(two.theta_pair.max_distance(&one.theta_lambda) < 1e-12);
        let s = (1.0 - one.theta_at_lambda.norm_sqr()).sqrt();
        assert!(two.multiplier.max_distance(&one.multiplier.scale(c(s, 0.0))) < 1e-12);
    }

    #[test]
    fn wiener_hopf_examples() {
        let z3 = make_inner(InnerSpec::monomial(3), cfg()).unwrap();
        let w = fbp_wiener_hopf(&z3).unwrap();
        assert_eq!(w.index, 3);
        assert!(w.b_plus.max_distance(&BoundaryFunction::constant(cfg(), ONE)) < 1e-15);
        let b = make_inner(InnerSpec::blaschke(&[c(0.5, 0.0)]), cfg()).unwrap();
        let w = fbp_wiener_hopf(&b).unwrap();
        assert_eq!(w.index, 1);
        let bp = BoundaryFunction::from_fn(cfg(), |z| ONE / (ONE - z / 2.0));
        let bm = BoundaryFunction::from_fn(cfg(), |z| ONE - z.conj() / 2.0);
        assert!(w.b_plus.max_distance(&bp) < 1e-14);
        assert!(w.b_minus.max_distance(&bm) < 1e-14);
        assert!(w.reconstruction_error < 1e-14);
        let e = make_inner(InnerSpec::atom_at_one(), cfg()).unwrap();
        assert_eq!(fbp_wiener_hopf(&e).unwrap_err(), InnerError::NotFiniteBlaschke);
    }

    #[test]
    fn kernel_expansion_norm_matches_samples() {
        let spec = InnerSpec::blaschke(&[c(0.3, 0.2), c(-0.4, 0.1)]);
        let th = make_inner(spec.clone(), cfg()).unwrap();
        let nodes = [c(0.1, 0.2), c(-0.5, 0.3), c(0.6, -0.1)];
        let w = [c(1.0, 0.5), c(-0.3, 0.2), c(0.7, -1.0)];
        let f = KernelExpansion::model_space_element(&nodes, &w, |m| spec.eval(m));
        let s = f.samples(th.boundary());
        assert_abs_diff_eq!(f.norm(), s.norm(), epsilon = 1e-12);
        assert!(f.model_space_residual() < 1e-12);
        assert!(model_projection(&th, &s).max_distance(&s) < 1e-12);
    }

    #[test]
    fn exact_crofoot_isometry_for_e() {
        let spec = InnerSpec::atom_at_one();
        let e = make_inner(spec.clone(), cfg()).unwrap();
        let t = crofoot(&e, c(0.3, 0.2)).unwrap();
        let nodes = [c(0.1, 0.2), c(-0.5, 0.3), c(0.6, -0.1), c(0.0, -0.7)];
        let w = [c(1.0, 0.5), c(-0.3, 0.2), c(0.7, -1.0), c(0.2, 0.2)];
        let (nf, nm, res) = crofoot_exact_norms(&spec, &t, &nodes, &w);
        assert!((nm / nf - 1.0).abs() < 1e-12);
        assert!(res < 1e-12 * nf);
    }
}
