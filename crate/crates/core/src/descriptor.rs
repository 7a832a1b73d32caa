//! JSON descriptors for symbols and analytic functions.
//!
//! A descriptor is an object with one key:
//!
//! | key | value | meaning |
//! |-----|-------|---------|
//! | `inner` | inner spec | `θ` |
//! | `conj` | descriptor | complex conjugate |
//! | `product` | list of descriptors | samplewise product |
//! | `power` | integer `n` | `zⁿ` |
//! | `power_half` | `{"n": n, "cut": ±1}` | `z^{n/2}` cut at `cut` |
//! | `rational` | `{"numerator": roots, "denominator": roots, "scale": c}` | `c·Π(z−r)/Π(z−p)` |
//! | `polynomial` | coefficients | `Σ c_j z^j` |
//! | `constant` | `[re, im]` | constant |
//! | `sqrt` | descriptor | principal square root |
//! | `model_kernel` | `{"theta": spec, "lambda": c, "conjugate": bool}` | `k_λ` or `k̃_λ` |
//!
//! and the bare string `"half_circle_sign"` for `±1` on the upper/lower half circle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary_core::{BoundaryFunction, GridConfig, HardyFunction, ONE};
use crate::inner_functions::{make_inner, model_kernels, InnerError, InnerSpec};
use crate::toeplitz_engine::{worst_tier, Tier, ToeplitzSymbol};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DescriptorError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { message: String, line: usize, column: usize },
    #[error("invalid descriptor: {0}")]
    Invalid(String),
    #[error(transparent)]
    Inner(#[from] InnerError),
}

/// Branch-cut point of a half-integer power: `-1` or `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Cut(pub i32);

impl TryFrom<i64> for Cut {
    type Error = String;
    fn try_from(v: i64) -> Result<Self, String> {
        match v {
            -1 | 1 => Ok(Cut(v as i32)),
            _ => Err(format!("cut must be -1 or 1, got {v}")),
        }
    }
}

impl From<Cut> for i64 {
    fn from(c: Cut) -> i64 {
        c.0 as i64
    }
}

fn unit() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Descriptor {
    Inner(InnerSpec),
    Conj(Box<Descriptor>),
    Product(Vec<Descriptor>),
    Power(i64),
    PowerHalf {
        n: i64,
        cut: Cut,
    },
    Rational {
        #[serde(default)]
        numerator: Vec<[f64; 2]>,
        #[serde(default)]
        denominator: Vec<[f64; 2]>,
        #[serde(default = "unit")]
        scale: [f64; 2],
    },
    Polynomial(Vec<[f64; 2]>),
    Constant([f64; 2]),
    Sqrt(Box<Descriptor>),
    ModelKernel {
        theta: InnerSpec,
        lambda: [f64; 2],
        #[serde(default)]
        conjugate: bool,
    },
    HalfCircleSign,
}

fn c(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

pub fn parse_descriptor(text: &str) -> Result<Descriptor, DescriptorError> {
    serde_json::from_str(text).map_err(|e| DescriptorError::Parse {
        message: e.to_string(),
        line: e.line(),
        column: e.column(),
    })
}

impl Descriptor {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serialises")
    }

    /// Samples with jump points and accuracy tier.
    pub fn build(&self, cfg: GridConfig) -> Result<ToeplitzSymbol, DescriptorError> {
        Ok(match self {
            Descriptor::Inner(spec) => {
                let theta = make_inner(spec.clone(), cfg)?;
                let tier = if theta.has_atoms() { Tier::Singular } else { Tier::Standard };
                ToeplitzSymbol::new(theta.boundary().clone()).with_tier(tier)
            }
            Descriptor::Conj(d) => d.build(cfg)?.conj(),
            Descriptor::Product(ds) => {
                let mut acc = ToeplitzSymbol::new(BoundaryFunction::constant(cfg, ONE));
                for d in ds {
                    acc = acc.times(&d.build(cfg)?);
                }
                acc
            }
            Descriptor::Power(n) => ToeplitzSymbol::monomial(cfg, *n),
            Descriptor::PowerHalf { n, cut } => ToeplitzSymbol::half_power(cfg, *n, cut.0),
            Descriptor::Rational { numerator, denominator, scale } => {
                for p in denominator {
                    if (c(*p).norm() - 1.0).abs() < 1e-9 {
                        return Err(DescriptorError::Invalid(format!("pole {:?} on the unit circle", p)));
                    }
                }
                let s = c(*scale);
                let b = BoundaryFunction::from_fn(cfg, |z| {
                    let num = numerator.iter().fold(s, |acc, r| acc * (z - c(*r)));
                    denominator.iter().fold(num, |acc, p| acc / (z - c(*p)))
                });
                ToeplitzSymbol::new(b)
            }
            Descriptor::Polynomial(coeffs) => {
                let v: Vec<Complex64> = coeffs.iter().map(|x| c(*x)).collect();
                ToeplitzSymbol::new(BoundaryFunction::polynomial(cfg, &v))
            }
            Descriptor::Constant(v) => ToeplitzSymbol::new(BoundaryFunction::constant(cfg, c(*v))),
            Descriptor::Sqrt(d) => {
                let inner = d.build(cfg)?;
                let b = inner.boundary.map(|v| v.sqrt());
                let tier = if inner.boundary.min_modulus() < 1e-2 * inner.boundary.sup_norm() {
                    worst_tier(inner.tier, Tier::Branch)
                } else {
                    inner.tier
                };
                ToeplitzSymbol::new(b).with_jumps(inner.jump_points.clone()).with_tier(tier)
            }
            Descriptor::ModelKernel { theta, lambda, conjugate } => {
                let th = make_inner(theta.clone(), cfg)?;
                let mk = model_kernels(&th, c(*lambda))?;
                let f = if *conjugate { mk.k_tilde } else { mk.k };
                let tier = if th.has_atoms() { Tier::Singular } else { Tier::Standard };
                ToeplitzSymbol::new(f.into_boundary()).with_tier(tier)
            }
            Descriptor::HalfCircleSign => ToeplitzSymbol::half_circle_sign(cfg),
        })
    }

    /// The descriptor read as an element of H² (defect recorded, not checked).
    pub fn build_function(&self, cfg: GridConfig) -> Result<HardyFunction, DescriptorError> {
        Ok(HardyFunction::assume(self.build(cfg)?.boundary))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> GridConfig {
        GridConfig::default()
    }

    #[test]
    fn parses_and_builds_conjugate_half_power() {
        let d = parse_descriptor(r#"{"product":[{"conj":{"power_half":{"n":7,"cut":-1}}}]}"#).unwrap();
        let g = d.build(cfg()).unwrap();
        assert_eq!(g.jump_points, vec![PI]);
        assert_eq!(g.tier, Tier::Branch);
        let want = ToeplitzSymbol::half_power(cfg(), -7, -1);
        assert!(g.boundary.max_distance(&want.boundary) < 1e-14);
    }

    #[test]
    fn half_circle_sign_as_product_of_half_powers() {
        let d = parse_descriptor(
            r#"{"product":[{"power":1},{"power_half":{"n":-1,"cut":-1}},{"power_half":{"n":-1,"cut":1}}]}"#,
        )
        .unwrap();
        let g = d.build(cfg()).unwrap();
        let s = parse_descriptor(r#""half_circle_sign""#).unwrap().build(cfg()).unwrap();
        assert!(g.boundary.max_distance(&s.boundary) < 1e-12);
        assert_eq!(g.jump_points.len(), 2);
    }

    #[test]
    fn rational_and_round_trip() {
        let d = parse_descriptor(r#"{"rational":{"numerator":[[-1,0]],"denominator":[[0.5,0]]}}"#).unwrap();
        let g = d.build(cfg()).unwrap();
        let want = BoundaryFunction::from_fn(cfg(), |z| (z + 1.0) / (z - 0.5));
        assert!(g.boundary.max_distance(&want) < 1e-13);
        assert_eq!(parse_descriptor(&d.to_json()).unwrap(), d);
        let bad = parse_descriptor(r#"{"rational":{"denominator":[[1,0]]}}"#).unwrap();
        assert!(matches!(bad.build(cfg()), Err(DescriptorError::Invalid(_))));
    }

    #[test]
    fn errors_carry_position() {
        match parse_descriptor("{\"conj\":\n  {\"power\": \"x\"}}") {
            Err(DescriptorError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_descriptor(r#"{"power_half":{"n":3,"cut":2}}"#) {
            Err(DescriptorError::Parse { message, .. }) => assert!(message.contains("cut")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_descriptor(r#"{"bogus":1}"#), Err(DescriptorError::Parse { .. })));
    }

    #[test]
    fn model_kernel_function() {
        let d = parse_descriptor(r#"{"model_kernel":{"theta":{"zeros":[[0.5,0]]},"lambda":[0,0],"conjugate":true}}"#)
            .unwrap();
        let f = d.build_function(cfg()).unwrap();
        // k̃_0 for B_{1/2} is (3/4)/(1 − z/2).
        assert!(f.max_distance(&BoundaryFunction::from_fn(cfg(), |z| 0.75 / (1.0 - 0.5 * z))) < 1e-12);
    }
}
