//! One-off computations on symbols and functions given as JSON descriptors.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use toeplab_core::conjugation_lab::{conjugate_in_kernel, ConjugationContext};
use toeplab_core::descriptor::{parse_descriptor, Descriptor};
use toeplab_core::factorization::{inner_outer, maximal_test};
use toeplab_core::inner_functions::{crofoot, make_inner, model_kernels};
use toeplab_core::toeplitz_engine::{numerical_kernel, KernelError, DEFAULT_SECTION};
use toeplab_core::GridConfig;

use crate::error::CliError;
use crate::experiments::DEFAULT_SEED;
use crate::report::{ExperimentReport, ReportBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Kernel,
    InnerOuter,
    Crofoot,
    Conjugate,
    MaximalTest,
}

impl Verb {
    pub const ALL: [Verb; 5] = [Verb::Kernel, Verb::InnerOuter, Verb::Crofoot, Verb::Conjugate, Verb::MaximalTest];

    pub fn name(self) -> &'static str {
        match self {
            Verb::Kernel => "kernel",
            Verb::InnerOuter => "inner-outer",
            Verb::Crofoot => "crofoot",
            Verb::Conjugate => "conjugate",
            Verb::MaximalTest => "maximal-test",
        }
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verb {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "factor" {
            return Ok(Verb::InnerOuter);
        }
        Verb::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| CliError::ConfigInvalid(format!("unknown compute verb {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct ComputeRequest {
    pub verb: Verb,
    pub symbol: Option<String>,
    pub function: Option<String>,
    pub lambda: Complex64,
    pub size: usize,
    pub grid: GridConfig,
    pub seed: u64,
}

impl ComputeRequest {
    pub fn new(verb: Verb) -> Self {
        ComputeRequest {
            verb,
            symbol: None,
            function: None,
            lambda: Complex64::new(0.0, 0.0),
            size: DEFAULT_SECTION,
            grid: GridConfig::default(),
            seed: DEFAULT_SEED,
        }
    }
}

fn descriptor(text: &Option<String>, what: &str, verb: Verb) -> Result<Descriptor, CliError> {
    let t = text.as_deref().ok_or_else(|| CliError::ConfigInvalid(format!("{verb} needs --{what}")))?;
    Ok(parse_descriptor(t)?)
}

pub fn compute(req: &ComputeRequest) -> Result<ExperimentReport, CliError> {
    let cfg = req.grid;
    cfg.validate().map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
    let mut b = ReportBuilder::new(&format!("compute/{}", req.verb), cfg, req.seed);
    match req.verb {
        Verb::Kernel => {
            let g = descriptor(&req.symbol, "symbol", req.verb)?.build(cfg)?;
            let k = match numerical_kernel(&g, req.size) {
                Ok(k) => k,
                Err(KernelError::UncertainDimension(k)) => {
                    b.uncertain(format!("singular-value gap {:.3e} below the ratio threshold", k.gap));
                    *k
                }
                Err(e) => return Err(e.into()),
            };
            if !k.verified {
                b.uncertain("kernel basis residuals above the symbol tolerance");
            }
            b.info("dimension", k.dimension as f64);
            b.info("gap", k.gap);
            b.info("max_residual", k.max_residual());
            b.info("tolerance", k.tolerance);
            for (i, v) in k.vectors.iter().enumerate() {
                b.artifact(&format!("basis{i}_taylor"), &v.taylor(32));
            }
        }
        Verb::InnerOuter => {
            let d = descriptor(&req.function, "function", req.verb)?;
            let f = d.build_function(cfg)?;
            let p = inner_outer(&f)?;
            if let Descriptor::ModelKernel { theta, lambda, conjugate: true } = &d {
                // Outer factor of k̃_λ is k_λ up to a unimodular constant.
                let k = model_kernels(&make_inner(theta.clone(), cfg)?, Complex64::new(lambda[0], lambda[1]))?.k;
                let k0 = k.at_origin();
                let rotated = p.outer.scale(k0 / k0.norm());
                b.at_most("outer_vs_reproducing_kernel", rotated.max_distance(&k) / k.sup_norm(), 1e-6);
            }
            b.info("residual", p.residual);
            b.info("clamped_fraction", p.clamped_fraction);
            b.info("outer_at_origin_re", p.outer.at_origin().re);
            b.info("inner_unimodular_defect", p.inner.unimodular_defect());
            b.artifact("inner_taylor", &p.inner.taylor(32));
            b.artifact("outer_taylor", &p.outer.taylor(32));
        }
        Verb::Crofoot => {
            let d = descriptor(&req.symbol, "symbol", req.verb)?;
            let Descriptor::Inner(spec) = d else {
                return Err(CliError::ConfigInvalid("crofoot needs an inner descriptor as --symbol".into()));
            };
            let theta = make_inner(spec, cfg)?;
            let t = crofoot(&theta, req.lambda)?;
            b.info("theta_at_lambda_re", t.theta_at_lambda.re);
            b.info("theta_at_lambda_im", t.theta_at_lambda.im);
            b.info("transform_unimodular_defect", t.theta_lambda.unimodular_defect());
            b.artifact("transform_taylor", &t.theta_lambda.taylor(32));
            b.artifact("multiplier_taylor", &t.multiplier.taylor(32));
        }
        Verb::Conjugate => {
            let g = descriptor(&req.symbol, "symbol", req.verb)?.build(cfg)?;
            let f = descriptor(&req.function, "function", req.verb)?.build_function(cfg)?;
            let ctx = ConjugationContext::new(g)?;
            let cf = conjugate_in_kernel(&ctx, &f)?;
            b.info("norm_defect", (cf.norm() - f.norm()).abs());
            b.artifact("image_taylor", &cf.taylor(32));
        }
        Verb::MaximalTest => {
            let g = descriptor(&req.symbol, "symbol", req.verb)?.build(cfg)?;
            let f = descriptor(&req.function, "function", req.verb)?.build_function(cfg)?;
            let m = maximal_test(&g, &f)?;
            b.info("maximal", if m.maximal { 1.0 } else { 0.0 });
            b.info("kernel_residual", m.kernel_residual);
            b.note(format!("partner analytic: {}, outer: {:?}", m.analytic, m.outer.as_ref().map(|o| o.verdict)));
            b.artifact("partner_taylor", &m.partner.taylor(32));
        }
    }
    Ok(b.finish())
}
