//! Registry of reproducible experiments.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use toeplab_core::toeplitz_engine::{numerical_kernel, KernelBasis, KernelError, ToeplitzSymbol};
use toeplab_core::GridConfig;

use crate::error::CliError;
use crate::report::{ExperimentReport, ReportBuilder};

mod conjugation;
mod hayashi;
mod kernels;
mod maximal;
mod model;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { grid: GridConfig::default(), seed: DEFAULT_SEED, params: BTreeMap::new() }
    }
}

impl RunConfig {
    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub(crate) fn param_usize(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| CliError::ConfigInvalid(format!("parameter {key} must be a non-negative integer, got {v:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentInfo {
    pub id: &'static str,
    pub description: &'static str,
    /// Subject area the experiment reproduces.
    pub topic: &'static str,
    pub params: &'static [&'static str],
}

type Runner = fn(&RunConfig, &mut ReportBuilder) -> Result<(), CliError>;

struct Entry {
    info: ExperimentInfo,
    run: Runner,
}

macro_rules! entry {
    ($id:literal, $desc:literal, $topic:literal, $run:path) => {
        entry!($id, $desc, $topic, $run, [])
    };
    ($id:literal, $desc:literal, $topic:literal, $run:path, [$($p:literal),*]) => {
        Entry { info: ExperimentInfo { id: $id, description: $desc, topic: $topic, params: &[$($p),*] }, run: $run }
    };
}

const REGISTRY: &[Entry] = &[
    entry!("blaschke_kernel_dimensions", "dim ker T of conj(B) equals the zero count for 20 random Blaschke products", "model spaces", kernels::blaschke_kernel_dimensions),
    entry!("conjugation_K_z5", "C(1-z)^4 = (1-z)^4 and C z^2(1-z)^2 = (z-1)^2 in K_{z^5}", "natural conjugation", conjugation::conjugation_k_z5),
    entry!("conjugation_suite", "C is an antilinear isometric involution on K_{z^5}, K_B and K_{Ez}", "natural conjugation", conjugation::conjugation_suite),
    entry!("crofoot_isometry_E", "Crofoot multiplier is isometric for the singular inner function E", "Crofoot transform", model::crofoot_isometry_e),
    entry!("crofoot_isometry_blaschke", "Crofoot multiplier is isometric for a random 5-zero Blaschke product", "Crofoot transform", model::crofoot_isometry_blaschke),
    entry!("crofoot_two_point", "two-point transform with equal points is the Crofoot transform", "Crofoot transform", model::crofoot_two_point),
    entry!("dim_K_zn", "kernel of T of conj(z^n) has dimension n", "model spaces", kernels::dim_k_zn, ["n"]),
    entry!("e_maximal_function", "maximal function of ker T_{conj(E)z} and its outer partner", "maximal function factorisation", maximal::e_maximal_function),
    entry!("eigenfunction_K_z5", "eigenvalues of the conjugation on (1-z)^4, z - z^3 and z in K_{z^5}", "natural conjugation", conjugation::eigenfunction_k_z5),
    entry!("half_integer_family", "kernels of T for conj(z)^{n/2}, n = 1, 3, 5, 7, 9", "half-integer powers", hayashi::half_integer_family),
    entry!("herglotz_linear", "Herglotz data for u = (1+z)/sqrt(2)", "isometric multipliers", hayashi::herglotz_linear),
    entry!("inner_outer_examples", "inner-outer factors of z^2(1+z), the conjugate kernel and E(2+z)", "inner-outer factorisation", maximal::inner_outer_examples),
    entry!("jump_exponents", "jump exponents of the half-circle sign, z^{1/2} and a continuous symbol", "piecewise continuous symbols", hayashi::jump_exponents),
    entry!("kernel_inclusion_examples", "inclusions K_{z^2} in K_{z^3} and ker T_{(z-1)h} = ker T_{zh}", "minimal kernels", kernels::kernel_inclusion_examples),
    entry!("kernel_z_7_2", "Gram constant a = (1+2i)/5 for the kernel of T of conj(z)^{7/2}", "half-integer powers", hayashi::kernel_z_7_2),
    entry!("max_order_examples", "partial order of maximal functions by inner divisibility", "maximal function order", conjugation::max_order_examples),
    entry!("maximal_equivalence", "conjugation and direct maximality criteria agree on 12 instances", "maximal functions", maximal::maximal_equivalence),
    entry!("maximal_factorisation_examples", "plain and modified maximal function factorisations of symbols", "maximal function factorisation", maximal::maximal_factorisation_examples),
    entry!("model_kernels_E", "reproducing and conjugate kernels of K_E at the origin", "model spaces", model::model_kernels_e),
    entry!("multiplier_criterion", "w ker T_h lies in ker T_{h conj(w)/w} for 20 random pairs", "multipliers between kernels", kernels::multiplier_criterion),
    entry!("near_invariance", "backward shift keeps zero-at-origin kernel elements in the kernel", "near invariance", kernels::near_invariance),
    entry!("outer_maximal_construction", "outer maximal functions O(mu + I) for 10 kernels", "natural conjugation", conjugation::outer_maximal_construction),
    entry!("pm_one_symbol", "the half-circle sign symbol has trivial kernel", "piecewise continuous symbols", hayashi::pm_one_symbol),
    entry!("prescribed_inner_K_z5", "maximal function with prescribed inner factor z^2 in K_{z^5}", "natural conjugation", conjugation::prescribed_inner_k_z5),
    entry!("rigidity_probes", "square rigidity of 2+z, 1+z and a reproducing kernel", "rigid functions", maximal::rigidity_probes),
    entry!("wiener_hopf_blaschke", "B = B_- z^n B_+ for 50 random Blaschke products", "Wiener-Hopf factorisation", kernels::wiener_hopf_blaschke),
];

/// All registered experiments, sorted by id.
pub fn list_experiments() -> Vec<ExperimentInfo> {
    let mut v: Vec<ExperimentInfo> = REGISTRY.iter().map(|e| e.info).collect();
    v.sort_by_key(|i| i.id);
    v
}

pub fn run_experiment(id: &str, rc: &RunConfig) -> Result<ExperimentReport, CliError> {
    let entry = REGISTRY.iter().find(|e| e.info.id == id).ok_or_else(|| CliError::UnknownExperiment(id.to_string()))?;
    rc.grid.validate().map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
    if let Some(k) = rc.params.keys().find(|k| !entry.info.params.contains(&k.as_str())) {
        return Err(CliError::ConfigInvalid(format!("experiment {id} takes no parameter {k:?}")));
    }
    log::info!("running {id} with seed {}", rc.seed);
    let mut b = ReportBuilder::new(id, rc.grid, rc.seed);
    match (entry.run)(rc, &mut b) {
        Ok(()) => {}
        Err(CliError::Computation(msg)) => {
            b.check("completed", false);
            b.note(msg);
        }
        Err(e) => return Err(e),
    }
    Ok(b.finish())
}

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Kernel basis and whether its dimension is certain.
pub(crate) fn kernel_at(g: &ToeplitzSymbol, size: usize) -> Result<(KernelBasis, bool), CliError> {
    match numerical_kernel(g, size) {
        Ok(k) => Ok((k, true)),
        Err(KernelError::UncertainDimension(k)) => Ok((*k, false)),
        Err(e) => Err(e.into()),
    }
}

pub(crate) fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

pub(crate) fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}
