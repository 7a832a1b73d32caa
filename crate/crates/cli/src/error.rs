use thiserror::Error;
use toeplab_core::boundary_core::BoundaryError;
use toeplab_core::conjugation_lab::ConjError;
use toeplab_core::descriptor::DescriptorError;
use toeplab_core::factorization::FactorError;
use toeplab_core::hayashi::HayashiError;
use toeplab_core::inner_functions::InnerError;
use toeplab_core::toeplitz_engine::KernelError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown experiment {0:?}; see `toeplab list`")]
    UnknownExperiment(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error("computation failed: {0}")]
    Computation(String),
}

impl CliError {
    /// Errors caused by the invocation rather than the mathematics.
    pub fn is_usage(&self) -> bool {
        !matches!(self, CliError::Computation(_))
    }
}

macro_rules! computation_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Computation(e.to_string())
            }
        })*
    };
}

computation_error!(BoundaryError, ConjError, FactorError, HayashiError, InnerError, KernelError);
