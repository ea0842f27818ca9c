use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("wavenumber outside the perturbative dark-state regime: |k c| = {kc:e} >= {limit:e}")]
    OutOfRegime { kc: f64, limit: f64 },

    #[error("filling {n_particles}/{n_sites} exceeds the occupancy cutoff n_max = {n_max}")]
    FillingExceedsCutoff {
        n_particles: usize,
        n_sites: usize,
        n_max: usize,
    },

    #[error("Hilbert-space dimension {dim} exceeds the exact-diagonalization limit {limit}")]
    DimensionTooLarge { dim: u128, limit: usize },

    #[error("eigensolver did not converge: residual {residual:e} after {iterations} iterations")]
    EigenNotConverged { residual: f64, iterations: usize },

    #[error("negative compressibility: E(N-1) = {e_minus}, E(N) = {e_mid}, E(N+1) = {e_plus}, second difference {second_diff:e}")]
    NegativeCompressibility {
        e_minus: f64,
        e_mid: f64,
        e_plus: f64,
        second_diff: f64,
    },

    #[error("quadrature failed at z = {z}: estimated error {error:e}")]
    Quadrature { z: f64, error: f64 },

    #[error("ODE step failure at p = {p}, t = {t}: step size underflow")]
    OdeStepFailure { p: f64, t: f64 },

    #[error("protocol requires infinitely slow switching (K0 = {k0})")]
    InfinitelySlowSwitching { k0: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            reason: format!("must be strictly positive and finite, got {value}"),
        })
    }
}

pub(crate) fn require_non_negative(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            reason: format!("must be non-negative and finite, got {value}"),
        })
    }
}
