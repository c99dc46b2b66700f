use thiserror::Error;

/// Errors surfaced by the simulator core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The null space of the combined user channel does not have the expected
    /// dimension; the caller should redraw the realization.
    #[error("degenerate channel: null-space dimension {found}, expected {expected}")]
    DegenerateChannel { expected: usize, found: usize },

    /// A trial kept producing degenerate channels after repeated redraws.
    #[error("trial {trial}: {attempts} redraw attempts exhausted")]
    TrialExhausted { trial: u64, attempts: u32 },

    /// The NOMA split makes the SIC decoding threshold undefined
    /// (`theta_g - delta1 * theta_u <= 0`); callers treat the operating
    /// point as being in outage with probability one.
    #[error("infeasible outage threshold: theta_g - delta1*theta_u = {margin} <= 0")]
    InfeasibleThreshold { margin: f64 },

    /// A matrix that must be Hermitian positive definite failed to factor.
    #[error("matrix not positive definite in log-det")]
    SingularMatrix,

    /// A power-split factor of zero with a nonzero number of split samples.
    #[error("power-split factor is zero with {split_samples} split samples")]
    DivisionByZero { split_samples: usize },

    /// Parameters violate the configuration invariants.
    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),
}
