use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter record violates one of its invariants.
    #[error("invalid field `{field}`: {reason}")]
    Schema { field: String, reason: String },

    /// `Q >= 0` on the whole half line: no classically allowed region.
    #[error("no classically allowed region at E = {energy}")]
    NoBoundRegion { energy: f64 },

    #[error("{what} did not converge after {iterations} iterations (best residual {best_residual:e})")]
    Convergence {
        what: String,
        iterations: usize,
        best_residual: f64,
    },

    /// A second classical region intersects the integration range of a
    /// two-turning-point construction.
    #[error(
        "second classical region ({r_a:.6}, {r_b:.6}) a_B below the inner turning point for l = {l}; \
         pass the two-turning-point override to ignore it"
    )]
    Anomaly { l: u32, r_a: f64, r_b: f64 },

    /// The grid does not reach far enough beyond the outer turning point to
    /// judge the decay of a state.
    #[error("r_max = {r_max} does not extend past the tail start {tail_start}")]
    InsufficientDomain { r_max: f64, tail_start: f64 },

    #[error("no bound state with n = {n}, l = {l} found: {reason}")]
    StateNotFound { n: u32, l: u32, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn schema(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
