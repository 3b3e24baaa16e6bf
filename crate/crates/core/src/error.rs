use thiserror::Error;

/// Errors raised by the swimmer model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Some arm is too short, so two balls would overlap.
    #[error("inadmissible shape: arm {arm} has length {length:.6e}, must exceed {min_length:.6e}")]
    Inadmissible { arm: usize, length: f64, min_length: f64 },

    #[error("balls {i} and {j} overlap: center distance {distance:.6e} <= {min_distance:.6e}")]
    Overlap {
        i: usize,
        j: usize,
        distance: f64,
        min_distance: f64,
    },

    /// Shape left the admissible set while integrating a stroke.
    #[error("shape left the admissible set at t = {time:.6e}: {source}")]
    InadmissibleAt {
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("stokeslet evaluated at zero displacement")]
    StokesletSingularity,

    #[error("singular {what} system (condition number {condition:.3e})")]
    Singular { what: &'static str, condition: f64 },

    #[error("degenerate displacement target: net displacement must be nonzero")]
    DegenerateTarget,

    /// The stroke needed to reach the target does not fit in the admissible set.
    #[error(
        "stroke amplitude too large: arm {arm} would shrink to {min_length:.6e} \
         (limit {limit:.6e}); request a smaller displacement or use longer arms"
    )]
    Amplitude { arm: usize, min_length: f64, limit: f64 },

    #[error("trajectory does not cover whole loops: final time {final_time:.6e}, period {period:.6e}")]
    PartialLoop { final_time: f64, period: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
