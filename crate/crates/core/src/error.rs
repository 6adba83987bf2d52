use thiserror::Error;

/// Errors for contract violations and unusable inputs.
///
/// Numerical degradation that the caller is expected to inspect (ray
/// truncation reasons, failed landings, census verdicts) is carried as data
/// in the result types instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operation not supported for this map family: {0}")]
    UnsupportedFamily(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point is not fixed under the {period}-th iterate (residual {residual:.3e})")]
    NotPeriodic { period: u32, residual: f64 },

    #[error("cycle center is not irrationally indifferent (classified {0})")]
    NotIndifferent(String),

    #[error("separators of groups {0} and {1} cross away from their landing points")]
    CrossingSeparators(usize, usize),

    #[error("decomposition period {p} is not a multiple of cycle period {q}")]
    PeriodMismatch { p: u32, q: u32 },

    #[error("cannot parse map spec {0:?}: expected \"exp:re,im\" or \"quad:re,im\"")]
    MapParse(String),

    #[error("cannot parse address {0:?}: expected \"pre,...|per,...\" like \"3|1,2\" or \"|0\"")]
    AddressParse(String),

    #[error("cannot parse angle {0:?}: expected a reduced fraction of turns like \"1/3\"")]
    AngleParse(String),
}
