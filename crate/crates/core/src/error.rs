//! Error taxonomy shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical parameter violates its invariant; `key` is the field or
    /// dotted config path.
    #[error("invalid parameter `{key}`: {message}")]
    InvalidParameter { key: String, message: String },

    /// Concentration profile requested at a non-positive time.
    #[error("invalid time t = {t} s: the release profile is defined for t > 0")]
    InvalidTime { t: f64 },

    /// FET bias point outside the linear operating region.
    #[error(
        "bias outside linear region (requires V_SG > |V_TH| and V_SD <= V_SG - |V_TH|): \
         V_SD = {v_sd} V, V_SG = {v_sg} V, V_TH = {v_th} V"
    )]
    BiasRegion { v_sd: f64, v_sg: f64, v_th: f64 },

    /// Noise integration band is empty or inverted.
    #[error("invalid frequency band: requires 0 < f_L < f_H, got f_L = {f_l} Hz, f_H = {f_h} Hz")]
    InvalidBand { f_l: f64, f_h: f64 },

    /// Constellation levels are not strictly increasing.
    #[error("degenerate constellation: {0}")]
    DegenerateConstellation(String),

    /// A pairwise ML threshold fell outside the open interval between the
    /// adjacent symbol means (Gaussian-approximation breakdown).
    #[error(
        "threshold ordering violated between symbols {lower} and {upper}: \
         lambda = {lambda:e} A outside ({mu_lo:e}, {mu_hi:e}) A"
    )]
    ThresholdOrdering {
        lower: usize,
        upper: usize,
        lambda: f64,
        mu_lo: f64,
        mu_hi: f64,
    },

    /// Equilibrium binding statistics are invalid for a symbol: the pulse is
    /// too short relative to the binding correlation time.
    #[error(
        "equilibrium assumption invalid for symbol {symbol}: pulse duration \
         {tau_p:e} s < {margin} x binding correlation time {tau_b:e} s"
    )]
    EquilibriumInvalid {
        symbol: usize,
        tau_p: f64,
        tau_b: f64,
        margin: f64,
    },

    /// A numerical oracle could not complete within its budget/precision.
    #[error("oracle failure in {context}: {message}")]
    OracleFailure { context: String, message: String },

    /// Monte-Carlo run would observe too few errors to be meaningful.
    #[error(
        "insufficient trials: expected about {expected:.2} detection errors \
         over {trials} trials; need at least {required}"
    )]
    InsufficientTrials {
        expected: f64,
        trials: u64,
        required: f64,
    },

    /// Unknown config/sweep key path.
    #[error("unknown key `{0}`")]
    UnknownKey(String),

    /// Key exists but cannot be swept numerically.
    #[error("key `{0}` is not numeric and cannot be swept")]
    NonNumericKey(String),

    /// Malformed sweep specification.
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    /// Metric name not in the supported set.
    #[error("unknown metric `{0}` (expected one of mu_I, snr_db, sep, tau_B, p_on, rho_R, lambda_D, k_T, validity)")]
    UnknownMetric(String),

    /// Config file could not be read or parsed.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(key: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            key: key.to_owned(),
            message: format!("must be positive and finite, got {value}"),
        })
    }
}

pub(crate) fn require_non_negative(key: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            key: key.to_owned(),
            message: format!("must be non-negative and finite, got {value}"),
        })
    }
}

/// Prefix an [`Error::InvalidParameter`] key with a config section name.
pub(crate) fn scope_key(section: &str, err: Error) -> Error {
    match err {
        Error::InvalidParameter { key, message } => Error::InvalidParameter {
            key: format!("{section}.{key}"),
            message,
        },
        other => other,
    }
}
