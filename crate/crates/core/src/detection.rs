//! M-ary concentration-shift-keying detection: constellation construction,
//! per-adjacent-pair ML thresholds for unequal-variance Gaussians, and the
//! closed-form symbol error probability.

use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::fet_output::SymbolLink;
use crate::link::LinkModel;
use crate::special::erfc_ln;

/// Molecule-count alphabet: level m carries N_m = ⌈(m+1)^s·K/M^s⌉ molecules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constellation {
    /// Alphabet size M.
    pub m: usize,
    /// Maximum molecules per symbol K.
    pub k: f64,
    /// Spacing exponent s (s = 1 is uniform spacing K/M).
    pub s: f64,
    /// Released-molecule counts N_0 < N_1 < … < N_{M−1}.
    pub levels: Vec<u64>,
}

/// Per-symbol Gaussian output statistics feeding the detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolStats {
    /// Mean output current, A.
    pub mu_i: f64,
    /// Output current standard deviation, A.
    pub sigma_i: f64,
}

/// Symbol statistics plus the M−1 decision thresholds between adjacent
/// symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionModel {
    pub symbols: Vec<SymbolStats>,
    /// thresholds[m−1] = λ_m separates symbols m−1 and m, A.
    pub thresholds: Vec<f64>,
}

/// Symbol error probability with enough dynamic range to survive deep
/// underflow: `p` clamps to [0, 1] and may round to 0 while `log10_p`
/// stays finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SepValue {
    pub p: f64,
    pub log10_p: f64,
    /// `p` underflowed f64 while the log-domain value is finite.
    pub underflowed: bool,
}

/// End-to-end SEP computation artifacts: per-symbol links, the decision
/// model, and the error probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SepReport {
    pub links: Vec<SymbolLink>,
    pub model: DecisionModel,
    pub sep: SepValue,
}

/// Build the ceiling-spaced constellation N_m = ⌈(m+1)^s·K/M^s⌉.
pub fn build_constellation(m: usize, k: f64, s: f64) -> Result<Constellation> {
    if m < 2 {
        return Err(Error::DegenerateConstellation(format!("alphabet size M = {m} < 2")));
    }
    if !(k.is_finite() && k >= m as f64) {
        return Err(Error::DegenerateConstellation(format!(
            "maximum molecule count K = {k} must be finite and at least M = {m}"
        )));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::DegenerateConstellation(format!("exponent s = {s} must be positive")));
    }
    let scale = k / (m as f64).powf(s);
    let levels: Vec<u64> = (0..m)
        .map(|i| (((i + 1) as f64).powf(s) * scale).ceil() as u64)
        .collect();
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::DegenerateConstellation(format!(
            "levels {levels:?} are not strictly increasing (K too small for M, s)"
        )));
    }
    Ok(Constellation { m, k, s, levels })
}

/// Density crossing of two Gaussians N(μ0, σ0²) and N(μ1, σ1²) with
/// μ0 < μ1 — the root of the adjacent-pair likelihood equation that lies
/// toward the interior.
///
/// Cancellation-free rearrangement of the quadratic-root closed form:
/// λ = μ0 + σ0·(Δμ² + 2σ1²L)/(σ1R + σ0Δμ) with Δ = σ1²−σ0²,
/// L = ½·ln1p(Δ/σ0²), R = √(Δμ² + 2ΔL). Reduces to the exact midpoint at
/// σ0 = σ1 and stays fully accurate for near-equal variances, where the
/// textbook form loses half the significand.
pub fn density_crossing(mu0: f64, sigma0: f64, mu1: f64, sigma1: f64) -> f64 {
    let dmu = mu1 - mu0;
    let delta = sigma1 * sigma1 - sigma0 * sigma0;
    let l = 0.5 * (delta / (sigma0 * sigma0)).ln_1p();
    let r = (dmu * dmu + 2.0 * delta * l).sqrt();
    mu0 + sigma0 * (dmu * dmu + 2.0 * sigma1 * sigma1 * l) / (sigma1 * r + sigma0 * dmu)
}

/// ML thresholds between each adjacent symbol pair. Requires strictly
/// increasing means; every threshold must fall strictly between its
/// neighboring means or the Gaussian single-threshold rule has broken down.
pub fn decision_thresholds(symbols: &[SymbolStats]) -> Result<Vec<f64>> {
    let mut thresholds = Vec::with_capacity(symbols.len().saturating_sub(1));
    for (i, pair) in symbols.windows(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        let lambda = density_crossing(a.mu_i, a.sigma_i, b.mu_i, b.sigma_i);
        if !(lambda > a.mu_i && lambda < b.mu_i) {
            return Err(Error::ThresholdOrdering {
                lower: i,
                upper: i + 1,
                lambda,
                mu_lo: a.mu_i,
                mu_hi: b.mu_i,
            });
        }
        thresholds.push(lambda);
    }
    Ok(thresholds)
}

impl DecisionModel {
    /// Validate the per-symbol statistics and compute thresholds.
    ///
    /// Fully identical symbol distributions are accepted as the documented
    /// degenerate case: thresholds collapse to the common mean and the SEP
    /// formula evaluates to (M−1)/M.
    pub fn new(symbols: Vec<SymbolStats>) -> Result<Self> {
        if symbols.len() < 2 {
            return Err(Error::DegenerateConstellation(format!(
                "decision model needs at least two symbols, got {}",
                symbols.len()
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            if !(s.sigma_i > 0.0 && s.sigma_i.is_finite() && s.mu_i.is_finite()) {
                return Err(Error::InvalidParameter {
                    key: format!("symbols[{i}]"),
                    message: format!(
                        "needs finite mu_i and positive sigma_i, got mu_i = {}, sigma_i = {}",
                        s.mu_i, s.sigma_i
                    ),
                });
            }
        }
        let degenerate = symbols.windows(2).all(|w| w[0] == w[1]);
        let thresholds = if degenerate {
            symbols[..symbols.len() - 1].iter().map(|s| s.mu_i).collect()
        } else {
            if symbols.windows(2).any(|w| w[1].mu_i <= w[0].mu_i) {
                return Err(Error::InvalidParameter {
                    key: "symbols".to_owned(),
                    message: "symbol means must be strictly increasing".to_owned(),
                });
            }
            decision_thresholds(&symbols)?
        };
        Ok(Self { symbols, thresholds })
    }
}

/// Closed-form SEP under equal priors and one threshold per adjacent pair:
///
/// P_e = (1/2M)·[erfc((λ_1−μ_0)/(σ_0√2)) + erfc((μ_{M−1}−λ_{M−1})/(σ_{M−1}√2))
///        + Σ_{m=1}^{M−2} (erfc((μ_m−λ_m)/(σ_m√2)) + erfc((λ_{m+1}−μ_m)/(σ_m√2)))].
///
/// Evaluated in the log domain so deeply separated constellations report a
/// finite `log10_p` even when `p` underflows.
pub fn symbol_error_probability(model: &DecisionModel) -> SepValue {
    let m = model.symbols.len();
    let sqrt2 = core::f64::consts::SQRT_2;
    let z = |num: f64, sigma: f64| num / (sigma * sqrt2);
    let mut ln_terms = Vec::with_capacity(2 * (m - 1));
    let first = &model.symbols[0];
    ln_terms.push(erfc_ln(z(model.thresholds[0] - first.mu_i, first.sigma_i)));
    let last = &model.symbols[m - 1];
    ln_terms.push(erfc_ln(z(last.mu_i - model.thresholds[m - 2], last.sigma_i)));
    for i in 1..m - 1 {
        let s = &model.symbols[i];
        ln_terms.push(erfc_ln(z(s.mu_i - model.thresholds[i - 1], s.sigma_i)));
        ln_terms.push(erfc_ln(z(model.thresholds[i] - s.mu_i, s.sigma_i)));
    }
    let max = ln_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ln_sum = max + ln_terms.iter().map(|&t| (t - max).exp()).sum::<f64>().ln();
    let ln_p = ln_sum - (2.0 * m as f64).ln();
    let p = ln_p.exp().clamp(0.0, 1.0);
    SepValue {
        p,
        log10_p: ln_p / core::f64::consts::LN_10,
        underflowed: p < f64::MIN_POSITIVE && ln_p.is_finite(),
    }
}

/// Full-pipeline SEP for a configuration and constellation: per-symbol
/// transport → binding → transduction → FET statistics, thresholds, P_e.
///
/// Fails with the offending symbol index if any level violates the
/// equilibrium-validity condition; bias-region errors propagate from the
/// link construction.
pub fn end_to_end_sep(cfg: &SystemConfig, cons: &Constellation) -> Result<SepReport> {
    let model = LinkModel::new(
        cfg.channel,
        cfg.ligand,
        cfg.geometry,
        cfg.medium,
        cfg.transducer,
        cfg.bias,
    )?;
    let mut links = Vec::with_capacity(cons.levels.len());
    for (symbol, &level) in cons.levels.iter().enumerate() {
        let n_m = level as f64;
        let eq = model.check_equilibrium(n_m);
        if !eq.valid {
            return Err(Error::EquilibriumInvalid {
                symbol,
                tau_p: eq.tau_p,
                tau_b: eq.tau_b,
                margin: eq.margin,
            });
        }
        links.push(model.symbol(n_m)?);
    }
    let stats = links
        .iter()
        .map(|l| SymbolStats { mu_i: l.mu_i, sigma_i: l.var_i.sqrt() })
        .collect();
    let model = DecisionModel::new(stats)?;
    let sep = symbol_error_probability(&model);
    Ok(SepReport { links, model, sep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constellation_uniform_binary_and_quaternary() {
        let c4 = build_constellation(4, 1e6, 1.0).unwrap();
        assert_eq!(c4.levels, vec![250_000, 500_000, 750_000, 1_000_000]);
        let c2 = build_constellation(2, 1e6, 1.0).unwrap();
        assert_eq!(c2.levels, vec![500_000, 1_000_000]);
    }

    #[test]
    fn constellation_quadratic_spacing() {
        let c = build_constellation(4, 1e6, 2.0).unwrap();
        assert_eq!(c.levels, vec![62_500, 250_000, 562_500, 1_000_000]);
    }

    #[test]
    fn constellation_rejects_bad_shapes() {
        assert!(build_constellation(1, 1e6, 1.0).is_err());
        assert!(build_constellation(4, 3.0, 1.0).is_err()); // K < M
        assert!(build_constellation(4, 1e6, 0.0).is_err());
        // Tiny K with sub-linear spacing collapses adjacent levels.
        assert!(matches!(
            build_constellation(4, 4.0, 0.1),
            Err(Error::DegenerateConstellation(_))
        ));
    }

    #[test]
    fn threshold_midpoint_for_equal_variances() {
        let lambda = density_crossing(0.0, 1.0, 1.0, 1.0);
        assert_eq!(lambda, 0.5);
        let symbols = vec![
            SymbolStats { mu_i: 0.0, sigma_i: 1.0 },
            SymbolStats { mu_i: 1.0, sigma_i: 1.0 },
        ];
        assert_eq!(decision_thresholds(&symbols).unwrap(), vec![0.5]);
    }

    #[test]
    fn density_crossing_unequal_variances_frozen() {
        // Crossing of N(0,1) and N(1,4); cross-checked against a
        // high-precision root of the density-equality equation.
        let lambda = density_crossing(0.0, 1.0, 1.0, 2.0);
        assert_relative_eq!(lambda, 1.1808783182985092, max_relative = 1e-14);
        // That crossing lies outside (μ0, μ1): the guarded builder must
        // reject it as a Gaussian-approximation breakdown.
        let symbols = vec![
            SymbolStats { mu_i: 0.0, sigma_i: 1.0 },
            SymbolStats { mu_i: 1.0, sigma_i: 2.0 },
        ];
        assert!(matches!(
            decision_thresholds(&symbols),
            Err(Error::ThresholdOrdering { lower: 0, upper: 1, .. })
        ));
    }

    fn log_density(x: f64, mu: f64, sigma: f64) -> f64 {
        let z = (x - mu) / sigma;
        -sigma.ln() - 0.5 * z * z
    }

    #[test]
    fn density_equality_holds_for_near_equal_variances() {
        // The regime where the textbook closed form catastrophically cancels.
        for &eps in &[0.0, 1e-13, 1e-9, 1e-5, 1e-2] {
            let (mu0, s0) = (1.0, 0.1);
            let (mu1, s1) = (1.5, 0.1 * (1.0 + eps));
            let lambda = density_crossing(mu0, s0, mu1, s1);
            assert!(lambda > mu0 && lambda < mu1);
            let gap = (log_density(lambda, mu0, s0) - log_density(lambda, mu1, s1)).abs();
            assert!(gap <= 1e-9, "eps = {eps}: log-density gap {gap}");
        }
    }

    #[test]
    fn sep_half_for_identical_binary_symbols() {
        let s = SymbolStats { mu_i: 3.0, sigma_i: 0.5 };
        let model = DecisionModel::new(vec![s, s]).unwrap();
        assert_eq!(model.thresholds, vec![3.0]);
        let sep = symbol_error_probability(&model);
        assert_relative_eq!(sep.p, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn sep_degenerate_m_ary_is_m_minus_one_over_m() {
        let s = SymbolStats { mu_i: 1.0, sigma_i: 1.0 };
        let model = DecisionModel::new(vec![s; 5]).unwrap();
        assert_relative_eq!(symbol_error_probability(&model).p, 0.8, max_relative = 1e-14);
    }

    #[test]
    fn sep_underflow_reports_log_domain() {
        let model = DecisionModel::new(vec![
            SymbolStats { mu_i: 0.0, sigma_i: 1.0 },
            SymbolStats { mu_i: 100.0, sigma_i: 1.0 },
        ])
        .unwrap();
        let sep = symbol_error_probability(&model);
        assert_eq!(sep.p, 0.0);
        assert!(sep.underflowed);
        assert!(sep.log10_p < -500.0 && sep.log10_p.is_finite());
    }

    #[test]
    fn sep_decreases_when_distances_scale_up() {
        let base = DecisionModel::new(vec![
            SymbolStats { mu_i: 0.0, sigma_i: 0.3 },
            SymbolStats { mu_i: 1.0, sigma_i: 0.3 },
            SymbolStats { mu_i: 2.0, sigma_i: 0.3 },
        ])
        .unwrap();
        let spread = DecisionModel::new(vec![
            SymbolStats { mu_i: 0.0, sigma_i: 0.3 },
            SymbolStats { mu_i: 2.0, sigma_i: 0.3 },
            SymbolStats { mu_i: 4.0, sigma_i: 0.3 },
        ])
        .unwrap();
        assert!(
            symbol_error_probability(&spread).log10_p < symbol_error_probability(&base).log10_p
        );
    }

    #[test]
    fn sep_binary_defaults_frozen() {
        // Gaussian stats of the default binary constellation {5e5, 1e6}.
        let model = DecisionModel::new(vec![
            SymbolStats { mu_i: 5.002930010249248e-10, sigma_i: 1.7966705961124255e-11 },
            SymbolStats { mu_i: 8.469636122483175e-10, sigma_i: 1.867491506286132e-11 },
        ])
        .unwrap();
        let sep = symbol_error_probability(&model);
        assert_relative_eq!(sep.p, 1.523088e-21, max_relative = 1e-6);
    }

    #[test]
    fn decision_model_rejects_disordered_means() {
        let err = DecisionModel::new(vec![
            SymbolStats { mu_i: 1.0, sigma_i: 0.1 },
            SymbolStats { mu_i: 0.5, sigma_i: 0.2 },
        ]);
        assert!(err.is_err());
    }
}
