//! FET readout: transconductance in the linear region, mean signal current,
//! output-referred noise PSDs (binding Lorentzian + correlated
//! number–mobility 1/f), total output variance, and SNR.

use serde::{Deserialize, Serialize};

use crate::binding::{binding_noise_psd, BindingStats, ReceiverGeometry};
use crate::consts::{K_B, Q_E, SNR_FLOOR_DB};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::transducer::{TransducerSpec, TransducerState};
use crate::transport::{effective_diffusion, ChannelSpec, LigandSpec};

/// Which composition of the printed 1/f formulas to use.
///
/// The literal text squares the transconductance twice (once inside the
/// flatband-voltage PSD and once mapping it to current). `Standard` keeps
/// the flatband PSD device-only (a single g² total), which is the
/// conventional correlated number–mobility model; `AsPrinted` reproduces
/// the literal composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlickerModel {
    #[default]
    Standard,
    AsPrinted,
}

/// FET bias point and 1/f-noise parameters. SI units except `n_ot`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FetBias {
    /// Source–drain voltage, V.
    pub v_sd: f64,
    /// Source–gate voltage, V.
    pub v_sg: f64,
    /// Threshold voltage, V.
    pub v_th: f64,
    /// Hole mobility, m²/(V·s).
    pub mu_p: f64,
    /// Oxide trap density, eV⁻¹·m⁻³ (converted to J⁻¹·m⁻³ inside the
    /// flatband PSD).
    pub n_ot: f64,
    /// Carrier tunneling distance into the oxide, m.
    pub lambda_tun: f64,
    /// Mobility-scattering coefficient, V·s/C.
    pub alpha_s: f64,
    /// Low-frequency cutoff below which 1/f noise is taken flat
    /// (set by the total observation time), Hz.
    pub f_l: f64,
    /// Upper integration limit of the noise band, Hz.
    pub f_h: f64,
    /// 1/f composition variant.
    pub flicker_model: FlickerModel,
}

impl FetBias {
    pub fn validated(self) -> Result<Self> {
        require_non_negative("v_sd", self.v_sd)?;
        require_positive("mu_p", self.mu_p)?;
        require_positive("n_ot", self.n_ot)?;
        require_positive("lambda_tun", self.lambda_tun)?;
        require_positive("alpha_s", self.alpha_s)?;
        if !(self.f_l > 0.0 && self.f_l < self.f_h && self.f_h.is_finite()) {
            return Err(Error::InvalidBand { f_l: self.f_l, f_h: self.f_h });
        }
        self.check_linear_region()?;
        Ok(self)
    }

    /// Overdrive voltage V_SG − |V_TH|, V.
    pub fn overdrive(&self) -> f64 {
        self.v_sg - self.v_th.abs()
    }

    /// The device must sit in the linear (triode) region:
    /// V_SG > |V_TH| and V_SD ≤ V_SG − |V_TH|.
    pub fn check_linear_region(&self) -> Result<()> {
        if self.v_sg > self.v_th.abs() && self.v_sd <= self.overdrive() {
            Ok(())
        } else {
            Err(Error::BiasRegion { v_sd: self.v_sd, v_sg: self.v_sg, v_th: self.v_th })
        }
    }
}

/// Per-symbol link output: received concentration, binding statistics, and
/// the resulting current mean/variance/SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolLink {
    /// Received concentration for the symbol, molecules/m³.
    pub rho_r: f64,
    /// Equilibrium binding statistics at that concentration.
    pub stats: BindingStats,
    /// Mean output current, A.
    pub mu_i: f64,
    /// Output current variance over the noise band, A².
    pub var_i: f64,
    /// 10·log₁₀(μ_I²/σ_I²), dB.
    pub snr_db: f64,
}

/// Transconductance in the linear region:
/// g_FET = μ_p·c_ox·(w_R/l_R)·V_SD, A/V.
pub fn transconductance(
    geo: &ReceiverGeometry,
    td: &TransducerSpec,
    bias: &FetBias,
) -> Result<f64> {
    bias.check_linear_region()?;
    Ok(bias.mu_p * td.c_ox_area() * (geo.w_r() / geo.l_r) * bias.v_sd)
}

/// Mean output current for a release of `n_m` molecules, closed form:
/// μ_I = g_FET·Ψ_L·N_R·(1 + (K_D·A_ch/N_m)·√(4πD·d/u))⁻¹, A.
///
/// Identical (to rounding) to the composition g_FET·Ψ_L·μ_NB through the
/// transport and binding modules.
pub fn mean_current(
    ch: &ChannelSpec,
    lig: &LigandSpec,
    geo: &ReceiverGeometry,
    state: &TransducerState,
    g_fet: f64,
    n_m: f64,
) -> f64 {
    if n_m == 0.0 {
        return 0.0;
    }
    let d_eff = effective_diffusion(ch, lig);
    let spread = (4.0 * core::f64::consts::PI * d_eff * ch.d / ch.u).sqrt();
    let occupancy = 1.0 / (1.0 + lig.k_d() * ch.area() / n_m * spread);
    g_fet * state.psi_l * geo.n_r() * occupancy
}

/// Output-referred 1/f (flicker) noise PSD at frequency `f`, A²/Hz.
///
/// S_IF(f) = S_VFB(|f|)·g_FET²·[1 + α_s·μ_p·c_ox·(V_SG−|V_TH|)]² with the
/// flatband-voltage PSD S_VFB = λ_tun·k_B·T·q²·N_ot/(w_R·l_R·c_ox²·|f|),
/// held flat below `f_l`. `temperature` in K.
pub fn flicker_psd(
    geo: &ReceiverGeometry,
    td: &TransducerSpec,
    bias: &FetBias,
    temperature: f64,
    f: f64,
) -> f64 {
    let f_abs = f.abs().max(bias.f_l);
    let c_ox = td.c_ox_area();
    let n_ot_si = bias.n_ot / Q_E; // eV⁻¹·m⁻³ -> J⁻¹·m⁻³
    let mut s_vfb = bias.lambda_tun * K_B * temperature * Q_E * Q_E * n_ot_si
        / (geo.area() * c_ox * c_ox * f_abs);
    let g = bias.mu_p * c_ox * (geo.w_r() / geo.l_r) * bias.v_sd;
    if bias.flicker_model == FlickerModel::AsPrinted {
        s_vfb *= g * g;
    }
    let bracket = 1.0 + bias.alpha_s * bias.mu_p * c_ox * bias.overdrive();
    s_vfb * g * g * bracket * bracket
}

/// Total output-referred noise PSD: binding Lorentzian mapped through the
/// transducer and FET, plus flicker. A²/Hz.
pub fn output_noise_psd(
    stats: &BindingStats,
    state: &TransducerState,
    geo: &ReceiverGeometry,
    td: &TransducerSpec,
    bias: &FetBias,
    temperature: f64,
    f: f64,
) -> f64 {
    let g = bias.mu_p * td.c_ox_area() * (geo.w_r() / geo.l_r) * bias.v_sd;
    let gain = state.psi_l * g;
    binding_noise_psd(stats, f) * gain * gain + flicker_psd(geo, td, bias, temperature, f)
}

/// Output current variance over the two-sided band [−f_h, f_h], A².
///
/// Closed form: binding part var_NB·(Ψ_L·g_FET)²·(2/π)·arctan(2π·f_h·τ_B)
/// plus flicker part 2·A_F·(1 + ln(f_h/f_L)) with A_F = S_IF(f_L)·f_L.
pub fn output_variance(
    stats: &BindingStats,
    state: &TransducerState,
    geo: &ReceiverGeometry,
    td: &TransducerSpec,
    bias: &FetBias,
    temperature: f64,
    f_h: f64,
) -> Result<f64> {
    if !(f_h > bias.f_l) {
        return Err(Error::InvalidBand { f_l: bias.f_l, f_h });
    }
    let g = bias.mu_p * td.c_ox_area() * (geo.w_r() / geo.l_r) * bias.v_sd;
    let gain = state.psi_l * g;
    let binding = stats.var_nb * gain * gain * (2.0 / core::f64::consts::PI)
        * (2.0 * core::f64::consts::PI * f_h * stats.tau_b).atan();
    let a_f = flicker_psd(geo, td, bias, temperature, bias.f_l) * bias.f_l;
    let flicker = 2.0 * a_f * (1.0 + (f_h / bias.f_l).ln());
    Ok(binding + flicker)
}

/// Output SNR in dB: 10·log₁₀(μ_I²/σ_I²), floored at
/// [`SNR_FLOOR_DB`] for a zero-mean signal.
pub fn snr_db(mu_i: f64, var_i: f64) -> f64 {
    if mu_i == 0.0 || !mu_i.is_finite() || !(var_i > 0.0) {
        return SNR_FLOOR_DB;
    }
    (10.0 * (mu_i * mu_i / var_i).log10()).max(SNR_FLOOR_DB)
}
