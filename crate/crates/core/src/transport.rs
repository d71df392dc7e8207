//! Advective–diffusive transport of an impulsively released ligand bolus
//! along a rectangular microfluidic channel, including flow-enhanced
//! (Taylor–Aris) axial dispersion.

use serde::{Deserialize, Serialize};

use crate::consts::BOLUS_CAPTURE_FRACTION;
use crate::error::{require_non_negative, require_positive, Error, Result};

/// Rectangular channel and release-to-receiver geometry. SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    /// Channel height, m.
    pub h_ch: f64,
    /// Channel width, m.
    pub l_ch: f64,
    /// Mean flow velocity, m/s.
    pub u: f64,
    /// Release-point to receiver distance, m.
    pub d: f64,
}

impl ChannelSpec {
    pub fn new(h_ch: f64, l_ch: f64, u: f64, d: f64) -> Result<Self> {
        Self { h_ch, l_ch, u, d }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        require_positive("h_ch", self.h_ch)?;
        require_positive("l_ch", self.l_ch)?;
        require_positive("u", self.u)?;
        require_positive("d", self.d)?;
        Ok(self)
    }

    /// Cross-sectional area of the channel, m².
    pub fn area(&self) -> f64 {
        self.h_ch * self.l_ch
    }
}

/// Information-carrying molecule: free diffusion and receptor kinetics.
/// SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LigandSpec {
    /// Free diffusion coefficient, m²/s.
    pub d0: f64,
    /// Receptor association rate constant, m³/s.
    pub k1: f64,
    /// Receptor dissociation rate constant, 1/s.
    pub k_neg1: f64,
    /// Elementary charges carried per molecule.
    pub n_e: f64,
}

impl LigandSpec {
    pub fn new(d0: f64, k1: f64, k_neg1: f64, n_e: f64) -> Result<Self> {
        Self { d0, k1, k_neg1, n_e }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        require_positive("d0", self.d0)?;
        require_positive("k1", self.k1)?;
        require_positive("k_neg1", self.k_neg1)?;
        require_non_negative("n_e", self.n_e)?;
        Ok(self)
    }

    /// Dissociation constant K_D = k₋₁/k₁, molecules/m³.
    pub fn k_d(&self) -> f64 {
        self.k_neg1 / self.k1
    }
}

/// Effective axial diffusion coefficient with Taylor–Aris dispersion, m²/s.
///
/// D = D0·(1 + 8.5·u²h²l² / (210·D0²·(h² + 2.4hl + l²))); reduces to D0 at
/// zero flow and grows quadratically with u.
pub fn effective_diffusion(ch: &ChannelSpec, lig: &LigandSpec) -> f64 {
    let (h, l) = (ch.h_ch, ch.l_ch);
    let dispersion = 8.5 * ch.u * ch.u * h * h * l * l
        / (210.0 * lig.d0 * lig.d0 * (h * h + 2.4 * h * l + l * l));
    lig.d0 * (1.0 + dispersion)
}

/// Time for the bolus center to drift to the receiver: t_D = d/u, s.
pub fn propagation_delay(ch: &ChannelSpec) -> f64 {
    ch.d / ch.u
}

/// Duration over which the central 99% of the bolus passes the receiver:
/// τ_p = (4/u)·√(−ln(0.99)·D·t_D), s.
pub fn passage_duration(ch: &ChannelSpec, lig: &LigandSpec) -> f64 {
    let d_eff = effective_diffusion(ch, lig);
    let t_d = propagation_delay(ch);
    (4.0 / ch.u) * (-(BOLUS_CAPTURE_FRACTION.ln()) * d_eff * t_d).sqrt()
}

/// Cross-section-averaged ligand concentration at axial position `x` (m) and
/// time `t` (s) after an impulsive release of `n_m` molecules, molecules/m³.
pub fn concentration(
    ch: &ChannelSpec,
    lig: &LigandSpec,
    n_m: f64,
    x: f64,
    t: f64,
) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidTime { t });
    }
    Ok(concentration_profile(ch, lig, n_m, x, t))
}

/// Same Gaussian profile without the time guard; returns 0 for t ≤ 0
/// (the release limit). Used by the ODE oracle which integrates from t = 0.
pub(crate) fn concentration_profile(
    ch: &ChannelSpec,
    lig: &LigandSpec,
    n_m: f64,
    x: f64,
    t: f64,
) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let d_eff = effective_diffusion(ch, lig);
    let dx = x - ch.u * t;
    let spread = 4.0 * core::f64::consts::PI * d_eff * t;
    n_m / (ch.area() * spread.sqrt()) * (-dx * dx / (4.0 * d_eff * t)).exp()
}

/// Received concentration: the profile evaluated at the receiver position
/// when the bolus center arrives, ρ_R = N_m / (A_ch·√(4πD·t_D)),
/// molecules/m³.
pub fn received_concentration(ch: &ChannelSpec, lig: &LigandSpec, n_m: f64) -> f64 {
    let d_eff = effective_diffusion(ch, lig);
    let t_d = propagation_delay(ch);
    n_m / (ch.area() * (4.0 * core::f64::consts::PI * d_eff * t_d).sqrt())
}
