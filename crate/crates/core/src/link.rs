//! Assembled link: caches the symbol-independent derived quantities
//! (dispersion, transport rate, transducer state, transconductance) and
//! evaluates per-symbol statistics from a molecule count.

use serde::Serialize;

use crate::binding::{
    equilibrium_stats, transport_rate, BindingStats, EquilibriumReport, ReceiverGeometry,
};
use crate::consts::EQUILIBRATION_MARGIN;
use crate::error::Result;
use crate::fet_output::{
    flicker_psd, output_noise_psd, output_variance, snr_db, transconductance, FetBias, SymbolLink,
};
use crate::transducer::{capacitances, MediumSpec, TransducerSpec, TransducerState};
use crate::transport::{
    effective_diffusion, passage_duration, propagation_delay, received_concentration, ChannelSpec,
    LigandSpec,
};

/// One physical link, ready to evaluate symbols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkModel {
    pub channel: ChannelSpec,
    pub ligand: LigandSpec,
    pub geometry: ReceiverGeometry,
    pub medium: MediumSpec,
    pub transducer: TransducerSpec,
    pub bias: FetBias,
    /// Effective axial diffusion coefficient, m²/s.
    pub diffusion: f64,
    /// Propagation delay t_D, s.
    pub t_d: f64,
    /// Pulse duration τ_p, s.
    pub tau_p: f64,
    /// Transport rate k_T, m³/s.
    pub k_t: f64,
    /// Screening/capacitance summary.
    pub state: TransducerState,
    /// Transconductance, A/V.
    pub g_fet: f64,
}

impl LinkModel {
    /// Validate all specs and cache the symbol-independent pipeline values.
    pub fn new(
        channel: ChannelSpec,
        ligand: LigandSpec,
        geometry: ReceiverGeometry,
        medium: MediumSpec,
        transducer: TransducerSpec,
        bias: FetBias,
    ) -> Result<Self> {
        let channel = channel.validated()?;
        let ligand = ligand.validated()?;
        let geometry = geometry.validated()?;
        let medium = medium.validated()?;
        let transducer = transducer.validated()?;
        let bias = bias.validated()?;
        let state = capacitances(&geometry, &medium, &transducer, ligand.n_e);
        let g_fet = transconductance(&geometry, &transducer, &bias)?;
        Ok(Self {
            channel,
            ligand,
            geometry,
            medium,
            transducer,
            bias,
            diffusion: effective_diffusion(&channel, &ligand),
            t_d: propagation_delay(&channel),
            tau_p: passage_duration(&channel, &ligand),
            k_t: transport_rate(&channel, &ligand, &geometry),
            state,
            g_fet,
        })
    }

    /// Binding statistics at the received concentration of an `n_m`-molecule
    /// release.
    pub fn binding_stats(&self, n_m: f64) -> BindingStats {
        let rho_r = received_concentration(&self.channel, &self.ligand, n_m);
        equilibrium_stats(rho_r, &self.ligand, &self.geometry, self.k_t)
    }

    /// Equilibrium-validity check for an `n_m`-molecule release.
    pub fn check_equilibrium(&self, n_m: f64) -> EquilibriumReport {
        let stats = self.binding_stats(n_m);
        EquilibriumReport {
            tau_p: self.tau_p,
            tau_b: stats.tau_b,
            margin: EQUILIBRATION_MARGIN,
            valid: self.tau_p >= EQUILIBRATION_MARGIN * stats.tau_b,
        }
    }

    /// Full per-symbol output statistics for an `n_m`-molecule release.
    pub fn symbol(&self, n_m: f64) -> Result<SymbolLink> {
        let rho_r = received_concentration(&self.channel, &self.ligand, n_m);
        let stats = equilibrium_stats(rho_r, &self.ligand, &self.geometry, self.k_t);
        let mu_i = self.g_fet * self.state.psi_l * stats.mu_nb;
        let var_i = output_variance(
            &stats,
            &self.state,
            &self.geometry,
            &self.transducer,
            &self.bias,
            self.medium.temperature,
            self.bias.f_h,
        )?;
        Ok(SymbolLink { rho_r, stats, mu_i, var_i, snr_db: snr_db(mu_i, var_i) })
    }

    /// (binding, flicker, total) output-referred PSD components at `f`,
    /// A²/Hz.
    pub fn noise_psd(&self, stats: &BindingStats, f: f64) -> (f64, f64, f64) {
        let s_if = flicker_psd(
            &self.geometry,
            &self.transducer,
            &self.bias,
            self.medium.temperature,
            f,
        );
        let total = output_noise_psd(
            stats,
            &self.state,
            &self.geometry,
            &self.transducer,
            &self.bias,
            self.medium.temperature,
            f,
        );
        (total - s_if, s_if, total)
    }

    /// Variance of the 1/f contribution alone over [−f_H, f_H], A².
    pub fn flicker_variance(&self) -> f64 {
        let a_f = flicker_psd(
            &self.geometry,
            &self.transducer,
            &self.bias,
            self.medium.temperature,
            self.bias.f_l,
        ) * self.bias.f_l;
        2.0 * a_f * (1.0 + (self.bias.f_h / self.bias.f_l).ln())
    }
}
