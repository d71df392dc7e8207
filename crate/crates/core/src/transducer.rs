//! Charge transduction: Debye screening of the bound-ligand charge and the
//! double-layer / oxide / nanowire capacitive divider that converts it into
//! a gate surface potential.

use serde::{Deserialize, Serialize};

use crate::binding::ReceiverGeometry;
use crate::consts::{K_B, N_A, Q_E};
use crate::error::{require_positive, Result};

/// Electrolyte the sensor operates in. SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumSpec {
    /// Ionic concentration, mol/m³.
    pub c_ion: f64,
    /// Absolute permittivity of the medium, F/m.
    pub eps_m: f64,
    /// Temperature, K.
    pub temperature: f64,
}

impl MediumSpec {
    pub fn new(c_ion: f64, eps_m: f64, temperature: f64) -> Result<Self> {
        Self { c_ion, eps_m, temperature }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        require_positive("c_ion", self.c_ion)?;
        require_positive("eps_m", self.eps_m)?;
        require_positive("temperature", self.temperature)?;
        Ok(self)
    }
}

/// Oxide/nanowire stack of the transducer. SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransducerSpec {
    /// Absolute permittivity of the gate oxide, F/m.
    pub eps_ox: f64,
    /// Absolute permittivity of the silicon nanowire, F/m.
    pub eps_si: f64,
    /// Oxide thickness, m.
    pub t_ox: f64,
    /// Hole density in the nanowire, 1/m³.
    pub p: f64,
}

impl TransducerSpec {
    pub fn new(eps_ox: f64, eps_si: f64, t_ox: f64, p: f64) -> Result<Self> {
        Self { eps_ox, eps_si, t_ox, p }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        require_positive("eps_ox", self.eps_ox)?;
        require_positive("eps_si", self.eps_si)?;
        require_positive("t_ox", self.t_ox)?;
        require_positive("p", self.p)?;
        Ok(self)
    }

    /// Oxide capacitance per area c_ox = ε_OX/t_OX, F/m². This per-area form
    /// enters the FET current and noise formulas; the capacitive divider
    /// uses the total C_OX = c_ox·w_R·l_R.
    pub fn c_ox_area(&self) -> f64 {
        self.eps_ox / self.t_ox
    }
}

/// Screening and capacitance summary of the transducer at one operating
/// point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransducerState {
    /// Debye screening length of the electrolyte, m.
    pub lambda_d: f64,
    /// Screened elementary charge seen through the linker distance,
    /// q·exp(−l_SR/λ_D), C.
    pub q_eff: f64,
    /// Double-layer capacitance, F.
    pub c_dl: f64,
    /// Total oxide capacitance, F.
    pub c_ox_total: f64,
    /// Nanowire depletion capacitance, F.
    pub c_nw: f64,
    /// Equivalent capacitance (oxide series nanowire, parallel double
    /// layer), F.
    pub c_eq: f64,
    /// Surface-potential shift contributed by one bound ligand,
    /// Ψ_L = q_eff·N_e/C_eq, V.
    pub psi_l: f64,
}

/// Debye screening length λ_D = √(ε_M·k_B·T/(2·N_A·q²·c_ion)), m.
pub fn debye_length(med: &MediumSpec) -> f64 {
    (med.eps_m * K_B * med.temperature / (2.0 * N_A * Q_E * Q_E * med.c_ion)).sqrt()
}

/// Charge contribution of one bound ligand after Debye screening across the
/// linker length: q·exp(−l_SR/λ_D)·N_e, C. Call with `n_e = 1` for the
/// per-elementary-charge value.
pub fn effective_charge(med: &MediumSpec, l_sr: f64, n_e: f64) -> f64 {
    Q_E * (-l_sr / debye_length(med)).exp() * n_e
}

/// Build the full capacitive-divider state for a geometry, medium, stack,
/// and ligand valence `n_e`.
pub fn capacitances(
    geo: &ReceiverGeometry,
    med: &MediumSpec,
    td: &TransducerSpec,
    n_e: f64,
) -> TransducerState {
    let lambda_d = debye_length(med);
    let area = geo.area();
    let c_dl = med.eps_m / lambda_d * area;
    let c_ox_total = td.c_ox_area() * area;
    let lambda_nw = (td.eps_si * K_B * med.temperature / (td.p * Q_E * Q_E)).sqrt();
    let c_nw = td.eps_si / lambda_nw * area;
    let c_eq = 1.0 / (1.0 / c_ox_total + 1.0 / c_nw) + c_dl;
    let q_eff = Q_E * (-geo.l_sr / lambda_d).exp();
    let psi_l = q_eff * n_e / c_eq;
    TransducerState { lambda_d, q_eff, c_dl, c_ox_total, c_nw, c_eq, psi_l }
}

/// Gate surface potential produced by `n_bound` bound ligands,
/// Ψ = n_bound·Ψ_L, V.
pub fn surface_potential(n_bound: f64, state: &TransducerState) -> f64 {
    n_bound * state.psi_l
}
