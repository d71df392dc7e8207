//! Configuration: a human-readable TOML document in bench-sheet units
//! (µm, mm, nm, mol/m³, cm²/(V·s), eV⁻¹cm⁻³, cm⁻³, relative permittivities)
//! merged over built-in defaults and converted once into the SI specs used
//! everywhere else.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::binding::ReceiverGeometry;
use crate::consts::EPS_0;
use crate::detection::{build_constellation, Constellation};
use crate::error::{scope_key, Error, Result};
use crate::fet_output::{FetBias, FlickerModel};
use crate::link::LinkModel;
use crate::transducer::{MediumSpec, TransducerSpec};
use crate::transport::{ChannelSpec, LigandSpec};

/// `[channel]`: microfluidic geometry and flow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelTable {
    /// Channel height, µm.
    pub h_ch: f64,
    /// Channel width, µm.
    pub l_ch: f64,
    /// Mean flow velocity, µm/s.
    pub u: f64,
    /// Transmitter–receiver distance, mm.
    pub d: f64,
}

impl Default for ChannelTable {
    fn default() -> Self {
        Self { h_ch: 3.0, l_ch: 15.0, u: 10.0, d: 1.0 }
    }
}

/// `[ligand]`: diffusion, kinetics, and charge of the messenger molecule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LigandTable {
    /// Free diffusion coefficient, m²/s.
    pub d0: f64,
    /// Association rate constant, m³/s.
    pub k1: f64,
    /// Dissociation rate constant, 1/s.
    pub k_neg1: f64,
    /// Elementary charges per molecule.
    pub n_e: f64,
}

impl Default for LigandTable {
    fn default() -> Self {
        Self { d0: 2e-10, k1: 2e-19, k_neg1: 20.0, n_e: 3.0 }
    }
}

/// `[receiver]`: functionalized-nanowire geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReceiverTable {
    /// Nanowire radius, nm.
    pub r_r: f64,
    /// Nanowire length, µm.
    pub l_r: f64,
    /// Receptor surface density, 1/m².
    pub rho_sr: f64,
    /// Receptor (linker) length, nm.
    pub l_sr: f64,
}

impl Default for ReceiverTable {
    fn default() -> Self {
        Self { r_r: 10.0, l_r: 15.0, rho_sr: 4e16, l_sr: 2.0 }
    }
}

/// `[medium]`: electrolyte.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MediumTable {
    /// Ionic concentration, mol/m³.
    pub c_ion: f64,
    /// Relative permittivity of the medium.
    pub eps_r: f64,
    /// Temperature, K.
    pub temperature: f64,
}

impl Default for MediumTable {
    fn default() -> Self {
        Self { c_ion: 30.0, eps_r: 78.0, temperature: 300.0 }
    }
}

/// `[transducer]`: oxide/nanowire stack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransducerTable {
    /// Relative permittivity of the gate oxide.
    pub eps_ox: f64,
    /// Relative permittivity of the nanowire.
    pub eps_nw: f64,
    /// Oxide thickness, nm.
    pub t_ox: f64,
    /// Hole density, 1/cm³.
    pub p: f64,
}

impl Default for TransducerTable {
    fn default() -> Self {
        Self { eps_ox: 3.9, eps_nw: 11.68, t_ox: 2.0, p: 1e18 }
    }
}

/// `[bias]`: FET operating point and 1/f parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BiasTable {
    /// Source–drain voltage, V.
    pub v_sd: f64,
    /// Source–gate voltage, V.
    pub v_sg: f64,
    /// Threshold voltage, V.
    pub v_th: f64,
    /// Hole mobility, cm²/(V·s).
    pub mu_p: f64,
    /// Oxide trap density, eV⁻¹·cm⁻³.
    pub n_ot: f64,
    /// Tunneling distance, nm.
    pub lambda_tun: f64,
    /// Mobility-scattering coefficient, V·s/C.
    pub alpha_s: f64,
}

impl Default for BiasTable {
    fn default() -> Self {
        Self {
            v_sd: 0.1,
            v_sg: 0.4,
            v_th: 0.0,
            mu_p: 500.0,
            n_ot: 1e16,
            lambda_tun: 0.05,
            alpha_s: 1.9e4,
        }
    }
}

/// `[noise]`: integration band and 1/f composition variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseTable {
    /// Low cutoff below which 1/f noise is flat, Hz.
    pub f_l: f64,
    /// Upper integration limit, Hz.
    pub f_h: f64,
    /// `"standard"` or `"as-printed"`.
    pub flicker_model: FlickerModel,
}

impl Default for NoiseTable {
    fn default() -> Self {
        Self {
            f_l: 1e-7 / core::f64::consts::PI,
            f_h: 1e5,
            flicker_model: FlickerModel::Standard,
        }
    }
}

/// `[signal]`: molecules released for single-symbol metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignalTable {
    /// Released molecules per symbol.
    pub n_m: f64,
}

impl Default for SignalTable {
    fn default() -> Self {
        Self { n_m: 5e5 }
    }
}

/// `[constellation]`: M-CSK alphabet shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstellationTable {
    /// Alphabet size M.
    pub m: u32,
    /// Maximum molecules per symbol K.
    pub k: f64,
    /// Spacing exponent s.
    pub s: f64,
}

impl Default for ConstellationTable {
    fn default() -> Self {
        Self { m: 2, k: 1e6, s: 1.0 }
    }
}

/// The whole config document, in file units. Unknown keys are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigTable {
    pub channel: ChannelTable,
    pub ligand: LigandTable,
    pub receiver: ReceiverTable,
    pub medium: MediumTable,
    pub transducer: TransducerTable,
    pub bias: BiasTable,
    pub noise: NoiseTable,
    pub signal: SignalTable,
    pub constellation: ConstellationTable,
}

impl ConfigTable {
    /// Look up a numeric value by dotted path, in file units.
    pub fn get_key(&self, key: &str) -> Result<f64> {
        Ok(match key {
            "channel.h_ch" => self.channel.h_ch,
            "channel.l_ch" => self.channel.l_ch,
            "channel.u" => self.channel.u,
            "channel.d" => self.channel.d,
            "ligand.d0" => self.ligand.d0,
            "ligand.k1" => self.ligand.k1,
            "ligand.k_neg1" => self.ligand.k_neg1,
            "ligand.n_e" => self.ligand.n_e,
            "receiver.r_r" => self.receiver.r_r,
            "receiver.l_r" => self.receiver.l_r,
            "receiver.rho_sr" => self.receiver.rho_sr,
            "receiver.l_sr" => self.receiver.l_sr,
            "medium.c_ion" => self.medium.c_ion,
            "medium.eps_r" => self.medium.eps_r,
            "medium.temperature" => self.medium.temperature,
            "transducer.eps_ox" => self.transducer.eps_ox,
            "transducer.eps_nw" => self.transducer.eps_nw,
            "transducer.t_ox" => self.transducer.t_ox,
            "transducer.p" => self.transducer.p,
            "bias.v_sd" => self.bias.v_sd,
            "bias.v_sg" => self.bias.v_sg,
            "bias.v_th" => self.bias.v_th,
            "bias.mu_p" => self.bias.mu_p,
            "bias.n_ot" => self.bias.n_ot,
            "bias.lambda_tun" => self.bias.lambda_tun,
            "bias.alpha_s" => self.bias.alpha_s,
            "noise.f_l" => self.noise.f_l,
            "noise.f_h" => self.noise.f_h,
            "signal.n_m" => self.signal.n_m,
            "constellation.m" => f64::from(self.constellation.m),
            "constellation.k" => self.constellation.k,
            "constellation.s" => self.constellation.s,
            "noise.flicker_model" => return Err(Error::NonNumericKey(key.to_owned())),
            _ => return Err(Error::UnknownKey(key.to_owned())),
        })
    }

    /// Set a numeric value by dotted path, in file units.
    pub fn set_key(&mut self, key: &str, value: f64) -> Result<()> {
        let slot: &mut f64 = match key {
            "channel.h_ch" => &mut self.channel.h_ch,
            "channel.l_ch" => &mut self.channel.l_ch,
            "channel.u" => &mut self.channel.u,
            "channel.d" => &mut self.channel.d,
            "ligand.d0" => &mut self.ligand.d0,
            "ligand.k1" => &mut self.ligand.k1,
            "ligand.k_neg1" => &mut self.ligand.k_neg1,
            "ligand.n_e" => &mut self.ligand.n_e,
            "receiver.r_r" => &mut self.receiver.r_r,
            "receiver.l_r" => &mut self.receiver.l_r,
            "receiver.rho_sr" => &mut self.receiver.rho_sr,
            "receiver.l_sr" => &mut self.receiver.l_sr,
            "medium.c_ion" => &mut self.medium.c_ion,
            "medium.eps_r" => &mut self.medium.eps_r,
            "medium.temperature" => &mut self.medium.temperature,
            "transducer.eps_ox" => &mut self.transducer.eps_ox,
            "transducer.eps_nw" => &mut self.transducer.eps_nw,
            "transducer.t_ox" => &mut self.transducer.t_ox,
            "transducer.p" => &mut self.transducer.p,
            "bias.v_sd" => &mut self.bias.v_sd,
            "bias.v_sg" => &mut self.bias.v_sg,
            "bias.v_th" => &mut self.bias.v_th,
            "bias.mu_p" => &mut self.bias.mu_p,
            "bias.n_ot" => &mut self.bias.n_ot,
            "bias.lambda_tun" => &mut self.bias.lambda_tun,
            "bias.alpha_s" => &mut self.bias.alpha_s,
            "noise.f_l" => &mut self.noise.f_l,
            "noise.f_h" => &mut self.noise.f_h,
            "signal.n_m" => &mut self.signal.n_m,
            "constellation.m" => {
                if !(value.fract() == 0.0 && (2.0..=1e6).contains(&value)) {
                    return Err(Error::InvalidParameter {
                        key: key.to_owned(),
                        message: format!("alphabet size must be an integer >= 2, got {value}"),
                    });
                }
                self.constellation.m = value as u32;
                return Ok(());
            }
            "constellation.k" => &mut self.constellation.k,
            "constellation.s" => &mut self.constellation.s,
            "noise.flicker_model" => return Err(Error::NonNumericKey(key.to_owned())),
            _ => return Err(Error::UnknownKey(key.to_owned())),
        };
        *slot = value;
        Ok(())
    }
}

/// Fully resolved system: SI specs for the whole pipeline plus the source
/// document for display and round-tripping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemConfig {
    pub channel: ChannelSpec,
    pub ligand: LigandSpec,
    pub geometry: ReceiverGeometry,
    pub medium: MediumSpec,
    pub transducer: TransducerSpec,
    pub bias: FetBias,
    pub constellation: Constellation,
    /// Molecules per symbol for single-symbol metrics.
    pub n_m: f64,
    table: ConfigTable,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self::from_table(ConfigTable::default()).expect("built-in defaults are valid")
    }
}

impl SystemConfig {
    /// Convert a file-units document into validated SI specs.
    pub fn from_table(table: ConfigTable) -> Result<Self> {
        let t = &table;
        let channel = ChannelSpec {
            h_ch: t.channel.h_ch * 1e-6,
            l_ch: t.channel.l_ch * 1e-6,
            u: t.channel.u * 1e-6,
            d: t.channel.d * 1e-3,
        }
        .validated()
        .map_err(|e| scope_key("channel", e))?;
        let ligand = LigandSpec {
            d0: t.ligand.d0,
            k1: t.ligand.k1,
            k_neg1: t.ligand.k_neg1,
            n_e: t.ligand.n_e,
        }
        .validated()
        .map_err(|e| scope_key("ligand", e))?;
        let geometry = ReceiverGeometry {
            r_r: t.receiver.r_r * 1e-9,
            l_r: t.receiver.l_r * 1e-6,
            rho_sr: t.receiver.rho_sr,
            l_sr: t.receiver.l_sr * 1e-9,
        }
        .validated()
        .map_err(|e| scope_key("receiver", e))?;
        let medium = MediumSpec {
            c_ion: t.medium.c_ion,
            eps_m: t.medium.eps_r * EPS_0,
            temperature: t.medium.temperature,
        }
        .validated()
        .map_err(|e| scope_key("medium", e))?;
        let transducer = TransducerSpec {
            eps_ox: t.transducer.eps_ox * EPS_0,
            eps_si: t.transducer.eps_nw * EPS_0,
            t_ox: t.transducer.t_ox * 1e-9,
            p: t.transducer.p * 1e6,
        }
        .validated()
        .map_err(|e| scope_key("transducer", e))?;
        let bias = FetBias {
            v_sd: t.bias.v_sd,
            v_sg: t.bias.v_sg,
            v_th: t.bias.v_th,
            mu_p: t.bias.mu_p * 1e-4,
            n_ot: t.bias.n_ot * 1e6,
            lambda_tun: t.bias.lambda_tun * 1e-9,
            alpha_s: t.bias.alpha_s,
            f_l: t.noise.f_l,
            f_h: t.noise.f_h,
            flicker_model: t.noise.flicker_model,
        }
        .validated()
        .map_err(|e| scope_key("bias", e))?;
        let constellation = build_constellation(
            t.constellation.m as usize,
            t.constellation.k,
            t.constellation.s,
        )?;
        if !(t.signal.n_m >= 0.0 && t.signal.n_m.is_finite()) {
            return Err(Error::InvalidParameter {
                key: "signal.n_m".to_owned(),
                message: format!("must be non-negative and finite, got {}", t.signal.n_m),
            });
        }
        Ok(Self {
            channel,
            ligand,
            geometry,
            medium,
            transducer,
            bias,
            constellation,
            n_m: t.signal.n_m,
            table,
        })
    }

    /// Parse a TOML document (possibly partial) merged over the defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: ConfigTable =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_table(table)
    }

    /// The source document in file units.
    pub fn table(&self) -> &ConfigTable {
        &self.table
    }

    /// Serialize the resolved document as TOML (re-ingestable).
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(&self.table).expect("config document always serializes")
    }

    /// New config with one key (in file units) replaced and everything
    /// re-derived.
    pub fn with_key(&self, key: &str, value: f64) -> Result<Self> {
        let mut table = self.table;
        table.set_key(key, value)?;
        Self::from_table(table)
    }

    /// Assemble the cached link pipeline.
    pub fn link(&self) -> Result<LinkModel> {
        LinkModel::new(
            self.channel,
            self.ligand,
            self.geometry,
            self.medium,
            self.transducer,
            self.bias,
        )
    }
}

/// Read and resolve a config file; an empty file yields the full defaults.
pub fn load_config(path: &Path) -> Result<SystemConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    SystemConfig::from_toml_str(&text)
}
