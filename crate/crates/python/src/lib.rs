//! Python bindings for the link model: configuration handling, the
//! end-to-end link (signal statistics, noise PSD, SNR, symbol error
//! probability), constellation construction, and the validation suite.

use std::path::Path;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use mclink::config::{load_config, SystemConfig};
use mclink::detection::end_to_end_sep;
use mclink::link::LinkModel;
use mclink::oracles::standard_suite;
use mclink::special;
use mclink::transducer::debye_length;

fn to_py_err(e: mclink::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// System configuration in file units (micrometres, millimetres, moles per
/// cubic metre, ... — the same units as the TOML schema).
#[pyclass(module = "mclink_py", skip_from_py_object)]
#[derive(Clone)]
struct Config {
    inner: SystemConfig,
}

#[pymethods]
impl Config {
    /// Built-in default operating point.
    #[new]
    fn new() -> Self {
        Config { inner: SystemConfig::default() }
    }

    /// Parse a TOML document (unknown keys are rejected).
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        Ok(Config { inner: SystemConfig::from_toml_str(text).map_err(to_py_err)? })
    }

    /// Load a TOML configuration file.
    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        Ok(Config { inner: load_config(Path::new(path)).map_err(to_py_err)? })
    }

    /// Return a copy with one dotted key (e.g. `"medium.c_ion"`) replaced.
    fn set(&self, key: &str, value: f64) -> PyResult<Self> {
        Ok(Config { inner: self.inner.with_key(key, value).map_err(to_py_err)? })
    }

    /// Read one dotted key in file units.
    fn get(&self, key: &str) -> PyResult<f64> {
        self.inner.table().get_key(key).map_err(to_py_err)
    }

    /// Render the full configuration as TOML.
    fn to_toml(&self) -> String {
        self.inner.to_toml()
    }

    /// Release size used for the single-shot statistics.
    #[getter]
    fn n_m(&self) -> f64 {
        self.inner.n_m
    }

    /// Constellation levels in molecules per symbol.
    #[getter]
    fn levels(&self) -> Vec<u64> {
        self.inner.constellation.levels.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Config(M={}, K={:.3e}, n_m={:.3e})",
            self.inner.constellation.m, self.inner.constellation.k, self.inner.n_m
        )
    }
}

/// Received-signal statistics of one release size.
#[pyclass(module = "mclink_py")]
struct SymbolPoint {
    /// Received concentration at the receiver (molecules/m³).
    #[pyo3(get)]
    rho_r: f64,
    /// Equilibrium occupation probability of one receptor.
    #[pyo3(get)]
    p_on: f64,
    /// Mean number of bound receptors.
    #[pyo3(get)]
    mu_nb: f64,
    /// Variance of the number of bound receptors.
    #[pyo3(get)]
    var_nb: f64,
    /// Binding relaxation time (s).
    #[pyo3(get)]
    tau_b: f64,
    /// Mean drain-current displacement (A).
    #[pyo3(get)]
    mu_i: f64,
    /// Output-referred noise variance (A²).
    #[pyo3(get)]
    var_i: f64,
    /// Output signal-to-noise ratio (dB).
    #[pyo3(get)]
    snr_db: f64,
}

/// Closed-form detection summary for a configured constellation.
#[pyclass(module = "mclink_py")]
struct SepPoint {
    /// Symbol error probability.
    #[pyo3(get)]
    p: f64,
    /// log10 of the symbol error probability (finite even when `p`
    /// underflows to zero).
    #[pyo3(get)]
    log10_p: f64,
    /// True when `p` underflowed and only `log10_p` is meaningful.
    #[pyo3(get)]
    underflowed: bool,
    /// Constellation levels in molecules per symbol.
    #[pyo3(get)]
    levels: Vec<u64>,
    /// ML decision thresholds between adjacent symbols (A).
    #[pyo3(get)]
    thresholds: Vec<f64>,
}

/// Deterministic end-to-end link assembled from a `Config`.
#[pyclass(module = "mclink_py")]
struct Link {
    cfg: SystemConfig,
    inner: LinkModel,
}

#[pymethods]
impl Link {
    #[new]
    fn new(config: &Config) -> PyResult<Self> {
        let inner = config.inner.link().map_err(to_py_err)?;
        Ok(Link { cfg: config.inner.clone(), inner })
    }

    /// Electrolyte screening length (m).
    #[getter]
    fn debye_length(&self) -> f64 {
        debye_length(&self.cfg.medium)
    }

    /// Dispersion-enhanced axial diffusion coefficient (m²/s).
    #[getter]
    fn diffusion(&self) -> f64 {
        self.inner.diffusion
    }

    /// Mean arrival time of the released bolus (s).
    #[getter]
    fn propagation_delay(&self) -> f64 {
        self.inner.t_d
    }

    /// Transconductance of the biased nanowire FET (A/V).
    #[getter]
    fn transconductance(&self) -> f64 {
        self.inner.g_fet
    }

    /// Whether the quasi-equilibrium statistics hold for a release of
    /// `n_m` molecules (bolus passage long against binding relaxation).
    fn validity(&self, n_m: f64) -> bool {
        self.inner.check_equilibrium(n_m).valid
    }

    /// Received-signal statistics for a release of `n_m` molecules.
    fn symbol(&self, n_m: f64) -> PyResult<SymbolPoint> {
        let s = self.inner.symbol(n_m).map_err(to_py_err)?;
        Ok(SymbolPoint {
            rho_r: s.rho_r,
            p_on: s.stats.p_on,
            mu_nb: s.stats.mu_nb,
            var_nb: s.stats.var_nb,
            tau_b: s.stats.tau_b,
            mu_i: s.mu_i,
            var_i: s.var_i,
            snr_db: s.snr_db,
        })
    }

    /// Output SNR in dB for a release of `n_m` molecules.
    fn snr_db(&self, n_m: f64) -> PyResult<f64> {
        Ok(self.inner.symbol(n_m).map_err(to_py_err)?.snr_db)
    }

    /// One-sided output-noise PSD components `(S_IB, S_IF, S_I)` in A²/Hz
    /// at frequency `f` for a release of `n_m` molecules.
    fn noise_psd(&self, f: f64, n_m: f64) -> (f64, f64, f64) {
        let stats = self.inner.binding_stats(n_m);
        self.inner.noise_psd(&stats, f)
    }

    /// Closed-form symbol error probability of the configured constellation.
    fn sep(&self) -> PyResult<SepPoint> {
        let report = end_to_end_sep(&self.cfg, &self.cfg.constellation).map_err(to_py_err)?;
        Ok(SepPoint {
            p: report.sep.p,
            log10_p: report.sep.log10_p,
            underflowed: report.sep.underflowed,
            levels: self.cfg.constellation.levels.clone(),
            thresholds: report.model.thresholds.clone(),
        })
    }
}

/// Geometric constellation levels `ceil((m+1)^s K / M^s)` for m = 0..M-1.
#[pyfunction]
fn build_constellation(m: usize, k: f64, s: f64) -> PyResult<Vec<u64>> {
    Ok(mclink::detection::build_constellation(m, k, s)
        .map_err(to_py_err)?
        .levels)
}

/// Complementary error function.
#[pyfunction]
fn erfc(x: f64) -> f64 {
    special::erfc(x)
}

/// Natural logarithm of erfc, stable far into the tail.
#[pyfunction]
fn erfc_ln(x: f64) -> f64 {
    special::erfc_ln(x)
}

/// Run the numerical cross-validation suite against the closed forms.
/// Returns one `(name, pass, rel_err)` tuple per check.
#[pyfunction]
#[pyo3(signature = (config, seed = 42))]
fn validate(config: &Config, seed: u64) -> PyResult<Vec<(String, bool, f64)>> {
    Ok(standard_suite(&config.inner, seed)
        .map_err(to_py_err)?
        .into_iter()
        .map(|r| (r.name, r.pass, r.rel_err))
        .collect())
}

#[pymodule]
fn mclink_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Config>()?;
    m.add_class::<Link>()?;
    m.add_class::<SymbolPoint>()?;
    m.add_class::<SepPoint>()?;
    m.add_function(wrap_pyfunction!(build_constellation, m)?)?;
    m.add_function(wrap_pyfunction!(erfc, m)?)?;
    m.add_function(wrap_pyfunction!(erfc_ln, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
