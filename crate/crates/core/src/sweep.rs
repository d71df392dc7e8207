//! Parameter sweeps: vary one config key over a grid, evaluate a set of
//! metrics at each point, and emit the table as CSV or JSON. Points where
//! the operating point leaves the linear FET region are fully masked;
//! points where the symbol interval is too short for binding to
//! equilibrate mask only the equilibrium-dependent metrics.

use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::detection::end_to_end_sep;
use crate::error::{Error, Result};
use crate::transducer::debye_length;

/// Grid spacing for a swept key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    Linear,
    Log,
}

/// One swept key: `key:scale:lo:hi:n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub key: String,
    pub scale: Scale,
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
}

impl SweepSpec {
    pub fn new(key: &str, scale: Scale, lo: f64, hi: f64, n_points: usize) -> Result<Self> {
        let spec = Self { key: key.to_owned(), scale, lo, hi, n_points };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::InvalidSweep(format!(
                "bounds must be finite with lo < hi, got {}..{}",
                self.lo, self.hi
            )));
        }
        if self.scale == Scale::Log && self.lo <= 0.0 {
            return Err(Error::InvalidSweep(format!(
                "log scale needs lo > 0, got {}",
                self.lo
            )));
        }
        if self.n_points < 2 {
            return Err(Error::InvalidSweep(format!(
                "need at least 2 points, got {}",
                self.n_points
            )));
        }
        Ok(())
    }

    /// The grid, endpoints included.
    pub fn points(&self) -> Vec<f64> {
        let n = self.n_points;
        let step = |i: usize| i as f64 / (n - 1) as f64;
        (0..n)
            .map(|i| match self.scale {
                Scale::Linear => self.lo + (self.hi - self.lo) * step(i),
                Scale::Log => self.lo * (self.hi / self.lo).powf(step(i)),
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = Error;

    /// Parse `key:scale:lo:hi:n`, e.g. `channel.d:log:0.1:10:25`.
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let [key, scale, lo, hi, n] = parts[..] else {
            return Err(Error::InvalidSweep(format!(
                "expected key:scale:lo:hi:n, got {text:?}"
            )));
        };
        let scale = match scale {
            "linear" | "lin" => Scale::Linear,
            "log" => Scale::Log,
            other => {
                return Err(Error::InvalidSweep(format!(
                    "scale must be linear or log, got {other:?}"
                )))
            }
        };
        let num = |label: &str, s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidSweep(format!("{label} is not a number: {s:?}")))
        };
        Self::new(
            key,
            scale,
            num("lo", lo)?,
            num("hi", hi)?,
            n.parse::<usize>()
                .map_err(|_| Error::InvalidSweep(format!("n is not an integer: {n:?}")))?,
        )
    }
}

/// A column selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Mean drain-current displacement, A.
    MuI,
    /// Output signal-to-noise ratio, dB.
    SnrDb,
    /// Symbol error probability for the configured constellation.
    Sep,
    /// Binding relaxation time, s.
    TauB,
    /// Equilibrium receptor occupancy.
    POn,
    /// Peak ligand concentration at the receiver, 1/m³.
    RhoR,
    /// Debye screening length, m.
    LambdaD,
    /// Diffusion-limited transport rate, m³/s.
    KT,
    /// Whether binding equilibrates within the symbol interval.
    Validity,
}

impl Metric {
    pub const ALL: [Metric; 9] = [
        Metric::MuI,
        Metric::SnrDb,
        Metric::Sep,
        Metric::TauB,
        Metric::POn,
        Metric::RhoR,
        Metric::LambdaD,
        Metric::KT,
        Metric::Validity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::MuI => "mu_I",
            Metric::SnrDb => "snr_db",
            Metric::Sep => "sep",
            Metric::TauB => "tau_B",
            Metric::POn => "p_on",
            Metric::RhoR => "rho_R",
            Metric::LambdaD => "lambda_D",
            Metric::KT => "k_T",
            Metric::Validity => "validity",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == name)
            .ok_or_else(|| Error::UnknownMetric(name.to_owned()))
    }

    /// Parse a comma-separated metric list.
    pub fn parse_list(names: &str) -> Result<Vec<Self>> {
        names.split(',').map(|n| Metric::parse(n.trim())).collect()
    }
}

/// One table cell: a number, or masked (JSON `null`) because the model is
/// outside its domain of validity at that point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Masked(()),
}

pub const MASKED: Cell = Cell::Masked(());

impl Cell {
    pub fn as_f64(self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(v),
            Cell::Masked(()) => None,
        }
    }
}

/// One grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Swept-key value in file units.
    pub value: f64,
    /// One cell per requested metric, in request order.
    pub cells: Vec<Cell>,
    /// False when the point is masked (bias region) or binding does not
    /// equilibrate within the symbol interval.
    pub validity: bool,
}

/// Sweep result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    /// The swept key.
    pub param: String,
    /// Column names, in request order.
    pub metrics: Vec<String>,
    pub rows: Vec<SweepRow>,
}

fn eval_point(cfg: &SystemConfig, spec: &SweepSpec, value: f64, metrics: &[Metric]) -> Result<SweepRow> {
    let point = match cfg.with_key(&spec.key, value) {
        Ok(point) => point,
        // Outside the FET's linear region the output model does not apply
        // at all: mask the whole row (validity itself is still known).
        Err(Error::BiasRegion { .. }) => {
            let cells = metrics
                .iter()
                .map(|&m| if m == Metric::Validity { Cell::Num(0.0) } else { MASKED })
                .collect();
            return Ok(SweepRow { value, cells, validity: false });
        }
        Err(other) => return Err(other),
    };
    let link = point.link()?;
    let stats = link.binding_stats(point.n_m);
    let symbol_valid = link.check_equilibrium(point.n_m).valid;
    let mut valid = symbol_valid;
    let mut sep_cell: Option<Cell> = None;
    if metrics.contains(&Metric::Sep) {
        sep_cell = Some(match end_to_end_sep(&point, &point.constellation) {
            Ok(report) => Cell::Num(report.sep.p),
            Err(Error::EquilibriumInvalid { .. }) | Err(Error::ThresholdOrdering { .. }) => {
                valid = false;
                MASKED
            }
            Err(other) => return Err(other),
        });
        // Validity over the whole alphabet, not just the probe level.
        for &level in &point.constellation.levels {
            valid &= link.check_equilibrium(level as f64).valid;
        }
    }
    let symbol = if symbol_valid { Some(link.symbol(point.n_m)?) } else { None };
    let cells = metrics
        .iter()
        .map(|&metric| {
            Ok(match metric {
                Metric::MuI => symbol.map_or(MASKED, |s| Cell::Num(s.mu_i)),
                Metric::SnrDb => symbol.map_or(MASKED, |s| Cell::Num(s.snr_db)),
                Metric::Sep => sep_cell.expect("computed above"),
                Metric::TauB => Cell::Num(stats.tau_b),
                Metric::POn => Cell::Num(stats.p_on),
                Metric::RhoR => Cell::Num(crate::transport::received_concentration(
                    &point.channel,
                    &point.ligand,
                    point.n_m,
                )),
                Metric::LambdaD => Cell::Num(debye_length(&point.medium)),
                Metric::KT => Cell::Num(link.k_t),
                Metric::Validity => Cell::Num(f64::from(u8::from(valid))),
            })
        })
        .collect::<Result<Vec<Cell>>>()?;
    Ok(SweepRow { value, cells, validity: valid })
}

/// Evaluate `metrics` at every grid point of `spec`, in parallel.
pub fn run_sweep(cfg: &SystemConfig, spec: &SweepSpec, metrics: &[Metric]) -> Result<Table> {
    spec.check()?;
    cfg.table().get_key(&spec.key)?; // reject unknown/non-numeric keys up front
    if metrics.is_empty() {
        return Err(Error::UnknownMetric("(empty metric list)".to_owned()));
    }
    let rows: Vec<SweepRow> = spec
        .points()
        .par_iter()
        .map(|&value| eval_point(cfg, spec, value, metrics))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        param: spec.key.clone(),
        metrics: metrics.iter().map(|m| m.name().to_owned()).collect(),
        rows,
    })
}

/// Output format for tables and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("format must be csv or json, got {other:?}"))),
        }
    }
}

fn fmt_cell(cell: Cell) -> String {
    match cell {
        Cell::Num(v) => format!("{v:.8e}"),
        Cell::Masked(_) => "masked".to_owned(),
    }
}

/// Render as CSV: `param,value,<metrics...>,validity`.
pub fn emit_csv(table: &Table) -> String {
    let mut out = String::new();
    out.push_str("param,value");
    for name in &table.metrics {
        out.push(',');
        out.push_str(name);
    }
    out.push_str(",validity\n");
    for row in &table.rows {
        out.push_str(&table.param);
        out.push_str(&format!(",{:.8e}", row.value));
        for &cell in &row.cells {
            out.push(',');
            out.push_str(&fmt_cell(cell));
        }
        out.push_str(if row.validity { ",true\n" } else { ",false\n" });
    }
    out
}

/// Render as pretty JSON (masked cells become `null`).
pub fn emit_json(table: &Table) -> String {
    let mut text = serde_json::to_string_pretty(table).expect("table always serializes");
    text.push('\n');
    text
}

/// Write the rendered table to `path`, or stdout when `path` is `None`.
pub fn emit(table: &Table, format: Format, path: Option<&Path>) -> Result<()> {
    let text = match format {
        Format::Csv => emit_csv(table),
        Format::Json => emit_json(table),
    };
    match path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .map_err(|e| Error::Config(format!("stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SystemConfig {
        SystemConfig::default()
    }

    #[test]
    fn grids_hit_endpoints_exactly() {
        let lin = SweepSpec::new("channel.d", Scale::Linear, 0.5, 2.0, 4).unwrap();
        assert_eq!(lin.points(), vec![0.5, 1.0, 1.5, 2.0]);
        let log: SweepSpec = "signal.n_m:log:1e4:1e7:4".parse().unwrap();
        let pts = log.points();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0], 1e4);
        assert_eq!(pts[3], 1e7);
        assert!((pts[1] / 1e5 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spec_parser_rejects_malformed_input() {
        assert!("channel.d:log:0.1:10".parse::<SweepSpec>().is_err());
        assert!("channel.d:cubic:0.1:10:5".parse::<SweepSpec>().is_err());
        assert!("channel.d:log:10:0.1:5".parse::<SweepSpec>().is_err());
        assert!("channel.d:log:0:10:5".parse::<SweepSpec>().is_err());
        assert!("channel.d:log:0.1:10:1".parse::<SweepSpec>().is_err());
        assert!("channel.d:log:zap:10:5".parse::<SweepSpec>().is_err());
        assert!("channel.d:linear:-1:10:5".parse::<SweepSpec>().is_ok());
    }

    #[test]
    fn unknown_key_and_metric_are_rejected() {
        let spec = SweepSpec::new("channel.bogus", Scale::Linear, 1.0, 2.0, 2).unwrap();
        assert!(matches!(
            run_sweep(&cfg(), &spec, &[Metric::MuI]),
            Err(Error::UnknownKey(_))
        ));
        assert!(matches!(Metric::parse("zeta"), Err(Error::UnknownMetric(_))));
        assert_eq!(
            Metric::parse_list("mu_I, snr_db,sep").unwrap(),
            vec![Metric::MuI, Metric::SnrDb, Metric::Sep]
        );
    }

    #[test]
    fn default_sweep_rows_are_valid_and_numeric() {
        let spec: SweepSpec = "signal.n_m:log:1e4:1e7:5".parse().unwrap();
        let metrics = [Metric::MuI, Metric::SnrDb, Metric::POn];
        let table = run_sweep(&cfg(), &spec, &metrics).unwrap();
        assert_eq!(table.param, "signal.n_m");
        assert_eq!(table.metrics, vec!["mu_I", "snr_db", "p_on"]);
        assert_eq!(table.rows.len(), 5);
        for row in &table.rows {
            assert!(row.validity);
            for cell in &row.cells {
                assert!(cell.as_f64().is_some());
            }
        }
        // Mean displacement grows with released molecules.
        let mu: Vec<f64> = table.rows.iter().map(|r| r.cells[0].as_f64().unwrap()).collect();
        assert!(mu.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn non_equilibrated_point_masks_only_equilibrium_metrics() {
        // Fast flow shortens the bolus until binding cannot settle within
        // it; the point is still physical, so diagnostics stay numeric.
        let spec = SweepSpec::new("channel.u", Scale::Log, 10.0, 100.0, 3).unwrap();
        let metrics = [Metric::MuI, Metric::SnrDb, Metric::TauB, Metric::POn];
        let table = run_sweep(&cfg(), &spec, &metrics).unwrap();
        assert!(table.rows[0].validity);
        assert!(table.rows[1].validity);
        let fast = &table.rows[2];
        assert!(!fast.validity);
        assert_eq!(fast.cells[0], MASKED);
        assert_eq!(fast.cells[1], MASKED);
        assert!(fast.cells[2].as_f64().unwrap() > 0.0);
        assert!(fast.cells[3].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn bias_region_point_masks_whole_row() {
        // Sweeping V_SG across V_TH leaves the linear region at the low end.
        let spec = SweepSpec::new("bias.v_sg", Scale::Linear, -0.2, 0.4, 4).unwrap();
        let metrics = [Metric::MuI, Metric::TauB, Metric::LambdaD];
        let table = run_sweep(&cfg(), &spec, &metrics).unwrap();
        let off = &table.rows[0];
        assert!(!off.validity);
        assert!(off.cells.iter().all(|c| *c == MASKED));
        let on = &table.rows[3];
        assert!(on.validity);
        assert!(on.cells.iter().all(|c| c.as_f64().is_some()));
    }

    #[test]
    fn csv_shape_and_masking() {
        let spec = SweepSpec::new("bias.v_sg", Scale::Linear, -0.2, 0.4, 2).unwrap();
        let table = run_sweep(&cfg(), &spec, &[Metric::MuI, Metric::Validity]).unwrap();
        let csv = emit_csv(&table);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "param,value,mu_I,validity,validity");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("bias.v_sg,-2.00000000e-1,masked,0.00000000e0,false"));
        assert!(lines[2].ends_with(",true"));
    }

    #[test]
    fn json_round_trips_masked_cells_as_null() {
        let spec = SweepSpec::new("bias.v_sg", Scale::Linear, -0.2, 0.4, 2).unwrap();
        let table = run_sweep(&cfg(), &spec, &[Metric::MuI]).unwrap();
        let json = emit_json(&table);
        assert!(json.contains("null"));
        let back: Table = serde_json::from_str(&json).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn sweep_output_is_deterministic() {
        let spec: SweepSpec = "channel.d:log:0.1:10:9".parse().unwrap();
        let metrics = [Metric::MuI, Metric::SnrDb, Metric::Sep, Metric::TauB];
        let a = emit_csv(&run_sweep(&cfg(), &spec, &metrics).unwrap());
        let b = emit_csv(&run_sweep(&cfg(), &spec, &metrics).unwrap());
        assert_eq!(a, b);
    }
}
