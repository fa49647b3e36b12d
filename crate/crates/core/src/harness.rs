//! Seeded Monte-Carlo sweeps, CSV persistence and comparison with the
//! closed-form predictions.
//!
//! Every trial is a pure function of `(n, p, seed, procedure, config)`, so
//! rerunning a config reproduces its CSV byte for byte. Wall-clock times are
//! kept out of the CSV and only reported in the JSON summary.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{is_valid, Coloring};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::{predicted_bounds, PREDICTION_LABELS};
use crate::upper::{color_and_repair, Variant};

pub const CONFIG_VERSION: u32 = 1;
pub const SCHEMA_VERSION: u32 = 1;

/// Sweep description, read from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub version: u32,
    /// Vertex counts.
    pub n: Vec<usize>,
    /// Absolute edge probabilities; exclusive with `rho`.
    #[serde(default)]
    pub p: Option<Vec<f64>>,
    /// Sparsity exponents, `p = n^{−ρ}`; exclusive with `p`.
    #[serde(default)]
    pub rho: Option<Vec<f64>>,
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_procedures")]
    pub procedures: Vec<Variant>,
    #[serde(default = "default_repair_budget")]
    pub repair_budget: usize,
    /// `ε` for procedure B; derived from `(n, p)` when absent.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub output: OutputPaths,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

fn default_procedures() -> Vec<Variant> {
    vec![Variant::A]
}

fn default_repair_budget() -> usize {
    1000
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.version != CONFIG_VERSION {
            return bad(&format!("unsupported config version {}", self.version));
        }
        if self.n.is_empty() || self.n.contains(&0) {
            return bad("n grid must be nonempty and positive");
        }
        match (&self.p, &self.rho) {
            (Some(p), None) if !p.is_empty() => {
                if let Some(x) = p.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
                    return bad(&format!("p = {x} outside (0, 1)"));
                }
            }
            (None, Some(r)) if !r.is_empty() => {
                if let Some(x) = r.iter().find(|&&x| !(x > 0.0)) {
                    return bad(&format!("rho = {x} must be positive"));
                }
            }
            _ => return bad("exactly one nonempty grid of p or rho is required"),
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.procedures.is_empty() {
            return bad("procedures must be nonempty");
        }
        Ok(())
    }

    /// Cells in `(n, p, procedure)` nested order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &n in &self.n {
            let ps: Vec<f64> = match (&self.p, &self.rho) {
                (Some(p), _) => p.clone(),
                (_, Some(r)) => r.iter().map(|&rho| (n as f64).powf(-rho)).collect(),
                _ => Vec::new(),
            };
            for p in ps {
                for &procedure in &self.procedures {
                    out.push(Cell {
                        index: out.len(),
                        n,
                        p,
                        procedure,
                    });
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub index: usize,
    pub n: usize,
    pub p: f64,
    pub procedure: Variant,
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// `splitmix64(splitmix64(splitmix64(master) ^ cell) ^ trial)`.
pub fn trial_seed(master: u64, cell: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ cell as u64) ^ trial as u64)
}

/// One trial's outcome; one CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub procedure: Variant,
    /// Palette after repair (before repair if repair failed).
    pub palette: usize,
    pub valid: bool,
    pub valid_pre_repair: bool,
    pub repairs: usize,
    pub leftover: usize,
    pub s: usize,
    pub z: usize,
    pub delta: f64,
    pub delta_clamped: bool,
    pub bound: usize,
    /// Empty unless the trial failed.
    pub error: String,
    /// Per-label predictions; `None` outside the formula's range.
    pub predicted: Vec<Option<f64>>,
}

impl ExperimentRecord {
    pub fn header() -> Vec<String> {
        let mut h: Vec<String> = [
            "schema_version",
            "n",
            "p",
            "seed",
            "procedure",
            "palette",
            "valid",
            "valid_pre_repair",
            "repairs",
            "leftover",
            "s",
            "z",
            "delta",
            "delta_clamped",
            "bound",
            "error",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        h.extend(PREDICTION_LABELS.iter().map(|l| format!("pred_{l}")));
        h
    }

    fn to_row(&self) -> Vec<String> {
        let mut row = vec![
            SCHEMA_VERSION.to_string(),
            self.n.to_string(),
            self.p.to_string(),
            self.seed.to_string(),
            self.procedure.to_string(),
            self.palette.to_string(),
            self.valid.to_string(),
            self.valid_pre_repair.to_string(),
            self.repairs.to_string(),
            self.leftover.to_string(),
            self.s.to_string(),
            self.z.to_string(),
            self.delta.to_string(),
            self.delta_clamped.to_string(),
            self.bound.to_string(),
            self.error.clone(),
        ];
        row.extend(self.predicted.iter().map(|v| v.map_or_else(String::new, |x| x.to_string())));
        row
    }

    fn from_row(row: &csv::StringRecord, line: usize) -> Result<Self> {
        let field = |i: usize| row.get(i).unwrap_or("");
        fn parse<T: std::str::FromStr>(s: &str, line: usize, name: &str) -> Result<T> {
            s.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad {name} value {s:?}"),
            })
        }
        if field(0) != SCHEMA_VERSION.to_string() {
            return Err(Error::Parse {
                line,
                msg: format!("unsupported schema version {:?}", field(0)),
            });
        }
        let predicted = (16..16 + PREDICTION_LABELS.len())
            .map(|i| match field(i) {
                "" => Ok(None),
                s => parse(s, line, "prediction").map(Some),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n: parse(field(1), line, "n")?,
            p: parse(field(2), line, "p")?,
            seed: parse(field(3), line, "seed")?,
            procedure: field(4).parse()?,
            palette: parse(field(5), line, "palette")?,
            valid: parse(field(6), line, "valid")?,
            valid_pre_repair: parse(field(7), line, "valid_pre_repair")?,
            repairs: parse(field(8), line, "repairs")?,
            leftover: parse(field(9), line, "leftover")?,
            s: parse(field(10), line, "s")?,
            z: parse(field(11), line, "z")?,
            delta: parse(field(12), line, "delta")?,
            delta_clamped: parse(field(13), line, "delta_clamped")?,
            bound: parse(field(14), line, "bound")?,
            error: field(15).to_string(),
            predicted,
        })
    }

    pub fn is_budget_failure(&self) -> bool {
        self.error.contains("budget")
    }
}

fn predictions(n: usize, p: f64) -> Vec<Option<f64>> {
    match predicted_bounds(n as f64, p) {
        Ok(list) => list
            .into_iter()
            .map(|b| (b.in_range && b.value.is_finite()).then_some(b.value))
            .collect(),
        Err(_) => vec![None; PREDICTION_LABELS.len()],
    }
}

/// Runs one trial, returning its record and final coloring.
pub fn run_trial(n: usize, p: f64, seed: u64, procedure: Variant, cfg: &SweepConfig) -> (ExperimentRecord, Option<Coloring>) {
    let mut rec = ExperimentRecord {
        n,
        p,
        seed,
        procedure,
        palette: 0,
        valid: false,
        valid_pre_repair: false,
        repairs: 0,
        leftover: 0,
        s: 0,
        z: 0,
        delta: f64::NAN,
        delta_clamped: false,
        bound: 0,
        error: String::new(),
        predicted: predictions(n, p),
    };
    let run = Graph::sample_gnp(n, p, seed)
        .and_then(|g| color_and_repair(&g, procedure, p, cfg.epsilon, cfg.repair_budget).map(|r| (g, r)));
    let (g, run) = match run {
        Ok(x) => x,
        Err(e) => {
            rec.error = e.to_string();
            return (rec, None);
        }
    };
    rec.valid_pre_repair = run.valid_pre_repair();
    rec.leftover = run.report.leftover;
    rec.s = run.report.s;
    rec.z = run.report.z;
    rec.delta = run.report.delta;
    rec.delta_clamped = run.report.delta_clamped;
    rec.bound = run.report.bound;
    match (run.repaired, run.repair) {
        (Some(c), Some(r)) => {
            rec.palette = c.palette_size();
            rec.repairs = r.extra_colors;
            rec.valid = is_valid(&g, &c).unwrap_or(false);
            (rec, Some(c))
        }
        _ => {
            rec.palette = run.pre_repair.palette_size();
            rec.error = run.repair_error.unwrap_or_default();
            (rec, Some(run.pre_repair))
        }
    }
}

/// Records in `(cell, trial)` order plus per-trial wall times.
#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub records: Vec<ExperimentRecord>,
    pub wall_ms: Vec<f64>,
}

impl SweepOutcome {
    pub fn budget_exhausted(&self) -> bool {
        self.records.iter().any(ExperimentRecord::is_budget_failure)
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let jobs: Vec<(Cell, usize)> = cfg
        .cells()
        .into_iter()
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let results: Vec<(ExperimentRecord, f64)> = jobs
        .par_iter()
        .map(|&(cell, t)| {
            let start = Instant::now();
            let seed = trial_seed(cfg.master_seed, cell.index, t);
            let (rec, _) = run_trial(cell.n, cell.p, seed, cell.procedure, cfg);
            (rec, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect();
    let (records, wall_ms) = results.into_iter().unzip();
    Ok(SweepOutcome { records, wall_ms })
}

/// Reruns the trial behind `rec` and checks it reproduces exactly; returns
/// the regenerated coloring.
pub fn replay(rec: &ExperimentRecord, cfg: &SweepConfig) -> Result<Option<Coloring>> {
    let (again, coloring) = run_trial(rec.n, rec.p, rec.seed, rec.procedure, cfg);
    if again.to_row() != rec.to_row() {
        return Err(Error::Config(format!(
            "replay of seed {} at n = {}, p = {} diverged",
            rec.seed, rec.n, rec.p
        )));
    }
    Ok(coloring)
}

pub fn write_records<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ExperimentRecord::header())?;
    for r in records {
        w.write_record(r.to_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_records(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Reads records, rejecting any header that differs from the current schema.
pub fn read_records<R: Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let expected = ExperimentRecord::header();
    if header != expected {
        let unknown: Vec<&String> = header.iter().filter(|h| !expected.contains(h)).collect();
        return Err(Error::Parse {
            line: 1,
            msg: if unknown.is_empty() {
                "header does not match the record schema".into()
            } else {
                format!("unknown columns {unknown:?}")
            },
        });
    }
    r.records()
        .enumerate()
        .map(|(i, row)| ExperimentRecord::from_row(&row?, i + 2))
        .collect()
}

/// Empirical palette statistics for one `(n, p, procedure)` cell next to the
/// predictions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub n: usize,
    pub p: f64,
    pub procedure: Variant,
    pub trials: usize,
    pub valid_fraction: f64,
    pub mean_palette: f64,
    pub min_palette: usize,
    pub max_palette: usize,
    pub predictions: Vec<Prediction>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prediction {
    pub label: &'static str,
    pub value: Option<f64>,
    /// `mean_palette / value`.
    pub ratio: Option<f64>,
}

impl Prediction {
    pub fn ratio_text(&self) -> String {
        self.ratio.map_or_else(|| "n/a".to_string(), |r| format!("{r:.4}"))
    }
}

/// Groups records by cell in first-appearance order.
pub fn compare_with_theory(records: &[ExperimentRecord]) -> Vec<ComparisonRow> {
    let mut groups: Vec<(usize, u64, Variant, Vec<&ExperimentRecord>)> = Vec::new();
    for r in records {
        let key = (r.n, r.p.to_bits(), r.procedure);
        match groups.iter_mut().find(|g| (g.0, g.1, g.2) == key) {
            Some(g) => g.3.push(r),
            None => groups.push((key.0, key.1, key.2, vec![r])),
        }
    }
    groups
        .into_iter()
        .map(|(n, p_bits, procedure, rs)| {
            let trials = rs.len();
            let mean = rs.iter().map(|r| r.palette as f64).sum::<f64>() / trials as f64;
            let predictions = PREDICTION_LABELS
                .iter()
                .enumerate()
                .map(|(i, &label)| {
                    let value = rs[0].predicted.get(i).copied().flatten();
                    Prediction {
                        label,
                        value,
                        ratio: value.filter(|&v| v > 0.0).map(|v| mean / v),
                    }
                })
                .collect();
            ComparisonRow {
                n,
                p: f64::from_bits(p_bits),
                procedure,
                trials,
                valid_fraction: rs.iter().filter(|r| r.valid).count() as f64 / trials as f64,
                mean_palette: mean,
                min_palette: rs.iter().map(|r| r.palette).min().unwrap_or(0),
                max_palette: rs.iter().map(|r| r.palette).max().unwrap_or(0),
                predictions,
            }
        })
        .collect()
}

/// Plain-text table of a comparison, one line per cell and label.
pub fn comparison_table(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("n\tp\tprocedure\ttrials\tvalid\tmean_palette\tlabel\tprediction\tratio\n");
    for r in rows {
        for pr in &r.predictions {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{:.3}\t{:.3}\t{}\t{}\t{}\n",
                r.n,
                r.p,
                r.procedure,
                r.trials,
                r.valid_fraction,
                r.mean_palette,
                pr.label,
                pr.value.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}")),
                pr.ratio_text()
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(extra: &str) -> SweepConfig {
        SweepConfig::from_toml(&format!("version = 1\nn = [40]\np = [0.3]\ntrials = 1\n{extra}")).unwrap()
    }

    #[test]
    fn config_rejects_bad_input() {
        assert!(SweepConfig::from_toml("version = 2\nn = [4]\np = [0.3]\ntrials = 1").is_err());
        assert!(SweepConfig::from_toml("version = 1\nn = []\np = [0.3]\ntrials = 1").is_err());
        assert!(SweepConfig::from_toml("version = 1\nn = [4]\np = [0.3]\ntrials = 0").is_err());
        assert!(SweepConfig::from_toml("version = 1\nn = [4]\np = [0.3]\nrho = [0.2]\ntrials = 1").is_err());
        assert!(SweepConfig::from_toml("version = 1\nn = [4]\np = [0.3]\ntrials = 1\nbogus = 3").is_err());
    }

    #[test]
    fn one_cell_one_record() {
        let out = run_sweep(&config("")).unwrap();
        assert_eq!(out.records.len(), 1);
        assert!(out.records[0].valid);
    }

    #[test]
    fn seeds_differ_across_cells_and_trials() {
        assert_ne!(trial_seed(0, 0, 1), trial_seed(0, 1, 0));
        assert_ne!(trial_seed(0, 0, 0), trial_seed(1, 0, 0));
    }

    #[test]
    fn csv_round_trip_and_strict_header() {
        let cfg = SweepConfig::from_toml("version = 1\nn = [30]\np = [0.3]\ntrials = 3\nprocedures = [\"A\", \"B\"]").unwrap();
        let out = run_sweep(&cfg).unwrap();
        let text = records_to_csv(&out.records).unwrap();
        let back = read_records(text.as_bytes()).unwrap();
        assert_eq!(records_to_csv(&back).unwrap(), text);
        let extra = text.replacen("schema_version", "schema_version,extra", 1);
        assert!(read_records(extra.as_bytes()).is_err());
    }

    #[test]
    fn comparison_ratio_arithmetic() {
        let mut rec = run_trial(40, 0.3, 1, Variant::A, &config("")).0;
        rec.palette = 41;
        rec.predicted = vec![Some(46.05), None, None, None, None, None, None];
        let rows = compare_with_theory(std::slice::from_ref(&rec));
        assert!((rows[0].predictions[0].ratio.unwrap() - 41.0 / 46.05).abs() < 1e-12);
        assert_eq!(rows[0].predictions[1].ratio_text(), "n/a");
    }
}
