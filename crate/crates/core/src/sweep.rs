//! Parameter sweeps over `(delta, gamma, lambda_d, model)` and the ledger CSV format.
//!
//! Every number is written with 12 significant digits. Output depends only on the
//! inputs: rows are sorted by `(model, lambda_d, delta, gamma, stage)` before
//! writing, whatever the worker count.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::engine::{grid, run_cycle, GridPoint, Stage, StageLedger};
use crate::error::{Error, Result};
use crate::thermo::PartitionModel;

/// Column set of every ledger dataset, in order.
pub const LEDGER_COLUMNS: [&str; 15] = [
    "delta",
    "gamma",
    "lambda_d",
    "model",
    "stage",
    "dU",
    "dS",
    "Q",
    "W",
    "beta_dU",
    "beta_Q",
    "beta_W",
    "dS_record",
    "p_left",
    "skip_reason",
];

/// Units and sign conventions, written as `#` comments ahead of the column header.
pub const LEDGER_HEADER: [&str; 7] = [
    "units: hbar = m = k_B = 1, engine box side = 1; lambda_d = sqrt(2 pi beta)",
    "entropies dS and dS_record in nats; dU, Q, W in energy units; beta_* columns are beta times the raw column",
    "sign convention: Q > 0 is heat into the joint system, W > 0 is work done by the joint system",
    "quasi-static stages: Q = dS / beta and W = Q - dU; dissipated heat is -Q",
    "dS_record: +H(p_left) booked at insertion, -H(p_left) at measurement",
    "stage: I insertion, M measurement, C control, E erasure, TOT cycle total",
    "skipped grid points appear as one row with empty stage and numeric columns and a skip_reason",
];

/// Formats with 12 significant digits; negative zero is written as zero.
pub fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Rounds to 12 significant digits, the precision of the CSV output.
pub fn snap(x: f64) -> f64 {
    fmt_num(x).parse().expect("formatted float parses")
}

/// A sweep axis: `start:stop:step` (inclusive) or an explicit comma list.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    Range { start: f64, stop: f64, step: f64 },
    List(Vec<f64>),
}

impl Axis {
    pub fn range(start: f64, stop: f64, step: f64) -> Axis {
        Axis::Range { start, stop, step }
    }

    pub fn single(value: f64) -> Axis {
        Axis::List(vec![value])
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let invalid = |reason: &str| Error::Axis {
            text: self.to_string(),
            reason: reason.to_string(),
        };
        match self {
            Axis::Range { start, stop, step } => {
                if ![start, stop, step].iter().all(|v| v.is_finite()) {
                    return Err(invalid("bounds must be finite"));
                }
                if !(*step > 0.0) {
                    return Err(invalid("step must be positive"));
                }
                if !(start < stop) {
                    return Err(invalid("start must be below stop"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                Ok((0..count).map(|i| snap(start + i as f64 * step)).collect())
            }
            Axis::List(values) => {
                if values.is_empty() {
                    return Err(invalid("axis is empty"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(invalid("values must be finite"));
                }
                Ok(values.clone())
            }
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Range { start, stop, step } => write!(f, "{start}:{stop}:{step}"),
            Axis::List(values) => {
                let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let invalid = |reason: String| Error::Axis {
            text: text.to_string(),
            reason,
        };
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| invalid(format!("`{}`: {e}", s.trim())))
        };
        let axis = if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            if parts.len() != 3 {
                return Err(invalid("expected start:stop:step".to_string()));
            }
            Axis::Range {
                start: number(parts[0])?,
                stop: number(parts[1])?,
                step: number(parts[2])?,
            }
        } else {
            Axis::List(text.split(',').map(number).collect::<Result<_>>()?)
        };
        axis.points()?;
        Ok(axis)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub delta_axis: Axis,
    pub gamma_axis: Axis,
    pub lambda_axis: Axis,
    pub models: Vec<PartitionModel>,
    pub output_path: PathBuf,
    /// Worker threads for grid evaluation; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl SweepSpec {
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        if self.models.is_empty() {
            return Err(Error::Axis {
                text: String::new(),
                reason: "no partition model selected".to_string(),
            });
        }
        Ok(grid(
            &self.delta_axis.points()?,
            &self.gamma_axis.points()?,
            &self.lambda_axis.points()?,
            &self.models,
        ))
    }
}

/// One CSV row: a stage of one grid point, its totals, or a skip record.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerRow {
    pub point: GridPoint,
    /// `None` for skip records.
    pub stage: Option<Stage>,
    pub ledger: Option<StageLedger>,
    pub p_left: Option<f64>,
    pub skip_reason: Option<String>,
}

impl LedgerRow {
    fn stage_rank(&self) -> usize {
        self.stage.map_or(5, |s| s as usize)
    }

    pub fn beta(&self) -> f64 {
        self.point.lambda_d * self.point.lambda_d / (2.0 * std::f64::consts::PI)
    }

    fn fields(&self) -> Vec<String> {
        let p = &self.point;
        let mut out = vec![
            fmt_num(p.delta),
            fmt_num(p.gamma),
            fmt_num(p.lambda_d),
            p.model.name().to_string(),
            self.stage.map_or(String::new(), |s| s.code().to_string()),
        ];
        match self.ledger {
            Some(l) => {
                let beta = self.beta();
                out.extend(
                    [l.energy, l.entropy, l.heat, l.work]
                        .into_iter()
                        .chain(l.scaled(beta))
                        .chain([l.record_entropy])
                        .map(fmt_num),
                );
            }
            None => out.extend(std::iter::repeat_n(String::new(), 8)),
        }
        out.push(self.p_left.map_or(String::new(), fmt_num));
        out.push(self.skip_reason.clone().unwrap_or_default());
        out
    }
}

/// Orders rows by `(model, lambda_d, delta, gamma, stage)`; skip rows last within a point.
pub fn sort_rows(rows: &mut [LedgerRow]) {
    rows.sort_by(|a, b| {
        a.point
            .sort_cmp(&b.point)
            .then(a.stage_rank().cmp(&b.stage_rank()))
    });
}

/// Four stage rows plus a totals row, or a single skip record.
pub fn ledger_rows(point: GridPoint) -> Vec<LedgerRow> {
    let outcome = point.config().and_then(|cfg| run_cycle(&cfg));
    match outcome {
        Ok(cycle) => Stage::ALL
            .iter()
            .map(|&stage| LedgerRow {
                point,
                stage: Some(stage),
                ledger: Some(*cycle.stage(stage)),
                p_left: Some(cycle.stats.p_left),
                skip_reason: None,
            })
            .collect(),
        Err(err) => vec![LedgerRow {
            point,
            stage: None,
            ledger: None,
            p_left: None,
            skip_reason: Some(err.to_string()),
        }],
    }
}

/// Runs `job` on a pool of `workers` threads, or on the global pool for `None`.
pub fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(job),
        None => job(),
    }
}

/// Evaluates `f` over `points` in parallel and returns the sorted rows.
pub fn evaluate_rows<F>(points: &[GridPoint], workers: Option<usize>, f: F) -> Vec<LedgerRow>
where
    F: Fn(GridPoint) -> Vec<LedgerRow> + Sync + Send,
{
    let mut rows: Vec<LedgerRow> = with_workers(workers, || {
        points.par_iter().flat_map_iter(|&p| f(p)).collect()
    });
    sort_rows(&mut rows);
    rows
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub rows: Vec<LedgerRow>,
}

impl Dataset {
    pub fn skipped(&self) -> usize {
        self.rows.iter().filter(|r| r.stage.is_none()).count()
    }

    pub fn to_csv_bytes(&self) -> Vec<u8> {
        ledger_csv_bytes(&self.rows, &[], &[])
    }
}

/// Evaluates the grid without writing anything.
pub fn evaluate_sweep(spec: &SweepSpec) -> Result<Dataset> {
    let points = spec.grid()?;
    Ok(Dataset {
        rows: evaluate_rows(&points, spec.workers, ledger_rows),
    })
}

/// Evaluates the grid and writes it to `spec.output_path`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Dataset> {
    let dataset = evaluate_sweep(spec)?;
    write_file(&spec.output_path, &dataset.to_csv_bytes())?;
    Ok(dataset)
}

/// Renders a CSV document: `#` comment lines, the column header, then records.
pub fn table_bytes(comments: &[&str], columns: &[&str], records: &[Vec<String>]) -> Vec<u8> {
    let mut out = Vec::new();
    for line in comments {
        out.extend_from_slice(b"# ");
        out.extend_from_slice(line.as_bytes());
        out.push(b'\n');
    }
    {
        let mut writer = csv::WriterBuilder::new().from_writer(&mut out);
        writer.write_record(columns).expect("in-memory write");
        for record in records {
            writer.write_record(record).expect("in-memory write");
        }
        writer.flush().expect("in-memory flush");
    }
    out
}

/// A named trailing column computed per row.
pub type ExtraColumn<'a> = (&'a str, &'a dyn Fn(&LedgerRow) -> String);

/// Ledger CSV with optional extra comment lines and extra trailing columns.
pub fn ledger_csv_bytes(rows: &[LedgerRow], comments: &[&str], extra: &[ExtraColumn]) -> Vec<u8> {
    let mut all_comments: Vec<&str> = LEDGER_HEADER.to_vec();
    all_comments.extend_from_slice(comments);
    let mut columns: Vec<&str> = LEDGER_COLUMNS.to_vec();
    columns.extend(extra.iter().map(|(name, _)| *name));
    let records: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let mut fields = row.fields();
            fields.extend(extra.iter().map(|(_, f)| f(row)));
            fields
        })
        .collect();
    table_bytes(&all_comments, &columns, &records)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Reads back a ledger CSV written by this module.
pub fn read_ledger_csv(path: &Path) -> Result<Vec<LedgerRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    let headers = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    let parse_err = |reason: String| Error::Parse {
        path: path.to_path_buf(),
        reason,
    };
    if headers.len() < LEDGER_COLUMNS.len()
        || headers.iter().zip(LEDGER_COLUMNS).any(|(a, b)| a != b)
    {
        return Err(parse_err(format!("unexpected header {headers:?}")));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let num = |i: usize| -> Result<f64> {
            record[i]
                .parse::<f64>()
                .map_err(|e| parse_err(format!("column {}: {e}", LEDGER_COLUMNS[i])))
        };
        let point = GridPoint {
            delta: num(0)?,
            gamma: num(1)?,
            lambda_d: num(2)?,
            model: record[3].parse()?,
        };
        let row = if record[4].is_empty() {
            LedgerRow {
                point,
                stage: None,
                ledger: None,
                p_left: None,
                skip_reason: Some(record[14].to_string()),
            }
        } else {
            let stage = Stage::from_code(&record[4])
                .ok_or_else(|| parse_err(format!("unknown stage `{}`", &record[4])))?;
            LedgerRow {
                point,
                stage: Some(stage),
                ledger: Some(StageLedger {
                    energy: num(5)?,
                    entropy: num(6)?,
                    heat: num(7)?,
                    work: num(8)?,
                    record_entropy: num(12)?,
                }),
                p_left: Some(num(13)?),
                skip_reason: None,
            }
        };
        rows.push(row);
    }
    Ok(rows)
}
