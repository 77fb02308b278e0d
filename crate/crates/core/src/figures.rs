//! Datasets behind each published figure of the engine analysis.
//!
//! Ledger-valued figures reuse the fixed ledger schema of [`crate::sweep`]; the
//! single-box (fig2) and probability (fig4) figures have their own small schemas.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::engine::{left_probability, EngineConfig, GridPoint, Stage};
use crate::error::{Error, Result};
use crate::sweep::{
    evaluate_rows, fmt_num, ledger_csv_bytes, ledger_rows, table_bytes, with_workers, write_file,
    Axis, LedgerRow,
};
use crate::thermo::{CanonicalBox, PartitionModel, ThermalPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// Z, beta U and beta Q of the unit box against the nome.
    Fig2Zuq,
    /// Insertion ledger against temperature, ground-state vs exact.
    Fig3Insertion,
    /// p_L against temperature.
    Fig4ProbLambda,
    /// Measurement ledger on the (delta, gamma) plane.
    Fig5Measure,
    /// Control ledger on the (delta, lambda_d) plane.
    Fig6Control,
    /// Erasure work against gamma.
    Fig7Erase,
    /// Erasure ledger on the (delta, gamma) plane.
    Fig8ErasureWork,
    /// Per-stage dissipated heat against gamma in the semiclassical model.
    Fig9TradeoffVsGamma,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig2Zuq,
        FigureId::Fig3Insertion,
        FigureId::Fig4ProbLambda,
        FigureId::Fig5Measure,
        FigureId::Fig6Control,
        FigureId::Fig7Erase,
        FigureId::Fig8ErasureWork,
        FigureId::Fig9TradeoffVsGamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2Zuq => "fig2",
            FigureId::Fig3Insertion => "fig3",
            FigureId::Fig4ProbLambda => "fig4",
            FigureId::Fig5Measure => "fig5",
            FigureId::Fig6Control => "fig6",
            FigureId::Fig7Erase => "fig7",
            FigureId::Fig8ErasureWork => "fig8",
            FigureId::Fig9TradeoffVsGamma => "fig9",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

/// A file written by [`figure_dataset`]; `rows` excludes comments and the header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrittenFile {
    pub path: PathBuf,
    pub rows: usize,
}

/// The rendered content of one dataset file before it is written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureFile {
    pub name: String,
    pub rows: usize,
    pub bytes: Vec<u8>,
}

/// Temperature axes of the temperature-dependence figures (3 and 4).
pub const FIG3_LAMBDA: (f64, f64, f64) = (0.5, 4.0, 0.05);
pub const FIG4_LAMBDA: (f64, f64, f64) = (0.05, 4.0, 0.05);
pub const FIG3_DELTAS: [f64; 3] = [0.35, 0.4, 0.5];
pub const FIG4_DELTAS: [f64; 3] = [0.25, 1.0 / 3.0, 0.5];
pub const FIG7_LAMBDAS: [f64; 2] = [0.25, 2.0];
pub const FIG9_LAMBDAS: [f64; 4] = [0.001, 0.01, 0.3, 0.5];

fn axis(bounds: (f64, f64, f64)) -> Vec<f64> {
    Axis::range(bounds.0, bounds.1, bounds.2)
        .points()
        .expect("figure axes are valid")
}

/// `1/100 .. 99/100`, with 1/2 represented exactly.
fn percent_axis() -> Vec<f64> {
    (1..100).map(|i| f64::from(i) / 100.0).collect()
}

/// `0.05 .. 0.95` in steps of 0.05.
fn twentieths_axis() -> Vec<f64> {
    (1..20).map(|i| f64::from(i) / 20.0).collect()
}

fn points(
    deltas: &[f64],
    gammas: &[f64],
    lambdas: &[f64],
    model: PartitionModel,
) -> Vec<GridPoint> {
    crate::engine::grid(deltas, gammas, lambdas, &[model])
}

fn stage_rows(
    points: &[GridPoint],
    stages: &'static [Stage],
    workers: Option<usize>,
) -> Vec<LedgerRow> {
    evaluate_rows(points, workers, move |p| {
        ledger_rows(p)
            .into_iter()
            .filter(|r| r.stage.is_none_or(|s| stages.contains(&s)))
            .collect()
    })
}

fn ledger_file(name: String, rows: &[LedgerRow], comments: &[&str]) -> FigureFile {
    FigureFile {
        name,
        rows: rows.len(),
        bytes: ledger_csv_bytes(rows, comments, &[]),
    }
}

fn lambda_for_nome(q: f64) -> f64 {
    2.0 * (-q.ln() / PI).sqrt()
}

/// Renders every file of a figure in memory.
pub fn figure_files(id: FigureId, workers: Option<usize>) -> Result<Vec<FigureFile>> {
    with_workers(workers, || build(id))
}

fn build(id: FigureId) -> Result<Vec<FigureFile>> {
    match id {
        FigureId::Fig2Zuq => fig2(),
        FigureId::Fig3Insertion => {
            let lambdas = axis(FIG3_LAMBDA);
            let mut files = Vec::new();
            for delta in FIG3_DELTAS {
                for model in [PartitionModel::GroundState, PartitionModel::Exact] {
                    let pts = points(&[delta], &[0.5], &lambdas, model);
                    let rows = stage_rows(&pts, &[Stage::Insertion], None);
                    let beta_col: &dyn Fn(&LedgerRow) -> String = &|r| fmt_num(r.beta());
                    files.push(FigureFile {
                        name: format!("fig3_insertion_delta{delta}_{model}.csv"),
                        rows: rows.len(),
                        bytes: ledger_csv_bytes(
                            &rows,
                            &["figure: insertion ledger vs temperature; gamma does not enter insertion",
                              "beta column: inverse temperature of lambda_d"],
                            &[("beta", beta_col)],
                        ),
                    });
                }
            }
            Ok(files)
        }
        FigureId::Fig4ProbLambda => fig4(),
        FigureId::Fig5Measure => {
            let pts = points(&twentieths_axis(), &twentieths_axis(), &[0.4], PartitionModel::Exact);
            let rows = stage_rows(&pts, &[Stage::Measurement], None);
            Ok(vec![ledger_file(
                "fig5_measure.csv".into(),
                &rows,
                &["figure: measurement ledger on the (delta, gamma) plane at lambda_d = 0.4, exact model"],
            )])
        }
        FigureId::Fig6Control => {
            let lambdas = axis((0.1, 3.0, 0.1));
            let pts = points(&twentieths_axis(), &[0.5], &lambdas, PartitionModel::Exact);
            let rows = stage_rows(&pts, &[Stage::Control], None);
            Ok(vec![ledger_file(
                "fig6_control.csv".into(),
                &rows,
                &["figure: control ledger on the (delta, lambda_d) plane, exact model; gamma does not enter control"],
            )])
        }
        FigureId::Fig7Erase => Ok(FIG7_LAMBDAS
            .iter()
            .map(|&lambda| {
                let pts = points(&[0.5], &percent_axis(), &[lambda], PartitionModel::Exact);
                let rows = stage_rows(&pts, &[Stage::Erasure], None);
                ledger_file(
                    format!("fig7_erase_work_lambda{lambda}.csv"),
                    &rows,
                    &["figure: erasure work W vs demon macrostate size gamma, delta = 0.5, exact model"],
                )
            })
            .collect()),
        FigureId::Fig8ErasureWork => {
            let pts = points(&twentieths_axis(), &twentieths_axis(), &[0.4], PartitionModel::Exact);
            let rows = stage_rows(&pts, &[Stage::Erasure], None);
            Ok(vec![ledger_file(
                "fig8_erase.csv".into(),
                &rows,
                &["figure: erasure ledger on the (delta, gamma) plane at lambda_d = 0.4, exact model"],
            )])
        }
        FigureId::Fig9TradeoffVsGamma => Ok(FIG9_LAMBDAS
            .iter()
            .map(|&lambda| {
                let pts = points(&[0.5], &percent_axis(), &[lambda], PartitionModel::Semiclassical);
                let rows = stage_rows(&pts, &Stage::ALL, None);
                ledger_file(
                    format!("fig9_tradeoff_lambda{lambda}.csv"),
                    &rows,
                    &["figure: per-stage dissipated heat -beta_Q vs gamma, delta = 0.5, semiclassical model"],
                )
            })
            .collect()),
    }
}

fn fig2() -> Result<Vec<FigureFile>> {
    let nomes: Vec<f64> = (1..1000).map(|i| f64::from(i) / 1000.0).collect();
    let models = [
        PartitionModel::Exact,
        PartitionModel::Semiclassical,
        PartitionModel::Classical,
    ];
    let mut records: Vec<Vec<String>> = Vec::new();
    for model in models {
        let rows: Vec<Vec<String>> = nomes
            .par_iter()
            .map(|&q| -> Result<Vec<String>> {
                let lambda = lambda_for_nome(q);
                let thermal = ThermalPoint::from_lambda_d(lambda)?;
                let mut row = vec![
                    fmt_num(q),
                    fmt_num(lambda),
                    fmt_num(thermal.beta()),
                    model.name().to_string(),
                ];
                match CanonicalBox::new(1.0, thermal, model) {
                    Ok(b) => {
                        let state = b.state()?;
                        row.push(fmt_num(b.partition()?));
                        row.push(fmt_num(thermal.beta() * state.energy));
                        row.push(fmt_num(state.entropy));
                        row.push(String::new());
                    }
                    Err(err @ Error::ModelDomain { .. }) => {
                        row.extend([String::new(), String::new(), String::new(), err.to_string()]);
                    }
                    Err(err) => return Err(err),
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        records.extend(rows);
    }
    let bytes = table_bytes(
        &[
            "units: hbar = m = k_B = 1, box side = 1; q = exp(-pi (lambda_d / 2)^2)",
            "figure: partition function, beta U and beta Q of the unit box vs q for the three regime models",
            "beta_Q: heat of isothermal assembly beta (U - F), identical to the entropy S in nats",
            "semiclassical rows with Z <= 0 (lambda_d >= 2) carry a skip_reason",
        ],
        &["q", "lambda_d", "beta", "model", "Z", "beta_U", "beta_Q", "skip_reason"],
        &records,
    );
    Ok(vec![FigureFile {
        name: "fig2_zuq.csv".into(),
        rows: records.len(),
        bytes,
    }])
}

fn fig4() -> Result<Vec<FigureFile>> {
    let lambdas = axis(FIG4_LAMBDA);
    let mut records = Vec::new();
    for model in [PartitionModel::Exact, PartitionModel::Classical] {
        for delta in FIG4_DELTAS {
            let rows: Vec<Vec<String>> = lambdas
                .par_iter()
                .map(|&lambda| -> Result<Vec<String>> {
                    let cfg = EngineConfig::from_lambda_d(delta, 0.5, lambda, model)?;
                    let stats = left_probability(&cfg)?;
                    Ok(vec![
                        fmt_num(lambda),
                        fmt_num(cfg.beta()),
                        fmt_num(delta),
                        model.name().to_string(),
                        fmt_num(stats.p_left),
                        fmt_num(stats.p_right),
                    ])
                })
                .collect::<Result<_>>()?;
            records.extend(rows);
        }
    }
    let bytes = table_bytes(
        &[
            "units: hbar = m = k_B = 1, box side = 1; beta = lambda_d^2 / (2 pi)",
            "figure: probability of finding the particle left of the barrier vs temperature",
        ],
        &["lambda_d", "beta", "delta", "model", "p_left", "p_right"],
        &records,
    );
    Ok(vec![FigureFile {
        name: "fig4_prob_left.csv".into(),
        rows: records.len(),
        bytes,
    }])
}

/// Writes the dataset files of `id` into `outdir`, returning one entry per file.
pub fn figure_dataset(
    id: FigureId,
    outdir: &Path,
    workers: Option<usize>,
) -> Result<Vec<WrittenFile>> {
    let files = figure_files(id, workers)?;
    files
        .into_iter()
        .map(|f| {
            let path = outdir.join(&f.name);
            write_file(&path, &f.bytes)?;
            Ok(WrittenFile { path, rows: f.rows })
        })
        .collect()
}
