//! The `szilard` command line.
//!
//! Exit codes: 0 success, 1 identity violations found by `verify`, 2 argument
//! errors, 3 model-domain errors, 4 I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::engine::{
    landauer_from, run_cycle, verify_identities, CycleLedger, EngineConfig, LandauerCheck, Stage,
    StageLedger,
};
use crate::error::Error;
use crate::figures::{figure_dataset, FigureId};
use crate::sweep::{fmt_num, run_sweep, table_bytes, Axis, SweepSpec};
use crate::thermo::{PartitionModel, Regime};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "szilard",
    version,
    about = "Quantum Szilard engine cycle thermodynamics",
    long_about = "Quantum Szilard engine cycle thermodynamics.\n\n\
        Units: hbar = m = k_B = 1 with unit box side. Q > 0 is heat into the joint \
        system, W > 0 is work done by it.\n\n\
        Exit codes: 0 ok, 1 verify found violations, 2 bad arguments, \
        3 model-domain error, 4 I/O error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Exact,
    Semiclassical,
    Classical,
    Ground,
}

impl From<ModelArg> for PartitionModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Exact => PartitionModel::Exact,
            ModelArg::Semiclassical => PartitionModel::Semiclassical,
            ModelArg::Classical => PartitionModel::Classical,
            ModelArg::Ground => PartitionModel::GroundState,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_figure(s: &str) -> Result<FigureId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one engine cycle and print its stage ledgers.
    Cycle {
        /// Barrier position, in (0, 1).
        #[arg(long)]
        delta: f64,
        /// Demon macrostate A size, in (0, 1).
        #[arg(long)]
        gamma: f64,
        /// Thermal de Broglie wavelength in units of the box side.
        #[arg(long = "lambda-d")]
        lambda_d: f64,
        #[arg(long, value_enum, default_value = "exact")]
        model: ModelArg,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Check the cycle balance identities and the Landauer bound on a grid.
    Verify {
        /// Barrier positions: start:stop:step or a comma list.
        #[arg(long, value_parser = parse_axis, default_value = "0.1:0.9:0.1")]
        delta: Axis,
        /// Demon macrostate sizes: start:stop:step or a comma list.
        #[arg(long, value_parser = parse_axis, default_value = "0.1:0.9:0.1")]
        gamma: Axis,
        /// Thermal wavelengths: start:stop:step or a comma list.
        #[arg(long = "lambda-d", value_parser = parse_axis, default_value = "0.05,0.4,1.0,2.0")]
        lambda_d: Axis,
        /// Partition models, comma separated.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "exact")]
        model: Vec<ModelArg>,
        /// Largest admissible absolute residual.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Evaluate a (delta, gamma, lambda_d, model) grid and write the ledger CSV.
    Sweep {
        #[arg(long, value_parser = parse_axis, default_value = "0.1:0.9:0.1")]
        delta: Axis,
        #[arg(long, value_parser = parse_axis, default_value = "0.1:0.9:0.1")]
        gamma: Axis,
        #[arg(long = "lambda-d", value_parser = parse_axis, default_value = "0.05,0.4,1.0,2.0")]
        lambda_d: Axis,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "exact")]
        model: Vec<ModelArg>,
        /// Output CSV path.
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
        /// Worker threads (default: one per core). Output does not depend on it.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Write the dataset behind a figure (fig2 .. fig9).
    Figure {
        #[arg(value_parser = parse_figure)]
        id: FigureId,
        #[arg(long, default_value = "figures")]
        outdir: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "error: {e}");
            if code == EXIT_USAGE {
                let _ = writeln!(err, "\nFor more information, try '--help'.");
            }
            code
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ModelDomain { .. } => EXIT_DOMAIN,
        Error::Io { .. } | Error::Csv { .. } => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Cycle {
            delta,
            gamma,
            lambda_d,
            model,
            format,
        } => {
            let cfg = EngineConfig::from_lambda_d(delta, gamma, lambda_d, model.into())?;
            let ledger = run_cycle(&cfg)?;
            let landauer = landauer_from(&cfg, &ledger);
            let text = match format {
                Format::Table => cycle_table(&cfg, &ledger, &landauer),
                Format::Csv => cycle_csv(&cfg, &ledger),
                Format::Json => cycle_json(&cfg, &ledger, &landauer),
            };
            out.write_all(text.as_bytes()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            delta,
            gamma,
            lambda_d,
            model,
            tol,
        } => {
            if !(tol >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "tol",
                    value: tol,
                    reason: "must be non-negative",
                });
            }
            let models: Vec<PartitionModel> = model.into_iter().map(Into::into).collect();
            let points = crate::engine::grid(
                &delta.points()?,
                &gamma.points()?,
                &lambda_d.points()?,
                &models,
            );
            let report = verify_identities(&points, tol);
            let mut text = String::new();
            text += &format!(
                "evaluated {} points, skipped {} (model domain), tol {:e}\n",
                report.evaluated,
                report.skipped.len(),
                tol
            );
            let names = [
                "dU_I+dU_C",
                "dU_M+dU_E",
                "Q_I+Q_C+Q_M+Q_E",
                "W_I+W_C+W_M+W_E",
            ];
            for (name, value) in names.iter().zip(report.max_residuals) {
                text += &format!("max |{name}| = {value:.3e}\n");
            }
            for (name, value) in ["dU", "dS", "Q", "W"].iter().zip(report.max_totals) {
                text += &format!("max |total {name}| = {value:.3e}\n");
            }
            if report.evaluated > 0 {
                text += &format!("min landauer slack = {:.3e}\n", report.min_landauer_slack);
            }
            text += &format!(
                "max mirror asymmetry at gamma = 0.5 = {:.3e}\n",
                report.max_mirror_asymmetry
            );
            for v in &report.violations {
                text += &format!(
                    "VIOLATION {}: delta={} gamma={} lambda_d={} model={} value={:e}\n",
                    v.check.label(),
                    v.point.delta,
                    v.point.gamma,
                    v.point.lambda_d,
                    v.point.model,
                    v.value
                );
            }
            text += &format!("{} violation(s)\n", report.violations.len());
            out.write_all(text.as_bytes()).map_err(io_err)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VIOLATIONS
            })
        }
        Command::Sweep {
            delta,
            gamma,
            lambda_d,
            model,
            out: path,
            workers,
        } => {
            let spec = SweepSpec {
                delta_axis: delta,
                gamma_axis: gamma,
                lambda_axis: lambda_d,
                models: model.into_iter().map(Into::into).collect(),
                output_path: path.clone(),
                workers,
            };
            let dataset = run_sweep(&spec)?;
            writeln!(out, "{}\t{}", path.display(), dataset.rows.len()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Figure {
            id,
            outdir,
            workers,
        } => {
            for file in figure_dataset(id, &outdir, workers)? {
                writeln!(out, "{}\t{}", file.path.display(), file.rows).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Quantum => "quantum",
        Regime::Semiclassical => "semiclassical",
        Regime::Classical => "classical",
    }
}

fn positive_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn cycle_table(cfg: &EngineConfig, ledger: &CycleLedger, landauer: &LandauerCheck) -> String {
    let beta = cfg.beta();
    let mut s = format!(
        "delta = {}  gamma = {}  lambda_d = {}  beta = {:.6}  model = {}  regime = {}\n",
        cfg.delta(),
        cfg.gamma(),
        cfg.thermal().lambda_d(),
        beta,
        cfg.model(),
        regime_name(cfg.thermal().regime()),
    );
    s += &format!(
        "p_left = {:.6e}  p_right = {:.6e}  H(p) = {:.6e} nats\n\n",
        ledger.stats.p_left, ledger.stats.p_right, ledger.stats.h_binary
    );
    s += &format!(
        "{:<12} {:>14} {:>14} {:>14} {:>14} {:>14} {:>14} {:>14} {:>14}\n",
        "stage", "dU", "dS", "Q", "W", "beta*dU", "beta*Q", "beta*W", "dS_record"
    );
    for stage in Stage::ALL {
        let l = *ledger.stage(stage);
        let [bu, bq, bw] = l.scaled(beta).map(positive_zero);
        let l = StageLedger {
            energy: positive_zero(l.energy),
            entropy: positive_zero(l.entropy),
            heat: positive_zero(l.heat),
            work: positive_zero(l.work),
            record_entropy: positive_zero(l.record_entropy),
        };
        s += &format!(
            "{:<12} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}\n",
            stage.name(),
            l.energy,
            l.entropy,
            l.heat,
            l.work,
            bu,
            bq,
            bw,
            l.record_entropy
        );
    }
    let r = ledger.identity_residuals;
    s += &format!(
        "\nresiduals: dU_I+dU_C = {:.3e}  dU_M+dU_E = {:.3e}  sum Q = {:.3e}  sum W = {:.3e}\n",
        r[0], r[1], r[2], r[3]
    );
    s += &format!(
        "landauer: -beta(Q_M+Q_E) = {:.12}  H(delta) = {:.12}  slack = {:.3e}  satisfied = {}\n",
        landauer.lhs, landauer.rhs, landauer.slack, landauer.satisfied
    );
    s
}

fn cycle_csv(cfg: &EngineConfig, ledger: &CycleLedger) -> String {
    let beta = cfg.beta();
    let records: Vec<Vec<String>> = Stage::ALL
        .iter()
        .map(|&stage| {
            let l = ledger.stage(stage);
            let mut rec = vec![
                fmt_num(cfg.delta()),
                fmt_num(cfg.gamma()),
                fmt_num(cfg.thermal().lambda_d()),
                cfg.model().name().to_string(),
                stage.code().to_string(),
            ];
            rec.extend(
                [l.energy, l.entropy, l.heat, l.work]
                    .into_iter()
                    .chain(l.scaled(beta))
                    .chain([l.record_entropy, ledger.stats.p_left])
                    .map(fmt_num),
            );
            rec.push(String::new());
            rec
        })
        .collect();
    let bytes = table_bytes(
        &crate::sweep::LEDGER_HEADER,
        &crate::sweep::LEDGER_COLUMNS,
        &records,
    );
    String::from_utf8(bytes).expect("csv output is utf-8")
}

#[derive(Serialize)]
struct CycleReport<'a> {
    delta: f64,
    gamma: f64,
    lambda_d: f64,
    beta: f64,
    model: PartitionModel,
    ledger: &'a CycleLedger,
    beta_scaled: Vec<ScaledRow>,
    landauer: &'a LandauerCheck,
}

#[derive(Serialize)]
struct ScaledRow {
    stage: &'static str,
    beta_du: f64,
    beta_q: f64,
    beta_w: f64,
}

fn cycle_json(cfg: &EngineConfig, ledger: &CycleLedger, landauer: &LandauerCheck) -> String {
    let beta = cfg.beta();
    let report = CycleReport {
        delta: cfg.delta(),
        gamma: cfg.gamma(),
        lambda_d: cfg.thermal().lambda_d(),
        beta,
        model: cfg.model(),
        ledger,
        beta_scaled: Stage::ALL
            .iter()
            .map(|&stage| {
                let [beta_du, beta_q, beta_w] = ledger.stage(stage).scaled(beta);
                ScaledRow {
                    stage: stage.name(),
                    beta_du,
                    beta_q,
                    beta_w,
                }
            })
            .collect(),
        landauer,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("ledger serializes");
    text.push('\n');
    text
}
