//! The four-stage Szilard engine cycle as endpoint-to-endpoint canonical transformations.
//!
//! The joint system is the particle (SUS, x axis) and the demon memory (y axis).
//! Every stage is quasi-static and isothermal, so each ledger is fixed by the
//! endpoint state functions:
//!
//! ```text
//! Q = dS / beta        heat into the joint system
//! W = Q - dU           work done by the joint system
//! ```
//!
//! The classical mixing entropy `H(p_L)` of the particle's side is booked `+H` at
//! insertion (the barrier creates the mixture) and `-H` at measurement (the
//! readout leaves a definite record). Control and erasure are purely conditional
//! on the record.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::thermo::{CanonicalBox, PartitionModel, StateChange, ThermalPoint};

/// Tolerance of the Landauer aggregate bound.
pub const LANDAUER_TOL: f64 = 1e-12;

/// `-p ln p - (1-p) ln(1-p)` in nats; zero at `p` in `{0, 1}`.
pub fn binary_entropy(p: f64) -> f64 {
    let small = p.min(1.0 - p);
    if small <= 0.0 {
        return 0.0;
    }
    -small * small.ln() - (1.0 - small) * (-small).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    delta: f64,
    gamma: f64,
    thermal: ThermalPoint,
    model: PartitionModel,
}

fn open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in the open interval (0, 1)",
        })
    }
}

impl EngineConfig {
    /// Validates the barrier position, the demon macrostate size and the model domain
    /// of all five boxes the cycle visits: `1, delta, 1-delta, gamma, 1-gamma`.
    pub fn new(
        delta: f64,
        gamma: f64,
        thermal: ThermalPoint,
        model: PartitionModel,
    ) -> Result<Self> {
        open_unit("delta", delta)?;
        open_unit("gamma", gamma)?;
        for length in [1.0, delta, 1.0 - delta, gamma, 1.0 - gamma] {
            CanonicalBox::new(length, thermal, model)?;
        }
        Ok(EngineConfig {
            delta,
            gamma,
            thermal,
            model,
        })
    }

    pub fn from_lambda_d(
        delta: f64,
        gamma: f64,
        lambda_d: f64,
        model: PartitionModel,
    ) -> Result<Self> {
        EngineConfig::new(delta, gamma, ThermalPoint::from_lambda_d(lambda_d)?, model)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn thermal(&self) -> ThermalPoint {
        self.thermal
    }

    pub fn model(&self) -> PartitionModel {
        self.model
    }

    pub fn beta(&self) -> f64 {
        self.thermal.beta()
    }

    /// A box of the cycle; lengths were validated at construction.
    fn cbox(&self, length: f64) -> CanonicalBox {
        CanonicalBox::new(length, self.thermal, self.model)
            .expect("box lengths are validated by EngineConfig::new")
    }

    /// The same barrier and bath with the barrier mirrored, `delta -> 1 - delta`.
    pub fn mirrored(&self) -> EngineConfig {
        EngineConfig {
            delta: 1.0 - self.delta,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementStats {
    pub p_left: f64,
    pub p_right: f64,
    /// Binary entropy of `(p_left, p_right)` in nats.
    pub h_binary: f64,
}

/// One stage's thermodynamic changes of the joint system.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StageLedger {
    #[serde(rename = "dU")]
    pub energy: f64,
    /// Total entropy change in nats, record terms included.
    #[serde(rename = "dS")]
    pub entropy: f64,
    /// Heat into the joint system.
    #[serde(rename = "Q")]
    pub heat: f64,
    /// Work done by the joint system.
    #[serde(rename = "W")]
    pub work: f64,
    /// The information-bearing part of `entropy`.
    #[serde(rename = "dS_record")]
    pub record_entropy: f64,
}

impl StageLedger {
    /// Closes the ledger with `Q = dS / beta` and `W = Q - dU`.
    pub fn quasi_static(energy: f64, entropy: f64, record_entropy: f64, beta: f64) -> Self {
        let heat = entropy / beta;
        StageLedger {
            energy,
            entropy,
            heat,
            work: heat - energy,
            record_entropy,
        }
    }

    pub fn components(&self) -> [f64; 5] {
        [
            self.energy,
            self.entropy,
            self.heat,
            self.work,
            self.record_entropy,
        ]
    }

    /// `(beta dU, beta Q, beta W)`.
    pub fn scaled(&self, beta: f64) -> [f64; 3] {
        [beta * self.energy, beta * self.heat, beta * self.work]
    }

    /// Largest component-wise absolute difference.
    pub fn max_abs_diff(&self, other: &StageLedger) -> f64 {
        self.components()
            .iter()
            .zip(other.components())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn add(&self, other: &StageLedger) -> StageLedger {
        StageLedger {
            energy: self.energy + other.energy,
            entropy: self.entropy + other.entropy,
            heat: self.heat + other.heat,
            work: self.work + other.work,
            record_entropy: self.record_entropy + other.record_entropy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stage {
    Insertion,
    Measurement,
    Control,
    Erasure,
    Total,
}

impl Stage {
    pub const CYCLE: [Stage; 4] = [
        Stage::Insertion,
        Stage::Measurement,
        Stage::Control,
        Stage::Erasure,
    ];

    pub const ALL: [Stage; 5] = [
        Stage::Insertion,
        Stage::Measurement,
        Stage::Control,
        Stage::Erasure,
        Stage::Total,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Stage::Insertion => "I",
            Stage::Measurement => "M",
            Stage::Control => "C",
            Stage::Erasure => "E",
            Stage::Total => "TOT",
        }
    }

    pub fn from_code(code: &str) -> Option<Stage> {
        match code {
            "I" => Some(Stage::Insertion),
            "M" => Some(Stage::Measurement),
            "C" => Some(Stage::Control),
            "E" => Some(Stage::Erasure),
            "TOT" => Some(Stage::Total),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::Insertion => "insertion",
            Stage::Measurement => "measurement",
            Stage::Control => "control",
            Stage::Erasure => "erasure",
            Stage::Total => "total",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleLedger {
    pub insertion: StageLedger,
    pub measurement: StageLedger,
    pub control: StageLedger,
    pub erasure: StageLedger,
    pub stats: MeasurementStats,
    pub totals: StageLedger,
    /// `dU_I + dU_C`, `dU_M + dU_E`, `(Q_I + Q_C) + (Q_M + Q_E)`, `(W_I + W_C) + (W_M + W_E)`.
    pub identity_residuals: [f64; 4],
}

impl CycleLedger {
    pub fn stage(&self, stage: Stage) -> &StageLedger {
        match stage {
            Stage::Insertion => &self.insertion,
            Stage::Measurement => &self.measurement,
            Stage::Control => &self.control,
            Stage::Erasure => &self.erasure,
            Stage::Total => &self.totals,
        }
    }
}

/// The joint reference state: particle thermal in the full box, demon in macrostate A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState {
    pub sus: CanonicalBox,
    pub demon: CanonicalBox,
}

impl JointState {
    pub fn ln_partition(&self) -> Result<f64> {
        Ok(self.sus.ln_partition()? + self.demon.ln_partition()?)
    }

    pub fn partition(&self) -> Result<f64> {
        Ok(self.sus.partition()? * self.demon.partition()?)
    }

    pub fn internal_energy(&self) -> Result<f64> {
        Ok(self.sus.internal_energy()? + self.demon.internal_energy()?)
    }

    pub fn entropy(&self) -> Result<f64> {
        Ok(self.sus.entropy()? + self.demon.entropy()?)
    }
}

pub fn initialize(cfg: &EngineConfig) -> JointState {
    JointState {
        sus: cfg.cbox(1.0),
        demon: cfg.cbox(cfg.gamma),
    }
}

/// Particle state changes from the full box into each side of the barrier.
struct SusSplit {
    left: StateChange,
    right: StateChange,
}

fn sus_split(cfg: &EngineConfig) -> Result<SusSplit> {
    let full = cfg.cbox(1.0);
    Ok(SusSplit {
        left: full.change_to(&cfg.cbox(cfg.delta))?,
        right: full.change_to(&cfg.cbox(1.0 - cfg.delta))?,
    })
}

/// Demon state change A(gamma) -> B(1 - gamma).
fn demon_flip(cfg: &EngineConfig) -> Result<StateChange> {
    cfg.cbox(cfg.gamma).change_to(&cfg.cbox(1.0 - cfg.gamma))
}

/// `p_L = Z(delta) / (Z(delta) + Z(1 - delta))`, evaluated through `ln Z` so that
/// partition functions below the float range still give a probability.
pub fn left_probability(cfg: &EngineConfig) -> Result<MeasurementStats> {
    let p_left = if cfg.model == PartitionModel::Classical {
        // Z is proportional to the length.
        cfg.delta
    } else {
        let left = cfg.cbox(cfg.delta);
        let right = cfg.cbox(1.0 - cfg.delta);
        let log_ratio = left.change_to(&right)?.d_ln_z;
        1.0 / (1.0 + log_ratio.exp())
    };
    let p_right = 1.0 - p_left;
    Ok(MeasurementStats {
        p_left,
        p_right,
        h_binary: binary_entropy(p_left),
    })
}

/// `p_L dX(delta) + p_R dX(1 - delta)` for the energy and entropy of the split.
fn split_average(split: &SusSplit, stats: &MeasurementStats) -> (f64, f64) {
    (
        stats.p_left * split.left.d_energy + stats.p_right * split.right.d_energy,
        stats.p_left * split.left.d_entropy + stats.p_right * split.right.d_entropy,
    )
}

fn insertion_from(cfg: &EngineConfig, split: &SusSplit, stats: &MeasurementStats) -> StageLedger {
    let (d_u, _) = split_average(split, stats);
    // sum p (dS - ln p) rather than sum p dS + H, so the classical terms cancel exactly.
    let mixed = |p: f64, d_s: f64| if p > 0.0 { p * (d_s - p.ln()) } else { 0.0 };
    let d_s =
        mixed(stats.p_left, split.left.d_entropy) + mixed(stats.p_right, split.right.d_entropy);
    StageLedger::quasi_static(d_u, d_s, stats.h_binary, cfg.beta())
}

fn control_from(cfg: &EngineConfig, split: &SusSplit, stats: &MeasurementStats) -> StageLedger {
    let (d_u, d_s) = split_average(split, stats);
    StageLedger::quasi_static(-d_u, -d_s, 0.0, cfg.beta())
}

fn measurement_from(
    cfg: &EngineConfig,
    flip: &StateChange,
    stats: &MeasurementStats,
) -> StageLedger {
    let d_u = stats.p_right * flip.d_energy;
    let d_s = stats.p_right * flip.d_entropy;
    StageLedger::quasi_static(d_u, d_s - stats.h_binary, -stats.h_binary, cfg.beta())
}

fn erasure_from(cfg: &EngineConfig, flip: &StateChange, stats: &MeasurementStats) -> StageLedger {
    let d_u = stats.p_right * flip.d_energy;
    let d_s = stats.p_right * flip.d_entropy;
    StageLedger::quasi_static(-d_u, -d_s, 0.0, cfg.beta())
}

/// Barrier insertion: the thermal particle becomes a classical mixture of the two sides.
pub fn stage_insertion(cfg: &EngineConfig) -> Result<StageLedger> {
    let stats = left_probability(cfg)?;
    Ok(insertion_from(cfg, &sus_split(cfg)?, &stats))
}

/// Readout and C-NOT: the record is fixed and the demon moves A -> B on outcome R.
pub fn stage_measurement(cfg: &EngineConfig) -> Result<StageLedger> {
    let stats = left_probability(cfg)?;
    Ok(measurement_from(cfg, &demon_flip(cfg)?, &stats))
}

/// Isothermal expansion of the occupied side back to the full box.
pub fn stage_control(cfg: &EngineConfig) -> Result<StageLedger> {
    let stats = left_probability(cfg)?;
    Ok(control_from(cfg, &sus_split(cfg)?, &stats))
}

/// Conditional reset of the demon B -> A.
pub fn stage_erasure(cfg: &EngineConfig) -> Result<StageLedger> {
    let stats = left_probability(cfg)?;
    Ok(erasure_from(cfg, &demon_flip(cfg)?, &stats))
}

pub fn run_cycle(cfg: &EngineConfig) -> Result<CycleLedger> {
    let stats = left_probability(cfg)?;
    let split = sus_split(cfg)?;
    let flip = demon_flip(cfg)?;

    let insertion = insertion_from(cfg, &split, &stats);
    let measurement = measurement_from(cfg, &flip, &stats);
    let control = control_from(cfg, &split, &stats);
    let erasure = erasure_from(cfg, &flip, &stats);

    let totals = insertion.add(&measurement).add(&control).add(&erasure);
    let identity_residuals = [
        insertion.energy + control.energy,
        measurement.energy + erasure.energy,
        (insertion.heat + control.heat) + (measurement.heat + erasure.heat),
        (insertion.work + control.work) + (measurement.work + erasure.work),
    ];
    Ok(CycleLedger {
        insertion,
        measurement,
        control,
        erasure,
        stats,
        totals,
        identity_residuals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauerCheck {
    /// Dissipated heat of measurement plus erasure in units of `k_B T`.
    pub lhs: f64,
    /// `H(delta)` of the geometric barrier position.
    pub rhs: f64,
    pub satisfied: bool,
    pub slack: f64,
    /// `H(p_L)`, the alternative reading of the bound.
    pub h_p_left: f64,
}

pub fn landauer_from(cfg: &EngineConfig, ledger: &CycleLedger) -> LandauerCheck {
    let lhs = -cfg.beta() * (ledger.measurement.heat + ledger.erasure.heat);
    let rhs = binary_entropy(cfg.delta);
    LandauerCheck {
        lhs,
        rhs,
        satisfied: lhs <= rhs + LANDAUER_TOL,
        slack: rhs - lhs,
        h_p_left: ledger.stats.h_binary,
    }
}

/// `-beta (Q_M + Q_E) <= H(delta)`.
pub fn landauer_check(cfg: &EngineConfig) -> Result<LandauerCheck> {
    Ok(landauer_from(cfg, &run_cycle(cfg)?))
}

/// Largest component difference between the stage ledgers at `delta` and `1 - delta`.
pub fn mirror_asymmetry(cfg: &EngineConfig) -> Result<f64> {
    let here = run_cycle(cfg)?;
    let there = run_cycle(&cfg.mirrored())?;
    Ok(Stage::CYCLE
        .iter()
        .map(|&s| here.stage(s).max_abs_diff(there.stage(s)))
        .fold(0.0, f64::max))
}

/// Unvalidated grid coordinates; the model domain is checked when evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub delta: f64,
    pub gamma: f64,
    pub lambda_d: f64,
    pub model: PartitionModel,
}

impl GridPoint {
    pub fn config(&self) -> Result<EngineConfig> {
        EngineConfig::from_lambda_d(self.delta, self.gamma, self.lambda_d, self.model)
    }

    /// Ordering by (model, lambda_d, delta, gamma).
    pub fn sort_cmp(&self, other: &GridPoint) -> Ordering {
        self.model
            .cmp(&other.model)
            .then(self.lambda_d.total_cmp(&other.lambda_d))
            .then(self.delta.total_cmp(&other.delta))
            .then(self.gamma.total_cmp(&other.gamma))
    }
}

/// Cartesian product in (model, lambda_d, delta, gamma) order.
pub fn grid(
    deltas: &[f64],
    gammas: &[f64],
    lambdas: &[f64],
    models: &[PartitionModel],
) -> Vec<GridPoint> {
    let mut points = Vec::with_capacity(deltas.len() * gammas.len() * lambdas.len() * models.len());
    for &model in models {
        for &lambda_d in lambdas {
            for &delta in deltas {
                for &gamma in gammas {
                    points.push(GridPoint {
                        delta,
                        gamma,
                        lambda_d,
                        model,
                    });
                }
            }
        }
    }
    points
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Check {
    /// `dU_I + dU_C`.
    InsertionControlEnergy,
    /// `dU_M + dU_E`.
    MeasurementErasureEnergy,
    Heat,
    Work,
    TotalEnergy,
    TotalEntropy,
    TotalHeat,
    TotalWork,
    Landauer,
    /// Ledger change under `delta -> 1 - delta` at `gamma = 1/2`.
    MirrorSymmetry,
}

impl Check {
    pub fn label(self) -> &'static str {
        match self {
            Check::InsertionControlEnergy => "dU_I+dU_C",
            Check::MeasurementErasureEnergy => "dU_M+dU_E",
            Check::Heat => "Q_I+Q_C+Q_M+Q_E",
            Check::Work => "W_I+W_C+W_M+W_E",
            Check::TotalEnergy => "total dU",
            Check::TotalEntropy => "total dS",
            Check::TotalHeat => "total Q",
            Check::TotalWork => "total W",
            Check::Landauer => "landauer slack",
            Check::MirrorSymmetry => "mirror symmetry",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub point: GridPoint,
    pub check: Check,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub point: GridPoint,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tol: f64,
    pub evaluated: usize,
    pub skipped: Vec<SkippedPoint>,
    /// Max `|residual|` per balance identity.
    pub max_residuals: [f64; 4],
    /// Max `|total|` for dU, dS, Q, W.
    pub max_totals: [f64; 4],
    /// Smallest Landauer slack on the grid.
    pub min_landauer_slack: f64,
    /// Largest mirror asymmetry over `gamma = 1/2` points.
    pub max_mirror_asymmetry: f64,
    /// Every evaluated point with its Landauer check, in grid order.
    pub landauer: Vec<(GridPoint, LandauerCheck)>,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

enum PointOutcome {
    Skipped(SkippedPoint),
    Evaluated {
        point: GridPoint,
        residuals: [f64; 4],
        totals: [f64; 4],
        landauer: LandauerCheck,
        mirror: Option<f64>,
    },
}

fn evaluate_point(point: GridPoint) -> PointOutcome {
    let skip = |err: Error| {
        PointOutcome::Skipped(SkippedPoint {
            point,
            reason: err.to_string(),
        })
    };
    let cfg = match point.config() {
        Ok(cfg) => cfg,
        Err(err) => return skip(err),
    };
    let ledger = match run_cycle(&cfg) {
        Ok(ledger) => ledger,
        Err(err) => return skip(err),
    };
    let mirror = if cfg.gamma == 0.5 {
        match mirror_asymmetry(&cfg) {
            Ok(m) => Some(m),
            Err(err) => return skip(err),
        }
    } else {
        None
    };
    let t = ledger.totals;
    PointOutcome::Evaluated {
        point,
        residuals: ledger.identity_residuals,
        totals: [t.energy, t.entropy, t.heat, t.work],
        landauer: landauer_from(&cfg, &ledger),
        mirror,
    }
}

/// Runs the cycle over every grid point and collects the balance-identity,
/// cycle-closure, Landauer and mirror-symmetry checks against `tol`.
/// Points outside the model domain are skipped, not counted as violations.
pub fn verify_identities(points: &[GridPoint], tol: f64) -> VerificationReport {
    let mut sorted = points.to_vec();
    sorted.sort_by(GridPoint::sort_cmp);
    let outcomes: Vec<PointOutcome> = sorted.par_iter().map(|&p| evaluate_point(p)).collect();

    let mut report = VerificationReport {
        tol,
        evaluated: 0,
        skipped: Vec::new(),
        max_residuals: [0.0; 4],
        max_totals: [0.0; 4],
        min_landauer_slack: f64::INFINITY,
        max_mirror_asymmetry: 0.0,
        landauer: Vec::new(),
        violations: Vec::new(),
    };
    let residual_checks = [
        Check::InsertionControlEnergy,
        Check::MeasurementErasureEnergy,
        Check::Heat,
        Check::Work,
    ];
    let total_checks = [
        Check::TotalEnergy,
        Check::TotalEntropy,
        Check::TotalHeat,
        Check::TotalWork,
    ];
    for outcome in outcomes {
        match outcome {
            PointOutcome::Skipped(s) => report.skipped.push(s),
            PointOutcome::Evaluated {
                point,
                residuals,
                totals,
                landauer,
                mirror,
            } => {
                report.evaluated += 1;
                for (i, (&value, &check)) in residuals.iter().zip(&residual_checks).enumerate() {
                    report.max_residuals[i] = report.max_residuals[i].max(value.abs());
                    if value.abs() > tol {
                        report.violations.push(Violation {
                            point,
                            check,
                            value,
                        });
                    }
                }
                for (i, (&value, &check)) in totals.iter().zip(&total_checks).enumerate() {
                    report.max_totals[i] = report.max_totals[i].max(value.abs());
                    if value.abs() > tol {
                        report.violations.push(Violation {
                            point,
                            check,
                            value,
                        });
                    }
                }
                report.min_landauer_slack = report.min_landauer_slack.min(landauer.slack);
                if !landauer.satisfied {
                    report.violations.push(Violation {
                        point,
                        check: Check::Landauer,
                        value: landauer.slack,
                    });
                }
                if let Some(m) = mirror {
                    report.max_mirror_asymmetry = report.max_mirror_asymmetry.max(m);
                    if m > tol {
                        report.violations.push(Violation {
                            point,
                            check: Check::MirrorSymmetry,
                            value: m,
                        });
                    }
                }
                report.landauer.push((point, landauer));
            }
        }
    }
    report
}
