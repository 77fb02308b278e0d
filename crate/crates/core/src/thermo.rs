//! Canonical-ensemble thermodynamics of a one-dimensional box.
//!
//! Units: hbar = m = k_B = 1 and the engine box has unit side. Entropies are in nats.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theta::{self, LadderStats, Nome, DEFAULT_REL_TOL};

/// Temperature, carried both as `beta` and as the thermal de Broglie wavelength
/// `lambda_d = sqrt(2 pi beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalPoint {
    beta: f64,
    lambda_d: f64,
}

impl ThermalPoint {
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "must be positive and finite",
            });
        }
        Ok(ThermalPoint {
            beta,
            lambda_d: (2.0 * PI * beta).sqrt(),
        })
    }

    pub fn from_lambda_d(lambda_d: f64) -> Result<Self> {
        if !(lambda_d > 0.0 && lambda_d.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda_d",
                value: lambda_d,
                reason: "must be positive and finite",
            });
        }
        Ok(ThermalPoint {
            beta: lambda_d * lambda_d / (2.0 * PI),
            lambda_d,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lambda_d(&self) -> f64 {
        self.lambda_d
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn regime(&self) -> Regime {
        classify_regime(*self)
    }
}

/// Which formula supplies the partition function of a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionModel {
    /// `(theta_3(0, q) - 1) / 2`, the full level sum.
    Exact,
    /// `l / lambda_d - 1/2`.
    Semiclassical,
    /// `l / lambda_d`.
    Classical,
    /// Only the ground level: `Z = q`.
    #[serde(rename = "ground")]
    GroundState,
}

impl PartitionModel {
    pub const ALL: [PartitionModel; 4] = [
        PartitionModel::Exact,
        PartitionModel::Semiclassical,
        PartitionModel::Classical,
        PartitionModel::GroundState,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PartitionModel::Exact => "exact",
            PartitionModel::Semiclassical => "semiclassical",
            PartitionModel::Classical => "classical",
            PartitionModel::GroundState => "ground",
        }
    }
}

impl fmt::Display for PartitionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PartitionModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" | "quantum" => Ok(PartitionModel::Exact),
            "semiclassical" => Ok(PartitionModel::Semiclassical),
            "classical" => Ok(PartitionModel::Classical),
            "ground" | "groundstate" | "ground-state" => Ok(PartitionModel::GroundState),
            _ => Err(Error::UnknownModel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Quantum,
    Semiclassical,
    Classical,
}

/// Regime label for the unit box: quantum above `lambda_d = 1.4`, classical below 0.1.
/// Both endpoints belong to the semiclassical band.
pub fn classify_regime(thermal: ThermalPoint) -> Regime {
    let lambda = thermal.lambda_d();
    if lambda > 1.4 {
        Regime::Quantum
    } else if lambda >= 0.1 {
        Regime::Semiclassical
    } else {
        Regime::Classical
    }
}

/// Equilibrium state functions of one box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxState {
    pub ln_z: f64,
    pub energy: f64,
    pub entropy: f64,
}

/// A particle in a box of side `length` in contact with a bath at `thermal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalBox {
    length: f64,
    thermal: ThermalPoint,
    model: PartitionModel,
}

impl CanonicalBox {
    pub fn new(length: f64, thermal: ThermalPoint, model: PartitionModel) -> Result<Self> {
        if !(length > 0.0 && length <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "length",
                value: length,
                reason: "must lie in (0, 1]",
            });
        }
        if model == PartitionModel::Semiclassical && !(length / thermal.lambda_d() - 0.5 > 0.0) {
            return Err(Error::ModelDomain {
                length,
                lambda_d: thermal.lambda_d(),
            });
        }
        Ok(CanonicalBox {
            length,
            thermal,
            model,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn thermal(&self) -> ThermalPoint {
        self.thermal
    }

    pub fn model(&self) -> PartitionModel {
        self.model
    }

    /// `beta E_1(l)`, equal to `|ln q|` and to `pi (lambda_d / 2l)^2`.
    pub fn beta_e1(&self) -> f64 {
        let half_ratio = self.thermal.lambda_d() / (2.0 * self.length);
        PI * half_ratio * half_ratio
    }

    pub fn ground_energy(&self) -> f64 {
        theta::ground_energy(self.length)
    }

    /// `q = exp(-pi (lambda_d / 2l)^2)`. Fails only when `q` underflows to zero.
    pub fn nome(&self) -> Result<Nome> {
        Nome::from_log_abs(self.beta_e1())
    }

    fn ladder(&self) -> Result<LadderStats> {
        theta::ladder_stats(self.beta_e1(), DEFAULT_REL_TOL)
    }

    /// `length / lambda_d`.
    fn classical_ratio(&self) -> f64 {
        self.length / self.thermal.lambda_d()
    }

    pub fn ln_partition(&self) -> Result<f64> {
        Ok(match self.model {
            PartitionModel::Exact => self.ladder()?.ln_z,
            PartitionModel::Semiclassical => (self.classical_ratio() - 0.5).ln(),
            PartitionModel::Classical => self.classical_ratio().ln(),
            PartitionModel::GroundState => -self.beta_e1(),
        })
    }

    pub fn partition(&self) -> Result<f64> {
        Ok(match self.model {
            PartitionModel::Semiclassical => self.classical_ratio() - 0.5,
            PartitionModel::Classical => self.classical_ratio(),
            _ => self.ln_partition()?.exp(),
        })
    }

    /// `U = -d ln Z / d beta`.
    pub fn internal_energy(&self) -> Result<f64> {
        Ok(self.state()?.energy)
    }

    /// `S = ln Z + beta U` in nats.
    pub fn entropy(&self) -> Result<f64> {
        Ok(self.state()?.entropy)
    }

    /// `F = -ln Z / beta`.
    pub fn free_energy(&self) -> Result<f64> {
        Ok(-self.ln_partition()? / self.thermal.beta())
    }

    pub fn state(&self) -> Result<BoxState> {
        let beta = self.thermal.beta();
        Ok(match self.model {
            PartitionModel::Exact => {
                let ladder = self.ladder()?;
                BoxState {
                    ln_z: ladder.ln_z,
                    energy: self.ground_energy() * ladder.mean_level_sq,
                    entropy: ladder.entropy,
                }
            }
            PartitionModel::Semiclassical => {
                let ratio = self.classical_ratio();
                let z = ratio - 0.5;
                let beta_u = 0.5 * ratio / z;
                BoxState {
                    ln_z: z.ln(),
                    energy: beta_u / beta,
                    entropy: z.ln() + beta_u,
                }
            }
            PartitionModel::Classical => {
                let ln_z = self.classical_ratio().ln();
                BoxState {
                    ln_z,
                    energy: 0.5 / beta,
                    entropy: ln_z + 0.5,
                }
            }
            // A single populated level is a pure state.
            PartitionModel::GroundState => BoxState {
                ln_z: -self.beta_e1(),
                energy: self.ground_energy(),
                entropy: 0.0,
            },
        })
    }
}

/// Change of the state functions when a box is replaced by another at the same temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateChange {
    pub d_ln_z: f64,
    pub d_energy: f64,
    pub d_entropy: f64,
}

impl CanonicalBox {
    /// `state(to) - state(self)`. Models whose ratios are closed-form (classical,
    /// ground state) are differenced analytically so that exact cancellations stay exact.
    pub fn change_to(&self, to: &CanonicalBox) -> Result<StateChange> {
        match (self.model, to.model) {
            (PartitionModel::Classical, PartitionModel::Classical)
                if self.thermal == to.thermal =>
            {
                let d_ln_z = (to.length / self.length).ln();
                Ok(StateChange {
                    d_ln_z,
                    d_energy: 0.0,
                    d_entropy: d_ln_z,
                })
            }
            (PartitionModel::GroundState, PartitionModel::GroundState)
                if self.thermal == to.thermal =>
            {
                Ok(StateChange {
                    d_ln_z: self.beta_e1() - to.beta_e1(),
                    d_energy: to.ground_energy() - self.ground_energy(),
                    d_entropy: 0.0,
                })
            }
            _ => {
                let from = self.state()?;
                let to = to.state()?;
                Ok(StateChange {
                    d_ln_z: to.ln_z - from.ln_z,
                    d_energy: to.energy - from.energy,
                    d_entropy: to.entropy - from.entropy,
                })
            }
        }
    }
}

/// Free function form of [`CanonicalBox::nome`].
pub fn nome(canonical: &CanonicalBox) -> Result<Nome> {
    canonical.nome()
}
