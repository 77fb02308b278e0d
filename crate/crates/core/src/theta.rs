//! Jacobi theta_3 at z = 0 and the particle-in-a-box spectral sums built on it.
//!
//! For a box of length `l` the levels are `E_n = n^2 E_1` with `E_1 = pi^2 / (2 l^2)`
//! (units hbar = m = k_B = 1), so every Boltzmann factor is a power of the nome
//! `q = exp(-beta E_1)`:
//!
//! ```text
//! Z = sum_{n>=1} q^{n^2} = (theta_3(0, q) - 1) / 2
//! ```
//!
//! Everything here is parametrised by `a = beta E_1 = |ln q|`. For `a >= pi`
//! (`q <= e^-pi`) the direct series is summed. Below that the modular
//! (Poisson-summation) form
//!
//! ```text
//! theta_3(0, q) = sqrt(pi / a) * theta_3(0, q'),   q' = exp(-pi^2 / a)
//! ```
//!
//! is used instead. At `a = pi` both nomes equal `e^-pi`, so neither branch ever
//! sums more than a handful of terms.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default relative tolerance for every series in this module.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

/// Hard cap on the number of series terms. Reaching it is an error.
pub const MAX_TERMS: usize = 64;

/// `|ln q|` at the switch between the direct and modular representations.
pub const MODULAR_SWITCH_LOG: f64 = PI;

/// The elliptic nome, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Nome(f64);

impl Nome {
    pub fn new(q: f64) -> Result<Self> {
        if q > 0.0 && q < 1.0 {
            Ok(Nome(q))
        } else {
            Err(Error::NomeDomain(q))
        }
    }

    /// Builds the nome `exp(-a)` from `a = |ln q| > 0`.
    pub fn from_log_abs(a: f64) -> Result<Self> {
        Nome::new((-a).exp())
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `|ln q|`, which equals `beta E_1` for a box spectrum.
    pub fn log_abs(self) -> f64 {
        -self.0.ln()
    }

    /// The nome `exp(pi^2 / ln q)` of the modular-transformed series.
    pub fn modular_dual(self) -> f64 {
        (-PI * PI / self.log_abs()).exp()
    }
}

/// A truncated series value with the bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub truncation_bound: f64,
}

fn check_tol(rel_tol: f64) -> Result<()> {
    if rel_tol > 0.0 && rel_tol < 1e-3 {
        Ok(())
    } else {
        Err(Error::Tolerance(rel_tol))
    }
}

/// Sums `base + sum_{n >= first} term(n)` for a positive, super-geometrically
/// decaying `term`. The tail after `n` is bounded by `t_{n+1} / (1 - t_{n+2}/t_{n+1})`,
/// valid because the term ratio is itself decreasing in `n`.
fn sum_series<F>(base: f64, first: u32, rel_tol: f64, term: F) -> Result<SeriesResult>
where
    F: Fn(u32) -> f64,
{
    let mut sum = base;
    let mut n = first;
    let mut terms_used = 0;
    loop {
        sum += term(n);
        terms_used += 1;
        let next = term(n + 1);
        let bound = if next > 0.0 {
            let ratio = term(n + 2) / next;
            if ratio < 1.0 {
                next / (1.0 - ratio)
            } else {
                f64::INFINITY
            }
        } else {
            0.0
        };
        if bound <= rel_tol * sum.abs() {
            return Ok(SeriesResult {
                value: sum,
                terms_used,
                truncation_bound: bound,
            });
        }
        if terms_used >= MAX_TERMS {
            return Err(Error::ToleranceNotAchieved {
                terms: terms_used,
                rel_tol,
            });
        }
        n += 1;
    }
}

/// `theta_3(0, q) = 1 + 2 sum_{n>=1} q^{n^2}`, switching to the modular form for `q > e^-pi`.
pub fn theta3(q: Nome, rel_tol: f64) -> Result<SeriesResult> {
    if q.log_abs() >= MODULAR_SWITCH_LOG {
        theta3_direct(q, rel_tol)
    } else {
        theta3_modular(q, rel_tol)
    }
}

/// Direct summation of the defining series. Fails past [`MAX_TERMS`] for `q` near 1.
pub fn theta3_direct(q: Nome, rel_tol: f64) -> Result<SeriesResult> {
    check_tol(rel_tol)?;
    let a = q.log_abs();
    sum_series(1.0, 1, rel_tol, |n| 2.0 * (-a * f64::from(n * n)).exp())
}

/// `sqrt(pi / |ln q|) * theta_3(0, q')`. Fails past [`MAX_TERMS`] for `q` near 0.
pub fn theta3_modular(q: Nome, rel_tol: f64) -> Result<SeriesResult> {
    check_tol(rel_tol)?;
    let a = q.log_abs();
    let x = PI * PI / a;
    let prefactor = (PI / a).sqrt();
    let dual = sum_series(1.0, 1, rel_tol, |k| 2.0 * (-x * f64::from(k * k)).exp())?;
    Ok(SeriesResult {
        value: prefactor * dual.value,
        terms_used: dual.terms_used,
        truncation_bound: prefactor * dual.truncation_bound,
    })
}

/// Canonical statistics of the level ladder `E_n = n^2 E_1`, `n >= 1`, at `a = beta E_1`.
///
/// Stored in log/ratio form so that boxes deep in the quantum regime, where
/// `Z = e^-a` underflows, still give finite `ln Z`, `<n^2>` and entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderStats {
    /// `beta E_1`.
    pub beta_e1: f64,
    pub ln_z: f64,
    /// Thermal average `<n^2>`, so that `U = E_1 <n^2>` and `beta U = a <n^2>`.
    pub mean_level_sq: f64,
    /// `ln Z + beta U` in nats.
    pub entropy: f64,
    pub terms_used: usize,
    /// Relative truncation bound on `Z`.
    pub rel_truncation: f64,
}

/// Evaluates [`LadderStats`] at `a = beta E_1 > 0`.
pub fn ladder_stats(beta_e1: f64, rel_tol: f64) -> Result<LadderStats> {
    check_tol(rel_tol)?;
    let a = beta_e1;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "beta*E_1",
            value: a,
            reason: "must be positive and finite",
        });
    }
    if a >= MODULAR_SWITCH_LOG {
        // Z = e^-a (1 + R), with R and M carrying the excited levels relative to n = 1.
        let excited = |n: u32| f64::from(n * n - 1);
        let r = sum_series(1.0, 2, rel_tol, |n| (-a * excited(n)).exp())?;
        let m = sum_series(0.0, 2, rel_tol, |n| excited(n) * (-a * excited(n)).exp())?;
        let one_plus_r = r.value;
        let r_excess = one_plus_r - 1.0;
        let ln1p_r = r_excess.ln_1p();
        let m_ratio = m.value / one_plus_r;
        Ok(LadderStats {
            beta_e1: a,
            ln_z: -a + ln1p_r,
            mean_level_sq: 1.0 + m_ratio,
            entropy: ln1p_r + a * m_ratio,
            terms_used: r.terms_used.max(m.terms_used),
            rel_truncation: r.truncation_bound / one_plus_r,
        })
    } else {
        let x = PI * PI / a;
        let root = (PI / a).sqrt();
        let dual = sum_series(1.0, 1, rel_tol, |k| 2.0 * (-x * f64::from(k * k)).exp())?;
        let dual_sq = sum_series(0.0, 1, rel_tol, |k| {
            let k2 = f64::from(k * k);
            k2 * (-x * k2).exp()
        })?;
        let theta = root * dual.value;
        let z = 0.5 * (theta - 1.0);
        // sum_{n>=1} n^2 q^{n^2} = -theta'(a)/2 differentiated through the modular form.
        let level_sq_sum = theta / (4.0 * a) - root * (x / a) * dual_sq.value;
        let mean = level_sq_sum / z;
        let ln_z = z.ln();
        Ok(LadderStats {
            beta_e1: a,
            ln_z,
            mean_level_sq: mean,
            entropy: ln_z + a * mean,
            terms_used: dual.terms_used.max(dual_sq.terms_used),
            rel_truncation: root * dual.truncation_bound / (2.0 * z),
        })
    }
}

/// Ground-level energy `E_1 = pi^2 / (2 l^2)` of a box of length `l`.
pub fn ground_energy(length: f64) -> f64 {
    PI * PI / (2.0 * length * length)
}

/// `Z = sum_n e^{-beta E_n}` and `sum_n E_n e^{-beta E_n}` for a box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSums {
    pub z: f64,
    pub energy_weighted: f64,
    pub terms_used: usize,
    pub truncation_bound: f64,
}

pub fn spectral_sums(length: f64, beta: f64, rel_tol: f64) -> Result<SpectralSums> {
    if !(length > 0.0) {
        return Err(Error::InvalidParameter {
            name: "length",
            value: length,
            reason: "must be positive",
        });
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must be positive",
        });
    }
    let e1 = ground_energy(length);
    let stats = ladder_stats(beta * e1, rel_tol)?;
    let z = stats.ln_z.exp();
    Ok(SpectralSums {
        z,
        energy_weighted: e1 * stats.mean_level_sq * z,
        terms_used: stats.terms_used,
        truncation_bound: stats.rel_truncation * z,
    })
}
