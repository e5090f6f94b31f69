//! Numeric kernel shared by the rest of the crate.

mod dd;
mod gamma;
mod logreal;
mod ode;
mod quad;
mod roots;

pub use dd::{Dd, DD_DIGITS};
pub use gamma::log_gamma;
pub use logreal::{LogReal, LOGREAL_DIGITS};
pub use ode::{ode_integrate, Ode, Trajectory};
pub use quad::quad;
pub use roots::solve_monotone;

use thiserror::Error;

/// Environment variable that overrides the default working precision.
pub const PRECISION_ENV: &str = "SPIRALDIM_PRECISION";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("no convergence after {evals} evaluations (error estimate {estimate:e})")]
    NonConvergence { evals: usize, estimate: f64 },
    #[error("root not bracketed: g({lo}) = {g_lo:e}, g({hi}) = {g_hi:e}")]
    BadBracket {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },
    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cancellation lost {lost_digits:.1} digits, budget is {budget:.1}")]
    Cancellation { lost_digits: f64, budget: f64 },
    #[error("{requested} digits requested, the log-domain backend carries at most {max}")]
    PrecisionUnavailable { requested: u32, max: u32 },
}

/// Accuracy request for the iterative routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_evals: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64, max_evals: usize) -> Result<Tolerance, NumericsError> {
        if !(abs > 0.0 && rel > 0.0) || max_evals == 0 {
            return Err(NumericsError::Domain(format!(
                "tolerance needs abs, rel > 0 and max_evals >= 1 (got {abs}, {rel}, {max_evals})"
            )));
        }
        Ok(Tolerance { abs, rel, max_evals })
    }

    /// Same abs and rel bound, generous evaluation budget.
    pub fn uniform(eps: f64) -> Tolerance {
        Tolerance {
            abs: eps,
            rel: eps,
            max_evals: 2_000_000,
        }
    }

    pub fn with_max_evals(self, max_evals: usize) -> Tolerance {
        Tolerance { max_evals, ..self }
    }

    pub(crate) fn accepts(&self, err: f64, value: f64) -> bool {
        err <= self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Tolerance {
        Tolerance::uniform(1e-12)
    }
}

/// Working precision of the log-domain arithmetic, in significant digits.
///
/// Subtractions may lose at most `digits - 12` digits to cancellation before
/// they are reported as errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 30;
    const RETAINED_DIGITS: u32 = 12;

    pub fn new(digits: u32) -> Result<Precision, NumericsError> {
        if digits > LOGREAL_DIGITS {
            return Err(NumericsError::PrecisionUnavailable {
                requested: digits,
                max: LOGREAL_DIGITS,
            });
        }
        if digits < 16 {
            return Err(NumericsError::Domain(format!(
                "precision of {digits} digits is below double precision"
            )));
        }
        Ok(Precision { digits })
    }

    /// Default precision, overridden by `SPIRALDIM_PRECISION` when set.
    pub fn from_env() -> Result<Precision, NumericsError> {
        match std::env::var(PRECISION_ENV) {
            Ok(v) => {
                let digits = v.trim().parse::<u32>().map_err(|_| {
                    NumericsError::Domain(format!("{PRECISION_ENV}={v} is not a digit count"))
                })?;
                Precision::new(digits)
            }
            Err(_) => Ok(Precision::default()),
        }
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    pub fn cancellation_budget(self) -> u32 {
        self.digits - Self::RETAINED_DIGITS
    }
}

impl Default for Precision {
    fn default() -> Precision {
        Precision {
            digits: Self::DEFAULT_DIGITS,
        }
    }
}
