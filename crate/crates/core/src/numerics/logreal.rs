//! Signed reals stored as a sign and a double-double natural logarithm of the
//! magnitude. Covers magnitudes far outside the f64 range, e.g. `10^-20000`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

use super::dd::{Dd, DD_DIGITS};
use super::{NumericsError, Precision};

/// Below this log-ratio the smaller addend cannot change the larger one.
const NEGLIGIBLE_LOG_RATIO: f64 = -80.0;

#[derive(Clone, Copy, PartialEq)]
pub struct LogReal {
    sign: i8,
    log_mag: Dd,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        sign: 0,
        log_mag: Dd::ZERO,
    };
    pub const ONE: LogReal = LogReal {
        sign: 1,
        log_mag: Dd::ZERO,
    };

    pub fn from_f64(x: f64) -> LogReal {
        LogReal::from_dd(Dd::from_f64(x))
    }

    pub fn from_dd(x: Dd) -> LogReal {
        if x.hi == 0.0 {
            return LogReal::ZERO;
        }
        LogReal {
            sign: if x.hi < 0.0 { -1 } else { 1 },
            log_mag: x.abs().ln(),
        }
    }

    /// Positive value `e^ln`.
    pub fn from_ln(ln: Dd) -> LogReal {
        LogReal {
            sign: 1,
            log_mag: ln,
        }
    }

    /// Positive value `10^exponent`.
    pub fn pow10(exponent: f64) -> LogReal {
        LogReal::from_ln(Dd::LN10.mul_f64(exponent))
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Natural log of the magnitude; `None` for zero.
    pub fn ln_abs(self) -> Option<Dd> {
        (self.sign != 0).then_some(self.log_mag)
    }

    /// Natural log of the magnitude, `-inf` for zero.
    pub fn ln_or_neg_inf(self) -> Dd {
        self.ln_abs()
            .unwrap_or(Dd::from_f64(f64::NEG_INFINITY))
    }

    pub fn log10_abs(self) -> Option<f64> {
        self.ln_abs().map(|l| (l / Dd::LN10).to_f64())
    }

    pub fn to_dd(self) -> Dd {
        match self.sign {
            0 => Dd::ZERO,
            s => {
                let m = self.log_mag.exp();
                if s < 0 {
                    -m
                } else {
                    m
                }
            }
        }
    }

    /// Nearest f64; overflows to ±inf and underflows to 0.
    pub fn to_f64(self) -> f64 {
        self.to_dd().to_f64()
    }

    pub fn abs(self) -> LogReal {
        LogReal {
            sign: self.sign.abs(),
            log_mag: self.log_mag,
        }
    }

    pub fn recip(self) -> Result<LogReal, NumericsError> {
        if self.sign == 0 {
            return Err(NumericsError::Domain("reciprocal of zero".into()));
        }
        Ok(LogReal {
            sign: self.sign,
            log_mag: -self.log_mag,
        })
    }

    /// `self^p`; the base must be positive unless `p` is zero.
    pub fn powf(self, p: Dd) -> Result<LogReal, NumericsError> {
        if p.hi == 0.0 {
            return Ok(LogReal::ONE);
        }
        match self.sign {
            1 => Ok(LogReal::from_ln(self.log_mag * p)),
            0 if p.hi > 0.0 => Ok(LogReal::ZERO),
            0 => Err(NumericsError::Domain("negative power of zero".into())),
            _ => Err(NumericsError::Domain("real power of a negative value".into())),
        }
    }

    pub fn try_add(self, other: LogReal, prec: Precision) -> Result<LogReal, NumericsError> {
        if self.sign == 0 {
            return Ok(other);
        }
        if other.sign == 0 {
            return Ok(self);
        }
        let (big, small) = if self.log_mag >= other.log_mag {
            (self, other)
        } else {
            (other, self)
        };
        let d = small.log_mag - big.log_mag;
        if self.sign == other.sign {
            if d.hi < NEGLIGIBLE_LOG_RATIO {
                return Ok(big);
            }
            let bump = if d.hi == 0.0 && d.lo == 0.0 {
                Dd::LN2
            } else {
                d.exp().ln_1p()
            };
            return Ok(LogReal {
                sign: big.sign,
                log_mag: big.log_mag + bump,
            });
        }
        // opposite signs: |big| - |small|
        if d.hi == 0.0 && d.lo == 0.0 {
            return Ok(LogReal::ZERO);
        }
        if d.hi < NEGLIGIBLE_LOG_RATIO {
            return Ok(big);
        }
        let shrink = -d.expm1(); // 1 - e^d in (0, 1)
        let lost = lost_digits(big.log_mag, shrink);
        let budget = prec.cancellation_budget() as f64;
        if lost > budget {
            return Err(NumericsError::Cancellation {
                lost_digits: lost,
                budget,
            });
        }
        Ok(LogReal {
            sign: big.sign,
            log_mag: big.log_mag + shrink.ln(),
        })
    }

    pub fn try_sub(self, other: LogReal, prec: Precision) -> Result<LogReal, NumericsError> {
        self.try_add(-other, prec)
    }

    pub fn max(self, other: LogReal) -> LogReal {
        if self >= other {
            self
        } else {
            other
        }
    }
}

/// Decimal digits lost when the difference keeps a fraction `shrink` of the
/// larger magnitude whose log is `log_mag`.
fn lost_digits(log_mag: Dd, shrink: Dd) -> f64 {
    let log_scale = log_mag.hi.abs().max(1.0).log10();
    let cancel = -shrink.hi.log10();
    (log_scale + cancel).max(0.0)
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, b: LogReal) -> LogReal {
        let sign = self.sign * b.sign;
        if sign == 0 {
            return LogReal::ZERO;
        }
        LogReal {
            sign,
            log_mag: self.log_mag + b.log_mag,
        }
    }
}

impl Div for LogReal {
    type Output = LogReal;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, b: LogReal) -> LogReal {
        self * b.recip().expect("LogReal division by zero")
    }
}

impl Neg for LogReal {
    type Output = LogReal;
    fn neg(self) -> LogReal {
        LogReal {
            sign: -self.sign,
            log_mag: self.log_mag,
        }
    }
}

impl PartialOrd for LogReal {
    fn partial_cmp(&self, other: &LogReal) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.log_mag.partial_cmp(&other.log_mag),
                _ => other.log_mag.partial_cmp(&self.log_mag),
            },
            o => Some(o),
        }
    }
}

impl fmt::Debug for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "LogReal(0)"),
            s => write!(f, "LogReal({}e^{:?})", if s < 0 { "-" } else { "" }, self.log_mag),
        }
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log10_abs() {
            None => write!(f, "0"),
            Some(l10) => {
                let mut e = l10.floor();
                let mut m = 10f64.powf(l10 - e);
                if m >= 9.9999995 {
                    m /= 10.0;
                    e += 1.0;
                }
                let s = if self.sign < 0 { "-" } else { "" };
                write!(f, "{s}{m:.6}e{e}")
            }
        }
    }
}

/// Digits a `LogReal` can carry with the double-double backend.
pub const LOGREAL_DIGITS: u32 = DD_DIGITS;

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn rel(a: Dd, b: Dd) -> f64 {
        ((a - b) / b).to_f64().abs()
    }

    #[test]
    fn round_trip_through_log_domain() {
        for &x in &[1e-300, -3.5e-7, 0.1, 1.0, 7.25, -1e12, 1.7e308] {
            let back = LogReal::from_f64(x).to_dd();
            assert!(rel(back, Dd::from_f64(x)) <= 1e-25, "x = {x}");
            assert_eq!(LogReal::from_f64(x).to_f64(), x);
        }
        assert!(LogReal::from_f64(0.0).is_zero());
    }

    #[test]
    fn tiny_addend_changes_nothing() {
        let a = LogReal::from_ln(Dd::from_f64(-23000.0));
        let b = LogReal::from_ln(Dd::from_f64(-23100.0));
        let s = a.try_add(b, p()).unwrap();
        assert_eq!(s.ln_abs().unwrap(), a.ln_abs().unwrap());
    }

    #[test]
    fn equal_terms_add_ln2() {
        let a = LogReal::from_ln(Dd::new(-23025.85, 1e-13));
        let s = a.try_add(a, p()).unwrap();
        let diff = s.ln_abs().unwrap() - a.ln_abs().unwrap() - Dd::LN2;
        // exact up to double-double rounding at this magnitude
        assert!(diff.to_f64().abs() < 1e-26);
    }

    #[test]
    fn subtraction_of_close_values_surfaces_cancellation() {
        let a = LogReal::pow10(-10000.0);
        let b = LogReal::from_ln(a.ln_abs().unwrap() + Dd::from_f64(1e-20));
        assert!(matches!(
            b.try_sub(a, p()),
            Err(NumericsError::Cancellation { .. })
        ));
        // a moderate gap is fine
        let c = LogReal::from_ln(a.ln_abs().unwrap() + Dd::from_f64(1e-3));
        let d = c.try_sub(a, p()).unwrap();
        // c - a = a (e^{1e-3} - 1)
        let expect = a.ln_abs().unwrap() + Dd::from_f64(1e-3).expm1().ln();
        assert!((d.ln_abs().unwrap() - expect).to_f64().abs() < 1e-22);
    }

    #[test]
    fn subtraction_matches_f64() {
        let a = LogReal::from_f64(5.0);
        let b = LogReal::from_f64(3.0);
        assert!((a.try_sub(b, p()).unwrap().to_f64() - 2.0).abs() < 1e-15);
        assert!((b.try_sub(a, p()).unwrap().to_f64() + 2.0).abs() < 1e-15);
        assert!(a.try_sub(a, p()).unwrap().is_zero());
    }

    #[test]
    fn ordering_respects_sign() {
        let a = LogReal::from_f64(-2.0);
        let b = LogReal::from_f64(-1.0);
        let c = LogReal::from_f64(1e-300);
        assert!(a < b && b < LogReal::ZERO && LogReal::ZERO < c);
    }

    #[test]
    fn pow_of_negative_is_an_error() {
        assert!(LogReal::from_f64(-2.0).powf(Dd::from_f64(0.5)).is_err());
        assert!(LogReal::ZERO.powf(Dd::from_f64(-1.0)).is_err());
    }

    #[test]
    fn display_uses_scientific_notation() {
        assert_eq!(LogReal::pow10(-10000.0).to_string(), "1.000000e-10000");
    }
}
