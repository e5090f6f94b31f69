//! Double-double reals: an unevaluated sum `hi + lo` carrying roughly 32
//! significant decimal digits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Decimal digits a [`Dd`] value reliably carries.
pub const DD_DIGITS: u32 = 31;

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const LN2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.3190468138462996e-17,
    };
    pub const LN10: Dd = Dd {
        hi: std::f64::consts::LN_10,
        lo: -2.1707562233822494e-16,
    };
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };
    pub const TAU: Dd = Dd {
        hi: std::f64::consts::TAU,
        lo: 2.4492935982947064e-16,
    };

    pub fn new(hi: f64, lo: f64) -> Dd {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        Dd::new(p, e)
    }

    pub fn ldexp(self, k: i32) -> Dd {
        // two factors so that 2^k itself never overflows
        let s1 = 2f64.powi(k / 2);
        let s2 = 2f64.powi(k - k / 2);
        Dd {
            hi: self.hi * s1 * s2,
            lo: self.lo * s1 * s2,
        }
    }

    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn floor(self) -> Dd {
        let hi = self.hi.floor();
        if hi == self.hi {
            Dd::new(hi, self.lo.floor())
        } else {
            Dd { hi, lo: 0.0 }
        }
    }

    pub fn ceil(self) -> Dd {
        let hi = self.hi.ceil();
        if hi == self.hi {
            Dd::new(hi, self.lo.ceil())
        } else {
            Dd { hi, lo: 0.0 }
        }
    }

    /// Unit in the last place, relative to the magnitude of `self`.
    pub fn ulp(self) -> f64 {
        self.hi.abs() * 1e-32
    }

    /// `e^x - 1` for |x| small, by Taylor series.
    fn expm1_small(x: Dd) -> Dd {
        let mut term = x;
        let mut sum = x;
        let mut k = 2.0;
        loop {
            term = term * x / Dd::from_f64(k);
            sum = sum + term;
            if term.hi.abs() <= sum.hi.abs() * 1e-34 || k > 60.0 {
                break;
            }
            k += 1.0;
        }
        sum
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.78 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / Dd::LN2.hi).round();
        let r = self - Dd::LN2.mul_f64(k);
        // e^r = (e^{r/512})^512, tracked as expm1 to keep the low bits
        let mut s = Dd::expm1_small(r.ldexp(-9));
        for _ in 0..9 {
            s = s.ldexp(1) + s.sqr();
        }
        (s + Dd::ONE).ldexp(k as i32)
    }

    pub fn expm1(self) -> Dd {
        if self.hi.abs() < 0.5 {
            Dd::expm1_small(self)
        } else {
            self.exp() - Dd::ONE
        }
    }

    /// Natural logarithm. Returns NaN for non-positive input.
    pub fn ln(self) -> Dd {
        if !(self.hi > 0.0) {
            return Dd::from_f64(f64::NAN);
        }
        if self.hi.is_infinite() {
            return self;
        }
        // x = m 2^e with m near 1 keeps the Newton step away from subnormals
        let e = self.hi.log2().floor() as i32;
        let m = self.ldexp(-e);
        let mut y = Dd::from_f64(m.hi.ln());
        for _ in 0..2 {
            // Newton on e^y = m
            y = y + m * (-y).exp() - Dd::ONE;
        }
        y + Dd::LN2.mul_f64(e as f64)
    }

    /// `ln(1 + x)` for x > -1, accurate when x is tiny.
    pub fn ln_1p(self) -> Dd {
        if self.hi.abs() < 1e-3 {
            // Newton on expm1(y) = x from the series guess
            let mut y = Dd::from_f64(self.hi.ln_1p());
            for _ in 0..2 {
                let em = y.expm1();
                y = y - (em - self) / (em + Dd::ONE);
            }
            y
        } else {
            (Dd::ONE + self).ln()
        }
    }

    pub fn powf(self, p: Dd) -> Dd {
        (self.ln() * p).exp()
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (s, e) = quick_two_sum(s, e + f);
        Dd { hi: s, lo: e }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        Dd::new(p, e)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        Dd::new(q1, q2) + Dd::from_f64(q3)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}
