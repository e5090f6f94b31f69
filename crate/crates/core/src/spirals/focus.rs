use serde::{Deserialize, Serialize};

use super::SpiralError;

/// Sign of the nonlinear term: `Stable` is the minus sign, `Unstable` the plus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Stable,
    Unstable,
}

impl Orientation {
    /// Sign multiplying the nonlinear term of the field.
    pub fn field_sign(self) -> f64 {
        match self {
            Orientation::Stable => -1.0,
            Orientation::Unstable => 1.0,
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = SpiralError;
    fn from_str(s: &str) -> Result<Self, SpiralError> {
        match s {
            "stable" | "-" => Ok(Orientation::Stable),
            "unstable" | "+" => Ok(Orientation::Unstable),
            _ => Err(SpiralError::Domain(format!("unknown orientation {s:?}"))),
        }
    }
}

/// Exponents of a degenerate focus. `m` and `n` must be odd; even values give
/// a center, not a focus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FocusParams {
    m: u32,
    n: u32,
    k: u32,
    orientation: Orientation,
}

impl FocusParams {
    pub fn new(m: u32, n: u32, k: u32, orientation: Orientation) -> Result<Self, SpiralError> {
        for (name, v) in [("m", m), ("n", n)] {
            if v == 0 {
                return Err(SpiralError::Domain(format!("{name} must be at least 1")));
            }
            if v % 2 == 0 {
                return Err(SpiralError::EvenExponent { name, value: v });
            }
        }
        Ok(FocusParams {
            m,
            n,
            k,
            orientation,
        })
    }

    /// The `(n, n)` focus.
    pub fn nn(n: u32, k: u32, orientation: Orientation) -> Result<Self, SpiralError> {
        FocusParams::new(n, n, k, orientation)
    }

    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
    pub fn is_nn(&self) -> bool {
        self.m == self.n
    }
}

/// Right-hand side of the planar focus system. For `m == n` this is the
/// normalised `(n, n)` system, otherwise the general `(m, n)` one.
pub fn field2d(point: [f64; 2], params: &FocusParams) -> [f64; 2] {
    let [x, y] = point;
    let s = params.orientation.field_sign();
    let (m, n, k) = (params.m as i32, params.n as i32, params.k as i32);
    if m == n {
        let energy = (x.powi(2 * n) + y.powi(2 * n)).powi(k);
        [
            -y.powi(2 * n - 1) + s * x.powi(n) * y.powi(n - 1) * energy,
            x.powi(2 * n - 1) + s * x.powi(n - 1) * y.powi(n) * energy,
        ]
    } else {
        let energy = (x.powi(2 * m) + y.powi(2 * n)).powi(k);
        let (mf, nf) = (m as f64, n as f64);
        [
            -nf * y.powi(2 * n - 1) + s * nf * x.powi(m) * y.powi(n - 1) * energy,
            mf * x.powi(2 * m - 1) + s * mf * x.powi(m - 1) * y.powi(n) * energy,
        ]
    }
}

/// Coefficients of the radial Bernoulli equation `r' + p r = q r^(2nk+1)` of
/// the stable `(n, n)` system in standard polar coordinates.
pub fn pq_coeffs(phi: f64, n: u32, k: u32) -> (f64, f64) {
    let (s, c) = phi.sin_cos();
    let n = n as i32;
    let w = s.powi(2 * n) + c.powi(2 * n);
    let p = (s.powi(2 * n - 1) * c - c.powi(2 * n - 1) * s) / w;
    let q = -s.powi(n - 1) * c.powi(n - 1) * w.powi(k as i32 - 1);
    (p, q)
}

/// `sin^2n + cos^2n`, bounded below by `2^(1-n)`.
pub fn trig_weight(phi: f64, n: u32) -> f64 {
    let (s, c) = phi.sin_cos();
    s.powi(2 * n as i32) + c.powi(2 * n as i32)
}
