use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SlowFastError;

/// Slow forcing `F(x) = -x^(2n-1) + sum f_i x^i` of a Liénard slow-fast
/// system at its singular limit, valid on `|x| <= x_domain`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LienardModel {
    n: u32,
    coeffs: BTreeMap<u32, f64>,
    x_domain: f64,
}

/// Points per side used to check the sign pattern of `F` on the domain.
const SIGN_SAMPLES: usize = 4096;

impl LienardModel {
    pub fn new(
        n: u32,
        coeffs: impl IntoIterator<Item = (u32, f64)>,
        x_domain: f64,
    ) -> Result<LienardModel, SlowFastError> {
        if n == 0 {
            return Err(SlowFastError::Domain("n must be at least 1".into()));
        }
        if !(x_domain > 0.0 && x_domain.is_finite()) {
            return Err(SlowFastError::Domain(format!("x_domain must be positive, got {x_domain}")));
        }
        let mut map = BTreeMap::new();
        for (deg, v) in coeffs {
            if deg < 2 * n {
                return Err(SlowFastError::Domain(format!(
                    "coefficient of degree {deg} is below 2n = {}; the leading term -x^{} is fixed",
                    2 * n,
                    2 * n - 1
                )));
            }
            if !v.is_finite() {
                return Err(SlowFastError::Domain(format!("coefficient of degree {deg} is not finite")));
            }
            if v != 0.0 {
                *map.entry(deg).or_insert(0.0) += v;
            }
        }
        map.retain(|_, v| *v != 0.0);
        let model = LienardModel {
            n,
            coeffs: map,
            x_domain,
        };
        model.codimension()?;
        for i in 1..=SIGN_SAMPLES {
            let x = x_domain * i as f64 / SIGN_SAMPLES as f64;
            for s in [x, -x] {
                if !(model.reduced(s) > 0.0) {
                    return Err(SlowFastError::FZero { x: s });
                }
            }
        }
        Ok(model)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn x_domain(&self) -> f64 {
        self.x_domain
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, f64> {
        &self.coeffs
    }

    /// `f_i`, zero when absent.
    pub fn coeff(&self, degree: u32) -> f64 {
        self.coeffs.get(&degree).copied().unwrap_or(0.0)
    }

    /// Smallest `k >= n` with `f_2k != 0`.
    pub fn codimension(&self) -> Result<u32, SlowFastError> {
        self.coeffs
            .keys()
            .find(|d| *d % 2 == 0)
            .map(|d| d / 2)
            .ok_or(SlowFastError::InfiniteCodimension)
    }

    /// `F(x)`.
    pub fn forcing(&self, x: f64) -> f64 {
        -x.powi(2 * self.n as i32 - 1) + self.coeffs.iter().map(|(&d, &f)| f * x.powi(d as i32)).sum::<f64>()
    }

    /// `-F(x) / x^(2n-1) = 1 - sum f_i x^(i-2n+1)`, positive on the domain.
    pub fn reduced(&self, x: f64) -> f64 {
        let lead = 2 * self.n as i32 - 1;
        1.0 - self.coeffs.iter().map(|(&d, &f)| f * x.powi(d as i32 - lead)).sum::<f64>()
    }

    /// `reduced(-x) - reduced(x)`, formed from the even-degree terms only so
    /// the cancellation between the two sides never happens numerically.
    pub fn reduced_odd_gap(&self, x: f64) -> f64 {
        let lead = 2 * self.n as i32 - 1;
        2.0 * self
            .coeffs
            .iter()
            .filter(|(d, _)| *d % 2 == 0)
            .map(|(&d, &f)| f * x.powi(d as i32 - lead))
            .sum::<f64>()
    }

    /// Largest level whose fast fibre stays inside the domain.
    pub fn max_level(&self) -> f64 {
        self.x_domain.powi(2 * self.n as i32)
    }
}

/// A slow-fast run read from a model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub n: u32,
    /// `(degree, value)` pairs.
    pub coeffs: Vec<(u32, f64)>,
    #[serde(default = "default_x_domain")]
    pub x_domain: f64,
    #[serde(default = "default_y0")]
    pub y0: f64,
    #[serde(default = "default_count")]
    pub count: usize,
}

fn default_x_domain() -> f64 {
    0.5
}
fn default_y0() -> f64 {
    0.1
}
fn default_count() -> usize {
    10_000
}

impl ModelSpec {
    /// JSON when the text starts with `{`, otherwise `key = value` lines
    /// with `#` comments. Coefficients are written `coeffs = 2:1, 4:-0.5`.
    pub fn parse(text: &str) -> Result<ModelSpec, SlowFastError> {
        if text.trim_start().starts_with('{') {
            return Ok(serde_json::from_str(text)?);
        }
        let mut n = None;
        let mut coeffs = None;
        let mut spec = ModelSpec {
            n: 0,
            coeffs: Vec::new(),
            x_domain: default_x_domain(),
            y0: default_y0(),
            count: default_count(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| SlowFastError::Parse(format!("line {}: {what}: {raw:?}", i + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let value = value.trim();
            match key.trim() {
                "n" => n = Some(value.parse().map_err(|_| bad("n must be a positive integer"))?),
                "coeffs" => {
                    let mut list = Vec::new();
                    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (d, v) = item.split_once(':').ok_or_else(|| bad("coefficients are degree:value"))?;
                        list.push((
                            d.trim().parse().map_err(|_| bad("bad degree"))?,
                            v.trim().parse().map_err(|_| bad("bad coefficient"))?,
                        ));
                    }
                    coeffs = Some(list);
                }
                "x_domain" => spec.x_domain = value.parse().map_err(|_| bad("bad x_domain"))?,
                "y0" => spec.y0 = value.parse().map_err(|_| bad("bad y0"))?,
                "count" => spec.count = value.parse().map_err(|_| bad("bad count"))?,
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        spec.n = n.ok_or_else(|| SlowFastError::Parse("missing n".into()))?;
        spec.coeffs = coeffs.ok_or_else(|| SlowFastError::Parse("missing coeffs".into()))?;
        Ok(spec)
    }

    pub fn model(&self) -> Result<LienardModel, SlowFastError> {
        LienardModel::new(self.n, self.coeffs.iter().copied(), self.x_domain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codimension_scan() {
        let m = |n, c: &[(u32, f64)]| LienardModel::new(n, c.iter().copied(), 0.5);
        assert_eq!(m(1, &[(2, 1.0)]).unwrap().codimension().unwrap(), 1);
        assert_eq!(m(1, &[(3, 1.0), (4, 1.0)]).unwrap().codimension().unwrap(), 2);
        assert_eq!(m(2, &[(6, 1.0)]).unwrap().codimension().unwrap(), 3);
        assert!(matches!(m(1, &[(3, 1.0)]), Err(SlowFastError::InfiniteCodimension)));
        assert!(matches!(m(1, &[(2, 0.0), (5, 1.0)]), Err(SlowFastError::InfiniteCodimension)));
    }

    #[test]
    fn rejects_low_degrees_and_sign_changes() {
        assert!(LienardModel::new(2, [(3, 1.0), (4, 1.0)], 0.5).is_err());
        // -x + 4x^2 vanishes at x = 1/4
        assert!(matches!(LienardModel::new(1, [(2, 4.0)], 0.5), Err(SlowFastError::FZero { .. })));
        assert!(LienardModel::new(1, [(2, 4.0)], 0.2).is_ok());
    }

    #[test]
    fn reduced_forms() {
        let m = LienardModel::new(1, [(2, 1.0), (3, 0.5), (4, 2.0)], 0.3).unwrap();
        for x in [-0.3, -0.1, 0.05, 0.25] {
            assert!((m.reduced(x) * -x - m.forcing(x)).abs() < 1e-15);
            let gap = m.reduced(-x) - m.reduced(x);
            assert!((m.reduced_odd_gap(x) - gap).abs() < 1e-14);
        }
    }

    #[test]
    fn spec_formats() {
        let kv = "# generic contact point\nn = 1\ncoeffs = 2:1.0, 3:0.25\ny0 = 0.05\ncount=500\n";
        let a = ModelSpec::parse(kv).unwrap();
        assert_eq!((a.n, a.coeffs.clone(), a.y0, a.count, a.x_domain), (1, vec![(2, 1.0), (3, 0.25)], 0.05, 500, 0.5));
        let js = r#"{"n": 1, "coeffs": [[2, 1.0], [3, 0.25]], "y0": 0.05, "count": 500}"#;
        assert_eq!(ModelSpec::parse(js).unwrap(), a);
        assert!(ModelSpec::parse("n = 1\n").is_err());
        assert!(ModelSpec::parse("n = 1\ncoeffs = 2:1\nfoo = 3\n").is_err());
    }
}
