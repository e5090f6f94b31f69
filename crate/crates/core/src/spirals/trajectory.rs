use std::io::Write;

use serde::{Deserialize, Serialize};

use super::SpiralError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Cartesian2d,
    Polar,
    Cartesian3d,
}

impl Frame {
    fn columns(self) -> &'static [&'static str] {
        match self {
            Frame::Cartesian2d => &["t_or_phi", "x", "y"],
            Frame::Polar => &["t_or_phi", "phi", "r"],
            Frame::Cartesian3d => &["t_or_phi", "x", "y", "z"],
        }
    }

    pub fn dim(self) -> usize {
        self.columns().len() - 1
    }
}

/// Points along a trajectory, keyed by a strictly monotone parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    frame: Frame,
    points: Vec<(f64, Vec<f64>)>,
}

impl TrajectorySample {
    pub fn new(frame: Frame, points: Vec<(f64, Vec<f64>)>) -> Result<Self, SpiralError> {
        let dim = frame.dim();
        for (i, (t, p)) in points.iter().enumerate() {
            if p.len() != dim || !t.is_finite() || p.iter().any(|v| !v.is_finite()) {
                return Err(SpiralError::Domain(format!("point {i} is malformed or not finite")));
            }
        }
        let increasing = points.windows(2).all(|w| w[1].0 > w[0].0);
        let decreasing = points.windows(2).all(|w| w[1].0 < w[0].0);
        if !(increasing || decreasing) {
            return Err(SpiralError::Domain("sample parameter is not strictly monotone".into()));
        }
        Ok(TrajectorySample { frame, points })
    }

    /// Evaluate `f` at each parameter value, dropping values where it fails
    /// with [`SpiralError::OutsideDomain`].
    pub fn from_fn<F>(frame: Frame, params: impl IntoIterator<Item = f64>, mut f: F) -> Result<Self, SpiralError>
    where
        F: FnMut(f64) -> Result<Vec<f64>, SpiralError>,
    {
        let mut points = Vec::new();
        for t in params {
            match f(t) {
                Ok(p) => points.push((t, p)),
                Err(SpiralError::OutsideDomain { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        TrajectorySample::new(frame, points)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn points(&self) -> &[(f64, Vec<f64>)] {
        &self.points
    }

    /// Write as CSV. `header` becomes a leading `# ...` line recording the
    /// model parameters.
    pub fn write_csv<W: Write>(&self, mut out: W, header: &str) -> Result<(), SpiralError> {
        writeln!(out, "# {header}")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.frame.columns())?;
        for (t, p) in &self.points {
            let mut row = vec![format!("{t:.17e}")];
            row.extend(p.iter().map(|v| format!("{v:.17e}")));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_monotone_parameter() {
        let pts = vec![(0.0, vec![1.0, 0.0]), (1.0, vec![0.0, 1.0]), (0.5, vec![0.0, 0.0])];
        assert!(TrajectorySample::new(Frame::Cartesian2d, pts).is_err());
        let bad = vec![(0.0, vec![1.0])];
        assert!(TrajectorySample::new(Frame::Cartesian2d, bad).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let pts = vec![(0.0, vec![1.0, 2.0, 3.0]), (0.5, vec![-1.0, 1e-300, 4.0])];
        let s = TrajectorySample::new(Frame::Cartesian3d, pts.clone()).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf, "p0=0.5 q0=1").unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# p0=0.5 q0=1"));
        assert_eq!(lines.next(), Some("t_or_phi,x,y,z"));
        let back: Vec<Vec<f64>> = lines
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(back[1], vec![0.5, -1.0, 1e-300, 4.0]);
    }
}
