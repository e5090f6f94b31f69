//! Static SVG 1.1 plots of the CSV files written by the other subcommands.

use std::fmt::Write as _;
use std::io::Read;

use clap::ValueEnum;
use serde::Serialize;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotKind {
    /// Polyline through the `x`, `y` columns.
    Spiral,
    /// One horizontal segment per `alpha`, `omega`, `level` row.
    Chirp,
    /// `log(count)` against `log(1/eps)` with the least-squares line.
    Loglog,
}

impl PlotKind {
    fn name(self) -> &'static str {
        match self {
            PlotKind::Spiral => "spiral",
            PlotKind::Chirp => "chirp",
            PlotKind::Loglog => "loglog",
        }
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            PlotKind::Spiral => &["x", "y"],
            PlotKind::Chirp => &["alpha", "omega", "level"],
            PlotKind::Loglog => &["eps", "count"],
        }
    }
}

const SIZE: f64 = 640.0;
const MARGIN: f64 = 48.0;
/// Longer polylines are thinned to every n-th point.
const MAX_VERTICES: usize = 200_000;

/// Linear map of a data box onto the drawing area, `y` pointing up.
struct Frame {
    lo: [f64; 2],
    scale: [f64; 2],
}

impl Frame {
    fn new(lo: [f64; 2], hi: [f64; 2], equal_aspect: bool) -> Frame {
        let inner = SIZE - 2.0 * MARGIN;
        let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
        let mut scale = [inner / span(lo[0], hi[0]), inner / span(lo[1], hi[1])];
        let mut lo = lo;
        if equal_aspect {
            let s = scale[0].min(scale[1]);
            for a in 0..2 {
                // centre the shorter axis
                lo[a] -= (inner / s - span(lo[a], hi[a])) / 2.0;
            }
            scale = [s, s];
        }
        Frame { lo, scale }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (
            MARGIN + (p[0] - self.lo[0]) * self.scale[0],
            SIZE - MARGIN - (p[1] - self.lo[1]) * self.scale[1],
        )
    }
}

fn read_columns(input: impl Read, kind: PlotKind) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers()?.clone();
    let wanted = kind.columns();
    let idx = wanted
        .iter()
        .map(|name| {
            headers.iter().position(|h| h == *name).ok_or_else(|| {
                CliError::Plot(format!(
                    "a {} plot needs columns {wanted:?}, found {:?}",
                    kind.name(),
                    headers.iter().collect::<Vec<_>>()
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = idx
            .iter()
            .map(|&i| {
                rec.get(i)
                    .and_then(|s| s.parse::<f64>().ok())
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::Plot(format!("data row {} is not numeric", line + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Plot("no data rows".into()));
    }
    Ok(rows)
}

fn bounds(points: impl Iterator<Item = [f64; 2]>) -> ([f64; 2], [f64; 2]) {
    points.fold(([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]), |(lo, hi), p| {
        ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])])
    })
}

fn document(title: &str, x_label: &str, y_label: &str, body: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let inner = SIZE - 2.0 * MARGIN;
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="#999" stroke-width="1"/>"##
    );
    s.push_str(body);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">{x_label}</text>"#,
        SIZE / 2.0,
        SIZE - 14.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 16 {0})">{y_label}</text>"#,
        SIZE / 2.0
    );
    s.push_str("</svg>\n");
    s
}

fn polyline(frame: &Frame, points: &[[f64; 2]], stroke: &str) -> String {
    let stride = points.len().div_ceil(MAX_VERTICES).max(1);
    let mut s = String::from(r#"<polyline fill="none" stroke=""#);
    s.push_str(stroke);
    s.push_str(r#"" stroke-width="0.6" points=""#);
    let mut picked: Vec<usize> = (0..points.len()).step_by(stride).collect();
    if points.len() > 1 && picked.last() != Some(&(points.len() - 1)) {
        picked.push(points.len() - 1);
    }
    for (i, j) in picked.into_iter().enumerate() {
        let (x, y) = frame.map(points[j]);
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:.2},{y:.2}");
    }
    s.push_str("\"/>\n");
    s
}

fn render_spiral(rows: &[Vec<f64>]) -> String {
    let pts: Vec<[f64; 2]> = rows.iter().map(|r| [r[0], r[1]]).collect();
    let (lo, hi) = bounds(pts.iter().copied());
    let frame = Frame::new(lo, hi, true);
    document("spiral", "x", "y", &polyline(&frame, &pts, "#1f4e9c"))
}

fn render_chirp(rows: &[Vec<f64>]) -> String {
    let (lo, hi) = bounds(rows.iter().flat_map(|r| [[r[0], r[2]], [r[1], r[2]]]).chain([[0.0, 0.0]]));
    let frame = Frame::new(lo, hi, false);
    let mut body = String::new();
    for r in rows {
        let (x0, y) = frame.map([r[0], r[2]]);
        let (x1, _) = frame.map([r[1], r[2]]);
        let _ = writeln!(
            body,
            r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#1f4e9c" stroke-width="0.6"/>"##
        );
    }
    document("chirp", "x", "y", &body)
}

/// Least-squares slope and intercept.
fn least_squares(pts: &[[f64; 2]]) -> Option<(f64, f64)> {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
    let my = pts.iter().map(|p| p[1]).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p[0] - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p[0] - mx) * (p[1] - my)).sum();
    (sxx > 0.0).then(|| (sxy / sxx, my - sxy / sxx * mx))
}

fn render_loglog(rows: &[Vec<f64>]) -> Result<String, CliError> {
    if rows.iter().any(|r| r[0] <= 0.0 || r[1] < 1.0) {
        return Err(CliError::Plot("log-log plots need eps > 0 and count >= 1".into()));
    }
    let pts: Vec<[f64; 2]> = rows.iter().map(|r| [-r[0].log10(), r[1].log10()]).collect();
    let (lo, hi) = bounds(pts.iter().copied());
    let frame = Frame::new(lo, hi, false);
    let mut body = String::new();
    if let Some((slope, icept)) = least_squares(&pts) {
        let (x0, y0) = frame.map([lo[0], icept + slope * lo[0]]);
        let (x1, y1) = frame.map([hi[0], icept + slope * hi[0]]);
        let _ = writeln!(
            body,
            r##"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#c0392b" stroke-width="1.2"/>"##
        );
        let _ = writeln!(
            body,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13">slope {slope:.4}</text>"#,
            MARGIN + 8.0,
            MARGIN + 18.0
        );
    }
    for p in &pts {
        let (x, y) = frame.map(*p);
        let _ = writeln!(body, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#1f4e9c"/>"##);
    }
    Ok(document("box counts", "log10(1/eps)", "log10(count)", &body))
}

/// Render `input` as a standalone SVG document.
pub fn render(input: impl Read, kind: PlotKind) -> Result<String, CliError> {
    let rows = read_columns(input, kind)?;
    match kind {
        PlotKind::Spiral => Ok(render_spiral(&rows)),
        PlotKind::Chirp => Ok(render_chirp(&rows)),
        PlotKind::Loglog => render_loglog(&rows),
    }
}
