//! Liénard slow-fast systems at the singular limit: slow divergence
//! integrals, the entry-exit orbit on the section `x = 0`, the chirp of fast
//! fibres through it, and their box dimensions.

mod chirp;
mod integrals;
mod model;
mod orbit;

pub use chirp::{build_chirp, chirp_dimension, spiral_dimension, Chirp, Interval};
pub use integrals::{asymptotic_ratio, slow_div_between, slow_div_difference, slow_div_integral, Side};
pub use model::{LienardModel, ModelSpec};
pub use orbit::{generate_orbit, orbit_dimension, ExponentFit, OrbitSequence};

use serde::Serialize;
use thiserror::Error;

use crate::boxcount::{BoxCountError, GridOptions};
use crate::catalog::{dims_slowfast, CatalogError, DimensionEstimate, SlowFastDims};
use crate::numerics::NumericsError;
use crate::spirals::Orientation;

#[derive(Debug, Error)]
pub enum SlowFastError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no nonzero even coefficient: the contact point has infinite codimension")]
    InfiniteCodimension,
    #[error("F vanishes or changes sign at x = {x}; shrink x_domain")]
    FZero { x: f64 },
    #[error("level {y} lies outside the validity range (0, {limit}]")]
    OutsideDomain { y: f64, limit: f64 },
    #[error("J_- - J_+ has no reliable sign at y = {y}")]
    SignTest { y: f64 },
    #[error("could not bracket level {level}: {source}")]
    BracketFailure {
        level: usize,
        #[source]
        source: Box<SlowFastError>,
    },
    #[error("model file: {0}")]
    Parse(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    BoxCount(#[from] BoxCountError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Level at which the leading-order ratio is reported.
pub const RATIO_LEVEL: f64 = 1e-4;

/// Everything measured on one orbit, next to the predicted values.
#[derive(Debug, Clone, Serialize)]
pub struct SlowFastAnalysis {
    pub n: u32,
    pub codimension: u32,
    pub orientation: Orientation,
    pub y0: f64,
    pub count: usize,
    pub asymptotic_ratio: f64,
    pub level_exponent: ExponentFit,
    pub gap_exponent: ExponentFit,
    pub orbit_dimension: DimensionEstimate,
    pub chirp_dimension: DimensionEstimate,
    pub spiral_dimension: DimensionEstimate,
    pub predicted: SlowFastDims,
}

/// Generate the orbit of `spec` and measure it. The exponent fits use
/// `l` in `[count/10, count]`.
pub fn analyze(spec: &ModelSpec, opts: &GridOptions) -> Result<(OrbitSequence, SlowFastAnalysis), SlowFastError> {
    let model = spec.model()?;
    let k = model.codimension()?;
    let orbit = generate_orbit(&model, spec.y0, spec.count)?;
    let range = (spec.count / 10, spec.count);
    let ratio_level = RATIO_LEVEL.min(model.max_level());
    let analysis = SlowFastAnalysis {
        n: model.n(),
        codimension: k,
        orientation: orbit.orientation,
        y0: spec.y0,
        count: spec.count,
        asymptotic_ratio: asymptotic_ratio(&model, ratio_level)?,
        level_exponent: orbit.level_exponent(range)?,
        gap_exponent: orbit.gap_exponent(range)?,
        orbit_dimension: orbit_dimension(&orbit)?,
        chirp_dimension: chirp_dimension(&orbit, opts)?,
        spiral_dimension: spiral_dimension(&orbit, opts)?,
        predicted: dims_slowfast(model.n(), k)?,
    };
    Ok((orbit, analysis))
}
