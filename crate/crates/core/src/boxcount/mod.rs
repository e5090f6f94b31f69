//! Grid box counting: occupied-cell counts of point clouds and curves over a
//! range of box sizes, and log-log slope fits.

mod cells;
mod cover;
mod curves;
mod fit;
mod walk;

pub use cells::{count_boxes, count_boxes_median, CellGrid, GridOptions, MemoryBudget, PointCloud};
pub use cover::{cover_counts, turn_merge_parameter, Nucleus, PlanarCurve};
pub use curves::{ChirpCurve, EllipticalProjection, MnSpiralCurve, NnSpiralCurve, PowerSpiral, ProjectionPlane};
pub use fit::{default_window, fit_dimension, geometric_eps, CountSeries};
pub use walk::{sample_adaptive, walk_adaptive};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoxCountError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{cells} occupied cells at eps = {eps:e} exceed the budget of {budget}; try eps >= {suggested_eps:e}")]
    MemoryBudget {
        eps: f64,
        cells: usize,
        budget: usize,
        suggested_eps: f64,
    },
    #[error("{found} box sizes in the fit window, need at least {needed}")]
    WindowTooNarrow { found: usize, needed: usize },
    #[error("sampling budget of {budget} points exhausted at parameter {t}")]
    BudgetExceeded { t: f64, budget: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Number of cells of the grid `eps Z` (plus the cell of 0) met by a
/// positive decreasing sequence.
pub fn cover_1d(values: &[f64], eps: f64) -> Result<usize, BoxCountError> {
    if !(eps > 0.0) {
        return Err(BoxCountError::Domain(format!("eps must be positive, got {eps}")));
    }
    let mut count = 1usize; // the cell of 0
    let mut last = 0i64;
    let mut below = 0.0;
    // walk from the smallest value up so equal cells are adjacent
    for &v in values.iter().rev() {
        if !(v.is_finite() && v >= below) {
            return Err(BoxCountError::Domain(format!(
                "values must be finite, nonnegative and decreasing; got {v} before {below}"
            )));
        }
        below = v;
        let cell = (v / eps).floor() as i64;
        if cell != last {
            count += 1;
            last = cell;
        }
    }
    Ok(count)
}
