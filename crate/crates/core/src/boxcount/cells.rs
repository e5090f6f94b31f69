use std::io::Read;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use super::BoxCountError;

/// Upper bound on the occupied cells of a single count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryBudget {
    pub max_cells: usize,
}

impl Default for MemoryBudget {
    fn default() -> Self {
        MemoryBudget { max_cells: 50_000_000 }
    }
}

/// Grid randomisation: `anchors` grids shifted by seeded random fractions of
/// a cell, combined by the median count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridOptions {
    pub anchors: usize,
    pub seed: u64,
    pub budget: MemoryBudget,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            anchors: 5,
            seed: 0,
            budget: MemoryBudget::default(),
        }
    }
}

impl GridOptions {
    /// Anchor shifts in cell units, one row of `dim` fractions per anchor.
    pub fn shifts(&self, dim: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.anchors.max(1))
            .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
            .collect()
    }
}

/// Set of occupied cells of the grid `origin + eps (Z^d - shift)`.
#[derive(Debug, Clone)]
pub struct CellGrid {
    dim: usize,
    origin: Vec<f64>,
    shift: Vec<f64>,
    eps: f64,
    cells: FxHashSet<u64>,
    last: Option<u64>,
    budget: MemoryBudget,
}

impl CellGrid {
    pub fn new(origin: &[f64], shift: &[f64], eps: f64, budget: MemoryBudget) -> Result<CellGrid, BoxCountError> {
        let dim = origin.len();
        if !(1..=3).contains(&dim) || shift.len() != dim {
            return Err(BoxCountError::Domain(format!("grids live in 1 to 3 dimensions, got {dim}")));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(BoxCountError::Domain(format!("eps must be positive, got {eps}")));
        }
        Ok(CellGrid {
            dim,
            origin: origin.to_vec(),
            shift: shift.to_vec(),
            eps,
            cells: FxHashSet::default(),
            last: None,
            budget,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Integer cell index of a point.
    pub fn index_of(&self, p: &[f64]) -> [i64; 3] {
        let mut idx = [0i64; 3];
        for i in 0..self.dim {
            idx[i] = ((p[i] - self.origin[i]) / self.eps + self.shift[i]).floor() as i64;
        }
        idx
    }

    /// Lower corner of the cell with the given index.
    pub fn cell_corner(&self, idx: &[i64]) -> [f64; 3] {
        let mut c = [0.0; 3];
        for i in 0..self.dim {
            c[i] = self.origin[i] + (idx[i] as f64 - self.shift[i]) * self.eps;
        }
        c
    }

    fn pack(&self, idx: &[i64]) -> Result<u64, BoxCountError> {
        if self.dim == 1 {
            return Ok(idx[0] as u64);
        }
        let bits = 64 / self.dim as u32;
        let half = 1i64 << (bits - 1);
        let mut key = 0u64;
        for &v in &idx[..self.dim] {
            if v < -half || v >= half {
                return Err(BoxCountError::Domain(format!(
                    "cell index {v} does not fit the packed key; use a larger eps or a tighter origin"
                )));
            }
            key = (key << bits) | (v + half) as u64;
        }
        Ok(key)
    }

    pub fn insert(&mut self, p: &[f64]) -> Result<(), BoxCountError> {
        let idx = self.index_of(p);
        self.insert_index(&idx)
    }

    pub fn insert_index(&mut self, idx: &[i64]) -> Result<(), BoxCountError> {
        let key = self.pack(idx)?;
        if self.last == Some(key) {
            return Ok(());
        }
        self.last = Some(key);
        if self.cells.insert(key) && self.cells.len() > self.budget.max_cells {
            let cells = self.cells.len();
            return Err(BoxCountError::MemoryBudget {
                eps: self.eps,
                cells,
                budget: self.budget.max_cells,
                suggested_eps: self.eps * (cells as f64 / self.budget.max_cells as f64).sqrt() * 2.0,
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Finite points in 1, 2 or 3 dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl PointCloud {
    /// `coords` holds the points back to back, `dim` values each.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<PointCloud, BoxCountError> {
        if !(1..=3).contains(&dim) {
            return Err(BoxCountError::Domain(format!("point clouds live in 1 to 3 dimensions, got {dim}")));
        }
        if coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(BoxCountError::Domain("empty or ragged point cloud".into()));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(BoxCountError::Domain("point cloud has non-finite coordinates".into()));
        }
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in coords.chunks_exact(dim) {
            for i in 0..dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        Ok(PointCloud { dim, coords, lo, hi })
    }

    pub fn from_points<const D: usize>(points: &[[f64; D]]) -> Result<PointCloud, BoxCountError> {
        PointCloud::new(D, points.iter().flatten().copied().collect())
    }

    /// Rows of `x[,y[,z]]`; a non-numeric first row is taken as a header.
    pub fn read_csv<R: Read>(input: R) -> Result<PointCloud, BoxCountError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut dim = 0;
        let mut coords = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            let row = match row {
                Ok(r) => r,
                Err(_) if i == 0 => continue,
                Err(_) => return Err(BoxCountError::Domain(format!("row {} is not numeric", i + 1))),
            };
            if dim == 0 {
                dim = row.len();
            } else if row.len() != dim {
                return Err(BoxCountError::Domain(format!("row {} has {} columns, expected {dim}", i + 1, row.len())));
            }
            coords.extend(row);
        }
        PointCloud::new(dim.max(1), coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn bounding_box(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }

    fn count_with_shift(&self, eps: f64, shift: &[f64], budget: MemoryBudget) -> Result<usize, BoxCountError> {
        let mut grid = CellGrid::new(&self.lo, shift, eps, budget)?;
        for p in self.points() {
            grid.insert(p)?;
        }
        Ok(grid.len())
    }
}

/// Occupied cells of side `eps` on the grid anchored at the lower corner of
/// the bounding box.
pub fn count_boxes(cloud: &PointCloud, eps: f64) -> Result<usize, BoxCountError> {
    cloud.count_with_shift(eps, &vec![0.0; cloud.dim], MemoryBudget::default())
}

/// Median occupied-cell count over randomly shifted grids.
pub fn count_boxes_median(cloud: &PointCloud, eps: f64, opts: &GridOptions) -> Result<usize, BoxCountError> {
    let counts = opts
        .shifts(cloud.dim)
        .par_iter()
        .map(|s| cloud.count_with_shift(eps, s, opts.budget))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(median(counts))
}

pub(crate) fn median(mut v: Vec<usize>) -> usize {
    v.sort_unstable();
    v[v.len() / 2]
}
