//! Virtual square grid over the area of interest. Training samples map to
//! cells, the classifier's label space is the `K` cells, and cell centroids
//! feed the probability-weighted location fusion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::PlanarPoint;

/// Clamping slack for points sitting numerically on the grid boundary.
const BOUNDARY_EPS_M: f64 = 1e-9;

/// Flat row-major cell index: `index = row * n_cols + col`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellIndex(pub usize);

/// An axis-aligned grid of `n_cols x n_rows` square cells of side
/// `cell_length_m`, anchored at the min corner of the data bounding box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VirtualGrid {
    pub min_corner: PlanarPoint,
    pub cell_length_m: f64,
    pub n_cols: usize,
    pub n_rows: usize,
}

impl VirtualGrid {
    /// Total number of cells `K`.
    pub fn num_cells(&self) -> usize {
        self.n_cols * self.n_rows
    }

    pub fn width_m(&self) -> f64 {
        self.n_cols as f64 * self.cell_length_m
    }

    pub fn height_m(&self) -> f64 {
        self.n_rows as f64 * self.cell_length_m
    }

    pub fn col_of(&self, c: CellIndex) -> usize {
        c.0 % self.n_cols
    }

    pub fn row_of(&self, c: CellIndex) -> usize {
        c.0 / self.n_cols
    }
}

/// Build the grid covering all `locations` with square cells of side
/// `cell_length_m`. The min corner is the elementwise minimum; column and
/// row counts are `ceil(extent / cell_length)` with a floor of 1.
pub fn build_grid(locations: &[PlanarPoint], cell_length_m: f64) -> Result<VirtualGrid> {
    if locations.is_empty() {
        return Err(Error::InvalidInput("cannot build a grid from zero locations".into()));
    }
    if !(cell_length_m > 0.0) {
        return Err(Error::InvalidInput(format!(
            "cell length must be positive, got {cell_length_m}"
        )));
    }
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for p in locations {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::InvalidInput("non-finite location".into()));
        }
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let n_cols = (((max_x - min_x) / cell_length_m).ceil() as usize).max(1);
    let n_rows = (((max_y - min_y) / cell_length_m).ceil() as usize).max(1);
    Ok(VirtualGrid {
        min_corner: PlanarPoint::new(min_x, min_y),
        cell_length_m,
        n_cols,
        n_rows,
    })
}

/// Map a point to its cell. Left/bottom edges are inclusive; a point exactly
/// on the right/top boundary clamps into the last cell. Points outside the
/// extent beyond a 1e-9 m epsilon are an error.
pub fn cell_of(p: PlanarPoint, grid: &VirtualGrid) -> Result<CellIndex> {
    let col = axis_cell(p.x, grid.min_corner.x, grid.cell_length_m, grid.n_cols)
        .ok_or(Error::OutOfBounds { x: p.x, y: p.y })?;
    let row = axis_cell(p.y, grid.min_corner.y, grid.cell_length_m, grid.n_rows)
        .ok_or(Error::OutOfBounds { x: p.x, y: p.y })?;
    Ok(CellIndex(row * grid.n_cols + col))
}

fn axis_cell(v: f64, min: f64, len: f64, n: usize) -> Option<usize> {
    let max = min + n as f64 * len;
    if v < min - BOUNDARY_EPS_M || v > max + BOUNDARY_EPS_M {
        return None;
    }
    let idx = ((v - min) / len).floor();
    let idx = if idx < 0.0 { 0 } else { idx as usize };
    Some(idx.min(n - 1))
}

/// Center point of a cell.
pub fn centroid(c: CellIndex, grid: &VirtualGrid) -> Result<PlanarPoint> {
    if c.0 >= grid.num_cells() {
        return Err(Error::InvalidInput(format!(
            "cell index {} out of range for K={}",
            c.0,
            grid.num_cells()
        )));
    }
    let col = grid.col_of(c) as f64;
    let row = grid.row_of(c) as f64;
    Ok(PlanarPoint::new(
        grid.min_corner.x + (col + 0.5) * grid.cell_length_m,
        grid.min_corner.y + (row + 0.5) * grid.cell_length_m,
    ))
}

/// One-hot training target over `k` cells.
pub fn one_hot(c: CellIndex, k: usize) -> Result<Vec<f64>> {
    if c.0 >= k {
        return Err(Error::InvalidInput(format!("one-hot index {} out of range {k}", c.0)));
    }
    let mut v = vec![0.0; k];
    v[c.0] = 1.0;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(coords: &[(f64, f64)]) -> Vec<PlanarPoint> {
        coords.iter().map(|&(x, y)| PlanarPoint::new(x, y)).collect()
    }

    #[test]
    fn degenerate_single_point_grid() {
        let g = build_grid(&pts(&[(5.0, 7.0)]), 100.0).unwrap();
        assert_eq!((g.n_cols, g.n_rows), (1, 1));
        assert_eq!(g.num_cells(), 1);
        assert_eq!(cell_of(PlanarPoint::new(5.0, 7.0), &g).unwrap(), CellIndex(0));
    }

    #[test]
    fn ceil_arithmetic_3x1() {
        let g = build_grid(&pts(&[(0.0, 0.0), (250.0, 90.0)]), 100.0).unwrap();
        assert_eq!((g.n_cols, g.n_rows), (3, 1));
        assert_eq!(g.num_cells(), 3);
    }

    #[test]
    fn paper_scale_extent() {
        let g = build_grid(&pts(&[(0.0, 0.0), (2040.0, 1000.0)]), 100.0).unwrap();
        assert_eq!((g.n_cols, g.n_rows), (21, 10));
        assert_eq!(g.num_cells(), 210);
    }

    #[test]
    fn build_grid_rejects_bad_input() {
        assert!(build_grid(&[], 100.0).is_err());
        assert!(build_grid(&pts(&[(0.0, 0.0)]), 0.0).is_err());
        assert!(build_grid(&pts(&[(f64::NAN, 0.0)]), 100.0).is_err());
    }

    #[test]
    fn cell_of_interior_and_clamp() {
        let g = build_grid(&pts(&[(0.0, 0.0), (250.0, 90.0)]), 100.0).unwrap();
        assert_eq!(cell_of(PlanarPoint::new(0.0, 0.0), &g).unwrap(), CellIndex(0));
        assert_eq!(cell_of(PlanarPoint::new(150.0, 50.0), &g).unwrap(), CellIndex(1));
        // exact right edge of the 3x1 grid clamps into the last cell
        assert_eq!(cell_of(PlanarPoint::new(300.0, 50.0), &g).unwrap(), CellIndex(2));
        assert!(matches!(
            cell_of(PlanarPoint::new(301.0, 50.0), &g),
            Err(Error::OutOfBounds { .. })
        ));
        assert!(cell_of(PlanarPoint::new(-1.0, 50.0), &g).is_err());
    }

    #[test]
    fn centroid_positions() {
        let g = build_grid(&pts(&[(0.0, 0.0), (250.0, 90.0)]), 100.0).unwrap();
        assert_eq!(centroid(CellIndex(0), &g).unwrap(), PlanarPoint::new(50.0, 50.0));
        assert_eq!(centroid(CellIndex(1), &g).unwrap(), PlanarPoint::new(150.0, 50.0));
        assert!(centroid(CellIndex(3), &g).is_err());
    }

    #[test]
    fn one_hot_basics() {
        assert_eq!(one_hot(CellIndex(0), 3).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(one_hot(CellIndex(2), 3).unwrap(), vec![0.0, 0.0, 1.0]);
        assert!(one_hot(CellIndex(3), 3).is_err());
        for k in 1..=64 {
            for c in 0..k {
                let v = one_hot(CellIndex(c), k).unwrap();
                assert_eq!(v.iter().sum::<f64>(), 1.0);
                assert_eq!(v[c], 1.0);
            }
        }
    }

    proptest! {
        // cell_of(centroid(c)) == c for every cell of random grids, and K
        // shrinks weakly as the cell length grows.
        #[test]
        fn centroid_round_trip_and_k_monotone(
            x0 in -5000.0f64..5000.0,
            y0 in -5000.0f64..5000.0,
            w in 1.0f64..4000.0,
            h in 1.0f64..4000.0,
            len in 10.0f64..500.0,
        ) {
            let locations = pts(&[(x0, y0), (x0 + w, y0 + h)]);
            let g = build_grid(&locations, len).unwrap();
            for i in 0..g.num_cells() {
                let c = CellIndex(i);
                prop_assert_eq!(cell_of(centroid(c, &g).unwrap(), &g).unwrap(), c);
            }
            let coarser = build_grid(&locations, len * 2.0).unwrap();
            prop_assert!(coarser.num_cells() <= g.num_cells());
        }

        // Partition property: every in-extent probe maps to exactly one cell
        // whose rectangle actually contains it.
        #[test]
        fn lattice_partition(fx in 0.0f64..1.0, fy in 0.0f64..1.0) {
            let g = build_grid(&pts(&[(0.0, 0.0), (250.0, 90.0)]), 100.0).unwrap();
            let p = PlanarPoint::new(fx * g.width_m(), fy * g.height_m());
            let c = cell_of(p, &g).unwrap();
            let col = g.col_of(c) as f64;
            let row = g.row_of(c) as f64;
            prop_assert!(p.x >= col * g.cell_length_m - 1e-9);
            prop_assert!(p.x <= (col + 1.0) * g.cell_length_m + 1e-9);
            prop_assert!(p.y >= row * g.cell_length_m - 1e-9);
            prop_assert!(p.y <= (row + 1.0) * g.cell_length_m + 1e-9);
        }
    }
}
