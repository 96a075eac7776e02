use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{BBox, Point2};

/// Boolean occupancy grid over a bounding box, row-major from the
/// lower-left cell, each cell evaluated at its center.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MembershipGrid {
    pub bbox: BBox,
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<bool>,
}

impl MembershipGrid {
    pub fn from_fn<F>(bbox: BBox, nx: usize, ny: usize, f: F) -> MembershipGrid
    where
        F: Fn(Point2) -> bool + Sync,
    {
        let dx = bbox.width() / nx as f64;
        let dy = bbox.height() / ny as f64;
        let cells: Vec<bool> = (0..ny)
            .into_par_iter()
            .flat_map_iter(|iy| {
                let y = bbox.min_y + (iy as f64 + 0.5) * dy;
                (0..nx).map(move |ix| (ix, y))
            })
            .map(|(ix, y)| f(Point2::new(bbox.min_x + (ix as f64 + 0.5) * dx, y)))
            .collect();
        MembershipGrid { bbox, nx, ny, cells }
    }

    pub fn cell_area(&self) -> f64 {
        (self.bbox.width() / self.nx as f64) * (self.bbox.height() / self.ny as f64)
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn occupied_area(&self) -> f64 {
        self.occupied() as f64 * self.cell_area()
    }

    /// Centers of the occupied cells, row-major order.
    pub fn occupied_centers(&self) -> Vec<Point2> {
        let dx = self.bbox.width() / self.nx as f64;
        let dy = self.bbox.height() / self.ny as f64;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| {
                let ix = i % self.nx;
                let iy = i / self.nx;
                Point2::new(
                    self.bbox.min_x + (ix as f64 + 0.5) * dx,
                    self.bbox.min_y + (iy as f64 + 0.5) * dy,
                )
            })
            .collect()
    }

    /// Area of the symmetric difference with another grid. The grids
    /// must share geometry and resolution.
    pub fn symmetric_difference_area(&self, other: &MembershipGrid) -> Result<f64> {
        if self.nx != other.nx || self.ny != other.ny {
            return Err(Error::GridMismatch(format!(
                "resolution {}x{} vs {}x{}",
                self.nx, self.ny, other.nx, other.ny
            )));
        }
        let same_box = (self.bbox.min_x - other.bbox.min_x).abs() < 1e-12
            && (self.bbox.min_y - other.bbox.min_y).abs() < 1e-12
            && (self.bbox.max_x - other.bbox.max_x).abs() < 1e-12
            && (self.bbox.max_y - other.bbox.max_y).abs() < 1e-12;
        if !same_box {
            return Err(Error::GridMismatch("bounding boxes differ".into()));
        }
        let diff = self
            .cells
            .iter()
            .zip(&other.cells)
            .filter(|(a, b)| a != b)
            .count();
        Ok(diff as f64 * self.cell_area())
    }
}
