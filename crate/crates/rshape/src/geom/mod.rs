//! Planar geometry kernels: points, neighbor queries, Delaunay
//! triangulation, convex hull and the Euclidean minimum spanning tree.

mod delaunay;
mod grid;
mod hull;
mod mst;

pub use delaunay::{delaunay, Triangulation};
pub use grid::NeighborGrid;
pub use hull::{convex_hull, polygon_area, polygon_contains};
pub use mst::{euclidean_mst, Edge, EdgeList};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the plane. Coordinates must be finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn dist2(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Cross product of (b - a) and (c - a); positive when a,b,c turn left.
pub fn cross(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Robust orientation predicate: > 0 when a,b,c are counterclockwise.
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    )
}

/// An axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BBox {
    pub fn of(points: &[Point2]) -> BBox {
        let mut b = BBox {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        };
        for p in points {
            b.min_x = b.min_x.min(p.x);
            b.min_y = b.min_y.min(p.y);
            b.max_x = b.max_x.max(p.x);
            b.max_y = b.max_y.max(p.y);
        }
        b
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min_x && p.x <= self.max_x && p.y >= self.min_y && p.y <= self.max_y
    }
}

/// A finite sample of planar points. Duplicates are removed at
/// construction; the original insertion order of the survivors is kept.
#[derive(Debug, Clone)]
pub struct PointCloud {
    points: Vec<Point2>,
    pub label: String,
    /// Number of exact duplicates dropped at ingestion.
    pub duplicates_dropped: usize,
}

impl PointCloud {
    pub fn new(points: Vec<Point2>, label: impl Into<String>) -> Result<PointCloud> {
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite(format!("point #{i}: ({}, {})", p.x, p.y)));
            }
        }
        // Exact-equality dedup, preserving first occurrences.
        let total = points.len();
        let mut seen = std::collections::HashSet::new();
        let mut kept = Vec::with_capacity(points.len());
        for p in points {
            if seen.insert((p.x.to_bits(), p.y.to_bits())) {
                kept.push(p);
            }
        }
        Ok(PointCloud {
            duplicates_dropped: total - kept.len(),
            points: kept,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(&self.points)
    }

    /// Largest pairwise distance. O(h^2) over hull vertices when a hull
    /// exists, otherwise O(n^2).
    pub fn diameter(&self) -> f64 {
        let pts: Vec<Point2> = match convex_hull(self) {
            Ok(h) => h,
            Err(_) => self.points.clone(),
        };
        let mut best = 0.0f64;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                best = best.max(pts[i].dist(&pts[j]));
            }
        }
        best
    }

    /// Median over points of the distance to their nearest neighbor.
    pub fn median_nn_distance(&self) -> f64 {
        if self.points.len() < 2 {
            return 0.0;
        }
        let grid = NeighborGrid::new(&self.points);
        let mut dists: Vec<f64> = (0..self.points.len())
            .map(|i| {
                grid.nearest_excluding(self.points[i], i)
                    .map(|(_, d)| d)
                    .unwrap_or(0.0)
            })
            .collect();
        dists.sort_by(|a, b| a.total_cmp(b));
        dists[dists.len() / 2]
    }
}

/// Smallest distance from `x` to any sample point.
pub fn nearest_sample_distance(x: Point2, cloud: &PointCloud) -> Result<f64> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(cloud
        .points()
        .iter()
        .map(|p| p.dist(&x))
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedup_keeps_first_occurrence() {
        let cloud = PointCloud::new(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 0.0),
            ],
            "t",
        )
        .unwrap();
        assert_eq!(cloud.len(), 2);
        assert_eq!(cloud.duplicates_dropped, 1);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(PointCloud::new(vec![Point2::new(f64::NAN, 0.0)], "t").is_err());
    }

    #[test]
    fn nearest_distance_trivial_cases() {
        let cloud = PointCloud::new(vec![Point2::new(0.0, 0.0)], "t").unwrap();
        assert_eq!(
            nearest_sample_distance(Point2::new(3.0, 4.0), &cloud).unwrap(),
            5.0
        );
        assert_eq!(
            nearest_sample_distance(Point2::new(0.0, 0.0), &cloud).unwrap(),
            0.0
        );
        let empty = PointCloud::new(vec![], "e").unwrap();
        assert!(nearest_sample_distance(Point2::new(0.0, 0.0), &empty).is_err());
    }
}
