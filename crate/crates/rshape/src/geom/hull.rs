use super::{orient, Point2, PointCloud};
use crate::error::{Error, Result};

/// Convex hull by monotone chain, returned as a counterclockwise simple
/// polygon of hull vertices (collinear boundary points dropped).
pub fn convex_hull(cloud: &PointCloud) -> Result<Vec<Point2>> {
    let pts = cloud.points();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints {
            need: 3,
            got: pts.len(),
        });
    }
    let mut sorted: Vec<Point2> = pts.to_vec();
    sorted.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));

    let mut lower: Vec<Point2> = Vec::new();
    for &p in &sorted {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in sorted.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::AllCollinear);
    }
    Ok(lower)
}

/// Signed shoelace area; positive for counterclockwise polygons.
pub fn polygon_area(poly: &[Point2]) -> f64 {
    let mut acc = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        acc += a.x * b.y - b.x * a.y;
    }
    acc / 2.0
}

/// Point-in-convex-polygon test (counterclockwise polygon, boundary
/// counts as inside). `tol` is the allowed signed-area slack.
pub fn polygon_contains(poly: &[Point2], p: Point2, tol: f64) -> bool {
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        if (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < -tol {
            return false;
        }
    }
    true
}
