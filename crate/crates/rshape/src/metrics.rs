//! Set distances for judging support estimates: area of the symmetric
//! difference on a raster, Hausdorff distance between point sets, and
//! Hausdorff distance between boundaries via dense arc sampling.

use crate::error::{Error, Result};
use crate::geom::{NeighborGrid, Point2, PointCloud};
use crate::rconvex::{MembershipGrid, RConvexHull};

#[derive(Debug, Clone, Copy)]
pub struct MetricReport {
    /// Area of the symmetric difference (squared length units).
    pub d_mu: f64,
    pub d_h: f64,
    pub d_h_boundary: f64,
    pub grid_resolution: usize,
}

/// Area of the symmetric difference of two rasterized regions.
pub fn distance_in_measure(a: &MembershipGrid, b: &MembershipGrid) -> Result<f64> {
    a.symmetric_difference_area(b)
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff_points(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(hausdorff_point_sets(a.points(), b.points()))
}

/// Hausdorff distance between dense samplings of two boundaries: the
/// hull's own (arcs plus isolated samples) against a reference polyline
/// or arc sampling.
pub fn hausdorff_boundary(hull: &RConvexHull, reference: &[Point2]) -> Result<f64> {
    let own = boundary_sampling(hull, 1e-3);
    if own.is_empty() || reference.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    Ok(hausdorff_point_sets(&own, reference))
}

/// Point sampling of the hull boundary with arc mesh `mesh_rel` times
/// the sample diameter.
pub fn boundary_sampling(hull: &RConvexHull, mesh_rel: f64) -> Vec<Point2> {
    let diam = PointCloud::new(hull.samples().to_vec(), "_")
        .map(|c| c.diameter())
        .unwrap_or(1.0);
    let mesh = (mesh_rel * diam).max(f64::MIN_POSITIVE);
    let mut pts = Vec::new();
    for ba in hull.boundary_arcs() {
        let step = mesh / hull.radius().max(f64::MIN_POSITIVE);
        pts.push(ba.arc.start_point());
        pts.extend(ba.arc.sample_midpoints(step));
    }
    for &i in &hull.isolated {
        pts.push(hull.samples()[i]);
    }
    pts
}

/// Hausdorff distance between two rasterized regions, taken between
/// the occupied cell centers. Accuracy is one cell diagonal.
pub fn hausdorff_grids(a: &MembershipGrid, b: &MembershipGrid) -> Result<f64> {
    let (pa, pb) = (a.occupied_centers(), b.occupied_centers());
    if pa.is_empty() || pb.is_empty() {
        return Err(Error::DegenerateRegion);
    }
    Ok(hausdorff_point_sets(&pa, &pb))
}

/// Symmetric max-min distance between point sets, each side accelerated
/// by a neighbor grid over the other.
pub fn hausdorff_point_sets(a: &[Point2], b: &[Point2]) -> f64 {
    let one_sided = |from: &[Point2], to: &[Point2]| -> f64 {
        let grid = NeighborGrid::new(to);
        from.iter()
            .map(|&p| grid.nearest(p).map(|(_, d)| d).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}
