//! Uniformity testing by maximal spacings. A uniform sample on a region
//! leaves no hole much larger than (log n)/n in area; the largest empty
//! ball inside the current hull estimate is compared against a
//! Gumbel-calibrated critical radius, and the hull is rejected as too
//! coarse when the hole wins.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geom::{delaunay, NeighborGrid, Point2, PointCloud};
use crate::rconvex::{union_boundary, ArcSegment, RConvexHull};

/// Default angular resolution for walking dilation-boundary arcs.
pub const DEFAULT_ANGULAR_STEP: f64 = TAU / 256.0;

/// Quantile of the standard Gumbel law P(U <= u) = exp(-exp(-u)).
pub fn gumbel_quantile(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(-(-(1.0 - alpha).ln()).ln())
}

/// Critical volume and radius for the spacing test, with the sample
/// size corrected by the number of boundary vertices.
#[derive(Debug, Clone, Copy)]
pub struct CriticalValue {
    pub alpha: f64,
    pub n: usize,
    pub v_n: usize,
    /// Reference area (the measure of the current support estimate).
    pub a_n: f64,
    pub u_alpha: f64,
    pub c_star_volume: f64,
    pub c_star_radius: f64,
    pub d: u32,
    pub beta: f64,
}

/// Critical value at level `alpha` for `n` points of which `v_n` sit on
/// the boundary, over a region of area `a_n`. Planar case: d = 2 and
/// the spacing constant beta = 1, so the log beta term drops out.
pub fn critical_value(n: usize, v_n: usize, a_n: f64, alpha: f64) -> Result<CriticalValue> {
    let u_alpha = gumbel_quantile(alpha)?;
    if v_n > n || n - v_n < 3 {
        return Err(Error::DegenerateSampleSize {
            effective: n as i64 - v_n as i64,
        });
    }
    if !(a_n > 0.0) || !a_n.is_finite() {
        return Err(Error::DegenerateRegion);
    }
    let m = (n - v_n) as f64;
    let c_star_volume = a_n * (u_alpha + m.ln() + m.ln().ln()) / m;
    if !(c_star_volume > 0.0) {
        return Err(Error::DegenerateSampleSize {
            effective: (n - v_n) as i64,
        });
    }
    Ok(CriticalValue {
        alpha,
        n,
        v_n,
        a_n,
        u_alpha,
        c_star_volume,
        c_star_radius: (c_star_volume / PI).sqrt(),
        d: 2,
        beta: 1.0,
    })
}

/// Boundary of the union of open balls of radius `rho` around the
/// sample, as arcs. Every point on it is at distance exactly rho from
/// its nearest sample point.
pub fn dilation_boundary(cloud: &PointCloud, rho: f64) -> Result<Vec<ArcSegment>> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidRadius(rho));
    }
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let grid = NeighborGrid::new(cloud.points());
    Ok(union_boundary(cloud.points(), &grid, rho)
        .into_iter()
        .map(|d| d.arc)
        .collect())
}

// Candidates tagged with the arc they came from, so the caller can
// refine around a maximizer.
fn candidates_tagged(
    hull: &RConvexHull,
    arcs: &[ArcSegment],
    rho: f64,
    angular_step: f64,
) -> Vec<(Point2, usize)> {
    let tol = rho * 1e-9;
    let mut out = Vec::new();
    for (id, arc) in arcs.iter().enumerate() {
        for p in arc.sample_midpoints(angular_step) {
            if hull.contains(p) {
                debug_assert!((p.dist(&arc.center) - rho).abs() <= tol.max(1e-12));
                out.push((p, id));
            }
        }
    }
    out
}

/// Discretization of the trace of the rho-dilation boundary inside the
/// hull. Every returned point keeps all samples at distance >= rho (up
/// to 1e-9), so the open ball of radius rho around it is empty.
pub fn candidate_set(
    hull: &RConvexHull,
    cloud: &PointCloud,
    rho: f64,
    angular_step: f64,
) -> Result<Vec<Point2>> {
    let arcs = dilation_boundary(cloud, rho)?;
    Ok(candidates_tagged(hull, &arcs, rho, angular_step)
        .into_iter()
        .map(|(p, _)| p)
        .collect())
}

/// Largest distance from a candidate to the hull boundary, with the
/// maximizer. Ties keep the earliest candidate; empty input gives 0.
pub fn max_clearance(hull: &RConvexHull, candidates: &[Point2]) -> (f64, Option<Point2>) {
    let mut best = 0.0f64;
    let mut witness = None;
    for &p in candidates {
        let d = match hull.distance_to_boundary(p) {
            Ok(d) => d,
            Err(_) => continue,
        };
        if d > best {
            best = d;
            witness = Some(p);
        }
    }
    (best, witness)
}

/// Outcome of the uniformity test on one hull.
#[derive(Debug, Clone, Copy)]
pub struct UniformityVerdict {
    pub reject: bool,
    /// Largest clearance found inside the hull at sample distance rho.
    pub m_r: f64,
    pub critical_radius: f64,
    pub candidate_count: usize,
    /// Center of the violating ball, present exactly when rejecting.
    pub witness: Option<Point2>,
}

/// Test uniformity of the sample over its own r-convex hull: build the
/// hull, derive the critical radius, scan the dilation boundary for a
/// large empty ball, reject when one clears the critical radius.
pub fn test_uniformity(cloud: &PointCloud, r: f64, alpha: f64) -> Result<UniformityVerdict> {
    let hull = RConvexHull::build(cloud, r)?;
    test_uniformity_on(&hull, alpha, DEFAULT_ANGULAR_STEP)
}

/// Same test against a prebuilt hull; callers probing many radii build
/// hulls off one shared triangulation.
pub fn test_uniformity_on(
    hull: &RConvexHull,
    alpha: f64,
    angular_step: f64,
) -> Result<UniformityVerdict> {
    let n = hull.samples().len();
    let v_n = hull.boundary_vertex_count();
    let crit = critical_value(n, v_n, hull.area(), alpha)?;
    let rho = crit.c_star_radius;

    let grid = NeighborGrid::new(hull.samples());
    let arcs: Vec<ArcSegment> = union_boundary(hull.samples(), &grid, rho)
        .into_iter()
        .map(|d| d.arc)
        .collect();
    let tagged = candidates_tagged(hull, &arcs, rho, angular_step);
    let candidate_count = tagged.len();

    let mut m_r = 0.0f64;
    let mut witness = None;
    let mut best_arc = None;
    for (p, id) in &tagged {
        if let Ok(d) = hull.distance_to_boundary(*p) {
            if d > m_r {
                m_r = d;
                witness = Some(*p);
                best_arc = Some(*id);
            }
        }
    }
    // One refinement pass at a quarter of the step, on the arc that
    // produced the running maximum.
    if let Some(id) = best_arc {
        let fine = candidates_tagged(hull, &arcs[id..id + 1], rho, angular_step / 4.0);
        for (p, _) in fine {
            if let Ok(d) = hull.distance_to_boundary(p) {
                if d > m_r {
                    m_r = d;
                    witness = Some(p);
                }
            }
        }
    }

    let reject = m_r > rho;
    Ok(UniformityVerdict {
        reject,
        m_r,
        critical_radius: rho,
        candidate_count,
        witness: if reject { witness } else { None },
    })
}

/// The maximal spacing of a sample within a region: radius of the
/// largest ball that fits inside the region without touching a sample.
#[derive(Debug, Clone, Copy)]
pub struct SpacingReport {
    pub delta_hat: f64,
    pub center: Point2,
    pub volume: f64,
}

/// Maximal spacing of the sample within the hull. Candidate centers are
/// the sample's Voronoi vertices (circumcenters) and Delaunay edge
/// midpoints that land inside the hull, each polished by compass
/// search on min(distance to samples, distance to the boundary).
pub fn maximal_spacing(cloud: &PointCloud, hull: &RConvexHull) -> Result<SpacingReport> {
    if !(hull.area() > 0.0) {
        return Err(Error::DegenerateRegion);
    }
    let grid = NeighborGrid::new(cloud.points());
    let score = |p: Point2| -> f64 {
        if !hull.contains(p) {
            return f64::NEG_INFINITY;
        }
        let ds = grid.nearest(p).map(|(_, d)| d).unwrap_or(0.0);
        let db = hull.distance_to_boundary(p).unwrap_or(0.0);
        ds.min(db)
    };

    let tri = delaunay(cloud)?;
    let mut seeds: Vec<Point2> = tri
        .circumcenters
        .iter()
        .copied()
        .filter(|&c| c.is_finite() && hull.contains(c))
        .collect();
    for e in &tri.edges {
        let (a, b) = (cloud.points()[e.a], cloud.points()[e.b]);
        seeds.push(Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y)));
    }
    let mut scored: Vec<(f64, Point2)> = seeds.iter().map(|&p| (score(p), p)).collect();
    scored.sort_by(|x, y| y.0.total_cmp(&x.0));
    scored.truncate(8);
    if scored.is_empty() || !scored[0].0.is_finite() {
        return Err(Error::DegenerateRegion);
    }

    let diam = cloud.diameter().max(f64::MIN_POSITIVE);
    let mut best = scored[0];
    for &(s0, p0) in &scored {
        if !s0.is_finite() {
            continue;
        }
        let (s, p) = compass_refine(p0, s0, diam, &score);
        if s > best.0 {
            best = (s, p);
        }
    }
    let (delta_hat, center) = best;
    Ok(SpacingReport {
        delta_hat,
        center,
        volume: PI * delta_hat * delta_hat,
    })
}

// Pattern search over 8 compass directions with a halving step.
fn compass_refine<F: Fn(Point2) -> f64>(
    mut p: Point2,
    mut s: f64,
    scale: f64,
    score: &F,
) -> (f64, Point2) {
    let mut step = 0.05 * scale;
    let dirs: Vec<(f64, f64)> = (0..8)
        .map(|k| {
            let a = TAU * k as f64 / 8.0;
            (a.cos(), a.sin())
        })
        .collect();
    while step > 1e-9 * scale {
        let mut improved = false;
        for &(ux, uy) in &dirs {
            let q = Point2::new(p.x + step * ux, p.y + step * uy);
            let sq = score(q);
            if sq > s {
                s = sq;
                p = q;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (s, p)
}
