//! Data-driven choice of the smoothing radius. The main selector
//! bisects on the uniformity test: small radii shatter the hull and get
//! rejected, large radii oversmooth and leave a detectable hole, and
//! the estimate is the largest radius the test still accepts. A
//! spanning-tree baseline is kept alongside for comparison studies.

mod registry;

pub use registry::{selector_by_name, selector_names, Selection, SmoothingSelector};

use crate::error::{Error, Result};
use crate::geom::{delaunay, euclidean_mst, PointCloud};
use crate::rconvex::RConvexHull;
use crate::spacing::{test_uniformity_on, UniformityVerdict, DEFAULT_ANGULAR_STEP};

#[derive(Debug, Clone, Copy)]
pub struct SelectorConfig {
    pub alpha: f64,
    /// Bisection iterations after the bracket is validated.
    pub max_iterations: u32,
    /// Largest tolerated number of boundary cycles at the lower bracket.
    pub max_cycles: usize,
    pub r_min: f64,
    pub r_max: f64,
    /// Final shrink factor: the support estimate is built at nu * r_hat.
    pub nu: f64,
    pub angular_step: f64,
    pub seed: u64,
}

impl SelectorConfig {
    /// Defaults with the bracket derived from the cloud: the lower end
    /// at half the median nearest-neighbor distance (hull close to the
    /// bare sample), the upper end at the diameter (hull close to the
    /// convex hull).
    pub fn defaults_for(cloud: &PointCloud) -> SelectorConfig {
        SelectorConfig {
            alpha: 1e-2,
            max_iterations: 20,
            max_cycles: 4,
            r_min: 0.5 * cloud.median_nn_distance(),
            r_max: cloud.diameter(),
            nu: 0.95,
            angular_step: DEFAULT_ANGULAR_STEP,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::AlphaOutOfRange(self.alpha));
        }
        if !(self.r_min > 0.0 && self.r_min < self.r_max) || !self.r_max.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "need 0 < r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidConfig("max_iterations must be >= 1".into()));
        }
        if self.max_cycles < 1 {
            return Err(Error::InvalidConfig("max_cycles must be >= 1".into()));
        }
        if !(self.nu > 0.0 && self.nu < 1.0) {
            return Err(Error::InvalidConfig(format!("nu must be in (0,1), got {}", self.nu)));
        }
        if !(self.angular_step > 0.0) {
            return Err(Error::InvalidConfig("angular_step must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectorOutcome {
    /// Bracket validated, bisection ran to the iteration cap.
    Bisection,
    /// The test accepted even the convex-scale hull; the convex hull is
    /// the estimate.
    ConvexHullFallback,
    /// The test rejected everything down to the fragmentation limit;
    /// the smallest radius keeping the hull in few pieces is returned.
    CycleCapFallback,
}

#[derive(Debug, Clone)]
pub struct SelectorTrace {
    /// Every radius at which the test ran: (r, verdict, cycle count).
    pub iterations: Vec<(f64, UniformityVerdict, usize)>,
    pub outcome: SelectorOutcome,
    pub r_hat: f64,
}

// A failed critical value (too few effective points, zero-area hull)
// means the hull is still shattered; treat it as a rejection.
fn probe(hull: &RConvexHull, alpha: f64, step: f64) -> UniformityVerdict {
    test_uniformity_on(hull, alpha, step).unwrap_or(UniformityVerdict {
        reject: true,
        m_r: f64::INFINITY,
        critical_radius: 0.0,
        candidate_count: 0,
        witness: None,
    })
}

/// The bisection selector. Validates the bracket (test rejects at the
/// low end, accepts nowhere above), then halves the interval
/// `max_iterations` times keeping the invariant "accepted at r_m,
/// rejected at r_M", and returns the final r_m.
pub fn select_rs(cloud: &PointCloud, cfg: &SelectorConfig) -> Result<SelectorTrace> {
    cfg.validate()?;
    let tri = delaunay(cloud)?;
    let build = |r: f64| RConvexHull::build_with(cloud, &tri, r);
    let mut iterations = Vec::with_capacity(cfg.max_iterations as usize + 2);

    // Upper bracket first: if even the convex-scale hull passes, the
    // support is convex as far as the test can tell.
    let hull_max = build(cfg.r_max)?;
    let v_max = probe(&hull_max, cfg.alpha, cfg.angular_step);
    iterations.push((cfg.r_max, v_max, hull_max.cycle_count()));
    if !v_max.reject {
        return Ok(SelectorTrace {
            iterations,
            outcome: SelectorOutcome::ConvexHullFallback,
            r_hat: cfg.r_max,
        });
    }

    // Lower bracket: grow r_min past radii where the hull splinters
    // into more than max_cycles pieces.
    let mut r_lo = cfg.r_min;
    let mut hull_lo = build(r_lo)?;
    while hull_lo.cycle_count() > cfg.max_cycles && r_lo * 2.0 < cfg.r_max {
        r_lo *= 2.0;
        hull_lo = build(r_lo)?;
    }
    let v_lo = probe(&hull_lo, cfg.alpha, cfg.angular_step);
    iterations.push((r_lo, v_lo, hull_lo.cycle_count()));
    if v_lo.reject {
        // Rejected all the way down; keep the smallest radius that at
        // least holds the hull together.
        return Ok(SelectorTrace {
            iterations,
            outcome: SelectorOutcome::CycleCapFallback,
            r_hat: r_lo,
        });
    }

    let mut r_m = r_lo;
    let mut r_big = cfg.r_max;
    for _ in 0..cfg.max_iterations {
        let r = 0.5 * (r_m + r_big);
        let hull = build(r)?;
        let v = probe(&hull, cfg.alpha, cfg.angular_step);
        iterations.push((r, v, hull.cycle_count()));
        if v.reject {
            r_big = r;
        } else {
            r_m = r;
        }
    }
    Ok(SelectorTrace {
        iterations,
        outcome: SelectorOutcome::Bisection,
        r_hat: r_m,
    })
}

/// Spanning-tree baseline: the longest edge of the Euclidean minimum
/// spanning tree of the sample.
pub fn select_mm(cloud: &PointCloud) -> Result<f64> {
    if cloud.len() < 2 {
        return Err(Error::TooFewPoints {
            need: 2,
            got: cloud.len(),
        });
    }
    Ok(euclidean_mst(cloud)?.max_weight())
}

/// Final support estimate: run the bisection and build the hull at
/// nu * r_hat, shrunk to guard against oversmoothing. If the selector
/// fell back to the convex hull, the hull is built at the diameter.
pub fn estimate_support(cloud: &PointCloud, cfg: &SelectorConfig) -> Result<RConvexHull> {
    let trace = select_rs(cloud, cfg)?;
    let r = match trace.outcome {
        SelectorOutcome::ConvexHullFallback => cloud.diameter(),
        _ => cfg.nu * trace.r_hat,
    };
    RConvexHull::build(cloud, r)
}

// Bisection core, isolated so the update rule is testable against a
// scripted verdict sequence.
#[cfg(test)]
fn bisect_core<F: FnMut(f64) -> bool>(
    mut r_m: f64,
    mut r_big: f64,
    iters: u32,
    mut accept: F,
) -> f64 {
    for _ in 0..iters {
        let r = 0.5 * (r_m + r_big);
        if accept(r) {
            r_m = r;
        } else {
            r_big = r;
        }
    }
    r_m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring_cloud(n: usize, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::with_capacity(n);
        while pts.len() < n {
            let x: f64 = rng.gen_range(0.15..0.85);
            let y: f64 = rng.gen_range(0.15..0.85);
            let d2 = (x - 0.5f64).powi(2) + (y - 0.5f64).powi(2);
            if (0.0225..=0.1225).contains(&d2) {
                pts.push(Point2::new(x, y));
            }
        }
        PointCloud::new(pts, "ring").unwrap()
    }

    fn square_cloud(n: usize, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = (0..n)
            .map(|_| Point2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)))
            .collect();
        PointCloud::new(pts, "square").unwrap()
    }

    #[test]
    fn scripted_bisection_matches_hand_simulation() {
        // Verdicts accept, reject, accept, reject on [0, 1]:
        // 0.5 -> r_m, 0.75 -> r_M, 0.625 -> r_m, 0.6875 -> r_M.
        let script = [true, false, true, false];
        let mut k = 0;
        let got = bisect_core(0.0, 1.0, 4, |_| {
            k += 1;
            script[k - 1]
        });
        assert_eq!(got, 0.625);
    }

    #[test]
    fn bracket_width_halves_each_iteration() {
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        let iters = 12;
        let r = bisect_core(lo, hi, iters, |r| {
            // Acceptance region (0, 0.3): track the bracket manually.
            let ok = r < 0.3;
            if ok {
                lo = r;
            } else {
                hi = r;
            }
            ok
        });
        assert!((hi - lo - 1.0 / f64::from(1 << iters)).abs() < 1e-15);
        assert_eq!(r, lo);
        assert!((r - 0.3).abs() < 1.0 / f64::from(1 << iters));
    }

    #[test]
    fn config_validation() {
        let cloud = ring_cloud(100, 1);
        let ok = SelectorConfig::defaults_for(&cloud);
        assert!(ok.validate().is_ok());
        for bad in [
            SelectorConfig { alpha: 0.0, ..ok },
            SelectorConfig { r_min: 0.0, ..ok },
            SelectorConfig { r_min: ok.r_max, ..ok },
            SelectorConfig { nu: 1.0, ..ok },
            SelectorConfig { max_iterations: 0, ..ok },
            SelectorConfig { max_cycles: 0, ..ok },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn ring_selects_near_the_hole_radius() {
        // The annulus has inner radius 0.15; the largest radius the
        // test accepts sits near it (oversmoothing past it fills the
        // hole and gets caught).
        let cloud = ring_cloud(1500, 21);
        let mut cfg = SelectorConfig::defaults_for(&cloud);
        cfg.alpha = 1e-3;
        let trace = select_rs(&cloud, &cfg).unwrap();
        assert_eq!(trace.outcome, SelectorOutcome::Bisection);
        assert!(
            (0.10..=0.22).contains(&trace.r_hat),
            "r_hat = {}",
            trace.r_hat
        );
        assert!(trace.iterations.len() <= cfg.max_iterations as usize + 2);
        // Bracket invariant: the lower probe accepted, the upper
        // rejected, every recorded verdict consistent with its side.
        assert!(trace.iterations[0].1.reject, "upper bracket");
        assert!(!trace.iterations[1].1.reject, "lower bracket");
    }

    #[test]
    fn convex_support_falls_back_to_convex_hull() {
        let cloud = square_cloud(800, 33);
        let cfg = SelectorConfig::defaults_for(&cloud);
        let trace = select_rs(&cloud, &cfg).unwrap();
        assert_eq!(trace.outcome, SelectorOutcome::ConvexHullFallback);
        assert_eq!(trace.iterations.len(), 1);
        assert_eq!(trace.r_hat, cfg.r_max);
    }

    #[test]
    fn mm_baseline_basics() {
        let two = PointCloud::new(
            vec![Point2::new(0.0, 0.0), Point2::new(0.3, 0.0)],
            "two",
        )
        .unwrap();
        assert!((select_mm(&two).unwrap() - 0.3).abs() < 1e-15);
        let one = PointCloud::new(vec![Point2::new(0.0, 0.0)], "one").unwrap();
        assert!(select_mm(&one).is_err());
    }

    #[test]
    fn mm_is_permutation_invariant() {
        let cloud = ring_cloud(200, 8);
        let base = select_mm(&cloud).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut pts = cloud.points().to_vec();
        for _ in 0..3 {
            pts.shuffle(&mut rng);
            let shuffled = PointCloud::new(pts.clone(), "perm").unwrap();
            assert_eq!(select_mm(&shuffled).unwrap(), base);
        }
    }

    #[test]
    fn support_estimate_shrinks_and_nests() {
        let cloud = ring_cloud(800, 55);
        let mut cfg = SelectorConfig::defaults_for(&cloud);
        cfg.alpha = 1e-2;
        let trace = select_rs(&cloud, &cfg).unwrap();
        let est = estimate_support(&cloud, &cfg).unwrap();
        assert!((est.radius() - cfg.nu * trace.r_hat).abs() < 1e-15);
        // Nesting: everything in the shrunk hull is in the r_hat hull.
        let big = RConvexHull::build(&cloud, trace.r_hat).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = Point2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            if est.contains(p) {
                assert!(big.contains(p), "nesting violated at ({}, {})", p.x, p.y);
            }
        }
    }
}
