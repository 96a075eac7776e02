use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{Point2, PointCloud};
use crate::sim::SupportModel;

// Stall detection kicks in only after enough proposals to judge the
// acceptance rate; models with area above 1e-3 of the box never trip it.
const STALL_CHECK_AFTER: u64 = 100_000;
const STALL_RATE: f64 = 1e-3;

/// Uniform sample on the model by rejection from its bounding box.
/// Deterministic for a fixed seed.
pub fn sample_uniform(model: &SupportModel, n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::TooFewPoints { need: 1, got: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = model.bbox();
    let mut pts = Vec::with_capacity(n);
    let mut proposals: u64 = 0;
    while pts.len() < n {
        let p = Point2::new(
            rng.gen_range(b.min_x..b.max_x),
            rng.gen_range(b.min_y..b.max_y),
        );
        proposals += 1;
        if model.contains(p) {
            pts.push(p);
        } else if proposals >= STALL_CHECK_AFTER {
            let rate = pts.len() as f64 / proposals as f64;
            if rate < STALL_RATE {
                return Err(Error::RejectionStall { rate, proposals });
            }
        }
    }
    PointCloud::new(pts, format!("{}:{}:{}", model.name(), n, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::make_model;

    #[test]
    fn samples_land_in_the_model() {
        for name in crate::sim::model_names() {
            let m = make_model(name).unwrap();
            let cloud = sample_uniform(&m, 400, 7).unwrap();
            assert_eq!(cloud.len(), 400);
            assert!(cloud.points().iter().all(|&p| m.contains(p)));
        }
    }

    #[test]
    fn same_seed_same_cloud() {
        let m = make_model("ring").unwrap();
        let a = sample_uniform(&m, 300, 42).unwrap();
        let b = sample_uniform(&m, 300, 42).unwrap();
        assert_eq!(a.points(), b.points());
        let c = sample_uniform(&m, 300, 43).unwrap();
        assert_ne!(a.points(), c.points());
    }

    // Acceptance rate of the rejection sampler is binomial with success
    // probability true_area / box_area; check the observed rate.
    #[test]
    fn acceptance_rate_matches_area_ratio() {
        let m = make_model("ring").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let trials: u64 = 100_000;
        let mut hits = 0u64;
        for _ in 0..trials {
            let p = Point2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            if m.contains(p) {
                hits += 1;
            }
        }
        let p = m.true_area(); // box area is 1
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let observed = hits as f64 / trials as f64;
        assert!(
            (observed - p).abs() < 3.0 * sigma,
            "observed {observed}, expected {p} +- {sigma}"
        );
    }
}
