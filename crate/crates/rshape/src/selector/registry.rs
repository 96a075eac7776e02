use super::{select_mm, select_rs, SelectorConfig, SelectorOutcome, SelectorTrace};
use crate::error::{Error, Result};
use crate::geom::PointCloud;

/// Result of running one selector: the chosen radius, plus the full
/// bisection trace when the method produces one.
#[derive(Debug, Clone)]
pub struct Selection {
    pub method: &'static str,
    pub r_hat: f64,
    pub trace: Option<SelectorTrace>,
}

impl Selection {
    pub fn is_convex_fallback(&self) -> bool {
        matches!(
            self.trace.as_ref().map(|t| t.outcome),
            Some(SelectorOutcome::ConvexHullFallback)
        )
    }
}

/// A smoothing-radius selection strategy, addressable by name so the
/// CLI and the study driver can switch methods from configuration.
pub trait SmoothingSelector: Sync {
    fn name(&self) -> &'static str;
    fn select(&self, cloud: &PointCloud, cfg: &SelectorConfig) -> Result<Selection>;
}

struct RsSelector;

impl SmoothingSelector for RsSelector {
    fn name(&self) -> &'static str {
        "rs"
    }

    fn select(&self, cloud: &PointCloud, cfg: &SelectorConfig) -> Result<Selection> {
        let trace = select_rs(cloud, cfg)?;
        Ok(Selection {
            method: self.name(),
            r_hat: trace.r_hat,
            trace: Some(trace),
        })
    }
}

struct MmSelector;

impl SmoothingSelector for MmSelector {
    fn name(&self) -> &'static str {
        "mm"
    }

    fn select(&self, cloud: &PointCloud, _cfg: &SelectorConfig) -> Result<Selection> {
        Ok(Selection {
            method: self.name(),
            r_hat: select_mm(cloud)?,
            trace: None,
        })
    }
}

const REGISTRY: &[&dyn SmoothingSelector] = &[&RsSelector, &MmSelector];

pub fn selector_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|s| s.name()).collect()
}

pub fn selector_by_name(name: &str) -> Result<&'static dyn SmoothingSelector> {
    REGISTRY
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .ok_or_else(|| {
            Error::InvalidConfig(format!(
                "unknown selector {:?}; available: {}",
                name,
                selector_names().join(", ")
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn names_are_unique_and_resolvable() {
        let names = selector_names();
        assert_eq!(names, vec!["rs", "mm"]);
        for n in names {
            assert_eq!(selector_by_name(n).unwrap().name(), n);
        }
        assert!(selector_by_name("nope").is_err());
    }

    #[test]
    fn mm_through_the_registry_matches_direct_call() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts = (0..50)
            .map(|_| Point2::new(rng.gen::<f64>(), rng.gen::<f64>()))
            .collect();
        let cloud = PointCloud::new(pts, "t").unwrap();
        let cfg = SelectorConfig::defaults_for(&cloud);
        let sel = selector_by_name("mm").unwrap().select(&cloud, &cfg).unwrap();
        assert_eq!(sel.r_hat, select_mm(&cloud).unwrap());
        assert!(sel.trace.is_none());
        assert!(!sel.is_convex_fallback());
    }
}
