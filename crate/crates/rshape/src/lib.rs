//! Estimation of the shape of a planar point cloud by r-convex hulls,
//! with a data-driven choice of the smoothing radius r.

pub mod error;
pub mod geom;
pub mod io;
pub mod metrics;
pub mod rconvex;
pub mod selector;
pub mod sim;
pub mod spacing;

pub use error::{Error, Result};
