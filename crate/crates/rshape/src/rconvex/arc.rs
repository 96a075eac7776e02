use std::f64::consts::{PI, TAU};

use crate::geom::Point2;

/// A circular arc: starts at `start_angle` and sweeps by `sweep`
/// radians around `center` (positive sweep is counterclockwise). A full
/// circle has |sweep| = 2π.
#[derive(Debug, Clone, Copy)]
pub struct ArcSegment {
    pub center: Point2,
    pub radius: f64,
    pub start_angle: f64,
    pub sweep: f64,
}

/// Normalize an angle into [0, 2π).
pub fn norm_angle(a: f64) -> f64 {
    let a = a.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Wrap an angle difference into (-π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let a = a.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

impl ArcSegment {
    pub fn full_circle(center: Point2, radius: f64) -> ArcSegment {
        ArcSegment {
            center,
            radius,
            start_angle: 0.0,
            sweep: TAU,
        }
    }

    pub fn end_angle(&self) -> f64 {
        self.start_angle + self.sweep
    }

    pub fn point_at_angle(&self, a: f64) -> Point2 {
        Point2::new(
            self.center.x + self.radius * a.cos(),
            self.center.y + self.radius * a.sin(),
        )
    }

    /// Point at parameter t in [0, 1] along the sweep.
    pub fn point_at(&self, t: f64) -> Point2 {
        self.point_at_angle(self.start_angle + t * self.sweep)
    }

    pub fn start_point(&self) -> Point2 {
        self.point_at_angle(self.start_angle)
    }

    pub fn end_point(&self) -> Point2 {
        self.point_at_angle(self.end_angle())
    }

    pub fn arc_length(&self) -> f64 {
        self.radius * self.sweep.abs()
    }

    /// Whether the direction angle `a` falls within the swept interval.
    pub fn covers_angle(&self, a: f64) -> bool {
        if self.sweep.abs() >= TAU - 1e-12 {
            return true;
        }
        let (lo, span) = if self.sweep >= 0.0 {
            (self.start_angle, self.sweep)
        } else {
            (self.end_angle(), -self.sweep)
        };
        let rel = (a - lo).rem_euclid(TAU);
        rel <= span
    }

    /// Euclidean distance from `p` to the arc.
    pub fn distance_to(&self, p: Point2) -> f64 {
        let d = p.dist(&self.center);
        let a = (p.y - self.center.y).atan2(p.x - self.center.x);
        if d > 0.0 && self.covers_angle(a) {
            (d - self.radius).abs()
        } else if d == 0.0 && self.covers_angle(0.0) {
            self.radius
        } else {
            let ds = p.dist(&self.start_point());
            let de = p.dist(&self.end_point());
            ds.min(de)
        }
    }

    /// Evenly spaced points along the arc at most `step` radians apart,
    /// placed at sub-interval midpoints so endpoints are avoided.
    pub fn sample_midpoints(&self, step: f64) -> Vec<Point2> {
        let m = (self.sweep.abs() / step).ceil().max(1.0) as usize;
        (0..m)
            .map(|k| self.point_at((k as f64 + 0.5) / m as f64))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_on_and_off_arc() {
        // Quarter arc on the unit circle, first quadrant.
        let arc = ArcSegment {
            center: Point2::new(0.0, 0.0),
            radius: 1.0,
            start_angle: 0.0,
            sweep: PI / 2.0,
        };
        // Radially aligned with the arc.
        assert!((arc.distance_to(Point2::new(2.0f64.sqrt(), 2.0f64.sqrt())) - 1.0).abs() < 1e-12);
        // On the arc.
        assert!(arc.distance_to(Point2::new(0.0, 1.0)) < 1e-12);
        // Behind the covered sector: nearest is an endpoint.
        let p = Point2::new(-1.0, -1.0);
        let want = p.dist(&Point2::new(1.0, 0.0)).min(p.dist(&Point2::new(0.0, 1.0)));
        assert!((arc.distance_to(p) - want).abs() < 1e-12);
    }

    #[test]
    fn clockwise_arcs_cover_the_same_angles() {
        let ccw = ArcSegment {
            center: Point2::new(0.0, 0.0),
            radius: 2.0,
            start_angle: 0.3,
            sweep: 1.1,
        };
        let cw = ArcSegment {
            center: ccw.center,
            radius: ccw.radius,
            start_angle: 1.4,
            sweep: -1.1,
        };
        for k in 0..100 {
            let a = -0.5 + 2.5 * k as f64 / 100.0;
            assert_eq!(ccw.covers_angle(a), cw.covers_angle(a), "angle {a}");
        }
    }

    #[test]
    fn midpoint_samples_lie_on_arc() {
        let arc = ArcSegment {
            center: Point2::new(1.0, -2.0),
            radius: 0.7,
            start_angle: 2.0,
            sweep: -1.5,
        };
        for p in arc.sample_midpoints(0.01) {
            assert!((p.dist(&arc.center) - 0.7).abs() < 1e-12);
            assert!(arc.distance_to(p) < 1e-12);
        }
    }
}
