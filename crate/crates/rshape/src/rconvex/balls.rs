use std::f64::consts::TAU;

use super::arc::ArcSegment;
use crate::geom::{NeighborGrid, Point2};

/// One piece of the boundary of a union of equal-radius discs, tagged
/// with the index of the disc it lies on.
#[derive(Debug, Clone, Copy)]
pub struct DilationArc {
    pub owner: usize,
    pub arc: ArcSegment,
}

/// Boundary of the union of open discs of radius `rho` centered at the
/// points. For each disc, the directions covered by a neighbouring disc
/// within 2·rho are removed; what survives is exposed boundary.
pub fn union_boundary(points: &[Point2], grid: &NeighborGrid, rho: f64) -> Vec<DilationArc> {
    let mut out = Vec::new();
    let mut covered: Vec<(f64, f64)> = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        covered.clear();
        grid.for_each_within(p, 2.0 * rho, |j| {
            if j == i {
                return;
            }
            let q = points[j];
            let d = p.dist(&q);
            if d >= 2.0 * rho || d == 0.0 {
                return;
            }
            let theta = (q.y - p.y).atan2(q.x - p.x);
            let half = (d / (2.0 * rho)).clamp(-1.0, 1.0).acos();
            push_interval(&mut covered, theta - half, theta + half);
        });
        for (s, e) in complement(&mut covered) {
            out.push(DilationArc {
                owner: i,
                arc: ArcSegment {
                    center: p,
                    radius: rho,
                    start_angle: s,
                    sweep: e - s,
                },
            });
        }
    }
    out
}

// Record [lo, hi], splitting at the 2π wrap so every stored interval
// satisfies 0 <= lo < hi <= 2π.
fn push_interval(acc: &mut Vec<(f64, f64)>, lo: f64, hi: f64) {
    let width = hi - lo;
    debug_assert!(width >= 0.0 && width <= TAU);
    let lo = lo.rem_euclid(TAU);
    let hi = lo + width;
    if hi <= TAU {
        acc.push((lo, hi));
    } else {
        acc.push((lo, TAU));
        acc.push((0.0, hi - TAU));
    }
}

// Complement of the union of intervals within [0, 2π). An empty input
// yields the full circle.
fn complement(covered: &mut Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    if covered.is_empty() {
        return vec![(0.0, TAU)];
    }
    covered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut gaps = Vec::new();
    let mut reach = 0.0f64;
    for &(s, e) in covered.iter() {
        if s > reach {
            gaps.push((reach, s));
        }
        reach = reach.max(e);
    }
    if reach < TAU {
        gaps.push((reach, TAU));
    }
    // A gap ending at 2π and one starting at 0 are the same gap.
    if gaps.len() >= 2 {
        let first = gaps[0];
        let last = *gaps.last().unwrap();
        if first.0 == 0.0 && last.1 == TAU {
            gaps[0] = (last.0 - TAU, first.1);
            gaps.pop();
        }
    }
    gaps
}
