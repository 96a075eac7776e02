use super::{BBox, Point2};

/// Uniform bucket grid for nearest-neighbor and range queries over a
/// fixed point set. Cell size is chosen so buckets hold O(1) points for
/// roughly uniform data.
#[derive(Debug, Clone)]
pub struct NeighborGrid {
    points: Vec<Point2>,
    cells: Vec<Vec<u32>>,
    nx: usize,
    ny: usize,
    cell: f64,
    origin: (f64, f64),
}

impl NeighborGrid {
    pub fn new(points: &[Point2]) -> NeighborGrid {
        let n = points.len().max(1);
        let bbox = BBox::of(points);
        let (w, h) = if points.is_empty() {
            (1.0, 1.0)
        } else {
            (bbox.width().max(1e-300), bbox.height().max(1e-300))
        };
        // Aim for ~1 point per cell.
        let target = (n as f64).sqrt().ceil() as usize;
        let cell = ((w * h / n as f64).sqrt()).max(f64::MIN_POSITIVE);
        let nx = ((w / cell).ceil() as usize).clamp(1, 4 * target.max(1));
        let ny = ((h / cell).ceil() as usize).clamp(1, 4 * target.max(1));
        let cell_x = w / nx as f64;
        let cell_y = h / ny as f64;
        let cell = cell_x.max(cell_y);
        let origin = if points.is_empty() {
            (0.0, 0.0)
        } else {
            (bbox.min_x, bbox.min_y)
        };
        let mut cells = vec![Vec::new(); nx * ny];
        for (i, p) in points.iter().enumerate() {
            let (cx, cy) = Self::cell_of(p, origin, cell, nx, ny);
            cells[cy * nx + cx].push(i as u32);
        }
        NeighborGrid {
            points: points.to_vec(),
            cells,
            nx,
            ny,
            cell,
            origin,
        }
    }

    fn cell_of(p: &Point2, origin: (f64, f64), cell: f64, nx: usize, ny: usize) -> (usize, usize) {
        let cx = (((p.x - origin.0) / cell).floor() as i64).clamp(0, nx as i64 - 1) as usize;
        let cy = (((p.y - origin.1) / cell).floor() as i64).clamp(0, ny as i64 - 1) as usize;
        (cx, cy)
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

    /// Index and distance of the nearest stored point.
    pub fn nearest(&self, q: Point2) -> Option<(usize, f64)> {
        self.nearest_excluding(q, usize::MAX)
    }

    /// Nearest stored point whose index differs from `exclude`.
    pub fn nearest_excluding(&self, q: Point2, exclude: usize) -> Option<(usize, f64)> {
        if self.points.is_empty() || (self.points.len() == 1 && exclude == 0) {
            return None;
        }
        let (qx, qy) = Self::cell_of(&q, self.origin, self.cell, self.nx, self.ny);
        let mut best: Option<(usize, f64)> = None;
        let max_ring = self.nx.max(self.ny);
        for ring in 0..=max_ring {
            // Once a candidate is found, one extra ring guarantees correctness:
            // anything outside is at least (ring-1)*cell away.
            if let Some((_, d)) = best {
                if (ring as f64 - 1.0) * self.cell > d {
                    break;
                }
            }
            let mut any_cell = false;
            for (cx, cy) in ring_cells(qx, qy, ring, self.nx, self.ny) {
                any_cell = true;
                for &i in &self.cells[cy * self.nx + cx] {
                    let i = i as usize;
                    if i == exclude {
                        continue;
                    }
                    let d = self.points[i].dist(&q);
                    if best.map_or(true, |(_, bd)| d < bd) {
                        best = Some((i, d));
                    }
                }
            }
            if !any_cell && best.is_some() {
                break;
            }
        }
        best
    }

    /// Indices of all stored points within `radius` of `q` (closed disc).
    pub fn within(&self, q: Point2, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_within(q, radius, |i| out.push(i));
        out
    }

    /// Visit indices of points within `radius` of `q` without allocating.
    pub fn for_each_within<F: FnMut(usize)>(&self, q: Point2, radius: f64, mut f: F) {
        if self.points.is_empty() {
            return;
        }
        let r2 = radius * radius;
        let cx0 = (((q.x - radius - self.origin.0) / self.cell).floor() as i64).clamp(0, self.nx as i64 - 1) as usize;
        let cx1 = (((q.x + radius - self.origin.0) / self.cell).floor() as i64).clamp(0, self.nx as i64 - 1) as usize;
        let cy0 = (((q.y - radius - self.origin.1) / self.cell).floor() as i64).clamp(0, self.ny as i64 - 1) as usize;
        let cy1 = (((q.y + radius - self.origin.1) / self.cell).floor() as i64).clamp(0, self.ny as i64 - 1) as usize;
        for cy in cy0..=cy1 {
            for cx in cx0..=cx1 {
                for &i in &self.cells[cy * self.nx + cx] {
                    if self.points[i as usize].dist2(&q) <= r2 {
                        f(i as usize);
                    }
                }
            }
        }
    }
}

fn ring_cells(
    cx: usize,
    cy: usize,
    ring: usize,
    nx: usize,
    ny: usize,
) -> impl Iterator<Item = (usize, usize)> {
    let (cx, cy, ring) = (cx as i64, cy as i64, ring as i64);
    let (nxi, nyi) = (nx as i64, ny as i64);
    let mut out = Vec::new();
    if ring == 0 {
        out.push((cx, cy));
    } else {
        for dx in -ring..=ring {
            out.push((cx + dx, cy - ring));
            out.push((cx + dx, cy + ring));
        }
        for dy in (-ring + 1)..ring {
            out.push((cx - ring, cy + dy));
            out.push((cx + ring, cy + dy));
        }
    }
    out.into_iter()
        .filter(move |&(x, y)| x >= 0 && y >= 0 && x < nxi && y < nyi)
        .map(|(x, y)| (x as usize, y as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn nearest_matches_exhaustive_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Point2> = (0..100)
            .map(|_| Point2::new(rng.gen::<f64>(), rng.gen::<f64>()))
            .collect();
        let grid = NeighborGrid::new(&pts);
        for _ in 0..100 {
            let q = Point2::new(rng.gen::<f64>() * 1.4 - 0.2, rng.gen::<f64>() * 1.4 - 0.2);
            let (gi, gd) = grid.nearest(q).unwrap();
            let (bi, bd) = pts
                .iter()
                .enumerate()
                .map(|(i, p)| (i, p.dist(&q)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!((gd - bd).abs() < 1e-12, "grid {gi}:{gd} vs scan {bi}:{bd}");
        }
    }

    #[test]
    fn within_matches_exhaustive_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let pts: Vec<Point2> = (0..200)
            .map(|_| Point2::new(rng.gen::<f64>(), rng.gen::<f64>()))
            .collect();
        let grid = NeighborGrid::new(&pts);
        for _ in 0..50 {
            let q = Point2::new(rng.gen::<f64>(), rng.gen::<f64>());
            let r = rng.gen::<f64>() * 0.3;
            let mut got = grid.within(q, r);
            got.sort_unstable();
            let mut want: Vec<usize> = pts
                .iter()
                .enumerate()
                .filter(|(_, p)| p.dist(&q) <= r)
                .map(|(i, _)| i)
                .collect();
            want.sort_unstable();
            assert_eq!(got, want);
        }
    }
}
