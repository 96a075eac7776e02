use super::{delaunay, PointCloud};
#[cfg(test)]
use super::Point2;
use crate::error::{Error, Result};

/// A weighted undirected edge between two cloud indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// An edge list; for MSTs it has exactly n-1 edges and is acyclic.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub edges: Vec<Edge>,
}

impl EdgeList {
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).fold(0.0, f64::max)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Euclidean minimum spanning tree. The Delaunay triangulation contains
/// the planar EMST, so Kruskal runs on Delaunay edges; for n < 3 or
/// collinear clouds it falls back to the complete graph.
pub fn euclidean_mst(cloud: &PointCloud) -> Result<EdgeList> {
    let pts = cloud.points();
    let n = pts.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }
    let mut candidates: Vec<Edge> = match delaunay(cloud) {
        Ok(tri) => tri
            .edges
            .iter()
            .map(|e| Edge {
                a: e.a,
                b: e.b,
                weight: pts[e.a].dist(&pts[e.b]),
            })
            .collect(),
        Err(Error::TooFewPoints { .. }) | Err(Error::AllCollinear) => {
            let mut all = Vec::with_capacity(n * (n - 1) / 2);
            for a in 0..n {
                for b in (a + 1)..n {
                    all.push(Edge {
                        a,
                        b,
                        weight: pts[a].dist(&pts[b]),
                    });
                }
            }
            all
        }
        Err(e) => return Err(e),
    };
    candidates.sort_by(|x, y| x.weight.total_cmp(&y.weight).then(x.a.cmp(&y.a)).then(x.b.cmp(&y.b)));

    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    for e in candidates {
        if uf.union(e.a, e.b) {
            edges.push(e);
            if edges.len() == n - 1 {
                break;
            }
        }
    }
    debug_assert_eq!(edges.len(), n - 1);
    Ok(EdgeList { edges })
}
