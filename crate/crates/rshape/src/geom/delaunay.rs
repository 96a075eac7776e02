use spade::{DelaunayTriangulation, HasPosition, Point2 as SpadePoint, Triangulation as _};

use super::{Point2, PointCloud};
use crate::error::{Error, Result};

struct Site {
    pos: SpadePoint<f64>,
    index: usize,
}

impl HasPosition for Site {
    type Scalar = f64;
    fn position(&self) -> SpadePoint<f64> {
        self.pos
    }
}

/// Delaunay triangulation of a point cloud, with per-triangle
/// circumcircle data and edge-to-triangle adjacency.
#[derive(Debug, Clone)]
pub struct Triangulation {
    /// Copy of the triangulated points, in cloud order.
    pub points: Vec<Point2>,
    /// Vertex-index triples, counterclockwise.
    pub triangles: Vec<[usize; 3]>,
    pub circumcenters: Vec<Point2>,
    pub circumradii: Vec<f64>,
    /// Unique undirected edges (a < b) with the triangles on each side.
    pub edges: Vec<DelaunayEdge>,
}

/// An undirected Delaunay edge with its adjacent triangles. `left` is
/// the triangle on the counterclockwise side of a -> b.
#[derive(Debug, Clone, Copy)]
pub struct DelaunayEdge {
    pub a: usize,
    pub b: usize,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

impl Triangulation {
    pub fn num_vertices(&self) -> usize {
        self.points.len()
    }
}

/// Build the Delaunay triangulation. Requires at least 3 points, not
/// all collinear. Cocircular degeneracies are resolved by spade's
/// insertion-order rule; input order is fixed by the cloud, so results
/// are deterministic.
pub fn delaunay(cloud: &PointCloud) -> Result<Triangulation> {
    let pts = cloud.points();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints {
            need: 3,
            got: pts.len(),
        });
    }
    let mut tri: DelaunayTriangulation<Site> = DelaunayTriangulation::new();
    for (index, p) in pts.iter().enumerate() {
        match tri.insert(Site {
            pos: SpadePoint::new(p.x, p.y),
            index,
        }) {
            Ok(_) => {}
            Err(_) => return Err(Error::NonFinite(format!("point #{index}"))),
        }
    }
    if tri.num_inner_faces() == 0 {
        return Err(Error::AllCollinear);
    }

    let mut triangles = Vec::with_capacity(tri.num_inner_faces());
    let mut circumcenters = Vec::with_capacity(tri.num_inner_faces());
    let mut circumradii = Vec::with_capacity(tri.num_inner_faces());
    // spade face handles are contiguous; map face index -> triangle slot.
    let mut face_slot = vec![usize::MAX; tri.num_all_faces()];
    for face in tri.inner_faces() {
        let vs = face.vertices();
        let t = [
            vs[0].data().index,
            vs[1].data().index,
            vs[2].data().index,
        ];
        face_slot[face.index()] = triangles.len();
        let (cc, r) = circumcircle(pts[t[0]], pts[t[1]], pts[t[2]]);
        triangles.push(t);
        circumcenters.push(cc);
        circumradii.push(r);
    }

    let mut edges = Vec::with_capacity(tri.num_undirected_edges());
    for edge in tri.undirected_edges() {
        let [v0, v1] = edge.vertices();
        let (a, b) = (v0.data().index, v1.data().index);
        // Orient so stored direction is a -> b with a < b.
        let directed = if a < b { edge.as_directed() } else { edge.as_directed().rev() };
        let (a, b) = (a.min(b), a.max(b));
        let left = directed
            .face()
            .as_inner()
            .map(|f| face_slot[f.index()]);
        let right = directed
            .rev()
            .face()
            .as_inner()
            .map(|f| face_slot[f.index()]);
        edges.push(DelaunayEdge { a, b, left, right });
    }

    Ok(Triangulation {
        points: pts.to_vec(),
        triangles,
        circumcenters,
        circumradii,
        edges,
    })
}

/// Circumcenter and circumradius of a nondegenerate triangle.
pub fn circumcircle(a: Point2, b: Point2, c: Point2) -> (Point2, f64) {
    let d = 2.0 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
    let b2 = (b.x - a.x) * (b.x + a.x) + (b.y - a.y) * (b.y + a.y);
    let c2 = (c.x - a.x) * (c.x + a.x) + (c.y - a.y) * (c.y + a.y);
    let ux = (b2 * (c.y - a.y) - c2 * (b.y - a.y)) / d;
    let uy = (c2 * (b.x - a.x) - b2 * (c.x - a.x)) / d;
    let center = Point2::new(ux, uy);
    (center, center.dist(&a))
}
