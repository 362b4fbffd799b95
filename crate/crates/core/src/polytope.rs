use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;

use crate::arith::{self, dot};
use crate::error::Result;
use crate::hull::Hull;
use crate::point::{HalfSpace, LatticePoint};

/// A full-dimensional lattice polytope given by its vertices.
///
/// Facets, volume and the boundary triangulation are computed at construction.
/// Lattice points are computed on first use and cached.
#[derive(Clone)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<LatticePoint>,
    facets: Vec<HalfSpace>,
    hull: Hull,
    points: OnceLock<Vec<LatticePoint>>,
    interior: OnceLock<Vec<LatticePoint>>,
    projections: OnceLock<Vec<Vec<HalfSpace>>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, o: &Self) -> bool {
        self.vertices == o.vertices
    }
}
impl Eq for LatticePolytope {}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{:?}", self.vertices)
    }
}

/// Normalized volume of a `d`-simplex given by `d+1` points.
pub fn simplex_volume(points: &[LatticePoint]) -> i128 {
    let d = points[0].dim();
    assert_eq!(points.len(), d + 1, "a {d}-simplex needs {} points", d + 1);
    let rows: Vec<Vec<i64>> = points[1..].iter().map(|p| p.sub(&points[0]).0).collect();
    arith::det(&rows).abs()
}

/// Convex hull of a full-dimensional point set.
pub fn convex_hull(points: &[LatticePoint]) -> Result<LatticePolytope> {
    LatticePolytope::new(points)
}

impl LatticePolytope {
    pub fn new(points: &[LatticePoint]) -> Result<Self> {
        Ok(Self::from_hull(Hull::new(points)?))
    }

    pub fn from_hull(hull: Hull) -> Self {
        LatticePolytope {
            dim: hull.dim(),
            vertices: hull.vertices(),
            facets: hull.facets(),
            hull,
            points: OnceLock::new(),
            interior: OnceLock::new(),
            projections: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    /// Normalized volume `d! vol(P)`.
    pub fn volume(&self) -> u64 {
        self.hull.volume() as u64
    }

    pub fn hull(&self) -> &Hull {
        &self.hull
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim + 1
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|h| h.contains(x))
    }

    pub fn contains_strictly(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|h| h.slack(x) > 0)
    }

    /// The polytope `conv(P ∪ {p})`, reusing this polytope's hull.
    pub fn extend(&self, p: &LatticePoint) -> LatticePolytope {
        let mut h = self.hull.clone();
        h.insert(p);
        Self::from_hull(h)
    }

    pub fn dilate(&self, t: i64) -> LatticePolytope {
        let v: Vec<_> = self.vertices.iter().map(|p| p.scale(t)).collect();
        Self::new(&v).expect("dilation keeps full dimension")
    }

    pub fn translate(&self, by: &LatticePoint) -> LatticePolytope {
        let v: Vec<_> = self.vertices.iter().map(|p| p.add(by)).collect();
        Self::new(&v).expect("translation keeps full dimension")
    }

    /// All lattice points of `P`, lexicographically.
    pub fn lattice_points(&self) -> &[LatticePoint] {
        self.points.get_or_init(|| self.collect_points(1, false))
    }

    /// Lattice points of the interior of `P`.
    pub fn interior_points(&self) -> &[LatticePoint] {
        self.interior.get_or_init(|| self.collect_points(1, true))
    }

    pub fn num_points(&self) -> usize {
        self.lattice_points().len()
    }

    pub fn num_interior(&self) -> usize {
        self.interior_points().len()
    }

    /// Lattice points of `tP` (or its interior).
    pub fn dilated_points(&self, t: i64, strict: bool) -> Vec<LatticePoint> {
        self.collect_points(t, strict)
    }

    /// `|tP ∩ Z^d|` (or the interior count) without materializing points.
    pub fn count_dilated(&self, t: i64, strict: bool) -> u64 {
        let mut n = 0u64;
        self.scan(t, strict, &mut |_| n += 1);
        n
    }

    fn collect_points(&self, t: i64, strict: bool) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        self.scan(t, strict, &mut |x| out.push(LatticePoint(x.to_vec())));
        out
    }

    /// Facets of the projections onto the first `k` coordinates, `k = 1..d`.
    fn projections(&self) -> &[Vec<HalfSpace>] {
        self.projections.get_or_init(|| {
            let mut out = Vec::with_capacity(self.dim);
            for k in 1..self.dim {
                let mut pr: Vec<LatticePoint> =
                    self.vertices.iter().map(|v| LatticePoint(v.0[..k].to_vec())).collect();
                pr.sort();
                pr.dedup();
                out.push(Hull::new(&pr).expect("projection of a full-dimensional polytope").facets());
            }
            out.push(self.facets.clone());
            out
        })
    }

    /// Visits the lattice points of `tP` in lexicographic order. Each coordinate
    /// range is cut out by the facets of the projection onto the coordinates
    /// fixed so far, so no dead branches are explored.
    pub fn scan(&self, t: i64, strict: bool, f: &mut dyn FnMut(&[i64])) {
        assert!(t >= 1, "dilation factor must be positive");
        let proj = self.projections();
        let mut x = vec![0i64; self.dim];
        scan_level(proj, 0, t as i128, strict, &mut x, f);
    }

    /// A triangulation of `P` using lattice points of `P` as vertices:
    /// boundary cells not containing the first vertex, coned from it.
    pub fn triangulation(&self) -> Vec<Vec<LatticePoint>> {
        let apex = &self.vertices[0];
        self.hull
            .boundary_cells()
            .filter(|(_, h)| h.slack(&apex.0) > 0)
            .map(|(cell, _)| {
                let mut s: Vec<LatticePoint> = cell.into_iter().cloned().collect();
                s.insert(0, apex.clone());
                s
            })
            .collect()
    }

    /// Vertex indices on each facet, parallel to `facets()`.
    pub fn facet_vertices(&self) -> Vec<Vec<usize>> {
        self.facets
            .iter()
            .map(|h| (0..self.vertices.len()).filter(|&i| h.slack(&self.vertices[i].0) == 0).collect())
            .collect()
    }

    /// Facet indices through each vertex.
    pub fn vertex_facets(&self) -> Vec<Vec<usize>> {
        self.vertices
            .iter()
            .map(|v| (0..self.facets.len()).filter(|&j| self.facets[j].slack(&v.0) == 0).collect())
            .collect()
    }

    /// Edges as vertex index pairs `(i, j)`, `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let vf = self.vertex_facets();
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let common: Vec<Vec<i64>> = vf[i]
                    .iter()
                    .filter(|f| vf[j].contains(f))
                    .map(|&f| self.facets[f].normal.clone())
                    .collect();
                if common.len() + 1 >= self.dim && arith::rank(&common) + 1 == self.dim {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

fn scan_level(
    proj: &[Vec<HalfSpace>],
    level: usize,
    t: i128,
    strict: bool,
    x: &mut Vec<i64>,
    f: &mut dyn FnMut(&[i64]),
) {
    let last = level + 1 == proj.len();
    let tight = if strict && last { 1 } else { 0 };
    let (mut lo, mut hi) = (i128::MIN, i128::MAX);
    for h in &proj[level] {
        let a = h.normal[level] as i128;
        let rhs = t * h.offset as i128 - dot(&h.normal[..level], &x[..level]) - tight;
        if a > 0 {
            hi = hi.min(Integer::div_floor(&rhs, &a));
        } else if a < 0 {
            lo = lo.max(-Integer::div_floor(&rhs, &-a));
        } else if rhs < 0 {
            return;
        }
    }
    let mut v = lo;
    while v <= hi {
        x[level] = v as i64;
        if last {
            f(x);
        } else {
            scan_level(proj, level + 1, t, strict, x, f);
        }
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::points;

    fn simplex(d: usize, scale: i64) -> LatticePolytope {
        let mut v = vec![LatticePoint::origin(d)];
        v.extend((0..d).map(|i| LatticePoint::unit(d, i).scale(scale)));
        LatticePolytope::new(&v).unwrap()
    }

    #[test]
    fn volumes() {
        assert_eq!(simplex_volume(&points(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])), 1);
        assert_eq!(simplex_volume(&points(&[[0, 0, 0], [2, 0, 0], [0, 3, 0], [0, 0, 12]])), 72);
        assert_eq!(simplex_volume(&points(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])), 0);
    }

    #[test]
    fn circuit_example() {
        let p = convex_hull(&points(&[[0, 0, 0], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]])).unwrap();
        assert_eq!(p.vertices().len(), 5);
        assert_eq!(p.volume(), 3);
    }

    #[test]
    fn point_counts() {
        assert_eq!(simplex(3, 2).num_points(), 10);
        assert_eq!(simplex(3, 1).num_points(), 4);
        let s = LatticePolytope::new(&points(&[[0, 0, 0], [2, 0, 0], [0, 3, 0], [0, 0, 12]])).unwrap();
        assert_eq!(s.volume(), 72);
        assert_eq!(s.interior_points(), &points(&[[1, 1, 1]])[..]);
        assert_eq!(simplex(2, 1).count_dilated(3, false), 10);
        assert_eq!(simplex(2, 1).count_dilated(3, true), 1);
    }

    #[test]
    fn points_are_sorted_and_inside() {
        let p = LatticePolytope::new(&points(&[[0, 0, 0], [3, 1, 0], [1, 4, 2], [2, 2, 5], [-1, 1, 1]])).unwrap();
        let pts = p.lattice_points();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let mut brute = 0;
        for x in -1..=3 {
            for y in 0..=4 {
                for z in 0..=5 {
                    if p.contains(&[x, y, z]) {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(pts.len(), brute);
    }

    #[test]
    fn triangulation_volume() {
        let p = LatticePolytope::new(&points(&[[0, 0, 0], [3, 1, 0], [1, 4, 2], [2, 2, 5], [-1, 1, 1]])).unwrap();
        let total: i128 = p.triangulation().iter().map(|s| simplex_volume(s)).sum();
        assert_eq!(total as u64, p.volume());
    }

    #[test]
    fn cube_edges() {
        let mut v = Vec::new();
        for i in 0..8 {
            v.push(LatticePoint::from([i & 1, (i >> 1) & 1, (i >> 2) & 1]));
        }
        let c = LatticePolytope::new(&v).unwrap();
        assert_eq!(c.edges().len(), 12);
        assert_eq!(simplex(4, 1).edges().len(), 10);
    }
}
