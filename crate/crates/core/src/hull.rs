//! Incremental beneath-beyond convex hull.
//!
//! The hull keeps a triangulation of its boundary: `d`-element cells, each with
//! the primitive outer normal of its supporting hyperplane. Inserting a point
//! removes the cells it sees and cones the horizon to the new point. Volume is
//! accumulated pyramid by pyramid, so it is exact without a separate pass.

use std::collections::HashMap;

use crate::arith::{self, dot};
use crate::error::{Error, Result};
use crate::point::{HalfSpace, LatticePoint};

#[derive(Clone, Debug)]
pub(crate) struct Cell {
    /// Sorted indices into `Hull::pts`.
    pub verts: Vec<usize>,
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Clone, Debug)]
pub struct Hull {
    dim: usize,
    pub(crate) pts: Vec<LatticePoint>,
    pub(crate) cells: Vec<Cell>,
    volume: i128,
    /// Sum of the initial simplex's vertices: `(d+1)` times an interior point.
    center: Vec<i64>,
}

impl Hull {
    pub fn new(points: &[LatticePoint]) -> Result<Hull> {
        let d = points.first().ok_or(Error::NotFullDimensional { rank: 0, dim: 0 })?.dim();
        if points.iter().any(|p| p.dim() != d) {
            return Err(Error::Shape("points of mixed dimension".into()));
        }
        let base = &points[0];
        let mut chosen = vec![0usize];
        let mut diffs: Vec<Vec<i64>> = Vec::new();
        for (i, p) in points.iter().enumerate().skip(1) {
            if chosen.len() == d + 1 {
                break;
            }
            diffs.push(p.sub(base).0);
            if arith::rank(&diffs) == diffs.len() {
                chosen.push(i);
            } else {
                diffs.pop();
            }
        }
        if chosen.len() < d + 1 {
            return Err(Error::NotFullDimensional { rank: chosen.len() - 1, dim: d });
        }
        let pts: Vec<LatticePoint> = chosen.iter().map(|&i| points[i].clone()).collect();
        let mut center = vec![0i64; d];
        for p in &pts {
            for (c, x) in center.iter_mut().zip(&p.0) {
                *c += x;
            }
        }
        let volume = arith::det(&diffs).abs();
        let mut hull = Hull { dim: d, pts, cells: Vec::new(), volume, center };
        for skip in 0..=d {
            let verts: Vec<usize> = (0..=d).filter(|&i| i != skip).collect();
            let cell = hull.make_cell(verts);
            hull.cells.push(cell);
        }
        for p in points {
            hull.insert(p);
        }
        Ok(hull)
    }

    fn make_cell(&self, verts: Vec<usize>) -> Cell {
        let d = self.dim;
        let q0 = &self.pts[verts[0]].0;
        let rows: Vec<Vec<i64>> = verts[1..]
            .iter()
            .map(|&i| self.pts[i].0.iter().zip(q0).map(|(a, b)| a - b).collect())
            .collect();
        let mut normal: Vec<i128> = (0..d)
            .map(|j| {
                let minor: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let m = arith::det(&minor);
                if j % 2 == 0 { m } else { -m }
            })
            .collect();
        let g = normal.iter().fold(0i128, |g, &x| num_integer::Integer::gcd(&g, &x));
        debug_assert!(g > 0, "degenerate boundary cell");
        normal.iter_mut().for_each(|x| *x /= g);
        let mut normal: Vec<i64> = normal
            .into_iter()
            .map(|x| i64::try_from(x).expect("facet normal exceeds i64"))
            .collect();
        let mut offset = dot(&normal, q0);
        if dot(&normal, &self.center) > (d as i128 + 1) * offset {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        Cell { verts, normal, offset: i64::try_from(offset).expect("facet offset exceeds i64") }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Normalized volume.
    pub fn volume(&self) -> i128 {
        self.volume
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.cells.iter().all(|c| dot(&c.normal, p) <= c.offset as i128)
    }

    /// Volume `conv(hull ∪ p)` would gain, or `None` once it exceeds `limit`.
    pub fn added_volume(&self, p: &[i64], limit: i128) -> Option<i128> {
        let mut add = 0i128;
        for c in &self.cells {
            if dot(&c.normal, p) <= c.offset as i128 {
                continue;
            }
            let rows: Vec<Vec<i64>> = c
                .verts
                .iter()
                .map(|&i| self.pts[i].0.iter().zip(p).map(|(a, b)| a - b).collect())
                .collect();
            add += arith::det(&rows).abs();
            if add > limit {
                return None;
            }
        }
        Some(add)
    }

    /// Adds `p`; returns `false` when `p` was already inside the hull.
    pub fn insert(&mut self, p: &LatticePoint) -> bool {
        let visible: Vec<usize> = (0..self.cells.len())
            .filter(|&i| dot(&self.cells[i].normal, &p.0) > self.cells[i].offset as i128)
            .collect();
        if visible.is_empty() {
            return false;
        }
        let pi = self.pts.len();
        self.pts.push(p.clone());
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for &ci in &visible {
            let cell = &self.cells[ci];
            let rows: Vec<Vec<i64>> = cell
                .verts
                .iter()
                .map(|&i| self.pts[i].0.iter().zip(&p.0).map(|(a, b)| a - b).collect())
                .collect();
            self.volume += arith::det(&rows).abs();
            for skip in 0..cell.verts.len() {
                let mut r = cell.verts.clone();
                r.remove(skip);
                *ridges.entry(r).or_insert(0) += 1;
            }
        }
        let mut keep = vec![true; self.cells.len()];
        for &ci in &visible {
            keep[ci] = false;
        }
        let mut i = 0;
        self.cells.retain(|_| {
            i += 1;
            keep[i - 1]
        });
        let mut horizon: Vec<Vec<usize>> =
            ridges.into_iter().filter(|(_, n)| *n == 1).map(|(r, _)| r).collect();
        horizon.sort();
        for mut r in horizon {
            r.push(pi);
            let cell = self.make_cell(r);
            self.cells.push(cell);
        }
        true
    }

    /// Irredundant facet list, sorted.
    pub fn facets(&self) -> Vec<HalfSpace> {
        let mut f: Vec<HalfSpace> = self
            .cells
            .iter()
            .map(|c| HalfSpace { normal: c.normal.clone(), offset: c.offset })
            .collect();
        f.sort();
        f.dedup();
        f
    }

    /// Vertices of the hull, sorted.
    pub fn vertices(&self) -> Vec<LatticePoint> {
        let mut normals: HashMap<usize, Vec<&Vec<i64>>> = HashMap::new();
        for c in &self.cells {
            for &v in &c.verts {
                let e = normals.entry(v).or_default();
                if !e.contains(&&c.normal) {
                    e.push(&c.normal);
                }
            }
        }
        let mut out: Vec<LatticePoint> = normals
            .into_iter()
            .filter(|(_, ns)| {
                ns.len() >= self.dim
                    && arith::rank(&ns.iter().map(|n| (*n).clone()).collect::<Vec<_>>()) == self.dim
            })
            .map(|(i, _)| self.pts[i].clone())
            .collect();
        out.sort();
        out
    }

    /// Boundary cells as point lists.
    pub fn boundary_cells(&self) -> impl Iterator<Item = (Vec<&LatticePoint>, HalfSpace)> + '_ {
        self.cells.iter().map(|c| {
            (
                c.verts.iter().map(|&i| &self.pts[i]).collect(),
                HalfSpace { normal: c.normal.clone(), offset: c.offset },
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::points;

    #[test]
    fn square_with_center() {
        let h = Hull::new(&points(&[[0, 0], [2, 0], [0, 2], [2, 2], [1, 1]])).unwrap();
        assert_eq!(h.vertices().len(), 4);
        assert_eq!(h.facets().len(), 4);
        assert_eq!(h.volume(), 8);
    }

    #[test]
    fn collinear_points_are_not_vertices() {
        let h = Hull::new(&points(&[[0, 0], [1, 0], [0, 1], [2, 0]])).unwrap();
        assert_eq!(h.vertices(), points(&[[0, 0], [0, 1], [2, 0]]));
        assert_eq!(h.facets().len(), 3);
        assert_eq!(h.volume(), 2);
    }

    #[test]
    fn segment() {
        let h = Hull::new(&points(&[[3], [1], [7], [5]])).unwrap();
        assert_eq!(h.vertices(), points(&[[1], [7]]));
        assert_eq!(h.volume(), 6);
    }

    #[test]
    fn deficient_span() {
        let e = Hull::new(&points(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])).unwrap_err();
        assert!(matches!(e, Error::NotFullDimensional { rank: 2, dim: 3 }));
    }

    #[test]
    fn cube_volume() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(LatticePoint::from([x, y, z]));
                }
            }
        }
        let h = Hull::new(&pts).unwrap();
        assert_eq!(h.volume(), 6);
        assert_eq!(h.facets().len(), 6);
        assert_eq!(h.vertices().len(), 8);
    }
}
