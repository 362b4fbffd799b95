#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::rngs::StdRng;
use rand::Rng;

use latpoly::point::points;
use latpoly::*;

pub fn random_unimodular(rng: &mut StdRng, d: usize) -> UnimodularMap {
    let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..3 * d {
        let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
        if i != j {
            let c = rng.gen_range(-2..=2);
            for k in 0..d {
                m[i][k] += c * m[j][k];
            }
        }
        if rng.gen_bool(0.3) {
            let r = rng.gen_range(0..d);
            m[r].iter_mut().for_each(|x| *x = -*x);
        }
        if rng.gen_bool(0.3) {
            m.swap(rng.gen_range(0..d), rng.gen_range(0..d));
        }
    }
    let t: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
    UnimodularMap::from_rows(m, t).unwrap()
}

/// Polygons of volume at most `k`: start from all triangles in `[0,k]²` and add
/// one point at a time. If `T ⊆ P` is a triangle and `Vol(conv(T ∪ p)) <= k`,
/// the barycentric coordinates of `p` are at most `k` in absolute value, so
/// `p` lies within `(4k+1)·B` of the origin when `T` lies in `[-B, B]²`.
pub fn polygons_by_growth(k: i64) -> BTreeSet<CanonicalKey> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for x1 in 0..=k {
        for y1 in 0..=k {
            for x2 in 0..=k {
                for y2 in 0..=k {
                    let t = [LatticePoint::from([0, 0]), LatticePoint::from([x1, y1]), LatticePoint::from([x2, y2])];
                    let v = simplex_volume(&t);
                    if v >= 1 && v <= k as i128 {
                        let f = canonical_form(&LatticePolytope::new(&t).unwrap());
                        if seen.insert(f.key) {
                            queue.push_back(f.vertices);
                        }
                    }
                }
            }
        }
    }
    while let Some(vs) = queue.pop_front() {
        let p = LatticePolytope::new(&vs).unwrap();
        let tri = &vs[..3];
        let b = tri.iter().flat_map(|v| v.0.iter()).map(|x| x.abs()).max().unwrap().max(1);
        let r = (4 * k + 1) * b;
        for x in -r..=r {
            for y in -r..=r {
                let q = LatticePoint::from([x, y]);
                if p.contains(&q.0) {
                    continue;
                }
                let small = (0..3).all(|i| {
                    let mut t = tri.to_vec();
                    t[i] = q.clone();
                    simplex_volume(&t) <= k as i128
                });
                if !small {
                    continue;
                }
                let mut w = vs.clone();
                w.push(q);
                let g = LatticePolytope::new(&w).unwrap();
                if g.volume() as i64 <= k {
                    let f = canonical_form(&g);
                    if seen.insert(f.key) {
                        queue.push_back(f.vertices);
                    }
                }
            }
        }
    }
    seen
}

pub fn poly3(v: &[[i64; 3]]) -> LatticePolytope {
    LatticePolytope::new(&points(v)).unwrap()
}

pub fn spanning_not_va() -> LatticePolytope {
    poly3(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 3]])
}

pub fn va_not_idp() -> LatticePolytope {
    poly3(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 2], [1, 1, 3], [1, 0, -1], [0, 1, -1], [0, 0, 1]])
}

pub fn uc_not_ut() -> LatticePolytope {
    poly3(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 2, -1], [3, 1, -1], [-2, -1, 1]])
}
