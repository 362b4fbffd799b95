//! Corank-one configurations: volume vectors and their two triangulations.

use crate::arith;
use crate::error::{Error, Result};
use crate::point::LatticePoint;

/// Signed normalized volumes `w_i = (-1)^{i+1} det(A \ a_i)` of a configuration
/// of `d+2` points, where each point is lifted to `(1, a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VolumeVector(pub Vec<i64>);

impl VolumeVector {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Indices with positive, zero and negative entries.
    pub fn partition(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let pick = |f: fn(i64) -> bool| (0..self.0.len()).filter(|&i| f(self.0[i])).collect::<Vec<_>>();
        (pick(|x| x > 0), pick(|x| x == 0), pick(|x| x < 0))
    }

    pub fn positive_sum(&self) -> i64 {
        self.0.iter().filter(|&&x| x > 0).sum()
    }

    pub fn negated(&self) -> VolumeVector {
        VolumeVector(self.0.iter().map(|x| -x).collect())
    }
}

pub fn volume_vector(points: &[LatticePoint]) -> Result<VolumeVector> {
    let d = points.first().map_or(0, |p| p.dim());
    if points.len() != d + 2 {
        return Err(Error::Shape(format!("need {} points in dimension {d}, got {}", d + 2, points.len())));
    }
    let w: Vec<i64> = (0..d + 2)
        .map(|skip| {
            // rows of the (d+1)x(d+1) minor are the lifted points, which has the same determinant as its transpose
            let m: Vec<Vec<i64>> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != skip)
                .map(|(_, p)| std::iter::once(1).chain(p.0.iter().copied()).collect())
                .collect();
            let det = i64::try_from(arith::det(&m)).expect("volume exceeds i64");
            if skip % 2 == 0 { det } else { -det }
        })
        .collect();
    if w.iter().all(|&x| x == 0) {
        return Err(Error::DegenerateConfiguration("points do not span the ambient space".into()));
    }
    debug_assert_eq!(w.iter().sum::<i64>(), 0);
    debug_assert!((0..d).all(|c| points.iter().zip(&w).map(|(p, &x)| p.0[c] as i128 * x as i128).sum::<i128>() == 0));
    Ok(VolumeVector(w))
}

/// The two triangulations of a corank-one configuration, as index sets:
/// `T+` has one cell `A \ a_i` per positive `w_i`, `T-` one per negative `w_i`.
pub fn corank_one_triangulations(points: &[LatticePoint]) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
    let w = volume_vector(points)?;
    let (pos, _, neg) = w.partition();
    let cells = |idx: Vec<usize>| -> Vec<Vec<usize>> {
        idx.into_iter().map(|i| (0..points.len()).filter(|&j| j != i).collect()).collect()
    };
    Ok((cells(pos), cells(neg)))
}

/// Calls `f` on every `(w_1, …, w_{d+1})` with `Σ w_i = -last`, positive part
/// at most `max_volume - last`, and `|w_i| <= cap` when a cap is given.
/// Together with `w_{d+2} = last` these are the volume vectors ending in `last`.
pub fn for_each_volume_vector_with_last(
    d: usize,
    max_volume: i64,
    last: i64,
    cap: Option<i64>,
    f: &mut dyn FnMut(&[i64]),
) {
    let n = d + 1;
    let pos_max = max_volume - last;
    if pos_max < 0 {
        return;
    }
    let cap = cap.unwrap_or(i64::MAX);
    let mut w = vec![0i64; n];
    walk(0, n, 0, 0, pos_max, last, cap, &mut w, f);
}

#[allow(clippy::too_many_arguments)]
fn walk(i: usize, n: usize, pos: i64, neg: i64, pos_max: i64, last: i64, cap: i64, w: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    // Σ w = -last  <=>  neg = pos + last
    if i == n {
        if neg == pos + last {
            f(w);
        }
        return;
    }
    let lo = -(cap.min(pos_max + last - neg));
    let hi = cap.min(pos_max - pos);
    for x in lo..=hi {
        w[i] = x;
        let (p, q) = if x > 0 { (pos + x, neg) } else { (pos, neg - x) };
        // the remaining entries can still fix the balance only if the deficit fits
        if q > p + last + (n - i - 1) as i64 * cap.min(pos_max) {
            continue;
        }
        walk(i + 1, n, p, q, pos_max, last, cap, w, f);
    }
}

/// All volume vectors of corank-one configurations in dimension `d` whose
/// positive part sums to at most `max_volume` (and at least 1).
pub fn volume_vector_set(d: usize, max_volume: i64) -> Vec<VolumeVector> {
    let mut out = Vec::new();
    let n = d + 2;
    let mut w = vec![0i64; n];
    fn rec(i: usize, n: usize, k: i64, sum: i64, pos: i64, w: &mut Vec<i64>, out: &mut Vec<VolumeVector>) {
        if i == n {
            if sum == 0 && pos >= 1 {
                out.push(VolumeVector(w.clone()));
            }
            return;
        }
        for x in -k..=k {
            let p = pos + x.max(0);
            let neg = p - (sum + x);
            if p > k || neg > k {
                continue;
            }
            w[i] = x;
            rec(i + 1, n, k, sum + x, p, w, out);
        }
    }
    rec(0, n, max_volume, 0, 0, &mut w, &mut out);
    out
}

/// The point `p` completing `S = (v_0, …, v_d)` to a configuration with volume
/// vector `w` (`w_{d+2} = Vol(S)`), if it is a lattice point.
pub fn apex_point(simplex: &[LatticePoint], w: &[i64]) -> Option<LatticePoint> {
    let d = simplex[0].dim();
    assert_eq!(simplex.len(), d + 1);
    assert_eq!(w.len(), d + 2);
    let vol = w[d + 1] as i128;
    assert!(vol > 0, "last entry must be the simplex volume");
    let mut p = Vec::with_capacity(d);
    for c in 0..d {
        let s: i128 = simplex.iter().zip(w).map(|(v, &x)| v.0[c] as i128 * x as i128).sum();
        if s % vol != 0 {
            return None;
        }
        p.push((-s / vol) as i64);
    }
    Some(LatticePoint(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::points;

    #[test]
    fn example_vector() {
        let a = points(&[[0, 0, 0], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]]);
        let w = volume_vector(&a).unwrap();
        let expect = VolumeVector(vec![1, -1, -1, -1, 2]);
        assert!(w == expect || w == expect.negated(), "{w:?}");
        let (tp, tm) = corank_one_triangulations(&a).unwrap();
        let (small, big) = if w == expect { (tp, tm) } else { (tm, tp) };
        assert_eq!(small.len(), 2);
        assert_eq!(big.len(), 3);
    }

    #[test]
    fn apex_on_triangle() {
        let s = points(&[[0, 0], [1, 0], [0, 1]]);
        assert_eq!(apex_point(&s, &[1, -1, -1, 1]), Some(LatticePoint::from([1, 1])));
        // p = (2,1)/2 is not integral
        assert_eq!(apex_point(&s, &[1, -2, -1, 2]), None);
    }

    #[test]
    fn repeated_point_gives_two_entries() {
        let a = points(&[[0, 0], [1, 0], [0, 1], [1, 0]]);
        let w = volume_vector(&a).unwrap();
        assert_eq!(w.0.iter().filter(|&&x| x != 0).count(), 2);
        assert_eq!(w.0[0], 0);
        assert_eq!(w.0[2], 0);
    }

    #[test]
    fn degenerate() {
        assert!(volume_vector(&points(&[[0, 0], [1, 1], [2, 2], [3, 3]])).is_err());
    }

    #[test]
    fn with_last_matches_full_set() {
        for d in 1..=3 {
            for k in 1..=4 {
                let full = volume_vector_set(d, k);
                for last in 1..=k {
                    let mut got = Vec::new();
                    for_each_volume_vector_with_last(d, k, last, None, &mut |w| {
                        let mut v = w.to_vec();
                        v.push(last);
                        got.push(VolumeVector(v));
                    });
                    got.sort();
                    let mut want: Vec<_> = full.iter().filter(|w| w.0[d + 1] == last).cloned().collect();
                    want.sort();
                    assert_eq!(got, want, "d={d} k={k} last={last}");
                }
            }
        }
    }
}
