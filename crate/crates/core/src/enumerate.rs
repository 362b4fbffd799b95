//! Growing simplices into every lattice polytope of bounded volume.
//!
//! Each polytope `P` contains a simplex `S` of maximal volume among simplices
//! spanned by its vertices, and every vertex `p` of `P` completes `S` to a
//! corank-one configuration whose volume vector ends in `Vol(S)`, has positive
//! part at most `Vol(P)` and, by maximality, entries bounded by `Vol(S)`. So
//! the candidates for `p` are finitely many and known in advance; `P` is reached
//! from `S` by adding its vertices one at a time. Lawrence prisms are added
//! separately at the end.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::arith;
use crate::circuits::{apex_point, for_each_volume_vector_with_last};
use crate::equivalence::{canonical_form, CanonicalKey};
use crate::error::{Error, Result};
use crate::point::LatticePoint;
use crate::polytope::LatticePolytope;
use crate::simplices::{simplex_symmetries, SimplexEnumerator};

/// `conv(P × {0} ∪ {e_{d+1}})`.
pub fn lattice_pyramid(p: &LatticePolytope) -> LatticePolytope {
    let d = p.dim();
    let mut v: Vec<LatticePoint> = p.vertices().iter().map(|x| x.lift(0)).collect();
    v.push(LatticePoint::unit(d + 1, d));
    LatticePolytope::new(&v).expect("pyramid over a full-dimensional base")
}

/// `conv((e_i, 0), (e_i, a_i))` over the vertices `e_0 = 0, e_1, …, e_{d-1}` of
/// the unimodular `(d-1)`-simplex.
pub fn lawrence_prism(heights: &[i64]) -> Result<LatticePolytope> {
    let d = heights.len();
    if d == 0 || heights.iter().any(|&a| a < 0) {
        return Err(Error::PreconditionViolated("heights must be nonnegative".into()));
    }
    if heights.iter().all(|&a| a == 0) {
        return Err(Error::ZeroVolume);
    }
    let mut v = Vec::new();
    for (i, &a) in heights.iter().enumerate() {
        let base = if i == 0 { LatticePoint::origin(d - 1) } else { LatticePoint::unit(d - 1, i - 1) };
        v.push(base.lift(0));
        if a > 0 {
            v.push(base.lift(a));
        }
    }
    LatticePolytope::new(&v)
}

/// `Pyr^{d-2}(2Δ_2)`.
pub fn exceptional_simplex(d: usize) -> LatticePolytope {
    assert!(d >= 2);
    let mut p = LatticePolytope::new(&crate::point::points(&[[0, 0], [2, 0], [0, 2]])).unwrap();
    for _ in 2..d {
        p = lattice_pyramid(&p);
    }
    p
}

/// Classes of polytopes, one canonical representative per key.
#[derive(Clone, Debug, Default)]
pub struct PolytopeClassSet {
    pub dim: usize,
    pub max_volume: u64,
    pub members: BTreeMap<CanonicalKey, Vec<LatticePoint>>,
}

impl PolytopeClassSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members ordered by `(volume, key)`.
    pub fn sorted(&self) -> Vec<(&CanonicalKey, &Vec<LatticePoint>)> {
        let mut v: Vec<_> = self.members.iter().collect();
        v.sort_by_key(|(k, _)| (key_volume(k), *k));
        v
    }

    /// Number of classes per volume `1..=max_volume`.
    pub fn counts_by_volume(&self) -> Vec<usize> {
        let mut c = vec![0; self.max_volume as usize];
        for k in self.members.keys() {
            c[key_volume(k) as usize - 1] += 1;
        }
        c
    }
}

pub fn key_volume(k: &CanonicalKey) -> u64 {
    k.as_str().split(';').nth(1).and_then(|v| v.parse().ok()).expect("well-formed key")
}

#[derive(Clone, Debug)]
pub struct EnumOptions {
    /// Use only volume vectors with entries bounded by the seed volume, and
    /// prune grown polytopes containing a larger vertex simplex.
    pub biggest_simplex_filter: bool,
    /// Seeds already processed in an earlier run.
    pub skip_seeds: HashSet<CanonicalKey>,
    /// Results of those seeds.
    pub preloaded: Vec<(CanonicalKey, Vec<LatticePoint>)>,
    /// Merge classes found from different seeds. Turning this off keeps one
    /// entry per (seed, class) pair and only serves to test the checks.
    pub dedup: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { biggest_simplex_filter: true, skip_seeds: HashSet::new(), preloaded: Vec::new(), dedup: true }
    }
}

pub type SeedResult = Vec<(CanonicalKey, Vec<LatticePoint>)>;

/// All classes of `d`-dimensional lattice polytopes with normalized volume at most `max_volume`.
pub fn enumerate_polytopes(d: usize, max_volume: u64) -> PolytopeClassSet {
    enumerate_polytopes_with(d, max_volume, &EnumOptions::default(), &|_, _| {})
}

/// As [`enumerate_polytopes`]; `on_seed` sees each finished seed with its classes.
pub fn enumerate_polytopes_with(
    d: usize,
    max_volume: u64,
    opts: &EnumOptions,
    on_seed: &(dyn Fn(&CanonicalKey, &SeedResult) + Sync),
) -> PolytopeClassSet {
    assert!(d >= 2 && max_volume >= 1, "need d >= 2 and K >= 1");
    let simplices = SimplexEnumerator::new();
    let mut seeds: Vec<(CanonicalKey, Vec<LatticePoint>, u64)> = Vec::new();
    for v in 1..=max_volume {
        for (k, s) in simplices.get(d, v).members {
            if !opts.skip_seeds.contains(&k) {
                seeds.push((k, s, v));
            }
        }
    }
    let results: Vec<SeedResult> = seeds
        .par_iter()
        .map(|(key, s, v)| {
            let r = grow_seed(s, *v, max_volume, opts.biggest_simplex_filter);
            on_seed(key, &r);
            r
        })
        .collect();

    let mut members = BTreeMap::new();
    for (k, v) in opts.preloaded.iter().cloned() {
        members.entry(k).or_insert(v);
    }
    for (i, r) in results.into_iter().enumerate() {
        for (k, v) in r {
            let k = if opts.dedup { k } else { k.tagged(i) };
            members.entry(k).or_insert(v);
        }
    }
    for heights in prism_heights(d, max_volume) {
        let f = canonical_form(&lawrence_prism(&heights).unwrap());
        members.entry(f.key).or_insert(f.vertices);
    }
    PolytopeClassSet { dim: d, max_volume, members }
}

/// Nonincreasing height sequences of length `d` with sum in `1..=max_volume`.
fn prism_heights(d: usize, max_volume: u64) -> Vec<Vec<i64>> {
    fn rec(i: usize, d: usize, left: i64, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == d {
            if cur.iter().any(|&a| a > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for a in (0..=cap.min(left)).rev() {
            cur.push(a);
            rec(i + 1, d, left - a, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, max_volume as i64, max_volume as i64, &mut Vec::new(), &mut out);
    out
}

/// Candidate points for a seed simplex: lattice points `p` outside `S` with
/// `Vol(conv(S ∪ p)) <= max_volume` (and the filter bound, if enabled).
pub fn candidate_points(simplex: &[LatticePoint], volume: u64, max_volume: u64, filter: bool) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    let cap = filter.then_some(volume as i64);
    let mut w = Vec::with_capacity(simplex.len() + 1);
    for_each_volume_vector_with_last(simplex[0].dim(), max_volume as i64, volume as i64, cap, &mut |part| {
        if part.iter().all(|&x| x <= 0) {
            return;
        }
        w.clear();
        w.extend_from_slice(part);
        w.push(volume as i64);
        if let Some(p) = apex_point(simplex, &w) {
            out.push(p);
        }
    });
    out.sort();
    out.dedup();
    out
}

/// Lexicographically least image of a sorted vertex list under `sym`.
fn orbit_rep(verts: &[LatticePoint], sym: &[(Vec<Vec<i64>>, Vec<i64>)]) -> Vec<LatticePoint> {
    let mut best = verts.to_vec();
    let mut img = Vec::with_capacity(verts.len());
    for (a, t) in sym {
        img.clear();
        for v in verts {
            img.push(LatticePoint(
                a.iter().zip(t).map(|(row, ti)| arith::dot(row, &v.0) as i64 + ti).collect(),
            ));
        }
        img.sort();
        if img < best {
            best.clone_from(&img);
        }
    }
    best
}

fn grow_seed(simplex: &[LatticePoint], volume: u64, max_volume: u64, filter: bool) -> SeedResult {
    let seed = LatticePolytope::new(simplex).expect("seed simplex is full-dimensional");
    let cands = candidate_points(simplex, volume, max_volume, filter);
    let d = seed.dim();
    // growth commutes with the symmetries of the seed, so one polytope per orbit suffices
    let sym = if cands.is_empty() { Vec::new() } else { simplex_symmetries(simplex) };

    let mut exact: HashSet<Vec<LatticePoint>> = HashSet::new();
    let mut seen: HashSet<Vec<LatticePoint>> = HashSet::new();
    seen.insert(orbit_rep(seed.vertices(), &sym));
    let mut frontier = vec![seed];
    let mut all: Vec<LatticePolytope> = frontier.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for q in &frontier {
            let room = max_volume as i128 - q.volume() as i128;
            if room == 0 {
                continue;
            }
            for p in &cands {
                if q.hull().contains(&p.0) || q.hull().added_volume(&p.0, room).is_none() {
                    continue;
                }
                if filter && exceeds_simplex_bound(q.vertices(), p, d, volume as i128) {
                    continue;
                }
                let mut h = q.hull().clone();
                h.insert(p);
                let g = LatticePolytope::from_hull(h);
                if !exact.insert(g.vertices().to_vec()) {
                    continue;
                }
                if seen.insert(orbit_rep(g.vertices(), &sym)) {
                    next.push(g);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out: HashMap<CanonicalKey, Vec<LatticePoint>> = HashMap::new();
    for q in &all {
        let f = canonical_form(q);
        out.entry(f.key).or_insert(f.vertices);
    }
    let mut v: SeedResult = out.into_iter().collect();
    v.sort();
    v
}

/// Whether some simplex on `p` and `d` of `verts` has volume above `bound`.
fn exceeds_simplex_bound(verts: &[LatticePoint], p: &LatticePoint, d: usize, bound: i128) -> bool {
    let diffs: Vec<Vec<i64>> = verts.iter().map(|v| v.sub(p).0).collect();
    let n = diffs.len();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let rows: Vec<Vec<i64>> = idx.iter().map(|&i| diffs[i].clone()).collect();
        if arith::det(&rows).abs() > bound {
            return true;
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < n - d + i {
                break;
            }
            if i == 0 {
                return false;
            }
        }
        idx[i] += 1;
        for j in i + 1..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prism_volume_and_points() {
        let p = lawrence_prism(&[1, 1, 1]).unwrap();
        assert_eq!(p.volume(), 3);
        assert_eq!(p.vertices().len(), 6);
        let q = lawrence_prism(&[2, 1, 1]).unwrap();
        assert_eq!(q.volume(), 4);
        assert_eq!(q.num_points(), 7);
        assert_eq!(lawrence_prism(&[5, 0, 0]).unwrap().volume(), 5);
        assert!(matches!(lawrence_prism(&[0, 0]), Err(Error::ZeroVolume)));
    }

    #[test]
    fn pyramids() {
        let t = LatticePolytope::new(&crate::point::points(&[[0, 0], [1, 0], [0, 1]])).unwrap();
        assert_eq!(lattice_pyramid(&t).volume(), 1);
        let e = exceptional_simplex(4);
        assert_eq!(e.volume(), 4);
        assert_eq!(e.num_points(), 8);
    }

    #[test]
    fn small_counts_d2() {
        // lattice polygons of area <= 3 (normalized): 1, 2, 3 classes
        let s = enumerate_polytopes(2, 3);
        assert_eq!(s.counts_by_volume(), vec![1, 2, 3]);
    }

    #[test]
    fn d3_first_volumes() {
        let s = enumerate_polytopes(3, 4);
        assert_eq!(s.counts_by_volume(), vec![1, 3, 6, 17]);
    }

    #[test]
    fn simplex_bound_check() {
        let v = crate::point::points(&[[0, 0], [1, 0], [0, 1]]);
        assert!(!exceeds_simplex_bound(&v, &LatticePoint::from([1, 1]), 2, 1));
        assert!(exceeds_simplex_bound(&v, &LatticePoint::from([2, 2]), 2, 1));
    }
}
