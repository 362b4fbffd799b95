//! Lattice simplices of a given normalized volume, up to unimodular equivalence.
//!
//! A `d`-simplex of volume `V` with a facet `F` of volume `v` has its apex at
//! lattice height `V/v` over `F`. Moving `F` into `x_d = 0` and reducing the
//! apex modulo its height gives every class from a facet class of volume `v`
//! and an apex `(p_1, …, p_{d-1}, V/v)` with `0 <= p_i < V/v`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::arith;
use crate::equivalence::{canonical_form, CanonicalKey};
use crate::point::LatticePoint;
use crate::polytope::LatticePolytope;

/// Classes of `d`-simplices of one volume, keyed canonically.
#[derive(Clone, Debug, Default)]
pub struct SimplexClassSet {
    pub dim: usize,
    pub volume: u64,
    /// Canonical representative per key.
    pub members: BTreeMap<CanonicalKey, Vec<LatticePoint>>,
}

impl SimplexClassSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn polytopes(&self) -> impl Iterator<Item = LatticePolytope> + '_ {
        self.members.values().map(|v| LatticePolytope::new(v).expect("stored simplex is full-dimensional"))
    }
}

/// Memoizing enumerator; lower-dimensional facet classes are shared between calls.
#[derive(Default)]
pub struct SimplexEnumerator {
    cache: Mutex<HashMap<(usize, u64), SimplexClassSet>>,
}

impl SimplexEnumerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, d: usize, volume: u64) -> SimplexClassSet {
        assert!(d >= 1 && volume >= 1, "need d >= 1 and V >= 1");
        if let Some(s) = self.cache.lock().unwrap().get(&(d, volume)) {
            return s.clone();
        }
        let s = if d == 1 {
            let v = vec![LatticePoint::new(vec![0]), LatticePoint::new(vec![volume as i64])];
            let f = canonical_form(&LatticePolytope::new(&v).unwrap());
            SimplexClassSet { dim: 1, volume, members: BTreeMap::from([(f.key, f.vertices)]) }
        } else {
            self.build(d, volume)
        };
        self.cache.lock().unwrap().insert((d, volume), s.clone());
        s
    }

    fn build(&self, d: usize, volume: u64) -> SimplexClassSet {
        let mut jobs: Vec<(i64, Vec<LatticePoint>)> = Vec::new();
        for v in (1..=volume).filter(|v| volume % v == 0) {
            let height = (volume / v) as i64;
            for f in self.get(d - 1, v).members.into_values() {
                jobs.push((height, f));
            }
        }
        let found: Vec<HashMap<CanonicalKey, Vec<LatticePoint>>> = jobs
            .par_iter()
            .map(|(height, facet)| {
                let base: Vec<LatticePoint> = facet.iter().map(|p| p.lift(0)).collect();
                // facet symmetries act on apexes modulo the height; keep one apex per orbit
                let sym = simplex_symmetries(facet);
                let mut local = HashMap::new();
                let mut apex = vec![0i64; d - 1];
                loop {
                    if apex_dominated(&apex, *height, &sym) {
                        if !odometer(&mut apex, *height) {
                            break;
                        }
                        continue;
                    }
                    let mut pts = base.clone();
                    let mut a = apex.clone();
                    a.push(*height);
                    pts.push(LatticePoint(a));
                    let f = canonical_form(&LatticePolytope::new(&pts).expect("apex off the facet hyperplane"));
                    local.entry(f.key).or_insert(f.vertices);
                    if !odometer(&mut apex, *height) {
                        break;
                    }
                }
                local
            })
            .collect();
        let mut members = BTreeMap::new();
        for m in found {
            members.extend(m);
        }
        SimplexClassSet { dim: d, volume, members }
    }
}

type AffineMap = (Vec<Vec<i64>>, Vec<i64>);

/// Affine lattice automorphisms of a simplex, as `(A, b)` with `x ↦ Ax + b`.
pub fn simplex_symmetries(simplex: &[LatticePoint]) -> Vec<AffineMap> {
    let d = simplex[0].dim();
    // columns of B are v_i - v_0; A B = B_π gives A = B_π adj(B) / det B
    let b_rows: Vec<Vec<i64>> = (0..d).map(|r| (1..=d).map(|i| simplex[i].0[r] - simplex[0].0[r]).collect()).collect();
    let det = arith::det(&b_rows);
    let adj = adjugate(&b_rows);
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..=d).collect();
    loop {
        let bp: Vec<Vec<i128>> = (0..d)
            .map(|r| (1..=d).map(|i| (simplex[perm[i]].0[r] - simplex[perm[0]].0[r]) as i128).collect())
            .collect();
        let mut a = vec![vec![0i64; d]; d];
        let mut ok = true;
        'outer: for r in 0..d {
            for c in 0..d {
                let s: i128 = (0..d).map(|k| bp[r][k] * adj[k][c]).sum();
                if s % det != 0 {
                    ok = false;
                    break 'outer;
                }
                a[r][c] = (s / det) as i64;
            }
        }
        if ok {
            let img0 = &simplex[perm[0]].0;
            let t: Vec<i64> = (0..d).map(|r| img0[r] - arith::dot(&a[r], &simplex[0].0) as i64).collect();
            out.push((a, t));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

pub(crate) fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect())
                .collect();
            let c = arith::det(&minor);
            adj[j][i] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    adj
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Whether some symmetry of the facet maps `apex` (mod `height`) to a smaller apex.
fn apex_dominated(apex: &[i64], height: i64, sym: &[AffineMap]) -> bool {
    let mut img = vec![0i64; apex.len()];
    for (a, t) in sym {
        for (r, (row, ti)) in a.iter().zip(t).enumerate() {
            img[r] = (arith::dot(row, apex) as i64 + ti).rem_euclid(height);
        }
        if img.as_slice() < apex {
            return true;
        }
    }
    false
}

/// Advances `x` through `[0, m)^len`; false once it wraps around.
pub(crate) fn odometer(x: &mut [i64], m: i64) -> bool {
    for xi in x.iter_mut() {
        *xi += 1;
        if *xi < m {
            return true;
        }
        *xi = 0;
    }
    false
}

/// All classes of `d`-simplices with normalized volume exactly `volume`.
pub fn enumerate_simplices(d: usize, volume: u64) -> SimplexClassSet {
    SimplexEnumerator::new().get(d, volume)
}

/// Classes for every volume `1..=max_volume`, in volume order.
pub fn enumerate_simplices_upto(d: usize, max_volume: u64) -> Vec<SimplexClassSet> {
    let e = SimplexEnumerator::new();
    (1..=max_volume).map(|v| e.get(d, v)).collect()
}
