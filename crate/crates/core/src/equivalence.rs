//! Unimodular equivalence and canonical forms.
//!
//! A vertex ordering `v_0, …, v_{n-1}` determines the matrix of differences
//! `v_i - v_0`. Affine unimodular maps act on it by column operations, and its
//! column Hermite normal form is a complete invariant of the ordered vertex
//! set. The canonical form is the lexicographically least normal form over
//! admissible orderings. Admissible orderings are restricted by invariants that
//! any unimodular map preserves (vertex classes and pairwise relations to the
//! vertices already placed), so the search stays small without losing
//! canonicity.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::point::LatticePoint;
use crate::polytope::LatticePolytope;

/// `x ↦ linear·x + translation` with `|det linear| = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMap {
    pub linear: IntMatrix,
    pub translation: LatticePoint,
    rows: Vec<Vec<i64>>,
}

impl UnimodularMap {
    pub fn new(linear: IntMatrix, translation: LatticePoint) -> Result<Self> {
        let d = translation.dim();
        if linear.rows() != d || linear.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: linear.rows() });
        }
        let rows = linear.to_i64_rows().ok_or_else(|| Error::Shape("map entries exceed i64".into()))?;
        if arith::det(&rows).abs() != 1 {
            return Err(Error::PreconditionViolated("linear part is not unimodular".into()));
        }
        Ok(UnimodularMap { linear, translation, rows })
    }

    pub fn from_rows(rows: Vec<Vec<i64>>, translation: Vec<i64>) -> Result<Self> {
        Self::new(IntMatrix::from_rows(&rows)?, LatticePoint::new(translation))
    }

    pub fn identity(d: usize) -> Self {
        UnimodularMap {
            linear: IntMatrix::identity(d),
            translation: LatticePoint::origin(d),
            rows: (0..d).map(|i| LatticePoint::unit(d, i).0).collect(),
        }
    }

    pub fn apply(&self, p: &LatticePoint) -> LatticePoint {
        LatticePoint(
            self.rows
                .iter()
                .zip(&self.translation.0)
                .map(|(r, t)| i64::try_from(arith::dot(r, &p.0)).expect("image coordinate exceeds i64") + t)
                .collect(),
        )
    }
}

pub fn apply_map(p: &LatticePolytope, t: &UnimodularMap) -> LatticePolytope {
    assert_eq!(p.dim(), t.translation.dim(), "map and polytope dimensions differ");
    let v: Vec<LatticePoint> = p.vertices().iter().map(|x| t.apply(x)).collect();
    LatticePolytope::new(&v).expect("unimodular image is full-dimensional")
}

/// `d;V;h_11;h_12;…` over the rows of the canonical normal form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub(crate) fn tagged(&self, tag: usize) -> CanonicalKey {
        CanonicalKey(format!("{}#{}", self.0, tag))
    }

    pub fn parse(s: &str) -> Option<CanonicalKey> {
        let mut it = s.split(';');
        let d: usize = it.next()?.parse().ok()?;
        let _vol: u64 = it.next()?.parse().ok()?;
        let mut n = 0;
        for x in it {
            x.parse::<i64>().ok()?;
            n += 1;
        }
        (d > 0 && n % d == 0).then(|| CanonicalKey(s.to_string()))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Key({})", self.0)
    }
}

/// Canonical key together with the canonical representative
/// (the origin followed by the normal-form rows).
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    pub vertices: Vec<LatticePoint>,
}

pub fn canonical_key(p: &LatticePolytope) -> CanonicalKey {
    canonical_form(p).key
}

pub fn are_equivalent(p: &LatticePolytope, q: &LatticePolytope) -> bool {
    p.dim() == q.dim()
        && p.volume() == q.volume()
        && p.vertices().len() == q.vertices().len()
        && canonical_key(p) == canonical_key(q)
}

/// Relation between two vertices that unimodular maps preserve.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
struct Pair {
    not_edge: bool,
    length: i64,
    shared: u32,
}

struct Invariants {
    class: Vec<u32>,
    pair: Vec<Vec<Pair>>,
}

fn invariants(p: &LatticePolytope) -> Invariants {
    let vs = p.vertices();
    let n = vs.len();
    let d = p.dim();
    let vf = p.vertex_facets();
    let mut pair = vec![vec![Pair { not_edge: false, length: 0, shared: 0 }; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let common: Vec<usize> = vf[i].iter().copied().filter(|f| vf[j].contains(f)).collect();
            let edge = common.len() + 1 >= d && {
                let rows: Vec<Vec<i64>> = common.iter().map(|&f| p.facets()[f].normal.clone()).collect();
                arith::rank(&rows) + 1 == d
            };
            let x = Pair {
                not_edge: !edge,
                length: arith::gcd_all(&vs[j].sub(&vs[i]).0),
                shared: common.len() as u32,
            };
            pair[i][j] = x;
            pair[j][i] = x;
        }
    }
    let mut sig: Vec<Vec<i128>> = vs
        .iter()
        .map(|v| {
            let mut s: Vec<i128> = p.facets().iter().map(|h| h.slack(&v.0)).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let mut class = relabel(&sig);
    let mut classes = count_distinct(&class);
    loop {
        let refined: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                let mut nb: Vec<(Pair, u32)> = (0..n).filter(|&j| j != i).map(|j| (pair[i][j], class[j])).collect();
                nb.sort_unstable();
                let mut s = vec![class[i] as i128];
                for (q, c) in nb {
                    s.extend([q.not_edge as i128, q.length as i128, q.shared as i128, c as i128]);
                }
                s
            })
            .collect();
        sig = refined;
        let next = relabel(&sig);
        let k = count_distinct(&next);
        class = next;
        if k == classes {
            break;
        }
        classes = k;
    }
    Invariants { class, pair }
}

fn relabel<T: Ord + Clone>(sig: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = sig.to_vec();
    sorted.sort();
    sorted.dedup();
    sig.iter().map(|s| sorted.binary_search(s).unwrap() as u32).collect()
}

fn count_distinct(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

#[derive(Clone)]
struct State {
    order: Vec<usize>,
    used: Vec<bool>,
    /// Vertex coordinates relative to the origin, after the column operations so far.
    coords: Vec<Vec<i128>>,
    rank: usize,
}

impl State {
    /// The normal-form row `u` would contribute next.
    fn row(&self, u: usize) -> Vec<i128> {
        let x = &self.coords[u];
        let r = self.rank;
        let g = x[r..].iter().fold(0i128, |g, y| g.gcd(y));
        if g == 0 {
            return x.clone();
        }
        let mut row = vec![0; x.len()];
        for j in 0..r {
            row[j] = x[j].mod_floor(&g);
        }
        row[r] = g;
        row
    }

    fn push(&mut self, u: usize) {
        self.order.push(u);
        self.used[u] = true;
        let r = self.rank;
        let d = self.coords[u].len();
        if self.coords[u][r..].iter().all(|&y| y == 0) {
            return;
        }
        for k in r + 1..d {
            let (a, b) = (self.coords[u][r], self.coords[u][k]);
            if b == 0 {
                continue;
            }
            let (g, x, y) = <i128 as arith::Exact>::ext_gcd(&a, &b).expect("gcd in i128");
            let (pa, pb) = (a / g, b / g);
            for c in self.coords.iter_mut() {
                let (cr, ck) = (c[r], c[k]);
                c[r] = x * cr + y * ck;
                c[k] = pa * ck - pb * cr;
            }
        }
        if self.coords[u][r] < 0 {
            for c in self.coords.iter_mut() {
                c[r] = -c[r];
            }
        }
        let piv = self.coords[u][r];
        for j in 0..r {
            let f = Integer::div_floor(&self.coords[u][j], &piv);
            if f != 0 {
                for c in self.coords.iter_mut() {
                    c[j] -= f * c[r];
                }
            }
        }
        self.rank += 1;
    }
}

/// Depth-first search over admissible orderings. Children of a node are the
/// unused vertices whose next entry is smallest. Two leaves with equal sequences
/// differ by a lattice automorphism of `P`; those automorphisms prune children
/// lying in one orbit of the stabilizer of the current prefix.
struct Search<'a> {
    inv: &'a Invariants,
    n: usize,
    d: usize,
    prefix: Vec<Vec<i128>>,
    best: Option<Leaf>,
    autos: Vec<Vec<usize>>,
}

struct Leaf {
    seq: Vec<Vec<i128>>,
    rows: Vec<Vec<i128>>,
    order: Vec<usize>,
}

impl Search<'_> {
    fn item(&self, s: &State, u: usize) -> Vec<i128> {
        let mut it = vec![self.inv.class[u] as i128];
        for &w in &s.order {
            let q = self.inv.pair[u][w];
            it.extend([q.not_edge as i128, q.length as i128, q.shared as i128]);
        }
        it.extend(s.row(u));
        it
    }

    /// Ordering of the current prefix against the best leaf's prefix.
    fn against_best(&self) -> Ordering {
        match &self.best {
            None => Ordering::Less,
            Some(b) => self.prefix.as_slice().cmp(&b.seq[..self.prefix.len()]),
        }
    }

    fn visit(&mut self, s: State) {
        if s.rank == self.d {
            self.leaf(s);
            return;
        }
        let items: Vec<(usize, Vec<i128>)> =
            (0..self.n).filter(|&u| !s.used[u]).map(|u| (u, self.item(&s, u))).collect();
        let min = items.iter().map(|(_, it)| it).min().unwrap().clone();
        self.prefix.push(min.clone());
        if self.against_best() == Ordering::Greater {
            self.prefix.pop();
            return;
        }
        let children: Vec<usize> = items.into_iter().filter(|(_, it)| *it == min).map(|(u, _)| u).collect();
        self.branch(&s, &children);
        self.prefix.pop();
    }

    fn branch(&mut self, s: &State, children: &[usize]) {
        let mut done: Vec<usize> = Vec::new();
        for &u in children {
            if !done.is_empty() && self.same_orbit(&s.order, &done, u) {
                continue;
            }
            let mut t = s.clone();
            t.push(u);
            self.visit(t);
            done.push(u);
            // the best leaf may have moved past this branch's prefix
            if self.against_best() == Ordering::Greater {
                return;
            }
        }
    }

    /// Whether `u` is mapped into `done` by the group generated by the known
    /// automorphisms fixing `fixed` pointwise.
    fn same_orbit(&self, fixed: &[usize], done: &[usize], u: usize) -> bool {
        let gens: Vec<&Vec<usize>> = self.autos.iter().filter(|g| fixed.iter().all(|&x| g[x] == x)).collect();
        if gens.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![u];
        seen[u] = true;
        while let Some(x) = stack.pop() {
            if done.contains(&x) {
                return true;
            }
            for g in &gens {
                let y = g[x];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    fn leaf(&mut self, s: State) {
        let mut tail: Vec<(Vec<i128>, usize)> = (0..self.n)
            .filter(|&u| !s.used[u])
            .map(|u| {
                let mut it = vec![self.inv.class[u] as i128];
                it.extend(s.coords[u].iter().copied());
                (it, u)
            })
            .collect();
        tail.sort();
        let mut seq = self.prefix.clone();
        let mut order = s.order.clone();
        for (it, u) in &tail {
            seq.push(it.clone());
            order.push(*u);
        }
        let better = match &self.best {
            None => true,
            Some(b) => match seq.cmp(&b.seq) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => {
                    let mut g = vec![0usize; self.n];
                    for (a, b) in b.order.iter().zip(&order) {
                        g[*a] = *b;
                    }
                    if g.iter().enumerate().any(|(i, &x)| i != x) {
                        self.autos.push(g);
                    }
                    false
                }
            },
        };
        if better {
            let rows = order[1..].iter().map(|&u| s.coords[u].clone()).collect();
            self.best = Some(Leaf { seq, rows, order });
        }
    }
}

pub fn canonical_form(p: &LatticePolytope) -> CanonicalForm {
    let d = p.dim();
    let vs = p.vertices();
    let n = vs.len();
    let inv = invariants(p);
    let min_class = *inv.class.iter().min().unwrap();
    let mut search = Search { inv: &inv, n, d, prefix: Vec::new(), best: None, autos: Vec::new() };

    let origins: Vec<usize> = (0..n).filter(|&o| inv.class[o] == min_class).collect();
    let mut done: Vec<usize> = Vec::new();
    search.prefix.push(vec![min_class as i128]);
    for &o in &origins {
        if !done.is_empty() && search.same_orbit(&[], &done, o) {
            continue;
        }
        let mut used = vec![false; n];
        used[o] = true;
        let s = State {
            order: vec![o],
            used,
            coords: vs.iter().map(|v| v.0.iter().zip(&vs[o].0).map(|(a, b)| (a - b) as i128).collect()).collect(),
            rank: 0,
        };
        search.visit(s);
        done.push(o);
    }
    let rows = search.best.take().unwrap().rows;

    let mut key = format!("{};{}", d, p.volume());
    let mut vertices = vec![LatticePoint::origin(d)];
    for r in &rows {
        let v: Vec<i64> = r.iter().map(|&x| i64::try_from(x).expect("normal form entry exceeds i64")).collect();
        for x in &v {
            key.push(';');
            key.push_str(&x.to_string());
        }
        vertices.push(LatticePoint(v));
    }
    CanonicalForm { key: CanonicalKey(key), vertices }
}

/// Class-count helper: buckets polytopes by key.
pub fn group_by_key<'a, I>(polys: I) -> HashMap<CanonicalKey, Vec<&'a LatticePolytope>>
where
    I: IntoIterator<Item = &'a LatticePolytope>,
{
    let mut m: HashMap<CanonicalKey, Vec<&LatticePolytope>> = HashMap::new();
    for p in polys {
        m.entry(canonical_key(p)).or_default().push(p);
    }
    m
}
