//! Spanning, smooth, very ample, IDP, unimodular cover and unimodular
//! triangulation, plus the structure of smooth polytopes with few points.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, dot};
use crate::enumerate::lawrence_prism;
use crate::equivalence::canonical_key;
use crate::error::{Error, Result};
use crate::hull::Hull;
use crate::lp;
use crate::matrix::{snf_invariant_factors, IntMatrix};
use crate::point::LatticePoint;
use crate::polytope::LatticePolytope;
use crate::simplices::adjugate;

/// Default node budget for the cover and triangulation searches.
pub const DEFAULT_BUDGET: u64 = 200_000;

/// Whether the lattice points of `P` affinely generate `Z^d`.
pub fn is_spanning(p: &LatticePolytope) -> bool {
    let pts = p.lattice_points();
    let base = &pts[0];
    let rows: Vec<Vec<i64>> = pts[1..].iter().map(|x| x.sub(base).0).collect();
    if rows.len() < p.dim() {
        return false;
    }
    let f = snf_invariant_factors(&IntMatrix::from_rows(&rows).unwrap());
    f.iter().all(|x| x.is_one())
}

/// Simple, and the primitive edge directions at each vertex form a lattice basis.
pub fn is_smooth(p: &LatticePolytope) -> bool {
    let d = p.dim();
    let v = p.vertices();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); v.len()];
    for (i, j) in p.edges() {
        nbrs[i].push(j);
        nbrs[j].push(i);
    }
    nbrs.iter().enumerate().all(|(i, n)| {
        if n.len() != d {
            return false;
        }
        let dirs: Vec<Vec<i64>> = n
            .iter()
            .map(|&j| {
                let mut e = v[j].sub(&v[i]).0;
                arith::primitive(&mut e);
                e
            })
            .collect();
        arith::det(&dirs).abs() == 1
    })
}

/// A polyhedral cone `apex + cone(generators)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub apex: LatticePoint,
    /// Primitive, distinct, nonzero.
    pub generators: Vec<Vec<i64>>,
}

impl Cone {
    pub fn new(apex: LatticePoint, generators: &[Vec<i64>]) -> Cone {
        let mut g: Vec<Vec<i64>> = generators
            .iter()
            .filter(|x| x.iter().any(|&c| c != 0))
            .map(|x| {
                let mut x = x.clone();
                arith::primitive(&mut x);
                x
            })
            .collect();
        g.sort();
        g.dedup();
        Cone { apex, generators: g }
    }

    /// `R_{>=0}(P - v)` at vertex `v` of `P`.
    pub fn tangent(p: &LatticePolytope, vertex: usize) -> Cone {
        let v = &p.vertices()[vertex];
        let gens: Vec<Vec<i64>> = p.vertices().iter().map(|w| w.sub(v).0).collect();
        Cone::new(v.clone(), &gens)
    }
}

/// Minimal generating set of the monoid `cone ∩ Z^d`, as vectors from the apex.
pub fn hilbert_basis(c: &Cone) -> Result<Vec<LatticePoint>> {
    let d = c.apex.dim();
    let mut pts = vec![LatticePoint::origin(d)];
    pts.extend(c.generators.iter().map(|g| LatticePoint(g.clone())));
    let hull = Hull::new(&pts)?;
    if !hull.vertices().contains(&pts[0]) {
        return Err(Error::NotPointed);
    }
    let walls: Vec<Vec<i64>> = hull.facets().into_iter().filter(|h| h.offset == 0).map(|h| h.normal).collect();
    let in_cone = |x: &[i64]| walls.iter().all(|n| dot(n, x) <= 0);

    let mut cand: HashSet<Vec<i64>> = HashSet::new();
    // the far boundary cells cone off into a triangulation of the cone
    for (cell, h) in hull.boundary_cells() {
        if h.offset == 0 {
            continue;
        }
        let gens: Vec<Vec<i64>> = cell
            .iter()
            .map(|x| {
                let mut g = x.0.clone();
                arith::primitive(&mut g);
                g
            })
            .collect();
        for x in parallelepiped(&gens) {
            cand.insert(x);
        }
        cand.extend(gens);
    }
    cand.remove(&vec![0; d]);
    let cand: Vec<Vec<i64>> = cand.into_iter().collect();
    let diff = |x: &[i64], y: &[i64]| -> Vec<i64> { x.iter().zip(y).map(|(a, b)| a - b).collect() };
    let mut out: Vec<LatticePoint> = cand
        .iter()
        .filter(|x| !cand.iter().any(|y| y != *x && in_cone(&diff(x, y))))
        .map(|x| LatticePoint(x.clone()))
        .collect();
    out.sort();
    Ok(out)
}

/// Lattice points `Σ λ_i g_i`, `0 <= λ_i < 1`, of a simplicial cone.
fn parallelepiped(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = gens.len();
    // G has the generators as columns; G^{-1} = adj(G) / det
    let g: Vec<Vec<i64>> = (0..d).map(|r| gens.iter().map(|x| x[r]).collect()).collect();
    let det = arith::det(&g);
    let m = det.abs();
    let adj = adjugate(&g);
    let sign = det.signum();
    // coefficients of e_i, as numerators over |det|, generate the quotient group
    let steps: Vec<Vec<i128>> = (0..d).map(|i| (0..d).map(|r| (sign * adj[r][i]).rem_euclid(m)).collect()).collect();
    let mut seen: HashSet<Vec<i128>> = HashSet::new();
    let mut stack = vec![vec![0i128; d]];
    seen.insert(stack[0].clone());
    while let Some(f) = stack.pop() {
        for s in &steps {
            let h: Vec<i128> = f.iter().zip(s).map(|(a, b)| (a + b) % m).collect();
            if seen.insert(h.clone()) {
                stack.push(h);
            }
        }
    }
    seen.into_iter()
        .map(|f| {
            (0..d)
                .map(|r| {
                    let s: i128 = (0..d).map(|i| g[r][i] as i128 * f[i]).sum();
                    debug_assert_eq!(s % m, 0);
                    (s / m) as i64
                })
                .collect()
        })
        .collect()
}

/// Every Hilbert basis element of every tangent cone is a lattice point of `P - v`.
pub fn is_very_ample(p: &LatticePolytope) -> bool {
    (0..p.vertices().len()).all(|i| {
        let c = Cone::tangent(p, i);
        let hb = hilbert_basis(&c).expect("tangent cone at a vertex is pointed");
        hb.iter().all(|h| p.contains(&c.apex.add(h).0))
    })
}

/// Highest degree checked by [`is_idp`] by default: `max(2, d - 1)`.
pub fn idp_degree_bound(d: usize) -> usize {
    2.max(d.saturating_sub(1))
}

/// Every lattice point of `kP` is a point of `(k-1)P` plus a point of `P`,
/// for `k = 2..=max_degree` (default [`idp_degree_bound`]).
pub fn is_idp(p: &LatticePolytope, max_degree: Option<usize>) -> bool {
    let top = max_degree.unwrap_or_else(|| idp_degree_bound(p.dim()));
    let pts = p.lattice_points();
    let facets = p.facets();
    for k in 2..=top as i64 {
        let mut ok = true;
        let mut y = vec![0i64; p.dim()];
        p.scan(k, false, &mut |x| {
            if !ok {
                return;
            }
            ok = pts.iter().any(|q| {
                for (yi, (a, b)) in y.iter_mut().zip(x.iter().zip(&q.0)) {
                    *yi = a - b;
                }
                facets.iter().all(|h| dot(&h.normal, &y) <= (k - 1) as i128 * h.offset as i128)
            });
        });
        if !ok {
            return false;
        }
    }
    true
}

/// A lattice simplex with its facet inequalities `n·x <= c`, facet `i` opposite vertex `i`.
#[derive(Clone, Debug)]
struct Simplex {
    verts: Vec<usize>,
    facets: Vec<(Vec<i64>, i64)>,
}

/// Primitive normal of the hyperplane through `d` affinely independent points.
fn hyperplane(pts: &[&[i64]]) -> Vec<i64> {
    let d = pts[0].len();
    let rows: Vec<Vec<i64>> = pts[1..].iter().map(|p| p.iter().zip(pts[0]).map(|(a, b)| a - b).collect()).collect();
    let mut n: Vec<i64> = (0..d)
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                rows.iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
            let m = arith::det(&minor) as i64;
            if j % 2 == 0 { m } else { -m }
        })
        .collect();
    arith::primitive(&mut n);
    n
}

fn simplex_facets(pts: &[LatticePoint], verts: &[usize]) -> Vec<(Vec<i64>, i64)> {
    (0..verts.len())
        .map(|i| {
            let on: Vec<&[i64]> = verts.iter().filter(|&&v| v != verts[i]).map(|&v| pts[v].0.as_slice()).collect();
            let mut n = hyperplane(&on);
            let mut c = dot(&n, on[0]) as i64;
            if dot(&n, &pts[verts[i]].0) > c as i128 {
                n.iter_mut().for_each(|x| *x = -*x);
                c = -c;
            }
            (n, c)
        })
        .collect()
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn unimodular_index_sets(p: &LatticePolytope) -> Vec<Vec<usize>> {
    let pts = p.lattice_points();
    let d = p.dim();
    let mut out = Vec::new();
    combinations(pts.len(), d + 1, &mut |idx| {
        let rows: Vec<Vec<i64>> = idx[1..].iter().map(|&i| pts[i].sub(&pts[idx[0]]).0).collect();
        if arith::det(&rows).abs() == 1 {
            out.push(idx.to_vec());
        }
    });
    out
}

/// All unimodular simplices spanned by lattice points of `P`.
pub fn enumerate_unimodular_subsimplices(p: &LatticePolytope) -> Vec<Vec<LatticePoint>> {
    let pts = p.lattice_points();
    unimodular_index_sets(p).into_iter().map(|s| s.into_iter().map(|i| pts[i].clone()).collect()).collect()
}

/// Whether two simplices meet in the face spanned by their common vertices.
fn proper(pts: &[LatticePoint], s: &Simplex, t: &Simplex) -> bool {
    let shared = |x: usize| s.verts.contains(&x) && t.verts.contains(&x);
    // a facet hyperplane of one that weakly separates the other, touching it only in shared vertices
    let separated = |a: &Simplex, b: &Simplex| {
        a.facets.iter().any(|(n, c)| {
            b.verts.iter().all(|&v| {
                let x = dot(n, &pts[v].0);
                x > *c as i128 || (x == *c as i128 && shared(v))
            })
        })
    };
    if separated(s, t) || separated(t, s) {
        return true;
    }
    // otherwise look for a common point with weight on a vertex of s that t lacks
    let d = pts[0].dim();
    let k = s.verts.len();
    let mut m: Vec<Vec<i64>> = Vec::with_capacity(d + 2);
    for c in 0..d {
        let mut row: Vec<i64> = s.verts.iter().map(|&v| pts[v].0[c]).collect();
        row.extend(t.verts.iter().map(|&v| -pts[v].0[c]));
        m.push(row);
    }
    let mut sums = vec![1i64; k];
    sums.extend(std::iter::repeat(-1).take(k));
    m.push(sums);
    let mut own: Vec<i64> = s.verts.iter().map(|&v| i64::from(!t.verts.contains(&v))).collect();
    own.extend(std::iter::repeat(0).take(k));
    m.push(own);
    let mut b = vec![0i64; d + 1];
    b.push(1);
    !lp::feasible(&m, &b)
}

struct Triangulator<'a> {
    pts: &'a [LatticePoint],
    simplices: Vec<Simplex>,
    by_ridge: HashMap<Vec<usize>, Vec<usize>>,
    boundary: HashSet<Vec<usize>>,
    compat: HashMap<(usize, usize), bool>,
    chosen: Vec<usize>,
    open: HashMap<Vec<usize>, usize>,
    volume: usize,
    nodes: u64,
    budget: u64,
}

fn ridges(verts: &[usize]) -> impl Iterator<Item = (usize, Vec<usize>)> + '_ {
    (0..verts.len()).map(move |i| {
        let mut r = verts.to_vec();
        r.remove(i);
        (i, r)
    })
}

impl Triangulator<'_> {
    fn compatible(&mut self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        if let Some(&c) = self.compat.get(&key) {
            return c;
        }
        let c = a != b && proper(self.pts, &self.simplices[a], &self.simplices[b]);
        self.compat.insert(key, c);
        c
    }

    fn candidates(&mut self, ridge: &[usize], owner: usize) -> Vec<usize> {
        let s = &self.simplices[owner];
        let apex_pos = s.verts.iter().position(|v| !ridge.contains(v)).unwrap();
        let (n, c) = s.facets[apex_pos].clone();
        let list = self.by_ridge.get(ridge).cloned().unwrap_or_default();
        let mut out = Vec::new();
        for t in list {
            let apex = self.simplices[t].verts.iter().copied().find(|v| !ridge.contains(v)).unwrap();
            if dot(&n, &self.pts[apex].0) <= c as i128 {
                continue;
            }
            let chosen = self.chosen.clone();
            if chosen.iter().all(|&u| self.compatible(t, u)) {
                out.push(t);
            }
        }
        out
    }

    fn place(&mut self, t: usize) -> Vec<(Vec<usize>, Option<usize>)> {
        let mut undo = Vec::new();
        self.chosen.push(t);
        let verts = self.simplices[t].verts.clone();
        for (_, r) in ridges(&verts) {
            if self.boundary.contains(&r) {
                continue;
            }
            let prev = match self.open.remove(&r) {
                Some(o) => Some(o),
                None => {
                    self.open.insert(r.clone(), t);
                    None
                }
            };
            undo.push((r, prev));
        }
        undo
    }

    fn unplace(&mut self, undo: Vec<(Vec<usize>, Option<usize>)>) {
        for (r, prev) in undo.into_iter().rev() {
            match prev {
                Some(o) => {
                    self.open.insert(r, o);
                }
                None => {
                    self.open.remove(&r);
                }
            }
        }
        self.chosen.pop();
    }

    fn search(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        if self.open.is_empty() {
            return Ok(self.chosen.len() == self.volume);
        }
        if self.chosen.len() >= self.volume {
            return Ok(false);
        }
        let open: Vec<(Vec<usize>, usize)> = {
            let mut o: Vec<_> = self.open.iter().map(|(r, &s)| (r.clone(), s)).collect();
            o.sort();
            o
        };
        let mut best: Option<Vec<usize>> = None;
        for (r, owner) in open {
            let c = self.candidates(&r, owner);
            if c.is_empty() {
                return Ok(false);
            }
            if best.as_ref().map_or(true, |b| c.len() < b.len()) {
                let done = c.len() == 1;
                best = Some(c);
                if done {
                    break;
                }
            }
        }
        for t in best.unwrap() {
            let undo = self.place(t);
            let found = self.search()?;
            self.unplace(undo);
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Backtracking search for a triangulation into unimodular simplices,
/// grown facet by facet from the first vertex of `P`.
pub fn has_unimodular_triangulation(p: &LatticePolytope, budget: u64) -> Result<bool> {
    let pts = p.lattice_points();
    let d = p.dim();
    let simplices: Vec<Simplex> = unimodular_index_sets(p)
        .into_iter()
        .map(|v| Simplex { facets: simplex_facets(pts, &v), verts: v })
        .collect();
    let mut by_ridge: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut boundary = HashSet::new();
    for (i, s) in simplices.iter().enumerate() {
        for (_, r) in ridges(&s.verts) {
            if !boundary.contains(&r) && p.facets().iter().any(|h| r.iter().all(|&v| h.slack(&pts[v].0) == 0)) {
                boundary.insert(r.clone());
            }
            by_ridge.entry(r).or_default().push(i);
        }
    }
    let v0 = pts.iter().position(|x| *x == p.vertices()[0]).unwrap();
    let mut t = Triangulator {
        pts,
        simplices,
        by_ridge,
        boundary,
        compat: HashMap::new(),
        chosen: Vec::new(),
        open: HashMap::new(),
        volume: p.volume() as usize,
        nodes: 0,
        budget,
    };
    debug_assert!(d >= 1);
    let first: Vec<usize> = (0..t.simplices.len()).filter(|&i| t.simplices[i].verts.contains(&v0)).collect();
    for s in first {
        let undo = t.place(s);
        let found = t.search()?;
        t.unplace(undo);
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A vertex in homogeneous coordinates `(x_1, …, x_d) / den`, `den > 0`.
#[derive(Clone, Debug)]
struct RatPoint {
    num: Vec<BigInt>,
    den: BigInt,
}

impl RatPoint {
    fn from_lattice(p: &LatticePoint) -> Self {
        RatPoint { num: p.0.iter().map(|&x| BigInt::from(x)).collect(), den: BigInt::one() }
    }

    /// `den · (n·x - c)`, which has the sign of `n·x - c`.
    fn eval(&self, n: &[i64], c: i64) -> BigInt {
        let s: BigInt = self.num.iter().zip(n).map(|(a, &b)| a * b).sum();
        s - &self.den * c
    }

    fn normalize(mut self) -> Self {
        let g = self.num.iter().fold(self.den.clone(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            self.num.iter_mut().for_each(|x| *x /= &g);
            self.den /= &g;
        }
        self
    }
}

/// A full-dimensional polytope `{ n·x <= c }` with its vertices and their tight constraints.
#[derive(Clone, Debug)]
struct Cell {
    cons: Vec<(Vec<i64>, i64)>,
    verts: Vec<RatPoint>,
    tight: Vec<Vec<usize>>,
}

impl Cell {
    fn new(cons: Vec<(Vec<i64>, i64)>, verts: Vec<RatPoint>) -> Cell {
        let tight = verts
            .iter()
            .map(|v| (0..cons.len()).filter(|&j| v.eval(&cons[j].0, cons[j].1).is_zero()).collect())
            .collect();
        Cell { cons, verts, tight }
    }

    fn adjacent(&self, a: usize, b: usize, d: usize) -> bool {
        let common: Vec<usize> = self.tight[a].iter().copied().filter(|x| self.tight[b].contains(x)).collect();
        common.len() + 1 >= d
            && !(0..self.verts.len())
                .any(|w| w != a && w != b && common.iter().all(|x| self.tight[w].contains(x)))
    }

    fn inside(&self, s: &Simplex) -> bool {
        self.verts.iter().all(|v| s.facets.iter().all(|(n, c)| !v.eval(n, *c).is_positive()))
    }

    fn centroid(&self) -> RatPoint {
        let l = self.verts.iter().fold(BigInt::one(), |l, v| l.lcm(&v.den));
        let d = self.verts[0].num.len();
        let mut num = vec![BigInt::zero(); d];
        for v in &self.verts {
            let f = &l / &v.den;
            for (a, b) in num.iter_mut().zip(&v.num) {
                *a += b * &f;
            }
        }
        RatPoint { num, den: l * BigInt::from(self.verts.len()) }.normalize()
    }

    /// The two sides of `n·x = c`, if it cuts the interior.
    fn split(&self, n: &[i64], c: i64) -> Option<(Cell, Cell)> {
        let d = n.len();
        let f: Vec<BigInt> = self.verts.iter().map(|v| v.eval(n, c)).collect();
        if !f.iter().any(|x| x.is_negative()) || !f.iter().any(|x| x.is_positive()) {
            return None;
        }
        let mut cut = Vec::new();
        for a in 0..self.verts.len() {
            for b in 0..self.verts.len() {
                if f[a].is_negative() && f[b].is_positive() && self.adjacent(a, b, d) {
                    let (u, v) = (&self.verts[a], &self.verts[b]);
                    // f(v)·u - f(u)·v lies on the hyperplane, both weights positive
                    let num = u.num.iter().zip(&v.num).map(|(x, y)| &f[b] * x - &f[a] * y).collect();
                    let den = &f[b] * &u.den - &f[a] * &v.den;
                    cut.push(RatPoint { num, den }.normalize());
                }
            }
        }
        let side = |keep: fn(&BigInt) -> bool, normal: Vec<i64>, off: i64| {
            let mut verts: Vec<RatPoint> =
                self.verts.iter().zip(&f).filter(|(_, x)| keep(x)).map(|(v, _)| v.clone()).collect();
            verts.extend(cut.iter().cloned());
            let mut cons = self.cons.clone();
            cons.push((normal, off));
            Cell::new(cons, verts)
        };
        let lo = side(|x| !x.is_positive(), n.to_vec(), c);
        let hi = side(|x| !x.is_negative(), n.iter().map(|x| -x).collect(), -c);
        Some((lo, hi))
    }
}

/// Whether the unimodular simplices of `P` cover it. `P` is cut along facet
/// hyperplanes of those simplices until every piece lies in one of them, or a
/// piece has its centroid outside all of them.
pub fn has_unimodular_cover(p: &LatticePolytope, budget: u64) -> Result<bool> {
    let pts = p.lattice_points();
    let simplices: Vec<Simplex> = unimodular_index_sets(p)
        .into_iter()
        .map(|v| Simplex { facets: simplex_facets(pts, &v), verts: v })
        .collect();
    let cons: Vec<(Vec<i64>, i64)> = p.facets().iter().map(|h| (h.normal.clone(), h.offset)).collect();
    let start = Cell::new(cons, p.vertices().iter().map(RatPoint::from_lattice).collect());
    let mut queue = vec![start];
    let mut nodes = 0u64;
    while let Some(cell) = queue.pop() {
        nodes += 1;
        if nodes > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let x = cell.centroid();
        let holders: Vec<&Simplex> = simplices
            .iter()
            .filter(|s| s.facets.iter().all(|(n, c)| !x.eval(n, *c).is_positive()))
            .collect();
        if holders.is_empty() {
            return Ok(false);
        }
        if holders.iter().any(|s| cell.inside(s)) {
            continue;
        }
        // a holder meets the interior of the cell without containing it, so one of its facets cuts
        let (lo, hi) = holders
            .iter()
            .flat_map(|s| s.facets.iter())
            .find_map(|(n, c)| cell.split(n, *c))
            .expect("some facet of a holder cuts the cell");
        queue.push(lo);
        queue.push(hi);
    }
    Ok(true)
}

/// Structure of a smooth polytope with at most `3d - 4` lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothStructure {
    UnimodularSimplex,
    LawrencePrism(Vec<i64>),
    /// Neither; impossible for a smooth polytope this small.
    Contradiction,
}

pub fn smooth_structure(p: &LatticePolytope) -> Result<SmoothStructure> {
    let d = p.dim();
    if !is_smooth(p) {
        return Err(Error::PreconditionViolated("polytope is not smooth".into()));
    }
    if p.num_points() + 4 > 3 * d {
        return Err(Error::PreconditionViolated(format!("{} lattice points exceed 3d-4 = {}", p.num_points(), 3 * d - 4)));
    }
    if p.volume() == 1 {
        return Ok(SmoothStructure::UnimodularSimplex);
    }
    let key = canonical_key(p);
    let mut found = None;
    heights_with_sum(d, p.volume() as i64, &mut |h| {
        if found.is_none() && canonical_key(&lawrence_prism(h).unwrap()) == key {
            found = Some(h.to_vec());
        }
    });
    Ok(found.map_or(SmoothStructure::Contradiction, SmoothStructure::LawrencePrism))
}

/// Nonincreasing sequences of `d` positive heights with the given sum.
fn heights_with_sum(d: usize, sum: i64, f: &mut dyn FnMut(&[i64])) {
    fn rec(i: usize, d: usize, left: i64, cap: i64, cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        if i == d {
            if left == 0 {
                f(cur);
            }
            return;
        }
        let rest = (d - i - 1) as i64;
        for a in (1..=cap.min(left - rest)).rev() {
            cur.push(a);
            rec(i + 1, d, left - a, a, cur, f);
            cur.pop();
        }
    }
    rec(0, d, sum, sum, &mut Vec::new(), f);
}

/// `Q = conv(0, e1, e2, e3, e1+e3, e2+e3, e1+e2+k e3, e1+e2+(k+1) e3)`.
pub fn segmental_q(k: i64) -> LatticePolytope {
    assert!(k >= 0);
    LatticePolytope::new(&crate::point::points(&[
        [0, 0, 0],
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 0, 1],
        [0, 1, 1],
        [1, 1, k],
        [1, 1, k + 1],
    ]))
    .unwrap()
}

/// One flag per property; `None` when not computed or out of budget.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub spanning: Option<bool>,
    pub very_ample: Option<bool>,
    pub idp: Option<bool>,
    pub unimodular_cover: Option<bool>,
    pub unimodular_triangulation: Option<bool>,
    pub smooth: Option<bool>,
}

impl PropertyRecord {
    /// `UT ⇒ UC ⇒ IDP ⇒ VA ⇒ spanning` among the computed flags.
    pub fn hierarchy_holds(&self) -> bool {
        let chain = [self.unimodular_triangulation, self.unimodular_cover, self.idp, self.very_ample, self.spanning];
        for i in 0..chain.len() {
            for j in i + 1..chain.len() {
                if chain[i] == Some(true) && chain[j] == Some(false) {
                    return false;
                }
            }
        }
        true
    }
}

/// Property names accepted by [`analyze`].
pub const PROPERTY_NAMES: [&str; 6] = ["spanning", "va", "idp", "uc", "ut", "smooth"];

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub props: Vec<String>,
    pub budget: u64,
    pub idp_max_degree: Option<usize>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            props: PROPERTY_NAMES.iter().map(|s| s.to_string()).collect(),
            budget: DEFAULT_BUDGET,
            idp_max_degree: None,
        }
    }
}

/// Computes the requested properties; each independently of the others.
pub fn analyze(p: &LatticePolytope, opts: &AnalyzeOptions) -> PropertyRecord {
    let want = |s: &str| opts.props.iter().any(|x| x == s);
    PropertyRecord {
        spanning: want("spanning").then(|| is_spanning(p)),
        very_ample: want("va").then(|| is_very_ample(p)),
        idp: want("idp").then(|| is_idp(p, opts.idp_max_degree)),
        unimodular_cover: if want("uc") { has_unimodular_cover(p, opts.budget).ok() } else { None },
        unimodular_triangulation: if want("ut") { has_unimodular_triangulation(p, opts.budget).ok() } else { None },
        smooth: want("smooth").then(|| is_smooth(p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::points;

    fn poly3(v: &[[i64; 3]]) -> LatticePolytope {
        LatticePolytope::new(&points(v)).unwrap()
    }

    fn cube() -> LatticePolytope {
        poly3(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]])
    }

    fn reeve() -> LatticePolytope {
        poly3(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 2]])
    }

    #[test]
    fn spanning() {
        assert!(is_spanning(&poly3(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 3]])));
        assert!(!is_spanning(&reeve()));
        assert!(is_spanning(&cube()));
    }

    #[test]
    fn smooth() {
        assert!(is_smooth(&cube()));
        assert!(is_smooth(&LatticePolytope::new(&points(&[[0, 0], [2, 0], [0, 2]])).unwrap()));
        assert!(!is_smooth(&reeve()));
    }

    #[test]
    fn hilbert_bases() {
        let o = LatticePoint::origin(2);
        let hb = hilbert_basis(&Cone::new(o.clone(), &[vec![1, 0], vec![0, 1]])).unwrap();
        assert_eq!(hb, points(&[[0, 1], [1, 0]]));
        let hb = hilbert_basis(&Cone::new(o.clone(), &[vec![1, 0], vec![1, 2]])).unwrap();
        assert_eq!(hb, points(&[[1, 0], [1, 1], [1, 2]]));
        assert!(matches!(
            hilbert_basis(&Cone::new(o, &[vec![1, 0], vec![-1, 0], vec![0, 1]])),
            Err(Error::NotPointed)
        ));
    }

    #[test]
    fn idp() {
        assert!(is_idp(&cube(), None));
        assert!(!is_idp(&reeve(), None));
    }

    #[test]
    fn unimodular_subsimplices() {
        let sq = LatticePolytope::new(&points(&[[0, 0], [1, 0], [0, 1], [1, 1]])).unwrap();
        assert_eq!(enumerate_unimodular_subsimplices(&sq).len(), 4);
        assert!(enumerate_unimodular_subsimplices(&reeve()).is_empty());
    }

    #[test]
    fn triangulation_and_cover() {
        assert!(has_unimodular_triangulation(&cube(), DEFAULT_BUDGET).unwrap());
        assert!(has_unimodular_cover(&cube(), DEFAULT_BUDGET).unwrap());
        assert!(!has_unimodular_triangulation(&reeve(), DEFAULT_BUDGET).unwrap());
        assert!(!has_unimodular_cover(&reeve(), DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn smooth_few_points() {
        let mut v = vec![LatticePoint::origin(5)];
        v.extend((0..5).map(|i| LatticePoint::unit(5, i)));
        let s = LatticePolytope::new(&v).unwrap();
        assert_eq!(smooth_structure(&s).unwrap(), SmoothStructure::UnimodularSimplex);
        let p = lawrence_prism(&[1, 2, 1, 1, 1]).unwrap();
        assert_eq!(smooth_structure(&p).unwrap(), SmoothStructure::LawrencePrism(vec![2, 1, 1, 1, 1]));
    }

    #[test]
    fn segmental() {
        let q = segmental_q(3);
        assert!(is_idp(&q, None));
        assert!(!is_idp(&segmental_q(4), None));
        assert!(is_very_ample(&segmental_q(16)));
    }
}
