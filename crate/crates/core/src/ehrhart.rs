//! Ehrhart polynomials, h*-vectors, special simplex families and the known
//! and conjectured inequalities on h*-vectors.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::binomial;
use crate::equivalence::{canonical_key, CanonicalKey};
use crate::error::{Error, Result};
use crate::point::LatticePoint;
use crate::polytope::LatticePolytope;

/// Coefficients `h*_0, …, h*_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HStarVector(pub Vec<u64>);

impl HStarVector {
    pub fn coefficients(&self) -> &[u64] {
        &self.0
    }

    /// Largest index with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&x| x > 0).unwrap_or(0)
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for HStarVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `ehr_P(t) = Σ c_i t^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPolynomial(pub Vec<BigRational>);

impl EhrhartPolynomial {
    pub fn coefficients(&self) -> &[BigRational] {
        &self.0
    }

    pub fn eval(&self, t: i64) -> BigRational {
        let t = BigRational::from_integer(BigInt::from(t));
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * &t + c)
    }
}

fn counts(p: &LatticePolytope) -> Vec<u64> {
    let d = p.dim();
    std::iter::once(1).chain((1..=d as i64).map(|t| p.count_dilated(t, false))).collect()
}

/// Interpolates `|tP ∩ Z^d|` at `t = 0, …, d`.
pub fn ehrhart_polynomial(p: &LatticePolytope) -> EhrhartPolynomial {
    let values = counts(p);
    let n = values.len();
    // Newton form: ehr(t) = Σ_k Δ^k(0) · C(t, k)
    let mut diff: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
    let mut newton = Vec::with_capacity(n);
    for k in 0..n {
        newton.push(diff[0].clone());
        for i in 0..n - k - 1 {
            diff[i] = &diff[i + 1] - &diff[i];
        }
    }
    let mut coeffs = vec![BigRational::zero(); n];
    // basis polynomial t(t-1)…(t-k+1), divided by k! at the end
    let mut basis = vec![BigInt::one()];
    let mut fact = BigInt::one();
    for (k, a) in newton.iter().enumerate() {
        if k > 0 {
            fact *= k;
            let mut next = vec![BigInt::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b;
                next[i] -= b * (k as i64 - 1);
            }
            basis = next;
        }
        for (i, b) in basis.iter().enumerate() {
            coeffs[i] += BigRational::new(a * b, fact.clone());
        }
    }
    EhrhartPolynomial(coeffs)
}

/// h*-vector via `h*_j = Σ_i (-1)^i C(d+1, i) ehr(j - i)`.
pub fn h_star(p: &LatticePolytope) -> Result<HStarVector> {
    let d = p.dim();
    let ehr = counts(p);
    let mut h = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut s: i128 = 0;
        for i in 0..=j {
            let term = binomial(d as u64 + 1, i as u64) as i128 * ehr[j - i] as i128;
            s += if i % 2 == 0 { term } else { -term };
        }
        if s < 0 {
            return Err(Error::NegativeCoefficient { index: j, value: s });
        }
        h.push(s as u64);
    }
    let h = HStarVector(h);
    assert_eq!(h.0[0], 1);
    assert_eq!(h.0[1] as i128, p.num_points() as i128 - d as i128 - 1);
    assert_eq!(h.0[d], p.num_interior() as u64, "top coefficient disagrees with the interior count");
    assert_eq!(h.sum(), p.volume(), "coefficient sum disagrees with the volume");
    Ok(h)
}

/// `2, 3, 7, 43, 1807, …`; stops before a term would overflow `u128`.
#[derive(Clone, Debug)]
pub struct SylvesterSequence {
    product: Option<u128>,
}

impl SylvesterSequence {
    pub fn new() -> Self {
        SylvesterSequence { product: Some(1) }
    }

    /// `s_i` (1-based).
    pub fn term(i: usize) -> u128 {
        assert!(i >= 1);
        SylvesterSequence::new().nth(i - 1).expect("Sylvester term exceeds u128")
    }
}

impl Default for SylvesterSequence {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for SylvesterSequence {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        let prod = self.product?;
        let s = prod + 1;
        self.product = prod.checked_mul(s);
        Some(s)
    }
}

/// `S^d_k = conv(0, s_1 e_1, …, s_{d-1} e_{d-1}, (k+1)(s_d - 1) e_d)`.
pub fn zpw_simplex(d: usize, k: u64) -> LatticePolytope {
    assert!(d >= 2 && k >= 1);
    let s: Vec<u128> = SylvesterSequence::new().take(d).collect();
    let mut v = vec![LatticePoint::origin(d)];
    for i in 0..d {
        let len = if i + 1 < d { s[i] } else { (k as u128 + 1) * (s[i] - 1) };
        v.push(LatticePoint::unit(d, i).scale(i64::try_from(len).expect("ZPW coordinate exceeds i64")));
    }
    LatticePolytope::new(&v).unwrap()
}

/// `D^3_k = conv(0, e_1, e_2, (3, 6k+1, 12k+8))`.
pub fn duong_simplex(k: u64) -> LatticePolytope {
    assert!(k >= 1);
    let k = k as i64;
    triangle_apex(&[[3, 6 * k + 1, 12 * k + 8]])
}

/// `conv(0, e_1, e_2, extra…)`.
fn triangle_apex(extra: &[[i64; 3]]) -> LatticePolytope {
    let mut v = vec![LatticePoint::from([0, 0, 0]), LatticePoint::from([1, 0, 0]), LatticePoint::from([0, 1, 0])];
    v.extend(extra.iter().map(|&p| LatticePoint::from(p)));
    LatticePolytope::new(&v).unwrap()
}

fn poly(pts: &[[i64; 3]]) -> LatticePolytope {
    LatticePolytope::new(&crate::point::points(pts)).unwrap()
}

/// Realizable h*-vectors of lattice polygons.
pub fn check_scott(h: &[u64]) -> bool {
    assert_eq!(h.len(), 3);
    let (h1, h2) = (h[1], h[2]);
    h2 == 0 || (h2 <= h1 && h1 <= 3 * h2 + 3) || (h1, h2) == (7, 1)
}

/// Realizable h*-vectors of hollow 3-polytopes.
pub fn check_hollow_3d(h: &[u64]) -> bool {
    assert_eq!(h.len(), 4);
    assert_eq!(h[3], 0, "not hollow");
    let (h1, h2) = (h[1], h[2]);
    h2 == 0 || h1 <= 3 * h2 + 3 || (h1, h2) == (7, 1)
}

/// Truth values of the conjectured inequalities for a 3-polytope with interior points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ConjMainReport {
    /// `h3 <= h1`
    pub i1: bool,
    /// `h1 <= h2`
    pub i2: bool,
    /// `h2 <= 19 h3 + 16`
    pub i3: bool,
    /// `h2 - h1 <= 9 h3 + 9`
    pub i4: bool,
    /// `5 h3 h1 + 4 h1 + 4 <= 4 h3² + 4 h3 h2 + 5 h2`
    pub i5: bool,
    /// `h2 - h1 <= 9 h3 + 7`
    pub i4_star: bool,
    /// Whether the polytope is on the exception list for the strong form.
    pub is_exception: bool,
}

impl ConjMainReport {
    pub fn as_array(&self) -> [bool; 6] {
        [self.i1, self.i2, self.i3, self.i4, self.i5, self.i4_star]
    }

    /// Every inequality holds, with the strong form waived for listed exceptions.
    pub fn consistent(&self) -> bool {
        self.i1 && self.i2 && self.i3 && self.i4 && self.i5 && (self.i4_star || self.is_exception)
    }
}

pub fn check_conj_main(h: &[u64], is_exception: bool) -> ConjMainReport {
    assert_eq!(h.len(), 4);
    assert!(h[3] >= 1, "no interior points");
    let (h1, h2, h3) = (h[1] as i128, h[2] as i128, h[3] as i128);
    ConjMainReport {
        i1: h3 <= h1,
        i2: h1 <= h2,
        i3: h2 <= 19 * h3 + 16,
        i4: h2 - h1 <= 9 * h3 + 9,
        i5: 5 * h3 * h1 + 4 * h1 + 4 <= 4 * h3 * h3 + 4 * h3 * h2 + 5 * h2,
        i4_star: h2 - h1 <= 9 * h3 + 7,
        is_exception,
    }
}

/// A named polytope with its expected h*-vector.
#[derive(Clone, Debug)]
pub struct Witness {
    pub label: String,
    pub polytope: LatticePolytope,
    pub h_star: HStarVector,
}

impl Witness {
    fn new(label: impl Into<String>, polytope: LatticePolytope, h: [u64; 4]) -> Self {
        Witness { label: label.into(), polytope, h_star: HStarVector(h.to_vec()) }
    }
}

/// Polytopes exempt from the strong form `(4*)`; the two families for `k = 1..=k_max`.
pub fn conj_main_exceptions(k_max: u64) -> Vec<Witness> {
    let mut out = vec![
        Witness::new("i", triangle_apex(&[[2, 19, 25]]), [1, 3, 20, 1]),
        Witness::new("ii", triangle_apex(&[[3, 19, 28]]), [1, 4, 22, 1]),
        Witness::new("iii", triangle_apex(&[[3, 13, 19], [1, -2, -3]]), [1, 5, 22, 1]),
        Witness::new("iv", triangle_apex(&[[4, 7, 11], [-5, -7, -15]]), [1, 7, 24, 1]),
        Witness::new("v", triangle_apex(&[[2, 2, 3], [-21, -8, -25]]), [1, 11, 28, 1]),
        Witness::new("vi", triangle_apex(&[[5, 17, 42]]), [1, 11, 29, 1]),
        Witness::new("vii", triangle_apex(&[[5, 7, 17], [1, -2, -5]]), [1, 12, 29, 1]),
        Witness::new("viii", triangle_apex(&[[7, 2, 9], [-7, -3, -15]]), [1, 13, 30, 1]),
        Witness::new("ix", triangle_apex(&[[0, 0, 1], [5, 42, -25]]), [1, 14, 31, 1]),
        Witness::new("x", triangle_apex(&[[5, 23, 45]]), [1, 8, 34, 2]),
    ];
    for k in 1..=k_max {
        let h = [1, 4 * k + 3, 13 * k + 11, k];
        let k = k as i64;
        out.push(Witness::new(format!("xi(k={k})"), triangle_apex(&[[3 * k + 3, 9 * k + 8, 18 * k + 15]]), h));
        out.push(Witness::new(format!("xii(k={k})"), triangle_apex(&[[3, 12 * k + 8, 18 * k + 15]]), h));
    }
    out
}

/// Vertices `v1, …, v5` of the pentagon cut out by the conjectured inequalities at fixed `h3`.
pub fn pentagon_vertices(h3: u64) -> [HStarVector; 5] {
    assert!(h3 >= 2);
    let v = |a: u64, b: u64| HStarVector(vec![1, a, b, h3]);
    [
        v(h3, h3),
        v(4 * h3 + 4, 4 * h3 + 4),
        v(16 * h3 + 19, 19 * h3 + 16),
        v(10 * h3 + 9, 19 * h3 + 16),
        v(h3, 10 * h3 + 7),
    ]
}

/// Polytopes realizing `v1`, `v2`, `v3` and `v5`.
pub fn pentagon_witnesses(h3: u64) -> Vec<Witness> {
    let [v1, v2, v3, _, v5] = pentagon_vertices(h3);
    let k = h3 as i64;
    let w = |label: &str, p: LatticePolytope, h: HStarVector| Witness { label: label.into(), polytope: p, h_star: h };
    vec![
        w("v1", triangle_apex(&[[3, 3 * k, 3 * k + 1]]), v1),
        w("v2", poly(&[[0, 0, 0], [1, 0, 0], [2, 3, 0], [2, 3, 3 + 3 * k]]), v2),
        w("v3", zpw_simplex(3, h3), v3),
        w("v5", duong_simplex(h3), v5),
    ]
}

/// Three polytopes with h*-vectors next to the unrealized pentagon vertex `v4`.
pub fn v4_neighbors(h3: u64) -> [Witness; 3] {
    assert!(h3 >= 1);
    let k = h3 as i64;
    [
        Witness::new(
            "first",
            poly(&[[1, 0, 0], [2, 0, 0], [0, 1, 0], [0, 3, 0], [0, 0, 6 * k + 5], [1, 0, 3 * k + 3]]),
            [1, 10 * h3 + 11, 19 * h3 + 16, h3],
        ),
        Witness::new(
            "second",
            triangle_apex(&[[9 * k + 8, 6 * k + 5, 18 * k + 15], [12 * k + 10, 8 * k + 7, 24 * k + 20]]),
            [1, 10 * h3 + 9, 19 * h3 + 15, h3],
        ),
        Witness::new(
            "third",
            triangle_apex(&[[6 * k + 5, 3 * k + 3, 18 * k + 15], [8 * k + 5, 4 * k + 3, 24 * k + 14]]),
            [1, 10 * h3 + 7, 19 * h3 + 14, h3],
        ),
    ]
}

/// One flag per family of the classical linear inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StanleyHibiReport {
    /// `h_d <= h_1`
    pub top_below_linear: bool,
    /// `h_{d-1} + … + h_{d-i} <= h_2 + … + h_{i+1}` for `1 <= i <= (d-1)/2`
    pub hibi: bool,
    /// `h_0 + … + h_i <= h_s + … + h_{s-i}` for `0 <= i <= s`
    pub stanley: bool,
    /// `h_d > 0` implies `h_1 <= h_i` for `1 <= i < d`
    pub interior_lower: bool,
}

impl StanleyHibiReport {
    pub fn all(&self) -> bool {
        self.top_below_linear && self.hibi && self.stanley && self.interior_lower
    }
}

pub fn check_stanley_hibi(h: &[u64], s: usize) -> StanleyHibiReport {
    let d = h.len() - 1;
    let sum = |r: std::ops::RangeInclusive<usize>| -> u64 { r.map(|i| h[i]).sum() };
    let hibi = (1..=(d.saturating_sub(1)) / 2).all(|i| sum(d - i..=d - 1) <= sum(2..=i + 1));
    let stanley = (0..=s).all(|i| sum(0..=i) <= sum(s - i..=s));
    let interior_lower = h[d] == 0 || (1..d).all(|i| h[1] <= h[i]);
    StanleyHibiReport { top_below_linear: h[d] <= h[1], hibi, stanley, interior_lower }
}

/// `a_{i-1} a_{i+1} <= a_i²` for every inner index.
pub fn log_concave(a: &[u64]) -> bool {
    a.windows(3).all(|w| (w[0] as u128) * (w[2] as u128) <= (w[1] as u128) * (w[1] as u128))
}

/// Weakly increasing, then weakly decreasing.
pub fn unimodal(a: &[u64]) -> bool {
    let mut i = 0;
    while i + 1 < a.len() && a[i] <= a[i + 1] {
        i += 1;
    }
    a[i..].windows(2).all(|w| w[0] >= w[1])
}

/// Converts a rational known to be integral.
pub(crate) fn integral(x: &BigRational) -> Option<i128> {
    x.is_integer().then(|| x.to_integer().to_i128()).flatten()
}

/// `(-1)^d ehr_P(-t)`, the interior count of `tP` by reciprocity.
pub fn reciprocity_count(e: &EhrhartPolynomial, t: i64) -> i128 {
    let d = e.0.len() - 1;
    let v = e.eval(-t);
    let v = if d % 2 == 0 { v } else { -v };
    debug_assert!(!v.is_negative());
    integral(&v).expect("Ehrhart polynomial at an integer is integral")
}

/// Tallies of the conjectured inequalities over a set of h*-vectors.
#[derive(Clone, Debug, Default)]
pub struct ConjectureSummary {
    pub polytopes: usize,
    /// Three-dimensional polytopes with interior points, checked against the inequalities.
    pub checked: usize,
    /// Per inequality `(1), (2), (3), (4), (5), (4*)`: how many hold.
    pub holds: [usize; 6],
    /// Polytopes violating one of `(1)`–`(5)`, or `(4*)` while not a listed exception.
    pub violations: Vec<(CanonicalKey, HStarVector)>,
    /// Listed exceptions found, with their labels.
    pub exceptions_found: Vec<(CanonicalKey, String)>,
    /// Hollow three-dimensional polytopes checked, and how many failed the hollow bound.
    pub hollow: (usize, usize),
    /// Polytopes checked against the linear inequalities, and how many failed.
    pub stanley_hibi: (usize, usize),
}

impl ConjectureSummary {
    pub fn add(&mut self, key: &CanonicalKey, h: &HStarVector, exceptions: &HashMap<CanonicalKey, String>) {
        self.polytopes += 1;
        let c = &h.0;
        let d = c.len() - 1;
        self.stanley_hibi.0 += 1;
        if !check_stanley_hibi(c, h.degree()).all() {
            self.stanley_hibi.1 += 1;
        }
        if d != 3 {
            return;
        }
        if c[3] == 0 {
            self.hollow.0 += 1;
            if !check_hollow_3d(c) {
                self.hollow.1 += 1;
            }
            return;
        }
        self.checked += 1;
        let label = exceptions.get(key);
        let r = check_conj_main(c, label.is_some());
        for (n, ok) in self.holds.iter_mut().zip(r.as_array()) {
            *n += ok as usize;
        }
        if let Some(l) = label {
            self.exceptions_found.push((key.clone(), l.clone()));
        }
        if !r.consistent() {
            self.violations.push((key.clone(), h.clone()));
        }
    }
}

impl fmt::Display for ConjectureSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "polytopes: {}", self.polytopes)?;
        writeln!(f, "with interior points (d=3): {}", self.checked)?;
        for (name, n) in ["(1)", "(2)", "(3)", "(4)", "(5)", "(4*)"].iter().zip(self.holds) {
            writeln!(f, "inequality {name}: {n} hold, {} fail", self.checked - n)?;
        }
        writeln!(f, "hollow (d=3): {} checked, {} fail", self.hollow.0, self.hollow.1)?;
        writeln!(f, "linear inequalities: {} checked, {} fail", self.stanley_hibi.0, self.stanley_hibi.1)?;
        writeln!(f, "exceptions found: {}", self.exceptions_found.len())?;
        for (k, l) in &self.exceptions_found {
            writeln!(f, "  {l} {k}")?;
        }
        writeln!(f, "violations: {}", self.violations.len())?;
        for (k, h) in &self.violations {
            writeln!(f, "  {k} {h}")?;
        }
        Ok(())
    }
}

/// Canonical keys of the listed exceptions with volume at most `max_volume`.
pub fn exception_keys(max_volume: u64) -> HashMap<CanonicalKey, String> {
    let k_max = max_volume.saturating_sub(15) / 18;
    conj_main_exceptions(k_max.max(1))
        .into_iter()
        .filter(|w| w.polytope.volume() <= max_volume)
        .map(|w| (canonical_key(&w.polytope), w.label))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::points;

    fn unit_simplex(d: usize) -> LatticePolytope {
        let mut v = vec![LatticePoint::origin(d)];
        v.extend((0..d).map(|i| LatticePoint::unit(d, i)));
        LatticePolytope::new(&v).unwrap()
    }

    #[test]
    fn simplex_and_square() {
        for d in 1..=4 {
            let e = ehrhart_polynomial(&unit_simplex(d));
            for t in 0..6 {
                assert_eq!(integral(&e.eval(t)), Some(binomial(t as u64 + d as u64, d as u64) as i128));
            }
            let mut h = vec![0; d + 1];
            h[0] = 1;
            assert_eq!(h_star(&unit_simplex(d)).unwrap().0, h);
        }
        let sq = LatticePolytope::new(&points(&[[0, 0], [1, 0], [0, 1], [1, 1]])).unwrap();
        let e = ehrhart_polynomial(&sq);
        let one = BigRational::one();
        assert_eq!(e.0, vec![one.clone(), one.clone() * BigInt::from(2), one]);
        assert_eq!(h_star(&sq).unwrap().0, vec![1, 1, 0]);
    }

    #[test]
    fn zpw_points() {
        assert_eq!(zpw_simplex(3, 1).num_points(), 39);
        assert_eq!(zpw_simplex(3, 1).volume(), 72);
        assert_eq!(zpw_simplex(3, 2).volume(), 108);
        let v = zpw_simplex(4, 1).vertices().iter().map(|p| p.0[3]).max().unwrap();
        assert_eq!(v, 84);
    }

    #[test]
    fn sylvester() {
        let s: Vec<u128> = SylvesterSequence::new().take(6).collect();
        assert_eq!(s, vec![2, 3, 7, 43, 1807, 3263443]);
        assert_eq!(SylvesterSequence::term(4), 43);
        // every term is one more than the product of the previous ones
        let n = SylvesterSequence::new().count();
        assert!(n >= 7);
    }

    #[test]
    fn duong_is_clean() {
        let p = duong_simplex(2);
        let boundary: Vec<_> = p.lattice_points().iter().filter(|x| !p.contains_strictly(&x.0)).collect();
        assert_eq!(boundary.len(), 4);
        assert_eq!(p.volume(), 32);
        assert_eq!(h_star(&duong_simplex(1)).unwrap().0, vec![1, 1, 17, 1]);
    }

    #[test]
    fn scott_and_hollow() {
        assert!(check_scott(&[1, 3, 0]));
        assert!(check_scott(&[1, 7, 1]));
        assert!(!check_scott(&[1, 8, 1]));
        assert!(check_hollow_3d(&[1, 7, 1, 0]));
        assert!(!check_hollow_3d(&[1, 10, 2, 0]));
    }

    #[test]
    fn conj_main_edges() {
        let r = check_conj_main(&[1, 35, 35, 1], false);
        // (3) and (5) are tight here
        assert!(r.consistent() && !check_conj_main(&[1, 35, 36, 1], false).i3);
        let r = check_conj_main(&[1, 1, 17, 1], false);
        assert!(r.i1 && r.i4_star);
        let r = check_conj_main(&[1, 3, 20, 1], true);
        assert!(!r.i4_star && r.i4 && r.consistent());
        assert!(!check_conj_main(&[1, 3, 20, 1], false).consistent());
    }

    #[test]
    fn stanley_hibi() {
        assert!(!check_stanley_hibi(&[1, 0, 0, 1], 3).top_below_linear);
        assert!(check_stanley_hibi(&[1, 35, 35, 1], 3).all());
    }

    #[test]
    fn sequences() {
        assert!(!log_concave(&[1, 4, 17, 0]));
        assert!(log_concave(&[1, 4, 16, 0]));
        assert!(unimodal(&[1, 35, 35, 1]));
        assert!(!unimodal(&[1, 0, 1]));
        assert!(unimodal(&[]));
    }

    #[test]
    fn reciprocity_on_cube() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(LatticePoint::from([x, y, z]));
                }
            }
        }
        let c = LatticePolytope::new(&pts).unwrap();
        let e = ehrhart_polynomial(&c);
        assert_eq!(reciprocity_count(&e, 1), 0);
        assert_eq!(reciprocity_count(&e, 3), 8);
    }
}
