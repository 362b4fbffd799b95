//! Exact integer arithmetic with a checked fixed-width fast path.
//!
//! Every routine that can overflow is written once, generically over [`Exact`].
//! It runs first on `i128` with checked operations; if any step overflows the
//! same routine is re-run on [`BigInt`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer ring operations that report overflow instead of wrapping.
pub trait Exact: Clone + Ord + Debug {
    fn from_i64(v: i64) -> Self;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Exact quotient; the caller guarantees divisibility.
    fn div_exact(&self, o: &Self) -> Self;
    /// Floor division for `o > 0`.
    fn div_floor(&self, o: &Self) -> Self;
    fn to_i128(&self) -> Option<i128>;
    fn to_big(&self) -> BigInt;

    fn abs(&self) -> Option<Self> {
        if self.is_negative() {
            self.neg()
        } else {
            Some(self.clone())
        }
    }

    /// Extended gcd: `(g, x, y)` with `g = x*a + y*b`, `g >= 0`.
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let (mut old_r, mut r) = (a.clone(), b.clone());
        let (mut old_s, mut s) = (Self::one(), Self::zero());
        let (mut old_t, mut t) = (Self::zero(), Self::one());
        while !r.is_zero() {
            let q = old_r.div_trunc(&r);
            let nr = old_r.sub(&q.mul(&r)?)?;
            old_r = std::mem::replace(&mut r, nr);
            let ns = old_s.sub(&q.mul(&s)?)?;
            old_s = std::mem::replace(&mut s, ns);
            let nt = old_t.sub(&q.mul(&t)?)?;
            old_t = std::mem::replace(&mut t, nt);
        }
        if old_r.is_negative() {
            Some((old_r.neg()?, old_s.neg()?, old_t.neg()?))
        } else {
            Some((old_r, old_s, old_t))
        }
    }

    /// Truncating division toward zero, any nonzero divisor.
    fn div_trunc(&self, o: &Self) -> Self;
}

impl Exact for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn div_trunc(&self, o: &Self) -> Self {
        self / o
    }
    fn to_i128(&self) -> Option<i128> {
        Some(*self)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Exact for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn div_trunc(&self, o: &Self) -> Self {
        self / o
    }
    fn to_i128(&self) -> Option<i128> {
        ToPrimitive::to_i128(self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Runs `f` on `i128`, retrying on `BigInt` when the fast path overflows.
pub fn with_fallback<R>(
    fast: impl FnOnce() -> Option<R>,
    slow: impl FnOnce() -> Option<R>,
) -> R {
    match fast() {
        Some(r) => r,
        None => slow().expect("exact arithmetic on BigInt cannot overflow"),
    }
}

/// Fraction-free (Bareiss) determinant of a square matrix.
pub fn bareiss_det<T: Exact>(mut m: Vec<Vec<T>>) -> Option<T> {
    let n = m.len();
    if n == 0 {
        return Some(T::one());
    }
    let mut sign_neg = false;
    let mut prev = T::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Some(T::zero());
            };
            m.swap(k, swap);
            sign_neg = !sign_neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].mul(&m[k][k])?;
                let b = m[i][k].mul(&m[k][j])?;
                m[i][j] = a.sub(&b)?.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_neg {
        d.neg()
    } else {
        Some(d)
    }
}

fn lift<T: Exact>(rows: &[Vec<i64>]) -> Vec<Vec<T>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| T::from_i64(x)).collect())
        .collect()
}

/// Exact determinant of a square `i64` matrix (rows).
pub fn det(rows: &[Vec<i64>]) -> i128 {
    debug_assert!(rows.iter().all(|r| r.len() == rows.len()));
    with_fallback(
        || bareiss_det::<i128>(lift(rows)),
        || bareiss_det::<BigInt>(lift(rows)).map(|d| ToPrimitive::to_i128(&d).expect("determinant exceeds i128")),
    )
}

/// Rank of an integer matrix (rows), by fraction-free elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    fn go<T: Exact>(mut m: Vec<Vec<T>>) -> Option<usize> {
        let cols = m.first().map_or(0, |r| r.len());
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].clone();
                let piv = m[r][c].clone();
                for j in c..cols {
                    m[i][j] = m[i][j].mul(&piv)?.sub(&m[r][j].mul(&f)?)?;
                }
                // keep entries small
                let g = m[i][c..].iter().fold(T::zero(), |g, x| gcd_exact(&g, x));
                if !g.is_zero() && g != T::one() {
                    for j in c..cols {
                        m[i][j] = m[i][j].div_exact(&g);
                    }
                }
            }
            r += 1;
        }
        Some(r)
    }
    with_fallback(|| go::<i128>(lift(rows)), || go::<BigInt>(lift(rows)))
}

fn gcd_exact<T: Exact>(a: &T, b: &T) -> T {
    let (mut a, mut b) = (a.abs().unwrap_or_else(|| a.clone()), b.abs().unwrap_or_else(|| b.clone()));
    while !b.is_zero() {
        let r = a.sub(&a.div_floor(&b).mul(&b).expect("gcd step")).expect("gcd step");
        a = std::mem::replace(&mut b, r);
    }
    a
}

/// Nonnegative gcd of a slice; 0 for an all-zero slice.
pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides a vector by the gcd of its entries.
pub fn primitive(v: &mut [i64]) {
    let g = gcd_all(v);
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

pub fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        assert_eq!(det(&[vec![1, 2], vec![3, 4]]), -2);
        assert_eq!(det(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 6]]), 36);
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&[vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn det_overflow_falls_back() {
        let big: i64 = 1 << 40;
        let m = vec![
            vec![big, 1, 0],
            vec![1, big, 1],
            vec![0, 1, big],
        ];
        // i128 overflows in the Bareiss products; BigInt result checked by cofactor expansion
        let b = BigInt::from(big);
        let expect = &b * (&b * &b - 1) - &b;
        assert_eq!(BigInt::from(det(&m)), expect);
    }

    #[test]
    fn rank_and_gcd() {
        assert_eq!(rank(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]), 2);
        assert_eq!(gcd_all(&[4, -6, 10]), 2);
        let mut v = vec![4, -6, 10];
        primitive(&mut v);
        assert_eq!(v, vec![2, -3, 5]);
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(factorial(6), 720);
    }

    #[test]
    fn ext_gcd_identity() {
        let (g, x, y) = <i128 as Exact>::ext_gcd(&-12, &18).unwrap();
        assert_eq!(g, 6);
        assert_eq!(x * -12 + y * 18, 6);
    }
}
