//! Dense integer matrices with Hermite and Smith normal forms.

use std::fmt;

use num_bigint::BigInt;


use crate::arith::{with_fallback, Exact};
use crate::error::{Error, Result};

/// Row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != entries.len() {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)))
            .collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| num_traits::ToPrimitive::to_i64(x)).collect())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape("dimension mismatch in product".into()));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = BigInt::zero();
                for k in 0..self.cols {
                    s += self.get(i, k) * other.get(k, j);
                }
                entries.push(s);
            }
        }
        IntMatrix::new(self.rows, other.cols, entries)
    }

    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let m = self.nested::<BigInt>().expect("BigInt lift");
        Ok(crate::arith::bareiss_det(m).expect("BigInt cannot overflow"))
    }

    fn nested<T: Exact + FromBig>(&self) -> Option<Vec<Vec<T>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(T::from_big).collect())
            .collect()
    }

    fn from_nested<T: Exact>(m: &[Vec<T>]) -> IntMatrix {
        let rows = m.len();
        let cols = m[0].len();
        let entries = m.iter().flat_map(|r| r.iter().map(|x| x.to_big())).collect();
        IntMatrix { rows, cols, entries }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

trait FromBig: Sized {
    fn from_big(b: &BigInt) -> Option<Self>;
}

impl FromBig for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
}

impl FromBig for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
}

/// Row-style Hermite normal form of a nonsingular square matrix.
///
/// Returns `(H, U)` with `H = U·M`, `U` unimodular, `H` upper triangular with
/// positive diagonal and every entry above a pivot reduced into `[0, h_jj)`.
/// With the vertices of a simplex as the columns of `M`, the columns of `H`
/// are the vertices of an equivalent simplex.
pub fn hnf(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    if m.rows != m.cols {
        return Err(Error::Shape("hnf expects a square matrix".into()));
    }
    let n = m.rows;
    let out = with_fallback(
        || m.nested::<i128>().and_then(|a| hnf_generic(a, n)),
        || hnf_generic(m.nested::<BigInt>()?, n),
    );
    match out {
        HnfOutcome::Singular => Err(Error::SingularMatrix),
        HnfOutcome::Done(h, u) => Ok((h, u)),
    }
}

enum HnfOutcome {
    Singular,
    Done(IntMatrix, IntMatrix),
}

fn hnf_generic<T: Exact>(mut a: Vec<Vec<T>>, n: usize) -> Option<HnfOutcome> {
    let mut u: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    for j in 0..n {
        // gcd of column j (rows j..n) into row j
        for i in j + 1..n {
            if a[i][j].is_zero() {
                continue;
            }
            let (g, x, y) = T::ext_gcd(&a[j][j], &a[i][j])?;
            let p = a[j][j].div_exact(&g);
            let q = a[i][j].div_exact(&g);
            // [x y; -q p] has determinant x·p + y·q = 1
            for mat in [&mut a, &mut u] {
                for c in 0..n {
                    let top = x.mul(&mat[j][c])?.add(&y.mul(&mat[i][c])?)?;
                    let bot = p.mul(&mat[i][c])?.sub(&q.mul(&mat[j][c])?)?;
                    mat[j][c] = top;
                    mat[i][c] = bot;
                }
            }
        }
        if a[j][j].is_zero() {
            return Some(HnfOutcome::Singular);
        }
        if a[j][j].is_negative() {
            for mat in [&mut a, &mut u] {
                for c in 0..n {
                    mat[j][c] = mat[j][c].neg()?;
                }
            }
        }
        let piv = a[j][j].clone();
        for i in 0..j {
            let f = a[i][j].div_floor(&piv);
            if f.is_zero() {
                continue;
            }
            for mat in [&mut a, &mut u] {
                for c in 0..n {
                    mat[i][c] = mat[i][c].sub(&f.mul(&mat[j][c])?)?;
                }
            }
        }
    }
    Some(HnfOutcome::Done(
        IntMatrix::from_nested(&a),
        IntMatrix::from_nested(&u),
    ))
}

/// Smith invariant factors `d_1 | d_2 | …`, `min(rows, cols)` of them,
/// trailing zeros for rank deficiency.
pub fn snf_invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    with_fallback(
        || snf_generic(m.nested::<i128>()?),
        || snf_generic(m.nested::<BigInt>()?),
    )
}

fn snf_generic<T: Exact>(mut a: Vec<Vec<T>>) -> Option<Vec<BigInt>> {
    let rows = a.len();
    let cols = a[0].len();
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => a[i][j].abs()? < a[bi][bj].abs()?,
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                let mut out: Vec<BigInt> = (0..t).map(|i| a[i][i].to_big()).collect();
                out.resize(k, BigInt::zero());
                return Some(normalize_divisibility(out));
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let piv = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let f = a[i][t].div_trunc(&piv);
                if !f.is_zero() {
                    for c in t..cols {
                        a[i][c] = a[i][c].sub(&f.mul(&a[t][c])?)?;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let f = a[t][j].div_trunc(&piv);
                if !f.is_zero() {
                    for r in a.iter_mut().skip(t) {
                        r[j] = r[j].sub(&f.mul(&r[t])?)?;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole trailing block
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| {
                    let q = a[i][j].div_trunc(&piv);
                    q.mul(&piv).map_or(true, |p| p != a[i][j])
                })
            });
            match bad {
                Some(i) => {
                    for c in t..cols {
                        a[t][c] = a[t][c].add(&a[i][c])?;
                    }
                }
                None => break,
            }
        }
    }
    let out = (0..k).map(|i| a[i][i].to_big()).collect();
    Some(normalize_divisibility(out))
}

fn normalize_divisibility(mut d: Vec<BigInt>) -> Vec<BigInt> {
    use num_integer::Integer;
    for x in d.iter_mut() {
        *x = num_traits::Signed::abs(x);
    }
    // (a, b) -> (gcd, lcm) until the chain divides
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            if d[j].is_zero() {
                continue;
            }
            if d[i].is_zero() {
                d.swap(i, j);
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_hnf(a: &IntMatrix) -> IntMatrix {
        let (h, u) = hnf(a).unwrap();
        assert_eq!(u.mul(a).unwrap(), h);
        assert_eq!(Exact::abs(&u.det().unwrap()).unwrap(), BigInt::one());
        for j in 0..h.cols() {
            assert!(num_traits::Signed::is_positive(h.get(j, j)));
            for i in j + 1..h.rows() {
                assert!(h.get(i, j).is_zero());
            }
            for i in 0..j {
                assert!(!h.get(i, j).is_negative() && h.get(i, j) < h.get(j, j));
            }
        }
        h
    }

    #[test]
    fn hnf_identity_is_fixed() {
        let id = IntMatrix::identity(4);
        let (h, u) = hnf(&id).unwrap();
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn hnf_two_by_two() {
        let h = check_hnf(&m(&[vec![1, 2], vec![3, 4]]));
        assert_eq!(h.get(0, 0) * h.get(1, 1), BigInt::from(2));
    }

    #[test]
    fn hnf_diagonal_simplex() {
        // vertex matrix of conv(0, 2e1, 3e2, 6e3), columns are the vertices
        let h = check_hnf(&m(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 6]]));
        let diag: Vec<_> = (0..3).map(|i| h.get(i, i).clone()).collect();
        assert_eq!(diag, big(&[2, 3, 6]));
    }

    #[test]
    fn hnf_singular() {
        assert!(matches!(hnf(&m(&[vec![1, 2], vec![2, 4]])), Err(Error::SingularMatrix)));
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf_invariant_factors(&IntMatrix::identity(3)), big(&[1, 1, 1]));
        assert_eq!(snf_invariant_factors(&m(&[vec![2, 0], vec![0, 4]])), big(&[2, 4]));
        // columns e1, e2, (1,1,2)
        let a = m(&[vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 2]]);
        assert_eq!(snf_invariant_factors(&a), big(&[1, 1, 2]));
        assert_eq!(snf_invariant_factors(&m(&[vec![2, 0], vec![0, 3]])), big(&[1, 6]));
        assert_eq!(snf_invariant_factors(&m(&[vec![2, 4, 6]])), big(&[2]));
        assert_eq!(snf_invariant_factors(&m(&[vec![1, 2], vec![2, 4]])), big(&[1, 0]));
    }
}
