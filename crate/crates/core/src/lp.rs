//! Exact feasibility of `{ y >= 0 : M y = b }` by phase-one simplex over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Whether `M y = b` has a nonnegative solution. Bland's rule, so no cycling.
pub fn feasible(m: &[Vec<i64>], b: &[i64]) -> bool {
    let rows = m.len();
    if rows == 0 {
        return true;
    }
    let n = m[0].len();
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    // columns: n originals, then one artificial per row, then the right-hand side
    let width = n + rows + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows + 1);
    for (i, row) in m.iter().enumerate() {
        let flip = b[i] < 0;
        let s = |x: i64| if flip { q(-x) } else { q(x) };
        let mut r: Vec<BigRational> = row.iter().map(|&x| s(x)).collect();
        r.extend((0..rows).map(|j| if j == i { q(1) } else { q(0) }));
        r.push(s(b[i]));
        t.push(r);
    }
    // objective row: minimize the sum of artificials, in reduced form
    let mut obj = vec![BigRational::zero(); width];
    for r in &t {
        for c in 0..n {
            obj[c] -= &r[c];
        }
        obj[width - 1] -= &r[width - 1];
    }
    let mut basis: Vec<usize> = (n..n + rows).collect();
    loop {
        let Some(enter) = (0..n + rows).find(|&c| obj[c].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, r) in t.iter().enumerate() {
            if r[enter].is_positive() {
                let ratio = &r[width - 1] / &r[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // an unbounded direction cannot occur: the objective is bounded below by zero
        let (li, _) = leave.expect("phase-one objective is bounded");
        let piv = t[li][enter].clone();
        for x in t[li].iter_mut() {
            *x /= &piv;
        }
        let prow = t[li].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i != li && !r[enter].is_zero() {
                let f = r[enter].clone();
                for (x, p) in r.iter_mut().zip(&prow) {
                    *x -= &f * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, p) in obj.iter_mut().zip(&prow) {
                *x -= &f * p;
            }
        }
        basis[li] = enter;
    }
    obj[width - 1].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_systems() {
        // y1 + y2 = 1
        assert!(feasible(&[vec![1, 1]], &[1]));
        // y1 - y2 = -1 has y2 = 1
        assert!(feasible(&[vec![1, -1]], &[-1]));
        // y1 + y2 = -1 has no nonnegative solution
        assert!(!feasible(&[vec![1, 1]], &[-1]));
        // y1 = 1, y1 = 2
        assert!(!feasible(&[vec![1], vec![1]], &[1, 2]));
        // 2 y1 + 3 y2 = 7, y1 - y2 = 1 -> y = (2, 1)
        assert!(feasible(&[vec![2, 3], vec![1, -1]], &[7, 1]));
        // y1 - y2 = 0, y1 + y2 = 0 forces zero, and y3 = 1
        assert!(feasible(&[vec![1, -1, 0], vec![1, 1, 0], vec![0, 0, 1]], &[0, 0, 1]));
    }
}
