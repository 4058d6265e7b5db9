//! Dense matrices over a commutative `Scalar` ring.

use super::scalar::Scalar;
use crate::error::{Error, Result};

pub type Matrix<S> = Vec<Vec<S>>;

pub fn identity<S: Scalar>(n: usize, like: &S) -> Matrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { like.one_like() } else { like.zero_like() }).collect())
        .collect()
}

pub fn mat_mul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let zero = a.first().and_then(|r| r.first()).or_else(|| b.first().and_then(|r| r.first()));
    let Some(zero) = zero.map(|z| z.zero_like()) else {
        return vec![vec![]; n];
    };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = zero.clone();
                    for t in 0..k {
                        if !a[i][t].is_zero() && !b[t][j].is_zero() {
                            s = s.add(&a[i][t].mul(&b[t][j]));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<S: Scalar>(a: &Matrix<S>, v: &[S], zero: &S) -> Vec<S> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(zero.zero_like(), |acc, (x, y)| if x.is_zero() || y.is_zero() { acc } else { acc.add(&x.mul(y)) })
        })
        .collect()
}

pub fn transpose<S: Clone>(a: &Matrix<S>) -> Matrix<S> {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

fn check_square<S>(a: &Matrix<S>) -> Result<usize> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("expected a square matrix of size {n}")));
    }
    Ok(n)
}

/// Division-free determinant (Berkowitz) over any commutative ring.
pub fn det_berkowitz<S: Scalar>(a: &Matrix<S>, one: &S) -> Result<S> {
    let n = check_square(a)?;
    if n == 0 {
        return Ok(one.one_like());
    }
    let zero = one.zero_like();
    // char poly coefficients [1, c1, ..., cn] of det(x - A)
    let mut transforms: Vec<Matrix<S>> = Vec::new();
    let mut m = a.clone();
    for size in (2..=n).rev() {
        let r: Vec<S> = m[0][1..].iter().map(|x| x.neg()).collect();
        let c: Vec<S> = m[1..].iter().map(|row| row[0].clone()).collect();
        let sub: Matrix<S> = m[1..].iter().map(|row| row[1..].to_vec()).collect();
        let a00 = m[0][0].neg();
        let mut items = vec![c.clone()];
        for i in 0..size.saturating_sub(2) {
            let next = mat_vec(&sub, &items[i], &zero);
            items.push(next);
        }
        let mut scal: Vec<S> = vec![one.one_like(), a00];
        for it in &items {
            scal.push(r.iter().zip(it).fold(zero.clone(), |acc, (x, y)| acc.add(&x.mul(y))));
        }
        let mut t = vec![vec![zero.clone(); size]; size + 1];
        for i in 0..size {
            for (k, s) in scal.iter().enumerate().take(size - i + 1) {
                t[i + k][i] = s.clone();
            }
        }
        transforms.push(t);
        m = sub;
    }
    let mut poly: Vec<S> = vec![one.one_like(), m[0][0].neg()];
    for t in transforms.iter().rev() {
        poly = t
            .iter()
            .map(|row| row.iter().zip(&poly).fold(zero.clone(), |acc, (x, y)| acc.add(&x.mul(y))))
            .collect();
    }
    let cn = poly[n].clone();
    Ok(if n % 2 == 0 { cn } else { cn.neg() })
}

/// Determinant by elimination over a field (every nonzero scalar invertible).
pub fn det_field<S: Scalar>(a: &Matrix<S>, one: &S) -> Result<S> {
    let n = check_square(a)?;
    let mut m = a.clone();
    let mut det = one.one_like();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(one.zero_like());
        };
        if piv != col {
            m.swap(piv, col);
            det = det.neg();
        }
        let p = m[col][col].clone();
        det = det.mul(&p);
        let inv = p.try_inv().ok_or_else(|| Error::NotInvertible("pivot".into()))?;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].mul(&inv);
            for c in col..n {
                let t = f.mul(&m[col][c]);
                m[r][c] = m[r][c].sub(&t);
            }
        }
    }
    Ok(det)
}

/// Reduced row echelon form over a field; returns (rref, pivot columns).
pub fn rref<S: Scalar>(a: &Matrix<S>) -> (Matrix<S>, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    if rows == 0 {
        return (m, vec![]);
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].try_inv().expect("field element");
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<S: Scalar>(a: &Matrix<S>) -> usize {
    rref(a).1.len()
}

/// Basis of the right kernel {x : A x = 0} over a field.
pub fn kernel<S: Scalar>(a: &Matrix<S>, cols: usize, one: &S) -> Vec<Vec<S>> {
    let (r, piv) = rref(a);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![one.zero_like(); cols];
            v[f] = one.one_like();
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = r[i][f].neg();
            }
            v
        })
        .collect()
}

/// Solve A x = b over a field, if solvable.
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &[S], one: &S) -> Option<Vec<S>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let aug: Matrix<S> = a.iter().zip(b).map(|(row, x)| {
        let mut r = row.clone();
        r.push(x.clone());
        r
    }).collect();
    let (r, piv) = rref(&aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![one.zero_like(); cols];
    for (i, &pc) in piv.iter().enumerate() {
        x[pc] = r[i][cols].clone();
    }
    Some(x)
}

pub fn inverse_field<S: Scalar>(a: &Matrix<S>, one: &S) -> Result<Matrix<S>> {
    let n = check_square(a)?;
    let aug: Matrix<S> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { one.one_like() } else { one.zero_like() });
            }
            r
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] >= n {
        return Err(Error::NotInvertible("singular matrix".into()));
    }
    Ok(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::cyclo::rat;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn m(v: &[&[i64]]) -> Matrix<BigRational> {
        v.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn small_dets() {
        let one = rat(1, 1);
        assert_eq!(det_berkowitz(&m(&[&[3]]), &one).unwrap(), rat(3, 1));
        assert_eq!(det_berkowitz(&m(&[&[1, 2], &[3, 4]]), &one).unwrap(), rat(-2, 1));
        let a = m(&[&[2, -1, 0, 3], &[1, 1, 4, 0], &[0, 5, 1, 1], &[7, 0, 2, 2]]);
        assert_eq!(det_berkowitz(&a, &one).unwrap(), det_field(&a, &one).unwrap());
        assert!(det_berkowitz(&vec![vec![one.clone(), one.clone()]], &one).is_err());
    }

    proptest! {
        #[test]
        fn berkowitz_matches_elimination(entries in proptest::collection::vec(-5i64..5, 25)) {
            let one = rat(1, 1);
            let a: Matrix<BigRational> = entries.chunks(5).map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect();
            prop_assert_eq!(det_berkowitz(&a, &one).unwrap(), det_field(&a, &one).unwrap());
        }
    }

    #[test]
    fn kernel_and_solve() {
        let one = rat(1, 1);
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a, 3, &one);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v, &one).iter().all(|x| x == &rat(0, 1)));
        }
        let x = solve(&m(&[&[2, 1], &[1, 3]]), &[rat(3, 1), rat(4, 1)], &one).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
        let inv = inverse_field(&m(&[&[2, 1], &[1, 3]]), &one).unwrap();
        assert_eq!(mat_mul(&inv, &m(&[&[2, 1], &[1, 3]])), identity(2, &one));
    }
}
