//! Smith normal form of integer matrices with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::ExactMatrix;
use super::rational::Rat;
use crate::error::{Error, Result};

/// `u * m * v = diag(factors, 0, ...)` with `factors[i] | factors[i+1]`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
    pub u: ExactMatrix,
    pub v: ExactMatrix,
}

type Dense = Vec<Vec<BigInt>>;

fn to_dense_int(m: &ExactMatrix) -> Result<Dense> {
    let mut d = vec![vec![BigInt::zero(); m.cols()]; m.rows()];
    for (r, c, x) in m.entries() {
        d[r][c] = x.to_bigint().ok_or(Error::NonIntegral)?;
    }
    Ok(d)
}

fn ident(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn dense_to_exact(d: &Dense, cols: usize) -> ExactMatrix {
    let triples = d
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(j, x)| (i, j, Rat::from_bigint(x.clone()))));
    ExactMatrix::from_triples(d.len(), cols, triples)
}

// row_a -= q * row_b
fn row_axpy(m: &mut Dense, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let rb = m[b].clone();
    for (x, y) in m[a].iter_mut().zip(rb.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn col_axpy(m: &mut Dense, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[b].is_zero() {
            let t = q * &row[b];
            row[a] -= t;
        }
    }
}

fn swap_cols(m: &mut Dense, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(m: &ExactMatrix) -> Result<SmithForm> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = to_dense_int(m)?;
    let mut u = ident(rows);
    let mut v = ident(cols);
    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    u.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, t, j);
                    swap_cols(&mut v, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: fold a row with an indivisible entry into the pivot row
            let mut bad = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].is_multiple_of(&a[t][t]) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        factors.push(a[t][t].clone());
        t += 1;
    }
    Ok(SmithForm { factors, u: dense_to_exact(&u, rows), v: dense_to_exact(&v, cols) })
}

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
pub fn determinant(m: &ExactMatrix) -> Result<BigInt> {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = to_dense_int(m)?;
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = val / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    Ok(sign * a[n - 1][n - 1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &ExactMatrix, expected: &[i64]) {
        let s = smith_normal_form(m).unwrap();
        let f: Vec<BigInt> = expected.iter().map(|x| BigInt::from(*x)).collect();
        assert_eq!(s.factors, f);
        let d = s.u.mul(m).mul(&s.v);
        for (r, c, x) in d.entries() {
            assert_eq!(r, c, "off-diagonal entry");
            assert_eq!(x.to_bigint().unwrap(), s.factors[r]);
        }
        assert_eq!(determinant(&s.u).unwrap().abs(), BigInt::one());
        assert_eq!(determinant(&s.v).unwrap().abs(), BigInt::one());
    }

    #[test]
    fn small_examples() {
        check(&ExactMatrix::from_i64(&[vec![2]]), &[2]);
        check(&ExactMatrix::from_i64(&[vec![1, 2], vec![3, 4]]), &[1, 2]);
        check(&ExactMatrix::identity(3), &[1, 1, 1]);
        check(&ExactMatrix::from_i64(&[vec![2, 0], vec![0, 3]]), &[1, 6]);
        // entry gcd 2, gcd of 2x2 minors (-20, 8, 12) is 4
        check(&ExactMatrix::from_i64(&[vec![4, 6, 0], vec![6, 4, 2]]), &[2, 2]);
    }

    #[test]
    fn determinant_matches_hand_value() {
        assert_eq!(determinant(&ExactMatrix::from_i64(&[vec![1, 2], vec![3, 4]])).unwrap(), BigInt::from(-2));
        assert_eq!(determinant(&ExactMatrix::from_i64(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
    }
}
