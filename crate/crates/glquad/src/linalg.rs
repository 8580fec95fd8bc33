//! Exact rank computations. Over GF(p) this is plain Gaussian
//! elimination; over the rationals we clear denominators rowwise and run
//! fraction-free (Bareiss) elimination over the integers. Pivoting is
//! deterministic: first nonzero entry in column order.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::field::Field;

/// Rank by Gaussian elimination with deterministic pivoting.
pub fn rank_generic<F: Field>(field: &F, mut mat: Vec<Vec<F::Elem>>) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).find(|&r| !field.is_zero(&mat[r][c]));
        let Some(pr) = pivot else { continue };
        mat.swap(rank, pr);
        let pinv = field.inv(&mat[rank][c]).unwrap();
        for r in rank + 1..rows {
            if field.is_zero(&mat[r][c]) {
                continue;
            }
            let factor = field.mul(&mat[r][c], &pinv);
            for j in c..cols {
                let sub = field.mul(&factor, &mat[rank][j]);
                mat[r][j] = field.sub(&mat[r][j], &sub);
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over the rationals via integer fraction-free elimination.
pub fn rank_bareiss(mat: Vec<Vec<BigRational>>) -> usize {
    let int_rows: Vec<Vec<BigInt>> = mat
        .into_iter()
        .map(|row| {
            let mut lcm = BigInt::one();
            for e in &row {
                lcm = num::integer::lcm(lcm, e.denom().clone());
            }
            row.into_iter()
                .map(|e| {
                    let scaled = e * BigRational::from_integer(lcm.clone());
                    debug_assert!(scaled.denom().is_one());
                    scaled.to_integer()
                })
                .collect()
        })
        .collect();
    rank_bareiss_int(int_rows)
}

/// Bareiss fraction-free elimination over the integers.
pub fn rank_bareiss_int(mut mat: Vec<Vec<BigInt>>) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).find(|&r| !mat[r][c].is_zero());
        let Some(pr) = pivot else { continue };
        mat.swap(rank, pr);
        let pivot_val = mat[rank][c].clone();
        for r in rank + 1..rows {
            let head = mat[r][c].clone();
            for j in c..cols {
                let num = &pivot_val * &mat[r][j] - &head * &mat[rank][j];
                // exact by the Bareiss identity
                mat[r][j] = num / &prev;
            }
        }
        prev = pivot_val;
        rank += 1;
    }
    rank
}
