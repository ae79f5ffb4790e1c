//! Exact right null spaces by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;

/// Basis of `{ v : M v = 0 }`. Each basis vector is scaled to primitive
/// integer entries with a positive first nonzero entry, so the output is
/// deterministic.
pub fn null_space(matrix: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = matrix.first().map_or(0, Vec::len);
    assert!(matrix.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut rows: Vec<Vec<BigInt>> = matrix.iter().map(|r| clear_denominators(r)).collect();
    let pivots = bareiss(&mut rows, cols);

    // Back substitution to reduced form over the rationals.
    let rank = pivots.len();
    let mut reduced: Vec<Vec<Rational>> = rows[..rank]
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    for (r, &c) in pivots.iter().enumerate().rev() {
        let p = reduced[r][c].clone();
        for x in reduced[r].iter_mut() {
            *x /= &p;
        }
        for above in 0..r {
            let f = reduced[above][c].clone();
            if f.is_zero() {
                continue;
            }
            let pivot_row = reduced[r].clone();
            for (entry, p) in reduced[above].iter_mut().zip(&pivot_row) {
                *entry -= &f * p;
            }
        }
    }

    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -reduced[r][free].clone();
        }
        basis.push(primitive(v));
    }
    basis
}

/// Rank of a rational matrix.
pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<BigInt>> = matrix.iter().map(|r| clear_denominators(r)).collect();
    bareiss(&mut rows, cols).len()
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect()
}

/// In-place fraction-free row echelon form; returns pivot columns in row
/// order. Every division is exact.
fn bareiss(rows: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            for j in c + 1..cols {
                let v = &rows[r][c] * &rows[i][j] - &rows[i][c] * &rows[r][j];
                rows[i][j] = v / &prev;
            }
            rows[i][c] = BigInt::zero();
        }
        // entries left of the pivot in rows below are already zero; keep the
        // pivot row's own trailing entries as they are
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    let g = if g.is_zero() { BigInt::one() } else { g };
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g * &sign))
        .collect()
}
