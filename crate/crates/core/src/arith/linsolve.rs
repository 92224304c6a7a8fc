//! Exact linear systems over the rationals.
//!
//! Each row is cleared to integers and the system is brought to echelon
//! form with one-step fraction-free (Bareiss) elimination, so intermediate
//! entries stay integral. Back-substitution then runs over `Rat` with every
//! free variable fixed to zero, which makes the returned solution a
//! deterministic function of the column order.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rat::{common_denominator, Rat};

/// Solves `a x = b`. Returns `None` if the system is inconsistent.
///
/// `a` is row-major with `ncols` columns.
pub fn solve(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    // Augmented integer matrix.
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            debug_assert_eq!(row.len(), ncols);
            let den = common_denominator(row.iter().chain(std::iter::once(rhs)));
            row.iter()
                .chain(std::iter::once(rhs))
                .map(|r| (r * Rat::from_integer(den.clone())).to_integer())
                .collect()
        })
        .filter(|row: &Vec<BigInt>| row.iter().any(|x| !x.is_zero()))
        .collect();

    let nrows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in col + 1..=ncols {
                let t = &m[r][col] * &m[i][j] - &m[i][col] * &m[r][j];
                debug_assert!((&t % &prev).is_zero(), "inexact fraction-free step");
                m[i][j] = t / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        // Rows below carry the factor `m[r][col]` from here on; `prev` tracks
        // the exact divisor for the next step. When columns are skipped the
        // Bareiss divisor is still the last pivot used.
        prev = m[r][col].clone();
        pivots.push(col);
        r += 1;
    }

    // Rows without a pivot must have a zero right-hand side.
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }

    let mut x = vec![Rat::zero(); ncols];
    for (row, &col) in pivots.iter().enumerate().rev() {
        let mut acc = Rat::from_integer(m[row][ncols].clone());
        for j in col + 1..ncols {
            if !m[row][j].is_zero() && !x[j].is_zero() {
                acc -= Rat::from_integer(m[row][j].clone()) * &x[j];
            }
        }
        x[col] = acc / Rat::from_integer(m[row][col].clone());
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::{int, rat};

    fn check(a: &[Vec<Rat>], b: &[Rat], x: &[Rat]) {
        for (row, rhs) in a.iter().zip(b) {
            let lhs: Rat = row.iter().zip(x).map(|(p, q)| p * q).sum();
            assert_eq!(&lhs, rhs);
        }
    }

    #[test]
    fn unique_solution() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let b = vec![int(3), int(5)];
        let x = solve(&a, &b, 2).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
    }

    #[test]
    fn free_variables_are_zero() {
        let a = vec![vec![int(0), int(1), int(1)]];
        let b = vec![int(2)];
        let x = solve(&a, &b, 3).unwrap();
        assert_eq!(x, vec![int(0), int(2), int(0)]);
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        let b = vec![int(1), int(3)];
        assert!(solve(&a, &b, 2).is_none());
    }

    #[test]
    fn skipped_columns_keep_divisions_exact() {
        let a = vec![
            vec![rat(1, 2), int(3), int(0), int(1)],
            vec![int(1), int(6), int(2), int(0)],
            vec![int(0), int(0), int(4), int(5)],
            vec![int(3), int(18), int(1), int(7)],
        ];
        let x_true = vec![int(1), int(-2), rat(1, 3), int(5)];
        let b: Vec<Rat> = a
            .iter()
            .map(|row| row.iter().zip(&x_true).map(|(p, q)| p * q).sum())
            .collect();
        let x = solve(&a, &b, 4).unwrap();
        check(&a, &b, &x);
    }
}
