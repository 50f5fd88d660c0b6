use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Rational, RationalMatrix};
use crate::{Error, Result};

/// Solves `A·x = b` exactly.
///
/// Each row of the augmented system is scaled to integers and reduced with
/// Bareiss' fraction-free elimination, so intermediate entries stay integral
/// and are bounded by minors of the input. Pivots are the first nonzero entry
/// in the current column (lowest row index), which makes the elimination
/// order deterministic.
pub fn solve_linear_system(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::dims(format!("{}x{} system is not square", n, a.cols())));
    }
    if b.len() != n {
        return Err(Error::dims(format!("rhs has {} entries, expected {n}", b.len())));
    }

    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row: Vec<&Rational> = a.row(i).iter().chain(std::iter::once(&b[i])).collect();
            let scale = row
                .iter()
                .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            row.iter()
                .map(|r| r.numer() * (&scale / r.denom()))
                .collect()
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                debug_assert!((&v % &prev).is_zero());
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }

    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn identity_system() {
        let x = solve_linear_system(&RationalMatrix::identity(3), &[int(1), int(2), int(3)]).unwrap();
        assert_eq!(x, vec![int(1), int(2), int(3)]);
    }

    #[test]
    fn two_by_two() {
        let a = RationalMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve_linear_system(&a, &[int(3), int(1)]).unwrap(), vec![int(2), int(1)]);
    }

    #[test]
    fn rank_deficient_is_singular() {
        let a = RationalMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(matches!(solve_linear_system(&a, &[int(1), int(1)]), Err(Error::SingularMatrix)));
    }

    #[test]
    fn needs_row_swap_and_fractions() {
        let a = RationalMatrix::from_rows(vec![
            vec![int(0), rat(1, 2), int(1)],
            vec![rat(1, 3), int(0), int(2)],
            vec![int(1), int(1), int(0)],
        ])
        .unwrap();
        let b = vec![int(1), rat(-1, 5), int(7)];
        let x = solve_linear_system(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
    }

    #[test]
    fn non_square_rejected() {
        let a = RationalMatrix::zeros(2, 3);
        assert!(matches!(solve_linear_system(&a, &[int(0), int(0)]), Err(Error::DimensionMismatch(_))));
    }

    proptest! {
        #[test]
        fn residual_is_exactly_zero(
            n in 1usize..5,
            entries in proptest::collection::vec((-6i64..=6, 1i64..=4), 25),
            rhs in proptest::collection::vec(-9i64..=9, 5),
        ) {
            let data = entries[..n * n].iter().map(|&(p, q)| rat(p, q)).collect();
            let a = RationalMatrix::from_vec(n, n, data).unwrap();
            let b: Vec<Rational> = rhs[..n].iter().map(|&v| int(v)).collect();
            match solve_linear_system(&a, &b) {
                Ok(x) => prop_assert_eq!(a.mul_vec(&x), b),
                Err(Error::SingularMatrix) => {}
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
