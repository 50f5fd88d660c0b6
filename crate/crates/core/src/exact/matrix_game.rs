use num_traits::{One, Zero};

use super::{lp_optimize, LinearProgram, Rational, RationalMatrix, Relation, Sense};
use crate::{Error, Result};

/// Value and optimal mixed strategies of a zero-sum matrix game where the
/// row player receives `A[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGameSolution {
    pub value: Rational,
    pub row_strategy: Vec<Rational>,
    pub col_strategy: Vec<Rational>,
}

impl MatrixGameSolution {
    /// Checks the minimax conditions exactly: `rᵀA e_j ≥ v` for every column
    /// and `e_iᵀ A c ≤ v` for every row.
    pub fn is_optimal_for(&self, a: &RationalMatrix) -> bool {
        let (m, n) = (a.rows(), a.cols());
        let is_dist = |p: &[Rational], len: usize| {
            p.len() == len && p.iter().all(|x| *x >= Rational::zero()) && p.iter().sum::<Rational>() == Rational::one()
        };
        if !is_dist(&self.row_strategy, m) || !is_dist(&self.col_strategy, n) {
            return false;
        }
        let cols_ok = (0..n).all(|j| {
            (0..m).map(|i| &self.row_strategy[i] * &a[(i, j)]).sum::<Rational>() >= self.value
        });
        let rows_ok = a.mul_vec(&self.col_strategy).iter().all(|r| *r <= self.value);
        cols_ok && rows_ok
    }
}

/// Solves the zero-sum game `A` by the usual pair of linear programs.
pub fn matrix_game_value(a: &RationalMatrix) -> Result<MatrixGameSolution> {
    let (m, n) = (a.rows(), a.cols());
    if m == 0 || n == 0 {
        return Err(Error::dims("matrix game needs at least one row and column"));
    }

    // Row player: max v s.t. Σ_i x_i A_ij ≥ v, Σ x = 1.
    let mut obj = vec![Rational::zero(); m + 1];
    obj[m] = Rational::one();
    let mut row_lp = LinearProgram::new(Sense::Max, obj).free(m);
    for j in 0..n {
        let mut c: Vec<Rational> = (0..m).map(|i| a[(i, j)].clone()).collect();
        c.push(-Rational::one());
        row_lp.add_constraint(c, Relation::Ge, Rational::zero());
    }
    let mut ones = vec![Rational::one(); m];
    ones.push(Rational::zero());
    row_lp.add_constraint(ones, Relation::Eq, Rational::one());
    let row = lp_optimize(&row_lp)?;

    // Column player: min w s.t. Σ_j A_ij y_j ≤ w, Σ y = 1.
    let mut obj = vec![Rational::zero(); n + 1];
    obj[n] = Rational::one();
    let mut col_lp = LinearProgram::new(Sense::Min, obj).free(n);
    for i in 0..m {
        let mut c = a.row(i).to_vec();
        c.push(-Rational::one());
        col_lp.add_constraint(c, Relation::Le, Rational::zero());
    }
    let mut ones = vec![Rational::one(); n];
    ones.push(Rational::zero());
    col_lp.add_constraint(ones, Relation::Eq, Rational::one());
    let col = lp_optimize(&col_lp)?;

    debug_assert_eq!(row.optimum, col.optimum, "LP duality");
    let mut row_strategy = row.solution;
    row_strategy.truncate(m);
    let mut col_strategy = col.solution;
    col_strategy.truncate(n);
    Ok(MatrixGameSolution { value: row.optimum, row_strategy, col_strategy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn one_by_one() {
        let a = RationalMatrix::from_rows(vec![vec![rat(7, 3)]]).unwrap();
        let s = matrix_game_value(&a).unwrap();
        assert_eq!(s.value, rat(7, 3));
        assert_eq!(s.row_strategy, vec![int(1)]);
        assert_eq!(s.col_strategy, vec![int(1)]);
    }

    #[test]
    fn matching_pennies() {
        let a = RationalMatrix::from_i64(&[&[1, -1], &[-1, 1]]);
        let s = matrix_game_value(&a).unwrap();
        assert_eq!(s.value, int(0));
        assert_eq!(s.row_strategy, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(s.col_strategy, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // (ad - bc) / (a - b - c + d) = (6 - 0) / (3 - 0 - 1 + 2)
        let a = RationalMatrix::from_i64(&[&[3, 0], &[1, 2]]);
        let s = matrix_game_value(&a).unwrap();
        assert_eq!(s.value, rat(3, 2));
        assert!(s.is_optimal_for(&a));
    }

    #[test]
    fn dominated_row() {
        let a = RationalMatrix::from_i64(&[&[4, 5], &[1, 2], &[0, 9]]);
        let s = matrix_game_value(&a).unwrap();
        assert!(s.is_optimal_for(&a));
    }

    proptest! {
        #[test]
        fn minimax_conditions_hold(
            m in 1usize..5, n in 1usize..5,
            entries in proptest::collection::vec(-5i64..=5, 16),
        ) {
            let rows: Vec<Vec<Rational>> = (0..m)
                .map(|i| (0..n).map(|j| int(entries[i * 4 + j])).collect())
                .collect();
            let a = RationalMatrix::from_rows(rows).unwrap();
            let s = matrix_game_value(&a).unwrap();
            prop_assert!(s.is_optimal_for(&a));
        }
    }
}
