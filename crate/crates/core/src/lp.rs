//! Two-player zero-sum matrix games solved by a dense simplex tableau.
//!
//! The row player maximises. After shifting the payoffs to be positive the
//! column player's problem is `max 1ᵀy  s.t.  A y <= 1, y >= 0`; the row
//! player's optimal strategy is read off the dual values of the slacks.
//! Degenerate pivots are common in these games, so the entering rule drops
//! to Bland's after a run of them.

use crate::scalar::Scalar;

const DEGENERATE_LIMIT: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGameSolution<S> {
    pub value: S,
    pub row_strategy: Vec<S>,
    pub col_strategy: Vec<S>,
}

/// Optimal mixed strategies and value of the game with the given payoffs
/// (rows maximise). Panics on an empty or ragged matrix.
pub fn solve_matrix_game<S: Scalar>(payoff: &[Vec<S>]) -> MatrixGameSolution<S> {
    let rows = payoff.len();
    assert!(rows > 0, "payoff matrix has no rows");
    let cols = payoff[0].len();
    assert!(cols > 0, "payoff matrix has no columns");
    assert!(payoff.iter().all(|r| r.len() == cols), "ragged payoff matrix");

    let min = payoff
        .iter()
        .flatten()
        .fold(payoff[0][0].clone(), |m, x| if *x < m { x.clone() } else { m });
    let shift = if min <= S::zero() {
        S::one() - min
    } else {
        S::zero()
    };

    // Columns: y_0..y_{cols-1}, slacks s_0..s_{rows-1}, rhs.
    let width = cols + rows + 1;
    let rhs = width - 1;
    let mut tab: Vec<Vec<S>> = payoff
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut line: Vec<S> = row.iter().map(|a| a.clone() + shift.clone()).collect();
            line.extend((0..rows).map(|s| if s == i { S::one() } else { S::zero() }));
            line.push(S::one());
            line
        })
        .collect();
    let mut objective: Vec<S> = (0..width)
        .map(|j| if j < cols { -S::one() } else { S::zero() })
        .collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Dantzig's rule, falling back to Bland's after a run of degenerate
    // pivots so the method cannot cycle.
    let mut degenerate_run = 0;
    loop {
        let enter = if degenerate_run < DEGENERATE_LIMIT {
            (0..rhs)
                .filter(|&j| objective[j].is_negative_beyond_tol())
                .reduce(|best, j| if objective[j] < objective[best] { j } else { best })
        } else {
            (0..rhs).find(|&j| objective[j].is_negative_beyond_tol())
        };
        let Some(enter) = enter else { break };
        let mut leave: Option<(usize, S)> = None;
        for (i, line) in tab.iter().enumerate() {
            if !line[enter].is_positive_beyond_tol() {
                continue;
            }
            let ratio = line[rhs].clone() / line[enter].clone();
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (pivot_row, ratio) = leave.expect("positive payoffs keep the column problem bounded");
        if ratio.is_zero() {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }
        pivot(&mut tab, &mut objective, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    let total = objective[rhs].clone();
    let mut col_strategy = vec![S::zero(); cols];
    for (i, &b) in basis.iter().enumerate() {
        if b < cols {
            col_strategy[b] = tab[i][rhs].clone() / total.clone();
        }
    }
    let row_strategy = (0..rows)
        .map(|i| objective[cols + i].clone() / total.clone())
        .collect();
    MatrixGameSolution {
        value: S::one() / total - shift,
        row_strategy,
        col_strategy,
    }
}

fn pivot<S: Scalar>(tab: &mut [Vec<S>], objective: &mut [S], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for x in tab[row].iter_mut() {
        *x = x.clone() / p.clone();
    }
    let pivot_line = tab[row].clone();
    let eliminate = |line: &mut [S]| {
        let factor = line[col].clone();
        if factor.is_zero() {
            return;
        }
        for (x, pv) in line.iter_mut().zip(&pivot_line) {
            *x = x.clone() - factor.clone() * pv.clone();
        }
    };
    for (i, line) in tab.iter_mut().enumerate() {
        if i != row {
            eliminate(line);
        }
    }
    eliminate(objective);
}

/// `pᵀ A e_j` minimised over columns: what a row strategy guarantees.
pub fn row_guarantee<S: Scalar>(payoff: &[Vec<S>], p: &[S]) -> S {
    (0..payoff[0].len())
        .map(|j| {
            payoff
                .iter()
                .zip(p)
                .fold(S::zero(), |acc, (row, pi)| acc + row[j].clone() * pi.clone())
        })
        .reduce(|a, b| if b < a { b } else { a })
        .expect("at least one column")
}

/// `e_iᵀ A q` maximised over rows: what a column strategy concedes.
pub fn col_guarantee<S: Scalar>(payoff: &[Vec<S>], q: &[S]) -> S {
    payoff
        .iter()
        .map(|row| {
            row.iter()
                .zip(q)
                .fold(S::zero(), |acc, (a, qj)| acc + a.clone() * qj.clone())
        })
        .reduce(|a, b| if b > a { b } else { a })
        .expect("at least one row")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn exact(m: &[&[i64]]) -> Vec<Vec<Rational>> {
        m.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect()
    }

    fn assert_certified(payoff: &[Vec<Rational>], sol: &MatrixGameSolution<Rational>) {
        let one = q(1, 1);
        for strat in [&sol.row_strategy, &sol.col_strategy] {
            assert!(strat.iter().all(|x| *x >= Rational::zero()));
            assert_eq!(strat.iter().fold(Rational::zero(), |a, b| a + b), one);
        }
        assert_eq!(row_guarantee(payoff, &sol.row_strategy), sol.value);
        assert_eq!(col_guarantee(payoff, &sol.col_strategy), sol.value);
    }

    #[test]
    fn rock_paper_scissors() {
        let m = exact(&[&[0, -1, 1], &[1, 0, -1], &[-1, 1, 0]]);
        let sol = solve_matrix_game(&m);
        assert_eq!(sol.value, q(0, 1));
        assert_eq!(sol.row_strategy, vec![q(1, 3); 3]);
        assert_certified(&m, &sol);
    }

    #[test]
    fn asymmetric_three_by_three() {
        let m = exact(&[&[0, 2, -1], &[-1, 0, 1], &[1, -1, 0]]);
        let sol = solve_matrix_game(&m);
        assert_eq!(sol.value, q(1, 12));
        assert_eq!(sol.row_strategy, vec![q(1, 4), q(1, 3), q(5, 12)]);
        assert_certified(&m, &sol);
    }

    #[test]
    fn saddle_point_and_dominance() {
        let m = exact(&[&[3, 5], &[1, 7], &[2, 2]]);
        let sol = solve_matrix_game(&m);
        assert_eq!(sol.value, q(3, 1));
        assert_certified(&m, &sol);

        let m = exact(&[&[4, 6], &[3, 9]]);
        let sol = solve_matrix_game(&m);
        assert_eq!(sol.value, q(4, 1));
        assert_eq!(sol.row_strategy, vec![q(1, 1), q(0, 1)]);
    }

    #[test]
    fn single_entry_and_degenerate() {
        let m = exact(&[&[7]]);
        assert_eq!(solve_matrix_game(&m).value, q(7, 1));
        let m = exact(&[&[2, 2], &[2, 2], &[2, 2]]);
        let sol = solve_matrix_game(&m);
        assert_eq!(sol.value, q(2, 1));
        assert_certified(&m, &sol);
    }

    #[test]
    fn floats_agree_with_rationals() {
        let m: Vec<Vec<f64>> = vec![vec![0.0, 2.0, -1.0], vec![-1.0, 0.0, 1.0], vec![1.0, -1.0, 0.0]];
        let sol = solve_matrix_game(&m);
        assert!((sol.value - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_width_rationals() {
        use num_rational::Ratio;
        let m: Vec<Vec<Ratio<i64>>> = vec![
            vec![Ratio::from(2), Ratio::from(1)],
            vec![Ratio::from(1), Ratio::from(3)],
        ];
        assert_eq!(solve_matrix_game(&m).value, Ratio::new(5, 3));
    }
}
