//! Dense simplex over exact rationals.
//!
//! Solves `max c·x  s.t.  A x <= b, x >= 0` with `b >= 0`, so the slack basis
//! is an initial feasible vertex. Bland's rule picks entering and leaving
//! variables, which rules out cycling.

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    /// One multiplier per constraint row; feasible for the dual
    /// `min b·y  s.t.  Aᵀy >= c, y >= 0` with `b·y = value`.
    pub dual: Vec<Rational>,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Unbounded,
}

pub fn maximize(
    c: &[Rational],
    a: &[Vec<Rational>],
    b: &[Rational],
) -> Result<LpSolution, LpOutcome> {
    let n = c.len();
    let m = a.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|row| row.len() == n));
    assert!(b.iter().all(|x| !x.is_negative()), "rhs must be nonnegative");

    let width = n + m;
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let mut rhs = b.to_vec();
    let mut basis: Vec<usize> = (n..width).collect();
    let mut reduced: Vec<Rational> = c
        .iter()
        .cloned()
        .chain(std::iter::repeat_n(Rational::zero(), m))
        .collect();
    let mut value = Rational::zero();
    let mut pivots = 0;

    while let Some(enter) = reduced.iter().position(Rational::is_positive) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !rows[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &rows[i][enter];
            leave = match leave {
                None => Some((i, ratio)),
                Some((best, best_ratio)) => {
                    if ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[best]) {
                        Some((i, ratio))
                    } else {
                        Some((best, best_ratio))
                    }
                }
            };
        }
        let (p, _) = leave.ok_or(LpOutcome::Unbounded)?;

        let inv = rows[p][enter].recip();
        for x in rows[p].iter_mut() {
            *x = &*x * &inv;
        }
        rhs[p] = &rhs[p] * &inv;
        let pivot_row = rows[p].clone();
        let pivot_rhs = rhs[p].clone();
        for i in 0..m {
            if i == p || rows[i][enter].is_zero() {
                continue;
            }
            let f = rows[i][enter].clone();
            for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
            rhs[i] -= &(&f * &pivot_rhs);
        }
        let f = reduced[enter].clone();
        for (x, y) in reduced.iter_mut().zip(&pivot_row) {
            if !y.is_zero() {
                *x -= &(&f * y);
            }
        }
        value += &(&f * &pivot_rhs);
        basis[p] = enter;
        pivots += 1;
    }

    let mut primal = vec![Rational::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            primal[var] = rhs[i].clone();
        }
    }
    let dual = (0..m).map(|i| -&reduced[n + i]).collect();
    Ok(LpSolution {
        value,
        primal,
        dual,
        pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn rows(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter()
            .map(|row| row.iter().map(|&x| Rational::from_integer(x)).collect())
            .collect()
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let sol = maximize(
            &[r(3, 1), r(5, 1)],
            &rows(&[&[1, 0], &[0, 2], &[3, 2]]),
            &[r(4, 1), r(12, 1), r(18, 1)],
        )
        .unwrap();
        assert_eq!(sol.value, r(36, 1));
        assert_eq!(sol.primal, vec![r(2, 1), r(6, 1)]);
        // dual: y = (0, 3/2, 1)
        assert_eq!(sol.dual, vec![r(0, 1), r(3, 2), r(1, 1)]);
    }

    #[test]
    fn unbounded_is_reported() {
        let out = maximize(&[r(1, 1), r(1, 1)], &rows(&[&[1, -1]]), &[r(1, 1)]);
        assert_eq!(out, Err(LpOutcome::Unbounded));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale-style degenerate instance; Bland's rule must not cycle.
        let c = vec![r(3, 4), r(-150, 1), r(1, 50), r(-6, 1)];
        let a = vec![
            vec![r(1, 4), r(-60, 1), r(-1, 25), r(9, 1)],
            vec![r(1, 2), r(-90, 1), r(-1, 50), r(3, 1)],
            vec![r(0, 1), r(0, 1), r(1, 1), r(0, 1)],
        ];
        let b = vec![r(0, 1), r(0, 1), r(1, 1)];
        let sol = maximize(&c, &a, &b).unwrap();
        assert_eq!(sol.value, r(1, 20));
    }
}
