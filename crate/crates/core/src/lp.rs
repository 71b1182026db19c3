//! Dense phase-one simplex method for `A x = b, x >= 0`.
//!
//! Every predicate in the crate (cone membership, cap intersection, the
//! covering conditions) reduces to one of these feasibility problems. The
//! instances are tiny, so a dense tableau with Bland's rule is enough and
//! gives deterministic, cycle-free pivoting.

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::scalar::{tol, Real};

#[derive(Clone, Debug)]
pub struct PhaseOne<T> {
    /// Basic solution at termination (feasible for the original system
    /// when `infeasibility` is zero).
    pub x: Vec<T>,
    /// Optimal sum of artificial variables. Bounds the Euclidean distance
    /// from `b` to `{A x : x >= 0}` from above.
    pub infeasibility: T,
    /// `|A x - b|` for the returned `x`.
    pub residual: T,
    pub pivots: usize,
}

impl<T: Real> PhaseOne<T> {
    pub fn is_feasible(&self) -> bool {
        let t = tol::<T>();
        self.infeasibility <= t.feas && self.residual <= t.feas
    }
}

/// Runs phase one on `A x = b`. `a` is row-major with `b.len()` rows.
///
/// An "infeasible" verdict is only returned with a Farkas certificate that
/// checks out against the original data; if rounding corrupted the tableau
/// the problem is re-solved with the columns in reverse order.
pub fn phase_one<T: Real>(a: &[Vec<T>], b: &[T]) -> Result<PhaseOne<T>> {
    let first = solve_tableau(a, b);
    match &first {
        Ok((r, w)) if r.is_feasible() || farkas_holds(a, b, w) => return first.map(|(r, _)| r),
        _ => {}
    }
    let rev: Vec<Vec<T>> = a.iter().map(|row| row.iter().rev().copied().collect()).collect();
    let second = solve_tableau(&rev, b).map(|(mut r, w)| {
        r.x.reverse();
        (r, w)
    });
    match (first, second) {
        (_, Ok((r, w))) if r.is_feasible() || farkas_holds(&rev, b, &w) => Ok(r),
        (Ok((f, _)), Ok((s, _))) => Ok(if s.infeasibility < f.infeasibility { s } else { f }),
        (Ok((f, _)), Err(_)) => Ok(f),
        (Err(_), second) => second.map(|(r, _)| r),
    }
}

// `w^T A <= 0` and `w^T b > 0` up to rounding: no `x >= 0` solves `A x = b`.
fn farkas_holds<T: Real>(a: &[Vec<T>], b: &[T], w: &[T]) -> bool {
    let n = a.first().map_or(0, |r| r.len());
    let scale = w.iter().map(|v| v.abs()).sum::<T>() + T::one();
    let slack = tol::<T>().feas * scale;
    let wb: T = w.iter().zip(b).map(|(&wi, &bi)| wi * bi).sum();
    wb > slack && (0..n).all(|j| a.iter().zip(w).map(|(row, &wi)| wi * row[j]).sum::<T>() <= slack)
}

// Returns the phase-one result and the simplex multipliers in the original
// (unflipped) row signs.
fn solve_tableau<T: Real>(a: &[Vec<T>], b: &[T]) -> Result<(PhaseOne<T>, Vec<T>)> {
    let m = b.len();
    let n = a.first().map_or(0, |r| r.len());
    debug_assert!(a.iter().all(|r| r.len() == n));
    let pivot_tol = tol::<T>().pivot;
    let width = n + m + 1;

    // Rows are sign-flipped so the right-hand side is nonnegative; the
    // artificial slack of row i is column n + i.
    let mut tab: Vec<Vec<T>> = Vec::with_capacity(m);
    let flips: Vec<T> = b.iter().map(|&bi| if bi < T::zero() { -T::one() } else { T::one() }).collect();
    for i in 0..m {
        let flip = flips[i];
        let mut row = vec![T::zero(); width];
        for j in 0..n {
            row[j] = flip * a[i][j];
        }
        row[n + i] = T::one();
        row[width - 1] = flip * b[i];
        tab.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![T::zero(); width];
    for row in &tab {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[width - 1] -= row[width - 1];
    }

    let limit = 50 * (n + m) + 100;
    let mut pivots = 0;
    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j] < -pivot_tol) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = T::infinity();
        for i in 0..m {
            let coef = tab[i][enter];
            if coef > pivot_tol {
                let ratio = tab[i][width - 1] / coef;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let slack = pivot_tol * best.abs().max(T::one());
                        ratio < best - slack || ((ratio - best).abs() <= slack && basis[i] < basis[l])
                    }
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // Unbounded direction cannot occur in phase one (objective is
            // bounded below by zero); treat as numerical breakdown.
            return Err(Error::IterationLimit);
        };
        pivot(&mut tab, &mut cost, r, enter);
        basis[r] = enter;
        pivots += 1;
        if pivots > limit {
            return Err(Error::IterationLimit);
        }
    }

    let mut x = vec![T::zero(); n];
    let mut infeasibility = T::zero();
    for (i, &bv) in basis.iter().enumerate() {
        let v = tab[i][width - 1].max(T::zero());
        if bv < n {
            x[bv] = v;
        } else {
            infeasibility += v;
        }
    }
    let residual = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let r = dot(row, &x) - bi;
            r * r
        })
        .sum::<T>()
        .sqrt();
    // Reduced cost of artificial i is 1 - w_i for the flipped system.
    let w: Vec<T> = (0..m).map(|i| (T::one() - cost[n + i]) * flips[i]).collect();
    Ok((PhaseOne { x, infeasibility, residual, pivots }, w))
}

fn pivot<T: Real>(tab: &mut [Vec<T>], cost: &mut [T], r: usize, c: usize) {
    let p = tab[r][c];
    for v in tab[r].iter_mut() {
        *v /= p;
    }
    let pivot_row = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let f = row[c];
        if f != T::zero() {
            for (v, &pr) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            row[c] = T::zero();
        }
    }
    let f = cost[c];
    if f != T::zero() {
        for (v, &pr) in cost.iter_mut().zip(&pivot_row) {
            *v -= f * pr;
        }
        cost[c] = T::zero();
    }
}
