//! Minimum-norm point of the convex hull of a finite point set (Wolfe's
//! algorithm).
//!
//! For unit vectors `g_1..g_m`, the unit vector maximizing `min_i <u, g_i>`
//! is `p / |p|` where `p` is the minimum-norm point of `conv{g_i}`, and the
//! optimal margin equals `|p|`. That is how shortness witnesses are computed.

use crate::linalg::{dot, norm, FullPivLu};
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct MinNormPoint<T> {
    pub point: Vec<T>,
    /// Convex weights over the input points (zero outside the final corral).
    pub weights: Vec<T>,
}

pub fn min_norm_point<T: Real>(points: &[&[T]]) -> MinNormPoint<T> {
    assert!(!points.is_empty(), "min_norm_point needs at least one point");
    let dim = points[0].len();
    let m = points.len();
    let eps = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    let max_sq = points.iter().map(|p| dot(p, p)).fold(T::zero(), T::max);

    let start = (0..m)
        .min_by(|&i, &j| {
            dot(points[i], points[i])
                .partial_cmp(&dot(points[j], points[j]))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    let mut corral: Vec<usize> = vec![start];
    let mut lambda: Vec<T> = vec![T::one()];

    let current = |corral: &[usize], lambda: &[T]| -> Vec<T> {
        let mut x = vec![T::zero(); dim];
        for (&i, &l) in corral.iter().zip(lambda) {
            for (xk, &pk) in x.iter_mut().zip(points[i]) {
                *xk += l * pk;
            }
        }
        x
    };

    for _ in 0..(10 * m + 100) {
        let x = current(&corral, &lambda);
        let xx = dot(&x, &x);
        if xx <= eps * eps * max_sq {
            break;
        }
        let (j, best) = (0..m)
            .map(|i| (i, dot(&x, points[i])))
            .fold((usize::MAX, T::infinity()), |acc, c| if c.1 < acc.1 { c } else { acc });
        if best >= xx - eps * max_sq || corral.contains(&j) {
            break;
        }
        corral.push(j);
        lambda.push(T::zero());

        // Minor cycle: move toward the affine minimizer of the corral,
        // dropping points whose weight hits zero.
        let mut stalled = false;
        loop {
            let Some(mu) = affine_min_norm(points, &corral) else {
                stalled = true;
                break;
            };
            if mu.iter().all(|&v| v > eps) {
                lambda = mu;
                break;
            }
            let mut theta = T::one();
            for (&l, &u) in lambda.iter().zip(&mu) {
                if u <= eps && l - u > T::zero() {
                    theta = theta.min(l / (l - u));
                }
            }
            for (l, &u) in lambda.iter_mut().zip(&mu) {
                *l = (T::one() - theta) * *l + theta * u;
            }
            let mut k = 0;
            while k < corral.len() {
                if lambda[k] <= eps && corral.len() > 1 {
                    corral.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: T = lambda.iter().copied().sum();
            for l in lambda.iter_mut() {
                *l /= total;
            }
        }
        if stalled {
            corral.pop();
            lambda.pop();
            break;
        }
    }

    let point = current(&corral, &lambda);
    let mut weights = vec![T::zero(); m];
    for (&i, &l) in corral.iter().zip(&lambda) {
        weights[i] = l;
    }
    debug_assert!(norm(&point).is_finite());
    MinNormPoint { point, weights }
}

/// Weights `mu` (summing to 1) minimizing `|sum mu_i p_i|` over the affine
/// hull of the corral; `None` when the corral is affinely dependent.
fn affine_min_norm<T: Real>(points: &[&[T]], corral: &[usize]) -> Option<Vec<T>> {
    let k = corral.len();
    let mut kkt = vec![vec![T::zero(); k + 1]; k + 1];
    for a in 0..k {
        for b in 0..k {
            kkt[a][b] = dot(points[corral[a]], points[corral[b]]);
        }
        kkt[a][k] = T::one();
        kkt[k][a] = T::one();
    }
    let mut rhs = vec![T::zero(); k + 1];
    rhs[k] = T::one();
    let sol = FullPivLu::new(&kkt).solve(&rhs).ok()?;
    Some(sol[..k].to_vec())
}
