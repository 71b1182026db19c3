//! Small dense linear algebra over [`Real`] scalars.
//!
//! Everything here works on `Vec<Vec<T>>` row-major matrices of at most a few
//! dozen rows; nothing is tuned for size.

use crate::error::{Error, Result};
use crate::scalar::{tol, Real};

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[inline]
pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Returns `a / |a|`, or `None` for a (numerically) zero vector.
pub fn normalized<T: Real>(a: &[T]) -> Option<Vec<T>> {
    let n = norm(a);
    if !(n > T::min_positive_value().sqrt()) {
        return None;
    }
    Some(a.iter().map(|&x| x / n).collect())
}

pub fn add_scaled<T: Real>(acc: &mut [T], scale: T, v: &[T]) {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a += scale * x;
    }
}

/// `sum_i weights[i] * vectors[i]`.
pub fn combine<T: Real>(weights: &[T], vectors: &[&[T]]) -> Vec<T> {
    let dim = vectors.first().map_or(0, |v| v.len());
    let mut out = vec![T::zero(); dim];
    for (&w, v) in weights.iter().zip(vectors) {
        add_scaled(&mut out, w, v);
    }
    out
}

/// LU factorization with full pivoting; reveals numerical rank.
#[derive(Clone, Debug)]
pub struct FullPivLu<T> {
    lu: Vec<Vec<T>>,
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
    rank: usize,
    sign: T,
}

impl<T: Real> FullPivLu<T> {
    pub fn new(a: &[Vec<T>]) -> Self {
        let n = a.len();
        let mut lu: Vec<Vec<T>> = a.to_vec();
        let mut row_perm: Vec<usize> = (0..n).collect();
        let mut col_perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        let scale = lu
            .iter()
            .flat_map(|r| r.iter())
            .fold(T::zero(), |m, &x| m.max(x.abs()));
        let threshold = tol::<T>().pivot * scale.max(T::one());
        let mut rank = n;
        for k in 0..n {
            let mut best = (k, k);
            let mut best_val = T::zero();
            for (i, row) in lu.iter().enumerate().skip(k) {
                for (j, &v) in row.iter().enumerate().skip(k) {
                    if v.abs() > best_val {
                        best_val = v.abs();
                        best = (i, j);
                    }
                }
            }
            if best_val <= threshold {
                rank = k;
                break;
            }
            if best.0 != k {
                lu.swap(k, best.0);
                row_perm.swap(k, best.0);
                sign = -sign;
            }
            if best.1 != k {
                for row in lu.iter_mut() {
                    row.swap(k, best.1);
                }
                col_perm.swap(k, best.1);
                sign = -sign;
            }
            let pivot = lu[k][k];
            for i in (k + 1)..n {
                let f = lu[i][k] / pivot;
                lu[i][k] = f;
                if f != T::zero() {
                    for j in (k + 1)..n {
                        let delta = f * lu[k][j];
                        lu[i][j] -= delta;
                    }
                }
            }
        }
        FullPivLu { lu, row_perm, col_perm, rank, sign }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank == self.lu.len()
    }

    pub fn determinant(&self) -> T {
        if !self.is_invertible() {
            return T::zero();
        }
        self.lu
            .iter()
            .enumerate()
            .fold(self.sign, |acc, (i, row)| acc * row[i])
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        if !self.is_invertible() {
            return Err(Error::Singular);
        }
        let n = self.lu.len();
        let mut y: Vec<T> = self.row_perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            for j in 0..i {
                let delta = self.lu[i][j] * y[j];
                y[i] -= delta;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let delta = self.lu[i][j] * y[j];
                y[i] -= delta;
            }
            y[i] /= self.lu[i][i];
        }
        let mut x = vec![T::zero(); n];
        for (k, &c) in self.col_perm.iter().enumerate() {
            x[c] = y[k];
        }
        Ok(x)
    }
}

/// Solves the square system `a x = b`; rank deficiency is an error.
pub fn solve<T: Real>(a: &[Vec<T>], b: &[T]) -> Result<Vec<T>> {
    FullPivLu::new(a).solve(b)
}

pub fn determinant<T: Real>(a: &[Vec<T>]) -> T {
    FullPivLu::new(a).determinant()
}

/// Determinant of the matrix whose columns are `columns`, divided by the
/// product of the column norms. Lies in `[-1, 1]` by Hadamard's inequality.
pub fn normalized_column_det<T: Real>(columns: &[Vec<T>]) -> T {
    let n = columns.len();
    let mut m = vec![vec![T::zero(); n]; n];
    let mut scale = T::one();
    for (j, col) in columns.iter().enumerate() {
        let cn = norm(col);
        if cn == T::zero() {
            return T::zero();
        }
        scale *= cn;
        for (i, &v) in col.iter().enumerate() {
            m[i][j] = v;
        }
    }
    determinant(&m) / scale
}

/// Gram matrix `G^T G` of the given vectors.
pub fn gram<T: Real>(vectors: &[&[T]]) -> Vec<Vec<T>> {
    vectors
        .iter()
        .map(|a| vectors.iter().map(|b| dot(a, b)).collect())
        .collect()
}

/// Least-squares coefficients of `x` on the span of `vectors` (assumed
/// linearly independent), via the normal equations.
pub fn least_squares<T: Real>(vectors: &[&[T]], x: &[T]) -> Result<Vec<T>> {
    let g = gram(vectors);
    let rhs: Vec<T> = vectors.iter().map(|v| dot(v, x)).collect();
    solve(&g, &rhs)
}

/// Orthonormal basis of the orthogonal complement of `span(vectors)` in
/// `R^dim`, by Gram-Schmidt against the standard basis. Deterministic.
pub fn orthogonal_complement<T: Real>(vectors: &[&[T]], dim: usize) -> Vec<Vec<T>> {
    let threshold = T::lit(1e-6);
    let mut span: Vec<Vec<T>> = Vec::new();
    for v in vectors {
        if let Some(r) = reduce_against(&span, v, threshold) {
            span.push(r);
        }
    }
    let mut out = Vec::new();
    for i in 0..dim {
        let mut e = vec![T::zero(); dim];
        e[i] = T::one();
        if let Some(r) = reduce_against(&span, &e, threshold) {
            span.push(r.clone());
            out.push(r);
        }
    }
    out
}

fn reduce_against<T: Real>(basis: &[Vec<T>], v: &[T], threshold: T) -> Option<Vec<T>> {
    let mut r = v.to_vec();
    // two passes keep the basis orthogonal to working precision
    for _ in 0..2 {
        for b in basis {
            let c = dot(&r, b);
            add_scaled(&mut r, -c, b);
        }
    }
    if norm(&r) <= threshold * norm(v).max(T::one()) {
        return None;
    }
    normalized(&r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_recovers_known_solution() {
        let a = vec![vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 4.0]];
        let x_true = [1.0, -2.0, 0.5];
        let b: Vec<f64> = a.iter().map(|r| dot(r, &x_true)).collect();
        let x = solve(&a, &b).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_system_is_an_error() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert_eq!(FullPivLu::new(&a).rank(), 1);
        assert_eq!(solve(&a, &[1.0, 2.0]), Err(Error::Singular));
    }

    #[test]
    fn determinant_sign_tracks_permutations() {
        let a = vec![vec![0.0f64, 1.0], vec![1.0, 0.0]];
        assert!((determinant(&a) + 1.0).abs() < 1e-15);
        let b = vec![vec![3.0f64, 0.0, 0.0], vec![0.0, 0.0, 2.0], vec![0.0, 5.0, 0.0]];
        assert!((determinant(&b) + 30.0).abs() < 1e-12);
    }

    #[test]
    fn complement_is_orthonormal() {
        let v = [1.0f64, 1.0, 0.0];
        let basis = orthogonal_complement(&[&v[..]], 3);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(dot(b, &v).abs() < 1e-12);
            assert!((norm(b) - 1.0).abs() < 1e-12);
        }
        assert!(dot(&basis[0], &basis[1]).abs() < 1e-12);
    }
}
