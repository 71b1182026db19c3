//! Reference computations written independently of the library internals.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use spherecover::{Cap, SpherePoint};

pub fn unit(v: &[f64]) -> SpherePoint<f64> {
    SpherePoint::normalize(v).unwrap()
}

pub fn gaussian_point(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// Gaussian elimination with partial pivoting; None if singular.
fn gauss(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-13 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Geodesic distance from `x` to `cone(gens) ∩ S^n` by brute-force
/// nonnegative least squares over all generator subsets.
pub fn reference_cap_distance(gens: &[Vec<f64>], x: &[f64]) -> f64 {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let m = gens.len();
    let mut best_sq = dot(x, x);
    let mut best_p = vec![0.0; x.len()];
    for mask in 1u32..(1 << m) {
        let idx: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        if idx.len() > x.len() {
            continue;
        }
        let g: Vec<Vec<f64>> = idx.iter().map(|&i| idx.iter().map(|&j| dot(&gens[i], &gens[j])).collect()).collect();
        let rhs: Vec<f64> = idx.iter().map(|&i| dot(&gens[i], x)).collect();
        let Some(w) = gauss(g, rhs) else { continue };
        if w.iter().any(|&l| l < -1e-12) {
            continue;
        }
        let mut p = vec![0.0; x.len()];
        for (&i, &l) in idx.iter().zip(&w) {
            for (pk, gk) in p.iter_mut().zip(&gens[i]) {
                *pk += l.max(0.0) * gk;
            }
        }
        let r: Vec<f64> = p.iter().zip(x).map(|(a, b)| a - b).collect();
        let d = dot(&r, &r);
        if d < best_sq {
            best_sq = d;
            best_p = p;
        }
    }
    let n = dot(&best_p, &best_p).sqrt();
    if n < 1e-300 {
        return std::f64::consts::FRAC_PI_2;
    }
    let along = dot(x, &best_p) / n;
    let perp = (dot(x, x) - along * along).max(0.0).sqrt();
    perp.atan2(along)
}

pub fn coords(c: &Cap<f64>) -> Vec<Vec<f64>> {
    c.generators().iter().map(|g| g.coords().to_vec()).collect()
}

/// Random short cap: `k` generators within `spread` radians-ish of a center.
pub fn random_cap(dim: usize, k: usize, spread: f64, rng: &mut impl Rng) -> Cap<f64> {
    loop {
        let c = gaussian_point(dim, rng);
        let gens: Vec<SpherePoint<f64>> = (0..k)
            .map(|_| {
                let d = gaussian_point(dim, rng);
                let v: Vec<f64> = c.iter().zip(&d).map(|(a, b)| a + spread * b).collect();
                unit(&v)
            })
            .collect();
        if let Ok(cap) = Cap::new(gens) {
            return cap;
        }
    }
}

/// `det [v_j; 1]` with every column scaled to unit length.
pub fn reference_normalized_det(points: &[Vec<f64>]) -> f64 {
    let n = points.len();
    let cols: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let mut c = p.clone();
            c.push(1.0);
            let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            c.iter().map(|x| x / norm).collect()
        })
        .collect();
    // rows of the matrix are coordinates, columns are points
    let mut a: Vec<Vec<f64>> = (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// Weights `lambda` with `sum lambda = 1` and `sum lambda_j p_j = 0`.
pub fn reference_origin_barycentric(points: &[Vec<f64>]) -> Option<Vec<f64>> {
    let n = points.len();
    let mut a = vec![vec![0.0; n]; n];
    for (j, p) in points.iter().enumerate() {
        for (i, &x) in p.iter().enumerate() {
            a[i][j] = x;
        }
        a[n - 1][j] = 1.0;
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    gauss(a, b)
}
