//! Deterministic point sets on `S^n` and a sampling cover check.
//!
//! A sampling check can only refute coverage; "all samples covered" says the
//! union misses no point farther than `mesh_bound` from every sample.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::caps::{Cap, ShortSet};
use crate::geom::SpherePoint;
use crate::scalar::Real;

/// A closed subset of the sphere with a membership test.
pub trait Region<T>: Sync {
    fn ambient_dim(&self) -> usize;
    fn contains(&self, x: &SpherePoint<T>) -> bool;
}

impl<T: Real> Region<T> for Cap<T> {
    fn ambient_dim(&self) -> usize {
        Cap::ambient_dim(self)
    }
    fn contains(&self, x: &SpherePoint<T>) -> bool {
        Cap::contains(self, x)
    }
}

impl<T: Real> Region<T> for ShortSet<T> {
    fn ambient_dim(&self) -> usize {
        ShortSet::ambient_dim(self)
    }
    fn contains(&self, x: &SpherePoint<T>) -> bool {
        ShortSet::contains(self, x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet<T> {
    pub dim: usize,
    pub depth: u32,
    pub points: Vec<SpherePoint<T>>,
    /// Every point of `S^n` is within this geodesic distance of a lattice sample.
    pub mesh_bound: T,
}

/// Normalized integer points `k` of `Z^(n+1)` with `sum |k_i| = 2^depth`:
/// the vertices of the `depth`-fold edgewise subdivision of the
/// cross-polytope, pushed to the sphere.
pub fn sample_sphere<T: Real>(n: usize, depth: u32) -> SampleSet<T> {
    let m = 1i64 << depth;
    let mut points = Vec::new();
    let mut k = vec![0i64; n + 1];
    enumerate(&mut k, 0, m, &mut |v| {
        let coords: Vec<T> = v.iter().map(|&c| T::from_i64(c).unwrap()).collect();
        points.push(SpherePoint::normalize(&coords).expect("nonzero lattice point"));
    });
    // Conservative covering radius: a point's radial image on the l1 sphere
    // sits in a flat cell of l2 diameter sqrt(2)/2^depth, and radial
    // projection back to S^n stretches distances by at most ~sqrt(n + 1).
    let bound = std::f64::consts::FRAC_PI_2 * (n as f64).sqrt() / m as f64 * 1.1;
    SampleSet { dim: n, depth, points, mesh_bound: T::lit(bound) }
}

fn enumerate(k: &mut Vec<i64>, i: usize, left: i64, out: &mut impl FnMut(&[i64])) {
    if i == k.len() - 1 {
        if left == 0 {
            k[i] = 0;
            out(k);
        } else {
            for s in [left, -left] {
                k[i] = s;
                out(k);
            }
        }
        return;
    }
    for a in -left..=left {
        k[i] = a;
        enumerate(k, i + 1, left - a.abs(), out);
    }
}

/// [`sample_sphere`] plus `extra` seeded uniform points. Point `j` comes
/// from its own ChaCha stream, so prefixes agree across `extra` values.
pub fn sample_sphere_augmented<T: Real>(n: usize, depth: u32, seed: u64, extra: usize) -> SampleSet<T> {
    let mut set = sample_sphere(n, depth);
    for j in 0..extra {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        set.points.push(random_point(n, &mut rng));
    }
    set
}

pub(crate) fn random_point<T: Real>(n: usize, rng: &mut impl rand::Rng) -> SpherePoint<T> {
    loop {
        let v: Vec<T> = (0..=n)
            .map(|_| T::lit(StandardNormal.sample(rng)))
            .collect();
        if let Ok(p) = SpherePoint::normalize(&v) {
            return p;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingReport<T> {
    pub all_covered: bool,
    /// Samples outside every member, in sample order.
    pub uncovered: Vec<SpherePoint<T>>,
    pub mesh_bound: T,
    pub checked: usize,
}

pub fn sampling_cover_check<T: Real, R: Region<T>>(family: &[R], samples: &SampleSet<T>) -> SamplingReport<T> {
    let uncovered: Vec<SpherePoint<T>> = samples
        .points
        .par_iter()
        .filter(|x| !family.iter().any(|f| f.ambient_dim() == x.ambient_dim() && f.contains(x)))
        .cloned()
        .collect();
    SamplingReport {
        all_covered: uncovered.is_empty(),
        uncovered,
        mesh_bound: samples.mesh_bound,
        checked: samples.points.len(),
    }
}
