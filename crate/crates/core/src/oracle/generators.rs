//! Seeded instance generators. Identical arguments give identical output.

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::circle::{remark_pairwise_check, Arc, ArcSet};
use super::sampling::random_point;
use crate::caps::{Cap, ShortSet};
use crate::certify::facet_caps;
use crate::error::{Error, Result};
use crate::geom::{barycentric_origin, regular_simplex, FlatSimplex, SimplexChart, SpherePoint};
use crate::linalg::{self, determinant};
use crate::scalar::Real;
use crate::solver::Lemma1Instance;
use crate::subdivide::subdivide;

/// Minimum barycentric coordinate of the origin in generated simplices.
pub const ORIGIN_FLOOR: f64 = 0.01;
pub const MAX_REJECTIONS: usize = 100_000;

/// `n + 2` uniform points of `S^n` whose flat simplex holds the origin with
/// every barycentric coordinate above [`ORIGIN_FLOOR`].
pub fn random_simplex_with_origin<T: Real>(n: usize, seed: u64) -> Result<Vec<SpherePoint<T>>> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let floor = T::lit(ORIGIN_FLOOR);
    for _ in 0..MAX_REJECTIONS {
        let pts: Vec<SpherePoint<T>> = (0..n + 2).map(|_| random_point(n, &mut rng)).collect();
        let Ok(flat) = FlatSimplex::from_points(&pts) else { continue };
        let Ok(lambda) = barycentric_origin(&flat) else { continue };
        if lambda.iter().all(|&l| l > floor) {
            return Ok(pts);
        }
    }
    Err(Error::RejectionLimit(MAX_REJECTIONS))
}

/// Facet caps of a seeded random simplex: a minimal cover of `S^n`.
pub fn simplex_cover<T: Real>(n: usize, seed: u64) -> Result<Vec<Cap<T>>> {
    facet_caps(&random_simplex_with_origin(n, seed)?)
}

/// Facet caps of a seeded random simplex, each shattered `depth` times.
pub fn shattered_cover<T: Real>(n: usize, depth: u32, seed: u64) -> Result<Vec<ShortSet<T>>> {
    simplex_cover(n, seed)?.iter().map(|c| shatter_cap(c, depth, None)).collect()
}

/// Splits a simplicial cap along the edgewise subdivision of its generator
/// simplex; the parts' union is the original cap.
///
/// With `jitter = Some(seed)` interior subdivision vertices are moved by up
/// to a fifth of the grid spacing (the same move for every cell sharing the
/// vertex), which keeps the parts a tiling of the cap as long as no cell
/// flips orientation; a flip is reported as an error.
pub fn shatter_cap<T: Real>(c: &Cap<T>, depth: u32, jitter: Option<u64>) -> Result<ShortSet<T>> {
    let ambient = c.ambient_dim();
    if c.generators().len() != ambient || !c.is_independent() {
        return Err(Error::NonSimplicial("need n + 1 linearly independent generators"));
    }
    if depth == 0 {
        return Ok(ShortSet::single(c.clone()));
    }
    let tri = subdivide::<T>(ambient - 1, depth);
    let mut bary = tri.vertices.clone();
    if let Some(seed) = jitter {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let step = T::lit(0.2) / T::from_u64(1u64 << depth).unwrap();
        for t in bary.iter_mut().filter(|t| t.iter().all(|&x| x > T::zero())) {
            let mut d: Vec<T> = t.iter().map(|_| T::lit(rng.random_range(-1.0..1.0))).collect();
            let mean = d.iter().copied().sum::<T>() / T::from_usize(d.len()).unwrap();
            d.iter_mut().for_each(|x| *x = (*x - mean) * step);
            for (ti, di) in t.iter_mut().zip(d) {
                *ti += di;
            }
        }
        for cell in &tri.cells {
            let before = determinant(&cell.iter().map(|&v| tri.vertices[v].clone()).collect::<Vec<_>>());
            let after = determinant(&cell.iter().map(|&v| bary[v].clone()).collect::<Vec<_>>());
            if before.signum() != after.signum() {
                return Err(Error::Precondition("jitter flipped a cell".into()));
            }
        }
    }
    let gens: Vec<&[T]> = c.generators().iter().map(|g| g.coords()).collect();
    let points: Vec<SpherePoint<T>> = bary
        .iter()
        .map(|t| SpherePoint::normalize(&linalg::combine(t, &gens)))
        .collect::<Result<_>>()?;
    let parts = tri
        .cells
        .iter()
        .map(|cell| Cap::new(cell.iter().map(|&v| points[v].clone()).collect()))
        .collect::<Result<Vec<_>>>()?;
    ShortSet::new(parts)
}

fn quarter(k: i64) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(4))
}

/// Three arcs with quarter-degree endpoints and lengths in `[90, 180)`.
/// About a third of the arcs start exactly where the previous one ends.
pub fn random_short_arcs(seed: u64) -> Vec<Arc<BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Arc<BigRational>> = Vec::with_capacity(3);
    for _ in 0..3 {
        let length = quarter(rng.random_range(360..720));
        let start = match out.last() {
            Some(prev) if rng.random_range(0..3) == 0 => prev.end().clone(),
            _ => quarter(rng.random_range(0..1440)),
        };
        out.push(Arc::from_start_length(start, length).expect("length below 360"));
    }
    out
}

/// Three closed arc unions covering `S^1`, each disjoint from its own
/// antipodal image. Built from a random antipodally symmetric partition
/// into pieces with random labels and end overlaps, validated exactly.
pub fn antipodal_free_cover(seed: u64) -> Result<Vec<ArcSet<BigRational>>> {
    const ATTEMPTS: usize = 10_000;
    let eighth = |k: i64| BigRational::new(BigInt::from(k), BigInt::from(8));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let m = rng.random_range(2..=5usize);
        let mut cuts: Vec<i64> = vec![0, 1440];
        while cuts.len() < m + 1 {
            let c = rng.random_range(1..1440);
            if !cuts.contains(&c) {
                cuts.push(c);
            }
        }
        cuts.sort_unstable();
        let mut pieces: Vec<(i64, i64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
        pieces.extend(pieces.clone().iter().map(|&(a, b)| (a + 1440, b + 1440)));
        let labels: Vec<usize> = pieces.iter().map(|_| rng.random_range(0..3)).collect();
        let mut sets: Vec<Vec<Arc<BigRational>>> = vec![vec![], vec![], vec![]];
        for (&(a, b), &l) in pieces.iter().zip(&labels) {
            let lo = a - rng.random_range(0..4);
            let hi = b + rng.random_range(0..4);
            sets[l].push(Arc::new(eighth(lo), eighth(hi)));
        }
        let Ok(family) = sets.into_iter().map(ArcSet::new).collect::<Result<Vec<_>>>() else { continue };
        if remark_pairwise_check(&family).is_ok() {
            return Ok(family);
        }
    }
    Err(Error::RejectionLimit(ATTEMPTS))
}

/// The closed upper hemisphere of `S^2` over the equator triangle of the
/// cube roots of unity, with `sets[i]` the sector spanned by the two other
/// vertices and the pole. The pole is the only common point.
pub fn hemisphere_sector_instance<T: Real>() -> Result<Lemma1Instance<T>> {
    let d: Vec<SpherePoint<T>> = (0..3)
        .map(|i| {
            let a = T::lit(2.0 * std::f64::consts::PI * i as f64 / 3.0);
            SpherePoint::new(vec![a.cos(), a.sin(), T::zero()])
        })
        .collect::<Result<_>>()?;
    let pole = SpherePoint::basis(3, 2);
    let chart = SimplexChart::hemisphere(d.clone(), pole.clone())?;
    let sets = (0..3)
        .map(|i| {
            let gens = vec![d[(i + 1) % 3].clone(), d[(i + 2) % 3].clone(), pole.clone()];
            Ok(ShortSet::single(Cap::new(gens)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Lemma1Instance::new(chart, sets)
}

/// A seeded short chart of angular radius about `0.1` with a hidden interior
/// point `c`; `sets[i]` is the cap on `c` and the face opposite vertex `i`,
/// shattered `depth` times. Returns the instance and `c`.
pub fn shattered_lemma1_instance<T: Real>(
    n: usize,
    depth: u32,
    seed: u64,
) -> Result<(Lemma1Instance<T>, SpherePoint<T>)> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let center: SpherePoint<T> = random_point(n, &mut rng);
        let tangent = random_frame(&linalg::orthogonal_complement(&[center.coords()], n + 1), &mut rng);
        let spokes: Vec<Vec<T>> = if n == 1 {
            vec![vec![T::one()], vec![-T::one()]]
        } else {
            regular_simplex::<T>(n - 1).into_iter().map(SpherePoint::into_coords).collect()
        };
        let radius = T::lit(0.1);
        let verts: Vec<SpherePoint<T>> = spokes
            .iter()
            .map(|w| {
                let mut v = center.coords().to_vec();
                for (k, b) in tangent.iter().enumerate() {
                    let noise: f64 = StandardNormal.sample(&mut rng);
                    linalg::add_scaled(&mut v, radius * (w[k] + T::lit(0.15 * noise)), b);
                }
                SpherePoint::normalize(&v)
            })
            .collect::<Result<_>>()?;
        let Ok(chart) = SimplexChart::short(verts.clone()) else { continue };
        let mut t: Vec<T> = (0..=n).map(|_| T::lit(0.3 + Distribution::<f64>::sample(&Exp1, &mut rng))).collect();
        let s: T = t.iter().copied().sum();
        t.iter_mut().for_each(|x| *x /= s);
        let c = chart.map(&t)?;
        let built: Result<Vec<ShortSet<T>>> = (0..=n)
            .map(|i| {
                let mut gens: Vec<SpherePoint<T>> =
                    verts.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, v)| v.clone()).collect();
                gens.push(c.clone());
                shatter_cap(&Cap::new(gens)?, depth, None)
            })
            .collect();
        let Ok(sets) = built else { continue };
        return Ok((Lemma1Instance::new(chart, sets)?, c));
    }
    Err(Error::RejectionLimit(100))
}

// Randomly rotated orthonormal frame of the span of `basis`.
fn random_frame<T: Real>(basis: &[Vec<T>], rng: &mut impl Rng) -> Vec<Vec<T>> {
    let k = basis.len();
    loop {
        let mut frame: Vec<Vec<T>> = Vec::with_capacity(k);
        for _ in 0..k {
            let mut v = vec![T::zero(); basis[0].len()];
            for b in basis {
                let g: f64 = StandardNormal.sample(rng);
                linalg::add_scaled(&mut v, T::lit(g), b);
            }
            for f in &frame {
                let p = linalg::dot(&v, f);
                linalg::add_scaled(&mut v, -p, f);
            }
            match linalg::normalized(&v) {
                Some(u) if linalg::norm(&v) > T::lit(1e-3) => frame.push(u),
                _ => break,
            }
        }
        if frame.len() == k {
            return frame;
        }
    }
}
