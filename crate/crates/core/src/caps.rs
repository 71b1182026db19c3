//! Caps and short sets as finitely generated spherical polytopes.
//!
//! A [`Cap`] is `cone(generators) ∩ S^n` for generators lying in a common
//! open hemisphere; a [`ShortSet`] is a finite union of caps sharing one
//! hemisphere. Membership, intersection and slicing all reduce to linear
//! feasibility over the generator weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{check_same_dim, SpherePoint};
use crate::linalg::{self, dot, norm};
use crate::lp::phase_one;
use crate::minnorm::min_norm_point;
use crate::scalar::{tol, Real};

/// Face enumeration in [`cap_distance`] is exponential in the generator
/// count; beyond this the exact projector refuses.
pub const FACE_ENUMERATION_LIMIT: usize = 12;

/// Unit vector `u` with `<u, g> >= margin > 0` for every point `g` of a set.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortnessWitness<T> {
    pub direction: SpherePoint<T>,
    pub margin: T,
}

/// Max-margin hemisphere containing `points`, or [`Error::NotShort`].
///
/// The optimum direction is the normalized minimum-norm point of the convex
/// hull, so success is equivalent to the origin lying outside that hull.
pub fn shortness_witness<T: Real>(points: &[SpherePoint<T>]) -> Result<ShortnessWitness<T>> {
    let first = points.first().ok_or(Error::Empty("points"))?;
    let ambient = first.ambient_dim();
    for p in points {
        check_same_dim(ambient, p)?;
    }
    let refs: Vec<&[T]> = points.iter().map(|p| p.coords()).collect();
    let mnp = min_norm_point(&refs);
    let short_margin = tol::<T>().short_margin;
    let Some(dir) = linalg::normalized(&mnp.point) else {
        return Err(Error::NotShort { margin: 0.0 });
    };
    let margin = refs.iter().map(|g| dot(&dir, g)).fold(T::infinity(), T::min);
    if margin <= short_margin {
        return Err(Error::NotShort { margin: margin.to_f64_lossy() });
    }
    let direction = SpherePoint::normalize(&dir)?;
    Ok(ShortnessWitness { direction, margin })
}

/// `cone(generators) ∩ S^n`, short by construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CapRepr<T>", into = "CapRepr<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Cap<T> {
    generators: Vec<SpherePoint<T>>,
    witness: SpherePoint<T>,
    margin: T,
    // (G^T G)^{-1} G^T when the generators are linearly independent, so
    // membership is one matrix-vector product
    projector: Option<Vec<Vec<T>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
struct CapRepr<T> {
    generators: Vec<SpherePoint<T>>,
}

impl<T: Real> TryFrom<CapRepr<T>> for Cap<T> {
    type Error = Error;
    fn try_from(r: CapRepr<T>) -> Result<Self> {
        Cap::new(r.generators)
    }
}

impl<T: Real> From<Cap<T>> for CapRepr<T> {
    fn from(c: Cap<T>) -> Self {
        CapRepr { generators: c.generators }
    }
}

impl<T: Real> Cap<T> {
    pub fn new(generators: Vec<SpherePoint<T>>) -> Result<Self> {
        let w = shortness_witness(&generators)?;
        let projector = pseudo_inverse(&generators);
        Ok(Cap { generators, witness: w.direction, margin: w.margin, projector })
    }

    /// Whether the generators are linearly independent.
    pub fn is_independent(&self) -> bool {
        self.projector.is_some()
    }

    pub fn generators(&self) -> &[SpherePoint<T>] {
        &self.generators
    }

    pub fn witness(&self) -> &SpherePoint<T> {
        &self.witness
    }

    /// `min_g <witness, g>`.
    pub fn margin(&self) -> T {
        self.margin
    }

    pub fn dim(&self) -> usize {
        self.witness.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.witness.ambient_dim()
    }

    fn generator_refs(&self) -> Vec<&[T]> {
        self.generators.iter().map(|g| g.coords()).collect()
    }

    pub fn contains(&self, x: &SpherePoint<T>) -> bool {
        cap_membership(self, x)
    }

    pub fn distance(&self, x: &SpherePoint<T>) -> Result<T> {
        cap_distance(self, x)
    }

    /// Normalized mean of the generators (always a member).
    pub fn center(&self) -> SpherePoint<T> {
        let k = T::from_usize(self.generators.len()).unwrap();
        let w = vec![T::one() / k; self.generators.len()];
        SpherePoint::normalize(&linalg::combine(&w, &self.generator_refs()))
            .expect("short generator mean is nonzero")
    }
}

fn pseudo_inverse<T: Real>(generators: &[SpherePoint<T>]) -> Option<Vec<Vec<T>>> {
    let ambient = generators[0].ambient_dim();
    if generators.len() > ambient {
        return None;
    }
    let refs: Vec<&[T]> = generators.iter().map(|g| g.coords()).collect();
    let g = linalg::gram(&refs);
    let lu = linalg::FullPivLu::new(&g);
    if !lu.is_invertible() || lu.determinant() <= tol::<T>().degeneracy {
        return None;
    }
    let mut rows = vec![vec![T::zero(); ambient]; refs.len()];
    for i in 0..ambient {
        let rhs: Vec<T> = refs.iter().map(|r| r[i]).collect();
        let col = lu.solve(&rhs).ok()?;
        for (row, c) in rows.iter_mut().zip(col) {
            row[i] = c;
        }
    }
    Some(rows)
}

// Least-squares weights of `x` over independent generators.
fn project_weights<T: Real>(projector: &[Vec<T>], x: &[T]) -> Vec<T> {
    projector.iter().map(|row| dot(row, x)).collect()
}

pub fn make_cap<T: Real>(generators: Vec<SpherePoint<T>>) -> Result<Cap<T>> {
    Cap::new(generators)
}

/// A finite union of caps contained in one open hemisphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ShortSetRepr<T>", into = "ShortSetRepr<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct ShortSet<T> {
    parts: Vec<Cap<T>>,
    witness: SpherePoint<T>,
    margin: T,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
struct ShortSetRepr<T> {
    parts: Vec<Cap<T>>,
}

impl<T: Real> TryFrom<ShortSetRepr<T>> for ShortSet<T> {
    type Error = Error;
    fn try_from(r: ShortSetRepr<T>) -> Result<Self> {
        ShortSet::new(r.parts)
    }
}

impl<T: Real> From<ShortSet<T>> for ShortSetRepr<T> {
    fn from(s: ShortSet<T>) -> Self {
        ShortSetRepr { parts: s.parts }
    }
}

impl<T: Real> ShortSet<T> {
    pub fn new(parts: Vec<Cap<T>>) -> Result<Self> {
        let first = parts.first().ok_or(Error::Empty("short set parts"))?;
        let ambient = first.ambient_dim();
        if let Some(p) = parts.iter().find(|p| p.ambient_dim() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: p.ambient_dim() });
        }
        let all: Vec<SpherePoint<T>> = parts.iter().flat_map(|p| p.generators.iter().cloned()).collect();
        let w = shortness_witness(&all)?;
        Ok(ShortSet { parts, witness: w.direction, margin: w.margin })
    }

    pub fn single(cap: Cap<T>) -> Self {
        let witness = cap.witness.clone();
        let margin = cap.margin;
        ShortSet { parts: vec![cap], witness, margin }
    }

    pub fn parts(&self) -> &[Cap<T>] {
        &self.parts
    }

    pub fn witness(&self) -> &SpherePoint<T> {
        &self.witness
    }

    pub fn margin(&self) -> T {
        self.margin
    }

    pub fn dim(&self) -> usize {
        self.witness.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.witness.ambient_dim()
    }

    pub fn contains(&self, x: &SpherePoint<T>) -> bool {
        self.parts.iter().any(|p| cap_membership(p, x))
    }

    /// Distance to the nearest part.
    pub fn distance(&self, x: &SpherePoint<T>) -> Result<T> {
        check_same_dim(self.ambient_dim(), x)?;
        if self.parts.len() == 1 {
            return cap_distance(&self.parts[0], x);
        }
        let mut order: Vec<(T, usize)> = self
            .parts
            .iter()
            .enumerate()
            .map(|(i, p)| (distance_lower_bound(p, x), i))
            .collect();
        order.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let mut best = T::infinity();
        for (lb, i) in order {
            if lb >= best {
                break;
            }
            best = best.min(cap_distance(&self.parts[i], x)?);
            if best == T::zero() {
                break;
            }
        }
        Ok(best)
    }
}

pub fn make_shortset<T: Real>(caps: Vec<Cap<T>>) -> Result<ShortSet<T>> {
    ShortSet::new(caps)
}

/// Whether `x` lies in the cap: some `lambda >= 0` has
/// `|sum lambda_g g - x| <= feas_tol`.
pub fn cap_membership<T: Real>(c: &Cap<T>, x: &SpherePoint<T>) -> bool {
    if x.ambient_dim() != c.ambient_dim() {
        return false;
    }
    let t = tol::<T>();
    // Every cap point has <witness, y> >= margin.
    if c.witness.dot(x) < c.margin - t.feas {
        return false;
    }
    let gens = c.generator_refs();
    if let Some(proj) = &c.projector {
        let lambda = project_weights(proj, x.coords());
        let clamped: Vec<T> = lambda.iter().map(|&l| l.max(T::zero())).collect();
        let p = linalg::combine(&clamped, &gens);
        let r: Vec<T> = p.iter().zip(x.coords()).map(|(&a, &b)| a - b).collect();
        return norm(&r) <= t.feas;
    }
    let ambient = c.ambient_dim();
    let a: Vec<Vec<T>> = (0..ambient).map(|i| gens.iter().map(|g| g[i]).collect()).collect();
    match phase_one(&a, x.coords()) {
        Ok(r) => r.is_feasible(),
        Err(_) => cap_distance(c, x).map(|d| d <= t.dist).unwrap_or(false),
    }
}

/// Geodesic distance from `x` to the cap, saturating at `pi/2`.
///
/// Uses the Euclidean projection `p` of `x` onto the generator cone, found by
/// enumerating linearly independent generator subsets; the distance is the
/// angle between `x` and `p`. When `p = 0` (x is in the polar cone) the
/// result is `pi/2`.
pub fn cap_distance<T: Real>(c: &Cap<T>, x: &SpherePoint<T>) -> Result<T> {
    check_same_dim(c.ambient_dim(), x)?;
    let m = c.generators.len();
    if m > FACE_ENUMERATION_LIMIT {
        return Err(Error::FaceEnumerationLimit { found: m, limit: FACE_ENUMERATION_LIMIT });
    }
    if cap_membership(c, x) {
        return Ok(T::zero());
    }
    let gens = c.generator_refs();
    let ambient = c.ambient_dim();
    let xs = x.coords();
    // Projection onto the span already lies in the cone.
    if let Some(proj) = &c.projector {
        let lambda = project_weights(proj, xs);
        if lambda.iter().all(|&l| l >= T::zero()) {
            return Ok(angle_to(xs, &linalg::combine(&lambda, &gens)));
        }
    }
    let max_size = m.min(ambient);
    let neg_tol = -T::lit(1e-12).max(T::epsilon() * T::lit(64.0));

    let mut best_sq = dot(xs, xs);
    let mut best_p = vec![T::zero(); ambient];
    let mut subset: Vec<&[T]> = Vec::with_capacity(max_size);
    for mask in 1u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size > max_size {
            continue;
        }
        subset.clear();
        subset.extend((0..m).filter(|i| mask & (1 << i) != 0).map(|i| gens[i]));
        let g = linalg::gram(&subset);
        let lu = linalg::FullPivLu::new(&g);
        if !lu.is_invertible() {
            continue;
        }
        let rhs: Vec<T> = subset.iter().map(|v| dot(v, xs)).collect();
        let Ok(lambda) = lu.solve(&rhs) else { continue };
        if lambda.iter().any(|&l| l < neg_tol) {
            continue;
        }
        let clamped: Vec<T> = lambda.iter().map(|&l| l.max(T::zero())).collect();
        let p = linalg::combine(&clamped, &subset);
        let r: Vec<T> = p.iter().zip(xs).map(|(&a, &b)| a - b).collect();
        let d_sq = dot(&r, &r);
        if d_sq < best_sq {
            best_sq = d_sq;
            best_p = p;
        }
    }
    Ok(angle_to(xs, &best_p))
}

// Angle between `x` and the direction of `p`, or pi/2 for `p = 0`. The atan2
// form keeps precision for nearly identical directions.
fn angle_to<T: Real>(xs: &[T], p: &[T]) -> T {
    let Some(dir) = linalg::normalized(p) else {
        return T::pi() / T::lit(2.0);
    };
    let along = dot(xs, &dir);
    let mut perp = xs.to_vec();
    linalg::add_scaled(&mut perp, -along, &dir);
    norm(&perp).atan2(along)
}

// Lower bound on the distance from `x` to a cap: the cap lies within angle
// `acos(margin)` of its witness.
fn distance_lower_bound<T: Real>(c: &Cap<T>, x: &SpherePoint<T>) -> T {
    let radius = crate::geom::clamped_acos(c.margin);
    let to_witness = crate::geom::clamped_acos(c.witness.dot(x));
    // acos is coarse near 1; back off by the distance tolerance.
    (to_witness - radius - tol::<T>().dist).max(T::zero())
}

/// The geodesic convex hull of a finite short point set, as a cap.
pub fn geodesic_hull<T: Real>(points: &[SpherePoint<T>]) -> Result<Cap<T>> {
    if points.is_empty() {
        return Err(Error::Empty("points"));
    }
    Cap::new(points.to_vec())
}

/// The geodesic convex hull of a short set: one cap on all its generators.
pub fn geodesic_hull_of_set<T: Real>(s: &ShortSet<T>) -> Result<Cap<T>> {
    let all: Vec<SpherePoint<T>> = s.parts.iter().flat_map(|p| p.generators.iter().cloned()).collect();
    Cap::new(all)
}

/// Outcome of a joint cone-intersection feasibility problem.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionProbe<T> {
    pub point: Option<SpherePoint<T>>,
    /// Phase-one infeasibility (zero up to tolerance when a point exists).
    pub infeasibility: T,
}

/// A common point of all caps, or `None` when their intersection is empty.
pub fn intersection_witness<T: Real>(caps: &[&Cap<T>]) -> Result<Option<SpherePoint<T>>> {
    Ok(intersection_probe(caps)?.point)
}

/// Solves for weights `lambda^i >= 0` with `G_1 lambda^1 = G_i lambda^i` for
/// all `i` and `<u_1, G_1 lambda^1> = 1`, `u_1` the first cap's witness.
/// Cones meet away from the origin exactly when the caps meet.
pub fn intersection_probe<T: Real>(caps: &[&Cap<T>]) -> Result<IntersectionProbe<T>> {
    let first = caps.first().ok_or(Error::Empty("caps"))?;
    let d = first.ambient_dim();
    for c in caps {
        if c.ambient_dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: c.ambient_dim() });
        }
    }
    let offsets: Vec<usize> = caps
        .iter()
        .scan(0, |acc, c| {
            let o = *acc;
            *acc += c.generators.len();
            Some(o)
        })
        .collect();
    let nvars: usize = caps.iter().map(|c| c.generators.len()).sum();
    let m0 = first.generators.len();
    let mut a: Vec<Vec<T>> = Vec::with_capacity(d * (caps.len() - 1) + 1);
    let mut b: Vec<T> = Vec::with_capacity(a.capacity());
    for (i, c) in caps.iter().enumerate().skip(1) {
        for k in 0..d {
            let mut row = vec![T::zero(); nvars];
            for (j, g) in first.generators.iter().enumerate() {
                row[j] = g.coords()[k];
            }
            for (j, g) in c.generators.iter().enumerate() {
                row[offsets[i] + j] = -g.coords()[k];
            }
            a.push(row);
            b.push(T::zero());
        }
    }
    let mut norm_row = vec![T::zero(); nvars];
    for (j, g) in first.generators.iter().enumerate() {
        norm_row[j] = first.witness.dot(g);
    }
    a.push(norm_row);
    b.push(T::one());

    let sol = phase_one(&a, &b)?;
    if !sol.is_feasible() {
        return Ok(IntersectionProbe { point: None, infeasibility: sol.infeasibility });
    }
    let gens = first.generator_refs();
    let v = linalg::combine(&sol.x[..m0], &gens);
    let point = SpherePoint::normalize(&v)?;
    debug_assert!(caps.iter().all(|c| cap_membership(c, &point)));
    Ok(IntersectionProbe { point: Some(point), infeasibility: sol.infeasibility })
}

/// Hyperplane `<normal, x> + offset = 0` strictly separating a cap from
/// the origin: generators satisfy `<normal, g> + offset <= -offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatingHalfspace<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

impl<T: Real> SeparatingHalfspace<T> {
    pub fn evaluate(&self, x: &[T]) -> T {
        dot(&self.normal, x) + self.offset
    }
}

pub fn separating_halfspace<T: Real>(c: &Cap<T>) -> SeparatingHalfspace<T> {
    SeparatingHalfspace {
        normal: c.witness.coords().iter().map(|&v| -v).collect(),
        offset: c.margin / T::lit(2.0),
    }
}

/// Orthonormal basis of the hyperplane `{x : <h, x> = 0}`.
pub fn equator_basis<T: Real>(h: &SpherePoint<T>) -> Vec<Vec<T>> {
    linalg::orthogonal_complement(&[h.coords()], h.ambient_dim())
}

/// Maps intrinsic equator coordinates back into the ambient space.
pub fn lift_from_equator<T: Real>(basis: &[Vec<T>], local: &SpherePoint<T>) -> Result<SpherePoint<T>> {
    let refs: Vec<&[T]> = basis.iter().map(|b| &b[..]).collect();
    SpherePoint::normalize(&linalg::combine(local.coords(), &refs))
}

/// Intersection of the cap with the great subsphere `h^⊥`, expressed in the
/// coordinates of `basis` (an orthonormal basis of `h^⊥`). Returns `None`
/// when the cap misses the equator.
pub fn slice_to_equator<T: Real>(
    c: &Cap<T>,
    h: &SpherePoint<T>,
    basis: &[Vec<T>],
) -> Result<Option<Cap<T>>> {
    let ambient = c.ambient_dim();
    check_same_dim(ambient, h)?;
    if ambient < 3 {
        return Err(Error::TooFewCoordinates(ambient - 1));
    }
    if basis.len() != ambient - 1 {
        return Err(Error::WrongCount { expected: format!("{} basis vectors", ambient - 1), found: basis.len() });
    }
    let feas = tol::<T>().feas;
    let mut zero = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for g in &c.generators {
        let s = h.dot(g);
        if s.abs() <= feas {
            zero.push(g.coords().to_vec());
        } else if s > T::zero() {
            pos.push((s, g));
        } else {
            neg.push((s, g));
        }
    }
    let mut sliced: Vec<Vec<T>> = zero;
    for &(sp, gp) in &pos {
        for &(sn, gn) in &neg {
            let mut v: Vec<T> = gn.coords().iter().map(|&x| sp * x).collect();
            linalg::add_scaled(&mut v, -sn, gp.coords());
            if let Some(u) = linalg::normalized(&v) {
                sliced.push(u);
            }
        }
    }
    if sliced.is_empty() {
        return Ok(None);
    }
    let local: Result<Vec<SpherePoint<T>>> = sliced
        .iter()
        .map(|v| {
            let coords: Vec<T> = basis.iter().map(|b| dot(b, v)).collect();
            SpherePoint::normalize(&coords)
        })
        .collect();
    Cap::new(local?).map(Some)
}
