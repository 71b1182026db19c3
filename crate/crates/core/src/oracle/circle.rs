//! Exact arc arithmetic on `S^1`.
//!
//! Angles are in degrees and the code only adds, subtracts and compares, so
//! with [`num::BigRational`] angles every answer is exact. The same code
//! runs on `f64` for quick checks.

use std::cmp::Ordering;
use std::fmt::Debug;

use num::{BigRational, FromPrimitive, Num, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::caps::Cap;
use crate::error::{Error, Result};
use crate::geom::SpherePoint;
use crate::scalar::Real;

/// Scalar usable for exact-or-float angle arithmetic.
pub trait AngleScalar: Clone + PartialOrd + Num + FromPrimitive + ToPrimitive + Debug {}
impl<T: Clone + PartialOrd + Num + FromPrimitive + ToPrimitive + Debug> AngleScalar for T {}

fn full<T: AngleScalar>() -> T {
    T::from_u32(360).unwrap()
}

fn half<T: AngleScalar>() -> T {
    T::from_u32(180).unwrap()
}

fn cmp<T: PartialOrd>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Reduces an angle into `[0, 360)`.
pub fn normalize_degrees<T: AngleScalar>(mut a: T) -> T {
    let f = full::<T>();
    while a < T::zero() {
        a = a + f.clone();
    }
    while a >= f {
        a = a - f.clone();
    }
    a
}

/// A closed counterclockwise arc from `start` to `end`, in degrees, both
/// in `[0, 360)`. Equal endpoints make a single point. Endpoints are stored
/// as given, so arcs built from a shared angle share it exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Arc<T> {
    start: T,
    end: T,
}

impl<T: AngleScalar> Arc<T> {
    /// The arc running counterclockwise from `start` to `end`.
    pub fn new(start: T, end: T) -> Self {
        Arc { start: normalize_degrees(start), end: normalize_degrees(end) }
    }

    pub fn from_start_length(start: T, length: T) -> Result<Self> {
        if length < T::zero() || length >= full::<T>() {
            return Err(Error::InvalidArc(format!("length {length:?} outside [0, 360)")));
        }
        let end = normalize_degrees(start.clone() + length);
        Ok(Arc { start: normalize_degrees(start), end })
    }

    pub fn start(&self) -> &T {
        &self.start
    }

    pub fn length(&self) -> T {
        normalize_degrees(self.end.clone() - self.start.clone())
    }

    pub fn end(&self) -> &T {
        &self.end
    }

    /// The arc as one or two closed intervals of `[0, 360]`.
    pub fn intervals(&self) -> Vec<(T, T)> {
        if self.end >= self.start {
            vec![(self.start.clone(), self.end.clone())]
        } else {
            vec![(self.start.clone(), full::<T>()), (T::zero(), self.end.clone())]
        }
    }

    pub fn contains(&self, angle: &T) -> bool {
        let rel = normalize_degrees(angle.clone() - self.start.clone());
        rel <= self.length()
    }

    pub fn antipode(&self) -> Self {
        Arc {
            start: normalize_degrees(self.start.clone() + half::<T>()),
            end: normalize_degrees(self.end.clone() + half::<T>()),
        }
    }

    /// A common angle of two closed arcs, if any.
    pub fn intersection_point(&self, other: &Self) -> Option<T> {
        // 0 and 360 are the same point but sit at opposite interval ends.
        if self.contains(&T::zero()) && other.contains(&T::zero()) {
            return Some(T::zero());
        }
        for (a0, a1) in self.intervals() {
            for (b0, b1) in other.intervals() {
                let lo = if a0 >= b0 { a0.clone() } else { b0.clone() };
                let hi = if a1 <= b1 { a1.clone() } else { b1 };
                if lo <= hi {
                    return Some(normalize_degrees(lo));
                }
            }
        }
        None
    }

    pub fn map<U: AngleScalar>(&self, f: impl Fn(&T) -> U) -> Arc<U> {
        Arc { start: f(&self.start), end: f(&self.end) }
    }

    /// The cap spanned by the arc's endpoints; requires length < 180.
    pub fn to_cap<R: Real>(&self) -> Result<Cap<R>> {
        let length = self.length();
        if length >= half::<T>() {
            return Err(Error::InvalidArc(format!("arc of length {length:?} is not short")));
        }
        let to_point = |a: &T| {
            let rad = R::lit(a.to_f64().unwrap_or(f64::NAN)).to_radians();
            SpherePoint::on_circle(rad)
        };
        if length == T::zero() {
            Cap::new(vec![to_point(&self.start)])
        } else {
            Cap::new(vec![to_point(&self.start), to_point(&self.end)])
        }
    }
}

/// A finite union of closed arcs.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcSet<T> {
    arcs: Vec<Arc<T>>,
}

impl<T: AngleScalar> ArcSet<T> {
    pub fn new(arcs: Vec<Arc<T>>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::Empty("arc set"));
        }
        Ok(ArcSet { arcs })
    }

    pub fn single(arc: Arc<T>) -> Self {
        ArcSet { arcs: vec![arc] }
    }

    pub fn arcs(&self) -> &[Arc<T>] {
        &self.arcs
    }

    pub fn contains(&self, angle: &T) -> bool {
        self.arcs.iter().any(|a| a.contains(angle))
    }

    pub fn intersection_point(&self, other: &Self) -> Option<T> {
        self.arcs
            .iter()
            .find_map(|a| other.arcs.iter().find_map(|b| a.intersection_point(b)))
    }

    /// `F ∩ (-F) = ∅`.
    pub fn antipodal_free(&self) -> bool {
        let anti: Vec<Arc<T>> = self.arcs.iter().map(Arc::antipode).collect();
        self.arcs
            .iter()
            .all(|a| anti.iter().all(|b| a.intersection_point(b).is_none()))
    }

    pub fn map<U: AngleScalar>(&self, f: impl Fn(&T) -> U + Copy) -> ArcSet<U> {
        ArcSet { arcs: self.arcs.iter().map(|a| a.map(f)).collect() }
    }
}

impl ArcSet<f64> {
    /// Exact rational copy (every finite `f64` is a dyadic rational).
    pub fn to_exact(&self) -> Result<ArcSet<BigRational>> {
        let arcs = self
            .arcs
            .iter()
            .map(|a| {
                let s = BigRational::from_float(a.start).ok_or(Error::NonFinite)?;
                let e = BigRational::from_float(a.end).ok_or(Error::NonFinite)?;
                Ok(Arc { start: s, end: e })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ArcSet { arcs })
    }
}

/// JSON form: `{"arcs": [[start_deg, end_deg], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcSetJson {
    pub arcs: Vec<[f64; 2]>,
}

impl TryFrom<ArcSetJson> for ArcSet<f64> {
    type Error = Error;
    fn try_from(j: ArcSetJson) -> Result<Self> {
        if j.arcs.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        ArcSet::new(j.arcs.iter().map(|&[s, e]| Arc::new(s, e)).collect())
    }
}

impl From<&ArcSet<f64>> for ArcSetJson {
    fn from(s: &ArcSet<f64>) -> Self {
        ArcSetJson { arcs: s.arcs.iter().map(|a| [a.start, a.end]).collect() }
    }
}

/// Angle of a point of `S^1` in degrees, in `[0, 360)`.
pub fn point_degrees<R: Real>(p: &SpherePoint<R>) -> f64 {
    let c = p.coords();
    normalize_degrees(c[1].to_f64_lossy().atan2(c[0].to_f64_lossy()).to_degrees())
}

/// The arc occupied by a cap on `S^1`. Endpoints are the angles of the
/// extreme generators themselves, so caps sharing a generator share an
/// endpoint exactly.
pub fn cap_to_arc<R: Real>(c: &Cap<R>) -> Result<Arc<f64>> {
    if c.ambient_dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: c.ambient_dim() });
    }
    let w = point_degrees(c.witness());
    let rel = |a: f64| {
        let r = normalize_degrees(a - w);
        if r > 180.0 { r - 360.0 } else { r }
    };
    let angles: Vec<f64> = c.generators().iter().map(point_degrees).collect();
    let lo = angles.iter().copied().min_by(|a, b| cmp(&rel(*a), &rel(*b))).unwrap();
    let hi = angles.iter().copied().max_by(|a, b| cmp(&rel(*a), &rel(*b))).unwrap();
    Ok(Arc::new(lo, hi))
}

pub fn shortset_to_arcset<R: Real>(s: &crate::caps::ShortSet<R>) -> Result<ArcSet<f64>> {
    ArcSet::new(s.parts().iter().map(cap_to_arc).collect::<Result<Vec<_>>>()?)
}

/// Exact coverage report for `S^1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleCover<T> {
    pub covered: bool,
    /// Maximal uncovered open arcs `(start, end)`; `end` may exceed 360 for
    /// a gap through angle 0.
    pub gaps: Vec<(T, T)>,
}

/// Endpoint sweep over the union of the family.
pub fn circle_cover_check<T: AngleScalar>(family: &[ArcSet<T>]) -> CircleCover<T> {
    let f = full::<T>();
    let mut intervals: Vec<(T, T)> = family
        .iter()
        .flat_map(|s| s.arcs.iter().flat_map(Arc::intervals))
        .collect();
    intervals.sort_by(|a, b| cmp(&a.0, &b.0).then(cmp(&a.1, &b.1)));
    let zero_covered = intervals.iter().any(|(s, e)| *s == T::zero() || *e == f);

    let mut gaps = Vec::new();
    let mut reach = T::zero();
    for (s, e) in intervals {
        if s > reach {
            gaps.push((reach.clone(), s));
        }
        if e > reach {
            reach = e;
        }
    }
    if reach < f {
        gaps.push((reach, f.clone()));
    }
    if !zero_covered && gaps.len() >= 2 {
        let first = gaps.remove(0);
        let last = gaps.pop().unwrap();
        gaps.push((last.0, first.1 + f));
    }
    CircleCover { covered: gaps.is_empty(), gaps }
}

/// Pairwise intersections of three closed sets covering `S^1`, each
/// disjoint from its antipodal image.
#[derive(Clone, Debug, PartialEq)]
pub struct RemarkReport<T> {
    /// `pairwise[k]` for the pairs (0,1), (0,2), (1,2): a common angle or `None`.
    pub pairwise: [Option<T>; 3],
}

impl<T> RemarkReport<T> {
    pub fn all_nonempty(&self) -> bool {
        self.pairwise.iter().all(Option::is_some)
    }
}

pub fn remark_pairwise_check<T: AngleScalar>(family: &[ArcSet<T>]) -> Result<RemarkReport<T>> {
    if family.len() != 3 {
        return Err(Error::WrongCount { expected: "3 arc sets".into(), found: family.len() });
    }
    if let Some(i) = family.iter().position(|s| !s.antipodal_free()) {
        return Err(Error::Precondition(format!("set {i} meets its antipodal image")));
    }
    let cover = circle_cover_check(family);
    if !cover.covered {
        return Err(Error::Precondition(format!("family does not cover S^1 (gaps {:?})", cover.gaps)));
    }
    Ok(RemarkReport {
        pairwise: [
            family[0].intersection_point(&family[1]),
            family[0].intersection_point(&family[2]),
            family[1].intersection_point(&family[2]),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn arcs(spec: &[(f64, f64)]) -> Vec<ArcSet<f64>> {
        spec.iter().map(|&(s, e)| ArcSet::single(Arc::new(s, e))).collect()
    }

    #[test]
    fn equilateral_arcs_cover() {
        let fam = arcs(&[(0.0, 120.0), (120.0, 240.0), (240.0, 360.0)]);
        assert!(circle_cover_check(&fam).covered);
        let exact: Vec<_> = fam.iter().map(|s| s.to_exact().unwrap()).collect();
        assert!(circle_cover_check(&exact).covered);
    }

    #[test]
    fn gap_examples() {
        let r = circle_cover_check(&arcs(&[(0.0, 100.0), (100.0, 200.0), (200.0, 300.0)]));
        assert_eq!(r.gaps, vec![(300.0, 360.0)]);
        let r = circle_cover_check(&arcs(&[(0.0, 359.9)]));
        assert_eq!(r.gaps.len(), 1);
        assert!((r.gaps[0].0 - 359.9).abs() < 1e-12 && r.gaps[0].1 == 360.0);
    }

    #[test]
    fn gap_through_zero_is_merged() {
        let fam = vec![ArcSet::single(Arc::new(q(10, 1), q(350, 1)))];
        let r = circle_cover_check(&fam);
        assert_eq!(r.gaps, vec![(q(350, 1), q(370, 1))]);
        assert!(!r.covered);
        let none: Vec<ArcSet<BigRational>> = vec![];
        assert_eq!(circle_cover_check(&none).gaps, vec![(q(0, 1), q(360, 1))]);
    }

    #[test]
    fn touching_arcs_cover_exactly_but_not_with_a_sliver() {
        let third = q(1, 3);
        let a = Arc::new(q(0, 1), q(120, 1) + third.clone());
        let b = Arc::new(q(120, 1) + third.clone(), q(240, 1));
        let c = Arc::new(q(240, 1), q(0, 1));
        let fam = vec![ArcSet::single(a.clone()), ArcSet::single(b), ArcSet::single(c.clone())];
        assert!(circle_cover_check(&fam).covered);
        let b2 = Arc::new(q(120, 1) + third.clone() + q(1, 1_000_000_007), q(240, 1));
        let fam = vec![ArcSet::single(a), ArcSet::single(b2), ArcSet::single(c)];
        let r = circle_cover_check(&fam);
        assert!(!r.covered);
        assert_eq!(r.gaps.len(), 1);
    }

    #[test]
    fn antipodal_freeness() {
        assert!(ArcSet::single(Arc::new(0.0, 179.0)).antipodal_free());
        assert!(!ArcSet::single(Arc::new(0.0, 180.0)).antipodal_free());
        let two = ArcSet::new(vec![Arc::new(0.0, 10.0), Arc::new(195.0, 200.0)]).unwrap();
        assert!(two.antipodal_free());
        let clash = ArcSet::new(vec![Arc::new(0.0, 10.0), Arc::new(190.0, 200.0)]).unwrap();
        assert!(!clash.antipodal_free());
    }

    #[test]
    fn remark_examples() {
        let eq = arcs(&[(0.0, 120.0), (120.0, 240.0), (240.0, 360.0)]);
        assert!(remark_pairwise_check(&eq).unwrap().all_nonempty());
        let fam: Vec<ArcSet<BigRational>> = [(0, 130), (120, 250), (240, 10)]
            .iter()
            .map(|&(s, e)| ArcSet::single(Arc::new(q(s, 1), q(e, 1))))
            .collect();
        let r = remark_pairwise_check(&fam).unwrap();
        assert!(r.all_nonempty());
        let gapped = arcs(&[(0.0, 100.0), (100.0, 200.0), (200.0, 300.0)]);
        assert!(matches!(remark_pairwise_check(&gapped), Err(Error::Precondition(_))));
    }

    #[test]
    fn cap_arc_round_trip() {
        let c = Arc::new(300.0, 20.0).to_cap::<f64>().unwrap();
        let a = cap_to_arc(&c).unwrap();
        assert!((a.start() - 300.0).abs() < 1e-9 && (a.length() - 80.0).abs() < 1e-9);
        assert!(Arc::new(0.0, 180.0).to_cap::<f64>().is_err());
    }
}
