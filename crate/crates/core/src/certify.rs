//! Covering certificates for families of `n + 2` caps, uncovered-point
//! witnesses for smaller families, and the necessary-condition check for
//! short sets.
//!
//! For caps `C_1..C_{n+2}` on `S^n` the family covers the sphere exactly
//! when (i) the total intersection is empty and (ii) every `n + 1` of them
//! meet. Both are finite feasibility problems. Points `a_j` chosen from the
//! `(n+1)`-wise intersections then span a nondegenerate simplex with the
//! origin strictly inside, which is recorded as condition (iii).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::caps::{cap_membership, intersection_probe, Cap, ShortSet};
use crate::error::{Error, Result};
use crate::geom::{barycentric_origin, origin_interior, simplex_nondegenerate, FlatSimplex, SpherePoint};
use crate::linalg::{self, FullPivLu};
use crate::scalar::{tol, Real};

/// Upper bound on the number of part selections a short-set check expands.
pub const SELECTION_LIMIT: f64 = 1e6;

/// Retries for the perturbed witness system in [`uncovered_witness`].
pub const PERTURB_RETRIES: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct ConditionIii<T> {
    pub nondegenerate: bool,
    pub origin_barycentric: Vec<T>,
    pub origin_interior: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct CoverCertificate<T> {
    /// `condition_i && condition_ii`; for caps this proves coverage.
    pub certified: bool,
    /// The whole family has no common point.
    pub condition_i: bool,
    /// Every subfamily missing one member has a common point.
    pub condition_ii: bool,
    pub condition_iii: ConditionIii<T>,
    /// `witnesses[j]` lies in every member except the `j`-th.
    pub witnesses: Vec<Option<SpherePoint<T>>>,
    /// Phase-one infeasibility of the total intersection (index 0) and of
    /// each subfamily `j` (index `j + 1`); zero where a point was found.
    pub margins: Vec<T>,
    /// Some decision rests on a slack below `10 * feas_tol`.
    pub fragile: bool,
}

/// Result of [`shortset_family_check`]. The embedded certificate uses the
/// same fields as for caps, but for short sets (i) and (ii) are only
/// necessary for coverage: `necessary.certified` does not prove a cover.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct ShortSetReport<T> {
    pub necessary: CoverCertificate<T>,
    /// A point common to all sets when condition (i) fails.
    pub common_point: Option<SpherePoint<T>>,
    pub note: &'static str,
}

pub const SHORTSET_NOTE: &str =
    "conditions (i) and (ii) are necessary for short closed sets to cover, not sufficient";

/// `n + 2` caps from the facets of a simplex inscribed in `S^n` that
/// contains the origin: cap `j` is spanned by every vertex except `v_j`.
pub fn facet_caps<T: Real>(vertices: &[SpherePoint<T>]) -> Result<Vec<Cap<T>>> {
    let simplex = FlatSimplex::from_points(vertices)?;
    let lambda = barycentric_origin(&simplex)?;
    if !origin_interior(&lambda) {
        let min_coord = lambda.iter().copied().fold(T::infinity(), T::min);
        return Err(Error::OriginNotInterior { min_coord: min_coord.to_f64_lossy() });
    }
    (0..vertices.len())
        .map(|j| {
            let gens = vertices
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, v)| v.clone())
                .collect();
            Cap::new(gens)
        })
        .collect()
}

struct SearchOutcome<T> {
    point: Option<SpherePoint<T>>,
    infeasibility: T,
}

/// Depth-first search for a selection of one part per set whose caps
/// share a point. Prefixes are tested only where the remaining sets still
/// branch; adding caps can only increase infeasibility, so a failed prefix
/// rules out all its extensions.
fn search_selection<T: Real>(sets: &[&[Cap<T>]]) -> Result<SearchOutcome<T>> {
    let mut out = SearchOutcome { point: None, infeasibility: T::infinity() };
    let suffix_products: Vec<f64> = (0..=sets.len())
        .map(|k| sets[k..].iter().map(|s| s.len() as f64).product())
        .collect();
    let mut chosen = Vec::with_capacity(sets.len());
    dfs(sets, 0, &suffix_products, &mut chosen, &mut out)?;
    if out.point.is_some() {
        out.infeasibility = T::zero();
    }
    Ok(out)
}

fn dfs<'a, T: Real>(
    sets: &[&'a [Cap<T>]],
    k: usize,
    suffix_products: &[f64],
    chosen: &mut Vec<&'a Cap<T>>,
    out: &mut SearchOutcome<T>,
) -> Result<bool> {
    if k == sets.len() {
        let probe = intersection_probe(chosen)?;
        if probe.point.is_some() {
            out.point = probe.point;
            return Ok(true);
        }
        out.infeasibility = out.infeasibility.min(probe.infeasibility);
        return Ok(false);
    }
    for part in sets[k] {
        chosen.push(part);
        let branches = suffix_products[k + 1] > 1.0;
        if chosen.len() >= 2 && k + 1 < sets.len() && branches {
            let probe = intersection_probe(chosen)?;
            if probe.point.is_none() {
                out.infeasibility = out.infeasibility.min(probe.infeasibility);
                chosen.pop();
                continue;
            }
        }
        if dfs(sets, k + 1, suffix_products, chosen, out)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

struct FamilyConditions<T> {
    condition_i: bool,
    common_point: Option<SpherePoint<T>>,
    witnesses: Vec<Option<SpherePoint<T>>>,
    margins: Vec<T>,
}

fn family_conditions<T: Real>(sets: &[&[Cap<T>]]) -> Result<FamilyConditions<T>> {
    let total: f64 = sets.iter().map(|s| s.len() as f64).product();
    if total > SELECTION_LIMIT {
        return Err(Error::SelectionExplosion { count: total, limit: SELECTION_LIMIT });
    }
    let all = search_selection(sets)?;
    let subfamilies: Vec<Result<SearchOutcome<T>>> = (0..sets.len())
        .into_par_iter()
        .map(|j| {
            let rest: Vec<&[Cap<T>]> = sets
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, s)| *s)
                .collect();
            search_selection(&rest)
        })
        .collect();
    let mut witnesses = Vec::with_capacity(sets.len());
    let mut margins = vec![if all.point.is_some() { T::zero() } else { all.infeasibility }];
    for sub in subfamilies {
        let sub = sub?;
        margins.push(sub.infeasibility);
        witnesses.push(sub.point);
    }
    Ok(FamilyConditions { condition_i: all.point.is_none(), common_point: all.point, witnesses, margins })
}

fn assemble<T: Real>(fc: &FamilyConditions<T>) -> Result<CoverCertificate<T>> {
    let condition_ii = fc.witnesses.iter().all(Option::is_some);
    let mut condition_iii = ConditionIii { nondegenerate: false, origin_barycentric: Vec::new(), origin_interior: false };
    if condition_ii {
        let pts: Vec<SpherePoint<T>> = fc.witnesses.iter().flatten().cloned().collect();
        condition_iii.nondegenerate = simplex_nondegenerate(&pts)?;
        if condition_iii.nondegenerate {
            let lambda = barycentric_origin(&FlatSimplex::from_points(&pts)?)?;
            condition_iii.origin_interior = origin_interior(&lambda);
            condition_iii.origin_barycentric = lambda;
        }
    }
    let certified = fc.condition_i && condition_ii;
    let slack = T::lit(10.0) * tol::<T>().feas;
    let mut fragile = fc.margins.iter().any(|&m| m > T::zero() && m < slack)
        || (fc.condition_i && fc.margins[0] < slack);
    if certified {
        let min_bary = condition_iii.origin_barycentric.iter().copied().fold(T::infinity(), T::min);
        fragile |= !(min_bary >= slack);
    }
    Ok(CoverCertificate {
        certified,
        condition_i: fc.condition_i,
        condition_ii,
        condition_iii,
        witnesses: fc.witnesses.clone(),
        margins: fc.margins.clone(),
        fragile,
    })
}

fn family_dim(ambients: impl Iterator<Item = usize>, count: usize) -> Result<usize> {
    let ambients: Vec<usize> = ambients.collect();
    let first = *ambients.first().ok_or(Error::Empty("family"))?;
    if let Some(&bad) = ambients.iter().find(|&&a| a != first) {
        return Err(Error::DimensionMismatch { expected: first, found: bad });
    }
    if count != first + 1 {
        return Err(Error::WrongCount { expected: format!("{} members (n + 2)", first + 1), found: count });
    }
    Ok(first - 1)
}

/// Checks conditions (i)-(iii) for exactly `n + 2` caps on `S^n`.
/// `certified` proves coverage; a failure of (i) or (ii) proves the family
/// does not cover.
pub fn cover_certificate<T: Real>(caps: &[Cap<T>]) -> Result<CoverCertificate<T>> {
    family_dim(caps.iter().map(Cap::ambient_dim), caps.len())?;
    let sets: Vec<&[Cap<T>]> = caps.iter().map(std::slice::from_ref).collect();
    assemble(&family_conditions(&sets)?)
}

/// Checks the necessary covering conditions for `n + 2` short sets by
/// expanding intersections of unions into part selections.
pub fn shortset_family_check<T: Real>(sets: &[ShortSet<T>]) -> Result<ShortSetReport<T>> {
    family_dim(sets.iter().map(ShortSet::ambient_dim), sets.len())?;
    let parts: Vec<&[Cap<T>]> = sets.iter().map(ShortSet::parts).collect();
    let fc = family_conditions(&parts)?;
    Ok(ShortSetReport { necessary: assemble(&fc)?, common_point: fc.common_point, note: SHORTSET_NOTE })
}

fn instance_seed<T: Real>(caps: &[Cap<T>]) -> u64 {
    // FNV-1a over the generator bit patterns
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in caps {
        for g in c.generators() {
            for &x in g.coords() {
                for b in x.to_f64_lossy().to_bits().to_le_bytes() {
                    h ^= u64::from(b);
                    h = h.wrapping_mul(0x0100_0000_01b3);
                }
            }
        }
    }
    h
}

/// A point of `S^n` outside every cap of a family of at most `n + 1` caps.
///
/// With `k <= n` caps any unit vector orthogonal to all shortness witnesses
/// works; with `k = n + 1` the witness system `<u_i, x> = -1` is solved,
/// perturbing the witnesses slightly (seeded by the instance) when it is
/// singular. The returned point is verified against every cap.
pub fn uncovered_witness<T: Real>(caps: &[Cap<T>]) -> Result<SpherePoint<T>> {
    let first = caps.first().ok_or(Error::Empty("caps"))?;
    let ambient = first.ambient_dim();
    if let Some(c) = caps.iter().find(|c| c.ambient_dim() != ambient) {
        return Err(Error::DimensionMismatch { expected: ambient, found: c.ambient_dim() });
    }
    if caps.len() > ambient {
        return Err(Error::WrongCount { expected: format!("at most {ambient} caps (n + 1)"), found: caps.len() });
    }
    let witnesses: Vec<&[T]> = caps.iter().map(|c| c.witness().coords()).collect();
    let verify = |x: &SpherePoint<T>| {
        caps.iter().all(|c| c.witness().dot(x) < c.margin() && !cap_membership(c, x))
    };

    if caps.len() < ambient {
        let complement = linalg::orthogonal_complement(&witnesses, ambient);
        let x = SpherePoint::normalize(&complement[0])?;
        return if verify(&x) { Ok(x) } else { Err(Error::RetryLimit) };
    }

    let rhs = vec![-T::one(); ambient];
    let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(caps));
    let eps = tol::<T>().perturb;
    for attempt in 0..=PERTURB_RETRIES {
        let rows: Vec<Vec<T>> = witnesses
            .iter()
            .map(|u| {
                u.iter()
                    .map(|&v| {
                        if attempt == 0 {
                            v
                        } else {
                            let z: f64 = rng.sample(StandardNormal);
                            v + eps * T::lit(z.clamp(-1.0, 1.0))
                        }
                    })
                    .collect()
            })
            .collect();
        let Ok(sol) = FullPivLu::new(&rows).solve(&rhs) else { continue };
        let Ok(x) = SpherePoint::normalize(&sol) else { continue };
        if verify(&x) {
            return Ok(x);
        }
    }
    Err(Error::RetryLimit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{geodesic_distance, regular_simplex};

    fn deg(a: f64) -> SpherePoint<f64> {
        SpherePoint::on_circle(a.to_radians())
    }

    fn arc(a: f64, b: f64) -> Cap<f64> {
        Cap::new(vec![deg(a), deg(b)]).unwrap()
    }

    #[test]
    fn equilateral_arcs_are_certified() {
        let verts = vec![deg(0.0), deg(120.0), deg(240.0)];
        let caps = facet_caps(&verts).unwrap();
        // cap_j spans the two vertices other than v_j
        assert!(caps[0].contains(&deg(180.0)));
        let cert = cover_certificate(&caps).unwrap();
        assert!(cert.certified && cert.condition_i && cert.condition_ii);
        for (j, w) in cert.witnesses.iter().enumerate() {
            assert!(geodesic_distance(w.as_ref().unwrap(), &verts[j]).unwrap() < 1e-9);
        }
        for l in &cert.condition_iii.origin_barycentric {
            assert!((l - 1.0 / 3.0).abs() < 1e-9);
        }
        assert!(cert.condition_iii.nondegenerate && cert.condition_iii.origin_interior);
    }

    #[test]
    fn gapped_arcs_fail_condition_ii() {
        let caps = vec![arc(0.0, 100.0), arc(100.0, 200.0), arc(200.0, 300.0)];
        let cert = cover_certificate(&caps).unwrap();
        assert!(!cert.certified);
        assert!(!cert.condition_ii);
        // The first and third arcs are disjoint: dropping the middle arc
        // leaves an empty intersection.
        assert!(cert.witnesses[1].is_none());
        assert!(cert.witnesses[0].is_some() && cert.witnesses[2].is_some());
        assert!(cert.margins[2] > 1e-3);
    }

    #[test]
    fn tetrahedron_facets_are_certified() {
        let verts = regular_simplex::<f64>(2);
        let caps = facet_caps(&verts).unwrap();
        let cert = cover_certificate(&caps).unwrap();
        assert!(cert.certified);
        for (j, w) in cert.witnesses.iter().enumerate() {
            assert!(geodesic_distance(w.as_ref().unwrap(), &verts[j]).unwrap() < 1e-9);
        }
    }

    #[test]
    fn facet_caps_rejects_bad_simplices() {
        let verts = vec![deg(0.0), deg(30.0), deg(60.0)];
        assert!(matches!(facet_caps(&verts), Err(Error::OriginNotInterior { .. })));
        let verts = vec![deg(0.0), deg(0.0), deg(60.0)];
        assert!(matches!(facet_caps(&verts), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn certificate_rejects_wrong_family_size() {
        let caps = vec![arc(0.0, 100.0), arc(100.0, 200.0)];
        assert!(matches!(cover_certificate(&caps), Err(Error::WrongCount { .. })));
    }

    #[test]
    fn common_point_breaks_condition_i() {
        let caps = vec![arc(0.0, 100.0), arc(50.0, 120.0), arc(90.0, 200.0)];
        let cert = cover_certificate(&caps).unwrap();
        assert!(!cert.condition_i && !cert.certified);
    }

    #[test]
    fn uncovered_witness_examples() {
        let one = vec![Cap::new(vec![deg(0.0)]).unwrap()];
        let x = uncovered_witness(&one).unwrap();
        assert!(x.coords()[0].abs() < 1e-12);

        let two = vec![arc(120.0, 240.0), arc(240.0, 360.0)];
        let x = uncovered_witness(&two).unwrap();
        assert!(geodesic_distance(&x, &deg(60.0)).unwrap() < 1e-9);
        assert!(two.iter().all(|c| !c.contains(&x)));

        let caps = facet_caps(&regular_simplex::<f64>(2)).unwrap();
        for skip in 0..4 {
            let sub: Vec<_> = caps.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, c)| c.clone()).collect();
            let x = uncovered_witness(&sub).unwrap();
            assert!(sub.iter().all(|c| !c.contains(&x)));
        }
        assert!(matches!(uncovered_witness(&caps), Err(Error::WrongCount { .. })));
    }

    #[test]
    fn singular_witness_system_is_perturbed() {
        // Two caps with identical witnesses on S^1.
        let caps = vec![arc(-10.0, 10.0), arc(-20.0, 20.0)];
        let x = uncovered_witness(&caps).unwrap();
        assert!(caps.iter().all(|c| !c.contains(&x)));
        assert!(x.coords()[0] < 0.0 || x.coords()[0].abs() < 1e-6);
    }

    #[test]
    fn shortset_check_on_singletons_matches_certificate() {
        let caps = facet_caps(&regular_simplex::<f64>(2)).unwrap();
        let sets: Vec<_> = caps.iter().cloned().map(ShortSet::single).collect();
        let report = shortset_family_check(&sets).unwrap();
        assert_eq!(report.necessary, cover_certificate(&caps).unwrap());
        assert_eq!(report.common_point, None);
    }

    #[test]
    fn shortsets_sharing_a_point_fail_condition_i() {
        let a = Cap::new(vec![deg(0.0), deg(30.0)]).unwrap();
        let b = Cap::new(vec![deg(-30.0), deg(0.0)]).unwrap();
        let c = Cap::new(vec![deg(-5.0), deg(5.0)]).unwrap();
        let far = Cap::new(vec![deg(170.0)]).unwrap();
        let sets = vec![ShortSet::new(vec![a, far]).unwrap(), ShortSet::single(b), ShortSet::single(c)];
        let report = shortset_family_check(&sets).unwrap();
        assert!(!report.necessary.condition_i);
        let p = report.common_point.unwrap();
        assert!(geodesic_distance(&p, &deg(0.0)).unwrap() < 1e-9);
    }
}
