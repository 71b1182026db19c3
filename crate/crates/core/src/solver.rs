//! Common points of closed covers of a spherical simplex, and a
//! fully-labeled cell finder for Sperner labelings.
//!
//! [`common_point`] minimizes `Phi(t) = max_i dist(sets[i], chart(t))` by
//! branch and bound over the edgewise subdivision of the barycentric simplex.
//! A cover whose `i`-th set contains the face opposite vertex `i` always has
//! a common point, so `Phi` has a zero and refinement drives it below `eps`.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::ShortSet;
use crate::error::{Error, Result};
use crate::geom::{check_same_dim, geodesic_distance, ChartKind, SimplexChart, SpherePoint};
use crate::scalar::{tol, Real};
use crate::subdivide::{lattice_to_barycentric, subdivide, LatticeCell};

pub const DEFAULT_DEPTH_LIMIT: u32 = 20;
pub const DEFAULT_FACE_PROBES: usize = 50;

/// `n + 1` closed sets over a chart. Missing trailing sets (fewer than
/// `n + 1`) are treated as empty.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Instance<T> {
    chart: SimplexChart<T>,
    sets: Vec<ShortSet<T>>,
    face_condition_checked: bool,
    face_violations: Vec<usize>,
}

impl<T: Real> Lemma1Instance<T> {
    /// Builds the instance and probes the face condition with
    /// [`DEFAULT_FACE_PROBES`] seeded points per face.
    pub fn new(chart: SimplexChart<T>, sets: Vec<ShortSet<T>>) -> Result<Self> {
        Self::with_probes(chart, sets, DEFAULT_FACE_PROBES, 0)
    }

    pub fn with_probes(chart: SimplexChart<T>, sets: Vec<ShortSet<T>>, probes: usize, seed: u64) -> Result<Self> {
        let n = chart.dim();
        if sets.is_empty() || sets.len() > n + 1 {
            return Err(Error::WrongCount { expected: format!("1..={} sets", n + 1), found: sets.len() });
        }
        for s in &sets {
            if s.ambient_dim() != n + 1 {
                return Err(Error::DimensionMismatch { expected: n + 1, found: s.ambient_dim() });
            }
        }
        let mut inst = Lemma1Instance { chart, sets, face_condition_checked: false, face_violations: vec![] };
        inst.face_violations = inst.probe_faces(probes, seed)?;
        inst.face_condition_checked = inst.face_violations.is_empty();
        Ok(inst)
    }

    pub fn chart(&self) -> &SimplexChart<T> {
        &self.chart
    }

    pub fn sets(&self) -> &[ShortSet<T>] {
        &self.sets
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// All probes of every face landed in the matching set.
    pub fn face_condition_checked(&self) -> bool {
        self.face_condition_checked
    }

    /// Indices `i` whose face probes missed `sets[i]`.
    pub fn face_violations(&self) -> &[usize] {
        &self.face_violations
    }

    // Probes face i (t_i = 0): its vertices plus `probes` random points.
    fn probe_faces(&self, probes: usize, seed: u64) -> Result<Vec<usize>> {
        let n = self.dim();
        let slack = tol::<T>().dist;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bad = Vec::new();
        for i in 0..=n {
            let Some(set) = self.sets.get(i) else {
                bad.push(i);
                continue;
            };
            let mut pts: Vec<Vec<T>> = (0..=n)
                .filter(|&k| k != i)
                .map(|k| (0..=n).map(|j| if j == k { T::one() } else { T::zero() }).collect())
                .collect();
            for _ in 0..probes {
                let mut t: Vec<T> = (0..=n)
                    .map(|j| if j == i { T::zero() } else { T::lit(-rng.random::<f64>().max(1e-300).ln()) })
                    .collect();
                let s: T = t.iter().copied().sum();
                t.iter_mut().for_each(|x| *x /= s);
                pts.push(t);
            }
            for t in pts {
                let x = self.chart.map(&t)?;
                if set.distance(&x)? > slack {
                    bad.push(i);
                    break;
                }
            }
        }
        Ok(bad)
    }

    /// `max_i dist(sets[i], x)` and `min_i dist(sets[i], x)`.
    pub fn potential(&self, x: &SpherePoint<T>) -> Result<(T, T)> {
        check_same_dim(self.dim() + 1, x)?;
        let mut hi = if self.sets.len() < self.dim() + 1 { T::infinity() } else { T::zero() };
        let mut lo = T::infinity();
        for s in &self.sets {
            let d = s.distance(x)?;
            hi = hi.max(d);
            lo = lo.min(d);
        }
        Ok((hi, lo))
    }
}

/// JSON form of a chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct ChartSpec<T> {
    pub kind: ChartKind,
    pub vertices: Vec<SpherePoint<T>>,
    #[serde(default)]
    pub pole: Option<SpherePoint<T>>,
}

impl<T: Real> ChartSpec<T> {
    pub fn build(self) -> Result<SimplexChart<T>> {
        match (self.kind, self.pole) {
            (ChartKind::Short, _) => SimplexChart::short(self.vertices),
            (ChartKind::Hemisphere, Some(p)) => SimplexChart::hemisphere(self.vertices, p),
            (ChartKind::Hemisphere, None) => Err(Error::InvalidChart("hemisphere chart needs a pole".into())),
        }
    }
}

impl<T: Real> From<&SimplexChart<T>> for ChartSpec<T> {
    fn from(c: &SimplexChart<T>) -> Self {
        ChartSpec { kind: c.kind(), vertices: c.vertices().to_vec(), pole: c.pole().cloned() }
    }
}

/// JSON form of a [`Lemma1Instance`]: `{"chart": {...}, "sets": [ShortSet...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct InstanceSpec<T> {
    pub chart: ChartSpec<T>,
    pub sets: Vec<ShortSet<T>>,
}

impl<T: Real> InstanceSpec<T> {
    pub fn build(self, probes: usize, seed: u64) -> Result<Lemma1Instance<T>> {
        Lemma1Instance::with_probes(self.chart.build()?, self.sets, probes, seed)
    }
}

impl<T: Real> From<&Lemma1Instance<T>> for InstanceSpec<T> {
    fn from(inst: &Lemma1Instance<T>) -> Self {
        InstanceSpec { chart: ChartSpec::from(&inst.chart), sets: inst.sets.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Ok,
    /// Some evaluated point is farther than the cover slack from every set.
    NotACover,
    /// Depth limit reached with `Phi > eps`: hypotheses violated or eps too small.
    Limit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub depth_limit: u32,
    /// Cells kept per level.
    pub beam: usize,
    /// A point farther than this from every set refutes the cover.
    pub cover_slack: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { depth_limit: DEFAULT_DEPTH_LIMIT, beam: 256, cover_slack: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult<T> {
    pub status: SolveStatus,
    /// Best point found, or the uncovered point for [`SolveStatus::NotACover`].
    pub point: SpherePoint<T>,
    pub barycentric: Vec<T>,
    pub max_dist: T,
    pub depth: u32,
    /// Best `Phi` after each level.
    pub history: Vec<T>,
}

#[derive(Clone, Debug)]
struct Eval<T> {
    t: Vec<T>,
    point: SpherePoint<T>,
    phi: T,
    min_dist: T,
}

fn evaluate<T: Real>(inst: &Lemma1Instance<T>, t: Vec<T>) -> Result<Eval<T>> {
    let point = inst.chart.map(&t)?;
    let (phi, min_dist) = inst.potential(&point)?;
    Ok(Eval { t, point, phi, min_dist })
}

fn not_a_cover<T: Real>(e: &Eval<T>, level: u32, history: Vec<T>) -> SolveResult<T> {
    SolveResult {
        status: SolveStatus::NotACover,
        point: e.point.clone(),
        barycentric: e.t.clone(),
        max_dist: e.phi,
        depth: level,
        history,
    }
}

/// [`common_point_with`] under the default configuration.
pub fn common_point<T: Real>(inst: &Lemma1Instance<T>, eps: T) -> Result<SolveResult<T>> {
    common_point_with(inst, eps, &SolverConfig::default())
}

pub fn common_point_with<T: Real>(inst: &Lemma1Instance<T>, eps: T, cfg: &SolverConfig) -> Result<SolveResult<T>> {
    if !(eps > T::zero()) {
        return Err(Error::Precondition(format!("eps must be positive, got {eps}")));
    }
    if cfg.beam == 0 {
        return Err(Error::Precondition("beam must be positive".into()));
    }
    let n = inst.dim();
    let top = cfg.depth_limit;
    let slack = T::lit(cfg.cover_slack);
    let mut cache: HashMap<Vec<u64>, Eval<T>> = HashMap::new();
    let mut frontier = vec![LatticeCell::root(n)];
    let mut best: Option<Eval<T>> = None;
    let mut history = Vec::new();

    for level in 0..=top {
        // Vertices not seen yet, in deterministic order.
        let mut fresh: BTreeMap<Vec<u64>, Vec<T>> = BTreeMap::new();
        for cell in &frontier {
            let m = cell.resolution();
            for y in cell.lattice_vertices() {
                let key = LatticeCell::vertex_key(&y, level, top);
                if !cache.contains_key(&key) {
                    fresh.entry(key).or_insert_with(|| lattice_to_barycentric(&y, m));
                }
            }
        }
        let fresh: Vec<(Vec<u64>, Vec<T>)> = fresh.into_iter().collect();
        let evals: Vec<Result<Eval<T>>> = fresh.par_iter().map(|(_, t)| evaluate(inst, t.clone())).collect();
        for ((key, _), e) in fresh.into_iter().zip(evals) {
            cache.insert(key, e?);
        }

        // Per-cell vertex evaluations, in frontier order.
        let cell_points: Vec<Vec<&Eval<T>>> = frontier
            .iter()
            .map(|cell| {
                cell.lattice_vertices()
                    .iter()
                    .map(|y| &cache[&LatticeCell::vertex_key(y, level, top)])
                    .collect()
            })
            .collect();
        if let Some(e) = cell_points.iter().flatten().find(|e| e.min_dist > slack) {
            return Ok(not_a_cover(e, level, history));
        }
        for e in cell_points.iter().flatten() {
            if best.as_ref().is_none_or(|b| e.phi < b.phi) {
                best = Some((*e).clone());
            }
        }
        let inc = best.as_ref().expect("at least one evaluation per level").phi;

        // Phi is 1-Lipschitz, so on a cell it is at least max_v Phi(v) minus
        // the cell's diameter; the factor 2 absorbs chart distortion.
        let mut scored: Vec<(T, T, usize)> = Vec::with_capacity(frontier.len());
        for (idx, pts) in cell_points.iter().enumerate() {
            let mut spread = T::zero();
            for (a, pa) in pts.iter().enumerate() {
                for pb in &pts[..a] {
                    spread = spread.max(geodesic_distance(&pa.point, &pb.point)?);
                }
            }
            let hi = pts.iter().map(|e| e.phi).fold(T::neg_infinity(), T::max);
            let lo = pts.iter().map(|e| e.phi).fold(T::infinity(), T::min);
            let lb = hi - T::lit(2.0) * spread;
            if !(lb > inc) {
                scored.push((lb, lo, idx));
            }
        }
        scored.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
                .then(a.2.cmp(&b.2))
        });
        scored.truncate(cfg.beam);

        // Centroids of the kept cells catch common points off the dyadic
        // lattice, such as the barycenter.
        let centroids = scored
            .par_iter()
            .map(|&(_, _, i)| evaluate(inst, frontier[i].centroid()))
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        if let Some(e) = centroids.iter().find(|e| e.min_dist > slack) {
            return Ok(not_a_cover(e, level, history));
        }
        for e in centroids {
            if best.as_ref().is_none_or(|b| e.phi < b.phi) {
                best = Some(e);
            }
        }

        let inc = best.clone().expect("at least one evaluation per level");
        history.push(inc.phi);
        if inc.phi <= eps || level == top {
            let status = if inc.phi <= eps { SolveStatus::Ok } else { SolveStatus::Limit };
            return Ok(SolveResult {
                status,
                point: inc.point,
                barycentric: inc.t,
                max_dist: inc.phi,
                depth: level,
                history,
            });
        }
        let mut next: Vec<LatticeCell> = scored.iter().flat_map(|&(_, _, i)| frontier[i].children()).collect();
        next.sort();
        next.dedup();
        frontier = next;
    }
    unreachable!("the loop returns at the depth limit")
}

/// A cell of the subdivision carrying every label.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledCell<T> {
    /// Barycentric coordinates of the cell's vertices.
    pub vertices: Vec<Vec<T>>,
    pub labels: Vec<usize>,
    /// Position in the lexicographic cell order of the subdivision.
    pub index: usize,
}

fn labeled_cells<T: Real>(n: usize, labeling: &dyn Fn(&[T]) -> usize, depth: u32) -> Result<Vec<LabeledCell<T>>> {
    let tri = subdivide::<T>(n, depth);
    let mut labels = Vec::with_capacity(tri.vertices.len());
    for v in &tri.vertices {
        let l = labeling(v);
        if l > n || v[l] <= T::zero() {
            return Err(Error::BoundaryCondition { vertex: v.iter().map(|x| x.to_f64_lossy()).collect(), label: l });
        }
        labels.push(l);
    }
    let mut out = Vec::new();
    for (index, cell) in tri.cells.iter().enumerate() {
        let mut seen = vec![false; n + 1];
        for &v in cell {
            seen[labels[v]] = true;
        }
        if seen.iter().all(|&s| s) {
            out.push(LabeledCell {
                vertices: cell.iter().map(|&v| tri.vertices[v].clone()).collect(),
                labels: cell.iter().map(|&v| labels[v]).collect(),
                index,
            });
        }
    }
    Ok(out)
}

/// First fully-labeled cell of `subdivide(n, depth)` in lexicographic order.
///
/// Labels are coordinate indices `0..=n`; a vertex `t` may only carry a
/// label `i` with `t_i > 0`.
pub fn sperner_fully_labeled<T: Real>(
    n: usize,
    labeling: &dyn Fn(&[T]) -> usize,
    depth: u32,
) -> Result<LabeledCell<T>> {
    labeled_cells(n, labeling, depth)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Precondition("no fully-labeled cell; the labeling is inconsistent".into()))
}

/// Number of fully-labeled cells (odd for every valid labeling).
pub fn count_fully_labeled<T: Real>(n: usize, labeling: &dyn Fn(&[T]) -> usize, depth: u32) -> Result<usize> {
    Ok(labeled_cells(n, labeling, depth)?.len())
}
