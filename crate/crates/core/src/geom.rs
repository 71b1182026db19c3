//! Points of `S^n`, flat simplices around the origin, and parametrizations
//! of spherical simplices by the standard simplex.

use serde::{Deserialize, Serialize};

use crate::caps::shortness_witness;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, normalized};
use crate::scalar::{tol, Real};

/// A unit vector in `R^(n+1)`, i.e. a point of `S^n` with `n >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct SpherePoint<T> {
    coords: Vec<T>,
}

impl<T: Real> SpherePoint<T> {
    /// Validates that `coords` has unit norm (within the unit tolerance).
    pub fn new(coords: Vec<T>) -> Result<Self> {
        check_len(coords.len())?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = linalg::norm(&coords);
        if (n - T::one()).abs() > tol::<T>().unit {
            return Err(Error::NotUnit { norm: n.to_f64_lossy() });
        }
        Ok(SpherePoint { coords })
    }

    /// Radially projects a nonzero vector onto the sphere.
    pub fn normalize(v: &[T]) -> Result<Self> {
        check_len(v.len())?;
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let coords = normalized(v).ok_or(Error::NotUnit { norm: 0.0 })?;
        Ok(SpherePoint { coords })
    }

    /// The `i`-th standard basis vector of `R^ambient`.
    pub fn basis(ambient: usize, i: usize) -> Self {
        assert!(ambient >= 2 && i < ambient);
        let mut coords = vec![T::zero(); ambient];
        coords[i] = T::one();
        SpherePoint { coords }
    }

    /// Point on `S^1` at the given angle (radians).
    pub fn on_circle(angle: T) -> Self {
        SpherePoint { coords: vec![angle.cos(), angle.sin()] }
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    /// Sphere dimension `n` (the ambient space is `R^(n+1)`).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn antipode(&self) -> Self {
        SpherePoint { coords: self.coords.iter().map(|&c| -c).collect() }
    }

    pub fn dot(&self, other: &Self) -> T {
        dot(&self.coords, &other.coords)
    }
}

fn check_len(len: usize) -> Result<()> {
    if len < 2 {
        Err(Error::TooFewCoordinates(len))
    } else {
        Ok(())
    }
}

impl<T: Real> TryFrom<Vec<T>> for SpherePoint<T> {
    type Error = Error;

    fn try_from(v: Vec<T>) -> Result<Self> {
        SpherePoint::new(v)
    }
}

impl<T> From<SpherePoint<T>> for Vec<T> {
    fn from(p: SpherePoint<T>) -> Vec<T> {
        p.coords
    }
}

pub(crate) fn check_same_dim<T: Real>(expected: usize, p: &SpherePoint<T>) -> Result<()> {
    if p.ambient_dim() != expected {
        return Err(Error::DimensionMismatch { expected, found: p.ambient_dim() });
    }
    Ok(())
}

/// Great-circle distance in radians, in `[0, pi]`.
pub fn geodesic_distance<T: Real>(x: &SpherePoint<T>, y: &SpherePoint<T>) -> Result<T> {
    check_same_dim(x.ambient_dim(), y)?;
    // Chord form: acos loses half the digits for nearby points.
    let chord = x.coords().iter().zip(y.coords()).map(|(&a, &b)| (a - b) * (a - b)).sum::<T>().sqrt();
    Ok(T::lit(2.0) * (chord / T::lit(2.0)).min(T::one()).asin())
}

pub(crate) fn clamped_acos<T: Real>(c: T) -> T {
    c.max(-T::one()).min(T::one()).acos()
}

/// `m + 1` affinely independent points of `R^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatSimplex<T> {
    vertices: Vec<Vec<T>>,
}

impl<T: Real> FlatSimplex<T> {
    pub fn new(vertices: Vec<Vec<T>>) -> Result<Self> {
        let m = vertices.first().map_or(0, |v| v.len());
        if m == 0 {
            return Err(Error::Empty("simplex vertices"));
        }
        if vertices.len() != m + 1 {
            return Err(Error::WrongCount { expected: format!("{} vertices", m + 1), found: vertices.len() });
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: v.len() });
        }
        let det = augmented_det(&vertices);
        if det.abs() <= tol::<T>().degeneracy {
            return Err(Error::Degenerate { det: det.to_f64_lossy() });
        }
        Ok(FlatSimplex { vertices })
    }

    pub fn from_points(points: &[SpherePoint<T>]) -> Result<Self> {
        Self::new(points.iter().map(|p| p.coords().to_vec()).collect())
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    /// Normalized determinant of the vertices augmented with a row of ones.
    pub fn normalized_det(&self) -> T {
        augmented_det(&self.vertices)
    }
}

/// `det [v_0 .. v_m; 1 .. 1]` divided by the product of the column norms.
pub fn augmented_det<T: Real>(vertices: &[Vec<T>]) -> T {
    let columns: Vec<Vec<T>> = vertices
        .iter()
        .map(|v| {
            let mut c = v.clone();
            c.push(T::one());
            c
        })
        .collect();
    linalg::normalized_column_det(&columns)
}

/// Barycentric coordinates of the origin with respect to `s`: weights
/// `lambda` with `sum lambda_i = 1` and `sum lambda_i v_i = 0`.
pub fn barycentric_origin<T: Real>(s: &FlatSimplex<T>) -> Result<Vec<T>> {
    let m = s.vertices.len() - 1;
    let mut a = vec![vec![T::zero(); m + 1]; m + 1];
    for (j, v) in s.vertices.iter().enumerate() {
        for i in 0..m {
            a[i][j] = v[i];
        }
        a[m][j] = T::one();
    }
    let mut rhs = vec![T::zero(); m + 1];
    rhs[m] = T::one();
    linalg::solve(&a, &rhs)
}

/// True when all barycentric coordinates exceed the interior margin.
pub fn origin_interior<T: Real>(lambda: &[T]) -> bool {
    lambda.iter().all(|&l| l > tol::<T>().interior)
}

/// Affine independence of `n + 2` points of `S^n`.
pub fn simplex_nondegenerate<T: Real>(points: &[SpherePoint<T>]) -> Result<bool> {
    let first = points.first().ok_or(Error::Empty("points"))?;
    let ambient = first.ambient_dim();
    if points.len() != ambient + 1 {
        return Err(Error::WrongCount { expected: format!("{} points", ambient + 1), found: points.len() });
    }
    for p in points {
        check_same_dim(ambient, p)?;
    }
    let verts: Vec<Vec<T>> = points.iter().map(|p| p.coords().to_vec()).collect();
    Ok(augmented_det(&verts).abs() > tol::<T>().degeneracy)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    /// A short spherical simplex spanned by `n + 1` vertices.
    Short,
    /// A closed hemisphere with `n + 1` vertices on its bounding equator.
    Hemisphere,
}

/// Parametrization of a spherical simplex (or a closed hemisphere) by the
/// standard flat `n`-simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexChart<T> {
    kind: ChartKind,
    vertices: Vec<SpherePoint<T>>,
    pole: Option<SpherePoint<T>>,
}

impl<T: Real> SimplexChart<T> {
    /// Chart on the short spherical simplex with the given vertices.
    pub fn short(vertices: Vec<SpherePoint<T>>) -> Result<Self> {
        let ambient = chart_ambient(&vertices)?;
        let refs: Vec<&[T]> = vertices.iter().map(|v| v.coords()).collect();
        let g = linalg::gram(&refs);
        let det = linalg::determinant(&g);
        if det <= tol::<T>().degeneracy {
            return Err(Error::InvalidChart(format!("vertices are linearly dependent (gram det {det})")));
        }
        shortness_witness(&vertices)?;
        debug_assert_eq!(vertices.len(), ambient);
        Ok(SimplexChart { kind: ChartKind::Short, vertices, pole: None })
    }

    /// Chart on the closed hemisphere `{x : <pole, x> >= 0}` whose vertices
    /// lie on the equator and surround the origin there.
    pub fn hemisphere(vertices: Vec<SpherePoint<T>>, pole: SpherePoint<T>) -> Result<Self> {
        let ambient = chart_ambient(&vertices)?;
        check_same_dim(ambient, &pole)?;
        let t = tol::<T>();
        if let Some(v) = vertices.iter().find(|v| v.dot(&pole).abs() > t.unit) {
            return Err(Error::InvalidChart(format!(
                "vertex {:?} is not on the equator of the pole",
                v.coords()
            )));
        }
        let basis = linalg::orthogonal_complement(&[pole.coords()], ambient);
        let local: Vec<Vec<T>> = vertices
            .iter()
            .map(|v| basis.iter().map(|b| dot(b, v.coords())).collect())
            .collect();
        let flat = FlatSimplex::new(local)
            .map_err(|e| Error::InvalidChart(format!("equator vertices: {e}")))?;
        let lambda = barycentric_origin(&flat)?;
        if !origin_interior(&lambda) {
            return Err(Error::InvalidChart(
                "origin is not interior to the equator vertices".into(),
            ));
        }
        Ok(SimplexChart { kind: ChartKind::Hemisphere, vertices, pole: Some(pole) })
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn vertices(&self) -> &[SpherePoint<T>] {
        &self.vertices
    }

    pub fn pole(&self) -> Option<&SpherePoint<T>> {
        self.pole.as_ref()
    }

    /// Sphere dimension `n`; the chart domain is the standard `n`-simplex.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Image of the barycentric point `t` on the sphere.
    ///
    /// Short charts use `normalize(sum t_i d_i)`; hemisphere charts add the
    /// pole weighted by `prod t_i`, which vanishes on the boundary of the
    /// simplex so faces land on the equator.
    pub fn map(&self, t: &[T]) -> Result<SpherePoint<T>> {
        let k = self.vertices.len();
        if t.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: t.len() });
        }
        let st = tol::<T>().solve;
        let sum: T = t.iter().copied().sum();
        if t.iter().any(|&v| v < -st) || (sum - T::one()).abs() > st {
            return Err(Error::Precondition(format!("{t:?} is not in the standard simplex")));
        }
        let refs: Vec<&[T]> = self.vertices.iter().map(|v| v.coords()).collect();
        let mut v = linalg::combine(t, &refs);
        if let Some(pole) = &self.pole {
            let prod = t.iter().fold(T::one(), |acc, &x| acc * x.max(T::zero()));
            linalg::add_scaled(&mut v, prod, pole.coords());
        }
        SpherePoint::normalize(&v)
    }
}

fn chart_ambient<T: Real>(vertices: &[SpherePoint<T>]) -> Result<usize> {
    let first = vertices.first().ok_or(Error::Empty("chart vertices"))?;
    let ambient = first.ambient_dim();
    if vertices.len() != ambient {
        return Err(Error::WrongCount { expected: format!("{ambient} chart vertices"), found: vertices.len() });
    }
    for v in vertices {
        check_same_dim(ambient, v)?;
    }
    Ok(ambient)
}

/// Free-function form of [`SimplexChart::map`].
pub fn chart_map<T: Real>(chart: &SimplexChart<T>, t: &[T]) -> Result<SpherePoint<T>> {
    chart.map(t)
}

/// Vertices of the regular `(n+1)`-simplex inscribed in `S^n`.
pub fn regular_simplex<T: Real>(n: usize) -> Vec<SpherePoint<T>> {
    assert!(n >= 1);
    // Center the standard basis of R^(n+2), then express it in an
    // orthonormal basis of the hyperplane sum(x) = 0.
    let k = n + 2;
    let c = T::one() / T::from_usize(k).unwrap();
    let centered: Vec<Vec<T>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { T::one() - c } else { -c }).collect())
        .collect();
    let ones = vec![T::one(); k];
    let basis = linalg::orthogonal_complement(&[&ones[..]], k);
    centered
        .iter()
        .map(|v| {
            let local: Vec<T> = basis.iter().map(|b| dot(b, v)).collect();
            SpherePoint::normalize(&local).expect("regular simplex vertex is nonzero")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(v: &[f64]) -> SpherePoint<f64> {
        SpherePoint::normalize(v).unwrap()
    }

    #[test]
    fn distance_examples() {
        let e1 = SpherePoint::<f64>::basis(3, 0);
        let e2 = SpherePoint::<f64>::basis(3, 1);
        assert!((geodesic_distance(&e1, &e2).unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(geodesic_distance(&e1, &e1).unwrap(), 0.0);
        assert!((geodesic_distance(&e1, &e1.antipode()).unwrap() - PI).abs() < 1e-15);
        let short = SpherePoint::<f64>::basis(2, 0);
        assert!(matches!(geodesic_distance(&e1, &short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sphere_point_validation() {
        assert!(matches!(SpherePoint::new(vec![1.0]), Err(Error::TooFewCoordinates(1))));
        assert!(matches!(SpherePoint::new(vec![1.0, 1.0]), Err(Error::NotUnit { .. })));
        assert!(SpherePoint::new(vec![0.6, 0.8]).is_ok());
        assert!(SpherePoint::<f64>::normalize(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn regular_simplex_has_uniform_barycentrics() {
        for n in 1..=4 {
            let verts = regular_simplex::<f64>(n);
            let s = FlatSimplex::from_points(&verts).unwrap();
            let lambda = barycentric_origin(&s).unwrap();
            for l in lambda {
                assert!((l - 1.0 / (n as f64 + 2.0)).abs() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn barycentric_of_skewed_tetrahedron_reproduces_origin() {
        let s3 = 3f64.sqrt();
        let verts = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![-1.0 / s3, -1.0 / s3, -1.0 / s3],
        ];
        let s = FlatSimplex::new(verts.clone()).unwrap();
        let lambda = barycentric_origin(&s).unwrap();
        let sum: f64 = lambda.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        let refs: Vec<&[f64]> = verts.iter().map(|v| &v[..]).collect();
        let res = linalg::combine(&lambda, &refs);
        assert!(linalg::norm(&res) < 1e-9);
        assert!(origin_interior(&lambda));
    }

    #[test]
    fn origin_outside_when_vertices_share_a_halfspace() {
        let verts = vec![vec![1.0, 0.1], vec![1.0, 0.5], vec![0.8, -0.6]];
        let lambda = barycentric_origin(&FlatSimplex::new(verts).unwrap()).unwrap();
        assert!(lambda.iter().any(|&l| l <= 0.0));
        assert!(!origin_interior(&lambda));
    }

    #[test]
    fn nondegeneracy_examples() {
        let verts = regular_simplex::<f64>(2);
        assert!(simplex_nondegenerate(&verts).unwrap());
        let e1 = SpherePoint::<f64>::basis(3, 0);
        assert!(!simplex_nondegenerate(&vec![e1.clone(); 4]).unwrap());
        // All four points on the plane z = 0.3 together with... a shared
        // affine plane: pick four points of the circle z = 0.3.
        let r = (1.0f64 - 0.09).sqrt();
        let coplanar: Vec<_> = [0.0, 1.0, 2.5, 4.0]
            .iter()
            .map(|&a: &f64| p(&[r * a.cos(), r * a.sin(), 0.3]))
            .collect();
        assert!(!simplex_nondegenerate(&coplanar).unwrap());
        assert!(simplex_nondegenerate(&verts[..3]).is_err());
    }

    #[test]
    fn hemisphere_chart_examples() {
        let roots: Vec<_> = (0..3)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / 3.0;
                p(&[a.cos(), a.sin(), 0.0])
            })
            .collect();
        let pole = SpherePoint::basis(3, 2);
        let chart = SimplexChart::hemisphere(roots.clone(), pole.clone()).unwrap();
        let third = 1.0 / 3.0;
        let c = chart.map(&[third, third, third]).unwrap();
        assert!(geodesic_distance(&c, &pole).unwrap() < 1e-12);
        for i in 0..3 {
            let mut t = [0.0; 3];
            t[i] = 1.0;
            assert!(geodesic_distance(&chart.map(&t).unwrap(), &roots[i]).unwrap() < 1e-12);
        }
        let mid = chart.map(&[0.5, 0.5, 0.0]).unwrap();
        let expect = p(&[
            (roots[0].coords()[0] + roots[1].coords()[0]) / 2.0,
            (roots[0].coords()[1] + roots[1].coords()[1]) / 2.0,
            0.0,
        ]);
        assert!(geodesic_distance(&mid, &expect).unwrap() < 1e-12);
        assert!(mid.coords()[2].abs() < 1e-15);
    }

    #[test]
    fn hemisphere_chart_rejects_off_equator_vertices() {
        let pole = SpherePoint::basis(3, 2);
        let verts = vec![p(&[1.0, 0.0, 0.1]), p(&[-0.5, 0.8, 0.0]), p(&[-0.5, -0.8, 0.0])];
        assert!(SimplexChart::hemisphere(verts, pole.clone()).is_err());
        // all on one side of the equator's origin
        let verts = vec![p(&[1.0, 0.0, 0.0]), p(&[0.0, 1.0, 0.0]), p(&[1.0, 1.0, 0.0])];
        assert!(SimplexChart::hemisphere(verts, pole).is_err());
    }

    #[test]
    fn short_chart_examples() {
        let verts = vec![p(&[1.0, 0.0, 0.0]), p(&[0.0, 1.0, 0.0]), p(&[0.0, 0.0, 1.0])];
        let chart = SimplexChart::short(verts.clone()).unwrap();
        let m = chart.map(&[0.5, 0.5, 0.0]).unwrap();
        assert!(geodesic_distance(&m, &p(&[1.0, 1.0, 0.0])).unwrap() < 1e-12);
        assert!(chart.map(&[0.5, 0.6, 0.0]).is_err());
        assert!(chart.map(&[1.1, -0.1, 0.0]).is_err());
        let dependent = vec![p(&[1.0, 0.0, 0.0]), p(&[0.0, 1.0, 0.0]), p(&[1.0, 1.0, 0.0])];
        assert!(SimplexChart::short(dependent).is_err());
    }
}
