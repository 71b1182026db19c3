//! Covering `S^n` with caps and short closed sets.
//!
//! `n + 2` caps are the fewest that can cover `S^n`. This crate builds such
//! covers, certifies a family of `n + 2` caps by finite intersection tests,
//! produces uncovered points for smaller families, finds common points of
//! closed covers of a spherical simplex, and checks all of it against exact
//! and sampling oracles.
//!
//! Geometry is generic over [`Real`] (`f32` or `f64`); the circle oracle
//! also runs on exact rationals.

pub mod caps;
pub mod certify;
pub mod error;
pub mod geom;
pub mod linalg;
pub mod lp;
pub mod minnorm;
pub mod oracle;
pub mod scalar;
pub mod solver;
pub mod subdivide;

pub use caps::{
    cap_distance, cap_membership, geodesic_hull, geodesic_hull_of_set, intersection_probe,
    intersection_witness, make_cap, make_shortset, separating_halfspace, shortness_witness,
    slice_to_equator, Cap, IntersectionProbe, SeparatingHalfspace, ShortSet, ShortnessWitness,
};
pub use certify::{
    cover_certificate, facet_caps, shortset_family_check, uncovered_witness, ConditionIii,
    CoverCertificate, ShortSetReport,
};
pub use error::{Error, Result};
pub use geom::{
    barycentric_origin, chart_map, geodesic_distance, origin_interior, regular_simplex,
    simplex_nondegenerate, ChartKind, FlatSimplex, SimplexChart, SpherePoint,
};
pub use num::BigRational;
pub use scalar::{Real, Tolerances};
pub use solver::{
    common_point, common_point_with, count_fully_labeled, sperner_fully_labeled, InstanceSpec,
    LabeledCell, Lemma1Instance, SolveResult, SolveStatus, SolverConfig,
};
pub use subdivide::{subdivide, LatticeCell, Triangulation};

pub type SpherePoint64 = SpherePoint<f64>;
pub type SpherePoint32 = SpherePoint<f32>;
pub type Cap64 = Cap<f64>;
pub type Cap32 = Cap<f32>;
pub type ShortSet64 = ShortSet<f64>;
pub type ShortSet32 = ShortSet<f32>;
pub type CoverCertificate64 = CoverCertificate<f64>;
pub type Lemma1Instance64 = Lemma1Instance<f64>;
pub type ArcSet64 = oracle::ArcSet<f64>;
pub type ExactArcSet = oracle::ArcSet<BigRational>;
