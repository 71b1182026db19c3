//! Scalar abstraction shared by every floating-point routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Numerical thresholds used by the geometry, feasibility and solver code.
///
/// The `f64` values are the reference configuration; `f32` gets a coarser
/// set scaled to its precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Allowed deviation of a sphere point's norm from 1.
    pub unit: T,
    /// Threshold on normalized determinants below which a simplex is degenerate.
    pub degeneracy: T,
    /// Residual bound for linear solves.
    pub solve: T,
    /// Minimum barycentric coordinate for the origin to count as interior.
    pub interior: T,
    /// Feasibility residual for cone membership and intersection problems.
    pub feas: T,
    /// Minimum max-min inner product for a point set to count as short.
    pub short_margin: T,
    /// Distance below which a point is considered to be on a cap.
    pub dist: T,
    /// Pivot threshold inside the simplex method and the eliminations.
    pub pivot: T,
    /// Magnitude of the random nudge applied to singular witness systems.
    pub perturb: T,
}

/// Floating-point type usable by the geometry routines: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    fn tolerances() -> Tolerances<Self>;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn pi() -> Self;
}

impl Real for f64 {
    fn tolerances() -> Tolerances<f64> {
        Tolerances {
            unit: 1e-9,
            degeneracy: 1e-9,
            solve: 1e-9,
            interior: 1e-9,
            feas: 1e-9,
            short_margin: 1e-7,
            dist: 1e-6,
            pivot: 1e-9,
            perturb: 1e-9,
        }
    }

    fn pi() -> f64 {
        std::f64::consts::PI
    }
}

impl Real for f32 {
    fn tolerances() -> Tolerances<f32> {
        Tolerances {
            unit: 1e-5,
            degeneracy: 1e-5,
            solve: 1e-4,
            interior: 1e-5,
            feas: 1e-4,
            short_margin: 1e-3,
            dist: 1e-2,
            pivot: 1e-6,
            perturb: 1e-4,
        }
    }

    fn pi() -> f32 {
        std::f32::consts::PI
    }
}

pub(crate) fn tol<T: Real>() -> Tolerances<T> {
    T::tolerances()
}
