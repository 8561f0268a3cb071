//! Scalar abstraction and numerical tolerances.
//!
//! Everything in the crate is generic over a real floating type `T`; complex
//! values are `num_complex::Complex<T>`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};

/// Real floating scalar the engine is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Signed + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerances appropriate for this precision.
    fn tolerances() -> Tolerances<Self>;

    /// Converts an `f64` literal. Infallible for the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl Scalar for f64 {
    fn tolerances() -> Tolerances<f64> {
        Tolerances {
            root_cluster: 1e-8,
            gcd: 1e-6,
            boundary: 1e-8,
            snap: 1e-11,
            check: 1e-9,
            unimodular: 1e-12,
            samples: 2048,
        }
    }
}

impl Scalar for f32 {
    fn tolerances() -> Tolerances<f32> {
        Tolerances {
            root_cluster: 1e-4,
            gcd: 1e-3,
            boundary: 1e-4,
            snap: 1e-5,
            check: 1e-3,
            unimodular: 1e-5,
            samples: 512,
        }
    }
}

/// Complex scalar over `T`.
pub type Cx<T> = Complex<T>;

/// Numerical tolerances threaded through the engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Radius (relative to `max(1, max |root|)`) within which computed roots
    /// are merged into one root of higher multiplicity.
    pub root_cluster: T,
    /// Radius used when matching roots of two polynomials (cancellation,
    /// gcd, partial-fraction clustering).
    pub gcd: T,
    /// Half-width of the band `||z| - 1| < boundary` treated as the circle.
    pub boundary: T,
    /// Blaschke zeros with modulus below this are snapped to the origin.
    pub snap: T,
    /// Pointwise agreement tolerance used by verification checks.
    pub check: T,
    /// Allowed deviation of a unimodular constant from modulus one.
    pub unimodular: T,
    /// Number of uniform circle samples used for quadrature.
    pub samples: usize,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        T::tolerances()
    }
}

/// `n` equispaced points `exp(2 pi i k / n)` on the unit circle.
pub fn circle_points<T: Scalar>(n: usize) -> Vec<Cx<T>> {
    let step = T::TAU() / T::from_usize(n).expect("sample count");
    (0..n)
        .map(|k| Cx::from_polar(T::one(), step * T::from_usize(k).expect("sample index")))
        .collect()
}

pub(crate) fn real<T: Scalar>(re: T) -> Cx<T> {
    Cx::new(re, T::zero())
}
