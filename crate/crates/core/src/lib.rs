//! Kernels of Toeplitz operators with rational symbols on the Hardy space of
//! the disk, and their model-space representations.
//!
//! Every type is generic over the real scalar (`f32` or `f64`); the aliases
//! at the bottom fix `f64`.

pub mod blaschke;
pub mod error;
pub mod frostman;
pub mod hardy;
pub mod kernel;
pub mod linalg;
pub mod modelspace;
pub mod oracle;
pub mod polyalg;
pub mod ratfun;
pub mod representations;
pub mod scalar;

pub use blaschke::BlaschkeProduct;
pub use error::{Error, Result};
pub use frostman::{IsometricCheck, Perturbation, ShiftedRep};
pub use hardy::InnerOuter;
pub use kernel::{
    CascadeStep, Kernel, KernelRep, MaximalCascade, MaximalFunctionCert, RationalKernel, RationalSymbol, Symbol,
    UnimodularSymbol,
};
pub use modelspace::{Basis, ModelSpace};
pub use oracle::{NumericalKernel, NumericalSubspace, OracleReport, ToeplitzTruncation};
pub use polyalg::{Polynomial, Root};
pub use ratfun::{PoleZeroProfile, RationalFunction};
pub use scalar::{Cx, Scalar, Tolerances};

pub type Complex64 = Cx<f64>;
pub type Poly64 = Polynomial<f64>;
pub type Rational64 = RationalFunction<f64>;
pub type Blaschke64 = BlaschkeProduct<f64>;
pub type Symbol64 = Symbol<f64>;
pub type KernelRep64 = KernelRep<f64>;
pub type Perturbation64 = Perturbation<f64>;
