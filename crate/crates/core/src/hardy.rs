//! Hardy-space membership for rational functions, inner-outer
//! factorization and the conjugate Smirnov test.
//!
//! Every predicate is a pole/zero location test, which is exact for
//! rational data up to the boundary tolerance.

use num_traits::Zero;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::polyalg::{deflate, Polynomial};
use crate::ratfun::{band_of, Band, RationalFunction};
use crate::scalar::{Cx, Scalar};

/// Certified factorization `f = inner * outer`.
#[derive(Clone, Debug)]
pub struct InnerOuter<T> {
    pub inner: BlaschkeProduct<T>,
    pub outer: RationalFunction<T>,
}

fn bands_of_roots<T: Scalar>(p: &Polynomial<T>) -> Result<Vec<(Cx<T>, Band)>> {
    if p.is_zero() || p.degree() == 0 {
        return Ok(Vec::new());
    }
    let tol = T::tolerances();
    p.roots_flat(tol.root_cluster)?.into_iter().map(|r| Ok((r, band_of(r, tol.boundary)?))).collect()
}

/// No poles in the closed disk (within the boundary band).
pub fn is_in_h2plus<T: Scalar>(f: &RationalFunction<T>) -> Result<bool> {
    Ok(bands_of_roots(f.den())?.iter().all(|(_, b)| *b == Band::Outside))
}

/// All poles strictly inside the disk and `f(inf) = 0`.
pub fn is_in_h2minus<T: Scalar>(f: &RationalFunction<T>) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    if f.degree_at_infinity() >= 0 {
        return Ok(false);
    }
    Ok(bands_of_roots(f.den())?.iter().all(|(_, b)| *b == Band::Inside))
}

/// Outer in the rational sense: in H2+ with no zeros in the open disk.
/// Zeros on the circle are allowed.
pub fn is_outer<T: Scalar>(f: &RationalFunction<T>) -> Result<bool> {
    if f.is_zero() || !is_in_h2plus(f)? {
        return Ok(false);
    }
    Ok(bands_of_roots(f.num())?.iter().all(|(_, b)| *b != Band::Inside))
}

/// `R[q]` has no poles in the open disk.
pub fn in_conjugate_smirnov<T: Scalar>(q: &RationalFunction<T>) -> Result<bool> {
    let r = q.boundary_conjugate();
    Ok(bands_of_roots(r.den())?.iter().all(|(_, b)| *b != Band::Inside))
}

/// Factors `f` into the Blaschke product over its zeros in the disk and an
/// outer remainder, pinned so that `outer(0)` is real and positive.
pub fn inner_outer<T: Scalar>(f: &RationalFunction<T>) -> Result<InnerOuter<T>> {
    if f.is_zero() || !is_in_h2plus(f)? {
        return Err(Error::NotInHardySpace);
    }
    let inside: Vec<Cx<T>> =
        bands_of_roots(f.num())?.into_iter().filter(|(_, b)| *b == Band::Inside).map(|(r, _)| r).collect();
    let shape = BlaschkeProduct::from_parts(Cx::new(T::one(), T::zero()), inside.clone());
    let num = deflate(f.num(), &inside);
    let raw = RationalFunction::new(&num * &shape.denominator(), f.den().clone())?;
    let o0 = raw.eval(Cx::zero());
    let phase = o0 / o0.norm();
    Ok(InnerOuter { inner: shape.with_constant(phase), outer: raw.scale(phase.inv()) })
}

/// Membership bridge: `f` lies in `ker T_g` iff `f` is in H2+ and `g f` is
/// in H2-.
pub fn in_kernel<T: Scalar>(f: &RationalFunction<T>, g: &RationalFunction<T>) -> Result<bool> {
    g.check_no_circle_poles(T::tolerances().boundary)?;
    if !is_in_h2plus(f)? {
        return Ok(false);
    }
    is_in_h2minus(&g.mul(f)?)
}
