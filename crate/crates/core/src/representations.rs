//! Model-space representations of kernels `ker T_{conj(theta) B}` and
//! representations obtained from maximal functions.

use num_traits::{One, Zero};

use crate::blaschke::BlaschkeProduct;
use crate::error::{at, Error, Result};
use crate::hardy::inner_outer;
use crate::kernel::{cascade, KernelRep, MaximalFunctionCert};
use crate::modelspace::{hayashi_of_model_space_seeded, repro_kernels};
use crate::polyalg::Polynomial;
use crate::ratfun::RationalFunction;
use crate::scalar::{real, Cx, Scalar};

fn one_minus_conj<T: Scalar>(lam: Cx<T>) -> Polynomial<T> {
    Polynomial::new(vec![Cx::one(), -lam.conj()])
}

fn need_degree<T: Scalar>(theta: &BlaschkeProduct<T>, need: usize) -> Result<()> {
    if theta.degree() < need {
        return Err(Error::InsufficientDegree { have: theta.degree(), need });
    }
    Ok(())
}

/// `ker T_{conj(theta) B_lam} = (1 - conj(lam) z) k_mu K_{theta_mu}`.
pub fn represent_single<T: Scalar>(theta: &BlaschkeProduct<T>, lam: Cx<T>, mu: Cx<T>) -> Result<KernelRep<T>> {
    need_degree(theta, 2)?;
    let (k, _) = repro_kernels(theta, mu)?;
    Ok(KernelRep {
        multiplier: k.mul_poly(&one_minus_conj(lam))?,
        theta: theta.kernel_inner_factor(mu)?,
        isometric: false,
        normalization: Cx::one(),
    })
}

/// Isometric version with `mu = lam`, normalized by `sqrt(1 - |theta(lam)|^2)`.
pub fn represent_single_isometric<T: Scalar>(theta: &BlaschkeProduct<T>, lam: Cx<T>) -> Result<KernelRep<T>> {
    need_degree(theta, 2)?;
    let (k, _) = repro_kernels(theta, lam)?;
    let s = real((T::one() - theta.eval(lam).norm_sqr()).sqrt().recip());
    Ok(KernelRep {
        multiplier: k.mul_poly(&one_minus_conj(lam))?.scale(s),
        theta: theta.kernel_inner_factor(lam)?,
        isometric: true,
        normalization: s,
    })
}

/// Plain, isometric and Hayashi representations of `ker T_{conj(theta) B}`
/// where `B` has zeros `lams`. The intermediate objects depend on the order
/// of `lams`; the represented subspace does not.
pub fn represent_blaschke<T: Scalar>(
    theta: &BlaschkeProduct<T>,
    lams: &[Cx<T>],
) -> Result<(KernelRep<T>, KernelRep<T>, KernelRep<T>)> {
    represent_blaschke_seeded(theta, lams, 0)
}

/// As [`represent_blaschke`] with the Hayashi constant pinned through probe
/// sequence `seed`.
pub fn represent_blaschke_seeded<T: Scalar>(
    theta: &BlaschkeProduct<T>,
    lams: &[Cx<T>],
    seed: u64,
) -> Result<(KernelRep<T>, KernelRep<T>, KernelRep<T>)> {
    need_degree(theta, lams.len() + 1)?;
    let steps = cascade(theta, lams)?;
    let mut plain = RationalFunction::one();
    let mut norm = T::one();
    for s in &steps {
        plain = plain.mul(&s.factor)?;
        norm = norm * (T::one() - s.value.norm_sqr()).sqrt();
    }
    let inner = steps.last().map(|s| s.inner.clone()).unwrap_or_else(|| theta.clone());
    let iso_scale = real(norm.recip());
    let iso = plain.scale(iso_scale);
    let (u, gamma) = hayashi_of_model_space_seeded(&inner, seed)?;
    let t0 = inner.eval(Cx::zero());
    let hayashi = KernelRep {
        multiplier: iso.mul(&u)?,
        theta: gamma,
        isometric: true,
        normalization: iso_scale * real((T::one() - t0.norm_sqr()).sqrt().recip()),
    };
    Ok((
        KernelRep { multiplier: plain, theta: inner.clone(), isometric: false, normalization: Cx::one() },
        KernelRep { multiplier: iso, theta: inner, isometric: true, normalization: iso_scale },
        hayashi,
    ))
}

/// Given `ker T_G = w K_theta`, represents `ker T_{G alpha}` as `w` times the
/// representation of `ker T_{conj(theta) alpha}`. Isometry is preserved.
pub fn propagate_multiplier<T: Scalar>(rep: &KernelRep<T>, alpha: &BlaschkeProduct<T>) -> Result<KernelRep<T>> {
    if alpha.is_constant() {
        return Ok(rep.clone());
    }
    let (plain, iso, _) = represent_blaschke(&rep.theta, alpha.zeros())?;
    let sub = if rep.isometric { iso } else { plain };
    Ok(KernelRep {
        multiplier: rep.multiplier.mul(&sub.multiplier)?,
        theta: sub.theta,
        isometric: rep.isometric,
        normalization: rep.normalization * sub.normalization,
    })
}

fn factor_certified<T: Scalar>(cert: &MaximalFunctionCert<T>) -> Result<(BlaschkeProduct<T>, RationalFunction<T>)> {
    let io = inner_outer(&cert.f)?;
    let prof = io.outer.classify(T::tolerances().boundary)?;
    if let Some(r) = prof.zeros.on_circle.first() {
        let (re, im) = at(r.value);
        return Err(Error::CarlesonViolation { re, im });
    }
    Ok((io.inner, io.outer))
}

/// `ker T_G = O K_{z I}` from a maximal function `f = I O` whose outer part
/// is invertible on the circle.
pub fn multiplier_from_maximal<T: Scalar>(cert: &MaximalFunctionCert<T>) -> Result<KernelRep<T>> {
    let (inner, outer) = factor_certified(cert)?;
    Ok(KernelRep {
        multiplier: outer,
        theta: BlaschkeProduct::z_pow(1).mul(&inner),
        isometric: false,
        normalization: Cx::one(),
    })
}

/// `ker T_{G B_lam} = O (1 - conj(lam) z) K_I`; `lam = 0` gives
/// `ker T_{G z} = O K_I`.
pub fn multiplier_from_maximal_shifted<T: Scalar>(
    cert: &MaximalFunctionCert<T>,
    lam: Cx<T>,
) -> Result<KernelRep<T>> {
    let (inner, outer) = factor_certified(cert)?;
    if inner.is_constant() {
        return Err(Error::ConstantInnerFactor);
    }
    Ok(KernelRep {
        multiplier: outer.mul_poly(&one_minus_conj(lam))?,
        theta: inner,
        isometric: false,
        normalization: Cx::one(),
    })
}
