//! Model spaces `K_theta` for finite Blaschke products.

use num_traits::{One, Zero};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::hardy::in_kernel;
use crate::polyalg::Polynomial;
use crate::ratfun::RationalFunction;
use crate::scalar::{circle_points, Cx, Scalar};

/// Maximum number of sample doublings in [`Basis::gram`].
pub const GRAM_REFINEMENTS: usize = 8;

/// `K_theta = H2 minus theta H2`, with `deg theta >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpace<T> {
    theta: BlaschkeProduct<T>,
}

impl<T: Scalar> ModelSpace<T> {
    pub fn new(theta: BlaschkeProduct<T>) -> Result<Self> {
        if theta.is_constant() {
            return Err(Error::InsufficientDegree { have: 0, need: 1 });
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> &BlaschkeProduct<T> {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.degree()
    }

    /// Membership of `f` via the kernel bridge for the symbol `conj(theta)`.
    pub fn contains(&self, f: &RationalFunction<T>) -> Result<bool> {
        in_kernel(f, &self.theta.conj_rational())
    }
}

/// Ordered list of functions spanning a model space or a kernel.
#[derive(Clone, Debug)]
pub struct Basis<T> {
    pub elements: Vec<RationalFunction<T>>,
    pub orthonormal: bool,
}

impl<T: Scalar> Basis<T> {
    /// Gram matrix `G[i][j] = <e_j, e_i>` by trapezoidal quadrature with at
    /// least `n_samples` points. The rule converges like `r^N` for poles at
    /// radius `1 / r`, so the sample count doubles until two successive
    /// matrices agree.
    pub fn gram(&self, n_samples: usize) -> Result<Vec<Vec<Cx<T>>>> {
        let mut n = n_samples.max(8);
        let mut g = self.gram_fixed(n);
        for _ in 0..GRAM_REFINEMENTS {
            let next = self.gram_fixed(2 * n);
            let scale = next.iter().flatten().fold(T::one(), |a, v| a.max(v.norm()));
            let diff = g.iter().flatten().zip(next.iter().flatten()).fold(T::zero(), |a, (x, y)| a.max((*x - *y).norm()));
            g = next;
            n *= 2;
            if diff <= T::lit(1e-13) * scale {
                break;
            }
        }
        Ok(g)
    }

    fn gram_fixed(&self, n_samples: usize) -> Vec<Vec<Cx<T>>> {
        let pts = circle_points::<T>(n_samples);
        let vals: Vec<Vec<Cx<T>>> = self.elements.iter().map(|e| pts.iter().map(|&z| e.eval(z)).collect()).collect();
        let inv = T::from_usize(n_samples).expect("sample count").recip();
        let n = vals.len();
        let mut g = vec![vec![Cx::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let acc = vals[j].iter().zip(&vals[i]).fold(Cx::zero(), |a, (x, y)| a + *x * y.conj());
                g[i][j] = acc * inv;
            }
        }
        g
    }

    /// Largest entrywise deviation of the Gram matrix from the identity.
    pub fn gram_defect(&self, n_samples: usize) -> Result<T> {
        let g = self.gram(n_samples)?;
        let mut worst = T::zero();
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let target = if i == j { Cx::<T>::one() } else { Cx::zero() };
                worst = worst.max((*v - target).norm());
            }
        }
        Ok(worst)
    }

    /// Multiplies every element by `w`.
    pub fn times(&self, w: &RationalFunction<T>, orthonormal: bool) -> Result<Self> {
        Ok(Self { elements: self.elements.iter().map(|e| w.mul(e)).collect::<Result<_>>()?, orthonormal })
    }
}

/// Reproducing kernel `k_lam = (1 - conj(theta(lam)) theta) / (1 - conj(lam) z)`
/// and its conjugate partner `(theta - theta(lam)) / (z - lam)`.
pub fn repro_kernels<T: Scalar>(
    theta: &BlaschkeProduct<T>,
    lam: Cx<T>,
) -> Result<(RationalFunction<T>, RationalFunction<T>)> {
    if theta.is_constant() {
        return Err(Error::InsufficientDegree { have: 0, need: 1 });
    }
    let n = theta.numerator();
    let d = theta.denominator();
    let c = theta.eval(lam);
    let k = if c.is_zero() {
        RationalFunction::normalized(Polynomial::one(), Polynomial::new(vec![Cx::one(), -lam.conj()]))
    } else {
        let (pk, _) = (&d - &n.scale(c.conj())).div_one_minus(lam.conj());
        RationalFunction::normalized(pk, d.clone())
    };
    let (pt, _) = (&n - &d.scale(c)).div_linear(lam);
    Ok((k, RationalFunction::normalized(pt, d)))
}

/// Takenaka–Malmquist orthonormal basis of `K_theta` in stored-zero order.
pub fn tm_basis<T: Scalar>(theta: &BlaschkeProduct<T>) -> Basis<T> {
    let mut elements = Vec::with_capacity(theta.degree());
    let mut num = Polynomial::one();
    let mut den = Polynomial::one();
    for &a in theta.zeros() {
        den = &den * &Polynomial::new(vec![Cx::one(), -a.conj()]);
        let s = (T::one() - a.norm_sqr()).sqrt();
        elements.push(RationalFunction::normalized(num.scale(Cx::new(s, T::zero())), den.clone()));
        num = &num * &Polynomial::linear(a);
    }
    Basis { elements, orthonormal: true }
}

/// The conjugation `C f = theta conj(z f)` on `K_theta`.
pub fn conjugation<T: Scalar>(theta: &BlaschkeProduct<T>, f: &RationalFunction<T>) -> Result<RationalFunction<T>> {
    if !ModelSpace::new(theta.clone())?.contains(f)? {
        return Err(Error::NotInModelSpace);
    }
    conjugation_unchecked(theta, f)
}

pub(crate) fn conjugation_unchecked<T: Scalar>(
    theta: &BlaschkeProduct<T>,
    f: &RationalFunction<T>,
) -> Result<RationalFunction<T>> {
    theta.to_rational().mul(&f.boundary_conjugate().shift(-1))
}

/// Crofoot multiplier `sqrt(1 - |p|^2) / (1 - p theta)` and the shift
/// `theta_p`.
pub fn crofoot<T: Scalar>(
    theta: &BlaschkeProduct<T>,
    p: Cx<T>,
) -> Result<(RationalFunction<T>, BlaschkeProduct<T>)> {
    if theta.is_constant() {
        return Err(Error::InsufficientDegree { have: 0, need: 1 });
    }
    if p.is_zero() {
        return Ok((RationalFunction::one(), theta.clone()));
    }
    let shifted = theta.frostman_shift(p)?;
    let d = theta.denominator();
    let s = (T::one() - p.norm_sqr()).sqrt();
    let m = RationalFunction::normalized(d.scale(Cx::new(s, T::zero())), &d - &theta.numerator().scale(p));
    Ok((m, shifted))
}

/// Hayashi representation `K_theta = u K_gamma` with `u = k_0 / ||k_0||`
/// and `gamma = z (tilde k_0 / k_0)`.
pub fn hayashi_of_model_space<T: Scalar>(
    theta: &BlaschkeProduct<T>,
) -> Result<(RationalFunction<T>, BlaschkeProduct<T>)> {
    hayashi_of_model_space_seeded(theta, 0)
}

/// As [`hayashi_of_model_space`] with the constant of `gamma` pinned through
/// probe sequence `seed`.
pub fn hayashi_of_model_space_seeded<T: Scalar>(
    theta: &BlaschkeProduct<T>,
    seed: u64,
) -> Result<(RationalFunction<T>, BlaschkeProduct<T>)> {
    let t0 = theta.eval(Cx::zero());
    if t0.norm() > T::one() - T::lit(1e-10) {
        return Err(Error::DegenerateShift { modulus: t0.norm().to_f64().unwrap_or(f64::NAN) });
    }
    let (k0, _) = repro_kernels(theta, Cx::zero())?;
    let u = k0.scale(Cx::new((T::one() - t0.norm_sqr()).sqrt().recip(), T::zero()));
    let gamma = BlaschkeProduct::z_pow(1).mul(&theta.kernel_inner_factor_seeded(Cx::zero(), seed)?);
    Ok((u, gamma))
}

/// Normalized reproducing kernel at 0 assembled from an orthonormal basis:
/// `sum conj(e_j(0)) e_j / sqrt(sum |e_j(0)|^2)`. Independent of the closed
/// form used by [`hayashi_of_model_space`].
pub fn normalized_kernel_at_zero<T: Scalar>(basis: &Basis<T>) -> Result<RationalFunction<T>> {
    let mut acc = RationalFunction::zero();
    let mut norm2 = T::zero();
    for e in &basis.elements {
        let v = e.eval(Cx::zero());
        norm2 = norm2 + v.norm_sqr();
        acc = acc.add(&e.scale(v.conj()))?;
    }
    if norm2.is_zero() {
        return Err(Error::DegenerateShift { modulus: 1.0 });
    }
    Ok(acc.scale(Cx::new(norm2.sqrt().recip(), T::zero())))
}
