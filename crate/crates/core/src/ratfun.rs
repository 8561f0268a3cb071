//! Rational functions around the unit circle: normalization, pole/zero
//! classification, the Riesz projection, boundary conjugation and
//! quadrature inner products.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{at, Error, Result};
use crate::linalg::{solve, CMatrix};
use crate::polyalg::{cluster_roots, common_roots, deflate, Polynomial, Root};
use crate::scalar::{circle_points, Cx, Scalar};

/// `num / den` with `den` monic and the pair reduced (no common roots
/// within the gcd tolerance).
#[derive(Clone, PartialEq)]
pub struct RationalFunction<T> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

impl<T: fmt::Debug> fmt::Debug for RationalFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

/// Roots of a polynomial sorted into the three bands around the circle.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Bands<T> {
    pub inside: Vec<Root<T>>,
    pub on_circle: Vec<Root<T>>,
    pub outside: Vec<Root<T>>,
}

impl<T: Scalar> Bands<T> {
    fn count(v: &[Root<T>]) -> usize {
        v.iter().map(|r| r.multiplicity).sum()
    }
    pub fn n_inside(&self) -> usize {
        Self::count(&self.inside)
    }
    pub fn n_on_circle(&self) -> usize {
        Self::count(&self.on_circle)
    }
    pub fn n_outside(&self) -> usize {
        Self::count(&self.outside)
    }
}

/// Location of zeros and poles relative to the unit circle.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PoleZeroProfile<T> {
    pub zeros: Bands<T>,
    pub poles: Bands<T>,
}

/// Where a point sits relative to the circle band `||z| - 1| < tol`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Band {
    Inside,
    OnCircle,
    Outside,
}

/// Band of a single point; errors when the point lies within `tol/10` of a
/// band edge.
pub fn band_of<T: Scalar>(z: Cx<T>, tol: T) -> Result<Band> {
    let d = z.norm() - T::one();
    if (d.abs() - tol).abs() < tol / T::lit(10.0) {
        let (re, im) = at(z);
        return Err(Error::BoundaryAmbiguous { re, im, modulus: z.norm().to_f64().unwrap_or(f64::NAN) });
    }
    Ok(if d.abs() < tol {
        Band::OnCircle
    } else if d < T::zero() {
        Band::Inside
    } else {
        Band::Outside
    })
}

fn band_roots<T: Scalar>(p: &Polynomial<T>, tol_boundary: T) -> Result<Bands<T>> {
    let mut flat: [Vec<Cx<T>>; 3] = Default::default();
    if p.is_zero() || p.degree() == 0 {
        return Ok(Bands { inside: vec![], on_circle: vec![], outside: vec![] });
    }
    for r in p.roots_flat(T::tolerances().root_cluster)? {
        let slot = match band_of(r, tol_boundary)? {
            Band::Inside => 0,
            Band::OnCircle => 1,
            Band::Outside => 2,
        };
        flat[slot].push(r);
    }
    let tol = T::tolerances().root_cluster;
    Ok(Bands {
        inside: cluster_roots(&flat[0], tol),
        on_circle: cluster_roots(&flat[1], tol),
        outside: cluster_roots(&flat[2], tol),
    })
}

fn split_roots<T: Scalar>(p: &Polynomial<T>, tol_boundary: T) -> Result<[Vec<Cx<T>>; 3]> {
    let mut out: [Vec<Cx<T>>; 3] = Default::default();
    if p.degree() == 0 {
        return Ok(out);
    }
    for r in p.roots_flat(T::tolerances().root_cluster)? {
        let slot = match band_of(r, tol_boundary)? {
            Band::Inside => 0,
            Band::OnCircle => 1,
            Band::Outside => 2,
        };
        out[slot].push(r);
    }
    Ok(out)
}

/// `prod (1 - z / r)` over the given (nonzero) roots.
fn unit_constant_product<T: Scalar>(roots: &[Cx<T>]) -> Polynomial<T> {
    roots.iter().fold(Polynomial::one(), |acc, &r| {
        &acc * &Polynomial::new(vec![Cx::one(), -r.inv()])
    })
}

/// Power-series coefficients `0..n` of `a / e` where `e(0) != 0`.
pub(crate) fn series_div<T: Scalar>(a: &Polynomial<T>, e: &Polynomial<T>, n: usize) -> Vec<Cx<T>> {
    let ac = a.coeffs();
    let ec = e.coeffs();
    let e0 = ec[0].inv();
    let mut c: Vec<Cx<T>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = ac.get(k).copied().unwrap_or_else(Cx::zero);
        for j in 1..ec.len().min(k + 1) {
            s = s - ec[j] * c[k - j];
        }
        c.push(s * e0);
    }
    c
}

/// Split of `f` into its nonnegative-frequency and negative-frequency parts.
#[derive(Clone, Debug)]
pub struct Split<T> {
    /// Polynomial part of `f`.
    pub poly: Polynomial<T>,
    /// `C / E` with `E(0) = 1`, all roots of `E` outside the closed disk.
    pub outer_num: Polynomial<T>,
    pub outer_den: Polynomial<T>,
    /// `A / D` with `D` monic, all roots inside the disk, `deg A < deg D`.
    pub inner_num: Polynomial<T>,
    pub inner_den: Polynomial<T>,
}

impl<T: Scalar> RationalFunction<T> {
    /// Builds `num / den`, cancelling common roots and making `den` monic.
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let common = common_roots(&num, &den, T::tolerances().gcd)?;
        let (n, d) = if common.is_empty() { (num, den) } else { (deflate(&num, &common), deflate(&den, &common)) };
        Ok(Self::normalized(n, d))
    }

    /// Builds `num / den` known to be coprime; only normalizes `den`.
    pub(crate) fn normalized(num: Polynomial<T>, den: Polynomial<T>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let s = den.leading().inv();
        Self { num: num.scale(s), den: den.scale(s) }
    }

    pub fn zero() -> Self {
        Self { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Self::constant(Cx::one())
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self { num: Polynomial::constant(c), den: Polynomial::one() }
    }

    pub fn from_poly(p: Polynomial<T>) -> Self {
        Self { num: p, den: Polynomial::one() }
    }

    /// `z^k` for any integer `k`.
    pub fn z_pow(k: i32) -> Self {
        if k >= 0 {
            Self::from_poly(Polynomial::monomial(Cx::one(), k as usize))
        } else {
            Self { num: Polynomial::one(), den: Polynomial::monomial(Cx::one(), (-k) as usize) }
        }
    }

    pub fn num(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the function is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    /// `deg num - deg den`: order of growth at infinity.
    pub fn degree_at_infinity(&self) -> i64 {
        self.num.degree() as i64 - self.den.degree() as i64
    }

    pub fn eval(&self, z: Cx<T>) -> Cx<T> {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self { num: self.num.scale(s), den: self.den.clone() }
    }

    /// Multiplies by `z^k`, cancelling against a root of `den` at 0.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let (mut num, mut den) = (self.num.clone(), self.den.clone());
        if k > 0 {
            let drop = den.valuation().min(k as usize);
            den = Polynomial::new(den.coeffs()[drop..].to_vec());
            num = num.shift(k as usize - drop);
        } else {
            let k = (-k) as usize;
            let drop = num.valuation().min(k);
            num = Polynomial::new(num.coeffs()[drop..].to_vec());
            den = den.shift(k - drop);
        }
        Self::normalized(num, den)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero());
        }
        let tol = T::tolerances().gcd;
        let c1 = common_roots(&self.num, &rhs.den, tol)?;
        let c2 = common_roots(&rhs.num, &self.den, tol)?;
        let n1 = deflate(&self.num, &c1);
        let d2 = deflate(&rhs.den, &c1);
        let n2 = deflate(&rhs.num, &c2);
        let d1 = deflate(&self.den, &c2);
        Ok(Self::normalized(&n1 * &n2, &d1 * &d2))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.mul(&rhs.inv()?)
    }

    pub fn mul_poly(&self, p: &Polynomial<T>) -> Result<Self> {
        self.mul(&Self::from_poly(p.clone()))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        let common = common_roots(&self.den, &rhs.den, T::tolerances().gcd)?;
        let a = deflate(&self.den, &common);
        let b = deflate(&rhs.den, &common);
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        let den = &(&a * &b) * &Polynomial::from_roots(Cx::one(), &common);
        Self::new(num, den)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(-Cx::one()))
    }

    /// Integer power; negative powers invert.
    pub fn powi(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut num = Polynomial::one();
        let mut den = Polynomial::one();
        for _ in 0..k.unsigned_abs() {
            num = &num * &base.num;
            den = &den * &base.den;
        }
        Ok(Self::normalized(num, den))
    }

    /// Pole/zero locations sorted into inside / on-circle / outside bands.
    pub fn classify(&self, tol_boundary: T) -> Result<PoleZeroProfile<T>> {
        Ok(PoleZeroProfile { zeros: band_roots(&self.num, tol_boundary)?, poles: band_roots(&self.den, tol_boundary)? })
    }

    /// `R[f](z) = conj(f(1 / conj z))`; equals `conj f` on the circle.
    pub fn boundary_conjugate(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let k = self.den.degree() as i64 - self.num.degree() as i64;
        let mut num = self.num.reflect();
        let mut den = self.den.reflect();
        if k > 0 {
            num = num.shift(k as usize);
        } else if k < 0 {
            den = den.shift((-k) as usize);
        }
        Self::normalized(num, den)
    }

    /// Errors with `PoleOnCircle` when a pole lies in the circle band.
    pub fn check_no_circle_poles(&self, tol_boundary: T) -> Result<()> {
        let [_, on, _] = split_roots(&self.den, tol_boundary)?;
        match on.first() {
            Some(&r) => {
                let (re, im) = at(r);
                Err(Error::PoleOnCircle { re, im })
            }
            None => Ok(()),
        }
    }

    /// Splits `f = poly + C/E + A/D` with the roots of `E` outside and the
    /// roots of `D` inside the disk.
    pub fn split(&self, tol_boundary: T) -> Result<Split<T>> {
        let [inside, on, outside] = split_roots(&self.den, tol_boundary)?;
        if let Some(&r) = on.first() {
            let (re, im) = at(r);
            return Err(Error::PoleOnCircle { re, im });
        }
        let (poly, rem) = self.num.divrem(&self.den)?;
        let d_in = Polynomial::from_roots(Cx::one(), &inside);
        let e_out = unit_constant_product(&outside);
        // den = kappa * d_in * e_out
        let kappa = outside.iter().fold(Cx::<T>::one(), |a, &r| a * (-r));
        let (m, k) = (inside.len(), outside.len());
        if m == 0 || rem.is_zero() {
            return Ok(Split {
                poly,
                outer_num: rem.scale(kappa.inv()),
                outer_den: e_out,
                inner_num: Polynomial::zero(),
                inner_den: Polynomial::one(),
            });
        }
        if k == 0 {
            return Ok(Split { poly, outer_num: Polynomial::zero(), outer_den: Polynomial::one(), inner_num: rem, inner_den: d_in });
        }
        // rem / kappa = A * e_out + C * d_in, deg A < m, deg C < k
        let n = m + k;
        let rhs: Vec<Cx<T>> = (0..n).map(|j| rem.coeffs().get(j).copied().unwrap_or_else(Cx::zero) / kappa).collect();
        let mat = CMatrix::from_fn(n, n, |row, col| {
            let (poly, shift) = if col < m { (&e_out, col) } else { (&d_in, col - m) };
            if row >= shift {
                poly.coeffs().get(row - shift).copied().unwrap_or_else(Cx::zero)
            } else {
                Cx::zero()
            }
        });
        let sol = solve(&mat, &rhs)?;
        let a = Polynomial::new(sol[..m].to_vec());
        let c = Polynomial::new(sol[m..].to_vec());
        Ok(Split { poly, outer_num: c, outer_den: e_out, inner_num: a, inner_den: d_in })
    }

    /// Riesz projection `P+`: the polynomial part plus the partial fractions
    /// with poles outside the disk.
    pub fn project_plus(&self) -> Result<Self> {
        let s = self.split(T::tolerances().boundary)?;
        let outer = Self::normalized(s.outer_num, s.outer_den);
        let num = &(&s.poly * outer.den()) + outer.num();
        Ok(Self::normalized(num, outer.den.clone()))
    }

    /// `f - P+ f`: the partial fractions with poles inside the disk.
    pub fn project_minus(&self) -> Result<Self> {
        let s = self.split(T::tolerances().boundary)?;
        Ok(Self::normalized(s.inner_num, s.inner_den))
    }

    /// Trapezoidal approximation of `(1/2pi) int f conj(g) dt`.
    pub fn l2_inner(&self, g: &Self, n_samples: usize) -> Result<Cx<T>> {
        let tol = T::tolerances().boundary;
        self.check_no_circle_poles(tol)?;
        g.check_no_circle_poles(tol)?;
        Ok(l2_inner_unchecked(self, g, n_samples))
    }

    pub fn norm_l2(&self, n_samples: usize) -> Result<T> {
        Ok(self.l2_inner(self, n_samples)?.re.max(T::zero()).sqrt())
    }

    /// Maximum of `|f|` over `n` equispaced circle points.
    pub fn sup_on_circle(&self, n: usize) -> T {
        circle_points::<T>(n).into_iter().fold(T::zero(), |a, z| a.max(self.eval(z).norm()))
    }

    /// Maximum of `|f - g|` over `n` equispaced circle points.
    pub fn max_diff_on_circle(&self, g: &Self, n: usize) -> T {
        circle_points::<T>(n).into_iter().fold(T::zero(), |a, z| a.max((self.eval(z) - g.eval(z)).norm()))
    }
}

pub(crate) fn l2_inner_unchecked<T: Scalar>(f: &RationalFunction<T>, g: &RationalFunction<T>, n: usize) -> Cx<T> {
    let pts = circle_points::<T>(n);
    let sum = pts.iter().fold(Cx::zero(), |a, &z| a + f.eval(z) * g.eval(z).conj());
    sum / T::from_usize(n).unwrap()
}
