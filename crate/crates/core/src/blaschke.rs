//! Finite Blaschke products stored as a unimodular constant and a zero
//! multiset in the open disk.

use num_traits::{One, Zero};

use crate::error::{at, Error, Result};
use crate::polyalg::{cluster_roots, expand, match_roots, Polynomial};
use crate::ratfun::RationalFunction;
use crate::scalar::{circle_points, Cx, Scalar};

/// `constant * prod (z - a) / (1 - conj(a) z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct<T> {
    constant: Cx<T>,
    zeros: Vec<Cx<T>>,
}

/// Deterministic probe points for constant pinning: 0, 0.5, then a seeded
/// pseudo-random sequence in the disk of radius 0.9.
pub(crate) struct Probes {
    state: u64,
    k: usize,
}

impl Probes {
    pub(crate) fn new(seed: u64) -> Self {
        Self { state: seed ^ 0x9e37_79b9_7f4a_7c15, k: 0 }
    }

    fn next_unit(&mut self) -> f64 {
        // splitmix64
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    pub(crate) fn next<T: Scalar>(&mut self) -> Cx<T> {
        self.k += 1;
        match self.k {
            1 => Cx::zero(),
            2 => Cx::new(T::lit(0.5), T::zero()),
            _ => {
                let r = 0.9 * self.next_unit().sqrt();
                let t = std::f64::consts::TAU * self.next_unit();
                Cx::from_polar(T::lit(r), T::lit(t))
            }
        }
    }
}

/// Finds a probe point at distance at least 0.05 from all `avoid` points.
pub(crate) fn probe_avoiding<T: Scalar>(avoid: &[Cx<T>], seed: u64) -> Cx<T> {
    let mut probes = Probes::new(seed);
    let sep = T::lit(0.05);
    loop {
        let z = probes.next::<T>();
        if avoid.iter().all(|a| (*a - z).norm() >= sep) {
            return z;
        }
    }
}

fn snap<T: Scalar>(a: Cx<T>) -> Cx<T> {
    if a.norm() < T::tolerances().snap {
        Cx::zero()
    } else {
        a
    }
}

fn unit<T: Scalar>(c: Cx<T>) -> Cx<T> {
    c / c.norm()
}

impl<T: Scalar> BlaschkeProduct<T> {
    /// Checked constructor: `|constant| = 1` and every zero strictly inside
    /// the boundary band.
    pub fn new(constant: Cx<T>, zeros: Vec<Cx<T>>) -> Result<Self> {
        let tol = T::tolerances();
        if (constant.norm() - T::one()).abs() > tol.unimodular.max(T::epsilon() * T::lit(64.0)) {
            return Err(Error::NotInner { reason: format!("constant has modulus {}", constant.norm()) });
        }
        for &a in &zeros {
            if !(a.norm() < T::one() - tol.boundary) {
                let (re, im) = at(a);
                return Err(Error::InvalidInput(format!("Blaschke zero {re}{im:+}i is not inside the disk")));
            }
        }
        Ok(Self::from_parts(constant, zeros))
    }

    pub(crate) fn from_parts(constant: Cx<T>, zeros: Vec<Cx<T>>) -> Self {
        Self { constant: unit(constant), zeros: zeros.into_iter().map(snap).collect() }
    }

    /// The constant inner function 1.
    pub fn one() -> Self {
        Self { constant: Cx::<T>::one(), zeros: Vec::new() }
    }

    /// Unimodular constant `c`.
    pub fn constant_fn(c: Cx<T>) -> Result<Self> {
        Self::new(c, Vec::new())
    }

    /// The Blaschke factor `B_lam = (z - lam) / (1 - conj(lam) z)`.
    pub fn factor(lam: Cx<T>) -> Result<Self> {
        Self::new(Cx::<T>::one(), vec![lam])
    }

    /// Product with the given zeros and constant 1.
    pub fn from_zeros(zeros: &[Cx<T>]) -> Result<Self> {
        Self::new(Cx::<T>::one(), zeros.to_vec())
    }

    /// `z^k`.
    pub fn z_pow(k: usize) -> Self {
        Self { constant: Cx::<T>::one(), zeros: vec![Cx::zero(); k] }
    }

    /// Product whose zeros are the reflections `1 / conj(p)` of points
    /// outside the closed disk.
    pub fn from_reflected(points: &[Cx<T>]) -> Result<Self> {
        Self::from_zeros(&points.iter().map(|p| p.inv().conj()).collect::<Vec<_>>())
    }

    pub fn constant(&self) -> Cx<T> {
        self.constant
    }

    pub fn zeros(&self) -> &[Cx<T>] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_constant(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Returns a copy with another unimodular constant.
    pub fn with_constant(&self, c: Cx<T>) -> Self {
        Self { constant: unit(c), zeros: self.zeros.clone() }
    }

    pub fn eval(&self, z: Cx<T>) -> Cx<T> {
        self.zeros.iter().fold(self.constant, |acc, &a| acc * (z - a) / (Cx::<T>::one() - a.conj() * z))
    }

    /// `constant * prod (z - a)`.
    pub fn numerator(&self) -> Polynomial<T> {
        Polynomial::from_roots(self.constant, &self.zeros)
    }

    /// `prod (1 - conj(a) z)`, with constant term 1.
    pub fn denominator(&self) -> Polynomial<T> {
        self.zeros.iter().filter(|a| !a.is_zero()).fold(Polynomial::one(), |acc, &a| {
            &acc * &Polynomial::new(vec![Cx::<T>::one(), -a.conj()])
        })
    }

    pub fn to_rational(&self) -> RationalFunction<T> {
        RationalFunction::normalized(self.numerator(), self.denominator())
    }

    /// `R[theta] = 1 / theta` as a rational function.
    pub fn conj_rational(&self) -> RationalFunction<T> {
        RationalFunction::normalized(self.denominator(), self.numerator())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&rhs.zeros);
        Self { constant: unit(self.constant * rhs.constant), zeros }
    }

    /// Quotient `self / alpha` when `alpha` divides `self`; the constant of
    /// the result is `constant(self) / constant(alpha)`.
    pub fn div_exact(&self, alpha: &Self, tol: T) -> Result<Self> {
        let rest = remove_matched(&self.zeros, &alpha.zeros, tol).ok_or_else(|| Error::NotDividing {
            reason: "zero multiset does not embed".into(),
        })?;
        Ok(Self { constant: unit(self.constant / alpha.constant), zeros: rest })
    }

    /// Removes one zero nearest to `lam` (within `tol`), keeping the constant.
    pub fn remove_zero(&self, lam: Cx<T>, tol: T) -> Option<Self> {
        let rest = remove_matched(&self.zeros, &[lam], tol)?;
        Some(Self { constant: self.constant, zeros: rest })
    }

    /// Maximum of `||B(z)| - 1|` over `n` circle samples.
    pub fn unimodularity_defect(&self, n: usize) -> T {
        circle_points::<T>(n).into_iter().fold(T::zero(), |a, z| a.max((self.eval(z).norm() - T::one()).abs()))
    }

    /// Certifies a rational function as inner and converts it: poles outside
    /// the closed disk, unimodular on the circle within `tol`.
    pub fn from_rational(f: &RationalFunction<T>, tol: T) -> Result<Self> {
        let tb = T::tolerances().boundary;
        if f.is_zero() {
            return Err(Error::NotInner { reason: "zero function".into() });
        }
        let prof = f.classify(tb)?;
        if prof.poles.n_inside() + prof.poles.n_on_circle() > 0 {
            return Err(Error::NotInner { reason: "pole in the closed disk".into() });
        }
        if prof.zeros.n_on_circle() > 0 {
            return Err(Error::NotInner { reason: "zero on the circle".into() });
        }
        let defect = circle_points::<T>(T::tolerances().samples)
            .into_iter()
            .fold(T::zero(), |a, z| a.max((f.eval(z).norm() - T::one()).abs()));
        if defect > tol {
            return Err(Error::NotInner { reason: format!("|f| deviates from 1 by {defect} on the circle") });
        }
        let zeros = expand(&prof.zeros.inside);
        let shape = Self::from_parts(Cx::<T>::one(), zeros);
        let z0 = probe_avoiding(shape.zeros(), 0);
        let c = f.eval(z0) / shape.eval(z0);
        Ok(shape.with_constant(c))
    }

    /// Frostman shift `(theta - conj p) / (1 - p theta)`.
    pub fn frostman_shift(&self, p: Cx<T>) -> Result<Self> {
        if p.is_zero() {
            return Ok(self.clone());
        }
        let tol = T::tolerances();
        if !(p.norm() < T::one() - tol.boundary) {
            return Err(Error::DegenerateShift { modulus: p.norm().to_f64().unwrap_or(f64::NAN) });
        }
        if self.is_constant() {
            let c = (self.constant - p.conj()) / (Cx::<T>::one() - p * self.constant);
            return Ok(Self::from_parts(c, Vec::new()));
        }
        let poly = &self.numerator() - &self.denominator().scale(p.conj());
        let zeros = disk_roots(&poly, self.degree())?;
        let shape = Self::from_parts(Cx::<T>::one(), zeros);
        let z0 = probe_avoiding(shape.zeros(), 0);
        let th = self.eval(z0);
        let target = (th - p.conj()) / (Cx::<T>::one() - p * th);
        Ok(shape.with_constant(target / shape.eval(z0)))
    }

    /// The inner function `tilde k_lam / k_lam` of degree `deg theta - 1`.
    pub fn kernel_inner_factor(&self, lam: Cx<T>) -> Result<Self> {
        self.kernel_inner_factor_seeded(lam, 0)
    }

    /// As [`kernel_inner_factor`](Self::kernel_inner_factor) with the
    /// constant pinned through probe sequence `seed`.
    pub fn kernel_inner_factor_seeded(&self, lam: Cx<T>, seed: u64) -> Result<Self> {
        if self.is_constant() {
            return Err(Error::InsufficientDegree { have: 0, need: 1 });
        }
        let c = self.eval(lam);
        let zeros = if c.is_zero() {
            remove_matched(&self.zeros, &[lam], T::tolerances().gcd)
                .ok_or_else(|| Error::CrossCheckMismatch("theta(lam) = 0 but lam is not a stored zero".into()))?
        } else {
            let poly = &self.numerator() - &self.denominator().scale(c);
            let (q, _) = poly.div_linear(lam);
            disk_roots(&q, self.degree() - 1)?
        };
        let shape = Self::from_parts(Cx::<T>::one(), zeros);
        let mut avoid = shape.zeros.clone();
        avoid.push(lam);
        avoid.extend_from_slice(&self.zeros);
        let z0 = probe_avoiding(&avoid, seed);
        let th = self.eval(z0);
        let kt = (th - c) / (z0 - lam);
        let k = (Cx::<T>::one() - c.conj() * th) / (Cx::<T>::one() - lam.conj() * z0);
        Ok(shape.with_constant(kt / k / shape.eval(z0)))
    }

    /// True when `self` divides `theta`: the zero multiset embeds.
    pub fn divides(&self, theta: &Self, tol: T) -> bool {
        remove_matched(&theta.zeros, &self.zeros, tol).is_some()
    }

    /// Multiset intersection of zeros with constant 1.
    pub fn gcd(&self, other: &Self, tol: T) -> Self {
        let a = cluster_roots(&self.zeros, tol);
        let b = cluster_roots(&other.zeros, tol);
        let common = expand(&match_roots(&a, &b, tol));
        // snap matched midpoints back onto the zeros of self
        let zeros = common
            .iter()
            .map(|m| {
                *self
                    .zeros
                    .iter()
                    .min_by(|x, y| (**x - m).norm().partial_cmp(&(**y - m).norm()).unwrap())
                    .expect("nonempty")
            })
            .collect();
        Self { constant: Cx::<T>::one(), zeros }
    }

    /// Maximum pointwise distance to `other` after aligning constants.
    pub fn distance_up_to_constant(&self, other: &Self, n: usize) -> T {
        let pts = circle_points::<T>(n);
        let ratio = other.eval(pts[0]) / self.eval(pts[0]);
        pts.into_iter().fold(T::zero(), |a, z| a.max((self.eval(z) * ratio - other.eval(z)).norm()))
    }
}

/// Removes from `pool` one tolerance-matched element for each of `take`;
/// `None` when some element of `take` is unmatched.
fn remove_matched<T: Scalar>(pool: &[Cx<T>], take: &[Cx<T>], tol: T) -> Option<Vec<Cx<T>>> {
    let mut used = vec![false; pool.len()];
    let mut order: Vec<usize> = (0..take.len()).collect();
    // match tightest pairs first so near-duplicates resolve deterministically
    order.sort_by(|&i, &j| {
        let di = pool.iter().map(|p| (*p - take[i]).norm()).fold(T::infinity(), T::min);
        let dj = pool.iter().map(|p| (*p - take[j]).norm()).fold(T::infinity(), T::min);
        di.partial_cmp(&dj).unwrap_or(std::cmp::Ordering::Equal)
    });
    for i in order {
        let t = take[i];
        let best = pool
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, p)| (k, (*p - t).norm()))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(std::cmp::Ordering::Equal))?;
        let scale = T::one().max(t.norm());
        if best.1 > tol * scale {
            return None;
        }
        used[best.0] = true;
    }
    Some(pool.iter().enumerate().filter(|(k, _)| !used[*k]).map(|(_, p)| *p).collect())
}

/// Roots of `p`, all of which must lie in the disk; exactly `expect` of them.
fn disk_roots<T: Scalar>(p: &Polynomial<T>, expect: usize) -> Result<Vec<Cx<T>>> {
    let tol = T::tolerances();
    let roots = if p.degree() == 0 { Vec::new() } else { p.roots_flat(tol.root_cluster)? };
    if roots.len() != expect {
        return Err(Error::CrossCheckMismatch(format!("expected {expect} zeros, found {}", roots.len())));
    }
    for r in &roots {
        if !(r.norm() < T::one() - tol.boundary) {
            return Err(Error::RootEscapedDisk { modulus: r.norm().to_f64().unwrap_or(f64::NAN) });
        }
    }
    Ok(roots)
}
