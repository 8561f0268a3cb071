//! JSON encodings. Complex numbers are `[re, im]`; polynomials are arrays
//! of complex coefficients in ascending order; Blaschke products are
//! `{constant, zeros}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use toepkern::{Blaschke64, KernelRep64, Poly64, Rational64};

pub type CxJson = [f64; 2];

pub fn cx(z: Complex64) -> CxJson {
    [z.re, z.im]
}

pub fn from_cx(z: CxJson) -> Complex64 {
    Complex64::new(z[0], z[1])
}

pub fn poly(p: &Poly64) -> Vec<CxJson> {
    p.coeffs().iter().map(|&c| cx(c)).collect()
}

pub fn from_poly(p: &[CxJson]) -> Poly64 {
    Poly64::new(p.iter().map(|&c| from_cx(c)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: Vec<CxJson>,
    pub den: Vec<CxJson>,
}

impl RationalJson {
    pub fn new(f: &Rational64) -> Self {
        Self { num: poly(f.num()), den: poly(f.den()) }
    }

    pub fn to_rational(&self) -> toepkern::Result<Rational64> {
        Rational64::new(from_poly(&self.num), from_poly(&self.den))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeJson {
    pub constant: CxJson,
    pub zeros: Vec<CxJson>,
}

impl BlaschkeJson {
    pub fn new(b: &Blaschke64) -> Self {
        Self { constant: cx(b.constant()), zeros: b.zeros().iter().map(|&z| cx(z)).collect() }
    }

    pub fn to_blaschke(&self) -> toepkern::Result<Blaschke64> {
        Blaschke64::new(from_cx(self.constant), self.zeros.iter().map(|&z| from_cx(z)).collect())
    }
}

/// `ker T_g = multiplier * K_theta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepJson {
    pub dimension: usize,
    pub multiplier: RationalJson,
    pub theta: BlaschkeJson,
    pub isometric: bool,
}

impl RepJson {
    pub fn new(r: &KernelRep64) -> Self {
        Self {
            dimension: r.dim(),
            multiplier: RationalJson::new(&r.multiplier),
            theta: BlaschkeJson::new(&r.theta),
            isometric: r.isometric,
        }
    }

    pub fn to_rep(&self) -> toepkern::Result<KernelRep64> {
        Ok(KernelRep64 {
            multiplier: self.multiplier.to_rational()?,
            theta: self.theta.to_blaschke()?,
            isometric: self.isometric,
            normalization: Complex64::new(1.0, 0.0),
        })
    }
}

/// A maximal function with its outer witness `O`, `g f = conj(z O)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub f: RationalJson,
    pub o_witness: RationalJson,
    pub witness_outer: bool,
    pub conjugation_outer: Option<bool>,
}
