//! Complex polynomials: arithmetic, companion-matrix root finding,
//! root-matching gcd and coefficient reflection.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{balance, hessenberg_eigenvalues, CMatrix};
use crate::scalar::{Cx, Scalar};

/// Polynomial with complex coefficients stored in ascending degree.
///
/// The leading coefficient is nonzero unless the polynomial is the zero
/// polynomial, which is stored as `[0]`.
#[derive(Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<Cx<T>>,
}

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root<T> {
    pub value: Cx<T>,
    pub multiplicity: usize,
}

impl<T: fmt::Debug> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

// Coefficients whose modulus falls below this many ulps of the operands
// after an addition are rounding noise and are set to zero.
const CANCEL_ULPS: f64 = 64.0;

impl<T: Scalar> Polynomial<T> {
    /// Builds a polynomial from ascending coefficients, trimming exact
    /// zero leading coefficients.
    pub fn new(mut coeffs: Vec<Cx<T>>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Cx::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![Cx::zero()] }
    }

    pub fn one() -> Self {
        Self::constant(Cx::one())
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::new(vec![c])
    }

    /// `c z^k`.
    pub fn monomial(c: Cx<T>, k: usize) -> Self {
        let mut v = vec![Cx::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(Cx::one(), 1)
    }

    /// `z - r`.
    pub fn linear(r: Cx<T>) -> Self {
        Self::new(vec![-r, Cx::one()])
    }

    /// `lead * prod (z - r_i)`.
    pub fn from_roots(lead: Cx<T>, roots: &[Cx<T>]) -> Self {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![Cx::zero(); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] = next[k + 1] + ck;
                next[k] = next[k] - ck * r;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> Cx<T> {
        *self.coeffs.last().expect("nonempty")
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |a, c| a + c.norm_sqr()).sqrt()
    }

    pub fn eval(&self, z: Cx<T>) -> Cx<T> {
        self.coeffs.iter().rev().fold(Cx::zero(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_usize(k).unwrap())
                .collect(),
        )
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Cx::zero(); k];
        v.extend_from_slice(&self.coeffs);
        Self::new(v)
    }

    /// Monic rescaling; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.leading().inv())
    }

    /// Coefficient reflection `p*(z) = z^deg p * conj(p(1/conj z))`:
    /// coefficients conjugated and reversed. On the unit circle
    /// `conj(p(z)) = z^(-deg p) p*(z)`.
    pub fn reflect(&self) -> Self {
        Self::new(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// Number of exactly-zero low-order coefficients (order of the root at 0).
    pub fn valuation(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    fn combine(&self, rhs: &Self, sign: T) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let tol = T::epsilon() * T::lit(CANCEL_ULPS);
        let out = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or_else(Cx::zero);
                let b = rhs.coeffs.get(k).copied().unwrap_or_else(Cx::zero) * sign;
                let r = a + b;
                if r.norm() <= tol * (a.norm() + b.norm()) {
                    Cx::zero()
                } else {
                    r
                }
            })
            .collect();
        Self::new(out)
    }

    /// Polynomial long division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let dn = d.degree();
        if self.degree() < dn || self.is_zero() {
            return Ok((Self::zero(), self.clone()));
        }
        let lead_inv = d.leading().inv();
        let mut r = self.coeffs.clone();
        let mut q = vec![Cx::zero(); self.degree() - dn + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + dn] * lead_inv;
            q[k] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j] - c * dj;
            }
            r[k + dn] = Cx::zero();
        }
        r.truncate(dn.max(1));
        Ok((Self::new(q), Self::new(r)))
    }

    /// Synthetic division by `z - r`, run from the top coefficient down
    /// (stable for `|r| <= 1`). Returns quotient and remainder `p(r)`.
    pub fn div_linear(&self, r: Cx<T>) -> (Self, Cx<T>) {
        let n = self.coeffs.len();
        if n == 1 {
            return (Self::zero(), self.coeffs[0]);
        }
        let mut q = vec![Cx::zero(); n - 1];
        let mut acc = self.coeffs[n - 1];
        for k in (0..n - 1).rev() {
            q[k] = acc;
            acc = self.coeffs[k] + acc * r;
        }
        (Self::new(q), acc)
    }

    /// Division by `1 - a z`, run from the constant coefficient up (stable
    /// for `|a| <= 1`). Returns quotient and the discarded top residue.
    pub fn div_one_minus(&self, a: Cx<T>) -> (Self, Cx<T>) {
        if a.is_zero() {
            return (self.clone(), Cx::zero());
        }
        let n = self.coeffs.len();
        if n == 1 {
            return (Self::zero(), self.coeffs[0]);
        }
        let mut s = vec![Cx::zero(); n - 1];
        let mut prev = Cx::zero();
        for k in 0..n - 1 {
            s[k] = self.coeffs[k] + a * prev;
            prev = s[k];
        }
        // residue: coefficient of z^(n-1) in p - (1 - a z) s
        let residue = self.coeffs[n - 1] + a * prev;
        (Self::new(s), residue)
    }

    /// Coefficients of `p(c + t)` in powers of `t`.
    pub fn taylor_at(&self, c: Cx<T>) -> Vec<Cx<T>> {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for k in (i..n - 1).rev() {
                let t = a[k + 1];
                a[k] = a[k] + c * t;
            }
        }
        a
    }

    /// Roots with multiplicity via eigenvalues of the balanced companion
    /// matrix, Newton-polished, with clusters closer than
    /// `tol * max(1, max |root|)` merged at their centroid.
    pub fn roots(&self, tol: T) -> Result<Vec<Root<T>>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let flat = self.raw_roots()?;
        Ok(cluster_roots(&flat, tol))
    }

    /// Roots as a flat multiset (each root repeated by multiplicity).
    pub fn roots_flat(&self, tol: T) -> Result<Vec<Cx<T>>> {
        Ok(expand(&self.roots(tol)?))
    }

    fn raw_roots(&self) -> Result<Vec<Cx<T>>> {
        let val = self.valuation();
        let core = Self::new(self.coeffs[val..].to_vec());
        let n = core.degree();
        let mut out = vec![Cx::zero(); val];
        if n == 0 {
            return Ok(out);
        }
        if n == 1 {
            out.push(-core.coeffs[0] / core.coeffs[1]);
            return Ok(out);
        }
        let m = core.monic();
        let mut comp = CMatrix::zeros(n, n);
        for j in 0..n {
            comp[(0, j)] = -m.coeffs[n - 1 - j];
        }
        for i in 1..n {
            comp[(i, i - 1)] = Cx::one();
        }
        balance(&mut comp);
        let eig = hessenberg_eigenvalues(comp)?;
        let dcore = core.derivative();
        for z0 in eig {
            out.push(newton_polish(&core, &dcore, z0));
        }
        Ok(out)
    }
}

fn newton_polish<T: Scalar>(p: &Polynomial<T>, dp: &Polynomial<T>, z0: Cx<T>) -> Cx<T> {
    let mut z = z0;
    let mut fz = p.eval(z).norm();
    for _ in 0..8 {
        let d = dp.eval(z);
        if d.is_zero() || fz.is_zero() {
            break;
        }
        let cand = z - p.eval(z) / d;
        let fc = p.eval(cand).norm();
        if !(fc < fz) {
            break;
        }
        z = cand;
        fz = fc;
    }
    z
}

/// Merges roots within `tol * max(1, max |r|)` into clusters located at
/// their centroid. Output sorted by modulus then argument.
pub fn cluster_roots<T: Scalar>(flat: &[Cx<T>], tol: T) -> Vec<Root<T>> {
    let n = flat.len();
    let scale = flat.iter().fold(T::one(), |a, r| a.max(r.norm()));
    let radius = tol * scale;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (flat[i] - flat[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Cx<T>, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 = g.1 + flat[i];
                g.2 += 1;
            }
            None => groups.push((r, flat[i], 1)),
        }
    }
    let mut roots: Vec<Root<T>> = groups
        .into_iter()
        .map(|(_, sum, m)| Root { value: sum / T::from_usize(m).unwrap(), multiplicity: m })
        .collect();
    roots.sort_by(|a, b| {
        a.value
            .norm()
            .partial_cmp(&b.value.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.value.arg().partial_cmp(&b.value.arg()).unwrap_or(std::cmp::Ordering::Equal))
    });
    roots
}

/// Flattens a clustered root list into a multiset.
pub fn expand<T: Scalar>(roots: &[Root<T>]) -> Vec<Cx<T>> {
    roots.iter().flat_map(|r| std::iter::repeat(r.value).take(r.multiplicity)).collect()
}

/// Greedy nearest-first matching of two root multisets within
/// `tol * max(1, |a|, |b|)`. Returns `(value in a, value in b, multiplicity)`
/// with multiplicity `min` of the two.
fn match_root_pairs<T: Scalar>(a: &[Root<T>], b: &[Root<T>], tol: T) -> Vec<(Cx<T>, Cx<T>, usize)> {
    let mut ma: Vec<usize> = a.iter().map(|r| r.multiplicity).collect();
    let mut mb: Vec<usize> = b.iter().map(|r| r.multiplicity).collect();
    let mut pairs: Vec<(T, usize, usize)> = Vec::new();
    for (i, ra) in a.iter().enumerate() {
        for (j, rb) in b.iter().enumerate() {
            let scale = T::one().max(ra.value.norm()).max(rb.value.norm());
            let d = (ra.value - rb.value).norm();
            if d <= tol * scale {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = Vec::new();
    for (_, i, j) in pairs {
        let m = ma[i].min(mb[j]);
        if m == 0 {
            continue;
        }
        ma[i] -= m;
        mb[j] -= m;
        out.push((a[i].value, b[j].value, m));
    }
    out
}

fn exact_origin<T: Scalar>(x: Cx<T>, y: Cx<T>, v: Cx<T>) -> Cx<T> {
    if x.is_zero() || y.is_zero() || v.norm() < T::tolerances().snap {
        Cx::zero()
    } else {
        v
    }
}

/// Matched roots at their midpoints. Roots at the origin come from exact
/// valuations and stay exact.
pub(crate) fn match_roots<T: Scalar>(a: &[Root<T>], b: &[Root<T>], tol: T) -> Vec<Root<T>> {
    match_root_pairs(a, b, tol)
        .into_iter()
        .map(|(x, y, m)| Root { value: exact_origin(x, y, (x + y) * T::lit(0.5)), multiplicity: m })
        .collect()
}

/// `|p(v)|` relative to the size of the terms summed to form it.
fn relative_residual<T: Scalar>(p: &Polynomial<T>, v: Cx<T>) -> T {
    let r = v.norm();
    let mut scale = T::zero();
    let mut pw = T::one();
    for c in p.coeffs() {
        scale = scale + c.norm() * pw;
        pw = pw * r;
    }
    if scale.is_zero() {
        T::zero()
    } else {
        p.eval(v).norm() / scale
    }
}

/// Common roots of `p` and `q` as a flat multiset, tolerance-matched.
pub fn common_roots<T: Scalar>(p: &Polynomial<T>, q: &Polynomial<T>, tol: T) -> Result<Vec<Cx<T>>> {
    if p.is_zero() || q.is_zero() || p.degree() == 0 || q.degree() == 0 {
        return Ok(Vec::new());
    }
    let rp = p.roots(tol)?;
    let rq = q.roots(tol)?;
    // a split multiple root on one side is far less accurate than a simple
    // root on the other; keep the candidate that is closest to a root of both
    let mut out = Vec::new();
    for (x, y, m) in match_root_pairs(&rp, &rq, tol) {
        let mid = (x + y) * T::lit(0.5);
        let score = |v: Cx<T>| relative_residual(p, v).max(relative_residual(q, v));
        let best = [x, y].into_iter().fold(mid, |b, v| if score(v) < score(b) { v } else { b });
        out.extend(std::iter::repeat(exact_origin(x, y, best)).take(m));
    }
    Ok(out)
}


/// Divides out `(z - r)` for each listed root, choosing the numerically
/// stable recurrence for each factor. Remainders are discarded.
/// Roots exactly at the origin come off by shifting, and the power of `z`
/// left in `p` is kept exact.
pub fn deflate<T: Scalar>(p: &Polynomial<T>, roots: &[Cx<T>]) -> Polynomial<T> {
    let at_origin = roots.iter().filter(|r| r.is_zero()).count();
    let val = p.valuation();
    let drop = at_origin.min(val).min(p.degree());
    let keep = val - drop;
    let mut out = Polynomial::new(p.coeffs()[drop..].to_vec());
    let mut skip = at_origin - drop;
    for &r in roots.iter().filter(|r| !r.is_zero() || skip_take(&mut skip)) {
        if out.degree() == 0 {
            break;
        }
        out = if r.norm() <= T::one() {
            out.div_linear(r).0
        } else {
            let inv = r.inv();
            out.div_one_minus(inv).0.scale(-inv)
        };
        if keep > 0 && out.degree() >= keep {
            let mut c = out.coeffs().to_vec();
            c[..keep].iter_mut().for_each(|x| *x = Cx::zero());
            out = Polynomial::new(c);
        }
    }
    out
}

fn skip_take(n: &mut usize) -> bool {
    if *n > 0 {
        *n -= 1;
        true
    } else {
        false
    }
}

/// Monic polynomial whose roots are the tolerance-matched common roots of
/// `p` and `q` (multiplicity = min of the two). Returns `1` when none match.
pub fn approx_gcd<T: Scalar>(p: &Polynomial<T>, q: &Polynomial<T>, tol: T) -> Result<Polynomial<T>> {
    match (p.is_zero(), q.is_zero()) {
        (true, true) => Err(Error::ZeroPolynomial),
        (true, false) => Ok(q.monic()),
        (false, true) => Ok(p.monic()),
        (false, false) => {
            if p.degree() == 0 || q.degree() == 0 {
                return Ok(Polynomial::one());
            }
            let rp = p.roots(tol)?;
            let rq = q.roots(tol)?;
            let common = match_roots(&rp, &rq, tol);
            Ok(Polynomial::from_roots(Cx::one(), &expand(&common)))
        }
    }
}

impl<'a, T: Scalar> Add for &'a Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        self.combine(rhs, T::one())
    }
}

impl<'a, T: Scalar> Sub for &'a Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        self.combine(rhs, -T::one())
    }
}

impl<'a, T: Scalar> Mul for &'a Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Cx::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl<'a, T: Scalar> Neg for &'a Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        self.scale(-Cx::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, rhs: Self) -> Polynomial<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
