//! Independent numerical validation: Fourier coefficients of rational
//! symbols, truncated Toeplitz matrices, SVD kernels and subspace angles.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, svd_right, CMatrix};
use crate::polyalg::Polynomial;
use crate::ratfun::{series_div, RationalFunction};
use crate::scalar::{circle_points, Cx, Scalar};

/// Default relative rank tolerance.
pub const DEFAULT_TOL_RANK: f64 = 1e-8;
/// Minimum number of samples in the discrete-transform cross-check.
pub const DFT_SAMPLES: usize = 4096;
/// Largest truncation size chosen by [`suggested_size`].
pub const MAX_SIZE: usize = 512;

/// Fourier coefficients `f^(n)` for `n` in `lo..=hi`, from the split of `f`
/// into polynomial, outside-pole and inside-pole parts. Cross-checked against
/// a discrete Fourier transform.
pub fn fourier_coeffs<T: Scalar>(f: &RationalFunction<T>, lo: i64, hi: i64) -> Result<Vec<Cx<T>>> {
    let exact = fourier_coeffs_exact(f, lo, hi)?;
    let span = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
    let n = DFT_SAMPLES.max((4 * span + 4).next_power_of_two());
    let dft = fourier_coeffs_dft(f, lo, hi, n)?;
    let scale = T::one() + circle_points::<T>(n).into_iter().fold(T::zero(), |a, z| a.max(f.eval(z).norm()));
    let diff = exact.iter().zip(&dft).fold(T::zero(), |a, (x, y)| a.max((*x - *y).norm()));
    let tol = if T::tolerances().check > T::lit(1e-6) { T::lit(1e-4) } else { T::lit(1e-10) };
    if diff > tol * scale {
        return Err(Error::CrossCheckMismatch(format!(
            "Fourier coefficients differ from the discrete transform by {diff}"
        )));
    }
    Ok(exact)
}

/// Coefficients from the partial-fraction split only.
pub fn fourier_coeffs_exact<T: Scalar>(f: &RationalFunction<T>, lo: i64, hi: i64) -> Result<Vec<Cx<T>>> {
    if hi < lo {
        return Ok(Vec::new());
    }
    let mut out = vec![Cx::zero(); (hi - lo + 1) as usize];
    if f.is_zero() {
        return Ok(out);
    }
    let s = f.split(T::tolerances().boundary)?;
    if hi >= 0 {
        let n = (hi + 1) as usize;
        let outer = if s.outer_num.is_zero() { vec![Cx::zero(); n] } else { series_div(&s.outer_num, &s.outer_den, n) };
        for k in lo.max(0)..=hi {
            let mut v = outer[k as usize];
            if let Some(c) = s.poly.coeffs().get(k as usize) {
                v = v + *c;
            }
            out[(k - lo) as usize] = v;
        }
    }
    if lo < 0 && !s.inner_num.is_zero() {
        // A(z)/D(z) = w^(dD - dA) revA(w) / revD(w) with w = 1/z
        let shift = (s.inner_den.degree() - s.inner_num.degree()) as i64;
        let rev_a = Polynomial::new(s.inner_num.coeffs().iter().rev().copied().collect());
        let rev_d = Polynomial::new(s.inner_den.coeffs().iter().rev().copied().collect());
        let top = (-lo) - shift;
        if top >= 0 {
            let ser = series_div(&rev_a, &rev_d, top as usize + 1);
            for (k, c) in ser.into_iter().enumerate() {
                let idx = -(k as i64 + shift);
                if idx <= hi {
                    out[(idx - lo) as usize] = c;
                }
            }
        }
    }
    Ok(out)
}

/// Coefficients by an `n`-point discrete Fourier transform of circle samples.
pub fn fourier_coeffs_dft<T: Scalar>(f: &RationalFunction<T>, lo: i64, hi: i64, n: usize) -> Result<Vec<Cx<T>>> {
    f.check_no_circle_poles(T::tolerances().boundary)?;
    let pts = circle_points::<T>(n);
    let vals: Vec<Cx<T>> = pts.iter().map(|&z| f.eval(z)).collect();
    let inv_n = T::from_usize(n).expect("sample count").recip();
    let nn = n as i64;
    Ok((lo..=hi)
        .map(|k| {
            let mut acc = Cx::zero();
            for (j, v) in vals.iter().enumerate() {
                // conj(z_j)^k = z_{(-j k) mod n}
                let idx = (-(j as i64) * k).rem_euclid(nn) as usize;
                acc = acc + *v * pts[idx];
            }
            acc * inv_n
        })
        .collect())
}

/// Nonnegative Taylor coefficients `0..m` of `f`.
pub fn expand<T: Scalar>(f: &RationalFunction<T>, m: usize) -> Result<Vec<Cx<T>>> {
    if m == 0 {
        return Ok(Vec::new());
    }
    fourier_coeffs_exact(f, 0, m as i64 - 1)
}

/// Section of `T_g` on `span{1, ..., z^(cols-1)}` observed in the first
/// `rows` coefficients: `entries[(j, k)] = g^(j - k)`.
#[derive(Clone, Debug)]
pub struct ToeplitzTruncation<T> {
    pub size: usize,
    pub rows: usize,
    pub entries: CMatrix<T>,
}

impl<T: Scalar> ToeplitzTruncation<T> {
    /// The square `M x M` truncation.
    pub fn new(g: &RationalFunction<T>, m: usize) -> Result<Self> {
        Self::section(g, m, m)
    }

    pub fn section(g: &RationalFunction<T>, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("empty truncation".into()));
        }
        let lo = -(cols as i64 - 1);
        let c = fourier_coeffs(g, lo, rows as i64 - 1)?;
        let entries = CMatrix::from_fn(rows, cols, |j, k| c[(j as i64 - k as i64 - lo) as usize]);
        Ok(Self { size: cols, rows, entries })
    }

    /// Largest deviation from constancy along diagonals.
    pub fn diagonal_defect(&self) -> T {
        let mut worst = T::zero();
        for j in 1..self.rows {
            for k in 1..self.size {
                worst = worst.max((self.entries[(j, k)] - self.entries[(j - 1, k - 1)]).norm());
            }
        }
        worst
    }
}

/// Orthonormal basis of a subspace of `C^M`.
#[derive(Clone, Debug)]
pub struct NumericalSubspace<T> {
    pub ambient: usize,
    pub basis_vectors: Vec<Vec<Cx<T>>>,
    pub tol_rank: T,
}

impl<T: Scalar> NumericalSubspace<T> {
    pub fn dim(&self) -> usize {
        self.basis_vectors.len()
    }

    /// Orthonormalizes `vectors` (Gram-Schmidt with one reorthogonalization
    /// pass), dropping directions whose residual falls below
    /// `tol_rank` relative to the input norm.
    pub fn span(ambient: usize, vectors: &[Vec<Cx<T>>], tol_rank: T) -> Result<Self> {
        let mut basis: Vec<Vec<Cx<T>>> = Vec::new();
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch { left: ambient, right: v.len() });
            }
            let n0 = norm2(v);
            let mut w = v.clone();
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi = *wi - *bi * c;
                    }
                }
            }
            let n = norm2(&w);
            if n > tol_rank * n0 && !n.is_zero() {
                basis.push(w.into_iter().map(|x| x / n).collect());
            }
        }
        Ok(Self { ambient, basis_vectors: basis, tol_rank })
    }

    /// Span of the Taylor coefficient vectors of `fs`, truncated to length `m`.
    pub fn from_functions(fs: &[RationalFunction<T>], m: usize, tol_rank: T) -> Result<Self> {
        let vs = fs.iter().map(|f| expand(f, m)).collect::<Result<Vec<_>>>()?;
        Self::span(m, &vs, tol_rank)
    }

    /// Largest entry of `Q^H Q - I`.
    pub fn orthonormality_defect(&self) -> T {
        let mut worst = T::zero();
        for (i, a) in self.basis_vectors.iter().enumerate() {
            for (j, b) in self.basis_vectors.iter().enumerate() {
                let want = if i == j { Cx::one() } else { Cx::zero() };
                worst = worst.max((dot(a, b) - want).norm());
            }
        }
        worst
    }

    fn matrix(&self) -> CMatrix<T> {
        CMatrix::from_columns(self.ambient, &self.basis_vectors)
    }
}

/// Kernel of a truncation together with the stability gate outcome.
#[derive(Clone, Debug)]
pub struct NumericalKernel<T> {
    pub subspace: NumericalSubspace<T>,
    /// Singular values of the size-`M` section, descending.
    pub singular_values: Vec<T>,
    /// Kernel dimension of the size-`2M` section.
    pub dim_doubled: usize,
    /// `dim` agrees between sizes `M` and `2M`.
    pub stable: bool,
}

impl<T: Scalar> NumericalKernel<T> {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }
}

fn kernel_of_section<T: Scalar>(g: &RationalFunction<T>, m: usize, tol_rank: T) -> Result<(NumericalSubspace<T>, Vec<T>)> {
    // extra rows keep truncation effects at the last columns from faking
    // null vectors
    let t = ToeplitzTruncation::section(g, 2 * m, m)?;
    let svd = svd_right(&t.entries)?;
    let smax = svd.singular_values.first().copied().unwrap_or_else(T::zero);
    let cut = tol_rank * smax;
    let basis: Vec<Vec<Cx<T>>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < cut || smax.is_zero())
        .map(|(j, _)| svd.v.col(j).to_vec())
        .collect();
    Ok((NumericalSubspace { ambient: m, basis_vectors: basis, tol_rank }, svd.singular_values))
}

/// Numerical `ker T_g` on polynomials of degree `< m`: right singular
/// vectors with `sigma < tol_rank sigma_max`, gated by the same computation
/// at size `2m`.
pub fn numerical_kernel<T: Scalar>(g: &RationalFunction<T>, m: usize, tol_rank: T) -> Result<NumericalKernel<T>> {
    if g.is_zero() {
        return Err(Error::InvalidInput("zero symbol".into()));
    }
    let (subspace, singular_values) = kernel_of_section(g, m, tol_rank)?;
    let (doubled, _) = kernel_of_section(g, 2 * m, tol_rank)?;
    let dim_doubled = doubled.dim();
    Ok(NumericalKernel { stable: dim_doubled == subspace.dim(), subspace, singular_values, dim_doubled })
}

/// Largest principal angle between two subspaces of equal dimension.
pub fn subspace_angle<T: Scalar>(a: &NumericalSubspace<T>, b: &NumericalSubspace<T>) -> Result<T> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch { left: a.ambient, right: b.ambient });
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    if a.dim() == 0 {
        return Ok(T::zero());
    }
    let qa = a.matrix();
    let qb = b.matrix();
    let resid = qb.sub(&qa.matmul(&qa.adjoint().matmul(&qb)));
    let s = svd_right(&resid)?.singular_values[0];
    Ok(s.min(T::one()).asin())
}

/// Truncation size adequate for `g`: Taylor coefficients of kernel elements
/// decay like `n^(k-1) rho^n`, where `rho` is the largest of `|q|` and
/// `1/|q|` over poles `q` of `g` and over zeros of `g` outside the disk
/// (the poles of kernel elements), and `k` their multiplicity.
pub fn suggested_size<T: Scalar>(g: &RationalFunction<T>) -> Result<usize> {
    let prof = g.classify(T::tolerances().boundary)?;
    let base = 16usize.max(4 * (g.num().degree() + g.den().degree()));
    let mut rho = 0.0f64;
    let mut mult = 1usize;
    for r in prof.poles.inside.iter().chain(&prof.poles.outside).chain(&prof.zeros.outside) {
        let m = r.value.norm().to_f64().unwrap_or(0.0);
        let q = if m < 1.0 { m } else { 1.0 / m };
        rho = rho.max(q);
        mult = mult.max(r.multiplicity);
    }
    if rho <= 0.0 {
        return Ok(base);
    }
    let mut n = base;
    // n^(k-1) rho^n < 1e-11 at the truncation point
    while n < MAX_SIZE && (mult as f64 - 1.0) * (n as f64).ln() + n as f64 * rho.ln() > (1e-11f64).ln() {
        n += 4;
    }
    Ok(n.min(MAX_SIZE))
}

/// Tail energy of the Taylor series of `f` beyond `m` terms, relative to
/// the total, summed directly over the first `4m` coefficients.
pub fn tail_fraction<T: Scalar>(f: &RationalFunction<T>, m: usize) -> Result<T> {
    let co = expand(f, 4 * m.max(1))?;
    let total: T = co.iter().fold(T::zero(), |a, c| a + c.norm_sqr());
    let tail: T = co[m..].iter().fold(T::zero(), |a, c| a + c.norm_sqr());
    if total.is_zero() {
        return Ok(T::zero());
    }
    Ok(tail / total)
}

/// Outcome of comparing a predicted kernel with the oracle.
#[derive(Clone, Debug)]
pub struct OracleReport<T> {
    pub size: usize,
    pub predicted_dim: usize,
    pub numerical_dim: usize,
    pub dim_doubled: usize,
    pub stable: bool,
    /// Largest principal angle when the dimensions agree.
    pub angle: Option<T>,
    pub tail: T,
}

impl<T: Scalar> OracleReport<T> {
    /// Dimensions agree, the gate is stable and the angle is below `tol`.
    pub fn agrees(&self, tol: T) -> bool {
        self.stable && self.predicted_dim == self.numerical_dim && self.angle.map_or(false, |a| a < tol)
    }
}

/// Compares `span(predicted)` with the numerical kernel of `g`. The size
/// starts at `m` (or [`suggested_size`]) and doubles until the predicted
/// functions have relative tail energy below `1e-10`.
pub fn check_against_oracle<T: Scalar>(
    g: &RationalFunction<T>,
    predicted: &[RationalFunction<T>],
    m: Option<usize>,
    tol_rank: T,
) -> Result<OracleReport<T>> {
    let mut size = match m {
        Some(m) => m,
        None => suggested_size(g)?,
    };
    let tail = loop {
        let t = predicted.iter().map(|f| tail_fraction(f, size)).collect::<Result<Vec<_>>>()?;
        let worst = t.into_iter().fold(T::zero(), T::max);
        if worst < T::lit(1e-10) || size >= MAX_SIZE {
            break worst;
        }
        size *= 2;
    };
    let want = NumericalSubspace::from_functions(predicted, size, tol_rank)?;
    let nk = numerical_kernel(g, size, tol_rank)?;
    let angle = if want.dim() == nk.dim() { Some(subspace_angle(&want, &nk.subspace)?) } else { None };
    Ok(OracleReport {
        size,
        predicted_dim: want.dim(),
        numerical_dim: nk.dim(),
        dim_doubled: nk.dim_doubled,
        stable: nk.stable,
        angle,
        tail,
    })
}
