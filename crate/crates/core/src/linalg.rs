//! Small dense complex linear algebra: Hessenberg QR eigenvalues (for
//! companion matrices), Householder QR, one-sided Jacobi SVD, and a
//! partial-pivoting solver.

use crate::error::{Error, Result};
use crate::scalar::{Cx, Scalar};
use num_traits::{One, Zero};

/// Column-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Scalar> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Cx::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cx::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Cx<T>>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            m.col_mut(j).copy_from_slice(c);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &[Cx<T>] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [Cx<T>] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for k in 0..self.cols {
                let b = rhs[(k, j)];
                if b.is_zero() {
                    continue;
                }
                let a = self.col(k);
                let o = &mut out.data[j * self.rows..(j + 1) * self.rows];
                for (oi, ai) in o.iter_mut().zip(a) {
                    *oi = *oi + *ai * b;
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Cx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[j * self.rows + i]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[j * self.rows + i]
    }
}

pub(crate) fn dot<T: Scalar>(a: &[Cx<T>], b: &[Cx<T>]) -> Cx<T> {
    // a^H b
    a.iter().zip(b).fold(Cx::zero(), |acc, (x, y)| acc + x.conj() * *y)
}

pub(crate) fn norm2<T: Scalar>(a: &[Cx<T>]) -> T {
    a.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr()).sqrt()
}

/// Unitary `G` with `G [a; b] = [r; 0]`, returned as `(c, s)` meaning
/// `G = [[conj c, conj s], [-s, c]]`.
fn givens<T: Scalar>(a: Cx<T>, b: Cx<T>) -> (Cx<T>, Cx<T>) {
    let nrm = a.norm().hypot(b.norm());
    if nrm.is_zero() {
        (Cx::one(), Cx::zero())
    } else {
        (a / nrm, b / nrm)
    }
}

/// Parlett-Reinsch balancing with power-of-two scalings. Similarity
/// transform, so eigenvalues are unchanged.
pub(crate) fn balance<T: Scalar>(a: &mut CMatrix<T>) {
    let n = a.rows;
    let radix = T::lit(2.0);
    let radix2 = radix * radix;
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 64 {
        done = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = T::zero();
            let mut r = T::zero();
            for j in 0..n {
                if j != i {
                    c = c + a[(j, i)].l1_norm();
                    r = r + a[(i, j)].l1_norm();
                }
            }
            if c.is_zero() || r.is_zero() {
                continue;
            }
            let s = c + r;
            let mut f = T::one();
            let mut g = r / radix;
            while c < g {
                f = f * radix;
                c = c * radix2;
            }
            g = r * radix;
            while c > g {
                f = f / radix;
                c = c / radix2;
            }
            if (c + r) / f < T::lit(0.95) * s {
                done = false;
                let inv = T::one() / f;
                for j in 0..n {
                    a[(i, j)] = a[(i, j)] * inv;
                }
                for j in 0..n {
                    a[(j, i)] = a[(j, i)] * f;
                }
            }
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by the shifted complex QR
/// algorithm with Wilkinson shifts and deflation.
pub(crate) fn hessenberg_eigenvalues<T: Scalar>(mut h: CMatrix<T>) -> Result<Vec<Cx<T>>> {
    let n = h.rows;
    let mut eig = vec![Cx::zero(); n];
    if n == 0 {
        return Ok(eig);
    }
    let eps = T::epsilon();
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let max_total = 60 * n.max(4);
    while hi > 0 {
        // find the start of the active unreduced block
        let mut l = hi;
        while l > 0 {
            let s = h[(l - 1, l - 1)].l1_norm() + h[(l, l)].l1_norm();
            let s = if s.is_zero() { T::one() } else { s };
            if h[(l, l - 1)].l1_norm() <= eps * s {
                h[(l, l - 1)] = Cx::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        total += 1;
        iter += 1;
        if total > max_total {
            return Err(Error::NoConvergence);
        }
        let shift = if iter % 11 == 10 {
            // exceptional shift
            let e = h[(hi, hi - 1)].norm() + if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { T::zero() };
            h[(hi, hi)] + Cx::new(e * T::lit(0.75), e * T::lit(-0.4375))
        } else {
            let a = h[(hi - 1, hi - 1)];
            let b = h[(hi - 1, hi)];
            let c = h[(hi, hi - 1)];
            let d = h[(hi, hi)];
            let half_tr = (a + d) * T::lit(0.5);
            let det = a * d - b * c;
            let disc = (half_tr * half_tr - det).sqrt();
            let m1 = half_tr + disc;
            let m2 = half_tr - disc;
            if (m1 - d).norm() < (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };
        for k in l..=hi {
            h[(k, k)] = h[(k, k)] - shift;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c.conj() * x + s.conj() * y;
                h[(k + 1, j)] = -s * x + c * y;
            }
            rots.push((c, s));
        }
        for (idx, (c, s)) in rots.into_iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hi);
            for i in l..=top {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s;
                h[(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
        }
        for k in l..=hi {
            h[(k, k)] = h[(k, k)] + shift;
        }
    }
    eig[0] = h[(0, 0)];
    Ok(eig)
}

/// Householder QR of an `m x n` matrix with `m >= n`; returns the `n x n`
/// upper-triangular factor.
pub fn qr_r<T: Scalar>(a: &CMatrix<T>) -> CMatrix<T> {
    let (m, n) = (a.rows, a.cols);
    assert!(m >= n, "qr_r expects a tall matrix");
    let mut w = a.clone();
    for k in 0..n {
        let x = &w.col(k)[k..];
        let alpha = norm2(x);
        if alpha.is_zero() {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm().is_zero() { Cx::one() } else { x0 / x0.norm() };
        // v = x + phase*alpha*e1
        let mut v: Vec<Cx<T>> = x.to_vec();
        v[0] = v[0] + phase * alpha;
        let vn2 = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if vn2.is_zero() {
            continue;
        }
        let tau = T::lit(2.0) / vn2;
        for j in k..n {
            let col = &mut w.col_mut(j)[k..];
            let proj = dot(&v, col) * tau;
            for (ci, vi) in col.iter_mut().zip(&v) {
                *ci = *ci - *vi * proj;
            }
        }
    }
    CMatrix::from_fn(n, n, |i, j| if i <= j { w[(i, j)] } else { Cx::zero() })
}

/// Singular value decomposition data: singular values in descending order
/// and the matching right singular vectors as columns of `v`.
#[derive(Clone, Debug)]
pub struct RightSvd<T> {
    pub singular_values: Vec<T>,
    pub v: CMatrix<T>,
}

/// One-sided (Hestenes) Jacobi SVD returning singular values and right
/// singular vectors. Tall inputs are first reduced to their triangular QR
/// factor, which has the same singular values and right vectors.
pub fn svd_right<T: Scalar>(a: &CMatrix<T>) -> Result<RightSvd<T>> {
    let n = a.cols;
    let mut u = if a.rows > n { qr_r(a) } else { a.clone() };
    let m = u.rows;
    let mut v = CMatrix::identity(n);
    let tol = T::epsilon() * T::from_usize(m.max(1)).unwrap();
    let mut converged = false;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = u.col(p).iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
                let beta = u.col(q).iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
                let gamma = dot(u.col(p), u.col(q));
                let g = gamma.norm();
                if g.is_zero() || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let ph = phase.conj();
                rotate_columns(&mut u, p, q, c, s, ph);
                rotate_columns(&mut v, p, q, c, s, ph);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence);
    }
    let mut order: Vec<(T, usize)> = (0..n).map(|j| (norm2(u.col(j)), j)).collect();
    order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let singular_values = order.iter().map(|(s, _)| *s).collect();
    let cols: Vec<Vec<Cx<T>>> = order.iter().map(|(_, j)| v.col(*j).to_vec()).collect();
    Ok(RightSvd { singular_values, v: CMatrix::from_columns(n, &cols) })
}

// [x_p, x_q] <- [x_p, ph x_q] * [[c, s], [-s, c]]
fn rotate_columns<T: Scalar>(m: &mut CMatrix<T>, p: usize, q: usize, c: T, s: T, ph: Cx<T>) {
    let rows = m.rows;
    let (lo, hi) = m.data.split_at_mut(q * rows);
    let cp = &mut lo[p * rows..(p + 1) * rows];
    let cq = &mut hi[..rows];
    for (xp, xq) in cp.iter_mut().zip(cq.iter_mut()) {
        let a = *xp;
        let b = *xq * ph;
        *xp = a * c - b * s;
        *xq = a * s + b * c;
    }
}

/// Singular values only, descending.
pub fn singular_values<T: Scalar>(a: &CMatrix<T>) -> Result<Vec<T>> {
    Ok(svd_right(a)?.singular_values)
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve<T: Scalar>(a: &CMatrix<T>, b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
    let n = a.rows;
    if a.cols != n || b.len() != n {
        return Err(Error::DimensionMismatch { left: a.cols, right: b.len() });
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = m.max_abs();
    for k in 0..n {
        let (piv, pmax) = (k..n)
            .map(|i| (i, m[(i, k)].norm()))
            .fold((k, T::zero()), |acc, c| if c.1 > acc.1 { c } else { acc });
        if pmax <= T::epsilon() * scale * T::from_usize(n).unwrap() {
            return Err(Error::InvalidInput("singular linear system".into()));
        }
        if piv != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(piv, j)];
                m[(piv, j)] = t;
            }
            x.swap(k, piv);
        }
        for i in (k + 1)..n {
            let f = m[(i, k)] / m[(k, k)];
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let t = m[(k, j)];
                m[(i, j)] = m[(i, j)] - f * t;
            }
            let t = x[k];
            x[i] = x[i] - f * t;
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in (k + 1)..n {
            s = s - m[(k, j)] * x[j];
        }
        x[k] = s / m[(k, k)];
    }
    Ok(x)
}
