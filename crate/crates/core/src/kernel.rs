//! Toeplitz kernels of rational and unimodular symbols: the rational-symbol
//! procedure, inclusion and equality tests, maximal functions and the
//! `I_n / O_n` cascade.

use num_traits::One;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::hardy::{in_conjugate_smirnov, in_kernel, inner_outer, is_in_h2plus, is_outer, InnerOuter};
use crate::modelspace::{repro_kernels, tm_basis, Basis};
use crate::polyalg::{expand, Polynomial};
use crate::ratfun::RationalFunction;
use crate::representations::represent_blaschke;
use crate::scalar::{circle_points, Cx, Scalar};

/// A rational symbol without poles on the circle.
#[derive(Clone, Debug)]
pub struct RationalSymbol<T> {
    f: RationalFunction<T>,
}

impl<T: Scalar> RationalSymbol<T> {
    pub fn new(f: RationalFunction<T>) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::InvalidInput("the zero symbol has kernel H2".into()));
        }
        f.check_no_circle_poles(T::tolerances().boundary)?;
        Ok(Self { f })
    }

    pub fn function(&self) -> &RationalFunction<T> {
        &self.f
    }
}

/// The unimodular symbol `conj(theta) alpha`, optionally twisted by the
/// outer ratio `conj(O) / O` (stored as `O`).
#[derive(Clone, Debug)]
pub struct UnimodularSymbol<T> {
    pub theta: BlaschkeProduct<T>,
    pub alpha: BlaschkeProduct<T>,
    pub outer_ratio: Option<RationalFunction<T>>,
}

impl<T: Scalar> UnimodularSymbol<T> {
    pub fn new(theta: BlaschkeProduct<T>, alpha: BlaschkeProduct<T>) -> Self {
        Self { theta, alpha, outer_ratio: None }
    }

    /// `conj(theta)`.
    pub fn model(theta: BlaschkeProduct<T>) -> Self {
        Self::new(theta, BlaschkeProduct::one())
    }

    /// Pair with the common inner divisor removed.
    pub fn reduced(&self) -> (BlaschkeProduct<T>, BlaschkeProduct<T>) {
        let tol = T::tolerances().gcd;
        let d = self.theta.gcd(&self.alpha, tol);
        let t = self.theta.div_exact(&d, tol).expect("gcd divides");
        let a = self.alpha.div_exact(&d, tol).expect("gcd divides");
        (t, a)
    }

    /// The symbol as a rational function on the circle.
    pub fn to_rational(&self) -> Result<RationalFunction<T>> {
        let (t, a) = self.reduced();
        let base = RationalFunction::normalized(&a.numerator() * &t.denominator(), &a.denominator() * &t.numerator());
        match &self.outer_ratio {
            None => Ok(base),
            Some(o) => base.mul(&o.boundary_conjugate())?.div(o),
        }
    }
}

/// A Toeplitz symbol.
#[derive(Clone, Debug)]
pub enum Symbol<T> {
    Rational(RationalSymbol<T>),
    Unimodular(UnimodularSymbol<T>),
}

impl<T: Scalar> Symbol<T> {
    pub fn rational(f: RationalFunction<T>) -> Result<Self> {
        Ok(Symbol::Rational(RationalSymbol::new(f)?))
    }

    pub fn unimodular(theta: BlaschkeProduct<T>, alpha: BlaschkeProduct<T>) -> Self {
        Symbol::Unimodular(UnimodularSymbol::new(theta, alpha))
    }

    pub fn to_rational(&self) -> Result<RationalFunction<T>> {
        match self {
            Symbol::Rational(r) => Ok(r.f.clone()),
            Symbol::Unimodular(u) => u.to_rational(),
        }
    }

    fn pure_unimodular(&self) -> Option<&UnimodularSymbol<T>> {
        match self {
            Symbol::Unimodular(u) if u.outer_ratio.is_none() => Some(u),
            _ => None,
        }
    }

    /// The symbol multiplied by an inner function.
    pub fn times_inner(&self, b: &BlaschkeProduct<T>) -> Result<Self> {
        Ok(match self {
            Symbol::Unimodular(u) => Symbol::Unimodular(UnimodularSymbol {
                theta: u.theta.clone(),
                alpha: u.alpha.mul(b),
                outer_ratio: u.outer_ratio.clone(),
            }),
            Symbol::Rational(r) => Symbol::rational(r.f.mul(&b.to_rational())?)?,
        })
    }

    /// Dimension of the kernel.
    pub fn kernel_dim(&self) -> Result<usize> {
        match self.pure_unimodular() {
            Some(u) => Ok(kernel_dim_unimodular(u)),
            None => Ok(kernel_of_rational_symbol(&RationalSymbol::new(self.to_rational()?)?)?.kernel.dim()),
        }
    }

    /// The kernel as a model-space representation.
    pub fn kernel(&self) -> Result<Kernel<T>> {
        match self.pure_unimodular() {
            Some(u) => {
                let (t, a) = u.reduced();
                if t.degree() <= a.degree() {
                    return Ok(Kernel::Trivial);
                }
                let (plain, _, _) = represent_blaschke(&t, a.zeros())?;
                Ok(Kernel::Rep(plain))
            }
            None => Ok(kernel_of_rational_symbol(&RationalSymbol::new(self.to_rational()?)?)?.kernel),
        }
    }
}

/// `ker T_g = multiplier * K_theta`.
#[derive(Clone, Debug)]
pub struct KernelRep<T> {
    pub multiplier: RationalFunction<T>,
    pub theta: BlaschkeProduct<T>,
    pub isometric: bool,
    /// Scalar factor already folded into `multiplier` (1 for plain reps).
    pub normalization: Cx<T>,
}

impl<T: Scalar> KernelRep<T> {
    pub fn dim(&self) -> usize {
        self.theta.degree()
    }

    /// Images of the Takenaka–Malmquist basis of `K_theta`.
    pub fn basis(&self) -> Result<Basis<T>> {
        tm_basis(&self.theta).times(&self.multiplier, self.isometric)
    }

    /// Every basis image passes the membership bridge for `g`.
    pub fn spans_kernel_of(&self, g: &RationalFunction<T>) -> Result<bool> {
        for e in self.basis()?.elements {
            if !in_kernel(&e, g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn gram_defect(&self, n_samples: usize) -> Result<T> {
        self.basis()?.gram_defect(n_samples)
    }
}

/// A kernel: trivial, or a finite-dimensional model-space representation.
#[derive(Clone, Debug)]
pub enum Kernel<T> {
    Trivial,
    Rep(KernelRep<T>),
}

impl<T: Scalar> Kernel<T> {
    pub fn dim(&self) -> usize {
        match self {
            Kernel::Trivial => 0,
            Kernel::Rep(r) => r.dim(),
        }
    }

    pub fn rep(&self) -> Option<&KernelRep<T>> {
        match self {
            Kernel::Trivial => None,
            Kernel::Rep(r) => Some(r),
        }
    }
}

/// Output of the rational-symbol procedure with its intermediate counts.
#[derive(Clone, Debug)]
pub struct RationalKernel<T> {
    pub kernel: Kernel<T>,
    /// Minimal model space containing the kernel (absent when trivial).
    pub containing: Option<BlaschkeProduct<T>>,
    /// `deg Q_- - deg P_-`.
    pub n: i64,
    /// Zeros of the symbol on the circle.
    pub n_t: usize,
    pub n1: usize,
    pub n2: usize,
    /// `n_T - n + n1 - n2`.
    pub big_n: i64,
}

/// Kernel of a rational symbol `g = P / Q` without poles on the circle.
pub fn kernel_of_rational_symbol<T: Scalar>(g: &RationalSymbol<T>) -> Result<RationalKernel<T>> {
    let prof = g.f.classify(T::tolerances().boundary)?;
    if let Some(r) = prof.poles.on_circle.first() {
        let (re, im) = crate::error::at(r.value);
        return Err(Error::PoleOnCircle { re, im });
    }
    let n_t = prof.zeros.n_on_circle();
    let n = prof.poles.n_inside() as i64 - prof.zeros.n_inside() as i64;
    let p_plus = expand(&prof.zeros.outside);
    let q_plus = expand(&prof.poles.outside);
    let (n1, n2) = (p_plus.len(), q_plus.len());
    let big_n = n_t as i64 - n + n1 as i64 - n2 as i64;
    if n_t as i64 - n >= 0 {
        return Ok(RationalKernel { kernel: Kernel::Trivial, containing: None, n, n_t, n1, n2, big_n });
    }
    let dim = (n - n_t as i64) as usize;
    let multiplier =
        RationalFunction::normalized(Polynomial::from_roots(Cx::one(), &q_plus), Polynomial::from_roots(Cx::one(), &p_plus));
    let rep = KernelRep { multiplier, theta: BlaschkeProduct::z_pow(dim), isometric: false, normalization: Cx::one() };
    let b1 = BlaschkeProduct::from_reflected(&p_plus)?;
    let containing = if big_n < 0 { b1.mul(&BlaschkeProduct::z_pow(big_n.unsigned_abs() as usize)) } else { b1 };
    Ok(RationalKernel { kernel: Kernel::Rep(rep), containing: Some(containing), n, n_t, n1, n2, big_n })
}

/// `dim ker T_{conj(theta) alpha}` after removing the common inner divisor.
pub fn kernel_dim_unimodular<T: Scalar>(s: &UnimodularSymbol<T>) -> usize {
    let (t, a) = s.reduced();
    t.degree().saturating_sub(a.degree())
}

/// `G / g` as a rational function, cancelling inner factors exactly when
/// both symbols are pure unimodular.
fn quotient<T: Scalar>(big: &Symbol<T>, small: &Symbol<T>) -> Result<RationalFunction<T>> {
    match (big.pure_unimodular(), small.pure_unimodular()) {
        (Some(b), Some(s)) => UnimodularSymbol::new(b.theta.mul(&s.alpha), b.alpha.mul(&s.theta)).to_rational(),
        _ => big.to_rational()?.div(&small.to_rational()?),
    }
}

/// `ker T_g` is contained in `ker T_G`. A trivial `ker T_g` is contained in
/// every kernel.
pub fn is_subkernel<T: Scalar>(g: &Symbol<T>, big: &Symbol<T>) -> Result<bool> {
    if g.kernel_dim()? == 0 {
        return Ok(true);
    }
    in_conjugate_smirnov(&quotient(big, g)?)
}

/// `ker T_g = ker T_h`.
pub fn kernels_equal<T: Scalar>(g: &Symbol<T>, h: &Symbol<T>) -> Result<bool> {
    let (dg, dh) = (g.kernel_dim()?, h.kernel_dim()?);
    if dg != dh {
        return Ok(false);
    }
    if dg == 0 {
        return Ok(true);
    }
    if let (Some(a), Some(b)) = (g.pure_unimodular(), h.pure_unimodular()) {
        let tol = T::tolerances().gcd;
        let (ta, aa) = a.reduced();
        let (tb, ab) = b.reduced();
        return Ok(ta.divides(&tb, tol) && tb.divides(&ta, tol) && aa.divides(&ab, tol) && ab.divides(&aa, tol));
    }
    let r = quotient(h, g)?.boundary_conjugate();
    let prof = r.classify(T::tolerances().boundary)?;
    Ok(prof.zeros.n_inside() == 0 && prof.poles.n_inside() == 0)
}

/// Certificate that `f` is maximal in `ker T_g`: `g f = conj(z O)` with `O`
/// outer.
#[derive(Clone, Debug)]
pub struct MaximalFunctionCert<T> {
    pub f: RationalFunction<T>,
    pub symbol: Symbol<T>,
    pub o_witness: RationalFunction<T>,
    /// Outcome of the independent conjugation route (unimodular symbols).
    pub conjugation_outer: Option<bool>,
}

fn sup_rel_diff<T: Scalar>(a: &RationalFunction<T>, b: &RationalFunction<T>) -> T {
    let n = 256;
    a.max_diff_on_circle(b, n) / (T::one() + b.sup_on_circle(n))
}

/// Checks maximality of `f` in `ker T_g`.
pub fn verify_maximal<T: Scalar>(f: &RationalFunction<T>, sym: &Symbol<T>) -> Result<MaximalFunctionCert<T>> {
    let tol = T::tolerances();
    let g = sym.to_rational()?;
    if f.is_zero() || !in_kernel(f, &g)? {
        return Err(Error::NotInKernel);
    }
    let o = g.mul(f)?.shift(1).boundary_conjugate();
    for z in circle_points::<T>(256) {
        let lhs = g.eval(z) * f.eval(z);
        let rhs = (z * o.eval(z)).conj();
        if (lhs - rhs).norm() > tol.check * (T::one() + lhs.norm()) {
            return Err(Error::CrossCheckMismatch("g f differs from conj(z O) on the circle".into()));
        }
    }
    let outer = is_outer(&o)?;
    let conjugation_outer = match sym {
        Symbol::Unimodular(u) => {
            // C f = conj(g z f) assembled from the inner data of the symbol
            let mut rg = u.theta.to_rational().mul(&u.alpha.conj_rational())?;
            if let Some(oo) = &u.outer_ratio {
                rg = rg.mul(oo)?.div(&oo.boundary_conjugate())?;
            }
            let cf = rg.mul(&f.boundary_conjugate().shift(-1))?;
            let via_c = is_outer(&cf)?;
            if via_c != outer || sup_rel_diff(&cf, &o) > tol.check {
                return Err(Error::CrossCheckMismatch("conjugation route disagrees with the witness".into()));
            }
            Some(via_c)
        }
        Symbol::Rational(_) => None,
    };
    if !outer {
        return Err(Error::NotMaximal { reason: "witness R[z g f] is not outer".into() });
    }
    Ok(MaximalFunctionCert { f: f.clone(), symbol: sym.clone(), o_witness: o, conjugation_outer })
}

/// The minimal kernel containing `f = I O`: symbol `conj(z I) conj(O) / O`.
pub fn minimal_kernel_of<T: Scalar>(f: &RationalFunction<T>) -> Result<UnimodularSymbol<T>> {
    let io = inner_outer(f)?;
    let outer_ratio = if io.outer.is_polynomial() && io.outer.num().degree() == 0 { None } else { Some(io.outer) };
    let sym = UnimodularSymbol { theta: BlaschkeProduct::z_pow(1).mul(&io.inner), alpha: BlaschkeProduct::one(), outer_ratio };
    verify_maximal(f, &Symbol::Unimodular(sym.clone())).map_err(|e| match e {
        Error::NotMaximal { .. } | Error::NotInKernel => {
            Error::CrossCheckMismatch(format!("minimal symbol failed its own certificate: {e}"))
        }
        other => other,
    })?;
    Ok(sym)
}

/// `(z - lam) tilde k^I_lam O`: maximal and vanishing at `lam`.
pub fn maximal_vanishing_at<T: Scalar>(fm: &InnerOuter<T>, lam: Cx<T>) -> Result<RationalFunction<T>> {
    if fm.inner.is_constant() {
        return Err(Error::ConstantInnerFactor);
    }
    let (_, kt) = repro_kernels(&fm.inner, lam)?;
    kt.mul_poly(&Polynomial::linear(lam))?.mul(&fm.outer)
}

/// One step of the cascade `I_n = tilde k / k` for `I_{n-1}` at `lam_n`.
#[derive(Clone, Debug)]
pub struct CascadeStep<T> {
    pub lam: Cx<T>,
    /// `I_{n-1}(lam_n)`.
    pub value: Cx<T>,
    /// `1 - conj(I_{n-1}(lam_n)) I_{n-1} = (1 - conj(lam_n) z) k_{lam_n}`.
    pub factor: RationalFunction<T>,
    /// `I_n`.
    pub inner: BlaschkeProduct<T>,
}

/// Runs the cascade, asserting at each step that the two expressions of the
/// outer factor agree and that the degree drops by one.
pub fn cascade<T: Scalar>(i0: &BlaschkeProduct<T>, lams: &[Cx<T>]) -> Result<Vec<CascadeStep<T>>> {
    if i0.degree() < lams.len() {
        return Err(Error::InsufficientDegree { have: i0.degree(), need: lams.len() });
    }
    let tol = T::tolerances().check;
    let mut current = i0.clone();
    let mut steps = Vec::with_capacity(lams.len());
    for &lam in lams {
        let c = current.eval(lam);
        let (k, _) = repro_kernels(&current, lam)?;
        let via_k = k.mul_poly(&Polynomial::new(vec![Cx::one(), -lam.conj()]))?;
        let d = current.denominator();
        let factor = RationalFunction::normalized(&d - &current.numerator().scale(c.conj()), d);
        if sup_rel_diff(&via_k, &factor) > tol {
            return Err(Error::CrossCheckMismatch("cascade outer factor identity failed".into()));
        }
        let next = current.kernel_inner_factor(lam)?;
        if next.degree() + 1 != current.degree() {
            return Err(Error::CrossCheckMismatch("cascade degree did not drop by one".into()));
        }
        steps.push(CascadeStep { lam, value: c, factor, inner: next.clone() });
        current = next;
    }
    Ok(steps)
}

/// Maximal function divisible by `B` (zeros `lams`) and its quotient.
#[derive(Clone, Debug)]
pub struct MaximalCascade<T> {
    /// `F_B = B I_N O_N`, maximal in the original kernel.
    pub f_big: RationalFunction<T>,
    /// `f_B = I_N O_N`, maximal in the kernel of the symbol times `B`.
    pub f_small: RationalFunction<T>,
    pub inner: BlaschkeProduct<T>,
    pub outer: RationalFunction<T>,
    pub steps: Vec<CascadeStep<T>>,
}

pub fn maximal_divisible_by_b<T: Scalar>(fm: &InnerOuter<T>, lams: &[Cx<T>]) -> Result<MaximalCascade<T>> {
    if lams.is_empty() {
        return Err(Error::InvalidInput("at least one point is required".into()));
    }
    let steps = cascade(&fm.inner, lams)?;
    let mut outer = fm.outer.clone();
    for s in &steps {
        outer = outer.mul(&s.factor)?;
    }
    let inner = steps.last().expect("nonempty").inner.clone();
    let f_small = inner.to_rational().mul(&outer)?;
    let b = BlaschkeProduct::from_zeros(lams)?;
    let f_big = b.to_rational().mul(&f_small)?;
    Ok(MaximalCascade { f_big, f_small, inner, outer, steps })
}

/// Lifts a maximal function of `ker T_{G u}` to `u f`, maximal in `ker T_G`.
pub fn lift_maximal<T: Scalar>(
    u: &RationalFunction<T>,
    cert: &MaximalFunctionCert<T>,
    big: &Symbol<T>,
) -> Result<MaximalFunctionCert<T>> {
    u.check_no_circle_poles(T::tolerances().boundary)?;
    if !is_in_h2plus(u)? {
        return Err(Error::InvalidInput("u must be bounded analytic in the disk".into()));
    }
    verify_maximal(&u.mul(&cert.f)?, big)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Cx<f64>;
    type B = BlaschkeProduct<f64>;
    type R = RationalFunction<f64>;
    type P = Polynomial<f64>;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    fn half() -> B {
        B::factor(c(0.5)).unwrap()
    }

    fn example() -> RationalSymbol<f64> {
        let den = P::from_roots(c(1.0), &[c(0.0), c(0.0), c(3.0), c(4.0)]);
        RationalSymbol::new(R::new(P::linear(c(2.0)), den).unwrap()).unwrap()
    }

    #[test]
    fn rational_example_procedure() {
        let k = kernel_of_rational_symbol(&example()).unwrap();
        assert_eq!((k.n, k.n_t, k.n1, k.n2, k.big_n), (2, 0, 1, 2, -3));
        let rep = k.kernel.rep().unwrap();
        assert_eq!(rep.dim(), 2);
        let want = R::new(P::from_roots(c(1.0), &[c(3.0), c(4.0)]), P::linear(c(2.0))).unwrap();
        assert!(rep.multiplier.max_diff_on_circle(&want, 64) < 1e-12);
        let cont = k.containing.unwrap();
        let mut zs: Vec<f64> = cont.zeros().iter().map(|z| z.re).collect();
        zs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(zs.len(), 4);
        assert!(zs[..3].iter().all(|z| z.abs() < 1e-14) && (zs[3] - 0.5).abs() < 1e-12);
        assert!(rep.spans_kernel_of(example().function()).unwrap());
    }

    #[test]
    fn rational_simple_symbols() {
        let k = kernel_of_rational_symbol(&RationalSymbol::new(R::z_pow(-3)).unwrap()).unwrap();
        let rep = k.kernel.rep().unwrap();
        assert_eq!(rep.multiplier, R::one());
        assert_eq!(rep.theta, B::z_pow(3));
        let k = kernel_of_rational_symbol(&RationalSymbol::new(R::from_poly(P::linear(c(2.0)))).unwrap()).unwrap();
        assert!(matches!(k.kernel, Kernel::Trivial));
    }

    #[test]
    fn unimodular_dimension_examples() {
        assert_eq!(kernel_dim_unimodular(&UnimodularSymbol::new(B::z_pow(3), B::one())), 3);
        assert_eq!(kernel_dim_unimodular(&UnimodularSymbol::new(B::z_pow(3), B::z_pow(1))), 2);
        let s = UnimodularSymbol::new(B::z_pow(1).mul(&half()), B::factor(c(1.0 / 3.0)).unwrap());
        assert_eq!(kernel_dim_unimodular(&s), 1);
    }

    #[test]
    fn subkernel_examples() {
        let theta = B::z_pow(1).mul(&half());
        let g = Symbol::unimodular(theta.clone(), B::z_pow(1));
        let big = Symbol::unimodular(theta, B::one());
        assert!(is_subkernel(&g, &big).unwrap());
        assert!(!is_subkernel(&big, &g).unwrap());
        let cont = Symbol::unimodular(B::z_pow(3).mul(&half()), B::one());
        assert!(is_subkernel(&Symbol::Rational(example()), &cont).unwrap());
    }

    #[test]
    fn kernels_equal_examples() {
        let g = Symbol::rational(R::z_pow(-2)).unwrap();
        let h = Symbol::rational(R::new(P::linear(c(0.5)), P::monomial(c(1.0), 3)).unwrap()).unwrap();
        assert!(kernels_equal(&g, &h).unwrap());
        assert!(!kernels_equal(&g, &Symbol::rational(R::z_pow(-3)).unwrap()).unwrap());
        let gi = Symbol::rational(R::z_pow(-2).scale(C::new(0.0, 1.0))).unwrap();
        assert!(kernels_equal(&g, &gi).unwrap());
    }

    #[test]
    fn verify_maximal_examples() {
        let theta = B::z_pow(1).mul(&half());
        let f = theta.to_rational().shift(-1);
        assert!(verify_maximal(&f, &Symbol::unimodular(theta, B::one())).is_ok());
        let z2 = Symbol::unimodular(B::z_pow(2), B::one());
        assert!(matches!(verify_maximal(&R::one(), &z2), Err(Error::NotMaximal { .. })));
        let cert = verify_maximal(&R::from_poly(P::new(vec![c(1.0), c(1.0)])), &z2).unwrap();
        assert_eq!(cert.conjugation_outer, Some(true));
        assert!(matches!(verify_maximal(&R::z_pow(2), &z2), Err(Error::NotInKernel)));
    }

    #[test]
    fn minimal_kernel_examples() {
        let s = minimal_kernel_of(&R::one()).unwrap();
        assert_eq!(kernel_dim_unimodular(&s), 1);
        let s = minimal_kernel_of(&R::z_pow(1)).unwrap();
        assert_eq!(s.theta.degree(), 2);
        let f = R::from_poly(P::new(vec![c(1.0), c(-0.5)]));
        let s = minimal_kernel_of(&f).unwrap();
        assert!(s.outer_ratio.is_some());
        assert_eq!(Symbol::Unimodular(s).kernel_dim().unwrap(), 1);
    }

    #[test]
    fn maximal_vanishing_examples() {
        let fm = InnerOuter { inner: B::z_pow(1), outer: R::one() };
        assert!(maximal_vanishing_at(&fm, c(0.0)).unwrap().max_diff_on_circle(&R::z_pow(1), 64) < 1e-14);
        let fm = InnerOuter { inner: B::z_pow(2), outer: R::one() };
        let f = maximal_vanishing_at(&fm, c(0.3)).unwrap();
        let want = R::from_poly(P::new(vec![c(-0.09), c(0.0), c(1.0)]));
        assert!(f.max_diff_on_circle(&want, 64) < 1e-14);
        assert!(verify_maximal(&f, &Symbol::unimodular(B::z_pow(3), B::one())).is_ok());
        let fm = InnerOuter { inner: half().mul(&B::z_pow(1)), outer: R::one() };
        let f = maximal_vanishing_at(&fm, c(0.0)).unwrap();
        let sym = Symbol::unimodular(half().mul(&B::z_pow(2)), B::one());
        assert!(verify_maximal(&f, &sym).is_ok());
        assert_eq!(
            maximal_vanishing_at(&InnerOuter { inner: B::one(), outer: R::one() }, c(0.0)).unwrap_err(),
            Error::ConstantInnerFactor
        );
    }

    #[test]
    fn cascade_examples() {
        let fm = InnerOuter { inner: B::z_pow(2), outer: R::one() };
        let m = maximal_divisible_by_b(&fm, &[c(0.0)]).unwrap();
        assert_eq!(m.inner, B::z_pow(1));
        assert!(m.f_big.max_diff_on_circle(&R::z_pow(2), 64) < 1e-14);
        let z3 = Symbol::unimodular(B::z_pow(3), B::one());
        assert!(verify_maximal(&m.f_big, &z3).is_ok());
        assert!(verify_maximal(&m.f_small, &z3.times_inner(&B::z_pow(1)).unwrap()).is_ok());

        let m = maximal_divisible_by_b(&fm, &[c(0.0), c(0.0)]).unwrap();
        assert!(m.f_small.max_diff_on_circle(&R::one(), 64) < 1e-14);
        assert_eq!(
            maximal_divisible_by_b(&fm, &[c(0.0), c(0.1), c(0.2)]).unwrap_err(),
            Error::InsufficientDegree { have: 2, need: 3 }
        );

        let theta = B::z_pow(2).mul(&half());
        let (_, kt) = repro_kernels(&theta, c(0.0)).unwrap();
        let fm = inner_outer(&kt).unwrap();
        let m = maximal_divisible_by_b(&fm, &[c(0.3)]).unwrap();
        let sym = Symbol::unimodular(theta, B::one());
        assert!(verify_maximal(&m.f_big, &sym).is_ok());
        let sub = sym.times_inner(&B::factor(c(0.3)).unwrap()).unwrap();
        assert!(verify_maximal(&m.f_small, &sub).is_ok());
        assert_eq!(sub.kernel_dim().unwrap(), 2);
    }

    #[test]
    fn lift_examples() {
        let z3 = Symbol::unimodular(B::z_pow(3), B::one());
        let cert = verify_maximal(&R::z_pow(2), &z3).unwrap();
        let lifted = lift_maximal(&R::one(), &cert, &z3).unwrap();
        assert!(lifted.f.max_diff_on_circle(&R::z_pow(2), 64) < 1e-14);

        let u = R::from_poly(P::new(vec![c(1.0), c(-0.5)]));
        let gu = Symbol::rational(R::z_pow(-3).mul(&u).unwrap()).unwrap();
        assert_eq!(gu.kernel_dim().unwrap(), 3);
        // p has both zeros in the disk, so p is maximal in K_{z^3} and p / u in ker T_{G u}
        let p = R::from_poly(P::from_roots(c(1.0), &[c(0.2), c(-0.5)]));
        let f = p.div(&u).unwrap();
        let cert = verify_maximal(&f, &gu).unwrap();
        let lifted = lift_maximal(&u, &cert, &z3).unwrap();
        assert!(lifted.o_witness.num().degree() <= 2);

        let a = B::factor(c(0.4)).unwrap();
        let ga = z3.times_inner(&a).unwrap();
        let fm = maximal_divisible_by_b(&InnerOuter { inner: B::z_pow(2), outer: R::one() }, &[c(0.4)]).unwrap();
        let cert = verify_maximal(&fm.f_small, &ga).unwrap();
        assert!(lift_maximal(&a.to_rational(), &cert, &z3).is_ok());
    }
}
