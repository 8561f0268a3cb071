//! Symbolic kernels checked against the truncated-Toeplitz oracle.

use num_complex::Complex;
use toepkern::frostman::{cor610_representation, frostman_kernel_rep, Perturbation};
use toepkern::kernel::{kernel_of_rational_symbol, RationalSymbol};
use toepkern::oracle::{check_against_oracle, numerical_kernel, subspace_angle, NumericalSubspace};
use toepkern::representations::represent_blaschke;
use toepkern::{Blaschke64, KernelRep64, Poly64, Rational64};

type C = Complex<f64>;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn span_of(rep: &KernelRep64, m: usize) -> NumericalSubspace<f64> {
    NumericalSubspace::from_functions(&rep.basis().unwrap().elements, m, 1e-12).unwrap()
}

fn assert_oracle(g: &Rational64, rep: &KernelRep64) {
    let r = check_against_oracle(g, &rep.basis().unwrap().elements, None, 1e-8).unwrap();
    assert!(r.agrees(1e-6), "{r:?}");
}

#[test]
fn worked_example_at_size_32() {
    let den = Poly64::from_roots(c(1.0), &[c(0.0), c(0.0), c(3.0), c(4.0)]);
    let g = Rational64::new(Poly64::linear(c(2.0)), den).unwrap();
    let k = kernel_of_rational_symbol(&RationalSymbol::new(g.clone()).unwrap()).unwrap();
    let rep = k.kernel.rep().unwrap();
    let r = check_against_oracle(&g, &rep.basis().unwrap().elements, Some(32), 1e-8).unwrap();
    assert_eq!((r.size, r.numerical_dim, r.dim_doubled), (32, 2, 2));
    assert!(r.angle.unwrap() < 1e-6);
    // frozen oracle output: the four smallest singular values at M = 32
    let nk = numerical_kernel(&g, 32, 1e-8).unwrap();
    let n = nk.singular_values.len();
    assert!(nk.singular_values[n - 1] < 1e-9 && nk.singular_values[n - 2] < 1e-9);
    assert!(nk.singular_values[n - 3] > 1e-3);
}

#[test]
fn rational_symbols_match_oracle() {
    let cases: Vec<(Vec<C>, Vec<C>)> = vec![
        (vec![c(2.0)], vec![c(0.0), c(0.0), c(3.0), c(4.0)]),
        (vec![C::new(0.0, 1.5)], vec![c(0.3), c(-0.4), c(0.0)]),
        (vec![c(0.5), c(2.5)], vec![c(0.1), c(0.2), c(0.3), c(-2.0)]),
        (vec![], vec![C::new(0.2, 0.2), c(0.0)]),
    ];
    for (zeros, poles) in cases {
        let g = Rational64::new(Poly64::from_roots(c(1.0), &zeros), Poly64::from_roots(c(1.0), &poles)).unwrap();
        let k = kernel_of_rational_symbol(&RationalSymbol::new(g.clone()).unwrap()).unwrap();
        let rep = k.kernel.rep().expect("nontrivial");
        assert_oracle(&g, rep);
    }
    let g = Rational64::from_poly(Poly64::linear(c(2.0)));
    let k = kernel_of_rational_symbol(&RationalSymbol::new(g.clone()).unwrap()).unwrap();
    assert_eq!(k.kernel.dim(), 0);
    assert_eq!(numerical_kernel(&g, 16, 1e-8).unwrap().dim(), 0);
}

#[test]
fn blaschke_representations_match_oracle() {
    let theta = Blaschke64::from_zeros(&[c(0.0), c(0.0), c(0.5)]).unwrap();
    let lams = [c(0.3), c(-0.2)];
    let (plain, iso, hay) = represent_blaschke(&theta, &lams).unwrap();
    let g = theta.conj_rational().mul(&Blaschke64::from_zeros(&lams).unwrap().to_rational()).unwrap();
    for rep in [&plain, &iso, &hay] {
        assert_oracle(&g, rep);
    }
    let m = 64;
    assert!(subspace_angle(&span_of(&plain, m), &span_of(&iso, m)).unwrap() < 1e-7);
}

#[test]
fn perturbation_kernels_have_dimension_deg_theta() {
    let theta = Blaschke64::from_zeros(&[c(0.0), c(0.4), C::new(-0.3, 0.5)]).unwrap();
    let h = Rational64::from_poly(Poly64::new(vec![C::new(0.2, 0.1), C::new(-0.3, 0.2)]));
    let p = Perturbation::new(theta.clone(), h).unwrap();
    let rep = frostman_kernel_rep(&p).unwrap();
    assert_oracle(&p.symbol().unwrap(), &rep);

    let alpha = Blaschke64::factor(c(0.4)).unwrap();
    let cor = cor610_representation(&theta, &alpha, c(0.25), C::new(0.1, -0.3)).unwrap();
    let h = Rational64::constant(c(0.25)).sub(&alpha.to_rational().scale(C::new(0.1, -0.3))).unwrap();
    let p = Perturbation::new(theta, h).unwrap();
    assert_oracle(&p.symbol().unwrap(), &cor.rep);
    let direct = frostman_kernel_rep(&p).unwrap();
    assert!(subspace_angle(&span_of(&cor.rep, 96), &span_of(&direct, 96)).unwrap() < 1e-7);
}
