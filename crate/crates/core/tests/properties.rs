use num_complex::Complex64;
use proptest::prelude::*;
use toeplab_core::boundary_core::{inner_product, outer_test, BoundaryFunction, HardyFunction, OuterVerdict, ONE};
use toeplab_core::conjugation_lab::{conjugate_in_kernel, ConjugationContext};
use toeplab_core::factorization::{inner_outer, maximal_test, maximal_test_by_zero_count};
use toeplab_core::inner_functions::{make_inner, model_kernels, model_projection, InnerSpec};
use toeplab_core::toeplitz_engine::{near_invariance_residuals, numerical_kernel, residual_in_kernel, ToeplitzSymbol};
use toeplab_core::GridConfig;

fn cfg() -> GridConfig {
    GridConfig::default()
}

fn point(r_max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn zeros(max: usize, r_max: f64) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(point(r_max), 1..=max)
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b)), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn blaschke_kernel_dimension_is_zero_count(z in zeros(5, 0.8)) {
        let theta = make_inner(InnerSpec::blaschke(&z), cfg()).unwrap();
        let k = numerical_kernel(&ToeplitzSymbol::conj_inner(&theta), 128).unwrap();
        prop_assert_eq!(k.dimension, z.len());
        prop_assert!(k.max_residual() <= cfg().tol_residual);
    }

    #[test]
    fn rotating_the_zeros_keeps_the_dimension(z in zeros(4, 0.8), phi in 0.0..std::f64::consts::TAU) {
        let rot = Complex64::from_polar(1.0, phi);
        let turned: Vec<Complex64> = z.iter().map(|w| w * rot).collect();
        let a = make_inner(InnerSpec::blaschke(&z), cfg()).unwrap();
        let b = make_inner(InnerSpec::blaschke(&turned), cfg()).unwrap();
        let ka = numerical_kernel(&ToeplitzSymbol::conj_inner(&a), 128).unwrap();
        let kb = numerical_kernel(&ToeplitzSymbol::conj_inner(&b), 128).unwrap();
        prop_assert_eq!(ka.dimension, kb.dimension);
    }

    #[test]
    fn kernel_bases_are_nearly_backward_shift_invariant(z in zeros(4, 0.8), n in 0u32..3) {
        let theta = make_inner(InnerSpec::blaschke(&z).times(&InnerSpec::monomial(n)), cfg()).unwrap();
        let g = ToeplitzSymbol::conj_inner(&theta);
        let k = numerical_kernel(&g, 128).unwrap();
        let worst = near_invariance_residuals(&g, &k.vectors).unwrap().into_iter().fold(0.0, f64::max);
        prop_assert!(worst <= 1e-6, "residual {worst}");
    }

    #[test]
    fn conjugation_is_an_antilinear_isometric_involution(z in zeros(4, 0.8), p in coeffs(6), q in coeffs(6)) {
        let theta = make_inner(InnerSpec::blaschke(&z), cfg()).unwrap();
        let ctx = ConjugationContext::new(ToeplitzSymbol::conj_inner(&theta)).unwrap();
        let f = model_projection(&theta, &BoundaryFunction::polynomial(cfg(), &p));
        let g = model_projection(&theta, &BoundaryFunction::polynomial(cfg(), &q));
        let cf = conjugate_in_kernel(&ctx, &f).unwrap();
        let cg = conjugate_in_kernel(&ctx, &g).unwrap();
        prop_assert!(conjugate_in_kernel(&ctx, &cf).unwrap().distance(&f) <= 1e-10);
        prop_assert!((cf.norm() - f.norm()).abs() <= 1e-10);
        prop_assert!((inner_product(&cf, &cg) - inner_product(&g, &f)).norm() <= 1e-10);
        let mix = Complex64::new(0.3, -0.7);
        let lhs = conjugate_in_kernel(&ctx, &f.plus(&g.scale(mix))).unwrap();
        let rhs = cf.plus(&cg.scale(mix.conj()));
        prop_assert!(lhs.distance(&rhs) <= 1e-10);
    }

    #[test]
    fn inner_outer_reconstructs(inside in zeros(3, 0.8), outside in zeros(2, 0.6)) {
        // Zeros at 1/conj(w), |w| < 0.6, lie outside the closed disk.
        let f = HardyFunction::from_fn(cfg(), |z| {
            let a = inside.iter().fold(ONE, |acc, w| acc * (z - w));
            outside.iter().fold(a, |acc, w| acc * (ONE - w.conj() * z))
        });
        let p = inner_outer(&f).unwrap();
        prop_assert!(p.residual <= 1e-8, "residual {}", p.residual);
        prop_assert_eq!(outer_test(&p.outer).unwrap().verdict, OuterVerdict::Outer);
        prop_assert!(p.inner.unimodular_defect() <= 1e-8);
    }

    #[test]
    fn conjugate_kernels_are_maximal_by_both_routes(z in zeros(3, 0.8), lambda in point(0.6)) {
        let theta = make_inner(InnerSpec::blaschke(&z), cfg()).unwrap();
        let g = ToeplitzSymbol::conj_inner(&theta);
        let pair = model_kernels(&theta, lambda).unwrap();
        prop_assert!(maximal_test(&g, &pair.k_tilde).unwrap().maximal);
        prop_assert!(maximal_test_by_zero_count(&g, &pair.k_tilde).unwrap().maximal);
        let shifted = pair.k_tilde.shift(1);
        let direct = maximal_test(&g, &shifted);
        prop_assert!(direct.map(|c| !c.maximal).unwrap_or(true));
    }

    #[test]
    fn multiplier_moves_kernels(z in zeros(3, 0.7), p in point(0.7), d in point(0.7)) {
        let theta = make_inner(InnerSpec::blaschke(&z), cfg()).unwrap();
        let h = ToeplitzSymbol::conj_inner(&theta);
        let w = BoundaryFunction::from_fn(cfg(), |x| (ONE - p * x) / (ONE - d * x));
        let g = ToeplitzSymbol::new(&h.boundary * &(&w.conj() / &w));
        for v in numerical_kernel(&h, 128).unwrap().vectors {
            prop_assert!(residual_in_kernel(&g, &(&w * v.boundary())).unwrap() <= 1e-8);
        }
    }
}
