//! Randomized properties of bodies, generators, quadrature and divergences.

use std::f64::consts::PI;

use fdiv_core::body::{Polytope, RoundedPolygon, Smooth2d};
use fdiv_core::measure::p_mass_where_curved;
use fdiv_core::quadrature::{circle_rule, integrate_boundary, integrate_sphere, sphere3_rule};
use fdiv_core::*;
use proptest::prelude::*;

fn smooth_body(c2: f64, s3: f64, c4: f64) -> Body {
    Smooth2d::fourier(vec![1.0, 0.0, c2, 0.0, c4], vec![0.0, 0.0, 0.0, s3]).unwrap().into()
}

/// Matrices with singular values in [0.3, 3] and condition number at most 10.
fn matrix() -> impl Strategy<Value = Matrix<f64>> {
    (0.0..2.0 * PI, 0.0..2.0 * PI, 0.3..3.0f64, 1.0..10.0f64, any::<bool>()).prop_map(|(a, b, s, c, flip)| {
        let d = Matrix::diagonal(&[s, if flip { -s / c } else { s / c }]);
        &(&Matrix::rotation2(a) * &d) * &Matrix::rotation2(b)
    })
}

fn coefficients() -> impl Strategy<Value = (f64, f64, f64)> {
    (-0.08..0.08f64, -0.05..0.05f64, -0.02..0.02f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn support_of_linear_image((c2, s3, c4) in coefficients(), t in matrix(), angle in 0.0..2.0 * PI) {
        let bodies = [smooth_body(c2, s3, c4), Body::ellipse(2.0, 0.7).unwrap(), Polytope::regular_polygon(5, 1.0, 0.2).unwrap().into()];
        let u = [angle.cos(), angle.sin()];
        let tu = t.transpose().apply(&u);
        let r = (tu[0] * tu[0] + tu[1] * tu[1]).sqrt();
        for k in &bodies {
            let img = k.linear_image(&t).unwrap();
            let expected = r * k.support(&[tu[0] / r, tu[1] / r]).unwrap();
            prop_assert!((img.support(&u).unwrap() - expected).abs() < 1e-9 * expected.max(1.0));
            prop_assert!((img.volume() - t.det().abs() * k.volume()).abs() < 1e-9 * img.volume());
        }
    }

    #[test]
    fn curvature_times_radius_is_one((c2, s3, c4) in coefficients(), t in matrix(), angle in 0.0..2.0 * PI) {
        for k in [smooth_body(c2, s3, c4), smooth_body(c2, s3, c4).linear_image(&t).unwrap(), Body::ellipse(3.0, 0.5).unwrap()] {
            let b = k.boundary_point_at_angle(angle).unwrap();
            prop_assert!((b.curvature * b.curvature_function.finite().unwrap() - 1.0).abs() < 1e-9);
            let u = [angle.cos(), angle.sin()];
            prop_assert!((b.support - k.support(&u).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn adjoint_involution(alpha in prop_oneof![-3.0..-0.1f64, 1.0..4.0f64], t in 1e-3..1e3f64) {
        let f = Gen::standard(StandardKind::Power(alpha)).unwrap();
        let ff = f.adjoint().adjoint();
        prop_assert!((ff.eval(t) - f.eval(t)).abs() <= 1e-12 * f.eval(t).abs().max(1e-300));
        let g = Gen::standard(StandardKind::Power(1.0 - alpha)).unwrap();
        prop_assert!((f.adjoint().eval(t) - g.eval(t)).abs() <= 1e-12 * g.eval(t));
    }

    #[test]
    fn duality_on_distinct_paths((c2, s3, c4) in coefficients(), alpha in 2.0..4.0f64) {
        let k = smooth_body(c2, s3, c4);
        let f = Gen::standard(StandardKind::Power(alpha)).unwrap();
        let g = Gen::standard(StandardKind::Power(1.0 - alpha)).unwrap();
        let qp = f_divergence(&f, &k, Direction::QP, Normalization::Normalized).unwrap().value.finite().unwrap();
        let pq = f_divergence(&g, &k, Direction::PQ, Normalization::Normalized).unwrap().value.finite().unwrap();
        prop_assert!((qp - pq).abs() <= 1e-10 * pq.abs());
    }

    #[test]
    fn linear_generator_identity(a in -2.0..2.0f64, b in -2.0..2.0f64, (c2, s3, c4) in coefficients(), eps in 0.01..0.5f64) {
        let cfg = QuadratureConfig::default();
        let f = Gen::standard(StandardKind::Linear { a, b }).unwrap();
        let bodies: Vec<Body> = vec![
            smooth_body(c2, s3, c4),
            Body::ellipse(1.5, 0.5).unwrap(),
            Polytope::regular_polygon(7, 1.0, 0.0).unwrap().into(),
            RoundedPolygon::new(Polytope::regular_polygon(5, 1.0, 0.1).unwrap(), eps).unwrap().into(),
        ];
        for k in &bodies {
            let d = f_divergence_with(&f, k, Direction::PQ, Normalization::Normalized, &cfg).unwrap().value.finite().unwrap();
            let expected = a * p_mass_where_curved(k, &cfg).unwrap() + b;
            prop_assert!((d - expected).abs() < 1e-9, "{:?}: {} vs {}", k.kind(), d, expected);
        }
    }

    #[test]
    fn lower_bound_for_convex_generators((c2, s3, c4) in coefficients(), alpha in prop_oneof![-2.0..-0.2f64, 1.2..3.0f64]) {
        let k = smooth_body(c2, s3, c4);
        let f = Gen::standard(StandardKind::Power(alpha)).unwrap();
        for dir in [Direction::PQ, Direction::QP] {
            let d = f_divergence(&f, &k, dir, Normalization::Normalized).unwrap().value.finite().unwrap();
            prop_assert!(d >= f.at_one() - 1e-9);
        }
        let kl = kl_divergence(&k, Direction::PQ, &QuadratureConfig::default()).unwrap().value.finite().unwrap();
        prop_assert!(kl >= -1e-12);
    }
}

#[test]
fn error_estimates_bound_true_errors() {
    // ellipse area ½∫ h f_K dσ and ball perimeter at coarse resolutions
    let mut bounded = 0;
    let mut trials = 0;
    for m in (16..=96).step_by(4) {
        for (a, b) in [(1.0, 1.0), (2.0, 1.0), (3.0, 0.5), (1.2, 0.9), (4.0, 1.0)] {
            let cfg = QuadratureConfig { circle_nodes: m, ..Default::default() };
            let e = Body::ellipse(a, b).unwrap();
            let est = integrate_boundary(&e, |p| 0.5 * p.support, &cfg).unwrap();
            let truth = PI * a * b;
            trials += 1;
            if (est.value - truth).abs() <= est.error.max(1e-14 * truth) {
                bounded += 1;
            }
        }
    }
    assert!(bounded as f64 >= 0.95 * trials as f64, "{bounded}/{trials}");
}

#[test]
fn boundary_integrals_from_examples() {
    let cfg = QuadratureConfig::default();
    let disk = Body::unit_disk();
    let per = integrate_boundary(&disk, |_| 1.0, &cfg).unwrap();
    assert!((per.value - 2.0 * PI).abs() < 1e-13);
    let e = Body::ellipse(2.0, 1.0).unwrap();
    let per = integrate_boundary(&e, |_| 1.0, &cfg).unwrap();
    assert!((per.value - 9.688448220547675).abs() < 1e-12);
    // ∫⟨x, N⟩ dμ = n|K|; a thin rounding approaches the square's value 8
    let r: Body = RoundedPolygon::new(Polytope::cube(2, 1.0).unwrap(), 1e-6).unwrap().into();
    let v = integrate_boundary(&r, |p| p.support, &cfg).unwrap();
    assert!((v.value - 2.0 * r.volume()).abs() < 1e-12);
    assert!((v.value - 8.0).abs() < 1e-4);
    let sq: Body = Polytope::cube(2, 1.0).unwrap().into();
    assert!(integrate_boundary(&sq, |_| 1.0, &cfg).is_err());
}

#[test]
fn flat_pieces_never_reach_the_integrand_with_zero_curvature_function() {
    let cfg = QuadratureConfig::default();
    let r: Body = RoundedPolygon::new(Polytope::regular_polygon(6, 1.0, 0.0).unwrap(), 0.2).unwrap().into();
    // 1/f_K is the curvature; arcs have f_K = ε, sides f_K = ∞ and the integrand sees κ = 0 there
    let total = integrate_boundary(&r, |p| {
        assert!(p.curvature_function != Extended::zero());
        p.curvature
    }, &cfg).unwrap();
    assert!((total.value - 2.0 * PI).abs() < 1e-12);
}

#[test]
fn polar_volumes_by_sphere_integral() {
    // |K°| = (1/n) ∫ h^{−n} dσ
    let circle = circle_rule::<f64>(1 << 16).unwrap();
    let bodies: Vec<Body> = vec![
        Body::ellipse(2.0, 0.5).unwrap(),
        Polytope::cube(2, 1.0).unwrap().into(),
        Polytope::regular_polygon(7, 1.3, 0.1).unwrap().into(),
    ];
    for k in &bodies {
        let q = integrate_sphere(&circle, |u| k.support(u).unwrap().powi(-2)) / 2.0;
        assert!((q - k.polar_volume()).abs() < 1e-6 * k.polar_volume(), "{:?}: {q} vs {}", k.kind(), k.polar_volume());
    }
    let sphere = sphere3_rule::<f64>(96).unwrap();
    let e: Body = fdiv_core::body::Ellipsoid::axis_aligned(&[1.0, 2.0, 0.5]).unwrap().into();
    let q = integrate_sphere(&sphere, |u| e.support(u).unwrap().powi(-3)) / 3.0;
    assert!((q - e.polar_volume()).abs() < 1e-6 * e.polar_volume());
    // edge kinks give a clean O(level⁻²) error for the cube; one Richardson step removes it
    let cube: Body = Polytope::cube(3, 1.0).unwrap().into();
    let at = |level| {
        let rule = sphere3_rule::<f64>(level).unwrap();
        integrate_sphere(&rule, |u| cube.support(u).unwrap().powi(-3)) / 3.0
    };
    let q = (4.0 * at(512) - at(256)) / 3.0;
    assert!((q - 4.0 / 3.0).abs() < 1e-6 * 4.0 / 3.0, "cube polar {q}");
}

#[test]
fn bit_identical_across_thread_counts() {
    let k = smooth_body(0.05, 0.03, 0.01);
    let f = Gen::standard(StandardKind::Power(3.0)).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
            let d = f_divergence(&f, &k, Direction::QP, Normalization::Tilde).unwrap();
            let m = mixed_divergence(&[k.clone(), k.clone()], &[f.clone(), f.clone()], Direction::PQ, &QuadratureConfig::default()).unwrap();
            (d.value.finite().unwrap().to_bits(), d.error.to_bits(), m.value.finite().unwrap().to_bits())
        })
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}
