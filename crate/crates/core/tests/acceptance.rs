//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fdiv_core::body::{Polytope, Smooth2d};
use fdiv_core::surface_body::{divergence_via_limit, limit_estimate};
use fdiv_core::verify::{check_gl_invariance, check_valuation};
use fdiv_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn power(a: f64) -> Gen {
    Gen::standard(StandardKind::Power(a)).unwrap()
}

fn kl() -> Gen {
    Gen::standard(StandardKind::Kl).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn finite(r: &DivergenceResult<f64>) -> Result<f64, String> {
    r.value.finite().ok_or_else(|| format!("unexpected infinite value {}", r.value))
}

fn ellipsoid_law() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0f64;
    for (a, b) in [(1.0, 1.0), (2.0, 1.0), (3.0, 0.5)] {
        let body = Body::ellipse(a, b).map_err(|e| e.to_string())?;
        for f in [power(2.0), power(3.0), kl(), power(-1.0)] {
            for dir in [Direction::PQ, Direction::QP] {
                let exact = f_divergence_with(&f, &body, dir, Normalization::Normalized, &cfg).map_err(|e| e.to_string())?;
                ensure(
                    exact.value == Extended::Finite(f.at_one()) && exact.error == 0.0 && exact.branch == Branch::ExactEllipsoid,
                    || format!("exact branch for ({a},{b}) {}: {exact:?}", f.label()),
                )?;
                let quad = f_divergence_with(&f, &body, dir, Normalization::Normalized, &cfg.forced()).map_err(|e| e.to_string())?;
                let dev = (finite(&quad)? - f.at_one()).abs() / f.at_one().abs().max(1.0);
                worst = worst.max(dev);
                ensure(dev <= 1e-6, || format!("quadrature ({a},{b}) {} {dir:?}: deviation {dev:e}", f.label()))?;
            }
        }
    }
    Ok(format!("exact branch = f(1); forced quadrature max rel deviation {worst:.2e}"))
}

fn polytope_law() -> Outcome {
    let bodies: Vec<(&str, Body)> = vec![
        ("square", Polytope::cube(2, 1.0).unwrap().into()),
        ("hexagon", Polytope::regular_polygon(6, 1.0, 0.0).unwrap().into()),
        ("cube", Polytope::cube(3, 1.0).unwrap().into()),
    ];
    let gens = [power(2.0), power(3.0), kl(), power(-1.0), Gen::standard(StandardKind::Linear { a: -1.0, b: 2.0 }).unwrap()];
    let mut infinities = 0;
    for (name, body) in &bodies {
        for f in &gens {
            let pq = f_divergence(f, body, Direction::PQ, Normalization::Normalized).map_err(|e| e.to_string())?;
            let qp = f_divergence(f, body, Direction::QP, Normalization::Normalized).map_err(|e| e.to_string())?;
            ensure(pq.value == f.at_zero() && pq.error == 0.0, || format!("{name} {} PQ = {}", f.label(), pq.value))?;
            ensure(qp.value == f.adjoint_at_zero() && qp.error == 0.0, || format!("{name} {} QP = {}", f.label(), qp.value))?;
            infinities += [pq.value, qp.value].iter().filter(|v| **v == Extended::PosInf).count();
        }
    }
    let kl_qp = f_divergence(&kl(), &bodies[0].1, Direction::QP, Normalization::Normalized).unwrap();
    ensure(kl_qp.value == Extended::PosInf, || "kl QP on the square must be +inf".into())?;
    Ok(format!("PQ = f(0), QP = f*(0) on 3 polytopes x 5 generators ({infinities} infinite values)"))
}

/// `∫ κ^{1/3} ds` around the ellipse by the trapezoid rule in the
/// parametrization `(a cos t, b sin t)`.
fn affine_length_oracle(a: f64, b: f64, m: usize) -> f64 {
    let dt = 2.0 * PI / m as f64;
    (0..m)
        .map(|j| {
            let t = j as f64 * dt;
            let speed2 = a * a * t.sin().powi(2) + b * b * t.cos().powi(2);
            let kappa = a * b / speed2.powf(1.5);
            kappa.cbrt() * speed2.sqrt() * dt
        })
        .sum()
}

fn lp_asa_closed_forms() -> Outcome {
    let cfg = QuadratureConfig::default();
    let disk = Body::unit_disk();
    let mut worst = 0.0f64;
    for p in [-3.0, 1.0, 2.0] {
        let r = lp_asa(p, &disk, &cfg).map_err(|e| e.to_string())?;
        let dev = (finite(&r.result)? - 2.0 * PI).abs();
        worst = worst.max(dev);
        ensure(dev <= 1e-10, || format!("disk p={p}: deviation {dev:e}"))?;
    }
    let e = Body::ellipse(2.0, 1.0).unwrap();
    let value = finite(&lp_asa(1.0, &e, &cfg).map_err(|e| e.to_string())?.result)?;
    let oracle = affine_length_oracle(2.0, 1.0, 20000);
    let closed = 2.0 * PI * 2f64.cbrt();
    ensure((oracle - closed).abs() <= 1e-9, || format!("oracle {oracle} disagrees with {closed}"))?;
    let dev = (value - oracle).abs();
    ensure(dev <= 1e-6, || format!("ellipse p=1: {value} vs oracle {oracle}"))?;
    Ok(format!("disk max deviation {worst:.1e}; ellipse affine length {value:.12} (oracle dev {dev:.1e})"))
}

fn surface_limits() -> Outcome {
    let ladder = LadderConfig { s0: 0.2, halvings: 6, directions: 1024 };
    let cases = [
        ("disk g=1", Body::unit_disk(), 1.0, 2.0 * PI, 0.01),
        ("disk g=2", Body::unit_disk(), 2.0, PI / 2.0, 0.01),
        ("ellipse g=1", Body::ellipse(2.0, 1.0).unwrap(), 1.0, 2.0 * PI, 0.015),
    ];
    let mut parts = Vec::new();
    for (name, body, g, target, tol) in cases {
        let wb = WeightedBody::new(body, Weight::constant(g)).map_err(|e| e.to_string())?;
        let est = limit_estimate(&wb, &ladder).map_err(|e| e.to_string())?;
        let rel = (est.limit - target).abs() / target;
        ensure(rel <= tol, || format!("{name}: {} vs {target} (rel {rel:e})", est.limit))?;
        parts.push(format!("{name} rel {rel:.1e}"));
    }
    Ok(parts.join(", "))
}

fn limit_matches_direct() -> Outcome {
    let cfg = QuadratureConfig::default();
    let ladder = LadderConfig { s0: 0.2, halvings: 6, directions: 1024 };
    let f = power(2.0);
    let mut parts = Vec::new();
    for (name, body) in [("disk", Body::unit_disk()), ("ellipse", Body::ellipse(2.0, 1.0).unwrap())] {
        let via = divergence_via_limit(&body, &f, Direction::PQ, &ladder, &cfg).map_err(|e| e.to_string())?;
        let direct = finite(&f_divergence(&f, &body, Direction::PQ, Normalization::Normalized).map_err(|e| e.to_string())?)?;
        let rel = (via.limit - direct).abs() / direct.abs();
        ensure(rel <= 0.02, || format!("{name}: limit {} vs {direct}", via.limit))?;
        parts.push(format!("{name} rel {rel:.1e}"));
    }
    Ok(parts.join(", "))
}

/// `R(a) diag(σ₁, σ₂) R(b)` with optional reflection.
fn random_map(rng: &mut ChaCha8Rng, unimodular: bool) -> Matrix<f64> {
    let (s1, s2) = if unimodular {
        let s = rng.gen_range(1.0..10f64.sqrt());
        (s, 1.0 / s)
    } else {
        let s1 = rng.gen_range(0.3..3.0);
        (s1, s1 / rng.gen_range(1.0..10.0))
    };
    let flip = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
    let a = Matrix::rotation2(rng.gen_range(0.0..2.0 * PI));
    let b = Matrix::rotation2(rng.gen_range(0.0..2.0 * PI));
    let d = Matrix::diagonal(&[s1, flip * s2]);
    &(&a * &d) * &b
}

fn smooth_test_body() -> Body {
    Smooth2d::fourier(vec![1.0, 0.0, 0.0, 0.1], vec![0.0, 0.0, 0.05]).unwrap().into()
}

fn invariance_suite() -> Outcome {
    let cfg = QuadratureConfig::default().forced();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = power(2.0);
    let bodies = [("disk", Body::unit_disk()), ("smooth2d", smooth_test_body())];
    let mut worst = f64::INFINITY;
    let mut checks = 0;
    for unimodular in [false, true] {
        for _ in 0..20 {
            let t = random_map(&mut rng, unimodular);
            for (name, body) in &bodies {
                let report = check_gl_invariance(body, &f, &t, 1e-6, &cfg).map_err(|e| e.to_string())?;
                ensure(!unimodular || report.row("tilde_pq").is_some(), || "det-1 map lost the tilde rows".into())?;
                ensure(report.passed(), || format!("{name}: {report:?}"))?;
                for row in &report.rows {
                    worst = worst.min(row.slack.finite().unwrap_or(f64::INFINITY));
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} comparisons, minimum slack {worst:.2e}"))
}

fn valuation_suite() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for (name, body) in [("disk", Body::unit_disk()), ("ellipse", Body::ellipse(2.0, 1.0).unwrap())] {
        for _ in 0..10 {
            let angle = rng.gen_range(0.0..2.0 * PI);
            let e = [angle.cos(), angle.sin()];
            let top = body.support(&e).unwrap();
            let bottom = body.support(&[-e[0], -e[1]]).unwrap();
            let t_minus = -rng.gen_range(0.05..0.9) * bottom;
            let t_plus = rng.gen_range(0.05..0.9) * top;
            for f in [power(2.0), power(3.0)] {
                let r = check_valuation(&body, e, t_minus, t_plus, &f, 1e-4, &cfg).map_err(|e| e.to_string())?;
                let row = &r.rows[0];
                let (l, rr) = (row.lhs.finite().unwrap(), row.rhs.finite().unwrap());
                let defect = (l - rr).abs() / rr.abs();
                worst = worst.max(defect);
                ensure(r.passed(), || format!("{name} slab [{t_minus}, {t_plus}] {}: defect {defect:e}", f.label()))?;
            }
        }
    }
    Ok(format!("40 slab identities, max relative defect {worst:.1e}"))
}

fn random_fourier(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let mut cos = vec![1.0];
    let mut sin = vec![0.0];
    let mut budget = 0.0;
    for k in 1..=5 {
        let (c, s): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        budget += (c.hypot(s)) * ((k * k - 1) as f64).max(1.0);
        cos.push(c);
        sin.push(s);
    }
    // h + h'' = 1 + Σ (1 − k²)(c_k cos kθ + s_k sin kθ) and h itself stay ≥ 1 − 0.6
    let scale = rng.gen_range(0.01..0.6) / budget;
    for k in 1..=5 {
        cos[k] *= scale;
        sin[k] *= scale;
    }
    (cos, sin)
}

fn bound_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = power(2.0);
    let mut min_gap = f64::INFINITY;
    let mut cases = vec![(vec![1.0], vec![0.0])];
    cases.extend((0..49).map(|_| random_fourier(&mut rng)));
    for (cos, sin) in cases {
        let perturbed = cos.iter().skip(1).chain(sin.iter()).any(|&c| c != 0.0);
        let body: Body = Smooth2d::fourier(cos.clone(), sin.clone()).map_err(|e| e.to_string())?.into();
        let d = f_divergence(&f, &body, Direction::PQ, Normalization::Normalized).map_err(|e| e.to_string())?;
        let v = finite(&d)?;
        ensure(v >= 1.0 - 1e-9, || format!("D = {v} < 1 for {cos:?} {sin:?}"))?;
        if perturbed {
            let gap = v - 1.0;
            min_gap = min_gap.min(gap);
            ensure(gap > 1e-9 && gap > 10.0 * d.error, || format!("no strict inequality: D - 1 = {gap:e}"))?;
        } else {
            ensure((v - 1.0).abs() <= 1e-12, || format!("unperturbed body gives {v}"))?;
        }
    }
    Ok(format!("50 bodies, D >= 1 always; strict for perturbed ones (min gap {min_gap:.2e}); equality at the disk"))
}

fn discontinuity_witness() -> Outcome {
    let f = power(2.0);
    for k in [8, 64, 512] {
        let p: Body = Polytope::regular_polygon(k, 1.0, 0.0).map_err(|e| e.to_string())?.into();
        let d = f_divergence(&f, &p, Direction::PQ, Normalization::Normalized).map_err(|e| e.to_string())?;
        ensure(d.value == Extended::Finite(0.0), || format!("{k}-gon: {}", d.value))?;
    }
    let disk = f_divergence(&f, &Body::unit_disk(), Direction::PQ, Normalization::Normalized).map_err(|e| e.to_string())?;
    ensure(disk.value == Extended::Finite(1.0), || format!("disk: {}", disk.value))?;
    Ok("k-gons (k = 8, 64, 512) give 0, the disk gives 1".into())
}

fn mixed_consistency() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0f64;
    for body in [Body::unit_disk(), Body::ellipse(2.0, 1.0).unwrap()] {
        for f in [power(2.0), power(3.0)] {
            for dir in [Direction::PQ, Direction::QP] {
                let m = mixed_divergence(&[body.clone(), body.clone()], &[f.clone(), f.clone()], dir, &cfg).map_err(|e| e.to_string())?;
                let d = f_divergence_with(&f, &body, dir, Normalization::Normalized, &cfg).map_err(|e| e.to_string())?;
                let dev = (finite(&m)? - finite(&d)?).abs();
                worst = worst.max(dev);
                ensure(dev <= 1e-8, || format!("{:?} {} {dir:?}: deviation {dev:e}", body.kind(), f.label()))?;
            }
        }
    }
    Ok(format!("max deviation {worst:.1e}"))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("ellipsoid law", ellipsoid_law, Duration::from_secs(5)),
        ("polytope law", polytope_law, Duration::from_secs(1)),
        ("L_p affine surface area closed forms", lp_asa_closed_forms, Duration::from_secs(5)),
        ("surface-body limit", surface_limits, Duration::from_secs(60)),
        ("limit vs direct divergence", limit_matches_direct, Duration::from_secs(60)),
        ("GL(2) and SL(2) invariance", invariance_suite, Duration::MAX),
        ("valuation", valuation_suite, Duration::MAX),
        ("lower bound f(1)", bound_suite, Duration::MAX),
        ("polytope discontinuity", discontinuity_witness, Duration::MAX),
        ("mixed divergence reduction", mixed_consistency, Duration::MAX),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
