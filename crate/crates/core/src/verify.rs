//! Numerical witnesses for invariance, valuation and the lower/upper bounds.

use crate::body::ConvexBody;
use crate::divergence::{f_divergence_with, Direction, Normalization};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::generator::Generator;
use crate::linalg::{norm, Matrix};
use crate::measure::{mass_over_predicate, Which};
use crate::quadrature::{integrate_planar_window, QuadratureConfig};
use crate::scalar::Scalar;
use crate::surface_body::{Weight, WeightedBody};

/// One checked relation. `slack ≥ 0` means the relation holds with that margin:
/// `lhs − rhs` for inequalities `lhs ≥ rhs`, and `tolerance − |lhs − rhs|` for
/// approximate equalities.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow<T> {
    pub name: String,
    pub lhs: Extended<T>,
    pub rhs: Extended<T>,
    pub slack: Extended<T>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report<T> {
    pub check: &'static str,
    pub rows: Vec<CheckRow<T>>,
}

impl<T: Scalar> Report<T> {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn row(&self, name: &str) -> Option<&CheckRow<T>> {
        self.rows.iter().find(|r| r.name == name)
    }
}

fn difference<T: Scalar>(a: Extended<T>, b: Extended<T>) -> Extended<T> {
    if a == b {
        Extended::zero()
    } else {
        a + (-b)
    }
}

/// Row for `lhs ≈ rhs` within `tol·(1 + |rhs|)`.
fn equality_row<T: Scalar>(name: impl Into<String>, lhs: Extended<T>, rhs: Extended<T>, tol: T) -> CheckRow<T> {
    let slack = match difference(lhs, rhs) {
        Extended::Finite(d) if d.is_finite() => {
            let scale = T::one() + rhs.finite().map_or(T::zero(), |r| r.abs());
            Extended::Finite(tol * scale - d.abs())
        }
        _ => Extended::NegInf,
    };
    let passed = lhs.approx_eq(&rhs, tol);
    CheckRow { name: name.into(), lhs, rhs, slack, passed }
}

/// Row for `lhs ≥ rhs − tol·(1 + |rhs|)`.
fn inequality_row<T: Scalar>(name: impl Into<String>, lhs: Extended<T>, rhs: Extended<T>, tol: T) -> CheckRow<T> {
    let slack = difference(lhs, rhs);
    let passed = lhs.ge_with_tol(&rhs, tol);
    CheckRow { name: name.into(), lhs, rhs, slack, passed }
}

/// `D_f(K) = D_f(T K)` in both directions (normalized); tilde values are
/// compared as well when `|det T| = 1`.
pub fn check_gl_invariance<T: Scalar>(
    body: &ConvexBody<T>,
    f: &Generator<T>,
    map: &Matrix<T>,
    tol: T,
    cfg: &QuadratureConfig,
) -> Result<Report<T>> {
    let image = body.linear_image(map)?;
    let mut modes = vec![Normalization::Normalized];
    if (map.det().abs() - T::one()).abs() <= T::tol(1e-9) {
        modes.push(Normalization::Tilde);
    }
    let mut rows = Vec::new();
    for mode in modes {
        for dir in [Direction::PQ, Direction::QP] {
            let a = f_divergence_with(f, body, dir, mode, cfg)?;
            let b = f_divergence_with(f, &image, dir, mode, cfg)?;
            let name = format!(
                "{}_{}",
                match mode {
                    Normalization::Normalized => "normalized",
                    Normalization::Tilde => "tilde",
                },
                match dir {
                    Direction::PQ => "pq",
                    Direction::QP => "qp",
                }
            );
            rows.push(equality_row(name, a.value, b.value, tol));
        }
    }
    Ok(Report { check: "invariance", rows })
}

/// Tilde `D_f(P̃, Q̃)` of the slice `M ∩ {lower ≤ ⟨x, e⟩ ≤ upper}` of a smooth
/// planar body. Curved parts are integrated over their normal-angle windows;
/// each flat cut contributes `f(0)·⟨x, N⟩·length`.
pub fn slice_tilde_divergence<T: Scalar>(
    body: &ConvexBody<T>,
    axis: [T; 2],
    lower: Option<T>,
    upper: Option<T>,
    f: &Generator<T>,
    cfg: &QuadratureConfig,
) -> Result<Extended<T>> {
    let wb = WeightedBody::new(body.clone(), Weight::constant(T::one()))?;
    let len = norm(&axis);
    if !(len > T::zero()) {
        return Err(Error::InvalidParameter("cut axis must be nonzero".into()));
    }
    let phi = axis[1].atan2(axis[0]);
    let top = body.boundary_point_at_angle(phi)?.support;
    let bottom = body.boundary_point_at_angle(phi + T::PI())?.support;
    let upper = upper.map(|t| t / len).filter(|&t| t < top);
    let lower = lower.map(|t| t / len).filter(|&t| t > -bottom);
    if upper.is_some_and(|t| t <= T::zero()) || lower.is_some_and(|t| t >= T::zero()) {
        return Err(Error::InvalidParameter("origin must lie strictly inside the slice".into()));
    }
    let point = |theta: T| body.boundary_point_at_angle(theta).map(|b| b.x);
    let chord = |a: T, b: T| -> Result<T> {
        let (x, y) = (point(a)?, point(b)?);
        Ok(((x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1])).sqrt())
    };
    let mut flat = T::zero();
    let (a_lo, a_hi) = match upper {
        Some(t) => {
            let (lo, hi) = wb.cap_ends(phi, t);
            flat = flat + t * chord(lo, hi)?;
            (lo, hi)
        }
        None => (phi, phi),
    };
    let (b_lo, b_hi) = match lower {
        Some(t) => {
            let (lo, hi) = wb.cap_ends(phi + T::PI(), -t);
            flat = flat - t * chord(lo, hi)?;
            (lo, hi)
        }
        None => (phi + T::PI(), phi + T::PI()),
    };
    let integrand = |b: &crate::body::BoundaryPoint<T>| f.eval(b.curvature / b.support.powi(3)) * b.support;
    let curved = integrate_planar_window(body, a_hi, b_lo, cfg.arc_nodes, integrand)?
        + integrate_planar_window(body, b_hi, a_lo + T::TAU(), cfg.arc_nodes, integrand)?;
    Ok(Extended::Finite(curved) + f.at_zero().times_mass(flat))
}

/// Valuation identity `D(K∪L) + D(K∩L) = D(K) + D(L)` (tilde mode) for
/// `K = M ∩ {⟨x,e⟩ ≤ t₊}` and `L = M ∩ {⟨x,e⟩ ≥ t₋}`, where `K ∪ L = M`.
pub fn check_valuation<T: Scalar>(
    body: &ConvexBody<T>,
    axis: [T; 2],
    t_minus: T,
    t_plus: T,
    f: &Generator<T>,
    tol: T,
    cfg: &QuadratureConfig,
) -> Result<Report<T>> {
    if !(t_minus < t_plus) {
        return Err(Error::InvalidParameter("need t- < t+".into()));
    }
    let whole = f_divergence_with(f, body, Direction::PQ, Normalization::Tilde, cfg)?.value;
    let k = slice_tilde_divergence(body, axis, None, Some(t_plus), f, cfg)?;
    let l = slice_tilde_divergence(body, axis, Some(t_minus), None, f, cfg)?;
    let both = slice_tilde_divergence(body, axis, Some(t_minus), Some(t_plus), f, cfg)?;
    let lhs = whole + both;
    let rhs = k + l;
    let slack = match (lhs, rhs) {
        (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(tol * b.abs().max(T::min_positive_value()) - (a - b).abs()),
        _ if lhs == rhs => Extended::zero(),
        _ => Extended::NegInf,
    };
    let passed = match slack {
        Extended::Finite(s) => s >= T::zero(),
        other => other == Extended::zero(),
    };
    Ok(Report { check: "valuation", rows: vec![CheckRow { name: "additivity".into(), lhs, rhs, slack, passed }] })
}

/// Lower bounds (Jensen with the `{p > 0}` masses, and `f(1)` for smooth
/// bodies or decreasing `f`), the ellipsoid equality case, the value `f(0)`
/// when `P_K({p > 0}) = 0`, and the `f(0) + f*(0) + f(1)[…]` upper bound in both
/// directions when all three endpoint values are finite and nonnegative.
pub fn check_bounds<T: Scalar>(body: &ConvexBody<T>, f: &Generator<T>, cfg: &QuadratureConfig) -> Result<Report<T>> {
    let tol = T::tol(1e-9);
    let d = f_divergence_with(f, body, Direction::PQ, Normalization::Normalized, cfg)?;
    let d_qp = f_divergence_with(f, body, Direction::QP, Normalization::Normalized, cfg)?;
    let tol = tol.max(d.error.max(d_qp.error) * T::lit(10.0));
    let zero = T::zero();
    let q_curved = mass_over_predicate(body, Which::Q, |p, _| p > zero, cfg)?;
    let p_curved = mass_over_predicate(body, Which::P, |p, _| p > zero, cfg)?;
    let q_flat = mass_over_predicate(body, Which::Q, |p, _| p == zero, cfg)?;
    let f1 = Extended::Finite(f.at_one());
    let mut rows = Vec::new();

    let jensen_curved = if q_curved > zero {
        Extended::Finite(f.eval(p_curved / q_curved) * q_curved)
    } else {
        Extended::zero()
    };
    rows.push(inequality_row("jensen", d.value, jensen_curved + f.at_zero().times_mass(q_flat), tol));
    if body.is_smooth() || f.is_decreasing() {
        rows.push(inequality_row("f_of_one", d.value, f1, tol));
    }
    if matches!(body, ConvexBody::Ellipsoid(_)) {
        rows.push(equality_row("ellipsoid_equality", d.value, f1, tol));
    }
    if p_curved == zero {
        rows.push(equality_row("degenerate", d.value, f.at_zero(), tol));
    }
    if let (Extended::Finite(f0), Extended::Finite(fs0)) = (f.at_zero(), f.adjoint_at_zero()) {
        if f0 >= zero && fs0 >= zero && f.at_one() >= zero {
            let q_low = mass_over_predicate(body, Which::Q, |p, q| p > zero && p <= q, cfg)?;
            let p_high = mass_over_predicate(body, Which::P, |p, q| q > zero && q <= p, cfg)?;
            let upper = Extended::Finite(f0 + fs0 + f.at_one() * (q_low + p_high));
            rows.push(inequality_row("upper_pq", upper, d.value, tol));
            rows.push(inequality_row("upper_qp", upper, d_qp.value, tol));
        }
    }
    Ok(Report { check: "bounds", rows })
}
