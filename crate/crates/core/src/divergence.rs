//! `D_f` between the cone-measure densities, its named special cases and the
//! mixed divergences of several bodies.

use std::fmt;

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::generator::{Generator, StandardKind};
use crate::measure::densities;
use crate::quadrature::{integrate_smooth, smooth_point, sphere_rules, QuadratureConfig};
use crate::scalar::{pairwise_sum, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `D_f(P_K, Q_K)`.
    PQ,
    /// `D_f(Q_K, P_K) = D_{f*}(P_K, Q_K)`.
    QP,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Probability densities `p_K`, `q_K`.
    Normalized,
    /// Unnormalized `κ/⟨x,N⟩ⁿ` and `⟨x,N⟩`.
    Tilde,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    ExactPolytope,
    ExactEllipsoid,
    Quadrature,
    Piecewise,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::ExactPolytope => "exact_polytope",
            Branch::ExactEllipsoid => "exact_ellipsoid",
            Branch::Quadrature => "quadrature",
            Branch::Piecewise => "piecewise",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivergenceResult<T> {
    pub value: Extended<T>,
    pub direction: Direction,
    pub normalization: Normalization,
    pub branch: Branch,
    /// Zero on exact branches, node-halving estimate otherwise.
    pub error: T,
}

/// `D_f` with the default quadrature configuration.
pub fn f_divergence<T: Scalar>(
    f: &Generator<T>,
    body: &ConvexBody<T>,
    direction: Direction,
    normalization: Normalization,
) -> Result<DivergenceResult<T>> {
    f_divergence_with(f, body, direction, normalization, &QuadratureConfig::default())
}

pub fn f_divergence_with<T: Scalar>(
    f: &Generator<T>,
    body: &ConvexBody<T>,
    direction: Direction,
    normalization: Normalization,
    cfg: &QuadratureConfig,
) -> Result<DivergenceResult<T>> {
    let mut result = match direction {
        Direction::PQ => forward(f, body, normalization, cfg)?,
        Direction::QP => forward(&f.adjoint(), body, normalization, cfg)?,
    };
    result.direction = direction;
    Ok(result)
}

fn forward<T: Scalar>(
    f: &Generator<T>,
    body: &ConvexBody<T>,
    normalization: Normalization,
    cfg: &QuadratureConfig,
) -> Result<DivergenceResult<T>> {
    let n = T::count(body.dim());
    let exact = |value, branch| DivergenceResult {
        value,
        direction: Direction::PQ,
        normalization,
        branch,
        error: T::zero(),
    };
    match body {
        ConvexBody::Polytope(p) => Ok(exact(
            match normalization {
                Normalization::Normalized => f.at_zero(),
                Normalization::Tilde => f.at_zero().times_mass(n * p.volume()),
            },
            Branch::ExactPolytope,
        )),
        ConvexBody::Ellipsoid(e) if !cfg.force_quadrature => Ok(exact(
            match normalization {
                Normalization::Normalized => Extended::Finite(f.at_one()),
                Normalization::Tilde => {
                    Extended::Finite(f.eval(e.polar_volume() / e.volume()) * n * e.volume())
                }
            },
            Branch::ExactEllipsoid,
        )),
        ConvexBody::Ellipsoid(_) | ConvexBody::Smooth2d(_) => {
            let est = integrate_smooth(body, cfg, |b| {
                let fk = b.curvature_function.to_scalar();
                match normalization {
                    Normalization::Normalized => {
                        let (p, q) = densities(body, b);
                        f.eval(p / q) * q * fk
                    }
                    Normalization::Tilde => {
                        f.eval(b.curvature / b.support.powi(body.dim() as i32 + 1)) * b.support * fk
                    }
                }
            })?;
            Ok(DivergenceResult {
                value: Extended::Finite(est.value),
                direction: Direction::PQ,
                normalization,
                branch: Branch::Quadrature,
                error: est.error,
            })
        }
        ConvexBody::RoundedPolygon(r) => {
            let vol = r.volume();
            let arcs = |nodes: usize| {
                r.arc_integral(nodes, |b| match normalization {
                    Normalization::Normalized => {
                        let (p, q) = densities(body, b);
                        f.eval(p / q) * q
                    }
                    Normalization::Tilde => f.eval(b.curvature / b.support.powi(3)) * b.support,
                })
            };
            // flat sides: κ = 0, so the integrand is f(0) against the side's mass
            let side_mass = r.sides().iter().fold(T::zero(), |acc, s| acc + s.support * s.length());
            let side_mass = match normalization {
                Normalization::Normalized => side_mass / (n * vol),
                Normalization::Tilde => side_mass,
            };
            let fine = arcs(cfg.arc_nodes);
            let coarse = arcs((cfg.arc_nodes / 2).max(2));
            Ok(DivergenceResult {
                value: Extended::Finite(fine) + f.at_zero().times_mass(side_mass),
                direction: Direction::PQ,
                normalization,
                branch: Branch::Piecewise,
                error: (fine - coarse).abs(),
            })
        }
    }
}

/// `L_ψ` affine surface area: the tilde `D_ψ(P̃_K, Q̃_K)` for `ψ` with `ψ(0) = +∞`.
pub fn lpsi_asa<T: Scalar>(psi: &Generator<T>, body: &ConvexBody<T>, cfg: &QuadratureConfig) -> Result<DivergenceResult<T>> {
    if psi.at_zero() != Extended::PosInf {
        return Err(Error::InvalidParameter(format!(
            "{}: L_psi affine surface areas need psi(0) = +inf",
            psi.label()
        )));
    }
    f_divergence_with(psi, body, Direction::PQ, Normalization::Tilde, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpAsa<T> {
    pub result: DivergenceResult<T>,
    /// Set for `p > 0`, where `t^{p/(n+p)}` is concave.
    pub concave_family: bool,
}

/// `L_p` affine surface area `∫ κ^{p/(n+p)} ⟨x,N⟩^{−n(p−1)/(n+p)} dμ`, for any `p ≠ −n`.
pub fn lp_asa<T: Scalar>(p: T, body: &ConvexBody<T>, cfg: &QuadratureConfig) -> Result<LpAsa<T>> {
    let n = body.dim();
    let n_t = T::count(n);
    if p == -n_t {
        return Err(Error::InvalidParameter(format!("L_p affine surface area undefined for p = -{n}")));
    }
    if !p.is_finite() {
        return Err(Error::InvalidParameter("p must be finite".into()));
    }
    let f = if p <= T::zero() {
        Generator::standard(StandardKind::LpAsa { p, n })?
    } else {
        Generator::power_any(p / (n_t + p))
    };
    Ok(LpAsa {
        result: f_divergence_with(&f, body, Direction::PQ, Normalization::Tilde, cfg)?,
        concave_family: p > T::zero(),
    })
}

/// Relative entropy from `P_K` to `Q_K` (or back, for [`Direction::QP`]).
pub fn kl_divergence<T: Scalar>(body: &ConvexBody<T>, direction: Direction, cfg: &QuadratureConfig) -> Result<DivergenceResult<T>> {
    f_divergence_with(&Generator::standard(StandardKind::Kl)?, body, direction, Normalization::Normalized, cfg)
}

/// Hellinger integral `H_α = ∫ p^α q^{1−α} dμ`.
pub fn hellinger<T: Scalar>(body: &ConvexBody<T>, alpha: T, cfg: &QuadratureConfig) -> Result<DivergenceResult<T>> {
    f_divergence_with(&Generator::power_any(alpha), body, Direction::PQ, Normalization::Normalized, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Renyi<T> {
    pub value: Extended<T>,
    /// The Hellinger integral (or, at `α = 1`, the relative entropy) it came from.
    pub source: DivergenceResult<T>,
    /// `H_α` was 0 or `+∞`, so the value is infinite.
    pub degenerate: bool,
}

/// Rényi divergence `D_α = ln(H_α)/(α − 1)`; `α = 1` is the relative entropy.
pub fn renyi<T: Scalar>(body: &ConvexBody<T>, alpha: T, cfg: &QuadratureConfig) -> Result<Renyi<T>> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter("alpha must be finite".into()));
    }
    if alpha == T::one() {
        let source = kl_divergence(body, Direction::PQ, cfg)?;
        return Ok(Renyi { value: source.value, source, degenerate: false });
    }
    let source = hellinger(body, alpha, cfg)?;
    let positive = alpha > T::one();
    let (value, degenerate) = match source.value {
        Extended::Finite(h) if h > T::zero() => (Extended::Finite(h.ln() / (alpha - T::one())), false),
        // ln 0 = −∞ divided by α − 1
        Extended::Finite(_) => (if positive { Extended::NegInf } else { Extended::PosInf }, true),
        Extended::PosInf => (if positive { Extended::PosInf } else { Extended::NegInf }, true),
        Extended::NegInf => return Err(Error::Numerical("negative Hellinger integral".into())),
    };
    Ok(Renyi { value, source, degenerate })
}

/// Mixed f-divergence of `n` bodies in `ℝⁿ`:
/// `∫_{S^{n−1}} Π_i [f_i(p_i/q_i) q_i]^{1/n} dσ` with the sphere densities
/// `p_i = 1/(n|K_i°| h_iⁿ)` and `q_i = f_{K_i} h_i/(n|K_i|)`.
pub fn mixed_divergence<T: Scalar>(
    bodies: &[ConvexBody<T>],
    generators: &[Generator<T>],
    direction: Direction,
    cfg: &QuadratureConfig,
) -> Result<DivergenceResult<T>> {
    let Some(first) = bodies.first() else {
        return Err(Error::InvalidParameter("mixed divergence needs bodies".into()));
    };
    let n = first.dim();
    if bodies.len() != n {
        return Err(Error::InvalidParameter(format!("mixed divergence in dimension {n} needs {n} bodies, got {}", bodies.len())));
    }
    if generators.len() != n {
        return Err(Error::InvalidParameter(format!("expected {n} generators, got {}", generators.len())));
    }
    if let Some(b) = bodies.iter().find(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: b.dim() });
    }
    if let Some(b) = bodies.iter().find(|b| !b.is_smooth()) {
        return Err(Error::Unsupported(format!("mixed divergences of {} bodies", b.kind().as_str())));
    }
    let gens: Vec<Generator<T>> = match direction {
        Direction::PQ => generators.to_vec(),
        Direction::QP => generators.iter().map(Generator::adjoint).collect(),
    };
    let n_t = T::count(n);
    let root = T::one() / n_t;
    let (fine, coarse) = sphere_rules::<T>(n, cfg)?;
    let run = |rule: &crate::quadrature::SphereRule<T>| -> Result<T> {
        let values = crate::quadrature::try_evaluate(rule.len(), |j| {
            let mut prod = T::one();
            for (body, f) in bodies.iter().zip(&gens) {
                let b = smooth_point(body, rule, j);
                let h = b.support;
                let p = T::one() / (n_t * body.polar_volume() * h.powi(n as i32));
                let q = b.curvature_function.to_scalar() * h / (n_t * body.volume());
                let factor = f.eval(p / q) * q;
                if factor < T::zero() {
                    return Err(Error::NegativeMixedFactor(factor.to_f64().unwrap_or(f64::NAN)));
                }
                prod = prod * factor.powf(root);
            }
            Ok(rule.weights[j] * prod)
        })?;
        Ok(pairwise_sum(&values))
    };
    let value = run(&fine)?;
    let error = (value - run(&coarse)?).abs();
    Ok(DivergenceResult {
        value: Extended::Finite(value),
        direction,
        normalization: Normalization::Normalized,
        branch: Branch::Quadrature,
        error,
    })
}
