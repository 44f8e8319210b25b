//! Planar surface bodies `K_{g,s}`, their volume deficits and the `s → 0`
//! limit `c₂ · lim (|K| − |K_{g,s}|)/s²` with `c₂ = 8`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::body::planar::{halfplane_intersection, polygon_area, HalfPlane};
use crate::body::{BoundaryPoint, ConvexBody};
use crate::divergence::Direction;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::measure::densities;
use crate::quadrature::{extrapolate_limit, gauss_legendre_panels, QuadratureConfig, ARC_PANEL_WIDTH};
use crate::scalar::Scalar;

/// `c₂ = 2|B¹|² = 8`.
pub const C2: f64 = 8.0;
const MASS_NODES: usize = 24;
const MAX_ITER: usize = 200;

type WeightFn<T> = Arc<dyn Fn(&BoundaryPoint<T>) -> T + Send + Sync>;

/// A positive weight `g` on `∂K`.
#[derive(Clone)]
pub struct Weight<T> {
    eval: WeightFn<T>,
    label: String,
}

impl<T: Scalar> fmt::Debug for Weight<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Weight").field("label", &self.label).finish()
    }
}

impl<T: Scalar> Weight<T> {
    pub fn new(label: impl Into<String>, eval: impl Fn(&BoundaryPoint<T>) -> T + Send + Sync + 'static) -> Self {
        Weight { eval: Arc::new(eval), label: label.into() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(format!("const:{c}"), move |_| c)
    }

    #[inline]
    pub fn eval(&self, b: &BoundaryPoint<T>) -> T {
        (self.eval)(b)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// A smooth planar body with a positive boundary weight.
#[derive(Clone, Debug)]
pub struct WeightedBody<T: Scalar> {
    body: ConvexBody<T>,
    weight: Weight<T>,
}

impl<T: Scalar> WeightedBody<T> {
    pub fn new(body: ConvexBody<T>, weight: Weight<T>) -> Result<Self> {
        if body.dim() != 2 || !body.is_smooth() {
            return Err(Error::Unsupported(format!(
                "surface bodies need a smooth planar body, got {}",
                body.kind().as_str()
            )));
        }
        let samples = 1024;
        for j in 0..samples {
            let b = body.boundary_point_at_angle(T::TAU() * T::count(j) / T::count(samples))?;
            let g = weight.eval(&b);
            if !(g > T::zero() && g.is_finite()) {
                return Err(Error::InvalidParameter(format!("weight {} is not positive at {:?}", weight.label(), b.x)));
            }
        }
        Ok(WeightedBody { body, weight })
    }

    pub fn body(&self) -> &ConvexBody<T> {
        &self.body
    }

    pub fn weight(&self) -> &Weight<T> {
        &self.weight
    }

    fn point(&self, theta: T) -> BoundaryPoint<T> {
        self.body.boundary_point_at_angle(theta).expect("validated planar body")
    }

    /// `∫ g dμ` over normal angles in `[lo, hi]`.
    fn mass_between(&self, lo: T, hi: T) -> T {
        let mut total = T::zero();
        for (theta, w) in gauss_legendre_panels(lo, hi, T::lit(ARC_PANEL_WIDTH), MASS_NODES) {
            let b = self.point(theta);
            total = total + w * self.weight.eval(&b) * b.curvature_function.to_scalar();
        }
        total
    }

    pub fn total_mass(&self) -> T {
        self.mass_between(T::zero(), T::TAU())
    }

    /// Normal angles `(θ₋, θ₊)` bounding the cap `{⟨x, u(φ)⟩ ≥ t}`.
    pub(crate) fn cap_ends(&self, phi: T, t: T) -> (T, T) {
        let (s, c) = phi.sin_cos();
        let top = self.point(phi);
        let rho = top.curvature_function.to_scalar();
        let depth = (top.support - t).max(T::zero());
        let guess = (T::lit(2.0) * depth / rho).sqrt();
        let height = |theta: T| {
            let b = self.point(theta);
            let drop = -b.curvature_function.to_scalar() * (theta - phi).sin();
            (b.x[0] * c + b.x[1] * s - t, drop)
        };
        let xtol = T::epsilon() * T::lit(8.0);
        let plus = rtsafe(phi, phi + T::PI(), phi + guess.min(T::PI()), height, xtol, T::zero());
        let minus = rtsafe(phi - T::PI(), phi, phi - guess.min(T::PI()), height, xtol, T::zero());
        (minus, plus)
    }

    /// Offset `t` with `∫_{∂K ∩ {⟨x,u(φ)⟩ ≥ t}} g dμ = s`.
    fn offset_for(&self, phi: T, s: T, total: T) -> T {
        let top = self.point(phi);
        let h = top.support;
        if s == T::zero() {
            return h;
        }
        let low = -self.point(phi + T::PI()).support;
        let g0 = self.weight.eval(&top);
        let rho = top.curvature_function.to_scalar();
        let guess = h - s * s / (T::lit(8.0) * g0 * g0 * rho);
        let mass_excess = |t: T| {
            if t >= h {
                return (-s, T::neg_infinity());
            }
            if t <= low {
                return (total - s, T::zero());
            }
            let (lo, hi) = self.cap_ends(phi, t);
            let m = self.mass_between(lo, hi);
            let g_hi = self.weight.eval(&self.point(hi));
            let g_lo = self.weight.eval(&self.point(lo));
            (m - s, g_hi / (phi - hi).sin() - g_lo / (phi - lo).sin())
        };
        let ftol = T::tol(1e-12) * s.max(T::one());
        let xtol = T::epsilon() * T::lit(4.0) * (T::one() + h.abs());
        rtsafe(low, h, guess.max(low), mass_excess, xtol, ftol)
    }
}

/// Safeguarded Newton on a bracket `[lo, hi]` whose ends have opposite signs.
fn rtsafe<T: Scalar>(lo: T, hi: T, guess: T, f: impl Fn(T) -> (T, T), xtol: T, ftol: T) -> T {
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == T::zero() {
        return lo;
    }
    if fhi == T::zero() {
        return hi;
    }
    let (mut xl, mut xh) = if flo < T::zero() { (lo, hi) } else { (hi, lo) };
    let mut x = if guess > lo.min(hi) && guess < lo.max(hi) { guess } else { (lo + hi) / T::lit(2.0) };
    let mut dx_old = (hi - lo).abs();
    let mut dx = dx_old;
    let (mut fx, mut dfx) = f(x);
    for _ in 0..MAX_ITER {
        if fx.abs() <= ftol {
            return x;
        }
        if fx < T::zero() {
            xl = x;
        } else {
            xh = x;
        }
        let newton_ok = dfx.is_finite()
            && dfx != T::zero()
            && ((x - xh) * dfx - fx) * ((x - xl) * dfx - fx) < T::zero()
            && (T::lit(2.0) * fx).abs() <= (dx_old * dfx).abs();
        dx_old = dx;
        if newton_ok {
            dx = fx / dfx;
            x = x - dx;
        } else {
            dx = (xh - xl) / T::lit(2.0);
            x = xl + dx;
        }
        if dx.abs() <= xtol || (xh - xl).abs() <= xtol {
            return x;
        }
        let next = f(x);
        fx = next.0;
        dfx = next.1;
    }
    x
}

/// `K_{g,s}` on a direction grid: `∩_j {⟨x, u_j⟩ ≤ t_j}`.
#[derive(Clone, Debug)]
pub struct SurfaceBodyPolygon<T> {
    pub angles: Vec<T>,
    pub offsets: Vec<T>,
    /// Counter-clockwise vertices; empty when the body is empty.
    pub vertices: Vec<[T; 2]>,
    pub area: T,
    pub empty: bool,
}

/// Surface body of `wb` at level `s` on `m ≥ 256` equispaced directions.
pub fn surface_body<T: Scalar>(wb: &WeightedBody<T>, s: T, m: usize) -> Result<SurfaceBodyPolygon<T>> {
    if m < 256 {
        return Err(Error::InvalidParameter(format!("surface bodies need at least 256 directions, got {m}")));
    }
    if !(s >= T::zero()) || !s.is_finite() {
        return Err(Error::InvalidParameter("s must be finite and nonnegative".into()));
    }
    let angles: Vec<T> = (0..m).map(|j| T::TAU() * T::count(j) / T::count(m)).collect();
    let total = wb.total_mass();
    if s >= total {
        return Ok(SurfaceBodyPolygon { angles, offsets: vec![], vertices: vec![], area: T::zero(), empty: true });
    }
    let offsets: Vec<T> = angles.par_iter().map(|&phi| wb.offset_for(phi, s, total)).collect();
    let planes: Vec<HalfPlane<T>> =
        angles.iter().zip(&offsets).map(|(&angle, &offset)| HalfPlane { angle, offset }).collect();
    Ok(match halfplane_intersection(&planes) {
        Some(vertices) => {
            let area = polygon_area(&vertices);
            SurfaceBodyPolygon { angles, offsets, vertices, area, empty: false }
        }
        None => SurfaceBodyPolygon { angles, offsets, vertices: vec![], area: T::zero(), empty: true },
    })
}

/// `|K| − |K_{g,s}|`, with `|K|` taken as the `s = 0` polygon on the same grid so
/// that the discretization error cancels to leading order.
pub fn volume_deficit<T: Scalar>(wb: &WeightedBody<T>, s: T, m: usize) -> Result<T> {
    let reference = surface_body(wb, T::zero(), m)?.area;
    Ok(reference - surface_body(wb, s, m)?.area)
}

/// Extrapolation ladder `s_k = s₀ 2^{−k}`, `k = 0..=halvings`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderConfig<T> {
    pub s0: T,
    pub halvings: usize,
    pub directions: usize,
}

impl<T: Scalar> Default for LadderConfig<T> {
    fn default() -> Self {
        LadderConfig { s0: T::lit(0.2), halvings: 6, directions: 1024 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitEstimate<T> {
    /// `c₂ · L`.
    pub limit: T,
    pub uncertainty: T,
    /// RMS residual of the `deficit/s²` fit.
    pub residual: T,
    /// Uncertainty within 1% of the limit.
    pub converged: bool,
    /// `(s, deficit)` per rung.
    pub table: Vec<(T, T)>,
}

/// `c₂ lim_{s→0} (|K| − |K_{g,s}|)/s²`, fitted as `deficit/s² = L + C s + D s²`.
pub fn limit_estimate<T: Scalar>(wb: &WeightedBody<T>, ladder: &LadderConfig<T>) -> Result<LimitEstimate<T>> {
    if ladder.halvings < 3 {
        return Err(Error::InvalidParameter("the ladder needs at least 3 halvings".into()));
    }
    if !(ladder.s0 > T::zero()) {
        return Err(Error::InvalidParameter("s0 must be positive".into()));
    }
    let reference = surface_body(wb, T::zero(), ladder.directions)?.area;
    let mut table = Vec::with_capacity(ladder.halvings + 1);
    for k in 0..=ladder.halvings {
        let s = ladder.s0 / T::lit(2.0).powi(k as i32);
        let body = surface_body(wb, s, ladder.directions)?;
        if body.empty {
            return Err(Error::InvalidParameter(format!("surface body is empty at s = {s}")));
        }
        table.push((s, reference - body.area));
    }
    let samples: Vec<(T, T)> = table.iter().map(|&(s, d)| (s, d / (s * s))).collect();
    let fit = extrapolate_limit(&samples, &[T::one(), T::lit(2.0)])?;
    let c2 = T::lit(C2);
    let limit = c2 * fit.limit;
    let uncertainty = c2 * fit.uncertainty;
    Ok(LimitEstimate {
        limit,
        uncertainty,
        residual: c2 * fit.residual,
        converged: uncertainty <= T::lit(0.01) * limit.abs(),
        table,
    })
}

/// `g_f = [2|K°| · 4|K|² · p q / f(p/q)]^{1/2}`; the `QP` weight is `g_{f*}`.
pub fn weight_for_divergence<T: Scalar>(
    body: &ConvexBody<T>,
    f: &Generator<T>,
    direction: Direction,
    cfg: &QuadratureConfig,
) -> Result<Weight<T>> {
    if body.dim() != 2 || !body.is_smooth() {
        return Err(Error::Unsupported("divergence weights need a smooth planar body".into()));
    }
    let f = match direction {
        Direction::PQ => f.clone(),
        Direction::QP => f.adjoint(),
    };
    let m = cfg.circle_nodes;
    for j in 0..m {
        let b = body.boundary_point_at_angle(T::TAU() * T::count(j) / T::count(m))?;
        let (p, q) = densities(body, &b);
        let v = f.eval(p / q);
        if !(v > T::zero() && v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{} is not positive at p/q = {} on the boundary; the weight is undefined",
                f.label(),
                p / q
            )));
        }
    }
    let scale = T::lit(8.0) * body.polar_volume() * body.volume() * body.volume();
    let owner = body.clone();
    let label = format!("g[{}]", f.label());
    Ok(Weight::new(label, move |b| {
        let (p, q) = densities(&owner, b);
        (scale * p * q / f.eval(p / q)).sqrt()
    }))
}

/// `D_f` recovered from the surface-body limit with weight `g_f` (or `g_{f*}`).
pub fn divergence_via_limit<T: Scalar>(
    body: &ConvexBody<T>,
    f: &Generator<T>,
    direction: Direction,
    ladder: &LadderConfig<T>,
    cfg: &QuadratureConfig,
) -> Result<LimitEstimate<T>> {
    let weight = weight_for_divergence(body, f, direction, cfg)?;
    limit_estimate(&WeightedBody::new(body.clone(), weight)?, ladder)
}
