//! Deterministic quadrature on `S^{n−1}` and on `∂K`, plus limit extrapolation.
//!
//! Every rule is fixed (no sampling), node values may be computed in parallel,
//! and sums always go through the same pairwise tree, so results are
//! bit-reproducible regardless of thread count.

use rayon::prelude::*;

use crate::body::{BoundaryPoint, ConvexBody};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::linalg::{least_squares, normalized};
use crate::scalar::{pairwise_sum, Scalar};

/// Maximum angular width of one Gauss–Legendre panel on arcs.
pub const ARC_PANEL_WIDTH: f64 = 0.25;
const PARALLEL_THRESHOLD: usize = 2048;

/// Resolution knobs shared by every integrating operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Trapezoid nodes on the circle.
    pub circle_nodes: usize,
    /// Gauss–Legendre polar nodes on `S²` (azimuth uses twice as many).
    pub sphere_level: usize,
    /// Gauss–Legendre nodes per panel on arcs and segments.
    pub arc_nodes: usize,
    /// Route ellipsoids through quadrature instead of their closed forms.
    pub force_quadrature: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { circle_nodes: 4096, sphere_level: 96, arc_nodes: 32, force_quadrature: false }
    }
}

impl QuadratureConfig {
    pub fn forced(mut self) -> Self {
        self.force_quadrature = true;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleOrder {
    /// Equispaced trapezoid on the circle: spectral for smooth periodic integrands.
    Trapezoid,
    /// Gauss–Legendre in the polar cosine times trapezoid in azimuth.
    GaussProduct,
}

/// Nodes and weights on the unit sphere.
#[derive(Clone, Debug)]
pub struct SphereRule<T> {
    pub dim: usize,
    pub nodes: Vec<Vec<T>>,
    pub weights: Vec<T>,
    /// Normal angles of the nodes, for circle rules.
    pub angles: Option<Vec<T>>,
    pub order: RuleOrder,
}

impl<T: Scalar> SphereRule<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_weight(&self) -> T {
        pairwise_sum(&self.weights)
    }
}

/// Equispaced trapezoid rule on `[0, 2π)`.
pub fn circle_rule<T: Scalar>(m: usize) -> Result<SphereRule<T>> {
    if m < 8 {
        return Err(Error::InvalidParameter(format!("circle rule needs at least 8 nodes, got {m}")));
    }
    let angles: Vec<T> = (0..m).map(|j| T::TAU() * T::count(j) / T::count(m)).collect();
    let nodes = angles
        .iter()
        .map(|&a| {
            let (s, c) = a.sin_cos();
            vec![c, s]
        })
        .collect();
    Ok(SphereRule {
        dim: 2,
        nodes,
        weights: vec![T::TAU() / T::count(m); m],
        angles: Some(angles),
        order: RuleOrder::Trapezoid,
    })
}

/// Product rule on `S²` with `level` polar nodes and `2·level` azimuthal nodes.
pub fn sphere3_rule<T: Scalar>(level: usize) -> Result<SphereRule<T>> {
    cap_rule(&[T::zero(), T::zero(), T::one()], T::PI(), level)
}

/// Product rule on the spherical cap `{u : ⟨u, axis⟩ ≥ cos half_angle}` of `S²`.
pub fn cap_rule<T: Scalar>(axis: &[T], half_angle: T, level: usize) -> Result<SphereRule<T>> {
    if level < 2 {
        return Err(Error::InvalidParameter("sphere rule level must be at least 2".into()));
    }
    if axis.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: axis.len() });
    }
    let e3 = normalized(axis);
    // any unit vector orthogonal to e3
    let helper = if e3[0].abs() < T::lit(0.9) { [T::one(), T::zero(), T::zero()] } else { [T::zero(), T::one(), T::zero()] };
    let e1 = crate::linalg::orthonormal_basis(&[e3.clone(), helper.to_vec()], T::tol(1e-12))[1].clone();
    let e2 = [e3[1] * e1[2] - e3[2] * e1[1],
        e3[2] * e1[0] - e3[0] * e1[2],
        e3[0] * e1[1] - e3[1] * e1[0]];
    let z_lo = half_angle.min(T::PI()).cos();
    let (gx, gw) = gauss_legendre::<T>(level);
    let half = (T::one() - z_lo) / T::lit(2.0);
    let azimuth = 2 * level;
    let dphi = T::TAU() / T::count(azimuth);
    let mut nodes = Vec::with_capacity(level * azimuth);
    let mut weights = Vec::with_capacity(level * azimuth);
    for (x, w) in gx.iter().zip(&gw) {
        let z = z_lo + half * (*x + T::one());
        let r = (T::one() - z * z).max(T::zero()).sqrt();
        for k in 0..azimuth {
            let phi = dphi * (T::count(k) + T::lit(0.5));
            let (s, c) = phi.sin_cos();
            let node: Vec<T> = (0..3).map(|i| r * c * e1[i] + r * s * e2[i] + z * e3[i]).collect();
            nodes.push(node);
            weights.push(*w * half * dphi);
        }
    }
    Ok(SphereRule { dim: 3, nodes, weights, angles: None, order: RuleOrder::GaussProduct })
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let nf = T::count(n);
    for i in 0..n.div_ceil(2) {
        let mut z = (T::PI() * (T::count(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (mut p0, mut p1) = (T::one(), z);
            for k in 2..=n {
                let kf = T::count(k);
                let p2 = ((kf + kf - T::one()) * z * p1 - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { T::one() } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { T::one() } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - T::one());
            let dz = pn / dp;
            z = z - dz;
            if dz.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let wi = T::lit(2.0) / ((T::one() - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss–Legendre on `[a, b]` with panels no wider than `width`.
pub fn gauss_legendre_panels<T: Scalar>(a: T, b: T, width: T, nodes: usize) -> Vec<(T, T)> {
    if !(b > a) {
        return Vec::new();
    }
    let panels = ((b - a) / width).ceil().to_usize().unwrap_or(1).max(1);
    let h = (b - a) / T::count(panels);
    let (gx, gw) = gauss_legendre::<T>(nodes);
    let half = h / T::lit(2.0);
    let mut out = Vec::with_capacity(panels * nodes);
    for p in 0..panels {
        let mid = a + h * (T::count(p) + T::lit(0.5));
        for (x, w) in gx.iter().zip(&gw) {
            out.push((mid + half * *x, *w * half));
        }
    }
    out
}

/// Evaluates `f(0..n)` (in parallel for large `n`) preserving index order.
pub fn evaluate<T: Scalar>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    if n >= PARALLEL_THRESHOLD {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

/// As [`evaluate`] for fallible node values; the first error in index order wins.
pub fn try_evaluate<T: Scalar>(n: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    let values: Vec<Result<T>> =
        if n >= PARALLEL_THRESHOLD { (0..n).into_par_iter().map(f).collect() } else { (0..n).map(f).collect() };
    values.into_iter().collect()
}

/// `Σ wᵢ g(uᵢ)` over a sphere rule.
pub fn integrate_sphere<T: Scalar>(rule: &SphereRule<T>, g: impl Fn(&[T]) -> T + Sync + Send) -> T {
    let values = evaluate(rule.len(), |i| rule.weights[i] * g(&rule.nodes[i]));
    pairwise_sum(&values)
}

/// A quadrature value with its node-halving error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

pub(crate) fn sphere_rules<T: Scalar>(dim: usize, cfg: &QuadratureConfig) -> Result<(SphereRule<T>, SphereRule<T>)> {
    match dim {
        2 => Ok((circle_rule(cfg.circle_nodes)?, circle_rule((cfg.circle_nodes / 2).max(8))?)),
        3 => Ok((sphere3_rule(cfg.sphere_level)?, sphere3_rule((cfg.sphere_level / 2).max(2))?)),
        n => Err(Error::Unsupported(format!("no sphere quadrature in dimension {n}"))),
    }
}

/// Boundary point of a smooth body at a sphere-rule node.
pub(crate) fn smooth_point<T: Scalar>(body: &ConvexBody<T>, rule: &SphereRule<T>, i: usize) -> BoundaryPoint<T> {
    match body {
        ConvexBody::Smooth2d(s) => s.point_at(rule.angles.as_ref().expect("circle rule")[i]),
        ConvexBody::Ellipsoid(e) => e.boundary_point(&rule.nodes[i]),
        _ => unreachable!("smooth bodies only"),
    }
}

/// `∫_{S^{n−1}} g(u) dσ` for the smooth kinds, with a node-halving error estimate.
pub(crate) fn integrate_smooth<T: Scalar>(
    body: &ConvexBody<T>,
    cfg: &QuadratureConfig,
    g: impl Fn(&BoundaryPoint<T>) -> T + Sync + Send,
) -> Result<Estimate<T>> {
    let (fine, coarse) = sphere_rules::<T>(body.dim(), cfg)?;
    let run = |rule: &SphereRule<T>| {
        pairwise_sum(&evaluate(rule.len(), |i| rule.weights[i] * g(&smooth_point(body, rule, i))))
    };
    let value = run(&fine);
    let error = (value - run(&coarse)).abs();
    Ok(Estimate { value, error })
}

/// `∫_{∂K} φ dμ_K`.
///
/// Smooth bodies use the Gauss-map change of variables
/// `∫_{∂K} φ dμ = ∫_{S^{n−1}} φ(x(u)) f_K(u) dσ(u)`; rounded polygons are
/// integrated piece by piece (arcs in the normal angle, sides in arc length).
/// Polytopes are rejected.
pub fn integrate_boundary<T: Scalar>(
    body: &ConvexBody<T>,
    phi: impl Fn(&BoundaryPoint<T>) -> T + Sync + Send,
    cfg: &QuadratureConfig,
) -> Result<Estimate<T>> {
    match body {
        ConvexBody::Polytope(_) => Err(Error::Unsupported(
            "boundary quadrature over polytopes; use the exact branches".into(),
        )),
        ConvexBody::Ellipsoid(_) | ConvexBody::Smooth2d(_) => integrate_smooth(body, cfg, |b| {
            let fk = b.curvature_function.finite().expect("smooth bodies have finite f_K");
            phi(b) * fk
        }),
        ConvexBody::RoundedPolygon(r) => {
            let run = |nodes: usize| {
                let arcs = r.arc_integral(nodes, &phi);
                let mut sides = T::zero();
                for s in r.sides() {
                    let u = crate::body::planar::unit(s.normal_angle);
                    let len = s.length();
                    for (t, w) in gauss_legendre_panels(T::zero(), T::one(), T::one(), nodes) {
                        let x = vec![
                            s.from[0] + t * (s.to[0] - s.from[0]),
                            s.from[1] + t * (s.to[1] - s.from[1]),
                        ];
                        let bp = BoundaryPoint {
                            x,
                            normal: u.to_vec(),
                            support: s.support,
                            curvature: T::zero(),
                            curvature_function: Extended::PosInf,
                        };
                        sides = sides + w * len * phi(&bp);
                    }
                }
                arcs + sides
            };
            let value = run(cfg.arc_nodes);
            let error = (value - run((cfg.arc_nodes / 2).max(2))).abs();
            Ok(Estimate { value, error })
        }
    }
}

/// `∫ φ dμ` over the part of `∂K` whose normal angle lies in `[from, to]`, for
/// smooth planar bodies: `∫_from^to φ(x(θ)) f_K(θ) dθ` by panelled Gauss–Legendre.
pub fn integrate_planar_window<T: Scalar>(
    body: &ConvexBody<T>,
    from: T,
    to: T,
    nodes: usize,
    phi: impl Fn(&BoundaryPoint<T>) -> T,
) -> Result<T> {
    if !body.is_smooth() || body.dim() != 2 {
        return Err(Error::Unsupported("normal-angle windows need a smooth planar body".into()));
    }
    let mut total = T::zero();
    for (theta, w) in gauss_legendre_panels(from, to, T::lit(ARC_PANEL_WIDTH), nodes) {
        let b = body.boundary_point_at_angle(theta)?;
        let fk = b.curvature_function.finite().expect("smooth bodies have finite f_K");
        total = total + w * phi(&b) * fk;
    }
    Ok(total)
}

/// Result of fitting `value(s) = L + Σ C_k s^{e_k}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extrapolation<T> {
    pub limit: T,
    /// Standard error of `L` (or the spread against a reduced model when the
    /// fit has no spare degrees of freedom).
    pub uncertainty: T,
    /// Root-mean-square residual of the fit.
    pub residual: T,
}

/// Least-squares estimate of `lim_{s→0} value(s)` from samples taken at
/// strictly decreasing positive `s`, under the model `L + Σ C_k s^{e_k}`.
pub fn extrapolate_limit<T: Scalar>(samples: &[(T, T)], exponents: &[T]) -> Result<Extrapolation<T>> {
    if samples.len() < 3 {
        return Err(Error::InvalidParameter("extrapolation needs at least 3 samples".into()));
    }
    if samples.len() < exponents.len() + 1 {
        return Err(Error::InvalidParameter("more model terms than samples".into()));
    }
    if samples.windows(2).any(|w| !(w[1].0 < w[0].0)) || samples.iter().any(|s| !(s.0 > T::zero())) {
        return Err(Error::InvalidParameter("sample abscissae must be positive and strictly decreasing".into()));
    }
    let fit = |exps: &[T]| -> Result<(T, T, T)> {
        let rows: Vec<Vec<T>> = samples
            .iter()
            .map(|&(s, _)| std::iter::once(T::one()).chain(exps.iter().map(|&e| s.powf(e))).collect())
            .collect();
        let y: Vec<T> = samples.iter().map(|s| s.1).collect();
        let (coef, cov) = least_squares(&rows, &y)
            .map_err(|_| Error::Numerical("degenerate sample geometry".into()))?;
        let rss = rows.iter().zip(&y).fold(T::zero(), |acc, (r, &yi)| {
            let pred = r.iter().zip(&coef).fold(T::zero(), |a, (&x, &c)| a + x * c);
            acc + (yi - pred) * (yi - pred)
        });
        Ok((coef[0], rss, cov[(0, 0)]))
    };
    let (limit, rss, var0) = fit(exponents)?;
    let n = samples.len();
    let dof = n - exponents.len() - 1;
    let uncertainty = if dof > 0 {
        (rss / T::count(dof) * var0).max(T::zero()).sqrt()
    } else if !exponents.is_empty() {
        (limit - fit(&exponents[..exponents.len() - 1])?.0).abs()
    } else {
        T::zero()
    };
    Ok(Extrapolation { limit, uncertainty, residual: (rss / T::count(n)).sqrt() })
}
