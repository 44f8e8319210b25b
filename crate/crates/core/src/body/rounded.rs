use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::linalg::{dot, norm, sub};
use crate::quadrature::{gauss_legendre_panels, ARC_PANEL_WIDTH};
use crate::scalar::Scalar;

use super::planar::{angle_of, polygon_area, unit, wrap_angle};
use super::polytope::Polytope;
use super::BoundaryPoint;

/// Circular corner arc: center `center`, normals from `start` over `span` radians (ccw).
#[derive(Clone, Debug)]
pub struct CornerArc<T> {
    pub center: [T; 2],
    pub start: T,
    pub span: T,
}

/// Flat side: outer normal angle, support value, endpoints.
#[derive(Clone, Debug)]
pub struct Side<T> {
    pub normal_angle: T,
    pub support: T,
    pub from: [T; 2],
    pub to: [T; 2],
}

impl<T: Scalar> Side<T> {
    pub fn length(&self) -> T {
        norm(&sub(&self.to, &self.from))
    }

    pub fn midpoint(&self) -> [T; 2] {
        let half = T::lit(0.5);
        [(self.from[0] + self.to[0]) * half, (self.from[1] + self.to[1]) * half]
    }
}

/// Minkowski sum of a convex polygon and a disk of radius `epsilon`: flat sides
/// alternating with circular corner arcs.
#[derive(Clone, Debug)]
pub struct RoundedPolygon<T: Scalar> {
    base: Polytope<T>,
    epsilon: T,
    arcs: Vec<CornerArc<T>>,
    sides: Vec<Side<T>>,
    volume: T,
    polar_volume: T,
}

impl<T: Scalar> RoundedPolygon<T> {
    pub fn new(base: Polytope<T>, epsilon: T) -> Result<Self> {
        if base.dim() != 2 {
            return Err(Error::InvalidBody("rounded polygons are planar".into()));
        }
        if !(epsilon > T::zero()) {
            return Err(Error::InvalidBody("rounding radius must be positive".into()));
        }
        // origin is interior, so sorting by polar angle gives the ccw ring
        let mut ring: Vec<[T; 2]> = base.vertices().iter().map(|v| [v[0], v[1]]).collect();
        ring.sort_by(|a, b| angle_of(a[0], a[1]).partial_cmp(&angle_of(b[0], b[1])).unwrap());
        let k = ring.len();
        let mut sides = Vec::with_capacity(k);
        for i in 0..k {
            let (a, b) = (ring[i], ring[(i + 1) % k]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let normal_angle = angle_of(dy, -dx);
            let u = unit(normal_angle);
            let shift = [u[0] * epsilon, u[1] * epsilon];
            sides.push(Side {
                normal_angle,
                support: u[0] * a[0] + u[1] * a[1] + epsilon,
                from: [a[0] + shift[0], a[1] + shift[1]],
                to: [b[0] + shift[0], b[1] + shift[1]],
            });
        }
        let arcs: Vec<CornerArc<T>> = (0..k)
            .map(|i| {
                let incoming = sides[(i + k - 1) % k].normal_angle;
                let outgoing = sides[i].normal_angle;
                CornerArc { center: ring[i], start: incoming, span: wrap_angle(outgoing - incoming) }
            })
            .collect();
        let perimeter = sides.iter().fold(T::zero(), |acc, s| acc + s.length());
        let volume = polygon_area(&ring) + epsilon * perimeter + T::PI() * epsilon * epsilon;
        let mut body = RoundedPolygon { base, epsilon, arcs, sides, volume, polar_volume: T::zero() };
        body.polar_volume = body.arc_integral(64, |p| T::lit(0.5) / (p.support * p.support)) / epsilon;
        Ok(body)
    }

    pub fn base(&self) -> &Polytope<T> {
        &self.base
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn arcs(&self) -> &[CornerArc<T>] {
        &self.arcs
    }

    pub fn sides(&self) -> &[Side<T>] {
        &self.sides
    }

    pub fn volume(&self) -> T {
        self.volume
    }

    pub fn polar_volume(&self) -> T {
        self.polar_volume
    }

    pub fn support(&self, u: &[T]) -> T {
        self.base.support(u) + self.epsilon
    }

    fn arc_point(&self, arc: &CornerArc<T>, theta: T) -> BoundaryPoint<T> {
        let u = unit(theta);
        let x = vec![arc.center[0] + self.epsilon * u[0], arc.center[1] + self.epsilon * u[1]];
        BoundaryPoint {
            support: dot(&x, &u),
            x,
            normal: u.to_vec(),
            curvature: T::one() / self.epsilon,
            curvature_function: Extended::Finite(self.epsilon),
        }
    }

    /// Boundary point with normal angle `theta`; a side's normal resolves to the
    /// side midpoint with zero curvature.
    pub fn point_at(&self, theta: T) -> BoundaryPoint<T> {
        let theta = wrap_angle(theta);
        let tol = T::tol(1e-12);
        for s in &self.sides {
            let d = wrap_angle(theta - s.normal_angle);
            if d <= tol || T::TAU() - d <= tol {
                let m = s.midpoint();
                let u = unit(s.normal_angle);
                return BoundaryPoint {
                    x: m.to_vec(),
                    normal: u.to_vec(),
                    support: s.support,
                    curvature: T::zero(),
                    curvature_function: Extended::PosInf,
                };
            }
        }
        let arc = self
            .arcs
            .iter()
            .find(|a| wrap_angle(theta - a.start) <= a.span)
            .expect("corner arcs cover every normal direction");
        self.arc_point(arc, theta)
    }

    /// `∫ φ dμ` over the corner arcs, by Gauss–Legendre in the normal angle.
    pub fn arc_integral(&self, nodes: usize, phi: impl Fn(&BoundaryPoint<T>) -> T) -> T {
        self.arc_integral_within(nodes, None, phi)
    }

    /// As [`RoundedPolygon::arc_integral`], restricted to normals in the ccw
    /// window `[from, from + span]` when given.
    pub fn arc_integral_within(
        &self,
        nodes: usize,
        window: Option<(T, T)>,
        phi: impl Fn(&BoundaryPoint<T>) -> T,
    ) -> T {
        let mut total = T::zero();
        for arc in &self.arcs {
            for (lo, hi) in clip_interval(arc.start, arc.span, window) {
                let rule = gauss_legendre_panels(lo, hi, T::lit(ARC_PANEL_WIDTH), nodes);
                for (t, w) in rule {
                    total = total + w * phi(&self.arc_point(arc, t)) * self.epsilon;
                }
            }
        }
        total
    }
}

/// Parts of the ccw interval `[start, start + span]` inside the optional ccw
/// window, as absolute (unwrapped) angle pairs.
pub(crate) fn clip_interval<T: Scalar>(start: T, span: T, window: Option<(T, T)>) -> Vec<(T, T)> {
    let Some((from, wspan)) = window else {
        return vec![(start, start + span)];
    };
    if wspan >= T::TAU() {
        return vec![(start, start + span)];
    }
    // work in coordinates relative to the window start
    let rel = wrap_angle(start - from);
    let mut out = Vec::new();
    for shift in [-T::TAU(), T::zero()] {
        let lo = (rel + shift).max(T::zero());
        let hi = (rel + shift + span).min(wspan);
        if hi > lo {
            out.push((from + lo, from + hi));
        }
    }
    out
}
