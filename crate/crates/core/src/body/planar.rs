//! Planar helpers: angles, hulls, half-plane intersection, shoelace area.

use std::collections::VecDeque;

use crate::scalar::Scalar;

pub type Point2<T> = [T; 2];

/// Angle of `(x, y)` in `[0, 2π)`.
pub fn angle_of<T: Scalar>(x: T, y: T) -> T {
    let a = y.atan2(x);
    if a < T::zero() {
        a + T::TAU()
    } else {
        a
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle<T: Scalar>(a: T) -> T {
    let r = a % T::TAU();
    if r < T::zero() {
        r + T::TAU()
    } else {
        r
    }
}

pub fn unit<T: Scalar>(angle: T) -> Point2<T> {
    let (s, c) = angle.sin_cos();
    [c, s]
}

pub fn cross<T: Scalar>(a: Point2<T>, b: Point2<T>) -> T {
    a[0] * b[1] - a[1] * b[0]
}

/// Signed shoelace area, positive for counter-clockwise rings.
pub fn polygon_area<T: Scalar>(ring: &[Point2<T>]) -> T {
    let n = ring.len();
    let mut twice = T::zero();
    for i in 0..n {
        twice = twice + cross(ring[i], ring[(i + 1) % n]);
    }
    twice / T::lit(2.0)
}

/// Convex hull by Andrew's monotone chain; returns indices in counter-clockwise
/// order with collinear points dropped.
pub fn convex_hull<T: Scalar>(points: &[Point2<T>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a][0]
            .partial_cmp(&points[b][0])
            .unwrap()
            .then(points[a][1].partial_cmp(&points[b][1]).unwrap())
    });
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let turn = |o: usize, a: usize, b: usize| {
        let (po, pa, pb) = (points[o], points[a], points[b]);
        cross([pa[0] - po[0], pa[1] - po[1]], [pb[0] - po[0], pb[1] - po[1]])
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2
                && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= T::zero()
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// The half-plane `{x : ⟨(cos a, sin a), x⟩ ≤ offset}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane<T> {
    pub angle: T,
    pub offset: T,
}

impl<T: Scalar> HalfPlane<T> {
    pub fn normal(&self) -> Point2<T> {
        unit(self.angle)
    }

    fn excess(&self, p: Point2<T>) -> T {
        let n = self.normal();
        n[0] * p[0] + n[1] * p[1] - self.offset
    }

    fn meet(&self, other: &Self) -> Option<Point2<T>> {
        let (a, b) = (self.normal(), other.normal());
        let det = cross(a, b);
        if det.abs() <= T::epsilon() {
            return None;
        }
        Some([
            (self.offset * b[1] - other.offset * a[1]) / det,
            (a[0] * other.offset - b[0] * self.offset) / det,
        ])
    }
}

/// Intersection of half-planes whose normals leave no angular gap of π or more,
/// so the result is bounded. Returns the counter-clockwise vertex ring, or
/// `None` if the intersection is empty or degenerate.
pub fn halfplane_intersection<T: Scalar>(planes: &[HalfPlane<T>]) -> Option<Vec<Point2<T>>> {
    let mut sorted: Vec<HalfPlane<T>> = planes
        .iter()
        .map(|h| HalfPlane { angle: wrap_angle(h.angle), offset: h.offset })
        .collect();
    sorted.sort_by(|a, b| {
        a.angle.partial_cmp(&b.angle).unwrap().then(a.offset.partial_cmp(&b.offset).unwrap())
    });
    let angle_tol = T::tol(1e-13);
    sorted.dedup_by(|later, earlier| (later.angle - earlier.angle).abs() <= angle_tol);
    if sorted.len() < 3 {
        return None;
    }
    let scale = sorted.iter().fold(T::one(), |m, h| m.max(h.offset.abs()));
    let slack = T::tol(1e-12) * scale;
    let outside = |h: &HalfPlane<T>, p: Option<Point2<T>>| match p {
        Some(p) => h.excess(p) > slack,
        None => true,
    };

    let mut dq: VecDeque<HalfPlane<T>> = VecDeque::with_capacity(sorted.len());
    for h in sorted.iter() {
        while dq.len() >= 2 && outside(h, dq[dq.len() - 2].meet(&dq[dq.len() - 1])) {
            dq.pop_back();
        }
        while dq.len() >= 2 && outside(h, dq[0].meet(&dq[1])) {
            dq.pop_front();
        }
        dq.push_back(*h);
    }
    while dq.len() >= 3 && outside(&dq[0], dq[dq.len() - 2].meet(&dq[dq.len() - 1])) {
        dq.pop_back();
    }
    while dq.len() >= 3 && outside(&dq[dq.len() - 1], dq[0].meet(&dq[1])) {
        dq.pop_front();
    }
    if dq.len() < 3 {
        return None;
    }
    let n = dq.len();
    let mut ring = Vec::with_capacity(n);
    for i in 0..n {
        ring.push(dq[i].meet(&dq[(i + 1) % n])?);
    }
    let ok = ring.iter().all(|&p| sorted.iter().all(|h| h.excess(p) <= T::tol(1e-9) * scale));
    if !ok || polygon_area(&ring) <= T::zero() {
        return None;
    }
    Some(ring)
}
