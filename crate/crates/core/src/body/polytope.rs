use crate::error::{Error, Result};
use crate::linalg::{dot, norm, orthonormal_basis, sub, Matrix};
use crate::scalar::Scalar;

use super::planar::{self, HalfPlane};

/// `{x : ⟨normal, x⟩ ≤ offset}` with a unit normal and positive offset.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

impl<T: Scalar> Halfspace<T> {
    /// Normalizes `normal` to unit length, scaling `offset` along with it.
    pub fn new(normal: Vec<T>, offset: T) -> Result<Self> {
        let len = norm(&normal);
        if !(len > T::zero()) {
            return Err(Error::InvalidBody("halfspace with zero normal".into()));
        }
        Ok(Halfspace { normal: normal.iter().map(|&c| c / len).collect(), offset: offset / len })
    }

    fn slack(&self, x: &[T]) -> T {
        self.offset - dot(&self.normal, x)
    }
}

/// A convex polytope kept in both H- and V-representation.
#[derive(Clone, Debug)]
pub struct Polytope<T: Scalar> {
    dim: usize,
    halfspaces: Vec<Halfspace<T>>,
    vertices: Vec<Vec<T>>,
    facets: Vec<Vec<usize>>,
    facet_measures: Vec<T>,
    volume: T,
    polar_volume: T,
}

fn incidence_tol<T: Scalar>(offset: T) -> T {
    T::tol(1e-9) * (T::one() + offset.abs())
}

impl<T: Scalar> Polytope<T> {
    /// From an H-representation; vertices are enumerated (n ≤ 3).
    pub fn from_halfspaces(dim: usize, halfspaces: Vec<Halfspace<T>>) -> Result<Self> {
        check_dims(dim, halfspaces.iter().map(|h| h.normal.len()))?;
        let vertices = match dim {
            2 => vertices_2d(&halfspaces)?,
            3 => vertices_3d(&halfspaces),
            _ => {
                return Err(Error::Unsupported(
                    "vertex enumeration is only available for n <= 3; pass both representations"
                        .into(),
                ))
            }
        };
        Self::assemble(dim, halfspaces, vertices)
    }

    /// From a V-representation (convex hull of the points, n ≤ 3).
    pub fn from_vertices(dim: usize, points: Vec<Vec<T>>) -> Result<Self> {
        check_dims(dim, points.iter().map(|p| p.len()))?;
        match dim {
            2 => {
                let pts: Vec<[T; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
                let hull = planar::convex_hull(&pts);
                if hull.len() < 3 {
                    return Err(Error::InvalidBody("polygon needs three affinely independent points".into()));
                }
                let ring: Vec<Vec<T>> = hull.iter().map(|&i| points[i].clone()).collect();
                let mut hs = Vec::with_capacity(ring.len());
                for i in 0..ring.len() {
                    let (a, b) = (&ring[i], &ring[(i + 1) % ring.len()]);
                    let normal = vec![b[1] - a[1], a[0] - b[0]];
                    let offset = dot(&normal, a);
                    hs.push(Halfspace::new(normal, offset)?);
                }
                Self::assemble(dim, hs, ring)
            }
            3 => {
                let hs = facets_3d(&points)?;
                Self::from_halfspaces(3, hs)
            }
            _ => Err(Error::Unsupported(
                "hull computation is only available for n <= 3; pass both representations".into(),
            )),
        }
    }

    /// From both representations at once (any dimension); consistency is validated.
    pub fn from_both(dim: usize, halfspaces: Vec<Halfspace<T>>, vertices: Vec<Vec<T>>) -> Result<Self> {
        check_dims(dim, halfspaces.iter().map(|h| h.normal.len()))?;
        check_dims(dim, vertices.iter().map(|p| p.len()))?;
        Self::assemble(dim, halfspaces, vertices)
    }

    /// Regular `k`-gon with the given circumradius, first vertex at angle `phase`.
    pub fn regular_polygon(k: usize, circumradius: T, phase: T) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidParameter("a polygon needs at least 3 vertices".into()));
        }
        let pts = (0..k)
            .map(|j| {
                let a = phase + T::TAU() * T::count(j) / T::count(k);
                vec![circumradius * a.cos(), circumradius * a.sin()]
            })
            .collect();
        Self::from_vertices(2, pts)
    }

    /// The cube `[−half, half]ⁿ`.
    pub fn cube(dim: usize, half: T) -> Result<Self> {
        let mut hs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for sign in [T::one(), -T::one()] {
                let mut normal = vec![T::zero(); dim];
                normal[i] = sign;
                hs.push(Halfspace::new(normal, half)?);
            }
        }
        let vertices = (0..1usize << dim)
            .map(|mask| {
                (0..dim).map(|i| if mask >> i & 1 == 1 { half } else { -half }).collect()
            })
            .collect();
        Self::from_both(dim, hs, vertices)
    }

    fn assemble(dim: usize, halfspaces: Vec<Halfspace<T>>, vertices: Vec<Vec<T>>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidBody("polytope dimension must be at least 2".into()));
        }
        for h in &halfspaces {
            if !(h.offset > T::zero()) {
                return Err(Error::InvalidBody(
                    "origin must lie in the interior (every offset positive)".into(),
                ));
            }
        }
        for v in &vertices {
            if let Some(h) = halfspaces.iter().find(|h| h.slack(v) < -incidence_tol(h.offset)) {
                return Err(Error::InvalidBody(format!(
                    "vertex {v:?} violates halfspace {:?} <= {}",
                    h.normal, h.offset
                )));
            }
        }
        // keep only halfspaces that carry a genuine facet
        let mut kept = Vec::new();
        let mut facets = Vec::new();
        for h in halfspaces {
            let on: Vec<usize> = (0..vertices.len())
                .filter(|&i| h.slack(&vertices[i]).abs() <= incidence_tol(h.offset))
                .collect();
            if affine_rank(&vertices, &on) + 1 == dim {
                kept.push(h);
                facets.push(on);
            }
        }
        let all: Vec<usize> = (0..vertices.len()).collect();
        if affine_rank(&vertices, &all) != dim {
            return Err(Error::InvalidBody("polytope is not full-dimensional".into()));
        }
        let facet_measures: Vec<T> =
            facets.iter().map(|f| face_measure(&vertices, f, dim - 1, &kept)).collect();
        let volume = kept
            .iter()
            .zip(&facet_measures)
            .fold(T::zero(), |acc, (h, &m)| acc + h.offset * m)
            / T::count(dim);
        let check = face_measure(&vertices, &all, dim, &kept);
        if (check - volume).abs() > T::tol(1e-8) * volume {
            return Err(Error::InvalidBody("inconsistent H/V representations".into()));
        }
        let polar_volume = dual_volume(dim, &kept, &vertices)?;
        Ok(Polytope { dim, halfspaces: kept, vertices, facets, facet_measures, volume, polar_volume })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace<T>] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    /// Vertex indices lying on each facet, parallel to [`Polytope::halfspaces`].
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// (n−1)-dimensional measure of each facet.
    pub fn facet_measures(&self) -> &[T] {
        &self.facet_measures
    }

    pub fn volume(&self) -> T {
        self.volume
    }

    pub fn polar_volume(&self) -> T {
        self.polar_volume
    }

    pub fn support(&self, u: &[T]) -> T {
        self.vertices.iter().map(|v| dot(v, u)).fold(T::neg_infinity(), T::max)
    }

    /// Index of the facet whose outer normal is `u`, if any.
    pub fn facet_with_normal(&self, u: &[T]) -> Option<usize> {
        self.halfspaces.iter().position(|h| norm(&sub(&h.normal, u)) <= T::tol(1e-9))
    }

    pub fn linear_image(&self, map: &Matrix<T>) -> Result<Self> {
        let inv_t = map.inverse()?.transpose();
        let vertices = self.vertices.iter().map(|v| map.apply(v)).collect();
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| Halfspace::new(inv_t.apply(&h.normal), h.offset))
            .collect::<Result<Vec<_>>>()?;
        Self::from_both(self.dim, halfspaces, vertices)
    }
}

fn check_dims(dim: usize, lens: impl Iterator<Item = usize>) -> Result<()> {
    for got in lens {
        if got != dim {
            return Err(Error::DimensionMismatch { expected: dim, got });
        }
    }
    Ok(())
}

/// Dimension of the affine hull of the selected points.
fn affine_rank<T: Scalar>(points: &[Vec<T>], ids: &[usize]) -> usize {
    if ids.is_empty() {
        return 0;
    }
    let base = &points[ids[0]];
    let scale = ids.iter().fold(T::one(), |m, &i| m.max(norm(&points[i])));
    let diffs: Vec<Vec<T>> = ids[1..].iter().map(|&i| sub(&points[i], base)).collect();
    orthonormal_basis(&diffs, T::tol(1e-9) * scale).len()
}

/// k-dimensional measure of the convex hull of `ids`, which spans a k-dimensional
/// affine subspace, by coning from its centroid over the (k−1)-faces cut out by
/// the supporting hyperplanes.
fn face_measure<T: Scalar>(points: &[Vec<T>], ids: &[usize], k: usize, hs: &[Halfspace<T>]) -> T {
    if k == 0 {
        return T::one();
    }
    let n = points[0].len();
    let inv = T::one() / T::count(ids.len());
    let centroid: Vec<T> = (0..n)
        .map(|j| ids.iter().fold(T::zero(), |acc, &i| acc + points[i][j]) * inv)
        .collect();
    let scale = ids.iter().fold(T::one(), |m, &i| m.max(norm(&points[i])));
    let diffs: Vec<Vec<T>> = ids.iter().map(|&i| sub(&points[i], &centroid)).collect();
    let basis = orthonormal_basis(&diffs, T::tol(1e-9) * scale);
    if k == 1 {
        let proj: Vec<T> = diffs.iter().map(|d| dot(d, &basis[0])).collect();
        let hi = proj.iter().cloned().fold(T::neg_infinity(), T::max);
        let lo = proj.iter().cloned().fold(T::infinity(), T::min);
        return hi - lo;
    }
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut total = T::zero();
    for h in hs {
        let sub_ids: Vec<usize> =
            ids.iter().copied().filter(|&i| h.slack(&points[i]).abs() <= incidence_tol(h.offset)).collect();
        if sub_ids.len() < k || seen.contains(&sub_ids) {
            continue;
        }
        let projected: Vec<T> = basis.iter().map(|e| dot(&h.normal, e)).collect();
        let pn = norm(&projected);
        if pn <= T::tol(1e-9) || affine_rank(points, &sub_ids) + 1 != k {
            continue;
        }
        let dist = (h.offset - dot(&h.normal, &centroid)) / pn;
        total = total + dist * face_measure(points, &sub_ids, k - 1, hs);
        seen.push(sub_ids);
    }
    total / T::count(k)
}

/// Volume of the polar polytope: its facets come from the vertices `v` as
/// `⟨v, y⟩ ≤ 1`, its vertices from the facets as `a / b`.
fn dual_volume<T: Scalar>(dim: usize, hs: &[Halfspace<T>], vertices: &[Vec<T>]) -> Result<T> {
    let dual_hs = vertices
        .iter()
        .map(|v| Halfspace::new(v.clone(), T::one()))
        .collect::<Result<Vec<_>>>()?;
    let dual_vertices: Vec<Vec<T>> =
        hs.iter().map(|h| h.normal.iter().map(|&c| c / h.offset).collect()).collect();
    let all: Vec<usize> = (0..dual_vertices.len()).collect();
    Ok(face_measure(&dual_vertices, &all, dim, &dual_hs))
}

fn vertices_2d<T: Scalar>(hs: &[Halfspace<T>]) -> Result<Vec<Vec<T>>> {
    let planes: Vec<HalfPlane<T>> = hs
        .iter()
        .map(|h| HalfPlane { angle: planar::angle_of(h.normal[0], h.normal[1]), offset: h.offset })
        .collect();
    let ring = planar::halfplane_intersection(&planes)
        .ok_or_else(|| Error::InvalidBody("halfspaces do not bound a polygon".into()))?;
    let mut out: Vec<Vec<T>> = Vec::with_capacity(ring.len());
    for p in ring {
        let v = vec![p[0], p[1]];
        if out.last().is_none_or(|q| norm(&sub(q, &v)) > T::tol(1e-12)) {
            out.push(v);
        }
    }
    if out.len() > 1 && norm(&sub(&out[0], out.last().unwrap())) <= T::tol(1e-12) {
        out.pop();
    }
    Ok(out)
}

fn vertices_3d<T: Scalar>(hs: &[Halfspace<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = Vec::new();
    let m = hs.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let rows = vec![hs[i].normal.clone(), hs[j].normal.clone(), hs[k].normal.clone()];
                let a = Matrix::from_rows(&rows).expect("3x3");
                if a.det().abs() <= T::tol(1e-12) {
                    continue;
                }
                let Ok(x) = a.solve(&[hs[i].offset, hs[j].offset, hs[k].offset]) else {
                    continue;
                };
                if hs.iter().all(|h| h.slack(&x) >= -incidence_tol(h.offset))
                    && out.iter().all(|q| norm(&sub(q, &x)) > T::tol(1e-9))
                {
                    out.push(x);
                }
            }
        }
    }
    out
}

fn facets_3d<T: Scalar>(points: &[Vec<T>]) -> Result<Vec<Halfspace<T>>> {
    let mut out: Vec<Halfspace<T>> = Vec::new();
    let m = points.len();
    let scale = points.iter().fold(T::one(), |s, p| s.max(norm(p)));
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let (a, b) = (sub(&points[j], &points[i]), sub(&points[k], &points[i]));
                let n = vec![
                    a[1] * b[2] - a[2] * b[1],
                    a[2] * b[0] - a[0] * b[2],
                    a[0] * b[1] - a[1] * b[0],
                ];
                let len = norm(&n);
                if len <= T::tol(1e-12) * scale * scale {
                    continue;
                }
                let mut n: Vec<T> = n.iter().map(|&c| c / len).collect();
                let mut off = dot(&n, &points[i]);
                let tol = T::tol(1e-9) * scale;
                let above = points.iter().any(|p| dot(&n, p) > off + tol);
                let below = points.iter().any(|p| dot(&n, p) < off - tol);
                if above && below {
                    continue;
                }
                if above {
                    n = n.iter().map(|&c| -c).collect();
                    off = -off;
                }
                if out.iter().all(|h| norm(&sub(&h.normal, &n)) > T::tol(1e-9)) {
                    out.push(Halfspace { normal: n, offset: off });
                }
            }
        }
    }
    Ok(out)
}
