//! Convex bodies containing the origin in their interior, with the support
//! function, Gauss-map and curvature data the divergence integrals consume.

mod ellipsoid;
pub mod planar;
mod polytope;
mod rounded;
mod smooth2d;

pub use ellipsoid::Ellipsoid;
pub use polytope::{Halfspace, Polytope};
pub use rounded::{CornerArc, RoundedPolygon, Side};
pub use smooth2d::{fd_step, Smooth2d, SupportProfile, SMOOTH_VOLUME_NODES};

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::linalg::{norm, Matrix};
use crate::scalar::Scalar;

/// A point of `∂K` with its outer normal and curvature data.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPoint<T> {
    pub x: Vec<T>,
    pub normal: Vec<T>,
    /// `⟨x, N_K(x)⟩`.
    pub support: T,
    /// Gauss curvature κ.
    pub curvature: T,
    /// Reciprocal of κ, `+∞` on flat pieces.
    pub curvature_function: Extended<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BodyKind {
    Ellipsoid,
    Polytope,
    Smooth2d,
    RoundedPolygon,
}

impl BodyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BodyKind::Ellipsoid => "ellipsoid",
            BodyKind::Polytope => "polytope",
            BodyKind::Smooth2d => "smooth2d",
            BodyKind::RoundedPolygon => "rounded_polygon",
        }
    }
}

#[derive(Clone, Debug)]
pub enum ConvexBody<T: Scalar> {
    Ellipsoid(Ellipsoid<T>),
    Polytope(Polytope<T>),
    Smooth2d(Smooth2d<T>),
    RoundedPolygon(RoundedPolygon<T>),
}

impl<T: Scalar> From<Ellipsoid<T>> for ConvexBody<T> {
    fn from(e: Ellipsoid<T>) -> Self {
        ConvexBody::Ellipsoid(e)
    }
}

impl<T: Scalar> From<Polytope<T>> for ConvexBody<T> {
    fn from(p: Polytope<T>) -> Self {
        ConvexBody::Polytope(p)
    }
}

impl<T: Scalar> From<Smooth2d<T>> for ConvexBody<T> {
    fn from(s: Smooth2d<T>) -> Self {
        ConvexBody::Smooth2d(s)
    }
}

impl<T: Scalar> From<RoundedPolygon<T>> for ConvexBody<T> {
    fn from(r: RoundedPolygon<T>) -> Self {
        ConvexBody::RoundedPolygon(r)
    }
}

impl<T: Scalar> ConvexBody<T> {
    pub fn unit_disk() -> Self {
        Ellipsoid::ball(2, T::one()).expect("unit disk").into()
    }

    /// Axis-aligned ellipse with semi-axes `a`, `b`.
    pub fn ellipse(a: T, b: T) -> Result<Self> {
        Ok(Ellipsoid::axis_aligned(&[a, b])?.into())
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Ellipsoid(e) => e.dim(),
            ConvexBody::Polytope(p) => p.dim(),
            ConvexBody::Smooth2d(_) | ConvexBody::RoundedPolygon(_) => 2,
        }
    }

    pub fn kind(&self) -> BodyKind {
        match self {
            ConvexBody::Ellipsoid(_) => BodyKind::Ellipsoid,
            ConvexBody::Polytope(_) => BodyKind::Polytope,
            ConvexBody::Smooth2d(_) => BodyKind::Smooth2d,
            ConvexBody::RoundedPolygon(_) => BodyKind::RoundedPolygon,
        }
    }

    /// C² boundary with strictly positive curvature.
    pub fn is_smooth(&self) -> bool {
        matches!(self, ConvexBody::Ellipsoid(_) | ConvexBody::Smooth2d(_))
    }

    pub fn volume(&self) -> T {
        match self {
            ConvexBody::Ellipsoid(e) => e.volume(),
            ConvexBody::Polytope(p) => p.volume(),
            ConvexBody::Smooth2d(s) => s.volume(),
            ConvexBody::RoundedPolygon(r) => r.volume(),
        }
    }

    /// Volume of the polar body `K°`.
    pub fn polar_volume(&self) -> T {
        match self {
            ConvexBody::Ellipsoid(e) => e.polar_volume(),
            ConvexBody::Polytope(p) => p.polar_volume(),
            ConvexBody::Smooth2d(s) => s.polar_volume(),
            ConvexBody::RoundedPolygon(r) => r.polar_volume(),
        }
    }

    fn check_direction(&self, u: &[T]) -> Result<()> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.len() });
        }
        let len = norm(u);
        if (len - T::one()).abs() > T::tol(1e-9) {
            return Err(Error::NotUnit(len.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(())
    }

    /// Support function `h_K(u) = max_{x∈K} ⟨x, u⟩` for a unit vector `u`.
    pub fn support(&self, u: &[T]) -> Result<T> {
        self.check_direction(u)?;
        Ok(match self {
            ConvexBody::Ellipsoid(e) => e.support(u),
            ConvexBody::Polytope(p) => p.support(u),
            ConvexBody::Smooth2d(s) => s.support_at(planar::angle_of(u[0], u[1])),
            ConvexBody::RoundedPolygon(r) => r.support(u),
        })
    }

    /// Boundary point with outer normal `u`. Polytopes are rejected since their
    /// Gauss map is not invertible.
    pub fn boundary_point(&self, u: &[T]) -> Result<BoundaryPoint<T>> {
        self.check_direction(u)?;
        match self {
            ConvexBody::Ellipsoid(e) => Ok(e.boundary_point(u)),
            ConvexBody::Polytope(_) => Err(Error::Unsupported(
                "polytope boundary points are not determined by their normal".into(),
            )),
            ConvexBody::Smooth2d(s) => Ok(s.point_at(planar::angle_of(u[0], u[1]))),
            ConvexBody::RoundedPolygon(r) => Ok(r.point_at(planar::angle_of(u[0], u[1]))),
        }
    }

    /// Planar shortcut for [`ConvexBody::boundary_point`] by normal angle.
    pub fn boundary_point_at_angle(&self, theta: T) -> Result<BoundaryPoint<T>> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: self.dim() });
        }
        let (s, c) = theta.sin_cos();
        match self {
            ConvexBody::Smooth2d(b) => Ok(b.point_at(theta)),
            ConvexBody::RoundedPolygon(r) => Ok(r.point_at(theta)),
            _ => self.boundary_point(&[c, s]),
        }
    }

    /// Curvature function `f_K(u) = 1/κ`. For polytopes this is diagnostic only:
    /// `+∞` at facet normals, `0` elsewhere.
    pub fn curvature_function(&self, u: &[T]) -> Result<Extended<T>> {
        self.check_direction(u)?;
        Ok(match self {
            ConvexBody::Ellipsoid(e) => Extended::Finite(e.curvature_function(u)),
            ConvexBody::Polytope(p) => match p.facet_with_normal(u) {
                Some(_) => Extended::PosInf,
                None => Extended::zero(),
            },
            ConvexBody::Smooth2d(s) => {
                Extended::Finite(s.support_and_radius(planar::angle_of(u[0], u[1])).1)
            }
            ConvexBody::RoundedPolygon(r) => r.point_at(planar::angle_of(u[0], u[1])).curvature_function,
        })
    }

    /// Image `T(K)` under an invertible linear map.
    pub fn linear_image(&self, map: &Matrix<T>) -> Result<Self> {
        if map.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: map.dim() });
        }
        if map.det() == T::zero() {
            return Err(Error::SingularMap);
        }
        match self {
            ConvexBody::Ellipsoid(e) => Ok(e.linear_image(map)?.into()),
            ConvexBody::Polytope(p) => Ok(p.linear_image(map)?.into()),
            ConvexBody::Smooth2d(s) => Ok(s.linear_image(map)?.into()),
            ConvexBody::RoundedPolygon(_) => Err(Error::Unsupported(
                "linear images of rounded polygons are not rounded polygons".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supports_from_examples() {
        let ball = ConvexBody::<f64>::from(Ellipsoid::ball(3, 1.0).unwrap());
        assert_eq!(ball.support(&[0.0, 0.0, 1.0]).unwrap(), 1.0);
        let e = ConvexBody::<f64>::ellipse(2.0, 1.0).unwrap();
        assert_eq!(e.support(&[1.0, 0.0]).unwrap(), 2.0);
        let sq: ConvexBody<f64> = Polytope::cube(2, 1.0).unwrap().into();
        let d = 0.5f64.sqrt();
        assert!((sq.support(&[d, d]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn direction_validation() {
        let e = ConvexBody::<f64>::ellipse(2.0, 1.0).unwrap();
        assert!(matches!(e.support(&[1.0, 1.0]), Err(Error::NotUnit(_))));
        assert!(matches!(e.support(&[1.0, 0.0, 0.0]), Err(Error::DimensionMismatch { .. })));
        assert!(e.support(&[1.0 + 1e-12, 0.0]).is_ok());
    }

    #[test]
    fn polytope_boundary_points_are_rejected() {
        let sq: ConvexBody<f64> = Polytope::cube(2, 1.0).unwrap().into();
        assert!(matches!(sq.boundary_point(&[1.0, 0.0]), Err(Error::Unsupported(_))));
        assert_eq!(sq.curvature_function(&[1.0, 0.0]).unwrap(), Extended::PosInf);
        let d = 0.5f64.sqrt();
        assert_eq!(sq.curvature_function(&[d, d]).unwrap(), Extended::zero());
    }

    #[test]
    fn linear_images_by_kind() {
        let disk = ConvexBody::<f64>::unit_disk();
        let img = disk.linear_image(&Matrix::diagonal(&[2.0, 1.0])).unwrap();
        assert_eq!(img.kind(), BodyKind::Ellipsoid);
        assert!((img.volume() - 2.0 * std::f64::consts::PI).abs() < 1e-13);
        assert!(matches!(disk.linear_image(&Matrix::diagonal(&[1.0, 0.0])), Err(Error::SingularMap)));
        let r: ConvexBody<f64> = RoundedPolygon::new(Polytope::cube(2, 1.0).unwrap(), 0.1).unwrap().into();
        assert!(r.linear_image(&Matrix::identity(2)).is_err());
    }

    #[test]
    fn kinds_and_smoothness() {
        let r: ConvexBody<f64> = RoundedPolygon::new(Polytope::cube(2, 1.0).unwrap(), 0.1).unwrap().into();
        assert_eq!(r.kind().as_str(), "rounded_polygon");
        assert!(!r.is_smooth());
        assert!(ConvexBody::<f64>::unit_disk().is_smooth());
    }
}
