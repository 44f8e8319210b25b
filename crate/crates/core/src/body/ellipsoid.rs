use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::scalar::{unit_ball_volume, Scalar};

use super::BoundaryPoint;
use crate::extended::Extended;

/// The ellipsoid `{x : xᵀ M⁻¹ x ≤ 1}` for a symmetric positive-definite shape matrix `M`.
#[derive(Clone, Debug)]
pub struct Ellipsoid<T: Scalar> {
    shape: Matrix<T>,
    det: T,
    volume: T,
    polar_volume: T,
}

impl<T: Scalar> Ellipsoid<T> {
    pub fn new(shape: Matrix<T>) -> Result<Self> {
        let n = shape.dim();
        if n < 2 {
            return Err(Error::InvalidBody("ellipsoid dimension must be at least 2".into()));
        }
        if !shape.is_symmetric(T::tol(1e-12)) {
            return Err(Error::InvalidBody("ellipsoid shape matrix is not symmetric".into()));
        }
        if !shape.is_positive_definite() {
            return Err(Error::InvalidBody("ellipsoid shape matrix is not positive definite".into()));
        }
        let det = shape.det();
        let ball = unit_ball_volume::<T>(n);
        let root = det.sqrt();
        Ok(Ellipsoid { shape, det, volume: ball * root, polar_volume: ball / root })
    }

    /// Axis-aligned ellipsoid with the given semi-axes.
    pub fn axis_aligned(semi_axes: &[T]) -> Result<Self> {
        let diag: Vec<T> = semi_axes.iter().map(|&a| a * a).collect();
        Self::new(Matrix::diagonal(&diag))
    }

    pub fn ball(n: usize, radius: T) -> Result<Self> {
        Self::axis_aligned(&vec![radius; n])
    }

    pub fn shape(&self) -> &Matrix<T> {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn volume(&self) -> T {
        self.volume
    }

    pub fn polar_volume(&self) -> T {
        self.polar_volume
    }

    pub fn support(&self, u: &[T]) -> T {
        self.shape.quadratic_form(u).sqrt()
    }

    /// Curvature function `det M / (uᵀ M u)^{(n+1)/2}`.
    pub fn curvature_function(&self, u: &[T]) -> T {
        let n1 = T::count(self.dim() + 1);
        self.det / self.shape.quadratic_form(u).powf(n1 / T::lit(2.0))
    }

    pub fn boundary_point(&self, u: &[T]) -> BoundaryPoint<T> {
        let mu = self.shape.apply(u);
        let h = dot(u, &mu).sqrt();
        let x: Vec<T> = mu.iter().map(|&c| c / h).collect();
        let fk = self.curvature_function(u);
        BoundaryPoint {
            x,
            normal: u.to_vec(),
            support: h,
            curvature: T::one() / fk,
            curvature_function: Extended::Finite(fk),
        }
    }

    pub fn linear_image(&self, map: &Matrix<T>) -> Result<Self> {
        let tm = map * &self.shape;
        let mut image = &tm * &map.transpose();
        // restore exact symmetry lost to rounding
        let n = image.dim();
        for i in 0..n {
            for j in 0..i {
                let avg = (image[(i, j)] + image[(j, i)]) / T::lit(2.0);
                image[(i, j)] = avg;
                image[(j, i)] = avg;
            }
        }
        Self::new(image)
    }
}
