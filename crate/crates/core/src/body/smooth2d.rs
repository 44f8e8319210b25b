use std::fmt;

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::generator::ScalarFn;
use crate::linalg::Matrix;
use crate::scalar::{pairwise_sum, Scalar};

use super::planar::angle_of;
use super::BoundaryPoint;

/// Node count used for the cached volume and polar volume.
pub const SMOOTH_VOLUME_NODES: usize = 4096;
const VALIDATION_SAMPLES: usize = 4096;

/// A periodic support function `θ ↦ h(θ)` of a planar body.
#[derive(Clone)]
pub enum SupportProfile<T> {
    /// `h(θ) = Σ_k cos[k]·cos kθ + sin[k]·sin kθ`, `k = 0, 1, …`; derivatives in closed form.
    Fourier { cos: Vec<T>, sin: Vec<T> },
    /// Arbitrary callable; derivatives by central differences.
    Custom(ScalarFn<T>),
}

impl<T: Scalar> fmt::Debug for SupportProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportProfile::Fourier { cos, sin } => {
                f.debug_struct("Fourier").field("cos", cos).field("sin", sin).finish()
            }
            SupportProfile::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Central-difference step for custom profiles.
pub fn fd_step<T: Scalar>() -> T {
    if T::epsilon() < T::lit(1e-10) {
        T::lit(1e-5)
    } else {
        T::epsilon().powf(T::lit(0.25))
    }
}

impl<T: Scalar> SupportProfile<T> {
    /// `(h, h′, h″)` at `theta`.
    pub fn jet(&self, theta: T) -> (T, T, T) {
        match self {
            SupportProfile::Fourier { cos, sin } => {
                let (mut h, mut d1, mut d2) = (T::zero(), T::zero(), T::zero());
                let terms = cos.len().max(sin.len());
                for k in 0..terms {
                    let a = cos.get(k).copied().unwrap_or_else(T::zero);
                    let b = if k == 0 { T::zero() } else { sin.get(k).copied().unwrap_or_else(T::zero) };
                    let kk = T::count(k);
                    let (s, c) = (kk * theta).sin_cos();
                    h = h + a * c + b * s;
                    d1 = d1 + kk * (b * c - a * s);
                    d2 = d2 - kk * kk * (a * c + b * s);
                }
                (h, d1, d2)
            }
            SupportProfile::Custom(f) => {
                let step = fd_step::<T>();
                let (lo, mid, hi) = (f(theta - step), f(theta), f(theta + step));
                (mid, (hi - lo) / (step + step), (hi - mid - mid + lo) / (step * step))
            }
        }
    }
}

/// A planar body with strictly positive curvature given by its support
/// function, optionally composed with an invertible linear map.
#[derive(Clone, Debug)]
pub struct Smooth2d<T: Scalar> {
    profile: SupportProfile<T>,
    map: Option<(Matrix<T>, T)>,
    volume: T,
    polar_volume: T,
}

impl<T: Scalar> Smooth2d<T> {
    pub fn new(profile: SupportProfile<T>) -> Result<Self> {
        for j in 0..VALIDATION_SAMPLES {
            let theta = T::TAU() * T::count(j) / T::count(VALIDATION_SAMPLES);
            let (h, _, d2) = profile.jet(theta);
            if !(h > T::zero()) {
                return Err(Error::InvalidBody(format!(
                    "support function must be positive (h = {h} at theta = {theta})"
                )));
            }
            if !(h + d2 > T::zero()) {
                return Err(Error::InvalidBody(format!(
                    "h + h'' must be positive for strict convexity (got {} at theta = {theta})",
                    h + d2
                )));
            }
        }
        let mut body = Smooth2d { profile, map: None, volume: T::zero(), polar_volume: T::zero() };
        body.refresh_volumes();
        Ok(body)
    }

    pub fn fourier(cos: Vec<T>, sin: Vec<T>) -> Result<Self> {
        Self::new(SupportProfile::Fourier { cos, sin })
    }

    pub fn custom(f: impl Fn(T) -> T + Send + Sync + 'static) -> Result<Self> {
        Self::new(SupportProfile::Custom(std::sync::Arc::new(f)))
    }

    fn refresh_volumes(&mut self) {
        let m = SMOOTH_VOLUME_NODES;
        let w = T::TAU() / T::count(m);
        let mut vol = Vec::with_capacity(m);
        let mut polar = Vec::with_capacity(m);
        for j in 0..m {
            let theta = T::TAU() * T::count(j) / T::count(m);
            let (h, fk) = self.support_and_radius(theta);
            vol.push(h * fk);
            polar.push(T::one() / (h * h));
        }
        let half = T::lit(0.5);
        self.volume = half * w * pairwise_sum(&vol);
        self.polar_volume = half * w * pairwise_sum(&polar);
    }

    pub fn profile(&self) -> &SupportProfile<T> {
        &self.profile
    }

    pub fn volume(&self) -> T {
        self.volume
    }

    pub fn polar_volume(&self) -> T {
        self.polar_volume
    }

    /// Pulls the normal angle back through the map: `(|Tᵀu|, angle of Tᵀu)`.
    fn pullback(&self, theta: T) -> (T, T, Option<&Matrix<T>>, T) {
        match &self.map {
            None => (T::one(), theta, None, T::one()),
            Some((m, det)) => {
                let (s, c) = theta.sin_cos();
                let v = [m[(0, 0)] * c + m[(1, 0)] * s, m[(0, 1)] * c + m[(1, 1)] * s];
                let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
                (r, angle_of(v[0], v[1]), Some(m), *det)
            }
        }
    }

    /// Support value and radius of curvature `f_K` at normal angle `theta`.
    pub fn support_and_radius(&self, theta: T) -> (T, T) {
        let (r, psi, _, det) = self.pullback(theta);
        let (h, _, d2) = self.profile.jet(psi);
        (r * h, det * det * (h + d2) / (r * r * r))
    }

    pub fn support_at(&self, theta: T) -> T {
        let (r, psi, _, _) = self.pullback(theta);
        let (h, _, _) = self.profile.jet(psi);
        r * h
    }

    pub fn point_at(&self, theta: T) -> BoundaryPoint<T> {
        let (r, psi, map, det) = self.pullback(theta);
        let (h, d1, d2) = self.profile.jet(psi);
        let (s, c) = psi.sin_cos();
        let base = [h * c - d1 * s, h * s + d1 * c];
        let x = match map {
            None => vec![base[0], base[1]],
            Some(m) => m.apply(&base),
        };
        let fk = det * det * (h + d2) / (r * r * r);
        let (su, cu) = theta.sin_cos();
        BoundaryPoint {
            support: x[0] * cu + x[1] * su,
            x,
            normal: vec![cu, su],
            curvature: T::one() / fk,
            curvature_function: Extended::Finite(fk),
        }
    }

    pub fn linear_image(&self, map: &Matrix<T>) -> Result<Self> {
        let det = map.det();
        if det == T::zero() {
            return Err(Error::SingularMap);
        }
        let composed = match &self.map {
            None => map.clone(),
            Some((m, _)) => map * m,
        };
        let det = composed.det();
        let mut body = Smooth2d {
            profile: self.profile.clone(),
            map: Some((composed, det)),
            volume: T::zero(),
            polar_volume: T::zero(),
        };
        body.refresh_volumes();
        Ok(body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn trefoil_curvature_function() {
        let b = Smooth2d::<f64>::fourier(vec![1.0, 0.0, 0.0, 0.1], vec![]).unwrap();
        for k in 0..16 {
            let t = k as f64 * 0.4;
            let (h, fk) = b.support_and_radius(t);
            assert!((h - (1.0 + 0.1 * (3.0 * t).cos())).abs() < 1e-15);
            assert!((fk - (1.0 - 0.8 * (3.0 * t).cos())).abs() < 1e-14);
        }
        // area = ½∫(h² − h'²) = π(1 + 0.01/2 − 0.09/2)
        assert!((b.volume() - PI * (1.0 - 0.04)).abs() < 1e-12);
    }

    #[test]
    fn finite_differences_match_closed_form() {
        let closed = Smooth2d::<f64>::fourier(vec![1.0, 0.05, 0.1], vec![0.0, 0.0, 0.02]).unwrap();
        let custom = Smooth2d::<f64>::custom(|t: f64| 1.0 + 0.05 * t.cos() + 0.1 * (2.0 * t).cos() + 0.02 * (2.0 * t).sin()).unwrap();
        for k in 0..20 {
            let t = k as f64 * 0.31;
            let (a, b) = (closed.point_at(t), custom.point_at(t));
            assert!((a.x[0] - b.x[0]).abs() < 1e-9 && (a.x[1] - b.x[1]).abs() < 1e-9);
            let (fa, fb) = (a.curvature_function.finite().unwrap(), b.curvature_function.finite().unwrap());
            assert!((fa - fb).abs() < 1e-5, "{fa} vs {fb}");
        }
        assert!((closed.volume() - custom.volume()).abs() < 1e-5);
    }

    #[test]
    fn boundary_point_on_unit_circle() {
        let disk = Smooth2d::<f64>::fourier(vec![1.0], vec![]).unwrap();
        let b = disk.point_at(0.0);
        assert!((b.x[0] - 1.0).abs() < 1e-15 && b.x[1].abs() < 1e-15);
        assert_eq!(b.curvature, 1.0);
        assert!((disk.volume() - PI).abs() < 1e-13);
        assert!((disk.polar_volume() - PI).abs() < 1e-13);
    }

    #[test]
    fn linear_image_of_disk_is_ellipse() {
        let disk = Smooth2d::<f64>::fourier(vec![1.0], vec![]).unwrap();
        let e = disk.linear_image(&Matrix::diagonal(&[2.0, 1.0])).unwrap();
        assert!((e.volume() - 2.0 * PI).abs() < 1e-12);
        assert!((e.polar_volume() - PI / 2.0).abs() < 1e-12);
        let b = e.point_at(0.0);
        assert!((b.x[0] - 2.0).abs() < 1e-14);
        assert!((b.curvature_function.finite().unwrap() - 0.5).abs() < 1e-14);
        let rot = disk.linear_image(&Matrix::rotation2(0.9)).unwrap();
        for k in 0..8 {
            assert!((rot.support_at(k as f64) - 1.0).abs() < 1e-12);
        }
        // composition accumulates
        let back = e.linear_image(&Matrix::diagonal(&[0.5, 1.0])).unwrap();
        assert!((back.volume() - PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_convex_profiles() {
        assert!(Smooth2d::<f64>::fourier(vec![1.0, 0.0, 0.5], vec![]).is_err());
        assert!(Smooth2d::<f64>::fourier(vec![-1.0], vec![]).is_err());
        assert!(Smooth2d::<f64>::fourier(vec![1.0, 1.5], vec![]).is_err());
    }
}
