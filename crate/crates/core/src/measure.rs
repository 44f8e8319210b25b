//! The cone-measure densities `p_K`, `q_K` on `∂K` and masses of boundary regions.

use crate::body::{planar, BoundaryPoint, ConvexBody};
use crate::error::{Error, Result};
use crate::linalg::normalized;
use crate::quadrature::{cap_rule, integrate_planar_window, integrate_smooth, QuadratureConfig};
use crate::scalar::{pairwise_sum, Scalar};

/// `p_K(x) = κ(x) / (⟨x, N(x)⟩ⁿ · n|K°|)`; zero on flat pieces.
pub fn density_p<T: Scalar>(body: &ConvexBody<T>, b: &BoundaryPoint<T>) -> T {
    if b.curvature == T::zero() {
        return T::zero();
    }
    let n = body.dim();
    b.curvature / (b.support.powi(n as i32) * T::count(n) * body.polar_volume())
}

/// `q_K(x) = ⟨x, N(x)⟩ / (n|K|)`.
pub fn density_q<T: Scalar>(body: &ConvexBody<T>, b: &BoundaryPoint<T>) -> T {
    b.support / (T::count(body.dim()) * body.volume())
}

/// `(p, q)` at a boundary point.
pub fn densities<T: Scalar>(body: &ConvexBody<T>, b: &BoundaryPoint<T>) -> (T, T) {
    (density_p(body, b), density_q(body, b))
}

/// As [`densities`], but on ellipsoids, where `p = q` holds identically, `q` is
/// returned twice so that predicates comparing the two see exact ties.
fn densities_for_predicates<T: Scalar>(body: &ConvexBody<T>, b: &BoundaryPoint<T>) -> (T, T) {
    match body {
        ConvexBody::Ellipsoid(_) => {
            let q = density_q(body, b);
            (q, q)
        }
        _ => densities(body, b),
    }
}

/// Boundary regions the mass queries understand.
#[derive(Clone, Debug, PartialEq)]
pub enum Region<T> {
    Whole,
    /// Points whose outer normal angle lies in the ccw interval `[from, from + span]` (planar).
    NormalArc { from: T, span: T },
    /// Points whose outer normal lies in `{u : ⟨u, axis⟩ ≥ cos half_angle}` (3D ellipsoids).
    Cap { axis: Vec<T>, half_angle: T },
    /// A polytope facet, indexed as in [`crate::Polytope::halfspaces`].
    Facet(usize),
}

fn normal_in_arc<T: Scalar>(angle: T, from: T, span: T) -> bool {
    span >= T::TAU() || planar::wrap_angle(angle - from) <= span
}

/// `cm_K(A) = ∫_A q_K dμ_K`, the normalized cone volume over `A`.
pub fn cone_measure<T: Scalar>(body: &ConvexBody<T>, region: &Region<T>, cfg: &QuadratureConfig) -> Result<T> {
    let n = T::count(body.dim());
    match (body, region) {
        (ConvexBody::Polytope(p), _) => {
            let facet_mass = |i: usize| p.halfspaces()[i].offset * p.facet_measures()[i] / (n * p.volume());
            let all = 0..p.halfspaces().len();
            let masses: Vec<T> = match region {
                Region::Whole => all.map(facet_mass).collect(),
                Region::Facet(i) if *i < p.halfspaces().len() => vec![facet_mass(*i)],
                Region::Facet(i) => return Err(Error::InvalidParameter(format!("no facet {i}"))),
                Region::NormalArc { from, span } if p.dim() == 2 => all
                    .filter(|&i| {
                        let a = &p.halfspaces()[i].normal;
                        normal_in_arc(planar::angle_of(a[0], a[1]), *from, *span)
                    })
                    .map(facet_mass)
                    .collect(),
                _ => return Err(Error::Unsupported("region encoding for this polytope".into())),
            };
            Ok(pairwise_sum(&masses))
        }
        (_, Region::Facet(_)) => Err(Error::Unsupported("facet regions need a polytope".into())),
        (ConvexBody::RoundedPolygon(r), Region::Whole | Region::NormalArc { .. }) => {
            let window = match region {
                Region::NormalArc { from, span } => Some((*from, *span)),
                _ => None,
            };
            let vol = r.volume();
            let arcs = r.arc_integral_within(cfg.arc_nodes, window, |b| b.support / (n * vol));
            let sides = r
                .sides()
                .iter()
                .filter(|s| window.is_none_or(|(from, span)| normal_in_arc(s.normal_angle, from, span)))
                .fold(T::zero(), |acc, s| acc + s.support * s.length() / (n * vol));
            Ok(arcs + sides)
        }
        (_, Region::Whole) => {
            integrate_smooth(body, cfg, |b| density_q(body, b) * b.curvature_function.to_scalar()).map(|e| e.value)
        }
        (_, Region::NormalArc { from, span }) if body.dim() == 2 => {
            let span = span.min(T::TAU());
            integrate_planar_window(body, *from, *from + span, cfg.arc_nodes, |b| {
                density_q(body, b)
            })
        }
        (ConvexBody::Ellipsoid(e), Region::Cap { axis, half_angle }) if e.dim() == 3 => {
            let rule = cap_rule(&normalized(axis), *half_angle, cfg.sphere_level)?;
            let values: Vec<T> = (0..rule.len())
                .map(|i| {
                    let u = &rule.nodes[i];
                    let b = e.boundary_point(u);
                    rule.weights[i] * density_q(body, &b) * b.curvature_function.to_scalar()
                })
                .collect();
            Ok(pairwise_sum(&values))
        }
        _ => Err(Error::Unsupported("region encoding for this body".into())),
    }
}

/// Which of the two measures a mass query integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    P,
    Q,
}

/// `∫ 1{pred(p(x), q(x))} · density dμ_K` with the density chosen by `which`.
pub fn mass_over_predicate<T: Scalar>(
    body: &ConvexBody<T>,
    which: Which,
    pred: impl Fn(T, T) -> bool + Sync + Send,
    cfg: &QuadratureConfig,
) -> Result<T> {
    let pick = |p: T, q: T| match which {
        Which::P => p,
        Which::Q => q,
    };
    match body {
        ConvexBody::Polytope(poly) => {
            // κ = 0 μ-a.e.: P vanishes and every facet sits in {p = 0}
            if which == Which::P {
                return Ok(T::zero());
            }
            let n = T::count(poly.dim());
            let masses: Vec<T> = poly
                .halfspaces()
                .iter()
                .zip(poly.facet_measures())
                .filter(|(h, _)| pred(T::zero(), h.offset / (n * poly.volume())))
                .map(|(h, &m)| h.offset * m / (n * poly.volume()))
                .collect();
            Ok(pairwise_sum(&masses))
        }
        ConvexBody::RoundedPolygon(r) => {
            let arcs = r.arc_integral(cfg.arc_nodes, |b| {
                let (p, q) = densities(body, b);
                if pred(p, q) {
                    pick(p, q)
                } else {
                    T::zero()
                }
            });
            let n = T::count(2);
            let mut sides = T::zero();
            for s in r.sides() {
                let len = s.length();
                if len == T::zero() {
                    continue;
                }
                // ⟨x, N⟩ and hence q are constant along a side
                let q = s.support / (n * r.volume());
                if pred(T::zero(), q) && which == Which::Q {
                    sides = sides + q * len;
                }
            }
            Ok(arcs + sides)
        }
        _ => integrate_smooth(body, cfg, |b| {
            let (p, q) = densities_for_predicates(body, b);
            if pred(p, q) {
                pick(p, q) * b.curvature_function.to_scalar()
            } else {
                T::zero()
            }
        })
        .map(|e| e.value),
    }
}

/// `P_K({p_K > 0})`.
pub fn p_mass_where_curved<T: Scalar>(body: &ConvexBody<T>, cfg: &QuadratureConfig) -> Result<T> {
    mass_over_predicate(body, Which::P, |p, _| p > T::zero(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{Ellipsoid, Polytope, RoundedPolygon, Side, Smooth2d};
    use crate::linalg::dot;
    use crate::quadrature::{gauss_legendre_panels, ARC_PANEL_WIDTH};
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn rounded_square() -> ConvexBody<f64> {
        RoundedPolygon::new(Polytope::cube(2, 1.0).unwrap(), 0.1).unwrap().into()
    }

    #[test]
    fn densities_on_disk_and_ellipse() {
        let disk = ConvexBody::<f64>::unit_disk();
        let b = disk.boundary_point_at_angle(0.3).unwrap();
        assert!((density_p(&disk, &b) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((density_q(&disk, &b) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        let b = e.boundary_point_at_angle(0.0).unwrap();
        assert!((density_p(&e, &b) - 1.0 / (2.0 * PI)).abs() < 1e-14);
        assert!((density_q(&e, &b) - 1.0 / (2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn flat_points_have_zero_p() {
        let r = rounded_square();
        let b = r.boundary_point_at_angle(0.0).unwrap();
        assert_eq!(density_p(&r, &b), 0.0);
        let square: ConvexBody<f64> = Polytope::cube(2, 1.0).unwrap().into();
        let f = cone_measure(&square, &Region::Facet(0), &cfg()).unwrap();
        assert!((f - 0.25).abs() < 1e-15);
        // q on a facet of [-1,1]^2 is 1/8
        let q = mass_over_predicate(&square, Which::Q, |_, q| (q - 0.125).abs() < 1e-15, &cfg()).unwrap();
        assert!((q - 1.0).abs() < 1e-15);
    }

    #[test]
    fn total_masses() {
        let c = cfg();
        for body in [
            ConvexBody::<f64>::unit_disk(),
            ConvexBody::ellipse(3.0, 0.5).unwrap(),
            Smooth2d::fourier(vec![1.0, 0.0, 0.0, 0.1], vec![0.0, 0.05]).unwrap().into(),
            rounded_square(),
        ] {
            let q = cone_measure(&body, &Region::Whole, &c).unwrap();
            assert!((q - 1.0).abs() < 1e-8, "{:?} q {q}", body.kind());
            let p = mass_over_predicate(&body, Which::P, |_, _| true, &c).unwrap();
            assert!((p - 1.0).abs() < 1e-8, "{:?} p {p}", body.kind());
        }
        let cube: ConvexBody<f64> = Polytope::cube(3, 1.0).unwrap().into();
        assert!((cone_measure(&cube, &Region::Whole, &c).unwrap() - 1.0).abs() < 1e-14);
        assert!((cone_measure(&cube, &Region::Facet(2), &c).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        assert_eq!(mass_over_predicate(&cube, Which::P, |_, _| true, &c).unwrap(), 0.0);
    }

    #[test]
    fn partitions_sum_to_one() {
        let c = cfg();
        let e = ConvexBody::<f64>::ellipse(2.0, 1.0).unwrap();
        let a = cone_measure(&e, &Region::NormalArc { from: 0.3, span: 2.0 }, &c).unwrap();
        let b = cone_measure(&e, &Region::NormalArc { from: 2.3, span: 2.0 * PI - 2.0 }, &c).unwrap();
        assert!((a + b - 1.0).abs() < 1e-9);
        let half = cone_measure(&ConvexBody::unit_disk(), &Region::NormalArc { from: 1.0, span: PI }, &c).unwrap();
        assert!((half - 0.5).abs() < 1e-12);
        let r = rounded_square();
        let quarters: f64 = (0..4)
            .map(|k| cone_measure(&r, &Region::NormalArc { from: -0.5 + k as f64 * PI / 2.0, span: PI / 2.0 }, &c).unwrap())
            .sum();
        assert!((quarters - 1.0).abs() < 1e-12);
        let ball: ConvexBody<f64> = Ellipsoid::axis_aligned(&[1.0, 2.0, 0.5]).unwrap().into();
        let up = cone_measure(&ball, &Region::Cap { axis: vec![0.0, 0.0, 1.0], half_angle: PI / 2.0 }, &c).unwrap();
        assert!((up - 0.5).abs() < 1e-10);
    }

    #[test]
    fn predicate_masses() {
        let c = cfg();
        let disk = ConvexBody::<f64>::unit_disk();
        let m = mass_over_predicate(&disk, Which::Q, |p, q| p > 0.0 && p <= q, &c).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
        let square: ConvexBody<f64> = Polytope::cube(2, 1.0).unwrap().into();
        assert_eq!(mass_over_predicate(&square, Which::Q, |p, _| p > 0.0, &c).unwrap(), 0.0);
        let r = rounded_square();
        assert!((p_mass_where_curved(&r, &c).unwrap() - 1.0).abs() < 1e-10);
    }

    fn side_q_mass<T: Scalar>(body: &ConvexBody<T>, side: &Side<T>, nodes: usize) -> T {
        let u = planar::unit(side.normal_angle);
        let mut total = T::zero();
        for (t, w) in gauss_legendre_panels(T::zero(), T::one(), T::lit(ARC_PANEL_WIDTH), nodes) {
            let x = [side.from[0] + t * (side.to[0] - side.from[0]), side.from[1] + t * (side.to[1] - side.from[1])];
            total = total + w * side.length() * dot(&x, &u) / (T::count(2) * body.volume());
        }
        total
    }

    #[test]
    fn side_mass_shortcut_matches_quadrature() {
        let r = rounded_square();
        let ConvexBody::RoundedPolygon(rp) = &r else { unreachable!() };
        let s = &rp.sides()[0];
        let q = s.support / (2.0 * r.volume()) * s.length();
        assert!((side_q_mass(&r, s, 8) - q).abs() < 1e-14);
    }
}
