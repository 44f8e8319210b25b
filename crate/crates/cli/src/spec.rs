//! JSON body files and generator names.

use std::path::Path;

use fdiv_core::body::{Ellipsoid, Halfspace, Polytope, RoundedPolygon, Smooth2d};
use fdiv_core::{Body, Gen, Matrix, StandardKind};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ellipsoid {
        /// Shape matrix `A` with `h(u) = sqrt(uᵀAu)`.
        #[serde(default)]
        matrix: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        semi_axes: Option<Vec<f64>>,
        #[serde(default)]
        transform: Option<Vec<Vec<f64>>>,
    },
    Polytope {
        #[serde(default)]
        halfspaces: Option<Vec<HalfspaceSpec>>,
        #[serde(default)]
        vertices: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        transform: Option<Vec<Vec<f64>>>,
    },
    Smooth2d {
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
        #[serde(default)]
        transform: Option<Vec<Vec<f64>>>,
    },
    RoundedPolygon {
        #[serde(default)]
        halfspaces: Option<Vec<HalfspaceSpec>>,
        #[serde(default)]
        vertices: Option<Vec<Vec<f64>>>,
        epsilon: f64,
        #[serde(default)]
        transform: Option<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

fn polytope(halfspaces: Option<Vec<HalfspaceSpec>>, vertices: Option<Vec<Vec<f64>>>) -> Result<Polytope<f64>, String> {
    let dim_of = |v: &[Vec<f64>]| v.first().map_or(0, Vec::len);
    let built = match (halfspaces, vertices) {
        (Some(hs), None) => {
            let dim = hs.first().map_or(0, |h| h.normal.len());
            let hs = hs
                .into_iter()
                .map(|h| Halfspace::new(h.normal, h.offset))
                .collect::<fdiv_core::Result<Vec<_>>>()
                .map_err(|e| e.to_string())?;
            Polytope::from_halfspaces(dim, hs)
        }
        (None, Some(vs)) => Polytope::from_vertices(dim_of(&vs), vs),
        _ => return Err("give exactly one of `halfspaces` or `vertices`".into()),
    };
    built.map_err(|e| e.to_string())
}

impl BodySpec {
    pub fn build(self) -> Result<Body, String> {
        let (body, transform) = match self {
            BodySpec::Ellipsoid { matrix, semi_axes, transform } => {
                let e = match (matrix, semi_axes) {
                    (Some(m), None) => Ellipsoid::new(Matrix::from_rows(&m).map_err(|e| e.to_string())?),
                    (None, Some(a)) => Ellipsoid::axis_aligned(&a),
                    _ => return Err("ellipsoid needs exactly one of `matrix` or `semi_axes`".into()),
                };
                (Body::from(e.map_err(|e| e.to_string())?), transform)
            }
            BodySpec::Polytope { halfspaces, vertices, transform } => (Body::from(polytope(halfspaces, vertices)?), transform),
            BodySpec::Smooth2d { cos, sin, transform } => {
                (Body::from(Smooth2d::fourier(cos, sin).map_err(|e| e.to_string())?), transform)
            }
            BodySpec::RoundedPolygon { halfspaces, vertices, epsilon, transform } => {
                let base = polytope(halfspaces, vertices)?;
                (Body::from(RoundedPolygon::new(base, epsilon).map_err(|e| e.to_string())?), transform)
            }
        };
        match transform {
            None => Ok(body),
            Some(rows) => {
                let map = Matrix::from_rows(&rows).map_err(|e| e.to_string())?;
                body.linear_image(&map).map_err(|e| e.to_string())
            }
        }
    }
}

pub fn parse_body(text: &str) -> Result<Body, String> {
    let spec: BodySpec = serde_json::from_str(text).map_err(|e| e.to_string())?;
    spec.build()
}

pub fn load_body(path: &Path) -> Result<Body, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_body(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Generator names: `kl`, `kl_reverse`, `power:α`, `lp_asa:p`, `lpsi`, `linear:a:b`.
#[derive(Clone, Debug, PartialEq)]
pub enum GenSpec {
    Kl,
    KlReverse,
    Power(f64),
    LpAsa(f64),
    Lpsi,
    Linear(f64, f64),
}

fn number(s: &str, what: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("{what}: `{s}` is not a number"))
}

impl std::str::FromStr for GenSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["kl"] => Ok(GenSpec::Kl),
            ["kl_reverse"] => Ok(GenSpec::KlReverse),
            ["lpsi"] => Ok(GenSpec::Lpsi),
            ["power", a] => Ok(GenSpec::Power(number(a, "power exponent")?)),
            ["lp_asa", p] => Ok(GenSpec::LpAsa(number(p, "lp_asa p")?)),
            ["linear", a, b] => Ok(GenSpec::Linear(number(a, "linear a")?, number(b, "linear b")?)),
            _ => Err(format!("unknown generator `{s}` (expected kl, kl_reverse, power:A, lp_asa:P, lpsi or linear:A:B)")),
        }
    }
}

impl GenSpec {
    /// `lp_asa` depends on the dimension of the body it is applied to.
    pub fn build(&self, dim: usize) -> Result<Gen, String> {
        let kind = match *self {
            GenSpec::Kl => StandardKind::Kl,
            GenSpec::KlReverse => StandardKind::KlReverse,
            GenSpec::Power(a) => StandardKind::Power(a),
            GenSpec::LpAsa(p) => StandardKind::LpAsa { p, n: dim },
            GenSpec::Lpsi => StandardKind::LpsiExample,
            GenSpec::Linear(a, b) => StandardKind::Linear { a, b },
        };
        Gen::standard(kind).map_err(|e| e.to_string())
    }
}
