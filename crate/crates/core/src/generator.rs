//! Divergence-generating functions `f : (0, ∞) → ℝ`, their endpoint limits and
//! the `*`-adjoint `f*(t) = t·f(1/t)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::scalar::Scalar;

pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Named members of the generator library.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StandardKind<T> {
    /// `t ln t` (relative entropy from P to Q).
    Kl,
    /// `−ln t`, the adjoint of [`StandardKind::Kl`].
    KlReverse,
    /// `t^α`, convex for `α ≤ 0` or `α ≥ 1`.
    Power(T),
    /// `t^{p/(n+p)}` for `p ≤ 0`, `p ≠ −n`.
    LpAsa { p: T, n: usize },
    /// `ψ(t) = 1/t`, a member of Conv(0, ∞).
    LpsiExample,
    /// `a·t + b`.
    Linear { a: T, b: T },
}

/// An immutable convex generator together with `f(0)` and `f*(0)`.
#[derive(Clone)]
pub struct Generator<T: Scalar> {
    eval: ScalarFn<T>,
    at_zero: Extended<T>,
    adjoint_at_zero: Extended<T>,
    decreasing: bool,
    convex: bool,
    label: String,
}

impl<T: Scalar> fmt::Debug for Generator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("label", &self.label)
            .field("at_zero", &self.at_zero)
            .field("adjoint_at_zero", &self.adjoint_at_zero)
            .field("decreasing", &self.decreasing)
            .finish()
    }
}

impl<T: Scalar> Generator<T> {
    /// Builds a custom generator. Both endpoint limits must be supplied; the
    /// function is sample-checked for midpoint convexity, and in debug builds the
    /// limits are compared against a numerical extrapolation.
    pub fn new<F>(
        label: impl Into<String>,
        eval: F,
        at_zero: Extended<T>,
        adjoint_at_zero: Extended<T>,
    ) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        let label = label.into();
        if at_zero == Extended::NegInf || adjoint_at_zero == Extended::NegInf {
            return Err(Error::InvalidGenerator(format!(
                "{label}: endpoint limits must lie in (-inf, +inf]"
            )));
        }
        let eval: ScalarFn<T> = Arc::new(eval);
        if !is_midpoint_convex(&*eval) {
            return Err(Error::InvalidGenerator(format!("{label}: not convex on the sample grid")));
        }
        if cfg!(debug_assertions) {
            let g = eval.clone();
            check_limit(&label, "f(0)", at_zero, limit_at_zero(|t| g(t)))?;
            let g = eval.clone();
            check_limit(
                &label,
                "f*(0)",
                adjoint_at_zero,
                limit_at_zero(|t| t * g(T::one() / t)),
            )?;
        }
        let decreasing = is_nonincreasing(&*eval);
        Ok(Generator { eval, at_zero, adjoint_at_zero, decreasing, convex: true, label })
    }

    pub fn standard(kind: StandardKind<T>) -> Result<Self> {
        match kind {
            StandardKind::Kl => Ok(Self::trusted(
                "kl",
                Arc::new(|t: T| t * t.ln()),
                Extended::zero(),
                Extended::PosInf,
                false,
            )),
            StandardKind::KlReverse => Ok(Self::trusted(
                "kl_reverse",
                Arc::new(|t: T| -t.ln()),
                Extended::PosInf,
                Extended::zero(),
                true,
            )),
            StandardKind::Power(alpha) => {
                if alpha > T::zero() && alpha < T::one() {
                    return Err(Error::InvalidGenerator(format!(
                        "t^{alpha} is concave; power generators need alpha <= 0 or alpha >= 1"
                    )));
                }
                Ok(Self::power_any(alpha))
            }
            StandardKind::LpAsa { p, n } => {
                let n_t = T::count(n);
                if p > T::zero() {
                    return Err(Error::InvalidGenerator(format!(
                        "lp_asa generator needs p <= 0 for convexity, got {p}"
                    )));
                }
                if p == -n_t {
                    return Err(Error::InvalidGenerator("lp_asa undefined for p = -n".into()));
                }
                let mut g = Self::power_any(p / (n_t + p));
                g.label = format!("lp_asa:{p}:{n}");
                Ok(g)
            }
            StandardKind::LpsiExample => {
                let mut g = Self::power_any(-T::one());
                g.label = "lpsi".into();
                Ok(g)
            }
            StandardKind::Linear { a, b } => Ok(Self::trusted(
                format!("linear:{a}:{b}"),
                Arc::new(move |t: T| a * t + b),
                Extended::Finite(b),
                Extended::Finite(a),
                a <= T::zero(),
            )),
        }
    }

    /// `t^α` for any real `α`, including the concave range `0 < α < 1`
    /// (flagged through [`Generator::is_convex`]).
    pub fn power_any(alpha: T) -> Self {
        let power_limit = |e: T| {
            if e > T::zero() {
                Extended::zero()
            } else if e == T::zero() {
                Extended::Finite(T::one())
            } else {
                Extended::PosInf
            }
        };
        let mut g = Self::trusted(
            format!("power:{alpha}"),
            Arc::new(move |t: T| t.powf(alpha)),
            power_limit(alpha),
            power_limit(T::one() - alpha),
            alpha <= T::zero(),
        );
        g.convex = alpha <= T::zero() || alpha >= T::one();
        g
    }

    fn trusted(
        label: impl Into<String>,
        eval: ScalarFn<T>,
        at_zero: Extended<T>,
        adjoint_at_zero: Extended<T>,
        decreasing: bool,
    ) -> Self {
        Generator { eval, at_zero, adjoint_at_zero, decreasing, convex: true, label: label.into() }
    }

    /// The `*`-adjoint `t ↦ t·f(1/t)`; endpoint limits swap.
    pub fn adjoint(&self) -> Self {
        let inner = self.eval.clone();
        let eval: ScalarFn<T> = Arc::new(move |t: T| t * inner(T::one() / t));
        let decreasing = is_nonincreasing(&*eval);
        let label = match self.label.strip_prefix("adjoint(").and_then(|s| s.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => format!("adjoint({})", self.label),
        };
        Generator {
            eval,
            at_zero: self.adjoint_at_zero,
            adjoint_at_zero: self.at_zero,
            decreasing,
            convex: self.convex,
            label,
        }
    }

    #[inline]
    pub fn eval(&self, t: T) -> T {
        (self.eval)(t)
    }

    /// `f` on `[0, ∞)`, using the stored limit at `t = 0`.
    pub fn eval_extended(&self, t: T) -> Extended<T> {
        if t == T::zero() {
            self.at_zero
        } else {
            Extended::Finite(self.eval(t))
        }
    }

    pub fn at_zero(&self) -> Extended<T> {
        self.at_zero
    }

    pub fn adjoint_at_zero(&self) -> Extended<T> {
        self.adjoint_at_zero
    }

    pub fn at_one(&self) -> T {
        self.eval(T::one())
    }

    pub fn is_decreasing(&self) -> bool {
        self.decreasing
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Logarithmic grid on `[1e-6, 1e6]`.
pub fn sample_grid<T: Scalar>(points: usize) -> Vec<T> {
    (0..points)
        .map(|i| T::lit(10f64.powf(-6.0 + 12.0 * i as f64 / (points - 1) as f64)))
        .collect()
}

/// Midpoint convexity `f((s+t)/2) ≤ (f(s)+f(t))/2` on every pair of grid points.
pub fn is_midpoint_convex<T: Scalar>(f: &dyn Fn(T) -> T) -> bool {
    let grid = sample_grid::<T>(33);
    let values: Vec<T> = grid.iter().map(|&t| f(t)).collect();
    if values.iter().any(|v| v.is_nan()) {
        return false;
    }
    let rel = T::tol(1e-12);
    let two = T::lit(2.0);
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            let mid = f((grid[i] + grid[j]) / two);
            let chord = (values[i] + values[j]) / two;
            let slack = rel * (values[i].abs() + values[j].abs() + mid.abs()) + T::min_positive_value();
            if mid > chord + slack {
                return false;
            }
        }
    }
    true
}

fn is_nonincreasing<T: Scalar>(f: &dyn Fn(T) -> T) -> bool {
    let grid = sample_grid::<T>(49);
    let rel = T::tol(1e-12);
    grid.windows(2).all(|w| {
        let (a, b) = (f(w[0]), f(w[1]));
        b <= a + rel * (a.abs() + b.abs())
    })
}

/// Numerical estimate of `lim_{t↓0} f(t)` from samples at `t = 1e-6, 1e-9, 1e-12`.
///
/// Increments that fail to shrink by at least half between decades are read as
/// divergence in the direction of the increments; otherwise the geometric tail
/// of the increments is added to the last sample.
pub fn limit_at_zero<T: Scalar>(f: impl Fn(T) -> T) -> Extended<T> {
    let v: Vec<T> = [1e-6, 1e-9, 1e-12].iter().map(|&t| f(T::lit(t))).collect();
    if let Some(inf) = v.iter().find(|x| x.is_infinite()) {
        return Extended::from_scalar(*inf);
    }
    let d1 = v[1] - v[0];
    let d2 = v[2] - v[1];
    let tiny = T::tol(1e-9) * (T::one() + v[1].abs());
    if d2.abs() > tiny && d1 != T::zero() && d2 / d1 >= T::lit(0.5) {
        return if d2 > T::zero() { Extended::PosInf } else { Extended::NegInf };
    }
    let r = if d1 == T::zero() { T::zero() } else { (d2 / d1).max(T::zero()) };
    Extended::Finite(v[2] + d2 * r / (T::one() - r))
}

fn check_limit<T: Scalar>(
    label: &str,
    which: &str,
    claimed: Extended<T>,
    estimated: Extended<T>,
) -> Result<()> {
    let ok = match (claimed, estimated) {
        (Extended::Finite(a), Extended::Finite(b)) => {
            (a - b).abs() <= T::tol(1e-6) * T::one().max(b.abs())
        }
        (a, b) => a == b,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidGenerator(format!(
            "{label}: claimed {which} = {claimed} but samples extrapolate to {estimated}"
        )))
    }
}
