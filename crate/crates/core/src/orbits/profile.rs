use std::f64::consts::TAU;

use serde_json::{json, Value};

use crate::error::{Error, Result};

use super::Monodromy;

/// Bisection stops once the bracket is this narrow.
pub const BISECTION_TOL: f64 = 1e-12;

/// Seam tolerance for `u(f(0) + delta) || A u(f(0))`.
pub const COMPATIBILITY_TOL: f64 = 1e-9;

/// The angle function `f` of a `T^2`-invariant form `cos f(theta) dx + sin f(theta) dy`.
///
/// `f` is given on one period `[0, 2 pi)` and continued by
/// `f(theta + 2 pi) = f(theta) + delta`.
#[derive(Debug, Clone, PartialEq)]
pub enum AngularProfile {
    /// `f(theta) = n theta + phase`, so `delta = 2 pi n`.
    Linear { n: i64, phase: f64 },
    /// Piecewise-linear through `breakpoints` (the first at `theta = 0`); the last
    /// segment runs to `(2 pi, f(0) + delta)`.
    PiecewiseLinear {
        breakpoints: Vec<(f64, f64)>,
        delta: f64,
    },
}

impl AngularProfile {
    pub fn linear(n: i64) -> Self {
        AngularProfile::Linear { n, phase: 0.0 }
    }

    /// Strictly increasing piecewise-linear profile through `(0, f0)` and
    /// `(2 pi, f0 + delta)`.
    pub fn affine(f0: f64, delta: f64) -> Self {
        AngularProfile::PiecewiseLinear {
            breakpoints: vec![(0.0, f0)],
            delta,
        }
    }

    /// The affine profile from `f0` whose seam turns `u(f0)` into the direction of
    /// `A u(f0)`, winding `extra_turns` further full turns.
    pub fn compatible(a: &Monodromy, f0: f64, extra_turns: u32) -> Self {
        let (x, y) = a.apply_f64((f0.cos(), f0.sin()));
        let mut delta = (y.atan2(x) - f0).rem_euclid(TAU);
        if delta < COMPATIBILITY_TOL {
            delta = TAU;
        }
        AngularProfile::affine(f0, delta + TAU * extra_turns as f64)
    }

    pub fn delta(&self) -> f64 {
        match self {
            AngularProfile::Linear { n, .. } => TAU * *n as f64,
            AngularProfile::PiecewiseLinear { delta, .. } => *delta,
        }
    }

    /// The `n` with `2 (n - 1) pi < delta <= 2 n pi`.
    pub fn zeta_index(&self) -> i64 {
        (self.delta() / TAU).ceil() as i64
    }

    /// True for the exact family `f = n theta`, where angles come out rational.
    pub fn is_exact_linear(&self) -> Option<i64> {
        match self {
            AngularProfile::Linear { n, phase } if *phase == 0.0 => Some(*n),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AngularProfile::Linear { n, phase } => {
                if *n < 1 {
                    return Err(Error::InvalidProfile(format!(
                        "slope {n} is not positive; only strictly increasing profiles are supported"
                    )));
                }
                if !phase.is_finite() {
                    return Err(Error::InvalidProfile("non-finite phase".into()));
                }
            }
            AngularProfile::PiecewiseLinear { breakpoints, delta } => {
                let Some(&(t0, f0)) = breakpoints.first() else {
                    return Err(Error::InvalidProfile("no breakpoints".into()));
                };
                if t0 != 0.0 {
                    return Err(Error::InvalidProfile(
                        "first breakpoint must sit at theta = 0".into(),
                    ));
                }
                if !(delta.is_finite() && *delta > 0.0) {
                    return Err(Error::InvalidProfile(format!(
                        "delta {delta} must be positive"
                    )));
                }
                let mut nodes = breakpoints.clone();
                nodes.push((TAU, f0 + delta));
                for w in nodes.windows(2) {
                    let ((ta, fa), (tb, fb)) = (w[0], w[1]);
                    if !(tb > ta) || tb > TAU {
                        return Err(Error::InvalidProfile(format!(
                            "breakpoints must increase within [0, 2 pi): {ta} then {tb}"
                        )));
                    }
                    if !(fb > fa) {
                        return Err(Error::InvalidProfile(format!(
                            "profile is not strictly increasing between theta = {ta} and {tb}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Segment endpoints over one period, ending at `(2 pi, f(0) + delta)`.
    fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (head, end): (&[(f64, f64)], (f64, f64)) = match self {
            AngularProfile::Linear { n, phase } => (&[], (TAU, phase + TAU * *n as f64)),
            AngularProfile::PiecewiseLinear { breakpoints, delta } => {
                (breakpoints, (TAU, breakpoints[0].1 + delta))
            }
        };
        let start = match self {
            AngularProfile::Linear { phase, .. } => Some((0.0, *phase)),
            AngularProfile::PiecewiseLinear { .. } => None,
        };
        start
            .into_iter()
            .chain(head.iter().copied())
            .chain(std::iter::once(end))
    }

    /// The segment `((ta, fa), (tb, fb))` containing `base in [0, 2 pi]`.
    fn segment(&self, base: f64) -> ((f64, f64), (f64, f64)) {
        let mut nodes = self.nodes();
        let mut prev = nodes.next().expect("at least two nodes");
        for node in nodes {
            if base < node.0 {
                return (prev, node);
            }
            prev = node;
        }
        unreachable!("base lies below 2 pi")
    }

    /// `f(theta)` for any real `theta`.
    pub fn value(&self, theta: f64) -> f64 {
        if let AngularProfile::Linear { n, phase } = self {
            return *n as f64 * theta + phase;
        }
        let m = (theta / TAU).floor();
        let base = (theta - m * TAU).clamp(0.0, TAU * (1.0 - f64::EPSILON));
        let ((ta, fa), (tb, fb)) = self.segment(base);
        fa + (fb - fa) * (base - ta) / (tb - ta) + m * self.delta()
    }

    /// `f'(theta)`; at a breakpoint the right derivative.
    pub fn derivative(&self, theta: f64) -> f64 {
        if let AngularProfile::Linear { n, .. } = self {
            return *n as f64;
        }
        let base = theta.rem_euclid(TAU).min(TAU * (1.0 - f64::EPSILON));
        let ((ta, fa), (tb, fb)) = self.segment(base);
        (fb - fa) / (tb - ta)
    }

    /// Residual of the seam condition: the angle between `A u(f(0))` and
    /// `u(f(0) + delta)`, where `u(x) = (cos x, sin x)`.
    pub fn seam_residual(&self, a: &Monodromy) -> f64 {
        let f0 = self.value(0.0);
        let (x, y) = a.apply_f64((f0.cos(), f0.sin()));
        let want = y.atan2(x);
        let got = f0 + self.delta();
        let diff = (got - want).rem_euclid(TAU);
        diff.min(TAU - diff)
    }

    /// All `theta in [0, 2 pi)` with `f(theta) = target (mod 2 pi)`, each with
    /// an error bound. Bisection on the monotone period, then one Newton step.
    pub fn solve_direction(&self, target: f64) -> Vec<(f64, f64)> {
        let lo = self.value(0.0);
        let hi = lo + self.delta();
        let mut c = lo + (target - lo).rem_euclid(TAU);
        let mut out = Vec::new();
        while c < hi {
            out.push(self.invert(c));
            c += TAU;
        }
        out
    }

    fn invert(&self, c: f64) -> (f64, f64) {
        let (mut a, mut b) = (0.0f64, TAU);
        while b - a > BISECTION_TOL {
            let mid = 0.5 * (a + b);
            if self.value(mid) < c {
                a = mid;
            } else {
                b = mid;
            }
        }
        let mut theta = 0.5 * (a + b);
        let slope = self.derivative(theta);
        if slope > 0.0 {
            let polished = theta - (self.value(theta) - c) / slope;
            if (a - BISECTION_TOL..=b + BISECTION_TOL).contains(&polished) {
                theta = polished;
            }
        }
        let theta = if theta >= TAU {
            theta - TAU
        } else {
            theta.max(0.0)
        };
        (theta, BISECTION_TOL)
    }

    pub fn to_json(&self) -> Value {
        match self {
            AngularProfile::Linear { n, phase } => json!({ "linear_n": n, "phase": phase }),
            AngularProfile::PiecewiseLinear { breakpoints, delta } => json!({
                "breakpoints": breakpoints.iter().map(|(t, f)| json!([t, f])).collect::<Vec<_>>(),
                "delta": delta,
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(n) = v.get("linear_n") {
            let n = n
                .as_i64()
                .ok_or_else(|| Error::Parse("linear_n must be an integer".into()))?;
            let phase = v.get("phase").and_then(Value::as_f64).unwrap_or(0.0);
            return Ok(AngularProfile::Linear { n, phase });
        }
        let bps = v
            .get("breakpoints")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("profile needs linear_n or breakpoints".into()))?;
        let breakpoints = bps
            .iter()
            .map(|p| match p.as_array().map(Vec::as_slice) {
                Some([t, f]) => t
                    .as_f64()
                    .zip(f.as_f64())
                    .ok_or_else(|| Error::Parse("breakpoint entries must be numbers".into())),
                _ => Err(Error::Parse("breakpoint must be [theta, f]".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        let delta = v
            .get("delta")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Parse("breakpoint profile needs delta".into()))?;
        Ok(AngularProfile::PiecewiseLinear { breakpoints, delta })
    }
}
