//! Numerical Reeb flow of `cos f(theta) dx + sin f(theta) dy` on `T^3`.
//!
//! The Reeb field is `(cos f(theta), sin f(theta), 0)`: it has unit length in the
//! flat metric and never moves `theta`, so each orbit is a straight line on the
//! torus `{theta = const}`. Closed orbits in class `(p, q)` are found by
//! shooting in `theta` alone.

use std::f64::consts::{PI, TAU};

use log::debug;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::orbits::{AngularProfile, FiberClass};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const MAX_SECANT: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub time: f64,
}

impl FlowState {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        FlowState {
            x,
            y,
            theta,
            time: 0.0,
        }
        .reduced()
    }

    fn reduced(self) -> Self {
        FlowState {
            x: self.x.rem_euclid(TAU),
            y: self.y.rem_euclid(TAU),
            theta: self.theta.rem_euclid(TAU),
            ..self
        }
    }
}

/// The Reeb field, memoizing the last `theta` it was evaluated at.
struct Field<'a> {
    profile: &'a AngularProfile,
    cache: Option<(f64, [f64; 3])>,
}

impl Field<'_> {
    fn eval(&mut self, s: [f64; 3]) -> [f64; 3] {
        match self.cache {
            Some((theta, v)) if theta == s[2] => v,
            _ => {
                let f = self.profile.value(s[2]);
                let v = [f.cos(), f.sin(), 0.0];
                self.cache = Some((s[2], v));
                v
            }
        }
    }

    fn rk4_step(&mut self, s: [f64; 3], h: f64) -> [f64; 3] {
        let at = |k: [f64; 3], c: f64| [s[0] + c * k[0], s[1] + c * k[1], s[2] + c * k[2]];
        let k1 = self.eval(s);
        let k2 = self.eval(at(k1, h / 2.0));
        let k3 = self.eval(at(k2, h / 2.0));
        let k4 = self.eval(at(k3, h));
        std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
    }
}

/// RK4 in the universal cover; returns the `(x, y)` displacement.
fn displacement(profile: &AngularProfile, theta: f64, time: f64, step: f64) -> (f64, f64) {
    let steps = (time / step).ceil().max(1.0) as usize;
    let h = time / steps as f64;
    let mut field = Field {
        profile,
        cache: None,
    };
    let mut s = [0.0, 0.0, theta];
    for _ in 0..steps {
        s = field.rk4_step(s, h);
    }
    (s[0], s[1])
}

pub fn integrate_profile(
    profile: &AngularProfile,
    start: FlowState,
    time: f64,
    step: f64,
) -> Result<FlowState> {
    if !(step > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    profile.validate()?;
    let (dx, dy) = displacement(profile, start.theta, time, step);
    Ok(FlowState {
        x: start.x + dx,
        y: start.y + dy,
        theta: start.theta,
        time: start.time + time,
    }
    .reduced())
}

/// Flow of `alpha_n = cos(n theta) dx + sin(n theta) dy`.
pub fn integrate(n: i64, start: FlowState, time: f64, step: f64) -> Result<FlowState> {
    integrate_profile(&AngularProfile::Linear { n, phase: 0.0 }, start, time, step)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingResult {
    pub theta_star: f64,
    /// Reeb time to close up: `2 pi |(p, q)|`.
    pub period: f64,
    pub class_winding: (i64, i64),
    /// Distance from endpoint to start in the universal cover, after removing the winding.
    pub residual: f64,
    pub iterations: usize,
}

impl ShootingResult {
    pub fn to_json(&self) -> Value {
        json!({
            "theta_star": self.theta_star,
            "period": self.period,
            "class_winding": [self.class_winding.0, self.class_winding.1],
            "residual": self.residual,
            "iterations": self.iterations,
        })
    }
}

struct Shooter<'a> {
    profile: &'a AngularProfile,
    class: FiberClass,
    period: f64,
    step: f64,
}

impl Shooter<'_> {
    /// Signed angle from the target direction to the displacement, in `(-pi, pi]`.
    fn angle_residual(&self, theta: f64) -> f64 {
        let (dx, dy) = displacement(self.profile, theta, self.period, self.step);
        let d = dy.atan2(dx) - self.class.angle();
        let w = d.rem_euclid(TAU);
        if w > PI {
            w - TAU
        } else {
            w
        }
    }

    fn finish(&self, theta: f64, iterations: usize) -> ShootingResult {
        let theta = theta.rem_euclid(TAU);
        let (dx, dy) = displacement(self.profile, theta, self.period, self.step);
        let winding = ((dx / TAU).round() as i64, (dy / TAU).round() as i64);
        let residual = (dx - TAU * self.class.p() as f64).hypot(dy - TAU * self.class.q() as f64);
        ShootingResult {
            theta_star: theta,
            period: self.period,
            class_winding: winding,
            residual,
            iterations,
        }
    }
}

pub fn shoot_closed_orbit_profile(
    profile: &AngularProfile,
    class: FiberClass,
    theta_seed: f64,
    tol: f64,
) -> Result<ShootingResult> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::Domain(format!(
            "tol must lie in (0, 1e-6], got {tol}"
        )));
    }
    profile.validate()?;
    let period = TAU * (class.p() as f64).hypot(class.q() as f64);
    let s = Shooter {
        profile,
        class,
        period,
        step: DEFAULT_STEP,
    };
    let (mut t0, mut t1) = (theta_seed, theta_seed + 1e-3);
    let (mut r0, mut r1) = (s.angle_residual(t0), s.angle_residual(t1));
    for it in 1..=MAX_SECANT {
        if r1 == 0.0 {
            let res = s.finish(t1, it);
            if res.residual < tol {
                return Ok(res);
            }
        }
        if r1 == r0 {
            break;
        }
        let t2 = t1 - r1 * (t1 - t0) / (r1 - r0);
        (t0, r0) = (t1, r1);
        t1 = t2;
        r1 = s.angle_residual(t1);
        if (t1 - t0).abs() < 1e-3 * tol {
            let res = s.finish(t1, it);
            if res.residual < tol && res.class_winding == class.as_pair() {
                return Ok(res);
            }
        }
    }
    let last = s.finish(t1, MAX_SECANT);
    Err(Error::NoConvergence {
        iterations: MAX_SECANT,
        residual: last.residual,
    })
}

pub fn shoot_closed_orbit(
    n: i64,
    class: FiberClass,
    theta_seed: f64,
    tol: f64,
) -> Result<ShootingResult> {
    if n < 1 {
        return Err(Error::Domain(format!("n must be positive, got {n}")));
    }
    shoot_closed_orbit_profile(&AngularProfile::linear(n), class, theta_seed, tol)
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Shoots from `seeds` evenly spaced angles and returns the distinct solutions
/// sorted by angle; seeds that fail to converge are dropped.
pub fn shoot_all_profile(
    profile: &AngularProfile,
    class: FiberClass,
    seeds: usize,
    tol: f64,
) -> Result<Vec<ShootingResult>> {
    if seeds == 0 {
        return Err(Error::Domain("need at least one seed".into()));
    }
    let found: Vec<ShootingResult> = (0..seeds)
        .into_par_iter()
        .filter_map(|k| {
            let seed = TAU * k as f64 / seeds as f64;
            match shoot_closed_orbit_profile(profile, class, seed, tol) {
                Ok(r) => Some(Ok(r)),
                Err(Error::NoConvergence { residual, .. }) => {
                    debug!("seed {seed} did not converge (residual {residual:e})");
                    None
                }
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<ShootingResult> = Vec::new();
    for r in found {
        if !out
            .iter()
            .any(|o| circle_distance(o.theta_star, r.theta_star) < 10.0 * tol)
        {
            out.push(r);
        }
    }
    out.sort_by(|a, b| a.theta_star.total_cmp(&b.theta_star));
    Ok(out)
}

pub fn shoot_all(n: i64, class: FiberClass, seeds: usize, tol: f64) -> Result<Vec<ShootingResult>> {
    if n < 1 {
        return Err(Error::Domain(format!("n must be positive, got {n}")));
    }
    shoot_all_profile(&AngularProfile::linear(n), class, seeds, tol)
}
