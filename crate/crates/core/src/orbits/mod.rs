//! Closed Reeb orbits of `T^2`-invariant contact forms on `T^3` and on torus
//! bundles `T^3_A`.
//!
//! For `alpha = cos f(theta) dx + sin f(theta) dy` the Reeb field is
//! `(cos f, sin f, 0)`: `d alpha = f' dtheta ^ (-sin f dx + cos f dy)` is killed
//! by exactly that direction, and `alpha` evaluates to 1 on it. Orbits therefore
//! stay in a fiber `theta = const` and close up in class `(p, q)` precisely when
//! `(cos f, sin f)` is a positive multiple of `(p, q)`.

mod monodromy;
mod profile;

use std::f64::consts::TAU;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::Rational;

pub use monodromy::{
    class_orbit, classify_monodromy, ClassOrbit, FiberClass, InfiniteOrbitWitness, Monodromy,
    MonodromyClass,
};
pub use profile::{AngularProfile, BISECTION_TOL, COMPATIBILITY_TOL};

/// Fiber angle of an orbit family.
#[derive(Clone, PartialEq)]
pub enum FiberAngle {
    /// `theta = 2 pi * turns` with `turns` in `[0, 1)`.
    Turns(Rational),
    /// Numeric root with an absolute error bound.
    Numeric { value: f64, error: f64 },
}

impl FiberAngle {
    pub fn value(&self) -> f64 {
        match self {
            FiberAngle::Turns(q) => TAU * q.to_f64(),
            FiberAngle::Numeric { value, .. } => *value,
        }
    }

    pub fn error_bound(&self) -> f64 {
        match self {
            FiberAngle::Turns(_) => 0.0,
            FiberAngle::Numeric { error, .. } => *error,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            FiberAngle::Turns(q) => Some(q),
            FiberAngle::Numeric { .. } => None,
        }
    }
}

impl fmt::Debug for FiberAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberAngle::Turns(q) => write!(f, "2pi*{q}"),
            FiberAngle::Numeric { value, error } => write!(f, "{value}+-{error:e}"),
        }
    }
}

/// One circle of closed Reeb orbits: the fiber at `theta`, foliated by orbits in `fiber_class`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitFamily {
    pub theta: FiberAngle,
    pub fiber_class: FiberClass,
    pub index_label: i64,
}

impl OrbitFamily {
    /// `|u(f(theta)) x (p, q)| / |(p, q)|` and the sign of the dot product.
    pub fn direction_residual(&self, profile: &AngularProfile) -> (f64, bool) {
        let f = profile.value(self.theta.value());
        let (p, q) = (self.fiber_class.p() as f64, self.fiber_class.q() as f64);
        let norm = p.hypot(q);
        let cross = (f.cos() * q - f.sin() * p) / norm;
        let dot = f.cos() * p + f.sin() * q;
        (cross.abs(), dot > 0.0)
    }

    /// Exact check for the `f = n theta` family: `n * turns - class_turns` is an integer.
    pub fn exact_direction_check(&self, n: i64) -> Option<bool> {
        let turns = self.theta.exact()?;
        let (num, den) = self.fiber_class.exact_turns()?;
        let class_turns = Rational::new(num, den).ok()?;
        Some((turns * &Rational::from_integer(n) - class_turns).is_integer())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "theta": self.theta.value(),
            "theta_turns": self.theta.exact().map(|q| q.to_string()),
            "error": self.theta.error_bound(),
            "class": self.fiber_class.to_json(),
            "index": self.index_label,
        })
    }
}

/// Generator rule for the `Z`-indexed family of a class with infinite `<A>`-orbit:
/// `gamma_k` lies in the fibers where the Reeb direction is `A^k v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftRule {
    pub monodromy: Monodromy,
    pub base_class: FiberClass,
    pub profile: AngularProfile,
    pub witness: InfiniteOrbitWitness,
}

impl ShiftRule {
    pub fn class_at(&self, k: i64) -> Result<FiberClass> {
        let (p, q) = self.monodromy.pow(k)?.apply(self.base_class.as_pair())?;
        FiberClass::new(p, q)
    }

    /// Fibers (within one period) carrying `gamma_k`; empty when the
    /// profile's range over a period misses the direction of `A^k v`.
    pub fn families(&self, k: i64) -> Result<Vec<OrbitFamily>> {
        let class = self.class_at(k)?;
        Ok(self
            .profile
            .solve_direction(class.angle())
            .into_iter()
            .map(|(value, error)| OrbitFamily {
                theta: FiberAngle::Numeric { value, error },
                fiber_class: class,
                index_label: k,
            })
            .collect())
    }

    pub fn to_json(&self) -> Value {
        let witness = match self.witness {
            InfiniteOrbitWitness::Hyperbolic { trace } => json!({ "hyperbolic_trace": trace }),
            InfiniteOrbitWitness::ParabolicNonEigen { cross } => {
                json!({ "parabolic_cross": cross })
            }
        };
        json!({
            "monodromy": self.monodromy.to_json(),
            "base_class": self.base_class.to_json(),
            "step": 1,
            "profile": self.profile.to_json(),
            "witness": witness,
        })
    }
}

/// Closed orbits of one free homotopy class.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitEnumeration {
    /// Sorted by `theta`.
    Finite(Vec<OrbitFamily>),
    ShiftIndexed(ShiftRule),
}

impl OrbitEnumeration {
    pub fn finite(&self) -> Option<&[OrbitFamily]> {
        match self {
            OrbitEnumeration::Finite(v) => Some(v),
            OrbitEnumeration::ShiftIndexed(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            OrbitEnumeration::Finite(v) => json!({
                "kind": "finite",
                "orbits": v.iter().map(OrbitFamily::to_json).collect::<Vec<_>>(),
            }),
            OrbitEnumeration::ShiftIndexed(rule) => {
                json!({ "kind": "shift", "rule": rule.to_json() })
            }
        }
    }
}

/// The `n` circles of orbits of `alpha_n = cos(n theta) dx + sin(n theta) dy`
/// in class `(p, q)`: `theta_k = (phi + 2 pi k) / n` where `phi` is the
/// direction angle of the class.
pub fn enumerate_t3(n: i64, class: FiberClass) -> Result<OrbitEnumeration> {
    if n < 1 {
        return Err(Error::Domain(format!("n = {n} must be at least 1")));
    }
    let families = (0..n)
        .map(|k| {
            let theta = match class.exact_turns() {
                Some((num, den)) => {
                    let base = Rational::new(num, den)?;
                    FiberAngle::Turns(
                        (base + Rational::from_integer(k)) / Rational::from_integer(n),
                    )
                }
                None => FiberAngle::Numeric {
                    value: (class.angle() + TAU * k as f64) / n as f64,
                    error: 4.0 * f64::EPSILON * TAU,
                },
            };
            Ok(OrbitFamily {
                theta,
                fiber_class: class,
                index_label: k,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrbitEnumeration::Finite(families))
}

/// Orbits in the class of `v` on `T^3_A` for the profile `f`.
///
/// The profile must be strictly increasing and satisfy the seam condition
/// `u(f(0) + delta) || A u(f(0))` that glues the fundamental domain; a finite
/// `<A>`-orbit of `v` yields the finite list of fibers whose direction is some
/// `A^k v`, an infinite one yields a [`ShiftRule`].
pub fn enumerate_bundle(
    a: &Monodromy,
    profile: &AngularProfile,
    class: FiberClass,
) -> Result<OrbitEnumeration> {
    profile.validate()?;
    let residual = profile.seam_residual(a);
    if residual > COMPATIBILITY_TOL {
        return Err(Error::InvalidProfile(format!(
            "profile is not compatible with monodromy {a}: seam residual {residual:e}"
        )));
    }
    match class_orbit(a, class)? {
        ClassOrbit::Infinite(witness) => Ok(OrbitEnumeration::ShiftIndexed(ShiftRule {
            monodromy: *a,
            base_class: class,
            profile: profile.clone(),
            witness,
        })),
        ClassOrbit::Finite(classes) => {
            if a.is_identity() {
                if let Some(n) = profile.is_exact_linear() {
                    return enumerate_t3(n, class);
                }
            }
            let mut families = Vec::new();
            for w in classes {
                match (profile.is_exact_linear(), w.exact_turns()) {
                    (Some(n), Some(_)) => {
                        if let OrbitEnumeration::Finite(v) = enumerate_t3(n, w)? {
                            families.extend(v);
                        }
                    }
                    _ => {
                        for (value, error) in profile.solve_direction(w.angle()) {
                            families.push(OrbitFamily {
                                theta: FiberAngle::Numeric { value, error },
                                fiber_class: w,
                                index_label: 0,
                            });
                        }
                    }
                }
            }
            families.sort_by(|x, y| x.theta.value().total_cmp(&y.theta.value()));
            for (i, f) in families.iter_mut().enumerate() {
                f.index_label = i as i64;
            }
            Ok(OrbitEnumeration::Finite(families))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn class(p: i64, q: i64) -> FiberClass {
        FiberClass::new(p, q).unwrap()
    }

    fn thetas(e: &OrbitEnumeration) -> Vec<f64> {
        e.finite()
            .unwrap()
            .iter()
            .map(|f| f.theta.value())
            .collect()
    }

    /// Dense-scan oracle: angles in [0, 2 pi) where (cos n theta, sin n theta)
    /// points along `dir`, located to 1e-12 by refining sign changes of the cross product.
    fn scan(n: i64, dir: (f64, f64)) -> Vec<f64> {
        let g = |t: f64| (n as f64 * t).cos() * dir.1 - (n as f64 * t).sin() * dir.0;
        let steps = 100_000;
        let mut out = Vec::new();
        for i in 0..steps {
            let (mut a, mut b) = (
                TAU * i as f64 / steps as f64,
                TAU * (i + 1) as f64 / steps as f64,
            );
            if g(a) == 0.0 || g(a).signum() != g(b).signum() {
                while b - a > 1e-13 {
                    let m = 0.5 * (a + b);
                    if g(a).signum() == g(m).signum() && g(m) != 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                let t = 0.5 * (a + b);
                let dot = (n as f64 * t).cos() * dir.0 + (n as f64 * t).sin() * dir.1;
                if dot > 0.0 && out.last().is_none_or(|&l: &f64| t - l > 1e-9) {
                    out.push(t);
                }
            }
        }
        out
    }

    #[test]
    fn t3_examples() {
        let e = enumerate_t3(2, class(1, 0)).unwrap();
        let f = e.finite().unwrap();
        assert_eq!(f[0].theta, FiberAngle::Turns(Rational::zero()));
        assert_eq!(f[1].theta, FiberAngle::Turns(Rational::new(1, 2).unwrap()));

        let e = enumerate_t3(1, class(0, 1)).unwrap();
        assert_eq!(
            e.finite().unwrap()[0].theta,
            FiberAngle::Turns(Rational::new(1, 4).unwrap())
        );

        let e = enumerate_t3(3, class(-1, 0)).unwrap();
        let got: Vec<Rational> = e
            .finite()
            .unwrap()
            .iter()
            .map(|f| f.theta.exact().unwrap().clone())
            .collect();
        assert_eq!(
            got,
            vec![
                Rational::new(1, 6).unwrap(),
                Rational::new(1, 2).unwrap(),
                Rational::new(5, 6).unwrap()
            ]
        );
        let oracle = scan(3, (-1.0, 0.0));
        assert_eq!(oracle.len(), 3);
        for (a, b) in thetas(&e).iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn t3_counts_and_exact_residuals() {
        for n in 1..=12 {
            for c in [class(1, 0), class(0, 1), class(-1, 1), class(2, 3)] {
                let e = enumerate_t3(n, c).unwrap();
                let fams = e.finite().unwrap();
                assert_eq!(fams.len(), n as usize);
                let profile = AngularProfile::linear(n);
                for f in fams {
                    if let Some(ok) = f.exact_direction_check(n) {
                        assert!(ok);
                    }
                    let (res, positive) = f.direction_residual(&profile);
                    assert!(res < 1e-10 && positive);
                }
                let t = thetas(&e);
                assert!(t.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn t3_rejects_bad_input() {
        assert!(enumerate_t3(0, class(1, 0)).is_err());
        assert!(FiberClass::new(2, 2).is_err());
    }

    #[test]
    fn bundle_identity_matches_t3() {
        let a = Monodromy::identity();
        for n in 1..6 {
            for c in [class(1, 0), class(0, -1), class(1, 2)] {
                let bundle = enumerate_bundle(&a, &AngularProfile::linear(n), c).unwrap();
                assert_eq!(bundle, enumerate_t3(n, c).unwrap());
            }
        }
    }

    #[test]
    fn bundle_parabolic_fixed_class() {
        let a = Monodromy::new(1, 1, 0, 1).unwrap();
        let profile = AngularProfile::PiecewiseLinear {
            breakpoints: vec![(0.0, 0.0), (PI, 1.5 * PI)],
            delta: TAU,
        };
        let e = enumerate_bundle(&a, &profile, class(1, 0)).unwrap();
        let fams = e.finite().unwrap();
        assert_eq!(fams.len(), 1);
        assert!(fams[0].theta.value().abs() < 1e-12);

        let e = enumerate_bundle(&a, &profile, class(0, 1)).unwrap();
        assert!(matches!(e, OrbitEnumeration::ShiftIndexed(_)));
    }

    #[test]
    fn bundle_hyperbolic_is_shift() {
        let a = Monodromy::new(2, 1, 1, 1).unwrap();
        let target = 1.0f64.atan2(2.0);
        for n in 1..4 {
            let profile = AngularProfile::affine(0.0, target + TAU * (n - 1) as f64);
            let e = enumerate_bundle(&a, &profile, class(1, 0)).unwrap();
            let OrbitEnumeration::ShiftIndexed(rule) = e else {
                panic!("expected shift")
            };
            assert_eq!(rule.class_at(1).unwrap(), class(2, 1));
            assert_eq!(rule.class_at(-1).unwrap(), class(1, -1));
            for k in -3..=3 {
                for f in rule.families(k).unwrap() {
                    let (res, pos) = f.direction_residual(&profile);
                    assert!(res < 1e-10 && pos);
                }
            }
        }
    }

    #[test]
    fn bundle_elliptic_rotation() {
        let a = Monodromy::new(0, -1, 1, 0).unwrap();
        // f sweeps a quarter turn plus one full turn per period: zeta_2.
        let profile = AngularProfile::affine(0.0, 0.5 * PI + TAU);
        assert_eq!(profile.zeta_index(), 2);
        let e = enumerate_bundle(&a, &profile, class(1, 0)).unwrap();
        let fams = e.finite().unwrap();
        // f covers [0, 5 pi / 2): directions 0, pi/2, pi, 3pi/2, 2pi.
        assert_eq!(fams.len(), 5);
        for f in fams {
            let (res, pos) = f.direction_residual(&profile);
            assert!(res < 1e-10 && pos);
        }
    }

    #[test]
    fn incompatible_profile_rejected() {
        let a = Monodromy::new(0, -1, 1, 0).unwrap();
        let err = enumerate_bundle(&a, &AngularProfile::linear(1), class(1, 0)).unwrap_err();
        assert!(matches!(err, Error::InvalidProfile(ref s) if s.contains("seam residual")));
    }
}
