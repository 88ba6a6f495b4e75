//! Critical points of the knotted fibration `phi = (phi_1, phi_2): T^3 -> R^2`
//! on its open-book pages.
//!
//! ```text
//! phi_1 = eps (sin t1 cos t3 - sin t2 sin t3)
//! phi_2 = eps (sin t1 sin t3 + sin t2 cos t3)
//! ```
//!
//! The page `psi^-1(cos a, sin a)` is `{g = 0, h > 0}` with `h = cos a phi_1 + sin a phi_2`
//! and `g = -sin a phi_1 + cos a phi_2`, which is the page `a = 0` with `t3` shifted by `a`.

use std::f64::consts::TAU;

use log::{debug, warn};
use nalgebra::{Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector3, Vector4};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const DEDUP_RADIUS: f64 = 1e-4;
pub const EIGEN_FLOOR: f64 = 1e-6;
const MAX_NEWTON: usize = 60;

pub fn phi(theta: [f64; 3], epsilon: f64) -> (f64, f64) {
    let (s1, s2) = (theta[0].sin(), theta[1].sin());
    let (s3, c3) = theta[2].sin_cos();
    (epsilon * (s1 * c3 - s2 * s3), epsilon * (s1 * s3 + s2 * c3))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LutzMap {
    epsilon: f64,
}

/// `(value, gradient, hessian)`.
type Jet = (f64, Vector3<f64>, Matrix3<f64>);

impl LutzMap {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::Domain(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(LutzMap { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn phi(&self, theta: [f64; 3]) -> (f64, f64) {
        phi(theta, self.epsilon)
    }

    /// Second-order jets of `h` and `g` for the page at angle `a`.
    fn jets(&self, t: &Vector3<f64>, a: f64) -> (Jet, Jet) {
        let e = self.epsilon;
        let (s1, c1) = t[0].sin_cos();
        let (s2, c2) = t[1].sin_cos();
        let (s, c) = (t[2] - a).sin_cos();
        let h = e * (s1 * c - s2 * s);
        let g = e * (s1 * s + s2 * c);
        let dh = Vector3::new(e * c1 * c, -e * c2 * s, -g);
        let dg = Vector3::new(e * c1 * s, e * c2 * c, h);
        #[rustfmt::skip]
        let hh = Matrix3::new(
            -e * s1 * c, 0.0,        -e * c1 * s,
            0.0,         e * s2 * s, -e * c2 * c,
            -e * c1 * s, -e * c2 * c, -h,
        );
        #[rustfmt::skip]
        let hg = Matrix3::new(
            -e * s1 * s, 0.0,         e * c1 * c,
            0.0,         -e * s2 * c, -e * c2 * s,
            e * c1 * c,  -e * c2 * s, -g,
        );
        ((h, dh, hh), (g, dg, hg))
    }

    /// Residual of the Lagrange system `grad(h^2) - lambda grad g = 0, g = 0`.
    fn lagrange(&self, x: &Vector4<f64>, a: f64) -> (Vector4<f64>, Matrix4<f64>) {
        let t = x.fixed_rows::<3>(0).into_owned();
        let lambda = x[3];
        let ((h, dh, hh), (g, dg, hg)) = self.jets(&t, a);
        let grad = 2.0 * h * dh - lambda * dg;
        let hess = 2.0 * (dh * dh.transpose() + h * hh) - lambda * hg;
        let f = Vector4::new(grad[0], grad[1], grad[2], g);
        let mut jac = Matrix4::zeros();
        jac.fixed_view_mut::<3, 3>(0, 0).copy_from(&hess);
        jac.fixed_view_mut::<3, 1>(0, 3).copy_from(&(-dg));
        jac.fixed_view_mut::<1, 3>(3, 0).copy_from(&dg.transpose());
        (f, jac)
    }

    fn newton(&self, seed: Vector3<f64>, a: f64) -> Option<Vector4<f64>> {
        let ((h, dh, _), (_, dg, _)) = self.jets(&seed, a);
        let lambda = 2.0 * h * dh.dot(&dg) / dg.norm_squared().max(f64::MIN_POSITIVE);
        let mut x = Vector4::new(seed[0], seed[1], seed[2], lambda);
        let scale = self.epsilon * self.epsilon;
        for _ in 0..MAX_NEWTON {
            let (f, jac) = self.lagrange(&x, a);
            let mut step = jac.lu().solve(&(-f))?;
            let angular = step.fixed_rows::<3>(0).norm();
            if angular > 0.5 {
                step *= 0.5 / angular;
            }
            x += step;
            if step.fixed_rows::<3>(0).norm() < 1e-14 && f.norm() < 1e-12 * scale {
                return Some(x);
            }
        }
        let (f, _) = self.lagrange(&x, a);
        (f.norm() < 1e-12 * scale).then_some(x)
    }

    /// Orthonormal basis of `ker(grad g)`.
    fn tangent_basis(dg: &Vector3<f64>) -> Option<(Vector3<f64>, Vector3<f64>)> {
        let n = dg.try_normalize(1e-300)?;
        let pick = if n[0].abs() < 0.9 {
            Vector3::x()
        } else {
            Vector3::y()
        };
        let u = (pick - n * n.dot(&pick)).normalize();
        Some((u, n.cross(&u)))
    }

    fn classify(&self, x: &Vector4<f64>, a: f64) -> Option<CriticalPoint> {
        let t = x.fixed_rows::<3>(0).into_owned();
        let lambda = x[3];
        let ((h, dh, hh), (g, dg, hg)) = self.jets(&t, a);
        // binding points are trivial minima of h^2 and not on the open page
        if h <= 1e-6 * self.epsilon {
            return None;
        }
        let (u, v) = Self::tangent_basis(&dg)?;
        let grad = 2.0 * h * dh;
        let n = dg.normalize();
        let gradient_norm = (grad - n * grad.dot(&n)).norm();
        let hess = 2.0 * (dh * dh.transpose() + h * hh) - lambda * hg;
        let proj = Matrix2::new(
            u.dot(&(hess * u)),
            u.dot(&(hess * v)),
            v.dot(&(hess * u)),
            v.dot(&(hess * v)),
        );
        let mut eigs: Vec<f64> = SymmetricEigen::new(proj)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigs.sort_by(f64::total_cmp);
        let kind = if eigs.iter().any(|e| e.abs() <= EIGEN_FLOOR) {
            CriticalKind::Degenerate
        } else if eigs.iter().all(|&e| e < 0.0) {
            CriticalKind::Maximum
        } else if eigs.iter().all(|&e| e > 0.0) {
            CriticalKind::Minimum
        } else {
            CriticalKind::Saddle
        };
        Some(CriticalPoint {
            theta: [
                t[0].rem_euclid(TAU),
                t[1].rem_euclid(TAU),
                t[2].rem_euclid(TAU),
            ],
            value: h * h,
            kind,
            gradient_norm,
            constraint: g.abs(),
            hessian_eigs: [eigs[0], eigs[1]],
        })
    }

    /// Constrained critical points of `h^2` on the page at angle `page_angle`.
    pub fn census_on_page(&self, page_angle: f64, grid: usize, tol: f64) -> Result<CriticalCensus> {
        if grid < 32 {
            return Err(Error::Domain(format!(
                "grid must be at least 32, got {grid}"
            )));
        }
        if !(tol > 0.0 && tol <= 1e-8) {
            return Err(Error::Domain(format!(
                "tol must lie in (0, 1e-8], got {tol}"
            )));
        }
        let step = TAU / grid as f64;
        let band = 0.2 * self.epsilon;
        let found: Vec<CriticalPoint> = (0..grid * grid * grid)
            .into_par_iter()
            .filter_map(|idx| {
                let t = Vector3::new(
                    (idx / (grid * grid)) as f64 * step,
                    ((idx / grid) % grid) as f64 * step,
                    (idx % grid) as f64 * step,
                );
                let ((h, _, _), (g, _, _)) = self.jets(&t, page_angle);
                if g.abs() >= band || h <= 0.0 {
                    return None;
                }
                let Some(x) = self.newton(t, page_angle) else {
                    debug!("newton failed from seed {t:?}");
                    return None;
                };
                self.classify(&x, page_angle)
                    .filter(|p| p.gradient_norm < tol && p.constraint < tol)
            })
            .collect();
        let points = dedup(found);
        Ok(CriticalCensus::from_points(
            self.epsilon,
            page_angle,
            points,
        ))
    }

    /// The census on the page `psi^-1(1, 0)`.
    pub fn critical_census(&self, grid: usize, tol: f64) -> Result<CriticalCensus> {
        self.census_on_page(0.0, grid, tol)
    }
}

pub fn critical_census(epsilon: f64, grid: usize, tol: f64) -> Result<CriticalCensus> {
    LutzMap::new(epsilon)?.critical_census(grid, tol)
}

fn torus_distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).rem_euclid(TAU);
            d.min(TAU - d).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

fn dedup(mut found: Vec<CriticalPoint>) -> Vec<CriticalPoint> {
    found.sort_by(|a, b| a.gradient_norm.total_cmp(&b.gradient_norm));
    let mut kept: Vec<CriticalPoint> = Vec::new();
    for p in found {
        match kept
            .iter()
            .map(|q| torus_distance(&p.theta, &q.theta))
            .min_by(f64::total_cmp)
        {
            Some(d) if d <= DEDUP_RADIUS => {}
            Some(d) if d <= 100.0 * DEDUP_RADIUS => {
                warn!(
                    "critical points {:?} at distance {d:e} exceed the dedup radius",
                    p.theta
                );
                kept.push(p);
            }
            _ => kept.push(p),
        }
    }
    kept.sort_by(|a, b| {
        a.theta
            .iter()
            .zip(&b.theta)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    kept
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriticalKind {
    Maximum,
    Saddle,
    Minimum,
    /// A projected Hessian eigenvalue below the floor.
    Degenerate,
}

impl CriticalKind {
    pub fn name(&self) -> &'static str {
        match self {
            CriticalKind::Maximum => "maximum",
            CriticalKind::Saddle => "saddle",
            CriticalKind::Minimum => "minimum",
            CriticalKind::Degenerate => "degenerate",
        }
    }

    /// Grading of the orbit, relative to the saddle grading `g`.
    pub fn grading_offset(&self) -> Option<i64> {
        match self {
            CriticalKind::Maximum => Some(1),
            CriticalKind::Saddle => Some(0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    pub theta: [f64; 3],
    /// `h^2` at the point.
    pub value: f64,
    pub kind: CriticalKind,
    /// Norm of the page-tangent part of `grad(h^2)`.
    pub gradient_norm: f64,
    /// `|g|` at the point.
    pub constraint: f64,
    /// Eigenvalues of the projected Hessian of the Lagrangian, ascending.
    pub hessian_eigs: [f64; 2],
}

impl CriticalPoint {
    pub fn to_json(&self) -> Value {
        json!({
            "theta": self.theta,
            "value": self.value,
            "kind": self.kind.name(),
            "gradient_norm": self.gradient_norm,
            "constraint": self.constraint,
            "hessian_eigs": self.hessian_eigs,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalCensus {
    pub epsilon: f64,
    pub page_angle: f64,
    pub maxima: usize,
    pub saddles: usize,
    pub minima: usize,
    pub degenerate: usize,
    pub points: Vec<CriticalPoint>,
}

impl CriticalCensus {
    fn from_points(epsilon: f64, page_angle: f64, points: Vec<CriticalPoint>) -> Self {
        let count = |k| points.iter().filter(|p| p.kind == k).count();
        CriticalCensus {
            epsilon,
            page_angle,
            maxima: count(CriticalKind::Maximum),
            saddles: count(CriticalKind::Saddle),
            minima: count(CriticalKind::Minimum),
            degenerate: count(CriticalKind::Degenerate),
            points,
        }
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.maxima, self.saddles, self.minima)
    }

    pub fn max_gradient_norm(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.gradient_norm)
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self, dump_points: bool) -> Value {
        let mut v = json!({
            "epsilon": self.epsilon,
            "page_angle": self.page_angle,
            "maxima": self.maxima,
            "saddles": self.saddles,
            "minima": self.minima,
            "degenerate": self.degenerate,
            "max_gradient_norm": self.max_gradient_norm(),
            "gradings": {
                "maximum": "g+1",
                "saddle": "g",
            },
        });
        if dump_points {
            v["points"] = self.points.iter().map(CriticalPoint::to_json).collect();
        }
        v
    }
}

/// Direction of the Reeb field of `phi_1 dt4 + phi_2 dt5 + beta` at a point of
/// `T^5`, as `(X_1, X_2, X_3, phi_1, phi_2)`.
///
/// `X` is the Hamiltonian field of `H = (phi_1^2 + phi_2^2) / 2` on the page
/// through the point, taken for the area form the flat metric induces on the
/// page: `X = nu x grad H`, with `nu` the unit normal along `grad psi`.
pub fn reeb_t5_direction(theta: [f64; 5], epsilon: f64) -> Result<[f64; 5]> {
    let map = LutzMap::new(epsilon)?;
    let t = Vector3::new(theta[0], theta[1], theta[2]);
    let ((p1, d1, _), (p2, d2, _)) = map.jets(&t, 0.0);
    let r2 = p1 * p1 + p2 * p2;
    if r2 < 1e-24 * epsilon * epsilon {
        return Err(Error::Domain(format!("{theta:?} lies on the binding")));
    }
    let normal = (p1 * d2 - p2 * d1) / r2;
    let nu = normal
        .try_normalize(1e-12)
        .ok_or_else(|| Error::Domain(format!("the page through {theta:?} is singular")))?;
    let x = nu.cross(&(p1 * d1 + p2 * d2));
    Ok([x[0], x[1], x[2], p1, p2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn phi_values() {
        let (a, b) = phi([FRAC_PI_2, 0.0, 0.0], 1.0);
        assert!((a - 1.0).abs() < 1e-15 && b.abs() < 1e-15);
        for t3 in [0.0, 1.0, 4.0] {
            let (a, b) = phi([0.0, 0.0, t3], 0.3);
            assert_eq!((a.abs(), b.abs()), (0.0, 0.0));
        }
        let (a, b) = phi([FRAC_PI_2, FRAC_PI_2, FRAC_PI_4], 1.0);
        assert!(a.abs() < 1e-15);
        assert!((b - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn jets_match_finite_differences() {
        let map = LutzMap::new(0.7).unwrap();
        let t = Vector3::new(0.3, 1.9, -2.2);
        let a = 0.4;
        let ((_, dh, hh), (_, dg, hg)) = map.jets(&t, a);
        let k = 1e-6;
        for i in 0..3 {
            let mut tp = t;
            let mut tm = t;
            tp[i] += k;
            tm[i] -= k;
            let ((hp, dhp, _), (gp, dgp, _)) = map.jets(&tp, a);
            let ((hm, dhm, _), (gm, dgm, _)) = map.jets(&tm, a);
            assert!(((hp - hm) / (2.0 * k) - dh[i]).abs() < 1e-8);
            assert!(((gp - gm) / (2.0 * k) - dg[i]).abs() < 1e-8);
            for j in 0..3 {
                assert!(((dhp[j] - dhm[j]) / (2.0 * k) - hh[(j, i)]).abs() < 1e-7);
                assert!(((dgp[j] - dgm[j]) / (2.0 * k) - hg[(j, i)]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn census_on_coarse_grid() {
        let c = critical_census(0.25, 32, 1e-10).unwrap();
        assert_eq!(c.counts(), (4, 8, 0));
        assert_eq!(c.degenerate, 0);
        for p in &c.points {
            assert!(p.gradient_norm < 1e-10 && p.constraint < 1e-10);
            if p.kind == CriticalKind::Maximum {
                assert!((p.value / (2.0 * 0.0625) - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn opposite_page() {
        let c = LutzMap::new(0.1)
            .unwrap()
            .census_on_page(PI, 32, 1e-10)
            .unwrap();
        assert_eq!(c.counts(), (4, 8, 0));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(critical_census(0.0, 64, 1e-10).is_err());
        assert!(critical_census(0.1, 16, 1e-10).is_err());
        assert!(critical_census(0.1, 64, 1e-3).is_err());
    }

    #[test]
    fn reeb_direction_at_critical_points() {
        let c = critical_census(0.25, 32, 1e-10).unwrap();
        for p in &c.points {
            let d =
                reeb_t5_direction([p.theta[0], p.theta[1], p.theta[2], 0.0, 0.0], 0.25).unwrap();
            let x = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            assert!(x < 1e-8 * d[3], "{d:?}");
            assert!(d[3] > 0.0 && d[4].abs() < 1e-10);
        }
        let d = reeb_t5_direction([FRAC_PI_2, 0.0, 0.0, 1.0, 2.0], 1.0).unwrap();
        assert!((d[3] - 1.0).abs() < 1e-15 && d[4].abs() < 1e-15);
        assert!(d[..3].iter().all(|x| x.abs() < 1e-15));
        assert!(matches!(
            reeb_t5_direction([0.0; 5], 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn reeb_direction_is_tangent_to_pages() {
        let map = LutzMap::new(0.5).unwrap();
        let t = [0.7, 2.1, 0.4];
        let d = reeb_t5_direction([t[0], t[1], t[2], 0.0, 0.0], 0.5).unwrap();
        let ((p1, d1, _), (p2, d2, _)) = map.jets(&Vector3::new(t[0], t[1], t[2]), 0.0);
        let x = Vector3::new(d[0], d[1], d[2]);
        // X preserves both the page angle and H
        assert!((p1 * d2 - p2 * d1).dot(&x).abs() < 1e-12);
        assert!((p1 * d1 + p2 * d2).dot(&x).abs() < 1e-12);
    }
}
