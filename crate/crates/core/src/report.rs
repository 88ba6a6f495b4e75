//! End-to-end pipelines, each producing a [`Report`] of outputs and named checks.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::complexes::{build_morse_bott, homology, torus_betti, OrbitGeneratorPair, RingMode};
use crate::error::{Error, Result};
use crate::flow::{shoot_all_profile, ShootingResult};
use crate::holonomy::{
    act_on_homology, automorphism_from_loop, bundle_automorphism, eta_k, subgroup_rank, t3,
    t3_loop, t3_ring, t5_loop, InfiniteWitness, MonomialAutomorphism, OrderCertificate, Unit,
};
use crate::lutz::LutzMap;
use crate::orbits::{
    classify_monodromy, enumerate_bundle, enumerate_t3, AngularProfile, FiberClass, Monodromy,
    OrbitEnumeration, OrbitFamily,
};
use crate::ring::json::{matrix_to_json, monomial_to_json};
use crate::ring::snf::laurent_divides;
use crate::ring::{snf_univariate, GroupRingElem, Monomial, Rational, RingMatrix};

pub const FLOW_SEEDS: usize = 64;
pub const FLOW_TOL: f64 = 1e-8;
pub const POWER_CHECKS: i64 = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub expected: Value,
    pub actual: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub outputs: Map<String, Value>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            outputs: Map::new(),
            verdicts: Vec::new(),
        }
    }

    fn output(&mut self, key: &str, v: Value) {
        self.outputs.insert(key.to_string(), v);
    }

    fn check(&mut self, name: &str, passed: bool, expected: Value, actual: Value) {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            passed,
            expected,
            actual,
        });
    }

    fn check_eq(&mut self, name: &str, expected: Value, actual: Value) {
        let passed = expected == actual;
        self.check(name, passed, expected, actual);
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "verdicts": self.verdicts.iter().map(|v| json!({
                "name": v.name,
                "passed": v.passed,
                "expected": v.expected,
                "actual": v.actual,
            })).collect::<Vec<_>>(),
            "passed": self.all_passed(),
        })
    }

    /// Plain-text table of verdicts.
    pub fn render(&self) -> String {
        let mut s = format!("{} {}\n", self.command, self.inputs);
        for (k, v) in &self.outputs {
            let text = v.to_string();
            if text.len() <= 100 {
                let _ = writeln!(s, "  {k}: {text}");
            } else {
                let _ = writeln!(s, "  {k}: ({} bytes, see --json)", text.len());
            }
        }
        let width = self
            .verdicts
            .iter()
            .map(|v| v.name.len())
            .max()
            .unwrap_or(0);
        for v in &self.verdicts {
            let mark = if v.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                s,
                "  {mark}  {:width$}  expected {}  actual {}",
                v.name, v.expected, v.actual
            );
        }
        let _ = writeln!(
            s,
            "{}",
            if self.all_passed() {
                "all checks passed"
            } else {
                "some checks FAILED"
            }
        );
        s
    }
}

/// Whether `a^j` differs from the identity for every `j` in `1..=count`.
pub fn powers_not_identity(a: &MonomialAutomorphism, count: i64) -> bool {
    let mut p = a.clone();
    for _ in 0..count {
        if p.is_identity() {
            return false;
        }
        p = p.compose(a).expect("same shape");
    }
    true
}

fn certificate_twist(c: &OrderCertificate) -> Option<&Monomial> {
    match c {
        OrderCertificate::Infinite(InfiniteWitness::CycleTwist { twist, .. })
        | OrderCertificate::Infinite(InfiniteWitness::UnitTwist { twist, .. }) => Some(twist),
        _ => None,
    }
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

/// Compares the symbolic families with shooting solutions for every class present.
fn flow_cross_check(
    profile: &AngularProfile,
    families: &[OrbitFamily],
) -> Result<(bool, Vec<ShootingResult>)> {
    let mut classes: Vec<FiberClass> = families.iter().map(|f| f.fiber_class).collect();
    classes.sort();
    classes.dedup();
    let mut shots = Vec::new();
    for c in classes {
        shots.extend(shoot_all_profile(profile, c, FLOW_SEEDS, FLOW_TOL)?);
    }
    let matched = shots.len() == families.len()
        && families.iter().all(|f| {
            shots
                .iter()
                .any(|s| circle_distance(s.theta_star, f.theta.value()) < 1e-6)
        });
    Ok((matched, shots))
}

fn t3_relation(mode: RingMode) -> (usize, Monomial) {
    match mode {
        RingMode::Full => (3, Monomial::basis(3, t3::A_XY)),
        RingMode::Quotient => (2, Monomial::one(2)),
    }
}

pub fn run_t3(n: i64, class: FiberClass, mode: RingMode) -> Result<Report> {
    if n < 1 {
        return Err(Error::Domain(format!("n must be at least 1, got {n}")));
    }
    let mut r = Report::new(
        "t3",
        json!({ "n": n, "class": class.to_json(), "ring": format!("{mode:?}").to_lowercase() }),
    );
    let enumeration = enumerate_t3(n, class)?;
    let families = enumeration
        .finite()
        .expect("T^3 enumerations are finite")
        .to_vec();
    r.output("orbits", enumeration.to_json());
    r.check_eq("orbit_count", json!(n), json!(families.len()));
    let exact: Vec<Option<bool>> = families
        .iter()
        .map(|f| f.exact_direction_check(n))
        .collect();
    let profile = AngularProfile::linear(n);
    let angles_ok = families.iter().zip(&exact).all(|(f, e)| match e {
        Some(ok) => *ok,
        None => {
            let (res, forward) = f.direction_residual(&profile);
            forward && res < 1e-12
        }
    });
    r.check(
        "orbit_angles",
        angles_ok,
        json!("n theta = class angle mod 2 pi"),
        json!(exact),
    );
    let (flow_ok, shots) = flow_cross_check(&profile, &families)?;
    r.output("flow", shots.iter().map(ShootingResult::to_json).collect());
    r.check(
        "flow_agrees",
        flow_ok,
        json!(families.len()),
        json!(shots.len()),
    );

    let (rank, relation) = t3_relation(mode);
    let pairs: Vec<_> = (0..families.len())
        .map(OrbitGeneratorPair::standard)
        .collect();
    let complex = build_morse_bott(&pairs, mode, rank, &relation)?;
    r.output("complex", complex.to_json());
    let h = homology(&complex, -1)?;
    r.output("homology", h.to_json());

    let quotient = t3_ring(mode)?;
    let loop_data = t3_loop(families.len(), mode)?;
    let aut = automorphism_from_loop(&loop_data)?;
    let cert = aut.order();
    r.output("automorphism", aut.to_json());
    r.output("certificate", cert.to_json());
    r.check(
        "infinite_cyclic",
        cert.is_infinite(),
        json!("infinite"),
        cert.to_json()["order"].clone(),
    );
    let twist = quotient.apply(&Monomial::basis(3, t3::A_XTHETA));
    r.check_eq(
        "witness_twist",
        monomial_to_json(&twist),
        certificate_twist(&cert)
            .map(monomial_to_json)
            .unwrap_or(Value::Null),
    );
    let ok = powers_not_identity(&aut, POWER_CHECKS);
    r.check("powers_not_identity", ok, json!(true), json!(ok));

    match mode {
        RingMode::Full => {
            let h1 = h.specialize(t3::A_XY)?;
            r.output("homology_fiber_variable", h1.to_json());
            let one_minus_t = GroupRingElem::one_minus(&Monomial::basis(1, 0));
            let factors = h1.normal_form.clone().unwrap_or_default();
            r.check(
                "torsion_one_minus_t",
                factors.len() == families.len() && factors.iter().all(|d| *d == one_minus_t),
                json!(vec![one_minus_t.to_string(); families.len()]),
                json!(factors.iter().map(ToString::to_string).collect::<Vec<_>>()),
            );
            let fiber =
                MonomialAutomorphism::scalar(families.len(), Unit::monomial(relation.clone()));
            let induced = act_on_homology(&fiber, &h)?;
            r.output("fiber_action", induced.to_json());
            r.check(
                "fiber_class_acts_trivially",
                induced.is_identity(),
                json!(true),
                json!(induced.is_identity()),
            );
            let induced_loop = act_on_homology(&aut, &h)?;
            let c = induced_loop.order();
            r.output("induced_certificate", c.to_json());
            r.check(
                "induced_infinite",
                c.is_infinite(),
                json!("infinite"),
                c.to_json()["order"].clone(),
            );
        }
        RingMode::Quotient => {
            let free = h
                .free_rank()
                .or(Some(h.generators))
                .filter(|_| h.relations.cols() == 0);
            r.check_eq("homology_free", json!(families.len()), json!(free));
            let induced = act_on_homology(&aut, &h)?;
            r.check(
                "action_unchanged",
                induced == aut,
                json!(true),
                json!(induced == aut),
            );
        }
    }
    Ok(r)
}

pub fn run_bundle(a: &Monodromy, profile: &AngularProfile, class: FiberClass) -> Result<Report> {
    let mut r = Report::new(
        "bundle",
        json!({ "monodromy": a.to_json(), "profile": profile.to_json(), "class": class.to_json() }),
    );
    let kind = classify_monodromy(a);
    r.output(
        "classification",
        json!({ "class": kind.name(), "order": kind.order(), "trace": a.trace() }),
    );
    let enumeration = enumerate_bundle(a, profile, class)?;
    r.output("orbits", enumeration.to_json());
    let (shape, aut) = bundle_automorphism(&enumeration)?;
    r.output("automorphism_type", json!(shape.name()));
    r.output("automorphism", aut.to_json());
    let cert = aut.order();
    r.output("certificate", cert.to_json());
    if let OrbitEnumeration::Finite(families) = &enumeration {
        r.check(
            "orbits_exist",
            !families.is_empty(),
            json!(">= 1"),
            json!(families.len()),
        );
        let (ok, shots) = flow_cross_check(profile, families)?;
        r.output("flow", shots.iter().map(ShootingResult::to_json).collect());
        r.check("flow_agrees", ok, json!(families.len()), json!(shots.len()));
    }
    r.check(
        "infinite_order",
        cert.is_infinite(),
        json!("infinite"),
        cert.to_json()["order"].clone(),
    );
    if cert.is_infinite() {
        let ok = powers_not_identity(&aut, POWER_CHECKS);
        r.check("powers_not_identity", ok, json!(true), json!(ok));
    }
    Ok(r)
}

pub fn run_t5(epsilon: f64, summand_rank: usize, grid: usize, tol: f64) -> Result<Report> {
    let mut r = Report::new(
        "t5",
        json!({ "epsilon": epsilon, "summand_rank": summand_rank, "grid": grid, "tol": tol }),
    );
    let census = LutzMap::new(epsilon)?.critical_census(grid, tol)?;
    r.output("census", census.to_json(false));
    r.check_eq(
        "census",
        json!([4, 8, 0]),
        json!([census.maxima, census.saddles, census.minima]),
    );
    r.check(
        "gradient_norm",
        census.max_gradient_norm() < tol,
        json!(tol),
        json!(census.max_gradient_norm()),
    );
    let gens = (1..=3)
        .map(|i| automorphism_from_loop(&t5_loop(i, summand_rank)?))
        .collect::<Result<Vec<_>>>()?;
    r.output(
        "automorphisms",
        gens.iter().map(MonomialAutomorphism::to_json).collect(),
    );
    let rank = subgroup_rank(&gens)?;
    r.check_eq("subgroup_rank", json!(3), json!(rank));
    Ok(r)
}

pub fn run_stt(n: i64, d: i64, m: i64) -> Result<Report> {
    let mut r = Report::new("stt", json!({ "n": n, "d": d, "m": m }));
    let eta = eta_k(d, n)?;
    let dim =
        u32::try_from(2 * n - 1).map_err(|_| Error::Domain(format!("n = {n} is too large")))?;
    let betti = torus_betti(dim)?;
    r.output("betti", json!(betti));
    let binomial: Vec<u64> = (0..=dim as u64)
        .map(|k| num_integer::binomial(dim as u64, k))
        .collect();
    r.check_eq("betti_binomial", json!(binomial), json!(betti));
    r.output("morphism", eta.to_json());
    let composed = eta.precompose_degree(m);
    r.output("composed", composed.to_json());
    let want = GroupRingElem::term(Monomial::new(vec![1]), Rational::from_integer(m * d));
    r.check(
        "composition_law",
        composed.multiplier == want,
        json!(want.to_string()),
        json!(composed.multiplier.to_string()),
    );
    r.check(
        "infinite_order",
        eta.has_infinite_order(),
        json!("d != 0"),
        json!(d),
    );
    Ok(r)
}

pub fn run_lutz(
    epsilon: f64,
    grid: usize,
    tol: f64,
    page_angle: f64,
    dump_points: bool,
) -> Result<Report> {
    let mut r = Report::new(
        "lutz-critical",
        json!({ "epsilon": epsilon, "grid": grid, "tol": tol, "page_angle": page_angle }),
    );
    let census = LutzMap::new(epsilon)?.census_on_page(page_angle, grid, tol)?;
    r.output("census", census.to_json(dump_points));
    r.check_eq(
        "census",
        json!([4, 8, 0]),
        json!([census.maxima, census.saddles, census.minima]),
    );
    r.check_eq("nondegenerate", json!(0), json!(census.degenerate));
    let worst = census
        .points
        .iter()
        .map(|p| p.gradient_norm.max(p.constraint))
        .fold(0.0, f64::max);
    r.check("solver_contract", worst < tol, json!(tol), json!(worst));
    Ok(r)
}

pub fn run_shoot(n: i64, class: FiberClass, seeds: usize, tol: f64) -> Result<Report> {
    let mut r = Report::new(
        "shoot",
        json!({ "n": n, "class": class.to_json(), "seeds": seeds, "tol": tol }),
    );
    let shots = crate::flow::shoot_all(n, class, seeds, tol)?;
    r.output(
        "solutions",
        shots.iter().map(ShootingResult::to_json).collect(),
    );
    let symbolic = enumerate_t3(n, class)?;
    let families = symbolic.finite().expect("finite");
    let matched = shots.len() == families.len()
        && families.iter().all(|f| {
            shots
                .iter()
                .any(|s| circle_distance(s.theta_star, f.theta.value()) < 1e-6)
        });
    r.check(
        "symbolic_agreement",
        matched,
        json!(families.len()),
        json!(shots.len()),
    );
    let worst = shots.iter().map(|s| s.residual).fold(0.0, f64::max);
    r.check("residuals", worst < tol, json!(tol), json!(worst));
    Ok(r)
}

pub fn run_snf(m: &RingMatrix) -> Result<Report> {
    let mut r = Report::new("snf", json!({ "matrix": matrix_to_json(m) }));
    let f = snf_univariate(m)?;
    let diag = f.diagonal();
    r.output(
        "diagonal",
        diag.iter().map(|d| json!(d.to_string())).collect(),
    );
    r.output("d", matrix_to_json(&f.d));
    r.output("u", matrix_to_json(&f.u));
    r.output("v", matrix_to_json(&f.v));
    let umv = f.u.try_mul(m)?.try_mul(&f.v)?;
    r.check("u_m_v_equals_d", umv == f.d, json!(true), json!(umv == f.d));
    let inv = f.u.try_mul(&f.u_inv)?.is_identity() && f.v.try_mul(&f.v_inv)?.is_identity();
    r.check("transforms_invertible", inv, json!(true), json!(inv));
    let nonzero: Vec<_> = diag.iter().filter(|d| !d.is_zero()).collect();
    let divides = nonzero
        .windows(2)
        .map(|w| laurent_divides(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    r.check("divisibility_chain", divides, json!(true), json!(divides));
    Ok(r)
}

pub fn run_order(a: &MonomialAutomorphism) -> Result<Report> {
    let mut r = Report::new("order", json!({ "automorphism": a.to_json() }));
    let cert = a.order();
    r.output("certificate", cert.to_json());
    match cert {
        OrderCertificate::Finite { order } => {
            let m = i64::try_from(order).map_err(|_| Error::Overflow)?;
            let exact = a.pow(m).is_identity() && (1..m).all(|j| !a.pow(j).is_identity());
            r.check("power_check", exact, json!(order), json!(exact));
        }
        OrderCertificate::Infinite(_) => {
            let ok = powers_not_identity(a, POWER_CHECKS);
            r.check("powers_not_identity", ok, json!(true), json!(ok));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn t3_reports() {
        let c10 = FiberClass::new(1, 0).unwrap();
        let r = run_t3(2, c10, RingMode::Quotient).unwrap();
        assert!(r.all_passed(), "{}", r.render());
        let r = run_t3(1, c10, RingMode::Full).unwrap();
        assert!(r.all_passed(), "{}", r.render());
        let r = run_t3(4, FiberClass::new(0, 1).unwrap(), RingMode::Quotient).unwrap();
        assert!(r.all_passed(), "{}", r.render());
    }

    #[test]
    fn bundle_reports() {
        let rot = Monodromy::new(0, -1, 1, 0).unwrap();
        let r = run_bundle(
            &rot,
            &AngularProfile::affine(0.0, FRAC_PI_2),
            FiberClass::new(1, 0).unwrap(),
        )
        .unwrap();
        assert!(r.all_passed(), "{}", r.render());
        assert_eq!(r.outputs["automorphism_type"], json!("cyclic-with-twist"));
    }

    #[test]
    fn stt_reports() {
        let r = run_stt(2, 1, 3).unwrap();
        assert!(r.all_passed(), "{}", r.render());
        assert_eq!(r.outputs["betti"], json!([1, 3, 3, 1]));
        assert!(!run_stt(2, 0, 3).unwrap().all_passed());
        assert!(run_stt(1, 1, 1).is_err());
    }

    #[test]
    fn utility_reports() {
        let r = run_shoot(3, FiberClass::new(0, 1).unwrap(), 32, 1e-8).unwrap();
        assert!(r.all_passed(), "{}", r.render());
        let t = GroupRingElem::monomial(Monomial::basis(1, 0));
        let m = RingMatrix::diagonal(
            1,
            2,
            2,
            &[&GroupRingElem::one(1) - &t, &GroupRingElem::one(1) + &t],
        )
        .unwrap();
        let r = run_snf(&m).unwrap();
        assert!(r.all_passed(), "{}", r.render());
        let swap = MonomialAutomorphism::finite(1, vec![1, 0], vec![Unit::one(1); 2]).unwrap();
        let r = run_order(&swap).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.outputs["certificate"], json!({ "order": 2 }));
    }
}
