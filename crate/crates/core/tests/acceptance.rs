//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reebkit::complexes::{build_morse_bott, homology, torus_betti, OrbitGeneratorPair, RingMode};
use reebkit::flow::shoot_all;
use reebkit::holonomy::{
    act_on_homology, automorphism_from_loop, bundle_automorphism, eta_k, subgroup_rank, t3,
    t3_loop, t5_loop, BundleAutomorphismKind, InfiniteWitness, MonomialAutomorphism,
    OrderCertificate, Unit,
};
use reebkit::lutz::critical_census;
use reebkit::orbits::{
    classify_monodromy, enumerate_bundle, enumerate_t3, AngularProfile, FiberClass, Monodromy,
    MonodromyClass, OrbitEnumeration,
};
use reebkit::report::{run_stt, run_t3, run_t5};
use reebkit::ring::snf::laurent_divides;
use reebkit::ring::{snf_univariate, GroupRingElem, Monomial, Rational, RingMatrix};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Debug>(err: E) -> String {
    format!("{err:?}")
}

fn class(p: i64, q: i64) -> FiberClass {
    FiberClass::new(p, q).expect("primitive")
}

/// Orbit circles of `alpha_n` in class (1,0) sit at `theta = 2 pi k / n`.
fn t3_orbit_counts() -> Outcome {
    for n in 1..=6 {
        let r = run_t3(n, class(1, 0), RingMode::Quotient).map_err(e)?;
        ensure(r.verdict("orbit_count").is_some_and(|v| v.passed), || {
            format!("n = {n}: orbit count")
        })?;
        let orbits = r.outputs["orbits"]["orbits"]
            .as_array()
            .ok_or("no orbit list")?;
        ensure(orbits.len() == n as usize, || {
            format!("n = {n}: {} circles", orbits.len())
        })?;
        for (k, o) in orbits.iter().enumerate() {
            let want = Rational::new(k as i64, n).map_err(e)?.to_string();
            ensure(o["theta_turns"] == want.as_str(), || {
                format!(
                    "n = {n}, k = {k}: theta = 2pi*{} instead of 2pi*{want}",
                    o["theta_turns"]
                )
            })?;
        }
    }
    Ok("n = 1..6 give n circles at 2 pi k / n".into())
}

/// The loop automorphism has a twist certificate and no power up to 100 is the
/// identity, checked by multiplying the monomial matrices.
fn t3_infinite_order() -> Outcome {
    let twist = Monomial::basis(3, t3::A_XTHETA);
    for n in 1..=6usize {
        let a = automorphism_from_loop(&t3_loop(n, RingMode::Full).map_err(e)?).map_err(e)?;
        match a.order() {
            OrderCertificate::Infinite(InfiniteWitness::CycleTwist { twist: w, .. })
                if w == twist => {}
            other => return Err(format!("n = {n}: certificate {other:?}")),
        }
        let m = a.to_matrix().map_err(e)?;
        let mut p = m.clone();
        for j in 1..=100 {
            ensure(!p.is_identity(), || {
                format!("n = {n}: power {j} is the identity")
            })?;
            p = p.try_mul(&m).map_err(e)?;
        }
        let r = run_t3(n as i64, class(1, 0), RingMode::Full).map_err(e)?;
        ensure(
            r.verdict("infinite_cyclic").is_some_and(|v| v.passed),
            || format!("n = {n}: report"),
        )?;
    }
    Ok("twist A_{x,theta} on the n-cycle, powers 1..100 are not the identity".into())
}

/// Over the full ring, `H_-1` is `n` copies of `R / (1 - e^{A_{x,y}})` and
/// multiplication by `e^{A_{x,y}}` acts trivially.
fn remark_reproduction() -> Outcome {
    let fiber = Monomial::basis(3, t3::A_XY);
    let one_minus_t = &GroupRingElem::one(1) - &GroupRingElem::monomial(Monomial::basis(1, 0));
    for n in 1..=6usize {
        let pairs: Vec<_> = (0..n).map(OrbitGeneratorPair::standard).collect();
        let c = build_morse_bott(&pairs, RingMode::Full, 3, &fiber).map_err(e)?;
        let h = homology(&c, -1).map_err(e)?;
        ensure(h.generators == n, || {
            format!("n = {n}: {} generators", h.generators)
        })?;
        let factors = h
            .specialize(t3::A_XY)
            .map_err(e)?
            .normal_form
            .ok_or("no normal form")?;
        ensure(
            factors.len() == n && factors.iter().all(|d| *d == one_minus_t),
            || format!("n = {n}: invariant factors {factors:?}"),
        )?;
        let induced = act_on_homology(
            &MonomialAutomorphism::scalar(n, Unit::monomial(fiber.clone())),
            &h,
        )
        .map_err(e)?;
        ensure(induced.is_identity(), || {
            format!("n = {n}: induced {induced:?}")
        })?;
    }
    Ok("invariant factors (1 - t)^n, fiber class acts as the identity".into())
}

fn bundle_case(
    a: &Monodromy,
    cls: FiberClass,
    turns: u32,
) -> Result<(BundleAutomorphismKind, OrderCertificate), String> {
    let profile = AngularProfile::compatible(a, 0.0, turns);
    let en = enumerate_bundle(a, &profile, cls).map_err(e)?;
    if let OrbitEnumeration::Finite(f) = &en {
        ensure(!f.is_empty(), || format!("{a} {cls:?}: no orbits"))?;
    }
    let (kind, aut) = bundle_automorphism(&en).map_err(e)?;
    Ok((kind, aut.order()))
}

fn bundle_trichotomy() -> Outcome {
    let ell = Monodromy::new(0, -1, 1, 0).map_err(e)?;
    let par = Monodromy::new(1, 1, 0, 1).map_err(e)?;
    let hyp = Monodromy::new(2, 1, 1, 1).map_err(e)?;
    ensure(
        classify_monodromy(&ell) == MonodromyClass::Elliptic { order: 4 },
        || "elliptic".into(),
    )?;
    ensure(
        classify_monodromy(&par) == MonodromyClass::Parabolic,
        || "parabolic".into(),
    )?;
    ensure(
        classify_monodromy(&hyp) == MonodromyClass::Hyperbolic,
        || "hyperbolic".into(),
    )?;
    use BundleAutomorphismKind::*;
    let cases: Vec<(&Monodromy, (i64, i64), BundleAutomorphismKind)> = vec![
        (&ell, (1, 0), CyclicWithTwist),
        (&ell, (0, 1), CyclicWithTwist),
        (&ell, (1, 1), CyclicWithTwist),
        (&ell, (2, -1), CyclicWithTwist),
        (&par, (1, 0), CyclicWithTwist),
        (&par, (-1, 0), CyclicWithTwist),
        (&par, (0, 1), Shift),
        (&par, (1, 1), Shift),
        (&hyp, (1, 0), Shift),
        (&hyp, (0, 1), Shift),
        (&hyp, (1, -1), Shift),
    ];
    let mut count = 0;
    for (a, (p, q), want) in cases {
        for turns in 0..3 {
            let (kind, cert) = bundle_case(a, class(p, q), turns)?;
            ensure(kind == want, || {
                format!("{a} ({p},{q}) turns {turns}: {kind:?}, expected {want:?}")
            })?;
            ensure(cert.is_infinite(), || {
                format!("{a} ({p},{q}) turns {turns}: {cert:?}")
            })?;
            count += 1;
        }
    }
    Ok(format!(
        "Elliptic(4)/Parabolic/Hyperbolic, {count} configurations all of infinite order"
    ))
}

fn lutz_census() -> Outcome {
    let mut times = Vec::new();
    for eps in [0.1, 0.25] {
        for grid in [64, 128] {
            let t = Instant::now();
            let c = critical_census(eps, grid, 1e-10).map_err(e)?;
            let dt = t.elapsed();
            ensure(c.counts() == (4, 8, 0) && c.degenerate == 0, || {
                format!("eps {eps}, grid {grid}: counts {:?}", c.counts())
            })?;
            ensure(c.max_gradient_norm() < 1e-9, || {
                format!("gradient norm {:e}", c.max_gradient_norm())
            })?;
            let top = c
                .points
                .iter()
                .filter(|p| p.kind == reebkit::lutz::CriticalKind::Maximum);
            for p in top {
                ensure((p.value / (2.0 * eps * eps) - 1.0).abs() < 1e-9, || {
                    format!("max value {}", p.value)
                })?;
            }
            ensure(dt < Duration::from_secs(30), || {
                format!("eps {eps}, grid {grid} took {dt:?}")
            })?;
            times.push(dt.as_secs_f64());
        }
    }
    let worst = times.iter().cloned().fold(0.0, f64::max);
    Ok(format!(
        "4 maxima, 8 saddles on all four runs (slowest {worst:.2}s)"
    ))
}

/// Rank over Q of an integer matrix by fraction-free elimination.
fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let (a, b) = (m[rank][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * a - m[rank][j] * b;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn t5_rank() -> Outcome {
    for s in 1..=8 {
        let gens: Vec<_> = (1..=3)
            .map(|i| automorphism_from_loop(&t5_loop(i, s).map_err(e)?).map_err(e))
            .collect::<Result<_, _>>()?;
        let rank = subgroup_rank(&gens).map_err(e)?;
        let rows: Vec<Vec<i64>> = gens
            .iter()
            .map(|g| g.image(0).map(|(_, u)| u.exponent.exponents().to_vec()))
            .collect::<Result<_, _>>()
            .map_err(e)?;
        ensure(rank == 3 && rational_rank(&rows) == 3, || {
            format!("summand rank {s}: rank {rank}")
        })?;
        let r = run_t5(0.25, s, 32, 1e-10).map_err(e)?;
        ensure(r.verdict("subgroup_rank").is_some_and(|v| v.passed), || {
            format!("report for summand {s}")
        })?;
    }
    Ok("rank 3 for summand ranks 1..8".into())
}

fn stt() -> Outcome {
    for n in [2i64, 3] {
        let m = (2 * n - 1) as usize;
        let mut row = vec![1u64];
        for _ in 0..m {
            let mut next = vec![1u64; row.len() + 1];
            for k in 1..row.len() {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
        }
        let betti = torus_betti(m as u32).map_err(e)?;
        ensure(betti == row, || {
            format!("n = {n}: {betti:?} vs Pascal {row:?}")
        })?;
        for d in -3..=3 {
            let eta = eta_k(d, n).map_err(e)?;
            for k in -3..=3 {
                let want =
                    GroupRingElem::term(Monomial::new(vec![1]), Rational::from_integer(k * d));
                ensure(eta.precompose_degree(k).multiplier == want, || {
                    format!("n {n} d {d} m {k}")
                })?;
            }
        }
        let r = run_stt(n, 1, 3).map_err(e)?;
        ensure(r.all_passed(), || r.render())?;
    }
    Ok("binomial Betti rows for T^3 and T^5, multiplier m d t".into())
}

fn random_automorphism(rng: &mut ChaCha8Rng) -> MonomialAutomorphism {
    let n = rng.gen_range(1..=6);
    let rank = rng.gen_range(1..=3);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut mult: Vec<(i64, Vec<i64>)> = (0..n)
        .map(|_| {
            let c = [1, -1, 1, -1, 2][rng.gen_range(0..5)];
            (c, (0..rank).map(|_| rng.gen_range(-3..=3)).collect())
        })
        .collect();
    if rng.gen_bool(0.6) {
        // cancel every cycle's twist and coefficient growth
        let a = MonomialAutomorphism::finite(rank, perm.clone(), vec![Unit::one(rank); n]).unwrap();
        for cyc in a.cycles() {
            let last = *cyc.last().unwrap();
            let mut sum = vec![0i64; rank];
            for &i in &cyc[..cyc.len() - 1] {
                if mult[i].0 == 2 {
                    mult[i].0 = 1;
                }
                for (s, x) in sum.iter_mut().zip(&mult[i].1) {
                    *s += x;
                }
            }
            mult[last].1 = sum.iter().map(|s| -s).collect();
            if mult[last].0 == 2 {
                mult[last].0 = -1;
            }
        }
    }
    let units = mult
        .into_iter()
        .map(|(c, ex)| Unit::new(Rational::from_integer(c), Monomial::new(ex)).unwrap())
        .collect();
    MonomialAutomorphism::finite(rank, perm, units).unwrap()
}

fn brute_force_order(a: &MonomialAutomorphism, bound: u64) -> Option<u64> {
    let mut p = a.clone();
    for m in 1..=bound {
        if p.is_identity() {
            return Some(m);
        }
        p = p.compose(a).unwrap();
    }
    None
}

fn random_matrix(rng: &mut ChaCha8Rng) -> RingMatrix {
    let rows = (0..4)
        .map(|_| {
            (0..4)
                .map(|_| {
                    if rng.gen_bool(0.25) {
                        return GroupRingElem::zero(1);
                    }
                    let lo = rng.gen_range(-2..=2);
                    let span = rng.gen_range(0..=3);
                    let terms: Vec<_> = (lo..=lo + span)
                        .map(|k| {
                            (
                                Monomial::new(vec![k]),
                                Rational::from_integer(rng.gen_range(-3..=3)),
                            )
                        })
                        .collect();
                    GroupRingElem::from_terms(1, terms).unwrap()
                })
                .collect()
        })
        .collect();
    RingMatrix::from_rows(1, rows).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut finite, mut infinite) = (0, 0);
    for trial in 0..200 {
        let a = random_automorphism(&mut rng);
        // every finite order here divides 2 * lcm(1..=6) = 120
        let brute = brute_force_order(&a, 120);
        match (a.order(), brute) {
            (OrderCertificate::Finite { order }, Some(m)) if order == m => finite += 1,
            (OrderCertificate::Infinite(_), None) => {
                ensure(brute_force_order(&a, 100).is_none(), || {
                    format!("trial {trial}")
                })?;
                infinite += 1;
            }
            (cert, brute) => {
                return Err(format!(
                    "trial {trial}: {a:?} certificate {cert:?}, brute force {brute:?}"
                ))
            }
        }
    }

    for n in 1..=6 {
        for (p, q) in [(1, 0), (0, 1), (-1, 0)] {
            let shots = shoot_all(n, class(p, q), 64, 1e-8).map_err(e)?;
            let sym = enumerate_t3(n, class(p, q)).map_err(e)?;
            let fams = sym.finite().ok_or("finite")?;
            ensure(shots.len() == fams.len(), || {
                format!("n {n} ({p},{q}): {} vs {}", shots.len(), fams.len())
            })?;
            for (s, f) in shots.iter().zip(fams) {
                let d = (s.theta_star - f.theta.value()).rem_euclid(TAU);
                ensure(d.min(TAU - d) < 1e-6, || {
                    format!("n {n} ({p},{q}): {} vs {}", s.theta_star, f.theta.value())
                })?;
            }
        }
    }

    for trial in 0..100 {
        let m = random_matrix(&mut rng);
        let f = snf_univariate(&m).map_err(e)?;
        let umv = f.u.try_mul(&m).and_then(|x| x.try_mul(&f.v)).map_err(e)?;
        ensure(umv == f.d && f.d.is_diagonal(), || {
            format!("matrix {trial}: U m V != D")
        })?;
        ensure(f.u.try_mul(&f.u_inv).map_err(e)?.is_identity(), || {
            format!("matrix {trial}: U")
        })?;
        ensure(f.v.try_mul(&f.v_inv).map_err(e)?.is_identity(), || {
            format!("matrix {trial}: V")
        })?;
        let diag = f.diagonal();
        let rank = diag.iter().take_while(|d| !d.is_zero()).count();
        ensure(diag[rank..].iter().all(GroupRingElem::is_zero), || {
            format!("matrix {trial}: zero order")
        })?;
        for w in diag[..rank].windows(2) {
            ensure(laurent_divides(&w[0], &w[1]).map_err(e)?, || {
                format!("matrix {trial}: {:?}", diag)
            })?;
        }
        // det(m) equals the product of invariant factors up to a unit
        let det = m.determinant().map_err(e)?;
        let prod = diag.iter().fold(GroupRingElem::one(1), |acc, d| &acc * d);
        let same = if det.is_zero() {
            prod.is_zero()
        } else {
            !prod.is_zero() && det.div_exact(&prod).and_then(|q| q.is_unit()).is_some()
        };
        ensure(same, || {
            format!("matrix {trial}: det {det} vs product {prod}")
        })?;
    }
    Ok(format!(
        "200 automorphisms ({finite} finite, {infinite} infinite), 18 flow/symbolic sets, 100 SNFs"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 T3 orbit counts", t3_orbit_counts, Duration::from_secs(1)),
        (
            "2 T3 infinite order",
            t3_infinite_order,
            Duration::from_secs(1),
        ),
        (
            "3 full-ring homology and fiber action",
            remark_reproduction,
            Duration::from_secs(1),
        ),
        (
            "4 bundle trichotomy",
            bundle_trichotomy,
            Duration::from_secs(5),
        ),
        ("5 Lutz census", lutz_census, Duration::from_secs(120)),
        ("6 T5 subgroup rank", t5_rank, Duration::from_secs(1)),
        (
            "7 STT Betti and composition law",
            stt,
            Duration::from_secs(1),
        ),
        (
            "8 oracle equivalence",
            oracle_equivalence,
            Duration::from_secs(60),
        ),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let t = Instant::now();
        let outcome = run();
        let dt = t.elapsed();
        let outcome = match outcome {
            Ok(msg) if dt > limit => Err(format!("{msg}; took {dt:?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{:.3}s]", dt.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{:.3}s]", dt.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
