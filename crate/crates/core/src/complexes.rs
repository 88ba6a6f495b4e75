//! Graded chain complexes of free modules over `Q[Z^r]` and their homology.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::json::{elem_to_json, matrix_from_json, matrix_to_json};
use crate::ring::{snf_univariate, GroupRingElem, Monomial, Rational, RingMatrix};

/// Free graded module with differentials `d_k : C_k -> C_{k-1}`.
///
/// `d_k` is stored as a `rank(k-1) x rank(k)` matrix acting on column vectors;
/// a missing differential is the zero map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComplex {
    rank: usize,
    ranks: BTreeMap<i64, usize>,
    differentials: BTreeMap<i64, RingMatrix>,
}

impl GradedComplex {
    pub fn new(
        rank: usize,
        ranks: BTreeMap<i64, usize>,
        differentials: BTreeMap<i64, RingMatrix>,
    ) -> Self {
        GradedComplex {
            rank,
            ranks,
            differentials,
        }
    }

    pub fn empty(rank: usize) -> Self {
        Self::new(rank, BTreeMap::new(), BTreeMap::new())
    }

    pub fn ring_rank(&self) -> usize {
        self.rank
    }

    pub fn rank_at(&self, degree: i64) -> usize {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }

    /// Degrees carrying at least one generator.
    pub fn degrees(&self) -> Vec<i64> {
        self.ranks
            .iter()
            .filter(|(_, &n)| n > 0)
            .map(|(&k, _)| k)
            .collect()
    }

    /// `d_k`, materialized as a zero matrix when absent.
    pub fn differential(&self, degree: i64) -> RingMatrix {
        self.differentials.get(&degree).cloned().unwrap_or_else(|| {
            RingMatrix::zeros(self.rank, self.rank_at(degree - 1), self.rank_at(degree))
        })
    }

    fn check_shapes(&self) -> Result<()> {
        for (&k, d) in &self.differentials {
            if d.rank() != self.rank {
                return Err(Error::InvalidComplex(format!(
                    "d_{k} lives over rank {} but the complex has rank {}",
                    d.rank(),
                    self.rank
                )));
            }
            let want = (self.rank_at(k - 1), self.rank_at(k));
            if d.shape() != want {
                return Err(Error::InvalidComplex(format!(
                    "d_{k} has shape {:?}, expected {:?}",
                    d.shape(),
                    want
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let ranks: serde_json::Map<String, Value> = self
            .ranks
            .iter()
            .map(|(k, n)| (k.to_string(), json!(n)))
            .collect();
        let diffs: serde_json::Map<String, Value> = self
            .differentials
            .iter()
            .map(|(k, d)| (k.to_string(), matrix_to_json(d)))
            .collect();
        json!({
            "rank": self.rank,
            "degrees": self.degrees(),
            "ranks": ranks,
            "differentials": diffs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("complex: {what}"));
        let rank = v["rank"].as_u64().ok_or_else(|| bad("missing rank"))? as usize;
        let mut ranks = BTreeMap::new();
        for (k, n) in v["ranks"].as_object().ok_or_else(|| bad("missing ranks"))? {
            let k: i64 = k.parse().map_err(|_| bad("degree key"))?;
            ranks.insert(k, n.as_u64().ok_or_else(|| bad("rank value"))? as usize);
        }
        let mut differentials = BTreeMap::new();
        if let Some(obj) = v["differentials"].as_object() {
            for (k, m) in obj {
                let k: i64 = k.parse().map_err(|_| bad("degree key"))?;
                let mut d = matrix_from_json(m, rank)?;
                if d.rows() == 0 {
                    // `[]` loses the column count
                    d = RingMatrix::zeros(rank, 0, ranks.get(&k).copied().unwrap_or(0));
                }
                differentials.insert(k, d);
            }
        }
        Ok(GradedComplex {
            rank,
            ranks,
            differentials,
        })
    }
}

/// Checks `d_{k-1} d_k = 0` for every degree; shape mismatches are errors.
pub fn verify_complex(c: &GradedComplex) -> Result<bool> {
    c.check_shapes()?;
    for (&k, d) in &c.differentials {
        if let Some(next) = c.differentials.get(&(k - 1)) {
            if !next.try_mul(d)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `H_k = ker d_k / im d_{k+1}` presented as `R^generators / (column span of relations)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyPresentation {
    pub degree: i64,
    pub rank: usize,
    pub generators: usize,
    /// `generators x m`; each column is a relation among the generators.
    pub relations: RingMatrix,
    /// Invariant factors, one per generator (zero = free summand); only over rank 1.
    pub normal_form: Option<Vec<GroupRingElem>>,
}

impl HomologyPresentation {
    fn from_relations(degree: i64, relations: RingMatrix) -> Result<Self> {
        let relations = drop_zero_columns(&relations);
        let rank = relations.rank();
        let generators = relations.rows();
        let normal_form = if rank == 1 {
            Some(invariant_factors(&relations)?)
        } else {
            None
        };
        Ok(HomologyPresentation {
            degree,
            rank,
            generators,
            relations,
            normal_form,
        })
    }

    /// `R^generators / (column span of relations)` over `Q[Z^r]`, `r = relations.rank()`.
    pub fn presented(degree: i64, relations: RingMatrix) -> Result<Self> {
        Self::from_relations(degree, relations)
    }

    /// The free module `R^n`.
    pub fn free(degree: i64, rank: usize, n: usize) -> Self {
        Self::from_relations(degree, RingMatrix::zeros(rank, n, 0))
            .expect("free presentations are valid")
    }

    /// Free rank, available when the normal form is.
    pub fn free_rank(&self) -> Option<usize> {
        self.normal_form
            .as_ref()
            .map(|f| f.iter().filter(|d| d.is_zero()).count())
    }

    /// Non-unit, nonzero invariant factors.
    pub fn torsion(&self) -> Option<Vec<GroupRingElem>> {
        self.normal_form.as_ref().map(|f| {
            f.iter()
                .filter(|d| !d.is_zero() && d.is_unit().is_none())
                .cloned()
                .collect()
        })
    }

    /// Whether the module vanishes; `None` when that needs a normal form we lack.
    pub fn is_zero(&self) -> Option<bool> {
        if self.generators == 0 {
            return Some(true);
        }
        self.normal_form
            .as_ref()
            .map(|f| f.iter().all(|d| d.is_unit().is_some()))
    }

    /// Base change along the map keeping variable `var` and sending all others
    /// to 1; tensoring is right exact, so the result presents `H (x) Q[t, t^-1]`.
    pub fn specialize(&self, var: usize) -> Result<Self> {
        Self::from_relations(self.degree, self.relations.specialize(var)?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "rank": self.rank,
            "generators": self.generators,
            "relations": matrix_to_json(&self.relations),
            "normal_form": self
                .normal_form
                .as_ref()
                .map(|f| f.iter().map(elem_to_json).collect::<Vec<_>>()),
        })
    }

    /// Plain-text summary, e.g. `H_-1 = (R/(1 + -1*t^1))^2`.
    pub fn render(&self) -> String {
        let mut s = format!("H_{} over Q[Z^{}]: ", self.degree, self.rank);
        match &self.normal_form {
            Some(f) => {
                let mut parts: BTreeMap<String, usize> = BTreeMap::new();
                for d in f {
                    if d.is_unit().is_some() {
                        continue;
                    }
                    let key = if d.is_zero() {
                        "R".to_string()
                    } else {
                        format!("R/({d})")
                    };
                    *parts.entry(key).or_default() += 1;
                }
                if parts.is_empty() {
                    s.push('0');
                } else {
                    let terms: Vec<String> =
                        parts.iter().map(|(k, n)| format!("({k})^{n}")).collect();
                    s.push_str(&terms.join(" + "));
                }
            }
            None => {
                let _ = write!(
                    s,
                    "{} generators, {} relations",
                    self.generators,
                    self.relations.cols()
                );
            }
        }
        s
    }
}

fn drop_zero_columns(m: &RingMatrix) -> RingMatrix {
    let keep: Vec<usize> = (0..m.cols())
        .filter(|&j| m.column(j).iter().any(|e| !e.is_zero()))
        .collect();
    let mut out = RingMatrix::zeros(m.rank(), m.rows(), keep.len());
    for (jj, &j) in keep.iter().enumerate() {
        for i in 0..m.rows() {
            out.set(i, jj, m.get(i, j).clone());
        }
    }
    out
}

/// Invariant factors of `R^g / im(m)` for a `g x m` matrix over rank 1.
fn invariant_factors(relations: &RingMatrix) -> Result<Vec<GroupRingElem>> {
    let g = relations.rows();
    let mut factors = snf_univariate(relations)?.diagonal();
    factors.resize(g, GroupRingElem::zero(1));
    Ok(factors)
}

fn probe_points(rank: usize) -> Vec<Vec<Rational>> {
    const PRIMES: [i64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    (0..3)
        .map(|s| {
            (0..rank)
                .map(|i| {
                    let p = PRIMES[(i + 4 * s) % PRIMES.len()];
                    Rational::new(p, (s as i64) + 1 + i as i64 % 2).unwrap()
                })
                .collect()
        })
        .collect()
}

/// Homology of `c` at `degree`.
///
/// Over rank 1 the kernel of `d_k` comes from its Smith form `U d_k V = D`:
/// the last `n - rho` columns of `V` span it, and since `d_k d_{k+1} = 0` the
/// image of `d_{k+1}` sits in the last `n - rho` rows of `V^-1 d_{k+1}`.
/// Over rank > 1 only two cases are handled: `d_k = 0` (kernel is everything)
/// and `d_k` injective, certified by full column rank at a rational point.
pub fn homology(c: &GradedComplex, degree: i64) -> Result<HomologyPresentation> {
    if !verify_complex(c)? {
        return Err(Error::InvalidComplex("d o d is not zero".into()));
    }
    let n = c.rank_at(degree);
    let outgoing = c.differential(degree);
    let incoming = c.differential(degree + 1);
    if n == 0 {
        return HomologyPresentation::from_relations(
            degree,
            RingMatrix::zeros(c.rank, 0, c.rank_at(degree + 1)),
        );
    }
    if c.rank == 1 {
        let s = snf_univariate(&outgoing)?;
        let rho = s.rank();
        let moved = s.v_inv.try_mul(&incoming)?;
        let mut rel = RingMatrix::zeros(1, n - rho, incoming.cols());
        for i in rho..n {
            for j in 0..incoming.cols() {
                rel.set(i - rho, j, moved.get(i, j).clone());
            }
        }
        return HomologyPresentation::from_relations(degree, rel);
    }
    if outgoing.is_zero() {
        return HomologyPresentation::from_relations(degree, incoming);
    }
    for point in probe_points(c.rank) {
        if outgoing.rank_at(&point)? == n {
            return HomologyPresentation::from_relations(
                degree,
                RingMatrix::zeros(c.rank, 0, incoming.cols()),
            );
        }
    }
    Err(Error::Unsupported(format!(
        "kernel of a non-injective d_{degree} over a rank-{} ring",
        c.rank
    )))
}

/// Coefficient ring used when building the complex of a Morse-Bott family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingMode {
    /// Relation class already divided out: the differential vanishes.
    Quotient,
    /// Full `H_2` coefficients: `d(top) = (1 - e^A) bottom`.
    Full,
}

/// The two generators contributed by one circle of closed orbits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrbitGeneratorPair {
    pub family: usize,
    pub degree_top: i64,
    pub degree_bottom: i64,
}

impl OrbitGeneratorPair {
    /// Degrees `0` and `-1`.
    pub fn standard(family: usize) -> Self {
        Self::shifted(family, 0)
    }

    /// Degrees `shift` and `shift - 1`.
    pub fn shifted(family: usize, shift: i64) -> Self {
        OrbitGeneratorPair {
            family,
            degree_top: shift,
            degree_bottom: shift - 1,
        }
    }
}

/// Position of each generator: within a degree, top generators come first in
/// family order, then bottom generators in family order.
fn generator_positions(
    families: &[OrbitGeneratorPair],
) -> (BTreeMap<i64, usize>, Vec<(usize, usize)>) {
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    let mut tops = Vec::with_capacity(families.len());
    for f in families {
        let slot = ranks.entry(f.degree_top).or_default();
        tops.push(*slot);
        *slot += 1;
    }
    let mut positions = Vec::with_capacity(families.len());
    for (f, top) in families.iter().zip(tops) {
        let slot = ranks.entry(f.degree_bottom).or_default();
        positions.push((top, *slot));
        *slot += 1;
    }
    (ranks, positions)
}

/// Complex of a collection of Morse-Bott circles of orbits.
pub fn build_morse_bott(
    families: &[OrbitGeneratorPair],
    mode: RingMode,
    rank: usize,
    relation_class: &Monomial,
) -> Result<GradedComplex> {
    if families.is_empty() {
        return Err(Error::InvalidComplex("no orbit families".into()));
    }
    if mode == RingMode::Full && relation_class.rank() != rank {
        return Err(Error::Dimension(format!(
            "relation class has length {} but the ring has rank {rank}",
            relation_class.rank()
        )));
    }
    let mut ids = BTreeSet::new();
    for f in families {
        if f.degree_top != f.degree_bottom + 1 {
            return Err(Error::InvalidComplex(format!(
                "family {} has degrees ({}, {})",
                f.family, f.degree_top, f.degree_bottom
            )));
        }
        if !ids.insert(f.family) {
            return Err(Error::InvalidComplex(format!(
                "duplicate family {}",
                f.family
            )));
        }
    }
    let (ranks, positions) = generator_positions(families);
    let mut differentials = BTreeMap::new();
    if mode == RingMode::Full {
        let coeff = GroupRingElem::one_minus(relation_class);
        for (f, &(top, bottom)) in families.iter().zip(&positions) {
            let k = f.degree_top;
            let d = differentials
                .entry(k)
                .or_insert_with(|| RingMatrix::zeros(rank, ranks[&(k - 1)], ranks[&k]));
            d.set(bottom, top, coeff.clone());
        }
    }
    Ok(GradedComplex::new(rank, ranks, differentials))
}

/// Betti numbers of the `m`-torus over `Q`: `binomial(m, k)` for `k = 0..=m`.
pub fn torus_betti(m: u32) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::Domain("torus dimension must be at least 1".into()));
    }
    let mut row = vec![1u64];
    for k in 1..=m as u64 {
        let prev = *row.last().unwrap();
        row.push(prev * (m as u64 - k + 1) / k);
    }
    Ok(row)
}
