use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::json::{
    monomial_from_json, monomial_to_json, rational_from_json, rational_to_json,
};
use crate::ring::{GroupRingElem, Monomial, Rational, RingMatrix};

/// A unit `q e^A` of `Q[Z^r]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Unit {
    pub coeff: Rational,
    pub exponent: Monomial,
}

impl Unit {
    pub fn new(coeff: Rational, exponent: Monomial) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::InvalidAutomorphism("zero is not a unit".into()));
        }
        Ok(Unit { coeff, exponent })
    }

    pub fn one(rank: usize) -> Self {
        Unit {
            coeff: Rational::one(),
            exponent: Monomial::one(rank),
        }
    }

    pub fn monomial(exponent: Monomial) -> Self {
        Unit {
            coeff: Rational::one(),
            exponent,
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.exponent.is_one()
    }

    pub fn mul(&self, o: &Unit) -> Unit {
        Unit {
            coeff: &self.coeff * &o.coeff,
            exponent: self.exponent.mul(&o.exponent),
        }
    }

    pub fn inverse(&self) -> Unit {
        Unit {
            coeff: self.coeff.recip().expect("units are nonzero"),
            exponent: self.exponent.inverse(),
        }
    }

    pub fn to_elem(&self) -> GroupRingElem {
        GroupRingElem::term(self.exponent.clone(), self.coeff.clone())
    }

    pub fn from_elem(e: &GroupRingElem) -> Option<Unit> {
        e.as_unit()
            .map(|(coeff, exponent)| Unit { coeff, exponent })
    }

    fn to_json(&self) -> Value {
        json!([
            rational_to_json(&self.coeff),
            monomial_to_json(&self.exponent)
        ])
    }

    fn from_json(v: &Value, rank: usize) -> Result<Unit> {
        match v.as_array().map(Vec::as_slice) {
            Some([q, m]) => Unit::new(rational_from_json(q)?, monomial_from_json(m, rank)?),
            _ => Err(Error::Parse(format!(
                "expected [coeff, exponents], got {v}"
            ))),
        }
    }
}

impl fmt::Debug for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{:?}", self.coeff, self.exponent)
    }
}

/// Index set of the generators an automorphism acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexSet {
    Finite(usize),
    /// Generators `gamma_k`, `k in Z`.
    Integers,
}

#[derive(Clone, PartialEq, Eq)]
enum Action {
    Finite {
        perm: Vec<usize>,
        multipliers: Vec<Unit>,
    },
    /// `gamma_k -> m_k gamma_{k + shift}` with `m_k = tail` outside `exceptions`.
    Shift {
        shift: i64,
        tail: Unit,
        exceptions: BTreeMap<i64, Unit>,
    },
}

/// Module automorphism sending each generator to a unit multiple of a generator:
/// `gamma_i -> m_i gamma_{sigma(i)}`.
#[derive(Clone, PartialEq, Eq)]
pub struct MonomialAutomorphism {
    rank: usize,
    action: Action,
}

impl MonomialAutomorphism {
    pub fn finite(rank: usize, perm: Vec<usize>, multipliers: Vec<Unit>) -> Result<Self> {
        let n = perm.len();
        if multipliers.len() != n {
            return Err(Error::InvalidAutomorphism(format!(
                "{n} indices but {} multipliers",
                multipliers.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidAutomorphism(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        if let Some(u) = multipliers
            .iter()
            .find(|u| u.exponent.rank() != rank || u.coeff.is_zero())
        {
            return Err(Error::InvalidAutomorphism(format!(
                "bad multiplier {u:?} for rank {rank}"
            )));
        }
        Ok(MonomialAutomorphism {
            rank,
            action: Action::Finite { perm, multipliers },
        })
    }

    pub fn shift(
        rank: usize,
        shift: i64,
        tail: Unit,
        exceptions: BTreeMap<i64, Unit>,
    ) -> Result<Self> {
        if tail.exponent.rank() != rank || exceptions.values().any(|u| u.exponent.rank() != rank) {
            return Err(Error::InvalidAutomorphism(
                "multiplier rank mismatch".into(),
            ));
        }
        let exceptions = exceptions.into_iter().filter(|(_, u)| *u != tail).collect();
        Ok(MonomialAutomorphism {
            rank,
            action: Action::Shift {
                shift,
                tail,
                exceptions,
            },
        })
    }

    pub fn identity(rank: usize, n: usize) -> Self {
        MonomialAutomorphism {
            rank,
            action: Action::Finite {
                perm: (0..n).collect(),
                multipliers: vec![Unit::one(rank); n],
            },
        }
    }

    pub fn identity_shift(rank: usize) -> Self {
        Self::shift(rank, 0, Unit::one(rank), BTreeMap::new()).expect("valid")
    }

    /// Multiplication by the unit `u` on `n` generators.
    pub fn scalar(n: usize, u: Unit) -> Self {
        MonomialAutomorphism {
            rank: u.exponent.rank(),
            action: Action::Finite {
                perm: (0..n).collect(),
                multipliers: vec![u; n],
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn index_set(&self) -> IndexSet {
        match &self.action {
            Action::Finite { perm, .. } => IndexSet::Finite(perm.len()),
            Action::Shift { .. } => IndexSet::Integers,
        }
    }

    pub fn shift_amount(&self) -> Option<i64> {
        match &self.action {
            Action::Shift { shift, .. } => Some(*shift),
            Action::Finite { .. } => None,
        }
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        match &self.action {
            Action::Finite { perm, .. } => Some(perm),
            Action::Shift { .. } => None,
        }
    }

    /// `(sigma(i), m_i)`.
    pub fn image(&self, i: i64) -> Result<(i64, Unit)> {
        match &self.action {
            Action::Finite { perm, multipliers } => {
                let idx = usize::try_from(i)
                    .ok()
                    .filter(|&k| k < perm.len())
                    .ok_or_else(|| {
                        Error::Dimension(format!("index {i} outside 0..{}", perm.len()))
                    })?;
                Ok((perm[idx] as i64, multipliers[idx].clone()))
            }
            Action::Shift {
                shift,
                tail,
                exceptions,
            } => Ok((i + shift, exceptions.get(&i).unwrap_or(tail).clone())),
        }
    }

    pub fn is_pure_multiplication(&self) -> bool {
        matches!(&self.action, Action::Finite { perm, .. } if perm.iter().enumerate().all(|(i, &p)| i == p))
    }

    pub fn is_identity(&self) -> bool {
        match &self.action {
            Action::Finite { multipliers, .. } => {
                self.is_pure_multiplication() && multipliers.iter().all(Unit::is_one)
            }
            Action::Shift {
                shift,
                tail,
                exceptions,
            } => *shift == 0 && tail.is_one() && exceptions.is_empty(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank || self.index_set() != other.index_set() {
            return Err(Error::Dimension(format!(
                "cannot compose automorphisms on {:?}/rank {} and {:?}/rank {}",
                self.index_set(),
                self.rank,
                other.index_set(),
                other.rank
            )));
        }
        Ok(())
    }

    /// `self o other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        match (&self.action, &other.action) {
            (
                Action::Finite {
                    perm: pa,
                    multipliers: ma,
                },
                Action::Finite {
                    perm: pb,
                    multipliers: mb,
                },
            ) => {
                let perm = pb.iter().map(|&j| pa[j]).collect();
                let multipliers = pb.iter().zip(mb).map(|(&j, ub)| ub.mul(&ma[j])).collect();
                Self::finite(self.rank, perm, multipliers)
            }
            (
                Action::Shift {
                    shift: sa,
                    tail: ta,
                    exceptions: ea,
                },
                Action::Shift {
                    shift: sb,
                    tail: tb,
                    exceptions: eb,
                },
            ) => {
                let keys: BTreeSet<i64> = eb
                    .keys()
                    .copied()
                    .chain(ea.keys().map(|k| k - sb))
                    .collect();
                let mut exceptions = BTreeMap::new();
                for k in keys {
                    let ub = eb.get(&k).unwrap_or(tb);
                    let ua = ea.get(&(k + sb)).unwrap_or(ta);
                    exceptions.insert(k, ub.mul(ua));
                }
                Self::shift(self.rank, sa + sb, tb.mul(ta), exceptions)
            }
            _ => unreachable!("index sets checked"),
        }
    }

    pub fn inverse(&self) -> Self {
        match &self.action {
            Action::Finite { perm, multipliers } => {
                let n = perm.len();
                let mut inv_perm = vec![0; n];
                let mut inv_mult = vec![Unit::one(self.rank); n];
                for i in 0..n {
                    inv_perm[perm[i]] = i;
                    inv_mult[perm[i]] = multipliers[i].inverse();
                }
                Self::finite(self.rank, inv_perm, inv_mult).expect("inverse of a valid permutation")
            }
            Action::Shift {
                shift,
                tail,
                exceptions,
            } => {
                let exceptions = exceptions
                    .iter()
                    .map(|(k, u)| (k + shift, u.inverse()))
                    .collect();
                Self::shift(self.rank, -shift, tail.inverse(), exceptions).expect("valid")
            }
        }
    }

    /// `self^k` for `k in Z`, by repeated squaring.
    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = match self.index_set() {
            IndexSet::Finite(n) => Self::identity(self.rank, n),
            IndexSet::Integers => Self::identity_shift(self.rank),
        };
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base).expect("same shape");
            }
            base = base.compose(&base).expect("same shape");
            e >>= 1;
        }
        acc
    }

    /// Matrix acting on coefficient columns: column `i` carries `m_i` in row `sigma(i)`.
    pub fn to_matrix(&self) -> Result<RingMatrix> {
        let Action::Finite { perm, multipliers } = &self.action else {
            return Err(Error::Unsupported(
                "shift automorphisms have no finite matrix".into(),
            ));
        };
        let mut m = RingMatrix::zeros(self.rank, perm.len(), perm.len());
        for (i, (&p, u)) in perm.iter().zip(multipliers).enumerate() {
            m.set(p, i, u.to_elem());
        }
        Ok(m)
    }

    /// Cycles of the permutation, each starting at its smallest index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let Action::Finite { perm, .. } = &self.action else {
            return Vec::new();
        };
        let mut seen = vec![false; perm.len()];
        let mut out = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = perm[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = perm[j];
            }
            out.push(cycle);
        }
        out
    }

    /// Exact order certificate.
    ///
    /// A nonzero shift has infinite order. Otherwise `self^L`, with `L` a
    /// multiple of every cycle length, is diagonal with entry at `i` equal to
    /// the product of the multipliers around `i`'s cycle raised to
    /// `L / len`. So the order is infinite iff some cycle product has nonzero
    /// exponent (a twist) or a coefficient other than +-1, and otherwise equals
    /// the lcm of `len` (product 1) or `2 len` (product -1) over cycles.
    pub fn order(&self) -> OrderCertificate {
        match &self.action {
            Action::Shift {
                shift,
                tail,
                exceptions,
            } => {
                if *shift != 0 {
                    return OrderCertificate::Infinite(InfiniteWitness::Shift { amount: *shift });
                }
                let mut order = 1u64;
                let entries = std::iter::once((None, tail))
                    .chain(exceptions.iter().map(|(k, u)| (Some(*k), u)));
                for (index, u) in entries {
                    match unit_order(u) {
                        UnitOrder::Finite(m) => order = order.lcm(&m),
                        UnitOrder::Twist => {
                            return OrderCertificate::Infinite(InfiniteWitness::UnitTwist {
                                index,
                                twist: u.exponent.clone(),
                            })
                        }
                        UnitOrder::Coefficient => {
                            return OrderCertificate::Infinite(InfiniteWitness::CoefficientGrowth {
                                cycle: index.into_iter().collect(),
                                product: u.coeff.clone(),
                            })
                        }
                    }
                }
                OrderCertificate::Finite { order }
            }
            Action::Finite { multipliers, .. } => {
                let mut order = 1u64;
                for cycle in self.cycles() {
                    let total = cycle
                        .iter()
                        .fold(Unit::one(self.rank), |acc, &i| acc.mul(&multipliers[i]));
                    let len = cycle.len() as u64;
                    match unit_order(&total) {
                        UnitOrder::Finite(m) => order = order.lcm(&(len * m)),
                        UnitOrder::Twist => {
                            return OrderCertificate::Infinite(InfiniteWitness::CycleTwist {
                                cycle: cycle.iter().map(|&i| i as i64).collect(),
                                twist: total.exponent,
                            })
                        }
                        UnitOrder::Coefficient => {
                            return OrderCertificate::Infinite(InfiniteWitness::CoefficientGrowth {
                                cycle: cycle.iter().map(|&i| i as i64).collect(),
                                product: total.coeff,
                            })
                        }
                    }
                }
                OrderCertificate::Finite { order }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.action {
            Action::Finite { perm, multipliers } => json!({
                "rank": self.rank,
                "index_set": { "finite": perm.len() },
                "perm": perm,
                "multipliers": multipliers.iter().map(Unit::to_json).collect::<Vec<_>>(),
            }),
            Action::Shift {
                shift,
                tail,
                exceptions,
            } => json!({
                "rank": self.rank,
                "index_set": { "shift": shift },
                "perm": [],
                "multipliers": [tail.to_json()],
                "exceptions": exceptions
                    .iter()
                    .map(|(k, u)| json!([k, u.to_json()]))
                    .collect::<Vec<_>>(),
            }),
        }
    }

    /// Inverse of [`to_json`](Self::to_json). The ring rank is read from
    /// `"rank"` when present, otherwise from the first multiplier.
    pub fn from_json(v: &Value) -> Result<Self> {
        let mults = v["multipliers"]
            .as_array()
            .ok_or_else(|| Error::Parse("automorphism needs multipliers".into()))?;
        let rank = match v.get("rank").and_then(Value::as_u64) {
            Some(r) => r as usize,
            None => mults
                .first()
                .and_then(|u| u.get(1))
                .and_then(Value::as_array)
                .map(Vec::len)
                .ok_or_else(|| Error::Parse("cannot infer ring rank".into()))?,
        };
        let units = mults
            .iter()
            .map(|u| Unit::from_json(u, rank))
            .collect::<Result<Vec<_>>>()?;
        let index_set = &v["index_set"];
        if let Some(n) = index_set.get("finite").and_then(Value::as_u64) {
            let perm = v["perm"]
                .as_array()
                .ok_or_else(|| Error::Parse("finite automorphism needs perm".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| Error::Parse("bad perm entry".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            if perm.len() != n as usize {
                return Err(Error::Parse(format!(
                    "index set {n} but perm of length {}",
                    perm.len()
                )));
            }
            return Self::finite(rank, perm, units);
        }
        if let Some(s) = index_set.get("shift").and_then(Value::as_i64) {
            let tail = units.into_iter().next().unwrap_or_else(|| Unit::one(rank));
            let mut exceptions = BTreeMap::new();
            if let Some(arr) = v.get("exceptions").and_then(Value::as_array) {
                for e in arr {
                    match e.as_array().map(Vec::as_slice) {
                        Some([k, u]) => {
                            let k = k
                                .as_i64()
                                .ok_or_else(|| Error::Parse("bad exception index".into()))?;
                            exceptions.insert(k, Unit::from_json(u, rank)?);
                        }
                        _ => return Err(Error::Parse("exception must be [index, unit]".into())),
                    }
                }
            }
            return Self::shift(rank, s, tail, exceptions);
        }
        Err(Error::Parse(
            "index_set must be {\"finite\": n} or {\"shift\": s}".into(),
        ))
    }
}

impl fmt::Debug for MonomialAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.action {
            Action::Finite { perm, multipliers } => {
                write!(f, "Aut[")?;
                for (i, (p, u)) in perm.iter().zip(multipliers).enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{i}->{u:?}*{p}")?;
                }
                write!(f, "]")
            }
            Action::Shift {
                shift,
                tail,
                exceptions,
            } => {
                write!(
                    f,
                    "Shift[{shift}, tail {tail:?}, exceptions {exceptions:?}]"
                )
            }
        }
    }
}

enum UnitOrder {
    Finite(u64),
    Twist,
    Coefficient,
}

fn unit_order(u: &Unit) -> UnitOrder {
    if !u.exponent.is_one() {
        UnitOrder::Twist
    } else if u.coeff.is_one() {
        UnitOrder::Finite(1)
    } else if u.coeff == -Rational::one() {
        UnitOrder::Finite(2)
    } else {
        UnitOrder::Coefficient
    }
}

/// Why an automorphism has infinite order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfiniteWitness {
    /// A permutation cycle whose multipliers multiply to `q e^twist` with `twist != 0`.
    CycleTwist { cycle: Vec<i64>, twist: Monomial },
    /// A cycle (or single shift index) whose multiplier product has coefficient other than +-1.
    CoefficientGrowth { cycle: Vec<i64>, product: Rational },
    /// A nonzero shift of the `Z`-indexed generators.
    Shift { amount: i64 },
    /// A zero shift with a multiplier of nonzero exponent (`None` = the constant tail).
    UnitTwist { index: Option<i64>, twist: Monomial },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderCertificate {
    Finite { order: u64 },
    Infinite(InfiniteWitness),
}

impl OrderCertificate {
    pub fn is_infinite(&self) -> bool {
        matches!(self, OrderCertificate::Infinite(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            OrderCertificate::Finite { order } => json!({ "order": order }),
            OrderCertificate::Infinite(w) => {
                let witness = match w {
                    InfiniteWitness::CycleTwist { cycle, twist } => {
                        json!({ "cycle": cycle, "twist": monomial_to_json(twist) })
                    }
                    InfiniteWitness::CoefficientGrowth { cycle, product } => {
                        json!({ "cycle": cycle, "coefficient": rational_to_json(product) })
                    }
                    InfiniteWitness::Shift { amount } => json!({ "shift": amount }),
                    InfiniteWitness::UnitTwist { index, twist } => {
                        json!({ "index": index, "twist": monomial_to_json(twist) })
                    }
                };
                json!({ "order": "infinite", "witness": witness })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[i64]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn t3(n: usize) -> MonomialAutomorphism {
        let mut mult = vec![Unit::one(1); n];
        mult[n - 1] = Unit::monomial(mono(&[1]));
        MonomialAutomorphism::finite(1, (0..n).map(|k| (k + 1) % n).collect(), mult).unwrap()
    }

    #[test]
    fn rejects_non_bijective() {
        let err = MonomialAutomorphism::finite(1, vec![0, 0], vec![Unit::one(1); 2]);
        assert!(matches!(err, Err(Error::InvalidAutomorphism(_))));
        assert!(Unit::new(Rational::zero(), mono(&[0])).is_err());
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let a = t3(4);
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
        assert!(a.inverse().compose(&a).unwrap().is_identity());
    }

    #[test]
    fn t3_square_for_two_orbits() {
        // hand computation: [[0, t], [1, 0]]^2 = diag(t, t)
        let sq = t3(2).compose(&t3(2)).unwrap();
        assert!(sq.is_pure_multiplication());
        let m = sq.to_matrix().unwrap();
        let t = GroupRingElem::monomial(mono(&[1]));
        assert_eq!(m, RingMatrix::scalar(&t, 2));
        assert_eq!(
            t3(2)
                .to_matrix()
                .unwrap()
                .try_mul(&t3(2).to_matrix().unwrap())
                .unwrap(),
            m
        );
    }

    #[test]
    fn shifts_add() {
        let s1 = MonomialAutomorphism::shift(1, 1, Unit::one(1), BTreeMap::new()).unwrap();
        let s2 = MonomialAutomorphism::shift(1, 2, Unit::one(1), BTreeMap::new()).unwrap();
        assert_eq!(s1.compose(&s2).unwrap().shift_amount(), Some(3));
        assert!(s1.compose(&s1.inverse()).unwrap().is_identity());
    }

    #[test]
    fn shift_exceptions_compose() {
        let mut ex = BTreeMap::new();
        ex.insert(0, Unit::monomial(mono(&[1])));
        let a = MonomialAutomorphism::shift(1, 1, Unit::one(1), ex).unwrap();
        let b = a.compose(&a).unwrap();
        // gamma_0 -> t gamma_1 -> t gamma_2; gamma_-1 -> gamma_0 -> t gamma_1
        assert_eq!(b.image(0).unwrap(), (2, Unit::monomial(mono(&[1]))));
        assert_eq!(b.image(-1).unwrap(), (1, Unit::monomial(mono(&[1]))));
        assert_eq!(b.image(5).unwrap(), (7, Unit::one(1)));
        assert!(a.pow(3).compose(&a.pow(-3)).unwrap().is_identity());
    }

    #[test]
    fn order_examples() {
        match t3(3).order() {
            OrderCertificate::Infinite(InfiniteWitness::CycleTwist { cycle, twist }) => {
                assert_eq!(cycle, vec![0, 1, 2]);
                assert_eq!(twist, mono(&[1]));
            }
            other => panic!("{other:?}"),
        }
        let swap = MonomialAutomorphism::finite(1, vec![1, 0], vec![Unit::one(1); 2]).unwrap();
        assert_eq!(swap.order(), OrderCertificate::Finite { order: 2 });
        let neg = Unit::new(-Rational::one(), mono(&[0])).unwrap();
        let neg_swap =
            MonomialAutomorphism::finite(1, vec![1, 0, 2], vec![neg.clone(), Unit::one(1), neg])
                .unwrap();
        assert_eq!(neg_swap.order(), OrderCertificate::Finite { order: 4 });
        let grow = MonomialAutomorphism::scalar(
            1,
            Unit::new(Rational::from_integer(2), mono(&[0])).unwrap(),
        );
        assert!(grow.order().is_infinite());
        let s = MonomialAutomorphism::shift(1, -2, Unit::one(1), BTreeMap::new()).unwrap();
        assert_eq!(
            s.order(),
            OrderCertificate::Infinite(InfiniteWitness::Shift { amount: -2 })
        );
        assert_eq!(
            MonomialAutomorphism::identity_shift(2).order(),
            OrderCertificate::Finite { order: 1 }
        );
    }

    #[test]
    fn json_round_trip() {
        let a = t3(3);
        assert_eq!(MonomialAutomorphism::from_json(&a.to_json()).unwrap(), a);
        let mut ex = BTreeMap::new();
        ex.insert(
            4,
            Unit::new(Rational::new(-1, 3).unwrap(), mono(&[2, 0])).unwrap(),
        );
        let s = MonomialAutomorphism::shift(2, 1, Unit::monomial(mono(&[0, 1])), ex).unwrap();
        assert_eq!(MonomialAutomorphism::from_json(&s.to_json()).unwrap(), s);
        let text = r#"{"index_set": {"finite": 2}, "perm": [1, 0], "multipliers": [["1", [0]], ["1", [1]]]}"#;
        let parsed = MonomialAutomorphism::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(parsed, t3(2));
    }
}
