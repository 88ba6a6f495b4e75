use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

use super::Rational;

/// Exponent vector `A` of a group element `e^A` in `Z^r`.
///
/// The derived ordering is lexicographic, which is a group ordering on `Z^r`
/// and is what the term maps and the exact division routine rely on.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn new(exponents: Vec<i64>) -> Self {
        Monomial(exponents)
    }

    pub fn one(rank: usize) -> Self {
        Monomial(vec![0; rank])
    }

    /// The `i`-th coordinate generator of `Z^r`.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut e = vec![0; rank];
        e[i] = 1;
        Monomial(e)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.rank(), other.rank());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.rank(), other.rank());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^{:?}", self.0)
    }
}

impl From<Vec<i64>> for Monomial {
    fn from(v: Vec<i64>) -> Self {
        Monomial(v)
    }
}

/// Element of the group ring `Q[Z^r]`: a Laurent polynomial in `r` commuting
/// variables with exact rational coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElem {
    rank: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl GroupRingElem {
    pub fn zero(rank: usize) -> Self {
        GroupRingElem {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, Rational::one())
    }

    pub fn constant(rank: usize, q: Rational) -> Self {
        Self::term(Monomial::one(rank), q)
    }

    pub fn from_int(rank: usize, n: i64) -> Self {
        Self::constant(rank, Rational::from_integer(n))
    }

    /// The single term `q * e^m`.
    pub fn term(m: Monomial, q: Rational) -> Self {
        let rank = m.rank();
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(m, q);
        }
        GroupRingElem { rank, terms }
    }

    /// `e^m` with coefficient one.
    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    /// Builds an element from `(exponents, coefficient)` pairs, merging like terms.
    pub fn from_terms<I>(rank: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut out = GroupRingElem::zero(rank);
        for (m, q) in terms {
            if m.rank() != rank {
                return Err(Error::Dimension(format!(
                    "monomial of length {} in ring of rank {rank}",
                    m.rank()
                )));
            }
            out.add_term(m, q);
        }
        Ok(out)
    }

    /// `1 - e^m`, the relation element that shows up throughout.
    pub fn one_minus(m: &Monomial) -> Self {
        let mut out = GroupRingElem::one(m.rank());
        out.add_term(m.clone(), -Rational::one());
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, q)| m.is_one() && q.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lex-largest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Lex-smallest term.
    pub fn trailing_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    fn add_term(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(c) => {
                let sum = &*c + &q;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(m, q);
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            Err(Error::Dimension(format!(
                "group ring ranks differ: {} vs {}",
                self.rank, other.rank
            )))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add_term(m.clone(), q.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add_term(m.clone(), -q);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = GroupRingElem::zero(self.rank);
        for (ma, qa) in &self.terms {
            for (mb, qb) in &other.terms {
                out.add_term(ma.mul(mb), qa * qb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return GroupRingElem::zero(self.rank);
        }
        GroupRingElem {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    /// Multiplication by the group element `e^m`.
    pub fn shift(&self, m: &Monomial) -> Self {
        GroupRingElem {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Returns `(q, A)` when the element is the unit `q * e^A`.
    pub fn as_unit(&self) -> Option<(Rational, Monomial)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, q) = self.terms.iter().next()?;
        Some((q.clone(), m.clone()))
    }

    /// The units of `Q[Z^r]` are exactly the nonzero single terms `q * e^A`;
    /// returns the inverse `q^-1 * e^-A` when `self` is one of them.
    pub fn is_unit(&self) -> Option<Self> {
        let (q, m) = self.as_unit()?;
        Some(GroupRingElem::term(m.inverse(), q.recip()?))
    }

    /// Componentwise minimum and maximum exponent over the support.
    pub fn exponent_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut iter = self.terms.keys();
        let first = iter.next()?;
        let mut lo = first.exponents().to_vec();
        let mut hi = lo.clone();
        for m in iter {
            for (i, &e) in m.exponents().iter().enumerate() {
                lo[i] = lo[i].min(e);
                hi[i] = hi[i].max(e);
            }
        }
        Some((lo, hi))
    }

    /// Exact quotient `self / divisor`, or `None` when `divisor` does not divide.
    ///
    /// Uses leading-term cancellation in the lexicographic group order. A true
    /// quotient has its support inside the box `[lo_a - lo_b, hi_a - hi_b]`, so a
    /// candidate term outside that box proves non-divisibility.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if self.rank != divisor.rank || divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(GroupRingElem::zero(self.rank));
        }
        let (lo_a, hi_a) = self.exponent_box()?;
        let (lo_b, hi_b) = divisor.exponent_box()?;
        let (lt_m, lt_q) = divisor.leading_term()?;
        let (lt_m, lt_q) = (lt_m.clone(), lt_q.clone());
        let mut rem = self.clone();
        let mut quot = GroupRingElem::zero(self.rank);
        while let Some((m, q)) = rem.leading_term() {
            let qm = m.div(&lt_m);
            let inside = qm
                .exponents()
                .iter()
                .enumerate()
                .all(|(i, &e)| e >= lo_a[i] - lo_b[i] && e <= hi_a[i] - hi_b[i]);
            if !inside {
                return None;
            }
            let qc = q / &lt_q;
            rem = rem.try_sub(&divisor.shift(&qm).scale(&qc)).ok()?;
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Image under the ring map `e^A -> e^{A_var}` that forgets every variable
    /// except `var` (all other variables are sent to 1).
    pub fn specialize(&self, var: usize) -> Result<Self> {
        if var >= self.rank {
            return Err(Error::Dimension(format!(
                "variable {var} out of range for rank {}",
                self.rank
            )));
        }
        GroupRingElem::from_terms(
            1,
            self.terms
                .iter()
                .map(|(m, q)| (Monomial(vec![m.0[var]]), q.clone())),
        )
    }

    /// Image under the ring map induced by a group homomorphism on exponents.
    pub fn map_exponents<F>(&self, target_rank: usize, f: F) -> Result<Self>
    where
        F: Fn(&Monomial) -> Monomial,
    {
        GroupRingElem::from_terms(
            target_rank,
            self.terms.iter().map(|(m, q)| (f(m), q.clone())),
        )
    }

    /// Evaluation at a point of `(Q^*)^r`.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.rank {
            return Err(Error::Dimension("evaluation point has wrong length".into()));
        }
        let mut total = Rational::zero();
        for (m, q) in &self.terms {
            let mut v = q.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                let base = if e >= 0 {
                    x.clone()
                } else {
                    x.recip()
                        .ok_or_else(|| Error::Domain("evaluation at zero".into()))?
                };
                for _ in 0..e.unsigned_abs() {
                    v = v * &base;
                }
            }
            total = total + v;
        }
        Ok(total)
    }
}

impl fmt::Debug for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{q}")?;
            } else if self.rank == 1 {
                write!(f, "{q}*t^{}", m.0[0])?;
            } else {
                write!(f, "{q}*e^{:?}", m.0)?;
            }
        }
        Ok(())
    }
}

impl Add for &GroupRingElem {
    type Output = GroupRingElem;
    fn add(self, rhs: &GroupRingElem) -> GroupRingElem {
        self.try_add(rhs).expect("group ring rank mismatch")
    }
}

impl Sub for &GroupRingElem {
    type Output = GroupRingElem;
    fn sub(self, rhs: &GroupRingElem) -> GroupRingElem {
        self.try_sub(rhs).expect("group ring rank mismatch")
    }
}

impl Mul for &GroupRingElem {
    type Output = GroupRingElem;
    fn mul(self, rhs: &GroupRingElem) -> GroupRingElem {
        self.try_mul(rhs).expect("group ring rank mismatch")
    }
}

impl Neg for &GroupRingElem {
    type Output = GroupRingElem;
    fn neg(self) -> GroupRingElem {
        self.scale(&-Rational::one())
    }
}
