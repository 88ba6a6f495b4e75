use std::fmt;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Gluing matrix `[[a, b], [c, d]]` of the torus bundle `T^3_A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monodromy {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl Monodromy {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(x, y)| x.checked_sub(y))
            .ok_or(Error::Overflow)?;
        if det != 1 {
            return Err(Error::InvalidMonodromy(format!(
                "[[{a}, {b}], [{c}, {d}]] has determinant {det}"
            )));
        }
        Ok(Monodromy { a, b, c, d })
    }

    pub fn identity() -> Self {
        Monodromy {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn inverse(&self) -> Self {
        Monodromy {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn mul(&self, o: &Monodromy) -> Result<Self> {
        let dot = |x: i64, y: i64, z: i64, w: i64| {
            x.checked_mul(y)
                .zip(z.checked_mul(w))
                .and_then(|(p, q)| p.checked_add(q))
                .ok_or(Error::Overflow)
        };
        Ok(Monodromy {
            a: dot(self.a, o.a, self.b, o.c)?,
            b: dot(self.a, o.b, self.b, o.d)?,
            c: dot(self.c, o.a, self.d, o.c)?,
            d: dot(self.c, o.b, self.d, o.d)?,
        })
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut out = Self::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    pub fn apply(&self, v: (i64, i64)) -> Result<(i64, i64)> {
        let row = |x: i64, y: i64| {
            x.checked_mul(v.0)
                .zip(y.checked_mul(v.1))
                .and_then(|(p, q)| p.checked_add(q))
                .ok_or(Error::Overflow)
        };
        Ok((row(self.a, self.b)?, row(self.c, self.d)?))
    }

    /// `A (cos x, sin x)` as a float vector.
    pub fn apply_f64(&self, v: (f64, f64)) -> (f64, f64) {
        (
            self.a as f64 * v.0 + self.b as f64 * v.1,
            self.c as f64 * v.0 + self.d as f64 * v.1,
        )
    }

    pub fn to_json(&self) -> Value {
        json!(self.entries())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr: Vec<i64> = v
            .as_array()
            .ok_or_else(|| Error::Parse("monodromy must be [a, b, c, d]".into()))?
            .iter()
            .map(|x| {
                x.as_i64()
                    .ok_or_else(|| Error::Parse(format!("bad entry {x}")))
            })
            .collect::<Result<_>>()?;
        match arr.as_slice() {
            &[a, b, c, d] => Monodromy::new(a, b, c, d),
            _ => Err(Error::Parse("monodromy must have four entries".into())),
        }
    }
}

impl fmt::Display for Monodromy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Conjugacy-invariant type of an element of `SL(2, Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonodromyClass {
    Identity,
    MinusIdentity,
    /// `|tr| < 2`; the order is 4 (tr 0), 6 (tr 1) or 3 (tr -1).
    Elliptic {
        order: u32,
    },
    /// `|tr| = 2`, `A != +-I`.
    Parabolic,
    /// `|tr| > 2`.
    Hyperbolic,
}

impl MonodromyClass {
    /// Finite order in `SL(2, Z)`, if any.
    pub fn order(&self) -> Option<u32> {
        match self {
            MonodromyClass::Identity => Some(1),
            MonodromyClass::MinusIdentity => Some(2),
            MonodromyClass::Elliptic { order } => Some(*order),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonodromyClass::Identity => "identity".into(),
            MonodromyClass::MinusIdentity => "minus_identity".into(),
            MonodromyClass::Elliptic { order } => format!("elliptic({order})"),
            MonodromyClass::Parabolic => "parabolic".into(),
            MonodromyClass::Hyperbolic => "hyperbolic".into(),
        }
    }
}

/// Trace-rule classification; elliptic orders follow from Cayley-Hamilton
/// (`A^2 = tr(A) A - I`).
pub fn classify_monodromy(a: &Monodromy) -> MonodromyClass {
    if a.is_identity() {
        return MonodromyClass::Identity;
    }
    if a.entries() == [-1, 0, 0, -1] {
        return MonodromyClass::MinusIdentity;
    }
    match a.trace() {
        0 => MonodromyClass::Elliptic { order: 4 },
        1 => MonodromyClass::Elliptic { order: 6 },
        -1 => MonodromyClass::Elliptic { order: 3 },
        2 | -2 => MonodromyClass::Parabolic,
        _ => MonodromyClass::Hyperbolic,
    }
}

/// Primitive homotopy class `(p, q)` of a loop in a `T^2` fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberClass {
    p: i64,
    q: i64,
}

impl FiberClass {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidClass("the trivial class (0, 0)".into()));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidClass(format!(
                "({p}, {q}) is a multiple cover; only primitive classes are supported"
            )));
        }
        Ok(FiberClass { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn as_pair(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    /// Direction angle in `[0, 2 pi)`.
    pub fn angle(&self) -> f64 {
        (self.q as f64)
            .atan2(self.p as f64)
            .rem_euclid(std::f64::consts::TAU)
    }

    /// Direction angle as an exact fraction of a full turn, when it is one.
    /// For a primitive integer vector this happens only for the axis and
    /// diagonal directions (tan of a rational multiple of pi is rational only
    /// for 0 and +-1).
    pub fn exact_turns(&self) -> Option<(i64, i64)> {
        let turns = match (
            self.p.signum(),
            self.q.signum(),
            self.p.abs() == self.q.abs(),
        ) {
            (1, 0, _) => (0, 1),
            (1, 1, true) => (1, 8),
            (0, 1, _) => (1, 4),
            (-1, 1, true) => (3, 8),
            (-1, 0, _) => (1, 2),
            (-1, -1, true) => (5, 8),
            (0, -1, _) => (3, 4),
            (1, -1, true) => (7, 8),
            _ => return None,
        };
        Some(turns)
    }

    pub fn to_json(&self) -> Value {
        json!([self.p, self.q])
    }
}

impl fmt::Display for FiberClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Why the `<A>`-orbit of a class is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfiniteOrbitWitness {
    /// `|tr A| > 2`: no nonzero integer vector has a finite orbit.
    Hyperbolic { trace: i64 },
    /// Parabolic `A` and `v` not an eigenvector: `A v - v` (resp. `+ v`) is a
    /// nonzero multiple of the eigenvector, so `A^k v` grows linearly in `k`.
    ParabolicNonEigen { cross: i64 },
}

/// The orbit `{A^k v : k in Z}` of a fiber class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassOrbit {
    Finite(Vec<FiberClass>),
    Infinite(InfiniteOrbitWitness),
}

impl ClassOrbit {
    pub fn is_finite(&self) -> bool {
        matches!(self, ClassOrbit::Finite(_))
    }
}

/// Orbit of `v` under the cyclic group generated by `A`, decided from the
/// trace alone: finite-order `A` gives a finite orbit, hyperbolic `A` an
/// infinite one, and parabolic `A` a finite one exactly when `A v = +-v`.
pub fn class_orbit(a: &Monodromy, v: FiberClass) -> Result<ClassOrbit> {
    let cls = classify_monodromy(a);
    match cls {
        MonodromyClass::Hyperbolic => {
            return Ok(ClassOrbit::Infinite(InfiniteOrbitWitness::Hyperbolic {
                trace: a.trace(),
            }))
        }
        MonodromyClass::Parabolic => {
            let (x, y) = a.apply(v.as_pair())?;
            let cross = x * v.q - y * v.p;
            if cross != 0 {
                return Ok(ClassOrbit::Infinite(
                    InfiniteOrbitWitness::ParabolicNonEigen { cross },
                ));
            }
        }
        _ => {}
    }
    let mut out = vec![v];
    let mut w = a.apply(v.as_pair())?;
    while w != v.as_pair() {
        out.push(FiberClass::new(w.0, w.1)?);
        w = a.apply(w)?;
        if out.len() > 6 {
            unreachable!("finite-order element of SL(2, Z) with orbit longer than 6");
        }
    }
    Ok(ClassOrbit::Finite(out))
}
