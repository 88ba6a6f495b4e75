use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::json::elem_to_json;
use crate::ring::{GroupRingElem, Monomial, Rational};

/// A degree-shifting endomorphism of contact homology over `Q[t]`, given by
/// multiplication by `multiplier` in the marked-point variable `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HigherMorphism {
    pub degree_shift: i64,
    pub multiplier: GroupRingElem,
    /// Whether the source homotopy group is abelian, so that concatenation of
    /// loops is sent to the sum of morphisms.
    pub additive: bool,
}

/// The image of the `d`-th multiple of the generator of `pi_{2n-1}` for the
/// unit cotangent bundle of `T^n`: multiplication by `d t`, of degree `2n - 2`.
pub fn eta_k(d: i64, n: i64) -> Result<HigherMorphism> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "marked-point morphisms need n >= 2, got {n}; use the loop automorphism for n = 1"
        )));
    }
    let k = 2 * n - 1;
    Ok(HigherMorphism {
        degree_shift: k - 1,
        multiplier: GroupRingElem::term(Monomial::new(vec![1]), Rational::from_integer(d)),
        additive: k > 1,
    })
}

impl HigherMorphism {
    /// The homotopy degree `k` of the source group.
    pub fn k(&self) -> i64 {
        self.degree_shift + 1
    }

    pub fn is_zero(&self) -> bool {
        self.multiplier.is_zero()
    }

    /// Multiplication by a nonzero element on a nonzero free `Q[t]`-module has
    /// infinite additive order.
    pub fn has_infinite_order(&self) -> bool {
        !self.is_zero()
    }

    /// The morphism of the concatenated family `xi * xi'`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.degree_shift != other.degree_shift {
            return Err(Error::Dimension(format!(
                "cannot add morphisms of degree {} and {}",
                self.degree_shift, other.degree_shift
            )));
        }
        if !self.additive {
            return Err(Error::Unsupported(
                "concatenation in pi_1 is composition, not a sum".into(),
            ));
        }
        Ok(HigherMorphism {
            degree_shift: self.degree_shift,
            multiplier: self.multiplier.try_add(&other.multiplier)?,
            additive: true,
        })
    }

    /// Precomposition of the sphere family with a self-map of degree `m`.
    pub fn precompose_degree(&self, m: i64) -> Self {
        HigherMorphism {
            degree_shift: self.degree_shift,
            multiplier: self.multiplier.scale(&Rational::from_integer(m)),
            additive: self.additive,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k(),
            "degree_shift": self.degree_shift,
            "multiplier": elem_to_json(&self.multiplier),
            "multiplier_text": self.multiplier.to_string(),
            "additive": self.additive,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_times(c: i64) -> GroupRingElem {
        GroupRingElem::term(Monomial::new(vec![1]), Rational::from_integer(c))
    }

    #[test]
    fn basic_morphism() {
        let e = eta_k(1, 2).unwrap();
        assert_eq!(e.degree_shift, 2);
        assert_eq!(e.k(), 3);
        assert_eq!(e.multiplier, t_times(1));
        assert!(e.additive);
        assert!(matches!(eta_k(1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn composition_law() {
        for d in -3..=3 {
            for m in -4..=4 {
                let e = eta_k(d, 3).unwrap().precompose_degree(m);
                assert_eq!(e.multiplier, t_times(m * d));
                assert_eq!(e.has_infinite_order(), m * d != 0);
            }
        }
    }

    #[test]
    fn additivity() {
        for (a, b) in [(1, 2), (-3, 3), (5, 0)] {
            let s = eta_k(a, 2).unwrap().concat(&eta_k(b, 2).unwrap()).unwrap();
            assert_eq!(s, eta_k(a + b, 2).unwrap());
        }
        assert!(eta_k(1, 2).unwrap().concat(&eta_k(1, 3).unwrap()).is_err());
    }
}
