//! Exact arithmetic in the group ring `Q[Z^r]` of Laurent polynomials.

mod element;
pub mod json;
pub mod lattice;
mod matrix;
mod rational;
pub mod snf;

pub use element::{GroupRingElem, Monomial};
pub use lattice::{lattice_rank, QuotientMap};
pub use matrix::RingMatrix;
pub use rational::Rational;
pub use snf::{snf_univariate, Snf};

use crate::error::Result;

/// Coefficientwise sum; fails on mismatched ring rank.
pub fn ring_add(a: &GroupRingElem, b: &GroupRingElem) -> Result<GroupRingElem> {
    a.try_add(b)
}

/// Convolution product; fails on mismatched ring rank.
pub fn ring_mul(a: &GroupRingElem, b: &GroupRingElem) -> Result<GroupRingElem> {
    a.try_mul(b)
}

/// The inverse of `a` when `a = q e^A` is a unit, otherwise `None`.
pub fn is_unit(a: &GroupRingElem) -> Option<GroupRingElem> {
    a.is_unit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn mono(e: &[i64]) -> GroupRingElem {
        GroupRingElem::monomial(Monomial::new(e.to_vec()))
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn add_examples() {
        let a = GroupRingElem::from_int(1, 3);
        let b = GroupRingElem::from_int(1, -3);
        assert!(ring_add(&a, &b).unwrap().is_zero());

        let s = ring_add(&mono(&[1, 0]), &mono(&[0, 1])).unwrap();
        assert_eq!(s.num_terms(), 2);

        let h = GroupRingElem::term(Monomial::new(vec![1]), q(1, 2));
        assert_eq!(ring_add(&h, &h).unwrap(), mono(&[1]));
    }

    #[test]
    fn add_and_mul_reject_rank_mismatch() {
        assert!(matches!(
            ring_add(&mono(&[1]), &mono(&[1, 0])),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            ring_mul(&mono(&[1]), &mono(&[1, 0])),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(
            ring_mul(&mono(&[1, 0]), &mono(&[0, 1])).unwrap(),
            mono(&[1, 1])
        );
        let t = Monomial::new(vec![1]);
        let lhs = GroupRingElem::one_minus(&t);
        let rhs = &GroupRingElem::one(1) + &mono(&[1]);
        assert_eq!(
            ring_mul(&lhs, &rhs).unwrap(),
            GroupRingElem::one_minus(&Monomial::new(vec![2]))
        );
    }

    #[test]
    fn relation_vanishes_in_quotient_ring() {
        // H_2(T^3) with basis (A_xy, A_xtheta, A_ytheta); quotient by A_xy.
        let a_xy = Monomial::basis(3, 0);
        let quot = QuotientMap::new(3, std::slice::from_ref(&a_xy)).unwrap();
        let relation = GroupRingElem::one_minus(&a_xy);
        let gamma_coeff = &mono(&[0, 1, 0]) + &GroupRingElem::from_int(3, 2);
        let product = ring_mul(&relation, &gamma_coeff).unwrap();
        assert!(!product.is_zero());
        assert!(quot.apply_elem(&product).unwrap().is_zero());
    }

    #[test]
    fn unit_examples() {
        let a = GroupRingElem::term(Monomial::new(vec![2, -1]), Rational::from_integer(5));
        let inv = is_unit(&a).unwrap();
        assert_eq!(
            inv,
            GroupRingElem::term(Monomial::new(vec![-2, 1]), q(1, 5))
        );
        assert!(ring_mul(&a, &inv).unwrap().is_one());

        let b = &GroupRingElem::one(1) + &mono(&[1]);
        assert!(is_unit(&b).is_none());
        // attempted division of 1 by 1 + t fails
        assert!(GroupRingElem::one(1).div_exact(&b).is_none());

        assert!(is_unit(&GroupRingElem::zero(2)).is_none());
    }

    #[test]
    fn exact_division_multivariate() {
        let x = Monomial::new(vec![1, 0]);
        let y = Monomial::new(vec![0, 1]);
        let a = GroupRingElem::one_minus(&x);
        let b = &mono(&[0, -1]) + &GroupRingElem::term(x.mul(&y), q(3, 2));
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(prod.div_exact(&GroupRingElem::one_minus(&y)).is_none());
    }
}
