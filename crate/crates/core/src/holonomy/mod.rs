//! Automorphisms of contact homology induced by loops of contact structures.
//!
//! A loop of diffeomorphisms `phi_t` carrying a family of closed Reeb orbits
//! back to itself acts on the generators by `gamma_i -> e^{A_i} gamma_{sigma(i)}`,
//! where `sigma` is the permutation induced by `phi_1` and `A_i` the class of the
//! torus swept out by `gamma_i` under the loop.

mod automorphism;
mod higher;

use serde_json::{json, Value};

use crate::complexes::{HomologyPresentation, RingMode};
use crate::error::{Error, Result};
use crate::orbits::OrbitEnumeration;
use crate::ring::json::monomial_to_json;
use crate::ring::{lattice_rank, snf_univariate, GroupRingElem, Monomial, QuotientMap, Rational};

pub use automorphism::{IndexSet, InfiniteWitness, MonomialAutomorphism, OrderCertificate, Unit};
pub use higher::{eta_k, HigherMorphism};

/// Combinatorial data of a loop acting on a finite set of orbit families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopData {
    pub rank: usize,
    pub permutation: Vec<usize>,
    pub torus_classes: Vec<Monomial>,
}

impl LoopData {
    /// A loop fixing every family and sweeping the same torus class for each.
    pub fn uniform(n: usize, class: Monomial) -> Self {
        LoopData {
            rank: class.rank(),
            permutation: (0..n).collect(),
            torus_classes: vec![class; n],
        }
    }

    /// Families rotate `k -> k + 1 mod n`; only the wrap `n - 1 -> 0` sweeps `twist`.
    pub fn cyclic(n: usize, twist: Monomial) -> Self {
        let rank = twist.rank();
        let mut torus_classes = vec![Monomial::one(rank); n];
        if let Some(last) = torus_classes.last_mut() {
            *last = twist;
        }
        LoopData {
            rank,
            permutation: (0..n).map(|k| (k + 1) % n).collect(),
            torus_classes,
        }
    }

    /// The loop traversed backwards: the family at `sigma(i)` returns to `i`,
    /// sweeping the same torus with opposite orientation.
    pub fn reversed(&self) -> Result<Self> {
        let n = self.permutation.len();
        let mut permutation = vec![usize::MAX; n];
        let mut torus_classes = vec![Monomial::one(self.rank); n];
        for (i, &p) in self.permutation.iter().enumerate() {
            if p >= n || permutation[p] != usize::MAX {
                return Err(Error::InvalidAutomorphism(format!(
                    "{:?} is not a permutation",
                    self.permutation
                )));
            }
            permutation[p] = i;
            torus_classes[p] = self
                .torus_classes
                .get(i)
                .map(Monomial::inverse)
                .ok_or_else(|| Error::InvalidAutomorphism("missing torus class".into()))?;
        }
        Ok(LoopData {
            rank: self.rank,
            permutation,
            torus_classes,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "permutation": self.permutation,
            "torus_classes": self.torus_classes.iter().map(monomial_to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn automorphism_from_loop(data: &LoopData) -> Result<MonomialAutomorphism> {
    if data.torus_classes.len() != data.permutation.len() {
        return Err(Error::InvalidAutomorphism(format!(
            "{} families but {} torus classes",
            data.permutation.len(),
            data.torus_classes.len()
        )));
    }
    if let Some(m) = data.torus_classes.iter().find(|m| m.rank() != data.rank) {
        return Err(Error::Dimension(format!(
            "torus class {m:?} is not in Z^{}",
            data.rank
        )));
    }
    let multipliers = data
        .torus_classes
        .iter()
        .cloned()
        .map(Unit::monomial)
        .collect();
    MonomialAutomorphism::finite(data.rank, data.permutation.clone(), multipliers)
}

/// Rank of the abelian group generated by commuting pure multiplications.
///
/// Each generator is a diagonal matrix of units `+-e^{A_i}`; the group embeds in
/// `({+-1} x Z^r)^n`, so its rank is the lattice rank of the concatenated
/// exponent vectors.
pub fn subgroup_rank(gens: &[MonomialAutomorphism]) -> Result<usize> {
    let Some(first) = gens.first() else {
        return Ok(0);
    };
    let mut rows = Vec::with_capacity(gens.len());
    for g in gens {
        if g.rank() != first.rank() || g.index_set() != first.index_set() {
            return Err(Error::Dimension(
                "generators act on different modules".into(),
            ));
        }
        if !g.is_pure_multiplication() {
            return Err(Error::Unsupported(format!("{g:?} permutes generators")));
        }
        let IndexSet::Finite(n) = g.index_set() else {
            unreachable!()
        };
        let mut row = Vec::with_capacity(n * g.rank());
        for i in 0..n {
            let (_, u) = g.image(i as i64)?;
            if u.coeff.abs() != Rational::one() {
                return Err(Error::Unsupported(format!(
                    "multiplier coefficient {} is not +-1",
                    u.coeff
                )));
            }
            row.extend_from_slice(u.exponent.exponents());
        }
        rows.push(row);
    }
    lattice_rank(&rows)
}

/// Membership test for the column span of a relation matrix.
struct RelationSpan<'a> {
    h: &'a HomologyPresentation,
    snf: Option<crate::ring::Snf>,
    /// Over rank > 1: per generator, the single generator of its relation ideal.
    diagonal: Vec<Option<GroupRingElem>>,
}

impl<'a> RelationSpan<'a> {
    fn new(h: &'a HomologyPresentation) -> Result<Self> {
        let r = &h.relations;
        if h.rank == 1 {
            return Ok(RelationSpan {
                h,
                snf: Some(snf_univariate(r)?),
                diagonal: Vec::new(),
            });
        }
        let mut diagonal: Vec<Option<GroupRingElem>> = vec![None; h.generators];
        for j in 0..r.cols() {
            let col = r.column(j);
            let support: Vec<usize> = (0..col.len()).filter(|&i| !col[i].is_zero()).collect();
            let [i] = support[..] else {
                return Err(Error::Unsupported(
                    "membership over several variables needs relations on single generators".into(),
                ));
            };
            match &diagonal[i] {
                None => diagonal[i] = Some(col[i].clone()),
                Some(g) => {
                    if g.div_exact(&col[i]).is_none() || col[i].div_exact(g).is_none() {
                        return Err(Error::Unsupported(format!(
                            "generator {i} has non-principal relation data over several variables"
                        )));
                    }
                }
            }
        }
        Ok(RelationSpan {
            h,
            snf: None,
            diagonal,
        })
    }

    fn contains(&self, x: &[GroupRingElem]) -> Result<bool> {
        if let Some(snf) = &self.snf {
            let y = snf.u.apply(x)?;
            let d = snf.diagonal();
            for (i, yi) in y.iter().enumerate() {
                let ok = match d.get(i) {
                    Some(di) if !di.is_zero() => yi.div_exact(di).is_some(),
                    _ => yi.is_zero(),
                };
                if !ok {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        debug_assert_eq!(x.len(), self.h.generators);
        Ok(x.iter().zip(&self.diagonal).all(|(xi, g)| match g {
            _ if xi.is_zero() => true,
            Some(g) => xi.div_exact(g).is_some(),
            None => false,
        }))
    }
}

/// The automorphism induced on `R^n / relations`, with every multiplier that
/// acts trivially in the quotient replaced by 1.
pub fn act_on_homology(
    a: &MonomialAutomorphism,
    h: &HomologyPresentation,
) -> Result<MonomialAutomorphism> {
    if a.index_set() != IndexSet::Finite(h.generators) || a.rank() != h.rank {
        return Err(Error::Dimension(format!(
            "automorphism on {:?} over rank {} vs presentation with {} generators over rank {}",
            a.index_set(),
            a.rank(),
            h.generators,
            h.rank
        )));
    }
    let span = RelationSpan::new(h)?;
    let m = a.to_matrix()?;
    for j in 0..h.relations.cols() {
        let image = m.apply(&h.relations.column(j))?;
        if !span.contains(&image)? {
            return Err(Error::NotChainMap(format!(
                "image of relation column {j} leaves the relation module"
            )));
        }
    }
    let n = h.generators;
    let mut perm = Vec::with_capacity(n);
    let mut multipliers = Vec::with_capacity(n);
    for i in 0..n {
        let (target, u) = a.image(i as i64)?;
        let target = target as usize;
        let mut v = vec![GroupRingElem::zero(h.rank); n];
        v[target] = u.to_elem().try_sub(&GroupRingElem::one(h.rank))?;
        perm.push(target);
        multipliers.push(if span.contains(&v)? {
            Unit::one(h.rank)
        } else {
            u
        });
    }
    MonomialAutomorphism::finite(h.rank, perm, multipliers)
}

/// Basis of `H_2(T^3) = Z^3` in coordinates `(x, y, theta)`.
pub mod t3 {
    pub const A_XY: usize = 0;
    pub const A_XTHETA: usize = 1;
    pub const A_YTHETA: usize = 2;
}

/// The coefficient ring for `T^3`: either all of `H_2(T^3)` or its quotient by
/// the fiber class `A_{x,y}`, together with the map from the full ring.
pub fn t3_ring(mode: RingMode) -> Result<QuotientMap> {
    match mode {
        RingMode::Full => QuotientMap::new(3, &[]),
        RingMode::Quotient => QuotientMap::new(3, &[Monomial::basis(3, t3::A_XY)]),
    }
}

/// The loop `xi_n`: rotating the `n` orbit circles of `alpha_n` one step, with
/// the last circle sweeping `A_{x,theta}`.
pub fn t3_loop(n: usize, mode: RingMode) -> Result<LoopData> {
    if n == 0 {
        return Err(Error::Dimension("need at least one orbit circle".into()));
    }
    let q = t3_ring(mode)?;
    Ok(LoopData::cyclic(
        n,
        q.apply(&Monomial::basis(3, t3::A_XTHETA)),
    ))
}

/// Index of `A_{i,j}` (`1 <= i < j <= 5`) in the basis of `H_2(T^5) = Z^10`,
/// ordered lexicographically by `(i, j)`.
pub fn t5_pair_index(i: usize, j: usize) -> Result<usize> {
    if !(1 <= i && i < j && j <= 5) {
        return Err(Error::Domain(format!(
            "need 1 <= i < j <= 5, got ({i}, {j})"
        )));
    }
    Ok((1..i).map(|a| 5 - a).sum::<usize>() + (j - i - 1))
}

/// `A_{i,j}` as a monomial of `Q[H_2(T^5)]`, with `A_{j,i} = -A_{i,j}`.
pub fn t5_class(i: usize, j: usize) -> Result<Monomial> {
    if i > j {
        return Ok(t5_class(j, i)?.inverse());
    }
    Ok(Monomial::basis(10, t5_pair_index(i, j)?))
}

/// The coefficient ring used on `T^5`: `H_2(T^5)` modulo the page torus class `A_{4,5}`.
pub fn t5_ring() -> Result<QuotientMap> {
    QuotientMap::new(10, &[t5_class(4, 5)?])
}

/// The loop `xi^(i)` (`i = 1, 2, 3`) rotating `theta_i`, acting on a free summand of
/// `summand_rank` generators in the class of the `theta_4` circle.
pub fn t5_loop(i: usize, summand_rank: usize) -> Result<LoopData> {
    if !(1..=3).contains(&i) {
        return Err(Error::Domain(format!(
            "T^5 loops rotate theta_1..theta_3, got {i}"
        )));
    }
    if !(1..=8).contains(&summand_rank) {
        return Err(Error::Domain(format!(
            "summand rank must be in 1..=8, got {summand_rank}"
        )));
    }
    let q = t5_ring()?;
    Ok(LoopData::uniform(summand_rank, q.apply(&t5_class(i, 4)?)))
}

/// Fiber rotation on the unit tangent bundle of a surface: a single orbit
/// family sweeping the fiber torus `[T]`, over `Q[Z]`.
pub fn stsigma_loop() -> LoopData {
    LoopData::uniform(1, Monomial::basis(1, 0))
}

/// Shape of the automorphism a torus bundle loop induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleAutomorphismKind {
    CyclicWithTwist,
    Shift,
}

impl BundleAutomorphismKind {
    pub fn name(&self) -> &'static str {
        match self {
            BundleAutomorphismKind::CyclicWithTwist => "cyclic-with-twist",
            BundleAutomorphismKind::Shift => "shift",
        }
    }
}

/// The automorphism of the loop `zeta_{n,s}` on a torus bundle, over `Q[Z]`
/// generated by the torus `[T]`: finitely many families rotate cyclically with
/// the wrap sweeping `[T]`, infinitely many shift by one.
pub fn bundle_automorphism(
    e: &OrbitEnumeration,
) -> Result<(BundleAutomorphismKind, MonomialAutomorphism)> {
    let t = Monomial::basis(1, 0);
    match e {
        OrbitEnumeration::Finite(fams) => Ok((
            BundleAutomorphismKind::CyclicWithTwist,
            automorphism_from_loop(&LoopData::cyclic(fams.len(), t))?,
        )),
        OrbitEnumeration::ShiftIndexed(_) => Ok((
            BundleAutomorphismKind::Shift,
            MonomialAutomorphism::shift(1, 1, Unit::one(1), Default::default())?,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{build_morse_bott, homology, OrbitGeneratorPair};
    use crate::ring::RingMatrix;

    #[test]
    fn t3_loop_matrix() {
        let a = automorphism_from_loop(&t3_loop(3, RingMode::Full).unwrap()).unwrap();
        let m = a.to_matrix().unwrap();
        let x_theta = GroupRingElem::monomial(Monomial::basis(3, t3::A_XTHETA));
        assert!(m.get(1, 0).is_one());
        assert!(m.get(2, 1).is_one());
        assert_eq!(m.get(0, 2), &x_theta);
        assert!(a.order().is_infinite());
    }

    #[test]
    fn reversed_loop_is_inverse() {
        let data = LoopData {
            rank: 2,
            permutation: vec![2, 0, 1, 3],
            torus_classes: vec![
                Monomial::new(vec![1, 0]),
                Monomial::new(vec![0, -2]),
                Monomial::new(vec![3, 1]),
                Monomial::new(vec![0, 1]),
            ],
        };
        let a = automorphism_from_loop(&data).unwrap();
        let b = automorphism_from_loop(&data.reversed().unwrap()).unwrap();
        let prod = a
            .to_matrix()
            .unwrap()
            .try_mul(&b.to_matrix().unwrap())
            .unwrap();
        assert!(prod.is_identity());
        assert_eq!(b, a.inverse());
    }

    #[test]
    fn rejects_bad_loops() {
        let data = LoopData {
            rank: 1,
            permutation: vec![0, 0],
            torus_classes: vec![Monomial::one(1); 2],
        };
        assert!(matches!(
            automorphism_from_loop(&data),
            Err(Error::InvalidAutomorphism(_))
        ));
    }

    #[test]
    fn t5_indices() {
        assert_eq!(t5_pair_index(1, 2).unwrap(), 0);
        assert_eq!(t5_pair_index(2, 3).unwrap(), 4);
        assert_eq!(t5_pair_index(4, 5).unwrap(), 9);
        assert_eq!(t5_ring().unwrap().target_rank(), 9);
        assert!(t5_pair_index(3, 3).is_err());
    }

    #[test]
    fn t5_rank_three() {
        for s in 1..=8 {
            let gens: Vec<_> = (1..=3)
                .map(|i| automorphism_from_loop(&t5_loop(i, s).unwrap()).unwrap())
                .collect();
            assert_eq!(subgroup_rank(&gens).unwrap(), 3);
        }
    }

    #[test]
    fn subgroup_rank_small_cases() {
        let t = automorphism_from_loop(&stsigma_loop()).unwrap();
        assert_eq!(subgroup_rank(std::slice::from_ref(&t)).unwrap(), 1);
        assert_eq!(subgroup_rank(&[t.clone(), t.clone()]).unwrap(), 1);
        assert_eq!(subgroup_rank(&[]).unwrap(), 0);
        let cyc = automorphism_from_loop(&t3_loop(2, RingMode::Quotient).unwrap()).unwrap();
        assert!(matches!(subgroup_rank(&[cyc]), Err(Error::Unsupported(_))));
    }

    fn remark_presentation(n: usize) -> HomologyPresentation {
        let pairs: Vec<_> = (0..n).map(OrbitGeneratorPair::standard).collect();
        let c = build_morse_bott(&pairs, RingMode::Full, 3, &Monomial::basis(3, t3::A_XY)).unwrap();
        homology(&c, -1).unwrap()
    }

    #[test]
    fn fiber_class_acts_trivially() {
        let h = remark_presentation(2);
        let mult = MonomialAutomorphism::scalar(2, Unit::monomial(Monomial::basis(3, t3::A_XY)));
        assert!(act_on_homology(&mult, &h).unwrap().is_identity());
        let other =
            MonomialAutomorphism::scalar(2, Unit::monomial(Monomial::basis(3, t3::A_XTHETA)));
        assert!(!act_on_homology(&other, &h).unwrap().is_identity());
        let id = MonomialAutomorphism::identity(3, 2);
        assert!(act_on_homology(&id, &h).unwrap().is_identity());
    }

    #[test]
    fn action_on_specialized_presentation() {
        let h = remark_presentation(3).specialize(t3::A_XY).unwrap();
        let t = MonomialAutomorphism::scalar(3, Unit::monomial(Monomial::basis(1, 0)));
        assert!(act_on_homology(&t, &h).unwrap().is_identity());
    }

    #[test]
    fn free_module_action_unchanged() {
        let a = automorphism_from_loop(&t3_loop(2, RingMode::Quotient).unwrap()).unwrap();
        let h = HomologyPresentation::free(-1, 2, 2);
        assert_eq!(act_on_homology(&a, &h).unwrap(), a);
    }

    #[test]
    fn detects_non_chain_map() {
        let rel = RingMatrix::from_rows(
            1,
            vec![
                vec![GroupRingElem::one_minus(&Monomial::basis(1, 0))],
                vec![GroupRingElem::zero(1)],
            ],
        )
        .unwrap();
        let h = HomologyPresentation::presented(0, rel).unwrap();
        let swap = MonomialAutomorphism::finite(1, vec![1, 0], vec![Unit::one(1); 2]).unwrap();
        assert!(matches!(
            act_on_homology(&swap, &h),
            Err(Error::NotChainMap(_))
        ));
    }

    #[test]
    fn bundle_shapes() {
        use crate::orbits::{enumerate_bundle, AngularProfile, FiberClass, Monodromy};
        use std::f64::consts::FRAC_PI_2;
        let rot = Monodromy::new(0, -1, 1, 0).unwrap();
        let e = enumerate_bundle(
            &rot,
            &AngularProfile::affine(0.0, FRAC_PI_2),
            FiberClass::new(1, 0).unwrap(),
        )
        .unwrap();
        let (kind, a) = bundle_automorphism(&e).unwrap();
        assert_eq!(kind, BundleAutomorphismKind::CyclicWithTwist);
        assert!(a.order().is_infinite());
    }
}
