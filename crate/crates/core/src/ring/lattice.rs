//! Integer lattices of exponent vectors: rank by row reduction and the
//! projection `Z^r -> Z^r / R` used to pass to a quotient coefficient ring.

use crate::error::{Error, Result};

use super::{GroupRingElem, Monomial};

type Grid = Vec<Vec<i128>>;

fn checked(v: Option<i128>) -> Result<i128> {
    v.ok_or(Error::Overflow)
}

/// Integer Smith form `P * m * Q = S`, tracking only the column transform `Q`.
/// Returns the nonzero diagonal of `S` (nonnegative) and `Q`.
fn smith_columns(m: &[Vec<i64>], cols: usize) -> Result<(Vec<i128>, Grid)> {
    let mut a: Grid = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let rows = a.len();
    let mut q: Grid = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut diag = Vec::new();

    let col_axpy = |a: &mut Grid, q: &mut Grid, dst: usize, src: usize, c: i128| -> Result<()> {
        for row in a.iter_mut().chain(q.iter_mut()) {
            row[dst] = checked(row[dst].checked_add(checked(row[src].checked_mul(c))?))?;
        }
        Ok(())
    };

    for k in 0..rows.min(cols) {
        loop {
            // smallest nonzero |entry| in the trailing block
            let mut best: Option<(i128, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(k) {
                for (j, &x) in row.iter().enumerate().skip(k) {
                    if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                        best = Some((x.abs(), i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                return Ok((diag, q));
            };
            a.swap(k, pi);
            for row in a.iter_mut().chain(q.iter_mut()) {
                row.swap(k, pj);
            }
            let p = a[k][k];
            let mut dirty = false;
            for i in k + 1..rows {
                let f = a[i][k] / p;
                if f != 0 {
                    for j in k..cols {
                        a[i][j] = checked(a[i][j].checked_sub(checked(f.checked_mul(a[k][j]))?))?;
                    }
                }
                dirty |= a[i][k] != 0;
            }
            for j in k + 1..cols {
                let f = a[k][j] / p;
                if f != 0 {
                    col_axpy(&mut a, &mut q, j, k, -f)?;
                }
                dirty |= a[k][j] != 0;
            }
            if dirty {
                continue;
            }
            let offending = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| a[i][j] % p != 0));
            match offending {
                Some(i) => {
                    for j in k..cols {
                        a[k][j] = checked(a[k][j].checked_add(a[i][j]))?;
                    }
                }
                None => break,
            }
        }
        diag.push(a[k][k].abs());
    }
    Ok((diag, q))
}

/// Rank of the sublattice of `Z^r` spanned by the given vectors.
pub fn lattice_rank(vectors: &[Vec<i64>]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let cols = first.len();
    if vectors.iter().any(|v| v.len() != cols) {
        return Err(Error::Dimension(
            "exponent vectors of different lengths".into(),
        ));
    }
    Ok(smith_columns(vectors, cols)?.0.len())
}

/// The ring map `Q[Z^r] -> Q[Z^r / R]` for a saturated sublattice `R`.
///
/// Coordinates on the quotient come from an integer Smith form of the
/// generators of `R`; the quotient must be torsion-free so that it is again
/// some `Z^s` and the coefficient ring stays a Laurent polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMap {
    source_rank: usize,
    target_rank: usize,
    // source_rank x target_rank integer matrix; a row vector x maps to x * proj
    proj: Vec<Vec<i64>>,
}

impl QuotientMap {
    pub fn new(source_rank: usize, relations: &[Monomial]) -> Result<Self> {
        if relations.iter().any(|m| m.rank() != source_rank) {
            return Err(Error::Dimension("relation class has wrong length".into()));
        }
        let rows: Vec<Vec<i64>> = relations.iter().map(|m| m.exponents().to_vec()).collect();
        let (diag, q) = smith_columns(&rows, source_rank)?;
        if let Some(d) = diag.iter().find(|&&d| d != 1) {
            return Err(Error::Unsupported(format!(
                "quotient lattice has torsion (elementary divisor {d})"
            )));
        }
        let rho = diag.len();
        let proj = q
            .iter()
            .map(|row| {
                row[rho..]
                    .iter()
                    .map(|&x| i64::try_from(x).map_err(|_| Error::Overflow))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QuotientMap {
            source_rank,
            target_rank: source_rank - rho,
            proj,
        })
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn apply(&self, m: &Monomial) -> Monomial {
        let mut out = vec![0i64; self.target_rank];
        for (x, row) in m.exponents().iter().zip(&self.proj) {
            for (o, p) in out.iter_mut().zip(row) {
                *o += x * p;
            }
        }
        Monomial::new(out)
    }

    pub fn apply_elem(&self, a: &GroupRingElem) -> Result<GroupRingElem> {
        if a.rank() != self.source_rank {
            return Err(Error::Dimension("element not in the source ring".into()));
        }
        a.map_exponents(self.target_rank(), |m| self.apply(m))
    }
}
