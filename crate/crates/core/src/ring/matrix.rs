use std::fmt;

use crate::error::{Error, Result};

use super::{GroupRingElem, Rational};

/// Dense matrix over `Q[Z^r]`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    rank: usize,
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElem>,
}

impl RingMatrix {
    pub fn zeros(rank: usize, rows: usize, cols: usize) -> Self {
        RingMatrix {
            rank,
            rows,
            cols,
            entries: vec![GroupRingElem::zero(rank); rows * cols],
        }
    }

    pub fn identity(rank: usize, n: usize) -> Self {
        let mut m = Self::zeros(rank, n, n);
        for i in 0..n {
            m.set(i, i, GroupRingElem::one(rank));
        }
        m
    }

    /// `d * I_n`.
    pub fn scalar(d: &GroupRingElem, n: usize) -> Self {
        let mut m = Self::zeros(d.rank(), n, n);
        for i in 0..n {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn diagonal(rank: usize, rows: usize, cols: usize, diag: &[GroupRingElem]) -> Result<Self> {
        if diag.len() > rows.min(cols) {
            return Err(Error::Dimension("too many diagonal entries".into()));
        }
        let mut m = Self::zeros(rank, rows, cols);
        for (i, d) in diag.iter().enumerate() {
            if d.rank() != rank {
                return Err(Error::Dimension("diagonal entry has wrong rank".into()));
            }
            m.set(i, i, d.clone());
        }
        Ok(m)
    }

    pub fn from_rows(rank: usize, rows: Vec<Vec<GroupRingElem>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::Dimension("ragged matrix rows".into()));
            }
            for e in row {
                if e.rank() != rank {
                    return Err(Error::Dimension(format!(
                        "entry of rank {} in matrix of rank {rank}",
                        e.rank()
                    )));
                }
                entries.push(e);
            }
        }
        Ok(RingMatrix {
            rank,
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: GroupRingElem) {
        debug_assert_eq!(value.rank(), self.rank);
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[GroupRingElem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<GroupRingElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupRingElem::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// True when every off-diagonal entry vanishes.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.rank, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::Dimension("matrix ring ranks differ".into()));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rank, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let acc = out.get(i, j) + &(a * b);
                    out.set(i, j, acc);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank || self.shape() != other.shape() {
            return Err(Error::Dimension("matrix shapes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(RingMatrix {
            rank: self.rank,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[GroupRingElem]) -> Result<Vec<GroupRingElem>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(
                "vector length differs from column count".into(),
            ));
        }
        let mut out = vec![GroupRingElem::zero(self.rank); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() && !x.is_zero() {
                    *o = &*o + &a.try_mul(x)?;
                }
            }
        }
        Ok(out)
    }

    /// Entrywise image under [`GroupRingElem::specialize`].
    pub fn specialize(&self, var: usize) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.specialize(var))
            .collect::<Result<Vec<_>>>()?;
        Ok(RingMatrix {
            rank: 1,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Entrywise image under a ring map.
    pub fn map_entries<F>(&self, target_rank: usize, f: F) -> Result<Self>
    where
        F: Fn(&GroupRingElem) -> Result<GroupRingElem>,
    {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        if entries.iter().any(|e| e.rank() != target_rank) {
            return Err(Error::Dimension("entry map produced wrong rank".into()));
        }
        Ok(RingMatrix {
            rank: target_rank,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Determinant by cofactor expansion. Intended for the small matrices
    /// (n <= 8) this crate works with.
    pub fn determinant(&self) -> Result<GroupRingElem> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let idx: Vec<usize> = (0..self.cols).collect();
        Ok(self.minor_det(0, &idx))
    }

    fn minor_det(&self, row: usize, cols: &[usize]) -> GroupRingElem {
        if cols.is_empty() {
            return GroupRingElem::one(self.rank);
        }
        let mut total = GroupRingElem::zero(self.rank);
        for (pos, &c) in cols.iter().enumerate() {
            let a = self.get(row, c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let sub = a * &self.minor_det(row + 1, &rest);
            total = if pos % 2 == 0 {
                &total + &sub
            } else {
                &total - &sub
            };
        }
        total
    }

    /// Rank over the fraction field, bounded below by the rank at a rational point.
    ///
    /// Evaluation is a ring map to `Q`, so minors that vanish generically also
    /// vanish at the point; the rank at any point is therefore a lower bound for
    /// the generic rank, and equal to it away from a proper subvariety.
    pub fn rank_at(&self, point: &[Rational]) -> Result<usize> {
        let mut m: Vec<Vec<Rational>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).evaluate(point))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(rational_rank(&mut m))
    }
}

/// Rank of a rational matrix by Gaussian elimination (destroys the input).
pub(crate) fn rational_rank(m: &mut [Vec<Rational>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for k in c..cols {
                    let v = &m[rank][k] * &f;
                    m[r][k] = &m[r][k] - &v;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "RingMatrix {}x{} over Q[Z^{}]",
            self.rows, self.cols, self.rank
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
