//! Smith normal form over the Euclidean ring `Q[t, t^-1]`.
//!
//! The Euclidean degree is the Newton span (max exponent minus min exponent).
//! Division with remainder shifts both operands to honest polynomials by the
//! unit `t^k`, divides there, and shifts back; the remainder has span strictly
//! below the divisor's.

use log::trace;

use crate::error::{Error, Result};

use super::{GroupRingElem, Monomial, Rational, RingMatrix};

/// Newton span of a univariate element, `None` for zero.
pub fn span(a: &GroupRingElem) -> Option<i64> {
    let (lo, hi) = a.exponent_box()?;
    Some(hi[0] - lo[0])
}

fn to_poly(a: &GroupRingElem, lo: i64) -> Vec<Rational> {
    let (_, hi) = a.exponent_box().expect("nonzero");
    let mut out = vec![Rational::zero(); (hi[0] - lo + 1) as usize];
    for (m, q) in a.terms() {
        out[(m.exponents()[0] - lo) as usize] = q.clone();
    }
    out
}

fn from_poly(coeffs: &[Rational], lo: i64) -> GroupRingElem {
    GroupRingElem::from_terms(
        1,
        coeffs
            .iter()
            .enumerate()
            .map(|(i, q)| (Monomial::new(vec![lo + i as i64]), q.clone())),
    )
    .expect("rank 1")
}

/// Euclidean division in `Q[t, t^-1]`: returns `(q, r)` with `a = q b + r` and
/// `r = 0` or `span(r) < span(b)`.
pub fn laurent_divrem(
    a: &GroupRingElem,
    b: &GroupRingElem,
) -> Result<(GroupRingElem, GroupRingElem)> {
    if a.rank() != 1 || b.rank() != 1 {
        return Err(Error::Unsupported(
            "Euclidean division needs a rank-1 ring".into(),
        ));
    }
    if b.is_zero() {
        return Err(Error::Domain("division by zero".into()));
    }
    if a.is_zero() {
        return Ok((GroupRingElem::zero(1), GroupRingElem::zero(1)));
    }
    let lo_a = a.exponent_box().unwrap().0[0];
    let lo_b = b.exponent_box().unwrap().0[0];
    let mut rem = to_poly(a, lo_a);
    let div = to_poly(b, lo_b);
    let db = div.len() - 1;
    let lead = div[db].clone();
    let mut quot = vec![Rational::zero(); rem.len().saturating_sub(db).max(1)];
    while rem.len() > db {
        let top = rem.len() - 1;
        let c = &rem[top] / &lead;
        if !c.is_zero() {
            let shift = top - db;
            for (i, d) in div.iter().enumerate() {
                let v = d * &c;
                rem[shift + i] = &rem[shift + i] - &v;
            }
            quot[shift] = c;
        }
        rem.pop();
    }
    Ok((from_poly(&quot, lo_a - lo_b), from_poly(&rem, lo_a)))
}

/// Exact divisibility `b | a` in `Q[t, t^-1]`; zero divides only zero.
pub fn laurent_divides(b: &GroupRingElem, a: &GroupRingElem) -> Result<bool> {
    if b.is_zero() {
        return Ok(a.is_zero());
    }
    Ok(laurent_divrem(a, b)?.1.is_zero())
}

/// Unit `u` such that `u * a` has lowest exponent 0 and constant term 1.
pub fn normalizing_unit(a: &GroupRingElem) -> Option<GroupRingElem> {
    let (m, q) = a.trailing_term()?;
    Some(GroupRingElem::term(m.inverse(), q.recip()?))
}

/// Normalized associate of `a` (lowest exponent 0, constant term 1); zero stays zero.
pub fn normalize(a: &GroupRingElem) -> GroupRingElem {
    match normalizing_unit(a) {
        Some(u) => &u * a,
        None => a.clone(),
    }
}

/// Result of [`snf_univariate`]: `u * m * v = d` with `u`, `v` invertible and
/// their inverses tracked alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub u: RingMatrix,
    pub u_inv: RingMatrix,
    pub d: RingMatrix,
    pub v: RingMatrix,
    pub v_inv: RingMatrix,
}

impl Snf {
    /// Diagonal entries `d_0, ..., d_{min(rows, cols) - 1}`.
    pub fn diagonal(&self) -> Vec<GroupRingElem> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: Vec<Vec<GroupRingElem>>,
    u: Vec<Vec<GroupRingElem>>,
    u_inv: Vec<Vec<GroupRingElem>>,
    v: Vec<Vec<GroupRingElem>>,
    v_inv: Vec<Vec<GroupRingElem>>,
}

fn identity_grid(n: usize) -> Vec<Vec<GroupRingElem>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        GroupRingElem::one(1)
                    } else {
                        GroupRingElem::zero(1)
                    }
                })
                .collect()
        })
        .collect()
}

fn grid_to_matrix(g: Vec<Vec<GroupRingElem>>, cols: usize) -> RingMatrix {
    if g.is_empty() {
        return RingMatrix::zeros(1, 0, cols);
    }
    RingMatrix::from_rows(1, g).expect("rectangular grid")
}

fn axpy(dst: &mut [GroupRingElem], src: &[GroupRingElem], c: &GroupRingElem) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = &*d + &(c * s);
        }
    }
}

impl Work {
    fn rows(&self) -> usize {
        self.a.len()
    }

    fn cols(&self) -> usize {
        self.v.len()
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &GroupRingElem) {
        let src = self.a[j].clone();
        axpy(&mut self.a[i], &src, c);
        let src = self.u[j].clone();
        axpy(&mut self.u[i], &src, c);
        // u_inv <- u_inv * E^-1: col_j -= c col_i
        let neg = -c;
        for row in self.u_inv.iter_mut() {
            let add = &row[i] * &neg;
            row[j] = &row[j] + &add;
        }
    }

    /// col_j += c * col_i
    fn add_col(&mut self, j: usize, i: usize, c: &GroupRingElem) {
        for row in self.a.iter_mut() {
            let add = &row[i] * c;
            row[j] = &row[j] + &add;
        }
        for row in self.v.iter_mut() {
            let add = &row[i] * c;
            row[j] = &row[j] + &add;
        }
        // v_inv <- E^-1 * v_inv: row_i -= c row_j
        let src = self.v_inv[j].clone();
        axpy(&mut self.v_inv[i], &src, &-c);
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// row_i *= w for a unit w.
    fn scale_row(&mut self, i: usize, w: &GroupRingElem) {
        let w_inv = w.is_unit().expect("unit");
        for x in self.a[i].iter_mut() {
            *x = &*x * w;
        }
        for x in self.u[i].iter_mut() {
            *x = &*x * w;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = &row[i] * &w_inv;
        }
    }

    /// Nonzero entry of the trailing block with minimal span, ties broken by
    /// position in row-major order.
    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..self.rows() {
            for j in k..self.cols() {
                if let Some(s) = span(&self.a[i][j]) {
                    if best.is_none_or(|(bs, _, _)| s < bs) {
                        best = Some((s, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn run(&mut self) -> Result<()> {
        let n = self.rows().min(self.cols());
        for k in 0..n {
            loop {
                let Some((pi, pj)) = self.find_pivot(k) else {
                    return Ok(());
                };
                self.swap_rows(k, pi);
                self.swap_cols(k, pj);
                let pivot = self.a[k][k].clone();
                trace!("snf step {k}: pivot {pivot}");

                for i in k + 1..self.rows() {
                    if !self.a[i][k].is_zero() {
                        let (q, _) = laurent_divrem(&self.a[i][k], &pivot)?;
                        self.add_row(i, k, &-&q);
                    }
                }
                for j in k + 1..self.cols() {
                    if !self.a[k][j].is_zero() {
                        let (q, _) = laurent_divrem(&self.a[k][j], &pivot)?;
                        self.add_col(j, k, &-&q);
                    }
                }
                let dirty = (k + 1..self.rows()).any(|i| !self.a[i][k].is_zero())
                    || (k + 1..self.cols()).any(|j| !self.a[k][j].is_zero());
                if dirty {
                    continue;
                }

                // Divisibility chain: fold an offending row into the pivot row so
                // the next pass produces a remainder of smaller span.
                let mut offending = None;
                'search: for i in k + 1..self.rows() {
                    for j in k + 1..self.cols() {
                        if !laurent_divides(&pivot, &self.a[i][j])? {
                            offending = Some(i);
                            break 'search;
                        }
                    }
                }
                match offending {
                    Some(i) => self.add_row(k, i, &GroupRingElem::one(1)),
                    None => break,
                }
            }
        }
        Ok(())
    }

    fn normalize_diagonal(&mut self) {
        let n = self.rows().min(self.cols());
        for k in 0..n {
            if let Some(w) = normalizing_unit(&self.a[k][k]) {
                if !w.is_one() {
                    self.scale_row(k, &w);
                }
            }
        }
    }
}

/// Smith normal form of a matrix over `Q[t, t^-1]` (ring rank 1).
///
/// Returns `u, v` invertible with `u * m * v = d`, `d` diagonal with
/// `d_i | d_{i+1}`, nonzero factors first and each normalized to lowest
/// exponent 0 with constant term 1.
pub fn snf_univariate(m: &RingMatrix) -> Result<Snf> {
    if m.rank() != 1 {
        return Err(Error::Unsupported(format!(
            "Smith normal form needs a rank-1 Laurent ring, got rank {}",
            m.rank()
        )));
    }
    let (rows, cols) = m.shape();
    let mut w = Work {
        a: (0..rows).map(|i| m.row(i).to_vec()).collect(),
        u: identity_grid(rows),
        u_inv: identity_grid(rows),
        v: identity_grid(cols),
        v_inv: identity_grid(cols),
    };
    w.run()?;
    w.normalize_diagonal();
    Ok(Snf {
        u: grid_to_matrix(w.u, rows),
        u_inv: grid_to_matrix(w.u_inv, rows),
        d: grid_to_matrix(w.a, cols),
        v: grid_to_matrix(w.v, cols),
        v_inv: grid_to_matrix(w.v_inv, cols),
    })
}
