//! JSON encoding shared by every module and the CLI.
//!
//! * rationals: strings `"p/q"`, or `"p"` when `q = 1`
//! * monomials: integer arrays
//! * elements: arrays of `[monomial, coefficient]` pairs sorted
//!   lexicographically by exponent vector
//! * matrices: row-major nested arrays of elements
//!
//! The zero element encodes as `[]`, so decoding takes the ring rank from context.

use serde_json::{json, Value};

use crate::error::{Error, Result};

use super::{GroupRingElem, Monomial, Rational, RingMatrix};

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap())),
        _ => Err(Error::Parse(format!("expected rational string, got {v}"))),
    }
}

pub fn monomial_to_json(m: &Monomial) -> Value {
    json!(m.exponents())
}

pub fn monomial_from_json(v: &Value, rank: usize) -> Result<Monomial> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected exponent array, got {v}")))?;
    let exps = arr
        .iter()
        .map(|x| {
            x.as_i64()
                .ok_or_else(|| Error::Parse(format!("bad exponent {x}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if exps.len() != rank {
        return Err(Error::Dimension(format!(
            "exponent vector of length {} where rank {rank} was expected",
            exps.len()
        )));
    }
    Ok(Monomial::new(exps))
}

/// Terms come out of the `BTreeMap` in lexicographic order already.
pub fn elem_to_json(a: &GroupRingElem) -> Value {
    Value::Array(
        a.terms()
            .map(|(m, q)| json!([monomial_to_json(m), rational_to_json(q)]))
            .collect(),
    )
}

pub fn elem_from_json(v: &Value, rank: usize) -> Result<GroupRingElem> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected term array, got {v}")))?;
    let terms = arr
        .iter()
        .map(|pair| match pair.as_array().map(Vec::as_slice) {
            Some([m, q]) => Ok((monomial_from_json(m, rank)?, rational_from_json(q)?)),
            _ => Err(Error::Parse(format!(
                "expected [monomial, coefficient], got {pair}"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    GroupRingElem::from_terms(rank, terms)
}

pub fn matrix_to_json(m: &RingMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(elem_to_json).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value, rank: usize) -> Result<RingMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected nested arrays, got {v}")))?;
    let grid = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix row is not an array".into()))?
                .iter()
                .map(|e| elem_from_json(e, rank))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RingMatrix::from_rows(rank, grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_encoding_is_sorted_and_exact() {
        let a = GroupRingElem::from_terms(
            2,
            vec![
                (Monomial::new(vec![1, 0]), Rational::new(1, 2).unwrap()),
                (Monomial::new(vec![-1, 3]), Rational::from_integer(-4)),
            ],
        )
        .unwrap();
        assert_eq!(
            elem_to_json(&a).to_string(),
            r#"[[[-1,3],"-4"],[[1,0],"1/2"]]"#
        );
        assert_eq!(elem_from_json(&elem_to_json(&a), 2).unwrap(), a);
    }

    #[test]
    fn zero_and_matrix() {
        assert_eq!(elem_to_json(&GroupRingElem::zero(3)).to_string(), "[]");
        let m = RingMatrix::identity(1, 2);
        let s = matrix_to_json(&m).to_string();
        assert_eq!(s, r#"[[[[[0],"1"]],[]],[[],[[[0],"1"]]]]"#);
        assert_eq!(
            matrix_from_json(&serde_json::from_str(&s).unwrap(), 1).unwrap(),
            m
        );
    }

    #[test]
    fn rank_mismatch_rejected() {
        let v: Value = serde_json::from_str(r#"[[[1,2],"3"]]"#).unwrap();
        assert!(matches!(elem_from_json(&v, 1), Err(Error::Dimension(_))));
    }
}
