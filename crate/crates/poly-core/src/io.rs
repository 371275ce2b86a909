//! JSON-lines serialization of polynomials, one term per line.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::coefficient::{Coefficient, LedgerEntry};
use crate::error::{PolyError, Result};
use crate::lattice::LatticeConfig;
use crate::mono::{MultiIndexPair, SparseExp};
use crate::polynomial::Polynomial;

fn sparse_json(v: &[(i32, u32)]) -> Value {
    Value::Array(v.iter().map(|&(j, e)| json!([j, e])).collect())
}

fn parse_sparse(v: &Value) -> Result<SparseExp> {
    let arr = v.as_array().ok_or_else(|| PolyError::Parse("expected exponent list".into()))?;
    arr.iter()
        .map(|p| {
            let j = p.get(0).and_then(Value::as_i64).ok_or_else(|| PolyError::Parse("bad mode".into()))?;
            let e = p.get(1).and_then(Value::as_u64).ok_or_else(|| PolyError::Parse("bad exponent".into()))?;
            Ok((j as i32, e as u32))
        })
        .collect()
}

/// One JSON object per term.
pub fn term_to_json(mi: &MultiIndexPair, c: &Coefficient) -> Value {
    let ledger = c.ledger.as_ref().map(|l| {
        Value::Array(
            l.iter()
                .map(|e| json!([sparse_json(&e.l0), sparse_json(&e.k0), e.i0, e.inner.re, e.inner.im]))
                .collect(),
        )
    });
    json!({
        "l": sparse_json(&mi.l_sparse()),
        "k": sparse_json(&mi.k_sparse()),
        "re": c.scalar.re,
        "im": c.scalar.im,
        "ledger": ledger,
        "tilde": c.tilde.map(|t| json!([t.re, t.im])),
    })
}

/// Serializes `f` in canonical key order, optionally preceded by a header line.
pub fn to_jsonl(f: &Polynomial, header: Option<&Value>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str(&json!({ "header": h }).to_string());
        out.push('\n');
    }
    for (mi, c) in f.terms() {
        out.push_str(&term_to_json(mi, c).to_string());
        out.push('\n');
    }
    out
}

fn num(v: &Value, key: &str) -> Result<f64> {
    v.get(key).and_then(Value::as_f64).ok_or_else(|| PolyError::Parse(format!("missing {key}")))
}

/// Parses the format written by [`to_jsonl`]. Header lines are skipped.
pub fn from_jsonl(lattice: LatticeConfig, text: &str) -> Result<Polynomial> {
    let mut p = Polynomial::zero(lattice);
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(line).map_err(|e| PolyError::Parse(format!("line {}: {e}", lineno + 1)))?;
        if v.get("header").is_some() {
            continue;
        }
        let l = parse_sparse(v.get("l").unwrap_or(&Value::Null))?;
        let k = parse_sparse(v.get("k").unwrap_or(&Value::Null))?;
        let mi = MultiIndexPair::new(&l, &k);
        let scalar = Complex64::new(num(&v, "re")?, num(&v, "im")?);
        let ledger = match v.get("ledger") {
            Some(Value::Array(entries)) => Some(
                entries
                    .iter()
                    .map(|e| {
                        let bad = || PolyError::Parse(format!("line {}: bad ledger entry", lineno + 1));
                        Ok(LedgerEntry {
                            l0: parse_sparse(e.get(0).ok_or_else(bad)?)?,
                            k0: parse_sparse(e.get(1).ok_or_else(bad)?)?,
                            i0: e.get(2).and_then(Value::as_i64).ok_or_else(bad)?,
                            inner: Complex64::new(
                                e.get(3).and_then(Value::as_f64).ok_or_else(bad)?,
                                e.get(4).and_then(Value::as_f64).ok_or_else(bad)?,
                            ),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            _ => None,
        };
        let tilde = match v.get("tilde") {
            Some(Value::Array(t)) if t.len() == 2 => {
                Some(Complex64::new(t[0].as_f64().unwrap_or(0.0), t[1].as_f64().unwrap_or(0.0)))
            }
            _ => None,
        };
        p.add_term(mi, Coefficient { scalar, ledger, tilde })?;
    }
    Ok(p)
}
