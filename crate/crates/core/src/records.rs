//! JSON records for expansions and numeric reports.
//!
//! Field elements travel as exact strings, floats as hex floats; keys and coefficient
//! lists are emitted in a fixed order so equal objects give byte-identical text.

use std::collections::BTreeMap;

use rug::Float;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coeffring::QuadElement;
use crate::error::{Error, Result};
use crate::jacobi::{JacobiForm, PlusForm};
use crate::lfun::{format_hex, parse_hex, LValueReport};
use crate::qseries::QExpansion;
use crate::siegel::{SiegelForm, Triple};

/// Upper limit on coefficient lists accepted from text.
pub const MAX_TERMS: usize = 1 << 20;
/// Upper limit on the box precision of a Siegel record.
pub const MAX_SIEGEL_PREC: u64 = 64;
/// Upper limit on the precision of hex floats read back from an L-value record.
const MAX_BITS: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub enum Record {
    Qexp(QExpansion),
    Jacobi(JacobiForm),
    Plus(PlusForm),
    Siegel(SiegelForm),
    LValue(LValueRecord),
}

/// The serializable part of an [`LValueReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct LValueRecord {
    pub s: u32,
    pub chi: i64,
    pub bits: u32,
    pub value: Float,
    pub err: Float,
}

impl From<&LValueReport> for LValueRecord {
    fn from(r: &LValueReport) -> Self {
        Self { s: r.s, chi: r.chi, bits: r.bits, value: r.value.clone(), err: r.err.clone() }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ring {
    disc: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Raw {
    Qexp { weight: u32, prec: u64, ring: Ring, coeffs: Vec<String> },
    Jacobi { weight: u32, index: u32, prec: u64, coeffs: Vec<(u64, String)> },
    Plus { weight: String, prec: u64, coeffs: Vec<(u64, String)> },
    Siegel { weight: u32, prec: u64, ring: Ring, coeffs: Vec<(i64, i64, i64, String)> },
    Lvalue { s: u32, chi: i64, bits: u32, value: String, err: String, decimal: String },
}

fn element(s: &str, disc: i64) -> Result<QuadElement> {
    let e: QuadElement = s.parse()?;
    if e.disc() != 0 && e.disc() != disc {
        return Err(Error::FieldMismatch { element: e.disc(), expected: disc });
    }
    Ok(e)
}

fn check_len(len: usize) -> Result<()> {
    if len > MAX_TERMS {
        return Err(Error::Parse(format!("{len} coefficients exceed the limit {MAX_TERMS}")));
    }
    Ok(())
}

/// Dense coefficients 0..=prec from (index, value) pairs listed in increasing order.
fn dense(prec: u64, pairs: Vec<(u64, String)>) -> Result<Vec<QuadElement>> {
    check_len(pairs.len())?;
    if prec as usize >= MAX_TERMS {
        return Err(Error::Parse(format!("precision {prec} exceeds the limit")));
    }
    let mut out = vec![QuadElement::zero(); prec as usize + 1];
    let mut last = None;
    for (d, s) in pairs {
        if d > prec || last.is_some_and(|l| d <= l) {
            return Err(Error::Parse(format!("index {d} out of order or beyond precision {prec}")));
        }
        last = Some(d);
        out[d as usize] = s.parse()?;
    }
    Ok(out)
}

/// Nonzero entries only, as (index, value).
fn sparse(coeffs: &[QuadElement]) -> Vec<(u64, String)> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as u64, c.to_string()))
        .collect()
}

fn parse_half_weight(s: &str) -> Result<u32> {
    let bad = || Error::Parse(format!("bad half-integral weight {s:?}"));
    let num = s.strip_suffix("/2").ok_or_else(bad)?;
    if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) || num.len() > 9 {
        return Err(bad());
    }
    let num: u32 = num.parse().map_err(|_| bad())?;
    if num.is_multiple_of(2) {
        return Err(bad());
    }
    Ok(num.div_ceil(2))
}

fn decimal(x: &Float) -> String {
    if x.is_finite() {
        x.to_string_radix(10, Some(((x.prec() as f64) * std::f64::consts::LOG10_2) as usize + 1))
    } else {
        x.to_string()
    }
}

impl Record {
    fn to_raw(&self) -> Raw {
        match self {
            Record::Qexp(f) => Raw::Qexp {
                weight: f.weight(),
                prec: f.prec() as u64,
                ring: Ring { disc: f.disc() },
                coeffs: f.coeffs().iter().map(ToString::to_string).collect(),
            },
            Record::Jacobi(f) => {
                Raw::Jacobi { weight: f.weight(), index: 1, prec: f.prec(), coeffs: sparse(f.coeffs()) }
            }
            Record::Plus(g) => Raw::Plus {
                weight: format!("{}/2", g.weight_numerator()),
                prec: g.prec(),
                coeffs: sparse(g.coeffs()),
            },
            Record::Siegel(f) => Raw::Siegel {
                weight: f.weight(),
                prec: f.prec(),
                ring: Ring { disc: f.disc() },
                coeffs: f.coeffs().iter().map(|(t, c)| (t.n, t.r, t.m, c.to_string())).collect(),
            },
            Record::LValue(l) => Raw::Lvalue {
                s: l.s,
                chi: l.chi,
                bits: l.bits,
                value: format_hex(&l.value),
                err: format_hex(&l.err),
                decimal: decimal(&l.value),
            },
        }
    }

    fn from_raw(raw: Raw) -> Result<Self> {
        match raw {
            Raw::Qexp { weight, prec, ring, coeffs } => {
                check_len(coeffs.len())?;
                if coeffs.len() as u64 != prec + 1 {
                    return Err(Error::Parse(format!("{} coefficients for precision {prec}", coeffs.len())));
                }
                let coeffs = coeffs.iter().map(|s| element(s, ring.disc)).collect::<Result<Vec<_>>>()?;
                Ok(Record::Qexp(QExpansion::new(weight, coeffs)))
            }
            Raw::Jacobi { weight, index, prec, coeffs } => {
                if index != 1 {
                    return Err(Error::Parse(format!("index {index} is not supported")));
                }
                Ok(Record::Jacobi(JacobiForm::new(weight, dense(prec, coeffs)?)?))
            }
            Raw::Plus { weight, prec, coeffs } => {
                Ok(Record::Plus(PlusForm::new(parse_half_weight(&weight)?, dense(prec, coeffs)?)?))
            }
            Raw::Siegel { weight, prec, ring, coeffs } => {
                check_len(coeffs.len())?;
                if prec > MAX_SIEGEL_PREC {
                    return Err(Error::Parse(format!("box precision {prec} exceeds {MAX_SIEGEL_PREC}")));
                }
                let mut map = BTreeMap::new();
                for (n, r, m, s) in coeffs {
                    let t = Triple::new(n, r, m);
                    // Reduced representatives of a box-P form have m <= P^2 + 1.
                    if !(0..=(prec * prec + 1) as i64).contains(&m) {
                        return Err(Error::Parse(format!("triple {t} lies outside box {prec}")));
                    }
                    if map.insert(t, element(&s, ring.disc)?).is_some() {
                        return Err(Error::Parse(format!("duplicate triple {t}")));
                    }
                }
                Ok(Record::Siegel(SiegelForm::new(weight, prec, map)?))
            }
            Raw::Lvalue { s, chi, bits, value, err, decimal: _ } => {
                if bits == 0 || bits > MAX_BITS {
                    return Err(Error::Parse(format!("bits {bits} out of range")));
                }
                let value = parse_hex(&value, bits + 8)?;
                let err = parse_hex(&err, 64)?;
                Ok(Record::LValue(LValueRecord { s, chi, bits, value, err }))
            }
        }
    }

    /// Deterministic JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("records serialize")
    }

    /// Decimal rendering of the value for numeric records.
    pub fn decimal(&self) -> Option<String> {
        match self {
            Record::LValue(l) => Some(decimal(&l.value)),
            _ => None,
        }
    }
}

/// Parses one record, validating it into the typed form.
pub fn parse_record(text: &str) -> Result<Record> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let raw: Raw = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    Record::from_raw(raw)
}

/// A CSV table of Siegel coefficients with columns n,r,m,value.
pub fn siegel_csv(f: &SiegelForm) -> String {
    let mut out = String::from("n,r,m,value\n");
    for (t, c) in f.coeffs() {
        out.push_str(&format!("{},{},{},{}\n", t.n, t.r, t.m, c));
    }
    out
}
