use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};
use serde::Serialize;

use super::hexfloat::format_hex;
use super::numeric::{lvalue_embedded, petersson_embedded, required_terms};
use crate::arith::is_fundamental_discriminant;
use crate::characters::{dirichlet_l_neg_removing, KroneckerCharacter};
use crate::coeffring::{ord, rational_reconstruct, split_prime, PrimeIdeal, QuadElement, Valuation};
use crate::error::{Error, Result};
use crate::qseries::Newform;

/// Window of powers of pi tried when normalizing the period-free combination.
const PI_WINDOW: std::ops::RangeInclusive<i32> = -6..=6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealValuation {
    pub ideal: PrimeIdeal,
    /// `None` for the zero value.
    pub ord: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScriptLReport {
    pub weight: u32,
    pub disc: i64,
    pub chi: i64,
    pub bits: u32,
    /// The power of pi multiplying the numerical combination before reconstruction.
    pub pi_exponent: Option<i32>,
    /// The reconstructed value in the Hecke field.
    pub value: Option<String>,
    /// The raw combination (one entry per real embedding) as hex floats.
    pub raw: Vec<String>,
    pub valuations: Vec<IdealValuation>,
    /// Primes of the requested range excluded by the hypotheses (p | 2ND or p <= 2k - 2).
    pub excluded: Vec<u64>,
    pub confidence: String,
}

struct Combination {
    value: Float,
    err: Float,
}

/// The numerical part L^S(3-k, chi) L(k-1, f, chi_D) L(1, f, chi) L(2, f, chi)
/// / (L(k, f) <f, f> 4 sqrt|D| N) for one real embedding.
///
/// Dividing the L_alg normalizations out leaves tau(chi_D) tau(chi)^2 (2 pi i)^2
/// = -4 i pi^2 sqrt|D| N; the factor -i is dropped and pi^2 is left to the scan.
fn combination(k: u32, f: &Newform, disc: i64, chi: &KroneckerCharacter, bits: u32, conjugate: bool) -> Result<Combination> {
    let chi_d = KroneckerCharacter::new(disc)?;
    let triv = KroneckerCharacter::trivial();
    let lbits = bits + 32;
    let l1 = lvalue_embedded(f, k - 1, &chi_d, lbits, conjugate)?;
    let l2 = lvalue_embedded(f, 1, chi, lbits, conjugate)?;
    let l3 = lvalue_embedded(f, 2, chi, lbits, conjugate)?;
    let l4 = lvalue_embedded(f, k, &triv, lbits, conjugate)?;
    let pet = petersson_embedded(f, lbits, conjugate)?;
    let dirichlet = dirichlet_l_neg_removing(k - 3, chi, &chi.bad_primes());
    let prec = lbits + 64;
    let mut value = Float::with_val(prec, &dirichlet);
    let mut rel = Float::with_val(64, 0);
    for (r, invert) in [(&l1, false), (&l2, false), (&l3, false), (&l4, true), (&pet, true)] {
        if Float::with_val(64, r.value.abs_ref()) <= r.err {
            return Err(Error::InvalidArgument(format!("L-value at s = {} is not separated from zero", r.s)));
        }
        rel += Float::with_val(64, &r.err) / Float::with_val(64, r.value.abs_ref());
        if invert {
            value /= &r.value;
        } else {
            value *= &r.value;
        }
    }
    let d = Float::with_val(prec, disc.unsigned_abs()).sqrt();
    value /= d * 4u32 * chi.conductor();
    let err = Float::with_val(64, value.abs_ref()) * (rel * 1.01f64 + (Float::with_val(64, 1u32) >> (lbits as i32)));
    Ok(Combination { value, err })
}

fn check_inputs(k: u32, f: &Newform, disc: i64, chi: &KroneckerCharacter) -> Result<()> {
    if f.weight() != 2 * k - 2 {
        return Err(Error::WeightMismatch(f.weight(), 2 * k - 2));
    }
    if k % 2 == 1 {
        return Err(Error::InvalidWeight { weight: k.into(), reason: "the lift needs even k" });
    }
    if !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc));
    }
    let chi_d = KroneckerCharacter::new(disc)?;
    if chi_d.parity() != -1 {
        return Err(Error::InvalidArgument(format!("chi_{disc} must be odd")));
    }
    if chi.conductor() <= 1 || !chi.is_primitive() {
        return Err(Error::InvalidArgument("chi must be primitive of conductor > 1".into()));
    }
    let want = if k.is_multiple_of(2) { 1 } else { -1 };
    if chi.parity() != want {
        return Err(Error::InvalidArgument(format!("chi(-1) must be (-1)^k = {want}")));
    }
    Ok(())
}

/// Largest denominator that still leaves reconstruction within `tol` unambiguous with
/// a 2^-16 margin: 2 * tol * B^2 <= 2^-16.
fn den_bound(tol: &Float) -> Integer {
    let b = (Float::with_val(64, 1u32) >> 17i32) / Float::with_val(64, tol);
    let b = b.sqrt().floor();
    b.to_integer().unwrap_or_default().max(Integer::from(1))
}

/// Reconstructs x = u + v sqrt(d) from its two real embeddings (or a rational from one).
fn reconstruct(values: &[Combination], disc: i64, scale: &Float) -> Option<QuadElement> {
    let prec = values[0].value.prec();
    if disc == 0 {
        let x = Float::with_val(prec, &values[0].value * scale);
        let tol = Float::with_val(64, &values[0].err * scale) * 4u32;
        return rational_reconstruct(&x, &den_bound(&tol), &tol).map(QuadElement::rational);
    }
    let x1 = Float::with_val(prec, &values[0].value * scale);
    let x2 = Float::with_val(prec, &values[1].value * scale);
    let tol = Float::with_val(64, &values[0].err + &values[1].err) * Float::with_val(64, scale) * 4u32;
    let sqrt_d = Float::with_val(prec, disc).sqrt();
    let u = Float::with_val(prec, &x1 + &x2) / 2u32;
    let v = Float::with_val(prec, &x1 - &x2) / (sqrt_d * 2u32);
    let u = rational_reconstruct(&u, &den_bound(&tol), &tol)?;
    let v = rational_reconstruct(&v, &den_bound(&tol), &tol)?;
    QuadElement::new(disc, u, v).ok()
}

/// The scan over powers of pi at one precision: all exponents that reconstruct.
fn scan(values: &[Combination], disc: i64) -> Vec<(i32, QuadElement)> {
    let prec = values[0].value.prec();
    let pi = Float::with_val(prec, Constant::Pi);
    PI_WINDOW
        .filter_map(|e| {
            let scale = Float::with_val(prec, pi.clone().pow(e));
            reconstruct(values, disc, &scale).map(|v| (e, v))
        })
        .collect()
}

fn embeddings(k: u32, f: &Newform, disc: i64, chi: &KroneckerCharacter, bits: u32) -> Result<Vec<Combination>> {
    let mut out = vec![combination(k, f, disc, chi, bits, false)?];
    if f.disc() != 0 {
        out.push(combination(k, f, disc, chi, bits, true)?);
    }
    Ok(out)
}

/// Coefficients needed by [`script_l_valuation`] at `bits`.
pub fn script_l_terms(k: u32, disc: i64, chi: &KroneckerCharacter, bits: u32) -> Result<usize> {
    let chi_d = KroneckerCharacter::new(disc)?;
    let w = 2 * k - 2;
    let b = 2 * bits + 32;
    Ok([
        required_terms(w, k - 1, &chi_d, b),
        required_terms(w, 1, chi, b),
        required_terms(w, 2, chi, b),
        required_terms(w, k, &KroneckerCharacter::trivial(), b),
    ]
    .into_iter()
    .max()
    .unwrap_or(0))
}

/// ord of the period-free value of script-L(k, f, D, chi) at the primes of the Hecke field
/// above each p in `primes`.
///
/// The combination is computed at `bits` and at `2 * bits`; a power of pi in a fixed window
/// is accepted when rational reconstruction succeeds at both precisions with the same
/// value, and only a unique such exponent yields a valuation claim.
pub fn script_l_valuation(
    k: u32,
    f: &Newform,
    disc: i64,
    chi: &KroneckerCharacter,
    primes: &[u64],
    bits: u32,
) -> Result<ScriptLReport> {
    check_inputs(k, f, disc, chi)?;
    let low = embeddings(k, f, disc, chi, bits)?;
    let high = embeddings(k, f, disc, chi, 2 * bits)?;
    let a = scan(&low, f.disc());
    let b = scan(&high, f.disc());
    let stable: Vec<(i32, QuadElement)> = a.into_iter().filter(|x| b.contains(x)).collect();
    let raw = low.iter().map(|c| format_hex(&c.value)).collect();
    let n = chi.conductor();
    let (excluded, kept): (Vec<u64>, Vec<u64>) = primes
        .iter()
        .partition(|&&p| p <= 2 * k as u64 - 2 || p == 2 || n.is_multiple_of(p) || disc.unsigned_abs().is_multiple_of(p));
    let mut report = ScriptLReport {
        weight: k,
        disc,
        chi: chi.disc(),
        bits,
        pi_exponent: None,
        value: None,
        raw,
        valuations: Vec::new(),
        excluded,
        confidence: String::new(),
    };
    match stable.as_slice() {
        [(e, v)] => {
            let conj_ok = consistent(&high, v, *e);
            if !conj_ok {
                report.confidence = "reconstruction disagrees with an embedding; no valuation claimed".into();
                return Ok(report);
            }
            for p in kept {
                for ideal in split_prime(p, f.disc())? {
                    let o = match ord(v, &ideal)? {
                        Valuation::Finite(o) => Some(o),
                        Valuation::Infinite => None,
                    };
                    report.valuations.push(IdealValuation { ideal, ord: o });
                }
            }
            report.pi_exponent = Some(*e);
            report.value = Some(v.to_string());
            report.confidence = format!("reconstructed identically at {} and {} bits", bits, 2 * bits);
        }
        [] => report.confidence = "no power of pi reconstructs stably; no valuation claimed".into(),
        _ => report.confidence = "several powers of pi reconstruct; no valuation claimed".into(),
    }
    Ok(report)
}

/// Each embedding of the reconstructed value matches the corresponding pipeline.
fn consistent(values: &[Combination], v: &QuadElement, e: i32) -> bool {
    values.iter().enumerate().all(|(i, c)| {
        let prec = c.value.prec();
        let x = Float::with_val(prec, &c.value * Float::with_val(prec, Constant::Pi).pow(e));
        let tol = Float::with_val(64, &c.err * Float::with_val(64, Constant::Pi).pow(e)) * 4u32;
        let y = v.to_float(prec, i == 1);
        Float::with_val(prec, &x - &y).abs() <= tol
    })
}
