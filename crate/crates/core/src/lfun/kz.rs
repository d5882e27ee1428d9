use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use super::numeric::{lvalue_embedded, LValueReport};
use crate::arith::is_fundamental_discriminant;
use crate::characters::KroneckerCharacter;
use crate::error::{Error, Result};
use crate::jacobi::inverse_shimura;
use crate::qseries::Newform;

fn check_disc(k: u32, disc: i64) -> Result<()> {
    if !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc));
    }
    let sign = if k.is_multiple_of(2) { -1 } else { 1 };
    if disc.signum() != sign {
        return Err(Error::InvalidArgument(format!("need (-1)^(k-1) D > 0, got D = {disc} at k = {k}")));
    }
    Ok(())
}

/// R(D) = c(|D|)^2 |D|^(3/2-k) / L(k-1, f, chi_D), with c the coefficients of the Jacobi
/// form attached to f (normalized by c(3) = 1).
///
/// The Kohnen-Zagier identity makes R(D) independent of D.
pub fn kohnen_zagier_ratio(f: &Newform, k: u32, disc: i64, bits: u32) -> Result<LValueReport> {
    if f.weight() != 2 * k - 2 {
        return Err(Error::WeightMismatch(f.weight(), 2 * k - 2));
    }
    check_disc(k, disc)?;
    let d = disc.unsigned_abs();
    let phi = inverse_shimura(f, d.max(3))?;
    let c = phi.c(d as i64).expect("within precision");
    if c.is_zero() {
        return Err(Error::ZeroCoefficient(disc));
    }
    let chi = KroneckerCharacter::new(disc)?;
    let l = lvalue_embedded(f, k - 1, &chi, bits + 16, false)?;
    if l.value.is_zero() || Float::with_val(64, l.value.abs_ref()) <= l.err {
        return Err(Error::InvalidArgument(format!("L({}, f, chi_{disc}) is not separated from zero", k - 1)));
    }
    let prec = l.value.prec();
    let c = c.to_float(prec, false);
    let dpow = Float::with_val(prec, d).pow(Float::with_val(prec, 1.5) - k);
    let value = Float::with_val(prec, c.square_ref()) * dpow / &l.value;
    let rel = Float::with_val(64, &l.err) / Float::with_val(64, l.value.abs_ref());
    let err = Float::with_val(64, value.abs_ref()) * (rel + (Float::with_val(64, 1u32) >> (bits as i32 + 8)));
    Ok(LValueReport {
        s: k - 1,
        chi: disc,
        bits,
        value: Float::with_val(bits + 8, value),
        err,
        terms: l.terms,
        method: "Kohnen-Zagier ratio c(|D|)^2 |D|^(3/2-k) / L(k-1, f, chi_D)".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KzConsistency {
    pub discs: (i64, i64),
    /// R(D) / R(D') as a decimal string.
    pub ratio: String,
    pub err: f64,
    pub holds: bool,
}

/// Checks R(D) / R(D') = 1 within the combined error bounds.
pub fn kz_consistency(f: &Newform, k: u32, disc: i64, disc2: i64, bits: u32) -> Result<KzConsistency> {
    let a = kohnen_zagier_ratio(f, k, disc, bits)?;
    let b = kohnen_zagier_ratio(f, k, disc2, bits)?;
    let prec = a.value.prec();
    let ratio = Float::with_val(prec, &a.value / &b.value);
    let rel = Float::with_val(64, &a.err) / Float::with_val(64, a.value.abs_ref()) + Float::with_val(64, &b.err) / Float::with_val(64, b.value.abs_ref());
    let err = rel.to_f64() * 1.01 + 2f64.powi(-(bits as i32));
    let dev = Float::with_val(prec, &ratio - 1u32).abs().to_f64();
    Ok(KzConsistency {
        discs: (disc, disc2),
        ratio: ratio.to_string_radix(10, Some(30)),
        err,
        holds: dev <= err,
    })
}
