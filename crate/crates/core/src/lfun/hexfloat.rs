//! Exact text form of binary floats: `[-]0x<hex mantissa>p<exponent>`, value m * 2^e.

use rug::{Float, Integer};

use crate::error::{Error, Result};

pub fn format_hex(x: &Float) -> String {
    if x.is_zero() {
        return if x.is_sign_negative() { "-0x0p0".into() } else { "0x0p0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    let (mut m, mut e) = x.to_integer_exp().expect("finite");
    let tz = m.find_one(0).unwrap_or(0);
    m >>= tz;
    e += tz as i32;
    let sign = if m < 0 { "-" } else { "" };
    m.abs_mut();
    format!("{sign}0x{}p{e}", m.to_string_radix(16))
}

/// Parses the output of [`format_hex`] into a float with `prec` bits. Mantissas wider
/// than `prec` are rounded to nearest.
pub fn parse_hex(s: &str, prec: u32) -> Result<Float> {
    let bad = || Error::Parse(format!("not a hex float: {s:?}"));
    match s {
        "nan" => return Ok(Float::with_val(prec, rug::float::Special::Nan)),
        "inf" => return Ok(Float::with_val(prec, rug::float::Special::Infinity)),
        "-inf" => return Ok(Float::with_val(prec, rug::float::Special::NegInfinity)),
        _ => {}
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let body = body.strip_prefix("0x").ok_or_else(bad)?;
    let (mant, exp) = body.split_once('p').ok_or_else(bad)?;
    if mant.is_empty() || !mant.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
        return Err(bad());
    }
    let exp_digits = exp.strip_prefix('-').unwrap_or(exp);
    if exp_digits.is_empty() || !exp_digits.bytes().all(|b| b.is_ascii_digit()) || exp_digits.len() > 9 {
        return Err(bad());
    }
    if mant.len() > 1 << 16 {
        return Err(bad());
    }
    let m = Integer::from_str_radix(mant, 16).map_err(|_| bad())?;
    let e: i32 = exp.parse().map_err(|_| bad())?;
    let mut x = Float::with_val(prec, m);
    x <<= e;
    if neg {
        x = -x;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(format_hex(&Float::with_val(53, 1.5)), "0x3p-1");
        assert_eq!(format_hex(&Float::with_val(53, -0.25)), "-0x1p-2");
        assert_eq!(format_hex(&Float::with_val(53, 0)), "0x0p0");
        assert_eq!(parse_hex("0x3p-1", 53).unwrap(), 1.5);
        assert!(parse_hex("0x3q-1", 53).is_err());
        assert!(parse_hex("3p-1", 53).is_err());
        assert!(parse_hex("0xp1", 53).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(m in any::<i64>(), e in -2000i32..2000) {
            let mut x = Float::with_val(128, m);
            x <<= e;
            let s = format_hex(&x);
            prop_assert_eq!(parse_hex(&s, 128).unwrap(), x);
        }
    }
}
