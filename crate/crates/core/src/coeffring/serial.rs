//! The string form of field elements: `a/b` or `a/b+c/e*sqrt(d)`.

use std::fmt;
use std::str::FromStr;

use rug::Rational;

use super::{check_disc, QuadElement};
use crate::error::Error;

fn write_rational(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{}/{}", q.numer(), q.denom())
}

pub(super) fn write_element(e: &QuadElement, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write_rational(e.x(), f)?;
    if e.disc() != 0 {
        let y = e.y();
        f.write_str(if *y < 0 { "-" } else { "+" })?;
        write_rational(&Rational::from(y.abs_ref()), f)?;
        write!(f, "*sqrt({})", e.disc())?;
    }
    Ok(())
}

fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let valid = |part: &str, signed: bool| {
        let digits = if signed { part.strip_prefix('-').unwrap_or(part) } else { part };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    if !valid(num, true) || !den.is_none_or(|d| valid(d, false)) {
        return Err(bad());
    }
    let num: rug::Integer = num.parse().map_err(|_| bad())?;
    let den: rug::Integer = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => rug::Integer::from(1),
    };
    if den == 0 {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::from((num, den)))
}

impl FromStr for QuadElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let Some(idx) = s.find("*sqrt(") else {
            return parse_rational(s).map(QuadElement::rational);
        };
        let disc_str = s[idx + 6..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unterminated sqrt in {s:?}")))?;
        let disc: i64 = disc_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad discriminant in {s:?}")))?;
        check_disc(disc)?;
        let head = &s[..idx];
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (x, y) = match split {
            Some(i) => {
                let x = parse_rational(&head[..i])?;
                let mut y = parse_rational(&head[i + 1..])?;
                if head.as_bytes()[i] == b'-' {
                    y = -y;
                }
                (x, y)
            }
            None => (Rational::new(), parse_rational(head)?),
        };
        Ok(QuadElement::raw(disc, x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["3/1", "-7/2", "1/2+1/2*sqrt(5)", "0/1-3/4*sqrt(-3)", "-1/3+5/1*sqrt(17)"] {
            let e: QuadElement = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
    }

    #[test]
    fn lenient_inputs() {
        assert_eq!("5".parse::<QuadElement>().unwrap(), QuadElement::from_i64(5));
        assert_eq!("4/6".parse::<QuadElement>().unwrap().to_string(), "2/3");
        assert_eq!("2/1*sqrt(3)".parse::<QuadElement>().unwrap().to_string(), "0/1+2/1*sqrt(3)");
        assert_eq!("1/1+0/1*sqrt(5)".parse::<QuadElement>().unwrap().to_string(), "1/1");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a", "1/2+", "1/2*sqrt(4)", "1/2+1/2*sqrt(5", "--1", "1/-2", "+1", " 1"] {
            assert!(s.parse::<QuadElement>().is_err(), "{s:?}");
        }
    }
}
