use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::{check_disc, QuadElement};
use crate::arith::{is_prime, kronecker, sqrt_mod};
use crate::error::{Error, Result};

/// A valuation: an integer, or `Infinite` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialEq<i64> for Valuation {
    fn eq(&self, other: &i64) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<i64> for Valuation {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// How a rational prime behaves in the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "type")]
pub enum IdealKind {
    /// The prime of Z itself.
    Rational,
    /// One of the two primes `(p, omega - root)` above a split `p`.
    Split { root: u64 },
    Inert,
    Ramified,
}

/// A prime ideal of Q or of the maximal order of `Q(sqrt(disc))`.
///
/// The order is `Z[omega]` with `omega = (1 + sqrt(disc))/2` when `disc = 1 mod 4`
/// and `omega = sqrt(disc)` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub disc: i64,
    pub kind: IdealKind,
}

impl PrimeIdeal {
    pub fn rational(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p, disc: 0, kind: IdealKind::Rational })
    }

    /// Size of the residue field.
    pub fn residue_size(&self) -> u64 {
        match self.kind {
            IdealKind::Inert => self.p * self.p,
            _ => self.p,
        }
    }

    pub fn residue_degree(&self) -> u32 {
        if self.kind == IdealKind::Inert {
            2
        } else {
            1
        }
    }

    pub fn ramification(&self) -> u32 {
        if self.kind == IdealKind::Ramified {
            2
        } else {
            1
        }
    }

    /// The Galois-conjugate ideal.
    pub fn conjugate(&self) -> Self {
        match self.kind {
            IdealKind::Split { root } => {
                let p = self.p;
                let trace = if self.disc.rem_euclid(4) == 1 { 1 } else { 0 };
                let other = (trace + p - root % p) % p;
                Self { kind: IdealKind::Split { root: other }, ..*self }
            }
            _ => *self,
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            IdealKind::Rational => write!(f, "({})", self.p),
            IdealKind::Inert => write!(f, "({}) in Q(sqrt({}))", self.p, self.disc),
            IdealKind::Ramified => write!(f, "({}, sqrt({}))^[ramified]", self.p, self.disc),
            IdealKind::Split { root } => {
                if self.disc.rem_euclid(4) == 1 {
                    write!(f, "({}, (1+sqrt({}))/2 - {})", self.p, self.disc, root)
                } else {
                    write!(f, "({}, sqrt({}) - {})", self.p, self.disc, root)
                }
            }
        }
    }
}

/// The primes above `p` in `Q(sqrt(disc))`, or `[(p)]` when `disc == 0`.
pub fn split_prime(p: u64, disc: i64) -> Result<Vec<PrimeIdeal>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if disc == 0 {
        return Ok(vec![PrimeIdeal { p, disc, kind: IdealKind::Rational }]);
    }
    check_disc(disc)?;
    let one_mod_four = disc.rem_euclid(4) == 1;
    let field_disc = if one_mod_four { disc } else { 4 * disc };
    let ideal = |kind| PrimeIdeal { p, disc, kind };
    match kronecker(field_disc, p as i64) {
        0 => Ok(vec![ideal(IdealKind::Ramified)]),
        -1 => Ok(vec![ideal(IdealKind::Inert)]),
        _ => {
            let roots = omega_roots(p, disc);
            Ok(roots.into_iter().map(|root| ideal(IdealKind::Split { root })).collect())
        }
    }
}

/// Both roots of the minimal polynomial of omega modulo a split prime `p`.
fn omega_roots(p: u64, disc: i64) -> [u64; 2] {
    let d = disc.rem_euclid(p as i64) as u64;
    if disc.rem_euclid(4) == 1 {
        if p == 2 {
            // x^2 - x - (disc-1)/4 = x(x+1) mod 2 when disc = 1 mod 8.
            return [0, 1];
        }
        // omega = (1 + s)/2 with s^2 = disc.
        let s = sqrt_mod(d, p).expect("split prime has a square root");
        let half = p.div_ceil(2);
        let r1 = ((1 + s) % p) * half % p;
        let r2 = ((1 + p - s) % p) * half % p;
        [r1.min(r2), r1.max(r2)]
    } else {
        let s = sqrt_mod(d, p).expect("split prime has a square root");
        let t = (p - s) % p;
        [s.min(t), s.max(t)]
    }
}

pub fn ord_rational(x: &Rational, p: u64) -> Valuation {
    if *x == 0 {
        return Valuation::Infinite;
    }
    let p = Integer::from(p);
    let num = x.numer().clone().remove_factor(&p).1 as i64;
    let den = x.denom().clone().remove_factor(&p).1 as i64;
    Valuation::Finite(num - den)
}

fn ord_int(x: &Rational, p: u64) -> i64 {
    ord_rational(x, p).finite().unwrap_or(i64::MAX)
}

/// Reduction modulo `p` of a p-integral rational.
fn reduce_mod(x: &Rational, p: u64) -> u64 {
    let pi = Integer::from(p);
    let num = Integer::from(x.numer().mod_u(p as u32));
    let den = Integer::from(x.denom() % &pi);
    let inv = den.invert(&pi).expect("p-integral rational");
    let r = num * inv % &pi;
    r.to_u64().expect("residue fits")
}

/// The valuation of `x` at `ideal`.
pub fn ord(x: &QuadElement, ideal: &PrimeIdeal) -> Result<Valuation> {
    if x.disc() != 0 && x.disc() != ideal.disc {
        return Err(Error::FieldMismatch { element: x.disc(), expected: ideal.disc });
    }
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let p = ideal.p;
    if x.is_rational() {
        let v = ord_int(x.x(), p);
        return Ok(Valuation::Finite(v * i64::from(ideal.ramification())));
    }
    // Coordinates in the basis (1, omega).
    let (u, v) = if ideal.disc.rem_euclid(4) == 1 {
        (Rational::from(x.x() - x.y()), Rational::from(x.y() * 2u32))
    } else {
        (x.x().clone(), x.y().clone())
    };
    let t = ord_int(&u, p).min(ord_int(&v, p));
    let scale = pow_p(p, -t);
    let beta = x.mul_rational(&scale);
    let (u, v) = (Rational::from(&u * &scale), Rational::from(&v * &scale));
    let norm_val = || ord_int(&beta.norm(), p);
    let val = match ideal.kind {
        IdealKind::Rational => unreachable!("rational ideal with quadratic element"),
        IdealKind::Inert => t,
        IdealKind::Ramified => 2 * t + norm_val(),
        IdealKind::Split { root } => {
            let r = (reduce_mod(&u, p) + reduce_mod(&v, p) * root) % p;
            t + if r == 0 { norm_val() } else { 0 }
        }
    };
    Ok(Valuation::Finite(val))
}

fn pow_p(p: u64, e: i64) -> Rational {
    let base = Integer::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from(base)
    } else {
        Rational::from((Integer::from(1), base))
    }
}
