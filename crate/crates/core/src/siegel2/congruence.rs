use std::fmt;

use serde::{Deserialize, Serialize};

use super::hecke_tp;
use crate::arith::primes_up_to;
use crate::coeffring::{ord, split_prime, PrimeIdeal, QuadElement, Valuation};
use crate::error::{Error, Result};
use crate::siegel::{reduced_triples, SiegelForm, Triple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CongruenceMode {
    Fourier,
    Eigenvalue,
}

/// A congruence exponent: exact within the compared range, or a lower bound when every
/// compared difference vanished to at least `cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exponent {
    pub value: i64,
    pub at_least: bool,
}

impl Exponent {
    fn from_min(min: Valuation, cap: i64) -> Self {
        match min {
            Valuation::Finite(v) if v < cap => Self { value: v, at_least: false },
            _ => Self { value: cap, at_least: true },
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.at_least {
            write!(f, ">= {}", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub ideal: PrimeIdeal,
    pub mode: CongruenceMode,
    pub exponent: Exponent,
    /// The normalizing coefficient T0 (Fourier mode).
    pub anchor: Option<Triple>,
    /// A_F(T0) / A_G(T0).
    pub scaling: Option<String>,
    /// A triple where the minimum is attained.
    pub witness: Option<Triple>,
    pub bound: u64,
    pub qualifier: String,
}

fn unit(x: &QuadElement, ideal: &PrimeIdeal) -> Result<bool> {
    Ok(ord(x, ideal)? == 0)
}

/// The largest M with ord(A_F(T) - A_G(T)) >= M on every reduced triple with n, m <= bound,
/// after scaling both forms to 1 at the first triple where both are units.
///
/// In eigenvalue mode the T(2) eigenvalues are compared instead.
pub fn congruence_exponent(
    f: &SiegelForm,
    g: &SiegelForm,
    ideal: &PrimeIdeal,
    bound: u64,
    mode: CongruenceMode,
    cap: i64,
) -> Result<CongruenceReport> {
    if f.weight() != g.weight() {
        return Err(Error::WeightMismatch(f.weight(), g.weight()));
    }
    if mode == CongruenceMode::Eigenvalue {
        let lf = hecke_eigenvalue(f, 2)?;
        let lg = hecke_eigenvalue(g, 2)?;
        let exponent = eigenvalue_congruence(&lf, &lg, ideal, cap)?;
        let bound = f.prec().min(g.prec()) / 2;
        return Ok(CongruenceReport {
            ideal: *ideal,
            mode,
            exponent,
            anchor: None,
            scaling: None,
            witness: None,
            bound,
            qualifier: "T(2) eigenvalues".into(),
        });
    }
    let have = f.prec().min(g.prec());
    if have < bound {
        return Err(Error::PrecisionShortfall { needed: bound, have });
    }
    let triples = reduced_triples(bound);
    let mut anchor = None;
    for t in &triples {
        let (a, b) = (&f.coeffs()[t], &g.coeffs()[t]);
        if unit(a, ideal)? && unit(b, ideal)? {
            anchor = Some((*t, a.clone(), b.clone()));
            break;
        }
    }
    let (t0, a0, b0) = anchor.ok_or_else(|| Error::NoUnitCoefficient(format!("no common unit coefficient at {ideal}")))?;
    let (fa, gb) = (a0.inverse().expect("unit"), b0.inverse().expect("unit"));
    let mut min = Valuation::Infinite;
    let mut witness = None;
    for t in &triples {
        let x = &f.coeffs()[t] * &fa;
        let y = &g.coeffs()[t] * &gb;
        if ord(&x, ideal)? < 0 || ord(&y, ideal)? < 0 {
            return Err(Error::NotIntegral(format!("coefficient at {t} after scaling at {t0}")));
        }
        let v = ord(&(&x - &y), ideal)?;
        if v < min {
            min = v;
            witness = Some(*t);
        }
    }
    Ok(CongruenceReport {
        ideal: *ideal,
        mode,
        exponent: Exponent::from_min(min, cap),
        anchor: Some(t0),
        scaling: Some((&a0 / &b0).to_string()),
        witness,
        bound,
        qualifier: format!("verified through bound {bound}"),
    })
}

/// ord of the difference of two Hecke eigenvalues, capped.
pub fn eigenvalue_congruence(a: &QuadElement, b: &QuadElement, ideal: &PrimeIdeal, cap: i64) -> Result<Exponent> {
    Ok(Exponent::from_min(ord(&(a - b), ideal)?, cap))
}

/// The T(p) eigenvalue of F, after checking T(p)F = lambda F on the output box.
pub fn hecke_eigenvalue(f: &SiegelForm, p: u64) -> Result<QuadElement> {
    let image = hecke_tp(f, p)?;
    let (t0, a) = image
        .coeffs()
        .keys()
        .filter_map(|t| f.coeffs().get(t).filter(|a| !a.is_zero()).map(|a| (*t, a)))
        .next()
        .ok_or_else(|| Error::PrecisionShortfall { needed: 2 * p, have: f.prec() })?;
    let lambda = &image.coeffs()[&t0] / a;
    if image != f.truncate(image.prec()).scale(&lambda) {
        return Err(Error::DimensionMismatch(format!("not a T({p}) eigenform")));
    }
    Ok(lambda)
}

/// A prime ideal at which the Fourier exponent is positive, with the eigenvalue-mode check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanHit {
    pub fourier: CongruenceReport,
    pub eigenvalue: CongruenceReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceScan {
    pub min_prime: u64,
    pub max_prime: u64,
    pub bound: u64,
    pub hits: Vec<ScanHit>,
    /// Ideals where no comparison was possible, with the reason.
    pub skipped: Vec<(PrimeIdeal, String)>,
}

/// Scans every prime ideal above the primes l with `min_prime` < l <= `max_prime`.
pub fn scan_congruences(
    f: &SiegelForm,
    g: &SiegelForm,
    min_prime: u64,
    max_prime: u64,
    bound: u64,
    cap: i64,
) -> Result<CongruenceScan> {
    let disc = if f.disc() != 0 { f.disc() } else { g.disc() };
    if g.disc() != 0 && g.disc() != disc {
        return Err(Error::FieldMismatch { element: g.disc(), expected: disc });
    }
    let mut hits = Vec::new();
    let mut skipped = Vec::new();
    for l in primes_up_to(max_prime).into_iter().filter(|&l| l > min_prime) {
        for ideal in split_prime(l, disc)? {
            match congruence_exponent(f, g, &ideal, bound, CongruenceMode::Fourier, cap) {
                Ok(rep) if rep.exponent.value >= 1 => {
                    let eigenvalue = congruence_exponent(f, g, &ideal, bound, CongruenceMode::Eigenvalue, cap)?;
                    hits.push(ScanHit { fourier: rep, eigenvalue });
                }
                Ok(_) => {}
                Err(e @ (Error::NoUnitCoefficient(_) | Error::NotIntegral(_))) => skipped.push((ideal, e.to_string())),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(CongruenceScan { min_prime, max_prime, bound, hits, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn form(values: &[(Triple, i64)]) -> SiegelForm {
        let mut coeffs: BTreeMap<Triple, QuadElement> =
            reduced_triples(2).into_iter().map(|t| (t, QuadElement::zero())).collect();
        for (t, v) in values {
            coeffs.insert(*t, QuadElement::from_i64(*v));
        }
        SiegelForm::new(10, 2, coeffs).unwrap()
    }

    #[test]
    fn identical_forms_hit_the_cap() {
        let f = form(&[(Triple::new(1, 1, 1), 1), (Triple::new(1, 0, 1), -2)]);
        let p = PrimeIdeal::rational(5).unwrap();
        let rep = congruence_exponent(&f, &f, &p, 2, CongruenceMode::Fourier, 20).unwrap();
        assert_eq!(rep.exponent, Exponent { value: 20, at_least: true });
        assert_eq!(rep.qualifier, "verified through bound 2");
    }

    #[test]
    fn difference_of_p_squared() {
        let t = Triple::new(1, 1, 1);
        let f = form(&[(t, 1), (Triple::new(2, 1, 2), 3)]);
        let g = form(&[(t, 1), (Triple::new(2, 1, 2), 3 + 49)]);
        let p = PrimeIdeal::rational(7).unwrap();
        let rep = congruence_exponent(&f, &g, &p, 2, CongruenceMode::Fourier, 20).unwrap();
        assert_eq!(rep.exponent, Exponent { value: 2, at_least: false });
        assert_eq!(rep.anchor, Some(t));
        assert_eq!(rep.witness, Some(Triple::new(2, 1, 2)));
    }

    #[test]
    fn scaling_and_unit_search() {
        // F's first unit coefficient is a multiple of 3 in G, so the next one is used.
        let f = form(&[(Triple::new(1, 0, 1), 1), (Triple::new(1, 1, 1), 2)]);
        let g = form(&[(Triple::new(1, 0, 1), 3), (Triple::new(1, 1, 1), 10)]);
        let p = PrimeIdeal::rational(3).unwrap();
        let rep = congruence_exponent(&f, &g, &p, 2, CongruenceMode::Fourier, 20).unwrap();
        assert_eq!(rep.anchor, Some(Triple::new(1, 1, 1)));
        assert_eq!(rep.scaling.as_deref(), Some("1/5"));
        // After scaling: F = (1/2, 1), G = (3/10, 1); difference 1/5 is a 3-unit.
        assert_eq!(rep.exponent.value, 0);
        let zero = form(&[]);
        assert!(matches!(
            congruence_exponent(&f, &zero, &p, 2, CongruenceMode::Fourier, 20),
            Err(Error::NoUnitCoefficient(_))
        ));
    }
}
