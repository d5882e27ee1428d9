//! The Maass lift from index-one Jacobi forms to genus-2 Siegel forms.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::arith::divisors;
use crate::characters::bernoulli;
use crate::coeffring::QuadElement;
use crate::error::{Error, Result};
use crate::jacobi::{inverse_shimura, jacobi_eisenstein, JacobiForm};
use crate::qseries::Newform;
use crate::siegel::{psd_triples, reduced_triples, SiegelForm, Triple};

/// sum_{d | gcd(n, r, m)} d^(k-1) c((4nm - r^2)/d^2) for a triple of positive rank.
fn lift_coefficient(phi: &JacobiForm, t: Triple) -> Option<QuadElement> {
    let k = phi.weight();
    let g = t.content().unsigned_abs();
    let disc = t.disc();
    let mut acc = QuadElement::zero();
    for d in divisors(g) {
        let c = phi.c(disc / (d * d) as i64)?;
        if !c.is_zero() {
            acc += &c.mul_integer(&Integer::from(d).pow(k - 1));
        }
    }
    Some(acc)
}

/// Reduced triples stored by a lift of box precision `prec` from a Jacobi form known
/// through discriminant `jprec`: the box, plus every (1, r, m) the Jacobi form reaches.
fn lift_support(prec: u64, jprec: u64) -> Vec<Triple> {
    let mut out = reduced_triples(prec);
    let jprec = jprec as i64;
    let mut m = prec as i64 + 1;
    while 4 * m - 1 <= jprec {
        for r in 0..=1 {
            if 4 * m - r * r <= jprec {
                out.push(Triple::new(1, r, m));
            }
        }
        m += 1;
    }
    out
}

fn lift_with(phi: &JacobiForm, prec: u64) -> Result<BTreeMap<Triple, QuadElement>> {
    let needed = 4 * prec * prec;
    if phi.prec() < needed {
        return Err(Error::PrecisionShortfall { needed, have: phi.prec() });
    }
    let mut coeffs = BTreeMap::new();
    for t in lift_support(prec, phi.prec()) {
        let v = if t == Triple::new(0, 0, 0) {
            QuadElement::zero()
        } else {
            lift_coefficient(phi, t).expect("within Jacobi precision")
        };
        coeffs.insert(t, v);
    }
    Ok(coeffs)
}

/// The Maass lift of a Jacobi cusp form; `phi` must be known through D = 4 prec^2.
pub fn maass_lift(phi: &JacobiForm, prec: u64) -> Result<SiegelForm> {
    if !phi.is_cusp() {
        return Err(Error::NotCusp);
    }
    Ok(SiegelForm::from_parts(phi.weight(), prec, lift_with(phi, prec)?))
}

/// The genus-2 Siegel Eisenstein series of weight k, as the lift of E_{k,1}.
///
/// The lift formula is scaled by -2k/B_k so that A(0,0,0) = 1 and
/// A(0,0,m) = a_{E_k}(m).
pub fn maass_lift_eisenstein(k: u32, prec: u64) -> Result<SiegelForm> {
    let phi = jacobi_eisenstein(k, (4 * prec * prec).max(4))?;
    let mut coeffs = lift_with(&phi, prec)?;
    let scale = QuadElement::rational(-Rational::from(2 * k) / bernoulli(k as usize));
    for v in coeffs.values_mut() {
        *v = &*v * &scale;
    }
    coeffs.insert(Triple::new(0, 0, 0), QuadElement::one());
    Ok(SiegelForm::from_parts(k, prec, coeffs))
}

/// Outcome of checking A(n,r,m) = sum_{d | gcd(n,r,m)} d^(k-1) A(nm/d^2, r/d, 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaassReport {
    pub holds: bool,
    pub bound: u64,
    /// Triples (any sign of r) on which both sides were evaluated.
    pub checked: usize,
    /// Distinct reduced classes among the checked triples.
    pub checked_classes: usize,
    /// Triples skipped because a needed coefficient lies outside the stored range.
    pub skipped: usize,
    pub witness: Option<Triple>,
}

/// Checks the Maass relation on every positive semi-definite (n, r, m) with
/// n, m <= bound other than the zero form.
pub fn maass_relation_check(f: &SiegelForm, bound: u64) -> MaassReport {
    let k = f.weight();
    let mut checked = 0;
    let mut skipped = 0;
    let mut classes = std::collections::BTreeSet::new();
    let mut witness = None;
    for t in psd_triples(bound) {
        if t == Triple::new(0, 0, 0) {
            continue;
        }
        let Some(lhs) = f.coeff(t) else {
            skipped += 1;
            continue;
        };
        let mut rhs = QuadElement::zero();
        let mut complete = true;
        for d in divisors(t.content().unsigned_abs()) {
            let d = d as i64;
            match f.get(t.n * t.m / (d * d), t.r / d, 1) {
                Some(a) => rhs += &a.mul_integer(&Integer::from(d).pow(k - 1)),
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if !complete {
            skipped += 1;
            continue;
        }
        checked += 1;
        classes.insert(t.reduce().expect("psd"));
        if *lhs != rhs && witness.is_none() {
            witness = Some(t);
        }
    }
    MaassReport {
        holds: witness.is_none(),
        bound,
        checked,
        checked_classes: classes.len(),
        skipped,
        witness,
    }
}

/// The Saito-Kurokawa lift F_f of a newform f of weight 2k - 2, with box precision `prec`.
///
/// The Jacobi form is normalized by c(3) = 1, so A(1,1,1) = 1 whenever c(3) != 0.
pub fn sk_lift(f: &Newform, prec: u64) -> Result<SiegelForm> {
    let phi = inverse_shimura(f, 4 * prec * prec)?;
    maass_lift(&phi, prec)
}

/// Coefficientwise Galois conjugate.
pub fn complex_conjugate(f: &SiegelForm) -> SiegelForm {
    f.conjugate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::jacobi_cusp_basis;

    #[test]
    fn lift_formula_examples() {
        let phi = jacobi_cusp_basis(10, 16).unwrap().remove(0);
        let f = maass_lift(&phi, 2).unwrap();
        let c = |d: usize| phi.coeffs()[d].clone();
        assert_eq!(*f.get(1, 1, 1).unwrap(), c(3));
        assert_eq!(*f.get(2, 1, 1).unwrap(), c(7));
        let expected = &c(12) + &c(3).mul_integer(&Integer::from(512));
        assert_eq!(*f.get(2, 2, 2).unwrap(), expected);
        assert!(f.is_cusp());
        assert!(matches!(maass_lift(&phi, 3), Err(Error::PrecisionShortfall { .. })));
    }

    #[test]
    fn eisenstein_boundary() {
        let e4 = maass_lift_eisenstein(4, 2).unwrap();
        assert_eq!(*e4.get(0, 0, 0).unwrap(), QuadElement::one());
        assert_eq!(*e4.get(1, 0, 0).unwrap(), QuadElement::from_i64(240));
        assert_eq!(*e4.get(1, 1, 1).unwrap(), QuadElement::from_i64(13440));
        assert!(maass_relation_check(&e4, 2).holds);
    }

    #[test]
    fn relation_holds_on_lift_and_fails_on_perturbation() {
        let phi = jacobi_cusp_basis(10, 36).unwrap().remove(0);
        let f = maass_lift(&phi, 3).unwrap();
        let rep = maass_relation_check(&f, 3);
        assert!(rep.holds);
        assert_eq!(rep.skipped, 0);
        let mut coeffs = f.coeffs().clone();
        coeffs.insert(Triple::new(2, 2, 2), QuadElement::from_i64(7));
        let bad = SiegelForm::new(10, 3, coeffs).unwrap();
        let rep = maass_relation_check(&bad, 3);
        assert!(!rep.holds);
        assert_eq!(rep.witness.unwrap().reduce(), Some(Triple::new(2, 2, 2)));
    }

    #[test]
    fn single_class_form() {
        let mut coeffs: BTreeMap<Triple, QuadElement> =
            reduced_triples(1).into_iter().map(|t| (t, QuadElement::zero())).collect();
        coeffs.insert(Triple::new(1, 1, 1), QuadElement::one());
        let f = SiegelForm::new(10, 1, coeffs).unwrap();
        let rep = maass_relation_check(&f, 1);
        assert!(rep.holds);
    }
}
