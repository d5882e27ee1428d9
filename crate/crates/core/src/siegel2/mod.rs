//! The ring of even-weight genus-2 Siegel modular forms: products, the Siegel
//! Phi-operator, Hecke operators, spaces and congruences.

mod congruence;
mod space;

pub use congruence::{
    congruence_exponent, eigenvalue_congruence, hecke_eigenvalue, scan_congruences, CongruenceMode, CongruenceReport,
    CongruenceScan, Exponent, ScanHit,
};
pub use space::{eigenforms, space, Eigenform, FormKind, SiegelSpace};

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::arith::is_prime;
use crate::coeffring::QuadElement;
use crate::error::{Error, Result};
use crate::qseries::QExpansion;
use crate::siegel::{reduced_triples, SiegelForm, Triple};

/// The weight-0 constant form c.
pub fn constant(c: QuadElement, prec: u64) -> SiegelForm {
    let mut coeffs = SiegelForm::zero(0, prec).coeffs().clone();
    coeffs.insert(Triple::new(0, 0, 0), c);
    SiegelForm::new(0, prec, coeffs).expect("complete box")
}

/// Dense table of A(n, r, m) for all psd (n, r, m) in the box, r in [-2P, 2P].
struct Dense<T> {
    prec: i64,
    data: Vec<Option<T>>,
}

impl<T: Clone> Dense<T> {
    fn build(f: &SiegelForm, map: impl Fn(&QuadElement) -> T) -> Self {
        let p = f.prec() as i64;
        let width = (4 * p + 1) as usize;
        let side = (p + 1) as usize;
        let mut data = vec![None; side * side * width];
        for n in 0..=p {
            for m in 0..=p {
                for r in -2 * p..=2 * p {
                    let t = Triple::new(n, r, m);
                    if t.is_psd() {
                        let idx = (n as usize * side + m as usize) * width + (r + 2 * p) as usize;
                        data[idx] = f.coeff(t).map(&map);
                    }
                }
            }
        }
        Self { prec: p, data }
    }

    fn get(&self, n: i64, r: i64, m: i64) -> Option<&T> {
        let p = self.prec;
        let side = (p + 1) as usize;
        let width = (4 * p + 1) as usize;
        let idx = (n as usize * side + m as usize) * width + (r + 2 * p) as usize;
        self.data[idx].as_ref()
    }
}

/// Visits the decompositions T = T1 + T2 into positive semi-definite halves.
fn for_each_split(t: Triple, mut visit: impl FnMut(Triple, Triple)) {
    for n1 in 0..=t.n {
        for m1 in 0..=t.m {
            let (n2, m2) = (t.n - n1, t.m - m1);
            let b1 = isqrt(4 * n1 * m1);
            let b2 = isqrt(4 * n2 * m2);
            let lo = (-b1).max(t.r - b2);
            let hi = b1.min(t.r + b2);
            for r1 in lo..=hi {
                visit(Triple::new(n1, r1, m1), Triple::new(n2, t.r - r1, m2));
            }
        }
    }
}

fn isqrt(x: i64) -> i64 {
    let mut s = (x as f64).sqrt() as i64;
    while s * s > x {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= x {
        s += 1;
    }
    s
}

fn common_denominator(f: &SiegelForm) -> Option<Integer> {
    let mut den = Integer::from(1);
    for c in f.coeffs().values() {
        if !c.is_rational() {
            return None;
        }
        den.lcm_mut(c.x().denom());
    }
    Some(den)
}

/// The product FG on the common box; weights add.
pub fn siegel_mul(f: &SiegelForm, g: &SiegelForm) -> Result<SiegelForm> {
    if f.prec() != g.prec() {
        return Err(Error::PrecisionMismatch(f.prec() as u32, g.prec() as u32));
    }
    let prec = f.prec();
    let mut coeffs = BTreeMap::new();
    if let (Some(df), Some(dg)) = (common_denominator(f), common_denominator(g)) {
        let to_int = |den: &Integer| {
            let den = den.clone();
            move |c: &QuadElement| c.x().numer() * Integer::from(&den / c.x().denom())
        };
        let tf = Dense::build(f, to_int(&df));
        let tg = Dense::build(g, to_int(&dg));
        let den = Integer::from(&df * &dg);
        for t in reduced_triples(prec) {
            let mut acc = Integer::new();
            for_each_split(t, |a, b| {
                if let (Some(x), Some(y)) = (tf.get(a.n, a.r, a.m), tg.get(b.n, b.r, b.m)) {
                    if *x != 0 && *y != 0 {
                        acc += x * y;
                    }
                }
            });
            coeffs.insert(t, QuadElement::rational(Rational::from((acc, den.clone()))));
        }
    } else {
        let tf = Dense::build(f, QuadElement::clone);
        let tg = Dense::build(g, QuadElement::clone);
        for t in reduced_triples(prec) {
            let mut acc = QuadElement::zero();
            for_each_split(t, |a, b| {
                if let (Some(x), Some(y)) = (tf.get(a.n, a.r, a.m), tg.get(b.n, b.r, b.m)) {
                    if !x.is_zero() && !y.is_zero() {
                        acc += &(x * y);
                    }
                }
            });
            coeffs.insert(t, acc);
        }
    }
    SiegelForm::new(f.weight() + g.weight(), prec, coeffs)
}

/// The Siegel Phi-operator: a(n) = A(n, 0, 0).
pub fn phi(f: &SiegelForm) -> QExpansion {
    let p = f.prec() as i64;
    let coeffs = (0..=p).map(|n| f.get(0, 0, n).expect("box coefficient").clone()).collect();
    QExpansion::new(f.weight(), coeffs)
}

/// The Hecke operator T(p) on forms of weight k; the output box is floor(prec / p).
///
/// a(T; T(p)F) = a(pT) + p^(k-2) sum_D a(T[D]/p) + p^(2k-3) a(T/p), the middle sum
/// running over the p + 1 lattices D of index p.
pub fn hecke_tp(f: &SiegelForm, p: u64) -> Result<SiegelForm> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let k = f.weight();
    if k < 2 {
        return Err(Error::InvalidWeight { weight: k.into(), reason: "Hecke operators need weight >= 2" });
    }
    let out = f.prec() / p;
    let pi = p as i64;
    let w1 = QuadElement::from(Integer::from(p).pow(k - 2));
    let w2 = QuadElement::from(Integer::from(p).pow(2 * k - 3));
    let shortfall = || Error::PrecisionShortfall { needed: p * (out + 1), have: f.prec() };
    let mut coeffs = BTreeMap::new();
    for t in reduced_triples(out) {
        let (n, r, m) = (t.n, t.r, t.m);
        let mut acc = f.get(pi * n, pi * r, pi * m).ok_or_else(shortfall)?.clone();
        let mut mid = QuadElement::zero();
        for j in 0..pi {
            let top = n + r * j + m * j * j;
            if top % pi == 0 {
                mid += f.get(top / pi, r + 2 * j * m, pi * m).ok_or_else(shortfall)?;
            }
        }
        if m % pi == 0 {
            mid += f.get(pi * n, r, m / pi).ok_or_else(shortfall)?;
        }
        acc += &(&w1 * &mid);
        if n % pi == 0 && r % pi == 0 && m % pi == 0 {
            acc += &(&w2 * f.get(n / pi, r / pi, m / pi).ok_or_else(shortfall)?);
        }
        coeffs.insert(t, acc);
    }
    SiegelForm::new(k, out, coeffs)
}

pub fn hecke_t2(f: &SiegelForm) -> Result<SiegelForm> {
    hecke_tp(f, 2)
}
