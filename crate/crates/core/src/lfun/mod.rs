//! Euler factors of Saito-Kurokawa lifts and numerical critical L-values.

mod hexfloat;
mod kz;
mod numeric;
mod scriptl;

pub use hexfloat::{format_hex, parse_hex};
pub use kz::{kohnen_zagier_ratio, kz_consistency, KzConsistency};
pub use numeric::{lvalue_embedded, lvalue_numeric, petersson_embedded, petersson_numeric, required_terms, LValueReport};
pub use scriptl::{script_l_terms, script_l_valuation, IdealValuation, ScriptLReport};

use rug::ops::Pow;
use rug::Integer;
use serde::Serialize;

use crate::characters::KroneckerCharacter;
use crate::coeffring::QuadElement;
use crate::error::{Error, Result};
use crate::qseries::Newform;

/// A local factor 1 + c_1 t + ... in t = p^(-s), lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerFactor {
    pub prime: u64,
    pub coeffs: Vec<QuadElement>,
}

impl EulerFactor {
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }
}

fn poly_mul(a: &[QuadElement], b: &[QuadElement]) -> Vec<QuadElement> {
    let mut out = vec![QuadElement::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

fn int(n: Integer) -> QuadElement {
    QuadElement::from(n)
}

fn pow_int(p: u64, e: u32) -> Integer {
    Integer::from(p).pow(e)
}

/// Weight k of the lift attached to a newform of weight 2k - 2.
fn lift_weight(f: &Newform) -> Result<u32> {
    let w = f.weight();
    if w % 4 != 2 || w < 6 {
        return Err(Error::InvalidWeight { weight: w.into(), reason: "newform weight must be 2k - 2 with k even" });
    }
    Ok((w + 2) / 2)
}

/// (1 - p^(k-1) t)(1 - p^(k-2) t)(1 - a_f(p) t + p^(2k-3) t^2), the spinor factor of F_f.
pub fn spinor_euler_sk(f: &Newform, p: u64) -> Result<EulerFactor> {
    let k = lift_weight(f)?;
    let a = f.expansion().get(p as usize).ok_or(Error::PrecisionShortfall { needed: p, have: f.prec() as u64 })?;
    let one = QuadElement::one();
    let lin = |c: Integer| vec![one.clone(), -int(c)];
    let quad = vec![one.clone(), -a, int(pow_int(p, 2 * k - 3))];
    let coeffs = poly_mul(&poly_mul(&lin(pow_int(p, k - 1)), &lin(pow_int(p, k - 2))), &quad);
    Ok(EulerFactor { prime: p, coeffs })
}

/// c0 + c1 y in K[y]/(y^2 - a y + q), where y is a root of the Hecke polynomial at l.
#[derive(Clone, Debug, PartialEq)]
struct Satake {
    c0: QuadElement,
    c1: QuadElement,
}

#[derive(Clone, Debug)]
struct SatakeRing {
    a: QuadElement,
    q: QuadElement,
}

impl SatakeRing {
    fn scalar(&self, c: QuadElement) -> Satake {
        Satake { c0: c, c1: QuadElement::zero() }
    }

    fn y_inv(&self) -> Satake {
        let qi = self.q.inverse().expect("q != 0");
        Satake { c0: &self.a * &qi, c1: -qi }
    }

    fn mul(&self, x: &Satake, z: &Satake) -> Satake {
        let cc = &x.c1 * &z.c1;
        Satake {
            c0: &(&x.c0 * &z.c0) - &(&self.q * &cc),
            c1: &(&(&x.c0 * &z.c1) + &(&x.c1 * &z.c0)) + &(&self.a * &cc),
        }
    }

    fn poly_mul(&self, a: &[Satake], b: &[Satake]) -> Vec<Satake> {
        let zero = self.scalar(QuadElement::zero());
        let mut out = vec![zero; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, z) in b.iter().enumerate() {
                let p = self.mul(x, z);
                out[i + j].c0 += &p.c0;
                out[i + j].c1 += &p.c1;
            }
        }
        out
    }

    /// 1 - c t.
    fn linear(&self, c: &Satake) -> Vec<Satake> {
        vec![self.scalar(QuadElement::one()), Satake { c0: -&c.c0, c1: -&c.c1 }]
    }
}

/// Both sides of the local identity at l for the standard L-function of F_f twisted by chi,
/// as polynomials in T = l^(-2s).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardCheck {
    pub holds: bool,
    pub prime: u64,
    pub chi: i64,
    /// W_l(chi(l) T) from the Satake parameters of F_f.
    pub lhs: Vec<String>,
    /// (1 - chi(l) l^2 T) L_l(f, chi, l^(3-k) T) L_l(f, chi, l^(4-k) T).
    pub rhs: Vec<String>,
}

fn standard_lhs(ring: &SatakeRing, l: u64, chi: i32, alphas: [Satake; 2]) -> Result<Vec<QuadElement>> {
    let l2c = ring.scalar(QuadElement::from_i64(chi as i64 * (l * l) as i64));
    let mut poly = ring.linear(&l2c);
    for alpha in alphas {
        let inv = inverse(ring, &alpha)?;
        poly = ring.poly_mul(&poly, &ring.linear(&ring.mul(&l2c, &alpha)));
        poly = ring.poly_mul(&poly, &ring.linear(&ring.mul(&l2c, &inv)));
    }
    poly.into_iter()
        .map(|c| {
            if c.c1.is_zero() {
                Ok(c.c0)
            } else {
                Err(Error::DimensionMismatch("standard factor is not symmetric in the Satake roots".into()))
            }
        })
        .collect()
}

/// Inverse in K[y]/(y^2 - a y + q) through the norm x * conj(x).
fn inverse(ring: &SatakeRing, x: &Satake) -> Result<Satake> {
    // conj(y) = a - y.
    let conj = Satake { c0: &x.c0 + &(&x.c1 * &ring.a), c1: -&x.c1 };
    let n = ring.mul(x, &conj);
    if !n.c1.is_zero() || n.c0.is_zero() {
        return Err(Error::InvalidArgument("Satake parameter is not invertible".into()));
    }
    let ni = n.c0.inverse().expect("nonzero");
    Ok(Satake { c0: &conj.c0 * &ni, c1: &conj.c1 * &ni })
}

/// Checks W_l(chi(l) l^(-2s)) = L_l(2s - 2, chi) L_l(2s + k - 3, f, chi) L_l(2s + k - 4, f, chi)
/// as an exact polynomial identity of degree 5.
///
/// The Satake parameters of F_f at l are a0 = y, a1 = l^(k-1)/y, a2 = l^(k-2)/y with
/// y^2 - a_f(l) y + l^(2k-3) = 0, which reproduces the spinor factor.
pub fn standard_factorization_check(f: &Newform, l: u64, chi: &KroneckerCharacter) -> Result<StandardCheck> {
    let k = lift_weight(f)?;
    let ring = satake_ring(f, l, k)?;
    let c = chi.eval(l as i64);
    if c == 0 {
        return Err(Error::InvalidArgument(format!("{l} divides the conductor of {chi}")));
    }
    let alphas = [
        ring.mul(&ring.scalar(int(pow_int(l, k - 1))), &ring.y_inv()),
        ring.mul(&ring.scalar(int(pow_int(l, k - 2))), &ring.y_inv()),
    ];
    finish_check(l, k, chi, &ring, alphas)
}

fn satake_ring(f: &Newform, l: u64, k: u32) -> Result<SatakeRing> {
    let a = f.expansion().get(l as usize).ok_or(Error::PrecisionShortfall { needed: l, have: f.prec() as u64 })?;
    Ok(SatakeRing { a: a.clone(), q: int(pow_int(l, 2 * k - 3)) })
}

fn finish_check(
    l: u64,
    k: u32,
    chi: &KroneckerCharacter,
    ring: &SatakeRing,
    alphas: [Satake; 2],
) -> Result<StandardCheck> {
    let c = chi.eval(l as i64) as i64;
    let lhs = standard_lhs(ring, l, c as i32, alphas)?;
    let a = &ring.a;
    let one = QuadElement::one();
    let lq = |e: i64| {
        let p = QuadElement::from(Integer::from(l).pow(e.unsigned_abs() as u32));
        if e >= 0 {
            p
        } else {
            p.inverse().expect("nonzero")
        }
    };
    let chi_q = QuadElement::from_i64(c);
    let chi2 = QuadElement::from_i64(c * c);
    let k = k as i64;
    let zeta = vec![one.clone(), -&(&chi_q * &lq(2))];
    let f3 = vec![one.clone(), -&(&(&chi_q * a) * &lq(3 - k)), &chi2 * &lq(3)];
    let f4 = vec![one.clone(), -&(&(&chi_q * a) * &lq(4 - k)), &chi2 * &lq(5)];
    let rhs = poly_mul(&poly_mul(&zeta, &f3), &f4);
    Ok(StandardCheck {
        holds: lhs == rhs,
        prime: l,
        chi: chi.disc(),
        lhs: lhs.iter().map(ToString::to_string).collect(),
        rhs: rhs.iter().map(ToString::to_string).collect(),
    })
}
