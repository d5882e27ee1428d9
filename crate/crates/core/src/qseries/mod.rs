//! Truncated q-expansions of level-one elliptic modular forms.

mod newforms;

pub use newforms::{cusp_basis, modular_basis, newforms, satake, Newform, SatakePair};
pub(crate) use newforms::quadratic_eigenvalues;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::arith::{is_prime, sigma};
use crate::characters::bernoulli;
use crate::coeffring::QuadElement;
use crate::error::{Error, Result};

/// Coefficients `a(0..=prec)` of a form of weight `weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    weight: u32,
    coeffs: Vec<QuadElement>,
}

impl QExpansion {
    /// A series with coefficients `a(0), ..., a(coeffs.len() - 1)`.
    pub fn new(weight: u32, coeffs: Vec<QuadElement>) -> Self {
        assert!(!coeffs.is_empty(), "a q-expansion needs at least a(0)");
        Self { weight, coeffs }
    }

    pub fn from_rationals(weight: u32, coeffs: Vec<Rational>) -> Self {
        Self::new(weight, coeffs.into_iter().map(QuadElement::rational).collect())
    }

    pub fn constant(c: QuadElement, prec: usize) -> Self {
        let mut coeffs = vec![QuadElement::zero(); prec + 1];
        coeffs[0] = c;
        Self { weight: 0, coeffs }
    }

    pub fn zero(weight: u32, prec: usize) -> Self {
        Self { weight, coeffs: vec![QuadElement::zero(); prec + 1] }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Coefficients are known through q^prec.
    pub fn prec(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &QuadElement {
        &self.coeffs[n]
    }

    pub fn get(&self, n: usize) -> Option<&QuadElement> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[QuadElement] {
        &self.coeffs
    }

    pub fn is_cusp(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(QuadElement::is_zero)
    }

    /// The field the coefficients live in (0 for Q).
    pub fn disc(&self) -> i64 {
        self.coeffs.iter().map(QuadElement::disc).find(|&d| d != 0).unwrap_or(0)
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let n = (prec + 1).min(self.coeffs.len());
        Self { weight: self.weight, coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn with_weight(mut self, weight: u32) -> Self {
        self.weight = weight;
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &Self, op: impl Fn(&QuadElement, &QuadElement) -> QuadElement) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch(self.weight, other.weight));
        }
        let prec = self.prec().min(other.prec());
        let coeffs = (0..=prec).map(|n| op(&self.coeffs[n], &other.coeffs[n])).collect();
        Ok(Self { weight: self.weight, coeffs })
    }

    pub fn scale(&self, c: &QuadElement) -> Self {
        Self { weight: self.weight, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn conjugate(&self) -> Self {
        Self { weight: self.weight, coeffs: self.coeffs.iter().map(QuadElement::conjugate).collect() }
    }

    /// Cauchy product truncated at the smaller precision; weights add.
    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec().min(other.prec());
        let coeffs = if let (Some(a), Some(b)) = (integral_form(self, prec), integral_form(other, prec)) {
            let (a, da) = a;
            let (b, db) = b;
            let den = Integer::from(&da * &db);
            convolve_int(&a, &b, prec)
                .into_iter()
                .map(|c| QuadElement::rational(Rational::from((c, den.clone()))))
                .collect()
        } else {
            let mut out = vec![QuadElement::zero(); prec + 1];
            for (i, x) in self.coeffs[..=prec].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in other.coeffs[..=prec - i].iter().enumerate() {
                    if !y.is_zero() {
                        out[i + j] += &(x * y);
                    }
                }
            }
            out
        };
        Self { weight: self.weight + other.weight, coeffs }
    }

    pub fn pow(&self, e: u32, prec: usize) -> Self {
        let mut acc = Self::constant(QuadElement::one(), prec.min(self.prec()));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// T(p) with a(n) -> a(pn) + p^(k-1) a(n/p); output precision is floor(prec/p).
    pub fn hecke(&self, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let p = p as usize;
        let out_prec = self.prec() / p;
        if out_prec == 0 {
            return Err(Error::PrecisionShortfall { needed: p as u64, have: self.prec() as u64 });
        }
        let pk = QuadElement::from(Integer::from(p).pow(self.weight.saturating_sub(1)));
        let coeffs = (0..=out_prec)
            .map(|n| {
                let mut v = self.coeffs[p * n].clone();
                if n % p == 0 {
                    v += &(&pk * &self.coeffs[n / p]);
                }
                v
            })
            .collect();
        Ok(Self { weight: self.weight, coeffs })
    }
}

fn integral_form(f: &QExpansion, prec: usize) -> Option<(Vec<Integer>, Integer)> {
    let coeffs = &f.coeffs[..=prec];
    if coeffs.iter().any(|c| !c.is_rational()) {
        return None;
    }
    let mut den = Integer::from(1);
    for c in coeffs {
        den.lcm_mut(c.x().denom());
    }
    let nums = coeffs
        .iter()
        .map(|c| c.x().numer() * Integer::from(&den / c.x().denom()))
        .collect();
    Some((nums, den))
}

fn convolve_int(a: &[Integer], b: &[Integer], prec: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); prec + 1];
    for (i, x) in a.iter().enumerate().take(prec + 1) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec + 1 - i) {
            if *y != 0 {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.
pub fn eisenstein(k: u32, prec: usize) -> Result<QExpansion> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidWeight { weight: k.into(), reason: "Eisenstein series need even k >= 4" });
    }
    let c = -Rational::from(2 * k) / bernoulli(k as usize);
    let mut coeffs = vec![Rational::from(1)];
    coeffs.extend((1..=prec as u64).map(|n| Rational::from(&c * sigma(k - 1, n))));
    Ok(QExpansion::from_rationals(k, coeffs))
}

/// Delta = (E4^3 - E6^2)/1728.
pub fn delta(prec: usize) -> QExpansion {
    let e4 = eisenstein(4, prec).expect("weight 4");
    let e6 = eisenstein(6, prec).expect("weight 6");
    let d = e4.pow(3, prec).sub(&e6.pow(2, prec).with_weight(12)).expect("weight 12");
    d.scale(&QuadElement::rational(Rational::from((1, 1728))))
}

/// dim M_k(SL_2(Z)) for even k >= 0.
pub fn dim_modular(k: u32) -> usize {
    if k % 2 == 1 || k == 2 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base
    } else {
        base + 1
    }
}

/// dim S_k(SL_2(Z)).
pub fn dim_cusp(k: u32) -> usize {
    if k < 12 || k % 2 == 1 {
        return 0;
    }
    dim_modular(k) - 1
}

/// Exponent pairs (a, b) with 4a + 6b = k.
pub fn monomials_e4_e6(k: u32) -> Vec<(u32, u32)> {
    (0..=k / 6).filter(|b| (k - 6 * b).is_multiple_of(4)).map(|b| ((k - 6 * b) / 4, b)).collect()
}
