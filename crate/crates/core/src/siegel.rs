//! Genus-2 Fourier coefficients indexed by half-integral binary quadratic forms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coeffring::QuadElement;
use crate::error::{Error, Result};

/// The form n x^2 + r xy + m y^2, i.e. the matrix [[n, r/2], [r/2, m]].
///
/// Ordered by (m, n, r), so iteration over a box visits small forms first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub n: i64,
    pub r: i64,
    pub m: i64,
}

impl Triple {
    pub const fn new(n: i64, r: i64, m: i64) -> Self {
        Self { n, r, m }
    }

    /// 4nm - r^2.
    pub fn disc(&self) -> i64 {
        4 * self.n * self.m - self.r * self.r
    }

    pub fn is_psd(&self) -> bool {
        self.n >= 0 && self.m >= 0 && self.disc() >= 0
    }

    /// gcd of the three entries (0 for the zero form).
    pub fn content(&self) -> i64 {
        crate::arith::gcd(crate::arith::gcd(self.n, self.r), self.m)
    }

    pub fn is_reduced(&self) -> bool {
        0 <= self.r && self.r <= self.n && self.n <= self.m
    }

    /// The GL_2(Z)-reduced representative (0 <= r <= n <= m), for positive
    /// semi-definite forms.
    pub fn reduce(&self) -> Option<Triple> {
        if !self.is_psd() {
            return None;
        }
        let (mut n, mut r, mut m) = (self.n, self.r, self.m);
        loop {
            if n > m {
                std::mem::swap(&mut n, &mut m);
            }
            if n == 0 {
                // psd with n = 0 forces r = 0.
                return Some(Triple::new(0, 0, m));
            }
            if r.abs() <= n {
                break;
            }
            let q = (r + n).div_euclid(2 * n);
            let r2 = r - 2 * n * q;
            m = m - q * r + q * q * n;
            r = r2;
        }
        Some(Triple::new(n, r.abs(), m))
    }
}

impl Ord for Triple {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.m, self.n, self.r).cmp(&(other.m, other.n, other.r))
    }
}

impl PartialOrd for Triple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.r, self.m)
    }
}

/// Reduced triples with n, m <= prec, in canonical order.
pub fn reduced_triples(prec: u64) -> Vec<Triple> {
    let p = prec as i64;
    let mut out = Vec::new();
    for m in 0..=p {
        for n in 0..=m {
            for r in 0..=n {
                out.push(Triple::new(n, r, m));
            }
        }
    }
    out
}

/// All positive semi-definite triples with 0 <= n, m <= bound (any sign of r).
pub fn psd_triples(bound: u64) -> Vec<Triple> {
    let b = bound as i64;
    let mut out = Vec::new();
    for m in 0..=b {
        for n in 0..=b {
            let rmax = ((4 * n * m) as f64).sqrt() as i64 + 1;
            for r in -rmax..=rmax {
                let t = Triple::new(n, r, m);
                if t.is_psd() {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out
}

/// A genus-2 form of even weight with known coefficients on reduced triples.
///
/// Every reduced triple in the box n, m <= prec is present; forms coming from Maass
/// lifts may carry further reduced triples beyond the box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelForm {
    weight: u32,
    prec: u64,
    coeffs: BTreeMap<Triple, QuadElement>,
}

impl SiegelForm {
    /// Builds a form from reduced-triple coefficients; the box must be complete.
    pub fn new(weight: u32, prec: u64, coeffs: BTreeMap<Triple, QuadElement>) -> Result<Self> {
        if let Some(t) = coeffs.keys().find(|t| !t.is_reduced()) {
            return Err(Error::InvalidArgument(format!("triple {t} is not reduced")));
        }
        if let Some(t) = reduced_triples(prec).into_iter().find(|t| !coeffs.contains_key(t)) {
            return Err(Error::InvalidArgument(format!("missing coefficient at {t}")));
        }
        let mut disc = 0;
        for c in coeffs.values() {
            if c.disc() != 0 {
                if disc != 0 && disc != c.disc() {
                    return Err(Error::FieldMismatch { element: c.disc(), expected: disc });
                }
                disc = c.disc();
            }
        }
        Ok(Self { weight, prec, coeffs })
    }

    pub(crate) fn from_parts(weight: u32, prec: u64, coeffs: BTreeMap<Triple, QuadElement>) -> Self {
        Self { weight, prec, coeffs }
    }

    pub fn zero(weight: u32, prec: u64) -> Self {
        let coeffs = reduced_triples(prec).into_iter().map(|t| (t, QuadElement::zero())).collect();
        Self { weight, prec, coeffs }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Box precision.
    pub fn prec(&self) -> u64 {
        self.prec
    }

    /// Discriminant of the coefficient field (0 for Q).
    pub fn disc(&self) -> i64 {
        self.coeffs.values().map(QuadElement::disc).find(|&d| d != 0).unwrap_or(0)
    }

    /// The stored coefficients, keyed by reduced triple.
    pub fn coeffs(&self) -> &BTreeMap<Triple, QuadElement> {
        &self.coeffs
    }

    /// A(n, r, m) for any form, through its reduced representative.
    pub fn coeff(&self, t: Triple) -> Option<&QuadElement> {
        self.coeffs.get(&t.reduce()?)
    }

    pub fn get(&self, n: i64, r: i64, m: i64) -> Option<&QuadElement> {
        self.coeff(Triple::new(n, r, m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(QuadElement::is_zero)
    }

    pub fn is_cusp(&self) -> bool {
        self.coeffs.iter().all(|(t, c)| t.disc() > 0 || c.is_zero())
    }

    /// Restriction to the box n, m <= prec.
    pub fn truncate(&self, prec: u64) -> Self {
        let p = prec.min(self.prec) as i64;
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(t, _)| t.m <= p)
            .map(|(t, c)| (*t, c.clone()))
            .collect();
        Self { weight: self.weight, prec: p as u64, coeffs }
    }

    /// Coefficients in the box as a vector in canonical order.
    pub fn box_vector(&self, prec: u64) -> Vec<QuadElement> {
        reduced_triples(prec).into_iter().map(|t| self.coeffs[&t].clone()).collect()
    }

    pub fn scale(&self, c: &QuadElement) -> Self {
        let coeffs = self.coeffs.iter().map(|(t, v)| (*t, v * c)).collect();
        Self { weight: self.weight, prec: self.prec, coeffs }
    }

    /// Sum on the common set of stored triples.
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
        let coeffs = self
            .coeffs
            .iter()
            .filter_map(|(t, a)| other.coeffs.get(t).map(|b| (*t, op(a, b))))
            .collect();
        Ok(Self { weight: self.weight, prec: self.prec.min(other.prec), coeffs })
    }

    /// Coefficientwise Galois conjugation.
    pub fn conjugate(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(t, v)| (*t, v.conjugate())).collect();
        Self { weight: self.weight, prec: self.prec, coeffs }
    }
}

/// Linear combination sum c_i F_i over the common stored triples.
pub fn linear_combination(forms: &[&SiegelForm], coeffs: &[QuadElement]) -> Result<SiegelForm> {
    let first = forms.first().ok_or_else(|| Error::InvalidArgument("empty combination".into()))?;
    let mut acc = SiegelForm::zero(first.weight, forms.iter().map(|f| f.prec).min().unwrap_or(0));
    for (f, c) in forms.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&f.scale(c))?;
    }
    Ok(acc)
}
