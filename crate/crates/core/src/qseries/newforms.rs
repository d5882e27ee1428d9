//! Miller bases and Hecke eigenforms of level one.

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::{dim_cusp, dim_modular, eisenstein, monomials_e4_e6, QExpansion};
use crate::arith::squarefree_decomposition_big;
use crate::coeffring::QuadElement;
use crate::error::{Error, Result};
use crate::linalg::{charpoly, identity, left_kernel, rref, Matrix};

/// Echelonized basis of M_k with a(i) = delta_ij for i < dim M_k.
pub fn modular_basis(k: u32, prec: usize) -> Result<Vec<QExpansion>> {
    let dim = dim_modular(k);
    if dim == 0 {
        return Ok(Vec::new());
    }
    if prec + 1 < dim {
        return Err(Error::PrecisionShortfall { needed: dim as u64 - 1, have: prec as u64 });
    }
    let (e4, e6) = (eisenstein(4, prec)?, eisenstein(6, prec)?);
    let mut rows: Matrix = monomials_e4_e6(k)
        .into_iter()
        .map(|(a, b)| e4.pow(a, prec).mul(&e6.pow(b, prec)).coeffs().to_vec())
        .collect();
    let pivots = rref(&mut rows);
    if pivots != (0..dim).collect::<Vec<_>>() {
        return Err(Error::LinearDependence(dim));
    }
    Ok(rows.into_iter().map(|c| QExpansion::new(k, c)).collect())
}

/// Echelonized basis of S_k with a(i) = delta_ij for 1 <= i <= dim S_k.
pub fn cusp_basis(k: u32, prec: usize) -> Result<Vec<QExpansion>> {
    let mut basis = modular_basis(k, prec)?;
    if basis.is_empty() {
        return Ok(basis);
    }
    basis.remove(0);
    Ok(basis)
}

/// A normalized Hecke eigenform (a(1) = 1) with coefficients in Q or Q(sqrt(d)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Newform {
    expansion: QExpansion,
    disc: i64,
}

impl Newform {
    pub fn weight(&self) -> u32 {
        self.expansion.weight()
    }

    pub fn prec(&self) -> usize {
        self.expansion.prec()
    }

    /// Discriminant of the Hecke field, 0 when it is Q.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn expansion(&self) -> &QExpansion {
        &self.expansion
    }

    pub fn a(&self, n: usize) -> &QuadElement {
        self.expansion.coeff(n)
    }

    pub fn conjugate(&self) -> Self {
        Self { expansion: self.expansion.conjugate(), disc: self.disc }
    }

    pub(crate) fn from_expansion(expansion: QExpansion) -> Self {
        let disc = expansion.disc();
        Self { expansion, disc }
    }
}

/// The pair (alpha + beta, alpha * beta) = (a(p), p^(k-1)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatakePair {
    pub p: u64,
    pub sum: QuadElement,
    pub product: Integer,
}

pub fn satake(f: &Newform, p: u64) -> Result<SatakePair> {
    let a = f
        .expansion
        .get(p as usize)
        .ok_or(Error::PrecisionShortfall { needed: p, have: f.prec() as u64 })?;
    Ok(SatakePair { p, sum: a.clone(), product: Integer::from(p).pow(f.weight() - 1) })
}

/// Matrix of T(p) on an echelonized cusp basis, acting on row vectors.
fn hecke_matrix(basis: &[QExpansion], p: u64) -> Result<Matrix> {
    let d = basis.len();
    basis
        .iter()
        .map(|b| {
            let t = b.hecke(p)?;
            if t.prec() < d {
                return Err(Error::PrecisionShortfall { needed: (p as usize * d) as u64, have: b.prec() as u64 });
            }
            Ok((1..=d).map(|i| t.coeff(i).clone()).collect())
        })
        .collect()
}

fn combine(basis: &[QExpansion], v: &[QuadElement]) -> QExpansion {
    let mut acc = QExpansion::zero(basis[0].weight(), basis[0].prec());
    for (b, c) in basis.iter().zip(v) {
        if !c.is_zero() {
            acc = acc.add(&b.scale(c)).expect("same weight");
        }
    }
    acc
}

fn normalize(f: QExpansion) -> Result<Newform> {
    let a1 = f.coeff(1).clone();
    if a1.is_zero() {
        return Err(Error::NoUnitCoefficient("eigenvector with a(1) = 0".into()));
    }
    let inv = a1.inverse().expect("nonzero");
    Ok(Newform::from_expansion(f.scale(&inv)))
}

/// Eigenvalues of a 2x2 rational matrix as elements of Q or Q(sqrt(d)).
pub(crate) fn quadratic_eigenvalues(m: &Matrix) -> Result<[QuadElement; 2]> {
    let cp = charpoly(m);
    let (c0, c1) = (cp[0].as_rational(), cp[1].as_rational());
    let (Some(c0), Some(c1)) = (c0, c1) else {
        return Err(Error::UnsupportedHeckeField(4));
    };
    // x^2 + c1 x + c0: roots (-c1 +- sqrt(c1^2 - 4 c0))/2.
    let disc = Rational::from(c1 * c1) - Rational::from(c0 * 4u32);
    let t = Rational::from(-c1);
    // Write disc = num/den = num*den/den^2 and split off squares.
    let (num, den) = disc.into_numer_denom();
    let (core, square) = squarefree_decomposition_big(&(num * &den));
    let s = Rational::from((square, den));
    let half = Rational::from((1, 2));
    if core == 1 || core == 0 {
        let r1 = Rational::from(&t + &s) * &half;
        let r2 = Rational::from(&t - &s) * &half;
        return Ok([QuadElement::rational(r1), QuadElement::rational(r2)]);
    }
    let d = core.to_i64().ok_or(Error::UnsupportedHeckeField(2))?;
    let x = Rational::from(&t * &half);
    let y = Rational::from(&s * &half);
    let plus = QuadElement::new(d, x.clone(), y.clone())?;
    let minus = QuadElement::new(d, x, -y)?;
    Ok([plus, minus])
}

/// Normalized Hecke eigenforms of weight k to precision `prec`.
///
/// Diagonalizes T(2) on the cusp space, falling back to T(3) if T(2) has a repeated
/// eigenvalue. When the Hecke field is quadratic the form with the positive square
/// root comes first and the second is its conjugate.
pub fn newforms(k: u32, prec: usize) -> Result<Vec<Newform>> {
    let d = dim_cusp(k);
    if d == 0 {
        return Ok(Vec::new());
    }
    if d > 2 {
        return Err(Error::UnsupportedHeckeField(d));
    }
    let work_prec = prec.max(3 * d + 3);
    let basis = cusp_basis(k, work_prec)?;
    if d == 1 {
        return Ok(vec![normalize(basis[0].truncate(prec))?]);
    }
    for p in [2u64, 3] {
        let m = hecke_matrix(&basis, p)?;
        let eig = quadratic_eigenvalues(&m)?;
        if eig[0] == eig[1] {
            continue;
        }
        let mut out = Vec::new();
        for lambda in &eig {
            let shifted: Matrix = m
                .iter()
                .zip(identity(d))
                .map(|(row, id)| row.iter().zip(id).map(|(a, e)| a - &(&e * lambda)).collect())
                .collect();
            let kern = left_kernel(&shifted);
            let v = kern.first().ok_or_else(|| Error::EigenvalueCollision("empty eigenspace".into()))?;
            out.push(normalize(combine(&basis, v).truncate(prec))?);
        }
        return Ok(out);
    }
    Err(Error::EigenvalueCollision(format!("T(2) and T(3) both degenerate in weight {k}")))
}
