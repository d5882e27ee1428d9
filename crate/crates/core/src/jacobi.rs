//! Index-one Jacobi forms, the Kohnen plus space and the Shimura maps between them
//! and elliptic forms.
//!
//! For even weight and index one the coefficient c(n, r) depends only on the
//! discriminant D = 4n - r^2, so forms are stored as dense vectors indexed by D.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::arith::{divisors, fundamental_part, is_fundamental_discriminant, moebius, sigma};
use crate::characters::{dirichlet_l_neg, zeta_one_minus, KroneckerCharacter};
use crate::coeffring::QuadElement;
use crate::error::{Error, Result};
use crate::linalg::{rref, solve_left, Matrix};
use crate::qseries::{dim_cusp, dim_modular, modular_basis, Newform, QExpansion};

/// Cohen's function H(r, N).
pub fn hurwitz_h(r: u32, n: u64) -> Rational {
    assert!(r >= 1, "H(r, N) needs r >= 1");
    if n == 0 {
        return zeta_one_minus(2 * r);
    }
    if matches!(n % 4, 1 | 2) {
        return Rational::new();
    }
    let (d0, f0) = fundamental_part(-(n as i64)).expect("-N is a discriminant");
    let chi = KroneckerCharacter::new(d0).expect("fundamental");
    let mut s = Integer::new();
    for d in divisors(f0) {
        let mu = moebius(d);
        let c = chi.eval(d as i64);
        if mu == 0 || c == 0 {
            continue;
        }
        let term = Integer::from(d).pow(r - 1) * sigma(2 * r - 1, f0 / d);
        if mu * c > 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    dirichlet_l_neg(r - 1, &chi) * s
}

/// A Jacobi form of index one and even weight, by its coefficients c(D), 0 <= D <= prec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiForm {
    weight: u32,
    coeffs: Vec<QuadElement>,
}

fn in_support(d: u64) -> bool {
    matches!(d % 4, 0 | 3)
}

impl JacobiForm {
    pub fn new(weight: u32, coeffs: Vec<QuadElement>) -> Result<Self> {
        if weight % 2 == 1 {
            return Err(Error::InvalidWeight { weight: weight.into(), reason: "index-one Jacobi forms here have even weight" });
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("no coefficients".into()));
        }
        if let Some(d) = (0..coeffs.len()).find(|&d| !in_support(d as u64) && !coeffs[d].is_zero()) {
            return Err(Error::SupportViolation(d as u64));
        }
        Ok(Self { weight, coeffs })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Largest D with c(D) known.
    pub fn prec(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    /// c(D); zero for negative D.
    pub fn c(&self, d: i64) -> Option<&QuadElement> {
        static ZERO: std::sync::OnceLock<QuadElement> = std::sync::OnceLock::new();
        if d < 0 {
            return Some(ZERO.get_or_init(QuadElement::zero));
        }
        self.coeffs.get(d as usize)
    }

    pub fn coeffs(&self) -> &[QuadElement] {
        &self.coeffs
    }

    pub fn is_cusp(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn disc(&self) -> i64 {
        self.coeffs.iter().map(QuadElement::disc).find(|&d| d != 0).unwrap_or(0)
    }

    pub fn truncate(&self, prec: u64) -> Self {
        let n = (prec as usize + 1).min(self.coeffs.len());
        Self { weight: self.weight, coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn scale(&self, c: &QuadElement) -> Self {
        Self { weight: self.weight, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch(self.weight, other.weight));
        }
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n).map(|d| &self.coeffs[d] + &other.coeffs[d]).collect();
        Ok(Self { weight: self.weight, coeffs })
    }

    pub fn conjugate(&self) -> Self {
        Self { weight: self.weight, coeffs: self.coeffs.iter().map(QuadElement::conjugate).collect() }
    }

    /// The product with an elliptic form: c(D) = sum_j a_f(j) c(D - 4j).
    pub fn mul_elliptic(&self, f: &QExpansion) -> Self {
        let prec = self.prec().min(4 * f.prec() as u64 + 3) as usize;
        let mut coeffs = vec![QuadElement::zero(); prec + 1];
        for (j, a) in f.coeffs().iter().enumerate() {
            if a.is_zero() || 4 * j > prec {
                continue;
            }
            for d in 4 * j..=prec {
                let c = &self.coeffs[d - 4 * j];
                if !c.is_zero() {
                    coeffs[d] += &(a * c);
                }
            }
        }
        Self { weight: self.weight + f.weight(), coeffs }
    }
}

/// The Jacobi-Eisenstein series E_{k,1}: c(D) = H(k-1, D)/H(k-1, 0).
pub fn jacobi_eisenstein(k: u32, prec: u64) -> Result<JacobiForm> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidWeight { weight: k.into(), reason: "E_{k,1} needs even k >= 4" });
    }
    let h0 = hurwitz_h(k - 1, 0);
    let coeffs = (0..=prec)
        .map(|d| QuadElement::rational(hurwitz_h(k - 1, d) / &h0))
        .collect();
    JacobiForm::new(k, coeffs)
}

/// Columns D = 0, 3, 4, 7, 8, ... up to `prec`.
fn support_columns(prec: u64) -> Vec<usize> {
    (0..=prec).filter(|&d| in_support(d)).map(|d| d as usize).collect()
}

/// dim J_{k,1}^cusp for even k.
pub fn jacobi_cusp_dim(k: u32) -> usize {
    if k < 10 || k % 2 == 1 {
        return 0;
    }
    dim_modular(k - 4) + dim_modular(k - 6) - 1
}

/// Echelonized basis of J_{k,1}^cusp built from M_{k-4} E_{4,1} + M_{k-6} E_{6,1}.
///
/// The basis is reduced on the smallest discriminants, so for one-dimensional spaces the
/// single form has c(3) = 1.
pub fn jacobi_cusp_basis(k: u32, prec: u64) -> Result<Vec<JacobiForm>> {
    if k % 2 == 1 {
        return Err(Error::InvalidWeight { weight: k.into(), reason: "odd weight" });
    }
    let dim = jacobi_cusp_dim(k);
    if dim == 0 {
        return Ok(Vec::new());
    }
    let eprec = (prec / 4) as usize + 1;
    let e41 = jacobi_eisenstein(4, prec)?;
    let e61 = jacobi_eisenstein(6, prec)?;
    let mut gens = Vec::new();
    for g in modular_basis(k - 4, eprec)? {
        gens.push(e41.mul_elliptic(&g));
    }
    for g in modular_basis(k - 6, eprec)? {
        gens.push(e61.mul_elliptic(&g));
    }
    let cols = support_columns(prec);
    let mut rows: Matrix = gens.iter().map(|g| cols.iter().map(|&c| g.coeffs[c].clone()).collect()).collect();
    let pivots = rref(&mut rows);
    if pivots.len() != gens.len() || pivots.first() != Some(&0) {
        return Err(Error::LinearDependence(gens.len()));
    }
    let basis: Vec<JacobiForm> = rows
        .into_iter()
        .skip(1)
        .map(|row| {
            let mut coeffs = vec![QuadElement::zero(); prec as usize + 1];
            for (v, &c) in row.into_iter().zip(&cols) {
                coeffs[c] = v;
            }
            JacobiForm { weight: k, coeffs }
        })
        .collect();
    debug_assert_eq!(basis.len(), dim);
    Ok(basis)
}

/// A form in the Kohnen plus space of weight k - 1/2 (k even), by c(n), 0 <= n <= prec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlusForm {
    /// The integral weight k of the matching Jacobi forms.
    jacobi_weight: u32,
    coeffs: Vec<QuadElement>,
}

impl PlusForm {
    pub fn new(jacobi_weight: u32, coeffs: Vec<QuadElement>) -> Result<Self> {
        if jacobi_weight % 2 == 1 {
            return Err(Error::InvalidWeight { weight: jacobi_weight.into(), reason: "odd weight" });
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("no coefficients".into()));
        }
        // (-1)^(k-1) n = -n must be 0 or 1 mod 4.
        if let Some(n) = (0..coeffs.len()).find(|&n| !in_support(n as u64) && !coeffs[n].is_zero()) {
            return Err(Error::SupportViolation(n as u64));
        }
        Ok(Self { jacobi_weight, coeffs })
    }

    /// The weight as (numerator, 2): k - 1/2 = (2k - 1)/2.
    pub fn weight_numerator(&self) -> u32 {
        2 * self.jacobi_weight - 1
    }

    pub fn jacobi_weight(&self) -> u32 {
        self.jacobi_weight
    }

    pub fn prec(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn c(&self, n: u64) -> Option<&QuadElement> {
        self.coeffs.get(n as usize)
    }

    pub fn coeffs(&self) -> &[QuadElement] {
        &self.coeffs
    }
}

pub fn ez_to_plus(phi: &JacobiForm) -> PlusForm {
    PlusForm { jacobi_weight: phi.weight, coeffs: phi.coeffs.clone() }
}

pub fn plus_to_ez(g: &PlusForm) -> Result<JacobiForm> {
    JacobiForm::new(g.jacobi_weight, g.coeffs.clone())
}

/// zeta_D g = sum_n (sum_{d | n} (D/d) d^(k-2) c_g(|D| n^2/d^2)) q^n, of weight 2k - 2.
pub fn shimura_zeta(g: &PlusForm, disc: i64, prec: usize) -> Result<QExpansion> {
    if !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc));
    }
    let k = g.jacobi_weight;
    // (-1)^(k-1) D > 0 with k even.
    if disc >= 0 {
        return Err(Error::InvalidArgument(format!("D = {disc} has the wrong sign for weight {k}")));
    }
    let abs_d = disc.unsigned_abs();
    let needed = abs_d * (prec as u64).pow(2);
    if needed > g.prec() {
        return Err(Error::PrecisionShortfall { needed, have: g.prec() });
    }
    let chi = KroneckerCharacter::new(disc)?;
    let mut coeffs = vec![QuadElement::zero(); prec + 1];
    for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
        let n = n as u64;
        let mut acc = QuadElement::zero();
        for d in divisors(n) {
            let c = chi.eval(d as i64);
            if c == 0 {
                continue;
            }
            let idx = abs_d * (n / d).pow(2);
            let coeff = &g.coeffs[idx as usize];
            if coeff.is_zero() {
                continue;
            }
            let w = Integer::from(d).pow(k - 2) * c;
            acc += &coeff.mul_integer(&w);
        }
        *slot = acc;
    }
    Ok(QExpansion::new(2 * k - 2, coeffs))
}

/// Normalizes so that c(3) = 1, or the first nonzero coefficient is 1 when c(3) = 0.
fn normalize_jacobi(phi: JacobiForm) -> JacobiForm {
    let Some(lead) = phi.coeffs.iter().find(|c| !c.is_zero()) else {
        return phi;
    };
    let lead = if phi.coeffs.len() > 3 && !phi.coeffs[3].is_zero() { &phi.coeffs[3] } else { lead };
    let inv = lead.inverse().expect("nonzero");
    phi.scale(&inv)
}

/// Candidate discriminants for the inverse Shimura map, in order of use.
const SHIMURA_DISCS: [i64; 8] = [-3, -4, -7, -8, -11, -15, -19, -20];

/// The Jacobi cusp form whose Shimura images are multiples of the newform `f`,
/// normalized by c(3) = 1 when possible, with coefficients through D = `prec`.
pub fn inverse_shimura(f: &Newform, prec: u64) -> Result<JacobiForm> {
    let w = f.weight();
    if w % 4 != 2 {
        return Err(Error::InvalidWeight { weight: w.into(), reason: "newform weight must be 2k - 2 with k even" });
    }
    let k = (w + 2) / 2;
    let dim = jacobi_cusp_dim(k);
    if dim != dim_cusp(w) {
        return Err(Error::DimensionMismatch(format!("J_{k},1 has dimension {dim}, S_{w} has {}", dim_cusp(w))));
    }
    if dim == 1 {
        let basis = jacobi_cusp_basis(k, prec.max(3))?;
        return Ok(normalize_jacobi(basis[0].truncate(prec.max(3))).truncate(prec));
    }
    let out_prec = dim;
    let need = 20 * (out_prec as u64).pow(2);
    let basis = jacobi_cusp_basis(k, prec.max(need))?;
    let nf = crate::qseries::newforms(w, out_prec)?;
    let nf_rows: Matrix = nf.iter().map(|g| g.expansion().coeffs()[1..=out_prec].to_vec()).collect();
    for disc in SHIMURA_DISCS {
        // Coordinates of each zeta_D(basis_i) in the newform basis.
        let mut u: Matrix = Vec::new();
        for psi in &basis {
            let h = shimura_zeta(&ez_to_plus(psi), disc, out_prec)?;
            let row = solve_left(&nf_rows, &h.coeffs()[1..=out_prec])
                .ok_or_else(|| Error::DimensionMismatch("Shimura image outside the newform span".into()))?;
            u.push(row);
        }
        let target: Vec<QuadElement> = nf
            .iter()
            .map(|g| {
                let same = g.expansion().truncate(out_prec) == f.expansion().truncate(out_prec);
                if same { QuadElement::one() } else { QuadElement::zero() }
            })
            .collect();
        if target.iter().all(QuadElement::is_zero) {
            return Err(Error::InvalidArgument("form is not a level-one newform".into()));
        }
        let Some(c) = solve_left(&u, &target) else {
            continue;
        };
        let mut phi = JacobiForm { weight: k, coeffs: vec![QuadElement::zero(); basis[0].coeffs.len()] };
        for (ci, psi) in c.iter().zip(&basis) {
            if !ci.is_zero() {
                phi = phi.add(&psi.scale(ci))?;
            }
        }
        return Ok(normalize_jacobi(phi).truncate(prec));
    }
    Err(Error::EigenvalueCollision("no discriminant separates the newforms".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn ints(phi: &JacobiForm, ds: &[usize]) -> Vec<i64> {
        ds.iter().map(|&d| phi.coeffs[d].x().to_f64() as i64).collect()
    }

    #[test]
    fn cohen_values() {
        assert_eq!(hurwitz_h(3, 0), q(-1, 252));
        assert_eq!(hurwitz_h(1, 3), q(1, 3));
        assert_eq!(hurwitz_h(1, 4), q(1, 2));
        assert_eq!(hurwitz_h(1, 12), q(4, 3));
        assert_eq!(hurwitz_h(2, 5), 0);
        assert_eq!(hurwitz_h(2, 6), 0);
    }

    #[test]
    fn eisenstein_jacobi() {
        let e4 = jacobi_eisenstein(4, 12).unwrap();
        assert_eq!(ints(&e4, &[0, 3, 4, 7, 8, 11, 12]), vec![1, 56, 126, 576, 756, 1512, 2072]);
        let e6 = jacobi_eisenstein(6, 4).unwrap();
        assert_eq!(ints(&e6, &[0, 3, 4]), vec![1, -88, -330]);
        assert!(e4.coeffs[1].is_zero() && e4.coeffs[2].is_zero());
    }

    #[test]
    fn phi10() {
        let b = jacobi_cusp_basis(10, 12).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(ints(&b[0], &[0, 3, 4, 7, 8, 11, 12]), vec![0, 1, -2, -16, 36, 99, -272]);
        assert_eq!(jacobi_cusp_basis(12, 12).unwrap().len(), 1);
    }

    #[test]
    fn shimura_of_phi10_is_f18() {
        let phi = &jacobi_cusp_basis(10, 3 * 16).unwrap()[0];
        let h = shimura_zeta(&ez_to_plus(phi), -3, 4).unwrap();
        assert_eq!(*h.coeff(1), QuadElement::one());
        assert_eq!(*h.coeff(2), QuadElement::from_i64(-528));
        assert!(matches!(shimura_zeta(&ez_to_plus(phi), -3, 5), Err(Error::PrecisionShortfall { .. })));
        assert!(matches!(shimura_zeta(&ez_to_plus(phi), -12, 2), Err(Error::NotFundamental(-12))));
    }

    #[test]
    fn plus_round_trip() {
        let phi = jacobi_cusp_basis(12, 20).unwrap().remove(0);
        let g = ez_to_plus(&phi);
        assert_eq!(*g.c(3).unwrap(), QuadElement::one());
        assert_eq!(plus_to_ez(&g).unwrap(), phi);
        let mut bad = g.coeffs().to_vec();
        bad[5] = QuadElement::one();
        assert_eq!(PlusForm::new(12, bad), Err(Error::SupportViolation(5)));
    }
}
