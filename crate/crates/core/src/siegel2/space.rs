use std::collections::{BTreeMap, HashMap};

use rug::ops::Pow;
use rug::Integer;
use serde::{Deserialize, Serialize};

use super::{constant, hecke_t2, phi, siegel_mul};
use crate::coeffring::QuadElement;
use crate::error::{Error, Result};
use crate::jacobi::jacobi_cusp_basis;
use crate::linalg::{left_kernel, poly_at_matrix, primitive_integral, rank, rref, solve_left, Matrix};
use crate::qseries::{newforms, quadratic_eigenvalues, Newform};
use crate::siegel::{reduced_triples, SiegelForm};
use crate::sklift::{maass_lift, maass_lift_eisenstein, maass_relation_check, sk_lift, MaassReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    NonCusp,
    Maass,
    NonMaass,
}

/// M_k(Sp_4(Z)) split as (non-cusp part) + (Maass spezialschar) + (non-Maass complement).
///
/// Basis forms are rational and carry coefficients on the box `2 * prec`, which is
/// what T(2) needs to produce images on the box `prec`.
#[derive(Clone, Debug)]
pub struct SiegelSpace {
    weight: u32,
    prec: u64,
    monomials: Vec<[u32; 4]>,
    phi_rank: usize,
    basis: Vec<SiegelForm>,
    kinds: Vec<FormKind>,
    /// Echelonized cusp basis; `t2` acts on coordinates in it.
    cusp: Vec<SiegelForm>,
    t2: Matrix,
    lifts: Vec<(Newform, SiegelForm)>,
}

impl SiegelSpace {
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    /// Exponents (a, b, c, d) of E4^a E6^b chi10^c chi12^d.
    pub fn monomials(&self) -> &[[u32; 4]] {
        &self.monomials
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Rank of the Phi-operator on the monomials.
    pub fn phi_rank(&self) -> usize {
        self.phi_rank
    }

    pub fn cusp_dim(&self) -> usize {
        self.cusp.len()
    }

    pub fn maass_dim(&self) -> usize {
        self.kinds.iter().filter(|k| **k == FormKind::Maass).count()
    }

    pub fn non_maass_dim(&self) -> usize {
        self.kinds.iter().filter(|k| **k == FormKind::NonMaass).count()
    }

    pub fn basis(&self) -> &[SiegelForm] {
        &self.basis
    }

    pub fn kinds(&self) -> &[FormKind] {
        &self.kinds
    }

    pub fn forms_of(&self, kind: FormKind) -> Vec<&SiegelForm> {
        self.basis.iter().zip(&self.kinds).filter(|(_, k)| **k == kind).map(|(f, _)| f).collect()
    }

    pub fn cusp_basis(&self) -> &[SiegelForm] {
        &self.cusp
    }

    /// T(2) on the cusp basis, acting on row vectors.
    pub fn t2_matrix(&self) -> &Matrix {
        &self.t2
    }

    /// Newforms of weight 2k - 2 with their lifts (box `2 * prec`).
    pub fn lifts(&self) -> &[(Newform, SiegelForm)] {
        &self.lifts
    }

    /// Coordinates of a form in the echelonized cusp basis, read off the box `prec`.
    pub fn cusp_coordinates(&self, f: &SiegelForm) -> Option<Vec<QuadElement>> {
        let rows: Matrix = self.cusp.iter().map(|c| c.box_vector(self.prec)).collect();
        solve_left(&rows, &f.box_vector(self.prec))
    }
}

fn monomial_exponents(k: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for d in 0..=k / 12 {
        for c in 0..=(k - 12 * d) / 10 {
            let rest = k - 12 * d - 10 * c;
            for b in 0..=rest / 6 {
                if (rest - 6 * b).is_multiple_of(4) {
                    out.push([(rest - 6 * b) / 4, b, c, d]);
                }
            }
        }
    }
    out.sort_by(|x, y| y.cmp(x));
    out
}

const GENERATOR_WEIGHTS: [u32; 4] = [4, 6, 10, 12];

fn generator(i: usize, prec: u64) -> Result<SiegelForm> {
    let k = GENERATOR_WEIGHTS[i];
    let f = if i < 2 {
        maass_lift_eisenstein(k, prec)?
    } else {
        let phi = jacobi_cusp_basis(k, 4 * prec * prec)?.remove(0);
        maass_lift(&phi, prec)?
    };
    Ok(f.truncate(prec))
}

fn form_from_vector(weight: u32, prec: u64, v: &[QuadElement]) -> SiegelForm {
    let coeffs: BTreeMap<_, _> = reduced_triples(prec).into_iter().zip(v.iter().cloned()).collect();
    SiegelForm::new(weight, prec, coeffs).expect("complete box")
}

fn combine(weight: u32, prec: u64, forms: &[SiegelForm], c: &[QuadElement]) -> SiegelForm {
    let len = reduced_triples(prec).len();
    let mut acc = vec![QuadElement::zero(); len];
    for (f, ci) in forms.iter().zip(c) {
        if ci.is_zero() {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(f.box_vector(prec)) {
            if !x.is_zero() {
                *a += &(ci * &x);
            }
        }
    }
    form_from_vector(weight, prec, &acc)
}

/// Minimal polynomial over Q of the T(2) eigenvalues of the given lifts, lowest degree first.
fn maass_polynomial(lambdas: &[QuadElement]) -> Vec<QuadElement> {
    let mut poly = vec![QuadElement::one()];
    let mut seen: Vec<QuadElement> = Vec::new();
    for l in lambdas {
        if seen.contains(l) {
            continue;
        }
        seen.push(l.clone());
        let factor = if l.is_rational() {
            vec![-l, QuadElement::one()]
        } else {
            seen.push(l.conjugate());
            vec![QuadElement::rational(l.norm()), QuadElement::rational(-l.trace()), QuadElement::one()]
        };
        let mut next = vec![QuadElement::zero(); poly.len() + factor.len() - 1];
        for (i, a) in poly.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                next[i + j] += &(a * b);
            }
        }
        poly = next;
    }
    poly
}

/// T(2) eigenvalue of the lift of f: a_f(2) + 2^(k-1) + 2^(k-2).
pub(crate) fn lift_eigenvalue(f: &Newform, k: u32) -> QuadElement {
    let shift = Integer::from(2).pow(k - 1) + Integer::from(2).pow(k - 2);
    f.a(2) + &QuadElement::from(shift)
}

/// Builds M_k(Sp_4(Z)) for even k >= 4 on the box `prec`; generators are computed on
/// the box `2 * prec`.
pub fn space(k: u32, prec: u64) -> Result<SiegelSpace> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidWeight { weight: k.into(), reason: "spaces need even k >= 4" });
    }
    if prec == 0 {
        return Err(Error::InvalidArgument("box precision must be positive".into()));
    }
    let gp = 2 * prec;
    let monomials = monomial_exponents(k);

    let mut gens: Vec<Option<SiegelForm>> = vec![None; 4];
    let mut cache: HashMap<[u32; 4], SiegelForm> = HashMap::new();
    cache.insert([0; 4], constant(QuadElement::one(), gp));
    let mut forms = Vec::new();
    for e in &monomials {
        forms.push(monomial(*e, gp, &mut gens, &mut cache)?);
    }

    let small: Matrix = forms.iter().map(|f| f.box_vector(prec)).collect();
    if rank(&small) < forms.len() {
        return Err(Error::LinearDependence(forms.len()));
    }

    // Cusp forms: combinations of monomials killed by Phi.
    let phis: Matrix = forms.iter().map(|f| phi(&f.truncate(prec)).coeffs().to_vec()).collect();
    let phi_rank = rank(&phis);
    let mut cusp_rows: Matrix = left_kernel(&phis)
        .iter()
        .map(|c| combine(k, gp, &forms, c).box_vector(gp))
        .collect();
    let pivots = rref(&mut cusp_rows);
    let small_len = reduced_triples(prec).len();
    if pivots.iter().any(|&p| p >= small_len) {
        return Err(Error::LinearDependence(cusp_rows.len()));
    }
    let cusp: Vec<SiegelForm> = cusp_rows.iter().map(|v| form_from_vector(k, gp, v)).collect();
    let small_cusp: Matrix = cusp_rows.iter().map(|v| v[..small_len].to_vec()).collect();

    // Non-cusp complement: monomials raising the Phi-rank.
    let mut noncusp = Vec::new();
    let mut acc: Matrix = Vec::new();
    for (f, row) in forms.iter().zip(&phis) {
        acc.push(row.clone());
        if rank(&acc) > noncusp.len() {
            noncusp.push(f.clone());
        } else {
            acc.pop();
        }
    }

    let mut t2 = Vec::new();
    for c in &cusp {
        let image = hecke_t2(c)?;
        if !phi(&image).is_zero() {
            return Err(Error::DimensionMismatch("T(2) image of a cusp form is not cuspidal".into()));
        }
        let row = solve_left(&small_cusp, &image.box_vector(prec))
            .ok_or_else(|| Error::DimensionMismatch("T(2) image outside the cusp span".into()))?;
        t2.push(row);
    }

    let w = 2 * k - 2;
    let nfs = newforms(w, 8)?;
    let mut lifts = Vec::new();
    let mut lambdas = Vec::new();
    for f in nfs {
        let lift = sk_lift(&f, gp)?;
        let lambda = lift_eigenvalue(&f, k);
        let image = hecke_t2(&lift)?;
        if image != lift.truncate(prec).scale(&lambda) {
            return Err(Error::DimensionMismatch(format!("lift of weight {w} is not a T(2) eigenform")));
        }
        lambdas.push(lambda);
        lifts.push((f, lift));
    }

    let poly = maass_polynomial(&lambdas);
    let annihilator = poly_at_matrix(&poly, &t2);
    let maass_coords = left_kernel(&annihilator);
    if maass_coords.len() != lifts.len() {
        return Err(Error::EigenvalueCollision(format!(
            "Maass eigenvalues annihilate {} dimensions, {} lifts",
            maass_coords.len(),
            lifts.len()
        )));
    }
    for (_, lift) in &lifts {
        let c = solve_left(&small_cusp, &lift.box_vector(prec))
            .ok_or_else(|| Error::DimensionMismatch("lift outside the cusp span".into()))?;
        if solve_left(&maass_coords, &c).is_none() {
            return Err(Error::DimensionMismatch("lift outside the Maass eigenspaces".into()));
        }
    }
    let mut nm_coords = annihilator.clone();
    let nm_rank = rref(&mut nm_coords).len();
    nm_coords.truncate(nm_rank);
    if nm_rank + lifts.len() != cusp.len() {
        return Err(Error::DimensionMismatch(format!(
            "dim S_{k} = {} but Maass {} + non-Maass {}",
            cusp.len(),
            lifts.len(),
            nm_rank
        )));
    }

    let mut basis = Vec::new();
    let mut kinds = Vec::new();
    for f in noncusp {
        basis.push(f);
        kinds.push(FormKind::NonCusp);
    }
    for c in &maass_coords {
        basis.push(combine(k, gp, &cusp, &primitive_integral(c)));
        kinds.push(FormKind::Maass);
    }
    for c in &nm_coords {
        basis.push(combine(k, gp, &cusp, &primitive_integral(c)));
        kinds.push(FormKind::NonMaass);
    }
    Ok(SiegelSpace { weight: k, prec, monomials, phi_rank, basis, kinds, cusp, t2, lifts })
}

fn monomial(
    e: [u32; 4],
    prec: u64,
    gens: &mut [Option<SiegelForm>],
    cache: &mut HashMap<[u32; 4], SiegelForm>,
) -> Result<SiegelForm> {
    if let Some(f) = cache.get(&e) {
        return Ok(f.clone());
    }
    let i = e.iter().position(|&x| x > 0).expect("nonzero exponent");
    let mut smaller = e;
    smaller[i] -= 1;
    let rest = monomial(smaller, prec, gens, cache)?;
    if gens[i].is_none() {
        gens[i] = Some(generator(i, prec)?);
    }
    let f = siegel_mul(&rest, gens[i].as_ref().expect("generator"))?;
    cache.insert(e, f.clone());
    Ok(f)
}

/// A T(2) eigenform in a cusp space.
#[derive(Clone, Debug)]
pub struct Eigenform {
    pub form: SiegelForm,
    pub lambda2: QuadElement,
    pub kind: FormKind,
    pub relation: MaassReport,
}

/// T(2) eigenforms of the cusp space: the Saito-Kurokawa lifts followed by the
/// non-Maass eigenforms, each scaled to primitive integral coefficients.
pub fn eigenforms(space: &SiegelSpace) -> Result<Vec<Eigenform>> {
    let k = space.weight;
    let gp = 2 * space.prec;
    let mut out = Vec::new();
    for (f, lift) in &space.lifts {
        let form = scale_primitive(&lift.truncate(gp));
        let relation = maass_relation_check(&form, space.prec);
        if !relation.holds {
            return Err(Error::DimensionMismatch("lift fails the Maass relation".into()));
        }
        out.push(Eigenform { form, lambda2: lift_eigenvalue(f, k), kind: FormKind::Maass, relation });
    }

    let nm = space.forms_of(FormKind::NonMaass);
    if nm.is_empty() {
        return Ok(out);
    }
    let nm_rows: Matrix = nm
        .iter()
        .map(|f| space.cusp_coordinates(f).expect("non-Maass basis lies in the cusp space"))
        .collect();
    let restricted: Matrix = nm_rows
        .iter()
        .map(|r| {
            let image = crate::linalg::vec_mat(r, &space.t2);
            solve_left(&nm_rows, &image).expect("non-Maass part is T(2)-stable")
        })
        .collect();
    let mut pairs: Vec<(QuadElement, Vec<QuadElement>)> = Vec::new();
    match restricted.len() {
        1 => pairs.push((restricted[0][0].clone(), vec![QuadElement::one()])),
        2 => {
            for lambda in quadratic_eigenvalues(&restricted)? {
                let shifted: Matrix = restricted
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, a)| if i == j { a - &lambda } else { a.clone() })
                            .collect()
                    })
                    .collect();
                let v = left_kernel(&shifted)
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::EigenvalueCollision("empty non-Maass eigenspace".into()))?;
                pairs.push((lambda, v));
            }
            if pairs[0].0 == pairs[1].0 {
                return Err(Error::EigenvalueCollision("repeated non-Maass eigenvalue".into()));
            }
        }
        d => return Err(Error::UnsupportedHeckeField(d)),
    }
    let nm_forms: Vec<SiegelForm> = nm.into_iter().cloned().collect();
    for (lambda, v) in pairs {
        let form = scale_primitive(&combine(k, gp, &nm_forms, &v));
        let relation = maass_relation_check(&form, space.prec);
        if relation.holds {
            return Err(Error::DimensionMismatch("non-Maass eigenform satisfies the Maass relation".into()));
        }
        out.push(Eigenform { form, lambda2: lambda, kind: FormKind::NonMaass, relation });
    }
    Ok(out)
}

fn scale_primitive(f: &SiegelForm) -> SiegelForm {
    let v = f.box_vector(f.prec());
    let w = primitive_integral(&v);
    let (i, x) = v.iter().enumerate().find(|(_, x)| !x.is_zero()).expect("nonzero form");
    let ratio = &w[i] / x;
    if ratio.is_rational() && *ratio.x() == 1 {
        return f.clone();
    }
    f.scale(&ratio)
}
