use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Complete, Float, Integer};

use crate::characters::KroneckerCharacter;
use crate::error::{Error, Result};
use crate::qseries::Newform;

/// A numerical value with an absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct LValueReport {
    /// Evaluation point (0 for Petersson norms).
    pub s: u32,
    pub chi: i64,
    pub bits: u32,
    pub value: Float,
    pub err: Float,
    pub terms: usize,
    pub method: String,
}

impl LValueReport {
    /// Whether two reports of the same quantity agree within their combined bounds.
    pub fn agrees_with(&self, other: &LValueReport) -> bool {
        let diff = Float::with_val(self.value.prec().max(other.value.prec()), &self.value - &other.value);
        diff.abs() <= Float::with_val(64, &self.err + &other.err)
    }
}

fn working_prec(bits: u32) -> u32 {
    bits + 64
}

/// log2 of an upper bound for |a_n| (n^{-m}) Gamma(m, x) at x = c n, using
/// |a_n| <= 2 n^{w/2} and Gamma(m, x) <= m! e^{-x} (1 + x)^{m-1}.
fn log2_term_bound(n: f64, w: u32, m: u32, c: f64) -> f64 {
    let x = c * n;
    let log2_fact: f64 = (2..=m).map(|j| (j as f64).log2()).sum();
    1.0 + (w as f64 / 2.0) * n.log2() - m as f64 * x.log2() + log2_fact - x / std::f64::consts::LN_2
        + (m as f64 - 1.0) * (1.0 + x).log2()
}

/// Smallest cutoff n0 such that the tail sum over n > n0 of the bound is below 2^target,
/// together with log2 of the tail bound.
fn cutoff(w: u32, m: u32, c: f64, target: f64) -> (usize, f64) {
    let mut n0 = 1usize;
    loop {
        let n = n0 as f64 + 1.0;
        let g = log2_term_bound(n, w, m, c);
        let next = log2_term_bound(n + 1.0, w, m, c);
        let ratio = (next - g).exp2();
        if ratio < 1.0 && next <= g {
            let tail = g - (1.0 - ratio).log2();
            if tail < target {
                return (n0, tail);
            }
        }
        n0 += 1;
    }
}

/// Number of coefficients needed by [`lvalue_numeric`] for a form of weight `w`.
pub fn required_terms(w: u32, s: u32, chi: &KroneckerCharacter, bits: u32) -> usize {
    let a = 2.0 * std::f64::consts::PI / chi.conductor() as f64;
    let t = 16.0 / 17.0;
    let target = -(bits as f64) - 24.0;
    let (n1, _) = cutoff(w, s, a * t, target);
    let (n2, _) = cutoff(w, w - s, a * t, target);
    n1.max(n2)
}

/// Gamma(m, x) for a positive integer m: (m-1)! e^{-x} sum_{j<m} x^j/j!.
fn upper_gamma(m: u32, x: &Float) -> Float {
    let e = Float::with_val(x.prec(), -x).exp();
    upper_gamma_with_exp(m, x, &e)
}

/// As [`upper_gamma`] with e^{-x} supplied.
fn upper_gamma_with_exp(m: u32, x: &Float, exp_neg: &Float) -> Float {
    let prec = x.prec();
    // Horner form of sum_{j<m} x^j (m-1)!/j!, leading coefficient first.
    let mut sum = Float::with_val(prec, 1);
    let mut falling = Integer::from(1);
    for i in 1..m {
        falling *= m - i;
        sum *= x;
        sum += &falling;
    }
    sum * exp_neg
}

/// Lambda(s) of f (x) chi split at t: sum a_n chi(n) [(An)^{-s} Gamma(s, Ant)
/// + eps (An)^{s-w} Gamma(w-s, An/t)].
fn completed(coeffs: &[Float], chi: &KroneckerCharacter, w: u32, s: u32, eps: i32, t: &Float, n0: usize) -> (Float, Float) {
    let prec = t.prec();
    let a = Float::with_val(prec, Constant::Pi) * 2u32 / chi.conductor();
    let mut total = Float::with_val(prec, 0);
    let mut abs_total = Float::with_val(prec, 0);
    for n in 1..=n0 {
        let c = chi.eval(n as i64);
        if c == 0 || coeffs[n].is_zero() {
            continue;
        }
        let an = Float::with_val(prec, &a * n as u32);
        let x1 = Float::with_val(prec, &an * t);
        let x2 = Float::with_val(prec, &an / t);
        let p1 = upper_gamma(s, &x1) / Float::with_val(prec, an.clone().pow(s));
        let p2 = upper_gamma(w - s, &x2) / Float::with_val(prec, an.pow(w - s));
        let mut inner = if eps > 0 { p1 + p2 } else { p1 - p2 };
        inner *= &coeffs[n];
        if c < 0 {
            inner = -inner;
        }
        abs_total += Float::with_val(prec, inner.abs_ref());
        total += &inner;
    }
    (total, abs_total)
}

/// L(s, f (x) chi) at a critical integer s, for a primitive (or trivial) quadratic chi.
///
/// Uses the rapidly convergent series for the completed L-function of the twist (level
/// N^2, root number (-1)^{w/2} chi(-1)), with the tail bounded through Deligne's bound and
/// the series split at t = 1 checked against t = 17/16.
pub fn lvalue_numeric(f: &Newform, s: u32, chi: &KroneckerCharacter, bits: u32) -> Result<LValueReport> {
    lvalue_embedded(f, s, chi, bits, false)
}

/// As [`lvalue_numeric`], for the conjugate real embedding of the Hecke field when `conjugate`.
pub fn lvalue_embedded(f: &Newform, s: u32, chi: &KroneckerCharacter, bits: u32, conjugate: bool) -> Result<LValueReport> {
    let w = f.weight();
    if s == 0 || s >= w {
        return Err(Error::InvalidArgument(format!("s = {s} is not critical for weight {w}")));
    }
    if !chi.is_primitive() && !chi.is_trivial() {
        return Err(Error::NotPrimitive(chi.disc()));
    }
    let n0 = required_terms(w, s, chi, bits);
    if f.prec() < n0 {
        return Err(Error::PrecisionShortfall { needed: n0 as u64, have: f.prec() as u64 });
    }
    let prec = working_prec(bits);
    let coeffs: Vec<Float> = (0..=n0).map(|n| f.a(n).to_float(prec, conjugate)).collect();
    let eps = if (w / 2).is_multiple_of(2) { 1 } else { -1 } * chi.parity();

    let one = Float::with_val(prec, 1);
    let (lam, abs1) = completed(&coeffs, chi, w, s, eps, &one, n0);
    let t2 = Float::with_val(prec, 17) / 16u32;
    let (lam2, abs2) = completed(&coeffs, chi, w, s, eps, &t2, n0);

    let a = Float::with_val(prec, Constant::Pi) * 2u32 / chi.conductor();
    let gamma = Float::with_val(prec, Integer::factorial(s - 1).complete());
    let scale = Float::with_val(prec, a.pow(s)) / &gamma;

    // Tail (Deligne) plus rounding: each term carries O(w) roundings at `prec` bits.
    let c = 2.0 * std::f64::consts::PI / chi.conductor() as f64 * 16.0 / 17.0;
    let target = -(bits as f64) - 24.0;
    let tail = cutoff(w, s, c, target).1.exp2() + cutoff(w, w - s, c, target).1.exp2();
    let ulps = Float::with_val(64, 8 * (w as u64 + n0 as u64)) >> (prec as i32);
    let lam_err = Float::with_val(64, tail) + Float::with_val(64, abs1.max(&abs2) * &ulps);
    let err = Float::with_val(64, &lam_err * &scale) * 2u32;

    let diff = Float::with_val(prec, &lam - &lam2).abs();
    if diff > Float::with_val(64, &lam_err * 2u32) + (Float::with_val(64, 1u32) >> (bits as i32 - 8)) {
        return Err(Error::FunctionalEquation(format!(
            "split points disagree by {} at s = {s}, chi = {}",
            diff.to_f64(),
            chi.disc()
        )));
    }
    let value = Float::with_val(bits + 8, &lam * &scale);
    let err = err + (Float::with_val(64, value.abs_ref()) >> (bits as i32 + 7));
    Ok(LValueReport {
        s,
        chi: chi.disc(),
        bits,
        value,
        err,
        terms: n0,
        method: "smoothed completed series, split at t = 1 (self-test t = 17/16)".into(),
    })
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub(crate) fn gauss_legendre(n: usize, prec: u32) -> Vec<(Float, Float)> {
    // Nodes come in pairs +-x; only the positive half is solved for.
    let mut half = Vec::with_capacity(n.div_ceil(2));
    for i in 0..n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(prec, guess);
        if 2 * i + 1 == n {
            x.assign(0);
        } else {
            let mut steps = 0;
            loop {
                let (p, dp) = legendre(n, &x);
                let dx = Float::with_val(prec, &p / &dp);
                x -= &dx;
                steps += 1;
                if dx.is_zero() || dx.get_exp().unwrap_or(i32::MIN) < -(prec as i32) + 4 || steps > 100 {
                    break;
                }
            }
        }
        let (_, deriv) = legendre(n, &x);
        let one_minus = Float::with_val(prec, 1) - Float::with_val(prec, x.square_ref());
        let weight = Float::with_val(prec, 2) / (one_minus * Float::with_val(prec, deriv.square_ref()));
        half.push((x, weight));
    }
    let mut out = half.clone();
    for (x, w) in half.into_iter().rev() {
        if !x.is_zero() {
            out.push((-x, w));
        }
    }
    out
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for j in 2..=n {
        let j = j as u32;
        let p2 = (Float::with_val(prec, x * &p1) * (2 * j - 1) - Float::with_val(prec, &p0 * (j - 1))) / j;
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1).
    let num = (Float::with_val(prec, x * &p1) - &p0) * n as u32;
    let den = Float::with_val(prec, x.square_ref()) - 1u32;
    (p1, num / den)
}

/// <f, f> = int over SL_2(Z)\H of |f|^2 y^{w-2} dx dy.
///
/// Writing x = sin(theta) on the part of the fundamental domain above the unit circle,
/// <f, f> = 2 int_0^{pi/6} sum_{n,m} a_n a_m cos(2 pi (n-m) sin theta) G_{n+m}(cos theta) cos theta d theta
/// with G_M(y0) = Gamma(w-1, 2 pi M y0) / (2 pi M)^{w-1}; evaluated by Gauss-Legendre at
/// two node counts.
pub fn petersson_numeric(f: &Newform, bits: u32) -> Result<LValueReport> {
    petersson_embedded(f, bits, false)
}

pub fn petersson_embedded(f: &Newform, bits: u32, conjugate: bool) -> Result<LValueReport> {
    let w = f.weight();
    if w < 12 {
        return Err(Error::InvalidWeight { weight: w.into(), reason: "no cusp forms below weight 12" });
    }
    if bits > 4096 {
        return Err(Error::InvalidArgument("Petersson quadrature supports at most 4096 bits".into()));
    }
    let prec = working_prec(bits);
    // Rough size (w-1)!/(4 pi)^{w-1}, used to set a relative tail target.
    let log2_size: f64 = (2..w).map(|j| (j as f64).log2()).sum::<f64>()
        - (w as f64 - 1.0) * (4.0 * std::f64::consts::PI).log2();
    let target = log2_size - bits as f64 - 24.0;
    let y0 = 3f64.sqrt() / 2.0;
    let log2_tail_term = |m: f64| {
        let x = 2.0 * std::f64::consts::PI * m * y0;
        let log2_fact: f64 = (2..w - 1).map(|j| (j as f64).log2()).sum();
        (m - 1.0).log2() + 2.0 + w as f64 * (m / 2.0).log2() + log2_fact + ((w - 1) as f64).log2()
            - x / std::f64::consts::LN_2
            + (w as f64 - 2.0) * (1.0 + x).log2()
            - (w as f64 - 1.0) * (2.0 * std::f64::consts::PI * m).log2()
            + (std::f64::consts::PI / 3.0).log2()
    };
    let mut top = 2usize;
    let tail = loop {
        let g = log2_tail_term(top as f64 + 1.0);
        let next = log2_tail_term(top as f64 + 2.0);
        let ratio = (next - g).exp2();
        if ratio < 1.0 && next <= g {
            let tail = g - (1.0 - ratio).log2();
            if tail < target {
                break tail;
            }
        }
        top += 1;
    };
    let nmax = top - 1;
    if f.prec() < nmax {
        return Err(Error::PrecisionShortfall { needed: nmax as u64, have: f.prec() as u64 });
    }
    let b: Vec<Float> = (0..=nmax).map(|n| f.a(n).to_float(prec, conjugate)).collect();

    let base = (bits as usize / 5 + nmax / 2).max(40);
    let coarse = quadrature(&b, w, top, base, prec);
    let fine = quadrature(&b, w, top, base + base / 2, prec);
    let quad_err = Float::with_val(64, &coarse - &fine).abs();
    let ulps = Float::with_val(64, 16 * (w as u64 + top as u64)) >> (prec as i32);
    let value = Float::with_val(bits + 8, &fine);
    let rounding = Float::with_val(64, value.abs_ref()) >> (bits as i32 + 7);
    let err = quad_err + Float::with_val(64, tail.exp2()) + Float::with_val(64, fine.abs_ref()) * ulps + rounding;
    Ok(LValueReport {
        s: 0,
        chi: 1,
        bits,
        value,
        err,
        terms: nmax,
        method: format!("Gauss-Legendre on [0, pi/6], {} and {} nodes", base, base + base / 2),
    })
}

fn quadrature(b: &[Float], w: u32, top: usize, nodes: usize, prec: u32) -> Float {
    let nmax = b.len() - 1;
    // b_n b_m grouped by (n + m, |n - m|), each unordered pair once with multiplicity.
    let mut pairs: Vec<(usize, usize, Float)> = Vec::new();
    for n in 1..=nmax {
        for m in n..=nmax.min(top - n) {
            if b[n].is_zero() || b[m].is_zero() {
                continue;
            }
            let mut c = Float::with_val(prec, &b[n] * &b[m]);
            if m != n {
                c *= 2u32;
            }
            pairs.push((n + m, m - n, c));
        }
    }
    pairs.sort_by_key(|p| p.0);
    let pi = Float::with_val(prec, Constant::Pi);
    let half = Float::with_val(prec, &pi / 12u32);
    let mut total = Float::with_val(prec, 0);
    for (x, wt) in gauss_legendre(nodes, prec) {
        // theta in [0, pi/6]: theta = pi/12 (x + 1).
        let theta = Float::with_val(prec, &x + 1u32) * &half;
        let (sin, cos) = theta.sin_cos(Float::new(prec));
        let phi = Float::with_val(prec, &sin * &pi) * 2u32;
        let cphi = Float::with_val(prec, phi.cos_ref());
        let mut cosines = vec![Float::with_val(prec, 1), cphi.clone()];
        for d in 2..=nmax {
            let next = Float::with_val(prec, &cphi * &cosines[d - 1]) * 2u32 - &cosines[d - 2];
            cosines.push(next);
        }
        // e^{-2 pi M cos(theta)} by repeated multiplication.
        let step = Float::with_val(prec, -(Float::with_val(prec, &pi * &cos) * 2u32)).exp();
        let mut powers = vec![Float::with_val(prec, 1)];
        for j in 1..=top {
            let next = Float::with_val(prec, &powers[j - 1] * &step);
            powers.push(next);
        }
        let mut inner = Float::with_val(prec, 0);
        let mut acc = Float::with_val(prec, 0);
        for (i, (m, d, c)) in pairs.iter().enumerate() {
            acc += c * &cosines[*d];
            if pairs.get(i + 1).is_none_or(|next| next.0 != *m) {
                let tm = Float::with_val(prec, &pi * (2 * *m as u32));
                let y = Float::with_val(prec, &tm * &cos);
                let g = upper_gamma_with_exp(w - 1, &y, &powers[*m]) / tm.pow(w - 1);
                inner += &acc * &g;
                acc.assign(0);
            }
        }
        total += inner * &cos * &wt;
    }
    total * &half * 2u32
}
