//! Frozen weight-20 fixtures: the structure of M_20, the Hecke data of its eigenforms, and
//! the outcome of the lift/non-lift congruence scan.

use std::sync::OnceLock;

use skc_core::siegel::{reduced_triples, Triple};
use skc_core::siegel2::*;
use skc_core::{split_prime, Integer, QuadElement};

const D38: i64 = 63737521;

fn data() -> &'static (SiegelSpace, Vec<Eigenform>) {
    static DATA: OnceLock<(SiegelSpace, Vec<Eigenform>)> = OnceLock::new();
    DATA.get_or_init(|| {
        let s = space(20, 6).unwrap();
        let e = eigenforms(&s).unwrap();
        (s, e)
    })
}

fn quad(x: i64, y: i64) -> QuadElement {
    QuadElement::new(D38, x, y).unwrap()
}

fn factor(mut n: Integer) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in skc_core::arith::primes_up_to(1_000_000) {
        let mut e = 0;
        while n.is_divisible_u(p as u32) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    if n != 1 {
        out.push((n.to_u64().unwrap(), 1));
    }
    out
}

#[test]
fn dimensions() {
    let (s, e) = data();
    assert_eq!((s.dim(), s.cusp_dim(), s.maass_dim(), s.non_maass_dim()), (5, 3, 2, 1));
    assert_eq!(s.phi_rank(), 2);
    let kinds: Vec<FormKind> = e.iter().map(|x| x.kind).collect();
    assert_eq!(kinds, [FormKind::Maass, FormKind::Maass, FormKind::NonMaass]);
}

#[test]
fn eigenvalues() {
    let (_, e) = data();
    assert_eq!(e[2].lambda2, QuadElement::from_i64(-840960));
    assert_eq!(hecke_eigenvalue(&e[2].form, 3).unwrap(), QuadElement::from_i64(346935960));
    let lifts = [quad(689232, 48), quad(689232, -48)];
    assert!(lifts.contains(&e[0].lambda2) && lifts.contains(&e[1].lambda2));
    assert_eq!(e[0].lambda2, e[1].lambda2.conjugate());
    assert!(!e[2].relation.holds && e[0].relation.holds);
}

#[test]
fn eigenvalue_difference_norms() {
    let (_, e) = data();
    let d2 = (&e[0].lambda2 - &e[2].lambda2).norm();
    assert_eq!(factor(d2.numer().clone()), [(2, 15), (3, 3), (5, 1), (7, 1), (11, 1), (17, 1), (379, 1)]);
    let d3 = (&hecke_eigenvalue(&e[0].form, 3).unwrap() - &hecke_eigenvalue(&e[2].form, 3).unwrap()).norm();
    assert_eq!(factor(d3.numer().clone()), [(2, 20), (3, 8), (5, 1), (7, 1), (11, 1), (552241, 1)]);
}

#[test]
fn fourier_minors() {
    // Any Fourier congruence between the lift and G modulo a prime above l forces l to divide
    // every 2x2 minor against a fixed triple.
    let (_, e) = data();
    let (f, g) = (&e[0].form, &e[2].form);
    let a = Triple::new(1, 1, 1);
    let mut gcd = Integer::new();
    for t in reduced_triples(6) {
        let minor = &(&f.coeffs()[&t] * &g.coeffs()[&a]) - &(&f.coeffs()[&a] * &g.coeffs()[&t]);
        gcd.gcd_mut(minor.norm().numer());
    }
    assert_eq!(factor(gcd), [(2, 6), (3, 4), (5, 1), (7, 1), (11, 1), (19, 1)]);
}

#[test]
fn scan_above_38() {
    let (_, e) = data();
    let scan = scan_congruences(&e[0].form, &e[2].form, 38, 200, 4, 50).unwrap();
    assert!(scan.hits.is_empty(), "{:?}", scan.hits);
    assert!(scan.skipped.is_empty());
    // 379 splits in Q(sqrt(D38)); T(2) is congruent at one of the two ideals, T(3) is not.
    let ideals = split_prime(379, D38).unwrap();
    let ev: Vec<i64> = ideals
        .iter()
        .map(|p| eigenvalue_congruence(&e[0].lambda2, &e[2].lambda2, p, 50).unwrap().value)
        .collect();
    assert_eq!(ev.iter().sum::<i64>(), 1);
    for p in &ideals {
        let r = congruence_exponent(&e[0].form, &e[2].form, p, 4, CongruenceMode::Fourier, 50).unwrap();
        assert_eq!(r.exponent.value, 0);
    }
}

#[test]
fn congruences_below_the_range() {
    // The scan machinery does find congruences at small primes, and there the T(2)
    // eigenvalue exponent dominates the Fourier exponent.
    let (_, e) = data();
    let scan = scan_congruences(&e[0].form, &e[2].form, 1, 38, 4, 50).unwrap();
    let hits: Vec<(String, i64, i64)> = scan
        .hits
        .iter()
        .map(|h| (h.fourier.ideal.to_string(), h.fourier.exponent.value, h.eigenvalue.exponent.value))
        .collect();
    let ideal = |p: u64, root: u64| format!("({p}, (1+sqrt({D38}))/2 - {root})");
    assert_eq!(
        hits,
        [
            (ideal(2, 0), 1, 5),
            (ideal(2, 1), 5, 10),
            (ideal(5, 1), 1, 1),
            (ideal(7, 0), 1, 1),
            (ideal(11, 0), 1, 1),
        ]
    );
    let skipped: Vec<u64> = scan.skipped.iter().map(|(p, _)| p.p).collect();
    assert_eq!(skipped, [3, 19]);
}
