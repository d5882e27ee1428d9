use std::sync::OnceLock;

use proptest::prelude::*;
use skc_core::characters::KroneckerCharacter;
use skc_core::coeffring::IdealKind;
use skc_core::lfun::*;
use skc_core::qseries::{newforms, Newform};
use skc_core::{Float, QuadElement};

fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    skc_core::arith::primes_up_to(hi).into_iter().filter(|&p| p > lo).collect()
}

fn newform(w: u32, terms: usize) -> Newform {
    newforms(w, terms).unwrap().remove(0)
}

#[test]
fn standard_identity_grid() {
    let chars = [1i64, 5, -4];
    for k in [10u32, 12] {
        let f = newform(2 * k - 2, 6);
        for l in [2u64, 3, 5] {
            for d in chars {
                let chi = KroneckerCharacter::new(d).unwrap();
                if chi.eval(l as i64) == 0 {
                    assert!(standard_factorization_check(&f, l, &chi).is_err());
                    continue;
                }
                let check = standard_factorization_check(&f, l, &chi).unwrap();
                assert!(check.holds, "k = {k}, l = {l}, chi = {d}: {check:?}");
                assert_eq!(check.lhs.len(), 6);
            }
        }
    }
}

#[test]
fn spinor_factor_matches_eigenvalue() {
    // The linear coefficient of the spinor factor is minus the T(p) eigenvalue of the lift.
    let f = newform(18, 10);
    for (p, lambda) in [(2u64, 240i64), (3, -4284 + 19683 + 6561)] {
        let e = spinor_euler_sk(&f, p).unwrap();
        assert_eq!(e.coeffs[1], QuadElement::from_i64(-lambda));
    }
}

#[test]
fn kohnen_zagier_independence() {
    for k in [10u32, 12] {
        let f = newform(2 * k - 2, 400);
        for (d1, d2) in [(-3i64, -4i64), (-4, -7), (-7, -8), (-3, -8)] {
            let r = kz_consistency(&f, k, d1, d2, 128).unwrap();
            assert!(r.holds, "k = {k}: {r:?}");
            assert!(r.err < 1e-30);
        }
    }
    let f = newform(18, 400);
    assert!(kohnen_zagier_ratio(&f, 10, 5, 64).is_err());
    assert!(kohnen_zagier_ratio(&f, 10, -12, 64).is_err());
}

#[test]
fn lvalues_agree_across_precisions() {
    let f = newform(18, 300);
    for (s, d) in [(10u32, 1i64), (1, 5), (2, 5), (9, -3)] {
        let chi = KroneckerCharacter::new(d).unwrap();
        let lo = lvalue_numeric(&f, s, &chi, 96).unwrap();
        let hi = lvalue_numeric(&f, s, &chi, 192).unwrap();
        assert!(lo.agrees_with(&hi), "s = {s}, chi = {d}");
        assert!(hi.err < Float::with_val(64, 1u32) >> 150i32);
    }
}

#[test]
fn script_l_at_weight_ten() {
    let chi = KroneckerCharacter::new(5).unwrap();
    let f = newform(18, script_l_terms(10, -3, &chi, 128).unwrap());
    let primes = primes_in(18, 100);
    let r = script_l_valuation(10, &f, -3, &chi, &primes, 128).unwrap();
    assert_eq!(r.pi_exponent, Some(-2));
    // 2^45 3^2 5^2 7^3 11^2 13^2 17 19^2 401.
    assert_eq!(r.value.as_deref(), Some("136646657796422652903869644800/1"));
    let nonzero: Vec<(u64, i64)> =
        r.valuations.iter().filter(|v| v.ord != Some(0)).map(|v| (v.ideal.p, v.ord.unwrap())).collect();
    assert_eq!(nonzero, [(19, 2)]);
    assert_eq!(r.valuations.len(), primes.len());
    // Excluded primes: p <= 2k - 2 and the primes of 2ND.
    let r = script_l_valuation(10, &f, -3, &chi, &[2, 3, 5, 17, 19], 128).unwrap();
    assert_eq!(r.excluded, [2, 3, 5, 17]);
}

fn f30() -> &'static Newform {
    static F: OnceLock<Newform> = OnceLock::new();
    F.get_or_init(|| {
        let chi = KroneckerCharacter::new(5).unwrap();
        newform(30, script_l_terms(16, -3, &chi, 320).unwrap())
    })
}

#[test]
fn script_l_over_a_quadratic_field() {
    // S_30 has Hecke field Q(sqrt(51349)); both embeddings go through the pipeline and the
    // reconstruction must reproduce each of them.
    let chi = KroneckerCharacter::new(5).unwrap();
    let f = f30();
    assert_eq!(f.disc(), 51349);
    let r = script_l_valuation(16, f, -3, &chi, &primes_in(30, 100), 320).unwrap();
    assert_eq!(r.pi_exponent, Some(-2), "{}", r.confidence);
    let v: QuadElement = r.value.as_deref().unwrap().parse().unwrap();
    assert_eq!(
        v,
        QuadElement::new(
            51349,
            skc_core::Rational::from((
                "-82283017240149960262366331908219689723335245352896553182822400".parse::<skc_core::Integer>().unwrap(),
                27
            )),
            skc_core::Rational::from((
                "11125750145870958743466181193080463479465929637764029715002163200".parse::<skc_core::Integer>().unwrap(),
                1386423
            )),
        )
        .unwrap()
    );
    let positive: Vec<_> = r.valuations.iter().filter(|v| v.ord != Some(0)).collect();
    assert_eq!(positive.len(), 1);
    assert_eq!((positive[0].ideal.p, positive[0].ideal.kind, positive[0].ord), (71, IdealKind::Split { root: 38 }, Some(1)));
    // Too few bits for a value of this height: no claim is made.
    let g = newform(30, script_l_terms(16, -3, &chi, 128).unwrap());
    let low = script_l_valuation(16, &g, -3, &chi, &[71], 128).unwrap();
    assert!(low.pi_exponent.is_none() && low.valuations.is_empty());
}

#[test]
fn petersson_of_delta() {
    let f = newform(12, 80);
    let p = petersson_numeric(&f, 128).unwrap();
    // <Delta, Delta> = 1.03536205680432...e-6
    let want = Float::with_val(128, Float::parse("1.035362056804320922347816812e-6").unwrap());
    assert!(Float::with_val(128, &p.value - &want).abs() < Float::with_val(64, 1e-32) + &p.err);
}

proptest! {
    #[test]
    fn hex_floats_round_trip(m in any::<i64>(), e in -2000i32..2000, bits in 64u32..512) {
        let x = Float::with_val(bits, m) << e;
        let s = format_hex(&x);
        prop_assert_eq!(parse_hex(&s, bits).unwrap(), x);
    }
}
