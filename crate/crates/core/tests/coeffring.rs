use proptest::prelude::*;
use skc_core::coeffring::{ord_rational, IdealKind};
use skc_core::{ord, rational_reconstruct, split_prime, Float, Integer, QuadElement, Rational, Valuation};

const FIELDS: [i64; 5] = [0, 5, -3, 13, 63737521];
const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn element() -> impl Strategy<Value = QuadElement> {
    (0..FIELDS.len(), -500i64..500, 1i64..60, -500i64..500, 1i64..60).prop_map(|(d, a, b, c, e)| {
        let disc = FIELDS[d];
        if disc == 0 {
            QuadElement::rational(Rational::from((a, b)))
        } else {
            QuadElement::new(disc, Rational::from((a, b)), Rational::from((c, e))).unwrap()
        }
    })
}

fn same_field(x: &QuadElement, disc: i64) -> QuadElement {
    if disc == 0 || x.disc() == 0 {
        return x.clone();
    }
    QuadElement::new(disc, x.x().clone(), x.y().clone()).unwrap()
}

proptest! {
    #[test]
    fn valuation_is_additive_and_ultrametric(x in element(), y in element(), pi in 0..PRIMES.len()) {
        let disc = if x.disc() != 0 { x.disc() } else { y.disc() };
        let y = same_field(&y, disc);
        for ideal in split_prime(PRIMES[pi], disc).unwrap() {
            let (vx, vy) = (ord(&x, &ideal).unwrap(), ord(&y, &ideal).unwrap());
            let vxy = ord(&(&x * &y), &ideal).unwrap();
            match (vx.finite(), vy.finite()) {
                (Some(a), Some(b)) => prop_assert_eq!(vxy, Valuation::Finite(a + b)),
                _ => prop_assert!(vxy.is_infinite()),
            }
            prop_assert!(ord(&(&x + &y), &ideal).unwrap() >= vx.min(vy));
        }
    }

    #[test]
    fn norm_compatibility(x in element(), pi in 0..PRIMES.len()) {
        prop_assume!(!x.is_zero() && x.disc() != 0);
        let p = PRIMES[pi];
        let lhs = ord_rational(&x.norm(), p).finite().unwrap();
        let rhs: i64 = split_prime(p, x.disc())
            .unwrap()
            .iter()
            .map(|id| id.residue_degree() as i64 * ord(&x, id).unwrap().finite().unwrap())
            .sum();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reconstruction_inverts_embedding(a in -10_000_000i64..10_000_000, b in 1i64..5000, wiggle in -1.0f64..1.0) {
        let q = Rational::from((a, b));
        let bound = Integer::from(5000);
        // 2 tol B^2 < 1 keeps a/b the unique fraction in range.
        let tol = Float::with_val(256, 1u32) >> 40i32;
        let x = Float::with_val(256, &q) + Float::with_val(256, &tol) * wiggle / 2u32;
        prop_assert_eq!(rational_reconstruct(&x, &bound, &tol), Some(q));
    }

    #[test]
    fn string_form_round_trips(x in element()) {
        let s = x.to_string();
        prop_assert_eq!(s.parse::<QuadElement>().unwrap(), x);
    }
}

#[test]
fn zero_has_the_sentinel_valuation() {
    let p = split_prime(5, -3).unwrap()[0];
    assert_eq!(ord(&QuadElement::zero(), &p).unwrap(), Valuation::Infinite);
}

#[test]
fn splitting_types() {
    let kinds = |p, d| split_prime(p, d).unwrap().iter().map(|i| i.kind).collect::<Vec<_>>();
    assert!(matches!(kinds(7, -3)[..], [IdealKind::Split { .. }, IdealKind::Split { .. }]));
    assert_eq!(kinds(5, -3), [IdealKind::Inert]);
    assert_eq!(kinds(3, -3), [IdealKind::Ramified]);
    assert_eq!(kinds(181, 63737521), [IdealKind::Ramified]);
}
