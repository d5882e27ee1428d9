//! Elementary number theory on machine integers.

use rug::ops::Pow;
use rug::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| p.then_some(i as u64))
        .collect()
}

/// Prime factorization by trial division, as (prime, exponent) pairs in increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Writes `n = core * square^2` with `core` squarefree; the sign stays on `core`.
pub fn squarefree_decomposition(n: i64) -> (i64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let mut core: i64 = n.signum();
    let mut square = 1u64;
    for (p, e) in factor(n.unsigned_abs()) {
        if e % 2 == 1 {
            core *= p as i64;
        }
        square *= p.pow(e / 2);
    }
    (core, square)
}

/// Squarefree decomposition of an arbitrary-size integer.
///
/// Trial division removes every prime below the cube root; the cofactor then has at
/// most two prime factors, so it is either a perfect square or squarefree.
pub fn squarefree_decomposition_big(n: &Integer) -> (Integer, Integer) {
    if *n == 0 {
        return (Integer::ZERO, Integer::from(1));
    }
    let mut rest = n.clone().abs();
    let mut core = Integer::from(n.signum_ref());
    let mut square = Integer::from(1);
    let cube_root = Integer::from(rest.root_ref(3)) + 1u32;
    let mut p = Integer::from(2);
    while p <= cube_root && rest > 1 {
        let (q, e) = rest.remove_factor_ref(&p).into();
        rest = q;
        if e % 2 == 1 {
            core *= &p;
        }
        for _ in 0..e / 2 {
            square *= &p;
        }
        if p == 2 {
            p += 1;
        } else {
            p += 2;
        }
    }
    if rest > 1 {
        if rest.is_perfect_square() {
            square *= rest.sqrt();
        } else {
            core *= rest;
        }
    }
    (core, square)
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && squarefree_decomposition(n).1 == 1
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn moebius(n: u64) -> i32 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// sigma_k(n) = sum of d^k over divisors d of n.
pub fn sigma(k: u32, n: u64) -> Integer {
    divisors(n)
        .into_iter()
        .map(|d| Integer::from(d).pow(k))
        .sum()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Kronecker symbol (a/n) for arbitrary integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let v = n.trailing_zeros();
    n >>= v;
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Jacobi symbol (a/n) with n odd positive.
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks), if one exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 {
        return Some(a);
    }
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Is `d` a fundamental discriminant (the discriminant of a quadratic field)?
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Writes a discriminant `disc` (≡ 0,1 mod 4, nonzero) as `fund * cond^2` with `fund` fundamental.
pub fn fundamental_part(disc: i64) -> Option<(i64, u64)> {
    if disc == 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return None;
    }
    let (core, square) = squarefree_decomposition(disc);
    if core == 1 {
        return Some((1, square));
    }
    if core.rem_euclid(4) == 1 {
        Some((core, square))
    } else {
        debug_assert!(square % 2 == 0);
        Some((4 * core, square / 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_sieve() {
        let sieve = primes_up_to(2000);
        let tested: Vec<u64> = (0..=2000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, tested);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn kronecker_small_cases() {
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(-4, -1), -1);
        assert_eq!(kronecker(5, -1), 1);
        assert_eq!(kronecker(12, 6), 0);
    }

    #[test]
    fn sqrt_mod_squares_back() {
        for p in primes_up_to(300).into_iter().skip(1) {
            for a in 0..p {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mul_mod(r, r, p), a);
                }
            }
        }
    }

    #[test]
    fn fundamental_discriminants() {
        let fund: Vec<i64> = (-24..=24).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(fund, vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17, 21, 24]);
        assert_eq!(fundamental_part(-12), Some((-3, 2)));
        assert_eq!(fundamental_part(-16), Some((-4, 2)));
        assert_eq!(fundamental_part(-27), Some((-3, 3)));
    }

    #[test]
    fn big_squarefree_part() {
        let n = Integer::from(1_000_003u64) * Integer::from(1_000_003u64) * 6u32;
        let (core, sq) = squarefree_decomposition_big(&n);
        assert_eq!(core, 6);
        assert_eq!(sq, 1_000_003);
        let (core, sq) = squarefree_decomposition_big(&Integer::from(-72));
        assert_eq!((core, sq), (Integer::from(-2), Integer::from(6)));
    }
}
