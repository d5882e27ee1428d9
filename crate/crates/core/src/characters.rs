//! Real Dirichlet characters, generalized Bernoulli numbers and L(-m, chi).

use std::fmt;
use std::sync::OnceLock;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_fundamental_discriminant, kronecker};
use crate::error::{Error, Result};

const BERNOULLI_CACHE: usize = 60;

fn compute_bernoulli(n_max: usize) -> Vec<Rational> {
    // sum_{j=0}^{n} binom(n+1, j) B_j = 0
    let mut b: Vec<Rational> = Vec::with_capacity(n_max + 1);
    b.push(Rational::from(1));
    for n in 1..=n_max {
        let mut s = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from(bj * Integer::from(Integer::binomial_u(n as u32 + 1, j as u32)));
        }
        b.push(-s / Integer::from(n + 1));
    }
    b
}

/// The Bernoulli number B_n with B_1 = -1/2.
pub fn bernoulli(n: usize) -> Rational {
    static CACHE: OnceLock<Vec<Rational>> = OnceLock::new();
    let table = CACHE.get_or_init(|| compute_bernoulli(BERNOULLI_CACHE));
    match table.get(n) {
        Some(b) => b.clone(),
        None => compute_bernoulli(n).pop().expect("nonempty"),
    }
}

/// zeta(1 - k) = -B_k / k for k >= 2.
pub fn zeta_one_minus(k: u32) -> Rational {
    dirichlet_l_neg(k - 1, &KroneckerCharacter::trivial())
}

/// The Kronecker character `n -> (disc/n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KroneckerCharacter {
    disc: i64,
}

impl KroneckerCharacter {
    pub fn trivial() -> Self {
        Self { disc: 1 }
    }

    /// The primitive character of a fundamental discriminant (or 1 for the trivial one).
    pub fn new(disc: i64) -> Result<Self> {
        if disc != 1 && !is_fundamental_discriminant(disc) {
            return Err(Error::NotFundamental(disc));
        }
        Ok(Self { disc })
    }

    /// `(disc/.)` for any discriminant `disc = 0, 1 mod 4`, possibly imprimitive.
    pub fn imprimitive(disc: i64) -> Result<Self> {
        if disc == 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidArgument(format!("{disc} is not a discriminant")));
        }
        Ok(Self { disc })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn conductor(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    pub fn is_trivial(&self) -> bool {
        self.disc == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.disc == 1 || is_fundamental_discriminant(self.disc)
    }

    /// chi(-1).
    pub fn parity(&self) -> i32 {
        self.disc.signum() as i32
    }

    pub fn eval(&self, n: i64) -> i32 {
        if self.disc == 1 {
            return 1;
        }
        if gcd(n, self.disc) != 1 {
            return 0;
        }
        kronecker(self.disc, n)
    }

    /// The primes dividing the conductor.
    pub fn bad_primes(&self) -> Vec<u64> {
        crate::arith::factor(self.conductor()).into_iter().map(|(p, _)| p).collect()
    }
}

impl fmt::Display for KroneckerCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi_{}", self.disc)
    }
}

/// B_{k,chi} = N^{k-1} sum_{a=1}^{N} chi(a) B_k(a/N), with B_k(x) the Bernoulli polynomial.
pub fn generalized_bernoulli(k: u32, chi: &KroneckerCharacter) -> Rational {
    let n = chi.conductor();
    let k = k as usize;
    let mut total = Rational::new();
    for a in 1..=n {
        let c = chi.eval(a as i64);
        if c == 0 {
            continue;
        }
        let x = Rational::from((a, n));
        let mut poly = Rational::new();
        for j in 0..=k {
            let term = bernoulli(j)
                * Integer::from(Integer::binomial_u(k as u32, j as u32))
                * x.clone().pow((k - j) as i32);
            poly += term;
        }
        if c > 0 {
            total += poly;
        } else {
            total -= poly;
        }
    }
    total * Integer::from(n).pow(k as u32 - 1)
}

/// L(-m, chi) = -B_{m+1,chi}/(m+1).
pub fn dirichlet_l_neg(m: u32, chi: &KroneckerCharacter) -> Rational {
    -generalized_bernoulli(m + 1, chi) / Integer::from(m + 1)
}

/// L^S(-m, chi): L(-m, chi) with the Euler factors at `primes` removed.
pub fn dirichlet_l_neg_removing(m: u32, chi: &KroneckerCharacter, primes: &[u64]) -> Rational {
    let mut v = dirichlet_l_neg(m, chi);
    for &l in primes {
        let c = chi.eval(l as i64);
        let factor = Rational::from(1) - Integer::from(l).pow(m) * c;
        v *= factor;
    }
    v
}

/// tau(chi) = sqrt(N) for even chi and i*sqrt(N) for odd chi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussSum {
    /// Whether the value carries a factor of i.
    pub imaginary: bool,
    /// N, with the value being (i or 1) * sqrt(N).
    pub conductor: u64,
}

pub fn gauss_sum(chi: &KroneckerCharacter) -> Result<GaussSum> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive(chi.disc()));
    }
    Ok(GaussSum { imaginary: chi.parity() < 0, conductor: chi.conductor() })
}
