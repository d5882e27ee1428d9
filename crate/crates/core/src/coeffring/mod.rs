//! Exact coefficients: rationals and elements of real quadratic fields.

mod reconstruct;
mod serial;
mod valuation;

pub use reconstruct::{rational_reconstruct, simplest_between};
pub use valuation::{ord, ord_rational, split_prime, IdealKind, PrimeIdeal, Valuation};

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::{Float, Integer, Rational};

use crate::arith::is_squarefree;
use crate::error::{Error, Result};

/// `x + y*sqrt(disc)`, where `disc` is a squarefree integer other than 0 and 1.
///
/// Elements with `y == 0` are stored with `disc == 0`, so a rational number has a
/// single representation no matter which field it was computed in. Mixing two
/// different nonzero discriminants in arithmetic is a logic error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadElement {
    disc: i64,
    x: Rational,
    y: Rational,
}

impl QuadElement {
    pub fn zero() -> Self {
        Self::rational(Rational::new())
    }

    pub fn one() -> Self {
        Self::rational(Rational::from(1))
    }

    pub fn rational(x: impl Into<Rational>) -> Self {
        Self { disc: 0, x: x.into(), y: Rational::new() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(Rational::from(n))
    }

    pub fn new(disc: i64, x: impl Into<Rational>, y: impl Into<Rational>) -> Result<Self> {
        let (x, y) = (x.into(), y.into());
        if y == 0 {
            return Ok(Self::rational(x));
        }
        check_disc(disc)?;
        Ok(Self { disc, x, y })
    }

    /// `sqrt(disc)` itself.
    pub fn sqrt(disc: i64) -> Result<Self> {
        Self::new(disc, 0, 1)
    }

    pub(crate) fn raw(disc: i64, x: Rational, y: Rational) -> Self {
        if y == 0 {
            Self::rational(x)
        } else {
            Self { disc, x, y }
        }
    }

    /// Discriminant of the field the element lives in, 0 for rationals.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn is_one(&self) -> bool {
        self.x == 1 && self.y == 0
    }

    pub fn is_rational(&self) -> bool {
        self.disc == 0
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.x)
    }

    pub fn conjugate(&self) -> Self {
        Self { disc: self.disc, x: self.x.clone(), y: Rational::from(-&self.y) }
    }

    pub fn norm(&self) -> Rational {
        let xx = Rational::from(&self.x * &self.x);
        if self.disc == 0 {
            return xx;
        }
        let yy = Rational::from(&self.y * &self.y) * self.disc;
        xx - yy
    }

    pub fn trace(&self) -> Rational {
        Rational::from(&self.x * 2u32)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self::raw(
            self.disc,
            Rational::from(&self.x / &n),
            -Rational::from(&self.y / &n),
        ))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        Self::raw(self.disc, Rational::from(&self.x * q), Rational::from(&self.y * q))
    }

    pub fn mul_integer(&self, n: &Integer) -> Self {
        Self::raw(self.disc, Rational::from(&self.x * n), Rational::from(&self.y * n))
    }

    /// Least common denominator of the two coordinates.
    pub fn denominator(&self) -> Integer {
        self.x.denom().clone().lcm(self.y.denom())
    }

    /// The real embedding sending `sqrt(disc)` to its positive root, or to the
    /// negative root when `conjugate` is set.
    pub fn to_float(&self, prec: u32, conjugate: bool) -> Float {
        let mut v = Float::with_val(prec, &self.x);
        if self.disc != 0 {
            let mut s = Float::with_val(prec, self.disc).sqrt() * &self.y;
            if conjugate {
                s = -s;
            }
            v += s;
        }
        v
    }

    /// Common field of two elements.
    pub fn common_disc(&self, other: &Self) -> Result<i64> {
        match (self.disc, other.disc) {
            (0, d) | (d, 0) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::FieldMismatch { element: a, expected: b }),
        }
    }

    fn field_with(&self, other: &Self) -> i64 {
        self.common_disc(other)
            .unwrap_or_else(|e| panic!("quadratic field arithmetic: {e}"))
    }
}

pub(crate) fn check_disc(disc: i64) -> Result<()> {
    if disc == 0 || disc == 1 || !is_squarefree(disc) {
        return Err(Error::NotSquarefree(disc));
    }
    Ok(())
}

impl Default for QuadElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for QuadElement {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl From<Integer> for QuadElement {
    fn from(n: Integer) -> Self {
        Self::rational(n)
    }
}

impl From<i64> for QuadElement {
    fn from(n: i64) -> Self {
        Self::from_i64(n)
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        serial::write_element(self, f)
    }
}

impl<'a> Add<&'a QuadElement> for &'a QuadElement {
    type Output = QuadElement;
    fn add(self, rhs: &QuadElement) -> QuadElement {
        let d = self.field_with(rhs);
        if d == 0 {
            return QuadElement::rational(Rational::from(&self.x + &rhs.x));
        }
        QuadElement::raw(d, Rational::from(&self.x + &rhs.x), Rational::from(&self.y + &rhs.y))
    }
}

impl<'a> Sub<&'a QuadElement> for &'a QuadElement {
    type Output = QuadElement;
    fn sub(self, rhs: &QuadElement) -> QuadElement {
        let d = self.field_with(rhs);
        if d == 0 {
            return QuadElement::rational(Rational::from(&self.x - &rhs.x));
        }
        QuadElement::raw(d, Rational::from(&self.x - &rhs.x), Rational::from(&self.y - &rhs.y))
    }
}

impl<'a> Mul<&'a QuadElement> for &'a QuadElement {
    type Output = QuadElement;
    fn mul(self, rhs: &QuadElement) -> QuadElement {
        let d = self.field_with(rhs);
        if self.disc == 0 {
            return rhs.mul_rational(&self.x);
        }
        if rhs.disc == 0 {
            return self.mul_rational(&rhs.x);
        }
        let x = Rational::from(&self.x * &rhs.x) + Rational::from(&self.y * &rhs.y) * d;
        let y = Rational::from(&self.x * &rhs.y) + Rational::from(&self.y * &rhs.x);
        QuadElement::raw(d, x, y)
    }
}

impl<'a> Div<&'a QuadElement> for &'a QuadElement {
    type Output = QuadElement;
    fn div(self, rhs: &QuadElement) -> QuadElement {
        let inv = rhs.inverse().expect("division by zero");
        self * &inv
    }
}

impl Neg for &QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        QuadElement { disc: self.disc, x: Rational::from(-&self.x), y: Rational::from(-&self.y) }
    }
}

impl Neg for QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<QuadElement> for QuadElement {
            type Output = QuadElement;
            fn $method(self, rhs: QuadElement) -> QuadElement {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadElement> for QuadElement {
            type Output = QuadElement;
            fn $method(self, rhs: &QuadElement) -> QuadElement {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<QuadElement> for &'a QuadElement {
            type Output = QuadElement;
            fn $method(self, rhs: QuadElement) -> QuadElement {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&QuadElement> for QuadElement {
    fn add_assign(&mut self, rhs: &QuadElement) {
        if self.disc == 0 && rhs.disc == 0 {
            self.x += &rhs.x;
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&QuadElement> for QuadElement {
    fn sub_assign(&mut self, rhs: &QuadElement) {
        if self.disc == 0 && rhs.disc == 0 {
            self.x -= &rhs.x;
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&QuadElement> for QuadElement {
    fn mul_assign(&mut self, rhs: &QuadElement) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for QuadElement {
    fn sum<I: Iterator<Item = QuadElement>>(iter: I) -> Self {
        let mut acc = QuadElement::zero();
        for v in iter {
            acc += &v;
        }
        acc
    }
}
