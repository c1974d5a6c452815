//! Exact rational scalars.
//!
//! Values are always kept in lowest terms with a positive denominator. Small
//! values live inline as a pair of `i64`s; anything that does not fit is
//! promoted to a heap-allocated [`BigRational`]. The representation is
//! canonical (a value that fits inline is never stored big), so structural
//! equality and hashing agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer in rational literal `{0}`")]
    InvalidInteger(String),
    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    // numerator > i64::MIN, denominator > 0, gcd = 1
    Small(i64, i64),
    Big(Box<BigRational>),
}

/// An arbitrary-precision rational number in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    gcd_u128(a as u128, b as u128) as u64
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_integer(n: i64) -> Self {
        if n == i64::MIN {
            return Self::from_big(BigRational::from_integer(BigInt::from(n)));
        }
        Rational(Repr::Small(n, 1))
    }

    /// Builds `num/den`, reducing to lowest terms. Panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    /// Reduces an `i128` fraction. `den` must be non-zero.
    fn from_i128(num: i128, den: i128) -> Self {
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_u128(n.unsigned_abs(), d as u128);
        if g > 1 {
            n /= g as i128;
            d /= g as i128;
        }
        Self::from_reduced_i128(n, d)
    }

    /// `num/den` already in lowest terms with `den > 0`.
    fn from_reduced_i128(num: i128, den: i128) -> Self {
        if num > i64::MIN as i128 && num <= i64::MAX as i128 && den <= i64::MAX as i128 {
            Rational(Repr::Small(num as i64, den as i64))
        } else {
            Rational(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(num),
                BigInt::from(den),
            ))))
        }
    }

    /// Takes ownership of a (normalized) big rational, demoting it when it fits.
    pub fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Rational(Repr::Small(n, d));
            }
        }
        Rational(Repr::Big(Box::new(r)))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_negative() {
                    -1
                } else if b.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                Self::from_reduced_i128((*d as i128) * (n.signum() as i128), (*n as i128).abs())
            }
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i32) -> Self {
        if exp < 0 {
            return self.recip().pow(-exp);
        }
        let mut result = Rational::one();
        let mut base = self.clone();
        let mut e = exp as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `n!` as a rational.
    pub fn factorial(n: u32) -> Self {
        (1..=n as i64).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k))
    }

    /// Binomial coefficient `C(n, k)` (zero when `k > n`).
    pub fn binomial(n: u32, k: u32) -> Self {
        if k > n {
            return Rational::zero();
        }
        let k = k.min(n - k);
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        Self::from_big(BigRational::from_integer(acc))
    }

    fn add_ref(&self, other: &Rational) -> Rational {
        match (&self.0, &other.0) {
            (Repr::Small(0, _), _) => other.clone(),
            (_, Repr::Small(0, _)) => self.clone(),
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    let n = *a as i128 + *c as i128;
                    if *b == 1 {
                        return Self::from_reduced_i128(n, 1);
                    }
                    return Self::from_i128(n, *b as i128);
                }
                let g = gcd_u64(*b as u64, *d as u64) as i128;
                let (b, d) = (*b as i128, *d as i128);
                // a/b + c/d with b = g*b1, d = g*d1: (a*d1 + c*b1) / (g*b1*d1)
                let b1 = b / g;
                let d1 = d / g;
                let n = *a as i128 * d1 + *c as i128 * b1;
                match b1.checked_mul(d) {
                    Some(den) => Self::from_i128(n, den),
                    None => self.big_add(other),
                }
            }
            _ => self.big_add(other),
        }
    }

    fn big_add(&self, other: &Rational) -> Rational {
        Self::from_big(self.to_big() + other.to_big())
    }

    fn mul_ref(&self, other: &Rational) -> Rational {
        match (&self.0, &other.0) {
            (Repr::Small(0, _), _) | (_, Repr::Small(0, _)) => Rational::zero(),
            (Repr::Small(1, 1), _) => other.clone(),
            (_, Repr::Small(1, 1)) => self.clone(),
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let g1 = gcd_u64(a.unsigned_abs(), *d as u64) as i64;
                let g2 = gcd_u64(c.unsigned_abs(), *b as u64) as i64;
                let n = (a / g1) as i128 * (c / g2) as i128;
                let den = (b / g2) as i128 * (d / g1) as i128;
                Self::from_reduced_i128(n, den)
            }
            _ => Self::from_big(self.to_big() * other.to_big()),
        }
    }

    fn neg_ref(&self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
            Repr::Big(b) => Self::from_big(-(**b).clone()),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n as i64)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_big(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational::from_big(r)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `"p"` or `"p/q"` with optional leading sign on `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let parse_int = |t: &str| -> Result<BigInt, ParseRationalError> {
            let t = t.trim();
            let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ParseRationalError::InvalidInteger(s.to_string()));
            }
            t.parse::<BigInt>()
                .map_err(|_| ParseRationalError::InvalidInteger(s.to_string()))
        };
        match s.split_once('/') {
            None => Ok(Rational::from(parse_int(s)?)),
            Some((n, d)) => {
                let n = parse_int(n)?;
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator(s.to_string()));
                }
                Ok(Rational::from_big(BigRational::new(n, d)))
            }
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.neg_ref()
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.neg_ref()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $body(self, rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $body(&self, &rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $body(&self, rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Rational, b: &Rational| a.add_ref(b));
forward_binop!(Sub, sub, |a: &Rational, b: &Rational| a
    .add_ref(&b.neg_ref()));
forward_binop!(Mul, mul, |a: &Rational, b: &Rational| a.mul_ref(b));
forward_binop!(Div, div, |a: &Rational, b: &Rational| a.mul_ref(&b.recip()));

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = self.add_ref(rhs);
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = self.add_ref(&rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = self.add_ref(&rhs.neg_ref());
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = self.mul_ref(rhs);
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn lowest_terms_and_sign() {
        let r = Rational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(r.denom(), BigInt::from(2));
        assert_eq!(Rational::new(0, -7), Rational::zero());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("4/3".parse::<Rational>().unwrap(), Rational::new(4, 3));
        assert_eq!("-10/4".parse::<Rational>().unwrap().to_string(), "-5/2");
        assert_eq!("7".parse::<Rational>().unwrap().to_string(), "7");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1.5".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert!("/3".parse::<Rational>().is_err());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let a = Rational::from_integer(i64::MAX);
        let b = &a * &a;
        assert_eq!(b.to_big(), big(i64::MAX, 1) * big(i64::MAX, 1));
        let back = &b / &a;
        assert_eq!(back, a);
        assert!(matches!(back.0, Repr::Small(..)));
        let m = Rational::from_integer(i64::MIN);
        assert_eq!((-&m).to_big(), -big(i64::MIN, 1));
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(Rational::factorial(5), Rational::from(120));
        assert_eq!(Rational::binomial(6, 2), Rational::from(15));
        assert_eq!(Rational::binomial(2, 3), Rational::zero());
        assert_eq!(Rational::new(2, 3).pow(-2), Rational::new(9, 4));
    }

    fn arb() -> impl Strategy<Value = (i64, i64)> {
        prop_oneof![
            (-50i64..50, 1i64..50),
            (
                any::<i64>().prop_filter("min", |n| *n != i64::MIN),
                1i64..i64::MAX
            ),
        ]
    }

    proptest! {
        #[test]
        fn agrees_with_big_rational((a, b) in arb(), (c, d) in arb()) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            let (bx, by) = (big(a, b), big(c, d));
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            if c != 0 {
                prop_assert_eq!((&x / &y).to_big(), &bx / &by);
            }
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            prop_assert_eq!(Rational::from_big(bx.clone()), x.clone());
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
