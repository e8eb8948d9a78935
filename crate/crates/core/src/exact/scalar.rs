//! Gaussian rationals `re + im·i` with exact arithmetic.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::HodgeError;

/// An element of ℚ(i).
///
/// Small values are stored as `(a + b·i)/d` with machine integers, `d > 0`
/// and `gcd(a, b, d) = 1`; anything that does not fit falls back to a pair
/// of big rationals. The representation is canonical, so structural equality
/// is equality of values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64, i64),
    Big(Box<(BigRational, BigRational)>),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar(Repr::Small(0, 0, 1))
    }
}

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

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
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

fn to_big(n: i128) -> BigInt {
    BigInt::from(n)
}

impl Scalar {
    /// Normalizes `(a + b·i)/d` for `d ≠ 0`.
    fn from_parts(a: i128, b: i128, d: i128) -> Self {
        debug_assert!(d != 0);
        // 128-bit division is done in software; stay in 64 bits when possible
        let fits = |x: i128| x.unsigned_abs() < 1 << 63;
        if fits(a) && fits(b) && fits(d) {
            return Scalar::from_small(a as i64, b as i64, d as i64);
        }
        let g = gcd_u128(gcd_u128(a.unsigned_abs(), b.unsigned_abs()), d.unsigned_abs());
        let g = g as i128;
        let (mut a, mut b, mut d) = if g == 1 { (a, b, d) } else { (a / g, b / g, d / g) };
        if d < 0 {
            a = -a;
            b = -b;
            d = -d;
        }
        match (i64::try_from(a), i64::try_from(b), i64::try_from(d)) {
            (Ok(a), Ok(b), Ok(d)) => Scalar(Repr::Small(a, b, d)),
            _ => {
                let dd = to_big(d);
                Scalar::big(BigRational::new(to_big(a), dd.clone()), BigRational::new(to_big(b), dd))
            }
        }
    }

    /// As `from_parts`, for parts strictly inside the `i64` range.
    fn from_small(a: i64, b: i64, d: i64) -> Self {
        let g = gcd_u64(gcd_u64(a.unsigned_abs(), b.unsigned_abs()), d.unsigned_abs()) as i64;
        let (a, b, d) = if g == 1 { (a, b, d) } else { (a / g, b / g, d / g) };
        if d < 0 {
            Scalar(Repr::Small(-a, -b, -d))
        } else {
            Scalar(Repr::Small(a, b, d))
        }
    }

    /// Builds from big parts, demoting to the small form when possible.
    fn big(re: BigRational, im: BigRational) -> Self {
        let d = re.denom().lcm(im.denom());
        let a = re.numer() * (&d / re.denom());
        let b = im.numer() * (&d / im.denom());
        match (i64::try_from(&a), i64::try_from(&b), i64::try_from(&d)) {
            (Ok(a), Ok(b), Ok(d)) => Scalar(Repr::Small(a, b, d)),
            _ => Scalar(Repr::Big(Box::new((re, im)))),
        }
    }

    fn parts(&self) -> (BigRational, BigRational) {
        match &self.0 {
            Repr::Small(a, b, d) => (
                BigRational::new(BigInt::from(*a), BigInt::from(*d)),
                BigRational::new(BigInt::from(*b), BigInt::from(*d)),
            ),
            Repr::Big(p) => (p.0.clone(), p.1.clone()),
        }
    }

    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar::big(re, im)
    }

    pub fn from_real(re: BigRational) -> Self {
        Scalar::big(re, BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(Repr::Small(n, 0, 1))
    }

    /// `num/den` as a real scalar. Panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::from_parts(i128::from(num), 0, i128::from(den))
    }

    /// `a + b·i` with integer parts.
    pub fn gaussian(a: i64, b: i64) -> Self {
        Scalar(Repr::Small(a, b, 1))
    }

    pub fn i() -> Self {
        Scalar::gaussian(0, 1)
    }

    pub fn re(&self) -> BigRational {
        self.parts().0
    }

    pub fn im(&self) -> BigRational {
        self.parts().1
    }

    pub fn conj(&self) -> Self {
        match &self.0 {
            Repr::Small(a, b, d) => Scalar(Repr::Small(*a, -*b, *d)),
            Repr::Big(p) => Scalar(Repr::Big(Box::new((p.0.clone(), -p.1.clone())))),
        }
    }

    pub fn is_real(&self) -> bool {
        match &self.0 {
            Repr::Small(_, b, _) => *b == 0,
            Repr::Big(p) => p.1.is_zero(),
        }
    }

    /// `|z|²`, always a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        let (re, im) = self.parts();
        &re * &re + &im * &im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Repr::Small(a, b, d) = self.0 {
            let (a, b, d) = (i128::from(a), i128::from(b), i128::from(d));
            // a² + b² < 2^127 for 64-bit parts
            if let Some(n) = (a * a).checked_add(b * b) {
                return Some(Scalar::from_parts(d * a, -d * b, n));
            }
        }
        let (re, im) = self.parts();
        let n = &re * &re + &im * &im;
        Some(Scalar::big(&re / &n, -(&im / &n)))
    }

    /// `(-1)^k`.
    pub fn sign_power(k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Scalar::one()
        } else {
            -Scalar::one()
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Rough size of the entry, used to pick cheap pivots.
    pub(crate) fn height(&self) -> u128 {
        match &self.0 {
            Repr::Small(a, b, d) => {
                u128::from(a.unsigned_abs()) + u128::from(b.unsigned_abs()) + u128::from(d.unsigned_abs())
            }
            _ => u128::MAX,
        }
    }

    /// Positive real rational, the only kind of scalar that counts as "> 0".
    pub fn is_positive_real(&self) -> bool {
        match &self.0 {
            Repr::Small(a, b, _) => *b == 0 && *a > 0,
            Repr::Big(p) => p.1.is_zero() && p.0.is_positive(),
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, 0, _))
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_int(1)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_real(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Small(a1, b1, d1), Repr::Small(a2, b2, d2)) => {
                let (a1, b1, d1, a2, b2, d2) = widen(*a1, *b1, *d1, *a2, *b2, *d2);
                if d1 == d2 {
                    return Scalar::from_parts(a1 + a2, b1 + b2, d1);
                }
                Scalar::from_parts(a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2)
            }
            _ => {
                let ((r1, i1), (r2, i2)) = (self.parts(), rhs.parts());
                Scalar::big(r1 + r2, i1 + i2)
            }
        }
    }
}

fn widen(a1: i64, b1: i64, d1: i64, a2: i64, b2: i64, d2: i64) -> (i128, i128, i128, i128, i128, i128) {
    (a1.into(), b1.into(), d1.into(), a2.into(), b2.into(), d2.into())
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Small(a1, b1, d1), Repr::Small(a2, b2, d2)) => {
                let (a1, b1, d1, a2, b2, d2) = widen(*a1, *b1, *d1, *a2, *b2, *d2);
                Scalar::from_parts(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, d1 * d2)
            }
            _ => {
                let ((r1, i1), (r2, i2)) = (self.parts(), rhs.parts());
                Scalar::big(&r1 * &r2 - &i1 * &i2, &r1 * &i2 + &i1 * &r2)
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        #[allow(clippy::suspicious_arithmetic_impl)]
        let q = self * &inv;
        q
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            // i64::MIN has no negation in i64
            Repr::Small(a, b, d) if *a != i64::MIN && *b != i64::MIN => Scalar(Repr::Small(-a, -b, *d)),
            _ => {
                let (re, im) = self.parts();
                Scalar::big(-re, -im)
            }
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

// Canonical interchange form: "a/b" for reals, "a/b+c/d*i" or "a/b-c/d*i"
// otherwise. Fractions are in lowest terms with positive denominators.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.parts();
        f.write_str(&fmt_rational(&re))?;
        if !im.is_zero() {
            let sign = if im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}*i", sign, fmt_rational(&im.abs()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational, HodgeError> {
    let err = || HodgeError::ScalarSyntax(whole.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| err())?;
    let den: BigInt = den.trim().parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

impl FromStr for Scalar {
    type Err = HodgeError;

    /// Accepts the canonical form plus a few relaxations: integers without a
    /// denominator ("3"), a bare imaginary part ("1/2*i", "-i") and surrounding
    /// whitespace.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(HodgeError::ScalarSyntax(input.to_string()));
        }
        let imag_coeff = |body: &str| -> Result<BigRational, HodgeError> {
            let body = body.strip_suffix('*').unwrap_or(body);
            match body {
                "" | "+" => Ok(BigRational::one()),
                "-" => Ok(-BigRational::one()),
                b => parse_rational(b, input),
            }
        };
        if let Some(body) = s.strip_suffix('i') {
            // Split at the last sign that is not the leading one.
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(idx, _)| idx)
                .last();
            return match split {
                Some(idx) => {
                    let re = parse_rational(&body[..idx], input)?;
                    let im = imag_coeff(&body[idx..])?;
                    Ok(Scalar::new(re, im))
                }
                None => Ok(Scalar::new(BigRational::zero(), imag_coeff(body)?)),
            };
        }
        Ok(Scalar::from_real(parse_rational(&s, input)?))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(Scalar::frac(-3, 2).to_string(), "-3/2");
        assert_eq!(Scalar::zero().to_string(), "0/1");
        let z = Scalar::frac(-3, 2) + Scalar::i();
        assert_eq!(z.to_string(), "-3/2+1/1*i");
        assert_eq!(Scalar::gaussian(2, -4).to_string(), "2/1-4/1*i");
        assert_eq!(Scalar::frac(6, -4).to_string(), "-3/2");
    }

    #[test]
    fn parses_canonical_and_relaxed_forms() {
        let cases = [
            ("-3/2+1/1*i", Scalar::frac(-3, 2) + Scalar::i()),
            ("4/6", Scalar::frac(2, 3)),
            ("7", Scalar::from_int(7)),
            ("i", Scalar::i()),
            ("-i", -Scalar::i()),
            ("1/2*i", Scalar::i() * Scalar::frac(1, 2)),
            ("-1/1-2/3*i", Scalar::from_int(-1) - Scalar::i() * Scalar::frac(2, 3)),
            (" 1 + 1*i ", Scalar::gaussian(1, 1)),
        ];
        for (text, want) in cases {
            assert_eq!(text.parse::<Scalar>().unwrap(), want, "{text}");
        }
        for bad in ["", "1/0", "abc", "1/2+", "1/2*j"] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad}");
        }
    }

    #[test]
    fn conjugation_is_an_involutive_ring_map() {
        let x = Scalar::gaussian(3, -2) / Scalar::from_int(5);
        let y = Scalar::gaussian(-1, 7);
        assert_eq!(x.conj().conj(), x);
        assert_eq!((&x * &y).conj(), x.conj() * y.conj());
        assert_eq!((&x / &y) * &y, x);
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn overflow_falls_back_to_big_parts_and_back() {
        let big = Scalar::from_int(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.re(), BigRational::from_integer(BigInt::from(i64::MAX) * BigInt::from(i64::MAX)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let min = Scalar::from_int(i64::MIN);
        assert_eq!(-(-&min), min);
        let x = Scalar::frac(1, i64::MAX) + Scalar::frac(1, i64::MAX - 1);
        assert_eq!(&x - &Scalar::frac(1, i64::MAX - 1), Scalar::frac(1, i64::MAX));
        assert_eq!(Scalar::gaussian(3, 4).inv().unwrap(), Scalar::gaussian(3, -4) / Scalar::from_int(25));
    }
}
