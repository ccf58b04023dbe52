//! Exact rational arithmetic, p-adic valuations and the extended binomial
//! coefficient.
//!
//! Every cardinality in the crate is an [`ExactRational`]; nothing is ever
//! rounded. Rationals are kept in lowest terms with a positive denominator,
//! so structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A validated prime number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing order of the prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Arbitrary-precision rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    /// `numerator / denominator`, reduced. Fails on a zero denominator.
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self> {
        let den = denominator.into();
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(ExactRational(BigRational::new(numerator.into(), den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(ExactRational(self.0.recip()))
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(ExactRational(&self.0 / &rhs.0))
        }
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, exp: i64) -> Option<Self> {
        let magnitude = exp.unsigned_abs();
        let mut acc = BigRational::one();
        let mut base = self.0.clone();
        let mut e = magnitude;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if exp < 0 {
            if acc.is_zero() {
                return None;
            }
            acc = acc.recip();
        }
        Some(ExactRational(acc))
    }

    /// `base^exp` for an integer base; `None` for `0^negative`.
    pub fn int_pow(base: impl Into<BigInt>, exp: i64) -> Option<Self> {
        ExactRational::from_integer(base).pow(exp)
    }

    /// Residue in `0..p` of a p-integral rational, `None` otherwise.
    pub fn residue_mod(&self, p: Prime) -> Option<u64> {
        let pb = p.to_bigint();
        let den = self.denom().mod_floor(&pb);
        if den.is_zero() {
            return None;
        }
        let num = self.numer().mod_floor(&pb);
        let den_inv = den.modpow(&BigInt::from(p.get() - 2), &pb);
        (num * den_inv).mod_floor(&pb).to_u64()
    }

    /// Number of decimal digits in the larger of numerator and denominator.
    pub fn digit_estimate(&self) -> u64 {
        let bits = self.numer().bits().max(self.denom().bits());
        // log10(2) < 0.30103
        bits * 30103 / 100000 + 1
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        ExactRational::from_integer(n)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl From<u64> for ExactRational {
    fn from(n: u64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl From<BigUint> for ExactRational {
    fn from(n: BigUint) -> Self {
        ExactRational::from_integer(BigInt::from(n))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::invalid(format!("not a rational number: {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => ExactRational::new(parse_int(n)?, parse_int(d)?),
            None => Ok(ExactRational::from_integer(parse_int(s)?)),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for ExactRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ExactRational::one(), |a, b| a * b)
    }
}

/// A p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialEq<i64> for Valuation {
    fn eq(&self, other: &i64) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<i64> for Valuation {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// The p-adic valuation `v_p(num) - v_p(den)`; zero has infinite valuation.
pub fn vp(x: &ExactRational, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let pb = p.to_bigint();
    Valuation::Finite(int_valuation(x.numer(), &pb) - int_valuation(x.denom(), &pb))
}

/// Checked form of [`vp`] taking an unvalidated modulus.
pub fn vp_checked(x: &ExactRational, p: u64) -> Result<Valuation> {
    Ok(vp(x, Prime::new(p)?))
}

/// Binomial coefficient extended to `n = -1` by `C(-1, k) = (-1)^k`.
pub fn binom_ext(n: i64, k: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::invalid(format!("binom_ext needs n >= -1, got {n}")));
    }
    if k < 0 {
        return Err(Error::invalid(format!("binom_ext needs k >= 0, got {k}")));
    }
    if n == -1 {
        return Ok(if k % 2 == 0 { BigInt::one() } else { -BigInt::one() });
    }
    if k > n {
        return Ok(BigInt::zero());
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Ok(acc)
}

/// `binom_ext` for callers that know the result fits in an exponent.
pub(crate) fn binom_ext_i64(n: i64, k: i64) -> Result<i64> {
    binom_ext(n, k)?
        .to_i64()
        .ok_or_else(|| Error::BudgetExceeded(format!("binomial C({n},{k}) overflows i64")))
}

/// `(-1)^k`.
pub fn alternating_sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(&q("18"), p(3)), 2);
        assert_eq!(vp(&q("2/3"), p(2)), 1);
        assert_eq!(vp(&q("2/3"), p(3)), -1);
        assert_eq!(vp(&q("0"), p(5)), Valuation::Infinite);
        assert_eq!(vp(&q("-50"), p(5)), 2);
    }

    #[test]
    fn valuation_rejects_composite() {
        assert_eq!(vp_checked(&q("4"), 4), Err(Error::NotPrime(4)));
        assert_eq!(vp_checked(&q("4"), 1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn infinite_dominates() {
        assert!(Valuation::Infinite > Valuation::Finite(i64::MAX));
        assert!(Valuation::Finite(-3) < Valuation::Finite(2));
        assert_eq!(Valuation::Finite(1) + Valuation::Infinite, Valuation::Infinite);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom_ext(3, 2).unwrap(), BigInt::from(3));
        assert_eq!(binom_ext(2, 5).unwrap(), BigInt::zero());
        assert_eq!(binom_ext(-1, 3).unwrap(), BigInt::from(-1));
        assert_eq!(binom_ext(-1, 4).unwrap(), BigInt::from(1));
        assert_eq!(binom_ext(0, 0).unwrap(), BigInt::from(1));
        assert!(binom_ext(-2, 1).is_err());
    }

    #[test]
    fn rational_display_and_parse() {
        assert_eq!(q("4/6").to_string(), "2/3");
        assert_eq!(q("6/3").to_string(), "2");
        assert_eq!(q("3/-6").to_string(), "-1/2");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("abc".parse::<ExactRational>().is_err());
    }

    #[test]
    fn powers_and_residues() {
        assert_eq!(q("2/3").pow(-2).unwrap(), q("9/4"));
        assert_eq!(q("0").pow(-1), None);
        assert_eq!(q("0").pow(0).unwrap(), q("1"));
        assert_eq!(q("-7").residue_mod(p(2)), Some(1));
        assert_eq!(q("2/3").residue_mod(p(5)), Some(4));
        assert_eq!(q("1/5").residue_mod(p(5)), None);
    }

    #[test]
    fn primes_and_factorization() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn nonzero_rational() -> impl Strategy<Value = ExactRational> {
            (prop_oneof![-5000i64..-1, 1i64..5000], 1i64..5000)
                .prop_map(|(n, d)| ExactRational::new(n, d).unwrap())
        }

        fn prime() -> impl Strategy<Value = Prime> {
            prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|n| Prime::new(n).unwrap())
        }

        proptest! {
            #[test]
            fn valuation_is_multiplicative(x in nonzero_rational(), y in nonzero_rational(), p in prime()) {
                prop_assert_eq!(vp(&(&x * &y), p), vp(&x, p) + vp(&y, p));
            }

            #[test]
            fn valuation_is_ultrametric(x in nonzero_rational(), y in nonzero_rational(), p in prime()) {
                let (a, b) = (vp(&x, p), vp(&y, p));
                let s = vp(&(&x + &y), p);
                prop_assert!(s >= a.min(b));
                if a != b {
                    prop_assert_eq!(s, a.min(b));
                }
            }

            #[test]
            fn pascal_rule(n in 0i64..60, k in 1i64..60) {
                prop_assert_eq!(
                    binom_ext(n, k).unwrap(),
                    binom_ext(n - 1, k).unwrap() + binom_ext(n - 1, k - 1).unwrap()
                );
            }
        }
    }
}
