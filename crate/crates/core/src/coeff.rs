//! Exact arithmetic in `Q[v]/(v^2 - q)` for a fixed prime `q`.
//!
//! Every structure constant in the library lives in this field. The ring
//! `Z[v, v^-1]/(v^2 - q)` sits inside it; [`Coeff::is_ztilde`] tests
//! membership. Because `q` is prime it is not a square, so the norm
//! `a^2 - q b^2` of a nonzero element never vanishes and every nonzero
//! element is invertible.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{HallError, Result};

/// The ground field `F_q`; `q` is checked to be prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundConfig {
    q: u32,
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl GroundConfig {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q as u64) {
            return Err(HallError::NotPrime(q as u64));
        }
        Ok(GroundConfig { q })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// `q^k` as an exact integer.
    pub fn q_pow(&self, k: u32) -> BigInt {
        BigInt::from(self.q).pow(k)
    }

    pub fn zero(&self) -> Coeff {
        Coeff::zero(*self)
    }

    pub fn one(&self) -> Coeff {
        Coeff::one(*self)
    }

    pub fn int(&self, n: impl Into<BigInt>) -> Coeff {
        Coeff::from_int(*self, n)
    }

    pub fn v(&self) -> Coeff {
        Coeff::v(*self)
    }

    pub fn v_pow(&self, n: i64) -> Coeff {
        Coeff::v_pow(*self, n)
    }

    pub fn qnum(&self, a: i64) -> Coeff {
        Coeff::qnum(*self, a)
    }

    pub fn qfact(&self, a: u32) -> Coeff {
        Coeff::qfact(*self, a)
    }
}

/// An element `a + b v` of `Q[v]/(v^2 - q)` with `a`, `b` exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coeff {
    ground: GroundConfig,
    a: BigRational,
    b: BigRational,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl Coeff {
    pub fn new(ground: GroundConfig, a: BigRational, b: BigRational) -> Self {
        Coeff { ground, a, b }
    }

    pub fn zero(ground: GroundConfig) -> Self {
        Coeff::new(ground, BigRational::zero(), BigRational::zero())
    }

    pub fn one(ground: GroundConfig) -> Self {
        Coeff::new(ground, BigRational::one(), BigRational::zero())
    }

    pub fn from_int(ground: GroundConfig, n: impl Into<BigInt>) -> Self {
        Coeff::new(ground, rat(n), BigRational::zero())
    }

    pub fn from_rational(ground: GroundConfig, a: BigRational) -> Self {
        Coeff::new(ground, a, BigRational::zero())
    }

    pub fn v(ground: GroundConfig) -> Self {
        Coeff::new(ground, BigRational::zero(), BigRational::one())
    }

    /// `v^n` for any integer `n`; `v^-1 = v/q`.
    pub fn v_pow(ground: GroundConfig, n: i64) -> Self {
        let q = BigInt::from(ground.q);
        let half = n.div_euclid(2);
        let odd = n.rem_euclid(2) == 1;
        let scale = if half >= 0 {
            rat(q.pow(half as u32))
        } else {
            BigRational::new(BigInt::one(), q.pow((-half) as u32))
        };
        if odd {
            Coeff::new(ground, BigRational::zero(), scale)
        } else {
            Coeff::new(ground, scale, BigRational::zero())
        }
    }

    /// The quantum number `[a] = (v^a - v^-a)/(v - v^-1)`.
    pub fn qnum(ground: GroundConfig, a: i64) -> Self {
        if a < 0 {
            return -Coeff::qnum(ground, -a);
        }
        let mut acc = Coeff::zero(ground);
        for k in 0..a {
            acc += Coeff::v_pow(ground, a - 1 - 2 * k);
        }
        acc
    }

    /// `[a]! = [1][2]...[a]`, with `[0]! = 1`.
    pub fn qfact(ground: GroundConfig, a: u32) -> Self {
        (1..=a as i64).fold(Coeff::one(ground), |acc, i| acc * Coeff::qnum(ground, i))
    }

    #[inline]
    pub fn ground(&self) -> GroundConfig {
        self.ground
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `v`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Rational value when the `v` part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    /// Integer value when the element is a rational integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    /// Membership in `Z[v, v^-1]/(v^2 - q)`: both denominators are powers of `q`.
    pub fn is_ztilde(&self) -> bool {
        let q = BigInt::from(self.ground.q);
        [&self.a, &self.b].into_iter().all(|r| {
            let mut d = r.denom().clone();
            while d.is_multiple_of(&q) {
                d /= &q;
            }
            d.is_one()
        })
    }

    fn check(&self, other: &Coeff) -> Result<()> {
        if self.ground != other.ground {
            return Err(HallError::GroundMismatch {
                left: self.ground.q,
                right: other.ground.q,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Coeff) -> Result<Coeff> {
        self.check(other)?;
        Ok(Coeff::new(self.ground, &self.a + &other.a, &self.b + &other.b))
    }

    pub fn try_sub(&self, other: &Coeff) -> Result<Coeff> {
        self.check(other)?;
        Ok(Coeff::new(self.ground, &self.a - &other.a, &self.b - &other.b))
    }

    pub fn try_mul(&self, other: &Coeff) -> Result<Coeff> {
        self.check(other)?;
        let q = rat(self.ground.q);
        let a = &self.a * &other.a + &self.b * &other.b * q;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Coeff::new(self.ground, a, b))
    }

    /// `(a - b v) / (a^2 - q b^2)`.
    pub fn inv(&self) -> Result<Coeff> {
        if self.is_zero() {
            return Err(HallError::DivisionByZero);
        }
        let norm = &self.a * &self.a - &self.b * &self.b * rat(self.ground.q);
        Ok(Coeff::new(self.ground, &self.a / &norm, -(&self.b / &norm)))
    }

    pub fn try_div(&self, other: &Coeff) -> Result<Coeff> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, n: u32) -> Coeff {
        let mut acc = Coeff::one(self.ground);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Scale by an integer.
    pub fn scale_int(&self, n: &BigInt) -> Coeff {
        let r = BigRational::from_integer(n.clone());
        Coeff::new(self.ground, &self.a * &r, &self.b * &r)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coeff {
    /// Renders `a + b*v`, dropping a vanishing part.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.a)),
            (true, false) => write!(f, "{}*v", fmt_rat(&self.b)),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} - {}*v", fmt_rat(&self.a), fmt_rat(&-self.b.clone()))
                } else {
                    write!(f, "{} + {}*v", fmt_rat(&self.a), fmt_rat(&self.b))
                }
            }
        }
    }
}

/// Parses `p/r`, `p`, `b*v`, `a + b*v` or `a - b*v` (whitespace optional).
pub fn parse_coeff(ground: GroundConfig, s: &str) -> Result<Coeff> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(HallError::Invalid("empty coefficient".into()));
    }
    // split into signed summands
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && i > start {
            parts.push(&compact[start..i]);
            start = i;
        }
    }
    parts.push(&compact[start..]);
    let mut acc = Coeff::zero(ground);
    for part in parts {
        let (body, is_v) = match part.strip_suffix("*v") {
            Some(b) => (b, true),
            None => match part.strip_suffix('v') {
                Some(b) => (b, true),
                None => (part, false),
            },
        };
        let body = match body {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let r = parse_rational(body)?;
        acc += if is_v {
            Coeff::new(ground, BigRational::zero(), r)
        } else {
            Coeff::from_rational(ground, r)
        };
    }
    Ok(acc)
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || HallError::Invalid(format!("not a rational number: {s:?}"));
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(HallError::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Lossy conversion for diagnostics only.
pub fn approx_f64(c: &Coeff) -> f64 {
    let q = (c.ground.q as f64).sqrt();
    c.a.to_f64().unwrap_or(f64::NAN) + c.b.to_f64().unwrap_or(f64::NAN) * q
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&Coeff> for &Coeff {
            type Output = Coeff;
            fn $m(self, rhs: &Coeff) -> Coeff {
                self.$try(rhs).expect("coefficient arithmetic across ground fields")
            }
        }
        impl $tr<Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: &Coeff) -> Coeff {
                (&self).$m(rhs)
            }
        }
        impl $tr<Coeff> for &Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        assert_eq!(self.ground, rhs.ground, "coefficient arithmetic across ground fields");
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl AddAssign<Coeff> for Coeff {
    fn add_assign(&mut self, rhs: Coeff) {
        *self += &rhs;
    }
}

impl SubAssign<&Coeff> for Coeff {
    fn sub_assign(&mut self, rhs: &Coeff) {
        assert_eq!(self.ground, rhs.ground, "coefficient arithmetic across ground fields");
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl MulAssign<&Coeff> for Coeff {
    fn mul_assign(&mut self, rhs: &Coeff) {
        *self = &*self * rhs;
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::new(self.ground, -self.a, -self.b)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::new(self.ground, -self.a.clone(), -self.b.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(q: u32) -> GroundConfig {
        GroundConfig::new(q).unwrap()
    }

    fn c(q: u32, an: i64, ad: i64, bn: i64, bd: i64) -> Coeff {
        Coeff::new(
            g(q),
            BigRational::new(an.into(), ad.into()),
            BigRational::new(bn.into(), bd.into()),
        )
    }

    #[test]
    fn rejects_composite_q() {
        assert_eq!(GroundConfig::new(4), Err(HallError::NotPrime(4)));
        assert!(GroundConfig::new(1).is_err());
        assert!(GroundConfig::new(7).is_ok());
    }

    #[test]
    fn v_squared_is_q() {
        let k = g(2);
        assert_eq!(k.v() * k.v(), k.int(2));
        assert!((k.one() + k.int(-1)).is_zero());
        // (1+v)(1-v) = 1 - q
        assert_eq!((k.one() + k.v()) * (k.one() - k.v()), k.int(-1));
    }

    #[test]
    fn v_powers() {
        let k = g(2);
        assert_eq!(k.v_pow(0), k.one());
        assert_eq!(k.v_pow(2), k.int(2));
        assert_eq!(k.v_pow(-2), c(2, 1, 2, 0, 1));
        assert_eq!(k.v_pow(-1), c(2, 0, 1, 1, 2));
    }

    #[test]
    fn quantum_numbers() {
        let k = g(2);
        assert_eq!(k.qnum(1), k.one());
        assert_eq!(k.qnum(2), c(2, 0, 1, 3, 2));
        assert_eq!(k.qnum(0), k.zero());
        assert_eq!(k.qnum(-3), -k.qnum(3));
        assert_eq!(k.qfact(0), k.one());
        assert_eq!(k.qfact(3), k.qnum(1) * k.qnum(2) * k.qnum(3));
    }

    #[test]
    fn inverses() {
        let k = g(2);
        assert_eq!(k.one().inv().unwrap(), k.one());
        assert_eq!(k.v().inv().unwrap(), c(2, 0, 1, 1, 2));
        assert_eq!(k.qnum(2).inv().unwrap(), c(2, 0, 1, 1, 3));
        assert_eq!(k.zero().inv(), Err(HallError::DivisionByZero));
        for a in 0..=8 {
            assert!(k.qfact(a).inv().is_ok());
        }
    }

    #[test]
    fn mismatched_grounds() {
        let x = g(2).one();
        let y = g(3).one();
        assert!(matches!(x.try_add(&y), Err(HallError::GroundMismatch { .. })));
    }

    #[test]
    fn ztilde_membership() {
        let k = g(3);
        assert!(k.v_pow(-5).is_ztilde());
        assert!(k.qfact(4).is_ztilde());
        assert!(!k.qnum(2).inv().unwrap().is_ztilde());
    }

    #[test]
    fn display_and_parse() {
        let k = g(3);
        for x in [
            k.zero(),
            k.int(-4),
            c(3, 1, 2, -3, 7),
            c(3, 0, 1, 5, 9),
            c(3, -2, 1, 1, 1),
        ] {
            assert_eq!(parse_coeff(k, &x.to_string()).unwrap(), x, "{x}");
        }
        assert_eq!(parse_coeff(k, "v").unwrap(), k.v());
        assert_eq!(parse_coeff(k, "-v").unwrap(), -k.v());
        assert!(parse_coeff(k, "1/0").is_err());
    }

    proptest! {
        #[test]
        fn field_inverse(an in -30i64..30, ad in 1i64..12, bn in -30i64..30, bd in 1i64..12,
                         q in prop::sample::select(vec![2u32, 3, 5, 7])) {
            let x = c(q, an, ad, bn, bd);
            prop_assume!(!x.is_zero());
            prop_assert!((&x * x.inv().unwrap()).is_one());
        }

        #[test]
        fn v_pow_additive(m in -8i64..=8, n in -8i64..=8) {
            let k = g(3);
            prop_assert_eq!(k.v_pow(m) * k.v_pow(n), k.v_pow(m + n));
        }

        #[test]
        fn qnum_defining_identity(a in -8i64..=8, q in prop::sample::select(vec![2u32, 3, 5])) {
            let k = g(q);
            let lhs = k.qnum(a) * (k.v() - k.v_pow(-1));
            prop_assert_eq!(lhs, k.v_pow(a) - k.v_pow(-a));
        }
    }
}
