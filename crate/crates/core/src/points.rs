//! `F_q[z]` arithmetic and the closed points of the projective line.
//!
//! A finite closed point is identified with the monic irreducible polynomial
//! in the affine coordinate `z`; the point at infinity is a separate value.
//! Points are ordered with infinity first, then by degree, then by
//! coefficient list.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coeff::GroundConfig;
use crate::error::{HallError, Result};

/// A polynomial over `F_q`, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FqPoly {
    q: u32,
    coeffs: Vec<u32>,
}

pub(crate) fn inv_mod(a: u32, q: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(q));
    // Fermat: a^(q-2)
    let (mut base, mut exp, mut acc) = (a as u64 % q as u64, q as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q as u64;
        }
        base = base * base % q as u64;
        exp >>= 1;
    }
    acc as u32
}

impl FqPoly {
    pub fn new(ground: GroundConfig, coeffs: impl IntoIterator<Item = i64>) -> Self {
        let q = ground.q();
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.rem_euclid(q as i64) as u32)
            .collect();
        Self::from_reduced(q, coeffs)
    }

    fn from_reduced(q: u32, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly { q, coeffs }
    }

    pub fn zero(ground: GroundConfig) -> Self {
        FqPoly {
            q: ground.q(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(ground: GroundConfig) -> Self {
        Self::constant(ground, 1)
    }

    pub fn constant(ground: GroundConfig, c: i64) -> Self {
        Self::new(ground, [c])
    }

    /// `z`.
    pub fn z(ground: GroundConfig) -> Self {
        Self::new(ground, [0, 1])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn check(&self, other: &FqPoly) {
        assert_eq!(self.q, other.q, "polynomials over different fields");
    }

    pub fn add(&self, other: &FqPoly) -> FqPoly {
        self.check(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                (self.coeffs.get(i).copied().unwrap_or(0) + other.coeffs.get(i).copied().unwrap_or(0))
                    % self.q
            })
            .collect();
        Self::from_reduced(self.q, c)
    }

    pub fn neg(&self) -> FqPoly {
        let c = self.coeffs.iter().map(|&x| (self.q - x) % self.q).collect();
        Self::from_reduced(self.q, c)
    }

    pub fn sub(&self, other: &FqPoly) -> FqPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FqPoly) -> FqPoly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Self::from_reduced(self.q, Vec::new());
        }
        let q = self.q as u64;
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a as u64 * b as u64) % q;
            }
        }
        Self::from_reduced(self.q, c.into_iter().map(|x| x as u32).collect())
    }

    pub fn scale(&self, s: u32) -> FqPoly {
        let q = self.q as u64;
        let c = self
            .coeffs
            .iter()
            .map(|&x| (x as u64 * s as u64 % q) as u32)
            .collect();
        Self::from_reduced(self.q, c)
    }

    /// Quotient and remainder; errors on division by zero.
    pub fn divmod(&self, divisor: &FqPoly) -> Result<(FqPoly, FqPoly)> {
        self.check(divisor);
        let dd = divisor.degree().ok_or(HallError::DivisionByZero)?;
        let q = self.q as u64;
        let lead_inv = inv_mod(divisor.leading(), self.q) as u64;
        let mut rem: Vec<u64> = self.coeffs.iter().map(|&x| x as u64).collect();
        let n = rem.len();
        if n <= dd {
            return Ok((Self::from_reduced(self.q, Vec::new()), self.clone()));
        }
        let mut quot = vec![0u32; n - dd];
        for k in (0..n - dd).rev() {
            let coef = rem[k + dd] % q * lead_inv % q;
            quot[k] = coef as u32;
            if coef != 0 {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = (rem[k + j] + q * q - coef * d as u64 % q) % q;
                }
            }
        }
        rem.truncate(dd);
        Ok((
            Self::from_reduced(self.q, quot),
            Self::from_reduced(self.q, rem.into_iter().map(|x| x as u32).collect()),
        ))
    }

    pub fn rem(&self, divisor: &FqPoly) -> Result<FqPoly> {
        Ok(self.divmod(divisor)?.1)
    }

    pub fn monic(&self) -> FqPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.q))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &FqPoly) -> FqPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: u32) -> u32 {
        let q = self.q as u64;
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % q) as u32
    }

    pub fn pow(&self, n: u32) -> FqPoly {
        (0..n).fold(Self::from_reduced(self.q, vec![1]), |acc, _| acc.mul(self))
    }

    /// Deterministic irreducibility test by trial division against every
    /// monic polynomial of degree at most `deg / 2`.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        let ground = GroundConfig::new(self.q).expect("prime q");
        for e in 1..=d / 2 {
            for cand in monic_polys(ground, e) {
                if self.rem(&cand).expect("nonzero").is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for FqPoly {
    /// Coefficient list, lowest degree first: `[1,1,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// All monic polynomials of degree exactly `d`.
pub fn monic_polys(ground: GroundConfig, d: usize) -> impl Iterator<Item = FqPoly> {
    let q = ground.q();
    let count = (q as u64).pow(d as u32);
    (0..count).map(move |mut idx| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push((idx % q as u64) as u32);
            idx /= q as u64;
        }
        c.push(1);
        FqPoly { q, coeffs: c }
    })
}

/// Monic irreducibles of degree `d`, each lower-degree irreducible tried as
/// a divisor.
pub fn irreducibles(ground: GroundConfig, d: usize) -> Vec<FqPoly> {
    assert!(d >= 1, "degree must be positive");
    let lower: Vec<FqPoly> = (1..=d / 2).flat_map(|e| irreducibles(ground, e)).collect();
    let mut out: Vec<FqPoly> = monic_polys(ground, d)
        .filter(|p| lower.iter().all(|f| !p.rem(f).expect("nonzero").is_zero()))
        .collect();
    out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
    out
}

/// A closed point of `P^1(F_q)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ClosedPoint {
    Infinity,
    /// A monic irreducible polynomial in `z`.
    Finite(FqPoly),
}

impl ClosedPoint {
    /// Checked constructor for finite points.
    pub fn finite(poly: FqPoly) -> Result<Self> {
        if !poly.is_monic() || !poly.is_irreducible() {
            return Err(HallError::Invalid(format!(
                "{poly} is not a monic irreducible polynomial over F_{}",
                poly.q()
            )));
        }
        Ok(ClosedPoint::Finite(poly))
    }

    pub fn degree(&self) -> u32 {
        match self {
            ClosedPoint::Infinity => 1,
            ClosedPoint::Finite(p) => p.degree().expect("nonzero") as u32,
        }
    }

    /// Residue field size `q^{deg x}`.
    pub fn qx(&self, ground: GroundConfig) -> u64 {
        (ground.q() as u64).pow(self.degree())
    }

    /// `"inf"` or the coefficient list of the polynomial.
    pub fn id(&self) -> String {
        self.to_string()
    }

    /// Parses a point id; finite points are validated.
    pub fn parse(ground: GroundConfig, s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(ClosedPoint::Infinity);
        }
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| HallError::Invalid(format!("bad point id {s:?}")))?;
        let coeffs = inner
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| HallError::Invalid(format!("bad point id {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.iter().any(|&c| c < 0 || c >= ground.q() as i64) {
            return Err(HallError::Invalid(format!(
                "coefficients of {s:?} must lie in [0, {})",
                ground.q()
            )));
        }
        ClosedPoint::finite(FqPoly::new(ground, coeffs))
    }
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedPoint::Infinity => write!(f, "inf"),
            ClosedPoint::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl Ord for ClosedPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ClosedPoint::Infinity, ClosedPoint::Infinity) => Ordering::Equal,
            (ClosedPoint::Infinity, _) => Ordering::Less,
            (_, ClosedPoint::Infinity) => Ordering::Greater,
            (ClosedPoint::Finite(a), ClosedPoint::Finite(b)) => a
                .coeffs
                .len()
                .cmp(&b.coeffs.len())
                .then_with(|| a.coeffs.cmp(&b.coeffs)),
        }
    }
}

impl PartialOrd for ClosedPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Infinity plus every finite point of degree at most `max_degree`.
pub fn closed_points_up_to(ground: GroundConfig, max_degree: u32) -> Vec<ClosedPoint> {
    let mut out = vec![ClosedPoint::Infinity];
    for d in 1..=max_degree as usize {
        out.extend(irreducibles(ground, d).into_iter().map(ClosedPoint::Finite));
    }
    out
}

/// Checks `Π_{deg x ≤ T} (1 - s^{deg x})^{-1} ≡ 1/((1-s)(1-qs))` modulo `s^{T+1}`.
pub fn zeta_check(ground: GroundConfig, t: u32) -> bool {
    let t = t as usize;
    let mut lhs = vec![BigInt::zero(); t + 1];
    lhs[0] = BigInt::one();
    for x in closed_points_up_to(ground, t as u32) {
        let d = x.degree() as usize;
        // multiply by 1/(1 - s^d) = Σ s^{kd}
        for i in d..=t {
            let prev = lhs[i - d].clone();
            lhs[i] += prev;
        }
    }
    // 1/((1-s)(1-qs)) = Σ_n (1 + q + ... + q^n) s^n
    let q = BigInt::from(ground.q());
    let mut power = BigInt::one();
    let mut partial = BigInt::zero();
    for coeff in &lhs {
        partial += &power;
        if *coeff != partial {
            return false;
        }
        power *= &q;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(q: u32) -> GroundConfig {
        GroundConfig::new(q).unwrap()
    }

    fn poly(q: u32, c: &[i64]) -> FqPoly {
        FqPoly::new(g(q), c.iter().copied())
    }

    #[test]
    fn arithmetic() {
        // gcd(z^2+z, z+1) = z+1
        assert_eq!(poly(2, &[0, 1, 1]).gcd(&poly(2, &[1, 1])), poly(2, &[1, 1]));
        // (z+1)^2 = z^2+1 over F_2
        assert_eq!(poly(2, &[1, 1]).pow(2), poly(2, &[1, 0, 1]));
        // z^3 = z (z^2+1) + z
        let (qt, r) = poly(2, &[0, 0, 0, 1]).divmod(&poly(2, &[1, 0, 1])).unwrap();
        assert_eq!((qt, r), (poly(2, &[0, 1]), poly(2, &[0, 1])));
        assert_eq!(
            poly(3, &[1, 2]).divmod(&FqPoly::zero(g(3))),
            Err(HallError::DivisionByZero)
        );
        assert_eq!(poly(3, &[2, 0, 1]).eval(2), 0);
        assert_eq!(poly(3, &[2, 0, 2]).gcd(&poly(3, &[0, 2])), FqPoly::one(g(3)));
        assert!(poly(5, &[3, 0, 2]).monic().is_monic());
    }

    #[test]
    fn divmod_reconstructs() {
        let k = g(3);
        for a in monic_polys(k, 4) {
            for b in monic_polys(k, 2).chain(monic_polys(k, 1)) {
                let b = b.scale(2);
                let (qt, r) = a.divmod(&b).unwrap();
                assert_eq!(qt.mul(&b).add(&r), a);
                assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
            }
        }
    }

    #[test]
    fn irreducible_lists() {
        assert_eq!(irreducibles(g(2), 1), vec![poly(2, &[0, 1]), poly(2, &[1, 1])]);
        assert_eq!(irreducibles(g(2), 2), vec![poly(2, &[1, 1, 1])]);
        assert_eq!(irreducibles(g(2), 3).len(), 2);
        assert_eq!(irreducibles(g(3), 2).len(), 3);
    }

    #[test]
    fn irreducible_counts_sum_to_field_size() {
        for q in [2u32, 3, 5] {
            let max_d = if q == 5 { 4 } else { 6 };
            let counts: Vec<usize> = (1..=max_d).map(|d| irreducibles(g(q), d).len()).collect();
            for d in 1..=max_d {
                let s: u64 = (1..=d)
                    .filter(|e| d % e == 0)
                    .map(|e| e as u64 * counts[e - 1] as u64)
                    .sum();
                assert_eq!(s, (q as u64).pow(d as u32), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn irreducibles_have_no_roots() {
        for q in [2u32, 3] {
            for d in 2..=5 {
                for p in irreducibles(g(q), d) {
                    assert!((0..q).all(|x| p.eval(x) != 0));
                    assert!(p.is_irreducible());
                }
            }
        }
    }

    #[test]
    fn point_counts() {
        assert_eq!(closed_points_up_to(g(2), 1).len(), 3);
        assert_eq!(closed_points_up_to(g(3), 1).len(), 4);
        assert_eq!(closed_points_up_to(g(2), 2).len(), 4);
        let pts = closed_points_up_to(g(3), 3);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(pts[0], ClosedPoint::Infinity);
    }

    #[test]
    fn point_ids() {
        let k = g(2);
        let x = ClosedPoint::parse(k, "[1,1,1]").unwrap();
        assert_eq!(x.degree(), 2);
        assert_eq!(x.qx(k), 4);
        assert_eq!(x.id(), "[1,1,1]");
        assert_eq!(ClosedPoint::parse(k, "inf").unwrap(), ClosedPoint::Infinity);
        assert!(ClosedPoint::parse(k, "[1,0,1]").is_err());
        assert!(ClosedPoint::parse(k, "[0,2]").is_err());
    }

    #[test]
    fn zeta() {
        for q in [2u32, 3, 5] {
            for t in 1..=8 {
                assert!(zeta_check(g(q), t), "q={q} T={t}");
            }
        }
    }
}
