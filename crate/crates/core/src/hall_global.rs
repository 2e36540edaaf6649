//! The Hall and Ringel products on classes of coherent sheaves, restricted to
//! the products fixed by the known relations, and the PBW normal form of the
//! subalgebra generated by line bundles and the averaged torsion elements.
//!
//! Conventions: in a product `α · γ` the left factor is the class of the
//! quotient and the right factor the class of the subsheaf. The Ringel
//! product is `α ∗ γ = v^{⟨α, γ⟩} α · γ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::coeff::{Coeff, GroundConfig};
use crate::error::{HallError, Result};
use crate::hall_torsion::{self, mult_classes, mult_torsion, write_torsion_summands, TorsionClass, TorsionElement};
use crate::lincomb::LinComb;
use crate::pbw::{self, Gen, PbwElement, PbwMonomial, Rules, Word};
use crate::points::ClosedPoint;
use crate::combinat::Partition;

/// `⊕ O(n)^{c_n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct BundleClass(BTreeMap<i64, u32>);

impl BundleClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(twists: BTreeMap<i64, u32>) -> Self {
        BundleClass(twists.into_iter().filter(|&(_, c)| c > 0).collect())
    }

    /// `O(n)^{⊕c}`.
    pub fn line_power(n: i64, c: u32) -> Self {
        Self::new(BTreeMap::from([(n, c)]))
    }

    pub fn from_twists(twists: impl IntoIterator<Item = i64>) -> Self {
        let mut m = BTreeMap::new();
        for n in twists {
            *m.entry(n).or_insert(0) += 1;
        }
        BundleClass(m)
    }

    pub fn twists(&self) -> &BTreeMap<i64, u32> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rank(&self) -> i64 {
        self.0.values().map(|&c| c as i64).sum()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(&n, &c)| n * c as i64).sum()
    }

    pub fn max_twist(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    /// `Some((n, c))` if this is `O(n)^{⊕c}`.
    pub fn single_twist(&self) -> Option<(i64, u32)> {
        if self.0.len() == 1 {
            self.0.iter().next().map(|(&n, &c)| (n, c))
        } else {
            None
        }
    }

    pub fn sum(&self, other: &BundleClass) -> BundleClass {
        let mut m = self.0.clone();
        for (&n, &c) in &other.0 {
            *m.entry(n).or_insert(0) += c;
        }
        BundleClass(m)
    }
}

impl fmt::Display for BundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "⊕")?;
            }
            if *c == 1 {
                write!(f, "O({n})")?;
            } else {
                write!(f, "O({n})^{c}")?;
            }
        }
        Ok(())
    }
}

/// A coherent sheaf up to isomorphism: a bundle plus a torsion sheaf.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct SheafClass {
    pub bundle: BundleClass,
    pub torsion: TorsionClass,
}

impl SheafClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(bundle: BundleClass, torsion: TorsionClass) -> Self {
        SheafClass { bundle, torsion }
    }

    pub fn line(n: i64) -> Self {
        Self::new(BundleClass::line_power(n, 1), TorsionClass::zero())
    }

    pub fn bundle(b: BundleClass) -> Self {
        Self::new(b, TorsionClass::zero())
    }

    pub fn torsion(t: TorsionClass) -> Self {
        Self::new(BundleClass::zero(), t)
    }

    pub fn is_zero(&self) -> bool {
        self.bundle.is_zero() && self.torsion.is_zero()
    }

    pub fn rank(&self) -> i64 {
        self.bundle.rank()
    }

    pub fn degree(&self) -> i64 {
        self.bundle.degree() + self.torsion.degree()
    }

    /// Class in `K(A) ≅ Z²`.
    pub fn rank_degree(&self) -> (i64, i64) {
        (self.rank(), self.degree())
    }
}

impl fmt::Display for SheafClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "[0]");
        }
        write!(f, "[{}", self.bundle)?;
        if !self.bundle.is_zero() && !self.torsion.is_zero() {
            write!(f, "⊕")?;
        }
        write_torsion_summands(f, &self.torsion)?;
        write!(f, "]")
    }
}

pub type HallElement = LinComb<SheafClass>;

/// `⟨(r, d), (r', d')⟩ = r r' + r d' - d r'`.
pub fn euler_form(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.0 + a.0 * b.1 - a.1 * b.0
}

/// Indecomposable data for [`hom_dim`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Indecomposable {
    Line(i64),
    Torsion(ClosedPoint, Partition),
}

/// `dim_{F_q} Hom(a, b)` in the cases fixed by the classification.
pub fn hom_dim(a: &Indecomposable, b: &Indecomposable) -> Result<i64> {
    use Indecomposable::*;
    match (a, b) {
        (Line(m), Line(n)) => Ok((n - m + 1).max(0)),
        (Line(_), Torsion(x, l)) => Ok(l.weight() as i64 * x.degree() as i64),
        (Torsion(..), Line(_)) => Ok(0),
        (Torsion(x, _), Torsion(y, _)) if x != y => Ok(0),
        (Torsion(..), Torsion(..)) => Err(HallError::Unsupported(
            "Hom between torsion sheaves at the same point".into(),
        )),
    }
}

/// `|GL_c(F_q)|`.
fn gl_order(q: &BigInt, c: u32) -> BigInt {
    (0..c).map(|i| Pow::pow(q, c) - Pow::pow(q, i)).product()
}

/// `|Aut F|` by the block-triangular structure of endomorphisms.
pub fn aut_order(ground: GroundConfig, s: &SheafClass) -> BigInt {
    let q = BigInt::from(ground.q());
    let twists: Vec<(i64, u32)> = s.bundle.twists().iter().map(|(&n, &c)| (n, c)).collect();
    let mut out: BigInt = twists.iter().map(|&(_, c)| gl_order(&q, c)).product();
    let mut exp: i64 = 0;
    for i in 0..twists.len() {
        for j in i + 1..twists.len() {
            let (ni, ci) = twists[i];
            let (nj, cj) = twists[j];
            exp += ci as i64 * cj as i64 * (nj - ni + 1);
        }
    }
    exp += s.bundle.rank() * s.torsion.degree();
    out *= Pow::pow(&q, exp as u64);
    out * s.torsion.aut_order(ground)
}

fn not_derivable(a: &SheafClass, b: &SheafClass) -> HallError {
    HallError::NotDerivable {
        left: a.to_string(),
        right: b.to_string(),
    }
}

/// `Π_{c=0}^{a-1} (q^{a+b-c} - 1)/(q^{a-c} - 1)`, the number of `b`-dimensional
/// subspaces of `F_q^{a+b}`.
pub fn gaussian_binomial(q: u32, a: u32, b: u32) -> BigInt {
    let q = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for c in 0..a {
        num *= Pow::pow(&q, a + b - c) - 1;
        den *= Pow::pow(&q, a - c) - 1;
    }
    num / den
}

/// Hall product of two classes (left = quotient, right = subsheaf).
pub fn hall_product_classes(ground: GroundConfig, a: &SheafClass, b: &SheafClass) -> Result<HallElement> {
    if a.is_zero() {
        return Ok(HallElement::basis(ground, b.clone()));
    }
    if b.is_zero() {
        return Ok(HallElement::basis(ground, a.clone()));
    }
    let q = ground.q();
    // torsion · torsion
    if a.bundle.is_zero() && b.bundle.is_zero() {
        return Ok(mult_classes(ground, &a.torsion, &b.torsion)?
            .map_keys(|t| SheafClass::torsion(t.clone())));
    }
    // [F ⊕ T] · torsion = Σ [F ⊕ T'] over T' in [T]·torsion
    if b.bundle.is_zero() {
        return Ok(mult_classes(ground, &a.torsion, &b.torsion)?
            .map_keys(|t| SheafClass::new(a.bundle.clone(), t.clone())));
    }
    if a.torsion.is_zero() && b.torsion.is_zero() {
        let (fa, fb) = (&a.bundle, &b.bundle);
        if let (Some((m1, ca)), Some((m2, cb))) = (fa.single_twist(), fb.single_twist()) {
            if m1 == m2 {
                let c = gaussian_binomial(q, ca, cb);
                return Ok(HallElement::single(
                    ground,
                    SheafClass::bundle(BundleClass::line_power(m1, ca + cb)),
                    Coeff::from_int(ground, c),
                ));
            }
        }
        if let Some((m, _)) = fb.single_twist() {
            if fa.max_twist().is_some_and(|top| m > top) {
                return Ok(HallElement::basis(ground, SheafClass::bundle(fa.sum(fb))));
            }
        }
        if let (Some((n, 1)), Some((m, 1))) = (fa.single_twist(), fb.single_twist()) {
            if n > m {
                return Ok(line_pair_product(ground, n, m));
            }
        }
        return Err(not_derivable(a, b));
    }
    // elementary torsion · [O(n) ⊕ T]
    if a.bundle.is_zero() && a.torsion.is_elementary() {
        if let Some((n, 1)) = b.bundle.single_twist() {
            return elementary_times_line(ground, &a.torsion, n, &b.torsion);
        }
    }
    Err(not_derivable(a, b))
}

/// `[O(n)][O(m)]` for `m < n`.
fn line_pair_product(ground: GroundConfig, n: i64, m: i64) -> HallElement {
    let q = BigInt::from(ground.q());
    let k = (n - m) as u64;
    let mut out = HallElement::zero(ground);
    out.add_term(
        SheafClass::bundle(BundleClass::from_twists([m, n])),
        Coeff::from_int(ground, Pow::<u64>::pow(&q, k + 1)),
    );
    let middle: BigInt = (&q * &q - 1) * Pow::pow(&q, k - 1);
    for a in 1..=(n - m) / 2 {
        out.add_term(
            SheafClass::bundle(BundleClass::from_twists([m + a, n - a])),
            Coeff::from_int(ground, middle.clone()),
        );
    }
    out
}

/// `[⊕_x O_{(1^{r_x})[x]}] · [O(n) ⊕ T]`, one point at a time.
fn elementary_times_line(
    ground: GroundConfig,
    left: &TorsionClass,
    n: i64,
    right: &TorsionClass,
) -> Result<HallElement> {
    // terms [O(twist)] · τ
    let mut terms: Vec<(i64, TorsionElement)> = vec![(n, TorsionElement::basis(ground, right.clone()))];
    for (x, lam) in left.data().iter().rev() {
        let r = lam.weight();
        let d = x.degree() as i64;
        let shorter = TorsionElement::basis(ground, TorsionClass::at(x.clone(), Partition::column(r - 1)));
        let same = TorsionElement::basis(ground, TorsionClass::at(x.clone(), Partition::column(r)));
        let qx_r = Coeff::from_int(ground, Pow::pow(BigInt::from(x.qx(ground)), r));
        let mut next = Vec::with_capacity(2 * terms.len());
        for (twist, tau) in &terms {
            next.push((twist + d, mult_torsion(&shorter, tau)?));
            next.push((*twist, mult_torsion(&same, tau)?.scaled(&qx_r)));
        }
        terms = next;
    }
    let mut out = HallElement::zero(ground);
    for (twist, tau) in terms {
        for (t, c) in &tau {
            out.add_term(SheafClass::new(BundleClass::line_power(twist, 1), t.clone()), c.clone());
        }
    }
    Ok(out)
}

/// Bilinear Hall product; fails with `NotDerivable` on the first class pair
/// outside the known relations.
pub fn hall_product(f: &HallElement, g: &HallElement) -> Result<HallElement> {
    let ground = f.ground();
    f.bilinear(g, |a, b| hall_product_classes(ground, a, b))
}

/// Ringel product of two classes.
pub fn ringel_product_classes(ground: GroundConfig, a: &SheafClass, b: &SheafClass) -> Result<HallElement> {
    let e = euler_form(a.rank_degree(), b.rank_degree());
    Ok(hall_product_classes(ground, a, b)?.scaled(&Coeff::v_pow(ground, e)))
}

pub fn ringel_product(f: &HallElement, g: &HallElement) -> Result<HallElement> {
    let ground = f.ground();
    f.bilinear(g, |a, b| ringel_product_classes(ground, a, b))
}

/// `(X_c, κ)` with `X_c = κ · [b]`, where
/// `κ = Π q^{c_i(c_i-1)/2} [c_i]! · v^{Σ_{i<j} (n_j - n_i + 1) c_i c_j}`.
pub fn bundle_to_monomial(ground: GroundConfig, b: &BundleClass) -> (PbwMonomial, Coeff) {
    let twists: Vec<(i64, u32)> = b.twists().iter().map(|(&n, &c)| (n, c)).collect();
    let mut kappa = Coeff::one(ground);
    let mut vexp = 0i64;
    for (i, &(ni, ci)) in twists.iter().enumerate() {
        kappa *= &(Coeff::from_int(ground, ground.q_pow(ci * ci.saturating_sub(1) / 2)) * ground.qfact(ci));
        for &(nj, cj) in &twists[i + 1..] {
            vexp += (nj - ni + 1) * ci as i64 * cj as i64;
        }
    }
    kappa *= &Coeff::v_pow(ground, vexp);
    (PbwMonomial::new(b.twists().clone(), BTreeMap::new()), kappa)
}

/// `ĥ_d = Π ĥ_r^{d_r}` as a torsion element.
pub fn hhat_monomial(ground: GroundConfig, d: &BTreeMap<u32, u32>) -> Result<TorsionElement> {
    let mut acc = hall_torsion::unit(ground);
    for (&r, &k) in d {
        let h = hall_torsion::hhat(ground, r)?;
        for _ in 0..k {
            acc = mult_torsion(&acc, &h)?;
        }
    }
    Ok(acc)
}

/// `X_c ∗ ĥ_d` expanded in sheaf classes, through the product relations only.
pub fn monomial_to_hall(ground: GroundConfig, m: &PbwMonomial) -> Result<HallElement> {
    let mut acc = HallElement::basis(ground, SheafClass::zero());
    for (&n, &c) in m.c() {
        let line = HallElement::basis(ground, SheafClass::line(n));
        let mut power = HallElement::basis(ground, SheafClass::zero());
        for _ in 0..c {
            power = ringel_product(&power, &line)?;
        }
        acc = ringel_product(&acc, &power)?;
    }
    if !m.d().is_empty() {
        let h = hhat_monomial(ground, m.d())?.map_keys(|t| SheafClass::torsion(t.clone()));
        acc = ringel_product(&acc, &h)?;
    }
    Ok(acc)
}

/// Expands a PBW element in sheaf classes.
pub fn to_hall(e: &PbwElement) -> Result<HallElement> {
    let ground = e.ground();
    let mut out = HallElement::zero(ground);
    for (m, c) in e {
        out.add_assign_scaled(&monomial_to_hall(ground, m)?, c);
    }
    Ok(out)
}

/// Hall-side straightening: inverted line pairs are expanded by the product
/// of two line bundles and converted back to ordered monomials; torsion
/// generators pass line bundles by
/// `ĥ_r ∗ [O(n)] = Σ_s [s+1] [O(n+s)] ∗ ĥ_{r-s}`.
#[derive(Clone, Copy, Debug)]
pub struct HallRules {
    ground: GroundConfig,
}

impl HallRules {
    pub fn new(ground: GroundConfig) -> Self {
        HallRules { ground }
    }
}

impl Rules for HallRules {
    fn ground(&self) -> GroundConfig {
        self.ground
    }

    fn line_swap(&self, n: i64, m: i64) -> Result<Vec<(Word, Coeff)>> {
        let prod = ringel_product_classes(self.ground, &SheafClass::line(n), &SheafClass::line(m))?;
        let mut out = Vec::new();
        for (class, c) in &prod {
            let (mono, kappa) = bundle_to_monomial(self.ground, &class.bundle);
            out.push((mono.word(), c.try_div(&kappa)?));
        }
        Ok(out)
    }

    fn tor_line(&self, r: u32, n: i64) -> Result<Vec<(Word, Coeff)>> {
        Ok((0..=r)
            .map(|s| {
                (
                    vec![Gen::Line(n + s as i64), Gen::Tor(r - s)],
                    Coeff::qnum(self.ground, s as i64 + 1),
                )
            })
            .collect())
    }
}

pub type BElement = PbwElement;

/// Normal form of `coeff · w_1 ∗ … ∗ w_k` for generators `G(n) = [O(n)]`, `H(r) = ĥ_r`.
pub fn normal_form(ground: GroundConfig, coeff: Coeff, word: &[Gen]) -> Result<BElement> {
    pbw::straighten_word(&HallRules::new(ground), coeff, word)
}

/// Product in `B`, computed in the PBW basis.
pub fn b_product(f: &BElement, g: &BElement) -> Result<BElement> {
    pbw::pbw_product(&HallRules::new(f.ground()), f, g)
}

/// Checks `ĥ_r ∗ [O(n)] = Σ_s [s+1] [O(n+s)] ∗ ĥ_{r-s}` in sheaf classes,
/// computing the left side from `ĥ_r = Σ (-1)^k ê_{a_1} ⋯ ê_{a_k}` over
/// compositions of `r` and the elementary-torsion relation.
pub fn mixed_relation_check(ground: GroundConfig, r: u32, n: i64) -> Result<bool> {
    let series = hall_torsion::global_series(ground, r as usize)?;
    let e = |a: u32| {
        series
            .e
            .coeff(a as usize)
            .map_keys(|t| SheafClass::torsion(t.clone()))
    };
    let line = HallElement::basis(ground, SheafClass::line(n));
    let mut lhs = HallElement::zero(ground);
    let mut hr_check = HallElement::zero(ground);
    for comp in compositions(r) {
        let sign = if comp.len() % 2 == 1 { -Coeff::one(ground) } else { Coeff::one(ground) };
        let mut acc = line.clone();
        let mut tors = HallElement::basis(ground, SheafClass::zero());
        for &a in comp.iter().rev() {
            acc = hall_product(&e(a), &acc)?;
            tors = hall_product(&e(a), &tors)?;
        }
        lhs.add_assign_scaled(&acc, &sign);
        hr_check.add_assign_scaled(&tors, &sign);
    }
    let hr = series.h.coeff(r as usize).map_keys(|t| SheafClass::torsion(t.clone()));
    if hr_check != hr {
        return Ok(false);
    }
    let lhs = lhs.scaled(&Coeff::v_pow(ground, -(r as i64)));
    let mut rhs = HallElement::zero(ground);
    for s in 0..=r {
        let h = if s == r {
            HallElement::basis(ground, SheafClass::zero())
        } else {
            series.h.coeff((r - s) as usize).map_keys(|t| SheafClass::torsion(t.clone()))
        };
        let l = HallElement::basis(ground, SheafClass::line(n + s as i64));
        rhs.add_assign_scaled(&ringel_product(&l, &h)?, &Coeff::qnum(ground, s as i64 + 1));
    }
    Ok(lhs == rhs)
}

/// Ordered compositions of `r` into positive parts.
fn compositions(r: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=r {
        for mut rest in compositions(r - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
