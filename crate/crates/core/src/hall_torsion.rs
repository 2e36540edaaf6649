//! The Hall algebra of torsion sheaves.
//!
//! A torsion class is a finite map from closed points to nonempty
//! partitions. Classes with disjoint supports multiply by direct sum; at a
//! common point the local Hall numbers from [`crate::symfun`] apply. The
//! Euler form vanishes on torsion, so the Hall and Ringel products agree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::{Coeff, GroundConfig};
use crate::combinat::{aut_order_torsion, partitions_of, Partition};
use crate::error::{HallError, Result};
use crate::lincomb::LinComb;
use crate::points::{closed_points_up_to, ClosedPoint};
use crate::symfun::{hall_number, local_product};

/// `⊕_x O_{λ_x[x]}`; empty partitions are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct TorsionClass(BTreeMap<ClosedPoint, Partition>);

impl TorsionClass {
    /// The zero sheaf.
    pub fn zero() -> Self {
        TorsionClass(BTreeMap::new())
    }

    /// `O_{λ[x]}`.
    pub fn at(x: ClosedPoint, lambda: Partition) -> Self {
        let mut m = BTreeMap::new();
        if !lambda.is_empty() {
            m.insert(x, lambda);
        }
        TorsionClass(m)
    }

    pub fn from_map(map: BTreeMap<ClosedPoint, Partition>) -> Self {
        TorsionClass(map.into_iter().filter(|(_, l)| !l.is_empty()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn data(&self) -> &BTreeMap<ClosedPoint, Partition> {
        &self.0
    }

    pub fn partition_at(&self, x: &ClosedPoint) -> Option<&Partition> {
        self.0.get(x)
    }

    /// `Σ |λ_x| deg x`.
    pub fn degree(&self) -> i64 {
        self.0
            .iter()
            .map(|(x, l)| l.weight() as i64 * x.degree() as i64)
            .sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &ClosedPoint> {
        self.0.keys()
    }

    /// Direct sum; panics if supports meet.
    pub fn disjoint_sum(&self, other: &TorsionClass) -> TorsionClass {
        let mut m = self.0.clone();
        for (x, l) in &other.0 {
            assert!(m.insert(x.clone(), l.clone()).is_none(), "supports meet at {x}");
        }
        TorsionClass(m)
    }

    /// Every partition is a column `(1^r)`.
    pub fn is_elementary(&self) -> bool {
        self.0.values().all(Partition::is_column)
    }

    /// `|Aut|`, the product of the local automorphism orders.
    pub fn aut_order(&self, ground: GroundConfig) -> BigInt {
        self.0
            .iter()
            .map(|(x, l)| aut_order_torsion(l, x.qx(ground)))
            .product()
    }
}

impl fmt::Display for TorsionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "[0]");
        }
        write!(f, "[")?;
        write_torsion_summands(f, self)?;
        write!(f, "]")
    }
}

pub(crate) fn write_torsion_summands(f: &mut fmt::Formatter<'_>, t: &TorsionClass) -> fmt::Result {
    for (i, (x, l)) in t.0.iter().enumerate() {
        if i > 0 {
            write!(f, "⊕")?;
        }
        write!(f, "T({x},{l})")?;
    }
    Ok(())
}

pub type TorsionElement = LinComb<TorsionClass>;

/// Finite sums of `α ⊗ γ`.
pub type Tensor = LinComb<(TorsionClass, TorsionClass)>;

/// The unit `[0]`.
pub fn unit(ground: GroundConfig) -> TorsionElement {
    TorsionElement::basis(ground, TorsionClass::zero())
}

/// Product of two torsion classes.
pub fn mult_classes(ground: GroundConfig, a: &TorsionClass, b: &TorsionClass) -> Result<TorsionElement> {
    let mut partial: Vec<(BTreeMap<ClosedPoint, Partition>, BigInt)> =
        vec![(BTreeMap::new(), BigInt::one())];
    let mut points: Vec<&ClosedPoint> = a.0.keys().chain(b.0.keys()).collect();
    points.sort();
    points.dedup();
    for x in points {
        match (a.0.get(x), b.0.get(x)) {
            (Some(l), Some(m)) => {
                let local = local_product(l, m, x.qx(ground))?;
                let mut next = Vec::with_capacity(partial.len() * local.len());
                for (map, c) in &partial {
                    for (nu, g) in local.iter() {
                        let mut map = map.clone();
                        map.insert(x.clone(), nu.clone());
                        next.push((map, c * g));
                    }
                }
                partial = next;
            }
            (Some(l), None) | (None, Some(l)) => {
                for (map, _) in partial.iter_mut() {
                    map.insert(x.clone(), l.clone());
                }
            }
            (None, None) => unreachable!(),
        }
    }
    let mut out = TorsionElement::zero(ground);
    for (map, c) in partial {
        out.add_term(TorsionClass(map), Coeff::from_int(ground, c));
    }
    Ok(out)
}

/// Bilinear product of torsion elements.
pub fn mult_torsion(f: &TorsionElement, g: &TorsionElement) -> Result<TorsionElement> {
    let ground = f.ground();
    f.bilinear(g, |a, b| mult_classes(ground, a, b))
}

/// `ĥ_{r,x} = Σ_{|λ|=r} [O_{λ[x]}]`.
pub fn hhat_x(ground: GroundConfig, x: &ClosedPoint, r: u32) -> TorsionElement {
    let mut out = TorsionElement::zero(ground);
    for lam in partitions_of(r) {
        out.add_term(TorsionClass::at(x.clone(), lam), Coeff::one(ground));
    }
    out
}

/// A power series in `s` with torsion coefficients, truncated after `s^order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorsionSeries {
    coeffs: Vec<TorsionElement>,
}

impl TorsionSeries {
    pub fn one(ground: GroundConfig, order: usize) -> Self {
        let mut coeffs = vec![TorsionElement::zero(ground); order + 1];
        coeffs[0] = unit(ground);
        TorsionSeries { coeffs }
    }

    /// Series from `(exponent, coefficient)` pairs; exponents past `order` are dropped.
    pub fn from_terms(
        ground: GroundConfig,
        order: usize,
        terms: impl IntoIterator<Item = (usize, TorsionElement)>,
    ) -> Self {
        let mut coeffs = vec![TorsionElement::zero(ground); order + 1];
        for (k, c) in terms {
            if k <= order {
                coeffs[k] = coeffs[k].plus(&c);
            }
        }
        TorsionSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn ground(&self) -> GroundConfig {
        self.coeffs[0].ground()
    }

    pub fn coeff(&self, k: usize) -> &TorsionElement {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[TorsionElement] {
        &self.coeffs
    }

    pub fn mul(&self, other: &TorsionSeries) -> Result<TorsionSeries> {
        let order = self.order().min(other.order());
        let ground = self.ground();
        let mut out = vec![TorsionElement::zero(ground); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let p = mult_torsion(&self.coeffs[i], &other.coeffs[j])?;
                out[i + j] = out[i + j].plus(&p);
            }
        }
        Ok(TorsionSeries { coeffs: out })
    }

    /// `s ↦ c·s`: the coefficient of `s^k` is scaled by `c^k`.
    pub fn rescale(&self, c: &Coeff) -> TorsionSeries {
        let mut scale = Coeff::one(self.ground());
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for t in &self.coeffs {
            coeffs.push(t.scaled(&scale));
            scale = &scale * c;
        }
        TorsionSeries { coeffs }
    }

    /// Inverse of a series whose constant term is a unit multiple of `[0]`.
    pub fn inverse(&self) -> Result<TorsionSeries> {
        let ground = self.ground();
        let c0 = &self.coeffs[0];
        if c0.len() != 1 || c0.coeff(&TorsionClass::zero()).is_zero() {
            return Err(HallError::Invalid(
                "series constant term is not a scalar multiple of the unit".into(),
            ));
        }
        let c0_inv = c0.coeff(&TorsionClass::zero()).inv()?;
        let mut out: Vec<TorsionElement> = vec![unit(ground).scaled(&c0_inv)];
        for k in 1..=self.order() {
            let mut acc = TorsionElement::zero(ground);
            for i in 1..=k {
                if self.coeffs[i].is_zero() || out[k - i].is_zero() {
                    continue;
                }
                acc = acc.plus(&mult_torsion(&self.coeffs[i], &out[k - i])?);
            }
            out.push(acc.scaled(&-c0_inv.clone()));
        }
        Ok(TorsionSeries { coeffs: out })
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == unit(self.ground()) && self.coeffs[1..].iter().all(LinComb::is_zero)
    }
}

/// `Ĥ_x(s) = Σ_r ĥ_{r,x} s^{r deg x}`.
pub fn local_h_series(ground: GroundConfig, x: &ClosedPoint, order: usize) -> TorsionSeries {
    let d = x.degree() as usize;
    TorsionSeries::from_terms(
        ground,
        order,
        (0..=order / d).map(|r| {
            let c = if r == 0 {
                unit(ground)
            } else {
                hhat_x(ground, x, r as u32)
            };
            (r * d, c)
        }),
    )
}

/// `Ê_x(s) = 1 + Σ_r (-1)^r q_x^{r(r-1)/2} [O_{(1^r)[x]}] s^{r deg x}`.
pub fn local_e_series(ground: GroundConfig, x: &ClosedPoint, order: usize) -> TorsionSeries {
    let d = x.degree() as usize;
    let qx = BigInt::from(x.qx(ground));
    TorsionSeries::from_terms(
        ground,
        order,
        (0..=order / d).map(|r| {
            let mut c = num_traits::pow(qx.clone(), r * r.saturating_sub(1) / 2);
            if r % 2 == 1 {
                c = -c;
            }
            let class = TorsionClass::at(x.clone(), Partition::column(r as u32));
            (r * d, TorsionElement::single(ground, class, Coeff::from_int(ground, c)))
        }),
    )
}

/// `Q̂_x(s) = 1 + Σ_r (1 - q_x^{-1}) v^{r deg x} [O_{r[x]}] s^{r deg x}`.
pub fn local_q_series(ground: GroundConfig, x: &ClosedPoint, order: usize) -> TorsionSeries {
    let d = x.degree() as usize;
    let qx = x.qx(ground);
    let factor = Coeff::from_rational(
        ground,
        BigRational::new(BigInt::from(qx - 1), BigInt::from(qx)),
    );
    TorsionSeries::from_terms(
        ground,
        order,
        (0..=order / d).map(|r| {
            if r == 0 {
                return (0, unit(ground));
            }
            let c = &factor * &Coeff::v_pow(ground, (r * d) as i64);
            let class = TorsionClass::at(x.clone(), Partition::row(r as u32));
            (r * d, TorsionElement::single(ground, class, c))
        }),
    )
}

/// The series identities at one point, modulo `s^{order+1}`:
/// `Ĥ_x Ê_x = 1`, `Q̂_x = Ĥ_x(sv) / Ĥ_x(s/v)`, and the coefficients of
/// `Q̂_x` equal `|Aut O_{r[x]}| v^{-r deg x} [O_{r[x]}]`.
pub fn series_identity_check_local(ground: GroundConfig, x: &ClosedPoint, order: usize) -> Result<bool> {
    let h = local_h_series(ground, x, order);
    let e = local_e_series(ground, x, order);
    if !h.mul(&e)?.is_one() {
        return Ok(false);
    }
    let v = Coeff::v(ground);
    let q = local_q_series(ground, x, order);
    let ratio = h.rescale(&v).mul(&h.rescale(&v.inv()?).inverse()?)?;
    if ratio != q {
        return Ok(false);
    }
    let d = x.degree() as usize;
    let by_aut = TorsionSeries::from_terms(
        ground,
        order,
        (0..=order / d).map(|r| {
            let class = TorsionClass::at(x.clone(), Partition::row(r as u32));
            let aut = Coeff::from_int(ground, class.aut_order(ground));
            (r * d, TorsionElement::single(ground, class, aut * Coeff::v_pow(ground, -((r * d) as i64))))
        }),
    );
    Ok(by_aut == q)
}

/// The products `Ĥ(s)`, `Ê(s)`, `Q̂(s)` over all closed points, to a fixed order.
#[derive(Debug)]
pub struct GlobalSeries {
    pub h: TorsionSeries,
    pub e: TorsionSeries,
    pub q: TorsionSeries,
}

impl GlobalSeries {
    /// Only points of degree at most `order` contribute below `s^{order+1}`.
    pub fn compute(ground: GroundConfig, order: usize) -> Result<GlobalSeries> {
        let points = closed_points_up_to(ground, order.max(1) as u32);
        let product = |local: fn(GroundConfig, &ClosedPoint, usize) -> TorsionSeries| {
            points
                .iter()
                .try_fold(TorsionSeries::one(ground, order), |acc, x| acc.mul(&local(ground, x, order)))
        };
        let (h, (e, q)) = rayon::join(
            || product(local_h_series),
            || rayon::join(|| product(local_e_series), || product(local_q_series)),
        );
        Ok(GlobalSeries { h: h?, e: e?, q: q? })
    }
}

type SeriesKey = (GroundConfig, usize);

/// Shared, lazily computed global series; may return one of higher order.
pub fn global_series(ground: GroundConfig, order: usize) -> Result<Arc<GlobalSeries>> {
    static CACHE: OnceLock<RwLock<HashMap<SeriesKey, Arc<GlobalSeries>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache
        .read()
        .expect("cache lock")
        .iter()
        .find(|((g, o), _)| *g == ground && *o >= order)
    {
        return Ok(s.1.clone());
    }
    let s = Arc::new(GlobalSeries::compute(ground, order)?);
    Ok(cache
        .write()
        .expect("cache lock")
        .entry((ground, order))
        .or_insert(s)
        .clone())
}

/// `ĥ_r`, the degree-`r` coefficient of `Π_x Ĥ_x(s)`.
pub fn hhat(ground: GroundConfig, r: u32) -> Result<TorsionElement> {
    Ok(global_series(ground, r as usize)?.h.coeff(r as usize).clone())
}

/// `ê_r` from `ĥ_r + Σ_{s=1}^{r-1} ĥ_s ê_{r-s} + ê_r = 0`.
pub fn ehat(ground: GroundConfig, r: u32) -> Result<TorsionElement> {
    let hs = global_series(ground, r as usize)?;
    let mut e: Vec<TorsionElement> = vec![unit(ground)];
    for k in 1..=r as usize {
        let mut acc = hs.h.coeff(k).clone();
        for s in 1..k {
            acc = acc.plus(&mult_torsion(hs.h.coeff(s), &e[k - s])?);
        }
        e.push(acc.scaled(&-Coeff::one(ground)));
    }
    Ok(e.pop().expect("r >= 1"))
}

/// `q̂_r = v^{-r}((q^r - 1) ĥ_r - Σ_{s=1}^{r-1} v^{r-s} ĥ_s q̂_{r-s})`.
pub fn qhat(ground: GroundConfig, r: u32) -> Result<TorsionElement> {
    let hs = global_series(ground, r as usize)?;
    let mut qs: Vec<TorsionElement> = vec![unit(ground)];
    for k in 1..=r as usize {
        let mut acc = hs.h.coeff(k).scaled(&Coeff::from_int(ground, ground.q_pow(k as u32) - 1));
        for s in 1..k {
            let p = mult_torsion(hs.h.coeff(s), &qs[k - s])?;
            acc.add_assign_scaled(&p, &-Coeff::v_pow(ground, (k - s) as i64));
        }
        qs.push(acc.scaled(&Coeff::v_pow(ground, -(k as i64))));
    }
    Ok(qs.pop().expect("r >= 1"))
}

/// `α ⊗ γ` extended bilinearly.
pub fn tensor(a: &TorsionElement, b: &TorsionElement) -> Tensor {
    let mut out = Tensor::zero(a.ground());
    for (x, c) in a {
        for (y, d) in b {
            out.add_term((x.clone(), y.clone()), c * d);
        }
    }
    out
}

/// `Δ(β) = Σ (g_α g_γ / g_β) φ^β_{αγ} α ⊗ γ` on elements supported at `x`.
pub fn coproduct_local(ground: GroundConfig, x: &ClosedPoint, e: &TorsionElement) -> Result<Tensor> {
    let qx = x.qx(ground);
    let mut out = Tensor::zero(ground);
    for (class, c) in e {
        if class.support().any(|y| y != x) {
            return Err(HallError::Invalid(format!(
                "coproduct is only defined on classes supported at {x}; got {class}"
            )));
        }
        let beta = class.partition_at(x).cloned().unwrap_or_default();
        let g_beta = aut_order_torsion(&beta, qx);
        for w in 0..=beta.weight() {
            for alpha in partitions_of(w) {
                for gamma in partitions_of(beta.weight() - w) {
                    let phi = hall_number(&beta, &alpha, &gamma, qx)?;
                    if phi.is_zero() {
                        continue;
                    }
                    let num = aut_order_torsion(&alpha, qx) * aut_order_torsion(&gamma, qx) * phi;
                    let coef = Coeff::from_rational(ground, BigRational::new(num, g_beta.clone()));
                    out.add_term(
                        (
                            TorsionClass::at(x.clone(), alpha.clone()),
                            TorsionClass::at(x.clone(), gamma.clone()),
                        ),
                        &coef * c,
                    );
                }
            }
        }
    }
    Ok(out)
}

/// `Δ(ĥ_{r,x}) = Σ_s ĥ_{s,x} ⊗ ĥ_{r-s,x}` for all `r ≤ max_r`.
pub fn grouplike_check(ground: GroundConfig, x: &ClosedPoint, max_r: u32) -> Result<bool> {
    let h = |r: u32| {
        if r == 0 {
            unit(ground)
        } else {
            hhat_x(ground, x, r)
        }
    };
    for r in 0..=max_r {
        let lhs = coproduct_local(ground, x, &h(r))?;
        let mut rhs = Tensor::zero(ground);
        for s in 0..=r {
            rhs = rhs.plus(&tensor(&h(s), &h(r - s)));
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ_λ φ^λ_{αγ} g_α g_γ / g_λ` at a point with residue field size `qx`.
pub fn riedtmann_sum(alpha: &Partition, gamma: &Partition, qx: u64) -> Result<BigRational> {
    let ga = aut_order_torsion(alpha, qx);
    let gg = aut_order_torsion(gamma, qx);
    let mut acc = BigRational::zero();
    for (lam, phi) in local_product(alpha, gamma, qx)?.iter() {
        acc += BigRational::new(phi * &ga * &gg, aut_order_torsion(lam, qx));
    }
    Ok(acc)
}

/// Both sides of Green's formula for local torsion classes (the Euler form
/// vanishes, so no twist appears).
pub fn green_sides(
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
    delta: &Partition,
    qx: u64,
) -> Result<(BigRational, BigRational)> {
    let g = |p: &Partition| aut_order_torsion(p, qx);
    let mut lhs = BigRational::zero();
    if alpha.weight() + beta.weight() == gamma.weight() + delta.weight() {
        for lam in partitions_of(alpha.weight() + beta.weight()) {
            let a = hall_number(&lam, alpha, beta, qx)?;
            let b = hall_number(&lam, gamma, delta, qx)?;
            if !a.is_zero() && !b.is_zero() {
                lhs += BigRational::new(a * b, g(&lam));
            }
        }
    }
    lhs *= BigRational::from_integer(g(alpha) * g(beta) * g(gamma) * g(delta));
    let mut rhs = BigInt::zero();
    for wr in 0..=alpha.weight().min(gamma.weight()) {
        let wr2 = alpha.weight() - wr;
        let ws = gamma.weight() - wr;
        if ws > beta.weight() {
            continue;
        }
        let ws2 = beta.weight() - ws;
        if wr2 + ws2 != delta.weight() {
            continue;
        }
        for rho in partitions_of(wr) {
            for rho2 in partitions_of(wr2) {
                let f1 = hall_number(alpha, &rho, &rho2, qx)?;
                if f1.is_zero() {
                    continue;
                }
                for sigma in partitions_of(ws) {
                    let f3 = hall_number(gamma, &rho, &sigma, qx)?;
                    if f3.is_zero() {
                        continue;
                    }
                    for sigma2 in partitions_of(ws2) {
                        let f2 = hall_number(beta, &sigma, &sigma2, qx)?;
                        let f4 = hall_number(delta, &rho2, &sigma2, qx)?;
                        rhs += &f1 * f2 * &f3 * f4 * g(&rho) * g(&rho2) * g(&sigma) * g(&sigma2);
                    }
                }
            }
        }
    }
    Ok((lhs, BigRational::from_integer(rhs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::partitions_up_to;
    use crate::points::FqPoly;

    fn g(q: u32) -> GroundConfig {
        GroundConfig::new(q).unwrap()
    }

    fn pt(q: u32, c: &[i64]) -> ClosedPoint {
        ClosedPoint::finite(FqPoly::new(g(q), c.iter().copied())).unwrap()
    }

    fn p(parts: &[u32]) -> Partition {
        Partition::from_parts(parts.to_vec()).unwrap()
    }

    fn class(k: GroundConfig, x: &ClosedPoint, parts: &[u32]) -> TorsionElement {
        TorsionElement::basis(k, TorsionClass::at(x.clone(), p(parts)))
    }

    #[test]
    fn disjoint_and_local_products() {
        let k = g(2);
        let x = pt(2, &[0, 1]);
        let y = pt(2, &[1, 1]);
        let prod = mult_torsion(&class(k, &x, &[1]), &class(k, &y, &[1])).unwrap();
        let both = TorsionClass::at(x.clone(), p(&[1])).disjoint_sum(&TorsionClass::at(y, p(&[1])));
        assert_eq!(prod, TorsionElement::basis(k, both));

        let sq = mult_torsion(&class(k, &x, &[1]), &class(k, &x, &[1])).unwrap();
        assert_eq!(sq.coeff(&TorsionClass::at(x.clone(), p(&[2]))), k.one());
        assert_eq!(sq.coeff(&TorsionClass::at(x.clone(), p(&[1, 1]))), k.int(3));
        assert_eq!(sq.len(), 2);

        let f = class(k, &x, &[2, 1]);
        assert_eq!(mult_torsion(&f, &unit(k)).unwrap(), f);
    }

    #[test]
    fn hhat_at_q2() {
        let k = g(2);
        let h1 = hhat(k, 1).unwrap();
        assert_eq!(h1.len(), 3);
        assert!(h1.iter().all(|(c, v)| c.degree() == 1 && v.is_one()));
        let h2 = hhat(k, 2).unwrap();
        assert_eq!(h2.len(), 10);
        assert!(h2.iter().all(|(c, v)| c.degree() == 2 && v.is_one()));
    }

    #[test]
    fn hhat_is_sum_of_all_classes() {
        // coefficient 1 on every torsion class of degree r
        let k = g(3);
        for r in 1..=3 {
            let h = hhat(k, r).unwrap();
            assert!(h.iter().all(|(c, v)| c.degree() == r as i64 && v.is_one()));
        }
    }

    #[test]
    fn low_degree_recursions() {
        let k = g(2);
        assert_eq!(ehat(k, 1).unwrap(), hhat(k, 1).unwrap().scaled(&-k.one()));
        let expect = hhat(k, 1)
            .unwrap()
            .scaled(&(k.v_pow(-1) * k.int(k.q() - 1)));
        assert_eq!(qhat(k, 1).unwrap(), expect);
    }

    #[test]
    fn ehat_matches_point_product() {
        for q in [2u32, 3] {
            let k = g(q);
            let gs = global_series(k, 4).unwrap();
            for r in 1..=4 {
                assert_eq!(&ehat(k, r).unwrap(), gs.e.coeff(r as usize), "q={q} r={r}");
                assert_eq!(&qhat(k, r).unwrap(), gs.q.coeff(r as usize), "q={q} r={r}");
            }
        }
    }

    #[test]
    fn local_series_identities() {
        let k = g(2);
        assert!(series_identity_check_local(k, &ClosedPoint::Infinity, 0).unwrap());
        assert!(series_identity_check_local(k, &ClosedPoint::Infinity, 4).unwrap());
        assert!(series_identity_check_local(k, &pt(2, &[1, 1, 1]), 8).unwrap());
    }

    #[test]
    fn coproduct_examples() {
        let k = g(2);
        let x = ClosedPoint::Infinity;
        let d = coproduct_local(k, &x, &unit(k)).unwrap();
        assert_eq!(d, Tensor::basis(k, (TorsionClass::zero(), TorsionClass::zero())));
        let d = coproduct_local(k, &x, &class(k, &x, &[2])).unwrap();
        let one = TorsionClass::at(x.clone(), p(&[1]));
        assert_eq!(d.coeff(&(one.clone(), one)), Coeff::from_rational(k, BigRational::new(1.into(), 2.into())));
        assert_eq!(d.len(), 3);
        let y = pt(2, &[0, 1]);
        assert!(coproduct_local(k, &x, &class(k, &y, &[1])).is_err());
    }

    #[test]
    fn coproduct_is_coassociative() {
        let k = g(2);
        let x = ClosedPoint::Infinity;
        for lam in partitions_up_to(3) {
            let d = coproduct_local(k, &x, &class(k, &x, lam.parts())).unwrap();
            // (Δ ⊗ 1)Δ and (1 ⊗ Δ)Δ as maps to triples
            let mut left: BTreeMap<(TorsionClass, TorsionClass, TorsionClass), Coeff> = BTreeMap::new();
            let mut right = left.clone();
            for ((a, b), c) in &d {
                for ((a1, a2), c1) in &coproduct_local(k, &x, &TorsionElement::basis(k, a.clone())).unwrap() {
                    let e = left.entry((a1.clone(), a2.clone(), b.clone())).or_insert_with(|| k.zero());
                    *e += &(c * c1);
                }
                for ((b1, b2), c2) in &coproduct_local(k, &x, &TorsionElement::basis(k, b.clone())).unwrap() {
                    let e = right.entry((a.clone(), b1.clone(), b2.clone())).or_insert_with(|| k.zero());
                    *e += &(c * c2);
                }
            }
            left.retain(|_, c| !c.is_zero());
            right.retain(|_, c| !c.is_zero());
            assert_eq!(left, right, "{lam}");
        }
    }

    #[test]
    fn grouplike() {
        for q in [2u32, 3] {
            assert!(grouplike_check(g(q), &ClosedPoint::Infinity, 4).unwrap());
        }
        assert!(grouplike_check(g(2), &pt(2, &[1, 1, 1]), 4).unwrap());
    }

    #[test]
    fn riedtmann_and_green() {
        for lam_a in partitions_up_to(2) {
            for lam_c in partitions_up_to(2) {
                assert_eq!(riedtmann_sum(&lam_a, &lam_c, 2).unwrap(), BigRational::one());
            }
        }
        let ps = partitions_up_to(2);
        for a in &ps {
            for b in &ps {
                for c in &ps {
                    for d in &ps {
                        let (l, r) = green_sides(a, b, c, d, 2).unwrap();
                        assert_eq!(l, r, "{a} {b} {c} {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn series_inverse_round_trip() {
        let k = g(3);
        let x = ClosedPoint::Infinity;
        let h = local_h_series(k, &x, 4);
        assert!(h.mul(&h.inverse().unwrap()).unwrap().is_one());
    }
}
