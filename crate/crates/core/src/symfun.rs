//! Symmetric polynomials in the monomial basis, Hall–Littlewood polynomials
//! at a rational parameter, and local Hall numbers.
//!
//! The Hall algebra of finite-length modules over a discrete valuation ring
//! with residue field `F_qx` is identified with symmetric functions by
//! `[λ] ↦ qx^{-n(λ)} P_λ(x; 1/qx)`. Hall numbers are read off from the
//! expansion of `P_μ P_ν` in the `P` basis.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::combinat::{partitions_of, Partition};
use crate::error::{HallError, Result};

/// `Σ c_λ m_λ(x_1, …, x_m)` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymPoly {
    nvars: usize,
    coeffs: BTreeMap<Partition, BigRational>,
}

impl SymPoly {
    pub fn zero(nvars: usize) -> Self {
        SymPoly {
            nvars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(nvars, Partition::empty())
    }

    /// The monomial symmetric polynomial `m_λ`; zero if `λ` has more than `nvars` parts.
    pub fn monomial(nvars: usize, lambda: Partition) -> Self {
        let mut out = Self::zero(nvars);
        out.add_term(lambda, BigRational::one());
        out
    }

    /// The elementary symmetric polynomial `e_r = m_{(1^r)}`.
    pub fn elementary(nvars: usize, r: u32) -> Self {
        Self::monomial(nvars, Partition::column(r))
    }

    /// The complete symmetric polynomial `h_r = Σ_{|λ|=r} m_λ`.
    pub fn complete(nvars: usize, r: u32) -> Self {
        let mut out = Self::zero(nvars);
        for lam in partitions_of(r) {
            out.add_term(lam, BigRational::one());
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, lambda: &Partition) -> BigRational {
        self.coeffs.get(lambda).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, lambda: Partition, c: BigRational) {
        if c.is_zero() || lambda.length() > self.nvars {
            return;
        }
        let entry = self.coeffs.entry(lambda.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&lambda);
        }
    }

    pub fn add_scaled(&mut self, other: &SymPoly, scale: &BigRational) {
        assert_eq!(self.nvars, other.nvars, "symmetric polynomials in different variable counts");
        for (lam, c) in &other.coeffs {
            self.add_term(lam.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: &BigRational) -> SymPoly {
        let mut out = SymPoly::zero(self.nvars);
        out.add_scaled(self, scale);
        out
    }

    /// Exact product in the monomial basis.
    pub fn mult(&self, other: &SymPoly) -> SymPoly {
        assert_eq!(self.nvars, other.nvars, "symmetric polynomials in different variable counts");
        let mut out = SymPoly::zero(self.nvars);
        for (l1, c1) in &self.coeffs {
            for (l2, c2) in &other.coeffs {
                for (nu, k) in monomial_product(l1, l2, self.nvars) {
                    out.add_term(nu, c1 * c2 * BigRational::from_integer(BigInt::from(k)));
                }
            }
        }
        out
    }
}

/// `m_λ m_μ = Σ_ν k_ν m_ν` in `nvars` variables: `k_ν` counts pairs of
/// rearrangements `(a, b)` of the padded exponent vectors with `a + b = ν`.
fn monomial_product(lambda: &Partition, mu: &Partition, nvars: usize) -> BTreeMap<Partition, u64> {
    fn multiset(p: &Partition, nvars: usize) -> Vec<(u32, usize)> {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &x in p.parts() {
            *counts.entry(x).or_default() += 1;
        }
        *counts.entry(0).or_default() += nvars - p.length();
        counts.into_iter().filter(|&(_, c)| c > 0).collect()
    }
    fn rec(
        a: &mut Vec<(u32, usize)>,
        b: &mut Vec<(u32, usize)>,
        prev: u32,
        cur: &mut Vec<u32>,
        left: usize,
        out: &mut BTreeMap<Partition, u64>,
    ) {
        if left == 0 {
            *out.entry(Partition::new(cur.clone())).or_default() += 1;
            return;
        }
        for i in 0..a.len() {
            if a[i].1 == 0 {
                continue;
            }
            for j in 0..b.len() {
                if b[j].1 == 0 {
                    continue;
                }
                let s = a[i].0 + b[j].0;
                if s > prev {
                    continue;
                }
                a[i].1 -= 1;
                b[j].1 -= 1;
                cur.push(s);
                rec(a, b, s, cur, left - 1, out);
                cur.pop();
                a[i].1 += 1;
                b[j].1 += 1;
            }
        }
    }
    let mut out = BTreeMap::new();
    if lambda.length() > nvars || mu.length() > nvars {
        return out;
    }
    let mut a = multiset(lambda, nvars);
    let mut b = multiset(mu, nvars);
    rec(&mut a, &mut b, u32::MAX, &mut Vec::new(), nvars, &mut out);
    out
}

/// `ψ_{λ/μ}(t) = Π (1 - t^{m_i(μ)})` over the `i` with `m_i(μ) = m_i(λ) + 1`.
fn psi(lambda: &Partition, mu: &Partition, t: &BigRational) -> BigRational {
    let mut acc = BigRational::one();
    let mut parts: Vec<u32> = mu.parts().to_vec();
    parts.dedup();
    for i in parts {
        let mm = mu.multiplicity(i);
        if mm == lambda.multiplicity(i) + 1 {
            acc *= BigRational::one() - Pow::pow(t, mm);
        }
    }
    acc
}

/// Coefficient of `x_1^{α_1} … x_k^{α_k}` in `P_λ(x_1, …, x_k; t)`, peeling
/// off the last variable by the branching rule.
fn hl_coefficient(
    lambda: &Partition,
    alpha: &[u32],
    t: &BigRational,
    memo: &mut HashMap<(Partition, usize), BigRational>,
) -> BigRational {
    let k = alpha.len();
    if k == 0 {
        return if lambda.is_empty() {
            BigRational::one()
        } else {
            BigRational::zero()
        };
    }
    if lambda.length() > k {
        return BigRational::zero();
    }
    if let Some(c) = memo.get(&(lambda.clone(), k)) {
        return c.clone();
    }
    let mut acc = BigRational::zero();
    for mu in lambda.horizontal_strips_removed(alpha[k - 1]) {
        let inner = hl_coefficient(&mu, &alpha[..k - 1], t, memo);
        if !inner.is_zero() {
            acc += psi(lambda, &mu, t) * inner;
        }
    }
    memo.insert((lambda.clone(), k), acc.clone());
    acc
}

type HlKey = (Partition, usize, BigRational);

fn hl_cache() -> &'static RwLock<HashMap<HlKey, Arc<SymPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<HlKey, Arc<SymPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Monomial expansion of the Hall–Littlewood polynomial `P_λ(x_1, …, x_m; t)`.
pub fn hl_poly(lambda: &Partition, m: usize, t: &BigRational) -> Arc<SymPoly> {
    assert!(
        m >= lambda.length().max(1),
        "{lambda} does not fit in {m} variables"
    );
    let key = (lambda.clone(), m, t.clone());
    if let Some(p) = hl_cache().read().expect("cache lock").get(&key) {
        return p.clone();
    }
    let mut out = SymPoly::zero(m);
    for kappa in partitions_of(lambda.weight()) {
        if kappa.length() > m || !lambda.dominates(&kappa) {
            continue;
        }
        // the coefficient of m_κ is stable in the number of variables
        let mut memo = HashMap::new();
        let c = hl_coefficient(lambda, kappa.parts(), t, &mut memo);
        out.add_term(kappa, c);
    }
    let out = Arc::new(out);
    hl_cache()
        .write()
        .expect("cache lock")
        .entry(key)
        .or_insert(out)
        .clone()
}

/// Coefficients `c_λ` with `f = Σ c_λ P_λ(·; t)`, by back-substitution from
/// the lexicographically largest monomial.
pub fn expand_in_p(f: &SymPoly, t: &BigRational) -> BTreeMap<Partition, BigRational> {
    let mut rest = f.clone();
    let mut out = BTreeMap::new();
    while let Some((kappa, c)) = rest.coeffs.last_key_value().map(|(k, c)| (k.clone(), c.clone())) {
        let p = hl_poly(&kappa, rest.nvars, t);
        rest.add_scaled(&p, &-c.clone());
        debug_assert!(rest.coeff(&kappa).is_zero());
        out.insert(kappa, c);
    }
    out
}

type ProductKey = (Partition, Partition, u64);
type ProductCache = RwLock<HashMap<ProductKey, Arc<BTreeMap<Partition, BigInt>>>>;

fn product_cache() -> &'static ProductCache {
    static CACHE: OnceLock<ProductCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// All Hall numbers `g^λ_{μν}(qx)` for fixed `μ, ν`, as a map `λ ↦ g`
/// without zero entries.
pub fn local_product(mu: &Partition, nu: &Partition, qx: u64) -> Result<Arc<BTreeMap<Partition, BigInt>>> {
    let key = (mu.clone(), nu.clone(), qx);
    if let Some(p) = product_cache().read().expect("cache lock").get(&key) {
        return Ok(p.clone());
    }
    let m = ((mu.weight() + nu.weight()) as usize).max(1);
    let t = BigRational::new(BigInt::one(), BigInt::from(qx));
    let prod = hl_poly(mu, m, &t).mult(&hl_poly(nu, m, &t));
    let qx_r = BigRational::from_integer(BigInt::from(qx));
    let mut out = BTreeMap::new();
    for (lambda, f) in expand_in_p(&prod, &t) {
        let e = lambda.n_stat() as i32 - mu.n_stat() as i32 - nu.n_stat() as i32;
        let g = f * Pow::pow(&qx_r, e);
        if !g.is_integer() {
            return Err(HallError::NonIntegral {
                context: format!("g^{lambda}_{{{mu},{nu}}}({qx})"),
                value: g.to_string(),
            });
        }
        out.insert(lambda, g.to_integer());
    }
    let out = Arc::new(out);
    Ok(product_cache()
        .write()
        .expect("cache lock")
        .entry(key)
        .or_insert(out)
        .clone())
}

/// The Hall number `g^λ_{μν}(qx)`: the number of submodules of type `ν`
/// with quotient of type `μ` in the module of type `λ`.
pub fn hall_number(lambda: &Partition, mu: &Partition, nu: &Partition, qx: u64) -> Result<BigInt> {
    if qx < 2 {
        return Err(HallError::Invalid(format!("residue field size {qx} < 2")));
    }
    if lambda.weight() != mu.weight() + nu.weight() {
        return Ok(BigInt::zero());
    }
    Ok(local_product(mu, nu, qx)?
        .get(lambda)
        .cloned()
        .unwrap_or_else(BigInt::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::partitions_up_to;

    fn p(parts: &[u32]) -> Partition {
        Partition::from_parts(parts.to_vec()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn monomial_products() {
        let x = SymPoly::monomial(2, p(&[1]));
        let sq = x.mult(&x);
        assert_eq!(sq.coeff(&p(&[2])), rat(1, 1));
        assert_eq!(sq.coeff(&p(&[1, 1])), rat(2, 1));
        assert_eq!(sq.coeffs().len(), 2);
        assert_eq!(x.mult(&SymPoly::one(2)), x);
        // m_1 m_1 in one variable loses m_{11}
        let y = SymPoly::monomial(1, p(&[1]));
        assert_eq!(y.mult(&y), SymPoly::monomial(1, p(&[2])));
    }

    #[test]
    fn monomial_products_by_evaluation() {
        // evaluate at integer points and compare
        fn eval(f: &SymPoly, xs: &[i64]) -> BigRational {
            let mut acc = BigRational::zero();
            for (lam, c) in f.coeffs() {
                acc += c * BigRational::from_integer(eval_monomial(lam, xs));
            }
            acc
        }
        fn eval_monomial(lam: &Partition, xs: &[i64]) -> BigInt {
            // sum over distinct rearrangements of the padded exponent vector
            let mut exps: Vec<u32> = lam.parts().to_vec();
            exps.resize(xs.len(), 0);
            exps.sort_unstable();
            let mut acc = BigInt::zero();
            loop {
                let mut term = BigInt::one();
                for (x, e) in xs.iter().zip(&exps) {
                    term *= Pow::pow(BigInt::from(*x), *e);
                }
                acc += term;
                // next permutation
                let Some(i) = (1..exps.len()).rev().find(|&i| exps[i - 1] < exps[i]) else {
                    break;
                };
                let j = (i..exps.len()).rev().find(|&j| exps[j] > exps[i - 1]).unwrap();
                exps.swap(i - 1, j);
                exps[i..].reverse();
            }
            acc
        }
        let xs = [2i64, -1, 3, 5];
        for l1 in partitions_up_to(3) {
            for l2 in partitions_up_to(3) {
                let a = SymPoly::monomial(4, l1.clone());
                let b = SymPoly::monomial(4, l2.clone());
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                assert_eq!(eval(&a.mult(&b), &xs), eval(&a, &xs) * eval(&b, &xs), "{l1} {l2}");
            }
        }
    }

    #[test]
    fn hall_littlewood_small() {
        let t = rat(1, 3);
        assert_eq!(*hl_poly(&p(&[1, 1]), 2, &t), SymPoly::monomial(2, p(&[1, 1])));
        let p2 = hl_poly(&p(&[2]), 2, &t);
        assert_eq!(p2.coeff(&p(&[2])), rat(1, 1));
        assert_eq!(p2.coeff(&p(&[1, 1])), rat(2, 3));
        // t = 1 gives monomials
        assert_eq!(*hl_poly(&p(&[2, 1]), 3, &rat(1, 1)), SymPoly::monomial(3, p(&[2, 1])));
        // t = 0 gives Schur functions: s_{21} = m_{21} + 2 m_{111}
        let s21 = hl_poly(&p(&[2, 1]), 3, &rat(0, 1));
        assert_eq!(s21.coeff(&p(&[1, 1, 1])), rat(2, 1));
    }

    #[test]
    fn columns_are_elementary() {
        let t = rat(2, 7);
        for r in 1..=5 {
            assert_eq!(*hl_poly(&Partition::column(r), 6, &t), SymPoly::elementary(6, r));
        }
    }

    #[test]
    fn expansion_round_trip() {
        let t = rat(1, 2);
        for lam in partitions_up_to(5) {
            let m = (lam.weight() as usize).max(1);
            let f = hl_poly(&lam, m, &t);
            let e = expand_in_p(&f, &t);
            assert_eq!(e, BTreeMap::from([(lam.clone(), rat(1, 1))]));
        }
        let h2 = SymPoly::complete(2, 2);
        let e = expand_in_p(&h2, &t);
        assert_eq!(e, BTreeMap::from([(p(&[2]), rat(1, 1)), (p(&[1, 1]), t.clone())]));
    }

    #[test]
    fn hall_numbers_small() {
        for qx in [2u64, 3, 4, 5] {
            let b = BigInt::from(qx);
            assert_eq!(hall_number(&p(&[1, 1]), &p(&[1]), &p(&[1]), qx).unwrap(), b + 1);
            assert_eq!(hall_number(&p(&[2]), &p(&[1]), &p(&[1]), qx).unwrap(), BigInt::one());
            for lam in partitions_up_to(3) {
                assert_eq!(
                    hall_number(&lam, &lam, &Partition::empty(), qx).unwrap(),
                    BigInt::one()
                );
            }
        }
        assert_eq!(
            hall_number(&p(&[2]), &p(&[1]), &p(&[2]), 2).unwrap(),
            BigInt::zero()
        );
    }

    #[test]
    fn hall_numbers_symmetric() {
        for qx in [2u64, 3] {
            for lam in partitions_up_to(5) {
                for w in 0..=lam.weight() {
                    for mu in partitions_of(w) {
                        for nu in partitions_of(lam.weight() - w) {
                            assert_eq!(
                                hall_number(&lam, &mu, &nu, qx).unwrap(),
                                hall_number(&lam, &nu, &mu, qx).unwrap(),
                                "{lam} {mu} {nu}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hall_numbers_associative() {
        let qx = 2;
        let parts = partitions_up_to(2);
        for mu in &parts {
            for nu in &parts {
                for ka in &parts {
                    // ([μ][ν])[κ] vs [μ]([ν][κ])
                    let mut left: BTreeMap<Partition, BigInt> = BTreeMap::new();
                    for (rho, g1) in local_product(mu, nu, qx).unwrap().iter() {
                        for (sigma, g2) in local_product(rho, ka, qx).unwrap().iter() {
                            *left.entry(sigma.clone()).or_default() += g1 * g2;
                        }
                    }
                    let mut right: BTreeMap<Partition, BigInt> = BTreeMap::new();
                    for (rho, g1) in local_product(nu, ka, qx).unwrap().iter() {
                        for (sigma, g2) in local_product(mu, rho, qx).unwrap().iter() {
                            *right.entry(sigma.clone()).or_default() += g1 * g2;
                        }
                    }
                    assert_eq!(left, right, "{mu} {nu} {ka}");
                }
            }
        }
    }

    #[test]
    fn complete_is_sum_of_scaled_hall_littlewood() {
        for qx in [2u64, 3] {
            let t = BigRational::new(BigInt::one(), BigInt::from(qx));
            for r in 1..=5u32 {
                let m = r as usize;
                let mut acc = SymPoly::zero(m);
                for lam in partitions_of(r) {
                    let scale = Pow::pow(&t, lam.n_stat());
                    acc.add_scaled(&hl_poly(&lam, m, &t), &scale);
                }
                assert_eq!(acc, SymPoly::complete(m, r), "r={r} qx={qx}");
            }
        }
    }
}
