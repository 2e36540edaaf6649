//! Brute-force counts over a small prime field, used to check the closed
//! formulas and the Hall numbers computed elsewhere. Every enumeration is
//! bounded by an [`OracleBudget`]; exceeding it is an error.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Pow;
use rayon::prelude::*;

use crate::coeff::GroundConfig;
use crate::combinat::Partition;
use crate::error::{HallError, Result};
use crate::points::FqPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest number of candidates a single count may enumerate.
    pub max_candidates: u128,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_candidates: 50_000_000,
        }
    }
}

impl OracleBudget {
    fn check(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.max_candidates {
            Err(HallError::BudgetExceeded {
                what,
                needed,
                budget: self.max_candidates,
            })
        } else {
            Ok(())
        }
    }
}

fn count_pow(q: u32, k: u32) -> u128 {
    (q as u128).saturating_pow(k)
}

/// All coefficient vectors of length `len` over `F_q`, as base-`q` digits.
fn vectors(q: u32, len: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = count_pow(q, len as u32) as u64;
    (0..total).map(move |mut idx| {
        let mut v = vec![0; len];
        for c in v.iter_mut() {
            *c = (idx % q as u64) as u32;
            idx /= q as u64;
        }
        v
    })
}

/// A binary form `Σ c_i T^{e-i} U^i` of degree `e`, stored as `(c_0, …, c_e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Form {
    degree: i64,
    coeffs: Vec<u32>,
}

impl Form {
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `F(1, z)`.
    fn chart_t(&self, ground: GroundConfig) -> FqPoly {
        FqPoly::new(ground, self.coeffs.iter().map(|&c| c as i64))
    }

    /// `F(w, 1)`.
    fn chart_u(&self, ground: GroundConfig) -> FqPoly {
        FqPoly::new(ground, self.coeffs.iter().rev().map(|&c| c as i64))
    }

    /// Exponent of `T` dividing the form.
    fn t_multiplicity(&self, ground: GroundConfig) -> i64 {
        self.degree - self.chart_t(ground).degree().map_or(0, |d| d as i64)
    }
}

/// Every form of degree `e`; only the zero form if `e < 0`.
fn forms(q: u32, e: i64) -> Vec<Form> {
    if e < 0 {
        return vec![Form {
            degree: e,
            coeffs: Vec::new(),
        }];
    }
    vectors(q, e as usize + 1)
        .map(|coeffs| Form { degree: e, coeffs })
        .collect()
}

fn coprime_forms(ground: GroundConfig, f: &Form, g: &Form) -> bool {
    let t_common = f.t_multiplicity(ground).min(g.t_multiplicity(ground));
    t_common == 0 && f.chart_t(ground).gcd(&g.chart_t(ground)) == FqPoly::one(ground)
}

/// Number of pairs of coprime nonzero binary forms of degrees `a` and `b`.
pub fn phi_bruteforce(ground: GroundConfig, a: u32, b: u32, budget: &OracleBudget) -> Result<u64> {
    let q = ground.q();
    budget.check("coprime pairs", count_pow(q, a + 1) * count_pow(q, b + 1))?;
    let fa: Vec<Form> = forms(q, a as i64).into_iter().filter(|f| !f.is_zero()).collect();
    let fb: Vec<Form> = forms(q, b as i64).into_iter().filter(|f| !f.is_zero()).collect();
    Ok(fa
        .par_iter()
        .map(|f| fb.iter().filter(|g| coprime_forms(ground, f, g)).count() as u64)
        .sum())
}

/// The closed form for [`phi_bruteforce`].
pub fn phi_closed_form(q: u32, a: u32, b: u32) -> BigInt {
    let q = BigInt::from(q);
    if a == 0 || b == 0 {
        (&q - 1) * (Pow::pow(&q, a + b + 1) - 1)
    } else {
        (&q - 1) * (&q * &q - 1) * Pow::pow(&q, a + b - 1)
    }
}

/// Polynomials of degree at most `d`, zero included.
fn polys_up_to(ground: GroundConfig, d: u32) -> Vec<FqPoly> {
    let q = ground.q();
    vectors(q, d as usize + 1)
        .map(|v| FqPoly::new(ground, v.into_iter().map(i64::from)))
        .collect()
}

/// Number of `(H, I, J, L)` of degrees at most `a, d-a, a-1, d-a-1` with
/// `HI - JL = P`. The degrees are those of the binary forms the polynomials
/// come from, so lower actual degrees are allowed; for `H` and `I` the
/// equation forces them anyway.
pub fn quadruple_count(ground: GroundConfig, p: &FqPoly, a: u32, budget: &OracleBudget) -> Result<u64> {
    let d = p.degree().ok_or_else(|| HallError::Invalid("zero polynomial".into()))? as u32;
    if d < 2 || a < 1 || a > d - 1 {
        return Err(HallError::Invalid(format!("need d >= 2 and 1 <= a <= d-1, got d={d}, a={a}")));
    }
    let q = ground.q();
    budget.check("quadruples", count_pow(q, 2 * d + 2))?;
    let hs = polys_up_to(ground, a);
    let is = polys_up_to(ground, d - a);
    let js = polys_up_to(ground, a - 1);
    let ls = polys_up_to(ground, d - a - 1);
    let jl: Vec<FqPoly> = js.iter().flat_map(|j| ls.iter().map(move |l| j.mul(l))).collect();
    Ok(hs
        .par_iter()
        .map(|h| {
            let mut n = 0u64;
            for i in &is {
                let hi = h.mul(i);
                n += jl.iter().filter(|x| hi.sub(x) == *p).count() as u64;
            }
            n
        })
        .sum())
}

/// Whether `k[t] → k[t]² → k[t]`, `1 ↦ (h, i)`, `(x, y) ↦ jx + ly`, is exact.
fn chart_exact(h: &FqPoly, i: &FqPoly, j: &FqPoly, l: &FqPoly) -> bool {
    let unit = |a: &FqPoly, b: &FqPoly| a.gcd(b).degree() == Some(0);
    h.mul(j).add(&i.mul(l)).is_zero() && unit(j, l) && unit(h, i)
}

/// Hall number `φ^{[O(p)⊕O(p')]}_{[O(n)],[O(m)]}`: the number of pairs
/// `(f, g)` forming a short exact sequence
/// `0 → O(m) → O(p)⊕O(p') → O(n) → 0`, with morphisms given by binary forms
/// and exactness tested on both affine charts, divided by `(q-1)²`.
pub fn ext_count_bundles(ground: GroundConfig, m: i64, n: i64, p: i64, p2: i64, budget: &OracleBudget) -> Result<u64> {
    let q = ground.q();
    let size = |e: i64| if e < 0 { 0 } else { e as u32 + 1 };
    let needed = count_pow(q, size(p - m) + size(p2 - m) + size(n - p) + size(n - p2));
    budget.check("exact sequences", needed)?;
    let hs = forms(q, p - m);
    let is = forms(q, p2 - m);
    let js = forms(q, n - p);
    let ls = forms(q, n - p2);
    // surjections first, then the injections completing them
    let surj: Vec<(&Form, &Form)> = js
        .iter()
        .flat_map(|j| ls.iter().map(move |l| (j, l)))
        .filter(|(j, l)| !(j.is_zero() && l.is_zero()))
        .collect();
    let charts = |f: &Form| (f.chart_t(ground), f.chart_u(ground));
    let total: u64 = surj
        .par_iter()
        .map(|(j, l)| {
            let (jt, ju) = charts(j);
            let (lt, lu) = charts(l);
            let mut n = 0u64;
            for h in &hs {
                let (ht, hu) = charts(h);
                for i in &is {
                    let (it, iu) = charts(i);
                    if chart_exact(&ht, &it, &jt, &lt) && chart_exact(&hu, &iu, &ju, &lu) {
                        n += 1;
                    }
                }
            }
            n
        })
        .sum();
    let aut = ((q - 1) as u64).pow(2);
    if !total.is_multiple_of(aut) {
        return Err(HallError::NonIntegral {
            context: "extension count".into(),
            value: format!("{total}/{aut}"),
        });
    }
    Ok(total / aut)
}

/// Dense matrices over `F_q`, row-major.
type Matrix = Vec<Vec<u32>>;

fn rank(mut rows: Matrix, q: u32) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = crate::points::inv_mod(rows[r][c], q);
        for x in rows[r].iter_mut() {
            *x = (*x as u64 * inv as u64 % q as u64) as u32;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                let pivot_row = rows[r].clone();
                for (x, &p) in rows[i].iter_mut().zip(&pivot_row) {
                    let sub = (f as u64 * p as u64 % q as u64) as u32;
                    *x = (*x + q - sub) % q;
                }
            }
        }
        r += 1;
    }
    r
}

/// The nilpotent operator of Jordan type `λ` on `F_q^{|λ|}`: on each block
/// `e_1 ↦ e_2 ↦ … ↦ e_k ↦ 0`.
fn nilpotent(lambda: &Partition) -> Vec<Option<usize>> {
    let mut image = Vec::new();
    for &k in lambda.parts() {
        let start = image.len();
        for i in 0..k as usize {
            image.push(if i + 1 < k as usize { Some(start + i + 1) } else { None });
        }
    }
    image
}

fn apply(op: &[Option<usize>], v: &[u32]) -> Vec<u32> {
    let mut out = vec![0; v.len()];
    for (i, &c) in v.iter().enumerate() {
        if let Some(j) = op[i] {
            out[j] = c;
        }
    }
    out
}

/// Partition whose conjugate has parts `dim ker N^i - dim ker N^{i-1}`.
fn jordan_type_from_kernels(kernel_dims: &[usize]) -> Partition {
    let mut conj = Vec::new();
    for w in kernel_dims.windows(2) {
        if w[1] > w[0] {
            conj.push((w[1] - w[0]) as u32);
        }
    }
    Partition::new(conj).conjugate()
}

/// Reduced row echelon bases of all `k`-dimensional subspaces of `F_q^n`.
fn subspaces(q: u32, n: usize, k: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    fn choose(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            choose(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    choose(n, k, 0, &mut Vec::new(), &mut pivots);
    for piv in pivots {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| ((piv[r] + 1)..n).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
            .collect();
        for vals in vectors(q, free.len()) {
            let mut m = vec![vec![0; n]; k];
            for (r, &c) in piv.iter().enumerate() {
                m[r][c] = 1;
            }
            for (&(r, c), &x) in free.iter().zip(&vals) {
                m[r][c] = x;
            }
            out.push(m);
        }
    }
    out
}

/// Upper bound on the number of subspaces of `F_q^n`.
fn subspace_count(q: u32, n: u32) -> u128 {
    (0..=n).map(|k| count_pow(q, k * (n - k))).sum()
}

/// For the module of type `λ`, the number of submodules with given
/// (quotient type, submodule type).
pub fn submodule_type_counts(
    ground: GroundConfig,
    lambda: &Partition,
    budget: &OracleBudget,
) -> Result<BTreeMap<(Partition, Partition), u64>> {
    let q = ground.q();
    let n = lambda.weight() as usize;
    budget.check("subspaces", subspace_count(q, n as u32))?;
    let op = nilpotent(lambda);
    let depth = lambda.part(0) as usize;
    let per_dim: Vec<BTreeMap<(Partition, Partition), u64>> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let mut counts = BTreeMap::new();
            for w in subspaces(q, n, k) {
                let images: Matrix = w.iter().map(|v| apply(&op, v)).collect();
                let mut aug = w.clone();
                aug.extend(images.iter().cloned());
                if rank(aug, q) != k {
                    continue;
                }
                // N^i restricted to W, and N^i V + W
                let mut sub_kernels = vec![0];
                let mut quot_kernels = vec![0];
                let mut powers_w = w.clone();
                let mut powers_v: Matrix = (0..n)
                    .map(|i| {
                        let mut e = vec![0; n];
                        e[i] = 1;
                        e
                    })
                    .collect();
                for _ in 0..depth {
                    powers_w = powers_w.iter().map(|v| apply(&op, v)).collect();
                    powers_v = powers_v.iter().map(|v| apply(&op, v)).collect();
                    sub_kernels.push(k - rank(powers_w.clone(), q));
                    let mut span = powers_v.clone();
                    span.extend(w.iter().cloned());
                    let image_rank = rank(span, q) - k;
                    quot_kernels.push((n - k) - image_rank);
                }
                let key = (jordan_type_from_kernels(&quot_kernels), jordan_type_from_kernels(&sub_kernels));
                *counts.entry(key).or_insert(0) += 1;
            }
            counts
        })
        .collect();
    let mut out = BTreeMap::new();
    for m in per_dim {
        for (k, c) in m {
            *out.entry(k).or_insert(0) += c;
        }
    }
    Ok(out)
}

/// Number of submodules of type `ν` with quotient of type `μ` in the module
/// of type `λ` over `F_q[t]`.
pub fn submodule_hall_count(
    ground: GroundConfig,
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
    budget: &OracleBudget,
) -> Result<u64> {
    let counts = submodule_type_counts(ground, lambda, budget)?;
    Ok(counts.get(&(mu.clone(), nu.clone())).copied().unwrap_or(0))
}

/// Number of invertible linear maps commuting with the nilpotent of type `λ`.
pub fn aut_count_module(ground: GroundConfig, lambda: &Partition, budget: &OracleBudget) -> Result<u64> {
    let q = ground.q();
    let n = lambda.weight() as usize;
    budget.check("matrices", count_pow(q, (n * n) as u32))?;
    let op = nilpotent(lambda);
    let total = count_pow(q, (n * n) as u32) as u64;
    Ok((0..total)
        .into_par_iter()
        .filter(|&idx| {
            let mut idx = idx;
            // columns A e_j
            let mut cols = vec![vec![0u32; n]; n];
            for col in cols.iter_mut() {
                for c in col.iter_mut() {
                    *c = (idx % q as u64) as u32;
                    idx /= q as u64;
                }
            }
            // A N e_j = N A e_j
            let commutes = (0..n).all(|j| {
                let an = match op[j] {
                    Some(k) => cols[k].clone(),
                    None => vec![0; n],
                };
                an == apply(&op, &cols[j])
            });
            commutes && rank(cols, q) == n
        })
        .count() as u64)
}
