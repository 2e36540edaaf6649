//! The positive part `V⁺` of the quantum loop algebra of `sl_2`, given by
//! generators `x_n⁺` and `P̃_r` and the relations
//!
//! ```text
//! x_{m+1} x_n - v² x_n x_{m+1} = v² x_m x_{n+1} - x_{n+1} x_m
//! P̃_r x_n = Σ_{s=0}^{r} [s+1] x_{n+s} P̃_{r-s}
//! ```
//!
//! straightened independently of the Hall algebra, and the comparison of the
//! two normal forms.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{Coeff, GroundConfig};
use crate::combinat::{partitions_of, Partition};
use crate::error::Result;
use crate::hall_global;
use crate::hall_torsion::{self, mult_torsion, TorsionElement};
use crate::lincomb::{self, LinComb};
use crate::pbw::{self, render_element, Gen, PbwElement, PbwMonomial, Rules, Word};

pub type VElement = PbwElement;

/// Straightening by the defining relations of `V⁺`.
#[derive(Clone, Copy, Debug)]
pub struct VRules {
    ground: GroundConfig,
}

impl VRules {
    pub fn new(ground: GroundConfig) -> Self {
        VRules { ground }
    }
}

impl Rules for VRules {
    fn ground(&self) -> GroundConfig {
        self.ground
    }

    /// `x_n x_m = q x_m x_n + q x_{n-1} x_{m+1} - x_{m+1} x_{n-1}`; for
    /// `n = m+1` the relation reads `2 x_{m+1} x_m = 2q x_m x_{m+1}`.
    fn line_swap(&self, n: i64, m: i64) -> Result<Vec<(Word, Coeff)>> {
        let q = self.ground.int(self.ground.q() as i64);
        if n == m + 1 {
            return Ok(vec![(vec![Gen::Line(m), Gen::Line(n)], q)]);
        }
        Ok(vec![
            (vec![Gen::Line(m), Gen::Line(n)], q.clone()),
            (vec![Gen::Line(n - 1), Gen::Line(m + 1)], q),
            (vec![Gen::Line(m + 1), Gen::Line(n - 1)], -self.ground.one()),
        ])
    }

    fn tor_line(&self, r: u32, n: i64) -> Result<Vec<(Word, Coeff)>> {
        Ok((0..=r)
            .map(|s| {
                (
                    vec![Gen::Line(n + s as i64), Gen::Tor(r - s)],
                    self.ground.qnum(s as i64 + 1),
                )
            })
            .collect())
    }
}

/// Normal form of `coeff · w_1 ⋯ w_k` for `Line(n) = x_n⁺`, `Tor(r) = P̃_r`.
pub fn v_normal_form(ground: GroundConfig, coeff: Coeff, word: &[Gen]) -> Result<VElement> {
    pbw::straighten_word(&VRules::new(ground), coeff, word)
}

pub fn v_product(f: &VElement, g: &VElement) -> Result<VElement> {
    pbw::pbw_product(&VRules::new(f.ground()), f, g)
}

fn ptilde(ground: GroundConfig, r: u32) -> VElement {
    VElement::basis(ground, PbwMonomial::tor(r))
}

/// `P_1, …, P_r` from `P̃_r + Σ_{s=1}^{r-1} P̃_s P_{r-s} + P_r = 0`.
pub fn p_series(ground: GroundConfig, r: u32) -> Result<Vec<VElement>> {
    let mut ps = vec![VElement::basis(ground, PbwMonomial::one())];
    for k in 1..=r {
        let mut acc = ptilde(ground, k);
        for s in 1..k {
            acc = acc.plus(&v_product(&ptilde(ground, s), &ps[(k - s) as usize])?);
        }
        ps.push(acc.scaled(&-ground.one()));
    }
    Ok(ps)
}

pub fn p_from_ptilde(ground: GroundConfig, r: u32) -> Result<VElement> {
    Ok(p_series(ground, r)?.pop().expect("nonempty"))
}

/// `ψ̃_1⁺, …, ψ̃_r⁺` from `[r] P̃_r = ψ̃_r⁺ + Σ_{s=1}^{r-1} v^{-s} P̃_s ψ̃_{r-s}⁺`.
pub fn psitilde_series(ground: GroundConfig, r: u32) -> Result<Vec<VElement>> {
    let mut psi = vec![VElement::basis(ground, PbwMonomial::one())];
    for k in 1..=r {
        let mut acc = ptilde(ground, k).scaled(&ground.qnum(k as i64));
        for s in 1..k {
            let p = v_product(&ptilde(ground, s), &psi[(k - s) as usize])?;
            acc.add_assign_scaled(&p, &-ground.v_pow(-(s as i64)));
        }
        psi.push(acc);
    }
    Ok(psi)
}

pub fn psitilde_from_ptilde(ground: GroundConfig, r: u32) -> Result<VElement> {
    Ok(psitilde_series(ground, r)?.pop().expect("nonempty"))
}

/// One failed comparison of [`iso_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub item: String,
    pub hall: String,
    pub drinfeld: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub q: u32,
    pub max_degree: u32,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Bounds for the words compared by [`iso_check`].
#[derive(Clone, Copy, Debug)]
pub struct WordBudget {
    pub max_twist: i64,
    pub max_length: usize,
    /// Bound on `Σ r` over the torsion letters.
    pub max_tor_degree: u32,
}

impl WordBudget {
    pub fn new(max_tor_degree: u32) -> Self {
        WordBudget {
            max_twist: 2,
            max_length: 4,
            max_tor_degree,
        }
    }
}

/// All words in `Line(n)`, `|n| ≤ max_twist`, and `Tor(r)`, `r ≥ 1`, within
/// the budget, in lexicographic order.
pub fn words_within(budget: WordBudget) -> Vec<Word> {
    let mut letters: Vec<Gen> = (-budget.max_twist..=budget.max_twist).map(Gen::Line).collect();
    letters.extend((1..=budget.max_tor_degree).map(Gen::Tor));
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Word, u32)> = vec![(Vec::new(), 0)];
    for _ in 0..budget.max_length {
        let mut next = Vec::new();
        for (w, deg) in &frontier {
            for &g in &letters {
                let d = match g {
                    Gen::Tor(r) => deg + r,
                    Gen::Line(_) => *deg,
                };
                if d <= budget.max_tor_degree {
                    let mut w2 = w.clone();
                    w2.push(g);
                    next.push((w2, d));
                }
            }
        }
        out.extend(next.iter().map(|(w, _)| w.clone()));
        frontier = next;
    }
    out.sort();
    out
}

pub fn render_word(w: &[Gen]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|g| match g {
            Gen::Line(n) => format!("g{n}"),
            Gen::Tor(r) => format!("h{r}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// `ĥ_λ = ĥ_{λ_1} ⋯ ĥ_{λ_k}` as torsion elements, for every `λ ⊢ r`.
fn hhat_monomials(ground: GroundConfig, r: u32) -> Result<Vec<(Partition, TorsionElement)>> {
    let series = hall_torsion::global_series(ground, r as usize)?;
    partitions_of(r)
        .into_par_iter()
        .map(|lam| {
            let mut acc = hall_torsion::unit(ground);
            for &p in lam.parts() {
                acc = mult_torsion(&acc, series.h.coeff(p as usize))?;
            }
            Ok((lam, acc))
        })
        .collect()
}

/// Expansion of a degree-`r` torsion element in the monomials `ĥ_λ`, `λ ⊢ r`,
/// as a PBW element; `None` if it is not in their span.
pub fn expand_in_hhat(ground: GroundConfig, r: u32, target: &TorsionElement) -> Result<Option<PbwElement>> {
    let monomials = hhat_monomials(ground, r)?;
    let columns: Vec<TorsionElement> = monomials.iter().map(|(_, m)| m.clone()).collect();
    let Some(coeffs) = lincomb::solve(&columns, target)? else {
        return Ok(None);
    };
    let mut out = PbwElement::zero(ground);
    for ((lam, _), c) in monomials.iter().zip(coeffs) {
        let mut d = BTreeMap::new();
        for &p in lam.parts() {
            *d.entry(p).or_insert(0) += 1;
        }
        out.add_term(PbwMonomial::new(BTreeMap::new(), d), c);
    }
    Ok(Some(out))
}

fn render_opt(e: &Option<PbwElement>) -> String {
    match e {
        Some(e) => render_element(e, "g", "h"),
        None => "not in the span of the ĥ-monomials".into(),
    }
}

/// Compares the two straightening engines on every word within `budget`,
/// and the images of `ê_r`, `q̂_r` for `r ≤ max_degree`.
pub fn iso_check_with(ground: GroundConfig, max_degree: u32, budget: WordBudget) -> Result<IsoReport> {
    let words = words_within(budget);
    let results: Vec<Option<Mismatch>> = words
        .par_iter()
        .map(|w| {
            let one = ground.one();
            let hall = hall_global::normal_form(ground, one.clone(), w)?;
            let drinfeld = v_normal_form(ground, one, w)?;
            Ok((hall != drinfeld).then(|| Mismatch {
                item: render_word(w),
                hall: render_element(&hall, "g", "h"),
                drinfeld: render_element(&drinfeld, "x", "pt"),
            }))
        })
        .collect::<Result<_>>()?;
    let mut checked = words.len();
    let mut mismatches: Vec<Mismatch> = results.into_iter().flatten().collect();

    if max_degree > 0 {
        let series = hall_torsion::global_series(ground, max_degree as usize)?;
        let ps = p_series(ground, max_degree)?;
        let psis = psitilde_series(ground, max_degree)?;
        let scale = ground.v() - ground.v_pow(-1);
        let images: Vec<Vec<Mismatch>> = (1..=max_degree)
            .into_par_iter()
            .map(|r| {
                let mut out = Vec::new();
                let e = expand_in_hhat(ground, r, series.e.coeff(r as usize))?;
                if e.as_ref() != Some(&ps[r as usize]) {
                    out.push(Mismatch {
                        item: format!("ê{r} ↦ P{r}"),
                        hall: render_opt(&e),
                        drinfeld: render_element(&ps[r as usize], "x", "pt"),
                    });
                }
                let qh = expand_in_hhat(ground, r, series.q.coeff(r as usize))?;
                let expect = psis[r as usize].scaled(&scale);
                if qh.as_ref() != Some(&expect) {
                    out.push(Mismatch {
                        item: format!("q̂{r} ↦ (v-v⁻¹)ψ̃{r}"),
                        hall: render_opt(&qh),
                        drinfeld: render_element(&expect, "x", "pt"),
                    });
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        checked += 2 * max_degree as usize;
        mismatches.extend(images.into_iter().flatten());
    }
    Ok(IsoReport {
        q: ground.q(),
        max_degree,
        checked,
        mismatches,
    })
}

/// [`iso_check_with`] on words of length `≤ 4` in `G(n)`, `|n| ≤ 2`, and
/// `H(r)` of total torsion degree `≤ max_degree`.
pub fn iso_check(ground: GroundConfig, max_degree: u32) -> Result<IsoReport> {
    iso_check_with(ground, max_degree, WordBudget::new(max_degree))
}

/// Normal form of `LHS - RHS` of the quadratic line relation.
pub fn line_relation_residue(ground: GroundConfig, m: i64, n: i64) -> Result<VElement> {
    let q = ground.int(ground.q() as i64);
    let terms: LinComb<Word> = [
        (vec![Gen::Line(m + 1), Gen::Line(n)], ground.one()),
        (vec![Gen::Line(n), Gen::Line(m + 1)], -q.clone()),
        (vec![Gen::Line(m), Gen::Line(n + 1)], -q),
        (vec![Gen::Line(n + 1), Gen::Line(m)], ground.one()),
    ]
    .into_iter()
    .fold(LinComb::zero(ground), |mut acc, (w, c)| {
        acc.add_term(w, c);
        acc
    });
    pbw::straighten(&VRules::new(ground), &terms)
}

/// Normal form of `LHS - RHS` of the torsion-line relation.
pub fn tor_relation_residue(ground: GroundConfig, r: u32, n: i64) -> Result<VElement> {
    let mut terms: LinComb<Word> = LinComb::single(ground, vec![Gen::Tor(r), Gen::Line(n)], ground.one());
    for s in 0..=r {
        let mut w = vec![Gen::Line(n + s as i64)];
        if s < r {
            w.push(Gen::Tor(r - s));
        }
        terms.add_term(w, -ground.qnum(s as i64 + 1));
    }
    pbw::straighten(&VRules::new(ground), &terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(q: u32) -> GroundConfig {
        GroundConfig::new(q).unwrap()
    }

    #[test]
    fn straightening_examples() {
        let k = g(2);
        let x01 = PbwMonomial::new(BTreeMap::from([(0, 1), (1, 1)]), BTreeMap::new());
        assert_eq!(
            v_normal_form(k, k.one(), &[Gen::Line(1), Gen::Line(0)]).unwrap(),
            VElement::single(k, x01.clone(), k.int(2))
        );
        assert_eq!(
            v_normal_form(k, k.one(), &[Gen::Line(0), Gen::Line(1)]).unwrap(),
            VElement::basis(k, x01)
        );
        let e = v_normal_form(k, k.one(), &[Gen::Tor(1), Gen::Line(5)]).unwrap();
        let mut expect = VElement::basis(k, PbwMonomial::new(BTreeMap::from([(5, 1)]), BTreeMap::from([(1, 1)])));
        expect.add_term(PbwMonomial::line(6), k.qnum(2));
        assert_eq!(e, expect);
    }

    #[test]
    fn series_elements() {
        let k = g(3);
        assert_eq!(p_from_ptilde(k, 1).unwrap(), ptilde(k, 1).scaled(&-k.one()));
        assert_eq!(psitilde_from_ptilde(k, 1).unwrap(), ptilde(k, 1));
        let mut psi2 = ptilde(k, 2).scaled(&k.qnum(2));
        psi2.add_term(PbwMonomial::new(BTreeMap::new(), BTreeMap::from([(1, 2)])), -k.v_pow(-1));
        assert_eq!(psitilde_from_ptilde(k, 2).unwrap(), psi2);
        // P_2 = P̃_1² - P̃_2
        let mut p2 = ptilde(k, 2).scaled(&-k.one());
        p2.add_term(PbwMonomial::new(BTreeMap::new(), BTreeMap::from([(1, 2)])), k.one());
        assert_eq!(p_from_ptilde(k, 2).unwrap(), p2);
    }

    #[test]
    fn relation_residues_vanish() {
        let k = g(2);
        for m in -3..=3 {
            for n in -3..=3 {
                assert!(line_relation_residue(k, m, n).unwrap().is_zero(), "{m} {n}");
            }
        }
        for r in 1..=4 {
            for n in -3..=3 {
                assert!(tor_relation_residue(k, r, n).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn word_enumeration() {
        let ws = words_within(WordBudget { max_twist: 0, max_length: 2, max_tor_degree: 1 });
        // 1, g0, h1, g0 g0, g0 h1, h1 g0
        assert_eq!(ws.len(), 6);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn small_iso_check() {
        for q in [2, 3] {
            let report = iso_check_with(g(q), 3, WordBudget { max_twist: 1, max_length: 3, max_tor_degree: 3 }).unwrap();
            assert!(report.passed(), "{:?}", report.mismatches);
        }
    }

    #[test]
    fn hhat_expansion_recovers_monomials() {
        let k = g(2);
        let h2 = hall_torsion::hhat(k, 2).unwrap();
        let e = expand_in_hhat(k, 2, &h2).unwrap().unwrap();
        assert_eq!(e, PbwElement::basis(k, PbwMonomial::tor(2)));
    }
}
