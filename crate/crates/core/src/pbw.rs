//! Words in line-bundle and torsion generators, PBW monomials, and the
//! straightening driver shared by the Hall-side and `V⁺`-side engines.
//!
//! A word is normal when its line generators come first in ascending twist
//! order, followed by the torsion generators in ascending index. Each
//! engine supplies the two nontrivial rewrites: an inverted line pair and a
//! torsion generator standing left of a line generator. Torsion generators
//! always commute among themselves.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{Coeff, GroundConfig};
use crate::error::Result;
use crate::lincomb::LinComb;

/// A generator: `Line(n)` is `[O(n)]` (or `x_n⁺`), `Tor(r)` is `ĥ_r` (or `P̃_r`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Gen {
    Line(i64),
    Tor(u32),
}

pub type Word = Vec<Gen>;

/// `X_c ∗ ĥ_d`: line twists with multiplicities, then torsion indices with multiplicities.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct PbwMonomial {
    c: BTreeMap<i64, u32>,
    d: BTreeMap<u32, u32>,
}

impl PbwMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(c: BTreeMap<i64, u32>, d: BTreeMap<u32, u32>) -> Self {
        PbwMonomial {
            c: c.into_iter().filter(|&(_, k)| k > 0).collect(),
            d: d.into_iter().filter(|&(r, k)| k > 0 && r > 0).collect(),
        }
    }

    pub fn line(n: i64) -> Self {
        Self::new(BTreeMap::from([(n, 1)]), BTreeMap::new())
    }

    pub fn tor(r: u32) -> Self {
        Self::new(BTreeMap::new(), BTreeMap::from([(r, 1)]))
    }

    pub fn c(&self) -> &BTreeMap<i64, u32> {
        &self.c
    }

    pub fn d(&self) -> &BTreeMap<u32, u32> {
        &self.d
    }

    pub fn rank(&self) -> i64 {
        self.c.values().map(|&k| k as i64).sum()
    }

    /// Degree in the Grothendieck group: `Σ n c_n + Σ r d_r`.
    pub fn degree(&self) -> i64 {
        self.c.iter().map(|(&n, &k)| n * k as i64).sum::<i64>() + self.tor_degree()
    }

    pub fn tor_degree(&self) -> i64 {
        self.d.iter().map(|(&r, &k)| r as i64 * k as i64).sum()
    }

    /// The normal word spelling this monomial.
    pub fn word(&self) -> Word {
        let mut w = Vec::new();
        for (&n, &k) in &self.c {
            w.extend(std::iter::repeat_n(Gen::Line(n), k as usize));
        }
        for (&r, &k) in &self.d {
            w.extend(std::iter::repeat_n(Gen::Tor(r), k as usize));
        }
        w
    }

    /// Reads a normal word; `None` if the word is not normal.
    pub fn from_normal_word(w: &[Gen]) -> Option<Self> {
        if first_reducible(w).is_some() {
            return None;
        }
        let mut c = BTreeMap::new();
        let mut d = BTreeMap::new();
        for g in w {
            match *g {
                Gen::Line(n) => *c.entry(n).or_insert(0) += 1,
                Gen::Tor(r) => *d.entry(r).or_insert(0) += 1,
            }
        }
        Some(Self::new(c, d))
    }

    /// Renders with the given generator names, e.g. `g0^2*g1*h3`.
    pub fn render(&self, line: &str, tor: &str) -> String {
        let mut parts = Vec::new();
        for (&n, &k) in &self.c {
            parts.push(power(format!("{line}{n}"), k));
        }
        for (&r, &k) in &self.d {
            parts.push(power(format!("{tor}{r}"), k));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn power(base: String, k: u32) -> String {
    if k == 1 {
        base
    } else {
        format!("{base}^{k}")
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("g", "h"))
    }
}

pub type PbwElement = LinComb<PbwMonomial>;

/// Renders an element with the given generator names.
pub fn render_element(e: &PbwElement, line: &str, tor: &str) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in e.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let body = m.render(line, tor);
        if c.is_one() {
            out.push_str(&body);
        } else if c.as_rational().is_some() {
            out.push_str(&format!("{c}·{body}"));
        } else {
            out.push_str(&format!("({c})·{body}"));
        }
    }
    out
}

/// The relation-specific rewrites of a straightening engine.
pub trait Rules {
    fn ground(&self) -> GroundConfig;

    /// Expansion of `Line(n) Line(m)` with `n > m`.
    fn line_swap(&self, n: i64, m: i64) -> Result<Vec<(Word, Coeff)>>;

    /// Expansion of `Tor(r) Line(n)`; `Tor(0)` stands for the unit and may be
    /// returned, it is dropped by the driver.
    fn tor_line(&self, r: u32, n: i64) -> Result<Vec<(Word, Coeff)>>;
}

/// Leftmost adjacent pair that is out of normal order.
fn first_reducible(w: &[Gen]) -> Option<usize> {
    w.windows(2).position(|p| match (p[0], p[1]) {
        (Gen::Line(n), Gen::Line(m)) => n > m,
        (Gen::Tor(_), Gen::Line(_)) => true,
        (Gen::Tor(r), Gen::Tor(s)) => r > s,
        (Gen::Line(_), Gen::Tor(_)) => false,
    })
}

/// Straightens a linear combination of words into PBW monomials, always
/// rewriting the leftmost out-of-order pair.
pub fn straighten<R: Rules + ?Sized>(rules: &R, words: &LinComb<Word>) -> Result<PbwElement> {
    let ground = rules.ground();
    let mut pending: BTreeMap<Word, Coeff> = BTreeMap::new();
    for (w, c) in words {
        add_word(&mut pending, strip_units(w.clone()), c.clone());
    }
    let mut out = PbwElement::zero(ground);
    while let Some((w, c)) = pending.pop_first() {
        let Some(i) = first_reducible(&w) else {
            out.add_term(PbwMonomial::from_normal_word(&w).expect("normal word"), c);
            continue;
        };
        let replacements = match (w[i], w[i + 1]) {
            (Gen::Line(n), Gen::Line(m)) => rules.line_swap(n, m)?,
            (Gen::Tor(r), Gen::Line(n)) => rules.tor_line(r, n)?,
            (a @ Gen::Tor(_), b @ Gen::Tor(_)) => vec![(vec![b, a], Coeff::one(ground))],
            (Gen::Line(_), Gen::Tor(_)) => unreachable!(),
        };
        for (rep, k) in replacements {
            let mut nw = Vec::with_capacity(w.len() + rep.len());
            nw.extend_from_slice(&w[..i]);
            nw.extend(rep);
            nw.extend_from_slice(&w[i + 2..]);
            add_word(&mut pending, strip_units(nw), &c * &k);
        }
    }
    Ok(out)
}

fn strip_units(mut w: Word) -> Word {
    w.retain(|g| *g != Gen::Tor(0));
    w
}

fn add_word(pending: &mut BTreeMap<Word, Coeff>, w: Word, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match pending.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Straightens a single word with a scalar prefactor.
pub fn straighten_word<R: Rules + ?Sized>(rules: &R, coeff: Coeff, word: &[Gen]) -> Result<PbwElement> {
    let ground = rules.ground();
    straighten(rules, &LinComb::single(ground, word.to_vec(), coeff))
}

/// Product of two PBW elements: concatenate normal words and straighten.
pub fn pbw_product<R: Rules + ?Sized>(rules: &R, f: &PbwElement, g: &PbwElement) -> Result<PbwElement> {
    let ground = rules.ground();
    let mut words = LinComb::zero(ground);
    for (m1, c1) in f {
        for (m2, c2) in g {
            let mut w = m1.word();
            w.extend(m2.word());
            words.add_term(w, c1 * c2);
        }
    }
    straighten(rules, &words)
}

/// Every monomial with line rank `≤ max_rank` over twists in `twists` and
/// torsion degree `≤ max_tor_degree`.
pub fn monomials_up_to(twists: std::ops::RangeInclusive<i64>, max_rank: u32, max_tor_degree: u32) -> Vec<PbwMonomial> {
    fn lines(ts: &[i64], rank: u32) -> Vec<BTreeMap<i64, u32>> {
        if ts.is_empty() {
            return vec![BTreeMap::new()];
        }
        let mut out = Vec::new();
        for k in 0..=rank {
            for mut rest in lines(&ts[1..], rank - k) {
                if k > 0 {
                    rest.insert(ts[0], k);
                }
                out.push(rest);
            }
        }
        out
    }
    let ts: Vec<i64> = twists.collect();
    let cs = lines(&ts, max_rank);
    let ds: Vec<BTreeMap<u32, u32>> = crate::combinat::partitions_up_to(max_tor_degree)
        .into_iter()
        .map(|p| {
            let mut d = BTreeMap::new();
            for &r in p.parts() {
                *d.entry(r).or_insert(0) += 1;
            }
            d
        })
        .collect();
    let mut out = Vec::with_capacity(cs.len() * ds.len());
    for c in &cs {
        for d in &ds {
            out.push(PbwMonomial::new(c.clone(), d.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Commutative toy rules: every pair simply swaps.
    struct Commuting(GroundConfig);

    impl Rules for Commuting {
        fn ground(&self) -> GroundConfig {
            self.0
        }
        fn line_swap(&self, n: i64, m: i64) -> Result<Vec<(Word, Coeff)>> {
            Ok(vec![(vec![Gen::Line(m), Gen::Line(n)], self.0.one())])
        }
        fn tor_line(&self, r: u32, n: i64) -> Result<Vec<(Word, Coeff)>> {
            Ok(vec![(vec![Gen::Line(n), Gen::Tor(r)], self.0.one())])
        }
    }

    #[test]
    fn sorting_with_trivial_rules() {
        let k = GroundConfig::new(2).unwrap();
        let rules = Commuting(k);
        let w = [Gen::Tor(2), Gen::Line(3), Gen::Tor(1), Gen::Line(-1), Gen::Line(3)];
        let e = straighten_word(&rules, k.int(5), &w).unwrap();
        let m = PbwMonomial::new(BTreeMap::from([(-1, 1), (3, 2)]), BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(e, PbwElement::single(k, m.clone(), k.int(5)));
        assert_eq!(m.word(), vec![Gen::Line(-1), Gen::Line(3), Gen::Line(3), Gen::Tor(1), Gen::Tor(2)]);
        assert_eq!(m.to_string(), "g-1*g3^2*h1*h2");
        assert_eq!(m.rank(), 3);
        assert_eq!(m.degree(), 5 + 3);
    }

    #[test]
    fn unit_generators_dropped() {
        let k = GroundConfig::new(3).unwrap();
        let e = straighten_word(&Commuting(k), k.one(), &[Gen::Tor(0), Gen::Line(1)]).unwrap();
        assert_eq!(e, PbwElement::basis(k, PbwMonomial::line(1)));
        assert_eq!(PbwMonomial::one().to_string(), "1");
    }

    #[test]
    fn monomial_enumeration() {
        let ms = monomials_up_to(0..=1, 2, 2);
        // c: 6 choices (rank 0..2 over two twists), d: 4 partitions of weight <= 2
        assert_eq!(ms.len(), 6 * 4);
        assert!(ms.iter().all(|m| PbwMonomial::from_normal_word(&m.word()).as_ref() == Some(m)));
    }
}
