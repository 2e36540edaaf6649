//! Partitions and their statistics.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

/// A weakly decreasing sequence of positive parts. The empty partition is
/// the type of the zero module.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition from parts in any order; zero parts are dropped.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Checked constructor: parts must already be weakly decreasing and positive.
    pub fn from_parts(parts: Vec<u32>) -> Result<Self, String> {
        if parts.contains(&0) {
            return Err(format!("zero part in {parts:?}"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(format!("parts of {parts:?} are not weakly decreasing"));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The one-row partition `(r)`.
    pub fn row(r: u32) -> Self {
        Partition::new(vec![r])
    }

    /// The one-column partition `(1^r)`.
    pub fn column(r: u32) -> Self {
        Partition(vec![1; r as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n_stat(&self) -> u32 {
        self.0.iter().enumerate().map(|(i, &p)| i as u32 * p).sum()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        Partition(
            (1..=first)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    /// `m_i(λ)`: number of parts equal to `i`.
    pub fn multiplicity(&self, i: u32) -> u32 {
        self.0.iter().filter(|&&p| p == i).count() as u32
    }

    pub fn is_column(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }

    /// `self ⊇ other` as Young diagrams.
    pub fn contains(&self, other: &Partition) -> bool {
        other.length() <= self.length() && (0..other.length()).all(|i| self.0[i] >= other.0[i])
    }

    /// Whether `self / inner` is a horizontal strip (at most one box per column).
    pub fn is_horizontal_strip_over(&self, inner: &Partition) -> bool {
        self.contains(inner) && (0..self.length()).all(|i| inner.part(i) >= self.part(i + 1))
    }

    /// Dominance order: `self ≥ other` with equal weights.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let n = self.length().max(other.length());
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..n {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        true
    }

    /// All `μ ⊆ self` with `self / μ` a horizontal strip of size `size`.
    pub fn horizontal_strips_removed(&self, size: u32) -> Vec<Partition> {
        let len = self.length();
        let mut out = Vec::new();
        let mut cur = vec![0u32; len];
        fn rec(
            lam: &Partition,
            i: usize,
            remaining: u32,
            cur: &mut Vec<u32>,
            out: &mut Vec<Partition>,
        ) {
            if i == lam.length() {
                if remaining == 0 {
                    out.push(Partition::new(cur.clone()));
                }
                return;
            }
            let hi = lam.part(i);
            let lo = lam.part(i + 1);
            // μ_i ∈ [λ_{i+1}, λ_i]
            for mu in (lo..=hi).rev() {
                let removed = hi - mu;
                if removed > remaining {
                    break;
                }
                cur[i] = mu;
                rec(lam, i + 1, remaining - removed, cur, out);
            }
        }
        rec(self, 0, size, &mut cur, &mut out);
        out
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = String;
    fn try_from(v: Vec<u32>) -> Result<Self, String> {
        Partition::from_parts(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl std::str::FromStr for Partition {
    type Err = String;

    /// Accepts `[3,1,1]`, `3,1,1`, `()` or `[]`.
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .or_else(|| t.strip_prefix('(').and_then(|x| x.strip_suffix(')')))
            .unwrap_or(t)
            .trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|e| format!("bad part {x:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::from_parts(parts)
    }
}

/// All partitions of `n`, in reverse-lexicographic order: `(n)` first, `(1^n)` last.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions of weight at most `n`, grouped by weight.
pub fn partitions_up_to(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(partitions_of).collect()
}

/// `|Aut M|` for the torsion module of type `λ` over a discrete valuation ring
/// with residue field of size `qx`:
/// `qx^{|λ| + 2n(λ)} · Π_i Π_{j=1}^{m_i(λ)} (1 - qx^{-j})`.
pub fn aut_order_torsion(lambda: &Partition, qx: u64) -> BigInt {
    let qx = BigInt::from(qx);
    let mut exponent = (lambda.weight() + 2 * lambda.n_stat()) as i64;
    let mut acc = BigInt::one();
    let mut distinct: Vec<u32> = lambda.parts().to_vec();
    distinct.dedup();
    for i in distinct {
        for j in 1..=lambda.multiplicity(i) {
            // (1 - qx^-j) = qx^-j (qx^j - 1)
            acc *= Pow::pow(&qx, j) - 1;
            exponent -= j as i64;
        }
    }
    debug_assert!(exponent >= 0);
    acc * Pow::pow(&qx, exponent as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::from_parts(parts.to_vec()).unwrap()
    }

    fn binom2(n: u32) -> u32 {
        n * n.saturating_sub(1) / 2
    }

    #[test]
    fn statistics() {
        assert_eq!(p(&[2, 1]).n_stat(), 1);
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[1, 1, 1, 1]).weight(), 4);
        assert_eq!(p(&[3, 3, 1]).multiplicity(3), 2);
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn conjugate_is_involution_and_n_stat_identity() {
        for n in 0..=8 {
            for lam in partitions_of(n) {
                let c = lam.conjugate();
                assert_eq!(c.conjugate(), lam);
                let via_columns: u32 = c.parts().iter().map(|&x| binom2(x)).sum();
                assert_eq!(lam.n_stat(), via_columns, "{lam}");
            }
        }
    }

    #[test]
    fn enumeration() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(3), vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
        assert_eq!(partitions_of(6).len(), 11);
        for n in 0..=10 {
            let all = partitions_of(n);
            let set: std::collections::BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), all.len());
            assert!(all.iter().all(|l| l.weight() == n));
            // reverse-lexicographic
            assert!(all.windows(2).all(|w| w[0].parts() > w[1].parts()));
        }
    }

    #[test]
    fn partition_counts_match_brute_force() {
        // count weakly decreasing sequences by direct compositions filter
        fn brute(n: u32) -> usize {
            fn comps(n: u32) -> Vec<Vec<u32>> {
                if n == 0 {
                    return vec![vec![]];
                }
                (1..=n)
                    .flat_map(|f| {
                        comps(n - f).into_iter().map(move |mut c| {
                            c.insert(0, f);
                            c
                        })
                    })
                    .collect()
            }
            comps(n)
                .into_iter()
                .filter(|c| c.windows(2).all(|w| w[0] >= w[1]))
                .count()
        }
        for n in 0..=9 {
            assert_eq!(partitions_of(n).len(), brute(n));
        }
    }

    #[test]
    fn parse_and_render() {
        assert_eq!("[3,1,1]".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert_eq!("()".parse::<Partition>().unwrap(), Partition::empty());
        assert!("[1,2]".parse::<Partition>().is_err());
        assert_eq!(p(&[3, 1, 1]).to_string(), "[3,1,1]");
        let json = serde_json::to_string(&p(&[2, 2, 1])).unwrap();
        assert_eq!(json, "[2,2,1]");
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }

    #[test]
    fn strips() {
        let lam = p(&[2, 1]);
        let mut s1 = lam.horizontal_strips_removed(1);
        s1.sort();
        assert_eq!(s1, vec![p(&[1, 1]), p(&[2])]);
        assert_eq!(lam.horizontal_strips_removed(2), vec![p(&[1])]);
        assert!(lam.horizontal_strips_removed(3).is_empty());
        for s in p(&[3, 2, 2, 1]).horizontal_strips_removed(2) {
            assert!(p(&[3, 2, 2, 1]).is_horizontal_strip_over(&s));
        }
    }

    #[test]
    fn dominance() {
        assert!(p(&[3]).dominates(&p(&[2, 1])));
        assert!(p(&[2, 1]).dominates(&p(&[1, 1, 1])));
        assert!(!p(&[1, 1, 1]).dominates(&p(&[2, 1])));
        assert!(!p(&[3, 3]).dominates(&p(&[4, 1, 1])));
        assert!(!p(&[4, 1, 1]).dominates(&p(&[3, 3])));
    }

    #[test]
    fn automorphism_orders() {
        // (r): qx^r - qx^{r-1}
        for r in 1..=5u32 {
            for qx in [2u64, 3, 4, 9] {
                let expect = BigInt::from(qx).pow(r) - BigInt::from(qx).pow(r - 1);
                assert_eq!(aut_order_torsion(&Partition::row(r), qx), expect);
            }
        }
        assert_eq!(aut_order_torsion(&Partition::row(1), 2), BigInt::from(1));
        // |GL_2(F_2)|
        assert_eq!(aut_order_torsion(&p(&[1, 1]), 2), BigInt::from(6));
        assert_eq!(aut_order_torsion(&Partition::empty(), 5), BigInt::from(1));
    }
}
