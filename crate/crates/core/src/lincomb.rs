//! Finite linear combinations of basis keys with [`Coeff`] coefficients.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use crate::coeff::{Coeff, GroundConfig};

/// `Σ c_k · k` over an ordered key type. Zero coefficients are never stored,
/// so structural equality is equality of elements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinComb<K: Ord> {
    ground: GroundConfig,
    terms: BTreeMap<K, Coeff>,
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero(ground: GroundConfig) -> Self {
        LinComb {
            ground,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(ground: GroundConfig, key: K, coeff: Coeff) -> Self {
        let mut out = Self::zero(ground);
        out.add_term(key, coeff);
        out
    }

    /// `1 · key`.
    pub fn basis(ground: GroundConfig, key: K) -> Self {
        Self::single(ground, key, Coeff::one(ground))
    }

    pub fn ground(&self) -> GroundConfig {
        self.ground
    }

    pub fn add_term(&mut self, key: K, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, key: &K) -> Coeff {
        self.terms
            .get(key)
            .cloned()
            .unwrap_or_else(|| Coeff::zero(self.ground))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Coeff> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Coeff> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> BTreeMap<K, Coeff> {
        self.terms
    }

    pub fn add_assign_scaled(&mut self, other: &Self, scale: &Coeff) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: &Coeff) -> Self {
        let mut out = Self::zero(self.ground);
        out.add_assign_scaled(self, scale);
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Coeff::one(self.ground));
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Coeff::one(self.ground));
        out
    }

    /// Re-key every term; colliding images are summed.
    pub fn map_keys<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> LinComb<K2> {
        let mut out = LinComb::zero(self.ground);
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Bilinear extension of a product on basis keys.
    pub fn bilinear<E>(
        &self,
        other: &Self,
        mut basis_product: impl FnMut(&K, &K) -> Result<Self, E>,
    ) -> Result<Self, E> {
        let mut out = Self::zero(self.ground);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let prod = basis_product(k1, k2)?;
                out.add_assign_scaled(&prod, &(c1 * c2));
            }
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<(K, Coeff)> for LinComb<K> {
    /// Panics on an empty iterator, which carries no ground field.
    fn from_iter<I: IntoIterator<Item = (K, Coeff)>>(iter: I) -> Self {
        let mut it = iter.into_iter().peekable();
        let ground = it.peek().expect("empty iterator").1.ground();
        let mut out = LinComb::zero(ground);
        for (k, c) in it {
            out.add_term(k, c);
        }
        out
    }
}

impl<'a, K: Ord> IntoIterator for &'a LinComb<K> {
    type Item = (&'a K, &'a Coeff);
    type IntoIter = btree_map::Iter<'a, K, Coeff>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{k}")?;
            } else if c.as_rational().is_some() {
                write!(f, "{c}·{k}")?;
            } else {
                write!(f, "({c})·{k}")?;
            }
        }
        Ok(())
    }
}

/// Coefficients `a` with `Σ a_j columns[j] = target`, or `None` if `target`
/// lies outside their span. Fails if the columns are linearly dependent.
pub fn solve<K: Ord + Clone>(columns: &[LinComb<K>], target: &LinComb<K>) -> crate::error::Result<Option<Vec<Coeff>>> {
    let ground = target.ground();
    let n = columns.len();
    // reduced echelon rows: pivot key -> (vector, combination of columns)
    let mut pivots: BTreeMap<K, (LinComb<K>, Vec<Coeff>)> = BTreeMap::new();
    let reduce = |pivots: &BTreeMap<K, (LinComb<K>, Vec<Coeff>)>, v: &mut LinComb<K>, combo: &mut Vec<Coeff>| {
        for (key, (pv, pc)) in pivots {
            let c = v.coeff(key);
            if !c.is_zero() {
                let neg = -c;
                v.add_assign_scaled(pv, &neg);
                for (a, b) in combo.iter_mut().zip(pc) {
                    *a += &(b * &neg);
                }
            }
        }
    };
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        let mut combo = vec![Coeff::zero(ground); n];
        combo[j] = Coeff::one(ground);
        reduce(&pivots, &mut v, &mut combo);
        let Some((key, lead)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return Err(crate::error::HallError::Invalid("linearly dependent columns".into()));
        };
        let inv = lead.inv()?;
        let v = v.scaled(&inv);
        let combo: Vec<Coeff> = combo.iter().map(|c| c * &inv).collect();
        for (pv, pc) in pivots.values_mut() {
            let c = pv.coeff(&key);
            if !c.is_zero() {
                let neg = -c;
                pv.add_assign_scaled(&v, &neg);
                for (a, b) in pc.iter_mut().zip(&combo) {
                    *a += &(b * &neg);
                }
            }
        }
        pivots.insert(key, (v, combo));
    }
    let mut residual = target.clone();
    let mut combo = vec![Coeff::zero(ground); n];
    reduce(&pivots, &mut residual, &mut combo);
    if !residual.is_zero() {
        return Ok(None);
    }
    Ok(Some(combo.into_iter().map(|c| -c).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        let k = GroundConfig::new(3).unwrap();
        let col = |a: i64, b: i64, c: i64| -> LinComb<u8> {
            let mut out = LinComb::zero(k);
            out.add_term(0, k.int(a));
            out.add_term(1, k.int(b));
            out.add_term(2, k.int(c));
            out
        };
        let cols = [col(1, 1, 0), col(0, 1, 1)];
        let target = col(2, 5, 3);
        assert_eq!(solve(&cols, &target).unwrap(), Some(vec![k.int(2), k.int(3)]));
        assert_eq!(solve(&cols, &col(1, 0, 0)).unwrap(), None);
        assert!(solve(&[col(1, 1, 0), col(2, 2, 0)], &col(1, 1, 0)).is_err());
    }
}
