use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use super::FiniteGroup;
use crate::error::{Error, Result};

/// A subgroup stored as its sorted element list plus a membership bitset.
///
/// Equality and hashing go through the bitset. Ordering is by order first,
/// then lexicographically on the sorted element lists; within a conjugacy
/// class the least element in this order is the canonical representative.
#[derive(Clone)]
pub struct Subgroup {
    elems: Vec<u32>,
    bits: FixedBitSet,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elems.len().cmp(&other.elems.len()).then_with(|| self.elems.cmp(&other.elems))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.elems)
    }
}

impl Subgroup {
    pub(crate) fn from_sorted_unchecked(parent_order: usize, elems: Vec<u32>) -> Self {
        let mut bits = FixedBitSet::with_capacity(parent_order);
        for &x in &elems {
            bits.insert(x as usize);
        }
        Subgroup { elems, bits }
    }

    pub(crate) fn from_bits_unchecked(bits: FixedBitSet) -> Self {
        let elems = bits.ones().map(|x| x as u32).collect();
        Subgroup { elems, bits }
    }

    /// Validates that `elems` is a subgroup of `g`.
    pub fn from_elements(g: &FiniteGroup, elems: &[u32]) -> Result<Self> {
        let mut sorted = elems.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.iter().any(|&x| x as usize >= g.order()) {
            return Err(Error::Precondition("element out of range".into()));
        }
        let s = Self::from_sorted_unchecked(g.order(), sorted);
        if !s.contains(0) {
            return Err(Error::Precondition("subset does not contain the identity".into()));
        }
        for &a in &s.elems {
            if !s.contains(g.inv(a)) {
                return Err(Error::Precondition("subset not closed under inverses".into()));
            }
            for &b in &s.elems {
                if !s.contains(g.mul(a, b)) {
                    return Err(Error::Precondition("subset not closed under products".into()));
                }
            }
        }
        Ok(s)
    }

    /// Subgroup generated by `gens`.
    pub fn generated(g: &FiniteGroup, gens: &[u32]) -> Self {
        gens.iter().fold(g.trivial_subgroup(), |acc, &x| acc.join_element(g, x))
    }

    /// `⟨self, x⟩`, built as a union of left cosets of `self`.
    pub fn join_element(&self, g: &FiniteGroup, x: u32) -> Subgroup {
        if self.contains(x) {
            return self.clone();
        }
        let mut bits = self.bits.clone();
        let mut list = self.elems.clone();
        let mut i = 0;
        while i < list.len() {
            let y = g.mul(list[i], x);
            if !bits.contains(y as usize) {
                for &s in &self.elems {
                    let z = g.mul(y, s);
                    bits.insert(z as usize);
                    list.push(z);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        Subgroup { elems: list, bits }
    }

    pub fn join(&self, g: &FiniteGroup, other: &Subgroup) -> Subgroup {
        other.small_generating_set(g).into_iter().fold(self.clone(), |acc, x| acc.join_element(g, x))
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.bits.contains(x as usize)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Subgroup::from_bits_unchecked(bits)
    }

    /// `x S x⁻¹`
    pub fn conjugate(&self, g: &FiniteGroup, x: u32) -> Subgroup {
        if x == 0 {
            return self.clone();
        }
        let mut elems: Vec<u32> = self.elems.iter().map(|&a| g.conj(x, a)).collect();
        elems.sort_unstable();
        Subgroup::from_sorted_unchecked(g.order(), elems)
    }

    /// True when every element of `by` normalizes this subgroup.
    pub fn is_normalized_by(&self, g: &FiniteGroup, by: &[u32]) -> bool {
        by.iter().all(|&x| self.elems.iter().all(|&a| self.contains(g.conj(x, a))))
    }

    pub fn is_normal(&self, g: &FiniteGroup) -> bool {
        let gens: Vec<u32> = g.whole().small_generating_set(g);
        self.is_normalized_by(g, &gens)
    }

    pub fn is_normal_in(&self, g: &FiniteGroup, t: &Subgroup) -> bool {
        self.is_subset(t) && self.is_normalized_by(g, &t.small_generating_set(g))
    }

    pub fn normalizer(&self, g: &FiniteGroup) -> Subgroup {
        let elems = g.elements().filter(|&x| self.elems.iter().all(|&a| self.contains(g.conj(x, a)))).collect();
        Subgroup::from_sorted_unchecked(g.order(), elems)
    }

    /// Greedy generating set: elements of large order first.
    pub fn small_generating_set(&self, g: &FiniteGroup) -> Vec<u32> {
        let mut candidates = self.elems.clone();
        candidates.sort_by_key(|&x| (std::cmp::Reverse(g.elem_order(x)), x));
        let mut gens = Vec::new();
        let mut cur = g.trivial_subgroup();
        for x in candidates {
            if cur.order() == self.order() {
                break;
            }
            if !cur.contains(x) {
                cur = cur.join_element(g, x);
                gens.push(x);
            }
        }
        gens
    }

    /// Lexicographically least conjugate under the given conjugating elements.
    pub fn least_conjugate(&self, g: &FiniteGroup, by: impl IntoIterator<Item = u32>) -> Subgroup {
        let mut best = self.clone();
        for x in by {
            let c = self.conjugate(g, x);
            if c < best {
                best = c;
            }
        }
        best
    }

    /// The subgroup as a standalone group on `0..|S|`, with the embedding
    /// `i ↦ elements()[i]`.
    pub fn to_group(&self, g: &FiniteGroup, name: impl Into<String>) -> (FiniteGroup, Vec<u32>) {
        let k = self.elems.len();
        let mut pos = vec![u32::MAX; g.order()];
        for (i, &x) in self.elems.iter().enumerate() {
            pos[x as usize] = i as u32;
        }
        let mut table = Vec::with_capacity(k * k);
        for &a in &self.elems {
            for &b in &self.elems {
                table.push(pos[g.mul(a, b) as usize]);
            }
        }
        let sub =
            FiniteGroup::from_table_unchecked(name, k, table).expect("restriction of a group table to a subgroup");
        (sub, self.elems.clone())
    }

    pub fn to_standalone(&self, g: &FiniteGroup) -> FiniteGroup {
        let name = format!("sub{}({})", self.order(), g.name());
        self.to_group(g, name).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupSpec};

    #[test]
    fn generated_matches_brute_closure() {
        let s4 = build_group(&GroupSpec::Symmetric(4)).unwrap();
        for a in s4.elements() {
            for b in [1u32, 5, 7, 13] {
                let s = Subgroup::generated(&s4, &[a, b]);
                let mut set: std::collections::BTreeSet<u32> = [0, a, b].into_iter().collect();
                loop {
                    let before = set.len();
                    let cur: Vec<u32> = set.iter().copied().collect();
                    for &x in &cur {
                        for &y in &cur {
                            set.insert(s4.mul(x, y));
                        }
                    }
                    if set.len() == before {
                        break;
                    }
                }
                assert_eq!(s.elements(), set.into_iter().collect::<Vec<_>>().as_slice());
            }
        }
    }

    #[test]
    fn from_elements_rejects_non_subgroup() {
        let c4 = build_group(&GroupSpec::Cyclic(4)).unwrap();
        assert!(Subgroup::from_elements(&c4, &[0, 1]).is_err());
        assert!(Subgroup::from_elements(&c4, &[1, 3]).is_err());
        assert!(Subgroup::from_elements(&c4, &[0, 2]).is_ok());
    }

    #[test]
    fn to_group_is_valid() {
        let s4 = build_group(&GroupSpec::Symmetric(4)).unwrap();
        let h = Subgroup::generated(&s4, &[1, 6]);
        let (sub, emb) = h.to_group(&s4, "h");
        sub.check_associative().unwrap();
        for a in sub.elements() {
            for b in sub.elements() {
                assert_eq!(emb[sub.mul(a, b) as usize], s4.mul(emb[a as usize], emb[b as usize]));
            }
        }
    }
}
