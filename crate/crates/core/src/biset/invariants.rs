use fixedbitset::FixedBitSet;

use crate::group::{quotient_unchecked, FiniteGroup, Subgroup};

use super::space::BisetSpace;

/// The four subgroups attached to `L ≤ G × H`, and `q(L) = L/(k₁ × k₂)`.
#[derive(Clone, Debug)]
pub struct ProductInvariants {
    /// Projection of `L` to `G`.
    pub p1: Subgroup,
    /// Projection of `L` to `H`.
    pub p2: Subgroup,
    /// `{g : (g,1) ∈ L}`.
    pub k1: Subgroup,
    /// `{h : (1,h) ∈ L}`.
    pub k2: Subgroup,
    pub q: FiniteGroup,
}

impl ProductInvariants {
    pub fn q_order(&self) -> usize {
        self.q.order()
    }
}

pub(crate) fn product_invariants(space: &BisetSpace, l: &Subgroup) -> ProductInvariants {
    let (g, h) = (space.left(), space.right());
    let mut p1 = FixedBitSet::with_capacity(g.order());
    let mut p2 = FixedBitSet::with_capacity(h.order());
    let mut k1 = FixedBitSet::with_capacity(g.order());
    let mut k2 = FixedBitSet::with_capacity(h.order());
    for &x in l.elements() {
        let (a, b) = space.split(x);
        p1.insert(a as usize);
        p2.insert(b as usize);
        if b == 0 {
            k1.insert(a as usize);
        }
        if a == 0 {
            k2.insert(b as usize);
        }
    }
    let [p1, p2, k1, k2] = [p1, p2, k1, k2].map(Subgroup::from_bits_unchecked);

    let (lg, emb) = l.to_group(space.product(), "L");
    let kernel: Vec<u32> = emb
        .iter()
        .enumerate()
        .filter(|&(_, &x)| {
            let (a, b) = space.split(x);
            k1.contains(a) && k2.contains(b)
        })
        .map(|(i, _)| i as u32)
        .collect();
    let kernel = Subgroup::from_sorted_unchecked(lg.order(), kernel);
    let q = quotient_unchecked(&lg, &kernel, "q(L)".into()).group;
    ProductInvariants { p1, p2, k1, k2, q }
}
