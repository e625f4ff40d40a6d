use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{quotient_unchecked, FiniteGroup, Subgroup};
use crate::linalg::FieldSpec;

use super::mackey::compose;
use super::space::{BisetElement, BisetLabel, BisetRegistry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementaryKind {
    Ind,
    Res,
    Inf,
    Def,
    Iso,
}

impl fmt::Display for ElementaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ElementaryKind::Ind => "Ind",
            ElementaryKind::Res => "Res",
            ElementaryKind::Inf => "Inf",
            ElementaryKind::Def => "Def",
            ElementaryKind::Iso => "Iso",
        };
        f.write_str(s)
    }
}

/// An elementary biset, already realized as a transitive biset label.
#[derive(Clone, Debug)]
pub struct ElementaryBiset {
    pub kind: ElementaryKind,
    pub label: BisetLabel,
}

impl ElementaryBiset {
    pub fn element(&self, field: FieldSpec) -> BisetElement {
        self.label.element(field)
    }
}

fn graph(
    registry: &BisetRegistry,
    left: &Arc<FiniteGroup>,
    right: &Arc<FiniteGroup>,
    pairs: impl Iterator<Item = (u32, u32)>,
) -> Result<BisetLabel> {
    let space = registry.space(left, right)?;
    let elems: Vec<u32> = pairs.map(|(a, b)| space.pair(a, b)).collect();
    let mut sorted = elems;
    sorted.sort_unstable();
    sorted.dedup();
    space.label_from_elements(&sorted)
}

/// `Ind_H^G = (G × H)/{(ι(h), h)}` for an embedding `ι: H → G`.
pub fn induction(
    registry: &BisetRegistry,
    g: &Arc<FiniteGroup>,
    h: &Arc<FiniteGroup>,
    embedding: &[u32],
) -> Result<ElementaryBiset> {
    let label = graph(registry, g, h, h.elements().map(|x| (embedding[x as usize], x)))?;
    Ok(ElementaryBiset { kind: ElementaryKind::Ind, label })
}

/// `Res^G_H = (H × G)/{(h, ι(h))}`.
pub fn restriction(
    registry: &BisetRegistry,
    g: &Arc<FiniteGroup>,
    h: &Arc<FiniteGroup>,
    embedding: &[u32],
) -> Result<ElementaryBiset> {
    let label = graph(registry, h, g, h.elements().map(|x| (x, embedding[x as usize])))?;
    Ok(ElementaryBiset { kind: ElementaryKind::Res, label })
}

/// `Inf_{G/N}^G = (G × G/N)/{(g, gN)}` for the projection `π: G → G/N`.
pub fn inflation(
    registry: &BisetRegistry,
    g: &Arc<FiniteGroup>,
    q: &Arc<FiniteGroup>,
    projection: &[u32],
) -> Result<ElementaryBiset> {
    let label = graph(registry, g, q, g.elements().map(|x| (x, projection[x as usize])))?;
    Ok(ElementaryBiset { kind: ElementaryKind::Inf, label })
}

/// `Def^G_{G/N} = (G/N × G)/{(gN, g)}`.
pub fn deflation(
    registry: &BisetRegistry,
    g: &Arc<FiniteGroup>,
    q: &Arc<FiniteGroup>,
    projection: &[u32],
) -> Result<ElementaryBiset> {
    let label = graph(registry, q, g, g.elements().map(|x| (projection[x as usize], x)))?;
    Ok(ElementaryBiset { kind: ElementaryKind::Def, label })
}

/// `Iso(α) = (H' × H)/{(α(h), h)}` for an isomorphism `α: H → H'`.
pub fn isogation(
    registry: &BisetRegistry,
    target: &Arc<FiniteGroup>,
    source: &Arc<FiniteGroup>,
    alpha: &[u32],
) -> Result<ElementaryBiset> {
    if target.order() != source.order() {
        return Err(Error::Precondition("isomorphism between groups of different orders".into()));
    }
    let label = graph(registry, target, source, source.elements().map(|x| (alpha[x as usize], x)))?;
    Ok(ElementaryBiset { kind: ElementaryKind::Iso, label })
}

/// `Ind_{p₁}^G ∘ Inf ∘ Iso(α) ∘ Def ∘ Res^H_{p₂}` for a transitive biset,
/// where `α: p₂/k₂ → p₁/k₁` is induced by `L`.
pub fn butterfly_factorize(label: &BisetLabel, registry: &BisetRegistry) -> Result<[ElementaryBiset; 5]> {
    let space = &label.space;
    let inv = label.invariants();
    let (g, h) = (space.left(), space.right());

    let side = |parent: &FiniteGroup, p: &Subgroup, k: &Subgroup, tag: &str| {
        let (pg, emb) = p.to_group(parent, format!("p{tag}"));
        let mut pos = vec![u32::MAX; parent.order()];
        for (i, &x) in emb.iter().enumerate() {
            pos[x as usize] = i as u32;
        }
        let kk: Vec<u32> = k.elements().iter().map(|&x| pos[x as usize]).collect();
        let mut kk = kk;
        kk.sort_unstable();
        let kk = Subgroup::from_sorted_unchecked(pg.order(), kk);
        let q = quotient_unchecked(&pg, &kk, format!("q{tag}"));
        (Arc::new(pg), emb, pos, q)
    };
    let (p1, emb1, pos1, q1) = side(g, &inv.p1, &inv.k1, "1");
    let (p2, emb2, pos2, q2) = side(h, &inv.p2, &inv.k2, "2");

    let mut alpha = vec![u32::MAX; q2.group.order()];
    for &x in label.subgroup.elements() {
        let (a, b) = space.split(x);
        let i = q2.projection[pos2[b as usize] as usize];
        alpha[i as usize] = q1.projection[pos1[a as usize] as usize];
    }
    let q1g = Arc::new(q1.group);
    let q2g = Arc::new(q2.group);

    Ok([
        induction(registry, g, &p1, &emb1)?,
        inflation(registry, &p1, &q1g, &q1.projection)?,
        isogation(registry, &q1g, &q2g, &alpha)?,
        deflation(registry, &p2, &q2g, &q2.projection)?,
        restriction(registry, h, &p2, &emb2)?,
    ])
}

/// Composes a chain of elementary bisets left to right.
pub fn compose_chain(factors: &[ElementaryBiset], field: FieldSpec, registry: &BisetRegistry) -> Result<BisetElement> {
    let (first, rest) = factors.split_first().ok_or_else(|| Error::Precondition("empty chain".into()))?;
    rest.iter().try_fold(first.element(field), |acc, f| compose(&acc, &f.element(field), registry))
}
