use std::collections::BTreeMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{double_coset_reps, Subgroup};
use crate::linalg::{FieldSpec, Scalar};

use super::space::{BisetElement, BisetLabel, BisetRegistry, BisetSpace};

fn check_middle(left: &BisetSpace, right: &BisetSpace) -> Result<()> {
    if left.right().id() != right.left().id() {
        return Err(Error::Mismatch(format!("cannot compose {left:?} with {right:?}: middle groups differ")));
    }
    Ok(())
}

/// `L ⋆ M = {(g,k) : ∃h, (g,h) ∈ L, (h,k) ∈ M}` as a subgroup of `G × K`.
pub fn star(
    l_space: &BisetSpace,
    l: &Subgroup,
    m_space: &BisetSpace,
    m: &Subgroup,
    target: &BisetSpace,
) -> Result<Subgroup> {
    check_middle(l_space, m_space)?;
    if target.left().id() != l_space.left().id() || target.right().id() != m_space.right().id() {
        return Err(Error::Mismatch("star product target space".into()));
    }
    let n = l_space.right().order();
    let mut mf: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &y in m.elements() {
        let (a, k) = m_space.split(y);
        mf[a as usize].push(k);
    }
    Ok(star_with_fibers(l_space, l, &mf, target))
}

fn star_with_fibers(l_space: &BisetSpace, l: &Subgroup, mf: &[Vec<u32>], target: &BisetSpace) -> Subgroup {
    let mut bits = FixedBitSet::with_capacity(target.product().order());
    for &x in l.elements() {
        let (g, h) = l_space.split(x);
        for &k in &mf[h as usize] {
            bits.insert(target.pair(g, k) as usize);
        }
    }
    Subgroup::from_bits_unchecked(bits)
}

/// Multiplicities of the transitive pieces of `[(G×H)/L] ×_H [(H×K)/M]`,
/// one star product per double coset `p₂(L) h p₁(M)`.
pub(crate) fn mackey_terms(l: &BisetLabel, m: &BisetLabel, target: &BisetSpace) -> BTreeMap<Subgroup, u64> {
    let (ls, ms) = (&l.space, &m.space);
    let h = ls.right();
    let mut p2 = FixedBitSet::with_capacity(h.order());
    for &x in l.subgroup.elements() {
        p2.insert(ls.split(x).1 as usize);
    }
    let mut p1 = FixedBitSet::with_capacity(h.order());
    for &y in m.subgroup.elements() {
        p1.insert(ms.split(y).0 as usize);
    }
    let p2 = Subgroup::from_bits_unchecked(p2);
    let p1 = Subgroup::from_bits_unchecked(p1);

    let mut out = BTreeMap::new();
    let mut mf: Vec<Vec<u32>> = vec![Vec::new(); h.order()];
    for t in double_coset_reps(&p2, h, &p1) {
        mf.iter_mut().for_each(Vec::clear);
        for &y in m.subgroup.elements() {
            let (a, k) = ms.split(y);
            mf[h.conj(t, a) as usize].push(k);
        }
        let s = star_with_fibers(ls, &l.subgroup, &mf, target);
        *out.entry(target.canonical(&s)).or_insert(0) += 1;
    }
    out
}

/// Composition of two transitive bisets by the Mackey formula, with
/// non-negative integer coefficients.
pub fn mackey_compose(l: &BisetLabel, m: &BisetLabel, registry: &BisetRegistry) -> Result<BisetElement> {
    check_middle(&l.space, &m.space)?;
    let target = registry.space(l.space.left(), m.space.right())?;
    let field = FieldSpec::rationals();
    let mut out = BisetElement::zero(Arc::clone(&target), field);
    for (s, n) in mackey_terms(l, m, &target) {
        out.add_term(s, field.from_i64(n as i64));
    }
    Ok(out)
}

/// Bilinear extension of [`mackey_compose`].
pub fn compose(x: &BisetElement, y: &BisetElement, registry: &BisetRegistry) -> Result<BisetElement> {
    check_middle(&x.space, &y.space)?;
    if x.field != y.field {
        return Err(Error::Mismatch(format!("fields {} and {} differ", x.field, y.field)));
    }
    let target = registry.space(x.space.left(), y.space.right())?;
    let mut out = BisetElement::zero(Arc::clone(&target), x.field);
    for (lu, cu) in x.labels().zip(x.terms().map(|(_, c)| c)) {
        for (lw, cw) in y.labels().zip(y.terms().map(|(_, c)| c)) {
            let c = cu * cw;
            for (s, n) in mackey_terms(&lu, &lw, &target) {
                out.add_term(s, &c * &x.field.from_i64(n as i64));
            }
        }
    }
    Ok(out)
}

/// Number of `G`-orbits on `(G×G)/L` under `u ↦ g·u·g⁻¹`.
pub fn trace_count(label: &BisetLabel) -> Result<u64> {
    let space = &label.space;
    if !space.is_square() {
        return Err(Error::Mismatch(format!("trace of a non-square biset in {space:?}")));
    }
    let diag: Vec<u32> = space.left().elements().map(|g| space.pair(g, g)).collect();
    let diag = Subgroup::from_sorted_unchecked(space.product().order(), diag);
    Ok(double_coset_reps(&diag, space.product(), &label.subgroup).len() as u64)
}

/// Linear extension of [`trace_count`], mapped into the coefficient field.
pub fn trace_map(x: &BisetElement) -> Result<Scalar> {
    if !x.space.is_square() {
        return Err(Error::Mismatch(format!("trace of a non-square element in {:?}", x.space)));
    }
    let mut t = x.field.zero();
    for (label, c) in x.labels().zip(x.terms().map(|(_, c)| c)) {
        t = &t + &(c * &x.field.from_i64(trace_count(&label)? as i64));
    }
    Ok(t)
}

/// `k₁(L) = 1`: the left action on `(G×H)/L` is free.
pub fn is_left_free(label: &BisetLabel) -> bool {
    label.subgroup.elements().iter().all(|&x| x == 0 || label.space.split(x).1 != 0)
}
