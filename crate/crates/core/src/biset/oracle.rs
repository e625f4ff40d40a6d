//! Composition computed the slow way: build the coset sets, form the
//! `H`-orbits on `U × V` and read off point stabilizers. Only the tests use it.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::FieldSpec;

use super::space::{BisetElement, BisetLabel, BisetRegistry, BisetSpace};

/// Left cosets `x L` of a label, with the right and left actions on them.
struct CosetSet<'a> {
    space: &'a BisetSpace,
    coset_of: Vec<u32>,
    reps: Vec<u32>,
}

impl<'a> CosetSet<'a> {
    fn new(label: &'a BisetLabel) -> Self {
        let space = &*label.space;
        let p = space.product();
        let mut coset_of = vec![u32::MAX; p.order()];
        let mut reps = Vec::new();
        for x in p.elements() {
            if coset_of[x as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            for &l in label.subgroup.elements() {
                coset_of[p.mul(x, l) as usize] = c;
            }
        }
        CosetSet { space, coset_of, reps }
    }

    fn len(&self) -> usize {
        self.reps.len()
    }

    /// `a · (g,h)L · b = (ag, b⁻¹h)L`.
    fn act(&self, a: u32, u: u32, b: u32) -> u32 {
        let (g, h) = self.space.split(self.reps[u as usize]);
        let ag = self.space.left().mul(a, g);
        let bh = self.space.right().mul(self.space.right().inv(b), h);
        self.coset_of[self.space.pair(ag, bh) as usize]
    }
}

/// `U ×_H V` decomposed into transitive `G`-`K`-bisets.
pub fn realize_and_compose_oracle(u: &BisetLabel, v: &BisetLabel, registry: &BisetRegistry) -> Result<BisetElement> {
    if u.space.right().id() != v.space.left().id() {
        return Err(Error::Mismatch("middle groups differ".into()));
    }
    let budget = registry.budget();
    let work = u.space.product().order() as u64 * v.space.product().order() as u64;
    if work > (budget.max_group_order as u64).pow(2) {
        return Err(Error::budget("oracle point pairs", work as usize));
    }
    let target = registry.space(u.space.left(), v.space.right())?;
    let (g, h, k) = (u.space.left(), u.space.right(), v.space.right());
    let cu = CosetSet::new(u);
    let cv = CosetSet::new(v);
    let nv = cv.len();
    let npts = cu.len() * nv;

    // H-orbits of (u, v) under h·(u,v) = (u·h⁻¹, h·v).
    let mut orbit = vec![u32::MAX; npts];
    let mut orbit_count = 0u32;
    for start in 0..npts {
        if orbit[start] != u32::MAX {
            continue;
        }
        let (su, sv) = ((start / nv) as u32, (start % nv) as u32);
        for hh in h.elements() {
            let pu = cu.act(0, su, h.inv(hh));
            let pv = cv.act(hh, sv, 0);
            orbit[pu as usize * nv + pv as usize] = orbit_count;
        }
        orbit_count += 1;
    }
    let mut rep_point = vec![u32::MAX; orbit_count as usize];
    for (p, &o) in orbit.iter().enumerate().rev() {
        rep_point[o as usize] = p as u32;
    }

    // (a, c) acts on orbits by [u, v] ↦ [a·u, v·c⁻¹].
    let act = |a: u32, c: u32, o: u32| -> u32 {
        let p = rep_point[o as usize] as usize;
        let (pu, pv) = ((p / nv) as u32, (p % nv) as u32);
        orbit[cu.act(a, pu, 0) as usize * nv + cv.act(0, pv, k.inv(c)) as usize]
    };

    let mut seen = vec![false; orbit_count as usize];
    let mut out = BisetElement::zero(Arc::clone(&target), FieldSpec::rationals());
    let one = FieldSpec::rationals().one();
    for o in 0..orbit_count {
        if seen[o as usize] {
            continue;
        }
        let mut stab = FixedBitSet::with_capacity(target.product().order());
        for a in g.elements() {
            for c in k.elements() {
                let img = act(a, c, o);
                seen[img as usize] = true;
                if img == o {
                    stab.insert(target.pair(a, c) as usize);
                }
            }
        }
        let stab = Subgroup::from_bits_unchecked(stab);
        out.add_term(target.canonical(&stab), one.clone());
    }
    Ok(out)
}
