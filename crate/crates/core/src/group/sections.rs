use super::quotient::quotient_unchecked;
use super::{build_group, is_isomorphic, FiniteGroup, GroupSpec, Quotient, Subgroup, SubgroupLattice};
use crate::budget::Budget;
use crate::error::Result;

/// A pair `(top, bottom)` with `bottom ⊴ top ≤ G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Section {
    pub top: Subgroup,
    pub bottom: Subgroup,
}

impl Section {
    /// The subquotient `top/bottom` as a standalone group.
    pub fn quotient(&self, g: &FiniteGroup) -> Quotient {
        let (t, emb) = self.top.to_group(g, "T");
        let mut pos = vec![u32::MAX; g.order()];
        for (i, &x) in emb.iter().enumerate() {
            pos[x as usize] = i as u32;
        }
        let bottom: Vec<u32> = self.bottom.elements().iter().map(|&x| pos[x as usize]).collect();
        let mut sorted = bottom;
        sorted.sort_unstable();
        let s = Subgroup::from_sorted_unchecked(t.order(), sorted);
        let name = format!("({}/{})", self.top.order(), self.bottom.order());
        quotient_unchecked(&t, &s, name)
    }

    pub fn index(&self) -> usize {
        self.top.order() / self.bottom.order()
    }

    pub fn conjugate(&self, g: &FiniteGroup, x: u32) -> Section {
        Section { top: self.top.conjugate(g, x), bottom: self.bottom.conjugate(g, x) }
    }
}

/// A `G`-conjugacy class of sections; `rep` is least in the class.
#[derive(Clone, Debug)]
pub struct SectionClass {
    pub rep: Section,
    pub size: usize,
}

/// All sections of `g` up to simultaneous conjugation.
///
/// For each class of tops `T`, the classes with that top are the orbits of
/// `N_G(T)` on the normal subgroups of `T`.
pub fn section_classes(g: &FiniteGroup, lattice: &SubgroupLattice, budget: &Budget) -> Result<Vec<SectionClass>> {
    let mut out = Vec::new();
    for class in &lattice.classes {
        budget.check_time("enumerating sections", out.len())?;
        let top = &lattice.subgroups[class.rep];
        let top_gens = top.small_generating_set(g);
        let normalizer = top.normalizer(g);
        let acting: Vec<u32> = normalizer.small_generating_set(g);
        let normals: Vec<&Subgroup> = lattice
            .subgroups
            .iter()
            .filter(|s| top.order().is_multiple_of(s.order()) && s.is_subset(top))
            .filter(|s| s.is_normalized_by(g, &top_gens))
            .collect();
        let mut seen = vec![false; normals.len()];
        for i in 0..normals.len() {
            if seen[i] {
                continue;
            }
            // orbit under ⟨acting⟩ by closure
            let mut orbit = vec![i];
            seen[i] = true;
            let mut k = 0;
            while k < orbit.len() {
                let s = normals[orbit[k]];
                k += 1;
                for &x in &acting {
                    let c = s.conjugate(g, x);
                    let j = normals
                        .binary_search_by(|t| (*t).cmp(&c))
                        .expect("conjugate of a normal subgroup of T by N_G(T)");
                    if !seen[j] {
                        seen[j] = true;
                        orbit.push(j);
                    }
                }
            }
            out.push(SectionClass {
                rep: Section { top: top.clone(), bottom: normals[i].clone() },
                size: class.members.len() * orbit.len(),
            });
        }
    }
    Ok(out)
}

/// A subquotient type with a witness section.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FiniteGroup,
    pub witness: Section,
}

/// One group per isomorphism type of subquotient, ascending by order.
pub fn subquotients_up_to_iso(g: &FiniteGroup, lattice: &SubgroupLattice, budget: &Budget) -> Result<Vec<Subquotient>> {
    let mut classes = section_classes(g, lattice, budget)?;
    classes.sort_by(|a, b| a.rep.index().cmp(&b.rep.index()).then_with(|| a.rep.cmp(&b.rep)));
    let mut out: Vec<Subquotient> = Vec::new();
    for c in classes {
        let q = c.rep.quotient(g).group;
        if out.iter().any(|s| is_isomorphic(&s.group, &q).is_some()) {
            continue;
        }
        let q = match describe(&q) {
            Some(name) => q.with_name(name),
            None => q,
        };
        out.push(Subquotient { group: q, witness: c.rep });
    }
    Ok(out)
}

/// Nonabelian groups small enough to be recognized by name.
const NAMED: &[&str] = &[
    "S3", "D8", "D10", "A4", "D12", "D14", "D16", "M(2,2)", "D8xC2", "D18", "C3xS3", "D20", "A4xC2", "S4", "D24",
    "C3xA4", "X(27)", "C3xD8", "S3xC2^2", "S3xS3",
];

/// A catalog name for `q`, when one is known.
fn describe(q: &FiniteGroup) -> Option<String> {
    if q.is_abelian() {
        return Some(abelian_spec(q).to_string());
    }
    NAMED.iter().find_map(|name| {
        let spec: GroupSpec = name.parse().ok()?;
        let c = build_group(&spec).ok()?;
        (c.order() == q.order() && is_isomorphic(&c, q).is_some()).then(|| name.to_string())
    })
}

/// Invariant factors of an abelian group, read off from `|{x : x^{p^k} = 1}|`.
fn abelian_spec(q: &FiniteGroup) -> GroupSpec {
    let mut by_prime: Vec<Vec<u64>> = Vec::new();
    for p in q.prime_divisors() {
        let log = |count: usize| {
            let (mut c, mut e) = (count as u64, 0u32);
            while c > 1 {
                c /= p;
                e += 1;
            }
            e
        };
        let mut s = vec![0u32];
        let mut pk = 1u64;
        let top = log(super::p_part(q.order() as u64, p) as usize);
        while *s.last().unwrap() < top {
            pk *= p;
            s.push(log(q.elements().filter(|&x| pk.is_multiple_of(q.elem_order(x) as u64)).count()));
        }
        // parts of size ≥ k are s_k − s_{k−1}
        let at_least: Vec<u32> = s.windows(2).map(|w| w[1] - w[0]).collect();
        let mut powers = Vec::new();
        for (k, &n) in at_least.iter().enumerate() {
            let exact = n - at_least.get(k + 1).copied().unwrap_or(0);
            powers.extend(std::iter::repeat_n(p.pow(k as u32 + 1), exact as usize));
        }
        powers.sort_unstable_by(|a, b| b.cmp(a));
        by_prime.push(powers);
    }
    let len = by_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<u64> =
        (0..len).map(|i| by_prime.iter().map(|v| v.get(i).copied().unwrap_or(1)).product()).collect();
    factors.sort_unstable();
    match factors.as_slice() {
        [] => GroupSpec::Cyclic(1),
        [n] => GroupSpec::Cyclic(*n),
        _ => GroupSpec::AbelianProduct(factors),
    }
}
