use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{
    build_group_with, is_isomorphic, quotient_group, section_classes, FiniteGroup, GroupSpec, Section, Subgroup,
    SubgroupLattice,
};

/// Result of counting sections for a simple functor `S_{P,k}` in
/// characteristic 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleDim {
    /// Classes of sections `(T,S)` with `T/S ≅ P`.
    pub raw_classes: usize,
    /// Those whose `T` is not a `p`-group times a cyclic group.
    pub excluded: Vec<Section>,
    pub dimension: usize,
}

/// Whether `t` is the direct product of a `p`-group and a cyclic group:
/// nilpotent, with every Sylow `q`-subgroup for `q ≠ p` cyclic.
pub fn is_p_group_times_cyclic(t: &FiniteGroup, p: u64) -> bool {
    if !t.is_nilpotent() {
        return false;
    }
    t.prime_divisors().into_iter().filter(|&q| q != p).all(|q| {
        let sylow = t.normal_sylow(q).expect("nilpotent groups have normal Sylow subgroups");
        sylow.elements().iter().any(|&x| t.elem_order(x) as usize == sylow.order())
    })
}

/// `dim S_{P,k}(G)` for a `p`-group `P` other than `1` and `C_p × C_p`, in
/// characteristic 0: the number of classes of sections `(T,S)` of `G` with
/// `T/S ≅ P` and `T` a `p`-group times a cyclic group.
pub fn simple_dim_p_group(p_group: &FiniteGroup, g: &FiniteGroup, budget: &Budget) -> Result<SimpleDim> {
    let p = p_group.is_p_group().ok_or_else(|| Error::Precondition(format!("{} is not a p-group", p_group.name())))?;
    if p_group.order() == (p * p) as usize && !p_group.is_cyclic() {
        return Err(Error::Precondition(format!("the section count does not give dim S_{{P,k}} for P = C{p} x C{p}")));
    }
    let lattice = SubgroupLattice::new(g, budget)?;
    let mut raw = 0;
    let mut excluded = Vec::new();
    for class in section_classes(g, &lattice, budget)? {
        let sec = class.rep;
        if sec.index() != p_group.order() || is_isomorphic(&sec.quotient(g).group, p_group).is_none() {
            continue;
        }
        raw += 1;
        if !is_p_group_times_cyclic(&sec.top.to_standalone(g), p) {
            excluded.push(sec);
        }
    }
    Ok(SimpleDim { raw_classes: raw, dimension: raw - excluded.len(), excluded })
}

/// Direct test and, for nilpotent groups, the classification.
#[derive(Clone, Debug)]
pub struct SsdReport {
    pub self_dual: bool,
    /// A subgroup isomorphic to no quotient, when there is one.
    pub witness: Option<Subgroup>,
    /// The classification's prediction; `None` for non-nilpotent groups.
    pub classification: Option<bool>,
}

impl SsdReport {
    pub fn agrees(&self) -> bool {
        self.classification.is_none_or(|c| c == self.self_dual)
    }
}

/// Every subgroup of `g` isomorphic to a quotient of `g`?
pub fn is_s_self_dual(g: &FiniteGroup, budget: &Budget) -> Result<SsdReport> {
    let lattice = SubgroupLattice::new(g, budget)?;
    let quotients: Vec<FiniteGroup> =
        lattice.normal_subgroups().map(|n| quotient_group(g, n).map(|q| q.group)).collect::<Result<_>>()?;
    let mut witness = None;
    for s in lattice.class_reps() {
        let sg = s.to_standalone(g);
        let found = quotients.iter().any(|q| q.order() == sg.order() && is_isomorphic(q, &sg).is_some());
        if !found {
            witness = Some(s.clone());
            break;
        }
    }
    let classification = if g.is_nilpotent() {
        let mut all = true;
        for p in g.prime_divisors() {
            let sylow = g.normal_sylow(p).expect("nilpotent").to_standalone(g);
            if !classified_self_dual_p_group(&sylow, p, budget)? {
                all = false;
                break;
            }
        }
        Some(all)
    } else {
        None
    };
    Ok(SsdReport { self_dual: witness.is_none(), witness, classification })
}

/// The classified `s`-self-dual `p`-groups: abelian, `X_{p³} × M` with
/// `p` odd and `exp M ≤ p`, or `M_p(n,n) × M` with `exp M < pⁿ`, where `M`
/// is abelian.
pub fn classified_self_dual_p_group(pg: &FiniteGroup, p: u64, budget: &Budget) -> Result<bool> {
    if pg.is_abelian() {
        return Ok(true);
    }
    let log = (pg.order() as f64).log(p as f64).round() as u32;
    let matches = |core: GroupSpec, rest: u32, max_part: u32| -> Result<bool> {
        for parts in partitions(rest, max_part) {
            let spec = if parts.is_empty() {
                core.clone()
            } else {
                let m = GroupSpec::AbelianProduct(parts.iter().map(|&k| p.pow(k)).collect());
                GroupSpec::Product(Box::new(core.clone()), Box::new(m))
            };
            if is_isomorphic(&build_group_with(&spec, budget)?, pg).is_some() {
                return Ok(true);
            }
        }
        Ok(false)
    };
    if p != 2 && log >= 3 && matches(GroupSpec::Extraspecial(p), log - 3, 1)? {
        return Ok(true);
    }
    for n in 2..=log / 2 {
        if matches(GroupSpec::Modular(p, n), log - 2 * n, n - 1)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Partitions of `n` into parts of size at most `max_part`, parts descending.
fn partitions(n: u32, max_part: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    fn grp(s: &str) -> FiniteGroup {
        build_group(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(4, 4).len(), 5);
        assert_eq!(partitions(4, 1), vec![vec![1, 1, 1, 1]]);
        assert_eq!(partitions(0, 0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn product_structure_test() {
        assert!(is_p_group_times_cyclic(&grp("C2^2xC3"), 2));
        assert!(is_p_group_times_cyclic(&grp("C3xC5"), 2));
        assert!(!is_p_group_times_cyclic(&grp("C3^2"), 2));
        assert!(!is_p_group_times_cyclic(&grp("A4xC2"), 2));
        assert!(!is_p_group_times_cyclic(&grp("S3"), 3));
        assert!(is_p_group_times_cyclic(&grp("D8xC3"), 2));
    }

    #[test]
    fn simple_dims() {
        let b = Budget::default();
        let c2 = grp("C2");
        assert_eq!(simple_dim_p_group(&c2, &grp("C2^3"), &b).unwrap().dimension, 35);
        let r = simple_dim_p_group(&c2, &grp("A4xC2"), &b).unwrap();
        assert_eq!((r.raw_classes, r.dimension), (15, 14));
        assert_eq!(r.excluded.len(), 1);
        assert_eq!(r.excluded[0].top.order(), 24);
        assert_eq!(r.excluded[0].bottom.order(), 12);
        assert_eq!(simple_dim_p_group(&grp("C4"), &grp("C4"), &b).unwrap().dimension, 1);
        assert!(simple_dim_p_group(&grp("C2^2"), &grp("C4"), &b).is_err());
        assert!(simple_dim_p_group(&grp("C6"), &grp("C6"), &b).is_err());
        assert!(simple_dim_p_group(&FiniteGroup::trivial(), &grp("C6"), &b).is_err());
    }

    #[test]
    fn self_duality() {
        let b = Budget::default();
        for (s, expect) in [
            ("M(2,2)", true),
            ("X(27)", true),
            ("D8", false),
            ("A4", false),
            ("C4xC2", true),
            ("S3", false),
            ("D8xC3", false),
            ("M(2,2)xC2", true),
            ("X(27)xC2", true),
        ] {
            let r = is_s_self_dual(&grp(s), &b).unwrap();
            assert_eq!(r.self_dual, expect, "{s}");
            assert!(r.agrees(), "{s}: {r:?}");
        }
        let d8 = is_s_self_dual(&grp("D8"), &b).unwrap();
        let w = d8.witness.unwrap();
        assert_eq!(w.order(), 4);
        assert!(grp("D8").elements().any(|x| grp("D8").elem_order(x) == 4 && w.contains(x)));
    }
}
