use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// `G/N` with its projection. Cosets are numbered by their least element,
/// so the identity coset `N` is `0`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// `projection[g]` is the coset of `g`.
    pub projection: Vec<u32>,
    /// Least element of each coset.
    pub coset_reps: Vec<u32>,
}

pub fn quotient_group(g: &FiniteGroup, n: &Subgroup) -> Result<Quotient> {
    if !n.is_normal(g) {
        return Err(Error::Precondition("quotient by a non-normal subgroup".into()));
    }
    Ok(quotient_unchecked(g, n, format!("{}/{}", g.name(), n.order())))
}

pub(crate) fn quotient_unchecked(g: &FiniteGroup, n: &Subgroup, name: String) -> Quotient {
    let mut projection = vec![u32::MAX; g.order()];
    let mut coset_reps = Vec::new();
    for x in g.elements() {
        if projection[x as usize] != u32::MAX {
            continue;
        }
        let c = coset_reps.len() as u32;
        coset_reps.push(x);
        for &s in n.elements() {
            projection[g.mul(x, s) as usize] = c;
        }
    }
    let k = coset_reps.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &coset_reps {
        for &b in &coset_reps {
            table.push(projection[g.mul(a, b) as usize]);
        }
    }
    let group = FiniteGroup::from_table_unchecked(name, k, table).expect("quotient by a normal subgroup is a group");
    Quotient { group, projection, coset_reps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, is_isomorphic, GroupSpec};

    fn group(s: &str) -> FiniteGroup {
        build_group(&s.parse::<GroupSpec>().unwrap()).unwrap()
    }

    fn check_projection(g: &FiniteGroup, n: &Subgroup, q: &Quotient) {
        q.group.check_associative().unwrap();
        assert_eq!(q.group.order() * n.order(), g.order());
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(
                    q.projection[g.mul(a, b) as usize],
                    q.group.mul(q.projection[a as usize], q.projection[b as usize])
                );
            }
        }
        let kernel: Vec<u32> = g.elements().filter(|&x| q.projection[x as usize] == 0).collect();
        assert_eq!(kernel, n.elements());
    }

    #[test]
    fn a4_mod_klein_is_c3() {
        let a4 = group("A4");
        let v4 = a4.normal_sylow(2).unwrap_or_else(|| {
            let lat = crate::group::SubgroupLattice::new(&a4, &Default::default()).unwrap();
            lat.subgroups.iter().find(|s| s.order() == 4).unwrap().clone()
        });
        let q = quotient_group(&a4, &v4).unwrap();
        check_projection(&a4, &v4, &q);
        assert!(q.group.is_cyclic());
        assert_eq!(q.group.order(), 3);
    }

    #[test]
    fn trivial_and_c4() {
        let g = group("D8");
        let q = quotient_group(&g, &g.trivial_subgroup()).unwrap();
        assert!(is_isomorphic(&g, &q.group).is_some());
        let c4 = group("C4");
        let n = Subgroup::from_elements(&c4, &[0, 2]).unwrap();
        let q = quotient_group(&c4, &n).unwrap();
        check_projection(&c4, &n, &q);
        assert!(is_isomorphic(&q.group, &group("C2")).is_some());
    }

    #[test]
    fn rejects_non_normal() {
        let s3 = group("S3");
        let lat = crate::group::SubgroupLattice::new(&s3, &Default::default()).unwrap();
        let c2 = lat.subgroups.iter().find(|s| s.order() == 2).unwrap();
        assert!(quotient_group(&s3, c2).is_err());
    }
}
