use super::FiniteGroup;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// An explicit isomorphism, `map[x]` being the image of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub map: Vec<u32>,
}

impl Isomorphism {
    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    pub fn inverse(&self) -> Isomorphism {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Isomorphism { map: inv }
    }
}

#[derive(Clone, Debug)]
pub struct AutomorphismData {
    pub automorphisms: Vec<Isomorphism>,
    /// `|Inn(G)| = |G/Z(G)|`
    pub inner_count: usize,
    /// `|Out(G)| = |Aut(G)| / |Inn(G)|`
    pub out_order: usize,
}

/// Backtracking over images of a greedy generating set, pruned by element
/// order and centralizer size.
struct Search<'a> {
    src: &'a FiniteGroup,
    dst: &'a FiniteGroup,
    gens: Vec<u32>,
    candidates: Vec<Vec<u32>>,
    images: Vec<u32>,
    map: Vec<u32>,
    used: Vec<bool>,
    queue: Vec<u32>,
}

impl<'a> Search<'a> {
    fn new(src: &'a FiniteGroup, dst: &'a FiniteGroup) -> Option<Self> {
        if src.order() != dst.order() || src.order_profile() != dst.order_profile() {
            return None;
        }
        if src.is_abelian() != dst.is_abelian() {
            return None;
        }
        let gens = src.whole().small_generating_set(src);
        let src_cent: Vec<usize> = gens.iter().map(|&g| src.centralizer_size(g)).collect();
        let dst_cent: Vec<usize> = dst.elements().map(|y| dst.centralizer_size(y)).collect();
        let candidates = gens
            .iter()
            .zip(&src_cent)
            .map(|(&g, &c)| {
                dst.elements()
                    .filter(|&y| dst.elem_order(y) == src.elem_order(g) && dst_cent[y as usize] == c)
                    .collect()
            })
            .collect();
        let n = src.order();
        Some(Search {
            src,
            dst,
            images: Vec::with_capacity(gens.len()),
            gens,
            candidates,
            map: vec![u32::MAX; n],
            used: vec![false; n],
            queue: Vec::with_capacity(n),
        })
    }

    /// Extends the current generator images to the generated subgroup,
    /// returning false on an inconsistency or a collision.
    fn propagate(&mut self) -> bool {
        self.map.iter_mut().for_each(|m| *m = u32::MAX);
        self.used.iter_mut().for_each(|u| *u = false);
        self.queue.clear();
        self.map[0] = 0;
        self.used[0] = true;
        self.queue.push(0);
        let k = self.images.len();
        let mut i = 0;
        while i < self.queue.len() {
            let x = self.queue[i];
            i += 1;
            let fx = self.map[x as usize];
            for j in 0..k {
                let y = self.src.mul(x, self.gens[j]);
                let fy = self.dst.mul(fx, self.images[j]);
                let cur = self.map[y as usize];
                if cur == u32::MAX {
                    if self.used[fy as usize] {
                        return false;
                    }
                    self.map[y as usize] = fy;
                    self.used[fy as usize] = true;
                    self.queue.push(y);
                } else if cur != fy {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, all: bool, found: &mut Vec<Isomorphism>, budget: &Budget) -> Result<()> {
        if budget.expired() {
            return Err(Error::budget("searching isomorphisms", found.len()));
        }
        let k = self.images.len();
        if k == self.gens.len() {
            if k == 0 {
                // the trivial group: nothing to propagate from
                self.propagate();
            }
            found.push(Isomorphism { map: self.map.clone() });
            return Ok(());
        }
        for ci in 0..self.candidates[k].len() {
            let y = self.candidates[k][ci];
            self.images.push(y);
            if self.propagate() {
                self.run(all, found, budget)?;
                if !all && !found.is_empty() {
                    self.images.pop();
                    return Ok(());
                }
            }
            self.images.pop();
        }
        Ok(())
    }
}

/// An isomorphism `g → h`, if one exists.
pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> Option<Isomorphism> {
    let mut search = Search::new(g, h)?;
    let mut found = Vec::new();
    search.run(false, &mut found, &Budget::default()).expect("no deadline set");
    found.pop()
}

/// All automorphisms of `g`, with inner and outer counts.
pub fn automorphisms(g: &FiniteGroup, budget: &Budget) -> Result<AutomorphismData> {
    if g.order() > budget.max_automorphism_order {
        return Err(Error::budget(format!("automorphism search on a group of order {}", g.order()), 0));
    }
    let mut search = Search::new(g, g).expect("a group matches its own invariants");
    let mut found = Vec::new();
    search.run(true, &mut found, budget)?;
    found.sort_by(|a, b| a.map.cmp(&b.map));
    let inner_count = g.order() / g.center().order();
    let out_order = found.len() / inner_count;
    Ok(AutomorphismData { automorphisms: found, inner_count, out_order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_isomorphism_is_total() {
        let one = FiniteGroup::trivial();
        assert_eq!(is_isomorphic(&one, &one).unwrap().map, vec![0]);
    }
    use crate::group::build_group;

    fn g(s: &str) -> FiniteGroup {
        build_group(&s.parse().unwrap()).unwrap()
    }

    fn is_hom(a: &FiniteGroup, b: &FiniteGroup, f: &Isomorphism) -> bool {
        a.elements().all(|x| a.elements().all(|y| f.apply(a.mul(x, y)) == b.mul(f.apply(x), f.apply(y))))
    }

    #[test]
    fn crt_and_identity() {
        let f = is_isomorphic(&g("C6"), &g("C2xC3")).unwrap();
        assert!(is_hom(&g("C6"), &g("C2xC3"), &f));
        let d8 = g("D8");
        assert!(is_isomorphic(&d8, &d8).is_some());
        assert!(is_isomorphic(&d8, &g("M(2,2)")).is_none());
        assert!(is_isomorphic(&d8, &g("C4xC2")).is_none());
        assert!(is_isomorphic(&g("S3"), &g("D6")).is_some());
        assert!(is_isomorphic(&g("D12"), &g("S3xC2")).is_some());
        assert!(is_isomorphic(&g("A4"), &g("D12")).is_none());
    }

    #[test]
    fn isomorphism_is_symmetric_on_catalog() {
        let cat = ["C4", "C2^2", "C6", "S3", "D8", "C4xC2", "C2^3", "C8", "M(2,2)", "C4^2", "D16"];
        for a in cat {
            for b in cat {
                let ab = is_isomorphic(&g(a), &g(b));
                let ba = is_isomorphic(&g(b), &g(a));
                assert_eq!(ab.is_some(), ba.is_some(), "{a} {b}");
                if let Some(f) = ab {
                    assert!(is_hom(&g(a), &g(b), &f));
                    assert_eq!(g(a).order_profile(), g(b).order_profile());
                }
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        let b = Budget::default();
        let v4 = automorphisms(&g("C2^2"), &b).unwrap();
        assert_eq!(v4.automorphisms.len(), 6);
        assert_eq!(v4.out_order, 6);
        assert_eq!(automorphisms(&g("C9"), &b).unwrap().out_order, 6);
        assert_eq!(automorphisms(&g("C2"), &b).unwrap().out_order, 1);
        let s3 = automorphisms(&g("S3"), &b).unwrap();
        assert_eq!((s3.automorphisms.len(), s3.inner_count, s3.out_order), (6, 6, 1));
        let d8 = automorphisms(&g("D8"), &b).unwrap();
        assert_eq!((d8.automorphisms.len(), d8.inner_count, d8.out_order), (8, 4, 2));
        assert_eq!(automorphisms(&g("C2^4"), &b).unwrap().automorphisms.len(), 20160);
    }

    #[test]
    fn automorphism_cap() {
        let b = Budget { max_automorphism_order: 8, ..Budget::default() };
        assert!(automorphisms(&g("C16"), &b).is_err());
    }
}
