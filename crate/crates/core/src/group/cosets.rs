use super::{FiniteGroup, Subgroup};

/// One representative (the least element) per double coset `A g B`.
pub fn double_coset_reps(a: &Subgroup, g: &FiniteGroup, b: &Subgroup) -> Vec<u32> {
    let mut marked = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if marked[x as usize] {
            continue;
        }
        reps.push(x);
        for &s in a.elements() {
            let sx = g.mul(s, x);
            for &t in b.elements() {
                marked[g.mul(sx, t) as usize] = true;
            }
        }
    }
    reps
}

/// Left cosets `xS`, each listed with its least element first.
pub fn left_cosets(g: &FiniteGroup, s: &Subgroup) -> Vec<Vec<u32>> {
    let mut marked = vec![false; g.order()];
    let mut cosets = Vec::new();
    for x in g.elements() {
        if marked[x as usize] {
            continue;
        }
        let mut coset: Vec<u32> = s.elements().iter().map(|&t| g.mul(x, t)).collect();
        coset.sort_unstable();
        for &y in &coset {
            marked[y as usize] = true;
        }
        cosets.push(coset);
    }
    cosets
}
