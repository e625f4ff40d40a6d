use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::biset::{mackey_terms, BisetRegistry, BisetSpace};
use crate::error::{Error, Result};
use crate::group::{double_coset_reps, FiniteGroup, Subgroup};
use crate::linalg::{FieldSpec, Matrix, Scalar};

/// The action of `kB(G,G)` on `kB(G) = kB(G,1)`: one matrix per canonical
/// basis label of `kB(G,G)`, acting on coordinates indexed by the classes of
/// subgroups of `G`.
pub struct ModuleActionSet {
    pub g: Arc<FiniteGroup>,
    pub field: FieldSpec,
    /// Basis of `kB(G,G)`, subgroups of `G × G`.
    pub acting: Vec<Subgroup>,
    /// Basis of `kB(G)`: class representatives of subgroups of `G`.
    pub points: Vec<Subgroup>,
    pub matrices: Vec<Matrix>,
}

impl ModuleActionSet {
    /// Index of the point `G/G`.
    pub fn whole_index(&self) -> usize {
        self.points.len() - 1
    }
}

fn burnside_space(g: &Arc<FiniteGroup>, registry: &BisetRegistry) -> Result<Arc<BisetSpace>> {
    registry.space(g, &Arc::new(FiniteGroup::trivial()))
}

/// The action computed by the Mackey formula through `B(G) = B(G,1)`.
pub fn burnside_module_matrices(
    g: &Arc<FiniteGroup>,
    field: FieldSpec,
    registry: &BisetRegistry,
) -> Result<ModuleActionSet> {
    let s_gg = registry.space(g, g)?;
    let s_g1 = burnside_space(g, registry)?;
    let b_gg = registry.basis(&s_gg)?;
    let b_g1 = registry.basis(&s_g1)?;
    let points: Vec<_> = b_g1.labels.iter().map(|l| s_g1.label(l)).collect();
    let n = points.len();
    let mut matrices = Vec::with_capacity(b_gg.len());
    for l in &b_gg.labels {
        let x = s_gg.label(l);
        let mut m = Matrix::zeros(field, n, n);
        for (j, p) in points.iter().enumerate() {
            for (label, c) in mackey_terms(&x, p, &s_g1) {
                let i = b_g1.position(&label).expect("basis of B(G,1)");
                m.set(i, j, field.from_i64(c as i64));
            }
        }
        matrices.push(m);
    }
    // G × 1 is encoded as G itself, so these are subgroups of G.
    let points = b_g1.labels.iter().map(|l| Subgroup::from_elements(g, l.elements())).collect::<Result<_>>()?;
    Ok(ModuleActionSet { g: Arc::clone(g), field, acting: b_gg.labels.clone(), points, matrices })
}

/// `H•L = {g : ∃ l ∈ L, (g, l) ∈ H}` for `H ≤ G × G` and `L ≤ G`.
pub fn bullet(space: &BisetSpace, h: &Subgroup, l: &Subgroup) -> Subgroup {
    let mut bits = FixedBitSet::with_capacity(space.left().order());
    for &x in h.elements() {
        let (a, b) = space.split(x);
        if l.contains(b) {
            bits.insert(a as usize);
        }
    }
    Subgroup::from_elements(space.left(), &bits.ones().map(|i| i as u32).collect::<Vec<_>>())
        .expect("H•L is a subgroup")
}

/// For abelian `G`: `[(G×G)/H] · G/L = |p₂(H)\G/L| · G/(H•L)`.
pub fn abelian_action_matrices(
    g: &Arc<FiniteGroup>,
    field: FieldSpec,
    registry: &BisetRegistry,
) -> Result<ModuleActionSet> {
    if !g.is_abelian() {
        return Err(Error::Precondition(format!("{} is not abelian", g.name())));
    }
    let s_gg = registry.space(g, g)?;
    let b_gg = registry.basis(&s_gg)?;
    let s_g1 = burnside_space(g, registry)?;
    let b_g1 = registry.basis(&s_g1)?;
    let points: Vec<Subgroup> =
        b_g1.labels.iter().map(|l| Subgroup::from_elements(g, l.elements())).collect::<Result<_>>()?;
    let n = points.len();
    let mut matrices = Vec::with_capacity(b_gg.len());
    for h in &b_gg.labels {
        let p2_elems: Vec<u32> = h.elements().iter().map(|&x| s_gg.split(x).1).collect();
        let p2 = Subgroup::generated(g, &p2_elems);
        let mut m = Matrix::zeros(field, n, n);
        for (j, l) in points.iter().enumerate() {
            let count = double_coset_reps(&p2, g, l).len() as i64;
            let target = bullet(&s_gg, h, l);
            let i = points.iter().position(|p| *p == target).expect("subgroup of abelian G is a point");
            m.set(i, j, field.from_i64(count));
        }
        matrices.push(m);
    }
    Ok(ModuleActionSet { g: Arc::clone(g), field, acting: b_gg.labels.clone(), points, matrices })
}

/// Invariance of `N(G) = {Σ λ_L = 0}` and `N′(G) = {λ_G = 0, Σ λ_L = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleReport {
    pub module_dim: usize,
    pub n_dim: usize,
    pub n_invariant: bool,
    pub n_prime_dim: usize,
    pub n_prime_invariant: bool,
}

impl SubmoduleReport {
    /// A proper nonzero invariant subspace was found.
    pub fn not_simple(&self) -> bool {
        (self.n_invariant && self.n_dim > 0) || (self.n_prime_invariant && self.n_prime_dim > 0)
    }
}

fn subspace_invariant(set: &ModuleActionSet, basis: &[Vec<Scalar>], functionals: &[Vec<Scalar>]) -> Result<bool> {
    let f = set.field;
    for m in &set.matrices {
        for v in basis {
            let mv = m.mul_vec(v)?;
            for phi in functionals {
                let mut s = f.zero();
                for (a, b) in phi.iter().zip(&mv) {
                    s = &s + &(a * b);
                }
                if !s.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// For a cyclic `p`-group, tests `N(G)` and `N′(G)` for invariance under
/// every action matrix.
pub fn check_submodules(g: &Arc<FiniteGroup>, field: FieldSpec, registry: &BisetRegistry) -> Result<SubmoduleReport> {
    if !g.is_cyclic() || g.is_p_group().is_none() {
        return Err(Error::Precondition(format!("{} is not a nontrivial cyclic p-group", g.name())));
    }
    let set = burnside_module_matrices(g, field, registry)?;
    let n = set.points.len();
    let whole = set.whole_index();
    let unit = |i: usize, j: usize| -> Vec<Scalar> {
        let mut v = vec![field.zero(); n];
        v[i] = field.one();
        v[j] = &v[j] - &field.one();
        v
    };
    let sum = vec![field.one(); n];
    let mut at_whole = vec![field.zero(); n];
    at_whole[whole] = field.one();

    let n_basis: Vec<_> = (1..n).map(|i| unit(i, 0)).collect();
    let np_basis: Vec<_> = (1..n).filter(|&i| i != whole).map(|i| unit(i, 0)).collect();
    Ok(SubmoduleReport {
        module_dim: n,
        n_dim: n_basis.len(),
        n_invariant: subspace_invariant(&set, &n_basis, std::slice::from_ref(&sum))?,
        n_prime_dim: np_basis.len(),
        n_prime_invariant: subspace_invariant(&set, &np_basis, &[sum, at_whole])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biset::compose;
    use crate::group::build_group;

    fn grp(s: &str) -> Arc<FiniteGroup> {
        Arc::new(build_group(&s.parse().unwrap()).unwrap())
    }

    #[test]
    fn identity_acts_trivially() {
        let reg = BisetRegistry::default();
        let g = grp("S3");
        let set = burnside_module_matrices(&g, FieldSpec::rationals(), &reg).unwrap();
        let s = reg.space(&g, &g).unwrap();
        let id = s.identity_label().unwrap().subgroup;
        let i = set.acting.iter().position(|l| *l == id).unwrap();
        assert_eq!(set.matrices[i], Matrix::identity(FieldSpec::rationals(), set.points.len()));
        assert_eq!(set.points.len(), 4);
    }

    #[test]
    fn action_is_multiplicative() {
        let reg = BisetRegistry::default();
        let q = FieldSpec::rationals();
        let g = grp("C4");
        let set = burnside_module_matrices(&g, q, &reg).unwrap();
        let s = reg.space(&g, &g).unwrap();
        for (a, la) in set.acting.iter().enumerate().step_by(3) {
            for (b, lb) in set.acting.iter().enumerate().step_by(5) {
                let uv = compose(&s.label(la).element(q), &s.label(lb).element(q), &reg).unwrap();
                let mut m = Matrix::zeros(q, set.points.len(), set.points.len());
                for (l, c) in uv.terms() {
                    let k = set.acting.iter().position(|x| x == l).unwrap();
                    for r in 0..m.rows() {
                        for col in 0..m.cols() {
                            let v = m.get(r, col) + &(c * set.matrices[k].get(r, col));
                            m.set(r, col, v);
                        }
                    }
                }
                assert_eq!(m, set.matrices[a].mul(&set.matrices[b]).unwrap());
            }
        }
    }

    #[test]
    fn abelian_formula_matches_mackey() {
        let reg = BisetRegistry::default();
        for s in ["C4", "C2^2", "C6", "C9"] {
            let g = grp(s);
            let f = FieldSpec::rationals();
            let a = burnside_module_matrices(&g, f, &reg).unwrap();
            let b = abelian_action_matrices(&g, f, &reg).unwrap();
            assert_eq!(a.points, b.points);
            assert_eq!(a.matrices, b.matrices, "{s}");
        }
    }

    #[test]
    fn whole_group_column_in_c9() {
        // labels with k1 = k2 < G never send a proper G/L to G/G
        let reg = BisetRegistry::default();
        let g = grp("C9");
        let set = burnside_module_matrices(&g, FieldSpec::rationals(), &reg).unwrap();
        let s = reg.space(&g, &g).unwrap();
        let whole = set.whole_index();
        for (l, m) in set.acting.iter().zip(&set.matrices) {
            let inv = s.invariants(l);
            if inv.k1 == inv.k2 && inv.k1.order() < 9 {
                for j in (0..set.points.len()).filter(|&j| j != whole) {
                    assert!(m.get(whole, j).is_zero());
                    assert!(bullet(&s, l, &set.points[j]).order() < 9);
                }
            }
        }
    }

    #[test]
    fn burnside_submodules() {
        let reg = BisetRegistry::default();
        let f = |c| FieldSpec::new(c).unwrap();
        let r = check_submodules(&grp("C3"), f(2), &reg).unwrap();
        assert!(r.n_invariant && r.n_dim == 1);
        let r = check_submodules(&grp("C9"), f(3), &reg).unwrap();
        assert!(r.n_prime_invariant && r.n_prime_dim == 1);
        assert!(r.not_simple());
        let r = check_submodules(&grp("C2"), f(0), &reg).unwrap();
        assert!(!r.not_simple());
        assert!(check_submodules(&grp("C6"), f(0), &reg).is_err());
    }
}
