use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::biset::{mackey_terms, trace_count, BisetRegistry, BisetSpace};
use crate::error::Result;
use crate::group::{automorphisms, euler_phi, FiniteGroup};
use crate::linalg::{integer_rank, FieldSpec, Matrix};

/// `kB(G,G)` is semisimple iff `G` is cyclic and `char k ∤ φ(|G|)`.
pub fn is_semisimple(g: &FiniteGroup, field: FieldSpec) -> bool {
    let c = field.characteristic();
    g.is_cyclic() && (c == 0 || !euler_phi(g.order() as u64).is_multiple_of(c))
}

/// Structure constants of `B(G,G)` in its canonical basis:
/// `table[i][j]` lists `(k, n)` with `bᵢ ∘ bⱼ = Σ n·b_k`.
pub struct StructureConstants {
    pub space: Arc<BisetSpace>,
    pub dim: usize,
    pub table: Vec<Vec<Vec<(usize, i64)>>>,
}

pub fn structure_constants(g: &Arc<FiniteGroup>, registry: &BisetRegistry) -> Result<StructureConstants> {
    let space = registry.space(g, g)?;
    let basis = registry.basis(&space)?;
    let labels: Vec<_> = basis.labels.iter().map(|l| space.label(l)).collect();
    let table = labels
        .par_iter()
        .map(|u| {
            labels
                .iter()
                .map(|w| {
                    mackey_terms(u, w, &space)
                        .into_iter()
                        .map(|(l, n)| (basis.position(&l).expect("basis is closed under composition"), n as i64))
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(StructureConstants { dim: basis.len(), space, table })
}

impl StructureConstants {
    /// Gram matrix `(bᵢ, bⱼ) ↦ f(bᵢ ∘ bⱼ)` for a linear form given on the basis.
    fn gram(&self, form: &[i64]) -> Vec<Vec<i64>> {
        self.table.iter().map(|row| row.iter().map(|v| v.iter().map(|&(k, n)| n * form[k]).sum()).collect()).collect()
    }

    /// Trace of left multiplication by each basis element.
    fn regular_traces(&self) -> Vec<i64> {
        (0..self.dim)
            .map(|k| {
                self.table[k]
                    .iter()
                    .enumerate()
                    .map(|(w, v)| v.iter().find(|&&(i, _)| i == w).map_or(0, |&(_, n)| n))
                    .sum()
            })
            .collect()
    }
}

/// Dimension of the radical of the trace form of the regular representation
/// of `ℚB(G,G)`, which in characteristic 0 is the Jacobson radical.
pub fn radical_dim_char0(g: &Arc<FiniteGroup>, registry: &BisetRegistry) -> Result<usize> {
    let sc = structure_constants(g, registry)?;
    Ok(sc.dim - integer_rank(&sc.gram(&sc.regular_traces())))
}

/// Rank and size of the Gram matrix of `(U, V) ↦ tr(U ∘ V)` on `kB(G,G)`.
pub fn trace_gram_rank(g: &Arc<FiniteGroup>, field: FieldSpec, registry: &BisetRegistry) -> Result<(usize, usize)> {
    let sc = structure_constants(g, registry)?;
    let basis = registry.basis(&sc.space)?;
    let traces: Vec<i64> =
        basis.labels.iter().map(|l| trace_count(&sc.space.label(l)).map(|t| t as i64)).collect::<Result<_>>()?;
    let gram = sc.gram(&traces);
    let rank = if field.is_rational() { integer_rank(&gram) } else { Matrix::from_i64(field, &gram)?.rank() };
    Ok((rank, sc.dim))
}

/// Dimension of `kB(H,H)` modulo the span of the labels with `|q(L)| < |H|`.
///
/// The remaining labels have `p₁ = p₂ = H` and trivial kernels, so they are
/// graphs `{(α(h), h)}` of automorphisms; this counts their classes.
pub fn essential_quotient_dim(h: &Arc<FiniteGroup>, registry: &BisetRegistry) -> Result<usize> {
    let space = registry.space(h, h)?;
    let auts = automorphisms(h, registry.budget())?;
    let classes: BTreeSet<_> = auts
        .automorphisms
        .iter()
        .map(|a| space.label_from_pairs(h.elements().map(|x| (a.apply(x), x))).subgroup)
        .collect();
    Ok(classes.len())
}

/// The same dimension read off the full canonical basis.
pub fn essential_quotient_dim_by_basis(h: &Arc<FiniteGroup>, registry: &BisetRegistry) -> Result<usize> {
    let space = registry.space(h, h)?;
    let basis = registry.basis(&space)?;
    Ok(basis.labels.iter().filter(|l| space.invariants(l).q_order() == h.order()).count())
}
