use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::biset::{mackey_terms, BisetElement, BisetRegistry, BisetSpace};
use crate::error::{Error, Result};
use crate::group::{is_isomorphic, quotient_group, FiniteGroup, Section, Subgroup, SubgroupLattice};
use crate::linalg::{FieldSpec, IncrementalSpan};

use super::certificate::{Certificate, CertificateTerm};
use super::Verdict;

/// How a verdict on `H ⊢ G` was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// `H` is not isomorphic to a subquotient of `G`.
    NotSubquotient,
    /// `H ≅ G/N`, so `id_H = Def ∘ Inf` up to an isomorphism.
    Quotient,
    /// Search of the span of all products `U ∘ W`.
    Span,
    /// The search ran out of budget.
    Budget,
}

#[derive(Clone, Debug)]
pub struct GeneratesReport {
    pub h: Arc<FiniteGroup>,
    pub g: Arc<FiniteGroup>,
    pub field: FieldSpec,
    pub verdict: Verdict,
    pub method: Method,
    pub certificate: Option<Certificate>,
    pub products_tried: u64,
    pub rank_reached: usize,
    /// Dimension of `kB(H, H)` when the span search ran.
    pub target_dim: usize,
    pub note: Option<String>,
}

impl GeneratesReport {
    fn new(h: &Arc<FiniteGroup>, g: &Arc<FiniteGroup>, field: FieldSpec, verdict: Verdict, method: Method) -> Self {
        GeneratesReport {
            h: Arc::clone(h),
            g: Arc::clone(g),
            field,
            verdict,
            method,
            certificate: None,
            products_tried: 0,
            rank_reached: 0,
            target_dim: 0,
            note: None,
        }
    }
}

/// A section of `g` whose quotient is isomorphic to `h`.
pub fn find_subquotient(g: &FiniteGroup, lattice: &SubgroupLattice, h: &FiniteGroup) -> Option<Section> {
    if !g.order().is_multiple_of(h.order()) {
        return None;
    }
    for class in &lattice.classes {
        let top = &lattice.subgroups[class.rep];
        if !top.order().is_multiple_of(h.order()) {
            continue;
        }
        let bottom_order = top.order() / h.order();
        let top_gens = top.small_generating_set(g);
        for s in &lattice.subgroups {
            if s.order() != bottom_order || !s.is_subset(top) || !s.is_normalized_by(g, &top_gens) {
                continue;
            }
            let sec = Section { top: top.clone(), bottom: s.clone() };
            if is_isomorphic(&sec.quotient(g).group, h).is_some() {
                return Some(sec);
            }
        }
    }
    None
}

/// The one-term certificate `id_H = U ∘ W` for `H ≅ G/N`, with
/// `U = {(φπ(g), g)}` and `W = {(g, φπ(g))}`.
pub fn quotient_certificate(
    h: &Arc<FiniteGroup>,
    g: &Arc<FiniteGroup>,
    lattice: &SubgroupLattice,
    field: FieldSpec,
    registry: &BisetRegistry,
) -> Result<Option<Certificate>> {
    if !g.order().is_multiple_of(h.order()) {
        return Ok(None);
    }
    let n_order = g.order() / h.order();
    for n in lattice.normal_subgroups().filter(|n| n.order() == n_order) {
        let q = quotient_group(g, n)?;
        let Some(phi) = is_isomorphic(&q.group, h) else { continue };
        let s_hg = registry.space(h, g)?;
        let s_gh = registry.space(g, h)?;
        let image = |x: u32| phi.apply(q.projection[x as usize]);
        let u = s_hg.label_from_pairs(g.elements().map(|x| (image(x), x)));
        let w = s_gh.label_from_pairs(g.elements().map(|x| (x, image(x))));
        return Ok(Some(Certificate {
            h: Arc::clone(h),
            g: Arc::clone(g),
            field,
            terms: vec![CertificateTerm { u: u.subgroup, w: w.subgroup, coefficient: field.one() }],
        }));
    }
    Ok(None)
}

/// Tunables of the span search. None of them changes a verdict.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Products computed in parallel between two insertion rounds.
    pub chunk: usize,
    /// Skip the quotient shortcut and always search the span.
    pub force_span: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { chunk: 2048, force_span: false }
    }
}

/// Decides `H ⊢_k G`: whether `id_H` lies in `kB(H,G) ∘ kB(G,H)`.
pub fn generates(
    h: &Arc<FiniteGroup>,
    g: &Arc<FiniteGroup>,
    field: FieldSpec,
    registry: &BisetRegistry,
) -> Result<GeneratesReport> {
    generates_with(h, g, field, registry, &SearchOptions::default())
}

pub fn generates_with(
    h: &Arc<FiniteGroup>,
    g: &Arc<FiniteGroup>,
    field: FieldSpec,
    registry: &BisetRegistry,
    opts: &SearchOptions,
) -> Result<GeneratesReport> {
    match generates_inner(h, g, field, registry, opts) {
        Err(e) if e.is_budget() => {
            let mut r = GeneratesReport::new(h, g, field, Verdict::Inconclusive, Method::Budget);
            r.note = Some(e.to_string());
            Ok(r)
        }
        other => other,
    }
}

fn generates_inner(
    h: &Arc<FiniteGroup>,
    g: &Arc<FiniteGroup>,
    field: FieldSpec,
    registry: &BisetRegistry,
    opts: &SearchOptions,
) -> Result<GeneratesReport> {
    let lattice = SubgroupLattice::new(g, registry.budget())?;
    if find_subquotient(g, &lattice, h).is_none() {
        return Ok(GeneratesReport::new(h, g, field, Verdict::False, Method::NotSubquotient));
    }
    if !opts.force_span {
        if let Some(cert) = quotient_certificate(h, g, &lattice, field, registry)? {
            let mut r = GeneratesReport::new(h, g, field, Verdict::True, Method::Quotient);
            r.products_tried = 1;
            r.certificate = Some(cert);
            return Ok(r);
        }
    }
    span_search(h, g, field, registry, opts)
}

/// Per-label data for ordering pairs by the size of `L ⋆ M`.
struct Shape {
    p1: FixedBitSet,
    p2: FixedBitSet,
    k1: FixedBitSet,
    k2: FixedBitSet,
    k1_order: u64,
    k2_order: u64,
}

impl Shape {
    fn of(space: &BisetSpace, l: &Subgroup) -> Shape {
        let inv = space.invariants(l);
        Shape {
            k1_order: inv.k1.order() as u64,
            k2_order: inv.k2.order() as u64,
            p1: inv.p1.bits().clone(),
            p2: inv.p2.bits().clone(),
            k1: inv.k1.bits().clone(),
            k2: inv.k2.bits().clone(),
        }
    }
}

/// `|L ⋆ M| = |p₂(L) ∩ p₁(M)| · |k₁(L)| · |k₂(M)| / |k₂(L) ∩ k₁(M)|`.
fn star_size(l: &Shape, m: &Shape) -> u64 {
    let meet = l.p2.intersection(&m.p1).count() as u64;
    let kern = l.k2.intersection(&m.k1).count() as u64;
    meet * l.k1_order * m.k2_order / kern
}

fn span_search(
    h: &Arc<FiniteGroup>,
    g: &Arc<FiniteGroup>,
    field: FieldSpec,
    registry: &BisetRegistry,
    opts: &SearchOptions,
) -> Result<GeneratesReport> {
    let budget = registry.budget();
    let s_hg = registry.space(h, g)?;
    let s_gh = registry.space(g, h)?;
    let s_hh = registry.space(h, h)?;
    let b_hg = registry.basis(&s_hg)?;
    let b_gh = registry.basis(&s_gh)?;
    let b_hh = registry.basis(&s_hh)?;
    let us: Vec<_> = b_hg.labels.iter().map(|l| s_hg.label(l)).collect();
    let ws: Vec<_> = b_gh.labels.iter().map(|l| s_gh.label(l)).collect();

    let u_shapes: Vec<Shape> = b_hg.labels.iter().map(|l| Shape::of(&s_hg, l)).collect();
    let w_shapes: Vec<Shape> = b_gh.labels.iter().map(|l| Shape::of(&s_gh, l)).collect();
    let mut pairs: Vec<(u64, u32, u32)> = Vec::with_capacity(us.len() * ws.len());
    for (i, su) in u_shapes.iter().enumerate() {
        for (j, sw) in w_shapes.iter().enumerate() {
            pairs.push((star_size(su, sw), i as u32, j as u32));
        }
    }
    pairs.sort_unstable();

    let id = BisetElement::identity(&s_hh, field)?;
    let id_vec = id.coordinates(&b_hh)?;
    let mut span = IncrementalSpan::with_provenance(field, b_hh.len());
    let mut origin: Vec<(u32, u32)> = Vec::new();
    let mut seen: HashSet<Vec<(usize, i64)>> = HashSet::new();
    let mut tried = 0u64;
    let mut checked_rank = 0;
    let mut found = false;

    let cap = budget.max_products.map_or(pairs.len(), |c| pairs.len().min(c as usize));
    for chunk in pairs[..cap].chunks(opts.chunk.max(1)) {
        budget.check_time("biset products", tried as usize)?;
        let products: Vec<Vec<(usize, i64)>> = chunk
            .par_iter()
            .map(|&(_, i, j)| {
                let mut v: Vec<(usize, i64)> = mackey_terms(&us[i as usize], &ws[j as usize], &s_hh)
                    .into_iter()
                    .map(|(l, n)| (b_hh.position(&l).expect("composite label lies in the basis"), n as i64))
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        for (v, &(_, i, j)) in products.into_iter().zip(chunk) {
            tried += 1;
            if !seen.insert(v.clone()) {
                continue;
            }
            span.add_sparse_integers(&v)?;
            origin.push((i, j));
        }
        if span.rank() > checked_rank {
            checked_rank = span.rank();
            if span.contains(&id_vec)? {
                found = true;
                break;
            }
        }
    }

    if !found && cap < pairs.len() {
        return Err(Error::budget("biset products", tried as usize));
    }

    let mut report =
        GeneratesReport::new(h, g, field, if found { Verdict::True } else { Verdict::False }, Method::Span);
    report.products_tried = tried;
    report.rank_reached = span.rank();
    report.target_dim = b_hh.len();
    if found {
        let coeffs = span.certificate(&id_vec)?;
        let terms = coeffs
            .into_iter()
            .zip(&origin)
            .filter(|(c, _)| !c.is_zero())
            .map(|(coefficient, &(i, j))| CertificateTerm {
                u: b_hg.labels[i as usize].clone(),
                w: b_gh.labels[j as usize].clone(),
                coefficient,
            })
            .collect();
        let cert = Certificate { h: Arc::clone(h), g: Arc::clone(g), field, terms };
        if !cert.verify(registry)? {
            return Err(Error::Mismatch("span certificate failed to recompose to the identity".into()));
        }
        report.certificate = Some(cert);
    }
    Ok(report)
}
