use std::sync::Arc;

use crate::biset::BisetRegistry;
use crate::error::Result;
use crate::group::{subquotients_up_to_iso, FiniteGroup, Section, SubgroupLattice};
use crate::linalg::FieldSpec;

use super::certificate::Certificate;
use super::generates::{generates, quotient_certificate, GeneratesReport};
use super::Verdict;

/// Why a subquotient was settled the way it was.
#[derive(Clone, Debug)]
pub enum NvMethod {
    /// Isomorphic to a quotient of `G`.
    Quotient,
    /// A quotient of the already confirmed subquotient at this index.
    Transitive { via: usize },
    /// Decided by a direct span search.
    Direct,
}

#[derive(Clone, Debug)]
pub struct NvEntry {
    pub group: Arc<FiniteGroup>,
    pub witness: Section,
    pub verdict: Verdict,
    pub method: NvMethod,
    pub certificate: Option<Certificate>,
    pub report: Option<GeneratesReport>,
}

#[derive(Clone, Debug)]
pub struct NvReport {
    pub g: Arc<FiniteGroup>,
    pub field: FieldSpec,
    /// One entry per isomorphism type of subquotient, largest first.
    pub entries: Vec<NvEntry>,
    pub overall: Verdict,
}

impl NvReport {
    pub fn failures(&self) -> impl Iterator<Item = &NvEntry> {
        self.entries.iter().filter(|e| e.verdict == Verdict::False)
    }
}

/// Checks `H ⊢ G` for one `H` per isomorphism type of subquotient.
///
/// Quotients of `G` are settled at once. A subquotient that is a quotient of
/// an already confirmed `B` follows by transitivity, and its certificate is
/// the chain of the two. Everything else gets a direct span search.
pub fn is_nv(g: &Arc<FiniteGroup>, field: FieldSpec, registry: &BisetRegistry) -> Result<NvReport> {
    let lattice = SubgroupLattice::new(g, registry.budget())?;
    let mut subs = subquotients_up_to_iso(g, &lattice, registry.budget())?;
    subs.reverse();

    let mut entries: Vec<NvEntry> = Vec::with_capacity(subs.len());
    for sq in subs {
        let h = Arc::new(sq.group);
        if let Some(cert) = quotient_certificate(&h, g, &lattice, field, registry)? {
            entries.push(NvEntry {
                group: h,
                witness: sq.witness,
                verdict: Verdict::True,
                method: NvMethod::Quotient,
                certificate: Some(cert),
                report: None,
            });
            continue;
        }
        let mut via = None;
        for (i, e) in entries.iter().enumerate() {
            if e.verdict != Verdict::True || e.group.order() % h.order() != 0 {
                continue;
            }
            let b_lattice = SubgroupLattice::new(&e.group, registry.budget())?;
            if let Some(outer) = quotient_certificate(&h, &e.group, &b_lattice, field, registry)? {
                let inner = e.certificate.as_ref().expect("confirmed entries carry certificates");
                via = Some((i, Certificate::chain(&outer, inner, registry)?));
                break;
            }
        }
        if let Some((i, cert)) = via {
            entries.push(NvEntry {
                group: h,
                witness: sq.witness,
                verdict: Verdict::True,
                method: NvMethod::Transitive { via: i },
                certificate: Some(cert),
                report: None,
            });
            continue;
        }
        let report = generates(&h, g, field, registry)?;
        entries.push(NvEntry {
            group: h,
            witness: sq.witness,
            verdict: report.verdict,
            certificate: report.certificate.clone(),
            method: NvMethod::Direct,
            report: Some(report),
        });
    }

    let overall = if entries.iter().any(|e| e.verdict == Verdict::False) {
        Verdict::False
    } else if entries.iter().any(|e| e.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::True
    };
    Ok(NvReport { g: Arc::clone(g), field, entries, overall })
}
