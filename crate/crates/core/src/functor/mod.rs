//! The decision procedures built on biset composition: the generating
//! relation, non-vanishing groups, simple functor dimensions, and the
//! structure of `kB(G, G)` and its action on `kB(G)`.

mod algebra;
mod certificate;
mod generates;
mod module;
mod nv;
mod structure;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use algebra::{
    essential_quotient_dim, essential_quotient_dim_by_basis, is_semisimple, radical_dim_char0, structure_constants,
    trace_gram_rank, StructureConstants,
};
pub use certificate::{Certificate, CertificateRecord, CertificateTerm, GroupRecord, TermRecord};
pub use generates::{
    find_subquotient, generates, generates_with, quotient_certificate, GeneratesReport, Method, SearchOptions,
};
pub use module::{
    abelian_action_matrices, bullet, burnside_module_matrices, check_submodules, ModuleActionSet, SubmoduleReport,
};
pub use nv::{is_nv, NvEntry, NvMethod, NvReport};
pub use structure::{
    classified_self_dual_p_group, is_p_group_times_cyclic, is_s_self_dual, simple_dim_p_group, SimpleDim, SsdReport,
};

/// Outcome of a decision. `Inconclusive` means a budget ran out; `False` is
/// only reported after a complete search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[cfg(test)]
mod tests;
