use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::biset::{compose, BisetElement, BisetRegistry, BisetSpace};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::{FieldSpec, Scalar};

/// One summand `c · (U ∘ W)` with `U ∈ B(H,G)` and `W ∈ B(G,H)` transitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateTerm {
    pub u: Subgroup,
    pub w: Subgroup,
    pub coefficient: Scalar,
}

/// A witness for `id_H = Σ cᵢ · (Uᵢ ∘ Wᵢ)`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub h: Arc<FiniteGroup>,
    pub g: Arc<FiniteGroup>,
    pub field: FieldSpec,
    pub terms: Vec<CertificateTerm>,
}

impl Certificate {
    /// `Σ cᵢ · (Uᵢ ∘ Wᵢ)` computed by the Mackey formula.
    pub fn evaluate(&self, registry: &BisetRegistry) -> Result<BisetElement> {
        let s_hg = registry.space(&self.h, &self.g)?;
        let s_gh = registry.space(&self.g, &self.h)?;
        let s_hh = registry.space(&self.h, &self.h)?;
        let mut total = BisetElement::zero(s_hh, self.field);
        for t in &self.terms {
            let u = s_hg.label(&t.u).element(self.field);
            let w = s_gh.label(&t.w).element(self.field);
            total = total.plus(&compose(&u, &w, registry)?.scale(&t.coefficient))?;
        }
        Ok(total)
    }

    pub fn verify(&self, registry: &BisetRegistry) -> Result<bool> {
        let s_hh = registry.space(&self.h, &self.h)?;
        Ok(self.evaluate(registry)? == BisetElement::identity(&s_hh, self.field)?)
    }

    /// From `id_H` through `B` and `id_B` through `G`, a certificate for `H`
    /// through `G`: `id_H = Σ cₐ d_b (Uₐ ∘ X_b) ∘ (Y_b ∘ Wₐ)`.
    pub fn chain(outer: &Certificate, inner: &Certificate, registry: &BisetRegistry) -> Result<Certificate> {
        if outer.g.id() != inner.h.id() || outer.field != inner.field {
            return Err(Error::Mismatch("certificates do not chain".into()));
        }
        let field = outer.field;
        let (h, b, g) = (&outer.h, &outer.g, &inner.g);
        let s_hb = registry.space(h, b)?;
        let s_bh = registry.space(b, h)?;
        let s_bg = registry.space(b, g)?;
        let s_gb = registry.space(g, b)?;
        let mut acc: BTreeMap<(Subgroup, Subgroup), Scalar> = BTreeMap::new();
        for o in &outer.terms {
            let u = s_hb.label(&o.u).element(field);
            let w = s_bh.label(&o.w).element(field);
            for i in &inner.terms {
                let x = s_bg.label(&i.u).element(field);
                let y = s_gb.label(&i.w).element(field);
                let left = compose(&u, &x, registry)?;
                let right = compose(&y, &w, registry)?;
                let c = &o.coefficient * &i.coefficient;
                for (lu, cu) in left.terms() {
                    for (lw, cw) in right.terms() {
                        let e = acc.entry((lu.clone(), lw.clone())).or_insert_with(|| field.zero());
                        *e = &*e + &(&c * &(cu * cw));
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((u, w), coefficient)| CertificateTerm { u, w, coefficient })
            .collect();
        Ok(Certificate { h: Arc::clone(h), g: Arc::clone(g), field, terms })
    }

    pub fn to_record(&self) -> CertificateRecord {
        CertificateRecord {
            version: CertificateRecord::VERSION,
            field: self.field.to_string(),
            h: GroupRecord::of(&self.h),
            g: GroupRecord::of(&self.g),
            terms: self
                .terms
                .iter()
                .map(|t| TermRecord {
                    u: t.u.elements().to_vec(),
                    w: t.w.elements().to_vec(),
                    coefficient: t.coefficient.to_string(),
                })
                .collect(),
        }
    }

    /// Rebuilds a certificate from its record, validating every group table,
    /// subgroup and coefficient.
    pub fn from_record(r: &CertificateRecord, registry: &BisetRegistry) -> Result<Certificate> {
        if r.version != CertificateRecord::VERSION {
            return Err(Error::Parse(format!("unsupported certificate version {}", r.version)));
        }
        let field: FieldSpec = r.field.parse()?;
        let h = Arc::new(r.h.to_group()?);
        let g = Arc::new(r.g.to_group()?);
        let s_hg: Arc<BisetSpace> = registry.space(&h, &g)?;
        let s_gh = registry.space(&g, &h)?;
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in &r.terms {
            terms.push(CertificateTerm {
                u: s_hg.label_from_elements(&t.u)?.subgroup,
                w: s_gh.label_from_elements(&t.w)?.subgroup,
                coefficient: field.parse_scalar(&t.coefficient)?,
            });
        }
        Ok(Certificate { h, g, field, terms })
    }
}

/// Serialized certificate: groups by Cayley table, labels by the canonical
/// subgroup's element list (`(a, b) ↦ a·|right| + b`), coefficients as exact
/// strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub version: u32,
    pub field: String,
    pub h: GroupRecord,
    pub g: GroupRecord,
    pub terms: Vec<TermRecord>,
}

impl CertificateRecord {
    pub const VERSION: u32 = 1;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub name: String,
    pub order: usize,
    pub id: String,
    pub table: Vec<u32>,
}

impl GroupRecord {
    pub fn of(g: &FiniteGroup) -> Self {
        GroupRecord { name: g.name().to_string(), order: g.order(), id: g.id().to_hex(), table: g.table().to_vec() }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        let g = FiniteGroup::from_table(self.name.clone(), self.order, self.table.clone())?;
        if g.id().to_hex() != self.id {
            return Err(Error::Parse(format!("group {} does not match its recorded id", self.name)));
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub u: Vec<u32>,
    pub w: Vec<u32>,
    pub coefficient: String,
}
