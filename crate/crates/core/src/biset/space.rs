use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use dashmap::DashMap;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{direct_product, FiniteGroup, GroupId, PairCoder, Subgroup, SubgroupLattice};
use crate::linalg::{FieldSpec, Scalar};

use super::invariants::{product_invariants, ProductInvariants};

/// The coordinate space `B(G, H)`: the product group `G × H` together with
/// the canonical form of its subgroups up to conjugation.
pub struct BisetSpace {
    left: Arc<FiniteGroup>,
    right: Arc<FiniteGroup>,
    product: FiniteGroup,
    coder: PairCoder,
    abelian: bool,
    canon: DashMap<Subgroup, Subgroup>,
    basis: OnceLock<Arc<Basis>>,
}

impl fmt::Debug for BisetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}, {})", self.left.name(), self.right.name())
    }
}

/// Canonical basis of a biset space: one label per conjugacy class of
/// subgroups of `G × H`, in a fixed order.
#[derive(Debug)]
pub struct Basis {
    pub labels: Vec<Subgroup>,
    index: HashMap<Subgroup, usize>,
}

impl Basis {
    fn from_labels(labels: Vec<Subgroup>) -> Self {
        let index = labels.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Basis { labels, index }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Position of a canonical label.
    pub fn position(&self, canonical: &Subgroup) -> Option<usize> {
        self.index.get(canonical).copied()
    }
}

impl BisetSpace {
    pub fn new(left: Arc<FiniteGroup>, right: Arc<FiniteGroup>, budget: &Budget) -> Result<Self> {
        let product = direct_product(&left, &right, budget)?;
        let abelian = left.is_abelian() && right.is_abelian();
        Ok(BisetSpace {
            coder: PairCoder::new(&right),
            left,
            right,
            product,
            abelian,
            canon: DashMap::new(),
            basis: OnceLock::new(),
        })
    }

    pub fn left(&self) -> &Arc<FiniteGroup> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteGroup> {
        &self.right
    }

    pub fn product(&self) -> &FiniteGroup {
        &self.product
    }

    pub fn coder(&self) -> PairCoder {
        self.coder
    }

    pub fn key(&self) -> (GroupId, GroupId) {
        (self.left.id(), self.right.id())
    }

    pub fn is_square(&self) -> bool {
        self.left.id() == self.right.id()
    }

    #[inline]
    pub fn pair(&self, g: u32, h: u32) -> u32 {
        self.coder.pair(g, h)
    }

    #[inline]
    pub fn split(&self, x: u32) -> (u32, u32) {
        self.coder.split(x)
    }

    /// The least conjugate of `s` under `G × H`.
    pub fn canonical(&self, s: &Subgroup) -> Subgroup {
        if self.abelian {
            return s.clone();
        }
        if let Some(c) = self.canon.get(s) {
            return c.clone();
        }
        let c = s.least_conjugate(&self.product, self.product.elements());
        self.canon.insert(s.clone(), c.clone());
        c
    }

    /// Subgroup of `G × H` given by a list of pairs, closed and canonicalized.
    pub fn label_from_pairs(self: &Arc<Self>, pairs: impl IntoIterator<Item = (u32, u32)>) -> BisetLabel {
        let gens: Vec<u32> = pairs.into_iter().map(|(g, h)| self.pair(g, h)).collect();
        let s = Subgroup::generated(&self.product, &gens);
        self.label(&s)
    }

    /// The label of `[(G × H)/L]`. `l` must be a subgroup of the product.
    pub fn label(self: &Arc<Self>, l: &Subgroup) -> BisetLabel {
        BisetLabel { space: Arc::clone(self), subgroup: self.canonical(l) }
    }

    /// Validates an explicit element list before labeling it.
    pub fn label_from_elements(self: &Arc<Self>, elems: &[u32]) -> Result<BisetLabel> {
        let s = Subgroup::from_elements(&self.product, elems)?;
        Ok(self.label(&s))
    }

    /// `Δ(G)`, the identity of `B(G, G)`.
    pub fn identity_label(self: &Arc<Self>) -> Result<BisetLabel> {
        if !self.is_square() {
            return Err(Error::Mismatch(format!("{self:?} has no identity")));
        }
        Ok(self.label_from_pairs(self.left.elements().map(|g| (g, g))))
    }

    pub fn basis(&self, budget: &Budget) -> Result<Arc<Basis>> {
        if let Some(b) = self.basis.get() {
            return Ok(Arc::clone(b));
        }
        let lattice = SubgroupLattice::new(&self.product, budget)?;
        let labels: Vec<Subgroup> = lattice.class_reps().cloned().collect();
        let basis = Arc::new(Basis::from_labels(labels));
        let _ = self.basis.set(Arc::clone(&basis));
        Ok(Arc::clone(self.basis.get().expect("just set")))
    }

    pub fn invariants(&self, l: &Subgroup) -> ProductInvariants {
        product_invariants(self, l)
    }

    const MAGIC: &'static [u8; 8] = b"BISETBAS";
    const VERSION: u32 = 1;

    pub fn cache_file_name(&self) -> String {
        format!("basis-v{}-{}-{}.bin", Self::VERSION, self.left.id().to_hex(), self.right.id().to_hex())
    }

    /// Writes the basis with the invariants of each label.
    pub fn write_basis(&self, w: &mut impl Write, basis: &Basis) -> Result<()> {
        use crate::group::lattice::{write_list, write_u32};
        w.write_all(Self::MAGIC)?;
        w.write_all(&Self::VERSION.to_le_bytes())?;
        w.write_all(self.left.id().to_hex().as_bytes())?;
        w.write_all(self.right.id().to_hex().as_bytes())?;
        write_u32(w, basis.len())?;
        for l in &basis.labels {
            let inv = self.invariants(l);
            write_list(w, l.elements().iter().copied())?;
            for s in [&inv.p1, &inv.p2, &inv.k1, &inv.k2] {
                write_list(w, s.elements().iter().copied())?;
            }
            write_u32(w, inv.q.order())?;
        }
        Ok(())
    }

    pub fn read_basis(&self, r: &mut impl Read) -> Result<Basis> {
        use crate::group::lattice::{read_list, read_u32};
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != Self::MAGIC || read_u32(r)? != Self::VERSION {
            return Err(Error::Cache("not a version-1 basis file".into()));
        }
        let mut ids = [0u8; 64];
        r.read_exact(&mut ids)?;
        let expect = format!("{}{}", self.left.id().to_hex(), self.right.id().to_hex());
        if ids != expect.as_bytes() {
            return Err(Error::Cache("basis belongs to a different pair of groups".into()));
        }
        let n = read_u32(r)? as usize;
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let elems = read_list(r)?;
            for _ in 0..4 {
                read_list(r)?;
            }
            read_u32(r)?;
            labels.push(Subgroup::from_elements(&self.product, &elems)?);
        }
        Ok(Basis::from_labels(labels))
    }

    /// Basis from the cache directory when present, else computed and saved.
    pub fn basis_cached(&self, dir: &Path, budget: &Budget) -> Result<Arc<Basis>> {
        if let Some(b) = self.basis.get() {
            return Ok(Arc::clone(b));
        }
        let path = dir.join(self.cache_file_name());
        if let Ok(f) = std::fs::File::open(&path) {
            if let Ok(b) = self.read_basis(&mut std::io::BufReader::new(f)) {
                let _ = self.basis.set(Arc::new(b));
                return Ok(Arc::clone(self.basis.get().expect("just set")));
            }
        }
        let basis = self.basis(budget)?;
        std::fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        {
            let mut w = std::io::BufWriter::new(tmp.as_file_mut());
            self.write_basis(&mut w, &basis)?;
            w.flush()?;
        }
        tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        Ok(basis)
    }
}

/// Shares biset spaces between computations, keyed by the content hashes of
/// the two groups.
pub struct BisetRegistry {
    budget: Budget,
    cache_dir: Option<PathBuf>,
    spaces: Mutex<HashMap<(GroupId, GroupId), Arc<BisetSpace>>>,
}

impl BisetRegistry {
    pub fn new(budget: Budget) -> Self {
        BisetRegistry { budget, cache_dir: None, spaces: Mutex::new(HashMap::new()) }
    }

    /// Bases are read from and written to `dir`.
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    /// The canonical basis of a space, through the cache when one is set.
    pub fn basis(&self, space: &BisetSpace) -> Result<Arc<Basis>> {
        match &self.cache_dir {
            Some(dir) => space.basis_cached(dir, &self.budget),
            None => space.basis(&self.budget),
        }
    }

    pub fn space(&self, left: &Arc<FiniteGroup>, right: &Arc<FiniteGroup>) -> Result<Arc<BisetSpace>> {
        let key = (left.id(), right.id());
        if let Some(s) = self.spaces.lock().expect("registry lock").get(&key) {
            return Ok(Arc::clone(s));
        }
        let space = Arc::new(BisetSpace::new(Arc::clone(left), Arc::clone(right), &self.budget)?);
        let mut map = self.spaces.lock().expect("registry lock");
        Ok(Arc::clone(map.entry(key).or_insert(space)))
    }
}

impl Default for BisetRegistry {
    fn default() -> Self {
        Self::new(Budget::default())
    }
}

/// A transitive biset `[(G × H)/L]`, `L` stored in canonical form.
#[derive(Clone)]
pub struct BisetLabel {
    pub space: Arc<BisetSpace>,
    pub subgroup: Subgroup,
}

impl PartialEq for BisetLabel {
    fn eq(&self, other: &Self) -> bool {
        self.space.key() == other.space.key() && self.subgroup == other.subgroup
    }
}

impl Eq for BisetLabel {}

impl fmt::Debug for BisetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[({}x{})/{:?}]", self.space.left.name(), self.space.right.name(), self.subgroup)
    }
}

impl BisetLabel {
    pub fn invariants(&self) -> ProductInvariants {
        self.space.invariants(&self.subgroup)
    }

    pub fn element(&self, field: FieldSpec) -> BisetElement {
        BisetElement::from_label(self, field.one())
    }
}

/// A finite linear combination of transitive bisets in `kB(G, H)`.
#[derive(Clone)]
pub struct BisetElement {
    pub space: Arc<BisetSpace>,
    pub field: FieldSpec,
    terms: BTreeMap<Subgroup, Scalar>,
}

impl PartialEq for BisetElement {
    fn eq(&self, other: &Self) -> bool {
        self.space.key() == other.space.key() && self.field == other.field && self.terms == other.terms
    }
}

impl Eq for BisetElement {}

impl fmt::Debug for BisetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(l, c)| format!("{c}*{l:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl BisetElement {
    pub fn zero(space: Arc<BisetSpace>, field: FieldSpec) -> Self {
        BisetElement { space, field, terms: BTreeMap::new() }
    }

    pub fn from_label(label: &BisetLabel, coeff: Scalar) -> Self {
        let mut e = Self::zero(Arc::clone(&label.space), coeff.field());
        e.add_term(label.subgroup.clone(), coeff);
        e
    }

    pub fn identity(space: &Arc<BisetSpace>, field: FieldSpec) -> Result<Self> {
        Ok(space.identity_label()?.element(field))
    }

    /// Adds `coeff · [label]`; `label` must already be canonical.
    pub(crate) fn add_term(&mut self, label: Subgroup, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(label) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add_label(&mut self, label: &BisetLabel, coeff: Scalar) -> Result<()> {
        if label.space.key() != self.space.key() {
            return Err(Error::Mismatch("label from another biset space".into()));
        }
        self.add_term(label.subgroup.clone(), coeff);
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Subgroup, &Scalar)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = BisetLabel> + '_ {
        self.terms.keys().map(|s| BisetLabel { space: Arc::clone(&self.space), subgroup: s.clone() })
    }

    pub fn coefficient(&self, label: &Subgroup) -> Scalar {
        self.terms.get(label).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(Arc::clone(&self.space), self.field);
        for (l, x) in &self.terms {
            out.add_term(l.clone(), c * x);
        }
        out
    }

    pub fn plus(&self, other: &BisetElement) -> Result<Self> {
        if self.space.key() != other.space.key() || self.field != other.field {
            return Err(Error::Mismatch("adding elements of different spaces or fields".into()));
        }
        let mut out = self.clone();
        for (l, x) in &other.terms {
            out.add_term(l.clone(), x.clone());
        }
        Ok(out)
    }

    /// Coordinates in the canonical basis.
    pub fn coordinates(&self, basis: &Basis) -> Result<Vec<Scalar>> {
        let mut v = vec![self.field.zero(); basis.len()];
        for (l, c) in &self.terms {
            let i = basis.position(l).ok_or_else(|| Error::Mismatch("label missing from basis".into()))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coordinates(space: Arc<BisetSpace>, basis: &Basis, v: &[Scalar]) -> Result<Self> {
        if v.len() != basis.len() {
            return Err(Error::Mismatch("coordinate vector length".into()));
        }
        let field = v.first().map_or(FieldSpec::rationals(), |x| x.field());
        let mut e = Self::zero(space, field);
        for (l, c) in basis.labels.iter().zip(v) {
            e.add_term(l.clone(), c.clone());
        }
        Ok(e)
    }
}
