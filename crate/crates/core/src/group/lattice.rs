use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use fixedbitset::FixedBitSet;

use super::{FiniteGroup, GroupId, Subgroup};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// One conjugacy class of subgroups. `rep` is the lexicographically least member.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub rep: usize,
    pub members: Vec<usize>,
}

/// All subgroups of a group, sorted by `Subgroup`'s order, together with the
/// partition into conjugacy classes.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    pub group_id: GroupId,
    pub subgroups: Vec<Subgroup>,
    pub classes: Vec<SubgroupClass>,
    pub class_of: Vec<usize>,
}

/// Every subgroup of `g`, sorted and duplicate-free.
///
/// Starts from the cyclic subgroups and closes under joins with cyclic
/// subgroups, which reaches every subgroup.
pub fn all_subgroups(g: &FiniteGroup, budget: &Budget) -> Result<Vec<Subgroup>> {
    let mut cyclic_gens: Vec<u32> = Vec::new();
    let mut seen: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut found: Vec<Subgroup> = Vec::new();

    let trivial = g.trivial_subgroup();
    seen.insert(trivial.bits().clone(), 0);
    found.push(trivial);
    for x in g.elements().skip(1) {
        let c = Subgroup::generated(g, &[x]);
        if !seen.contains_key(c.bits()) {
            seen.insert(c.bits().clone(), found.len());
            found.push(c);
            cyclic_gens.push(x);
        }
    }

    let mut next = 1;
    while next < found.len() {
        if next % 256 == 0 {
            budget.check_time("enumerating subgroups", found.len())?;
        }
        let s = found[next].clone();
        next += 1;
        for &z in &cyclic_gens {
            if s.contains(z) {
                continue;
            }
            let t = s.join_element(g, z);
            if !seen.contains_key(t.bits()) {
                if found.len() >= budget.max_subgroups {
                    return Err(Error::budget("enumerating subgroups", found.len()));
                }
                seen.insert(t.bits().clone(), found.len());
                found.push(t);
            }
        }
    }
    found.sort();
    Ok(found)
}

/// Subgroups of `g` partitioned into conjugacy classes, classes listed in
/// order of their canonical representatives.
pub fn subgroup_conjugacy_classes(g: &FiniteGroup, budget: &Budget) -> Result<SubgroupLattice> {
    let subgroups = all_subgroups(g, budget)?;
    SubgroupLattice::from_subgroups(g, subgroups, budget)
}

impl SubgroupLattice {
    pub fn new(g: &FiniteGroup, budget: &Budget) -> Result<Self> {
        subgroup_conjugacy_classes(g, budget)
    }

    fn from_subgroups(g: &FiniteGroup, subgroups: Vec<Subgroup>, budget: &Budget) -> Result<Self> {
        let index: HashMap<&FixedBitSet, usize> = subgroups.iter().enumerate().map(|(i, s)| (s.bits(), i)).collect();
        let abelian = g.is_abelian();
        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut classes = Vec::new();
        for i in 0..subgroups.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            if classes.len() % 64 == 0 {
                budget.check_time("computing subgroup classes", classes.len())?;
            }
            let c = classes.len();
            let mut members = vec![i];
            class_of[i] = c;
            if !abelian {
                for x in g.elements() {
                    let conj = subgroups[i].conjugate(g, x);
                    let j = index[conj.bits()];
                    if class_of[j] == usize::MAX {
                        class_of[j] = c;
                        members.push(j);
                    }
                }
                members.sort_unstable();
            }
            classes.push(SubgroupClass { rep: i, members });
        }
        Ok(SubgroupLattice { group_id: g.id(), subgroups, classes, class_of })
    }

    pub fn class_reps(&self) -> impl Iterator<Item = &Subgroup> {
        self.classes.iter().map(|c| &self.subgroups[c.rep])
    }

    pub fn rep_of(&self, class: usize) -> &Subgroup {
        &self.subgroups[self.classes[class].rep]
    }

    pub fn index_of(&self, s: &Subgroup) -> Option<usize> {
        self.subgroups.binary_search(s).ok()
    }

    pub fn class_of_subgroup(&self, s: &Subgroup) -> Option<usize> {
        self.index_of(s).map(|i| self.class_of[i])
    }

    pub fn normal_subgroups(&self) -> impl Iterator<Item = &Subgroup> {
        self.classes.iter().filter(|c| c.members.len() == 1).map(|c| &self.subgroups[c.rep])
    }

    const MAGIC: &'static [u8; 8] = b"SGLATTIC";
    const VERSION: u32 = 1;

    /// Deterministic binary encoding: little-endian, every list length-prefixed.
    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(Self::MAGIC)?;
        w.write_all(&Self::VERSION.to_le_bytes())?;
        w.write_all(&self.group_id.0)?;
        write_u32(w, self.subgroups.len())?;
        for s in &self.subgroups {
            write_list(w, s.elements().iter().copied())?;
        }
        write_u32(w, self.classes.len())?;
        for c in &self.classes {
            write_u32(w, c.rep)?;
            write_list(w, c.members.iter().map(|&m| m as u32))?;
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read, g: &FiniteGroup) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != Self::MAGIC {
            return Err(Error::Cache("not a subgroup lattice file".into()));
        }
        let version = read_u32(r)?;
        if version != Self::VERSION {
            return Err(Error::Cache(format!("unsupported lattice version {version}")));
        }
        let mut id = [0u8; 16];
        r.read_exact(&mut id)?;
        if id != g.id().0 {
            return Err(Error::Cache("lattice belongs to a different group".into()));
        }
        let n = read_u32(r)? as usize;
        let mut subgroups = Vec::with_capacity(n);
        for _ in 0..n {
            let elems = read_list(r)?;
            if elems.iter().any(|&x| x as usize >= g.order()) {
                return Err(Error::Cache("element out of range".into()));
            }
            subgroups.push(Subgroup::from_sorted_unchecked(g.order(), elems));
        }
        let nc = read_u32(r)? as usize;
        let mut classes = Vec::with_capacity(nc);
        let mut class_of = vec![usize::MAX; n];
        for c in 0..nc {
            let rep = read_u32(r)? as usize;
            let members: Vec<usize> = read_list(r)?.into_iter().map(|m| m as usize).collect();
            for &m in &members {
                if m >= n {
                    return Err(Error::Cache("class member out of range".into()));
                }
                class_of[m] = c;
            }
            classes.push(SubgroupClass { rep, members });
        }
        if class_of.contains(&usize::MAX) {
            return Err(Error::Cache("classes do not cover all subgroups".into()));
        }
        Ok(SubgroupLattice { group_id: g.id(), subgroups, classes, class_of })
    }

    pub fn cache_file_name(g: &FiniteGroup) -> String {
        format!("lattice-v{}-{}.bin", Self::VERSION, g.id().to_hex())
    }

    /// Loads the lattice from `dir` if present and valid, otherwise computes
    /// it and writes it atomically.
    pub fn load_or_compute(g: &FiniteGroup, dir: &Path, budget: &Budget) -> Result<Self> {
        let path = dir.join(Self::cache_file_name(g));
        if let Ok(mut f) = std::fs::File::open(&path) {
            let mut reader = std::io::BufReader::new(&mut f);
            if let Ok(lat) = Self::read_from(&mut reader, g) {
                return Ok(lat);
            }
        }
        let lat = Self::new(g, budget)?;
        std::fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        {
            let mut w = std::io::BufWriter::new(tmp.as_file_mut());
            lat.write_to(&mut w)?;
            w.flush()?;
        }
        tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        Ok(lat)
    }
}

pub(crate) fn write_u32(w: &mut impl Write, x: usize) -> Result<()> {
    let x = u32::try_from(x).map_err(|_| Error::Cache("value exceeds u32".into()))?;
    w.write_all(&x.to_le_bytes())?;
    Ok(())
}

pub(crate) fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn write_list(w: &mut impl Write, xs: impl ExactSizeIterator<Item = u32>) -> Result<()> {
    write_u32(w, xs.len())?;
    for x in xs {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub(crate) fn read_list(r: &mut impl Read) -> Result<Vec<u32>> {
    let n = read_u32(r)? as usize;
    (0..n).map(|_| read_u32(r)).collect()
}
