//! Finite groups given by dense Cayley tables, their subgroups, sections and
//! the small amount of structure theory the biset computations need.

mod cosets;
mod iso;
pub(crate) mod lattice;
mod quotient;
mod sections;
mod spec;
mod subgroup;

use std::fmt;

use num_integer::Integer;
use sha2::{Digest, Sha256};

use crate::budget::Budget;
use crate::error::{Error, Result};

pub use cosets::{double_coset_reps, left_cosets};
pub use iso::{automorphisms, is_isomorphic, AutomorphismData, Isomorphism};
pub use lattice::{all_subgroups, subgroup_conjugacy_classes, SubgroupClass, SubgroupLattice};
pub(crate) use quotient::quotient_unchecked;
pub use quotient::{quotient_group, Quotient};
pub use sections::{section_classes, subquotients_up_to_iso, Section, SectionClass, Subquotient};
pub use spec::{build_group, build_group_with, GroupSpec};
pub use subgroup::Subgroup;

/// Content hash of a Cayley table. Two groups with identical tables share an id.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId([u8; 16]);

impl GroupId {
    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Debug for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupId({})", &self.to_hex()[..8])
    }
}

/// A finite group on the elements `0..order`, with `0` the identity.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    elem_orders: Vec<u32>,
    id: GroupId,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for FiniteGroup {}

/// Orders up to this bound get the exhaustive associativity check on construction.
const ASSOCIATIVITY_CHECK_LIMIT: usize = 256;

impl FiniteGroup {
    /// Builds a group from a row-major multiplication table, validating it.
    pub fn from_table(name: impl Into<String>, order: usize, table: Vec<u32>) -> Result<Self> {
        let g = Self::from_table_unchecked(name, order, table)?;
        if order <= ASSOCIATIVITY_CHECK_LIMIT {
            g.check_associative()?;
        }
        Ok(g)
    }

    /// Builds a group whose associativity is known by construction. The
    /// table is still checked to be a Latin square with identity `0`.
    pub(crate) fn from_table_unchecked(name: impl Into<String>, order: usize, table: Vec<u32>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidTable("empty group".into()));
        }
        if table.len() != order * order {
            return Err(Error::InvalidTable(format!("table has {} entries, expected {}", table.len(), order * order)));
        }
        let n = order;
        if table.iter().any(|&x| x as usize >= n) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        for x in 0..n {
            if table[x] as usize != x || table[x * n] as usize != x {
                return Err(Error::InvalidTable("0 is not a two-sided identity".into()));
            }
        }
        let mut inv = vec![u32::MAX; n];
        let mut seen = vec![0u32; n];
        for a in 0..n {
            let row = &table[a * n..(a + 1) * n];
            for (b, &ab) in row.iter().enumerate() {
                if seen[ab as usize] == a as u32 + 1 {
                    return Err(Error::InvalidTable(format!("row {a} repeats an entry")));
                }
                seen[ab as usize] = a as u32 + 1;
                if ab == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        let mut col_seen = vec![false; n];
        for b in 0..n {
            col_seen.iter_mut().for_each(|s| *s = false);
            for a in 0..n {
                let ab = table[a * n + b] as usize;
                if col_seen[ab] {
                    return Err(Error::InvalidTable(format!("column {b} repeats an entry")));
                }
                col_seen[ab] = true;
            }
        }
        for a in 0..n {
            if table[inv[a] as usize * n + a] != 0 {
                return Err(Error::InvalidTable(format!("inverse of {a} is not two-sided")));
            }
        }

        let mut hasher = Sha256::new();
        hasher.update((n as u64).to_le_bytes());
        for &x in &table {
            hasher.update(x.to_le_bytes());
        }
        let digest = hasher.finalize();
        let mut id = [0u8; 16];
        id.copy_from_slice(&digest[..16]);

        let mut g = FiniteGroup { name: name.into(), order: n, table, inv, elem_orders: Vec::new(), id: GroupId(id) };
        g.elem_orders = (0..n as u32).map(|x| g.compute_order(x)).collect();
        Ok(g)
    }

    pub fn check_associative(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let ab = self.mul(a, b);
                for c in 0..n as u32 {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidTable(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        Self::from_table_unchecked("1", 1, vec![0]).expect("trivial group")
    }

    fn compute_order(&self, x: u32) -> u32 {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn id(&self) -> GroupId {
        self.id
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `x a x⁻¹`
    #[inline]
    pub fn conj(&self, x: u32, a: u32) -> u32 {
        self.mul(self.mul(x, a), self.inv(x))
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        let k = k % self.elem_order(a) as u64;
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    #[inline]
    pub fn elem_order(&self, a: u32) -> u32 {
        self.elem_orders[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order as u32;
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.elem_orders.iter().any(|&o| o as usize == self.order)
    }

    pub fn exponent(&self) -> u64 {
        self.elem_orders.iter().fold(1u64, |acc, &o| acc.lcm(&(o as u64)))
    }

    /// Histogram of element orders, sorted by order.
    pub fn order_profile(&self) -> Vec<(u32, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for &o in &self.elem_orders {
            *counts.entry(o).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }

    pub fn centralizer_size(&self, a: u32) -> usize {
        self.elements().filter(|&x| self.mul(a, x) == self.mul(x, a)).count()
    }

    pub fn center(&self) -> Subgroup {
        let elems: Vec<u32> =
            self.elements().filter(|&z| self.elements().all(|x| self.mul(z, x) == self.mul(x, z))).collect();
        Subgroup::from_sorted_unchecked(self.order, elems)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted_unchecked(self.order, self.elements().collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted_unchecked(self.order, vec![0])
    }

    /// Prime divisors of the order, ascending.
    pub fn prime_divisors(&self) -> Vec<u64> {
        prime_factors(self.order as u64)
    }

    pub fn is_p_group(&self) -> Option<u64> {
        match self.prime_divisors().as_slice() {
            [p] => Some(*p),
            _ => None,
        }
    }

    /// Elements whose order is a power of `p`.
    pub fn p_elements(&self, p: u64) -> Vec<u32> {
        self.elements().filter(|&x| is_power_of(self.elem_order(x) as u64, p)).collect()
    }

    /// A finite group is nilpotent iff each Sylow subgroup is normal, i.e.
    /// for every prime the `p`-elements form a subgroup of full `p`-part order.
    pub fn is_nilpotent(&self) -> bool {
        let n = self.order as u64;
        self.prime_divisors().into_iter().all(|p| {
            let part = p_part(n, p);
            self.p_elements(p).len() as u64 == part
        })
    }

    /// The unique Sylow `p`-subgroup of a nilpotent group.
    pub fn normal_sylow(&self, p: u64) -> Option<Subgroup> {
        let elems = self.p_elements(p);
        if elems.len() as u64 == p_part(self.order as u64, p) {
            Some(Subgroup::from_sorted_unchecked(self.order, elems))
        } else {
            None
        }
    }

    /// Direct product with the default order cap.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        direct_product(self, other, &Budget::default())
    }
}

/// `G × H` with `(g, h)` encoded as `g·|H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup, budget: &Budget) -> Result<FiniteGroup> {
    let n = g.order * h.order;
    if n > budget.max_group_order {
        return Err(Error::Precondition(format!("direct product order {n} exceeds cap {}", budget.max_group_order)));
    }
    let m = h.order;
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        let (g1, h1) = ((x / m) as u32, (x % m) as u32);
        for y in 0..n {
            let (g2, h2) = ((y / m) as u32, (y % m) as u32);
            table.push(g.mul(g1, g2) * m as u32 + h.mul(h1, h2));
        }
    }
    FiniteGroup::from_table_unchecked(product_name(g.name(), h.name()), n, table)
}

fn product_name(a: &str, b: &str) -> String {
    if a == "1" {
        return b.to_string();
    }
    if b == "1" {
        return a.to_string();
    }
    format!("{a}x{b}")
}

/// Encoding helper for elements of a direct product.
#[derive(Clone, Copy, Debug)]
pub struct PairCoder {
    pub right_order: u32,
}

impl PairCoder {
    pub fn new(right: &FiniteGroup) -> Self {
        PairCoder { right_order: right.order() as u32 }
    }

    #[inline]
    pub fn pair(&self, g: u32, h: u32) -> u32 {
        g * self.right_order + h
    }

    #[inline]
    pub fn split(&self, x: u32) -> (u32, u32) {
        (x / self.right_order, x % self.right_order)
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            ps.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut part = 1;
    while n.is_multiple_of(p) {
        n /= p;
        part *= p;
    }
    part
}

pub fn is_power_of(mut n: u64, p: u64) -> bool {
    while n > 1 {
        if !n.is_multiple_of(p) {
            return false;
        }
        n /= p;
    }
    true
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).into_iter().fold(n, |acc, p| acc / p * (p - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(6), 2);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table("x", 2, vec![0, 1, 1, 1]).is_err());
        assert!(FiniteGroup::from_table("x", 2, vec![1, 0, 0, 1]).is_err());
        // Latin square with identity but not associative (order 5 loop).
        let loop5 = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(FiniteGroup::from_table("loop", 5, loop5).is_err());
    }

    #[test]
    fn product_encoding() {
        let c2 = build_group(&GroupSpec::Cyclic(2)).unwrap();
        let c3 = build_group(&GroupSpec::Cyclic(3)).unwrap();
        let p = direct_product(&c2, &c3, &Budget::default()).unwrap();
        let coder = PairCoder::new(&c3);
        assert_eq!(p.order(), 6);
        for x in p.elements() {
            let (a, b) = coder.split(x);
            assert_eq!(coder.pair(a, b), x);
        }
        assert!(p.is_cyclic());
    }

    #[test]
    fn product_cap() {
        let c64 = build_group(&GroupSpec::Cyclic(64)).unwrap();
        let budget = Budget { max_group_order: 1000, ..Budget::default() };
        assert!(direct_product(&c64, &c64, &budget).is_err());
    }
}
