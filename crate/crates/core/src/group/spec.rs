use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use super::{direct_product, is_prime, FiniteGroup};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Catalog syntax for the groups the engine knows how to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(u64),
    /// Direct product of cyclic groups of the listed orders.
    AbelianProduct(Vec<u64>),
    /// Dihedral group, parameterized by its order.
    Dihedral(u64),
    Symmetric(u64),
    Alternating(u64),
    /// Heisenberg group of order `p³` and exponent `p`, `p` odd.
    Extraspecial(u64),
    /// `⟨a, b | a^{p^n} = b^{p^n} = 1, bab⁻¹ = a^{1+p^{n-1}}⟩`.
    Modular(u64, u32),
    Product(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    pub fn validate(&self) -> Result<()> {
        use GroupSpec::*;
        let bad = |m: String| Err(Error::InvalidSpec(m));
        match self {
            Cyclic(0) => bad("C0 is not a group".into()),
            AbelianProduct(v) if v.is_empty() || v.contains(&0) => bad("abelian product needs positive factors".into()),
            Dihedral(n) if *n < 2 || n % 2 != 0 => bad(format!("D{n}: order must be even")),
            Symmetric(n) if !(1..=4).contains(n) => bad(format!("S{n}: only n ≤ 4 supported")),
            Alternating(n) if !(1..=5).contains(n) => bad(format!("A{n}: only n ≤ 5 supported")),
            Extraspecial(p) if !is_prime(*p) || *p == 2 => {
                bad(format!("X({}): needs an odd prime p", p.saturating_pow(3)))
            }
            Modular(p, _) if !is_prime(*p) => bad(format!("M({p},_): p must be prime")),
            Modular(p, n) if *n < 2 => bad(format!("M({p},{n}): requires n ≥ 2")),
            Product(a, b) => {
                a.validate()?;
                b.validate()
            }
            _ => Ok(()),
        }
    }

    fn is_abelian_factor(&self) -> bool {
        matches!(self, GroupSpec::Cyclic(_) | GroupSpec::AbelianProduct(_))
    }

    fn cyclic_orders(&self) -> Vec<u64> {
        match self {
            GroupSpec::Cyclic(n) => vec![*n],
            GroupSpec::AbelianProduct(v) => v.clone(),
            _ => unreachable!(),
        }
    }
}

/// Builds and validates the group described by `spec`.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    build_group_with(spec, &Budget::default())
}

pub fn build_group_with(spec: &GroupSpec, budget: &Budget) -> Result<FiniteGroup> {
    spec.validate()?;
    let name = spec.to_string();
    let g = match spec {
        GroupSpec::Cyclic(n) => cyclic(*n)?,
        GroupSpec::AbelianProduct(v) => {
            let mut g = FiniteGroup::trivial();
            for &n in v {
                g = direct_product(&g, &cyclic(n)?, budget)?;
            }
            g
        }
        GroupSpec::Dihedral(order) => dihedral(order / 2)?,
        GroupSpec::Symmetric(n) => permutation_group(*n as usize, false)?,
        GroupSpec::Alternating(n) => permutation_group(*n as usize, true)?,
        GroupSpec::Extraspecial(p) => heisenberg(*p)?,
        GroupSpec::Modular(p, n) => modular(*p, *n)?,
        GroupSpec::Product(a, b) => {
            direct_product(&build_group_with(a, budget)?, &build_group_with(b, budget)?, budget)?
        }
    };
    Ok(g.with_name(name))
}

fn cyclic(n: u64) -> Result<FiniteGroup> {
    let n = n as usize;
    let table = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
    FiniteGroup::from_table(format!("C{n}"), n, table)
}

/// `r^i s^j` encoded as `i + n·j`.
fn dihedral(n: u64) -> Result<FiniteGroup> {
    let n = n as usize;
    let decode = |x: usize| (x % n, x / n);
    let mut table = Vec::with_capacity(4 * n * n);
    for x in 0..2 * n {
        let (i1, j1) = decode(x);
        for y in 0..2 * n {
            let (i2, j2) = decode(y);
            let i = if j1 == 0 { i1 + i2 } else { i1 + n - i2 } % n;
            table.push((i + n * ((j1 + j2) % 2)) as u32);
        }
    }
    FiniteGroup::from_table(format!("D{}", 2 * n), 2 * n, table)
}

/// Permutations of `0..n` in lexicographic order, composed as `(στ)(x) = σ(τ(x))`.
fn permutation_group(n: usize, even_only: bool) -> Result<FiniteGroup> {
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).filter(|p| !even_only || parity(p) == 0).collect();
    let index: std::collections::HashMap<&[usize], u32> =
        perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i as u32)).collect();
    let k = perms.len();
    let mut table = Vec::with_capacity(k * k);
    let mut buf = vec![0; n];
    for s in &perms {
        for t in &perms {
            for x in 0..n {
                buf[x] = s[t[x]];
            }
            table.push(index[buf.as_slice()]);
        }
    }
    FiniteGroup::from_table("perm", k, table)
}

fn parity(p: &[usize]) -> usize {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2
}

/// Upper unitriangular 3×3 matrices over 𝔽_p as triples `(a, b, c)` with
/// `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`, encoded `a + p·b + p²·c`.
fn heisenberg(p: u64) -> Result<FiniteGroup> {
    let p = p as usize;
    let n = p * p * p;
    let decode = |x: usize| (x % p, (x / p) % p, x / (p * p));
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        let (a1, b1, c1) = decode(x);
        for y in 0..n {
            let (a2, b2, c2) = decode(y);
            let a = (a1 + a2) % p;
            let b = (b1 + b2) % p;
            let c = (c1 + c2 + a1 * b2) % p;
            table.push((a + p * b + p * p * c) as u32);
        }
    }
    FiniteGroup::from_table(format!("X({n})"), n, table)
}

/// `C_{p^n} ⋊ C_{p^n}` with `b a b⁻¹ = a^r`, `r = 1 + p^{n-1}`; the element
/// `a^i b^j` is encoded `i + p^n·j`, and
/// `(a^{i₁} b^{j₁})(a^{i₂} b^{j₂}) = a^{i₁ + r^{j₁} i₂} b^{j₁+j₂}`.
fn modular(p: u64, n: u32) -> Result<FiniteGroup> {
    let m = p.pow(n) as usize;
    let r = 1 + p.pow(n - 1) as usize;
    let mut rpow = vec![1usize; m];
    for j in 1..m {
        rpow[j] = rpow[j - 1] * r % m;
    }
    let order = m * m;
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (i1, j1) = (x % m, x / m);
        for y in 0..order {
            let (i2, j2) = (y % m, y / m);
            let i = (i1 + rpow[j1] * i2) % m;
            let j = (j1 + j2) % m;
            table.push((i + m * j) as u32);
        }
    }
    FiniteGroup::from_table(format!("M({p},{n})"), order, table)
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(1) => write!(f, "1"),
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::AbelianProduct(v) => {
                let parts = v
                    .iter()
                    .chunk_by(|&&n| n)
                    .into_iter()
                    .map(|(n, run)| match run.count() {
                        1 => format!("C{n}"),
                        k => format!("C{n}^{k}"),
                    })
                    .join("x");
                write!(f, "{parts}")
            }
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Alternating(n) => write!(f, "A{n}"),
            GroupSpec::Extraspecial(p) => write!(f, "X({})", p * p * p),
            GroupSpec::Modular(p, n) => write!(f, "M({p},{n})"),
            GroupSpec::Product(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Factors are joined by `x`; runs of adjacent cyclic factors collapse
    /// into one abelian product.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty group spec".into()));
        }
        let factors: Vec<GroupSpec> = split_factors(s)?.into_iter().map(parse_factor).collect::<Result<_>>()?;
        let mut merged: Vec<GroupSpec> = Vec::new();
        for f in factors {
            match merged.last_mut() {
                Some(last) if last.is_abelian_factor() && f.is_abelian_factor() => {
                    let mut orders = last.cyclic_orders();
                    orders.extend(f.cyclic_orders());
                    *last = GroupSpec::AbelianProduct(orders);
                }
                _ => merged.push(f),
            }
        }
        let spec = merged
            .into_iter()
            .reduce(|a, b| GroupSpec::Product(Box::new(a), Box::new(b)))
            .expect("at least one factor");
        spec.validate()?;
        Ok(spec)
    }
}

/// Splits on `x` outside parentheses.
fn split_factors(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            'x' | '×' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
        }
    }
    parts.push(&s[start..]);
    if parts.iter().any(|p| p.trim().is_empty()) {
        return Err(Error::Parse(format!("empty factor in {s:?}")));
    }
    Ok(parts)
}

fn parse_num<T: FromStr>(s: &str, ctx: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("expected a number in {ctx:?}, found {s:?}")))
}

fn parse_factor(f: &str) -> Result<GroupSpec> {
    let f = f.trim();
    if f == "1" {
        return Ok(GroupSpec::Cyclic(1));
    }
    let (head, rest) = f.split_at(1);
    match head {
        "C" => match rest.split_once('^') {
            Some((n, k)) => {
                let n: u64 = parse_num(n, f)?;
                let k: usize = parse_num(k, f)?;
                if k == 0 {
                    return Err(Error::Parse(format!("zero exponent in {f:?}")));
                }
                Ok(if k == 1 { GroupSpec::Cyclic(n) } else { GroupSpec::AbelianProduct(vec![n; k]) })
            }
            None => Ok(GroupSpec::Cyclic(parse_num(rest, f)?)),
        },
        "D" => Ok(GroupSpec::Dihedral(parse_num(rest, f)?)),
        "S" => Ok(GroupSpec::Symmetric(parse_num(rest, f)?)),
        "A" => Ok(GroupSpec::Alternating(parse_num(rest, f)?)),
        "X" => {
            let inner = parenthesized(rest, f)?;
            let order: u64 = parse_num(inner, f)?;
            let p = (1..=order).find(|p| p * p * p >= order).unwrap_or(0);
            if p * p * p != order {
                return Err(Error::Parse(format!("{f:?}: order must be a prime cube")));
            }
            Ok(GroupSpec::Extraspecial(p))
        }
        "M" => {
            let inner = parenthesized(rest, f)?;
            let (p, n) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("{f:?}: expected M(p,n)")))?;
            Ok(GroupSpec::Modular(parse_num(p, f)?, parse_num(n, f)?))
        }
        _ => Err(Error::Parse(format!("unknown group factor {f:?}"))),
    }
}

fn parenthesized<'a>(rest: &'a str, f: &str) -> Result<&'a str> {
    rest.strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("{f:?}: expected parentheses")))
}
