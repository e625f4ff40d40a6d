use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Row arithmetic for the echelon kernel. Reduction always uses the
/// cross-multiplied update `w ← a·w − b·r`, which keeps integer rows integral
/// over ℚ and is ordinary elimination over 𝔽_p.
pub(crate) trait Arith: Clone + Send + Sync {
    type E: Clone + PartialEq + std::fmt::Debug + Send + Sync;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;
    /// `a·x − b·y`
    fn cross(&self, a: &Self::E, x: &Self::E, b: &Self::E, y: &Self::E) -> Self::E;
    fn neg(&self, x: &Self::E) -> Self::E;
    /// Scales `row` (and the attached `extra` entries) to its normal form:
    /// primitive with positive pivot over ℤ, unit pivot over 𝔽_p.
    fn normalize(&self, row: &mut [Self::E], extra: &mut [Self::E], pivot: Option<usize>);
    fn to_scalar(&self, num: &Self::E, den: &Self::E) -> Scalar;
}

#[derive(Clone)]
pub(crate) struct IntArith;

impl Arith for IntArith {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, x: &BigInt) -> bool {
        x.is_zero()
    }
    fn cross(&self, a: &BigInt, x: &BigInt, b: &BigInt, y: &BigInt) -> BigInt {
        if y.is_zero() || b.is_zero() {
            a * x
        } else if x.is_zero() {
            -(b * y)
        } else {
            a * x - b * y
        }
    }
    fn neg(&self, x: &BigInt) -> BigInt {
        -x
    }
    fn normalize(&self, row: &mut [BigInt], extra: &mut [BigInt], pivot: Option<usize>) {
        let mut g = BigInt::zero();
        for x in row.iter().chain(extra.iter()) {
            if !x.is_zero() {
                g = g.gcd(x);
                if g.is_one() {
                    break;
                }
            }
        }
        let flip = pivot.is_some_and(|p| row[p].is_negative());
        if g.is_zero() || (g.is_one() && !flip) {
            return;
        }
        let g = if flip { -g } else { g };
        for x in row.iter_mut().chain(extra.iter_mut()) {
            if !x.is_zero() {
                *x = &*x / &g;
            }
        }
    }
    fn to_scalar(&self, num: &BigInt, den: &BigInt) -> Scalar {
        FieldSpec::rationals().from_ratio(num, den).expect("nonzero denominator")
    }
}

#[derive(Clone)]
pub(crate) struct ModArith {
    pub p: u64,
}

impl ModArith {
    fn inv(&self, x: u64) -> u64 {
        super::scalar::mod_pow(x, self.p - 2, self.p)
    }
}

impl Arith for ModArith {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn cross(&self, a: &u64, x: &u64, b: &u64, y: &u64) -> u64 {
        let p = self.p;
        (a * x % p + p - b * y % p) % p
    }
    fn neg(&self, x: &u64) -> u64 {
        (self.p - x) % self.p
    }
    fn normalize(&self, row: &mut [u64], extra: &mut [u64], pivot: Option<usize>) {
        let Some(piv) = pivot else { return };
        let lead = row[piv];
        if lead == 1 || lead == 0 {
            return;
        }
        let s = self.inv(lead);
        for x in row.iter_mut().chain(extra.iter_mut()) {
            *x = *x * s % self.p;
        }
    }
    fn to_scalar(&self, num: &u64, den: &u64) -> Scalar {
        Scalar::Residue { value: num * self.inv(*den) % self.p, modulus: self.p }
    }
}

#[derive(Clone, Debug)]
struct Row<E> {
    pivot: usize,
    data: Vec<E>,
    /// `data = Σ combo[i] · generator[i]`, empty when provenance is off.
    combo: Vec<E>,
}

/// Reduced row echelon basis built one vector at a time.
#[derive(Clone)]
pub(crate) struct Echelon<A: Arith> {
    arith: A,
    dim: usize,
    rows: Vec<Row<A::E>>,
    /// `pivot_row[c]` is the row whose pivot is column `c`.
    pivot_row: Vec<Option<usize>>,
    provenance: bool,
    generators: usize,
}

/// Outcome of reducing a vector against the current rows.
struct Reduced<E> {
    residual: Vec<E>,
    /// `residual = scale·v − Σ minus_combo[i]·generator[i]`
    scale: E,
    minus_combo: Vec<E>,
}

impl<A: Arith> Echelon<A> {
    pub(crate) fn new(arith: A, dim: usize, provenance: bool) -> Self {
        Echelon { arith, dim, rows: Vec::new(), pivot_row: vec![None; dim], provenance, generators: 0 }
    }

    fn reduce(&self, v: Vec<A::E>, track: bool) -> Reduced<A::E> {
        let ar = &self.arith;
        let mut w = v;
        let mut scale = ar.one();
        let mut minus_combo = if track { vec![ar.zero(); self.generators] } else { Vec::new() };
        for col in 0..self.dim {
            if ar.is_zero(&w[col]) {
                continue;
            }
            let Some(ri) = self.pivot_row[col] else { continue };
            let r = &self.rows[ri];
            let a = r.data[col].clone();
            let b = w[col].clone();
            for (x, y) in w.iter_mut().zip(&r.data) {
                if !ar.is_zero(y) || !ar.is_zero(x) {
                    *x = ar.cross(&a, x, &b, y);
                }
            }
            scale = ar.cross(&a, &scale, &ar.zero(), &ar.zero());
            if track {
                // w = a·w − b·r  ⇒  minus_combo ← a·minus_combo + b·r.combo
                for (i, m) in minus_combo.iter_mut().enumerate() {
                    let rc = r.combo.get(i).cloned().unwrap_or_else(|| ar.zero());
                    *m = ar.cross(&a, m, &ar.neg(&b), &rc);
                }
            }
            let mut extra: Vec<A::E> = std::iter::once(scale.clone()).chain(minus_combo.iter().cloned()).collect();
            ar.normalize(&mut w, &mut extra, None);
            scale = extra[0].clone();
            for (m, e) in minus_combo.iter_mut().zip(extra.into_iter().skip(1)) {
                *m = e;
            }
        }
        Reduced { residual: w, scale, minus_combo }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn contains(&self, v: Vec<A::E>) -> bool {
        let red = self.reduce(v, false);
        red.residual.iter().all(|x| self.arith.is_zero(x))
    }

    /// Inserts `v`; returns whether it enlarged the span.
    pub(crate) fn insert(&mut self, v: Vec<A::E>) -> bool {
        let track = self.provenance;
        let red = self.reduce(v, track);
        let ar = self.arith.clone();
        let Some(piv) = red.residual.iter().position(|x| !ar.is_zero(x)) else {
            return false;
        };
        let gen_index = self.generators;
        self.generators += 1;
        let mut combo = Vec::new();
        if track {
            combo = red.minus_combo.iter().map(|m| ar.neg(m)).collect();
            combo.push(red.scale.clone());
        }
        let mut data = red.residual;
        ar.normalize(&mut data, &mut combo, Some(piv));

        // clear the new pivot column from existing rows
        for r in &mut self.rows {
            if ar.is_zero(&r.data[piv]) {
                continue;
            }
            let a = data[piv].clone();
            let b = r.data[piv].clone();
            for (x, y) in r.data.iter_mut().zip(&data) {
                if !ar.is_zero(y) || !ar.is_zero(x) {
                    *x = ar.cross(&a, x, &b, y);
                }
            }
            if track {
                r.combo.resize(gen_index + 1, ar.zero());
                for (x, y) in r.combo.iter_mut().zip(&combo) {
                    *x = ar.cross(&a, x, &b, y);
                }
            }
            let p = r.pivot;
            ar.normalize(&mut r.data, &mut r.combo, Some(p));
        }
        self.pivot_row[piv] = Some(self.rows.len());
        self.rows.push(Row { pivot: piv, data, combo });
        true
    }

    /// Coefficients `c` with `v = Σ c[i]·generator[i]`, or `None` if `v` is
    /// outside the span.
    pub(crate) fn solve(&self, v: Vec<A::E>) -> Option<Vec<Scalar>> {
        assert!(self.provenance, "certificates need provenance tracking");
        let red = self.reduce(v, true);
        if red.residual.iter().any(|x| !self.arith.is_zero(x)) {
            return None;
        }
        Some(red.minus_combo.iter().map(|m| self.arith.to_scalar(m, &red.scale)).collect())
    }

    /// Rows normalized to a unit pivot, sorted by pivot column.
    pub(crate) fn unit_rows(&self) -> Vec<(usize, Vec<Scalar>)> {
        let mut out: Vec<(usize, Vec<Scalar>)> = self
            .rows
            .iter()
            .map(|r| {
                let lead = &r.data[r.pivot];
                (r.pivot, r.data.iter().map(|x| self.arith.to_scalar(x, lead)).collect())
            })
            .collect();
        out.sort_by_key(|(p, _)| *p);
        out
    }
}

/// The two coefficient domains behind [`IncrementalSpan`].
#[derive(Clone)]
enum Kernel {
    Rational(Echelon<IntArith>),
    Modular(Echelon<ModArith>),
}

/// A growing subspace of `field^dim`, kept in reduced row echelon form.
///
/// With provenance on, every stored row remembers how it was built from the
/// accepted input vectors, so membership can be certified by coefficients.
#[derive(Clone)]
pub struct IncrementalSpan {
    field: FieldSpec,
    dim: usize,
    kernel: Kernel,
    /// For each accepted generator: its insertion index and, over ℚ, the
    /// integer it was scaled by to clear denominators.
    accepted: Vec<(usize, BigInt)>,
    inserted: usize,
}

impl IncrementalSpan {
    pub fn new(field: FieldSpec, dim: usize) -> Self {
        Self::build(field, dim, false)
    }

    pub fn with_provenance(field: FieldSpec, dim: usize) -> Self {
        Self::build(field, dim, true)
    }

    fn build(field: FieldSpec, dim: usize, provenance: bool) -> Self {
        let kernel = match field.characteristic() {
            0 => Kernel::Rational(Echelon::new(IntArith, dim, provenance)),
            p => Kernel::Modular(Echelon::new(ModArith { p }, dim, provenance)),
        };
        IncrementalSpan { field, dim, kernel, accepted: Vec::new(), inserted: 0 }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        match &self.kernel {
            Kernel::Rational(e) => e.rank(),
            Kernel::Modular(e) => e.rank(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim
    }

    /// Number of vectors offered so far, accepted or not.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::Mismatch(format!("vector of length {len} in a span of dimension {}", self.dim)));
        }
        Ok(())
    }

    fn check_field(&self, v: &[Scalar]) -> Result<()> {
        if v.iter().any(|x| x.field() != self.field) {
            return Err(Error::Mismatch(format!("vector entries not in {}", self.field)));
        }
        Ok(())
    }

    /// Integer image of a rational vector together with the scale used.
    fn to_integers(v: &[Scalar]) -> (Vec<BigInt>, BigInt) {
        let den = v.iter().fold(BigInt::one(), |acc, x| {
            let (_, d) = x.as_ratio();
            acc.lcm(&d)
        });
        let ints = v
            .iter()
            .map(|x| {
                let (n, d) = x.as_ratio();
                n * (&den / d)
            })
            .collect();
        (ints, den)
    }

    fn to_residues(v: &[Scalar]) -> Vec<u64> {
        v.iter()
            .map(|x| match x {
                Scalar::Residue { value, .. } => *value,
                Scalar::Rational(_) => unreachable!("field checked"),
            })
            .collect()
    }

    /// Adds `v`, reporting whether the rank went up.
    pub fn add(&mut self, v: &[Scalar]) -> Result<bool> {
        self.check_dim(v.len())?;
        self.check_field(v)?;
        let index = self.inserted;
        self.inserted += 1;
        let (new, scale) = match &mut self.kernel {
            Kernel::Rational(e) => {
                let (ints, den) = Self::to_integers(v);
                (e.insert(ints), den)
            }
            Kernel::Modular(e) => (e.insert(Self::to_residues(v)), BigInt::one()),
        };
        if new {
            self.accepted.push((index, scale));
        }
        Ok(new)
    }

    /// Adds a sparse integer vector, the common case for biset products.
    pub fn add_sparse_integers(&mut self, v: &[(usize, i64)]) -> Result<bool> {
        if let Some(&(i, _)) = v.iter().find(|(i, _)| *i >= self.dim) {
            return Err(Error::Mismatch(format!("index {i} out of dimension {}", self.dim)));
        }
        let index = self.inserted;
        self.inserted += 1;
        let new = match &mut self.kernel {
            Kernel::Rational(e) => {
                let mut dense = vec![BigInt::zero(); self.dim];
                for &(i, c) in v {
                    dense[i] += c;
                }
                e.insert(dense)
            }
            Kernel::Modular(e) => {
                let p = e.arith.p as i64;
                let mut dense = vec![0u64; self.dim];
                for &(i, c) in v {
                    dense[i] = ((dense[i] as i64 + c.rem_euclid(p)) % p) as u64;
                }
                e.insert(dense)
            }
        };
        if new {
            self.accepted.push((index, BigInt::one()));
        }
        Ok(new)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        self.check_dim(v.len())?;
        self.check_field(v)?;
        Ok(match &self.kernel {
            Kernel::Rational(e) => e.contains(Self::to_integers(v).0),
            Kernel::Modular(e) => e.contains(Self::to_residues(v)),
        })
    }

    /// Coefficients, one per inserted vector (zero for rejected ones), that
    /// recombine the inserted vectors into `v` exactly.
    pub fn certificate(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_dim(v.len())?;
        self.check_field(v)?;
        let provenance = match &self.kernel {
            Kernel::Rational(e) => e.provenance,
            Kernel::Modular(e) => e.provenance,
        };
        if !provenance {
            return Err(Error::Precondition("span was built without provenance".into()));
        }
        let (coeffs, target_scale) = match &self.kernel {
            Kernel::Rational(e) => {
                let (ints, den) = Self::to_integers(v);
                (e.solve(ints), den)
            }
            Kernel::Modular(e) => (e.solve(Self::to_residues(v)), BigInt::one()),
        };
        let coeffs = coeffs.ok_or_else(|| Error::Precondition("vector is not in the span".into()))?;
        let mut out = vec![self.field.zero(); self.inserted];
        // target_scale·v = Σ c_i·(s_i·u_i)
        let inv_target = self.field.from_ratio(&BigInt::one(), &target_scale)?;
        for ((index, s), c) in self.accepted.iter().zip(coeffs) {
            let si = self.field.from_bigint(s);
            out[*index] = &(&c * &si) * &inv_target;
        }
        Ok(out)
    }

    /// Basis rows with unit pivots, ordered by pivot column.
    pub fn echelon_rows(&self) -> Vec<(usize, Vec<Scalar>)> {
        match &self.kernel {
            Kernel::Rational(e) => e.unit_rows(),
            Kernel::Modular(e) => e.unit_rows(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vecq(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| FieldSpec::rationals().from_i64(x)).collect()
    }

    #[test]
    fn zero_vector_is_not_new() {
        let mut s = IncrementalSpan::new(FieldSpec::rationals(), 3);
        assert!(!s.add(&vecq(&[0, 0, 0])).unwrap());
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn e1_then_sum() {
        let mut s = IncrementalSpan::with_provenance(FieldSpec::rationals(), 3);
        assert!(s.add(&vecq(&[1, 0, 0])).unwrap());
        assert!(s.add(&vecq(&[1, 1, 0])).unwrap());
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&vecq(&[0, 1, 0])).unwrap());
        assert!(!s.contains(&vecq(&[0, 0, 1])).unwrap());
        let c = s.certificate(&vecq(&[1, 1, 0])).unwrap();
        assert_eq!(c, vecq(&[0, 1]));
        assert!(s.certificate(&vecq(&[0, 0, 1])).is_err());
    }

    #[test]
    fn certificate_for_basis_sum() {
        let mut s = IncrementalSpan::with_provenance(FieldSpec::rationals(), 2);
        s.add(&vecq(&[1, 0])).unwrap();
        s.add(&vecq(&[0, 1])).unwrap();
        assert_eq!(s.certificate(&vecq(&[1, 1])).unwrap(), vecq(&[1, 1]));
    }

    #[test]
    fn pigeonhole() {
        for field in [FieldSpec::rationals(), FieldSpec::new(3).unwrap()] {
            let mut s = IncrementalSpan::new(field, 3);
            let mut accepted = 0;
            for v in [[1, 2, 0], [0, 1, 1], [1, 0, 2], [2, 2, 2]] {
                let v: Vec<Scalar> = v.iter().map(|&x| field.from_i64(x)).collect();
                if s.add(&v).unwrap() {
                    accepted += 1;
                }
            }
            assert!(accepted <= 3);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let mut s = IncrementalSpan::new(FieldSpec::rationals(), 3);
        assert!(s.add(&vecq(&[1, 0])).is_err());
        assert!(s.add_sparse_integers(&[(3, 1)]).is_err());
        let f5 = FieldSpec::new(5).unwrap();
        assert!(s.add(&[f5.one(), f5.one(), f5.one()]).is_err());
    }

    #[test]
    fn full_rank_contains_everything() {
        let f = FieldSpec::new(7).unwrap();
        let mut s = IncrementalSpan::with_provenance(f, 3);
        for v in [[1, 2, 3], [0, 1, 4], [5, 0, 1]] {
            s.add(&v.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>()).unwrap();
        }
        assert!(s.is_full());
        let target: Vec<Scalar> = [3, 6, 2].iter().map(|&x| f.from_i64(x)).collect();
        assert!(s.contains(&target).unwrap());
    }

    fn recombine(gens: &[Vec<Scalar>], coeffs: &[Scalar], field: FieldSpec) -> Vec<Scalar> {
        let dim = gens[0].len();
        let mut out = vec![field.zero(); dim];
        for (g, c) in gens.iter().zip(coeffs) {
            for (o, x) in out.iter_mut().zip(g) {
                *o = &*o + &(c * x);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn certificates_recombine(
            rows in prop::collection::vec(prop::collection::vec(-4i64..5, 5), 1..7),
            mix in prop::collection::vec(-3i64..4, 7),
            p in prop::sample::select(vec![0u64, 2, 3, 101]),
        ) {
            let field = FieldSpec::new(p).unwrap();
            let gens: Vec<Vec<Scalar>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect();
            let mut span = IncrementalSpan::with_provenance(field, 5);
            for g in &gens {
                span.add(g).unwrap();
            }
            let coeffs: Vec<Scalar> = mix.iter().take(gens.len()).map(|&x| field.from_i64(x)).collect();
            let target = recombine(&gens, &coeffs, field);
            prop_assert!(span.contains(&target).unwrap());
            let cert = span.certificate(&target).unwrap();
            prop_assert_eq!(recombine(&gens, &cert, field), target);
        }

        #[test]
        fn rational_vectors_with_denominators(
            nums in prop::collection::vec(prop::collection::vec(-9i64..10, 3), 1..4),
            dens in prop::collection::vec(1i64..6, 12),
        ) {
            let q = FieldSpec::rationals();
            let mut k = 0;
            let gens: Vec<Vec<Scalar>> = nums
                .iter()
                .map(|r| r.iter().map(|&x| { k += 1; q.from_ratio(&x.into(), &dens[k % 12].into()).unwrap() }).collect())
                .collect();
            let mut span = IncrementalSpan::with_provenance(q, 3);
            for g in &gens {
                span.add(g).unwrap();
            }
            let half = q.from_ratio(&1.into(), &2.into()).unwrap();
            let coeffs: Vec<Scalar> = (0..gens.len()).map(|i| if i % 2 == 0 { half.clone() } else { q.from_i64(-3) }).collect();
            let target = recombine(&gens, &coeffs, q);
            let cert = span.certificate(&target).unwrap();
            prop_assert_eq!(recombine(&gens, &cert, q), target);
        }
    }
}
