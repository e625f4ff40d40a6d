use super::{FieldSpec, IncrementalSpan, Scalar};
use crate::error::{Error, Result};

/// A dense matrix over a [`FieldSpec`], row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Mismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Matrix { field, rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(field, rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Mismatch("matrix-vector dimension".into()));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Mismatch("matrix product dimension".into()));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j).clone();
                        out.set(i, j, &cur + &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    fn row_span(&self) -> IncrementalSpan {
        let mut span = IncrementalSpan::new(self.field, self.cols);
        for r in 0..self.rows {
            span.add(self.row(r)).expect("row length matches");
        }
        span
    }

    pub fn rank(&self) -> usize {
        self.row_span().rank()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column.
    pub fn null_space(&self) -> Vec<Vec<Scalar>> {
        let rows = self.row_span().echelon_rows();
        let mut is_pivot = vec![false; self.cols];
        for (p, _) in &rows {
            is_pivot[*p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = vec![self.field.zero(); self.cols];
                x[f] = self.field.one();
                for (p, r) in &rows {
                    x[*p] = -&r[f];
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_and_zero() {
        let q = FieldSpec::rationals();
        assert_eq!(Matrix::identity(q, 4).rank(), 4);
        let z = Matrix::zeros(q, 3, 5);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.null_space().len(), 5);
    }

    #[test]
    fn null_space_annihilates() {
        let q = FieldSpec::rationals();
        let m = Matrix::from_i64(q, &[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, -1, 2]]).unwrap();
        let ns = m.null_space();
        assert_eq!(m.rank() + ns.len(), 4);
        for v in ns {
            assert!(m.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn modular_rank_never_exceeds_rational_rank() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let (r, c) = (rng.gen_range(1..6), rng.gen_range(1..6));
            let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-3..4)).collect()).collect();
            let rq = Matrix::from_i64(FieldSpec::rationals(), &rows).unwrap().rank();
            for p in [2, 3, 5] {
                let f = FieldSpec::new(p).unwrap();
                let m = Matrix::from_i64(f, &rows).unwrap();
                assert!(m.rank() <= rq);
                let ns = m.null_space();
                assert_eq!(m.rank() + ns.len(), c);
                for v in ns {
                    assert!(m.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
                }
            }
            // a large prime agrees with ℚ for at least one of three choices
            let agree = [1_000_003u64, 998_244_353, 2_147_483_647]
                .iter()
                .any(|&p| Matrix::from_i64(FieldSpec::new(p).unwrap(), &rows).unwrap().rank() == rq);
            assert!(agree);
        }
    }
}
