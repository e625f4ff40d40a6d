//! Exact rank of integer matrices, computed modulo a large prime.
//!
//! Reduction mod `P` gives `rank_ℚ ≥ r`, since a minor that is nonzero mod
//! `P` is nonzero over ℤ. The kernel mod `P` is then lifted to ℚ by rational
//! reconstruction and checked against the integer matrix; `n − r` checked
//! kernel vectors give `rank_ℚ ≤ r`. If lifting or checking fails, the rank
//! falls back to elimination over ℚ.

use num_integer::Integer;

use super::{FieldSpec, Matrix};

/// The Mersenne prime `2⁶¹ − 1`.
const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let y = (x as u64 & P) + (x >> 61) as u64;
    let y = (y & P) + (y >> 61);
    if y >= P {
        y - P
    } else {
        y
    }
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn pow(a: u64, mut e: u64) -> u64 {
    let (mut base, mut acc) = (a, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce(x: i64) -> u64 {
    x.rem_euclid(P as i64) as u64
}

/// `a ≡ n/d (mod P)` with `|n|, d < √(P/2)`, if such a fraction exists.
fn reconstruct(a: u64) -> Option<(i64, i64)> {
    let bound = ((P / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (P as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() >= bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some((n as i64, d as i64))
}

/// Reduced row echelon form mod `P`: pivot columns and the reduced rows.
fn rref(rows: &[Vec<i64>], cols: usize) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| reduce(x)).collect()).collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        let Some(p) = (top..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(top, p);
        let s = inv(m[top][c]);
        for x in m[top].iter_mut() {
            *x = mul(*x, s);
        }
        let pivot_row = m[top].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == top || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if y != 0 {
                    *x = sub(*x, mul(f, y));
                }
            }
        }
        pivots.push(c);
        top += 1;
        if top == m.len() {
            break;
        }
    }
    m.truncate(top);
    (pivots, m)
}

/// Integer kernel vector for free column `f`, or `None` if reconstruction fails.
fn lift_kernel_vector(pivots: &[usize], reduced: &[Vec<u64>], f: usize, cols: usize) -> Option<Vec<i128>> {
    let mut fracs = Vec::with_capacity(pivots.len());
    let mut den: i128 = 1;
    for row in reduced {
        let (n, d) = reconstruct(sub(0, row[f]))?;
        den = den.lcm(&(d as i128));
        if den > 1 << 62 {
            return None;
        }
        fracs.push((n as i128, d as i128));
    }
    let mut x = vec![0i128; cols];
    x[f] = den;
    for (&p, &(n, d)) in pivots.iter().zip(&fracs) {
        x[p] = n * (den / d);
    }
    Some(x)
}

fn annihilates(rows: &[Vec<i64>], x: &[i128]) -> bool {
    rows.iter().all(|r| {
        let mut acc: i128 = 0;
        for (&a, &b) in r.iter().zip(x) {
            if a == 0 || b == 0 {
                continue;
            }
            match (a as i128).checked_mul(b).and_then(|t| acc.checked_add(t)) {
                Some(v) => acc = v,
                None => return false,
            }
        }
        acc == 0
    })
}

/// Rank over ℚ of an integer matrix.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let (pivots, reduced) = rref(rows, cols);
    let r = pivots.len();
    if r == cols {
        return r;
    }
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let certified = (0..cols)
        .filter(|&f| !is_pivot[f])
        .all(|f| lift_kernel_vector(&pivots, &reduced, f, cols).is_some_and(|x| annihilates(rows, &x)));
    if certified {
        r
    } else {
        Matrix::from_i64(FieldSpec::rationals(), rows).expect("rectangular rows").rank()
    }
}
