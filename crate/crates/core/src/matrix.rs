//! Dense matrices and vectors over arbitrary-precision integers.
//!
//! Everything here is exact; there is no floating point. Rank is computed
//! by fraction-free (Bareiss) elimination so intermediate entries stay
//! integral.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul};

pub type IntVector = Vec<BigInt>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn trace(&self) -> BigInt {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| &self[(i, i)]).sum()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] += t;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Row vector times matrix: v * M.
    pub fn vec_mul(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let m = &self[(i, j)];
                if !m.is_zero() {
                    out[j] += vi * m;
                }
            }
        }
        out
    }

    /// Matrix times column vector: M * v.
    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![BigInt::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = BigInt::zero();
            for (j, vj) in v.iter().enumerate() {
                let m = &self[(i, j)];
                if !m.is_zero() && !vj.is_zero() {
                    acc += m * vj;
                }
            }
            out[i] = acc;
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        assert!(self.is_square());
        let mut result = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Kronecker product; (A (x) B) has block (i,j) equal to A[i][j] * B.
    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        let b = &other[(p, q)];
                        if !b.is_zero() {
                            out[(i * other.rows + p, j * other.cols + q)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        out.copy_block(0, 0, self);
        out.copy_block(self.rows, self.cols, other);
        out
    }

    /// Assemble a 2x2 block matrix [[a, b], [c, d]].
    pub fn from_blocks(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> IntMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut out = IntMatrix::zeros(a.rows + c.rows, a.cols + b.cols);
        out.copy_block(0, 0, a);
        out.copy_block(0, a.cols, b);
        out.copy_block(a.rows, 0, c);
        out.copy_block(a.rows, a.cols, d);
        out
    }

    fn copy_block(&mut self, r0: usize, c0: usize, src: &IntMatrix) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                self[(r0 + i, c0 + j)] = src[(i, j)].clone();
            }
        }
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        rank_of_rows(&mut m, self.cols)
    }

    /// Canonical byte encoding, used for exact dedup keyed on entries.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.rows as u64).to_le_bytes());
        out.extend_from_slice(&(self.cols as u64).to_le_bytes());
        for e in &self.data {
            let bytes = e.to_signed_bytes_le();
            out.extend_from_slice(&(bytes.len() as u64).to_le_bytes());
            out.extend_from_slice(&bytes);
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        IntMatrix::mul(self, rhs)
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        IntMatrix::add(self, rhs)
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn scale_vector(v: &[BigInt], c: &BigInt) -> IntVector {
    v.iter().map(|x| x * c).collect()
}

/// Kronecker product of two row vectors.
pub fn kron_vector(a: &[BigInt], b: &[BigInt]) -> IntVector {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// In-place fraction-free row reduction; returns the rank.
fn rank_of_rows(m: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let t = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = t / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Incrementally maintained rational span of integer row vectors.
///
/// Basis rows are kept in echelon form with primitive content so entry
/// growth stays under control during breadth-first spanning searches.
pub struct RowSpan {
    cols: usize,
    rows: Vec<(usize, Vec<BigInt>)>, // (pivot column, row), pivots strictly increasing
}

impl RowSpan {
    pub fn new(cols: usize) -> Self {
        RowSpan {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `v` if it enlarges the span; returns whether it did.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let a = v[*pivot].clone();
                let b = row[*pivot].clone();
                for c in 0..self.cols {
                    v[c] = &v[c] * &b - &row[c] * &a;
                }
            }
        }
        let Some(pivot) = v.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        normalize_primitive(&mut v);
        let at = self
            .rows
            .iter()
            .position(|(p, _)| *p > pivot)
            .unwrap_or(self.rows.len());
        self.rows.insert(at, (pivot, v));
        true
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut probe = RowSpan {
            cols: self.cols,
            rows: self.rows.clone(),
        };
        !probe.insert(v)
    }
}

fn normalize_primitive(v: &mut [BigInt]) {
    use num_integer::Integer;
    let mut g = BigInt::zero();
    for e in v.iter() {
        g = g.gcd(e);
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for e in v.iter_mut() {
        *e = &*e / &g;
    }
}
