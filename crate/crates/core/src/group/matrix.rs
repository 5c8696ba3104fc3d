use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from rows; all rows must share `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        IntegerMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        IntegerMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntegerMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * factor;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += factor * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * factor;
            self[(i, dst)] += v;
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }
}

impl Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(ToString::to_string).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = MatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom("matrix entries do not match rows/cols"));
        }
        let rows = repr
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|t| t.parse::<BigInt>().map_err(D::Error::custom))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut m = IntegerMatrix::from_rows(repr.cols, rows);
        m.rows = repr.rows;
        Ok(m)
    }
}
