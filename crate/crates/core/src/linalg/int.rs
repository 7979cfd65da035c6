use std::fmt;

use super::LinalgError;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat{:?}", self.to_rows())
    }
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMat { rows, cols, data })
    }

    /// Builds from rows; an empty slice gives a `0x0` matrix.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diag(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, c: i64) -> Self {
        let mut m = Self::identity(n);
        m.data.iter_mut().for_each(|x| *x *= c);
        m
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

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Result<Self, LinalgError> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::DimensionMismatch("column length".into()));
        }
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let t = self
                        .get(i, k)
                        .checked_mul(other.get(k, j))
                        .ok_or(LinalgError::Overflow)?;
                    acc = acc.checked_add(t).ok_or(LinalgError::Overflow)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch("vector length".into()));
        }
        (0..self.rows)
            .map(|i| {
                (0..self.cols).try_fold(0i64, |acc, k| {
                    self.get(i, k)
                        .checked_mul(v[k])
                        .and_then(|t| acc.checked_add(t))
                        .ok_or(LinalgError::Overflow)
                })
            })
            .collect()
    }

    fn zip_with(
        &self,
        other: &IntMat,
        f: impl Fn(i64, i64) -> Option<i64>,
    ) -> Result<IntMat, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch("shape".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b).ok_or(LinalgError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(IntMat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &IntMat) -> Result<IntMat, LinalgError> {
        self.zip_with(other, i64::checked_add)
    }

    pub fn sub(&self, other: &IntMat) -> Result<IntMat, LinalgError> {
        self.zip_with(other, i64::checked_sub)
    }

    pub fn pow(&self, e: u32) -> Result<IntMat, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "power of a non-square matrix".into(),
            ));
        }
        let mut acc = IntMat::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == IntMat::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Exact determinant (Bareiss elimination in 128-bit arithmetic).
    pub fn det(&self) -> Result<i128, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "determinant of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(r) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                    return Ok(0);
                };
                for j in 0..n {
                    a.swap(k * n + j, r * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let lhs = a[i * n + j]
                        .checked_mul(a[k * n + k])
                        .ok_or(LinalgError::Overflow)?;
                    let rhs = a[i * n + k]
                        .checked_mul(a[k * n + j])
                        .ok_or(LinalgError::Overflow)?;
                    a[i * n + j] = (lhs - rhs) / prev;
                }
            }
            prev = a[k * n + k];
        }
        Ok(sign * a[n * n - 1])
    }

    /// Smallest `m` in `1..=max_order` with `self^m = I`.
    pub fn order(&self, max_order: u32) -> Option<u32> {
        if !self.is_square() {
            return None;
        }
        let mut acc = self.clone();
        for m in 1..=max_order {
            if acc.is_identity() {
                return Some(m);
            }
            acc = acc.mul(self).ok()?;
        }
        None
    }
}
