//! Dense exact matrices over a [`RingSpec`].

use std::fmt;

use num_traits::{One, Zero};

use super::ring::{Int, RingSpec};
use crate::error::{Error, Result};

/// Row-major matrix with entries kept in canonical form for its ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn new(ring: &RingSpec, rows: usize, cols: usize, data: Vec<Int>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        let data = data.into_iter().map(|a| ring.reduce(a)).collect();
        Ok(IntMatrix { ring: ring.clone(), rows, cols, data })
    }

    pub fn zeros(ring: &RingSpec, rows: usize, cols: usize) -> Self {
        IntMatrix { ring: ring.clone(), rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(ring: &RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    /// Build from small integer rows. All rows must have `cols` entries.
    pub fn from_i64(ring: &RingSpec, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r.iter().map(|&a| Int::from(a)));
        }
        Self::new(ring, rows.len(), cols, data)
    }

    /// Build from rows of ring elements; `cols` fixes the width when there are no rows.
    pub fn from_rows(ring: &RingSpec, cols: usize, rows: Vec<Vec<Int>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r);
        }
        Self::new(ring, n, cols, data)
    }

    pub fn row_vector(ring: &RingSpec, v: Vec<Int>) -> Self {
        let n = v.len();
        Self::new(ring, 1, n, v).expect("length matches")
    }

    pub fn diagonal(ring: &RingSpec, rows: usize, cols: usize, diag: &[Int]) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.data[i * cols + i] = ring.reduce(d.clone());
        }
        m
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Int] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Int) {
        self.data[i * self.cols + j] = self.ring.reduce(value);
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_list(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.name(), other.ring.name()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = vec![Int::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Self::new(&self.ring, self.rows, other.cols, out)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.rows, "vector length must match matrix rows");
        let mut out = vec![Int::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(k, j);
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out.into_iter().map(|a| self.ring.reduce(a)).collect()
    }

    /// Matrix times column vector.
    pub fn apply_column(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols, "vector length must match matrix columns");
        (0..self.rows)
            .map(|i| {
                let s: Int = self.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
                self.ring.reduce(s)
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Int, &Int) -> Int) -> Result<Self> {
        self.check_ring(other)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", self.shape(), other.shape())));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Self::new(&self.ring, self.rows, self.cols, data)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.scale(&Int::from(-1))
    }

    pub fn scale(&self, c: &Int) -> Self {
        let data = self.data.iter().map(|a| a * c).collect();
        Self::new(&self.ring, self.rows, self.cols, data).expect("same shape")
    }

    /// Stack rows of `self` above rows of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!("vstack of widths {} and {}", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix { ring: self.ring.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Place columns of `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!("hstack of heights {} and {}", self.rows, other.rows)));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        Ok(IntMatrix { ring: self.ring.clone(), rows: self.rows, cols, data })
    }

    pub fn block_diagonal(ring: &RingSpec, blocks: &[&IntMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[(r0 + i) * cols + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Kronecker product; row `(i, k)` is indexed `i * other.rows + k`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![Int::zero(); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            data[(i * other.rows + k) * cols + j * other.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        Self::new(&self.ring, rows, cols, data)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        IntMatrix { ring: self.ring.clone(), rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix { ring: self.ring.clone(), rows: self.rows, cols: idx.len(), data }
    }

    /// Reinterpret the entries as a `rows x cols` matrix (same row-major order).
    pub fn reshape(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows * cols != self.data.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot reshape {} entries to {rows}x{cols}",
                self.data.len()
            )));
        }
        Ok(IntMatrix { ring: self.ring.clone(), rows, cols, data: self.data.clone() })
    }

    /// Determinant by fraction-free elimination over `Z`, then reduced.
    pub fn determinant(&self) -> Result<Int> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        // Bareiss over Z on canonical representatives.
        let mut a: Vec<Vec<Int>> = self.row_list();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(self.ring.reduce(sign * a[n - 1][n - 1].clone()))
    }

    // Elementary operations used by the normal form routines.

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// rows (k, i) <- (p*r_k + q*r_i, r*r_k + s*r_i)
    pub(crate) fn combine_rows(&mut self, k: usize, i: usize, t: &[Int; 4]) {
        for j in 0..self.cols {
            let x = self.data[k * self.cols + j].clone();
            let y = self.data[i * self.cols + j].clone();
            self.data[k * self.cols + j] = self.ring.reduce(&t[0] * &x + &t[1] * &y);
            self.data[i * self.cols + j] = self.ring.reduce(&t[2] * &x + &t[3] * &y);
        }
    }

    /// columns (k, i) <- (p*c_k + q*c_i, r*c_k + s*c_i)
    pub(crate) fn combine_columns(&mut self, k: usize, i: usize, t: &[Int; 4]) {
        for row in 0..self.rows {
            let x = self.data[row * self.cols + k].clone();
            let y = self.data[row * self.cols + i].clone();
            self.data[row * self.cols + k] = self.ring.reduce(&t[0] * &x + &t[1] * &y);
            self.data[row * self.cols + i] = self.ring.reduce(&t[2] * &x + &t[3] * &y);
        }
    }

    /// r_i <- r_i + c * r_k
    pub(crate) fn add_row_multiple(&mut self, i: usize, k: usize, c: &Int) {
        for j in 0..self.cols {
            let v = &self.data[i * self.cols + j] + c * &self.data[k * self.cols + j];
            self.data[i * self.cols + j] = self.ring.reduce(v);
        }
    }

    /// c_i <- c_i + c * c_k
    pub(crate) fn add_column_multiple(&mut self, i: usize, k: usize, c: &Int) {
        for row in 0..self.rows {
            let v = &self.data[row * self.cols + i] + c * &self.data[row * self.cols + k];
            self.data[row * self.cols + i] = self.ring.reduce(v);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: &Int) {
        for j in 0..self.cols {
            let v = &self.data[i * self.cols + j] * c;
            self.data[i * self.cols + j] = self.ring.reduce(v);
        }
    }

    pub(crate) fn scale_column(&mut self, j: usize, c: &Int) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + j] * c;
            self.data[i * self.cols + j] = self.ring.reduce(v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix[{}; {}x{}]{}", self.ring, self.rows, self.cols, self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
