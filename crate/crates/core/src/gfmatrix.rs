//! Dense matrices over GF(q).

use std::fmt;

use crate::error::{Error, Result};
use crate::gfield::{FieldElement, FieldSpec};

/// Largest number of columns (servers) a generator matrix may have; server
/// sets are stored as 64-bit masks with one spare bit for the extended code.
pub const MAX_COLUMNS: usize = 63;

/// Row-major dense matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix over GF({}) {}x{}",
            self.field.q(),
            self.rows,
            self.cols
        )?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.data[i * size + i] = FieldElement::ONE;
        }
        m
    }

    /// Builds a matrix from raw encoded rows, validating every entry.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::invalid(format!(
                    "row {} has {} entries, expected {cols}",
                    r + 1,
                    row.len()
                )));
            }
            for &v in row {
                data.push(field.elem(v)?);
            }
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_elements(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        data: Vec<FieldElement>,
    ) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid("matrix data length does not match shape"));
        }
        for &e in &data {
            field.elem(e.value())?;
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix whose columns are the given columns of `self`, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    /// `self` with `col` appended as the last column.
    pub fn append_column(&self, col: &[FieldElement]) -> Result<Matrix> {
        if col.len() != self.rows {
            return Err(Error::invalid(format!(
                "column of length {} does not fit {} rows",
                col.len(),
                self.rows
            )));
        }
        let mut out = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for (r, x) in col.iter().enumerate() {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            out.set(r, self.cols, self.field.elem(x.value())?);
        }
        Ok(out)
    }

    /// Reduced row echelon form with first-nonzero pivoting. Returns the
    /// reduced matrix and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, lead);
            let inv = f.inv_raw(m.get(lead, c));
            for j in 0..m.cols {
                let v = f.mul_raw(m.get(lead, j), inv);
                m.set(lead, j, v);
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.get(r, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub_raw(m.get(r, j), f.mul_raw(factor, m.get(lead, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (as rows) of `{ y : self · yᵀ = 0 }`.
    pub fn null_space(&self) -> Matrix {
        let f = &self.field;
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(f, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, FieldElement::ONE);
            for (r, &pc) in pivots.iter().enumerate() {
                basis.set(b, pc, f.neg_raw(rref.get(r, fc)));
            }
        }
        basis
    }

    /// Row vector times matrix: `Σ_r msg[r] · row_r`.
    pub fn left_mul(&self, msg: &[FieldElement]) -> Vec<FieldElement> {
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; self.cols];
        for (r, &m) in msg.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(self.row(r)) {
                *o = f.add_raw(*o, f.mul_raw(m, v));
            }
        }
        out
    }
}

/// The `dim × cols.len()` matrix with the given columns.
fn columns_matrix(field: &FieldSpec, dim: usize, cols: &[&[FieldElement]]) -> Matrix {
    let mut m = Matrix::zeros(field, dim, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            m.set(r, j, v);
        }
    }
    m
}

/// Whether `target` lies in the span of `cols`, decided by comparing
/// `rank(cols)` with `rank(cols ∪ {target})`.
pub fn in_span(
    field: &FieldSpec,
    target: &[FieldElement],
    cols: &[Vec<FieldElement>],
) -> Result<bool> {
    let dim = target.len();
    if let Some(bad) = cols.iter().find(|c| c.len() != dim) {
        return Err(Error::invalid(format!(
            "column of length {} does not match target length {dim}",
            bad.len()
        )));
    }
    for &v in target.iter().chain(cols.iter().flatten()) {
        field.elem(v.value())?;
    }
    let refs: Vec<&[FieldElement]> = cols.iter().map(Vec::as_slice).collect();
    let before = columns_matrix(field, dim, &refs).rank();
    let mut with_target = refs.clone();
    with_target.push(target);
    let after = columns_matrix(field, dim, &with_target).rank();
    Ok(before == after)
}

/// A `k × n` generator matrix of rank `k` with no all-zero column and `n > k ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenMatrix(Matrix);

impl GenMatrix {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let (k, n) = (matrix.rows(), matrix.cols());
        if k < 2 {
            return Err(Error::invariant(format!("k = {k} but k >= 2 is required")));
        }
        if n <= k {
            return Err(Error::invariant(format!(
                "n = {n} but n > k = {k} is required"
            )));
        }
        if n > MAX_COLUMNS {
            return Err(Error::invariant(format!(
                "n = {n} exceeds the supported maximum of {MAX_COLUMNS} servers"
            )));
        }
        if let Some(j) = (0..n).find(|&j| matrix.column(j).iter().all(|e| e.is_zero())) {
            return Err(Error::invariant(format!(
                "all-zero column at index {}",
                j + 1
            )));
        }
        let rank = matrix.rank();
        if rank < k {
            return Err(Error::invariant(format!("rank {rank} < k={k}")));
        }
        Ok(GenMatrix(matrix))
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        Self::new(Matrix::from_rows(field, rows)?)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn field(&self) -> &FieldSpec {
        self.0.field()
    }

    /// Number of objects (rows).
    pub fn k(&self) -> usize {
        self.0.rows()
    }

    /// Number of servers (columns).
    pub fn n(&self) -> usize {
        self.0.cols()
    }

    /// Column `j` (0-based), the symbol stored on server `j + 1`.
    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        self.0.column(j)
    }

    /// Standard basis vector `e_i` of length `k` (0-based `i`).
    pub fn unit(&self, i: usize) -> Vec<FieldElement> {
        let mut e = vec![FieldElement::ZERO; self.k()];
        e[i] = FieldElement::ONE;
        e
    }

    /// True iff the first `k` columns are the identity, in order.
    pub fn is_systematic(&self) -> bool {
        let k = self.k();
        (0..k).all(|r| {
            (0..k).all(|c| {
                let expect = if r == c {
                    FieldElement::ONE
                } else {
                    FieldElement::ZERO
                };
                self.0.get(r, c) == expect
            })
        })
    }
}
