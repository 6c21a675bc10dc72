use serde::{Deserialize, Serialize};

use super::prime::PrimeField;
use crate::error::{Error, Result};

/// Dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FieldMatrixJson", into = "FieldMatrixJson")]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct FieldMatrixJson {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u64>>,
}

impl TryFrom<FieldMatrixJson> for FieldMatrix {
    type Error = Error;
    fn try_from(j: FieldMatrixJson) -> Result<Self> {
        let field = PrimeField::new(j.p)?;
        if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
            return Err(Error::InvalidConfig("entries do not match rows x cols".into()));
        }
        if j.entries.iter().flatten().any(|&x| x >= j.p) {
            return Err(Error::InvalidConfig("entries must be reduced modulo p".into()));
        }
        Ok(Self { field, rows: j.rows, cols: j.cols, entries: j.entries.concat() })
    }
}

impl From<FieldMatrix> for FieldMatrixJson {
    fn from(m: FieldMatrix) -> Self {
        FieldMatrixJson { p: m.field.p(), rows: m.rows, cols: m.cols, entries: m.to_rows() }
    }
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry modulo p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidConfig("ragged matrix rows".into()));
        }
        let entries = rows.iter().flatten().map(|&x| field.g_inv(x)).collect();
        Ok(Self { field, rows: rows.len(), cols, entries })
    }

    /// Column vector from field elements.
    pub fn column(field: PrimeField, values: &[u64]) -> Self {
        Self { field, rows: values.len(), cols: 1, entries: values.iter().map(|&v| v % field.p()).collect() }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Entries of a single-column matrix.
    pub fn column_values(&self) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, 0)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::InvalidConfig("matrices over different fields".into()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, actual: other.rows });
        }
        let p = self.field.p();
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc = (acc + self.get(r, k) * other.get(k, c)) % p;
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn reduce(&mut self, pivot_cols: usize) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.entries.swap(pr * self.cols + c, row * self.cols + c);
                }
            }
            let inv = f.inv(self.get(row, col));
            for c in 0..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                let factor = self.get(r, col);
                if r == row || factor == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.reduce(self.cols).len()
    }

    /// Some `X` with `self * X = rhs`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, rhs: &Self) -> Result<Option<Self>> {
        if self.field != rhs.field {
            return Err(Error::InvalidConfig("matrices over different fields".into()));
        }
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, actual: rhs.rows });
        }
        let n = self.cols;
        let mut aug = Self::zeros(self.field, self.rows, n + rhs.cols);
        for r in 0..self.rows {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            for c in 0..rhs.cols {
                aug.set(r, n + c, rhs.get(r, c));
            }
        }
        let pivots = aug.reduce(n);
        for r in pivots.len()..aug.rows {
            if (0..rhs.cols).any(|c| aug.get(r, n + c) != 0) {
                return Ok(None);
            }
        }
        let mut x = Self::zeros(self.field, n, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, aug.get(r, n + c));
            }
        }
        Ok(Some(x))
    }

    pub fn invert(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, actual: self.cols });
        }
        if self.rank() < self.rows {
            return Err(Error::Singular(self.field.p()));
        }
        let id = Self::identity(self.field, self.rows);
        Ok(self.solve(&id)?.expect("full-rank system is consistent"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let f = PrimeField::new(7).unwrap();
        let m = FieldMatrix::from_rows(f, &[vec![1, 2, 3], vec![-1, 8, 0]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"p":7,"rows":2,"cols":3,"entries":[[1,2,3],[6,1,0]]}"#);
        let back: FieldMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<FieldMatrix>(r#"{"p":7,"rows":1,"cols":1,"entries":[[9]]}"#).is_err());
        assert!(serde_json::from_str::<FieldMatrix>(r#"{"p":8,"rows":1,"cols":1,"entries":[[1]]}"#).is_err());
    }

    #[test]
    fn inverse_of_small_matrix() {
        let f = PrimeField::new(5).unwrap();
        let m = FieldMatrix::from_rows(f, &[vec![2, 1], vec![1, 1]]).unwrap();
        let inv = m.invert().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FieldMatrix::identity(f, 2));
        let sing = FieldMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(sing.invert().unwrap_err(), Error::Singular(5));
    }
}
