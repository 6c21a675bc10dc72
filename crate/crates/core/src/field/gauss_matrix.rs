use crate::error::{check_len, Result};
use crate::gaussian::{CoefficientVector, GaussInt};

/// Dense matrix of Gaussian integers, one row per equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Wide {
    re: i128,
    im: i128,
}

impl Wide {
    const ZERO: Wide = Wide { re: 0, im: 0 };
    const ONE: Wide = Wide { re: 1, im: 0 };

    fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn mul(self, o: Wide) -> Wide {
        let re = self.re.checked_mul(o.re).and_then(|x| x.checked_sub(self.im.checked_mul(o.im)?));
        let im = self.re.checked_mul(o.im).and_then(|x| x.checked_add(self.im.checked_mul(o.re)?));
        Wide { re: re.expect("Gaussian minor overflow"), im: im.expect("Gaussian minor overflow") }
    }

    fn sub(self, o: Wide) -> Wide {
        Wide {
            re: self.re.checked_sub(o.re).expect("Gaussian minor overflow"),
            im: self.im.checked_sub(o.im).expect("Gaussian minor overflow"),
        }
    }

    /// Division known to be exact in Z[j].
    fn div_exact(self, d: Wide) -> Wide {
        let n = d.re * d.re + d.im * d.im;
        let num = self.mul(Wide { re: d.re, im: -d.im });
        debug_assert!(num.re % n == 0 && num.im % n == 0, "inexact Bareiss division");
        Wide { re: num.re / n, im: num.im / n }
    }
}

impl GaussianIntMatrix {
    pub fn from_rows(rows: &[CoefficientVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        for r in rows {
            check_len(cols, r.len())?;
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.iter().flat_map(|r| r.entries().iter().copied()).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> GaussInt {
        self.entries[r * self.cols + c]
    }

    /// Real decomposition `[[Re A, -Im A], [Im A, Re A]]`.
    pub fn real_decomposition(&self) -> Vec<Vec<i64>> {
        let (m, l) = (self.rows, self.cols);
        let mut out = vec![vec![0i64; 2 * l]; 2 * m];
        for r in 0..m {
            for c in 0..l {
                let a = self.get(r, c);
                out[r][c] = a.re;
                out[r][c + l] = -a.im;
                out[r + m][c] = a.im;
                out[r + m][c + l] = a.re;
            }
        }
        out
    }

    /// Rank over the complex numbers, by fraction-free elimination.
    ///
    /// # Panics
    /// If an intermediate minor overflows `i128`.
    pub fn complex_rank(&self) -> usize {
        let mut m: Vec<Vec<Wide>> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| {
                        let a = self.get(r, c);
                        Wide { re: a.re as i128, im: a.im as i128 }
                    })
                    .collect()
            })
            .collect();
        let mut prev = Wide::ONE;
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pr) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pr);
            let pivot = m[rank][col];
            for r in (rank + 1)..self.rows {
                for c in (col + 1)..self.cols {
                    let v = pivot.mul(m[r][c]).sub(m[r][col].mul(m[rank][c]));
                    m[r][c] = v.div_exact(prev);
                }
                m[r][col] = Wide::ZERO;
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// True when the matrix is square with nonzero determinant.
    pub fn complex_full_rank(&self) -> bool {
        self.rows == self.cols && self.complex_rank() == self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[(i64, i64)]]) -> GaussianIntMatrix {
        let rows: Vec<CoefficientVector> = rows
            .iter()
            .map(|r| CoefficientVector::new(r.iter().map(|&(a, b)| GaussInt::new(a, b)).collect()))
            .collect();
        GaussianIntMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn identity_and_dependent_rows() {
        assert!(m(&[&[(1, 0), (0, 0)], &[(0, 0), (1, 0)]]).complex_full_rank());
        assert!(!m(&[&[(1, 2), (3, 0)], &[(1, 2), (3, 0)]]).complex_full_rank());
        // Second row is j times the first: dependent over C but not over R.
        assert!(!m(&[&[(1, 0), (2, 0)], &[(0, 1), (0, 2)]]).complex_full_rank());
    }

    #[test]
    fn three_by_three_rank() {
        let a = m(&[
            &[(1, 1), (2, 0), (0, -1)],
            &[(0, 2), (1, -1), (3, 0)],
            &[(1, 3), (3, -1), (3, -1)],
        ]);
        assert_eq!(a.complex_rank(), 2);
    }
}
