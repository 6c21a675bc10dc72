//! Finite-field linear algebra for recovering messages from equations.
//!
//! A Gaussian-integer equation over `L` messages acts on the stacked real and
//! imaginary message parts `(w_1^R .. w_L^R, w_1^I .. w_L^I)` through the
//! block matrix `[[Q^R, -Q^I], [Q^I, Q^R]]`.

mod gauss_matrix;
mod matrix;
mod prime;

pub use gauss_matrix::GaussianIntMatrix;
pub use matrix::FieldMatrix;
pub use prime::{is_prime, PrimeField};

use crate::error::{check_len, Error, Result};
use crate::gaussian::CoefficientVector;

/// Residues of the real and imaginary parts of each coefficient.
pub fn coeffs_to_field(a: &CoefficientVector, field: PrimeField) -> (Vec<u64>, Vec<u64>) {
    let re = a.entries().iter().map(|x| field.g_inv(x.re)).collect();
    let im = a.entries().iter().map(|x| field.g_inv(x.im)).collect();
    (re, im)
}

/// The 2M x 2L coefficient matrix of `M` equations over `L` messages.
pub fn build_q(a_list: &[CoefficientVector], field: PrimeField, l: usize) -> Result<FieldMatrix> {
    let m = a_list.len();
    let mut q = FieldMatrix::zeros(field, 2 * m, 2 * l);
    for (r, a) in a_list.iter().enumerate() {
        check_len(l, a.len())?;
        let (qr, qi) = coeffs_to_field(a, field);
        for c in 0..l {
            q.set(r, c, qr[c]);
            q.set(r, c + l, field.neg(qi[c]));
            q.set(r + m, c, qi[c]);
            q.set(r + m, c + l, qr[c]);
        }
    }
    Ok(q)
}

/// Solves `Q w = u` for the stacked messages when `Q` is square and invertible.
pub fn solve_all_messages(q: &FieldMatrix, u_stack: &FieldMatrix) -> Result<FieldMatrix> {
    if q.rows() != q.cols() {
        return Err(Error::DimensionMismatch { expected: q.rows(), actual: q.cols() });
    }
    if q.rank() < q.rows() {
        return Err(Error::Singular(q.field().p()));
    }
    Ok(q.solve(u_stack)?.expect("invertible system is consistent"))
}

/// The 2 x 2L target rows selecting `w_ell^R` and `w_ell^I`.
pub fn recovery_target(field: PrimeField, ell: usize, l: usize) -> FieldMatrix {
    let mut t = FieldMatrix::zeros(field, 2, 2 * l);
    t.set(0, ell, 1);
    t.set(1, ell + l, 1);
    t
}

/// A 2 x 2K matrix `Phi` with `Phi Q` selecting message `ell` (zero-based),
/// or `None` when that message is not recoverable from the equations.
pub fn recovery_matrix(q: &FieldMatrix, ell: usize, l: usize) -> Result<Option<FieldMatrix>> {
    check_len(2 * l, q.cols())?;
    if ell >= l {
        return Err(Error::IndexOutOfRange { index: ell, len: l });
    }
    let target = recovery_target(q.field(), ell, l);
    Ok(q.transpose().solve(&target.transpose())?.map(|x| x.transpose()))
}

/// Whether the equations determine every message: `Q` square with full rank over C.
pub fn complex_full_rank(a: &GaussianIntMatrix) -> bool {
    a.complex_full_rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussInt;

    #[test]
    fn identity_coefficients_give_identity_q() {
        let f = PrimeField::new(7).unwrap();
        let rows: Vec<CoefficientVector> = (0..3).map(|i| CoefficientVector::unit(3, i)).collect();
        assert_eq!(build_q(&rows, f, 3).unwrap(), FieldMatrix::identity(f, 6));
    }

    #[test]
    fn zero_q_has_no_recovery() {
        let f = PrimeField::new(3).unwrap();
        let q = FieldMatrix::zeros(f, 2, 4);
        assert_eq!(recovery_matrix(&q, 0, 2).unwrap(), None);
    }

    #[test]
    fn imaginary_coefficient_block_signs() {
        let f = PrimeField::new(5).unwrap();
        let a = CoefficientVector::new(vec![GaussInt::new(1, 2)]);
        let q = build_q(&[a], f, 1).unwrap();
        assert_eq!(q.to_rows(), vec![vec![1, 3], vec![2, 1]]);
    }
}
