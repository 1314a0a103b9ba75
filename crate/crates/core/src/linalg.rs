use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest absolute asymmetry relative to the largest entry.
pub(crate) fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let scale = m.amax().max(1.0);
    (m - m.transpose()).amax() / scale
}

/// Applies `f` to the eigenvalues of a symmetric matrix.
pub(crate) fn sym_apply(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(symmetrize(m));
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
    symmetrize(&(&eig.eigenvectors * d * eig.eigenvectors.transpose()))
}

pub(crate) fn check_spd(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() || asymmetry(m) > 1e-12 {
        return Err(Error::NotSpd);
    }
    let eig = SymmetricEigen::new(symmetrize(m));
    if eig.eigenvalues.iter().all(|&l| l > 0.0 && l.is_finite()) {
        Ok(())
    } else {
        Err(Error::NotSpd)
    }
}

pub(crate) fn sym_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    sym_apply(m, f64::sqrt)
}

pub(crate) fn sym_inv_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    sym_apply(m, |l| 1.0 / l.sqrt())
}

pub(crate) fn sym_log(m: &DMatrix<f64>) -> DMatrix<f64> {
    sym_apply(m, f64::ln)
}

pub(crate) fn sym_pow(m: &DMatrix<f64>, p: f64) -> DMatrix<f64> {
    sym_apply(m, |l| l.powf(p))
}

pub(crate) fn spd_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = m.clone().cholesky().ok_or(Error::NotSpd)?;
    Ok(symmetrize(&chol.inverse()))
}

/// Eigenvalues of `L^{-1} b L^{-T}` where `a = L L^T`, in ascending order.
pub(crate) fn generalized_eigenvalues(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<f64>> {
    let l = a.clone().cholesky().ok_or(Error::NotSpd)?.l();
    let linv = l.try_inverse().ok_or(Error::NotSpd)?;
    let s = symmetrize(&(&linv * b * linv.transpose()));
    let mut vals: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

pub(crate) fn quad_form(m: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    v.dot(&(m * v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn square_root_squares_back() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let r = sym_sqrt(&m);
        assert_relative_eq!(&r * &r, m, epsilon = 1e-13);
        let ir = sym_inv_sqrt(&m);
        assert_relative_eq!(&ir * &m * &ir, DMatrix::identity(2, 2), epsilon = 1e-13);
        assert_relative_eq!(sym_pow(&m, 1.0), m, epsilon = 1e-13);
    }

    #[test]
    fn generalized_eigenvalues_match_whitened_matrix() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.5]);
        let b = DMatrix::from_row_slice(2, 2, &[1.0, -0.2, -0.2, 3.0]);
        let w = sym_inv_sqrt(&a);
        let mut direct: Vec<f64> = SymmetricEigen::new(symmetrize(&(&w * &b * &w))).eigenvalues.iter().copied().collect();
        direct.sort_by(f64::total_cmp);
        let gen = generalized_eigenvalues(&a, &b).unwrap();
        for (x, y) in gen.iter().zip(&direct) {
            assert_relative_eq!(x, y, epsilon = 1e-13);
        }
    }

    #[test]
    fn spd_check() {
        assert!(check_spd(&DMatrix::identity(3, 3)).is_ok());
        assert!(check_spd(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).is_err());
        assert!(check_spd(&DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0])).is_err());
    }
}
