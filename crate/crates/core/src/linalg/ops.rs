use super::{dot, DenseMatrix};
use crate::error::{shape_err, Result};

/// Ratio above which a second projection pass is applied.
const REORTH_TRIGGER: f64 = 1e-10;

pub fn frob_norm(m: &DenseMatrix) -> f64 {
    m.frob_norm()
}

pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.matmul(b)
}

pub fn transpose(m: &DenseMatrix) -> DenseMatrix {
    m.transpose()
}

/// `(I − Q Qᵀ) M` for column-orthonormal `Q`, repeated once when the first
/// pass leaves a visible component in `range(Q)`.
pub fn project_out(q: &DenseMatrix, m: &DenseMatrix) -> Result<DenseMatrix> {
    if q.rows() != m.rows() {
        return shape_err(format!(
            "projector has {} rows, operand has {}",
            q.rows(),
            m.rows()
        ));
    }
    if q.cols() == 0 {
        return Ok(m.clone());
    }
    let y = m.sub(&q.matmul(&q.tr_matmul(m)?)?)?;
    let leftover = q.tr_matmul(&y)?;
    if leftover.frob_norm() > REORTH_TRIGGER * y.frob_norm() {
        return y.sub(&q.matmul(&leftover)?);
    }
    Ok(y)
}

/// Largest singular value by power iteration on `MᵀM`, to relative change
/// 1e-6 or 1000 iterations.
pub fn spectral_norm_est(m: &DenseMatrix) -> f64 {
    const RTOL: f64 = 1e-6;
    const MAX_ITERS: usize = 1000;

    let n = m.cols();
    if n == 0 || m.rows() == 0 {
        return 0.0;
    }
    // Fixed, non-symmetric start vector keeps the estimate deterministic.
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + ((i + 1) as f64).sqrt() / n as f64)
        .collect();
    let nx = dot(&x, &x).sqrt();
    x.iter_mut().for_each(|v| *v /= nx);

    let mut est = 0.0;
    for _ in 0..MAX_ITERS {
        let xv = DenseMatrix::from_vec(n, 1, x).expect("column vector");
        let y = m.matmul(&xv).expect("conforming");
        let next = y.frob_norm();
        if next == 0.0 {
            return 0.0;
        }
        let z = m.tr_matmul(&y).expect("conforming").into_vec();
        let nz = dot(&z, &z).sqrt();
        if nz == 0.0 {
            return next;
        }
        x = z.into_iter().map(|v| v / nz).collect();
        let converged = (next - est).abs() <= RTOL * next;
        est = next;
        if converged {
            break;
        }
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gaussian_matrix, qr_thin, RngState};

    #[test]
    fn empty_projector_is_identity() {
        let m = gaussian_matrix(6, 3, &mut RngState::new(0));
        let q = DenseMatrix::zeros(6, 0);
        assert_eq!(project_out(&q, &m).unwrap(), m);
    }

    #[test]
    fn annihilates_range() {
        let mut rng = RngState::new(1);
        let q = qr_thin(&gaussian_matrix(40, 6, &mut rng)).unwrap().q;
        let coeffs = gaussian_matrix(6, 4, &mut rng);
        let m = q.matmul(&coeffs).unwrap();
        let p = project_out(&q, &m).unwrap();
        assert!(p.frob_norm() <= 1e-12 * m.frob_norm());
    }

    #[test]
    fn result_is_orthogonal_to_basis() {
        let mut rng = RngState::new(2);
        let q = qr_thin(&gaussian_matrix(100, 10, &mut rng)).unwrap().q;
        let m = gaussian_matrix(100, 5, &mut rng);
        let p = project_out(&q, &m).unwrap();
        assert!(q.tr_matmul(&p).unwrap().frob_norm() <= 1e-12 * m.frob_norm());
    }

    #[test]
    fn projection_is_idempotent() {
        let mut rng = RngState::new(3);
        let q = qr_thin(&gaussian_matrix(60, 12, &mut rng)).unwrap().q;
        let m = gaussian_matrix(60, 7, &mut rng);
        let once = project_out(&q, &m).unwrap();
        let twice = project_out(&q, &once).unwrap();
        assert!(twice.sub(&once).unwrap().frob_norm() <= 1e-13 * m.frob_norm());
    }

    #[test]
    fn row_mismatch_is_shape_error() {
        let q = DenseMatrix::zeros(5, 1);
        let m = DenseMatrix::zeros(4, 1);
        assert!(project_out(&q, &m).is_err());
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let d = DenseMatrix::from_diag(&[5.0, 1.0]);
        assert!((spectral_norm_est(&d) - 5.0).abs() <= 1e-5);
        assert_eq!(spectral_norm_est(&DenseMatrix::zeros(3, 3)), 0.0);
    }
}
