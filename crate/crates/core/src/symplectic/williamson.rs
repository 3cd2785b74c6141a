use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs};
use crate::phase_space::omega;

use super::symplectic_residual;

/// `V = S · diag(ν₁, ν₁, …, ν_M, ν_M) · Sᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Williamson {
    pub symplectic: DMatrix<f64>,
    /// Symplectic eigenvalues, descending.
    pub nu: Vec<f64>,
    /// `max |S D Sᵀ − V|`.
    pub residual: f64,
    /// `max |S Ω Sᵀ − Ω|`.
    pub symplectic_residual: f64,
}

impl Williamson {
    pub fn diagonal(&self) -> DMatrix<f64> {
        let d: Vec<f64> = self.nu.iter().flat_map(|&n| [n, n]).collect();
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
    }
}

fn check_symmetric(v: &DMatrix<f64>) -> Result<()> {
    if v.nrows() != v.ncols() || !v.nrows().is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            what: "covariance (square, even order)",
            expected: v.nrows() + v.nrows() % 2,
            found: v.ncols(),
        });
    }
    let asym = linalg::asymmetry(v);
    if asym > 1e-9 * max_abs(v).max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// `i · K Ω K` with `K = V^{1/2}`: Hermitian, eigenvalues `±ν_m`.
fn hermitian_generator(v: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<Complex<f64>>)> {
    check_symmetric(v)?;
    let k = linalg::sqrt_spd(v)?;
    let a = &k * omega(v.nrows() / 2) * &k;
    let zero = DMatrix::zeros(a.nrows(), a.ncols());
    Ok((k, linalg::hermitian(&zero, &a)))
}

/// Symplectic eigenvalues of a symmetric positive definite `V`, descending.
pub fn symplectic_eigenvalues(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let (_, h) = hermitian_generator(v)?;
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev.truncate(v.nrows() / 2);
    Ok(ev)
}

/// Williamson normal form of a covariance matrix.
///
/// With `K = V^{1/2}`, the antisymmetric `A = K Ω K` is brought to the form
/// `⊕ ν_m [[0, 1], [−1, 0]]` by an orthogonal `O` (from the eigenvectors of
/// the Hermitian `iA`), and `S = K O D^{−1/2}`. The rotation freedom left in
/// each column pair is fixed by `fix_rotation_gauge`.
pub fn williamson(v: &DMatrix<f64>, tol: f64) -> Result<Williamson> {
    let (k, h) = hermitian_generator(v)?;
    let n = v.nrows();
    let m = n / 2;
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut o = DMatrix::zeros(n, n);
    let mut nu = Vec::with_capacity(m);
    let sqrt2 = std::f64::consts::SQRT_2;
    for (pair, &idx) in order.iter().take(m).enumerate() {
        let u = eig.eigenvectors.column(idx);
        nu.push(eig.eigenvalues[idx]);
        for r in 0..n {
            o[(r, 2 * pair)] = sqrt2 * u[r].im;
            o[(r, 2 * pair + 1)] = sqrt2 * u[r].re;
        }
    }
    let mut s = &k * o;
    for (pair, &nu_m) in nu.iter().enumerate() {
        let scale = nu_m.sqrt().recip();
        s.column_mut(2 * pair).scale_mut(scale);
        s.column_mut(2 * pair + 1).scale_mut(scale);
        fix_rotation_gauge(&mut s, pair);
    }

    let mut result = Williamson { symplectic: s, nu, residual: 0.0, symplectic_residual: 0.0 };
    let s = &result.symplectic;
    result.residual = max_abs(&(s * result.diagonal() * s.transpose() - v));
    result.symplectic_residual = symplectic_residual(s);
    if result.residual > tol {
        return Err(Error::Tolerance { what: "williamson reconstruction", residual: result.residual, tol });
    }
    if result.symplectic_residual > tol {
        return Err(Error::Tolerance {
            what: "williamson symplectic check",
            residual: result.symplectic_residual,
            tol,
        });
    }
    Ok(result)
}

/// Rotates column pair `pair` so that its dominant 2×2 row block becomes
/// symmetric with non-negative trace. The dominant block is the one with the
/// largest rotation part `|(a + d, b − c)|`, which is invariant under the
/// gauge rotation itself.
fn fix_rotation_gauge(s: &mut DMatrix<f64>, pair: usize) {
    let (cq, cp) = (2 * pair, 2 * pair + 1);
    let mut best = (0.0, 0.0);
    let mut best_w = -1.0;
    for j in 0..s.nrows() / 2 {
        let (a, b) = (s[(2 * j, cq)], s[(2 * j, cp)]);
        let (c, d) = (s[(2 * j + 1, cq)], s[(2 * j + 1, cp)]);
        let part = (a + d, b - c);
        let w = part.0.hypot(part.1);
        if w > best_w + 1e-12 {
            best_w = w;
            best = part;
        }
    }
    if best_w <= 0.0 {
        return;
    }
    let (sn, c) = best.1.atan2(best.0).sin_cos();
    for r in 0..s.nrows() {
        let (x, y) = (s[(r, cq)], s[(r, cp)]);
        s[(r, cq)] = c * x + sn * y;
        s[(r, cp)] = -sn * x + c * y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::squeezer_block;

    fn tmsv_cov() -> DMatrix<f64> {
        let (c, s) = (3.0, 8f64.sqrt());
        DMatrix::from_row_slice(4, 4, &[c, 0., s, 0., 0., c, 0., -s, s, 0., c, 0., 0., -s, 0., c])
    }

    /// Oracle: moduli of the eigenvalues of ΩV from a general eigensolver.
    fn nu_by_omega_v(v: &DMatrix<f64>) -> Vec<f64> {
        let ov = omega(v.nrows() / 2) * v;
        let mut moduli: Vec<f64> = ov.complex_eigenvalues().iter().map(|z| z.norm()).collect();
        moduli.sort_by(|a, b| b.total_cmp(a));
        moduli.iter().step_by(2).copied().collect()
    }

    #[test]
    fn spectra_of_simple_states() {
        assert_eq!(symplectic_eigenvalues(&DMatrix::identity(2, 2)).unwrap().len(), 1);
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
        assert!(close(&symplectic_eigenvalues(&DMatrix::identity(2, 2)).unwrap(), &[1.0]));
        let sq = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![(-2.0f64).exp(), 2.0f64.exp()]));
        assert!(close(&symplectic_eigenvalues(&sq).unwrap(), &[1.0]));
        assert!(close(&symplectic_eigenvalues(&(DMatrix::identity(2, 2) * 3.0)).unwrap(), &[3.0]));
        let t = tmsv_cov();
        assert!(close(&symplectic_eigenvalues(&t).unwrap(), &[1.0, 1.0]));
        assert!(close(&nu_by_omega_v(&t), &[1.0, 1.0]));
    }

    #[test]
    fn rejects_bad_input() {
        let mut asym = DMatrix::identity(2, 2);
        asym[(0, 1)] = 0.3;
        assert!(matches!(symplectic_eigenvalues(&asym), Err(Error::NotSymmetric(_))));
        let indefinite = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        assert!(matches!(williamson(&indefinite, 1e-9), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn thermal_is_already_normal_form() {
        let w = williamson(&(DMatrix::identity(2, 2) * 3.0), 1e-12).unwrap();
        assert!((w.nu[0] - 3.0).abs() < 1e-12);
        assert!(max_abs(&(&w.symplectic - DMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn squeezed_thermal_round_trip() {
        let z = DMatrix::from_fn(2, 2, |i, j| squeezer_block(1.0)[(i, j)]);
        let v = &z * (DMatrix::identity(2, 2) * 3.0) * z.transpose();
        let w = williamson(&v, 1e-10).unwrap();
        assert!((w.nu[0] - 3.0).abs() < 1e-12);
        // S is Z(1) up to a rotation on the right
        let sst = &w.symplectic * w.symplectic.transpose();
        assert!(max_abs(&(sst - &z * z.transpose())) < 1e-10);
    }

    #[test]
    fn agrees_with_general_eigensolver_on_correlated_state() {
        let v = DMatrix::from_row_slice(
            4,
            4,
            &[4.0, 0.5, 1.0, 0.2, 0.5, 2.0, -0.3, 0.4, 1.0, -0.3, 3.0, 0.1, 0.2, 0.4, 0.1, 2.5],
        );
        let w = williamson(&v, 1e-10).unwrap();
        let oracle = nu_by_omega_v(&v);
        for (a, b) in w.nu.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }
}
