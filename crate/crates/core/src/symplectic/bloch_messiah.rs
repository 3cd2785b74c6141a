use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs, orthogonality_defect};
use crate::phase_space::omega;

use super::symplectic_residual;

/// Eigenvalues of `S Sᵀ` within this distance of one are treated as
/// unsqueezed and resolved with a symplectic Gram-Schmidt pass.
const UNSQUEEZED_GAP: f64 = 1e-9;

/// `S = O₁ · (⊕_m Z(r_m)) · O₂` with `O₁, O₂` orthogonal-symplectic.
///
/// `O₁` and `O₂` are not required to be block-diagonal over frequencies; use
/// [`super::classify_symplectic`] to check whether they are passive on a given
/// mode table.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochMessiah {
    pub o1: DMatrix<f64>,
    /// Squeezing parameters, non-negative and descending.
    pub squeezing: Vec<f64>,
    pub o2: DMatrix<f64>,
    /// `max |O₁ Z O₂ − S|`.
    pub residual: f64,
    /// Worst orthogonality or symplectic defect of `O₁`, `O₂`.
    pub factor_defect: f64,
}

impl BlochMessiah {
    pub fn squeezer(&self) -> DMatrix<f64> {
        let d: Vec<f64> = self.squeezing.iter().flat_map(|&r| [(-r).exp(), r.exp()]).collect();
        DMatrix::from_diagonal(&DVector::from_vec(d))
    }
}

fn sign_fix(v: &mut DVector<f64>) {
    let mut best = 0;
    for i in 0..v.len() {
        if v[i].abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.neg_mut();
    }
}

/// Bloch-Messiah decomposition via the eigenvectors of `S Sᵀ = P²`, where
/// `P` is the symmetric factor of the polar decomposition `S = P O`.
///
/// An eigenvector `v` of `P` with eigenvalue `e^{r}` pairs with `Ωv`
/// (eigenvalue `e^{−r}`); the pair `(Ωv, v)` is the `(q, p)` column pair of
/// `O₁`. `O₂` is then `Z⁻¹ O₁ᵀ S`.
pub fn bloch_messiah(s: &DMatrix<f64>, tol: f64) -> Result<BlochMessiah> {
    let n = s.nrows();
    if n != s.ncols() || !n.is_multiple_of(2) {
        return Err(Error::DimensionMismatch { what: "symplectic matrix", expected: n + n % 2, found: s.ncols() });
    }
    let res = symplectic_residual(s);
    if res > tol {
        return Err(Error::NotSymplectic(res));
    }
    let m = n / 2;
    let om = omega(m);
    let (lambda, q) = linalg::sorted_symmetric_eigen(&(s * s.transpose()));

    let squeezed = (0..m).take_while(|&i| lambda[i] > 1.0 + UNSQUEEZED_GAP).count();
    let mut chosen: Vec<DVector<f64>> = Vec::with_capacity(m);
    let mut squeezing = Vec::with_capacity(m);
    for (i, l) in lambda.iter().take(squeezed).enumerate() {
        let mut v = q.column(i).into_owned();
        sign_fix(&mut v);
        chosen.push(v);
        squeezing.push(0.5 * l.ln());
    }

    // Unsqueezed subspace: pick v₁, Ωv₁, v₂, Ωv₂, … mutually orthogonal.
    let mut basis: Vec<DVector<f64>> = chosen.iter().flat_map(|v| [&om * v, v.clone()]).collect();
    for col in squeezed..(n - squeezed) {
        if chosen.len() == m {
            break;
        }
        let mut w = q.column(col).into_owned();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let norm = w.norm();
        if norm < 0.5 {
            continue;
        }
        w /= norm;
        sign_fix(&mut w);
        basis.push(&om * &w);
        basis.push(w.clone());
        chosen.push(w);
        squeezing.push(0.0);
    }
    if chosen.len() != m {
        return Err(Error::Tolerance {
            what: "bloch-messiah unsqueezed subspace",
            residual: (m - chosen.len()) as f64,
            tol,
        });
    }

    let mut o1 = DMatrix::zeros(n, n);
    for (k, v) in chosen.iter().enumerate() {
        o1.set_column(2 * k, &(&om * v));
        o1.set_column(2 * k + 1, v);
    }
    let inv_z: Vec<f64> = squeezing.iter().flat_map(|&r| [r.exp(), (-r).exp()]).collect();
    let o2 = DMatrix::from_diagonal(&DVector::from_vec(inv_z)) * o1.transpose() * s;

    let mut out = BlochMessiah { o1, squeezing, o2, residual: 0.0, factor_defect: 0.0 };
    out.residual = max_abs(&(&out.o1 * out.squeezer() * &out.o2 - s));
    out.factor_defect = [
        orthogonality_defect(&out.o1),
        orthogonality_defect(&out.o2),
        symplectic_residual(&out.o1),
        symplectic_residual(&out.o2),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if out.residual > tol {
        return Err(Error::Tolerance { what: "bloch-messiah reconstruction", residual: out.residual, tol });
    }
    if out.factor_defect > tol {
        return Err(Error::Tolerance { what: "bloch-messiah orthogonal factors", residual: out.factor_defect, tol });
    }
    Ok(out)
}
