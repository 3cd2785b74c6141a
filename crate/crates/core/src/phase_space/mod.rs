//! Gaussian-state data model: mode bookkeeping, first and second moments,
//! occupations, partial traces and tensor products.

mod modes;
mod state;

pub use modes::{MergedModes, ModeLabel, ModeTable, Sector};
pub use state::{
    validate_state, GaussianState, OccupationProfile, Validation, Violation, DEFAULT_TOL,
};

use nalgebra::DMatrix;

/// The symplectic form `Ω = ⊕ [[0, 1], [−1, 0]]` on `n_modes` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm(DMatrix<f64>);

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Self {
        let mut m = DMatrix::zeros(2 * n_modes, 2 * n_modes);
        for k in 0..n_modes {
            m[(2 * k, 2 * k + 1)] = 1.0;
            m[(2 * k + 1, 2 * k)] = -1.0;
        }
        Self(m)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }
}

/// Shorthand for `SymplecticForm::new(n).into_matrix()`.
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    SymplecticForm::new(n_modes).into_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symplectic_form_identities() {
        let o = omega(3);
        assert_eq!(&o * &o, -DMatrix::identity(6, 6));
        assert_eq!(o.transpose(), -o);
    }
}
