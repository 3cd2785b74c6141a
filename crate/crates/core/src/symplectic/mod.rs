//! Symplectic machinery: spectra, Williamson and Bloch-Messiah normal forms,
//! passive (energy-preserving) transformations and random generators.

mod bloch_messiah;
mod passive;
mod random;
mod williamson;

pub use bloch_messiah::{bloch_messiah, BlochMessiah};
pub use passive::{orthogonal_from_unitary, qft_passive, qft_unitary, PassiveUnitary};
pub use random::{haar_unitary, random_passive, random_symplectic, stream_rng, DEFAULT_R_MAX};
pub use williamson::{symplectic_eigenvalues, williamson, Williamson};

use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, orthogonality_defect};
use crate::phase_space::{omega, ModeTable};

/// `max |S Ω Sᵀ − Ω|`.
pub fn symplectic_residual(s: &DMatrix<f64>) -> f64 {
    let om = omega(s.nrows() / 2);
    max_abs(&(s * &om * s.transpose() - om))
}

/// A real `2M × 2M` matrix satisfying `S Ω Sᵀ = Ω` on a given mode table.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    s: DMatrix<f64>,
    modes: ModeTable,
}

impl SymplecticMatrix {
    pub fn new(s: DMatrix<f64>, modes: ModeTable, tol: f64) -> Result<Self> {
        let n = modes.dim();
        if s.nrows() != n || s.ncols() != n {
            return Err(Error::DimensionMismatch { what: "symplectic matrix", expected: n, found: s.nrows() });
        }
        let res = symplectic_residual(&s);
        if res > tol {
            return Err(Error::NotSymplectic(res));
        }
        Ok(Self { s, modes })
    }

    pub fn identity(modes: ModeTable) -> Self {
        let n = modes.dim();
        Self { s: DMatrix::identity(n, n), modes }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn modes(&self) -> &ModeTable {
        &self.modes
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.s
    }

    /// `self · rhs`.
    pub fn compose(&self, rhs: &SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix { s: &self.s * &rhs.s, modes: self.modes.clone() }
    }

    pub fn classify(&self, tol: f64) -> SymplecticClass {
        classify_symplectic(&self.s, &self.modes, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymplecticClass {
    NotSymplectic,
    /// Symplectic but either not orthogonal or coupling different frequencies.
    Active,
    /// Orthogonal, symplectic and block-diagonal over frequency sectors.
    Passive,
}

/// Largest entry of `s` coupling modes of different frequency.
pub fn frequency_leak(s: &DMatrix<f64>, modes: &ModeTable) -> f64 {
    let m = modes.num_modes();
    let mut leak: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            if modes.sector_of(i) == modes.sector_of(j) {
                continue;
            }
            for a in 0..2 {
                for b in 0..2 {
                    leak = leak.max(s[(2 * i + a, 2 * j + b)].abs());
                }
            }
        }
    }
    leak
}

pub fn classify_symplectic(s: &DMatrix<f64>, modes: &ModeTable, tol: f64) -> SymplecticClass {
    let n = modes.dim();
    if s.nrows() != n || s.ncols() != n || symplectic_residual(s) > tol {
        return SymplecticClass::NotSymplectic;
    }
    if orthogonality_defect(s) <= tol && frequency_leak(s, modes) <= tol {
        SymplecticClass::Passive
    } else {
        SymplecticClass::Active
    }
}

/// Building blocks of Gaussian circuits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    /// `Z(r) = diag(e^{−r}, e^{r})` on one mode.
    Squeezer { mode: usize, r: f64 },
    /// `â → e^{iθ} â`.
    Phase { mode: usize, theta: f64 },
    /// `â₁ → √T â₁ + e^{iφ}√(1−T) â₂`, `â₂ → √T â₂ − e^{−iφ}√(1−T) â₁`.
    BeamSplitter { modes: (usize, usize), phi: f64, transmissivity: f64 },
}

pub fn squeezer_block(r: f64) -> Matrix2<f64> {
    Matrix2::new((-r).exp(), 0.0, 0.0, r.exp())
}

pub fn rotation_block(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Embeds an elementary gate into the full phase space of `modes`.
pub fn elementary_symplectic(kind: Elementary, modes: &ModeTable) -> Result<SymplecticMatrix> {
    let n = modes.dim();
    let mut s = DMatrix::identity(n, n);
    match kind {
        Elementary::Squeezer { mode, r } => {
            modes.check_index(mode)?;
            s.fixed_view_mut::<2, 2>(2 * mode, 2 * mode).copy_from(&squeezer_block(r));
        }
        Elementary::Phase { mode, theta } => {
            modes.check_index(mode)?;
            s.fixed_view_mut::<2, 2>(2 * mode, 2 * mode).copy_from(&rotation_block(theta));
        }
        Elementary::BeamSplitter { modes: (a, b), phi, transmissivity } => {
            modes.check_index(a)?;
            modes.check_index(b)?;
            if a == b {
                return Err(Error::InvalidArgument("beam splitter needs two distinct modes".into()));
            }
            if !(0.0..=1.0).contains(&transmissivity) {
                return Err(Error::InvalidArgument(format!(
                    "transmissivity {transmissivity} outside [0, 1]"
                )));
            }
            let u = passive::beam_splitter_unitary(phi, transmissivity);
            let o = orthogonal_from_unitary(&u);
            let idx = [a, b];
            for (bi, &mi) in idx.iter().enumerate() {
                for (bj, &mj) in idx.iter().enumerate() {
                    let block = o.fixed_view::<2, 2>(2 * bi, 2 * bj);
                    s.fixed_view_mut::<2, 2>(2 * mi, 2 * mj).copy_from(&block);
                }
            }
        }
    }
    Ok(SymplecticMatrix { s, modes: modes.clone() })
}
