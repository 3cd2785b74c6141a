use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::linalg::{unitarity_defect, CMatrix};
use crate::phase_space::{GaussianState, ModeTable};

/// Phase-space matrix of the mode transformation `â_j → Σ_k U_jk â_k`:
/// 2×2 blocks `[[Re U_jk, −Im U_jk], [Im U_jk, Re U_jk]]`.
pub fn orthogonal_from_unitary(u: &CMatrix) -> DMatrix<f64> {
    let m = u.nrows();
    let mut o = DMatrix::zeros(2 * m, 2 * m);
    for j in 0..m {
        for k in 0..m {
            let z = u[(j, k)];
            o[(2 * j, 2 * k)] = z.re;
            o[(2 * j, 2 * k + 1)] = -z.im;
            o[(2 * j + 1, 2 * k)] = z.im;
            o[(2 * j + 1, 2 * k + 1)] = z.re;
        }
    }
    o
}

pub(crate) fn beam_splitter_unitary(phi: f64, transmissivity: f64) -> CMatrix {
    let t = transmissivity.sqrt();
    let r = (1.0 - transmissivity).sqrt();
    let e = Complex::from_polar(1.0, phi);
    CMatrix::from_row_slice(2, 2, &[Complex::new(t, 0.0), e * r, -e.conj() * r, Complex::new(t, 0.0)])
}

/// An energy-preserving Gaussian unitary: a unitary `U` on the annihilation
/// operators that never mixes frequency sectors, together with its
/// orthogonal-symplectic phase-space matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PassiveUnitary {
    u: CMatrix,
    o: DMatrix<f64>,
    modes: ModeTable,
}

impl PassiveUnitary {
    pub fn from_unitary(u: CMatrix, modes: &ModeTable, tol: f64) -> Result<Self> {
        let m = modes.num_modes();
        if u.nrows() != m || u.ncols() != m {
            return Err(Error::DimensionMismatch { what: "mode unitary", expected: m, found: u.nrows() });
        }
        let defect = unitarity_defect(&u);
        if defect > tol {
            return Err(Error::NotUnitary(defect));
        }
        let mut leak: f64 = 0.0;
        for j in 0..m {
            for k in 0..m {
                if !modes.same_frequency(j, k) {
                    leak = leak.max(u[(j, k)].norm());
                }
            }
        }
        if leak > tol {
            return Err(Error::FrequencyMixing(leak));
        }
        let o = orthogonal_from_unitary(&u);
        Ok(Self { u, o, modes: modes.clone() })
    }

    pub fn identity(modes: &ModeTable) -> Self {
        let m = modes.num_modes();
        let u = CMatrix::identity(m, m);
        Self { o: orthogonal_from_unitary(&u), u, modes: modes.clone() }
    }

    /// Assembles one unitary per frequency sector.
    pub fn from_sector_blocks(modes: &ModeTable, blocks: &[CMatrix], tol: f64) -> Result<Self> {
        if blocks.len() != modes.num_frequencies() {
            return Err(Error::DimensionMismatch {
                what: "sector blocks",
                expected: modes.num_frequencies(),
                found: blocks.len(),
            });
        }
        let m = modes.num_modes();
        let mut u = CMatrix::zeros(m, m);
        for (k, b) in blocks.iter().enumerate() {
            let r = modes.sector_range(k);
            if b.nrows() != r.len() || b.ncols() != r.len() {
                return Err(Error::DimensionMismatch { what: "sector block", expected: r.len(), found: b.nrows() });
            }
            u.view_mut((r.start, r.start), (r.len(), r.len())).copy_from(b);
        }
        Self::from_unitary(u, modes, tol)
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.u
    }

    pub fn orthogonal(&self) -> &DMatrix<f64> {
        &self.o
    }

    pub fn modes(&self) -> &ModeTable {
        &self.modes
    }

    /// `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &PassiveUnitary) -> PassiveUnitary {
        let u = &self.u * &rhs.u;
        PassiveUnitary { o: orthogonal_from_unitary(&u), u, modes: self.modes.clone() }
    }

    pub fn adjoint(&self) -> PassiveUnitary {
        let u = self.u.adjoint();
        PassiveUnitary { o: orthogonal_from_unitary(&u), u, modes: self.modes.clone() }
    }

    pub fn apply(&self, state: &GaussianState) -> GaussianState {
        state.transformed(&self.o, None)
    }
}

/// `U_jk = e^{2πi jk / n} / √n` (zero-based indices).
pub fn qft_unitary(n: usize) -> CMatrix {
    let norm = (n as f64).sqrt().recip();
    CMatrix::from_fn(n, n, |j, k| {
        let phase = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
        Complex::from_polar(norm, phase)
    })
}

/// Discrete Fourier transform over `targets` (which must share one
/// frequency), identity on every other mode.
pub fn qft_passive(modes: &ModeTable, targets: &[usize]) -> Result<PassiveUnitary> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument("QFT needs at least one target mode".into()));
    }
    for &t in targets {
        modes.check_index(t)?;
        if !modes.same_frequency(t, targets[0]) {
            return Err(Error::FrequencyMixing(1.0));
        }
    }
    let mut sorted = targets.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != targets.len() {
        return Err(Error::InvalidArgument("QFT targets must be distinct".into()));
    }
    let m = modes.num_modes();
    let f = qft_unitary(targets.len());
    let mut u = CMatrix::identity(m, m);
    for (a, &ta) in targets.iter().enumerate() {
        for (b, &tb) in targets.iter().enumerate() {
            u[(ta, tb)] = f[(a, b)];
        }
    }
    PassiveUnitary::from_unitary(u, modes, 1e-10)
}
