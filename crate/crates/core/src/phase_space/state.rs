use nalgebra::{Complex, DMatrix, DVector, Matrix2, Vector2};

use super::modes::{ModeTable, MergedModes};
use crate::error::{Error, Result};
use crate::linalg;
use crate::symplectic;

/// Default tolerance for symmetry and `ν ≥ 1` checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A Gaussian state in phase space.
///
/// Quadratures are interleaved `q₁, p₁, q₂, p₂, …` and the covariance is
/// normalised so that the vacuum has `V = I` (a thermal mode with mean
/// occupation `n̄` has `V = (2n̄ + 1) I`). Construction only checks
/// dimensions; use [`GaussianState::validate`] for the physical checks.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    modes: ModeTable,
    d: DVector<f64>,
    v: DMatrix<f64>,
}

/// A single failed invariant together with the measured residual.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite { entries: usize },
    Asymmetric { residual: f64 },
    NotPositiveDefinite { min_eigenvalue: f64 },
    /// Smallest symplectic eigenvalue below one.
    Unphysical { min_nu: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NonFinite { entries } => write!(f, "{entries} non-finite entries"),
            Violation::Asymmetric { residual } => {
                write!(f, "covariance not symmetric (max |V - Vᵀ| = {residual:e})")
            }
            Violation::NotPositiveDefinite { min_eigenvalue } => {
                write!(f, "covariance not positive definite (min eigenvalue {min_eigenvalue:e})")
            }
            Violation::Unphysical { min_nu } => {
                write!(f, "symplectic eigenvalue {min_nu} below 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_physicality_failure(&self) -> bool {
        self.violations.iter().any(|v| {
            matches!(v, Violation::Unphysical { .. } | Violation::NotPositiveDefinite { .. })
        })
    }
}

/// Mean occupation numbers and energy of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationProfile {
    pub per_mode: Vec<f64>,
    /// `N_ω`, one entry per frequency sector.
    pub per_frequency: Vec<f64>,
    pub total: f64,
    /// `Σ_ω ω N_ω` with `ħ = 1` and the zero-point energy removed.
    pub energy: f64,
}

/// Checks raw state data. Dimension problems are returned as `Err`, physical
/// problems as violations in the verdict.
pub fn validate_state(
    modes: &ModeTable,
    d: &DVector<f64>,
    v: &DMatrix<f64>,
    tol: f64,
) -> Result<Validation> {
    check_dims(modes, d, v)?;
    let mut verdict = Validation::default();

    let non_finite = d.iter().chain(v.iter()).filter(|x| !x.is_finite()).count();
    if non_finite > 0 {
        verdict.violations.push(Violation::NonFinite { entries: non_finite });
        return Ok(verdict);
    }
    let asym = linalg::asymmetry(v);
    if asym > tol {
        verdict.violations.push(Violation::Asymmetric { residual: asym });
    }
    let sym = linalg::symmetrize(v);
    let min_eig = linalg::min_symmetric_eigenvalue(&sym);
    if !(min_eig > 0.0) {
        verdict.violations.push(Violation::NotPositiveDefinite { min_eigenvalue: min_eig });
        return Ok(verdict);
    }
    let nu = symplectic::symplectic_eigenvalues(&sym)?;
    let min_nu = nu.last().copied().unwrap_or(1.0);
    if min_nu < 1.0 - tol {
        verdict.violations.push(Violation::Unphysical { min_nu });
    }
    Ok(verdict)
}

fn check_dims(modes: &ModeTable, d: &DVector<f64>, v: &DMatrix<f64>) -> Result<()> {
    let n = modes.dim();
    if d.len() != n {
        return Err(Error::DimensionMismatch { what: "displacement", expected: n, found: d.len() });
    }
    if v.nrows() != n || v.ncols() != n {
        return Err(Error::DimensionMismatch {
            what: "covariance",
            expected: n,
            found: if v.nrows() != n { v.nrows() } else { v.ncols() },
        });
    }
    Ok(())
}

impl GaussianState {
    pub fn new(modes: ModeTable, d: DVector<f64>, v: DMatrix<f64>) -> Result<Self> {
        check_dims(&modes, &d, &v)?;
        Ok(Self { modes, d, v })
    }

    /// Like [`GaussianState::new`] but also rejects states failing validation.
    pub fn new_checked(modes: ModeTable, d: DVector<f64>, v: DMatrix<f64>, tol: f64) -> Result<Self> {
        let verdict = validate_state(&modes, &d, &v, tol)?;
        if let Some(first) = verdict.violations.first() {
            return Err(Error::Unphysical(first.to_string()));
        }
        Ok(Self { modes, d, v })
    }

    pub fn vacuum(modes: ModeTable) -> Self {
        let n = modes.dim();
        Self { modes, d: DVector::zeros(n), v: DMatrix::identity(n, n) }
    }

    pub fn modes(&self) -> &ModeTable {
        &self.modes
    }

    pub fn num_modes(&self) -> usize {
        self.modes.num_modes()
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.d
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn into_parts(self) -> (ModeTable, DVector<f64>, DMatrix<f64>) {
        (self.modes, self.d, self.v)
    }

    /// 2×2 covariance block `V_m` of mode `m`.
    pub fn mode_covariance(&self, m: usize) -> Matrix2<f64> {
        self.v.fixed_view::<2, 2>(2 * m, 2 * m).into_owned()
    }

    pub fn mode_displacement(&self, m: usize) -> Vector2<f64> {
        self.d.fixed_rows::<2>(2 * m).into_owned()
    }

    pub fn validate(&self, tol: f64) -> Validation {
        validate_state(&self.modes, &self.d, &self.v, tol).expect("dimensions checked on construction")
    }

    /// Symplectic spectrum, sorted descending.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic::symplectic_eigenvalues(&self.v)
    }

    /// `n̄_m = ¼(Tr V_m + 2|d_m|² − 2)`, aggregated per frequency.
    pub fn mean_occupation(&self) -> OccupationProfile {
        let per_mode: Vec<f64> = (0..self.num_modes())
            .map(|m| {
                let vm = self.mode_covariance(m);
                let dm = self.mode_displacement(m);
                0.25 * (vm.trace() + 2.0 * dm.norm_squared() - 2.0)
            })
            .collect();
        let per_frequency: Vec<f64> = (0..self.modes.num_frequencies())
            .map(|k| self.modes.sector_range(k).map(|m| per_mode[m]).sum())
            .collect();
        let total = per_frequency.iter().sum();
        let energy = per_frequency
            .iter()
            .zip(self.modes.sectors())
            .map(|(n, s)| s.omega * n)
            .sum();
        OccupationProfile { per_mode, per_frequency, total, energy }
    }

    /// Partial trace onto `keep`. The retained modes keep their relative
    /// (frequency-major) order.
    pub fn reduced(&self, keep: &[usize]) -> Result<GaussianState> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let modes = self.modes.restrict(&keep)?;
        let idx: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let n = idx.len();
        let d = DVector::from_fn(n, |i, _| self.d[idx[i]]);
        let v = DMatrix::from_fn(n, n, |i, j| self.v[(idx[i], idx[j])]);
        Ok(GaussianState { modes, d, v })
    }

    /// `ρ_a ⊗ ρ_b`, re-sorted into frequency-major order.
    pub fn tensor(a: &GaussianState, b: &GaussianState) -> GaussianState {
        Self::tensor_with_layout(a, b).0
    }

    /// Tensor product plus the positions of each factor's modes in the result.
    pub fn tensor_with_layout(a: &GaussianState, b: &GaussianState) -> (GaussianState, MergedModes) {
        let merged = ModeTable::merge(&a.modes, &b.modes);
        let n = merged.table.dim();
        let mut d = DVector::zeros(n);
        let mut v = DMatrix::zeros(n, n);
        for (part, pos) in [(a, &merged.left), (b, &merged.right)] {
            for (i, &pi) in pos.iter().enumerate() {
                for r in 0..2 {
                    d[2 * pi + r] = part.d[2 * i + r];
                }
                for (j, &pj) in pos.iter().enumerate() {
                    for r in 0..2 {
                        for c in 0..2 {
                            v[(2 * pi + r, 2 * pj + c)] = part.v[(2 * i + r, 2 * j + c)];
                        }
                    }
                }
            }
        }
        let state = GaussianState { modes: merged.table.clone(), d, v };
        (state, merged)
    }

    /// `⟨â_{m1} â†_{m2}⟩` for two distinct modes.
    pub fn correlator(&self, m1: usize, m2: usize) -> Result<Complex<f64>> {
        self.modes.check_index(m1)?;
        self.modes.check_index(m2)?;
        if m1 == m2 {
            return Err(Error::InvalidArgument(
                "correlator needs two distinct modes".into(),
            ));
        }
        let (q1, p1, q2, p2) = (2 * m1, 2 * m1 + 1, 2 * m2, 2 * m2 + 1);
        let v = &self.v;
        let d = &self.d;
        let re = 0.25 * (v[(q1, q2)] + v[(p1, p2)]) + 0.5 * (d[q1] * d[q2] + d[p1] * d[p2]);
        let im = 0.25 * (v[(p1, q2)] - v[(q1, p2)]) + 0.5 * (d[p1] * d[q2] - d[q1] * d[p2]);
        Ok(Complex::new(re, im))
    }

    /// Applies `d → S d + v`, `V → S V Sᵀ` without checking that `S` is symplectic.
    pub fn transformed(&self, s: &DMatrix<f64>, shift: Option<&DVector<f64>>) -> GaussianState {
        let mut d = s * &self.d;
        if let Some(shift) = shift {
            d += shift;
        }
        let v = linalg::symmetrize(&(s * &self.v * s.transpose()));
        GaussianState { modes: self.modes.clone(), d, v }
    }
}
