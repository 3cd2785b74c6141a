//! Named Gaussian states: thermal, uniform, coherent, squeezed, two-mode
//! squeezed and random.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::phase_space::{GaussianState, ModeTable};
use crate::symplectic::{random_symplectic, rotation_block, DEFAULT_R_MAX};

fn check_occupations(values: &[f64], what: &str) -> Result<()> {
    if let Some(x) = values.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidArgument(format!("{what} must be finite and non-negative, got {x}")));
    }
    Ok(())
}

/// `τ(n̄₁) ⊗ … ⊗ τ(n̄_M)`: zero displacement, `V = ⊕ (2n̄_m + 1) I₂`.
pub fn thermal_state(modes: &ModeTable, nbar: &[f64]) -> Result<GaussianState> {
    if nbar.len() != modes.num_modes() {
        return Err(Error::DimensionMismatch { what: "occupations", expected: modes.num_modes(), found: nbar.len() });
    }
    check_occupations(nbar, "occupations")?;
    let diag: Vec<f64> = nbar.iter().flat_map(|n| [2.0 * n + 1.0; 2]).collect();
    GaussianState::new(
        modes.clone(),
        DVector::zeros(modes.dim()),
        DMatrix::from_diagonal(&DVector::from_vec(diag)),
    )
}

/// Per-frequency occupation budget `N_ω` spread evenly over each sector.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSpec {
    pub modes: ModeTable,
    pub budget: Vec<f64>,
}

impl UniformSpec {
    pub fn new(modes: ModeTable, budget: Vec<f64>) -> Result<Self> {
        if budget.len() != modes.num_frequencies() {
            return Err(Error::DimensionMismatch {
                what: "per-frequency budget",
                expected: modes.num_frequencies(),
                found: budget.len(),
            });
        }
        check_occupations(&budget, "per-frequency budget")?;
        Ok(Self { modes, budget })
    }

    /// The budget of an existing state.
    pub fn of_state(state: &GaussianState) -> Self {
        let budget = state.mean_occupation().per_frequency.iter().map(|n| n.max(0.0)).collect();
        Self { modes: state.modes().clone(), budget }
    }

    /// `δ_ω = N_ω / M_ω`.
    pub fn deltas(&self) -> Vec<f64> {
        self.budget.iter().zip(self.modes.sectors()).map(|(n, s)| n / s.size as f64).collect()
    }

    /// `δ` expanded to one entry per mode.
    pub fn per_mode(&self) -> Vec<f64> {
        self.deltas()
            .iter()
            .zip(self.modes.sectors())
            .flat_map(|(&d, s)| std::iter::repeat_n(d, s.size))
            .collect()
    }
}

/// `τ_M(δ)`: the maximum-entropy state for the given per-frequency budget.
pub fn uniform_state(spec: &UniformSpec) -> Result<GaussianState> {
    thermal_state(&spec.modes, &spec.per_mode())
}

/// Product of coherent states; `d_m = √2 (Re α_m, Im α_m)`.
pub fn coherent_state(modes: &ModeTable, alpha: &[Complex<f64>]) -> Result<GaussianState> {
    if alpha.len() != modes.num_modes() {
        return Err(Error::DimensionMismatch { what: "amplitudes", expected: modes.num_modes(), found: alpha.len() });
    }
    let s2 = std::f64::consts::SQRT_2;
    let d: Vec<f64> = alpha.iter().flat_map(|a| [s2 * a.re, s2 * a.im]).collect();
    GaussianState::new(modes.clone(), DVector::from_vec(d), DMatrix::identity(modes.dim(), modes.dim()))
}

/// Product of single-mode squeezed vacua with squeezing `r_m` along angle
/// `θ_m`: `V_m = R(θ) diag(e^{−2r}, e^{2r}) R(θ)ᵀ`, so `n̄_m = sinh² r_m`.
pub fn squeezed_vacuum(modes: &ModeTable, r: &[f64], theta: &[f64]) -> Result<GaussianState> {
    let m = modes.num_modes();
    if r.len() != m || theta.len() != m {
        return Err(Error::DimensionMismatch { what: "squeezing parameters", expected: m, found: r.len().min(theta.len()) });
    }
    let mut v = DMatrix::zeros(2 * m, 2 * m);
    for k in 0..m {
        let rot = rotation_block(theta[k]);
        let z = nalgebra::Matrix2::new((-2.0 * r[k]).exp(), 0.0, 0.0, (2.0 * r[k]).exp());
        v.fixed_view_mut::<2, 2>(2 * k, 2 * k).copy_from(&(rot * z * rot.transpose()));
    }
    GaussianState::new(modes.clone(), DVector::zeros(2 * m), v)
}

/// Two-mode squeezed vacuum with squeezing `r` on the pair `(a, b)`, vacuum
/// elsewhere. Pairs of different frequency are refused unless
/// `allow_unequal_frequencies` is set, since no passive unitary creates them.
pub fn two_mode_squeezed(
    modes: &ModeTable,
    pair: (usize, usize),
    r: f64,
    allow_unequal_frequencies: bool,
) -> Result<GaussianState> {
    let (a, b) = pair;
    modes.check_index(a)?;
    modes.check_index(b)?;
    if a == b {
        return Err(Error::InvalidArgument("two-mode squeezing needs two distinct modes".into()));
    }
    if !allow_unequal_frequencies && !modes.same_frequency(a, b) {
        return Err(Error::InvalidArgument(format!(
            "modes {a} and {b} have different frequencies; pass the override to allow it"
        )));
    }
    let n = modes.dim();
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let mut v = DMatrix::identity(n, n);
    for &k in &[a, b] {
        v[(2 * k, 2 * k)] = c;
        v[(2 * k + 1, 2 * k + 1)] = c;
    }
    for (x, y) in [(a, b), (b, a)] {
        v[(2 * x, 2 * y)] = s;
        v[(2 * x + 1, 2 * y + 1)] = -s;
    }
    GaussianState::new(modes.clone(), DVector::zeros(n), v)
}

/// Pure-state constructors grouped for callers that pick one at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum PureStateKind {
    Coherent { alpha: Vec<Complex<f64>> },
    SqueezedVacuum { r: Vec<f64>, theta: Vec<f64> },
    TwoModeSqueezed { pair: (usize, usize), r: f64, allow_unequal_frequencies: bool },
}

pub fn pure_state(kind: &PureStateKind, modes: &ModeTable) -> Result<GaussianState> {
    match kind {
        PureStateKind::Coherent { alpha } => coherent_state(modes, alpha),
        PureStateKind::SqueezedVacuum { r, theta } => squeezed_vacuum(modes, r, theta),
        PureStateKind::TwoModeSqueezed { pair, r, allow_unequal_frequencies } => {
            two_mode_squeezed(modes, *pair, *r, *allow_unequal_frequencies)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomStateParams {
    pub r_max: f64,
    pub nbar_max: f64,
    pub displacement_scale: f64,
}

impl Default for RandomStateParams {
    fn default() -> Self {
        Self { r_max: DEFAULT_R_MAX, nbar_max: 1.0, displacement_scale: 1.0 }
    }
}

/// `V = S D Sᵀ` with a random symplectic `S`, `ν_m = 2u_m + 1`,
/// `u_m ~ U[0, nbar_max]`, and Gaussian displacement of the given scale.
pub fn random_state<R: Rng + ?Sized>(modes: &ModeTable, params: &RandomStateParams, rng: &mut R) -> GaussianState {
    let s = random_symplectic(modes, params.r_max, rng);
    let diag: Vec<f64> = (0..modes.num_modes())
        .flat_map(|_| {
            let nu = 2.0 * params.nbar_max * rng.random::<f64>() + 1.0;
            [nu; 2]
        })
        .collect();
    let d = DVector::from_fn(modes.dim(), |_, _| {
        let x: f64 = rng.sample(StandardNormal);
        params.displacement_scale * x
    });
    let s = s.matrix();
    let v = s * DMatrix::from_diagonal(&DVector::from_vec(diag)) * s.transpose();
    GaussianState::new(modes.clone(), d, crate::linalg::symmetrize(&v)).expect("dimensions agree")
}

/// Symplectic eigenvalue `ν = 2n̄ + 1 = coth(ω / 2T)` of a thermal mode of
/// frequency `omega` at temperature `t` (`ħ = k_B = 1`).
pub fn nu_from_temperature(omega: f64, t: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidArgument(format!("frequency must be positive, got {omega}")));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("temperature must be non-negative, got {t}")));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let x = omega / t;
    // 2 / (e^x − 1) + 1 without cancellation for small x.
    Ok(1.0 + 2.0 / x.exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::DEFAULT_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn thermal_layout_and_round_trip() {
        let modes = ModeTable::single_frequency(2).unwrap();
        let t = thermal_state(&modes, &[1.0, 2.0]).unwrap();
        assert_eq!(t.covariance(), &DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 3.0, 5.0, 5.0])));
        assert_eq!(t.mean_occupation().per_mode, vec![1.0, 2.0]);
        assert_eq!(thermal_state(&modes, &[0.0, 0.0]).unwrap(), GaussianState::vacuum(modes.clone()));
        assert!(thermal_state(&modes, &[-0.1, 0.0]).is_err());
    }

    #[test]
    fn uniform_examples() {
        let modes = ModeTable::single_frequency(2).unwrap();
        let u = uniform_state(&UniformSpec::new(modes.clone(), vec![2.0]).unwrap()).unwrap();
        assert_eq!(u.covariance(), &(DMatrix::identity(4, 4) * 3.0));
        let zero = uniform_state(&UniformSpec::new(modes.clone(), vec![0.0]).unwrap()).unwrap();
        assert_eq!(zero, GaussianState::vacuum(modes.clone()));
        assert!(UniformSpec::new(modes, vec![-1.0]).is_err());
    }

    #[test]
    fn pure_states_have_unit_spectrum() {
        let modes = ModeTable::single_frequency(2).unwrap();
        let vac = coherent_state(&modes, &[Complex::new(0.0, 0.0); 2]).unwrap();
        assert_eq!(vac, GaussianState::vacuum(modes.clone()));
        let sq = squeezed_vacuum(&modes, &[1.0, 0.3], &[0.0, 1.1]).unwrap();
        let occ = sq.mean_occupation().per_mode;
        assert!((occ[0] - 1.0f64.sinh().powi(2)).abs() < 1e-12);
        assert!((occ[0] - 1.381_097_845_541_815_7).abs() < 1e-12);
        let tmsv = two_mode_squeezed(&modes, (0, 1), 1.0f64.asinh(), false).unwrap();
        for s in [sq, tmsv.clone()] {
            assert!(s.validate(DEFAULT_TOL).is_ok());
            for nu in s.symplectic_eigenvalues().unwrap() {
                assert!((nu - 1.0).abs() < 1e-9);
            }
        }
        let marginal = tmsv.reduced(&[0]).unwrap();
        assert!(crate::linalg::max_abs(&(marginal.covariance() - DMatrix::identity(2, 2) * 3.0)) < 1e-12);
    }

    #[test]
    fn unequal_frequency_tmsv_needs_override() {
        let modes = ModeTable::new(&[1.0, 2.0], 1).unwrap();
        assert!(two_mode_squeezed(&modes, (0, 1), 0.5, false).is_err());
        assert!(two_mode_squeezed(&modes, (0, 1), 0.5, true).is_ok());
    }

    #[test]
    fn random_state_defaults_and_seeding() {
        let modes = ModeTable::new(&[1.0, 2.0], 2).unwrap();
        let flat = RandomStateParams { r_max: 0.0, nbar_max: 0.0, displacement_scale: 0.0 };
        let vac = random_state(&modes, &flat, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(crate::linalg::max_abs(&(vac.covariance() - DMatrix::identity(8, 8))) < 1e-12);
        assert!(vac.displacement().iter().all(|x| *x == 0.0));
        let params = RandomStateParams { r_max: 2.0, nbar_max: 3.0, displacement_scale: 1.0 };
        let a = random_state(&modes, &params, &mut ChaCha8Rng::seed_from_u64(4));
        let b = random_state(&modes, &params, &mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(a, b);
    }

    #[test]
    fn temperature_mapping() {
        assert_eq!(nu_from_temperature(1.0, 0.0).unwrap(), 1.0);
        let nu = nu_from_temperature(2.0_f64.ln(), 1.0).unwrap();
        assert!((nu - 3.0).abs() < 1e-12);
        let mut last = 1.0;
        for k in 1..50 {
            let nu = nu_from_temperature(1.5, 0.1 * k as f64).unwrap();
            assert!(nu > last);
            last = nu;
        }
        assert!((nu_from_temperature(1.0, 1e-3).unwrap() - 1.0).abs() < 1e-12);
        assert!(nu_from_temperature(1.0, -1.0).is_err());
        assert!(nu_from_temperature(0.0, 1.0).is_err());
        let modes = ModeTable::single_frequency(1).unwrap();
        let t = thermal_state(&modes, &[(nu - 1.0) / 2.0]).unwrap();
        assert!((t.symplectic_eigenvalues().unwrap()[0] - nu).abs() < 1e-12);
    }
}
