//! Entropic resource quantifiers of Gaussian states.
//!
//! All values are computed in nats; [`LogBase`] rescales a report when bits
//! are wanted.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase_space::GaussianState;
use crate::symplectic::williamson;

/// Symplectic eigenvalues this close to one are treated as pure modes.
const PURE_NU: f64 = 1e-12;

/// Tolerance on each inequality of the hierarchy `P ≥ C ≥ D ≥ E`.
pub const HIERARCHY_TOL: f64 = 1e-8;

/// Symplectic eigenvalues within this distance of one make a state pure for
/// [`entanglement_pure`].
pub const PURITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Nats,
    Bits,
}

impl LogBase {
    /// Multiplier converting a value in nats to this base.
    pub fn from_nats(self) -> f64 {
        match self {
            LogBase::Nats => 1.0,
            LogBase::Bits => std::f64::consts::LOG2_E,
        }
    }
}

/// `g(n) = (n+1) ln(n+1) − n ln n`, the entropy of a thermal mode with mean
/// occupation `n`. Non-positive `n` gives 0.
pub fn thermal_entropy(n: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    (n + 1.0) * n.ln_1p() - n * n.ln()
}

/// Entropy of a mode with symplectic eigenvalue `ν`: `g((ν − 1)/2)`.
pub fn entropy_kernel(nu: f64) -> f64 {
    if nu <= 1.0 + PURE_NU {
        0.0
    } else {
        thermal_entropy(0.5 * (nu - 1.0))
    }
}

pub fn von_neumann_entropy(s: &GaussianState) -> Result<f64> {
    Ok(s.symplectic_eigenvalues()?.into_iter().map(entropy_kernel).sum())
}

/// `C = −S(ρ) + Σ_m g(n̄_m)`: relative entropy to the thermal state with the
/// same occupations.
pub fn coherence_rel(s: &GaussianState) -> Result<f64> {
    let ceiling: f64 = s.mean_occupation().per_mode.into_iter().map(thermal_entropy).sum();
    Ok(ceiling - von_neumann_entropy(s)?)
}

/// `C_max = −S(ρ) + Σ_ω M_ω g(N_ω / M_ω)`: the largest coherence reachable by
/// passive unitaries.
pub fn coherence_max(s: &GaussianState) -> Result<f64> {
    let occ = s.mean_occupation();
    let ceiling: f64 = occ
        .per_frequency
        .iter()
        .zip(s.modes().sectors())
        .map(|(&n, sec)| {
            let m = sec.size as f64;
            m * thermal_entropy(n / m)
        })
        .sum();
    Ok(ceiling - von_neumann_entropy(s)?)
}

/// `Σ_ω S(ρ_ω ‖ τ(N_ω/M_ω)^{⊗M_ω})` with `ρ_ω` the reduction onto one
/// frequency sector.
///
/// Equal to [`coherence_max`] for states without correlations between
/// different frequencies; otherwise it is smaller by the mutual information
/// between the sectors.
pub fn coherence_max_by_sectors(s: &GaussianState) -> Result<f64> {
    let modes = s.modes();
    let mut total = 0.0;
    for k in 0..modes.num_frequencies() {
        let keep: Vec<usize> = modes.sector_range(k).collect();
        let part = s.reduced(&keep)?;
        let m = keep.len() as f64;
        let n: f64 = part.mean_occupation().total;
        let delta = (n / m).max(0.0);
        total += thermal_cross_entropy(&part, &vec![delta; keep.len()]) - von_neumann_entropy(&part)?;
    }
    Ok(total)
}

/// `−Tr[ρ ln τ(n̄_ref)] = Σ_m [ln(1 + n_m) + n̄_m ln((1 + n_m)/n_m)]` for a
/// thermal reference with occupations `reference`. Infinite if the state
/// populates a mode that the reference holds in vacuum.
pub fn thermal_cross_entropy(s: &GaussianState, reference: &[f64]) -> f64 {
    s.mean_occupation()
        .per_mode
        .iter()
        .zip(reference)
        .map(|(&n, &r)| cross_term(n, r))
        .sum()
}

fn cross_term(n: f64, r: f64) -> f64 {
    const EMPTY: f64 = 1e-14;
    if r <= EMPTY {
        if n.abs() <= 1e-10 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        r.ln_1p() + n * (r.recip()).ln_1p()
    }
}

/// Quantum relative entropy `S(ρ ‖ σ)` between Gaussian states on the same
/// modes.
///
/// `σ` is brought to Williamson form `σ = S_σ (⊗ τ(n_k)) S_σᵀ`; the cross term
/// `−Tr[ρ ln σ]` is then the thermal cross entropy of `ρ` transported by
/// `S_σ⁻¹` and displaced by `−d_σ`.
pub fn relative_entropy(rho: &GaussianState, sigma: &GaussianState) -> Result<f64> {
    if rho.modes() != sigma.modes() {
        return Err(Error::InvalidArgument("relative entropy needs states on the same modes".into()));
    }
    let w = williamson(sigma.covariance(), 1e-8)?;
    let s_inv = w
        .symplectic
        .clone()
        .try_inverse()
        .ok_or(Error::NotPositiveDefinite(0.0))?;
    let shift = -(&s_inv * sigma.displacement());
    let moved = rho.transformed(&s_inv, Some(&shift));
    let reference: Vec<f64> = w.nu.iter().map(|nu| 0.5 * (nu - 1.0)).collect();
    Ok(thermal_cross_entropy(&moved, &reference) - von_neumann_entropy(rho)?)
}

/// `P = S(ρ ‖ τ_M(δ))` with `δ_ω = N_ω / M_ω` taken from `ρ` itself.
pub fn nonuniformity_rel(s: &GaussianState) -> Result<f64> {
    let occ = s.mean_occupation();
    let reference: Vec<f64> = (0..s.num_modes())
        .map(|m| {
            let k = s.modes().sector_of(m);
            (occ.per_frequency[k] / s.modes().sectors()[k].size as f64).max(0.0)
        })
        .collect();
    Ok(thermal_cross_entropy(s, &reference) - von_neumann_entropy(s)?)
}

/// Relative entropy to the closest product Gaussian state, which is the
/// product of the marginals: `D = Σ_m S(ρ_m) − S(ρ)`.
pub fn discord_rel(s: &GaussianState) -> Result<f64> {
    if s.num_modes() < 2 {
        return Ok(0.0);
    }
    let mut marginals = 0.0;
    for m in 0..s.num_modes() {
        let v = s.mode_covariance(m);
        marginals += entropy_kernel(single_mode_nu(&v));
    }
    Ok(marginals - von_neumann_entropy(s)?)
}

fn single_mode_nu(v: &nalgebra::Matrix2<f64>) -> f64 {
    (v[(0, 0)] * v[(1, 1)] - v[(0, 1)] * v[(1, 0)]).max(0.0).sqrt()
}

fn check_bipartition(s: &GaussianState, part: &[usize]) -> Result<()> {
    if part.is_empty() || part.len() >= s.num_modes() {
        return Err(Error::InvalidArgument("bipartition must be a proper, non-empty subset of the modes".into()));
    }
    let mut seen = vec![false; s.num_modes()];
    for &m in part {
        s.modes().check_index(m)?;
        if std::mem::replace(&mut seen[m], true) {
            return Err(Error::InvalidArgument(format!("mode {m} repeated in bipartition")));
        }
    }
    Ok(())
}

/// Entanglement of a pure state across `part | rest`: the entropy of either
/// reduction. Mixed states are refused with [`Error::MixedState`].
pub fn entanglement_pure(s: &GaussianState, part: &[usize]) -> Result<f64> {
    check_bipartition(s, part)?;
    let excess = s.symplectic_eigenvalues()?.first().map_or(0.0, |nu| nu - 1.0);
    if excess > PURITY_TOL {
        return Err(Error::MixedState(excess));
    }
    von_neumann_entropy(&s.reduced(part)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntanglementStatus {
    /// Pure state with a bipartition: the value is exact.
    Defined,
    /// Mixed state: only the discord upper bound is available.
    BoundOnly,
    /// No bipartition was given.
    NotRequested,
}

/// All quantifiers of one state in a single base.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceReport {
    pub entropy: f64,
    pub coherence: f64,
    pub coherence_max: f64,
    pub nonuniformity: f64,
    pub discord: f64,
    pub entanglement: Option<f64>,
    pub entanglement_status: EntanglementStatus,
    /// `P ≥ C ≥ D`, and `D ≥ E` when `E` is defined.
    pub hierarchy_ok: bool,
    /// `P − C_max`.
    pub ceiling_gap: f64,
    pub log_base: LogBase,
}

impl ResourceReport {
    /// The same report expressed in another base.
    pub fn in_base(&self, base: LogBase) -> ResourceReport {
        let k = base.from_nats() / self.log_base.from_nats();
        ResourceReport {
            entropy: self.entropy * k,
            coherence: self.coherence * k,
            coherence_max: self.coherence_max * k,
            nonuniformity: self.nonuniformity * k,
            discord: self.discord * k,
            entanglement: self.entanglement.map(|e| e * k),
            ceiling_gap: self.ceiling_gap * k,
            log_base: base,
            ..self.clone()
        }
    }
}

/// Evaluates every quantifier and the hierarchy verdict. The inequalities
/// are checked in nats with absolute slack [`HIERARCHY_TOL`].
pub fn hierarchy_report(s: &GaussianState, bipartition: Option<&[usize]>, base: LogBase) -> Result<ResourceReport> {
    let entropy = von_neumann_entropy(s)?;
    let coherence = coherence_rel(s)?;
    let coherence_max = coherence_max(s)?;
    let nonuniformity = nonuniformity_rel(s)?;
    let discord = discord_rel(s)?;
    let (entanglement, entanglement_status) = match bipartition {
        None => (None, EntanglementStatus::NotRequested),
        Some(part) => match entanglement_pure(s, part) {
            Ok(e) => (Some(e), EntanglementStatus::Defined),
            Err(Error::MixedState(_)) => (None, EntanglementStatus::BoundOnly),
            Err(e) => return Err(e),
        },
    };
    let tol = HIERARCHY_TOL;
    let hierarchy_ok = nonuniformity >= coherence - tol
        && coherence >= discord - tol
        && entanglement.is_none_or(|e| discord >= e - tol);
    let report = ResourceReport {
        entropy,
        coherence,
        coherence_max,
        nonuniformity,
        discord,
        entanglement,
        entanglement_status,
        hierarchy_ok,
        ceiling_gap: nonuniformity - coherence_max,
        log_base: LogBase::Nats,
    };
    Ok(if base == LogBase::Nats { report } else { report.in_base(base) })
}
