//! Gaussian channels `d → T d + v`, `V → T V Tᵀ + N`, their complete
//! positivity check, and the incoherent (IG) and noisy (GN) families.

use nalgebra::{DMatrix, DVector, Matrix2};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs, min_hermitian_eigenvalue, min_symmetric_eigenvalue};
use crate::phase_space::{omega, GaussianState, ModeTable, DEFAULT_TOL};
use crate::states::{uniform_state, UniformSpec};
use crate::symplectic::{random_passive, rotation_block, PassiveUnitary};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    t: DMatrix<f64>,
    n: DMatrix<f64>,
    v: DVector<f64>,
    modes: ModeTable,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelVerdict {
    Ok,
    /// Most negative eigenvalue of `N` or of `N + i(Ω − TΩTᵀ)`.
    NotCp { min_eigenvalue: f64 },
    Malformed(String),
}

impl ChannelVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, ChannelVerdict::Ok)
    }
}

impl GaussianChannel {
    /// Checks dimensions only; see [`GaussianChannel::validate`].
    pub fn new(modes: ModeTable, t: DMatrix<f64>, n: DMatrix<f64>, v: DVector<f64>) -> Result<Self> {
        let dim = modes.dim();
        for (what, rows, cols) in [("channel T", t.nrows(), t.ncols()), ("channel N", n.nrows(), n.ncols())] {
            if rows != dim || cols != dim {
                return Err(Error::DimensionMismatch { what, expected: dim, found: if rows != dim { rows } else { cols } });
            }
        }
        if v.len() != dim {
            return Err(Error::DimensionMismatch { what: "channel shift", expected: dim, found: v.len() });
        }
        Ok(Self { t, n, v, modes })
    }

    pub fn identity(modes: &ModeTable) -> Self {
        let dim = modes.dim();
        Self { t: DMatrix::identity(dim, dim), n: DMatrix::zeros(dim, dim), v: DVector::zeros(dim), modes: modes.clone() }
    }

    /// The channel of a Gaussian unitary `S` followed by a displacement.
    pub fn unitary(modes: &ModeTable, s: DMatrix<f64>, shift: Option<DVector<f64>>) -> Result<Self> {
        let dim = modes.dim();
        Self::new(modes.clone(), s, DMatrix::zeros(dim, dim), shift.unwrap_or_else(|| DVector::zeros(dim)))
    }

    pub fn t(&self) -> &DMatrix<f64> {
        &self.t
    }

    pub fn noise(&self) -> &DMatrix<f64> {
        &self.n
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.v
    }

    pub fn modes(&self) -> &ModeTable {
        &self.modes
    }

    /// Requires `N ⪰ 0` and `N + i(Ω − TΩTᵀ) ⪰ 0`, each up to `−tol`.
    pub fn validate(&self, tol: f64) -> ChannelVerdict {
        if self.t.iter().chain(self.n.iter()).chain(self.v.iter()).any(|x| !x.is_finite()) {
            return ChannelVerdict::Malformed("non-finite entries".into());
        }
        let asym = linalg::asymmetry(&self.n);
        if asym > tol {
            return ChannelVerdict::Malformed(format!("noise matrix not symmetric (residual {asym:e})"));
        }
        let n = linalg::symmetrize(&self.n);
        let om = omega(self.modes.num_modes());
        let min_n = min_symmetric_eigenvalue(&n);
        let min_cp = min_hermitian_eigenvalue(&n, &(&om - &self.t * &om * self.t.transpose()));
        let worst = min_n.min(min_cp);
        if worst < -tol {
            ChannelVerdict::NotCp { min_eigenvalue: worst }
        } else {
            ChannelVerdict::Ok
        }
    }

    /// Applies the channel without any checks.
    pub fn map(&self, s: &GaussianState) -> Result<GaussianState> {
        if s.modes() != &self.modes {
            return Err(Error::InvalidArgument("channel and state act on different mode tables".into()));
        }
        let d = &self.t * s.displacement() + &self.v;
        let v = linalg::symmetrize(&(&self.t * s.covariance() * self.t.transpose() + &self.n));
        GaussianState::new(self.modes.clone(), d, v)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &GaussianChannel) -> Result<GaussianChannel> {
        if first.modes != self.modes {
            return Err(Error::InvalidArgument("cannot compose channels on different mode tables".into()));
        }
        Ok(GaussianChannel {
            t: &self.t * &first.t,
            n: linalg::symmetrize(&(&self.t * &first.n * self.t.transpose() + &self.n)),
            v: &self.t * &first.v + &self.v,
            modes: self.modes.clone(),
        })
    }
}

pub fn validate_channel(ch: &GaussianChannel, tol: f64) -> ChannelVerdict {
    ch.validate(tol)
}

/// Applies a channel after checking complete positivity at [`DEFAULT_TOL`].
pub fn apply_channel(ch: &GaussianChannel, s: &GaussianState) -> Result<GaussianState> {
    match ch.validate(DEFAULT_TOL) {
        ChannelVerdict::Ok => ch.map(s),
        ChannelVerdict::NotCp { min_eigenvalue } => Err(Error::NotCompletelyPositive(min_eigenvalue)),
        ChannelVerdict::Malformed(why) => Err(Error::InvalidArgument(why)),
    }
}

/// `second ∘ first`.
pub fn compose(second: &GaussianChannel, first: &GaussianChannel) -> Result<GaussianChannel> {
    second.after(first)
}

/// Data of an incoherent Gaussian channel, one entry per mode: the output
/// block of mode `permutation[k]` is `t · 𝒪` acting on input mode `k`, with
/// noise `w I₂` added on every output mode.
#[derive(Debug, Clone, PartialEq)]
pub struct IgSpec {
    pub t: Vec<f64>,
    /// 2×2 orthogonal blocks, determinant ±1.
    pub blocks: Vec<Matrix2<f64>>,
    /// Input mode `k` is sent to output mode `permutation[k]`; must stay
    /// within the frequency sector of `k`.
    pub permutation: Vec<usize>,
    pub noise: Vec<f64>,
}

impl IgSpec {
    pub fn identity(modes: &ModeTable) -> Self {
        let m = modes.num_modes();
        Self { t: vec![1.0; m], blocks: vec![Matrix2::identity(); m], permutation: (0..m).collect(), noise: vec![0.0; m] }
    }

    /// Smallest noise per output mode compatible with complete positivity:
    /// `w ≥ |1 − t² det 𝒪|`.
    pub fn minimal_noise(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.t.len()];
        for (k, &dst) in self.permutation.iter().enumerate() {
            out[dst] = (1.0 - self.t[k] * self.t[k] * self.blocks[k].determinant()).abs();
        }
        out
    }
}

/// Builds the incoherent Gaussian channel of `spec`: `v = 0`,
/// `N = ⊕ w_m I₂` and `T` the block-column permutation of `⊕ t_k 𝒪_k`.
/// Noise too small for complete positivity is rejected with the minimal
/// admissible noise vector.
pub fn make_ig_channel(modes: &ModeTable, spec: &IgSpec) -> Result<GaussianChannel> {
    let m = modes.num_modes();
    for (what, len) in [
        ("IG coefficients", spec.t.len()),
        ("IG blocks", spec.blocks.len()),
        ("IG permutation", spec.permutation.len()),
        ("IG noise", spec.noise.len()),
    ] {
        if len != m {
            return Err(Error::DimensionMismatch { what, expected: m, found: len });
        }
    }
    let mut hit = vec![false; m];
    for (k, &dst) in spec.permutation.iter().enumerate() {
        modes.check_index(dst)?;
        if std::mem::replace(&mut hit[dst], true) {
            return Err(Error::InvalidArgument(format!("IG permutation repeats target {dst}")));
        }
        if !modes.same_frequency(k, dst) {
            return Err(Error::FrequencyMixing(1.0));
        }
    }
    for b in &spec.blocks {
        let defect = max_abs(&DMatrix::from_fn(2, 2, |i, j| (b * b.transpose())[(i, j)] - if i == j { 1.0 } else { 0.0 }));
        if defect > 1e-10 {
            return Err(Error::InvalidArgument(format!("IG block not orthogonal (defect {defect:e})")));
        }
    }
    if let Some(w) = spec.noise.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::InvalidArgument(format!("IG noise weights must be non-negative, got {w}")));
    }
    let minimal = spec.minimal_noise();
    if spec.noise.iter().zip(&minimal).any(|(w, min)| *w < min - 1e-12) {
        return Err(Error::NoiseTooSmall { minimal });
    }

    let dim = modes.dim();
    let mut t = DMatrix::zeros(dim, dim);
    for (k, &dst) in spec.permutation.iter().enumerate() {
        t.fixed_view_mut::<2, 2>(2 * dst, 2 * k).copy_from(&(spec.blocks[k] * spec.t[k]));
    }
    let diag: Vec<f64> = spec.noise.iter().flat_map(|&w| [w, w]).collect();
    let n = DMatrix::from_diagonal(&DVector::from_vec(diag));
    GaussianChannel::new(modes.clone(), t, n, DVector::zeros(dim))
}

/// Random IG data: `t ~ U[0, 1.5]`, random rotation or reflection blocks,
/// a random permutation inside each sector, and noise equal to the CP
/// minimum plus `U[0, 1]`.
pub fn random_ig_spec<R: Rng + ?Sized>(modes: &ModeTable, rng: &mut R) -> IgSpec {
    let m = modes.num_modes();
    let t: Vec<f64> = (0..m).map(|_| 1.5 * rng.random::<f64>()).collect();
    let blocks: Vec<Matrix2<f64>> = (0..m)
        .map(|_| {
            let r = rotation_block(std::f64::consts::TAU * rng.random::<f64>());
            if rng.random::<bool>() {
                r * Matrix2::new(1.0, 0.0, 0.0, -1.0)
            } else {
                r
            }
        })
        .collect();
    let mut permutation: Vec<usize> = (0..m).collect();
    for k in 0..modes.num_frequencies() {
        permutation[modes.sector_range(k)].shuffle(rng);
    }
    let mut spec = IgSpec { t, blocks, permutation, noise: vec![0.0; m] };
    spec.noise = spec.minimal_noise().into_iter().map(|w| w + rng.random::<f64>()).collect();
    spec
}

/// Environment attached by a Gaussian noisy operation.
#[derive(Debug, Clone, PartialEq)]
pub enum Environment {
    /// No ancillas: the operation is the passive unitary itself.
    None,
    /// One ancilla per system mode, same frequencies.
    SameAsSystem,
    Custom(ModeTable),
}

impl Environment {
    fn table(&self, system: &ModeTable) -> Option<ModeTable> {
        match self {
            Environment::None => None,
            Environment::SameAsSystem => Some(system.clone()),
            Environment::Custom(t) => Some(t.clone()),
        }
    }
}

/// Layout of a system plus environment on which the joint passive unitary of
/// a GN operation acts.
#[derive(Debug, Clone, PartialEq)]
pub struct GnLayout {
    pub joint: ModeTable,
    pub system: Vec<usize>,
    pub environment: Vec<usize>,
    /// `δ` for every environment mode.
    env_delta: Vec<f64>,
}

/// Joint table for `system ⊗ environment`, where every environment sector
/// is held at the system's `δ_ω` for the same frequency.
pub fn gn_layout(system: &UniformSpec, environment: &Environment) -> Result<GnLayout> {
    let sys_modes = &system.modes;
    let deltas = system.deltas();
    let Some(env) = environment.table(sys_modes) else {
        return Ok(GnLayout {
            joint: sys_modes.clone(),
            system: (0..sys_modes.num_modes()).collect(),
            environment: Vec::new(),
            env_delta: Vec::new(),
        });
    };
    let mut env_delta = Vec::with_capacity(env.num_modes());
    for m in 0..env.num_modes() {
        let w = env.omega_of(m);
        let k = sys_modes
            .sectors()
            .iter()
            .position(|s| s.omega == w)
            .ok_or_else(|| Error::InvalidArgument(format!("environment frequency {w} absent from the system")))?;
        env_delta.push(deltas[k]);
    }
    let merged = ModeTable::merge(sys_modes, &env);
    Ok(GnLayout { joint: merged.table, system: merged.left, environment: merged.right, env_delta })
}

/// Like [`make_gn_channel`] but with explicit environment occupations, which
/// must equal the system's `δ_ω` frequency by frequency.
pub fn make_gn_channel_with_delta(
    system: &UniformSpec,
    environment: &Environment,
    env_delta: &[f64],
    joint: &PassiveUnitary,
) -> Result<GaussianChannel> {
    let layout = gn_layout(system, environment)?;
    if env_delta.len() != layout.env_delta.len() {
        return Err(Error::DimensionMismatch {
            what: "environment occupations",
            expected: layout.env_delta.len(),
            found: env_delta.len(),
        });
    }
    for (given, expected) in env_delta.iter().zip(&layout.env_delta) {
        if (given - expected).abs() > 1e-12 * (1.0 + expected) {
            return Err(Error::InvalidArgument(format!(
                "environment occupation {given} differs from the system value {expected} at the same frequency"
            )));
        }
    }
    gn_from_layout(system, &layout, joint)
}

/// `ρ ↦ Tr_E[U (ρ ⊗ τ_E(δ)) U†]` with `U` passive on the joint table. The
/// effective channel has `T = O_SS`, `N = O_SE V_E O_SEᵀ`, `v = 0`.
pub fn make_gn_channel(system: &UniformSpec, environment: &Environment, joint: &PassiveUnitary) -> Result<GaussianChannel> {
    let layout = gn_layout(system, environment)?;
    gn_from_layout(system, &layout, joint)
}

fn gn_from_layout(system: &UniformSpec, layout: &GnLayout, joint: &PassiveUnitary) -> Result<GaussianChannel> {
    if joint.modes() != &layout.joint {
        return Err(Error::InvalidArgument("joint unitary does not act on the system-environment table".into()));
    }
    let o = joint.orthogonal();
    let quads = |modes: &[usize]| -> Vec<usize> { modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect() };
    let s_idx = quads(&layout.system);
    let e_idx = quads(&layout.environment);
    let t = DMatrix::from_fn(s_idx.len(), s_idx.len(), |i, j| o[(s_idx[i], s_idx[j])]);
    let dim = s_idx.len();
    let n = if e_idx.is_empty() {
        DMatrix::zeros(dim, dim)
    } else {
        let o_se = DMatrix::from_fn(dim, e_idx.len(), |i, j| o[(s_idx[i], e_idx[j])]);
        let v_env: Vec<f64> = layout.env_delta.iter().flat_map(|d| [2.0 * d + 1.0; 2]).collect();
        linalg::symmetrize(&(&o_se * DMatrix::from_diagonal(&DVector::from_vec(v_env)) * o_se.transpose()))
    };
    GaussianChannel::new(system.modes.clone(), t, n, DVector::zeros(dim))
}

/// GN channel with a Haar-random joint passive unitary.
pub fn random_gn_channel<R: Rng + ?Sized>(
    system: &UniformSpec,
    environment: &Environment,
    rng: &mut R,
) -> Result<GaussianChannel> {
    let layout = gn_layout(system, environment)?;
    let joint = random_passive(&layout.joint, rng);
    gn_from_layout(system, &layout, &joint)
}

/// Whether `ch` maps `τ_M(δ)` to itself within `tol` on `d` and `V`.
pub fn is_uniformity_preserving(ch: &GaussianChannel, spec: &UniformSpec, tol: f64) -> Result<bool> {
    let u = uniform_state(spec)?;
    let out = ch.map(&u)?;
    let dv = max_abs(&(out.covariance() - u.covariance()));
    let dd = (out.displacement() - u.displacement()).amax();
    Ok(dv <= tol && dd <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{coherent_state, thermal_state};
    use crate::symplectic::{elementary_symplectic, Elementary};
    use nalgebra::Complex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two() -> ModeTable {
        ModeTable::single_frequency(2).unwrap()
    }

    #[test]
    fn identity_and_displacement() {
        let modes = ModeTable::single_frequency(1).unwrap();
        let vac = GaussianState::vacuum(modes.clone());
        assert_eq!(apply_channel(&GaussianChannel::identity(&modes), &vac).unwrap(), vac);
        let shift = GaussianChannel::unitary(&modes, DMatrix::identity(2, 2), Some(DVector::from_vec(vec![1.0, 0.0])))
            .unwrap();
        let out = apply_channel(&shift, &vac).unwrap();
        assert_eq!(out.displacement().as_slice(), &[1.0, 0.0]);
        assert_eq!(out.covariance(), vac.covariance());
    }

    #[test]
    fn loss_and_amplifier_verdicts() {
        let modes = ModeTable::single_frequency(1).unwrap();
        let eta: f64 = 0.3;
        let loss = GaussianChannel::new(
            modes.clone(),
            DMatrix::identity(2, 2) * eta.sqrt(),
            DMatrix::identity(2, 2) * (1.0 - eta),
            DVector::zeros(2),
        )
        .unwrap();
        assert!(loss.validate(1e-12).is_ok());
        let vac = GaussianState::vacuum(modes.clone());
        let out = apply_channel(&loss, &vac).unwrap();
        assert!(max_abs(&(out.covariance() - vac.covariance())) < 1e-15);
        let doubling =
            GaussianChannel::new(modes.clone(), DMatrix::identity(2, 2) * 2.0, DMatrix::zeros(2, 2), DVector::zeros(2))
                .unwrap();
        match doubling.validate(1e-9) {
            ChannelVerdict::NotCp { min_eigenvalue } => assert!((min_eigenvalue + 3.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(matches!(apply_channel(&doubling, &vac), Err(Error::NotCompletelyPositive(_))));
        let z = elementary_symplectic(Elementary::Squeezer { mode: 0, r: 0.7 }, &modes).unwrap();
        assert!(GaussianChannel::unitary(&modes, z.into_matrix(), None).unwrap().validate(1e-12).is_ok());
    }

    #[test]
    fn malformed_noise() {
        let modes = ModeTable::single_frequency(1).unwrap();
        let n = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        let ch = GaussianChannel::new(modes, DMatrix::identity(2, 2), n, DVector::zeros(2)).unwrap();
        assert!(matches!(ch.validate(1e-9), ChannelVerdict::Malformed(_)));
    }

    #[test]
    fn ig_examples() {
        let modes = two();
        let id = make_ig_channel(&modes, &IgSpec::identity(&modes)).unwrap();
        assert_eq!(id, GaussianChannel::identity(&modes));

        let constant = IgSpec { t: vec![0.0, 0.0], noise: vec![3.0, 5.0], ..IgSpec::identity(&modes) };
        let ch = make_ig_channel(&modes, &constant).unwrap();
        let c = coherent_state(&modes, &[Complex::new(1.0, 2.0), Complex::new(-0.5, 0.0)]).unwrap();
        assert_eq!(apply_channel(&ch, &c).unwrap(), thermal_state(&modes, &[1.0, 2.0]).unwrap());

        let swap = IgSpec { permutation: vec![1, 0], ..IgSpec::identity(&modes) };
        let ch = make_ig_channel(&modes, &swap).unwrap();
        let out = apply_channel(&ch, &thermal_state(&modes, &[1.0, 2.0]).unwrap()).unwrap();
        assert_eq!(out, thermal_state(&modes, &[2.0, 1.0]).unwrap());
    }

    #[test]
    fn ig_noise_floor_reported() {
        let modes = two();
        let bad = IgSpec { t: vec![0.5, 1.0], ..IgSpec::identity(&modes) };
        match make_ig_channel(&modes, &bad) {
            Err(Error::NoiseTooSmall { minimal }) => assert_eq!(minimal, vec![0.75, 0.0]),
            other => panic!("{other:?}"),
        }
        let mixed = ModeTable::new(&[1.0, 2.0], 1).unwrap();
        let cross = IgSpec { permutation: vec![1, 0], ..IgSpec::identity(&mixed) };
        assert!(matches!(make_ig_channel(&mixed, &cross), Err(Error::FrequencyMixing(_))));
    }

    #[test]
    fn gn_without_environment_is_unitary() {
        let spec = UniformSpec::new(two(), vec![1.0]).unwrap();
        let u = random_passive(&two(), &mut ChaCha8Rng::seed_from_u64(2));
        let ch = make_gn_channel(&spec, &Environment::None, &u).unwrap();
        assert_eq!(ch.t(), u.orthogonal());
        assert_eq!(ch.noise(), &DMatrix::zeros(4, 4));
    }

    #[test]
    fn gn_beam_splitter_fixes_thermal() {
        let one = ModeTable::single_frequency(1).unwrap();
        let spec = UniformSpec::new(one.clone(), vec![0.8]).unwrap();
        let layout = gn_layout(&spec, &Environment::SameAsSystem).unwrap();
        let bs = elementary_symplectic(
            Elementary::BeamSplitter { modes: (0, 1), phi: 0.4, transmissivity: 0.5 },
            &layout.joint,
        )
        .unwrap();
        let joint = PassiveUnitary::from_sector_blocks(
            &layout.joint,
            &[crate::symplectic::qft_unitary(2)],
            1e-12,
        )
        .unwrap();
        for ch in [
            make_gn_channel(&spec, &Environment::SameAsSystem, &joint).unwrap(),
            GaussianChannel::new(
                one.clone(),
                bs.matrix().view((0, 0), (2, 2)).into_owned(),
                bs.matrix().view((0, 2), (2, 2)) * bs.matrix().view((0, 2), (2, 2)).transpose() * 2.6,
                DVector::zeros(2),
            )
            .unwrap(),
        ] {
            assert!(ch.validate(1e-12).is_ok());
            assert!(is_uniformity_preserving(&ch, &spec, 1e-12).unwrap());
        }
    }

    #[test]
    fn gn_rejects_mismatched_environment() {
        let spec = UniformSpec::new(two(), vec![1.0]).unwrap();
        let layout = gn_layout(&spec, &Environment::SameAsSystem).unwrap();
        let joint = PassiveUnitary::identity(&layout.joint);
        assert!(make_gn_channel_with_delta(&spec, &Environment::SameAsSystem, &[0.5, 0.5], &joint).is_ok());
        assert!(make_gn_channel_with_delta(&spec, &Environment::SameAsSystem, &[0.5, 0.7], &joint).is_err());
        let foreign = Environment::Custom(ModeTable::new(&[3.0], 1).unwrap());
        assert!(gn_layout(&spec, &foreign).is_err());
    }

    #[test]
    fn uniformity_negative_cases() {
        let modes = ModeTable::single_frequency(1).unwrap();
        let spec = UniformSpec::new(modes.clone(), vec![0.5]).unwrap();
        let shift = GaussianChannel::unitary(&modes, DMatrix::identity(2, 2), Some(DVector::from_vec(vec![0.1, 0.0])))
            .unwrap();
        assert!(!is_uniformity_preserving(&shift, &spec, 1e-9).unwrap());
        let z = elementary_symplectic(Elementary::Squeezer { mode: 0, r: 0.3 }, &modes).unwrap();
        let sq = GaussianChannel::unitary(&modes, z.into_matrix(), None).unwrap();
        assert!(!is_uniformity_preserving(&sq, &spec, 1e-9).unwrap());
    }

    #[test]
    fn composition_law() {
        let modes = two();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = make_ig_channel(&modes, &random_ig_spec(&modes, &mut rng)).unwrap();
        let spec = UniformSpec::new(modes.clone(), vec![0.7]).unwrap();
        let b = random_gn_channel(&spec, &Environment::SameAsSystem, &mut rng).unwrap();
        let s = coherent_state(&modes, &[Complex::new(0.3, -1.0), Complex::new(1.2, 0.1)]).unwrap();
        let two_step = b.map(&a.map(&s).unwrap()).unwrap();
        let one_step = compose(&b, &a).unwrap().map(&s).unwrap();
        assert!(max_abs(&(two_step.covariance() - one_step.covariance())) < 1e-12);
        assert!((two_step.displacement() - one_step.displacement()).amax() < 1e-12);
    }
}
