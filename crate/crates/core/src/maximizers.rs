//! Passive unitaries that maximise coherence (and, by search, discord or
//! pure-state entanglement) at fixed energy.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::phase_space::{GaussianState, ModeTable};
use crate::quantifiers::{coherence_max, coherence_rel, discord_rel, entanglement_pure};
use crate::symplectic::{orthogonal_from_unitary, qft_unitary, random_passive, stream_rng, PassiveUnitary};

/// Correlators smaller than this leave the balancing phase at `θ₁₂ = 0`.
const ZERO_CORRELATOR: f64 = 1e-12;

/// Default number of random candidates in [`passive_search`].
pub const DEFAULT_BUDGET: usize = 500;

/// Default number of coordinate-ascent sweeps in [`passive_search`].
pub const DEFAULT_SWEEPS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    Coherence,
    Discord,
    /// Entanglement of a pure state across `part | rest`.
    EntanglementPure(Vec<usize>),
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::Coherence => "coherence",
            Objective::Discord => "discord",
            Objective::EntanglementPure(_) => "entanglement_pure",
        }
    }

    pub fn evaluate(&self, s: &GaussianState) -> Result<f64> {
        match self {
            Objective::Coherence => coherence_rel(s),
            Objective::Discord => discord_rel(s),
            Objective::EntanglementPure(part) => entanglement_pure(s, part),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximizerOutcome {
    pub transform: PassiveUnitary,
    pub output: GaussianState,
    pub objective: Objective,
    /// Objective value on `output`.
    pub achieved: f64,
    /// `C_max` of the input, the ceiling for every objective.
    pub target: f64,
    pub gap: f64,
    /// Set when the balancing beam splitter did not equalise the
    /// occupations and a search took over.
    pub used_fallback: bool,
}

fn check_energy(input: &GaussianState, output: &GaussianState) -> Result<()> {
    let a = input.mean_occupation().per_frequency;
    let b = output.mean_occupation().per_frequency;
    let worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs() / (1.0 + x.abs())).fold(0.0, f64::max);
    if worst > 1e-10 {
        return Err(Error::Tolerance { what: "energy preservation", residual: worst, tol: 1e-10 });
    }
    Ok(())
}

fn outcome(
    input: &GaussianState,
    transform: PassiveUnitary,
    objective: Objective,
    used_fallback: bool,
) -> Result<MaximizerOutcome> {
    let output = transform.apply(input);
    check_energy(input, &output)?;
    let achieved = objective.evaluate(&output)?;
    let target = coherence_max(input)?;
    Ok(MaximizerOutcome { transform, output, objective, achieved, target, gap: target - achieved, used_fallback })
}

/// The 50:50 beam splitter with phase `φ = θ₁₂ + π/2`, `θ₁₂ = arg⟨â₁â₂†⟩`,
/// which cancels the interference term and leaves both modes with `N/2`.
pub fn balancing_beam_splitter(s: &GaussianState) -> Result<MaximizerOutcome> {
    let modes = s.modes();
    if modes.num_modes() != 2 {
        return Err(Error::InvalidArgument(format!("balancing needs exactly two modes, got {}", modes.num_modes())));
    }
    if !modes.same_frequency(0, 1) {
        return Err(Error::FrequencyMixing(1.0));
    }
    let c = s.correlator(0, 1)?;
    let theta = if c.norm() < ZERO_CORRELATOR { 0.0 } else { c.arg() };
    let u = balancing_unitary(theta + FRAC_PI_2);
    let transform = PassiveUnitary::from_unitary(u, modes, 1e-12)?;
    let result = outcome(s, transform, Objective::Coherence, false)?;
    let n = result.output.mean_occupation();
    if (n.per_mode[0] - n.per_mode[1]).abs() <= 1e-9 * (1.0 + n.total) {
        return Ok(result);
    }
    let options = SearchOptions { budget: 64, seed: 0, refine: true, sweeps: 20 };
    let mut fallback = passive_search(s, Objective::Coherence, &options)?;
    fallback.used_fallback = true;
    Ok(if fallback.achieved > result.achieved { fallback } else { result })
}

fn balancing_unitary(phi: f64) -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e = Complex::from_polar(h, phi);
    CMatrix::from_row_slice(2, 2, &[Complex::new(h, 0.0), e, -e.conj(), Complex::new(h, 0.0)])
}

/// Applies the discrete Fourier transform inside every frequency sector.
///
/// Requires zero displacement and vanishing cross-covariance blocks between
/// modes of the same frequency; the output occupations are then `N_ω / M_ω`.
pub fn qft_equidistribute(s: &GaussianState, tol: f64) -> Result<MaximizerOutcome> {
    let modes = s.modes();
    let d = s.displacement();
    let v = s.covariance();
    for k in 0..modes.num_frequencies() {
        let range = modes.sector_range(k);
        for a in range.clone() {
            let shift = d[2 * a].abs().max(d[2 * a + 1].abs());
            if shift > tol {
                return Err(Error::Precondition(format!("mode {a} is displaced (|d| = {shift:e})")));
            }
            for b in range.clone().filter(|&b| b != a) {
                let cross = (0..2)
                    .flat_map(|i| (0..2).map(move |j| (i, j)))
                    .map(|(i, j)| v[(2 * a + i, 2 * b + j)].abs())
                    .fold(0.0, f64::max);
                if cross > tol {
                    return Err(Error::Precondition(format!(
                        "modes {a} and {b} are correlated (cross block {cross:e})"
                    )));
                }
            }
        }
    }
    let blocks: Vec<CMatrix> = modes.sectors().iter().map(|sec| qft_unitary(sec.size)).collect();
    let transform = PassiveUnitary::from_sector_blocks(modes, &blocks, 1e-12)?;
    outcome(s, transform, Objective::Coherence, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: usize,
    pub seed: u64,
    pub refine: bool,
    pub sweeps: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, seed: 0, refine: true, sweeps: DEFAULT_SWEEPS }
    }
}

/// Candidate `i` of a search with the given seed: the identity for `i = 0`,
/// otherwise a Haar-random passive unitary drawn from stream `i`.
pub fn search_candidate(modes: &ModeTable, seed: u64, index: usize) -> PassiveUnitary {
    if index == 0 {
        return PassiveUnitary::identity(modes);
    }
    random_passive(modes, &mut stream_rng(seed, index as u64))
}

/// Best of `budget` candidates (see [`search_candidate`]), optionally
/// refined by coordinate ascent over Givens rotations within each frequency
/// sector.
pub fn passive_search(s: &GaussianState, objective: Objective, options: &SearchOptions) -> Result<MaximizerOutcome> {
    if options.budget == 0 {
        return Err(Error::InvalidArgument("search budget must be at least one".into()));
    }
    objective.evaluate(s)?;
    let modes = s.modes();
    if modes.sectors().iter().all(|sec| sec.size == 1) {
        return outcome(s, PassiveUnitary::identity(modes), objective, false);
    }

    let scores: Vec<Result<f64>> = (0..options.budget)
        .into_par_iter()
        .map(|i| objective.evaluate(&search_candidate(modes, options.seed, i).apply(s)))
        .collect();
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, score) in scores.into_iter().enumerate() {
        let score = score?;
        if score > best.1 {
            best = (i, score);
        }
    }
    let mut u = search_candidate(modes, options.seed, best.0).unitary().clone();
    if options.refine {
        refine(s, &objective, &mut u, best.1, options.sweeps);
    }
    let transform = PassiveUnitary::from_unitary(u, modes, 1e-9)?;
    outcome(s, transform, objective, false)
}

/// One planar generator inside a sector: a real rotation or a rotation
/// generated by `iσ_x` on modes `(a, b)`.
#[derive(Clone, Copy)]
struct Givens {
    a: usize,
    b: usize,
    imaginary: bool,
}

impl Givens {
    fn left_multiply(self, u: &CMatrix, angle: f64) -> CMatrix {
        let (s, c) = angle.sin_cos();
        let (off_ab, off_ba) = if self.imaginary {
            (Complex::new(0.0, s), Complex::new(0.0, s))
        } else {
            (Complex::new(-s, 0.0), Complex::new(s, 0.0))
        };
        let mut out = u.clone();
        let ra = u.row(self.a).into_owned();
        let rb = u.row(self.b).into_owned();
        let c = Complex::new(c, 0.0);
        out.set_row(self.a, &(&ra * c + &rb * off_ab));
        out.set_row(self.b, &(&ra * off_ba + &rb * c));
        out
    }
}

fn score(s: &GaussianState, objective: &Objective, u: &CMatrix) -> f64 {
    let o = orthogonal_from_unitary(u);
    objective.evaluate(&s.transformed(&o, None)).unwrap_or(f64::NEG_INFINITY)
}

fn refine(s: &GaussianState, objective: &Objective, u: &mut CMatrix, mut current: f64, sweeps: usize) {
    let modes = s.modes();
    let mut generators = Vec::new();
    for k in 0..modes.num_frequencies() {
        let r = modes.sector_range(k);
        for a in r.clone() {
            for b in (a + 1)..r.end {
                generators.push(Givens { a, b, imaginary: false });
                generators.push(Givens { a, b, imaginary: true });
            }
        }
    }
    const GRID: usize = 24;
    for _ in 0..sweeps {
        let start = current;
        for &g in &generators {
            let f = |angle: f64| score(s, objective, &g.left_multiply(u, angle));
            let step = 2.0 * PI / GRID as f64;
            let (mut best_angle, mut best) = (0.0, current);
            for i in 1..GRID {
                let angle = -PI + step * i as f64;
                let val = f(angle);
                if val > best {
                    best = val;
                    best_angle = angle;
                }
            }
            let (angle, val) = golden_section(&f, best_angle - step, best_angle + step, 1e-10);
            if val > best {
                best = val;
                best_angle = angle;
            }
            if best > current {
                *u = g.left_multiply(u, best_angle);
                current = best;
            }
        }
        if current - start <= 1e-13 * (1.0 + current.abs()) {
            break;
        }
    }
}

fn golden_section(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorCertificate {
    pub omega: f64,
    pub equidistributed: bool,
    /// `max_j |n̄_{ω;j} − N_ω / M_ω|`.
    pub deviation: f64,
}

/// Per-frequency check that every mode carries `N_ω / M_ω` within `tol`.
pub fn equidistribution_certificate(s: &GaussianState, tol: f64) -> Vec<SectorCertificate> {
    let occ = s.mean_occupation();
    s.modes()
        .sectors()
        .iter()
        .enumerate()
        .map(|(k, sec)| {
            let mean = occ.per_frequency[k] / sec.size as f64;
            let deviation = s
                .modes()
                .sector_range(k)
                .map(|m| (occ.per_mode[m] - mean).abs())
                .fold(0.0, f64::max);
            SectorCertificate { omega: sec.omega, equidistributed: deviation <= tol, deviation }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{coherent_state, squeezed_vacuum, thermal_state, two_mode_squeezed};
    use std::f64::consts::LN_2;

    fn pair() -> ModeTable {
        ModeTable::single_frequency(2).unwrap()
    }

    #[test]
    fn balancing_coherent_and_vacuum() {
        for phase in [0.0, 0.9, -2.3] {
            let s = coherent_state(&pair(), &[Complex::from_polar(2f64.sqrt(), phase), Complex::new(0.0, 0.0)])
                .unwrap();
            let out = balancing_beam_splitter(&s).unwrap();
            let n = out.output.mean_occupation().per_mode;
            assert!((n[0] - 1.0).abs() < 1e-12 && (n[1] - 1.0).abs() < 1e-12, "{n:?}");
            assert!((out.achieved - 4.0 * LN_2).abs() < 1e-12);
            assert!(out.gap.abs() < 1e-12);
            assert!(!out.used_fallback);
        }
    }

    #[test]
    fn balancing_correlated_coherent_pair() {
        let s = coherent_state(&pair(), &[Complex::new(1.0, 0.5), Complex::new(-0.2, 1.4)]).unwrap();
        let out = balancing_beam_splitter(&s).unwrap();
        assert!(out.gap.abs() < 1e-10, "{}", out.gap);
    }

    #[test]
    fn balancing_already_balanced_inputs() {
        let tmsv = two_mode_squeezed(&pair(), (0, 1), 0.8, false).unwrap();
        assert!(tmsv.correlator(0, 1).unwrap().norm() < 1e-15);
        assert!(balancing_beam_splitter(&tmsv).unwrap().gap.abs() < 1e-10);
        let t = thermal_state(&pair(), &[1.0, 1.0]).unwrap();
        let out = balancing_beam_splitter(&t).unwrap();
        for n in out.output.mean_occupation().per_mode {
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn balancing_rejects_unequal_frequencies() {
        let modes = ModeTable::new(&[1.0, 2.0], 1).unwrap();
        assert!(balancing_beam_splitter(&GaussianState::vacuum(modes)).is_err());
        let three = ModeTable::single_frequency(3).unwrap();
        assert!(balancing_beam_splitter(&GaussianState::vacuum(three)).is_err());
    }

    #[test]
    fn qft_on_squeezed_product() {
        let modes = ModeTable::single_frequency(3).unwrap();
        let s = squeezed_vacuum(&modes, &[1.0, 0.0, 0.0], &[0.0; 3]).unwrap();
        let out = qft_equidistribute(&s, 1e-12).unwrap();
        let expect = 1f64.sinh().powi(2) / 3.0;
        for n in out.output.mean_occupation().per_mode {
            assert!((n - expect).abs() < 1e-12);
        }
        assert!(out.gap.abs() < 1e-10);
        assert!(equidistribution_certificate(&out.output, 1e-10).iter().all(|c| c.equidistributed));
    }

    #[test]
    fn qft_trivial_inputs_and_refusals() {
        let modes = ModeTable::single_frequency(2).unwrap();
        let vac = qft_equidistribute(&GaussianState::vacuum(modes.clone()), 1e-12).unwrap();
        assert_eq!(vac.achieved, 0.0);
        assert_eq!(vac.target, 0.0);
        let t = qft_equidistribute(&thermal_state(&modes, &[1.0, 1.0]).unwrap(), 1e-12).unwrap();
        assert!(t.gap.abs() < 1e-10);
        let displaced = coherent_state(&modes, &[Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]).unwrap();
        assert!(matches!(qft_equidistribute(&displaced, 1e-12), Err(Error::Precondition(_))));
        let tmsv = two_mode_squeezed(&modes, (0, 1), 0.5, false).unwrap();
        assert!(matches!(qft_equidistribute(&tmsv, 1e-12), Err(Error::Precondition(_))));
    }

    #[test]
    fn certificate_examples() {
        let modes = ModeTable::single_frequency(2).unwrap();
        let s = coherent_state(&modes, &[Complex::new(2f64.sqrt(), 0.0), Complex::new(0.0, 0.0)]).unwrap();
        let cert = equidistribution_certificate(&s, 1e-9);
        assert!(!cert[0].equidistributed);
        assert!((cert[0].deviation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn search_reaches_ceiling_on_product_state() {
        let modes = ModeTable::single_frequency(3).unwrap();
        let s = thermal_state(&modes, &[2.0, 0.1, 0.5]).unwrap();
        let options = SearchOptions { budget: 200, seed: 3, refine: true, sweeps: DEFAULT_SWEEPS };
        let out = passive_search(&s, Objective::Coherence, &options).unwrap();
        assert!(out.gap >= -1e-8 && out.gap <= 1e-4, "{}", out.gap);
        let again = passive_search(&s, Objective::Coherence, &options).unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn search_single_mode_and_zero_budget() {
        let one = ModeTable::new(&[1.0, 2.0], 1).unwrap();
        let s = coherent_state(&one, &[Complex::new(0.3, 0.0), Complex::new(0.0, 1.0)]).unwrap();
        let out = passive_search(&s, Objective::Discord, &SearchOptions::default()).unwrap();
        assert_eq!(out.transform, PassiveUnitary::identity(&one));
        let none = SearchOptions { budget: 0, ..SearchOptions::default() };
        assert!(passive_search(&s, Objective::Coherence, &none).is_err());
    }

    #[test]
    fn entanglement_objective_needs_pure_state() {
        let modes = ModeTable::single_frequency(2).unwrap();
        let t = thermal_state(&modes, &[1.0, 0.0]).unwrap();
        let options = SearchOptions { budget: 4, ..SearchOptions::default() };
        assert!(passive_search(&t, Objective::EntanglementPure(vec![0]), &options).is_err());
        let sq = squeezed_vacuum(&modes, &[1.0, 0.0], &[0.0, 0.0]).unwrap();
        let out = passive_search(&sq, Objective::EntanglementPure(vec![0]), &options).unwrap();
        assert!(out.achieved <= out.target + 1e-8);
        assert!(out.achieved > 0.1);
    }
}
