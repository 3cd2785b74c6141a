use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMatrix;
use crate::phase_space::ModeTable;

use super::passive::{orthogonal_from_unitary, PassiveUnitary};
use super::SymplecticMatrix;

/// Default upper bound for sampled squeezing parameters.
pub const DEFAULT_R_MAX: f64 = 2.0;

/// Independent generator number `stream` derived from `seed`. Work split
/// across threads draws one stream per item, so results do not depend on
/// scheduling.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Haar-distributed `n × n` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex::new(1.0, 0.0) };
        for z in q.column_mut(k).iter_mut() {
            *z *= phase;
        }
    }
    q
}

/// Independent Haar unitaries on every frequency sector.
pub fn random_passive<R: Rng + ?Sized>(modes: &ModeTable, rng: &mut R) -> PassiveUnitary {
    let blocks: Vec<CMatrix> = modes.sectors().iter().map(|s| haar_unitary(s.size, rng)).collect();
    PassiveUnitary::from_sector_blocks(modes, &blocks, 1e-10).expect("Haar blocks are unitary")
}

/// `O₁ (⊕ Z(r_m)) O₂` with `r_m ~ U[0, r_max]` and `O₁, O₂` from Haar
/// unitaries on all `M` modes, so the result may correlate different
/// frequencies.
pub fn random_symplectic<R: Rng + ?Sized>(modes: &ModeTable, r_max: f64, rng: &mut R) -> SymplecticMatrix {
    let m = modes.num_modes();
    let o1 = orthogonal_from_unitary(&haar_unitary(m, rng));
    let z: Vec<f64> = (0..m)
        .flat_map(|_| {
            let r = r_max * rng.random::<f64>();
            [(-r).exp(), r.exp()]
        })
        .collect();
    let o2 = orthogonal_from_unitary(&haar_unitary(m, rng));
    let s: DMatrix<f64> = o1 * DMatrix::from_diagonal(&DVector::from_vec(z)) * o2;
    SymplecticMatrix::new(s, modes.clone(), 1e-8).expect("product of symplectic factors")
}
