//! Randomized quasi-Monte Carlo: the additive R_d (Kronecker) sequence
//! with independent uniform shifts keyed by a seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The Kronecker sequence `x_n = frac(s + n·α)` with `α_i = φ_d^{-(i+1)}`,
/// `φ_d` the positive root of `x^{d+1} = x + 1`.
#[derive(Clone, Debug)]
pub struct RdSequence {
    alpha: Vec<f64>,
    shift: Vec<f64>,
}

fn phi(d: usize) -> f64 {
    let mut x: f64 = 2.0;
    for _ in 0..64 {
        x = (1.0 + x).powf(1.0 / (d as f64 + 1.0));
    }
    x
}

impl RdSequence {
    pub fn new(dim: usize, shift: Vec<f64>) -> Self {
        assert_eq!(shift.len(), dim);
        let g = phi(dim);
        let alpha = (1..=dim).map(|i| g.powi(-(i as i32)).fract()).collect();
        RdSequence { alpha, shift }
    }

    /// `replicates` independently shifted copies, shifts drawn from the seed.
    pub fn shifted(dim: usize, seed: u64, replicates: usize) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..replicates).map(|_| RdSequence::new(dim, (0..dim).map(|_| rng.gen()).collect())).collect()
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// The `n`-th point, written into `out`.
    pub fn point(&self, n: u64, out: &mut [f64]) {
        for ((o, a), s) in out.iter_mut().zip(&self.alpha).zip(&self.shift) {
            // n·α mod 1 with the integer part removed before adding the shift
            let t = (n as f64 * a).fract();
            *o = (t + s).fract();
        }
    }
}

/// Mean and standard error of replicate estimates.
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
