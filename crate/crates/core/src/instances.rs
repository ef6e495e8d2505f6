//! Builders for the worked example instances and for random test
//! instances.

use crate::error::Result;
use crate::prob::{CostVector, DistortionMatrix, ProbVector, StochasticKernel};
use crate::spec::{Mode, ProblemSpec};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

/// Fair binary source where action 0 routes the side information through a
/// Z-channel(delta) (crossover from 1 to 0) and action 1 through an
/// S-channel(delta) (crossover from 0 to 1). Action costs are (0, 1).
pub fn zs(delta: f64, mode: Mode) -> Result<ProblemSpec> {
    let px = ProbVector::uniform(2);
    // rows indexed (x, a)
    let p_y_given_xa = StochasticKernel::new(vec![
        vec![1.0, 0.0],                 // x = 0, a = 0 (Z): clean
        vec![1.0 - delta, delta],       // x = 0, a = 1 (S): flips to 1
        vec![delta, 1.0 - delta],       // x = 1, a = 0 (Z): flips to 0
        vec![0.0, 1.0],                 // x = 1, a = 1 (S): clean
    ])?;
    ProblemSpec::new(
        px,
        p_y_given_xa,
        DistortionMatrix::hamming(2),
        CostVector::new(vec![0.0, 1.0])?,
        mode,
    )
}

/// Ternary source (-1 w.p. 1/4, 0 w.p. 1/2, 1 w.p. 1/4); action 1 buys a
/// binary measurement Y in {-1, 1} that reveals the sign exactly and
/// flips a fair coin on 0; action 0 yields a blank symbol. Unit
/// observation cost, Hamming distortion. Y alphabet order: (-1, 1, blank).
pub fn ternary() -> Result<ProblemSpec> {
    let px = ProbVector::new(vec![0.25, 0.5, 0.25])?;
    let blank = vec![0.0, 0.0, 1.0];
    let p_y_given_xa = StochasticKernel::new(vec![
        blank.clone(),
        vec![1.0, 0.0, 0.0], // x = -1 observed
        blank.clone(),
        vec![0.5, 0.5, 0.0], // x = 0 observed
        blank,
        vec![0.0, 1.0, 0.0], // x = 1 observed
    ])?;
    ProblemSpec::new(
        px,
        p_y_given_xa,
        DistortionMatrix::hamming(3),
        CostVector::new(vec![0.0, 1.0])?,
        Mode::Decoder,
    )
}

/// Observe-or-not with perfect side information: fair binary source,
/// action 1 reveals X itself, action 0 a blank symbol. Y alphabet order:
/// (0, 1, blank).
pub fn observe_or_not_identity(mode: Mode) -> Result<ProblemSpec> {
    let px = ProbVector::uniform(2);
    let blank = vec![0.0, 0.0, 1.0];
    let p_y_given_xa = StochasticKernel::new(vec![
        blank.clone(),
        vec![1.0, 0.0, 0.0],
        blank,
        vec![0.0, 1.0, 0.0],
    ])?;
    ProblemSpec::new(
        px,
        p_y_given_xa,
        DistortionMatrix::hamming(2),
        CostVector::new(vec![0.0, 1.0])?,
        mode,
    )
}

/// Observe-or-not where the observed symbol itself passes through an
/// erasure channel with probability `e`: action 1 shows the (possibly
/// erased) source, action 0 shows nothing. Y alphabet order: (0, 1, blank).
pub fn observe_or_not_erasure(e: f64, mode: Mode) -> Result<ProblemSpec> {
    let px = ProbVector::uniform(2);
    let blank = vec![0.0, 0.0, 1.0];
    let p_y_given_xa = StochasticKernel::new(vec![
        blank.clone(),
        vec![1.0 - e, 0.0, e],
        blank,
        vec![0.0, 1.0 - e, e],
    ])?;
    ProblemSpec::new(
        px,
        p_y_given_xa,
        DistortionMatrix::hamming(2),
        CostVector::new(vec![0.0, 1.0])?,
        mode,
    )
}

/// Fair binary source with Markov side information Y - A - X: the binary
/// action is the input of a BSC(p) whose output the decoder sees. Action
/// costs (0, 1), Hamming distortion.
pub fn markov_bsc(p: f64) -> Result<ProblemSpec> {
    let px = ProbVector::uniform(2);
    let row_a0 = vec![1.0 - p, p];
    let row_a1 = vec![p, 1.0 - p];
    let p_y_given_xa = StochasticKernel::new(vec![
        row_a0.clone(),
        row_a1.clone(),
        row_a0,
        row_a1,
    ])?;
    ProblemSpec::new(
        px,
        p_y_given_xa,
        DistortionMatrix::hamming(2),
        CostVector::new(vec![0.0, 1.0])?,
        Mode::EncoderMarkov,
    )
}

/// Indirect observe-or-not: the encoder sees Z, a BSC(q) corruption of the
/// fair binary X; action 1 shows Z to the decoder, action 0 a blank
/// symbol. Y alphabet order: (0, 1, blank); unit observation cost.
pub fn indirect_bsc(q: f64) -> Result<ProblemSpec> {
    let px = ProbVector::uniform(2);
    let p_z_given_x = StochasticKernel::bsc(q)?;
    let blank = vec![0.0, 0.0, 1.0];
    // rows indexed (x, z, a); Y depends only on (z, a)
    let mut rows = Vec::new();
    for _x in 0..2 {
        for z in 0..2 {
            rows.push(blank.clone());
            let mut show = vec![0.0, 0.0, 0.0];
            show[z] = 1.0;
            rows.push(show);
        }
    }
    let p_y_given_xza = StochasticKernel::new(rows)?;
    // marginal P_{Y|X,A} = sum_z P(z|x) P(y|x,z,a)
    let mut marginal = Vec::new();
    for x in 0..2 {
        for a in 0..2 {
            if a == 0 {
                marginal.push(blank.clone());
            } else {
                let mut row = vec![0.0; 3];
                for z in 0..2 {
                    row[z] += p_z_given_x.get(x, z);
                }
                marginal.push(row);
            }
        }
    }
    ProblemSpec::new_indirect(
        px,
        p_z_given_x,
        p_y_given_xza,
        StochasticKernel::new(marginal)?,
        DistortionMatrix::hamming(2),
        CostVector::new(vec![0.0, 1.0])?,
    )
}

fn random_simplex(rng: &mut ChaCha20Rng, n: usize, floor: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| floor - f64::ln(1.0 - rng.gen::<f64>())).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Random binary instance (|X| = |A| = |Y| = 2, Hamming distortion, action
/// costs (0, u) with u uniform): entries kept away from the simplex
/// boundary so information quantities stay well-conditioned.
pub fn random_small(rng: &mut ChaCha20Rng, mode: Mode) -> Result<ProblemSpec> {
    let px = ProbVector::new(random_simplex(rng, 2, 0.15))?;
    let rows: Vec<Vec<f64>> = (0..4).map(|_| random_simplex(rng, 2, 0.05)).collect();
    let p_y_given_xa = StochasticKernel::new(rows)?;
    ProblemSpec::new(
        px,
        p_y_given_xa,
        DistortionMatrix::hamming(2),
        CostVector::new(vec![0.0, rng.gen::<f64>()])?,
        mode,
    )
}
