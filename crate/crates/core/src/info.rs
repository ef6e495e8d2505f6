//! Scalar information measures, base-2 throughout.
//!
//! Conventions: 0 log 0 = 0 and 0 log(0/0) = 0. Probabilities below
//! [`ZERO_FLOOR`] are treated as exact zeros in log computations.

use crate::error::{Result, VendError};
use crate::prob::ProbVector;

/// Probabilities below this are treated as exact zeros in log computations.
pub const ZERO_FLOOR: f64 = 1e-14;

/// p * log2(p) with the 0 log 0 = 0 convention.
#[inline]
pub fn xlog2x(p: f64) -> f64 {
    if p <= ZERO_FLOOR {
        0.0
    } else {
        p * p.log2()
    }
}

/// Shannon entropy of a raw mass slice, in bits.
pub fn entropy_slice(mass: &[f64]) -> f64 {
    -mass.iter().map(|&p| xlog2x(p)).sum::<f64>()
}

/// Shannon entropy H(p) in bits.
pub fn entropy(p: &ProbVector) -> f64 {
    entropy_slice(p.as_slice())
}

/// Binary entropy function h(p) in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(VendError::OutOfRange(format!("binary_entropy({p})")));
    }
    Ok(-xlog2x(p) - xlog2x(1.0 - p))
}

/// Rate-distortion function of a Bernoulli(p) source under Hamming
/// distortion: max(h(p) - h(d), 0).
pub fn bernoulli_rd(p: f64, d: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&d) {
        return Err(VendError::OutOfRange(format!("bernoulli_rd({p}, {d})")));
    }
    Ok((binary_entropy(p)? - binary_entropy(d)?).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_degenerate() {
        let p = ProbVector::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(entropy(&p), 0.0);
    }

    #[test]
    fn entropy_fair_bit() {
        let p = ProbVector::new(vec![0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(entropy(&p), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn entropy_quarter() {
        // direct evaluation of -sum p log2 p for (1/4, 3/4)
        let p = ProbVector::new(vec![0.25, 0.75]).unwrap();
        assert_abs_diff_eq!(entropy(&p), 0.8112781244591328, epsilon = 1e-12);
    }

    #[test]
    fn entropy_bounded_by_log_alphabet() {
        let p = ProbVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let h = entropy(&p);
        assert!(h >= 0.0 && h <= (3.0f64).log2() + 1e-12);
    }

    #[test]
    fn binary_entropy_values() {
        assert_abs_diff_eq!(
            binary_entropy(0.4).unwrap(),
            0.9709505944546686,
            epsilon = 1e-12
        );
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn bernoulli_rd_values() {
        // Fig. 5 caption number
        assert_abs_diff_eq!(
            bernoulli_rd(0.5, 0.25).unwrap(),
            0.18872187554086717,
            epsilon = 1e-12
        );
        assert_eq!(bernoulli_rd(0.5, 0.5).unwrap(), 0.0);
        // clamp keeps the rate nonnegative past the source entropy
        assert_eq!(bernoulli_rd(0.25, 0.4).unwrap(), 0.0);
        assert!(bernoulli_rd(0.5, -0.1).is_err());
    }
}
