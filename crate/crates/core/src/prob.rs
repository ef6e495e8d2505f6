//! Finite-alphabet probability containers.
//!
//! All containers are immutable after construction and validate their
//! invariants eagerly, so downstream numeric code can assume well-formed
//! inputs. Probabilities are plain `f64`; rows of conditional tables live
//! on the probability simplex.

use crate::error::{Result, VendError};

/// Tolerance for "sums to one" checks at construction time.
pub const MASS_TOL: f64 = 1e-12;

/// A probability distribution over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    mass: Vec<f64>,
}

impl ProbVector {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() {
            return Err(VendError::InvalidDistribution("empty support".into()));
        }
        if let Some(p) = mass.iter().find(|&&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(VendError::InvalidDistribution(format!(
                "entry {p} is negative or non-finite"
            )));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(VendError::InvalidDistribution(format!(
                "mass sums to {total}, expected 1"
            )));
        }
        Ok(Self { mass })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            mass: vec![1.0 / n as f64; n],
        }
    }

    /// Degenerate distribution with all mass on `i`.
    pub fn point(n: usize, i: usize) -> Self {
        let mut mass = vec![0.0; n];
        mass[i] = 1.0;
        Self { mass }
    }

    pub fn alphabet_size(&self) -> usize {
        self.mass.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.mass
    }

    pub fn get(&self, i: usize) -> f64 {
        self.mass[i]
    }
}

/// A conditional distribution table: one simplex row per conditioning symbol.
///
/// Conditioning on a pair (x, a) is flattened to a single row index in
/// row-major order, i.e. `row = x * |A| + a` (x-major, then a). The same
/// convention applies to triples.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticKernel {
    rows: Vec<f64>,
    input_size: usize,
    output_size: usize,
}

/// Row-major flattening of a compound conditioning index (x, a).
pub fn pair_index(x: usize, a: usize, n_a: usize) -> usize {
    x * n_a + a
}

/// Row-major flattening of a compound conditioning index (x, z, a).
pub fn triple_index(x: usize, z: usize, a: usize, n_z: usize, n_a: usize) -> usize {
    (x * n_z + z) * n_a + a
}

impl StochasticKernel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let input_size = rows.len();
        if input_size == 0 {
            return Err(VendError::InvalidDistribution("kernel has no rows".into()));
        }
        let output_size = rows[0].len();
        let mut flat = Vec::with_capacity(input_size * output_size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != output_size {
                return Err(VendError::DimensionMismatch {
                    axis: "kernel row",
                    expected: output_size,
                    got: row.len(),
                });
            }
            ProbVector::new(row.clone()).map_err(|e| {
                VendError::InvalidDistribution(format!("kernel row {i}: {e}"))
            })?;
            flat.extend_from_slice(&row);
        }
        Ok(Self {
            rows: flat,
            input_size,
            output_size,
        })
    }

    /// Identity kernel on an alphabet of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut rows = vec![0.0; n * n];
        for i in 0..n {
            rows[i * n + i] = 1.0;
        }
        Self {
            rows,
            input_size: n,
            output_size: n,
        }
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(VendError::OutOfRange(format!("bsc crossover {p}")));
        }
        Self::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.output_size..(i + 1) * self.output_size]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i * self.output_size + j]
    }
}

/// Distortion matrix indexed (x, x_hat), nonnegative entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionMatrix {
    values: Vec<f64>,
    n_source: usize,
    n_repro: usize,
}

impl DistortionMatrix {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        let n_source = values.len();
        if n_source == 0 {
            return Err(VendError::Invalid("empty distortion matrix".into()));
        }
        let n_repro = values[0].len();
        let mut flat = Vec::with_capacity(n_source * n_repro);
        for row in &values {
            if row.len() != n_repro {
                return Err(VendError::DimensionMismatch {
                    axis: "distortion row",
                    expected: n_repro,
                    got: row.len(),
                });
            }
            if let Some(v) = row.iter().find(|&&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(VendError::OutOfRange(format!("distortion entry {v}")));
            }
            flat.extend_from_slice(row);
        }
        Ok(Self {
            values: flat,
            n_source,
            n_repro,
        })
    }

    pub fn hamming(n: usize) -> Self {
        let mut values = vec![1.0; n * n];
        for i in 0..n {
            values[i * n + i] = 0.0;
        }
        Self {
            values,
            n_source: n,
            n_repro: n,
        }
    }

    pub fn source_size(&self) -> usize {
        self.n_source
    }

    pub fn repro_size(&self) -> usize {
        self.n_repro
    }

    pub fn get(&self, x: usize, xhat: usize) -> f64 {
        self.values[x * self.n_repro + xhat]
    }

    /// True when every source row has a unique zero on the diagonal and all
    /// off-diagonal entries are positive; the lossless (d = 0) point is then
    /// equivalent to exact reconstruction.
    pub fn is_hamming_like(&self) -> bool {
        if self.n_source != self.n_repro {
            return false;
        }
        for x in 0..self.n_source {
            for xh in 0..self.n_repro {
                let v = self.get(x, xh);
                if x == xh && v != 0.0 {
                    return false;
                }
                if x != xh && v <= 0.0 {
                    return false;
                }
            }
        }
        true
    }
}

/// Per-action cost vector, nonnegative entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector {
    values: Vec<f64>,
}

impl CostVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(VendError::Invalid("empty cost vector".into()));
        }
        if let Some(v) = values.iter().find(|&&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(VendError::OutOfRange(format!("cost entry {v}")));
        }
        Ok(Self { values })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            values: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, a: usize) -> f64 {
        self.values[a]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prob_vector_rejects_bad_mass() {
        assert!(ProbVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbVector::new(vec![-0.1, 1.1]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
        assert!(ProbVector::new(vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn kernel_rows_validated() {
        assert!(StochasticKernel::new(vec![vec![0.5, 0.5], vec![0.9, 0.2]]).is_err());
        let k = StochasticKernel::new(vec![vec![1.0, 0.0], vec![0.3, 0.7]]).unwrap();
        assert_eq!(k.get(1, 1), 0.7);
    }

    #[test]
    fn pair_index_is_row_major() {
        assert_eq!(pair_index(1, 0, 2), 2);
        assert_eq!(pair_index(0, 1, 2), 1);
        assert_eq!(triple_index(1, 1, 1, 2, 2), 7);
    }

    #[test]
    fn hamming_like_detection() {
        assert!(DistortionMatrix::hamming(3).is_hamming_like());
        let m = DistortionMatrix::new(vec![vec![0.0, 1.0], vec![1.0, 0.5]]).unwrap();
        assert!(!m.is_hamming_like());
    }
}
