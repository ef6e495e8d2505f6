//! Dense joint distributions over up to five named axes, with the
//! information measures used by every solver module.

use crate::error::{Result, VendError};
use crate::info::entropy_slice;
use crate::prob::{pair_index, ProbVector, StochasticKernel, MASS_TOL};

/// A joint probability tensor with named axes (row-major storage).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    dims: Vec<usize>,
    labels: Vec<&'static str>,
    data: Vec<f64>,
}

impl JointDist {
    pub fn new(dims: Vec<usize>, labels: Vec<&'static str>, data: Vec<f64>) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if labels.len() != dims.len() {
            return Err(VendError::DimensionMismatch {
                axis: "labels",
                expected: dims.len(),
                got: labels.len(),
            });
        }
        if data.len() != expected {
            return Err(VendError::DimensionMismatch {
                axis: "data",
                expected,
                got: data.len(),
            });
        }
        if let Some(p) = data.iter().find(|&&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(VendError::InvalidDistribution(format!(
                "joint entry {p} is negative or non-finite"
            )));
        }
        let total: f64 = data.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(VendError::InvalidDistribution(format!(
                "joint mass sums to {total}"
            )));
        }
        Ok(Self { dims, labels, data })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn axis_labels(&self) -> &[&'static str] {
        &self.labels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn num_axes(&self) -> usize {
        self.dims.len()
    }

    fn check_axes(&self, axes: &[usize]) -> Result<()> {
        for &ax in axes {
            if ax >= self.dims.len() {
                return Err(VendError::DimensionMismatch {
                    axis: "axis index",
                    expected: self.dims.len(),
                    got: ax,
                });
            }
        }
        Ok(())
    }

    /// Marginal mass over the given axes, in the given order.
    pub fn marginal(&self, axes: &[usize]) -> Vec<f64> {
        let out_len: usize = axes.iter().map(|&a| self.dims[a]).product();
        let mut out = vec![0.0; out_len.max(1)];
        // stride of each tensor axis in the flat index
        let n = self.dims.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        let mut coords = vec![0usize; n];
        for (flat, &p) in self.data.iter().enumerate() {
            let mut rem = flat;
            for i in 0..n {
                coords[i] = rem / strides[i];
                rem %= strides[i];
            }
            let mut idx = 0usize;
            for &a in axes {
                idx = idx * self.dims[a] + coords[a];
            }
            out[idx] += p;
        }
        out
    }

    /// Entropy (bits) of the marginal over `axes`; empty set gives 0.
    pub fn entropy_axes(&self, axes: &[usize]) -> f64 {
        if axes.is_empty() {
            return 0.0;
        }
        entropy_slice(&self.marginal(axes))
    }

    /// Mutual information I(A; B) in bits between two disjoint axis sets.
    pub fn mutual_information(&self, axes_a: &[usize], axes_b: &[usize]) -> Result<f64> {
        self.conditional_mutual_information(axes_a, axes_b, &[])
    }

    /// Conditional mutual information I(A; B | C) in bits.
    pub fn conditional_mutual_information(
        &self,
        axes_a: &[usize],
        axes_b: &[usize],
        axes_cond: &[usize],
    ) -> Result<f64> {
        self.check_axes(axes_a)?;
        self.check_axes(axes_b)?;
        self.check_axes(axes_cond)?;
        let mut seen = vec![false; self.dims.len()];
        for &ax in axes_a.iter().chain(axes_b).chain(axes_cond) {
            if seen[ax] {
                return Err(VendError::AxisOverlap);
            }
            seen[ax] = true;
        }
        let ac: Vec<usize> = axes_a.iter().chain(axes_cond).cloned().collect();
        let bc: Vec<usize> = axes_b.iter().chain(axes_cond).cloned().collect();
        let abc: Vec<usize> = axes_a.iter().chain(axes_b).chain(axes_cond).cloned().collect();
        let v = self.entropy_axes(&ac) + self.entropy_axes(&bc)
            - self.entropy_axes(&abc)
            - self.entropy_axes(axes_cond);
        // clamp tiny negative round-off
        Ok(if v < 0.0 && v > -1e-11 { 0.0 } else { v })
    }

    /// Conditional entropy H(A | C) in bits.
    pub fn conditional_entropy(&self, axes_a: &[usize], axes_cond: &[usize]) -> f64 {
        let all: Vec<usize> = axes_a.iter().chain(axes_cond).cloned().collect();
        self.entropy_axes(&all) - self.entropy_axes(axes_cond)
    }
}

/// Builds the four-axis joint P(x, a, u, y) = P_X(x) P_{A,U|X}(a,u|x) P_{Y|X,A}(y|x,a).
///
/// The (a, u) column index of `p_au_given_x` is flattened a-major, then u;
/// the (x, a) row index of `p_y_given_xa` is flattened x-major, then a.
/// Alphabet sizes are inferred: |A| = rows(p_y_given_xa) / |X| and
/// |U| = cols(p_au_given_x) / |A|.
pub fn factorize(
    px: &ProbVector,
    p_au_given_x: &StochasticKernel,
    p_y_given_xa: &StochasticKernel,
) -> Result<JointDist> {
    let n_x = px.alphabet_size();
    if p_au_given_x.input_size() != n_x {
        return Err(VendError::DimensionMismatch {
            axis: "P_{A,U|X} rows",
            expected: n_x,
            got: p_au_given_x.input_size(),
        });
    }
    if p_y_given_xa.input_size() % n_x != 0 {
        return Err(VendError::DimensionMismatch {
            axis: "P_{Y|X,A} rows",
            expected: n_x,
            got: p_y_given_xa.input_size(),
        });
    }
    let n_a = p_y_given_xa.input_size() / n_x;
    if p_au_given_x.output_size() % n_a != 0 {
        return Err(VendError::DimensionMismatch {
            axis: "P_{A,U|X} columns",
            expected: n_a,
            got: p_au_given_x.output_size(),
        });
    }
    let n_u = p_au_given_x.output_size() / n_a;
    let n_y = p_y_given_xa.output_size();
    let mut data = vec![0.0; n_x * n_a * n_u * n_y];
    for x in 0..n_x {
        for a in 0..n_a {
            for u in 0..n_u {
                let q = px.get(x) * p_au_given_x.get(x, pair_index(a, u, n_u));
                if q == 0.0 {
                    continue;
                }
                for y in 0..n_y {
                    data[((x * n_a + a) * n_u + u) * n_y + y] =
                        q * p_y_given_xa.get(pair_index(x, a, n_a), y);
                }
            }
        }
    }
    JointDist::new(vec![n_x, n_a, n_u, n_y], vec!["X", "A", "U", "Y"], data)
}
