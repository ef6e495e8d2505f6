//! Problem descriptions for the action-dependent side-information settings.

use crate::error::{Result, VendError};
use crate::prob::{pair_index, CostVector, DistortionMatrix, ProbVector, StochasticKernel};

/// Which operational setting a [`ProblemSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Actions chosen by the decoder after seeing the index.
    Decoder,
    /// Actions chosen by the decoder before the index (A independent of X).
    DecoderIndependent,
    /// Reconstruction restricted to causal dependence on the side information.
    Causal,
    /// Encoder observes a noisy version Z of the source.
    Indirect,
    /// Actions at the encoder, lossless reconstruction.
    EncoderLossless,
    /// Actions at the encoder, Markov form Y-A-X.
    EncoderMarkov,
    /// Actions at the encoder, general upper/lower bounds.
    EncoderBounds,
    /// Continuous Gaussian setting (closed forms only; no discrete kernels).
    Gaussian,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Decoder => "decoder",
            Mode::DecoderIndependent => "decoder-independent",
            Mode::Causal => "causal",
            Mode::Indirect => "indirect",
            Mode::EncoderLossless => "encoder-lossless",
            Mode::EncoderMarkov => "encoder-markov",
            Mode::EncoderBounds => "encoder-bounds",
            Mode::Gaussian => "gaussian",
        }
    }

    pub fn parse(s: &str) -> Result<Mode> {
        Ok(match s {
            "decoder" => Mode::Decoder,
            "decoder-independent" => Mode::DecoderIndependent,
            "causal" => Mode::Causal,
            "indirect" => Mode::Indirect,
            "encoder-lossless" => Mode::EncoderLossless,
            "encoder-markov" => Mode::EncoderMarkov,
            "encoder-bounds" => Mode::EncoderBounds,
            "gaussian" => Mode::Gaussian,
            other => return Err(VendError::Invalid(format!("unknown mode `{other}`"))),
        })
    }
}

/// Rejects operations invoked on a spec built for a different setting.
pub(crate) fn require_mode(spec: &ProblemSpec, want: Mode) -> Result<()> {
    if spec.mode() != want {
        return Err(VendError::Invalid(format!(
            "operation requires mode `{}`, got `{}`",
            want.as_str(),
            spec.mode().as_str()
        )));
    }
    Ok(())
}

/// A finite-alphabet instance: source, side-information channel, distortion
/// and cost functions, plus the optional noisy-observation kernels for the
/// indirect setting.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    px: ProbVector,
    p_y_given_xa: StochasticKernel,
    rho: DistortionMatrix,
    lambda: CostVector,
    p_z_given_x: Option<StochasticKernel>,
    p_y_given_xza: Option<StochasticKernel>,
    mode: Mode,
}

impl ProblemSpec {
    pub fn new(
        px: ProbVector,
        p_y_given_xa: StochasticKernel,
        rho: DistortionMatrix,
        lambda: CostVector,
        mode: Mode,
    ) -> Result<Self> {
        let spec = Self {
            px,
            p_y_given_xa,
            rho,
            lambda,
            p_z_given_x: None,
            p_y_given_xza: None,
            mode,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn new_indirect(
        px: ProbVector,
        p_z_given_x: StochasticKernel,
        p_y_given_xza: StochasticKernel,
        p_y_given_xa: StochasticKernel,
        rho: DistortionMatrix,
        lambda: CostVector,
    ) -> Result<Self> {
        let spec = Self {
            px,
            p_y_given_xa,
            rho,
            lambda,
            p_z_given_x: Some(p_z_given_x),
            p_y_given_xza: Some(p_y_given_xza),
            mode: Mode::Indirect,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let n_x = self.n_x();
        let n_a = self.n_a();
        if self.p_y_given_xa.input_size() != n_x * n_a {
            return Err(VendError::DimensionMismatch {
                axis: "P_{Y|X,A} rows",
                expected: n_x * n_a,
                got: self.p_y_given_xa.input_size(),
            });
        }
        if self.rho.source_size() != n_x {
            return Err(VendError::DimensionMismatch {
                axis: "distortion rows",
                expected: n_x,
                got: self.rho.source_size(),
            });
        }
        match (self.mode, &self.p_z_given_x, &self.p_y_given_xza) {
            (Mode::Indirect, Some(pzx), Some(pyxza)) => {
                if pzx.input_size() != n_x {
                    return Err(VendError::DimensionMismatch {
                        axis: "P_{Z|X} rows",
                        expected: n_x,
                        got: pzx.input_size(),
                    });
                }
                let n_z = pzx.output_size();
                if pyxza.input_size() != n_x * n_z * n_a {
                    return Err(VendError::DimensionMismatch {
                        axis: "P_{Y|X,Z,A} rows",
                        expected: n_x * n_z * n_a,
                        got: pyxza.input_size(),
                    });
                }
                if pyxza.output_size() != self.n_y() {
                    return Err(VendError::DimensionMismatch {
                        axis: "P_{Y|X,Z,A} columns",
                        expected: self.n_y(),
                        got: pyxza.output_size(),
                    });
                }
            }
            (Mode::Indirect, _, _) => {
                return Err(VendError::Invalid(
                    "indirect mode requires P_{Z|X} and P_{Y|X,Z,A}".into(),
                ))
            }
            (_, None, None) => {}
            _ => {
                return Err(VendError::Invalid(
                    "indirect kernels supplied outside indirect mode".into(),
                ))
            }
        }
        Ok(())
    }

    pub fn n_x(&self) -> usize {
        self.px.alphabet_size()
    }

    pub fn n_a(&self) -> usize {
        self.lambda.len()
    }

    pub fn n_y(&self) -> usize {
        self.p_y_given_xa.output_size()
    }

    pub fn n_z(&self) -> usize {
        self.p_z_given_x.as_ref().map_or(0, |k| k.output_size())
    }

    pub fn n_repro(&self) -> usize {
        self.rho.repro_size()
    }

    pub fn px(&self) -> &ProbVector {
        &self.px
    }

    pub fn p_y_given_xa(&self) -> &StochasticKernel {
        &self.p_y_given_xa
    }

    pub fn rho(&self) -> &DistortionMatrix {
        &self.rho
    }

    pub fn lambda(&self) -> &CostVector {
        &self.lambda
    }

    pub fn p_z_given_x(&self) -> Option<&StochasticKernel> {
        self.p_z_given_x.as_ref()
    }

    pub fn p_y_given_xza(&self) -> Option<&StochasticKernel> {
        self.p_y_given_xza.as_ref()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Side-information channel for a single fixed action.
    pub fn channel_for_action(&self, a: usize) -> Result<StochasticKernel> {
        let n_a = self.n_a();
        let rows: Vec<Vec<f64>> = (0..self.n_x())
            .map(|x| self.p_y_given_xa.row(pair_index(x, a, n_a)).to_vec())
            .collect();
        StochasticKernel::new(rows)
    }

    /// The loosest binding cost value ("unconstrained" is encoded as
    /// max_a Lambda(a), never as infinity).
    pub fn unconstrained_cost(&self) -> f64 {
        self.lambda.max()
    }
}
