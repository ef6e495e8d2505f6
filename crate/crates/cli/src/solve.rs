//! Dispatch from a parsed problem document to the matching computation,
//! producing one emitted row per requested (d, c) point.

use crate::doc::{ParsedProblem, ProblemDocument};
use crate::emit::CurveEmission;
use vendinfo::{
    encoder_bounds, encoder_lossless_rate, gaussian_rdc, greedy_rate, lossless_rate_decoder,
    markov_rdc, rdc_causal, rdc_decoder, rdc_independent, rdc_indirect, timeshare_bound,
    GaussianSpec, Mode, ProblemSpec, SolverConfig, VendError,
};

/// Maps infeasible-point errors to the emission marker and keeps real
/// failures as errors.
fn feasible(value: Result<f64, VendError>) -> Result<Option<f64>, String> {
    match value {
        Ok(v) => Ok(Some(v)),
        Err(VendError::Infeasible(_)) => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

/// Solves a document over its (d, c) grids and assembles the emission
/// table. Grids passed on the command line should already be substituted
/// into the document before calling this.
pub fn solve_document(doc: &ProblemDocument, base_cfg: &SolverConfig) -> Result<CurveEmission, String> {
    let outcome = doc.build(base_cfg)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let cfg = outcome.solver;
    match &outcome.problem {
        ParsedProblem::Gaussian { var_x, var_n } => {
            let mut emission = CurveEmission::new(&doc.name, &cfg, &["d", "c", "rate"]);
            for &d in &outcome.d_grid {
                for &c in &outcome.c_grid {
                    let rate = if d > 0.0 && c >= 0.0 {
                        Some(gaussian_rdc(
                            &GaussianSpec::new(*var_x, *var_n, d, c).map_err(|e| e.to_string())?,
                        ))
                    } else {
                        None
                    };
                    emission.push(vec![Some(d), Some(c), rate]);
                }
            }
            Ok(emission)
        }
        ParsedProblem::Discrete(spec) => {
            solve_discrete(&doc.name, spec, &outcome.d_grid, &outcome.c_grid, &cfg)
        }
    }
}

fn solve_discrete(
    name: &str,
    spec: &ProblemSpec,
    d_grid: &[f64],
    c_grid: &[f64],
    cfg: &SolverConfig,
) -> Result<CurveEmission, String> {
    match spec.mode() {
        Mode::Decoder => {
            let mut emission =
                CurveEmission::new(name, cfg, &["d", "c", "rate", "greedy", "timeshare"]);
            for &d in d_grid {
                for &c in c_grid {
                    let rate = feasible(decoder_rate(spec, d, c, cfg))?;
                    let greedy = feasible(greedy_rate(spec, d, cfg))?;
                    let timeshare = feasible(timeshare_bound(spec, d, c, cfg))?;
                    emission.push(vec![Some(d), Some(c), rate, greedy, timeshare]);
                }
            }
            Ok(emission)
        }
        Mode::DecoderIndependent => {
            simple_sweep(name, spec, d_grid, c_grid, cfg, |s, d, c, k| {
                rdc_independent(s, d, c, k)
            })
        }
        Mode::Causal => simple_sweep(name, spec, d_grid, c_grid, cfg, rdc_causal),
        Mode::Indirect => simple_sweep(name, spec, d_grid, c_grid, cfg, rdc_indirect),
        Mode::EncoderMarkov => simple_sweep(name, spec, d_grid, c_grid, cfg, markov_rdc),
        Mode::EncoderLossless => {
            let mut emission = CurveEmission::new(name, cfg, &["d", "c", "rate"]);
            for &c in c_grid {
                let rate = feasible(encoder_lossless_rate(spec, c, cfg))?;
                emission.push(vec![Some(0.0), Some(c), rate]);
            }
            Ok(emission)
        }
        Mode::EncoderBounds => {
            let mut emission = CurveEmission::new(
                name,
                cfg,
                &["d", "c", "lower", "upper_closed", "upper_open", "certified"],
            );
            for &d in d_grid {
                for &c in c_grid {
                    match encoder_bounds(spec, d, c, cfg) {
                        Ok(b) => emission.push(vec![
                            Some(d),
                            Some(c),
                            Some(b.lower),
                            Some(b.upper_closed_switch),
                            Some(b.upper_open_switch),
                            Some(if b.certified_exact { 1.0 } else { 0.0 }),
                        ]),
                        Err(VendError::Infeasible(_)) => {
                            emission.push(vec![Some(d), Some(c), None, None, None, None])
                        }
                        Err(e) => return Err(e.to_string()),
                    }
                }
            }
            Ok(emission)
        }
        Mode::Gaussian => Err("gaussian documents carry no discrete kernels".into()),
    }
}

/// Decoder-action rate with the exact lossless objective substituted at
/// d = 0 on error-indicating distortion measures.
fn decoder_rate(spec: &ProblemSpec, d: f64, c: f64, cfg: &SolverConfig) -> Result<f64, VendError> {
    if d <= 1e-12 && spec.rho().is_hamming_like() {
        lossless_rate_decoder(spec, c, cfg)
    } else {
        rdc_decoder(spec, d, c, cfg)
    }
}

fn simple_sweep(
    name: &str,
    spec: &ProblemSpec,
    d_grid: &[f64],
    c_grid: &[f64],
    cfg: &SolverConfig,
    f: fn(&ProblemSpec, f64, f64, &SolverConfig) -> Result<f64, VendError>,
) -> Result<CurveEmission, String> {
    let mut emission = CurveEmission::new(name, cfg, &["d", "c", "rate"]);
    for &d in d_grid {
        for &c in c_grid {
            let rate = feasible(f(spec, d, c, cfg))?;
            emission.push(vec![Some(d), Some(c), rate]);
        }
    }
    Ok(emission)
}
