//! Rate-distortion-cost functions when the decoder takes the actions,
//! together with the greedy and time-sharing baselines.

use crate::classic::{joint_from_channel, slepian_wolf_rate, wyner_ziv_rate};
use crate::error::{Result, VendError};
use crate::prob::CostVector;
use crate::solver::{
    constrained_rate, min_distortion, minimize_instance, Instance, LagrangeWeights, Objective,
    PolicyPoint, SolverConfig,
};
use crate::spec::{require_mode, Mode, ProblemSpec};

/// R(d, c) with decoder-side actions: min I(X;A) + I(X;U|Y,A) over
/// P_{A,U|X} with |U| = |X||A| + 2, subject to the distortion and cost
/// budgets.
pub fn rdc_decoder(spec: &ProblemSpec, d: f64, c: f64, cfg: &SolverConfig) -> Result<f64> {
    require_mode(spec, Mode::Decoder)?;
    constrained_rate(&Instance::new(spec, Objective::DecoderActions), d, c, cfg)
}

/// Lossless specialization min I(X;A) + H(X|Y,A) over P_{A|X} with
/// E Lambda(A) <= c; no auxiliary variable is involved.
pub fn lossless_rate_decoder(spec: &ProblemSpec, c: f64, cfg: &SolverConfig) -> Result<f64> {
    require_mode(spec, Mode::Decoder)?;
    constrained_rate(&Instance::new(spec, Objective::DecoderLossless), 0.0, c, cfg)
}

/// The minimizing action policy of the lossless objective with no cost
/// constraint; exposes the optimal P_{A|X} kernel.
pub fn lossless_policy_unconstrained(
    spec: &ProblemSpec,
    cfg: &SolverConfig,
) -> Result<PolicyPoint> {
    require_mode(spec, Mode::Decoder)?;
    let inst = Instance::new(spec, Objective::DecoderLossless);
    minimize_instance(&inst, &LagrangeWeights::zero(), cfg, None)
}

/// Greedy baseline: the single best fixed action, coded in the Wyner-Ziv
/// sense (Slepian-Wolf when d = 0 under a Hamming-like distortion).
pub fn greedy_rate(spec: &ProblemSpec, d: f64, cfg: &SolverConfig) -> Result<f64> {
    let mut best = f64::INFINITY;
    for a in 0..spec.n_a() {
        let channel = spec.channel_for_action(a)?;
        let rate = if d <= 1e-15 && spec.rho().is_hamming_like() {
            slepian_wolf_rate(spec.px(), &channel)?
        } else {
            let joint = joint_from_channel(spec.px(), &channel)?;
            wyner_ziv_rate(&joint, spec.rho(), d, cfg)?
        };
        best = best.min(rate);
    }
    Ok(best)
}

/// Per-action Wyner-Ziv sub-instance (single action, zero cost).
fn single_action_spec(spec: &ProblemSpec, a: usize) -> Result<ProblemSpec> {
    ProblemSpec::new(
        spec.px().clone(),
        spec.channel_for_action(a)?,
        spec.rho().clone(),
        CostVector::zero(1),
        Mode::Decoder,
    )
}

fn lambda_grid(cfg: &SolverConfig) -> Vec<f64> {
    let mut grid = vec![0.0];
    let n = cfg.lambda_points.max(2);
    for i in 0..n {
        grid.push(cfg.lambda_min * (cfg.lambda_max / cfg.lambda_min).powf(i as f64 / (n - 1) as f64));
    }
    grid
}

/// Time-sharing upper bound: splitting the block across fixed actions and
/// Wyner-Ziv coding each sub-block at its own distortion level, optimized
/// over the action distribution and the distortion split.
pub fn timeshare_bound(spec: &ProblemSpec, d: f64, c: f64, cfg: &SolverConfig) -> Result<f64> {
    cfg.validate()?;
    let n_a = spec.n_a();
    let base = Instance::new(spec, Objective::DecoderActions);
    if d < min_distortion(&base) - 1e-9 {
        return Err(VendError::Infeasible(format!(
            "distortion target {d} below the full-information minimum"
        )));
    }
    let cmin = spec.lambda().min();
    if c < cmin - 1e-12 {
        return Err(VendError::Infeasible(format!(
            "cost target {c} below the cheapest action cost {cmin}"
        )));
    }
    let lds = lambda_grid(cfg);
    // per-action achievable (rate, distortion) support points, pooled
    // across the whole slope sweep; pooling lets a point found at one
    // slope repair an under-converged solve at another
    let mut points: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n_a];
    for a in 0..n_a {
        let sub = single_action_spec(spec, a)?;
        let inst = Instance::with_aux(&sub, Objective::DecoderActions, spec.n_x() + 1);
        // ascending and descending passes: warm-chaining shows hysteresis,
        // so the two sweeps populate different branches of the curve
        for pass in 0..2 {
            let mut warm: Option<Vec<Vec<f64>>> = None;
            let order: Vec<f64> = if pass == 0 {
                lds.clone()
            } else {
                lds.iter().rev().copied().collect()
            };
            for &ld in &order {
                let w = LagrangeWeights {
                    lambda_d: ld,
                    lambda_c: 0.0,
                };
                let p = minimize_instance(&inst, &w, cfg, warm.as_deref())?;
                warm = Some(
                    p.kernels
                        .iter()
                        .flat_map(|kr| {
                            (0..kr.input_size()).map(|i| kr.row(i).to_vec()).collect::<Vec<_>>()
                        })
                        .collect(),
                );
                points[a].push((p.rate, p.distortion));
            }
        }
    }
    // v_a(ld) = min over pooled points of rate + ld * distortion
    let v = |a: usize, ld: f64| -> f64 {
        points[a]
            .iter()
            .map(|&(r, t)| r + ld * t)
            .fold(f64::INFINITY, f64::min)
    };
    // dual value at slope ld: exact maximization over lc >= 0 of the
    // concave piecewise-linear min_a [v_a + lc Lambda(a)] - ld d - lc c;
    // the maximum sits at lc = 0, the cap, or a pairwise intersection
    let g = |ld: f64| -> f64 {
        let vals: Vec<f64> = (0..n_a).map(|a| v(a, ld)).collect();
        let mut candidates = vec![0.0, cfg.lambda_max];
        for a in 0..n_a {
            for b in (a + 1)..n_a {
                let denom = spec.lambda().get(a) - spec.lambda().get(b);
                if denom.abs() > 1e-15 {
                    let lc = (vals[b] - vals[a]) / denom;
                    if lc > 0.0 && lc.is_finite() {
                        candidates.push(lc.min(cfg.lambda_max));
                    }
                }
            }
        }
        let mut best = f64::NEG_INFINITY;
        for &lc in &candidates {
            let inner = (0..n_a)
                .map(|a| vals[a] + lc * spec.lambda().get(a))
                .fold(f64::INFINITY, f64::min);
            best = best.max(inner - ld * d - lc * c);
        }
        best
    };
    // coarse scan over the slope grid, then golden-section refinement of
    // the concave profile around the incumbent
    let mut best = 0.0f64;
    let mut kbest = 0usize;
    for (k, &ld) in lds.iter().enumerate() {
        let gv = g(ld);
        if gv > best {
            best = gv;
            kbest = k;
        }
    }
    let mut lo = if kbest == 0 { 0.0 } else { lds[kbest - 1] };
    let mut hi = if kbest + 1 < lds.len() {
        lds[kbest + 1]
    } else {
        cfg.lambda_max
    };
    let phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..80 {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + phi * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - phi * (hi - lo);
            g1 = g(x1);
        }
        best = best.max(g1.max(g2));
    }
    Ok(best.max(0.0))
}

/// R(d, c) when the action sequence is chosen independently of the source:
/// min I(X;U|Y,A) over P_A and P_{U|X,A}.
pub fn rdc_independent(spec: &ProblemSpec, d: f64, c: f64, cfg: &SolverConfig) -> Result<f64> {
    require_mode(spec, Mode::DecoderIndependent)?;
    constrained_rate(&Instance::new(spec, Objective::DecoderIndependent), d, c, cfg)
}

/// R(d, c) under causal side information at the reconstruction:
/// min I(X;U,A) over P_{A,U|X}.
pub fn rdc_causal(spec: &ProblemSpec, d: f64, c: f64, cfg: &SolverConfig) -> Result<f64> {
    require_mode(spec, Mode::Causal)?;
    constrained_rate(&Instance::new(spec, Objective::Causal), d, c, cfg)
}

/// R(d, c) when the encoder observes a noisy version Z of the source:
/// min I(Z;A) + I(Z;U|Y,A) over P_{A,U|Z} with |U| = |Z||A| + 2, with
/// distortion still measured on X.
pub fn rdc_indirect(spec: &ProblemSpec, d: f64, c: f64, cfg: &SolverConfig) -> Result<f64> {
    require_mode(spec, Mode::Indirect)?;
    constrained_rate(&Instance::new(spec, Objective::Indirect), d, c, cfg)
}
