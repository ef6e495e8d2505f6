//! Reference curve emissions: the greedy-versus-optimal gap, the lossless
//! rate-cost curve, the observe-or-not erasure tradeoff, and the Gaussian
//! closed form.

use crate::emit::CurveEmission;
use vendinfo::{
    binary_entropy, gaussian_rdc, greedy_rate, instances, lossless_rate_decoder, GaussianSpec,
    Mode, SolverConfig,
};

/// Which reference curve to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Greedy minus optimal lossless rate over the Z/S noise parameter.
    Fig3,
    /// Lossless rate of the Z/S instance as a function of the action cost.
    Fig4,
    /// Observe-or-not erasure tradeoff at d = 1/4, erasure 1/2, over cost.
    Fig5,
    /// Gaussian rate over distortion at several action power budgets.
    Fig7,
}

impl Figure {
    pub fn parse(s: &str) -> Result<Self, String> {
        Ok(match s {
            "fig3" => Figure::Fig3,
            "fig4" => Figure::Fig4,
            "fig5" => Figure::Fig5,
            "fig7" => Figure::Fig7,
            other => return Err(format!("unknown figure `{other}` (expected fig3|fig4|fig5|fig7)")),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig7 => "fig7",
        }
    }
}

/// Emits the requested reference curve.
pub fn figure_command(which: Figure, cfg: &SolverConfig) -> Result<CurveEmission, String> {
    match which {
        Figure::Fig3 => fig3(cfg),
        Figure::Fig4 => fig4(cfg),
        Figure::Fig5 => fig5(cfg),
        Figure::Fig7 => fig7(cfg),
    }
}

/// Greedy-versus-optimal lossless gap on the Z/S instance over
/// delta in {0.02, 0.04, ..., 0.98}.
fn fig3(cfg: &SolverConfig) -> Result<CurveEmission, String> {
    let mut emission = CurveEmission::new("fig3", cfg, &["delta", "greedy", "optimal", "gap"]);
    for i in 1..=49 {
        let delta = i as f64 * 0.02;
        let spec = instances::zs(delta, Mode::Decoder).map_err(|e| e.to_string())?;
        let greedy = greedy_rate(&spec, 0.0, cfg).map_err(|e| e.to_string())?;
        let optimal =
            lossless_rate_decoder(&spec, spec.unconstrained_cost(), cfg).map_err(|e| e.to_string())?;
        emission.push(vec![
            Some(delta),
            Some(greedy),
            Some(optimal),
            Some((greedy - optimal).max(0.0)),
        ]);
    }
    Ok(emission)
}

/// Lossless rate of the Z/S instance at delta = 1/2 as a function of the
/// action cost, 41 points over [0, 1/2].
fn fig4(cfg: &SolverConfig) -> Result<CurveEmission, String> {
    let spec = instances::zs(0.5, Mode::Decoder).map_err(|e| e.to_string())?;
    let mut emission = CurveEmission::new("fig4", cfg, &["c", "rate"]);
    for i in 0..=40 {
        let c = i as f64 * 0.5 / 40.0;
        let rate = lossless_rate_decoder(&spec, c, cfg).map_err(|e| e.to_string())?;
        emission.push(vec![Some(c), Some(rate)]);
    }
    Ok(emission)
}

/// Observe-or-not with erased side information at d = 1/4, erasure
/// probability 1/2: rate against the observation budget, 41 points over
/// [0, 1].
fn fig5(cfg: &SolverConfig) -> Result<CurveEmission, String> {
    let mut emission = CurveEmission::new("fig5", cfg, &["c", "rate"]);
    for i in 0..=40 {
        let c = i as f64 / 40.0;
        emission.push(vec![Some(c), Some(erasure_cost_rate(0.25, 0.5, c))]);
    }
    Ok(emission)
}

/// Gaussian closed form over a distortion grid at action power budgets
/// {0, 0.3, 0.6, 1}, unit source and noise variances.
fn fig7(cfg: &SolverConfig) -> Result<CurveEmission, String> {
    let costs = [0.0, 0.3, 0.6, 1.0];
    let mut emission = CurveEmission::new(
        "fig7",
        cfg,
        &["d", "rate_c0", "rate_c0.3", "rate_c0.6", "rate_c1"],
    );
    for i in 1..=50 {
        let d = i as f64 * 0.02;
        let mut row = vec![Some(d)];
        for &c in &costs {
            let g = GaussianSpec::unit(d, c).map_err(|e| e.to_string())?;
            row.push(Some(gaussian_rdc(&g)));
        }
        emission.push(row);
    }
    Ok(emission)
}

fn h(p: f64) -> f64 {
    binary_entropy(p.clamp(0.0, 1.0)).expect("clamped argument")
}

/// Bernoulli(p) rate-distortion value, zero outside the informative
/// distortion range.
fn rb(p: f64, d: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    if d >= p.min(1.0 - p) {
        0.0
    } else {
        h(p) - h(d)
    }
}

/// Fair binary source, side information an erased copy of the source
/// (erasure probability `e`), observation of a fraction `c` of the
/// symbols: the exact tradeoff value at distortion `d`, computed by
/// minimizing over the source-conditional action split and the distortion
/// allocated to the observed branch.
pub fn erasure_cost_rate(d: f64, e: f64, c: f64) -> f64 {
    if c <= 1e-12 {
        return rb(0.5, d);
    }
    if c >= 1.0 - 1e-12 {
        if e <= 0.0 {
            return 0.0;
        }
        return e * rb(0.5, (d / e).min(1.0));
    }
    // beta is the probability mass routed to the unobserved branch times
    // two; d1 is the distortion allocated to the observed branch
    let value = |beta: f64, d1: f64| -> f64 {
        let p0 = beta / (2.0 * (1.0 - c));
        let p1 = (1.0 - beta) / (2.0 * c);
        let d0 = ((d - c * d1) / (1.0 - c)).max(0.0);
        let observed = if e > 0.0 { e * rb(p1, (d1 / e).min(1.0)) } else { 0.0 };
        1.0 - (h(p0) * (1.0 - c) + h(p1) * c) + rb(p0, d0) * (1.0 - c) + observed * c
    };
    let (mut blo, mut bhi) = ((1.0 - 2.0 * c).max(0.0), (2.0 - 2.0 * c).min(1.0));
    let (mut dlo, mut dhi) = (0.0, (d / c).min(e.max(0.0)));
    let n = 80usize;
    let mut best = f64::INFINITY;
    for _ in 0..5 {
        let mut arg = (blo, dlo);
        for i in 0..=n {
            let beta = blo + (bhi - blo) * i as f64 / n as f64;
            for j in 0..=n {
                let d1 = dlo + (dhi - dlo) * j as f64 / n as f64;
                let v = value(beta, d1);
                if v < best {
                    best = v;
                    arg = (beta, d1);
                }
            }
        }
        // shrink the search box around the incumbent
        let bw = (bhi - blo) * 2.0 / n as f64;
        let dw = (dhi - dlo) * 2.0 / n as f64;
        (blo, bhi) = ((arg.0 - bw).max(blo), (arg.0 + bw).min(bhi));
        (dlo, dhi) = ((arg.1 - dw).max(dlo), (arg.1 + dw).min(dhi));
    }
    best.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn erasure_curve_endpoints() {
        let r0 = erasure_cost_rate(0.25, 0.5, 0.0);
        assert_abs_diff_eq!(r0, 1.0 - h(0.25), epsilon = 1e-12);
        assert!(erasure_cost_rate(0.25, 0.5, 1.0).abs() < 1e-12);
    }

    #[test]
    fn erasure_curve_strictly_concave_at_midpoint() {
        let r0 = erasure_cost_rate(0.25, 0.5, 0.0);
        let r1 = erasure_cost_rate(0.25, 0.5, 1.0);
        let mid = erasure_cost_rate(0.25, 0.5, 0.5);
        assert!(mid < 0.5 * (r0 + r1) - 1e-3, "midpoint {mid}");
    }

    #[test]
    fn erasure_curve_monotone_in_cost() {
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let r = erasure_cost_rate(0.25, 0.5, i as f64 / 20.0);
            assert!(r <= prev + 1e-9);
            prev = r;
        }
    }

    #[test]
    fn figure_names_round_trip() {
        for name in ["fig3", "fig4", "fig5", "fig7"] {
            assert_eq!(Figure::parse(name).unwrap().name(), name);
        }
        assert!(Figure::parse("fig6").is_err());
    }
}
