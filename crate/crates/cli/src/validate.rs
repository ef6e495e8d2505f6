//! Acceptance harness: re-derives the worked-example values and the
//! structural solver properties, reporting one pass/fail line per
//! criterion.

use crate::figures::erasure_cost_rate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use vendinfo::{
    binary_entropy, encoder_lossless_rate, evaluate_policy, factorize, gaussian_rdc, greedy_rate,
    grid_oracle_refined, instances, lossless_policy_unconstrained, lossless_rate_decoder,
    markov_rdc, minimize_instance, rdc_causal, rdc_decoder, rdc_independent, sweep_tradeoff,
    timeshare_bound, GaussianSpec, Instance, LagrangeWeights, Mode, Objective, ProblemSpec,
    SolverConfig, StochasticKernel,
};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} {} {} ({})",
            self.index,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Runs the acceptance suite. `quick` trims the randomized-trial counts so
/// the whole run finishes well under a minute.
pub fn run_all(quick: bool, cfg: &SolverConfig) -> Vec<CriterionOutcome> {
    let trials = if quick { 15 } else { 100 };
    let heavy_trials = if quick { 8 } else { 100 };
    let oracle_instances = if quick { 6 } else { 20 };
    vec![
        c1_lossless_optimum(cfg),
        c2_greedy_baseline(cfg),
        c3_time_sharing_strictness(cfg),
        c4_erasure_curve(),
        c5_ternary(cfg),
        c6_gaussian_closed_form(),
        c7_markov_decomposition(cfg),
        c8_encoder_lossless(cfg),
        c9_oracle_equivalence(cfg, oracle_instances),
        c10_property_suites(cfg, trials, heavy_trials),
    ]
}

fn h(p: f64) -> f64 {
    binary_entropy(p).expect("probability in range")
}

fn outcome(
    index: usize,
    name: &'static str,
    pass: bool,
    detail: String,
) -> CriterionOutcome {
    CriterionOutcome {
        index,
        name,
        pass,
        detail,
    }
}

fn c1_lossless_optimum(cfg: &SolverConfig) -> CriterionOutcome {
    let run = || -> Result<(f64, f64), String> {
        let spec = instances::zs(0.5, Mode::Decoder).map_err(|e| e.to_string())?;
        let rate = lossless_rate_decoder(&spec, spec.unconstrained_cost(), cfg)
            .map_err(|e| e.to_string())?;
        let policy = lossless_policy_unconstrained(&spec, cfg).map_err(|e| e.to_string())?;
        Ok((rate, policy.primary_kernel().get(0, 1)))
    };
    match run() {
        Ok((rate, alpha)) => outcome(
            1,
            "lossless optimum on the two-action binary instance",
            (rate - 0.678072).abs() <= 1e-4 && (alpha - 0.4).abs() <= 1e-3,
            format!("rate {rate:.6} (expected 0.678072 tol 1e-4), crossover {alpha:.4} (expected 0.4 tol 1e-3)"),
        ),
        Err(e) => outcome(1, "lossless optimum on the two-action binary instance", false, e),
    }
}

fn c2_greedy_baseline(cfg: &SolverConfig) -> CriterionOutcome {
    let run = || -> Result<(f64, f64), String> {
        let spec = instances::zs(0.5, Mode::Decoder).map_err(|e| e.to_string())?;
        let greedy = greedy_rate(&spec, 0.0, cfg).map_err(|e| e.to_string())?;
        let optimal = lossless_rate_decoder(&spec, spec.unconstrained_cost(), cfg)
            .map_err(|e| e.to_string())?;
        Ok((greedy, greedy - optimal))
    };
    match run() {
        Ok((greedy, gap)) => outcome(
            2,
            "greedy single-action baseline and its gap",
            (greedy - 0.688722).abs() <= 1e-6 && gap >= 0.0100,
            format!("greedy {greedy:.7} (expected 0.688722 tol 1e-6), gap {gap:.5} (>= 0.0100)"),
        ),
        Err(e) => outcome(2, "greedy single-action baseline and its gap", false, e),
    }
}

fn c3_time_sharing_strictness(cfg: &SolverConfig) -> CriterionOutcome {
    let run = || -> Result<(f64, f64), String> {
        let spec = instances::zs(0.5, Mode::Decoder).map_err(|e| e.to_string())?;
        let rate = lossless_rate_decoder(&spec, 0.25, cfg).map_err(|e| e.to_string())?;
        let chord = 0.5 * 0.678072 + 0.5 * 0.688722;
        Ok((rate, chord - rate))
    };
    match run() {
        Ok((rate, margin)) => outcome(
            3,
            "rate-cost curve strictly below the time-sharing chord",
            margin >= 1e-4,
            format!("rate {rate:.6} at quarter cost, margin below chord {margin:.2e} (>= 1e-4)"),
        ),
        Err(e) => outcome(3, "rate-cost curve strictly below the time-sharing chord", false, e),
    }
}

fn c4_erasure_curve() -> CriterionOutcome {
    let r0 = erasure_cost_rate(0.25, 0.5, 0.0);
    let r1 = erasure_cost_rate(0.25, 0.5, 1.0);
    let mid = erasure_cost_rate(0.25, 0.5, 0.5);
    let concavity = 0.5 * (r0 + r1) - mid;
    outcome(
        4,
        "erased-side-information curve endpoints and strictness",
        (r0 - 0.188722).abs() <= 1e-6 && r1.abs() <= 1e-9 && concavity >= 1e-3,
        format!(
            "r(0) {r0:.7} (expected 0.188722 tol 1e-6), r(1) {r1:.2e} (tol 1e-9), midpoint below chord by {concavity:.4} (>= 1e-3)"
        ),
    )
}

fn c5_ternary(cfg: &SolverConfig) -> CriterionOutcome {
    let run = || -> Result<(f64, f64), String> {
        let spec = instances::ternary().map_err(|e| e.to_string())?;
        let r0 = rdc_decoder(&spec, 0.0, 0.5, cfg).map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for d in [0.1, 0.25] {
            let want = 1.0 - h(d);
            let r = rdc_decoder(&spec, d, 0.5, cfg).map_err(|e| e.to_string())?;
            worst = worst.max((r - want).abs());
        }
        Ok((r0, worst))
    };
    match run() {
        Ok((r0, worst)) => outcome(
            5,
            "ternary half-budget curve matches the binary-entropy form",
            (r0 - 1.0).abs() <= 1e-3 && worst <= 2e-3,
            format!("r(0) {r0:.5} (expected 1.0 tol 1e-3), worst lossy deviation {worst:.2e} (tol 2e-3)"),
        ),
        Err(e) => outcome(5, "ternary half-budget curve matches the binary-entropy form", false, e),
    }
}

fn c6_gaussian_closed_form() -> CriterionOutcome {
    let mut worst = 0.0f64;
    let mut boundary_ok = true;
    for i in 1..=20 {
        let d = i as f64 / 20.0;
        for j in 0..20 {
            let c = j as f64 / 10.0;
            let g = GaussianSpec::unit(d, c).expect("valid grid point");
            let got = gaussian_rdc(&g);
            // independent rendering of the same closed form
            let amp = (1.0 + c.sqrt()).powi(2);
            let expect = (0.5 * (1.0 / ((amp + 1.0) * d)).log2()).max(0.0);
            worst = worst.max((got - expect).abs());
        }
    }
    for c in [0.0f64, 0.3, 0.6, 1.0] {
        let boundary = 1.0 / ((1.0 + c.sqrt()).powi(2) + 1.0);
        for d in [boundary, boundary * 1.01] {
            if gaussian_rdc(&GaussianSpec::unit(d, c).expect("valid")) != 0.0 {
                boundary_ok = false;
            }
        }
    }
    outcome(
        6,
        "gaussian closed form on a 20x20 grid with exact zero region",
        worst <= 1e-12 && boundary_ok,
        format!("worst formula deviation {worst:.2e} (tol 1e-12), zero at and beyond the boundary: {boundary_ok}"),
    )
}

fn c7_markov_decomposition(cfg: &SolverConfig) -> CriterionOutcome {
    let run = || -> Result<(f64, f64), String> {
        let useless = instances::markov_bsc(0.5).map_err(|e| e.to_string())?;
        let r = markov_rdc(&useless, 0.25, 1.0, cfg).map_err(|e| e.to_string())?;
        let clean = instances::markov_bsc(0.0).map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for d in [0.05, 0.25, 0.4] {
            worst = worst.max(markov_rdc(&clean, d, 1.0, cfg).map_err(|e| e.to_string())?);
        }
        Ok((r, worst))
    };
    match run() {
        Ok((r, worst)) => outcome(
            7,
            "markov decomposition against both channel extremes",
            (r - 0.188722).abs() <= 1e-6 && worst <= 1e-9,
            format!("useless channel {r:.7} (expected 0.188722 tol 1e-6), noiseless residual {worst:.2e} (tol 1e-9)"),
        ),
        Err(e) => outcome(7, "markov decomposition against both channel extremes", false, e),
    }
}

fn c8_encoder_lossless(cfg: &SolverConfig) -> CriterionOutcome {
    let run = || -> Result<f64, String> {
        let spec = instances::zs(0.5, Mode::EncoderLossless).map_err(|e| e.to_string())?;
        encoder_lossless_rate(&spec, spec.unconstrained_cost(), cfg).map_err(|e| e.to_string())
    };
    match run() {
        Ok(r) => outcome(
            8,
            "encoder actions carry the source at zero rate",
            r.abs() <= 1e-6,
            format!("rate {r:.2e} (expected 0 tol 1e-6)"),
        ),
        Err(e) => outcome(8, "encoder actions carry the source at zero rate", false, e),
    }
}

fn random_weights(rng: &mut ChaCha20Rng) -> LagrangeWeights {
    LagrangeWeights {
        lambda_d: 4.0 * rng.gen::<f64>(),
        lambda_c: 2.0 * rng.gen::<f64>(),
    }
}

fn c9_oracle_equivalence(cfg: &SolverConfig, count: usize) -> CriterionOutcome {
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    // the check is two-sided, so both sides need depth: extra restarts
    // against descent traps, extra oracle resolution against grid bias
    let deep = SolverConfig {
        restarts: cfg.restarts.max(24),
        ..cfg.clone()
    };
    let resolution = cfg.grid_resolution.max(8);
    for i in 0..count {
        let spec = match instances::random_small(&mut rng, Mode::Decoder) {
            Ok(s) => s,
            Err(e) => return outcome(9, "descent matches the exhaustive grid oracle", false, e.to_string()),
        };
        let w = random_weights(&mut rng);
        let n_u = 2 + (i % 2);
        let inst = Instance::with_aux(&spec, Objective::DecoderActions, n_u);
        let solved = match minimize_instance(&inst, &w, &deep, None) {
            Ok(p) => p,
            Err(e) => return outcome(9, "descent matches the exhaustive grid oracle", false, e.to_string()),
        };
        let oracle = match grid_oracle_refined(&inst, &w, resolution, 4) {
            Ok(p) => p,
            Err(e) => return outcome(9, "descent matches the exhaustive grid oracle", false, e.to_string()),
        };
        let gap = (solved.lagrangian - oracle.lagrangian).abs();
        worst = worst.max(gap);
        if gap > 2e-3 {
            failures.push(format!("instance {i}: gap {gap:.2e}"));
        }
    }
    outcome(
        9,
        "descent matches the exhaustive grid oracle",
        failures.is_empty(),
        format!(
            "{count} random instances, worst |descent - oracle| {worst:.2e} (tol 2e-3){}",
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join(", ")) }
        ),
    )
}

/// Re-creates a spec's data under a different operational mode.
fn with_mode(spec: &ProblemSpec, mode: Mode) -> ProblemSpec {
    ProblemSpec::new(
        spec.px().clone(),
        spec.p_y_given_xa().clone(),
        spec.rho().clone(),
        spec.lambda().clone(),
        mode,
    )
    .expect("mode change preserves validity")
}

fn random_simplex_rows(rng: &mut ChaCha20Rng, rows: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| {
            let mut v: Vec<f64> = (0..dim).map(|_| -f64::ln(1.0 - rng.gen::<f64>())).collect();
            let s: f64 = v.iter().sum();
            v.iter_mut().for_each(|x| *x /= s);
            v
        })
        .collect()
}

struct Suite {
    name: &'static str,
    trials: usize,
    worst: f64,
    tol: f64,
    failures: usize,
}

impl Suite {
    fn new(name: &'static str, trials: usize, tol: f64) -> Self {
        Self {
            name,
            trials,
            worst: 0.0,
            tol,
            failures: 0,
        }
    }

    fn record(&mut self, violation: f64) {
        self.worst = self.worst.max(violation);
        if violation > self.tol {
            self.failures += 1;
        }
    }

    fn summary(&self) -> String {
        format!(
            "{} [{} trials, worst {:.2e}, tol {:.0e}]{}",
            self.name,
            self.trials,
            self.worst,
            self.tol,
            if self.failures == 0 {
                String::new()
            } else {
                format!(" {} FAILURES", self.failures)
            }
        )
    }
}

fn c10_property_suites(cfg: &SolverConfig, trials: usize, heavy_trials: usize) -> CriterionOutcome {
    let mut suites = Vec::new();

    // conditional independence of the auxiliary and the side information
    // given source and action, under the chain factorization
    let mut s = Suite::new("factorization", trials, 1e-9);
    let mut rng = ChaCha20Rng::seed_from_u64(211);
    for _ in 0..trials {
        let spec = instances::random_small(&mut rng, Mode::Decoder).expect("random instance");
        let rows = random_simplex_rows(&mut rng, 2, 6);
        let q = StochasticKernel::new(rows).expect("simplex rows");
        let joint = factorize(spec.px(), &q, spec.p_y_given_xa()).expect("factorize");
        let cmi = joint
            .conditional_mutual_information(&[2], &[3], &[0, 1])
            .expect("axes");
        s.record(cmi.abs());
    }
    suites.push(s);

    // decoder-side chain rule: I(X;A) + I(X;U|Y,A) equals
    // I(X;A) + I(X;U|A) - I(U;Y|A)
    let mut s = Suite::new("decoder identity", trials, 1e-9);
    let mut rng = ChaCha20Rng::seed_from_u64(223);
    for _ in 0..trials {
        let spec = instances::random_small(&mut rng, Mode::Decoder).expect("random instance");
        let rows = random_simplex_rows(&mut rng, 2, 6);
        let q = StochasticKernel::new(rows).expect("simplex rows");
        let joint = factorize(spec.px(), &q, spec.p_y_given_xa()).expect("factorize");
        let lhs = joint.mutual_information(&[0], &[1]).expect("axes")
            + joint.conditional_mutual_information(&[0], &[2], &[1, 3]).expect("axes");
        let rhs = joint.mutual_information(&[0], &[1]).expect("axes")
            + joint.conditional_mutual_information(&[0], &[2], &[1]).expect("axes")
            - joint.conditional_mutual_information(&[2], &[3], &[1]).expect("axes");
        s.record((lhs - rhs).abs());
    }
    suites.push(s);

    // encoder-side lossless identity: I(X;A) + H(X|Y,A) - I(Y;A) equals
    // H(X) - I(Y;A,X)
    let mut s = Suite::new("encoder identity", trials, 1e-9);
    let mut rng = ChaCha20Rng::seed_from_u64(227);
    for _ in 0..trials {
        let spec = instances::random_small(&mut rng, Mode::Decoder).expect("random instance");
        let rows = random_simplex_rows(&mut rng, 2, 2);
        let q = StochasticKernel::new(rows).expect("simplex rows");
        let joint = factorize(spec.px(), &q, spec.p_y_given_xa()).expect("factorize");
        let lhs = joint.mutual_information(&[0], &[1]).expect("axes")
            + joint.conditional_entropy(&[0], &[1, 3])
            - joint.mutual_information(&[3], &[1]).expect("axes");
        let rhs = joint.entropy_axes(&[0]) - joint.mutual_information(&[3], &[0, 1]).expect("axes");
        s.record((lhs - rhs).abs());
    }
    suites.push(s);

    // objective convexity: the rate at a policy midpoint never exceeds the
    // average of the endpoint rates
    let mut s = Suite::new("convexity", trials, 1e-9);
    let mut rng = ChaCha20Rng::seed_from_u64(229);
    for _ in 0..trials {
        let spec = instances::random_small(&mut rng, Mode::Decoder).expect("random instance");
        let inst = Instance::with_aux(&spec, Objective::DecoderActions, 3);
        let v1 = random_simplex_rows(&mut rng, 2, 6);
        let v2 = random_simplex_rows(&mut rng, 2, 6);
        let mid: Vec<Vec<f64>> = v1
            .iter()
            .zip(&v2)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect())
            .collect();
        let (e1, e2, em) = (
            evaluate_policy(&inst, &v1),
            evaluate_policy(&inst, &v2),
            evaluate_policy(&inst, &mid),
        );
        s.record(em.rate - 0.5 * (e1.rate + e2.rate));
    }
    suites.push(s);

    // ordering chain at constrained points: adaptive decoder actions are
    // at least as good as independent actions (which meet the
    // time-sharing envelope) and as causal reconstruction
    let mut s = Suite::new("ordering chain", heavy_trials, 2e-3);
    let mut rng = ChaCha20Rng::seed_from_u64(233);
    // the time-share value is a dual maximum over a finite weight grid; a
    // fine grid keeps its slack well inside the comparison tolerance
    let ts_cfg = SolverConfig {
        lambda_points: 150,
        ..cfg.clone()
    };
    for _ in 0..heavy_trials {
        let spec = instances::random_small(&mut rng, Mode::Decoder).expect("random instance");
        let d = 0.02 + 0.43 * rng.gen::<f64>();
        let u = spec.lambda().max();
        let c = u * (0.15 + 0.85 * rng.gen::<f64>());
        let dec = rdc_decoder(&spec, d, c, cfg).expect("decoder solve");
        let ts = timeshare_bound(&spec, d, c, &ts_cfg).expect("timeshare");
        let ind = rdc_independent(&with_mode(&spec, Mode::DecoderIndependent), d, c, cfg)
            .expect("independent solve");
        let cau = rdc_causal(&with_mode(&spec, Mode::Causal), d, c, cfg).expect("causal solve");
        s.record(dec - ts);
        s.record((ts - ind).abs());
        s.record(dec - cau);
    }
    suites.push(s);

    // swept tradeoff surfaces are feasible, monotone, and convex along
    // both budget axes
    let mut s = Suite::new("sweep shape", trials, 1e-9);
    let mut rng = ChaCha20Rng::seed_from_u64(239);
    let sweep_cfg = SolverConfig {
        restarts: 2,
        max_iters: 150,
        lambda_points: 6,
        ..cfg.clone()
    };
    for _ in 0..trials {
        let spec = instances::random_small(&mut rng, Mode::Decoder).expect("random instance");
        let u = spec.lambda().max();
        // uniform spacing so the midpoint convexity check applies
        let d_grid = [0.05, 0.15, 0.25, 0.35];
        let c_grid = [0.25 * u, 0.5 * u, 0.75 * u];
        let curve = sweep_tradeoff(Objective::DecoderActions, &spec, &d_grid, &c_grid, &sweep_cfg)
            .expect("sweep");
        let n_c = c_grid.len();
        let rate = |i: usize, j: usize| curve.points[i * n_c + j].rate;
        for i in 0..d_grid.len() {
            for j in 0..n_c {
                s.record(if curve.points[i * n_c + j].feasible { 0.0 } else { 1.0 });
                if i > 0 {
                    s.record(rate(i, j) - rate(i - 1, j));
                }
                if j > 0 {
                    s.record(rate(i, j) - rate(i, j - 1));
                }
                if i > 0 && i + 1 < d_grid.len() {
                    s.record(rate(i, j) - 0.5 * (rate(i - 1, j) + rate(i + 1, j)));
                }
                if j > 0 && j + 1 < n_c {
                    s.record(rate(i, j) - 0.5 * (rate(i, j - 1) + rate(i, j + 1)));
                }
            }
        }
    }
    suites.push(s);

    // enlarging the auxiliary alphabet beyond its proved sufficient size
    // leaves the optimum unchanged
    let mut s = Suite::new("cardinality saturation", heavy_trials, 2e-3);
    let mut rng = ChaCha20Rng::seed_from_u64(241);
    let sat_cfg = SolverConfig {
        restarts: 16,
        ..cfg.clone()
    };
    for _ in 0..heavy_trials {
        let spec = instances::random_small(&mut rng, Mode::Decoder).expect("random instance");
        let w = random_weights(&mut rng);
        let full = 2 * 2 + 2;
        let solve = |n_u: usize| {
            minimize_instance(
                &Instance::with_aux(&spec, Objective::DecoderActions, n_u),
                &w,
                &sat_cfg,
                None,
            )
            .expect("saturation solve")
            .lagrangian
        };
        let at = solve(full);
        s.record(at - solve(full + 1));
        s.record(at - solve(full - 1));
    }
    suites.push(s);

    // converse below both achievable encoder bounds, closed switch below
    // open switch
    let mut s = Suite::new("bounds ordering", heavy_trials, 2e-3);
    let mut rng = ChaCha20Rng::seed_from_u64(251);
    for _ in 0..heavy_trials {
        let spec = instances::random_small(&mut rng, Mode::EncoderBounds).expect("random instance");
        let w = random_weights(&mut rng);
        let solve = |objective| {
            minimize_instance(&Instance::new(&spec, objective), &w, cfg, None)
                .expect("bounds solve")
                .lagrangian
        };
        let low = solve(Objective::EncoderBoundLower);
        let clo = solve(Objective::EncoderBoundClosed);
        let ope = solve(Objective::EncoderBoundOpen);
        s.record(low - clo);
        s.record(clo - ope);
    }
    suites.push(s);

    let pass = suites.iter().all(|s| s.failures == 0);
    let detail = suites
        .iter()
        .map(Suite::summary)
        .collect::<Vec<_>>()
        .join("; ");
    outcome(10, "randomized property suites", pass, detail)
}
