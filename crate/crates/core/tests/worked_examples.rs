//! End-to-end checks of the worked example instances against their known
//! closed-form values.

use vendinfo::{
    bernoulli_rd, capacity_with_cost, encoder_lossless_rate, erased_si_wz, greedy_rate,
    instances, joint_from_channel, lossless_policy_unconstrained, lossless_rate_decoder,
    markov_rdc, rd_function, rdc_causal, rdc_decoder, rdc_independent, rdc_indirect,
    slepian_wolf_rate, timeshare_bound, wyner_ziv_rate, ChannelSpec, CostVector,
    DistortionMatrix, Mode, ProbVector, ProblemSpec, SolverConfig, StochasticKernel,
};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

/// 1 - h(alpha) + h(ad / (1 - a + ad)) (1 - a + ad): the symmetric-policy
/// rate of the Z/S instance as a function of the action crossover.
fn zs_symmetric_rate(alpha: f64, delta: f64) -> f64 {
    let h = |p: f64| vendinfo::binary_entropy(p).unwrap();
    let m = 1.0 - alpha + alpha * delta;
    1.0 - h(alpha) + h(alpha * delta / m) * m
}

#[test]
fn zs_lossless_unconstrained_value_and_policy() {
    let spec = instances::zs(0.5, Mode::Decoder).unwrap();
    let r = lossless_rate_decoder(&spec, spec.unconstrained_cost(), &cfg()).unwrap();
    assert!((r - 0.678072).abs() < 1e-4, "got {r}");
    // independent 1-D oracle over the symmetric crossover
    let oracle = (0..=10_000)
        .map(|i| zs_symmetric_rate(i as f64 / 10_000.0, 0.5))
        .fold(f64::INFINITY, f64::min);
    assert!((r - oracle).abs() < 1e-5, "solver {r} vs symmetric oracle {oracle}");
    // the optimizing kernel is the symmetric crossover alpha* = 2/5
    let p = lossless_policy_unconstrained(&spec, &cfg()).unwrap();
    let k = p.primary_kernel();
    assert!((k.get(0, 1) - 0.4).abs() < 1e-3, "alpha = {}", k.get(0, 1));
    assert!((k.get(1, 0) - 0.4).abs() < 1e-3, "alpha' = {}", k.get(1, 0));
}

#[test]
fn zs_greedy_closed_form() {
    let spec = instances::zs(0.5, Mode::Decoder).unwrap();
    let r = greedy_rate(&spec, 0.0, &cfg()).unwrap();
    assert!((r - 0.6887218755408672).abs() < 1e-6, "got {r}");
    // improvement of the optimal scheme over greedy
    let rmin = lossless_rate_decoder(&spec, spec.unconstrained_cost(), &cfg()).unwrap();
    assert!(r - rmin >= 0.0100, "gap {}", r - rmin);
}

#[test]
fn zs_greedy_delta_endpoints() {
    let noiseless = instances::zs(0.0, Mode::Decoder).unwrap();
    assert!(greedy_rate(&noiseless, 0.0, &cfg()).unwrap() < 1e-9);
    let useless = instances::zs(1.0, Mode::Decoder).unwrap();
    let r = greedy_rate(&useless, 0.0, &cfg()).unwrap();
    assert!((r - 1.0).abs() < 1e-9, "got {r}");
}

#[test]
fn zs_cost_pinned_to_greedy() {
    // only the free Z-channel action is affordable at c = 0
    let spec = instances::zs(0.5, Mode::Decoder).unwrap();
    let r = lossless_rate_decoder(&spec, 0.0, &cfg()).unwrap();
    assert!((r - 0.6887218755408672).abs() < 2e-3, "got {r}");
}

#[test]
fn zs_beats_time_sharing_at_quarter_cost() {
    let spec = instances::zs(0.5, Mode::Decoder).unwrap();
    let r = lossless_rate_decoder(&spec, 0.25, &cfg()).unwrap();
    let chord = 0.5 * 0.678072 + 0.5 * 0.688722;
    assert!(r < chord - 1e-4, "rate {r} does not beat the chord {chord}");
}

#[test]
fn ternary_lossless_and_lossy() {
    let spec = instances::ternary().unwrap();
    let r0 = rdc_decoder(&spec, 0.0, 0.5, &cfg()).unwrap();
    assert!((r0 - 1.0).abs() < 1e-3, "got {r0}");
    for d in [0.1, 0.25] {
        let want = 1.0 - vendinfo::binary_entropy(d).unwrap();
        let r = rdc_decoder(&spec, d, 0.5, &cfg()).unwrap();
        assert!((r - want).abs() < 2e-3, "d = {d}: got {r}, want {want}");
    }
}

#[test]
fn observe_or_not_identity_closed_form() {
    // Y = X when observed: (1 - c) R_b(1/2, d / (1 - c))
    let spec = instances::observe_or_not_identity(Mode::Decoder).unwrap();
    let (d, c) = (0.1, 0.3);
    let want = (1.0 - c) * bernoulli_rd(0.5, d / (1.0 - c)).unwrap();
    let r = rdc_decoder(&spec, d, c, &cfg()).unwrap();
    assert!((r - want).abs() < 2e-3, "got {r}, want {want}");
    // the independent-action variant attains the same closed form
    let ind = instances::observe_or_not_identity(Mode::DecoderIndependent).unwrap();
    let ri = rdc_independent(&ind, d, c, &cfg()).unwrap();
    assert!((ri - want).abs() < 2e-3, "independent: got {ri}, want {want}");
}

#[test]
fn erased_si_wyner_ziv_identity() {
    // action-1 channel of the erasure instance is a plain erasure channel
    let spec = instances::observe_or_not_erasure(0.5, Mode::Decoder).unwrap();
    let channel = spec.channel_for_action(1).unwrap();
    let joint = joint_from_channel(spec.px(), &channel).unwrap();
    for d in [0.125, 0.05] {
        let want = erased_si_wz(0.5, 0.5, d).unwrap();
        let got = wyner_ziv_rate(&joint, spec.rho(), d, &cfg()).unwrap();
        assert!((got - want).abs() < 2e-3, "d = {d}: got {got}, want {want}");
    }
    // Slepian-Wolf limit at d = 0
    let sw = slepian_wolf_rate(spec.px(), &channel).unwrap();
    let wz0 = wyner_ziv_rate(&joint, spec.rho(), 0.0, &cfg()).unwrap();
    assert!((wz0 - sw).abs() < 2e-3, "wz {wz0} vs sw {sw}");
}

#[test]
fn erased_si_closed_form_values() {
    assert!((erased_si_wz(0.5, 0.5, 0.125).unwrap() - 0.09436093777043358).abs() < 1e-12);
    assert!(erased_si_wz(0.5, 0.5, 0.25).unwrap().abs() < 1e-12);
}

#[test]
fn timeshare_equals_greedy_on_zs_lossless() {
    // actions chosen without regard to X: the best time-share at
    // unconstrained cost is the better single action
    let spec = instances::zs(0.5, Mode::Decoder).unwrap();
    let ts = timeshare_bound(&spec, 0.0, spec.unconstrained_cost(), &cfg()).unwrap();
    assert!((ts - 0.6887218755408672).abs() < 2e-3, "got {ts}");
}

#[test]
fn markov_decomposition_values() {
    let c = cfg();
    // useless channel: value is the plain rate-distortion function
    let spec = instances::markov_bsc(0.5).unwrap();
    let r = markov_rdc(&spec, 0.25, 1.0, &c).unwrap();
    assert!((r - 0.18872187554086717).abs() < 1e-6, "got {r}");
    // noiseless channel: capacity 1 swallows the whole rate
    let clean = instances::markov_bsc(0.0).unwrap();
    for d in [0.05, 0.25, 0.4] {
        assert!(markov_rdc(&clean, d, 1.0, &c).unwrap().abs() < 1e-9);
    }
    // BSC(0.11): difference of the two closed forms
    let bsc = instances::markov_bsc(0.11).unwrap();
    let r = markov_rdc(&bsc, 0.05, 1.0, &c).unwrap();
    assert!((r - 0.2135190010485718).abs() < 1e-6, "got {r}");
}

#[test]
fn markov_rejects_non_markov_kernel() {
    let spec = instances::zs(0.5, Mode::EncoderMarkov).unwrap();
    assert!(markov_rdc(&spec, 0.1, 1.0, &cfg()).is_err());
}

#[test]
fn indirect_noiseless_observation_collapses() {
    // Z = X exactly: the indirect function equals the direct one
    let indirect = instances::indirect_bsc(0.0).unwrap();
    let direct = instances::observe_or_not_identity(Mode::Decoder).unwrap();
    for (d, c) in [(0.1, 0.3), (0.25, 0.5)] {
        let ri = rdc_indirect(&indirect, d, c, &cfg()).unwrap();
        let rd = rdc_decoder(&direct, d, c, &cfg()).unwrap();
        assert!((ri - rd).abs() < 2e-3, "({d}, {c}): indirect {ri} vs direct {rd}");
    }
}

#[test]
fn encoder_lossless_zero_rate_on_zs() {
    // encoder can signal X through the action choice: zero rate suffices
    let spec = instances::zs(0.5, Mode::EncoderLossless).unwrap();
    let r = encoder_lossless_rate(&spec, spec.unconstrained_cost(), &cfg()).unwrap();
    assert!(r < 1e-6, "got {r}");
}

#[test]
fn encoder_lossless_degenerate_action_is_slepian_wolf() {
    // |A| = 1: no freedom, the rate is H(X|Y) of the fixed channel
    let px = ProbVector::uniform(2);
    let z = StochasticKernel::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
    let spec = ProblemSpec::new(
        px.clone(),
        z.clone(),
        DistortionMatrix::hamming(2),
        CostVector::zero(1),
        Mode::EncoderLossless,
    )
    .unwrap();
    let r = encoder_lossless_rate(&spec, 0.0, &cfg()).unwrap();
    let sw = slepian_wolf_rate(&px, &z).unwrap();
    assert!((r - sw).abs() < 1e-6, "got {r}, want {sw}");
}

#[test]
fn encoder_lossless_pinned_cost_is_z_channel_slepian_wolf() {
    let spec = instances::zs(0.5, Mode::EncoderLossless).unwrap();
    let r = encoder_lossless_rate(&spec, 0.0, &cfg()).unwrap();
    assert!((r - 0.6887218755408672).abs() < 2e-3, "got {r}");
}

#[test]
fn causal_with_useless_side_information_is_classical_rd() {
    // constant Y: nothing to condition on, the causal rate is R(P_X, d)
    let px = ProbVector::new(vec![0.25, 0.5, 0.25]).unwrap();
    let rows = vec![vec![1.0]; 6];
    let spec = ProblemSpec::new(
        px.clone(),
        StochasticKernel::new(rows).unwrap(),
        DistortionMatrix::hamming(3),
        CostVector::new(vec![0.0, 1.0]).unwrap(),
        Mode::Causal,
    )
    .unwrap();
    for d in [0.05, 0.2] {
        let r = rdc_causal(&spec, d, 1.0, &cfg()).unwrap();
        let want = rd_function(&px, spec.rho(), d).unwrap();
        assert!((r - want).abs() < 2e-3, "d = {d}: got {r}, want {want}");
    }
}

#[test]
fn capacity_with_cost_saturates_at_max_cost() {
    let ch = ChannelSpec::new(
        StochasticKernel::bsc(0.11).unwrap(),
        CostVector::new(vec![0.0, 1.0]).unwrap(),
    )
    .unwrap();
    let full = capacity_with_cost(&ch, 1.0).unwrap();
    assert!((full - 0.500084041835472).abs() < 1e-8, "got {full}");
}
