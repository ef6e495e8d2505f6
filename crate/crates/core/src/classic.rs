//! Classical reference quantities: rate-distortion via Blahut-Arimoto,
//! channel capacity under an input cost constraint, Slepian-Wolf and
//! Wyner-Ziv rates, and the erased-side-information closed form.

use crate::error::{Result, VendError};
use crate::info::{bernoulli_rd, xlog2x, ZERO_FLOOR};
use crate::joint::JointDist;
use crate::prob::{CostVector, DistortionMatrix, ProbVector, StochasticKernel};
use crate::solver::{constrained_rate, Instance, Objective, SolverConfig};
use crate::spec::{Mode, ProblemSpec};

/// Relative-change stopping threshold for Blahut-Arimoto iterations.
const BA_TOL: f64 = 1e-10;
const BA_MAX_ITERS: usize = 5000;

/// A memoryless channel P_{Y|A} together with its per-input cost vector.
#[derive(Debug, Clone)]
pub struct ChannelSpec {
    kernel: StochasticKernel,
    cost: CostVector,
}

impl ChannelSpec {
    pub fn new(kernel: StochasticKernel, cost: CostVector) -> Result<Self> {
        if kernel.input_size() != cost.len() {
            return Err(VendError::DimensionMismatch {
                axis: "channel cost vector",
                expected: kernel.input_size(),
                got: cost.len(),
            });
        }
        Ok(Self { kernel, cost })
    }

    /// Channel with free inputs (all costs zero).
    pub fn uncosted(kernel: StochasticKernel) -> Self {
        let cost = CostVector::zero(kernel.input_size());
        Self { kernel, cost }
    }

    pub fn kernel(&self) -> &StochasticKernel {
        &self.kernel
    }

    pub fn cost(&self) -> &CostVector {
        &self.cost
    }
}

/// One Blahut-Arimoto pass at slope `s` (bits per distortion unit):
/// returns (rate, distortion) of the fixed point.
fn ba_rd_at_slope(px: &ProbVector, rho: &DistortionMatrix, s: f64) -> (f64, f64) {
    let n_x = px.alphabet_size();
    let n_r = rho.repro_size();
    let ln2 = std::f64::consts::LN_2;
    // w[x][xh] = 2^(-s rho)
    let w: Vec<f64> = (0..n_x)
        .flat_map(|x| (0..n_r).map(move |xh| (-s * ln2 * rho.get(x, xh)).exp()))
        .collect();
    let mut q = vec![1.0 / n_r as f64; n_r];
    let mut trans = vec![0.0; n_x * n_r];
    let mut prev_obj = f64::INFINITY;
    for _ in 0..BA_MAX_ITERS {
        for x in 0..n_x {
            let mut z = 0.0;
            for xh in 0..n_r {
                let v = q[xh] * w[x * n_r + xh];
                trans[x * n_r + xh] = v;
                z += v;
            }
            if z > 0.0 {
                for xh in 0..n_r {
                    trans[x * n_r + xh] /= z;
                }
            }
        }
        let mut new_q = vec![0.0; n_r];
        for x in 0..n_x {
            let p = px.get(x);
            for xh in 0..n_r {
                new_q[xh] += p * trans[x * n_r + xh];
            }
        }
        q = new_q;
        // objective I + s D, monotone nonincreasing across passes
        let (rate, dist) = rd_pair(px, rho, &trans, &q);
        let obj = rate + s * dist;
        if (prev_obj - obj).abs() <= BA_TOL * obj.abs().max(1.0) {
            return (rate, dist);
        }
        prev_obj = obj;
    }
    let (rate, dist) = rd_pair(px, rho, &trans, &q);
    (rate, dist)
}

fn rd_pair(
    px: &ProbVector,
    rho: &DistortionMatrix,
    trans: &[f64],
    q: &[f64],
) -> (f64, f64) {
    let n_x = px.alphabet_size();
    let n_r = rho.repro_size();
    let mut rate = 0.0;
    let mut dist = 0.0;
    for x in 0..n_x {
        let p = px.get(x);
        if p <= ZERO_FLOOR {
            continue;
        }
        for xh in 0..n_r {
            let t = trans[x * n_r + xh];
            if t <= ZERO_FLOOR {
                continue;
            }
            rate += p * t * (t / q[xh]).log2();
            dist += p * t * rho.get(x, xh);
        }
    }
    (rate.max(0.0), dist)
}

/// Rate-distortion function R(P_X, d) in bits, via Blahut-Arimoto passes
/// bracketing the target distortion with a slope bisection; the returned
/// value is the dual maximum, exact on the convex curve.
pub fn rd_function(px: &ProbVector, rho: &DistortionMatrix, d: f64) -> Result<f64> {
    if !(d >= 0.0) {
        return Err(VendError::OutOfRange(format!("distortion target {d}")));
    }
    let n_x = px.alphabet_size();
    if rho.source_size() != n_x {
        return Err(VendError::DimensionMismatch {
            axis: "distortion rows",
            expected: n_x,
            got: rho.source_size(),
        });
    }
    let n_r = rho.repro_size();
    // zero-rate region: a single reproduction symbol meets the target
    let d_zero = (0..n_r)
        .map(|xh| (0..n_x).map(|x| px.get(x) * rho.get(x, xh)).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    if d >= d_zero - 1e-15 {
        return Ok(0.0);
    }
    let d_min: f64 = (0..n_x)
        .map(|x| {
            px.get(x)
                * (0..n_r)
                    .map(|xh| rho.get(x, xh))
                    .fold(f64::INFINITY, f64::min)
        })
        .sum();
    if d < d_min - 1e-12 {
        return Err(VendError::Infeasible(format!(
            "distortion target {d} below the minimum achievable {d_min}"
        )));
    }
    let dual = |s: f64| -> f64 {
        let (r, dist) = ba_rd_at_slope(px, rho, s);
        r + s * (dist - d)
    };
    let mut best = dual(0.0);
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..14 {
        let (_, dist) = ba_rd_at_slope(px, rho, hi);
        if dist <= d {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let (r, dist) = ba_rd_at_slope(px, rho, mid);
        best = best.max(r + mid * (dist - d));
        if dist > d {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best.max(0.0))
}

/// One capacity Blahut-Arimoto pass at cost multiplier `gamma` (nats per
/// cost unit): returns (capacity in bits, expected cost) of the fixed point.
fn ba_capacity_at_gamma(ch: &ChannelSpec, gamma: f64) -> (f64, f64) {
    let w = &ch.kernel;
    let n_a = w.input_size();
    let n_y = w.output_size();
    let mut p = vec![1.0 / n_a as f64; n_a];
    let mut prev = f64::NEG_INFINITY;
    let mut info_nats = 0.0;
    for _ in 0..BA_MAX_ITERS {
        let mut q = vec![0.0; n_y];
        for a in 0..n_a {
            for y in 0..n_y {
                q[y] += p[a] * w.get(a, y);
            }
        }
        // per-input relative entropy D(W_a || q), in nats
        let mut c = vec![0.0; n_a];
        for a in 0..n_a {
            let mut s = 0.0;
            for y in 0..n_y {
                let wy = w.get(a, y);
                if wy > ZERO_FLOOR {
                    s += wy * (wy / q[y]).ln();
                }
            }
            c[a] = s;
        }
        info_nats = (0..n_a).map(|a| p[a] * c[a]).sum();
        let obj = info_nats - gamma * (0..n_a).map(|a| p[a] * ch.cost.get(a)).sum::<f64>();
        let mut z = 0.0;
        for a in 0..n_a {
            p[a] *= (c[a] - gamma * ch.cost.get(a)).exp();
            z += p[a];
        }
        if z <= 0.0 {
            break;
        }
        for v in p.iter_mut() {
            *v /= z;
        }
        if (obj - prev).abs() <= BA_TOL * obj.abs().max(1.0) {
            break;
        }
        prev = obj;
    }
    let mean_cost: f64 = (0..n_a).map(|a| p[a] * ch.cost.get(a)).sum();
    (info_nats / std::f64::consts::LN_2, mean_cost)
}

/// Channel capacity in bits under the input cost budget `E Lambda(A) <= c`.
pub fn capacity_with_cost(ch: &ChannelSpec, c: f64) -> Result<f64> {
    let cmin = ch.cost.min();
    if c < cmin - 1e-12 {
        return Err(VendError::Infeasible(format!(
            "cost budget {c} below the cheapest input cost {cmin}"
        )));
    }
    let (cap0, cost0) = ba_capacity_at_gamma(ch, 0.0);
    if cost0 <= c + 1e-12 {
        return Ok(cap0.max(0.0));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut cap = 0.0;
    for _ in 0..30 {
        let (i, mc) = ba_capacity_at_gamma(ch, hi);
        if mc <= c {
            cap = i;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let (i, mc) = ba_capacity_at_gamma(ch, mid);
        if mc <= c {
            cap = cap.max(i);
        }
        if (mc - c).abs() <= 1e-12 {
            break;
        }
        if mc > c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(cap.max(0.0))
}

/// Slepian-Wolf rate H(X|Y) for the pair (P_X, P_{Y|X}).
pub fn slepian_wolf_rate(px: &ProbVector, p_y_given_x: &StochasticKernel) -> Result<f64> {
    let n_x = px.alphabet_size();
    if p_y_given_x.input_size() != n_x {
        return Err(VendError::DimensionMismatch {
            axis: "P_{Y|X} rows",
            expected: n_x,
            got: p_y_given_x.input_size(),
        });
    }
    let n_y = p_y_given_x.output_size();
    let mut h_xy = 0.0;
    let mut m_y = vec![0.0; n_y];
    for x in 0..n_x {
        let p = px.get(x);
        for y in 0..n_y {
            let v = p * p_y_given_x.get(x, y);
            h_xy -= xlog2x(v);
            m_y[y] += v;
        }
    }
    let h_y = -m_y.iter().map(|&v| xlog2x(v)).sum::<f64>();
    Ok((h_xy - h_y).max(0.0))
}

/// Wyner-Ziv rate min I(X;U|Y) for a joint source-side-information pair,
/// with |U| = |X| + 1 and the decoder estimating from (U, Y).
pub fn wyner_ziv_rate(
    pxy: &JointDist,
    rho: &DistortionMatrix,
    d: f64,
    cfg: &SolverConfig,
) -> Result<f64> {
    if pxy.num_axes() != 2 {
        return Err(VendError::DimensionMismatch {
            axis: "joint axes",
            expected: 2,
            got: pxy.num_axes(),
        });
    }
    let dims = pxy.dims().to_vec();
    let (n_x, n_y) = (dims[0], dims[1]);
    let mx = pxy.marginal(&[0]);
    let data = pxy.data().to_vec();
    let rows: Vec<Vec<f64>> = (0..n_x)
        .map(|x| {
            if mx[x] > ZERO_FLOOR {
                (0..n_y).map(|y| data[x * n_y + y] / mx[x]).collect()
            } else {
                vec![1.0 / n_y as f64; n_y]
            }
        })
        .collect();
    let px = ProbVector::new(mx)?;
    let spec = ProblemSpec::new(
        px,
        StochasticKernel::new(rows)?,
        rho.clone(),
        CostVector::zero(1),
        Mode::Decoder,
    )?;
    let inst = Instance::with_aux(&spec, Objective::DecoderActions, n_x + 1);
    constrained_rate(&inst, d, 0.0, cfg)
}

/// Convenience constructor for the joint distribution of a source and a
/// channel output.
pub fn joint_from_channel(px: &ProbVector, p_y_given_x: &StochasticKernel) -> Result<JointDist> {
    let n_x = px.alphabet_size();
    if p_y_given_x.input_size() != n_x {
        return Err(VendError::DimensionMismatch {
            axis: "P_{Y|X} rows",
            expected: n_x,
            got: p_y_given_x.input_size(),
        });
    }
    let n_y = p_y_given_x.output_size();
    let mut data = Vec::with_capacity(n_x * n_y);
    for x in 0..n_x {
        for y in 0..n_y {
            data.push(px.get(x) * p_y_given_x.get(x, y));
        }
    }
    JointDist::new(vec![n_x, n_y], vec!["X", "Y"], data)
}

/// Wyner-Ziv rate of a Bernoulli(p) source under Hamming distortion when
/// the side information is X erased with probability e: e * R_b(p, d/e).
pub fn erased_si_wz(p: f64, e: f64, d: f64) -> Result<f64> {
    for (name, v) in [("p", p), ("e", e), ("d", d)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(VendError::OutOfRange(format!("erased_si_wz {name} = {v}")));
        }
    }
    if e == 0.0 {
        return Ok(0.0);
    }
    bernoulli_rd(p, (d / e).min(1.0)).map(|r| e * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rd_binary_hamming_quarter() {
        // 1 - h(1/4)
        let px = ProbVector::uniform(2);
        let rho = DistortionMatrix::hamming(2);
        let r = rd_function(&px, &rho, 0.25).unwrap();
        assert_abs_diff_eq!(r, 0.18872187554086717, epsilon = 1e-8);
    }

    #[test]
    fn rd_lossless_limit_is_source_entropy() {
        let px = ProbVector::new(vec![0.25, 0.5, 0.25]).unwrap();
        let rho = DistortionMatrix::hamming(3);
        let r = rd_function(&px, &rho, 0.0).unwrap();
        assert_abs_diff_eq!(r, 1.5, epsilon = 1e-8);
    }

    #[test]
    fn rd_zero_past_max_useful_distortion() {
        let px = ProbVector::uniform(2);
        let rho = DistortionMatrix::hamming(2);
        assert_eq!(rd_function(&px, &rho, 0.5).unwrap(), 0.0);
        assert_eq!(rd_function(&px, &rho, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn rd_convex_nonincreasing() {
        let px = ProbVector::new(vec![0.25, 0.5, 0.25]).unwrap();
        let rho = DistortionMatrix::hamming(3);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.06).collect();
        let vals: Vec<f64> = grid.iter().map(|&d| rd_function(&px, &rho, d).unwrap()).collect();
        for w in vals.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
        for i in 1..vals.len() - 1 {
            assert!(vals[i] <= 0.5 * (vals[i - 1] + vals[i + 1]) + 1e-7);
        }
    }

    #[test]
    fn capacity_useless_and_perfect_channels() {
        let bsc_half = ChannelSpec::uncosted(StochasticKernel::bsc(0.5).unwrap());
        assert_abs_diff_eq!(capacity_with_cost(&bsc_half, 0.0).unwrap(), 0.0, epsilon = 1e-9);
        let clean = ChannelSpec::uncosted(StochasticKernel::identity(2));
        assert_abs_diff_eq!(capacity_with_cost(&clean, 0.0).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn capacity_bsc_formula() {
        // 1 - h(0.11), analytic BSC capacity
        let ch = ChannelSpec::uncosted(StochasticKernel::bsc(0.11).unwrap());
        assert_abs_diff_eq!(
            capacity_with_cost(&ch, 0.0).unwrap(),
            0.500084041835472,
            epsilon = 1e-8
        );
    }

    #[test]
    fn capacity_cost_constraint_binds() {
        // Z-channel-like asymmetric cost: input 1 costs 1, input 0 free.
        let ch = ChannelSpec::new(
            StochasticKernel::identity(2),
            CostVector::new(vec![0.0, 1.0]).unwrap(),
        )
        .unwrap();
        let unconstrained = capacity_with_cost(&ch, 1.0).unwrap();
        assert_abs_diff_eq!(unconstrained, 1.0, epsilon = 1e-9);
        // budget 0 pins the input to a = 0: zero capacity
        assert_abs_diff_eq!(capacity_with_cost(&ch, 0.0).unwrap(), 0.0, epsilon = 1e-6);
        // intermediate budget: h(c) for a noiseless channel with cost = input
        let mid = capacity_with_cost(&ch, 0.2).unwrap();
        assert_abs_diff_eq!(mid, 0.7219280948873623, epsilon = 1e-6);
        assert!(capacity_with_cost(&ch, -0.5).is_err());
    }

    #[test]
    fn capacity_concave_in_budget() {
        let ch = ChannelSpec::new(
            StochasticKernel::identity(2),
            CostVector::new(vec![0.0, 1.0]).unwrap(),
        )
        .unwrap();
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let caps: Vec<f64> = grid
            .iter()
            .map(|&c| capacity_with_cost(&ch, c).unwrap())
            .collect();
        for w in caps.windows(2) {
            assert!(w[1] >= w[0] - 1e-8);
        }
        for i in 1..caps.len() - 1 {
            assert!(caps[i] >= 0.5 * (caps[i - 1] + caps[i + 1]) - 1e-6);
        }
    }

    #[test]
    fn slepian_wolf_degenerate_cases() {
        let px = ProbVector::uniform(2);
        assert_abs_diff_eq!(
            slepian_wolf_rate(&px, &StochasticKernel::identity(2)).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        let independent = StochasticKernel::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert_abs_diff_eq!(
            slepian_wolf_rate(&px, &independent).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn slepian_wolf_z_channel() {
        // fair X through a Z-channel(delta): h(delta/(1+delta)) (1+delta)/2
        let px = ProbVector::uniform(2);
        let z = StochasticKernel::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        assert_abs_diff_eq!(
            slepian_wolf_rate(&px, &z).unwrap(),
            0.6887218755408672,
            epsilon = 1e-12
        );
    }

    #[test]
    fn erased_si_closed_form() {
        assert_abs_diff_eq!(erased_si_wz(0.5, 0.5, 0.25).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            erased_si_wz(0.5, 1.0, 0.25).unwrap(),
            0.18872187554086717,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            erased_si_wz(0.5, 0.5, 0.125).unwrap(),
            0.5 * 0.18872187554086717,
            epsilon = 1e-12
        );
        assert_eq!(erased_si_wz(0.5, 0.0, 0.3).unwrap(), 0.0);
        assert!(erased_si_wz(0.5, 0.5, 1.5).is_err());
    }
}
