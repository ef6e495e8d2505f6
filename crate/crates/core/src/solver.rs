//! Constrained minimization of convex information functionals over products
//! of probability simplices.
//!
//! The solver alternates (i) an exponentiated-gradient (mirror-descent) step
//! on the kernel rows with an adaptive step size, and (ii) a reset of the
//! reconstruction table to the per-cell Bayes estimator
//! g(cell) = argmin_xhat sum_x P(x | cell) rho(x, xhat). Constraints are
//! handled by Lagrangian sweeps; the lower convex envelope traced by the
//! sweep equals the operational tradeoff because time-sharing makes it
//! convex. An exhaustive simplex-grid oracle provides an independent
//! ground truth for small instances.

use crate::error::{Result, VendError};
use crate::info::{entropy, entropy_slice, xlog2x};
use crate::prob::{pair_index, triple_index, StochasticKernel};
use crate::spec::ProblemSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

/// Default point budget for the exhaustive grid oracle.
pub const DEFAULT_ORACLE_BUDGET: u128 = 5_000_000;

/// Simplex entries are floored at this value and renormalized, keeping
/// iterates strictly inside the simplex.
const ENTRY_FLOOR: f64 = 1e-12;

/// Finite-difference step for directional derivatives along simplex edges.
const GRAD_STEP: f64 = 1e-6;

/// Solver configuration; identical configurations (including the seed)
/// reproduce bit-identical results.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iters: usize,
    pub objective_tol: f64,
    /// Initial mirror-descent step; halved on rejected steps and regrown
    /// (capped) on accepted ones.
    pub step_init: f64,
    pub step_growth: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Per-coordinate points for the grid oracle.
    pub grid_resolution: usize,
    /// Geometric Lagrange-sweep grid bounds and size (per axis).
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_points: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 400,
            objective_tol: 1e-9,
            step_init: 1.0,
            step_growth: 1.6,
            restarts: 8,
            seed: 7,
            grid_resolution: 6,
            lambda_min: 1e-3,
            lambda_max: 1e3,
            lambda_points: 40,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(VendError::Invalid("max_iters must be >= 1".into()));
        }
        if self.restarts < 1 {
            return Err(VendError::Invalid("restarts must be >= 1".into()));
        }
        if self.grid_resolution < 2 {
            return Err(VendError::Invalid("grid_resolution must be >= 2".into()));
        }
        Ok(())
    }
}

/// Lagrange multipliers: rate per distortion unit and rate per cost unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangeWeights {
    pub lambda_d: f64,
    pub lambda_c: f64,
}

impl LagrangeWeights {
    pub fn new(lambda_d: f64, lambda_c: f64) -> Result<Self> {
        if !lambda_d.is_finite() || !lambda_c.is_finite() || lambda_d < 0.0 || lambda_c < 0.0 {
            return Err(VendError::OutOfRange(format!(
                "lagrange weights ({lambda_d}, {lambda_c})"
            )));
        }
        Ok(Self { lambda_d, lambda_c })
    }

    pub fn zero() -> Self {
        Self {
            lambda_d: 0.0,
            lambda_c: 0.0,
        }
    }
}

/// The registered information functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// I(X;A) + I(X;U|Y,A) over P_{A,U|X} (decoder actions).
    DecoderActions,
    /// I(X;A) + H(X|Y,A) over P_{A|X} (decoder actions, lossless).
    DecoderLossless,
    /// I(X;U|Y,A) over P_A and P_{U|X,A} (actions independent of X).
    DecoderIndependent,
    /// I(X;U,A) over P_{A,U|X} (causal side information).
    Causal,
    /// I(Z;A) + I(Z;U|Y,A) over P_{A,U|Z} (noisy encoder observation).
    Indirect,
    /// H(X) - I(Y;A,X) over P_{A|X} (encoder actions, lossless).
    EncoderLossless,
    /// I(X;Xhat) - I(Y;X,A) over P_{A|X}, P_{Xhat|X,A,Y} (converse bound).
    EncoderBoundLower,
    /// I(U;X|A,Y) + I(X;A) - I(Y;A) over P_{A|X}, P_{U|X,A} (open switch).
    EncoderBoundOpen,
    /// I(Xhat;X|A,Y) + I(X;A) - I(Y;A) over P_{A|X}, P_{Xhat|X,A,Y}.
    EncoderBoundClosed,
}

impl Objective {
    /// Objectives whose reconstruction is exact by definition; they carry
    /// no distortion term.
    pub fn is_lossless(self) -> bool {
        matches!(self, Objective::DecoderLossless | Objective::EncoderLossless)
    }

    pub fn uses_auxiliary(self) -> bool {
        matches!(
            self,
            Objective::DecoderActions
                | Objective::DecoderIndependent
                | Objective::Causal
                | Objective::Indirect
                | Objective::EncoderBoundOpen
        )
    }
}

/// An objective bound to a problem instance with an explicit auxiliary
/// alphabet size.
#[derive(Debug, Clone, Copy)]
pub struct Instance<'a> {
    pub spec: &'a ProblemSpec,
    pub objective: Objective,
    pub n_u: usize,
}

impl<'a> Instance<'a> {
    /// Binds `objective` to `spec` with the proved cardinality bound
    /// |U| = |X||A| + 2 (|Z||A| + 2 for the indirect setting).
    pub fn new(spec: &'a ProblemSpec, objective: Objective) -> Self {
        let n_u = match objective {
            Objective::Indirect => spec.n_z() * spec.n_a() + 2,
            o if o.uses_auxiliary() => spec.n_x() * spec.n_a() + 2,
            _ => 1,
        };
        Self {
            spec,
            objective,
            n_u,
        }
    }

    pub fn with_aux(spec: &'a ProblemSpec, objective: Objective, n_u: usize) -> Self {
        Self {
            spec,
            objective,
            n_u,
        }
    }

    /// Simplex blocks of the optimization variable: (rows, row dimension).
    pub fn layout(&self) -> Vec<(usize, usize)> {
        let (n_x, n_a, n_y) = (self.spec.n_x(), self.spec.n_a(), self.spec.n_y());
        let n_u = self.n_u;
        match self.objective {
            Objective::DecoderActions | Objective::Causal => vec![(n_x, n_a * n_u)],
            Objective::DecoderLossless | Objective::EncoderLossless => vec![(n_x, n_a)],
            Objective::DecoderIndependent => vec![(1, n_a), (n_x * n_a, n_u)],
            Objective::Indirect => vec![(self.spec.n_z(), n_a * n_u)],
            Objective::EncoderBoundLower | Objective::EncoderBoundClosed => {
                vec![(n_x, n_a), (n_x * n_a * n_y, self.spec.n_repro())]
            }
            Objective::EncoderBoundOpen => vec![(n_x, n_a), (n_x * n_a, n_u)],
        }
    }

    fn total_rows(&self) -> usize {
        self.layout().iter().map(|&(r, _)| r).sum()
    }
}

/// Evaluation of a policy: the objective value and both constraint values.
#[derive(Debug, Clone)]
pub struct Eval {
    pub rate: f64,
    pub distortion: f64,
    pub cost: f64,
    /// Bayes-optimal reconstruction table, one entry per decoder cell
    /// (empty for objectives with an explicit or exact reconstruction).
    pub decoder: Vec<usize>,
}

impl Eval {
    pub fn lagrangian(&self, w: &LagrangeWeights) -> f64 {
        self.rate + w.lambda_d * self.distortion + w.lambda_c * self.cost
    }
}

/// A candidate solution together with its evaluated (rate, distortion, cost).
#[derive(Debug, Clone)]
pub struct PolicyPoint {
    /// Optimization blocks in layout order; the first block is the primary
    /// kernel (P_{A,U|X} for the decoder-action objectives).
    pub kernels: Vec<StochasticKernel>,
    /// Flattened reconstruction table, one x-hat index per decoder cell.
    pub decoder: Vec<usize>,
    pub rate: f64,
    pub distortion: f64,
    pub cost: f64,
    pub lagrangian: f64,
    pub converged: bool,
}

impl PolicyPoint {
    pub fn primary_kernel(&self) -> &StochasticKernel {
        &self.kernels[0]
    }
}

/// A swept (rate, distortion, cost) grid point.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub d: f64,
    pub c: f64,
    pub rate: f64,
    pub feasible: bool,
}

/// A supported point of the lower convex envelope, tagged with the
/// Lagrange weights that produced it.
#[derive(Debug, Clone, Copy)]
pub struct SupportPoint {
    pub lambda_d: f64,
    pub lambda_c: f64,
    pub rate: f64,
    pub distortion: f64,
    pub cost: f64,
}

/// A set of (R, D, C) points plus the supported points of the piecewise
/// linear lower convex envelope they were interpolated from.
#[derive(Debug, Clone)]
pub struct TradeoffCurve {
    pub points: Vec<CurvePoint>,
    pub support: Vec<SupportPoint>,
}

impl TradeoffCurve {
    /// Envelope value at (d, c): the tightest supporting-hyperplane bound.
    pub fn envelope(&self, d: f64, c: f64) -> f64 {
        self.support
            .iter()
            .map(|s| s.rate + s.lambda_d * (s.distortion - d) + s.lambda_c * (s.cost - c))
            .fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// Objective evaluation
// ---------------------------------------------------------------------------

/// Bayes reconstruction: for each cell pick argmin_xhat sum_x m(x, cell)
/// rho(x, xhat) (ties to the lowest index); returns the table and the
/// expected distortion it attains.
fn bayes_decoder(m_cell_x: &[f64], n_cells: usize, n_x: usize, spec: &ProblemSpec) -> (Vec<usize>, f64) {
    let rho = spec.rho();
    let n_r = rho.repro_size();
    let mut table = Vec::with_capacity(n_cells);
    let mut distortion = 0.0;
    for cell in 0..n_cells {
        let m = &m_cell_x[cell * n_x..(cell + 1) * n_x];
        let mut best = f64::INFINITY;
        let mut best_xh = 0;
        for xh in 0..n_r {
            let s: f64 = (0..n_x).map(|x| m[x] * rho.get(x, xh)).sum();
            if s < best {
                best = s;
                best_xh = xh;
            }
        }
        table.push(best_xh);
        distortion += best;
    }
    (table, distortion)
}

/// Evaluates the bound functional for the given simplex rows (blocks in
/// layout order, rows concatenated).
pub fn evaluate_policy(inst: &Instance, vars: &[Vec<f64>]) -> Eval {
    let spec = inst.spec;
    let n_x = spec.n_x();
    let n_a = spec.n_a();
    let n_y = spec.n_y();
    let n_u = inst.n_u;
    let px = spec.px();
    let pyxa = spec.p_y_given_xa();
    let h_x = entropy(px);
    let cost_of = |m_xa: &[f64]| -> f64 {
        let mut c = 0.0;
        for x in 0..n_x {
            for a in 0..n_a {
                c += m_xa[x * n_a + a] * spec.lambda().get(a);
            }
        }
        c
    };

    match inst.objective {
        Objective::DecoderActions | Objective::Causal => {
            let causal = inst.objective == Objective::Causal;
            let q = vars; // rows x -> (a, u)
            let mut m_xa = vec![0.0; n_x * n_a];
            let mut m_a = vec![0.0; n_a];
            let mut m_au = vec![0.0; n_a * n_u];
            let mut m_xya = vec![0.0; n_x * n_y * n_a];
            let mut m_uya = vec![0.0; n_u * n_y * n_a];
            let mut m_ya = vec![0.0; n_y * n_a];
            let n_cells = if causal { n_a * n_u * n_y } else { n_u * n_y };
            let mut m_cell_x = vec![0.0; n_cells * n_x];
            let mut h_xauy = 0.0;
            let mut h_xau = 0.0;
            for x in 0..n_x {
                let p_x = px.get(x);
                for a in 0..n_a {
                    let yrow = pyxa.row(pair_index(x, a, n_a));
                    for u in 0..n_u {
                        let w = p_x * q[x][pair_index(a, u, n_u)];
                        if w <= 0.0 {
                            continue;
                        }
                        m_xa[x * n_a + a] += w;
                        m_a[a] += w;
                        m_au[a * n_u + u] += w;
                        h_xau -= xlog2x(w);
                        for y in 0..n_y {
                            let p = w * yrow[y];
                            if p <= 0.0 {
                                continue;
                            }
                            h_xauy -= xlog2x(p);
                            m_xya[(x * n_y + y) * n_a + a] += p;
                            m_uya[(u * n_y + y) * n_a + a] += p;
                            m_ya[y * n_a + a] += p;
                            let cell = if causal {
                                (a * n_u + u) * n_y + y
                            } else {
                                u * n_y + y
                            };
                            m_cell_x[cell * n_x + x] += p;
                        }
                    }
                }
            }
            let rate = if causal {
                // I(X; U, A)
                h_x + entropy_slice(&m_au) - h_xau
            } else {
                let i_xa = h_x + entropy_slice(&m_a) - entropy_slice(&m_xa);
                let cmi = entropy_slice(&m_xya) + entropy_slice(&m_uya)
                    - h_xauy
                    - entropy_slice(&m_ya);
                i_xa + cmi
            };
            let (decoder, distortion) = bayes_decoder(&m_cell_x, n_cells, n_x, spec);
            Eval {
                rate,
                distortion,
                cost: cost_of(&m_xa),
                decoder,
            }
        }
        Objective::DecoderIndependent => {
            let pa = &vars[0]; // P_A
            let pu = &vars[1..]; // rows (x, a) -> u
            let mut m_xa = vec![0.0; n_x * n_a];
            let mut m_xya = vec![0.0; n_x * n_y * n_a];
            let mut m_uya = vec![0.0; n_u * n_y * n_a];
            let mut m_ya = vec![0.0; n_y * n_a];
            let n_cells = n_a * n_u * n_y;
            let mut m_cell_x = vec![0.0; n_cells * n_x];
            let mut h_xauy = 0.0;
            for x in 0..n_x {
                let p_x = px.get(x);
                for a in 0..n_a {
                    let w_xa = p_x * pa[a];
                    m_xa[x * n_a + a] += w_xa;
                    let yrow = pyxa.row(pair_index(x, a, n_a));
                    for u in 0..n_u {
                        let w = w_xa * pu[pair_index(x, a, n_a)][u];
                        if w <= 0.0 {
                            continue;
                        }
                        for y in 0..n_y {
                            let p = w * yrow[y];
                            if p <= 0.0 {
                                continue;
                            }
                            h_xauy -= xlog2x(p);
                            m_xya[(x * n_y + y) * n_a + a] += p;
                            m_uya[(u * n_y + y) * n_a + a] += p;
                            m_ya[y * n_a + a] += p;
                            m_cell_x[((a * n_u + u) * n_y + y) * n_x + x] += p;
                        }
                    }
                }
            }
            let rate = entropy_slice(&m_xya) + entropy_slice(&m_uya)
                - h_xauy
                - entropy_slice(&m_ya);
            let (decoder, distortion) = bayes_decoder(&m_cell_x, n_cells, n_x, spec);
            Eval {
                rate,
                distortion,
                cost: cost_of(&m_xa),
                decoder,
            }
        }
        Objective::Indirect => {
            let n_z = spec.n_z();
            let pzx = spec.p_z_given_x().expect("indirect mode");
            let pyxza = spec.p_y_given_xza().expect("indirect mode");
            let q = vars; // rows z -> (a, u)
            let mut m_z = vec![0.0; n_z];
            let mut m_a = vec![0.0; n_a];
            let mut m_za = vec![0.0; n_z * n_a];
            let mut m_xa = vec![0.0; n_x * n_a];
            let mut m_zya = vec![0.0; n_z * n_y * n_a];
            let mut m_uya = vec![0.0; n_u * n_y * n_a];
            let mut m_ya = vec![0.0; n_y * n_a];
            let mut m_zauy = vec![0.0; n_z * n_a * n_u * n_y];
            let n_cells = n_u * n_y;
            let mut m_cell_x = vec![0.0; n_cells * n_x];
            for x in 0..n_x {
                let p_x = px.get(x);
                for z in 0..n_z {
                    let p_xz = p_x * pzx.get(x, z);
                    if p_xz <= 0.0 {
                        continue;
                    }
                    for a in 0..n_a {
                        let yrow = pyxza.row(triple_index(x, z, a, n_z, n_a));
                        for u in 0..n_u {
                            let w = p_xz * q[z][pair_index(a, u, n_u)];
                            if w <= 0.0 {
                                continue;
                            }
                            m_z[z] += w;
                            m_a[a] += w;
                            m_za[z * n_a + a] += w;
                            m_xa[x * n_a + a] += w;
                            for y in 0..n_y {
                                let p = w * yrow[y];
                                if p <= 0.0 {
                                    continue;
                                }
                                m_zya[(z * n_y + y) * n_a + a] += p;
                                m_uya[(u * n_y + y) * n_a + a] += p;
                                m_ya[y * n_a + a] += p;
                                m_zauy[((z * n_a + a) * n_u + u) * n_y + y] += p;
                                m_cell_x[(u * n_y + y) * n_x + x] += p;
                            }
                        }
                    }
                }
            }
            let i_za = entropy_slice(&m_z) + entropy_slice(&m_a) - entropy_slice(&m_za);
            let cmi = entropy_slice(&m_zya) + entropy_slice(&m_uya)
                - entropy_slice(&m_zauy)
                - entropy_slice(&m_ya);
            let (decoder, distortion) = bayes_decoder(&m_cell_x, n_cells, n_x, spec);
            Eval {
                rate: i_za + cmi,
                distortion,
                cost: cost_of(&m_xa),
                decoder,
            }
        }
        Objective::DecoderLossless | Objective::EncoderLossless => {
            let q = vars; // rows x -> a
            let mut m_xa = vec![0.0; n_x * n_a];
            let mut m_a = vec![0.0; n_a];
            let mut m_ay = vec![0.0; n_a * n_y];
            let mut m_y = vec![0.0; n_y];
            let mut h_xay = 0.0;
            for x in 0..n_x {
                let p_x = px.get(x);
                for a in 0..n_a {
                    let w = p_x * q[x][a];
                    if w <= 0.0 {
                        continue;
                    }
                    m_xa[x * n_a + a] += w;
                    m_a[a] += w;
                    let yrow = pyxa.row(pair_index(x, a, n_a));
                    for y in 0..n_y {
                        let p = w * yrow[y];
                        if p <= 0.0 {
                            continue;
                        }
                        h_xay -= xlog2x(p);
                        m_ay[a * n_y + y] += p;
                        m_y[y] += p;
                    }
                }
            }
            let rate = if inst.objective == Objective::DecoderLossless {
                // I(X;A) + H(X|Y,A)
                let i_xa = h_x + entropy_slice(&m_a) - entropy_slice(&m_xa);
                i_xa + (h_xay - entropy_slice(&m_ay))
            } else {
                // H(X) - I(Y; A, X)
                h_x - (entropy_slice(&m_y) + entropy_slice(&m_xa) - h_xay)
            };
            Eval {
                rate,
                distortion: 0.0,
                cost: cost_of(&m_xa),
                decoder: Vec::new(),
            }
        }
        Objective::EncoderBoundLower | Objective::EncoderBoundClosed => {
            let closed = inst.objective == Objective::EncoderBoundClosed;
            let n_r = spec.n_repro();
            let pa = &vars[..n_x]; // rows x -> a
            let pe = &vars[n_x..]; // rows (x, a, y) -> xhat
            let mut m_xa = vec![0.0; n_x * n_a];
            let mut m_a = vec![0.0; n_a];
            let mut m_y = vec![0.0; n_y];
            let mut m_ay = vec![0.0; n_a * n_y];
            let mut m_xh = vec![0.0; n_r];
            let mut m_xxh = vec![0.0; n_x * n_r];
            let mut m_xhay = vec![0.0; n_r * n_a * n_y];
            let mut m_xay_h = 0.0; // H(X, A, Y), accumulated on the fly
            let mut h_full = 0.0; // H(X, Xhat, A, Y)
            let mut distortion = 0.0;
            for x in 0..n_x {
                let p_x = px.get(x);
                for a in 0..n_a {
                    let w0 = p_x * pa[x][a];
                    if w0 <= 0.0 {
                        continue;
                    }
                    m_xa[x * n_a + a] += w0;
                    m_a[a] += w0;
                    let yrow = pyxa.row(pair_index(x, a, n_a));
                    for y in 0..n_y {
                        let w1 = w0 * yrow[y];
                        if w1 <= 0.0 {
                            continue;
                        }
                        m_y[y] += w1;
                        m_ay[a * n_y + y] += w1;
                        m_xay_h -= xlog2x(w1);
                        let row = &pe[(x * n_a + a) * n_y + y];
                        for xh in 0..n_r {
                            let p = w1 * row[xh];
                            if p <= 0.0 {
                                continue;
                            }
                            m_xh[xh] += p;
                            m_xxh[x * n_r + xh] += p;
                            m_xhay[(xh * n_a + a) * n_y + y] += p;
                            h_full -= xlog2x(p);
                            distortion += p * spec.rho().get(x, xh);
                        }
                    }
                }
            }
            let rate = if closed {
                // I(Xhat; X | A, Y) + I(X;A) - I(Y;A)
                let cmi =
                    entropy_slice(&m_xhay) + m_xay_h - h_full - entropy_slice(&m_ay);
                let i_xa = h_x + entropy_slice(&m_a) - entropy_slice(&m_xa);
                let i_ya =
                    entropy_slice(&m_y) + entropy_slice(&m_a) - entropy_slice(&m_ay);
                cmi + i_xa - i_ya
            } else {
                // I(X; Xhat) - I(Y; X, A)
                let i_xxh = h_x + entropy_slice(&m_xh) - entropy_slice(&m_xxh);
                let i_yxa = entropy_slice(&m_y) + entropy_slice(&m_xa) - m_xay_h;
                i_xxh - i_yxa
            };
            Eval {
                rate,
                distortion,
                cost: cost_of(&m_xa),
                decoder: Vec::new(),
            }
        }
        Objective::EncoderBoundOpen => {
            let pa = &vars[..n_x]; // rows x -> a
            let pu = &vars[n_x..]; // rows (x, a) -> u
            let mut m_xa = vec![0.0; n_x * n_a];
            let mut m_a = vec![0.0; n_a];
            let mut m_y = vec![0.0; n_y];
            let mut m_ay = vec![0.0; n_a * n_y];
            let mut m_xay = vec![0.0; n_x * n_a * n_y];
            let mut m_uay = vec![0.0; n_u * n_a * n_y];
            let mut h_full = 0.0; // H(X, U, A, Y)
            let n_cells = n_a * n_u * n_y;
            let mut m_cell_x = vec![0.0; n_cells * n_x];
            for x in 0..n_x {
                let p_x = px.get(x);
                for a in 0..n_a {
                    let w0 = p_x * pa[x][a];
                    if w0 <= 0.0 {
                        continue;
                    }
                    m_xa[x * n_a + a] += w0;
                    m_a[a] += w0;
                    let yrow = pyxa.row(pair_index(x, a, n_a));
                    let urow = &pu[x * n_a + a];
                    for u in 0..n_u {
                        let w = w0 * urow[u];
                        if w <= 0.0 {
                            continue;
                        }
                        for y in 0..n_y {
                            let p = w * yrow[y];
                            if p <= 0.0 {
                                continue;
                            }
                            m_y[y] += p;
                            m_ay[a * n_y + y] += p;
                            m_xay[(x * n_a + a) * n_y + y] += p;
                            m_uay[(u * n_a + a) * n_y + y] += p;
                            h_full -= xlog2x(p);
                            m_cell_x[((a * n_u + u) * n_y + y) * n_x + x] += p;
                        }
                    }
                }
            }
            let cmi = entropy_slice(&m_uay) + entropy_slice(&m_xay)
                - h_full
                - entropy_slice(&m_ay);
            let i_xa = h_x + entropy_slice(&m_a) - entropy_slice(&m_xa);
            let i_ya = entropy_slice(&m_y) + entropy_slice(&m_a) - entropy_slice(&m_ay);
            let (decoder, distortion) = bayes_decoder(&m_cell_x, n_cells, n_x, spec);
            Eval {
                rate: cmi + i_xa - i_ya,
                distortion,
                cost: cost_of(&m_xa),
                decoder,
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Mirror-descent minimization
// ---------------------------------------------------------------------------

type Vars = Vec<Vec<f64>>;

fn uniform_vars(inst: &Instance) -> Vars {
    let mut vars = Vec::new();
    for (rows, dim) in inst.layout() {
        for _ in 0..rows {
            vars.push(vec![1.0 / dim as f64; dim]);
        }
    }
    vars
}

/// Each row concentrated on its own index: the near-deterministic policy
/// that low-distortion optima live close to, which random starts reach
/// only rarely because its basin is narrow.
fn identity_vars(inst: &Instance) -> Vars {
    let mut vars = Vec::new();
    for (rows, dim) in inst.layout() {
        for r in 0..rows {
            let mut row = vec![0.1 / dim as f64; dim];
            row[r % dim] += 0.9;
            vars.push(row);
        }
    }
    vars
}

fn random_vars(inst: &Instance, rng: &mut ChaCha20Rng) -> Vars {
    let mut vars = Vec::new();
    for (rows, dim) in inst.layout() {
        for _ in 0..rows {
            // Dirichlet(1) via normalized exponentials
            let mut row: Vec<f64> = (0..dim)
                .map(|_| -f64::ln(1.0 - rng.gen::<f64>()))
                .collect();
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= s);
            vars.push(row);
        }
    }
    vars
}

fn renormalize(row: &mut [f64]) {
    let mut s = 0.0;
    for v in row.iter_mut() {
        if *v < ENTRY_FLOOR {
            *v = ENTRY_FLOOR;
        }
        s += *v;
    }
    for v in row.iter_mut() {
        *v /= s;
    }
}

struct DescentOutcome {
    vars: Vars,
    eval: Eval,
    lagrangian: f64,
    converged: bool,
}

fn descend(
    inst: &Instance,
    mut vars: Vars,
    weights: &LagrangeWeights,
    cfg: &SolverConfig,
) -> Result<DescentOutcome> {
    vars.iter_mut().for_each(|r| renormalize(r));
    let lag = |v: &Vars| evaluate_policy(inst, v).lagrangian(weights);
    let mut l = lag(&vars);
    if !l.is_finite() {
        return Err(VendError::NonFinite(format!("lagrangian = {l}")));
    }
    let mut eta = cfg.step_init;
    let mut grad: Vars = vars.iter().map(|r| vec![0.0; r.len()]).collect();
    let mut quiet = 0usize;
    let mut converged = false;
    for _ in 0..cfg.max_iters {
        let base = l;
        // directional derivatives along simplex edges (the common additive
        // shift per row cancels in the multiplicative update)
        for r in 0..vars.len() {
            let saved = vars[r].clone();
            for i in 0..saved.len() {
                let scale = 1.0 + GRAD_STEP;
                for (j, v) in vars[r].iter_mut().enumerate() {
                    *v = (saved[j] + if i == j { GRAD_STEP } else { 0.0 }) / scale;
                }
                grad[r][i] = (lag(&vars) - base) / GRAD_STEP;
            }
            vars[r] = saved;
        }
        let mut accepted = false;
        while eta >= 1e-10 {
            let mut cand = vars.clone();
            for r in 0..cand.len() {
                for i in 0..cand[r].len() {
                    let arg = (-eta * grad[r][i]).clamp(-40.0, 40.0);
                    cand[r][i] *= arg.exp();
                }
                renormalize(&mut cand[r]);
            }
            let lc = lag(&cand);
            if lc < base {
                vars = cand;
                l = lc;
                accepted = true;
                eta = (eta * cfg.step_growth).min(100.0);
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            converged = true; // no descent direction within step resolution
            break;
        }
        if base - l < cfg.objective_tol {
            quiet += 1;
            if quiet >= 4 {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    let eval = evaluate_policy(inst, &vars);
    let lagrangian = eval.lagrangian(weights);
    Ok(DescentOutcome {
        vars,
        eval,
        lagrangian,
        converged,
    })
}

fn policy_from(inst: &Instance, out: DescentOutcome) -> Result<PolicyPoint> {
    let mut kernels = Vec::new();
    let mut offset = 0;
    for (rows, _dim) in inst.layout() {
        let block: Vec<Vec<f64>> = out.vars[offset..offset + rows]
            .iter()
            .map(|r| {
                let s: f64 = r.iter().sum();
                r.iter().map(|v| v / s).collect()
            })
            .collect();
        kernels.push(StochasticKernel::new(block)?);
        offset += rows;
    }
    Ok(PolicyPoint {
        kernels,
        decoder: out.eval.decoder.clone(),
        rate: out.eval.rate,
        distortion: out.eval.distortion,
        cost: out.eval.cost,
        lagrangian: out.lagrangian,
        converged: out.converged,
    })
}

/// Multi-start mirror-descent minimization of `objective + lambda_d D +
/// lambda_c C` for an explicit instance (custom |U| allowed). Restart 0
/// is the warm start when one is supplied (uniform otherwise), restart 1
/// is the identity-concentrated start, and the rest are random. Restarts
/// run in parallel and are merged deterministically (min by objective,
/// ties by lowest restart index).
pub fn minimize_instance(
    inst: &Instance,
    weights: &LagrangeWeights,
    cfg: &SolverConfig,
    warm: Option<&[Vec<f64>]>,
) -> Result<PolicyPoint> {
    cfg.validate()?;
    let outcomes: Vec<(usize, Result<DescentOutcome>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let init = if i == 0 {
                match warm {
                    Some(w) if w.len() == inst.total_rows() => w.to_vec(),
                    _ => uniform_vars(inst),
                }
            } else if i == 1 {
                identity_vars(inst)
            } else {
                let mut rng = ChaCha20Rng::seed_from_u64(
                    cfg.seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                );
                random_vars(inst, &mut rng)
            };
            (i, descend(inst, init, weights, cfg))
        })
        .collect();
    let mut best: Option<(usize, DescentOutcome)> = None;
    for (i, out) in outcomes {
        let out = out?;
        best = match best {
            None => Some((i, out)),
            Some((bi, b)) => {
                if out.lagrangian < b.lagrangian {
                    Some((i, out))
                } else {
                    Some((bi, b))
                }
            }
        };
    }
    let (_, out) = best.expect("restarts >= 1");
    policy_from(inst, out)
}

/// Minimizes the registered functional for `spec` at the given Lagrange
/// weights, with the default auxiliary cardinality |X||A| + 2.
pub fn minimize_lagrangian(
    objective: Objective,
    spec: &ProblemSpec,
    weights: &LagrangeWeights,
    cfg: &SolverConfig,
) -> Result<PolicyPoint> {
    minimize_instance(&Instance::new(spec, objective), weights, cfg, None)
}

// ---------------------------------------------------------------------------
// Grid oracle
// ---------------------------------------------------------------------------

fn binom(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out.saturating_mul(n - i) / (i + 1);
    }
    out
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<f64>> {
    fn rec(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=total {
            prefix.push(k);
            rec(total - k, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|v| v.into_iter().map(|k| k as f64 / total as f64).collect())
        .collect()
}

fn enumerate_best(
    inst: &Instance,
    weights: &LagrangeWeights,
    candidates: &[Vec<Vec<f64>>], // per row, candidate simplex points
) -> (Vars, f64) {
    fn rec(
        inst: &Instance,
        weights: &LagrangeWeights,
        candidates: &[Vec<Vec<f64>>],
        row: usize,
        current: &mut Vars,
        best: &mut (Option<Vars>, f64),
    ) {
        if row == candidates.len() {
            let l = evaluate_policy(inst, current).lagrangian(weights);
            if l < best.1 {
                *best = (Some(current.clone()), l);
            }
            return;
        }
        for cand in &candidates[row] {
            current.push(cand.clone());
            rec(inst, weights, candidates, row + 1, current, best);
            current.pop();
        }
    }
    let mut best = (None, f64::INFINITY);
    rec(inst, weights, candidates, 0, &mut Vec::new(), &mut best);
    (best.0.expect("nonempty grid"), best.1)
}

/// Exhaustive minimization over a uniform simplex grid: every kernel row is
/// enumerated at the given per-coordinate resolution and the reconstruction
/// table is set to the Bayes optimum for each grid point.
pub fn grid_oracle(
    objective: Objective,
    spec: &ProblemSpec,
    weights: &LagrangeWeights,
    resolution: usize,
) -> Result<PolicyPoint> {
    grid_oracle_with_budget(
        &Instance::new(spec, objective),
        weights,
        resolution,
        DEFAULT_ORACLE_BUDGET,
    )
}

/// Grid oracle with an explicit instance and point budget.
pub fn grid_oracle_with_budget(
    inst: &Instance,
    weights: &LagrangeWeights,
    resolution: usize,
    budget: u128,
) -> Result<PolicyPoint> {
    if resolution < 2 {
        return Err(VendError::Invalid("oracle resolution must be >= 2".into()));
    }
    let mut total: u128 = 1;
    let mut candidates: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut per_dim: Vec<(usize, Vec<Vec<f64>>)> = Vec::new();
    for (rows, dim) in inst.layout() {
        let count = binom((resolution + dim - 1) as u128, (dim - 1) as u128);
        for _ in 0..rows {
            total = total.saturating_mul(count);
        }
        if !per_dim.iter().any(|(d, _)| *d == dim) {
            per_dim.push((dim, compositions(resolution, dim)));
        }
        let list = per_dim.iter().find(|(d, _)| *d == dim).unwrap().1.clone();
        for _ in 0..rows {
            candidates.push(list.clone());
        }
    }
    if total > budget {
        return Err(VendError::BudgetExceeded {
            points: total,
            budget,
        });
    }
    let (vars, lagr) = enumerate_best(inst, weights, &candidates);
    let eval = evaluate_policy(inst, &vars);
    policy_from(
        inst,
        DescentOutcome {
            vars,
            eval,
            lagrangian: lagr,
            converged: true,
        },
    )
}

fn bounded_compositions(total: isize, lo: &[isize], hi: &[isize]) -> Vec<Vec<f64>> {
    fn rec(
        idx: usize,
        remaining: isize,
        lo: &[isize],
        hi: &[isize],
        prefix: &mut Vec<isize>,
        out: &mut Vec<Vec<isize>>,
    ) {
        if idx == lo.len() - 1 {
            if remaining >= lo[idx] && remaining <= hi[idx] {
                prefix.push(remaining);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let rest_lo: isize = lo[idx + 1..].iter().sum();
        let rest_hi: isize = hi[idx + 1..].iter().sum();
        for k in lo[idx]..=hi[idx] {
            let rem = remaining - k;
            if rem < rest_lo || rem > rest_hi {
                continue;
            }
            prefix.push(k);
            rec(idx + 1, rem, lo, hi, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, total, lo, hi, &mut Vec::new(), &mut out);
    let t = total as f64;
    out.into_iter()
        .map(|v| v.into_iter().map(|k| k as f64 / t).collect())
        .collect()
}

/// Grid oracle followed by enumeration-only zoom: the full grid at
/// `resolution` is refined by repeatedly enumerating the +-1-step
/// neighborhood of the incumbent at successively doubled resolutions.
/// Stays independent of the mirror-descent path.
pub fn grid_oracle_refined(
    inst: &Instance,
    weights: &LagrangeWeights,
    resolution: usize,
    levels: usize,
) -> Result<PolicyPoint> {
    let base = grid_oracle_with_budget(inst, weights, resolution, DEFAULT_ORACLE_BUDGET)?;
    let mut vars: Vars = base
        .kernels
        .iter()
        .flat_map(|k| (0..k.input_size()).map(|i| k.row(i).to_vec()).collect::<Vec<_>>())
        .collect();
    let mut best_l = base.lagrangian;
    for level in 1..=levels {
        let scale = (resolution << level) as isize;
        // moves at fixed scale until no improvement
        for _ in 0..60 {
            let mut candidates: Vec<Vec<Vec<f64>>> = Vec::new();
            for row in &vars {
                let mut center: Vec<isize> = row
                    .iter()
                    .map(|v| (v * scale as f64).round() as isize)
                    .collect();
                // repair rounding so the center sums to scale
                let mut diff: isize = scale - center.iter().sum::<isize>();
                let mut i = 0;
                while diff != 0 {
                    let step = diff.signum();
                    if center[i] + step >= 0 {
                        center[i] += step;
                        diff -= step;
                    }
                    i = (i + 1) % center.len();
                }
                let lo: Vec<isize> = center.iter().map(|&c| (c - 1).max(0)).collect();
                let hi: Vec<isize> = center.iter().map(|&c| c + 1).collect();
                candidates.push(bounded_compositions(scale, &lo, &hi));
            }
            let (v, l) = enumerate_best(inst, weights, &candidates);
            if l < best_l - 1e-14 {
                best_l = l;
                vars = v;
            } else {
                break;
            }
        }
    }
    let eval = evaluate_policy(inst, &vars);
    policy_from(
        inst,
        DescentOutcome {
            lagrangian: eval.lagrangian(weights),
            vars,
            eval,
            converged: true,
        },
    )
}

// ---------------------------------------------------------------------------
// Constrained queries and tradeoff sweeps
// ---------------------------------------------------------------------------

/// Full-information lower bound on the achievable expected distortion.
pub fn min_distortion(inst: &Instance) -> f64 {
    let spec = inst.spec;
    if inst.objective.is_lossless() {
        return 0.0;
    }
    let n_r = spec.n_repro();
    if inst.objective == Objective::Indirect {
        // decoder learns at most Z; it also sees Y under a per-z action
        let pzx = spec.p_z_given_x().expect("indirect mode");
        let pyxza = spec.p_y_given_xza().expect("indirect mode");
        let (n_x, n_z, n_a, n_y) = (spec.n_x(), spec.n_z(), spec.n_a(), spec.n_y());
        let mut total = 0.0;
        for z in 0..n_z {
            let mut best = f64::INFINITY;
            for a in 0..n_a {
                let mut d_za = 0.0;
                for y in 0..n_y {
                    let mut cell = f64::INFINITY;
                    for xh in 0..n_r {
                        let s: f64 = (0..n_x)
                            .map(|x| {
                                spec.px().get(x)
                                    * pzx.get(x, z)
                                    * pyxza.get(triple_index(x, z, a, n_z, n_a), y)
                                    * spec.rho().get(x, xh)
                            })
                            .sum();
                        cell = cell.min(s);
                    }
                    d_za += cell;
                }
                best = best.min(d_za);
            }
            total += best;
        }
        total
    } else {
        (0..spec.n_x())
            .map(|x| {
                let m: f64 = (0..n_r)
                    .map(|xh| spec.rho().get(x, xh))
                    .fold(f64::INFINITY, f64::min);
                spec.px().get(x) * m
            })
            .sum()
    }
}

/// A supporting cut of the dual function: the affine map
/// lambda -> rate + lambda_d (dist - d) + lambda_c (cost - c) generated by
/// one solved policy.
#[derive(Debug, Clone, Copy)]
struct Cut {
    rate: f64,
    du: f64,
    cu: f64,
}

impl Cut {
    fn at(&self, ld: f64, lc: f64) -> f64 {
        self.rate + ld * self.du + lc * self.cu
    }
}

fn cut_envelope(cuts: &[Cut], ld: f64, lc: f64) -> f64 {
    cuts.iter().map(|k| k.at(ld, lc)).fold(f64::INFINITY, f64::min)
}

/// Maximizes min over `cuts` of the affine cut values over the box
/// [0, ld_max] x [0, lc_max]; returns the maximizing point and the value.
/// The maximum of a piecewise-linear concave function sits at a box corner,
/// at the crossing of two cuts on a box edge, or at the crossing of three
/// cuts in the interior.
fn maximize_cut_envelope(cuts: &[Cut], ld_max: f64, lc_max: f64) -> ((f64, f64), f64) {
    let mut candidates: Vec<(f64, f64)> = vec![
        (0.0, 0.0),
        (ld_max, 0.0),
        (0.0, lc_max),
        (ld_max, lc_max),
    ];
    let n = cuts.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (&cuts[i], &cuts[j]);
            let (dr, du, dc) = (a.rate - b.rate, a.du - b.du, a.cu - b.cu);
            // crossing restricted to each box edge
            if du.abs() > 1e-15 {
                for lc in [0.0, lc_max] {
                    let ld = -(dr + lc * dc) / du;
                    if (0.0..=ld_max).contains(&ld) {
                        candidates.push((ld, lc));
                    }
                }
            }
            if dc.abs() > 1e-15 {
                for ld in [0.0, ld_max] {
                    let lc = -(dr + ld * du) / dc;
                    if (0.0..=lc_max).contains(&lc) {
                        candidates.push((ld, lc));
                    }
                }
            }
            // interior crossing of three cuts
            for k in (j + 1)..n {
                let c3 = &cuts[k];
                let (er, eu, ec) = (a.rate - c3.rate, a.du - c3.du, a.cu - c3.cu);
                let det = du * ec - dc * eu;
                if det.abs() < 1e-18 {
                    continue;
                }
                let ld = (-dr * ec + dc * er) / det;
                let lc = (-du * er + dr * eu) / det;
                if (0.0..=ld_max).contains(&ld) && (0.0..=lc_max).contains(&lc) {
                    candidates.push((ld, lc));
                }
            }
        }
    }
    let mut best = ((0.0, 0.0), f64::NEG_INFINITY);
    for (ld, lc) in candidates {
        let v = cut_envelope(cuts, ld, lc);
        if v > best.1 {
            best = ((ld, lc), v);
        }
    }
    best
}

/// Least rate meeting `distortion <= d` and `cost <= c`. The value is the
/// maximum over nonnegative Lagrange multipliers of the dual
/// g(lambda) = min_policy [rate + lambda_d (dist - d) + lambda_c (cost - c)],
/// exact on the lower convex envelope. The concave piecewise-linear dual is
/// maximized by a cutting-plane iteration: each solve contributes a
/// supporting cut, and the next multiplier pair is the maximizer of the
/// current cut envelope.
pub fn constrained_rate(inst: &Instance, d: f64, c: f64, cfg: &SolverConfig) -> Result<f64> {
    cfg.validate()?;
    let spec = inst.spec;
    if !inst.objective.is_lossless() {
        let dmin = min_distortion(inst);
        if d < dmin - 1e-9 {
            return Err(VendError::Infeasible(format!(
                "distortion target {d} below the full-information minimum {dmin}"
            )));
        }
    }
    let cmin = spec.lambda().min();
    if c < cmin - 1e-12 {
        return Err(VendError::Infeasible(format!(
            "cost target {c} below the cheapest action cost {cmin}"
        )));
    }
    // inactive axes are pinned to zero by shrinking the search box
    let ld_max = if inst.objective.is_lossless() {
        0.0
    } else {
        cfg.lambda_max
    };
    let lc_max = if c >= spec.lambda().max() - 1e-12 {
        0.0
    } else {
        cfg.lambda_max
    };

    let mut warm: Option<Vars> = None;
    let mut cuts: Vec<Cut> = Vec::new();
    let mut best_g = f64::NEG_INFINITY;
    let (mut ld, mut lc) = (0.0, 0.0);
    for _ in 0..70 {
        let w = LagrangeWeights {
            lambda_d: ld,
            lambda_c: lc,
        };
        let p = minimize_instance(inst, &w, cfg, warm.as_deref())?;
        warm = Some(
            p.kernels
                .iter()
                .flat_map(|k| (0..k.input_size()).map(|i| k.row(i).to_vec()).collect::<Vec<_>>())
                .collect(),
        );
        best_g = best_g.max(p.rate + ld * (p.distortion - d) + lc * (p.cost - c));
        cuts.push(Cut {
            rate: p.rate,
            du: p.distortion - d,
            cu: p.cost - c,
        });
        let ((nld, nlc), upper) = maximize_cut_envelope(&cuts, ld_max, lc_max);
        if upper - best_g <= 1e-9 {
            break;
        }
        if (nld - ld).abs() < 1e-12 && (nlc - lc).abs() < 1e-12 {
            break;
        }
        ld = nld;
        lc = nlc;
    }
    Ok(best_g.max(0.0))
}

fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Sweeps Lagrange weights over a geometric grid and interpolates the lower
/// convex envelope at every requested (d, c) pair. The resulting curve is
/// convex and nonincreasing in both d and c by construction.
pub fn sweep_tradeoff(
    objective: Objective,
    spec: &ProblemSpec,
    d_grid: &[f64],
    c_grid: &[f64],
    cfg: &SolverConfig,
) -> Result<TradeoffCurve> {
    cfg.validate()?;
    if d_grid.is_empty() || c_grid.is_empty() {
        return Err(VendError::Invalid("sweep grids must be nonempty".into()));
    }
    for g in [d_grid, c_grid] {
        if g.windows(2).any(|w| w[0] > w[1]) {
            return Err(VendError::Invalid("sweep grids must be sorted ascending".into()));
        }
    }
    let inst = Instance::new(spec, objective);
    let mut lambdas = vec![0.0];
    lambdas.extend(geomspace(cfg.lambda_min, cfg.lambda_max, cfg.lambda_points));
    let lambda_d_list: Vec<f64> = if inst.objective.is_lossless() {
        vec![0.0]
    } else {
        lambdas.clone()
    };
    let mut support = Vec::new();
    let mut warm: Option<Vars> = None;
    for &ld in &lambda_d_list {
        for &lc in &lambdas {
            let w = LagrangeWeights {
                lambda_d: ld,
                lambda_c: lc,
            };
            let p = minimize_instance(&inst, &w, cfg, warm.as_deref())?;
            warm = Some(
                p.kernels
                    .iter()
                    .flat_map(|k| {
                        (0..k.input_size()).map(|i| k.row(i).to_vec()).collect::<Vec<_>>()
                    })
                    .collect(),
            );
            support.push(SupportPoint {
                lambda_d: ld,
                lambda_c: lc,
                rate: p.rate,
                distortion: p.distortion,
                cost: p.cost,
            });
        }
    }
    let dmin = min_distortion(&inst);
    let cmin = spec.lambda().min();
    let mut points = Vec::new();
    for &d in d_grid {
        for &c in c_grid {
            let feasible = d >= dmin - 1e-9 && c >= cmin - 1e-12;
            let rate = if feasible {
                support
                    .iter()
                    .map(|s| s.rate + s.lambda_d * (s.distortion - d) + s.lambda_c * (s.cost - c))
                    .fold(0.0, f64::max)
            } else {
                f64::NAN
            };
            points.push(CurvePoint {
                d,
                c,
                rate,
                feasible,
            });
        }
    }
    Ok(TradeoffCurve { points, support })
}
