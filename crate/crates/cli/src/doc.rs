//! JSON problem documents: parsing, validation, and conversion to the
//! in-memory problem descriptions used by the solver.

use serde::{Deserialize, Serialize};
use vendinfo::{
    CostVector, DistortionMatrix, Mode, ProbVector, ProblemSpec, SolverConfig, StochasticKernel,
};

/// Optional per-document solver overrides; global command-line flags take
/// precedence over these.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
}

/// A problem instance as written on disk. Kernels are nested arrays in
/// natural index order: `p_y_given_xa[x][a][y]`, `p_z_given_x[x][z]`,
/// `p_y_given_xza[x][z][a][y]`, `rho[x][xhat]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub name: String,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_y_given_xa: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_z_given_x: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_y_given_xza: Option<Vec<Vec<Vec<Vec<f64>>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverOverrides>,
}

/// The problem a document describes: either a finite-alphabet spec or the
/// continuous quadratic-Gaussian setting (closed forms only).
#[derive(Debug, Clone)]
pub enum ParsedProblem {
    Discrete(ProblemSpec),
    Gaussian { var_x: f64, var_n: f64 },
}

/// Result of turning a document into something solvable.
#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub problem: ParsedProblem,
    pub d_grid: Vec<f64>,
    pub c_grid: Vec<f64>,
    pub solver: SolverConfig,
    /// Rows that were re-normalized because their mass was off by more
    /// than 1e-9 but within 1e-6.
    pub warnings: Vec<String>,
}

/// Bundled example documents, addressable by name from `solve`.
pub const BUNDLED: &[(&str, &str)] = &[
    ("zs_lossless", include_str!("../instances/zs_lossless.json")),
    ("zs_cost", include_str!("../instances/zs_cost.json")),
    ("ternary", include_str!("../instances/ternary.json")),
    (
        "observe_or_not_identity",
        include_str!("../instances/observe_or_not_identity.json"),
    ),
    (
        "observe_or_not_erasure",
        include_str!("../instances/observe_or_not_erasure.json"),
    ),
    ("gaussian_unit", include_str!("../instances/gaussian_unit.json")),
    ("markov_bsc", include_str!("../instances/markov_bsc.json")),
    ("indirect_bsc", include_str!("../instances/indirect_bsc.json")),
];

/// Looks up a bundled document by name.
pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("document parse error: {e}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }

    /// Validates the document and builds the solvable problem, the sweep
    /// grids, and the effective solver configuration.
    pub fn build(&self, base: &SolverConfig) -> Result<ParseOutcome, String> {
        let mode = Mode::parse(&self.mode).map_err(|e| e.to_string())?;
        let mut solver = base.clone();
        if let Some(o) = &self.solver {
            if let Some(s) = o.seed {
                solver.seed = s;
            }
            if let Some(r) = o.restarts {
                solver.restarts = r;
            }
            if let Some(g) = o.grid_resolution {
                solver.grid_resolution = g;
            }
            if let Some(m) = o.max_iters {
                solver.max_iters = m;
            }
        }
        let mut warnings = Vec::new();
        let problem = if mode == Mode::Gaussian {
            let var_x = self.var_x.unwrap_or(1.0);
            let var_n = self.var_n.unwrap_or(1.0);
            if !(var_x > 0.0) || !(var_n > 0.0) {
                return Err(format!(
                    "gaussian variances must be positive (var_x = {var_x}, var_n = {var_n})"
                ));
            }
            ParsedProblem::Gaussian { var_x, var_n }
        } else {
            ParsedProblem::Discrete(self.build_discrete(mode, &mut warnings)?)
        };
        let d_grid = self.d.clone().unwrap_or_else(|| vec![0.0]);
        let c_grid = self.c.clone().unwrap_or_else(|| match &problem {
            ParsedProblem::Discrete(spec) => vec![spec.unconstrained_cost()],
            ParsedProblem::Gaussian { .. } => vec![0.0],
        });
        if d_grid.is_empty() || c_grid.is_empty() {
            return Err("d and c grids must be nonempty".into());
        }
        Ok(ParseOutcome {
            problem,
            d_grid,
            c_grid,
            solver,
            warnings,
        })
    }

    fn build_discrete(&self, mode: Mode, warnings: &mut Vec<String>) -> Result<ProblemSpec, String> {
        let p_x = self
            .p_x
            .as_ref()
            .ok_or_else(|| "missing field `p_x`".to_string())?;
        let lambda = self
            .lambda
            .as_ref()
            .ok_or_else(|| "missing field `lambda`".to_string())?;
        let rho = self
            .rho
            .as_ref()
            .ok_or_else(|| "missing field `rho`".to_string())?;
        let n_x = p_x.len();
        let n_a = lambda.len();
        if n_x == 0 || n_a == 0 {
            return Err("p_x and lambda must be nonempty".into());
        }

        let mut px_row = p_x.clone();
        normalize_row(&mut px_row, "p_x", warnings)?;
        let px = ProbVector::new(px_row).map_err(|e| e.to_string())?;

        if rho.len() != n_x {
            return Err(format!("rho has {} rows, expected {n_x}", rho.len()));
        }
        let n_repro = rho[0].len();
        for (x, row) in rho.iter().enumerate() {
            if row.len() != n_repro {
                return Err(format!(
                    "rho row x={x} has {} entries, expected {n_repro}",
                    row.len()
                ));
            }
        }
        let rho = DistortionMatrix::new(rho.clone()).map_err(|e| e.to_string())?;
        let lambda = CostVector::new(lambda.clone()).map_err(|e| e.to_string())?;

        if mode == Mode::Indirect {
            let pzx = self
                .p_z_given_x
                .as_ref()
                .ok_or_else(|| "indirect mode requires `p_z_given_x`".to_string())?;
            let pyxza = self
                .p_y_given_xza
                .as_ref()
                .ok_or_else(|| "indirect mode requires `p_y_given_xza`".to_string())?;
            if pzx.len() != n_x {
                return Err(format!("p_z_given_x has {} rows, expected {n_x}", pzx.len()));
            }
            let n_z = pzx[0].len();
            let mut z_rows = Vec::with_capacity(n_x);
            for (x, row) in pzx.iter().enumerate() {
                if row.len() != n_z {
                    return Err(format!(
                        "p_z_given_x row x={x} has {} entries, expected {n_z}",
                        row.len()
                    ));
                }
                let mut r = row.clone();
                normalize_row(&mut r, &format!("p_z_given_x row x={x}"), warnings)?;
                z_rows.push(r);
            }
            let p_z_given_x = StochasticKernel::new(z_rows).map_err(|e| e.to_string())?;

            if pyxza.len() != n_x {
                return Err(format!(
                    "p_y_given_xza has {} source blocks, expected {n_x}",
                    pyxza.len()
                ));
            }
            let n_y = pyxza[0][0][0].len();
            let mut rows = Vec::with_capacity(n_x * n_z * n_a);
            for (x, per_z) in pyxza.iter().enumerate() {
                if per_z.len() != n_z {
                    return Err(format!(
                        "p_y_given_xza block x={x} has {} observation entries, expected {n_z}",
                        per_z.len()
                    ));
                }
                for (z, per_a) in per_z.iter().enumerate() {
                    if per_a.len() != n_a {
                        return Err(format!(
                            "p_y_given_xza block x={x},z={z} has {} action entries, expected {n_a}",
                            per_a.len()
                        ));
                    }
                    for (a, row) in per_a.iter().enumerate() {
                        if row.len() != n_y {
                            return Err(format!(
                                "p_y_given_xza row x={x},z={z},a={a} has {} entries, expected {n_y}",
                                row.len()
                            ));
                        }
                        let mut r = row.clone();
                        normalize_row(&mut r, &format!("p_y_given_xza row x={x},z={z},a={a}"), warnings)?;
                        rows.push(r);
                    }
                }
            }
            let p_y_given_xza = StochasticKernel::new(rows).map_err(|e| e.to_string())?;

            // the (X, A) marginal side-information channel is derived so it
            // is always consistent with the observation chain
            let mut marginal = Vec::with_capacity(n_x * n_a);
            for x in 0..n_x {
                for a in 0..n_a {
                    let mut row = vec![0.0; n_y];
                    for z in 0..n_z {
                        let w = p_z_given_x.get(x, z);
                        for (y, cell) in row.iter_mut().enumerate() {
                            *cell += w * p_y_given_xza.get((x * n_z + z) * n_a + a, y);
                        }
                    }
                    marginal.push(row);
                }
            }
            let p_y_given_xa = StochasticKernel::new(marginal).map_err(|e| e.to_string())?;
            ProblemSpec::new_indirect(px, p_z_given_x, p_y_given_xza, p_y_given_xa, rho, lambda)
                .map_err(|e| e.to_string())
        } else {
            let kernel = self
                .p_y_given_xa
                .as_ref()
                .ok_or_else(|| "missing field `p_y_given_xa`".to_string())?;
            if kernel.len() != n_x {
                return Err(format!(
                    "p_y_given_xa has {} source blocks, expected {n_x}",
                    kernel.len()
                ));
            }
            let n_y = kernel[0][0].len();
            let mut rows = Vec::with_capacity(n_x * n_a);
            for (x, per_a) in kernel.iter().enumerate() {
                if per_a.len() != n_a {
                    return Err(format!(
                        "p_y_given_xa block x={x} has {} action entries, expected {n_a}",
                        per_a.len()
                    ));
                }
                for (a, row) in per_a.iter().enumerate() {
                    if row.len() != n_y {
                        return Err(format!(
                            "p_y_given_xa row x={x},a={a} has {} entries, expected {n_y}",
                            row.len()
                        ));
                    }
                    let mut r = row.clone();
                    normalize_row(&mut r, &format!("p_y_given_xa row x={x},a={a}"), warnings)?;
                    rows.push(r);
                }
            }
            let p_y_given_xa = StochasticKernel::new(rows).map_err(|e| e.to_string())?;
            ProblemSpec::new(px, p_y_given_xa, rho, lambda, mode).map_err(|e| e.to_string())
        }
    }
}

/// Enforces the document mass policy on one probability row: within 1e-9
/// silently normalized, within 1e-6 normalized with a recorded warning,
/// otherwise rejected with the row named.
fn normalize_row(row: &mut [f64], what: &str, warnings: &mut Vec<String>) -> Result<(), String> {
    if row.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(format!("{what} contains a negative or non-finite entry"));
    }
    let s: f64 = row.iter().sum();
    let err = (s - 1.0).abs();
    if err > 1e-6 {
        return Err(format!("{what} sums to {s}, expected 1 within 1e-6"));
    }
    if err > 1e-9 {
        warnings.push(format!("{what} sums to {s}; re-normalized"));
    }
    if s > 0.0 {
        row.iter_mut().for_each(|p| *p /= s);
    }
    Ok(())
}
