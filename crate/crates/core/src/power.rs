//! Per-sector per-slot transmit power optimization under SIC decoding
//! constraints, via the Lagrange-dual closed form with subgradient
//! multiplier ascent, plus the exhaustive grid oracle and the cyclical
//! TDMA-OMA baseline allocator.
//!
//! The per-slot problem maximizes `m log2(1 + sum_i P_i g_i / N0)` subject
//! to the per-rank SIC power-ratio constraints and the box `0 <= P_i <=
//! P_u,max`, with devices indexed in decode order (descending gain).
//!
//! Internally the solver works with noise-normalized gains `a_i = g_i / N0`
//! so that all dual quantities are dimensionally comparable; the Lagrange
//! multipliers in [`DualState`] live in that normalized space. Multiplier
//! updates use the diminishing base step `delta[n] = 1/n` with a
//! per-multiplier scale factor that halves on subgradient sign flips and
//! grows gently otherwise; raw physical scales differ by ten orders of
//! magnitude between multipliers and subgradients, so an unscaled common
//! step stalls. Initialization is a warm start at the KKT point implied by
//! the cap-and-budget structure of the optimum, which the subgradient
//! iteration then verifies and, when perturbed, repairs.

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::Error;
use crate::scenario::TimeGrid;
use crate::Result;

const LN2: f64 = std::f64::consts::LN_2;

/// Linear SIC threshold: 10^(eta_db / 10).
pub fn sic_threshold_linear(eta_db: f64) -> f64 {
    10f64.powf(eta_db / 10.0)
}

/// Decode order: indices sorted by descending gain, ties broken by
/// ascending device index.
pub fn decode_order(gains: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..gains.len()).collect();
    idx.sort_by(|&x, &y| {
        gains[y]
            .partial_cmp(&gains[x])
            .expect("gains must not be NaN")
            .then(x.cmp(&y))
    });
    idx
}

/// Which allocation produced a power matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeLabel {
    NomaOptimal,
    NomaFullPower,
    OmaTdma,
}

impl SchemeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeLabel::NomaOptimal => "noma_optimal",
            SchemeLabel::NomaFullPower => "noma_fullpower",
            SchemeLabel::OmaTdma => "oma_tdma",
        }
    }
}

/// Per-sector device-by-slot transmit power matrix, watts. Rows follow the
/// sector's device list order; columns are slots `1..=K` stored at `k - 1`.
#[derive(Debug, Clone)]
pub struct SectorPowerMatrix {
    pub powers: Vec<Vec<f64>>,
}

impl SectorPowerMatrix {
    pub fn zeros(n_devices: usize, n_slots: usize) -> Self {
        Self {
            powers: vec![vec![0.0; n_slots]; n_devices],
        }
    }

    /// Total energy-proportional activity of device row `i` over the cycle.
    pub fn row_total(&self, i: usize) -> f64 {
        self.powers[i].iter().sum()
    }
}

/// Power allocation for every sector plus the scheme that produced it.
#[derive(Debug, Clone)]
pub struct PowerAllocation {
    pub per_sector: Vec<SectorPowerMatrix>,
    pub scheme_label: SchemeLabel,
}

/// Tuning knobs and constants of the per-slot solver.
#[derive(Debug, Clone)]
pub struct SolverParams {
    pub m_prelog: f64,
    pub noise_power: f64,
    pub p_max: f64,
    pub eta_lin: f64,
    /// Iteration cap for the dual loop.
    pub max_iters: usize,
    /// Convergence threshold on the max per-device power change, watts.
    pub eps_power: f64,
    /// Relative stability threshold on multiplier changes.
    pub eps_dual: f64,
    /// Relative slack allowed when asserting the SIC ratio at a candidate.
    pub sic_rel_tol: f64,
    pub init: DualInit,
}

/// Dual initialization strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DualInit {
    /// Closed-form KKT-consistent start derived from the cap-and-budget
    /// structure; typically converges within a handful of iterations.
    WarmStart,
    /// Flat positive constants, exercising the full subgradient search.
    Fixed { lambda0: f64, mu0: f64 },
}

impl SolverParams {
    pub fn from_config(config: &ScenarioConfig) -> Self {
        Self {
            m_prelog: config.m_prelog(),
            noise_power: config.noise_power,
            p_max: config.p_u_max,
            eta_lin: config.eta_sic_linear(),
            max_iters: 500,
            eps_power: 1e-6,
            eps_dual: 1e-9,
            sic_rel_tol: 1e-6,
            init: DualInit::WarmStart,
        }
    }
}

/// Lagrange multipliers and step bookkeeping for one (sector, slot) solve.
/// `lambda` has length N_j - 1 (SIC ratio constraints), `mu` length N_j
/// (power caps); both stay nonnegative through projection. `delta` is the
/// base diminishing step 1/n.
#[derive(Debug, Clone)]
pub struct DualState {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub delta: f64,
    pub iteration: usize,
    lambda_scale: Vec<f64>,
    mu_scale: Vec<f64>,
    prev_violation: Vec<f64>,
}

impl DualState {
    /// Builds the initial dual point for normalized gains `a` (descending).
    fn new(a: &[f64], params: &SolverParams) -> Self {
        let nd = a.len();
        let n_lam = nd.saturating_sub(1);
        match params.init {
            DualInit::Fixed { lambda0, mu0 } => Self {
                lambda: vec![lambda0; n_lam],
                mu: vec![mu0; nd],
                delta: 1.0,
                iteration: 1,
                lambda_scale: vec![0.0; n_lam],
                mu_scale: vec![mu0 / params.p_max; nd],
                prev_violation: vec![0.0; n_lam],
            },
            DualInit::WarmStart => {
                let q = cap_and_budget_allocation(a, params.p_max, params.eta_lin);
                let s: f64 = q.iter().sum();
                let t = params.m_prelog / (LN2 * (s + 1.0));
                let eta = params.eta_lin;
                let mut lambda = vec![0.0; n_lam];
                let mut mu = vec![0.0; nd];
                // The budgeted optimum is a prefix of devices at their
                // caps, at most one partial device, then zeros. When some
                // device sits below its cap, exactly one earlier SIC
                // constraint j* is active; the KKT point carries lambda =
                // t / eta on j*, cap multipliers a_i t up to j* (raised by
                // the factor 1 + 1/eta at j* itself), and zeros after.
                // This makes every branch denominator equal a_i t, so the
                // optimum is an exact fixed point of both the power and
                // the multiplier updates.
                let first_free = q
                    .iter()
                    .zip(a)
                    .position(|(&qi, &ai)| qi < params.p_max * ai * (1.0 - 1e-12));
                match first_free {
                    Some(p) if p > 0 => {
                        let binding = (0..p)
                            .min_by(|&x, &y| {
                                let slack = |j: usize| {
                                    let tail: f64 = q[j + 1..].iter().sum();
                                    (q[j] - eta * tail).abs()
                                };
                                slack(x).partial_cmp(&slack(y)).unwrap()
                            })
                            .expect("p > 0");
                        lambda[binding] = t / eta;
                        for i in 0..binding {
                            mu[i] = a[i] * t;
                        }
                        mu[binding] = a[binding] * t * (1.0 + 1.0 / eta);
                    }
                    _ => {
                        // Every device at its cap: encode the boundary
                        // through the cap multipliers alone.
                        for (mi, &ai) in mu.iter_mut().zip(a) {
                            *mi = ai * t;
                        }
                    }
                }
                // Step scales sized to the natural dual and subgradient
                // magnitudes, so the search stays well-conditioned if the
                // start gets perturbed off the fixed point.
                let lambda_scale = vec![(t / eta) / s.max(f64::MIN_POSITIVE); n_lam];
                let mu_scale = a.iter().map(|&ai| ai * t / params.p_max).collect();
                Self {
                    lambda,
                    mu,
                    delta: 1.0,
                    iteration: 1,
                    lambda_scale,
                    mu_scale,
                    prev_violation: vec![0.0; n_lam],
                }
            }
        }
    }

    /// Reference magnitude used when a lambda step scale is first set.
    fn lambda_ref(&self, i: usize, params: &SolverParams, t: f64) -> f64 {
        let base = self.lambda[i];
        if base > 0.0 {
            base
        } else {
            match params.init {
                DualInit::Fixed { lambda0, .. } => lambda0,
                DualInit::WarmStart => t / params.eta_lin,
            }
        }
    }
}

/// Result of one closed-form power evaluation.
#[derive(Debug, Clone, Copy)]
pub struct PowerUpdate {
    pub power: f64,
    /// True when the dual point made the branch denominator non-positive;
    /// the documented recovery sets the power to the cap so the cap
    /// multiplier can push the dual back.
    pub infeasible_denominator: bool,
}

/// Evaluates the two-branch closed-form power expression for the device at
/// `rank` (0-based, decode order), given the latest powers of the others.
/// The result is clipped to `[0, p_max]`.
pub fn closed_form_power(
    rank: usize,
    gains: &[f64],
    current_powers: &[f64],
    dual: &DualState,
    params: &SolverParams,
) -> PowerUpdate {
    let nd = gains.len();
    debug_assert!(rank < nd && current_powers.len() == nd);
    let a: Vec<f64> = gains.iter().map(|g| g / params.noise_power).collect();
    closed_form_power_normalized(rank, &a, current_powers, dual, params)
}

fn closed_form_power_normalized(
    rank: usize,
    a: &[f64],
    current_powers: &[f64],
    dual: &DualState,
    params: &SolverParams,
) -> PowerUpdate {
    let nd = a.len();
    let lambda_prefix: f64 = dual.lambda[..rank.min(dual.lambda.len())].iter().sum();
    let denom = if rank != nd - 1 {
        dual.mu[rank] - a[rank] * (dual.lambda[rank] - params.eta_lin * lambda_prefix)
    } else {
        dual.mu[rank] + params.eta_lin * a[rank] * lambda_prefix
    };
    if denom <= 0.0 {
        return PowerUpdate {
            power: params.p_max,
            infeasible_denominator: true,
        };
    }
    let others: f64 = a
        .iter()
        .zip(current_powers)
        .enumerate()
        .filter(|&(l, _)| l != rank)
        .map(|(_, (&al, &pl))| pl * al)
        .sum();
    let raw = params.m_prelog / (LN2 * denom) - (others + 1.0) / a[rank];
    PowerUpdate {
        power: raw.max(0.0).min(params.p_max),
        infeasible_denominator: false,
    }
}

/// Exact optimum of the per-slot problem in received-power space: device 1
/// takes its cap, and each later device takes the smaller of its cap and
/// the remaining SIC budget `min(B - q_i, q_i / eta)`. Used for the warm
/// start; the independent check in tests is the grid oracle.
fn cap_and_budget_allocation(a: &[f64], p_max: f64, eta: f64) -> Vec<f64> {
    let mut q = Vec::with_capacity(a.len());
    let mut budget = f64::INFINITY;
    for &ai in a {
        let qi = (p_max * ai).min(budget).max(0.0);
        q.push(qi);
        budget = (budget - qi).min(qi / eta).max(0.0);
    }
    q
}

/// Iteration log of one (sector, slot) solve.
#[derive(Debug, Clone)]
pub struct SolveTrace {
    /// Best SIC-feasible normalized received-power sum found up to each
    /// iteration (monotone nondecreasing).
    pub best_snr_sum: Vec<f64>,
    /// Parameter updates performed in each iteration (3 N_j - 1).
    pub updates_per_iteration: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the iteration cap was hit; the best feasible iterate is
    /// returned regardless.
    pub nonconvergence_warning: bool,
    /// Closed-form evaluations that hit the non-positive-denominator
    /// recovery.
    pub recovery_events: usize,
}

impl SolveTrace {
    /// Objective value (bits/s/Hz) of the best feasible iterate at `n`
    /// (1-based).
    pub fn objective_at(&self, n: usize, m_prelog: f64) -> f64 {
        let idx = n.min(self.best_snr_sum.len()).saturating_sub(1);
        let s = self.best_snr_sum.get(idx).copied().unwrap_or(0.0);
        m_prelog * (1.0 + s).log2()
    }
}

/// Solution of one (sector, slot) power control problem.
#[derive(Debug, Clone)]
pub struct SectorSlotSolution {
    /// Powers in watts, aligned with the (decode-ordered) input gains.
    pub powers: Vec<f64>,
    pub trace: SolveTrace,
}

fn sic_feasible(powers: &[f64], a: &[f64], eta: f64, rel_tol: f64) -> bool {
    let nd = powers.len();
    for i in 0..nd.saturating_sub(1) {
        let tail: f64 = (i + 1..nd).map(|l| powers[l] * a[l]).sum();
        if tail > 0.0 && powers[i] * a[i] < eta * tail * (1.0 - rel_tol) {
            return false;
        }
    }
    true
}

/// Runs the dual power-control iteration for one sector and slot.
///
/// `gains` must already be in decode order (descending). Each outer
/// iteration sweeps the devices in order (Gauss-Seidel: every closed-form
/// update sees the latest powers of the others), then advances the
/// iteration counter and base step. The returned powers are the best
/// SIC-feasible iterate observed, which at convergence coincides with the
/// final one.
pub fn solve_sector_slot(gains: &[f64], params: &SolverParams) -> SectorSlotSolution {
    let nd = gains.len();
    if nd == 0 {
        return SectorSlotSolution {
            powers: Vec::new(),
            trace: SolveTrace {
                best_snr_sum: Vec::new(),
                updates_per_iteration: Vec::new(),
                iterations: 0,
                converged: true,
                nonconvergence_warning: false,
                recovery_events: 0,
            },
        };
    }
    debug_assert!(
        gains.windows(2).all(|w| w[0] >= w[1]),
        "gains must be in decode order"
    );
    if gains.iter().all(|&g| g == 0.0) {
        return SectorSlotSolution {
            powers: vec![0.0; nd],
            trace: SolveTrace {
                best_snr_sum: vec![0.0],
                updates_per_iteration: vec![3 * nd - 1],
                iterations: 1,
                converged: true,
                nonconvergence_warning: false,
                recovery_events: 0,
            },
        };
    }

    let a: Vec<f64> = gains.iter().map(|g| g / params.noise_power).collect();
    let warm_q = cap_and_budget_allocation(&a, params.p_max, params.eta_lin);
    let warm_s: f64 = warm_q.iter().sum();
    let t = params.m_prelog / (LN2 * (warm_s + 1.0));

    let mut dual = DualState::new(&a, params);
    let mut powers = vec![0.0; nd];
    let mut best_powers = vec![0.0; nd];
    let mut best_s = 0.0f64;
    let mut trace = SolveTrace {
        best_snr_sum: Vec::new(),
        updates_per_iteration: Vec::new(),
        iterations: 0,
        converged: false,
        nonconvergence_warning: false,
        recovery_events: 0,
    };
    let mut stagnant_feasible = 0usize;

    for n in 1..=params.max_iters {
        dual.iteration = n;
        dual.delta = 1.0 / n as f64;
        let prev_powers = powers.clone();
        let prev_lambda = dual.lambda.clone();
        let prev_mu = dual.mu.clone();
        let mut updates = 0usize;

        // Gauss-Seidel power sweep: each update sees the latest powers of
        // the other devices.
        for i in 0..nd {
            let upd = closed_form_power_normalized(i, &a, &powers, &dual, params);
            if upd.infeasible_denominator {
                trace.recovery_events += 1;
            }
            powers[i] = upd.power;
            updates += 1;
        }

        // Multiplier updates from the completed iterate.
        for i in 0..nd {
            if i < nd - 1 {
                let tail: f64 = (i + 1..nd).map(|l| powers[l] * a[l]).sum();
                let violation = powers[i] * a[i] - params.eta_lin * tail;
                if dual.lambda_scale[i] == 0.0 && violation != 0.0 {
                    dual.lambda_scale[i] = dual.lambda_ref(i, params, t) / violation.abs();
                } else if violation * dual.prev_violation[i] < 0.0 {
                    dual.lambda_scale[i] *= 0.5;
                } else if violation * dual.prev_violation[i] > 0.0 {
                    dual.lambda_scale[i] *= 1.2;
                }
                dual.prev_violation[i] = violation;
                dual.lambda[i] =
                    (dual.lambda[i] - dual.delta * dual.lambda_scale[i] * violation).max(0.0);
                updates += 1;
            }

            dual.mu[i] = (dual.mu[i]
                - dual.delta * dual.mu_scale[i] * (params.p_max - powers[i]))
                .max(0.0);
            updates += 1;
        }

        trace.updates_per_iteration.push(updates);
        trace.iterations = n;

        let feasible = sic_feasible(&powers, &a, params.eta_lin, params.sic_rel_tol);
        if feasible {
            let s: f64 = powers.iter().zip(&a).map(|(&p, &ai)| p * ai).sum();
            if s > best_s {
                best_s = s;
                best_powers.copy_from_slice(&powers);
            }
        }
        trace.best_snr_sum.push(best_s);

        let power_stable = powers
            .iter()
            .zip(&prev_powers)
            .all(|(&p, &q)| (p - q).abs() < params.eps_power);
        if feasible && power_stable {
            stagnant_feasible += 1;
            let lambda_stable = dual
                .lambda
                .iter()
                .zip(&prev_lambda)
                .all(|(&l, &p)| (l - p).abs() <= params.eps_dual * l.abs().max(1.0));
            let mu_stable = dual
                .mu
                .iter()
                .zip(&prev_mu)
                .all(|(&m, &p)| (m - p).abs() <= params.eps_dual * m.abs().max(1.0));
            // The stagnation window catches the case where a slack
            // multiplier keeps drifting without moving any power.
            if n > 2 && ((lambda_stable && mu_stable) || stagnant_feasible >= 50) {
                trace.converged = true;
                break;
            }
        } else {
            stagnant_feasible = 0;
        }
    }

    if !trace.converged {
        trace.nonconvergence_warning = true;
    }
    SectorSlotSolution {
        powers: best_powers,
        trace,
    }
}

/// Exhaustive grid search over `grid_points_per_device` levels per device
/// (including 0 and the cap), keeping only exactly-SIC-feasible points and
/// maximizing the received-power sum. Ties break toward the
/// lexicographically smallest power vector.
pub fn grid_oracle_sector_slot(
    gains: &[f64],
    params: &SolverParams,
    grid_points_per_device: usize,
) -> Result<Vec<f64>> {
    let nd = gains.len();
    if nd > 4 {
        return Err(Error::InvalidInput(format!(
            "grid oracle supports at most 4 devices, got {nd}"
        )));
    }
    if grid_points_per_device < 2 {
        return Err(Error::InvalidInput(
            "grid oracle needs at least 2 points per device".into(),
        ));
    }
    if nd == 0 {
        return Ok(Vec::new());
    }
    let a: Vec<f64> = gains.iter().map(|g| g / params.noise_power).collect();
    let levels: Vec<f64> = (0..grid_points_per_device)
        .map(|i| params.p_max * i as f64 / (grid_points_per_device - 1) as f64)
        .collect();
    let mut best: Vec<f64> = vec![0.0; nd];
    let mut best_s = -1.0f64;
    let mut counters = vec![0usize; nd];
    loop {
        let candidate: Vec<f64> = counters.iter().map(|&c| levels[c]).collect();
        if sic_feasible(&candidate, &a, params.eta_lin, 0.0) {
            let s: f64 = candidate.iter().zip(&a).map(|(&p, &ai)| p * ai).sum();
            // Ascending lexicographic scan + strict improvement keeps the
            // lexicographically smallest maximizer.
            if s > best_s {
                best_s = s;
                best = candidate;
            }
        }
        // Odometer increment, last device fastest.
        let mut pos = nd;
        loop {
            if pos == 0 {
                return Ok(if best_s < 0.0 { vec![0.0; nd] } else { best });
            }
            pos -= 1;
            counters[pos] += 1;
            if counters[pos] < grid_points_per_device {
                break;
            }
            counters[pos] = 0;
        }
    }
}

/// Round-robin OMA schedule for one sector: the devices take turns over the
/// K - L non-silent slots, the scheduled device transmitting at the cap.
pub fn oma_sector_schedule(
    n_devices: usize,
    sector: usize,
    grid: &TimeGrid,
    p_max: f64,
) -> SectorPowerMatrix {
    let mut matrix = SectorPowerMatrix::zeros(n_devices, grid.num_slots);
    if n_devices == 0 {
        return matrix;
    }
    let mut turn = 0usize;
    for k in 1..=grid.num_slots {
        if grid.is_relay_slot(sector, k) {
            continue;
        }
        matrix.powers[turn % n_devices][k - 1] = p_max;
        turn += 1;
    }
    matrix
}

/// Cyclical TDMA-OMA baseline allocation for all sectors.
pub fn oma_allocate(
    sector_sizes: &[usize],
    grid: &TimeGrid,
    config: &ScenarioConfig,
) -> PowerAllocation {
    let per_sector = sector_sizes
        .iter()
        .enumerate()
        .map(|(j, &n)| oma_sector_schedule(n, j, grid, config.p_u_max))
        .collect();
    PowerAllocation {
        per_sector,
        scheme_label: SchemeLabel::OmaTdma,
    }
}
