//! Proper-cone interface and the linear value-iteration machinery.
//!
//! An optimal control problem is described by dynamics `x(t+1) = A x(t) + B u(t)`,
//! a linear stage cost `sᵀx + rᵀu`, and a proper cone constraint `(x, u) ∈ P`.
//! When the cone admits a map `phi` with `phi(mu)ᵀx = min { muᵀu : (x,u) ∈ P }`,
//! the Bellman recursion stays linear: the cost-to-go after `k` steps is
//! `J_k(x) = lambda_kᵀ x` and the costate sequence evolves as
//! `lambda_{k+1} = s + Aᵀ lambda_k + phi(r + Bᵀ lambda_k)`.
//! This module implements that recursion generically; the backends
//! ([`crate::psd`], [`crate::polyhedral`], [`crate::structured`]) provide the
//! cone-specific pieces through [`ConeOracle`].

use rand::RngCore;

use crate::error::{Error, Result};
use crate::linalg::{dot, inf_norm, vec_add, vec_sub, Matrix};

/// Default relative tolerance for fixed-point convergence.
pub const DEFAULT_SOLVE_TOL: f64 = 1e-10;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Costate norm beyond which the value is diagnosed as likely infinite.
pub const DIVERGENCE_LIMIT: f64 = 1e12;
/// Default relative tolerance for cone membership tests.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-9;

/// Cone backend interface.
///
/// States and inputs are plain coordinate vectors; matrix-cone backends
/// flatten symmetric matrices through a fixed isometric embedding so that
/// the inner products here agree with their trace pairings.
pub trait ConeOracle {
    fn state_dim(&self) -> usize;
    fn input_dim(&self) -> usize;

    /// Membership `(x, u) ∈ P`.
    fn contains(&self, x: &[f64], u: &[f64]) -> bool;

    /// Membership `(lambda, mu) ∈ P*`.
    fn dual_contains(&self, lambda: &[f64], mu: &[f64]) -> bool;

    /// The map `phi` with `phi(mu)ᵀ x = min { muᵀ u : (x, u) ∈ P }`.
    ///
    /// Fails when the dual fiber over `mu` has no minimal element.
    fn phi(&self, mu: &[f64]) -> Result<Vec<f64>>;

    /// Deterministic minimizer of `muᵀ u` over `{ u : (x, u) ∈ P }`.
    fn argmin_input(&self, x: &[f64], mu: &[f64]) -> Vec<f64>;

    /// Random elements of `P`, used by property checks.
    fn sample_primal(&self, count: usize, rng: &mut dyn RngCore) -> Vec<(Vec<f64>, Vec<f64>)>;

    /// Random `lambda` with `(lambda, mu) ∈ P*`; the first sample is the
    /// minimal element when the backend knows it.
    fn sample_dual_fiber(&self, mu: &[f64], count: usize, rng: &mut dyn RngCore)
        -> Vec<Vec<f64>>;

    /// Whether `x` lies in the projection of `P` onto the state component.
    fn in_projection(&self, x: &[f64]) -> bool {
        self.contains(x, &vec![0.0; self.input_dim()])
    }

    /// Input completion `v` such that `(next_x, v) ∈ P` is expected, or
    /// `None` when the backend cannot produce witnesses.
    ///
    /// For all built-in cones the zero input is a valid completion whenever
    /// one exists, so that is the default.
    fn invariance_witness(&self, _next_x: &[f64]) -> Option<Vec<f64>> {
        Some(vec![0.0; self.input_dim()])
    }
}

/// Problem instance: dynamics, stage cost, initial state and cone backend.
pub struct ConeProgram<C: ConeOracle> {
    a: Matrix,
    b: Matrix,
    s: Vec<f64>,
    r: Vec<f64>,
    x0: Vec<f64>,
    cone: C,
}

impl<C: ConeOracle> ConeProgram<C> {
    /// Validates dimensions and the dual membership of the stage cost.
    ///
    /// Strict interiority of `(s, r)` is backend-specific and reported by the
    /// backend assumption checks; only plain membership is enforced here.
    pub fn new(
        a: Matrix,
        b: Matrix,
        s: Vec<f64>,
        r: Vec<f64>,
        x0: Vec<f64>,
        cone: C,
    ) -> Result<Self> {
        let n = cone.state_dim();
        let m = cone.input_dim();
        if a.rows() != n || a.cols() != n {
            return Err(Error::Dimension(format!(
                "A must be {}x{}, got {}x{}",
                n,
                n,
                a.rows(),
                a.cols()
            )));
        }
        if b.rows() != n || b.cols() != m {
            return Err(Error::Dimension(format!(
                "B must be {}x{}, got {}x{}",
                n,
                m,
                b.rows(),
                b.cols()
            )));
        }
        if s.len() != n || r.len() != m || x0.len() != n {
            return Err(Error::Dimension("cost or initial state has wrong length".into()));
        }
        if !cone.dual_contains(&s, &r) {
            return Err(Error::Precondition(
                "stage cost (s, r) is not in the dual cone".into(),
            ));
        }
        Ok(ConeProgram { a, b, s, r, x0, cone })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn cone(&self) -> &C {
        &self.cone
    }

    /// The dual input costate `r + Bᵀ lambda` seen by `phi` at `lambda`.
    pub fn input_costate(&self, lambda: &[f64]) -> Vec<f64> {
        vec_add(&self.r, &self.b.tr_matvec(lambda))
    }

    /// One value-iteration step `lambda -> s + Aᵀ lambda + phi(r + Bᵀ lambda)`.
    pub fn bellman_step(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        let mu = self.input_costate(lambda);
        let phi = self.cone.phi(&mu)?;
        Ok(vec_add(&vec_add(&self.s, &self.a.tr_matvec(lambda)), &phi))
    }

    /// Runs the value iteration from `lambda_0 = 0`.
    pub fn solve_fixed_point(&self, tol: f64, max_iter: usize) -> Result<IterationTrace> {
        self.solve_from(vec![0.0; self.cone.state_dim()], tol, max_iter)
    }

    /// Runs the value iteration from a caller-supplied start.
    ///
    /// Monotonicity of the iterates is only guaranteed from zero, so
    /// [`check_monotone`] skips traces produced by warm starts.
    pub fn solve_from(&self, start: Vec<f64>, tol: f64, max_iter: usize) -> Result<IterationTrace> {
        let from_zero = start.iter().all(|&v| v == 0.0);
        let mut iterates = vec![start];
        let mut residuals = Vec::new();
        let mut status = SolveStatus::MaxIterReached;

        for _ in 0..max_iter {
            let current = iterates.last().unwrap();
            let next = self.bellman_step(current)?;
            let residual = inf_norm(&vec_sub(&next, current));
            residuals.push(residual);
            let converged = residual <= tol * (1.0 + inf_norm(current));
            let diverged = inf_norm(&next) > DIVERGENCE_LIMIT;
            iterates.push(next);
            if converged {
                status = SolveStatus::Converged;
                break;
            }
            if diverged {
                status = SolveStatus::Diverged;
                break;
            }
        }

        if status == SolveStatus::MaxIterReached && residual_grew(&residuals) {
            status = SolveStatus::Diverged;
        }

        let value_at_x0 = if status == SolveStatus::Converged {
            Some(dot(iterates.last().unwrap(), &self.x0))
        } else {
            None
        };

        Ok(IterationTrace {
            iterates,
            residuals,
            status,
            from_zero,
            value_at_x0,
        })
    }

    /// Optimal input at `x`: minimize `(r + Bᵀ lambda_star)ᵀ u` over the cone.
    pub fn optimal_policy(&self, lambda_star: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        if !self.cone.in_projection(x) {
            return Err(Error::InfeasibleState);
        }
        let mu = self.input_costate(lambda_star);
        Ok(self.cone.argmin_input(x, &mu))
    }

    /// Closed-loop rollout of the optimal policy for `horizon` steps.
    pub fn simulate(&self, lambda_star: &[f64], horizon: usize) -> Result<Trajectory> {
        let mu = self.input_costate(lambda_star);
        let mut states = vec![self.x0.clone()];
        let mut inputs = Vec::with_capacity(horizon);
        let mut stage_costs = Vec::with_capacity(horizon);
        let mut total_cost = 0.0;

        for t in 0..horizon {
            let x = states.last().unwrap().clone();
            let u = self.cone.argmin_input(&x, &mu);
            if !self.cone.contains(&x, &u) {
                return Err(Error::InvarianceFailure { step: t });
            }
            let stage = dot(&self.s, &x) + dot(&self.r, &u);
            total_cost += stage;
            let next = vec_add(&self.a.matvec(&x), &self.b.matvec(&u));
            states.push(next);
            inputs.push(u);
            stage_costs.push(stage);
        }

        if !self.cone.in_projection(states.last().unwrap()) {
            return Err(Error::InvarianceFailure { step: horizon });
        }

        Ok(Trajectory { states, inputs, stage_costs, total_cost })
    }

    /// Samples cone points and verifies that the shifted state admits a
    /// feasible input completion.
    pub fn check_invariance(&self, samples: usize, rng: &mut dyn RngCore) -> InvarianceReport {
        let mut report = InvarianceReport {
            checked: 0,
            supported: true,
            failures: Vec::new(),
        };
        for (x, u) in self.cone.sample_primal(samples, rng) {
            let next = vec_add(&self.a.matvec(&x), &self.b.matvec(&u));
            match self.cone.invariance_witness(&next) {
                None => {
                    report.supported = false;
                    return report;
                }
                Some(v) => {
                    report.checked += 1;
                    if !self.cone.contains(&next, &v) {
                        report.failures.push(InvarianceCounterexample { x, u, next });
                        if report.failures.len() >= 4 {
                            return report;
                        }
                    }
                }
            }
        }
        report
    }
}

fn residual_grew(residuals: &[f64]) -> bool {
    if residuals.len() < 8 {
        return false;
    }
    let mid = residuals[residuals.len() / 2];
    let last = *residuals.last().unwrap();
    last > 10.0 * mid && last > 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    /// Iteration cap hit while residuals were still shrinking or flat.
    MaxIterReached,
    /// Costate blew past [`DIVERGENCE_LIMIT`] or residuals grew geometrically;
    /// the optimal value is likely infinite. Diagnostic only, not a proof.
    Diverged,
}

/// Record of a value-iteration run: the costate sequence `lambda_0, lambda_1, ...`
/// and the residuals `inf_norm(lambda_{k+1} - lambda_k)`.
#[derive(Clone, Debug)]
pub struct IterationTrace {
    pub iterates: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub status: SolveStatus,
    pub from_zero: bool,
    pub value_at_x0: Option<f64>,
}

impl IterationTrace {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    pub fn iterations(&self) -> usize {
        self.residuals.len()
    }

    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(f64::NAN)
    }

    /// The fixed point `lambda_star`, available only after convergence.
    pub fn costate(&self) -> Result<&[f64]> {
        if self.converged() {
            Ok(self.iterates.last().unwrap())
        } else {
            Err(Error::Unconverged)
        }
    }

    /// Optimal value `lambda_starᵀ x` for an arbitrary initial state.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        Ok(dot(self.costate()?, x))
    }
}

/// Closed-loop trajectory with per-step stage costs.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<Vec<f64>>,
    pub inputs: Vec<Vec<f64>>,
    pub stage_costs: Vec<f64>,
    pub total_cost: f64,
}

impl Trajectory {
    pub fn horizon(&self) -> usize {
        self.inputs.len()
    }

    /// Per-step residuals of `lambdaᵀx(t) = stage(t) + lambdaᵀx(t+1)`.
    pub fn bellman_residuals(&self, lambda: &[f64]) -> Vec<f64> {
        (0..self.horizon())
            .map(|t| {
                dot(lambda, &self.states[t])
                    - self.stage_costs[t]
                    - dot(lambda, &self.states[t + 1])
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct InvarianceCounterexample {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub next: Vec<f64>,
}

/// Outcome of [`ConeProgram::check_invariance`].
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub checked: usize,
    /// False when the backend cannot produce completion witnesses.
    pub supported: bool,
    pub failures: Vec<InvarianceCounterexample>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.supported && self.failures.is_empty()
    }
}

/// Verifies that `lambda_bar` is the minimum element of the dual fiber over
/// `mu`: every sampled fiber point must dominate it in the dual cone, and the
/// induced linear form `-lambda_barᵀx` must match direct input minimization.
pub fn check_min_element<C: ConeOracle>(
    cone: &C,
    mu: &[f64],
    lambda_bar: &[f64],
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<bool> {
    if !cone.dual_contains(lambda_bar, mu) {
        return Err(Error::Precondition(
            "candidate minimal element is not in the dual fiber".into(),
        ));
    }
    let zero_mu = vec![0.0; cone.input_dim()];
    for lambda in cone.sample_dual_fiber(mu, samples, rng) {
        if !cone.dual_contains(&vec_sub(&lambda, lambda_bar), &zero_mu) {
            return Ok(false);
        }
    }
    // Cross-check the conclusion: min over u of muᵀu at x equals -lambda_barᵀx.
    for (x, _) in cone.sample_primal(samples.min(32), rng) {
        let direct = dot(mu, &cone.argmin_input(&x, mu));
        let linear = -dot(lambda_bar, &x);
        if (direct - linear).abs() > 1e-8 * (1.0 + linear.abs()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `dual_contains(lambda_{k+1} - lambda_k, 0)` along a trace started
/// from zero (the cone-level statement of the monotone value iteration).
pub fn check_monotone<C: ConeOracle>(trace: &IterationTrace, cone: &C) -> bool {
    if !trace.from_zero {
        return true;
    }
    let zero_mu = vec![0.0; cone.input_dim()];
    trace
        .iterates
        .windows(2)
        .all(|w| cone.dual_contains(&vec_sub(&w[1], &w[0]), &zero_mu))
}

/// Checks `phi(mu)ᵀx = muᵀ argmin_input(x, mu)` for the input costates that
/// actually occur along a solve trace, on sampled projection states.
pub fn check_phi_consistency<C: ConeOracle>(
    program: &ConeProgram<C>,
    trace: &IterationTrace,
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<bool> {
    let cone = program.cone();
    let stride = (trace.iterates.len() / 8).max(1);
    let points = cone.sample_primal(samples, rng);
    for lambda in trace.iterates.iter().step_by(stride) {
        let mu = program.input_costate(lambda);
        let phi = cone.phi(&mu)?;
        for (x, _) in &points {
            let lhs = dot(&phi, x);
            let rhs = dot(&mu, &cone.argmin_input(x, &mu));
            if (lhs - rhs).abs() > 1e-8 * (1.0 + lhs.abs()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks `lambdaᵀx + muᵀu >= -tol` over sampled primal/dual pairs, with the
/// dual pairs drawn from fibers over the trace's input costates.
pub fn check_dual_pairing<C: ConeOracle>(
    program: &ConeProgram<C>,
    trace: &IterationTrace,
    samples: usize,
    rng: &mut dyn RngCore,
) -> bool {
    let cone = program.cone();
    let primal = cone.sample_primal(samples, rng);
    let stride = (trace.iterates.len() / 4).max(1);
    for lambda in trace.iterates.iter().step_by(stride) {
        let mu = program.input_costate(lambda);
        for lam in cone.sample_dual_fiber(&mu, (samples / 4).max(4), rng) {
            for (x, u) in &primal {
                let pairing = dot(&lam, x) + dot(&mu, u);
                let scale = 1.0 + inf_norm(&lam) * inf_norm(x) + inf_norm(&mu) * inf_norm(u);
                if pairing < -1e-9 * scale {
                    return false;
                }
            }
        }
    }
    true
}
