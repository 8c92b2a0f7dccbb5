//! Refinement and flow experiments driven by a seed.

use itertools::Itertools;

use super::{
    discretize_with, random_loop, random_test_functions, DifferenceScheme, LatticeError,
    LatticeState, LatticeSystem,
};
use crate::twistcheck::ManifoldSpec;

/// Closure residuals at or below this count as exact closure.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

/// Drift allowance per unit of `max |lambda| * T * spacing^2`.
pub const FLOW_ENVELOPE_COEFF: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureRow {
    pub sites: usize,
    pub max_constraint: f64,
    pub residual: f64,
    /// `residual(previous row) / residual`; `None` on the first row or when
    /// the residual is exactly zero.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureTable {
    pub scheme: DifferenceScheme,
    /// 0-based coordinates the loop moves in.
    pub active: Vec<usize>,
    pub rows: Vec<ClosureRow>,
    pub passed: bool,
}

/// Finds the loop coordinates to use: all of them if momenta can be solved at
/// every resolution, otherwise the largest (then lexicographically first)
/// subset that works. Returns the full-set error if nothing does.
fn choose_active(
    systems: &[LatticeSystem],
    seed: u64,
) -> Result<(Vec<usize>, Vec<LatticeState>), LatticeError> {
    let n = systems[0].dim();
    let mut first_err = None;
    for size in (1..=n).rev() {
        for subset in (0..n).combinations(size) {
            let field = random_loop(n, &subset, seed);
            let states: Result<Vec<_>, _> = systems
                .iter()
                .map(|sys| sys.on_shell(field.sample(sys.sites())))
                .collect();
            match states {
                Ok(states) => return Ok((subset, states)),
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
    }
    Err(first_err.expect("dimension is positive"))
}

/// Closure residual of two seeded test functions on a seeded on-shell loop,
/// at each lattice size in `sites`.
pub fn closure_study(
    spec: &ManifoldSpec,
    sites: &[usize],
    seed: u64,
    scheme: DifferenceScheme,
) -> Result<ClosureTable, LatticeError> {
    let systems = sites
        .iter()
        .map(|&n| discretize_with(spec, n, scheme))
        .collect::<Result<Vec<_>, _>>()?;
    if systems.is_empty() {
        return Ok(ClosureTable {
            scheme,
            active: vec![],
            rows: vec![],
            passed: true,
        });
    }
    let (active, states) = choose_active(&systems, seed)?;
    let (lambda, mu) = random_test_functions(spec.dim(), seed);
    let mut rows: Vec<ClosureRow> = Vec::with_capacity(systems.len());
    let mut passed = true;
    for (sys, state) in systems.iter().zip(&states) {
        let n = sys.sites();
        let residual = sys.closure_residual(state, &lambda.sample(n), &mu.sample(n))?;
        let ratio = match rows.last() {
            Some(prev) if residual > 0.0 => Some(prev.residual / residual),
            _ => None,
        };
        if !rows.is_empty() && residual > RESIDUAL_FLOOR && !ratio.is_some_and(|r| r >= 2.0) {
            passed = false;
        }
        rows.push(ClosureRow {
            sites: n,
            max_constraint: sys.max_constraint(state)?,
            residual,
            ratio,
        });
    }
    Ok(ClosureTable {
        scheme,
        active,
        rows,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport {
    pub sites: usize,
    pub dt: f64,
    pub steps: usize,
    pub lambda_scale: f64,
    pub active: Vec<usize>,
    /// `max |phi|` of the starting state.
    pub initial: f64,
    /// `max |phi|` of the final state.
    pub last: f64,
    /// `max |phi|` over the whole trajectory.
    pub drift: f64,
    pub envelope: f64,
    pub within: bool,
}

/// Allowed drift for a flow of total time `time` with generator amplitude
/// `lambda_max`, starting from `initial`.
pub fn flow_envelope(initial: f64, lambda_max: f64, time: f64, spacing: f64) -> f64 {
    initial + FLOW_ENVELOPE_COEFF * lambda_max * time * spacing * spacing
}

/// Flows a seeded on-shell loop along a seeded test function scaled by
/// `lambda_scale` and measures how far it leaves the constraint surface.
pub fn flow_study(
    spec: &ManifoldSpec,
    sites: usize,
    dt: f64,
    steps: usize,
    seed: u64,
    lambda_scale: f64,
) -> Result<FlowReport, LatticeError> {
    let sys = discretize_with(spec, sites, DifferenceScheme::default())?;
    let (active, mut states) = choose_active(std::slice::from_ref(&sys), seed)?;
    let start = states.pop().expect("one state per system");
    let (lambda, _) = random_test_functions(spec.dim(), seed);
    let lambda = lambda.scaled(lambda_scale).sample(sites);
    let traj = sys.gauge_trajectory(&start, &lambda, dt, steps)?;
    let initial = sys.max_constraint(&start)?;
    let last = sys.max_constraint(traj.last().expect("nonempty"))?;
    let drift = super::drift(&sys, &traj)?;
    let envelope = flow_envelope(initial, lambda.max_abs(), dt * steps as f64, sys.spacing());
    Ok(FlowReport {
        sites,
        dt,
        steps,
        lambda_scale,
        active,
        initial,
        last,
        drift,
        envelope,
        within: drift <= envelope,
    })
}
