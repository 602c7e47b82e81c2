//! Derivative-free local minimization.

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: u64,
    pub converged: bool,
}

struct Wrapped<F>(F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Wrapped<F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> Result<f64, argmin::core::Error> {
        Ok((self.0)(x))
    }
}

/// Nelder–Mead from the axis-aligned simplex `x0 + steps[i]·e_i`, stopping
/// once the spread of the simplex values drops below `ftol`.
///
/// The best point seen is returned even when the iteration limit is hit.
pub fn nelder_mead<F>(f: F, x0: &[f64], steps: &[f64], ftol: f64, max_iters: u64) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    assert_eq!(x0.len(), steps.len());
    let mut simplex = vec![x0.to_vec()];
    for (i, s) in steps.iter().enumerate() {
        let mut x = x0.to_vec();
        x[i] += s;
        simplex.push(x);
    }
    let fallback = || Minimum {
        x: x0.to_vec(),
        value: f(x0),
        iterations: 0,
        converged: false,
    };
    let solver = match NelderMead::new(simplex).with_sd_tolerance(ftol) {
        Ok(s) => s,
        Err(_) => return fallback(),
    };
    let result = Executor::new(Wrapped(&f), solver)
        .configure(|state| state.max_iters(max_iters))
        .run();
    match result {
        Ok(res) => {
            let state = res.state();
            let x = state.get_best_param().cloned().unwrap_or_else(|| x0.to_vec());
            Minimum {
                value: f(&x),
                x,
                iterations: state.get_iter(),
                converged: matches!(
                    state.get_termination_status(),
                    TerminationStatus::Terminated(TerminationReason::SolverConverged)
                ),
            }
        }
        Err(_) => fallback(),
    }
}
