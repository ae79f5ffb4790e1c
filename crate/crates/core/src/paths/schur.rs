//! Second-order Schur-type condition for symmetric functions of three
//! variables: a symmetric `f` respects the order at `k = 3` when
//! `((f_1 - f_2)/(x_1 - x_2) - (f_2 - f_3)/(x_2 - x_3)) (x_1 - x_3) >= 0`.

use crate::exec::Exec;

#[derive(Debug, Clone, PartialEq)]
pub enum SchurOutcome {
    Pass { checked: usize, skipped: usize },
    Fail { witness: [f64; 3], value: f64 },
}

impl SchurOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, SchurOutcome::Pass { .. })
    }
}

/// The left-hand side at `x` for gradient `g`, or `None` when two
/// coordinates coincide.
pub fn schur3_expression(x: [f64; 3], g: [f64; 3]) -> Option<f64> {
    let (d12, d23, d13) = (x[0] - x[1], x[1] - x[2], x[0] - x[2]);
    if d12 == 0.0 || d23 == 0.0 || d13 == 0.0 {
        return None;
    }
    Some(((g[0] - g[1]) / d12 - (g[1] - g[2]) / d23) * d13)
}

/// Evaluates the condition at every sample and reports the first one below
/// `-tol`. Samples with coincident coordinates are skipped with a warning.
pub fn schur3_check<G>(gradient: G, samples: &[[f64; 3]], tol: f64, exec: Exec) -> SchurOutcome
where
    G: Fn([f64; 3]) -> [f64; 3] + Sync,
{
    let values = exec.map(samples, |&x| schur3_expression(x, gradient(x)));
    let mut skipped = 0;
    for (x, v) in samples.iter().zip(&values) {
        match v {
            None => {
                log::warn!("skipping sample {x:?} with coincident coordinates");
                skipped += 1;
            }
            Some(v) if *v < -tol => {
                return SchurOutcome::Fail {
                    witness: *x,
                    value: *v,
                }
            }
            Some(_) => {}
        }
    }
    SchurOutcome::Pass {
        checked: samples.len() - skipped,
        skipped,
    }
}
