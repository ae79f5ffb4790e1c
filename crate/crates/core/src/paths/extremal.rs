//! Numeric maximal and minimal elements of a class: the configuration with
//! the same `s_1, ..., s_{k-1}` whose blocks follow the extremal pattern
//! (alternating single values and constant runs).

use nalgebra::{DMatrix, DVector};

use super::{FloatConfig, NEWTON_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremalRole {
    Maximal,
    Minimal,
}

/// Compositions of `n` into `parts` positive lengths where the parts flagged
/// by `short` have length exactly one.
fn compositions(n: usize, parts: usize, short: &dyn Fn(usize) -> bool) -> Vec<Vec<usize>> {
    fn go(rest: usize, s: usize, parts: usize, short: &dyn Fn(usize) -> bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if s == parts {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = parts - s - 1;
        let lens: Vec<usize> = if short(s) {
            vec![1]
        } else {
            (1..=rest.saturating_sub(remaining)).collect()
        };
        for len in lens {
            if len > rest {
                continue;
            }
            cur.push(len);
            go(rest - len, s + 1, parts, short, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, parts, short, &mut Vec::new(), &mut out);
    out
}

fn residual(v: &[f64], mult: &[usize], targets: &[f64]) -> DVector<f64> {
    DVector::from_iterator(
        targets.len(),
        targets.iter().enumerate().map(|(j, t)| {
            let e = j as i32 + 1;
            let s: f64 = v.iter().zip(mult).map(|(x, &m)| m as f64 * x.powi(e)).sum();
            (s - t) / t.abs().max(1.0)
        }),
    )
}

fn jacobian(v: &[f64], mult: &[usize], targets: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(targets.len(), v.len(), |j, s| {
        let e = j as i32 + 1;
        mult[s] as f64 * e as f64 * v[s].powi(e - 1) / targets[j].abs().max(1.0)
    })
}

/// Damped Newton from `start`; returns the block values on success.
fn newton(start: Vec<f64>, mult: &[usize], targets: &[f64]) -> Option<Vec<f64>> {
    let mut v = start;
    let mut f = residual(&v, mult, targets);
    for _ in 0..200 {
        if f.norm() < NEWTON_TOL {
            return Some(v);
        }
        let step = jacobian(&v, mult, targets).lu().solve(&(-&f))?;
        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = v.iter().zip(step.iter()).map(|(x, d)| x + lambda * d).collect();
            let ft = residual(&trial, mult, targets);
            if ft.norm() < f.norm() {
                v = trial;
                f = ft;
                break;
            }
            lambda *= 0.5;
            if lambda < 1e-12 {
                return None;
            }
        }
    }
    (f.norm() < NEWTON_TOL).then_some(v)
}

/// Deterministic starting points: block means of `x`, then spread-out
/// variants around the mean.
fn starts(x: &[f64], mult: &[usize]) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut pos = 0;
    let means: Vec<f64> = mult
        .iter()
        .map(|&m| {
            let mean = x[pos..pos + m].iter().sum::<f64>() / m as f64;
            pos += m;
            mean
        })
        .collect();
    out.push(means.clone());
    let centre = x.iter().sum::<f64>() / x.len() as f64;
    let spread = x[0] - x[x.len() - 1];
    let b = mult.len();
    for scale in [0.5, 1.0, 1.5, 2.0, 3.0] {
        out.push(
            (0..b)
                .map(|s| centre + spread * scale * (0.5 - s as f64 / (b.max(2) - 1) as f64))
                .collect(),
        );
    }
    for blend in [0.25, 0.75] {
        out.push(means.iter().map(|m| centre + (m - centre) * (1.0 + blend)).collect());
    }
    out
}

/// Numeric extremal element in the class of `x` at order `k`.
///
/// Candidate patterns split the `n` coordinates into `k - 1` blocks where the
/// odd-numbered blocks (maximal) or even-numbered blocks (minimal) are single
/// coordinates; the block values solve `s_1, ..., s_{k-1}` by Newton's method.
pub fn find_extremal_numeric(x: &FloatConfig, k: usize, role: ExtremalRole) -> Result<FloatConfig> {
    let vals = x.values();
    let n = vals.len();
    if k < 3 {
        return Err(Error::UnsupportedOrder(k));
    }
    if n < 2 {
        return Err(Error::TooFewNodes { needed: 2, found: n });
    }
    let constant = vals.iter().all(|v| (v - vals[0]).abs() <= 1e-15 * vals[0].abs().max(1.0));
    if n < k || constant {
        return Ok(x.clone());
    }
    let targets: Vec<f64> = (1..k).map(|j| x.power_sum(j)).collect();
    let odd_short = role == ExtremalRole::Maximal;
    let short = move |s: usize| s.is_multiple_of(2) == odd_short;
    let mut tried = 0;
    for mult in compositions(n, k - 1, &short) {
        for start in starts(vals, &mult) {
            tried += 1;
            let Some(v) = newton(start, &mult, &targets) else {
                continue;
            };
            let descending = v.windows(2).all(|w| w[0] >= w[1] - 1e-12);
            if descending {
                let out: Vec<f64> = v
                    .iter()
                    .zip(&mult)
                    .flat_map(|(&val, &m)| std::iter::repeat_n(val, m))
                    .collect();
                return FloatConfig::new(out);
            }
        }
    }
    Err(Error::Numeric(format!(
        "no real {role:?} configuration found for {vals:?} at k = {k} after {tried} Newton runs"
    )))
}
