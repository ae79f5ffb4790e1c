//! Increasing paths between comparable configurations.
//!
//! Both constructions move `k` coordinates at a time along the curve where
//! their first `k - 1` power sums stay fixed. Such a move is monotone in the
//! order, so every stretch is increasing (or decreasing) by construction.

use super::roots::{poly_from_roots, SubsetMove};
use super::{difference_nodes, numeric_decide, same_class, FloatConfig, PathResult};
use crate::error::{Error, Result};

/// Coordinates closer than this are treated as equal and cancelled.
const MATCH_TOL: f64 = 1e-9;
const DECIDE_TOL: f64 = 1e-9;
const MAX_MOVES: usize = 400;

fn require_dominance(a: &FloatConfig, b: &FloatConfig, k: usize) -> Result<()> {
    same_class(a.values(), b.values(), k, DECIDE_TOL)?;
    let v = numeric_decide(&difference_nodes(a.values(), b.values()), k, DECIDE_TOL);
    if !v.holds() {
        return Err(Error::Numeric(format!(
            "start does not dominate end at order {k}: r_{k} reaches {} at {}",
            v.min, v.argmin
        )));
    }
    Ok(())
}

fn same_multiset(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= MATCH_TOL)
}

/// Indices of active entries of `values`, sorted by value, largest first.
fn sorted_active(values: &[f64], active: &[bool]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).filter(|&i| active[i]).collect();
    idx.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    idx
}

/// Pairs up equal active coordinates of `cur` and `target` and retires them,
/// snapping the moving coordinate onto the target value.
fn cancel(cur: &mut [f64], live: &mut [bool], target: &[f64], target_live: &mut [bool]) {
    for i in 0..cur.len() {
        if !live[i] {
            continue;
        }
        let best = (0..target.len())
            .filter(|&j| target_live[j])
            .min_by(|&x, &y| (cur[i] - target[x]).abs().total_cmp(&(cur[i] - target[y]).abs()));
        if let Some(j) = best {
            if (cur[i] - target[j]).abs() <= MATCH_TOL {
                cur[i] = target[j];
                live[i] = false;
                target_live[j] = false;
            }
        }
    }
}

/// Runs `mv` to progress `stop` in `steps` equal increments, recording each
/// intermediate configuration.
fn run_move(cur: &mut [f64], mv: &SubsetMove, stop: f64, steps: usize, traj: &mut Vec<Vec<f64>>) {
    let base = cur.to_vec();
    for i in 1..=steps {
        let mut next = base.clone();
        mv.apply(&mut next, stop * i as f64 / steps as f64);
        traj.push(next);
    }
    cur.copy_from_slice(traj.last().expect("at least one step"));
}

/// Snaps the moved coordinate nearest to `tau` onto it.
fn snap(cur: &mut [f64], subset: &[usize], tau: f64, traj: &mut [Vec<f64>]) {
    let i = *subset
        .iter()
        .min_by(|&&x, &&y| (cur[x] - tau).abs().total_cmp(&(cur[y] - tau).abs()))
        .expect("nonempty subset");
    cur[i] = tau;
    if let Some(last) = traj.last_mut() {
        last[i] = tau;
    }
}

/// Increasing path from `b` up to `a` when `a` dominates `b` at order 3.
///
/// Works downward from `a`: after cancelling shared coordinates, let `m` be
/// the first index with `b_1 > a_m` and lower the triple
/// `(a_{m-1}, a_m, a_{m+1})` until one of its coordinates meets some `b_i`;
/// cancel and repeat. The recorded trajectory is then reversed.
pub fn increasing_path_k3(a: &FloatConfig, b: &FloatConfig, steps: usize) -> Result<PathResult> {
    require_dominance(a, b, 3)?;
    let steps = steps.max(1);
    let target = b.values().to_vec();
    let mut cur = a.values().to_vec();
    let mut traj = vec![cur.clone()];
    if same_multiset(&cur, &target) {
        return Ok(PathResult::from_trajectory(vec![target], 3, true));
    }
    let mut live = vec![true; cur.len()];
    let mut target_live = vec![true; target.len()];
    for _ in 0..=cur.len() {
        cancel(&mut cur, &mut live, &target, &mut target_live);
        let act = sorted_active(&cur, &live);
        if act.is_empty() {
            traj.reverse();
            return Ok(PathResult::from_trajectory(traj, 3, true));
        }
        let b_act: Vec<f64> = sorted_active(&target, &target_live)
            .into_iter()
            .map(|j| target[j])
            .collect();
        let b1 = b_act[0];
        let m = act.iter().position(|&i| b1 > cur[i]).unwrap_or(act.len());
        if m == 0 || m + 1 >= act.len() {
            return Err(Error::Numeric(format!(
                "no admissible triple around position {m} in {:?}",
                act.iter().map(|&i| cur[i]).collect::<Vec<_>>()
            )));
        }
        let triple = vec![act[m - 1], act[m], act[m + 1]];
        let mv = SubsetMove::new(&cur, triple.clone(), false);
        let hit = b_act
            .iter()
            .filter_map(|&tau| mv.hit(tau).map(|s| (s, tau)))
            .min_by(|x, y| x.0.total_cmp(&y.0));
        let Some((stop, tau)) = hit else {
            return Err(Error::Numeric(format!(
                "triple {:?} stalls before meeting any of {b_act:?}",
                triple.iter().map(|&i| cur[i]).collect::<Vec<_>>()
            )));
        };
        run_move(&mut cur, &mv, stop, steps, &mut traj);
        snap(&mut cur, &triple, tau, &mut traj);
    }
    Err(Error::Numeric("cancellation did not terminate".into()))
}

/// Subsets of size `n - 1` in the order tried: drop the smallest, the
/// largest, then each middle coordinate.
fn subsets_nk1(order: &[usize]) -> Vec<Vec<usize>> {
    let n = order.len();
    let mut drops = vec![n - 1, 0];
    drops.extend(1..n - 1);
    drops
        .into_iter()
        .map(|d| order.iter().enumerate().filter(|&(p, _)| p != d).map(|(_, &i)| i).collect())
        .collect()
}

/// Increasing path from `b` up to `a` for `n = k + 1` coordinates.
///
/// Climbs from `b` toward the maximal element by moving `k` coordinates at a
/// time until the largest coordinate reaches `a_1` or the smallest reaches
/// `a_n`. That coordinate is then shared with `a`; the remaining `k` are
/// joined to the rest of `a` inside their one-parameter class.
pub fn increasing_path_nk1(a: &FloatConfig, b: &FloatConfig, k: usize, steps: usize) -> Result<PathResult> {
    let n = a.len();
    if n != k + 1 {
        return Err(Error::InvalidInput(format!(
            "expected k + 1 = {} coordinates, found {n}",
            k + 1
        )));
    }
    require_dominance(a, b, k)?;
    let steps = steps.max(1);
    let av = a.values().to_vec();
    let mut cur = b.values().to_vec();
    let mut traj = vec![cur.clone()];
    if same_multiset(&cur, &av) {
        return Ok(PathResult::from_trajectory(traj, k, true));
    }
    let (top, bottom) = (av[0], av[n - 1]);
    let extreme = |v: &[f64]| {
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        (hi, lo)
    };
    let mut matched = {
        let (hi, lo) = extreme(&cur);
        (hi - top).abs() <= MATCH_TOL || (lo - bottom).abs() <= MATCH_TOL
    };
    let mut moves = 0;
    while !matched {
        moves += 1;
        if moves > MAX_MOVES {
            return Err(Error::Numeric(format!(
                "climb from {:?} did not reach a coordinate of the target in {MAX_MOVES} moves",
                b.values()
            )));
        }
        let order = sorted_active(&cur, &vec![true; n]);
        let Some(mv) = subsets_nk1(&order)
            .into_iter()
            .map(|s| SubsetMove::new(&cur, s, true))
            .find(|mv| !mv.blocked() && mv.c_end > 1e-300)
        else {
            return Err(Error::Numeric(format!(
                "reached a maximal configuration {cur:?} without meeting the target"
            )));
        };
        let mut stop = mv.c_end;
        let mut tau = None;
        for t in [top, bottom] {
            if let Some(s) = mv.hit(t) {
                let mut trial = cur.clone();
                mv.apply(&mut trial, s);
                let (hi, lo) = extreme(&trial);
                let is_extreme = if t == top { (hi - t).abs() } else { (lo - t).abs() } <= MATCH_TOL;
                if is_extreme && s <= stop {
                    stop = s;
                    tau = Some(t);
                }
            }
        }
        run_move(&mut cur, &mv, stop, steps, &mut traj);
        match tau {
            Some(t) => {
                snap(&mut cur, &mv.subset, t, &mut traj);
                matched = true;
            }
            None => {
                let (hi, lo) = extreme(&cur);
                matched = (hi - top).abs() <= MATCH_TOL || (lo - bottom).abs() <= MATCH_TOL;
            }
        }
    }
    let mut live = vec![true; n];
    let mut a_live = vec![true; n];
    cancel(&mut cur, &mut live, &av, &mut a_live);
    let rest = sorted_active(&cur, &live);
    if !rest.is_empty() {
        let from: Vec<f64> = rest.iter().map(|&i| cur[i]).collect();
        let to: Vec<f64> = sorted_active(&av, &a_live).into_iter().map(|j| av[j]).collect();
        let shift = poly_from_roots(&to)[0] - poly_from_roots(&from)[0];
        let mv = SubsetMove::new(&cur, rest.clone(), shift < 0.0);
        run_move(&mut cur, &mv, shift.abs(), steps, &mut traj);
        for (&i, &v) in rest.iter().zip(&to) {
            cur[i] = v;
        }
        *traj.last_mut().expect("nonempty") = cur.clone();
    }
    Ok(PathResult::from_trajectory(traj, k, true))
}
