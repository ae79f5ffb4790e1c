//! The residual spline `r_j(x) = sum_i w_i (a_i - x)_+^(j-1)` of a weighted
//! node list, built as an exact piecewise polynomial, plus sign-change
//! counting for sequences and splines.
//!
//! `(x)_+^0` is 1 for `x > 0` and 0 otherwise, so `r_1` is a right-open step
//! function: on `[a_{m+1}, a_m)` it equals `w_1 + ... + w_m`.

use num_traits::{Signed, Zero};

use crate::exactpoly::{
    int, isolate_roots, nonneg_on_interval, rational::pow, sturm::sign_samples, Interval, Nonneg, Poly, Rational,
};
use crate::error::{Error, Result};

/// One `(argument, weight)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub arg: Rational,
    pub weight: Rational,
}

/// A canonical weighted node list with order `k` and a domain.
///
/// Arguments are strictly decreasing, duplicates are merged by adding their
/// weights, and zero weights are dropped. The domain defaults to the hull of
/// the arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityProblem {
    nodes: Vec<Node>,
    k: usize,
    domain: Interval,
}

impl InequalityProblem {
    pub fn new<I>(pairs: I, k: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        Self::build(pairs, k, None)
    }

    pub fn with_domain<I>(pairs: I, k: usize, domain: Interval) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        Self::build(pairs, k, Some(domain))
    }

    /// Convenience constructor from integer arguments and weights.
    pub fn from_ints(args: &[i64], weights: &[i64], k: usize) -> Result<Self> {
        if args.len() != weights.len() {
            return Err(Error::LengthMismatch {
                left: args.len(),
                right: weights.len(),
            });
        }
        Self::new(args.iter().zip(weights).map(|(&a, &w)| (int(a), int(w))), k)
    }

    fn build<I>(pairs: I, k: usize, domain: Option<Interval>) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        if k == 0 {
            return Err(Error::InvalidInput("order k must be at least 1".into()));
        }
        let nodes = canonicalize(pairs);
        let domain = match domain {
            Some(d) => {
                if let Some(n) = nodes.iter().find(|n| !d.contains(&n.arg)) {
                    return Err(Error::InvalidInput(format!(
                        "argument {} lies outside the domain [{}, {}]",
                        n.arg, d.lo, d.hi
                    )));
                }
                d
            }
            None => match (nodes.last(), nodes.first()) {
                (Some(lo), Some(hi)) => Interval::new(lo.arg.clone(), hi.arg.clone())?,
                _ => Interval::point(Rational::zero()),
            },
        };
        Ok(InequalityProblem { nodes, k, domain })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn args(&self) -> Vec<Rational> {
        self.nodes.iter().map(|n| n.arg.clone()).collect()
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.nodes.iter().map(|n| n.weight.clone()).collect()
    }

    /// Same nodes, every weight negated.
    pub fn negated(&self) -> Self {
        InequalityProblem {
            nodes: self
                .nodes
                .iter()
                .map(|n| Node {
                    arg: n.arg.clone(),
                    weight: -n.weight.clone(),
                })
                .collect(),
            k: self.k,
            domain: self.domain.clone(),
        }
    }

    /// Same nodes and domain at a different order.
    pub fn with_order(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("order k must be at least 1".into()));
        }
        Ok(InequalityProblem { k, ..self.clone() })
    }

    /// `sum_i w_i a_i^j`.
    pub fn moment(&self, j: usize) -> Rational {
        self.nodes.iter().map(|n| &n.weight * pow(&n.arg, j)).sum()
    }
}

fn canonicalize<I>(pairs: I) -> Vec<Node>
where
    I: IntoIterator<Item = (Rational, Rational)>,
{
    let mut raw: Vec<(Rational, Rational)> = pairs.into_iter().collect();
    raw.sort_by(|a, b| b.0.cmp(&a.0));
    let mut nodes: Vec<Node> = Vec::with_capacity(raw.len());
    for (arg, weight) in raw {
        match nodes.last_mut() {
            Some(last) if last.arg == arg => last.weight += weight,
            _ => nodes.push(Node { arg, weight }),
        }
    }
    nodes.retain(|n| !n.weight.is_zero());
    nodes
}

/// Adjacent strictly-opposite pairs after deleting zeros.
pub fn count_sign_changes(seq: &[Rational]) -> usize {
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for x in seq.iter().filter(|x| !x.is_zero()) {
        let pos = x.is_positive();
        if last.is_some_and(|l| l != pos) {
            changes += 1;
        }
        last = Some(pos);
    }
    changes
}

/// Exact piecewise form of `r_j`.
///
/// `pieces[m]` (0-based) is valid on `[a_{m+2}, a_{m+1})` in 1-based node
/// terms, and the last piece covers everything below the smallest breakpoint.
/// To the right of the largest breakpoint the spline is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPowerSpline {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
    order: usize,
}

impl TruncatedPowerSpline {
    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    /// The `j` in `r_j`; pieces have degree at most `j - 1`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Piece below the smallest breakpoint, or zero for an empty spline.
    pub fn left_piece(&self) -> Poly {
        self.pieces.last().cloned().unwrap_or_else(Poly::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let above = self.breakpoints.iter().take_while(|a| *a > x).count();
        match above {
            0 => Rational::zero(),
            m => self.pieces[m - 1].eval(x),
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let above = self
            .breakpoints
            .iter()
            .take_while(|a| crate::to_f64(a) > x)
            .count();
        match above {
            0 => 0.0,
            m => self.pieces[m - 1].eval_f64(x),
        }
    }

    /// Piecewise derivative, returned as a spline on the same breakpoints.
    pub fn derivative(&self) -> TruncatedPowerSpline {
        TruncatedPowerSpline {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(Poly::derivative).collect(),
            order: self.order.saturating_sub(1),
        }
    }

    /// Regions `(piece index, clipped interval)` meeting `iv`, left to right.
    fn regions(&self, iv: &Interval) -> Vec<(usize, Interval)> {
        let n = self.breakpoints.len();
        let mut out = Vec::new();
        for m in (0..n).rev() {
            let top = &self.breakpoints[m];
            let lo = match self.breakpoints.get(m + 1) {
                Some(b) => b.max(&iv.lo).clone(),
                None => iv.lo.clone(),
            };
            let hi = top.min(&iv.hi).clone();
            if lo <= hi && &lo < top {
                out.push((m, Interval { lo, hi }));
            }
        }
        out
    }
}

/// Builds `r_j` for `problem` by accumulating `w_i (a_i - x)^(j-1)` as `x`
/// crosses each breakpoint from above.
pub fn build_rk(problem: &InequalityProblem, j: usize) -> TruncatedPowerSpline {
    assert!(j >= 1, "spline order must be positive");
    let mut acc = Poly::zero();
    let mut pieces = Vec::with_capacity(problem.len());
    for node in problem.nodes() {
        acc = &acc + &Poly::shifted_power(&node.weight, &node.arg, j - 1);
        pieces.push(acc.clone());
    }
    TruncatedPowerSpline {
        breakpoints: problem.args(),
        pieces,
        order: j,
    }
}

pub fn spline_eval(s: &TruncatedPowerSpline, x: &Rational) -> Rational {
    s.eval(x)
}

/// Decides `s(x) >= 0` on `iv`; the witness is the leftmost negative sample.
pub fn spline_nonneg(s: &TruncatedPowerSpline, iv: &Interval) -> Nonneg {
    for (m, region) in s.regions(iv) {
        if let Nonneg::Witness(x) = nonneg_on_interval(&s.pieces[m], &region) {
            return Nonneg::Witness(x);
        }
    }
    Nonneg::Nonneg
}

/// Smallest value of `s` on `iv` up to the resolution of root isolation:
/// candidates are region ends and points inside isolating intervals (of
/// width at most `2^-40` times the region) of each piece's critical points.
/// The returned value is attained at the returned point.
pub fn spline_min(s: &TruncatedPowerSpline, iv: &Interval) -> (Rational, Rational) {
    let mut best: Option<(Rational, Rational)> = None;
    let mut consider = |x: Rational, v: Rational| {
        if best.as_ref().is_none_or(|(bv, _)| &v < bv) {
            best = Some((v, x));
        }
    };
    consider(iv.hi.clone(), s.eval(&iv.hi));
    for (m, region) in s.regions(iv) {
        let piece = &s.pieces[m];
        consider(region.lo.clone(), piece.eval(&region.lo));
        consider(region.hi.clone(), piece.eval(&region.hi));
        let d = piece.derivative();
        if d.is_zero() || region.is_point() {
            continue;
        }
        let roots = isolate_roots(&d, &region).expect("nonzero derivative");
        for r in roots {
            let x = crate::exactpoly::rational::midpoint(&r.lo, &r.hi);
            consider(x.clone(), piece.eval(&x));
        }
    }
    best.expect("at least one candidate")
}

/// Sign changes of `s` over the whole real line.
pub fn spline_sign_changes(s: &TruncatedPowerSpline) -> usize {
    let Some(smallest) = s.breakpoints.last() else {
        return 0;
    };
    let left = s.left_piece();
    let reach = left.root_bound().max(smallest.abs());
    let start = smallest.min(&-reach) - int(1);
    let full = Interval {
        lo: start,
        hi: s.breakpoints[0].clone(),
    };
    let mut values = Vec::new();
    for (m, region) in s.regions(&full) {
        let piece = &s.pieces[m];
        values.extend(sign_samples(piece, &region).iter().map(|x| piece.eval(x)));
    }
    count_sign_changes(&values)
}

/// The three sequences behind the sign-change sufficiency test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignChangeReport {
    pub weight_changes: usize,
    pub partial_sum_changes: usize,
    /// Changes of `s_j = sum_{i<=j} w_i a_i - (sum_{i<=j} w_i) a_j`, the values
    /// of `r_2` at its breakpoints.
    pub r2_value_changes: usize,
}

pub fn partial_sums(problem: &InequalityProblem) -> Vec<Rational> {
    let mut acc = Rational::zero();
    problem
        .nodes()
        .iter()
        .map(|n| {
            acc += &n.weight;
            acc.clone()
        })
        .collect()
}

/// `s_j = r_2(a_j)` for each node.
pub fn r2_breakpoint_values(problem: &InequalityProblem) -> Vec<Rational> {
    let mut w_sum = Rational::zero();
    let mut wa_sum = Rational::zero();
    problem
        .nodes()
        .iter()
        .map(|n| {
            w_sum += &n.weight;
            wa_sum += &n.weight * &n.arg;
            &wa_sum - &w_sum * &n.arg
        })
        .collect()
}

pub fn sign_change_report(problem: &InequalityProblem) -> SignChangeReport {
    SignChangeReport {
        weight_changes: count_sign_changes(&problem.weights()),
        partial_sum_changes: count_sign_changes(&partial_sums(problem)),
        r2_value_changes: count_sign_changes(&r2_breakpoint_values(problem)),
    }
}
