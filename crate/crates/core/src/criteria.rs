//! The exact decision procedure and the catalog of sufficient (and, in a few
//! small cases, exact) criteria.
//!
//! `sum_i w_i f(a_i) >= 0` holds for every `f` with `f^(k) >= 0` exactly when
//! the moments `sum_i w_i a_i^j` vanish for `j < k` and
//! `r_k(x) = sum_i w_i (a_i - x)_+^(k-1)` is nonnegative everywhere.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::divdiff::{hammer_decompose, SynthFunction};
use crate::error::{Error, Result};
use crate::exactpoly::{Nonneg, Rational};
use crate::spline::{build_rk, sign_change_report, spline_nonneg, InequalityProblem, SignChangeReport};

/// First power sum that fails to vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentViolation {
    pub index: usize,
    pub value: Rational,
}

/// Exact check of `sum_i w_i a_i^j = 0` for `j = 0, ..., k-1`.
pub fn check_moments(problem: &InequalityProblem) -> std::result::Result<(), MomentViolation> {
    for j in 0..problem.k() {
        let value = problem.moment(j);
        if !value.is_zero() {
            return Err(MomentViolation { index: j, value });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    Fails,
    MomentViolation,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::MomentViolation => "moment_violation",
        })
    }
}

/// Which route produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certificate {
    ExactSpline,
    Moments,
    Endpoint,
    K3,
    Counting,
    Hammer,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::ExactSpline => "exact-spline",
            Certificate::Moments => "moments",
            Certificate::Endpoint => "endpoint",
            Certificate::K3 => "k3",
            Certificate::Counting => "counting",
            Certificate::Hammer => "hammer",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    /// A point with `r_k < 0` when the status is `Fails`.
    pub witness: Option<Rational>,
    pub moment: Option<MomentViolation>,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

/// The complete decision: moments first, then exact nonnegativity of `r_k`
/// over the problem domain.
pub fn decide_exact(problem: &InequalityProblem) -> Verdict {
    if let Err(m) = check_moments(problem) {
        return Verdict {
            status: Status::MomentViolation,
            witness: None,
            moment: Some(m),
            certificate: Certificate::Moments,
        };
    }
    let rk = build_rk(problem, problem.k());
    match spline_nonneg(&rk, problem.domain()) {
        Nonneg::Nonneg => Verdict {
            status: Status::Holds,
            witness: None,
            moment: None,
            certificate: Certificate::ExactSpline,
        },
        Nonneg::Witness(x) => {
            debug_assert!(rk.eval(&x).is_negative());
            Verdict {
                status: Status::Fails,
                witness: Some(x),
                moment: None,
                certificate: Certificate::ExactSpline,
            }
        }
    }
}

/// Outcome of a single criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// The condition is violated; `index` is 1-based where meaningful.
    Fail {
        index: Option<usize>,
        value: Option<Rational>,
    },
    /// A sufficient test that did not fire.
    Inconclusive,
    /// A hypothesis of the criterion is not met.
    NotApplicable(String),
    MomentViolation(MomentViolation),
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail { .. })
    }

    fn fail_at(index: usize, value: Rational) -> Self {
        Outcome::Fail {
            index: Some(index),
            value: Some(value),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail { .. } => "fail",
            Outcome::Inconclusive => "inconclusive",
            Outcome::NotApplicable(_) => "not_applicable",
            Outcome::MomentViolation(_) => "moment_violation",
        }
    }
}

/// Which of the three sign-change bounds fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountingRule {
    Weights,
    PartialSums,
    R2Values,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingResult {
    pub outcome: Outcome,
    pub fired: Option<CountingRule>,
    pub report: SignChangeReport,
}

/// Passes when the weights change sign at most `k` times, their partial sums
/// at most `k-1` times, or the breakpoint values of `r_2` at most `k-2` times.
pub fn counting_criterion(problem: &InequalityProblem) -> CountingResult {
    let report = sign_change_report(problem);
    let k = problem.k();
    let not_applicable = |why: &str| CountingResult {
        outcome: Outcome::NotApplicable(why.to_string()),
        fired: None,
        report: report.clone(),
    };
    if problem.is_empty() {
        return not_applicable("no nodes");
    }
    if !problem.nodes()[0].weight.is_positive() {
        return not_applicable("leading weight is not positive");
    }
    if check_moments(problem).is_err() {
        return not_applicable("moments do not vanish");
    }
    let fired = if report.weight_changes <= k {
        Some(CountingRule::Weights)
    } else if report.partial_sum_changes < k {
        Some(CountingRule::PartialSums)
    } else if report.r2_value_changes + 2 <= k {
        Some(CountingRule::R2Values)
    } else {
        None
    };
    CountingResult {
        outcome: if fired.is_some() {
            Outcome::Pass
        } else {
            Outcome::Inconclusive
        },
        fired,
        report,
    }
}

/// Exact test for `k = 3`: on every window `[a_{j+1}, a_j]` holding the
/// critical point `M1 / W` of the quadratic piece of `r_3`, require
/// `W * M2 >= M1^2`, where `W, M1, M2` are the partial sums of `w`, `w a`,
/// `w a^2`.
pub fn k3_criterion(problem: &InequalityProblem) -> Result<Outcome> {
    if problem.k() != 3 {
        return Err(Error::UnsupportedOrder(problem.k()));
    }
    if let Err(m) = check_moments(problem) {
        return Ok(Outcome::MomentViolation(m));
    }
    let nodes = problem.nodes();
    let (mut w, mut m1, mut m2) = (Rational::zero(), Rational::zero(), Rational::zero());
    for j in 0..nodes.len().saturating_sub(1) {
        let a = &nodes[j].arg;
        w += &nodes[j].weight;
        m1 += &nodes[j].weight * a;
        m2 += &nodes[j].weight * a * a;
        let inside = &w * a >= m1 && m1 >= &w * &nodes[j + 1].arg;
        if inside {
            let gap = &w * &m2 - &m1 * &m1;
            if gap.is_negative() {
                return Ok(Outcome::fail_at(j + 1, gap));
            }
        }
    }
    Ok(Outcome::Pass)
}

/// Exact test for at most `k + 2` nodes: with `n = k+1` it needs `w_1 >= 0`,
/// with `n = k+2` also `(-1)^k w_n >= 0`.
pub fn endpoint_criterion(problem: &InequalityProblem) -> Outcome {
    if let Err(m) = check_moments(problem) {
        return Outcome::MomentViolation(m);
    }
    let (n, k) = (problem.len(), problem.k());
    let nodes = problem.nodes();
    if n <= k {
        // Vanishing moments on at most k distinct points force zero weights,
        // and canonical problems carry no zero weights.
        return if n == 0 {
            Outcome::Pass
        } else {
            Outcome::fail_at(1, nodes[0].weight.clone())
        };
    }
    if n > k + 2 {
        return Outcome::NotApplicable(format!("{n} nodes exceed k + 2 = {}", k + 2));
    }
    if nodes[0].weight.is_negative() {
        return Outcome::fail_at(1, nodes[0].weight.clone());
    }
    if n == k + 2 {
        let last = &nodes[n - 1].weight;
        let signed = if k % 2 == 0 { last.clone() } else { -last.clone() };
        if signed.is_negative() {
            return Outcome::fail_at(n, last.clone());
        }
    }
    Outcome::Pass
}

/// Sliding-window criterion: every window's inner sum is nonnegative.
pub fn hammer_criterion(problem: &InequalityProblem) -> Outcome {
    if let Err(m) = check_moments(problem) {
        return Outcome::MomentViolation(m);
    }
    match hammer_decompose(problem, &[]) {
        Err(_) => Outcome::NotApplicable(format!(
            "needs at least k + 1 = {} nodes",
            problem.k() + 1
        )),
        Ok(dec) => match dec.first_violation() {
            None => Outcome::Pass,
            Some((j, v)) => Outcome::fail_at(j, v),
        },
    }
}

fn check_lengths(a: &[Rational], b: &[Rational]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

fn is_descending(xs: &[Rational]) -> bool {
    xs.windows(2).all(|p| p[0] >= p[1])
}

fn interleaved(a: &[Rational], b: &[Rational], i: usize) -> bool {
    a[i].clone().min(b[i].clone()) >= a[i + 1].clone().max(b[i + 1].clone())
}

fn same_pair(a: &[Rational], b: &[Rational], i: usize) -> bool {
    (a[i] == a[i + 1] && b[i] == b[i + 1]) || (a[i] == b[i + 1] && b[i] == a[i + 1])
}

/// `sum_{i<=j} w_i (x_i - p)(x_i - q)`.
fn product_sum(x: &[Rational], w: &[Rational], j: usize, p: &Rational, q: &Rational) -> Rational {
    (0..j).map(|i| &w[i] * (&x[i] - p) * (&x[i] - q)).sum()
}

fn weighted_power_sum(x: &[Rational], w: &[Rational], e: u32) -> Rational {
    x.iter()
        .zip(w)
        .map(|(xi, wi)| wi * num_traits::pow(xi.clone(), e as usize))
        .sum()
}

/// Sufficient test for `sum w_i f(a_i) >= sum w_i f(b_i)` when `f''' >= 0`,
/// for interleaved descending lists.
pub fn small_hammer(a: &[Rational], b: &[Rational], w: &[Rational]) -> Result<Outcome> {
    check_lengths(a, b)?;
    check_lengths(a, w)?;
    if !is_descending(a) || !is_descending(b) {
        return Ok(Outcome::NotApplicable("lists must be descending".into()));
    }
    let n = a.len();
    if let Some(i) = (0..n.saturating_sub(1)).find(|&i| !interleaved(a, b, i)) {
        return Ok(Outcome::NotApplicable(format!(
            "pairs {} and {} are not interleaved",
            i + 1,
            i + 2
        )));
    }
    for e in 1..=2 {
        let gap = weighted_power_sum(a, w, e) - weighted_power_sum(b, w, e);
        if !gap.is_zero() {
            return Ok(Outcome::MomentViolation(MomentViolation {
                index: e as usize,
                value: gap,
            }));
        }
    }
    for j in 1..n {
        let (p, q) = (&a[j], &b[j]);
        let gap = product_sum(a, w, j, p, q) - product_sum(b, w, j, p, q);
        if gap.is_negative() {
            return Ok(Outcome::fail_at(j, gap));
        }
    }
    Ok(Outcome::Pass)
}

/// Unweighted variant that also tolerates repeated pairs
/// `{a_i, b_i} = {a_{i+1}, b_{i+1}}`.
pub fn superize(a: &[Rational], b: &[Rational]) -> Result<Outcome> {
    check_lengths(a, b)?;
    if !is_descending(a) || !is_descending(b) {
        return Ok(Outcome::NotApplicable("lists must be descending".into()));
    }
    let n = a.len();
    if let Some(i) =
        (0..n.saturating_sub(1)).find(|&i| !interleaved(a, b, i) && !same_pair(a, b, i))
    {
        return Ok(Outcome::NotApplicable(format!(
            "pairs {} and {} are neither interleaved nor equal",
            i + 1,
            i + 2
        )));
    }
    let ones = vec![Rational::one(); n];
    for e in 1..=2 {
        let gap = weighted_power_sum(a, &ones, e) - weighted_power_sum(b, &ones, e);
        if !gap.is_zero() {
            return Ok(Outcome::MomentViolation(MomentViolation {
                index: e as usize,
                value: gap,
            }));
        }
    }
    for j in 1..=n {
        let (p, q) = (&a[j - 1], &b[j - 1]);
        let gap = product_sum(a, &ones, j, p, q) - product_sum(b, &ones, j, p, q);
        if gap.is_negative() {
            return Ok(Outcome::fail_at(j, gap));
        }
    }
    Ok(Outcome::Pass)
}

/// The single weighted problem `+w_i` at `a_i`, `-w_i` at `b_i`.
pub fn dominance_problem(
    a: &[Rational],
    b: &[Rational],
    w: &[Rational],
    k: usize,
) -> Result<InequalityProblem> {
    check_lengths(a, b)?;
    check_lengths(a, w)?;
    let pairs = a
        .iter()
        .zip(w)
        .map(|(x, wi)| (x.clone(), wi.clone()))
        .chain(b.iter().zip(w).map(|(x, wi)| (x.clone(), -wi.clone())));
    InequalityProblem::new(pairs, k)
}

/// Exact ground truth for two-list dominance at order `k`.
pub fn decide_dominance(
    a: &[Rational],
    b: &[Rational],
    w: &[Rational],
    k: usize,
) -> Result<Verdict> {
    Ok(decide_exact(&dominance_problem(a, b, w, k)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbelCheck {
    Equal,
    Mismatch { lhs: Rational, rhs: Rational },
    NotApplicable(String),
}

/// Verifies the double summation-by-parts identity
///
/// `sum_i w_i (f(a_i) - f(b_i)) = sum_{j<n} Q_j (E_j - E_{j+1})`
///
/// with `D_j = (f(a_j) - f(b_j)) / (a_j - b_j)`,
/// `E_j = (D_j - D_{j+1}) / (a_j + b_j - a_{j+1} - b_{j+1})`, `E_n = 0` and
/// `Q_j = sum_{i<=j} w_i [(a_i - a_{j+1})(a_i - b_{j+1}) - (b_i - a_{j+1})(b_i - b_{j+1})]`.
/// It relies on equal first and second weighted moments of the two lists.
pub fn abel_identity_check(
    a: &[Rational],
    b: &[Rational],
    w: &[Rational],
    f: &SynthFunction,
) -> Result<AbelCheck> {
    check_lengths(a, b)?;
    check_lengths(a, w)?;
    if f.order() != 3 {
        return Err(Error::OrderMismatch {
            expected: 3,
            found: f.order(),
        });
    }
    let n = a.len();
    for e in 1..=2 {
        if weighted_power_sum(a, w, e) != weighted_power_sum(b, w, e) {
            return Ok(AbelCheck::NotApplicable(format!(
                "weighted power sums of degree {e} differ"
            )));
        }
    }
    let mut d = Vec::with_capacity(n);
    for j in 0..n {
        let den = &a[j] - &b[j];
        if den.is_zero() {
            return Ok(AbelCheck::NotApplicable(format!("a_{0} = b_{0}", j + 1)));
        }
        d.push((f.eval(&a[j]) - f.eval(&b[j])) / den);
    }
    let mut e = Vec::with_capacity(n);
    for j in 0..n.saturating_sub(1) {
        let den = &a[j] + &b[j] - &a[j + 1] - &b[j + 1];
        if den.is_zero() {
            return Ok(AbelCheck::NotApplicable(format!(
                "a_{0} + b_{0} = a_{1} + b_{1}",
                j + 1,
                j + 2
            )));
        }
        e.push((&d[j] - &d[j + 1]) / den);
    }
    e.push(Rational::zero());
    let lhs: Rational = (0..n).map(|i| &w[i] * (f.eval(&a[i]) - f.eval(&b[i]))).sum();
    let mut rhs = Rational::zero();
    for j in 1..n {
        let (p, q) = (&a[j], &b[j]);
        let qj = product_sum(a, w, j, p, q) - product_sum(b, w, j, p, q);
        rhs += qj * (&e[j - 1] - &e[j]);
    }
    Ok(if lhs == rhs {
        AbelCheck::Equal
    } else {
        AbelCheck::Mismatch { lhs, rhs }
    })
}

/// Every applicable criterion next to the exact verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriteriaReport {
    pub verdict: Verdict,
    pub counting: Option<CountingResult>,
    pub k3: Option<Outcome>,
    pub endpoint: Option<Outcome>,
    pub hammer: Option<Outcome>,
}

impl CriteriaReport {
    /// `(name, outcome)` for each criterion that ran.
    pub fn outcomes(&self) -> Vec<(&'static str, &Outcome)> {
        let mut out = Vec::new();
        if let Some(c) = &self.counting {
            out.push(("counting", &c.outcome));
        }
        if let Some(o) = &self.k3 {
            out.push(("k3", o));
        }
        if let Some(o) = &self.endpoint {
            out.push(("endpoint", o));
        }
        if let Some(o) = &self.hammer {
            out.push(("hammer", o));
        }
        out
    }

    /// False when a sufficient criterion passes against an exact failure, or
    /// an exact criterion disagrees with the verdict.
    pub fn consistent(&self) -> bool {
        let holds = self.verdict.holds();
        let sufficient_ok = self
            .outcomes()
            .iter()
            .all(|(_, o)| !(o.is_pass() && self.verdict.status == Status::Fails));
        let exact_ok = [&self.k3, &self.endpoint]
            .into_iter()
            .flatten()
            .all(|o| match o {
                Outcome::Pass => holds,
                Outcome::Fail { .. } => !holds,
                _ => true,
            });
        sufficient_ok && exact_ok
    }
}

pub fn criteria_report(problem: &InequalityProblem) -> CriteriaReport {
    let verdict = decide_exact(problem);
    if verdict.status == Status::MomentViolation {
        return CriteriaReport {
            verdict,
            counting: None,
            k3: None,
            endpoint: None,
            hammer: None,
        };
    }
    let k3 = (problem.k() == 3).then(|| k3_criterion(problem).expect("order checked"));
    CriteriaReport {
        counting: Some(counting_criterion(problem)),
        k3,
        endpoint: Some(endpoint_criterion(problem)),
        hammer: Some(hammer_criterion(problem)),
        verdict,
    }
}
