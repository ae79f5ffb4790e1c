//! The order `x >_k y` on configurations with equal power sums
//! `s_1, ..., s_{k-1}`: `x` dominates `y` when `sum f(x_i) >= sum f(y_i)` for
//! every `f` with `f^(k) >= 0`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::criteria::{decide_exact, dominance_problem, Verdict};
use crate::error::{Error, Result};
use crate::exactpoly::{rational::pow, Rational};

/// A multiset of values, stored in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    values: Vec<Rational>,
}

impl Configuration {
    pub fn new(mut values: Vec<Rational>) -> Self {
        values.sort_by(|a, b| b.cmp(a));
        Configuration { values }
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Self::new(xs.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.values.first()
    }

    /// Run lengths of equal consecutive values.
    pub fn block_lengths(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 && self.values[i - 1] == *v {
                *out.last_mut().expect("nonempty") += 1;
            } else {
                out.push(1);
            }
        }
        out
    }
}

/// `s_j = sum_i x_i^j` for `j = 1, ..., k-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSums(pub Vec<Rational>);

pub fn power_sums(x: &Configuration, k: usize) -> PowerSums {
    PowerSums(
        (1..k)
            .map(|j| x.values.iter().map(|v| pow(v, j)).sum())
            .collect(),
    )
}

fn power_sum(x: &Configuration, j: usize) -> Rational {
    x.values.iter().map(|v| pow(v, j)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Dominates,
    Dominated,
    Equal,
    Incomparable,
    DifferentClass,
}

impl Relation {
    pub fn label(self) -> &'static str {
        match self {
            Relation::Dominates => "dominates",
            Relation::Dominated => "dominated",
            Relation::Equal => "equal",
            Relation::Incomparable => "incomparable",
            Relation::DifferentClass => "different_class",
        }
    }
}

fn check_same_len(x: &Configuration, y: &Configuration) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

/// `+1` at every `x_i`, `-1` at every `y_i`, at order `k`.
pub fn difference_verdict(x: &Configuration, y: &Configuration, k: usize) -> Result<Verdict> {
    let ones = vec![Rational::one(); x.len()];
    Ok(decide_exact(&dominance_problem(&x.values, &y.values, &ones, k)?))
}

pub fn compare(x: &Configuration, y: &Configuration, k: usize) -> Result<Relation> {
    check_same_len(x, y)?;
    if power_sums(x, k) != power_sums(y, k) {
        return Ok(Relation::DifferentClass);
    }
    if x == y {
        return Ok(Relation::Equal);
    }
    if difference_verdict(x, y, k)?.holds() {
        Ok(Relation::Dominates)
    } else if difference_verdict(y, x, k)?.holds() {
        Ok(Relation::Dominated)
    } else {
        Ok(Relation::Incomparable)
    }
}

/// The three conditions that coincide when `n = k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smooth1Report {
    /// `sum x_i^k` against `sum y_i^k`.
    pub power_k: Ordering,
    /// `max x` against `max y`.
    pub max: Ordering,
    pub relation: Relation,
}

impl Smooth1Report {
    pub fn agrees(&self) -> bool {
        let expected = match self.relation {
            Relation::Dominates => Ordering::Greater,
            Relation::Dominated => Ordering::Less,
            Relation::Equal => Ordering::Equal,
            _ => return false,
        };
        self.power_k == expected && self.max == expected
    }
}

pub fn smooth1_equivalence(x: &Configuration, y: &Configuration, k: usize) -> Result<Smooth1Report> {
    check_same_len(x, y)?;
    if x.len() != k {
        return Err(Error::InvalidInput(format!(
            "configurations need exactly k = {k} values, found {}",
            x.len()
        )));
    }
    if power_sums(x, k) != power_sums(y, k) {
        return Err(Error::InvalidInput(
            "configurations have different power sums".into(),
        ));
    }
    Ok(Smooth1Report {
        power_k: power_sum(x, k).cmp(&power_sum(y, k)),
        max: x.max().cmp(&y.max()),
        relation: compare(x, y, k)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Maximal,
    Minimal,
    Both,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalPattern {
    pub block_lengths: Vec<usize>,
    pub role: Role,
    /// `1 = i_1 <= ... <= i_k = n + 1` for the maximal pattern when it exists,
    /// otherwise for the minimal one.
    pub witness_indices: Option<Vec<usize>>,
}

impl ExtremalPattern {
    pub fn is_maximal(&self) -> bool {
        matches!(self.role, Role::Maximal | Role::Both)
    }

    pub fn is_minimal(&self) -> bool {
        matches!(self.role, Role::Minimal | Role::Both)
    }
}

/// Splits `x` into `segments` consecutive constant blocks (possibly empty),
/// where blocks with `short(s)` (0-based `s`) hold at most one value.
/// Returns the 1-based boundaries `i_1, ..., i_{segments+1}`.
fn segment_search(x: &[Rational], segments: usize, short: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let n = x.len();
    // const_end[p] = end of the constant run starting at p.
    let mut const_end = vec![n; n + 1];
    for p in (0..n).rev() {
        const_end[p] = if p + 1 < n && x[p + 1] == x[p] {
            const_end[p + 1]
        } else {
            p + 1
        };
    }
    // reach[s][p]: position p reachable after s segments, with back-pointer.
    let mut reach: Vec<Vec<Option<usize>>> = vec![vec![None; n + 1]; segments + 1];
    reach[0][0] = Some(0);
    for s in 0..segments {
        for p in 0..=n {
            if reach[s][p].is_none() {
                continue;
            }
            let max_end = if short(s) {
                (p + 1).min(n)
            } else {
                const_end[p].max(p)
            };
            for slot in &mut reach[s + 1][p..=max_end] {
                slot.get_or_insert(p);
            }
        }
    }
    reach[segments][n]?;
    let mut bounds = vec![n];
    let mut p = n;
    for s in (1..=segments).rev() {
        p = reach[s][p].expect("back-pointer");
        bounds.push(p);
    }
    bounds.reverse();
    Some(bounds.into_iter().map(|b| b + 1).collect())
}

/// Pattern search for extremal elements of the class of `x` at order `k`.
///
/// Maximal: there are `1 = i_1 <= ... <= i_k = n+1` with `x` constant on each
/// `[i_j, i_{j+1})` and `i_{2j} - i_{2j-1} <= 1`. Minimal: the same with the
/// short blocks at even positions instead.
pub fn extremal_classify(x: &Configuration, k: usize) -> ExtremalPattern {
    let segments = k.saturating_sub(1);
    let maximal = segment_search(&x.values, segments, |s| s % 2 == 0);
    let minimal = segment_search(&x.values, segments, |s| s % 2 == 1);
    let role = match (&maximal, &minimal) {
        (Some(_), Some(_)) => Role::Both,
        (Some(_), None) => Role::Maximal,
        (None, Some(_)) => Role::Minimal,
        (None, None) => Role::Neither,
    };
    ExtremalPattern {
        block_lengths: x.block_lengths(),
        role,
        witness_indices: maximal.or(minimal),
    }
}

/// True iff the class of `x` at order `k` is the single point `x`, i.e. `x`
/// is extremal at order `k - 1`.
pub fn is_singleton(x: &Configuration, k: usize) -> Result<bool> {
    if x.len() < k {
        return Err(Error::TooFewNodes {
            needed: k,
            found: x.len(),
        });
    }
    Ok(extremal_classify(x, k - 1).role != Role::Neither)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SixPoint {
    Dominates,
    NotDominates,
    /// Sums of squares differ, so the symmetric vectors are in different
    /// classes at order 4.
    DifferentClass,
    /// Same class, but the sums of cubes differ and the test does not apply.
    HypothesisUnmet,
}

fn symmetric_six(t: &[Rational; 3]) -> Configuration {
    Configuration::new(t.iter().flat_map(|v| [v.clone(), -v.clone()]).collect())
}

fn check_nonneg(t: &[Rational; 3]) -> Result<()> {
    match t.iter().find(|v| v.is_negative()) {
        Some(v) => Err(Error::InvalidInput(format!("negative entry {v}"))),
        None => Ok(()),
    }
}

/// `(x, y, z, -z, -y, -x) >_4 (a, b, c, -c, -b, -a)` for nonnegative entries
/// with equal sums of squares and of cubes holds iff `max(x,y,z) >= max(a,b,c)`.
pub fn six_point_check(xyz: &[Rational; 3], abc: &[Rational; 3]) -> Result<SixPoint> {
    check_nonneg(xyz)?;
    check_nonneg(abc)?;
    let sum = |t: &[Rational; 3], e: usize| -> Rational { t.iter().map(|v| pow(v, e)).sum() };
    if sum(xyz, 2) != sum(abc, 2) {
        return Ok(SixPoint::DifferentClass);
    }
    if sum(xyz, 3) != sum(abc, 3) {
        return Ok(SixPoint::HypothesisUnmet);
    }
    let max = |t: &[Rational; 3]| t.iter().max().cloned().unwrap_or_else(Rational::zero);
    Ok(if max(xyz) >= max(abc) {
        SixPoint::Dominates
    } else {
        SixPoint::NotDominates
    })
}

/// Exact decision of the six-point dominance on the merged order-4 problem.
pub fn six_point_exact(xyz: &[Rational; 3], abc: &[Rational; 3]) -> Result<Verdict> {
    check_nonneg(xyz)?;
    check_nonneg(abc)?;
    difference_verdict(&symmetric_six(xyz), &symmetric_six(abc), 4)
}
