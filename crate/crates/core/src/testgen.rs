//! Seeded instance generators and brute-force oracles.
//!
//! Everything here is a pure function of its seed, so instances and oracle
//! traces are reproducible.

use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::decide_exact;
use crate::divdiff::{apply_functional, SynthFunction};
use crate::error::{Error, Result};
use crate::exactpoly::{int, null_space, rational::pow, ratio, Interval, Poly, Rational};
use crate::exec::Exec;
use crate::order::{power_sums, Configuration};
use crate::spline::{build_rk, InequalityProblem};

/// Shape of a random instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub n: usize,
    pub k: usize,
    pub argument_range: Interval,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(n: usize, k: usize, lo: i64, hi: i64, seed: u64) -> Result<Self> {
        if k == 0 || n < k {
            return Err(Error::InvalidInput(format!("need n >= k >= 1, got n = {n}, k = {k}")));
        }
        Ok(InstanceSpec {
            n,
            k,
            argument_range: Interval::new(int(lo), int(hi))?,
            seed,
        })
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random rational in `iv` with denominator at most 4.
pub fn random_rational<R: Rng>(rng: &mut R, iv: &Interval) -> Rational {
    let den: i64 = rng.random_range(1..=4);
    let d = int(den);
    let lo = (&iv.lo * &d).ceil().to_integer();
    let hi = (&iv.hi * &d).floor().to_integer();
    if lo >= hi {
        return iv.lo.clone();
    }
    let span = &hi - &lo;
    let span_i: i64 = span.try_into().unwrap_or(i64::MAX);
    let off = rng.random_range(0..=span_i);
    Rational::new(lo + num_bigint::BigInt::from(off), d.to_integer())
}

/// `n` distinct random rationals from `iv`.
pub fn random_arguments<R: Rng>(rng: &mut R, n: usize, iv: &Interval) -> Result<Vec<Rational>> {
    let mut out: Vec<Rational> = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n {
        attempts += 1;
        if attempts > 1000 * (n + 1) {
            return Err(Error::InvalidInput(format!(
                "cannot draw {n} distinct rationals from [{}, {}]",
                iv.lo, iv.hi
            )));
        }
        let x = random_rational(rng, iv);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Weights in the null space of the `k x n` moment matrix, as a random
/// integer combination (coefficients in `[-9, 9]`) of its basis.
pub fn sample_weights<R: Rng>(rng: &mut R, args: &[Rational], k: usize) -> Result<Vec<Rational>> {
    if args.len() <= k {
        return Err(Error::TooFewNodes {
            needed: k + 1,
            found: args.len(),
        });
    }
    let matrix: Vec<Vec<Rational>> = (0..k).map(|j| args.iter().map(|a| pow(a, j)).collect()).collect();
    let basis = null_space(&matrix);
    loop {
        let mut w = vec![Rational::zero(); args.len()];
        for v in &basis {
            let c = int(rng.random_range(-9..=9));
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi += &c * vi;
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            return Ok(w);
        }
    }
}

/// Random zero-moment problem: distinct rational arguments and null-space
/// weights. Roughly balanced between holding and failing instances.
pub fn sample_problem(spec: &InstanceSpec) -> Result<InequalityProblem> {
    if spec.n <= spec.k {
        return Err(Error::TooFewNodes {
            needed: spec.k + 1,
            found: spec.n,
        });
    }
    let mut rng = rng(spec.seed);
    let args = random_arguments(&mut rng, spec.n, &spec.argument_range)?;
    let weights = sample_weights(&mut rng, &args, spec.k)?;
    InequalityProblem::new(args.into_iter().zip(weights), spec.k)
}

/// `1 / prod_{j != i} (x_i - x_j)`: the weights of `[x_0, ..., x_k; f]`.
pub fn divided_difference_weights(points: &[Rational]) -> Vec<Rational> {
    points
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            let den: Rational = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, xj)| xi - xj)
                .product();
            den.recip()
        })
        .collect()
}

/// Random problem that always holds: a positive integer combination of one
/// to three order-`k` divided differences over random `(k+1)`-subsets.
pub fn sample_holding_problem(spec: &InstanceSpec) -> Result<InequalityProblem> {
    if spec.n <= spec.k {
        return Err(Error::TooFewNodes {
            needed: spec.k + 1,
            found: spec.n,
        });
    }
    let mut rng = rng(spec.seed ^ 0x5e_ed0f_d1ff);
    let args = random_arguments(&mut rng, spec.n, &spec.argument_range)?;
    let mut weights = vec![Rational::zero(); spec.n];
    let terms = rng.random_range(1..=3);
    for _ in 0..terms {
        let idx = sample(&mut rng, spec.n, spec.k + 1).into_vec();
        let pts: Vec<Rational> = idx.iter().map(|&i| args[i].clone()).collect();
        let c = int(rng.random_range(1..=9));
        for (&i, w) in idx.iter().zip(divided_difference_weights(&pts)) {
            weights[i] += &c * w;
        }
    }
    InequalityProblem::new(args.into_iter().zip(weights), spec.k)
}

/// Random problem with at most `k + 2` nodes and zero moments.
pub fn sample_small_problem(k: usize, seed: u64) -> Result<InequalityProblem> {
    let mut r = rng(seed);
    let n = r.random_range(k + 1..=k + 2);
    sample_problem(&InstanceSpec::new(n, k, -5, 5, r.random())?)
}

fn verify_pairs(pairs: &[(&[i64], &[i64])], k: usize) -> Result<Vec<(Configuration, Configuration)>> {
    pairs
        .iter()
        .map(|(x, y)| {
            let (cx, cy) = (Configuration::from_ints(x), Configuration::from_ints(y));
            if power_sums(&cx, k) != power_sums(&cy, k) {
                return Err(Error::InvalidInput(format!(
                    "{x:?} and {y:?} do not share power sums up to degree {}",
                    k - 1
                )));
            }
            Ok((cx, cy))
        })
        .collect()
}

/// Integer pairs with equal power sums of degrees `1, ..., k-1`.
pub fn pte_pairs(k: usize) -> Result<Vec<(Configuration, Configuration)>> {
    match k {
        3 => verify_pairs(
            &[
                (&[7, 3, 2], &[6, 5, 1]),
                (&[5, 4, 0], &[6, 2, 1]),
                (&[6, 5, 3, 0], &[7, 4, 2, 1]),
            ],
            3,
        ),
        4 => verify_pairs(
            &[
                (&[11, 7, 4, 0], &[10, 9, 2, 1]),
                (&[15, 12, 10, 9, 6, 5, 3, 0], &[14, 13, 11, 8, 7, 4, 2, 1]),
            ],
            4,
        ),
        _ => Err(Error::UnsupportedOrder(k)),
    }
}

/// `x -> scale * x + shift`, reflected when `negate` is set. Equal power sums
/// up to any degree survive every such map.
pub fn affine_image(c: &Configuration, scale: &Rational, shift: &Rational, negate: bool) -> Configuration {
    let sign = if negate { -Rational::one() } else { Rational::one() };
    Configuration::new(c.values().iter().map(|v| &sign * (scale * v + shift)).collect())
}

/// PTE pairs together with a few affine and reflected copies.
pub fn pte_family(k: usize) -> Result<Vec<(Configuration, Configuration)>> {
    let mut out = Vec::new();
    for (x, y) in pte_pairs(k)? {
        for (scale, shift) in [(int(1), int(0)), (int(2), int(-3)), (ratio(1, 3), ratio(5, 2))] {
            for negate in [false, true] {
                out.push((
                    affine_image(&x, &scale, &shift, negate),
                    affine_image(&y, &scale, &shift, negate),
                ));
            }
        }
    }
    Ok(out)
}

/// Minimum of `r_k` at equally spaced rational points of the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMin {
    pub min: Rational,
    pub argmin: Rational,
}

pub fn grid_oracle(problem: &InequalityProblem, grid_points: usize, exec: Exec) -> Result<GridMin> {
    if grid_points < 2 {
        return Err(Error::InvalidInput("grid needs at least two points".into()));
    }
    let rk = build_rk(problem, problem.k());
    let dom = problem.domain();
    let step = (&dom.hi - &dom.lo) / int(grid_points as i64 - 1);
    let values = exec.map_range(grid_points, |i| {
        let x = &dom.lo + &step * int(i as i64);
        let v = rk.eval(&x);
        (v, x)
    });
    let (min, argmin) = values
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("at least two points");
    Ok(GridMin { min, argmin })
}

/// Random test function of order `k`: polynomial part of degree below `k`
/// with integer coefficients in `[-10, 10]` and one to six knots with masses
/// in `[0, 10]`, placed around `iv`.
pub fn random_synth<R: Rng>(rng: &mut R, k: usize, iv: &Interval) -> SynthFunction {
    let coeffs: Vec<Rational> = (0..k).map(|_| int(rng.random_range(-10..=10))).collect();
    let pad = int(1);
    let wide = Interval {
        lo: &iv.lo - &pad,
        hi: &iv.hi + &pad,
    };
    let knots = (0..rng.random_range(1..=6))
        .map(|_| {
            let t = random_rational(rng, &wide);
            let c = ratio(rng.random_range(0..=40), 4);
            (t, c)
        })
        .collect();
    SynthFunction::new(Poly::new(coeffs), knots, k).expect("valid by construction")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionalOutcome {
    AllNonneg { trials: usize },
    Counterexample { f: SynthFunction, value: Rational },
}

impl FunctionalOutcome {
    pub fn all_nonneg(&self) -> bool {
        matches!(self, FunctionalOutcome::AllNonneg { .. })
    }
}

/// Probes the inequality with test functions: `+-x^j` for `j < k`, the
/// prototype `(x - t)_+^(k-1)` at the exact witness (if any), at every
/// argument and at every gap midpoint, then `trials` random functions.
pub fn functional_oracle(problem: &InequalityProblem, trials: usize, seed: u64, exec: Exec) -> FunctionalOutcome {
    let k = problem.k();
    let mut probes = Vec::new();
    if let Some(w) = decide_exact(problem).witness {
        probes.push(SynthFunction::prototype(w, k));
    }
    for j in 0..k {
        let mono = Poly::monomial(Rational::one(), j);
        probes.push(SynthFunction::polynomial(mono.clone(), k).expect("degree below k"));
        probes.push(SynthFunction::polynomial(-&mono, k).expect("degree below k"));
    }
    let args = problem.args();
    for a in &args {
        probes.push(SynthFunction::prototype(a.clone(), k));
    }
    for pair in args.windows(2) {
        probes.push(SynthFunction::prototype((&pair[0] + &pair[1]) / int(2), k));
    }
    let mut r = rng(seed);
    probes.extend((0..trials).map(|_| random_synth(&mut r, k, problem.domain())));
    let total = probes.len();
    let found = exec.find_first(&probes, |f| {
        let v = apply_functional(problem, f).expect("orders match");
        v.is_negative().then_some(v)
    });
    match found {
        Some((i, value)) => FunctionalOutcome::Counterexample {
            f: probes[i].clone(),
            value,
        },
        None => FunctionalOutcome::AllNonneg { trials: total },
    }
}

/// Interleaved descending lists `a`, `b` with weights matching their first
/// and second weighted moments: `2n` distinct rationals are sorted and paired
/// off consecutively, each pair in random orientation.
pub fn random_two_list(n: usize, seed: u64) -> Result<(Vec<Rational>, Vec<Rational>, Vec<Rational>)> {
    if n < 3 {
        return Err(Error::TooFewNodes { needed: 3, found: n });
    }
    let mut r = rng(seed);
    let mut vals = random_arguments(&mut r, 2 * n, &Interval::new(int(-5), int(5))?)?;
    vals.sort_by(|x, y| y.cmp(x));
    let (mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for pair in vals.chunks(2) {
        let (hi, lo) = (pair[0].clone(), pair[1].clone());
        if r.random_bool(0.5) {
            a.push(hi);
            b.push(lo);
        } else {
            a.push(lo);
            b.push(hi);
        }
    }
    let rows = vec![
        a.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<_>>(),
        a.iter().zip(&b).map(|(x, y)| x * x - y * y).collect::<Vec<_>>(),
    ];
    let basis = null_space(&rows);
    let w = loop {
        let mut w = vec![Rational::zero(); n];
        for v in &basis {
            let c = int(r.random_range(-9..=9));
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi += &c * vi;
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            break w;
        }
    };
    Ok((a, b, w))
}

/// Pairs `(a, b)` with `a` dominating `b` at order `k`, in floating point:
/// `a` is random and `b` comes from a few downward moves of random
/// `k`-subsets, each of which lowers the configuration in the order.
pub fn random_dominant_pair(n: usize, k: usize, seed: u64) -> Result<(crate::paths::FloatConfig, crate::paths::FloatConfig)> {
    use crate::paths::FloatConfig;
    use crate::paths::roots::SubsetMove;
    if n < k || k < 2 {
        return Err(Error::InvalidInput(format!("need n >= k >= 2, got n = {n}, k = {k}")));
    }
    let mut r = rng(seed);
    let mut vals: Vec<f64> = Vec::with_capacity(n);
    while vals.len() < n {
        let v = (r.random_range(-500..=500) as f64) / 100.0;
        if vals.iter().all(|x| (x - v).abs() > 0.2) {
            vals.push(v);
        }
    }
    vals.sort_by(|x, y| y.total_cmp(x));
    let a = vals.clone();
    let moves = r.random_range(1..=3);
    for _ in 0..moves {
        let mut subset = sample(&mut r, n, k).into_vec();
        subset.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
        let mv = SubsetMove::new(&vals, subset, false);
        if mv.blocked() || !mv.c_end.is_finite() {
            continue;
        }
        let frac = r.random_range(0.2..0.8);
        mv.apply(&mut vals, mv.c_end * frac);
        vals.sort_by(|x, y| y.total_cmp(x));
    }
    Ok((FloatConfig::new(a)?, FloatConfig::new(vals)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::check_moments;

    fn six_point() -> InequalityProblem {
        InequalityProblem::from_ints(&[6, 5, 4, 2, 1, 0], &[1, -3, 3, -3, 3, -1], 3).unwrap()
    }

    #[test]
    fn weights_from_null_space() {
        let args = vec![int(2), int(1), int(0)];
        let w = sample_weights(&mut rng(1), &args, 2).unwrap();
        assert!(!w[0].is_zero());
        let scale = &w[0];
        assert_eq!(w.iter().map(|x| x / scale).collect::<Vec<_>>(), vec![int(1), int(-2), int(1)]);
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = InstanceSpec::new(6, 3, -5, 5, 42).unwrap();
        let p = sample_problem(&spec).unwrap();
        assert_eq!(p, sample_problem(&spec).unwrap());
        assert_eq!(check_moments(&p), Ok(()));
        assert!(sample_problem(&InstanceSpec::new(3, 3, -5, 5, 1).unwrap()).is_err());
        let h = sample_holding_problem(&spec).unwrap();
        assert!(decide_exact(&h).holds());
    }

    #[test]
    fn pte() {
        let pairs = pte_pairs(3).unwrap();
        assert_eq!(power_sums(&pairs[0].0, 3).0, vec![int(12), int(62)]);
        let p4 = pte_pairs(4).unwrap();
        assert_eq!(power_sums(&p4[1].0, 4).0[0], int(60));
        assert!(pte_pairs(5).is_err());
        for (x, y) in pte_family(4).unwrap() {
            assert_eq!(power_sums(&x, 4), power_sums(&y, 4));
        }
    }

    #[test]
    fn grid() {
        let g = grid_oracle(&six_point(), 49, Exec::default()).unwrap();
        assert_eq!(g.min, int(0));
        let g = grid_oracle(&six_point().negated(), 49, Exec::default()).unwrap();
        assert!(g.min.is_negative());
        let step = InequalityProblem::from_ints(&[1, 0], &[1, -1], 1).unwrap();
        assert_eq!(grid_oracle(&step, 2, Exec::Sequential).unwrap().min, int(0));
        assert!(grid_oracle(&step, 1, Exec::Sequential).is_err());
    }

    #[test]
    fn functional() {
        assert!(functional_oracle(&six_point(), 500, 7, Exec::default()).all_nonneg());
        match functional_oracle(&six_point().negated(), 0, 7, Exec::Sequential) {
            FunctionalOutcome::Counterexample { value, .. } => assert!(value.is_negative()),
            other => panic!("expected a counterexample, got {other:?}"),
        }
        let bad = InequalityProblem::from_ints(&[2, 1, 0], &[1, -2, 1], 3).unwrap();
        assert!(!functional_oracle(&bad, 0, 1, Exec::Sequential).all_nonneg());
    }
}
