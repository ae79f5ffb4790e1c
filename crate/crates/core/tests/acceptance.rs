//! End-to-end acceptance suite. Runs every check, prints one line per
//! criterion and exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kconvex::criteria::{
    abel_identity_check, counting_criterion, decide_dominance, decide_exact, endpoint_criterion,
    hammer_criterion, k3_criterion, small_hammer, superize, AbelCheck, Outcome, Status,
};
use kconvex::divdiff::{hammer_decompose, hammer_identity_check, IdentityCheck};
use kconvex::exactpoly::{int, Rational};
use kconvex::order::{compare, extremal_classify, smooth1_equivalence, Configuration, Relation};
use kconvex::paths::{
    find_extremal_numeric, increasing_path_k3, increasing_path_nk1, ode_demo_path, ExtremalRole,
    FloatConfig, PathResult,
};
use kconvex::spline::{
    build_rk, count_sign_changes, partial_sums, r2_breakpoint_values, sign_change_report,
    spline_min, spline_sign_changes,
};
use kconvex::testgen::{
    functional_oracle, grid_oracle, pte_family, random_dominant_pair, random_synth,
    random_two_list, rng, sample_holding_problem, sample_problem, sample_small_problem,
    InstanceSpec,
};
use kconvex::{Exec, InequalityProblem};
use num_traits::{Signed, Zero};
use rand::Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> std::result::Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

/// Random zero-moment instances with `n <= 8`, `k <= 5`; odd seeds give
/// instances that hold by construction.
fn instance(i: u64) -> InequalityProblem {
    let k = 1 + (i % 5) as usize;
    let n = k + 1 + ((i / 5) as usize % (8 - k));
    let spec = InstanceSpec::new(n, k, -5, 5, 1000 + i).expect("valid spec");
    if i % 2 == 1 {
        sample_holding_problem(&spec).expect("holding instance")
    } else {
        sample_problem(&spec).expect("instance")
    }
}

fn k3_instance(i: u64) -> InequalityProblem {
    let n = 4 + (i % 5) as usize;
    let spec = InstanceSpec::new(n, 3, -5, 5, 2000 + i).expect("valid spec");
    if i % 2 == 1 {
        sample_holding_problem(&spec).expect("holding instance")
    } else {
        sample_problem(&spec).expect("instance")
    }
}

fn small_instance(i: u64) -> InequalityProblem {
    let k = 1 + (i % 5) as usize;
    if i % 3 == 2 {
        let n = k + 1 + (i / 3 % 2) as usize;
        let spec = InstanceSpec::new(n, k, -5, 5, 3000 + i).expect("valid spec");
        sample_holding_problem(&spec).expect("holding instance")
    } else {
        sample_small_problem(k, 3000 + i).expect("instance")
    }
}

fn six_point() -> InequalityProblem {
    InequalityProblem::from_ints(&[6, 5, 4, 2, 1, 0], &[1, -3, 3, -3, 3, -1], 3).unwrap()
}

fn c1_six_point() -> Check {
    let start = Instant::now();
    let p = six_point();
    ensure(decide_exact(&p).status == Status::Holds, || "exact verdict is not holds".into())?;
    let plain = hammer_decompose(&p, &[]).map_err(|e| e.to_string())?;
    ensure(plain.first_violation() == Some((2, int(-1))), || {
        format!("unaugmented violation {:?}", plain.first_violation())
    })?;
    let aug = hammer_decompose(&p, &[int(3)]).map_err(|e| e.to_string())?;
    ensure(aug.coefficients == ints(&[6, 0, 0, 6]), || {
        format!("coefficients {:?}", aug.coefficients)
    })?;
    ensure(
        aug.windows[0] == ints(&[6, 5, 4, 3]) && aug.windows[3] == ints(&[3, 2, 1, 0]),
        || "window arguments differ".into(),
    )?;
    within(start, Duration::from_secs(1))?;
    Ok("holds; window 2 inner sum -1; anchored coefficients (6,0,0,6)".into())
}

fn c2_example() -> Check {
    let start = Instant::now();
    let a = ints(&[11, 8, 8, 7, 3, 1]);
    let b = ints(&[10, 10, 6, 6, 6, 0]);
    let r = superize(&a, &b).map_err(|e| e.to_string())?;
    ensure(matches!(r, Outcome::NotApplicable(_)), || format!("six-term outcome {r:?}"))?;
    let a7 = ints(&[11, 8, 8, 7, 7, 3, 1]);
    let b7 = ints(&[10, 10, 7, 6, 6, 6, 0]);
    let r = superize(&a7, &b7).map_err(|e| e.to_string())?;
    ensure(r == Outcome::Pass, || format!("seven-term outcome {r:?}"))?;
    let v = decide_dominance(&a, &b, &ints(&[1; 6]), 3).map_err(|e| e.to_string())?;
    ensure(v.holds(), || "merged problem does not hold".into())?;
    within(start, Duration::from_secs(1))?;
    Ok("not_applicable, then pass after adding 7; merged problem holds".into())
}

fn c3_oracles() -> Check {
    let start = Instant::now();
    let results = Exec::default().map_range(200, |i| {
        let p = instance(i as u64);
        let holds = decide_exact(&p).holds();
        let functional = functional_oracle(&p, 500, 7000 + i as u64, Exec::Sequential);
        if functional.all_nonneg() != holds {
            return Err(format!("instance {i}: exact {holds}, functional oracle disagrees"));
        }
        let grid = grid_oracle(&p, 4096, Exec::Sequential).map_err(|e| e.to_string())?;
        let (exact_min, _) = spline_min(&build_rk(&p, p.k()), p.domain());
        if holds && grid.min.is_negative() {
            return Err(format!("instance {i}: holds but grid minimum {}", grid.min));
        }
        let decisive = kconvex::to_f64(&exact_min).abs() > 1e-6;
        if decisive && (grid.min.is_negative() == holds) {
            return Err(format!("instance {i}: grid sign disagrees with exact minimum {exact_min}"));
        }
        Ok((holds, decisive))
    });
    let mut holds = 0;
    let mut decisive = 0;
    for r in results {
        let (h, d) = r?;
        holds += h as usize;
        decisive += d as usize;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!(
        "200 instances ({holds} hold); functional oracle agrees on all, grid sign on {decisive} decisive"
    ))
}

fn c4_exact_criteria() -> Check {
    let start = Instant::now();
    for i in 0..200 {
        let p = k3_instance(i);
        let holds = decide_exact(&p).holds();
        let o = k3_criterion(&p).map_err(|e| e.to_string())?;
        ensure(o.is_pass() == holds && (o.is_fail() != holds), || {
            format!("k3 instance {i}: {o:?} vs exact {holds}")
        })?;
    }
    for i in 0..200 {
        let p = small_instance(i);
        let holds = decide_exact(&p).holds();
        let o = endpoint_criterion(&p);
        ensure(o.is_pass() == holds && (o.is_fail() != holds), || {
            format!("endpoint instance {i}: {o:?} vs exact {holds}")
        })?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("k3 and endpoint agree with the exact decision on 200 + 200 instances".into())
}

fn c5_soundness() -> Check {
    let start = Instant::now();
    let mut passes = [0usize; 4];
    for i in 0..500u64 {
        let p = instance(10_000 + i);
        let holds = decide_exact(&p).holds();
        if counting_criterion(&p).outcome.is_pass() {
            passes[0] += 1;
            ensure(holds, || format!("counting passes on failing instance {i}"))?;
        }
        if hammer_criterion(&p).is_pass() {
            passes[1] += 1;
            ensure(holds, || format!("hammer passes on failing instance {i}"))?;
        }
        let n = 3 + (i % 4) as usize;
        let (a, b, w) = random_two_list(n, 20_000 + i).map_err(|e| e.to_string())?;
        if small_hammer(&a, &b, &w).map_err(|e| e.to_string())?.is_pass() {
            passes[2] += 1;
            let v = decide_dominance(&a, &b, &w, 3).map_err(|e| e.to_string())?;
            ensure(v.holds(), || format!("small hammer passes on failing pair {i}"))?;
        }
        let (a, b) = superize_instance(i);
        if superize(&a, &b).map_err(|e| e.to_string())?.is_pass() {
            passes[3] += 1;
            let ones = vec![int(1); a.len()];
            let v = decide_dominance(&a, &b, &ones, 3).map_err(|e| e.to_string())?;
            ensure(v.holds(), || format!("superize passes on failing pair {i}"))?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "500 instances; passes: counting {}, hammer {}, small hammer {}, superize {}; no violations",
        passes[0], passes[1], passes[2], passes[3]
    ))
}

/// Unweighted pairs with equal sums and sums of squares: a PTE-derived pair
/// in either orientation with a few shared random values appended.
fn superize_instance(i: u64) -> (Vec<Rational>, Vec<Rational>) {
    let family = pte_family(3).expect("pte");
    let mut r = rng(30_000 + i);
    let (x, y) = &family[r.random_range(0..family.len())];
    let (x, y) = if r.random_bool(0.5) { (x, y) } else { (y, x) };
    let mut a = x.values().to_vec();
    let mut b = y.values().to_vec();
    for _ in 0..r.random_range(0..=2) {
        let v = int(r.random_range(-3..=12));
        a.push(v.clone());
        b.push(v);
    }
    a.sort_by(|p, q| q.cmp(p));
    b.sort_by(|p, q| q.cmp(p));
    (a, b)
}

fn c6_identities() -> Check {
    let start = Instant::now();
    for i in 0..200u64 {
        let p = instance(40_000 + i);
        let mut r = rng(41_000 + i);
        let anchors: Vec<Rational> = (0..r.random_range(0..=2))
            .map(|_| kconvex::testgen::random_rational(&mut r, p.domain()))
            .collect();
        let f = random_synth(&mut r, p.k(), p.domain());
        let mut pts = p.args();
        pts.extend(anchors.iter().cloned());
        pts.sort();
        pts.dedup();
        let table = f.tabulate(&pts).map_err(|e| e.to_string())?;
        let c = hammer_identity_check(&p, &anchors, &table).map_err(|e| e.to_string())?;
        ensure(c == IdentityCheck::Equal, || format!("window identity, instance {i}: {c:?}"))?;
    }
    for i in 0..200u64 {
        let n = 3 + (i % 5) as usize;
        let (a, b, w) = random_two_list(n, 50_000 + i).map_err(|e| e.to_string())?;
        let f = random_synth(&mut rng(51_000 + i), 3, &kconvex::Interval::new(int(-5), int(5)).unwrap());
        let c = abel_identity_check(&a, &b, &w, &f).map_err(|e| e.to_string())?;
        ensure(c == AbelCheck::Equal, || format!("summation identity, instance {i}: {c:?}"))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("window and summation-by-parts identities exact on 200 + 200 instances".into())
}

fn all_generated() -> impl Iterator<Item = InequalityProblem> {
    (0..200)
        .map(instance)
        .chain((0..200).map(k3_instance))
        .chain((0..200).map(small_instance))
        .chain((0..500).map(|i| instance(10_000 + i)))
}

fn c7_lower_bound() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for p in all_generated() {
        if p.is_empty() {
            continue;
        }
        count += 1;
        let changes = count_sign_changes(&partial_sums(&p));
        ensure(changes + 1 >= p.k(), || {
            format!("{changes} partial-sum changes at k = {} for {:?}", p.k(), p.args())
        })?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{count} zero-moment instances, all with at least k - 1 partial-sum changes"))
}

fn c8_structure() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for p in all_generated() {
        count += 1;
        for j in 2..=p.k() {
            let rj = build_rk(&p, j);
            let lower = build_rk(&p, j - 1);
            let d = rj.derivative();
            let scale = int(-(j as i64 - 1));
            for (m, (dp, lp)) in d.pieces().iter().zip(lower.pieces()).enumerate() {
                ensure(*dp == lp.scale(&scale), || format!("derivative of r_{j}, piece {m}"))?;
            }
        }
        let rk = build_rk(&p, p.k());
        ensure(rk.left_piece().is_zero(), || "r_k nonzero left of the hull".into())?;
        if let Some(top) = p.args().first() {
            ensure(rk.eval(&(top + int(1))).is_zero(), || "r_k nonzero right of the hull".into())?;
        }
        let report = sign_change_report(&p);
        ensure(spline_sign_changes(&build_rk(&p, 1)) == report.partial_sum_changes, || {
            format!("r_1 sign changes for {:?}", p.args())
        })?;
        if p.k() >= 2 {
            ensure(
                spline_sign_changes(&build_rk(&p, 2)) == count_sign_changes(&r2_breakpoint_values(&p)),
                || format!("r_2 sign changes for {:?}", p.args()),
            )?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("derivative relation, hull support and sign counts hold on {count} splines"))
}

fn c9_order() -> Check {
    let start = Instant::now();
    let mut agreed = 0;
    for k in [3, 4] {
        for (x, y) in pte_family(k).map_err(|e| e.to_string())? {
            if x.len() == k {
                for (u, v) in [(&x, &y), (&y, &x)] {
                    let r = smooth1_equivalence(u, v, k).map_err(|e| e.to_string())?;
                    ensure(r.agrees(), || format!("three conditions disagree: {r:?}"))?;
                    agreed += 1;
                }
            } else {
                let r = compare(&x, &y, k).map_err(|e| e.to_string())?;
                ensure(r != Relation::DifferentClass, || "PTE pair not in one class".into())?;
            }
        }
    }
    let rel = compare(
        &Configuration::from_ints(&[7, 3, 2]),
        &Configuration::from_ints(&[6, 5, 1]),
        3,
    )
    .map_err(|e| e.to_string())?;
    ensure(rel == Relation::Dominates, || format!("(7,3,2) vs (6,5,1): {rel:?}"))?;
    let mut r = rng(60_000);
    for i in 0..50 {
        let n = r.random_range(2..=8);
        let low: i64 = r.random_range(-10..=10);
        let high = low + r.random_range(0..=5);
        let mut top = vec![high];
        top.extend(std::iter::repeat_n(low, n - 1));
        let p = extremal_classify(&Configuration::from_ints(&top), 3);
        ensure(p.is_maximal(), || format!("maximal vector {i} {top:?} classified {:?}", p.role))?;
        let mut bottom = vec![high; n - 1];
        bottom.push(low);
        let p = extremal_classify(&Configuration::from_ints(&bottom), 3);
        ensure(p.is_minimal(), || format!("minimal vector {i} {bottom:?} classified {:?}", p.role))?;
        if n >= 3 && high > low {
            let mut mixed = vec![high, high];
            mixed.extend(std::iter::repeat_n(low, n - 2));
            if n >= 4 {
                mixed[n - 1] = low - 1;
                let p = extremal_classify(&Configuration::from_ints(&mixed), 3);
                ensure(!p.is_maximal() && !p.is_minimal(), || {
                    format!("non-extremal vector {mixed:?} classified {:?}", p.role)
                })?;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{agreed} ordered PTE-derived pairs agree three ways; (7,3,2) dominates (6,5,1); 50 + 50 patterns classified"
    ))
}

fn path_ok(p: &PathResult, from: &FloatConfig, to: &FloatConfig) -> std::result::Result<(), String> {
    ensure(p.start().distance(from) <= 1e-9 && p.end().distance(to) <= 1e-9, || {
        format!("endpoints {:?} .. {:?}", p.start(), p.end())
    })?;
    ensure(p.conservation_error <= 1e-8, || format!("drift {}", p.conservation_error))?;
    ensure(p.monotonicity_margin >= -1e-8, || format!("margin {}", p.monotonicity_margin))
}

fn c10_paths() -> Check {
    let start = Instant::now();
    let mut worst_drift: f64 = 0.0;
    let mut worst_margin: f64 = 0.0;
    for i in 0..20u64 {
        let n = 3 + (i % 4) as usize;
        let (a, b) = random_dominant_pair(n, 3, 70_000 + i).map_err(|e| e.to_string())?;
        let p = increasing_path_k3(&a, &b, 32).map_err(|e| format!("k3 pair {i}: {e}"))?;
        path_ok(&p, &b, &a).map_err(|e| format!("k3 pair {i}: {e}"))?;
        worst_drift = worst_drift.max(p.conservation_error);
        worst_margin = worst_margin.min(p.monotonicity_margin);
    }
    for i in 0..20u64 {
        let k = 3 + (i % 2) as usize;
        let (a, b) = random_dominant_pair(k + 1, k, 80_000 + i).map_err(|e| e.to_string())?;
        let p = increasing_path_nk1(&a, &b, k, 32).map_err(|e| format!("n = k + 1 pair {i}: {e}"))?;
        path_ok(&p, &b, &a).map_err(|e| format!("n = k + 1 pair {i}: {e}"))?;
        worst_drift = worst_drift.max(p.conservation_error);
        worst_margin = worst_margin.min(p.monotonicity_margin);
    }
    let x = FloatConfig::new(vec![3.0, 2.0, 1.0]).unwrap();
    let m = find_extremal_numeric(&x, 3, ExtremalRole::Maximal).map_err(|e| e.to_string())?;
    let t = 2.0 - 3f64.sqrt() / 3.0;
    let expect = FloatConfig::new(vec![6.0 - 2.0 * t, t, t]).unwrap();
    ensure(m.distance(&expect) <= 1e-9, || format!("maximal element {m:?}"))?;
    let ode = ode_demo_path([3.0, 2.0, 1.0], 0.1, 256).map_err(|e| e.to_string())?;
    ensure(ode.completed, || "flow stopped early".into())?;
    for (_, c) in &ode.samples {
        let v = c.values();
        let s2: f64 = v[..3].iter().map(|x| x * x).sum();
        let s3: f64 = v[..3].iter().map(|x| x * x * x).sum();
        ensure((s2 - 14.0).abs() <= 1e-8 && (s3 - 36.0).abs() <= 1e-8, || {
            format!("flow drifted to s2 = {s2}, s3 = {s3}")
        })?;
    }
    ensure(ode.monotonicity_margin >= -1e-8, || format!("flow margin {}", ode.monotonicity_margin))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "40 paths (worst drift {worst_drift:.1e}, worst margin {worst_margin:.1e}); maximal element and flow within tolerance"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("six-point counterexample golden test", c1_six_point),
        ("added-term example golden test", c2_example),
        ("oracle equivalence", c3_oracles),
        ("exact criteria agreement", c4_exact_criteria),
        ("sufficiency soundness", c5_soundness),
        ("identity suites", c6_identities),
        ("sign-change lower bound", c7_lower_bound),
        ("structural invariants", c8_structure),
        ("order suite", c9_order),
        ("numeric path suite", c10_paths),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS [{secs:6.2}s] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{secs:6.2}s] {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
