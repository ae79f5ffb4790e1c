//! Subcommand bodies. Each returns the exit code, or an error for bad input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use kconvex::order::{compare, extremal_classify, is_singleton, Relation, Role};
use kconvex::paths::{increasing_path_k3, increasing_path_nk1, FloatConfig, PathResult};
use kconvex::testgen::{sample_problem, InstanceSpec};
use kconvex::to_f64;
use rayon::prelude::*;
use serde_json::json;

use crate::files::{read_configuration, read_problem, ProblemFile};
use crate::report::{check_problem, Code, CriteriaMode, VerdictDocument};

fn problem_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let p = entry?.path();
        if p.is_file() && p.extension().is_some_and(|e| e == "json") {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

fn check_file(path: &Path, mode: CriteriaMode) -> Result<VerdictDocument> {
    let p = read_problem(path)?;
    check_problem(&p, mode).map_err(anyhow::Error::msg)
}

pub fn check(path: &Path, mode: CriteriaMode, json_out: bool) -> Result<Code> {
    if !path.is_dir() {
        let doc = check_file(path, mode)?;
        if json_out {
            println!("{}", serde_json::to_string_pretty(&doc)?);
        } else {
            print!("{}", doc.render());
        }
        return Ok(doc.code());
    }
    let files = problem_files(path)?;
    if files.is_empty() {
        bail!("no .json files in {}", path.display());
    }
    // Files are independent, so they are decided concurrently; output keeps
    // the sorted file order.
    let results: Vec<(PathBuf, Result<VerdictDocument>)> = files
        .into_par_iter()
        .map(|f| {
            let r = check_file(&f, mode).map(|mut d| {
                d.file = Some(f.display().to_string());
                d
            });
            (f, r)
        })
        .collect();
    let mut worst = Code::Holds;
    let mut docs = Vec::new();
    for (f, r) in results {
        match r {
            Ok(doc) => {
                worst = worst.max(doc.code());
                if json_out {
                    docs.push(serde_json::to_value(&doc)?);
                } else {
                    print!("{}", doc.render());
                }
            }
            Err(e) => {
                worst = Code::InputError;
                if json_out {
                    docs.push(json!({ "file": f.display().to_string(), "error": format!("{e:#}") }));
                } else {
                    eprintln!("{}: error: {e:#}", f.display());
                }
            }
        }
    }
    if json_out {
        println!("{}", serde_json::to_string_pretty(&docs)?);
    }
    Ok(worst)
}

pub fn order(x: &Path, y: &Path, k: usize) -> Result<Code> {
    let (cx, cy) = (read_configuration(x)?, read_configuration(y)?);
    let rel = compare(&cx, &cy, k)?;
    println!("{}", rel.label());
    Ok(match rel {
        Relation::Dominates | Relation::Equal => Code::Holds,
        _ => Code::Fails,
    })
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn extremal(path: &Path, k: usize, singleton: bool) -> Result<Code> {
    let c = read_configuration(path)?;
    if k == 0 {
        bail!("k must be at least 1");
    }
    let pattern = extremal_classify(&c, k);
    let role = match pattern.role {
        Role::Maximal => "maximal",
        Role::Minimal => "minimal",
        Role::Both => "maximal and minimal",
        Role::Neither => "neither",
    };
    println!("role: {role}");
    println!("blocks: {}", join(&pattern.block_lengths));
    if let Some(idx) = &pattern.witness_indices {
        println!("indices: {}", join(idx));
    }
    if singleton {
        println!("singleton: {}", is_singleton(&c, k)?);
    }
    Ok(Code::Holds)
}

/// `x` rounded to 12 significant digits, printed without an exponent.
fn sig12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

fn write_csv(result: &PathResult, mut w: impl Write) -> Result<()> {
    let n = result.samples.first().map_or(0, |(_, c)| c.len());
    let header: Vec<String> = std::iter::once("t".to_string())
        .chain((1..=n).map(|i| format!("x{i}")))
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for (t, c) in &result.samples {
        let row: Vec<String> = std::iter::once(*t).chain(c.values().iter().copied()).map(sig12).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn path(a: &Path, b: &Path, k: usize, steps: usize, tol: f64, out: Option<&Path>) -> Result<Code> {
    let (ca, cb) = (read_configuration(a)?, read_configuration(b)?);
    let n = ca.len();
    if n != cb.len() {
        bail!("configurations have {} and {} values", n, cb.len());
    }
    if k != 3 && n != k + 1 {
        bail!("paths are built for k = 3 or for n = k + 1; got k = {k}, n = {n}");
    }
    let rel = compare(&ca, &cb, k)?;
    if !matches!(rel, Relation::Dominates | Relation::Equal) {
        eprintln!("no path: the first configuration is {} at order {k}", rel.label());
        return Ok(Code::Fails);
    }
    let fa = FloatConfig::new(ca.values().iter().map(to_f64).collect())?;
    let fb = FloatConfig::new(cb.values().iter().map(to_f64).collect())?;
    let result = if k == 3 {
        increasing_path_k3(&fa, &fb, steps)
    } else {
        increasing_path_nk1(&fa, &fb, k, steps)
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("path construction failed: {e}");
            return Ok(Code::Inconclusive);
        }
    };
    match out {
        Some(p) => write_csv(&result, fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)?,
        None => write_csv(&result, std::io::stdout().lock())?,
    }
    let summary = format!(
        "samples: {}\nconservation_error: {:e}\nmonotonicity_margin: {:e}\ncompleted: {}",
        result.samples.len(),
        result.conservation_error,
        result.monotonicity_margin,
        result.completed
    );
    // The summary goes to stdout only when the CSV does not.
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    let within = result.conservation_error <= tol && result.monotonicity_margin >= -tol && result.completed;
    if !within {
        eprintln!("path is outside tolerance {tol:e}");
        return Ok(Code::Inconclusive);
    }
    Ok(Code::Holds)
}

pub fn gen(n: usize, k: usize, seed: u64, count: u64, out: &Path) -> Result<Code> {
    if n <= k {
        bail!("need n > k, got n = {n}, k = {k}");
    }
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for s in seed..seed + count {
        let p = sample_problem(&InstanceSpec::new(n, k, -5, 5, s)?)?;
        let file = out.join(format!("problem-n{n}-k{k}-seed{s}.json"));
        let text = serde_json::to_string_pretty(&ProblemFile::from_problem(&p, false))?;
        fs::write(&file, text + "\n").with_context(|| format!("writing {}", file.display()))?;
        println!("{}", file.display());
    }
    Ok(Code::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(7.0), "7");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(-2.0 / 3.0 * 1e3), "-666.666666667");
        assert_eq!(sig12(0.0), "0");
    }
}
