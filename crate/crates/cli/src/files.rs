//! On-disk formats. Every rational travels as a string.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use kconvex::order::Configuration;
use kconvex::{format_rational, parse_rational, InequalityProblem, Interval, Rational};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub a: String,
    pub w: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub k: usize,
    pub nodes: Vec<NodeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[String; 2]>,
}

impl ProblemFile {
    pub fn from_problem(p: &InequalityProblem, with_domain: bool) -> Self {
        ProblemFile {
            k: p.k(),
            nodes: p
                .nodes()
                .iter()
                .map(|n| NodeEntry {
                    a: format_rational(&n.arg),
                    w: format_rational(&n.weight),
                })
                .collect(),
            domain: with_domain.then(|| {
                let d = p.domain();
                [format_rational(&d.lo), format_rational(&d.hi)]
            }),
        }
    }

    pub fn to_problem(&self) -> Result<InequalityProblem> {
        let mut pairs = Vec::with_capacity(self.nodes.len());
        for (i, n) in self.nodes.iter().enumerate() {
            let a = parse_rational(&n.a).with_context(|| format!("node {i}: argument"))?;
            let w = parse_rational(&n.w).with_context(|| format!("node {i}: weight"))?;
            pairs.push((a, w));
        }
        let problem = match &self.domain {
            None => InequalityProblem::new(pairs, self.k)?,
            Some([lo, hi]) => {
                let iv = Interval::new(parse_rational(lo)?, parse_rational(hi)?)?;
                InequalityProblem::with_domain(pairs, self.k, iv)?
            }
        };
        Ok(problem)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub values: Vec<String>,
}

impl ConfigFile {
    pub fn rationals(&self) -> Result<Vec<Rational>> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| parse_rational(v).with_context(|| format!("value {i}")))
            .collect()
    }

    pub fn configuration(&self) -> Result<Configuration> {
        Ok(Configuration::new(self.rationals()?))
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_problem(path: &Path) -> Result<InequalityProblem> {
    read_json::<ProblemFile>(path)?
        .to_problem()
        .with_context(|| format!("invalid problem in {}", path.display()))
}

pub fn read_configuration(path: &Path) -> Result<Configuration> {
    read_json::<ConfigFile>(path)?
        .configuration()
        .with_context(|| format!("invalid configuration in {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_round_trip() {
        let text = r#"{"k":3,"nodes":[{"a":"6","w":"1"},{"a":"5","w":"-3"},{"a":"9/2","w":"2"}]}"#;
        let f: ProblemFile = serde_json::from_str(text).unwrap();
        let p = f.to_problem().unwrap();
        assert_eq!(p.len(), 3);
        // Canonical order is descending, so re-serializing sorts the nodes.
        let again = ProblemFile::from_problem(&p, false);
        assert_eq!(again.nodes[2].a, "9/2");
        assert_eq!(again.to_problem().unwrap(), p);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = r#"{"k":3,"nodes":[{"a":"1.5x","w":"1"}]}"#;
        let f: ProblemFile = serde_json::from_str(bad).unwrap();
        assert!(f.to_problem().is_err());
        assert!(serde_json::from_str::<ProblemFile>(r#"{"k":3,"nodes":[],"extra":1}"#).is_err());
        let f: ProblemFile = serde_json::from_str(r#"{"k":0,"nodes":[]}"#).unwrap();
        assert!(f.to_problem().is_err());
    }

    #[test]
    fn domain_is_kept() {
        let text = r#"{"k":1,"nodes":[{"a":"1","w":"1"},{"a":"0","w":"-1"}],"domain":["-2","3"]}"#;
        let p = serde_json::from_str::<ProblemFile>(text).unwrap().to_problem().unwrap();
        assert_eq!(p.domain().lo, kconvex::int(-2));
        assert_eq!(ProblemFile::from_problem(&p, true).domain, Some(["-2".into(), "3".into()]));
    }
}
