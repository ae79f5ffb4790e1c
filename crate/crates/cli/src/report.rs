//! Verdict documents and exit codes.

use std::fmt;

use kconvex::criteria::{
    check_moments, counting_criterion, decide_exact, endpoint_criterion, hammer_criterion,
    k3_criterion, Outcome, Status,
};
use kconvex::{format_rational, InequalityProblem};
use serde::{Deserialize, Serialize};

/// Process exit codes, ordered so that a batch reports the worst one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Code {
    Holds = 0,
    Fails = 1,
    Inconclusive = 2,
    InputError = 3,
}

impl Code {
    pub fn as_i32(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CriteriaMode {
    All,
    Exact,
    Counting,
    Popoviciu,
    K3,
    Endpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictLabel {
    Holds,
    Fails,
    MomentViolation,
    /// Only sufficient criteria ran and none fired.
    Inconclusive,
}

impl fmt::Display for VerdictLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictLabel::Holds => "holds",
            VerdictLabel::Fails => "fails",
            VerdictLabel::MomentViolation => "moment_violation",
            VerdictLabel::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionEntry {
    pub name: String,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CriterionEntry {
    fn new(name: &str, o: &Outcome) -> Self {
        let mut e = CriterionEntry {
            name: name.to_string(),
            outcome: o.label().to_string(),
            index: None,
            value: None,
            detail: None,
        };
        match o {
            Outcome::Fail { index, value } => {
                e.index = *index;
                e.value = value.as_ref().map(format_rational);
            }
            Outcome::NotApplicable(why) => e.detail = Some(why.clone()),
            Outcome::MomentViolation(m) => {
                e.index = Some(m.index);
                e.value = Some(format_rational(&m.value));
            }
            Outcome::Pass | Outcome::Inconclusive => {}
        }
        e
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    pub verdict: VerdictLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment_value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    pub criteria: Vec<CriterionEntry>,
    pub timing_ms: f64,
}

impl VerdictDocument {
    pub fn code(&self) -> Code {
        match self.verdict {
            VerdictLabel::Holds => Code::Holds,
            VerdictLabel::Fails => Code::Fails,
            VerdictLabel::Inconclusive => Code::Inconclusive,
            VerdictLabel::MomentViolation => Code::InputError,
        }
    }

    /// Plain-text rendering, one fact per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(f) = &self.file {
            out.push_str(&format!("{f}: "));
        }
        out.push_str(&format!("verdict: {}", self.verdict));
        if let Some(w) = &self.witness {
            out.push_str(&format!(" (r_k < 0 at {w})"));
        }
        if let (Some(i), Some(v)) = (self.moment_index, &self.moment_value) {
            out.push_str(&format!(" (moment {i} = {v})"));
        }
        out.push('\n');
        for c in &self.criteria {
            out.push_str(&format!("  {}: {}", c.name, c.outcome));
            if let Some(i) = c.index {
                out.push_str(&format!(" at {i}"));
            }
            if let Some(v) = &c.value {
                out.push_str(&format!(" value {v}"));
            }
            if let Some(d) = &c.detail {
                out.push_str(&format!(" ({d})"));
            }
            out.push('\n');
        }
        out
    }
}

fn blank(verdict: VerdictLabel) -> VerdictDocument {
    VerdictDocument {
        file: None,
        verdict,
        witness: None,
        moment_index: None,
        moment_value: None,
        certificate: None,
        criteria: Vec::new(),
        timing_ms: 0.0,
    }
}

fn moment_document(p: &InequalityProblem) -> Option<VerdictDocument> {
    let m = check_moments(p).err()?;
    let mut doc = blank(VerdictLabel::MomentViolation);
    doc.moment_index = Some(m.index);
    doc.moment_value = Some(format_rational(&m.value));
    doc.certificate = Some("moments".into());
    Some(doc)
}

fn exact_document(p: &InequalityProblem) -> VerdictDocument {
    let v = decide_exact(p);
    let mut doc = blank(match v.status {
        Status::Holds => VerdictLabel::Holds,
        Status::Fails => VerdictLabel::Fails,
        Status::MomentViolation => VerdictLabel::MomentViolation,
    });
    doc.witness = v.witness.as_ref().map(format_rational);
    if let Some(m) = &v.moment {
        doc.moment_index = Some(m.index);
        doc.moment_value = Some(format_rational(&m.value));
    }
    doc.certificate = Some(v.certificate.to_string());
    doc
}

/// Verdict from a single sufficient criterion: a pass settles it, anything
/// else leaves the question open.
fn sufficient_document(name: &str, o: Outcome) -> VerdictDocument {
    let mut doc = blank(if o.is_pass() {
        VerdictLabel::Holds
    } else {
        VerdictLabel::Inconclusive
    });
    if o.is_pass() {
        doc.certificate = Some(name.to_string());
    }
    doc.criteria.push(CriterionEntry::new(name, &o));
    doc
}

/// Verdict from an exact criterion. `Err` when its hypotheses are not met.
fn exact_criterion_document(name: &str, o: Outcome) -> Result<VerdictDocument, String> {
    let verdict = match &o {
        Outcome::Pass => VerdictLabel::Holds,
        Outcome::Fail { .. } => VerdictLabel::Fails,
        Outcome::NotApplicable(why) => return Err(format!("{name} criterion does not apply: {why}")),
        Outcome::Inconclusive | Outcome::MomentViolation(_) => {
            return Err(format!("{name} criterion gave {}", o.label()))
        }
    };
    let mut doc = blank(verdict);
    doc.certificate = Some(name.to_string());
    doc.criteria.push(CriterionEntry::new(name, &o));
    Ok(doc)
}

/// Runs the requested checks. `Err` is an input-level problem (exit 3).
pub fn check_problem(p: &InequalityProblem, mode: CriteriaMode) -> Result<VerdictDocument, String> {
    let start = std::time::Instant::now();
    let mut doc = match moment_document(p) {
        Some(doc) => doc,
        None => match mode {
            CriteriaMode::Exact => exact_document(p),
            CriteriaMode::All => {
                let mut doc = exact_document(p);
                doc.criteria.push(CriterionEntry::new("counting", &counting_criterion(p).outcome));
                doc.criteria.push(CriterionEntry::new("popoviciu", &hammer_criterion(p)));
                if p.k() == 3 {
                    let o = k3_criterion(p).map_err(|e| e.to_string())?;
                    doc.criteria.push(CriterionEntry::new("k3", &o));
                }
                doc.criteria.push(CriterionEntry::new("endpoint", &endpoint_criterion(p)));
                doc
            }
            CriteriaMode::Counting => sufficient_document("counting", counting_criterion(p).outcome),
            CriteriaMode::Popoviciu => sufficient_document("popoviciu", hammer_criterion(p)),
            CriteriaMode::K3 => {
                exact_criterion_document("k3", k3_criterion(p).map_err(|e| e.to_string())?)?
            }
            CriteriaMode::Endpoint => exact_criterion_document("endpoint", endpoint_criterion(p))?,
        },
    };
    doc.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six_point() -> InequalityProblem {
        InequalityProblem::from_ints(&[6, 5, 4, 2, 1, 0], &[1, -3, 3, -3, 3, -1], 3).unwrap()
    }

    #[test]
    fn modes_on_the_six_point_problem() {
        let p = six_point();
        let doc = check_problem(&p, CriteriaMode::Exact).unwrap();
        assert_eq!((doc.verdict, doc.code()), (VerdictLabel::Holds, Code::Holds));
        let doc = check_problem(&p, CriteriaMode::Popoviciu).unwrap();
        assert_eq!(doc.code(), Code::Inconclusive);
        let c = &doc.criteria[0];
        assert_eq!((c.outcome.as_str(), c.index, c.value.as_deref()), ("fail", Some(2), Some("-1")));
        let doc = check_problem(&p.negated(), CriteriaMode::All).unwrap();
        assert_eq!(doc.code(), Code::Fails);
        assert!(doc.witness.is_some());
        assert_eq!(doc.criteria.len(), 4);
    }

    #[test]
    fn moment_violation_and_inapplicable() {
        let p = six_point().with_order(4).unwrap();
        let doc = check_problem(&p, CriteriaMode::All).unwrap();
        assert_eq!((doc.moment_index, doc.moment_value.as_deref()), (Some(3), Some("12")));
        assert_eq!(doc.code(), Code::InputError);
        let p = InequalityProblem::from_ints(&[3, 2, 1], &[1, -2, 1], 2).unwrap();
        assert!(check_problem(&p, CriteriaMode::K3).is_err());
        assert_eq!(check_problem(&p, CriteriaMode::Endpoint).unwrap().code(), Code::Holds);
    }

    #[test]
    fn document_round_trips() {
        let mut doc = check_problem(&six_point().negated(), CriteriaMode::All).unwrap();
        doc.file = Some("x.json".into());
        let text = serde_json::to_string(&doc).unwrap();
        let back: VerdictDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
