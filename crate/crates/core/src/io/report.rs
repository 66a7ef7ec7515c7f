//! Report records: one JSON object per line, a human summary, or CSV.
//!
//! Records hold no timings, so identical inputs give identical bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::geometry::ConeGen;
use crate::num::{format_rational, Rational, Vector};
use crate::optimality::{Certificate, Improvement, LevelResidual, OptimalityVerdict, QcVerdict, SipVerdict};
use crate::verify::{VerificationReport, Verdict};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Human,
    Machine,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "human" => Ok(Format::Human),
            "machine" => Ok(Format::Machine),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Input(format!("unknown format {s:?} (human|machine|csv)"))),
        }
    }
}

/// Outcome class driving the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }
}

fn q(x: &Rational) -> String {
    format_rational(x)
}

fn vecq(v: &Vector) -> Vec<String> {
    v.coords().iter().map(q).collect()
}

/// Canonical primitive-integer rays.
pub fn cone_rays(c: &ConeGen) -> Vec<Vec<String>> {
    c.rays()
        .iter()
        .map(|r| r.primitive_ints().iter().map(|i| i.to_string()).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeRecord {
    pub instance: String,
    pub check: String,
    pub eps: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    pub exactness: String,
    pub contributions: usize,
    pub formula_cone: Vec<Vec<String>>,
    pub oracle_cone: Vec<Vec<String>>,
    /// Curated cases must reach equality, not just containment.
    pub require_equal: bool,
}

impl ConeRecord {
    pub fn new(r: &VerificationReport, require_equal: bool) -> Self {
        ConeRecord {
            instance: r.instance.clone(),
            check: r.check.to_string(),
            eps: q(&r.eps),
            grid: r.grid.as_ref().map(|g| g.to_string()),
            verdict: r.verdict.label().to_string(),
            witness: r.verdict.witness().map(vecq),
            exactness: r.exactness().to_string(),
            contributions: r.formula.contributions.len(),
            formula_cone: cone_rays(&r.formula.cone),
            oracle_cone: cone_rays(&r.oracle),
            require_equal,
        }
    }

    fn status(&self) -> Status {
        let equal = self.verdict == Verdict::Equal.label();
        if self.verdict == "VIOLATION" || (self.require_equal && !equal) {
            Status::Fail
        } else {
            Status::Pass
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateRecord {
    pub g0: Vec<String>,
    pub q: Vec<String>,
    pub subgradient_terms: Vec<(String, Vec<String>)>,
    pub cone_terms: Vec<(String, Vec<String>)>,
    pub reverified: bool,
}

impl CertificateRecord {
    pub fn new(c: &Certificate, reverified: bool) -> Self {
        let terms = |ts: &[(Rational, Vector)]| ts.iter().map(|(w, v)| (q(w), vecq(v))).collect();
        CertificateRecord {
            g0: vecq(&c.g0),
            q: vecq(&c.q),
            subgradient_terms: terms(&c.subgradient_terms),
            cone_terms: terms(&c.cone_terms),
            reverified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ImprovementRecord {
    Point { point: Vec<String>, value: String },
    Ray { point: Vec<String>, direction: Vec<String> },
    ConditionOnly,
}

impl From<&Improvement> for ImprovementRecord {
    fn from(i: &Improvement) -> Self {
        match i {
            Improvement::Point { point, value } => ImprovementRecord::Point {
                point: vecq(point),
                value: q(value),
            },
            Improvement::Ray { point, direction } => ImprovementRecord::Ray {
                point: vecq(point),
                direction: vecq(direction),
            },
            Improvement::ConditionOnly => ImprovementRecord::ConditionOnly,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalityRecord {
    pub instance: String,
    pub check: String,
    pub eps: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_certificate: Option<CertificateRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub improvement: Option<ImprovementRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Verdict required by a curated case, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

impl OptimalityRecord {
    fn base(instance: &str, check: &str, eps: &Rational, verdict: &str) -> Self {
        OptimalityRecord {
            instance: instance.into(),
            check: check.into(),
            eps: q(eps),
            verdict: verdict.into(),
            certificate: None,
            outer_certificate: None,
            improvement: None,
            reason: None,
            expected: None,
        }
    }

    /// `reverified` is the independent re-check of an emitted certificate.
    pub fn convex(instance: &str, eps: &Rational, v: &OptimalityVerdict, reverified: Option<bool>) -> Self {
        let mut r = Self::base(instance, "check-optimal", eps, v.label());
        match v {
            OptimalityVerdict::Optimal(c) => r.certificate = Some(CertificateRecord::new(c, reverified.unwrap_or(false))),
            OptimalityVerdict::NotOptimal(i) => r.improvement = Some(i.into()),
            OptimalityVerdict::Inconclusive { reason } => r.reason = Some(reason.clone()),
        }
        r
    }

    pub fn qc(instance: &str, eps: &Rational, v: &QcVerdict, reverified: Option<bool>) -> Self {
        let mut r = Self::base(instance, "qc-necessary", eps, v.label());
        match v {
            QcVerdict::ConditionHolds { exact, outer } => {
                let ok = reverified.unwrap_or(false);
                r.certificate = Some(CertificateRecord::new(exact, ok));
                r.outer_certificate = Some(CertificateRecord::new(outer, ok));
            }
            QcVerdict::NotOptimal(i) => r.improvement = Some(i.into()),
            QcVerdict::Inconclusive { reason } => r.reason = Some(reason.clone()),
        }
        r
    }

    fn status(&self) -> Status {
        let certs_ok = [&self.certificate, &self.outer_certificate]
            .iter()
            .all(|c| c.as_ref().is_none_or(|c| c.reverified));
        if !certs_ok || self.expected.as_ref().is_some_and(|e| *e != self.verdict) {
            Status::Fail
        } else if self.verdict == "inconclusive" {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelRecord {
    pub level: u32,
    pub samples: usize,
    pub active: usize,
    pub residual: String,
    /// Decimal echo of `residual`; not authoritative.
    pub residual_f64_nonauthoritative: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reach: Option<String>,
}

impl From<&LevelResidual> for LevelRecord {
    fn from(l: &LevelResidual) -> Self {
        LevelRecord {
            level: l.level,
            samples: l.samples,
            active: l.active,
            residual: q(&l.residual),
            residual_f64_nonauthoritative: l.residual_f64(),
            reach: l.reach.as_ref().map(q),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SipRecord {
    pub instance: String,
    pub check: String,
    pub eps: String,
    pub verdict: String,
    pub non_increasing: bool,
    pub levels: Vec<LevelRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub multipliers: Vec<(String, Vec<String>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub improvement: Option<ImprovementRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

impl SipRecord {
    pub fn new(instance: &str, eps: &Rational, v: &SipVerdict) -> Self {
        let levels = v.levels();
        let non_increasing = levels.windows(2).all(|w| w[1].residual <= w[0].residual);
        let (multipliers, improvement) = match v {
            SipVerdict::Optimal { multipliers, .. } => (multipliers.iter().map(|(w, r)| (q(w), vecq(r))).collect(), None),
            SipVerdict::NotOptimal { improvement, .. } => (vec![], Some(improvement.into())),
            SipVerdict::Inconclusive { .. } => (vec![], None),
        };
        SipRecord {
            instance: instance.into(),
            check: "check-sip".into(),
            eps: q(eps),
            verdict: v.label().into(),
            non_increasing,
            levels: levels.iter().map(LevelRecord::from).collect(),
            multipliers,
            improvement,
            expected: None,
        }
    }

    fn status(&self) -> Status {
        if !self.non_increasing || self.expected.as_ref().is_some_and(|e| *e != self.verdict) {
            Status::Fail
        } else if self.verdict == "inconclusive" {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }
}

/// A yes/no property check with a short explanation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub instance: String,
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    pub holds: bool,
    pub detail: String,
}

impl CheckRecord {
    pub fn new(instance: &str, check: &str, eps: Option<&Rational>, holds: bool, detail: impl Into<String>) -> Self {
        CheckRecord {
            instance: instance.into(),
            check: check.into(),
            eps: eps.map(q),
            holds,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
pub enum Record {
    Cone(ConeRecord),
    Optimality(OptimalityRecord),
    Sip(SipRecord),
    Check(CheckRecord),
}

impl Record {
    pub fn status(&self) -> Status {
        match self {
            Record::Cone(r) => r.status(),
            Record::Optimality(r) => r.status(),
            Record::Sip(r) => r.status(),
            Record::Check(r) => {
                if r.holds {
                    Status::Pass
                } else {
                    Status::Fail
                }
            }
        }
    }

    pub fn instance(&self) -> &str {
        match self {
            Record::Cone(r) => &r.instance,
            Record::Optimality(r) => &r.instance,
            Record::Sip(r) => &r.instance,
            Record::Check(r) => &r.instance,
        }
    }

    pub fn check(&self) -> &str {
        match self {
            Record::Cone(r) => &r.check,
            Record::Optimality(r) => &r.check,
            Record::Sip(r) => &r.check,
            Record::Check(r) => &r.check,
        }
    }

    pub fn human(&self) -> String {
        let tag = match self.status() {
            Status::Pass => "ok  ",
            Status::Inconclusive => "??  ",
            Status::Fail => "FAIL",
        };
        let body = match self {
            Record::Cone(r) => {
                let mut s = format!(
                    "eps={} {} [{}] formula={}",
                    r.eps,
                    r.verdict,
                    r.exactness,
                    cone_text_from(&r.formula_cone)
                );
                if r.verdict != "equal" {
                    let _ = write!(s, " oracle={}", cone_text_from(&r.oracle_cone));
                }
                if let Some(w) = &r.witness {
                    let _ = write!(s, " witness=({})", w.join(","));
                }
                s
            }
            Record::Optimality(r) => {
                let mut s = format!("eps={} {}", r.eps, r.verdict);
                if let Some(c) = &r.certificate {
                    let _ = write!(
                        s,
                        " g0=({}) q=({}) reverified={}",
                        c.g0.join(","),
                        c.q.join(","),
                        c.reverified
                    );
                }
                match &r.improvement {
                    Some(ImprovementRecord::Point { point, value }) => {
                        let _ = write!(s, " better point ({}) value {value}", point.join(","));
                    }
                    Some(ImprovementRecord::Ray { point, direction }) => {
                        let _ = write!(s, " unbounded from ({}) along ({})", point.join(","), direction.join(","));
                    }
                    Some(ImprovementRecord::ConditionOnly) => s.push_str(" (condition fails)"),
                    None => {}
                }
                if let Some(reason) = &r.reason {
                    let _ = write!(s, " ({reason})");
                }
                s
            }
            Record::Sip(r) => {
                let mut s = format!("eps={} {}", r.eps, r.verdict);
                for l in &r.levels {
                    let _ = write!(
                        s,
                        "\n      level {:>2}: {:>5} samples, {} active, residual {} (~{:e})",
                        l.level, l.samples, l.active, l.residual, l.residual_f64_nonauthoritative
                    );
                }
                s
            }
            Record::Check(r) => match &r.eps {
                Some(e) => format!("eps={e} {}", r.detail),
                None => r.detail.clone(),
            },
        };
        format!("{tag} {:<28} {:<22} {body}", self.instance(), self.check())
    }
}

fn cone_text_from(rays: &[Vec<String>]) -> String {
    if rays.is_empty() {
        return "{0}".into();
    }
    let parts: Vec<String> = rays.iter().map(|r| format!("({})", r.join(","))).collect();
    format!("cone{{{}}}", parts.join(","))
}

/// Aggregate counts over a record list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub records: usize,
    pub pass: usize,
    pub inconclusive: usize,
    pub fail: usize,
    pub violations: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let mut s = Summary {
            records: records.len(),
            ..Summary::default()
        };
        for r in records {
            match r.status() {
                Status::Pass => s.pass += 1,
                Status::Inconclusive => s.inconclusive += 1,
                Status::Fail => s.fail += 1,
            }
            if let Record::Cone(c) = r {
                if c.verdict == "VIOLATION" {
                    s.violations += 1;
                }
            }
        }
        s
    }

    pub fn status(&self) -> Status {
        if self.fail > 0 {
            Status::Fail
        } else if self.inconclusive > 0 {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders records. Human and machine output end in a summary; CSV is a bare table.
pub fn render(records: &[Record], format: Format) -> String {
    let summary = Summary::of(records);
    let mut out = String::new();
    match format {
        Format::Machine => {
            for r in records {
                out.push_str(&serde_json::to_string(r).expect("records serialize"));
                out.push('\n');
            }
            let mut v = serde_json::to_value(&summary).expect("summary serializes");
            v.as_object_mut()
                .expect("object")
                .insert("record".into(), serde_json::Value::String("summary".into()));
            out.push_str(&v.to_string());
            out.push('\n');
        }
        Format::Human => {
            for r in records {
                out.push_str(&r.human());
                out.push('\n');
            }
            let _ = writeln!(
                out,
                "summary: {} records, {} pass, {} inconclusive, {} fail ({} violations)",
                summary.records, summary.pass, summary.inconclusive, summary.fail, summary.violations
            );
        }
        Format::Csv => {
            out.push_str("instance,check,eps,level,samples,active,verdict,residual,residual_f64_nonauthoritative,reach\n");
            for r in records {
                let row = |eps: &str, level: &str, samples: &str, active: &str, verdict: &str, res: &str, f: &str, reach: &str| {
                    [r.instance(), r.check(), eps, level, samples, active, verdict, res, f, reach]
                        .iter()
                        .map(|s| csv_field(s))
                        .collect::<Vec<_>>()
                        .join(",")
                };
                match r {
                    Record::Sip(s) => {
                        for l in &s.levels {
                            out.push_str(&row(
                                &s.eps,
                                &l.level.to_string(),
                                &l.samples.to_string(),
                                &l.active.to_string(),
                                &s.verdict,
                                &l.residual,
                                &format!("{:e}", l.residual_f64_nonauthoritative),
                                l.reach.as_deref().unwrap_or(""),
                            ));
                            out.push('\n');
                        }
                    }
                    Record::Cone(c) => {
                        out.push_str(&row(&c.eps, "", "", "", &c.verdict, "", "", ""));
                        out.push('\n');
                    }
                    Record::Optimality(o) => {
                        out.push_str(&row(&o.eps, "", "", "", &o.verdict, "", "", ""));
                        out.push('\n');
                    }
                    Record::Check(c) => {
                        let v = if c.holds { "holds" } else { "fails" };
                        out.push_str(&row(c.eps.as_deref().unwrap_or(""), "", "", "", v, "", "", ""));
                        out.push('\n');
                    }
                }
            }
        }
    }
    out
}
