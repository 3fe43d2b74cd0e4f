//! JSON documents in, JSON reports out.
//!
//! Integers are carried as strings so that no JSON tool truncates them;
//! exponents may also be plain numbers.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::counter::{
    count_affine_detailed, count_positive_detailed, count_torus_detailed, CountOptions, CountResult, Detailed,
    PolySystem,
};
use crate::error::{Error, Result};
use crate::gale::Support;
use crate::linalg::IntMatrix;
use crate::logsign::{verify_sign_pattern, Endpoint};
use crate::unipoly::{isolate_real_roots, refine, IntPoly};

fn de_int<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Lit {
        Str(String),
        I(i64),
        U(u64),
    }
    match Lit::deserialize(d)? {
        Lit::Str(s) => s.trim().parse().map_err(|_| serde::de::Error::custom(format!("not an integer: {s:?}"))),
        Lit::I(v) => Ok(v.into()),
        Lit::U(v) => Ok(v.into()),
    }
}

/// Exponent entry; serialized as a JSON number when it fits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exponent(pub BigInt);

/// Coefficient entry; always serialized as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficient(pub BigInt);

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        de_int(d).map(Exponent)
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        de_int(d).map(Coefficient)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// A system as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDocument {
    pub n: usize,
    pub exponents: Vec<Vec<Exponent>>,
    pub coefficients: Vec<Vec<Coefficient>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl InputDocument {
    pub fn from_system(f: &PolySystem, label: Option<String>) -> Self {
        let c = f.coeffs();
        Self {
            n: f.dim(),
            exponents: f.support().points().iter().map(|p| p.iter().cloned().map(Exponent).collect()).collect(),
            coefficients: (0..c.rows()).map(|i| c.row(i).iter().cloned().map(Coefficient).collect()).collect(),
            label,
        }
    }

    pub fn to_system(&self) -> Result<PolySystem> {
        let t = self.exponents.len();
        let points: Vec<Vec<BigInt>> = self.exponents.iter().map(|p| p.iter().map(|e| e.0.clone()).collect()).collect();
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != self.n) {
            return Err(Error::Validation(format!("exponents[{i}] has {} entries, expected n = {}", p.len(), self.n)));
        }
        if self.coefficients.len() != self.n {
            return Err(Error::Validation(format!(
                "{} coefficient rows, expected n = {}",
                self.coefficients.len(),
                self.n
            )));
        }
        if let Some((i, r)) = self.coefficients.iter().enumerate().find(|(_, r)| r.len() != t) {
            return Err(Error::Validation(format!(
                "coefficients[{i}] has {} entries, expected one per exponent vector ({t})",
                r.len()
            )));
        }
        let rows = self.coefficients.iter().map(|r| r.iter().map(|c| c.0.clone()).collect()).collect();
        let coeffs = IntMatrix::from_big_rows(rows, t)?;
        PolySystem::new(Support::new(self.n, points)?, coeffs).map_err(|e| match e {
            Error::Shape(s) => Error::Validation(s),
            other => other,
        })
    }
}

/// Parses and validates one JSON document.
pub fn parse(text: &str) -> Result<InputDocument> {
    let doc: InputDocument = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    doc.to_system()?;
    Ok(doc)
}

/// Single-line JSON.
pub fn serialize(doc: &InputDocument) -> String {
    serde_json::to_string(doc).expect("documents always serialize")
}

/// Which counts to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Targets {
    pub positive: bool,
    pub torus: bool,
    pub affine: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunFlags {
    pub verify: bool,
    pub explain: bool,
    pub options: CountOptions,
    /// Sample points per interval for `verify`.
    pub samples: usize,
}

/// Process exit code for a finished batch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitCode {
    Counted = 0,
    Infinite = 3,
    Genericity = 2,
    Internal = 4,
}

impl ExitCode {
    fn severity(self) -> u8 {
        match self {
            ExitCode::Counted => 0,
            ExitCode::Infinite => 1,
            ExitCode::Genericity => 2,
            ExitCode::Internal => 3,
        }
    }

    pub fn worst(self, other: ExitCode) -> ExitCode {
        if other.severity() > self.severity() {
            other
        } else {
            self
        }
    }

    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Outcome of one target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Count(CountResult),
    Failed(String),
}

impl Outcome {
    fn exit_code(&self) -> ExitCode {
        match self {
            Outcome::Count(CountResult::Finite(_)) | Outcome::Count(CountResult::UnverifiedGenericity { .. }) => {
                ExitCode::Counted
            }
            Outcome::Count(CountResult::Infinite) => ExitCode::Infinite,
            Outcome::Count(CountResult::GenericityFailure(_)) => ExitCode::Genericity,
            Outcome::Failed(_) => ExitCode::Internal,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Outcome::Count(CountResult::Finite(k)) => json!({"kind": "finite", "count": k}),
            Outcome::Count(CountResult::Infinite) => json!({"kind": "infinite"}),
            Outcome::Count(CountResult::GenericityFailure(d)) => json!({"kind": "genericity_failure", "detail": d}),
            Outcome::Count(CountResult::UnverifiedGenericity { count, caveat }) => {
                json!({"kind": "unverified_genericity", "count": count, "caveat": caveat})
            }
            Outcome::Failed(e) => json!({"kind": "error", "error": e}),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Count(c) => write!(f, "{c}"),
            Outcome::Failed(e) => write!(f, "error: {e}"),
        }
    }
}

/// Everything produced for one document.
#[derive(Clone, Debug)]
pub struct Report {
    pub label: Option<String>,
    pub positive: Option<Outcome>,
    pub torus: Option<Outcome>,
    pub affine: Option<Outcome>,
    /// Input-level failure (parse or validation).
    pub input_error: Option<String>,
    pub elapsed_ms: u128,
    pub diagnostics: Vec<(String, Value)>,
    pub verification: Vec<String>,
    pub verification_failed: bool,
}

impl Report {
    pub fn input_failure(label: Option<String>, err: &Error) -> Self {
        Self {
            label,
            positive: None,
            torus: None,
            affine: None,
            input_error: Some(err.to_string()),
            elapsed_ms: 0,
            diagnostics: Vec::new(),
            verification: Vec::new(),
            verification_failed: false,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        if self.input_error.is_some() || self.verification_failed {
            return ExitCode::Internal;
        }
        [&self.positive, &self.torus, &self.affine]
            .into_iter()
            .flatten()
            .fold(ExitCode::Counted, |acc, o| acc.worst(o.exit_code()))
    }

    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        if let Some(l) = &self.label {
            m.insert("label".into(), json!(l));
        }
        if let Some(e) = &self.input_error {
            m.insert("error".into(), json!(e));
        }
        for (name, o) in [("positive", &self.positive), ("torus", &self.torus), ("affine", &self.affine)] {
            if let Some(o) = o {
                m.insert(name.into(), o.to_json());
            }
        }
        m.insert("exit_code".into(), json!(self.exit_code().code()));
        m.insert("elapsed_ms".into(), json!(self.elapsed_ms as u64));
        if !self.diagnostics.is_empty() {
            m.insert("diagnostics".into(), Value::Object(self.diagnostics.iter().cloned().collect()));
        }
        if !self.verification.is_empty() {
            m.insert("verification".into(), json!(self.verification));
        }
        Value::Object(m)
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let name = self.label.clone().unwrap_or_else(|| "system".into());
        if let Some(e) = &self.input_error {
            return format!("{name}: invalid input: {e}");
        }
        let mut parts = Vec::new();
        for (k, o) in [("positive", &self.positive), ("torus", &self.torus), ("affine", &self.affine)] {
            if let Some(o) = o {
                parts.push(format!("{k} {o}"));
            }
        }
        if self.verification_failed {
            parts.push("VERIFICATION FAILED".into());
        }
        format!("{name}: {} ({} ms)", parts.join(", "), self.elapsed_ms)
    }
}

fn q(x: &BigRational) -> String {
    x.to_string()
}

fn endpoint(e: &Endpoint) -> String {
    e.to_string()
}

fn explain(d: &Detailed) -> Value {
    let g = &d.diagnostics;
    let mut m = serde_json::Map::new();
    if let Some(gs) = &g.gale {
        m.insert(
            "gale".into(),
            json!({
                "order": gs.reindexing.order.iter().map(|j| j + 1).collect::<Vec<_>>(),
                "m": gs.m,
                "relation": gs.relation.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "gammas": gs.gammas.iter().map(|(a, b)| [q(a), q(b)]).collect::<Vec<_>>(),
            }),
        );
    }
    if let Some(p) = &g.critical_poly {
        m.insert(
            "critical_poly".into(),
            json!({
                "coefficients": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "text": p.to_string(),
            }),
        );
    }
    if !g.cells.is_empty() {
        let cells: Vec<Value> = g
            .cells
            .iter()
            .map(|c| {
                let mut v = json!({"lo": endpoint(&c.lo), "hi": endpoint(&c.hi), "eligible": c.eligible});
                if let Some(t) = &c.count {
                    v["signs"] = json!(t.signs);
                    v["sign_changes"] = json!(t.sign_changes);
                    v["degenerate"] = json!(t.degenerate);
                    v["critical_points"] =
                        json!(t.critical_points.iter().map(|j| [q(&j.lo), q(&j.hi)]).collect::<Vec<_>>());
                }
                v
            })
            .collect();
        m.insert("cells".into(), json!(cells));
    }
    if !g.notes.is_empty() {
        m.insert("notes".into(), json!(g.notes));
    }
    Value::Object(m)
}

/// Positive, torus and affine counts of a one-variable system, from
/// isolating the real roots of the polynomial itself.
pub fn direct_univariate_counts(f: &PolySystem) -> Result<(u64, u64, u64)> {
    if f.dim() != 1 {
        return Err(Error::Domain("direct counts need n = 1".into()));
    }
    // zero coefficients drop out, so the shift uses the live monomials only
    let terms: Vec<(BigInt, &BigInt)> = f
        .support()
        .points()
        .iter()
        .enumerate()
        .map(|(j, p)| (p[0].clone(), &f.coeffs()[(0, j)]))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let low = terms.iter().map(|(e, _)| e.clone()).min().expect("nonzero equation");
    let deg = terms.iter().map(|(e, _)| (e - &low).to_usize().unwrap()).max().unwrap();
    let mut c = vec![BigInt::zero(); deg + 1];
    for (e, coef) in &terms {
        c[(e - &low).to_usize().unwrap()] += *coef;
    }
    let poly = IntPoly::new(c);
    let roots = isolate_real_roots(&poly)?;
    let zero = BigRational::zero();
    let mut positive = 0;
    for j in &roots {
        let mut j = j.clone();
        while j.lo < zero && j.hi > zero {
            let w = j.width() / BigRational::from_integer(2.into());
            j = refine(&poly, &j, &w)?;
        }
        if j.lo >= zero {
            positive += 1;
        }
    }
    let torus = roots.len() as u64;
    // x = 0 is a root exactly when every exponent is positive
    let affine = if low.is_positive() { torus + 1 } else { torus };
    Ok((positive, torus, affine))
}

fn run_target(
    which: &str,
    f: &PolySystem,
    flags: &RunFlags,
    report: &mut Report,
    count: fn(&PolySystem, &CountOptions) -> Result<Detailed>,
) -> Option<Outcome> {
    match count(f, &flags.options) {
        Ok(d) => {
            if flags.explain {
                report.diagnostics.push((which.into(), explain(&d)));
            }
            if flags.verify {
                verify_detail(which, &d, flags.samples, report);
            }
            Some(Outcome::Count(d.result))
        }
        Err(e) => Some(Outcome::Failed(e.to_string())),
    }
}

fn verify_detail(which: &str, d: &Detailed, samples: usize, report: &mut Report) {
    let Some(gs) = &d.diagnostics.gale else { return };
    let Ok(form) = gs.log_form() else { return };
    for c in &d.diagnostics.cells {
        let Some(t) = &c.count else { continue };
        match verify_sign_pattern(&form, t, &c.lo, &c.hi, samples) {
            Ok(n) => report
                .verification
                .push(format!("{which}: sign pattern on ({}, {}) consistent at {n} samples", c.lo, c.hi)),
            Err(msg) => {
                report.verification_failed = true;
                report.verification.push(format!("{which}: MISMATCH on ({}, {}): {msg}", c.lo, c.hi));
            }
        }
    }
}

/// Runs the requested counts on one document.
pub fn run(doc: &InputDocument, targets: Targets, flags: &RunFlags) -> Report {
    let start = Instant::now();
    let mut report = Report::input_failure(doc.label.clone(), &Error::Internal(String::new()));
    report.input_error = None;
    let f = match doc.to_system() {
        Ok(f) => f,
        Err(e) => return Report::input_failure(doc.label.clone(), &e),
    };
    if targets.positive {
        report.positive = run_target("positive", &f, flags, &mut report, count_positive_detailed);
    }
    if targets.torus {
        report.torus = run_target("torus", &f, flags, &mut report, count_torus_detailed);
    }
    if targets.affine {
        report.affine = run_target("affine", &f, flags, &mut report, count_affine_detailed);
    }
    if flags.verify && f.dim() == 1 {
        verify_univariate(&f, &mut report);
    }
    report.elapsed_ms = start.elapsed().as_millis();
    report
}

fn verify_univariate(f: &PolySystem, report: &mut Report) {
    let (pos, tor, aff) = match direct_univariate_counts(f) {
        Ok(x) => x,
        Err(e) => {
            report.verification_failed = true;
            report.verification.push(format!("direct isolation failed: {e}"));
            return;
        }
    };
    let checks = [
        ("positive", &report.positive, Some(pos)),
        ("torus", &report.torus, Some(tor)),
        ("affine", &report.affine, Some(aff)),
    ];
    let mut lines = Vec::new();
    let mut failed = false;
    for (name, got, want) in checks {
        let (Some(Outcome::Count(CountResult::Finite(k))), Some(w)) = (got, want) else { continue };
        if *k == w {
            lines.push(format!("{name}: direct isolation agrees ({w})"));
        } else {
            failed = true;
            lines.push(format!("{name}: MISMATCH, direct isolation gives {w}, pipeline gave {k}"));
        }
    }
    report.verification.extend(lines);
    report.verification_failed |= failed;
}
