//! Sequence files, run configuration and report emission.
//!
//! Reports are written by hand rather than through serde so that field order
//! is fixed and every real is printed with 17 significant digits
//! (`{:.16e}`), which round-trips `f64` exactly.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{GeoScalar, GeoSequence};
use crate::harness::{default_specs, CheckStatus, SuiteReport, TrialConfig};
use crate::orlicz::OrliczFn;
use crate::stat::{DensityTrace, StatVerdict};
use crate::summability::{
    ClassifyOptions, ExponentProfile, LambdaKind, MembershipReport, Paranorm, SpaceSpec, Transform,
    Variant,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Positive representatives `x_k`.
    Geometric,
    /// Log-views `u_k = ln x_k`.
    Log,
}

/// On-disk sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub domain: Domain,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl SequenceFile {
    pub fn into_sequence(self) -> Result<GeoSequence> {
        match self.domain {
            Domain::Geometric => GeoSequence::from_values(&self.values),
            Domain::Log => GeoSequence::from_log(&self.values),
        }
    }

    /// JSON text with 17-digit numbers.
    pub fn to_json(&self) -> String {
        let mut fields = vec![
            ("domain", Json::Str(domain_name(self.domain).into())),
            (
                "values",
                Json::Arr(self.values.iter().map(|&v| Json::Num(v)).collect()),
            ),
        ];
        if let Some(n) = &self.name {
            fields.push(("name", Json::Str(n.clone())));
        }
        if let Some(d) = &self.description {
            fields.push(("description", Json::Str(d.clone())));
        }
        Json::obj(fields).render()
    }
}

fn domain_name(d: Domain) -> &'static str {
    match d {
        Domain::Geometric => "geometric",
        Domain::Log => "log",
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    }
}

/// Parses JSON (`{"domain": …, "values": […]}`) or single-column CSV with a
/// `value` / `log_value` header; the format is sniffed from the first
/// non-blank character.
pub fn parse_sequence_str(text: &str) -> Result<SequenceFile> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(json_error)
    } else {
        parse_sequence_csv(text)
    }
}

fn parse_sequence_csv(text: &str) -> Result<SequenceFile> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line() as usize);
        Error::Parse {
            line,
            column: 1,
            msg: e.to_string(),
        }
    };
    let header = rdr.headers().map_err(csv_err)?.clone();
    let domain = match header.iter().collect::<Vec<_>>().as_slice() {
        ["value"] => Domain::Geometric,
        ["log_value"] => Domain::Log,
        other => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                msg: format!("expected header \"value\" or \"log_value\", found {other:?}"),
            })
        }
    };
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 1 {
            return Err(Error::Parse {
                line,
                column: 1,
                msg: format!("expected one field, found {}", rec.len()),
            });
        }
        let v = f64::from_str(&rec[0]).map_err(|e| Error::Parse {
            line,
            column: 1,
            msg: format!("{:?}: {e}", &rec[0]),
        })?;
        values.push(v);
    }
    Ok(SequenceFile {
        domain,
        values,
        name: None,
        description: None,
    })
}

pub fn read_sequence_file(path: &Path) -> Result<SequenceFile> {
    parse_sequence_str(&std::fs::read_to_string(path)?)
}

pub fn parse_sequence_file(path: &Path) -> Result<GeoSequence> {
    read_sequence_file(path)?.into_sequence()
}

/// Everything a CLI run can be configured with; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub lambda: LambdaKind,
    pub orlicz: OrliczFn,
    pub exponent: ExponentProfile,
    pub variant: Variant,
    pub transform: Transform,
    pub rho: f64,
    pub tol: f64,
    pub windows: usize,
    pub bound_cap: f64,
    pub seed: u64,
    pub trials: usize,
    pub truncation: usize,
    pub slack: f64,
    pub paranorm_slack: f64,
    /// Spaces exercised by `verify`; the built-in list when absent.
    pub suite_specs: Option<Vec<SpaceSpec>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let space = SpaceSpec::default();
        let opts = ClassifyOptions::default();
        let trial = TrialConfig::default();
        Self {
            lambda: space.lambda,
            orlicz: space.orlicz,
            exponent: space.exponent,
            variant: space.variant,
            transform: space.transform,
            rho: space.rho,
            tol: opts.tol,
            windows: opts.windows,
            bound_cap: opts.bound_cap,
            seed: trial.seed,
            trials: trial.trials,
            truncation: trial.truncation,
            slack: trial.slack,
            paranorm_slack: trial.paranorm_slack,
            suite_specs: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(json_error)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.space().validate()?;
        if !(self.tol >= 0.0) || self.windows == 0 || !(self.bound_cap > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "tolerances: tol = {}, windows = {}, bound_cap = {}",
                self.tol, self.windows, self.bound_cap
            )));
        }
        self.trial_config().validate()
    }

    pub fn space(&self) -> SpaceSpec {
        SpaceSpec {
            lambda: self.lambda.clone(),
            orlicz: self.orlicz.clone(),
            exponent: self.exponent.clone(),
            variant: self.variant,
            transform: self.transform,
            rho: self.rho,
        }
    }

    pub fn classify_options(&self) -> ClassifyOptions {
        ClassifyOptions {
            tol: self.tol,
            windows: self.windows,
            bound_cap: self.bound_cap,
        }
    }

    pub fn trial_config(&self) -> TrialConfig {
        TrialConfig {
            seed: self.seed,
            trials: self.trials,
            truncation: self.truncation,
            specs: self.suite_specs.clone().unwrap_or_else(default_specs),
            slack: self.slack,
            paranorm_slack: self.paranorm_slack,
            classify: self.classify_options(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "text" => Ok(Self::Text),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Fibonacci listing with identity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct FibReport {
    pub values: Vec<BigUint>,
    /// `(n, cassini holds, sum identity holds)` when requested.
    pub identities: Option<Vec<(usize, bool, bool)>>,
}

impl FibReport {
    pub fn identities_hold(&self) -> bool {
        self.identities
            .as_ref()
            .is_none_or(|ids| ids.iter().all(|&(_, c, s)| c && s))
    }
}

/// Anything the CLI can print.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Membership(&'a MembershipReport),
    Paranorm(&'a Paranorm),
    Density(&'a DensityTrace, StatVerdict),
    Suite(&'a SuiteReport),
    Fib(&'a FibReport),
}

/// Renders `report`; the format name must be `json`, `csv` or `text`.
pub fn emit_report(report: &Report, format: &str) -> Result<Vec<u8>> {
    let format: Format = format.parse()?;
    emit(report, format)
}

pub fn emit(report: &Report, format: Format) -> Result<Vec<u8>> {
    Ok(match format {
        Format::Json => {
            let mut s = to_json(report).render();
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => to_csv(report)?,
        Format::Text => to_text(report).into_bytes(),
    })
}

/// 17 significant digits; non-finite values spelled out.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// Minimal JSON tree with ordered objects.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i128),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj(fields: Vec<(&str, Json)>) -> Self {
        Self::Obj(
            fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    fn from_value(v: &serde_json::Value) -> Self {
        use serde_json::Value;
        match v {
            Value::Null => Self::Null,
            Value::Bool(b) => Self::Bool(*b),
            Value::Number(n) => match (n.as_i64(), n.as_u64()) {
                (Some(i), _) => Self::Int(i as i128),
                (_, Some(u)) => Self::Int(u as i128),
                _ => Self::Num(n.as_f64().unwrap_or(f64::NAN)),
            },
            Value::String(s) => Self::Str(s.clone()),
            Value::Array(a) => Self::Arr(a.iter().map(Self::from_value).collect()),
            Value::Object(o) => Self::Obj(
                o.iter()
                    .map(|(k, v)| (k.clone(), Self::from_value(v)))
                    .collect(),
            ),
        }
    }

    fn serialized<T: Serialize>(t: &T) -> Self {
        serde_json::to_value(t).map_or(Self::Null, |v| Self::from_value(&v))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out
    }

    fn scalar(&self) -> bool {
        !matches!(self, Self::Arr(_) | Self::Obj(_))
    }

    fn write(&self, out: &mut String, depth: usize) {
        let pad = |out: &mut String, d: usize| out.push_str(&"  ".repeat(d));
        match self {
            Self::Null => out.push_str("null"),
            Self::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Self::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Self::Num(x) if x.is_finite() => out.push_str(&fmt_num(*x)),
            Self::Num(x) => out.push_str(&quote(&fmt_num(*x))),
            Self::Str(s) => out.push_str(&quote(s)),
            Self::Arr(items) if items.is_empty() => out.push_str("[]"),
            Self::Arr(items) if items.iter().all(Self::scalar) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, depth);
                }
                out.push(']');
            }
            Self::Arr(items) => {
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    pad(out, depth + 1);
                    item.write(out, depth + 1);
                    out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
                }
                pad(out, depth);
                out.push(']');
            }
            Self::Obj(fields) if fields.is_empty() => out.push_str("{}"),
            Self::Obj(fields) => {
                out.push_str("{\n");
                for (i, (k, v)) in fields.iter().enumerate() {
                    pad(out, depth + 1);
                    out.push_str(&quote(k));
                    out.push_str(": ");
                    v.write(out, depth + 1);
                    out.push_str(if i + 1 < fields.len() { ",\n" } else { "\n" });
                }
                pad(out, depth);
                out.push('}');
            }
        }
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).unwrap_or_else(|_| "\"\"".into())
}

fn opt_str(s: &Option<String>) -> Json {
    s.as_ref().map_or(Json::Null, |s| Json::Str(s.clone()))
}

fn geo_json(g: Option<GeoScalar>) -> Json {
    match g {
        None => Json::Null,
        Some(g) => Json::obj(vec![
            ("log", Json::Num(g.ln())),
            ("value", Json::Num(g.raw_value())),
        ]),
    }
}

fn to_json(report: &Report) -> Json {
    match report {
        Report::Membership(m) => Json::obj(vec![
            ("report", Json::Str("membership".into())),
            ("verdict", Json::Str(m.verdict.as_str().into())),
            ("reason", opt_str(&m.reason)),
            ("limit_estimate", geo_json(m.limit_estimate)),
            ("tail_slope", Json::Num(m.tail_slope)),
            ("spec", Json::serialized(&m.spec)),
            ("options", Json::serialized(&m.options)),
            (
                "windows",
                Json::Arr(
                    m.window_values
                        .iter()
                        .zip(&m.lambda_values)
                        .enumerate()
                        .map(|(i, (&s, &l))| {
                            Json::obj(vec![
                                ("n", Json::Int(i as i128 + 1)),
                                ("lambda", Json::Num(l)),
                                ("s", Json::Num(s)),
                            ])
                        })
                        .collect(),
                ),
            ),
        ]),
        Report::Paranorm(p) => Json::obj(vec![
            ("report", Json::Str("paranorm".into())),
            ("rho_star", Json::Num(p.rho_star)),
            ("g", Json::Num(p.g)),
            ("g_geo", geo_json(p.g_geo)),
            ("h", Json::Num(p.h)),
            ("p_bar", Json::Num(p.p_bar)),
            ("monotone", Json::Bool(p.monotone)),
            ("probes", Json::Int(p.probes as i128)),
        ]),
        Report::Density(t, v) => Json::obj(vec![
            ("report", Json::Str("density".into())),
            ("verdict", Json::Str(v.as_str().into())),
            ("epsilon", geo_json(Some(t.epsilon))),
            ("ell", geo_json(Some(t.ell))),
            (
                "windows",
                Json::Arr(
                    t.windows
                        .iter()
                        .map(|w| {
                            Json::obj(vec![
                                ("n", Json::Int(w.n as i128)),
                                ("lambda", Json::Num(w.lambda)),
                                ("count", Json::Int(w.count as i128)),
                                ("d", Json::Num(w.density)),
                            ])
                        })
                        .collect(),
                ),
            ),
        ]),
        Report::Suite(s) => Json::obj(vec![
            ("report", Json::Str("suite".into())),
            ("seed", Json::Int(s.config.seed as i128)),
            ("trials", Json::Int(s.config.trials as i128)),
            ("truncation", Json::Int(s.config.truncation as i128)),
            ("passed", Json::Bool(s.passed())),
            (
                "summary",
                Json::Arr(
                    s.summary()
                        .iter()
                        .map(|c| {
                            Json::obj(vec![
                                ("check", Json::Str(c.check.into())),
                                ("passed", Json::Int(c.passed as i128)),
                                ("failed", Json::Int(c.failed as i128)),
                                ("skipped", Json::Int(c.skipped as i128)),
                                ("max_excess", Json::Num(c.max_excess)),
                            ])
                        })
                        .collect(),
                ),
            ),
            (
                "records",
                Json::Arr(
                    s.records
                        .iter()
                        .map(|r| {
                            let rep = r.report.as_ref();
                            Json::obj(vec![
                                ("spec", Json::Int(r.spec as i128)),
                                ("trial", Json::Int(r.trial as i128)),
                                ("check", Json::Str(r.check.into())),
                                ("status", Json::Str(r.status.as_str().into())),
                                (
                                    "windows",
                                    rep.map_or(Json::Null, |x| Json::Int(x.windows as i128)),
                                ),
                                (
                                    "violations",
                                    rep.map_or(Json::Null, |x| Json::Int(x.violations as i128)),
                                ),
                                (
                                    "max_excess",
                                    rep.map_or(Json::Null, |x| Json::Num(x.max_excess)),
                                ),
                                (
                                    "end_to_end",
                                    rep.and_then(|x| x.end_to_end)
                                        .map_or(Json::Null, Json::Bool),
                                ),
                                ("detail", opt_str(&r.detail)),
                            ])
                        })
                        .collect(),
                ),
            ),
        ]),
        Report::Fib(f) => {
            let mut fields = vec![
                ("report", Json::Str("fibonacci".into())),
                (
                    "values",
                    Json::Arr(f.values.iter().map(|v| Json::Str(v.to_string())).collect()),
                ),
            ];
            if let Some(ids) = &f.identities {
                fields.push(("identities_hold", Json::Bool(f.identities_hold())));
                fields.push((
                    "identities",
                    Json::Arr(
                        ids.iter()
                            .map(|&(n, c, s)| {
                                Json::obj(vec![
                                    ("n", Json::Int(n as i128)),
                                    ("cassini", Json::Bool(c)),
                                    ("sum", Json::Bool(s)),
                                ])
                            })
                            .collect(),
                    ),
                ));
            }
            Json::obj(fields)
        }
    }
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    w.into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

fn to_csv(report: &Report) -> Result<Vec<u8>> {
    match report {
        Report::Membership(m) => csv_bytes(
            &["n", "lambda", "s_n"],
            m.window_values
                .iter()
                .zip(&m.lambda_values)
                .enumerate()
                .map(|(i, (&s, &l))| vec![(i + 1).to_string(), fmt_num(l), fmt_num(s)])
                .collect(),
        ),
        Report::Paranorm(p) => csv_bytes(
            &["rho_star", "g", "g_geo_log", "h", "p_bar", "monotone"],
            vec![vec![
                fmt_num(p.rho_star),
                fmt_num(p.g),
                p.g_geo.map_or("inf".into(), |g| fmt_num(g.ln())),
                fmt_num(p.h),
                fmt_num(p.p_bar),
                p.monotone.to_string(),
            ]],
        ),
        Report::Density(t, _) => csv_bytes(
            &["n", "lambda", "count", "d_n"],
            t.windows
                .iter()
                .map(|w| {
                    vec![
                        w.n.to_string(),
                        fmt_num(w.lambda),
                        w.count.to_string(),
                        fmt_num(w.density),
                    ]
                })
                .collect(),
        ),
        Report::Suite(s) => csv_bytes(
            &[
                "spec",
                "trial",
                "check",
                "status",
                "windows",
                "violations",
                "max_excess",
                "end_to_end",
                "detail",
            ],
            s.records
                .iter()
                .map(|r| {
                    let rep = r.report.as_ref();
                    vec![
                        r.spec.to_string(),
                        r.trial.to_string(),
                        r.check.to_string(),
                        r.status.as_str().to_string(),
                        rep.map_or(String::new(), |x| x.windows.to_string()),
                        rep.map_or(String::new(), |x| x.violations.to_string()),
                        rep.map_or(String::new(), |x| fmt_num(x.max_excess)),
                        rep.and_then(|x| x.end_to_end)
                            .map_or(String::new(), |b| b.to_string()),
                        r.detail.clone().unwrap_or_default(),
                    ]
                })
                .collect(),
        ),
        Report::Fib(f) => csv_bytes(
            &["n", "f_n"],
            f.values
                .iter()
                .enumerate()
                .map(|(n, v)| vec![n.to_string(), v.to_string()])
                .collect(),
        ),
    }
}

fn to_text(report: &Report) -> String {
    let mut s = String::new();
    match report {
        Report::Membership(m) => {
            let _ = writeln!(s, "verdict: {}", m.verdict.as_str());
            if let Some(r) = &m.reason {
                let _ = writeln!(s, "reason: {r}");
            }
            if let Some(l) = m.limit_estimate {
                let _ = writeln!(
                    s,
                    "limit estimate: {} (log {})",
                    fmt_num(l.raw_value()),
                    fmt_num(l.ln())
                );
            }
            let _ = writeln!(s, "tail slope: {}", fmt_num(m.tail_slope));
            let _ = writeln!(s, "{:>6}  {:>23}  {:>23}", "n", "lambda", "S_n");
            for (i, (&v, &l)) in m.window_values.iter().zip(&m.lambda_values).enumerate() {
                let _ = writeln!(s, "{:>6}  {:>23}  {:>23}", i + 1, fmt_num(l), fmt_num(v));
            }
        }
        Report::Paranorm(p) => {
            let _ = writeln!(s, "rho_star: {}", fmt_num(p.rho_star));
            let _ = writeln!(s, "g: {}", fmt_num(p.g));
            match p.g_geo {
                Some(g) => {
                    let _ = writeln!(s, "g_geo: {}", fmt_num(g.raw_value()));
                }
                None => s.push_str("g_geo: inf\n"),
            }
            let _ = writeln!(s, "H: {}", fmt_num(p.h));
            let _ = writeln!(s, "p_bar: {}", fmt_num(p.p_bar));
            let _ = writeln!(s, "monotone: {}", p.monotone);
        }
        Report::Density(t, v) => {
            let _ = writeln!(s, "verdict: {}", v.as_str());
            let _ = writeln!(
                s,
                "{:>6}  {:>23}  {:>6}  {:>23}",
                "n", "lambda", "count", "d_n"
            );
            for w in &t.windows {
                let _ = writeln!(
                    s,
                    "{:>6}  {:>23}  {:>6}  {:>23}",
                    w.n,
                    fmt_num(w.lambda),
                    w.count,
                    fmt_num(w.density)
                );
            }
        }
        Report::Suite(r) => {
            let _ = writeln!(
                s,
                "suite: {} (seed {}, {} trials, N = {})",
                if r.passed() { "PASS" } else { "FAIL" },
                r.config.seed,
                r.config.trials,
                r.config.truncation
            );
            let _ = writeln!(
                s,
                "{:<20}  {:>6}  {:>6}  {:>7}  {:>23}",
                "check", "pass", "fail", "skipped", "max excess"
            );
            for c in r.summary() {
                let _ = writeln!(
                    s,
                    "{:<20}  {:>6}  {:>6}  {:>7}  {:>23}",
                    c.check,
                    c.passed,
                    c.failed,
                    c.skipped,
                    fmt_num(c.max_excess)
                );
            }
            for rec in r.records.iter().filter(|x| x.status == CheckStatus::Fail) {
                let _ = writeln!(
                    s,
                    "FAIL spec {} trial {} {}: {}",
                    rec.spec,
                    rec.trial,
                    rec.check,
                    rec.detail.as_deref().unwrap_or("inequality violated")
                );
            }
        }
        Report::Fib(f) => {
            for (n, v) in f.values.iter().enumerate() {
                let _ = writeln!(s, "f_{n} = {v}");
            }
            if f.identities.is_some() {
                let _ = writeln!(
                    s,
                    "identities (Cassini, sum): {}",
                    if f.identities_hold() { "hold" } else { "FAIL" }
                );
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_log_json() {
        let x = parse_sequence_str(r#"{"domain":"log","values":[0,0,0]}"#)
            .unwrap()
            .into_sequence()
            .unwrap();
        assert_eq!(x.raw_values(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn parses_geometric_json() {
        let x = parse_sequence_str(r#"{"domain":"geometric","values":[1,2.718281828,7.389056]}"#)
            .unwrap()
            .into_sequence()
            .unwrap();
        let u = x.to_log();
        assert_eq!(u[0], 0.0);
        assert!((u[1] - 1.0).abs() < 1e-9);
        assert!((u[2] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn zero_geometric_value_names_index() {
        let err = parse_sequence_str(r#"{"domain":"geometric","values":[0.0, 1.0]}"#)
            .unwrap()
            .into_sequence()
            .unwrap_err();
        assert!(matches!(err, Error::NonPositive { index: 0, .. }));
    }

    #[test]
    fn malformed_json_has_position() {
        let err = parse_sequence_str("{\"domain\":\"log\",\n\"values\":[1,,2]}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_input() {
        let f = parse_sequence_str("log_value\n0\n1.5\n-2\n").unwrap();
        assert_eq!(f.domain, Domain::Log);
        assert_eq!(f.values, vec![0.0, 1.5, -2.0]);
        let f = parse_sequence_str("value\n1\n2\n").unwrap();
        assert_eq!(f.domain, Domain::Geometric);
        match parse_sequence_str("value\n1\nabc\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_sequence_str("x\n1\n").is_err());
    }

    #[test]
    fn sequence_round_trip_is_exact() {
        let values = vec![0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, std::f64::consts::PI];
        let f = SequenceFile {
            domain: Domain::Log,
            values: values.clone(),
            name: Some("t".into()),
            description: None,
        };
        let back = parse_sequence_str(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn unknown_format() {
        let p = Paranorm {
            rho_star: 1.0,
            g: 1.0,
            g_geo: None,
            h: 1.0,
            p_bar: 1.0,
            monotone: true,
            probes: 3,
        };
        assert!(matches!(
            emit_report(&Report::Paranorm(&p), "xml"),
            Err(Error::UnknownFormat(_))
        ));
        let text = String::from_utf8(emit_report(&Report::Paranorm(&p), "json").unwrap()).unwrap();
        assert!(text.contains("\"g_geo\": null"));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["rho_star"], 1.0);
    }

    #[test]
    fn empty_suite_csv_is_header_only() {
        let cfg = TrialConfig {
            trials: 0,
            ..TrialConfig::default()
        };
        let rep = crate::harness::run_suite(&cfg).unwrap();
        let csv = String::from_utf8(emit(&Report::Suite(&rep), Format::Csv).unwrap()).unwrap();
        assert_eq!(csv.lines().count(), 1);
        assert!(csv.starts_with("spec,trial,check,status"));
    }

    #[test]
    fn config_defaults_and_rejects_unknown() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let cfg = RunConfig::from_json(
            r#"{"lambda":{"kind":"half"},"orlicz":{"kind":"power","p":2},
                "exponent":{"kind":"formula","c":1,"d":0.5},"variant":"limit","rho":3}"#,
        )
        .unwrap();
        assert_eq!(cfg.space().lambda, LambdaKind::Half);
        assert_eq!(cfg.space().orlicz, OrliczFn::Power { p: 2.0 });
        assert!(RunConfig::from_json(r#"{"rhoo":3}"#).is_err());
        assert!(RunConfig::from_json(r#"{"rho":0.5}"#).is_err());
    }

    #[test]
    fn numbers_have_17_digits() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(Json::Num(f64::NAN).render(), "\"nan\"");
    }
}
