//! λ-windows, de la Vallée-Poussin means, the windowed Orlicz modular behind
//! the strongly summable spaces, membership classification on truncations and
//! the paranorm.
//!
//! Sequences are indexed from 0. Window `n` (for `1 ≤ n ≤ N`) is
//! `I_n = {k ≥ 0 : n − λ_n + 1 ≤ k ≤ n}`; since `λ_n ≤ n` the first term
//! (`k = 0`) is never inside a window.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::bisect::{golden_min, infimum, InfimumSearch};
use crate::error::{Error, Result};
use crate::fibonacci::fhat_transform_log;
use crate::geo::{GeoScalar, GeoSequence};
use crate::orlicz::OrliczFn;

/// How `λ_n` is generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaKind {
    /// `λ_n = n` (Cesàro windows).
    #[default]
    Identity,
    /// `λ_n = ⌈n/2⌉`.
    Half,
    /// `λ_n = ⌈√n⌉`.
    Sqrt,
    /// Explicit `λ_1, λ_2, …`.
    Custom { values: Vec<f64> },
}

/// A validated truncation `λ_1..λ_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSeq {
    kind: LambdaKind,
    values: Vec<f64>,
}

fn ceil_sqrt(n: usize) -> usize {
    let mut s = (n as f64).sqrt() as usize;
    while s * s > n {
        s -= 1;
    }
    while s * s < n {
        s += 1;
    }
    s
}

impl LambdaSeq {
    /// Materialises `λ_1..λ_{n_max}` and checks the window axioms.
    pub fn new(kind: &LambdaKind, n_max: usize) -> Result<Self> {
        let values: Vec<f64> = match kind {
            LambdaKind::Identity => (1..=n_max).map(|n| n as f64).collect(),
            LambdaKind::Half => (1..=n_max).map(|n| n.div_ceil(2) as f64).collect(),
            LambdaKind::Sqrt => (1..=n_max).map(|n| ceil_sqrt(n) as f64).collect(),
            LambdaKind::Custom { values } => {
                if values.len() < n_max {
                    return Err(Error::InvalidLambda(format!(
                        "{} values given, {} windows needed",
                        values.len(),
                        n_max
                    )));
                }
                values[..n_max].to_vec()
            }
        };
        let seq = Self {
            kind: kind.clone(),
            values,
        };
        seq.check()?;
        Ok(seq)
    }

    fn check(&self) -> Result<()> {
        let v = &self.values;
        for (i, &l) in v.iter().enumerate() {
            if !l.is_finite() || l <= 0.0 {
                return Err(Error::InvalidLambda(format!("λ_{} = {l}", i + 1)));
            }
            if l > (i + 1) as f64 {
                return Err(Error::InvalidLambda(format!("λ_{} = {l} exceeds n", i + 1)));
            }
        }
        if let Some(&first) = v.first() {
            if first != 1.0 {
                return Err(Error::InvalidLambda(format!("λ_1 = {first}, expected 1")));
            }
        }
        for (i, w) in v.windows(2).enumerate() {
            if w[1] < w[0] {
                return Err(Error::InvalidLambda(format!("decreases at n = {}", i + 2)));
            }
            if w[1] > w[0] + 1.0 {
                return Err(Error::InvalidLambda(format!(
                    "step above 1 at n = {}",
                    i + 2
                )));
            }
        }
        // Divergence can only be probed on the truncation; very short ones are
        // exempt since e.g. ⌈√n⌉ is flat on 2..=4.
        let n = v.len();
        if n >= 8 && v[n - 1] < v[n / 2 - 1] + 1.0 {
            return Err(Error::InvalidLambda(format!(
                "no growth on the truncation: λ_{n} = {} < λ_{} + 1",
                v[n - 1],
                n / 2
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> &LambdaKind {
        &self.kind
    }

    /// Number of windows `N`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `λ_n` for `1 ≤ n ≤ N`.
    pub fn get(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.values.len() {
            return Err(Error::WindowOutOfRange {
                n,
                max: self.values.len(),
            });
        }
        Ok(self.values[n - 1])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    // Unchecked: 1 ≤ n ≤ N.
    fn bounds(&self, n: usize) -> (usize, usize) {
        let lo = (n as f64 - self.values[n - 1] + 1.0).ceil().max(0.0) as usize;
        (lo, n)
    }

    /// `I_n` as an inclusive index range.
    pub fn window(&self, n: usize) -> Result<std::ops::RangeInclusive<usize>> {
        self.get(n)?;
        let (lo, hi) = self.bounds(n);
        Ok(lo..=hi)
    }
}

/// `I_n` for a materialised `λ`.
pub fn window(n: usize, lambda: &LambdaSeq) -> Result<std::ops::RangeInclusive<usize>> {
    lambda.window(n)
}

/// `t_n(x) = (1/λ_n) Σ_{k∈I_n} x_k`.
pub fn vp_mean(x: &[f64], n: usize, lambda: &LambdaSeq) -> Result<f64> {
    let w = lambda.window(n)?;
    if *w.end() >= x.len() {
        return Err(Error::WindowOutOfRange {
            n,
            max: x.len().saturating_sub(1),
        });
    }
    let sum: f64 = x[w].iter().sum();
    Ok(sum / lambda.get(n)?)
}

/// Exponent profile `p_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExponentProfile {
    Constant {
        value: f64,
    },
    /// `p_k = values[k]`; must cover the truncation.
    List {
        values: Vec<f64>,
    },
    /// `p_k = c + d / max(k, 1)`.
    Formula {
        c: f64,
        d: f64,
    },
}

impl Default for ExponentProfile {
    fn default() -> Self {
        Self::Constant { value: 1.0 }
    }
}

impl ExponentProfile {
    pub fn materialize(&self, len: usize) -> Result<ExponentSeq> {
        let values = match self {
            Self::Constant { value } => vec![*value; len],
            Self::List { values } => {
                if values.len() < len {
                    return Err(Error::InvalidExponent(format!(
                        "{} values given, {} needed",
                        values.len(),
                        len
                    )));
                }
                values[..len].to_vec()
            }
            Self::Formula { c, d } => (0..len).map(|k| c + d / k.max(1) as f64).collect(),
        };
        ExponentSeq::new(values)
    }
}

/// A materialised exponent sequence with its derived constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSeq {
    values: Vec<f64>,
    sup: f64,
    inf: f64,
}

impl ExponentSeq {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (k, &p) in values.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::InvalidExponent(format!("p_{k} = {p}")));
            }
        }
        let sup = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let inf = values.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self { values, sup, inf })
    }

    pub fn constant(p: f64, len: usize) -> Result<Self> {
        Self::new(vec![p; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup(&self) -> f64 {
        self.sup
    }

    pub fn inf(&self) -> f64 {
        self.inf
    }

    /// `H = max(1, sup p_k)`.
    pub fn h(&self) -> f64 {
        self.sup.max(1.0)
    }

    /// `B = max(1, 2^{H−1})`.
    pub fn b(&self) -> f64 {
        2f64.powf(self.h() - 1.0).max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Residuals tend to zero.
    #[default]
    Zero,
    /// Residuals tend to some limit ℓ.
    Limit,
    /// Window modulars stay bounded.
    Bounded,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::Limit => "limit",
            Self::Bounded => "bounded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Identity,
    #[default]
    Fhat,
}

impl Transform {
    /// Log-view of `x` after the transform.
    pub fn apply(self, x: &GeoSequence) -> Vec<f64> {
        self.apply_log(&x.to_log())
    }

    /// Transform of a log-view.
    pub fn apply_log(self, u: &[f64]) -> Vec<f64> {
        match self {
            Self::Identity => u.to_vec(),
            Self::Fhat => fhat_transform_log(u),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Fhat => "fhat",
        }
    }
}

fn default_rho() -> f64 {
    E
}

/// A sequence space: windows, Orlicz function, exponents, variant, transform
/// and the geometric scale `ρ > 1` (classical `r = ln ρ`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    #[serde(default)]
    pub lambda: LambdaKind,
    #[serde(default = "default_orlicz")]
    pub orlicz: OrliczFn,
    #[serde(default)]
    pub exponent: ExponentProfile,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default)]
    pub transform: Transform,
    #[serde(default = "default_rho")]
    pub rho: f64,
}

fn default_orlicz() -> OrliczFn {
    OrliczFn::Power { p: 1.0 }
}

impl Default for SpaceSpec {
    fn default() -> Self {
        Self {
            lambda: LambdaKind::default(),
            orlicz: default_orlicz(),
            exponent: ExponentProfile::default(),
            variant: Variant::default(),
            transform: Transform::default(),
            rho: default_rho(),
        }
    }
}

impl SpaceSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.rho.is_finite() || self.rho <= 1.0 {
            return Err(Error::InvalidSpec(format!(
                "rho = {} (geometric scale must exceed 1)",
                self.rho
            )));
        }
        self.orlicz.check()?;
        Ok(())
    }

    /// Classical scale `r = ln ρ`.
    pub fn r(&self) -> f64 {
        self.rho.ln()
    }
}

/// Windowed modular evaluator for a fixed truncation length.
#[derive(Debug, Clone)]
pub struct Evaluator {
    lambda: LambdaSeq,
    p: ExponentSeq,
    m: OrliczFn,
}

impl Evaluator {
    /// Evaluator for sequences of `len` terms (windows `1..=len−1`).
    pub fn new(spec: &SpaceSpec, len: usize) -> Result<Self> {
        spec.validate()?;
        if len < 2 {
            return Err(Error::Precondition(format!(
                "need at least 2 terms for a window, got {len}"
            )));
        }
        Ok(Self {
            lambda: LambdaSeq::new(&spec.lambda, len - 1)?,
            p: spec.exponent.materialize(len)?,
            m: spec.orlicz.clone(),
        })
    }

    pub fn with_exponents(mut self, p: ExponentSeq) -> Result<Self> {
        if p.len() < self.lambda.len() + 1 {
            return Err(Error::InvalidExponent(format!(
                "{} exponents for {} terms",
                p.len(),
                self.lambda.len() + 1
            )));
        }
        self.p = p;
        Ok(self)
    }

    pub fn with_orlicz(mut self, m: OrliczFn) -> Result<Self> {
        m.check()?;
        self.m = m;
        Ok(self)
    }

    pub fn lambda(&self) -> &LambdaSeq {
        &self.lambda
    }

    pub fn exponents(&self) -> &ExponentSeq {
        &self.p
    }

    pub fn orlicz(&self) -> &OrliczFn {
        &self.m
    }

    /// Number of windows.
    pub fn n_max(&self) -> usize {
        self.lambda.len()
    }

    fn term(&self, yk: f64, pk: f64, ell: f64, r: f64) -> f64 {
        let t = (yk - ell).abs();
        if t == 0.0 {
            return 0.0;
        }
        let m = self.m.eval_unchecked(t / r);
        if pk == 1.0 {
            m
        } else {
            m.powf(pk)
        }
    }

    /// Per-term values `[M(|y_k − L| / r)]^{p_k}`.
    pub fn terms(&self, y: &[f64], ell: f64, r: f64) -> Vec<f64> {
        y.iter()
            .zip(self.p.values())
            .map(|(&yk, &pk)| self.term(yk, pk, ell, r))
            .collect()
    }

    /// `(1/λ_n) Σ_{k∈I_n} terms_k` for every window, each summed in increasing `k`.
    pub fn window_means(&self, terms: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_max());
        let mut cache: Option<(usize, usize, f64)> = None;
        for n in 1..=self.n_max() {
            let (lo, hi) = self.lambda.bounds(n);
            // Extending the previous window by one term continues the same
            // left-to-right fold, so the result is bit-identical.
            let sum = match cache {
                Some((clo, chi, s)) if clo == lo && chi + 1 == hi => s + terms[hi],
                _ => terms[lo..=hi].iter().sum(),
            };
            cache = Some((lo, hi, sum));
            out.push(sum / self.lambda.values[n - 1]);
        }
        out
    }

    /// `S_1..S_N` of the transformed log-view `y`.
    pub fn modular(&self, y: &[f64], ell: f64, r: f64) -> Vec<f64> {
        self.window_means(&self.terms(y, ell, r))
    }

    /// `S_N` alone.
    pub fn last_window(&self, y: &[f64], ell: f64, r: f64) -> f64 {
        let n = self.n_max();
        let (lo, hi) = self.lambda.bounds(n);
        let sum: f64 = (lo..=hi)
            .map(|k| self.term(y[k], self.p.values[k], ell, r))
            .sum();
        sum / self.lambda.values[n - 1]
    }
}

/// `S_n` for a single window.
pub fn modular_window(x: &GeoSequence, spec: &SpaceSpec, n: usize, ell: GeoScalar) -> Result<f64> {
    let ev = Evaluator::new(spec, x.len())?;
    ev.lambda.get(n)?;
    let l = match spec.variant {
        Variant::Limit => ell.ln(),
        _ => 0.0,
    };
    let y = spec.transform.apply(x);
    Ok(ev.modular(&y, l, spec.r())[n - 1])
}

/// Quarter-to-quarter ratio of mean window values read as a growth trend.
const GROWTH_FACTOR: f64 = 1.25;

/// Decision thresholds for classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyOptions {
    pub tol: f64,
    /// Number of trailing windows the verdict looks at.
    pub windows: usize,
    pub bound_cap: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            windows: 10,
            bound_cap: 1e9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converging,
    Bounded,
    Diverging,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converging => "converging",
            Self::Bounded => "bounded",
            Self::Diverging => "diverging",
            Self::Inconclusive => "inconclusive",
        }
    }

    /// Whether the truncation looks like a member of the space.
    pub fn is_member(self) -> bool {
        matches!(self, Self::Converging | Self::Bounded)
    }
}

/// Empirical membership verdict with the full window trace.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub verdict: Verdict,
    /// Estimated ℓ for the limit variant.
    pub limit_estimate: Option<GeoScalar>,
    /// `λ_1..λ_N`.
    pub lambda_values: Vec<f64>,
    /// `S_1..S_N`.
    pub window_values: Vec<f64>,
    /// Least-squares slope of the last `W` window values.
    pub tail_slope: f64,
    pub reason: Option<String>,
    pub spec: SpaceSpec,
    pub options: ClassifyOptions,
}

fn ls_slope(v: &[f64]) -> f64 {
    let n = v.len();
    if n < 2 {
        return 0.0;
    }
    let xm = (n - 1) as f64 / 2.0;
    let ym = v.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &y) in v.iter().enumerate() {
        let dx = i as f64 - xm;
        sxy += dx * (y - ym);
        sxx += dx * dx;
    }
    sxy / sxx
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Estimates `L = ln ℓ`: the median of the last quarter of `y`, refined by
/// minimising the final-window modular over the range of that quarter.
pub fn estimate_limit(ev: &Evaluator, y: &[f64], r: f64) -> f64 {
    let q = y.len().div_ceil(4);
    let mut tail = y[y.len() - q..].to_vec();
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let l0 = median(&mut tail);
    if lo == hi {
        return l0;
    }
    let f0 = ev.last_window(y, l0, r);
    let tol = 1e-13 * (1.0 + lo.abs().max(hi.abs()));
    let (l1, f1) = golden_min(|l| ev.last_window(y, l, r), lo, hi, tol, 200);
    if f1 < f0 {
        l1
    } else {
        l0
    }
}

/// Classifies a truncation against `spec` with the default options.
pub fn classify_membership(x: &GeoSequence, spec: &SpaceSpec) -> Result<MembershipReport> {
    classify_with(x, spec, ClassifyOptions::default())
}

pub fn classify_with(
    x: &GeoSequence,
    spec: &SpaceSpec,
    opts: ClassifyOptions,
) -> Result<MembershipReport> {
    spec.validate()?;
    let w = opts.windows.max(1);
    let mut report = MembershipReport {
        verdict: Verdict::Inconclusive,
        limit_estimate: None,
        lambda_values: Vec::new(),
        window_values: Vec::new(),
        tail_slope: 0.0,
        reason: None,
        spec: spec.clone(),
        options: opts,
    };
    if x.len() < 2 {
        report.reason = Some(format!("{} terms: no window to evaluate", x.len()));
        return Ok(report);
    }
    let ev = Evaluator::new(spec, x.len())?;
    let y = spec.transform.apply(x);
    let r = spec.r();
    let ell = match spec.variant {
        Variant::Limit => {
            let l = estimate_limit(&ev, &y, r);
            report.limit_estimate = Some(GeoScalar::from_log(l)?);
            l
        }
        _ => 0.0,
    };
    let s = ev.modular(&y, ell, r);
    report.lambda_values = ev.lambda.values().to_vec();
    report.tail_slope = ls_slope(&s[s.len().saturating_sub(w)..]);
    report.window_values = s;

    if x.len() < 4 * w {
        report.reason = Some(format!(
            "truncation of {} terms is shorter than 4 x {w} decision windows",
            x.len()
        ));
        return Ok(report);
    }
    let s = &report.window_values;
    let tail = &s[s.len() - w..];
    match spec.variant {
        Variant::Zero | Variant::Limit => {
            let small = tail.iter().all(|&v| v <= opts.tol);
            let flat = report.tail_slope * w as f64 <= opts.tol;
            if small && flat {
                report.verdict = Verdict::Converging;
            } else if tail.iter().all(|&v| v > opts.tol) {
                report.verdict = Verdict::Diverging;
                report.reason = Some(format!("last {w} window values exceed {}", opts.tol));
            } else {
                report.reason = Some("tail straddles the tolerance or is rising".into());
            }
        }
        Variant::Bounded => {
            let max = s.iter().copied().fold(0.0, f64::max);
            if s.iter().any(|v| !v.is_finite()) || max >= opts.bound_cap {
                report.verdict = Verdict::Diverging;
                report.reason = Some(format!("window values reach the cap {}", opts.bound_cap));
            } else {
                let n = s.len();
                let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
                let q3 = mean(&s[n / 2..3 * n / 4]);
                let q4 = mean(&s[3 * n / 4..]);
                if q4 > GROWTH_FACTOR * q3 + opts.tol {
                    report.reason = Some(format!(
                        "growth: last-quarter mean {q4} vs previous-quarter mean {q3}"
                    ));
                } else {
                    report.verdict = Verdict::Bounded;
                }
            }
        }
    }
    Ok(report)
}

/// Paranorm of a truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Paranorm {
    /// Classical scale infimum; `inf` when no admissible scale was found.
    pub rho_star: f64,
    /// `rho_star^{p̄/H}` with `p̄ = inf p_k`.
    pub g: f64,
    /// `e^g`; `None` for the infinite marker.
    pub g_geo: Option<GeoScalar>,
    pub h: f64,
    pub p_bar: f64,
    /// Every bisection probe was consistent with a non-increasing constraint.
    pub monotone: bool,
    pub probes: usize,
}

/// `sup_n (S_n(r))^{1/H}` with `L = 0`.
pub fn paranorm_constraint(ev: &Evaluator, y: &[f64], r: f64) -> f64 {
    let h = ev.p.h();
    ev.modular(y, 0.0, r)
        .into_iter()
        .fold(0.0, |acc, s| acc.max(s.powf(1.0 / h)))
}

/// `g(x)` at truncation scale; requires the zero variant.
pub fn paranorm(x: &GeoSequence, spec: &SpaceSpec) -> Result<Paranorm> {
    if spec.variant != Variant::Zero {
        return Err(Error::InvalidSpec(format!(
            "paranorm needs variant zero, got {}",
            spec.variant.as_str()
        )));
    }
    let ev = Evaluator::new(spec, x.len())?;
    let y = spec.transform.apply(x);
    let h = ev.p.h();
    let p_bar = ev.p.inf();
    // Only indices inside some window matter.
    let first = (1..=ev.n_max())
        .map(|n| ev.lambda.bounds(n).0)
        .min()
        .unwrap_or(1);
    let scale = y[first..].iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    if scale == 0.0 {
        return Ok(Paranorm {
            rho_star: 0.0,
            g: 0.0,
            g_geo: Some(GeoScalar::ZERO),
            h,
            p_bar,
            monotone: true,
            probes: 0,
        });
    }
    let opts = InfimumSearch {
        rel_tol: 1e-12,
        ..InfimumSearch::default()
    };
    let res = infimum(
        |r| paranorm_constraint(&ev, &y, r),
        scale,
        scale * f64::EPSILON,
        opts,
    );
    let monotone = res.is_monotone();
    log::debug!(
        "paranorm: rho_star = {:e} after {} probes",
        res.value,
        res.probes.len()
    );
    debug_assert!(monotone, "paranorm constraint not monotone in r");
    let rho_star = res.value;
    let g = rho_star.powf(p_bar / h);
    let g_geo = if g.is_finite() {
        Some(GeoScalar::from_log(g)?)
    } else {
        None
    };
    Ok(Paranorm {
        rho_star,
        g,
        g_geo,
        h,
        p_bar,
        monotone,
        probes: res.probes.len(),
    })
}
