//! Orlicz functions: continuous, convex, non-decreasing `M` on `[0, ∞)` with
//! `M(0) = 0`.

use serde::{Deserialize, Serialize};

use crate::bisect::{infimum, Infimum, InfimumSearch};
use crate::error::{Error, Result};

/// An Orlicz function from one of the built-in families or a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrliczFn {
    /// `M(t) = t^p`, `p ≥ 1`.
    Power { p: f64 },
    /// `M(t) = e^t − 1`.
    ExpMinusOne,
    /// `M(t) = t ln(1 + t)`.
    XLog1p,
    /// Piecewise-linear interpolation of `(t, M(t))` knots starting at `(0, 0)`,
    /// extended past the last knot with the last slope.
    Table { knots: Vec<(f64, f64)> },
}

impl OrliczFn {
    pub fn power(p: f64) -> Result<Self> {
        let m = Self::Power { p };
        m.check()?;
        Ok(m)
    }

    /// A table; only the shape is checked here, convexity and monotonicity are
    /// left to [`OrliczFn::validate`].
    pub fn table(knots: Vec<(f64, f64)>) -> Result<Self> {
        let m = Self::Table { knots };
        m.check()?;
        Ok(m)
    }

    /// Structural checks on the parameters (run after deserialization too).
    pub fn check(&self) -> Result<()> {
        match self {
            Self::Power { p } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(Error::InvalidOrlicz(format!(
                        "power exponent {p} must be >= 1"
                    )));
                }
            }
            Self::ExpMinusOne | Self::XLog1p => {}
            Self::Table { knots } => {
                if knots.len() < 2 {
                    return Err(Error::InvalidOrlicz(
                        "table needs at least two knots".into(),
                    ));
                }
                if knots[0] != (0.0, 0.0) {
                    return Err(Error::InvalidOrlicz("table must start at (0, 0)".into()));
                }
                for w in knots.windows(2) {
                    if !(w[1].0.is_finite() && w[1].1.is_finite()) || w[1].0 <= w[0].0 {
                        return Err(Error::InvalidOrlicz(format!(
                            "knots must be finite with increasing t (at t = {})",
                            w[1].0
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `M(t)` for `t ≥ 0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::NegativeArgument(t));
        }
        Ok(self.eval_unchecked(t))
    }

    /// `M(t)` without the domain check; `t` must be non-negative.
    #[inline]
    pub fn eval_unchecked(&self, t: f64) -> f64 {
        match self {
            Self::Power { p } => {
                if p.fract() == 0.0 && *p <= 64.0 {
                    t.powi(*p as i32)
                } else {
                    t.powf(*p)
                }
            }
            Self::ExpMinusOne => t.exp_m1(),
            Self::XLog1p => t * t.ln_1p(),
            Self::Table { knots } => eval_table(knots, t),
        }
    }

    /// Whether the Δ2 condition is known in closed form for this family.
    pub fn analytic_delta2(&self) -> Option<bool> {
        match self {
            Self::Power { .. } | Self::XLog1p => Some(true),
            Self::ExpMinusOne => Some(false),
            Self::Table { .. } => None,
        }
    }

    /// Monotonicity and midpoint-convexity diagnostics on a sorted grid of
    /// positive points. Tables are additionally checked knot by knot.
    pub fn validate(&self, grid: &[f64]) -> Validation {
        let mut report = Validation {
            zero_ok: self.eval_unchecked(0.0) == 0.0,
            negative_at: None,
            monotone_violation: None,
            convexity_violation: None,
        };
        if let Self::Table { knots } = self {
            for w in knots.windows(2) {
                if w[1].1 < w[0].1 && report.monotone_violation.is_none() {
                    report.monotone_violation = Some((w[0].0, w[1].0));
                }
            }
            for w in knots.windows(3) {
                let s0 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                let s1 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
                if s1 < s0 && report.convexity_violation.is_none() {
                    report.convexity_violation = Some((w[0].0, w[2].0));
                }
            }
        }
        let values: Vec<f64> = grid.iter().map(|&t| self.eval_unchecked(t)).collect();
        for (i, (&t, &m)) in grid.iter().zip(&values).enumerate() {
            if m < 0.0 && report.negative_at.is_none() {
                report.negative_at = Some(t);
            }
            if i + 1 < grid.len()
                && report.monotone_violation.is_none()
                && !le_slack(m, values[i + 1])
            {
                report.monotone_violation = Some((t, grid[i + 1]));
            }
            for gap in [1, 2] {
                if i + gap < grid.len() && report.convexity_violation.is_none() {
                    let s = grid[i + gap];
                    let mid = self.eval_unchecked(0.5 * (t + s));
                    if !le_slack(mid, 0.5 * (m + values[i + gap])) {
                        report.convexity_violation = Some((t, s));
                    }
                }
            }
        }
        report
    }

    /// `max M(l u) / M(u)` over the grid.
    pub fn dilation_constant(&self, l: f64, grid: &[f64]) -> Result<f64> {
        let mut k = 0.0f64;
        for &u in grid {
            k = k.max(self.dilation_ratio(l, u)?);
        }
        Ok(k)
    }

    fn dilation_ratio(&self, l: f64, u: f64) -> Result<f64> {
        let base = self.eval_unchecked(u);
        if base == 0.0 {
            return Err(Error::DegenerateOrlicz { u });
        }
        let r = self.eval_unchecked(l * u) / base;
        Ok(if r.is_nan() { f64::INFINITY } else { r })
    }

    /// Numerical Δ2 diagnostics: `K = max M(2u)/M(u)` over the grid and a
    /// trend test on the per-decade maxima of the ratio.
    pub fn delta2_constant(&self, grid: &LogGrid) -> Result<Delta2Report> {
        let points = grid.points();
        let mut ratios = Vec::with_capacity(points.len());
        for &u in &points {
            ratios.push(self.dilation_ratio(2.0, u)?);
        }
        let k = ratios.iter().copied().fold(0.0f64, f64::max);
        let per = grid.per_decade;
        let decade_max: Vec<f64> = ratios
            .chunks(per)
            .map(|c| c.iter().copied().fold(0.0f64, f64::max))
            .collect();
        let bounded = ratios.iter().all(|r| r.is_finite()) && {
            let (earlier, last) = decade_max.split_at(decade_max.len().saturating_sub(1));
            let prior = earlier.iter().copied().fold(0.0f64, f64::max);
            last.iter().all(|&m| m <= prior * (1.0 + 1e-9))
        };
        Ok(Delta2Report {
            satisfied: bounded,
            analytic: self.analytic_delta2(),
            k,
            above_two: k > 2.0,
            grid: *grid,
            decade_maxima: decade_max,
        })
    }

    /// Largest `δ ∈ (0, 1]` with `M(δ) ≤ eps`, by bisection.
    pub fn level_below(&self, eps: f64) -> f64 {
        if self.eval_unchecked(1.0) <= eps {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval_unchecked(mid) <= eps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

fn le_slack(a: f64, b: f64) -> bool {
    a <= b + 1e-12 * b.abs().max(1.0)
}

fn eval_table(knots: &[(f64, f64)], t: f64) -> f64 {
    let idx = knots.partition_point(|&(x, _)| x <= t);
    let (a, b) = if idx >= knots.len() {
        (knots[knots.len() - 2], knots[knots.len() - 1])
    } else {
        (knots[idx - 1], knots[idx])
    };
    a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0)
}

/// Validity diagnostics; violations carry a witness pair of arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub zero_ok: bool,
    pub negative_at: Option<f64>,
    pub monotone_violation: Option<(f64, f64)>,
    pub convexity_violation: Option<(f64, f64)>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.zero_ok
            && self.negative_at.is_none()
            && self.monotone_violation.is_none()
            && self.convexity_violation.is_none()
    }
}

/// Log-spaced sampling grid `[lo, hi]` with `per_decade` points per decade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    pub lo: f64,
    pub hi: f64,
    pub per_decade: usize,
}

impl Default for LogGrid {
    fn default() -> Self {
        Self {
            lo: 1e-6,
            hi: 1e6,
            per_decade: 60,
        }
    }
}

impl LogGrid {
    pub fn points(&self) -> Vec<f64> {
        let (a, b) = (self.lo.log10(), self.hi.log10());
        let n = ((b - a) * self.per_decade as f64).round() as usize;
        (0..=n)
            .map(|i| 10f64.powf(a + (b - a) * i as f64 / n as f64))
            .collect()
    }
}

/// Numerical Δ2 verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Delta2Report {
    /// Ratio bounded on the grid with no growth across decades.
    pub satisfied: bool,
    /// Closed-form verdict for the built-in families.
    pub analytic: Option<bool>,
    /// `max M(2u)/M(u)` over the grid (may be `inf`).
    pub k: f64,
    /// Whether `K > 2` strictly; `power(1)` gives exactly 2.
    pub above_two: bool,
    pub grid: LogGrid,
    pub decade_maxima: Vec<f64>,
}

/// `inf { ρ > 0 : Σ M(|x_k| / ρ) ≤ 1 }` to relative tolerance `1e−14`.
pub fn luxemburg_norm(x: &[f64], m: &OrliczFn) -> Result<f64> {
    Ok(luxemburg_search(x, m)?.value)
}

/// As [`luxemburg_norm`], returning the probe trace.
pub fn luxemburg_search(x: &[f64], m: &OrliczFn) -> Result<Infimum> {
    if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    let scale = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return Ok(Infimum {
            value: 0.0,
            probes: Vec::new(),
            below_floor: false,
        });
    }
    let res = infimum(
        |rho| x.iter().map(|v| m.eval_unchecked(v.abs() / rho)).sum(),
        scale,
        scale * f64::EPSILON,
        InfimumSearch {
            rel_tol: 1e-14,
            ..InfimumSearch::default()
        },
    );
    debug_assert!(res.is_monotone(), "Luxemburg constraint not monotone");
    Ok(res)
}
