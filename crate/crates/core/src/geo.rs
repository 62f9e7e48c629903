//! Geometric (multiplicative) arithmetic on the positive reals.
//!
//! The field `(R+, ⊕, ⊙)` is the image of `(R, +, ·)` under `u ↦ e^u`:
//!
//! | geometric      | representative      | log-view      |
//! |----------------|---------------------|---------------|
//! | `x ⊕ y`        | `x · y`             | `u + v`       |
//! | `x ⊖ y`        | `x / y`             | `u − v`       |
//! | `x ⊙ y`        | `e^{ln x · ln y}`   | `u · v`       |
//! | `c ▷ x`        | `x^c`               | `c · u`       |
//! | `\|x\|_G`      | `e^{\|ln x\|}`      | `\|u\|`       |
//!
//! Geometric zero is `1` and geometric identity is `e`.
//!
//! Every value carries both its representative and its log-view. The free
//! functions ([`gadd`], [`gmul`], ...) compute on representatives and report
//! [`Error::Range`] when a representative leaves the normal `f64` range. The
//! operator impls (`+`, `-`, `*`, `Neg`) and the `*_log` methods compute on
//! log-views and never overflow; they are authoritative when the two paths
//! disagree about range.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A geometric number `e^u`, stored with its log-view `u` and representative.
///
/// The log-view is always finite. The representative is `e^u` rounded to
/// `f64` and may be `0` or `inf` when `|u|` exceeds about 708; such values are
/// still valid geometric numbers, only the direct path refuses them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoScalar {
    log: f64,
    value: f64,
}

impl GeoScalar {
    /// Geometric zero, the representative `1`.
    pub const ZERO: GeoScalar = GeoScalar {
        log: 0.0,
        value: 1.0,
    };
    /// Geometric identity, the representative `e`.
    pub const ONE: GeoScalar = GeoScalar {
        log: 1.0,
        value: std::f64::consts::E,
    };

    /// Builds from a representative, which must be strictly positive and finite.
    pub fn new(value: f64) -> Result<Self> {
        Self::at(0, value)
    }

    fn at(index: usize, value: f64) -> Result<Self> {
        if value.is_nan() || value.is_infinite() {
            return Err(Error::NonFinite { index, value });
        }
        if value <= 0.0 {
            return Err(Error::NonPositive { index, value });
        }
        Ok(Self {
            log: value.ln(),
            value,
        })
    }

    /// Builds from a finite log-view.
    pub fn from_log(u: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::NonFinite { index: 0, value: u });
        }
        Ok(Self::from_log_unchecked(u))
    }

    pub(crate) fn from_log_unchecked(u: f64) -> Self {
        Self {
            log: u,
            value: u.exp(),
        }
    }

    /// The log-view `ln x`.
    #[inline]
    pub fn ln(&self) -> f64 {
        self.log
    }

    /// The representative, if it is a normal `f64`.
    pub fn value(&self) -> Result<f64> {
        if self.is_representable() {
            Ok(self.value)
        } else {
            Err(Error::Range { log_view: self.log })
        }
    }

    /// The representative as stored, possibly `0` or `inf`.
    #[inline]
    pub fn raw_value(&self) -> f64 {
        self.value
    }

    #[inline]
    pub fn is_representable(&self) -> bool {
        self.value.is_normal()
    }

    /// `x ⊙ y` on log-views.
    pub fn mul_log(self, other: Self) -> Self {
        Self::from_log_unchecked(self.log * other.log)
    }

    /// `c ▷ x` on log-views.
    pub fn scale_log(self, c: f64) -> Self {
        Self::from_log_unchecked(c * self.log)
    }

    /// `|x|_G` on log-views.
    pub fn abs_log(self) -> Self {
        Self::from_log_unchecked(self.log.abs())
    }
}

impl Default for GeoScalar {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for GeoScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^{}", self.log)
    }
}

impl Add for GeoScalar {
    type Output = GeoScalar;
    fn add(self, rhs: Self) -> Self {
        Self::from_log_unchecked(self.log + rhs.log)
    }
}

impl Sub for GeoScalar {
    type Output = GeoScalar;
    fn sub(self, rhs: Self) -> Self {
        Self::from_log_unchecked(self.log - rhs.log)
    }
}

impl Mul for GeoScalar {
    type Output = GeoScalar;
    fn mul(self, rhs: Self) -> Self {
        self.mul_log(rhs)
    }
}

impl Neg for GeoScalar {
    type Output = GeoScalar;
    fn neg(self) -> Self {
        Self::from_log_unchecked(-self.log)
    }
}

fn from_rep(value: f64, log_view: f64) -> Result<GeoScalar> {
    if value.is_normal() && value > 0.0 {
        Ok(GeoScalar {
            log: value.ln(),
            value,
        })
    } else {
        Err(Error::Range { log_view })
    }
}

/// `x ⊕ y = x · y`.
pub fn gadd(x: GeoScalar, y: GeoScalar) -> Result<GeoScalar> {
    let log_view = x.log + y.log;
    let (a, b) = reps(x, y, log_view)?;
    from_rep(a * b, log_view)
}

/// `x ⊖ y = x / y`.
pub fn gsub(x: GeoScalar, y: GeoScalar) -> Result<GeoScalar> {
    let log_view = x.log - y.log;
    let (a, b) = reps(x, y, log_view)?;
    from_rep(a / b, log_view)
}

/// `x ⊙ y = e^{ln x · ln y}`.
pub fn gmul(x: GeoScalar, y: GeoScalar) -> Result<GeoScalar> {
    let log_view = x.log * y.log;
    let (a, b) = reps(x, y, log_view)?;
    let w = a.ln() * b.ln();
    from_rep(w.exp(), log_view)
}

/// Real scalar action `c ▷ x = x^c`.
pub fn gscale(c: f64, x: GeoScalar) -> Result<GeoScalar> {
    let log_view = c * x.log;
    if !c.is_finite() {
        return Err(Error::NonFinite { index: 0, value: c });
    }
    let a = x.value().map_err(|_| Error::Range { log_view })?;
    from_rep(a.powf(c), log_view)
}

/// Geometric magnitude `|x|_G = e^{|ln x|}`; always at least `1`.
pub fn gabs(x: GeoScalar) -> Result<GeoScalar> {
    let log_view = x.log.abs();
    let a = x.value().map_err(|_| Error::Range { log_view })?;
    from_rep(if a < 1.0 { 1.0 / a } else { a }, log_view)
}

/// Geometric sum `G∑ x_k = ∏ x_k`; the empty sum is geometric zero.
pub fn gsum(xs: &[GeoScalar]) -> Result<GeoScalar> {
    let log_view: f64 = xs.iter().map(|x| x.log).sum();
    let mut acc = 1.0f64;
    for x in xs {
        let a = x.value().map_err(|_| Error::Range { log_view })?;
        acc *= a;
        if !(acc.is_normal() && acc > 0.0) {
            return Err(Error::Range { log_view });
        }
    }
    from_rep(acc, log_view)
}

fn reps(x: GeoScalar, y: GeoScalar, log_view: f64) -> Result<(f64, f64)> {
    match (x.value(), y.value()) {
        (Ok(a), Ok(b)) => Ok((a, b)),
        _ => Err(Error::Range { log_view }),
    }
}

/// A finite truncation `(x_0, …, x_{N−1})` of a geometric sequence.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GeoSequence {
    terms: Vec<GeoScalar>,
}

impl GeoSequence {
    /// Lifts log-views through `u ↦ e^u`. Every entry must be finite.
    pub fn from_log(u: &[f64]) -> Result<Self> {
        let terms = u
            .iter()
            .enumerate()
            .map(|(index, &v)| {
                if v.is_finite() {
                    Ok(GeoScalar::from_log_unchecked(v))
                } else {
                    Err(Error::NonFinite { index, value: v })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { terms })
    }

    /// Builds from representatives, rejecting non-positive or non-finite ones.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let terms = values
            .iter()
            .enumerate()
            .map(|(i, &v)| GeoScalar::at(i, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { terms })
    }

    pub fn from_terms(terms: Vec<GeoScalar>) -> Self {
        Self { terms }
    }

    /// Geometric zero sequence `(1, …, 1)`.
    pub fn zeros(n: usize) -> Self {
        Self {
            terms: vec![GeoScalar::ZERO; n],
        }
    }

    pub fn to_log(&self) -> Vec<f64> {
        self.terms.iter().map(GeoScalar::ln).collect()
    }

    /// Representatives as stored; see [`GeoScalar::raw_value`].
    pub fn raw_values(&self) -> Vec<f64> {
        self.terms.iter().map(GeoScalar::raw_value).collect()
    }

    pub fn terms(&self) -> &[GeoScalar] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<GeoScalar> {
        self.terms.get(k).copied()
    }

    pub fn is_representable(&self) -> bool {
        self.terms.iter().all(GeoScalar::is_representable)
    }

    /// Termwise `x ⊕ y` in the log domain.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Precondition(format!(
                "sequence lengths differ: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Self {
            terms: self
                .terms
                .iter()
                .zip(&other.terms)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    /// Termwise `α ⊙ x_k` with the constant scalar `α = e^a`.
    pub fn gscale_all(&self, a: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|t| t.scale_log(a)).collect(),
        }
    }

    /// Geometric negation `⊖x`, i.e. `x_k ↦ 1 / x_k`.
    pub fn negate(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|&t| -t).collect(),
        }
    }
}

/// `to_log` as a free function: the log-views of a sequence.
pub fn to_log(x: &GeoSequence) -> Vec<f64> {
    x.to_log()
}

/// `from_log` as a free function.
pub fn from_log(u: &[f64]) -> Result<GeoSequence> {
    GeoSequence::from_log(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(u: f64) -> GeoScalar {
        GeoScalar::from_log(u).unwrap()
    }

    fn close(a: GeoScalar, u: f64) -> bool {
        (a.ln() - u).abs() <= 1e-12
    }

    #[test]
    fn gadd_examples() {
        assert!(close(gadd(e(2.0), e(3.0)).unwrap(), 5.0));
        let x = GeoScalar::new(7.5).unwrap();
        assert_eq!(gadd(x, GeoScalar::ZERO).unwrap().raw_value(), 7.5);
        assert!(close(gadd(e(-4.0), e(4.0)).unwrap(), 0.0));
    }

    #[test]
    fn gsub_examples() {
        let x = GeoScalar::new(3.25).unwrap();
        assert_eq!(gsub(x, x).unwrap(), GeoScalar::ZERO);
        assert!(close(gsub(e(5.0), e(2.0)).unwrap(), 3.0));
        assert!(close(gsub(GeoScalar::ZERO, e(2.0)).unwrap(), -2.0));
    }

    #[test]
    fn gmul_examples() {
        let x = GeoScalar::new(4.0).unwrap();
        assert!(close(gmul(x, GeoScalar::ONE).unwrap(), 4.0f64.ln()));
        assert_eq!(gmul(x, GeoScalar::ZERO).unwrap(), GeoScalar::ZERO);
        assert!(close(gmul(e(2.0), e(3.0)).unwrap(), 6.0));
    }

    #[test]
    fn gscale_examples() {
        assert!(close(gscale(2.0, e(3.0)).unwrap(), 6.0));
        assert_eq!(gscale(0.0, e(1.7)).unwrap(), GeoScalar::ZERO);
        assert!(close(gscale(2.0 / 3.0, GeoScalar::ONE).unwrap(), 2.0 / 3.0));
    }

    #[test]
    fn gabs_examples() {
        assert!(close(gabs(e(-2.0)).unwrap(), 2.0));
        assert_eq!(gabs(GeoScalar::ZERO).unwrap(), GeoScalar::ZERO);
        assert!(close(gabs(e(3.0)).unwrap(), 3.0));
    }

    #[test]
    fn gsum_examples() {
        let one = GeoScalar::ONE;
        assert!(close(gsum(&[one, one, one]).unwrap(), 3.0));
        assert_eq!(gsum(&[]).unwrap(), GeoScalar::ZERO);
        assert!(close(gsum(&[e(2.0), e(-2.0)]).unwrap(), 0.0));
    }

    #[test]
    fn log_round_trip_examples() {
        let x = from_log(&[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(x.raw_values()[0], 1.0);
        assert!((x.raw_values()[1] - std::f64::consts::E).abs() < 1e-15);
        assert!((x.raw_values()[2] - std::f64::consts::E.powi(2)).abs() < 1e-14);
        assert_eq!(to_log(&x), vec![0.0, 1.0, 2.0]);
        let ones = GeoSequence::from_values(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(to_log(&ones), vec![0.0; 3]);
    }

    #[test]
    fn rejects_non_positive_and_non_finite() {
        assert!(matches!(
            GeoSequence::from_values(&[1.0, 0.0]),
            Err(Error::NonPositive { index: 1, .. })
        ));
        assert!(matches!(
            GeoSequence::from_values(&[-2.0]),
            Err(Error::NonPositive { index: 0, .. })
        ));
        assert!(matches!(
            GeoSequence::from_log(&[0.0, f64::NAN]),
            Err(Error::NonFinite { index: 1, .. })
        ));
        assert!(GeoScalar::from_log(f64::INFINITY).is_err());
    }

    #[test]
    fn overflow_reports_log_view() {
        match gmul(e(40.0), e(30.0)) {
            Err(Error::Range { log_view }) => assert_eq!(log_view, 1200.0),
            other => panic!("expected range error, got {other:?}"),
        }
        // the log path keeps going
        assert_eq!((e(40.0) * e(30.0)).ln(), 1200.0);
        assert!(!(e(40.0) * e(30.0)).is_representable());
    }

    #[test]
    fn sequence_ops_work_in_log_domain() {
        let x = from_log(&[1.0, -2.0, 900.0]).unwrap();
        let y = from_log(&[0.5, 2.0, 100.0]).unwrap();
        assert_eq!(x.oplus(&y).unwrap().to_log(), vec![1.5, 0.0, 1000.0]);
        assert_eq!(x.gscale_all(2.0).to_log(), vec![2.0, -4.0, 1800.0]);
        assert_eq!(x.negate().to_log(), vec![-1.0, 2.0, -900.0]);
        assert!(x.oplus(&GeoSequence::zeros(2)).is_err());
    }
}
