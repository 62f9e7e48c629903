//! Fibonacci numbers (`f_0 = f_1 = 1`) and the Fibonacci difference matrix
//! `F̂`, whose row `n` is
//!
//! ```text
//! y_n = (f_n / f_{n+1}) x_n − (f_{n+1} / f_n) x_{n−1},    y_0 = (f_0 / f_1) x_0.
//! ```
//!
//! Row 0 has no `k = −1` entry.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geo::{gscale, gsub, GeoScalar, GeoSequence};

/// The golden ratio `(1 + √5) / 2`.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// Exact `f_n`.
pub fn fib(n: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::one(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `f_{n−1} f_{n+1} − f_n²`, which equals `(−1)^{n+1}`. Requires `n ≥ 1`.
pub fn cassini(n: usize) -> BigInt {
    assert!(n >= 1, "cassini needs n >= 1");
    let prev = BigInt::from(fib(n - 1));
    let cur = BigInt::from(fib(n));
    let next = BigInt::from(fib(n + 1));
    &prev * &next - &cur * &cur
}

/// The form with `f_{n+1}` substituted: `f_{n−1}² + f_n f_{n−1} − f_n²`.
pub fn cassini_substituted(n: usize) -> BigInt {
    assert!(n >= 1, "cassini needs n >= 1");
    let prev = BigInt::from(fib(n - 1));
    let cur = BigInt::from(fib(n));
    &prev * &prev + &cur * &prev - &cur * &cur
}

/// Expected Cassini value `(−1)^{n+1}`.
pub fn cassini_expected(n: usize) -> BigInt {
    if n % 2 == 1 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Cached exact Fibonacci numbers and the floating coefficients used by `F̂`.
#[derive(Debug, Clone)]
pub struct FibCache {
    values: Vec<BigUint>,
    /// `r_k = f_k / f_{k+1}` from `r_{k+1} = 1 / (1 + r_k)`, `r_0 = 1`.
    ratios: Vec<f64>,
    /// `f_{k+1}²` as `f64` (may be `inf`).
    kernel: Vec<f64>,
    /// `f_k f_{k+1}` as `f64` (may be `inf`).
    cross: Vec<f64>,
}

impl FibCache {
    /// Holds `f_0 ..= f_{n+1}` so ratios up to `r_n` are available.
    pub fn new(n: usize) -> Self {
        let mut values = Vec::with_capacity(n + 2);
        values.push(BigUint::one());
        values.push(BigUint::one());
        for k in 2..n + 2 {
            let next = &values[k - 1] + &values[k - 2];
            values.push(next);
        }
        let to_f = |b: BigUint| b.to_f64().unwrap_or(f64::INFINITY);
        // Division of the (rounded) values is accurate to a few ulp; past the
        // f64 range the continued-fraction recurrence has long converged.
        let mut ratios: Vec<f64> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let (a, b) = (to_f(values[k].clone()), to_f(values[k + 1].clone()));
            let r = if b.is_finite() {
                a / b
            } else {
                1.0 / (1.0 + ratios[k - 1])
            };
            ratios.push(r);
        }
        let kernel = (0..=n)
            .map(|k| to_f(&values[k + 1] * &values[k + 1]))
            .collect();
        let cross = (0..=n).map(|k| to_f(&values[k] * &values[k + 1])).collect();
        Self {
            values,
            ratios,
            kernel,
            cross,
        }
    }

    /// Largest index `n` with `f_n` cached.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn fib(&self, n: usize) -> &BigUint {
        &self.values[n]
    }

    /// `f_k / f_{k+1}`.
    pub fn ratio(&self, k: usize) -> f64 {
        self.ratios[k]
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    /// `f_{k+1} / f_k`, computed as `1 + r_{k−1}`.
    pub fn inv_ratio(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            1.0 + self.ratios[k - 1]
        }
    }
}

/// Entry `(n, k)` of `F̂`.
pub fn fhat_entry(n: usize, k: usize) -> f64 {
    let cache = FibCache::new(n);
    if k == n {
        cache.ratio(n)
    } else if n >= 1 && k == n - 1 {
        -cache.inv_ratio(n)
    } else {
        0.0
    }
}

/// Reusable `F̂` coefficients for sequences of a fixed maximal length.
#[derive(Debug, Clone)]
pub struct Fhat {
    cache: FibCache,
}

/// Result of the direct geometric transform.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoTransform {
    pub sequence: GeoSequence,
    /// Indices whose representatives overflowed and were taken from the log path.
    pub log_fallback: Vec<usize>,
}

impl Fhat {
    pub fn new(len: usize) -> Self {
        Self {
            cache: FibCache::new(len.max(1)),
        }
    }

    pub fn cache(&self) -> &FibCache {
        &self.cache
    }

    fn ensure(&self, len: usize) {
        assert!(
            len <= self.cache.ratios.len(),
            "Fhat built for {} terms, got {len}",
            self.cache.ratios.len()
        );
    }

    /// Classical `F̂` on log-views.
    ///
    /// While `f_{n+1}²` is representable the row is evaluated as
    /// `f_n f_{n+1} (u_n / f_{n+1}² − u_{n−1} / f_n²)`, which maps the
    /// kernel `u_k = f_{k+1}²` to exact zeros; beyond that the ratio form is used.
    pub fn apply_log(&self, u: &[f64]) -> Vec<f64> {
        self.ensure(u.len());
        let c = &self.cache;
        let mut y = Vec::with_capacity(u.len());
        for n in 0..u.len() {
            if n == 0 {
                y.push(c.ratio(0) * u[0]);
                continue;
            }
            let (k_cur, k_prev, p) = (c.kernel[n], c.kernel[n - 1], c.cross[n]);
            let v = if k_cur.is_finite() && p.is_finite() {
                p * (u[n] / k_cur - u[n - 1] / k_prev)
            } else {
                c.ratio(n) * u[n] - c.inv_ratio(n) * u[n - 1]
            };
            y.push(v);
        }
        y
    }

    /// Geometric `F̂` on representatives: `(r_n ▷ x_n) ⊖ (r_n⁻¹ ▷ x_{n−1})`.
    ///
    /// Terms whose representatives leave the `f64` range are taken from the
    /// log path and listed in [`GeoTransform::log_fallback`].
    pub fn apply_geo(&self, x: &GeoSequence) -> GeoTransform {
        self.ensure(x.len());
        let c = &self.cache;
        let terms = x.terms();
        let mut log_path: Option<Vec<f64>> = None;
        let mut out = Vec::with_capacity(terms.len());
        let mut log_fallback = Vec::new();
        for n in 0..terms.len() {
            let direct = if n == 0 {
                gscale(c.ratio(0), terms[0])
            } else {
                gscale(c.ratio(n), terms[n])
                    .and_then(|a| gscale(c.inv_ratio(n), terms[n - 1]).and_then(|b| gsub(a, b)))
            };
            match direct {
                Ok(v) => out.push(v),
                Err(_) => {
                    let lp = log_path.get_or_insert_with(|| self.apply_log(&x.to_log()));
                    out.push(GeoScalar::from_log_unchecked(lp[n]));
                    log_fallback.push(n);
                }
            }
        }
        GeoTransform {
            sequence: GeoSequence::from_terms(out),
            log_fallback,
        }
    }

    /// Forward inversion `u_n = (y_n + (f_{n+1}/f_n) u_{n−1}) / (f_n/f_{n+1})`.
    ///
    /// Picks up the kernel component `u_0 f_{k+1}²`, so it grows like `α^{2n}`.
    /// Fails when the reconstruction stops being finite.
    pub fn invert_forward(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.ensure(y.len());
        let c = &self.cache;
        let mut u = Vec::with_capacity(y.len());
        for n in 0..y.len() {
            let v = if n == 0 {
                y[0] / c.ratio(0)
            } else {
                (y[n] + c.inv_ratio(n) * u[n - 1]) / c.ratio(n)
            };
            if !v.is_finite() {
                return Err(Error::Precondition(format!(
                    "forward inversion overflows at index {n}; shorten the sequence to {n} terms"
                )));
            }
            u.push(v);
        }
        Ok(u)
    }

    /// Bounded inversion: the unique preimage of `y_1 ..= y_{N−1}` with
    /// `u_{N−1} = −y_{N−1}`, built backwards by `u_{n−1} = r_n (r_n u_n − y_n)`.
    ///
    /// The backward recurrence contracts by `r_n² → α^{−2}`, so the
    /// reconstruction stays of the same size as `y`. `y_0` is not
    /// prescribable; the transform of the result has `y_0 = u_0`.
    pub fn invert_bounded(&self, y: &[f64]) -> Vec<f64> {
        self.ensure(y.len());
        let c = &self.cache;
        let len = y.len();
        if len == 0 {
            return Vec::new();
        }
        let mut u = vec![0.0; len];
        u[len - 1] = if len == 1 { y[0] } else { -y[len - 1] };
        for n in (1..len).rev() {
            let r = c.ratio(n);
            u[n - 1] = r * (r * u[n] - y[n]);
        }
        u
    }
}

/// `F̂` on log-views; see [`Fhat::apply_log`].
pub fn fhat_transform_log(u: &[f64]) -> Vec<f64> {
    Fhat::new(u.len()).apply_log(u)
}

/// `F̂` on a geometric sequence via the direct path; see [`Fhat::apply_geo`].
pub fn fhat_transform_geo(x: &GeoSequence) -> GeoTransform {
    Fhat::new(x.len()).apply_geo(x)
}

/// `Σ_{k=from}^{to} 1 / f_k` summed term by term in `f64`.
pub fn reciprocal_sum(from: usize, to: usize) -> f64 {
    let cache = FibCache::new(to.max(1));
    let mut s = 0.0;
    // smallest terms first
    for k in (from..=to).rev() {
        s += 1.0 / cache.fib(k).to_f64().unwrap_or(f64::INFINITY);
    }
    s
}

/// `Σ_{k=0}^{n} f_k` exactly.
pub fn fib_sum(n: usize) -> BigUint {
    let cache = FibCache::new(n);
    cache.values()[..=n]
        .iter()
        .fold(BigUint::zero(), |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fib_examples() {
        assert_eq!(fib(6), BigUint::from(13u32));
        assert_eq!(fib(0), BigUint::one());
        assert_eq!(fib(1), BigUint::one());
        assert_eq!(fib_sum(3), BigUint::from(7u32));
        assert_eq!(fib_sum(3), fib(5) - BigUint::one());
    }

    #[test]
    fn cassini_examples() {
        assert_eq!(cassini(3), BigInt::from(1));
        assert_eq!(cassini(2), BigInt::from(-1));
        assert_eq!(cassini(1), BigInt::from(1));
        for n in 1..40 {
            assert_eq!(cassini(n), cassini_expected(n));
            assert_eq!(cassini_substituted(n), cassini_expected(n));
        }
    }

    #[test]
    fn matrix_entries() {
        assert_eq!(fhat_entry(2, 1), -1.5);
        assert!((fhat_entry(2, 2) - 2.0 / 3.0).abs() < 1e-16);
        assert!((fhat_entry(3, 2) + 5.0 / 3.0).abs() < 1e-15);
        assert!((fhat_entry(3, 3) - 0.6).abs() < 1e-16);
        assert_eq!(fhat_entry(5, 0), 0.0);
        assert_eq!(fhat_entry(2, 3), 0.0);
        assert_eq!(fhat_entry(0, 0), 1.0);
    }

    #[test]
    fn ratios_match_exact_division() {
        let cache = FibCache::new(70);
        for k in 0..70 {
            let exact = cache.fib(k).to_f64().unwrap() / cache.fib(k + 1).to_f64().unwrap();
            assert!((cache.ratio(k) - exact).abs() <= 4e-16 * exact, "k={k}");
            let inv = cache.fib(k + 1).to_f64().unwrap() / cache.fib(k).to_f64().unwrap();
            assert!((cache.inv_ratio(k) - inv).abs() <= 4e-16 * inv, "k={k}");
        }
    }

    #[test]
    fn transform_of_ones() {
        let y = fhat_transform_log(&[1.0; 4]);
        let expected = [1.0, -1.5, -5.0 / 6.0, -16.0 / 15.0];
        for (a, b) in y.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        assert_eq!(fhat_transform_log(&[0.0; 7]), vec![0.0; 7]);
    }

    #[test]
    fn transform_matches_dense_matrix_oracle() {
        let u: Vec<f64> = (0..30)
            .map(|k| ((k * 7919) % 23) as f64 / 3.0 - 3.5)
            .collect();
        let y = fhat_transform_log(&u);
        for (n, yn) in y.iter().enumerate() {
            let dense: f64 = u
                .iter()
                .enumerate()
                .map(|(k, uk)| fhat_entry(n, k) * uk)
                .sum();
            assert!((yn - dense).abs() <= 1e-12 * (1.0 + dense.abs()), "n={n}");
        }
    }

    #[test]
    fn kernel_maps_to_zero() {
        let cache = FibCache::new(30);
        let u: Vec<f64> = (0..30)
            .map(|k| (cache.fib(k + 1) * cache.fib(k + 1)).to_f64().unwrap())
            .collect();
        let y = fhat_transform_log(&u);
        assert_eq!(y[0], 1.0);
        assert!(y[1..].iter().all(|&v| v == 0.0), "{y:?}");
    }

    #[test]
    fn kernel_from_forward_inversion() {
        let fh = Fhat::new(20);
        let mut y = vec![0.0; 20];
        y[0] = 1.0;
        let u = fh.invert_forward(&y).unwrap();
        for (k, uk) in u.iter().enumerate() {
            let exact = (fib(k + 1) * fib(k + 1)).to_f64().unwrap();
            assert!((uk - exact).abs() <= 1e-12 * exact, "k={k}");
        }
        let long = Fhat::new(1000);
        assert!(long.invert_forward(&vec![1.0; 1000]).is_err());
    }

    #[test]
    fn bounded_inversion_round_trips() {
        let n = 300;
        let fh = Fhat::new(n);
        let y: Vec<f64> = (0..n).map(|k| 0.5 + (k as f64 * 0.37).sin()).collect();
        let u = fh.invert_bounded(&y);
        assert!(u.iter().all(|v| v.abs() < 10.0));
        let back = fh.apply_log(&u);
        for k in 1..n {
            assert!((back[k] - y[k]).abs() <= 1e-12, "k={k}");
        }
    }

    #[test]
    fn constant_sequence_tends_to_negation() {
        let c = 2.5;
        let y = fhat_transform_log(&vec![c; 201]);
        assert!((y[200] + c).abs() < 1e-13);
        let x = GeoSequence::from_log(&vec![c; 201]).unwrap();
        let g = fhat_transform_geo(&x);
        assert!((g.sequence.terms()[200].ln() + c).abs() < 1e-12);
        assert!(g.log_fallback.is_empty());
    }

    #[test]
    fn geo_transform_of_e_and_ones() {
        let x = GeoSequence::from_log(&[1.0; 4]).unwrap();
        let g = fhat_transform_geo(&x).sequence.to_log();
        let expected = [1.0, -1.5, -5.0 / 6.0, -16.0 / 15.0];
        for (a, b) in g.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let ones = GeoSequence::zeros(5);
        assert_eq!(fhat_transform_geo(&ones).sequence, ones);
    }

    #[test]
    fn geo_transform_falls_back_on_overflow() {
        let x = GeoSequence::from_log(&[1.0, 800.0, 2.0, 3.0]).unwrap();
        let g = fhat_transform_geo(&x);
        assert_eq!(g.log_fallback, vec![1, 2]);
        let log = fhat_transform_log(&x.to_log());
        for (a, b) in g.sequence.to_log().iter().zip(&log) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn reciprocal_series_is_cauchy() {
        let tail = reciprocal_sum(101, 300);
        assert!(tail > 0.0 && tail <= 1e-20, "{tail}");
        let s100 = reciprocal_sum(0, 100);
        let s300 = reciprocal_sum(0, 300);
        assert!((s300 - s100).abs() <= 1e-12);
    }
}
