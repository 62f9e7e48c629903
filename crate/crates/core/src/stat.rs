//! λ-statistical convergence of transformed sequences: window densities of
//! the indices whose residual reaches a threshold.

use crate::error::{Error, Result};
use crate::geo::{GeoScalar, GeoSequence};
use crate::summability::{ClassifyOptions, Evaluator, ExponentSeq, LambdaSeq, SpaceSpec};

/// One window of a density trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityWindow {
    pub n: usize,
    pub lambda: f64,
    /// `c_n = |{k ∈ I_n : |y_k − L| ≥ ln ε}|`.
    pub count: usize,
    /// `d_n = c_n / λ_n`.
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityTrace {
    pub epsilon: GeoScalar,
    pub ell: GeoScalar,
    pub windows: Vec<DensityWindow>,
}

impl DensityTrace {
    pub fn densities(&self) -> Vec<f64> {
        self.windows.iter().map(|w| w.density).collect()
    }
}

fn check_epsilon(epsilon: GeoScalar) -> Result<f64> {
    let e = epsilon.ln();
    if e.is_nan() || e <= 0.0 {
        return Err(Error::Precondition(format!(
            "threshold must exceed the geometric zero 1 (ln ε = {e})"
        )));
    }
    Ok(e)
}

/// Densities over the windows of `lambda`, from an already transformed `y`.
pub fn density_trace(
    y: &[f64],
    lambda: &LambdaSeq,
    ell: GeoScalar,
    epsilon: GeoScalar,
) -> Result<DensityTrace> {
    let eps = check_epsilon(epsilon)?;
    let l = ell.ln();
    let n_max = lambda.len().min(y.len().saturating_sub(1));
    if n_max == 0 {
        return Err(Error::Precondition("no window fits the sequence".into()));
    }
    let hits: Vec<bool> = y.iter().map(|&v| (v - l).abs() >= eps).collect();
    let mut windows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let lam = lambda.get(n)?;
        let count = hits[lambda.window(n)?].iter().filter(|&&h| h).count();
        windows.push(DensityWindow {
            n,
            lambda: lam,
            count,
            density: count as f64 / lam,
        });
    }
    Ok(DensityTrace {
        epsilon,
        ell,
        windows,
    })
}

/// Densities of `F̂x` around `ℓ`.
pub fn stat_density(
    x: &GeoSequence,
    lambda: &LambdaSeq,
    ell: GeoScalar,
    epsilon: GeoScalar,
) -> Result<DensityTrace> {
    let y = crate::fibonacci::fhat_transform_log(&x.to_log());
    density_trace(&y, lambda, ell, epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatVerdict {
    Converging,
    NotConverging,
    /// Fewer windows than the decision needs.
    Inconclusive,
}

impl StatVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converging => "converging",
            Self::NotConverging => "not_converging",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// Converging iff `d_n ≤ tol` on the last `W` windows.
pub fn stat_converges(trace: &DensityTrace) -> StatVerdict {
    stat_converges_with(trace, ClassifyOptions::default())
}

pub fn stat_converges_with(trace: &DensityTrace, opts: ClassifyOptions) -> StatVerdict {
    let w = opts.windows.max(1);
    if trace.windows.len() < w {
        return StatVerdict::Inconclusive;
    }
    let tail = &trace.windows[trace.windows.len() - w..];
    if tail.iter().all(|d| d.density <= opts.tol) {
        StatVerdict::Converging
    } else {
        StatVerdict::NotConverging
    }
}

/// Per-window pairs `(S_n, M(ln ε / r) · d_n)` with `p ≡ 1`, for every window.
///
/// `S_n` dominates the right side term by term since `M` is non-decreasing.
pub fn stat_inclusion_bounds(
    x: &GeoSequence,
    spec: &SpaceSpec,
    ell: GeoScalar,
    epsilon: GeoScalar,
) -> Result<Vec<(f64, f64)>> {
    let eps = check_epsilon(epsilon)?;
    let ev = Evaluator::new(spec, x.len())?.with_exponents(ExponentSeq::constant(1.0, x.len())?)?;
    let y = spec.transform.apply(x);
    // The residual is taken around ℓ regardless of the variant.
    let l = ell.ln();
    let r = spec.r();
    let s = ev.modular(&y, l, r);
    let trace = density_trace(&y, ev.lambda(), ell, epsilon)?;
    let level = ev.orlicz().eval_unchecked(eps / r);
    Ok(s.into_iter()
        .zip(&trace.windows)
        .map(|(lhs, w)| (lhs, level * w.density))
        .collect())
}

/// `(lhs, rhs)` for window `n`.
pub fn stat_inclusion_bound(
    x: &GeoSequence,
    spec: &SpaceSpec,
    ell: GeoScalar,
    epsilon: GeoScalar,
    n: usize,
) -> Result<(f64, f64)> {
    let all = stat_inclusion_bounds(x, spec, ell, epsilon)?;
    if n == 0 || n > all.len() {
        return Err(Error::WindowOutOfRange { n, max: all.len() });
    }
    Ok(all[n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summability::{LambdaKind, Transform};

    fn e_pow(u: f64) -> GeoScalar {
        GeoScalar::from_log(u).unwrap()
    }

    #[test]
    fn ones_have_zero_density() {
        let l = LambdaSeq::new(&LambdaKind::Identity, 19).unwrap();
        let t = stat_density(&GeoSequence::zeros(20), &l, GeoScalar::ZERO, e_pow(0.01)).unwrap();
        assert!(t.windows.iter().all(|w| w.density == 0.0));
        assert_eq!(stat_converges(&t), StatVerdict::Converging);
    }

    #[test]
    fn direct_count() {
        let l = LambdaSeq::new(&LambdaKind::Identity, 4).unwrap();
        let y = [9.0, 0.0, 0.0, 5.0, 0.0];
        let t = density_trace(&y, &l, GeoScalar::ZERO, e_pow(1.0)).unwrap();
        assert_eq!(t.windows[3].count, 1);
        assert_eq!(t.windows[3].density, 0.25);
    }

    #[test]
    fn epsilon_must_exceed_one() {
        let l = LambdaSeq::new(&LambdaKind::Identity, 4).unwrap();
        let x = GeoSequence::zeros(5);
        assert!(stat_density(&x, &l, GeoScalar::ZERO, GeoScalar::ZERO).is_err());
        assert!(stat_density(&x, &l, GeoScalar::ZERO, e_pow(-1.0)).is_err());
    }

    #[test]
    fn constant_sequence_converges_statistically() {
        let c = 0.75;
        let x = GeoSequence::from_log(&[c; 120]).unwrap();
        let l = LambdaSeq::new(&LambdaKind::Half, 119).unwrap();
        let t = stat_density(&x, &l, e_pow(-c), e_pow(1e-3)).unwrap();
        assert_eq!(stat_converges(&t), StatVerdict::Converging);
    }

    #[test]
    fn half_density_not_converging() {
        let l = LambdaSeq::new(&LambdaKind::Identity, 40).unwrap();
        let y: Vec<f64> = (0..41)
            .map(|k| if k % 2 == 0 { 3.0 } else { 0.0 })
            .collect();
        let t = density_trace(&y, &l, GeoScalar::ZERO, e_pow(1.0)).unwrap();
        assert_eq!(stat_converges(&t), StatVerdict::NotConverging);
    }

    #[test]
    fn bound_holds_and_vanishes_for_ones() {
        let spec = SpaceSpec {
            lambda: LambdaKind::Half,
            transform: Transform::Identity,
            ..SpaceSpec::default()
        };
        let x = GeoSequence::zeros(10);
        assert_eq!(
            stat_inclusion_bound(&x, &spec, GeoScalar::ZERO, e_pow(1.0), 5).unwrap(),
            (0.0, 0.0)
        );

        let u: Vec<f64> = (0..30)
            .map(|k| ((k * 37) % 11) as f64 * 0.4 - 2.0)
            .collect();
        let x = GeoSequence::from_log(&u).unwrap();
        for (lhs, rhs) in stat_inclusion_bounds(&x, &spec, e_pow(0.3), e_pow(1.0)).unwrap() {
            assert!(lhs >= rhs - 1e-12);
        }
    }
}
