//! One-dimensional searches: the infimum of a monotone constraint
//! `inf { r > 0 : c(r) ≤ 1 }` for non-increasing `c` (bracketing then
//! bisection), and golden-section minimisation.

/// Search settings.
#[derive(Debug, Clone, Copy)]
pub struct InfimumSearch {
    /// Stop once `hi − lo ≤ rel_tol · hi`.
    pub rel_tol: f64,
    /// Bisection steps after bracketing.
    pub max_iter: usize,
    /// No admissible `r` at or below this means the infimum is reported infinite.
    pub cap: f64,
}

impl Default for InfimumSearch {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_iter: 200,
            cap: 1e300,
        }
    }
}

/// Outcome of a search.
#[derive(Debug, Clone)]
pub struct Infimum {
    /// Smallest admissible probe; `inf` when nothing up to the cap was admissible.
    pub value: f64,
    /// Every `(r, c(r))` evaluated, in evaluation order.
    pub probes: Vec<(f64, f64)>,
    /// The lower bracket `floor` was already admissible; the true infimum lies in `[0, value]`.
    pub below_floor: bool,
}

impl Infimum {
    /// Whether the probes are consistent with a non-increasing constraint.
    pub fn is_monotone(&self) -> bool {
        probes_monotone(&self.probes)
    }
}

/// Checks that `c` is non-increasing across the probed points.
pub fn probes_monotone(probes: &[(f64, f64)]) -> bool {
    let mut sorted = probes.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    sorted
        .windows(2)
        .all(|w| !w[0].1.is_nan() && !w[1].1.is_nan() && w[1].1 <= w[0].1)
}

/// Finds `inf { r > 0 : c(r) ≤ 1 }`.
///
/// `start` is the initial probe (a natural scale of the problem); the lower
/// bracket is `floor`, and the upper bracket is doubled from `start` until
/// admissible.
pub fn infimum<F>(mut c: F, start: f64, floor: f64, opts: InfimumSearch) -> Infimum
where
    F: FnMut(f64) -> f64,
{
    let mut probes = Vec::new();
    let mut eval = |r: f64, probes: &mut Vec<(f64, f64)>| {
        let v = c(r);
        probes.push((r, v));
        v <= 1.0
    };

    let floor = floor.min(start);
    if eval(floor, &mut probes) {
        return Infimum {
            value: floor,
            probes,
            below_floor: true,
        };
    }
    let mut lo = floor;
    let mut hi = start;
    while !eval(hi, &mut probes) {
        lo = hi;
        hi *= 2.0;
        if hi > opts.cap || !hi.is_finite() {
            return Infimum {
                value: f64::INFINITY,
                probes,
                below_floor: false,
            };
        }
    }
    for _ in 0..opts.max_iter {
        if hi - lo <= opts.rel_tol * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eval(mid, &mut probes) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Infimum {
        value: hi,
        probes,
        below_floor: false,
    }
}

/// Golden-section minimisation of a unimodal `f` on `[a, b]`.
///
/// Returns the best point seen, including both endpoints.
pub fn golden_min<F>(mut f: F, a: f64, b: f64, tol: f64, max_iter: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut best = {
        let (fa, fb) = (f(a), f(b));
        if fb < fa {
            (b, fb)
        } else {
            (a, fa)
        }
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..max_iter {
        if b - a <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        for (x, fx) in [(c, fc), (d, fd)] {
            if fx < best.1 {
                best = (x, fx);
            }
        }
    }
    best
}
