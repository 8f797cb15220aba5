//! Scalar search primitives shared by the norm and Young-function code:
//! bisection on a monotone predicate and golden-section search.

/// Final bracket of a bisection on a monotone predicate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    /// Largest point known to fail the predicate.
    pub lo: f64,
    /// Smallest point known to satisfy it.
    pub hi: f64,
    pub iterations: usize,
}

impl Bracket {
    /// Width relative to `hi` (absolute when `hi == 0`).
    pub fn relative_width(&self) -> f64 {
        let w = self.hi - self.lo;
        if self.hi > 0.0 {
            w / self.hi
        } else {
            w
        }
    }
}

/// Bisects `[lo, hi]` where `pred(lo)` is false and `pred(hi)` is true and the
/// predicate is monotone (false then true). Stops when the relative width drops
/// below `rel_tol`, after `max_iter` steps, or when the midpoint no longer
/// separates the endpoints in floating point.
pub fn bisect<P>(mut lo: f64, mut hi: f64, mut pred: P, rel_tol: f64, max_iter: usize) -> Bracket
where
    P: FnMut(f64) -> bool,
{
    let mut iterations = 0;
    while iterations < max_iter {
        if hi - lo <= rel_tol * hi.abs() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Bracket { lo, hi, iterations }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimisation of a unimodal function on `[a, b]`.
///
/// Returns the best abscissa seen and its value. Both endpoints are also
/// evaluated, so minima sitting on the boundary are found exactly.
pub fn golden_min<F>(mut a: f64, mut b: f64, mut f: F, abs_tol: f64, max_iter: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut best = (a, f(a));
    let fb = f(b);
    if fb < best.1 {
        best = (b, fb);
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= abs_tol {
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
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

/// `n` logarithmically spaced points from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    assert!(min > 0.0 && max >= min && n >= 1);
    if n == 1 {
        return vec![min];
    }
    let (lmin, lmax) = (min.ln(), max.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                min
            } else if i == n - 1 {
                max
            } else {
                (lmin + (lmax - lmin) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
