//! Scalar numerical kernels shared by the solvers: golden-section
//! maximization, Brent root finding, monotone bisection and central
//! finite differences.

use crate::error::{Error, Result};

/// 1/φ for the golden ratio φ.
const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
///
/// The interior search is refined until the bracket is narrower than `width`;
/// the result is then compared against both endpoints. Equal values resolve
/// toward the smaller abscissa.
pub fn golden_section_max<E, F>(mut f: F, lo: f64, hi: f64, width: f64) -> Result<Maximum, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        let fx = f(lo)?;
        return Ok(Maximum { x: lo, fx, iterations: 0 });
    }

    let f_lo = f(lo)?;
    let f_hi = f(hi)?;

    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_GOLDEN * (b - a);
    let mut x2 = a + INV_GOLDEN * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut iterations = 0;

    while b - a > width && iterations < 500 {
        iterations += 1;
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_GOLDEN * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_GOLDEN * (b - a);
            f2 = f(x2)?;
        }
    }

    let mut best = Maximum { x: lo, fx: f_lo, iterations };
    for (x, fx) in [(x1, f1), (x2, f2), (hi, f_hi)] {
        if fx > best.fx || (fx == best.fx && x < best.x) {
            best.x = x;
            best.fx = fx;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Brent's method on a sign-changing bracket `[a, b]`, stopping once the
/// bracket is narrower than `xtol` (or the residual is exactly zero).
pub fn brent_root<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(Root { x: a, fx: fa, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { a, fa, b, fb });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iteration in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(Root { x: b, fx: fb, iterations: iteration });
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            // Interpolation: secant when only two points are distinct,
            // inverse quadratic otherwise.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }

    Ok(Root { x: b, fx: fb, iterations: max_iter })
}

/// Bisection for the root of a nondecreasing function with `h(lo) <= 0 <= h(hi)`.
///
/// Bisects until the bracket collapses to adjacent floats or `max_iter` is
/// reached; fails if the final bracket is wider than `rtol * hi`.
pub fn bisect_increasing<F>(h: F, lo: f64, hi: f64, rtol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut iterations = 0;
    while iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let hm = h(mid);
        if hm == 0.0 {
            return Ok(mid);
        }
        if hm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let width = hi - lo;
    if width > rtol * hi.abs() {
        return Err(Error::DemandNotConverged { iterations, width });
    }
    // Return the endpoint with the smaller residual.
    Ok(if h(lo).abs() <= h(hi).abs() { lo } else { hi })
}

/// Central first difference with step `step`.
pub fn central_first<E, F>(mut f: F, x: f64, step: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    Ok((f(x + step)? - f(x - step)?) / (2.0 * step))
}

/// Central second difference with step `step`.
pub fn central_second<E, F>(mut f: F, x: f64, step: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    Ok((f(x + step)? - 2.0 * f(x)? + f(x - step)?) / (step * step))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(v: f64) -> Result<f64> {
        Ok(v)
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let m = golden_section_max(|x| ok(-(x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-10).unwrap();
        assert!((m.x - 0.3).abs() < 1e-7, "{m:?}");
    }

    #[test]
    fn golden_prefers_endpoint_when_monotone() {
        let m = golden_section_max(ok, 0.0, 2.0, 1e-10).unwrap();
        assert_eq!(m.x, 2.0);
        let m = golden_section_max(|x| ok(-x), 0.0, 2.0, 1e-10).unwrap();
        assert_eq!(m.x, 0.0);
    }

    #[test]
    fn golden_flat_function_ties_to_left() {
        let m = golden_section_max(|_| ok(0.0), 0.0, 1.0, 1e-10).unwrap();
        assert_eq!(m.x, 0.0);
    }

    #[test]
    fn golden_degenerate_bracket() {
        let m = golden_section_max(|x| ok(x + 1.0), 0.0, 0.0, 1e-10).unwrap();
        assert_eq!((m.x, m.fx), (0.0, 1.0));
    }

    #[test]
    fn brent_sqrt2() {
        let r = brent_root(|x| ok(x * x - 2.0), 0.0, 2.0, 1e-14, 100).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn brent_rejects_same_sign() {
        let e = brent_root(|x| ok(x * x + 1.0), -1.0, 1.0, 1e-12, 100).unwrap_err();
        assert!(matches!(e, Error::NoSignChange { .. }));
    }

    #[test]
    fn brent_handles_cubic() {
        let r = brent_root(|x| ok(x * x * x - x - 1.0), 1.0, 2.0, 1e-12, 100).unwrap();
        assert!((r.x.powi(3) - r.x - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bisection_collapses_to_root() {
        let x = bisect_increasing(|x| x * x * x - 0.125, 0.0, 1.0, 1e-12, 200).unwrap();
        assert!((x - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bisection_reports_iteration_cap() {
        let e = bisect_increasing(|x| x - 0.3, 0.0, 1.0, 1e-12, 5).unwrap_err();
        assert!(matches!(e, Error::DemandNotConverged { iterations: 5, .. }));
    }

    #[test]
    fn finite_differences_of_cubic() {
        let d1 = central_first(|x| ok(x * x * x), 2.0, 1e-5).unwrap();
        let d2 = central_second(|x| ok(x * x * x), 2.0, 1e-4).unwrap();
        assert!((d1 - 12.0).abs() < 1e-8);
        assert!((d2 - 12.0).abs() < 1e-5);
    }
}
