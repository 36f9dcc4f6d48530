//! Scalar root finding on a sign-changing bracket.

use crate::error::{Error, Result};

/// A converged root together with the work it took.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

const MAX_ITER: usize = 500;

/// Brent's method (inverse quadratic interpolation, secant and bisection).
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them be zero).
/// Terminates when the bracket is narrower than `2 eps |x| + xtol` or when `f`
/// hits zero exactly.
pub fn brent<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket(format!("NaN at bracket ends [{a}, {b}]")));
    }
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            fx: 0.0,
            iterations: 0,
            bracket: (lo, hi),
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            fx: 0.0,
            iterations: 0,
            bracket: (lo, hi),
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{a}, {b}]: f = ({fa}, {fb})"
        )));
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=MAX_ITER {
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
            return Ok(Root {
                x: b,
                fx: fb,
                iterations: iter,
                bracket: (lo, hi),
            });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
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
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::Bracket(format!("NaN encountered at x = {b}")));
        }
    }
    Err(Error::NoConvergence {
        what: "brent",
        iterations: MAX_ITER,
    })
}

/// Finds a bracket for the root of a function that is increasing on `(0, inf)`,
/// starting from `start > 0` and moving geometrically by factors of two.
pub fn bracket_increasing_positive<F>(f: &mut F, start: f64, max_steps: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut lo = start;
    let mut hi = start;
    let f0 = f(start);
    if f0.is_nan() {
        return Err(Error::Bracket(format!("NaN at starting point {start}")));
    }
    if f0 < 0.0 {
        for _ in 0..max_steps {
            lo = hi;
            hi *= 2.0;
            let v = f(hi);
            if v.is_nan() {
                return Err(Error::Bracket(format!("NaN at {hi}")));
            }
            if v >= 0.0 {
                return Ok((lo, hi));
            }
        }
    } else {
        for _ in 0..max_steps {
            hi = lo;
            lo *= 0.5;
            let v = f(lo);
            if v.is_nan() {
                return Err(Error::Bracket(format!("NaN at {lo}")));
            }
            if v <= 0.0 {
                return Ok((lo, hi));
            }
        }
    }
    Err(Error::Bracket(format!(
        "no sign change within {max_steps} doublings of {start}"
    )))
}
