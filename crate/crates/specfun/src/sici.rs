//! Si and Ci evaluation.
//!
//! Two regimes, Taylor below the seam and auxiliary functions above it:
//!   Ci(x) =  f(x) sin x - g(x) cos x
//!   Si(x) =  pi/2 - f(x) cos x - g(x) sin x
//! where f - ig = e^{ix} E1(ix), evaluated by a modified Lentz continued
//! fraction. The seam at x = 8 keeps the branch disagreement ~1e-15.

use crate::{EvalResult, SpecFunError, EULER_GAMMA};

const SEAM: f64 = 8.0;
const EPS: f64 = f64::EPSILON;
const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

/// Si(x) = integral of sin t / t from 0 to x. Odd in x.
pub fn sine_integral(x: f64) -> Result<EvalResult, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::NonFinite(x));
    }
    let ax = x.abs();
    let r = if ax == 0.0 {
        EvalResult::new(0.0, 0.0)
    } else if ax <= SEAM {
        let (si, _, err) = taylor_si_ci(ax);
        EvalResult::new(si, err)
    } else {
        let (f, g, err) = aux_fg(ax);
        let (s, c) = ax.sin_cos();
        EvalResult::new(FRAC_PI_2 - f * c - g * s, err + 2.0 * EPS)
    };
    Ok(if x < 0.0 {
        EvalResult::new(-r.value, r.abs_error_estimate)
    } else {
        r
    })
}

/// Ci(x) = -integral of cos t / t from x to infinity, for x > 0.
pub fn cosine_integral(x: f64) -> Result<EvalResult, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::NonFinite(x));
    }
    if x <= 0.0 {
        return Err(SpecFunError::OutOfDomain { what: "Ci", x });
    }
    if x <= SEAM {
        let (_, ci, err) = taylor_si_ci(x);
        Ok(EvalResult::new(ci, err))
    } else {
        let (f, g, err) = aux_fg(x);
        let (s, c) = x.sin_cos();
        Ok(EvalResult::new(f * s - g * c, err + 2.0 * EPS))
    }
}

/// Both series share powers of x^2; summed together for x in (0, SEAM].
/// Returns (Si, Ci, error bound).
fn taylor_si_ci(x: f64) -> (f64, f64, f64) {
    let x2 = x * x;
    // Si = sum_{n>=0} (-1)^n x^{2n+1} / ((2n+1)(2n+1)!)
    let mut si = x;
    let mut term_s = x;
    // Ci = gamma + ln x + sum_{n>=1} (-1)^n x^{2n} / (2n (2n)!)
    let mut ci_sum = 0.0;
    let mut term_c = 1.0;
    let mut biggest: f64 = x.abs();
    let mut n = 1.0f64;
    loop {
        // term_c tracks (-1)^n x^{2n} / (2n)!, term_s tracks (-1)^n x^{2n+1} / (2n+1)!
        term_c *= -x2 / ((2.0 * n - 1.0) * (2.0 * n));
        term_s *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
        ci_sum += term_c / (2.0 * n);
        si += term_s / (2.0 * n + 1.0);
        biggest = biggest.max(term_c.abs()).max(term_s.abs());
        if term_c.abs() < 1e-18 && term_s.abs() < 1e-18 {
            break;
        }
        n += 1.0;
        if n > 60.0 {
            break;
        }
    }
    let err = 4.0 * EPS * biggest + 1e-17;
    (si, EULER_GAMMA + x.ln() + ci_sum, err)
}

/// Auxiliary functions via E1(ix) = e^{-ix} * cf where
/// cf = 1/(ix+1 - 1^2/(ix+3 - 2^2/(ix+5 - ...))), so g - if = e^{ix} E1(ix) = cf.
/// Modified Lentz iteration on the complex fraction.
fn aux_fg(x: f64) -> (f64, f64, f64) {
    let tiny = 1e-290;
    // complex scalars as (re, im) pairs
    let zr = 0.0;
    let zi = x;
    let mut b = (zr + 1.0, zi);
    let mut c = (1.0 / tiny, 0.0);
    let mut d = cinv(b);
    let mut h = d;
    let mut i = 1.0f64;
    loop {
        let a = (-i * i, 0.0);
        b = (b.0 + 2.0, b.1);
        d = cinv(cadd(cmul(a, d), b));
        c = cadd(cdiv(a, c), b);
        let del = cmul(c, d);
        h = cmul(h, del);
        let dev = ((del.0 - 1.0).powi(2) + del.1.powi(2)).sqrt();
        i += 1.0;
        if dev < 1e-16 || i > 200.0 {
            break;
        }
    }
    // h = g - i f
    let f = -h.1;
    let g = h.0;
    let err = 8.0 * EPS * (f.abs() + g.abs()) + 1e-17;
    (f, g, err)
}

fn cadd(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 + b.0, a.1 + b.1)
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cinv(a: (f64, f64)) -> (f64, f64) {
    let n = a.0 * a.0 + a.1 * a.1;
    (a.0 / n, -a.1 / n)
}

fn cdiv(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    cmul(a, cinv(b))
}
