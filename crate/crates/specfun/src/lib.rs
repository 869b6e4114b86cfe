//! Sine/cosine integrals and the oscillatory kernels u, U used by the
//! conductance antiderivatives, plus the real exponential integral E1.
//!
//! Si/Ci use a Taylor series for |x| <= 8 and the auxiliary-function
//! decomposition Ci = f sin - g cos, si = -f cos - g sin for |x| > 8,
//! with f, g evaluated by a modified Lentz continued fraction. The two
//! branches agree to ~1e-15 at the seam.

mod e1;
mod sici;

pub use e1::exp_integral_e1;
pub use sici::{cosine_integral, sine_integral};

/// A function value together with a conservative absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    /// Upper bound on |value - truth| from truncation plus rounding.
    pub abs_error_estimate: f64,
}

impl EvalResult {
    pub(crate) fn new(value: f64, abs_error_estimate: f64) -> Self {
        debug_assert!(abs_error_estimate >= 0.0);
        Self {
            value,
            abs_error_estimate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SpecFunError {
    #[error("non-finite input {0}")]
    NonFinite(f64),
    #[error("{what} is undefined at x = {x}")]
    OutOfDomain { what: &'static str, x: f64 },
}

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// u(x) = cos x / x^3 - sin x / x^4. Odd; behaves as -1/(3x) near 0.
pub fn u_kernel(x: f64) -> Result<f64, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::NonFinite(x));
    }
    if x == 0.0 {
        return Err(SpecFunError::OutOfDomain { what: "u", x });
    }
    let ax = x.abs();
    let v = if ax < 1.0 {
        // (x cos x - sin x)/x^4 = sum_{n>=1} (-1)^n (2n)/(2n+1)! x^{2n-3};
        // the direct form loses all digits as x -> 0. Ratio of consecutive
        // terms is -x^2 / (2n(2n+3)).
        let x2 = ax * ax;
        let mut t = -1.0 / (3.0 * ax);
        let mut sum = t;
        let mut n = 1.0f64;
        loop {
            t *= -x2 / (2.0 * n * (2.0 * n + 3.0));
            sum += t;
            n += 1.0;
            if t.abs() < 1e-18 * sum.abs().max(1e-300) || n > 40.0 {
                break;
            }
        }
        sum
    } else {
        ax.cos() / (ax * ax * ax) - ax.sin() / (ax * ax * ax * ax)
    };
    Ok(if x < 0.0 { -v } else { v })
}

/// U(x) = -cos x/(3x^2) - Ci(x)/3 + sin x/(3x^3) + sin x/(3x).
/// Even; U' = u for x > 0; log-singular at 0.
pub fn u_antiderivative(x: f64) -> Result<f64, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::NonFinite(x));
    }
    if x == 0.0 {
        return Err(SpecFunError::OutOfDomain { what: "U", x });
    }
    let ax = x.abs();
    if ax < 1e-2 {
        // fused expansion; the 1/x^2 and 1/x^3 cancellations are exact here
        let x2 = ax * ax;
        return Ok(4.0 / 9.0 - EULER_GAMMA / 3.0 - ax.ln() / 3.0 + x2 / 60.0
            - x2 * x2 / 3360.0);
    }
    let ci = cosine_integral(ax)?.value;
    let (s, c) = ax.sin_cos();
    Ok(-c / (3.0 * ax * ax) - ci / 3.0 + s / (3.0 * ax * ax * ax) + s / (3.0 * ax))
}

/// ∫_X^∞ cos(ux)/x² dx for u ≥ 0, X > 0. Even continuation in u.
pub fn cos_tail_over_x2(u: f64, x: f64) -> Result<f64, SpecFunError> {
    if !u.is_finite() || !x.is_finite() {
        return Err(SpecFunError::NonFinite(u + x));
    }
    if x <= 0.0 {
        return Err(SpecFunError::OutOfDomain { what: "cos_tail_over_x2", x });
    }
    let u = u.abs();
    if u == 0.0 {
        return Ok(1.0 / x);
    }
    // integrate by parts once: cos(ux)/x - u * int sin/x = cos(uX)/X - u(pi/2 - Si(uX))
    let si = sine_integral(u * x)?.value;
    Ok((u * x).cos() / x - u * (std::f64::consts::FRAC_PI_2 - si))
}

/// ∫_X^∞ sin(vx)/x³ dx; odd in v.
pub fn sin_tail_over_x3(v: f64, x: f64) -> Result<f64, SpecFunError> {
    if !v.is_finite() || !x.is_finite() {
        return Err(SpecFunError::NonFinite(v + x));
    }
    if x <= 0.0 {
        return Err(SpecFunError::OutOfDomain { what: "sin_tail_over_x3", x });
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let (s, a) = (v.signum(), v.abs());
    Ok(s * ((a * x).sin() / (2.0 * x * x) + 0.5 * a * cos_tail_over_x2(a, x)?))
}
