//! Real exponential integral E1(x) = integral of e^{-t}/t from x to infinity.

use crate::{EvalResult, SpecFunError, EULER_GAMMA};

/// E1 for x > 0. Series below 1, continued fraction above.
pub fn exp_integral_e1(x: f64) -> Result<EvalResult, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::NonFinite(x));
    }
    if x <= 0.0 {
        return Err(SpecFunError::OutOfDomain { what: "E1", x });
    }
    if x <= 1.0 {
        // E1 = -gamma - ln x + sum_{n>=1} (-1)^{n+1} x^n / (n n!)
        let mut term = 1.0;
        let mut sum = 0.0;
        let mut n = 1.0f64;
        loop {
            term *= -x / n;
            sum -= term / n;
            if term.abs() < 1e-18 {
                break;
            }
            n += 1.0;
            if n > 60.0 {
                break;
            }
        }
        Ok(EvalResult::new(
            -EULER_GAMMA - x.ln() + sum,
            4.0 * f64::EPSILON * (1.0 + x.ln().abs()) + 1e-17,
        ))
    } else {
        // E1(x) = e^{-x} / (x+1 - 1^2/(x+3 - 2^2/(x+5 - ...))), modified Lentz
        let tiny = 1e-290;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        let mut i = 1.0f64;
        loop {
            let a = -i * i;
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            i += 1.0;
            if (del - 1.0).abs() < 1e-16 || i > 300.0 {
                break;
            }
        }
        let v = h * (-x).exp();
        Ok(EvalResult::new(v, 8.0 * f64::EPSILON * v.abs() + 1e-300))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        // E1(1) and E1(0.5), 20-digit references
        assert!((exp_integral_e1(1.0).unwrap().value - 0.21938393439552027368).abs() < 1e-15);
        assert!((exp_integral_e1(0.5).unwrap().value - 0.55977359477616081175).abs() < 1e-15);
    }

    #[test]
    fn both_branches_match_references_near_seam() {
        assert!((exp_integral_e1(0.99).unwrap().value - 0.2230998257901772369).abs() < 1e-15);
        assert!((exp_integral_e1(1.01).unwrap().value - 0.21574162379448997481).abs() < 1e-15);
    }

    #[test]
    fn derivative_is_minus_exp_over_x() {
        let h = 1e-6;
        for &x in &[0.3, 2.0, 7.0] {
            let d = (exp_integral_e1(x + h).unwrap().value - exp_integral_e1(x - h).unwrap().value)
                / (2.0 * h);
            assert!((d - (-(-x as f64).exp() / x)).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(exp_integral_e1(0.0).is_err());
        assert!(exp_integral_e1(-2.0).is_err());
    }
}
