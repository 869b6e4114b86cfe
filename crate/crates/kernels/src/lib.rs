//! Two-point kernels of the two-lead free state and their dressed
//! counterparts assembled from scattering states.
//!
//! Closed forms cover the free case: the singular odd kernel A, the occupied
//! band kernel B with its symmetrized real part, and the current-current pair
//! f, F. Dressed kernels are k-quadrature sums m(k) e_k(x) e_k*(y)/2pi over a
//! supplied set of scattering states; [`interacting_f`] combines an A-type
//! and a B-type field into the current correlation kernel.

mod assemble;
mod field;

pub use assemble::{assemble_dressed_correction, assemble_dressed_kernel, AssembleError};
pub use field::{DiagonalConvention, KernelField};
pub use scattering1d::SpatialGrid;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("kernel is singular at coincident points")]
    CoincidentPoints,
    #[error("kernel fields live on different grids")]
    GridMismatch,
}

#[derive(Debug, Error)]
pub enum FermiError {
    #[error("chemical potentials must be finite and positive, got ({0}, {1})")]
    BadPotentials(f64, f64),
    #[error("left lead must not sit below the right lead, got mu_l {0} < mu_r {1}")]
    WrongOrder(f64, f64),
}

/// Lead filling data in units E = k^2: wavenumbers are square roots of the
/// chemical potentials, k_f is their midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermiData {
    pub mu_l: f64,
    pub mu_r: f64,
    pub k_l: f64,
    pub k_r: f64,
    pub k_f: f64,
}

impl FermiData {
    /// Requires mu_l >= mu_r > 0; a reversed bias is expressed by swapping
    /// the leads at the call site, not by reordering here.
    pub fn new(mu_l: f64, mu_r: f64) -> Result<Self, FermiError> {
        if !(mu_l.is_finite() && mu_r.is_finite() && mu_l > 0.0 && mu_r > 0.0) {
            return Err(FermiError::BadPotentials(mu_l, mu_r));
        }
        if mu_l < mu_r {
            return Err(FermiError::WrongOrder(mu_l, mu_r));
        }
        let (k_l, k_r) = (mu_l.sqrt(), mu_r.sqrt());
        Ok(Self { mu_l, mu_r, k_l, k_r, k_f: 0.5 * (k_l + k_r) })
    }

    pub fn symmetric(mu: f64) -> Result<Self, FermiError> {
        Self::new(mu, mu)
    }

    /// Chemical-potential drop driving the current.
    pub fn bias(&self) -> f64 {
        self.mu_l - self.mu_r
    }
}

/// A(x, y) = 1/(i pi (x-y)): purely imaginary, antisymmetric.
pub fn kernel_a(x: f64, y: f64) -> Result<Complex64, KernelError> {
    let d = x - y;
    if d == 0.0 {
        return Err(KernelError::CoincidentPoints);
    }
    Ok(Complex64::new(0.0, -1.0 / (std::f64::consts::PI * d)))
}

/// B(x, y) = sin(k_f d)/(pi d) e^{-i (k_l-k_r) d / 2}: Hermitian, with
/// analytic diagonal (k_l+k_r)/(2 pi). Equals the occupied-band integral
/// over [-k_r, k_l] of e^{-ik(x-y)}/2pi.
pub fn kernel_b(x: f64, y: f64, fermi: &FermiData) -> Complex64 {
    let d = x - y;
    if d == 0.0 {
        return Complex64::new((fermi.k_l + fermi.k_r) / (2.0 * std::f64::consts::PI), 0.0);
    }
    let envelope = (fermi.k_f * d).sin() / (std::f64::consts::PI * d);
    envelope * Complex64::from_polar(1.0, -0.5 * (fermi.k_l - fermi.k_r) * d)
}

/// Symmetrized band kernel [sin(k_l d) + sin(k_r d)]/(2 pi d): real, even,
/// spectral multiplier (chi_{|k|<k_l} + chi_{|k|<k_r})/2.
pub fn kernel_re_b(x: f64, y: f64, fermi: &FermiData) -> f64 {
    let d = x - y;
    if d == 0.0 {
        return (fermi.k_l + fermi.k_r) / (2.0 * std::f64::consts::PI);
    }
    ((fermi.k_l * d).sin() + (fermi.k_r * d).sin()) / (2.0 * std::f64::consts::PI * d)
}

/// Free current correlation f(x, y) = -(i/2 pi^2) [sin(k_l d) + sin(k_r d)]/d^2:
/// purely imaginary and odd in d = x - y.
pub fn free_f(x: f64, y: f64, fermi: &FermiData) -> Result<Complex64, KernelError> {
    let d = x - y;
    if d == 0.0 {
        return Err(KernelError::CoincidentPoints);
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let s = ((fermi.k_l * d).sin() + (fermi.k_r * d).sin()) / (d * d);
    Ok(Complex64::new(0.0, -0.5 * s / pi2))
}

/// Antiderivative of [`free_f`] in y vanishing as |y| -> infinity:
/// (i/2 pi^2) sum_k [k Ci(k|d|) - sin(k d)/d].
pub fn free_f_primitive(x: f64, y: f64, fermi: &FermiData) -> Result<Complex64, KernelError> {
    let d = x - y;
    if d == 0.0 {
        return Err(KernelError::CoincidentPoints);
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let mut acc = 0.0;
    for k in [fermi.k_l, fermi.k_r] {
        let ci = specfun::cosine_integral(k * d.abs())
            .expect("argument is positive for d != 0")
            .value;
        acc += k * ci - (k * d).sin() / d;
    }
    Ok(Complex64::new(0.0, 0.5 * acc / pi2))
}

/// f(x, y) = i Im[KA(y, x) KB(x, y)]: the commutator expectation built from
/// an A-type and a B-type field on one grid.
pub fn interacting_f(ka: &KernelField, kb: &KernelField) -> Result<KernelField, KernelError> {
    if ka.grid().points() != kb.grid().points() {
        return Err(KernelError::GridMismatch);
    }
    let n = ka.grid().points().len();
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let product = ka.value(j, i) * kb.value(i, j);
            values[i * n + j] = Complex64::new(0.0, product.im);
        }
    }
    Ok(KernelField::from_values(
        ka.grid().clone(),
        values,
        DiagonalConvention::PrincipalValueZero,
    ))
}
