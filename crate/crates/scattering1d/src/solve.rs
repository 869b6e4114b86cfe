use num_complex::Complex64;

use crate::PotentialSpec;

/// States below this |k| sit too close to the k = 0 threshold to resolve.
pub const K_MIN: f64 = 1e-3;

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("|k| = {0:e} is inside the near-threshold window |k| < 1e-3")]
    NearThreshold(f64),
    #[error("potential sample at x = {0} is not finite")]
    NonFiniteSample(f64),
}

#[derive(Debug, thiserror::Error)]
pub enum GridError {
    #[error("grid extent {0} must be positive and finite")]
    BadExtent(f64),
    #[error("grid spacing {0} must be positive and no larger than the extent")]
    BadSpacing(f64),
    #[error("wavenumber {0} must be positive and finite")]
    BadWavenumber(f64),
}

/// Uniform symmetric grid on [-X, X]; 0 is always a grid point.
#[derive(Debug, Clone)]
pub struct SpatialGrid {
    points: Vec<f64>,
    extent: f64,
    spacing: f64,
}

impl SpatialGrid {
    /// Snaps the spacing so that points land exactly on -X, 0, X.
    pub fn symmetric(extent: f64, spacing: f64) -> Result<Self, GridError> {
        if !(extent.is_finite() && extent > 0.0) {
            return Err(GridError::BadExtent(extent));
        }
        if !(spacing.is_finite() && spacing > 0.0 && spacing <= extent) {
            return Err(GridError::BadSpacing(spacing));
        }
        // snapping may only shrink the spacing, never widen it
        let mut half = (extent / spacing).ceil() as usize;
        if half == 0 {
            half = 1;
        }
        let h = extent / half as f64;
        let n = 2 * half;
        let points = (0..=n).map(|i| (i as f64 - half as f64) * h).collect();
        Ok(Self { points, extent, spacing: h })
    }

    /// Extent clears the support by a decay window of 40 wavelengths-at-k_F,
    /// spacing resolves the largest wavenumber with 8 points per half period.
    pub fn default_for(
        spec: &PotentialSpec,
        k_fermi: f64,
        k_max: f64,
    ) -> Result<Self, GridError> {
        if !(k_fermi.is_finite() && k_fermi > 0.0) {
            return Err(GridError::BadWavenumber(k_fermi));
        }
        if !(k_max.is_finite() && k_max > 0.0) {
            return Err(GridError::BadWavenumber(k_max));
        }
        let [a, b] = spec.support;
        let extent = a.abs().max(b.abs()) + 40.0 / k_fermi;
        Self::symmetric(extent, std::f64::consts::PI / (8.0 * k_max))
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }
}

/// Transmission and reflection seen from the incidence side encoded in sign(k).
#[derive(Debug, Clone, Copy)]
pub struct Amplitudes {
    pub transmission: Complex64,
    pub reflection: Complex64,
}

/// One scattering state sampled on a shared grid. Outside the support the
/// samples are the exact plane-wave asymptotics built from (t, r).
#[derive(Debug, Clone)]
pub struct ScatteringState {
    pub k: f64,
    pub transmission: Complex64,
    pub reflection: Complex64,
    pub samples: Vec<Complex64>,
}

/// Cumulative fundamental matrices of psi'' = q(x) psi across the support,
/// stored at every step end so interior points can be reached by one partial
/// step. Row-major [m00, m01, m10, m11]; det is renormalized to 1 after each
/// step, which the ladder of amplitude identities below relies on.
pub(crate) struct Propagation {
    xs: Vec<f64>,
    mats: Vec<[f64; 4]>,
}

fn rk4_step(m: [f64; 4], h: f64, q0: f64, qm: f64, q1: f64) -> [f64; 4] {
    let f = |q: f64, y: [f64; 4]| [y[2], y[3], q * y[0], q * y[1]];
    let ax = |y: [f64; 4], s: f64, d: [f64; 4]| {
        [y[0] + s * d[0], y[1] + s * d[1], y[2] + s * d[2], y[3] + s * d[3]]
    };
    let k1 = f(q0, m);
    let k2 = f(qm, ax(m, 0.5 * h, k1));
    let k3 = f(qm, ax(m, 0.5 * h, k2));
    let k4 = f(q1, ax(m, h, k3));
    let mut out = m;
    for i in 0..4 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn renormalize_det(m: &mut [f64; 4]) {
    let det = m[0] * m[3] - m[1] * m[2];
    let s = 1.0 / det.sqrt();
    for v in m.iter_mut() {
        *v *= s;
    }
}

fn mat_mul(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

impl Propagation {
    /// Integrates across [a, b] with q(x) = alpha V(x) + q_shift, stepping
    /// uniformly within each linearity segment so kinks land on step ends.
    pub(crate) fn run(
        spec: &PotentialSpec,
        q_shift: f64,
        h_target: f64,
    ) -> Result<Self, SolveError> {
        let [a, b] = spec.support;
        let mut edges = vec![a];
        edges.extend(spec.interior_kinks());
        edges.push(b);

        let n_est = ((b - a) / h_target).ceil() as usize + edges.len() + 2;
        let mut xs = Vec::with_capacity(n_est);
        let mut mats = Vec::with_capacity(n_est);
        xs.push(a);
        mats.push([1.0, 0.0, 0.0, 1.0]);

        let q_at = |x: f64| -> Result<f64, SolveError> {
            let q = spec.evaluate(x) + q_shift;
            if q.is_finite() { Ok(q) } else { Err(SolveError::NonFiniteSample(x)) }
        };

        let mut m = [1.0, 0.0, 0.0, 1.0];
        for seg in edges.windows(2) {
            let (x0, x1) = (seg[0], seg[1]);
            let len = x1 - x0;
            if len <= 0.0 {
                continue;
            }
            let n = (len / h_target).ceil().max(1.0) as usize;
            let h = len / n as f64;
            for i in 0..n {
                let xl = x0 + i as f64 * h;
                let q0 = q_at(xl)?;
                let qm = q_at(xl + 0.5 * h)?;
                let q1 = q_at(xl + h)?;
                m = rk4_step(m, h, q0, qm, q1);
                renormalize_det(&mut m);
                xs.push(if i + 1 == n { x1 } else { xl + h });
                mats.push(m);
            }
        }
        Ok(Self { xs, mats })
    }

    pub(crate) fn final_matrix(&self) -> [f64; 4] {
        *self.mats.last().expect("propagation stores at least the identity")
    }

    /// Cumulative matrix from a to x in [a, b]: stored step end plus one
    /// partial step.
    pub(crate) fn matrix_at(
        &self,
        spec: &PotentialSpec,
        q_shift: f64,
        x: f64,
    ) -> Result<[f64; 4], SolveError> {
        let i = self.xs.partition_point(|&v| v <= x).saturating_sub(1);
        let x0 = self.xs[i];
        let h = x - x0;
        if h == 0.0 {
            return Ok(self.mats[i]);
        }
        let q = |x: f64| -> Result<f64, SolveError> {
            let q = spec.evaluate(x) + q_shift;
            if q.is_finite() { Ok(q) } else { Err(SolveError::NonFiniteSample(x)) }
        };
        let step = rk4_step(
            [1.0, 0.0, 0.0, 1.0],
            h,
            q(x0)?,
            q(x0 + 0.5 * h)?,
            q(x0 + h)?,
        );
        Ok(mat_mul(&step, &self.mats[i]))
    }

    /// ψ values at step ends for the initial data (psi, psi') = (c0, c1).
    pub(crate) fn trace_first_component(&self, c0: f64, c1: f64) -> impl Iterator<Item = f64> + '_ {
        self.mats.iter().map(move |m| m[0] * c0 + m[1] * c1)
    }
}

pub(crate) fn scattering_step(spec: &PotentialSpec, k_abs: f64) -> f64 {
    let [a, b] = spec.support;
    (0.01f64).min((b - a) / 2000.0).min(0.05 / k_abs)
}

struct Solution {
    prop: Option<Propagation>,
    t: Complex64,
    r_left: Complex64,
    r_right: Complex64,
}

/// det M = 1 makes |t|^2 + |r|^2 = 1 and t_left = t_right exact identities;
/// the step error only moves the common phase and the split between t and r.
fn amplitudes_from(m: &[f64; 4], k: f64, a: f64, b: f64) -> (Complex64, Complex64, Complex64) {
    let u = Complex64::new(0.0, k);
    let n = u * m[0] + u * u * m[1] - m[2] - u * m[3];
    let d = u * m[0] - u * u * m[1] - m[2] + u * m[3];
    let r_left = -Complex64::from_polar(1.0, 2.0 * k * a) * n / d;
    let t = 2.0 * u * Complex64::from_polar(1.0, k * (a - b)) / d;
    let nr = u * m[0] - u * u * m[1] + m[2] - u * m[3];
    let r_right = Complex64::from_polar(1.0, -2.0 * k * b) * nr / d;
    (t, r_left, r_right)
}

fn solve(spec: &PotentialSpec, k: f64) -> Result<Solution, SolveError> {
    let k_abs = k.abs();
    if k_abs < K_MIN {
        return Err(SolveError::NearThreshold(k));
    }
    if spec.alpha == 0.0 {
        return Ok(Solution {
            prop: None,
            t: Complex64::new(1.0, 0.0),
            r_left: Complex64::new(0.0, 0.0),
            r_right: Complex64::new(0.0, 0.0),
        });
    }
    let [a, b] = spec.support;
    let prop = Propagation::run(spec, -k_abs * k_abs, scattering_step(spec, k_abs))?;
    let (t, r_left, r_right) = amplitudes_from(&prop.final_matrix(), k_abs, a, b);
    Ok(Solution { prop: Some(prop), t, r_left, r_right })
}

pub fn transmission_reflection(spec: &PotentialSpec, k: f64) -> Result<Amplitudes, SolveError> {
    let sol = solve(spec, k)?;
    Ok(Amplitudes {
        transmission: sol.t,
        reflection: if k > 0.0 { sol.r_left } else { sol.r_right },
    })
}

/// Unit incident amplitude from the left for k > 0, from the right for k < 0.
pub fn solve_scattering_state(
    spec: &PotentialSpec,
    k: f64,
    grid: &SpatialGrid,
) -> Result<ScatteringState, SolveError> {
    let sol = solve(spec, k)?;
    let [a, b] = spec.support;
    let k_abs = k.abs();
    let q_shift = -k_abs * k_abs;
    let wave = |x: f64| Complex64::from_polar(1.0, k * x);

    let (reflection, psi_a, dpsi_a) = if k > 0.0 {
        let pa = wave(a) + sol.r_left * wave(-a);
        let da = Complex64::new(0.0, k) * (wave(a) - sol.r_left * wave(-a));
        (sol.r_left, pa, da)
    } else {
        let pa = sol.t * wave(a);
        (sol.r_right, pa, Complex64::new(0.0, k) * pa)
    };

    let mut samples = Vec::with_capacity(grid.points().len());
    for &x in grid.points() {
        let v = if x <= a {
            if k > 0.0 { wave(x) + sol.r_left * wave(-x) } else { sol.t * wave(x) }
        } else if x >= b {
            if k > 0.0 { sol.t * wave(x) } else { wave(x) + sol.r_right * wave(-x) }
        } else {
            match &sol.prop {
                None => wave(x),
                Some(prop) => {
                    let m = prop.matrix_at(spec, q_shift, x)?;
                    m[0] * psi_a + m[1] * dpsi_a
                }
            }
        };
        samples.push(v);
    }
    Ok(ScatteringState { k, transmission: sol.t, reflection, samples })
}
