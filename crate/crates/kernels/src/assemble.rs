use crate::field::{DiagonalConvention, KernelField};
use num_complex::Complex64;
use scattering1d::{ScatteringState, SpatialGrid, K_MIN};
use std::f64::consts::PI;
use thiserror::Error;

const MIN_PER_SIDE: usize = 3;

#[derive(Debug, Error)]
pub enum AssembleError {
    #[error("need at least {MIN_PER_SIDE} states per propagation side, got {0} left-moving and {1} right-moving")]
    TooFewStates(usize, usize),
    #[error("state at k = {0} carries {1} samples for a {2}-point grid")]
    GridMismatch(f64, usize, usize),
    #[error("k nodes are not mirror-symmetric around zero near |k| = {0}")]
    AsymmetricNodes(f64),
    #[error("k nodes are not uniformly spaced: step {0} where {1} expected")]
    NonUniformNodes(f64, f64),
    #[error("innermost node {0} sits too far above the solver threshold {1}")]
    GapAtThreshold(f64, f64),
    #[error("k nodes reach only {got}, need {need}")]
    InsufficientBand { got: f64, need: f64 },
    #[error("k spacing {spacing} aliases on this grid, limit {limit}")]
    SpacingAliases { spacing: f64, limit: f64 },
}

/// Trapezoid weights for the signed k-ladder, one (state index, weight) pair
/// per node. The solver cannot reach (-K_MIN, K_MIN); that hole is closed by
/// linear extrapolation from the two innermost nodes of each side, which
/// shifts their weights by +(kappa + kappa^2/2dk) and -kappa^2/2dk.
fn node_plan(
    states: &[ScatteringState],
    grid: &SpatialGrid,
    required_band: f64,
) -> Result<Vec<(usize, f64)>, AssembleError> {
    let n_samples = grid.points().len();
    for s in states {
        if s.samples.len() != n_samples {
            return Err(AssembleError::GridMismatch(s.k, s.samples.len(), n_samples));
        }
    }
    let mut order: Vec<usize> = (0..states.len()).collect();
    order.sort_by(|&a, &b| states[a].k.total_cmp(&states[b].k));
    let pos: Vec<usize> = order.iter().copied().filter(|&i| states[i].k > 0.0).collect();
    let neg: Vec<usize> = order.iter().copied().filter(|&i| states[i].k < 0.0).collect();
    if pos.len() < MIN_PER_SIDE || neg.len() < MIN_PER_SIDE {
        return Err(AssembleError::TooFewStates(neg.len(), pos.len()));
    }
    if pos.len() != neg.len() {
        return Err(AssembleError::AsymmetricNodes(states[pos[0]].k));
    }
    let m = pos.len();
    for (i, &p) in pos.iter().enumerate() {
        let kp = states[p].k;
        let km = -states[neg[m - 1 - i]].k;
        if (kp - km).abs() > 1e-9 * kp.max(1.0) {
            return Err(AssembleError::AsymmetricNodes(kp));
        }
    }
    let ks: Vec<f64> = pos.iter().map(|&i| states[i].k).collect();
    let dk = ks[1] - ks[0];
    for pair in ks.windows(2) {
        let step = pair[1] - pair[0];
        if (step - dk).abs() > 1e-9 * dk {
            return Err(AssembleError::NonUniformNodes(step, dk));
        }
    }
    let kappa = ks[0];
    if kappa > 2.0 * K_MIN {
        return Err(AssembleError::GapAtThreshold(kappa, K_MIN));
    }
    let top = ks[m - 1];
    if top + 1e-12 < required_band {
        return Err(AssembleError::InsufficientBand { got: top, need: required_band });
    }
    // keep the aliasing length of the k-comb beyond the grid diameter
    let limit = PI / (4.0 * grid.extent());
    if dk > limit {
        return Err(AssembleError::SpacingAliases { spacing: dk, limit });
    }

    let mut weights = vec![dk; m];
    weights[0] = 0.5 * dk + kappa + kappa * kappa / (2.0 * dk);
    weights[1] -= kappa * kappa / (2.0 * dk);
    weights[m - 1] = 0.5 * dk;

    let mut plan = Vec::with_capacity(2 * m);
    for (i, &w) in weights.iter().enumerate() {
        plan.push((pos[i], w));
        plan.push((neg[m - 1 - i], w));
    }
    Ok(plan)
}

/// Sum_k w_k m(k) psi_k(x) conj(psi_k(y)) / 2pi over the supplied states.
///
/// The node ladder must be mirror-symmetric, per-side uniform, start within
/// twice the solver threshold, and reach `required_band`. A sharp multiplier
/// truncated at the ladder top leaves a non-decaying ringing term; use
/// [`assemble_dressed_correction`] when the full-line closed form of the
/// zero-coupling part is known.
pub fn assemble_dressed_kernel(
    states: &[ScatteringState],
    multiplier: impl Fn(f64) -> f64,
    grid: &SpatialGrid,
    required_band: f64,
) -> Result<KernelField, AssembleError> {
    let plan = node_plan(states, grid, required_band)?;
    let n = grid.points().len();
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    for (idx, w) in plan {
        let s = &states[idx];
        let scale = w * multiplier(s.k) / (2.0 * PI);
        if scale == 0.0 {
            continue;
        }
        for i in 0..n {
            let si = s.samples[i];
            for j in 0..n {
                // product before scaling keeps the sum exactly Hermitian
                values[i * n + j] += scale * (si * s.samples[j].conj());
            }
        }
    }
    Ok(KernelField::from_values(grid.clone(), values, DiagonalConvention::AnalyticLimit))
}

/// Full-line dressed kernel split as free closed form plus scattering
/// correction: free_part(x - y) + sum_k w_k m(k) [psi psi* - phi phi*] / 2pi
/// with phi the plane wave at the same node.
///
/// The correction integrand decays in k, so the ladder truncation error
/// shrinks with the band where the raw sum's would not; at zero coupling the
/// correction cancels node by node and the free part is returned exactly.
pub fn assemble_dressed_correction(
    states: &[ScatteringState],
    multiplier: impl Fn(f64) -> f64,
    free_part: impl Fn(f64) -> Complex64,
    grid: &SpatialGrid,
    required_band: f64,
    convention: DiagonalConvention,
) -> Result<KernelField, AssembleError> {
    let plan = node_plan(states, grid, required_band)?;
    let xs = grid.points();
    let n = xs.len();
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    let mut plane = vec![Complex64::new(0.0, 0.0); n];
    for (idx, w) in plan {
        let s = &states[idx];
        let scale = w * multiplier(s.k) / (2.0 * PI);
        if scale == 0.0 {
            continue;
        }
        for (p, &x) in plane.iter_mut().zip(xs) {
            *p = Complex64::from_polar(1.0, s.k * x);
        }
        for i in 0..n {
            let si = s.samples[i];
            let pi_ = plane[i];
            for j in 0..n {
                let d = si * s.samples[j].conj() - pi_ * plane[j].conj();
                values[i * n + j] += scale * d;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                values[i * n + j] += free_part(xs[i] - xs[j]);
            }
        }
    }
    match convention {
        DiagonalConvention::AnalyticLimit => {
            let f0 = free_part(0.0);
            for i in 0..n {
                values[i * n + i] += f0;
            }
        }
        DiagonalConvention::PrincipalValueZero => {
            for i in 0..n {
                values[i * n + i] = Complex64::new(0.0, 0.0);
            }
        }
    }
    Ok(KernelField::from_values(grid.clone(), values, convention))
}
