use crate::solve::Propagation;
use crate::PotentialSpec;

/// Negative-energy spectrum summary; count always equals energies.len().
#[derive(Debug, Clone, PartialEq)]
pub struct BoundStateReport {
    pub count: usize,
    pub energies: Vec<f64>,
}

fn step_for(spec: &PotentialSpec) -> f64 {
    let [a, b] = spec.support;
    (0.01f64).min((b - a) / 2000.0)
}

/// Sturm count: nodes of the E = 0 solution started as (1, 0) at the left
/// edge, plus one when the exit log-derivative is negative (a decaying match
/// at E -> 0^- still fits below it).
fn zero_energy_count(spec: &PotentialSpec) -> usize {
    let prop = Propagation::run(spec, 0.0, step_for(spec))
        .expect("validated potentials have finite samples");
    let psi: Vec<f64> = prop.trace_first_component(1.0, 0.0).collect();
    let mut n = psi.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    let m = prop.final_matrix();
    // psi(b) = m00, psi'(b) = m10 for the (1, 0) start
    if m[0] * m[2] < 0.0 {
        n += 1;
    }
    n
}

/// Matching determinant at E = -kappa^2: propagate the left-decaying start
/// (1, kappa) and demand the right-decaying log-derivative -kappa at exit.
fn mismatch(spec: &PotentialSpec, kappa: f64) -> f64 {
    let prop = Propagation::run(spec, kappa * kappa, step_for(spec))
        .expect("validated potentials have finite samples");
    let m = prop.final_matrix();
    let psi_b = m[0] + kappa * m[1];
    let dpsi_b = m[2] + kappa * m[3];
    dpsi_b + kappa * psi_b
}

fn bisect(spec: &PotentialSpec, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = mismatch(spec, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn detect_bound_states(spec: &PotentialSpec) -> BoundStateReport {
    let target = zero_energy_count(spec);
    if target == 0 {
        return BoundStateReport { count: 0, energies: Vec::new() };
    }

    // kappa is capped by the depth: E >= min(alpha V) strictly
    let [a, b] = spec.support;
    let mut depth = 0.0f64;
    let n_probe = 4000;
    for i in 0..=n_probe {
        let x = a + (b - a) * i as f64 / n_probe as f64;
        depth = depth.min(spec.evaluate(x));
    }
    if depth >= 0.0 {
        return BoundStateReport { count: 0, energies: Vec::new() };
    }
    let kappa_max = (-depth).sqrt();

    let mut kappas = Vec::with_capacity(target);
    let mut n_scan = 64.max(16 * target);
    for _round in 0..5 {
        kappas.clear();
        let lo_edge = 1e-8;
        let hi_edge = kappa_max * (1.0 - 1e-12);
        let mut prev_k = lo_edge;
        let mut prev_f = mismatch(spec, prev_k);
        for i in 1..=n_scan {
            let k = lo_edge + (hi_edge - lo_edge) * i as f64 / n_scan as f64;
            let f = mismatch(spec, k);
            if prev_f == 0.0 {
                kappas.push(prev_k);
            } else if f * prev_f < 0.0 {
                kappas.push(bisect(spec, prev_k, k, prev_f));
            }
            prev_k = k;
            prev_f = f;
        }
        if kappas.len() >= target {
            break;
        }
        n_scan *= 2;
    }

    let mut energies: Vec<f64> = kappas.iter().map(|k| -k * k).collect();
    energies.sort_by(|p, q| p.partial_cmp(q).expect("energies are finite"));
    BoundStateReport { count: energies.len(), energies }
}
