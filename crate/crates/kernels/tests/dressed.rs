//! Dressed-kernel assembly against direct band integrals and the closed
//! free forms, plus the ladder validation contract.

use kernels::{
    assemble_dressed_correction, assemble_dressed_kernel, free_f, interacting_f, kernel_b,
    kernel_re_b, AssembleError, DiagonalConvention, FermiData, KernelField,
};
use num_complex::Complex64;
use quadrature::{integrate_adaptive, QuadratureOptions};
use scattering1d::{solve_scattering_state, PotentialSpec, ScatteringState, Shape, SpatialGrid};
use std::f64::consts::PI;
use std::sync::OnceLock;

fn free_spec() -> PotentialSpec {
    PotentialSpec::new(Shape::Square { height: 1.0 }, [-1.0, 1.0], 0.0).unwrap()
}

fn barrier(alpha: f64) -> PotentialSpec {
    PotentialSpec::new(Shape::Square { height: 1.0 }, [-1.0, 1.0], alpha).unwrap()
}

fn ladder_states(
    spec: &PotentialSpec,
    grid: &SpatialGrid,
    kappa: f64,
    dk: f64,
    steps: usize,
) -> Vec<ScatteringState> {
    let mut out = Vec::with_capacity(2 * (steps + 1));
    for j in 0..=steps {
        let k = kappa + j as f64 * dk;
        for signed in [k, -k] {
            out.push(solve_scattering_state(spec, signed, grid).unwrap());
        }
    }
    out
}

// ladder reaching k = 3 in steps of 1e-4: fine enough for 1e-8 band matches
fn fine() -> &'static (SpatialGrid, Vec<ScatteringState>) {
    static FINE: OnceLock<(SpatialGrid, Vec<ScatteringState>)> = OnceLock::new();
    FINE.get_or_init(|| {
        let grid = SpatialGrid::symmetric(3.0, 0.5).unwrap();
        let states = ladder_states(&free_spec(), &grid, 1e-3, 1e-4, 29_990);
        (grid, states)
    })
}

// band edges sit midway between ladder nodes so the sharp cutoffs cost O(dk^2)
const K_LEAD_L: f64 = 0.90005;
const K_LEAD_R: f64 = 0.70005;

fn leads() -> FermiData {
    FermiData::new(K_LEAD_L * K_LEAD_L, K_LEAD_R * K_LEAD_R).unwrap()
}

#[test]
fn sign_multiplier_matches_the_direct_band_integral() {
    let (grid, states) = fine();
    let field = assemble_dressed_kernel(states, |k| k.signum(), grid, 3.0).unwrap();
    let xs = grid.points();
    let band_a = |d: f64| {
        if d == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, (1.0 - (3.0 * d).cos()) / (PI * d))
        }
    };
    // independent route: quadrature of the defining integral at one separation
    let q = integrate_adaptive(|k: f64| (1.7 * k).sin(), 0.0, 3.0, &QuadratureOptions::default())
        .unwrap()
        .value;
    assert!((q / PI - band_a(1.7).im).abs() < 1e-12);

    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            let want = band_a(x - y);
            assert!(
                (field.value(i, j) - want).norm() < 1e-8,
                "({x}, {y}): {} vs {want}",
                field.value(i, j)
            );
        }
    }
}

#[test]
fn band_multiplier_matches_the_occupied_propagator() {
    let (grid, states) = fine();
    let fermi = leads();
    let occupied = move |k: f64| {
        if k > -K_LEAD_R && k < K_LEAD_L {
            1.0
        } else {
            0.0
        }
    };
    let field = assemble_dressed_kernel(states, occupied, grid, 3.0 * K_LEAD_L).unwrap();
    let xs = grid.points();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            // e^{+ikx} assembly realizes the transpose of the e^{-ikx} form
            let want = kernel_b(y, x, &fermi);
            assert!(
                (field.value(i, j) - want).norm() < 1e-8,
                "({x}, {y}): {} vs {want}",
                field.value(i, j)
            );
        }
    }
}

#[test]
fn symmetrized_band_multiplier_matches_re_b() {
    let (grid, states) = fine();
    let fermi = leads();
    let half_sum = |k: f64| {
        let inside = |edge: f64| if k.abs() < edge { 0.5 } else { 0.0 };
        inside(K_LEAD_L) + inside(K_LEAD_R)
    };
    let field = assemble_dressed_kernel(states, half_sum, grid, 3.0 * K_LEAD_L).unwrap();
    let xs = grid.points();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            let want = Complex64::new(kernel_re_b(x, y, &fermi), 0.0);
            assert!((field.value(i, j) - want).norm() < 1e-8);
        }
    }
}

#[test]
fn zero_multiplier_gives_the_zero_kernel() {
    let grid = SpatialGrid::symmetric(3.0, 0.5).unwrap();
    let states = ladder_states(&free_spec(), &grid, 1e-3, 0.01, 300);
    let field = assemble_dressed_kernel(&states, |_| 0.0, &grid, 3.0).unwrap();
    assert!(field.values().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn dressed_kernel_is_hermitian_and_additive() {
    let grid = SpatialGrid::symmetric(3.0, 0.5).unwrap();
    let states = ladder_states(&barrier(0.2), &grid, 1e-3, 0.01, 300);
    let sign = assemble_dressed_kernel(&states, |k| k.signum(), &grid, 3.0).unwrap();
    assert!(sign.hermiticity_defect() < 1e-12);

    let band = assemble_dressed_kernel(&states, |k| f64::from(k.abs() < 1.0), &grid, 3.0).unwrap();
    assert!(band.hermiticity_defect() < 1e-12);

    let both =
        assemble_dressed_kernel(&states, |k| k.signum() + f64::from(k.abs() < 1.0), &grid, 3.0)
            .unwrap();
    let n = grid.points().len();
    for i in 0..n {
        for j in 0..n {
            let sum = sign.value(i, j) + band.value(i, j);
            assert!((both.value(i, j) - sum).norm() < 1e-12);
        }
    }
}

#[test]
fn correction_form_returns_the_free_parts_exactly_at_zero_coupling() {
    let grid = SpatialGrid::symmetric(3.0, 0.5).unwrap();
    let states = ladder_states(&free_spec(), &grid, 1e-3, 0.01, 300);
    let fermi = leads();

    let full_line_a = |d: f64| {
        if d == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0 / (PI * d))
        }
    };
    let ka = assemble_dressed_correction(
        &states,
        |k| k.signum(),
        full_line_a,
        &grid,
        3.0,
        DiagonalConvention::PrincipalValueZero,
    )
    .unwrap();
    let occupied = |k: f64| f64::from(k > -K_LEAD_R && k < K_LEAD_L);
    let kb = assemble_dressed_correction(
        &states,
        occupied,
        |d| kernel_b(0.0, d, &fermi),
        &grid,
        3.0 * K_LEAD_L,
        DiagonalConvention::AnalyticLimit,
    )
    .unwrap();

    let xs = grid.points();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            if i == j {
                assert_eq!(ka.value(i, i).norm(), 0.0);
                assert!((kb.value(i, i) - kernel_b(x, x, &fermi)).norm() < 1e-13);
            } else {
                assert!((ka.value(i, j) - full_line_a(x - y)).norm() < 1e-13);
                assert!((kb.value(i, j) - kernel_b(y, x, &fermi)).norm() < 1e-13);
            }
        }
    }
}

#[test]
fn interacting_f_reduces_to_the_free_correlation_at_zero_coupling() {
    let grid = SpatialGrid::symmetric(3.0, 0.5).unwrap();
    let states = ladder_states(&free_spec(), &grid, 1e-3, 0.01, 300);
    let fermi = leads();
    let (ka, kb) = correction_pair(&states, &grid, &fermi, 3.0);
    let f = interacting_f(&ka, &kb).unwrap();
    assert_eq!(f.convention(), DiagonalConvention::PrincipalValueZero);

    let xs = grid.points();
    let mut checked = 0;
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            let v = f.value(i, j);
            assert_eq!(v.re, 0.0);
            let d = (x - y).abs();
            if !(0.5..=5.0).contains(&d) {
                continue;
            }
            let want = free_f(x, y, &fermi).unwrap();
            if want.norm() > 1e-10 {
                assert!((v - want).norm() < 1e-6 * want.norm(), "({x}, {y})");
            } else {
                assert!((v - want).norm() < 1e-12);
            }
            checked += 1;
        }
    }
    assert!(checked > 50);

    let other = SpatialGrid::symmetric(3.0, 1.0).unwrap();
    let small = ladder_states(&free_spec(), &other, 1e-3, 0.01, 300);
    let (ka2, _) = correction_pair(&small, &other, &fermi, 3.0);
    assert!(interacting_f(&ka2, &kb).is_err());
}

// A-type and symmetrized B-type corrections over one state ladder
fn correction_pair(
    states: &[ScatteringState],
    grid: &SpatialGrid,
    fermi: &FermiData,
    band: f64,
) -> (KernelField, KernelField) {
    let full_line_a = |d: f64| {
        if d == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0 / (PI * d))
        }
    };
    let ka = assemble_dressed_correction(
        states,
        |k| k.signum(),
        full_line_a,
        grid,
        band,
        DiagonalConvention::PrincipalValueZero,
    )
    .unwrap();
    let (kl, kr) = (fermi.k_l, fermi.k_r);
    let half_sum = move |k: f64| 0.5 * (f64::from(k.abs() < kl) + f64::from(k.abs() < kr));
    let free_re_b = {
        let fermi = *fermi;
        move |d: f64| Complex64::new(kernel_re_b(0.0, d, &fermi), 0.0)
    };
    let kb = assemble_dressed_correction(
        states,
        half_sum,
        free_re_b,
        grid,
        band,
        DiagonalConvention::AnalyticLimit,
    )
    .unwrap();
    (ka, kb)
}

#[test]
fn interacting_f_is_unchanged_under_lead_exchange() {
    let grid = SpatialGrid::symmetric(3.0, 0.5).unwrap();
    let states = ladder_states(&barrier(0.2), &grid, 1e-3, 0.01, 300);
    let (kl, kr) = (K_LEAD_L, K_LEAD_R);

    let build = |a: f64, b: f64| {
        let half_sum = move |k: f64| 0.5 * (f64::from(k.abs() < a) + f64::from(k.abs() < b));
        let free_re_b = move |d: f64| {
            let s = if d == 0.0 {
                (a + b) / (2.0 * PI)
            } else {
                ((a * d).sin() + (b * d).sin()) / (2.0 * PI * d)
            };
            Complex64::new(s, 0.0)
        };
        assemble_dressed_correction(
            &states,
            half_sum,
            free_re_b,
            &grid,
            3.0,
            DiagonalConvention::AnalyticLimit,
        )
        .unwrap()
    };
    let kb = build(kl, kr);
    let kb_swapped = build(kr, kl);
    let full_line_a = |d: f64| {
        if d == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0 / (PI * d))
        }
    };
    let ka = assemble_dressed_correction(
        &states,
        |k| k.signum(),
        full_line_a,
        &grid,
        3.0,
        DiagonalConvention::PrincipalValueZero,
    )
    .unwrap();

    let f = interacting_f(&ka, &kb).unwrap();
    let f_swapped = interacting_f(&ka, &kb_swapped).unwrap();
    let n = grid.points().len();
    for i in 0..n {
        for j in 0..n {
            assert!((f.value(i, j) - f_swapped.value(i, j)).norm() < 1e-15);
        }
    }
}

#[test]
fn band_truncation_error_halves_when_the_band_doubles() {
    let grid = SpatialGrid::symmetric(3.0, 0.5).unwrap();
    let spec = barrier(0.2);
    let k_f = 0.996;
    let fermi = FermiData::new(k_f * k_f, k_f * k_f).unwrap();

    let f_at = |spec: &PotentialSpec, steps: usize| {
        let states = ladder_states(spec, &grid, 1e-3, 0.01, steps);
        let top = 1e-3 + steps as f64 * 0.01;
        let (ka, kb) = correction_pair(&states, &grid, &fermi, top);
        interacting_f(&ka, &kb).unwrap()
    };
    let worst_against = |field: &KernelField, reference: &KernelField| {
        let n = grid.points().len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((field.value(i, j) - reference.value(i, j)).norm());
            }
        }
        worst
    };

    // at zero coupling the closed-form split leaves no band dependence at all
    let free = free_spec();
    let free_exact = f_at(&free, 800);
    assert_eq!(worst_against(&f_at(&free, 200), &free_exact), 0.0);
    assert_eq!(worst_against(&f_at(&free, 400), &free_exact), 0.0);

    // with coupling the leftover tail is a 1/k phase term, so one doubling
    // approaches 2x only from below; two doublings clear it
    let reference = f_at(&spec, 1600);
    let at_two = worst_against(&f_at(&spec, 200), &reference);
    let at_eight = worst_against(&f_at(&spec, 800), &reference);
    assert!(at_two > 1e-10, "truncation error should be visible, got {at_two}");
    assert!(at_eight <= at_two / 2.0, "{at_eight} vs {at_two}");
}

#[test]
fn node_ladder_is_validated() {
    let grid = SpatialGrid::symmetric(3.0, 0.5).unwrap();
    let spec = free_spec();
    let sgn = |k: f64| k.signum();

    let few = ladder_states(&spec, &grid, 1e-3, 0.01, 1);
    assert!(matches!(
        assemble_dressed_kernel(&few, sgn, &grid, 3.0),
        Err(AssembleError::TooFewStates(..))
    ));

    let mut states = ladder_states(&spec, &grid, 1e-3, 0.01, 300);
    let other = SpatialGrid::symmetric(2.0, 0.5).unwrap();
    states[0] = solve_scattering_state(&spec, states[0].k, &other).unwrap();
    assert!(matches!(
        assemble_dressed_kernel(&states, sgn, &grid, 3.0),
        Err(AssembleError::GridMismatch(..))
    ));

    let mut states = ladder_states(&spec, &grid, 1e-3, 0.01, 300);
    states.pop();
    assert!(matches!(
        assemble_dressed_kernel(&states, sgn, &grid, 3.0),
        Err(AssembleError::AsymmetricNodes(..))
    ));

    let mut states = ladder_states(&spec, &grid, 1e-3, 0.01, 300);
    for s in states.iter_mut().filter(|s| (s.k.abs() - 1.501).abs() < 1e-9) {
        *s = solve_scattering_state(&spec, s.k.signum() * 1.5037, &grid).unwrap();
    }
    assert!(matches!(
        assemble_dressed_kernel(&states, sgn, &grid, 3.0),
        Err(AssembleError::NonUniformNodes(..))
    ));

    let gapped = ladder_states(&spec, &grid, 0.05, 0.01, 300);
    assert!(matches!(
        assemble_dressed_kernel(&gapped, sgn, &grid, 3.0),
        Err(AssembleError::GapAtThreshold(..))
    ));

    let states = ladder_states(&spec, &grid, 1e-3, 0.01, 300);
    assert!(matches!(
        assemble_dressed_kernel(&states, sgn, &grid, 5.0),
        Err(AssembleError::InsufficientBand { .. })
    ));

    let coarse = ladder_states(&spec, &grid, 1e-3, 0.5, 6);
    assert!(matches!(
        assemble_dressed_kernel(&coarse, sgn, &grid, 3.0),
        Err(AssembleError::SpacingAliases { .. })
    ));
}
