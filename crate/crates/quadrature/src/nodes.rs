//! Frozen Gauss-Kronrod 7-15 and Gauss-Legendre 10 nodes and weights on [-1,1],
//! generated once at 40-digit precision from the Jacobi-Kronrod matrix
//! (Laurie's algorithm) and a symmetric eigensolver.

pub const GK15_NODES: [f64; 15] = [
    -0.9914553711208126,
    -0.9491079123427585,
    -0.8648644233597691,
    -0.7415311855993944,
    -0.5860872354676911,
    -0.4058451513773972,
    -0.20778495500789846,
    0.0,
    0.20778495500789846,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
];

pub const GK15_WEIGHTS: [f64; 15] = [
    0.022935322010529224,
    0.06309209262997855,
    0.10479001032225018,
    0.14065325971552592,
    0.1690047266392679,
    0.19035057806478542,
    0.20443294007529889,
    0.20948214108472782,
    0.20443294007529889,
    0.19035057806478542,
    0.1690047266392679,
    0.14065325971552592,
    0.10479001032225018,
    0.06309209262997855,
    0.022935322010529224,
];

/// Weights of the embedded 7-point Gauss rule, indexed against the odd
/// GK15 node positions (1, 3, 5, 7, 9, 11, 13).
pub const G7_WEIGHTS: [f64; 7] = [
    0.12948496616886969,
    0.2797053914892767,
    0.38183005050511894,
    0.4179591836734694,
    0.38183005050511894,
    0.2797053914892767,
    0.12948496616886969,
];

pub const GL10_NODES: [f64; 10] = [
    -0.9739065285171717,
    -0.8650633666889845,
    -0.6794095682990244,
    -0.4333953941292472,
    -0.14887433898163122,
    0.14887433898163122,
    0.4333953941292472,
    0.6794095682990244,
    0.8650633666889845,
    0.9739065285171717,
];

pub const GL10_WEIGHTS: [f64; 10] = [
    0.06667134430868814,
    0.14945134915058059,
    0.21908636251598204,
    0.26926671930999635,
    0.29552422471475287,
    0.29552422471475287,
    0.26926671930999635,
    0.21908636251598204,
    0.14945134915058059,
    0.06667134430868814,
];

/// Scaled 10-point Gauss-Legendre nodes and weights on [a, b].
pub fn gl10_panel(a: f64, b: f64) -> [(f64, f64); 10] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 10];
    for i in 0..10 {
        out[i] = (c + h * GL10_NODES[i], h * GL10_WEIGHTS[i]);
    }
    out
}
