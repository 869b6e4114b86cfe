//! One-particle 1D scattering for −ψ″ + αVψ = k²ψ with compactly supported V.
//!
//! Potentials are described by [`PotentialSpec`] (four shapes, JSON round-trip
//! with strict field checking), solved by a fixed-step 4th-order transfer
//! matrix, and queried for amplitudes, sampled states, bound states, the
//! potential's Fourier transform, and the half-line Born kernels.

mod bound;
mod born;
mod solve;

pub use born::{born_q, fourier_transform_potential, w1_kernel, BornError};
pub use bound::{detect_bound_states, BoundStateReport};
pub use solve::{
    solve_scattering_state, transmission_reflection, Amplitudes, GridError, ScatteringState,
    SolveError, SpatialGrid, K_MIN,
};

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Units: ħ = 1, 2m = 1, so E = k²; `alpha` multiplies the unit-strength shape.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub shape: Shape,
    /// Support interval [a, b]; V ≡ 0 exactly outside.
    pub support: [f64; 2],
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Constant `height` across the whole support.
    Square { height: f64 },
    /// `height · exp(−(x−center)²/(2σ²))`, cut off at the support edges.
    TruncatedGaussian { height: f64, center: f64, sigma: f64 },
    /// Linear interpolation through `nodes`; first/last node must sit at the
    /// support endpoints.
    PiecewiseLinear { nodes: Vec<[f64; 2]> },
    /// Linear interpolation through interior samples, anchored to 0 at both
    /// support endpoints so compact support stays continuous.
    Sampled { x: Vec<f64>, v: Vec<f64> },
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("support: need a < b, got [{0}, {1}]")]
    BadSupport(f64, f64),
    #[error("params.{0}: {1}")]
    BadParam(&'static str, String),
    #[error("{0}")]
    BadJson(String),
    #[error("potential value not finite at x = {0}")]
    NonFiniteValue(f64),
}

impl PotentialSpec {
    pub fn new(shape: Shape, support: [f64; 2], alpha: f64) -> Result<Self, SpecError> {
        let spec = PotentialSpec { shape, support, alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let [a, b] = self.support;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(SpecError::BadSupport(a, b));
        }
        if !self.alpha.is_finite() {
            return Err(SpecError::BadParam("alpha", "not finite".into()));
        }
        match &self.shape {
            Shape::Square { height } => {
                if !height.is_finite() {
                    return Err(SpecError::BadParam("height", "not finite".into()));
                }
            }
            Shape::TruncatedGaussian { height, center, sigma } => {
                if !height.is_finite() || !center.is_finite() {
                    return Err(SpecError::BadParam("height", "not finite".into()));
                }
                if !(*sigma > 0.0) {
                    return Err(SpecError::BadParam("sigma", format!("need > 0, got {sigma}")));
                }
            }
            Shape::PiecewiseLinear { nodes } => {
                if nodes.len() < 2 {
                    return Err(SpecError::BadParam("nodes", "need at least 2 nodes".into()));
                }
                if (nodes[0][0] - a).abs() > 1e-12 || (nodes[nodes.len() - 1][0] - b).abs() > 1e-12
                {
                    return Err(SpecError::BadParam(
                        "nodes",
                        "first/last abscissa must equal the support endpoints".into(),
                    ));
                }
                for w in nodes.windows(2) {
                    if !(w[0][0] < w[1][0]) {
                        return Err(SpecError::BadParam(
                            "nodes",
                            "abscissae must be strictly increasing".into(),
                        ));
                    }
                }
                if nodes.iter().any(|n| !n[0].is_finite() || !n[1].is_finite()) {
                    return Err(SpecError::BadParam("nodes", "not finite".into()));
                }
            }
            Shape::Sampled { x, v } => {
                if x.len() != v.len() {
                    return Err(SpecError::BadParam("x", "x and v lengths differ".into()));
                }
                if x.is_empty() {
                    return Err(SpecError::BadParam("x", "need at least one sample".into()));
                }
                for w in x.windows(2) {
                    if !(w[0] < w[1]) {
                        return Err(SpecError::BadParam(
                            "x",
                            "abscissae must be strictly increasing".into(),
                        ));
                    }
                }
                if x[0] < a || x[x.len() - 1] > b {
                    return Err(SpecError::BadParam("x", "samples outside the support".into()));
                }
                if x.iter().chain(v.iter()).any(|t| !t.is_finite()) {
                    return Err(SpecError::BadParam("x", "not finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Interior kink positions (where V′ jumps); the solver lands a step on
    /// each so the fixed-step error order survives.
    pub fn interior_kinks(&self) -> Vec<f64> {
        let [a, b] = self.support;
        let inside = |t: &f64| *t > a + 1e-12 && *t < b - 1e-12;
        match &self.shape {
            Shape::Square { .. } | Shape::TruncatedGaussian { .. } => Vec::new(),
            Shape::PiecewiseLinear { nodes } => {
                nodes.iter().map(|n| n[0]).filter(inside).collect()
            }
            Shape::Sampled { x, .. } => x.iter().copied().filter(inside).collect(),
        }
    }

    /// αV(x): exactly 0 outside the support.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.alpha * self.unit_value(x)
    }

    /// V(x) at unit strength (no α).
    pub fn unit_value(&self, x: f64) -> f64 {
        let [a, b] = self.support;
        if x < a || x > b {
            return 0.0;
        }
        match &self.shape {
            Shape::Square { height } => *height,
            Shape::TruncatedGaussian { height, center, sigma } => {
                let t = (x - center) / sigma;
                height * (-0.5 * t * t).exp()
            }
            Shape::PiecewiseLinear { nodes } => interp_segments(nodes, x),
            Shape::Sampled { x: xs, v } => {
                let mut nodes = Vec::with_capacity(xs.len() + 2);
                if (xs[0] - a).abs() > 1e-12 {
                    nodes.push([a, 0.0]);
                }
                nodes.extend(xs.iter().zip(v).map(|(&xi, &vi)| [xi, vi]));
                if (xs[xs.len() - 1] - b).abs() > 1e-12 {
                    nodes.push([b, 0.0]);
                }
                interp_segments(&nodes, x)
            }
        }
    }

    /// Piecewise-linear segmentation of the unit-strength shape, or None for
    /// shapes without an exact linear form (used by the closed-form Fourier
    /// path).
    pub(crate) fn linear_nodes(&self) -> Option<Vec<[f64; 2]>> {
        let [a, b] = self.support;
        match &self.shape {
            Shape::Square { height } => Some(vec![[a, *height], [b, *height]]),
            Shape::PiecewiseLinear { nodes } => Some(nodes.clone()),
            Shape::Sampled { x, v } => {
                let mut nodes = Vec::with_capacity(x.len() + 2);
                if (x[0] - a).abs() > 1e-12 {
                    nodes.push([a, 0.0]);
                }
                nodes.extend(x.iter().zip(v).map(|(&xi, &vi)| [xi, vi]));
                if (x[x.len() - 1] - b).abs() > 1e-12 {
                    nodes.push([b, 0.0]);
                }
                Some(nodes)
            }
            Shape::TruncatedGaussian { .. } => None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let raw: RawSpec =
            serde_json::from_str(text).map_err(|e| SpecError::BadJson(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }
}

fn interp_segments(nodes: &[[f64; 2]], x: f64) -> f64 {
    if x <= nodes[0][0] {
        return nodes[0][1];
    }
    if x >= nodes[nodes.len() - 1][0] {
        return nodes[nodes.len() - 1][1];
    }
    let i = nodes.partition_point(|n| n[0] <= x);
    let (l, r) = (nodes[i - 1], nodes[i]);
    let t = (x - l[0]) / (r[0] - l[0]);
    l[1] + t * (r[1] - l[1])
}

/// Wire format: {"shape": ..., "support": [a,b], "params": {...}, "alpha": x}.
/// Unknown fields anywhere are rejected with the offending key named.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    shape: String,
    support: [f64; 2],
    params: serde_json::Value,
    alpha: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareParams {
    height: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianParams {
    height: f64,
    center: f64,
    sigma: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PwlParams {
    nodes: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SampledParams {
    x: Vec<f64>,
    v: Vec<f64>,
}

impl TryFrom<RawSpec> for PotentialSpec {
    type Error = SpecError;

    fn try_from(raw: RawSpec) -> Result<Self, SpecError> {
        let params = raw.params;
        let bad = |e: serde_json::Error| SpecError::BadJson(format!("params: {e}"));
        let shape = match raw.shape.as_str() {
            "square" => {
                let p: SquareParams = serde_json::from_value(params).map_err(bad)?;
                Shape::Square { height: p.height }
            }
            "truncated-gaussian" => {
                let p: GaussianParams = serde_json::from_value(params).map_err(bad)?;
                Shape::TruncatedGaussian { height: p.height, center: p.center, sigma: p.sigma }
            }
            "piecewise-linear" => {
                let p: PwlParams = serde_json::from_value(params).map_err(bad)?;
                Shape::PiecewiseLinear { nodes: p.nodes }
            }
            "sampled" => {
                let p: SampledParams = serde_json::from_value(params).map_err(bad)?;
                Shape::Sampled { x: p.x, v: p.v }
            }
            other => {
                return Err(SpecError::BadJson(format!(
                    "shape: unknown value {other:?} (expected square, truncated-gaussian, \
                     piecewise-linear, or sampled)"
                )))
            }
        };
        PotentialSpec::new(shape, raw.support, raw.alpha)
    }
}

impl Serialize for PotentialSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        let (tag, params) = match &self.shape {
            Shape::Square { height } => ("square", serde_json::json!({ "height": height })),
            Shape::TruncatedGaussian { height, center, sigma } => (
                "truncated-gaussian",
                serde_json::json!({ "height": height, "center": center, "sigma": sigma }),
            ),
            Shape::PiecewiseLinear { nodes } => {
                ("piecewise-linear", serde_json::json!({ "nodes": nodes }))
            }
            Shape::Sampled { x, v } => ("sampled", serde_json::json!({ "x": x, "v": v })),
        };
        m.serialize_entry("shape", tag)?;
        m.serialize_entry("support", &self.support)?;
        m.serialize_entry("params", &params)?;
        m.serialize_entry("alpha", &self.alpha)?;
        m.end()
    }
}
