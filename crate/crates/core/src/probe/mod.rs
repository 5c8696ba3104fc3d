//! Finite Cayley-graph evidence for Sigma and Omega membership.
//!
//! Verdicts are evidence from a finite ball, never proof.

mod ball;
mod model;

pub use ball::{build_ball, Ball, DEFAULT_BALL_CAP};
pub use model::{CyclicExtension, Elem, Model};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charsphere::{Character, RationalRay, SphereError};
use crate::exact::{self, Q};
use crate::group::HomBasis;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("model does not match the presentation: {0}")]
    InconsistentModel(String),
    #[error("ball exceeds {0} vertices")]
    BallTooLarge(usize),
    #[error("character vanishes on every generator")]
    DegenerateCharacter,
    #[error("character has {found} coordinates, model has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("bad s-grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Sphere(#[from] SphereError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    Sigma,
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeVerdict {
    EvidenceConnected,
    EvidenceDisconnected,
    Inconclusive,
}

/// Outcome at one level `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceResult {
    #[serde(with = "exact::q_string")]
    pub s: Q,
    pub vertices: usize,
    pub components: usize,
    /// Smallest integer `lambda` such that the slice is connected inside the
    /// region at level `s - lambda`; absent for an empty slice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u64>,
    /// Two slice vertices still apart at level `s - lambda + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub kind: ProbeKind,
    pub character: RationalRay,
    pub radius: usize,
    #[serde(with = "exact::q_vec")]
    pub grid: Vec<Q>,
    pub ball_vertices: usize,
    pub results: Vec<SliceResult>,
    pub verdict: ProbeVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeConfig {
    pub radius: usize,
    pub grid: Vec<Q>,
    pub cap: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            radius: 6,
            grid: (0..=3).map(|s| Q::from_integer(s.into())).collect(),
            cap: DEFAULT_BALL_CAP,
        }
    }
}

impl ProbeConfig {
    pub fn with_radius(radius: usize) -> Self {
        ProbeConfig {
            radius,
            grid: (0..=radius as i64 / 2).map(|s| Q::from_integer(s.into())).collect(),
            cap: DEFAULT_BALL_CAP,
        }
    }
}

struct Geometry {
    values: Vec<Q>,
    norms: Vec<Q>,
    direction_norm: Q,
}

impl Geometry {
    fn new(ball: &Ball, d: &[Q]) -> Self {
        Geometry {
            values: ball.heights.iter().map(|h| exact::dot_q(d, h)).collect(),
            norms: ball.heights.iter().map(|h| exact::dot_q(h, h)).collect(),
            direction_norm: exact::dot_q(d, d),
        }
    }

    fn in_half_space(&self, v: usize, s: &Q) -> bool {
        &self.values[v] >= s
    }

    /// Truncated cone: `<d,h> >= s` and the angle to `d` at most
    /// `arctan(1/s)`; a half-space once `s <= 0`.
    fn in_cone(&self, v: usize, s: &Q) -> bool {
        let val = &self.values[v];
        if val < s {
            return false;
        }
        if !s.is_positive() {
            return true;
        }
        let lhs = val * val * (Q::from_integer(1.into()) + s * s);
        let rhs = s * s * &self.direction_norm * &self.norms[v];
        lhs >= rhs
    }

    fn member(&self, kind: ProbeKind, v: usize, s: &Q) -> bool {
        match kind {
            ProbeKind::Sigma => self.in_half_space(v, s),
            ProbeKind::Omega => self.in_cone(v, s),
        }
    }
}

/// Vertices reachable from `start` inside `region`.
fn reach(ball: &Ball, start: usize, region: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; ball.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &u in &ball.adjacency[v] {
            if region[u] && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen
}

fn count_components(ball: &Ball, region: &[bool]) -> usize {
    let mut seen = vec![false; ball.len()];
    let mut count = 0;
    for v in 0..ball.len() {
        if region[v] && !seen[v] {
            count += 1;
            let r = reach(ball, v, region);
            for (s, x) in seen.iter_mut().zip(r) {
                *s |= x;
            }
        }
    }
    count
}

fn analyse_slice(ball: &Ball, geo: &Geometry, kind: ProbeKind, s: &Q, model: &Model) -> SliceResult {
    let region_at = |level: &Q| -> Vec<bool> { (0..ball.len()).map(|v| geo.member(kind, v, level)).collect() };
    let slice = region_at(s);
    let members: Vec<usize> = (0..ball.len()).filter(|&v| slice[v]).collect();
    let mut result = SliceResult {
        s: s.clone(),
        vertices: members.len(),
        components: count_components(ball, &slice),
        lambda: None,
        witness: None,
    };
    let Some(&first) = members.first() else {
        return result;
    };
    let level = |lambda: u64| s - Q::from_integer(lambda.into());
    let connected = |lambda: u64| {
        let region = region_at(&level(lambda));
        let r = reach(ball, first, &region);
        members.iter().all(|&v| r[v])
    };
    let lowest = geo.values.iter().min().cloned().unwrap_or_else(Q::zero);
    let mut hi = (s - &lowest).ceil().to_integer().try_into().unwrap_or(0u64) + 1;
    while !connected(hi) {
        hi *= 2;
    }
    let mut lo = 0u64;
    if connected(0) {
        hi = 0;
    }
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if connected(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    result.lambda = Some(hi);
    if hi > 0 {
        let region = region_at(&level(hi - 1));
        let r = reach(ball, first, &region);
        let other = members.iter().copied().find(|&v| !r[v]).expect("slice is split below lambda");
        result.witness = Some((model.format(&ball.vertices[first]), model.format(&ball.vertices[other])));
    }
    result
}

fn verdict(results: &[SliceResult], max_step: &Q) -> ProbeVerdict {
    let floor = |r: &SliceResult| &r.s - Q::from_integer(r.lambda.expect("nonempty slice").into());
    let nonempty: Vec<&SliceResult> = results.iter().filter(|r| r.lambda.is_some()).collect();
    let positive: Vec<&SliceResult> = nonempty.iter().copied().filter(|r| r.s.is_positive()).collect();
    let Some(top) = positive.iter().max_by(|a, b| a.s.cmp(&b.s)) else {
        return ProbeVerdict::Inconclusive;
    };
    let split = positive.iter().any(|r| r.lambda > Some(0));
    if split && positive.iter().all(|r| !floor(r).is_positive()) {
        return ProbeVerdict::EvidenceDisconnected;
    }
    let bound = max_step * Q::from_integer(2.into());
    let bounded = nonempty
        .iter()
        .all(|r| Q::from_integer(r.lambda.expect("nonempty").into()) <= bound);
    if bounded && floor(top).is_positive() {
        ProbeVerdict::EvidenceConnected
    } else {
        ProbeVerdict::Inconclusive
    }
}

fn check_grid(kind: ProbeKind, grid: &[Q]) -> Result<(), ProbeError> {
    if grid.is_empty() {
        return Err(ProbeError::BadGrid("empty".into()));
    }
    if kind == ProbeKind::Omega && grid.iter().any(|s| !s.is_positive()) {
        return Err(ProbeError::BadGrid("cone probes need positive levels".into()));
    }
    Ok(())
}

/// Probe a direction given in Hom coordinates of the model's presentation.
pub fn probe_direction(
    model: &Model,
    kind: ProbeKind,
    direction: &[Q],
    config: &ProbeConfig,
) -> Result<ProbeReport, ProbeError> {
    check_grid(kind, &config.grid)?;
    let hb = HomBasis::new(&model.presentation());
    if direction.len() != hb.dim() {
        return Err(ProbeError::DimensionMismatch {
            expected: hb.dim(),
            found: direction.len(),
        });
    }
    let ray = RationalRay::from_rational(direction).ok_or(ProbeError::DegenerateCharacter)?;
    let d = ray.to_q();
    let ball = build_ball(model, config.radius, config.cap)?;
    let steps: Vec<Q> = ball.generator_heights.iter().map(|h| exact::dot_q(&d, h).abs()).collect();
    let max_step = steps.iter().max().cloned().unwrap_or_else(Q::zero);
    if max_step.is_zero() {
        return Err(ProbeError::DegenerateCharacter);
    }
    let geo = Geometry::new(&ball, &d);
    let results: Vec<SliceResult> = config
        .grid
        .iter()
        .map(|s| analyse_slice(&ball, &geo, kind, s, model))
        .collect();
    Ok(ProbeReport {
        kind,
        character: ray,
        radius: config.radius,
        grid: config.grid.clone(),
        ball_vertices: ball.len(),
        verdict: verdict(&results, &max_step),
        results,
    })
}

fn character_coords(model: &Model, chi: &Character) -> Result<Vec<Q>, ProbeError> {
    let p = model.presentation();
    if chi.values().len() != p.num_generators() {
        return Err(ProbeError::DimensionMismatch {
            expected: p.num_generators(),
            found: chi.values().len(),
        });
    }
    Ok(chi.hom_coords(&HomBasis::new(&p)))
}

/// Half-space connectivity probe.
pub fn sigma_probe(model: &Model, chi: &Character, config: &ProbeConfig) -> Result<ProbeReport, ProbeError> {
    probe_direction(model, ProbeKind::Sigma, &character_coords(model, chi)?, config)
}

/// Truncated-cone connectivity probe.
pub fn omega_probe(model: &Model, chi: &Character, config: &ProbeConfig) -> Result<ProbeReport, ProbeError> {
    probe_direction(model, ProbeKind::Omega, &character_coords(model, chi)?, config)
}
