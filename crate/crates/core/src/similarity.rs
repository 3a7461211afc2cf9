//! Similarity reasoners for concept, version, and numeric attributes.
//!
//! Concept similarity compares upward closures in the graph: with
//! `a(x)` the set of `x` and all its ancestors,
//!
//! ```text
//! sim(x, y) = rho * |a(x) & a(y)| / |a(x)| + (1 - rho) * |a(x) & a(y)| / |a(y)|
//! ```
//!
//! Version (equivalent-concept) similarity adds a proximity bonus on top of
//! a base score, computed from release-order labels `c1`, `c2`:
//!
//! ```text
//! sim = min(1, base + version_bonus_base ^ |c1 - c2| * version_bonus_scale)
//! ```
//!
//! Numeric similarity interpolates over an attribute's observed span:
//!
//! ```text
//! sim = max(0, 1 - |a - b| / (span.max - span.min))
//! ```
//!
//! All three return values in `[0, 1]`. A score contributes to matchmaking
//! only if it clears [`passes_threshold`]; callers report failing scores
//! as zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::{ConceptGraph, NodeId};
use crate::schema::AttributeValue;

/// Similarity value, guaranteed to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimilarityScore(f64);

impl SimilarityScore {
    pub const ZERO: SimilarityScore = SimilarityScore(0.0);
    pub const ONE: SimilarityScore = SimilarityScore(1.0);

    /// Wraps a raw score, clamping stray floating-point error into range.
    pub fn new(value: f64) -> Self {
        debug_assert!(
            (-1e-9..=1.0 + 1e-9).contains(&value),
            "similarity {value} far outside [0, 1]"
        );
        SimilarityScore(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Tunable constants for the reasoners. `Default` gives the standard
/// engine behavior; front ends may override `rho` and `threshold`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReasonerConfig {
    /// Weight of the requirement-side fraction in concept similarity.
    pub rho: f64,
    /// Minimum score an attribute must exceed (strictly) to count.
    pub threshold: f64,
    /// Decay base for the version-proximity bonus.
    pub version_bonus_base: f64,
    /// Multiplier applied to the decayed bonus.
    pub version_bonus_scale: f64,
}

impl Default for ReasonerConfig {
    fn default() -> Self {
        ReasonerConfig {
            rho: 0.5,
            threshold: 0.5,
            version_bonus_base: 0.8,
            version_bonus_scale: 0.1,
        }
    }
}

impl ReasonerConfig {
    /// Rejects parameters outside their meaningful ranges.
    pub fn validate(&self) -> Result<()> {
        if !self.rho.is_finite() || !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::invalid(format!("rho {} must lie in [0, 1]", self.rho)));
        }
        if !self.threshold.is_finite() || !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::invalid(format!(
                "threshold {} must lie in [0, 1]",
                self.threshold
            )));
        }
        if !self.version_bonus_base.is_finite()
            || !(0.0..1.0).contains(&self.version_bonus_base)
            || self.version_bonus_base == 0.0
        {
            return Err(Error::invalid(format!(
                "version bonus base {} must lie in (0, 1)",
                self.version_bonus_base
            )));
        }
        if !self.version_bonus_scale.is_finite() || self.version_bonus_scale <= 0.0 {
            return Err(Error::invalid(format!(
                "version bonus scale {} must be positive",
                self.version_bonus_scale
            )));
        }
        Ok(())
    }
}

/// Inclusive range of numeric values an attribute has been observed to take.
/// A degenerate span (`min == max`) is allowed and turns numeric similarity
/// into an exact-match indicator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericSpan {
    pub min: f64,
    pub max: f64,
}

impl NumericSpan {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::invalid(format!("span [{min}, {max}] must be finite")));
        }
        if min > max {
            return Err(Error::invalid(format!("span min {min} exceeds max {max}")));
        }
        Ok(NumericSpan { min, max })
    }

    /// Widens the span to include `value`.
    pub fn extended(self, value: f64) -> Self {
        NumericSpan {
            min: self.min.min(value),
            max: self.max.max(value),
        }
    }

    pub fn width(self) -> f64 {
        self.max - self.min
    }
}

/// Graph similarity of two nodes via their shared ancestors.
///
/// `cfg.rho` weighs the fraction relative to `x` (the requirement side);
/// `1 - rho` weighs the fraction relative to `y`. Always in `(0, 1]`, and
/// exactly 1 iff `x == y`.
pub fn concept_sim(graph: &ConceptGraph, x: NodeId, y: NodeId, cfg: &ReasonerConfig) -> SimilarityScore {
    let common = graph.shared_ancestor_count(x, y) as f64;
    let from_x = common / graph.ancestor_count(x) as f64;
    let from_y = common / graph.ancestor_count(y) as f64;
    // rho*from_x + (1-rho)*from_y, written so that equal fractions score
    // exactly (identity is 1.0 for every rho) and rho = 0.5 is exactly
    // symmetric in x and y.
    let half_sum = 0.5 * (from_x + from_y);
    let half_diff = 0.5 * (from_x - from_y);
    SimilarityScore::new(half_sum + (2.0 * cfg.rho - 1.0) * half_diff)
}

/// Version-aware similarity: `base` plus a bonus that decays exponentially
/// with the distance between the two release labels, capped at 1.
///
/// `base` is the concept similarity of the two version nodes themselves.
/// Labels must be positive (they are 1-based release positions).
pub fn equivalent_sim(
    base: SimilarityScore,
    c1: u32,
    c2: u32,
    cfg: &ReasonerConfig,
) -> Result<SimilarityScore> {
    if c1 == 0 || c2 == 0 {
        return Err(Error::invalid("version labels start at 1"));
    }
    let distance = c1.abs_diff(c2);
    let bonus = cfg.version_bonus_base.powi(distance as i32) * cfg.version_bonus_scale;
    Ok(SimilarityScore::new((base.value() + bonus).min(1.0)))
}

/// Numeric similarity of `a` and `b` over `span`: linear falloff with
/// distance, clamped below at 0. A degenerate span compares for equality.
pub fn numeric_sim(a: f64, b: f64, span: NumericSpan) -> Result<SimilarityScore> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid(format!("numeric values {a}, {b} must be finite")));
    }
    if span.width() == 0.0 {
        return Ok(if a == b { SimilarityScore::ONE } else { SimilarityScore::ZERO });
    }
    Ok(SimilarityScore::new(
        (1.0 - (a - b).abs() / span.width()).max(0.0),
    ))
}

/// Whether a score clears the match threshold. The comparison is strict:
/// a score equal to the threshold fails.
pub fn passes_threshold(score: SimilarityScore, cfg: &ReasonerConfig) -> bool {
    score.value() > cfg.threshold
}

/// Applies the threshold gate: scores that fail come back as zero so they
/// can flow into aggregation unconditionally.
fn gated(score: SimilarityScore, cfg: &ReasonerConfig) -> SimilarityScore {
    if passes_threshold(score, cfg) {
        score
    } else {
        SimilarityScore::ZERO
    }
}

/// Similarity of one offered attribute value against the required one,
/// with the threshold gate already applied.
///
/// Concept pairs score via [`concept_sim`] on their concepts; when both
/// sides pin a version of the same concept the score upgrades to
/// [`equivalent_sim`] with the version nodes' own concept similarity as
/// base. Numeric pairs score via [`numeric_sim`] against `span`. `key`
/// names the attribute in errors.
pub fn attribute_sim(
    graph: &ConceptGraph,
    key: &str,
    required: &AttributeValue,
    offered: &AttributeValue,
    span: Option<NumericSpan>,
    cfg: &ReasonerConfig,
) -> Result<SimilarityScore> {
    match (required, offered) {
        (AttributeValue::Numeric { value: a, .. }, AttributeValue::Numeric { value: b, .. }) => {
            let span = span.ok_or_else(|| Error::MissingSpan(key.to_string()))?;
            Ok(gated(numeric_sim(*a, *b, span)?, cfg))
        }
        (AttributeValue::Concept(req), AttributeValue::Concept(off)) => {
            let req = req.resolve(graph)?;
            let off = off.resolve(graph)?;
            let score = match (req.version, off.version) {
                (Some((rv, rl)), Some((ov, ol))) if req.concept == off.concept => {
                    let base = concept_sim(graph, rv, ov, cfg);
                    equivalent_sim(base, rl, ol, cfg)?
                }
                _ => concept_sim(graph, req.concept, off.concept, cfg),
            };
            Ok(gated(score, cfg))
        }
        _ => Err(Error::TypeMismatch(key.to_string())),
    }
}
