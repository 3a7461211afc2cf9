//! Ranking registered services against a requirement set.
//!
//! Every requirement attribute is scored with the similarity reasoners,
//! failing scores are already gated to zero, and the per-attribute scores
//! combine into a weighted arithmetic mean. Services sort by aggregate
//! (descending) with ties broken by service id, so rankings are fully
//! deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::ConceptGraph;
use crate::registry::RegistrySnapshot;
use crate::schema::{attribute_kind, AttributeKind, AttributeValue};
use crate::similarity::{attribute_sim, NumericSpan, ReasonerConfig, SimilarityScore};

/// What a consumer asks for: attribute values plus optional per-attribute
/// weights (anything unlisted weighs 1).
#[derive(Debug, Clone, PartialEq)]
pub struct RequirementSet {
    pub query_id: String,
    pub entries: BTreeMap<String, AttributeValue>,
    pub weights: BTreeMap<String, f64>,
}

impl RequirementSet {
    /// Effective weight of an attribute: explicit weight or 1.
    pub fn weight(&self, key: &str) -> f64 {
        self.weights.get(key).copied().unwrap_or(1.0)
    }

    /// Weights for exactly the declared entries.
    pub fn effective_weights(&self) -> BTreeMap<String, f64> {
        self.entries
            .keys()
            .map(|k| (k.clone(), self.weight(k)))
            .collect()
    }
}

/// One ranked service: 1-based rank, aggregate score, and the gated
/// per-attribute scores that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub rank: usize,
    pub service_id: String,
    pub aggregate: f64,
    pub per_attribute: BTreeMap<String, SimilarityScore>,
}

/// Knobs for [`rank_services`] beyond the reasoner configuration.
#[derive(Debug, Clone, Default)]
pub struct RankOptions {
    /// Drop services that score zero on any required attribute.
    pub strict: bool,
    /// Spans to use instead of the registry-derived ones, keyed by
    /// attribute.
    pub span_overrides: BTreeMap<String, NumericSpan>,
}

/// Weighted arithmetic mean of the per-attribute scores.
///
/// Every score key must have a weight, and the weights must not sum to
/// zero; the mean of values in `[0, 1]` stays in `[0, 1]`.
pub fn aggregate_sim(
    scores: &BTreeMap<String, SimilarityScore>,
    weights: &BTreeMap<String, f64>,
) -> Result<f64> {
    let mut weighted = 0.0;
    let mut total = 0.0;
    for (key, score) in scores {
        let w = *weights
            .get(key)
            .ok_or_else(|| Error::invalid(format!("no weight for attribute `{key}`")))?;
        if !w.is_finite() || w < 0.0 {
            return Err(Error::invalid(format!("weight {w} for `{key}` must be >= 0")));
        }
        weighted += w * score.value();
        total += w;
    }
    if total == 0.0 {
        return Err(Error::ZeroWeight("aggregate over the given scores".to_string()));
    }
    Ok(weighted / total)
}

/// Observed range of a numeric attribute across the registry, widened to
/// include the query's own value when given. With no registered values the
/// span collapses to the query value alone; with neither, this errors.
pub fn corpus_span(
    snapshot: &RegistrySnapshot,
    key: &str,
    query_value: Option<f64>,
) -> Result<NumericSpan> {
    if attribute_kind(key) != Some(AttributeKind::Numeric) {
        return Err(Error::invalid(format!("attribute `{key}` is not numeric")));
    }
    let mut bounds: Option<(f64, f64)> = None;
    let mut fold = |v: f64| {
        bounds = Some(match bounds {
            None => (v, v),
            Some((lo, hi)) => (lo.min(v), hi.max(v)),
        });
    };
    for profile in snapshot.profiles() {
        if let Some(AttributeValue::Numeric { value, .. }) = profile.attributes.get(key) {
            fold(*value);
        }
    }
    if let Some(q) = query_value {
        if !q.is_finite() {
            return Err(Error::invalid(format!("query value {q} must be finite")));
        }
        fold(q);
    }
    let (min, max) = bounds.ok_or_else(|| Error::EmptySpan(key.to_string()))?;
    NumericSpan::new(min, max)
}

/// Scores every registered service against `req` and returns them ranked.
///
/// Missing attributes score zero. In strict mode services with any zero
/// attribute score are excluded entirely. Numeric attributes are measured
/// against `options.span_overrides` when present, otherwise against the
/// registry-derived [`corpus_span`].
pub fn rank_services(
    graph: &ConceptGraph,
    snapshot: &RegistrySnapshot,
    req: &RequirementSet,
    cfg: &ReasonerConfig,
    options: &RankOptions,
) -> Result<Vec<MatchResult>> {
    cfg.validate()?;
    if snapshot.is_empty() {
        return Err(Error::invalid("no registered services to rank"));
    }
    if req.entries.is_empty() {
        return Err(Error::invalid(format!(
            "query `{}` declares no attributes",
            req.query_id
        )));
    }
    let weights = req.effective_weights();
    if weights.values().sum::<f64>() == 0.0 {
        return Err(Error::ZeroWeight(format!("query `{}`", req.query_id)));
    }

    let mut spans: BTreeMap<&str, NumericSpan> = BTreeMap::new();
    for (key, value) in &req.entries {
        if let AttributeValue::Numeric { value: q, .. } = value {
            let span = match options.span_overrides.get(key) {
                Some(span) => *span,
                None => corpus_span(snapshot, key, Some(*q))?,
            };
            spans.insert(key, span);
        }
    }

    let mut results: Vec<MatchResult> = Vec::with_capacity(snapshot.len());
    'services: for profile in snapshot.profiles() {
        let mut per_attribute = BTreeMap::new();
        for (key, required) in &req.entries {
            let score = match profile.attributes.get(key) {
                None => SimilarityScore::ZERO,
                Some(offered) => attribute_sim(
                    graph,
                    key,
                    required,
                    offered,
                    spans.get(key.as_str()).copied(),
                    cfg,
                )?,
            };
            if options.strict && score == SimilarityScore::ZERO {
                continue 'services;
            }
            per_attribute.insert(key.clone(), score);
        }
        let aggregate = aggregate_sim(&per_attribute, &weights)?;
        results.push(MatchResult {
            rank: 0,
            service_id: profile.service_id.clone(),
            aggregate,
            per_attribute,
        });
    }

    results.sort_by(|a, b| {
        b.aggregate
            .total_cmp(&a.aggregate)
            .then_with(|| a.service_id.cmp(&b.service_id))
    });
    for (i, result) in results.iter_mut().enumerate() {
        result.rank = i + 1;
    }
    Ok(results)
}
