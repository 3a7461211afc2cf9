//! Retrieval-quality evaluation: precision/recall/F1 against gold
//! judgments, for the graph-based ranker and a keyword baseline.

pub mod synthetic;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matchmaker::{rank_services, RankOptions, RequirementSet};
use crate::ontology::{normalize_term, ConceptGraph};
use crate::registry::RegistrySnapshot;
use crate::similarity::ReasonerConfig;

/// Fraction of retrieved services that are relevant. An empty retrieved
/// set scores 0 by convention.
pub fn precision(retrieved: &[String], relevant: &BTreeSet<String>) -> f64 {
    if retrieved.is_empty() {
        return 0.0;
    }
    let hits = retrieved.iter().filter(|id| relevant.contains(*id)).count();
    hits as f64 / retrieved.len() as f64
}

/// Fraction of relevant services that were retrieved. Relevant sets are
/// non-empty by [`GoldJudgments`] construction.
pub fn recall(retrieved: &[String], relevant: &BTreeSet<String>) -> f64 {
    debug_assert!(!relevant.is_empty(), "gold judgments guarantee non-empty sets");
    if relevant.is_empty() {
        return 0.0;
    }
    let hits = retrieved.iter().filter(|id| relevant.contains(*id)).count();
    hits as f64 / relevant.len() as f64
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        return 0.0;
    }
    2.0 * precision * recall / (precision + recall)
}

/// Relevance judgments: for each query, the set of services a correct
/// ranker should surface. Sets are non-empty by construction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GoldJudgments {
    per_query: BTreeMap<String, BTreeSet<String>>,
}

impl GoldJudgments {
    /// Parses `relevant <query-id> <service-id>` lines; `#` comments and
    /// blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut per_query: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            match (tokens.next(), tokens.next(), tokens.next(), tokens.next()) {
                (Some("relevant"), Some(query), Some(service), None) => {
                    per_query
                        .entry(normalize_term(query))
                        .or_default()
                        .insert(normalize_term(service));
                }
                _ => {
                    return Err(Error::parse(
                        line,
                        "expected `relevant <query-id> <service-id>`",
                    ))
                }
            }
        }
        Ok(GoldJudgments { per_query })
    }

    pub fn insert(&mut self, query_id: impl Into<String>, service_id: impl Into<String>) {
        self.per_query
            .entry(query_id.into())
            .or_default()
            .insert(service_id.into());
    }

    pub fn relevant_for(&self, query_id: &str) -> Option<&BTreeSet<String>> {
        self.per_query.get(query_id)
    }

    pub fn queries(&self) -> impl Iterator<Item = &String> {
        self.per_query.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.per_query.is_empty()
    }

    /// Every judged service must exist in the registry.
    pub fn validate_against(&self, snapshot: &RegistrySnapshot) -> Result<()> {
        for (query, services) in &self.per_query {
            for service in services {
                if snapshot.get(service).is_none() {
                    return Err(Error::invalid(format!(
                        "gold judgments for `{query}` name unregistered service `{service}`"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Ranks services by the fraction of requirement entries they match
/// exactly: canonical-text equality for concepts (version labels
/// included), value equality for numerics. No graph reasoning, no version
/// bonus, no numeric interpolation. Ties break by service id.
pub fn baseline_keyword_rank(snapshot: &RegistrySnapshot, req: &RequirementSet) -> Vec<String> {
    let mut scored: Vec<(f64, &str)> = snapshot
        .profiles()
        .map(|profile| {
            let hits = req
                .entries
                .iter()
                .filter(|(key, required)| {
                    profile
                        .attributes
                        .get(*key)
                        .is_some_and(|offered| required.matches_exactly(offered))
                })
                .count();
            (
                hits as f64 / req.entries.len() as f64,
                profile.service_id.as_str(),
            )
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    scored.into_iter().map(|(_, id)| id.to_string()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Approach {
    #[serde(rename = "ontology")]
    Ontology,
    #[serde(rename = "no-ontology-baseline")]
    NoOntologyBaseline,
}

/// How the retrieved set is drawn from a ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RetrievalMode {
    /// First `k` services of the ranking.
    #[serde(rename = "top-k")]
    TopK,
    /// Every service that passed all attribute thresholds (strict mode);
    /// `k` is ignored.
    #[serde(rename = "strict")]
    Strict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryScores {
    pub query_id: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Per-query and macro-averaged scores for one (approach, retrieval) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproachReport {
    pub approach: Approach,
    pub retrieval: RetrievalMode,
    pub per_query: Vec<QueryScores>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub k: usize,
    pub approaches: Vec<ApproachReport>,
}

impl EvalReport {
    pub fn approach(&self, approach: Approach, retrieval: RetrievalMode) -> Option<&ApproachReport> {
        self.approaches
            .iter()
            .find(|a| a.approach == approach && a.retrieval == retrieval)
    }

    /// Fixed-width comparison table of the macro scores.
    pub fn comparison_table(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{:<22} {:<10} {:>4} {:>10} {:>10} {:>10}",
            "approach", "retrieval", "k", "macro_p", "macro_r", "macro_f1"
        )
        .expect("string write");
        for report in &self.approaches {
            let (approach, retrieval) = labels(report);
            let k = match report.retrieval {
                RetrievalMode::TopK => self.k.to_string(),
                RetrievalMode::Strict => "-".to_string(),
            };
            writeln!(
                out,
                "{:<22} {:<10} {:>4} {:>10.4} {:>10.4} {:>10.4}",
                approach, retrieval, k, report.macro_precision, report.macro_recall, report.macro_f1
            )
            .expect("string write");
        }
        out
    }
}

fn labels(report: &ApproachReport) -> (&'static str, &'static str) {
    let approach = match report.approach {
        Approach::Ontology => "ontology",
        Approach::NoOntologyBaseline => "no-ontology-baseline",
    };
    let retrieval = match report.retrieval {
        RetrievalMode::TopK => "top-k",
        RetrievalMode::Strict => "strict",
    };
    (approach, retrieval)
}

/// Evaluates every query against the gold judgments and reports three
/// retrieved-set definitions: graph ranker top-k, graph ranker strict,
/// and keyword-baseline top-k. Macro scores average per-query scores.
pub fn run_eval(
    graph: &ConceptGraph,
    snapshot: &RegistrySnapshot,
    queries: &[RequirementSet],
    gold: &GoldJudgments,
    k: usize,
    cfg: &ReasonerConfig,
) -> Result<EvalReport> {
    if queries.is_empty() {
        return Err(Error::invalid("no queries to evaluate"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    gold.validate_against(snapshot)?;
    for query in queries {
        if gold.relevant_for(&query.query_id).is_none() {
            return Err(Error::MissingGold(query.query_id.clone()));
        }
    }

    let mut retrieved_sets: [Vec<(String, Vec<String>)>; 3] = Default::default();
    for query in queries {
        let relevant_to = |ids: Vec<String>| (query.query_id.clone(), ids);

        let ranked = rank_services(graph, snapshot, query, cfg, &RankOptions::default())?;
        let top_k: Vec<String> = ranked
            .iter()
            .take(k)
            .map(|r| r.service_id.clone())
            .collect();
        retrieved_sets[0].push(relevant_to(top_k));

        let strict_options = RankOptions { strict: true, ..Default::default() };
        let strict = rank_services(graph, snapshot, query, cfg, &strict_options)?;
        retrieved_sets[1].push(relevant_to(
            strict.iter().map(|r| r.service_id.clone()).collect(),
        ));

        let baseline = baseline_keyword_rank(snapshot, query);
        retrieved_sets[2].push(relevant_to(baseline.into_iter().take(k).collect()));
    }

    let kinds = [
        (Approach::Ontology, RetrievalMode::TopK),
        (Approach::Ontology, RetrievalMode::Strict),
        (Approach::NoOntologyBaseline, RetrievalMode::TopK),
    ];
    let approaches = kinds
        .iter()
        .zip(retrieved_sets.iter())
        .map(|(&(approach, retrieval), retrieved)| {
            let per_query: Vec<QueryScores> = retrieved
                .iter()
                .map(|(query_id, ids)| {
                    let relevant = gold
                        .relevant_for(query_id)
                        .expect("checked before scoring");
                    let p = precision(ids, relevant);
                    let r = recall(ids, relevant);
                    QueryScores {
                        query_id: query_id.clone(),
                        precision: p,
                        recall: r,
                        f1: f1(p, r),
                    }
                })
                .collect();
            let n = per_query.len() as f64;
            ApproachReport {
                approach,
                retrieval,
                macro_precision: per_query.iter().map(|q| q.precision).sum::<f64>() / n,
                macro_recall: per_query.iter().map(|q| q.recall).sum::<f64>() / n,
                macro_f1: per_query.iter().map(|q| q.f1).sum::<f64>() / n,
                per_query,
            }
        })
        .collect();

    Ok(EvalReport { k, approaches })
}
