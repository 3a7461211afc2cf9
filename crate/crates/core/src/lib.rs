//! Matchmaking engine for render-farm service offers: a concept graph
//! with versioned leaves, graded similarity over typed attributes,
//! weighted ranking, a registry with snapshot isolation and atomic
//! persistence, and an evaluation harness with a keyword baseline.

pub mod error;
pub mod eval;
pub mod matchmaker;
pub mod ontology;
pub mod registry;
pub mod schema;
pub mod similarity;

pub use error::{Error, Result};
pub use eval::{
    baseline_keyword_rank, run_eval, Approach, ApproachReport, EvalReport, GoldJudgments,
    QueryScores, RetrievalMode,
};
pub use matchmaker::{aggregate_sim, corpus_span, rank_services, MatchResult, RankOptions, RequirementSet};
pub use ontology::{normalize_term, ConceptGraph, ConceptNode, NodeId, NodeKind};
pub use registry::{
    parse_all_requirements, parse_requirements, RegistrySnapshot, ServiceProfile, ServiceRegistry,
};
pub use schema::{attribute_kind, AttributeKind, AttributeValue, ConceptRef, ResolvedRef, ATTRIBUTE_KEYS};
pub use similarity::{
    attribute_sim, concept_sim, equivalent_sim, numeric_sim, passes_threshold, NumericSpan,
    ReasonerConfig, SimilarityScore,
};
