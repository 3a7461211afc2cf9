//! Seeded generator for matchmaking corpora whose relevance labels are
//! decided by rule, not by hand.
//!
//! Every corpus is built from one fixed ontology skeleton: six small
//! attribute families (compute unit, license fee, job management, render
//! engine, plugin, operating system) plus a `software` subtree holding
//! twelve categories, three products per category, nine versions per
//! product. Each query picks a distinct software category; the last two
//! categories are reserved for distractor services so no query ever
//! shares a category with them.
//!
//! Per query the generator emits ten services:
//!
//! * 2 verbatim copies of the query (every attribute equal),
//! * 3 near misses: the software entry is moved to a sibling product or a
//!   shifted version, the price moves by at most 0.30, and at most one
//!   other attribute is swapped for a sibling concept,
//! * 3 keyword baits: every concept attribute equals the query verbatim
//!   but the price is at least 4.60 away,
//! * 2 distractors: software from a reserved category and a far price.
//!
//! A service is relevant to a query exactly when it offers the same
//! software category and its price is within 0.60. By construction that
//! set is the query's verbatim and near services: five per query, three
//! of them (60%) not exact-string matches.
//!
//! The numbers are chosen so the separation is provable for every seed.
//! Prices live in [1.70, 10.20] and the corpus always spans at least 4.60,
//! so a bait's price similarity is at most 1 - 4.60/8.50 = 0.459, under
//! the 0.5 gate, while a near miss scores at least 1 - 0.30/4.60 = 0.934.
//! A near miss therefore aggregates to at least
//! (5 + 2/3 + 0.75 + 0.934)/8 = 0.918, while any irrelevant service is
//! capped at 7/8 = 0.875 (one attribute always gates to zero). Graph-based
//! top-5 retrieval is exactly the relevant set. The keyword baseline
//! instead scores baits 7/8 and near misses at most 6/8, so its top five
//! are the two verbatim services plus three irrelevant ones: F1 = 0.4.

use std::fmt::Write as _;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::eval::GoldJudgments;
use crate::matchmaker::RequirementSet;
use crate::ontology::ConceptGraph;
use crate::registry::{parse_all_requirements, ServiceProfile, ServiceRegistry};

pub const VERBATIM_PER_QUERY: usize = 2;
pub const NEAR_PER_QUERY: usize = 3;
pub const BAITS_PER_QUERY: usize = 3;
pub const DISTRACTORS_PER_QUERY: usize = 2;
pub const SERVICES_PER_QUERY: usize =
    VERBATIM_PER_QUERY + NEAR_PER_QUERY + BAITS_PER_QUERY + DISTRACTORS_PER_QUERY;
/// Gold set size per query; also the top-k cutoff the corpus is built for.
pub const RELEVANT_PER_QUERY: usize = VERBATIM_PER_QUERY + NEAR_PER_QUERY;

/// Maximum query count: twelve categories minus two reserved ones.
pub const MAX_QUERIES: usize = CATEGORIES.len() - RESERVED_CATEGORIES;

const RESERVED_CATEGORIES: usize = 2;
const VERSIONS_PER_PRODUCT: u32 = 9;

/// Relevance rule: price delta at most 0.60, stored in cents.
const RELEVANT_COST_CENTS: i64 = 60;

const CATEGORIES: [&str; 12] = [
    "frame_animation",
    "surface_modeling",
    "compositing",
    "sculpting",
    "motion_capture",
    "texturing",
    "fluid_simulation",
    "drafting",
    "scene_assembly",
    "video_editing",
    "terrain_tools",
    "lighting_design",
];

const PRODUCT_SUFFIXES: [&str; 3] = ["studio", "pro", "lite"];

const COSMETIC_FAMILIES: [(&str, &[&str]); 6] = [
    ("compute_unit_type", &["cpu", "gpu", "hybrid"]),
    ("license_fee", &["fee_included", "fee_excluded", "byol"]),
    ("job_mgmt", &["plugin_based", "web_portal", "desktop_client"]),
    ("render_engine", &["mental_ray", "vray", "arnold", "redshift"]),
    ("plugin", &["fumefx", "realflow", "xparticles", "phoenix_fd"]),
    ("os", &["mac", "windows", "linux"]),
];

/// One generated corpus as text documents in the engine's own formats.
/// Consumers parse them back; nothing here bypasses the parsers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticCorpus {
    pub ontology: String,
    pub profiles: String,
    pub queries: String,
    pub gold: String,
}

impl SyntheticCorpus {
    /// Parses the four documents into engine values.
    pub fn build(
        &self,
    ) -> Result<(ConceptGraph, ServiceRegistry, Vec<RequirementSet>, GoldJudgments)> {
        let graph = ConceptGraph::parse(&self.ontology)?;
        let mut registry = ServiceRegistry::new();
        for profile in ServiceProfile::parse_all(&self.profiles, &graph)? {
            registry.register(profile)?;
        }
        let queries = parse_all_requirements(&self.queries, &graph)?;
        let gold = GoldJudgments::parse(&self.gold)?;
        gold.validate_against(&registry.snapshot())?;
        Ok((graph, registry, queries, gold))
    }
}

#[derive(Debug, Clone)]
struct Entry {
    category: usize,
    product: String,
    label: u32,
    cosmetics: Vec<(&'static str, &'static str)>,
    cost_cents: i64,
}

impl Entry {
    fn write_attrs(&self, out: &mut String) {
        let mut lines: Vec<(String, String)> = self
            .cosmetics
            .iter()
            .map(|(key, value)| (key.to_string(), format!("attr {key} concept {value}")))
            .collect();
        lines.push((
            "render_node_cost".to_string(),
            format!(
                "attr render_node_cost numeric {} usd_per_core_hour",
                self.cost_cents as f64 / 100.0
            ),
        ));
        lines.push((
            "software".to_string(),
            format!("attr software concept {}@{}", self.product, self.label),
        ));
        lines.sort();
        for (_, line) in lines {
            writeln!(out, "{line}").expect("string write");
        }
    }
}

fn product_name(category: usize, product: usize) -> String {
    format!("{}_{}", CATEGORIES[category], PRODUCT_SUFFIXES[product])
}

fn skeleton() -> String {
    let mut out = String::from("# generated corpus ontology\nconcept render_services -\n");
    for (family, values) in COSMETIC_FAMILIES {
        writeln!(out, "concept {family} render_services").expect("string write");
        for value in values {
            writeln!(out, "concept {value} {family}").expect("string write");
        }
    }
    out.push_str("concept software render_services\n");
    for (c, category) in CATEGORIES.iter().enumerate() {
        writeln!(out, "concept {category} software").expect("string write");
        for p in 0..PRODUCT_SUFFIXES.len() {
            let product = product_name(c, p);
            writeln!(out, "concept {product} {category}").expect("string write");
            for label in 1..=VERSIONS_PER_PRODUCT {
                writeln!(out, "version {product}_v{label} {product} {label}")
                    .expect("string write");
            }
        }
    }
    out
}

fn random_cosmetics(rng: &mut ChaCha8Rng) -> Vec<(&'static str, &'static str)> {
    COSMETIC_FAMILIES
        .iter()
        .map(|(family, values)| (*family, *values.choose(rng).expect("non-empty family")))
        .collect()
}

fn swap_one_cosmetic(rng: &mut ChaCha8Rng, cosmetics: &mut [(&'static str, &'static str)]) {
    let slot = rng.gen_range(0..cosmetics.len());
    let (family, current) = cosmetics[slot];
    let values = COSMETIC_FAMILIES
        .iter()
        .find(|(name, _)| *name == family)
        .expect("family exists")
        .1;
    let replacement = loop {
        let candidate = values.choose(rng).expect("non-empty family");
        if *candidate != current {
            break candidate;
        }
    };
    cosmetics[slot] = (family, replacement);
}

fn shifted_label(rng: &mut ChaCha8Rng, label: u32) -> u32 {
    let shift = rng.gen_range(1..=3);
    let candidate = if rng.gen_bool(0.5) {
        label.saturating_add(shift).min(VERSIONS_PER_PRODUCT)
    } else {
        label.saturating_sub(shift).max(1)
    };
    if candidate == label {
        if label < VERSIONS_PER_PRODUCT {
            label + 1
        } else {
            label - 1
        }
    } else {
        candidate
    }
}

/// Generates a corpus of `queries * 10` services. `queries` must be
/// between 1 and [`MAX_QUERIES`]. Identical inputs produce byte-identical
/// documents.
pub fn generate(queries: usize, seed: u64) -> SyntheticCorpus {
    assert!(
        (1..=MAX_QUERIES).contains(&queries),
        "queries must be in 1..={MAX_QUERIES}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut profile_docs: Vec<String> = Vec::new();
    let mut query_docs: Vec<String> = Vec::new();
    // (query id, service id, category, cost) for the rule-based gold pass.
    let mut queries_meta: Vec<(String, Entry)> = Vec::new();
    let mut services_meta: Vec<(String, Entry)> = Vec::new();

    for q in 0..queries {
        let query_id = format!("q{q:02}");
        let product_idx = rng.gen_range(0..PRODUCT_SUFFIXES.len());
        let query_entry = Entry {
            category: q,
            product: product_name(q, product_idx),
            label: rng.gen_range(2..=VERSIONS_PER_PRODUCT - 1),
            cosmetics: random_cosmetics(&mut rng),
            cost_cents: rng.gen_range(200..=500),
        };

        let mut doc = format!("query {query_id}\n");
        query_entry.write_attrs(&mut doc);
        doc.push_str("end\n");
        query_docs.push(doc);

        for v in 0..VERBATIM_PER_QUERY {
            services_meta.push((format!("{query_id}_verbatim{v}"), query_entry.clone()));
        }

        for n in 0..NEAR_PER_QUERY {
            let mut entry = query_entry.clone();
            if rng.gen_bool(0.5) {
                let sibling = loop {
                    let candidate = rng.gen_range(0..PRODUCT_SUFFIXES.len());
                    if candidate != product_idx {
                        break candidate;
                    }
                };
                entry.product = product_name(q, sibling);
                entry.label = rng.gen_range(1..=VERSIONS_PER_PRODUCT);
            } else {
                entry.label = shifted_label(&mut rng, entry.label);
            }
            let delta = rng.gen_range(5..=30);
            entry.cost_cents += if rng.gen_bool(0.5) { delta } else { -delta };
            if rng.gen_bool(0.5) {
                swap_one_cosmetic(&mut rng, &mut entry.cosmetics);
            }
            services_meta.push((format!("{query_id}_near{n}"), entry));
        }

        for b in 0..BAITS_PER_QUERY {
            let mut entry = query_entry.clone();
            entry.cost_cents += rng.gen_range(460..=520);
            services_meta.push((format!("{query_id}_bait{b}"), entry));
        }

        for d in 0..DISTRACTORS_PER_QUERY {
            let category = rng.gen_range(MAX_QUERIES..CATEGORIES.len());
            let entry = Entry {
                category,
                product: product_name(category, rng.gen_range(0..PRODUCT_SUFFIXES.len())),
                label: rng.gen_range(1..=VERSIONS_PER_PRODUCT),
                cosmetics: random_cosmetics(&mut rng),
                cost_cents: query_entry.cost_cents + rng.gen_range(460..=520),
            };
            services_meta.push((format!("{query_id}_distractor{d}"), entry));
        }

        queries_meta.push((query_id, query_entry));
    }

    for (service_id, entry) in &services_meta {
        let mut doc = format!("service {service_id}\n");
        entry.write_attrs(&mut doc);
        doc.push_str("end\n");
        profile_docs.push(doc);
    }

    // Gold comes from the rule, applied to every (query, service) pair.
    // The construction above makes it coincide with verbatim + near.
    let mut gold_lines: Vec<String> = Vec::new();
    for (query_id, query_entry) in &queries_meta {
        let mut relevant: Vec<&str> = Vec::new();
        for (service_id, entry) in &services_meta {
            let same_category = entry.category == query_entry.category;
            let close_cost =
                (entry.cost_cents - query_entry.cost_cents).abs() <= RELEVANT_COST_CENTS;
            if same_category && close_cost {
                relevant.push(service_id);
            }
        }
        assert_eq!(
            relevant.len(),
            RELEVANT_PER_QUERY,
            "rule must select exactly the verbatim and near services"
        );
        for service_id in relevant {
            assert!(
                service_id.starts_with(&format!("{query_id}_verbatim"))
                    || service_id.starts_with(&format!("{query_id}_near")),
                "unexpected relevant service {service_id} for {query_id}"
            );
            gold_lines.push(format!("relevant {query_id} {service_id}"));
        }
    }
    gold_lines.sort();

    SyntheticCorpus {
        ontology: skeleton(),
        profiles: profile_docs.join("\n"),
        queries: query_docs.join("\n"),
        gold: gold_lines.join("\n") + "\n",
    }
}
