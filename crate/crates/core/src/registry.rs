//! Service profiles and the registered-service store.
//!
//! Profiles and requirement sets share one line-oriented document format:
//!
//! ```text
//! service <id>                  |  query <id>
//! name <display text...>        |  attr <key> concept <node-id>[@<label>]
//! attr <key> numeric <value> <unit...>
//! end                           |  weight <key> <w>
//! ```
//!
//! `#` comments and blank lines are ignored. Attribute keys must belong to
//! the schema ([`crate::schema::ATTRIBUTE_KEYS`]) and concept references
//! must resolve against the graph, so a parsed document is always valid
//! with respect to the ontology it was parsed under.
//!
//! The registry itself is a single-writer structure: mutation goes through
//! `&mut self`, readers take cheap [`RegistrySnapshot`]s that are immune to
//! later writes. When a store path is configured every successful
//! [`ServiceRegistry::register`] rewrites the store file atomically
//! (temp file + rename); a failed write leaves both file and memory as
//! they were.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matchmaker::RequirementSet;
use crate::ontology::{normalize_term, ConceptGraph};
use crate::schema::{attribute_kind, AttributeKind, AttributeValue, ConceptRef};

/// One registered service: identifier, human-readable name, and its
/// schema-typed attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceProfile {
    /// Normalized unique identifier.
    pub service_id: String,
    /// Display name; defaults to the id when the document has no `name`.
    pub display_name: String,
    /// Attribute values keyed by schema key. Sorted, so serialization is
    /// canonical by construction.
    pub attributes: BTreeMap<String, AttributeValue>,
}

impl ServiceProfile {
    /// Parses exactly one profile document.
    pub fn parse(text: &str, graph: &ConceptGraph) -> Result<Self> {
        let mut all = Self::parse_all(text, graph)?;
        match (all.pop(), all.len()) {
            (Some(profile), 0) => Ok(profile),
            (None, _) => Err(Error::invalid("no profile document found")),
            (Some(_), n) => Err(Error::invalid(format!(
                "expected one profile document, found {}",
                n + 1
            ))),
        }
    }

    /// Parses a concatenation of profile documents, in order of appearance.
    pub fn parse_all(text: &str, graph: &ConceptGraph) -> Result<Vec<Self>> {
        let mut profiles = Vec::new();
        let mut current: Option<(usize, ServiceProfile)> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let Some(mut tokens) = content_tokens(raw) else { continue };
            let directive = tokens.next().expect("content line has a token");
            match (&mut current, directive) {
                (None, "service") => {
                    let id = doc_id(line, "service", &mut tokens)?;
                    current = Some((
                        line,
                        ServiceProfile {
                            service_id: id,
                            display_name: String::new(),
                            attributes: BTreeMap::new(),
                        },
                    ));
                }
                (None, _) => {
                    return Err(Error::parse(line, "expected `service <id>`"));
                }
                (Some((_, profile)), "name") => {
                    let name = rest_of(&mut tokens);
                    if name.is_empty() {
                        return Err(Error::parse(line, "`name` needs display text"));
                    }
                    if !profile.display_name.is_empty() {
                        return Err(Error::parse(line, "duplicate `name` line"));
                    }
                    profile.display_name = name;
                }
                (Some((_, profile)), "attr") => {
                    let (key, value) = parse_attr(line, &mut tokens, graph)?;
                    if profile.attributes.insert(key.clone(), value).is_some() {
                        return Err(Error::parse(line, format!("duplicate attribute `{key}`")));
                    }
                }
                (Some(_), "end") => {
                    expect_line_end(line, &mut tokens)?;
                    let (_, mut profile) = current.take().expect("inside a document");
                    if profile.display_name.is_empty() {
                        profile.display_name = profile.service_id.clone();
                    }
                    profiles.push(profile);
                }
                (Some(_), "service") => {
                    return Err(Error::parse(line, "previous document is missing `end`"));
                }
                (Some(_), other) => {
                    return Err(Error::parse(line, format!("unknown directive `{other}`")));
                }
            }
        }
        if let Some((start, profile)) = current {
            return Err(Error::parse(
                start,
                format!("document `{}` has no `end`", profile.service_id),
            ));
        }
        Ok(profiles)
    }

    /// Canonical document form: fixed directive order, attributes sorted
    /// by key, normalized numeric formatting. The name line is dropped
    /// when it would only repeat the service id.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "service {}", self.service_id).expect("string write");
        if self.display_name != self.service_id {
            writeln!(out, "name {}", self.display_name).expect("string write");
        }
        for (key, value) in &self.attributes {
            writeln!(out, "attr {key} {}", value.canonical()).expect("string write");
        }
        out.push_str("end\n");
        out
    }
}

/// Parses exactly one requirements document.
pub fn parse_requirements(text: &str, graph: &ConceptGraph) -> Result<RequirementSet> {
    let mut all = parse_all_requirements(text, graph)?;
    match (all.pop(), all.len()) {
        (Some(req), 0) => Ok(req),
        (None, _) => Err(Error::invalid("no requirements document found")),
        (Some(_), n) => Err(Error::invalid(format!(
            "expected one requirements document, found {}",
            n + 1
        ))),
    }
}

/// Weight declarations seen so far, with their line numbers so an
/// undeclared-attribute error can point at the offending line.
type WeightLines = Vec<(usize, String)>;

/// Parses a concatenation of requirements documents.
pub fn parse_all_requirements(text: &str, graph: &ConceptGraph) -> Result<Vec<RequirementSet>> {
    let mut queries = Vec::new();
    let mut current: Option<(usize, RequirementSet, WeightLines)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let Some(mut tokens) = content_tokens(raw) else { continue };
        let directive = tokens.next().expect("content line has a token");
        match (&mut current, directive) {
            (None, "query") => {
                let id = doc_id(line, "query", &mut tokens)?;
                current = Some((
                    line,
                    RequirementSet {
                        query_id: id,
                        entries: BTreeMap::new(),
                        weights: BTreeMap::new(),
                    },
                    Vec::new(),
                ));
            }
            (None, _) => {
                return Err(Error::parse(line, "expected `query <id>`"));
            }
            (Some((_, req, _)), "attr") => {
                let (key, value) = parse_attr(line, &mut tokens, graph)?;
                if req.entries.insert(key.clone(), value).is_some() {
                    return Err(Error::parse(line, format!("duplicate attribute `{key}`")));
                }
            }
            (Some((_, req, weight_lines)), "weight") => {
                let key = tokens
                    .next()
                    .ok_or_else(|| Error::parse(line, "expected `weight <key> <w>`"))?;
                let key = normalize_term(key);
                let w: f64 = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .filter(|w: &f64| w.is_finite() && *w >= 0.0)
                    .ok_or_else(|| {
                        Error::parse(line, "weight must be a finite non-negative number")
                    })?;
                expect_line_end(line, &mut tokens)?;
                if req.weights.insert(key.clone(), w).is_some() {
                    return Err(Error::parse(line, format!("duplicate weight for `{key}`")));
                }
                weight_lines.push((line, key));
            }
            (Some(_), "end") => {
                expect_line_end(line, &mut tokens)?;
                let (start, req, weight_lines) = current.take().expect("inside a document");
                if req.entries.is_empty() {
                    return Err(Error::parse(
                        start,
                        format!("query `{}` declares no attributes", req.query_id),
                    ));
                }
                for (wline, key) in &weight_lines {
                    if !req.entries.contains_key(key) {
                        return Err(Error::parse(
                            *wline,
                            format!("weight for undeclared attribute `{key}`"),
                        ));
                    }
                }
                if req.entries.keys().all(|k| req.weight(k) == 0.0) {
                    return Err(Error::ZeroWeight(req.query_id.clone()));
                }
                queries.push(req);
            }
            (Some(_), "query") => {
                return Err(Error::parse(line, "previous document is missing `end`"));
            }
            (Some(_), other) => {
                return Err(Error::parse(line, format!("unknown directive `{other}`")));
            }
        }
    }
    if let Some((start, req, _)) = current {
        return Err(Error::parse(
            start,
            format!("document `{}` has no `end`", req.query_id),
        ));
    }
    Ok(queries)
}

/// Skips blank and comment lines; otherwise yields the line's tokens.
fn content_tokens(raw: &str) -> Option<std::str::SplitWhitespace<'_>> {
    let trimmed = raw.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return None;
    }
    Some(trimmed.split_whitespace())
}

fn doc_id(
    line: usize,
    directive: &str,
    tokens: &mut std::str::SplitWhitespace<'_>,
) -> Result<String> {
    let raw = tokens
        .next()
        .ok_or_else(|| Error::parse(line, format!("expected `{directive} <id>`")))?;
    expect_line_end(line, tokens)?;
    let id = normalize_term(raw);
    if id.is_empty() {
        return Err(Error::parse(line, format!("id `{raw}` normalizes to nothing")));
    }
    Ok(id)
}

fn rest_of(tokens: &mut std::str::SplitWhitespace<'_>) -> String {
    tokens.collect::<Vec<_>>().join(" ")
}

fn expect_line_end(line: usize, tokens: &mut std::str::SplitWhitespace<'_>) -> Result<()> {
    match tokens.next() {
        None => Ok(()),
        Some(extra) => Err(Error::parse(line, format!("unexpected trailing `{extra}`"))),
    }
}

/// Parses `<key> concept <ref>` or `<key> numeric <value> <unit...>` after
/// the `attr` directive, enforcing the schema's key set and kinds.
fn parse_attr(
    line: usize,
    tokens: &mut std::str::SplitWhitespace<'_>,
    graph: &ConceptGraph,
) -> Result<(String, AttributeValue)> {
    let key = tokens
        .next()
        .ok_or_else(|| Error::parse(line, "expected `attr <key> <concept|numeric> ...`"))?;
    let key = normalize_term(key);
    let declared = attribute_kind(&key)
        .ok_or_else(|| Error::parse(line, format!("unknown attribute key `{key}`")))?;
    let kind_token = tokens
        .next()
        .ok_or_else(|| Error::parse(line, "attribute is missing its kind (`concept` or `numeric`)"))?;
    match (kind_token, declared) {
        ("concept", AttributeKind::Concept) => {
            let reference = tokens
                .next()
                .ok_or_else(|| Error::parse(line, "expected a concept reference"))?;
            expect_line_end(line, tokens)?;
            let reference = ConceptRef::parse(reference)
                .map_err(|e| Error::parse(line, e.to_string()))?;
            // Resolving now means a stored profile can always be scored later.
            reference
                .resolve(graph)
                .map_err(|e| Error::parse(line, e.to_string()))?;
            Ok((key, AttributeValue::Concept(reference)))
        }
        ("numeric", AttributeKind::Numeric) => {
            let value: f64 = tokens
                .next()
                .and_then(|t| t.parse().ok())
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::parse(line, "expected a finite numeric value"))?;
            let unit = rest_of(tokens);
            if unit.is_empty() {
                return Err(Error::parse(line, "numeric attribute is missing its unit"));
            }
            Ok((key, AttributeValue::Numeric { value, unit }))
        }
        ("concept", AttributeKind::Numeric) | ("numeric", AttributeKind::Concept) => {
            Err(Error::parse(
                line,
                format!("attribute `{key}` is declared {declared:?} in the schema"),
            ))
        }
        (other, _) => Err(Error::parse(
            line,
            format!("unknown attribute kind `{other}` (use `concept` or `numeric`)"),
        )),
    }
}

/// Mutable collection of registered services with optional file backing.
#[derive(Debug)]
pub struct ServiceRegistry {
    profiles: Arc<BTreeMap<String, ServiceProfile>>,
    revision: u64,
    store_path: Option<PathBuf>,
}

/// Immutable view of the registry at one revision. Cheap to clone; never
/// sees writes made after it was taken.
#[derive(Debug, Clone)]
pub struct RegistrySnapshot {
    profiles: Arc<BTreeMap<String, ServiceProfile>>,
    revision: u64,
}

impl Default for ServiceRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl ServiceRegistry {
    /// In-memory registry with no file backing.
    pub fn new() -> Self {
        ServiceRegistry {
            profiles: Arc::new(BTreeMap::new()),
            revision: 0,
            store_path: None,
        }
    }

    /// Opens a file-backed registry. A missing file is an empty registry;
    /// an existing one is parsed and validated against `graph`.
    pub fn with_store(path: impl Into<PathBuf>, graph: &ConceptGraph) -> Result<Self> {
        let path = path.into();
        if !path.exists() {
            return Ok(ServiceRegistry {
                profiles: Arc::new(BTreeMap::new()),
                revision: 0,
                store_path: Some(path),
            });
        }
        let text = std::fs::read_to_string(&path)?;
        let revision_header = text.lines().next().and_then(parse_revision_header);
        let mut profiles = BTreeMap::new();
        for profile in ServiceProfile::parse_all(&text, graph)? {
            profiles.insert(profile.service_id.clone(), profile);
        }
        let revision = revision_header.unwrap_or(profiles.len() as u64);
        Ok(ServiceRegistry {
            profiles: Arc::new(profiles),
            revision,
            store_path: Some(path),
        })
    }

    /// Inserts or replaces a profile and returns the new revision. With a
    /// store configured the file is rewritten first; on failure neither
    /// the file nor the in-memory state changes.
    pub fn register(&mut self, profile: ServiceProfile) -> Result<u64> {
        let mut next = (*self.profiles).clone();
        next.insert(profile.service_id.clone(), profile);
        let next_revision = self.revision + 1;
        if let Some(path) = &self.store_path {
            atomic_write(path, &store_text(&next, next_revision))?;
        }
        self.profiles = Arc::new(next);
        self.revision = next_revision;
        Ok(next_revision)
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn contains(&self, service_id: &str) -> bool {
        self.profiles.contains_key(service_id)
    }

    pub fn snapshot(&self) -> RegistrySnapshot {
        RegistrySnapshot {
            profiles: Arc::clone(&self.profiles),
            revision: self.revision,
        }
    }
}

impl RegistrySnapshot {
    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn get(&self, service_id: &str) -> Option<&ServiceProfile> {
        self.profiles.get(service_id)
    }

    /// Profiles in canonical (id-sorted) order.
    pub fn profiles(&self) -> impl Iterator<Item = &ServiceProfile> {
        self.profiles.values()
    }

    /// Canonical listing: every profile's canonical document, id-sorted,
    /// separated by blank lines. Byte-stable for a given set of profiles.
    pub fn canonical_listing(&self) -> String {
        listing(&self.profiles)
    }
}

fn listing(profiles: &BTreeMap<String, ServiceProfile>) -> String {
    let mut out = String::new();
    for (i, profile) in profiles.values().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&profile.canonical_text());
    }
    out
}

/// Store file layout: a revision header comment, then the canonical listing.
fn store_text(profiles: &BTreeMap<String, ServiceProfile>, revision: u64) -> String {
    format!("# revision {revision}\n{}", listing(profiles))
}

fn parse_revision_header(line: &str) -> Option<u64> {
    line.strip_prefix("# revision ")?.trim().parse().ok()
}

/// Writes via a temp file in the target directory, fsyncs, then renames.
fn atomic_write(path: &Path, text: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRAPH: &str = "\
concept render_farm -
concept software render_farm
concept 3d_animation software
concept maya 3d_animation
concept cinema_4d 3d_animation
concept os render_farm
concept mac os
concept windows os
version maya_3_0 maya 7
version maya_4_0_2 maya 12
";

    fn graph() -> ConceptGraph {
        ConceptGraph::parse(GRAPH).unwrap()
    }

    const PROFILE: &str = "\
# demo service
service render_one
name Render One
attr software concept maya@7
attr os concept mac
attr render_node_cost numeric 0.60 usd_per_core_hour
end
";

    #[test]
    fn profile_parses_with_typed_attributes() {
        let p = ServiceProfile::parse(PROFILE, &graph()).unwrap();
        assert_eq!(p.service_id, "render_one");
        assert_eq!(p.display_name, "Render One");
        assert_eq!(p.attributes.len(), 3);
        assert_eq!(
            p.attributes["software"],
            AttributeValue::Concept(ConceptRef { node: "maya".into(), label: Some(7) })
        );
        match &p.attributes["render_node_cost"] {
            AttributeValue::Numeric { value, unit } => {
                assert_eq!(*value, 0.6);
                assert_eq!(unit, "usd_per_core_hour");
            }
            other => panic!("expected numeric, got {other:?}"),
        }
    }

    #[test]
    fn canonical_text_round_trips_and_normalizes() {
        let g = graph();
        let messy = "\
service  Render-One
attr render_node_cost numeric 0.60 usd_per_core_hour

attr software concept MAYA@7
end
";
        let p = ServiceProfile::parse(messy, &g).unwrap();
        let canonical = p.canonical_text();
        let reparsed = ServiceProfile::parse(&canonical, &g).unwrap();
        assert_eq!(p, reparsed);
        assert_eq!(canonical, reparsed.canonical_text());
        // Attributes come out key-sorted, the id is normalized, and no
        // name line appears for a profile that never declared one.
        assert!(canonical.starts_with("service render_one\nattr render_node_cost"));
        assert!(canonical.contains("numeric 0.6 usd_per_core_hour"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let g = graph();
        let cases: &[(&str, usize, &str)] = &[
            ("service a\nattr colour concept mac\nend\n", 2, "unknown attribute key"),
            ("service a\nattr os concept mac\nattr os concept windows\nend\n", 3, "duplicate"),
            ("service a\nattr os numeric 4 units\nend\n", 2, "declared Concept"),
            ("service a\nattr os concept blender9000\nend\n", 2, "blender9000"),
            ("service a\nattr software concept maya@99\nend\n", 2, "no version with label 99"),
            ("service a\nattr render_node_cost numeric abc usd\nend\n", 2, "finite numeric"),
            ("service a\nattr render_node_cost numeric 4.5\nend\n", 2, "unit"),
            ("service a\nattr os concept mac extra\nend\n", 2, "trailing"),
            ("name orphan\n", 1, "expected `service <id>`"),
            ("service a\nfrobnicate\nend\n", 2, "unknown directive"),
            ("service a\nattr os concept mac\n", 1, "no `end`"),
            ("service a\nservice b\n", 2, "missing `end`"),
        ];
        for (text, line, needle) in cases {
            match ServiceProfile::parse_all(text, &g) {
                Err(Error::Parse { line: l, message }) => {
                    assert_eq!(l, *line, "wrong line for {text:?}: {message}");
                    assert!(message.contains(needle), "`{message}` lacks `{needle}`");
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn requirements_parse_with_weights() {
        let g = graph();
        let req = parse_requirements(
            "query q1\nattr software concept maya@7\nattr os concept mac\nweight os 3\nend\n",
            &g,
        )
        .unwrap();
        assert_eq!(req.query_id, "q1");
        assert_eq!(req.entries.len(), 2);
        assert_eq!(req.weight("os"), 3.0);
        assert_eq!(req.weight("software"), 1.0);
    }

    #[test]
    fn requirements_validation() {
        let g = graph();
        assert!(matches!(
            parse_requirements("query q\nend\n", &g),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_requirements("query q\nattr os concept mac\nweight software 2\nend\n", &g),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_requirements("query q\nattr os concept mac\nweight os -1\nend\n", &g),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_requirements("query q\nattr os concept mac\nweight os 0\nend\n", &g),
            Err(Error::ZeroWeight(id)) if id == "q"
        ));
        // A zero weight is fine while any other entry still counts.
        let req = parse_requirements(
            "query q\nattr os concept mac\nattr software concept maya\nweight os 0\nend\n",
            &g,
        )
        .unwrap();
        assert_eq!(req.weight("os"), 0.0);
    }

    #[test]
    fn register_inserts_and_upserts() {
        let g = graph();
        let mut reg = ServiceRegistry::new();
        assert_eq!(reg.revision(), 0);
        let p = ServiceProfile::parse(PROFILE, &g).unwrap();
        assert_eq!(reg.register(p.clone()).unwrap(), 1);
        assert_eq!(reg.len(), 1);

        let mut updated = p.clone();
        updated.display_name = "Render One Deluxe".into();
        assert_eq!(reg.register(updated).unwrap(), 2);
        assert_eq!(reg.len(), 1);
        assert_eq!(
            reg.snapshot().get("render_one").unwrap().display_name,
            "Render One Deluxe"
        );
    }

    #[test]
    fn register_many() {
        let g = graph();
        let mut reg = ServiceRegistry::new();
        for i in 0..50 {
            let text = format!("service s{i:02}\nattr os concept mac\nend\n");
            reg.register(ServiceProfile::parse(&text, &g).unwrap()).unwrap();
        }
        assert_eq!(reg.len(), 50);
        assert_eq!(reg.revision(), 50);
    }

    #[test]
    fn snapshots_are_isolated_from_later_writes() {
        let g = graph();
        let mut reg = ServiceRegistry::new();
        reg.register(ServiceProfile::parse(PROFILE, &g).unwrap()).unwrap();
        let before = reg.snapshot();
        reg.register(
            ServiceProfile::parse("service other\nattr os concept windows\nend\n", &g).unwrap(),
        )
        .unwrap();
        assert_eq!(before.len(), 1);
        assert_eq!(before.revision(), 1);
        assert_eq!(reg.snapshot().len(), 2);
        assert!(before.get("other").is_none());
    }

    #[test]
    fn store_round_trips_profiles_and_revision() {
        let g = graph();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("services.store");

        let mut reg = ServiceRegistry::with_store(&path, &g).unwrap();
        assert_eq!(reg.len(), 0);
        reg.register(ServiceProfile::parse(PROFILE, &g).unwrap()).unwrap();
        let p2 = "service aaa_first\nattr os concept windows\nend\n";
        reg.register(ServiceProfile::parse(p2, &g).unwrap()).unwrap();
        // Upsert to push the revision past the profile count.
        reg.register(ServiceProfile::parse(p2, &g).unwrap()).unwrap();

        let reloaded = ServiceRegistry::with_store(&path, &g).unwrap();
        assert_eq!(reloaded.revision(), reg.revision());
        assert_eq!(reloaded.len(), reg.len());
        assert_eq!(
            reloaded.snapshot().canonical_listing(),
            reg.snapshot().canonical_listing()
        );
    }

    #[test]
    fn failed_persistence_leaves_registry_untouched() {
        let g = graph();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing_dir").join("services.store");
        let mut reg = ServiceRegistry {
            profiles: Arc::new(BTreeMap::new()),
            revision: 0,
            store_path: Some(path),
        };
        let err = reg.register(ServiceProfile::parse(PROFILE, &g).unwrap());
        assert!(err.is_err());
        assert_eq!(reg.len(), 0);
        assert_eq!(reg.revision(), 0);
    }

    #[test]
    fn listing_orders_services_by_id() {
        let g = graph();
        let mut reg = ServiceRegistry::new();
        reg.register(ServiceProfile::parse(PROFILE, &g).unwrap()).unwrap();
        reg.register(
            ServiceProfile::parse("service aaa_first\nattr os concept mac\nend\n", &g).unwrap(),
        )
        .unwrap();
        let listing = reg.snapshot().canonical_listing();
        let first = listing.find("service aaa_first").unwrap();
        let second = listing.find("service render_one").unwrap();
        assert!(first < second);
    }
}
