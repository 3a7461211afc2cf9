//! Concept graph: a rooted tree of render-farm concepts with optional
//! version nodes and alias lookup.
//!
//! Graphs are loaded from a line-oriented text format and are immutable
//! afterwards, so they can be shared freely across threads.
//!
//! ```text
//! # comment
//! concept <id> <parent-id|->      '-' marks the single root
//! version <id> <parent-id> <label>
//! alias <node-id> <alias-text...>
//! ```
//!
//! Directives may appear in any order; validation runs after the whole
//! document has been read.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::error::{Error, Result};

/// Index of a node inside its [`ConceptGraph`].
///
/// Ids are only meaningful for the graph that issued them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Concept,
    /// Version of its parent concept; the label is the release-order
    /// position (1 = oldest).
    Version { label: u32 },
}

#[derive(Debug, Clone)]
pub struct ConceptNode {
    /// Normalized identifier, unique within the graph.
    pub id: String,
    /// Identifier as written in the source document.
    pub display_name: String,
    pub kind: NodeKind,
    pub parent: Option<NodeId>,
    depth: u32,
}

/// Rooted tree of concepts and versions, with exact-match alias lookup.
#[derive(Debug, Clone)]
pub struct ConceptGraph {
    nodes: Vec<ConceptNode>,
    children: Vec<Vec<NodeId>>,
    root: NodeId,
    by_id: HashMap<String, NodeId>,
    aliases: HashMap<String, NodeId>,
}

/// Lowercases, trims, and collapses every run of whitespace or punctuation
/// into a single underscore, so `"3Ds Max"` and `"3ds_max"` compare equal.
pub fn normalize_term(term: &str) -> String {
    let mut out = String::with_capacity(term.len());
    let mut pending_sep = false;
    for ch in term.trim().chars() {
        if ch.is_alphanumeric() {
            // Lowercasing can emit combining marks; drop them so repeated
            // normalization is a no-op.
            let mut pushed_any = false;
            for lower in ch.to_lowercase().filter(|c| c.is_alphanumeric()) {
                if !pushed_any && pending_sep && !out.is_empty() {
                    out.push('_');
                }
                pushed_any = true;
                out.push(lower);
            }
            if pushed_any {
                pending_sep = false;
            }
        } else {
            pending_sep = true;
        }
    }
    out
}

struct NodeDecl {
    line: usize,
    id: String,
    display_name: String,
    parent: Option<String>,
    kind: NodeKind,
}

struct AliasDecl {
    line: usize,
    target: String,
    alias: String,
    alias_raw: String,
}

impl ConceptGraph {
    /// Parses a graph document, then validates the result as a whole:
    /// exactly one root, all parents known, no duplicate ids, no cycles,
    /// unique version labels per concept, and unambiguous aliases.
    pub fn parse(text: &str) -> Result<Self> {
        let mut decls: Vec<NodeDecl> = Vec::new();
        let mut alias_decls: Vec<AliasDecl> = Vec::new();

        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw_line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let directive = tokens.next().expect("non-empty line has a token");
            match directive {
                "concept" => {
                    let (id, parent) = match (tokens.next(), tokens.next(), tokens.next()) {
                        (Some(id), Some(parent), None) => (id, parent),
                        _ => {
                            return Err(Error::parse(
                                line,
                                "expected `concept <id> <parent-id|->`",
                            ))
                        }
                    };
                    decls.push(NodeDecl {
                        line,
                        id: non_empty_id(line, id)?,
                        display_name: id.to_string(),
                        parent: (parent != "-").then(|| normalize_term(parent)),
                        kind: NodeKind::Concept,
                    });
                }
                "version" => {
                    let (id, parent, label) =
                        match (tokens.next(), tokens.next(), tokens.next(), tokens.next()) {
                            (Some(id), Some(parent), Some(label), None) => (id, parent, label),
                            _ => {
                                return Err(Error::parse(
                                    line,
                                    "expected `version <id> <parent-id> <label>`",
                                ))
                            }
                        };
                    if parent == "-" {
                        return Err(Error::parse(line, "a version node cannot be the root"));
                    }
                    let label: u32 = label.parse().ok().filter(|l| *l > 0).ok_or_else(|| {
                        Error::parse(line, format!("version label `{label}` must be a positive integer"))
                    })?;
                    decls.push(NodeDecl {
                        line,
                        id: non_empty_id(line, id)?,
                        display_name: id.to_string(),
                        parent: Some(normalize_term(parent)),
                        kind: NodeKind::Version { label },
                    });
                }
                "alias" => {
                    let target = tokens.next().ok_or_else(|| {
                        Error::parse(line, "expected `alias <node-id> <alias-text...>`")
                    })?;
                    let alias_raw = tokens.collect::<Vec<_>>().join(" ");
                    let alias = normalize_term(&alias_raw);
                    if alias.is_empty() {
                        return Err(Error::parse(line, "alias text must not be empty"));
                    }
                    alias_decls.push(AliasDecl {
                        line,
                        target: normalize_term(target),
                        alias,
                        alias_raw,
                    });
                }
                other => {
                    return Err(Error::parse(line, format!("unknown directive `{other}`")));
                }
            }
        }

        if decls.is_empty() {
            return Err(Error::Ontology(
                "document declares no concepts".to_string(),
            ));
        }

        let mut by_id: HashMap<String, NodeId> = HashMap::with_capacity(decls.len());
        for (i, decl) in decls.iter().enumerate() {
            match by_id.entry(decl.id.clone()) {
                Entry::Vacant(slot) => {
                    slot.insert(NodeId(i as u32));
                }
                Entry::Occupied(_) => {
                    return Err(Error::Ontology(format!(
                        "duplicate node id `{}` (line {})",
                        decl.id, decl.line
                    )))
                }
            }
        }

        let mut nodes: Vec<ConceptNode> = Vec::with_capacity(decls.len());
        let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); decls.len()];
        let mut root: Option<NodeId> = None;
        for (i, decl) in decls.iter().enumerate() {
            let this = NodeId(i as u32);
            let parent = match &decl.parent {
                None => {
                    if let Some(prev) = root {
                        return Err(Error::Ontology(format!(
                            "multiple roots: `{}` and `{}`",
                            nodes[prev.index()].id, decl.id
                        )));
                    }
                    root = Some(this);
                    None
                }
                Some(parent_id) => {
                    let parent = *by_id.get(parent_id).ok_or_else(|| {
                        Error::Ontology(format!(
                            "node `{}` references unknown parent `{parent_id}`",
                            decl.id
                        ))
                    })?;
                    children[parent.index()].push(this);
                    Some(parent)
                }
            };
            nodes.push(ConceptNode {
                id: decl.id.clone(),
                display_name: decl.display_name.clone(),
                kind: decl.kind,
                parent,
                depth: 0,
            });
        }
        let root = root.ok_or_else(|| {
            Error::Ontology("no root concept (exactly one must have parent `-`)".to_string())
        })?;

        // A version hangs off the concept it versions, never off another
        // version, and labels are unique among siblings.
        for node in &nodes {
            if let NodeKind::Version { label } = node.kind {
                let parent = node.parent.expect("versions always have a parent");
                match nodes[parent.index()].kind {
                    NodeKind::Concept => {}
                    NodeKind::Version { .. } => {
                        return Err(Error::Ontology(format!(
                            "version `{}` must attach to a concept, but `{}` is a version",
                            node.id,
                            nodes[parent.index()].id
                        )))
                    }
                }
                let duplicates = children[parent.index()]
                    .iter()
                    .filter(|child| {
                        matches!(nodes[child.index()].kind, NodeKind::Version { label: l } if l == label)
                    })
                    .count();
                if duplicates > 1 {
                    return Err(Error::Ontology(format!(
                        "concept `{}` declares version label {label} more than once",
                        nodes[parent.index()].id
                    )));
                }
            }
        }

        // Depth assignment doubles as the cycle check: parent links that
        // never reach the root leave nodes unvisited.
        let mut depth = vec![u32::MAX; nodes.len()];
        let mut queue = std::collections::VecDeque::from([root]);
        depth[root.index()] = 0;
        let mut visited = 0usize;
        while let Some(at) = queue.pop_front() {
            visited += 1;
            for &child in &children[at.index()] {
                depth[child.index()] = depth[at.index()] + 1;
                queue.push_back(child);
            }
        }
        if visited != nodes.len() {
            let stray = nodes
                .iter()
                .enumerate()
                .find(|(i, _)| depth[*i] == u32::MAX)
                .map(|(_, n)| n.id.clone())
                .expect("some node was not visited");
            return Err(Error::Ontology(format!(
                "node `{stray}` is not reachable from the root (cycle in parent links)"
            )));
        }
        for (i, node) in nodes.iter_mut().enumerate() {
            node.depth = depth[i];
        }

        let mut aliases: HashMap<String, NodeId> = HashMap::new();
        for decl in &alias_decls {
            let target = *by_id.get(&decl.target).ok_or_else(|| {
                Error::Ontology(format!(
                    "alias `{}` (line {}) references unknown node `{}`",
                    decl.alias_raw, decl.line, decl.target
                ))
            })?;
            if let Some(&existing) = by_id.get(&decl.alias) {
                if existing != target {
                    return Err(Error::Ontology(format!(
                        "alias `{}` collides with node id `{}`",
                        decl.alias_raw, decl.alias
                    )));
                }
                continue;
            }
            match aliases.entry(decl.alias.clone()) {
                Entry::Vacant(slot) => {
                    slot.insert(target);
                }
                Entry::Occupied(slot) => {
                    if *slot.get() != target {
                        return Err(Error::Ontology(format!(
                            "alias `{}` maps to both `{}` and `{}`",
                            decl.alias_raw,
                            nodes[slot.get().index()].id,
                            nodes[target.index()].id
                        )));
                    }
                }
            }
        }

        Ok(ConceptGraph {
            nodes,
            children,
            root,
            by_id,
            aliases,
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &ConceptNode {
        &self.nodes[id.index()]
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.index()].parent
    }

    /// Depth of the node below the root; the root has depth 0.
    pub fn depth(&self, id: NodeId) -> u32 {
        self.nodes[id.index()].depth
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &ConceptNode)> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (NodeId(i as u32), n))
    }

    /// Looks up a node by already-normalized id. Aliases are not consulted.
    pub fn get(&self, id: &str) -> Option<NodeId> {
        self.by_id.get(id).copied()
    }

    /// Resolves free text to a node: the term is normalized, then matched
    /// exactly against node ids and aliases. No fuzzy matching.
    pub fn resolve(&self, term: &str) -> Result<NodeId> {
        let normalized = normalize_term(term);
        self.by_id
            .get(&normalized)
            .or_else(|| self.aliases.get(&normalized))
            .copied()
            .ok_or_else(|| Error::UnresolvedTerm(term.trim().to_string()))
    }

    /// Upward closure of `id`: the node itself, every ancestor, and the
    /// root, ordered leaf to root. Never empty.
    pub fn ancestors(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = Vec::with_capacity(self.depth(id) as usize + 1);
        let mut at = Some(id);
        while let Some(node) = at {
            path.push(node);
            at = self.parent(node);
        }
        path
    }

    /// Size of the upward closure, `depth + 1`.
    pub fn ancestor_count(&self, id: NodeId) -> u32 {
        self.depth(id) + 1
    }

    /// Size of the intersection of the two upward closures, computed by
    /// lifting the deeper node and walking to the lowest common ancestor.
    pub fn shared_ancestor_count(&self, x: NodeId, y: NodeId) -> u32 {
        let (mut a, mut b) = (x, y);
        while self.depth(a) > self.depth(b) {
            a = self.parent(a).expect("deeper node has a parent");
        }
        while self.depth(b) > self.depth(a) {
            b = self.parent(b).expect("deeper node has a parent");
        }
        while a != b {
            a = self.parent(a).expect("nodes above depth 0 have parents");
            b = self.parent(b).expect("nodes above depth 0 have parents");
        }
        self.depth(a) + 1
    }

    /// Label of a version node; errors if `id` names a concept.
    pub fn version_label(&self, id: NodeId) -> Result<u32> {
        match self.nodes[id.index()].kind {
            NodeKind::Version { label } => Ok(label),
            NodeKind::Concept => Err(Error::NotAVersion(self.nodes[id.index()].id.clone())),
        }
    }

    /// Version children of a concept, in declaration order.
    pub fn versions(&self, concept: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.children[concept.index()]
            .iter()
            .copied()
            .filter(|c| matches!(self.nodes[c.index()].kind, NodeKind::Version { .. }))
    }

    /// Version child of `concept` carrying `label`.
    pub fn version_child(&self, concept: NodeId, label: u32) -> Result<NodeId> {
        self.versions(concept)
            .find(|v| matches!(self.nodes[v.index()].kind, NodeKind::Version { label: l } if l == label))
            .ok_or_else(|| Error::NoVersionWithLabel {
                concept: self.nodes[concept.index()].id.clone(),
                label,
            })
    }
}

fn non_empty_id(line: usize, raw: &str) -> Result<String> {
    let id = normalize_term(raw);
    if id.is_empty() {
        return Err(Error::parse(line, format!("id `{raw}` normalizes to nothing")));
    }
    Ok(id)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEVEN_NODE: &str = "\
concept software -
concept 3d_animation software
concept 3dsmax 3d_animation
concept ac3d 3d_animation
concept maya 3d_animation
concept 3d_modeling software
concept pencil2d 3d_modeling
";

    const VERSIONED: &str = "\
# animation software with maya releases
concept software -
concept animation_software software
concept 3d_animation animation_software
concept 3dsmax 3d_animation
concept ac3d 3d_animation
concept maya 3d_animation
concept 3d_modeling animation_software
concept pencil2d 3d_modeling

version maya_3_0 maya 7
version maya_4_0_2 maya 12
version maya_1_0 maya 1
alias 3dsmax 3Ds Max
alias ac3d AC 3D
";

    #[test]
    fn seven_node_document_loads() {
        let graph = ConceptGraph::parse(SEVEN_NODE).unwrap();
        assert_eq!(graph.len(), 7);
        assert_eq!(graph.node(graph.root()).id, "software");
    }

    #[test]
    fn ancestors_run_leaf_to_root_inclusive() {
        let graph = ConceptGraph::parse(SEVEN_NODE).unwrap();
        let max = graph.resolve("3dsmax").unwrap();
        let ids: Vec<&str> = graph
            .ancestors(max)
            .iter()
            .map(|&n| graph.node(n).id.as_str())
            .collect();
        assert_eq!(ids, ["3dsmax", "3d_animation", "software"]);
        assert_eq!(graph.ancestors(graph.root()), vec![graph.root()]);
    }

    #[test]
    fn ancestor_counts_match_figure_fixture() {
        let graph = ConceptGraph::parse(VERSIONED).unwrap();
        let max = graph.resolve("3dsmax").unwrap();
        let ac3d = graph.resolve("ac3d").unwrap();
        let pencil = graph.resolve("pencil2d").unwrap();
        assert_eq!(graph.ancestor_count(max), 4);
        assert_eq!(graph.ancestor_count(ac3d), 4);
        assert_eq!(graph.shared_ancestor_count(max, ac3d), 3);
        assert_eq!(graph.shared_ancestor_count(max, pencil), 2);
    }

    #[test]
    fn resolve_normalizes_and_follows_aliases() {
        let graph = ConceptGraph::parse(VERSIONED).unwrap();
        let max = graph.get("3dsmax").unwrap();
        assert_eq!(graph.resolve("3Ds Max").unwrap(), max);
        assert_eq!(graph.resolve("  3DSMAX ").unwrap(), max);
        assert_eq!(graph.resolve("ac-3d").unwrap(), graph.get("ac3d").unwrap());
        let err = graph.resolve("blender9000").unwrap_err();
        assert!(matches!(err, Error::UnresolvedTerm(t) if t == "blender9000"));
    }

    #[test]
    fn display_names_resolve_back_to_their_nodes() {
        let graph = ConceptGraph::parse(VERSIONED).unwrap();
        for (id, node) in graph.iter() {
            assert_eq!(graph.resolve(&node.display_name).unwrap(), id);
        }
    }

    #[test]
    fn version_labels_and_children() {
        let graph = ConceptGraph::parse(VERSIONED).unwrap();
        let maya = graph.resolve("maya").unwrap();
        let v12 = graph.resolve("maya_4_0_2").unwrap();
        assert_eq!(graph.version_label(v12).unwrap(), 12);
        assert_eq!(graph.version_child(maya, 7).unwrap(), graph.get("maya_3_0").unwrap());
        assert_eq!(graph.versions(maya).count(), 3);
        assert!(matches!(
            graph.version_label(maya).unwrap_err(),
            Error::NotAVersion(id) if id == "maya"
        ));
        assert!(matches!(
            graph.version_child(maya, 99).unwrap_err(),
            Error::NoVersionWithLabel { label: 99, .. }
        ));
    }

    #[test]
    fn empty_document_is_rejected() {
        let err = ConceptGraph::parse("# only a comment\n\n").unwrap_err();
        assert!(matches!(err, Error::Ontology(_)));
    }

    #[test]
    fn malformed_lines_carry_line_numbers() {
        let err = ConceptGraph::parse("concept a -\nconcept b\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = ConceptGraph::parse("frobnicate a b\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = ConceptGraph::parse("concept a -\nversion v a zero\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = ConceptGraph::parse("concept a -\nversion v a 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn structural_problems_are_semantic_errors() {
        let dup = ConceptGraph::parse("concept a -\nconcept A a\n").unwrap_err();
        assert!(dup.to_string().contains("duplicate node id `a`"), "{dup}");

        let two_roots = ConceptGraph::parse("concept a -\nconcept b -\n").unwrap_err();
        assert!(two_roots.to_string().contains("multiple roots"), "{two_roots}");

        let no_root = ConceptGraph::parse("concept a b\nconcept b a\n").unwrap_err();
        assert!(matches!(no_root, Error::Ontology(_)));

        let orphan = ConceptGraph::parse("concept a -\nconcept b ghost\n").unwrap_err();
        assert!(orphan.to_string().contains("unknown parent `ghost`"), "{orphan}");

        let cycle = ConceptGraph::parse("concept r -\nconcept a b\nconcept b a\n").unwrap_err();
        assert!(cycle.to_string().contains("cycle"), "{cycle}");

        let dup_label =
            ConceptGraph::parse("concept m -\nversion v1 m 3\nversion v2 m 3\n").unwrap_err();
        assert!(dup_label.to_string().contains("label 3"), "{dup_label}");

        let stacked = ConceptGraph::parse("concept m -\nversion v1 m 1\nversion v2 v1 2\n")
            .unwrap_err();
        assert!(stacked.to_string().contains("must attach to a concept"), "{stacked}");

        let clash = ConceptGraph::parse(
            "concept a -\nconcept b a\nconcept c a\nalias b x\nalias c x\n",
        )
        .unwrap_err();
        assert!(clash.to_string().contains("maps to both"), "{clash}");

        let shadows = ConceptGraph::parse("concept a -\nconcept b a\nalias a b\n").unwrap_err();
        assert!(shadows.to_string().contains("collides"), "{shadows}");
    }

    #[test]
    fn repeated_parses_are_identical() {
        let a = ConceptGraph::parse(VERSIONED).unwrap();
        let b = ConceptGraph::parse(VERSIONED).unwrap();
        let ids = |g: &ConceptGraph| {
            g.iter().map(|(_, n)| n.id.clone()).collect::<Vec<_>>()
        };
        assert_eq!(ids(&a), ids(&b));
        assert_eq!(a.root(), b.root());
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_term("3Ds Max"), "3ds_max");
        assert_eq!(normalize_term("  Mental Ray  "), "mental_ray");
        assert_eq!(normalize_term("maya 4.0.2"), "maya_4_0_2");
        assert_eq!(normalize_term("(CPU)"), "cpu");
        assert_eq!(normalize_term("a  --  b"), "a_b");
        assert_eq!(normalize_term("..."), "");
    }
}
