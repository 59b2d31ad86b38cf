//! Type hierarchy extraction and DOT output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::ast::{Domain, Name, Type};

pub const ROOT: &str = "object";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HierarchyError {
    #[error("cyclic type hierarchy: {}", cycle.iter().map(Name::as_str).collect::<Vec<_>>().join(" -> "))]
    CyclicTypes { cycle: Vec<Name> },
    #[error("types {} have an `(either …)` parent, which a tree diagram cannot show", names(.types))]
    EitherParentUnsupported { types: Vec<Name> },
}

fn names(ns: &[Name]) -> String {
    ns.iter().map(|n| format!("`{n}`")).collect::<Vec<_>>().join(", ")
}

/// Forest of declared types under the implicit root `object`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeHierarchy {
    nodes: BTreeSet<Name>,
    /// child -> parent
    parents: BTreeMap<Name, Name>,
}

impl TypeHierarchy {
    pub fn nodes(&self) -> impl Iterator<Item = &Name> {
        self.nodes.iter()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `(child, parent)` pairs, ordered by child.
    pub fn edges(&self) -> impl Iterator<Item = (&Name, &Name)> {
        self.parents.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.parents.len()
    }

    pub fn parent(&self, child: &Name) -> Option<&Name> {
        self.parents.get(child)
    }

    /// Nodes on the longest root-to-leaf path, counting the root.
    pub fn depth(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| {
                let mut d = 1;
                let mut cur = n;
                while let Some(p) = self.parents.get(cur) {
                    d += 1;
                    cur = p;
                }
                d
            })
            .max()
            .unwrap_or(1)
    }
}

pub fn build_hierarchy(domain: &Domain) -> Result<TypeHierarchy, HierarchyError> {
    let root = Name::new(ROOT);
    let mut nodes = BTreeSet::from([root.clone()]);
    let mut parents: BTreeMap<Name, Name> = BTreeMap::new();
    let mut either = Vec::new();

    for group in &domain.types {
        let parent = match &group.parent_type {
            Type::Named(p) => p,
            Type::Either(_) => {
                either.extend(group.items.iter().cloned());
                continue;
            }
        };
        nodes.insert(parent.clone());
        for item in &group.items {
            nodes.insert(item.clone());
            if parents.contains_key(item) || (*item == root && *parent == root) {
                continue;
            }
            parents.insert(item.clone(), parent.clone());
        }
    }
    if !either.is_empty() {
        return Err(HierarchyError::EitherParentUnsupported { types: either });
    }
    for n in &nodes {
        if *n != root && !parents.contains_key(n) {
            parents.insert(n.clone(), root.clone());
        }
    }
    if let Some(cycle) = find_cycle(&nodes, &parents) {
        return Err(HierarchyError::CyclicTypes { cycle });
    }
    Ok(TypeHierarchy { nodes, parents })
}

fn find_cycle(nodes: &BTreeSet<Name>, parents: &BTreeMap<Name, Name>) -> Option<Vec<Name>> {
    let mut finished: BTreeSet<&Name> = BTreeSet::new();
    for start in nodes {
        let mut path: Vec<&Name> = Vec::new();
        let mut cur = start;
        loop {
            if finished.contains(cur) {
                break;
            }
            if let Some(pos) = path.iter().position(|n| *n == cur) {
                let mut cycle: Vec<Name> = path[pos..].iter().map(|n| (*n).clone()).collect();
                cycle.push(cur.clone());
                return Some(cycle);
            }
            path.push(cur);
            match parents.get(cur) {
                Some(p) => cur = p,
                None => break,
            }
        }
        finished.extend(path);
    }
    None
}

/// Number of predicate declarations with a parameter of each type.
pub fn predicate_counts(domain: &Domain) -> BTreeMap<Name, usize> {
    let mut counts = BTreeMap::new();
    for p in &domain.predicates {
        let mut mentioned = BTreeSet::new();
        for group in &p.parameters {
            match &group.parent_type {
                Type::Named(t) => {
                    mentioned.insert(t.clone());
                }
                Type::Either(ts) => mentioned.extend(ts.iter().cloned()),
            }
        }
        for t in mentioned {
            *counts.entry(t).or_insert(0) += 1;
        }
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankDir {
    #[default]
    TopBottom,
    BottomTop,
    LeftRight,
    RightLeft,
}

impl RankDir {
    pub fn as_str(self) -> &'static str {
        match self {
            RankDir::TopBottom => "TB",
            RankDir::BottomTop => "BT",
            RankDir::LeftRight => "LR",
            RankDir::RightLeft => "RL",
        }
    }
}

impl std::str::FromStr for RankDir {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "TB" => Ok(RankDir::TopBottom),
            "BT" => Ok(RankDir::BottomTop),
            "LR" => Ok(RankDir::LeftRight),
            "RL" => Ok(RankDir::RightLeft),
            _ => Err(format!("unknown rank direction `{s}` (expected TB, BT, LR or RL)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DotOptions {
    pub rankdir: RankDir,
    /// Draw the implicit `object` root and its edges.
    pub include_root: bool,
    /// When set, each node label also shows how many predicates use the type.
    pub predicate_counts: Option<BTreeMap<Name, usize>>,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions { rankdir: RankDir::default(), include_root: true, predicate_counts: None }
    }
}

/// DOT digraph with one statement per type and one `parent -> child` edge
/// per subtype relation, in lexicographic order.
pub fn to_dot(h: &TypeHierarchy, opts: &DotOptions) -> String {
    let root = Name::new(ROOT);
    let shown = |n: &Name| opts.include_root || *n != root;
    let mut out = String::from("digraph types {\n");
    let _ = writeln!(out, "  rankdir={};", opts.rankdir.as_str());
    out.push_str("  node [shape=box];\n");
    for n in h.nodes.iter().filter(|n| shown(n)) {
        match &opts.predicate_counts {
            Some(counts) => {
                let c = counts.get(n).copied().unwrap_or(0);
                let plural = if c == 1 { "" } else { "s" };
                let label = format!("{n}\\n{c} predicate{plural}");
                let _ = writeln!(out, "  {} [label=\"{}\"];", dot_id(n.as_str()), label.replace('"', "\\\""));
            }
            None => {
                let _ = writeln!(out, "  {};", dot_id(n.as_str()));
            }
        }
    }
    let mut edges: Vec<(&Name, &Name)> = h.parents.iter().map(|(c, p)| (p, c)).collect();
    edges.sort();
    for (parent, child) in edges.into_iter().filter(|(p, c)| shown(p) && shown(c)) {
        let _ = writeln!(out, "  {} -> {};", dot_id(parent.as_str()), dot_id(child.as_str()));
    }
    out.push_str("}\n");
    out
}

const DOT_KEYWORDS: [&str; 6] = ["node", "edge", "graph", "digraph", "subgraph", "strict"];

/// Bare identifier when DOT allows it, quoted string otherwise.
fn dot_id(s: &str) -> String {
    let mut chars = s.chars();
    let plain = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !DOT_KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(s));
    if plain {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_domain;

    fn hierarchy(text: &str) -> Result<TypeHierarchy, HierarchyError> {
        let r = parse_domain(text);
        assert!(r.diagnostics.is_empty(), "{:?}", r.diagnostics);
        build_hierarchy(&r.ast)
    }

    #[test]
    fn no_types_is_just_the_root() {
        let h = hierarchy("(define (domain d))").unwrap();
        assert_eq!(h.node_count(), 1);
        assert_eq!(h.edge_count(), 0);
        assert_eq!(h.depth(), 1);
    }

    #[test]
    fn vehicles() {
        let h = hierarchy("(define (domain d) (:types truck car - vehicle))").unwrap();
        let nodes: Vec<&str> = h.nodes().map(Name::as_str).collect();
        assert_eq!(nodes, ["car", "object", "truck", "vehicle"]);
        assert_eq!(h.parent(&"truck".into()), Some(&"vehicle".into()));
        assert_eq!(h.parent(&"car".into()), Some(&"vehicle".into()));
        assert_eq!(h.parent(&"vehicle".into()), Some(&"object".into()));
        assert_eq!(h.edge_count(), 3);
        assert_eq!(h.depth(), 3);
    }

    #[test]
    fn explicit_object_is_not_duplicated() {
        let h = hierarchy("(define (domain d) (:types object a - object))").unwrap();
        assert_eq!(h.node_count(), 2);
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn cycles_are_reported() {
        let err = hierarchy("(define (domain d) (:types a - b b - c c - a))").unwrap_err();
        match err {
            HierarchyError::CyclicTypes { cycle } => {
                assert_eq!(cycle.first(), cycle.last());
                assert_eq!(cycle.len(), 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            hierarchy("(define (domain d) (:types object - thing))"),
            Err(HierarchyError::CyclicTypes { .. })
        ));
    }

    #[test]
    fn either_parents_are_rejected() {
        let err = hierarchy("(define (domain d) (:types a - (either b c)))").unwrap_err();
        assert_eq!(err, HierarchyError::EitherParentUnsupported { types: vec!["a".into()] });
    }

    #[test]
    fn dot_output() {
        let h = hierarchy("(define (domain d))").unwrap();
        let dot = to_dot(&h, &DotOptions { include_root: false, ..Default::default() });
        assert_eq!(dot, "digraph types {\n  rankdir=TB;\n  node [shape=box];\n}\n");

        let h = hierarchy("(define (domain d) (:types truck car - vehicle))").unwrap();
        let dot = to_dot(&h, &DotOptions::default());
        assert!(dot.contains("vehicle -> truck;"));
        assert!(dot.contains("vehicle -> car;"));
        assert!(dot.contains("object -> vehicle;"));
        assert_eq!(dot, to_dot(&h, &DotOptions::default()));
    }

    #[test]
    fn awkward_names_are_quoted() {
        assert_eq!(dot_id("truck"), "truck");
        assert_eq!(dot_id("heavy-truck"), "\"heavy-truck\"");
        assert_eq!(dot_id("node"), "\"node\"");
        assert_eq!(dot_id("Graph"), "\"Graph\"");
    }

    #[test]
    fn predicate_annotations() {
        let r = parse_domain(
            "(define (domain d) (:types a b) (:predicates (p ?x - a) (q ?x - a ?y - b) (r ?x - (either a b))))",
        );
        let counts = predicate_counts(&r.ast);
        assert_eq!(counts[&Name::new("a")], 3);
        assert_eq!(counts[&Name::new("b")], 2);
        let h = build_hierarchy(&r.ast).unwrap();
        let dot = to_dot(&h, &DotOptions { predicate_counts: Some(counts), ..Default::default() });
        assert!(dot.contains("a [label=\"a\\n3 predicates\"];"));
    }
}
