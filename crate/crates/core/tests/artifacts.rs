use std::collections::BTreeMap;
use std::fs;
use std::os::unix::fs::PermissionsExt;
use std::path::Path;

use pddl_forge_core::hierarchy::{build_hierarchy, to_dot, DotOptions, HierarchyError};
use pddl_forge_core::lint::lint;
use pddl_forge_core::render::{RenderError, Renderer};
use pddl_forge_core::scaffold::{new_project, ScaffoldError, TemplateSet};
use pddl_forge_core::snapshot::snapshot;
use pddl_forge_core::snippets::{get_snippet, list_snippets};
use pddl_forge_core::parse_domain;
use proptest::prelude::*;

/// `parents[i]` is the index of the parent of type `i + 1` among the
/// earlier types, or `None` for `object`.
fn forest() -> impl Strategy<Value = Vec<Option<usize>>> {
    (0usize..30).prop_flat_map(|n| {
        (0..n)
            .map(|i| prop::option::weighted(0.8, 0..i.max(1)).prop_map(move |p| p.filter(|_| i > 0)))
            .collect::<Vec<_>>()
    })
}

fn forest_domain(parents: &[Option<usize>]) -> String {
    let decls: Vec<String> = parents
        .iter()
        .enumerate()
        .map(|(i, p)| match p {
            Some(p) => format!("t{i} - t{p}"),
            None => format!("t{i}"),
        })
        .collect();
    // untyped names must come last or they would pick up the next parent
    let (typed, untyped): (Vec<_>, Vec<_>) = decls.into_iter().partition(|d| d.contains(" - "));
    format!("(define (domain f) (:types {} {}))", typed.join(" "), untyped.join(" "))
}

/// Layers below `object`, counting the root as one.
fn oracle_depth(parents: &[Option<usize>]) -> usize {
    let mut depth = vec![0usize; parents.len()];
    for (i, p) in parents.iter().enumerate() {
        depth[i] = p.map_or(2, |p| depth[p] + 1);
    }
    depth.into_iter().max().unwrap_or(1)
}

proptest! {
    #[test]
    fn hierarchy_matches_declarations(parents in forest()) {
        let d = parse_domain(&forest_domain(&parents));
        prop_assert!(d.diagnostics.is_empty(), "{:?}", d.diagnostics);
        let h = build_hierarchy(&d.ast).unwrap();
        prop_assert_eq!(h.node_count(), parents.len() + 1);
        prop_assert_eq!(h.edge_count(), h.node_count() - 1);
        prop_assert_eq!(h.depth(), oracle_depth(&parents));
        for (i, p) in parents.iter().enumerate() {
            let expected = p.map_or("object".to_string(), |p| format!("t{p}"));
            prop_assert_eq!(h.parent(&format!("t{i}").as_str().into()).map(|n| n.as_str().to_string()), Some(expected));
        }

        let dot = to_dot(&h, &DotOptions::default());
        prop_assert_eq!(&dot, &to_dot(&h, &DotOptions::default()));
        let edges = dot.lines().filter(|l| l.contains("->")).count();
        prop_assert_eq!(edges, h.edge_count());
        let no_root = to_dot(&h, &DotOptions { include_root: false, ..DotOptions::default() });
        prop_assert!(!no_root.contains("object"));
    }
}

#[test]
fn cycles_are_rejected() {
    let d = parse_domain("(define (domain c) (:types a - b b - c c - a))").ast;
    match build_hierarchy(&d) {
        Err(HierarchyError::CyclicTypes { cycle }) => assert_eq!(cycle.len(), 4),
        other => panic!("{other:?}"),
    }
}

fn stub(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
    fs::set_permissions(&path, fs::Permissions::from_mode(0o755)).unwrap();
    path.display().to_string()
}

#[test]
fn renderer_receives_dot_and_writes_png() {
    let dir = tempfile::tempdir().unwrap();
    // records its stdin and writes a PNG signature to the `-o` argument
    let prog = stub(
        dir.path(),
        "fake-dot",
        &format!("cat > {}/stdin.dot\nprintf '\\211PNG\\r\\n\\032\\n' > \"$3\"", dir.path().display()),
    );
    let r = Renderer::discover(Some(&prog)).unwrap();
    let out = dir.path().join("types.png");
    let dot = "digraph types {\n  object;\n}\n";
    let written = r.render_png(dot, &out).unwrap();
    assert_eq!(written, out);
    assert_eq!(&fs::read(&out).unwrap()[..8], b"\x89PNG\r\n\x1a\n");
    assert_eq!(fs::read_to_string(dir.path().join("stdin.dot")).unwrap(), dot);
    let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().filter_map(Result::ok).map(|e| e.file_name()).collect();
    assert_eq!(leftovers.len(), 3, "{leftovers:?}");
}

#[test]
fn failing_renderer_leaves_no_png() {
    let dir = tempfile::tempdir().unwrap();
    let prog = stub(dir.path(), "bad-dot", "echo 'syntax error' >&2\ntouch \"$3\"\nexit 1");
    let out = dir.path().join("types.png");
    match Renderer::discover(Some(&prog)).unwrap().render_png("digraph {}", &out) {
        Err(RenderError::RendererFailed { stderr, .. }) => assert!(stderr.contains("syntax error")),
        other => panic!("{other:?}"),
    }
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn hundred_snapshots_are_distinct_copies() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("depot.pddl");
    let content = "(define (domain depot)\n  (:predicates (on ?a ?b)))\n";
    fs::write(&src, content).unwrap();
    let before = fs::metadata(&src).unwrap().modified().unwrap();
    let snaps = dir.path().join("domains");
    let mut seen = BTreeMap::new();
    for _ in 0..100 {
        let s = snapshot(&src, &snaps).unwrap();
        assert_eq!(fs::read_to_string(&s.copy_path).unwrap(), content);
        assert!(seen.insert(s.copy_path.clone(), ()).is_none());
    }
    assert_eq!(fs::read_dir(&snaps).unwrap().count(), 100);
    assert_eq!(fs::read_to_string(&src).unwrap(), content);
    assert_eq!(fs::metadata(&src).unwrap().modified().unwrap(), before);
}

fn tree(root: &Path) -> Vec<String> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            let rel = p.strip_prefix(root).unwrap().display().to_string();
            if p.is_dir() {
                out.push(format!("{rel}/"));
                stack.push(p);
            } else {
                out.push(rel);
            }
        }
    }
    out.sort();
    out
}

#[test]
fn scaffold_creates_exact_tree_and_refuses_to_overwrite() {
    let dir = tempfile::tempdir().unwrap();
    let layout = new_project("rovers", dir.path(), &TemplateSet::default()).unwrap();
    let root = dir.path().join("rovers");
    assert_eq!(layout.root, root);
    assert_eq!(
        tree(&root),
        ["README.md", "domain.pddl", "domains/", "problems/", "problems/p01.pddl", "solutions/"]
    );
    for f in [layout.domain_file(), layout.problem_file()] {
        let text = fs::read_to_string(&f).unwrap();
        assert!(lint(&text).is_empty(), "{}: {:?}", f.display(), lint(&text));
    }
    let readme = fs::read_to_string(root.join("README.md")).unwrap();
    assert!(readme.contains("rovers"));

    let before: Vec<_> = tree(&root).into_iter().map(|p| (fs::read(root.join(&p)).ok(), p)).collect();
    match new_project("rovers", dir.path(), &TemplateSet::default()) {
        Err(ScaffoldError::AlreadyExists(p)) => assert_eq!(p, root),
        other => panic!("{other:?}"),
    }
    let after: Vec<_> = tree(&root).into_iter().map(|p| (fs::read(root.join(&p)).ok(), p)).collect();
    assert_eq!(before, after);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn scaffold_rejects_bad_names_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    for bad in ["", "1abc", "a b", "../x", "x/y"] {
        assert!(matches!(new_project(bad, dir.path(), &TemplateSet::default()), Err(ScaffoldError::InvalidName(_))), "{bad}");
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn every_snippet_fills_and_parses() {
    for (name, _) in list_snippets() {
        let text = get_snippet(&name, &BTreeMap::new()).unwrap();
        assert!(!text.contains("${"), "{name}: {text}");
    }
}
