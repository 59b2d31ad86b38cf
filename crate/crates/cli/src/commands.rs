use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use pddl_forge_core::ast::Name;
use pddl_forge_core::distance::add_distances;
use pddl_forge_core::hierarchy::{build_hierarchy, predicate_counts, to_dot, DotOptions, RankDir};
use pddl_forge_core::lint::{classify, emit_scopes, lint, ColorMap, ScopeFormat};
use pddl_forge_core::printer::print_problem;
use pddl_forge_core::render::{RenderError, Renderer};
use pddl_forge_core::scaffold::{new_project, ScaffoldError, TemplateSet};
use pddl_forge_core::snapshot::snapshot;
use pddl_forge_core::snippets::{SnippetError, SnippetSet};
use pddl_forge_core::span::LineIndex;
use pddl_forge_core::{parse_domain, parse_problem, Code, Diagnostic};
use serde::Serialize;

use crate::config::Config;
use crate::error::{CliError, Status};
use crate::{CheckArgs, DiagramArgs, DistanceArgs, HighlightArgs, NewArgs, SnippetArgs};

type CmdResult = Result<Status, CliError>;

/// File contents, or a diagnostic at the first byte that is not UTF-8.
enum Source {
    Text(String),
    NotUtf8(Diagnostic),
}

fn read_source(path: &Path) -> Result<Source, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::env(format!("cannot read {}: {e}", path.display())))?;
    match String::from_utf8(bytes) {
        Ok(text) => Ok(Source::Text(text)),
        Err(e) => {
            let offset = e.utf8_error().valid_up_to();
            let prefix = String::from_utf8_lossy(&e.as_bytes()[..offset]).into_owned();
            let span = LineIndex::new(&prefix).span(offset, offset);
            let msg = format!("invalid UTF-8 at byte {offset}; PDDL files must be UTF-8 text");
            Ok(Source::NotUtf8(Diagnostic::error(Code::InvalidChar, span, msg)))
        }
    }
}

/// Read a file that must be UTF-8.
fn read_text(path: &Path) -> Result<String, CliError> {
    match read_source(path)? {
        Source::Text(t) => Ok(t),
        Source::NotUtf8(d) => Err(CliError::failed(format!("{}:{d}", path.display()))),
    }
}

fn report(path: &Path, diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        eprintln!("{}:{d}", path.display());
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::env(format!("cannot write {}: {e}", path.display())))
}

pub fn new(a: &NewArgs, cfg: &Config) -> CmdResult {
    if !a.dir.is_dir() {
        return Err(CliError::env(format!("directory {} does not exist", a.dir.display())));
    }
    let templates = match &cfg.template_dir {
        Some(dir) => TemplateSet::with_overrides(dir),
        None => Ok(TemplateSet::default()),
    };
    let layout = templates.and_then(|t| new_project(&a.name, &a.dir, &t)).map_err(|e| match e {
        ScaffoldError::InvalidName(_) => CliError::usage(e.to_string()),
        ScaffoldError::AlreadyExists(_) | ScaffoldError::InvalidTemplate { .. } => CliError::failed(e.to_string()),
        ScaffoldError::Io { .. } => CliError::env(e.to_string()),
    })?;
    println!("{}", layout.root.display());
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct Position {
    line: usize,
    column: usize,
    offset: usize,
}

#[derive(Serialize)]
struct Record<'a> {
    path: String,
    start: Position,
    end: Position,
    code: Code,
    severity: pddl_forge_core::Severity,
    message: &'a str,
}

impl<'a> Record<'a> {
    fn new(path: &Path, d: &'a Diagnostic) -> Record<'a> {
        let s = d.span;
        Record {
            path: path.display().to_string(),
            start: Position { line: s.start_line, column: s.start_col, offset: s.start_byte },
            end: Position { line: s.end_line, column: s.end_col, offset: s.end_byte },
            code: d.code,
            severity: d.severity,
            message: &d.message,
        }
    }
}

pub fn check(a: &CheckArgs) -> CmdResult {
    let mut all = Vec::new();
    for path in &a.paths {
        let diagnostics = match read_source(path)? {
            Source::Text(text) => lint(&text),
            Source::NotUtf8(d) => vec![d],
        };
        all.push((path, diagnostics));
    }
    if a.json {
        let records: Vec<Record> = all
            .iter()
            .flat_map(|(p, ds)| ds.iter().map(|d| Record::new(p, d)))
            .collect();
        println!("{}", serde_json::to_string_pretty(&records).expect("records serialize"));
    } else {
        for (p, ds) in &all {
            report(p, ds);
        }
    }
    let any = all.iter().any(|(_, ds)| !ds.is_empty());
    Ok(if any { Status::Failed } else { Status::Ok })
}

pub fn highlight(a: &HighlightArgs, cfg: &Config) -> CmdResult {
    let format: ScopeFormat = a.format.parse().map_err(|e| CliError::usage(format!("{e}")))?;
    let text = read_text(&a.path)?;
    let colors = if a.no_color {
        ColorMap::empty()
    } else {
        cfg.color_map().map_err(CliError::usage)?
    };
    let out = emit_scopes(&text, &classify(&text), format, &colors);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    if format == ScopeFormat::Json {
        let _ = stdout.write_all(b"\n");
    }
    Ok(Status::Ok)
}

pub fn diagram(a: &DiagramArgs, cfg: &Config) -> CmdResult {
    let rankdir: RankDir = a.rankdir.parse().map_err(CliError::usage)?;
    let text = read_text(&a.path)?;
    let parsed = parse_domain(&text);
    if !parsed.diagnostics.is_empty() {
        report(&a.path, &parsed.diagnostics);
        return Ok(Status::Failed);
    }
    let h = build_hierarchy(&parsed.ast).map_err(|e| CliError::failed(format!("{}: {e}", a.path.display())))?;
    let opts = DotOptions {
        rankdir,
        include_root: !a.no_root,
        predicate_counts: a.annotate.then(|| predicate_counts(&parsed.ast)),
    };
    let dot = to_dot(&h, &opts);
    let dot_path = a.output.clone().unwrap_or_else(|| a.path.with_extension("dot"));

    // Resolve the renderer before writing anything.
    let renderer = if a.png {
        Some(Renderer::discover(cfg.renderer_command.as_deref()).map_err(render_error)?)
    } else {
        None
    };
    write_file(&dot_path, &dot)?;
    println!("{}", dot_path.display());
    if let Some(r) = renderer {
        let png = r.render_png(&dot, &dot_path.with_extension("png")).map_err(render_error)?;
        println!("{}", png.display());
    }
    if a.snapshot {
        let dir = a.path.parent().unwrap_or(Path::new(".")).join("domains");
        let snap = snapshot(&a.path, &dir).map_err(|e| CliError::env(e.to_string()))?;
        println!("{}", snap.copy_path.display());
    }
    Ok(Status::Ok)
}

fn render_error(e: RenderError) -> CliError {
    match e {
        RenderError::RendererFailed { .. } => CliError::failed(e.to_string()),
        RenderError::RendererNotFound { .. } | RenderError::Io { .. } => CliError::env(e.to_string()),
    }
}

pub fn distance(a: &DistanceArgs, cfg: &Config) -> CmdResult {
    let mut dc = cfg.distance.to_config();
    if let Some(d) = a.decimals {
        dc.decimal_places = d;
    }
    if a.one_way {
        dc.symmetric = false;
    }
    dc.overwrite = a.overwrite;
    if let Some(t) = &a.target_type {
        dc.target_type = Some(Name::new(t.as_str()));
    }
    if let Some(f) = &a.distance_function {
        dc.distance_function = Name::new(f.as_str());
    }
    dc.validate().map_err(|e| CliError::usage(e.to_string()))?;

    let text = read_text(&a.path)?;
    let parsed = parse_problem(&text);
    if !parsed.diagnostics.is_empty() {
        report(&a.path, &parsed.diagnostics);
        return Ok(Status::Failed);
    }
    let out = add_distances(&parsed.ast, &dc).map_err(|e| CliError::failed(format!("{}: {e}", a.path.display())))?;
    let printed = print_problem(&out).map_err(|e| CliError::failed(e.to_string()))?;
    let target = if a.in_place {
        a.path.clone()
    } else {
        a.output.clone().unwrap_or_else(|| dist_path(&a.path))
    };
    write_file(&target, &printed)?;
    println!("{}", target.display());
    Ok(Status::Ok)
}

fn dist_path(p: &Path) -> PathBuf {
    let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    p.with_file_name(format!("{stem}-dist.pddl"))
}

pub fn snippet(a: &SnippetArgs, cfg: &Config) -> CmdResult {
    let set = match &cfg.snippet_dir {
        Some(dir) => SnippetSet::with_overrides(dir)
            .map_err(|e| CliError::env(format!("cannot read snippets from {}: {e}", dir.display())))?,
        None => SnippetSet::default(),
    };
    if a.list {
        for (name, kind) in set.list() {
            println!("{name}\t{kind}");
        }
        return Ok(Status::Ok);
    }
    let name = a.name.as_deref().expect("clap requires a name without --list");
    let mut params = BTreeMap::new();
    for p in &a.params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("expected KEY=VALUE, got `{p}`")))?;
        params.insert(k.to_string(), v.to_string());
    }
    let text = set.get(name, &params).map_err(|e: SnippetError| CliError::usage(e.to_string()))?;
    print!("{text}");
    Ok(Status::Ok)
}
