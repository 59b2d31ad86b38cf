//! Project skeletons.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use crate::ast::is_identifier;
use crate::parser::{parse_domain, parse_problem};

pub const SUBDIRS: [&str; 3] = ["domains", "problems", "solutions"];
pub const FILES: [&str; 3] = ["domain.pddl", "problems/p01.pddl", "README.md"];

const DOMAIN_FILE: &str = "domain.pddl";
const PROBLEM_FILE: &str = "problem.pddl";
const README_FILE: &str = "README.md";

#[derive(Debug, thiserror::Error)]
pub enum ScaffoldError {
    #[error("`{0}` already exists")]
    AlreadyExists(PathBuf),
    #[error("`{0}` is not a valid PDDL name (letters, digits, `-` and `_`, starting with a letter)")]
    InvalidName(String),
    #[error("template {file} does not parse cleanly after substitution: {message}")]
    InvalidTemplate { file: &'static str, message: String },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

fn io_err(context: impl Into<String>) -> impl FnOnce(io::Error) -> ScaffoldError {
    let context = context.into();
    move |source| ScaffoldError::Io { context, source }
}

/// Skeleton texts with `{project_name}`, `{domain_name}`, `{problem_name}`
/// and `{date}` placeholders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSet {
    pub domain: String,
    pub problem: String,
    pub readme: String,
}

impl Default for TemplateSet {
    fn default() -> Self {
        TemplateSet {
            domain: include_str!("../templates/domain.pddl").to_string(),
            problem: include_str!("../templates/problem.pddl").to_string(),
            readme: include_str!("../templates/README.md").to_string(),
        }
    }
}

impl TemplateSet {
    /// Defaults, replaced by any of `domain.pddl`, `problem.pddl` and
    /// `README.md` found in `dir`.
    pub fn with_overrides(dir: &Path) -> Result<TemplateSet, ScaffoldError> {
        let mut set = TemplateSet::default();
        for (file, slot) in [
            (DOMAIN_FILE, &mut set.domain),
            (PROBLEM_FILE, &mut set.problem),
            (README_FILE, &mut set.readme),
        ] {
            let path = dir.join(file);
            match fs::read_to_string(&path) {
                Ok(text) => *slot = text,
                Err(e) if e.kind() == io::ErrorKind::NotFound => {}
                Err(e) => return Err(io_err(format!("reading template {}", path.display()))(e)),
            }
        }
        Ok(set)
    }

    fn render(&self, v: &Values) -> Rendered {
        Rendered {
            domain: v.fill(&self.domain),
            problem: v.fill(&self.problem),
            readme: v.fill(&self.readme),
        }
    }
}

struct Values {
    project_name: String,
    domain_name: String,
    problem_name: String,
    date: String,
}

impl Values {
    fn fill(&self, template: &str) -> String {
        template
            .replace("{project_name}", &self.project_name)
            .replace("{domain_name}", &self.domain_name)
            .replace("{problem_name}", &self.problem_name)
            .replace("{date}", &self.date)
    }
}

struct Rendered {
    domain: String,
    problem: String,
    readme: String,
}

impl Rendered {
    fn validate(&self) -> Result<(), ScaffoldError> {
        let first = |d: &[crate::Diagnostic]| d.first().map(ToString::to_string);
        if let Some(message) = first(&parse_domain(&self.domain).diagnostics) {
            return Err(ScaffoldError::InvalidTemplate { file: DOMAIN_FILE, message });
        }
        if let Some(message) = first(&parse_problem(&self.problem).diagnostics) {
            return Err(ScaffoldError::InvalidTemplate { file: PROBLEM_FILE, message });
        }
        Ok(())
    }
}

/// A created project tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectLayout {
    pub root: PathBuf,
}

impl ProjectLayout {
    pub fn dirs(&self) -> Vec<PathBuf> {
        SUBDIRS.iter().map(|d| self.root.join(d)).collect()
    }

    pub fn files(&self) -> Vec<PathBuf> {
        FILES.iter().map(|f| self.root.join(f)).collect()
    }

    pub fn domain_file(&self) -> PathBuf {
        self.root.join(FILES[0])
    }

    pub fn problem_file(&self) -> PathBuf {
        self.root.join(FILES[1])
    }
}

pub fn new_project(name: &str, parent_dir: &Path, templates: &TemplateSet) -> Result<ProjectLayout, ScaffoldError> {
    new_project_dated(name, parent_dir, templates, chrono::Local::now().date_naive())
}

/// Create `parent_dir/name` with every file in place, or nothing at all.
pub fn new_project_dated(
    name: &str,
    parent_dir: &Path,
    templates: &TemplateSet,
    date: NaiveDate,
) -> Result<ProjectLayout, ScaffoldError> {
    if !is_identifier(name) {
        return Err(ScaffoldError::InvalidName(name.to_string()));
    }
    let root = parent_dir.join(name);
    if root.symlink_metadata().is_ok() {
        return Err(ScaffoldError::AlreadyExists(root));
    }
    let rendered = templates.render(&Values {
        project_name: name.to_string(),
        domain_name: name.to_string(),
        problem_name: format!("{name}-p01"),
        date: date.format("%Y-%m-%d").to_string(),
    });
    rendered.validate()?;

    let staging = parent_dir.join(format!(".{name}.staging-{}", std::process::id()));
    fs::create_dir(&staging).map_err(io_err(format!("creating {}", staging.display())))?;
    let result = populate(&staging, &rendered).and_then(|()| {
        if root.symlink_metadata().is_ok() {
            return Err(ScaffoldError::AlreadyExists(root.clone()));
        }
        fs::rename(&staging, &root).map_err(io_err(format!("creating {}", root.display())))
    });
    if result.is_err() {
        let _ = fs::remove_dir_all(&staging);
    }
    result.map(|()| ProjectLayout { root })
}

fn populate(dir: &Path, r: &Rendered) -> Result<(), ScaffoldError> {
    for sub in SUBDIRS {
        let p = dir.join(sub);
        fs::create_dir(&p).map_err(io_err(format!("creating {}", p.display())))?;
    }
    for (file, text) in FILES.iter().zip([&r.domain, &r.problem, &r.readme]) {
        let p = dir.join(file);
        fs::write(&p, text).map_err(io_err(format!("writing {}", p.display())))?;
    }
    Ok(())
}
