//! PNG output through an external DOT renderer.

use std::env;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

pub const CONFIG_KEY: &str = "renderer_command";
const DEFAULT_PROGRAM: &str = "dot";

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("no DOT renderer found: `{program}` is not on the search path; install Graphviz or set `{CONFIG_KEY}` in the config file")]
    RendererNotFound { program: String },
    #[error("renderer `{program}` failed: {stderr}")]
    RendererFailed { program: String, stderr: String },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

/// A DOT renderer invoked as `<program> -Tpng -o <out>`, reading DOT from stdin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Renderer {
    program: PathBuf,
}

impl Renderer {
    /// Use `configured` if given (a path or a bare program name), otherwise `dot`.
    pub fn discover(configured: Option<&str>) -> Result<Renderer, RenderError> {
        let wanted = configured.unwrap_or(DEFAULT_PROGRAM);
        find_program(wanted, env::var_os("PATH"))
            .map(|program| Renderer { program })
            .ok_or_else(|| RenderError::RendererNotFound { program: wanted.to_string() })
    }

    pub fn program(&self) -> &Path {
        &self.program
    }

    /// Render `dot` into a PNG at `out_path`. Nothing is left at `out_path`
    /// unless the renderer succeeded.
    pub fn render_png(&self, dot: &str, out_path: &Path) -> Result<PathBuf, RenderError> {
        let program = self.program.display().to_string();
        let mut partial = out_path.as_os_str().to_owned();
        partial.push(".partial");
        let partial = PathBuf::from(partial);

        let mut child = Command::new(&self.program)
            .arg("-Tpng")
            .arg("-o")
            .arg(&partial)
            .stdin(Stdio::piped())
            .stdout(Stdio::null())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => RenderError::RendererNotFound { program: program.clone() },
                _ => RenderError::Io { context: format!("starting `{program}`"), source: e },
            })?;
        let write_result = child.stdin.take().expect("piped stdin").write_all(dot.as_bytes());
        let output = child.wait_with_output().map_err(|e| RenderError::Io {
            context: format!("waiting for `{program}`"),
            source: e,
        })?;
        let produced = partial.is_file();
        if !output.status.success() || write_result.is_err() || !produced {
            let _ = fs::remove_file(&partial);
            let mut stderr = String::from_utf8_lossy(&output.stderr).trim().to_string();
            if stderr.is_empty() {
                stderr = match (output.status.code(), produced) {
                    (Some(c), _) if c != 0 => format!("exit status {c}"),
                    (_, false) => "no output file was written".to_string(),
                    _ => "terminated by a signal".to_string(),
                };
            }
            return Err(RenderError::RendererFailed { program, stderr });
        }
        fs::rename(&partial, out_path).map_err(|e| RenderError::Io {
            context: format!("moving rendered image to {}", out_path.display()),
            source: e,
        })?;
        Ok(out_path.to_path_buf())
    }
}

/// Render with the configured renderer, or `dot` from the search path.
pub fn render_png(dot: &str, out_path: &Path, configured: Option<&str>) -> Result<PathBuf, RenderError> {
    Renderer::discover(configured)?.render_png(dot, out_path)
}

fn find_program(name: &str, path_var: Option<OsString>) -> Option<PathBuf> {
    let p = Path::new(name);
    if p.components().count() > 1 {
        return is_executable(p).then(|| p.to_path_buf());
    }
    env::split_paths(&path_var?)
        .map(|dir| dir.join(name))
        .find(|cand| is_executable(cand))
}

#[cfg(unix)]
fn is_executable(p: &Path) -> bool {
    use std::os::unix::fs::PermissionsExt;
    fs::metadata(p).is_ok_and(|m| m.is_file() && m.permissions().mode() & 0o111 != 0)
}

#[cfg(not(unix))]
fn is_executable(p: &Path) -> bool {
    p.is_file()
}
