//! Planner invocation.

use std::fs;
use std::io::{ErrorKind, Read};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, ExitStatus, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use crate::config::Config;
use crate::error::{CliError, Status};
use crate::SolveArgs;

pub fn solve(a: &SolveArgs, cfg: &Config) -> Result<Status, CliError> {
    let template = cfg.planner_command.as_ref().ok_or_else(|| {
        CliError::env("no planner configured; set `planner_command` in the config file, e.g. planner_command = \"ff -o {domain} -f {problem}\"")
    })?;
    for p in [&a.domain, &a.problem] {
        if !p.is_file() {
            return Err(CliError::env(format!("{} does not exist", p.display())));
        }
    }
    let timeout = match a.timeout {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            return Err(CliError::usage(format!("timeout must be a positive number of seconds, got {t}")))
        }
        t => t.map(Duration::from_secs_f64),
    };

    let out_dir = a.out.clone().unwrap_or_else(|| solutions_dir(&a.domain, &a.problem));
    fs::create_dir_all(&out_dir).map_err(|e| CliError::env(format!("cannot create {}: {e}", out_dir.display())))?;
    let stem = a.problem.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "problem".into());
    let plan_path = out_dir.join(format!("{stem}.plan"));
    let log_path = out_dir.join(format!("{stem}.log"));

    let argv: Vec<String> = template
        .argv()
        .iter()
        .map(|arg| {
            arg.replace("{domain}", &a.domain.display().to_string())
                .replace("{problem}", &a.problem.display().to_string())
                .replace("{output}", &plan_path.display().to_string())
        })
        .collect();
    let (program, args) = argv
        .split_first()
        .ok_or_else(|| CliError::usage("`planner_command` is empty"))?;

    let child = Command::new(program)
        .args(args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| match e.kind() {
            ErrorKind::NotFound => CliError::env(format!(
                "planner `{program}` not found; check `planner_command` in the config file"
            )),
            _ => CliError::env(format!("cannot start planner `{program}`: {e}")),
        })?;
    let run = run_with_timeout(child, timeout).map_err(|e| CliError::env(format!("running planner: {e}")))?;

    let mut log = run.stdout;
    log.extend_from_slice(&run.stderr);
    fs::write(&log_path, &log).map_err(|e| CliError::env(format!("cannot write {}: {e}", log_path.display())))?;
    println!("{}", log_path.display());
    if plan_path.is_file() {
        println!("{}", plan_path.display());
    }
    match run.status {
        None => Err(CliError::failed(format!(
            "planner timed out after {:.1} s; partial output in {}",
            timeout.unwrap_or_default().as_secs_f64(),
            log_path.display()
        ))),
        Some(s) if s.success() => Ok(Status::Ok),
        Some(s) => Err(CliError::failed(format!("planner exited with {s}; see {}", log_path.display()))),
    }
}

/// `<project>/solutions`, where the project is the parent of a `problems/`
/// directory holding the problem, or else the directory of the domain.
fn solutions_dir(domain: &Path, problem: &Path) -> PathBuf {
    let problem_dir = problem.parent().filter(|d| !d.as_os_str().is_empty());
    let root = match problem_dir {
        Some(d) if d.file_name().is_some_and(|n| n == "problems") => d.parent().unwrap_or(Path::new(".")),
        _ => domain.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new(".")),
    };
    root.join("solutions")
}

struct Run {
    /// `None` when the process was killed on timeout.
    status: Option<ExitStatus>,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

fn run_with_timeout(mut child: Child, timeout: Option<Duration>) -> std::io::Result<Run> {
    let drain = |mut r: Box<dyn Read + Send>| {
        thread::spawn(move || {
            let mut buf = Vec::new();
            let _ = r.read_to_end(&mut buf);
            buf
        })
    };
    let out = drain(Box::new(child.stdout.take().expect("piped stdout")));
    let err = drain(Box::new(child.stderr.take().expect("piped stderr")));

    let start = Instant::now();
    let status = loop {
        if let Some(s) = child.try_wait()? {
            break Some(s);
        }
        if timeout.is_some_and(|t| start.elapsed() >= t) {
            let _ = child.kill();
            let _ = child.wait();
            break None;
        }
        thread::sleep(Duration::from_millis(10));
    };
    Ok(Run {
        status,
        stdout: out.join().unwrap_or_default(),
        stderr: err.join().unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solutions_location() {
        assert_eq!(
            solutions_dir(Path::new("proj/domain.pddl"), Path::new("proj/problems/p01.pddl")),
            PathBuf::from("proj/solutions")
        );
        assert_eq!(
            solutions_dir(Path::new("x/domain.pddl"), Path::new("y/p.pddl")),
            PathBuf::from("x/solutions")
        );
        assert_eq!(solutions_dir(Path::new("d.pddl"), Path::new("p.pddl")), PathBuf::from("./solutions"));
    }

    #[test]
    fn timeout_kills() {
        let child = Command::new("sleep")
            .arg("5")
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        let start = Instant::now();
        let run = run_with_timeout(child, Some(Duration::from_millis(100))).unwrap();
        assert!(run.status.is_none());
        assert!(start.elapsed() < Duration::from_secs(3));
    }
}
