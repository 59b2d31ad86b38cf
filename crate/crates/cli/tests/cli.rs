use std::fs;
use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;
use tempfile::TempDir;

const CLEAN: &str = "(define (domain d)\n  (:types b - a a)\n  (:predicates (p ?x - a))\n  (:action act :parameters (?x - a) :effect (p ?x)))\n";
const PROBLEM: &str = "(define (problem q) (:domain d) (:objects o - a) (:init) (:goal (p o)))\n";

/// A scratch directory that also serves as an empty config home.
struct Env {
    dir: TempDir,
}

impl Env {
    fn new() -> Env {
        Env { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, rel: &str) -> PathBuf {
        self.dir.path().join(rel)
    }

    fn write(&self, rel: &str, text: &str) -> String {
        let p = self.path(rel);
        fs::create_dir_all(p.parent().unwrap()).unwrap();
        fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    fn script(&self, rel: &str, body: &str) -> String {
        let p = self.write(rel, &format!("#!/bin/sh\n{body}\n"));
        fs::set_permissions(&p, fs::Permissions::from_mode(0o755)).unwrap();
        p
    }

    fn command(&self) -> Command {
        let mut c = Command::new(env!("CARGO_BIN_EXE_pddl-forge"));
        c.env_remove("PDDL_FORGE_CONFIG")
            .env("XDG_CONFIG_HOME", self.path("xdg"))
            .env("HOME", self.dir.path())
            .current_dir(self.dir.path());
        c
    }

    fn run(&self, args: &[&str]) -> Output {
        self.command().args(args).output().unwrap()
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_exit_codes() {
    let env = Env::new();
    let good = env.write("good.pddl", CLEAN);
    let bad = env.write("bad.pddl", "(define (domain d) (:predicates (p ?x))");
    assert_eq!(code(&env.run(&["check", &good])), 0);
    let out = env.run(&["check", &bad]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("bad.pddl:1:"));
    assert_eq!(code(&env.run(&["check", &good, &bad])), 1);
    assert_eq!(code(&env.run(&["check", &env.path("missing.pddl").display().to_string()])), 3);
    assert_eq!(code(&env.run(&["check"])), 2);
    assert_eq!(code(&env.run(&["frobnicate"])), 2);
}

#[test]
fn check_json_schema() {
    let env = Env::new();
    let bad = env.write("bad.pddl", "(define (domain d)\n  (:predicates (p ?x))\n  (:action a :effect (q ?y)))\n");
    let out = env.run(&["check", "--json", &bad]);
    assert_eq!(code(&out), 1);
    let records: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!records.is_empty());
    for r in &records {
        let obj = r.as_object().unwrap();
        let mut keys: Vec<_> = obj.keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["code", "end", "message", "path", "severity", "start"]);
        for end in ["start", "end"] {
            let mut pk: Vec<_> = r[end].as_object().unwrap().keys().map(String::as_str).collect();
            pk.sort();
            assert_eq!(pk, ["column", "line", "offset"]);
        }
        assert_eq!(r["path"], bad.as_str());
        assert!(r["code"].is_string() && r["severity"].is_string() && r["message"].is_string());
        assert!(r["start"]["offset"].as_u64() <= r["end"]["offset"].as_u64());
    }

    let good = env.write("good.pddl", CLEAN);
    let out = env.run(&["check", "--json", &good]);
    assert_eq!(code(&out), 0);
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap(), Value::Array(vec![]));
}

#[test]
fn invalid_utf8_is_a_diagnostic() {
    let env = Env::new();
    let p = env.path("latin1.pddl");
    fs::write(&p, b"(define (domain caf\xe9))").unwrap();
    let out = env.run(&["check", "--json", p.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let records: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(records.len(), 1);
}

#[test]
fn highlight_json_covers_the_source() {
    let env = Env::new();
    let p = env.write("d.pddl", CLEAN);
    let out = env.run(&["highlight", "--format", "json", &p]);
    assert_eq!(code(&out), 0);
    let tokens: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    // whitespace is left out; every token's offsets slice back to its text
    for t in &tokens {
        let (s, e) = (t["start"].as_u64().unwrap() as usize, t["end"].as_u64().unwrap() as usize);
        assert_eq!(&CLEAN[s..e], t["text"].as_str().unwrap());
    }
    let joined: String = tokens.iter().map(|t| t["text"].as_str().unwrap()).collect();
    assert_eq!(joined, CLEAN.split_whitespace().collect::<String>());
    assert!(tokens.iter().all(|t| t["scope"] != "plain"));
    assert_eq!(code(&env.run(&["highlight", "--format", "html", &p])), 2);
}

#[test]
fn highlight_no_color_echoes_source() {
    let env = Env::new();
    let p = env.write("d.pddl", CLEAN);
    let out = env.run(&["highlight", "--no-color", &p]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), CLEAN);
}

#[test]
fn configured_colors_are_used() {
    let env = Env::new();
    env.write("xdg/pddl-forge/config.toml", "[colors]\nvariable = \"red\"\n");
    let p = env.write("d.pddl", CLEAN);
    let out = env.run(&["highlight", &p]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\x1b[31m?x"));
}

#[test]
fn invalid_config_is_a_usage_error() {
    let env = Env::new();
    let cfg = env.write("bad.toml", "no_such_key = 1\n");
    let p = env.write("d.pddl", CLEAN);
    let out = env.run(&["--config", &cfg, "check", &p]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("bad.toml"));
    let out = env.command().env("PDDL_FORGE_CONFIG", &cfg).args(["check", &p]).output().unwrap();
    assert_eq!(code(&out), 2);
    let missing = env.path("nope.toml").display().to_string();
    assert_eq!(code(&env.run(&["--config", &missing, "check", &p])), 3);
}

#[test]
fn diagram_writes_dot() {
    let env = Env::new();
    let p = env.write("d.pddl", CLEAN);
    let out = env.run(&["diagram", &p]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let dot = fs::read_to_string(env.path("d.dot")).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("object"));
    let out = env.run(&["diagram", &p, "--no-root", "-o", env.path("n.dot").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(!fs::read_to_string(env.path("n.dot")).unwrap().contains("object"));
    assert_eq!(code(&env.run(&["diagram", &p, "--rankdir", "UP"])), 2);
}

#[test]
fn diagram_refuses_broken_domains() {
    let env = Env::new();
    let p = env.write("d.pddl", "(define (domain d) (:types a - ))");
    assert_eq!(code(&env.run(&["diagram", &p])), 1);
    assert!(!env.path("d.dot").exists());
    let cyclic = env.write("c.pddl", "(define (domain c) (:types a - b b - a))");
    let out = env.run(&["diagram", &cyclic]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("cycl"), "{}", stderr(&out));
}

#[test]
fn diagram_png_uses_the_configured_renderer() {
    let env = Env::new();
    let renderer = env.script("fake-dot", "cat > /dev/null\nprintf 'PNG' > \"$3\"");
    let cfg = env.write("cfg.toml", &format!("renderer_command = \"{renderer}\"\n"));
    let p = env.write("d.pddl", CLEAN);
    let out = env.run(&["--config", &cfg, "diagram", &p, "--png"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(fs::read(env.path("d.png")).unwrap(), b"PNG");

    let missing = env.write("cfg2.toml", "renderer_command = \"/nonexistent/dot\"\n");
    let out = env.run(&["--config", &missing, "diagram", &p, "--png", "-o", "x.dot"]);
    assert_eq!(code(&out), 3);
    assert!(!env.path("x.dot").exists());
}

#[test]
fn diagram_snapshot_copies_the_domain() {
    let env = Env::new();
    let p = env.write("proj/domain.pddl", CLEAN);
    let out = env.run(&["diagram", &p, "--snapshot"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let copies: Vec<_> = fs::read_dir(env.path("proj/domains")).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(copies.len(), 1);
    assert_eq!(fs::read_to_string(&copies[0]).unwrap(), CLEAN);
}

const POINTS: &str = "(define (problem p) (:domain d) (:objects a b)\n  (:init (= (x-pos a) 0) (= (y-pos a) 0) (= (x-pos b) 3) (= (y-pos b) 4))\n  (:goal (and)))\n";

#[test]
fn distance_output_file() {
    let env = Env::new();
    let p = env.write("p.pddl", POINTS);
    let out = env.run(&["distance", &p]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let target = env.path("p-dist.pddl");
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), target.display().to_string());
    let text = fs::read_to_string(&target).unwrap();
    assert!(text.contains("(= (distance a b) 5.000)"));
    assert_eq!(fs::read_to_string(&p).unwrap(), POINTS);

    let out = env.run(&["distance", &p, "--one-way", "--decimals", "1", "-o", "one.pddl"]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(env.path("one.pddl")).unwrap();
    assert_eq!(text.matches("(distance ").count(), 1);
    assert!(text.contains("5.0)"));
}

#[test]
fn distance_in_place_and_config() {
    let env = Env::new();
    let p = env.write("p.pddl", &POINTS.replace("x-pos", "px").replace("y-pos", "py"));
    let cfg = env.write("c.toml", "[distance]\nx_function = \"px\"\ny_function = \"py\"\ndistance_function = \"d\"\ndecimal_places = 2\n");
    let out = env.command().env("PDDL_FORGE_CONFIG", &cfg).args(["distance", &p, "--in-place"]).output().unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(fs::read_to_string(&p).unwrap().contains("(= (d a b) 5.00)"));
}

#[test]
fn distance_failures() {
    let env = Env::new();
    let p = env.write("p.pddl", "(define (problem p) (:domain d) (:objects a) (:init (= (x-pos a) 1)) (:goal (and)))");
    let out = env.run(&["distance", &p]);
    assert_eq!(code(&out), 1);
    assert!(!env.path("p-dist.pddl").exists());
    let broken = env.write("b.pddl", "(define (problem p) (:domain d) (:init (= (x-pos a) 1)");
    assert_eq!(code(&env.run(&["distance", &broken])), 1);
}

#[test]
fn snippets() {
    let env = Env::new();
    let out = env.run(&["snippet", "--list"]);
    assert_eq!(code(&out), 0);
    let listing = String::from_utf8(out.stdout).unwrap();
    assert!(listing.lines().any(|l| l.starts_with("action\t")));
    let out = env.run(&["snippet", "action", "name=move"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("(:action move"));
    assert_eq!(code(&env.run(&["snippet", "nope"])), 2);
    assert_eq!(code(&env.run(&["snippet", "action", "oops"])), 2);
}

#[test]
fn new_project_and_repeat() {
    let env = Env::new();
    let out = env.run(&["new", "depot"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(env.path("depot/domain.pddl").is_file());
    assert_eq!(code(&env.run(&["new", "depot"])), 1);
    assert_eq!(code(&env.run(&["new", "9lives"])), 2);
    assert!(!env.path("9lives").exists());
}

fn project(env: &Env) -> (String, String) {
    (env.write("proj/domain.pddl", CLEAN), env.write("proj/problems/p01.pddl", PROBLEM))
}

#[test]
fn solve_without_planner_names_the_key() {
    let env = Env::new();
    let (d, p) = project(&env);
    let out = env.run(&["solve", &d, &p]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("planner_command"), "{}", stderr(&out));
}

#[test]
fn solve_runs_the_planner() {
    let env = Env::new();
    let planner = env.script("planner", "echo \"solving $1 $2\"\necho '(act o)' > \"$3\"");
    env.write(
        "xdg/pddl-forge/config.toml",
        &format!("planner_command = [\"{planner}\", \"{{domain}}\", \"{{problem}}\", \"{{output}}\"]\n"),
    );
    let (d, p) = project(&env);
    let out = env.run(&["solve", &d, &p]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let log = fs::read_to_string(env.path("proj/solutions/p01.log")).unwrap();
    assert!(log.contains(&format!("solving {d} {p}")));
    assert_eq!(fs::read_to_string(env.path("proj/solutions/p01.plan")).unwrap(), "(act o)\n");
}

#[test]
fn solve_reports_planner_failure_and_timeout() {
    let env = Env::new();
    let (d, p) = project(&env);
    let failing = env.script("fail", "echo no plan >&2\nexit 4");
    let cfg = env.write("fail.toml", &format!("planner_command = \"{failing} {{domain}} {{problem}}\"\n"));
    let out = env.run(&["--config", &cfg, "solve", &d, &p]);
    assert_eq!(code(&out), 1);
    assert!(fs::read_to_string(env.path("proj/solutions/p01.log")).unwrap().contains("no plan"));

    let slow = env.script("slow", "echo started\nexec sleep 30");
    let cfg = env.write("slow.toml", &format!("planner_command = \"{slow}\"\n"));
    let start = Instant::now();
    let out = env.run(&["--config", &cfg, "solve", &d, &p, "--timeout", "0.5", "--out", "sol"]);
    assert!(start.elapsed() < Duration::from_secs(10));
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("timed out"));
    assert!(fs::read_to_string(env.path("sol/p01.log")).unwrap().contains("started"));

    assert_eq!(code(&env.run(&["--config", &cfg, "solve", &d, &p, "--timeout", "-1"])), 2);
}

#[test]
fn solve_with_missing_planner_binary() {
    let env = Env::new();
    let (d, p) = project(&env);
    let cfg = env.write("c.toml", "planner_command = \"/nonexistent/planner {domain}\"\n");
    let out = env.run(&["--config", &cfg, "solve", &d, &p]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("planner_command"));
    let missing = Path::new(&d).with_file_name("none.pddl");
    assert_eq!(code(&env.run(&["--config", &cfg, "solve", missing.to_str().unwrap(), &p])), 3);
}
