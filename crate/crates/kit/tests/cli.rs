use std::path::Path;
use std::process::{Command, Output};

fn kit(args: &[&str]) -> Output {
    kit_env(args, None)
}

fn kit_env(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spectral-kit"));
    cmd.args(args).env_remove("SPECTRAL_KIT_CACHE");
    if let Some(dir) = cache {
        cmd.env("SPECTRAL_KIT_CACHE", dir);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_chain(dir: &Path, n: usize) -> String {
    let points: Vec<String> = (0..n).map(|i| format!("\"c{i}\"")).collect();
    let leq: Vec<String> = (1..n).map(|i| format!("[\"c{}\",\"c{i}\"]", i - 1)).collect();
    let path = dir.join(format!("chain{n}.json"));
    std::fs::write(&path, format!("{{\"points\":[{}],\"leq\":[{}]}}", points.join(","), leq.join(","))).unwrap();
    path.to_str().unwrap().to_string()
}

fn dot_nodes(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains("[label=")).count()
}

#[test]
fn check_z6_nullstellensatz_reports_three_point_spaces() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = kit(&["check", "--ring", "Z/6", "nullstellensatz", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS nullstellensatz"));
    let reports: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let r = &reports[0];
    assert_eq!(r["check"], "nullstellensatz");
    assert_eq!(r["instance"], "Z/6");
    assert_eq!(r["passed"], true);
    assert_eq!(r["sizes"]["rd"], 3);
    assert_eq!(r["sizes"]["hyperspace"], 3);
    assert!(r["elapsed_ms"].is_null());
    assert!(r.get("witness").is_none());
}

#[test]
fn check_chain3_hyperspace_passes() {
    let dir = tempfile::tempdir().unwrap();
    let chain = write_chain(dir.path(), 3);
    let o = kit(&["check", "--poset", &chain, "hyperspace"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn zero_modulus_is_a_parse_error() {
    let o = kit(&["check", "--ring", "Z/0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("invalid modulus"));
}

#[test]
fn usage_and_resource_errors_exit_2() {
    assert_eq!(code(&kit(&["check", "--ring", "Z/6", "no-such-checker"])), 2);
    assert_eq!(code(&kit(&["check", "--ring", "Z/6", "smod"])), 2);
    assert_eq!(code(&kit(&["check", "--ring", "Z/12", "--max-module-size", "4"])), 2);
    assert_eq!(code(&kit(&["check", "--module", "Z/4 +"])), 2);
    assert_eq!(code(&kit(&["check"])), 2);
}

#[test]
fn check_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("spec.dot");
    let o = kit(&["check", "--ring", "Z/30", "radicals", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(dot_nodes(&text), 3);
}

#[test]
fn json_to_stdout_is_pure_json() {
    let o = kit(&["check", "--module", "Z/4 + Z/2", "--json", "-"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn export_z12_lattice_has_six_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ideals.dot");
    let o = kit(&["export", "--ring", "Z/12", "lattice", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(dot_nodes(&std::fs::read_to_string(out).unwrap()), 6);
}

#[test]
fn export_chain2_hasse_is_a_two_node_chain() {
    let dir = tempfile::tempdir().unwrap();
    let chain = write_chain(dir.path(), 2);
    let out = dir.path().join("out.dot");
    let o = kit(&["export", "--poset", &chain, "hasse", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(dot_nodes(&text), 2);
    assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 1);
}

#[test]
fn export_z6_topology_lists_three_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rd.json");
    let o = kit(&["export", "--ring", "Z/6", "topology", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let mut points: Vec<String> = v["points"].as_array().unwrap().iter().map(|p| p.as_str().unwrap().to_string()).collect();
    points.sort();
    assert_eq!(points, ["(0)", "(2)", "(3)"]);
    assert!(v.get("preorder").is_some());
}

#[test]
fn export_rejects_unknown_artifact() {
    let o = kit(&["export", "--ring", "Z/6", "picture", "-"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn list_checkers_names_every_checker() {
    let o = kit(&["list-checkers"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for name in ["nullstellensatz", "smod", "prime-spectrum", "closure", "functor", "hyperspace", "lu-topology"] {
        assert!(out.contains(name), "{name} missing");
    }
    let rings = stdout(&kit(&["list-checkers", "--target", "ring"]));
    assert_eq!(rings.lines().count(), 5);
    assert_eq!(code(&kit(&["list-checkers", "--target", "group"])), 2);
}

#[test]
fn corpus_over_the_zero_ring_passes_vacuously() {
    let o = kit(&["corpus", "--max-ring-size", "1", "--max-poset", "0", "--random-posets", "0", "--json", "-"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failed"], 0);
    let instances: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["instance"].as_str().unwrap()).collect();
    assert!(instances.iter().all(|i| i.contains("Z/1") || i.starts_with("poset(")));
}

#[test]
fn corpus_reruns_are_byte_identical() {
    let args = ["corpus", "--seed", "7", "--max-poset", "6", "--max-ring-size", "8", "--jobs", "2", "--json", "-"];
    let a = kit(&args);
    let b = kit(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let one_job = kit(&["corpus", "--seed", "7", "--max-poset", "6", "--max-ring-size", "8", "--jobs", "1", "--json", "-"]);
    assert_eq!(a.stdout, one_job.stdout);
}

#[test]
fn cache_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["check", "--module", "Z/4 + Z/4", "--json", "-"];
    let plain = kit(&args);
    let cold = kit_env(&args, Some(dir.path()));
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    let warm = kit_env(&args, Some(dir.path()));
    assert_eq!(code(&plain), 0);
    assert!(entries > 0);
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);
    let corpus = ["corpus", "--max-ring-size", "4", "--max-poset", "3", "--random-posets", "2", "--json", "-"];
    assert_eq!(kit(&corpus).stdout, kit_env(&corpus, Some(dir.path())).stdout);
    assert_eq!(kit(&corpus).stdout, kit_env(&corpus, Some(dir.path())).stdout);
}
