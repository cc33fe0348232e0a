use std::io::Write;
use std::process::{Command, Output, Stdio};

use treegreen::config::ProblemConfig;

const Y_TREE: &str = r#"
nodes = ["phi", "n", "b1", "b2"]
root = "phi"
edges = [
  { id = "e0", tail = "phi", head = "n", length = 1.0 },
  { id = "e1", tail = "n", head = "b1", length = 1.0 },
  { id = "e2", tail = "n", head = "b2", length = 1.0 },
]

[coefficients]
mode = "per_edge"
per_edge.e0 = { p = 1 }
per_edge.e1 = { p = 1 }
per_edge.e2 = { p = 1 }

[rhs]
e0 = "1"
e1 = "1"
e2 = "1"
"#;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_treegreen"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_reports_nondegenerate() {
    let o = run(&["validate"], Y_TREE);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("quantity,value\nedges,3\nboundary_nodes,3\n"), "{out}");
    assert!(out.contains("nondegenerate,true"));
}

#[test]
fn green_single_point() {
    let o = run(&["green", "--at", "e0:0.5", "--y", "e1:0.5"], Y_TREE);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "edge,pos,value\ne1,0.5,0.0833333333333\n# solve-count=3\n");
}

#[test]
fn green_grid_and_node_limit() {
    let o = run(&["green", "--at", "e0:1", "--grid", "3"], Y_TREE);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1 + 9 + 1);
    assert!(out.contains("e0,0.25,"));
}

#[test]
fn solve_from_file() {
    let dir = std::env::temp_dir().join(format!("treegreen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("y.toml");
    std::fs::write(&path, Y_TREE).unwrap();
    let o = run(&["solve", "--config", path.to_str().unwrap(), "--grid", "3"], "");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // f(n) = 1/2 for h = 1
    assert!(out.contains("e0,1,0.5\n"), "{out}");
    assert!(out.contains("e0,0,0\n"), "{out}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn dump_config_round_trips() {
    let o = run(&["validate", "--dump-config"], Y_TREE);
    assert_eq!(o.status.code(), Some(0));
    let dumped = ProblemConfig::parse(&stdout(&o)).unwrap();
    assert_eq!(dumped, ProblemConfig::parse(Y_TREE).unwrap());
}

#[test]
fn invalid_config_exits_3() {
    let o = run(&["validate"], &Y_TREE.replace("length = 1.0 },\n  { id = \"e1\"", "length = -1.0 },\n  { id = \"e1\""));
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-positive"));
    assert_eq!(run(&["validate"], "nodes = [").status.code(), Some(3));
    assert_eq!(run(&["green", "--at", "e9:0.5"], Y_TREE).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"], Y_TREE).status.code(), Some(3));
}

#[test]
fn degenerate_exits_2() {
    let nn = format!("{Y_TREE}\n[boundary]\nphi = \"neumann\"\nb1 = \"neumann\"\nb2 = \"neumann\"\n");
    let o = run(&["validate"], &nn);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("nondegenerate,false"));
    assert_eq!(run(&["green", "--at", "e0:0.5"], &nn).status.code(), Some(2));
}

#[test]
fn compare_pass_and_fail() {
    let o = run(&["compare", "--mode", "pokornyi"], Y_TREE);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let river = Y_TREE.replace(
        "mode = \"per_edge\"\nper_edge.e0 = { p = 1 }\nper_edge.e1 = { p = 1 }\nper_edge.e2 = { p = 1 }",
        "mode = \"river\"\nriver.D = { e0 = 1, e1 = 0.5, e2 = 2 }\nriver.v = { e0 = 0.8, e1 = -0.4, e2 = 1.2 }\nriver.sigma = 1.5",
    );
    let o = run(&["compare", "--mode", "oracle", "--grid", "16", "--tol", "1e-9"], &river);
    assert_eq!(o.status.code(), Some(4), "{}", stdout(&o));
    assert!(stdout(&o).contains(",fail"));
}
