use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::io::Write as _;

use dga::automaton::builtin;
use dga::automaton::format::parse_adga;
use dga::cli::run_with;
use dga::graph::parse_graph;
use dga::mso::parse_mso;

fn scratch(name: &str, content: &str) -> String {
    let dir: PathBuf = std::env::temp_dir().join(format!("dga-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn dga(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("dga").chain(args.iter().copied());
    let code = run_with(argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const TRIANGLE: &str = "graph\nnodes 3\nlabels blank blank blank\nedge blank 0 1\nedge blank 1 2\nedge blank 2 0\nundirected\n";

#[test]
fn pipeline_through_the_binary() {
    let triangle = scratch("triangle.graph", TRIANGLE);
    let bin = env!("CARGO_BIN_EXE_dga");
    let example = Command::new(bin).args(["examples", "color3"]).output().unwrap();
    assert!(example.status.success());
    let mut child = Command::new(bin)
        .args(["accepts", "-", &triangle])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&example.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "accept\n");
}

#[test]
fn accepts_and_rejects() {
    let color3 = dga(&["examples", "color3"], "").1;
    let k4 = "graph\nnodes 4\nlabels blank blank blank blank\nedge blank 0 1\nedge blank 0 2\nedge blank 0 3\n\
              edge blank 1 2\nedge blank 1 3\nedge blank 2 3\nundirected\n";
    let k4 = scratch("k4.graph", k4);
    assert_eq!(dga(&["accepts", "-", &k4], &color3), (1, "reject\n".into(), String::new()));
}

#[test]
fn emptiness_finds_three_nodes() {
    let og3 = scratch("og3.adga", &dga(&["examples", "order_ge(3)"], "").1);
    let (code, out, _) = dga(&["emptiness", &og3, "--mode", "all", "--cap", "5"], "");
    assert_eq!(code, 1);
    assert!(out.starts_with("NONEMPTY\n"));
    let g = parse_graph(&out["NONEMPTY\n".len()..]).unwrap();
    assert_eq!(g.node_count, 3);
    let a = builtin::order_ge(3);
    assert!(a.accepts(&g.resolve(a.alphabets()).unwrap()));

    let empty = scratch("empty.adga", &dga(&["examples", "empty"], "").1);
    let (code, out, _) = dga(&["emptiness", &empty, "--cap", "3"], "");
    assert_eq!(code, 0);
    assert!(out.starts_with("EMPTY n_checked=1 exact=true"));

    let centric = scratch("centric.adga", &dga(&["examples", "centric"], "").1);
    assert_eq!(dga(&["emptiness", &centric], "").0, 3);
    assert_eq!(dga(&["emptiness", &centric, "--probe", "--cap", "3"], "").0, 1);
}

#[test]
fn inclusion_verdicts() {
    let empty = scratch("i-empty.adga", &dga(&["examples", "empty"], "").1);
    let all = scratch("i-all.adga", &dga(&["examples", "trivial"], "").1);
    assert_eq!(dga(&["inclusion", &empty, &all, "--cap", "3"], "").1, "HOLDS n_checked=1 exact=true\n");
    let (code, out, _) = dga(&["inclusion", &all, &empty, "--cap", "3"], "");
    assert_eq!(code, 1);
    assert!(out.starts_with("VIOLATION\ngraph\nnodes 1\n"));
    let le1 = scratch("le1.adga", &dga(&["examples", "order_le(1)"], "").1);
    let (code, _, err) = dga(&["inclusion", &le1, &all], "");
    assert_eq!(code, 3);
    assert!(err.contains("deterministic"));
}

#[test]
fn emitted_files_reparse() {
    for name in builtin::REGISTRY {
        let text = dga(&["examples", name], "").1;
        let a = parse_adga(&text).unwrap();
        assert!(a.same_as(&builtin::builtin(name).unwrap()), "{name}");
    }
    let color3 = scratch("color3.adga", &dga(&["examples", "color3"], "").1);
    let encoded = dga(&["encode-mso", &color3], "").1;
    let phi = parse_mso(&encoded).unwrap();
    let compiled = dga(&["compile-mso", "-"], &encoded).1;
    let a = parse_adga(&compiled).unwrap();
    let triangle = parse_graph(TRIANGLE).unwrap().resolve(&phi.alphabets).unwrap();
    assert!(a.accepts(&triangle));
    for op in ["complement", "synchronize"] {
        let out = dga(&["construct", op, &color3], "").1;
        parse_adga(&out).unwrap();
    }
}

#[test]
fn constructions_from_files() {
    let colored = scratch("colored.adga", &dga(&["examples", "colored(r,g,b)"], "").1);
    let map = scratch("collapse.map", "r blank\ng blank\nb blank\n");
    let (code, out, _) = dga(&["construct", "project", &colored, &map], "");
    assert_eq!(code, 0);
    let projected = parse_adga(&out).unwrap();
    let triangle = parse_graph(TRIANGLE).unwrap().resolve(projected.alphabets()).unwrap();
    assert!(projected.accepts(&triangle));
    let le1 = scratch("u-le1.adga", &dga(&["examples", "order_le(1)"], "").1);
    let ge3 = scratch("u-ge3.adga", &dga(&["examples", "order_ge(3)"], "").1);
    let out = dga(&["construct", "union", &le1, &ge3], "").1;
    let u = parse_adga(&out).unwrap();
    let blank = |text: &str| parse_graph(text).unwrap().resolve(&dga::graph::Alphabets::blank()).unwrap();
    assert!(u.accepts(&blank(TRIANGLE)));
    assert!(u.accepts(&blank("graph\nnodes 1\nlabels blank\n")));
    assert!(!u.accepts(&blank("graph\nnodes 2\nlabels blank blank\nedge blank 0 1\n")));
    assert_eq!(dga(&["construct", "union", &le1], "").0, 3);
}

#[test]
fn evaluates_formulas() {
    let phi = scratch("edge.mso", "EX x, y . edge(x, y)\n");
    let triangle = scratch("tri.graph", TRIANGLE);
    assert_eq!(dga(&["eval-mso", &phi, &triangle], "").0, 0);
    let open = scratch("open.mso", "x in X & !(y in X)\n");
    let args = ["eval-mso", &open, &triangle, "--assign", "x=0", "--assign", "y=2", "--assign", "X=0,1"];
    assert_eq!(dga(&args, "").1, "accept\n");
    let args = ["eval-mso", &open, &triangle, "--assign", "x=2", "--assign", "y=2", "--assign", "X=0,1"];
    assert_eq!(dga(&args, "").0, 1);
    assert_eq!(dga(&["eval-mso", &open, &triangle], "").0, 3);
}

#[test]
fn simulate_and_verify() {
    let state = scratch(
        "path.graph",
        "graph\nnodes 3\nlabels m=1,m_ini=1 m=0 m=2,m_ini=2\nedge blank 0 1\nedge blank 1 2\nundirected\n",
    );
    let (code, out, _) = dga(&["simulate", &data("floodmax.dpl"), &state, "--fuel", "10"], "");
    assert_eq!(code, 0);
    let g = parse_graph(&out).unwrap();
    assert!(g.labels.iter().all(|l| l.starts_with("m=2,m_old=2,")));
    assert_eq!(dga(&["simulate", &data("floodmax.dpl"), &state, "--fuel", "1"], "").0, 2);

    let (code, out, _) = dga(&["verify", &data("floodmax_forgetful.dpl"), "--cap", "2"], "");
    assert_eq!(code, 1);
    assert_eq!(out.lines().filter(|l| l.starts_with("VC ")).count(), 3);
    assert!(out.contains("VC preservation") && out.contains("VIOLATION"));
    let again = dga(&["verify", &data("floodmax_forgetful.dpl"), "--cap", "2", "--jobs", "2"], "");
    assert_eq!(again, (code, out, String::new()));
}

#[test]
fn errors_name_the_file_and_line() {
    let broken = scratch("broken.dpl", "program p\ndomain 0 1\nvars m\neach v { v.m := 7; }\n");
    let (code, _, err) = dga(&["verify", &broken], "");
    assert_eq!(code, 3);
    assert!(err.contains("broken.dpl") && err.contains("line 4"), "{err}");
    let (code, _, err) = dga(&["accepts", "-", "-"], "adga\n");
    assert_eq!(code, 3);
    assert!(!err.is_empty());
    assert_eq!(dga(&["frobnicate"], "").0, 3);
    assert_eq!(dga(&["examples", "nope"], "").0, 3);
}

#[test]
fn selftest_passes() {
    let (code, out, _) = dga(&["selftest"], "");
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), builtin::REGISTRY.len());
}
