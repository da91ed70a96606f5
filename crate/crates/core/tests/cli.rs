use std::io::Cursor;

use idl_smt::cli;
use idl_smt::testkit::{emit_benchmark, parse_core, parse_model, Family, ModelValue};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str], stdin: &str) -> Run {
    let mut argv = vec!["idl-smt"];
    argv.extend_from_slice(args);
    let mut input = Cursor::new(stdin.as_bytes().to_vec());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(argv, &mut input, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn stat(err: &str, key: &str) -> u64 {
    err.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix('=')?.parse().ok())
        .unwrap_or_else(|| panic!("no {key} in {err}"))
}

const TIGHT: &str = "(set-logic QF_IDL)
(declare-fun x () Int)
(declare-fun y () Int)
(assert (<= (- x y) 3))
(assert (<= (- y x) (- 3)))
(check-sat)
(get-model)
";

#[test]
fn batch_sat_with_model() {
    let r = run(&[], TIGHT);
    assert_eq!(r.code, 0, "{}", r.err);
    let mut lines = r.out.lines();
    assert_eq!(lines.next(), Some("sat"));
    let model = parse_model(&r.out["sat\n".len()..]).unwrap();
    let (ModelValue::Int(x), ModelValue::Int(y)) = (&model["x"], &model["y"]) else {
        panic!()
    };
    assert_eq!(x - y, 3);
}

#[test]
fn unsat_core_from_command_line_flag() {
    let script = "(set-logic QF_IDL)
(declare-fun x () Int)
(declare-fun y () Int)
(assert (! (<= (- x y) 3) :named a1))
(assert (! (<= (- y x) (- 4)) :named a2))
(assert (! (<= x 100) :named a3))
(check-sat)
(get-unsat-core)
";
    let r = run(&["--produce-unsat-cores"], script);
    assert_eq!(r.code, 0);
    let mut lines = r.out.lines();
    assert_eq!(lines.next(), Some("unsat"));
    let core = parse_core(lines.next().unwrap()).unwrap();
    assert!(core.contains(&"a1".to_string()) && core.contains(&"a2".to_string()));
    let r = run(&[], script);
    assert_eq!(r.code, 1);
    assert!(r.out.lines().nth(1).unwrap().starts_with("(error"));
}

#[test]
fn wrong_logic_exits_one_in_batch() {
    let r = run(&[], "(set-logic QF_BV)\n(check-sat)\n");
    assert_eq!(r.code, 1);
    assert_eq!(r.out, "(error \"unsupported logic QF_BV\")\n");
}

#[test]
fn interactive_session_survives_errors() {
    let script = "(set-logic QF_BV)
(set-logic QF_IDL)
(declare-fun x () Int)
(assert (< x y))
(assert (< x 0))
(check-sat)
";
    let r = run(&["--incremental"], script);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines.len(), 3, "{}", r.out);
    assert!(lines[0].starts_with("(error"));
    assert!(lines[1].starts_with("(error"));
    assert_eq!(lines[2], "sat");
    assert_eq!(r.code, 1);
    let r = run(
        &["--incremental"],
        "(set-logic QF_IDL)(check-sat)\n(exit)\n(check-sat)\n",
    );
    assert_eq!((r.code, r.out.as_str()), (0, "sat\n"));
}

#[test]
fn parse_errors() {
    let r = run(&[], "(set-logic QF_IDL)\n(declare-fun x () Int)\n(assert (<= x\n");
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("(error"), "{}", r.out);
    assert!(r.out.lines().count() == 1, "nothing runs after a batch parse error");
    let r = run(&["--incremental"], "(assert (<= x 1)\n");
    assert_eq!(r.code, 1);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["--bogus"], "").code, 1);
    assert_eq!(run(&["--portfolio", "fast:rest"], "").code, 1);
    assert_eq!(run(&["--portfolio", "prop:rest", "--incremental"], "").code, 1);
    assert_eq!(run(&["/nonexistent/file.smt2"], "").code, 1);
    let help = run(&["--help"], "");
    assert_eq!(help.code, 0);
    assert!(help.out.contains("--portfolio"));
}

#[test]
fn reads_a_file_argument() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.smt2");
    std::fs::write(&path, TIGHT).unwrap();
    let r = run(&[path.to_str().unwrap()], "");
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("sat\n"));
}

#[test]
fn stats_keys() {
    let r = run(&["--stats"], TIGHT);
    for key in [
        "decisions",
        "conflicts",
        "propagations",
        "theory_conflicts",
        "fw_cell_updates",
        "max_vertices",
        "stages_run",
    ] {
        stat(&r.err, key);
    }
    assert_eq!(stat(&r.err, "max_vertices"), 3);
}

#[test]
fn portfolio_stops_at_first_definite_answer() {
    let r = run(&["--stats", "--portfolio", "no-prop:5000ms,prop:rest"], TIGHT);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("sat\n"));
    assert_eq!(stat(&r.err, "stages_run"), 1);
}

#[test]
fn portfolio_falls_through_on_unknown() {
    // Four unit jobs in a window of length three: needs search to refute.
    let mut text = String::from("(set-logic QF_IDL)\n");
    for i in 0..4 {
        text.push_str(&format!(
            "(declare-fun t{i} () Int)(assert (and (<= 0 t{i}) (<= t{i} 2)))\n"
        ));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            text.push_str(&format!(
                "(assert (or (<= (- t{i} t{j}) (- 1)) (<= (- t{j} t{i}) (- 1))))\n"
            ));
        }
    }
    text.push_str("(check-sat)\n");
    let direct = run(&["--stats"], &text);
    assert!(stat(&direct.err, "conflicts") > 0);
    let r = run(&["--stats", "--portfolio", "prop:0c,no-prop:rest"], &text);
    assert_eq!(r.code, 0);
    assert_eq!(r.out, "unsat\n");
    assert_eq!(stat(&r.err, "stages_run"), 2);
}

#[test]
fn dumps() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("out.cnf");
    let tsv = dir.path().join("out.tsv");
    let r = run(
        &[
            "--dump-dimacs",
            cnf.to_str().unwrap(),
            "--dump-apsp",
            tsv.to_str().unwrap(),
        ],
        TIGHT,
    );
    assert_eq!(r.code, 0);
    let cnf = std::fs::read_to_string(cnf).unwrap();
    assert!(cnf.starts_with("p cnf "));
    let tsv = std::fs::read_to_string(tsv).unwrap();
    let rows: Vec<Vec<&str>> = tsv.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.len() == 3));
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[i], "0");
    }
    // x - y = 3 is pinned both ways
    assert!(rows.iter().flatten().any(|c| *c == "3"));
    assert!(rows.iter().flatten().any(|c| *c == "-3"));
}

#[test]
fn same_seed_same_transcript() {
    let text = emit_benchmark(Family::WindowScheduling(6, 2), 9);
    let a = run(&["--seed", "11", "--stats"], &text);
    let b = run(&["--seed", "11", "--stats"], &text);
    assert_eq!((a.out, a.err), (b.out, b.err));
}

#[test]
fn minimized_core_on_chain() {
    let text = emit_benchmark(Family::NegativeCycleChain(5), 0).replace("(exit)", "(get-unsat-core)\n(exit)");
    let r = run(&["--produce-unsat-cores", "--minimize-core"], &text);
    assert_eq!(r.code, 0);
    let core = parse_core(r.out.lines().nth(1).unwrap()).unwrap();
    assert_eq!(core.len(), 5);
    assert!(core.iter().all(|n| n.starts_with('c')));
}

#[test]
fn theory_propagation_does_not_change_answers() {
    for n in [3, 5, 8] {
        let text = emit_benchmark(Family::WindowScheduling(n, 2), 1);
        assert_eq!(run(&[], &text).out, run(&["--no-theory-prop"], &text).out);
    }
}
