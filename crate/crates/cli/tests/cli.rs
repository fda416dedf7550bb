use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use proptest::prelude::*;

use trunclab::frame::{random_frame, random_real};
use trunclab::sample;
use trunclab::seqspace::SeqTrunc;
use trunclab_cli::commands::{run_command, Flags, COMMANDS};
use trunclab_cli::instance::{parse_instance, read_instance, to_toml, Instance, Object, Sequence};

fn sample_file() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/sample.toml")
}

fn trunclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trunclab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_file(args: &[&str]) -> Output {
    let file = sample_file();
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--file", file.to_str().unwrap()]);
    trunclab(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("trunclab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn sample_file_parses_and_checks() {
    let inst = read_instance(&sample_file()).unwrap();
    assert_eq!(inst.count("space"), 1);
    assert_eq!(inst.count("kernel"), 3);
    let out = with_file(&["check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn x3_file_has_one_space_and_one_element() {
    let inst = parse_instance(
        "[space.X3]\npoints = [\"*\", \"1\", \"2\", \"3\"]\nstar = \"*\"\n\n[element.g]\nspace = \"X3\"\nvalues = [5, 2, \"1/3\"]\n",
    )
    .unwrap();
    assert_eq!((inst.len(), inst.count("space"), inst.count("element")), (2, 1, 1));
}

#[test]
fn normal_form_lists_components() {
    let out = with_file(&["normal-form", "h"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[(3,{1,2}),(1/2,{3})]"), "{}", stdout(&out));
    let json = with_file(&["normal-form", "h", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["data"]["normal_form"], "[(3,{1,2}),(1/2,{3})]");
    assert_eq!(v["status"], "pass");
}

#[test]
fn ex1_report_exits_zero() {
    let out = trunclab(&["ex1-report"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    for part in ["(a)", "(b)", "(c)", "(d)", "(e)"] {
        assert!(text.contains(&format!("PASS {part}")), "{part} missing:\n{text}");
    }
}

#[test]
fn suite_smoke_run_passes_with_counts() {
    let out = trunclab(&["suite", "--seed", "7", "--cases", "50", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let suites = v["data"]["suites"].as_object().unwrap();
    assert!(suites.len() >= 10);
    for (name, counts) in suites {
        assert_eq!(counts["cases"], 50, "{name}");
        assert_eq!(counts["failures"], 0, "{name}");
    }
}

#[test]
fn exit_codes_separate_failures_from_bad_input() {
    // a refused drop is a failed check
    assert_eq!(with_file(&["drop", "q", "e"]).status.code(), Some(1));
    // condition (3) fails for the finitely supported functions
    assert_eq!(
        with_file(&["kernel-check", "F", "--cases", "20"]).status.code(),
        Some(1)
    );
    let unknown = with_file(&["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stderr(&unknown).contains("usage"));
    assert_eq!(with_file(&["normal-form", "nope"]).status.code(), Some(2));
    assert_eq!(with_file(&["normal-form", "g0"]).status.code(), Some(2));
    assert_eq!(trunclab(&["check"]).status.code(), Some(2));
}

#[test]
fn input_errors_are_located() {
    let path = write_temp(
        "star.toml",
        "# no star\n[space.X]\npoints = [\"1\", \"2\"]\nstar = \"*\"\n",
    );
    let out = trunclab(&["check", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("line 2") && err.contains("space.X") && err.contains("star not in points"),
        "{err}"
    );

    let path = write_temp(
        "family.toml",
        "[space.X]\npoints = [\"*\", \"1\", \"2\"]\nstar = \"*\"\n\n[trunc.T]\nspace = \"X\"\ncomponents = [[], [\"1\", \"2\"], [\"1\"]]\n",
    );
    let err = stderr(&trunclab(&["check", "--file", path.to_str().unwrap()]));
    assert!(
        err.contains("line 5") && err.contains("trunc.T") && err.contains("{2}"),
        "{err}"
    );
}

#[test]
fn every_command_runs_on_the_sample() {
    let cases: [(&str, &[&str]); 16] = [
        ("check", &[]),
        ("normal-form", &["g"]),
        ("good-seq", &["g"]),
        ("trunc-seq", &["ts"]),
        ("uc", &["T"]),
        ("equivalence", &["X3"]),
        ("frame-eval", &["r"]),
        ("induced-op", &["meet", "r", "u"]),
        ("drop", &["q", "k"]),
        ("e0q", &["q", "u"]),
        ("kernel-check", &["K"]),
        ("kernel-close", &["F"]),
        ("pointwise", &["F"]),
        ("dini", &["down"]),
        ("ex1-report", &[]),
        ("suite", &[]),
    ];
    assert_eq!(cases.map(|c| c.0), COMMANDS);
    let inst = read_instance(&sample_file()).unwrap();
    let flags = Flags {
        seed: 1,
        cases: Some(10),
    };
    for (cmd, names) in cases {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let result = run_command(cmd, &inst, &names, &flags);
        // `u` lives on B2, not on the target of `q`
        if cmd == "e0q" {
            assert!(result.is_err());
            continue;
        }
        let report = result.unwrap_or_else(|e| panic!("{cmd}: {e}"));
        assert!(report.passed(), "{cmd}:\n{}", report.human());
    }
}

#[test]
fn e0q_on_a_boolean_target() {
    // the booleanization target has no name in the file, so add a real on it here
    let mut inst = read_instance(&sample_file()).unwrap();
    let Object::Surjection(q) = inst.get("q").unwrap() else {
        panic!()
    };
    let zero = trunclab::Real::zero(q.target().clone());
    inst.insert("z", Object::Real(zero));
    let report = run_command("e0q", &inst, &["q".into(), "z".into()], &Flags::default()).unwrap();
    assert!(report.passed(), "{}", report.human());
    assert_eq!(report.data["method"], "adjoint");
}

#[test]
fn machine_section_is_deterministic() {
    for args in [
        &["kernel-check", "K", "--seed", "5", "--json"][..],
        &["pointwise", "F", "--json"],
        &["induced-op", "tminus(1/2)", "r", "--json"],
    ] {
        let (a, b) = (with_file(args), with_file(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
    let a = trunclab(&["suite", "--seed", "3", "--cases", "5", "--json"]);
    let b = trunclab(&["suite", "--seed", "3", "--cases", "5", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

fn assert_round_trip(inst: &Instance) {
    let text = to_toml(inst);
    let back = parse_instance(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    for (name, o) in inst.objects() {
        assert_eq!(back.get(name).unwrap(), o, "{name}\n{text}");
    }
}

#[test]
fn sample_round_trips() {
    assert_round_trip(&read_instance(&sample_file()).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_objects_round_trip(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let mut inst = Instance::default();
        let space = sample::space(&mut rng, 6);
        inst.insert("X", Object::Space(Arc::clone(&space)));
        let g = sample::simple_element(&mut rng, &space, false);
        let h = sample::simple_element(&mut rng, &space, true);
        inst.insert("g", Object::Element(g.clone()));
        inst.insert("s", Object::Sequence(Sequence::Simple(vec![g, h])));
        let t = SeqTrunc::degree(3).random_element(&mut rng);
        inst.insert("t", Object::Tail(t));
        let (_, frame) = random_frame(&mut rng, 20);
        inst.insert("F", Object::Frame(frame.clone()));
        inst.insert("r", Object::Real(random_real(&mut rng, &frame, false)));
        let family = sample::set_family(&mut rng, space.n_sites(), 3);
        let trunc = trunclab::SimpleTrunc::from_components(space, &family).unwrap();
        inst.insert("T", Object::Trunc(trunc));
        assert_round_trip(&inst);
    }
}
