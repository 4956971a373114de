use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ordauto::document::Document;
use ordauto::structures::{build_ln, oracle_in_in};
use ordauto::{Alphabet, HierWord};
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn ordauto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordauto")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = ordauto(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap().trim().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn corpus() -> Vec<PathBuf> {
    let mut words: Vec<PathBuf> = fs::read_dir(data("words"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    words.sort();
    words
}

fn level_of(word: &Path) -> usize {
    if word.file_name().unwrap().to_string_lossy().starts_with("w1") {
        1
    } else {
        2
    }
}

#[test]
fn complement_of_finitely_many_ones() {
    let dir = TempDir::new().unwrap();
    let co = path(&dir, "co.hnf");
    stdout(&["op", "complement", data("L1.hnf").to_str().unwrap(), "-o", &co]);
    let w = data("words/w1_alternating.txt");
    assert_eq!(stdout(&["member", &co, w.to_str().unwrap()]), "true");
    assert_eq!(
        stdout(&["member", data("L1.hnf").to_str().unwrap(), w.to_str().unwrap()]),
        "false"
    );
}

#[test]
fn union_with_itself_and_double_complement() {
    let dir = TempDir::new().unwrap();
    let l1 = data("L1.hnf");
    let l1 = l1.to_str().unwrap();
    let (u, c, cc) = (path(&dir, "u.hnf"), path(&dir, "c.hnf"), path(&dir, "cc.hnf"));
    stdout(&["op", "union", l1, l1, "-o", &u]);
    stdout(&["op", "complement", l1, "-o", &c]);
    stdout(&["op", "complement", &c, "-o", &cc]);
    for w in corpus().iter().filter(|w| level_of(w) == 1) {
        let w = w.to_str().unwrap();
        let expected = stdout(&["member", l1, w]);
        assert_eq!(stdout(&["member", &u, w]), expected);
        assert_eq!(stdout(&["member", &cc, w]), expected);
    }
}

#[test]
fn emptiness_and_membership_at_level_two() {
    let dir = TempDir::new().unwrap();
    let (l2, c, meet) = (path(&dir, "l2.hnf"), path(&dir, "c.hnf"), path(&dir, "meet.hnf"));
    stdout(&["build", "ln", "--level", "2", "-o", &l2]);
    stdout(&["op", "complement", &l2, "-o", &c]);
    stdout(&["op", "intersect", &l2, &c, "-o", &meet]);
    assert_eq!(stdout(&["empty", &meet]), "true");
    let witness = path(&dir, "w.word");
    assert_eq!(stdout(&["empty", &c, "-o", &witness]), "false");
    assert_eq!(stdout(&["member", &c, &witness]), "true");

    let b = Alphabet::binary();
    for w in corpus().iter().filter(|w| level_of(w) == 2) {
        let word = HierWord::parse(fs::read_to_string(w).unwrap().trim(), &b).unwrap();
        let expected = oracle_in_in(&word, 2).unwrap();
        assert_eq!(
            stdout(&["member", &l2, w.to_str().unwrap()]),
            expected.to_string(),
            "{w:?}"
        );
    }
}

#[test]
fn simulation_accepts_only_all_zero() {
    let ord = data("zeros.ord");
    for w in corpus().iter().filter(|w| level_of(w) == 2) {
        let expected = w.ends_with("w2_zeros.txt");
        assert_eq!(
            stdout(&["simulate", ord.to_str().unwrap(), w.to_str().unwrap()]),
            expected.to_string()
        );
    }
}

#[test]
fn structures_from_the_command_line() {
    let dir = TempDir::new().unwrap();
    let b1 = path(&dir, "b1.pres");
    stdout(&["build", "bn", "--level", "1", "-o", &b1]);
    assert_eq!(
        fs::read_to_string(&b1).unwrap(),
        fs::read_to_string(data("b1.pres")).unwrap()
    );
    assert_eq!(stdout(&["mc", &b1, data("atomless.fo").to_str().unwrap()]), "true");
    assert_eq!(stdout(&["mc", &b1, data("reflexive.fo").to_str().unwrap()]), "true");
    let report = stdout(&["check", data("b1.pres").to_str().unwrap()]);
    assert!(report.lines().all(|l| l.contains("pass")), "{report}");
    let false_sentence = path(&dir, "false.fo");
    fs::write(&false_sentence, "E x. (Zero(x) & One(x))").unwrap();
    assert_eq!(stdout(&["mc", &b1, &false_sentence]), "false");
    let lex = path(&dir, "lex.pres");
    stdout(&["build", "lex", "--alphabet", "a,b,c", "--level", "1", "-o", &lex]);
    assert!(matches!(
        Document::parse(&fs::read_to_string(&lex).unwrap()).unwrap(),
        Document::Presentation(_)
    ));
}

#[test]
fn tree_commands_agree_with_membership() {
    let dir = TempDir::new().unwrap();
    let t = path(&dir, "t.tree");
    stdout(&[
        "tree",
        "encode",
        data("words/w1_finite_ones.txt").to_str().unwrap(),
        "-o",
        &t,
    ]);
    assert_eq!(
        fs::read_to_string(&t).unwrap(),
        fs::read_to_string(data("golden/w1_finite_ones.tree")).unwrap()
    );

    let l2 = path(&dir, "l2.hnf");
    let m = path(&dir, "l2.treeauto");
    stdout(&["build", "ln", "--level", "2", "-o", &l2]);
    stdout(&["tree", "translate", &l2, "-o", &m]);
    let l2_acceptor = build_ln(2).unwrap();
    for w in corpus().iter().filter(|w| level_of(w) == 2) {
        let w = w.to_str().unwrap();
        stdout(&["tree", "encode", "--level", "2", w, "-o", &t]);
        let found = stdout(&["tree", "run", &t, &m]) == "found";
        assert_eq!(found.to_string(), stdout(&["member", &l2, w]));
        let word = HierWord::parse(fs::read_to_string(w).unwrap().trim(), &Alphabet::binary()).unwrap();
        assert_eq!(found, l2_acceptor.accepts(&word).unwrap());
    }

    // The empty language: no run on any tree.
    let empty = path(&dir, "empty.hnf");
    fs::write(
        &empty,
        r#"{"alphabet": ["0", "1"], "kind": "hnf", "level": 1, "version": 1,
            "top": {"acceptance": "buchi", "alphabet": ["0", "1"], "delta": [], "final": [],
                    "initial": "q0", "states": ["q0"]}}"#,
    )
    .unwrap();
    stdout(&["tree", "translate", &empty, "-o", &m]);
    stdout(&["tree", "encode", data("words/w1_zeros.txt").to_str().unwrap(), "-o", &t]);
    assert_eq!(stdout(&["tree", "run", &t, &m]), "none");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let junk = path(&dir, "junk.hnf");
    fs::write(&junk, "{ not json").unwrap();
    assert_eq!(ordauto(&["op", "complement", &junk]).status.code(), Some(2));
    let bad_formula = path(&dir, "bad.fo");
    fs::write(&bad_formula, "A x. (").unwrap();
    assert_eq!(
        ordauto(&["mc", data("b1.pres").to_str().unwrap(), &bad_formula])
            .status
            .code(),
        Some(2)
    );

    let l2 = path(&dir, "l2.hnf");
    stdout(&["build", "ln", "--level", "2", "-o", &l2]);
    let l1 = data("L1.hnf");
    assert_eq!(
        ordauto(&["op", "union", l1.to_str().unwrap(), &l2]).status.code(),
        Some(3)
    );
    assert_eq!(
        ordauto(&["member", &l2, data("words/w1_zeros.txt").to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(ordauto(&["check", l1.to_str().unwrap()]).status.code(), Some(3));

    let l3 = path(&dir, "l3.hnf");
    stdout(&["build", "ln", "--level", "3", "-o", &l3]);
    assert_eq!(ordauto(&["op", "complement", &l3, "--cap", "2"]).status.code(), Some(4));
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.pres"), path(&dir, "b.pres"));
    stdout(&["build", "omega-omega", "-o", &a]);
    stdout(&["build", "omega-omega", "-o", &b]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
