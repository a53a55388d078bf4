use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use ainf_core::action::export::{MatrixEntry, SparseMatrix};
use ainf_core::patterns::io::parse_basis;
use ainf_core::patterns::{enumerate_basis, Signature};
use ainf_core::qarith::EvalNumeric;
use ainf_core::verify::{Report, Status};
use tempfile::TempDir;

fn ainf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ainf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let f = Fixture {
            dir: tempfile::tempdir().unwrap(),
        };
        f.write("ls0.json", r#"{"m":-1,"n":0,"offsets":[1,0]}"#);
        f.write("trivial.json", r#"{"m":0,"n":0,"offsets":[0]}"#);
        f.write("ls0-xi0.json", r#"{"m":-1,"n":0,"offsets":[1,0],"xi0":"0"}"#);
        f.write("m1n1.json", r#"{"m":-1,"n":1,"offsets":[2,1,0]}"#);
        f.write("hw.txt", "depth 1 sig ls0.json\n0\n");
        f.write("bad.txt", "depth 1 sig ls0.json\n5\n");
        f
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn basis_listing() {
    let f = Fixture::new();
    let o = ainf(&["basis", "--signature", &f.path("ls0.json"), "--depth", "3"]);
    assert_eq!(code(&o), 0);
    let (n, pats, _) = parse_basis(&stdout(&o), &Signature::levendorskii_soibelman(0)).unwrap();
    assert_eq!((n, pats.len()), (3, 3));
    let o = ainf(&["basis", "--signature", &f.path("trivial.json"), "--depth", "9"]);
    assert!(stdout(&o).starts_with("basis N=9 dim=1 "));
    let o = ainf(&["basis", "--signature", &f.path("missing.json"), "--depth", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn act_on_highest_weight() {
    let f = Fixture::new();
    let sig = f.path("ls0.json");
    let hw = f.path("hw.txt");
    let o = ainf(&["act", "--signature", &sig, "--gen", "f-1", "--pattern", &hw]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("(1)*sqrt{1} * "), "{out}");

    let o = ainf(&["act", "--signature", &sig, "--gen", "e5", "--pattern", &hw]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero vector"));

    let o = ainf(&["act", "--signature", &sig, "--gen", "h0", "--pattern", &hw]);
    assert!(stdout(&o).starts_with("(-1) * "));

    let o = ainf(&["act", "--signature", &sig, "--gen", "f-1", "--pattern", &f.path("bad.txt")]);
    assert_eq!(code(&o), 2);
    let o = ainf(&["act", "--signature", &sig, "--gen", "x1", "--pattern", &hw]);
    assert_eq!(code(&o), 2);
}

#[test]
fn matrix_export_roundtrip_and_numeric_agreement() {
    let f = Fixture::new();
    let sig = f.path("m1n1.json");
    let exact_path = f.path("e.txt");
    let num_path = f.path("n.txt");
    let o = ainf(&["matrix", "--signature", &sig, "--gen", "f0", "--depth", "3", "--out", &exact_path]);
    assert_eq!(code(&o), 0);
    let o = ainf(&[
        "matrix", "--signature", &sig, "--gen", "f0", "--depth", "3", "--mode", "numeric", "--v-samples", "1.1",
        "--out", &num_path,
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&exact_path).unwrap();
    let exact = SparseMatrix::parse(&text).unwrap();
    assert_eq!(exact.to_text(), text);
    let s = Signature::simple(-1, 1, vec![2, 1, 0]).unwrap();
    assert_eq!(exact.dim, enumerate_basis(&s, 3).len());
    let numeric = SparseMatrix::parse(&fs::read_to_string(&num_path).unwrap()).unwrap();
    assert_eq!(exact.entries.len(), numeric.entries.len());
    for ((r1, c1, e), (r2, c2, z)) in exact.entries.iter().zip(&numeric.entries) {
        assert_eq!((r1, c1), (r2, c2));
        let (MatrixEntry::Exact(x), MatrixEntry::Numeric(z)) = (e, z) else {
            panic!("entry kinds")
        };
        let xv = x.eval_numeric(num_complex::Complex64::new(1.1, 0.0)).unwrap().value;
        assert!((xv - z).norm() < 1e-9 * (1.0 + z.norm()));
    }
}

fn verify_args<'a>(sig: &'a str, out: &'a str) -> Vec<&'a str> {
    vec![
        "verify", "--suite", "cartan", "--signature", sig, "--depth", "3", "--window", "2", "--out", out,
    ]
}

#[test]
fn verify_exit_codes_and_reports() {
    let f = Fixture::new();
    let sig = f.path("ls0.json");
    let (a, b, c) = (f.path("a.json"), f.path("b.json"), f.path("c.json"));
    assert_eq!(code(&ainf(&verify_args(&sig, &a))), 0);
    assert_eq!(code(&ainf(&verify_args(&sig, &b))), 0);
    let ta = fs::read_to_string(&a).unwrap();
    assert_eq!(ta, fs::read_to_string(&b).unwrap(), "byte-identical reruns");
    let rep = Report::from_json(&ta).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.to_json() + "\n", ta);

    let mut flipped = verify_args(&sig, &c);
    flipped.push("--flip-orientation");
    assert_eq!(code(&ainf(&flipped)), 1);
    let rep = Report::from_json(&fs::read_to_string(&c).unwrap()).unwrap();
    let fail = rep.results.iter().find(|r| r.status == Status::Fail).unwrap();
    assert!(fail.witness.is_some());

    assert_eq!(code(&ainf(&["verify", "--no-such-flag"])), 2);
    assert_eq!(code(&ainf(&["verify", "--suite", "nonsense"])), 2);
}

#[test]
fn identities_exit_codes() {
    let f = Fixture::new();
    let out = f.path("id.json");
    let ok = ainf(&["identities", "--identity", "three-term", "--identity", "serre-fraction", "--trials", "5", "--out", &out]);
    assert_eq!(code(&ok), 0);
    assert!(fs::read_to_string(&out).unwrap().contains("\"identity\": \"serre-fraction\""));
    let bad = ainf(&["identities", "--identity", "three-term", "--trials", "5", "--mutate", "rhs"]);
    assert_eq!(code(&bad), 1);
    let shifted = ainf(&["identities", "--identity", "serre-fraction", "--trials", "5", "--mutate", "0:1"]);
    assert_eq!(code(&shifted), 1);
    assert_eq!(code(&ainf(&["identities", "--trials", "0"])), 2);
    assert_eq!(code(&ainf(&["identities", "--identity", "nope"])), 2);
}

fn series(f: &Fixture, sig: &str) -> String {
    let o = ainf(&["series", "--signature", &f.path(sig), "--terms", "20"]);
    assert_eq!(code(&o), 0);
    stdout(&o).lines().last().unwrap().to_string()
}

#[test]
fn series_verdicts() {
    let f = Fixture::new();
    assert!(series(&f, "ls0.json").starts_with("stabilized -1 "));
    assert!(series(&f, "trivial.json").starts_with("stabilized 0 "));
    assert!(series(&f, "ls0-xi0.json").starts_with("divergent"));
}
