use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use zipfsem::RunManifest;

fn zipfsem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zipfsem"))
        .args(args)
        .env_remove("ZIPFSEM_OUT")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let o = zipfsem(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

/// Run twice into fresh directories and compare every file byte for byte.
fn assert_reproducible(args: &[&str]) {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let mut v = vec!["--out", d.path().to_str().unwrap()];
        v.extend_from_slice(args);
        ok(&v);
    }
    let m = RunManifest::read(&a.path().join("manifest.json")).unwrap();
    assert!(m.output_paths.len() >= 2, "{args:?}");
    for p in &m.output_paths {
        let (x, y) = (fs::read(a.path().join(p)).unwrap(), fs::read(b.path().join(p)).unwrap());
        assert!(x == y, "{args:?}: {p} differs");
    }
}

const SUBCOMMANDS: &[&[&str]] = &[
    &["sim", "gen"],
    &["sim", "spec"],
    &["covering", "diag"],
    &["covering", "hier"],
    &["mandelbrot", "solve"],
    &["mandelbrot", "dynamics"],
    &["mandelbrot", "pmf"],
    &["baseline", "typing"],
    &["baseline", "simon"],
    &["corpus", "wordlen"],
    &["corpus", "newrate"],
    &["corpus", "rankfreq"],
    &["lex", "sum"],
    &["lex", "pca"],
    &["fit"],
];

#[test]
fn every_subcommand_has_help_with_defaults() {
    let top = ok(&["--help"]);
    assert!(top.contains("Exit status"));
    assert!(top.contains("[default: 42]"), "{top}");
    assert!(top.contains("ZIPFSEM_OUT"));
    for sub in SUBCOMMANDS {
        let mut v = sub.to_vec();
        v.push("--help");
        let h = ok(&v);
        assert!(h.contains("Usage:"), "{sub:?}");
        if !matches!(sub, ["covering", "diag"] | ["corpus", _] | ["fit"]) {
            assert!(h.contains("[default:"), "{sub:?}: {h}");
        }
    }
    let h = ok(&["sim", "gen", "--help"]);
    assert!(h.contains("units of the space measure"));
    let h = ok(&["lex", "sum", "--help"]);
    assert!(h.contains("[default: 0.2]"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(zipfsem(&["bogus"]).status.code(), Some(1));
    assert_eq!(zipfsem(&["sim"]).status.code(), Some(1));
    assert_eq!(zipfsem(&["sim", "gen", "--n", "many"]).status.code(), Some(1));
    assert_eq!(zipfsem(&["covering", "diag"]).status.code(), Some(1));
    assert_eq!(zipfsem(&["--jobs", "0", "mandelbrot", "solve"]).status.code(), Some(1));
    let d = tempfile::tempdir().unwrap();
    let o = zipfsem(&["--out", &out_arg(d.path()), "lex", "pca", "--fixture", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown fixture"));
}

#[test]
fn computation_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    let out = out_arg(d.path());
    let o = zipfsem(&["--out", &out, "mandelbrot", "solve", "--k0", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no root"));
    let rows = fs::read_to_string(d.path().join("exponents.csv")).unwrap();
    assert_eq!(rows, "k0,B,status\n0,,no_root\n");
    let o = zipfsem(&["--out", &out, "fit", "--input", d.path().join("missing.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = zipfsem(&["--out", &out, "sim", "spec", "--n", "100", "--gamma", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_prints_the_exponent() {
    let d = tempfile::tempdir().unwrap();
    let s = ok(&["--out", &out_arg(d.path()), "mandelbrot", "solve", "--k0", "10"]);
    let b: f64 = s.trim().rsplit(' ').next().unwrap().parse().unwrap();
    assert!((b - 1.4).abs() <= 0.1, "{s}");
    let s = ok(&["--out", &out_arg(d.path()), "--jobs", "3", "mandelbrot", "solve", "--k0", "0.5,1,2,5"]);
    assert_eq!(s.lines().count(), 4);
    let csv = fs::read_to_string(d.path().join("exponents.csv")).unwrap();
    let bs: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(bs.windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn pca_prints_the_eigenvector() {
    let d = tempfile::tempdir().unwrap();
    let s = ok(&["--out", &out_arg(d.path()), "lex", "pca", "--fixture", "table12_bad_matrix"]);
    let line = s.lines().find(|l| l.starts_with("eigenvector")).unwrap();
    let inner = line.split('(').nth(1).unwrap().trim_end_matches(')');
    let ev: Vec<f64> = inner.split(", ").map(|x| x.parse().unwrap()).collect();
    let printed = [-0.300, -0.110, -0.418, -0.377, 0.206, 0.355, 0.416, 0.489];
    for (a, b) in ev.iter().zip(printed) {
        assert!((a - b).abs() <= 0.02);
    }
    let w = fs::read_to_string(d.path().join("weights.csv")).unwrap();
    assert_eq!(w.lines().count(), 40);
    assert!(w.contains("\nнеприглядный,2.39,,\n"));
}

#[test]
fn spec_run_writes_covering_and_manifest() {
    let d = tempfile::tempdir().unwrap();
    let run1 = d.path().join("run1");
    ok(&["sim", "spec", "--n", "2000", "--gamma", "2", "--seed", "42", "--out", run1.to_str().unwrap()]);
    let cov = fs::read_to_string(run1.join("covering.csv")).unwrap();
    assert!(cov.starts_with("rank,lo,hi,length\n1,"));
    let m = RunManifest::read(&run1.join("manifest.json")).unwrap();
    assert_eq!(m.subcommand, "sim spec");
    assert_eq!(m.seed, 42);
    assert_eq!(m.parameters["gamma"], 2.0);
    assert_eq!(m.parameters["n"], 2000);
    assert_eq!(m.output_paths, vec!["covering.csv", "manifest.json"]);
    assert!(m.results["seed42"]["rng_trace_hash"].is_string());

    // the diag subcommand consumes the file
    let s = ok(&["--out", d.path().join("diag").to_str().unwrap(), "covering", "diag", "--input",
        run1.join("covering.csv").to_str().unwrap(), "--k", "1,2,4"]);
    assert_eq!(s.lines().count(), 3);
    let layers = fs::read_to_string(d.path().join("diag/layers.csv")).unwrap();
    assert!(layers.starts_with("k,rho,gap,overlap,length_sum\n1,"));
}

#[test]
fn same_arguments_same_bytes() {
    assert_reproducible(&["sim", "gen", "--n", "3000"]);
    assert_reproducible(&["sim", "spec", "--n", "3000", "--gamma", "1.1"]);
    assert_reproducible(&["covering", "hier", "--depth", "8"]);
    assert_reproducible(&["mandelbrot", "solve", "--k0", "1,10,100"]);
    assert_reproducible(&["mandelbrot", "dynamics", "--n", "200", "--k0", "5"]);
    assert_reproducible(&["mandelbrot", "pmf", "--k0", "3", "--n", "500"]);
    assert_reproducible(&["mandelbrot", "pmf", "--k0", "3", "--n", "50", "--selfconsistent"]);
    assert_reproducible(&["baseline", "typing", "--alphabet", "3", "--chars", "50000", "--write-tokens"]);
    assert_reproducible(&["baseline", "simon", "--p", "0.1", "--tokens", "50000", "--window", "1000"]);
    assert_reproducible(&["lex", "sum"]);
    assert_reproducible(&["lex", "pca", "--method", "row"]);
}

#[test]
fn replicates_do_not_depend_on_jobs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (d, jobs) in [(&a, "1"), (&b, "4")] {
        ok(&["--out", &out_arg(d.path()), "--jobs", jobs, "--seed", "7", "sim", "gen", "--n", "2000", "--replicates", "4"]);
    }
    for s in 7..11 {
        let name = format!("covering_seed{s}.csv");
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap());
    }
    let m = RunManifest::read(&a.path().join("manifest.json")).unwrap();
    assert_eq!(m.results.len(), 4);
    assert_eq!(m.parameters["jobs"], 1);
}

#[test]
fn corpus_pipeline_and_fit() {
    let d = tempfile::tempdir().unwrap();
    let out = out_arg(d.path());
    ok(&["--out", &out, "baseline", "simon", "--tokens", "40000", "--window", "1000", "--write-tokens"]);
    let tokens = d.path().join("tokens.txt");
    let c = d.path().join("corpus");
    let c = c.to_str().unwrap();
    let s = ok(&["--out", c, "corpus", "rankfreq", "--input", tokens.to_str().unwrap()]);
    assert!(s.starts_with("40000 tokens"));
    // same table as the simulator wrote, up to the word column
    let sim = fs::read_to_string(d.path().join("rankfreq.csv")).unwrap();
    let corp = fs::read_to_string(d.path().join("corpus/rankfreq.csv")).unwrap();
    let freqs = |t: &str| t.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(freqs(&sim), freqs(&corp));

    ok(&["--out", c, "corpus", "newrate", "--input", tokens.to_str().unwrap(), "--window", "1000"]);
    let rate = fs::read_to_string(d.path().join("corpus/newrate.csv")).unwrap();
    assert_eq!(rate.lines().count(), 41);
    ok(&["--out", c, "corpus", "wordlen", "--input", tokens.to_str().unwrap()]);
    assert!(fs::read_to_string(d.path().join("corpus/wordlen.csv")).unwrap().starts_with("length,types\n"));

    let rf = d.path().join("corpus/rankfreq.csv");
    let s = ok(&["--out", c, "fit", "--input", rf.to_str().unwrap(), "--lo", "1", "--hi", "100"]);
    assert!(s.starts_with("B = "));
    let fit: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.path().join("corpus/fit.json")).unwrap()).unwrap();
    assert_eq!(fit["fit_range"], serde_json::json!([1, 100]));
    let s = ok(&["--out", c, "fit", "--input", rf.to_str().unwrap(), "--spectrum", "--fmin", "2", "--fmax", "200", "--min-words", "2"]);
    assert!(s.starts_with("beta = "));
}

#[test]
fn raw_text_tokenization() {
    let d = tempfile::tempdir().unwrap();
    let text = d.path().join("t.txt");
    fs::write(&text, "The cat, the DOG; the end.").unwrap();
    let c = d.path().join("o");
    ok(&["--out", c.to_str().unwrap(), "corpus", "rankfreq", "--raw", "--input", text.to_str().unwrap()]);
    let rf = fs::read_to_string(c.join("rankfreq.csv")).unwrap();
    assert!(rf.starts_with("rank,frequency,word\n1,3,the\n"));
}

#[test]
fn output_directory_from_environment() {
    let d = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_zipfsem"))
        .args(["covering", "hier", "--depth", "4"])
        .env("ZIPFSEM_OUT", d.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(d.path().join("covering.csv").exists());
    let lines = fs::read_to_string(d.path().join("covering.csv")).unwrap().lines().count();
    assert_eq!(lines, 32);
}

#[test]
fn lex_sum_on_a_user_file() {
    let d = tempfile::tempdir().unwrap();
    let f = d.path().join("t.csv");
    fs::write(&f, "role,word,freq_per_million\nhead,a,10\nhyponym,b,6\nhyponym,c,5\nexcluded,d,4\n").unwrap();
    let o = d.path().join("o");
    let s = ok(&["--out", o.to_str().unwrap(), "lex", "sum", "--input", f.to_str().unwrap()]);
    assert!(s.contains("ratio 1.1000 pass"), "{s}");
    let s = ok(&["--out", o.to_str().unwrap(), "lex", "sum", "--input", f.to_str().unwrap(), "--all-listed"]);
    assert!(s.contains("ratio 1.5000 FAIL"), "{s}");
}
