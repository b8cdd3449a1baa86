use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_speclab");

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn speclab(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn run_into(config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    speclab(&args)
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap()
}

fn csv_rows(dir: &Path) -> Vec<csv::StringRecord> {
    let bytes = read(dir, "report.csv");
    csv::Reader::from_reader(&bytes[..]).records().map(Result::unwrap).collect()
}

const DISTRIBUTION: &str = "kind = distribution
[family]
perturbation = trace_class_demo
[ladder]
n = 16, 32, 64
[analysis]
tests = z^2, z^3, hat(0.5, 0.05, 0.1)
";

const CONFIGS: [(&str, &str); 6] = [
    ("distribution", DISTRIBUTION),
    (
        "cluster",
        "kind = cluster\n[family]\nbackground = period2_gap\nperturbation = compact_demo\n[ladder]\nn = 30, 60\n[analysis]\neps = 0.05, 0.2\n",
    ),
    ("attract", "kind = attract\n[family]\nperturbation = cesaro_demo\n[ladder]\nn = 16, 64\n[analysis]\npoints = -2, 1+0.5i\n"),
    (
        "inequalities",
        "kind = inequalities\n[family]\nbackground = period3_gap\nperturbation = trace_class_demo\n[ladder]\nn = 8, 24\n[analysis]\neps = 0.1, 0.5\n[instances]\ncount = 6\nstructure = dense\nmax_order = 12\n",
    ),
    ("norms", "kind = norms\n[family]\nperturbation = compact_demo\n[ladder]\nn = 8, 16\n[instances]\ncount = 5\nstructure = banded\n"),
    ("blockcheck", "kind = blockcheck\n[family]\nbackground = period3_gap\n[ladder]\nn = 1, 3, 7, 12\n[analysis]\neps = 1e-3, 0.1\n"),
];

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in CONFIGS {
        let cfg = write_config(dir.path(), &format!("{name}.conf"), text);
        let (a, b) = (dir.path().join(format!("{name}-a")), dir.path().join(format!("{name}-b")));
        assert_eq!(run_into(&cfg, &a, &[]).status.code(), Some(0), "{name}");
        assert_eq!(run_into(&cfg, &b, &[]).status.code(), Some(0), "{name}");
        assert_eq!(read(&a, "report.csv"), read(&b, "report.csv"), "{name}");
        assert_eq!(read(&a, "report.json"), read(&b, "report.json"), "{name}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "i.conf", CONFIGS[3].1);
    let (a, b) = (dir.path().join("one"), dir.path().join("many"));
    let one = Command::new(BIN)
        .args(["run", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()])
        .env("SPECLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(run_into(&cfg, &b, &[]).status.code(), Some(0));
    assert_eq!(read(&a, "report.csv"), read(&b, "report.csv"));
    assert_eq!(read(&a, "report.json"), read(&b, "report.json"));

    let bad = Command::new(BIN)
        .args(["run", cfg.to_str().unwrap(), "--out", dir.path().join("bad").to_str().unwrap()])
        .env("SPECLAB_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

fn collect_numbers(v: &Value, out: &mut HashSet<u64>) {
    match v {
        Value::Number(n) => {
            out.insert(n.as_f64().unwrap().to_bits());
        }
        Value::Array(a) => a.iter().for_each(|x| collect_numbers(x, out)),
        Value::Object(o) => o.values().for_each(|x| collect_numbers(x, out)),
        _ => {}
    }
}

#[test]
fn every_csv_number_appears_in_the_json() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in CONFIGS {
        let cfg = write_config(dir.path(), &format!("{name}.conf"), text);
        let out = dir.path().join(name);
        assert_eq!(run_into(&cfg, &out, &[]).status.code(), Some(0), "{name}");
        let json: Value = serde_json::from_slice(&read(&out, "report.json")).unwrap();
        let mut numbers = HashSet::new();
        collect_numbers(&json, &mut numbers);
        let mut checked = 0;
        for rec in csv_rows(&out) {
            for field in rec.iter() {
                if let Ok(x) = field.parse::<f64>() {
                    let zero = x == 0.0 && (numbers.contains(&0f64.to_bits()) || numbers.contains(&(-0f64).to_bits()));
                    assert!(zero || numbers.contains(&x.to_bits()), "{name}: {field} missing from report.json");
                    checked += 1;
                }
            }
        }
        assert!(checked > 0, "{name}");
    }
}

#[test]
fn free_second_moment_gaps_match_trace_formula() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "free.conf",
        "kind = distribution\n[ladder]\nn = 8, 64, 512\n[analysis]\ntests = z^2\n",
    );
    let out = dir.path().join("o");
    assert_eq!(run_into(&cfg, &out, &[]).status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    for r in rows {
        let n: f64 = r[0].parse().unwrap();
        let mean: f64 = r[2].parse().unwrap();
        let gap: f64 = r[6].parse().unwrap();
        // tr(J_n^2) = 2(n - 1), and the symbol integral of (2 cos t)^2 is 2
        assert!((mean - 2.0 * (n - 1.0) / n).abs() < 1e-12, "n={n}");
        assert!((gap - 2.0 / n).abs() < 1e-12, "n={n}");
        assert!((gap - (mean - 2.0).abs()).abs() < 1e-12);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    let ok = write_config(d, "ok.conf", DISTRIBUTION);
    assert_eq!(run_into(&ok, &d.join("ok"), &[]).status.code(), Some(0));

    let blowup = write_config(
        d,
        "blowup.conf",
        "kind = distribution\n[family]\nperturbation = rank_one_demo\nscale = 1e7\n[ladder]\nn = 8, 16\n",
    );
    let out = run_into(&blowup, &d.join("blowup"), &[]);
    assert_eq!(out.status.code(), Some(2));
    let json: Value = serde_json::from_slice(&read(&d.join("blowup"), "report.json")).unwrap();
    assert_eq!(json["status"]["exit_code"], 2);
    assert_eq!(json["status"]["solver_failures"].as_array().unwrap().len(), 2);

    let unconverged = write_config(
        d,
        "strict.conf",
        "kind = distribution\n[ladder]\nn = 4, 5\n[analysis]\ntests = z^2\nabs_threshold = 1e-9\nrequire_convergence = true\n",
    );
    assert_eq!(run_into(&unconverged, &d.join("strict"), &[]).status.code(), Some(2));

    let missing = write_config(d, "missing.conf", "kind = distribution\n[family]\nperturbation = none\n");
    let out = run_into(&missing, &d.join("missing"), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ladder.n"));
    assert!(!d.join("missing").exists());

    let malformed = write_config(d, "bad.conf", "kind = distribution\n[ladder\nn = 4\n");
    let out = run_into(&malformed, &d.join("bad"), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert!(!d.join("bad").exists());

    let unknown = write_config(d, "unknown.conf", "kind = cluster\n[ladder]\nn = 4\nstep = 2\n");
    assert_eq!(run_into(&unknown, &d.join("unknown"), &[]).status.code(), Some(1));

    assert_eq!(run_into(&d.join("nope.conf"), &d.join("nope"), &[]).status.code(), Some(1));
    assert_eq!(speclab(&[]).status.code(), Some(1));
    assert_eq!(speclab(&["run"]).status.code(), Some(1));
    assert_eq!(speclab(&["--help"]).status.code(), Some(0));
    assert_eq!(speclab(&["--version"]).status.code(), Some(0));
}

#[test]
fn norms_on_seeded_tridiagonals_pass() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "n.conf",
        "kind = norms\n[ladder]\nn = 4\n[instances]\ncount = 100\nstructure = tridiagonal\n",
    );
    let out = dir.path().join("o");
    assert_eq!(run_into(&cfg, &out, &[]).status.code(), Some(0));
    let instances = csv_rows(&out).iter().filter(|r| &r[0] == "instance").count();
    assert_eq!(instances, 100);
}

#[test]
fn seed_and_out_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("out = {}\n{}", dir.path().join("from-config").display(), CONFIGS[3].1);
    let cfg = write_config(dir.path(), "i.conf", &text);
    assert_eq!(speclab(&["run", cfg.to_str().unwrap()]).status.code(), Some(0));
    let base = read(&dir.path().join("from-config"), "report.csv");

    let other = dir.path().join("seeded");
    assert_eq!(run_into(&cfg, &other, &["--seed", "7"]).status.code(), Some(0));
    assert_ne!(read(&other, "report.csv"), base);
    let json: Value = serde_json::from_slice(&read(&other, "report.json")).unwrap();
    assert_eq!(json["seed"], 7);
    assert_eq!(json["config"]["seed"], 7);
}

#[test]
fn presets_listing() {
    let a = speclab(&["presets"]);
    assert_eq!(a.status.code(), Some(0));
    let text = String::from_utf8(a.stdout).unwrap();
    for name in ["trace_class_demo", "cesaro_demo", "compact_demo", "rank_one_demo", "period2_gap", "random"] {
        assert!(text.contains(name), "{name}");
    }
    assert_eq!(speclab(&["presets"]).stdout, text.as_bytes());
}
