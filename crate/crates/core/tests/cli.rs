use std::fs;
use std::path::Path;
use std::process::Command;

use zenscope::cli::Manifest;

fn zenscope(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_zenscope"))
        .args(args)
        .output()
        .expect("spawn zenscope")
}

fn read_manifest(dir: &Path, cmd: &str) -> Manifest {
    let text = fs::read_to_string(dir.join(format!("manifest-{cmd}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn missing_input_is_a_user_error_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let r = zenscope(&["--out-dir", out, "ingest", "--prices", "/no/such/prices.csv"]);
    assert_eq!(r.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&r.stderr);
    assert!(msg.contains("/no/such/prices.csv"), "{msg}");
}

#[test]
fn bad_flags_exit_one_and_help_exits_zero() {
    assert_eq!(zenscope(&["depmat", "--measure", "kappa", "--pobs", "x"]).status.code(), Some(1));
    assert_eq!(zenscope(&["--help"]).status.code(), Some(0));
}

#[test]
fn staged_commands_chain_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let s = |p: &str| d.join(p).to_str().unwrap().to_string();
    let run = |args: &[String]| {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = zenscope(&args);
        assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    };
    let out = s("");
    run(&["--out-dir".into(), out.clone(), "--seed".into(), "3".into(), "synth".into(), "--d".into(), "4".into(), "--t".into(), "400".into(), "--sectors".into(), "2".into()]);
    run(&["--out-dir".into(), out.clone(), "ingest".into(), "--prices".into(), s("prices.csv"), "--sectors".into(), s("sectors.csv")]);
    run(&["--out-dir".into(), out.clone(), "degarch".into(), "--returns".into(), s("returns.csv")]);
    run(&["--out-dir".into(), out.clone(), "depmat".into(), "--pobs".into(), s("pobs.csv"), "--measure".into(), "lambda-t".into()]);
    run(&["--out-dir".into(), out.clone(), "fit-joint".into(), "--pobs".into(), s("pobs.csv")]);
    run(&["--out-dir".into(), out.clone(), "gof".into(), "--pobs".into(), s("pobs.csv"), "--pairfits".into(), s("pairfits.json"), "--joint".into(), s("joint.json")]);
    run(&["--out-dir".into(), out.clone(), "zenpath".into(), "--matrix".into(), s("depmat-lambda-t.json"), "--order".into(), "desc".into(), "--top".into(), "3".into()]);
    run(&["--out-dir".into(), out.clone(), "zenplot".into(), "--input".into(), s("pobs.csv"), "--zenpath".into(), s("zenpath.json"), "--out".into(), "plot.svg".into()]);
    run(&["--out-dir".into(), out.clone(), "zenplot".into(), "--panel".into(), "acf".into(), "--input".into(), s("residuals.csv"), "--dirs".into(), "dddrrrr".into(), "--interleaved".into(), "--out".into(), "acf.svg".into()]);
    for f in ["returns.csv", "fits.json", "residuals.csv", "pobs.csv", "pairfits.json", "joint.json", "gof.json", "zenpath.json", "plot.svg", "acf.svg"] {
        assert!(d.join(f).exists(), "{f}");
    }
    let m = read_manifest(d, "zenplot");
    assert_eq!(m.artifacts.len(), 1);
    assert_eq!(m.artifacts[0].path, "acf.svg");
    // a colliding direction sequence is reported, not drawn
    let r = zenscope(&["--out-dir", &out, "zenplot", "--panel", "acf", "--input", &s("residuals.csv"), "--dirs", "rld", "--out", "bad.svg"]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("step 2"));
}

#[test]
fn pipeline_reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&a, "1"), (&b, "3")] {
        let r = zenscope(&[
            "--out-dir",
            dir.path().to_str().unwrap(),
            "--threads",
            threads,
            "pipeline",
            "--nsim",
            "200",
        ]);
        assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let ma = read_manifest(a.path(), "pipeline");
    let mb = read_manifest(b.path(), "pipeline");
    assert_eq!(ma, mb);
    assert!(ma.artifacts.len() >= 30);
    for e in &ma.artifacts {
        let x = fs::read(a.path().join(&e.path)).unwrap();
        let y = fs::read(b.path().join(&e.path)).unwrap();
        assert!(x == y, "{} differs", e.path);
    }
    for kind in ["zenplot-chain.svg", "acf-residuals.svg", "qq-residuals.svg", "gof.json", "depmat-lambda-emp.csv"] {
        assert!(ma.artifacts.iter().any(|e| e.path == kind), "{kind}");
    }
}
