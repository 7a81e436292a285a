use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use vecmac::cli::family_file::{read_family, write_family};
use vecmac::search::{random_family, Distribution};
use vecmac::VectorFamily;

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let path = scratch(name);
    fs::write(&path, text).unwrap();
    path
}

fn vecmac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vecmac"))
        .args(args)
        .env_remove("VECMAC_SEED")
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn orthonormal_check_is_equality() {
    let path = write("orthonormal.txt", "1 0 0\n0 1 0\n0 0 1\n");
    for p in ["0", "1", "2", "inf"] {
        let out = vecmac(&["check", path.to_str().unwrap(), "--p", p]);
        assert_eq!(out.status.code(), Some(0), "p={p}");
        let r = report(&out);
        assert_eq!(r["verdict"], "equality");
        assert!(floats(&r["results"]["margins"]).iter().all(|m| m.abs() <= 1e-12));
        assert!(r["input_digest"].as_str().unwrap().starts_with("sha256:"));
        assert_eq!(r["command"][0], "check");
    }
}

#[test]
fn diagonal_means() {
    let path = write("diag123.txt", "dim: 3\ncount: 3\nvectors:\n1, 0, 0\n0, 2, 0\n0, 0, 3\n");
    let r = report(&vecmac(&["check", path.to_str().unwrap(), "--p", "1"]));
    let means = floats(&r["results"]["means"]);
    let want = [2.0, (11.0f64 / 3.0).sqrt(), 6f64.powf(1.0 / 3.0)];
    for (a, b) in means.iter().zip(want) {
        assert!((a - b).abs() <= 1e-12 * b, "{a} vs {b}");
    }
    assert_eq!(r["results"]["flags"]["gram_rank"], 3);
}

#[test]
fn negative_p_violation_exits_one() {
    let path = write("spread.txt", "1 0\n0 100\n");
    let out = vecmac(&["check", path.to_str().unwrap(), "--p", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["verdict"], "violated");
    // M_1 = 1 / 0.505 and M_2 = sqrt(100)
    let margins = floats(&r["results"]["margins"]);
    assert!((margins[0] - (1.0 / 0.505 - 10.0)).abs() <= 1e-12, "{margins:?}");
}

#[test]
fn parse_errors_exit_two_with_location() {
    let path = write("bad.txt", "dim: 2\ncount: 2\nvectors:\n1, 0\n0, x\n");
    let out = vecmac(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5"), "{err}");
    assert!(out.stdout.is_empty());

    let out = vecmac(&["check", scratch("missing.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let config = write("bad.toml", "restarts = 3\nbogus = 1\n");
    let out = vecmac(&["search", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn chain_command() {
    let out = vecmac(&["chain", "1", "2", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], "holds");
    assert_eq!(vecmac(&["chain", "1", "-2"]).status.code(), Some(2));
}

#[test]
fn cube_zonotope() {
    let path = write("cube.txt", "1 0 0\n0 1 0\n0 0 1\n");
    let out = vecmac(&["zonotope", path.to_str().unwrap(), "--direction", "0,0,2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(floats(&r["results"]["intrinsic_volumes"]), vec![1.0, 3.0, 3.0, 1.0]);
    let proj = &r["results"]["projection"];
    assert_eq!(floats(&proj["direction"]), vec![0.0, 0.0, 1.0]);
    assert_eq!(proj["width"].as_f64().unwrap(), 1.0);
    let sharp = proj["sharp"].as_array().unwrap();
    for s in sharp {
        let m = s["margin"].as_f64().unwrap();
        assert!((m - 1.0 / 3.0).abs() <= 1e-12, "{m}");
    }
}

#[test]
fn search_witness_replays_as_violation() {
    let config = write("search.toml", "restarts = 8\nsteps = 300\n");
    let witness = scratch("witness.txt");
    let out = vecmac(&[
        "search",
        config.to_str().unwrap(),
        "--seed",
        "11",
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["seed"], 11);
    let best = r["results"]["runs"][0]["best_margin"].as_f64().unwrap();
    assert!(best < -1e-10);

    let replay = vecmac(&["check", witness.to_str().unwrap(), "--p", "-1", "--k", "2"]);
    assert_eq!(replay.status.code(), Some(1));
    let margin = floats(&report(&replay)["results"]["margins"])[0];
    assert!((margin - best).abs() <= 1e-12 * best.abs().max(1.0), "{margin} vs {best}");
}

#[test]
fn seed_precedence() {
    let plain = write("plain.toml", "restarts = 2\nsteps = 20\n");
    let seeded = write("seeded.toml", "restarts = 2\nsteps = 20\nseed = 5\n");
    let run = |config: &PathBuf, flag: Option<&str>, env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_vecmac"));
        cmd.arg("search").arg(config);
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        cmd.env_remove("VECMAC_SEED");
        if let Some(s) = env {
            cmd.env("VECMAC_SEED", s);
        }
        report(&cmd.output().unwrap())["seed"].as_u64().unwrap()
    };
    assert_eq!(run(&seeded, Some("9"), Some("7")), 9);
    assert_eq!(run(&seeded, None, Some("7")), 5);
    assert_eq!(run(&plain, None, Some("7")), 7);
    assert_eq!(run(&plain, None, None), vecmac::search::DEFAULT_SEED);
}

#[test]
fn reduce_writes_orthogonal_family() {
    let family = random_family(4, 4, Distribution::Gaussian, 21).unwrap();
    let input = write("reduce-in.txt", &write_family(&family, None));
    let output = scratch("reduce-out.txt");
    let out = vecmac(&["reduce", input.to_str().unwrap(), "--k", "3", "--output", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let orth: VectorFamily = read_family(&output).unwrap().0.family;
    for i in 0..4 {
        for j in 0..i {
            let c: f64 = orth.vector(i).iter().zip(orth.vector(j)).map(|(a, b)| a * b).sum();
            assert!(c.abs() <= 1e-9 * orth.norm(i) * orth.norm(j), "{i},{j}: {c}");
        }
    }
    let r = report(&out);
    assert_eq!(r["results"]["orthogonalization"]["sandwich_holds"], true);
}

#[test]
fn thread_count_does_not_change_output() {
    let family = random_family(7, 4, Distribution::Gaussian, 2).unwrap();
    let path = write("threads.txt", &write_family(&family, None));
    let results = |threads: &str| {
        let r = report(&vecmac(&["--threads", threads, "check", path.to_str().unwrap(), "--p", "0.5"]));
        r["results"].clone()
    };
    assert_eq!(results("1"), results("3"));
}
