use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use radial_born::highprec::{BigReal, Precision};
use sha2::{Digest, Sha256};

const SMALL: [&str; 8] = ["--terms", "40", "--precision", "256", "--pieces", "200", "--grid", "128"];

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radial-born"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("RADIAL_BORN_CACHE_DIR")
        .env_remove("RADIAL_BORN_PRECISION")
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = run(dir, args);
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(o.status.success(), "{args:?}: {err}");
    err
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn background_conductivity_has_integer_spectrum() {
    let d = tempfile::tempdir().unwrap();
    let p = write(d.path(), "g.txt", "kind conductivity\nradius 1\nbreakpoints 0 1\nvalues 1\n");
    ok(d.path(), &["dtn", "--profile", p.to_str().unwrap(), "--terms", "5", "--no-cache"]);
    let r = rows(&d.path().join("spectrum.csv"));
    assert_eq!(r.len(), 6);
    for (k, row) in r.iter().enumerate() {
        assert_eq!(row[0], k.to_string());
        assert!((row[1].parse::<f64>().unwrap() - k as f64).abs() < 1e-60);
        assert_eq!(row[2].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn unit_potential_and_cache_hit() {
    let d = tempfile::tempdir().unwrap();
    let cache = d.path().join("cache");
    let p = write(d.path(), "q.txt", "kind potential\nradius 1\nbreakpoints 0 1\nvalues 1\n");
    let args = ["dtn", "--profile", p.to_str().unwrap(), "--terms", "0", "--cache-dir", cache.to_str().unwrap()];
    assert!(ok(d.path(), &args).starts_with("computed"));
    let first = fs::read_to_string(d.path().join("spectrum.csv")).unwrap();
    let lambda0: f64 = rows(&d.path().join("spectrum.csv"))[0][1].parse().unwrap();
    assert!((lambda0 - 0.3130352855).abs() < 1e-9);

    let entry = fs::read_dir(&cache).unwrap().next().unwrap().unwrap().path();
    let mtime = fs::metadata(&entry).unwrap().modified().unwrap();
    assert!(ok(d.path(), &args).starts_with("cache hit"));
    assert_eq!(fs::metadata(&entry).unwrap().modified().unwrap(), mtime);
    assert_eq!(fs::read_to_string(d.path().join("spectrum.csv")).unwrap(), first);
}

#[test]
fn cached_spectrum_matches_fresh_solve() {
    let d = tempfile::tempdir().unwrap();
    let cache = d.path().join("cache");
    let p = write(d.path(), "g.txt", "analytic bump kind=conductivity amplitude=0.3 width=1\n");
    let prof = p.to_str().unwrap();
    let mut cached = vec!["dtn", "--profile", prof, "--cache-dir", cache.to_str().unwrap()];
    cached.extend(SMALL);
    ok(d.path(), &cached);
    ok(d.path(), &cached);
    let from_cache = fs::read_to_string(d.path().join("spectrum.csv")).unwrap();
    let mut fresh = vec!["dtn", "--profile", prof, "--no-cache"];
    fresh.extend(SMALL);
    ok(d.path(), &fresh);
    assert_eq!(fs::read_to_string(d.path().join("spectrum.csv")).unwrap(), from_cache);
}

#[test]
fn born_of_background_spectrum_is_zero() {
    let d = tempfile::tempdir().unwrap();
    let mut text = String::from("k,lambda,shift\n");
    for k in 0..=20 {
        text.push_str(&format!("{k},{k},0\n"));
    }
    let s = write(d.path(), "spec.csv", &text);
    ok(d.path(), &["born", "--spectrum", s.to_str().unwrap(), "--kind", "conductivity", "--terms", "20", "--grid", "64"]);
    for row in rows(&d.path().join("reconstruction.csv")) {
        assert_eq!(row[1].parse::<f64>().unwrap(), 1.0);
    }
    for row in rows(&d.path().join("fourier.csv")) {
        assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn unit_and_finite_radius_one_agree() {
    let d = tempfile::tempdir().unwrap();
    let p = write(d.path(), "q.txt", "analytic bump kind=potential amplitude=2 width=0.7\n");
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    fs::create_dir_all(&a).unwrap();
    fs::create_dir_all(&b).unwrap();
    let mut args = vec!["born", "--profile", p.to_str().unwrap(), "--no-cache"];
    args.extend(SMALL);
    ok(&a, &args);
    args.extend(["--mode", "finiteR", "--radius", "1"]);
    ok(&b, &args);
    for f in ["fourier.csv", "reconstruction.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn inverse_of_written_fourier_file() {
    let d = tempfile::tempdir().unwrap();
    let p = write(d.path(), "g.txt", "kind conductivity\nradius 1\nbreakpoints 0 1\nvalues 1\n");
    let mut args = vec!["born", "--profile", p.to_str().unwrap(), "--no-cache"];
    args.extend(SMALL);
    ok(d.path(), &args);
    let f = d.path().join("fourier.csv");
    ok(d.path(), &["invert-fourier", "--fourier", f.to_str().unwrap()]);
    let inv = rows(&d.path().join("inverse.csv"));
    assert_eq!(inv.len(), rows(&f).len());
    assert!(inv.iter().all(|r| r[1].parse::<f64>().unwrap().abs() < 1e-12));
}

#[test]
fn moments_file_for_a_potential() {
    let d = tempfile::tempdir().unwrap();
    let p = write(d.path(), "q.txt", "kind potential\nradius 1\nbreakpoints 0 1\nvalues 0.001\n");
    ok(d.path(), &["moments", "--profile", p.to_str().unwrap(), "--terms", "10", "--precision", "256", "--no-cache"]);
    let m = d.path().join("moments.csv");
    assert_eq!(header(&m), "k,sigma,shift,residual");
    for row in rows(&m) {
        let k: f64 = row[0].parse().unwrap();
        let sigma: f64 = row[1].parse().unwrap();
        let residual: f64 = row[3].parse().unwrap();
        assert!((sigma - 0.001 / (2.0 * k + 3.0)).abs() < 1e-15);
        assert!(residual.abs() < 1e-6);
    }
}

#[test]
fn experiment_three_has_both_modes() {
    let d = tempfile::tempdir().unwrap();
    let mut args = vec!["experiment", "3", "--no-cache"];
    args.extend(SMALL);
    ok(d.path(), &args);
    let dir = d.path().join("experiment_3");
    assert!(header(&dir.join("case0_unit.csv")).starts_with("r,truth,"));
    assert!(header(&dir.join("case0_scattering.csv")).starts_with("r,truth,"));
    assert!(header(&dir.join("case0_scattering_fourier.csv")).starts_with("xi,truth,"));
}

#[test]
fn experiment_eleven_writes_log_errors() {
    let d = tempfile::tempdir().unwrap();
    let mut args = vec!["experiment", "11", "--iterations", "2", "--no-cache"];
    args.extend(SMALL);
    ok(d.path(), &args);
    let errors: Vec<PathBuf> = fs::read_dir(d.path().join("experiment_11"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with("_errors.csv"))
        .collect();
    assert_eq!(errors.len(), 3);
    for e in errors {
        assert_eq!(header(&e), "iteration,l2,linf,log10_l2,log10_linf");
        for row in rows(&e) {
            let l2: f64 = row[1].parse().unwrap();
            assert!((row[3].parse::<f64>().unwrap() - l2.log10()).abs() < 1e-12);
        }
    }
}

#[test]
fn ensemble_error_shrinks_toward_boundary() {
    let d = tempfile::tempdir().unwrap();
    let mut args = vec!["ensemble", "--samples", "6", "--basis", "10"];
    args.extend(SMALL);
    ok(d.path(), &args);
    let curve: Vec<(f64, f64)> = rows(&d.path().join("depth_error.csv"))
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    let mean = |a: f64, b: f64| {
        let v: Vec<f64> = curve.iter().filter(|(r, _)| *r >= a && *r <= b).map(|(_, e)| *e).collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    assert!(mean(0.8, 1.0) < mean(0.0, 0.2));
}

fn sha256_hex(path: &Path) -> String {
    hex::encode(Sha256::digest(fs::read(path).unwrap()))
}

#[test]
fn experiments_are_reproducible_and_manifested() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    let mut args = vec!["experiment", "2", "--no-cache"];
    args.extend(SMALL);
    for dir in [&a, &b] {
        fs::create_dir_all(dir).unwrap();
        ok(dir, &args);
    }
    let (a, b) = (a.join("experiment_2"), b.join("experiment_2"));
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(a.join("manifest.json")).unwrap()).unwrap();
    let listed = manifest["files"].as_array().unwrap();
    let csvs: Vec<String> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    assert!(!csvs.is_empty());
    assert_eq!(listed.len(), csvs.len());
    for f in listed {
        let name = f["name"].as_str().unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), sha256_hex(&a.join(name)), "{name}");
    }
    for entry in fs::read_dir(&a).unwrap() {
        let name = entry.unwrap().file_name();
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name:?}");
    }
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let bad = write(d.path(), "bad.txt", "kind potential\nbreakpoints 0 1\nvalues nope\n");
    assert_eq!(run(d.path(), &["dtn", "--profile", bad.to_str().unwrap(), "--no-cache"]).status.code(), Some(2));

    let p = Precision::new(512).unwrap();
    let pi = BigReal::pi(p);
    let minus_pi2 = -(pi.as_float().clone() * pi.as_float());
    let q = format!("kind potential\nradius 1\nbreakpoints 0 1\nvalues {}\n", BigReal::from_float(minus_pi2).to_decimal());
    let res = write(d.path(), "resonant.txt", &q);
    let o = run(d.path(), &["dtn", "--profile", res.to_str().unwrap(), "--terms", "0", "--precision", "512", "--no-cache"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));

    let g = write(d.path(), "g.txt", "kind conductivity\nradius 1\nbreakpoints 0 1\nvalues 1\n");
    let file = write(d.path(), "not_a_dir", "");
    let o = run(d.path(), &["dtn", "--profile", g.to_str().unwrap(), "--terms", "2", "--cache-dir", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));

    let o = run(d.path(), &["born", "--profile", bad.to_str().unwrap(), "--mode", "moment-form"]);
    assert_eq!(o.status.code(), Some(2));
}
