//! Replay of the checked-in fuzz corpus seeds through the same properties
//! the fuzz targets assert, so `cargo test` keeps them honest without the
//! fuzzing toolchain.

use heisengauss::conv::{
    classify_support_level, classify_tilde, conv_chi_ft, conv_operator, conv_params,
    witness_holds, SupportLevel,
};
use heisengauss::euclid::full_euclid_ft;
use heisengauss::params::{classify_semigroup, derived_scalars, sigma_factor, support_descriptor};
use heisengauss::schrodinger::{chi_ft, schrodinger_operator, RepPoint};
use std::fs;
use std::path::PathBuf;

fn corpus_dir(target: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target)
}

fn replay_params(data: &[u8]) {
    let text = match std::str::from_utf8(data) {
        Ok(t) => t,
        Err(_) => return,
    };
    let p = match heisengauss::io::parse_params(text) {
        Ok(p) => p,
        Err(_) => return,
    };
    let ds = derived_scalars(&p);
    assert!(ds.delta >= 0.0);
    assert!(sigma_factor(&p).d <= 3);
    let _ = classify_semigroup(&p);
    let _ = support_descriptor(&p);
    let _ = chi_ft(&p, 0.7, -0.3);
    assert!(full_euclid_ft(&p, [0.4, -0.2, 0.9]).norm() <= 1.0 + 1e-9);
    let op = schrodinger_operator(&p, &RepPoint::plus(1.0).unwrap());
    if let Some(k) = op.kernel() {
        let _ = k.eval(0.3, -0.8);
    }
}

fn replay_classify(data: &[u8]) {
    let mut parts = data.splitn(2, |&b| b == 0);
    let first = parts.next().unwrap_or(&[]);
    let second = match parts.next() {
        Some(s) => s,
        None => return,
    };
    let parse = |bytes: &[u8]| {
        std::str::from_utf8(bytes)
            .ok()
            .and_then(|t| heisengauss::io::parse_params(t).ok())
    };
    let (p1, p2) = match (parse(first), parse(second)) {
        (Some(a), Some(b)) => (a, b),
        _ => return,
    };
    let tilde = classify_tilde(&p1, &p2);
    let high = classify_support_level(&p1, &p2);
    assert_eq!(tilde.gaussian, high.variant != SupportLevel::No);
    if let Some(w) = &high.witness {
        assert!(witness_holds(&p1, &p2, w));
    }
    let c = conv_params(&p1, &p2);
    for &(i, j) in &[(1usize, 1usize), (1, 2), (2, 2)] {
        let want = p1.bij(i, j) + p2.bij(i, j);
        assert!((c.bij(i, j) - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }
    let _ = conv_chi_ft(&p1, &p2, 0.5, -0.5);
    let _ = conv_operator(&p1, &p2, &RepPoint::plus(1.0).unwrap());
}

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = corpus_dir(target);
    let mut out = Vec::new();
    for entry in fs::read_dir(&dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())) {
        let path = entry.unwrap().path();
        let bytes = fs::read(&path).unwrap();
        out.push((path, bytes));
    }
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn params_json_seeds() {
    for (path, bytes) in seeds("params_json") {
        eprintln!("replay {}", path.display());
        replay_params(&bytes);
    }
}

#[test]
fn points_csv_seeds() {
    for (path, bytes) in seeds("points_csv") {
        eprintln!("replay {}", path.display());
        if let Ok(text) = std::str::from_utf8(&bytes) {
            if let Ok(points) = heisengauss::io::parse_points_csv(text) {
                assert!(points.iter().all(|p| p.iter().all(|v| v.is_finite())));
            }
        }
    }
}

#[test]
fn classify_pair_seeds() {
    for (path, bytes) in seeds("classify_pair") {
        eprintln!("replay {}", path.display());
        replay_classify(&bytes);
    }
}

#[test]
fn random_byte_storm_never_panics() {
    // a light in-tree fuzz pass over mutated seeds
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let mut pool: Vec<Vec<u8>> = Vec::new();
    for target in ["params_json", "points_csv", "classify_pair"] {
        for (_, bytes) in seeds(target) {
            pool.push(bytes);
        }
    }
    for _ in 0..2000 {
        let mut bytes = pool[rng.random_range(0..pool.len())].clone();
        let flips = rng.random_range(1..8);
        for _ in 0..flips {
            if bytes.is_empty() {
                break;
            }
            let i = rng.random_range(0..bytes.len());
            match rng.random_range(0..3) {
                0 => bytes[i] = rng.random(),
                1 => {
                    bytes.truncate(i);
                }
                _ => bytes.insert(i, rng.random()),
            }
        }
        replay_params(&bytes);
        replay_classify(&bytes);
        if let Ok(text) = std::str::from_utf8(&bytes) {
            let _ = heisengauss::io::parse_points_csv(text);
        }
    }
}
