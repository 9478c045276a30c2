//! Fuzz the convolution classifier on a pair of parameter documents
//! separated by a NUL byte:
//! 1. classification never panics;
//! 2. the parameter-level and support-level verdicts agree;
//! 3. the common-coset witness holds whenever it is produced;
//! 4. the would-be convolution parameters keep the additive block exact.
#![no_main]
use libfuzzer_sys::fuzz_target;

use heisengauss::conv::{
    classify_support_level, classify_tilde, conv_chi_ft, conv_operator, conv_params,
    witness_holds, SupportLevel,
};
use heisengauss::schrodinger::RepPoint;

fuzz_target!(|data: &[u8]| {
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
});
