//! Fuzz the evaluation-points CSV parser: never panics, and accepted rows
//! are finite triples.
#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = match std::str::from_utf8(data) {
        Ok(t) => t,
        Err(_) => return,
    };
    if let Ok(points) = heisengauss::io::parse_points_csv(text) {
        for p in points {
            assert!(p.iter().all(|v| v.is_finite()));
        }
    }
});
