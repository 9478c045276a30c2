//! Fuzz the strict parameter-document parser and everything a validated
//! parameter set feeds into:
//! 1. `parse_params` never panics on arbitrary bytes;
//! 2. accepted parameters survive the derived computations, the
//!    classification, the transform construction and a kernel evaluation
//!    without panics or non-finite prefactors.
#![no_main]
use libfuzzer_sys::fuzz_target;

use heisengauss::euclid::full_euclid_ft;
use heisengauss::params::{classify_semigroup, derived_scalars, sigma_factor, support_descriptor};
use heisengauss::schrodinger::{chi_ft, schrodinger_operator, RepPoint};

fuzz_target!(|data: &[u8]| {
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
    let sf = sigma_factor(&p);
    assert!(sf.d <= 3);
    let _ = classify_semigroup(&p);
    let _ = support_descriptor(&p);
    let _ = chi_ft(&p, 0.7, -0.3);
    let v = full_euclid_ft(&p, [0.4, -0.2, 0.9]);
    assert!(v.norm() <= 1.0 + 1e-9);
    let rep = RepPoint::plus(1.0).unwrap();
    let op = schrodinger_operator(&p, &rep);
    if let Some(k) = op.kernel() {
        let _ = k.eval(0.3, -0.8);
    }
    if let Some(sm) = op.shift_mult() {
        let _ = sm.factor(0.3);
    }
});
