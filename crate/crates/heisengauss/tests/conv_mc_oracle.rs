//! Monte Carlo oracle for the convolution parameter arithmetic: the group
//! product of independent samples of the two factors must reproduce
//! `conv_params` through the moment map
//! `a_i = E Z_i`, `b_ij = Cov(Z_i, Z_j)` for `(i,j) ≠ (3,3)`,
//! `b33 = Var Z3 − ¼(V1·V2 − C12²) − (V2·m1² − 2C12·m1·m2 + V1·m2²)/12`.
//!
//! Standard errors come from batch means (20 batches), so the composite
//! `b33` statistic gets an honest error bar without delta-method algebra.

use heisengauss::conv::conv_params;
use heisengauss::corpus;
use heisengauss::mc::{simulate_z, PathConfig};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Moment-map parameters from a batch of product samples.
fn moment_map(z: &[[f64; 3]]) -> [f64; 9] {
    let n = z.len() as f64;
    let mean: [f64; 3] = std::array::from_fn(|i| z.iter().map(|v| v[i]).sum::<f64>() / n);
    let cov = |i: usize, j: usize| {
        z.iter()
            .map(|v| (v[i] - mean[i]) * (v[j] - mean[j]))
            .sum::<f64>()
            / (n - 1.0)
    };
    let (v1, v2, v3) = (cov(0, 0), cov(1, 1), cov(2, 2));
    let c12 = cov(0, 1);
    let b33 = v3 - 0.25 * (v1 * v2 - c12 * c12)
        - (v2 * mean[0] * mean[0] - 2.0 * c12 * mean[0] * mean[1] + v1 * mean[1] * mean[1])
            / 12.0;
    [
        mean[0],
        mean[1],
        mean[2],
        v1,
        c12,
        v2,
        cov(0, 2),
        cov(1, 2),
        b33,
    ]
}

#[test]
fn group_product_moments_match_conv_params() {
    let mut rng = ChaCha8Rng::seed_from_u64(31_337);
    for pair in 0..4 {
        let (p1, p2) = match pair {
            0 => (corpus::random_rank3(&mut rng), corpus::random_rank3(&mut rng)),
            1 => (
                corpus::random_abs_continuous(&mut rng),
                corpus::random_flat(&mut rng),
            ),
            2 => (
                corpus::random_rank2_abelian(&mut rng),
                corpus::random_rank1(&mut rng),
            ),
            _ => (corpus::random_rank3(&mut rng), corpus::random_central(&mut rng)),
        };
        let want = conv_params(&p1, &p2);
        let want9 = [
            want.ai(1),
            want.ai(2),
            want.ai(3),
            want.bij(1, 1),
            want.bij(1, 2),
            want.bij(2, 2),
            want.bij(1, 3),
            want.bij(2, 3),
            want.bij(3, 3),
        ];

        let paths = 100_000u32;
        let mk = |seed| PathConfig {
            steps: 500,
            paths,
            seed,
            d: 3,
            budget: u64::MAX,
        };
        let z1 = simulate_z(&p1, 1.0, &mk(1000 + pair)).unwrap();
        let z2 = simulate_z(&p2, 1.0, &mk(2000 + pair)).unwrap();
        let product: Vec<[f64; 3]> = z1
            .iter()
            .zip(z2.iter())
            .map(|(u, v)| {
                [
                    u[0] + v[0],
                    u[1] + v[1],
                    u[2] + v[2] + 0.5 * (u[0] * v[1] - u[1] * v[0]),
                ]
            })
            .collect();

        // batch means -> standard errors of each moment-map coordinate
        let k = 20;
        let bs = product.len() / k;
        let mut batches = Vec::with_capacity(k);
        for b in 0..k {
            batches.push(moment_map(&product[b * bs..(b + 1) * bs]));
        }
        let names = ["a1", "a2", "a3", "b11", "b12", "b22", "b13", "b23", "b33"];
        let overall = moment_map(&product);
        for (c, name) in names.iter().enumerate() {
            let bmean = batches.iter().map(|m| m[c]).sum::<f64>() / k as f64;
            let bvar = batches.iter().map(|m| (m[c] - bmean).powi(2)).sum::<f64>()
                / (k as f64 - 1.0);
            let se = (bvar / k as f64).sqrt();
            let diff = (overall[c] - want9[c]).abs();
            assert!(
                diff <= 3.5 * se.max(1e-6),
                "pair {pair} {name}: estimate {} vs {} (se {se})",
                overall[c],
                want9[c]
            );
        }
    }
}
