//! Seeded random parameter generators for the verification suites and
//! property tests: well-conditioned PSD matrices, each structural rank
//! class, and pairs targeting every branch of the convolution classifier.

use crate::conv::TildeCase;
use crate::params::{validate_params, GaussianParams};
use rand::prelude::*;
use rand_distr::StandardNormal;

fn unit_interval(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn random_drift(rng: &mut impl Rng) -> [f64; 3] {
    std::array::from_fn(|_| unit_interval(rng, -1.0, 1.0))
}

fn outer(cols: &[[f64; 3]]) -> [[f64; 3]; 3] {
    let mut b = [[0.0; 3]; 3];
    for c in cols {
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] += c[i] * c[j];
            }
        }
    }
    // symmetrize exactly against rounding asymmetry in the accumulation
    for i in 0..3 {
        for j in (i + 1)..3 {
            let m = b[i][j];
            b[j][i] = m;
        }
    }
    b
}

fn random_orthogonal3(rng: &mut impl Rng) -> [[f64; 3]; 3] {
    // Gram-Schmidt on a Gaussian triple
    let mut v: [[f64; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| rng.sample(StandardNormal)));
    for i in 0..3 {
        for k in 0..i {
            let dot: f64 = (0..3).map(|r| v[i][r] * v[k][r]).sum();
            for r in 0..3 {
                v[i][r] -= dot * v[k][r];
            }
        }
        let n: f64 = (0..3).map(|r| v[i][r] * v[i][r]).sum::<f64>().sqrt();
        for r in 0..3 {
            v[i][r] /= n;
        }
    }
    v
}

/// Random full-rank PSD matrix with eigenvalues in `[0.3, 3]`.
pub fn random_spd3(rng: &mut impl Rng) -> [[f64; 3]; 3] {
    let q = random_orthogonal3(rng);
    let evals: [f64; 3] = std::array::from_fn(|_| unit_interval(rng, 0.3, 3.0));
    let mut b = [[0.0; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] += evals[k] * q[k][i] * q[k][j];
            }
        }
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            b[j][i] = b[i][j];
        }
    }
    b
}

/// Random parameters with a full-rank, well-conditioned diffusion.
pub fn random_rank3(rng: &mut impl Rng) -> GaussianParams {
    validate_params(random_drift(rng), random_spd3(rng)).expect("constructed PSD")
}

/// Random parameters of any rank (mixture over the five classes).
pub fn random_params(rng: &mut impl Rng) -> GaussianParams {
    match rng.random_range(0..6) {
        0 | 1 => random_rank3(rng),
        2 => random_rank2_hypoelliptic(rng),
        3 => random_rank2_abelian(rng),
        4 => random_rank1(rng),
        _ => random_rank0(rng),
    }
}

/// Rank 2 with δ > 0 (non-commuting directions, hypoelliptic).
pub fn random_rank2_hypoelliptic(rng: &mut impl Rng) -> GaussianParams {
    // two columns with an invertible top 2×2 block
    loop {
        let c1 = [
            unit_interval(rng, 0.6, 1.6),
            unit_interval(rng, -0.5, 0.5),
            unit_interval(rng, -1.0, 1.0),
        ];
        let c2 = [
            unit_interval(rng, -0.5, 0.5),
            unit_interval(rng, 0.6, 1.6),
            unit_interval(rng, -1.0, 1.0),
        ];
        let minor = c1[0] * c2[1] - c2[0] * c1[1];
        if minor.abs() < 0.4 {
            continue;
        }
        let p = validate_params(random_drift(rng), outer(&[c1, c2])).expect("constructed PSD");
        if crate::params::derived_scalars(&p).delta > 0.3 {
            return p;
        }
    }
}

/// Rank 2 with δ = 0 (commuting directions, singular plane).
pub fn random_rank2_abelian(rng: &mut impl Rng) -> GaussianParams {
    // both columns share one planar direction; independent third coordinates
    let v = planar_direction(rng);
    let alpha = unit_interval(rng, 0.6, 1.5);
    let beta = unit_interval(rng, 0.6, 1.5);
    let c1 = [alpha * v[0], alpha * v[1], unit_interval(rng, -1.0, 1.0)];
    let c2 = [beta * v[0], beta * v[1], unit_interval(rng, 1.0, 2.0)];
    validate_params(random_drift(rng), outer(&[c1, c2])).expect("constructed PSD")
}

fn planar_direction(rng: &mut impl Rng) -> [f64; 2] {
    let theta = unit_interval(rng, 0.0, std::f64::consts::TAU);
    [theta.cos(), theta.sin()]
}

/// Rank 1.
pub fn random_rank1(rng: &mut impl Rng) -> GaussianParams {
    let c: [f64; 3] = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal));
    let n: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = unit_interval(rng, 0.7, 1.5) / n.max(1e-9);
    let c = [c[0] * scale, c[1] * scale, c[2] * scale];
    validate_params(random_drift(rng), outer(&[c])).expect("constructed PSD")
}

/// Rank 0 (point masses).
pub fn random_rank0(rng: &mut impl Rng) -> GaussianParams {
    validate_params(random_drift(rng), [[0.0; 3]; 3]).expect("zero matrix")
}

/// Random absolutely continuous parameters (δ bounded away from zero).
pub fn random_abs_continuous(rng: &mut impl Rng) -> GaussianParams {
    if rng.random::<bool>() {
        random_rank3(rng)
    } else {
        random_rank2_hypoelliptic(rng)
    }
}

/// Parameters with `b11 = 0` (flat first coordinate, shift-type transform).
pub fn random_flat(rng: &mut impl Rng) -> GaussianParams {
    let b22 = unit_interval(rng, 0.0, 2.0);
    let b33 = unit_interval(rng, 0.2, 2.0);
    // keep the 2×2 lower block PSD
    let b23 = unit_interval(rng, -1.0, 1.0) * (b22 * b33).sqrt() * 0.9;
    validate_params(
        random_drift(rng),
        [[0.0; 3], [0.0, b22, b23], [0.0, b23, b33]],
    )
    .expect("constructed PSD")
}

/// Central parameters (supported on the center).
pub fn random_central(rng: &mut impl Rng) -> GaussianParams {
    validate_params(
        [0.0, 0.0, unit_interval(rng, -1.5, 1.5)],
        [[0.0; 3], [0.0; 3], [0.0, 0.0, unit_interval(rng, 0.0, 2.0)]],
    )
    .expect("central PSD")
}

/// A pair drawn from one of the seven Gaussian-convolution families.
pub fn random_tilde_pair(rng: &mut impl Rng, case: TildeCase) -> (GaussianParams, GaussianParams) {
    match case {
        TildeCase::C1 => {
            let p1 = random_abs_continuous(rng);
            let rho = unit_interval(rng, 0.3, 3.0);
            let b1 = p1.b();
            let mut b2 = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    b2[i][j] = rho * b1[i][j];
                }
            }
            b2[2][2] += unit_interval(rng, 0.0, 1.0); // free central diffusion
            let a1 = p1.a();
            let a2 = [
                rho * a1[0],
                rho * a1[1],
                unit_interval(rng, -1.0, 1.0), // free central drift
            ];
            let p2 = validate_params(a2, b2).expect("scaled PSD");
            (p1, p2)
        }
        TildeCase::C2 => {
            let v = planar_direction(rng);
            // avoid a vanishing first coordinate: C~2 needs b11 > 0
            let v = if v[0].abs() < 0.3 { [1.0, v[1]] } else { v };
            let rho = unit_interval(rng, 0.3, 3.0);
            let tau = unit_interval(rng, 0.5, 2.0);
            let c1 = [tau.sqrt() * v[0], tau.sqrt() * v[1], unit_interval(rng, -1.0, 1.0)];
            let c2 = [
                (rho * tau).sqrt() * v[0],
                (rho * tau).sqrt() * v[1],
                unit_interval(rng, -1.0, 1.0),
            ];
            let mut b1 = outer(&[c1]);
            let mut b2 = outer(&[c2]);
            b1[2][2] += unit_interval(rng, 0.0, 1.0);
            b2[2][2] += unit_interval(rng, 0.0, 1.0);
            (
                validate_params(random_drift(rng), b1).expect("PSD"),
                validate_params(random_drift(rng), b2).expect("PSD"),
            )
        }
        TildeCase::C3 => (random_abs_continuous(rng), random_central(rng)),
        TildeCase::C4 => {
            let p1 = if rng.random::<bool>() {
                random_rank2_abelian_with_b11(rng)
            } else {
                random_rank1_with_b11(rng)
            };
            // central-shaped diffusion, unrestricted drift
            let p2 = validate_params(
                random_drift(rng),
                [[0.0; 3], [0.0; 3], [0.0, 0.0, unit_interval(rng, 0.0, 2.0)]],
            )
            .expect("PSD");
            (p1, p2)
        }
        TildeCase::C5 => {
            let (a, b) = random_tilde_pair(rng, TildeCase::C3);
            (b, a)
        }
        TildeCase::C6 => {
            let (a, b) = random_tilde_pair(rng, TildeCase::C4);
            (b, a)
        }
        TildeCase::C7 => (random_flat(rng), random_flat(rng)),
    }
}

fn random_rank2_abelian_with_b11(rng: &mut impl Rng) -> GaussianParams {
    loop {
        let p = random_rank2_abelian(rng);
        if p.bij(1, 1) > 0.1 {
            return p;
        }
    }
}

fn random_rank1_with_b11(rng: &mut impl Rng) -> GaussianParams {
    loop {
        let p = random_rank1(rng);
        if p.bij(1, 1) > 0.1 {
            return p;
        }
    }
}

/// A pair that falls in none of the seven families.
pub fn random_non_gaussian_pair(rng: &mut impl Rng) -> (GaussianParams, GaussianParams) {
    match rng.random_range(0..4) {
        0 => {
            // mixed degeneracy: δ' > 0, δ'' = 0, both kernels
            (random_abs_continuous(rng), random_rank2_abelian_with_b11(rng))
        }
        1 => {
            // absolutely continuous against a non-central point mass
            let mut a = random_drift(rng);
            if a[0].abs() < 0.2 {
                a[0] = 1.0;
            }
            (
                random_abs_continuous(rng),
                validate_params(a, [[0.0; 3]; 3]).expect("PSD"),
            )
        }
        2 => {
            // break the proportionality of a C~1 pair with a PSD-safe bump
            // on b11 alone (b22'' / b11'' then disagrees with the ratio of
            // the first factor, since δ' > 0 forces b22' > 0)
            let (p1, p2) = random_tilde_pair(rng, TildeCase::C1);
            let mut b = p2.b();
            b[0][0] += 1e-3 * (1.0 + b[0][0]);
            (p1, validate_params(p2.a(), b).expect("still PSD"))
        }
        _ => {
            // break the centrality of a C~3 pair through the drift
            let (p1, p2) = random_tilde_pair(rng, TildeCase::C3);
            let mut a = p2.a();
            a[0] += 0.3;
            (p1, validate_params(a, p2.b()).expect("PSD"))
        }
    }
}

/// One representative of each of the five structural classes.
pub fn class_representatives(rng: &mut impl Rng) -> Vec<(&'static str, GaussianParams)> {
    vec![
        ("rank3", random_rank3(rng)),
        ("rank2-hypoelliptic", random_rank2_hypoelliptic(rng)),
        ("rank2-abelian", random_rank2_abelian(rng)),
        ("rank1", random_rank1(rng)),
        ("rank0", random_rank0(rng)),
    ]
}
