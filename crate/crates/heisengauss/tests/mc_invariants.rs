//! Distribution-level invariants of the simulators: discretization bias
//! structure, self-similarity, and direct agreement between the joint CF
//! closed form and sampled functionals.

use heisengauss::euclid::{joint_cf9, Cf9Point, XiUpper};
use heisengauss::mc::{empirical_cf, simulate_functionals, PathConfig, Sample9};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Left-point area sums at three resolutions from one common set of fine
/// increments: the bias of Var(W_{1,2}(1)) is exactly −1/(4·steps), so the
/// coupled estimates must increase with resolution and the consecutive
/// gaps must shrink fourfold.
#[test]
fn ito_scheme_bias_is_inverse_in_steps() {
    let paths = 60_000u64;
    let fine: usize = 8000;
    let seed = 60_904u64;
    let mut v = [0.0f64; 3]; // variances at 500, 2000, 8000 steps
    let h = 1.0 / fine as f64;
    let sqrt_h = h.sqrt();
    let mut areas = vec![[0.0f64; 3]; paths as usize];
    for (idx, area_row) in areas.iter_mut().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx as u64);
        // fine increments; coarse areas use left points held at the coarse
        // resolution while consuming the same fine path
        let mut w = [0.0f64; 2];
        let mut w_coarse_500 = [0.0f64; 2];
        let mut w_coarse_2000 = [0.0f64; 2];
        let mut a = [0.0f64; 3];
        for step in 0..fine {
            let dw = [
                sqrt_h * rng.sample::<f64, _>(StandardNormal),
                sqrt_h * rng.sample::<f64, _>(StandardNormal),
            ];
            if step % 16 == 0 {
                w_coarse_500 = w;
            }
            if step % 4 == 0 {
                w_coarse_2000 = w;
            }
            a[0] += 0.5 * (w_coarse_500[0] * dw[1] - w_coarse_500[1] * dw[0]);
            a[1] += 0.5 * (w_coarse_2000[0] * dw[1] - w_coarse_2000[1] * dw[0]);
            a[2] += 0.5 * (w[0] * dw[1] - w[1] * dw[0]);
            w[0] += dw[0];
            w[1] += dw[1];
        }
        *area_row = a;
    }
    let n = paths as f64;
    for k in 0..3 {
        let mean = areas.iter().map(|a| a[k]).sum::<f64>() / n;
        v[k] = areas.iter().map(|a| (a[k] - mean).powi(2)).sum::<f64>() / (n - 1.0);
    }
    println!("coupled variances: 500={} 2000={} 8000={}", v[0], v[1], v[2]);
    assert!(v[0] < v[1] && v[1] < v[2], "bias magnitude must shrink: {v:?}");
    assert!(v[2] < 0.25 + 0.005);
    // gap ratio (1/500 − 1/2000)/(1/2000 − 1/8000) = 4
    let ratio = (v[1] - v[0]) / (v[2] - v[1]);
    assert!(
        (2.0..8.0).contains(&ratio),
        "gap ratio {ratio} should be near 4"
    );
}

fn flat5(s: &Sample9) -> Vec<f64> {
    vec![s.w[0], s.w[1], s.wstar[0], s.wstar[1], s.area[0]]
}

/// `(c^{−1/2}W(ct), c^{−3/2}W*(ct), c^{−1}W_area(ct))` has the law of the
/// time-`t` vector: CF comparison at five points, c = 4, t = 0.5.
#[test]
fn self_similarity_in_distribution() {
    let c: f64 = 4.0;
    let t = 0.5;
    let mk = |seed: u64| PathConfig {
        steps: 2000,
        paths: 40_000,
        seed,
        d: 2,
        budget: u64::MAX,
    };
    let at_t = simulate_functionals(t, &mk(71)).unwrap();
    let at_ct = simulate_functionals(c * t, &mk(72)).unwrap();
    let scaled: Vec<Vec<f64>> = at_ct
        .iter()
        .map(|s| {
            vec![
                s.w[0] / c.sqrt(),
                s.w[1] / c.sqrt(),
                s.wstar[0] / c.powf(1.5),
                s.wstar[1] / c.powf(1.5),
                s.area[0] / c,
            ]
        })
        .collect();
    let plain: Vec<Vec<f64>> = at_t.iter().map(flat5).collect();
    let points: Vec<Vec<f64>> = vec![
        vec![1.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.5, 1.0, 0.0, 0.0],
        vec![0.3, 0.3, 0.5, 0.5, 1.0],
        vec![0.0, 0.0, 0.0, 2.0, 1.5],
        vec![0.8, -0.4, 1.0, -1.0, 0.7],
    ];
    let a = empirical_cf(&plain, &points).unwrap();
    let b = empirical_cf(&scaled, &points).unwrap();
    for (x, y) in a.iter().zip(b.iter()) {
        let joint = (x.se_complex().powi(2) + y.se_complex().powi(2)).sqrt();
        assert!(
            (x.value - y.value).norm() <= 3.0 * joint,
            "{} vs {} (joint se {joint})",
            x.value,
            y.value
        );
    }
}

/// The closed-form joint CF at a mixed frequency point against the sampled
/// functionals.
#[test]
fn joint_cf_matches_sampled_functionals() {
    let cfg = PathConfig {
        steps: 2000,
        paths: 200_000,
        seed: 424_242,
        d: 2,
        budget: u64::MAX,
    };
    let samples = simulate_functionals(1.0, &cfg).unwrap();
    let flat: Vec<Vec<f64>> = samples.iter().map(flat5).collect();
    // frequencies for (W1, W2, W*1, W*2, W12)
    let probes = [
        ([0.3, 0.0], [0.2, 0.0], 0.7),
        ([0.5, -0.4], [0.3, 0.6], -0.9),
        ([0.0, 1.0], [0.0, 0.0], 1.3),
        ([0.9, 0.2], [-0.5, 0.1], 0.2),
    ];
    for (eta2, zeta2, x12) in probes {
        let point = vec![eta2[0], eta2[1], zeta2[0], zeta2[1], x12];
        let est = &empirical_cf(&flat, &[point])
            .unwrap()[0];
        let q = Cf9Point::new(
            1.0,
            [eta2[0], eta2[1], 0.0],
            [zeta2[0], zeta2[1], 0.0],
            XiUpper {
                x12,
                ..Default::default()
            },
        )
        .unwrap();
        let exact = joint_cf9(&q);
        assert!(
            (est.value - exact).norm() <= 3.0 * est.se_complex(),
            "point {eta2:?},{zeta2:?},{x12}: {} vs {exact} (se {})",
            est.value,
            est.se_complex()
        );
    }
}
