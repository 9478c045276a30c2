//! Monte Carlo oracle: Brownian paths, Lévy areas, time functionals, the
//! group-valued process `Z(t)`, and empirical characteristic functions.
//!
//! Determinism contract: every path owns an independent ChaCha8 stream
//! derived from `(seed, path index)`, so results are bit-identical for a
//! fixed configuration regardless of how paths are partitioned across
//! workers.

use crate::error::{Error, Result};
use crate::params::{sigma_factor, GaussianParams};
use crate::schrodinger::C64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Default path-step budget (desk scale: 1e5 paths × 2000 steps with room).
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Configuration of the Itô-scheme path simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConfig {
    pub steps: u32,
    pub paths: u32,
    pub seed: u64,
    /// Driving Wiener dimension, `1..=3`.
    pub d: usize,
    pub budget: u64,
}

impl PathConfig {
    pub fn new(steps: u32, paths: u32, seed: u64, d: usize) -> Result<Self> {
        let cfg = PathConfig {
            steps,
            paths,
            seed,
            d,
            budget: DEFAULT_BUDGET,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Small configuration for CI-scale runs.
    pub fn ci(seed: u64, d: usize) -> Self {
        PathConfig {
            steps: 500,
            paths: 10_000,
            seed,
            d,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 100 {
            return Err(Error::InvalidConfig(format!(
                "steps must be >= 100, got {}",
                self.steps
            )));
        }
        if self.paths < 1 {
            return Err(Error::InvalidConfig("paths must be >= 1".into()));
        }
        if !(1..=3).contains(&self.d) {
            return Err(Error::InvalidConfig(format!(
                "d must be in 1..=3, got {}",
                self.d
            )));
        }
        let requested = self.steps as u64 * self.paths as u64;
        if requested > self.budget {
            return Err(Error::BudgetExceeded {
                requested,
                budget: self.budget,
            });
        }
        Ok(())
    }
}

/// One realization of `(W(t), W*(t), (W_{k,ℓ}(t))_{k<ℓ})`.
///
/// Components beyond the driving dimension `d` are zero. Areas are indexed
/// by the pairs (1,2), (1,3), (2,3).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sample9 {
    pub d: usize,
    pub w: [f64; 3],
    pub wstar: [f64; 3],
    pub area: [f64; 3],
}

impl Sample9 {
    /// Flatten into the fixed 9-coordinate order
    /// `(W1,W2,W3,W*1,W*2,W*3,W12,W13,W23)`.
    pub fn to_vec9(&self) -> [f64; 9] {
        [
            self.w[0], self.w[1], self.w[2], self.wstar[0], self.wstar[1], self.wstar[2],
            self.area[0], self.area[1], self.area[2],
        ]
    }
}

fn path_rng(seed: u64, idx: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(idx);
    rng
}

/// Simulate `(W, W*, W_area)` at time `t` by left-point Itô sums on a
/// uniform grid. All stochastic integrals are Itô integrals; no
/// Stratonovich correction appears anywhere.
pub fn simulate_functionals(t: f64, cfg: &PathConfig) -> Result<Vec<Sample9>> {
    if !(t > 0.0) {
        return Err(Error::InvalidConfig(format!("t must be > 0, got {t}")));
    }
    cfg.validate()?;
    let d = cfg.d;
    let steps = cfg.steps as usize;
    let h = t / steps as f64;
    let sqrt_h = h.sqrt();
    let out: Vec<Sample9> = (0..cfg.paths as u64)
        .into_par_iter()
        .map(|idx| {
            let mut rng = path_rng(cfg.seed, idx);
            let mut w = [0.0f64; 3];
            let mut int_w_ds = [0.0f64; 3]; // ∫ W ds (left point)
            let mut int_s_dw = [0.0f64; 3]; // ∫ s dW (left point)
            let mut area = [0.0f64; 3];
            for step in 0..steps {
                let s_left = step as f64 * h;
                let mut dw = [0.0f64; 3];
                for k in 0..d {
                    let z: f64 = rng.sample(StandardNormal);
                    dw[k] = sqrt_h * z;
                }
                for k in 0..d {
                    int_w_ds[k] += w[k] * h;
                    int_s_dw[k] += s_left * dw[k];
                }
                // ½(W_k dW_ℓ − W_ℓ dW_k) over pairs (1,2), (1,3), (2,3)
                if d >= 2 {
                    area[0] += 0.5 * (w[0] * dw[1] - w[1] * dw[0]);
                }
                if d >= 3 {
                    area[1] += 0.5 * (w[0] * dw[2] - w[2] * dw[0]);
                    area[2] += 0.5 * (w[1] * dw[2] - w[2] * dw[1]);
                }
                for k in 0..d {
                    w[k] += dw[k];
                }
            }
            let mut wstar = [0.0f64; 3];
            for k in 0..d {
                wstar[k] = 0.5 * (int_w_ds[k] - int_s_dw[k]);
            }
            Sample9 {
                d,
                w,
                wstar,
                area,
            }
        })
        .collect();
    Ok(out)
}

/// Configuration of the Fourier-series construction at `t = 2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Series truncation `N ≥ 10`. The truncated tail of the `W*` series
    /// carries variance `4π·Σ_{n>N} n⁻² < 4π/N`.
    pub n_terms: u32,
    pub paths: u32,
    pub seed: u64,
    pub budget: u64,
}

impl SeriesConfig {
    pub fn new(n_terms: u32, paths: u32, seed: u64) -> Result<Self> {
        let cfg = SeriesConfig {
            n_terms,
            paths,
            seed,
            budget: DEFAULT_BUDGET,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_terms < 10 {
            return Err(Error::InvalidConfig(format!(
                "n_terms must be >= 10, got {}",
                self.n_terms
            )));
        }
        if self.paths < 1 {
            return Err(Error::InvalidConfig("paths must be >= 1".into()));
        }
        let requested = self.n_terms as u64 * self.paths as u64;
        if requested > self.budget {
            return Err(Error::BudgetExceeded {
                requested,
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Residual variance of the truncated `W*` series.
    pub fn tail_variance(&self) -> f64 {
        4.0 * std::f64::consts::PI / self.n_terms as f64
    }
}

/// Independent-draw construction of the functionals at `t = 2π`:
/// draw `W(2π)` and iid standard normals `a_n, b_n`, then
/// `W_{j,k}(2π) = Σ_n n⁻¹ [b_n⁽ʲ⁾(a_n⁽ᵏ⁾ − W_k(2π)/√π) − b_n⁽ᵏ⁾(a_n⁽ʲ⁾ − W_j(2π)/√π)]`
/// and `W*_ℓ(2π) = −2√π Σ_n b_n⁽ˡ⁾/n`.
pub fn series_functionals(cfg: &SeriesConfig, d: usize) -> Result<Vec<Sample9>> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidConfig(format!("d must be in 1..=3, got {d}")));
    }
    cfg.validate()?;
    let n_terms = cfg.n_terms;
    let sqrt_2pi = std::f64::consts::TAU.sqrt();
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
    let out: Vec<Sample9> = (0..cfg.paths as u64)
        .into_par_iter()
        .map(|idx| {
            let mut rng = path_rng(cfg.seed, idx);
            let mut w = [0.0f64; 3];
            for wk in w.iter_mut().take(d) {
                let z: f64 = rng.sample(StandardNormal);
                *wk = sqrt_2pi * z;
            }
            let mut area = [0.0f64; 3];
            let mut bsum = [0.0f64; 3]; // Σ b_n/n
            for n in 1..=n_terms {
                let inv_n = 1.0 / n as f64;
                let mut a = [0.0f64; 3];
                let mut b = [0.0f64; 3];
                for k in 0..d {
                    a[k] = rng.sample(StandardNormal);
                    b[k] = rng.sample(StandardNormal);
                }
                let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
                for (slot, &(j, k)) in pairs.iter().enumerate() {
                    if k < d {
                        area[slot] += inv_n
                            * (b[j] * (a[k] - inv_sqrt_pi * w[k])
                                - b[k] * (a[j] - inv_sqrt_pi * w[j]));
                    }
                }
                for k in 0..d {
                    bsum[k] += b[k] * inv_n;
                }
            }
            let mut wstar = [0.0f64; 3];
            for k in 0..d {
                wstar[k] = -2.0 * std::f64::consts::PI.sqrt() * bsum[k];
            }
            Sample9 {
                d,
                w,
                wstar,
                area,
            }
        })
        .collect();
    Ok(out)
}

/// Simulate the group-valued vector `Z(t)` whose law is the Gaussian
/// measure at time `t`:
/// `Z1 = a1·t + Σ σ1k·W_k`, `Z2 = a2·t + Σ σ2k·W_k`,
/// `Z3 = a3·t + Σ σ3k·W_k + Σ (a2σ1k − a1σ2k)·W*_k + Σ_{k<ℓ} (σ1kσ2ℓ − σ1ℓσ2k)·W_{k,ℓ}`.
pub fn simulate_z(p: &GaussianParams, t: f64, cfg: &PathConfig) -> Result<Vec<[f64; 3]>> {
    if !(t > 0.0) {
        return Err(Error::InvalidConfig(format!("t must be > 0, got {t}")));
    }
    let sf = sigma_factor(p);
    let a = p.a();
    if sf.d == 0 {
        cfg.validate()?;
        return Ok(vec![[a[0] * t, a[1] * t, a[2] * t]; cfg.paths as usize]);
    }
    let mut cfg_d = *cfg;
    cfg_d.d = sf.d;
    let samples = simulate_functionals(t, &cfg_d)?;
    let drift_w: Vec<f64> = (1..=sf.d)
        .map(|k| a[1] * sf.sigma(1, k) - a[0] * sf.sigma(2, k))
        .collect();
    Ok(samples
        .iter()
        .map(|s| {
            let mut z = [a[0] * t, a[1] * t, a[2] * t];
            for k in 0..sf.d {
                z[0] += sf.columns[k][0] * s.w[k];
                z[1] += sf.columns[k][1] * s.w[k];
                z[2] += sf.columns[k][2] * s.w[k] + drift_w[k] * s.wstar[k];
            }
            // ρ components match the area pair order (1,2), (1,3), (2,3)
            for slot in 0..3 {
                z[2] += sf.rho[slot] * s.area[slot];
            }
            z
        })
        .collect())
}

/// Empirical characteristic function value with a conservative standard
/// error (max of the componentwise standard errors of the complex mean).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfEstimate {
    pub value: C64,
    /// Conservative scalar: max of the componentwise standard errors.
    pub stderr: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
}

impl CfEstimate {
    /// Standard error of the complex mean as a 2-vector:
    /// `√(se_re² + se_im²)`. The right scale for a modulus comparison.
    pub fn se_complex(&self) -> f64 {
        (self.stderr_re * self.stderr_re + self.stderr_im * self.stderr_im).sqrt()
    }
}

/// Empirical characteristic function of `samples` (each a k-vector) at the
/// given frequency points.
pub fn empirical_cf(samples: &[Vec<f64>], points: &[Vec<f64>]) -> Result<Vec<CfEstimate>> {
    if samples.len() < 100 {
        return Err(Error::TooFewSamples {
            got: samples.len(),
            min: 100,
        });
    }
    let n = samples.len() as f64;
    points
        .iter()
        .map(|u| {
            let mut sum_re = 0.0;
            let mut sum_im = 0.0;
            let mut sq_re = 0.0;
            let mut sq_im = 0.0;
            for x in samples {
                debug_assert_eq!(x.len(), u.len());
                let phase: f64 = u.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
                let (s, c) = phase.sin_cos();
                sum_re += c;
                sum_im += s;
                sq_re += c * c;
                sq_im += s * s;
            }
            let mean = C64::new(sum_re / n, sum_im / n);
            let var_re = ((sq_re - sum_re * sum_re / n) / (n - 1.0)).max(0.0);
            let var_im = ((sq_im - sum_im * sum_im / n) / (n - 1.0)).max(0.0);
            let stderr_re = (var_re / n).sqrt();
            let stderr_im = (var_im / n).sqrt();
            Ok(CfEstimate {
                value: mean,
                stderr: stderr_re.max(stderr_im),
                stderr_re,
                stderr_im,
            })
        })
        .collect()
}

/// Empirical CF over `Sample9` rows restricted to the live coordinates of
/// dimension `d` in the order `(W_1..d, W*_1..d, areas)`.
pub fn empirical_cf_samples9(
    samples: &[Sample9],
    points: &[Vec<f64>],
    d: usize,
) -> Result<Vec<CfEstimate>> {
    let flat: Vec<Vec<f64>> = samples.iter().map(|s| flatten_sample(s, d)).collect();
    empirical_cf(&flat, points)
}

/// Live coordinates of a `Sample9` for driving dimension `d`:
/// `d` Wiener coordinates, `d` time functionals, and the areas over pairs
/// within `1..=d`.
pub fn flatten_sample(s: &Sample9, d: usize) -> Vec<f64> {
    let n_area = match d {
        3 => 3,
        2 => 1,
        _ => 0,
    };
    let mut v = Vec::with_capacity(2 * d + n_area);
    v.extend_from_slice(&s.w[..d]);
    v.extend_from_slice(&s.wstar[..d]);
    v.extend_from_slice(&s.area[..n_area]);
    v
}

/// Sample mean and unbiased variance.
pub fn mean_var(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Standard error of a sample-variance estimate (via the fourth moment).
pub fn variance_stderr(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let m2 = xs.clone().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = xs.map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    ((m4 - m2 * m2) / n).sqrt()
}
