//! Uniform-grid trapezoid quadrature: applying transform operators to
//! sampled functions and composing integral kernels.
//!
//! The kernels are complex Gaussians, so the trapezoid rule on a window that
//! covers the Gaussian mass is spectrally accurate; the only failure mode is
//! an under-resolved kernel width, which is rejected up front.

use crate::error::{Error, Result};
use crate::schrodinger::{FtOperator, KernelForm, OperatorForm, ShiftMultForm, C64};

/// Number of grid points per kernel standard deviation required by every
/// quadrature entry point.
pub const MIN_POINTS_PER_SIGMA: f64 = 8.0;

/// A uniform 1-D grid with `n` intervals (`n + 1` nodes) on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "grid bounds must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        if n < 16 {
            return Err(Error::InvalidConfig(format!("grid needs n >= 16, got {n}")));
        }
        Ok(Grid1D { lo, hi, n })
    }

    /// Default window used by the CLI and the verification suites.
    pub fn default_window() -> Self {
        Grid1D {
            lo: -10.0,
            hi: 10.0,
            n: 2048,
        }
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.point(i)).collect()
    }

    /// Trapezoid weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.n {
            0.5 * self.step()
        } else {
            self.step()
        }
    }
}

/// Gaussian y-width of a kernel: `1/√(Re d22)`.
fn kernel_sigma_y(k: &KernelForm) -> f64 {
    let r = k.d.at(2, 2).re;
    if r > 0.0 {
        1.0 / r.sqrt()
    } else {
        f64::INFINITY
    }
}

fn kernel_sigma_x(k: &KernelForm) -> f64 {
    let r = k.d.at(1, 1).re;
    if r > 0.0 {
        1.0 / r.sqrt()
    } else {
        f64::INFINITY
    }
}

fn check_resolution(sigma: f64, grid: &Grid1D) -> Result<()> {
    if grid.step() * MIN_POINTS_PER_SIGMA > sigma {
        return Err(Error::GridTooCoarse {
            sigma,
            step: grid.step(),
        });
    }
    Ok(())
}

/// Apply a transform operator to a function sampled on `grid`.
///
/// Kernel form: trapezoid quadrature of `∫K(x,y)u(y)dy` at every node.
/// Shift-multiply form: pointwise multiplication by the factor followed by
/// an argument shift realized with linear interpolation (zero outside the
/// grid; the caller asserts boundary decay).
pub fn apply_operator(op: &FtOperator, u: &[C64], grid: &Grid1D) -> Result<Vec<C64>> {
    if u.len() != grid.n + 1 {
        return Err(Error::InvalidConfig(format!(
            "sample count {} does not match grid nodes {}",
            u.len(),
            grid.n + 1
        )));
    }
    match &op.form {
        OperatorForm::Kernel(k) => {
            check_resolution(kernel_sigma_y(k), grid)?;
            let pts = grid.points();
            let out = pts
                .iter()
                .map(|&x| {
                    let mut acc = C64::new(0.0, 0.0);
                    for (j, &y) in pts.iter().enumerate() {
                        acc += grid.weight(j) * k.eval(x, y) * u[j];
                    }
                    acc
                })
                .collect();
            Ok(out)
        }
        OperatorForm::ShiftMult(sm) => {
            if sm.quad.re < 0.0 {
                let sigma = 1.0 / (2.0 * (-sm.quad.re)).sqrt();
                check_resolution(sigma, grid)?;
            }
            let pts = grid.points();
            let out = pts
                .iter()
                .map(|&x| sm.factor(x) * interp(u, grid, x + sm.shift))
                .collect();
            Ok(out)
        }
    }
}

fn interp(u: &[C64], grid: &Grid1D, x: f64) -> C64 {
    if x < grid.lo || x > grid.hi {
        return C64::new(0.0, 0.0);
    }
    let pos = (x - grid.lo) / grid.step();
    let i = (pos.floor() as usize).min(grid.n - 1);
    let frac = pos - i as f64;
    u[i] * (1.0 - frac) + u[i + 1] * frac
}

/// Discrete L² norm with trapezoid weights.
pub fn l2_norm(u: &[C64], grid: &Grid1D) -> f64 {
    u.iter()
        .enumerate()
        .map(|(i, v)| grid.weight(i) * v.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Composition `(x, y) ↦ ∫ k1(x,z)·k2(z,y) dz` of two integral kernels,
/// with the z-integral on `grid`.
pub struct ComposedKernel<'a> {
    k1: &'a KernelForm,
    k2: &'a KernelForm,
    grid: Grid1D,
}

pub fn compose_kernels<'a>(
    k1: &'a KernelForm,
    k2: &'a KernelForm,
    grid: &Grid1D,
) -> Result<ComposedKernel<'a>> {
    // z sees the y-Gaussian of k1 and the x-Gaussian of k2 combined
    let r = k1.d.at(2, 2).re + k2.d.at(1, 1).re;
    let sigma = if r > 0.0 { 1.0 / r.sqrt() } else { f64::INFINITY };
    check_resolution(sigma.min(kernel_sigma_y(k1)).min(kernel_sigma_x(k2)), grid)?;
    Ok(ComposedKernel {
        k1,
        k2,
        grid: *grid,
    })
}

impl ComposedKernel<'_> {
    pub fn eval(&self, x: f64, y: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..=self.grid.n {
            let z = self.grid.point(j);
            acc += self.grid.weight(j) * self.k1.eval(x, z) * self.k2.eval(z, y);
        }
        acc
    }

    /// Sampled composition on `out × out` (meant for modest probe grids; the
    /// cost is `out² · grid`).
    pub fn eval_grid(&self, out: &Grid1D) -> Vec<Vec<C64>> {
        let pts = out.points();
        pts.iter()
            .map(|&x| pts.iter().map(|&y| self.eval(x, y)).collect())
            .collect()
    }
}

/// Exact composition of a kernel factor followed by a shift-multiply factor:
/// `∫K(x,z)·[L·u(·+s)](z)dz = ∫ K(x, y−s)·L(y−s)·u(y) dy`.
pub fn compose_kernel_shift(k: &KernelForm, sm: &ShiftMultForm, x: f64, y: f64) -> C64 {
    let w = y - sm.shift;
    k.eval(x, w) * sm.factor(w)
}

/// Exact composition of a shift-multiply factor followed by a kernel factor:
/// `L(x)·∫K(x+s, y)u(y)dy`.
pub fn compose_shift_kernel(sm: &ShiftMultForm, k: &KernelForm, x: f64, y: f64) -> C64 {
    sm.factor(x) * k.eval(x + sm.shift, y)
}

/// Exact composition of two shift-multiply factors into a third:
/// `L'(x)·L''(x+s')·u(x+s'+s'')`.
pub fn compose_shift_shift(sm1: &ShiftMultForm, sm2: &ShiftMultForm) -> ShiftMultForm {
    let s1 = sm1.shift;
    ShiftMultForm {
        quad: sm1.quad + sm2.quad,
        lin: sm1.lin + sm2.lin + 2.0 * sm2.quad * s1,
        const_term: sm1.const_term + sm2.const_term + sm2.lin * s1 + sm2.quad * (s1 * s1),
        shift: sm1.shift + sm2.shift,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_params;
    use crate::schrodinger::{schrodinger_operator, RepPoint};

    fn gaussian_samples(grid: &Grid1D) -> Vec<C64> {
        grid.points()
            .iter()
            .map(|&x| C64::new((-x * x / 2.0).exp(), 0.0))
            .collect()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(1.0, 0.0, 64).is_err());
        assert!(Grid1D::new(0.0, 1.0, 8).is_err());
        let g = Grid1D::new(-2.0, 2.0, 16).unwrap();
        assert_eq!(g.points().len(), 17);
        assert!((g.step() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn identity_operator_from_point_mass_at_origin() {
        let p = validate_params([0.0; 3], [[0.0; 3]; 3]).unwrap();
        let op = schrodinger_operator(&p, &RepPoint::plus(1.0).unwrap());
        let grid = Grid1D::new(-8.0, 8.0, 512).unwrap();
        let u = gaussian_samples(&grid);
        let v = apply_operator(&op, &u, &grid).unwrap();
        for (a, b) in u.iter().zip(v.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn mehler_ground_state_eigenfunction() {
        // exp(−x²/2) is the ground state of ½(D²−x²): eigenvalue e^{−t/2}
        let p = validate_params(
            [0.0; 3],
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]],
        )
        .unwrap();
        let op = schrodinger_operator(&p, &RepPoint::plus(1.0).unwrap());
        let grid = Grid1D::new(-10.0, 10.0, 2048).unwrap();
        let u = gaussian_samples(&grid);
        let v = apply_operator(&op, &u, &grid).unwrap();
        let factor = (-0.5f64).exp();
        for (i, x) in grid.points().iter().enumerate() {
            if x.abs() < 4.0 {
                let want = factor * (-x * x / 2.0).exp();
                assert!(
                    (v[i] - C64::new(want, 0.0)).norm() < 1e-6,
                    "x={x} got={} want={want}",
                    v[i]
                );
            }
        }
    }

    #[test]
    fn contraction_on_random_smooth_functions() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let grid = Grid1D::new(-12.0, 12.0, 1024).unwrap();
        let p = validate_params(
            [0.1, -0.2, 0.3],
            [[1.0, 0.2, 0.0], [0.2, 0.8, 0.1], [0.0, 0.1, 0.9]],
        )
        .unwrap();
        let op = schrodinger_operator(&p, &RepPoint::plus(1.3).unwrap());
        for _ in 0..100 {
            // random superposition of Gaussian bumps, decays at the boundary
            let mut u = vec![C64::new(0.0, 0.0); grid.n + 1];
            for _ in 0..4 {
                let c = 4.0 * rng.random::<f64>() - 2.0;
                let wdt = 0.5 + rng.random::<f64>();
                let amp = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                for (i, x) in grid.points().iter().enumerate() {
                    u[i] += amp * (-(x - c) * (x - c) / (2.0 * wdt * wdt)).exp();
                }
            }
            let v = apply_operator(&op, &u, &grid).unwrap();
            assert!(l2_norm(&v, &grid) <= l2_norm(&u, &grid) * (1.0 + 1e-6));
        }
    }

    #[test]
    fn too_coarse_grid_is_rejected() {
        let p = validate_params(
            [0.0; 3],
            [[0.01, 0.0, 0.0], [0.0, 0.01, 0.0], [0.0, 0.0, 0.0]],
        )
        .unwrap();
        // tiny diffusion → very narrow kernel Gaussian; a 16-point grid on
        // [−10, 10] cannot resolve it
        let op = schrodinger_operator(&p, &RepPoint::plus(1.0).unwrap());
        let grid = Grid1D::new(-10.0, 10.0, 16).unwrap();
        let u = vec![C64::new(0.0, 0.0); 17];
        assert!(matches!(
            apply_operator(&op, &u, &grid),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn shift_composition_is_exact() {
        let sm1 = ShiftMultForm {
            quad: C64::new(-0.3, 0.1),
            lin: C64::new(0.2, -0.4),
            const_term: C64::new(-0.1, 0.7),
            shift: 0.8,
        };
        let sm2 = ShiftMultForm {
            quad: C64::new(-0.2, -0.3),
            lin: C64::new(-0.5, 0.2),
            const_term: C64::new(0.3, -0.2),
            shift: -1.1,
        };
        let comp = compose_shift_shift(&sm1, &sm2);
        for x in [-2.0, -0.3, 0.0, 1.7] {
            let want = sm1.factor(x) * sm2.factor(x + sm1.shift);
            let got = comp.factor(x);
            assert!((want - got).norm() < 1e-13);
        }
        assert!((comp.shift - (sm1.shift + sm2.shift)).abs() < 1e-15);
    }
}
