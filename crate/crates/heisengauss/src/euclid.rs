//! Euclidean (classical) Fourier transforms.
//!
//! Three layers:
//! * the joint characteristic function of the 9-dimensional vector of Wiener
//!   coordinates `W_k(t)`, time functionals `W*_k(t)` and Lévy areas
//!   `W_{k,ℓ}(t)` ([`joint_cf9`]);
//! * the full Euclidean characteristic function of a Gaussian measure on the
//!   group, obtained by pushing the Σ-factor through [`joint_cf9`]
//!   ([`full_euclid_ft`]);
//! * the partial transform `f̃_{2,3}` (closed form and quadrature inversion)
//!   and the integral-kernel route it induces ([`kernel_via_acp`]).
//!
//! Convention: wherever a complex vector enters a "squared norm" or scalar
//! product below, the form is the unconjugated bilinear one, matching the
//! Gaussian-integral identity it all rests on ([`slem_cf`]).

use crate::error::{Error, Result};
use crate::params::{derived_scalars, sigma_factor, GaussianParams};
use crate::schrodinger::{RepPoint, C64};
use crate::special::{coth_ratio, ln_cosh, sixth_minus_half_coth_ratio, x_coth_x_m1, x_over_sinh_x};
use nalgebra::DMatrix;

const I: C64 = C64::new(0.0, 1.0);

/// Below `t·‖ξ̃‖ ≤ XI_CUTOFF` the area frequencies are treated as zero and
/// the independent-Gaussian limit `exp(−t‖η‖²/2 − t³‖ζ‖²/24)` is returned;
/// the dropped corrections are `O((t‖ξ̃‖)²)`.
pub const XI_CUTOFF: f64 = 1e-6;

/// Upper-triangle storage of the antisymmetric frequency matrix `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct XiUpper {
    pub x12: f64,
    pub x13: f64,
    pub x23: f64,
}

impl XiUpper {
    /// Axial vector `ξ̃ = (ξ23, −ξ13, ξ12)`.
    pub fn axial(&self) -> [f64; 3] {
        [self.x23, -self.x13, self.x12]
    }

    /// Matrix-vector product `ξ·v` with
    /// `ξ = [[0, ξ12, ξ13], [−ξ12, 0, ξ23], [−ξ13, −ξ23, 0]]`.
    pub fn apply(&self, v: &[f64; 3]) -> [f64; 3] {
        [
            self.x12 * v[1] + self.x13 * v[2],
            -self.x12 * v[0] + self.x23 * v[2],
            -self.x13 * v[0] - self.x23 * v[1],
        ]
    }
}

/// Evaluation point of the 9-dimensional joint characteristic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cf9Point {
    pub t: f64,
    /// Frequencies of `W_1(t), W_2(t), W_3(t)`.
    pub eta: [f64; 3],
    /// Frequencies of `W*_1(t), W*_2(t), W*_3(t)`.
    pub zeta: [f64; 3],
    /// Frequencies of the areas `W_{1,2}, W_{1,3}, W_{2,3}`.
    pub xi: XiUpper,
}

impl Cf9Point {
    pub fn new(t: f64, eta: [f64; 3], zeta: [f64; 3], xi: XiUpper) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidConfig(format!("t must be positive, got {t}")));
        }
        Ok(Cf9Point { t, eta, zeta, xi })
    }
}

/// Intermediate quantities of the joint CF evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cf9Intermediate {
    pub xi_tilde: [f64; 3],
    /// `κ = (t‖ξ̃‖/2)·coth(t‖ξ̃‖/2) − 1 ≥ 0`.
    pub kappa: f64,
    /// `η̃ = (√t·κ/‖ξ̃‖²)·ξζ + i√t·η`.
    pub eta_tilde: [C64; 3],
}

pub fn cf9_intermediate(q: &Cf9Point) -> Cf9Intermediate {
    let xt = q.xi.axial();
    let nx = norm3(&xt);
    let half = q.t * nx / 2.0;
    let kappa = x_coth_x_m1(half);
    // κ/‖ξ̃‖² = (t²/4)·(x coth x − 1)/x² at x = t‖ξ̃‖/2, stable as ξ̃ → 0
    let kappa_over_nx2 = q.t * q.t / 4.0 * coth_ratio(half);
    let xz = q.xi.apply(&q.zeta);
    let st = q.t.sqrt();
    let mut eta_tilde = [C64::new(0.0, 0.0); 3];
    for k in 0..3 {
        eta_tilde[k] = C64::new(st * kappa_over_nx2 * xz[k], st * q.eta[k]);
    }
    Cf9Intermediate {
        xi_tilde: xt,
        kappa,
        eta_tilde,
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Unconjugated bilinear `Σ a_k·b_k` for complex vectors.
fn bdot3(a: &[C64; 3], b: &[C64; 3]) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn bdot_real(a: &[f64; 3], b: &[C64; 3]) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Joint characteristic function of
/// `(W(t), W*(t), (W_{k,ℓ}(t))_{k<ℓ})` at the point `q`.
pub fn joint_cf9(q: &Cf9Point) -> C64 {
    let t = q.t;
    let xt = q.xi.axial();
    let nx = norm3(&xt);
    let eta2 = dot3(&q.eta, &q.eta);
    let zeta2 = dot3(&q.zeta, &q.zeta);
    if t * nx <= XI_CUTOFF {
        // independent-Gaussian limit; the area frequencies survive to first
        // order only through the phase t³⟨ξζ,η⟩/12 (the η̃ cross term), and
        // everything else they contribute is O((t‖ξ̃‖)²)
        let re = -t * eta2 / 2.0 - t.powi(3) * zeta2 / 24.0;
        let xz = q.xi.apply(&q.zeta);
        let im = t.powi(3) * dot3(&xz, &q.eta) / 12.0;
        return C64::new(re, im).exp();
    }
    let mid = cf9_intermediate(q);
    let half = t * nx / 2.0;
    let kappa = mid.kappa;
    let kappa_over_nx2 = t * t / 4.0 * coth_ratio(half);

    // −(t³/(4‖ξ̃‖²))·(1/6 − 2κ/(t²‖ξ̃‖²))·⟨ξ̃,ζ⟩², with the parenthesis
    // evaluated through its cancellation-free form
    let g = sixth_minus_half_coth_ratio(half);
    let t1 = -(t.powi(3) / (4.0 * nx * nx)) * g * dot3(&xt, &q.zeta).powi(2);

    // (‖ξ̃‖²‖η̃‖² + κ⟨ξ̃,η̃⟩² − tκ(1+κ)‖ζ‖²) / (2(1+κ)‖ξ̃‖²)
    let ee = bdot3(&mid.eta_tilde, &mid.eta_tilde);
    let xe = bdot_real(&xt, &mid.eta_tilde);
    let t2 = ee / (2.0 * (1.0 + kappa))
        + xe * xe * (kappa_over_nx2 / (2.0 * (1.0 + kappa)))
        - t * kappa_over_nx2 * zeta2 / 2.0;

    let log = t2 + t1 - ln_cosh(half);
    log.exp()
}

/// Gaussian quadratic-form characteristic oracle:
/// `E exp{⟨η̃,X⟩ − s⟨BX,X⟩} = det(I+2sB)^{−1/2}·exp{½⟨η̃,(I+2sB)^{−1}η̃⟩}`
/// for a standard normal `X` in `R^k`, complex `η̃`, `s ≥ 0`, PSD `B`;
/// bilinear pairing, positive real determinant root.
pub fn slem_cf(eta_tilde: &[C64], s: f64, bq: &DMatrix<f64>) -> Result<C64> {
    let k = eta_tilde.len();
    if bq.nrows() != k || bq.ncols() != k {
        return Err(Error::InvalidConfig(format!(
            "matrix is {}x{}, vector has length {k}",
            bq.nrows(),
            bq.ncols()
        )));
    }
    if !(s >= 0.0) {
        return Err(Error::InvalidConfig(format!("s must be >= 0, got {s}")));
    }
    let eig = bq.clone().symmetric_eigen();
    let mut ln_det = 0.0;
    let mut expo = C64::new(0.0, 0.0);
    for j in 0..k {
        let lam = eig.eigenvalues[j].max(0.0);
        let denom = 1.0 + 2.0 * s * lam;
        ln_det += denom.ln();
        // y_j = (Uᵀ η̃)_j
        let mut y = C64::new(0.0, 0.0);
        for i in 0..k {
            y += eig.eigenvectors[(i, j)] * eta_tilde[i];
        }
        expo += y * y / denom;
    }
    Ok((0.5 * expo - C64::new(0.5 * ln_det, 0.0)).exp())
}

/// Full Euclidean characteristic function
/// `s̃ ↦ ∫ e^{i⟨s̃,g⟩} μ(dg)` of the Gaussian measure with parameters `p`.
pub fn full_euclid_ft(p: &GaussianParams, s_tilde: [f64; 3]) -> C64 {
    let sf = sigma_factor(p);
    let a = p.a();
    let mut eta = [0.0; 3];
    let mut zeta = [0.0; 3];
    for k in 1..=sf.d {
        eta[k - 1] = sf.sigma(1, k) * s_tilde[0]
            + sf.sigma(2, k) * s_tilde[1]
            + sf.sigma(3, k) * s_tilde[2];
        zeta[k - 1] = (a[1] * sf.sigma(1, k) - a[0] * sf.sigma(2, k)) * s_tilde[2];
    }
    let xi = XiUpper {
        x12: s_tilde[2] * sf.rho[0],
        x13: s_tilde[2] * sf.rho[1],
        x23: s_tilde[2] * sf.rho[2],
    };
    let q = Cf9Point {
        t: 1.0,
        eta,
        zeta,
        xi,
    };
    let phase = I * dot3(&s_tilde, &a);
    phase.exp() * joint_cf9(&q)
}

/// Method selector for [`partial_ft_23`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartialFtMethod {
    /// The explicit formula; requires `δ > 0`.
    ClosedForm,
    /// Trapezoid inversion `(2π)^{−1}∫ e^{−i·s1·s̃1} f̃(s̃1,·,·) ds̃1`
    /// over an adaptively truncated window.
    Quadrature,
}

/// Partial Euclidean transform
/// `f̃_{2,3}(s1, s̃2, s̃3) = ∫ e^{i(s̃2·s2 + s̃3·s3)} f(s1, s2, s3) ds2 ds3`
/// of the density of the measure.
pub fn partial_ft_23(
    p: &GaussianParams,
    s1: f64,
    st2: f64,
    st3: f64,
    method: PartialFtMethod,
) -> Result<C64> {
    match method {
        PartialFtMethod::ClosedForm => partial_ft_23_closed(p, s1, st2, st3),
        PartialFtMethod::Quadrature => partial_ft_23_quadrature(p, s1, st2, st3),
    }
}

fn partial_ft_23_closed(p: &GaussianParams, s1: f64, st2: f64, st3: f64) -> Result<C64> {
    let ds = derived_scalars(p);
    let delta = ds.delta;
    if delta <= 0.0 {
        return Err(Error::NotAbsolutelyContinuous);
    }
    let (a1, a2, a3) = (p.ai(1), p.ai(2), p.ai(3));
    let (b11, b12, b13, b22) = (p.bij(1, 1), p.bij(1, 2), p.bij(1, 3), p.bij(2, 2));
    let det_b = p.det_b();

    let x = st3.abs() * delta;
    let half = x / 2.0;
    let kappa = x_coth_x_m1(half);
    // κ/δ² = (s̃3²/4)·(x coth x − 1)/x² at x = |s̃3|δ/2, stable as either
    // factor vanishes
    let kappa_over_d2 = st3 * st3 / 4.0 * coth_ratio(half);
    let kq = kappa_over_d2 / (1.0 + kappa);

    let ln_pref = 0.5 * ((x_over_sinh_x(x) / (std::f64::consts::TAU * b11)).ln());

    let drift_q = b22 * a1 * a1 - 2.0 * b12 * a1 * a2 + b11 * a2 * a2;
    let e1 = -0.5 * kq * drift_q;
    let e2 = -0.5 * kq * st3 * st3 * det_b;
    let e3 = -(delta * delta * st2 * st2
        + 2.0 * ds.delta1 * st2 * st3
        + ds.delta4 * st3 * st3)
        / (2.0 * (1.0 + kappa) * b11);
    let u = a1 / (1.0 + kappa) - s1;
    let e4 = -(1.0 + kappa) / (2.0 * b11) * u * u;
    // the b12/b13 cross term is a pure phase: it arises as exp{−i·u·m}
    // with m = (b12·s̃2 + b13·s̃3)/b11 when the inversion Gaussian is
    // completed around its center
    let e5 = -(b12 * st2 + b13 * st3) / b11 * u;
    let phase =
        st2 * a2 / (1.0 + kappa) + st3 * a3 - kq * st3 * (a1 * ds.delta3 + a2 * ds.delta1) + e5;

    Ok((C64::new(ln_pref + e1 + e2 + e3 + e4, phase)).exp())
}

fn partial_ft_23_quadrature(p: &GaussianParams, s1: f64, st2: f64, st3: f64) -> Result<C64> {
    let b11 = p.bij(1, 1);
    let delta = derived_scalars(p).delta;
    if b11 <= 0.0 {
        // no decay of the integrand in s̃1: the inversion integral does not
        // truncate
        return Err(Error::TruncationTooTight { bound: f64::INFINITY });
    }
    // |f̃| decays like exp(−b11·s̃1²/(2(1+κ))); pick the window so the
    // Gaussian tail is far below the 1e-8 budget, then verify explicitly.
    let kappa = x_coth_x_m1(st3.abs() * delta / 2.0);
    let decay = b11 / (2.0 * (1.0 + kappa));
    let s_max = 12.0 * ((1.0 + kappa) / b11).sqrt();

    // tail bound: 2·|f̃(±S)|·∫_0^∞ e^{−decay·(2S u)} du / (2π)
    //            ≤ (|f̃(S)| + |f̃(−S)|) / (2π · 2·decay·S)
    let edge = full_euclid_ft(p, [s_max, st2, st3]).norm()
        + full_euclid_ft(p, [-s_max, st2, st3]).norm();
    let bound = edge / (std::f64::consts::TAU * 2.0 * decay * s_max);
    if !(bound <= 1e-8) {
        return Err(Error::TruncationTooTight { bound });
    }

    // oscillation scale: e^{−i·s1·s̃1} plus the intrinsic phase ~ a1·s̃1
    let freq = s1.abs() + p.ai(1).abs() + 1.0;
    let n_min = ((2.0 * s_max * freq / std::f64::consts::PI) * 8.0).ceil() as usize;
    let n = n_min.clamp(2048, 1 << 20);
    let h = 2.0 * s_max / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..=n {
        let st1 = -s_max + j as f64 * h;
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        let v = (-I * (s1 * st1)).exp() * full_euclid_ft(p, [st1, st2, st3]);
        acc += w * v;
    }
    Ok(acc * (h / std::f64::consts::TAU))
}

/// Kernel of `μ̂(π_{±λ})` through the partial-transform route:
/// `K(x,y) = λ^{−1/2}·f̃_{2,3}((y−x)/√λ, ±√λ(y+x)/2, ±λ)`.
///
/// Requires `δ > 0` (absolutely continuous measure).
pub fn kernel_via_acp(p: &GaussianParams, rep: &RepPoint, x: f64, y: f64) -> Result<C64> {
    let s = rep.sgn();
    let lam = rep.lambda;
    let sq = lam.sqrt();
    let v = partial_ft_23(
        p,
        (y - x) / sq,
        s * sq * (y + x) / 2.0,
        s * lam,
        PartialFtMethod::ClosedForm,
    )?;
    Ok(v / sq)
}
