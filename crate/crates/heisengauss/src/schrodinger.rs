//! Closed-form Fourier transform of a Gaussian measure at the Schrödinger
//! representations `π_{±λ}` and at the one-dimensional representations
//! `χ_{α,β}`, plus the coefficients of the infinitesimal generator.
//!
//! At `π_{±λ}` the transform is either an integral operator with a complex
//! Gaussian kernel `K(x,y) = C·exp(−½ zᵀDz)`, `z = (x,y,1)ᵀ` (when
//! `b11 > 0`), or a multiply-then-shift operator
//! `u ↦ L(x)·u(x + √λ·a1)` (when `b11 = 0`).

use crate::error::{Error, Result};
use crate::params::{derived_scalars, GaussianParams};
use crate::special::{ln_sinh, x_minus_2tanh_half};
use num_complex::Complex64;

pub type C64 = Complex64;

const I: C64 = C64::new(0.0, 1.0);

/// Diffusion entries at or below this absolute level are treated as zero
/// when selecting the operator branch (same level as the PSD clip).
pub const B11_ZERO_TOL: f64 = 1e-10;

/// Branch switch for the hyperbolic vs. polynomial kernel coefficients:
/// below `δ ≤ 1e-7·(1+‖B‖_max)` both branches agree to ≤ 1e-9 and the
/// degenerate branch avoids the `coth(λδ)` blow-up.
pub fn branch_tol(p: &GaussianParams) -> f64 {
    1e-7 * (1.0 + p.b_max_abs())
}

/// Sign choice of the representation pair `π_{±λ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// A point `(±, λ)` in the Schrödinger family, `λ > 0` strictly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepPoint {
    pub sign: Sign,
    pub lambda: f64,
}

impl RepPoint {
    pub fn new(sign: Sign, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidLambda(lambda));
        }
        Ok(RepPoint { sign, lambda })
    }

    pub fn plus(lambda: f64) -> Result<Self> {
        Self::new(Sign::Plus, lambda)
    }

    pub fn minus(lambda: f64) -> Result<Self> {
        Self::new(Sign::Minus, lambda)
    }

    /// `+1` for the plus branch, `−1` for the minus branch.
    pub fn sgn(&self) -> f64 {
        match self.sign {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Complex symmetric 3×3 matrix stored as its upper triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexSym3 {
    // order: (1,1) (1,2) (1,3) (2,2) (2,3) (3,3)
    upper: [C64; 6],
}

impl ComplexSym3 {
    pub fn from_upper(
        e11: C64,
        e12: C64,
        e13: C64,
        e22: C64,
        e23: C64,
        e33: C64,
    ) -> Self {
        ComplexSym3 {
            upper: [e11, e12, e13, e22, e23, e33],
        }
    }

    /// Entry with 1-based indices; symmetry is built in.
    pub fn at(&self, i: usize, j: usize) -> C64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        match (i, j) {
            (1, 1) => self.upper[0],
            (1, 2) => self.upper[1],
            (1, 3) => self.upper[2],
            (2, 2) => self.upper[3],
            (2, 3) => self.upper[4],
            (3, 3) => self.upper[5],
            _ => panic!("index out of range"),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexSym3 {
            upper: self.upper.map(|z| z.conj()),
        }
    }

    /// `zᵀ M z` with `z = (x, y, 1)` and the unconjugated bilinear form.
    pub fn quadratic(&self, x: f64, y: f64) -> C64 {
        self.at(1, 1) * (x * x)
            + self.at(2, 2) * (y * y)
            + self.at(3, 3)
            + 2.0 * (self.at(1, 2) * (x * y) + self.at(1, 3) * x + self.at(2, 3) * y)
    }
}

/// Integral-operator form `u ↦ ∫ K(x,y)u(y)dy`,
/// `K(x,y) = C·exp(−½ zᵀDz)`, `z = (x,y,1)ᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelForm {
    /// Positive real prefactor.
    pub c: f64,
    /// Its logarithm; kernel evaluation goes through the log to stay
    /// overflow-free for extreme parameters.
    pub ln_c: f64,
    /// Complex symmetric coefficient matrix.
    pub d: ComplexSym3,
}

impl KernelForm {
    pub fn eval(&self, x: f64, y: f64) -> C64 {
        let e = -0.5 * self.d.quadratic(x, y) + self.ln_c;
        e.exp()
    }

    /// Conjugate kernel (the `∓λ` companion).
    pub fn conj(&self) -> Self {
        KernelForm {
            c: self.c,
            ln_c: self.ln_c,
            d: self.d.conj(),
        }
    }
}

/// Multiply-then-shift form `u ↦ L(x)·u(x + shift)` with
/// `L(x) = exp(quad·x² + lin·x + const_term)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftMultForm {
    pub quad: C64,
    pub lin: C64,
    pub const_term: C64,
    pub shift: f64,
}

impl ShiftMultForm {
    pub fn log_factor(&self, x: f64) -> C64 {
        (self.quad * x + self.lin) * x + self.const_term
    }

    pub fn factor(&self, x: f64) -> C64 {
        self.log_factor(x).exp()
    }

    pub fn conj(&self) -> Self {
        ShiftMultForm {
            quad: self.quad.conj(),
            lin: self.lin.conj(),
            const_term: self.const_term.conj(),
            shift: self.shift,
        }
    }
}

/// The transform of a single Gaussian measure at one representation point.
#[derive(Debug, Clone, PartialEq)]
pub struct FtOperator {
    pub rep: RepPoint,
    pub form: OperatorForm,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorForm {
    Kernel(KernelForm),
    ShiftMult(ShiftMultForm),
}

impl FtOperator {
    pub fn kernel(&self) -> Option<&KernelForm> {
        match &self.form {
            OperatorForm::Kernel(k) => Some(k),
            _ => None,
        }
    }

    pub fn shift_mult(&self) -> Option<&ShiftMultForm> {
        match &self.form {
            OperatorForm::ShiftMult(s) => Some(s),
            _ => None,
        }
    }
}

/// Transform at the one-dimensional representation `χ_{α,β}`:
/// `exp{i(α·a1 + β·a2) − ½(b11·α² + 2b12·αβ + b22·β²)}`.
pub fn chi_ft(p: &GaussianParams, alpha: f64, beta: f64) -> C64 {
    let (a1, a2) = (p.ai(1), p.ai(2));
    let (b11, b12, b22) = (p.bij(1, 1), p.bij(1, 2), p.bij(2, 2));
    let re = -0.5 * (b11 * alpha * alpha + 2.0 * b12 * alpha * beta + b22 * beta * beta);
    let im = alpha * a1 + beta * a2;
    C64::new(re, im).exp()
}

/// Prefactor `C_{±λ}(B)` and its logarithm.
fn prefactor(b11: f64, delta: f64, lambda: f64) -> (f64, f64) {
    let two_pi = std::f64::consts::TAU;
    let ln_c = if delta == 0.0 {
        -0.5 * (two_pi * lambda * b11).ln()
    } else {
        0.5 * (delta.ln() - (two_pi * b11).ln() - ln_sinh(lambda * delta))
    };
    (ln_c.exp(), ln_c)
}

/// Kernel coefficient matrix `D_{±λ}(a,B)` for `b11 > 0`.
fn d_matrix(p: &GaussianParams, rep: &RepPoint, delta: f64) -> ComplexSym3 {
    let s = rep.sgn();
    let lam = rep.lambda;
    let sq = lam.sqrt();
    let (a1, a3) = (p.ai(1), p.ai(3));
    let (b11, b12, b13, b33) = (p.bij(1, 1), p.bij(1, 2), p.bij(1, 3), p.bij(3, 3));
    let ds = derived_scalars(p);
    // a1 ± iλb13 appears in every branch
    let g = C64::new(a1, s * lam * b13);
    let tail = C64::new(lam * lam * b33, -s * 2.0 * lam * a3);
    if delta == 0.0 {
        let d11 = C64::new(1.0 / lam, s * b12) / b11;
        let d12 = C64::new(-1.0 / (lam * b11), 0.0);
        let d22 = C64::new(1.0 / lam, -s * b12) / b11;
        let off = I * (s * sq * ds.delta2 / (2.0 * b11));
        let d13 = g / (sq * b11) + off;
        let d23 = -g / (sq * b11) + off;
        let d33 = g * g / b11
            + C64::new(lam * lam * ds.delta2 * ds.delta2 / (12.0 * b11), 0.0)
            + tail;
        ComplexSym3::from_upper(d11, d12, d13, d22, d23, d33)
    } else {
        let ld = lam * delta;
        // δ·coth(λδ) and δ/sinh(λδ), both stable as λδ → 0
        let dcoth = delta / ld.tanh();
        let dsinh = delta * crate::special::x_over_sinh_x(ld) / ld;
        let d11 = C64::new(dcoth, s * b12) / b11;
        let d12 = C64::new(-dsinh / b11, 0.0);
        let d22 = C64::new(dcoth, -s * b12) / b11;
        // (λδ1 ± iδ2) / (√λ b11 δ coth(λδ/2)) = (λδ1 ± iδ2)·tanh(λδ/2)/(√λ b11 δ)
        let h = C64::new(lam * ds.delta1, s * ds.delta2);
        let w = h * ((ld / 2.0).tanh() / (sq * b11 * delta));
        let d13 = g / (sq * b11) + w;
        let d23 = -g / (sq * b11) + w;
        let d33 = g * g / b11 - h * h * (x_minus_2tanh_half(ld) / (lam * b11 * delta.powi(3)))
            + tail;
        ComplexSym3::from_upper(d11, d12, d13, d22, d23, d33)
    }
}

/// Multiply-then-shift coefficients for `b11 = 0`.
fn shift_mult_form(p: &GaussianParams, rep: &RepPoint) -> ShiftMultForm {
    let s = rep.sgn();
    let lam = rep.lambda;
    let sq = lam.sqrt();
    let (a1, a2, a3) = (p.ai(1), p.ai(2), p.ai(3));
    let (b22, b23, b33) = (p.bij(2, 2), p.bij(2, 3), p.bij(3, 3));
    ShiftMultForm {
        quad: C64::new(-0.5 * lam * b22, 0.0),
        lin: C64::new(
            -0.5 * lam * sq * (2.0 * b23 + a1 * b22),
            s * sq * a2,
        ),
        const_term: C64::new(
            -lam * lam * (3.0 * b33 + 3.0 * a1 * b23 + a1 * a1 * b22) / 6.0,
            s * 0.5 * lam * (2.0 * a3 + a1 * a2),
        ),
        shift: sq * a1,
    }
}

/// Closed form of `μ̂(π_{±λ})`.
pub fn schrodinger_operator(p: &GaussianParams, rep: &RepPoint) -> FtOperator {
    let b11 = p.bij(1, 1);
    if b11 <= B11_ZERO_TOL {
        return FtOperator {
            rep: *rep,
            form: OperatorForm::ShiftMult(shift_mult_form(p, rep)),
        };
    }
    let ds = derived_scalars(p);
    let delta = if ds.delta <= branch_tol(p) { 0.0 } else { ds.delta };
    let (c, ln_c) = prefactor(b11, delta, rep.lambda);
    let d = d_matrix(p, rep, delta);
    FtOperator {
        rep: *rep,
        form: OperatorForm::Kernel(KernelForm { c, ln_c, d }),
    }
}

/// Kernel evaluation `K(x,y)` including the prefactor.
pub fn kernel_eval(k: &KernelForm, x: f64, y: f64) -> C64 {
    k.eval(x, y)
}

/// Coefficients `α1..α6` of the generator
/// `α1·I + α2·x + α3·D + α4·x² + α5·(xD+Dx) + α6·D²` of the contraction
/// semigroup `t ↦ μ̂_t(π_{±λ})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorCoeffs {
    pub alpha: [C64; 6],
}

pub fn generator_coeffs(p: &GaussianParams, rep: &RepPoint) -> GeneratorCoeffs {
    let s = rep.sgn();
    let lam = rep.lambda;
    let sq = lam.sqrt();
    let a = p.a();
    let (b11, b12, b13) = (p.bij(1, 1), p.bij(1, 2), p.bij(1, 3));
    let (b22, b23, b33) = (p.bij(2, 2), p.bij(2, 3), p.bij(3, 3));
    GeneratorCoeffs {
        alpha: [
            C64::new(-0.5 * lam * lam * b33, s * lam * a[2]),
            C64::new(-lam * sq * b23, s * sq * a[1]),
            C64::new(sq * a[0], s * lam * sq * b13),
            C64::new(-0.5 * lam * b22, 0.0),
            C64::new(0.0, s * 0.5 * lam * b12),
            C64::new(0.5 * lam * b11, 0.0),
        ],
    }
}
