//! Convolution of two Gaussian measures: exact parameter arithmetic, the
//! closed-form transform of the convolution at every representation, and
//! the complete Gaussianity decision procedures.
//!
//! The convolution of Gaussian measures on the group is almost never
//! Gaussian; [`classify_tilde`] decides the seven parameter-level cases in
//! which it is, and [`classify_support_level`] restates the verdict in
//! support-geometric terms (common abelian coset / same semigroup modulo a
//! central factor).

use crate::error::{Error, Result};
use crate::params::{support_descriptor, GaussianParams};
use crate::schrodinger::{
    schrodinger_operator, ComplexSym3, OperatorForm, RepPoint, ShiftMultForm, C64,
};


/// Relative tolerance for the classifier equalities. The seven conditions
/// are exact algebraic relations; inputs are user floats, so each equality
/// is scored by a normalized residual and accepted below this level.
pub const EQ_TOL: f64 = 1e-9;

/// Parameters of the convolution `μ'∗μ''` whenever it is Gaussian (and the
/// "would-be" parameters otherwise): the second-order moment map of the
/// group product of independent vectors, inverted through the parameter
/// moment identities.
pub fn conv_params(p1: &GaussianParams, p2: &GaussianParams) -> GaussianParams {
    let (a1p, a2p, a3p) = (p1.ai(1), p1.ai(2), p1.ai(3));
    let (a1s, a2s, a3s) = (p2.ai(1), p2.ai(2), p2.ai(3));
    let (b11p, b12p, b13p) = (p1.bij(1, 1), p1.bij(1, 2), p1.bij(1, 3));
    let (b22p, b23p, b33p) = (p1.bij(2, 2), p1.bij(2, 3), p1.bij(3, 3));
    let (b11s, b12s, b13s) = (p2.bij(1, 1), p2.bij(1, 2), p2.bij(1, 3));
    let (b22s, b23s, b33s) = (p2.bij(2, 2), p2.bij(2, 3), p2.bij(3, 3));

    let a1 = a1p + a1s;
    let a2 = a2p + a2s;
    let a3 = a3p + a3s + 0.5 * (a1p * a2s - a2p * a1s);
    let b11 = b11p + b11s;
    let b12 = b12p + b12s;
    let b22 = b22p + b22s;
    let b13 = b13p + b13s + 0.5 * (a2s * b11p - a1s * b12p + a1p * b12s - a2p * b11s);
    let b23 = b23p + b23s + 0.5 * (a2s * b12p - a1s * b22p + a1p * b22s - a2p * b12s);
    let b33 = b33p
        + b33s
        + a2s * b13p - a1s * b23p + a1p * b23s - a2p * b13s
        + (-a1p * a1s * b22p + a1s * a1s * b22p + a1p * a1p * b22s - a1p * a1s * b22s
            + a1p * a2s * b12p + a1s * a2p * b12p - 2.0 * a1s * a2s * b12p
            - 2.0 * a1p * a2p * b12s + a1p * a2s * b12s + a1s * a2p * b12s
            - a2p * a2s * b11p + a2s * a2s * b11p + a2p * a2p * b11s - a2p * a2s * b11s)
            / 6.0;

    GaussianParams::raw_symmetric(
        [a1, a2, a3],
        [[b11, b12, b13], [b12, b22, b23], [b13, b23, b33]],
    )
}

/// Transform of the convolution at `χ_{α,β}`; identically equal to the
/// product `χ-transform(μ')·χ-transform(μ'')`.
pub fn conv_chi_ft(p1: &GaussianParams, p2: &GaussianParams, alpha: f64, beta: f64) -> C64 {
    let a1 = p1.ai(1) + p2.ai(1);
    let a2 = p1.ai(2) + p2.ai(2);
    let b11 = p1.bij(1, 1) + p2.bij(1, 1);
    let b12 = p1.bij(1, 2) + p2.bij(1, 2);
    let b22 = p1.bij(2, 2) + p2.bij(2, 2);
    C64::new(
        -0.5 * (b11 * alpha * alpha + 2.0 * b12 * alpha * beta + b22 * beta * beta),
        alpha * a1 + beta * a2,
    )
    .exp()
}

/// Which of the four structural cases of the convolution transform applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvCase {
    /// `b11' > 0`, `b11'' = 0`: kernel from the first factor, corrected.
    PrimeOnly,
    /// `b11' = 0`, `b11'' > 0`: kernel from the second factor, corrected.
    DoublePrimeOnly,
    /// both positive: genuine kernel product with the Gaussian z-integral
    /// carried out in closed form.
    Both,
    /// both zero: a composite multiply-then-shift operator.
    NeitherShift,
}

/// Kernel-shaped transform of the convolution: `C·exp(−½ zᵀVz)` with a
/// complex prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvKernelParts {
    pub c: C64,
    pub ln_c: C64,
    pub v: ComplexSym3,
    pub case: ConvCase,
}

impl ConvKernelParts {
    pub fn eval(&self, x: f64, y: f64) -> C64 {
        (self.ln_c - 0.5 * self.v.quadratic(x, y)).exp()
    }
}

/// Transform of `μ'∗μ''` at one Schrödinger representation point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvOperator {
    pub rep: RepPoint,
    pub form: ConvForm,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConvForm {
    Kernel(ConvKernelParts),
    ShiftMult(ShiftMultForm),
}

impl ConvOperator {
    pub fn kernel(&self) -> Option<&ConvKernelParts> {
        match &self.form {
            ConvForm::Kernel(k) => Some(k),
            _ => None,
        }
    }

    pub fn shift_mult(&self) -> Option<&ShiftMultForm> {
        match &self.form {
            ConvForm::ShiftMult(s) => Some(s),
            _ => None,
        }
    }
}

fn factor_kernel(p: &GaussianParams, rep: &RepPoint) -> Option<crate::schrodinger::KernelForm> {
    match schrodinger_operator(p, rep).form {
        OperatorForm::Kernel(k) => Some(k),
        OperatorForm::ShiftMult(_) => None,
    }
}

/// Closed form of `(μ'∗μ'')^(π_{±λ})`.
pub fn conv_operator(p1: &GaussianParams, p2: &GaussianParams, rep: &RepPoint) -> ConvOperator {
    let s = rep.sgn();
    let lam = rep.lambda;
    let sq = lam.sqrt();
    let k1 = factor_kernel(p1, rep);
    let k2 = factor_kernel(p2, rep);
    let (a1p, a2p, a3p) = (p1.ai(1), p1.ai(2), p1.ai(3));
    let (a1s, a2s, a3s) = (p2.ai(1), p2.ai(2), p2.ai(3));
    let (b22p, b23p, b33p) = (p1.bij(2, 2), p1.bij(2, 3), p1.bij(3, 3));
    let (b22s, b23s, b33s) = (p2.bij(2, 2), p2.bij(2, 3), p2.bij(3, 3));

    let form = match (k1, k2) {
        (None, None) => {
            let quad = C64::new(-0.5 * lam * (b22p + b22s), 0.0);
            let lin = C64::new(
                -0.5 * lam * sq
                    * (2.0 * b23p + 2.0 * b23s + a1p * b22p + (2.0 * a1p + a1s) * b22s),
                s * sq * (a2p + a2s),
            );
            let const_term = C64::new(
                -0.5 * lam * lam
                    * (b33p
                        + b33s
                        + a1p * b23p
                        + (2.0 * a1p + a1s) * b23s
                        + (a1p * a1p * b22p + a1s * a1s * b22s) / 3.0
                        + a1p * (a1p + a1s) * b22s),
                s * (lam * (a3p + a3s + (a1p * a2p + a1s * a2s) / 2.0) + lam * a1p * a2s),
            );
            ConvForm::ShiftMult(ShiftMultForm {
                quad,
                lin,
                const_term,
                shift: sq * (a1p + a1s),
            })
        }
        (Some(k), None) => {
            let d = &k.d;
            let p13 = -sq * a1s * d.at(1, 2);
            let p22 = C64::new(lam * b22s, 0.0);
            let p23 = -sq * a1s * d.at(2, 2)
                + C64::new(
                    0.5 * lam * sq * (2.0 * b23s - a1s * b22s),
                    -s * sq * a2s,
                );
            let p33 = -2.0 * sq * a1s * d.at(2, 3)
                + lam * (a1s * a1s) * d.at(2, 2)
                + C64::new(
                    lam * lam * (b33s - a1s * b23s + a1s * a1s * b22s / 3.0),
                    -s * lam * (2.0 * a3s - a1s * a2s),
                );
            let v = ComplexSym3::from_upper(
                d.at(1, 1),
                d.at(1, 2),
                d.at(1, 3) + p13,
                d.at(2, 2) + p22,
                d.at(2, 3) + p23,
                d.at(3, 3) + p33,
            );
            ConvForm::Kernel(ConvKernelParts {
                c: C64::new(k.c, 0.0),
                ln_c: C64::new(k.ln_c, 0.0),
                v,
                case: ConvCase::PrimeOnly,
            })
        }
        (None, Some(k)) => {
            let d = &k.d;
            let q11 = C64::new(lam * b22p, 0.0);
            let q13 = sq * a1p * d.at(1, 1)
                + C64::new(
                    0.5 * lam * sq * (a1p * b22p + 2.0 * b23p),
                    -s * sq * a2p,
                );
            let q23 = sq * a1p * d.at(1, 2);
            let q33 = 2.0 * sq * a1p * d.at(1, 3)
                + lam * (a1p * a1p) * d.at(1, 1)
                + C64::new(
                    lam * lam * (b33p + a1p * b23p + a1p * a1p * b22p / 3.0),
                    -s * lam * (2.0 * a3p + a1p * a2p),
                );
            let v = ComplexSym3::from_upper(
                d.at(1, 1) + q11,
                d.at(1, 2),
                d.at(1, 3) + q13,
                d.at(2, 2),
                d.at(2, 3) + q23,
                d.at(3, 3) + q33,
            );
            ConvForm::Kernel(ConvKernelParts {
                c: C64::new(k.c, 0.0),
                ln_c: C64::new(k.ln_c, 0.0),
                v,
                case: ConvCase::DoublePrimeOnly,
            })
        }
        (Some(kp), Some(ks)) => {
            let dp = &kp.d;
            let dsm = &ks.d;
            let denom = dp.at(2, 2) + dsm.at(1, 1);
            debug_assert!(denom.re > 0.0, "Re(d22' + d11'') must be positive");
            let u = [dp.at(1, 2), dsm.at(1, 2), dp.at(2, 3) + dsm.at(1, 3)];
            let base = [
                [dp.at(1, 1), C64::new(0.0, 0.0), dp.at(1, 3)],
                [C64::new(0.0, 0.0), dsm.at(2, 2), dsm.at(2, 3)],
                [dp.at(1, 3), dsm.at(2, 3), dp.at(3, 3) + dsm.at(3, 3)],
            ];
            let e = |i: usize, j: usize| base[i][j] - u[i] * u[j] / denom;
            let v = ComplexSym3::from_upper(e(0, 0), e(0, 1), e(0, 2), e(1, 1), e(1, 2), e(2, 2));
            // √(2π/denom): Re(denom) > 0 puts the principal root in the
            // positive-real-part half plane
            let ln_c = C64::new(kp.ln_c + ks.ln_c, 0.0)
                + 0.5 * (C64::new(std::f64::consts::TAU, 0.0).ln() - denom.ln());
            ConvForm::Kernel(ConvKernelParts {
                c: ln_c.exp(),
                ln_c,
                v,
                case: ConvCase::Both,
            })
        }
    };
    ConvOperator { rep: *rep, form }
}

/// The seven parameter-level conditions under which the convolution is
/// Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TildeCase {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

impl TildeCase {
    pub const ALL: [TildeCase; 7] = [
        TildeCase::C1,
        TildeCase::C2,
        TildeCase::C3,
        TildeCase::C4,
        TildeCase::C5,
        TildeCase::C6,
        TildeCase::C7,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            TildeCase::C1 => "C~1",
            TildeCase::C2 => "C~2",
            TildeCase::C3 => "C~3",
            TildeCase::C4 => "C~4",
            TildeCase::C5 => "C~5",
            TildeCase::C6 => "C~6",
            TildeCase::C7 => "C~7",
        }
    }
}

/// Outcome of the parameter-level classification.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvVerdict {
    pub gaussian: bool,
    pub tilde_case: Option<TildeCase>,
    /// Proportionality factor for the two proportional-family cases.
    pub rho: Option<f64>,
    /// Parameters of the convolution when it is Gaussian.
    pub result: Option<GaussianParams>,
    /// Normalized residual of each condition, in `TildeCase::ALL` order;
    /// `∞` where a structural prerequisite fails. A condition holds when
    /// its margin is `≤ EQ_TOL`.
    pub margins: [f64; 7],
}

fn param_scale(p: &GaussianParams) -> f64 {
    let a = p.a();
    p.b_max_abs()
        .max(a.iter().fold(0.0f64, |m, &v| m.max(v.abs())))
}

fn b11_is_zero(p: &GaussianParams) -> bool {
    p.bij(1, 1) <= EQ_TOL * param_scale(p).max(1e-300)
}

fn delta_is_zero(p: &GaussianParams) -> bool {
    let (b11, b12, b22) = (p.bij(1, 1), p.bij(1, 2), p.bij(2, 2));
    let raw = b11 * b22 - b12 * b12;
    raw <= EQ_TOL * (b11 * b22 + b12 * b12)
}

/// max |x − ϱ·y| / scale over the given index pairs of B plus drift entries.
fn proportionality_residual(
    p1: &GaussianParams,
    p2: &GaussianParams,
    rho: f64,
    b_entries: &[(usize, usize)],
    a_entries: &[usize],
) -> f64 {
    let scale = param_scale(p2).max(rho * param_scale(p1)).max(1e-300);
    let mut worst = 0.0f64;
    for &(i, j) in b_entries {
        worst = worst.max((p2.bij(i, j) - rho * p1.bij(i, j)).abs() / scale);
    }
    for &i in a_entries {
        worst = worst.max((p2.ai(i) - rho * p1.ai(i)).abs() / scale);
    }
    worst
}

/// max |entry| / scale over the entries that must vanish for a central-
/// shaped diffusion (everything except b33), optionally including the
/// planar drift.
fn central_shape_residual(p: &GaussianParams, include_drift: bool) -> f64 {
    let scale = param_scale(p).max(1e-300);
    let mut worst = 0.0f64;
    for &(i, j) in &[(1, 1), (1, 2), (1, 3), (2, 2), (2, 3)] {
        worst = worst.max(p.bij(i, j).abs() / scale);
    }
    if include_drift {
        worst = worst.max(p.ai(1).abs() / scale);
        worst = worst.max(p.ai(2).abs() / scale);
    }
    worst
}

fn b11_residual(p: &GaussianParams) -> f64 {
    p.bij(1, 1).abs() / param_scale(p).max(1e-300)
}

pub fn classify_tilde(p1: &GaussianParams, p2: &GaussianParams) -> ConvVerdict {
    let b1z = b11_is_zero(p1);
    let b2z = b11_is_zero(p2);
    let d1z = delta_is_zero(p1);
    let d2z = delta_is_zero(p2);
    let rho = if !b1z { p2.bij(1, 1) / p1.bij(1, 1) } else { f64::NAN };

    let mut margins = [f64::INFINITY; 7];

    // C~1: both kernels, both absolutely continuous, full proportionality
    if !b1z && !d1z && !b2z && !d2z && rho > 0.0 {
        margins[0] = proportionality_residual(
            p1,
            p2,
            rho,
            &[(1, 2), (2, 2), (1, 3), (2, 3)],
            &[1, 2],
        );
    }
    // C~2: both kernels, both singular, proportional 2×2 blocks
    if !b1z && d1z && !b2z && d2z && rho > 0.0 {
        margins[1] = proportionality_residual(p1, p2, rho, &[(1, 2), (2, 2)], &[]);
    }
    // C~3: first absolutely continuous, second central
    if !b1z && !d1z {
        margins[2] = central_shape_residual(p2, true);
    }
    // C~4: first singular kernel, second central-shaped diffusion
    if !b1z && d1z {
        margins[3] = central_shape_residual(p2, false);
    }
    // C~5 / C~6: mirror images
    if !b2z && !d2z {
        margins[4] = central_shape_residual(p1, true);
    }
    if !b2z && d2z {
        margins[5] = central_shape_residual(p1, false);
    }
    // C~7: both flat in the first coordinate
    margins[6] = b11_residual(p1).max(b11_residual(p2));

    let hit = TildeCase::ALL
        .iter()
        .zip(margins.iter())
        .find(|(_, &m)| m <= EQ_TOL)
        .map(|(c, _)| *c);

    match hit {
        Some(case) => ConvVerdict {
            gaussian: true,
            tilde_case: Some(case),
            rho: match case {
                TildeCase::C1 | TildeCase::C2 => Some(rho),
                _ => None,
            },
            result: Some(conv_params(p1, p2)),
            margins,
        },
        None => ConvVerdict {
            gaussian: false,
            tilde_case: None,
            rho: None,
            result: None,
            margins,
        },
    }
}

/// Support-geometric restatement of the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct HighLevelVerdict {
    pub variant: SupportLevel,
    /// The two commuting Lie-algebra directions spanning the common coset
    /// plane, present exactly in the common-coset case.
    pub witness: Option<([f64; 3], [f64; 3])>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportLevel {
    /// Both supports sit in parallel cosets of one abelian subgroup.
    C1CommonAbelianCoset,
    /// Same semigroup modulo a central Gaussian factor.
    C2SameSemigroupModCenter,
    No,
}

pub fn classify_support_level(p1: &GaussianParams, p2: &GaussianParams) -> HighLevelVerdict {
    let verdict = classify_tilde(p1, p2);
    match verdict.tilde_case {
        Some(TildeCase::C1) | Some(TildeCase::C3) | Some(TildeCase::C5) => HighLevelVerdict {
            variant: SupportLevel::C2SameSemigroupModCenter,
            witness: None,
        },
        Some(case) => {
            let v = match case {
                TildeCase::C2 | TildeCase::C4 => [p1.bij(1, 1), p1.bij(1, 2), 0.0],
                TildeCase::C6 => [p2.bij(1, 1), p2.bij(1, 2), 0.0],
                _ => [0.0, 1.0, 0.0], // C~7: both supports flat in X1
            };
            let witness = ([v[0], v[1], v[2]], [0.0, 0.0, 1.0]);
            debug_assert!(witness_holds(p1, p2, &witness));
            HighLevelVerdict {
                variant: SupportLevel::C1CommonAbelianCoset,
                witness: Some(witness),
            }
        }
        None => HighLevelVerdict {
            variant: SupportLevel::No,
            witness: None,
        },
    }
}

/// Check the support-side claim of the common-coset verdict: every span
/// direction of both supports lies in the plane of the witness pair.
pub fn witness_holds(
    p1: &GaussianParams,
    p2: &GaussianParams,
    witness: &([f64; 3], [f64; 3]),
) -> bool {
    let (v, w) = witness;
    // normal of span{v, w}
    let n = [
        v[1] * w[2] - v[2] * w[1],
        v[2] * w[0] - v[0] * w[2],
        v[0] * w[1] - v[1] * w[0],
    ];
    let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if nn == 0.0 {
        return false;
    }
    for p in [p1, p2] {
        for u in support_descriptor(p).span {
            let un = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
            let along = (u[0] * n[0] + u[1] * n[1] + u[2] * n[2]).abs();
            if along > 1e-9 * un * nn {
                return false;
            }
        }
    }
    true
}

/// `true` when the measure is supported on the center: planar drift and all
/// diffusion entries except b33 vanish.
pub fn is_central(p: &GaussianParams) -> bool {
    central_shape_residual(p, true) <= EQ_TOL
}

/// Convolution with a central factor: parameters add and the factors
/// commute.
pub fn central_convolve(p1: &GaussianParams, p2: &GaussianParams) -> Result<GaussianParams> {
    if !is_central(p1) && !is_central(p2) {
        return Err(Error::NeitherCentral);
    }
    let a1 = p1.a();
    let a2 = p2.a();
    let b1 = p1.b();
    let b2 = p2.b();
    let a = [a1[0] + a2[0], a1[1] + a2[1], a1[2] + a2[2]];
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = b1[i][j] + b2[i][j];
        }
    }
    Ok(GaussianParams::raw_symmetric(a, b))
}

/// Stability under the parabolic dilations: `μ_t = d_{√t}·μ_1` holds
/// exactly when the generator is centered with a central drift, i.e.
/// `a1 = a2 = 0` and `b13 = b23 = b33 = 0`.
pub fn hazod_stable(p: &GaussianParams) -> bool {
    let scale = param_scale(p).max(1e-300);
    let checks = [
        p.ai(1).abs(),
        p.ai(2).abs(),
        p.bij(1, 3).abs(),
        p.bij(2, 3).abs(),
        p.bij(3, 3).abs(),
    ];
    checks.iter().all(|&v| v / scale <= EQ_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_params;
    use approx::assert_abs_diff_eq;

    fn diag(x: f64, y: f64, z: f64) -> [[f64; 3]; 3] {
        [[x, 0.0, 0.0], [0.0, y, 0.0], [0.0, 0.0, z]]
    }

    #[test]
    fn conv_params_point_masses() {
        let p1 = validate_params([1.0, 0.0, 0.0], [[0.0; 3]; 3]).unwrap();
        let p2 = validate_params([0.0, 1.0, 0.0], [[0.0; 3]; 3]).unwrap();
        let c = conv_params(&p1, &p2);
        assert_eq!(c.a(), [1.0, 1.0, 0.5]);
        assert_eq!(c.b(), [[0.0; 3]; 3]);
        // reversed order flips the area term
        let c = conv_params(&p2, &p1);
        assert_eq!(c.a(), [1.0, 1.0, -0.5]);
    }

    #[test]
    fn conv_params_symmetric_zero_drift() {
        let p = validate_params([0.0; 3], diag(1.0, 1.0, 0.0)).unwrap();
        let c = conv_params(&p, &p);
        assert_eq!(c.a(), [0.0; 3]);
        assert_eq!(c.b(), diag(2.0, 2.0, 0.0));
    }

    #[test]
    fn conv_params_semigroup_property() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let p = crate::corpus::random_params(&mut rng);
            let s = 2.0 * rng.random::<f64>() + 0.1;
            let t = 2.0 * rng.random::<f64>() + 0.1;
            let c = conv_params(&p.scale(s).unwrap(), &p.scale(t).unwrap());
            let want = p.scale(s + t).unwrap();
            for i in 0..3 {
                assert_abs_diff_eq!(c.a()[i], want.a()[i], epsilon = 1e-12);
                for j in 0..3 {
                    assert_abs_diff_eq!(c.b()[i][j], want.b()[i][j], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn conv_chi_is_product_of_factors() {
        use crate::schrodinger::chi_ft;
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..200 {
            let p1 = crate::corpus::random_params(&mut rng);
            let p2 = crate::corpus::random_params(&mut rng);
            let alpha = 2.0 * rng.random::<f64>() - 1.0;
            let beta = 2.0 * rng.random::<f64>() - 1.0;
            let lhs = conv_chi_ft(&p1, &p2, alpha, beta);
            let rhs = chi_ft(&p1, alpha, beta) * chi_ft(&p2, alpha, beta);
            assert!((lhs - rhs).norm() < 1e-15 * (1.0 + rhs.norm()));
        }
        // α = β = 0 → 1; central second factor is invisible
        let p1 = validate_params([0.1, 0.2, 0.3], diag(1.0, 1.0, 1.0)).unwrap();
        let p2 = validate_params([0.0, 0.0, 5.0], diag(0.0, 0.0, 2.0)).unwrap();
        assert!((conv_chi_ft(&p1, &p2, 0.0, 0.0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(
            (conv_chi_ft(&p1, &p2, 0.7, -0.3) - crate::schrodinger::chi_ft(&p1, 0.7, -0.3))
                .norm()
                < 1e-15
        );
    }

    #[test]
    fn conv_operator_identity_factor() {
        // second factor a point mass at the identity: the convolution
        // transform is the first factor's transform
        let p1 = validate_params(
            [0.2, -0.4, 0.3],
            [[1.0, 0.2, 0.0], [0.2, 1.5, 0.1], [0.0, 0.1, 0.8]],
        )
        .unwrap();
        let p2 = validate_params([0.0; 3], [[0.0; 3]; 3]).unwrap();
        let rep = RepPoint::plus(1.3).unwrap();
        let cv = conv_operator(&p1, &p2, &rep);
        let k = cv.kernel().unwrap();
        assert_eq!(k.case, ConvCase::PrimeOnly);
        let plain = schrodinger_operator(&p1, &rep);
        let pk = plain.kernel().unwrap();
        for (x, y) in [(0.0, 0.0), (1.0, -0.7), (-2.0, 0.4)] {
            assert!((k.eval(x, y) - pk.eval(x, y)).norm() < 1e-13);
        }
    }

    #[test]
    fn classifier_proportional_pair() {
        let p1 = validate_params([0.0; 3], diag(1.0, 1.0, 0.0)).unwrap();
        let p2 = validate_params([0.0; 3], diag(2.0, 2.0, 0.0)).unwrap();
        let v = classify_tilde(&p1, &p2);
        assert!(v.gaussian);
        assert_eq!(v.tilde_case, Some(TildeCase::C1));
        assert_abs_diff_eq!(v.rho.unwrap(), 2.0, epsilon = 1e-15);
        let r = v.result.unwrap();
        assert_eq!(r.b(), diag(3.0, 3.0, 0.0));
        assert_eq!(r.a(), [0.0; 3]);
        assert_eq!(
            classify_support_level(&p1, &p2).variant,
            SupportLevel::C2SameSemigroupModCenter
        );
    }

    #[test]
    fn classifier_dirac_counterexample() {
        // symmetric planar semigroup convolved with a non-central point mass
        let p1 = validate_params([0.0; 3], diag(1.0, 1.0, 0.0)).unwrap();
        let p2 = validate_params([1.0, 0.0, 0.0], [[0.0; 3]; 3]).unwrap();
        let v = classify_tilde(&p1, &p2);
        assert!(!v.gaussian);
        assert_eq!(v.tilde_case, None);
        assert!(v.result.is_none());
        assert_eq!(classify_support_level(&p1, &p2).variant, SupportLevel::No);
    }

    #[test]
    fn classifier_central_factor() {
        let p1 = validate_params(
            [0.4, 0.2, -0.3],
            [[1.0, 0.1, 0.2], [0.1, 2.0, 0.0], [0.2, 0.0, 1.0]],
        )
        .unwrap();
        let p2 = validate_params([0.0, 0.0, 1.0], diag(0.0, 0.0, 1.0)).unwrap();
        let v = classify_tilde(&p1, &p2);
        assert_eq!(v.tilde_case, Some(TildeCase::C3));
        let r = v.result.unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(r.a()[i], p1.a()[i] + p2.a()[i], epsilon = 1e-14);
            for j in 0..3 {
                assert_abs_diff_eq!(r.b()[i][j], p1.b()[i][j] + p2.b()[i][j], epsilon = 1e-14);
            }
        }
        assert_eq!(
            classify_support_level(&p1, &p2).variant,
            SupportLevel::C2SameSemigroupModCenter
        );
    }

    #[test]
    fn classifier_common_plane_case() {
        let b = [[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 0.0]];
        let b3 = [[3.0, 3.0, 0.0], [3.0, 3.0, 0.0], [0.0, 0.0, 0.0]];
        let p1 = validate_params([0.0; 3], b).unwrap();
        let p2 = validate_params([0.0; 3], b3).unwrap();
        let v = classify_tilde(&p1, &p2);
        assert_eq!(v.tilde_case, Some(TildeCase::C2));
        assert_abs_diff_eq!(v.rho.unwrap(), 3.0, epsilon = 1e-15);
        let hl = classify_support_level(&p1, &p2);
        assert_eq!(hl.variant, SupportLevel::C1CommonAbelianCoset);
        let (w1, _) = hl.witness.unwrap();
        // common direction proportional to X1 + X2
        assert_abs_diff_eq!(w1[0], w1[1], epsilon = 1e-15);
        assert!(witness_holds(&p1, &p2, &hl.witness.unwrap()));
    }

    #[test]
    fn classifier_mixed_degenerate_pair_not_gaussian() {
        // δ' > 0, δ'' = 0, both kernels: none of the seven conditions
        let p1 = validate_params([0.0; 3], diag(1.0, 1.0, 0.5)).unwrap();
        let p2 = validate_params([0.0; 3], diag(1.0, 0.0, 0.5)).unwrap();
        let v = classify_tilde(&p1, &p2);
        assert!(!v.gaussian);
    }

    #[test]
    fn classifier_double_shift_pair() {
        let p1 = validate_params(
            [0.3, -0.7, 0.2],
            [[0.0; 3], [0.0, 1.0, 0.3], [0.0, 0.3, 1.0]],
        )
        .unwrap();
        let p2 = validate_params(
            [-0.1, 0.4, 0.9],
            [[0.0; 3], [0.0, 2.0, 0.0], [0.0, 0.0, 0.5]],
        )
        .unwrap();
        let v = classify_tilde(&p1, &p2);
        assert_eq!(v.tilde_case, Some(TildeCase::C7));
        assert!(v.rho.is_none());
        let hl = classify_support_level(&p1, &p2);
        assert_eq!(hl.variant, SupportLevel::C1CommonAbelianCoset);
        assert!(witness_holds(&p1, &p2, &hl.witness.unwrap()));
    }

    #[test]
    fn central_convolution() {
        let p1 = validate_params(
            [0.4, 0.2, -0.3],
            [[1.0, 0.1, 0.2], [0.1, 2.0, 0.0], [0.2, 0.0, 1.0]],
        )
        .unwrap();
        let nu = validate_params([0.0, 0.0, 2.5], diag(0.0, 0.0, 0.7)).unwrap();
        let c1 = central_convolve(&p1, &nu).unwrap();
        let c2 = central_convolve(&nu, &p1).unwrap();
        assert_eq!(c1, c2);
        assert_abs_diff_eq!(c1.ai(3), p1.ai(3) + 2.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c1.bij(3, 3), p1.bij(3, 3) + 0.7, epsilon = 1e-15);
        // agrees with the classifier result in the central case
        let v = classify_tilde(&p1, &nu);
        assert_eq!(v.result.unwrap().b(), c1.b());
        // two non-central factors are rejected
        assert!(matches!(
            central_convolve(&p1, &p1),
            Err(Error::NeitherCentral)
        ));
        // both central: plain sum
        let nu2 = validate_params([0.0, 0.0, -1.0], diag(0.0, 0.0, 0.3)).unwrap();
        let c = central_convolve(&nu, &nu2).unwrap();
        assert_abs_diff_eq!(c.ai(3), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.bij(3, 3), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn hazod_stability_predicate() {
        let p = validate_params([0.0, 0.0, 2.0], diag(1.0, 1.0, 0.0)).unwrap();
        assert!(hazod_stable(&p));
        let p = validate_params([1.0, 0.0, 0.0], diag(1.0, 1.0, 0.0)).unwrap();
        assert!(!hazod_stable(&p));
        let p = validate_params([0.0; 3], diag(1.0, 1.0, 0.5)).unwrap();
        assert!(!hazod_stable(&p));
    }

    #[test]
    fn dilation_matches_scaling_for_stable_params() {
        use crate::euclid::full_euclid_ft;
        let p = validate_params(
            [0.0, 0.0, 1.3],
            [[1.0, 0.4, 0.0], [0.4, 0.9, 0.0], [0.0, 0.0, 0.0]],
        )
        .unwrap();
        assert!(hazod_stable(&p));
        for &t in &[0.3, 1.7, 4.0] {
            let scaled = p.scale(t).unwrap();
            let dilated = p.dilate(t).unwrap();
            for i in 0..3 {
                assert_abs_diff_eq!(scaled.a()[i], dilated.a()[i], epsilon = 1e-12);
                for j in 0..3 {
                    assert_abs_diff_eq!(scaled.b()[i][j], dilated.b()[i][j], epsilon = 1e-12);
                }
            }
            let st = [0.7, -0.4, 0.5];
            let lhs = full_euclid_ft(&scaled, st);
            let rhs = full_euclid_ft(
                &p,
                [t.sqrt() * st[0], t.sqrt() * st[1], t * st[2]],
            );
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }
}
