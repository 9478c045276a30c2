//! Parameter model for Gaussian measures on the 3-dimensional Heisenberg
//! group.
//!
//! A Gaussian measure is parameterized by a drift vector `a ∈ R³` and a real
//! symmetric positive semidefinite diffusion matrix `B`. This module owns
//! validation, the derived scalars that the closed-form transforms are
//! written in, the rank factorization `B = Σ·Σᵀ`, the five-way semigroup
//! classification, and the support description of the singular cases.
//!
//! Group conventions used throughout the crate:
//! `(g)(h) = (g1+h1, g2+h2, g3+h3+½(g1·h2−g2·h1))`, Lie bracket
//! `[(p),(q)] = (0,0,p1·q2−p2·q1)`, natural basis `X1, X2, X3` with the
//! center spanned by `X3`.

use crate::error::{Error, Result};
use nalgebra::{Matrix3, Vector3};

/// Absolute eigenvalue tolerance for PSD validation: eigenvalues in
/// `[-PSD_TOL, 0)` are treated as rounding noise and clipped to zero,
/// anything below `-PSD_TOL` is rejected.
pub const PSD_TOL: f64 = 1e-10;

/// Absolute eigenvalue threshold for the numerical rank `d`.
pub const RANK_TOL: f64 = 1e-9;

/// Relative snap threshold for the singular test `b11·b22 − b12² = 0`.
/// Cancellation when forming the minor in f64 leaves residue of order
/// 1e-16·scale; 1e-12 relative sits three orders above that and six below
/// any meaningful input.
pub const DELTA_SNAP_REL: f64 = 1e-12;

/// Lie bracket in the (X1, X2, X3) coordinate basis.
pub fn lie_bracket(p: &[f64; 3], q: &[f64; 3]) -> [f64; 3] {
    [0.0, 0.0, p[0] * q[1] - p[1] * q[0]]
}

/// Validated parameters `(a, B)` of a Gaussian measure.
///
/// Values constructed through [`validate_params`] carry a symmetric PSD
/// diffusion matrix (eigenvalues within `[-PSD_TOL, 0)` clipped to zero).
/// [`GaussianParams::raw_symmetric`] skips the PSD check; it exists for the
/// convolution parameter arithmetic, whose "would-be" output matrix need not
/// be PSD when the convolution is not Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    a: Vector3<f64>,
    b: Matrix3<f64>,
}

/// Validate `(a, B)`: `B` must be exactly symmetric and PSD up to `PSD_TOL`.
pub fn validate_params(a: [f64; 3], b: [[f64; 3]; 3]) -> Result<GaussianParams> {
    // Finiteness and magnitude guard: the eigensolver and every downstream
    // product assume finite arithmetic. 1e150 keeps all pairwise products
    // representable.
    for &v in a.iter().chain(b.iter().flatten()) {
        if !v.is_finite() || v.abs() > 1e150 {
            return Err(Error::InvalidInput(format!(
                "parameter entries must be finite with |x| <= 1e150, got {v}"
            )));
        }
    }
    for (i, row) in b.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if j > i {
                let diff = (v - b[j][i]).abs();
                if diff != 0.0 {
                    return Err(Error::NotSymmetric { i, j, diff });
                }
            }
        }
    }
    let bm = Matrix3::from_fn(|i, j| b[i][j]);
    let eig = bm.symmetric_eigen();
    let mut clip = false;
    for &ev in eig.eigenvalues.iter() {
        if ev < -PSD_TOL {
            return Err(Error::NotPsd {
                eigenvalue: ev,
                tol: PSD_TOL,
            });
        }
        if ev < 0.0 {
            clip = true;
        }
    }
    let bm = if clip {
        let mut vals = eig.eigenvalues;
        for v in vals.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let rebuilt = &eig.eigenvectors * Matrix3::from_diagonal(&vals) * eig.eigenvectors.transpose();
        // keep exact symmetry after the reconstruction
        0.5 * (rebuilt + rebuilt.transpose())
    } else {
        bm
    };
    Ok(GaussianParams {
        a: Vector3::new(a[0], a[1], a[2]),
        b: bm,
    })
}

impl GaussianParams {
    /// Build from a symmetric matrix without the PSD check. The matrix must
    /// still be symmetric; panics otherwise (programming error).
    pub fn raw_symmetric(a: [f64; 3], b: [[f64; 3]; 3]) -> Self {
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert_eq!(b[i][j], b[j][i], "raw_symmetric needs a symmetric matrix");
            }
        }
        GaussianParams {
            a: Vector3::new(a[0], a[1], a[2]),
            b: Matrix3::from_fn(|i, j| b[i][j]),
        }
    }

    pub fn a(&self) -> [f64; 3] {
        [self.a[0], self.a[1], self.a[2]]
    }

    pub fn b(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.b[(i, j)];
            }
        }
        out
    }

    pub fn a_vec(&self) -> Vector3<f64> {
        self.a
    }

    pub fn b_mat(&self) -> Matrix3<f64> {
        self.b
    }

    /// 1-indexed entry accessors matching the classical notation.
    pub fn ai(&self, i: usize) -> f64 {
        self.a[i - 1]
    }

    pub fn bij(&self, i: usize, j: usize) -> f64 {
        self.b[(i - 1, j - 1)]
    }

    pub fn b_max_abs(&self) -> f64 {
        self.b.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Determinant of `B`.
    pub fn det_b(&self) -> f64 {
        self.b.determinant()
    }

    /// Parameters of the convolution-semigroup element at time `t`:
    /// `(t·a, t·B)`.
    pub fn scale(&self, t: f64) -> Result<GaussianParams> {
        if !(t >= 0.0) {
            return Err(Error::NegativeTime(t));
        }
        Ok(GaussianParams {
            a: self.a * t,
            b: self.b * t,
        })
    }

    /// Parameters of the pushforward under the dilation `d_{√t}`, where
    /// `d_c(x) = (c·x1, c·x2, c²·x3)`. Degrees: drift entries scale with
    /// `(c, c, c²)`, diffusion entries with the product of their row/column
    /// degrees.
    pub fn dilate(&self, t: f64) -> Result<GaussianParams> {
        if !(t >= 0.0) {
            return Err(Error::NegativeTime(t));
        }
        let c = t.sqrt();
        let deg = [c, c, c * c];
        let a = Vector3::new(self.a[0] * deg[0], self.a[1] * deg[1], self.a[2] * deg[2]);
        let b = Matrix3::from_fn(|i, j| self.b[(i, j)] * deg[i] * deg[j]);
        Ok(GaussianParams { a, b })
    }
}

/// The scalar combinations of `(a, B)` entering the closed-form transforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScalars {
    /// `δ = √(b11·b22 − b12²)`, snapped to zero at relative level
    /// [`DELTA_SNAP_REL`].
    pub delta: f64,
    /// `δ1 = b11·b23 − b12·b13`
    pub delta1: f64,
    /// `δ2 = a1·b12 − a2·b11`
    pub delta2: f64,
    /// `δ3 = b13·b22 − b12·b23`
    pub delta3: f64,
    /// `δ4 = b11·b33 − b13²`
    pub delta4: f64,
}

pub fn derived_scalars(p: &GaussianParams) -> DerivedScalars {
    let (b11, b12, b13) = (p.bij(1, 1), p.bij(1, 2), p.bij(1, 3));
    let (b22, b23, b33) = (p.bij(2, 2), p.bij(2, 3), p.bij(3, 3));
    let (a1, a2) = (p.ai(1), p.ai(2));
    let raw = b11 * b22 - b12 * b12;
    let scale = b11 * b22 + b12 * b12;
    let delta = if raw <= DELTA_SNAP_REL * scale {
        0.0
    } else {
        raw.sqrt()
    };
    DerivedScalars {
        delta,
        delta1: b11 * b23 - b12 * b13,
        delta2: a1 * b12 - a2 * b11,
        delta3: b13 * b22 - b12 * b23,
        delta4: b11 * b33 - b13 * b13,
    }
}

/// Rank factorization `B = Σ·Σᵀ` with `Σ` a `3×d` matrix.
///
/// `Σ` comes from the eigendecomposition with columns ordered by descending
/// eigenvalue; any right-orthogonal gauge is equally valid, so consumers may
/// depend only on gauge invariants (`Σ·Σᵀ`, `|ρ|`).
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaFactor {
    /// Columns of `Σ` (each a vector in R³), `d` of them.
    pub columns: Vec<[f64; 3]>,
    /// Numerical rank `d ∈ {0,1,2,3}`.
    pub d: usize,
    /// 2×2 minors of the top two rows over column pairs (1,2), (1,3), (2,3),
    /// zero-padded when `d < 3`: `ρ = (ρ1, ρ2, ρ3)`.
    pub rho: [f64; 3],
}

impl SigmaFactor {
    /// Entry `σ_{k,j}` with 1-based row `k ∈ {1,2,3}` and column `j ≤ d`.
    pub fn sigma(&self, k: usize, j: usize) -> f64 {
        self.columns[j - 1][k - 1]
    }

    /// Reconstruct `Σ·Σᵀ`.
    pub fn reconstruct(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for col in &self.columns {
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] += col[i] * col[j];
                }
            }
        }
        out
    }
}

pub fn sigma_factor(p: &GaussianParams) -> SigmaFactor {
    let eig = p.b.symmetric_eigen();
    // order by descending eigenvalue
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .unwrap()
    });
    let mut columns = Vec::new();
    for &k in &idx {
        let ev = eig.eigenvalues[k];
        if ev > RANK_TOL {
            let s = ev.sqrt();
            let v = eig.eigenvectors.column(k);
            columns.push([s * v[0], s * v[1], s * v[2]]);
        }
    }
    let d = columns.len();
    let mut rho = [0.0; 3];
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    for (slot, &(j, k)) in pairs.iter().enumerate() {
        if k < d {
            rho[slot] = columns[j][0] * columns[k][1] - columns[k][0] * columns[j][1];
        }
    }
    SigmaFactor { columns, d, rho }
}

/// The five structural types of Gaussian semigroups on the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemigroupClass {
    /// rank 3: absolutely continuous, full support.
    FullRank3,
    /// rank 2 with non-commuting directions (δ > 0): absolutely continuous,
    /// full support (hypoelliptic).
    Hypoelliptic2,
    /// rank 2 with commuting directions (δ = 0): singular, supported on a
    /// 2-dimensional coset.
    AbelianPlane2,
    /// rank 1: singular, supported on a line plus its drift bracket.
    Line1,
    /// rank 0: point measures.
    Point0,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub class: SemigroupClass,
    /// `true` iff `δ > 0`: absolutely continuous with respect to Haar
    /// measure; otherwise singular.
    pub absolutely_continuous: bool,
}

pub fn classify_semigroup(p: &GaussianParams) -> Classification {
    let d = sigma_factor(p).d;
    let delta = derived_scalars(p).delta;
    let ac = delta > RANK_TOL;
    let class = match d {
        3 => SemigroupClass::FullRank3,
        2 => {
            if ac {
                SemigroupClass::Hypoelliptic2
            } else {
                SemigroupClass::AbelianPlane2
            }
        }
        1 => SemigroupClass::Line1,
        _ => SemigroupClass::Point0,
    };
    Classification {
        class,
        absolutely_continuous: ac,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportKind {
    /// Absolutely continuous: support is the whole group.
    Whole,
    /// Singular rank 2: `exp(Y0 + R·U + R·X3)`.
    Coset2D,
    /// Singular rank 1: `exp(Y0 + R·U + R·[Y0,U])`.
    Coset1DPlusBracket,
    /// Rank 0: the single point `exp(Y0)`.
    Point,
}

/// Description of `supp(μ)` as a coset `exp(base + span)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportDescriptor {
    pub kind: SupportKind,
    /// `Y0 = Σ a_k X_k` in basis coordinates.
    pub base: [f64; 3],
    /// 0 to 2 linearly independent Lie-algebra directions.
    pub span: Vec<[f64; 3]>,
}

pub fn support_descriptor(p: &GaussianParams) -> SupportDescriptor {
    let base = p.a();
    let ds = derived_scalars(p);
    if ds.delta > RANK_TOL {
        return SupportDescriptor {
            kind: SupportKind::Whole,
            base,
            span: Vec::new(),
        };
    }
    let d = sigma_factor(p).d;
    let (b11, b12, b13) = (p.bij(1, 1), p.bij(1, 2), p.bij(1, 3));
    let (b22, b23, b33) = (p.bij(2, 2), p.bij(2, 3), p.bij(3, 3));
    match d {
        2 => {
            let u = if b11 > 0.0 {
                [b11, b12, 0.0]
            } else {
                [0.0, b22, 0.0]
            };
            SupportDescriptor {
                kind: SupportKind::Coset2D,
                base,
                span: vec![u, [0.0, 0.0, 1.0]],
            }
        }
        1 => {
            let u = if b11 > 0.0 {
                [b11, b12, b13]
            } else if b22 > 0.0 {
                [0.0, b22, b23]
            } else {
                [0.0, 0.0, b33]
            };
            let br = lie_bracket(&base, &u);
            let mut span = vec![u];
            // drop a vanishing bracket: the coset degenerates to a line
            let unorm = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
            if br[2].abs() > 1e-14 * unorm.max(1.0) * base_norm(&base).max(1.0) {
                span.push(br);
            }
            SupportDescriptor {
                kind: SupportKind::Coset1DPlusBracket,
                base,
                span,
            }
        }
        _ => SupportDescriptor {
            kind: SupportKind::Point,
            base,
            span: Vec::new(),
        },
    }
}

fn base_norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diag(x: f64, y: f64, z: f64) -> [[f64; 3]; 3] {
        [[x, 0.0, 0.0], [0.0, y, 0.0], [0.0, 0.0, z]]
    }

    #[test]
    fn zero_matrix_is_valid_point_mass() {
        let p = validate_params([0.0; 3], [[0.0; 3]; 3]).unwrap();
        assert_eq!(classify_semigroup(&p).class, SemigroupClass::Point0);
        assert!(!classify_semigroup(&p).absolutely_continuous);
    }

    #[test]
    fn mehler_generator_params_are_valid() {
        let p = validate_params([0.0; 3], diag(1.0, 1.0, 0.0)).unwrap();
        assert_eq!(classify_semigroup(&p).class, SemigroupClass::Hypoelliptic2);
        assert!(classify_semigroup(&p).absolutely_continuous);
    }

    #[test]
    fn indefinite_matrix_rejected() {
        // eigenvalues of [[1,1,1],[1,1,0],[1,0,0]] include a negative one
        let b = [[1.0, 1.0, 1.0], [1.0, 1.0, 0.0], [1.0, 0.0, 0.0]];
        let err = validate_params([0.0; 3], b).unwrap_err();
        assert!(matches!(err, Error::NotPsd { .. }));
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let b = [[1.0, 0.5, 0.0], [0.4, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(matches!(
            validate_params([0.0; 3], b),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn tiny_negative_eigenvalue_clipped() {
        let e = 1e-12;
        let b = [[e, 0.0, 0.0], [0.0, -e, 0.0], [0.0, 0.0, 1.0]];
        let p = validate_params([0.0; 3], b).unwrap();
        let eig = p.b_mat().symmetric_eigen();
        for &v in eig.eigenvalues.iter() {
            assert!(v >= -1e-16);
        }
    }

    #[test]
    fn derived_scalars_trivial_cases() {
        let p = validate_params([0.0; 3], diag(1.0, 1.0, 0.0)).unwrap();
        let ds = derived_scalars(&p);
        assert_abs_diff_eq!(ds.delta, 1.0, epsilon = 1e-15);
        assert_eq!(
            (ds.delta1, ds.delta2, ds.delta3, ds.delta4),
            (0.0, 0.0, 0.0, 0.0)
        );

        let p = validate_params([0.0, 1.0, 0.0], diag(1.0, 0.0, 0.0)).unwrap();
        let ds = derived_scalars(&p);
        assert_eq!(ds.delta, 0.0);
        assert_abs_diff_eq!(ds.delta2, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn sigma_factor_reconstructs_and_rank_matches() {
        let p = validate_params([0.0; 3], diag(1.0, 1.0, 0.0)).unwrap();
        let sf = sigma_factor(&p);
        assert_eq!(sf.d, 2);
        let bb = sf.reconstruct();
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(bb[i][j], p.b()[i][j], epsilon = 1e-10);
            }
        }
        let rho_norm2: f64 = sf.rho.iter().map(|r| r * r).sum();
        assert_abs_diff_eq!(rho_norm2.sqrt(), 1.0, epsilon = 1e-10);

        let p = validate_params([0.0; 3], diag(1.0, 1.0, 1.0)).unwrap();
        let sf = sigma_factor(&p);
        assert_eq!(sf.d, 3);
        let rho_norm2: f64 = sf.rho.iter().map(|r| r * r).sum();
        assert_abs_diff_eq!(rho_norm2, 1.0, epsilon = 1e-10);

        let p = validate_params([0.0; 3], [[0.0; 3]; 3]).unwrap();
        assert_eq!(sigma_factor(&p).d, 0);
        assert!(sigma_factor(&p).columns.is_empty());
    }

    #[test]
    fn classify_all_five_types() {
        let cases = [
            (diag(1.0, 1.0, 1.0), SemigroupClass::FullRank3, true),
            (diag(1.0, 1.0, 0.0), SemigroupClass::Hypoelliptic2, true),
            (diag(1.0, 0.0, 1.0), SemigroupClass::AbelianPlane2, false),
            (diag(0.0, 1.0, 0.0), SemigroupClass::Line1, false),
            (diag(0.0, 0.0, 0.0), SemigroupClass::Point0, false),
        ];
        for (b, class, ac) in cases {
            let p = validate_params([0.0; 3], b).unwrap();
            let c = classify_semigroup(&p);
            assert_eq!(c.class, class);
            assert_eq!(c.absolutely_continuous, ac);
        }
    }

    #[test]
    fn support_cases() {
        // rank 1, a = 0: bracket vanishes, one-dimensional coset
        let p = validate_params([0.0; 3], diag(0.0, 1.0, 0.0)).unwrap();
        let sd = support_descriptor(&p);
        assert_eq!(sd.kind, SupportKind::Coset1DPlusBracket);
        assert_eq!(sd.span.len(), 1);
        assert_eq!(sd.span[0], [0.0, 1.0, 0.0]);

        // rank 2 singular with b11 > 0: span {U, X3}, U = X1-direction
        let p = validate_params([0.3, -0.2, 0.8], diag(1.0, 0.0, 1.0)).unwrap();
        let sd = support_descriptor(&p);
        assert_eq!(sd.kind, SupportKind::Coset2D);
        assert_eq!(sd.span[0], [1.0, 0.0, 0.0]);
        assert_eq!(sd.span[1], [0.0, 0.0, 1.0]);

        // rank 1 with only b33 > 0: central line
        let p = validate_params([0.0; 3], diag(0.0, 0.0, 2.0)).unwrap();
        let sd = support_descriptor(&p);
        assert_eq!(sd.span[0], [0.0, 0.0, 2.0]);

        // absolutely continuous: whole group
        let p = validate_params([0.0; 3], diag(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(support_descriptor(&p).kind, SupportKind::Whole);
    }

    #[test]
    fn scale_monoid_action() {
        let p = validate_params([0.1, -0.4, 0.7], diag(1.0, 2.0, 3.0)).unwrap();
        let st = p.scale(2.0).unwrap().scale(3.0).unwrap();
        let s6 = p.scale(6.0).unwrap();
        assert_eq!(st.a(), s6.a());
        assert_eq!(st.b(), s6.b());
        assert!(matches!(p.scale(-1.0), Err(Error::NegativeTime(_))));
        let z = p.scale(0.0).unwrap();
        assert_eq!(z.a(), [0.0; 3]);
        assert_eq!(z.b(), [[0.0; 3]; 3]);
    }
}
