//! Hermitian matrices viewed as a real vector space.
//!
//! The d×d Hermitian matrices form a real vector space of dimension d²
//! (d(d+1)/2 for real symmetric matrices) with inner product
//! ⟨S,T⟩ = Tr(ST). [`RealVectorization`] maps that space isometrically onto
//! ℝ^D, so the trace inner product becomes the Euclidean dot product and all
//! downstream scaling work is plain real linear algebra.
//!
//! Real-field data is stored with zero imaginary parts; the [`ScalarField`]
//! tag only changes the vectorization basis (and hence D).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar field of the ambient vector space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarField {
    Real,
    Complex,
}

impl ScalarField {
    /// Real dimension of the space of d×d Hermitian (Complex) or real
    /// symmetric (Real) matrices.
    pub fn ambient_dim(self, d: usize) -> usize {
        match self {
            ScalarField::Complex => d * d,
            ScalarField::Real => d * (d + 1) / 2,
        }
    }
}

impl std::fmt::Display for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarField::Real => write!(f, "real"),
            ScalarField::Complex => write!(f, "complex"),
        }
    }
}

/// Numerical thresholds shared by every rank, feasibility, and support
/// decision in the crate.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Relative singular-value threshold: σ counts toward the rank iff
    /// σ > rank_rel · σ_max.
    pub rank_rel: f64,
    /// Absolute Frobenius/Euclidean residual bound for a weight vector to be
    /// accepted as an exact solution of Σ wᵢ φᵢφᵢ* = target.
    pub residual_abs: f64,
    /// Negativity slack: weights in [-nonneg_abs, 0] are clamped to zero,
    /// anything below is a genuine sign violation.
    pub nonneg_abs: f64,
    /// L∞ distance under which two weight vectors are identified.
    pub dedup_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rel: 1e-10,
            residual_abs: 1e-9,
            nonneg_abs: 1e-9,
            dedup_abs: 1e-8,
        }
    }
}

impl Tolerances {
    /// Checks positivity and that the residual bound is meaningful for the
    /// given ambient dimension.
    pub fn validate(&self, ambient_dim: usize) -> Result<()> {
        let all = [
            ("rank_rel", self.rank_rel),
            ("residual_abs", self.residual_abs),
            ("nonneg_abs", self.nonneg_abs),
            ("dedup_abs", self.dedup_abs),
        ];
        for (name, v) in all {
            if !(v > 0.0) {
                return Err(Error::Validation(format!(
                    "tolerance {name} must be strictly positive, got {v}"
                )));
            }
        }
        let floor = f64::EPSILON * ambient_dim as f64;
        if self.residual_abs < floor {
            return Err(Error::Validation(format!(
                "residual_abs = {} is below machine epsilon × D = {floor:e}",
                self.residual_abs
            )));
        }
        Ok(())
    }
}

/// A d×d Hermitian matrix. The Hermitian symmetry holds exactly (bit for
/// bit): every constructor mirrors the upper triangle and keeps the diagonal
/// real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Wraps an explicit matrix, rejecting anything that is not exactly
    /// Hermitian.
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "expected a nonempty square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let d = entries.nrows();
        for i in 0..d {
            for j in i..d {
                if entries[(i, j)] != entries[(j, i)].conj() {
                    return Err(Error::Validation(format!(
                        "matrix is not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        Ok(HermitianMatrix { entries })
    }

    pub fn identity(d: usize) -> Self {
        HermitianMatrix {
            entries: DMatrix::identity(d, d),
        }
    }

    pub fn zero(d: usize) -> Self {
        HermitianMatrix {
            entries: DMatrix::zeros(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Trace, which is real for Hermitian matrices.
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Scales by a real factor (complex factors would break hermiticity).
    pub fn scaled(&self, a: f64) -> Self {
        HermitianMatrix {
            entries: self.entries.map(|z| Complex64::new(a * z.re, a * z.im)),
        }
    }

    /// Adds `a · other` in place. Panics on dimension mismatch.
    pub fn add_scaled(&mut self, a: f64, other: &HermitianMatrix) {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in add_scaled");
        for (dst, src) in self.entries.iter_mut().zip(other.entries.iter()) {
            dst.re += a * src.re;
            dst.im += a * src.im;
        }
    }

    /// Frobenius distance to another Hermitian matrix of the same dimension.
    pub fn distance(&self, other: &HermitianMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in distance");
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// The rank-one matrix xx*. Hermitian exactly by construction; the zero
/// vector yields the zero matrix.
pub fn outer_product(x: &DVector<Complex64>) -> HermitianMatrix {
    let d = x.len();
    let mut entries = DMatrix::zeros(d, d);
    for i in 0..d {
        entries[(i, i)] = Complex64::new(x[i].norm_sqr(), 0.0);
        for j in (i + 1)..d {
            let e = x[i] * x[j].conj();
            entries[(i, j)] = e;
            entries[(j, i)] = e.conj();
        }
    }
    HermitianMatrix { entries }
}

/// Trace inner product ⟨S,T⟩ = Tr(ST), real for Hermitian arguments.
pub fn trace_inner(s: &HermitianMatrix, t: &HermitianMatrix) -> Result<f64> {
    if s.dim() != t.dim() {
        return Err(Error::Dimension(format!(
            "trace_inner: matrix dimensions {} and {} differ",
            s.dim(),
            t.dim()
        )));
    }
    // Tr(ST) = Σ_ij S_ij conj(T_ij); the imaginary parts cancel pairwise.
    let mut acc = 0.0;
    for (a, b) in s.entries.iter().zip(t.entries.iter()) {
        acc += a.re * b.re + a.im * b.im;
    }
    Ok(acc)
}

/// Isometric linear identification of the Hermitian (or symmetric) matrices
/// with ℝ^D.
///
/// Basis order: the d diagonal entries, then for each pair i < j in row-major
/// order the component √2·Re(S_ij) followed, in the complex case, by
/// √2·Im(S_ij). Under this basis dot(vec S, vec T) = Tr(ST).
#[derive(Debug, Clone, Copy)]
pub struct RealVectorization {
    d: usize,
    field: ScalarField,
}

impl RealVectorization {
    pub fn new(d: usize, field: ScalarField) -> Self {
        RealVectorization { d, field }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    /// The real dimension D of the image space.
    pub fn ambient_dim(&self) -> usize {
        self.field.ambient_dim(self.d)
    }

    pub fn vectorize(&self, s: &HermitianMatrix) -> Result<DVector<f64>> {
        if s.dim() != self.d {
            return Err(Error::Dimension(format!(
                "vectorize: matrix dimension {} does not match vectorization dimension {}",
                s.dim(),
                self.d
            )));
        }
        if self.field == ScalarField::Real {
            if let Some((i, j)) = first_imaginary_entry(s) {
                return Err(Error::Validation(format!(
                    "vectorize: entry ({i},{j}) has a nonzero imaginary part under the real field"
                )));
            }
        }
        let mut out = DVector::zeros(self.ambient_dim());
        let mut k = 0;
        for i in 0..self.d {
            out[k] = s.entry(i, i).re;
            k += 1;
        }
        for i in 0..self.d {
            for j in (i + 1)..self.d {
                let e = s.entry(i, j);
                out[k] = std::f64::consts::SQRT_2 * e.re;
                k += 1;
                if self.field == ScalarField::Complex {
                    out[k] = std::f64::consts::SQRT_2 * e.im;
                    k += 1;
                }
            }
        }
        debug_assert_eq!(k, self.ambient_dim());
        Ok(out)
    }

    pub fn devectorize(&self, u: &DVector<f64>) -> Result<HermitianMatrix> {
        let dd = self.ambient_dim();
        if u.len() != dd {
            return Err(Error::Dimension(format!(
                "devectorize: vector has length {}, expected D = {dd}",
                u.len()
            )));
        }
        let mut entries = DMatrix::zeros(self.d, self.d);
        let mut k = 0;
        for i in 0..self.d {
            entries[(i, i)] = Complex64::new(u[k], 0.0);
            k += 1;
        }
        let inv_sqrt2 = 1.0 / std::f64::consts::SQRT_2;
        for i in 0..self.d {
            for j in (i + 1)..self.d {
                let re = u[k] * inv_sqrt2;
                k += 1;
                let im = if self.field == ScalarField::Complex {
                    let im = u[k] * inv_sqrt2;
                    k += 1;
                    im
                } else {
                    0.0
                };
                let e = Complex64::new(re, im);
                entries[(i, j)] = e;
                entries[(j, i)] = e.conj();
            }
        }
        Ok(HermitianMatrix { entries })
    }
}

fn first_imaginary_entry(s: &HermitianMatrix) -> Option<(usize, usize)> {
    let d = s.dim();
    for i in 0..d {
        for j in 0..d {
            if s.entry(i, j).im != 0.0 {
                return Some((i, j));
            }
        }
    }
    None
}
