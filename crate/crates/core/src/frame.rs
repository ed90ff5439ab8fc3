//! Frames of vectors and their diagnostics: frame operator, tightness, spark,
//! complement property, outer-product independence, and random generation.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::hermitian::{
    outer_product, HermitianMatrix, RealVectorization, ScalarField, Tolerances,
};
use crate::linalg::{complex_matrix_rank, hermitian_eigen_bounds, numerical_rank};

/// Vectors with norm at or below this are rejected at frame construction.
pub const ZERO_VECTOR_TOL: f64 = 1e-12;

/// An ordered collection of nonzero vectors in ℝ^d or ℂ^d.
///
/// Spanning the whole space is not required at construction; whether the
/// collection is actually a frame is a queryable property (see [`tightness`]).
/// Real-field frames keep zero imaginary parts in every entry.
#[derive(Debug, Clone)]
pub struct Frame {
    d: usize,
    field: ScalarField,
    vectors: Vec<DVector<Complex64>>,
    labels: Option<Vec<String>>,
}

impl Frame {
    pub fn new(
        d: usize,
        field: ScalarField,
        vectors: Vec<DVector<Complex64>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidFrame("dimension d must be at least 1".into()));
        }
        if vectors.is_empty() {
            return Err(Error::InvalidFrame("a frame needs at least one vector".into()));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != d {
                return Err(Error::InvalidFrame(format!(
                    "vector {i} has {} entries, expected d = {d}",
                    v.len()
                )));
            }
            if v.norm() <= ZERO_VECTOR_TOL {
                return Err(Error::InvalidFrame(format!("vector {i} is (numerically) zero")));
            }
            if field == ScalarField::Real {
                if let Some(j) = (0..d).find(|&j| v[j].im != 0.0) {
                    return Err(Error::InvalidFrame(format!(
                        "vector {i} entry {j} has a nonzero imaginary part under the real field"
                    )));
                }
            }
        }
        if let Some(ref ls) = labels {
            if ls.len() != vectors.len() {
                return Err(Error::InvalidFrame(format!(
                    "{} labels for {} vectors",
                    ls.len(),
                    vectors.len()
                )));
            }
        }
        Ok(Frame { d, field, vectors, labels })
    }

    /// Real frame from rows of f64 entries.
    pub fn from_real(d: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let vectors = rows
            .iter()
            .map(|r| DVector::from_iterator(r.len(), r.iter().map(|&x| Complex64::new(x, 0.0))))
            .collect();
        Frame::new(d, ScalarField::Real, vectors, None)
    }

    /// Complex frame from rows of (re, im) pairs.
    pub fn from_complex_pairs(d: usize, rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let vectors = rows
            .iter()
            .map(|r| {
                DVector::from_iterator(r.len(), r.iter().map(|&(re, im)| Complex64::new(re, im)))
            })
            .collect();
        Frame::new(d, ScalarField::Complex, vectors, None)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn vectors(&self) -> &[DVector<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &DVector<Complex64> {
        &self.vectors[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The d×n matrix whose columns are the frame vectors.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_columns(&self.vectors)
    }

    /// Vectorization of the Hermitian space this frame's outer products live in.
    pub fn vectorization(&self) -> RealVectorization {
        RealVectorization::new(self.d, self.field)
    }

    /// Real dimension D of that space: d² complex, d(d+1)/2 real.
    pub fn ambient_dim(&self) -> usize {
        self.field.ambient_dim(self.d)
    }

    /// The subframe indexed by `indices` (order preserved, labels carried over).
    pub fn subframe(&self, indices: &[usize]) -> Frame {
        let vectors = indices.iter().map(|&i| self.vectors[i].clone()).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|ls| indices.iter().map(|&i| ls[i].clone()).collect());
        Frame { d: self.d, field: self.field, vectors, labels }
    }

    /// vec(φᵢφᵢ*) for every vector, in order.
    pub fn outer_product_columns(&self) -> Vec<DVector<f64>> {
        let v = self.vectorization();
        self.vectors
            .iter()
            .map(|x| v.vectorize(&outer_product(x)).expect("frame vectors match their vectorization"))
            .collect()
    }
}

/// Frame bounds and the flags derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightnessInfo {
    pub is_frame: bool,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_tight: bool,
    pub is_parseval: bool,
}

/// S = Σ φᵢφᵢ*, positive semidefinite; positive definite iff the vectors span.
pub fn frame_operator(f: &Frame) -> HermitianMatrix {
    let mut s = HermitianMatrix::zero(f.d());
    for v in f.vectors() {
        s.add_scaled(1.0, &outer_product(v));
    }
    s
}

/// Optimal frame bounds A, B (extreme eigenvalues of the frame operator) and
/// the tight/Parseval flags at the given tolerances.
pub fn tightness(f: &Frame, tol: &Tolerances) -> TightnessInfo {
    let (a, b) = hermitian_eigen_bounds(&frame_operator(f));
    let is_frame = a > tol.rank_rel * b.max(0.0);
    let is_tight = (a - b).abs() <= tol.residual_abs * b.max(1.0);
    let is_parseval = is_tight && (a - 1.0).abs() <= tol.residual_abs;
    TightnessInfo { is_frame, lower_bound: a, upper_bound: b, is_tight, is_parseval }
}

/// Whether {φᵢφᵢ*} is linearly independent in the Hermitian space. Always
/// false when n exceeds the ambient dimension D.
pub fn outer_products_independent(f: &Frame, tol: &Tolerances) -> bool {
    if f.n() > f.ambient_dim() {
        return false;
    }
    numerical_rank(&f.outer_product_columns(), tol) == f.n()
}

/// Ceiling on exhaustive subset searches (spark, complement property, vertex
/// enumeration), with an override for callers who accept the cost.
#[derive(Debug, Clone, Copy)]
pub struct SubsetGuard {
    pub max_n: usize,
    pub force: bool,
}

impl Default for SubsetGuard {
    fn default() -> Self {
        SubsetGuard { max_n: 24, force: false }
    }
}

impl SubsetGuard {
    pub fn permit(&self, n: usize) -> Result<()> {
        if n > self.max_n && !self.force {
            Err(Error::ExponentialGuard { n, max_n: self.max_n })
        } else {
            Ok(())
        }
    }
}

/// Size of the smallest subset on which `subset_rank` drops below the subset
/// size. Subsets larger than `cap` (the ambient rank bound) are dependent
/// without checking. Returns n + 1 when no dependent subset exists.
fn smallest_dependent_subset(
    n: usize,
    cap: usize,
    mut subset_rank: impl FnMut(&[usize]) -> usize,
) -> usize {
    for size in 1..=n.min(cap + 1) {
        if size > cap {
            return size;
        }
        for subset in (0..n).combinations(size) {
            if subset_rank(&subset) < size {
                return size;
            }
        }
    }
    n + 1
}

/// Size of the smallest linearly dependent subset of the frame vectors, by
/// exhaustive search in increasing subset size. Returns n + 1 when every
/// subset is independent (only possible for n ≤ d).
pub fn spark(f: &Frame, guard: &SubsetGuard, tol: &Tolerances) -> Result<usize> {
    guard.permit(f.n())?;
    let m = f.matrix();
    Ok(smallest_dependent_subset(f.n(), f.d(), |subset| {
        complex_matrix_rank(&m.select_columns(subset.iter()), tol.rank_rel)
    }))
}

/// True iff spark = d + 1, i.e. every subset of d vectors spans. Requires
/// n ≥ d; checked directly on the d-subsets so smaller subsets are skipped.
pub fn is_full_spark(f: &Frame, guard: &SubsetGuard, tol: &Tolerances) -> Result<bool> {
    guard.permit(f.n())?;
    let (n, d) = (f.n(), f.d());
    if n < d {
        return Ok(false);
    }
    let m = f.matrix();
    for subset in (0..n).combinations(d) {
        if complex_matrix_rank(&m.select_columns(subset.iter()), tol.rank_rel) < d {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Spark of the vectorized outer products {vec(φᵢφᵢ*)}, same sentinel
/// convention as [`spark`].
pub fn outer_spark(f: &Frame, guard: &SubsetGuard, tol: &Tolerances) -> Result<usize> {
    guard.permit(f.n())?;
    let cols = f.outer_product_columns();
    Ok(smallest_dependent_subset(f.n(), f.ambient_dim(), |subset| {
        let picked: Vec<DVector<f64>> = subset.iter().map(|&i| cols[i].clone()).collect();
        numerical_rank(&picked, tol)
    }))
}

/// True iff for every index subset I, the vectors in I or those in its
/// complement span the whole space. Checked over all 2^(n-1) partitions.
pub fn complement_property(f: &Frame, guard: &SubsetGuard, tol: &Tolerances) -> Result<bool> {
    let n = f.n();
    guard.permit(n)?;
    let d = f.d();
    let m = f.matrix();
    let spans = |subset: &[usize]| {
        subset.len() >= d && complex_matrix_rank(&m.select_columns(subset.iter()), tol.rank_rel) == d
    };
    // Pin index 0 to the first side so each partition (I, I^c) appears once.
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut left = vec![0usize];
        let mut right = Vec::new();
        for i in 1..n {
            if mask & (1 << (i - 1)) != 0 {
                left.push(i);
            } else {
                right.push(i);
            }
        }
        if !spans(&left) && !spans(&right) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Seeded Gaussian frame: every entry (real and imaginary part independently
/// in the complex case) is drawn i.i.d. standard normal from a ChaCha stream,
/// so a fixed seed always reproduces the same frame. `unit_norm` rescales each
/// vector to norm 1 after drawing.
pub fn random_frame(d: usize, n: usize, field: ScalarField, seed: u64, unit_norm: bool) -> Frame {
    assert!(d >= 1 && n >= 1, "random_frame needs d >= 1 and n >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v = DVector::<Complex64>::zeros(d);
        for i in 0..d {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = match field {
                ScalarField::Complex => rng.sample(StandardNormal),
                ScalarField::Real => 0.0,
            };
            v[i] = Complex64::new(re, im);
        }
        if unit_norm {
            let norm = v.norm();
            v /= Complex64::new(norm, 0.0);
        }
        vectors.push(v);
    }
    Frame::new(d, field, vectors, None).expect("Gaussian vectors are nonzero")
}

/// Rescales every vector to unit norm, returning the normalized frame and the
/// original norms. A weight vector w is a scaling of the normalized frame iff
/// (wᵢ / normsᵢ²)ᵢ is a scaling of the original.
pub fn normalize_frame(f: &Frame) -> (Frame, Vec<f64>) {
    let mut norms = Vec::with_capacity(f.n());
    let vectors = f
        .vectors()
        .iter()
        .map(|v| {
            let norm = v.norm();
            norms.push(norm);
            v / Complex64::new(norm, 0.0)
        })
        .collect();
    let unit = Frame {
        d: f.d,
        field: f.field,
        vectors,
        labels: f.labels.clone(),
    };
    (unit, norms)
}
