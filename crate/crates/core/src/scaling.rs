//! Scaling analysis: the vectorized scaling operator, the unique-scaling
//! solve, polytope vertex enumeration (minimal scalings), Carathéodory
//! reduction, and convex decomposition of scalings.
//!
//! A weight vector w ≥ 0 is a scaling of {φᵢ} when Σ wᵢ φᵢφᵢ* = I. For
//! unit-norm frames the set 𝒫 = {w ≥ 0 : Σ wᵢ φᵢφᵢ* = (1/d)·I} is a bounded
//! polytope (its points sum to 1); w ∈ 𝒫 iff d·w is a scaling. Vertices of 𝒫
//! are exactly the minimal scalings, and they coincide with the basic feasible
//! solutions: supports whose outer products are linearly independent. The
//! enumeration below searches those supports directly.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::frame::{normalize_frame, outer_products_independent, Frame, SubsetGuard};
use crate::hermitian::{outer_product, HermitianMatrix, Tolerances};
use crate::linalg::{least_squares, nonneg_least_squares, real_matrix_rank};

/// Acceptance threshold for convex decompositions (∞-norm reconstruction
/// error and coefficient-sum defect).
pub const DECOMPOSITION_TOL: f64 = 1e-8;

/// Allowed defect of the weight sum of a polytope point (the sum is 1 in
/// exact arithmetic).
pub const POLYTOPE_SUM_TOL: f64 = 1e-8;

/// The scaling operator w ↦ Σ wᵢ φᵢφᵢ* after vectorization: a D×n real
/// matrix whose column i is vec(φᵢφᵢ*), together with the target vec(I_d).
#[derive(Debug, Clone)]
pub struct ScalingMatrix {
    d: usize,
    ambient_dim: usize,
    n: usize,
    columns: DMatrix<f64>,
    target: DVector<f64>,
}

pub fn build_scaling_matrix(f: &Frame) -> ScalingMatrix {
    let v = f.vectorization();
    let columns = DMatrix::from_columns(&f.outer_product_columns());
    let target = v
        .vectorize(&HermitianMatrix::identity(f.d()))
        .expect("identity matches its own vectorization");
    ScalingMatrix {
        d: f.d(),
        ambient_dim: v.ambient_dim(),
        n: f.n(),
        columns,
        target,
    }
}

impl ScalingMatrix {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &DMatrix<f64> {
        &self.columns
    }

    /// vec(I_d), the right-hand side of the scaling system.
    pub fn target(&self) -> &DVector<f64> {
        &self.target
    }

    /// vec((1/d)·I_d), the right-hand side of the polytope system.
    pub fn polytope_target(&self) -> DVector<f64> {
        &self.target / self.d as f64
    }

    /// 𝒜w for an arbitrary weight vector.
    pub fn apply(&self, weights: &[f64]) -> DVector<f64> {
        assert_eq!(weights.len(), self.n, "weight count must match column count");
        &self.columns * DVector::from_column_slice(weights)
    }

    pub fn rank(&self, tol: &Tolerances) -> usize {
        real_matrix_rank(&self.columns, tol.rank_rel)
    }
}

/// What a weight vector claims to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingKind {
    /// Σ wᵢ φᵢφᵢ* = I within tolerance.
    ExactScaling,
    /// Σ wᵢ φᵢφᵢ* = (1/d)·I within tolerance and Σ wᵢ = 1 (unit-norm frames).
    PolytopePoint,
}

/// A validated nonnegative weight vector. Construction verifies the claimed
/// kind against the frame by direct Hermitian summation and clamps weights in
/// [-nonneg_abs, 0] to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingVector {
    weights: Vec<f64>,
    kind: ScalingKind,
}

impl ScalingVector {
    pub fn exact_scaling(f: &Frame, weights: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        let weights = validate_weights(f, weights, &HermitianMatrix::identity(f.d()), tol)?;
        Ok(ScalingVector { weights, kind: ScalingKind::ExactScaling })
    }

    /// A point of the polytope of a unit-norm frame.
    pub fn polytope_point(unit: &Frame, weights: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        let target = HermitianMatrix::identity(unit.d()).scaled(1.0 / unit.d() as f64);
        let weights = validate_weights(unit, weights, &target, tol)?;
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > POLYTOPE_SUM_TOL {
            return Err(Error::Validation(format!(
                "polytope point weights sum to {sum}, expected 1"
            )));
        }
        Ok(ScalingVector { weights, kind: ScalingKind::PolytopePoint })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> ScalingKind {
        self.kind
    }

    /// Indices with weight above the support threshold.
    pub fn support(&self, tol: &Tolerances) -> Vec<usize> {
        support_of(&self.weights, tol)
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

fn support_of(weights: &[f64], tol: &Tolerances) -> Vec<usize> {
    (0..weights.len()).filter(|&i| weights[i] > tol.nonneg_abs).collect()
}

fn validate_weights(
    f: &Frame,
    mut weights: Vec<f64>,
    target: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    if weights.len() != f.n() {
        return Err(Error::Validation(format!(
            "{} weights for {} vectors",
            weights.len(),
            f.n()
        )));
    }
    let min = weights.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -tol.nonneg_abs {
        return Err(Error::Validation(format!("weight {min} is negative beyond tolerance")));
    }
    for w in &mut weights {
        if *w < 0.0 {
            *w = 0.0;
        }
    }
    let residual = weighted_sum_residual(f, &weights, target);
    if residual > tol.residual_abs {
        return Err(Error::Validation(format!(
            "residual {residual:.3e} exceeds tolerance {:.3e}",
            tol.residual_abs
        )));
    }
    Ok(weights)
}

/// ‖Σ wᵢ φᵢφᵢ* − target‖_F by direct Hermitian summation. This route never
/// touches the vectorized system, so it independently checks anything the
/// least-squares path produced.
fn weighted_sum_residual(f: &Frame, weights: &[f64], target: &HermitianMatrix) -> f64 {
    let mut sum = HermitianMatrix::zero(f.d());
    for (w, v) in weights.iter().zip(f.vectors()) {
        sum.add_scaled(*w, &outer_product(v));
    }
    sum.distance(target)
}

/// Residual ‖Σ wᵢ φᵢφᵢ* − I‖_F and whether `weights` passes as a scaling
/// (residual within tolerance, no weight below -nonneg_abs).
pub fn verify_scaling(f: &Frame, weights: &[f64], tol: &Tolerances) -> (f64, bool) {
    assert_eq!(weights.len(), f.n(), "weight count must match frame size");
    let residual = weighted_sum_residual(f, weights, &HermitianMatrix::identity(f.d()));
    let min = weights.iter().cloned().fold(f64::INFINITY, f64::min);
    (residual, residual <= tol.residual_abs && min >= -tol.nonneg_abs)
}

/// How a scalability question was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingStatus {
    NotScalable,
    UniqueScaling,
    PolytopeOfScalings,
}

impl ScalingStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScalingStatus::NotScalable => "NotScalable",
            ScalingStatus::UniqueScaling => "UniqueScaling",
            ScalingStatus::PolytopeOfScalings => "PolytopeOfScalings",
        }
    }
}

/// Numbers recorded while deciding scalability.
#[derive(Debug, Clone, Default)]
pub struct ScalingDiagnostics {
    /// Independence flag that routed the decision.
    pub outer_products_independent: bool,
    /// Residual of the unique-route least-squares solve, when that route ran.
    pub solve_residual: Option<f64>,
    /// Smallest unclamped weight of that solve.
    pub min_weight: Option<f64>,
    /// Direct-summation residual of the returned witness.
    pub witness_residual: Option<f64>,
}

/// Verdict plus witnesses for one frame.
#[derive(Debug, Clone)]
pub struct ScalingOutcome {
    pub status: ScalingStatus,
    /// A valid scaling in the original frame's coordinates, when one exists.
    pub scaling: Option<ScalingVector>,
    /// The scaling polytope of the normalized frame (dependent route only).
    pub polytope: Option<ScalingPolytope>,
    pub diagnostics: ScalingDiagnostics,
}

/// All minimal scalings of a unit-norm frame, as vertices of the polytope 𝒫.
/// Vertex weights are polytope points (they sum to 1); d·w is the scaling.
#[derive(Debug, Clone)]
pub struct ScalingPolytope {
    pub n: usize,
    pub d: usize,
    pub vertices: Vec<ScalingVector>,
    pub feasible: bool,
}

impl ScalingPolytope {
    /// Translates a vertex into a scaling of `original` (the frame the
    /// polytope was computed for, prior to normalization):
    /// wᵢ = d·vᵢ/‖φᵢ‖².
    pub fn scaling_weights(&self, original: &Frame, vertex: &ScalingVector) -> Result<Vec<f64>> {
        if original.n() != self.n || vertex.weights().len() != self.n {
            return Err(Error::Dimension(format!(
                "polytope over {} vectors does not match frame/vertex",
                self.n
            )));
        }
        let (_, norms) = normalize_frame(original);
        Ok(vertex
            .weights()
            .iter()
            .zip(&norms)
            .map(|(&v, &s)| self.d as f64 * v / (s * s))
            .collect())
    }
}

/// Solves 𝒜w = vec(I_d) on a frame with linearly independent outer products,
/// where the system has at most one solution. Not scalable when the system is
/// inconsistent or the solution has a weight below -nonneg_abs.
pub fn solve_unique_scaling(f: &Frame, tol: &Tolerances) -> Result<ScalingOutcome> {
    tol.validate(f.ambient_dim())?;
    if !outer_products_independent(f, tol) {
        return Err(Error::Routing);
    }
    let sm = build_scaling_matrix(f);
    let (w, residual) = least_squares(sm.columns(), sm.target(), tol);
    let min_weight = w.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut diagnostics = ScalingDiagnostics {
        outer_products_independent: true,
        solve_residual: Some(residual),
        min_weight: Some(min_weight),
        witness_residual: None,
    };
    if residual > tol.residual_abs || min_weight < -tol.nonneg_abs {
        return Ok(ScalingOutcome {
            status: ScalingStatus::NotScalable,
            scaling: None,
            polytope: None,
            diagnostics,
        });
    }
    let weights: Vec<f64> = w.iter().map(|&x| x.max(0.0)).collect();
    diagnostics.witness_residual = Some(verify_scaling(f, &weights, tol).0);
    let scaling = ScalingVector::exact_scaling(f, weights, tol)?;
    Ok(ScalingOutcome {
        status: ScalingStatus::UniqueScaling,
        scaling: Some(scaling),
        polytope: None,
        diagnostics,
    })
}

fn is_subset_of(smaller: &[usize], larger: &[usize]) -> bool {
    // Both sorted ascending.
    let mut it = larger.iter();
    smaller.iter().all(|x| it.any(|y| y == x))
}

fn linf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Enumerates the vertices of 𝒫 (the minimal scalings) by searching supports
/// in increasing cardinality. The frame is normalized internally; vertices are
/// polytope points of the normalized frame.
///
/// A support is accepted when its outer products are linearly independent and
/// the restricted system 𝒜_I w = vec((1/d)·I) has an exact solution with every
/// weight strictly above nonneg_abs. Supersets of accepted supports are
/// skipped (a vertex support is a minimal scalable support), and duplicates
/// within dedup_abs keep the lexicographically smallest support.
pub fn enumerate_minimal_scalings(
    f: &Frame,
    tol: &Tolerances,
    guard: &SubsetGuard,
) -> Result<ScalingPolytope> {
    let n = f.n();
    guard.permit(n)?;
    tol.validate(f.ambient_dim())?;
    let (unit, _) = normalize_frame(f);
    let sm = build_scaling_matrix(&unit);
    let target = sm.polytope_target();
    // A vertex support spans (at least d vectors) and indexes independent
    // columns (at most rank(𝒜) of them).
    let cap = sm.rank(tol).min(n);
    let mut accepted: Vec<(Vec<usize>, Vec<f64>)> = Vec::new();
    for size in f.d()..=cap {
        for subset in (0..n).combinations(size) {
            if accepted.iter().any(|(sup, _)| is_subset_of(sup, &subset)) {
                continue;
            }
            let sub = sm.columns().select_columns(subset.iter());
            if real_matrix_rank(&sub, tol.rank_rel) < size {
                continue;
            }
            let (w_sub, residual) = least_squares(&sub, &target, tol);
            if residual > tol.residual_abs {
                continue;
            }
            if !w_sub.iter().all(|&w| w > tol.nonneg_abs) {
                continue;
            }
            let mut full = vec![0.0; n];
            for (k, &i) in subset.iter().enumerate() {
                full[i] = w_sub[k];
            }
            if accepted.iter().any(|(_, fw)| linf_dist(fw, &full) <= tol.dedup_abs) {
                continue;
            }
            accepted.push((subset, full));
        }
    }
    accepted.sort_by(|a, b| a.0.cmp(&b.0));
    let vertices = accepted
        .into_iter()
        .map(|(_, weights)| ScalingVector::polytope_point(&unit, weights, tol))
        .collect::<Result<Vec<_>>>()?;
    let feasible = !vertices.is_empty();
    Ok(ScalingPolytope { n, d: f.d(), vertices, feasible })
}

/// Decides scalability: the unique-solve route when the outer products are
/// independent, vertex enumeration otherwise (𝒫 is bounded, so it is nonempty
/// iff it has a vertex). The witness is always expressed in the original
/// frame's coordinates.
pub fn scalability(f: &Frame, tol: &Tolerances, guard: &SubsetGuard) -> Result<ScalingOutcome> {
    tol.validate(f.ambient_dim())?;
    if outer_products_independent(f, tol) {
        return solve_unique_scaling(f, tol);
    }
    let polytope = enumerate_minimal_scalings(f, tol, guard)?;
    let mut diagnostics = ScalingDiagnostics::default();
    match polytope.vertices.first() {
        Some(first) => {
            let witness_weights = polytope.scaling_weights(f, first)?;
            diagnostics.witness_residual = Some(verify_scaling(f, &witness_weights, tol).0);
            let scaling = ScalingVector::exact_scaling(f, witness_weights, tol)?;
            Ok(ScalingOutcome {
                status: ScalingStatus::PolytopeOfScalings,
                scaling: Some(scaling),
                polytope: Some(polytope),
                diagnostics,
            })
        }
        None => Ok(ScalingOutcome {
            status: ScalingStatus::NotScalable,
            scaling: None,
            polytope: Some(polytope),
            diagnostics,
        }),
    }
}

/// Scalability verdict plus a witness scaling when one exists.
pub fn is_scalable(
    f: &Frame,
    tol: &Tolerances,
    guard: &SubsetGuard,
) -> Result<(bool, Option<ScalingVector>)> {
    let outcome = scalability(f, tol, guard)?;
    Ok((outcome.scaling.is_some(), outcome.scaling))
}

/// True iff no proper subset of supp(w) indexes a scalable subframe. Subsets
/// smaller than d are skipped (they cannot span).
pub fn is_minimal_scaling(
    f: &Frame,
    w: &ScalingVector,
    tol: &Tolerances,
    guard: &SubsetGuard,
) -> Result<bool> {
    if w.weights().len() != f.n() {
        return Err(Error::Validation(format!(
            "{} weights for {} vectors",
            w.weights().len(),
            f.n()
        )));
    }
    let (residual, ok) = verify_scaling(f, w.weights(), tol);
    if !ok {
        return Err(Error::Validation(format!(
            "weights do not verify as a scaling (residual {residual:.3e})"
        )));
    }
    let support = w.support(tol);
    for size in f.d()..support.len() {
        for subset in support.iter().cloned().combinations(size) {
            if is_scalable(&f.subframe(&subset), tol, guard)?.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Pivots `weights` along null directions of its supported columns until the
/// supported columns are linearly independent, zeroing at least one weight per
/// step. In both uses the supported columns have equal inner product with the
/// functional that fixes the weight sum, so null moves preserve both
/// `columns·weights` and Σ weights. The direction of each move is chosen so
/// the smallest possible index leaves the support.
fn pivot_to_independent_support(columns: &DMatrix<f64>, weights: &mut [f64], tol: &Tolerances) {
    for _ in 0..=weights.len() {
        let support: Vec<usize> =
            (0..weights.len()).filter(|&i| weights[i] > tol.nonneg_abs).collect();
        for i in 0..weights.len() {
            if weights[i] <= tol.nonneg_abs {
                weights[i] = 0.0;
            }
        }
        if support.is_empty() {
            return;
        }
        let sub = columns.select_columns(support.iter());
        let k = support.len();
        // Pad with zero rows when the support is wider than the matrix is
        // tall, so the thin SVD carries all k right-singular vectors and a null
        // direction is always available.
        let padded = if k > sub.nrows() {
            let mut m = DMatrix::zeros(k, k);
            m.view_mut((0, 0), (sub.nrows(), k)).copy_from(&sub);
            m
        } else {
            sub
        };
        let svd = padded.svd(false, true);
        let v_t = svd.v_t.as_ref().expect("v_t requested");
        let mut argmin = 0;
        let mut sigma_min = f64::INFINITY;
        let mut sigma_max = 0.0f64;
        for (i, &s) in svd.singular_values.iter().enumerate() {
            if s < sigma_min {
                sigma_min = s;
                argmin = i;
            }
            sigma_max = sigma_max.max(s);
        }
        if sigma_min > tol.rank_rel * sigma_max {
            return;
        }
        let z = v_t.row(argmin).transpose();
        let step = |dir: f64| -> Option<(f64, usize)> {
            let mut best: Option<(f64, usize)> = None;
            for (k, &i) in support.iter().enumerate() {
                let dz = dir * z[k];
                if dz > 1e-14 {
                    let t = weights[i] / dz;
                    if best.is_none_or(|(tb, _)| t < tb) {
                        best = Some((t, i));
                    }
                }
            }
            best
        };
        let (dir, t) = match (step(1.0), step(-1.0)) {
            (Some((tp, ip)), Some((tm, im))) => {
                if ip <= im {
                    (1.0, tp)
                } else {
                    (-1.0, tm)
                }
            }
            (Some((tp, _)), None) => (1.0, tp),
            (None, Some((tm, _))) => (-1.0, tm),
            (None, None) => return,
        };
        for (k, &i) in support.iter().enumerate() {
            weights[i] -= t * dir * z[k];
            if weights[i] <= tol.nonneg_abs {
                weights[i] = 0.0;
            }
        }
    }
}

/// Shrinks a scaling onto a subset of its support whose outer products are
/// linearly independent, by pivoting along dependency directions until every
/// one is gone. A scaling already on an independent support comes back
/// unchanged.
pub fn caratheodory_reduce(f: &Frame, w: &ScalingVector, tol: &Tolerances) -> Result<ScalingVector> {
    if w.weights().len() != f.n() {
        return Err(Error::Validation(format!(
            "{} weights for {} vectors",
            w.weights().len(),
            f.n()
        )));
    }
    let (residual, ok) = verify_scaling(f, w.weights(), tol);
    if !ok {
        return Err(Error::Validation(format!(
            "weights do not verify as a scaling (residual {residual:.3e})"
        )));
    }
    let (unit, norms) = normalize_frame(f);
    let sm = build_scaling_matrix(&unit);
    let d = f.d() as f64;
    // Work in polytope coordinates of the normalized frame, where null moves
    // preserve the weight sum.
    let mut p: Vec<f64> = w
        .weights()
        .iter()
        .zip(&norms)
        .map(|(&wi, &s)| wi * s * s / d)
        .collect();
    pivot_to_independent_support(sm.columns(), &mut p, tol);
    let reduced: Vec<f64> = p.iter().zip(&norms).map(|(&pi, &s)| d * pi / (s * s)).collect();
    ScalingVector::exact_scaling(f, reduced, tol)
}

/// Writes a scaling as a convex combination of the polytope's vertices,
/// returning (vertex index, coefficient) pairs for the nonzero coefficients.
/// An initial nonnegative solve (NNLS) is thinned by Carathéodory pivoting in
/// coefficient space, so at most dim(𝒫)+1 coefficients survive.
pub fn decompose_scaling(
    f: &Frame,
    w: &ScalingVector,
    polytope: &ScalingPolytope,
    tol: &Tolerances,
) -> Result<Vec<(usize, f64)>> {
    if w.weights().len() != f.n() {
        return Err(Error::Validation(format!(
            "{} weights for {} vectors",
            w.weights().len(),
            f.n()
        )));
    }
    if polytope.n != f.n() {
        return Err(Error::Validation(format!(
            "polytope over {} vectors does not match frame with {}",
            polytope.n,
            f.n()
        )));
    }
    let (residual, ok) = verify_scaling(f, w.weights(), tol);
    if !ok {
        return Err(Error::Validation(format!(
            "weights do not verify as a scaling (residual {residual:.3e})"
        )));
    }
    if polytope.vertices.is_empty() {
        return Err(Error::Decomposition { residual: f64::INFINITY });
    }
    let (_, norms) = normalize_frame(f);
    let d = f.d() as f64;
    let p = DVector::from_iterator(
        f.n(),
        w.weights().iter().zip(&norms).map(|(&wi, &s)| wi * s * s / d),
    );
    let vertex_cols: Vec<DVector<f64>> = polytope
        .vertices
        .iter()
        .map(|v| DVector::from_column_slice(v.weights()))
        .collect();
    let vmat = DMatrix::from_columns(&vertex_cols);
    let (t, _) = nonneg_least_squares(&vmat, &p, tol);
    let mut coeffs: Vec<f64> = t.iter().cloned().collect();
    pivot_to_independent_support(&vmat, &mut coeffs, tol);
    let reconstruction = &vmat * DVector::from_column_slice(&coeffs);
    let linf = linf_dist(reconstruction.as_slice(), p.as_slice());
    let sum: f64 = coeffs.iter().sum();
    let defect = linf.max((sum - 1.0).abs());
    if defect > DECOMPOSITION_TOL {
        return Err(Error::Decomposition { residual: defect });
    }
    Ok(coeffs
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > tol.nonneg_abs)
        .map(|(k, &c)| (k, c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::fixtures::{basis_with_pair_sums, mercedes_benz, onb, two_orthonormal_bases};
    use crate::frame::random_frame;
    use crate::hermitian::ScalarField;
    use approx::assert_relative_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn guard() -> SubsetGuard {
        SubsetGuard::default()
    }

    #[test]
    fn scaling_matrix_of_onb_has_basis_columns() {
        let sm = build_scaling_matrix(&onb(2));
        assert_eq!(sm.ambient_dim(), 4);
        assert_eq!(sm.columns().column(0).as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(sm.columns().column(1).as_slice(), &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(sm.target().as_slice(), &[1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn scaling_matrix_column_norms_are_squared_vector_norms() {
        for seed in 0..10 {
            let f = random_frame(3, 6, ScalarField::Complex, seed, false);
            let sm = build_scaling_matrix(&f);
            for (i, v) in f.vectors().iter().enumerate() {
                assert_relative_eq!(
                    sm.columns().column(i).norm(),
                    v.norm_squared(),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn normalized_two_bases_columns_satisfy_the_known_dependency() {
        let (unit_frame, _) = normalize_frame(&two_orthonormal_bases());
        let sm = build_scaling_matrix(&unit_frame);
        // col3 + col4 = col1 + col2 after normalization.
        let lhs = sm.columns().column(2) + sm.columns().column(3);
        let rhs = sm.columns().column(0) + sm.columns().column(1);
        assert!((lhs - rhs).norm() <= 1e-14);
    }

    #[test]
    fn unique_scaling_of_onb_is_all_ones() {
        let outcome = solve_unique_scaling(&onb(3), &tol()).unwrap();
        assert_eq!(outcome.status, ScalingStatus::UniqueScaling);
        let w = outcome.scaling.unwrap();
        for &x in w.weights() {
            assert_relative_eq!(x, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn unique_scaling_of_basis_with_pair_sums() {
        let f = basis_with_pair_sums();
        let outcome = solve_unique_scaling(&f, &tol()).unwrap();
        assert_eq!(outcome.status, ScalingStatus::UniqueScaling);
        let w = outcome.scaling.unwrap();
        let expected = [1.0, 1.0, 1.0, 0.0, 0.0];
        for (got, want) in w.weights().iter().zip(expected) {
            assert_relative_eq!(*got, want, epsilon = 1e-10);
        }
        assert!(outcome.diagnostics.witness_residual.unwrap() <= 1e-10);
    }

    #[test]
    fn skewed_pair_is_not_scalable() {
        let s = 1.0 / 2f64.sqrt();
        let f = Frame::from_real(2, &[vec![1.0, 0.0], vec![s, s]]).unwrap();
        let outcome = solve_unique_scaling(&f, &tol()).unwrap();
        assert_eq!(outcome.status, ScalingStatus::NotScalable);
        assert!(outcome.scaling.is_none());
    }

    #[test]
    fn unique_solver_rejects_dependent_outer_products() {
        assert!(matches!(
            solve_unique_scaling(&two_orthonormal_bases(), &tol()),
            Err(Error::Routing)
        ));
    }

    #[test]
    fn mercedes_benz_scaling_is_two_thirds() {
        let (scalable, witness) = is_scalable(&mercedes_benz(), &tol(), &guard()).unwrap();
        assert!(scalable);
        for &x in witness.unwrap().weights() {
            assert_relative_eq!(x, 2.0 / 3.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn two_bases_polytope_has_exactly_two_vertices() {
        let (unit_frame, _) = normalize_frame(&two_orthonormal_bases());
        let p = enumerate_minimal_scalings(&unit_frame, &tol(), &guard()).unwrap();
        assert!(p.feasible);
        assert_eq!(p.vertices.len(), 2);
        let expected = [[0.5, 0.5, 0.0, 0.0], [0.0, 0.0, 0.5, 0.5]];
        for (vertex, want) in p.vertices.iter().zip(expected) {
            for (got, want) in vertex.weights().iter().zip(want) {
                assert_relative_eq!(*got, want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn onb_polytope_has_single_uniform_vertex() {
        for d in 1..=4 {
            let p = enumerate_minimal_scalings(&onb(d), &tol(), &guard()).unwrap();
            assert_eq!(p.vertices.len(), 1);
            for &x in p.vertices[0].weights() {
                assert_relative_eq!(x, 1.0 / d as f64, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn non_scalable_frame_yields_empty_polytope() {
        let s = 1.0 / 2f64.sqrt();
        let f = Frame::from_real(2, &[vec![1.0, 0.0], vec![s, s]]).unwrap();
        let p = enumerate_minimal_scalings(&f, &tol(), &guard()).unwrap();
        assert!(!p.feasible);
        assert!(p.vertices.is_empty());
        let outcome = scalability(&f, &tol(), &guard()).unwrap();
        assert_eq!(outcome.status, ScalingStatus::NotScalable);
    }

    #[test]
    fn two_bases_witness_transforms_back_through_norms() {
        let f = two_orthonormal_bases();
        let outcome = scalability(&f, &tol(), &guard()).unwrap();
        assert_eq!(outcome.status, ScalingStatus::PolytopeOfScalings);
        let w = outcome.scaling.unwrap();
        let expected = [1.0, 1.0, 0.0, 0.0];
        for (got, want) in w.weights().iter().zip(expected) {
            assert_relative_eq!(*got, want, epsilon = 1e-10);
        }
        let (residual, ok) = verify_scaling(&f, w.weights(), &tol());
        assert!(ok, "witness residual {residual}");
    }

    #[test]
    fn vertices_are_minimal_and_midpoint_is_not() {
        let (unit_frame, _) = normalize_frame(&two_orthonormal_bases());
        let p = enumerate_minimal_scalings(&unit_frame, &tol(), &guard()).unwrap();
        for vertex in &p.vertices {
            let weights: Vec<f64> = vertex.weights().iter().map(|&v| 2.0 * v).collect();
            let scaling = ScalingVector::exact_scaling(&unit_frame, weights, &tol()).unwrap();
            assert!(is_minimal_scaling(&unit_frame, &scaling, &tol(), &guard()).unwrap());
        }
        let midpoint = vec![0.5, 0.5, 0.5, 0.5];
        let scaling = ScalingVector::exact_scaling(&unit_frame, midpoint, &tol()).unwrap();
        assert!(!is_minimal_scaling(&unit_frame, &scaling, &tol(), &guard()).unwrap());
    }

    #[test]
    fn onb_all_ones_is_minimal() {
        let f = onb(3);
        let w = ScalingVector::exact_scaling(&f, vec![1.0; 3], &tol()).unwrap();
        assert!(is_minimal_scaling(&f, &w, &tol(), &guard()).unwrap());
    }

    #[test]
    fn caratheodory_leaves_independent_supports_unchanged() {
        let f = basis_with_pair_sums();
        let w = ScalingVector::exact_scaling(&f, vec![1.0, 1.0, 1.0, 0.0, 0.0], &tol()).unwrap();
        let reduced = caratheodory_reduce(&f, &w, &tol()).unwrap();
        for (a, b) in reduced.weights().iter().zip(w.weights()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-14);
        }
    }

    #[test]
    fn caratheodory_reduces_the_midpoint_scaling() {
        let (unit_frame, _) = normalize_frame(&two_orthonormal_bases());
        let w = ScalingVector::exact_scaling(&unit_frame, vec![0.5; 4], &tol()).unwrap();
        let reduced = caratheodory_reduce(&unit_frame, &w, &tol()).unwrap();
        let support = reduced.support(&tol());
        assert!(
            support == vec![0, 1] || support == vec![2, 3],
            "unexpected support {support:?}"
        );
        let (residual, ok) = verify_scaling(&unit_frame, reduced.weights(), &tol());
        assert!(ok, "reduced residual {residual}");
        // The support columns must now be independent.
        let cols = unit_frame.outer_product_columns();
        let picked: Vec<_> = support.iter().map(|&i| cols[i].clone()).collect();
        assert_eq!(crate::linalg::numerical_rank(&picked, &tol()), support.len());
    }

    #[test]
    fn decompose_vertex_is_trivial() {
        let (unit_frame, _) = normalize_frame(&two_orthonormal_bases());
        let p = enumerate_minimal_scalings(&unit_frame, &tol(), &guard()).unwrap();
        let weights: Vec<f64> = p.vertices[0].weights().iter().map(|&v| 2.0 * v).collect();
        let w = ScalingVector::exact_scaling(&unit_frame, weights, &tol()).unwrap();
        let combo = decompose_scaling(&unit_frame, &w, &p, &tol()).unwrap();
        assert_eq!(combo.len(), 1);
        assert_eq!(combo[0].0, 0);
        assert_relative_eq!(combo[0].1, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn decompose_midpoint_splits_evenly() {
        let (unit_frame, _) = normalize_frame(&two_orthonormal_bases());
        let p = enumerate_minimal_scalings(&unit_frame, &tol(), &guard()).unwrap();
        let w = ScalingVector::exact_scaling(&unit_frame, vec![0.5; 4], &tol()).unwrap();
        let combo = decompose_scaling(&unit_frame, &w, &p, &tol()).unwrap();
        assert_eq!(combo.len(), 2);
        for (_, c) in combo {
            assert_relative_eq!(c, 0.5, epsilon = 1e-9);
        }
    }

    #[test]
    fn routing_consistency_on_independent_frames() {
        // Independent outer products: the polytope has at most one point, and
        // it is the unique scaling divided by d.
        for f in [onb(2), onb(3), basis_with_pair_sums()] {
            let unique = solve_unique_scaling(&f, &tol()).unwrap();
            let p = enumerate_minimal_scalings(&f, &tol(), &guard()).unwrap();
            match unique.status {
                ScalingStatus::UniqueScaling => {
                    assert_eq!(p.vertices.len(), 1);
                    let w = unique.scaling.unwrap();
                    let d = f.d() as f64;
                    for (v, u) in p.vertices[0].weights().iter().zip(w.weights()) {
                        assert!((v - u / d).abs() <= 1e-9);
                    }
                }
                _ => assert!(p.vertices.is_empty()),
            }
        }
    }

    #[test]
    fn only_the_reciprocal_dimension_multiple_of_identity_is_reachable() {
        // For unit-norm frames, w ≥ 0 with Σw = 1 can reach λ·I only at λ = 1/d.
        let (unit_frame, _) = normalize_frame(&two_orthonormal_bases());
        let d = unit_frame.d() as f64;
        let sm = build_scaling_matrix(&unit_frame);
        let v = unit_frame.vectorization();
        for (factor, feasible) in [(0.9, false), (1.0, true), (1.1, false)] {
            let lambda = factor / d;
            let target_m = HermitianMatrix::identity(unit_frame.d()).scaled(lambda);
            let target = v.vectorize(&target_m).unwrap();
            // Augment with the Σw = 1 row.
            let mut aug = DMatrix::zeros(sm.ambient_dim() + 1, unit_frame.n());
            aug.view_mut((0, 0), (sm.ambient_dim(), unit_frame.n()))
                .copy_from(sm.columns());
            for j in 0..unit_frame.n() {
                aug[(sm.ambient_dim(), j)] = 1.0;
            }
            let mut rhs = DVector::zeros(sm.ambient_dim() + 1);
            rhs.view_mut((0, 0), (sm.ambient_dim(), 1)).copy_from(&target);
            rhs[sm.ambient_dim()] = 1.0;
            let (_, residual) = nonneg_least_squares(&aug, &rhs, &tol());
            assert_eq!(residual <= 1e-9, feasible, "factor {factor}, residual {residual}");
        }
    }

    #[test]
    fn scaling_vector_validation_rejects_garbage() {
        let f = onb(2);
        assert!(ScalingVector::exact_scaling(&f, vec![2.0, 2.0], &tol()).is_err());
        assert!(ScalingVector::exact_scaling(&f, vec![1.0], &tol()).is_err());
        assert!(ScalingVector::exact_scaling(&f, vec![-0.5, 1.0], &tol()).is_err());
        // A weight at -nonneg_abs/2 is clamped to zero, but then the residual
        // check fails because e1e1* is missing; both paths must reject.
        assert!(ScalingVector::exact_scaling(&f, vec![-4e-10, 1.0], &tol()).is_err());
        let w = ScalingVector::exact_scaling(&f, vec![1.0, 1.0], &tol()).unwrap();
        assert_eq!(w.kind(), ScalingKind::ExactScaling);
        assert_eq!(w.support(&tol()), vec![0, 1]);
    }

    #[test]
    fn verify_scaling_reports_magnitude_of_violation() {
        let f = onb(3);
        let (residual, ok) = verify_scaling(&f, &[2.0, 2.0, 2.0], &tol());
        assert!(!ok);
        assert_relative_eq!(residual, 3f64.sqrt(), epsilon = 1e-12);
        let (residual, ok) = verify_scaling(&f, &[1.0, 1.0, 1.0], &tol());
        assert!(ok);
        assert!(residual <= 1e-15);
    }

    #[test]
    fn enumerate_respects_the_guard() {
        let f = random_frame(2, 6, ScalarField::Complex, 5, true);
        let strict = SubsetGuard { max_n: 5, force: false };
        assert!(matches!(
            enumerate_minimal_scalings(&f, &tol(), &strict),
            Err(Error::ExponentialGuard { .. })
        ));
    }
}
