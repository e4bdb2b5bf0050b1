//! Unitary representations of finite groups: the regular representation, a
//! seeded decomposition into a complete basis of irreducibles, characters,
//! equivalence tests, direct sums, conjugates, and the SU(2) criterion for
//! two-dimensional representations.

use crate::group::{Group, GroupFunction};
use crate::matrix::{self, CMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

/// Tolerance for the structural invariants of a [`UnitaryRep`]: identity,
/// homomorphism, and unitarity defects.
pub const REP_TOL: f64 = 1e-9;

/// Tolerance for character-level comparisons: irreducibility, equivalence,
/// Schur orthogonality, and the SU(2) determinant criterion.
pub const CHAR_TOL: f64 = 1e-8;

/// Relative eigenvalue gap below which adjacent eigenvalues of an averaged
/// operator are treated as one cluster (one invariant subspace).
const CLUSTER_RELATIVE_GAP: f64 = 1e-6;

/// Reseed budget before the decomposition gives up.
const DECOMPOSE_RETRIES: u32 = 5;

/// Fresh-draw budget for a reducible block whose averaged operator failed to
/// split it (the random Hermitian seed was accidentally too symmetric).
const SPLIT_REDRAWS: u32 = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReprError {
    #[error("representations live on different groups")]
    GroupMismatch,
    #[error("operation requires dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("irreducible decomposition failed after {attempts} attempts")]
    DecompositionFailed { attempts: u32 },
    #[error("representation does not land in SU(2) up to phase")]
    NotSu2Eligible,
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("invalid irrep basis: {0}")]
    InvalidBasis(String),
}

/// A unitary representation: one `dim x dim` unitary matrix per group
/// element, multiplicative over the Cayley table.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    group: Arc<Group>,
    dim: usize,
    matrices: Vec<CMatrix>,
}

impl UnitaryRep {
    /// Builds a representation and verifies all invariants at [`REP_TOL`]:
    /// the identity element maps to I, every matrix is unitary, and the
    /// homomorphism property holds for every pair of elements.
    pub fn new(group: Arc<Group>, matrices: Vec<CMatrix>) -> Result<Self, ReprError> {
        let rep = Self::from_matrices_unchecked(group, matrices)?;
        rep.validate(REP_TOL)?;
        Ok(rep)
    }

    /// Shape checks only — for constructions whose invariants hold by
    /// construction (permutation matrices, block sums) or are validated later.
    pub(crate) fn from_matrices_unchecked(
        group: Arc<Group>,
        matrices: Vec<CMatrix>,
    ) -> Result<Self, ReprError> {
        if matrices.len() != group.order() {
            return Err(ReprError::InvalidRepresentation(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        let dim = matrices[0].rows();
        if dim == 0 {
            return Err(ReprError::InvalidRepresentation(
                "zero-dimensional representation".into(),
            ));
        }
        for m in &matrices {
            if m.rows() != dim || m.cols() != dim {
                return Err(ReprError::InvalidRepresentation(format!(
                    "matrix is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self {
            group,
            dim,
            matrices,
        })
    }

    /// Checks identity, unitarity, and the full homomorphism table at `tol`.
    pub fn validate(&self, tol: f64) -> Result<(), ReprError> {
        let e = self.group.identity();
        let id = CMatrix::identity(self.dim);
        let d = self.matrices[e].distance(&id);
        if d > tol {
            return Err(ReprError::InvalidRepresentation(format!(
                "identity element maps to a matrix {d:.3e} away from I"
            )));
        }
        for (x, m) in self.matrices.iter().enumerate() {
            if !matrix::is_unitary(m, tol) {
                return Err(ReprError::InvalidRepresentation(format!(
                    "matrix for element {x} is not unitary at {tol:.1e}"
                )));
            }
        }
        for x in self.group.elements() {
            for y in self.group.elements() {
                let prod = self.matrices[x].mul(&self.matrices[y]);
                let defect = prod.distance(&self.matrices[self.group.mul(x, y)]);
                if defect > tol {
                    return Err(ReprError::InvalidRepresentation(format!(
                        "homomorphism fails at ({x},{y}) with defect {defect:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The matrix for element `x`.
    pub fn matrix(&self, x: usize) -> &CMatrix {
        &self.matrices[x]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// The character `x -> tr(pi(x))`, a class function with `chi(e) = dim`.
    pub fn character(&self) -> GroupFunction {
        GroupFunction::from_fn(self.group.clone(), |x| self.matrices[x].trace())
    }

    /// Irreducibility via the character norm: `(1/n) sum_x |chi(x)|^2 = 1`.
    pub fn is_irreducible(&self) -> bool {
        let n = self.group.order() as f64;
        let norm_sq: f64 = self
            .matrices
            .iter()
            .map(|m| m.trace().norm_sqr())
            .sum::<f64>()
            / n;
        (norm_sq - 1.0).abs() <= CHAR_TOL
    }

    /// Equivalence of completely reducible representations, decided by
    /// character equality.
    pub fn are_equivalent(&self, other: &UnitaryRep) -> Result<bool, ReprError> {
        if !self.same_group(other) {
            return Err(ReprError::GroupMismatch);
        }
        let dist = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| (a.trace() - b.trace()).norm())
            .fold(0.0, f64::max);
        Ok(dist <= CHAR_TOL)
    }

    /// Block-diagonal sum; characters add.
    pub fn direct_sum(&self, other: &UnitaryRep) -> Result<UnitaryRep, ReprError> {
        if !self.same_group(other) {
            return Err(ReprError::GroupMismatch);
        }
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Self::from_matrices_unchecked(self.group.clone(), matrices)
    }

    /// Entrywise complex conjugate; the character conjugates.
    pub fn conjugate_rep(&self) -> UnitaryRep {
        let matrices = self.matrices.iter().map(CMatrix::conj).collect();
        Self::from_matrices_unchecked(self.group.clone(), matrices)
            .expect("conjugate preserves shape")
    }

    /// Whether a two-dimensional representation is conjugate into SU(2):
    /// true iff its determinant character is trivial. The determinant is
    /// basis-invariant, so no basis change is needed for the test itself.
    pub fn su2_eligible(&self) -> Result<bool, ReprError> {
        if self.dim != 2 {
            return Err(ReprError::WrongDimension {
                expected: 2,
                got: self.dim,
            });
        }
        Ok(self
            .matrices
            .iter()
            .all(|m| (m.det() - Complex64::new(1.0, 0.0)).norm() <= CHAR_TOL))
    }

    /// Rescales each matrix of an eligible representation by the phase that
    /// makes its determinant exactly 1, and re-verifies the homomorphism.
    /// The determinants are already within [`CHAR_TOL`] of 1, so this is a
    /// numeric cleanup, not a basis change.
    pub fn su2_normalize(&self) -> Result<UnitaryRep, ReprError> {
        if !self.su2_eligible()? {
            return Err(ReprError::NotSu2Eligible);
        }
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let s = (Complex64::new(1.0, 0.0) / m.det()).sqrt();
                m.scale(s)
            })
            .collect();
        UnitaryRep::new(self.group.clone(), matrices)
    }

    fn same_group(&self, other: &UnitaryRep) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || self.group.same_structure(&other.group)
    }
}

/// The right regular representation `(R(y) f)(x) = f(x·y)` on the
/// n-dimensional space of functions on the group, as exact 0/1 permutation
/// matrices: `R(y)` sends the delta function at `z` to the one at `z·y^-1`.
pub fn regular_representation(group: &Arc<Group>) -> UnitaryRep {
    let n = group.order();
    let matrices = group
        .elements()
        .map(|y| {
            let mut m = CMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, group.mul(i, y))] = Complex64::new(1.0, 0.0);
            }
            m
        })
        .collect();
    UnitaryRep::from_matrices_unchecked(group.clone(), matrices)
        .expect("permutation matrices are square")
}

/// A complete list of pairwise-inequivalent irreducible unitary
/// representations: one representative per equivalence class, with
/// `sum(dim^2) = group order`.
#[derive(Debug, Clone)]
pub struct IrrepBasis {
    group: Arc<Group>,
    irreps: Vec<UnitaryRep>,
}

impl IrrepBasis {
    /// Validates a proposed basis: every member passes [`UnitaryRep::new`]'s
    /// invariants and is irreducible, members are pairwise inequivalent, the
    /// squared dimensions sum to the group order, the count equals the number
    /// of conjugacy classes, and Schur orthogonality of matrix coefficients
    /// holds at [`CHAR_TOL`].
    pub fn new(group: Arc<Group>, irreps: Vec<UnitaryRep>) -> Result<Self, ReprError> {
        for rep in &irreps {
            if !(Arc::ptr_eq(&rep.group, &group) || rep.group.same_structure(&group)) {
                return Err(ReprError::GroupMismatch);
            }
            rep.validate(REP_TOL)?;
            if !rep.is_irreducible() {
                return Err(ReprError::InvalidBasis(format!(
                    "member of dimension {} is reducible",
                    rep.dim
                )));
            }
        }
        let n = group.order();
        let dim_sq: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
        if dim_sq != n {
            return Err(ReprError::InvalidBasis(format!(
                "squared dimensions sum to {dim_sq}, group order is {n}"
            )));
        }
        let classes = group.conjugacy_classes().len();
        if irreps.len() != classes {
            return Err(ReprError::InvalidBasis(format!(
                "{} irreps for {} conjugacy classes",
                irreps.len(),
                classes
            )));
        }
        for i in 0..irreps.len() {
            for j in i + 1..irreps.len() {
                if irreps[i].are_equivalent(&irreps[j])? {
                    return Err(ReprError::InvalidBasis(format!(
                        "members {i} and {j} are equivalent"
                    )));
                }
            }
        }
        schur_orthogonality_check(&group, &irreps)?;
        Ok(Self { group, irreps })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn irreps(&self) -> &[UnitaryRep] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim).collect()
    }
}

/// Schur orthogonality: matrix coefficients of the basis are orthogonal
/// across inequivalent members and scale as `1/d` inside one member, under
/// the normalized inner product `(1/n) sum_x a(x) conj(b(x))`.
fn schur_orthogonality_check(group: &Group, irreps: &[UnitaryRep]) -> Result<(), ReprError> {
    let n = group.order();
    // Flatten every matrix coefficient into (rep, i, j) -> column of values.
    let mut coeffs: Vec<(usize, usize, usize, Vec<Complex64>)> = Vec::new();
    for (r, rep) in irreps.iter().enumerate() {
        for i in 0..rep.dim {
            for j in 0..rep.dim {
                let col = (0..n).map(|x| rep.matrices[x][(i, j)]).collect();
                coeffs.push((r, i, j, col));
            }
        }
    }
    for (a, &(ra, ia, ja, ref ca)) in coeffs.iter().enumerate() {
        for &(rb, ib, jb, ref cb) in &coeffs[a..] {
            let ip: Complex64 = ca
                .iter()
                .zip(cb)
                .map(|(x, y)| x * y.conj())
                .sum::<Complex64>()
                / n as f64;
            let expected = if ra == rb && ia == ib && ja == jb {
                1.0 / irreps[ra].dim as f64
            } else {
                0.0
            };
            if (ip - Complex64::new(expected, 0.0)).norm() > CHAR_TOL {
                return Err(ReprError::InvalidBasis(format!(
                    "Schur orthogonality fails between coefficients \
                     ({ra},{ia},{ja}) and ({rb},{ib},{jb}): got {ip}, expected {expected}"
                )));
            }
        }
    }
    Ok(())
}

/// Computes a complete irrep basis by decomposing the regular representation.
///
/// A seeded random Hermitian matrix is averaged over the group action to
/// produce an operator commuting with the representation; its eigenspaces are
/// invariant subspaces. Blocks are split recursively with fresh random draws
/// until every block has an irreducible character, then refined to machine
/// precision, deduplicated by character, canonically ordered (dimension, then
/// character values), and validated wholesale. Deterministic for a given
/// seed; on validation failure the procedure reseeds, up to 5 attempts.
pub fn decompose_irreps(group: &Arc<Group>, seed: u64) -> Result<IrrepBasis, ReprError> {
    for attempt in 0..DECOMPOSE_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_add(u64::from(attempt).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        let Some(blocks) = split_into_irreducible_blocks(group, &mut rng) else {
            continue;
        };
        let mut reps = Vec::new();
        let mut ok = true;
        for w in blocks {
            let Some(w) = refine_invariant_block(group, w) else {
                ok = false;
                break;
            };
            let matrices: Vec<CMatrix> = group
                .elements()
                .map(|y| w.adjoint().mul(&translate_rows(group, &w, y)))
                .collect();
            match UnitaryRep::from_matrices_unchecked(group.clone(), matrices) {
                Ok(rep) => reps.push(rep),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let mut unique: Vec<UnitaryRep> = Vec::new();
        for rep in reps {
            let dup = unique.iter().any(|u| {
                u.dim == rep.dim
                    && u.character().sup_distance(&rep.character()) <= CHAR_TOL
            });
            if !dup {
                unique.push(rep);
            }
        }
        sort_canonically(&mut unique);
        if let Ok(basis) = IrrepBasis::new(group.clone(), unique) {
            return Ok(basis);
        }
    }
    Err(ReprError::DecompositionFailed {
        attempts: DECOMPOSE_RETRIES,
    })
}

/// Canonical basis order: ascending dimension, then lexicographic on the
/// character values rounded to a 1e-9 grid. Characters are seed-independent,
/// so this ordering is too.
fn sort_canonically(reps: &mut [UnitaryRep]) {
    let key = |rep: &UnitaryRep| -> Vec<i64> {
        rep.matrices
            .iter()
            .flat_map(|m| {
                let t = m.trace();
                [(t.re * 1e9).round() as i64, (t.im * 1e9).round() as i64]
            })
            .collect()
    };
    reps.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| key(a).cmp(&key(b))));
}

/// `R(y) W` for the right regular action: row `i` of the result is row `i·y`
/// of `W`.
fn translate_rows(group: &Group, w: &CMatrix, y: usize) -> CMatrix {
    CMatrix::from_fn(w.rows(), w.cols(), |i, j| w[(group.mul(i, y), j)])
}

fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut h = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..dim {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// `(1/n) sum_x R(x) H R(x)^dagger` for the full space, using the permutation
/// structure directly: the conjugated matrix is just `H` with both indices
/// translated.
fn averaged_commutant_full(group: &Group, h: &CMatrix) -> CMatrix {
    let n = group.order();
    let inv_n = Complex64::new(1.0 / n as f64, 0.0);
    CMatrix::from_fn(n, n, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for x in 0..n {
            acc += h[(group.mul(i, x), group.mul(j, x))];
        }
        acc * inv_n
    })
}

/// `(1/n) sum_y rho(y) H rho(y)^dagger` for a restricted representation.
fn averaged_commutant_restricted(rhos: &[CMatrix], h: &CMatrix) -> CMatrix {
    let m = h.rows();
    let mut acc = CMatrix::zeros(m, m);
    for rho in rhos {
        acc = acc.add(&rho.mul(h).mul(&rho.adjoint()));
    }
    acc.scale(Complex64::new(1.0 / rhos.len() as f64, 0.0))
}

/// Groups ascending eigenvalues into clusters separated by more than
/// `CLUSTER_RELATIVE_GAP` relative to `max(1, |lambda|_max)`.
fn cluster_eigenvalues(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let scale = values
        .iter()
        .fold(1.0_f64, |acc, v| acc.max(v.abs()));
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..values.len() {
        if values[i] - values[i - 1] > CLUSTER_RELATIVE_GAP * scale {
            clusters.push(start..i);
            start = i;
        }
    }
    clusters.push(start..values.len());
    clusters
}

/// Splits the full function space into blocks whose restricted characters
/// have norm 1 (irreducible invariant subspaces), each an orthonormal-column
/// matrix. `None` means a reducible block refused to split within the redraw
/// budget — the caller reseeds.
fn split_into_irreducible_blocks(
    group: &Arc<Group>,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<CMatrix>> {
    let n = group.order();
    let mut pending = vec![CMatrix::identity(n)];
    let mut done = Vec::new();
    while let Some(w) = pending.pop() {
        let m = w.cols();
        if m == 1 {
            done.push(w);
            continue;
        }
        let full_space = m == n;
        let rhos: Option<Vec<CMatrix>> = if full_space {
            None
        } else {
            Some(
                group
                    .elements()
                    .map(|y| w.adjoint().mul(&translate_rows(group, &w, y)))
                    .collect(),
            )
        };
        let char_norm_sq = match &rhos {
            // The regular character is n at the identity and 0 elsewhere.
            None => n as f64,
            Some(rhos) => {
                rhos.iter().map(|r| r.trace().norm_sqr()).sum::<f64>() / n as f64
            }
        };
        if char_norm_sq < 1.5 {
            done.push(w);
            continue;
        }
        let mut split = false;
        for _ in 0..SPLIT_REDRAWS {
            let averaged = match &rhos {
                None => averaged_commutant_full(group, &random_hermitian(n, rng)),
                Some(rhos) => {
                    averaged_commutant_restricted(rhos, &random_hermitian(m, rng))
                }
            };
            let eig = matrix::hermitian_eig(&averaged).ok()?;
            let clusters = cluster_eigenvalues(&eig.values);
            if clusters.len() < 2 {
                continue;
            }
            for range in clusters {
                let cols = CMatrix::from_fn(m, range.len(), |i, j| {
                    eig.vectors[(i, range.start + j)]
                });
                pending.push(if full_space { cols } else { w.mul(&cols) });
            }
            split = true;
            break;
        }
        if !split {
            return None;
        }
    }
    Some(done)
}

/// Sharpens an approximately invariant block to machine precision by
/// averaging the action over the group: `W <- (1/n) sum_y R(y) W rho(y)^dag`
/// projects onto exact intertwiners, contracting the non-invariant component
/// quadratically. Two rounds, re-orthonormalizing between them; `None` if the
/// block loses rank (numeric degeneracy — caller reseeds).
fn refine_invariant_block(group: &Group, w: CMatrix) -> Option<CMatrix> {
    let n = group.order();
    let mut w = orthonormal_columns(&w)?;
    for _ in 0..2 {
        let m = w.cols();
        let mut acc = CMatrix::zeros(n, m);
        for y in group.elements() {
            let rw = translate_rows(group, &w, y);
            let rho = w.adjoint().mul(&rw);
            acc = acc.add(&rw.mul(&rho.adjoint()));
        }
        w = orthonormal_columns(&acc.scale(Complex64::new(1.0 / n as f64, 0.0)))?;
    }
    Some(w)
}

fn orthonormal_columns(w: &CMatrix) -> Option<CMatrix> {
    let cols: Vec<Vec<Complex64>> = (0..w.cols()).map(|j| w.column(j)).collect();
    let basis = matrix::orthonormalize(&cols, 1e-8);
    if basis.len() != cols.len() {
        return None;
    }
    Some(CMatrix::from_columns(w.rows(), &basis))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn arc(g: Group) -> Arc<Group> {
        Arc::new(g)
    }

    #[test]
    fn regular_rep_z2_is_identity_and_swap() {
        let g = arc(Group::cyclic(2).unwrap());
        let reg = regular_representation(&g);
        assert_eq!(reg.dim(), 2);
        assert_eq!(reg.matrix(0).distance(&CMatrix::identity(2)), 0.0);
        let swap = CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        assert_eq!(reg.matrix(1).distance(&swap), 0.0);
    }

    #[test]
    fn regular_rep_s3_validates_exhaustively() {
        let g = arc(Group::symmetric(3).unwrap());
        let reg = regular_representation(&g);
        reg.validate(1e-12).unwrap();
        for y in g.elements() {
            for i in 0..6 {
                let row_sum: Complex64 = (0..6).map(|j| reg.matrix(y)[(i, j)]).sum();
                assert_eq!(row_sum, c(1.0, 0.0));
            }
        }
        // Permutation trace counts fixed points: n at the identity, 0 at
        // every other element of S3 (no nontrivial perm of a group by right
        // translation has a fixed point).
        let chi = reg.character();
        assert_eq!(chi.value(g.identity()), c(6.0, 0.0));
        for x in 1..6 {
            assert_eq!(chi.value(x), c(0.0, 0.0));
        }
    }

    #[test]
    fn decompose_z4_gives_fourth_root_characters() {
        let g = arc(Group::cyclic(4).unwrap());
        let basis = decompose_irreps(&g, 42).unwrap();
        assert_eq!(basis.dims(), vec![1, 1, 1, 1]);
        // Expected characters j -> i^(jk) for k = 0..3, up to ordering.
        let round = |f: &GroupFunction| -> Vec<(i64, i64)> {
            f.values()
                .iter()
                .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
                .collect()
        };
        let mut got: Vec<Vec<(i64, i64)>> =
            basis.irreps().iter().map(|r| round(&r.character())).collect();
        let i = c(0.0, 1.0);
        let mut expected: Vec<Vec<(i64, i64)>> = (0..4u32)
            .map(|k| {
                (0..4u32)
                    .map(|j| {
                        let z = i.powu(j * k);
                        ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)
                    })
                    .collect()
            })
            .collect();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn decompose_s3_and_q8_dimension_multisets() {
        let s3 = arc(Group::symmetric(3).unwrap());
        let basis = decompose_irreps(&s3, 42).unwrap();
        assert_eq!(basis.dims(), vec![1, 1, 2]);
        for rep in basis.irreps() {
            assert!(rep.is_irreducible());
        }

        let q8 = arc(Group::quaternion8().unwrap());
        let basis = decompose_irreps(&q8, 42).unwrap();
        assert_eq!(basis.dims(), vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn decompose_is_seed_deterministic() {
        let g = arc(Group::symmetric(3).unwrap());
        let a = decompose_irreps(&g, 7).unwrap();
        let b = decompose_irreps(&g, 7).unwrap();
        for (ra, rb) in a.irreps().iter().zip(b.irreps()) {
            for x in g.elements() {
                assert!(ra.matrix(x).distance(rb.matrix(x)) <= 1e-12);
            }
        }
        // A different seed may rotate the matrices but never the characters.
        let c_basis = decompose_irreps(&g, 8).unwrap();
        for (ra, rc) in a.irreps().iter().zip(c_basis.irreps()) {
            assert!(ra.are_equivalent(rc).unwrap());
        }
    }

    #[test]
    fn q8_two_dim_character_matches_explicit_quaternion_matrices() {
        let g = arc(Group::quaternion8().unwrap());
        // The defining rep by explicit quaternion units:
        // i -> [[i,0],[0,-i]], j -> [[0,1],[-1,0]], k -> [[0,i],[i,0]].
        let mi = CMatrix::from_rows(vec![
            vec![c(0.0, 1.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, -1.0)],
        ]);
        let mj = CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(-1.0, 0.0), c(0.0, 0.0)],
        ]);
        let mk = CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ]);
        let id = CMatrix::identity(2);
        let neg = |m: &CMatrix| m.scale(c(-1.0, 0.0));
        let explicit = UnitaryRep::new(
            g.clone(),
            vec![
                id.clone(),
                neg(&id),
                mi.clone(),
                neg(&mi),
                mj.clone(),
                neg(&mj),
                mk.clone(),
                neg(&mk),
            ],
        )
        .unwrap();
        let basis = decompose_irreps(&g, 42).unwrap();
        let two_dim = basis.irreps().iter().find(|r| r.dim() == 2).unwrap();
        assert!(two_dim.are_equivalent(&explicit).unwrap());
        // Character: 2 at e, -2 at the unique order-2 element, 0 elsewhere.
        let chi = two_dim.character();
        assert!((chi.value(0) - c(2.0, 0.0)).norm() <= 1e-8);
        assert!((chi.value(1) - c(-2.0, 0.0)).norm() <= 1e-8);
        for x in 2..8 {
            assert!(chi.value(x).norm() <= 1e-8);
        }
    }

    #[test]
    fn reducibility_detection() {
        let g = arc(Group::cyclic(2).unwrap());
        assert!(!regular_representation(&g).is_irreducible());

        let s3 = arc(Group::symmetric(3).unwrap());
        let basis = decompose_irreps(&s3, 42).unwrap();
        let sum = basis.irreps()[0].direct_sum(&basis.irreps()[2]).unwrap();
        assert!(!sum.is_irreducible());
        let chi_sum = sum.character();
        for x in s3.elements() {
            let expected =
                basis.irreps()[0].character().value(x) + basis.irreps()[2].character().value(x);
            assert!((chi_sum.value(x) - expected).norm() <= 1e-12);
        }
    }

    #[test]
    fn equivalence_is_conjugation_invariant() {
        let s3 = arc(Group::symmetric(3).unwrap());
        let basis = decompose_irreps(&s3, 42).unwrap();
        let two_dim = basis.irreps().iter().find(|r| r.dim() == 2).unwrap();
        assert!(two_dim.are_equivalent(two_dim).unwrap());
        // Trivial vs sign character of S3.
        assert!(!basis.irreps()[0].are_equivalent(&basis.irreps()[1]).unwrap());
        // Conjugating by a random unitary preserves the class.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = matrix::hermitian_eig(&random_hermitian(2, &mut rng))
            .unwrap()
            .vectors;
        let conjugated = UnitaryRep::new(
            s3.clone(),
            two_dim
                .matrices()
                .iter()
                .map(|m| u.adjoint().mul(m).mul(&u))
                .collect(),
        )
        .unwrap();
        assert!(two_dim.are_equivalent(&conjugated).unwrap());

        let z2 = arc(Group::cyclic(2).unwrap());
        let other = regular_representation(&z2);
        assert_eq!(
            two_dim.are_equivalent(&other).unwrap_err(),
            ReprError::GroupMismatch
        );
    }

    #[test]
    fn direct_sum_of_trivials_is_constant_identity() {
        let g = arc(Group::cyclic(3).unwrap());
        let basis = decompose_irreps(&g, 42).unwrap();
        let trivial = basis
            .irreps()
            .iter()
            .find(|r| {
                r.character()
                    .values()
                    .iter()
                    .all(|z| (z - c(1.0, 0.0)).norm() <= 1e-8)
            })
            .unwrap();
        let doubled = trivial.direct_sum(trivial).unwrap();
        for x in g.elements() {
            assert!(doubled.matrix(x).distance(&CMatrix::identity(2)) <= 1e-8);
        }
    }

    #[test]
    fn conjugate_rep_conjugates_character() {
        let g = arc(Group::cyclic(4).unwrap());
        let basis = decompose_irreps(&g, 42).unwrap();
        for rep in basis.irreps() {
            let conj = rep.conjugate_rep();
            for x in g.elements() {
                let expected = rep.character().value(x).conj();
                assert!((conj.character().value(x) - expected).norm() <= 1e-12);
            }
        }
        // A rep with real entries is fixed by conjugation.
        let s3 = arc(Group::symmetric(3).unwrap());
        let reg = regular_representation(&s3);
        let conj = reg.conjugate_rep();
        for x in s3.elements() {
            assert_eq!(reg.matrix(x).distance(conj.matrix(x)), 0.0);
        }
    }

    #[test]
    fn z4_character_plus_conjugate_has_cosine_character() {
        let g = arc(Group::cyclic(4).unwrap());
        let basis = decompose_irreps(&g, 42).unwrap();
        // Find the character with chi(1) = i.
        let chi1 = basis
            .irreps()
            .iter()
            .find(|r| (r.character().value(1) - c(0.0, 1.0)).norm() <= 1e-8)
            .unwrap();
        let doubled = chi1.direct_sum(&chi1.conjugate_rep()).unwrap();
        let chi = doubled.character();
        for j in 0..4 {
            let expected = 2.0 * (std::f64::consts::PI * j as f64 / 2.0).cos();
            assert!((chi.value(j) - c(expected, 0.0)).norm() <= 1e-9);
        }
    }

    #[test]
    fn su2_eligibility() {
        let q8 = arc(Group::quaternion8().unwrap());
        let q8_basis = decompose_irreps(&q8, 42).unwrap();
        let q8_two = q8_basis.irreps().iter().find(|r| r.dim() == 2).unwrap();
        assert!(q8_two.su2_eligible().unwrap());

        let s3 = arc(Group::symmetric(3).unwrap());
        let s3_basis = decompose_irreps(&s3, 42).unwrap();
        let s3_two = s3_basis.irreps().iter().find(|r| r.dim() == 2).unwrap();
        // det of the standard rep is the sign character, not trivial.
        assert!(!s3_two.su2_eligible().unwrap());

        // diag(chi, conj(chi)) always has determinant |chi|^2 = 1.
        let z4 = arc(Group::cyclic(4).unwrap());
        let z4_basis = decompose_irreps(&z4, 42).unwrap();
        let chi1 = z4_basis
            .irreps()
            .iter()
            .find(|r| (r.character().value(1) - c(0.0, 1.0)).norm() <= 1e-8)
            .unwrap();
        let pair = chi1.direct_sum(&chi1.conjugate_rep()).unwrap();
        assert!(pair.su2_eligible().unwrap());

        assert_eq!(
            z4_basis.irreps()[0].su2_eligible().unwrap_err(),
            ReprError::WrongDimension {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn su2_normalization_restores_trace_identity() {
        let q8 = arc(Group::quaternion8().unwrap());
        let basis = decompose_irreps(&q8, 42).unwrap();
        let two = basis.irreps().iter().find(|r| r.dim() == 2).unwrap();
        let norm = two.su2_normalize().unwrap();
        for x in q8.elements() {
            assert!((norm.matrix(x).det() - c(1.0, 0.0)).norm() <= 1e-12);
            // For SU(2) matrices, A + A^dagger = tr(A) I.
            let lhs = norm.matrix(x).add(&norm.matrix(x).adjoint());
            let rhs = CMatrix::identity(2).scale(norm.matrix(x).trace());
            assert!(lhs.distance(&rhs) <= 1e-8);
        }

        let s3 = arc(Group::symmetric(3).unwrap());
        let s3_basis = decompose_irreps(&s3, 42).unwrap();
        let s3_two = s3_basis.irreps().iter().find(|r| r.dim() == 2).unwrap();
        assert_eq!(s3_two.su2_normalize().unwrap_err(), ReprError::NotSu2Eligible);
    }

    #[test]
    fn basis_sum_of_squares_across_families() {
        for g in [
            Group::cyclic(6).unwrap(),
            Group::dihedral(4).unwrap(),
            Group::symmetric(4).unwrap(),
            Group::product(&Group::cyclic(2).unwrap(), &Group::cyclic(2).unwrap()).unwrap(),
        ] {
            let n = g.order();
            let classes = g.conjugacy_classes().len();
            let basis = decompose_irreps(&arc(g), 42).unwrap();
            assert_eq!(basis.dims().iter().map(|d| d * d).sum::<usize>(), n);
            assert_eq!(basis.len(), classes);
        }
    }

    #[test]
    fn invalid_basis_rejected() {
        let g = arc(Group::cyclic(2).unwrap());
        let basis = decompose_irreps(&g, 42).unwrap();
        // Dropping one irrep breaks the sum-of-squares completeness count.
        let err = IrrepBasis::new(g.clone(), vec![basis.irreps()[0].clone()]);
        assert!(matches!(err, Err(ReprError::InvalidBasis(_))));
        // Duplicating one brings the right dimension count but an equivalence.
        let err = IrrepBasis::new(
            g,
            vec![basis.irreps()[0].clone(), basis.irreps()[0].clone()],
        );
        assert!(matches!(err, Err(ReprError::InvalidBasis(_))));
    }
}
