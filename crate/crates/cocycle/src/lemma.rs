//! Common quasi-eigenvector search for the family `S(x) = pi(x) + pi(x)^-1`
//! and the dichotomy it forces on irreducible representations: a witness
//! exists only in dimension 1 (characters) or dimension 2 inside SU(2).

use crate::matrix::{self, CMatrix};
use crate::repr::UnitaryRep;
use num_complex::Complex64;
use thiserror::Error;

/// Absolute eigenvalue gap for grouping eigenvalues of `S(x)` into
/// eigenspaces. `S(x)` is Hermitian with spectrum in `[-2, 2]` (sum of a
/// unitary and its adjoint), so an absolute threshold is meaningful.
const EIGENSPACE_GAP: f64 = 1e-7;

/// Tolerance handed to the null-space routine when intersecting candidate
/// subspaces with eigenspaces.
const INTERSECT_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LemmaError {
    #[error("representation is not irreducible")]
    NotIrreducible,
    #[error("small-dimension dichotomy violated: {0}")]
    LemmaViolated(String),
}

/// Outcome of the dichotomy for an irreducible representation with a common
/// quasi-eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaConclusion {
    /// dim 1: the representation is a unitary character.
    Dim1Character,
    /// dim 2 with trivial determinant character: lands in SU(2).
    Dim2Su2,
    /// No witness; the hypothesis of the lemma fails.
    NotApplicable,
}

#[derive(Debug, Clone)]
pub struct LemmaReport {
    /// One orthonormal representative per common quasi-eigendirection.
    pub witnesses: Vec<Vec<Complex64>>,
    /// True iff `witnesses` is nonempty.
    pub hypothesis_holds: bool,
    pub conclusion: LemmaConclusion,
}

/// Groups the ascending eigenvalues into ranges separated by more than
/// [`EIGENSPACE_GAP`].
fn eigenspace_ranges(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut ranges = Vec::new();
    let mut start = 0;
    for i in 1..values.len() {
        if values[i] - values[i - 1] > EIGENSPACE_GAP {
            ranges.push(start..i);
            start = i;
        }
    }
    ranges.push(start..values.len());
    ranges
}

/// Finds every direction `v` with `S(x) v` parallel to `v` for all `x`,
/// where `S(x) = pi(x) + pi(x)^dagger`.
///
/// The scalar may differ per element — this is the quasi-eigenvector
/// condition, not a joint fixed eigenvalue. Candidates start as the
/// eigenspaces of the element whose `S` has the smallest maximal eigenvalue
/// multiplicity, and are intersected with the eigenspaces of every other
/// element; an orthonormal basis of the surviving union is returned after an
/// exhaustive re-check of the defining condition at `tol`. For 1-dimensional
/// input the answer is always `[1]`; if every `S(x)` is scalar the whole
/// space qualifies and a full basis comes back.
pub fn common_quasi_eigenvectors(pi: &UnitaryRep, tol: f64) -> Vec<Vec<Complex64>> {
    let d = pi.dim();
    if d == 1 {
        return vec![vec![Complex64::new(1.0, 0.0)]];
    }
    let n = pi.group().order();
    let s: Vec<CMatrix> = (0..n)
        .map(|x| pi.matrix(x).add(&pi.matrix(x).adjoint()))
        .collect();
    let eigs: Vec<(matrix::EigenResult, Vec<std::ops::Range<usize>>)> = s
        .iter()
        .map(|m| {
            let e = matrix::hermitian_eig(m).expect("S(x) is Hermitian by construction");
            let ranges = eigenspace_ranges(&e.values);
            (e, ranges)
        })
        .collect();

    // Start from the element with the least-degenerate spectrum.
    let x0 = (0..n)
        .min_by_key(|&x| eigs[x].1.iter().map(std::ops::Range::len).max().unwrap())
        .unwrap();
    let eigenspace_basis = |x: usize, range: &std::ops::Range<usize>| {
        CMatrix::from_fn(d, range.len(), |i, j| eigs[x].0.vectors[(i, range.start + j)])
    };
    let mut candidates: Vec<CMatrix> = eigs[x0]
        .1
        .iter()
        .map(|r| eigenspace_basis(x0, r))
        .collect();

    for (x, (_, ranges)) in eigs.iter().enumerate() {
        if x == x0 {
            continue;
        }
        let mut next = Vec::new();
        for w in &candidates {
            for range in ranges {
                // Intersect span(w) with this eigenspace: coefficients c with
                // (I - E E^dagger) w c = 0.
                let e_basis = eigenspace_basis(x, range);
                let complement = CMatrix::identity(d).sub(&e_basis.mul(&e_basis.adjoint()));
                let coeffs = matrix::null_space(&complement.mul(w), INTERSECT_TOL);
                if coeffs.is_empty() {
                    continue;
                }
                let piece = w.mul(&CMatrix::from_columns(w.cols(), &coeffs));
                let cols: Vec<Vec<Complex64>> = (0..piece.cols()).map(|j| piece.column(j)).collect();
                let ortho = matrix::orthonormalize(&cols, 1e-8);
                if !ortho.is_empty() {
                    next.push(CMatrix::from_columns(d, &ortho));
                }
            }
        }
        candidates = next;
        if candidates.is_empty() {
            return Vec::new();
        }
    }

    // Union of the surviving subspaces, then an exhaustive soundness check
    // of the quasi-eigenvector condition itself.
    let union: Vec<Vec<Complex64>> = candidates
        .iter()
        .flat_map(|w| (0..w.cols()).map(|j| w.column(j)).collect::<Vec<_>>())
        .collect();
    matrix::orthonormalize(&union, 1e-8)
        .into_iter()
        .filter(|v| {
            s.iter().all(|sx| {
                let sv = sx.matvec(v);
                let lambda = matrix::inner(&sv, v);
                let defect: f64 = sv
                    .iter()
                    .zip(v)
                    .map(|(a, b)| (a - b * lambda).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                defect <= tol
            })
        })
        .collect()
}

/// Applies the small-dimension dichotomy to an irreducible representation:
/// if any common quasi-eigenvector exists, the dimension must be 1 (a
/// character) or 2 with image in SU(2). A witness outside those cases is a
/// [`LemmaError::LemmaViolated`] — impossible for a genuine irreducible
/// input, so it signals numeric breakdown upstream.
pub fn verify_small_dimension_lemma(
    pi: &UnitaryRep,
    tol: f64,
) -> Result<LemmaReport, LemmaError> {
    if !pi.is_irreducible() {
        return Err(LemmaError::NotIrreducible);
    }
    let witnesses = common_quasi_eigenvectors(pi, tol);
    if witnesses.is_empty() {
        return Ok(LemmaReport {
            witnesses,
            hypothesis_holds: false,
            conclusion: LemmaConclusion::NotApplicable,
        });
    }
    let conclusion = match pi.dim() {
        1 => LemmaConclusion::Dim1Character,
        2 => {
            let eligible = pi
                .su2_eligible()
                .expect("dimension checked to be 2");
            if !eligible {
                return Err(LemmaError::LemmaViolated(format!(
                    "dim-2 irrep with {} witnesses has nontrivial determinant character",
                    witnesses.len()
                )));
            }
            LemmaConclusion::Dim2Su2
        }
        d => {
            return Err(LemmaError::LemmaViolated(format!(
                "irrep of dimension {d} admits {} common quasi-eigenvectors",
                witnesses.len()
            )));
        }
    };
    Ok(LemmaReport {
        hypothesis_holds: !witnesses.is_empty(),
        witnesses,
        conclusion,
    })
}
