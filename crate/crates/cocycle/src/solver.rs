//! Constructive solution sets for the three functional equations, with
//! certificates tying each solution to the representation that produces it,
//! and an independent Gauss–Newton least-squares search used to
//! cross-validate completeness.

use crate::group::{Group, GroupFunction};
use crate::matrix::{self, CMatrix};
use crate::repr::IrrepBasis;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::Arc;

/// Sup-norm radius inside which two constructed solutions count as the same
/// function.
const DEDUP_RADIUS: f64 = 1e-9;

/// Tolerance handed to the linear solve for Wilson solution spaces.
const WILSON_NS_TOL: f64 = 1e-10;

/// Rank cutoff (relative to the largest singular value) when measuring the
/// span of a witness's matrix-coefficient functions.
const COEFF_RANK_CUTOFF: f64 = 1e-8;

/// Iteration is declared converged below this residual 2-norm.
const ORACLE_CONVERGED: f64 = 1e-12;

/// A finished start is kept as a solution only below this residual 2-norm.
const ORACLE_ACCEPT: f64 = 1e-10;

/// Iteration also stops once the proposed step is this short.
const ORACLE_STEP_MIN: f64 = 1e-13;

const ORACLE_MAX_ITERS: usize = 60;
const ORACLE_MAX_HALVINGS: usize = 30;

/// Converged iterates within this sup-distance collapse to one cluster.
const ORACLE_CLUSTER_RADIUS: f64 = 1e-6;

/// Grid used to round values before the deterministic merge sort.
const ORACLE_SORT_GRID: f64 = 1e-8;

const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Which functional equation a certificate solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Dalembert,
    Wilson,
    Long,
}

/// The representation behind a constructed solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// Index of a 1-dimensional irrep `chi` in the basis; the producing
    /// representation is `chi ⊕ conj(chi)`.
    CharacterPair(usize),
    /// Index of a 2-dimensional irrep with unit determinant throughout; the
    /// producing representation is that irrep itself.
    Su2Irrep(usize),
}

/// A solution together with the representation it is the half-trace of.
#[derive(Debug, Clone)]
pub struct SolutionCertificate {
    pub f: GroupFunction,
    pub witness: Witness,
    pub equation: Equation,
}

/// The full space of Wilson solutions paired with one fixed `g`.
#[derive(Debug, Clone)]
pub struct WilsonSolutionSpace {
    /// The companion function; always itself a d'Alembert solution.
    pub g: SolutionCertificate,
    /// Orthonormal basis of every `f` solving the Wilson equation with `g`.
    pub f_basis: Vec<GroupFunction>,
    pub dimension: usize,
}

/// Half-trace of the representation named by `witness`.
fn witness_function(group: &Arc<Group>, basis: &IrrepBasis, witness: Witness) -> GroupFunction {
    match witness {
        Witness::CharacterPair(i) => {
            let chi = basis.irreps()[i].character();
            GroupFunction::from_fn(Arc::clone(group), |x| {
                (chi.value(x) + chi.value(x).conj()) / 2.0
            })
        }
        Witness::Su2Irrep(i) => {
            let chi = basis.irreps()[i].character();
            GroupFunction::from_fn(Arc::clone(group), |x| chi.value(x) / 2.0)
        }
    }
}

fn assert_same_group(group: &Arc<Group>, basis: &IrrepBasis) {
    assert!(
        Arc::ptr_eq(group, basis.group()) || group.same_structure(basis.group()),
        "basis belongs to a different group"
    );
}

/// Constructs every nonzero solution of `f(xy) + f(xy^-1) = 2 f(x) f(y)`:
/// `(chi + conj(chi))/2` for each 1-dimensional character and `chi_pi/2` for
/// each 2-dimensional irrep with unit determinant. Functions are
/// deduplicated at sup-distance 1e-9, keeping the earliest witness in basis
/// order (the function, not the representation, is the solution; distinct
/// witnesses can share one function).
pub fn solve_dalembert(group: &Arc<Group>, basis: &IrrepBasis) -> Vec<SolutionCertificate> {
    assert_same_group(group, basis);
    let mut witnesses = Vec::new();
    for (i, rep) in basis.irreps().iter().enumerate() {
        if rep.dim() == 1 {
            witnesses.push(Witness::CharacterPair(i));
        }
    }
    for (i, rep) in basis.irreps().iter().enumerate() {
        if rep.dim() == 2 && rep.su2_eligible().expect("dimension is 2") {
            witnesses.push(Witness::Su2Irrep(i));
        }
    }
    let mut out: Vec<SolutionCertificate> = Vec::new();
    for witness in witnesses {
        let f = witness_function(group, basis, witness);
        if f.sup_norm() <= DEDUP_RADIUS {
            continue;
        }
        if out.iter().any(|c| c.f.sup_distance(&f) <= DEDUP_RADIUS) {
            continue;
        }
        out.push(SolutionCertificate {
            f,
            witness,
            equation: Equation::Dalembert,
        });
    }
    out
}

/// Constructs every nonzero solution of
/// `f(xy) + f(yx) + f(xy^-1) + f(y^-1 x) = 4 f(x) f(y)` — the same function
/// set as [`solve_dalembert`]; on a compact (here finite) group the two
/// equations have identical solution sets.
pub fn solve_long(group: &Arc<Group>, basis: &IrrepBasis) -> Vec<SolutionCertificate> {
    solve_dalembert(group, basis)
        .into_iter()
        .map(|mut c| {
            c.equation = Equation::Long;
            c
        })
        .collect()
}

/// Sparse row of the Wilson linear system for the pair `(x, y)`:
/// coefficients of `f(xy) + f(xy^-1) - 2 g(y) f(x) = 0` on the unknowns
/// `f(0..n)`, with repeated indices accumulated.
fn wilson_row(group: &Group, g: &GroupFunction, x: usize, y: usize) -> Vec<(usize, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let mut entries: Vec<(usize, Complex64)> = Vec::with_capacity(3);
    let mut add = |k: usize, c: Complex64| {
        if let Some(e) = entries.iter_mut().find(|e| e.0 == k) {
            e.1 += c;
        } else {
            entries.push((k, c));
        }
    };
    add(group.mul(x, y), one);
    add(group.mul(x, group.inv(y)), one);
    add(x, g.value(y) * -2.0);
    entries
}

/// Orthonormal null-space basis of the `n^2 x n` Wilson system for `g`,
/// computed through the normal matrix without materializing the tall system.
fn wilson_null_space(group: &Group, g: &GroupFunction) -> Vec<Vec<Complex64>> {
    let n = group.order();
    let mut normal = CMatrix::zeros(n, n);
    let mut frob_sq = 0.0;
    for x in 0..n {
        for y in 0..n {
            let row = wilson_row(group, g, x, y);
            for &(k, ck) in &row {
                frob_sq += ck.norm_sqr();
                for &(l, cl) in &row {
                    normal[(k, l)] += ck.conj() * cl;
                }
            }
        }
    }
    let eig = matrix::hermitian_eig(&normal).expect("normal matrix is Hermitian");
    let threshold = WILSON_NS_TOL * (1.0 + frob_sq.sqrt());
    let mut basis = Vec::new();
    for j in 0..n {
        let v = eig.vectors.column(j);
        let mut residual_sq = 0.0;
        for x in 0..n {
            for y in 0..n {
                let r: Complex64 = wilson_row(group, g, x, y)
                    .into_iter()
                    .map(|(k, c)| c * v[k])
                    .sum();
                residual_sq += r.norm_sqr();
            }
        }
        if residual_sq.sqrt() <= threshold {
            basis.push(v);
        }
    }
    basis
}

/// Dimension of the span of the matrix-coefficient functions of the
/// representation behind `witness`.
fn coefficient_span_dim(group: &Group, basis: &IrrepBasis, witness: Witness) -> usize {
    let coeffs: Vec<Vec<Complex64>> = match witness {
        Witness::CharacterPair(i) => {
            let chi = basis.irreps()[i].character();
            vec![
                chi.values().to_vec(),
                chi.values().iter().map(Complex64::conj).collect(),
            ]
        }
        Witness::Su2Irrep(i) => {
            let rep = &basis.irreps()[i];
            let mut fns = Vec::new();
            for a in 0..2 {
                for b in 0..2 {
                    fns.push((0..group.order()).map(|x| rep.matrix(x)[(a, b)]).collect());
                }
            }
            fns
        }
    };
    let m = coeffs.len();
    let gram = CMatrix::from_fn(m, m, |p, q| matrix::inner(&coeffs[p], &coeffs[q]));
    let eig = matrix::hermitian_eig(&gram).expect("Gram matrix is Hermitian");
    let max = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = COEFF_RANK_CUTOFF * COEFF_RANK_CUTOFF * max;
    eig.values.iter().filter(|&&v| v > cutoff).count()
}

/// Solves `f(xy) + f(xy^-1) = 2 f(x) g(y)` for every admissible companion
/// `g`: one solution space per d'Alembert solution, with `f_basis` obtained
/// from the exhaustive `n^2 x n` linear system. The computed dimension is
/// cross-checked against the span of the witness's matrix-coefficient
/// functions and the two must agree. The degenerate family `f ≡ 0` with `g`
/// arbitrary is deliberately not enumerated.
pub fn solve_wilson(group: &Arc<Group>, basis: &IrrepBasis) -> Vec<WilsonSolutionSpace> {
    assert_same_group(group, basis);
    solve_dalembert(group, basis)
        .into_iter()
        .map(|g_cert| {
            let null = wilson_null_space(group, &g_cert.f);
            let span = coefficient_span_dim(group, basis, g_cert.witness);
            assert_eq!(
                null.len(),
                span,
                "Wilson null-space dimension disagrees with the coefficient span"
            );
            let f_basis = null
                .into_iter()
                .map(|v| GroupFunction::new(Arc::clone(group), v).expect("length n"))
                .collect::<Vec<_>>();
            let dimension = f_basis.len();
            WilsonSolutionSpace {
                g: g_cert,
                f_basis,
                dimension,
            }
        })
        .collect()
}

/// Outcome of a full oracle run, including how many starts survived.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub solutions: Vec<GroupFunction>,
    pub total_starts: usize,
    pub converged_starts: usize,
    pub dropped_starts: usize,
}

/// Residual vector of the chosen equation, stacked over all pairs `(x, y)`
/// in lexicographic order.
fn equation_residual(group: &Group, equation: Equation, f: &[Complex64]) -> Vec<Complex64> {
    let n = group.order();
    let mut r = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let v = match equation {
                Equation::Dalembert => {
                    f[group.mul(x, y)] + f[group.mul(x, group.inv(y))] - 2.0 * f[x] * f[y]
                }
                Equation::Long => {
                    let yi = group.inv(y);
                    f[group.mul(x, y)] + f[group.mul(y, x)] + f[group.mul(x, yi)]
                        + f[group.mul(yi, x)]
                        - 4.0 * f[x] * f[y]
                }
                Equation::Wilson => unreachable!("oracle handles the one-function equations"),
            };
            r.push(v);
        }
    }
    r
}

/// Jacobian of [`equation_residual`]; the system is quadratic, so entries
/// are linear in `f` and exact.
fn equation_jacobian(group: &Group, equation: Equation, f: &[Complex64]) -> CMatrix {
    let n = group.order();
    let one = Complex64::new(1.0, 0.0);
    let mut j = CMatrix::zeros(n * n, n);
    for x in 0..n {
        for y in 0..n {
            let row = x * n + y;
            match equation {
                Equation::Dalembert => {
                    j[(row, group.mul(x, y))] += one;
                    j[(row, group.mul(x, group.inv(y)))] += one;
                    j[(row, x)] += -2.0 * f[y];
                    j[(row, y)] += -2.0 * f[x];
                }
                Equation::Long => {
                    let yi = group.inv(y);
                    j[(row, group.mul(x, y))] += one;
                    j[(row, group.mul(y, x))] += one;
                    j[(row, group.mul(x, yi))] += one;
                    j[(row, group.mul(yi, x))] += one;
                    j[(row, x)] += -4.0 * f[y];
                    j[(row, y)] += -4.0 * f[x];
                }
                Equation::Wilson => unreachable!("oracle handles the one-function equations"),
            }
        }
    }
    j
}

fn two_norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// One damped Gauss–Newton descent from `start`; `Some(f)` on convergence.
fn gauss_newton_descent(
    group: &Group,
    equation: Equation,
    mut f: Vec<Complex64>,
) -> Option<Vec<Complex64>> {
    let n = group.order();
    let mut residual = equation_residual(group, equation, &f);
    let mut res_norm = two_norm(&residual);
    for _ in 0..ORACLE_MAX_ITERS {
        if res_norm < ORACLE_CONVERGED {
            break;
        }
        let j = equation_jacobian(group, equation, &f);
        let jt = j.adjoint();
        let normal = jt.mul(&j);
        let rhs = jt.matvec(&residual);
        let eig = matrix::hermitian_eig(&normal).ok()?;
        let lambda_max = eig.values.last().copied().unwrap_or(0.0);
        if lambda_max <= 0.0 {
            break;
        }
        // Pseudo-inverse step: drop directions with negligible curvature.
        let mut step = vec![Complex64::new(0.0, 0.0); n];
        for (k, &lambda) in eig.values.iter().enumerate() {
            if lambda <= 1e-12 * lambda_max {
                continue;
            }
            let vk = eig.vectors.column(k);
            let coeff = matrix::inner(&rhs, &vk) / lambda;
            for (s, v) in step.iter_mut().zip(&vk) {
                *s += coeff * v;
            }
        }
        let step_norm = two_norm(&step);
        if step_norm < ORACLE_STEP_MIN {
            break;
        }
        // Halve the step until the residual actually decreases.
        let mut alpha = 1.0;
        let mut improved = false;
        for _ in 0..ORACLE_MAX_HALVINGS {
            let trial: Vec<Complex64> = f
                .iter()
                .zip(&step)
                .map(|(fi, si)| fi - si * alpha)
                .collect();
            let trial_residual = equation_residual(group, equation, &trial);
            let trial_norm = two_norm(&trial_residual);
            if trial_norm < res_norm {
                f = trial;
                residual = trial_residual;
                res_norm = trial_norm;
                improved = true;
                break;
            }
            alpha /= 2.0;
        }
        if !improved {
            break;
        }
    }
    (res_norm < ORACLE_ACCEPT).then_some(f)
}

/// Seeded random search for solutions of the d'Alembert or long equation:
/// `starts` real initial vectors drawn uniformly from [-2, 2]^n, plus half
/// as many fully complex starts guarding against phantom complex solutions
/// (the residual is holomorphic in `f`, so the same descent applies).
/// Converged runs are clustered at sup-distance 1e-6 and representatives
/// returned in a value-sorted order that is independent of thread count.
pub fn gauss_newton_oracle_detailed(
    group: &Arc<Group>,
    equation: Equation,
    starts: usize,
    seed: u64,
) -> OracleRun {
    assert!(starts >= 1, "at least one start is required");
    assert!(
        equation != Equation::Wilson,
        "the oracle searches the one-function equations"
    );
    let n = group.order();
    let total = starts + starts / 2;
    let converged: Vec<Vec<Complex64>> = (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed.wrapping_add((i as u64 + 1).wrapping_mul(SEED_STRIDE)));
            let complex_sweep = i >= starts;
            let start: Vec<Complex64> = (0..n)
                .map(|_| {
                    let re = rng.gen_range(-2.0..2.0);
                    let im = if complex_sweep {
                        rng.gen_range(-2.0..2.0)
                    } else {
                        0.0
                    };
                    Complex64::new(re, im)
                })
                .collect();
            gauss_newton_descent(group, equation, start)
        })
        .collect();
    let converged_starts = converged.len();

    // Deterministic merge: sort on grid-rounded values, then greedy-cluster.
    let grid_key = |f: &[Complex64]| -> Vec<(i64, i64)> {
        f.iter()
            .map(|z| {
                (
                    (z.re / ORACLE_SORT_GRID).round() as i64,
                    (z.im / ORACLE_SORT_GRID).round() as i64,
                )
            })
            .collect()
    };
    let mut sorted = converged;
    sorted.sort_by_key(|f| grid_key(f));
    let mut representatives: Vec<Vec<Complex64>> = Vec::new();
    for f in sorted {
        let dist_to = |r: &Vec<Complex64>| {
            r.iter()
                .zip(&f)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        };
        if representatives.iter().all(|r| dist_to(r) > ORACLE_CLUSTER_RADIUS) {
            representatives.push(f);
        }
    }
    OracleRun {
        solutions: representatives
            .into_iter()
            .map(|v| GroupFunction::new(Arc::clone(group), v).expect("length n"))
            .collect(),
        total_starts: total,
        converged_starts,
        dropped_starts: total - converged_starts,
    }
}

/// [`gauss_newton_oracle_detailed`] without the start-count diagnostics.
pub fn gauss_newton_oracle(
    group: &Arc<Group>,
    equation: Equation,
    starts: usize,
    seed: u64,
) -> Vec<GroupFunction> {
    gauss_newton_oracle_detailed(group, equation, starts, seed).solutions
}

/// One pairing between an oracle find and a constructed solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchEntry {
    pub found_index: usize,
    pub constructed_index: usize,
    pub distance: f64,
}

/// Alignment of an independently found solution list against the
/// constructed certificates.
#[derive(Debug, Clone)]
pub struct MatchReport {
    pub matches: Vec<MatchEntry>,
    /// Indices of found functions that are the zero function; never matched.
    pub trivial_found: Vec<usize>,
    /// Found nonzero functions with no constructed partner within `tol`.
    pub unmatched_found: Vec<usize>,
    /// Constructed solutions no found function landed on.
    pub unmatched_constructed: Vec<usize>,
}

impl MatchReport {
    /// True when the two lists cover each other exactly (zero aside).
    pub fn fully_matched(&self) -> bool {
        self.unmatched_found.is_empty() && self.unmatched_constructed.is_empty()
    }
}

/// Pairs each found nonzero function with its nearest constructed solution
/// in sup-distance; partners further than `tol` on either side are reported
/// unmatched, and zero functions are flagged trivial rather than matched.
pub fn match_solutions(
    found: &[GroupFunction],
    constructed: &[SolutionCertificate],
    tol: f64,
) -> MatchReport {
    let mut matches = Vec::new();
    let mut trivial_found = Vec::new();
    let mut unmatched_found = Vec::new();
    let mut hit = vec![false; constructed.len()];
    for (i, f) in found.iter().enumerate() {
        if f.sup_norm() <= tol {
            trivial_found.push(i);
            continue;
        }
        let nearest = constructed
            .iter()
            .enumerate()
            .map(|(j, c)| (j, c.f.sup_distance(f)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match nearest {
            Some((j, d)) if d <= tol => {
                hit[j] = true;
                matches.push(MatchEntry {
                    found_index: i,
                    constructed_index: j,
                    distance: d,
                });
            }
            _ => unmatched_found.push(i),
        }
    }
    MatchReport {
        matches,
        trivial_found,
        unmatched_found,
        unmatched_constructed: (0..constructed.len()).filter(|&j| !hit[j]).collect(),
    }
}
