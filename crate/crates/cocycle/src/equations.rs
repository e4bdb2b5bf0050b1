//! Residual checkers for the d'Alembert, Wilson, and d'Alembert-long
//! functional equations, the square identity, centrality, and the
//! delta-operator calculus that links solutions to representation blocks.

use crate::group::GroupFunction;
use crate::matrix::CMatrix;
use crate::repr::UnitaryRep;
use num_complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

/// Default absolute tolerance for "satisfied". Solution values are O(1)
/// (bounded by the derived solution forms), so an absolute threshold is
/// meaningful.
pub const DEFAULT_EQ_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquationError {
    #[error("functions live on different groups")]
    GroupMismatch,
    #[error("function is not real-valued: |imag| reaches {max_imag:.3e} (tol {tol:.1e})")]
    NotRealValued { max_imag: f64, tol: f64 },
    #[error("square identity 2f(y)^2 = f(y^2) + 1 fails with residual {max_residual:.3e}")]
    SquareIdentityFails { max_residual: f64 },
}

/// Result of an exhaustive residual scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// Largest absolute residual over the scan.
    pub max_residual: f64,
    /// Where it occurs; ties resolve to the lexicographically smallest pair.
    /// Single-variable scans report `(y, y)`.
    pub argmax_pair: (usize, usize),
    /// `max_residual <= tol` for the tolerance the check ran with.
    pub satisfied: bool,
    /// For delta-operator checks: the largest imaginary part projected away
    /// from `f` before evaluation. `None` for plain pair scans.
    pub projected_imag: Option<f64>,
}

/// Exhaustive max of `eval` over all n^2 pairs, with deterministic
/// lexicographic argmax.
fn pair_scan(n: usize, mut eval: impl FnMut(usize, usize) -> f64) -> (f64, (usize, usize)) {
    let mut max = f64::NEG_INFINITY;
    let mut argmax = (0, 0);
    for x in 0..n {
        for y in 0..n {
            let r = eval(x, y);
            if r > max {
                max = r;
                argmax = (x, y);
            }
        }
    }
    (max, argmax)
}

fn report(max_residual: f64, argmax_pair: (usize, usize), tol: f64) -> ResidualReport {
    ResidualReport {
        max_residual,
        argmax_pair,
        satisfied: max_residual <= tol,
        projected_imag: None,
    }
}

/// Residual of `f(xy) + f(xy^-1) = 2 f(x) f(y)` over every pair.
pub fn dalembert_residual(f: &GroupFunction, tol: f64) -> ResidualReport {
    let g = f.group();
    let (max, arg) = pair_scan(g.order(), |x, y| {
        (f.value(g.mul(x, y)) + f.value(g.mul(x, g.inv(y)))
            - f.value(x) * f.value(y) * 2.0)
            .norm()
    });
    report(max, arg, tol)
}

/// Residual of `f(xy) + f(xy^-1) = 2 f(x) g(y)` over every pair.
pub fn wilson_residual(
    f: &GroupFunction,
    g: &GroupFunction,
    tol: f64,
) -> Result<ResidualReport, EquationError> {
    if !same_group(f, g) {
        return Err(EquationError::GroupMismatch);
    }
    let gr = f.group();
    let (max, arg) = pair_scan(gr.order(), |x, y| {
        (f.value(gr.mul(x, y)) + f.value(gr.mul(x, gr.inv(y)))
            - f.value(x) * g.value(y) * 2.0)
            .norm()
    });
    Ok(report(max, arg, tol))
}

/// Residual of `f(xy) + f(yx) + f(xy^-1) + f(y^-1 x) = 4 f(x) f(y)` over
/// every pair.
pub fn long_residual(f: &GroupFunction, tol: f64) -> ResidualReport {
    let g = f.group();
    let (max, arg) = pair_scan(g.order(), |x, y| {
        let y_inv = g.inv(y);
        (f.value(g.mul(x, y)) + f.value(g.mul(y, x))
            + f.value(g.mul(x, y_inv))
            + f.value(g.mul(y_inv, x))
            - f.value(x) * f.value(y) * 4.0)
            .norm()
    });
    report(max, arg, tol)
}

/// True iff `f(xy) = f(yx)` for all pairs, to `tol`.
pub fn is_central(f: &GroupFunction, tol: f64) -> bool {
    let g = f.group();
    let (max, _) = pair_scan(g.order(), |x, y| {
        (f.value(g.mul(x, y)) - f.value(g.mul(y, x))).norm()
    });
    max <= tol
}

/// Residual of `2 f(y)^2 = f(y^2) + 1` over every element; the report's
/// argmax is `(y, y)`.
pub fn check_square_identity(f: &GroupFunction, tol: f64) -> ResidualReport {
    let g = f.group();
    let mut max = f64::NEG_INFINITY;
    let mut arg = (0, 0);
    for y in g.elements() {
        let r = (f.value(y) * f.value(y) * 2.0 - f.value(g.mul(y, y))
            - Complex64::new(1.0, 0.0))
        .norm();
        if r > max {
            max = r;
            arg = (y, y);
        }
    }
    report(max, arg, tol)
}

fn same_group(f: &GroupFunction, g: &GroupFunction) -> bool {
    Arc::ptr_eq(f.group(), g.group()) || f.group().same_structure(g.group())
}

fn rep_matches_function(pi: &UnitaryRep, f: &GroupFunction) -> bool {
    Arc::ptr_eq(pi.group(), f.group()) || pi.group().same_structure(f.group())
}

/// Checks `f` is real to `tol` and returns its real part.
fn project_real(f: &GroupFunction, tol: f64) -> Result<(Vec<f64>, f64), EquationError> {
    let max_imag = f.max_imag();
    if max_imag > tol {
        return Err(EquationError::NotRealValued { max_imag, tol });
    }
    Ok((f.values().iter().map(|z| z.re).collect(), max_imag))
}

/// The operator `delta(y) = pi(y) + pi(y)^-1 - 2 f(y) I` for real-valued `f`
/// (imaginary residue below [`DEFAULT_EQ_TOL`] is projected away). The result
/// is self-adjoint by construction.
pub fn delta_operator(
    pi: &UnitaryRep,
    f: &GroupFunction,
    y: usize,
) -> Result<CMatrix, EquationError> {
    if !rep_matches_function(pi, f) {
        return Err(EquationError::GroupMismatch);
    }
    let (real, _) = project_real(f, DEFAULT_EQ_TOL)?;
    Ok(delta_from_real(pi, &real, y))
}

fn delta_from_real(pi: &UnitaryRep, real: &[f64], y: usize) -> CMatrix {
    let m = pi.matrix(y);
    let scaled_id = CMatrix::identity(pi.dim()).scale(Complex64::new(2.0 * real[y], 0.0));
    m.add(&m.adjoint()).sub(&scaled_id)
}

/// Verifies `delta(y)^2 = delta(y^2) - 4 f(y) delta(y)` for every `y`.
///
/// The identity is a consequence of the square identity
/// `2f(y)^2 = f(y^2) + 1`, which is checked as a precondition; the report
/// records the imaginary mass projected away from `f`.
pub fn verify_delta_square(
    pi: &UnitaryRep,
    f: &GroupFunction,
) -> Result<ResidualReport, EquationError> {
    if !rep_matches_function(pi, f) {
        return Err(EquationError::GroupMismatch);
    }
    let (real, projected) = project_real(f, DEFAULT_EQ_TOL)?;
    let square = check_square_identity(f, DEFAULT_EQ_TOL);
    if !square.satisfied {
        return Err(EquationError::SquareIdentityFails {
            max_residual: square.max_residual,
        });
    }
    let g = f.group();
    let mut max = f64::NEG_INFINITY;
    let mut arg = (0, 0);
    for y in g.elements() {
        let d = delta_from_real(pi, &real, y);
        let d_sq = d.mul(&d);
        let d_ysq = delta_from_real(pi, &real, g.mul(y, y));
        let r = d_sq
            .sub(&d_ysq)
            .add(&d.scale(Complex64::new(4.0 * real[y], 0.0)))
            .frobenius_norm();
        if r > max {
            max = r;
            arg = (y, y);
        }
    }
    Ok(ResidualReport {
        max_residual: max,
        argmax_pair: arg,
        satisfied: max <= DEFAULT_EQ_TOL,
        projected_imag: Some(projected),
    })
}

/// Sup norms, over all `y`, of the three annihilation identities tying a
/// solution's Fourier block to the delta operator.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilationResiduals {
    /// `delta(y) f_hat + f_hat delta(y)`
    pub anticommutator: f64,
    /// `delta(y)^2 f_hat`
    pub delta_sq_times_fhat: f64,
    /// `delta(y) f_hat` (follows from the two above by self-adjointness)
    pub delta_times_fhat: f64,
}

/// Evaluates the annihilation chain for one irrep and the solution's Fourier
/// block in that irrep: the anticommutator of `delta` with `f_hat` vanishes,
/// hence `delta^2 f_hat = 0`, hence (by self-adjointness of `delta`)
/// `delta f_hat = 0`.
pub fn annihilation_chain(
    pi: &UnitaryRep,
    fhat_block: &CMatrix,
    f: &GroupFunction,
) -> Result<AnnihilationResiduals, EquationError> {
    if !rep_matches_function(pi, f) {
        return Err(EquationError::GroupMismatch);
    }
    let (real, _) = project_real(f, DEFAULT_EQ_TOL)?;
    let mut out = AnnihilationResiduals {
        anticommutator: 0.0,
        delta_sq_times_fhat: 0.0,
        delta_times_fhat: 0.0,
    };
    for y in f.group().elements() {
        let d = delta_from_real(pi, &real, y);
        let anti = d.mul(fhat_block).add(&fhat_block.mul(&d));
        out.anticommutator = out.anticommutator.max(anti.frobenius_norm());
        let dsq_fhat = d.mul(&d).mul(fhat_block);
        out.delta_sq_times_fhat = out.delta_sq_times_fhat.max(dsq_fhat.frobenius_norm());
        let d_fhat = d.mul(fhat_block);
        out.delta_times_fhat = out.delta_times_fhat.max(d_fhat.frobenius_norm());
    }
    Ok(out)
}
