//! The nonabelian Fourier transform over a complete irrep basis, its
//! inversion formula, and left/right translation of group functions.

use crate::group::GroupFunction;
use crate::matrix::CMatrix;
use crate::repr::{IrrepBasis, ReprError};
use num_complex::Complex64;
use std::sync::Arc;

/// Which side a translation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `(L_y f)(x) = f(y^-1 x)`
    Left,
    /// `(R_y f)(x) = f(x y)`
    Right,
}

/// Fourier coefficients of a function: one `d_k x d_k` block per irrep in
/// the basis.
#[derive(Debug, Clone)]
pub struct FourierCoefficients {
    basis: Arc<IrrepBasis>,
    blocks: Vec<CMatrix>,
}

impl FourierCoefficients {
    /// Wraps raw blocks, checking the shape against the basis.
    pub fn new(basis: Arc<IrrepBasis>, blocks: Vec<CMatrix>) -> Result<Self, ReprError> {
        if blocks.len() != basis.len() {
            return Err(ReprError::InvalidBasis(format!(
                "{} blocks for {} irreps",
                blocks.len(),
                basis.len()
            )));
        }
        for (rep, block) in basis.irreps().iter().zip(&blocks) {
            if block.rows() != rep.dim() || block.cols() != rep.dim() {
                return Err(ReprError::WrongDimension {
                    expected: rep.dim(),
                    got: block.rows(),
                });
            }
        }
        Ok(Self { basis, blocks })
    }

    pub fn basis(&self) -> &Arc<IrrepBasis> {
        &self.basis
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &CMatrix {
        &self.blocks[k]
    }

    /// Largest Frobenius distance between corresponding blocks.
    pub fn distance(&self, other: &FourierCoefficients) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

/// Fourier transform: `f_hat(pi) = d_pi * (1/n) * sum_x f(x) pi(x)^-1`, with
/// `pi(x)^-1` computed as the conjugate transpose (the matrices are unitary by
/// module invariant, and the adjoint is exact). Linear in `f`.
pub fn transform(
    f: &GroupFunction,
    basis: &Arc<IrrepBasis>,
) -> Result<FourierCoefficients, ReprError> {
    if !(Arc::ptr_eq(f.group(), basis.group()) || f.group().same_structure(basis.group())) {
        return Err(ReprError::GroupMismatch);
    }
    let n = f.group().order();
    let blocks = basis
        .irreps()
        .iter()
        .map(|rep| {
            let d = rep.dim();
            let mut acc = CMatrix::zeros(d, d);
            for x in 0..n {
                acc = acc.add(&rep.matrix(x).adjoint().scale(f.value(x)));
            }
            acc.scale(Complex64::new(d as f64 / n as f64, 0.0))
        })
        .collect();
    FourierCoefficients::new(basis.clone(), blocks)
}

/// Fourier inversion: `f(x) = sum_pi tr(f_hat(pi) * pi(x))`.
pub fn inverse(coeffs: &FourierCoefficients) -> GroupFunction {
    let basis = coeffs.basis();
    GroupFunction::from_fn(basis.group().clone(), |x| {
        basis
            .irreps()
            .iter()
            .zip(coeffs.blocks())
            .map(|(rep, block)| block.mul(rep.matrix(x)).trace())
            .sum()
    })
}

/// Translation of a function by a group element on the chosen side.
pub fn translate(f: &GroupFunction, y: usize, side: Side) -> GroupFunction {
    let group = f.group().clone();
    match side {
        Side::Left => {
            let y_inv = group.inv(y);
            GroupFunction::from_fn(group.clone(), |x| f.value(group.mul(y_inv, x)))
        }
        Side::Right => GroupFunction::from_fn(group.clone(), |x| f.value(group.mul(x, y))),
    }
}
