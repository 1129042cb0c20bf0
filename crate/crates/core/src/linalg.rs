//! Nullspace and orthonormal completion helpers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::statevector::{norm, C64, ONE, ZERO};
use crate::unitary::CMatrix;

/// Singular values below this count as zero.
pub const NULLSPACE_TOL: f64 = 1e-9;

/// Orthonormal basis of the common null space of `ops`.
///
/// The candidate right-singular vectors of the stacked operator
/// `[A_1; A_2; ...]` are the eigenvectors of `sum A_k^dagger A_k`. Each
/// candidate's singular value is then measured directly as
/// `sqrt(sum |A_k v|^2)` and kept when it falls below `threshold`.
pub fn common_nullspace(ops: &[CMatrix], threshold: f64) -> Vec<DVector<C64>> {
    let Some(first) = ops.first() else {
        return Vec::new();
    };
    let dim = first.ncols();
    let mut gram = CMatrix::zeros(dim, dim);
    for op in ops {
        gram += op.adjoint() * op;
    }

    let scale = gram.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let is_real = gram.iter().all(|z| z.im.abs() <= 1e-14 * scale);
    let eigenvectors: CMatrix = if is_real {
        let re = DMatrix::from_fn(dim, dim, |i, j| gram[(i, j)].re);
        SymmetricEigen::new(re)
            .eigenvectors
            .map(|x| C64::new(x, 0.0))
    } else {
        SymmetricEigen::new(gram).eigenvectors
    };

    eigenvectors
        .column_iter()
        .map(|c| c.into_owned())
        .filter(|v| singular_value(ops, v) < threshold)
        .collect()
}

/// `sqrt(sum_k |A_k v|^2)` for a unit vector `v`.
pub fn singular_value(ops: &[CMatrix], v: &DVector<C64>) -> f64 {
    ops.iter()
        .map(|op| (op * v).norm_squared())
        .sum::<f64>()
        .sqrt()
}

/// Extends orthonormal `seed` vectors to a full orthonormal basis of
/// `C^dim` by Gram-Schmidt over the computational basis in index order.
/// Seeds come first in the result, unchanged.
pub fn complete_basis(seed: &[Vec<C64>], dim: usize) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = seed.to_vec();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        // two passes keep the result orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let c: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let n = norm(&v);
        if n > 1e-8 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    basis
}
