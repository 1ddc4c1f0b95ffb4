//! Shared dense linear algebra: Hermitian eigendecompositions, rank-revealing
//! SVD helpers, and generalized eigenvalues of Hermitian pencils restricted to
//! the numerical range of the right-hand matrix.

use crate::error::{KmlError, Result};
use crate::{CMatrix, CVector};
#[cfg(test)]
use crate::C64;

/// Relative singular-value cutoff: anything below `RANK_CUTOFF * largest`
/// is treated as zero.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Max over (i, j) of |a[i][j] - conj(a[j][i])|.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let mut defect = 0.0_f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            defect = defect.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    defect
}

fn require_hermitian(a: &CMatrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(KmlError::DimensionMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    let scale = a.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let defect = hermiticity_defect(a);
    if defect > 1e-12 * (1.0 + scale) {
        return Err(KmlError::NotHermitian(defect));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix. Returns (eigenvalues, eigenvectors)
/// with eigenvalues sorted ascending and eigenvector columns matching.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    require_hermitian(a)?;
    // Symmetrize exactly so the decomposition sees a bit-Hermitian input.
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    Ok((values, vectors))
}

/// Minimum eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &CMatrix) -> Result<f64> {
    let (values, _) = hermitian_eigen(a)?;
    Ok(values[0])
}

/// Largest singular value.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values[0]
}

/// Minimum-norm least-squares solution of `a x = b` with singular values below
/// `RANK_CUTOFF * largest` treated as zero. Returns `(x, ||a x - b||_2)`.
pub fn lstsq(a: &CMatrix, b: &CVector) -> Result<(CVector, f64)> {
    if a.nrows() != b.len() {
        return Err(KmlError::DimensionMismatch {
            expected: a.nrows(),
            got: b.len(),
        });
    }
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let x = if sigma_max == 0.0 {
        CVector::zeros(a.ncols())
    } else {
        svd.solve(b, RANK_CUTOFF * sigma_max)
            .map_err(|e| KmlError::Internal(e.to_string()))?
    };
    let residual = (a * &x - b).norm();
    Ok((x, residual))
}

/// Rank-tolerant Moore-Penrose pseudoinverse.
pub fn pseudoinverse(a: &CMatrix) -> Result<CMatrix> {
    let sigma_max = spectral_norm(a);
    if sigma_max == 0.0 {
        return Ok(CMatrix::zeros(a.ncols(), a.nrows()));
    }
    a.clone()
        .pseudo_inverse(RANK_CUTOFF * sigma_max)
        .map_err(|e| KmlError::Internal(e.to_string()))
}

/// Orthonormal basis of the column space of `a` (singular vectors with
/// singular value above the cutoff).
pub fn range_basis(a: &CMatrix) -> Result<CMatrix> {
    let svd = a.clone().svd(true, false);
    let u = svd
        .u
        .as_ref()
        .ok_or_else(|| KmlError::Internal("svd did not return u".into()))?;
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cols: Vec<_> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > RANK_CUTOFF * sigma_max && sigma_max > 0.0)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        return Ok(CMatrix::zeros(a.nrows(), 0));
    }
    Ok(CMatrix::from_columns(&cols))
}

/// Numerical rank of `a` at the relative cutoff.
pub fn rank(a: &CMatrix) -> usize {
    let svd = a.clone().svd(false, false);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    if sigma_max == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > RANK_CUTOFF * sigma_max)
        .count()
}

/// Largest generalized eigenvalue of the Hermitian pencil `(a, g)` restricted
/// to the numerical range of `g` (which must be PSD). Eigenvalues of `g` below
/// `RANK_CUTOFF * lambda_max(g)` are dropped.
pub fn max_generalized_eigenvalue(a: &CMatrix, g: &CMatrix) -> Result<f64> {
    require_hermitian(a)?;
    let (g_values, g_vectors) = hermitian_eigen(g)?;
    let lambda_max = g_values.iter().cloned().fold(0.0_f64, f64::max);
    if lambda_max <= 0.0 {
        return Err(KmlError::NearSingular(lambda_max));
    }
    let kept: Vec<usize> = (0..g_values.len())
        .filter(|&i| g_values[i] > RANK_CUTOFF * lambda_max)
        .collect();
    if kept.is_empty() {
        return Err(KmlError::NearSingular(lambda_max));
    }
    // Whitening basis S = U_r diag(lambda_r^{-1/2}); the pencil becomes an
    // ordinary Hermitian eigenproblem for S^H A S.
    let s = CMatrix::from_columns(
        &kept
            .iter()
            .map(|&i| {
                g_vectors
                    .column(i)
                    .into_owned()
                    .scale(1.0 / g_values[i].sqrt())
            })
            .collect::<Vec<_>>(),
    );
    let reduced = s.adjoint() * a * &s;
    let sym = (&reduced + reduced.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    Ok(eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}

/// 2-norm condition number of a Hermitian PSD matrix restricted to its
/// numerical range.
pub fn cond2_on_range(g: &CMatrix) -> Result<f64> {
    let (values, _) = hermitian_eigen(g)?;
    let lambda_max = values.iter().cloned().fold(0.0_f64, f64::max);
    if lambda_max <= 0.0 {
        return Err(KmlError::NearSingular(lambda_max));
    }
    let lambda_min_kept = values
        .iter()
        .cloned()
        .filter(|&v| v > RANK_CUTOFF * lambda_max)
        .fold(f64::INFINITY, f64::min);
    Ok(lambda_max / lambda_min_kept)
}

/// Solve `g x = b` for Hermitian positive-definite `g` via Cholesky.
pub fn solve_hpd(g: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let sym = (g + g.adjoint()).scale(0.5);
    let chol = sym
        .cholesky()
        .ok_or_else(|| KmlError::NearSingular(f64::NAN))?;
    Ok(chol.solve(b))
}

/// Entrywise product `diag(f) * a` (scales row i of `a` by `f[i]`).
pub fn scale_rows(f: &CVector, a: &CMatrix) -> CMatrix {
    let mut out = a.clone();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            out[(i, j)] *= f[i];
        }
    }
    out
}
