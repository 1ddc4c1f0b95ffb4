//! Finite-span RKHS arithmetic over a base point set.
//!
//! On a finite set the space is exactly the range of the Gram matrix, so
//! elements are represented losslessly as coefficient vectors over the
//! kernel sections `k_{x_i} = K(., x_i)`. Coefficients are non-unique
//! precisely on the Gram nullspace; "same function" means equal value
//! vectors `G c`.

use std::sync::Arc;

use crate::error::{KmlError, Result};
use crate::kernels::{eval_kernel, gram, GramMatrix, KernelSpec, Point, PointSet};
use crate::linalg;
use crate::{C64, CVector};

/// Shared base of a finite RKHS model: the point set, the kernel, and the
/// Gram matrix computed once at construction.
#[derive(Debug)]
pub struct RkhsBasis {
    points: PointSet,
    spec: KernelSpec,
    gram: GramMatrix,
}

impl RkhsBasis {
    pub fn new(spec: KernelSpec, points: PointSet) -> Result<Arc<Self>> {
        let gram = gram(&spec, &points)?;
        Ok(Arc::new(Self { points, spec, gram }))
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn same_as(&self, other: &RkhsBasis) -> bool {
        std::ptr::eq(self, other) || (self.points == other.points && self.spec == other.spec)
    }
}

/// An RKHS element `f = sum_i c_i k_{x_i}` as a coefficient vector over the
/// kernel sections of the base set.
#[derive(Debug, Clone)]
pub struct SpanFunction {
    basis: Arc<RkhsBasis>,
    coeffs: CVector,
}

impl SpanFunction {
    pub fn new(basis: Arc<RkhsBasis>, coeffs: CVector) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(KmlError::DimensionMismatch {
                expected: basis.len(),
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(KmlError::NonFinite("span coefficient"));
        }
        Ok(Self { basis, coeffs })
    }

    /// The kernel section `k_{x_i}` as a span element (coefficient vector `e_i`).
    pub fn section(basis: Arc<RkhsBasis>, i: usize) -> Result<Self> {
        if i >= basis.len() {
            return Err(KmlError::IndexOutOfRange { index: i, size: basis.len() });
        }
        let mut coeffs = CVector::zeros(basis.len());
        coeffs[i] = C64::new(1.0, 0.0);
        Self::new(basis, coeffs)
    }

    pub fn basis(&self) -> &Arc<RkhsBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &CVector {
        &self.coeffs
    }

    /// Values of `f` on the base set: `(G c)_i = f(x_i)`.
    pub fn value_vector(&self) -> CVector {
        self.basis.gram.matrix() * &self.coeffs
    }

    /// `f(y) = sum_i c_i K(y, x_i)` for any admissible point.
    pub fn evaluate(&self, y: &Point) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * eval_kernel(self.basis.spec(), y, self.basis.points().point(i))?;
        }
        Ok(acc)
    }

    /// `<f, g> = sum_{i,j} c_i conj(d_j) <k_{x_i}, k_{x_j}> = d^H G c`.
    pub fn inner(&self, other: &SpanFunction) -> Result<C64> {
        if !self.basis.same_as(&other.basis) {
            return Err(KmlError::BaseMismatch);
        }
        Ok((other.coeffs.adjoint() * self.value_vector())[(0, 0)])
    }

    /// `sqrt(max(<f, f>, 0))`; the clamp covers rounding on PSD Grams.
    pub fn norm(&self) -> f64 {
        let sq = self.inner(self).expect("inner with self cannot mismatch").re;
        sq.max(0.0).sqrt()
    }
}

/// `||E_y|| = sqrt(K(y, y))`.
pub fn eval_functional_norm(spec: &KernelSpec, y: &Point) -> Result<f64> {
    let kyy = eval_kernel(spec, y, y)?;
    if kyy.re < 0.0 {
        return Err(KmlError::InvalidParameter(format!(
            "K(y, y) = {} is negative",
            kyy.re
        )));
    }
    Ok(kyy.re.sqrt())
}

/// Express a value vector over X in span coefficients by rank-revealing
/// least squares on the Gram matrix. Returns the coefficients and the
/// residual `||G c - values||_2`; a residual above `tol * ||values||` means
/// the values are not in the range of G.
pub fn values_to_coeffs(basis: &Arc<RkhsBasis>, values: &CVector, tol: f64) -> Result<(CVector, f64)> {
    if values.len() != basis.len() {
        return Err(KmlError::DimensionMismatch {
            expected: basis.len(),
            got: values.len(),
        });
    }
    let (coeffs, residual) = linalg::lstsq(basis.gram().matrix(), values)?;
    let bound = tol * values.norm();
    if residual > bound && values.norm() > 0.0 {
        return Err(KmlError::NotInSpace { residual, tol: bound });
    }
    Ok((coeffs, residual))
}

/// `|<f, k_y> - f(y)|` for a base point `y`; the reproducing identity makes
/// this vanish up to rounding.
pub fn reproducing_residual(f: &SpanFunction, y: &Point) -> Result<f64> {
    let idx = f.basis().points().index_of(y)?;
    let section = SpanFunction::section(Arc::clone(f.basis()), idx)?;
    let lhs = f.inner(&section)?;
    let rhs = f.evaluate(y)?;
    Ok((lhs - rhs).norm())
}
