//! Kernel registry and Gram-matrix construction over finite point sets.
//!
//! Four kernel families with known positive definiteness are supported;
//! extension is by adding a variant, not by arbitrary callables, so the
//! PSD diagnostics stay meaningful.

use crate::error::{KmlError, Result};
use crate::linalg;
use crate::{C64, CMatrix};

/// Minimum pairwise Euclidean distance allowed inside a [`PointSet`].
pub const DISTINCTNESS_FLOOR: f64 = 1e-9;

/// Relative PSD tolerance: a Gram matrix is accepted when its minimum
/// eigenvalue is at least `-PSD_RTOL * m * max_diagonal`.
pub const PSD_RTOL: f64 = 1e-8;

/// A point of the base set: a real coordinate vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(KmlError::InvalidParameter("point dimension must be >= 1".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(KmlError::NonFinite("point coordinate"));
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    fn dist(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    fn dot(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// An ordered finite point set with a distinctness floor on pairwise
/// distances: duplicates are a user error, near-duplicates a conditioning
/// hazard.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(KmlError::InvalidParameter("point set must be nonempty".into()));
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(KmlError::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let dist = points[i].dist(&points[j]);
                if dist < DISTINCTNESS_FLOOR {
                    return Err(KmlError::DuplicatePoints { i, j, dist });
                }
            }
        }
        Ok(Self { points })
    }

    /// Convenience constructor for 1-dimensional point sets.
    pub fn from_scalars(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Point::new(vec![x])).collect::<Result<_>>()?)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Index of `y` in the set, matched to within the distinctness floor.
    pub fn index_of(&self, y: &Point) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p.dist(y) < DISTINCTNESS_FLOOR)
            .ok_or(KmlError::PointNotInSet)
    }
}

/// Kernel family with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// `exp(-gamma * ||x - y||^2)`, gamma > 0.
    Gaussian { gamma: f64 },
    /// `exp(-gamma * ||x - y||)`, gamma > 0.
    Laplacian { gamma: f64 },
    /// `(<x, y> + offset)^degree`, degree >= 1, offset >= 0.
    Polynomial { degree: u32, offset: f64 },
    /// `min(x, y)` on strictly positive scalars (d = 1 only).
    BrownianMin,
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Gaussian { gamma } | KernelSpec::Laplacian { gamma } => {
                if !(*gamma > 0.0 && gamma.is_finite()) {
                    return Err(KmlError::InvalidParameter(format!(
                        "kernel bandwidth gamma must be positive and finite, got {gamma}"
                    )));
                }
            }
            KernelSpec::Polynomial { degree, offset } => {
                if *degree < 1 {
                    return Err(KmlError::InvalidParameter("polynomial degree must be >= 1".into()));
                }
                if !(*offset >= 0.0 && offset.is_finite()) {
                    return Err(KmlError::InvalidParameter(format!(
                        "polynomial offset must be nonnegative and finite, got {offset}"
                    )));
                }
            }
            KernelSpec::BrownianMin => {}
        }
        Ok(())
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        if let KernelSpec::BrownianMin = self {
            if p.dim() != 1 {
                return Err(KmlError::DimensionMismatch { expected: 1, got: p.dim() });
            }
            if p.coords()[0] <= 0.0 {
                return Err(KmlError::InvalidParameter(
                    "min kernel requires strictly positive coordinates".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Gaussian { .. } => "gaussian",
            KernelSpec::Laplacian { .. } => "laplacian",
            KernelSpec::Polynomial { .. } => "polynomial",
            KernelSpec::BrownianMin => "brownian-min",
        }
    }
}

/// Evaluate `K(x, y)`. All four families are real-valued and symmetric, so
/// Hermitian symmetry holds exactly as computed.
pub fn eval_kernel(spec: &KernelSpec, x: &Point, y: &Point) -> Result<C64> {
    spec.validate()?;
    if x.dim() != y.dim() {
        return Err(KmlError::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    spec.check_point(x)?;
    spec.check_point(y)?;
    let value = match spec {
        KernelSpec::Gaussian { gamma } => {
            let d = x.dist(y);
            (-gamma * d * d).exp()
        }
        KernelSpec::Laplacian { gamma } => (-gamma * x.dist(y)).exp(),
        KernelSpec::Polynomial { degree, offset } => (x.dot(y) + offset).powi(*degree as i32),
        KernelSpec::BrownianMin => x.coords()[0].min(y.coords()[0]),
    };
    Ok(C64::new(value, 0.0))
}

/// Gram matrix `G[i][j] = K(x_i, x_j)` with its source recorded.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    matrix: CMatrix,
    points: PointSet,
    spec: KernelSpec,
}

impl GramMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.size())
            .map(|i| self.matrix[(i, i)].re)
            .fold(0.0_f64, f64::max)
    }

    /// PSD acceptance threshold for this matrix.
    pub fn psd_tolerance(&self) -> f64 {
        PSD_RTOL * self.size() as f64 * self.max_diagonal()
    }
}

/// Build the Gram matrix of `spec` on `points`, rejecting configurations
/// whose minimum eigenvalue falls below the scaled PSD tolerance.
pub fn gram(spec: &KernelSpec, points: &PointSet) -> Result<GramMatrix> {
    let m = points.len();
    let mut matrix = CMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            matrix[(i, j)] = eval_kernel(spec, points.point(i), points.point(j))?;
        }
    }
    let g = GramMatrix {
        matrix,
        points: points.clone(),
        spec: spec.clone(),
    };
    let floor = psd_floor(&g)?;
    let tol = g.psd_tolerance();
    if floor < -tol {
        return Err(KmlError::NotPsd { min_eig: floor, tol });
    }
    Ok(g)
}

/// Minimum eigenvalue of the Gram matrix. Non-Hermitian input is rejected.
pub fn psd_floor(g: &GramMatrix) -> Result<f64> {
    linalg::min_eigenvalue(g.matrix())
}
