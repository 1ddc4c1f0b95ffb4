//! Multiplication operators on finite RKHS models.
//!
//! The finite-model operator norm of `M_f` follows from the adjoint action
//! `M_f^* k_y = conj(f(y)) k_y`: for `h = sum_y a_y k_y`,
//! `<(c^2 - M_f M_f^*) h, h> >= 0` for all coefficient vectors `a` is
//! exactly positive semidefiniteness of `c^2 G - F G F^H` with
//! `F = diag(f)`. That one matrix inequality yields both the bisection
//! certificate and the generalized eigenproblem, which serve as independent
//! oracles for each other.

use std::sync::Arc;

use crate::error::{KmlError, Result};
use crate::kernels::{GramMatrix, PointSet};
use crate::linalg;
use crate::rkhs::{values_to_coeffs, RkhsBasis, SpanFunction};
use crate::{C64, CMatrix, CVector};

/// A candidate multiplier: complex values on the base point set.
#[derive(Debug, Clone)]
pub struct PointFunction {
    points: PointSet,
    values: CVector,
}

impl PointFunction {
    pub fn new(points: PointSet, values: CVector) -> Result<Self> {
        if values.len() != points.len() {
            return Err(KmlError::DimensionMismatch {
                expected: points.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(KmlError::NonFinite("multiplier value"));
        }
        Ok(Self { points, values })
    }

    pub fn constant(points: PointSet, c: C64) -> Result<Self> {
        let values = CVector::from_element(points.len(), c);
        Self::new(points, values)
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn values(&self) -> &CVector {
        &self.values
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0_f64, f64::max)
    }

    /// Pointwise product of two candidate multipliers.
    pub fn pointwise_mul(&self, other: &PointFunction) -> Result<PointFunction> {
        if self.points != other.points {
            return Err(KmlError::BaseMismatch);
        }
        PointFunction::new(self.points.clone(), self.values.component_mul(&other.values))
    }

    pub fn scale(&self, lambda: C64) -> PointFunction {
        PointFunction {
            points: self.points.clone(),
            values: &self.values * lambda,
        }
    }
}

/// How a multiplier-norm bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    PsdBisection,
    GeneralizedEig,
    TwoSpaceEig,
}

/// A certified operator-norm bound for a multiplication operator.
#[derive(Debug, Clone)]
pub struct MultiplierCertificate {
    pub bound: f64,
    pub method: NormMethod,
    /// PSD floor of `bound^2 G - F G F^H` at the certified bound.
    pub margin: f64,
    pub tolerance: f64,
}

fn check_same_points(f: &PointFunction, g: &GramMatrix) -> Result<()> {
    if f.points() != g.points() {
        return Err(KmlError::BaseMismatch);
    }
    Ok(())
}

/// `F G F^H` with `F = diag(f)`: entry `(i, j)` is `f_i G_ij conj(f_j)`.
fn conjugated_gram(f: &PointFunction, g: &CMatrix) -> CMatrix {
    let mut out = g.clone();
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            out[(i, j)] = f.values()[i] * g[(i, j)] * f.values()[j].conj();
        }
    }
    out
}

/// Apply `M_f` to a span element: multiply value vectors pointwise and
/// re-express in coefficients. On nondegenerate models this always succeeds;
/// for rank-deficient Grams the product can leave the space.
pub fn apply_multiplier(f: &PointFunction, h: &SpanFunction, tol: f64) -> Result<SpanFunction> {
    if f.points() != h.basis().points() {
        return Err(KmlError::BaseMismatch);
    }
    let product = f.values().component_mul(&h.value_vector());
    let (coeffs, _residual) = values_to_coeffs(h.basis(), &product, tol)?;
    SpanFunction::new(Arc::clone(h.basis()), coeffs)
}

/// Operator norm of `M_f` via the largest generalized eigenvalue of the
/// pencil `(F G F^H, G)` restricted to the numerical range of `G`.
pub fn multiplier_norm_eig(f: &PointFunction, g: &GramMatrix) -> Result<MultiplierCertificate> {
    check_same_points(f, g)?;
    let a = conjugated_gram(f, g.matrix());
    let lambda = linalg::max_generalized_eigenvalue(&a, g.matrix())?;
    let bound = lambda.max(0.0).sqrt();
    let test = g.matrix().scale(bound * bound) - &a;
    let margin = linalg::min_eigenvalue(&test)?;
    Ok(MultiplierCertificate {
        bound,
        method: NormMethod::GeneralizedEig,
        margin,
        tolerance: linalg::RANK_CUTOFF,
    })
}

/// Eigensolver-noise threshold for the PSD feasibility test of
/// `c^2 G - F G F^H` at the candidate bound `c`. Anything tighter rejects
/// exact answers; anything looser drags the bisection below the true norm
/// on ill-conditioned Grams, so the threshold must track the candidate
/// rather than the initial bracket.
pub fn psd_feasibility_tolerance(g: &CMatrix, conjugated: &CMatrix, c: f64) -> f64 {
    3e-14 * (g.norm() * (1.0 + c * c) + conjugated.norm())
}

/// Operator norm of `M_f` by bisection on `c`: the smallest `c` for which
/// `c^2 G - F G F^H` stays PSD within tolerance. Initial upper bound
/// `max|f| * sqrt(cond_2(G))` is always feasible.
pub fn multiplier_norm_bisect(
    f: &PointFunction,
    g: &GramMatrix,
    tol: f64,
) -> Result<MultiplierCertificate> {
    check_same_points(f, g)?;
    if !(tol > 0.0) {
        return Err(KmlError::InvalidParameter("bisection tolerance must be positive".into()));
    }
    let a = conjugated_gram(f, g.matrix());
    let hi_init = f.max_modulus() * linalg::cond2_on_range(g.matrix())?.sqrt() + tol;
    let floor_at = |c: f64| -> Result<f64> {
        linalg::min_eigenvalue(&(g.matrix().scale(c * c) - &a))
    };
    let feasible = |c: f64| -> Result<bool> {
        Ok(floor_at(c)? >= -psd_feasibility_tolerance(g.matrix(), &a, c))
    };

    let mut lo = 0.0_f64;
    if feasible(lo)? {
        return Ok(MultiplierCertificate {
            bound: 0.0,
            method: NormMethod::PsdBisection,
            margin: floor_at(0.0)?,
            tolerance: tol,
        });
    }
    let mut hi = hi_init;
    if !feasible(hi)? {
        return Err(KmlError::Internal(format!(
            "bisection bracket failure: upper bound {hi} not feasible"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(MultiplierCertificate {
        bound: hi,
        method: NormMethod::PsdBisection,
        margin: floor_at(hi)?,
        tolerance: tol,
    })
}

/// Operator norm of `M_f : H(G1) -> H(G2)` over the same point set, via the
/// pencil `(G1 F^H G2^+ F G1, G1)` on the range of `G1`. When the product
/// leaves `H(G2)` (possible only for rank-deficient `G2`) the instance is
/// infeasible.
pub fn multiplier_norm_two(
    f: &PointFunction,
    g1: &GramMatrix,
    g2: &GramMatrix,
) -> Result<MultiplierCertificate> {
    check_same_points(f, g1)?;
    check_same_points(f, g2)?;
    let m1 = g1.matrix();
    let m2 = g2.matrix();

    // Membership: the image value vectors F G1 e_j must lie in range(G2).
    let image = linalg::scale_rows(f.values(), m1);
    let q2 = linalg::range_basis(m2)?;
    let projected = &q2 * (q2.adjoint() * &image);
    let defect = (&image - projected).norm();
    let memb_tol = 1e-8 * (1.0 + image.norm());
    if defect > memb_tol {
        return Err(KmlError::Infeasible(format!(
            "product leaves the target space: projection defect {defect:e}"
        )));
    }

    let g2_pinv = linalg::pseudoinverse(m2)?;
    // a = G1 F^H G2^+ F G1 = B^H G2^+ B with B = F G1; symmetrize against
    // rounding.
    let a = image.adjoint() * &g2_pinv * &image;
    let a = (&a + a.adjoint()).scale(0.5);
    let lambda = linalg::max_generalized_eigenvalue(&a, m1)?;
    let bound = lambda.max(0.0).sqrt();
    Ok(MultiplierCertificate {
        bound,
        method: NormMethod::TwoSpaceEig,
        margin: 0.0,
        tolerance: linalg::RANK_CUTOFF,
    })
}

/// Max over base points `y` of the G-norm residual of
/// `A^* e_y = conj(f(y)) e_y`, where `A = G^{-1} F G` is the matrix of `M_f`
/// in coefficient space and `A^* = G^{-1} A^H G` its G-adjoint.
pub fn adjoint_identity_check(f: &PointFunction, g: &GramMatrix) -> Result<f64> {
    check_same_points(f, g)?;
    let m = g.matrix();
    let min_eig = linalg::min_eigenvalue(m)?;
    if min_eig < 1e-10 * g.max_diagonal() {
        return Err(KmlError::NearSingular(min_eig));
    }
    let fg = linalg::scale_rows(f.values(), m);
    let a = linalg::solve_hpd(m, &fg)?;
    let astar = linalg::solve_hpd(m, &(a.adjoint() * m))?;
    let mut max_residual = 0.0_f64;
    for y in 0..g.size() {
        let mut diff = astar.column(y).into_owned();
        diff[y] -= f.values()[y].conj();
        let gnorm_sq = (diff.adjoint() * m * &diff)[(0, 0)].re.max(0.0);
        max_residual = max_residual.max(gnorm_sq.sqrt());
    }
    Ok(max_residual)
}

/// Per-axiom residuals for the module action `pi(f, h) = f h` on a Hilbert
/// model: linearity in each slot, multiplicativity, and boundedness against
/// the certified multiplier norm. All residuals are relative.
#[derive(Debug, Clone)]
pub struct HilbertRepReport {
    pub linear_in_vector: f64,
    pub linear_in_function: f64,
    pub multiplicative: f64,
    /// positive part of `||f h|| - ||M_f|| ||h||`, relative
    pub bounded_excess: f64,
}

impl HilbertRepReport {
    pub fn max_residual(&self) -> f64 {
        self.linear_in_vector
            .max(self.linear_in_function)
            .max(self.multiplicative)
            .max(self.bounded_excess)
    }
}

/// Verify the four module-action axioms by value-vector comparison.
pub fn representation_check_hilbert(
    basis: &Arc<RkhsBasis>,
    f1: &PointFunction,
    f2: &PointFunction,
    h1: &SpanFunction,
    h2: &SpanFunction,
    alpha: C64,
    beta: C64,
) -> Result<HilbertRepReport> {
    let tol = 1e-8;
    let rel = |a: &CVector, b: &CVector| -> f64 {
        (a - b).norm() / (1.0 + a.norm().max(b.norm()))
    };
    let pi = |f: &PointFunction, h: &SpanFunction| -> Result<CVector> {
        Ok(apply_multiplier(f, h, tol)?.value_vector())
    };

    // (a) pi(f1, alpha h1 + beta h2) = alpha pi(f1, h1) + beta pi(f1, h2)
    let combo = SpanFunction::new(
        Arc::clone(basis),
        h1.coeffs() * alpha + h2.coeffs() * beta,
    )?;
    let lhs_a = pi(f1, &combo)?;
    let rhs_a = pi(f1, h1)? * alpha + pi(f1, h2)? * beta;
    let linear_in_vector = rel(&lhs_a, &rhs_a);

    // (b) pi(alpha f1 + beta f2, h1) = alpha pi(f1, h1) + beta pi(f2, h1)
    let f_combo = PointFunction::new(
        f1.points().clone(),
        f1.values() * alpha + f2.values() * beta,
    )?;
    let lhs_b = pi(&f_combo, h1)?;
    let rhs_b = pi(f1, h1)? * alpha + pi(f2, h1)? * beta;
    let linear_in_function = rel(&lhs_b, &rhs_b);

    // (c) pi(f1 f2, h1) = pi(f1, pi(f2, h1))
    let lhs_c = pi(&f1.pointwise_mul(f2)?, h1)?;
    let inner = apply_multiplier(f2, h1, tol)?;
    let rhs_c = pi(f1, &inner)?;
    let multiplicative = rel(&lhs_c, &rhs_c);

    // (d) ||pi(f1, h1)|| <= ||M_f1|| ||h1||
    let cert = multiplier_norm_eig(f1, basis.gram())?;
    let fh = apply_multiplier(f1, h1, tol)?;
    let bound = cert.bound * h1.norm();
    let bounded_excess = ((fh.norm() - bound).max(0.0)) / (1.0 + bound);

    Ok(HilbertRepReport {
        linear_in_vector,
        linear_in_function,
        multiplicative,
        bounded_excess,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelSpec;
    use crate::sampling;

    fn gaussian_basis(xs: &[f64]) -> Arc<RkhsBasis> {
        RkhsBasis::new(
            KernelSpec::Gaussian { gamma: 1.0 },
            PointSet::from_scalars(xs).unwrap(),
        )
        .unwrap()
    }

    fn random_function(rng: &mut impl rand::Rng, points: &PointSet) -> PointFunction {
        PointFunction::new(points.clone(), sampling::complex_vector(rng, points.len())).unwrap()
    }

    #[test]
    fn identity_multiplier_preserves_values() {
        let basis = gaussian_basis(&[0.0, 1.0, 2.0]);
        let mut rng = sampling::rng_for(1, 0);
        let h = SpanFunction::new(Arc::clone(&basis), sampling::complex_vector(&mut rng, 3)).unwrap();
        let one = PointFunction::constant(basis.points().clone(), C64::new(1.0, 0.0)).unwrap();
        let fh = apply_multiplier(&one, &h, 1e-8).unwrap();
        assert!((fh.value_vector() - h.value_vector()).norm() < 1e-10);
    }

    #[test]
    fn zero_multiplier_gives_zero() {
        let basis = gaussian_basis(&[0.0, 1.0]);
        let h = SpanFunction::section(Arc::clone(&basis), 0).unwrap();
        let zero = PointFunction::constant(basis.points().clone(), C64::new(0.0, 0.0)).unwrap();
        let fh = apply_multiplier(&zero, &h, 1e-8).unwrap();
        assert!(fh.value_vector().norm() < 1e-14);
    }

    #[test]
    fn singleton_model_scales_by_value() {
        let basis = gaussian_basis(&[0.5]);
        let h = SpanFunction::section(Arc::clone(&basis), 0).unwrap();
        let f = PointFunction::new(
            basis.points().clone(),
            CVector::from_vec(vec![C64::new(2.0, 1.0)]),
        )
        .unwrap();
        let fh = apply_multiplier(&f, &h, 1e-8).unwrap();
        let kxx = basis.gram().matrix()[(0, 0)];
        assert!((fh.value_vector()[0] - f.values()[0] * kxx).norm() < 1e-12);
    }

    #[test]
    fn constant_multiplier_norm_is_modulus() {
        let basis = gaussian_basis(&[0.0, 1.0, 2.0]);
        let c = C64::new(-1.5, 2.0);
        let f = PointFunction::constant(basis.points().clone(), c).unwrap();
        let eig = multiplier_norm_eig(&f, basis.gram()).unwrap();
        assert!((eig.bound - c.norm()).abs() <= 1e-12 * (1.0 + c.norm()));
    }

    #[test]
    fn zero_function_bisect_norm_is_zero() {
        let basis = gaussian_basis(&[0.0, 1.0]);
        let f = PointFunction::constant(basis.points().clone(), C64::new(0.0, 0.0)).unwrap();
        let cert = multiplier_norm_bisect(&f, basis.gram(), 1e-8).unwrap();
        assert_eq!(cert.bound, 0.0);
    }

    #[test]
    fn oracle_agreement_on_linear_function() {
        // f(x) = x on a 3-point Gaussian model.
        let basis = gaussian_basis(&[0.0, 1.0, 2.0]);
        let f = PointFunction::new(
            basis.points().clone(),
            CVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0)]),
        )
        .unwrap();
        let eig = multiplier_norm_eig(&f, basis.gram()).unwrap();
        let bis = multiplier_norm_bisect(&f, basis.gram(), 1e-8).unwrap();
        assert!((eig.bound - bis.bound).abs() <= 1e-6 * (1.0 + eig.bound));
    }

    #[test]
    fn oracle_agreement_random_instances() {
        for trial in 0..25 {
            let mut rng = sampling::rng_for(42, trial);
            let set = sampling::separated_point_set(&mut rng, 6, 1, 0.3);
            let basis = RkhsBasis::new(KernelSpec::Gaussian { gamma: 1.0 }, set).unwrap();
            let f = random_function(&mut rng, basis.points());
            let eig = multiplier_norm_eig(&f, basis.gram()).unwrap();
            let bis = multiplier_norm_bisect(&f, basis.gram(), 1e-8).unwrap();
            assert!(
                (eig.bound - bis.bound).abs() <= 1e-6 * (1.0 + eig.bound),
                "trial {trial}: eig {} vs bisect {}",
                eig.bound,
                bis.bound
            );
        }
    }

    #[test]
    fn certificate_soundness() {
        let mut rng = sampling::rng_for(43, 0);
        let set = sampling::separated_point_set(&mut rng, 5, 1, 0.3);
        let basis = RkhsBasis::new(KernelSpec::Laplacian { gamma: 0.9 }, set).unwrap();
        let f = random_function(&mut rng, basis.points());
        let cert = multiplier_norm_bisect(&f, basis.gram(), 1e-8).unwrap();
        let a = conjugated_gram(&f, basis.gram().matrix());
        let psd_tol = psd_feasibility_tolerance(basis.gram().matrix(), &a, cert.bound + 1.0);
        assert!(cert.margin >= -psd_tol);
    }

    #[test]
    fn two_space_reduces_to_one_space() {
        let mut rng = sampling::rng_for(44, 0);
        let set = sampling::separated_point_set(&mut rng, 4, 1, 0.3);
        let basis = RkhsBasis::new(KernelSpec::Gaussian { gamma: 0.5 }, set).unwrap();
        let f = random_function(&mut rng, basis.points());
        let one_space = multiplier_norm_eig(&f, basis.gram()).unwrap();
        let two_space = multiplier_norm_two(&f, basis.gram(), basis.gram()).unwrap();
        assert!(
            (one_space.bound - two_space.bound).abs() <= 1e-6 * (1.0 + one_space.bound),
            "{} vs {}",
            one_space.bound,
            two_space.bound
        );
    }

    #[test]
    fn two_space_identity_grams() {
        // At gamma large the Gaussian Gram is numerically the identity;
        // f = 1 then has norm 1.
        let set = PointSet::from_scalars(&[0.0, 100.0, 200.0]).unwrap();
        let basis = RkhsBasis::new(KernelSpec::Gaussian { gamma: 5.0 }, set).unwrap();
        let f = PointFunction::constant(basis.points().clone(), C64::new(1.0, 0.0)).unwrap();
        let cert = multiplier_norm_two(&f, basis.gram(), basis.gram()).unwrap();
        assert!((cert.bound - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_space_certified_value_dominates_random_search() {
        // M_f : H(Gaussian) -> H(Polynomial) with f = 1; the certified norm
        // must dominate ||h||_2 / ||h||_1 for random h in H_1. Points are
        // 2-dimensional so the degree-2 polynomial Gram has full rank.
        let set = PointSet::new(vec![
            crate::kernels::Point::new(vec![0.1, 0.3]).unwrap(),
            crate::kernels::Point::new(vec![0.9, -0.4]).unwrap(),
            crate::kernels::Point::new(vec![1.7, 0.8]).unwrap(),
            crate::kernels::Point::new(vec![-0.6, 1.2]).unwrap(),
        ])
        .unwrap();
        let b1 = RkhsBasis::new(KernelSpec::Gaussian { gamma: 1.0 }, set.clone()).unwrap();
        let b2 = RkhsBasis::new(KernelSpec::Polynomial { degree: 2, offset: 1.0 }, set.clone()).unwrap();
        let f = PointFunction::constant(set, C64::new(1.0, 0.0)).unwrap();
        let cert = multiplier_norm_two(&f, b1.gram(), b2.gram()).unwrap();

        let mut rng = sampling::rng_for(45, 0);
        let mut best_ratio = 0.0_f64;
        for _ in 0..10_000 {
            let c = sampling::complex_vector(&mut rng, 4);
            let h1 = SpanFunction::new(Arc::clone(&b1), c).unwrap();
            let n1 = h1.norm();
            if n1 < 1e-8 {
                continue;
            }
            let (c2, _) = values_to_coeffs(&b2, &h1.value_vector(), 1e-6).unwrap();
            let h2 = SpanFunction::new(Arc::clone(&b2), c2).unwrap();
            best_ratio = best_ratio.max(h2.norm() / n1);
        }
        assert!(best_ratio <= cert.bound * (1.0 + 1e-9), "search {best_ratio} > cert {}", cert.bound);
        // The random-search lower bound should come close on a 4-point model.
        assert!(best_ratio >= cert.bound * (1.0 - 1e-1));
    }

    #[test]
    fn adjoint_identity_trivial_cases() {
        let basis = gaussian_basis(&[0.0, 1.0, 2.0]);
        for c in [C64::new(1.0, 0.0), C64::new(0.0, 0.0)] {
            let f = PointFunction::constant(basis.points().clone(), c).unwrap();
            let r = adjoint_identity_check(&f, basis.gram()).unwrap();
            assert!(r < 1e-12, "residual {r} for constant {c}");
        }
    }

    #[test]
    fn adjoint_identity_random() {
        for trial in 0..20 {
            let mut rng = sampling::rng_for(46, trial);
            let set = sampling::separated_point_set(&mut rng, 8, 1, 0.3);
            let basis = match RkhsBasis::new(KernelSpec::Gaussian { gamma: 1.0 }, set) {
                Ok(b) => b,
                Err(_) => continue, // near-singular configuration
            };
            if linalg::min_eigenvalue(basis.gram().matrix()).unwrap()
                < 1e-10 * basis.gram().max_diagonal()
            {
                continue;
            }
            let f = random_function(&mut rng, basis.points());
            let r = adjoint_identity_check(&f, basis.gram()).unwrap();
            let scale = (1.0 + f.max_modulus()) * linalg::spectral_norm(basis.gram().matrix());
            assert!(r <= 1e-9 * scale, "trial {trial}: residual {r} vs scale {scale}");
        }
    }

    #[test]
    fn scaling_covariance() {
        let mut rng = sampling::rng_for(47, 0);
        let set = sampling::separated_point_set(&mut rng, 5, 1, 0.3);
        let basis = RkhsBasis::new(KernelSpec::Gaussian { gamma: 1.0 }, set).unwrap();
        let f = random_function(&mut rng, basis.points());
        let lambda = C64::new(-2.0, 3.0);
        let base = multiplier_norm_eig(&f, basis.gram()).unwrap().bound;
        let scaled = multiplier_norm_eig(&f.scale(lambda), basis.gram()).unwrap().bound;
        assert!((scaled - lambda.norm() * base).abs() <= 1e-9 * (1.0 + scaled));
    }

    #[test]
    fn submultiplicativity() {
        let mut rng = sampling::rng_for(48, 0);
        let set = sampling::separated_point_set(&mut rng, 6, 1, 0.3);
        let basis = RkhsBasis::new(KernelSpec::Gaussian { gamma: 1.0 }, set).unwrap();
        for _ in 0..10 {
            let f1 = random_function(&mut rng, basis.points());
            let f2 = random_function(&mut rng, basis.points());
            let n1 = multiplier_norm_eig(&f1, basis.gram()).unwrap().bound;
            let n2 = multiplier_norm_eig(&f2, basis.gram()).unwrap().bound;
            let n12 = multiplier_norm_eig(&f1.pointwise_mul(&f2).unwrap(), basis.gram())
                .unwrap()
                .bound;
            assert!(n12 <= n1 * n2 * (1.0 + 1e-9), "{n12} > {n1} * {n2}");
        }
    }

    #[test]
    fn representation_axioms_random() {
        for trial in 0..25 {
            let mut rng = sampling::rng_for(49, trial);
            let set = sampling::separated_point_set(&mut rng, 6, 1, 0.3);
            let basis = RkhsBasis::new(KernelSpec::Gaussian { gamma: 1.0 }, set).unwrap();
            let f1 = random_function(&mut rng, basis.points());
            let f2 = random_function(&mut rng, basis.points());
            let h1 = SpanFunction::new(Arc::clone(&basis), sampling::complex_vector(&mut rng, 6)).unwrap();
            let h2 = SpanFunction::new(Arc::clone(&basis), sampling::complex_vector(&mut rng, 6)).unwrap();
            let alpha = sampling::complex_scalar(&mut rng);
            let beta = sampling::complex_scalar(&mut rng);
            let report =
                representation_check_hilbert(&basis, &f1, &f2, &h1, &h2, alpha, beta).unwrap();
            assert!(report.max_residual() <= 1e-9, "trial {trial}: {report:?}");
        }
    }

    #[test]
    fn representation_identity_multiplier() {
        let basis = gaussian_basis(&[0.0, 1.0]);
        let one = PointFunction::constant(basis.points().clone(), C64::new(1.0, 0.0)).unwrap();
        let h = SpanFunction::section(Arc::clone(&basis), 1).unwrap();
        let fh = apply_multiplier(&one, &h, 1e-8).unwrap();
        assert!((fh.value_vector() - h.value_vector()).norm() < 1e-12);
    }
}
