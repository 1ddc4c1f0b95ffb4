//! Semi-inner products on finite-dimensional ℓ^p (1 < p < ∞), the
//! normalized duality map and its inverse, and the adjoint pairing.
//!
//! The pairing is the Giles construction
//! `[x, y] = ||y||_p^{2-p} sum_j x_j conj(y_j) |y_j|^{p-2}`, the canonical
//! semi-inner product compatible with the ℓ^p norm. Functionals are
//! coordinate vectors under the bilinear pairing `g(f) = sum_j g_j f_j`;
//! the conjugations live inside the duality map, which makes the Riesz
//! statement `g = h*` literally computable.


use crate::error::{KmlError, Result};
use crate::sampling;
use crate::{C64, CMatrix, CVector};

/// Finite-dimensional ℓ^p space with its conjugate exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct SipSpace {
    dim: usize,
    p: f64,
    q: f64,
}

impl SipSpace {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        if dim < 1 {
            return Err(KmlError::InvalidParameter("dimension must be >= 1".into()));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(KmlError::InvalidParameter(format!(
                "exponent p must lie strictly inside (1, inf), got {p}"
            )));
        }
        Ok(Self { dim, p, q: p / (p - 1.0) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The dual space ℓ^q on the same coordinates.
    pub fn dual(&self) -> SipSpace {
        SipSpace { dim: self.dim, p: self.q, q: self.p }
    }

    fn check_len(&self, v: &CVector) -> Result<()> {
        if v.len() != self.dim {
            return Err(KmlError::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }
}

/// ℓ^p norm.
pub fn norm_p(v: &CVector, p: f64) -> f64 {
    v.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `[x, y]` via the Giles formula; `[x, 0] = 0` by convention (the limit
/// value, avoiding the 0/0 in the normalization).
pub fn sip_eval(space: &SipSpace, x: &CVector, y: &CVector) -> Result<C64> {
    space.check_len(x)?;
    space.check_len(y)?;
    let ny = norm_p(y, space.p);
    if ny == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..space.dim {
        let a = y[j].norm();
        if a > 0.0 {
            acc += x[j] * y[j].conj() * a.powf(space.p - 2.0);
        }
    }
    Ok(acc * ny.powf(2.0 - space.p))
}

/// Action of a functional under the bilinear pairing: `g(f) = sum_j g_j f_j`.
pub fn apply_functional(g: &CVector, f: &CVector) -> Result<C64> {
    if g.len() != f.len() {
        return Err(KmlError::DimensionMismatch { expected: g.len(), got: f.len() });
    }
    Ok(g.iter().zip(f.iter()).map(|(a, b)| a * b).sum())
}

/// Normalized duality map `J : ell^p -> ell^q`,
/// `J(y)_j = conj(y_j) |y_j|^{p-2} / ||y||_p^{p-2}`, so that
/// `J(y)(x) = [x, y]` and `||J(y)||_q = ||y||_p`.
pub fn duality_map(space: &SipSpace, y: &CVector) -> Result<CVector> {
    space.check_len(y)?;
    let ny = norm_p(y, space.p);
    if ny == 0.0 {
        return Ok(CVector::zeros(space.dim));
    }
    let scale = ny.powf(2.0 - space.p);
    Ok(CVector::from_fn(space.dim, |j, _| {
        let a = y[j].norm();
        if a > 0.0 {
            y[j].conj() * a.powf(space.p - 2.0) * scale
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Inverse of the duality map: the unique `h` with `duality_map(h) = g`,
/// given by the same formula with the conjugate exponent.
pub fn inverse_duality_map(space: &SipSpace, g: &CVector) -> Result<CVector> {
    space.check_len(g)?;
    let dual = space.dual();
    duality_map(&dual, g)
}

/// Adjoint of the matrix operator `T` under the bilinear pairing:
/// `(T^* g)(f) = g(T f)`, i.e. `T^* g = T^T g` in coordinates.
pub fn adjoint_apply(t: &CMatrix, g: &CVector) -> Result<CVector> {
    if t.nrows() != g.len() {
        return Err(KmlError::DimensionMismatch { expected: t.nrows(), got: g.len() });
    }
    Ok(t.transpose() * g)
}

/// Evidence record from [`riesz_check`].
#[derive(Debug, Clone)]
pub struct RieszReport {
    pub trials: usize,
    /// max over trials of `|g(f) - [f, h]|` with `h = J^{-1}(g)`.
    pub max_action_residual: f64,
    /// `| ||g||_q - ||h||_p |`.
    pub norm_residual: f64,
}

/// Numerical Riesz representation: recover `h` from `g` through the inverse
/// duality map and compare `g(f)` with `[f, h]` on random `f`.
pub fn riesz_check(space: &SipSpace, g: &CVector, trials: usize, seed: u64) -> Result<RieszReport> {
    if trials < 1 {
        return Err(KmlError::InvalidParameter("trials must be >= 1".into()));
    }
    let h = inverse_duality_map(space, g)?;
    let mut rng = sampling::rng_for(seed, 0);
    let mut max_action_residual = 0.0_f64;
    for _ in 0..trials {
        let f = sampling::complex_vector(&mut rng, space.dim);
        let lhs = apply_functional(g, &f)?;
        let rhs = sip_eval(space, &f, &h)?;
        max_action_residual = max_action_residual.max((lhs - rhs).norm());
    }
    let norm_residual = (norm_p(g, space.q) - norm_p(&h, space.p)).abs();
    Ok(RieszReport { trials, max_action_residual, norm_residual })
}

/// Residuals from [`sip_axioms_check`].
#[derive(Debug, Clone)]
pub struct SipAxiomsReport {
    pub trials: usize,
    /// first-slot additivity and homogeneity, relative
    pub first_slot_linearity: f64,
    /// second-slot conjugate homogeneity, relative
    pub conjugate_homogeneity: f64,
    /// max of `| [y, y] - ||y||_p^2 |` relative
    pub square_norm_residual: f64,
    /// max of `|[x, y]| - ||x|| ||y||`, positive part, relative
    pub cauchy_schwarz_excess: f64,
}

/// Randomized verification of the semi-inner-product axioms on `space`.
pub fn sip_axioms_check(space: &SipSpace, trials: usize, seed: u64) -> Result<SipAxiomsReport> {
    if trials < 1 {
        return Err(KmlError::InvalidParameter("trials must be >= 1".into()));
    }
    let mut rng = sampling::rng_for(seed, 1);
    let mut report = SipAxiomsReport {
        trials,
        first_slot_linearity: 0.0,
        conjugate_homogeneity: 0.0,
        square_norm_residual: 0.0,
        cauchy_schwarz_excess: 0.0,
    };
    for _ in 0..trials {
        let x = sampling::complex_vector(&mut rng, space.dim);
        let z = sampling::complex_vector(&mut rng, space.dim);
        let y = sampling::complex_vector(&mut rng, space.dim);
        let alpha = sampling::complex_scalar(&mut rng);
        let beta = sampling::complex_scalar(&mut rng);
        let lambda = sampling::complex_scalar(&mut rng);

        let combo = x.clone() * alpha + z.clone() * beta;
        let lhs = sip_eval(space, &combo, &y)?;
        let rhs = alpha * sip_eval(space, &x, &y)? + beta * sip_eval(space, &z, &y)?;
        let scale = 1.0 + lhs.norm().max(rhs.norm());
        report.first_slot_linearity = report.first_slot_linearity.max((lhs - rhs).norm() / scale);

        let scaled_y = y.clone() * lambda;
        let lhs2 = sip_eval(space, &x, &scaled_y)?;
        let rhs2 = lambda.conj() * sip_eval(space, &x, &y)?;
        let scale2 = 1.0 + lhs2.norm().max(rhs2.norm());
        report.conjugate_homogeneity = report.conjugate_homogeneity.max((lhs2 - rhs2).norm() / scale2);

        let yy = sip_eval(space, &y, &y)?;
        let ny = norm_p(&y, space.p);
        report.square_norm_residual = report
            .square_norm_residual
            .max((yy - C64::new(ny * ny, 0.0)).norm() / (1.0 + ny * ny));

        let xy = sip_eval(space, &x, &y)?;
        let bound = norm_p(&x, space.p) * ny;
        report.cauchy_schwarz_excess = report
            .cauchy_schwarz_excess
            .max((xy.norm() - bound).max(0.0) / (1.0 + bound));
    }
    Ok(report)
}

/// Sampled boundedness of `g . T`: max over random `f` of
/// `|g(Tf)| - ||g||_q ||T|| ||f||_p`, positive part. In finite dimension
/// every such composition is continuous; this check exhibits the bound.
pub fn adjoint_domain_check(
    domain: &SipSpace,
    t: &CMatrix,
    g: &CVector,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if t.ncols() != domain.dim {
        return Err(KmlError::DimensionMismatch { expected: domain.dim, got: t.ncols() });
    }
    let codomain_q = SipSpace::new(t.nrows(), domain.p)?.q();
    // max(column sums, row sums) dominates the interpolated p -> p operator
    // norm bound ||T||_1^{1/p} ||T||_inf^{1-1/p}.
    let col_sum = (0..t.ncols())
        .map(|j| t.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let row_sum = (0..t.nrows())
        .map(|i| t.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let t_norm = col_sum.max(row_sum);
    let gq = norm_p(g, codomain_q);
    let mut rng = sampling::rng_for(seed, 2);
    let mut excess = 0.0_f64;
    for _ in 0..trials {
        let f = sampling::complex_vector(&mut rng, domain.dim);
        let action = apply_functional(g, &(t * &f))?.norm();
        let bound = gq * t_norm * norm_p(&f, domain.p);
        excess = excess.max(action - bound);
    }
    Ok(excess.max(0.0))
}
