//! Named verification suites. Every instance derives all randomness from
//! (master seed, check stream, instance index), so parallel and serial runs
//! produce identical residuals.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use kml_core::kernels::{KernelSpec, PointSet};
use kml_core::multipliers::{self, PointFunction};
use kml_core::rkbs::{self, RkbsModel, SharpFunction, Side};
use kml_core::rkhs::{self, RkhsBasis, SpanFunction};
use kml_core::sampling;
use kml_core::sip::{self, SipSpace};
use kml_core::{linalg, C64, CMatrix, KmlError};

use crate::config::SuiteConfig;
use crate::report::{CheckRecord, Finding, Report, FAILED_RESIDUAL, SCHEMA};

/// Stream spacing between checks; instance index occupies the low bits.
const STREAM_STRIDE: u64 = 1 << 32;

pub fn run_suite(cfg: &SuiteConfig) -> Report {
    let mut records = Vec::new();
    let mut findings = Vec::new();
    let suites: Vec<&str> = if cfg.suite == "all" {
        vec!["rkhs-core", "hilbert-multipliers", "sip-core", "rkbs-core", "banach-multipliers"]
    } else {
        vec![cfg.suite.as_str()]
    };
    for (offset, suite) in suites.iter().enumerate() {
        let base = (offset as u64 + 1) * 100 * STREAM_STRIDE;
        match *suite {
            "rkhs-core" => rkhs_core(cfg, base, &mut records),
            "hilbert-multipliers" => hilbert_multipliers(cfg, base, &mut records),
            "sip-core" => sip_core(cfg, base, &mut records),
            "rkbs-core" => rkbs_core(cfg, base, &mut records),
            "banach-multipliers" => banach_multipliers(cfg, base, &mut records, &mut findings),
            other => unreachable!("unknown suite {other}"),
        }
    }
    Report {
        findings,
        records,
        schema: SCHEMA.into(),
        seed: cfg.seed,
        suite: cfg.suite.clone(),
        trials: cfg.trials,
    }
}

/// Run one check over `cfg.trials` instances in parallel and aggregate the
/// worst residual. Fixture errors become a failing record, not a panic.
fn run_check<F>(
    cfg: &SuiteConfig,
    stream_base: u64,
    name: &str,
    anchor: &str,
    default_tol: f64,
    f: F,
) -> CheckRecord
where
    F: Fn(u64) -> kml_core::Result<f64> + Sync,
{
    let tol = cfg.tol.unwrap_or(default_tol);
    let start = Instant::now();
    let max_residual = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| f(stream_base + i).unwrap_or(FAILED_RESIDUAL))
        .reduce(|| 0.0, f64::max);
    CheckRecord {
        instances: cfg.trials,
        max_residual,
        name: name.into(),
        paper_anchor: anchor.into(),
        pass: max_residual <= tol,
        tolerance: tol,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn kernel_grid(cfg: &SuiteConfig) -> Vec<KernelSpec> {
    let all = [
        ("gaussian", KernelSpec::Gaussian { gamma: cfg.gamma }),
        ("laplacian", KernelSpec::Laplacian { gamma: cfg.gamma }),
        ("polynomial", KernelSpec::Polynomial { degree: cfg.degree, offset: cfg.offset }),
        ("brownian-min", KernelSpec::BrownianMin),
    ];
    match &cfg.kernel {
        Some(k) => all.iter().filter(|(n, _)| n == k).map(|(_, s)| s.clone()).collect(),
        None => all.iter().map(|(_, s)| s.clone()).collect(),
    }
}

/// Kernels whose Grams stay uniformly positive definite on separated sets;
/// conditioning-sensitive checks draw from this grid.
fn pd_kernel_grid(cfg: &SuiteConfig) -> Vec<KernelSpec> {
    kernel_grid(cfg)
        .into_iter()
        .filter(|s| !matches!(s, KernelSpec::Polynomial { .. }))
        .collect()
}

fn basis_for(
    spec: &KernelSpec,
    m: usize,
    rng: &mut impl rand::Rng,
) -> kml_core::Result<Arc<RkhsBasis>> {
    let points = match spec {
        KernelSpec::BrownianMin => sampling::positive_scalar_set(rng, m),
        _ => sampling::separated_point_set(rng, m, 1, 0.3),
    };
    RkhsBasis::new(spec.clone(), points)
}

fn random_function(rng: &mut impl rand::Rng, points: &PointSet) -> PointFunction {
    PointFunction::new(points.clone(), sampling::complex_vector(rng, points.len()))
        .expect("matching lengths")
}

fn rkhs_core(cfg: &SuiteConfig, base: u64, records: &mut Vec<CheckRecord>) {
    let grid = kernel_grid(cfg);
    let pd_grid = pd_kernel_grid(cfg);
    let seed = cfg.seed;

    records.push(run_check(
        cfg,
        base,
        "reproducing-property",
        "point evaluation agrees with pairing against the kernel section",
        1e-9,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let spec = &grid[stream as usize % grid.len()];
            let m = 3 + (stream as usize % 6);
            let basis = basis_for(spec, m, &mut rng)?;
            let f = SpanFunction::new(Arc::clone(&basis), sampling::complex_vector(&mut rng, m))?;
            let scale = 1.0 + f.norm();
            let mut worst = 0.0_f64;
            for y in basis.points().points() {
                worst = worst.max(rkhs::reproducing_residual(&f, y)? / scale);
            }
            Ok(worst)
        },
    ));

    records.push(run_check(
        cfg,
        base + STREAM_STRIDE,
        "evaluation-functional-norm",
        "operator norm of point evaluation equals the norm of the kernel section",
        1e-12,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let spec = &grid[stream as usize % grid.len()];
            let m = 2 + (stream as usize % 5);
            let basis = basis_for(spec, m, &mut rng)?;
            let mut worst = 0.0_f64;
            for i in 0..m {
                let section = SpanFunction::section(Arc::clone(&basis), i)?;
                let direct = rkhs::eval_functional_norm(basis.spec(), &basis.points().points()[i])?;
                worst = worst.max((direct - section.norm()).abs() / (1.0 + direct));
            }
            Ok(worst)
        },
    ));

    records.push(run_check(
        cfg,
        base + 2 * STREAM_STRIDE,
        "inner-product-double-sum",
        "span inner product equals the coefficient double sum over kernel values",
        1e-12,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let spec = &grid[stream as usize % grid.len()];
            let m = 3 + (stream as usize % 5);
            let basis = basis_for(spec, m, &mut rng)?;
            let c = sampling::complex_vector(&mut rng, m);
            let d = sampling::complex_vector(&mut rng, m);
            let f = SpanFunction::new(Arc::clone(&basis), c.clone())?;
            let g = SpanFunction::new(Arc::clone(&basis), d.clone())?;
            let fast = f.inner(&g)?;
            let mut slow = C64::new(0.0, 0.0);
            for i in 0..m {
                for j in 0..m {
                    slow += d[j].conj()
                        * basis.gram().matrix()[(j, i)]
                        * c[i];
                }
            }
            Ok((fast - slow).norm() / (1.0 + slow.norm()))
        },
    ));

    records.push(run_check(
        cfg,
        base + 3 * STREAM_STRIDE,
        "coefficient-recovery",
        "least-squares coefficients reproduce the prescribed value vector",
        1e-8,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let spec = &pd_grid[stream as usize % pd_grid.len()];
            let m = 3 + (stream as usize % 4);
            let basis = basis_for(spec, m, &mut rng)?;
            let f = SpanFunction::new(Arc::clone(&basis), sampling::complex_vector(&mut rng, m))?;
            let values = f.value_vector();
            let (c2, _) = rkhs::values_to_coeffs(&basis, &values, 1e-6)?;
            let back = SpanFunction::new(Arc::clone(&basis), c2)?.value_vector();
            Ok((back - &values).norm() / (1.0 + values.norm()))
        },
    ));
}

fn hilbert_multipliers(cfg: &SuiteConfig, base: u64, records: &mut Vec<CheckRecord>) {
    let pd_grid = pd_kernel_grid(cfg);
    let seed = cfg.seed;

    records.push(run_check(
        cfg,
        base,
        "adjoint-identity",
        "the multiplier adjoint sends each kernel section to its conjugate-scaled section",
        1e-9,
        |stream| {
            for attempt in 0..8_u64 {
                let mut rng = sampling::rng_for(seed, stream + (attempt << 40));
                let spec = &pd_grid[stream as usize % pd_grid.len()];
                let m = 3 + (stream as usize % 5);
                let basis = basis_for(spec, m, &mut rng)?;
                let f = random_function(&mut rng, basis.points());
                match multipliers::adjoint_identity_check(&f, basis.gram()) {
                    Ok(r) => {
                        let scale = (1.0 + f.max_modulus())
                            * linalg::spectral_norm(basis.gram().matrix());
                        return Ok(r / scale);
                    }
                    Err(KmlError::NearSingular(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(KmlError::Internal("no well-conditioned fixture found".into()))
        },
    ));

    records.push(run_check(
        cfg,
        base + STREAM_STRIDE,
        "multiplier-norm-oracle-agreement",
        "semidefinite bisection and the generalized eigenvalue solver certify the same norm",
        1e-6,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let spec = &pd_grid[stream as usize % pd_grid.len()];
            let m = 3 + (stream as usize % 4);
            let basis = basis_for(spec, m, &mut rng)?;
            let f = random_function(&mut rng, basis.points());
            let eig = multipliers::multiplier_norm_eig(&f, basis.gram())?;
            let bis = multipliers::multiplier_norm_bisect(&f, basis.gram(), 1e-8)?;
            Ok((eig.bound - bis.bound).abs() / (1.0 + eig.bound))
        },
    ));

    records.push(run_check(
        cfg,
        base + 2 * STREAM_STRIDE,
        "constant-multiplier-norm",
        "a constant function multiplies with operator norm equal to its modulus",
        1e-12,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let spec = &pd_grid[stream as usize % pd_grid.len()];
            let m = 2 + (stream as usize % 5);
            let basis = basis_for(spec, m, &mut rng)?;
            let c = sampling::complex_scalar(&mut rng);
            let f = PointFunction::constant(basis.points().clone(), c)?;
            let cert = multipliers::multiplier_norm_eig(&f, basis.gram())?;
            Ok((cert.bound - c.norm()).abs() / (1.0 + c.norm()))
        },
    ));

    records.push(run_check(
        cfg,
        base + 3 * STREAM_STRIDE,
        "representation-axioms-hilbert",
        "pointwise multiplication acts as a linear, multiplicative, bounded module action",
        1e-9,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let spec = &pd_grid[stream as usize % pd_grid.len()];
            let m = 3 + (stream as usize % 4);
            let basis = basis_for(spec, m, &mut rng)?;
            let f1 = random_function(&mut rng, basis.points());
            let f2 = random_function(&mut rng, basis.points());
            let h1 = SpanFunction::new(Arc::clone(&basis), sampling::complex_vector(&mut rng, m))?;
            let h2 = SpanFunction::new(Arc::clone(&basis), sampling::complex_vector(&mut rng, m))?;
            let alpha = sampling::complex_scalar(&mut rng);
            let beta = sampling::complex_scalar(&mut rng);
            let report = multipliers::representation_check_hilbert(
                &basis, &f1, &f2, &h1, &h2, alpha, beta,
            )?;
            Ok(report.max_residual())
        },
    ));

    records.push(run_check(
        cfg,
        base + 4 * STREAM_STRIDE,
        "two-space-consistency",
        "the two-space norm with identical source and target reduces to the one-space norm",
        1e-6,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let spec = &pd_grid[stream as usize % pd_grid.len()];
            let m = 3 + (stream as usize % 4);
            let basis = basis_for(spec, m, &mut rng)?;
            let f = random_function(&mut rng, basis.points());
            let one = multipliers::multiplier_norm_eig(&f, basis.gram())?;
            let two = multipliers::multiplier_norm_two(&f, basis.gram(), basis.gram())?;
            Ok((one.bound - two.bound).abs() / (1.0 + one.bound))
        },
    ));
}

fn sip_core(cfg: &SuiteConfig, base: u64, records: &mut Vec<CheckRecord>) {
    let seed = cfg.seed;
    let p_grid = cfg.p.clone();

    records.push(run_check(
        cfg,
        base,
        "sip-axioms",
        "first-slot linearity, conjugate homogeneity, positivity, and the Schwarz bound",
        1e-9,
        |stream| {
            let p = p_grid[stream as usize % p_grid.len()];
            let dim = 2 + (stream as usize % 5);
            let space = SipSpace::new(dim, p)?;
            let report = sip::sip_axioms_check(&space, 50, seed ^ stream)?;
            Ok(report
                .first_slot_linearity
                .max(report.conjugate_homogeneity)
                .max(report.square_norm_residual)
                .max(report.cauchy_schwarz_excess))
        },
    ));

    records.push(run_check(
        cfg,
        base + STREAM_STRIDE,
        "p2-inner-product",
        "the exponent-2 pairing coincides with the Euclidean inner product",
        1e-14,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let dim = 2 + (stream as usize % 5);
            let space = SipSpace::new(dim, 2.0)?;
            let x = sampling::complex_vector(&mut rng, dim);
            let y = sampling::complex_vector(&mut rng, dim);
            let pairing = sip::sip_eval(&space, &x, &y)?;
            let euclid = (y.adjoint() * &x)[(0, 0)];
            Ok((pairing - euclid).norm() / (1.0 + euclid.norm()))
        },
    ));

    records.push(run_check(
        cfg,
        base + 2 * STREAM_STRIDE,
        "duality-round-trip",
        "the duality map composed with its inverse is the identity",
        1e-10,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let p = p_grid[stream as usize % p_grid.len()];
            let dim = 2 + (stream as usize % 5);
            let space = SipSpace::new(dim, p)?;
            let y = sampling::complex_vector(&mut rng, dim);
            let back = sip::inverse_duality_map(&space, &sip::duality_map(&space, &y)?)?;
            Ok((back - &y).norm() / (1.0 + y.norm()))
        },
    ));

    records.push(run_check(
        cfg,
        base + 3 * STREAM_STRIDE,
        "duality-norm-equality",
        "the duality map preserves the norm into the conjugate exponent",
        1e-12,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let p = p_grid[stream as usize % p_grid.len()];
            let dim = 2 + (stream as usize % 5);
            let space = SipSpace::new(dim, p)?;
            let y = sampling::complex_vector(&mut rng, dim);
            let np = sip::norm_p(&y, p);
            let nq = sip::norm_p(&sip::duality_map(&space, &y)?, space.q());
            Ok((np - nq).abs() / (1.0 + np))
        },
    ));

    records.push(run_check(
        cfg,
        base + 4 * STREAM_STRIDE,
        "riesz-representation",
        "every continuous functional is realized by pairing against one vector",
        1e-9,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let p = p_grid[stream as usize % p_grid.len()];
            let dim = 2 + (stream as usize % 5);
            let space = SipSpace::new(dim, p)?;
            let g = sampling::complex_vector(&mut rng, dim);
            let report = sip::riesz_check(&space, &g, 20, seed ^ stream)?;
            Ok(report.max_action_residual.max(report.norm_residual))
        },
    ));

    records.push(run_check(
        cfg,
        base + 5 * STREAM_STRIDE,
        "adjoint-composition",
        "the functional adjoint reverses composition of operators",
        1e-12,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let dim = 2 + (stream as usize % 4);
            let s = CMatrix::from_fn(dim, dim, |_, _| sampling::complex_scalar(&mut rng));
            let t = CMatrix::from_fn(dim, dim, |_, _| sampling::complex_scalar(&mut rng));
            let g = sampling::complex_vector(&mut rng, dim);
            let joint = sip::adjoint_apply(&(&s * &t), &g)?;
            let chained = sip::adjoint_apply(&t, &sip::adjoint_apply(&s, &g)?)?;
            Ok((joint - &chained).norm() / (1.0 + chained.norm()))
        },
    ));
}

fn rkbs_core(cfg: &SuiteConfig, base: u64, records: &mut Vec<CheckRecord>) {
    let seed = cfg.seed;
    let p_grid = cfg.p.clone();
    let m = cfg.points.max(2);
    let n = cfg.features.min(m);

    records.push(run_check(
        cfg,
        base,
        "rkbs-reproduction",
        "pairing against the primal feature of a point recovers the function value there",
        1e-10,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let p = p_grid[stream as usize % p_grid.len()];
            let points = sampling::separated_point_set(&mut rng, m, 1, 0.3);
            let model = RkbsModel::random(points, n, p, &mut rng)?;
            let u = sampling::complex_vector(&mut rng, n);
            let mut worst = 0.0_f64;
            for i in 0..m {
                let scale = (1.0 + sip::norm_p(&u, p))
                    * (1.0 + sip::norm_p(&model.psi_row(i), model.space().q()));
                worst = worst.max(rkbs::reproduce_residual(&model, &u, i)? / scale);
            }
            Ok(worst)
        },
    ));

    records.push(run_check(
        cfg,
        base + STREAM_STRIDE,
        "sharp-norm-agreement",
        "projected ascent attains the closed-form dual norm of the section span element",
        1e-6,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let p = p_grid[stream as usize % p_grid.len()];
            let points = sampling::separated_point_set(&mut rng, m, 1, 0.3);
            let model = RkbsModel::random(points, n, p, &mut rng)?;
            let g = SharpFunction::from_sections(&model, sampling::complex_vector(&mut rng, m))?;
            let closed = rkbs::sharp_norm_closed(&model, &g);
            let opt = rkbs::sharp_norm_opt(&model, &g, 100)?;
            Ok((closed - opt).abs() / (1.0 + closed))
        },
    ));

    records.push(run_check(
        cfg,
        base + 2 * STREAM_STRIDE,
        "sharp-norm-euclidean-case",
        "at exponent 2 the optimized sharp norm is the Euclidean norm of the dual vector",
        1e-10,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let points = sampling::separated_point_set(&mut rng, m, 1, 0.3);
            let model = RkbsModel::random(points, n, 2.0, &mut rng)?;
            let g = SharpFunction::from_sections(&model, sampling::complex_vector(&mut rng, m))?;
            let euclid = g.dual_vector().norm();
            let opt = rkbs::sharp_norm_opt(&model, &g, 100)?;
            Ok((opt - euclid).abs() / (1.0 + euclid))
        },
    ));

    records.push(run_check(
        cfg,
        base + 3 * STREAM_STRIDE,
        "point-evaluation-bounds",
        "sampled evaluations never exceed the feature-norm bound on either side",
        1e-10,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let p = p_grid[stream as usize % p_grid.len()];
            let points = sampling::separated_point_set(&mut rng, m, 1, 0.3);
            let model = RkbsModel::random(points, n, p, &mut rng)?;
            let j = stream as usize % m;
            rkbs::point_eval_bound_check(&model, j, 20, seed ^ stream)
        },
    ));

    records.push(run_check(
        cfg,
        base + 4 * STREAM_STRIDE,
        "feature-duality-consistency",
        "the duality map sends each primal feature back to its dual feature",
        1e-12,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let p = p_grid[stream as usize % p_grid.len()];
            let points = sampling::separated_point_set(&mut rng, m, 1, 0.3);
            let model = RkbsModel::random(points, n, p, &mut rng)?;
            let mut worst = 0.0_f64;
            for i in 0..m {
                let back = sip::duality_map(model.space(), &model.w_row(i))?;
                let psi = model.psi_row(i);
                worst = worst.max((back - &psi).norm() / (1.0 + psi.norm()));
            }
            Ok(worst)
        },
    ));
}

fn banach_multipliers(
    cfg: &SuiteConfig,
    base: u64,
    records: &mut Vec<CheckRecord>,
    findings: &mut Vec<Finding>,
) {
    let seed = cfg.seed;
    let p_grid = cfg.p.clone();
    // Square models admit every pointwise multiplier, keeping the random
    // fixtures feasible.
    let m = cfg.points.clamp(2, 5);

    records.push(run_check(
        cfg,
        base,
        "sip-adjoint-chain",
        "the multiplier and its functional adjoint agree through the point-evaluation chain",
        1e-9,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let p = p_grid[stream as usize % p_grid.len()];
            let points = sampling::separated_point_set(&mut rng, m, 1, 0.3);
            let model = RkbsModel::random(points, m, p, &mut rng)?;
            let f = random_function(&mut rng, model.points());
            let u = sampling::complex_vector(&mut rng, m);
            let scale = (1.0 + f.max_modulus()) * (1.0 + sip::norm_p(&u, p));
            let mut worst = 0.0_f64;
            for j in 0..m {
                let row_scale =
                    scale * (1.0 + sip::norm_p(&model.psi_row(j), model.space().q()));
                let (r1, r2) = rkbs::sip_adjoint_chain_check(&model, &model, &f, &u, j)?;
                worst = worst.max(r1.max(r2) / row_scale);
            }
            Ok(worst)
        },
    ));

    records.push(run_check(
        cfg,
        base + STREAM_STRIDE,
        "sip-adjoint-chain-hilbert-case",
        "at exponent 2 the chain reduces to the Hilbert adjoint identity",
        1e-9,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let points = sampling::separated_point_set(&mut rng, m, 1, 0.3);
            let model = RkbsModel::random(points, m, 2.0, &mut rng)?;
            let f = random_function(&mut rng, model.points());
            let u = sampling::complex_vector(&mut rng, m);
            let scale = (1.0 + f.max_modulus()) * (1.0 + u.norm());
            let mut worst = 0.0_f64;
            for j in 0..m {
                let row_scale = scale * (1.0 + model.psi_row(j).norm());
                let (r1, r2) = rkbs::sip_adjoint_chain_check(&model, &model, &f, &u, j)?;
                worst = worst.max(r1.max(r2) / row_scale);
            }
            Ok(worst)
        },
    ));

    records.push(run_check(
        cfg,
        base + 2 * STREAM_STRIDE,
        "representation-axioms-banach",
        "pointwise multiplication acts on the Banach model as a linear, multiplicative, bounded action",
        1e-9,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let p = p_grid[stream as usize % p_grid.len()];
            let points = sampling::separated_point_set(&mut rng, m, 1, 0.3);
            let model = RkbsModel::random(points, m, p, &mut rng)?;
            let f1 = random_function(&mut rng, model.points());
            let f2 = random_function(&mut rng, model.points());
            let u = sampling::complex_vector(&mut rng, m);
            let alpha = sampling::complex_scalar(&mut rng);
            let beta = sampling::complex_scalar(&mut rng);
            let report = rkbs::representation_check_banach(&model, &f1, &f2, &u, alpha, beta)?;
            Ok(report.max_residual())
        },
    ));

    records.push(run_check(
        cfg,
        base + 3 * STREAM_STRIDE,
        "operator-norm-euclidean-crosscheck",
        "at exponent 2 the ascent-based multiplier norm matches the largest singular value",
        1e-6,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let points = sampling::separated_point_set(&mut rng, m, 1, 0.3);
            let model = RkbsModel::random(points, m, 2.0, &mut rng)?;
            let f = random_function(&mut rng, model.points());
            let ascent = rkbs::mult_norm(&model, &f, Side::Primal, 150)?;
            let pinv = linalg::pseudoinverse(model.psi())?;
            let a = &pinv * linalg::scale_rows(f.values(), model.psi());
            let sigma = linalg::spectral_norm(&a);
            Ok((ascent - sigma).abs() / (1.0 + sigma))
        },
    ));

    records.push(run_check(
        cfg,
        base + 4 * STREAM_STRIDE,
        "norm-consistency",
        "a Cauchy sequence collapsing pointwise also collapses in the model norm",
        1e-6,
        |stream| {
            let mut rng = sampling::rng_for(seed, stream);
            let p = p_grid[stream as usize % p_grid.len()];
            let points = sampling::separated_point_set(&mut rng, m, 1, 0.3);
            let model = RkbsModel::random(points.clone(), m.min(3), p, &mut rng)?;
            let start = sampling::complex_vector(&mut rng, model.n());
            let report = rkbs::norm_consistency_check(
                rkbs::ModelRef::Banach(&model),
                &rkbs::SequenceSpec::Geometric { start, ratio: 0.5, terms: 40 },
                1e-6,
            )?;
            if !report.antecedent {
                return Err(KmlError::Internal("decaying sequence failed to vanish".into()));
            }
            Ok(*report.norm_trajectory.last().unwrap())
        },
    ));

    findings.push(iso_probe_finding(cfg, base + 5 * STREAM_STRIDE));
    findings.push(b0_probe_finding(cfg, base + 6 * STREAM_STRIDE));
}

fn iso_probe_finding(cfg: &SuiteConfig, stream: u64) -> Finding {
    let start = Instant::now();
    let samples = cfg.trials.min(25);
    let detail = (|| -> kml_core::Result<String> {
        let mut rng = sampling::rng_for(cfg.seed, stream);
        let m = cfg.points.clamp(2, 4);
        let points = sampling::separated_point_set(&mut rng, m, 1, 0.3);
        let model = RkbsModel::random(points, m, cfg.p[0], &mut rng)?;
        let report = rkbs::multiplier_iso_probe(&model, samples, cfg.seed ^ stream)?;
        let (lo, hi) = report
            .norm_ratios
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
        Ok(format!(
            "square model: member_primal={} member_sharp={} agreement={:.6} ratio_range=[{:.6e},{:.6e}]",
            report.member_primal,
            report.member_sharp,
            report.agreement_rate(),
            lo,
            hi
        ))
    })()
    .unwrap_or_else(|e| format!("probe failed: {e}"));
    Finding {
        detail,
        name: "multiplier-iso-probe".into(),
        samples,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn b0_probe_finding(cfg: &SuiteConfig, stream: u64) -> Finding {
    let start = Instant::now();
    let samples = cfg.trials.max(2);
    let detail = (|| -> kml_core::Result<String> {
        let points = PointSet::from_scalars(&[0.0, 1.0, 2.0])?;
        let model = RkbsModel::identity(points, cfg.p[0])?;
        let report = rkbs::b0_probe(&model, samples, cfg.seed ^ stream, 1e-8)?;
        Ok(format!(
            "identity model: in_primal={} pairs={} closure_counterexamples={} first_counterexample_norm={}",
            report.in_primal,
            report.pairs_checked,
            report.closure_counterexamples,
            report
                .first_counterexample_norm
                .map(|v| format!("{v:.6e}"))
                .unwrap_or_else(|| "none".into())
        ))
    })()
    .unwrap_or_else(|e| format!("probe failed: {e}"));
    Finding {
        detail,
        name: "unit-sphere-closure-probe".into(),
        samples,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}
