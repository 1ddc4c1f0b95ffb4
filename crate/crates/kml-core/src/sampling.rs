//! Seeded random fixtures shared by the probe operations and the suite
//! runner. All generators take an explicit RNG so results are reproducible.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::kernels::{Point, PointSet};
use crate::{C64, CVector};

/// RNG for a (master seed, stream) pair. The stream index separates checks
/// and instances so parallel execution cannot perturb results.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_scalar(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn complex_vector(rng: &mut impl Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| complex_scalar(rng))
}

/// Random point set in `[-2, 2]^dim`, resampled until the distinctness floor
/// is met.
pub fn point_set(rng: &mut impl Rng, m: usize, dim: usize) -> PointSet {
    separated_point_set(rng, m, dim, 0.0)
}

/// Random point set with a minimum pairwise separation, for fixtures where
/// Gram conditioning matters. Falls back to a jittered lattice in one
/// dimension, where rejection sampling stalls for large `m`.
pub fn separated_point_set(rng: &mut impl Rng, m: usize, dim: usize, min_sep: f64) -> PointSet {
    if dim == 1 && min_sep > 0.0 {
        let spacing = 4.0 / m as f64;
        let xs: Vec<f64> = (0..m)
            .map(|i| -2.0 + (i as f64 + 0.4 * rng.random_range(0.0..1.0)) * spacing)
            .collect();
        return PointSet::from_scalars(&xs).expect("jittered lattice is separated");
    }
    let mut sep = min_sep;
    loop {
        'attempt: for _ in 0..200 {
            let mut points: Vec<Point> = Vec::with_capacity(m);
            for _ in 0..m {
                let p =
                    Point::new((0..dim).map(|_| rng.random_range(-2.0..2.0)).collect()).unwrap();
                if points.iter().any(|o| dist(o, &p) < sep.max(1e-9)) {
                    continue 'attempt;
                }
                points.push(p);
            }
            if let Ok(set) = PointSet::new(points) {
                return set;
            }
        }
        sep *= 0.5;
    }
}

fn dist(a: &Point, b: &Point) -> f64 {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Random strictly positive scalar point set (valid for the min kernel).
pub fn positive_scalar_set(rng: &mut impl Rng, m: usize) -> PointSet {
    loop {
        let xs: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..4.0)).collect();
        if let Ok(set) = PointSet::from_scalars(&xs) {
            return set;
        }
    }
}
