//! Seeded instance generation.

use num_complex::Complex;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zq_incidence::charsums::WeightedSet;
use zq_incidence::modring::Mat2;
use zq_incidence::{Modulus, PointSet};

use crate::error::{config_err, Result};

/// Independent stream for one trial: identical regardless of scheduling.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform `size`-subset of `domain`, without replacement.
pub fn sample_subset<R: Rng>(rng: &mut R, domain: &PointSet, size: usize) -> Result<PointSet> {
    if size > domain.len() {
        return Err(config_err(format!(
            "cannot draw {size} points from a domain of {}",
            domain.len()
        )));
    }
    let idx = sample(rng, domain.len(), size);
    let mut picked: Vec<usize> = idx.into_vec();
    picked.sort_unstable();
    Ok(PointSet::new(
        domain.modulus().clone(),
        domain.dim(),
        picked.iter().map(|&i| domain.get(i)),
    )?)
}

/// Uniform point of the closed unit disk.
pub fn disk_weight<R: Rng>(rng: &mut R) -> Complex<f64> {
    let r = rng.random::<f64>().sqrt();
    let t = rng.random_range(0.0..std::f64::consts::TAU);
    Complex::from_polar(r, t)
}

/// A `size`-subset of `F_p` drawn from `pool`, with disk-uniform weights.
pub fn weighted_subset<R: Rng>(rng: &mut R, pool: &PointSet, size: usize) -> Result<WeightedSet<f64>> {
    let base = sample_subset(rng, pool, size)?;
    let weights = (0..base.len()).map(|_| disk_weight(rng)).collect();
    Ok(WeightedSet::new(base, weights)?)
}

/// Uniform unit of `Z_q`.
pub fn random_unit<R: Rng>(rng: &mut R, m: &Modulus) -> u64 {
    loop {
        let x = rng.random_range(1..m.q());
        if m.is_unit(x) {
            return x;
        }
    }
}

/// Uniform `size`-subset of a list of matrices.
pub fn sample_matrices<R: Rng>(rng: &mut R, pool: &[Mat2], size: usize) -> Result<Vec<Mat2>> {
    if size > pool.len() {
        return Err(config_err(format!("cannot draw {size} matrices from {}", pool.len())));
    }
    Ok(sample(rng, pool.len(), size).iter().map(|i| pool[i]).collect())
}
