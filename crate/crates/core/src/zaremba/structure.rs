use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::modring::mul_mod;
use crate::setops::{is_direct_sum, sumset, PointSet};

/// `E^×(Z) = #{z_1 z_2 = z_3 z_4}` from the histogram of products.
pub fn mult_energy(z: &PointSet) -> Result<u128> {
    if z.dim() != 1 {
        return Err(invalid("multiplicative energy needs a set of residues"));
    }
    let q = z.q();
    let mut hist: HashMap<u64, u128> = HashMap::new();
    for &x in z.residues() {
        for &y in z.residues() {
            *hist.entry(mul_mod(x, y, q)).or_insert(0) += 1;
        }
    }
    Ok(hist.values().map(|r| r * r).sum())
}

/// One centered window `[z - ⌊L/2⌋, z - ⌊L/2⌋ + L)` mod `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdSample {
    pub center: u64,
    pub length: u64,
    pub count: u64,
    /// `count / (L^w N^{1-w})`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdRegularity {
    pub samples: Vec<AdSample>,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

/// Ratios `|Z ∩ (D + z)| / (|D|^w N^{1-w})` over centers `z ∈ Z` and lengths
/// `|D| = N, 2N, 4N, … < q`.
pub fn ad_regularity(z: &PointSet, n: u64, w: f64) -> Result<AdRegularity> {
    if z.dim() != 1 {
        return Err(invalid("AD regularity needs a set of residues"));
    }
    if n == 0 || !(w > 0.0 && w <= 1.0) {
        return Err(invalid("AD regularity needs N >= 1 and 0 < w <= 1"));
    }
    let q = z.q();
    // prefix[i] = |Z ∩ [0, i)| over two periods
    let bits = z.bitmap();
    let mut prefix = vec![0u64; 2 * q as usize + 1];
    for i in 0..2 * q as usize {
        prefix[i + 1] = prefix[i] + bits[i % q as usize] as u64;
    }
    let mut samples = Vec::new();
    let mut len = n;
    while len < q {
        let norm = (len as f64).powf(w) * (n as f64).powf(1.0 - w);
        for &c in z.residues() {
            let start = (c + q - (len / 2) % q) % q;
            let count = prefix[(start + len) as usize] - prefix[start as usize];
            samples.push(AdSample {
                center: c,
                length: len,
                count,
                ratio: count as f64 / norm,
            });
        }
        len = len.saturating_mul(2);
    }
    let ratios = samples.iter().map(|s| s.ratio);
    Ok(AdRegularity {
        min_ratio: ratios.clone().reduce(f64::min),
        max_ratio: ratios.reduce(f64::max),
        samples,
    })
}

/// `A = [N] ∔ Λ` with `[N] = {1, …, N}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalUnion {
    pub set: PointSet,
    pub n: u64,
    pub shifts: PointSet,
}

pub fn interval_union(shifts: &PointSet, n: u64) -> Result<IntervalUnion> {
    let interval = PointSet::from_residues(shifts.modulus().clone(), 1..=n);
    if n == 0 || n >= shifts.q() || !is_direct_sum(&interval, shifts)? {
        return Err(Error::Structure(format!(
            "[{n}] + Λ is not a direct sum mod {}",
            shifts.q()
        )));
    }
    Ok(IntervalUnion {
        set: sumset(&interval, shifts)?,
        n,
        shifts: shifts.clone(),
    })
}

/// Exact `E^×(Z)` next to the bound `|Z|³ (p/|Z|)^{3-4w} N^{-2(1-w)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBoundReport {
    pub energy: u128,
    pub bound: f64,
    /// `|Z|³`.
    pub trivial: u128,
    /// `|Z|⁴/p + |Z|²`.
    pub random_baseline: f64,
    /// `w > 3/4`.
    pub in_regime: bool,
}

pub fn energy_bound_report(z: &PointSet, n: u64, w: f64, p: u64) -> Result<EnergyBoundReport> {
    let energy = mult_energy(z)?;
    let s = z.len() as f64;
    let bound = if z.is_empty() {
        0.0
    } else {
        s.powi(3) * (p as f64 / s).powf(3.0 - 4.0 * w) * (n as f64).powf(-2.0 * (1.0 - w))
    };
    Ok(EnergyBoundReport {
        energy,
        bound,
        trivial: (z.len() as u128).pow(3),
        random_baseline: s.powi(4) / p as f64 + s * s,
        in_regime: w > 0.75,
    })
}
