use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modring::{inv_mod, Modulus};
use crate::setops::PointSet;

pub(super) fn validate(m: &Modulus, lambda: u64) -> Result<()> {
    if !m.is_prime() {
        return Err(Error::InvalidModulus {
            q: m.q(),
            reason: "cross-ratio incidences need a prime modulus",
        });
    }
    let l = lambda % m.q();
    if l == 0 || l == 1 {
        return Err(Error::InvalidLambda {
            lambda,
            q: m.q(),
            reason: "lambda must avoid 0 and 1",
        });
    }
    Ok(())
}

/// `[a, b, c, d] = (a-c)(b-d) / ((a-d)(b-c))` mod prime `q`; `None` when the
/// denominator vanishes.
pub fn cross_ratio(a: u64, b: u64, c: u64, d: u64, q: u64) -> Option<u64> {
    let sub = |x: u64, y: u64| (x % q + q - y % q) % q;
    let mul = |x: u64, y: u64| (x as u128 * y as u128 % q as u128) as u64;
    let den = mul(sub(a, d), sub(b, c));
    let inv = inv_mod(den, q)?;
    Some(mul(mul(sub(a, c), sub(b, d)), inv))
}

#[inline]
fn hits(x: &[u64], y: &[u64], lambda: u64, q: u64) -> bool {
    cross_ratio(x[0], x[1], y[0], y[1], q) == Some(lambda)
}

/// `#{(a, b) ∈ A × B : [a_1, a_2, b_1, b_2] ≡ λ}`; undefined values never count.
pub fn count_crossratio(a: &PointSet, b: &PointSet, lambda: u64) -> Result<u64> {
    validate(a.modulus(), lambda)?;
    if a.q() != b.q() {
        return Err(Error::ModulusMismatch {
            left: a.q(),
            right: b.q(),
        });
    }
    if a.dim() != 2 || b.dim() != 2 {
        return Err(crate::error::invalid("cross-ratio sets live in Z_q^2"));
    }
    let (q, lambda) = (a.q(), lambda % a.q());
    Ok(a.as_flat()
        .par_chunks_exact(2)
        .map(|x| b.iter().filter(|y| hits(x, y, lambda, q)).count() as u64)
        .sum())
}

/// `4 q^{3/4} √(|A||B|)`.
pub fn crossratio_bound_rhs(q: u64, size_a: u64, size_b: u64) -> f64 {
    4.0 * (q as f64).powf(0.75) * (size_a as f64 * size_b as f64).sqrt()
}

/// Pairs whose two equations coincide: `a = a'`, or `λ = -1` with the
/// coordinates of `a'` swapped.
pub fn is_degenerate_pair(a: [u64; 2], a2: [u64; 2], lambda: u64, q: u64) -> bool {
    a == a2 || ((lambda + 1).is_multiple_of(q) && a[0] == a2[1] && a[1] == a2[0])
}

/// `#{b ∈ Z_q^2 : [a_1, a_2, b_1, b_2] = [a'_1, a'_2, b_1, b_2] = λ}`.
pub fn crossratio_pair_solutions(a: [u64; 2], a2: [u64; 2], lambda: u64, q: u64) -> u64 {
    let mut n = 0;
    for b1 in 0..q {
        for b2 in 0..q {
            let y = [b1, b2];
            if hits(&a, &y, lambda, q) && hits(&a2, &y, lambda, q) {
                n += 1;
            }
        }
    }
    n
}

/// Exhaustive maxima of the pair solution counts over `Z_q^2 × Z_q^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCapReport {
    pub q: u64,
    pub lambda: u64,
    pub pairs: u64,
    pub max_nondegenerate: u64,
    pub max_degenerate: u64,
}

impl PairCapReport {
    /// Caps `≤ 4` for non-degenerate and `≤ 2q` for degenerate pairs.
    pub fn holds(&self) -> bool {
        self.max_nondegenerate <= 4 && self.max_degenerate <= 2 * self.q
    }
}

pub fn crossratio_pair_caps(q: u64, lambda: u64) -> Result<PairCapReport> {
    let m = Modulus::new(q)?;
    validate(&m, lambda)?;
    let lambda = lambda % q;
    let n = (q * q) as usize;
    let words = n.div_ceil(64);
    // solution bitmap over b for every a
    let sets: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|ia| {
            let a = [ia as u64 / q, ia as u64 % q];
            let mut bits = vec![0u64; words];
            for ib in 0..n {
                if hits(&a, &[ib as u64 / q, ib as u64 % q], lambda, q) {
                    bits[ib / 64] |= 1 << (ib % 64);
                }
            }
            bits
        })
        .collect();
    let (nd, dg) = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = [i as u64 / q, i as u64 % q];
            let (mut nd, mut dg) = (0u64, 0u64);
            for j in 0..n {
                let a2 = [j as u64 / q, j as u64 % q];
                let c: u64 = sets[i]
                    .iter()
                    .zip(&sets[j])
                    .map(|(x, y)| (x & y).count_ones() as u64)
                    .sum();
                if is_degenerate_pair(a, a2, lambda, q) {
                    dg = dg.max(c);
                } else {
                    nd = nd.max(c);
                }
            }
            (nd, dg)
        })
        .reduce(|| (0, 0), |x, y| (x.0.max(y.0), x.1.max(y.1)));
    Ok(PairCapReport {
        q,
        lambda,
        pairs: (n * n) as u64,
        max_nondegenerate: nd,
        max_degenerate: dg,
    })
}
