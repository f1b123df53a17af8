use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::modring::{inv_mod, Modulus};
use crate::setops::PointSet;
use crate::Rational;

pub(super) fn validate(m: &Modulus, lambda: u64) -> Result<()> {
    if !m.is_prime() || m.q() == 2 {
        return Err(Error::InvalidModulus {
            q: m.q(),
            reason: "determinant incidences need an odd prime modulus",
        });
    }
    if lambda.is_multiple_of(m.q()) {
        return Err(Error::InvalidLambda {
            lambda,
            q: m.q(),
            reason: "lambda must be nonzero",
        });
    }
    Ok(())
}

/// Determinant of the `d × d` matrix stored row-major in `entries`, mod prime `p`.
pub fn determinant_mod_p(entries: &[u64], d: usize, p: u64) -> u64 {
    assert_eq!(entries.len(), d * d, "expected a {d}x{d} matrix");
    let mut a: Vec<u64> = entries.iter().map(|x| x % p).collect();
    let mut det = 1u64;
    for col in 0..d {
        let Some(pivot) = (col..d).find(|&r| a[r * d + col] != 0) else {
            return 0;
        };
        if pivot != col {
            for j in 0..d {
                a.swap(pivot * d + j, col * d + j);
            }
            det = (p - det) % p;
        }
        let pv = a[col * d + col];
        det = (det as u128 * pv as u128 % p as u128) as u64;
        let inv = inv_mod(pv, p).expect("nonzero pivot is invertible mod p");
        for r in col + 1..d {
            let f = (a[r * d + col] as u128 * inv as u128 % p as u128) as u64;
            if f == 0 {
                continue;
            }
            for j in col..d {
                let sub = (f as u128 * a[col * d + j] as u128 % p as u128) as u64;
                a[r * d + j] = (a[r * d + j] + p - sub) % p;
            }
        }
    }
    det
}

/// Rank of the `rows × cols` matrix stored row-major in `entries`, mod prime `p`.
pub fn rank_mod_p(entries: &[u64], rows: usize, cols: usize, p: u64) -> usize {
    assert_eq!(entries.len(), rows * cols, "expected a {rows}x{cols} matrix");
    let mut a: Vec<u64> = entries.iter().map(|x| x % p).collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        for j in 0..cols {
            a.swap(pivot * cols + j, rank * cols + j);
        }
        let inv = inv_mod(a[rank * cols + col], p).expect("nonzero pivot is invertible mod p");
        for r in rank + 1..rows {
            let f = (a[r * cols + col] as u128 * inv as u128 % p as u128) as u64;
            for j in col..cols {
                let sub = (f as u128 * a[rank * cols + j] as u128 % p as u128) as u64;
                a[r * cols + j] = (a[r * cols + j] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// `#{(a, b) ∈ A × B : det(a_1, …, a_n, b_1, …, b_m) ≡ λ}`.
///
/// Elements of `A` hold `n` vectors of length `d = n + m` back to back; the
/// vectors become the rows of the matrix.
pub fn count_det(a: &PointSet, b: &PointSet, lambda: u64, n: usize, m: usize) -> Result<u64> {
    validate(a.modulus(), lambda)?;
    if a.q() != b.q() {
        return Err(Error::ModulusMismatch {
            left: a.q(),
            right: b.q(),
        });
    }
    let d = n + m;
    if n == 0 || m == 0 || a.dim() != n * d || b.dim() != m * d {
        return Err(invalid("count_det: element dimensions do not match n, m"));
    }
    let (p, lambda) = (a.q(), lambda % a.q());
    let count = a
        .as_flat()
        .par_chunks_exact(n * d)
        .map(|x| {
            let mut buf = vec![0u64; d * d];
            buf[..n * d].copy_from_slice(x);
            b.iter()
                .filter(|y| {
                    buf[n * d..].copy_from_slice(y);
                    determinant_mod_p(&buf, d, p) == lambda
                })
                .count() as u64
        })
        .sum();
    Ok(count)
}

/// Which main term lies closer to a measured count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetNormalization {
    OverQ,
    OverQMinus1,
}

/// The two main-term normalizations `|A||B|/q` and `|A||B|/(q-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetMainTerms {
    pub over_q: Rational,
    pub over_q_minus_1: Rational,
}

impl DetMainTerms {
    /// Normalization with the smaller absolute deviation; ties go to `OverQ`.
    pub fn closer(&self, count: u64) -> DetNormalization {
        let c = Rational::from_integer(count.into());
        if (&c - &self.over_q_minus_1).abs() < (&c - &self.over_q).abs() {
            DetNormalization::OverQMinus1
        } else {
            DetNormalization::OverQ
        }
    }
}

pub fn det_main_terms(size_a: u64, size_b: u64, q: u64) -> DetMainTerms {
    let ab = BigInt::from(size_a) * BigInt::from(size_b);
    DetMainTerms {
        over_q: Rational::new(ab.clone(), q.into()),
        over_q_minus_1: Rational::new(ab, (q - 1).into()),
    }
}

/// `q^{d²/2 - d/4 - 3/4} √(|A||B|) + |A||B|/q²`.
pub fn det_bound_rhs(q: u64, d: usize, size_a: u64, size_b: u64) -> f64 {
    let (qf, df) = (q as f64, d as f64);
    let ab = size_a as f64 * size_b as f64;
    qf.powf(df * df / 2.0 - df / 4.0 - 0.75) * ab.sqrt() + ab / (qf * qf)
}

/// `q^{dk} ∏_{j=1}^{k} (1 - q^{-j})`, the closed form used for the number of
/// independent `k`-tuples in `F_q^d`.
pub fn closed_form_tuple_count(q: u64, d: usize, k: usize) -> Rational {
    let qb = BigInt::from(q);
    let mut r = Rational::from_integer(qb.pow((d * k) as u32));
    for j in 1..=k as u32 {
        r *= Rational::one() - Rational::new(BigInt::one(), qb.pow(j));
    }
    r
}

/// `∏_{j<k} (q^d - q^j)`, the true number of linearly independent `k`-tuples.
pub fn independent_tuple_count(q: u64, d: usize, k: usize) -> BigInt {
    let qb = BigInt::from(q);
    (0..k as u32).map(|j| qb.pow(d as u32) - qb.pow(j)).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(q: u64) -> Modulus {
        Modulus::new(q).unwrap()
    }

    #[test]
    fn rank_counts_independent_pairs() {
        for p in [3u64, 5] {
            let full = PointSet::full(m(p), 6);
            let count = full.iter().filter(|x| rank_mod_p(x, 2, 3, p) == 2).count();
            assert_eq!(BigInt::from(count), independent_tuple_count(p, 3, 2));
        }
        assert_eq!(rank_mod_p(&[1, 2, 2, 4], 2, 2, 7), 1);
        assert_eq!(rank_mod_p(&[0, 0, 0, 0], 2, 2, 7), 0);
    }

    fn nonzero(q: u64) -> PointSet {
        PointSet::full(m(q), 2).filter(|v| v != [0, 0])
    }

    /// Leibniz expansion over all permutations.
    fn det_oracle(e: &[u64], d: usize, p: u64) -> u64 {
        let mut perm: Vec<usize> = (0..d).collect();
        let mut total: i128 = 0;
        fn heap(k: usize, perm: &mut Vec<usize>, e: &[u64], d: usize, total: &mut i128) {
            if k == 1 {
                let mut inv = 0;
                for i in 0..d {
                    for j in i + 1..d {
                        if perm[i] > perm[j] {
                            inv += 1;
                        }
                    }
                }
                let prod: i128 = (0..d).map(|i| e[i * d + perm[i]] as i128).product();
                *total += if inv % 2 == 0 { prod } else { -prod };
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, e, d, total);
                if k.is_multiple_of(2) {
                    perm.swap(i, k - 1)
                } else {
                    perm.swap(0, k - 1)
                }
            }
        }
        heap(d, &mut perm, e, d, &mut total);
        total.rem_euclid(p as i128) as u64
    }

    #[test]
    fn elimination_matches_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [3u64, 5, 7, 13] {
            for d in 1..5 {
                for _ in 0..50 {
                    let e: Vec<u64> = (0..d * d).map(|_| rng.random_range(0..p)).collect();
                    assert_eq!(determinant_mod_p(&e, d, p), det_oracle(&e, d, p));
                }
            }
        }
    }

    #[test]
    fn full_nonzero_counts() {
        let a = nonzero(3);
        let mut brute = 0;
        for x in a.iter() {
            for y in a.iter() {
                if (x[0] * y[1] + 9 - x[1] * y[0] % 3) % 3 == 1 {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 24);
        assert_eq!(count_det(&a, &a, 1, 1, 1).unwrap(), 24);
        assert_eq!(count_det(&nonzero(5), &nonzero(5), 1, 1, 1).unwrap(), 120);
        assert_eq!(count_det(&PointSet::empty(m(5), 2), &nonzero(5), 2, 1, 1).unwrap(), 0);
    }

    #[test]
    fn validation() {
        let a = nonzero(3);
        assert!(matches!(count_det(&a, &a, 3, 1, 1), Err(Error::InvalidLambda { .. })));
        let e = PointSet::full(m(4), 2);
        assert!(matches!(count_det(&e, &e, 1, 1, 1), Err(Error::InvalidModulus { .. })));
        let t = PointSet::full(m(2), 2);
        assert!(matches!(count_det(&t, &t, 1, 1, 1), Err(Error::InvalidModulus { .. })));
    }

    #[test]
    fn sl2_action_preserves_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = 7u64;
        let dom = PointSet::full(m(q), 2);
        let pick = |rng: &mut ChaCha8Rng| {
            let pts: Vec<Vec<u64>> = (0..20)
                .map(|_| dom.get(rng.random_range(0..dom.len())).to_vec())
                .collect();
            PointSet::new(m(q), 2, pts).unwrap()
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let base = count_det(&a, &b, 3, 1, 1).unwrap();
        for _ in 0..20 {
            let (x, y, z) = (rng.random_range(0..q), rng.random_range(0..q), rng.random_range(1..q));
            // (z, x | y, (1 + x y) / z) has determinant 1
            let w = (1 + x * y) % q * inv_mod(z, q).unwrap() % q;
            let act = |s: &PointSet| {
                let pts: Vec<[u64; 2]> = s
                    .iter()
                    .map(|v| [(z * v[0] + x * v[1]) % q, (y * v[0] + w * v[1]) % q])
                    .collect();
                PointSet::new(m(q), 2, pts).unwrap()
            };
            assert_eq!(count_det(&act(&a), &act(&b), 3, 1, 1).unwrap(), base);
        }
    }

    #[test]
    fn main_terms_and_bound() {
        let t = det_main_terms(8, 8, 3);
        assert_eq!(t.over_q, Rational::new(64.into(), 3.into()));
        assert_eq!(t.over_q_minus_1, Rational::from_integer(32.into()));
        assert_eq!(t.closer(24), DetNormalization::OverQ);
        assert_eq!(t.closer(30), DetNormalization::OverQMinus1);
        let expect = 3f64.powf(0.75) * 8.0 + 64.0 / 9.0;
        assert!((det_bound_rhs(3, 2, 8, 8) - expect).abs() < 1e-12);
        assert_eq!(det_bound_rhs(5, 3, 0, 10), 0.0);
    }

    #[test]
    fn tuple_counts() {
        assert_eq!(closed_form_tuple_count(3, 2, 1), Rational::from_integer(6.into()));
        assert_eq!(independent_tuple_count(3, 2, 1), BigInt::from(8));
        // brute-force count of independent pairs in F_3^2
        let mut pairs = 0;
        for a in 0..9u64 {
            for b in 0..9u64 {
                if (a / 3 * (b % 3) + 9 - (a % 3) * (b / 3) % 3) % 3 != 0 {
                    pairs += 1;
                }
            }
        }
        assert_eq!(independent_tuple_count(3, 2, 2), BigInt::from(pairs));
    }

    #[test]
    fn three_dimensional_count() {
        let q = 3;
        let dom = PointSet::full(m(q), 3).filter(|v| v.iter().any(|&x| x != 0));
        let pairs: Vec<Vec<u64>> = dom
            .iter()
            .flat_map(|u| dom.iter().map(move |v| [u, v].concat()))
            .step_by(7)
            .collect();
        let a = PointSet::new(m(q), 6, pairs).unwrap();
        let b = dom.clone();
        let mut brute = 0u64;
        for x in a.iter() {
            for y in b.iter() {
                let e = [x, y].concat();
                if det_oracle(&e, 3, q) == 2 {
                    brute += 1;
                }
            }
        }
        assert_eq!(count_det(&a, &b, 2, 2, 1).unwrap(), brute);
    }
}
