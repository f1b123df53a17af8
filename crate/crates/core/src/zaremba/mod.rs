//! Continued fractions with bounded partial quotients, the Zaremba sets
//! `Z_M(q)`, witnesses inside multiplicative subgroups, and the additive and
//! multiplicative structure of such sets.

mod structure;
mod subgroup;

pub use structure::{
    ad_regularity, energy_bound_report, interval_union, mult_energy, AdRegularity, AdSample, EnergyBoundReport,
    IntervalUnion,
};
pub use subgroup::{find_in_subgroup, minimal_bound_in_subgroup, SubgroupSpec, WitnessParams, WitnessReport};

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::modring::{gcd, Modulus};
use crate::setops::PointSet;

/// `a/q = [0; c_1, …, c_s]` in canonical form (`c_s ≥ 2` when `s ≥ 2`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    numerator: u64,
    denominator: u64,
    quotients: Vec<u64>,
}

impl ContinuedFraction {
    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    pub fn max_quotient(&self) -> u64 {
        self.quotients.iter().copied().max().unwrap_or(0)
    }

    /// Maximum over the equivalent expansion `[0; c_1, …, c_s - 1, 1]`.
    pub fn alternate_max_quotient(&self) -> u64 {
        let (last, init) = self.quotients.split_last().expect("nonempty expansion");
        init.iter().copied().chain([last - 1, 1]).max().unwrap_or(1)
    }

    /// Convergents `p_j / q_j`, `j = 1..=s`.
    pub fn convergents(&self) -> Vec<(u64, u64)> {
        let (mut p0, mut q0, mut p1, mut q1) = (1u128, 0u128, 0u128, 1u128);
        self.quotients
            .iter()
            .map(|&c| {
                let (p2, q2) = (c as u128 * p1 + p0, c as u128 * q1 + q0);
                (p0, q0, p1, q1) = (p1, q1, p2, q2);
                (p2 as u64, q2 as u64)
            })
            .collect()
    }
}

fn check_fraction(a: u64, q: u64) -> Result<()> {
    if a == 0 || a >= q || gcd(a, q) != 1 {
        Err(Error::InvalidFraction { a, q })
    } else {
        Ok(())
    }
}

/// Euclid's algorithm on `q / a`.
pub fn cf_expand(a: u64, q: u64) -> Result<ContinuedFraction> {
    check_fraction(a, q)?;
    let (mut x, mut y) = (q, a);
    let mut quotients = Vec::new();
    while y != 0 {
        quotients.push(x / y);
        (x, y) = (y, x % y);
    }
    Ok(ContinuedFraction {
        numerator: a,
        denominator: q,
        quotients,
    })
}

/// `[0; c_1, …, c_s]` as a reduced fraction `(a, q)`.
pub fn cf_value(quotients: &[u64]) -> Result<(u64, u64)> {
    let (&last, init) = quotients
        .split_last()
        .ok_or_else(|| invalid("empty continued fraction"))?;
    if quotients.contains(&0) {
        return Err(invalid("partial quotients must be positive"));
    }
    let overflow = || invalid("continued fraction value overflows u64");
    // tail = num / den, starting from c_s
    let (mut num, mut den) = (last as u128, 1u128);
    for &c in init.iter().rev() {
        let next = (c as u128)
            .checked_mul(num)
            .and_then(|v| v.checked_add(den))
            .ok_or_else(overflow)?;
        (num, den) = (next, num);
    }
    Ok((
        u64::try_from(den).map_err(|_| overflow())?,
        u64::try_from(num).map_err(|_| overflow())?,
    ))
}

/// Largest partial quotient of `a/q`, without storing the expansion.
pub fn max_quotient(a: u64, q: u64) -> Result<u64> {
    check_fraction(a, q)?;
    let (mut x, mut y, mut best) = (q, a, 0);
    while y != 0 {
        best = best.max(x / y);
        (x, y) = (y, x % y);
    }
    Ok(best)
}

/// `Z_M(q) = {1 ≤ a < q : gcd(a, q) = 1, every partial quotient of a/q ≤ M}`.
pub fn zaremba_set(q: u64, bound: u64) -> Result<PointSet> {
    let modulus = Modulus::new(q)?;
    let members: Vec<u64> = (1..q)
        .into_par_iter()
        .filter(|&a| gcd(a, q) == 1 && max_quotient(a, q).is_ok_and(|m| m <= bound))
        .collect();
    Ok(PointSet::from_residues(modulus, members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn expansions() {
        assert_eq!(cf_expand(1, 2).unwrap().quotients(), &[2]);
        assert_eq!(cf_expand(4, 7).unwrap().quotients(), &[1, 1, 3]);
        assert_eq!(cf_expand(1, 97).unwrap().quotients(), &[97]);
        assert!(matches!(cf_expand(2, 4), Err(Error::InvalidFraction { .. })));
        assert!(cf_expand(0, 5).is_err());
        assert!(cf_expand(5, 5).is_err());
        assert_eq!(cf_value(&[2]).unwrap(), (1, 2));
        assert_eq!(cf_value(&[1, 1, 3]).unwrap(), (4, 7));
        assert_eq!(cf_value(&[1, 1, 2, 1]).unwrap(), (4, 7));
        assert!(cf_value(&[]).is_err());
        let cf = cf_expand(4, 7).unwrap();
        assert_eq!(cf.max_quotient(), 3);
        assert_eq!(cf.alternate_max_quotient(), 2);
        assert_eq!(cf_expand(1, 2).unwrap().alternate_max_quotient(), 1);
    }

    /// Exact rational evaluation `1/(c_1 + 1/(c_2 + …))` with `num-rational`.
    fn rational_value(c: &[u64]) -> crate::Rational {
        use num_traits::One;
        let mut tail = crate::Rational::from_integer((*c.last().unwrap()).into());
        for &x in c.iter().rev().skip(1) {
            tail = crate::Rational::from_integer(x.into()) + tail.recip();
        }
        crate::Rational::one() / tail
    }

    #[test]
    fn round_trip_up_to_500() {
        for q in 2..=500u64 {
            for a in (1..q).filter(|&a| gcd(a, q) == 1) {
                let cf = cf_expand(a, q).unwrap();
                let s = cf.quotients().len();
                assert!(s == 1 || cf.quotients()[s - 1] >= 2);
                assert_eq!(cf_value(cf.quotients()).unwrap(), (a, q));
                assert_eq!(rational_value(cf.quotients()), crate::Rational::new(a.into(), q.into()));
                assert_eq!(max_quotient(a, q).unwrap(), cf.max_quotient());
                let conv = cf.convergents();
                assert!(conv.windows(2).all(|w| w[0].1 < w[1].1 || (w[0].1 == 1 && w[1].1 == 1)));
                assert_eq!(*conv.last().unwrap(), (a, q));
            }
        }
    }

    #[test]
    fn zaremba_examples() {
        assert_eq!(zaremba_set(7, 3).unwrap().residues(), &[2, 3, 4, 5]);
        assert_eq!(zaremba_set(7, 7).unwrap().residues(), &[1, 2, 3, 4, 5, 6]);
        assert!(zaremba_set(2, 1).unwrap().is_empty());
        for q in [30u64, 97, 210, 1009] {
            for m in 1..6 {
                let small = zaremba_set(q, m).unwrap();
                let big = zaremba_set(q, m + 1).unwrap();
                assert!(small.residues().iter().all(|&a| big.contains_residue(a)));
            }
        }
    }

    proptest! {
        #[test]
        fn value_of_expansion(c in prop::collection::vec(1u64..20, 1..12)) {
            let (a, q) = cf_value(&c).unwrap();
            prop_assert_eq!(gcd(a, q), 1);
            if q > 1 {
                prop_assert_eq!(cf_value(cf_expand(a, q).unwrap().quotients()).unwrap(), (a, q));
            }
        }
    }
}
