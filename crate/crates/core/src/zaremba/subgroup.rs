use crate::error::{Error, Result};
use crate::modring::{is_prime, mul_mod, pow_mod, primitive_root};

use super::{max_quotient, zaremba_set};

/// Cyclic subgroup `Γ = ⟨g⟩ ≤ F_q^*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSpec {
    q: u64,
    generator: u64,
    elements: Vec<u64>,
}

impl SubgroupSpec {
    pub fn generated_by(q: u64, generator: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::InvalidModulus {
                q,
                reason: "subgroups are taken in F_q^* for prime q",
            });
        }
        let g = generator % q;
        if g == 0 {
            return Err(Error::NonUnit { value: generator, q });
        }
        let mut elements = vec![1 % q];
        let mut x = g;
        while x != 1 % q {
            elements.push(x);
            x = mul_mod(x, g, q);
        }
        elements.sort_unstable();
        Ok(Self {
            q,
            generator: g,
            elements,
        })
    }

    /// Squares in `F_q^*`.
    pub fn quadratic_residues(q: u64) -> Result<Self> {
        let r = primitive_root(q)?;
        Self::generated_by(q, mul_mod(r, r, q))
    }

    /// One subgroup for each divisor of `q - 1`, in increasing order.
    pub fn all(q: u64) -> Result<Vec<Self>> {
        let r = primitive_root(q)?;
        (1..q)
            .filter(|d| (q - 1).is_multiple_of(*d))
            .map(|d| Self::generated_by(q, pow_mod(r, (q - 1) / d, q)))
            .collect()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Sorted elements.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.q)).is_ok()
    }
}

/// Constants of the counting lower bound `|A||Γ|/(q-1) - C·|A|·N^{-c_*}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessParams {
    pub n: u64,
    pub c: f64,
    pub c_star: f64,
}

impl Default for WitnessParams {
    fn default() -> Self {
        Self {
            n: 1,
            c: 1.0,
            c_star: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    /// Smallest `a ∈ Γ` whose quotients are all `≤ M`.
    pub witness: Option<u64>,
    /// `|Z_M(q) ∩ Γ|`.
    pub intersection: usize,
    pub zaremba_size: usize,
    pub lower_bound: f64,
}

pub fn find_in_subgroup(q: u64, bound: u64, gamma: &SubgroupSpec, params: WitnessParams) -> Result<WitnessReport> {
    if gamma.q() != q {
        return Err(Error::ModulusMismatch {
            left: q,
            right: gamma.q(),
        });
    }
    let z = zaremba_set(q, bound)?;
    let hits: Vec<u64> = gamma
        .elements()
        .iter()
        .copied()
        .filter(|&a| z.contains_residue(a))
        .collect();
    let a = z.len() as f64;
    Ok(WitnessReport {
        witness: hits.first().copied(),
        intersection: hits.len(),
        zaremba_size: z.len(),
        lower_bound: a * gamma.order() as f64 / (q - 1) as f64 - params.c * a * (params.n as f64).powf(-params.c_star),
    })
}

/// Least `M` for which `Γ` meets `Z_M(q)`.
pub fn minimal_bound_in_subgroup(gamma: &SubgroupSpec) -> Result<u64> {
    let q = gamma.q();
    gamma
        .elements()
        .iter()
        .map(|&a| max_quotient(a, q))
        .try_fold(u64::MAX, |m, x| x.map(|x| m.min(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroups() {
        let qr = SubgroupSpec::quadratic_residues(11).unwrap();
        assert_eq!(qr.elements(), &[1, 3, 4, 5, 9]);
        let all = SubgroupSpec::all(13).unwrap();
        assert_eq!(
            all.iter().map(|g| g.order()).collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 6, 12]
        );
        for g in &all {
            for &x in g.elements() {
                for &y in g.elements() {
                    assert!(g.contains(x * y % 13));
                }
            }
        }
        assert!(SubgroupSpec::generated_by(12, 5).is_err());
        assert!(SubgroupSpec::generated_by(13, 13).is_err());
    }

    #[test]
    fn witnesses() {
        let q = 101;
        let full = SubgroupSpec::generated_by(q, primitive_root(q).unwrap()).unwrap();
        let r = find_in_subgroup(q, 3, &full, WitnessParams::default()).unwrap();
        assert_eq!(r.witness, zaremba_set(q, 3).unwrap().residues().first().copied());
        assert_eq!(r.intersection, r.zaremba_size);
        let trivial = SubgroupSpec::generated_by(q, 1).unwrap();
        assert_eq!(
            find_in_subgroup(q, 1, &trivial, WitnessParams::default())
                .unwrap()
                .witness,
            None
        );
        assert_eq!(minimal_bound_in_subgroup(&trivial).unwrap(), q);

        let qr = SubgroupSpec::quadratic_residues(1009).unwrap();
        assert_eq!(qr.order(), 504);
        let r = find_in_subgroup(1009, 5, &qr, WitnessParams::default()).unwrap();
        let w = r.witness.unwrap();
        assert!(qr.contains(w) && max_quotient(w, 1009).unwrap() <= 5);
        let brute = qr
            .elements()
            .iter()
            .filter(|&&a| max_quotient(a, 1009).unwrap() <= 5)
            .count();
        assert_eq!(r.intersection, brute);
        assert!(minimal_bound_in_subgroup(&qr).unwrap() <= 5);
    }
}
