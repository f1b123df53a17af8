use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::modring::Mat2;
use crate::Rational;

use super::MatrixFamily;

pub const DEFAULT_ENERGY_CAP: u128 = 10_000_000;

/// `|GL_2(F_p)| = (p² - 1)(p² - p)`.
pub fn gl2_order(p: u64) -> u128 {
    let p = p as u128;
    (p * p - 1) * (p * p - p)
}

/// `T_{2k}` of a family, raw and after balancing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Energy {
    pub k: usize,
    pub group_size: usize,
    /// `T_{2k}(G)`.
    pub raw: BigInt,
    /// `T_{2k}(f_G)` with `f_G = G - |G|/|GL_2(F_p)|`.
    pub balanced: Rational,
}

impl Energy {
    pub fn value(&self, balanced: bool) -> Rational {
        if balanced {
            self.balanced.clone()
        } else {
            Rational::from_integer(self.raw.clone())
        }
    }
}

type Counts = BTreeMap<Mat2, u128>;

fn convolve(x: &Counts, y: &Counts, p: u64) -> Counts {
    let mut out = Counts::new();
    for (g, &cg) in x {
        for (h, &ch) in y {
            *out.entry(g.mul(h, p)).or_insert(0) += cg * ch;
        }
    }
    out
}

/// `T_{2k}(G) = Σ_x c_k(x)²` where `c_1(x) = #{(g, h) ∈ G² : g h^{-1} = x}`
/// and `c_k` is the `k`-fold convolution of `c_1`.
///
/// The balanced value follows from `c_k(f_G) = c_k(G) - |G|^{2k}/|GL_2|`,
/// giving `T_{2k}(f_G) = T_{2k}(G) - |G|^{4k}/|GL_2|`.
pub fn energy_t2k(g: &MatrixFamily, k: usize, cap: u128) -> Result<Energy> {
    if !(2..=3).contains(&k) {
        return Err(invalid(format!("energy_t2k supports k = 2, 3, got {k}")));
    }
    let p = g.p();
    let n = g.len() as u128;
    let group = gl2_order(p);
    let mut c = Counts::new();
    let inverses: Vec<Mat2> = g
        .elements()
        .iter()
        .map(|h| h.inverse(p).expect("family elements are invertible"))
        .collect();
    let mut work = n * n;
    if work > cap {
        return Err(Error::TooLarge {
            what: "energy products",
            size: work,
            cap,
        });
    }
    for a in g.elements() {
        for hi in &inverses {
            *c.entry(a.mul(hi, p)).or_insert(0) += 1;
        }
    }
    let mut acc = c.clone();
    for _ in 1..k {
        work += acc.len() as u128 * c.len() as u128;
        if work > cap {
            return Err(Error::TooLarge {
                what: "energy products",
                size: work,
                cap,
            });
        }
        acc = convolve(&acc, &c, p);
    }
    let raw: BigInt = acc
        .values()
        .map(|&v| BigInt::from(v) * BigInt::from(v))
        .fold(BigInt::zero(), |s, x| s + x);
    let correction = Rational::new(BigInt::from(n).pow(4 * k as u32), BigInt::from(group));
    Ok(Energy {
        k,
        group_size: g.len(),
        balanced: Rational::from_integer(raw.clone()) - correction,
        raw,
    })
}

/// `√(|A||B||G|)·T^{1/(8k)} + √(|A||B|)·|G|·max(|A|, |B|)^{-1/(2k)}`.
pub fn prop_rhs(k: usize, size_a: u64, size_b: u64, size_g: u64, t: f64) -> f64 {
    if size_a == 0 || size_b == 0 {
        return 0.0;
    }
    let ab = size_a as f64 * size_b as f64;
    let kf = k as f64;
    (ab * size_g as f64).sqrt() * t.max(0.0).powf(1.0 / (8.0 * kf))
        + ab.sqrt() * size_g as f64 * (size_a.max(size_b) as f64).powf(-1.0 / (2.0 * kf))
}
