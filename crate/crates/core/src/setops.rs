//! Finite point sets in `Z_q^n` and the basic set algebra on them.

use std::collections::BTreeMap;

use crate::error::{invalid, Error, Result};
use crate::modring::{mul_mod, Modulus};

/// Distinct, reduced `n`-tuples over `Z_q`, kept in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    modulus: Modulus,
    dim: usize,
    coords: Vec<u64>,
}

impl PointSet {
    /// Reduce every coordinate mod `q`, then sort and deduplicate.
    pub fn new<I, P>(modulus: Modulus, dim: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[u64]>,
    {
        if dim == 0 {
            return Err(invalid("point dimension must be at least 1"));
        }
        let q = modulus.q();
        let mut pts = Vec::new();
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(invalid(format!(
                    "point of length {} in a set of dimension {dim}",
                    p.len()
                )));
            }
            pts.push(p.iter().map(|&x| x % q).collect::<Vec<_>>());
        }
        pts.sort_unstable();
        pts.dedup();
        Ok(Self {
            modulus,
            dim,
            coords: pts.concat(),
        })
    }

    /// One-dimensional set of residues.
    pub fn from_residues(modulus: Modulus, residues: impl IntoIterator<Item = u64>) -> Self {
        let q = modulus.q();
        let mut coords: Vec<u64> = residues.into_iter().map(|x| x % q).collect();
        coords.sort_unstable();
        coords.dedup();
        Self {
            modulus,
            dim: 1,
            coords,
        }
    }

    pub fn empty(modulus: Modulus, dim: usize) -> Self {
        assert!(dim >= 1);
        Self {
            modulus,
            dim,
            coords: Vec::new(),
        }
    }

    /// All of `Z_q^dim`, in lexicographic order.
    pub fn full(modulus: Modulus, dim: usize) -> Self {
        let q = modulus.q();
        let total = q.pow(dim as u32);
        let mut coords = Vec::with_capacity(total as usize * dim);
        for idx in 0..total {
            let start = coords.len();
            let mut r = idx;
            for _ in 0..dim {
                coords.push(r % q);
                r /= q;
            }
            coords[start..].reverse();
        }
        Self { modulus, dim, coords }
    }

    /// Tuples `t` with `gcd(t_1, …, t_n, q) = 1`.
    pub fn coprime_tuples(modulus: Modulus, dim: usize) -> Self {
        let full = Self::full(modulus, dim);
        full.filter(|t| full.modulus.is_coprime_tuple(t))
    }

    pub fn filter(&self, mut keep: impl FnMut(&[u64]) -> bool) -> Self {
        let coords = self.iter().filter(|t| keep(t)).flatten().copied().collect();
        Self {
            modulus: self.modulus.clone(),
            dim: self.dim,
            coords,
        }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn q(&self) -> u64 {
        self.modulus.q()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, u64> {
        self.coords.chunks_exact(self.dim)
    }

    /// Coordinates of all points, concatenated in order.
    pub fn as_flat(&self) -> &[u64] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &[u64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Residues of a one-dimensional set.
    pub fn residues(&self) -> &[u64] {
        assert_eq!(self.dim, 1, "residues() needs a one-dimensional set");
        &self.coords
    }

    pub fn index_of(&self, point: &[u64]) -> Option<usize> {
        if point.len() != self.dim {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(point) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, point: &[u64]) -> bool {
        self.index_of(point).is_some()
    }

    pub fn contains_residue(&self, x: u64) -> bool {
        self.dim == 1 && self.coords.binary_search(&(x % self.q())).is_ok()
    }

    /// Fails unless every tuple is coprime to `q`.
    pub fn require_coprime_tuples(&self) -> Result<()> {
        match self.iter().find(|t| !self.modulus.is_coprime_tuple(t)) {
            None => Ok(()),
            Some(t) => Err(invalid(format!("tuple {t:?} is not coprime to {}", self.q()))),
        }
    }

    /// Dense membership bitmap of a one-dimensional set.
    pub fn bitmap(&self) -> Vec<bool> {
        let mut bits = vec![false; self.q() as usize];
        for &x in self.residues() {
            bits[x as usize] = true;
        }
        bits
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.q() != other.q() {
            return Err(Error::ModulusMismatch {
                left: self.q(),
                right: other.q(),
            });
        }
        if self.dim != other.dim {
            return Err(invalid(format!("dimension mismatch: {} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }
}

/// `A + B = {a + b}` componentwise.
pub fn sumset(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    a.same_ring(b)?;
    let q = a.q();
    let mut pts = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            pts.push(x.iter().zip(y).map(|(&u, &v)| (u + v) % q).collect::<Vec<_>>());
        }
    }
    PointSet::new(a.modulus.clone(), a.dim, pts)
}

/// `A · B = {ab}` for one-dimensional sets.
pub fn productset(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    a.same_ring(b)?;
    if a.dim != 1 {
        return Err(invalid("product sets are defined for one-dimensional sets"));
    }
    let q = a.q();
    let prods = a
        .residues()
        .iter()
        .flat_map(|&x| b.residues().iter().map(move |&y| mul_mod(x, y, q)));
    Ok(PointSet::from_residues(a.modulus.clone(), prods))
}

/// Whether `I ∔ Λ`, i.e. `|I + Λ| = |I||Λ|`.
pub fn is_direct_sum(i: &PointSet, lambda: &PointSet) -> Result<bool> {
    if i.dim != 1 {
        return Err(invalid("direct sums are checked for one-dimensional sets"));
    }
    i.same_ring(lambda)?;
    let q = i.q() as usize;
    let mut seen = vec![false; q];
    for &x in i.residues() {
        for &y in lambda.residues() {
            let s = (x + y) % q as u64;
            if std::mem::replace(&mut seen[s as usize], true) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepOp {
    Sum,
    Product,
    /// `a · b^{-1}`
    Quotient,
}

/// What [`rep_function`] does with a non-invertible `b` in quotient mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NonUnitPolicy {
    #[default]
    Error,
    Skip,
}

/// Representation function `r(x) = #{(a, b) : a ∘ b = x}`; zero entries are omitted.
pub fn rep_function(a: &PointSet, b: &PointSet, op: RepOp, policy: NonUnitPolicy) -> Result<BTreeMap<u64, u64>> {
    a.same_ring(b)?;
    if a.dim != 1 {
        return Err(invalid("representation functions need one-dimensional sets"));
    }
    let q = a.q();
    let rhs: Vec<u64> = match op {
        RepOp::Sum | RepOp::Product => b.residues().to_vec(),
        RepOp::Quotient => {
            let mut inverses = Vec::with_capacity(b.len());
            for &y in b.residues() {
                match (a.modulus.inv(y), policy) {
                    (Some(inv), _) => inverses.push(inv),
                    (None, NonUnitPolicy::Skip) => {}
                    (None, NonUnitPolicy::Error) => return Err(Error::NonUnit { value: y, q }),
                }
            }
            inverses
        }
    };
    let mut r = BTreeMap::new();
    for &x in a.residues() {
        for &y in &rhs {
            let v = match op {
                RepOp::Sum => (x + y) % q,
                RepOp::Product | RepOp::Quotient => mul_mod(x, y, q),
            };
            *r.entry(v).or_insert(0) += 1;
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Invert,
    Shift(u64),
    Dilate(u64),
}

/// Image of a set under a transform, with the number of elements that had no image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformed {
    pub set: PointSet,
    /// Non-units dropped by [`Transform::Invert`].
    pub dropped: usize,
}

pub fn transform_set(a: &PointSet, kind: Transform) -> Result<Transformed> {
    if a.dim != 1 {
        return Err(invalid("transform_set works on one-dimensional sets"));
    }
    let q = a.q();
    let mut dropped = 0;
    let image: Vec<u64> = a
        .residues()
        .iter()
        .filter_map(|&x| match kind {
            Transform::Invert => {
                let inv = a.modulus.inv(x);
                dropped += usize::from(inv.is_none());
                inv
            }
            Transform::Shift(t) => Some((x + t % q) % q),
            Transform::Dilate(s) => Some(mul_mod(x, s, q)),
        })
        .collect();
    Ok(Transformed {
        set: PointSet::from_residues(a.modulus.clone(), image),
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(q: u64) -> Modulus {
        Modulus::new(q).unwrap()
    }

    fn set(q: u64, xs: &[u64]) -> PointSet {
        PointSet::from_residues(m(q), xs.iter().copied())
    }

    #[test]
    fn construction_reduces_and_dedups() {
        let s = PointSet::new(m(5), 2, [[7u64, 1], [2, 1], [0, 0]]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.get(0), &[0, 0]);
        assert_eq!(s.get(1), &[2, 1]);
        assert!(PointSet::new(m(5), 2, [[1u64, 2, 3]]).is_err());
        assert_eq!(PointSet::full(m(3), 2).len(), 9);
        assert_eq!(PointSet::coprime_tuples(m(3), 2).len(), 8);
        assert_eq!(PointSet::coprime_tuples(m(6), 2).len(), 24);
    }

    #[test]
    fn full_set_is_sorted() {
        let s = PointSet::full(m(4), 3);
        let v: Vec<&[u64]> = s.iter().collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s.index_of(&[3, 0, 2]), Some(3 * 16 + 2));
    }

    #[test]
    fn sumset_and_productset() {
        let b = set(7, &[1, 3, 5]);
        assert_eq!(sumset(&set(7, &[0]), &b).unwrap(), b);
        let p = productset(&set(7, &[1, 2]), &set(7, &[1, 3])).unwrap();
        assert_eq!(p.residues(), &[1, 2, 3, 6]);
        assert!(matches!(
            sumset(&set(7, &[1]), &set(5, &[1])),
            Err(Error::ModulusMismatch { left: 7, right: 5 })
        ));
    }

    #[test]
    fn direct_sum_examples() {
        assert!(is_direct_sum(&set(101, &[0, 1]), &set(101, &[0, 10])).unwrap());
        assert!(!is_direct_sum(&set(101, &[0, 1]), &set(101, &[0, 1])).unwrap());
        let n = 7u64;
        let interval = set(101, &(1..=n).collect::<Vec<_>>());
        assert!(is_direct_sum(&interval, &set(101, &[0, n, 2 * n])).unwrap());
    }

    #[test]
    fn representation_examples() {
        let a = set(7, &[1, 2, 4]);
        let r = rep_function(&a, &a, RepOp::Quotient, NonUnitPolicy::Error).unwrap();
        assert_eq!(r[&1], 3);

        let a = set(5, &[1, 2]);
        let r = rep_function(&a, &a, RepOp::Product, NonUnitPolicy::Error).unwrap();
        assert_eq!(r.into_iter().collect::<Vec<_>>(), vec![(1, 1), (2, 2), (4, 1)]);

        let with_zero = set(5, &[0, 2]);
        assert!(matches!(
            rep_function(&a, &with_zero, RepOp::Quotient, NonUnitPolicy::Error),
            Err(Error::NonUnit { value: 0, q: 5 })
        ));
        let r = rep_function(&a, &with_zero, RepOp::Quotient, NonUnitPolicy::Skip).unwrap();
        assert_eq!(r.values().sum::<u64>(), 2);
    }

    #[test]
    fn transform_examples() {
        let t = transform_set(&set(7, &[1, 2, 4]), Transform::Invert).unwrap();
        assert_eq!(t.set.residues(), &[1, 2, 4]);
        assert_eq!(t.dropped, 0);
        let t = transform_set(&set(3, &[0, 1]), Transform::Shift(1)).unwrap();
        assert_eq!(t.set.residues(), &[1, 2]);
        let t = transform_set(&set(12, &[1, 2, 5, 6]), Transform::Invert).unwrap();
        assert_eq!(t.set.residues(), &[1, 5]);
        assert_eq!(t.dropped, 2);
        let t = transform_set(&set(7, &[1, 2]), Transform::Dilate(3)).unwrap();
        assert_eq!(t.set.residues(), &[3, 6]);
    }

    fn residues(q: u64, max: usize) -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(0..q, 0..max)
    }

    proptest! {
        #[test]
        fn rep_mass_is_product_of_sizes(xs in residues(31, 20), ys in residues(31, 20), op in 0..3usize) {
            let q = 31;
            let (a, b) = (set(q, &xs), set(q, &ys));
            let op = [RepOp::Sum, RepOp::Product, RepOp::Quotient][op];
            let b = if op == RepOp::Quotient { b.filter(|t| t[0] != 0) } else { b };
            let r = rep_function(&a, &b, op, NonUnitPolicy::Error).unwrap();
            prop_assert_eq!(r.values().sum::<u64>(), (a.len() * b.len()) as u64);
        }

        #[test]
        fn sumset_size_bounds(xs in residues(23, 12)) {
            let a = set(23, &xs);
            let s = sumset(&a, &a).unwrap();
            prop_assert!(s.len() <= (a.len() * a.len()).min(23));
        }

        #[test]
        fn direct_sum_agrees_with_brute_force(xs in residues(97, 30), ys in residues(97, 30)) {
            let (i, l) = (set(97, &xs), set(97, &ys));
            let mut sums: Vec<u64> = Vec::new();
            for &x in i.residues() {
                for &y in l.residues() {
                    sums.push((x + y) % 97);
                }
            }
            sums.sort_unstable();
            sums.dedup();
            prop_assert_eq!(is_direct_sum(&i, &l).unwrap(), sums.len() == i.len() * l.len());
        }

        #[test]
        fn invert_is_involution(xs in residues(29, 15)) {
            let units = set(29, &xs).filter(|t| t[0] != 0);
            let once = transform_set(&units, Transform::Invert).unwrap().set;
            let twice = transform_set(&once, Transform::Invert).unwrap().set;
            prop_assert_eq!(twice, units);
        }
    }
}
