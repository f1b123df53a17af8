use super::{inv_mod, mul_mod};

/// A 2×2 matrix `(a, b | c, d)` over `Z_q`; entries are kept reduced.
///
/// The modulus is not stored; every operation takes it explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl Mat2 {
    pub fn new(a: u64, b: u64, c: u64, d: u64, q: u64) -> Self {
        Self {
            a: a % q,
            b: b % q,
            c: c % q,
            d: d % q,
        }
    }

    /// Build from signed entries, reducing into `[0, q)`.
    pub fn from_signed(a: i64, b: i64, c: i64, d: i64, q: u64) -> Self {
        let r = |x: i64| x.rem_euclid(q as i64) as u64;
        Self {
            a: r(a),
            b: r(b),
            c: r(c),
            d: r(d),
        }
    }

    pub fn identity() -> Self {
        Self { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn det(&self, q: u64) -> u64 {
        (mul_mod(self.a, self.d, q) + q - mul_mod(self.b, self.c, q)) % q
    }

    pub fn mul(&self, o: &Self, q: u64) -> Self {
        let m = |x, y| mul_mod(x, y, q);
        Self {
            a: (m(self.a, o.a) + m(self.b, o.c)) % q,
            b: (m(self.a, o.b) + m(self.b, o.d)) % q,
            c: (m(self.c, o.a) + m(self.d, o.c)) % q,
            d: (m(self.c, o.b) + m(self.d, o.d)) % q,
        }
    }

    pub fn inverse(&self, q: u64) -> Option<Self> {
        let inv = inv_mod(self.det(q), q)?;
        let neg = |x: u64| (q - x % q) % q;
        Some(Self {
            a: mul_mod(self.d, inv, q),
            b: mul_mod(neg(self.b), inv, q),
            c: mul_mod(neg(self.c), inv, q),
            d: mul_mod(self.a, inv, q),
        })
    }

    /// Linear action on a column vector `(x, y)`.
    pub fn apply(&self, v: [u64; 2], q: u64) -> [u64; 2] {
        [
            (mul_mod(self.a, v[0], q) + mul_mod(self.b, v[1], q)) % q,
            (mul_mod(self.c, v[0], q) + mul_mod(self.d, v[1], q)) % q,
        ]
    }

    /// Möbius action `x ↦ (ax + b)/(cx + d)`; `None` when the image is the
    /// point at infinity (or the denominator is not a unit).
    pub fn mobius(&self, x: u64, q: u64) -> Option<u64> {
        let [num, den] = self.apply([x % q, 1], q);
        inv_mod(den, q).map(|inv| mul_mod(num, inv, q))
    }

    /// The denominator `cx + d` of the Möbius action.
    pub fn denominator(&self, x: u64, q: u64) -> u64 {
        (mul_mod(self.c, x, q) + self.d) % q
    }
}
