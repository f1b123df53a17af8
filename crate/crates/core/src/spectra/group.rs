use crate::error::{Error, Result};
use crate::modring::{gcd, Mat2, Modulus};

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

fn enumerate(q: u64, cap: usize, size: u128, keep: impl Fn(u64) -> bool) -> Result<Vec<Mat2>> {
    if size > cap as u128 {
        return Err(Error::TooLarge {
            what: "matrix group",
            size,
            cap: cap as u128,
        });
    }
    let mut out = Vec::with_capacity(size as usize);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let g = Mat2::new(a, b, c, d, q);
                    if keep(g.det(q)) {
                        out.push(g);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All of `SL_2(Z_q)`, `q·J_2(q)` elements, in lexicographic entry order.
pub fn enumerate_sl2(q: u64, cap: usize) -> Result<Vec<Mat2>> {
    let m = Modulus::new(q)?;
    let size = q as u128 * m.jordan_totient(2);
    enumerate(q, cap, size, |det| det == 1 % q)
}

/// All of `GL_2(Z_q)`, `φ(q)·q·J_2(q)` elements, in lexicographic entry order.
pub fn enumerate_gl2(q: u64, cap: usize) -> Result<Vec<Mat2>> {
    let m = Modulus::new(q)?;
    let size = m.euler_phi() * q as u128 * m.jordan_totient(2);
    enumerate(q, cap, size, |det| gcd(det, q) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_sl2(2, DEFAULT_GROUP_CAP).unwrap().len(), 6);
        assert_eq!(enumerate_sl2(3, DEFAULT_GROUP_CAP).unwrap().len(), 24);
        assert_eq!(enumerate_sl2(5, DEFAULT_GROUP_CAP).unwrap().len(), 120);
        assert_eq!(enumerate_sl2(4, DEFAULT_GROUP_CAP).unwrap().len(), 48);
        assert_eq!(enumerate_gl2(3, DEFAULT_GROUP_CAP).unwrap().len(), 48);
        assert_eq!(enumerate_gl2(6, DEFAULT_GROUP_CAP).unwrap().len(), 6 * 48);
        assert!(matches!(
            enumerate_sl2(200, DEFAULT_GROUP_CAP),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn brute_force_orders() {
        for q in 2..9u64 {
            let mut sl = 0u128;
            let mut gl = 0u128;
            for e in 0..q.pow(4) {
                let (a, b, c, d) = (e % q, e / q % q, e / q / q % q, e / q / q / q);
                let det = (a * d + q * q - b * c) % q;
                sl += (det == 1 % q) as u128;
                gl += (gcd(det, q) == 1) as u128;
            }
            assert_eq!(enumerate_sl2(q, DEFAULT_GROUP_CAP).unwrap().len() as u128, sl);
            assert_eq!(enumerate_gl2(q, DEFAULT_GROUP_CAP).unwrap().len() as u128, gl);
        }
    }
}
