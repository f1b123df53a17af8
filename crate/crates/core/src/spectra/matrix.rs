use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::incidence::{cross_ratio, determinant_mod_p, dot_product_mod, IncidenceInstance, IncidenceKind};
use crate::modring::Modulus;
use crate::scalar::Scalar;
use crate::setops::PointSet;

use super::Matrix;

pub const DEFAULT_MATRIX_CAP: usize = 5000;

/// Dense 0/1 matrix of an incidence relation, indexed by two label families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    instance: IncidenceInstance,
    entries: Vec<u8>,
}

/// Exact rectangular norm `Σ_{a,a'} (Σ_b M(a,b) M(a',b))²` split by the
/// diagonal of the Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RectangularNorm {
    pub total: u128,
    pub diagonal: u128,
    pub off_diagonal: u128,
}

fn holds(kind: IncidenceKind, q: u64, lambda: u64, x: &[u64], y: &[u64], buf: &mut Vec<u64>) -> bool {
    match kind {
        IncidenceKind::Dot { .. } => dot_product_mod(x, y, q) == lambda,
        IncidenceKind::Det { n, m } => {
            let d = n + m;
            buf.clear();
            buf.extend_from_slice(x);
            buf.extend_from_slice(y);
            determinant_mod_p(buf, d, q) == lambda
        }
        IncidenceKind::CrossRatio => cross_ratio(x[0], x[1], y[0], y[1], q) == Some(lambda),
    }
}

fn family_size(kind: IncidenceKind, m: &Modulus) -> (u128, u128) {
    let q = m.q() as u128;
    let (da, db) = kind.dims();
    match kind {
        IncidenceKind::Dot { n } => {
            let j = m.jordan_totient(n as u32);
            (j, j)
        }
        _ => (
            q.checked_pow(da as u32).unwrap_or(u128::MAX),
            q.checked_pow(db as u32).unwrap_or(u128::MAX),
        ),
    }
}

fn check_cap(what: &'static str, size: u128, cap: usize) -> Result<()> {
    if size > cap as u128 {
        Err(Error::TooLarge {
            what,
            size,
            cap: cap as u128,
        })
    } else {
        Ok(())
    }
}

/// Matrix over the full label families: coprime `n`-tuples for dot, all
/// `n`- and `m`-tuples of vectors of `Z_q^d` for det, all of `Z_q^2` for
/// cross-ratio.
pub fn build_matrix(kind: IncidenceKind, modulus: &Modulus, lambda: u64, cap: usize) -> Result<IncidenceMatrix> {
    let (ra, rb) = family_size(kind, modulus);
    check_cap("matrix rows", ra, cap)?;
    check_cap("matrix columns", rb, cap)?;
    let (da, db) = kind.dims();
    let m = modulus.clone();
    let (rows, cols) = match kind {
        IncidenceKind::Dot { n } => (PointSet::coprime_tuples(m.clone(), n), PointSet::coprime_tuples(m, n)),
        _ => (PointSet::full(m.clone(), da), PointSet::full(m, db)),
    };
    IncidenceMatrix::from_families(kind, lambda, rows, cols, cap)
}

impl IncidenceMatrix {
    /// Matrix over explicit row and column families.
    pub fn from_families(kind: IncidenceKind, lambda: u64, rows: PointSet, cols: PointSet, cap: usize) -> Result<Self> {
        check_cap("matrix rows", rows.len() as u128, cap)?;
        check_cap("matrix columns", cols.len() as u128, cap)?;
        let instance = match kind {
            IncidenceKind::Dot { .. } => IncidenceInstance::dot(rows, cols, lambda)?,
            IncidenceKind::Det { n, m } => IncidenceInstance::det(rows, cols, lambda, n, m)?,
            IncidenceKind::CrossRatio => IncidenceInstance::cross_ratio(rows, cols, lambda)?,
        };
        if instance.kind() != kind {
            return Err(invalid("family dimensions do not match the requested kind"));
        }
        let (q, lambda) = (instance.modulus().q(), instance.lambda());
        let (a, b) = (instance.a(), instance.b());
        let entries: Vec<u8> = a
            .as_flat()
            .par_chunks_exact(a.dim())
            .flat_map_iter(|x| {
                let mut buf = Vec::new();
                b.iter()
                    .map(|y| holds(kind, q, lambda, x, y, &mut buf) as u8)
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(Self { instance, entries })
    }

    pub fn kind(&self) -> IncidenceKind {
        self.instance.kind()
    }

    pub fn lambda(&self) -> u64 {
        self.instance.lambda()
    }

    pub fn modulus(&self) -> &Modulus {
        self.instance.modulus()
    }

    pub fn row_labels(&self) -> &PointSet {
        self.instance.a()
    }

    pub fn col_labels(&self) -> &PointSet {
        self.instance.b()
    }

    pub fn rows(&self) -> usize {
        self.instance.a().len()
    }

    pub fn cols(&self) -> usize {
        self.instance.b().len()
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.cols() + j]
    }

    pub fn row(&self, i: usize) -> &[u8] {
        let c = self.cols();
        &self.entries[i * c..(i + 1) * c]
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.rows())
            .map(|i| self.row(i).iter().map(|&x| x as u64).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows() == self.cols()
            && self.row_labels() == self.col_labels()
            && (0..self.rows()).all(|i| (i + 1..self.cols()).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    pub fn to_matrix<T: Scalar>(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows(), self.cols(), |i, j| T::of_u64(self.entry(i, j) as u64))
    }

    /// Exact Gram matrix `M Mᵀ`, row-major.
    pub fn gram(&self) -> Vec<u64> {
        let r = self.rows();
        (0..r)
            .into_par_iter()
            .flat_map_iter(|i| {
                let ri = self.row(i);
                (0..r).map(move |j| ri.iter().zip(self.row(j)).map(|(&x, &y)| (x & y) as u64).sum::<u64>())
            })
            .collect()
    }

    pub fn rectangular_norm(&self) -> RectangularNorm {
        let r = self.rows();
        let g = self.gram();
        let (mut diagonal, mut off_diagonal) = (0u128, 0u128);
        for i in 0..r {
            for j in 0..r {
                let v = g[i * r + j] as u128;
                if i == j {
                    diagonal += v * v;
                } else {
                    off_diagonal += v * v;
                }
            }
        }
        RectangularNorm {
            total: diagonal + off_diagonal,
            diagonal,
            off_diagonal,
        }
    }

    /// Plain-text dump: one header line then one line of `0`/`1` per row.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let extra = match self.kind() {
            IncidenceKind::Dot { n } => format!(" n={n}"),
            IncidenceKind::Det { n, m } => format!(" n={n} m={m}"),
            IncidenceKind::CrossRatio => String::new(),
        };
        let _ = writeln!(
            s,
            "kind={}{extra} q={} lambda={} rows={} cols={}",
            self.kind().name(),
            self.modulus().q(),
            self.lambda(),
            self.rows(),
            self.cols()
        );
        for i in 0..self.rows() {
            s.extend(self.row(i).iter().map(|&x| if x == 1 { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }
}

/// A parsed [`IncidenceMatrix::dump`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixDump {
    pub kind: IncidenceKind,
    pub q: u64,
    pub lambda: u64,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u8>,
}

pub fn parse_dump(text: &str) -> Result<MatrixDump> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| invalid("empty matrix dump"))?;
    let field = |key: &str| -> Result<&str> {
        header
            .split_whitespace()
            .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
            .ok_or_else(|| invalid(format!("matrix dump header lacks {key}")))
    };
    let num = |key: &str| -> Result<u64> {
        field(key)?
            .parse()
            .map_err(|_| invalid(format!("matrix dump field {key} is not an integer")))
    };
    let kind = match field("kind")? {
        "dot" => IncidenceKind::Dot { n: num("n")? as usize },
        "det" => IncidenceKind::Det {
            n: num("n")? as usize,
            m: num("m")? as usize,
        },
        "crossratio" => IncidenceKind::CrossRatio,
        other => return Err(invalid(format!("unknown matrix kind {other}"))),
    };
    let (rows, cols) = (num("rows")? as usize, num("cols")? as usize);
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, line) in lines.enumerate() {
        if line.len() != cols {
            return Err(invalid(format!("matrix dump row {i} has length {}", line.len())));
        }
        for ch in line.chars() {
            entries.push(match ch {
                '0' => 0,
                '1' => 1,
                _ => return Err(invalid(format!("matrix dump row {i} has character {ch:?}"))),
            });
        }
    }
    if entries.len() != rows * cols {
        return Err(invalid("matrix dump has the wrong number of rows"));
    }
    Ok(MatrixDump {
        kind,
        q: num("q")?,
        lambda: num("lambda")?,
        rows,
        cols,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(q: u64) -> Modulus {
        Modulus::new(q).unwrap()
    }

    #[test]
    fn dot_matrix_is_regular() {
        let mat = build_matrix(IncidenceKind::Dot { n: 2 }, &m(3), 1, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!((mat.rows(), mat.cols()), (8, 8));
        assert!(mat.row_sums().iter().all(|&s| s == 3));
        assert!(mat.is_symmetric());
        for q in [5u64, 9, 12] {
            for n in [2usize, 3] {
                let mat = build_matrix(IncidenceKind::Dot { n }, &m(q), 1, DEFAULT_MATRIX_CAP).unwrap();
                let want = q.pow(n as u32 - 1);
                assert!(mat.row_sums().iter().all(|&s| s == want));
            }
        }
    }

    #[test]
    fn det_matrix_shape_and_norm() {
        let mat = build_matrix(IncidenceKind::Det { n: 1, m: 1 }, &m(3), 1, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!((mat.rows(), mat.cols()), (9, 9));
        let zero = mat.row_labels().index_of(&[0, 0]).unwrap();
        assert!(mat.row(zero).iter().all(|&x| x == 0));
        let sigma = mat.rectangular_norm();
        assert_eq!(sigma.total, 120);
        assert_eq!(sigma.diagonal, 72);
        assert_eq!(sigma.off_diagonal, 48);
    }

    #[test]
    fn crossratio_matrix() {
        let mat = build_matrix(IncidenceKind::CrossRatio, &m(5), 2, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!((mat.rows(), mat.cols()), (25, 25));
        assert!(mat.is_symmetric());
        let labels = mat.row_labels();
        for i in 0..25 {
            for j in 0..25 {
                let (x, y) = (labels.get(i), labels.get(j));
                if cross_ratio(x[0], x[1], y[0], y[1], 5).is_none() {
                    assert_eq!(mat.entry(i, j), 0);
                }
            }
        }
    }

    #[test]
    fn identity_norm_and_caps() {
        let mat = build_matrix(IncidenceKind::Dot { n: 2 }, &m(7), 3, 10);
        assert!(matches!(mat, Err(Error::TooLarge { .. })));
        let big = build_matrix(IncidenceKind::Det { n: 2, m: 2 }, &m(101), 1, DEFAULT_MATRIX_CAP);
        assert!(matches!(big, Err(Error::TooLarge { .. })));
    }

    #[test]
    fn dump_round_trip() {
        let mat = build_matrix(IncidenceKind::Det { n: 1, m: 1 }, &m(3), 2, DEFAULT_MATRIX_CAP).unwrap();
        let text = mat.dump();
        assert!(text.starts_with("kind=det n=1 m=1 q=3 lambda=2 rows=9 cols=9\n"));
        let parsed = parse_dump(&text).unwrap();
        assert_eq!(parsed.kind, mat.kind());
        assert_eq!(
            parsed.entries,
            (0..81).map(|k| mat.entry(k / 9, k % 9)).collect::<Vec<_>>()
        );
        assert!(parse_dump("kind=dot n=2 q=3 lambda=1 rows=1 cols=2\n012\n").is_err());
    }
}
