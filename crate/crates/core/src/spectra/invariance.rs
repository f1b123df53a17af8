use crate::error::{invalid, Error, Result};
use crate::modring::Mat2;

use super::IncidenceMatrix;

/// A transformation of row and column labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelAction {
    /// `v ↦ g v` on each consecutive block of `d` coordinates; `g` is `d × d`
    /// row-major.
    Linear { d: usize, matrix: Vec<u64> },
    /// `x ↦ (ax + b)/(cx + d)` on every coordinate.
    Mobius(Mat2),
    /// `x_i ↦ ±x_{perm[i]}`, negated where `negate[i]`.
    SignedPermutation { perm: Vec<usize>, negate: Vec<bool> },
}

impl LabelAction {
    pub fn linear2(g: Mat2) -> Self {
        LabelAction::Linear {
            d: 2,
            matrix: vec![g.a, g.b, g.c, g.d],
        }
    }

    /// Image of one label; `None` when a Möbius coordinate goes to infinity.
    pub fn apply(&self, label: &[u64], q: u64) -> Result<Option<Vec<u64>>> {
        match self {
            LabelAction::Linear { d, matrix } => {
                let d = *d;
                if d == 0 || matrix.len() != d * d || !label.len().is_multiple_of(d) {
                    return Err(invalid("linear action does not fit the label length"));
                }
                let mut out = Vec::with_capacity(label.len());
                for block in label.chunks_exact(d) {
                    for i in 0..d {
                        let s: u128 = (0..d).map(|j| matrix[i * d + j] as u128 * block[j] as u128).sum();
                        out.push((s % q as u128) as u64);
                    }
                }
                Ok(Some(out))
            }
            LabelAction::Mobius(g) => Ok(label.iter().map(|&x| g.mobius(x, q)).collect()),
            LabelAction::SignedPermutation { perm, negate } => {
                if perm.len() != label.len() || negate.len() != label.len() {
                    return Err(invalid("signed permutation does not fit the label length"));
                }
                Ok(Some(
                    perm.iter()
                        .zip(negate)
                        .map(|(&p, &neg)| {
                            let v = label[p] % q;
                            if neg {
                                (q - v) % q
                            } else {
                                v
                            }
                        })
                        .collect(),
                ))
            }
        }
    }
}

/// First `(action, row, col)` with `M(a, b) ≠ M(ga, gb)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counterexample {
    pub action: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvarianceReport {
    pub entries_checked: u64,
    /// Entries skipped because a label image was infinite.
    pub entries_skipped: u64,
    pub counterexample: Option<Counterexample>,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn images(m: &IncidenceMatrix, labels: &crate::setops::PointSet, action: &LabelAction) -> Result<Vec<Option<usize>>> {
    let q = m.modulus().q();
    labels
        .iter()
        .map(|x| match action.apply(x, q)? {
            None => Ok(None),
            Some(y) => labels
                .index_of(&y)
                .map(Some)
                .ok_or_else(|| Error::Mapping(format!("image {y:?} of label {x:?} is not in the index"))),
        })
        .collect()
}

/// Checks `M(a, b) = M(ga, gb)` for every entry and every supplied action.
pub fn check_invariance(m: &IncidenceMatrix, actions: &[LabelAction]) -> Result<InvarianceReport> {
    let mut report = InvarianceReport {
        entries_checked: 0,
        entries_skipped: 0,
        counterexample: None,
    };
    for (k, action) in actions.iter().enumerate() {
        let ri = images(m, m.row_labels(), action)?;
        let ci = images(m, m.col_labels(), action)?;
        for (i, gi) in ri.iter().enumerate() {
            for (j, gj) in ci.iter().enumerate() {
                match (gi, gj) {
                    (Some(gi), Some(gj)) => {
                        report.entries_checked += 1;
                        if report.counterexample.is_none() && m.entry(i, j) != m.entry(*gi, *gj) {
                            report.counterexample = Some(Counterexample {
                                action: k,
                                row: i,
                                col: j,
                            });
                        }
                    }
                    _ => report.entries_skipped += 1,
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::IncidenceKind;
    use crate::modring::Modulus;
    use crate::spectra::{build_matrix, enumerate_sl2, DEFAULT_GROUP_CAP, DEFAULT_MATRIX_CAP};

    fn m(q: u64) -> Modulus {
        Modulus::new(q).unwrap()
    }

    #[test]
    fn det_rotation_and_all_of_sl2() {
        let mat = build_matrix(IncidenceKind::Det { n: 1, m: 1 }, &m(3), 1, DEFAULT_MATRIX_CAP).unwrap();
        let g = LabelAction::linear2(Mat2::from_signed(0, -1, 1, 0, 3));
        assert!(check_invariance(&mat, &[g]).unwrap().holds());
        let all: Vec<LabelAction> = enumerate_sl2(3, DEFAULT_GROUP_CAP)
            .unwrap()
            .into_iter()
            .map(LabelAction::linear2)
            .collect();
        let r = check_invariance(&mat, &all).unwrap();
        assert!(r.holds());
        assert_eq!(r.entries_checked, 24 * 81);
        // det 2 scales every determinant, so λ = 1 is not preserved
        let bad = LabelAction::linear2(Mat2::new(2, 0, 0, 1, 3));
        assert!(!check_invariance(&mat, &[bad]).unwrap().holds());
    }

    #[test]
    fn dot_swap_and_identity() {
        let mat = build_matrix(IncidenceKind::Dot { n: 2 }, &m(5), 1, DEFAULT_MATRIX_CAP).unwrap();
        let swap = LabelAction::SignedPermutation {
            perm: vec![1, 0],
            negate: vec![false, true],
        };
        let id = LabelAction::linear2(Mat2::identity());
        assert!(check_invariance(&mat, &[swap, id]).unwrap().holds());
    }

    #[test]
    fn mobius_on_crossratio() {
        let mat = build_matrix(IncidenceKind::CrossRatio, &m(7), 3, DEFAULT_MATRIX_CAP).unwrap();
        let g = LabelAction::Mobius(Mat2::new(2, 1, 3, 2, 7));
        let r = check_invariance(&mat, &[g]).unwrap();
        assert!(r.holds());
        assert!(r.entries_skipped > 0);
    }

    #[test]
    fn non_permuting_action_is_a_mapping_error() {
        let mat = build_matrix(IncidenceKind::Dot { n: 2 }, &m(5), 1, DEFAULT_MATRIX_CAP).unwrap();
        let collapse = LabelAction::linear2(Mat2::new(1, 0, 0, 0, 5));
        assert!(matches!(check_invariance(&mat, &[collapse]), Err(Error::Mapping(_))));
    }
}
