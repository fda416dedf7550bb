use crate::error::{Error, Result};
use crate::ops::TruncElement;
use crate::scalar::Scalar;
use crate::space::SiteSet;

use super::SimpleElement;

/// A pointwise supremum with the number of cuts at which it was verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupReport<S: Scalar> {
    pub sup: SimpleElement<S>,
    pub cuts_checked: usize,
}

/// Every value occurring in `values` plus 0, the midpoints of consecutive
/// values, and one point beyond each extreme. Sorted and deduplicated.
pub fn grid_cuts<S: Scalar>(values: impl IntoIterator<Item = S>) -> Vec<S> {
    let mut vals: Vec<S> = values.into_iter().chain(std::iter::once(S::zero())).collect();
    vals.sort();
    vals.dedup();
    let mut cuts = Vec::with_capacity(2 * vals.len() + 2);
    cuts.push(vals[0].clone() - S::one());
    for (i, v) in vals.iter().enumerate() {
        if i > 0 {
            cuts.push((vals[i - 1].clone() + v.clone()) * S::half());
        }
        cuts.push(v.clone());
    }
    cuts.push(vals[vals.len() - 1].clone() + S::one());
    cuts
}

/// The pointwise maximum of a nonempty family, checked against the cut-wise
/// definition `⋃ a(r,∞) = b(r,∞)` at every grid cut.
pub fn pointwise_sup<S: Scalar>(fam: &[SimpleElement<S>]) -> Result<SupReport<S>> {
    let Some(first) = fam.first() else {
        return Err(Error::Precondition("pointwise supremum of an empty family".into()));
    };
    let mut sup = first.clone();
    for g in &fam[1..] {
        sup = sup.join(g)?;
    }
    let cuts = grid_cuts(fam.iter().flat_map(|g| g.values().iter().cloned()));
    for r in &cuts {
        let union = fam.iter().fold(SiteSet::EMPTY, |acc, a| acc.union(a.above(r)));
        if union != sup.above(r) {
            return Err(Error::Invariant(format!("cut-wise supremum fails at r = {r}")));
        }
    }
    Ok(SupReport {
        sup,
        cuts_checked: cuts.len(),
    })
}

/// Outcome of a Dini check on a nonincreasing, eventually constant sequence
/// whose last listed term is the stable tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiniReport<S> {
    /// `sup gₙ` for each listed term.
    pub maxima: Vec<S>,
    /// The pointwise limit (the stable tail) is 0.
    pub limit_is_zero: bool,
}

impl<S: Scalar> DiniReport<S> {
    /// Convergence is uniform: the sup of the tail is 0.
    pub fn uniform(&self) -> bool {
        self.limit_is_zero
    }

    /// Least 1-based `m` with `sup gₙ < ε` for all `n ≥ m`.
    pub fn index(&self, epsilon: &S) -> Option<usize> {
        // maxima are nonincreasing, so the first hit is the answer
        self.maxima.iter().position(|m| m < epsilon).map(|i| i + 1)
    }
}

/// Validate monotonicity and report the uniform-convergence index data.
pub fn dini_check<T: TruncElement>(seq: &[T]) -> Result<DiniReport<T::Scalar>> {
    let Some(last) = seq.last() else {
        return Err(Error::Sequence {
            index: 0,
            reason: "empty sequence".into(),
        });
    };
    for (i, g) in seq.iter().enumerate() {
        if !g.is_nonnegative() {
            return Err(Error::Sequence {
                index: i + 1,
                reason: "negative term".into(),
            });
        }
    }
    for (i, pair) in seq.windows(2).enumerate() {
        if !pair[1].leq(&pair[0])? {
            return Err(Error::Sequence {
                index: i + 2,
                reason: "sequence is not nonincreasing".into(),
            });
        }
    }
    Ok(DiniReport {
        maxima: seq.iter().map(TruncElement::sup_norm).collect(),
        limit_is_zero: last.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;

    #[test]
    fn sup_examples() {
        let r = pointwise_sup(&[el([(1, 1), (0, 1), (0, 1)]), el([(0, 1), (1, 1), (0, 1)])]).unwrap();
        assert_eq!(r.sup, el([(1, 1), (1, 1), (0, 1)]));
        let g = el([(5, 1), (2, 1), (1, 3)]);
        assert_eq!(pointwise_sup(std::slice::from_ref(&g)).unwrap().sup, g);
        assert!(pointwise_sup::<crate::Rational>(&[]).is_err());
    }

    #[test]
    fn grid_contains_values_midpoints_and_beyond() {
        let cuts = grid_cuts([q(1, 1), q(2, 1)]);
        assert_eq!(
            cuts,
            vec![q(-1, 1), q(0, 1), q(1, 2), q(1, 1), q(3, 2), q(2, 1), q(3, 1)]
        );
    }

    #[test]
    fn dini_index_example() {
        let seq = [
            el([(1, 1), (1, 1), (1, 1)]),
            el([(1, 2), (1, 2), (1, 2)]),
            el([(0, 1), (0, 1), (0, 1)]),
            el([(0, 1), (0, 1), (0, 1)]),
        ];
        let report = dini_check(&seq).unwrap();
        assert!(report.uniform());
        assert_eq!(report.index(&q(1, 4)), Some(3));
        assert_eq!(report.index(&q(2, 1)), Some(1));
        assert_eq!(report.index(&q(3, 4)), Some(2));
    }

    #[test]
    fn dini_rejects_increasing() {
        let seq = [el([(0, 1), (0, 1), (0, 1)]), el([(1, 1), (0, 1), (0, 1)])];
        assert!(matches!(dini_check(&seq), Err(Error::Sequence { index: 2, .. })));
        let stuck = dini_check(&[el([(1, 1), (0, 1), (0, 1)])]).unwrap();
        assert!(!stuck.uniform());
        assert_eq!(stuck.index(&q(1, 2)), None);
    }
}
