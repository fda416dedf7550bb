use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ops::TruncElement;
use crate::scalar::Scalar;
use crate::space::PointedBooleanSpace;

use super::SimpleElement;

/// A good sequence `f₁ ≥ f₂ ≥ … ≥ 0` with `fₙ = fₙ‾ = (fₙ + fₙ₊₁)‾`,
/// implicitly continued by zeros. Trailing zero terms are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodSequence<S: Scalar> {
    space: Arc<PointedBooleanSpace>,
    terms: Vec<SimpleElement<S>>,
}

impl<S: Scalar> GoodSequence<S> {
    /// Validate the invariants. A failure names the 1-based index of the
    /// first offending term.
    pub fn new(space: Arc<PointedBooleanSpace>, mut terms: Vec<SimpleElement<S>>) -> Result<Self> {
        let reject = |index: usize, reason: &str| Error::Sequence {
            index,
            reason: reason.to_string(),
        };
        for (i, t) in terms.iter().enumerate() {
            super::same_space(&space, t.space()).map_err(|_| reject(i + 1, "term on another space"))?;
            if !t.is_nonnegative() || t.truncate()? != *t {
                return Err(reject(i + 1, "term is not in the truncation range [0,1]"));
            }
        }
        let zero = SimpleElement::zero(space.clone());
        for i in 0..terms.len() {
            let next = terms.get(i + 1).unwrap_or(&zero);
            if !next.leq(&terms[i])? {
                return Err(reject(i + 1, "terms are not nonincreasing"));
            }
            if terms[i].add(next)?.truncate()? != terms[i] {
                return Err(reject(i + 1, "fₙ ≠ (fₙ + fₙ₊₁)‾"));
            }
        }
        while terms.last().is_some_and(TruncElement::is_zero) {
            terms.pop();
        }
        Ok(GoodSequence { space, terms })
    }

    pub fn terms(&self) -> &[SimpleElement<S>] {
        &self.terms
    }

    pub fn space(&self) -> &Arc<PointedBooleanSpace> {
        &self.space
    }

    /// Partial sum of the first `m` terms.
    pub fn partial_sum(&self, m: usize) -> SimpleElement<S> {
        self.terms
            .iter()
            .take(m)
            .fold(SimpleElement::zero(self.space.clone()), |acc, t| {
                acc.add(t).expect("same space")
            })
    }
}

/// The good sequence `fₙ = (g ⊖ (n−1))‾`, `n = 1..m`, of `g ≥ 0`.
///
/// `m` must reach `⌈max g⌉` so that the omitted tail is zero.
pub fn good_from_element<S: Scalar>(g: &SimpleElement<S>, m: u64) -> Result<GoodSequence<S>> {
    if !g.is_nonnegative() {
        return Err(Error::Negative);
    }
    let required = g.max_value().ceil_u64();
    if m < required {
        return Err(Error::Precondition(format!(
            "m = {m} is too small: the sequence needs at least {required} terms"
        )));
    }
    let terms = (0..m)
        .map(|n| g.tminus(&S::from_uint(n))?.truncate())
        .collect::<Result<Vec<_>>>()?;
    GoodSequence::new(g.space().clone(), terms)
}

/// `Σ fₙ`, the element whose good sequence is `f`.
pub fn element_from_good<S: Scalar>(f: &GoodSequence<S>) -> SimpleElement<S> {
    f.partial_sum(f.terms.len())
}

/// The truncation sequence `g ∧ 1, g ∧ 2, …` of `g ≥ 0`, up to the first
/// index from which it is constant.
pub fn truncation_sequence<S: Scalar>(g: &SimpleElement<S>) -> Result<Vec<SimpleElement<S>>> {
    let last = g.max_value().ceil_u64().max(1);
    (1..=last).map(|n| g.trunc_n(n)).collect()
}

/// A verified truncation sequence with its element and good sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationSequence<S: Scalar> {
    pub element: SimpleElement<S>,
    /// The differences `gₙ − gₙ₋₁`.
    pub good: GoodSequence<S>,
}

/// Check `gₙ = gₙ₊₁ ∧ n` along a finite prefix whose last term is the stable
/// tail, and recover `g` together with the good sequence of differences.
/// Failures carry the 1-based index `n` of the first incompatible term.
pub fn truncation_sequence_check<S: Scalar>(seq: &[SimpleElement<S>]) -> Result<TruncationSequence<S>> {
    let Some(last) = seq.last() else {
        return Err(Error::Sequence {
            index: 0,
            reason: "empty sequence".into(),
        });
    };
    let space = last.space().clone();
    for (i, t) in seq.iter().enumerate() {
        super::same_space(&space, t.space()).map_err(|_| Error::Sequence {
            index: i + 1,
            reason: "term on another space".into(),
        })?;
        if !t.is_nonnegative() {
            return Err(Error::Sequence {
                index: i + 1,
                reason: "negative term".into(),
            });
        }
    }
    for (i, pair) in seq.windows(2).enumerate() {
        let n = i as u64 + 1;
        if pair[1].trunc_n(n)? != pair[0] {
            return Err(Error::Sequence {
                index: i + 1,
                reason: format!("g{n} ≠ g{} ∧ {n}", n + 1),
            });
        }
    }
    let len = seq.len() as u64;
    if last.trunc_n(len)? != *last {
        return Err(Error::Sequence {
            index: seq.len(),
            reason: format!("last term exceeds {len}, so the sequence has not stabilised"),
        });
    }
    let mut previous = SimpleElement::zero(space.clone());
    let mut differences = Vec::with_capacity(seq.len());
    for t in seq {
        differences.push(t.sub(&previous)?);
        previous = t.clone();
    }
    let good = GoodSequence::new(space, differences)?;
    Ok(TruncationSequence {
        element: last.clone(),
        good,
    })
}
