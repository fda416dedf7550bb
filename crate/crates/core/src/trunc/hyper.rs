use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ops::TruncElement;
use crate::sample::{self, SampleRng};
use crate::scalar::Scalar;

use super::{member, SimpleElement, SimpleTrunc};

/// A trunc that can be probed for the hyperarchimedean property.
///
/// For `f, g` the band generated by `g` is a cardinal summand iff `f` splits
/// as `f_g + (f − f_g)` with `f_g = f·χ(coz g)` in the trunc and
/// `|f_g| ≤ k|g|` for some `k`. The split is forced, so checking it per pair
/// is exact.
pub trait HyperModel {
    type Element: TruncElement;

    fn sample(&self, rng: &mut SampleRng) -> Self::Element;

    /// Pairs tried before any random sample.
    fn structured_pairs(&self) -> Vec<(Self::Element, Self::Element)> {
        Vec::new()
    }

    fn contains(&self, e: &Self::Element) -> bool;

    /// `f·χ(coz g)`.
    fn cozero_part(&self, f: &Self::Element, g: &Self::Element) -> Result<Self::Element>;

    /// Some `k` with `|f| ≤ k|g|`, or `None` when no such `k` exists.
    fn domination_bound(
        &self,
        f: &Self::Element,
        g: &Self::Element,
    ) -> Result<Option<<Self::Element as TruncElement>::Scalar>>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HyperVerdict<E> {
    /// Every checked pair splits.
    Accepted { pairs_checked: usize },
    /// An exact counterexample.
    Refuted { f: E, g: E, reason: String },
}

impl<E> HyperVerdict<E> {
    pub fn is_accepted(&self) -> bool {
        matches!(self, HyperVerdict::Accepted { .. })
    }
}

fn check_pair<M: HyperModel>(model: &M, f: &M::Element, g: &M::Element) -> Result<Option<String>> {
    let fg = model.cozero_part(f, g)?;
    if !model.contains(&fg) {
        return Ok(Some(format!("f·χ(coz g) = {fg:?} is not in the trunc")));
    }
    let rest = f.sub(&fg)?;
    if !rest.abs().meet(&g.abs())?.is_zero() {
        return Err(Error::Invariant("f − f_g is not disjoint from g".into()));
    }
    match model.domination_bound(&fg, g)? {
        None => Ok(Some("no k satisfies |f_g| ≤ k|g|".into())),
        Some(k) => {
            if fg.abs().leq(&g.abs().scale(&k))? {
                Ok(None)
            } else {
                Err(Error::Invariant(format!("claimed bound k = {k} does not dominate")))
            }
        }
    }
}

/// Check the structured pairs, then `budget` seeded random pairs. Acceptance
/// is sampled; a refutation is exact.
pub fn hyperarchimedean<M: HyperModel>(model: &M, budget: usize, seed: u64) -> Result<HyperVerdict<M::Element>> {
    if budget == 0 {
        return Err(Error::Precondition(
            "hyperarchimedean needs a positive sample budget".into(),
        ));
    }
    let mut rng = sample::rng(seed);
    let structured = model.structured_pairs();
    let n_structured = structured.len();
    let random = (0..budget).map(|_| (model.sample(&mut rng), model.sample(&mut rng)));
    for (f, g) in structured.into_iter().chain(random) {
        if let Some(reason) = check_pair(model, &f, &g)? {
            return Ok(HyperVerdict::Refuted { f, g, reason });
        }
    }
    Ok(HyperVerdict::Accepted {
        pairs_checked: n_structured + budget,
    })
}

impl HyperModel for SimpleTrunc {
    type Element = SimpleElement<crate::Rational>;

    fn sample(&self, rng: &mut SampleRng) -> Self::Element {
        sample::trunc_element(rng, self, false)
    }

    fn contains(&self, e: &Self::Element) -> bool {
        member(self, e).is_ok_and(|m| m.is_member())
    }

    fn cozero_part(&self, f: &Self::Element, g: &Self::Element) -> Result<Self::Element> {
        super::same_space(f.space(), g.space())?;
        Ok(f.restrict_support(g.cozero()))
    }

    fn domination_bound(&self, f: &Self::Element, g: &Self::Element) -> Result<Option<crate::Rational>> {
        let mut k = crate::Rational::zero();
        for (a, b) in f.values().iter().zip(g.values()) {
            if a.is_zero() {
                continue;
            }
            if b.is_zero() {
                return Ok(None);
            }
            k = crate::Rational::max_of(&k, &(a.abs() / b.abs()));
        }
        Ok(Some(k))
    }
}
