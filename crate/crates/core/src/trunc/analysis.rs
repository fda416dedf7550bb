use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ops::TruncElement;
use crate::scalar::Scalar;
use crate::space::{PointedBooleanSpace, SiteSet};

use super::SimpleElement;

/// `Σ r·χ_u` with pairwise disjoint components and pairwise distinct nonzero
/// coefficients. Terms are ordered by the smallest site of their component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm<S> {
    pub terms: Vec<(S, SiteSet)>,
}

impl<S: Scalar> NormalForm<S> {
    pub fn to_element(&self, space: Arc<PointedBooleanSpace>) -> SimpleElement<S> {
        self.terms
            .iter()
            .fold(SimpleElement::zero(space.clone()), |acc, (r, u)| {
                acc.add(&SimpleElement::characteristic(space.clone(), *u).scale(r))
                    .expect("same space")
            })
    }
}

/// The unique normal form of `g`: group sites by their nonzero value.
pub fn normal_form<S: Scalar>(g: &SimpleElement<S>) -> NormalForm<S> {
    let mut terms: Vec<(S, SiteSet)> = Vec::new();
    for (site, v) in g.values().iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        match terms.iter_mut().find(|(r, _)| r == v) {
            Some((_, set)) => set.insert(site),
            None => terms.push((v.clone(), SiteSet::singleton(site))),
        }
    }
    NormalForm { terms }
}

/// `u ≥ 0` is a unital component iff `u = (2u)‾`.
pub fn is_unital_component<S: Scalar>(u: &SimpleElement<S>) -> Result<bool> {
    Ok(u.scale(&S::from_int(2)).truncate()? == *u)
}

/// The smallest nonzero value of `g ≥ 0`; zero for `g = 0`.
pub fn clearance<S: Scalar>(g: &SimpleElement<S>) -> Result<S> {
    if !g.is_nonnegative() {
        return Err(Error::Negative);
    }
    Ok(g.values()
        .iter()
        .filter(|v| !v.is_zero())
        .min()
        .cloned()
        .unwrap_or_else(S::zero))
}

/// One peeling step `g = g₁ + δ·u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClearanceStep<S: Scalar> {
    pub rest: SimpleElement<S>,
    pub component: SimpleElement<S>,
    pub delta: S,
}

/// Split `0 < g = ḡ` as `g₁ + δ·u` with `δ = clr g`,
/// `u = χ(coz g ∖ coz(g ⊖ δ))`, `g₁ ∧ u = 0`, and `clr g₁ > δ` when `g₁ > 0`.
pub fn clearance_step<S: Scalar>(g: &SimpleElement<S>) -> Result<ClearanceStep<S>> {
    if g.is_zero() {
        return Err(Error::Precondition("clearance step needs g > 0".into()));
    }
    if !g.is_nonnegative() || g.truncate()? != *g {
        return Err(Error::Precondition("clearance step needs g = ḡ".into()));
    }
    let delta = clearance(g)?;
    let set = g.cozero().difference(g.tminus(&delta)?.cozero());
    let component = SimpleElement::characteristic(g.space().clone(), set);
    let rest = g.sub(&component.scale(&delta))?;
    Ok(ClearanceStep { rest, component, delta })
}

/// Least positive integer `n` with `g ≤ n·ḡ`.
pub fn is_bounded<S: Scalar>(g: &SimpleElement<S>) -> Result<u64> {
    let bar = g.truncate()?;
    let mut n = g.max_value().ceil_u64().max(1);
    // the ceiling of the maximum always works; step down while it still does
    while n > 1 && g.leq(&bar.scale(&S::from_uint(n - 1)))? {
        n -= 1;
    }
    debug_assert!(g.leq(&bar.scale(&S::from_uint(n)))?);
    Ok(n)
}

/// Evidence that `g ≥ 0` is bounded away from zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedAwayReport<S: Scalar> {
    /// `ε = clr g`: no value of `g` lies in `(0, ε)`.
    pub epsilon: S,
    /// `n = ⌈1/ε⌉`.
    pub n: u64,
    /// `(n·g)‾`, which is a unital component.
    pub component: SimpleElement<S>,
}

/// `Some(report)` iff `g ≠ 0`; on a finite space every nonzero `g ≥ 0` is
/// bounded away from zero. The report carries the cross-check that
/// `(⌈1/ε⌉·g)‾` is a unital component.
pub fn bounded_away_from_zero<S: Scalar>(g: &SimpleElement<S>) -> Result<Option<BoundedAwayReport<S>>> {
    let epsilon = clearance(g)?;
    if epsilon.is_zero() {
        return Ok(None);
    }
    let n = (S::one() / epsilon.clone()).ceil_u64();
    let component = g.scale(&S::from_uint(n)).truncate()?;
    if !is_unital_component(&component)? {
        return Err(Error::Invariant(format!(
            "({n}g)‾ = {component} is not a unital component"
        )));
    }
    Ok(Some(BoundedAwayReport { epsilon, n, component }))
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::Rational;

    #[test]
    fn unital_components() {
        assert!(is_unital_component(&el([(1, 1), (1, 1), (0, 1)])).unwrap());
        assert!(!is_unital_component(&el([(1, 1), (1, 2), (0, 1)])).unwrap());
        assert!(is_unital_component(&el([(0, 1), (0, 1), (0, 1)])).unwrap());
    }

    #[test]
    fn normal_forms() {
        let nf = normal_form(&el([(3, 1), (3, 1), (1, 2)]));
        assert_eq!(
            nf.terms,
            vec![(q(3, 1), SiteSet::from_sites([0, 1])), (q(1, 2), SiteSet::singleton(2))]
        );
        assert!(normal_form(&el([(0, 1), (0, 1), (0, 1)])).terms.is_empty());
        let nf = normal_form(&el([(1, 1), (1, 1), (1, 1)]));
        assert_eq!(nf.terms, vec![(q(1, 1), SiteSet::full(3))]);
        let signed = el([(-2, 1), (5, 3), (-2, 1)]);
        assert_eq!(normal_form(&signed).to_element(x3()), signed);
    }

    #[test]
    fn clearances() {
        assert_eq!(clearance(&el([(3, 1), (3, 1), (1, 2)])).unwrap(), q(1, 2));
        assert_eq!(clearance(&el([(0, 1), (0, 1), (0, 1)])).unwrap(), q(0, 1));
        assert_eq!(clearance(&el([(1, 1), (1, 1), (0, 1)])).unwrap(), q(1, 1));
        assert_eq!(clearance(&el([(-1, 1), (1, 1), (0, 1)])).unwrap_err(), Error::Negative);
    }

    #[test]
    fn clearance_step_examples() {
        let step = clearance_step(&el([(1, 1), (1, 1), (1, 2)])).unwrap();
        assert_eq!(step.rest, el([(1, 1), (1, 1), (0, 1)]));
        assert_eq!(step.component, el([(0, 1), (0, 1), (1, 1)]));
        assert_eq!(step.delta, q(1, 2));

        let chi = el([(1, 1), (1, 1), (0, 1)]);
        let step = clearance_step(&chi).unwrap();
        assert!(step.rest.is_zero());
        assert_eq!(step.component, chi);
        assert_eq!(step.delta, q(1, 1));

        let step = clearance_step(&el([(1, 1), (1, 2), (1, 4)])).unwrap();
        assert_eq!(step.rest, el([(1, 1), (1, 2), (0, 1)]));
        assert_eq!(step.delta, q(1, 4));
        assert!(clearance(&step.rest).unwrap() > step.delta);
    }

    #[test]
    fn clearance_step_preconditions() {
        assert!(matches!(
            clearance_step(&el([(0, 1), (0, 1), (0, 1)])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            clearance_step(&el([(2, 1), (0, 1), (0, 1)])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn boundedness_witness() {
        assert_eq!(is_bounded(&el([(5, 1), (2, 1), (1, 3)])).unwrap(), 5);
        assert_eq!(is_bounded(&el([(1, 1), (1, 1), (1, 3)])).unwrap(), 1);
        assert_eq!(is_bounded(&el([(0, 1), (0, 1), (0, 1)])).unwrap(), 1);
        assert_eq!(is_bounded(&el([(7, 2), (0, 1), (0, 1)])).unwrap(), 4);
    }

    #[test]
    fn bounded_away_examples() {
        let r = bounded_away_from_zero(&el([(1, 1), (1, 2), (0, 1)])).unwrap().unwrap();
        assert_eq!(r.epsilon, q(1, 2));
        assert_eq!(r.n, 2);
        assert_eq!(r.component, el([(1, 1), (1, 1), (0, 1)]));
        assert!(bounded_away_from_zero(&SimpleElement::<Rational>::zero(x3()))
            .unwrap()
            .is_none());
        let r = bounded_away_from_zero(&el([(1, 1), (1, 1), (1, 1)])).unwrap().unwrap();
        assert_eq!(r.epsilon, q(1, 1));
    }
}
