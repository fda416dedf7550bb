//! Simple elements and simple truncs over finite pointed spaces.
//!
//! An element is a rational-valued function on the points of a
//! [`PointedBooleanSpace`] vanishing at the star; it is stored as one value
//! per site. On a finite discrete space every such function is locally
//! constant, so every element is simple.

mod analysis;
mod family;
pub mod hyper;
mod pointwise;
mod sequences;
mod yosida;

use std::fmt;
use std::sync::Arc;

pub use analysis::{
    bounded_away_from_zero, clearance, clearance_step, is_bounded, is_unital_component, normal_form, BoundedAwayReport,
    ClearanceStep, NormalForm,
};
pub use family::{lc, member, uc, Membership, SimpleTrunc};
pub use hyper::{hyperarchimedean, HyperModel, HyperVerdict};
pub use pointwise::{dini_check, grid_cuts, pointwise_sup, DiniReport, SupReport};
pub use sequences::{
    element_from_good, good_from_element, truncation_sequence, truncation_sequence_check, GoodSequence,
    TruncationSequence,
};
pub use yosida::{yosida_quotient, YosidaQuotient};

use crate::error::{Error, Result};
use crate::ops::TruncElement;
use crate::scalar::Scalar;
use crate::space::{PointedBooleanSpace, SiteSet};

/// A rational function on a finite pointed space, zero at the star.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleElement<S> {
    space: Arc<PointedBooleanSpace>,
    values: Vec<S>,
}

impl<S: Scalar> SimpleElement<S> {
    /// `values[i]` is the value at site `i`.
    pub fn new(space: Arc<PointedBooleanSpace>, values: Vec<S>) -> Result<Self> {
        if values.len() != space.n_sites() {
            return Err(Error::Structure(format!(
                "expected {} site values, got {}",
                space.n_sites(),
                values.len()
            )));
        }
        Ok(SimpleElement { space, values })
    }

    /// From `(point label, value)` pairs; unlisted sites are zero. Listing the
    /// star with a nonzero value is an error.
    pub fn from_pairs<'a, I>(space: Arc<PointedBooleanSpace>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, S)>,
    {
        let mut values = vec![S::zero(); space.n_sites()];
        for (label, v) in pairs {
            if label == space.star_label() {
                if !v.is_zero() {
                    return Err(Error::Invariant(format!("value at the star `{label}` must be 0")));
                }
                continue;
            }
            let site = space
                .site_of_label(label)
                .ok_or_else(|| Error::Structure(format!("unknown point `{label}`")))?;
            values[site] = v;
        }
        Ok(SimpleElement { space, values })
    }

    pub fn zero(space: Arc<PointedBooleanSpace>) -> Self {
        let values = vec![S::zero(); space.n_sites()];
        SimpleElement { space, values }
    }

    /// The characteristic function `χ_set`.
    pub fn characteristic(space: Arc<PointedBooleanSpace>, set: SiteSet) -> Self {
        let values = (0..space.n_sites())
            .map(|s| if set.contains(s) { S::one() } else { S::zero() })
            .collect();
        SimpleElement { space, values }
    }

    pub fn space(&self) -> &Arc<PointedBooleanSpace> {
        &self.space
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value(&self, site: usize) -> &S {
        &self.values[site]
    }

    /// Sites where the value is nonzero.
    pub fn cozero(&self) -> SiteSet {
        SiteSet::from_sites((0..self.values.len()).filter(|&s| !self.values[s].is_zero()))
    }

    /// `{x : value(x) > r}` over the sites; the star belongs to it iff `r < 0`.
    pub fn above(&self, r: &S) -> SiteSet {
        SiteSet::from_sites((0..self.values.len()).filter(|&s| &self.values[s] > r))
    }

    /// `{x : value(x) < r}` over the sites.
    pub fn below(&self, r: &S) -> SiteSet {
        SiteSet::from_sites((0..self.values.len()).filter(|&s| &self.values[s] < r))
    }

    /// Largest value, counting the star's 0.
    pub fn max_value(&self) -> S {
        self.values.iter().fold(S::zero(), |m, v| S::max_of(&m, v))
    }

    /// Multiply by the characteristic function of `set`.
    pub fn restrict_support(&self, set: SiteSet) -> Self {
        self.map_sites(|s, v| if set.contains(s) { v.clone() } else { S::zero() })
    }

    /// Restriction to the subspace of the star and the `keep` sites.
    pub fn restrict_to(&self, subspace: &Arc<PointedBooleanSpace>, site_map: &[Option<usize>]) -> Self {
        let mut values = vec![S::zero(); subspace.n_sites()];
        for (old, new) in site_map.iter().enumerate() {
            if let Some(new) = new {
                values[*new] = self.values[old].clone();
            }
        }
        SimpleElement {
            space: subspace.clone(),
            values,
        }
    }

    fn map_sites(&self, f: impl Fn(usize, &S) -> S) -> Self {
        SimpleElement {
            space: self.space.clone(),
            values: self.values.iter().enumerate().map(|(s, v)| f(s, v)).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        same_space(&self.space, &other.space)?;
        Ok(SimpleElement {
            space: self.space.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    fn require_nonnegative(&self) -> Result<()> {
        if self.is_nonnegative() {
            Ok(())
        } else {
            Err(Error::Negative)
        }
    }
}

pub(crate) fn same_space(a: &Arc<PointedBooleanSpace>, b: &Arc<PointedBooleanSpace>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::Mismatch("elements on different pointed spaces".into()))
    }
}

impl<S: Scalar> TruncElement for SimpleElement<S> {
    type Scalar = S;

    fn zero_like(&self) -> Self {
        SimpleElement::zero(self.space.clone())
    }

    fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    fn negate(&self) -> Self {
        self.map_sites(|_, v| -v.clone())
    }

    fn scale(&self, q: &S) -> Self {
        self.map_sites(|_, v| q.clone() * v.clone())
    }

    fn meet(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, S::min_of)
    }

    fn join(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, S::max_of)
    }

    fn truncate(&self) -> Result<Self> {
        self.require_nonnegative()?;
        Ok(self.map_sites(|_, v| S::min_of(v, &S::one())))
    }

    fn tminus(&self, r: &S) -> Result<Self> {
        self.require_nonnegative()?;
        if r.is_negative() {
            return Err(Error::Precondition(format!("tminus needs r >= 0, got {r}")));
        }
        Ok(self.map_sites(|_, v| S::max_of(&(v.clone() - r.clone()), &S::zero())))
    }

    fn trunc_n(&self, n: u64) -> Result<Self> {
        self.require_nonnegative()?;
        let cap = S::from_uint(n);
        Ok(self.map_sites(|_, v| S::min_of(v, &cap)))
    }

    fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    fn sup_norm(&self) -> S {
        self.values.iter().fold(S::zero(), |m, v| S::max_of(&m, &v.abs()))
    }
}

impl<S: fmt::Display> fmt::Debug for SimpleElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `(v1, v2, …)` in site order.
impl<S: fmt::Display> fmt::Display for SimpleElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", items.join(","))
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::Rational;

    pub fn x3() -> Arc<PointedBooleanSpace> {
        Arc::new(PointedBooleanSpace::standard(3))
    }

    pub fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    /// Element of X3 from `(numerator, denominator)` pairs.
    pub fn el(vals: [(i64, i64); 3]) -> SimpleElement<Rational> {
        SimpleElement::new(x3(), vals.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use crate::ops::{apply_op, TruncOp};
    use crate::Rational;

    #[test]
    fn truncation_examples_on_x3() {
        let g = el([(2, 1), (1, 2), (0, 1)]);
        assert_eq!(
            apply_op(&TruncOp::Truncate, std::slice::from_ref(&g)).unwrap(),
            el([(1, 1), (1, 2), (0, 1)])
        );
        assert_eq!(
            apply_op(&TruncOp::TMinus(q(1, 1)), std::slice::from_ref(&g)).unwrap(),
            el([(1, 1), (0, 1), (0, 1)])
        );
        assert_eq!(apply_op(&TruncOp::TMinus(q(0, 1)), std::slice::from_ref(&g)).unwrap(), g);
        let h = el([(5, 1), (2, 1), (1, 3)]);
        assert_eq!(
            apply_op(&TruncOp::TruncN(2), &[h]).unwrap(),
            el([(2, 1), (2, 1), (1, 3)])
        );
    }

    #[test]
    fn positive_cone_operations_reject_negatives() {
        let g = el([(-1, 1), (0, 1), (1, 1)]);
        assert_eq!(g.truncate().unwrap_err(), Error::Negative);
        assert_eq!(g.tminus(&q(1, 1)).unwrap_err(), Error::Negative);
        assert_eq!(g.trunc_n(3).unwrap_err(), Error::Negative);
        assert!(apply_op(&TruncOp::TMinus(q(-1, 1)), &[g.abs()]).is_err());
    }

    #[test]
    fn operands_must_share_space() {
        let g = el([(1, 1), (0, 1), (0, 1)]);
        let other = SimpleElement::<Rational>::zero(Arc::new(PointedBooleanSpace::standard(2)));
        assert!(matches!(g.add(&other), Err(Error::Mismatch(_))));
        assert!(matches!(apply_op(&TruncOp::Add, &[g]), Err(Error::Structure(_))));
    }

    #[test]
    fn star_value_must_be_zero() {
        let space = x3();
        assert!(SimpleElement::from_pairs(space.clone(), [("*", q(1, 1))]).is_err());
        let g = SimpleElement::from_pairs(space, [("2", q(3, 1)), ("*", q(0, 1))]).unwrap();
        assert_eq!(g, el([(0, 1), (3, 1), (0, 1)]));
    }

    #[test]
    fn lattice_and_norm() {
        let g = el([(1, 1), (-2, 1), (0, 1)]);
        assert_eq!(g.abs(), el([(1, 1), (2, 1), (0, 1)]));
        assert_eq!(g.positive_part(), el([(1, 1), (0, 1), (0, 1)]));
        assert_eq!(g.sup_norm(), q(2, 1));
        assert!(g.leq(&g.abs()).unwrap());
        assert_eq!(g.to_string(), "(1,-2,0)");
    }
}
