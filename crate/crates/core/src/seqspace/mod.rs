//! The convergent sequence ω+1 with designated point ω.
//!
//! An element is a function `n ↦ corr(n) + Σₖ cₖ·n⁻ᵏ` on the positive
//! integers, with finitely supported `corr` and value 0 at ω. Comparisons
//! between tails are decided exactly: past a computable crossover index the
//! leading nonzero coefficient fixes the sign, and below it values are
//! compared pointwise.

mod example;
mod model;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ops::TruncElement;
use crate::scalar::Scalar;

pub use example::{ex1_report, Ex1Report};
pub use model::{
    baf_infinity, bounded_away_from_zero, dini_filtration_index, enough_uc_check, filtration_sup, simple_part_member,
    BafWitness, EnoughUc, SeqCarrier, SeqTrunc,
};

/// `corr + Σ cₖ n⁻ᵏ`. Zero corrections and trailing zero coefficients are
/// never stored, so equal functions have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TailElement<S> {
    correction: BTreeMap<u64, S>,
    tail: Vec<S>,
}

fn tail_value<S: Scalar>(tail: &[S], n: u64) -> S {
    // Horner in x = 1/n
    let x = S::one() / S::from_uint(n);
    tail.iter()
        .rev()
        .fold(S::zero(), |acc, c| (acc + c.clone()) * x.clone())
}

/// `Σ |c|` over a coefficient slice.
fn abs_sum<S: Scalar>(coeffs: &[S]) -> S {
    coeffs.iter().fold(S::zero(), |acc, c| acc + c.abs())
}

impl<S: Scalar> TailElement<S> {
    pub fn new<I>(correction: I, tail: Vec<S>) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, S)>,
    {
        let mut map = BTreeMap::new();
        for (n, v) in correction {
            if n == 0 {
                return Err(Error::Structure("sequence points are numbered from 1".into()));
            }
            if map.insert(n, v).is_some() {
                return Err(Error::Structure(format!("point {n} corrected twice")));
            }
        }
        Ok(Self::canonical(map, tail))
    }

    fn canonical(mut correction: BTreeMap<u64, S>, mut tail: Vec<S>) -> Self {
        correction.retain(|_, v| !v.is_zero());
        while tail.last().is_some_and(Zero::is_zero) {
            tail.pop();
        }
        TailElement { correction, tail }
    }

    pub fn zero() -> Self {
        TailElement {
            correction: BTreeMap::new(),
            tail: Vec::new(),
        }
    }

    /// `n ↦ n⁻ᵏ`.
    pub fn inverse_power(k: usize) -> Self {
        assert!(k >= 1, "inverse powers start at 1");
        let mut tail = vec![S::zero(); k];
        tail[k - 1] = S::one();
        TailElement {
            correction: BTreeMap::new(),
            tail,
        }
    }

    /// `g₀(n) = 1/n`.
    pub fn g0() -> Self {
        Self::inverse_power(1)
    }

    /// Characteristic function of a finite set of points.
    pub fn characteristic<I: IntoIterator<Item = u64>>(points: I) -> Self {
        let correction = points.into_iter().map(|n| (n, S::one())).collect();
        Self::canonical(correction, Vec::new())
    }

    /// Finitely supported function.
    pub fn finite<I: IntoIterator<Item = (u64, S)>>(values: I) -> Result<Self> {
        Self::new(values, Vec::new())
    }

    pub fn correction(&self) -> &BTreeMap<u64, S> {
        &self.correction
    }

    pub fn tail(&self) -> &[S] {
        &self.tail
    }

    /// Number of stored tail coefficients.
    pub fn degree(&self) -> usize {
        self.tail.len()
    }

    pub fn has_tail(&self) -> bool {
        !self.tail.is_empty()
    }

    /// Value at the point `n ≥ 1`.
    pub fn value(&self, n: u64) -> S {
        let c = self.correction.get(&n).cloned().unwrap_or_else(S::zero);
        c + tail_value(&self.tail, n)
    }

    /// Largest corrected point, 0 if none.
    pub fn max_support(&self) -> u64 {
        self.correction.keys().next_back().copied().unwrap_or(0)
    }

    /// `(k, cₖ)` for the first nonzero tail coefficient, `k` 1-based.
    pub fn leading(&self) -> Option<(usize, &S)> {
        self.tail
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i + 1, c))
    }

    /// An index `N` beyond every correction such that for all `n ≥ N` the
    /// value has the sign of the leading tail coefficient (and is 0 when the
    /// tail is 0).
    pub fn crossover(&self) -> u64 {
        let base = self.max_support();
        match self.leading() {
            None => base + 1,
            Some((j, lead)) => {
                let ratio = abs_sum(&self.tail[j..]) / lead.abs();
                base + ratio.ceil_u64().max(1) + 1
            }
        }
    }

    /// An index beyond every correction from which `|value| < bound`.
    fn below_from(&self, bound: &S) -> u64 {
        debug_assert!(bound.is_positive());
        self.max_support() + (abs_sum(&self.tail) / bound.clone()).ceil_u64() + 1
    }

    /// An index from which `|value(n)|` is nonincreasing in `n`.
    ///
    /// With `x = 1/n`, the tail is `p(x) = Σ cₖ xᵏ`; past the crossover of
    /// both `p` and `p′` the two share the sign of the leading coefficient,
    /// so `|p|` increases with `x`.
    fn monotone_from(&self) -> u64 {
        let Some((j, lead)) = self.leading() else {
            return self.max_support() + 1;
        };
        let derivative_lead = lead.abs() * S::from_uint(j as u64);
        let rest = self.tail[j..].iter().enumerate().fold(S::zero(), |acc, (i, c)| {
            acc + c.abs() * S::from_uint((j + 1 + i) as u64)
        });
        let ratio = rest / derivative_lead;
        self.crossover().max(self.max_support() + ratio.ceil_u64().max(1) + 1)
    }

    /// `sup_{n ≥ m} |value(n)|`, attained.
    pub fn sup_from(&self, m: u64) -> S {
        let m = m.max(1);
        let last = self.monotone_from().max(m);
        (m..=last).fold(S::zero(), |acc, n| S::max_of(&acc, &self.value(n).abs()))
    }

    /// Overwrite the values at `1..limit` with `f(n, value(n))`, keeping the
    /// given tail; points `≥ limit` keep their current value.
    fn rebuild(&self, tail: Vec<S>, limit: u64, f: impl Fn(u64, S) -> S) -> Self {
        let mut correction: BTreeMap<u64, S> = self.correction.range(limit..).map(|(k, v)| (*k, v.clone())).collect();
        for n in 1..limit {
            let target = f(n, self.value(n));
            correction.insert(n, target - tail_value(&tail, n));
        }
        Self::canonical(correction, tail)
    }

    /// `self · χ(F)` for a finite set `F`.
    pub fn restrict_to_finite<I: IntoIterator<Item = u64>>(&self, points: I) -> Self {
        let correction = points
            .into_iter()
            .filter(|&n| n >= 1)
            .map(|n| (n, self.value(n)))
            .collect();
        Self::canonical(correction, Vec::new())
    }

    /// `self · χ(ℕ ∖ F)` for a finite set `F`.
    pub fn vanish_on<I: IntoIterator<Item = u64>>(&self, points: I) -> Self {
        let mut correction = self.correction.clone();
        for n in points {
            if n >= 1 {
                correction.insert(n, -tail_value(&self.tail, n));
            }
        }
        Self::canonical(correction, self.tail.clone())
    }

    /// `self · χ{m+1, m+2, …}`.
    pub fn drop_prefix(&self, m: u64) -> Self {
        self.vanish_on(1..=m)
    }

    /// Points in `1..limit` where the value is zero; with a nonzero tail
    /// every zero lies below the crossover.
    pub fn zeros_below(&self, limit: u64) -> Vec<u64> {
        (1..limit).filter(|&n| self.value(n).is_zero()).collect()
    }

    /// The support as a finite set, when the tail is zero.
    pub fn finite_support(&self) -> Option<Vec<u64>> {
        if self.has_tail() {
            None
        } else {
            Some(self.correction.keys().copied().collect())
        }
    }

    fn lattice(&self, other: &Self, take_min: bool) -> Self {
        let d = self.sub(other).expect("tail elements share the carrier");
        // from `limit` on, one operand dominates
        let (limit, self_eventually_larger) = match d.leading() {
            None => (d.crossover(), false),
            Some((_, lead)) => (d.crossover(), lead.is_positive()),
        };
        let chosen = if self_eventually_larger == take_min {
            other
        } else {
            self
        };
        let limit = limit.max(self.max_support().max(other.max_support()) + 1);
        chosen.rebuild(chosen.tail.clone(), limit, |n, _| {
            let (a, b) = (self.value(n), other.value(n));
            if take_min {
                S::min_of(&a, &b)
            } else {
                S::max_of(&a, &b)
            }
        })
    }

    /// Values at `1..=count` for cross-checks.
    pub fn values_up_to(&self, count: u64) -> Vec<S> {
        (1..=count).map(|n| self.value(n)).collect()
    }
}

impl<S: Scalar> TruncElement for TailElement<S> {
    type Scalar = S;

    fn zero_like(&self) -> Self {
        Self::zero()
    }

    fn add(&self, other: &Self) -> Result<Self> {
        let mut correction = self.correction.clone();
        for (n, v) in &other.correction {
            let entry = correction.entry(*n).or_insert_with(S::zero);
            *entry = entry.clone() + v.clone();
        }
        let len = self.tail.len().max(other.tail.len());
        let tail = (0..len)
            .map(|i| {
                let a = self.tail.get(i).cloned().unwrap_or_else(S::zero);
                let b = other.tail.get(i).cloned().unwrap_or_else(S::zero);
                a + b
            })
            .collect();
        Ok(Self::canonical(correction, tail))
    }

    fn negate(&self) -> Self {
        self.scale(&-S::one())
    }

    fn scale(&self, q: &S) -> Self {
        let correction = self
            .correction
            .iter()
            .map(|(n, v)| (*n, q.clone() * v.clone()))
            .collect();
        let tail = self.tail.iter().map(|c| q.clone() * c.clone()).collect();
        Self::canonical(correction, tail)
    }

    fn meet(&self, other: &Self) -> Result<Self> {
        Ok(self.lattice(other, true))
    }

    fn join(&self, other: &Self) -> Result<Self> {
        Ok(self.lattice(other, false))
    }

    fn truncate(&self) -> Result<Self> {
        self.trunc_n(1)
    }

    fn tminus(&self, r: &S) -> Result<Self> {
        if !self.is_nonnegative() {
            return Err(Error::Negative);
        }
        if r.is_negative() {
            return Err(Error::Precondition(format!("tminus needs r >= 0, got {r}")));
        }
        if r.is_zero() {
            return Ok(self.clone());
        }
        // eventually g < r, so the result has finite support
        let limit = self.below_from(r);
        let zero = Self::zero();
        Ok(zero.rebuild(Vec::new(), limit, |n, _| {
            S::max_of(&(self.value(n) - r.clone()), &S::zero())
        }))
    }

    fn trunc_n(&self, n: u64) -> Result<Self> {
        if !self.is_nonnegative() {
            return Err(Error::Negative);
        }
        if n == 0 {
            return Ok(Self::zero());
        }
        let cap = S::from_uint(n);
        let limit = self.below_from(&cap);
        Ok(self.rebuild(self.tail.clone(), limit, |_, v| S::min_of(&v, &cap)))
    }

    fn is_nonnegative(&self) -> bool {
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            return false;
        }
        (1..self.crossover()).all(|n| !self.value(n).is_negative())
    }

    fn is_zero(&self) -> bool {
        self.correction.is_empty() && self.tail.is_empty()
    }

    fn sup_norm(&self) -> S {
        self.sup_from(1)
    }
}

impl<S: fmt::Display> fmt::Debug for TailElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `{correction: [n:v, …], tail: [c1, …]}`.
impl<S: fmt::Display> fmt::Display for TailElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let corr: Vec<String> = self.correction.iter().map(|(n, v)| format!("{n}:{v}")).collect();
        let tail: Vec<String> = self.tail.iter().map(|c| c.to_string()).collect();
        write!(f, "{{correction: [{}], tail: [{}]}}", corr.join(", "), tail.join(", "))
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::Rational;

    pub fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    pub fn g0() -> TailElement<Rational> {
        TailElement::g0()
    }

    pub fn tail(corr: &[(u64, (i64, i64))], coeffs: &[(i64, i64)]) -> TailElement<Rational> {
        TailElement::new(
            corr.iter().map(|&(n, (a, b))| (n, q(a, b))),
            coeffs.iter().map(|&(a, b)| q(a, b)).collect(),
        )
        .unwrap()
    }
}
