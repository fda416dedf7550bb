//! The trunc identities, stated once over [`TruncElement`] and run against
//! every model.
//!
//! Each check takes nonnegative operands and returns whether the identity
//! holds; errors only signal misuse (negative or mismatched operands).

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::ops::TruncElement;
use crate::scalar::Scalar;

/// The identities checked by [`check_all`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    /// `g ∧ h̄ ≤ ḡ ≤ g`.
    Bracket,
    /// `ḡ = 0 ⇒ g = 0`.
    Faithful,
    /// If `k·g` is fixed by truncation for all `k ≤ N` and `g ≠ 0`, then
    /// `max g ≤ 1/N`.
    BoundedArchimedean,
    /// `g ∧ n + g ⊖ n = g`.
    SplitAtN,
    /// `g ∧ n + (g ⊖ n)‾ = g ∧ (n+1)`.
    StepUp,
    /// `g ∧ m = Σ_{1≤k≤m} (g ⊖ (k−1))‾`.
    GoodSum,
    /// The truncation sequence increases to `g`.
    SequenceSup,
    /// `g ∧ n = n·(g/n)‾` and `g ⊖ r = g − r·(g/r)‾`.
    Definitions,
}

impl Law {
    pub const ALL: [Law; 8] = [
        Law::Bracket,
        Law::Faithful,
        Law::BoundedArchimedean,
        Law::SplitAtN,
        Law::StepUp,
        Law::GoodSum,
        Law::SequenceSup,
        Law::Definitions,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Law::Bracket => "bracket",
            Law::Faithful => "faithful",
            Law::BoundedArchimedean => "bounded-archimedean",
            Law::SplitAtN => "split-at-n",
            Law::StepUp => "step-up",
            Law::GoodSum => "good-sum",
            Law::SequenceSup => "sequence-sup",
            Law::Definitions => "definitions",
        }
    }
}

fn require_nonnegative<T: TruncElement>(g: &T) -> Result<()> {
    if g.is_nonnegative() {
        Ok(())
    } else {
        Err(Error::Negative)
    }
}

pub fn bracket<T: TruncElement>(g: &T, h: &T) -> Result<bool> {
    let gbar = g.truncate()?;
    let lower = g.meet(&h.truncate()?)?;
    Ok(lower.leq(&gbar)? && gbar.leq(g)?)
}

pub fn faithful<T: TruncElement>(g: &T) -> Result<bool> {
    Ok(!g.truncate()?.is_zero() || g.is_zero())
}

pub fn bounded_archimedean<T: TruncElement>(g: &T, n_max: u64) -> Result<bool> {
    require_nonnegative(g)?;
    if g.is_zero() {
        return Ok(true);
    }
    for k in 1..=n_max {
        let kg = g.scale(&T::Scalar::from_uint(k));
        if kg.truncate()? != kg {
            return Ok(true);
        }
    }
    Ok(g.sup_norm() <= T::Scalar::from_frac(1, n_max as i64))
}

pub fn split_at_n<T: TruncElement>(g: &T, n: u64) -> Result<bool> {
    let sum = g.trunc_n(n)?.add(&g.tminus(&T::Scalar::from_uint(n))?)?;
    Ok(sum == *g)
}

pub fn step_up<T: TruncElement>(g: &T, n: u64) -> Result<bool> {
    let lhs = g.trunc_n(n)?.add(&g.tminus(&T::Scalar::from_uint(n))?.truncate()?)?;
    Ok(lhs == g.trunc_n(n + 1)?)
}

pub fn good_sum<T: TruncElement>(g: &T, m: u64) -> Result<bool> {
    let mut sum = g.zero_like();
    for k in 0..m {
        sum = sum.add(&g.tminus(&T::Scalar::from_uint(k))?.truncate()?)?;
    }
    Ok(sum == g.trunc_n(m)?)
}

/// The truncation sequence is nondecreasing, is constant from
/// `⌈max g⌉` on, and its supremum is `g`.
pub fn sequence_sup<T: TruncElement>(g: &T) -> Result<bool> {
    require_nonnegative(g)?;
    let last = g.sup_norm().ceil_u64().max(1);
    let mut sup = g.zero_like();
    let mut prev = g.zero_like();
    for n in 1..=last + 1 {
        let term = g.trunc_n(n)?;
        if !prev.leq(&term)? {
            return Ok(false);
        }
        sup = sup.join(&term)?;
        prev = term;
    }
    Ok(sup == *g && prev == *g)
}

pub fn definitions<T: TruncElement>(g: &T, n: u64, r: &T::Scalar) -> Result<bool> {
    require_nonnegative(g)?;
    if n > 0 {
        let q = T::Scalar::from_uint(n);
        let scaled = g.scale(&(T::Scalar::one() / q.clone())).truncate()?.scale(&q);
        if scaled != g.trunc_n(n)? {
            return Ok(false);
        }
    }
    if r.is_positive() {
        let part = g.scale(&(T::Scalar::one() / r.clone())).truncate()?.scale(r);
        if g.sub(&part)? != g.tminus(r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Run every law on `(g, h)` with index `n` and shift `r`; returns the laws
/// that fail.
pub fn check_all<T: TruncElement>(g: &T, h: &T, n: u64, r: &T::Scalar) -> Result<Vec<Law>> {
    require_nonnegative(g)?;
    require_nonnegative(h)?;
    let mut failed = Vec::new();
    for law in Law::ALL {
        let ok = match law {
            Law::Bracket => bracket(g, h)?,
            Law::Faithful => faithful(g)?,
            Law::BoundedArchimedean => bounded_archimedean(g, n.max(1))?,
            Law::SplitAtN => split_at_n(g, n)?,
            Law::StepUp => step_up(g, n)?,
            Law::GoodSum => good_sum(g, n)?,
            Law::SequenceSup => sequence_sup(g)?,
            Law::Definitions => definitions(g, n, r)?,
        };
        if !ok {
            failed.push(law);
        }
    }
    Ok(failed)
}
