//! Truncation kernels.
//!
//! A convex subtrunc `K ⊆ G` is an archimedean truncation kernel iff
//!
//! 1. `(ng − h)⁺ ∈ K` for all `n`, for some `h ∈ G⁺`, implies `g ∈ K`;
//! 2. `ḡ ∈ K` implies `g ∈ K`;
//! 3. `g ⊖ 1/n ∈ K` for all `n` implies `g ∈ K`,
//!
//! and equivalently iff `K` is pointwise closed. Subtruncs are described
//! structurally so that membership, and the quantifiers over `n` above, are
//! decided exactly.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ops::TruncElement;
use crate::sample::{self, SampleRng};
use crate::scalar::Scalar;
use crate::seqspace::{SeqTrunc, TailElement};
use crate::space::SiteSet;
use crate::trunc::{member, SimpleElement, SimpleTrunc};
use crate::Rational;

/// Closure rounds are capped here; the supported descriptions stabilize in
/// at most three.
pub const MAX_CLOSURE_ROUNDS: usize = 64;

/// A convex subtrunc with exactly decidable kernel conditions.
pub trait KernelModel {
    type Element: TruncElement<Scalar = Rational> + fmt::Display;

    /// Membership in the ambient trunc `G`.
    fn in_trunc(&self, g: &Self::Element) -> bool;

    /// Membership in `K`.
    fn contains(&self, g: &Self::Element) -> bool;

    fn sample_positive(&self, rng: &mut SampleRng) -> Self::Element;

    /// Positive elements tried before any sample.
    fn structured_positive(&self) -> Vec<Self::Element>;

    /// `∀n: (ng − h)⁺ ∈ K`, for `g, h ≥ 0`.
    fn premise_archimedean(&self, g: &Self::Element, h: &Self::Element) -> Result<bool>;

    /// `∀n: g ⊖ 1/n ∈ K`, for `g ≥ 0`.
    fn premise_tminus(&self, g: &Self::Element) -> Result<bool>;
}

/// Verdict on one kernel condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionVerdict<E> {
    Pass {
        checked: usize,
    },
    /// The premise holds for the witness elements but `g ∉ K`. For condition
    /// (1) the witness is `[g, h]`, otherwise `[g]`.
    Fail {
        witness: Vec<E>,
    },
}

impl<E> ConditionVerdict<E> {
    pub fn passed(&self) -> bool {
        matches!(self, ConditionVerdict::Pass { .. })
    }
}

/// Verdicts on conditions (1), (2), (3) in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelReport<E> {
    pub conditions: [ConditionVerdict<E>; 3],
}

impl<E> KernelReport<E> {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(ConditionVerdict::passed)
    }
}

fn candidates<M: KernelModel>(k: &M, budget: usize, rng: &mut SampleRng) -> Vec<M::Element> {
    let mut out = k.structured_positive();
    out.extend((0..budget).map(|_| k.sample_positive(rng)));
    out
}

/// Decide the three conditions on the structured elements and `budget`
/// samples. Each per-sample decision is exact; only the choice of samples is
/// random.
pub fn kernel_conditions<M: KernelModel>(k: &M, budget: usize, seed: u64) -> Result<KernelReport<M::Element>> {
    let mut rng = sample::rng(seed);
    let gs = candidates(k, budget, &mut rng);
    let structured_h = k.structured_positive();

    let first = 'first: {
        let mut checked = 0;
        let mut pairs: Vec<(M::Element, M::Element)> = Vec::new();
        for g in &gs[..gs.len().min(structured_h.len())] {
            pairs.extend(structured_h.iter().map(|h| (g.clone(), h.clone())));
        }
        pairs.extend(gs.iter().map(|g| (g.clone(), k.sample_positive(&mut rng))));
        for (g, h) in pairs {
            checked += 1;
            if k.premise_archimedean(&g, &h)? && !k.contains(&g) {
                break 'first ConditionVerdict::Fail { witness: vec![g, h] };
            }
        }
        ConditionVerdict::Pass { checked }
    };

    let second = 'second: {
        for g in &gs {
            if k.contains(&g.truncate()?) && !k.contains(g) {
                break 'second ConditionVerdict::Fail {
                    witness: vec![g.clone()],
                };
            }
        }
        ConditionVerdict::Pass { checked: gs.len() }
    };

    let third = 'third: {
        for g in &gs {
            if k.premise_tminus(g)? && !k.contains(g) {
                break 'third ConditionVerdict::Fail {
                    witness: vec![g.clone()],
                };
            }
        }
        ConditionVerdict::Pass { checked: gs.len() }
    };

    Ok(KernelReport {
        conditions: [first, second, third],
    })
}

/// Sampled check that `K` is a convex subtrunc: the trunc operations keep
/// members of `K` in `K`, and `|f| ≤ g ∈ K` gives `f ∈ K`. Returns the first
/// violation found.
pub fn convexity_check<M: KernelModel>(k: &M, budget: usize, seed: u64) -> Result<Option<Vec<M::Element>>> {
    let mut rng = sample::rng(seed);
    let gs = candidates(k, budget, &mut rng);
    let inside: Vec<_> = gs.iter().filter(|g| k.contains(g)).cloned().collect();
    for g in &gs {
        // 0 ≤ g ∧ h ≤ g for every h ≥ 0 in G
        let h = k.sample_positive(&mut rng);
        for f in [g.meet(&h)?, g.meet(&h)?.negate()] {
            if k.contains(g) && !k.contains(&f) {
                return Ok(Some(vec![g.clone(), f]));
            }
        }
    }
    for pair in inside.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let results = [
            a.add(b)?,
            a.sub(b)?,
            a.meet(b)?,
            a.join(b)?,
            a.truncate()?,
            a.scale(&Rational::from_frac(-3, 2)),
            a.tminus(&Rational::from_frac(1, 2))?,
            a.trunc_n(2)?,
        ];
        if let Some(bad) = results.into_iter().find(|r| !k.contains(r)) {
            return Ok(Some(vec![a.clone(), b.clone(), bad]));
        }
    }
    Ok(None)
}

/// Which structured family exhibits a failure of pointwise closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `g ∧ n`.
    Truncation,
    /// `g ⊖ 1/n`.
    TMinus,
    /// `g` restricted to the first `n` points.
    Filtration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointwiseVerdict<E> {
    Closed {
        checked: usize,
    },
    /// Every member of `family` built from `sup` lies in `K`, the family
    /// increases pointwise to `sup`, and `sup ∉ K`. `prefix` lists the first
    /// members.
    NotClosed {
        family: Family,
        sup: E,
        prefix: Vec<E>,
    },
}

impl<E> PointwiseVerdict<E> {
    pub fn is_closed(&self) -> bool {
        matches!(self, PointwiseVerdict::Closed { .. })
    }
}

/// Models with a filtration by "first `n` points".
pub trait Filtered: KernelModel {
    /// `g · χ(first n points)`.
    fn first_points(&self, g: &Self::Element, n: u64) -> Self::Element;

    /// Every `g · χ(first n points)` lies in `K`.
    fn filtration_inside(&self, g: &Self::Element) -> Result<bool>;

    /// `n` from which `g · χ(first n points)` no longer changes, if any.
    fn filtration_length(&self, g: &Self::Element) -> Option<u64>;
}

/// Search the structured families over `g₀`-type and sampled `g ≥ 0` for an
/// increasing family in `K` whose pointwise supremum leaves `K`.
pub fn pointwise_closed<M: Filtered>(k: &M, budget: usize, seed: u64) -> Result<PointwiseVerdict<M::Element>> {
    let mut rng = sample::rng(seed);
    let gs = candidates(k, budget, &mut rng);
    const PREFIX: u64 = 4;
    for g in &gs {
        if k.contains(g) {
            continue;
        }
        // g ∧ n has the zero set and tail of g, so it is never a witness
        let truncations_inside = {
            let top = g.sup_norm().ceil_u64().max(1);
            (1..=top).all(|n| g.trunc_n(n).is_ok_and(|t| k.contains(&t)))
        };
        if truncations_inside {
            let prefix = (1..=PREFIX).map(|n| g.trunc_n(n)).collect::<Result<Vec<_>>>()?;
            return Ok(PointwiseVerdict::NotClosed {
                family: Family::Truncation,
                sup: g.clone(),
                prefix,
            });
        }
        if k.filtration_inside(g)? {
            let prefix = (1..=PREFIX).map(|n| k.first_points(g, n)).collect();
            return Ok(PointwiseVerdict::NotClosed {
                family: Family::Filtration,
                sup: g.clone(),
                prefix,
            });
        }
        if k.premise_tminus(g)? {
            let prefix = (1..=PREFIX)
                .map(|n| g.tminus(&Rational::new(1.into(), n.into())))
                .collect::<Result<Vec<_>>>()?;
            return Ok(PointwiseVerdict::NotClosed {
                family: Family::TMinus,
                sup: g.clone(),
                prefix,
            });
        }
    }
    Ok(PointwiseVerdict::Closed { checked: gs.len() })
}

// ---------------------------------------------------------------------------
// Finite spaces

/// `{g ∈ G : supp g ⊆ S}` for a simple trunc `G`. `S` is stored as the union
/// of the atoms of `G` it contains, which describes the same subtrunc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteKernel {
    trunc: SimpleTrunc,
    support: SiteSet,
}

impl FiniteKernel {
    pub fn new(trunc: SimpleTrunc, support: SiteSet) -> Self {
        let support = trunc
            .atoms()
            .iter()
            .filter(|a| a.is_subset(support))
            .fold(SiteSet::EMPTY, |acc, &a| acc.union(a));
        FiniteKernel { trunc, support }
    }

    pub fn trunc(&self) -> &SimpleTrunc {
        &self.trunc
    }

    pub fn support(&self) -> SiteSet {
        self.support
    }

    /// Every support-described subtrunc of a finite trunc is already a
    /// kernel; the closure is the identity, verified against the conditions.
    pub fn closure(&self, budget: usize, seed: u64) -> Result<(FiniteKernel, KernelReport<SimpleElement<Rational>>)> {
        let report = kernel_conditions(self, budget, seed)?;
        if !report.all_pass() {
            return Err(Error::Invariant(
                "support kernel on a finite space fails a kernel condition".into(),
            ));
        }
        Ok((self.clone(), report))
    }
}

impl KernelModel for FiniteKernel {
    type Element = SimpleElement<Rational>;

    fn in_trunc(&self, g: &Self::Element) -> bool {
        member(&self.trunc, g).is_ok_and(|m| m.is_member())
    }

    fn contains(&self, g: &Self::Element) -> bool {
        self.in_trunc(g) && g.cozero().is_subset(self.support)
    }

    fn sample_positive(&self, rng: &mut SampleRng) -> Self::Element {
        sample::trunc_element(rng, &self.trunc, true)
    }

    fn structured_positive(&self) -> Vec<Self::Element> {
        let space = self.trunc.space().clone();
        let mut out = vec![SimpleElement::characteristic(space.clone(), self.trunc.carrier_sites())];
        out.extend(
            self.trunc
                .atoms()
                .iter()
                .map(|&a| SimpleElement::characteristic(space.clone(), a)),
        );
        out
    }

    /// `(ng − h)⁺` increases with `n`; once `n > h/g` on `coz g` its support
    /// is `coz g`, and by convexity the smaller terms follow.
    fn premise_archimedean(&self, g: &Self::Element, h: &Self::Element) -> Result<bool> {
        let mut n = 1u64;
        for (a, b) in g.values().iter().zip(h.values()) {
            if a.is_positive() {
                n = n.max((b / a).floor_u64() + 1);
            }
        }
        let e = g.scale(&Rational::from_uint(n)).sub(h)?.positive_part();
        Ok(self.contains(&e))
    }

    /// `g ⊖ 1/n` increases with `n` and has support `coz g` once
    /// `1/n < clr g`.
    fn premise_tminus(&self, g: &Self::Element) -> Result<bool> {
        let clr = crate::trunc::clearance(g)?;
        if clr.is_zero() {
            return Ok(true);
        }
        let n = (Rational::one() / clr).floor_u64() + 1;
        Ok(self.contains(&g.tminus(&Rational::new(1.into(), n.into()))?))
    }
}

impl Filtered for FiniteKernel {
    fn first_points(&self, g: &Self::Element, n: u64) -> Self::Element {
        let n = (n as usize).min(g.values().len());
        g.restrict_support(SiteSet::full(n))
    }

    fn filtration_inside(&self, g: &Self::Element) -> Result<bool> {
        let len = g.values().len() as u64;
        Ok((1..=len).all(|n| self.contains(&self.first_points(g, n))))
    }

    fn filtration_length(&self, g: &Self::Element) -> Option<u64> {
        Some(g.values().len() as u64)
    }
}

// ---------------------------------------------------------------------------
// ω+1

/// The shape of a kernel in a [`SeqTrunc`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SeqShape {
    /// Finitely supported functions with support in the set.
    Within(BTreeSet<u64>),
    /// Functions whose tail coefficients `c₁ … c_{t−1}` vanish. `t = 1`
    /// allows every tail; `t` past the degree forces a zero tail.
    TailFrom(usize),
}

/// `{g ∈ G : g = 0 on zero_on, g has the given shape}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeqKernel {
    trunc: SeqTrunc,
    zero_on: BTreeSet<u64>,
    shape: SeqShape,
}

impl SeqKernel {
    pub fn new(trunc: SeqTrunc, zero_on: BTreeSet<u64>, shape: SeqShape) -> Result<Self> {
        if zero_on.contains(&0) {
            return Err(Error::Structure("sequence points are numbered from 1".into()));
        }
        let shape = match shape {
            SeqShape::Within(set) => {
                if set.contains(&0) {
                    return Err(Error::Structure("sequence points are numbered from 1".into()));
                }
                SeqShape::Within(set.difference(&zero_on).copied().collect())
            }
            SeqShape::TailFrom(0) => return Err(Error::Structure("tail index starts at 1".into())),
            SeqShape::TailFrom(t) => SeqShape::TailFrom(t.min(trunc.max_degree() + 1)),
        };
        // a support set already says where members vanish
        let zero_on = match shape {
            SeqShape::Within(_) => BTreeSet::new(),
            SeqShape::TailFrom(_) => zero_on,
        };
        Ok(SeqKernel { trunc, zero_on, shape })
    }

    /// The finitely supported subtrunc.
    pub fn finite_support(trunc: SeqTrunc) -> Self {
        Self::new(trunc, BTreeSet::new(), SeqShape::TailFrom(usize::MAX)).expect("well formed")
    }

    pub fn whole(trunc: SeqTrunc) -> Self {
        Self::new(trunc, BTreeSet::new(), SeqShape::TailFrom(1)).expect("well formed")
    }

    pub fn zero(trunc: SeqTrunc) -> Self {
        Self::new(trunc, BTreeSet::new(), SeqShape::Within(BTreeSet::new())).expect("well formed")
    }

    pub fn trunc(&self) -> SeqTrunc {
        self.trunc
    }

    pub fn zero_on(&self) -> &BTreeSet<u64> {
        &self.zero_on
    }

    pub fn shape(&self) -> &SeqShape {
        &self.shape
    }

    fn vanishes_on_zero_set(&self, g: &TailElement<Rational>) -> bool {
        self.zero_on.iter().all(|&n| g.value(n).is_zero())
    }

    fn tail_allowed(&self, g: &TailElement<Rational>) -> bool {
        match &self.shape {
            SeqShape::Within(_) => !g.has_tail(),
            SeqShape::TailFrom(t) => g.leading().is_none_or(|(i, _)| i >= *t),
        }
    }

    /// One stage of the closure iteration. Stage `α ≡ 0` adjoins the `g`
    /// with `g ⊖ 1/n ∈ K` for all `n`, `α ≡ 1` the `g` dominated
    /// archimedeanly, `α ≡ 2` the `g` with `ḡ ∈ K`; each followed by
    /// convex-subtrunc generation, which these shapes are closed under.
    fn stage(&self, alpha: usize) -> SeqKernel {
        let d = self.trunc.max_degree();
        let shape = match (&self.shape, alpha % 3) {
            // coz(g ⊖ 1/n) exhausts coz g, so only the zero set survives
            (SeqShape::TailFrom(_), 0) if d >= 1 => SeqShape::TailFrom(1),
            // h = 1/n dominates every tail starting at 1/n² or later
            (SeqShape::TailFrom(t), 1) if d >= 2 => SeqShape::TailFrom((*t).min(2)),
            (shape, _) => shape.clone(),
        };
        SeqKernel {
            trunc: self.trunc,
            zero_on: self.zero_on.clone(),
            shape,
        }
    }

    /// `K ⊆ other`.
    pub fn is_within(&self, other: &SeqKernel) -> bool {
        if self.trunc != other.trunc {
            return false;
        }
        match (&self.shape, &other.shape) {
            (SeqShape::Within(a), SeqShape::Within(b)) => a.is_subset(b),
            (SeqShape::Within(a), SeqShape::TailFrom(_)) => a.is_disjoint(&other.zero_on),
            (SeqShape::TailFrom(t), SeqShape::TailFrom(u)) => t >= u && other.zero_on.is_subset(&self.zero_on),
            // a tail shape contains χ{m} for every m outside a finite set
            (SeqShape::TailFrom(_), SeqShape::Within(_)) => false,
        }
    }
}

impl fmt::Display for SeqKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |s: &BTreeSet<u64>| s.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match &self.shape {
            SeqShape::Within(s) => write!(f, "support within {{{}}}", set(s)),
            SeqShape::TailFrom(t) if *t > self.trunc.max_degree() => {
                write!(f, "finite support, zero on {{{}}}", set(&self.zero_on))
            }
            SeqShape::TailFrom(t) => write!(f, "tail from 1/n^{t}, zero on {{{}}}", set(&self.zero_on)),
        }
    }
}

impl KernelModel for SeqKernel {
    type Element = TailElement<Rational>;

    fn in_trunc(&self, g: &Self::Element) -> bool {
        self.trunc.contains(g)
    }

    fn contains(&self, g: &Self::Element) -> bool {
        if !self.in_trunc(g) || !self.vanishes_on_zero_set(g) || !self.tail_allowed(g) {
            return false;
        }
        match &self.shape {
            SeqShape::Within(set) => g.correction().keys().all(|n| set.contains(n)),
            SeqShape::TailFrom(_) => true,
        }
    }

    fn sample_positive(&self, rng: &mut SampleRng) -> Self::Element {
        use rand::Rng;
        let g = self.trunc.random_element(rng).abs();
        if rng.random_bool(0.5) {
            g.vanish_on(self.zero_on.iter().copied())
        } else {
            g
        }
    }

    fn structured_positive(&self) -> Vec<Self::Element> {
        let d = self.trunc.max_degree();
        let zero_on = || self.zero_on.iter().copied();
        let mut out = Vec::new();
        for k in 1..=d.min(2) {
            let p = TailElement::inverse_power(k);
            out.push(p.vanish_on(zero_on()));
            out.push(p);
        }
        if let SeqShape::Within(set) = &self.shape {
            out.push(TailElement::characteristic(set.iter().copied()));
        }
        out.push(TailElement::characteristic([1, 2]));
        out.retain(|g| self.in_trunc(g));
        out
    }

    /// `(ng − h)⁺` increases with `n` and its supports exhaust `coz g`.
    /// Past `N = 1 + maxₖ |hₖ|/|gₖ|` the signs of `n·gₖ − hₖ` are fixed, so
    /// the tail shape of `(Ng − h)⁺` is that of every later term, and by
    /// convexity the earlier terms follow.
    fn premise_archimedean(&self, g: &Self::Element, h: &Self::Element) -> Result<bool> {
        if !g.is_nonnegative() || !h.is_nonnegative() {
            return Err(Error::Negative);
        }
        match &self.shape {
            SeqShape::Within(set) => Ok(g.finite_support().is_some_and(|s| s.iter().all(|n| set.contains(n)))),
            SeqShape::TailFrom(_) => {
                if !self.vanishes_on_zero_set(g) {
                    return Ok(false);
                }
                let zero = Rational::zero();
                let n = g
                    .tail()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| {
                        let hk = h.tail().get(k).unwrap_or(&zero);
                        (hk.abs() / c.abs()).floor_u64() + 1
                    })
                    .max()
                    .unwrap_or(1);
                let e = g.scale(&Rational::from_uint(n)).sub(h)?.positive_part();
                Ok(self.tail_allowed(&e))
            }
        }
    }

    /// `g ⊖ 1/n` has finite support increasing to `coz g`.
    fn premise_tminus(&self, g: &Self::Element) -> Result<bool> {
        if !g.is_nonnegative() {
            return Err(Error::Negative);
        }
        Ok(match &self.shape {
            SeqShape::Within(set) => g.finite_support().is_some_and(|s| s.iter().all(|n| set.contains(n))),
            SeqShape::TailFrom(_) => self.vanishes_on_zero_set(g),
        })
    }
}

impl Filtered for SeqKernel {
    fn first_points(&self, g: &Self::Element, n: u64) -> Self::Element {
        g.restrict_to_finite(1..=n)
    }

    fn filtration_inside(&self, g: &Self::Element) -> Result<bool> {
        // each piece is finitely supported; together they exhaust coz g
        self.premise_tminus(g)
    }

    fn filtration_length(&self, g: &Self::Element) -> Option<u64> {
        g.finite_support().map(|s| s.last().copied().unwrap_or(0))
    }
}

/// Outcome of the staged closure iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub kernel: SeqKernel,
    /// Every stage `K⁰, K¹, …` up to the first of three equal ones.
    pub stages: Vec<SeqKernel>,
}

/// Iterate the three closure rules until three consecutive stages agree,
/// then verify the result against the kernel conditions.
pub fn kernel_closure(k: &SeqKernel, budget: usize, seed: u64) -> Result<ClosureReport> {
    let mut stages = vec![k.clone()];
    for alpha in 0..MAX_CLOSURE_ROUNDS {
        let next = stages[alpha].stage(alpha);
        stages.push(next);
        let n = stages.len();
        if n >= 3 && stages[n - 1] == stages[n - 2] && stages[n - 2] == stages[n - 3] {
            // a full cycle of rules must also leave it fixed
            let fixed = &stages[n - 1];
            if (0..3).all(|a| fixed.stage(a) == *fixed) {
                let kernel = fixed.clone();
                stages.truncate(n - 2);
                let report = kernel_conditions(&kernel, budget, seed)?;
                if !report.all_pass() {
                    return Err(Error::Invariant(format!("closure {kernel} fails a kernel condition")));
                }
                return Ok(ClosureReport { kernel, stages });
            }
        }
    }
    Err(Error::Budget(format!(
        "closure did not stabilize in {MAX_CLOSURE_ROUNDS} rounds"
    )))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::space::PointedBooleanSpace;
    use crate::trunc::lc;

    fn x3_kernel(sites: &[usize]) -> FiniteKernel {
        let trunc = lc(&PointedBooleanSpace::standard(3), None).unwrap();
        FiniteKernel::new(trunc, SiteSet::from_sites(sites.iter().copied()))
    }

    #[test]
    fn finite_support_kernels_pass_everything() {
        for sites in [&[0usize, 1][..], &[], &[0, 1, 2]] {
            let k = x3_kernel(sites);
            let report = kernel_conditions(&k, 200, 3).unwrap();
            assert!(report.all_pass(), "{sites:?}: {report:?}");
            assert!(pointwise_closed(&k, 200, 3).unwrap().is_closed());
            assert_eq!(k.closure(50, 0).unwrap().0, k);
        }
    }

    #[test]
    fn described_kernels_are_convex_subtruncs() {
        assert_eq!(convexity_check(&x3_kernel(&[0, 1]), 200, 5).unwrap(), None);
        let seq = [
            SeqKernel::finite_support(SeqTrunc::degree(2)),
            SeqKernel::new(SeqTrunc::degree(2), BTreeSet::from([3]), SeqShape::TailFrom(2)).unwrap(),
            SeqKernel::new(
                SeqTrunc::degree(1),
                BTreeSet::new(),
                SeqShape::Within(BTreeSet::from([1, 4])),
            )
            .unwrap(),
        ];
        for k in &seq {
            assert_eq!(convexity_check(k, 200, 5).unwrap(), None, "{k}");
        }
    }

    #[test]
    fn support_is_canonicalized_to_atoms() {
        let space = Arc::new(PointedBooleanSpace::standard(3));
        let family = [
            SiteSet::EMPTY,
            SiteSet::from_sites([0, 1]),
            SiteSet::singleton(2),
            SiteSet::full(3),
        ];
        let trunc = SimpleTrunc::from_components(space, &family).unwrap();
        let k = FiniteKernel::new(trunc, SiteSet::from_sites([0, 2]));
        assert_eq!(k.support(), SiteSet::singleton(2));
    }

    #[test]
    fn finite_support_kernel_on_omega_plus_one() {
        let k = SeqKernel::finite_support(SeqTrunc::degree(1));
        let report = kernel_conditions(&k, 500, 0).unwrap();
        assert!(report.conditions[0].passed());
        assert!(report.conditions[1].passed());
        assert_eq!(
            report.conditions[2],
            ConditionVerdict::Fail {
                witness: vec![TailElement::g0()]
            }
        );
        let PointwiseVerdict::NotClosed { family, sup, .. } = pointwise_closed(&k, 100, 0).unwrap() else {
            panic!("expected a witness")
        };
        assert_eq!(family, Family::Filtration);
        assert_eq!(sup, TailElement::g0());
    }

    #[test]
    fn degree_two_finite_support_fails_the_archimedean_condition() {
        let k = SeqKernel::finite_support(SeqTrunc::degree(2));
        let report = kernel_conditions(&k, 50, 0).unwrap();
        let ConditionVerdict::Fail { witness } = &report.conditions[0] else {
            panic!("expected failure")
        };
        assert_eq!(witness[0], TailElement::inverse_power(2));
    }

    #[test]
    fn closure_of_finite_support_is_everything() {
        let k = SeqKernel::finite_support(SeqTrunc::degree(1));
        let closure = kernel_closure(&k, 100, 0).unwrap();
        assert_eq!(closure.kernel, SeqKernel::whole(SeqTrunc::degree(1)));
        assert_eq!(closure.stages[1], SeqKernel::whole(SeqTrunc::degree(1)));
        let again = kernel_closure(&closure.kernel, 100, 0).unwrap();
        assert_eq!(again.kernel, closure.kernel);
        assert!(k.is_within(&closure.kernel));

        let zero = SeqKernel::zero(SeqTrunc::degree(1));
        assert_eq!(kernel_closure(&zero, 100, 0).unwrap().kernel, zero);
    }

    #[test]
    fn zero_sets_survive_closure() {
        let k = SeqKernel::new(SeqTrunc::degree(2), BTreeSet::from([2, 5]), SeqShape::TailFrom(3)).unwrap();
        let closure = kernel_closure(&k, 100, 1).unwrap();
        assert_eq!(closure.kernel.shape(), &SeqShape::TailFrom(1));
        assert_eq!(closure.kernel.zero_on(), &BTreeSet::from([2, 5]));
        assert!(pointwise_closed(&closure.kernel, 100, 1).unwrap().is_closed());
    }

    #[test]
    fn premises_match_pointwise_enumeration() {
        let kernels = [
            SeqKernel::finite_support(SeqTrunc::degree(2)),
            SeqKernel::new(SeqTrunc::degree(2), BTreeSet::from([1]), SeqShape::TailFrom(2)).unwrap(),
            SeqKernel::new(
                SeqTrunc::degree(2),
                BTreeSet::new(),
                SeqShape::Within(BTreeSet::from([1, 2, 3])),
            )
            .unwrap(),
        ];
        let mut rng = sample::rng(11);
        for k in &kernels {
            for _ in 0..40 {
                let g = k.sample_positive(&mut rng);
                let h = k.sample_positive(&mut rng);
                // monotone in n, so a long prefix decides a `false` premise
                let enumerated = (1..=60u64).all(|n| {
                    let e = g.scale(&Rational::from_uint(n)).sub(&h).unwrap().positive_part();
                    k.contains(&e)
                });
                if !enumerated {
                    assert!(!k.premise_archimedean(&g, &h).unwrap(), "{k}: g = {g}, h = {h}");
                }
                let enumerated =
                    (1..=60u64).all(|n| k.contains(&g.tminus(&Rational::new(1.into(), n.into())).unwrap()));
                if !enumerated {
                    assert!(!k.premise_tminus(&g).unwrap(), "{k}: g = {g}");
                }
            }
        }
    }
}
