use rand::Rng;

use crate::error::{Error, Result};
use crate::ops::TruncElement;
use crate::sample::{self, SampleRng};
use crate::scalar::Scalar;
use crate::trunc::hyper::HyperModel;
use crate::Rational;

use super::{abs_sum, TailElement};

/// Which tail elements a [`SeqTrunc`] contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqCarrier {
    /// Only 0.
    Zero,
    /// All elements with at most this many tail coefficients. Degree 0 is
    /// the finitely supported (simple) part.
    Degree(usize),
}

/// A trunc of tail elements on ω+1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeqTrunc {
    pub carrier: SeqCarrier,
}

impl SeqTrunc {
    pub fn degree(d: usize) -> Self {
        SeqTrunc {
            carrier: SeqCarrier::Degree(d),
        }
    }

    pub fn zero() -> Self {
        SeqTrunc {
            carrier: SeqCarrier::Zero,
        }
    }

    /// The finitely supported functions.
    pub fn simple_part() -> Self {
        Self::degree(0)
    }

    pub fn max_degree(&self) -> usize {
        match self.carrier {
            SeqCarrier::Zero => 0,
            SeqCarrier::Degree(d) => d,
        }
    }

    pub fn contains<S: Scalar>(&self, g: &TailElement<S>) -> bool {
        match self.carrier {
            SeqCarrier::Zero => g.is_zero(),
            SeqCarrier::Degree(d) => g.degree() <= d,
        }
    }

    /// A random element: a tail of degree at most the bound plus corrections
    /// at up to three of the points `1..=6`.
    pub fn random_element(&self, rng: &mut SampleRng) -> TailElement<Rational> {
        if self.carrier == SeqCarrier::Zero {
            return TailElement::zero();
        }
        let d = rng.random_range(0..=self.max_degree());
        let tail = (0..d).map(|_| sample::rational(rng, 6, 4)).collect();
        let k = rng.random_range(0..=3);
        let mut points: Vec<u64> = (0..k).map(|_| rng.random_range(1..=6)).collect();
        points.sort_unstable();
        points.dedup();
        let correction = points.into_iter().map(|n| (n, sample::rational(rng, 6, 4)));
        TailElement::new(correction, tail).expect("distinct positive points")
    }
}

impl HyperModel for SeqTrunc {
    type Element = TailElement<Rational>;

    fn sample(&self, rng: &mut SampleRng) -> Self::Element {
        self.random_element(rng)
    }

    /// `(1/n, 1/n²)` leads when degree ≥ 2; it is the canonical refutation.
    fn structured_pairs(&self) -> Vec<(Self::Element, Self::Element)> {
        let d = self.max_degree();
        let mut pairs = Vec::new();
        if d >= 2 {
            pairs.push((TailElement::g0(), TailElement::inverse_power(2)));
        }
        if d >= 1 {
            let g0 = TailElement::g0();
            pairs.push((g0.clone(), g0.clone()));
            pairs.push((g0.clone(), TailElement::characteristic([1, 2])));
            pairs.push((TailElement::characteristic([1]), g0));
        }
        pairs
    }

    fn contains(&self, e: &Self::Element) -> bool {
        SeqTrunc::contains(self, e)
    }

    fn cozero_part(&self, f: &Self::Element, g: &Self::Element) -> Result<Self::Element> {
        Ok(match g.finite_support() {
            Some(support) => f.restrict_to_finite(support),
            None => f.vanish_on(g.zeros_below(g.crossover())),
        })
    }

    fn domination_bound(&self, f: &Self::Element, g: &Self::Element) -> Result<Option<Rational>> {
        domination_bound(f, g)
    }
}

/// Least-effort exact `k` with `|f| ≤ k|g|`, assuming `f` vanishes wherever
/// `g` does; `None` when `|f|/|g|` is unbounded or `f ≠ 0` at a zero of `g`.
pub(crate) fn domination_bound<S: Scalar>(f: &TailElement<S>, g: &TailElement<S>) -> Result<Option<S>> {
    let ratio_at = |n: u64| -> Option<S> {
        let (a, b) = (f.value(n), g.value(n));
        if a.is_zero() {
            Some(S::zero())
        } else if b.is_zero() {
            None
        } else {
            Some(a.abs() / b.abs())
        }
    };
    let max_ratio = |range: std::ops::Range<u64>| -> Option<S> {
        range
            .map(ratio_at)
            .try_fold(S::zero(), |acc, r| r.map(|r| S::max_of(&acc, &r)))
    };
    if let Some(support) = f.finite_support() {
        let mut k = S::zero();
        for n in support {
            match ratio_at(n) {
                Some(r) => k = S::max_of(&k, &r),
                None => return Ok(None),
            }
        }
        return Ok(Some(k));
    }
    let (Some((i, _)), Some((j, g_lead))) = (f.leading(), g.leading()) else {
        return Ok(None);
    };
    if i < j {
        return Ok(None);
    }
    // from `limit` on: |g(n)| ≥ |g_j|/2 · n⁻ʲ and |f(n)| ≤ Σ|f_k| · n⁻ʲ
    let two = S::from_int(2);
    let g_rest = abs_sum(&g.tail()[j..]);
    let limit = f.max_support().max(g.max_support()) + (two.clone() * g_rest / g_lead.abs()).ceil_u64() + 1;
    let far = two * abs_sum(f.tail()) / g_lead.abs();
    Ok(max_ratio(1..limit).map(|near| S::max_of(&near, &far)))
}

/// Witness that `g ≥ 0` vanishes on a neighbourhood of ω: `ḡ ≤ h ⊖ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BafWitness<S: Scalar> {
    pub h: TailElement<S>,
}

/// `Some(h)` with `h = 2·χ(supp g)` iff the tail of `g` is zero.
pub fn baf_infinity<S: Scalar>(g: &TailElement<S>) -> Result<Option<BafWitness<S>>> {
    if !g.is_nonnegative() {
        return Err(Error::Negative);
    }
    let Some(support) = g.finite_support() else {
        return Ok(None);
    };
    let h = TailElement::characteristic(support).scale(&S::from_int(2));
    if !g.truncate()?.leq(&h.tminus(&S::one())?)? {
        return Err(Error::Invariant(format!("ḡ ≰ h ⊖ 1 for h = {h}")));
    }
    Ok(Some(BafWitness { h }))
}

/// The clearance of `g ≥ 0` when it is positive; `None` when the nonzero
/// values of `g` accumulate at 0 or `g = 0`.
pub fn bounded_away_from_zero<S: Scalar>(g: &TailElement<S>) -> Result<Option<S>> {
    if !g.is_nonnegative() {
        return Err(Error::Negative);
    }
    if g.has_tail() {
        return Ok(None);
    }
    Ok(g.correction().values().min().cloned())
}

/// Finite range, equivalently a zero tail.
pub fn simple_part_member<S: Scalar>(g: &TailElement<S>) -> bool {
    !g.has_tail()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnoughUc {
    /// Every checked `g ≥ 0` has `ḡ ≤ χ(supp g)`.
    Enough { checked: usize },
    /// `ḡ` has infinite support while every unital component is finitely
    /// supported.
    Missing { witness: TailElement<Rational> },
}

impl EnoughUc {
    pub fn is_enough(&self) -> bool {
        matches!(self, EnoughUc::Enough { .. })
    }
}

/// Search `g₀` (when present) and `budget` sampled positive elements for a
/// `g` with no unital component above `ḡ`.
pub fn enough_uc_check(trunc: &SeqTrunc, budget: usize, seed: u64) -> Result<EnoughUc> {
    let mut rng = sample::rng(seed);
    let mut candidates = Vec::new();
    if trunc.max_degree() >= 1 {
        candidates.push(TailElement::g0());
    }
    for _ in 0..budget {
        candidates.push(trunc.random_element(&mut rng).abs());
    }
    for g in &candidates {
        match g.finite_support() {
            None => return Ok(EnoughUc::Missing { witness: g.clone() }),
            Some(support) => {
                let u = TailElement::characteristic(support);
                if !g.truncate()?.leq(&u)? {
                    return Err(Error::Invariant(format!("ḡ ≰ χ(supp g) for g = {g}")));
                }
            }
        }
    }
    Ok(EnoughUc::Enough {
        checked: candidates.len(),
    })
}

/// `sup (g · χ{n+1, n+2, …})`.
pub fn filtration_sup<S: Scalar>(g: &TailElement<S>, n: u64) -> S {
    g.drop_prefix(n).sup_norm()
}

/// Least `n ≥ 1` with `sup (g · χ{n+1, …}) < ε`, for `g ≥ 0`. The sequence
/// `g · χ{n+1, …}` decreases to 0 pointwise, so this is the Dini index.
pub fn dini_filtration_index<S: Scalar>(g: &TailElement<S>, epsilon: &S) -> Result<u64> {
    if !g.is_nonnegative() {
        return Err(Error::Negative);
    }
    if !epsilon.is_positive() {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let bound = g.below_from(epsilon);
    (1..=bound)
        .find(|&n| filtration_sup(g, n) < *epsilon)
        .ok_or_else(|| Error::Invariant("no Dini index below the certified bound".into()))
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::trunc::hyper::hyperarchimedean;
    use crate::trunc::HyperVerdict;

    #[test]
    fn degree_one_is_hyperarchimedean() {
        let verdict = hyperarchimedean(&SeqTrunc::degree(1), 300, 0).unwrap();
        assert!(verdict.is_accepted(), "{verdict:?}");
    }

    #[test]
    fn degree_two_refuted_by_inverse_powers() {
        let verdict = hyperarchimedean(&SeqTrunc::degree(2), 1, 0).unwrap();
        let HyperVerdict::Refuted { f, g, .. } = verdict else {
            panic!("expected refutation")
        };
        assert_eq!(f, g0());
        assert_eq!(g, TailElement::inverse_power(2));
    }

    #[test]
    fn domination_examples() {
        let two_g0 = g0().scale(&q(2, 1));
        let k = domination_bound(&two_g0, &g0()).unwrap().unwrap();
        assert!(two_g0.leq(&g0().scale(&k)).unwrap());
        assert_eq!(domination_bound(&g0(), &TailElement::inverse_power(2)).unwrap(), None);
        let f = TailElement::inverse_power(2);
        let k = domination_bound(&f, &g0()).unwrap().unwrap();
        assert!(f.leq(&g0().scale(&k)).unwrap());
    }

    #[test]
    fn baf_examples() {
        assert_eq!(baf_infinity(&g0()).unwrap(), None);
        let chi = TailElement::<Rational>::characteristic([1, 2]);
        assert_eq!(baf_infinity(&chi).unwrap().unwrap().h, chi.scale(&q(2, 1)));
        assert_eq!(
            baf_infinity(&TailElement::<Rational>::zero()).unwrap().unwrap().h,
            TailElement::zero()
        );
    }

    #[test]
    fn simple_part_examples() {
        assert!(!simple_part_member(&g0()));
        assert!(simple_part_member(&TailElement::<Rational>::characteristic([5])));
        assert!(simple_part_member(&g0().tminus(&q(1, 2)).unwrap()));
        assert_eq!(bounded_away_from_zero(&g0()).unwrap(), None);
        assert_eq!(
            bounded_away_from_zero(&tail(&[(1, (1, 2)), (4, (3, 1))], &[])).unwrap(),
            Some(q(1, 2))
        );
    }

    #[test]
    fn enough_unital_components() {
        assert_eq!(
            enough_uc_check(&SeqTrunc::degree(1), 50, 0).unwrap(),
            EnoughUc::Missing { witness: g0() }
        );
        assert!(enough_uc_check(&SeqTrunc::simple_part(), 50, 0).unwrap().is_enough());
        assert!(enough_uc_check(&SeqTrunc::zero(), 50, 0).unwrap().is_enough());
    }

    #[test]
    fn dini_on_filtration_of_g0() {
        for n in 1..10 {
            assert_eq!(filtration_sup(&g0(), n), q(1, n as i64 + 1));
        }
        assert_eq!(dini_filtration_index(&g0(), &q(1, 4)).unwrap(), 4);
        assert_eq!(dini_filtration_index(&g0(), &q(2, 7)).unwrap(), 3);
        assert_eq!(dini_filtration_index(&g0(), &q(2, 1)).unwrap(), 1);
    }
}
