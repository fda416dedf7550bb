//! Seeded random generators for the property suites.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;
use crate::space::{PointedBooleanSpace, SiteSet};
use crate::trunc::{SimpleElement, SimpleTrunc};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ max_num`, `1 ≤ q ≤ max_den`.
pub fn rational<S: Scalar>(rng: &mut SampleRng, max_num: i64, max_den: i64) -> S {
    S::from_frac(rng.random_range(-max_num..=max_num), rng.random_range(1..=max_den))
}

/// A nonnegative rational, zero with probability about one in four.
pub fn nonneg_rational<S: Scalar>(rng: &mut SampleRng, max_num: i64, max_den: i64) -> S {
    if rng.random_ratio(1, 4) {
        S::zero()
    } else {
        S::from_frac(rng.random_range(0..=max_num), rng.random_range(1..=max_den))
    }
}

pub fn simple_element<S: Scalar>(
    rng: &mut SampleRng,
    space: &Arc<PointedBooleanSpace>,
    nonneg: bool,
) -> SimpleElement<S> {
    let values = (0..space.n_sites())
        .map(|_| {
            if nonneg {
                nonneg_rational(rng, 12, 6)
            } else {
                rational(rng, 12, 6)
            }
        })
        .collect();
    SimpleElement::new(space.clone(), values).expect("sized to the space")
}

/// An element with values in `[0,1]`.
pub fn unit_element<S: Scalar>(rng: &mut SampleRng, space: &Arc<PointedBooleanSpace>) -> SimpleElement<S> {
    let values = (0..space.n_sites())
        .map(|_| {
            let d = rng.random_range(1..=6);
            S::from_frac(rng.random_range(0..=d), d)
        })
        .collect();
    SimpleElement::new(space.clone(), values).expect("sized to the space")
}

/// A random element of a simple trunc.
pub fn trunc_element<S: Scalar>(rng: &mut SampleRng, trunc: &SimpleTrunc, nonneg: bool) -> SimpleElement<S> {
    let coeffs: Vec<S> = (0..trunc.dimension())
        .map(|_| {
            if nonneg {
                nonneg_rational(rng, 12, 6)
            } else {
                rational(rng, 12, 6)
            }
        })
        .collect();
    trunc.combination(&coeffs)
}

/// `{*, 1..n}` with `n` drawn from `1..=max_sites`.
pub fn space(rng: &mut SampleRng, max_sites: usize) -> Arc<PointedBooleanSpace> {
    Arc::new(PointedBooleanSpace::standard(rng.random_range(1..=max_sites)))
}

/// A random partition of the sites of `space` into at most `max_blocks`
/// blocks, some sites possibly left out; the closed family it spans.
pub fn set_family(rng: &mut SampleRng, n_sites: usize, max_blocks: usize) -> Vec<SiteSet> {
    let blocks = rng.random_range(0..=max_blocks);
    let mut atoms = vec![SiteSet::EMPTY; blocks];
    if blocks > 0 {
        for s in 0..n_sites {
            // slot `blocks` means "left out"
            let slot = rng.random_range(0..=blocks);
            if slot < blocks {
                atoms[slot].insert(s);
            }
        }
    }
    atoms.retain(|a| !a.is_empty());
    (0..1u64 << atoms.len())
        .map(|mask| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(SiteSet::EMPTY, |acc, (_, &a)| acc.union(a))
        })
        .collect()
}
