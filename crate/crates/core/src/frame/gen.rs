//! Finite frames as downset lattices of finite posets, and random frame
//! reals. Every finite distributive lattice is the lattice of downsets of its
//! poset of join-irreducibles, so enumerating posets enumerates frames.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::sample::{self, SampleRng};
use crate::scalar::Scalar;

use super::real::{ExtValue, FrameReal};
use super::surjection::FrameSurjection;
use super::{FiniteFrame, PointedFiniteFrame};

/// A poset on `0..n`; `below[i]` is the bitmask of `{j : j ≤ i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    below: Vec<u64>,
}

impl Poset {
    pub fn antichain(n: usize) -> Self {
        Poset {
            below: (0..n).map(|i| 1 << i).collect(),
        }
    }

    pub fn chain(n: usize) -> Self {
        Poset {
            below: (0..n).map(|i| (1 << (i + 1)) - 1).collect(),
        }
    }

    /// From strict relations `(a, b)` meaning `a < b`, transitively closed.
    pub fn from_relations(n: usize, rel: &[(usize, usize)]) -> Self {
        assert!(n <= 16, "posets are limited to 16 points");
        let mut below: Vec<u64> = (0..n).map(|i| 1 << i).collect();
        for &(a, b) in rel {
            below[b] |= 1 << a;
        }
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut m = below[i];
                for j in 0..n {
                    if m >> j & 1 == 1 {
                        m |= below[j];
                    }
                }
                if m != below[i] {
                    below[i] = m;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Poset { below }
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[b] >> a & 1 == 1
    }

    pub fn is_downset(&self, mask: u64) -> bool {
        (0..self.len()).all(|i| mask >> i & 1 == 0 || self.below[i] & !mask == 0)
    }

    /// All downsets as bitmasks, in increasing numeric order.
    pub fn downsets(&self) -> Vec<u64> {
        (0..1u64 << self.len()).filter(|&m| self.is_downset(m)).collect()
    }

    pub fn minimal(&self) -> u64 {
        (0..self.len())
            .filter(|&i| self.below[i] == 1 << i)
            .fold(0, |m, i| m | 1 << i)
    }

    /// The subposet on `keep`, with the old index of each new point.
    pub fn induced(&self, keep: u64) -> (Poset, Vec<usize>) {
        let old: Vec<usize> = (0..self.len()).filter(|&i| keep >> i & 1 == 1).collect();
        let below = old
            .iter()
            .map(|&i| {
                old.iter()
                    .enumerate()
                    .filter(|&(_, &j)| self.leq(j, i))
                    .fold(0u64, |m, (k, _)| m | 1 << k)
            })
            .collect();
        (Poset { below }, old)
    }

    /// A random poset on `1..=max_points` points.
    pub fn random(rng: &mut SampleRng, max_points: usize) -> Self {
        let n = rng.random_range(1..=max_points);
        let rel: Vec<(usize, usize)> = (0..n)
            .flat_map(|b| (0..b).map(move |a| (a, b)))
            .filter(|_| rng.random_ratio(1, 3))
            .collect();
        Self::from_relations(n, &rel)
    }
}

/// The frame of downsets of a poset (the opens of its Alexandrov topology).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownsetFrame {
    pub poset: Poset,
    pub downsets: Vec<u64>,
    pub frame: Arc<FiniteFrame>,
}

impl DownsetFrame {
    pub fn new(poset: Poset) -> Self {
        let downsets = poset.downsets();
        let labels = downsets
            .iter()
            .map(|&m| {
                let items: Vec<String> = (0..poset.len())
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| i.to_string())
                    .collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        let leq = downsets
            .iter()
            .map(|&a| downsets.iter().map(|&b| a & !b == 0).collect())
            .collect();
        let frame = Arc::new(FiniteFrame::from_order(labels, leq).expect("downset lattices are frames"));
        DownsetFrame { poset, downsets, frame }
    }

    pub fn element(&self, mask: u64) -> usize {
        self.downsets.binary_search(&mask).expect("a downset")
    }

    /// Pointed at poset point `p`: `point(D) = ⊤` iff `p ∈ D`.
    pub fn pointed(&self, p: usize) -> Arc<PointedFiniteFrame> {
        let j = self.element(self.poset.below[p]);
        Arc::new(PointedFiniteFrame::new(self.frame.clone(), j).expect("principal downsets are join-prime"))
    }
}

/// Every naturally labelled poset whose downset lattice has between 2 and
/// `max_downsets` elements. Isomorphic posets may repeat.
pub fn posets_with_at_most(max_downsets: usize) -> Vec<Poset> {
    fn grow(p: &Poset, downsets: &[u64], max: usize, out: &mut Vec<Poset>) {
        let n = p.len();
        if n >= 16 {
            return;
        }
        for &d in downsets {
            let count = downsets.len() + downsets.iter().filter(|&&e| e & d == d).count();
            if count > max {
                continue;
            }
            let mut below = p.below.clone();
            below.push(d | 1 << n);
            let next = Poset { below };
            let next_downsets = next.downsets();
            debug_assert_eq!(next_downsets.len(), count);
            out.push(next.clone());
            grow(&next, &next_downsets, max, out);
        }
    }
    let mut out = Vec::new();
    grow(&Poset::antichain(0), &[0], max_downsets, &mut out);
    out
}

/// A random pointed downset frame with at most `max_size` elements.
pub fn random_frame(rng: &mut SampleRng, max_size: usize) -> (DownsetFrame, Arc<PointedFiniteFrame>) {
    loop {
        let poset = Poset::random(rng, 6);
        if poset.downsets().len() <= max_size {
            let p = rng.random_range(0..poset.len());
            let df = DownsetFrame::new(poset);
            let pointed = df.pointed(p);
            return (df, pointed);
        }
    }
}

fn partition<S: Scalar>(
    frame: &Arc<PointedFiniteFrame>,
    value: impl FnMut(usize) -> ExtValue<S>,
) -> Vec<(ExtValue<S>, usize)> {
    let f = frame.frame();
    let mut cells: BTreeMap<ExtValue<S>, usize> = BTreeMap::new();
    let mut value = value;
    for atom in f.complemented_atoms() {
        let v = value(atom);
        let e = cells.entry(v).or_insert(f.bottom());
        *e = f.join(*e, atom);
    }
    cells.into_iter().collect()
}

/// A random pointed real: each complemented atom gets a random value, the
/// one containing the point gets 0.
pub fn random_real<S: Scalar>(rng: &mut SampleRng, frame: &Arc<PointedFiniteFrame>, nonneg: bool) -> FrameReal<S> {
    let cells = partition(frame, |atom| {
        if frame.contains_point(atom) {
            ExtValue::Finite(S::zero())
        } else if nonneg {
            ExtValue::Finite(sample::nonneg_rational(rng, 8, 4))
        } else {
            ExtValue::Finite(sample::rational(rng, 8, 4))
        }
    });
    FrameReal::new(frame.clone(), cells).expect("atoms partition ⊤")
}

/// A random real on the underlying frame, possibly with infinite values and
/// possibly not pointed.
pub fn random_extended_real<S: Scalar>(rng: &mut SampleRng, frame: &Arc<PointedFiniteFrame>) -> FrameReal<S> {
    let pointed = rng.random_bool(0.5);
    let cells = partition(frame, |atom| {
        if pointed && frame.contains_point(atom) {
            return ExtValue::Finite(S::zero());
        }
        match rng.random_range(0..6) {
            0 => ExtValue::PosInf,
            1 => ExtValue::NegInf,
            _ => ExtValue::Finite(sample::rational(rng, 8, 4)),
        }
    });
    FrameReal::new_unpointed(frame.clone(), cells).expect("atoms partition ⊤")
}

/// The dense surjections `D ↦ D ∩ Q` for subposets `Q` containing every
/// minimal point and the point `p`.
pub fn dense_quotients(df: &DownsetFrame, p: usize) -> Vec<FrameSurjection> {
    let poset = &df.poset;
    let n = poset.len();
    let required = poset.minimal() | 1 << p;
    let source = df.pointed(p);
    (0..1u64 << n)
        .filter(|&keep| keep & required == required)
        .map(|keep| {
            let (sub, old) = poset.induced(keep);
            let target_df = DownsetFrame::new(sub);
            let new_p = old.iter().position(|&i| i == p).expect("p is kept");
            let target = target_df.pointed(new_p);
            let compress = |mask: u64| {
                old.iter()
                    .enumerate()
                    .filter(|&(_, &i)| mask >> i & 1 == 1)
                    .fold(0u64, |m, (k, _)| m | 1 << k)
            };
            let map = df.downsets.iter().map(|&d| target_df.element(compress(d))).collect();
            FrameSurjection::new(source.clone(), target, map)
                .expect("restriction to a subposet is a pointed surjection")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::TruncElement;
    use crate::Rational;

    #[test]
    fn downset_counts() {
        assert_eq!(Poset::chain(3).downsets().len(), 4);
        assert_eq!(Poset::antichain(3).downsets().len(), 8);
        let v = Poset::from_relations(3, &[(0, 2), (1, 2)]);
        assert_eq!(v.downsets().len(), 5);
        assert_eq!(v.minimal(), 0b011);
    }

    #[test]
    fn enumeration_covers_small_frames() {
        let posets = posets_with_at_most(5);
        let mut sizes: Vec<usize> = posets.iter().map(|p| p.downsets().len()).collect();
        sizes.sort();
        sizes.dedup();
        assert_eq!(sizes, vec![2, 3, 4, 5]);
        // the five-element frames: chain, V, Λ, and 2×2 with a top or bottom added
        assert!(posets.iter().any(|p| p.len() == 4 && p.downsets().len() == 5));
    }

    #[test]
    fn quotients_of_the_v_poset() {
        let df = DownsetFrame::new(Poset::from_relations(3, &[(0, 2), (1, 2)]));
        let qs = dense_quotients(&df, 0);
        assert_eq!(qs.len(), 2);
        assert!(qs.iter().all(|q| q.is_dense() && q.galois_violation().is_none()));
    }

    #[test]
    fn random_reals_are_valid() {
        let mut rng = sample::rng(4);
        for _ in 0..50 {
            let (_, frame) = random_frame(&mut rng, 20);
            assert!(frame.frame().len() <= 20);
            let g: FrameReal<Rational> = random_real(&mut rng, &frame, true);
            assert!(g.is_nonnegative() && g.is_pointed());
            let _: FrameReal<Rational> = random_extended_real(&mut rng, &frame);
        }
    }
}
