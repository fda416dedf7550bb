use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ops::TruncElement;
use crate::scalar::Scalar;
use crate::trunc::{dini_check, grid_cuts, DiniReport};

use super::real::FrameReal;
use super::PointedFiniteFrame;

/// A pointwise supremum with the number of cuts at which it was verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSupReport<S: Scalar> {
    pub sup: FrameReal<S>,
    pub cuts_checked: usize,
}

/// The cell-wise maximum of a nonempty family, checked against
/// `⋁ a(r, ∞) = b(r, ∞)` at every grid cut.
pub fn frame_sup<S: Scalar>(fam: &[FrameReal<S>]) -> Result<FrameSupReport<S>> {
    let Some(first) = fam.first() else {
        return Err(Error::Precondition("pointwise supremum of an empty family".into()));
    };
    let mut sup = first.clone();
    for g in &fam[1..] {
        sup = sup.join(g)?;
    }
    let frame = first.frame().frame();
    let cuts = grid_cuts(fam.iter().flat_map(FrameReal::values));
    for r in &cuts {
        if frame.join_all(fam.iter().map(|a| a.upper(r))) != sup.upper(r) {
            return Err(Error::Invariant(format!("cut-wise supremum fails at r = {r}")));
        }
    }
    Ok(FrameSupReport {
        sup,
        cuts_checked: cuts.len(),
    })
}

/// Dini data for a nonincreasing sequence whose last term is its stable
/// tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameDini<S: Scalar> {
    pub report: DiniReport<S>,
    /// For each `ε` in the grid of values, the least `m` with
    /// `gₙ(−∞, ε) = ⊤` for all `n ≥ m`.
    pub index: Vec<(S, Option<usize>)>,
}

/// The least 1-based `m` with `gₙ(−∞, ε) = ⊤` for all `n ≥ m`.
fn cover_index<S: Scalar>(seq: &[FrameReal<S>], eps: &S) -> Option<usize> {
    let top = seq[0].frame().frame().top();
    let mut m = None;
    for (i, g) in seq.iter().enumerate().rev() {
        if g.lower(eps) != top {
            break;
        }
        m = Some(i + 1);
    }
    m
}

/// Validate the sequence, then compute the index function from the frame
/// condition and check it against the sup-norm index.
pub fn frame_dini<S: Scalar>(seq: &[FrameReal<S>]) -> Result<FrameDini<S>> {
    let report = dini_check(seq)?;
    let eps_grid: Vec<S> = grid_cuts(seq.iter().flat_map(FrameReal::values))
        .into_iter()
        .filter(|e| e.is_positive())
        .collect();
    let mut index = Vec::with_capacity(eps_grid.len());
    for eps in eps_grid {
        let m = cover_index(seq, &eps);
        if m != report.index(&eps) {
            return Err(Error::Invariant(format!("index functions disagree at ε = {eps}")));
        }
        if report.uniform() && m.is_none() {
            return Err(Error::Invariant(format!(
                "no index at ε = {eps} for a sequence decreasing to 0"
            )));
        }
        index.push((eps, m));
    }
    Ok(FrameDini { report, index })
}

/// The meet of `g(−∞, ∞)` over the family, which gives the intersection of
/// the open quotients `x ↦ x ∧ g(−∞, ∞)`; together with that quotient map.
pub fn quotient_meet<S: Scalar>(frame: &Arc<PointedFiniteFrame>, reals: &[FrameReal<S>]) -> (usize, Vec<usize>) {
    let f = frame.frame();
    let y = f.meet_all(reals.iter().map(|g| g.eval(&super::Interval::real_line())));
    (y, f.elements().map(|x| f.meet(x, y)).collect())
}

#[cfg(test)]
mod tests {
    use super::super::real::chi;
    use super::super::test_support::*;
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    #[test]
    fn sup_examples() {
        let f4 = f4();
        let b = f4.frame().index_of("b").unwrap();
        let chi_b: FrameReal<Rational> = chi(&f4, b).unwrap();
        let zero = FrameReal::zero(f4.clone());
        assert_eq!(frame_sup(&[chi_b.clone(), zero]).unwrap().sup, chi_b);
        assert_eq!(frame_sup(&[chi_b.clone(), chi_b.clone()]).unwrap().sup, chi_b);
    }

    #[test]
    fn dini_index_example() {
        let f4 = f4();
        let b = f4.frame().index_of("b").unwrap();
        let chi_b: FrameReal<Rational> = chi(&f4, b).unwrap();
        let mut seq: Vec<_> = (1..=4).map(|n| chi_b.scale(&q(1, n))).collect();
        seq.push(FrameReal::zero(f4.clone()));
        let d = frame_dini(&seq).unwrap();
        assert_eq!(d.report.index(&q(1, 3)), Some(4));
        assert_eq!(cover_index(&seq, &q(1, 3)), Some(4));
        assert!(d.report.uniform());
    }

    #[test]
    fn bounded_reals_give_identity_quotient() {
        let f4 = f4();
        let b = f4.frame().index_of("b").unwrap();
        let reals: Vec<FrameReal<Rational>> = vec![chi(&f4, b).unwrap(), FrameReal::zero(f4.clone())];
        let (y, map) = quotient_meet(&f4, &reals);
        assert_eq!(y, f4.frame().top());
        assert!(map.iter().enumerate().all(|(x, &m)| x == m));
    }
}
