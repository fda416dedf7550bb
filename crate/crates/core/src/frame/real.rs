use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ops::TruncElement;
use crate::scalar::Scalar;

use super::PointedFiniteFrame;

/// A point of the extended real line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtValue<S> {
    NegInf,
    Finite(S),
    PosInf,
}

impl<S: Scalar> ExtValue<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            ExtValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    fn negate(&self) -> Self {
        match self {
            ExtValue::NegInf => ExtValue::PosInf,
            ExtValue::PosInf => ExtValue::NegInf,
            ExtValue::Finite(v) => ExtValue::Finite(-v.clone()),
        }
    }
}

impl<S: fmt::Display> fmt::Display for ExtValue<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::NegInf => write!(f, "-inf"),
            ExtValue::PosInf => write!(f, "inf"),
            ExtValue::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl<S: Scalar> std::str::FromStr for ExtValue<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(ExtValue::PosInf),
            "-inf" => Ok(ExtValue::NegInf),
            t => t
                .parse()
                .map(ExtValue::Finite)
                .map_err(|_| Error::Structure(format!("bad value `{t}`"))),
        }
    }
}

/// An interval of the extended real line with open or closed ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval<S> {
    pub lo: ExtValue<S>,
    pub lo_closed: bool,
    pub hi: ExtValue<S>,
    pub hi_closed: bool,
}

impl<S: Scalar> Interval<S> {
    pub fn open(lo: ExtValue<S>, hi: ExtValue<S>) -> Self {
        Interval {
            lo,
            lo_closed: false,
            hi,
            hi_closed: false,
        }
    }

    /// `(−∞, r)`.
    pub fn below(r: S) -> Self {
        Self::open(ExtValue::NegInf, ExtValue::Finite(r))
    }

    /// `(r, ∞)`.
    pub fn above(r: S) -> Self {
        Self::open(ExtValue::Finite(r), ExtValue::PosInf)
    }

    /// `(r, s)`.
    pub fn between(r: S, s: S) -> Self {
        Self::open(ExtValue::Finite(r), ExtValue::Finite(s))
    }

    /// `(−∞, ∞)`, the real line inside the extended one.
    pub fn real_line() -> Self {
        Self::open(ExtValue::NegInf, ExtValue::PosInf)
    }

    /// `{v}`.
    pub fn point(v: S) -> Self {
        Interval {
            lo: ExtValue::Finite(v.clone()),
            lo_closed: true,
            hi: ExtValue::Finite(v),
            hi_closed: true,
        }
    }

    pub fn contains(&self, x: &ExtValue<S>) -> bool {
        let lo_ok = self.lo < *x || (self.lo_closed && self.lo == *x);
        let hi_ok = *x < self.hi || (self.hi_closed && self.hi == *x);
        lo_ok && hi_ok
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Interval<S>) -> bool {
        if self.is_empty() {
            return true;
        }
        let lo_ok = other.lo < self.lo || (other.lo == self.lo && (other.lo_closed || !self.lo_closed));
        let hi_ok = self.hi < other.hi || (other.hi == self.hi && (other.hi_closed || !self.hi_closed));
        lo_ok && hi_ok
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo || (self.hi == self.lo && !(self.lo_closed && self.hi_closed))
    }

    /// `U ∩ (−∞, ∞)`: the image of an open of the extended line in the real
    /// line.
    pub fn restrict_to_reals(&self) -> Self {
        let mut out = self.clone();
        if !self.lo.is_finite() {
            out.lo_closed = false;
        }
        if !self.hi.is_finite() {
            out.hi_closed = false;
        }
        out
    }
}

impl<S: fmt::Display> fmt::Display for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

/// A step-valued frame real: a partition of `⊤` into complemented cells, one
/// per value. Cells are stored by increasing value and are never `⊥`.
#[derive(Clone, PartialEq, Eq)]
pub struct FrameReal<S> {
    frame: Arc<PointedFiniteFrame>,
    cells: Vec<(ExtValue<S>, usize)>,
}

impl<S: Scalar> FrameReal<S> {
    /// A pointed frame real: the cell containing the point has value 0.
    pub fn new(frame: Arc<PointedFiniteFrame>, cells: Vec<(ExtValue<S>, usize)>) -> Result<Self> {
        let g = Self::new_unpointed(frame, cells)?;
        if !g.is_pointed() {
            return Err(Error::Structure(format!(
                "the cell containing the point has nonzero value in {g}"
            )));
        }
        Ok(g)
    }

    /// A frame real on the underlying frame, with no condition at the point.
    pub fn new_unpointed(frame: Arc<PointedFiniteFrame>, cells: Vec<(ExtValue<S>, usize)>) -> Result<Self> {
        let f = frame.frame();
        let mut cells: Vec<_> = cells.into_iter().filter(|(_, c)| *c != f.bottom()).collect();
        if cells.iter().any(|(_, c)| *c >= f.len()) {
            return Err(Error::Structure("cell out of range".into()));
        }
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in cells.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::Structure(format!("value {} labels two cells", pair[0].0)));
            }
        }
        for (i, (v, x)) in cells.iter().enumerate() {
            for (w, y) in &cells[i + 1..] {
                if f.meet(*x, *y) != f.bottom() {
                    return Err(Error::Structure(format!(
                        "cells {v}:{} and {w}:{} overlap",
                        f.label(*x),
                        f.label(*y)
                    )));
                }
            }
        }
        if f.join_all(cells.iter().map(|(_, c)| *c)) != f.top() {
            return Err(Error::Structure("cells do not cover ⊤".into()));
        }
        Ok(FrameReal { frame, cells })
    }

    /// From finite values.
    pub fn from_values(frame: Arc<PointedFiniteFrame>, cells: Vec<(S, usize)>) -> Result<Self> {
        Self::new(
            frame,
            cells.into_iter().map(|(v, c)| (ExtValue::Finite(v), c)).collect(),
        )
    }

    pub fn zero(frame: Arc<PointedFiniteFrame>) -> Self {
        let top = frame.frame().top();
        FrameReal {
            frame,
            cells: vec![(ExtValue::Finite(S::zero()), top)],
        }
    }

    /// Cells are already disjoint with join `⊤`; merge equal values.
    fn canonical(frame: Arc<PointedFiniteFrame>, mut cells: Vec<(ExtValue<S>, usize)>) -> Self {
        let f = frame.frame();
        cells.retain(|(_, c)| *c != f.bottom());
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(ExtValue<S>, usize)> = Vec::with_capacity(cells.len());
        for (v, c) in cells {
            match merged.last_mut() {
                Some((w, d)) if *w == v => *d = f.join(*d, c),
                _ => merged.push((v, c)),
            }
        }
        FrameReal { frame, cells: merged }
    }

    pub fn frame(&self) -> &Arc<PointedFiniteFrame> {
        &self.frame
    }

    /// `(value, cell)` by increasing value.
    pub fn cells(&self) -> &[(ExtValue<S>, usize)] {
        &self.cells
    }

    /// No infinite values.
    pub fn is_real(&self) -> bool {
        self.cells.iter().all(|(v, _)| v.is_finite())
    }

    pub fn is_pointed(&self) -> bool {
        self.cells
            .iter()
            .any(|(v, c)| self.frame.contains_point(*c) && *v == ExtValue::Finite(S::zero()))
    }

    /// `g(U) = ⋁{cell : value ∈ U}`.
    pub fn eval(&self, u: &Interval<S>) -> usize {
        let f = self.frame.frame();
        f.join_all(self.cells.iter().filter(|(v, _)| u.contains(v)).map(|(_, c)| *c))
    }

    /// `g(−∞, r)`.
    pub fn lower(&self, r: &S) -> usize {
        self.eval(&Interval::below(r.clone()))
    }

    /// `g(r, ∞)`.
    pub fn upper(&self, r: &S) -> usize {
        self.eval(&Interval::above(r.clone()))
    }

    /// `coz g = g(ℝ ∖ {0})`.
    pub fn cozero(&self) -> usize {
        let zero = ExtValue::Finite(S::zero());
        let f = self.frame.frame();
        f.join_all(self.cells.iter().filter(|(v, _)| *v != zero).map(|(_, c)| *c))
    }

    /// Finite values, increasing.
    pub fn values(&self) -> Vec<S> {
        self.cells.iter().filter_map(|(v, _)| v.finite().cloned()).collect()
    }

    fn same_frame(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.frame, &other.frame) || self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::Mismatch("frame reals on different frames".into()))
        }
    }

    fn require_real(&self) -> Result<()> {
        if self.is_real() {
            Ok(())
        } else {
            Err(Error::Unsupported(
                "trunc operations on a frame real with infinite values".into(),
            ))
        }
    }

    fn map_finite(&self, f: impl Fn(&S) -> S) -> Self {
        let cells = self
            .cells
            .iter()
            .map(|(v, c)| {
                let w = match v {
                    ExtValue::Finite(x) => ExtValue::Finite(f(x)),
                    other => other.clone(),
                };
                (w, *c)
            })
            .collect();
        Self::canonical(self.frame.clone(), cells)
    }

    /// Apply `w` cell-wise on the common refinement.
    pub fn combine(&self, other: &Self, w: impl Fn(&S, &S) -> S) -> Result<Self> {
        self.same_frame(other)?;
        self.require_real()?;
        other.require_real()?;
        let f = self.frame.frame();
        let mut cells = Vec::new();
        for (v, x) in &self.cells {
            for (u, y) in &other.cells {
                let c = f.meet(*x, *y);
                if c != f.bottom() {
                    let (v, u) = (v.finite().expect("real"), u.finite().expect("real"));
                    cells.push((ExtValue::Finite(w(v, u)), c));
                }
            }
        }
        Ok(Self::canonical(self.frame.clone(), cells))
    }

    fn require_nonnegative(&self) -> Result<()> {
        self.require_real()?;
        if self.is_nonnegative() {
            Ok(())
        } else {
            Err(Error::Negative)
        }
    }
}

/// `χₓ = [(1, x), (0, ¬x)]` for complemented `x` not containing the point.
pub fn chi<S: Scalar>(frame: &Arc<PointedFiniteFrame>, x: usize) -> Result<FrameReal<S>> {
    let f = frame.frame();
    let Some(rest) = f.complement(x) else {
        return Err(Error::Precondition(format!("{} is not complemented", f.label(x))));
    };
    if frame.contains_point(x) {
        return Err(Error::Precondition(format!("the point lies in {}", f.label(x))));
    }
    FrameReal::new(
        frame.clone(),
        vec![(ExtValue::Finite(S::one()), x), (ExtValue::Finite(S::zero()), rest)],
    )
}

/// `Some(coz u)` iff `u` is a unital component, i.e. `u = (2u)‾`.
pub fn uc_check<S: Scalar>(u: &FrameReal<S>) -> Option<usize> {
    if !u.is_real() || !u.is_nonnegative() {
        return None;
    }
    let doubled = u.scale(&S::from_int(2)).truncate().ok()?;
    (doubled == *u).then(|| u.upper(&S::zero()))
}

impl<S: Scalar> TruncElement for FrameReal<S> {
    type Scalar = S;

    fn zero_like(&self) -> Self {
        FrameReal::zero(self.frame.clone())
    }

    fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.clone() + b.clone())
    }

    fn negate(&self) -> Self {
        let cells = self.cells.iter().map(|(v, c)| (v.negate(), *c)).collect();
        Self::canonical(self.frame.clone(), cells)
    }

    /// Infinite values keep or flip their sign; `0 · ±∞ = 0`.
    fn scale(&self, q: &S) -> Self {
        let cells = self
            .cells
            .iter()
            .map(|(v, c)| {
                let w = match v {
                    ExtValue::Finite(x) => ExtValue::Finite(q.clone() * x.clone()),
                    _ if q.is_zero() => ExtValue::Finite(S::zero()),
                    _ if q.is_negative() => v.negate(),
                    _ => v.clone(),
                };
                (w, *c)
            })
            .collect();
        Self::canonical(self.frame.clone(), cells)
    }

    fn meet(&self, other: &Self) -> Result<Self> {
        self.combine(other, S::min_of)
    }

    fn join(&self, other: &Self) -> Result<Self> {
        self.combine(other, S::max_of)
    }

    fn truncate(&self) -> Result<Self> {
        self.require_nonnegative()?;
        Ok(self.map_finite(|v| S::min_of(v, &S::one())))
    }

    fn tminus(&self, r: &S) -> Result<Self> {
        self.require_nonnegative()?;
        if r.is_negative() {
            return Err(Error::Precondition(format!("tminus needs r >= 0, got {r}")));
        }
        Ok(self.map_finite(|v| S::max_of(&(v.clone() - r.clone()), &S::zero())))
    }

    fn trunc_n(&self, n: u64) -> Result<Self> {
        self.require_nonnegative()?;
        let cap = S::from_uint(n);
        Ok(self.map_finite(|v| S::min_of(v, &cap)))
    }

    fn is_nonnegative(&self) -> bool {
        self.cells.iter().all(|(v, _)| *v >= ExtValue::Finite(S::zero()))
    }

    fn is_zero(&self) -> bool {
        self.cells.iter().all(|(v, _)| *v == ExtValue::Finite(S::zero()))
    }

    /// The largest finite absolute value.
    fn sup_norm(&self) -> S {
        self.values().iter().fold(S::zero(), |m, v| S::max_of(&m, &v.abs()))
    }
}

impl<S: fmt::Display> fmt::Debug for FrameReal<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `[(value,cell), …]` by decreasing value.
impl<S: fmt::Display> fmt::Display for FrameReal<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let frame = self.frame.frame();
        let items: Vec<String> = self
            .cells
            .iter()
            .rev()
            .map(|(v, c)| format!("({v},{})", frame.label(*c)))
            .collect();
        write!(f, "[{}]", items.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    #[test]
    fn chi_and_eval() {
        let f4 = f4();
        let (a, b) = (f4.frame().index_of("a").unwrap(), f4.frame().index_of("b").unwrap());
        let chi_b: FrameReal<Rational> = chi(&f4, b).unwrap();
        assert_eq!(chi_b.to_string(), "[(1,b),(0,a)]");
        assert_eq!(chi_b.lower(&q(1, 2)), a);
        assert_eq!(chi_b.upper(&q(-1, 3)), f4.frame().top());
        assert_eq!(uc_check(&chi_b), Some(b));
        assert!(chi::<Rational>(&f4, a).is_err());
        assert_eq!(uc_check(&chi_b.scale(&q(2, 1))), None);
    }

    #[test]
    fn zero_rays() {
        let f4 = f4();
        let z = FrameReal::<Rational>::zero(f4.clone());
        assert_eq!(z.lower(&q(1, 5)), f4.frame().top());
        assert_eq!(z.lower(&q(0, 1)), f4.frame().bottom());
        assert_eq!(z.lower(&q(-1, 5)), f4.frame().bottom());
    }

    #[test]
    fn cell_wise_examples() {
        let f4 = f4();
        let b = f4.frame().index_of("b").unwrap();
        let chi_b: FrameReal<Rational> = chi(&f4, b).unwrap();
        let two = chi_b.add(&chi_b).unwrap();
        assert_eq!(two.to_string(), "[(2,b),(0,a)]");
        assert_eq!(two, chi_b.scale(&q(2, 1)));
        assert_eq!(two.truncate().unwrap(), chi_b);
        assert!(two.sub(&two).unwrap().is_zero());
    }

    #[test]
    fn malformed_reals_are_rejected() {
        let f4 = f4();
        let fr = f4.frame();
        let (a, b) = (fr.index_of("a").unwrap(), fr.index_of("b").unwrap());
        let fin = |v: i64| ExtValue::Finite(q(v, 1));
        assert!(FrameReal::new(f4.clone(), vec![(fin(1), b)]).is_err());
        assert!(FrameReal::new(f4.clone(), vec![(fin(1), b), (fin(0), fr.top())]).is_err());
        assert!(FrameReal::new(f4.clone(), vec![(fin(1), a), (fin(0), b)]).is_err());
        assert!(FrameReal::new(f4.clone(), vec![(fin(1), a), (fin(1), b)]).is_err());
        assert!(FrameReal::new_unpointed(f4.clone(), vec![(fin(1), a), (fin(0), b)]).is_ok());
    }

    #[test]
    fn intervals() {
        let u = Interval::between(q(0, 1), q(1, 1));
        assert!(u.contains(&ExtValue::Finite(q(1, 2))));
        assert!(!u.contains(&ExtValue::Finite(q(1, 1))));
        assert!(Interval::point(q(1, 2)).is_subset(&u));
        assert!(!Interval::point(q(1, 1)).is_subset(&u));
        let closed = Interval {
            lo: ExtValue::NegInf,
            lo_closed: true,
            hi: ExtValue::Finite(q(0, 1)),
            hi_closed: false,
        };
        assert!(closed.contains(&ExtValue::NegInf));
        assert!(!closed.restrict_to_reals().contains(&ExtValue::NegInf));
    }
}
