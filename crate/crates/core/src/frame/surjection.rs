use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::trunc::grid_cuts;

use super::real::{ExtValue, FrameReal, Interval};
use super::{FiniteFrame, PointedFiniteFrame};

/// Frames with more elements than this are refused by the exhaustive lift
/// search.
pub const E0Q_SEARCH_LIMIT: usize = 20;

/// A surjective pointed frame map, with its right adjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSurjection {
    source: Arc<PointedFiniteFrame>,
    target: Arc<PointedFiniteFrame>,
    map: Vec<usize>,
    adjoint: Vec<usize>,
    density_witness: Option<usize>,
}

impl FrameSurjection {
    pub fn new(source: Arc<PointedFiniteFrame>, target: Arc<PointedFiniteFrame>, map: Vec<usize>) -> Result<Self> {
        let (s, t) = (source.frame(), target.frame());
        let name = |f: &FiniteFrame, x: usize| f.label(x).to_string();
        if map.len() != s.len() || map.iter().any(|&y| y >= t.len()) {
            return Err(Error::Structure("surjection table does not match the frames".into()));
        }
        if map[s.bottom()] != t.bottom() || map[s.top()] != t.top() {
            return Err(Error::Structure("map must send ⊥ to ⊥ and ⊤ to ⊤".into()));
        }
        for x in s.elements() {
            for y in s.elements() {
                if map[s.join(x, y)] != t.join(map[x], map[y]) {
                    return Err(Error::Structure(format!(
                        "map does not preserve the join of {} and {}",
                        name(s, x),
                        name(s, y)
                    )));
                }
                if map[s.meet(x, y)] != t.meet(map[x], map[y]) {
                    return Err(Error::Structure(format!(
                        "map does not preserve the meet of {} and {}",
                        name(s, x),
                        name(s, y)
                    )));
                }
            }
        }
        if let Some(y) = t.elements().find(|y| !map.contains(y)) {
            return Err(Error::Structure(format!("map is not onto: {} is missed", name(t, y))));
        }
        if let Some(x) = s
            .elements()
            .find(|&x| target.contains_point(map[x]) != source.contains_point(x))
        {
            return Err(Error::Structure(format!("map is not pointed at {}", name(s, x))));
        }
        let adjoint = t
            .elements()
            .map(|y| s.join_all(s.elements().filter(|&x| t.leq(map[x], y))))
            .collect();
        let density_witness = s.elements().find(|&x| x != s.bottom() && map[x] == t.bottom());
        Ok(FrameSurjection {
            source,
            target,
            map,
            adjoint,
            density_witness,
        })
    }

    /// From `(source label, target label)` pairs covering the source.
    pub fn from_pairs(
        source: Arc<PointedFiniteFrame>,
        target: Arc<PointedFiniteFrame>,
        pairs: &[(String, String)],
    ) -> Result<Self> {
        let mut map = vec![None; source.frame().len()];
        for (a, b) in pairs {
            let x = source.frame().index_of(a)?;
            let y = target.frame().index_of(b)?;
            if map[x].is_some_and(|z| z != y) {
                return Err(Error::Structure(format!("{a} is mapped twice")));
            }
            map[x] = Some(y);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| Error::Structure(format!("{} is not mapped", source.frame().label(x)))))
            .collect::<Result<_>>()?;
        Self::new(source, target, map)
    }

    pub fn identity(frame: Arc<PointedFiniteFrame>) -> Self {
        let map = frame.frame().elements().collect();
        Self::new(frame.clone(), frame, map).expect("identity is a pointed surjection")
    }

    /// `x ↦ x**` onto the Boolean algebra of regular elements.
    pub fn booleanization(source: Arc<PointedFiniteFrame>) -> Result<Self> {
        let s = source.frame();
        let regular: Vec<usize> = s.elements().filter(|&x| s.is_regular(x)).collect();
        let labels = regular.iter().map(|&x| s.label(x).to_string()).collect();
        let leq = regular
            .iter()
            .map(|&x| regular.iter().map(|&y| s.leq(x, y)).collect())
            .collect();
        let target_frame = Arc::new(FiniteFrame::from_order(labels, leq)?);
        let position = |x: usize| regular.iter().position(|&r| r == x).expect("regular");
        let double = |x: usize| s.pseudocomplement(s.pseudocomplement(x));
        let point = position(double(source.point_element()));
        let target = Arc::new(PointedFiniteFrame::new(target_frame, point)?);
        let map = s.elements().map(|x| position(double(x))).collect();
        Self::new(source, target, map)
    }

    pub fn source(&self) -> &Arc<PointedFiniteFrame> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PointedFiniteFrame> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `q★(y) = ⋁{x : q(x) ≤ y}`.
    pub fn adjoint(&self, y: usize) -> usize {
        self.adjoint[y]
    }

    pub fn adjoint_table(&self) -> &[usize] {
        &self.adjoint
    }

    /// `q(x) = ⊥` only for `x = ⊥`.
    pub fn is_dense(&self) -> bool {
        self.density_witness.is_none()
    }

    /// A nonzero element sent to `⊥`.
    pub fn density_witness(&self) -> Option<usize> {
        self.density_witness
    }

    /// A pair violating `q(x) ≤ y ⟺ x ≤ q★(y)`, if any.
    pub fn galois_violation(&self) -> Option<(usize, usize)> {
        let (s, t) = (self.source.frame(), self.target.frame());
        s.elements()
            .flat_map(|x| t.elements().map(move |y| (x, y)))
            .find(|&(x, y)| t.leq(self.map[x], y) != s.leq(x, self.adjoint[y]))
    }

    /// `q ∘ h′(U) = h(p(U))` on the grid opens of the extended line.
    pub fn square_commutes<S: Scalar>(&self, lifted: &FrameReal<S>, h: &FrameReal<S>) -> (bool, usize) {
        let opens = extended_grid_opens(&grid_cuts(lifted.values().into_iter().chain(h.values())));
        let ok = opens
            .iter()
            .all(|u| self.map[lifted.eval(u)] == h.eval(&u.restrict_to_reals()));
        (ok, opens.len())
    }
}

/// Grid opens of the extended line: real grid opens, and the rays at each
/// cut with the infinite end included.
fn extended_grid_opens<S: Scalar>(cuts: &[S]) -> Vec<Interval<S>> {
    let mut out = super::oracle::grid_opens(cuts);
    let with = |lo_closed, hi_closed, lo: ExtValue<S>, hi: ExtValue<S>| Interval {
        lo,
        lo_closed,
        hi,
        hi_closed,
    };
    out.push(with(true, true, ExtValue::NegInf, ExtValue::PosInf));
    out.push(with(true, false, ExtValue::NegInf, ExtValue::PosInf));
    out.push(with(false, true, ExtValue::NegInf, ExtValue::PosInf));
    for c in cuts {
        out.push(with(true, false, ExtValue::NegInf, ExtValue::Finite(c.clone())));
        out.push(with(false, true, ExtValue::Finite(c.clone()), ExtValue::PosInf));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DropOutcome<S: Scalar> {
    /// `h` with `q ∘ h′ = h ∘ p`, verified on `opens_checked` grid opens.
    Dropped { h: FrameReal<S>, opens_checked: usize },
    /// `q(h′(−∞, ∞)) = image ≠ ⊤`.
    Refused { image: usize },
}

impl<S: Scalar> DropOutcome<S> {
    pub fn dropped(&self) -> Option<&FrameReal<S>> {
        match self {
            DropOutcome::Dropped { h, .. } => Some(h),
            DropOutcome::Refused { .. } => None,
        }
    }
}

/// Drop `h′` on the source along `q` when `q(h′(−∞, ∞)) = ⊤`.
pub fn drop_real<S: Scalar>(q: &FrameSurjection, lifted: &FrameReal<S>) -> Result<DropOutcome<S>> {
    if lifted.frame() != q.source() {
        return Err(Error::Mismatch(
            "frame real is not on the source of the surjection".into(),
        ));
    }
    let t = q.target().frame();
    let image = q.apply(lifted.eval(&Interval::real_line()));
    if image != t.top() {
        return Ok(DropOutcome::Refused { image });
    }
    let cells = lifted
        .cells()
        .iter()
        .filter(|(v, _)| v.is_finite())
        .map(|(v, c)| (v.clone(), q.apply(*c)))
        .collect();
    let h = FrameReal::new_unpointed(q.target().clone(), cells)?;
    let (ok, opens_checked) = q.square_commutes(lifted, &h);
    if !ok {
        return Err(Error::Invariant(format!(
            "dropped real {h} does not commute with {lifted}"
        )));
    }
    Ok(DropOutcome::Dropped { h, opens_checked })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftMethod {
    Adjoint,
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum E0q<S: Scalar> {
    /// `lift` on the source with `q ∘ lift = h ∘ p`.
    Member { lift: FrameReal<S>, method: LiftMethod },
    /// No partition of the source lifts the cells of `h`.
    NotMember { assignments_searched: usize },
}

impl<S: Scalar> E0q<S> {
    pub fn is_member(&self) -> bool {
        matches!(self, E0q::Member { .. })
    }
}

fn check_e0q_input<S: Scalar>(q: &FrameSurjection, h: &FrameReal<S>) -> Result<()> {
    if !q.is_dense() {
        return Err(Error::Precondition("E₀q needs a dense surjection".into()));
    }
    if h.frame() != q.target() {
        return Err(Error::Mismatch(
            "frame real is not on the target of the surjection".into(),
        ));
    }
    if !h.is_real() {
        return Err(Error::Precondition("E₀q membership is for real-valued h".into()));
    }
    Ok(())
}

/// The lift with cells `q★(y)`, when these partition the source.
pub fn e0q_adjoint_candidate<S: Scalar>(q: &FrameSurjection, h: &FrameReal<S>) -> Result<Option<FrameReal<S>>> {
    check_e0q_input(q, h)?;
    let cells = h.cells().iter().map(|(v, y)| (v.clone(), q.adjoint(*y))).collect();
    let Ok(lift) = FrameReal::new_unpointed(q.source().clone(), cells) else {
        return Ok(None);
    };
    if q.square_commutes(&lift, h).0 {
        Ok(Some(lift))
    } else {
        Ok(None)
    }
}

/// Search every assignment of complemented source elements `xᵥ` with
/// `q(xᵥ) = h`'s cell at `v` for a partition of `⊤`.
pub fn e0q_exhaustive<S: Scalar>(q: &FrameSurjection, h: &FrameReal<S>) -> Result<(Option<FrameReal<S>>, usize)> {
    check_e0q_input(q, h)?;
    let s = q.source().frame();
    if s.len() > E0Q_SEARCH_LIMIT {
        return Err(Error::Budget(format!(
            "exhaustive lift search is limited to {E0Q_SEARCH_LIMIT} elements"
        )));
    }
    let comp = s.complemented();
    let options: Vec<Vec<usize>> = h
        .cells()
        .iter()
        .map(|(_, y)| comp.iter().copied().filter(|&x| q.apply(x) == *y).collect())
        .collect();
    let mut chosen = Vec::with_capacity(options.len());
    let mut searched = 0;
    let found = search(s, &options, &mut chosen, &mut searched);
    let lift = match found {
        Some(cells) => {
            let cells = h.cells().iter().zip(cells).map(|((v, _), x)| (v.clone(), x)).collect();
            let lift = FrameReal::new_unpointed(q.source().clone(), cells)?;
            if !q.square_commutes(&lift, h).0 {
                return Err(Error::Invariant(format!("searched lift {lift} does not commute")));
            }
            Some(lift)
        }
        None => None,
    };
    Ok((lift, searched))
}

fn search(
    s: &FiniteFrame,
    options: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    searched: &mut usize,
) -> Option<Vec<usize>> {
    let k = chosen.len();
    if k == options.len() {
        *searched += 1;
        return (s.join_all(chosen.iter().copied()) == s.top()).then(|| chosen.clone());
    }
    for &x in &options[k] {
        if chosen.iter().all(|&c| s.meet(c, x) == s.bottom()) {
            chosen.push(x);
            if let Some(found) = search(s, options, chosen, searched) {
                return Some(found);
            }
            chosen.pop();
        }
    }
    None
}

/// Decide `h ∈ E₀q`: the adjoint candidate first, then the exhaustive
/// search.
pub fn e0q_member<S: Scalar>(q: &FrameSurjection, h: &FrameReal<S>) -> Result<E0q<S>> {
    if let Some(lift) = e0q_adjoint_candidate(q, h)? {
        return Ok(E0q::Member {
            lift,
            method: LiftMethod::Adjoint,
        });
    }
    match e0q_exhaustive(q, h)? {
        (Some(lift), _) => Ok(E0q::Member {
            lift,
            method: LiftMethod::Search,
        }),
        (None, assignments_searched) => Ok(E0q::NotMember { assignments_searched }),
    }
}

#[cfg(test)]
mod tests {
    use super::super::real::chi;
    use super::super::test_support::*;
    use super::*;
    use crate::ops::TruncElement;
    use crate::Rational;

    fn c3_to_two_collapsing_middle() -> FrameSurjection {
        let two = Arc::new(PointedFiniteFrame::by_label(FiniteFrame::chain(2), "top").unwrap());
        let c3 = Arc::new(PointedFiniteFrame::by_label(FiniteFrame::chain(3), "top").unwrap());
        FrameSurjection::new(c3, two, vec![0, 0, 1]).unwrap()
    }

    #[test]
    fn booleanization_of_the_chain() {
        let q = FrameSurjection::booleanization(c3()).unwrap();
        assert!(q.is_dense());
        assert_eq!(q.target().frame().len(), 2);
        let (s, t) = (q.source().frame(), q.target().frame());
        assert_eq!(q.adjoint(t.bottom()), s.bottom());
        assert_eq!(q.adjoint(t.top()), s.top());
        assert_eq!(q.galois_violation(), None);
    }

    #[test]
    fn identity_and_non_dense() {
        let q = FrameSurjection::identity(f4());
        assert!(q.is_dense());
        assert!(q.adjoint_table().iter().enumerate().all(|(x, &y)| x == y));
        let q2 = c3_to_two_collapsing_middle();
        assert!(!q2.is_dense());
        assert_eq!(q2.density_witness(), Some(1));
        assert_eq!(q2.galois_violation(), None);
    }

    #[test]
    fn drop_examples() {
        let f4 = f4();
        let b = f4.frame().index_of("b").unwrap();
        let chi_b: FrameReal<Rational> = chi(&f4, b).unwrap();
        let id = FrameSurjection::identity(f4.clone());
        assert_eq!(drop_real(&id, &chi_b).unwrap().dropped(), Some(&chi_b));

        let boole = FrameSurjection::booleanization(c3()).unwrap();
        let zero = FrameReal::<Rational>::zero(boole.source().clone());
        let dropped = drop_real(&boole, &zero).unwrap();
        assert!(dropped.dropped().unwrap().is_zero());

        let q2 = c3_to_two_collapsing_middle();
        let inf = FrameReal::<Rational>::new_unpointed(q2.source().clone(), vec![(ExtValue::PosInf, 2)]).unwrap();
        assert_eq!(drop_real(&q2, &inf).unwrap(), DropOutcome::Refused { image: 0 });
    }

    #[test]
    fn e0q_examples() {
        let f4 = f4();
        let b = f4.frame().index_of("b").unwrap();
        let chi_b: FrameReal<Rational> = chi(&f4, b).unwrap();
        let id = FrameSurjection::identity(f4.clone());
        let E0q::Member { lift, method } = e0q_member(&id, &chi_b).unwrap() else {
            panic!()
        };
        assert_eq!((lift, method), (chi_b, LiftMethod::Adjoint));

        let boole = FrameSurjection::booleanization(c3()).unwrap();
        let zero = FrameReal::<Rational>::zero(boole.target().clone());
        assert!(e0q_member(&boole, &zero).unwrap().is_member());

        let src = Arc::new(PointedFiniteFrame::product(&c3(), &FiniteFrame::chain(2)));
        let q = FrameSurjection::booleanization(src).unwrap();
        let t = q.target().frame();
        let atom = t.index_of("(bot,top)").unwrap();
        let h: FrameReal<Rational> = chi(q.target(), atom).unwrap();
        let E0q::Member { lift, .. } = e0q_member(&q, &h).unwrap() else {
            panic!()
        };
        assert_eq!(lift.to_string(), "[(1,(bot,top)),(0,(top,bot))]");
        let q2 = c3_to_two_collapsing_middle();
        let zero = FrameReal::<Rational>::zero(q2.target().clone());
        assert!(matches!(e0q_member(&q2, &zero), Err(Error::Precondition(_))));
    }
}
