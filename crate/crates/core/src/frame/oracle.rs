//! Brute-force evaluation of induced operations.
//!
//! The operation induced by `w : ℝⁿ → ℝ` is
//! `w(f⃗)(V) = ⋁ { ⋀ fᵢ(Uᵢ) : w(U⃗) ⊆ V }`. Here the join runs over boxes
//! of open intervals with endpoints on a grid around the operand values, and
//! `w(U⃗) ⊆ V` is decided from the exact image of the box, with open and
//! closed ends tracked. The grid half-width `δ` is small enough that a box of
//! radius `δ` around any value tuple maps into every grid open containing the
//! image of the tuple, so these boxes realize the join.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ops::{apply_op, TruncElement, TruncOp};
use crate::scalar::Scalar;
use crate::trunc::grid_cuts;

use super::real::{ExtValue, FrameReal, Interval};

fn ext_add<S: Scalar>(x: &ExtValue<S>, y: &ExtValue<S>) -> ExtValue<S> {
    match (x, y) {
        (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a.clone() + b.clone()),
        (ExtValue::NegInf, _) | (_, ExtValue::NegInf) => ExtValue::NegInf,
        _ => ExtValue::PosInf,
    }
}

fn ext_neg<S: Scalar>(x: &ExtValue<S>) -> ExtValue<S> {
    match x {
        ExtValue::NegInf => ExtValue::PosInf,
        ExtValue::PosInf => ExtValue::NegInf,
        ExtValue::Finite(a) => ExtValue::Finite(-a.clone()),
    }
}

/// `q · x` for `q > 0`.
fn ext_scale<S: Scalar>(q: &S, x: &ExtValue<S>) -> ExtValue<S> {
    match x {
        ExtValue::Finite(a) => ExtValue::Finite(q.clone() * a.clone()),
        other => other.clone(),
    }
}

fn open<S: Scalar>(lo: ExtValue<S>, hi: ExtValue<S>) -> Interval<S> {
    Interval::open(lo, hi)
}

/// `x ∧ c` on `(a, b)`.
fn cap_image<S: Scalar>(u: &Interval<S>, c: &S) -> Interval<S> {
    let c = ExtValue::Finite(c.clone());
    if u.lo >= c {
        return Interval::point(c.finite().expect("finite").clone());
    }
    if u.hi <= c {
        u.clone()
    } else {
        Interval {
            lo: u.lo.clone(),
            lo_closed: false,
            hi: c,
            hi_closed: true,
        }
    }
}

/// `(x − r)⁺` on `(a, b)`.
fn tminus_image<S: Scalar>(u: &Interval<S>, r: &S) -> Interval<S> {
    let rr = ExtValue::Finite(r.clone());
    let shift = |x: &ExtValue<S>| ext_add(x, &ExtValue::Finite(-r.clone()));
    if u.hi <= rr {
        Interval::point(S::zero())
    } else if u.lo < rr {
        Interval {
            lo: ExtValue::Finite(S::zero()),
            lo_closed: true,
            hi: shift(&u.hi),
            hi_closed: false,
        }
    } else {
        open(shift(&u.lo), shift(&u.hi))
    }
}

/// The exact image of a box of open intervals under the real function of
/// `op`.
pub fn image<S: Scalar>(op: &TruncOp<S>, boxes: &[Interval<S>]) -> Interval<S> {
    let u = &boxes[0];
    match op {
        TruncOp::Add => open(ext_add(&u.lo, &boxes[1].lo), ext_add(&u.hi, &boxes[1].hi)),
        TruncOp::Sub => open(
            ext_add(&u.lo, &ext_neg(&boxes[1].hi)),
            ext_add(&u.hi, &ext_neg(&boxes[1].lo)),
        ),
        TruncOp::Negate => open(ext_neg(&u.hi), ext_neg(&u.lo)),
        TruncOp::Scale(q) if q.is_zero() => Interval::point(S::zero()),
        TruncOp::Scale(q) if q.is_positive() => open(ext_scale(q, &u.lo), ext_scale(q, &u.hi)),
        TruncOp::Scale(q) => {
            let p = -q.clone();
            open(ext_neg(&ext_scale(&p, &u.hi)), ext_neg(&ext_scale(&p, &u.lo)))
        }
        TruncOp::Meet => open(
            u.lo.clone().min(boxes[1].lo.clone()),
            u.hi.clone().min(boxes[1].hi.clone()),
        ),
        TruncOp::Join => open(
            u.lo.clone().max(boxes[1].lo.clone()),
            u.hi.clone().max(boxes[1].hi.clone()),
        ),
        TruncOp::Truncate => cap_image(u, &S::one()),
        TruncOp::TMinus(r) => tminus_image(u, r),
        TruncOp::TruncN(n) => cap_image(u, &S::from_uint(*n)),
    }
}

fn lipschitz<S: Scalar>(op: &TruncOp<S>) -> S {
    match op {
        TruncOp::Add | TruncOp::Sub => S::from_int(2),
        TruncOp::Scale(q) => S::max_of(&q.abs(), &S::one()),
        _ => S::one(),
    }
}

/// Rays `(−∞, c)` and `(c, ∞)` at every cut, the open intervals between
/// consecutive cuts, and the whole line.
pub(crate) fn grid_opens<S: Scalar>(cuts: &[S]) -> Vec<Interval<S>> {
    let mut out = vec![Interval::real_line()];
    for c in cuts {
        out.push(Interval::below(c.clone()));
        out.push(Interval::above(c.clone()));
    }
    for pair in cuts.windows(2) {
        out.push(Interval::between(pair[0].clone(), pair[1].clone()));
    }
    out
}

/// A compiled instance of the join formula: every box image with the meet of
/// the operand values on it.
struct Compiled<S> {
    boxes: HashMap<Interval<S>, usize>,
    cuts: Vec<S>,
}

fn compile<S: Scalar>(op: &TruncOp<S>, fs: &[FrameReal<S>]) -> Result<Compiled<S>> {
    if fs.len() != op.arity() {
        return Err(Error::Precondition(format!("{op} takes {} operands", op.arity())));
    }
    let frame = fs[0].frame().frame();
    let values: Vec<Vec<S>> = fs.iter().map(FrameReal::values).collect();
    let mut results = Vec::new();
    let mut tuple = vec![0usize; fs.len()];
    'tuples: loop {
        let args: Vec<S> = tuple.iter().zip(&values).map(|(&i, v)| v[i].clone()).collect();
        results.push(op.eval(&args));
        for k in 0..tuple.len() {
            tuple[k] += 1;
            if tuple[k] < values[k].len() {
                continue 'tuples;
            }
            tuple[k] = 0;
        }
        break;
    }
    let cuts = grid_cuts(results.into_iter().chain(values.iter().flatten().cloned()));
    let gap = cuts
        .windows(2)
        .map(|p| p[1].clone() - p[0].clone())
        .min()
        .unwrap_or_else(S::one);
    let delta = gap / (S::from_int(4) * lipschitz(op));

    let mut per_operand: Vec<Vec<(Interval<S>, usize)>> = Vec::new();
    for (f, vals) in fs.iter().zip(&values) {
        let mut ends = vec![ExtValue::NegInf, ExtValue::PosInf];
        for v in vals {
            ends.push(ExtValue::Finite(v.clone() - delta.clone()));
            ends.push(ExtValue::Finite(v.clone() + delta.clone()));
        }
        ends.sort();
        let mut opens = Vec::new();
        for (i, lo) in ends.iter().enumerate() {
            for hi in &ends[i + 1..] {
                let u = open(lo.clone(), hi.clone());
                let x = f.eval(&u);
                if x != frame.bottom() {
                    opens.push((u, x));
                }
            }
        }
        per_operand.push(opens);
    }

    let mut boxes: HashMap<Interval<S>, usize> = HashMap::new();
    let mut add = |img: Interval<S>, x: usize| {
        let e = boxes.entry(img).or_insert(frame.bottom());
        *e = frame.join(*e, x);
    };
    match per_operand.as_slice() {
        [a] => {
            for (u, x) in a {
                add(image(op, std::slice::from_ref(u)), *x);
            }
        }
        [a, b] => {
            for (u, x) in a {
                for (v, y) in b {
                    let m = frame.meet(*x, *y);
                    if m != frame.bottom() {
                        add(image(op, &[u.clone(), v.clone()]), m);
                    }
                }
            }
        }
        _ => return Err(Error::Unsupported("operations of arity above 2".into())),
    }
    Ok(Compiled { boxes, cuts })
}

impl<S: Scalar> Compiled<S> {
    fn eval(&self, frame: &super::FiniteFrame, v: &Interval<S>) -> usize {
        frame.join_all(self.boxes.iter().filter(|(img, _)| img.is_subset(v)).map(|(_, &x)| x))
    }
}

/// `w(f⃗)(V)` from the join formula.
pub fn join_oracle<S: Scalar>(op: &TruncOp<S>, fs: &[FrameReal<S>], v: &Interval<S>) -> Result<usize> {
    let compiled = compile(op, fs)?;
    Ok(compiled.eval(fs[0].frame().frame(), v))
}

/// Outcome of comparing the cell-wise operation with the join formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport<S: Scalar> {
    pub result: FrameReal<S>,
    pub opens_checked: usize,
    pub boxes: usize,
    /// An open where the two disagree, with the oracle and cell-wise values.
    pub mismatch: Option<(Interval<S>, usize, usize)>,
}

/// Compute `op` cell-wise and compare with the join formula on every grid
/// open.
pub fn oracle_check<S: Scalar>(op: &TruncOp<S>, fs: &[FrameReal<S>]) -> Result<OracleReport<S>> {
    let result = apply_op(op, fs)?;
    let compiled = compile(op, fs)?;
    let frame = fs[0].frame().frame();
    let opens = grid_opens(&compiled.cuts);
    let mismatch = opens.iter().find_map(|v| {
        let expected = compiled.eval(frame, v);
        let got = result.eval(v);
        (expected != got).then(|| (v.clone(), expected, got))
    });
    Ok(OracleReport {
        result,
        opens_checked: opens.len(),
        boxes: compiled.boxes.len(),
        mismatch,
    })
}

/// `ḡ(−∞, r)` by cases.
pub fn truncate_lower_by_cases<S: Scalar>(g: &FrameReal<S>, r: &S) -> usize {
    if *r > S::one() {
        g.frame().frame().top()
    } else {
        g.lower(r)
    }
}

/// `ḡ(r, ∞)` by cases.
pub fn truncate_upper_by_cases<S: Scalar>(g: &FrameReal<S>, r: &S) -> usize {
    if *r >= S::one() {
        g.frame().frame().bottom()
    } else {
        g.upper(r)
    }
}

/// `(g ⊖ 1)(r, ∞)` by cases.
pub fn tminus_upper_by_cases<S: Scalar>(g: &FrameReal<S>, r: &S) -> usize {
    if r.is_negative() {
        g.frame().frame().top()
    } else {
        g.upper(&(r.clone() + S::one()))
    }
}

/// `(g ⊖ 1)(−∞, r)` by cases.
pub fn tminus_lower_by_cases<S: Scalar>(g: &FrameReal<S>, r: &S) -> usize {
    if !r.is_positive() {
        g.frame().frame().bottom()
    } else {
        g.lower(&(r.clone() + S::one()))
    }
}

/// All four case tables agree with evaluation of `ḡ` and `g ⊖ 1` at `r`.
pub fn case_tables_check<S: Scalar>(g: &FrameReal<S>, r: &S) -> Result<bool> {
    let t = g.truncate()?;
    let m = g.tminus(&S::one())?;
    Ok(t.lower(r) == truncate_lower_by_cases(g, r)
        && t.upper(r) == truncate_upper_by_cases(g, r)
        && m.upper(r) == tminus_upper_by_cases(g, r)
        && m.lower(r) == tminus_lower_by_cases(g, r))
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
    fn images_track_closed_ends() {
        let u = Interval::between(q(0, 1), q(2, 1));
        let t = image(&TruncOp::Truncate, std::slice::from_ref(&u));
        assert_eq!(t.to_string(), "(0, 1]");
        let m = image(&TruncOp::TMinus(q(1, 1)), std::slice::from_ref(&u));
        assert_eq!(m.to_string(), "[0, 1)");
        let s = image(&TruncOp::Scale(q(-2, 1)), std::slice::from_ref(&u));
        assert_eq!(s.to_string(), "(-4, 0)");
        let d = image(&TruncOp::Sub, &[u.clone(), Interval::above(q(1, 1))]);
        assert_eq!(d.to_string(), "(-inf, 1)");
    }

    #[test]
    fn sum_of_characteristic_functions() {
        let f4 = f4();
        let b = f4.frame().index_of("b").unwrap();
        let chi_b: FrameReal<Rational> = chi(&f4, b).unwrap();
        let report = oracle_check(&TruncOp::Add, &[chi_b.clone(), chi_b.clone()]).unwrap();
        assert_eq!(report.mismatch, None);
        assert_eq!(report.result, chi_b.scale(&q(2, 1)));
        assert_eq!(
            join_oracle(&TruncOp::Add, &[chi_b.clone(), chi_b], &Interval::above(q(3, 2))).unwrap(),
            b
        );
    }

    #[test]
    fn case_tables_on_examples() {
        let f4 = f4();
        let b = f4.frame().index_of("b").unwrap();
        let g: FrameReal<Rational> = chi(&f4, b).unwrap().scale(&q(5, 2));
        for r in [q(-1, 1), q(0, 1), q(1, 2), q(1, 1), q(3, 2), q(5, 2), q(4, 1)] {
            assert!(case_tables_check(&g, &r).unwrap(), "r = {r}");
        }
        assert_eq!(
            truncate_upper_by_cases(&chi(&f4, b).unwrap().scale(&q(2, 1)), &q(1, 1)),
            f4.frame().bottom()
        );
    }
}
