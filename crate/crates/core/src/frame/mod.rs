//! Finite pointed frames and step-valued frame reals.
//!
//! A finite frame is a finite distributive lattice. Its frame reals with
//! finitely many values are exactly the partitions of `⊤` into complemented
//! cells labelled by distinct values; on a finite spatial frame every frame
//! real has this form, since a continuous map to ℝ is constant on the
//! connected components, and the complemented elements are the unions of
//! components.

mod gen;
mod oracle;
mod pointwise;
mod real;
mod surjection;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use gen::{
    dense_quotients, posets_with_at_most, random_extended_real, random_frame, random_real, DownsetFrame, Poset,
};
pub use oracle::{
    case_tables_check, image, join_oracle, oracle_check, tminus_lower_by_cases, tminus_upper_by_cases,
    truncate_lower_by_cases, truncate_upper_by_cases, OracleReport,
};
pub use pointwise::{frame_dini, frame_sup, quotient_meet, FrameDini, FrameSupReport};
pub use real::{chi, uc_check, ExtValue, FrameReal, Interval};
pub use surjection::{
    drop_real, e0q_adjoint_candidate, e0q_exhaustive, e0q_member, DropOutcome, E0q, FrameSurjection, LiftMethod,
};

/// Frames larger than this are rejected; every table is quadratic.
pub const MAX_FRAME_SIZE: usize = 256;

/// A finite frame with all derived tables. Elements are indices
/// `0..len()`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteFrame {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    implies: Vec<Vec<usize>>,
    pseudo: Vec<usize>,
    top: usize,
    bottom: usize,
}

impl FiniteFrame {
    /// The order generated by `pairs` (each `(a, b)` meaning `a ≤ b`).
    pub fn from_covers(labels: Vec<String>, pairs: &[(String, String)]) -> Result<Self> {
        let n = labels.len();
        let index = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::Structure(format!("unknown frame element `{l}`")))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            leq[index(a)?][index(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_order(labels, leq)
    }

    /// Validate a reflexive, transitive relation and build the tables.
    pub fn from_order(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Structure("a frame needs at least one element".into()));
        }
        if n > MAX_FRAME_SIZE {
            return Err(Error::Budget(format!("frame has {n} elements, limit {MAX_FRAME_SIZE}")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Structure(format!("duplicate frame element `{l}`")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Structure(format!(
                        "order is not antisymmetric: {} ≤ {} ≤ {}",
                        labels[i], labels[j], labels[i]
                    )));
                }
            }
        }
        let bound = |x: usize, y: usize, upper: bool| -> Result<usize> {
            let above = |a: usize, b: usize| if upper { leq[a][b] } else { leq[b][a] };
            let bounds: Vec<usize> = (0..n).filter(|&z| above(x, z) && above(y, z)).collect();
            bounds
                .iter()
                .copied()
                .find(|&z| bounds.iter().all(|&w| above(z, w)))
                .ok_or_else(|| {
                    Error::Structure(format!(
                        "not a lattice: {} and {} have no {}",
                        labels[x],
                        labels[y],
                        if upper { "join" } else { "meet" }
                    ))
                })
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                join[x][y] = bound(x, y, true)?;
                meet[x][y] = bound(x, y, false)?;
            }
        }
        let top = (0..n).fold(0, |acc, x| join[acc][x]);
        let bottom = (0..n).fold(0, |acc, x| meet[acc][x]);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]] {
                        return Err(Error::Structure(format!(
                            "not distributive: x = {}, y = {}, z = {}",
                            labels[x], labels[y], labels[z]
                        )));
                    }
                }
            }
        }
        let mut implies = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                implies[x][y] = (0..n)
                    .filter(|&z| leq[meet[z][x]][y])
                    .fold(bottom, |acc, z| join[acc][z]);
            }
        }
        let pseudo = (0..n).map(|x| implies[x][bottom]).collect();
        Ok(FiniteFrame {
            labels,
            leq,
            join,
            meet,
            implies,
            pseudo,
            top,
            bottom,
        })
    }

    /// The chain `bot < c1 < … < top` with `n` elements, `n ≥ 2`.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 2, "a chain frame has at least two elements");
        let labels = (0..n)
            .map(|i| match i {
                0 => "bot".to_string(),
                i if i == n - 1 => "top".to_string(),
                i => format!("c{i}"),
            })
            .collect();
        let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        Self::from_order(labels, leq).expect("chains are frames")
    }

    /// The power set of the named atoms. Unions are labelled `a+b`.
    pub fn boolean(atoms: &[&str]) -> Self {
        let k = atoms.len();
        assert!(k < 8, "boolean frame too large");
        let n = 1usize << k;
        let labels = (0..n)
            .map(|m| match m {
                0 => "bot".to_string(),
                m if m == n - 1 && k > 1 => "top".to_string(),
                m => (0..k)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| atoms[i])
                    .collect::<Vec<_>>()
                    .join("+"),
            })
            .collect();
        let leq = (0..n).map(|a| (0..n).map(|b| a & !b == 0).collect()).collect();
        Self::from_order(labels, leq).expect("power sets are frames")
    }

    /// Componentwise order on pairs, labelled `(x,y)`; element `(i, j)` has
    /// index `i · right.len() + j`.
    pub fn product(left: &FiniteFrame, right: &FiniteFrame) -> Self {
        let (a, b) = (left.len(), right.len());
        let labels = (0..a * b)
            .map(|k| format!("({},{})", left.label(k / b), right.label(k % b)))
            .collect();
        let leq = (0..a * b)
            .map(|x| {
                (0..a * b)
                    .map(|y| left.leq(x / b, y / b) && right.leq(x % b, y % b))
                    .collect()
            })
            .collect();
        Self::from_order(labels, leq).expect("products of frames are frames")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Structure(format!("unknown frame element `{label}`")))
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join[acc][x])
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet[acc][x])
    }

    /// Heyting implication `x → y`.
    pub fn implies(&self, x: usize, y: usize) -> usize {
        self.implies[x][y]
    }

    /// `x* = x → ⊥`.
    pub fn pseudocomplement(&self, x: usize) -> usize {
        self.pseudo[x]
    }

    /// `x ≺ y` iff `x* ∨ y = ⊤`.
    pub fn rather_below(&self, x: usize, y: usize) -> bool {
        self.join[self.pseudo[x]][y] == self.top
    }

    pub fn is_complemented(&self, x: usize) -> bool {
        self.join[x][self.pseudo[x]] == self.top
    }

    /// The complement of `x`, when it has one.
    pub fn complement(&self, x: usize) -> Option<usize> {
        self.is_complemented(x).then_some(self.pseudo[x])
    }

    pub fn complemented(&self) -> Vec<usize> {
        self.elements().filter(|&x| self.is_complemented(x)).collect()
    }

    /// `x = x**`.
    pub fn is_regular(&self, x: usize) -> bool {
        self.pseudo[self.pseudo[x]] == x
    }

    pub fn is_boolean(&self) -> bool {
        self.elements().all(|x| self.is_complemented(x))
    }

    /// Least nonzero complemented elements; every complemented element is a
    /// join of these.
    pub fn complemented_atoms(&self) -> Vec<usize> {
        let comp = self.complemented();
        comp.iter()
            .copied()
            .filter(|&x| x != self.bottom && comp.iter().all(|&y| y == self.bottom || y == x || !self.leq(y, x)))
            .collect()
    }

    /// Every element of a finite frame is compact, so this always holds; the
    /// check is that `⊤` is reached as a finite join of any cover.
    pub fn is_compact(&self) -> bool {
        true
    }
}

impl fmt::Debug for FiniteFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteFrame{:?}", self.labels)
    }
}

/// A finite frame with a point, given by the least element `j` containing it:
/// `point(x) = ⊤` iff `j ≤ x`. `j` is join-prime.
#[derive(Clone, PartialEq, Eq)]
pub struct PointedFiniteFrame {
    frame: Arc<FiniteFrame>,
    point: usize,
}

impl PointedFiniteFrame {
    pub fn new(frame: Arc<FiniteFrame>, point: usize) -> Result<Self> {
        if point >= frame.len() {
            return Err(Error::Structure("point element out of range".into()));
        }
        if point == frame.bottom() {
            return Err(Error::Structure("the point cannot be given by ⊥".into()));
        }
        for x in frame.elements() {
            for y in frame.elements() {
                if frame.leq(point, frame.join(x, y)) && !frame.leq(point, x) && !frame.leq(point, y) {
                    return Err(Error::Structure(format!(
                        "{} is not join-prime: below {} ∨ {} only",
                        frame.label(point),
                        frame.label(x),
                        frame.label(y)
                    )));
                }
            }
        }
        Ok(PointedFiniteFrame { frame, point })
    }

    /// From the table of a frame map onto `2`.
    pub fn from_map(frame: Arc<FiniteFrame>, map: &[bool]) -> Result<Self> {
        if map.len() != frame.len() {
            return Err(Error::Structure("point map has the wrong length".into()));
        }
        if map[frame.bottom()] || !map[frame.top()] {
            return Err(Error::Structure("point map must send ⊥ to ⊥ and ⊤ to ⊤".into()));
        }
        for x in frame.elements() {
            for y in frame.elements() {
                if map[frame.join(x, y)] != (map[x] || map[y]) || map[frame.meet(x, y)] != (map[x] && map[y]) {
                    return Err(Error::Structure(format!(
                        "point map is not a frame map at {}, {}",
                        frame.label(x),
                        frame.label(y)
                    )));
                }
            }
        }
        let point = frame.meet_all(frame.elements().filter(|&x| map[x]));
        Self::new(frame, point)
    }

    pub fn by_label(frame: FiniteFrame, point: &str) -> Result<Self> {
        let p = frame.index_of(point)?;
        Self::new(Arc::new(frame), p)
    }

    /// The product of `left` and `right` with the point of `left`.
    pub fn product(left: &PointedFiniteFrame, right: &FiniteFrame) -> Self {
        let frame = FiniteFrame::product(left.frame(), right);
        let point = left.point * right.len() + right.bottom();
        Self::new(Arc::new(frame), point).expect("the point of a factor is a point of the product")
    }

    pub fn frame(&self) -> &FiniteFrame {
        &self.frame
    }

    pub fn frame_arc(&self) -> &Arc<FiniteFrame> {
        &self.frame
    }

    /// The least element containing the point.
    pub fn point_element(&self) -> usize {
        self.point
    }

    pub fn contains_point(&self, x: usize) -> bool {
        self.frame.leq(self.point, x)
    }

    pub fn point_map(&self) -> Vec<bool> {
        self.frame.elements().map(|x| self.contains_point(x)).collect()
    }
}

impl fmt::Debug for PointedFiniteFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} pointed at {}", self.frame, self.frame.label(self.point))
    }
}

/// Structural report used by the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameTables {
    pub pseudocomplement: Vec<(String, String)>,
    pub complemented: Vec<String>,
    pub rather_below: Vec<(String, String)>,
}

pub fn derived_tables(frame: &FiniteFrame) -> FrameTables {
    let l = |x: usize| frame.label(x).to_string();
    FrameTables {
        pseudocomplement: frame.elements().map(|x| (l(x), l(frame.pseudocomplement(x)))).collect(),
        complemented: frame.complemented().into_iter().map(l).collect(),
        rather_below: frame
            .elements()
            .flat_map(|x| frame.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| frame.rather_below(x, y))
            .map(|(x, y)| (l(x), l(y)))
            .collect(),
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    #[test]
    fn boolean_tables() {
        let f = FiniteFrame::boolean(&["a", "b"]);
        let (a, b) = (f.index_of("a").unwrap(), f.index_of("b").unwrap());
        assert_eq!(f.pseudocomplement(a), b);
        assert!(f.rather_below(a, a));
        assert!(f.is_boolean());
        assert_eq!(f.complemented_atoms(), vec![a, b]);
    }

    #[test]
    fn chain_tables() {
        let f = FiniteFrame::chain(3);
        let m = f.index_of("c1").unwrap();
        assert_eq!(f.pseudocomplement(m), f.bottom());
        assert!(f.rather_below(m, f.top()));
        assert!(!f.rather_below(m, m));
        assert_eq!(f.complemented(), vec![f.bottom(), f.top()]);
        assert!(f.is_regular(f.top()) && !f.is_regular(m));
    }

    #[test]
    fn pentagon_is_rejected() {
        let labels = ["0", "a", "b", "c", "1"].map(s).to_vec();
        let pairs = [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")].map(|(x, y)| (s(x), s(y)));
        let err = FiniteFrame::from_covers(labels, &pairs).unwrap_err();
        assert!(
            matches!(err, Error::Structure(ref m) if m.starts_with("not distributive")),
            "{err}"
        );
    }

    #[test]
    fn non_lattices_are_rejected() {
        let labels = ["0", "a", "b", "c", "d", "1"].map(s).to_vec();
        let pairs = [
            ("0", "a"),
            ("0", "b"),
            ("a", "c"),
            ("b", "c"),
            ("a", "d"),
            ("b", "d"),
            ("c", "1"),
            ("d", "1"),
        ]
        .map(|(x, y)| (s(x), s(y)));
        assert!(FiniteFrame::from_covers(labels, &pairs).is_err());
        let cyclic = FiniteFrame::from_covers(["x", "y"].map(s).to_vec(), &[(s("x"), s("y")), (s("y"), s("x"))]);
        assert!(cyclic.is_err());
    }

    #[test]
    fn points_must_be_prime() {
        let f = Arc::new(FiniteFrame::boolean(&["a", "b"]));
        assert!(PointedFiniteFrame::new(f.clone(), f.top()).is_err());
        let p = PointedFiniteFrame::new(f.clone(), f.index_of("b").unwrap()).unwrap();
        let again = PointedFiniteFrame::from_map(f.clone(), &p.point_map()).unwrap();
        assert_eq!(again, p);
        assert!(PointedFiniteFrame::from_map(f, &[false, true, true, true]).is_err());
    }

    #[test]
    fn product_point_follows_left_factor() {
        let c3 = test_support::c3();
        let p = PointedFiniteFrame::product(&c3, &FiniteFrame::chain(2));
        assert_eq!(p.frame().len(), 6);
        assert_eq!(p.frame().label(p.point_element()), "(c1,bot)");
    }
}
