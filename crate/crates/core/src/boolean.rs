//! Finite generalized Boolean algebras, idealized Boolean algebras, and the
//! functors relating them to finite pointed Boolean spaces.
//!
//! Algebras are explicit: elements are indices `0..len()` with labels, and the
//! operations are stored as tables so that validation is exhaustive. The
//! functors are
//!
//! * [`idealize`]: gBa → iBa, adjoining a primed copy `a'` of every element;
//! * [`iba_forget`]: iBa → gBa, keeping the ideal with `a ∖ b = a ∧ ¬b`;
//! * [`stone`]: iBa → pointed space of atoms, the star being the atom outside
//!   the ideal;
//! * [`clopen`]: pointed space → iBa of all subsets, ideal = subsets omitting
//!   the star.
//!
//! [`equivalence_witness`] runs the round trips and produces explicit
//! isomorphisms.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::space::{PointedBooleanSpace, SiteSet};
use crate::trunc::{lc, uc};

/// Default bound on carrier sizes for the isomorphism searches.
pub const DEFAULT_CARRIER_BOUND: usize = 64;

/// A total binary operation table on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    n: usize,
    data: Vec<usize>,
}

impl Table {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                data.push(f(a, b));
            }
        }
        Table { n, data }
    }

    /// Build from rows, checking totality and range.
    pub fn from_rows(name: &str, n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::Structure(format!(
                "{name} table has {} rows, carrier has {n} elements",
                rows.len()
            )));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Structure(format!(
                    "{name} table row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::Structure(format!(
                    "{name} table row {i} refers to element {bad} outside the carrier"
                )));
            }
            data.extend(row);
        }
        Ok(Table { n, data })
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.data[a * self.n + b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: usize) {
        self.data[a * self.n + b] = v;
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.data.chunks(self.n.max(1)).map(<[usize]>::to_vec).collect()
    }
}

/// One violated law, with the elements that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {:?}", self.axiom, self.witness)
    }
}

/// Outcome of an exhaustive axiom check. At most one witness is kept per axiom.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, axiom: &'static str, witness: Vec<usize>) {
        if !self.violations.iter().any(|v| v.axiom == axiom) {
            self.violations.push(Violation { axiom, witness });
        }
    }

    pub fn find(&self, axiom: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

/// Exhaustive distributive-lattice-with-bottom laws over all pairs and triples.
fn check_lattice(n: usize, join: &Table, meet: &Table, bottom: usize, report: &mut ValidationReport) {
    for a in 0..n {
        if join.get(a, a) != a || meet.get(a, a) != a {
            report.record("idempotence", vec![a]);
        }
        if join.get(a, bottom) != a || meet.get(a, bottom) != bottom {
            report.record("bottom", vec![a]);
        }
        for b in 0..n {
            if join.get(a, b) != join.get(b, a) || meet.get(a, b) != meet.get(b, a) {
                report.record("commutativity", vec![a, b]);
            }
            if join.get(a, meet.get(a, b)) != a || meet.get(a, join.get(a, b)) != a {
                report.record("absorption", vec![a, b]);
            }
            for c in 0..n {
                if join.get(join.get(a, b), c) != join.get(a, join.get(b, c))
                    || meet.get(meet.get(a, b), c) != meet.get(a, meet.get(b, c))
                {
                    report.record("associativity", vec![a, b, c]);
                }
                if meet.get(a, join.get(b, c)) != join.get(meet.get(a, b), meet.get(a, c)) {
                    report.record("distributivity", vec![a, b, c]);
                }
            }
        }
    }
}

/// A finite generalized Boolean algebra given by tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedBooleanAlgebra {
    labels: Vec<String>,
    bottom: usize,
    join: Table,
    meet: Table,
    diff: Table,
}

impl GeneralizedBooleanAlgebra {
    /// Assemble from explicit tables. Only totality is checked here; use
    /// [`gba_validate`] for the axioms.
    pub fn from_tables(
        labels: Vec<String>,
        bottom: usize,
        join: Vec<Vec<usize>>,
        meet: Vec<Vec<usize>>,
        diff: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Structure("empty carrier".into()));
        }
        if bottom >= n {
            return Err(Error::Structure("bottom is not in the carrier".into()));
        }
        Ok(GeneralizedBooleanAlgebra {
            join: Table::from_rows("join", n, join)?,
            meet: Table::from_rows("meet", n, meet)?,
            diff: Table::from_rows("diff", n, diff)?,
            labels,
            bottom,
        })
    }

    /// The algebra of a family of sets under `∪`, `∩`, `∖`. Fails, naming the
    /// first missing set, when the family is not closed or lacks `∅`.
    pub fn from_set_family(sets: &[SiteSet], label: impl Fn(SiteSet) -> String) -> Result<Self> {
        let index = family_index(sets)?;
        let n = sets.len();
        let lookup = |s: SiteSet, op: &str, a: SiteSet, b: SiteSet| -> Result<usize> {
            index.get(&s).copied().ok_or_else(|| {
                Error::Invariant(format!(
                    "family not closed: {} {op} {} = {} is missing",
                    label(a),
                    label(b),
                    label(s)
                ))
            })
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        let mut diff = vec![vec![0; n]; n];
        for (i, &a) in sets.iter().enumerate() {
            for (j, &b) in sets.iter().enumerate() {
                join[i][j] = lookup(a.union(b), "∪", a, b)?;
                meet[i][j] = lookup(a.intersection(b), "∩", a, b)?;
                diff[i][j] = lookup(a.difference(b), "∖", a, b)?;
            }
        }
        let bottom = index[&SiteSet::EMPTY];
        let labels = sets.iter().map(|&s| label(s)).collect();
        GeneralizedBooleanAlgebra::from_tables(labels, bottom, join, meet, diff)
    }

    /// The powerset of `{0, …, n-1}`, elements indexed by bitmask.
    pub fn powerset(n: usize) -> Self {
        let sets: Vec<SiteSet> = (0..1u64 << n).map(SiteSet).collect();
        GeneralizedBooleanAlgebra::from_set_family(&sets, |s| {
            let items: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", items.join(","))
        })
        .expect("powerset is closed")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join.get(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet.get(a, b)
    }

    /// The stored relative complement `a ∖ b`.
    pub fn diff(&self, a: usize, b: usize) -> usize {
        self.diff.get(a, b)
    }

    pub fn tables(&self) -> (&Table, &Table, &Table) {
        (&self.join, &self.meet, &self.diff)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    /// Minimal nonzero elements.
    pub fn atoms(&self) -> Vec<usize> {
        atoms_of(self.len(), self.bottom, |a, b| self.leq(a, b))
    }
}

fn family_index(sets: &[SiteSet]) -> Result<BTreeMap<SiteSet, usize>> {
    let mut index = BTreeMap::new();
    for (i, &s) in sets.iter().enumerate() {
        if index.insert(s, i).is_some() {
            return Err(Error::Structure(format!("set {s} listed twice")));
        }
    }
    if !index.contains_key(&SiteSet::EMPTY) {
        return Err(Error::Invariant("family must contain the empty set".into()));
    }
    Ok(index)
}

fn atoms_of(n: usize, bottom: usize, leq: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    (0..n)
        .filter(|&a| a != bottom)
        .filter(|&a| (0..n).all(|c| c == bottom || c == a || !leq(c, a)))
        .collect()
}

/// Check every generalized-Boolean-algebra axiom exhaustively.
///
/// Besides the distributive-lattice laws this checks, for every pair `(a, b)`,
/// that the stored `diff(a, b)` satisfies `c ∨ b = a ∨ b`, `c ∧ b = ⊥`, that
/// some element satisfies both (`diff existence`), and that only one does
/// (`diff uniqueness`).
pub fn gba_validate(a: &GeneralizedBooleanAlgebra) -> ValidationReport {
    let n = a.len();
    let mut report = ValidationReport::default();
    check_lattice(n, &a.join, &a.meet, a.bottom, &mut report);
    for x in 0..n {
        for y in 0..n {
            let target = a.join(x, y);
            let c = a.diff(x, y);
            if a.join(c, y) != target || a.meet(c, y) != a.bottom {
                report.record("diff equations", vec![x, y]);
            }
            let solutions = (0..n)
                .filter(|&c| a.join(c, y) == target && a.meet(c, y) == a.bottom)
                .count();
            match solutions {
                0 => report.record("diff existence", vec![x, y]),
                1 => {}
                _ => report.record("diff uniqueness", vec![x, y]),
            }
        }
    }
    report
}

/// The unique `c` with `c ∨ b = a ∨ b` and `c ∧ b = ⊥`, found by search.
///
/// Unlike [`GeneralizedBooleanAlgebra::diff`] this does not trust the stored
/// table; it fails if no element or more than one element qualifies.
pub fn gba_diff(alg: &GeneralizedBooleanAlgebra, a: usize, b: usize) -> Result<usize> {
    let target = alg.join(a, b);
    let mut found = (0..alg.len()).filter(|&c| alg.join(c, b) == target && alg.meet(c, b) == alg.bottom);
    match (found.next(), found.next()) {
        (Some(c), None) => Ok(c),
        (None, _) => Err(Error::Invariant(format!(
            "no relative complement of {} by {}",
            alg.label(a),
            alg.label(b)
        ))),
        (Some(_), Some(_)) => Err(Error::Invariant(format!(
            "relative complement of {} by {} is not unique",
            alg.label(a),
            alg.label(b)
        ))),
    }
}

/// A finite Boolean algebra given by tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanAlgebra {
    labels: Vec<String>,
    bottom: usize,
    top: usize,
    join: Table,
    meet: Table,
    complement: Vec<usize>,
}

impl BooleanAlgebra {
    pub fn from_tables(
        labels: Vec<String>,
        bottom: usize,
        top: usize,
        join: Vec<Vec<usize>>,
        meet: Vec<Vec<usize>>,
        complement: Vec<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        if bottom >= n || top >= n {
            return Err(Error::Structure("bottom/top outside the carrier".into()));
        }
        if complement.len() != n || complement.iter().any(|&c| c >= n) {
            return Err(Error::Structure("complement table is not total".into()));
        }
        Ok(BooleanAlgebra {
            join: Table::from_rows("join", n, join)?,
            meet: Table::from_rows("meet", n, meet)?,
            labels,
            bottom,
            top,
            complement,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join.get(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet.get(a, b)
    }

    pub fn complement(&self, a: usize) -> usize {
        self.complement[a]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    pub fn atoms(&self) -> Vec<usize> {
        atoms_of(self.len(), self.bottom, |a, b| self.leq(a, b))
    }

    /// Exhaustive check of the Boolean-algebra axioms over all pairs and triples.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let mut report = ValidationReport::default();
        check_lattice(n, &self.join, &self.meet, self.bottom, &mut report);
        for a in 0..n {
            if self.join(a, self.top) != self.top || self.meet(a, self.top) != a {
                report.record("top", vec![a]);
            }
            let c = self.complement(a);
            if self.join(a, c) != self.top || self.meet(a, c) != self.bottom {
                report.record("complement", vec![a]);
            }
        }
        report
    }
}

/// A Boolean algebra with a designated maximal ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealizedBooleanAlgebra {
    pub algebra: BooleanAlgebra,
    ideal: Vec<bool>,
}

impl IdealizedBooleanAlgebra {
    pub fn new(algebra: BooleanAlgebra, ideal: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut flags = vec![false; algebra.len()];
        for i in ideal {
            if i >= flags.len() {
                return Err(Error::Structure(format!("ideal element {i} outside the carrier")));
            }
            flags[i] = true;
        }
        Ok(IdealizedBooleanAlgebra { algebra, ideal: flags })
    }

    pub fn in_ideal(&self, a: usize) -> bool {
        self.ideal[a]
    }

    pub fn ideal(&self) -> Vec<usize> {
        (0..self.ideal.len()).filter(|&i| self.ideal[i]).collect()
    }

    /// Boolean axioms plus: the ideal contains `⊥`, omits `⊤`, is a down-set
    /// closed under binary joins, and contains exactly one of `b`, `¬b` for
    /// every `b`.
    pub fn validate(&self) -> ValidationReport {
        let b = &self.algebra;
        let mut report = b.validate();
        if !self.ideal[b.bottom()] {
            report.record("ideal contains bottom", vec![b.bottom()]);
        }
        if self.ideal[b.top()] {
            report.record("ideal is proper", vec![b.top()]);
        }
        for x in 0..b.len() {
            if self.ideal[x] == self.ideal[b.complement(x)] {
                report.record("ideal is maximal", vec![x]);
            }
            for y in 0..b.len() {
                if self.ideal[y] && b.leq(x, y) && !self.ideal[x] {
                    report.record("ideal is a down-set", vec![x, y]);
                }
                if self.ideal[x] && self.ideal[y] && !self.ideal[b.join(x, y)] {
                    report.record("ideal is join-closed", vec![x, y]);
                }
            }
        }
        report
    }
}

/// Label given to the adjoined copy of an element under [`idealize`].
pub fn primed(label: &str) -> String {
    format!("{label}'")
}

/// Adjoin a disjoint primed copy `A'` and equip `A ∪ A'` with the Boolean
/// operations
///
/// | operation   | value            |
/// |-------------|------------------|
/// | `a₁ ∨ a₂`   | `a₁ ∨ a₂`        |
/// | `a₁ ∨ a₂'`  | `(a₂ ∖ a₁)'`     |
/// | `a₁' ∨ a₂'` | `(a₁ ∧ a₂)'`     |
/// | `a₁ ∧ a₂`   | `a₁ ∧ a₂`        |
/// | `a₁ ∧ a₂'`  | `a₁ ∖ a₂`        |
/// | `a₁' ∧ a₂'` | `(a₁ ∨ a₂)'`     |
/// | `¬a`, `¬a'` | `a'`, `a`        |
/// | `⊥`, `⊤`    | `⊥`, `⊥'`        |
///
/// Element `i` of `A` keeps index `i`; its copy `i'` gets index `n + i`. The
/// original carrier is the ideal.
pub fn idealize(a: &GeneralizedBooleanAlgebra) -> IdealizedBooleanAlgebra {
    let n = a.len();
    let prime = |i: usize| n + i;
    let split = |x: usize| if x < n { (x, false) } else { (x - n, true) };
    let join = Table::from_fn(2 * n, |x, y| match (split(x), split(y)) {
        ((p, false), (q, false)) => a.join(p, q),
        ((p, false), (q, true)) => prime(a.diff(q, p)),
        ((p, true), (q, false)) => prime(a.diff(p, q)),
        ((p, true), (q, true)) => prime(a.meet(p, q)),
    });
    let meet = Table::from_fn(2 * n, |x, y| match (split(x), split(y)) {
        ((p, false), (q, false)) => a.meet(p, q),
        ((p, false), (q, true)) => a.diff(p, q),
        ((p, true), (q, false)) => a.diff(q, p),
        ((p, true), (q, true)) => prime(a.join(p, q)),
    });
    let complement = (0..2 * n)
        .map(|x| match split(x) {
            (p, false) => prime(p),
            (p, true) => p,
        })
        .collect();
    let labels = a
        .labels()
        .iter()
        .cloned()
        .chain(a.labels().iter().map(|l| primed(l)))
        .collect();
    let algebra = BooleanAlgebra {
        labels,
        bottom: a.bottom(),
        top: prime(a.bottom()),
        join,
        meet,
        complement,
    };
    IdealizedBooleanAlgebra {
        algebra,
        ideal: (0..2 * n).map(|x| x < n).collect(),
    }
}

/// Restrict to the ideal, with relative complement `a ∧ ¬b`. Element order is
/// the order of the ideal in the source carrier.
pub fn iba_forget(bi: &IdealizedBooleanAlgebra) -> GeneralizedBooleanAlgebra {
    let b = &bi.algebra;
    let members = bi.ideal();
    let mut position = vec![usize::MAX; b.len()];
    for (i, &m) in members.iter().enumerate() {
        position[m] = i;
    }
    let k = members.len();
    let restrict = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
        (0..k)
            .map(|i| (0..k).map(|j| position[f(members[i], members[j])]).collect())
            .collect()
    };
    let join = restrict(&|x, y| b.join(x, y));
    let meet = restrict(&|x, y| b.meet(x, y));
    let diff = restrict(&|x, y| b.meet(x, b.complement(y)));
    let labels = members.iter().map(|&m| b.label(m).to_string()).collect();
    GeneralizedBooleanAlgebra {
        labels,
        bottom: position[b.bottom()],
        join: Table {
            n: k,
            data: join.concat(),
        },
        meet: Table {
            n: k,
            data: meet.concat(),
        },
        diff: Table {
            n: k,
            data: diff.concat(),
        },
    }
}

/// The pointed space of atoms (equivalently ultrafilters) of a finite
/// idealized Boolean algebra, together with the atom index of each point.
pub fn stone(bi: &IdealizedBooleanAlgebra) -> Result<(PointedBooleanSpace, Vec<usize>)> {
    let report = bi.validate();
    if let Some(v) = report.violations.first() {
        return Err(Error::Invariant(format!("not an idealized Boolean algebra: {v}")));
    }
    let b = &bi.algebra;
    let atoms = b.atoms();
    let outside: Vec<usize> = atoms.iter().copied().filter(|&a| !bi.in_ideal(a)).collect();
    if outside.len() != 1 {
        return Err(Error::Invariant(format!(
            "expected exactly one atom outside the ideal, found {}",
            outside.len()
        )));
    }
    let labels: Vec<String> = atoms.iter().map(|&a| b.label(a).to_string()).collect();
    let star = b.label(outside[0]).to_string();
    Ok((PointedBooleanSpace::new(labels, &star)?, atoms))
}

/// Largest space accepted by [`clopen`]; the algebra has `2^points` elements.
pub const MAX_CLOPEN_POINTS: usize = 10;

/// All subsets of the points (every subset is clopen in a finite discrete
/// space), with the subsets omitting the star as ideal. Element `i` is the
/// subset with bitmask `i` over point indices.
pub fn clopen(x: &PointedBooleanSpace) -> Result<IdealizedBooleanAlgebra> {
    let n = x.points().len();
    if n > MAX_CLOPEN_POINTS {
        return Err(Error::Budget(format!(
            "clopen algebra of {n} points exceeds {MAX_CLOPEN_POINTS}"
        )));
    }
    let size = 1usize << n;
    let full = size - 1;
    let labels = (0..size)
        .map(|m| {
            let items: Vec<&str> = (0..n)
                .filter(|i| m >> i & 1 == 1)
                .map(|i| x.points()[i].as_str())
                .collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    let algebra = BooleanAlgebra {
        labels,
        bottom: 0,
        top: full,
        join: Table::from_fn(size, |a, b| a | b),
        meet: Table::from_fn(size, |a, b| a & b),
        complement: (0..size).map(|a| full & !a).collect(),
    };
    let star_bit = 1usize << x.star();
    IdealizedBooleanAlgebra::new(algebra, (0..size).filter(|m| m & star_bit == 0))
}

/// Search for an isomorphism of generalized Boolean algebras.
///
/// A finite gBa is generated by its atoms, so candidates are the bijections of
/// atom sets extended by joins; each candidate is verified against all three
/// tables. Returns the element map `A → B`.
pub fn gba_isomorphism(a: &GeneralizedBooleanAlgebra, b: &GeneralizedBooleanAlgebra) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let atoms_a = a.atoms();
    let atoms_b = b.atoms();
    if atoms_a.len() != atoms_b.len() {
        return None;
    }
    let below: Vec<Vec<usize>> = (0..a.len())
        .map(|x| atoms_a.iter().copied().filter(|&t| a.leq(t, x)).collect())
        .collect();
    for perm in atoms_b.iter().copied().permutations(atoms_b.len()) {
        let image_of_atom: BTreeMap<usize, usize> = atoms_a.iter().copied().zip(perm).collect();
        let map: Vec<usize> = below
            .iter()
            .map(|ts| ts.iter().fold(b.bottom(), |acc, t| b.join(acc, image_of_atom[t])))
            .collect();
        if is_gba_morphism(a, b, &map) && is_bijection(&map, b.len()) {
            return Some(map);
        }
    }
    None
}

/// Whether `map` preserves bottom, join, meet and relative complement.
pub fn is_gba_morphism(a: &GeneralizedBooleanAlgebra, b: &GeneralizedBooleanAlgebra, map: &[usize]) -> bool {
    map.len() == a.len()
        && map[a.bottom()] == b.bottom()
        && (0..a.len()).all(|x| {
            (0..a.len()).all(|y| {
                map[a.join(x, y)] == b.join(map[x], map[y])
                    && map[a.meet(x, y)] == b.meet(map[x], map[y])
                    && map[a.diff(x, y)] == b.diff(map[x], map[y])
            })
        })
}

fn is_bijection(map: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    map.len() == n && map.iter().all(|&y| y < n && !std::mem::replace(&mut seen[y], true))
}

/// Search for an isomorphism of idealized Boolean algebras (a Boolean
/// isomorphism carrying ideal onto ideal).
pub fn iba_isomorphism(a: &IdealizedBooleanAlgebra, b: &IdealizedBooleanAlgebra) -> Option<Vec<usize>> {
    let (x, y) = (&a.algebra, &b.algebra);
    if x.len() != y.len() {
        return None;
    }
    let atoms_x = x.atoms();
    let atoms_y = y.atoms();
    if atoms_x.len() != atoms_y.len() {
        return None;
    }
    let below: Vec<Vec<usize>> = (0..x.len())
        .map(|e| atoms_x.iter().copied().filter(|&t| x.leq(t, e)).collect())
        .collect();
    for perm in atoms_y.iter().copied().permutations(atoms_y.len()) {
        let image_of_atom: BTreeMap<usize, usize> = atoms_x.iter().copied().zip(perm).collect();
        let map: Vec<usize> = below
            .iter()
            .map(|ts| ts.iter().fold(y.bottom(), |acc, t| y.join(acc, image_of_atom[t])))
            .collect();
        let preserves = is_bijection(&map, y.len())
            && map[x.top()] == y.top()
            && (0..x.len()).all(|e| {
                a.in_ideal(e) == b.in_ideal(map[e])
                    && map[x.complement(e)] == y.complement(map[e])
                    && (0..x.len()).all(|f| {
                        map[x.join(e, f)] == y.join(map[e], map[f]) && map[x.meet(e, f)] == y.meet(map[e], map[f])
                    })
            });
        if preserves {
            return Some(map);
        }
    }
    None
}

/// Outcome of one round trip in [`equivalence_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundTripOutcome {
    /// Verified; the isomorphism is given as `(source label, target label)` pairs.
    Verified(Vec<(String, String)>),
    Counterexample(String),
    /// Carrier exceeded the configured bound.
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrip {
    pub name: &'static str,
    pub outcome: RoundTripOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub round_trips: Vec<RoundTrip>,
    /// False when some round trip was skipped for exceeding the bound.
    pub complete: bool,
}

impl EquivalenceReport {
    pub fn all_verified(&self) -> bool {
        self.complete
            && self
                .round_trips
                .iter()
                .all(|r| matches!(r.outcome, RoundTripOutcome::Verified(_)))
    }
}

/// Build and verify explicit isomorphisms for the round trips through the
/// finite duality:
///
/// * `stone(clopen(X)) ≅ X` as pointed spaces, via `x ↦ {x}`;
/// * `idealize(iba_forget(clopen(X))) ≅ clopen(X)` as idealized algebras;
/// * `iba_forget(idealize(A)) ≅ A` via the identity on labels, for
///   `A = iba_forget(clopen(X))`;
/// * `uc(lc(X)) ≅ iba_forget(clopen(X))` as generalized Boolean algebras.
///
/// Carriers larger than `bound` are skipped and the report is flagged
/// incomplete.
pub fn equivalence_witness(x: &PointedBooleanSpace, bound: usize) -> EquivalenceReport {
    let mut round_trips = Vec::new();
    let size = 1usize.checked_shl(x.points().len() as u32).unwrap_or(usize::MAX);
    if size > bound || x.points().len() > MAX_CLOPEN_POINTS {
        let reason = format!("clopen algebra has {size} elements, bound is {bound}");
        for name in ROUND_TRIPS {
            round_trips.push(RoundTrip {
                name,
                outcome: RoundTripOutcome::Skipped(reason.clone()),
            });
        }
        return EquivalenceReport {
            round_trips,
            complete: false,
        };
    }
    let bi = clopen(x).expect("size checked above");

    round_trips.push(RoundTrip {
        name: ROUND_TRIPS[0],
        outcome: stone_clopen_round_trip(x, &bi),
    });

    let forgotten = iba_forget(&bi);
    let again = idealize(&forgotten);
    let outcome = match iba_isomorphism(&again, &bi) {
        Some(map) => RoundTripOutcome::Verified(label_pairs(again.algebra.labels(), bi.algebra.labels(), &map)),
        None => RoundTripOutcome::Counterexample("no idealized-algebra isomorphism exists".into()),
    };
    round_trips.push(RoundTrip {
        name: ROUND_TRIPS[1],
        outcome,
    });

    let back = iba_forget(&idealize(&forgotten));
    let identity: Vec<usize> = (0..forgotten.len()).collect();
    let outcome = if back.labels() == forgotten.labels() && is_gba_morphism(&back, &forgotten, &identity) {
        RoundTripOutcome::Verified(label_pairs(back.labels(), forgotten.labels(), &identity))
    } else {
        RoundTripOutcome::Counterexample("identity on labels is not an isomorphism".into())
    };
    round_trips.push(RoundTrip {
        name: ROUND_TRIPS[2],
        outcome,
    });

    let outcome = match lc(x, None).map(|g| uc(&g)) {
        Ok(components) => match gba_isomorphism(&components, &forgotten) {
            Some(map) => RoundTripOutcome::Verified(label_pairs(components.labels(), forgotten.labels(), &map)),
            None => RoundTripOutcome::Counterexample("no gBa isomorphism exists".into()),
        },
        Err(e) => RoundTripOutcome::Counterexample(e.to_string()),
    };
    round_trips.push(RoundTrip {
        name: ROUND_TRIPS[3],
        outcome,
    });

    EquivalenceReport {
        round_trips,
        complete: true,
    }
}

const ROUND_TRIPS: [&str; 4] = [
    "stone(clopen(X)) ~ X",
    "idealize(iba_forget(B)) ~ B",
    "iba_forget(idealize(A)) ~ A",
    "uc(lc(X)) ~ iba_forget(clopen(X))",
];

fn label_pairs(from: &[String], to: &[String], map: &[usize]) -> Vec<(String, String)> {
    map.iter()
        .enumerate()
        .map(|(i, &j)| (from[i].clone(), to[j].clone()))
        .collect()
}

/// The unit `x ↦ {x}` from `X` to the atoms of `clopen(X)`, checked to be a
/// pointed bijection.
fn stone_clopen_round_trip(x: &PointedBooleanSpace, bi: &IdealizedBooleanAlgebra) -> RoundTripOutcome {
    let (space, atoms) = match stone(bi) {
        Ok(v) => v,
        Err(e) => return RoundTripOutcome::Counterexample(e.to_string()),
    };
    // point i of X corresponds to the atom with bitmask 1 << i
    let map: Vec<Option<usize>> = (0..x.points().len())
        .map(|i| atoms.iter().position(|&a| a == 1 << i))
        .collect();
    let Some(map) = map.into_iter().collect::<Option<Vec<usize>>>() else {
        return RoundTripOutcome::Counterexample("some point has no singleton atom".into());
    };
    if !is_bijection(&map, space.points().len()) {
        return RoundTripOutcome::Counterexample("x ↦ {x} is not a bijection onto the atoms".into());
    }
    if map[x.star()] != space.star() {
        return RoundTripOutcome::Counterexample(format!(
            "star {} is not sent to the star {}",
            x.star_label(),
            space.star_label()
        ));
    }
    RoundTripOutcome::Verified(label_pairs(x.points(), space.points(), &map))
}
