//! Instance files: one TOML document, one symbol table.
//!
//! Every table is keyed `[kind.name]`; names are unique across kinds. Objects
//! are built and validated in dependency order, and errors carry the line of
//! the offending header.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use trunclab::boolean::GeneralizedBooleanAlgebra;
use trunclab::frame::{ExtValue, FrameSurjection};
use trunclab::kernel::{FiniteKernel, SeqKernel, SeqShape};
use trunclab::scalar::parse_scalar;
use trunclab::seqspace::SeqTrunc;
use trunclab::trunc::member;
use trunclab::{
    Element, FiniteFrame, PointedBooleanSpace, PointedFiniteFrame, Rational, Real, SimpleTrunc, SiteSet, Tail,
};

/// A located input error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub line: Option<usize>,
    pub object: Option<String>,
    pub message: String,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        InputError {
            line: None,
            object: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(object) = &self.object {
            write!(f, "{object}: ")?;
        }
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for InputError {}

/// A rational written as an integer or a `"p/q"` string; extended values
/// also accept `"inf"` and `"-inf"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawScalar {
    Int(i64),
    Text(String),
}

impl RawScalar {
    fn text(&self) -> String {
        match self {
            RawScalar::Int(i) => i.to_string(),
            RawScalar::Text(t) => t.clone(),
        }
    }

    fn rational(&self) -> Result<Rational, String> {
        parse_scalar(&self.text()).ok_or_else(|| format!("`{}` is not a rational", self.text()))
    }

    fn extended(&self) -> Result<ExtValue<Rational>, String> {
        match self.text().trim() {
            "inf" | "+inf" => Ok(ExtValue::PosInf),
            "-inf" => Ok(ExtValue::NegInf),
            _ => self.rational().map(ExtValue::Finite),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        RawScalar::Text(r.to_string())
    }

    fn from_extended(v: &ExtValue<Rational>) -> Self {
        match v {
            ExtValue::Finite(r) => Self::from_rational(r),
            ExtValue::PosInf => RawScalar::Text("inf".into()),
            ExtValue::NegInf => RawScalar::Text("-inf".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpace {
    pub points: Vec<String>,
    pub star: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTrunc {
    pub space: String,
    /// The component family; every subset of the sites when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAlgebra {
    /// A set family on a space...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<String>>>,
    /// ...or explicit tables over labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meet: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawElement {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    /// Membership in this trunc is checked; its space is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<String>,
    /// One value per non-designated point, in point order.
    pub values: Vec<RawScalar>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTail {
    /// Values at finitely many points, keyed by the point `n ≥ 1`.
    #[serde(default)]
    pub correction: BTreeMap<String, RawScalar>,
    /// Coefficients of `1/n, 1/n², …`.
    #[serde(default)]
    pub tail: Vec<RawScalar>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFrame {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    /// Pairs `[a, b]` meaning `a ≤ b`; the order is their transitive closure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boolean: Option<Vec<String>>,
    /// `[left, right]`; the point comes from the left factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawReal {
    pub frame: String,
    /// `[value, element]` pairs partitioning the top.
    pub cells: Vec<(RawScalar, String)>,
    /// Require value 0 at the point; default true.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSurjection {
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<(String, String)>>,
    /// `booleanization` or `identity`, in place of `target` and `map`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSequence {
    pub items: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawKernel {
    /// A support kernel in a finite trunc...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<String>>,
    /// ...or a kernel in the degree-`d` trunc on ω+1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// `finite-support`, `whole` or `zero`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_from: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub within: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_on: Option<Vec<u64>>,
}

/// The file as written.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInstance {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub space: BTreeMap<String, RawSpace>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub trunc: BTreeMap<String, RawTrunc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebra: BTreeMap<String, RawAlgebra>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub element: BTreeMap<String, RawElement>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tail: BTreeMap<String, RawTail>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub frame: BTreeMap<String, RawFrame>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub real: BTreeMap<String, RawReal>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub surjection: BTreeMap<String, RawSurjection>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sequence: BTreeMap<String, RawSequence>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub kernel: BTreeMap<String, RawKernel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sequence {
    Simple(Vec<Element>),
    Tail(Vec<Tail>),
    Real(Vec<Real>),
}

impl Sequence {
    pub fn len(&self) -> usize {
        match self {
            Sequence::Simple(s) => s.len(),
            Sequence::Tail(s) => s.len(),
            Sequence::Real(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kernel {
    Finite(FiniteKernel),
    Seq(SeqKernel),
}

/// A validated object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Object {
    Space(Arc<PointedBooleanSpace>),
    Trunc(SimpleTrunc),
    Algebra(GeneralizedBooleanAlgebra),
    Element(Element),
    Tail(Tail),
    Frame(Arc<PointedFiniteFrame>),
    Real(Real),
    Surjection(FrameSurjection),
    Sequence(Sequence),
    Kernel(Kernel),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Space(_) => "space",
            Object::Trunc(_) => "trunc",
            Object::Algebra(_) => "algebra",
            Object::Element(_) => "element",
            Object::Tail(_) => "tail",
            Object::Frame(_) => "frame",
            Object::Real(_) => "real",
            Object::Surjection(_) => "surjection",
            Object::Sequence(_) => "sequence",
            Object::Kernel(_) => "kernel",
        }
    }
}

/// The symbol table of one file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Instance {
    objects: BTreeMap<String, Object>,
}

impl Instance {
    /// Add or replace an object; used to assemble instances in code.
    pub fn insert(&mut self, name: impl Into<String>, object: Object) {
        self.objects.insert(name.into(), object);
    }

    pub fn get(&self, name: &str) -> Result<&Object, InputError> {
        self.objects
            .get(name)
            .ok_or_else(|| InputError::new(format!("no object named `{name}`")))
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.objects.keys()
    }

    pub fn objects(&self) -> impl Iterator<Item = (&String, &Object)> {
        self.objects.iter()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn count(&self, kind: &str) -> usize {
        self.objects.values().filter(|o| o.kind() == kind).count()
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, InputError> {
    let raw: RawInstance = toml::from_str(text).map_err(|e| InputError {
        line: e.span().map(|s| text[..s.start].lines().count().max(1)),
        object: None,
        message: e.message().to_string(),
    })?;
    Builder::new(&raw, text).build()
}

pub fn read_instance(path: &std::path::Path) -> Result<Instance, InputError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| InputError::new(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text)
}

struct Builder<'a> {
    raw: &'a RawInstance,
    text: &'a str,
    objects: BTreeMap<String, Object>,
    in_progress: BTreeSet<String>,
}

type Built<T> = Result<T, String>;

fn err<T>(e: trunclab::Error) -> Built<T> {
    Err(e.to_string())
}

impl<'a> Builder<'a> {
    fn new(raw: &'a RawInstance, text: &'a str) -> Self {
        Builder {
            raw,
            text,
            objects: BTreeMap::new(),
            in_progress: BTreeSet::new(),
        }
    }

    fn locate(&self, kind: &str, name: &str, message: String) -> InputError {
        let header = format!("[{kind}.{name}]");
        let quoted = format!("[{kind}.\"{name}\"]");
        let line = self
            .text
            .lines()
            .position(|l| {
                let l = l.trim();
                l.starts_with(&header) || l.starts_with(&quoted)
            })
            .map(|i| i + 1);
        InputError {
            line,
            object: Some(format!("{kind}.{name}")),
            message,
        }
    }

    fn declared(&self) -> Vec<(&'static str, &'a String)> {
        let r = self.raw;
        let mut out: Vec<(&'static str, &'a String)> = Vec::new();
        out.extend(r.space.keys().map(|k| ("space", k)));
        out.extend(r.trunc.keys().map(|k| ("trunc", k)));
        out.extend(r.algebra.keys().map(|k| ("algebra", k)));
        out.extend(r.element.keys().map(|k| ("element", k)));
        out.extend(r.tail.keys().map(|k| ("tail", k)));
        out.extend(r.frame.keys().map(|k| ("frame", k)));
        out.extend(r.real.keys().map(|k| ("real", k)));
        out.extend(r.surjection.keys().map(|k| ("surjection", k)));
        out.extend(r.sequence.keys().map(|k| ("sequence", k)));
        out.extend(r.kernel.keys().map(|k| ("kernel", k)));
        out
    }

    fn build(mut self) -> Result<Instance, InputError> {
        let declared = self.declared();
        let mut seen: BTreeMap<&String, &str> = BTreeMap::new();
        for (kind, name) in &declared {
            if let Some(first) = seen.insert(name, kind) {
                return Err(self.locate(kind, name, format!("name already used by {first}.{name}")));
            }
        }
        for (kind, name) in declared {
            self.resolve(kind, name).map_err(|e| match e {
                Resolve::Here(m) => self.locate(kind, name, m),
                Resolve::Located(e) => e,
            })?;
        }
        Ok(Instance { objects: self.objects })
    }

    /// Build `name` of `kind`, building what it references first.
    fn resolve(&mut self, kind: &str, name: &str) -> Result<Object, Resolve> {
        if let Some(o) = self.objects.get(name) {
            return Ok(o.clone());
        }
        if !self.in_progress.insert(name.to_string()) {
            return Err(Resolve::Here(format!("`{name}` refers to itself")));
        }
        let built = match kind {
            "space" => self.space(name),
            "trunc" => self.trunc(name),
            "algebra" => self.algebra(name),
            "element" => self.element(name),
            "tail" => self.tail(name),
            "frame" => self.frame(name),
            "real" => self.real(name),
            "surjection" => self.surjection(name),
            "sequence" => self.sequence(name),
            "kernel" => self.kernel(name),
            _ => unreachable!("kinds are fixed"),
        };
        self.in_progress.remove(name);
        let object = match built {
            Ok(o) => o,
            Err(Resolve::Here(m)) => return Err(Resolve::Located(self.locate(kind, name, m))),
            Err(e) => return Err(e),
        };
        self.objects.insert(name.to_string(), object.clone());
        Ok(object)
    }

    fn kind_of(&self, name: &str) -> Option<&'static str> {
        self.declared()
            .into_iter()
            .find(|(_, n)| n.as_str() == name)
            .map(|(k, _)| k)
    }

    fn reference(&mut self, name: &str, wanted: &[&str]) -> Result<Object, Resolve> {
        let Some(kind) = self.kind_of(name) else {
            return Err(Resolve::Here(format!("unresolved reference `{name}`")));
        };
        if !wanted.contains(&kind) {
            return Err(Resolve::Here(format!(
                "`{name}` is a {kind}, expected {}",
                wanted.join(" or ")
            )));
        }
        self.resolve(kind, name)
    }

    fn space_ref(&mut self, name: &str) -> Result<Arc<PointedBooleanSpace>, Resolve> {
        match self.reference(name, &["space"])? {
            Object::Space(s) => Ok(s),
            _ => unreachable!(),
        }
    }

    fn frame_ref(&mut self, name: &str) -> Result<Arc<PointedFiniteFrame>, Resolve> {
        match self.reference(name, &["frame"])? {
            Object::Frame(f) => Ok(f),
            _ => unreachable!(),
        }
    }

    fn trunc_ref(&mut self, name: &str) -> Result<SimpleTrunc, Resolve> {
        match self.reference(name, &["trunc"])? {
            Object::Trunc(t) => Ok(t),
            _ => unreachable!(),
        }
    }

    fn space(&mut self, name: &str) -> Result<Object, Resolve> {
        let raw = &self.raw.space[name];
        let space = PointedBooleanSpace::new(raw.points.clone(), &raw.star).or_else(err)?;
        Ok(Object::Space(Arc::new(space)))
    }

    fn trunc(&mut self, name: &str) -> Result<Object, Resolve> {
        let raw = &self.raw.trunc[name];
        let space = self.space_ref(&raw.space)?;
        let trunc = match &raw.components {
            None => SimpleTrunc::full(space),
            Some(sets) => {
                let sets = sets.iter().map(|s| site_set(&space, s)).collect::<Built<Vec<_>>>()?;
                SimpleTrunc::from_components(space, &sets).or_else(err)?
            }
        };
        Ok(Object::Trunc(trunc))
    }

    fn algebra(&mut self, name: &str) -> Result<Object, Resolve> {
        let raw = &self.raw.algebra[name];
        let algebra = match (&raw.space, &raw.sets, &raw.labels) {
            (Some(space), Some(sets), None) => {
                let space = self.space_ref(space)?;
                let sets = sets.iter().map(|s| site_set(&space, s)).collect::<Built<Vec<_>>>()?;
                GeneralizedBooleanAlgebra::from_set_family(&sets, |s| space.format_set(s)).or_else(err)?
            }
            (None, None, Some(labels)) => {
                let index = |l: &str| {
                    labels
                        .iter()
                        .position(|x| x == l)
                        .ok_or_else(|| format!("unknown algebra element `{l}`"))
                };
                let table = |t: &Option<Vec<Vec<String>>>, what: &str| -> Built<Vec<Vec<usize>>> {
                    let t = t.as_ref().ok_or_else(|| format!("missing `{what}` table"))?;
                    t.iter().map(|row| row.iter().map(|l| index(l)).collect()).collect()
                };
                let bottom = index(raw.bottom.as_deref().ok_or("missing `bottom`")?)?;
                let a = GeneralizedBooleanAlgebra::from_tables(
                    labels.clone(),
                    bottom,
                    table(&raw.join, "join")?,
                    table(&raw.meet, "meet")?,
                    table(&raw.diff, "diff")?,
                )
                .or_else(err)?;
                let report = trunclab::boolean::gba_validate(&a);
                if let Some(v) = report.violations.first() {
                    return Err(Resolve::Here(format!("not a generalized Boolean algebra: {v}")));
                }
                a
            }
            _ => {
                return Err(Resolve::Here(
                    "an algebra is given either by `space` and `sets` or by `labels` and tables".into(),
                ))
            }
        };
        Ok(Object::Algebra(algebra))
    }

    fn element(&mut self, name: &str) -> Result<Object, Resolve> {
        let raw = &self.raw.element[name];
        let (space, trunc) = match (&raw.space, &raw.trunc) {
            (Some(s), None) => (self.space_ref(s)?, None),
            (None, Some(t)) => {
                let t = self.trunc_ref(t)?;
                (t.space().clone(), Some(t))
            }
            _ => {
                return Err(Resolve::Here(
                    "an element names exactly one of `space` and `trunc`".into(),
                ))
            }
        };
        let values = raw.values.iter().map(RawScalar::rational).collect::<Built<Vec<_>>>()?;
        let g = Element::new(space, values).or_else(err)?;
        if let Some(t) = trunc {
            if !member(&t, &g).or_else(err)?.is_member() {
                return Err(Resolve::Here(format!("{g} is not in the trunc")));
            }
        }
        Ok(Object::Element(g))
    }

    fn tail(&mut self, name: &str) -> Result<Object, Resolve> {
        let raw = &self.raw.tail[name];
        let correction = raw
            .correction
            .iter()
            .map(|(n, v)| {
                let n: u64 = n.parse().map_err(|_| format!("`{n}` is not a point of ω+1"))?;
                Ok((n, v.rational()?))
            })
            .collect::<Built<Vec<_>>>()?;
        let tail = raw.tail.iter().map(RawScalar::rational).collect::<Built<Vec<_>>>()?;
        Ok(Object::Tail(Tail::new(correction, tail).or_else(err)?))
    }

    fn frame(&mut self, name: &str) -> Result<Object, Resolve> {
        let raw = &self.raw.frame[name];
        let shapes = [
            raw.elements.is_some(),
            raw.chain.is_some(),
            raw.boolean.is_some(),
            raw.product.is_some(),
        ];
        if shapes.iter().filter(|&&s| s).count() != 1 {
            return Err(Resolve::Here(
                "a frame is given by exactly one of `elements`, `chain`, `boolean`, `product`".into(),
            ));
        }
        if let Some((left, right)) = &raw.product {
            if raw.point.is_some() {
                return Err(Resolve::Here("a product takes its point from the left factor".into()));
            }
            let left = self.frame_ref(left)?;
            let right = self.frame_ref(right)?;
            return Ok(Object::Frame(Arc::new(PointedFiniteFrame::product(
                &left,
                right.frame(),
            ))));
        }
        let frame = if let Some(elements) = &raw.elements {
            let covers = raw.covers.clone().unwrap_or_default();
            FiniteFrame::from_covers(elements.clone(), &covers).or_else(err)?
        } else if let Some(n) = raw.chain {
            if !(2..=trunclab::frame::MAX_FRAME_SIZE).contains(&n) {
                return Err(Resolve::Here(format!(
                    "a chain needs 2 to {} elements",
                    trunclab::frame::MAX_FRAME_SIZE
                )));
            }
            FiniteFrame::chain(n)
        } else {
            let atoms = raw.boolean.as_ref().expect("checked above");
            if atoms.is_empty() || atoms.len() > 7 {
                return Err(Resolve::Here("a Boolean frame needs 1 to 7 atoms".into()));
            }
            let atoms: Vec<&str> = atoms.iter().map(String::as_str).collect();
            FiniteFrame::boolean(&atoms)
        };
        if raw.covers.is_some() && raw.elements.is_none() {
            return Err(Resolve::Here("`covers` goes with `elements`".into()));
        }
        let point = raw.point.as_deref().ok_or("missing `point`")?;
        Ok(Object::Frame(Arc::new(
            PointedFiniteFrame::by_label(frame, point).or_else(err)?,
        )))
    }

    fn real(&mut self, name: &str) -> Result<Object, Resolve> {
        let raw = &self.raw.real[name];
        let frame = self.frame_ref(&raw.frame)?;
        let cells = raw
            .cells
            .iter()
            .map(|(v, c)| Ok((v.extended()?, frame.frame().index_of(c).map_err(|e| e.to_string())?)))
            .collect::<Built<Vec<_>>>()?;
        let real = if raw.pointed.unwrap_or(true) {
            Real::new(frame, cells)
        } else {
            Real::new_unpointed(frame, cells)
        };
        Ok(Object::Real(real.or_else(err)?))
    }

    fn surjection(&mut self, name: &str) -> Result<Object, Resolve> {
        let raw = &self.raw.surjection[name];
        let source = self.frame_ref(&raw.source)?;
        let q = match (raw.kind.as_deref(), &raw.target, &raw.map) {
            (Some("booleanization"), None, None) => FrameSurjection::booleanization(source).or_else(err)?,
            (Some("identity"), None, None) => FrameSurjection::identity(source),
            (None, Some(target), Some(map)) => {
                let target = self.frame_ref(target)?;
                FrameSurjection::from_pairs(source, target, map).or_else(err)?
            }
            (Some(k), None, None) => return Err(Resolve::Here(format!("unknown surjection kind `{k}`"))),
            _ => {
                return Err(Resolve::Here(
                    "a surjection has either `kind` or both `target` and `map`".into(),
                ))
            }
        };
        Ok(Object::Surjection(q))
    }

    fn sequence(&mut self, name: &str) -> Result<Object, Resolve> {
        let raw = &self.raw.sequence[name];
        let items = raw
            .items
            .iter()
            .map(|n| self.reference(n, &["element", "tail", "real"]))
            .collect::<Result<Vec<_>, _>>()?;
        let seq = match items.first() {
            None => return Err(Resolve::Here("a sequence needs at least one item".into())),
            Some(Object::Element(_)) => Sequence::Simple(collect(&items, |o| match o {
                Object::Element(g) => Some(g.clone()),
                _ => None,
            })?),
            Some(Object::Tail(_)) => Sequence::Tail(collect(&items, |o| match o {
                Object::Tail(g) => Some(g.clone()),
                _ => None,
            })?),
            Some(Object::Real(_)) => Sequence::Real(collect(&items, |o| match o {
                Object::Real(g) => Some(g.clone()),
                _ => None,
            })?),
            Some(_) => unreachable!("references are checked"),
        };
        Ok(Object::Sequence(seq))
    }

    fn kernel(&mut self, name: &str) -> Result<Object, Resolve> {
        let raw = &self.raw.kernel[name];
        match (&raw.trunc, raw.degree) {
            (Some(t), None) => {
                if raw.shape.is_some() || raw.tail_from.is_some() || raw.within.is_some() || raw.zero_on.is_some() {
                    return Err(Resolve::Here("a finite kernel takes only `trunc` and `support`".into()));
                }
                let trunc = self.trunc_ref(t)?;
                let support = site_set(trunc.space(), raw.support.as_deref().unwrap_or_default())?;
                Ok(Object::Kernel(Kernel::Finite(FiniteKernel::new(trunc, support))))
            }
            (None, Some(d)) => {
                if raw.support.is_some() {
                    return Err(Resolve::Here("`support` belongs to finite kernels".into()));
                }
                let trunc = SeqTrunc::degree(d);
                let zero_on: BTreeSet<u64> = raw.zero_on.iter().flatten().copied().collect();
                let shape = match (raw.shape.as_deref(), raw.tail_from, &raw.within) {
                    (Some("finite-support"), None, None) => SeqShape::TailFrom(usize::MAX),
                    (Some("whole"), None, None) => SeqShape::TailFrom(1),
                    (Some("zero"), None, None) => SeqShape::Within(BTreeSet::new()),
                    (None, Some(t), None) => SeqShape::TailFrom(t),
                    (None, None, Some(w)) => SeqShape::Within(w.iter().copied().collect()),
                    _ => {
                        return Err(Resolve::Here(
                            "give exactly one of `shape`, `tail_from`, `within`".into(),
                        ))
                    }
                };
                Ok(Object::Kernel(Kernel::Seq(
                    SeqKernel::new(trunc, zero_on, shape).or_else(err)?,
                )))
            }
            _ => Err(Resolve::Here(
                "a kernel names exactly one of `trunc` and `degree`".into(),
            )),
        }
    }
}

enum Resolve {
    Here(String),
    Located(InputError),
}

impl From<String> for Resolve {
    fn from(m: String) -> Self {
        Resolve::Here(m)
    }
}

impl From<&str> for Resolve {
    fn from(m: &str) -> Self {
        Resolve::Here(m.to_string())
    }
}

fn collect<T>(items: &[Object], pick: impl Fn(&Object) -> Option<T>) -> Built<Vec<T>> {
    let kind = items[0].kind();
    items
        .iter()
        .map(|o| pick(o).ok_or_else(|| format!("sequence mixes a {kind} with a {}", o.kind())))
        .collect()
}

fn site_set(space: &PointedBooleanSpace, labels: &[String]) -> Built<SiteSet> {
    let mut set = SiteSet::EMPTY;
    for l in labels {
        if l == space.star_label() {
            return Err(format!("`{l}` is the designated point"));
        }
        let site = space
            .site_of_label(l)
            .ok_or_else(|| format!("`{l}` is not a point of the space"))?;
        set.insert(site);
    }
    Ok(set)
}

fn set_labels(space: &PointedBooleanSpace, set: SiteSet) -> Vec<String> {
    set.iter().map(|s| space.site_label(s).to_string()).collect()
}

/// Write the instance back out. Spaces, frames and truncs that objects
/// depend on are emitted under their own names, or under derived names
/// when they were built implicitly.
pub fn to_raw(instance: &Instance) -> RawInstance {
    let mut raw = RawInstance::default();
    let mut spaces: Vec<(String, Arc<PointedBooleanSpace>)> = Vec::new();
    let mut frames: Vec<(String, Arc<PointedFiniteFrame>)> = Vec::new();
    for (name, o) in instance.objects() {
        match o {
            Object::Space(s) => spaces.push((name.clone(), s.clone())),
            Object::Frame(f) => frames.push((name.clone(), f.clone())),
            _ => {}
        }
    }
    let mut space_name = |s: &Arc<PointedBooleanSpace>, hint: &str, raw: &mut RawInstance| -> String {
        if let Some((n, _)) = spaces.iter().find(|(_, t)| t == s) {
            return n.clone();
        }
        let n = format!("{hint}-space");
        spaces.push((n.clone(), s.clone()));
        raw.space.insert(n.clone(), raw_space(s));
        n
    };
    let mut frame_name = |f: &Arc<PointedFiniteFrame>, hint: &str, raw: &mut RawInstance| -> String {
        if let Some((n, _)) = frames.iter().find(|(_, g)| g == f) {
            return n.clone();
        }
        let n = format!("{hint}-frame");
        frames.push((n.clone(), f.clone()));
        raw.frame.insert(n.clone(), raw_frame(f));
        n
    };
    for (name, o) in instance.objects() {
        match o {
            Object::Space(s) => {
                raw.space.insert(name.clone(), raw_space(s));
            }
            Object::Trunc(t) => {
                let space = space_name(t.space(), name, &mut raw);
                raw.trunc.insert(name.clone(), raw_trunc(t, space));
            }
            Object::Algebra(a) => {
                raw.algebra.insert(name.clone(), raw_algebra(a));
            }
            Object::Element(g) => {
                let space = space_name(g.space(), name, &mut raw);
                raw.element.insert(
                    name.clone(),
                    RawElement {
                        space: Some(space),
                        trunc: None,
                        values: g.values().iter().map(RawScalar::from_rational).collect(),
                    },
                );
            }
            Object::Tail(t) => {
                raw.tail.insert(name.clone(), raw_tail(t));
            }
            Object::Frame(f) => {
                raw.frame.insert(name.clone(), raw_frame(f));
            }
            Object::Real(r) => {
                let frame = frame_name(r.frame(), name, &mut raw);
                raw.real.insert(name.clone(), raw_real(r, frame));
            }
            Object::Surjection(q) => {
                let source = frame_name(q.source(), &format!("{name}-source"), &mut raw);
                let target = frame_name(q.target(), &format!("{name}-target"), &mut raw);
                let (s, t) = (q.source().frame(), q.target().frame());
                let map = s
                    .elements()
                    .map(|x| (s.label(x).to_string(), t.label(q.apply(x)).to_string()))
                    .collect();
                raw.surjection.insert(
                    name.clone(),
                    RawSurjection {
                        source,
                        target: Some(target),
                        map: Some(map),
                        kind: None,
                    },
                );
            }
            Object::Sequence(seq) => {
                let items = (0..seq.len())
                    .map(|i| {
                        let item = format!("{name}-{}", i + 1);
                        match seq {
                            Sequence::Simple(s) => {
                                let space = space_name(s[i].space(), name, &mut raw);
                                raw.element.insert(
                                    item.clone(),
                                    RawElement {
                                        space: Some(space),
                                        trunc: None,
                                        values: s[i].values().iter().map(RawScalar::from_rational).collect(),
                                    },
                                );
                            }
                            Sequence::Tail(s) => {
                                raw.tail.insert(item.clone(), raw_tail(&s[i]));
                            }
                            Sequence::Real(s) => {
                                let frame = frame_name(s[i].frame(), name, &mut raw);
                                raw.real.insert(item.clone(), raw_real(&s[i], frame));
                            }
                        }
                        item
                    })
                    .collect();
                raw.sequence.insert(name.clone(), RawSequence { items });
            }
            Object::Kernel(Kernel::Finite(k)) => {
                let trunc_name = format!("{name}-trunc");
                let space = space_name(k.trunc().space(), name, &mut raw);
                raw.trunc.insert(trunc_name.clone(), raw_trunc(k.trunc(), space));
                raw.kernel.insert(
                    name.clone(),
                    RawKernel {
                        trunc: Some(trunc_name),
                        support: Some(set_labels(k.trunc().space(), k.support())),
                        ..RawKernel::default()
                    },
                );
            }
            Object::Kernel(Kernel::Seq(k)) => {
                let (tail_from, within) = match k.shape() {
                    SeqShape::TailFrom(t) => (Some(*t), None),
                    SeqShape::Within(w) => (None, Some(w.iter().copied().collect())),
                };
                raw.kernel.insert(
                    name.clone(),
                    RawKernel {
                        degree: Some(k.trunc().max_degree()),
                        tail_from,
                        within,
                        zero_on: (!k.zero_on().is_empty()).then(|| k.zero_on().iter().copied().collect()),
                        ..RawKernel::default()
                    },
                );
            }
        }
    }
    raw
}

fn raw_space(s: &PointedBooleanSpace) -> RawSpace {
    RawSpace {
        points: s.points().to_vec(),
        star: s.star_label().to_string(),
    }
}

fn raw_trunc(t: &SimpleTrunc, space: String) -> RawTrunc {
    let components = t
        .components()
        .map(|cs| cs.into_iter().map(|c| set_labels(t.space(), c)).collect())
        .ok();
    RawTrunc { space, components }
}

fn raw_algebra(a: &GeneralizedBooleanAlgebra) -> RawAlgebra {
    let labels = a.labels().to_vec();
    let n = labels.len();
    let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<String>> {
        (0..n)
            .map(|x| (0..n).map(|y| labels[f(x, y)].clone()).collect())
            .collect()
    };
    RawAlgebra {
        join: Some(table(&|x, y| a.join(x, y))),
        meet: Some(table(&|x, y| a.meet(x, y))),
        diff: Some(table(&|x, y| a.diff(x, y))),
        bottom: Some(labels[a.bottom()].clone()),
        labels: Some(labels.clone()),
        ..RawAlgebra::default()
    }
}

fn raw_tail(t: &Tail) -> RawTail {
    RawTail {
        correction: t
            .correction()
            .iter()
            .map(|(n, v)| (n.to_string(), RawScalar::from_rational(v)))
            .collect(),
        tail: t.tail().iter().map(RawScalar::from_rational).collect(),
    }
}

fn raw_frame(f: &PointedFiniteFrame) -> RawFrame {
    let frame = f.frame();
    let covers = frame
        .elements()
        .flat_map(|x| frame.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| x != y && frame.leq(x, y))
        .map(|(x, y)| (frame.label(x).to_string(), frame.label(y).to_string()))
        .collect();
    RawFrame {
        elements: Some(frame.labels().to_vec()),
        covers: Some(covers),
        point: Some(frame.label(f.point_element()).to_string()),
        ..RawFrame::default()
    }
}

fn raw_real(r: &Real, frame: String) -> RawReal {
    let f = r.frame().frame();
    RawReal {
        frame,
        cells: r
            .cells()
            .iter()
            .map(|(v, c)| (RawScalar::from_extended(v), f.label(*c).to_string()))
            .collect(),
        pointed: (!r.is_pointed()).then_some(false),
    }
}

pub fn to_toml(instance: &Instance) -> String {
    toml::to_string(&to_raw(instance)).expect("raw instances serialize")
}

/// Human-readable rendering of an object.
pub fn describe(o: &Object) -> String {
    match o {
        Object::Space(s) => format!("{{{}}} with star {}", s.points().join(","), s.star_label()),
        Object::Trunc(t) => {
            let atoms: Vec<String> = t.atoms().iter().map(|a| t.space().format_set(*a)).collect();
            format!("trunc with atoms [{}]", atoms.join(", "))
        }
        Object::Algebra(a) => format!("generalized Boolean algebra with {} elements", a.len()),
        Object::Element(g) => g.to_string(),
        Object::Tail(t) => t.to_string(),
        Object::Frame(f) => format!(
            "frame of {} elements pointed at {}",
            f.frame().len(),
            f.frame().label(f.point_element())
        ),
        Object::Real(r) => r.to_string(),
        Object::Surjection(q) => format!(
            "surjection from {} to {} elements",
            q.source().frame().len(),
            q.target().frame().len()
        ),
        Object::Sequence(s) => format!("sequence of {} items", s.len()),
        Object::Kernel(Kernel::Finite(k)) => format!("support kernel on {}", k.trunc().space().format_set(k.support())),
        Object::Kernel(Kernel::Seq(k)) => k.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X3: &str = r#"
[space.X3]
points = ["*", "1", "2", "3"]
star = "*"

[element.g]
space = "X3"
values = [5, 2, "1/3"]
"#;

    #[test]
    fn parses_a_space_and_an_element() {
        let inst = parse_instance(X3).unwrap();
        assert_eq!(inst.count("space"), 1);
        assert_eq!(inst.count("element"), 1);
        let Object::Element(g) = inst.get("g").unwrap() else {
            panic!()
        };
        assert_eq!(g.to_string(), "(5,2,1/3)");
    }

    #[test]
    fn star_must_be_a_point() {
        let e = parse_instance("[space.X]\npoints = [\"1\", \"2\"]\nstar = \"*\"\n").unwrap_err();
        assert_eq!(e.line, Some(1));
        assert_eq!(e.object.as_deref(), Some("space.X"));
        assert!(e.message.contains("star not in points"), "{e}");
    }

    #[test]
    fn non_closed_family_names_the_missing_set() {
        let text = format!("{X3}\n[trunc.T]\nspace = \"X3\"\ncomponents = [[], [\"1\", \"2\"], [\"1\"]]\n");
        let e = parse_instance(&text).unwrap_err();
        assert!(e.message.contains("{1,2} ∖ {1} = {2} is missing"), "{e}");
        assert_eq!(e.line, Some(10));
    }

    #[test]
    fn unresolved_references_are_reported() {
        let e = parse_instance("[element.g]\nspace = \"Y\"\nvalues = [1]\n").unwrap_err();
        assert!(e.message.contains("unresolved reference `Y`"), "{e}");
        let e = parse_instance(&format!("{X3}\n[tail.g]\ntail = [1]\n")).unwrap_err();
        assert!(e.message.contains("already used"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let e = parse_instance("[space.X]\npoints = [\"1\"\n").unwrap_err();
        assert!(e.line.is_some());
    }
}
