//! The trunc operation vocabulary shared by all three models.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One of the trunc operations. `Truncate`, `TMinus` and `TruncN` are only
/// defined on the positive cone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TruncOp<S> {
    Add,
    Sub,
    Negate,
    Scale(S),
    Meet,
    Join,
    /// `g ↦ ḡ = g ∧ 1`.
    Truncate,
    /// `g ↦ g ⊖ r = (g − r)⁺`; `r = 0` is the identity.
    TMinus(S),
    /// `g ↦ g ∧ n`.
    TruncN(u64),
}

impl<S: Scalar> TruncOp<S> {
    pub fn arity(&self) -> usize {
        match self {
            TruncOp::Add | TruncOp::Sub | TruncOp::Meet | TruncOp::Join => 2,
            _ => 1,
        }
    }

    pub fn requires_nonnegative(&self) -> bool {
        matches!(self, TruncOp::Truncate | TruncOp::TMinus(_) | TruncOp::TruncN(_))
    }

    /// The real function this operation interprets to.
    pub fn eval(&self, args: &[S]) -> S {
        match self {
            TruncOp::Add => args[0].clone() + args[1].clone(),
            TruncOp::Sub => args[0].clone() - args[1].clone(),
            TruncOp::Negate => -args[0].clone(),
            TruncOp::Scale(q) => q.clone() * args[0].clone(),
            TruncOp::Meet => S::min_of(&args[0], &args[1]),
            TruncOp::Join => S::max_of(&args[0], &args[1]),
            TruncOp::Truncate => S::min_of(&args[0], &S::one()),
            TruncOp::TMinus(r) => {
                let d = args[0].clone() - r.clone();
                S::max_of(&d, &S::zero())
            }
            TruncOp::TruncN(n) => S::min_of(&args[0], &S::from_uint(*n)),
        }
    }

    pub fn check_parameters(&self) -> Result<()> {
        match self {
            TruncOp::TMinus(r) if r.is_negative() => Err(Error::Precondition(format!("tminus needs r >= 0, got {r}"))),
            _ => Ok(()),
        }
    }

    /// All tags with representative parameters, in a fixed order.
    pub fn catalogue(scale: S, shift: S, cap: u64) -> Vec<TruncOp<S>> {
        vec![
            TruncOp::Add,
            TruncOp::Sub,
            TruncOp::Negate,
            TruncOp::Scale(scale),
            TruncOp::Meet,
            TruncOp::Join,
            TruncOp::Truncate,
            TruncOp::TMinus(shift),
            TruncOp::TruncN(cap),
        ]
    }
}

impl<S: fmt::Display> fmt::Display for TruncOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncOp::Add => write!(f, "add"),
            TruncOp::Sub => write!(f, "sub"),
            TruncOp::Negate => write!(f, "negate"),
            TruncOp::Scale(q) => write!(f, "scale({q})"),
            TruncOp::Meet => write!(f, "meet"),
            TruncOp::Join => write!(f, "join"),
            TruncOp::Truncate => write!(f, "truncate"),
            TruncOp::TMinus(r) => write!(f, "tminus({r})"),
            TruncOp::TruncN(n) => write!(f, "truncN({n})"),
        }
    }
}

impl<S: Scalar> std::str::FromStr for TruncOp<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Structure(format!("unknown operation tag `{s}`"));
        let arg = |name: &str| -> Option<&str> {
            s.strip_prefix(name)?
                .strip_prefix('(')?
                .strip_suffix(')')
                .map(str::trim)
        };
        let op = match s {
            "add" | "+" => TruncOp::Add,
            "sub" | "-" => TruncOp::Sub,
            "negate" | "neg" => TruncOp::Negate,
            "meet" => TruncOp::Meet,
            "join" => TruncOp::Join,
            "truncate" => TruncOp::Truncate,
            _ => {
                if let Some(a) = arg("scale") {
                    TruncOp::Scale(a.parse().map_err(|_| bad())?)
                } else if let Some(a) = arg("tminus") {
                    TruncOp::TMinus(a.parse().map_err(|_| bad())?)
                } else if let Some(a) = arg("truncN") {
                    TruncOp::TruncN(a.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        };
        op.check_parameters()?;
        Ok(op)
    }
}

/// An element of a concrete trunc model.
///
/// Binary operations fail with [`Error::Mismatch`] when the operands live on
/// different carriers; the positive-cone operations fail with
/// [`Error::Negative`] on a negative operand.
pub trait TruncElement: Clone + PartialEq + fmt::Debug {
    type Scalar: Scalar;

    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Result<Self>;
    fn negate(&self) -> Self;
    fn scale(&self, q: &Self::Scalar) -> Self;
    fn meet(&self, other: &Self) -> Result<Self>;
    fn join(&self, other: &Self) -> Result<Self>;
    fn truncate(&self) -> Result<Self>;
    fn tminus(&self, r: &Self::Scalar) -> Result<Self>;
    fn trunc_n(&self, n: u64) -> Result<Self>;

    fn is_nonnegative(&self) -> bool;
    fn is_zero(&self) -> bool;

    /// Supremum of the absolute values, which exists in every model here.
    fn sup_norm(&self) -> Self::Scalar;

    fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.negate())
    }

    fn leq(&self, other: &Self) -> Result<bool> {
        Ok(self.meet(other)? == *self)
    }

    fn positive_part(&self) -> Self {
        self.join(&self.zero_like()).expect("zero shares the carrier")
    }

    fn abs(&self) -> Self {
        self.join(&self.negate()).expect("negation shares the carrier")
    }
}

/// Apply a tagged operation to a list of operands.
pub fn apply_op<T: TruncElement>(op: &TruncOp<T::Scalar>, operands: &[T]) -> Result<T> {
    op.check_parameters()?;
    if operands.len() != op.arity() {
        return Err(Error::Structure(format!(
            "{op} takes {} operand(s), got {}",
            op.arity(),
            operands.len()
        )));
    }
    let a = &operands[0];
    match op {
        TruncOp::Add => a.add(&operands[1]),
        TruncOp::Sub => a.sub(&operands[1]),
        TruncOp::Negate => Ok(a.negate()),
        TruncOp::Scale(q) => Ok(a.scale(q)),
        TruncOp::Meet => a.meet(&operands[1]),
        TruncOp::Join => a.join(&operands[1]),
        TruncOp::Truncate => a.truncate(),
        TruncOp::TMinus(r) => a.tminus(r),
        TruncOp::TruncN(n) => a.trunc_n(*n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    #[test]
    fn scalar_interpretation() {
        assert_eq!(TruncOp::Truncate.eval(&[q(2, 1)]), q(1, 1));
        assert_eq!(TruncOp::TMinus(q(1, 1)).eval(&[q(1, 2)]), q(0, 1));
        assert_eq!(TruncOp::TMinus(q(0, 1)).eval(&[q(1, 2)]), q(1, 2));
        assert_eq!(TruncOp::<Rational>::TruncN(2).eval(&[q(5, 1)]), q(2, 1));
        assert_eq!(TruncOp::<Rational>::Sub.eval(&[q(1, 1), q(3, 1)]), q(-2, 1));
    }

    #[test]
    fn tags_parse_and_print() {
        for text in [
            "add",
            "sub",
            "negate",
            "scale(3/2)",
            "meet",
            "join",
            "truncate",
            "tminus(1/3)",
            "truncN(4)",
        ] {
            let op: TruncOp<Rational> = text.parse().unwrap();
            assert_eq!(op.to_string(), text);
        }
        assert!("tminus(-1)".parse::<TruncOp<Rational>>().is_err());
        assert!("times".parse::<TruncOp<Rational>>().is_err());
    }
}
