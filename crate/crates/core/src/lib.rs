//! Exact computation with truncated archimedean vector lattices.
//!
//! Three concrete models are provided:
//!
//! * [`trunc`]: functions on a finite pointed space ([`SimpleElement`]),
//! * [`seqspace`]: functions on the convergent sequence ω+1 with a
//!   polynomial-in-1/n tail ([`TailElement`]),
//! * [`frame`]: step-valued frame reals on a finite pointed frame
//!   ([`FrameReal`]).
//!
//! All three implement [`TruncElement`], so the laws in [`laws`] run against
//! each of them. [`boolean`] holds the finite (generalized, idealized) Boolean
//! algebras and their dualities, and [`kernel`] the truncation-kernel tests.
//!
//! The models are generic over an exact [`Scalar`]; [`Rational`] is the
//! default instance.

pub mod boolean;
pub mod error;
pub mod frame;
pub mod kernel;
pub mod laws;
pub mod ops;
pub mod sample;
pub mod scalar;
pub mod seqspace;
pub mod space;
pub mod trunc;

use num_bigint::BigInt;
use num_rational::Ratio;

pub use error::{Error, Result};
pub use frame::{FiniteFrame, FrameReal, PointedFiniteFrame};
pub use ops::{apply_op, TruncElement, TruncOp};
pub use scalar::Scalar;
pub use seqspace::TailElement;
pub use space::{PointedBooleanSpace, SiteSet};
pub use trunc::{SimpleElement, SimpleTrunc};

/// Arbitrary precision rationals, the default scalar.
pub type Rational = Ratio<BigInt>;

/// Machine-word rationals; faster, but panics on overflow.
pub type SmallRational = Ratio<i64>;

/// A simple element over [`Rational`].
pub type Element = SimpleElement<Rational>;

/// A tail element over [`Rational`].
pub type Tail = TailElement<Rational>;

/// A frame real over [`Rational`].
pub type Real = FrameReal<Rational>;
