//! The worked example on ω+1: the trunc generated by `g₀ = 1/n` and the
//! finitely supported functions, with the kernel of finitely supported
//! functions.

use num_traits::Zero;

use crate::error::Result;
use crate::kernel::{kernel_conditions, pointwise_closed, ConditionVerdict, KernelReport, PointwiseVerdict, SeqKernel};
use crate::ops::TruncElement;
use crate::trunc::hyper::{hyperarchimedean, HyperVerdict};
use crate::Rational;

use super::{bounded_away_from_zero, simple_part_member, SeqTrunc, TailElement};

type Tail = TailElement<Rational>;

/// Every part of the example, as computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ex1Report {
    /// `g₀(1), …, g₀(6)`.
    pub g0_values: Vec<Rational>,
    /// (a) The clearance of `g₀`; `None` as its values accumulate at 0.
    pub g0_clearance: Option<Rational>,
    /// (b) `g₀` has finite range, which would make the trunc simple.
    pub g0_simple: bool,
    /// (c) The trunc is hyperarchimedean.
    pub hyper: HyperVerdict<Tail>,
    /// (d) Conditions (1)-(3) for the kernel of finitely supported functions.
    pub kernel: KernelReport<Tail>,
    /// `g₀ ⊖ 1/3`.
    pub g0_tminus_third: Tail,
    /// (e) The kernel is not pointwise closed.
    pub pointwise: PointwiseVerdict<Tail>,
}

impl Ex1Report {
    /// All parts came out as expected.
    pub fn holds(&self) -> bool {
        let third = Tail::finite([
            (1, Rational::new(2.into(), 3.into())),
            (2, Rational::new(1.into(), 6.into())),
        ]);
        self.hyper.is_accepted()
            && self.g0_clearance.is_none()
            && !self.g0_simple
            && self.kernel.conditions[0].passed()
            && self.kernel.conditions[1].passed()
            && self.kernel.conditions[2]
                == ConditionVerdict::Fail {
                    witness: vec![Tail::g0()],
                }
            && third.is_ok_and(|t| t == self.g0_tminus_third)
            && !self.pointwise.is_closed()
    }
}

/// Run every part with `budget` samples per sampled check.
pub fn ex1_report(budget: usize, seed: u64) -> Result<Ex1Report> {
    let trunc = SeqTrunc::degree(1);
    let g0 = Tail::g0();
    let kernel = SeqKernel::finite_support(trunc);
    Ok(Ex1Report {
        g0_values: g0.values_up_to(6),
        g0_clearance: bounded_away_from_zero(&g0)?.filter(|c| !c.is_zero()),
        g0_simple: simple_part_member(&g0),
        hyper: hyperarchimedean(&trunc, budget, seed)?,
        kernel: kernel_conditions(&kernel, budget, seed)?,
        g0_tminus_third: g0.tminus(&Rational::new(1.into(), 3.into()))?,
        pointwise: pointwise_closed(&kernel, budget, seed)?,
    })
}
