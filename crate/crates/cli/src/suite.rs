//! The seeded property suites. Case `i` of every suite draws from its own
//! generator seeded by `(seed, suite, i)`, so results do not depend on
//! which other suites run.

use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Map, Value};

use trunclab::boolean::{equivalence_witness, gba_isomorphism, gba_validate, iba_forget, idealize};
use trunclab::frame::{
    case_tables_check, dense_quotients, drop_real, e0q_exhaustive, e0q_member, oracle_check, random_frame, random_real,
    DropOutcome,
};
use trunclab::kernel::{kernel_conditions, FiniteKernel};
use trunclab::laws::check_all;
use trunclab::sample::{self, SampleRng};
use trunclab::seqspace::SeqTrunc;
use trunclab::trunc::{
    dini_check, element_from_good, good_from_element, hyperarchimedean, normal_form, truncation_sequence,
    truncation_sequence_check,
};
use trunclab::{Element, PointedBooleanSpace, Rational, Real, Scalar, SimpleTrunc, TruncElement, TruncOp};

use crate::report::Report;

pub const DEFAULT_CASES: usize = 200;

/// One case: `Ok(())` or a description of the counterexample.
type Case = Result<(), String>;

struct Suite {
    name: &'static str,
    run: fn(&mut SampleRng, usize) -> Case,
}

const SUITES: [Suite; 15] = [
    Suite {
        name: "laws-simple",
        run: laws_simple,
    },
    Suite {
        name: "laws-tail",
        run: laws_tail,
    },
    Suite {
        name: "laws-frame",
        run: laws_frame,
    },
    Suite {
        name: "normal-form",
        run: normal_forms,
    },
    Suite {
        name: "good-sequences",
        run: good_sequences,
    },
    Suite {
        name: "truncation-sequences",
        run: truncation_sequences,
    },
    Suite {
        name: "set-families",
        run: set_families,
    },
    Suite {
        name: "equivalence",
        run: equivalences,
    },
    Suite {
        name: "hyperarchimedean",
        run: hyper,
    },
    Suite {
        name: "oracle",
        run: oracle,
    },
    Suite {
        name: "case-tables",
        run: case_tables,
    },
    Suite {
        name: "drop",
        run: drops,
    },
    Suite { name: "e0q", run: e0q },
    Suite {
        name: "dini",
        run: dini,
    },
    Suite {
        name: "support-kernels",
        run: support_kernels,
    },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

fn case_seed(seed: u64, suite: usize, case: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((suite as u64) << 32)
        .wrapping_add(case as u64)
}

/// Run every suite for `cases` cases, recording one check per suite.
pub fn run(r: &mut Report, seed: u64, cases: usize) {
    let mut counts = Map::new();
    for (index, suite) in SUITES.iter().enumerate() {
        let mut failures = 0usize;
        let mut first = None;
        for case in 0..cases {
            let mut rng = sample::rng(case_seed(seed, index, case));
            if let Err(w) = (suite.run)(&mut rng, case) {
                failures += 1;
                first.get_or_insert_with(|| format!("case {case}: {w}"));
            }
        }
        r.line(format!(
            "{:<22} {:>5} cases {:>5} failures",
            suite.name, cases, failures
        ));
        counts.insert(suite.name.to_string(), json!({"cases": cases, "failures": failures}));
        r.check(suite.name, failures == 0, first);
    }
    r.set("seed", seed);
    r.set("cases", cases);
    r.set("suites", Value::Object(counts));
}

fn ensure(ok: bool, witness: impl FnOnce() -> String) -> Case {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

fn text(e: trunclab::Error) -> String {
    e.to_string()
}

fn shift(rng: &mut SampleRng) -> Rational {
    Rational::from_frac(rng.random_range(1..12), rng.random_range(1..5))
}

fn laws<T: TruncElement<Scalar = Rational> + std::fmt::Display>(g: &T, h: &T, rng: &mut SampleRng) -> Case {
    let n = rng.random_range(0..6);
    let r = shift(rng);
    let failed = check_all(g, h, n, &r).map_err(text)?;
    ensure(failed.is_empty(), || {
        let names: Vec<&str> = failed.iter().map(|l| l.name()).collect();
        format!("g = {g}, h = {h}, n = {n}, r = {r}: {}", names.join(", "))
    })
}

fn simple_pair(rng: &mut SampleRng) -> (Element, Element) {
    let space = sample::space(rng, 6);
    (
        sample::simple_element(rng, &space, true),
        sample::simple_element(rng, &space, true),
    )
}

fn laws_simple(rng: &mut SampleRng, _: usize) -> Case {
    let (g, h) = simple_pair(rng);
    laws(&g, &h, rng)
}

fn laws_tail(rng: &mut SampleRng, _: usize) -> Case {
    let t = SeqTrunc::degree(3);
    let (g, h) = (t.random_element(rng).abs(), t.random_element(rng).abs());
    laws(&g, &h, rng)
}

fn laws_frame(rng: &mut SampleRng, _: usize) -> Case {
    let (_, frame) = random_frame(rng, 20);
    let (g, h): (Real, Real) = (random_real(rng, &frame, true), random_real(rng, &frame, true));
    laws(&g, &h, rng)
}

fn normal_forms(rng: &mut SampleRng, _: usize) -> Case {
    let space = sample::space(rng, 6);
    let g: Element = sample::simple_element(rng, &space, false);
    let nf = normal_form(&g);
    ensure(nf.to_element(space) == g, || {
        format!("normal form of {g} does not sum back")
    })?;
    let mut coeffs: Vec<&Rational> = nf.terms.iter().map(|(c, _)| c).collect();
    coeffs.sort();
    coeffs.dedup();
    let disjoint = nf
        .terms
        .iter()
        .enumerate()
        .all(|(i, (_, u))| nf.terms[i + 1..].iter().all(|(_, v)| u.intersection(*v).is_empty()));
    ensure(coeffs.len() == nf.terms.len() && disjoint, || {
        format!("normal form of {g} is not reduced")
    })
}

fn good_sequences(rng: &mut SampleRng, _: usize) -> Case {
    let (g, _) = simple_pair(rng);
    let m = g.sup_norm().ceil_u64() + rng.random_range(0..3);
    let good = good_from_element(&g, m).map_err(text)?;
    let capped = g.trunc_n(m).map_err(text)?;
    ensure(element_from_good(&good) == capped, || {
        format!("good sequence of {g} at m = {m}")
    })
}

fn truncation_sequences(rng: &mut SampleRng, _: usize) -> Case {
    let (g, _) = simple_pair(rng);
    let seq = truncation_sequence(&g).map_err(text)?;
    let back = truncation_sequence_check(&seq).map_err(text)?;
    ensure(back.element == g, || {
        format!("truncation sequence of {g} recovers {}", back.element)
    })
}

fn set_families(rng: &mut SampleRng, _: usize) -> Case {
    let n_sites = rng.random_range(1..=6);
    let family = sample::set_family(rng, n_sites, 4);
    let space = PointedBooleanSpace::standard(n_sites);
    let a = trunclab::boolean::GeneralizedBooleanAlgebra::from_set_family(&family, |s| space.format_set(s))
        .map_err(text)?;
    if let Some(v) = gba_validate(&a).violations.first() {
        return Err(format!("family of {} sets: {v}", family.len()));
    }
    let back = iba_forget(&idealize(&a));
    ensure(gba_isomorphism(&a, &back).is_some(), || {
        format!("idealize then forget changes a {}-element algebra", a.len())
    })
}

fn equivalences(_: &mut SampleRng, case: usize) -> Case {
    let x = PointedBooleanSpace::standard(1 + case % 4);
    let report = equivalence_witness(&x, 64);
    ensure(report.all_verified(), || {
        format!("{} sites: {:?}", x.n_sites(), report.round_trips)
    })
}

fn hyper(rng: &mut SampleRng, case: usize) -> Case {
    let space = sample::space(rng, 5);
    let family = sample::set_family(rng, space.n_sites(), 3);
    let trunc = SimpleTrunc::from_components(space, &family).map_err(text)?;
    match hyperarchimedean(&trunc, 4, case as u64).map_err(text)? {
        trunclab::trunc::HyperVerdict::Accepted { .. } => Ok(()),
        trunclab::trunc::HyperVerdict::Refuted { f, g, reason } => Err(format!("f = {f}, g = {g}: {reason}")),
    }
}

fn oracle(rng: &mut SampleRng, case: usize) -> Case {
    let (_, frame) = random_frame(rng, 20);
    let ops = TruncOp::catalogue(shift(rng), shift(rng), rng.random_range(0..4));
    let op = &ops[case % ops.len()];
    let nonneg = op.requires_nonnegative();
    let fs: Vec<Real> = (0..op.arity()).map(|_| random_real(rng, &frame, nonneg)).collect();
    let report = oracle_check(op, &fs).map_err(text)?;
    ensure(report.mismatch.is_none(), || {
        let shown: Vec<String> = fs.iter().map(ToString::to_string).collect();
        format!("{op} on {}", shown.join(", "))
    })
}

fn case_tables(rng: &mut SampleRng, _: usize) -> Case {
    let (_, frame) = random_frame(rng, 20);
    let g: Real = random_real(rng, &frame, true);
    let r = Rational::from_frac(rng.random_range(-4..16), rng.random_range(1..5));
    ensure(case_tables_check(&g, &r).map_err(text)?, || format!("g = {g}, r = {r}"))
}

fn random_quotient(rng: &mut SampleRng, max_size: usize) -> Option<trunclab::frame::FrameSurjection> {
    let (df, _) = random_frame(rng, max_size);
    let p = rng.random_range(0..df.poset.len());
    let mut qs = dense_quotients(&df, p);
    if qs.is_empty() {
        return None;
    }
    let i = rng.random_range(0..qs.len());
    Some(qs.swap_remove(i))
}

fn drops(rng: &mut SampleRng, _: usize) -> Case {
    let Some(q) = random_quotient(rng, 20) else {
        return Ok(());
    };
    let lifted: Real = random_real(rng, q.source(), false);
    // real-valued lifts always drop; drop_real verifies the square itself
    match drop_real(&q, &lifted).map_err(text)? {
        DropOutcome::Dropped { .. } => Ok(()),
        DropOutcome::Refused { .. } => Err(format!("real {lifted} refused")),
    }
}

fn e0q(rng: &mut SampleRng, _: usize) -> Case {
    let Some(q) = random_quotient(rng, 12) else {
        return Ok(());
    };
    let h: Real = random_real(rng, q.target(), false);
    let member = e0q_member(&q, &h).map_err(text)?.is_member();
    let (found, _) = e0q_exhaustive(&q, &h).map_err(text)?;
    ensure(member == found.is_some(), || {
        format!("h = {h}: member {member}, search {}", found.is_some())
    })
}

fn dini(rng: &mut SampleRng, _: usize) -> Case {
    let (g, _) = simple_pair(rng);
    let step = Rational::from_frac(1, rng.random_range(1..5));
    let steps = (g.sup_norm() / step.clone()).ceil_u64() + 1;
    let seq: Vec<Element> = (0..=steps)
        .map(|k| g.tminus(&(step.clone() * Rational::from_uint(k))))
        .collect::<Result<_, _>>()
        .map_err(text)?;
    let rep = dini_check(&seq).map_err(text)?;
    ensure(rep.uniform(), || format!("{g} ⊖ k·{step} does not reach 0"))?;
    let eps = step.clone();
    let m = rep.index(&eps);
    ensure(
        m.is_some_and(|m| seq[m - 1].sup_norm() < eps && (m == 1 || seq[m - 2].sup_norm() >= eps)),
        || format!("index at ε = {eps} is {m:?}"),
    )
}

fn support_kernels(rng: &mut SampleRng, case: usize) -> Case {
    let space = sample::space(rng, 5);
    let family = sample::set_family(rng, space.n_sites(), 3);
    let trunc = SimpleTrunc::from_components(Arc::clone(&space), &family).map_err(text)?;
    let support = trunclab::SiteSet::from_sites((0..space.n_sites()).filter(|_| rng.random_bool(0.5)));
    let k = FiniteKernel::new(trunc, support);
    let rep = kernel_conditions(&k, 4, case as u64).map_err(text)?;
    ensure(rep.all_pass(), || {
        format!("support {} fails: {:?}", space.format_set(support), rep.conditions)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_a_short_run() {
        let mut r = Report::new("suite");
        run(&mut r, 3, 8);
        assert!(r.passed(), "{}", r.human());
        assert_eq!(r.checks.len(), SUITES.len());
    }

    #[test]
    fn suites_are_deterministic() {
        let mut a = Report::new("suite");
        let mut b = Report::new("suite");
        run(&mut a, 11, 4);
        run(&mut b, 11, 4);
        assert_eq!(a.machine_text(), b.machine_text());
    }
}
