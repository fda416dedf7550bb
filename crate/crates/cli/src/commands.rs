//! Command dispatch. Commands read an instance and never modify it.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use trunclab::boolean::{equivalence_witness, gba_isomorphism, gba_validate, iba_forget, idealize, RoundTripOutcome};
use trunclab::frame::{
    case_tables_check, drop_real, e0q_exhaustive, e0q_member, frame_dini, frame_sup, oracle_check, uc_check,
    DropOutcome, E0q, FrameSurjection, LiftMethod,
};
use trunclab::kernel::{
    convexity_check, kernel_closure, kernel_conditions, pointwise_closed, ConditionVerdict, KernelReport,
    PointwiseVerdict,
};
use trunclab::laws::check_all;
use trunclab::seqspace::ex1_report;
use trunclab::trunc::{
    dini_check, element_from_good, good_from_element, grid_cuts, is_unital_component, normal_form, pointwise_sup,
    truncation_sequence, truncation_sequence_check, uc, DiniReport, HyperVerdict, NormalForm,
};
use trunclab::{Element, Rational, Real, Scalar, Tail, TruncElement, TruncOp};

use crate::instance::{describe, InputError, Instance, Kernel, Object, Sequence};
use crate::report::Report;
use crate::suite;

pub const COMMANDS: [&str; 16] = [
    "check",
    "normal-form",
    "good-seq",
    "trunc-seq",
    "uc",
    "equivalence",
    "frame-eval",
    "induced-op",
    "drop",
    "e0q",
    "kernel-check",
    "kernel-close",
    "pointwise",
    "dini",
    "ex1-report",
    "suite",
];

/// Largest carrier the equivalence round trips will build.
pub const EQUIVALENCE_BOUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
#[derive(Default)]
pub struct Flags {
    pub seed: u64,
    /// Sample budget; each command has its own default.
    pub cases: Option<usize>,
}


impl Flags {
    fn cases_or(&self, default: usize) -> usize {
        self.cases.unwrap_or(default)
    }
}

/// Commands that run without an instance file.
pub fn needs_instance(cmd: &str) -> bool {
    !matches!(cmd, "ex1-report" | "suite")
}

fn core(e: trunclab::Error) -> InputError {
    InputError::new(e.to_string())
}

fn input(message: impl Into<String>) -> InputError {
    InputError::new(message)
}

fn one_name<'a>(names: &'a [String], cmd: &str, what: &str) -> Result<&'a str, InputError> {
    match names {
        [n] => Ok(n),
        _ => Err(input(format!("{cmd} takes one {what}"))),
    }
}

fn element<'a>(inst: &'a Instance, name: &str) -> Result<&'a Element, InputError> {
    match inst.get(name)? {
        Object::Element(g) => Ok(g),
        o => Err(input(format!("`{name}` is a {}, expected an element", o.kind()))),
    }
}

fn real<'a>(inst: &'a Instance, name: &str) -> Result<&'a Real, InputError> {
    match inst.get(name)? {
        Object::Real(g) => Ok(g),
        o => Err(input(format!("`{name}` is a {}, expected a real", o.kind()))),
    }
}

fn surjection<'a>(inst: &'a Instance, name: &str) -> Result<&'a FrameSurjection, InputError> {
    match inst.get(name)? {
        Object::Surjection(q) => Ok(q),
        o => Err(input(format!("`{name}` is a {}, expected a surjection", o.kind()))),
    }
}

fn kernel<'a>(inst: &'a Instance, name: &str) -> Result<&'a Kernel, InputError> {
    match inst.get(name)? {
        Object::Kernel(k) => Ok(k),
        o => Err(input(format!("`{name}` is a {}, expected a kernel", o.kind()))),
    }
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn format_normal_form(g: &Element, nf: &NormalForm<Rational>) -> String {
    let terms: Vec<String> = nf
        .terms
        .iter()
        .map(|(r, u)| format!("({r},{})", g.space().format_set(*u)))
        .collect();
    format!("[{}]", terms.join(","))
}

/// The echo line for a command.
pub fn echo(cmd: &str, names: &[String], flags: &Flags) -> String {
    let mut parts = vec!["trunclab".to_string(), cmd.to_string()];
    parts.extend(names.iter().cloned());
    if cmd == "suite" || flags.seed != 0 {
        parts.push(format!("--seed {}", flags.seed));
    }
    if let Some(c) = flags.cases {
        parts.push(format!("--cases {c}"));
    }
    parts.join(" ")
}

pub fn run_command(cmd: &str, inst: &Instance, names: &[String], flags: &Flags) -> Result<Report, InputError> {
    let mut r = Report::new(echo(cmd, names, flags));
    match cmd {
        "check" => check(&mut r, inst, names)?,
        "normal-form" => normal_form_cmd(&mut r, inst, names)?,
        "good-seq" => good_seq(&mut r, inst, names)?,
        "trunc-seq" => trunc_seq(&mut r, inst, names)?,
        "uc" => uc_cmd(&mut r, inst, names)?,
        "equivalence" => equivalence(&mut r, inst, names)?,
        "frame-eval" => frame_eval(&mut r, inst, names)?,
        "induced-op" => induced_op(&mut r, inst, names)?,
        "drop" => drop_cmd(&mut r, inst, names)?,
        "e0q" => e0q(&mut r, inst, names)?,
        "kernel-check" => kernel_check(&mut r, inst, names, flags)?,
        "kernel-close" => kernel_close(&mut r, inst, names, flags)?,
        "pointwise" => pointwise(&mut r, inst, names, flags)?,
        "dini" => dini(&mut r, inst, names)?,
        "ex1-report" => ex1(&mut r, flags)?,
        "suite" => suite::run(&mut r, flags.seed, flags.cases_or(suite::DEFAULT_CASES)),
        _ => {
            return Err(input(format!(
                "unknown command `{cmd}`; expected one of {}",
                COMMANDS.join(", ")
            )))
        }
    }
    Ok(r)
}

fn laws_for<T: TruncElement<Scalar = Rational>>(r: &mut Report, name: &str, g: &T) -> Result<(), InputError> {
    let half = Rational::new(1.into(), 2.into());
    let mut failed = Vec::new();
    for n in 0..=3 {
        for shift in [half.clone(), Rational::one()] {
            for law in check_all(g, g, n, &shift).map_err(core)? {
                failed.push(format!("{} at n = {n}, r = {shift}", law.name()));
            }
        }
    }
    if failed.is_empty() {
        r.pass(format!("laws hold for {name}"));
    } else {
        r.fail(format!("laws hold for {name}"), failed.join("; "));
    }
    Ok(())
}

fn check(r: &mut Report, inst: &Instance, names: &[String]) -> Result<(), InputError> {
    let selected: Vec<String> = if names.is_empty() {
        inst.names().cloned().collect()
    } else {
        names.to_vec()
    };
    let mut objects = serde_json::Map::new();
    for name in &selected {
        let o = inst.get(name)?;
        objects.insert(name.clone(), json!({"kind": o.kind(), "value": describe(o)}));
        r.line(format!("{} {name}: {}", o.kind(), describe(o)));
        r.pass(format!("{} {name} is valid", o.kind()));
        match o {
            Object::Element(g) if g.is_nonnegative() => laws_for(r, name, g)?,
            Object::Tail(g) if g.is_nonnegative() => laws_for(r, name, g)?,
            Object::Real(g) if g.is_real() && g.is_nonnegative() => laws_for(r, name, g)?,
            Object::Trunc(t) => match t.components() {
                Ok(_) => {
                    let report = gba_validate(&uc(t));
                    match report.violations.first() {
                        None => r.pass(format!("uc({name}) is a generalized Boolean algebra")),
                        Some(v) => r.fail(format!("uc({name}) is a generalized Boolean algebra"), v.to_string()),
                    }
                }
                Err(e) => r.line(format!("uc({name}) not enumerated: {e}")),
            },
            Object::Algebra(a) => {
                let back = iba_forget(&idealize(a));
                let name = format!("{name} survives idealize then forget");
                if gba_isomorphism(a, &back).is_some() {
                    r.pass(name);
                } else {
                    r.fail(name, "no isomorphism");
                }
            }
            _ => {}
        }
    }
    r.set("objects", Value::Object(objects));
    Ok(())
}

fn normal_form_cmd(r: &mut Report, inst: &Instance, names: &[String]) -> Result<(), InputError> {
    let name = one_name(names, "normal-form", "element")?;
    let g = element(inst, name)?;
    let nf = normal_form(g);
    let text = format_normal_form(g, &nf);
    r.line(format!("{name} = {text}"));
    r.set("normal_form", text);
    r.set(
        "terms",
        nf.terms
            .iter()
            .map(|(c, u)| json!({"coefficient": c.to_string(), "component": g.space().format_set(*u)}))
            .collect::<Vec<_>>(),
    );
    let back = nf.to_element(g.space().clone());
    if back == *g {
        r.pass("normal form sums to the element");
    } else {
        r.fail("normal form sums to the element", back.to_string());
    }
    let disjoint = nf
        .terms
        .iter()
        .enumerate()
        .all(|(i, (_, u))| nf.terms[i + 1..].iter().all(|(_, v)| u.intersection(*v).is_empty()));
    let mut coeffs: Vec<&Rational> = nf.terms.iter().map(|(c, _)| c).collect();
    coeffs.sort();
    coeffs.dedup();
    let distinct = coeffs.len() == nf.terms.len() && coeffs.iter().all(|c| !c.is_zero());
    r.check(
        "components disjoint, coefficients distinct and nonzero",
        disjoint && distinct,
        None,
    );
    Ok(())
}

fn good_seq(r: &mut Report, inst: &Instance, names: &[String]) -> Result<(), InputError> {
    let (name, m) = match names {
        [n] => (n.as_str(), None),
        [n, m] => (
            n.as_str(),
            Some(m.parse::<u64>().map_err(|_| input(format!("`{m}` is not a length")))?),
        ),
        _ => return Err(input("good-seq takes an element and an optional length")),
    };
    let g = element(inst, name)?;
    if !g.is_nonnegative() {
        return Err(input(format!("`{name}` is not nonnegative")));
    }
    let m = m.unwrap_or_else(|| g.sup_norm().ceil_u64().max(1));
    let good = good_from_element(g, m).map_err(core)?;
    let terms = strings(good.terms());
    for (i, t) in terms.iter().enumerate() {
        r.line(format!("f{} = {t}", i + 1));
    }
    r.set("length", m);
    r.set("terms", terms);
    let back = element_from_good(&good);
    let capped = g.trunc_n(m).map_err(core)?;
    if back == capped {
        r.pass(format!("the good sequence sums to {name} ∧ {m}"));
    } else {
        r.fail(format!("the good sequence sums to {name} ∧ {m}"), back.to_string());
    }
    Ok(())
}

fn trunc_seq(r: &mut Report, inst: &Instance, names: &[String]) -> Result<(), InputError> {
    let name = one_name(names, "trunc-seq", "element or sequence")?;
    match inst.get(name)? {
        Object::Element(g) => {
            if !g.is_nonnegative() {
                return Err(input(format!("`{name}` is not nonnegative")));
            }
            let seq = truncation_sequence(g).map_err(core)?;
            for (i, t) in seq.iter().enumerate() {
                r.line(format!("{name} ∧ {} = {t}", i + 1));
            }
            r.set("terms", strings(&seq));
            match truncation_sequence_check(&seq) {
                Ok(ts) if ts.element == *g => r.pass("the truncation sequence recovers the element"),
                Ok(ts) => r.fail("the truncation sequence recovers the element", ts.element.to_string()),
                Err(e) => r.fail("the truncation sequence recovers the element", e.to_string()),
            }
        }
        Object::Sequence(Sequence::Simple(seq)) => match truncation_sequence_check(seq) {
            Ok(ts) => {
                r.line(format!("element = {}", ts.element));
                r.set("element", ts.element.to_string());
                r.set("good", strings(ts.good.terms()));
                r.pass("is a truncation sequence");
            }
            Err(e) => r.fail("is a truncation sequence", e.to_string()),
        },
        o => {
            return Err(input(format!(
                "`{name}` is a {}, expected an element or a simple sequence",
                o.kind()
            )))
        }
    }
    Ok(())
}

fn uc_cmd(r: &mut Report, inst: &Instance, names: &[String]) -> Result<(), InputError> {
    let name = one_name(names, "uc", "trunc, element or real")?;
    match inst.get(name)? {
        Object::Trunc(t) => {
            t.components().map_err(core)?;
            let a = uc(t);
            let atoms: Vec<String> = a.atoms().iter().map(|&x| a.label(x).to_string()).collect();
            r.line(format!(
                "uc({name}) has {} elements, atoms {}",
                a.len(),
                atoms.join(" ")
            ));
            r.set("elements", a.labels().to_vec());
            r.set("atoms", atoms);
            match gba_validate(&a).violations.first() {
                None => r.pass("uc is a generalized Boolean algebra"),
                Some(v) => r.fail("uc is a generalized Boolean algebra", v.to_string()),
            }
        }
        Object::Element(g) => {
            let ok = g.is_nonnegative() && is_unital_component(g).map_err(core)?;
            r.set("cozero", g.space().format_set(g.cozero()));
            r.check(
                format!("{name} is a unital component"),
                ok,
                (!ok).then(|| g.to_string()),
            );
        }
        Object::Real(g) => match uc_check(g) {
            Some(coz) => {
                let label = g.frame().frame().label(coz).to_string();
                r.line(format!("coz {name} = {label}"));
                r.set("cozero", label);
                r.pass(format!("{name} is a unital component"));
            }
            None => r.fail(format!("{name} is a unital component"), g.to_string()),
        },
        o => {
            return Err(input(format!(
                "`{name}` is a {}, expected a trunc, element or real",
                o.kind()
            )))
        }
    }
    Ok(())
}

fn equivalence(r: &mut Report, inst: &Instance, names: &[String]) -> Result<(), InputError> {
    let name = one_name(names, "equivalence", "space")?;
    let Object::Space(x) = inst.get(name)? else {
        return Err(input(format!("`{name}` is not a space")));
    };
    let report = equivalence_witness(x, EQUIVALENCE_BOUND);
    for trip in &report.round_trips {
        match &trip.outcome {
            RoundTripOutcome::Verified(pairs) => {
                let shown: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}↦{b}")).collect();
                r.line(format!("{}: {}", trip.name, shown.join(" ")));
                r.pass(trip.name);
            }
            RoundTripOutcome::Counterexample(w) => r.fail(trip.name, w.clone()),
            RoundTripOutcome::Skipped(w) => r.fail(trip.name, format!("skipped: {w}")),
        }
    }
    r.set("complete", report.complete);
    Ok(())
}

fn frame_eval(r: &mut Report, inst: &Instance, names: &[String]) -> Result<(), InputError> {
    let name = one_name(names, "frame-eval", "real")?;
    let g = real(inst, name)?;
    let f = g.frame().frame();
    r.line(format!("{name} = {g}"));
    let mut rays = Vec::new();
    for c in grid_cuts(g.values()) {
        let (lo, up) = (f.label(g.lower(&c)), f.label(g.upper(&c)));
        r.line(format!("{name}(-∞,{c}) = {lo}   {name}({c},∞) = {up}"));
        rays.push(json!({"cut": c.to_string(), "lower": lo, "upper": up}));
    }
    r.set(
        "cells",
        g.cells()
            .iter()
            .map(|(v, c)| json!([v.to_string(), f.label(*c)]))
            .collect::<Vec<_>>(),
    );
    r.set("rays", rays);
    if g.is_real() && g.is_nonnegative() {
        let cuts: Vec<Rational> = grid_cuts(g.values().into_iter().chain([Rational::one()]));
        let bad: Vec<String> = cuts
            .iter()
            .filter_map(|c| match case_tables_check(g, c) {
                Ok(true) => None,
                Ok(false) => Some(c.to_string()),
                Err(e) => Some(format!("{c}: {e}")),
            })
            .collect();
        if bad.is_empty() {
            r.pass(format!(
                "case tables for truncate and tminus 1 agree at {} cuts",
                cuts.len()
            ));
        } else {
            r.fail("case tables for truncate and tminus 1 agree", bad.join(", "));
        }
    } else {
        r.line("case tables need a nonnegative real; skipped");
    }
    Ok(())
}

fn induced_op(r: &mut Report, inst: &Instance, names: &[String]) -> Result<(), InputError> {
    let Some((tag, operands)) = names.split_first() else {
        return Err(input("induced-op takes an operation tag and its operands"));
    };
    let op: TruncOp<Rational> = tag.parse().map_err(core)?;
    if operands.len() != op.arity() {
        return Err(input(format!("{op} takes {} operand(s)", op.arity())));
    }
    let fs = operands
        .iter()
        .map(|n| real(inst, n).cloned())
        .collect::<Result<Vec<_>, _>>()?;
    let report = oracle_check(&op, &fs).map_err(core)?;
    r.line(format!("{op}({}) = {}", operands.join(", "), report.result));
    r.set("result", report.result.to_string());
    r.set("opens_checked", report.opens_checked);
    r.set("boxes", report.boxes);
    let f = fs[0].frame().frame();
    match &report.mismatch {
        None => r.pass(format!("join formula agrees on {} opens", report.opens_checked)),
        Some((v, expected, got)) => r.fail(
            "join formula agrees",
            format!("at {v:?}: formula {}, cell-wise {}", f.label(*expected), f.label(*got)),
        ),
    }
    Ok(())
}

fn drop_cmd(r: &mut Report, inst: &Instance, names: &[String]) -> Result<(), InputError> {
    let [q, g] = names else {
        return Err(input("drop takes a surjection and a real on its source"));
    };
    let (sur, lifted) = (surjection(inst, q)?, real(inst, g)?);
    match drop_real(sur, lifted).map_err(core)? {
        DropOutcome::Dropped { h, opens_checked } => {
            r.line(format!("drop({g}) = {h}"));
            r.set("dropped", h.to_string());
            r.set("opens_checked", opens_checked);
            r.pass(format!(
                "drop is defined and the square commutes on {opens_checked} opens"
            ));
        }
        DropOutcome::Refused { image } => {
            let label = sur.target().frame().label(image).to_string();
            r.set("image", label.clone());
            r.fail("drop is defined", format!("q({g}(-∞,∞)) = {label} is not the top"));
        }
    }
    Ok(())
}

fn e0q(r: &mut Report, inst: &Instance, names: &[String]) -> Result<(), InputError> {
    let [q, h] = names else {
        return Err(input("e0q takes a surjection and a real on its target"));
    };
    let (sur, h_real) = (surjection(inst, q)?, real(inst, h)?);
    let verdict = e0q_member(sur, h_real).map_err(core)?;
    let lift = match &verdict {
        E0q::Member { lift, method } => {
            let how = match method {
                LiftMethod::Adjoint => "adjoint",
                LiftMethod::Search => "search",
            };
            r.line(format!("{h} lifts to {lift} ({how})"));
            r.set("lift", lift.to_string());
            r.set("method", how);
            r.pass(format!("{h} is in E0q"));
            Some(lift.clone())
        }
        E0q::NotMember { assignments_searched } => {
            r.set("assignments_searched", *assignments_searched);
            r.fail(
                format!("{h} is in E0q"),
                format!("no lift among {assignments_searched} assignments"),
            );
            None
        }
    };
    match e0q_exhaustive(sur, h_real) {
        Ok((found, searched)) => {
            let agree = found.is_some() == lift.is_some();
            r.check(
                format!("exhaustive search over {searched} assignments agrees"),
                agree,
                (!agree).then(|| format!("exhaustive: {}", found.map_or("none".into(), |f| f.to_string()))),
            );
        }
        Err(e) => r.line(format!("exhaustive cross-check skipped: {e}")),
    }
    Ok(())
}

fn kernel_report<E: std::fmt::Display>(r: &mut Report, report: &KernelReport<E>) {
    for (i, c) in report.conditions.iter().enumerate() {
        let name = format!("condition ({})", i + 1);
        match c {
            ConditionVerdict::Pass { checked } => r.pass(format!("{name} on {checked} elements")),
            ConditionVerdict::Fail { witness } => r.fail(name, strings(witness).join(", ")),
        }
    }
}

fn kernel_check(r: &mut Report, inst: &Instance, names: &[String], flags: &Flags) -> Result<(), InputError> {
    let name = one_name(names, "kernel-check", "kernel")?;
    let budget = flags.cases_or(200);
    let (report, convex) = match kernel(inst, name)? {
        Kernel::Finite(k) => {
            let rep = kernel_conditions(k, budget, flags.seed).map_err(core)?;
            let conv = convexity_check(k, budget, flags.seed)
                .map_err(core)?
                .map(|w| strings(&w));
            kernel_report(r, &rep);
            (rep.all_pass(), conv)
        }
        Kernel::Seq(k) => {
            let rep = kernel_conditions(k, budget, flags.seed).map_err(core)?;
            let conv = convexity_check(k, budget, flags.seed)
                .map_err(core)?
                .map(|w| strings(&w));
            kernel_report(r, &rep);
            (rep.all_pass(), conv)
        }
    };
    match convex {
        None => r.pass("convex"),
        Some(w) => r.fail("convex", w.join(", ")),
    }
    r.set("kernel", report);
    r.set("budget", budget);
    Ok(())
}

fn kernel_close(r: &mut Report, inst: &Instance, names: &[String], flags: &Flags) -> Result<(), InputError> {
    let name = one_name(names, "kernel-close", "kernel")?;
    let budget = flags.cases_or(200);
    match kernel(inst, name)? {
        Kernel::Finite(k) => {
            let (closed, rep) = k.closure(budget, flags.seed).map_err(core)?;
            let support = closed.trunc().space().format_set(closed.support());
            r.line(format!("closure of {name} is the support kernel on {support}"));
            r.set("closure", support);
            r.set("stages", 1);
            kernel_report(r, &rep);
        }
        Kernel::Seq(k) => {
            let rep = kernel_closure(k, budget, flags.seed).map_err(core)?;
            for (i, s) in rep.stages.iter().enumerate() {
                r.line(format!("K{i} = {s}"));
            }
            r.set("closure", rep.kernel.to_string());
            r.set("stages", strings(&rep.stages));
            let verify = kernel_conditions(&rep.kernel, budget, flags.seed).map_err(core)?;
            kernel_report(r, &verify);
        }
    }
    Ok(())
}

fn pointwise_verdict<E: std::fmt::Display>(r: &mut Report, v: &PointwiseVerdict<E>) {
    match v {
        PointwiseVerdict::Closed { checked } => {
            r.line(format!("no escaping family among {checked} candidates"));
            r.set("closed", true);
        }
        PointwiseVerdict::NotClosed { family, sup, prefix } => {
            r.line(format!(
                "{family:?} family {} … increases to {sup}, outside the kernel",
                strings(prefix).join(", ")
            ));
            r.set("closed", false);
            r.set("family", format!("{family:?}").to_lowercase());
            r.set("sup", sup.to_string());
        }
    }
}

fn pointwise(r: &mut Report, inst: &Instance, names: &[String], flags: &Flags) -> Result<(), InputError> {
    let name = one_name(names, "pointwise", "sequence or kernel")?;
    match inst.get(name)? {
        Object::Sequence(Sequence::Simple(s)) => {
            let rep = pointwise_sup(s).map_err(core)?;
            r.line(format!("sup = {}", rep.sup));
            r.set("sup", rep.sup.to_string());
            r.pass(format!("cut-wise supremum agrees at {} cuts", rep.cuts_checked));
        }
        Object::Sequence(Sequence::Real(s)) => {
            let rep = frame_sup(s).map_err(core)?;
            r.line(format!("sup = {}", rep.sup));
            r.set("sup", rep.sup.to_string());
            r.pass(format!("cut-wise supremum agrees at {} cuts", rep.cuts_checked));
        }
        Object::Sequence(Sequence::Tail(s)) => {
            let mut sup = s[0].clone();
            for t in &s[1..] {
                sup = sup.join(t).map_err(core)?;
            }
            let bounded = s
                .iter()
                .map(|t| t.leq(&sup))
                .collect::<Result<Vec<_>, _>>()
                .map_err(core)?;
            r.line(format!("sup = {sup}"));
            r.set("sup", sup.to_string());
            r.check("every item lies below the supremum", bounded.iter().all(|&b| b), None);
        }
        Object::Kernel(k) => {
            let budget = flags.cases_or(200);
            match k {
                Kernel::Finite(k) => pointwise_verdict(r, &pointwise_closed(k, budget, flags.seed).map_err(core)?),
                Kernel::Seq(k) => pointwise_verdict(r, &pointwise_closed(k, budget, flags.seed).map_err(core)?),
            }
            let closed = r.data["closed"] == Value::Bool(true);
            let kernel_ok = match k {
                Kernel::Finite(k) => kernel_conditions(k, budget, flags.seed).map_err(core)?.all_pass(),
                Kernel::Seq(k) => kernel_conditions(k, budget, flags.seed).map_err(core)?.all_pass(),
            };
            // a truncation kernel is exactly a pointwise closed convex subtrunc
            r.check(
                "pointwise closure matches the kernel conditions",
                closed == kernel_ok,
                (closed != kernel_ok).then(|| format!("closed = {closed}, conditions = {kernel_ok}")),
            );
        }
        o => {
            return Err(input(format!(
                "`{name}` is a {}, expected a sequence or kernel",
                o.kind()
            )))
        }
    }
    Ok(())
}

fn dini_lines<S: Scalar>(r: &mut Report, rep: &DiniReport<S>) {
    r.line(format!("sup norms: {}", strings(&rep.maxima).join(", ")));
    r.set("maxima", strings(&rep.maxima));
    r.set("uniform", rep.uniform());
    r.line(if rep.uniform() {
        "the limit is 0; convergence is uniform"
    } else {
        "the limit is not 0"
    });
}

fn dini(r: &mut Report, inst: &Instance, names: &[String]) -> Result<(), InputError> {
    let name = one_name(names, "dini", "sequence")?;
    let Object::Sequence(seq) = inst.get(name)? else {
        return Err(input(format!("`{name}` is not a sequence")));
    };
    let outcome = match seq {
        Sequence::Simple(s) => dini_check(s).map(|rep| dini_lines(r, &rep)),
        Sequence::Tail(s) => dini_check(s).map(|rep| dini_lines(r, &rep)),
        Sequence::Real(s) => frame_dini(s).map(|fd| {
            dini_lines(r, &fd.report);
            let index: Vec<Value> = fd
                .index
                .iter()
                .map(|(e, m)| json!({"epsilon": e.to_string(), "index": m}))
                .collect();
            r.set("index", index);
        }),
    };
    match outcome {
        Ok(()) => r.pass("nonincreasing and eventually constant"),
        Err(e) => r.fail("nonincreasing and eventually constant", e.to_string()),
    }
    Ok(())
}

fn ex1(r: &mut Report, flags: &Flags) -> Result<(), InputError> {
    let budget = flags.cases_or(500);
    let rep = ex1_report(budget, flags.seed).map_err(core)?;
    r.line(format!("g0 = (1, 1/2, 1/3, …): {}", strings(&rep.g0_values).join(", ")));
    r.set("g0_values", strings(&rep.g0_values));
    r.set("budget", budget);

    let a = rep.g0_clearance.is_none();
    r.check(
        "(a) g0 is not bounded away from 0",
        a,
        rep.g0_clearance.as_ref().map(|c| c.to_string()),
    );
    r.check(
        "(b) g0 has infinite range, so the trunc is not simple",
        !rep.g0_simple,
        None,
    );
    match &rep.hyper {
        HyperVerdict::Accepted { pairs_checked } => r.pass(format!("(c) hyperarchimedean on {pairs_checked} pairs")),
        HyperVerdict::Refuted { f, g, reason } => r.fail("(c) hyperarchimedean", format!("f = {f}, g = {g}: {reason}")),
    }
    let [c1, c2, c3] = &rep.kernel.conditions;
    r.check("(d) finite-support kernel satisfies condition (1)", c1.passed(), None);
    r.check("(d) finite-support kernel satisfies condition (2)", c2.passed(), None);
    let g0_fails = *c3
        == ConditionVerdict::Fail {
            witness: vec![Tail::g0()],
        };
    r.check(
        "(d) condition (3) fails with witness g0",
        g0_fails,
        (!g0_fails).then(|| format!("{c3:?}")),
    );
    r.line(format!("g0 ⊖ 1/3 = {}", rep.g0_tminus_third));
    r.set("g0_tminus_third", rep.g0_tminus_third.to_string());
    pointwise_verdict(r, &rep.pointwise);
    r.check(
        "(e) the kernel is not pointwise closed",
        !rep.pointwise.is_closed(),
        None,
    );
    r.check("all parts hold", rep.holds(), None);
    Ok(())
}
