//! Canonical PDDL output: two-space indentation, one section per block,
//! formulas on a single line.

use std::fmt::{self, Write};

use crate::ast::*;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PrintError {
    #[error("the syntax tree contains placeholders for malformed input and cannot be printed")]
    IncompleteAst,
}

pub fn print_domain(d: &Domain) -> Result<String, PrintError> {
    if !d.is_complete() {
        return Err(PrintError::IncompleteAst);
    }
    let mut out = String::new();
    write_domain(&mut out, d).expect("writing to a String");
    Ok(out)
}

pub fn print_problem(p: &Problem) -> Result<String, PrintError> {
    if !p.is_complete() {
        return Err(PrintError::IncompleteAst);
    }
    let mut out = String::new();
    write_problem(&mut out, p).expect("writing to a String");
    Ok(out)
}

fn write_domain(w: &mut String, d: &Domain) -> fmt::Result {
    writeln!(w, "(define (domain {})", d.name)?;
    requirements(w, &d.requirements)?;
    if !d.types.is_empty() {
        writeln!(w, "  (:types {})", Typed(&d.types))?;
    }
    if !d.constants.is_empty() {
        writeln!(w, "  (:constants {})", Typed(&d.constants))?;
    }
    if !d.predicates.is_empty() {
        write!(w, "  (:predicates")?;
        for p in &d.predicates {
            write!(w, "\n    {}", Decl(&p.name, &p.parameters))?;
        }
        writeln!(w, ")")?;
    }
    if !d.functions.is_empty() {
        write!(w, "  (:functions")?;
        for f in &d.functions {
            write!(w, "\n    {} - ", Decl(&f.name, &f.parameters))?;
            match &f.return_type {
                FunctionType::Number => write!(w, "number")?,
                FunctionType::Object(t) => write!(w, "{}", TypeRef(t))?,
            }
        }
        writeln!(w, ")")?;
    }
    if let Some(c) = &d.constraints {
        writeln!(w, "  (:constraints {})", GoalFmt(c))?;
    }
    for a in &d.actions {
        writeln!(w, "  (:action {}", a.name)?;
        write!(w, "    :parameters ({})", Typed(&a.parameters))?;
        if let Some(g) = &a.precondition {
            write!(w, "\n    :precondition {}", GoalFmt(g))?;
        }
        if let Some(e) = &a.effect {
            write!(w, "\n    :effect {}", EffectFmt(e))?;
        }
        writeln!(w, ")")?;
    }
    for a in &d.durative_actions {
        writeln!(w, "  (:durative-action {}", a.name)?;
        writeln!(w, "    :parameters ({})", Typed(&a.parameters))?;
        write!(w, "    :duration {}", DurationFmt(&a.duration))?;
        if let Some(g) = &a.condition {
            write!(w, "\n    :condition {}", TimedGoalFmt(g))?;
        }
        if let Some(e) = &a.effect {
            write!(w, "\n    :effect {}", TimedEffectFmt(e))?;
        }
        writeln!(w, ")")?;
    }
    for dp in &d.derived_predicates {
        writeln!(
            w,
            "  (:derived {}\n    {})",
            Decl(&dp.head.name, &dp.head.parameters),
            GoalFmt(&dp.body)
        )?;
    }
    writeln!(w, ")")
}

fn write_problem(w: &mut String, p: &Problem) -> fmt::Result {
    writeln!(w, "(define (problem {})", p.name)?;
    writeln!(w, "  (:domain {})", p.domain_name)?;
    requirements(w, &p.requirements)?;
    if !p.objects.is_empty() {
        writeln!(w, "  (:objects {})", Typed(&p.objects))?;
    }
    if !p.init.is_empty() {
        write!(w, "  (:init")?;
        for e in &p.init {
            write!(w, "\n    {}", InitFmt(e))?;
        }
        writeln!(w, ")")?;
    }
    writeln!(w, "  (:goal {})", GoalFmt(&p.goal))?;
    if let Some(c) = &p.constraints {
        writeln!(w, "  (:constraints {})", GoalFmt(c))?;
    }
    if let Some(m) = &p.metric {
        let dir = match m.optimization {
            Optimization::Minimize => "minimize",
            Optimization::Maximize => "maximize",
        };
        writeln!(w, "  (:metric {dir} {})", ExprFmt(&m.expr))?;
    }
    writeln!(w, ")")
}

fn requirements(w: &mut String, reqs: &[Name]) -> fmt::Result {
    if reqs.is_empty() {
        return Ok(());
    }
    write!(w, "  (:requirements")?;
    for r in reqs {
        write!(w, " :{r}")?;
    }
    writeln!(w, ")")
}

/// Writes `items` separated by single spaces.
fn join<T>(f: &mut fmt::Formatter<'_>, items: &[T], each: impl Fn(&mut fmt::Formatter<'_>, &T) -> fmt::Result) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_char(' ')?;
        }
        each(f, item)?;
    }
    Ok(())
}

struct TypeRef<'a>(&'a Type);

impl fmt::Display for TypeRef<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Type::Named(n) => write!(f, "{n}"),
            Type::Either(ns) => {
                f.write_str("(either ")?;
                join(f, ns, |f, n| write!(f, "{n}"))?;
                f.write_char(')')
            }
        }
    }
}

/// A typed list; the trailing `- object` is left implicit.
struct Typed<'a, T>(&'a [TypedList<T>]);

impl<T: fmt::Display> fmt::Display for Typed<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.len().saturating_sub(1);
        for (i, group) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_char(' ')?;
            }
            join(f, &group.items, |f, x| write!(f, "{x}"))?;
            if i != last || !group.parent_type.is_object() {
                write!(f, " - {}", TypeRef(&group.parent_type))?;
            }
        }
        Ok(())
    }
}

struct Decl<'a>(&'a Name, &'a Parameters);

impl fmt::Display for Decl<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.0)?;
        if !self.1.is_empty() {
            write!(f, " {}", Typed(self.1))?;
        }
        f.write_char(')')
    }
}

struct TermFmt<'a>(&'a Term);

impl fmt::Display for TermFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Term::Name(n) => write!(f, "{n}"),
            Term::Variable(v) => write!(f, "{v}"),
            Term::Function(ft) => write!(f, "{}", FnTerm(ft)),
        }
    }
}

struct FnTerm<'a>(&'a FunctionTerm);

impl fmt::Display for FnTerm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.0.name)?;
        for a in &self.0.args {
            write!(f, " {}", TermFmt(a))?;
        }
        f.write_char(')')
    }
}

struct AtomFmt<'a>(&'a Atom);

impl fmt::Display for AtomFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.0.predicate)?;
        for a in &self.0.args {
            write!(f, " {}", TermFmt(a))?;
        }
        f.write_char(')')
    }
}

struct ExprFmt<'a>(&'a Expr);

impl fmt::Display for ExprFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Expr::Number(n) => write!(f, "{n}"),
            Expr::Function(ft) => write!(f, "{}", FnTerm(ft)),
            Expr::Variable(v) => write!(f, "{v}"),
            Expr::Arith(op, args) => {
                write!(f, "({}", op.symbol())?;
                for a in args {
                    write!(f, " {}", ExprFmt(a))?;
                }
                f.write_char(')')
            }
            Expr::Negate(e) => write!(f, "(- {})", ExprFmt(e)),
            Expr::IsViolated(n) => write!(f, "(is-violated {n})"),
            Expr::Error => unreachable!("checked by is_complete"),
        }
    }
}

fn list<T>(f: &mut fmt::Formatter<'_>, op: &str, items: &[T], each: impl Fn(&T) -> String) -> fmt::Result {
    f.write_char('(')?;
    f.write_str(op)?;
    for item in items {
        write!(f, " {}", each(item))?;
    }
    f.write_char(')')
}

struct GoalFmt<'a>(&'a Goal);

impl fmt::Display for GoalFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = |g: &Goal| GoalFmt(g).to_string();
        match self.0 {
            Goal::Atom(a) => write!(f, "{}", AtomFmt(a)),
            Goal::Not(x) => write!(f, "(not {})", GoalFmt(x)),
            Goal::And(gs) => list(f, "and", gs, g),
            Goal::Or(gs) => list(f, "or", gs, g),
            Goal::Imply(a, b) => write!(f, "(imply {} {})", GoalFmt(a), GoalFmt(b)),
            Goal::Exists(ps, x) => write!(f, "(exists ({}) {})", Typed(ps), GoalFmt(x)),
            Goal::Forall(ps, x) => write!(f, "(forall ({}) {})", Typed(ps), GoalFmt(x)),
            Goal::Compare(c, a, b) => write!(f, "({} {} {})", c.symbol(), ExprFmt(a), ExprFmt(b)),
            Goal::Preference(None, x) => write!(f, "(preference {})", GoalFmt(x)),
            Goal::Preference(Some(n), x) => write!(f, "(preference {n} {})", GoalFmt(x)),
            Goal::Modal(m) => match m {
                Modal::AtEnd(x) => write!(f, "(at end {})", GoalFmt(x)),
                Modal::Always(x) => write!(f, "(always {})", GoalFmt(x)),
                Modal::Sometime(x) => write!(f, "(sometime {})", GoalFmt(x)),
                Modal::Within(n, x) => write!(f, "(within {n} {})", GoalFmt(x)),
                Modal::AtMostOnce(x) => write!(f, "(at-most-once {})", GoalFmt(x)),
                Modal::SometimeAfter(a, b) => write!(f, "(sometime-after {} {})", GoalFmt(a), GoalFmt(b)),
                Modal::SometimeBefore(a, b) => write!(f, "(sometime-before {} {})", GoalFmt(a), GoalFmt(b)),
                Modal::AlwaysWithin(n, a, b) => {
                    write!(f, "(always-within {n} {} {})", GoalFmt(a), GoalFmt(b))
                }
                Modal::HoldDuring(a, b, x) => write!(f, "(hold-during {a} {b} {})", GoalFmt(x)),
                Modal::HoldAfter(n, x) => write!(f, "(hold-after {n} {})", GoalFmt(x)),
            },
            Goal::Error => unreachable!("checked by is_complete"),
        }
    }
}

struct EffectFmt<'a>(&'a Effect);

impl fmt::Display for EffectFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Effect::And(es) => list(f, "and", es, |e| EffectFmt(e).to_string()),
            Effect::Forall(ps, e) => write!(f, "(forall ({}) {})", Typed(ps), EffectFmt(e)),
            Effect::When(g, e) => write!(f, "(when {} {})", GoalFmt(g), EffectFmt(e)),
            Effect::Add(a) => write!(f, "{}", AtomFmt(a)),
            Effect::Delete(a) => write!(f, "(not {})", AtomFmt(a)),
            Effect::Assign(op, t, e) => write!(f, "({} {} {})", op.keyword(), FnTerm(t), ExprFmt(e)),
            Effect::Error => unreachable!("checked by is_complete"),
        }
    }
}

struct DurationFmt<'a>(&'a DurationConstraint);

impl fmt::Display for DurationFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            DurationConstraint::And(cs) => list(f, "and", cs, |c| DurationFmt(c).to_string()),
            DurationConstraint::Compare(c, e) => write!(f, "({} ?duration {})", c.symbol(), ExprFmt(e)),
            DurationConstraint::At(t, c) => write!(f, "(at {} {})", t.keyword(), DurationFmt(c)),
            DurationConstraint::Error => unreachable!("checked by is_complete"),
        }
    }
}

struct TimedGoalFmt<'a>(&'a TimedGoal);

impl fmt::Display for TimedGoalFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            TimedGoal::And(gs) => list(f, "and", gs, |g| TimedGoalFmt(g).to_string()),
            TimedGoal::AtStart(g) => write!(f, "(at start {})", GoalFmt(g)),
            TimedGoal::AtEnd(g) => write!(f, "(at end {})", GoalFmt(g)),
            TimedGoal::OverAll(g) => write!(f, "(over all {})", GoalFmt(g)),
            TimedGoal::Forall(ps, g) => write!(f, "(forall ({}) {})", Typed(ps), TimedGoalFmt(g)),
            TimedGoal::Preference(None, g) => write!(f, "(preference {})", TimedGoalFmt(g)),
            TimedGoal::Preference(Some(n), g) => write!(f, "(preference {n} {})", TimedGoalFmt(g)),
            TimedGoal::Error => unreachable!("checked by is_complete"),
        }
    }
}

struct TimedEffectFmt<'a>(&'a TimedEffect);

impl fmt::Display for TimedEffectFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            TimedEffect::And(es) => list(f, "and", es, |e| TimedEffectFmt(e).to_string()),
            TimedEffect::At(t, e) => write!(f, "(at {} {})", t.keyword(), EffectFmt(e)),
            TimedEffect::Forall(ps, e) => write!(f, "(forall ({}) {})", Typed(ps), TimedEffectFmt(e)),
            TimedEffect::When(g, e) => write!(f, "(when {} {})", TimedGoalFmt(g), TimedEffectFmt(e)),
            TimedEffect::Error => unreachable!("checked by is_complete"),
        }
    }
}

fn literal(l: &Literal) -> String {
    match l {
        Literal::Pos(a) => AtomFmt(a).to_string(),
        Literal::Neg(a) => format!("(not {})", AtomFmt(a)),
    }
}

struct InitFmt<'a>(&'a InitElement);

impl fmt::Display for InitFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            InitElement::Literal(l) => f.write_str(&literal(l)),
            InitElement::Assign(t, InitValue::Number(n)) => write!(f, "(= {} {n})", FnTerm(t)),
            InitElement::Assign(t, InitValue::Object(o)) => write!(f, "(= {} {o})", FnTerm(t)),
            InitElement::Timed(n, l) => write!(f, "(at {n} {})", literal(l)),
        }
    }
}
