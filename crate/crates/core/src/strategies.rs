//! Proptest strategies for syntax trees that print and parse back unchanged.
//!
//! Trees are generated structurally and then closed over their variable
//! scopes: a variable that is not bound where it occurs is replaced by a
//! bound one, or by a constant or number when nothing is bound. A few
//! shapes that the grammar reads differently (such as `(= ?x ?y)` written as
//! a numeric comparison) are rewritten into the form the parser produces.

use proptest::collection::{btree_set, vec};
use proptest::option;
use proptest::prelude::*;

use crate::ast::*;
use crate::keywords::REQUIREMENTS;

/// Words with a fixed meaning in some position of the grammar.
const RESERVED: &[&str] = &[
    "all", "always", "always-within", "and", "assign", "at", "at-most-once", "decrease", "define", "domain",
    "either", "end", "exists", "forall", "hold-after", "hold-during", "imply", "increase", "is-violated",
    "maximize", "minimize", "not", "number", "object", "or", "over", "preference", "problem", "scale-down",
    "scale-up", "sometime", "sometime-after", "sometime-before", "start", "when", "within",
];

fn is_reserved(s: &str) -> bool {
    RESERVED.iter().any(|r| r.eq_ignore_ascii_case(s))
}

pub fn name() -> impl Strategy<Value = Name> + Clone {
    "[a-zA-Z][a-zA-Z0-9_-]{0,7}"
        .prop_filter("reserved word", |s| !is_reserved(s))
        .prop_map(Name::new)
}

pub fn variable() -> impl Strategy<Value = Variable> + Clone {
    "[vVwx][0-4]".prop_map(Variable::new)
}

pub fn number() -> impl Strategy<Value = Number> + Clone {
    (-5000i32..5000, 0usize..3).prop_map(|(n, d)| Number::with_decimals(f64::from(n) / 10f64.powi(d as i32), d))
}

fn type_ref() -> impl Strategy<Value = Type> + Clone {
    prop_oneof![
        4 => name().prop_map(Type::Named),
        1 => Just(Type::object()),
        1 => vec(name(), 1..3).prop_map(Type::Either),
    ]
}

fn typed<T: std::fmt::Debug + Clone>(item: impl Strategy<Value = T> + Clone) -> impl Strategy<Value = Vec<TypedList<T>>> + Clone {
    vec((vec(item, 1..3), type_ref()).prop_map(|(items, t)| TypedList::new(items, t)), 0..3)
}

fn parameters() -> impl Strategy<Value = Parameters> + Clone {
    typed(variable())
}

fn term() -> impl Strategy<Value = Term> + Clone {
    let leaf = prop_oneof![name().prop_map(Term::Name), variable().prop_map(Term::Variable)];
    leaf.prop_recursive(2, 6, 3, |inner| {
        (name(), vec(inner, 0..3)).prop_map(|(name, args)| Term::Function(FunctionTerm { name, args }))
    })
}

fn simple_term() -> impl Strategy<Value = Term> + Clone {
    prop_oneof![name().prop_map(Term::Name), variable().prop_map(Term::Variable)]
}

fn function_term() -> impl Strategy<Value = FunctionTerm> + Clone {
    (name(), vec(term(), 0..3)).prop_map(|(name, args)| FunctionTerm { name, args })
}

fn atom() -> impl Strategy<Value = Atom> + Clone {
    (name(), vec(term(), 0..4)).prop_map(|(predicate, args)| Atom { predicate, args })
}

fn expr() -> impl Strategy<Value = Expr> + Clone {
    let leaf = prop_oneof![
        3 => number().prop_map(Expr::Number),
        3 => function_term().prop_map(Expr::Function),
        2 => variable().prop_map(Expr::Variable),
        1 => name().prop_map(Expr::IsViolated),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (prop_oneof![Just(ArithOp::Add), Just(ArithOp::Mul)], vec(inner.clone(), 2..4))
                .prop_map(|(op, args)| Expr::Arith(op, args)),
            (prop_oneof![Just(ArithOp::Sub), Just(ArithOp::Div)], inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| Expr::Arith(op, vec![a, b])),
            inner.prop_map(|e| Expr::Negate(Box::new(e))),
        ]
    })
}

fn comparison() -> impl Strategy<Value = Comparison> + Clone {
    prop_oneof![
        Just(Comparison::Lt),
        Just(Comparison::Le),
        Just(Comparison::Eq),
        Just(Comparison::Ge),
        Just(Comparison::Gt),
    ]
}

fn modal(g: BoxedStrategy<Goal>) -> impl Strategy<Value = Modal> {
    let b = move || g.clone().prop_map(Box::new);
    prop_oneof![
        b().prop_map(Modal::AtEnd),
        b().prop_map(Modal::Always),
        b().prop_map(Modal::Sometime),
        (number(), b()).prop_map(|(n, g)| Modal::Within(n, g)),
        b().prop_map(Modal::AtMostOnce),
        (b(), b()).prop_map(|(x, y)| Modal::SometimeAfter(x, y)),
        (b(), b()).prop_map(|(x, y)| Modal::SometimeBefore(x, y)),
        (number(), b(), b()).prop_map(|(n, x, y)| Modal::AlwaysWithin(n, x, y)),
        (number(), number(), b()).prop_map(|(n, m, x)| Modal::HoldDuring(n, m, x)),
        (number(), b()).prop_map(|(n, x)| Modal::HoldAfter(n, x)),
    ]
}

pub fn goal() -> BoxedStrategy<Goal> {
    let leaf = prop_oneof![
        5 => atom().prop_map(Goal::Atom),
        1 => (simple_term(), simple_term()).prop_map(|(a, b)| Goal::Atom(Atom { predicate: Name::new("="), args: vec![a, b] })),
        2 => (comparison(), expr(), expr()).prop_map(|(c, a, b)| Goal::Compare(c, a, b)),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        let b = inner.clone().prop_map(Box::new);
        prop_oneof![
            3 => vec(inner.clone(), 0..4).prop_map(Goal::And),
            1 => vec(inner.clone(), 0..3).prop_map(Goal::Or),
            2 => b.clone().prop_map(Goal::Not),
            1 => (b.clone(), b.clone()).prop_map(|(x, y)| Goal::Imply(x, y)),
            1 => (parameters(), b.clone()).prop_map(|(p, x)| Goal::Exists(p, x)),
            1 => (parameters(), b.clone()).prop_map(|(p, x)| Goal::Forall(p, x)),
            1 => (option::of(name()), b).prop_map(|(n, x)| Goal::Preference(n, x)),
            1 => modal(inner).prop_map(Goal::Modal),
        ]
    })
    .boxed()
}

fn assign_op() -> impl Strategy<Value = AssignOp> + Clone {
    proptest::sample::select(AssignOp::ALL.to_vec())
}

pub fn effect() -> BoxedStrategy<Effect> {
    let leaf = prop_oneof![
        3 => atom().prop_map(Effect::Add),
        2 => atom().prop_map(Effect::Delete),
        2 => (assign_op(), function_term(), expr()).prop_map(|(op, t, e)| Effect::Assign(op, t, e)),
    ];
    leaf.prop_recursive(3, 16, 4, |inner| {
        let b = inner.clone().prop_map(Box::new);
        prop_oneof![
            3 => vec(inner, 0..4).prop_map(Effect::And),
            1 => (parameters(), b.clone()).prop_map(|(p, e)| Effect::Forall(p, e)),
            1 => (goal(), b).prop_map(|(g, e)| Effect::When(g, e)),
        ]
    })
    .boxed()
}

fn time_specifier() -> impl Strategy<Value = TimeSpecifier> + Clone {
    prop_oneof![Just(TimeSpecifier::Start), Just(TimeSpecifier::End)]
}

fn duration() -> impl Strategy<Value = DurationConstraint> {
    let leaf = (
        prop_oneof![Just(Comparison::Le), Just(Comparison::Ge), Just(Comparison::Eq)],
        expr(),
    )
        .prop_map(|(c, e)| DurationConstraint::Compare(c, e));
    leaf.prop_recursive(2, 6, 3, |inner| {
        prop_oneof![
            vec(inner.clone(), 0..3).prop_map(DurationConstraint::And),
            (time_specifier(), inner).prop_map(|(t, c)| DurationConstraint::At(t, Box::new(c))),
        ]
    })
}

fn timed_goal() -> BoxedStrategy<TimedGoal> {
    let leaf = prop_oneof![
        goal().prop_map(TimedGoal::AtStart),
        goal().prop_map(TimedGoal::AtEnd),
        goal().prop_map(TimedGoal::OverAll),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| {
        let b = inner.clone().prop_map(Box::new);
        prop_oneof![
            3 => vec(inner, 0..3).prop_map(TimedGoal::And),
            1 => (parameters(), b.clone()).prop_map(|(p, g)| TimedGoal::Forall(p, g)),
            1 => (option::of(name()), b).prop_map(|(n, g)| TimedGoal::Preference(n, g)),
        ]
    })
    .boxed()
}

fn timed_effect() -> BoxedStrategy<TimedEffect> {
    let leaf = (time_specifier(), effect()).prop_map(|(t, e)| TimedEffect::At(t, e));
    leaf.prop_recursive(2, 8, 3, |inner| {
        let b = inner.clone().prop_map(Box::new);
        prop_oneof![
            3 => vec(inner, 0..3).prop_map(TimedEffect::And),
            1 => (parameters(), b.clone()).prop_map(|(p, e)| TimedEffect::Forall(p, e)),
            1 => (timed_goal(), b).prop_map(|(g, e)| TimedEffect::When(g, e)),
        ]
    })
    .boxed()
}

fn predicate_decl() -> impl Strategy<Value = PredicateDecl> + Clone {
    (name(), parameters()).prop_map(|(name, parameters)| PredicateDecl { name, parameters })
}

fn function_decl() -> impl Strategy<Value = FunctionDecl> {
    let rt = prop_oneof![3 => Just(FunctionType::Number), 1 => type_ref().prop_map(FunctionType::Object)];
    (name(), parameters(), rt).prop_map(|(name, parameters, return_type)| FunctionDecl { name, parameters, return_type })
}

fn action() -> impl Strategy<Value = Action> {
    (name(), parameters(), option::of(goal()), option::of(effect())).prop_map(|(name, parameters, precondition, effect)| {
        Action { name, parameters, precondition, effect }
    })
}

fn durative_action() -> impl Strategy<Value = DurativeAction> {
    (name(), parameters(), duration(), option::of(timed_goal()), option::of(timed_effect())).prop_map(
        |(name, parameters, duration, condition, effect)| DurativeAction { name, parameters, duration, condition, effect },
    )
}

fn derived() -> impl Strategy<Value = DerivedPredicate> {
    (predicate_decl(), goal()).prop_map(|(head, body)| DerivedPredicate { head, body })
}

fn requirements() -> impl Strategy<Value = Vec<Name>> {
    proptest::sample::subsequence(REQUIREMENTS.to_vec(), 0..5)
        .prop_map(|rs| rs.into_iter().map(|r| Name::new(&r[1..])).collect())
}

/// Distinct type names split into groups under random parents.
fn type_sections() -> impl Strategy<Value = Vec<TypedList<Name>>> {
    (btree_set(name(), 0..7), vec(type_ref(), 1..4)).prop_map(|(names, parents)| {
        let mut groups: Vec<TypedList<Name>> = parents.into_iter().map(|t| TypedList::new(Vec::new(), t)).collect();
        let k = groups.len();
        for (i, n) in names.into_iter().enumerate() {
            groups[i % k].items.push(n);
        }
        groups.retain(|g| !g.items.is_empty());
        groups
    })
}

pub fn domain() -> impl Strategy<Value = Domain> {
    (
        (name(), requirements(), type_sections(), typed(name())),
        vec(predicate_decl(), 0..4),
        vec(function_decl(), 0..3),
        option::of(goal()),
        vec(action(), 0..3),
        vec(durative_action(), 0..2),
        vec(derived(), 0..2),
    )
        .prop_map(|((name, requirements, types, constants), predicates, functions, constraints, actions, durative_actions, derived_predicates)| {
            let mut d = Domain {
                name,
                requirements,
                types,
                constants,
                predicates,
                functions,
                constraints,
                actions,
                durative_actions,
                derived_predicates,
                recovered_errors: 0,
            };
            close_domain(&mut d);
            d
        })
}

fn ground_atom() -> impl Strategy<Value = Atom> + Clone {
    (name(), vec(name().prop_map(Term::Name), 0..4)).prop_map(|(predicate, args)| Atom { predicate, args })
}

fn literal() -> impl Strategy<Value = Literal> + Clone {
    prop_oneof![3 => ground_atom().prop_map(Literal::Pos), 1 => ground_atom().prop_map(Literal::Neg)]
}

fn init_element() -> impl Strategy<Value = InitElement> {
    let target = (name(), vec(name().prop_map(Term::Name), 0..3)).prop_map(|(name, args)| FunctionTerm { name, args });
    let value = prop_oneof![number().prop_map(InitValue::Number), name().prop_map(InitValue::Object)];
    prop_oneof![
        4 => literal().prop_map(InitElement::Literal),
        2 => (target, value).prop_map(|(t, v)| InitElement::Assign(t, v)),
        1 => (number(), literal()).prop_map(|(n, l)| InitElement::Timed(n, l)),
    ]
}

pub fn problem() -> impl Strategy<Value = Problem> {
    let metric = (prop_oneof![Just(Optimization::Minimize), Just(Optimization::Maximize)], expr())
        .prop_map(|(optimization, expr)| Metric { optimization, expr });
    (
        (name(), name(), requirements(), typed(name())),
        vec(init_element(), 0..8),
        goal(),
        option::of(goal()),
        option::of(metric),
    )
        .prop_map(|((name, domain_name, requirements, objects), init, goal, constraints, metric)| {
            let mut p = Problem { name, domain_name, requirements, objects, init, goal, constraints, metric, recovered_errors: 0 };
            close_problem(&mut p);
            p
        })
}

// ---- closing trees over their scopes ---------------------------------------

type Vars = Vec<Variable>;

fn resolve(v: &Variable, scope: &Vars) -> Option<Variable> {
    if scope.contains(v) {
        return Some(v.clone());
    }
    let h = v.0.as_str().bytes().fold(0usize, |h, b| h.wrapping_mul(31).wrapping_add(usize::from(b)));
    (!scope.is_empty()).then(|| scope[h % scope.len()].clone())
}

fn with_params<R>(scope: &mut Vars, params: &Parameters, f: impl FnOnce(&mut Vars) -> R) -> R {
    let before = scope.len();
    scope.extend(declared_variables(params).cloned());
    let r = f(scope);
    scope.truncate(before);
    r
}

fn close_term(t: &mut Term, scope: &Vars) {
    match t {
        Term::Name(_) => {}
        Term::Variable(v) => match resolve(v, scope) {
            Some(b) => *v = b,
            None => *t = Term::Name(Name::new(format!("k{}", v.0))),
        },
        Term::Function(f) => close_fn(f, scope),
    }
}

fn close_fn(f: &mut FunctionTerm, scope: &Vars) {
    f.args.iter_mut().for_each(|a| close_term(a, scope));
}

fn close_atom(a: &mut Atom, scope: &Vars) {
    a.args.iter_mut().for_each(|t| close_term(t, scope));
}

fn close_expr(e: &mut Expr, scope: &Vars) {
    match e {
        Expr::Number(_) | Expr::IsViolated(_) | Expr::Error => {}
        Expr::Function(f) => close_fn(f, scope),
        Expr::Variable(v) => match resolve(v, scope) {
            Some(b) => *v = b,
            None => *e = Expr::Number(Number::from_f64(1.0)),
        },
        Expr::Arith(_, args) => args.iter_mut().for_each(|a| close_expr(a, scope)),
        Expr::Negate(x) => close_expr(x, scope),
    }
}

fn close_goal(g: &mut Goal, scope: &mut Vars) {
    match g {
        Goal::Atom(a) => close_atom(a, scope),
        Goal::Not(x) | Goal::Preference(_, x) => close_goal(x, scope),
        Goal::And(gs) | Goal::Or(gs) => gs.iter_mut().for_each(|x| close_goal(x, scope)),
        Goal::Imply(a, b) => {
            close_goal(a, scope);
            close_goal(b, scope);
        }
        Goal::Exists(ps, x) | Goal::Forall(ps, x) => with_params(scope, ps, |s| close_goal(x, s)),
        Goal::Compare(c, a, b) => {
            close_expr(a, scope);
            close_expr(b, scope);
            // two bare variables under `=` read as an equality atom
            if *c == Comparison::Eq && matches!((&*a, &*b), (Expr::Variable(_), Expr::Variable(_))) {
                *b = Expr::Number(Number::from_f64(0.0));
            }
        }
        Goal::Modal(m) => match m {
            Modal::AtEnd(x)
            | Modal::Always(x)
            | Modal::Sometime(x)
            | Modal::Within(_, x)
            | Modal::AtMostOnce(x)
            | Modal::HoldDuring(_, _, x)
            | Modal::HoldAfter(_, x) => close_goal(x, scope),
            Modal::SometimeAfter(a, b) | Modal::SometimeBefore(a, b) | Modal::AlwaysWithin(_, a, b) => {
                close_goal(a, scope);
                close_goal(b, scope);
            }
        },
        Goal::Error => {}
    }
}

fn close_effect(e: &mut Effect, scope: &mut Vars) {
    match e {
        Effect::And(es) => es.iter_mut().for_each(|x| close_effect(x, scope)),
        Effect::Forall(ps, x) => with_params(scope, ps, |s| close_effect(x, s)),
        Effect::When(g, x) => {
            close_goal(g, scope);
            close_effect(x, scope);
        }
        Effect::Add(a) | Effect::Delete(a) => close_atom(a, scope),
        Effect::Assign(_, t, x) => {
            close_fn(t, scope);
            close_expr(x, scope);
        }
        Effect::Error => {}
    }
}

fn close_duration(d: &mut DurationConstraint, scope: &Vars) {
    match d {
        DurationConstraint::And(cs) => cs.iter_mut().for_each(|c| close_duration(c, scope)),
        DurationConstraint::Compare(_, e) => close_expr(e, scope),
        DurationConstraint::At(_, c) => close_duration(c, scope),
        DurationConstraint::Error => {}
    }
}

fn close_timed_goal(g: &mut TimedGoal, scope: &mut Vars) {
    match g {
        TimedGoal::And(gs) => gs.iter_mut().for_each(|x| close_timed_goal(x, scope)),
        TimedGoal::AtStart(x) | TimedGoal::AtEnd(x) | TimedGoal::OverAll(x) => close_goal(x, scope),
        TimedGoal::Forall(ps, x) => with_params(scope, ps, |s| close_timed_goal(x, s)),
        TimedGoal::Preference(_, x) => close_timed_goal(x, scope),
        TimedGoal::Error => {}
    }
}

fn close_timed_effect(e: &mut TimedEffect, scope: &mut Vars) {
    match e {
        TimedEffect::And(es) => es.iter_mut().for_each(|x| close_timed_effect(x, scope)),
        TimedEffect::At(_, x) => close_effect(x, scope),
        TimedEffect::Forall(ps, x) => with_params(scope, ps, |s| close_timed_effect(x, s)),
        TimedEffect::When(g, x) => {
            close_timed_goal(g, scope);
            close_timed_effect(x, scope);
        }
        TimedEffect::Error => {}
    }
}

fn close_domain(d: &mut Domain) {
    if let Some(c) = &mut d.constraints {
        close_goal(c, &mut Vec::new());
    }
    for a in &mut d.actions {
        let mut scope: Vars = declared_variables(&a.parameters).cloned().collect();
        if let Some(g) = &mut a.precondition {
            close_goal(g, &mut scope);
        }
        if let Some(e) = &mut a.effect {
            close_effect(e, &mut scope);
        }
    }
    for a in &mut d.durative_actions {
        let mut scope: Vars = declared_variables(&a.parameters).cloned().collect();
        scope.push(Variable::new("duration"));
        close_duration(&mut a.duration, &scope);
        if let Some(g) = &mut a.condition {
            close_timed_goal(g, &mut scope);
        }
        if let Some(e) = &mut a.effect {
            close_timed_effect(e, &mut scope);
        }
    }
    for dp in &mut d.derived_predicates {
        let mut scope = declared_variables(&dp.head.parameters).cloned().collect();
        close_goal(&mut dp.body, &mut scope);
    }
}

fn close_problem(p: &mut Problem) {
    close_goal(&mut p.goal, &mut Vec::new());
    if let Some(c) = &mut p.constraints {
        close_goal(c, &mut Vec::new());
    }
    if let Some(m) = &mut p.metric {
        close_expr(&mut m.expr, &Vec::new());
    }
}
