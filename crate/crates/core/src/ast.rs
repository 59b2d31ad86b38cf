//! Typed syntax trees for PDDL 3.1 domains and problems.
//!
//! Trees carry no source positions, so two trees compare equal when they
//! describe the same definitions regardless of layout. Identifiers compare
//! case-insensitively but keep their original spelling for printing.
//!
//! `Error` variants and the `recovered_errors` counters mark places where the
//! parser skipped malformed input. Such trees cannot be printed.

use std::fmt;
use std::hash::{Hash, Hasher};

/// A PDDL identifier, compared case-insensitively.
#[derive(Debug, Clone)]
pub struct Name(String);

impl Name {
    pub fn new(s: impl Into<String>) -> Self {
        Name(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is(&self, other: &str) -> bool {
        self.0.eq_ignore_ascii_case(other)
    }

    fn key(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.bytes().map(|b| b.to_ascii_lowercase())
    }
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        self.0.eq_ignore_ascii_case(&other.0)
    }
}

impl Eq for Name {}

impl Hash for Name {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for b in self.key() {
            state.write_u8(b);
        }
        state.write_u8(0xff);
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(other.key())
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// True if `s` is a valid PDDL name: a letter followed by letters, digits,
/// `-` or `_`.
pub fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b) if b.is_ascii_alphabetic())
        && bytes.all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
}

/// A variable, stored without its leading `?`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(pub Name);

impl Variable {
    pub fn new(s: impl Into<String>) -> Self {
        Variable(Name::new(s))
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// A numeric literal. Keeps its written form so that fixed-precision values
/// print as given; equality is by numeric value.
#[derive(Debug, Clone)]
pub struct Number {
    text: String,
    value: f64,
}

impl Number {
    /// Parse a literal; `None` unless it is a plain decimal.
    pub fn parse(text: &str) -> Option<Number> {
        if !crate::lexer::is_number(text) {
            return None;
        }
        let value = text.parse().ok()?;
        Some(Number {
            text: text.to_string(),
            value,
        })
    }

    /// Shortest decimal that reads back as `value`. Panics on non-finite input.
    pub fn from_f64(value: f64) -> Number {
        assert!(value.is_finite(), "PDDL numbers must be finite");
        Number {
            text: format!("{value}"),
            value,
        }
    }

    /// `value` rounded half-to-even to `decimals` places, printed with exactly
    /// that many digits after the point.
    pub fn with_decimals(value: f64, decimals: usize) -> Number {
        assert!(value.is_finite(), "PDDL numbers must be finite");
        // std float formatting rounds the exact binary value, ties to even
        let text = format!("{value:.decimals$}");
        let value = text.parse().expect("formatted float parses");
        Number { text, value }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// The type after a `-` in a typed list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    Named(Name),
    Either(Vec<Name>),
}

impl Type {
    pub fn object() -> Type {
        Type::Named(Name::new("object"))
    }

    pub fn is_object(&self) -> bool {
        matches!(self, Type::Named(n) if n.is("object"))
    }
}

/// `a b c - parent`. A list without a dash has parent `object`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedList<T> {
    pub items: Vec<T>,
    pub parent_type: Type,
}

impl<T> TypedList<T> {
    pub fn new(items: Vec<T>, parent_type: Type) -> Self {
        TypedList { items, parent_type }
    }
}

pub type Parameters = Vec<TypedList<Variable>>;

/// All variables declared by a parameter list.
pub fn declared_variables(params: &[TypedList<Variable>]) -> impl Iterator<Item = &Variable> {
    params.iter().flat_map(|l| l.items.iter())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Name(Name),
    Variable(Variable),
    /// Object fluent application, `(f t1 … tn)`.
    Function(FunctionTerm),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTerm {
    pub name: Name,
    pub args: Vec<Term>,
}

/// `(p t1 … tn)`; equality atoms use the predicate name `=`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub predicate: Name,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Comparison {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Eq => "=",
            Comparison::Ge => ">=",
            Comparison::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Comparison> {
        Some(match s {
            "<" => Comparison::Lt,
            "<=" => Comparison::Le,
            "=" => Comparison::Eq,
            ">=" => Comparison::Ge,
            ">" => Comparison::Gt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }
}

/// Numeric expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(Number),
    /// `(f t1 … tn)` or a bare 0-ary function symbol.
    Function(FunctionTerm),
    /// `?duration` or an object-valued variable.
    Variable(Variable),
    /// Binary or n-ary (`+`, `*`) arithmetic.
    Arith(ArithOp, Vec<Expr>),
    /// `(- e)`
    Negate(Box<Expr>),
    /// `(is-violated pref)`, metric expressions only.
    IsViolated(Name),
    Error,
}

/// Goal descriptor, including the preference and constraint forms.
#[derive(Debug, Clone, PartialEq)]
pub enum Goal {
    Atom(Atom),
    Not(Box<Goal>),
    And(Vec<Goal>),
    Or(Vec<Goal>),
    Imply(Box<Goal>, Box<Goal>),
    Exists(Parameters, Box<Goal>),
    Forall(Parameters, Box<Goal>),
    Compare(Comparison, Expr, Expr),
    Preference(Option<Name>, Box<Goal>),
    Modal(Modal),
    Error,
}

/// Trajectory constraint operators.
#[derive(Debug, Clone, PartialEq)]
pub enum Modal {
    AtEnd(Box<Goal>),
    Always(Box<Goal>),
    Sometime(Box<Goal>),
    Within(Number, Box<Goal>),
    AtMostOnce(Box<Goal>),
    SometimeAfter(Box<Goal>, Box<Goal>),
    SometimeBefore(Box<Goal>, Box<Goal>),
    AlwaysWithin(Number, Box<Goal>, Box<Goal>),
    HoldDuring(Number, Number, Box<Goal>),
    HoldAfter(Number, Box<Goal>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignOp {
    Assign,
    Increase,
    Decrease,
    ScaleUp,
    ScaleDown,
}

impl AssignOp {
    pub const ALL: [AssignOp; 5] = [
        AssignOp::Assign,
        AssignOp::Increase,
        AssignOp::Decrease,
        AssignOp::ScaleUp,
        AssignOp::ScaleDown,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            AssignOp::Assign => "assign",
            AssignOp::Increase => "increase",
            AssignOp::Decrease => "decrease",
            AssignOp::ScaleUp => "scale-up",
            AssignOp::ScaleDown => "scale-down",
        }
    }

    pub fn from_keyword(s: &str) -> Option<AssignOp> {
        AssignOp::ALL
            .into_iter()
            .find(|op| op.keyword().eq_ignore_ascii_case(s))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Effect {
    And(Vec<Effect>),
    Forall(Parameters, Box<Effect>),
    When(Goal, Box<Effect>),
    Add(Atom),
    Delete(Atom),
    Assign(AssignOp, FunctionTerm, Expr),
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub name: Name,
    pub parameters: Parameters,
    pub precondition: Option<Goal>,
    pub effect: Option<Effect>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeSpecifier {
    Start,
    End,
}

impl TimeSpecifier {
    pub fn keyword(self) -> &'static str {
        match self {
            TimeSpecifier::Start => "start",
            TimeSpecifier::End => "end",
        }
    }
}

/// `:duration` constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum DurationConstraint {
    /// `(and)` with no conjuncts is allowed.
    And(Vec<DurationConstraint>),
    /// `(<op> ?duration expr)`
    Compare(Comparison, Expr),
    /// `(at start|end <constraint>)`
    At(TimeSpecifier, Box<DurationConstraint>),
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimedGoal {
    And(Vec<TimedGoal>),
    AtStart(Goal),
    AtEnd(Goal),
    OverAll(Goal),
    Forall(Parameters, Box<TimedGoal>),
    Preference(Option<Name>, Box<TimedGoal>),
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimedEffect {
    And(Vec<TimedEffect>),
    At(TimeSpecifier, Effect),
    Forall(Parameters, Box<TimedEffect>),
    When(TimedGoal, Box<TimedEffect>),
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurativeAction {
    pub name: Name,
    pub parameters: Parameters,
    pub duration: DurationConstraint,
    pub condition: Option<TimedGoal>,
    pub effect: Option<TimedEffect>,
}

/// `(name ?a - t …)` in `:predicates`, and the head of a derived predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct PredicateDecl {
    pub name: Name,
    pub parameters: Parameters,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionType {
    Number,
    /// Object fluent; result is an object of this type.
    Object(Type),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDecl {
    pub name: Name,
    pub parameters: Parameters,
    pub return_type: FunctionType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedPredicate {
    pub head: PredicateDecl,
    pub body: Goal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub name: Name,
    /// Flags as written, without the leading `:`. Never enforced.
    pub requirements: Vec<Name>,
    pub types: Vec<TypedList<Name>>,
    pub constants: Vec<TypedList<Name>>,
    pub predicates: Vec<PredicateDecl>,
    pub functions: Vec<FunctionDecl>,
    pub constraints: Option<Goal>,
    pub actions: Vec<Action>,
    pub durative_actions: Vec<DurativeAction>,
    pub derived_predicates: Vec<DerivedPredicate>,
    /// Malformed declarations that were dropped while parsing.
    pub recovered_errors: usize,
}

impl Domain {
    pub fn new(name: impl Into<Name>) -> Domain {
        Domain {
            name: name.into(),
            requirements: Vec::new(),
            types: Vec::new(),
            constants: Vec::new(),
            predicates: Vec::new(),
            functions: Vec::new(),
            constraints: None,
            actions: Vec::new(),
            durative_actions: Vec::new(),
            derived_predicates: Vec::new(),
            recovered_errors: 0,
        }
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Pos(Atom),
    Neg(Atom),
}

impl Literal {
    pub fn atom(&self) -> &Atom {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitValue {
    Number(Number),
    /// Object fluent value.
    Object(Name),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitElement {
    Literal(Literal),
    /// `(= (f a b) v)`
    Assign(FunctionTerm, InitValue),
    /// `(at t literal)`
    Timed(Number, Literal),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimization {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub optimization: Optimization,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub name: Name,
    pub domain_name: Name,
    pub requirements: Vec<Name>,
    pub objects: Vec<TypedList<Name>>,
    pub init: Vec<InitElement>,
    pub goal: Goal,
    pub constraints: Option<Goal>,
    pub metric: Option<Metric>,
    pub recovered_errors: usize,
}

impl Problem {
    pub fn new(name: impl Into<Name>, domain_name: impl Into<Name>) -> Problem {
        Problem {
            name: name.into(),
            domain_name: domain_name.into(),
            requirements: Vec::new(),
            objects: Vec::new(),
            init: Vec::new(),
            goal: Goal::And(Vec::new()),
            constraints: None,
            metric: None,
            recovered_errors: 0,
        }
    }
}

/// Checks for parser placeholders anywhere in a tree.
pub trait Completeness {
    fn is_complete(&self) -> bool;
}

impl<T: Completeness> Completeness for Option<T> {
    fn is_complete(&self) -> bool {
        self.as_ref().is_none_or(T::is_complete)
    }
}

impl<T: Completeness> Completeness for Vec<T> {
    fn is_complete(&self) -> bool {
        self.iter().all(T::is_complete)
    }
}

impl<T: Completeness> Completeness for Box<T> {
    fn is_complete(&self) -> bool {
        (**self).is_complete()
    }
}

impl Completeness for Expr {
    fn is_complete(&self) -> bool {
        match self {
            Expr::Error => false,
            Expr::Arith(_, args) => args.is_complete(),
            Expr::Negate(e) => e.is_complete(),
            Expr::Number(_) | Expr::Function(_) | Expr::Variable(_) | Expr::IsViolated(_) => true,
        }
    }
}

impl Completeness for Goal {
    fn is_complete(&self) -> bool {
        match self {
            Goal::Error => false,
            Goal::Atom(_) => true,
            Goal::Not(g) => g.is_complete(),
            Goal::And(gs) | Goal::Or(gs) => gs.is_complete(),
            Goal::Imply(a, b) => a.is_complete() && b.is_complete(),
            Goal::Exists(_, g) | Goal::Forall(_, g) | Goal::Preference(_, g) => g.is_complete(),
            Goal::Compare(_, a, b) => a.is_complete() && b.is_complete(),
            Goal::Modal(m) => match m {
                Modal::AtEnd(g)
                | Modal::Always(g)
                | Modal::Sometime(g)
                | Modal::Within(_, g)
                | Modal::AtMostOnce(g)
                | Modal::HoldDuring(_, _, g)
                | Modal::HoldAfter(_, g) => g.is_complete(),
                Modal::SometimeAfter(a, b)
                | Modal::SometimeBefore(a, b)
                | Modal::AlwaysWithin(_, a, b) => a.is_complete() && b.is_complete(),
            },
        }
    }
}

impl Completeness for Effect {
    fn is_complete(&self) -> bool {
        match self {
            Effect::Error => false,
            Effect::And(es) => es.is_complete(),
            Effect::Forall(_, e) => e.is_complete(),
            Effect::When(g, e) => g.is_complete() && e.is_complete(),
            Effect::Add(_) | Effect::Delete(_) => true,
            Effect::Assign(_, _, e) => e.is_complete(),
        }
    }
}

impl Completeness for DurationConstraint {
    fn is_complete(&self) -> bool {
        match self {
            DurationConstraint::Error => false,
            DurationConstraint::And(cs) => cs.is_complete(),
            DurationConstraint::Compare(_, e) => e.is_complete(),
            DurationConstraint::At(_, c) => c.is_complete(),
        }
    }
}

impl Completeness for TimedGoal {
    fn is_complete(&self) -> bool {
        match self {
            TimedGoal::Error => false,
            TimedGoal::And(gs) => gs.is_complete(),
            TimedGoal::AtStart(g) | TimedGoal::AtEnd(g) | TimedGoal::OverAll(g) => g.is_complete(),
            TimedGoal::Forall(_, g) | TimedGoal::Preference(_, g) => g.is_complete(),
        }
    }
}

impl Completeness for TimedEffect {
    fn is_complete(&self) -> bool {
        match self {
            TimedEffect::Error => false,
            TimedEffect::And(es) => es.is_complete(),
            TimedEffect::At(_, e) => e.is_complete(),
            TimedEffect::Forall(_, e) => e.is_complete(),
            TimedEffect::When(g, e) => g.is_complete() && e.is_complete(),
        }
    }
}

impl Completeness for Action {
    fn is_complete(&self) -> bool {
        self.precondition.is_complete() && self.effect.is_complete()
    }
}

impl Completeness for DurativeAction {
    fn is_complete(&self) -> bool {
        self.duration.is_complete() && self.condition.is_complete() && self.effect.is_complete()
    }
}

impl Completeness for DerivedPredicate {
    fn is_complete(&self) -> bool {
        self.body.is_complete()
    }
}

impl Completeness for Metric {
    fn is_complete(&self) -> bool {
        self.expr.is_complete()
    }
}

impl Completeness for Domain {
    fn is_complete(&self) -> bool {
        self.recovered_errors == 0
            && self.constraints.is_complete()
            && self.actions.is_complete()
            && self.durative_actions.is_complete()
            && self.derived_predicates.is_complete()
    }
}

impl Completeness for Problem {
    fn is_complete(&self) -> bool {
        self.recovered_errors == 0
            && self.goal.is_complete()
            && self.constraints.is_complete()
            && self.metric.is_complete()
    }
}
