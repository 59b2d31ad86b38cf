//! Error-tolerant parser from the parenthesis tree to typed ASTs.
//!
//! A malformed element is reported once, on the smallest element that does
//! not fit the grammar at its position, and replaced by a placeholder (or
//! dropped) so that its siblings are still parsed. While walking the tree the
//! parser also records the highlighting scope of every token it recognizes.

use crate::ast::*;
use crate::diagnostic::{self, Code, Diagnostic};
use crate::keywords;
use crate::lexer::{self, Token, TokenKind};
use crate::scope::Scope;
use crate::sexp::{self, List, Sexp};
use crate::span::SourceSpan;

#[derive(Debug, Clone)]
pub struct ParseResult<T> {
    pub ast: T,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Domain,
    Problem,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Domain(Domain),
    Problem(Problem),
}

/// Everything learned from one pass over a file.
#[derive(Debug)]
pub struct Analysis {
    pub tokens: Vec<Token>,
    /// Parallel to `tokens`; `None` for whitespace.
    pub scopes: Vec<Option<Scope>>,
    pub diagnostics: Vec<Diagnostic>,
    pub parsed: Parsed,
}

pub fn parse_domain(text: &str) -> ParseResult<Domain> {
    let a = analyze_as(text, FileKind::Domain);
    match a.parsed {
        Parsed::Domain(ast) => ParseResult {
            ast,
            diagnostics: a.diagnostics,
        },
        Parsed::Problem(_) => unreachable!("analyzed as domain"),
    }
}

pub fn parse_problem(text: &str) -> ParseResult<Problem> {
    let a = analyze_as(text, FileKind::Problem);
    match a.parsed {
        Parsed::Problem(ast) => ParseResult {
            ast,
            diagnostics: a.diagnostics,
        },
        Parsed::Domain(_) => unreachable!("analyzed as problem"),
    }
}

/// Guess the file kind from its `(define (problem …))` or `(define (domain …))` header.
pub fn detect_kind(text: &str) -> FileKind {
    let tokens = lexer::tokenize(text);
    let mut sig = tokens.iter().filter(|t| !t.kind.is_trivia());
    while let Some(t) = sig.next() {
        if t.kind == TokenKind::Name && t.text.eq_ignore_ascii_case("define") {
            let header = sig.nth(1);
            if header.is_some_and(|h| h.text.eq_ignore_ascii_case("problem")) {
                return FileKind::Problem;
            }
            break;
        }
    }
    FileKind::Domain
}

pub fn analyze(text: &str) -> Analysis {
    analyze_as(text, detect_kind(text))
}

pub fn analyze_as(text: &str, kind: FileKind) -> Analysis {
    let tokens = lexer::tokenize(text);
    let tree = sexp::build(text, &tokens);
    let mut p = Parser {
        text,
        tokens: &tokens,
        scopes: vec![None; tokens.len()],
        diagnostics: tree.diagnostics,
    };
    let parsed = p.file(&tree.items, kind);
    let Parser {
        mut scopes,
        diagnostics,
        ..
    } = p;
    for (scope, tok) in scopes.iter_mut().zip(&tokens) {
        if scope.is_none() {
            *scope = default_scope(tok.kind);
        }
    }
    let diagnostics = diagnostic::normalize(diagnostics);
    let parsed = match parsed {
        Parsed::Domain(mut d) => {
            d.recovered_errors = diagnostics.len();
            Parsed::Domain(d)
        }
        Parsed::Problem(mut pr) => {
            pr.recovered_errors = diagnostics.len();
            Parsed::Problem(pr)
        }
    };
    Analysis {
        tokens,
        scopes,
        diagnostics,
        parsed,
    }
}

fn default_scope(kind: TokenKind) -> Option<Scope> {
    Some(match kind {
        TokenKind::Whitespace => return None,
        TokenKind::LParen | TokenKind::RParen | TokenKind::Dash => Scope::Punctuation,
        TokenKind::Comment => Scope::Comment,
        TokenKind::Number => Scope::Number,
        TokenKind::Variable => Scope::Variable,
        TokenKind::Keyword => Scope::SectionKeyword,
        TokenKind::Name => Scope::Constant,
        TokenKind::InvalidChar => Scope::Plain,
    })
}

/// How variables met inside a formula are checked.
enum Binding {
    /// Variables must be bound by one of these (innermost last).
    Scoped(Vec<Variable>),
    /// No variables allowed (`:init`).
    Ground,
}

impl Binding {
    fn none() -> Binding {
        Binding::Scoped(Vec::new())
    }

    fn with_params(params: &[TypedList<Variable>]) -> Binding {
        Binding::Scoped(declared_variables(params).cloned().collect())
    }
}

const MODAL_OPS: &[&str] = &[
    "always",
    "sometime",
    "within",
    "at-most-once",
    "sometime-after",
    "sometime-before",
    "always-within",
    "hold-during",
    "hold-after",
];

struct Parser<'a> {
    text: &'a str,
    tokens: &'a [Token],
    scopes: Vec<Option<Scope>>,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> Parser<'a> {
    // ---- helpers ---------------------------------------------------------

    fn tok(&self, i: usize) -> &'a Token {
        &self.tokens[i]
    }

    fn mark(&mut self, i: usize, scope: Scope) {
        self.scopes[i] = Some(scope);
    }

    fn span(&self, s: &Sexp) -> SourceSpan {
        s.span(self.tokens)
    }

    fn error(&mut self, code: Code, span: SourceSpan, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::error(code, span, message));
    }

    fn snippet(&self, span: SourceSpan) -> String {
        let s = &self.text[span.start_byte..span.end_byte];
        match s.char_indices().nth(30) {
            Some((cut, _)) => format!("{}…", &s[..cut]),
            None => s.to_string(),
        }
    }

    fn expect_list<'s>(&mut self, s: &'s Sexp, what: &str) -> Option<&'s List> {
        match s {
            Sexp::List(l) => Some(l),
            Sexp::Atom(i) => {
                let t = self.tok(*i);
                self.error(
                    Code::InvalidSyntax,
                    t.span,
                    format!("expected {what} in parentheses, found `{}`", t.text),
                );
                None
            }
        }
    }

    /// Head atom of a list as (token index, lowercase text).
    fn head(&self, l: &List) -> Option<(usize, String)> {
        let i = l.items.first()?.as_atom()?;
        Some((i, self.tok(i).text.to_ascii_lowercase()))
    }

    fn atom_is(&self, s: Option<&Sexp>, word: &str) -> bool {
        s.and_then(Sexp::as_atom)
            .is_some_and(|i| self.tok(i).text.eq_ignore_ascii_case(word))
    }

    fn arity(&mut self, l: &List, op: &str, n: usize) -> bool {
        let got = l.items.len() - 1;
        if got != n {
            let plural = if n == 1 { "" } else { "s" };
            self.error(
                Code::InvalidSyntax,
                l.span,
                format!("`{op}` takes {n} argument{plural}, found {got}"),
            );
            return false;
        }
        true
    }

    fn identifier(&mut self, s: &Sexp, what: &str, scope: Scope) -> Option<Name> {
        let span = self.span(s);
        match s {
            Sexp::Atom(i) if self.tok(*i).kind == TokenKind::Name && is_identifier(&self.tok(*i).text) => {
                self.mark(*i, scope);
                Some(Name::new(self.tok(*i).text.clone()))
            }
            _ => {
                let found = self.snippet(span);
                self.error(Code::InvalidSyntax, span, format!("expected {what}, found `{found}`"));
                None
            }
        }
    }

    fn number(&mut self, s: &Sexp, what: &str) -> Option<Number> {
        if let Sexp::Atom(i) = s {
            if self.tok(*i).kind == TokenKind::Number {
                self.mark(*i, Scope::Number);
                return Number::parse(&self.tok(*i).text);
            }
        }
        let span = self.span(s);
        let found = self.snippet(span);
        self.error(Code::InvalidSyntax, span, format!("expected {what}, found `{found}`"));
        None
    }

    fn variable(&mut self, i: usize, binding: &Binding) -> Option<Variable> {
        let t = self.tok(i);
        let name = &t.text[1..];
        if !is_identifier(name) {
            self.error(Code::InvalidSyntax, t.span, format!("`{}` is not a valid variable", t.text));
            return None;
        }
        self.mark(i, Scope::Variable);
        let var = Variable::new(name);
        match binding {
            Binding::Ground => {
                self.error(
                    Code::NonGroundInit,
                    t.span,
                    format!("variable `{}` in the initial state", t.text),
                );
                return None;
            }
            Binding::Scoped(vars) if !vars.contains(&var) => {
                self.error(
                    Code::UnboundVariable,
                    t.span,
                    format!("variable `{}` is not bound by the parameters or a quantifier", t.text),
                );
            }
            Binding::Scoped(_) => {}
        }
        Some(var)
    }

    fn op(&mut self, i: usize) {
        self.mark(i, Scope::DefinitionKeyword);
    }

    // ---- typed lists -----------------------------------------------------

    fn typed_list<T>(
        &mut self,
        items: &[Sexp],
        mut item: impl FnMut(&mut Self, &Sexp) -> Option<T>,
    ) -> Vec<TypedList<T>> {
        let mut out = Vec::new();
        let mut pending = Vec::new();
        let mut pending_failed = false;
        let mut i = 0;
        while i < items.len() {
            let is_dash = items[i]
                .as_atom()
                .is_some_and(|t| self.tok(t).kind == TokenKind::Dash);
            if !is_dash {
                match item(self, &items[i]) {
                    Some(v) => pending.push(v),
                    None => pending_failed = true,
                }
                i += 1;
                continue;
            }
            let dash = self.span(&items[i]);
            let Some(ty_s) = items.get(i + 1) else {
                self.error(Code::MissingElement, dash, "`-` must be followed by a type");
                break;
            };
            let ty = self.type_ref(ty_s);
            if pending.is_empty() && !pending_failed {
                let span = dash.cover(&self.span(ty_s));
                self.error(Code::InvalidSyntax, span, "type annotation with nothing to annotate");
            } else if let Some(ty) = ty {
                if !pending.is_empty() {
                    out.push(TypedList::new(std::mem::take(&mut pending), ty));
                }
            }
            pending.clear();
            pending_failed = false;
            i += 2;
        }
        if !pending.is_empty() {
            out.push(TypedList::new(pending, Type::object()));
        }
        out
    }

    fn type_ref(&mut self, s: &Sexp) -> Option<Type> {
        match s {
            Sexp::Atom(_) => self.identifier(s, "a type name", Scope::TypeName).map(Type::Named),
            Sexp::List(l) => {
                let Some((h, word)) = self.head(l).filter(|(_, w)| w == "either") else {
                    let found = self.snippet(l.span);
                    self.error(Code::InvalidSyntax, l.span, format!("expected a type, found `{found}`"));
                    return None;
                };
                self.op(h);
                if l.items.len() < 2 {
                    self.error(Code::MissingElement, l.span, format!("`({word})` needs at least one type"));
                    return None;
                }
                let mut names = Vec::new();
                for s in &l.items[1..] {
                    names.push(self.identifier(s, "a type name", Scope::TypeName)?);
                }
                Some(Type::Either(names))
            }
        }
    }

    fn parameters(&mut self, s: &Sexp) -> Option<Parameters> {
        let before = self.diagnostics.len();
        let params = self.partial_parameters(s)?;
        (self.diagnostics.len() == before).then_some(params)
    }

    /// Every well-formed declaration of the list, even if others are broken,
    /// so that an action body is still checked against its parameters.
    fn partial_parameters(&mut self, s: &Sexp) -> Option<Parameters> {
        let l = self.expect_list(s, "a parameter list")?;
        let params = self.typed_list(&l.items, |p, s| match s {
            Sexp::Atom(i) if p.tok(*i).kind == TokenKind::Variable => {
                // declaration site, nothing to check against
                p.variable(*i, &Binding::Scoped(vec![Variable::new(&p.tok(*i).text[1..])]))
            }
            _ => {
                let span = p.span(s);
                let found = p.snippet(span);
                p.error(Code::InvalidSyntax, span, format!("expected a variable, found `{found}`"));
                None
            }
        });
        Some(params)
    }

    fn name_list(&mut self, items: &[Sexp], what: &str, scope: Scope) -> Vec<TypedList<Name>> {
        self.typed_list(items, |p, s| p.identifier(s, what, scope))
    }

    // ---- terms and expressions ------------------------------------------

    fn term(&mut self, s: &Sexp, binding: &Binding) -> Option<Term> {
        match s {
            Sexp::Atom(i) if self.tok(*i).kind == TokenKind::Variable => {
                self.variable(*i, binding).map(Term::Variable)
            }
            Sexp::Atom(_) => self
                .identifier(s, "a name or variable", Scope::Constant)
                .map(Term::Name),
            Sexp::List(l) => self.function_term(l, binding).map(Term::Function),
        }
    }

    fn function_term(&mut self, l: &List, binding: &Binding) -> Option<FunctionTerm> {
        let Some(head) = l.items.first() else {
            self.error(Code::InvalidSyntax, l.span, "empty function term `()`");
            return None;
        };
        let name = self.identifier(head, "a function name", Scope::FunctionName)?;
        let mut args = Vec::new();
        let mut ok = true;
        for s in &l.items[1..] {
            match self.term(s, binding) {
                Some(t) => args.push(t),
                None => ok = false,
            }
        }
        ok.then_some(FunctionTerm { name, args })
    }

    /// `(f t…)` or a bare 0-ary function symbol.
    fn function_head(&mut self, s: &Sexp, binding: &Binding) -> Option<FunctionTerm> {
        match s {
            Sexp::List(l) => self.function_term(l, binding),
            Sexp::Atom(_) => {
                let name = self.identifier(s, "a function", Scope::FunctionName)?;
                Some(FunctionTerm { name, args: Vec::new() })
            }
        }
    }

    fn expr(&mut self, s: &Sexp, binding: &Binding) -> Expr {
        self.try_expr(s, binding).unwrap_or(Expr::Error)
    }

    fn try_expr(&mut self, s: &Sexp, binding: &Binding) -> Option<Expr> {
        let l = match s {
            Sexp::Atom(i) => {
                return match self.tok(*i).kind {
                    TokenKind::Number => self.number(s, "a number").map(Expr::Number),
                    TokenKind::Variable => self.variable(*i, binding).map(Expr::Variable),
                    _ => self
                        .identifier(s, "a numeric expression", Scope::FunctionName)
                        .map(|name| Expr::Function(FunctionTerm { name, args: Vec::new() })),
                };
            }
            Sexp::List(l) => l,
        };
        let Some(head) = l.items.first().and_then(Sexp::as_atom) else {
            self.error(Code::InvalidSyntax, l.span, "expected a numeric expression");
            return None;
        };
        let word = self.tok(head).text.to_ascii_lowercase();
        let args = &l.items[1..];
        let arith = match word.as_str() {
            "+" => Some((ArithOp::Add, 2..=usize::MAX)),
            "*" => Some((ArithOp::Mul, 2..=usize::MAX)),
            "/" => Some((ArithOp::Div, 2..=2)),
            "-" if args.len() == 1 => {
                self.op(head);
                return Some(Expr::Negate(Box::new(self.try_expr(&args[0], binding)?)));
            }
            "-" => Some((ArithOp::Sub, 2..=2)),
            _ => None,
        };
        if let Some((op, range)) = arith {
            self.op(head);
            if !range.contains(&args.len()) {
                self.error(
                    Code::InvalidSyntax,
                    l.span,
                    format!("`{}` has the wrong number of operands ({})", op.symbol(), args.len()),
                );
                return None;
            }
            let mut operands = Vec::new();
            for a in args {
                operands.push(self.try_expr(a, binding));
            }
            return Some(Expr::Arith(op, operands.into_iter().collect::<Option<_>>()?));
        }
        if word == "is-violated" {
            self.op(head);
            if !self.arity(l, "is-violated", 1) {
                return None;
            }
            return self
                .identifier(&args[0], "a preference name", Scope::Constant)
                .map(Expr::IsViolated);
        }
        self.function_term(l, binding).map(Expr::Function)
    }

    // ---- goals -----------------------------------------------------------

    fn atom(&mut self, l: &List, binding: &Binding) -> Option<Atom> {
        let Some(head) = l.items.first() else {
            self.error(Code::InvalidSyntax, l.span, "empty formula `()`");
            return None;
        };
        let predicate = match head {
            Sexp::Atom(i) if self.tok(*i).text == "=" => {
                self.op(*i);
                Name::new("=")
            }
            _ => self.identifier(head, "a predicate name", Scope::PredicateName)?,
        };
        let mut args = Vec::new();
        let mut ok = true;
        for s in &l.items[1..] {
            match self.term(s, binding) {
                Some(t) => args.push(t),
                None => ok = false,
            }
        }
        ok.then_some(Atom { predicate, args })
    }

    fn goal(&mut self, s: &Sexp, binding: &mut Binding) -> Goal {
        self.try_goal(s, binding).unwrap_or(Goal::Error)
    }

    fn goals(&mut self, items: &[Sexp], binding: &mut Binding) -> Vec<Goal> {
        items.iter().map(|s| self.goal(s, binding)).collect()
    }

    fn is_simple_term(&self, s: &Sexp) -> bool {
        s.as_atom().is_some_and(|i| {
            matches!(self.tok(i).kind, TokenKind::Name | TokenKind::Variable)
        })
    }

    fn quantified<T>(
        &mut self,
        l: &List,
        op: &str,
        binding: &mut Binding,
        body: impl FnOnce(&mut Self, &Sexp, &mut Binding) -> T,
    ) -> Option<(Parameters, T)> {
        if !self.arity(l, op, 2) {
            return None;
        }
        let params = self.parameters(&l.items[1])?;
        let added = declared_variables(&params).count();
        if let Binding::Scoped(vars) = binding {
            vars.extend(declared_variables(&params).cloned());
        }
        let inner = body(self, &l.items[2], binding);
        if let Binding::Scoped(vars) = binding {
            vars.truncate(vars.len() - added);
        }
        Some((params, inner))
    }

    fn try_goal(&mut self, s: &Sexp, binding: &mut Binding) -> Option<Goal> {
        let l = self.expect_list(s, "a goal formula")?;
        let Some((h, word)) = self.head(l) else {
            let msg = if l.items.is_empty() { "empty goal `()`" } else { "goal must start with an operator or predicate" };
            self.error(Code::InvalidSyntax, l.span, msg);
            return None;
        };
        let args = &l.items[1..];
        if self.tok(h).kind != TokenKind::Name {
            let found = self.tok(h).text.clone();
            let code = if self.tok(h).kind == TokenKind::Keyword { Code::MisplacedKeyword } else { Code::InvalidSyntax };
            self.error(code, l.span, format!("`{found}` cannot start a goal"));
            return None;
        }
        let boxed = |p: &mut Self, s: &Sexp, b: &mut Binding| Box::new(p.goal(s, b));
        let goal = match word.as_str() {
            "and" => {
                self.op(h);
                Goal::And(self.goals(args, binding))
            }
            "or" => {
                self.op(h);
                Goal::Or(self.goals(args, binding))
            }
            "not" => {
                self.op(h);
                if !self.arity(l, "not", 1) {
                    return None;
                }
                Goal::Not(boxed(self, &args[0], binding))
            }
            "imply" => {
                self.op(h);
                if !self.arity(l, "imply", 2) {
                    return None;
                }
                Goal::Imply(boxed(self, &args[0], binding), boxed(self, &args[1], binding))
            }
            "exists" | "forall" => {
                self.op(h);
                let (params, body) = self.quantified(l, &word, binding, boxed)?;
                if word == "exists" {
                    Goal::Exists(params, body)
                } else {
                    Goal::Forall(params, body)
                }
            }
            "preference" => {
                self.op(h);
                match args.len() {
                    1 => Goal::Preference(None, boxed(self, &args[0], binding)),
                    2 => {
                        let name = self.identifier(&args[0], "a preference name", Scope::Constant)?;
                        Goal::Preference(Some(name), boxed(self, &args[1], binding))
                    }
                    n => {
                        self.error(Code::InvalidSyntax, l.span, format!("`preference` takes 1 or 2 arguments, found {n}"));
                        return None;
                    }
                }
            }
            "at" if args.len() == 2 && self.atom_is(args.first(), "end") && args[1].as_list().is_some() => {
                self.op(h);
                self.op(args[0].as_atom().expect("checked"));
                Goal::Modal(Modal::AtEnd(boxed(self, &args[1], binding)))
            }
            w if MODAL_OPS.contains(&w) => {
                self.op(h);
                Goal::Modal(self.modal(l, w, binding)?)
            }
            w => match Comparison::from_symbol(w) {
                Some(cmp) => {
                    self.op(h);
                    if !self.arity(l, w, 2) {
                        return None;
                    }
                    if cmp == Comparison::Eq && self.is_simple_term(&args[0]) && self.is_simple_term(&args[1]) {
                        return self.atom(l, binding).map(Goal::Atom);
                    }
                    let a = self.try_expr(&args[0], binding);
                    let b = self.try_expr(&args[1], binding);
                    Goal::Compare(cmp, a?, b?)
                }
                None => Goal::Atom(self.atom(l, binding)?),
            },
        };
        Some(goal)
    }

    fn modal(&mut self, l: &List, op: &str, binding: &mut Binding) -> Option<Modal> {
        let a = &l.items[1..];
        let g = |p: &mut Self, s: &Sexp, b: &mut Binding| Box::new(p.goal(s, b));
        let m = match op {
            "always" | "sometime" | "at-most-once" => {
                if !self.arity(l, op, 1) {
                    return None;
                }
                let inner = g(self, &a[0], binding);
                match op {
                    "always" => Modal::Always(inner),
                    "sometime" => Modal::Sometime(inner),
                    _ => Modal::AtMostOnce(inner),
                }
            }
            "sometime-after" | "sometime-before" => {
                if !self.arity(l, op, 2) {
                    return None;
                }
                let (x, y) = (g(self, &a[0], binding), g(self, &a[1], binding));
                if op == "sometime-after" {
                    Modal::SometimeAfter(x, y)
                } else {
                    Modal::SometimeBefore(x, y)
                }
            }
            "within" | "hold-after" => {
                if !self.arity(l, op, 2) {
                    return None;
                }
                let n = self.number(&a[0], "a time");
                let inner = g(self, &a[1], binding);
                if op == "within" {
                    Modal::Within(n?, inner)
                } else {
                    Modal::HoldAfter(n?, inner)
                }
            }
            "always-within" => {
                if !self.arity(l, op, 3) {
                    return None;
                }
                let n = self.number(&a[0], "a time");
                let (x, y) = (g(self, &a[1], binding), g(self, &a[2], binding));
                Modal::AlwaysWithin(n?, x, y)
            }
            _ => {
                if !self.arity(l, op, 3) {
                    return None;
                }
                let n1 = self.number(&a[0], "a time");
                let n2 = self.number(&a[1], "a time");
                let inner = g(self, &a[2], binding);
                Modal::HoldDuring(n1?, n2?, inner)
            }
        };
        Some(m)
    }

    // ---- effects ---------------------------------------------------------

    fn effect(&mut self, s: &Sexp, binding: &mut Binding) -> Effect {
        self.try_effect(s, binding).unwrap_or(Effect::Error)
    }

    fn try_effect(&mut self, s: &Sexp, binding: &mut Binding) -> Option<Effect> {
        let l = self.expect_list(s, "an effect")?;
        let Some((h, word)) = self.head(l).filter(|(h, _)| self.tok(*h).kind == TokenKind::Name) else {
            let found = self.snippet(l.span);
            let code = match self.head(l) {
                Some((h, _)) if self.tok(h).kind == TokenKind::Keyword => Code::MisplacedKeyword,
                _ => Code::InvalidSyntax,
            };
            self.error(code, l.span, format!("expected an effect, found `{found}`"));
            return None;
        };
        let args = &l.items[1..];
        let effect = match word.as_str() {
            "and" => {
                self.op(h);
                Effect::And(args.iter().map(|s| self.effect(s, binding)).collect())
            }
            "not" => {
                self.op(h);
                if !self.arity(l, "not", 1) {
                    return None;
                }
                let inner = self.expect_list(&args[0], "an atomic formula")?;
                Effect::Delete(self.atom(inner, binding)?)
            }
            "forall" => {
                self.op(h);
                let (params, body) =
                    self.quantified(l, "forall", binding, |p, s, b| Box::new(p.effect(s, b)))?;
                Effect::Forall(params, body)
            }
            "when" => {
                self.op(h);
                if !self.arity(l, "when", 2) {
                    return None;
                }
                let cond = self.goal(&args[0], binding);
                Effect::When(cond, Box::new(self.effect(&args[1], binding)))
            }
            w => match AssignOp::from_keyword(w) {
                Some(op) => {
                    self.op(h);
                    if !self.arity(l, w, 2) {
                        return None;
                    }
                    let target = self.function_head(&args[0], binding);
                    let value = self.try_expr(&args[1], binding);
                    Effect::Assign(op, target?, value?)
                }
                None => Effect::Add(self.atom(l, binding)?),
            },
        };
        Some(effect)
    }

    // ---- durative actions ------------------------------------------------

    fn time_specifier(&mut self, s: &Sexp) -> Option<TimeSpecifier> {
        let i = s.as_atom()?;
        let ts = match self.tok(i).text.to_ascii_lowercase().as_str() {
            "start" => TimeSpecifier::Start,
            "end" => TimeSpecifier::End,
            _ => return None,
        };
        self.op(i);
        Some(ts)
    }

    fn duration(&mut self, s: &Sexp, binding: &mut Binding) -> DurationConstraint {
        self.try_duration(s, binding).unwrap_or(DurationConstraint::Error)
    }

    fn try_duration(&mut self, s: &Sexp, binding: &mut Binding) -> Option<DurationConstraint> {
        let l = self.expect_list(s, "a duration constraint")?;
        let (h, word) = self.head(l).unwrap_or((usize::MAX, String::new()));
        let args = &l.items[1..];
        if word == "and" {
            self.op(h);
            return Some(DurationConstraint::And(
                args.iter().map(|s| self.duration(s, binding)).collect(),
            ));
        }
        if word == "at" && args.len() == 2 {
            if let Some(ts) = self.time_specifier(&args[0]) {
                self.op(h);
                let inner = self.try_duration(&args[1], binding)?;
                return Some(DurationConstraint::At(ts, Box::new(inner)));
            }
        }
        match Comparison::from_symbol(&word) {
            Some(cmp @ (Comparison::Le | Comparison::Ge | Comparison::Eq))
                if args.len() == 2 && self.atom_is(args.first(), "?duration") =>
            {
                self.op(h);
                self.mark(args[0].as_atom().expect("checked"), Scope::Variable);
                let e = self.try_expr(&args[1], binding)?;
                Some(DurationConstraint::Compare(cmp, e))
            }
            _ => {
                let found = self.snippet(l.span);
                self.error(
                    Code::InvalidSyntax,
                    l.span,
                    format!("expected a duration constraint like `(= ?duration 5)`, found `{found}`"),
                );
                None
            }
        }
    }

    fn timed_goal(&mut self, s: &Sexp, binding: &mut Binding) -> TimedGoal {
        self.try_timed_goal(s, binding).unwrap_or(TimedGoal::Error)
    }

    fn try_timed_goal(&mut self, s: &Sexp, binding: &mut Binding) -> Option<TimedGoal> {
        let l = self.expect_list(s, "a timed condition")?;
        let (h, word) = self.head(l).unwrap_or((usize::MAX, String::new()));
        let args = &l.items[1..];
        match word.as_str() {
            "and" => {
                self.op(h);
                Some(TimedGoal::And(args.iter().map(|s| self.timed_goal(s, binding)).collect()))
            }
            "at" if args.len() == 2 && self.time_specifier(&args[0]).is_some() => {
                self.op(h);
                let ts = self.time_specifier(&args[0]).expect("checked");
                let g = self.goal(&args[1], binding);
                Some(match ts {
                    TimeSpecifier::Start => TimedGoal::AtStart(g),
                    TimeSpecifier::End => TimedGoal::AtEnd(g),
                })
            }
            "over" if args.len() == 2 && self.atom_is(args.first(), "all") => {
                self.op(h);
                self.op(args[0].as_atom().expect("checked"));
                Some(TimedGoal::OverAll(self.goal(&args[1], binding)))
            }
            "forall" => {
                self.op(h);
                let (params, body) = self.quantified(l, "forall", binding, |p, s, b| {
                    Box::new(p.timed_goal(s, b))
                })?;
                Some(TimedGoal::Forall(params, body))
            }
            "preference" => {
                self.op(h);
                match args.len() {
                    1 => Some(TimedGoal::Preference(None, Box::new(self.timed_goal(&args[0], binding)))),
                    2 => {
                        let name = self.identifier(&args[0], "a preference name", Scope::Constant)?;
                        Some(TimedGoal::Preference(Some(name), Box::new(self.timed_goal(&args[1], binding))))
                    }
                    n => {
                        self.error(Code::InvalidSyntax, l.span, format!("`preference` takes 1 or 2 arguments, found {n}"));
                        None
                    }
                }
            }
            _ => {
                let found = self.snippet(l.span);
                self.error(
                    Code::InvalidSyntax,
                    l.span,
                    format!("expected `(at start …)`, `(at end …)` or `(over all …)`, found `{found}`"),
                );
                None
            }
        }
    }

    fn timed_effect(&mut self, s: &Sexp, binding: &mut Binding) -> TimedEffect {
        self.try_timed_effect(s, binding).unwrap_or(TimedEffect::Error)
    }

    fn try_timed_effect(&mut self, s: &Sexp, binding: &mut Binding) -> Option<TimedEffect> {
        let l = self.expect_list(s, "a timed effect")?;
        let (h, word) = self.head(l).unwrap_or((usize::MAX, String::new()));
        let args = &l.items[1..];
        match word.as_str() {
            "and" => {
                self.op(h);
                Some(TimedEffect::And(args.iter().map(|s| self.timed_effect(s, binding)).collect()))
            }
            "at" if args.len() == 2 && self.time_specifier(&args[0]).is_some() => {
                self.op(h);
                let ts = self.time_specifier(&args[0]).expect("checked");
                Some(TimedEffect::At(ts, self.effect(&args[1], binding)))
            }
            "forall" => {
                self.op(h);
                let (params, body) = self.quantified(l, "forall", binding, |p, s, b| {
                    Box::new(p.timed_effect(s, b))
                })?;
                Some(TimedEffect::Forall(params, body))
            }
            "when" => {
                self.op(h);
                if !self.arity(l, "when", 2) {
                    return None;
                }
                let cond = self.timed_goal(&args[0], binding);
                Some(TimedEffect::When(cond, Box::new(self.timed_effect(&args[1], binding))))
            }
            _ => {
                let found = self.snippet(l.span);
                self.error(
                    Code::InvalidSyntax,
                    l.span,
                    format!("expected `(at start …)` or `(at end …)`, found `{found}`"),
                );
                None
            }
        }
    }

    // ---- file structure --------------------------------------------------

    fn file(&mut self, items: &[Sexp], kind: FileKind) -> Parsed {
        let mut parsed = None;
        for item in items {
            let is_define = item
                .as_list()
                .and_then(|l| l.items.first())
                .and_then(Sexp::as_atom)
                .is_some_and(|i| {
                    let t = self.tok(i);
                    t.kind == TokenKind::Name && strsim::levenshtein(&t.text.to_ascii_lowercase(), "define") <= 2
                });
            match item {
                Sexp::List(l) if parsed.is_none() && is_define => parsed = Some(self.define(l, kind)),
                _ => {
                    let span = self.span(item);
                    let msg = if parsed.is_some() {
                        "unexpected content after the definition"
                    } else {
                        "expected `(define …)`"
                    };
                    self.error(Code::InvalidSyntax, span, msg);
                }
            }
        }
        parsed.unwrap_or_else(|| {
            if items.is_empty() {
                // zero-width at the end: nothing present is wrong, something is missing
                let end = crate::span::LineIndex::new(self.text).span(self.text.len(), self.text.len());
                self.error(Code::MissingElement, end, "no `(define …)` found");
            }
            match kind {
                FileKind::Domain => Parsed::Domain(Domain::new("")),
                FileKind::Problem => Parsed::Problem(Problem::new("", "")),
            }
        })
    }

    fn define(&mut self, l: &List, kind: FileKind) -> Parsed {
        let define = l.items[0].as_atom().expect("checked by caller");
        if self.tok(define).text.eq_ignore_ascii_case("define") {
            self.op(define);
        } else {
            let t = self.tok(define);
            self.error(Code::InvalidSyntax, t.span, format!("expected `define`, found `{}`", t.text));
        }
        let header = l.items.get(1).and_then(Sexp::as_list);
        let header_kind = header.and_then(|h| self.head(h)).and_then(|(i, w)| match w.as_str() {
            "domain" => Some((i, FileKind::Domain)),
            "problem" => Some((i, FileKind::Problem)),
            _ => None,
        });
        let name = match (header, header_kind) {
            (Some(h), Some((i, found))) => {
                if found != kind {
                    let expected = if kind == FileKind::Domain { "domain" } else { "problem" };
                    self.error(
                        Code::WrongFileKind,
                        l.span,
                        format!("expected a {expected} file, found `({} …)`", self.tok(i).text),
                    );
                    return match kind {
                        FileKind::Domain => Parsed::Domain(Domain::new("")),
                        FileKind::Problem => Parsed::Problem(Problem::new("", "")),
                    };
                }
                self.op(i);
                if self.arity(h, &self.tok(i).text.to_ascii_lowercase(), 1) {
                    self.identifier(&h.items[1], "a name", Scope::Constant)
                } else {
                    None
                }
            }
            _ => {
                let span = l.items.get(1).map_or(l.span, |s| self.span(s));
                self.error(Code::MissingElement, span, "expected `(domain <name>)` or `(problem <name>)`");
                None
            }
        };
        let name = name.unwrap_or_else(|| Name::new(""));
        let sections = l.items.get(2..).unwrap_or(&[]);
        match kind {
            FileKind::Domain => Parsed::Domain(self.domain(name, sections)),
            FileKind::Problem => Parsed::Problem(self.problem(name, sections, l)),
        }
    }

    /// Validate a section list and return its lowercase keyword.
    fn section<'s>(&mut self, s: &'s Sexp, own: &[&str], other: &[&str]) -> Option<(&'s List, String)> {
        let l = match s {
            Sexp::List(l) => l,
            Sexp::Atom(i) => {
                let t = self.tok(*i);
                self.error(Code::InvalidSyntax, t.span, format!("expected a `(:section …)`, found `{}`", t.text));
                return None;
            }
        };
        let Some((h, word)) = self.head(l).filter(|(h, _)| self.tok(*h).kind == TokenKind::Keyword) else {
            let found = self.snippet(l.span);
            self.error(Code::InvalidSyntax, l.span, format!("expected a `(:section …)`, found `{found}`"));
            return None;
        };
        if own.contains(&word.as_str()) {
            self.mark(h, Scope::SectionKeyword);
            return Some((l, word));
        }
        let text = &self.tok(h).text;
        if other.contains(&word.as_str()) {
            self.error(Code::MisplacedKeyword, l.span, format!("`{text}` is not allowed in this file"));
        } else {
            let msg = match keywords::near_miss(&word, own) {
                Some(k) => format!("unknown keyword `{text}`; did you mean `{k}`?"),
                None => format!("unknown keyword `{text}`"),
            };
            self.error(Code::UnknownKeyword, l.span, msg);
        }
        None
    }

    fn requirements(&mut self, l: &List) -> Vec<Name> {
        let mut out = Vec::new();
        for s in &l.items[1..] {
            let span = self.span(s);
            match s {
                Sexp::Atom(i) if self.tok(*i).kind == TokenKind::Keyword => {
                    let text = &self.tok(*i).text;
                    if keywords::is_requirement(text) {
                        self.mark(*i, Scope::RequirementFlag);
                        out.push(Name::new(&text[1..]));
                    } else {
                        let msg = match keywords::near_miss(text, keywords::REQUIREMENTS) {
                            Some(k) => format!("unknown requirement `{text}`; did you mean `{k}`?"),
                            None => format!("unknown requirement `{text}`"),
                        };
                        self.error(Code::UnknownRequirement, span, msg);
                    }
                }
                _ => {
                    let found = self.snippet(span);
                    self.error(Code::InvalidSyntax, span, format!("expected a requirement flag, found `{found}`"));
                }
            }
        }
        out
    }

    fn domain(&mut self, name: Name, sections: &[Sexp]) -> Domain {
        let mut d = Domain::new(name);
        let mut seen_constraints = false;
        let mut declared_types: Vec<Name> = Vec::new();
        for s in sections {
            let Some((l, word)) = self.section(s, keywords::DOMAIN_SECTIONS, keywords::PROBLEM_SECTIONS) else {
                continue;
            };
            let body = &l.items[1..];
            match word.as_str() {
                ":requirements" => d.requirements.extend(self.requirements(l)),
                ":types" => {
                    let groups = self.typed_list(body, |p, s| {
                        let name = p.identifier(s, "a type name", Scope::TypeName)?;
                        if declared_types.contains(&name) {
                            let span = p.span(s);
                            p.error(Code::DuplicateDeclaration, span, format!("type `{name}` is declared twice"));
                            return None;
                        }
                        declared_types.push(name.clone());
                        Some(name)
                    });
                    d.types.extend(groups);
                }
                ":constants" => d.constants.extend(self.name_list(body, "a constant name", Scope::Constant)),
                ":predicates" => {
                    for s in body {
                        if let Some(p) = self.predicate_decl(s) {
                            d.predicates.push(p);
                        }
                    }
                }
                ":functions" => d.functions.extend(self.functions(body)),
                ":constraints" => {
                    if seen_constraints {
                        self.error(Code::DuplicateDeclaration, l.span, "second `:constraints` section");
                        continue;
                    }
                    seen_constraints = true;
                    if self.arity(l, ":constraints", 1) {
                        d.constraints = Some(self.goal(&body[0], &mut Binding::none()));
                    }
                }
                ":action" => {
                    if let Some(a) = self.action(l) {
                        d.actions.push(a);
                    }
                }
                ":durative-action" => {
                    if let Some(a) = self.durative_action(l) {
                        d.durative_actions.push(a);
                    }
                }
                _ => {
                    if let Some(dp) = self.derived(l) {
                        d.derived_predicates.push(dp);
                    }
                }
            }
        }
        d
    }

    fn predicate_decl(&mut self, s: &Sexp) -> Option<PredicateDecl> {
        let l = self.expect_list(s, "a predicate declaration")?;
        let Some(head) = l.items.first() else {
            self.error(Code::InvalidSyntax, l.span, "empty predicate declaration `()`");
            return None;
        };
        let name = self.identifier(head, "a predicate name", Scope::PredicateName)?;
        let before = self.diagnostics.len();
        let parameters = self.typed_list(&l.items[1..], |p, s| match s {
            Sexp::Atom(i) if p.tok(*i).kind == TokenKind::Variable => {
                p.variable(*i, &Binding::Scoped(vec![Variable::new(&p.tok(*i).text[1..])]))
            }
            _ => {
                let span = p.span(s);
                let found = p.snippet(span);
                p.error(Code::InvalidSyntax, span, format!("expected a variable, found `{found}`"));
                None
            }
        });
        (self.diagnostics.len() == before).then_some(PredicateDecl { name, parameters })
    }

    fn functions(&mut self, body: &[Sexp]) -> Vec<FunctionDecl> {
        let mut out = Vec::new();
        let mut pending: Vec<(Name, Parameters)> = Vec::new();
        let mut i = 0;
        while i < body.len() {
            let is_dash = body[i].as_atom().is_some_and(|t| self.tok(t).kind == TokenKind::Dash);
            if !is_dash {
                if let Some(p) = self.predicate_decl_as(&body[i], Scope::FunctionName) {
                    pending.push(p);
                }
                i += 1;
                continue;
            }
            let dash = self.span(&body[i]);
            let Some(ty_s) = body.get(i + 1) else {
                self.error(Code::MissingElement, dash, "`-` must be followed by a type");
                break;
            };
            let return_type = if self.atom_is(Some(ty_s), "number") {
                self.mark(ty_s.as_atom().expect("atom"), Scope::TypeName);
                Some(FunctionType::Number)
            } else {
                self.type_ref(ty_s).map(FunctionType::Object)
            };
            if pending.is_empty() {
                let span = dash.cover(&self.span(ty_s));
                self.error(Code::InvalidSyntax, span, "type annotation with nothing to annotate");
            }
            if let Some(rt) = return_type {
                out.extend(pending.drain(..).map(|(name, parameters)| FunctionDecl {
                    name,
                    parameters,
                    return_type: rt.clone(),
                }));
            }
            pending.clear();
            i += 2;
        }
        out.extend(pending.into_iter().map(|(name, parameters)| FunctionDecl {
            name,
            parameters,
            return_type: FunctionType::Number,
        }));
        out
    }

    fn predicate_decl_as(&mut self, s: &Sexp, scope: Scope) -> Option<(Name, Parameters)> {
        let p = self.predicate_decl(s)?;
        if let Some(i) = s.as_list().and_then(|l| l.items[0].as_atom()) {
            self.mark(i, scope);
        }
        Some((p.name, p.parameters))
    }

    /// Split `:key value` pairs of an action body. Unknown, misplaced and
    /// repeated keys are reported together with their value.
    fn body_pairs<'s>(&mut self, items: &'s [Sexp], allowed: &[&str]) -> Vec<(String, &'s Sexp)> {
        let mut out: Vec<(String, &'s Sexp)> = Vec::new();
        let mut i = 0;
        while i < items.len() {
            let key = &items[i];
            let Some(k) = key.as_atom().filter(|k| self.tok(*k).kind == TokenKind::Keyword) else {
                let span = self.span(key);
                let found = self.snippet(span);
                self.error(Code::InvalidSyntax, span, format!("expected a `:keyword`, found `{found}`"));
                i += 1;
                continue;
            };
            let text = self.tok(k).text.clone();
            let word = text.to_ascii_lowercase();
            let value = items.get(i + 1).filter(|v| {
                !v.as_atom().is_some_and(|j| self.tok(j).kind == TokenKind::Keyword)
            });
            let region = value.map_or(self.tok(k).span, |v| self.tok(k).span.cover(&self.span(v)));
            i += 1 + usize::from(value.is_some());
            if !allowed.contains(&word.as_str()) {
                if keywords::is_known(&word) {
                    self.error(Code::MisplacedKeyword, region, format!("`{text}` is not allowed here"));
                } else {
                    let guess = keywords::near_miss(&word, allowed);
                    let msg = match guess {
                        Some(c) => format!("unknown keyword `{text}`; did you mean `{c}`?"),
                        None => format!("unknown keyword `{text}`"),
                    };
                    self.error(Code::UnknownKeyword, region, msg);
                    // Read the value as the likely keyword so that, e.g., a
                    // misspelled `:parameters` still binds its variables.
                    if let (Some(c), Some(v)) = (guess, value) {
                        if !out.iter().any(|(w, _)| w == c) {
                            out.push((c.to_string(), v));
                        }
                    }
                }
                continue;
            }
            let Some(value) = value else {
                self.error(Code::MissingElement, region, format!("`{text}` has no value"));
                continue;
            };
            if out.iter().any(|(w, _)| *w == word) {
                self.error(Code::DuplicateDeclaration, region, format!("`{text}` given twice"));
                continue;
            }
            self.mark(k, Scope::SectionKeyword);
            out.push((word, value));
        }
        out
    }

    fn is_empty_list(s: &Sexp) -> bool {
        s.as_list().is_some_and(|l| l.items.is_empty() && l.close.is_some())
    }

    fn action_name(&mut self, l: &List) -> Option<Name> {
        match l.items.get(1) {
            Some(s) => self.identifier(s, "an action name", Scope::ActionName),
            None => {
                self.error(Code::MissingElement, l.span, "action has no name");
                None
            }
        }
    }

    fn action(&mut self, l: &List) -> Option<Action> {
        let name = self.action_name(l);
        let pairs = self.body_pairs(l.items.get(2..).unwrap_or(&[]), keywords::ACTION_BODY);
        let mut action = Action {
            name: name.unwrap_or_else(|| Name::new("")),
            parameters: Vec::new(),
            precondition: None,
            effect: None,
        };
        if let Some((_, v)) = pairs.iter().find(|(w, _)| w == ":parameters") {
            action.parameters = self.partial_parameters(v).unwrap_or_default();
        }
        let mut binding = Binding::with_params(&action.parameters);
        for (word, v) in &pairs {
            match word.as_str() {
                ":precondition" if !Self::is_empty_list(v) => {
                    action.precondition = Some(self.goal(v, &mut binding));
                }
                ":effect" if !Self::is_empty_list(v) => {
                    action.effect = Some(self.effect(v, &mut binding));
                }
                _ => {}
            }
        }
        Some(action)
    }

    fn durative_action(&mut self, l: &List) -> Option<DurativeAction> {
        let name = self.action_name(l);
        let pairs = self.body_pairs(l.items.get(2..).unwrap_or(&[]), keywords::DURATIVE_BODY);
        let mut action = DurativeAction {
            name: name.unwrap_or_else(|| Name::new("")),
            parameters: Vec::new(),
            duration: DurationConstraint::Error,
            condition: None,
            effect: None,
        };
        if let Some((_, v)) = pairs.iter().find(|(w, _)| w == ":parameters") {
            action.parameters = self.partial_parameters(v).unwrap_or_default();
        }
        let mut binding = Binding::with_params(&action.parameters);
        if let Binding::Scoped(vars) = &mut binding {
            vars.push(Variable::new("duration"));
        }
        let mut has_duration = false;
        for (word, v) in &pairs {
            match word.as_str() {
                ":duration" => {
                    has_duration = true;
                    action.duration = self.duration(v, &mut binding);
                }
                ":condition" if !Self::is_empty_list(v) => {
                    action.condition = Some(self.timed_goal(v, &mut binding));
                }
                ":effect" if !Self::is_empty_list(v) => {
                    action.effect = Some(self.timed_effect(v, &mut binding));
                }
                _ => {}
            }
        }
        if !has_duration {
            let head = l.items.get(1).map_or(l.span, |n| l.span.cover(&self.span(n)));
            let head = crate::span::LineIndex::new(self.text).span(l.span.start_byte, head.end_byte);
            self.error(Code::MissingElement, head, "durative action has no `:duration`");
        }
        Some(action)
    }

    fn derived(&mut self, l: &List) -> Option<DerivedPredicate> {
        if !self.arity(l, ":derived", 2) {
            return None;
        }
        let head = self.predicate_decl(&l.items[1])?;
        let body = self.goal(&l.items[2], &mut Binding::with_params(&head.parameters));
        Some(DerivedPredicate { head, body })
    }

    fn problem(&mut self, name: Name, sections: &[Sexp], define: &List) -> Problem {
        let mut p = Problem::new(name, "");
        let mut seen: Vec<String> = Vec::new();
        for s in sections {
            let Some((l, word)) = self.section(s, keywords::PROBLEM_SECTIONS, keywords::DOMAIN_SECTIONS) else {
                continue;
            };
            let repeatable = matches!(word.as_str(), ":requirements" | ":objects" | ":init");
            if !repeatable && seen.contains(&word) {
                self.error(Code::DuplicateDeclaration, l.span, format!("second `{word}` section"));
                continue;
            }
            seen.push(word.clone());
            let body = &l.items[1..];
            match word.as_str() {
                ":domain" => {
                    if self.arity(l, ":domain", 1) {
                        if let Some(n) = self.identifier(&body[0], "a domain name", Scope::Constant) {
                            p.domain_name = n;
                        }
                    }
                }
                ":requirements" => p.requirements.extend(self.requirements(l)),
                ":objects" => p.objects.extend(self.name_list(body, "an object name", Scope::Constant)),
                ":init" => {
                    for s in body {
                        if let Some(e) = self.init_element(s) {
                            p.init.push(e);
                        }
                    }
                }
                ":goal" => {
                    if self.arity(l, ":goal", 1) {
                        p.goal = self.goal(&body[0], &mut Binding::none());
                    } else {
                        p.goal = Goal::Error;
                    }
                }
                ":constraints" => {
                    if self.arity(l, ":constraints", 1) {
                        p.constraints = Some(self.goal(&body[0], &mut Binding::none()));
                    }
                }
                _ => p.metric = self.metric(l),
            }
        }
        for (section, what) in [(":domain", "`(:domain <name>)`"), (":goal", "a `(:goal …)` section")] {
            if !seen.iter().any(|w| w == section) {
                let head_end = define.items.get(1).map_or(define.span, |h| self.span(h));
                let span = crate::span::LineIndex::new(self.text).span(define.span.start_byte, head_end.end_byte);
                self.error(Code::MissingElement, span, format!("problem has no {what}"));
                if section == ":goal" {
                    p.goal = Goal::Error;
                }
            }
        }
        p
    }

    fn ground_literal(&mut self, s: &Sexp) -> Option<Literal> {
        let l = self.expect_list(s, "a literal")?;
        if let Some((h, word)) = self.head(l) {
            if word == "not" {
                self.op(h);
                if !self.arity(l, "not", 1) {
                    return None;
                }
                let inner = self.expect_list(&l.items[1], "an atomic formula")?;
                return self.ground_atom(inner).map(Literal::Neg);
            }
        }
        self.ground_atom(l).map(Literal::Pos)
    }

    fn ground_atom(&mut self, l: &List) -> Option<Atom> {
        let atom = self.atom(l, &Binding::Ground)?;
        if let Some(bad) = atom.args.iter().position(|t| matches!(t, Term::Function(_))) {
            let span = self.span(&l.items[bad + 1]);
            self.error(Code::InvalidSyntax, span, "initial facts take object names only");
            return None;
        }
        Some(atom)
    }

    fn init_element(&mut self, s: &Sexp) -> Option<InitElement> {
        let l = self.expect_list(s, "an initial fact")?;
        let (h, word) = self.head(l).unwrap_or((usize::MAX, String::new()));
        let args = &l.items[1..];
        match word.as_str() {
            "=" if !args.iter().all(|a| self.is_simple_term(a)) => {
                self.op(h);
                if !self.arity(l, "=", 2) {
                    return None;
                }
                let target = self.function_head(&args[0], &Binding::Ground);
                let value = match &args[1] {
                    Sexp::Atom(i) if self.tok(*i).kind == TokenKind::Number => {
                        self.number(&args[1], "a number").map(InitValue::Number)
                    }
                    v => self.identifier(v, "a number or object", Scope::Constant).map(InitValue::Object),
                };
                let target = target?;
                if target.args.iter().any(|t| !matches!(t, Term::Name(_))) {
                    self.error(Code::InvalidSyntax, self.span(&args[0]), "initial values take object names only");
                    return None;
                }
                Some(InitElement::Assign(target, value?))
            }
            "at" if args.len() == 2
                && args[0].as_atom().is_some_and(|i| self.tok(i).kind == TokenKind::Number) =>
            {
                self.op(h);
                let t = self.number(&args[0], "a time");
                let lit = self.ground_literal(&args[1]);
                Some(InitElement::Timed(t?, lit?))
            }
            _ => self.ground_literal(s).map(InitElement::Literal),
        }
    }

    fn metric(&mut self, l: &List) -> Option<Metric> {
        if !self.arity(l, ":metric", 2) {
            return None;
        }
        let dir = l.items[1].as_atom();
        let optimization = match dir.map(|i| self.tok(i).text.to_ascii_lowercase()).as_deref() {
            Some("minimize") => Optimization::Minimize,
            Some("maximize") => Optimization::Maximize,
            _ => {
                let span = self.span(&l.items[1]);
                self.error(Code::InvalidSyntax, span, "expected `minimize` or `maximize`");
                return None;
            }
        };
        self.op(dir.expect("matched"));
        let expr = self.expr(&l.items[2], &Binding::none());
        Some(Metric { optimization, expr })
    }
}
