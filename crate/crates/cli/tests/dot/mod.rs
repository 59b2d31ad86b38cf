//! A checker for the DOT language grammar as published with Graphviz,
//! written independently of the emitter under test. It accepts the full
//! statement grammar (node, edge, attribute and subgraph statements, ports,
//! comments, quoted and HTML identifiers) and collects node statements and
//! edges.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Colon,
    Eq,
    Arrow,
    Dash,
}

#[derive(Debug)]
pub struct SyntaxError(pub String);

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Default)]
pub struct Graph {
    pub directed: bool,
    pub strict: bool,
    pub name: Option<String>,
    /// Identifiers of node statements, in order.
    pub node_statements: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub attr_statements: usize,
}

const KEYWORDS: [&str; 6] = ["node", "edge", "graph", "digraph", "subgraph", "strict"];

fn err<T>(msg: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError(msg.into()))
}

/// `(token, is_keyword)` pairs; quoted and HTML identifiers are never keywords.
fn lex(src: &str) -> Result<Vec<(Tok, bool)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line_start = true;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line_start = true;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' && line_start {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        line_start = false;
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            loop {
                if i + 1 >= chars.len() {
                    return err("unterminated comment");
                }
                if chars[i] == '*' && chars[i + 1] == '/' {
                    i += 2;
                    break;
                }
                i += 1;
            }
            continue;
        }
        let simple = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, false));
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, false));
            i += 2;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            out.push((Tok::Dash, false));
            i += 2;
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return err("unterminated string"),
                    Some('"') => break,
                    Some('\\') if chars.get(i + 1) == Some(&'"') => {
                        s.push('"');
                        i += 2;
                    }
                    Some('\\') if chars.get(i + 1) == Some(&'\n') => i += 2,
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push((Tok::Id(s), false));
            continue;
        }
        if c == '<' {
            let mut depth = 0;
            let start = i;
            loop {
                match chars.get(i) {
                    None => return err("unterminated HTML string"),
                    Some('<') => depth += 1,
                    Some('>') => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
            i += 1;
            out.push((Tok::Id(chars[start..i].iter().collect()), false));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' || !c.is_ascii() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || !chars[i].is_ascii()) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let kw = KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(&word));
            out.push((Tok::Id(word), kw));
            continue;
        }
        if c.is_ascii_digit() || c == '.' || c == '-' {
            let start = i;
            if c == '-' {
                i += 1;
            }
            let digits_start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if chars.get(i) == Some(&'.') {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let body: String = chars[digits_start..i].iter().collect();
            if body.is_empty() || body == "." {
                return err(format!("bad numeral at character {start}"));
            }
            if chars.get(i).is_some_and(|ch| ch.is_ascii_alphabetic() || *ch == '_') {
                return err(format!("identifier may not start with a digit at character {start}"));
            }
            out.push((Tok::Id(chars[start..i].iter().collect()), false));
            continue;
        }
        return err(format!("unexpected character `{c}`"));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, bool)>,
    pos: usize,
    graph: Graph,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.toks.get(self.pos), Some((Tok::Id(w), true)) if w.eq_ignore_ascii_case(kw))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), SyntaxError> {
        if self.eat(&t) {
            Ok(())
        } else {
            err(format!("expected {t:?}, found {:?}", self.peek()))
        }
    }

    /// A plain identifier (keywords excluded).
    fn id(&mut self) -> Result<String, SyntaxError> {
        match self.toks.get(self.pos) {
            Some((Tok::Id(s), false)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            other => err(format!("expected an identifier, found {other:?}")),
        }
    }

    fn at_id(&self) -> bool {
        matches!(self.toks.get(self.pos), Some((Tok::Id(_), false)))
    }

    fn graph(mut self) -> Result<Graph, SyntaxError> {
        if self.peek_keyword("strict") {
            self.pos += 1;
            self.graph.strict = true;
        }
        if self.peek_keyword("digraph") {
            self.graph.directed = true;
        } else if !self.peek_keyword("graph") {
            return err("expected `graph` or `digraph`");
        }
        self.pos += 1;
        if self.at_id() {
            self.graph.name = Some(self.id()?);
        }
        self.expect(Tok::LBrace)?;
        self.stmt_list()?;
        self.expect(Tok::RBrace)?;
        if self.pos != self.toks.len() {
            return err("content after the closing brace");
        }
        Ok(self.graph)
    }

    fn stmt_list(&mut self) -> Result<(), SyntaxError> {
        while !matches!(self.peek(), Some(Tok::RBrace) | None) {
            self.stmt()?;
            self.eat(&Tok::Semi);
        }
        Ok(())
    }

    fn attr_list(&mut self) -> Result<(), SyntaxError> {
        while self.eat(&Tok::LBracket) {
            while !self.eat(&Tok::RBracket) {
                self.id()?;
                self.expect(Tok::Eq)?;
                self.id()?;
                if !self.eat(&Tok::Semi) {
                    self.eat(&Tok::Comma);
                }
            }
        }
        Ok(())
    }

    fn stmt(&mut self) -> Result<(), SyntaxError> {
        if ["graph", "node", "edge"].iter().any(|k| self.peek_keyword(k)) {
            self.pos += 1;
            if !matches!(self.peek(), Some(Tok::LBracket)) {
                return err("attribute statement without `[`");
            }
            self.attr_list()?;
            self.graph.attr_statements += 1;
            return Ok(());
        }
        let first = self.endpoint()?;
        if let (Some(a), Some(Tok::Eq)) = (&first, self.peek()) {
            let _ = a;
            self.pos += 1;
            self.id()?;
            return Ok(());
        }
        let mut prev = first.clone();
        let mut is_edge = false;
        loop {
            let op = match self.peek() {
                Some(Tok::Arrow) => true,
                Some(Tok::Dash) => false,
                _ => break,
            };
            if op != self.graph.directed {
                return err(if op { "`->` in an undirected graph" } else { "`--` in a directed graph" });
            }
            self.pos += 1;
            let next = self.endpoint()?;
            if let (Some(a), Some(b)) = (&prev, &next) {
                self.graph.edges.push((a.clone(), b.clone()));
            }
            prev = next;
            is_edge = true;
        }
        self.attr_list()?;
        if !is_edge {
            if let Some(n) = first {
                self.graph.node_statements.push(n);
            }
        }
        Ok(())
    }

    /// A node id (returned) or a subgraph (returns `None`).
    fn endpoint(&mut self) -> Result<Option<String>, SyntaxError> {
        if self.peek_keyword("subgraph") || self.peek() == Some(&Tok::LBrace) {
            if self.peek_keyword("subgraph") {
                self.pos += 1;
                if self.at_id() {
                    self.id()?;
                }
            }
            self.expect(Tok::LBrace)?;
            self.stmt_list()?;
            self.expect(Tok::RBrace)?;
            return Ok(None);
        }
        let id = self.id()?;
        if self.eat(&Tok::Colon) {
            self.id()?;
            if self.eat(&Tok::Colon) {
                self.id()?;
            }
        }
        Ok(Some(id))
    }
}

pub fn parse(src: &str) -> Result<Graph, SyntaxError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0, graph: Graph::default() }.graph()
}

pub fn self_test() -> Result<(), String> {
    let good = [
        "digraph { a -> b -> c; }",
        "strict graph G { a -- b [color=red, style=\"bold\"]; node [shape=box] x:n }",
        "digraph \"my graph\" {\n# note\n subgraph cluster_0 { a } -> b // c\n /* d */ e = f }",
        "digraph { -1.5; \"a\\\"b\"; <<b>x</b>> }",
    ];
    let bad = [
        "digraph { a -- b }",
        "graph { a -> b }",
        "digraph { a -> }",
        "digraph { a ",
        "digraph { node }",
        "digraph { 1a }",
        "digraph { a } b",
        "digraph { a [b] }",
        "digraph { \"a }",
    ];
    for g in good {
        parse(g).map_err(|e| format!("rejected valid DOT {g:?}: {e}"))?;
    }
    for b in bad {
        if parse(b).is_ok() {
            return Err(format!("accepted invalid DOT {b:?}"));
        }
    }
    Ok(())
}
