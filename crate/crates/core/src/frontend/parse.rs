//! Parser for `.palg` documents.
//!
//! The format is line oriented; `#` starts a comment. Sections:
//!
//! ```text
//! ALPHABET
//! fun ini fin dec
//! pred iszero
//!
//! GRAPH
//! root r
//! v r : ini
//! v c : iszero
//! edge r -> c
//! edge c ->1 h
//!
//! INTERP
//! domain main arity 1 range 0..3
//! domain input arity 2 values <0,0> <2,1>
//! fun dec(x) = if x[0] = 0 then <0> else <x[0] - 1>
//! pred iszero(x) = x[0] = 0
//!
//! PROCESS
//! root X
//! final X_ε
//! X = true :-> MEM := ini(MEM) . X_c
//! ```
//!
//! Diagnostics carry a line, a column and a code; parsing never panics.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use indexmap::IndexMap;
use serde::Serialize;

use crate::graph::{Alphabet, Digraph, GraphError};
use crate::interp::{BinOp, Bit, CmpOp, DomainDecl, DomainRole, Expr, Interpretation, Value};
use crate::procalg::{BitTerm, CondTerm, DataTerm, LinearSpec, ProcTerm};
use crate::translate::AlgorithmProcess;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Code {
    /// Missing ALPHABET section.
    P001,
    /// Statement outside a section or unknown statement.
    P002,
    /// Syntax error.
    P003,
    /// Unknown or misused symbol.
    P004,
    /// Duplicate edge label on a predicate vertex.
    P005,
    /// Duplicate declaration.
    P006,
    /// Unknown vertex.
    P007,
    /// Missing declaration.
    P008,
    /// Invalid alphabet.
    P009,
    /// Invalid domain.
    P010,
    /// Expression does not type-check.
    P011,
    /// Invalid process section.
    P012,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub code: Code,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: error[{:?}]: {}", self.line, self.column, self.code, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// Source positions of declarations, for diagnostics downstream. Never
/// affects document equality.
#[derive(Debug, Clone, Default)]
pub struct Spans {
    pub vertices: BTreeMap<String, (usize, usize)>,
    pub equations: BTreeMap<String, (usize, usize)>,
}

impl PartialEq for Spans {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Spans {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub alphabet: Alphabet,
    pub graph: Option<Digraph>,
    pub interp: Option<Interpretation>,
    pub process: Option<AlgorithmProcess>,
    pub spans: Spans,
}

// ---------------------------------------------------------------------------
// Lexing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i128),
    Arrow(Option<Bit>),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Arrow(None) => f.write_str("`->`"),
            Tok::Arrow(Some(b)) => write!(f, "`->{b}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

// Longest first.
const SYMBOLS: &[&str] = &[
    ":->", "..", ":=", "<=", ">=", "!=", "=>", "(", ")", "[", "]", "<", ">", "=", "+", "-", "*", "/", "%", ",", ".",
    ":", "!", "&", "|",
];

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(line: &str, lineno: usize) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n: i128 = text.parse().map_err(|_| Diagnostic {
                line: lineno,
                column: col,
                code: Code::P003,
                message: format!("integer literal {text} is too large"),
            })?;
            out.push(Token { tok: Tok::Int(n), col });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            let bit = match chars.get(i + 2) {
                Some('0') => Some(Bit::Zero),
                Some('1') => Some(Bit::One),
                _ => None,
            };
            i += if bit.is_some() { 3 } else { 2 };
            out.push(Token { tok: Tok::Arrow(bit), col });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                i += s.chars().count();
                out.push(Token { tok: Tok::Sym(s), col });
            }
            None => {
                return Err(Diagnostic {
                    line: lineno,
                    column: col,
                    code: Code::P003,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Token cursor shared by the sub-parsers

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    /// Column just past the end of the line, for "expected … at end" errors.
    end_col: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token], line: usize, end_col: usize) -> Self {
        Cursor { toks, pos: 0, line, end_col }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn error(&self, code: Code, message: impl Into<String>) -> Diagnostic {
        Diagnostic { line: self.line, column: self.col(), code, message: message.into() }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => self.error(Code::P003, format!("expected {wanted}, found {t}")),
            None => self.error(Code::P003, format!("expected {wanted} at end of line")),
        }
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> PResult<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{sym}`")))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let col = self.col();
        let neg = self.eat("-");
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let n = if neg { -n } else { *n };
                i64::try_from(n).map_err(|_| Diagnostic {
                    line: self.line,
                    column: col,
                    code: Code::P003,
                    message: format!("integer {n} does not fit in 64 bits"),
                })
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    /// `<i, j, …>`
    fn value(&mut self) -> PResult<Value> {
        self.expect("<")?;
        let mut comps = vec![self.int()?];
        while self.eat(",") {
            comps.push(self.int()?);
        }
        self.expect(">")?;
        Ok(Value(comps))
    }
}

// ---------------------------------------------------------------------------
// Expressions

struct ExprParser<'c, 'a> {
    cur: &'c mut Cursor<'a>,
    param: String,
}

impl ExprParser<'_, '_> {
    fn expr(&mut self) -> PResult<Expr> {
        if self.cur.eat_keyword("if") {
            let c = self.cmp()?;
            if !self.cur.eat_keyword("then") {
                return Err(self.cur.unexpected("`then`"));
            }
            let t = self.cmp()?;
            if !self.cur.eat_keyword("else") {
                return Err(self.cur.unexpected("`else`"));
            }
            let e = self.expr()?;
            return Ok(Expr::ite(c, t, e));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> PResult<Expr> {
        let a = self.additive()?;
        let op = match self.cur.peek() {
            Some(Tok::Sym("=")) => CmpOp::Eq,
            Some(Tok::Sym("!=")) => CmpOp::Ne,
            Some(Tok::Sym("<")) => CmpOp::Lt,
            Some(Tok::Sym("<=")) => CmpOp::Le,
            Some(Tok::Sym(">")) => CmpOp::Gt,
            Some(Tok::Sym(">=")) => CmpOp::Ge,
            _ => return Ok(a),
        };
        self.cur.bump();
        let b = self.additive()?;
        Ok(Expr::cmp(op, a, b))
    }

    fn additive(&mut self) -> PResult<Expr> {
        let mut a = self.multiplicative()?;
        loop {
            let op = match self.cur.peek() {
                Some(Tok::Sym("+")) => BinOp::Add,
                Some(Tok::Sym("-")) => BinOp::Sub,
                _ => return Ok(a),
            };
            self.cur.bump();
            let b = self.multiplicative()?;
            a = Expr::bin(op, a, b);
        }
    }

    fn multiplicative(&mut self) -> PResult<Expr> {
        let mut a = self.unary()?;
        loop {
            let op = match self.cur.peek() {
                Some(Tok::Sym("*")) => BinOp::Mul,
                Some(Tok::Sym("/")) => BinOp::Div,
                Some(Tok::Sym("%")) => BinOp::Rem,
                _ => return Ok(a),
            };
            self.cur.bump();
            let b = self.unary()?;
            a = Expr::bin(op, a, b);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if matches!(self.cur.peek(), Some(Tok::Sym("-"))) {
            if let Some(Tok::Int(_)) = self.cur.peek_at(1) {
                return Ok(Expr::Lit(self.cur.int()?));
            }
            self.cur.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.cur.peek() {
            Some(Tok::Int(_)) => Ok(Expr::Lit(self.cur.int()?)),
            Some(Tok::Ident(s)) if *s == self.param => {
                self.cur.bump();
                if self.cur.eat("[") {
                    let col = self.cur.col();
                    let i = self.cur.int()?;
                    self.cur.expect("]")?;
                    let i = usize::try_from(i).map_err(|_| Diagnostic {
                        line: self.cur.line,
                        column: col,
                        code: Code::P003,
                        message: "negative projection index".into(),
                    })?;
                    Ok(Expr::Proj(i))
                } else {
                    Ok(Expr::Arg)
                }
            }
            Some(Tok::Sym("(")) => {
                self.cur.bump();
                let e = self.expr()?;
                self.cur.expect(")")?;
                Ok(e)
            }
            Some(Tok::Sym("<")) => {
                self.cur.bump();
                let mut items = vec![self.additive()?];
                while self.cur.eat(",") {
                    items.push(self.additive()?);
                }
                self.cur.expect(">")?;
                Ok(Expr::Tuple(items))
            }
            Some(Tok::Ident(s)) => Err(self
                .cur
                .error(Code::P003, format!("unknown name `{s}` in expression (the argument is `{}`)", self.param))),
            _ => Err(self.cur.unexpected("an expression")),
        }
    }
}

// ---------------------------------------------------------------------------
// Process terms

struct ProcParser<'c, 'a> {
    cur: &'c mut Cursor<'a>,
    alphabet: &'c Alphabet,
    variables: &'c HashSet<String>,
}

enum Side {
    Data(DataTerm),
    Bit(BitTerm),
}

const RESERVED: &[&str] = &["true", "false", "delta", "eps"];

impl ProcParser<'_, '_> {
    fn sum(&mut self) -> PResult<ProcTerm> {
        let mut items = vec![self.guarded()?];
        while self.cur.eat("+") {
            items.push(self.guarded()?);
        }
        Ok(if items.len() == 1 { items.pop().expect("one") } else { ProcTerm::Alt(items) })
    }

    fn guarded(&mut self) -> PResult<ProcTerm> {
        let start = self.cur.pos;
        if let Ok(c) = self.cond() {
            if self.cur.eat(":->") {
                return Ok(ProcTerm::guard(c, self.guarded()?));
            }
        }
        self.cur.pos = start;
        self.seq()
    }

    fn seq(&mut self) -> PResult<ProcTerm> {
        let a = self.atom()?;
        if self.cur.eat(".") {
            return Ok(ProcTerm::seq(a, self.seq()?));
        }
        Ok(a)
    }

    fn atom(&mut self) -> PResult<ProcTerm> {
        match self.cur.peek() {
            Some(Tok::Sym("(")) => {
                self.cur.bump();
                let t = self.sum()?;
                self.cur.expect(")")?;
                Ok(t)
            }
            Some(Tok::Ident(s)) if s == "delta" => {
                self.cur.bump();
                Ok(ProcTerm::Deadlock)
            }
            Some(Tok::Ident(s)) if s == "eps" => {
                self.cur.bump();
                Ok(ProcTerm::Empty)
            }
            Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                self.cur.bump();
                if self.cur.eat(":=") {
                    let e = self.data()?;
                    return Ok(ProcTerm::Assign(s.clone(), e));
                }
                if self.variables.contains(s) {
                    Ok(ProcTerm::Var(s.clone()))
                } else {
                    Ok(ProcTerm::Action(s.clone()))
                }
            }
            _ => Err(self.cur.unexpected("a process term")),
        }
    }

    fn cond(&mut self) -> PResult<CondTerm> {
        let a = self.disj()?;
        if self.cur.eat("=>") {
            return Ok(CondTerm::Implies(Box::new(a), Box::new(self.cond()?)));
        }
        Ok(a)
    }

    fn disj(&mut self) -> PResult<CondTerm> {
        let mut a = self.conj()?;
        while self.cur.eat("|") {
            a = CondTerm::Or(Box::new(a), Box::new(self.conj()?));
        }
        Ok(a)
    }

    fn conj(&mut self) -> PResult<CondTerm> {
        let mut a = self.neg()?;
        while self.cur.eat("&") {
            a = CondTerm::And(Box::new(a), Box::new(self.neg()?));
        }
        Ok(a)
    }

    fn neg(&mut self) -> PResult<CondTerm> {
        if self.cur.eat("!") {
            return Ok(CondTerm::Not(Box::new(self.neg()?)));
        }
        self.cond_atom()
    }

    fn cond_atom(&mut self) -> PResult<CondTerm> {
        if self.cur.eat_keyword("true") {
            return Ok(CondTerm::True);
        }
        if self.cur.eat_keyword("false") {
            return Ok(CondTerm::False);
        }
        if self.cur.eat("(") {
            let c = self.cond()?;
            self.cur.expect(")")?;
            return Ok(c);
        }
        let col = self.cur.col();
        let lhs = self.side()?;
        self.cur.expect("=")?;
        let rhs = self.side()?;
        match (lhs, rhs) {
            (Side::Data(a), Side::Data(b)) => Ok(CondTerm::DataEq(a, b)),
            (Side::Bit(a), Side::Bit(b)) => Ok(CondTerm::BitEq(a, b)),
            _ => Err(Diagnostic {
                line: self.cur.line,
                column: col,
                code: Code::P012,
                message: "equation between a bit and a data term".into(),
            }),
        }
    }

    fn side(&mut self) -> PResult<Side> {
        match self.cur.peek() {
            Some(Tok::Int(0)) => {
                self.cur.bump();
                Ok(Side::Bit(BitTerm::Lit(Bit::Zero)))
            }
            Some(Tok::Int(1)) => {
                self.cur.bump();
                Ok(Side::Bit(BitTerm::Lit(Bit::One)))
            }
            Some(Tok::Ident(s)) if self.alphabet.is_predicate(s) => {
                self.cur.bump();
                self.cur.expect("(")?;
                let e = self.data()?;
                self.cur.expect(")")?;
                Ok(Side::Bit(BitTerm::Pred(s.clone(), e)))
            }
            _ => Ok(Side::Data(self.data()?)),
        }
    }

    fn data(&mut self) -> PResult<DataTerm> {
        match self.cur.peek() {
            Some(Tok::Sym("<")) => Ok(DataTerm::Const(self.cur.value()?)),
            Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                if matches!(self.cur.peek_at(1), Some(Tok::Sym("("))) {
                    if !self.alphabet.is_function(s) {
                        return Err(self.cur.error(Code::P004, format!("`{s}` is not a function symbol")));
                    }
                    self.cur.bump();
                    self.cur.bump();
                    let e = self.data()?;
                    self.cur.expect(")")?;
                    return Ok(DataTerm::apply(s, e));
                }
                self.cur.bump();
                Ok(DataTerm::Flex(s.clone()))
            }
            _ => Err(self.cur.unexpected("a data term")),
        }
    }
}

// ---------------------------------------------------------------------------
// Document

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Alphabet,
    Graph,
    Interp,
    Process,
}

impl Section {
    fn from_keyword(s: &str) -> Option<Self> {
        Some(match s {
            "ALPHABET" => Section::Alphabet,
            "GRAPH" => Section::Graph,
            "INTERP" => Section::Interp,
            "PROCESS" => Section::Process,
            _ => return None,
        })
    }
}

struct Line {
    no: usize,
    toks: Vec<Token>,
    end_col: usize,
}

impl Line {
    fn cursor(&self) -> Cursor<'_> {
        Cursor::new(&self.toks, self.no, self.end_col)
    }
}

#[derive(Default)]
struct Collected {
    sections: BTreeMap<&'static str, usize>,
    funs: Vec<(String, usize, usize)>,
    preds: Vec<(String, usize, usize)>,
    graph: Vec<Line>,
    interp: Vec<Line>,
    process: Vec<Line>,
}

/// Parse a document. All diagnostics found are returned, in source order.
pub fn parse(text: &str) -> Result<Document, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut col = Collected::default();
    let mut section: Option<Section> = None;

    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let toks = match lex(raw, no) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        let end_col = raw.chars().count() + 1;
        if let (1, Tok::Ident(kw)) = (toks.len(), &toks[0].tok) {
            if let Some(s) = Section::from_keyword(kw) {
                let name: &'static str = match s {
                    Section::Alphabet => "ALPHABET",
                    Section::Graph => "GRAPH",
                    Section::Interp => "INTERP",
                    Section::Process => "PROCESS",
                };
                if col.sections.insert(name, no).is_some() {
                    diags.push(Diagnostic {
                        line: no,
                        column: 1,
                        code: Code::P006,
                        message: format!("duplicate {name} section"),
                    });
                }
                section = Some(s);
                continue;
            }
        }
        let line = Line { no, toks, end_col };
        match section {
            None => diags.push(Diagnostic {
                line: no,
                column: line.toks[0].col,
                code: Code::P002,
                message: "statement before any section header".into(),
            }),
            Some(Section::Alphabet) => alphabet_line(&line, &mut col, &mut diags),
            Some(Section::Graph) => col.graph.push(line),
            Some(Section::Interp) => col.interp.push(line),
            Some(Section::Process) => col.process.push(line),
        }
    }

    if !col.sections.contains_key("ALPHABET") {
        diags
            .insert(0, Diagnostic { line: 1, column: 1, code: Code::P001, message: "missing ALPHABET section".into() });
        return Err(diags);
    }
    let alph_line = col.sections["ALPHABET"];
    let alphabet = match Alphabet::new(col.funs.iter().map(|f| f.0.clone()), col.preds.iter().map(|p| p.0.clone())) {
        Ok(a) => a,
        Err(e) => {
            let (line, column) = match &e {
                GraphError::DuplicateSymbol(s) | GraphError::OverlappingSymbol(s) => col
                    .funs
                    .iter()
                    .chain(col.preds.iter())
                    .filter(|f| f.0 == *s)
                    .nth(1)
                    .map_or((alph_line, 1), |f| (f.1, f.2)),
                _ => (alph_line, 1),
            };
            diags.push(Diagnostic { line, column, code: Code::P009, message: e.to_string() });
            diags.sort_by_key(|d| (d.line, d.column));
            return Err(diags);
        }
    };

    let mut spans = Spans::default();
    let graph = col.sections.get("GRAPH").map(|&at| parse_graph(&col.graph, at, &alphabet, &mut spans, &mut diags));
    let interp = col.sections.get("INTERP").map(|&at| parse_interp(&col.interp, at, &alphabet, &mut diags));
    let process =
        col.sections.get("PROCESS").map(|&at| parse_process(&col.process, at, &alphabet, &mut spans, &mut diags));

    if !diags.is_empty() {
        diags.sort_by_key(|d| (d.line, d.column));
        return Err(diags);
    }
    Ok(Document { alphabet, graph: graph.flatten(), interp: interp.flatten(), process: process.flatten(), spans })
}

fn alphabet_line(line: &Line, col: &mut Collected, diags: &mut Vec<Diagnostic>) {
    let mut cur = line.cursor();
    let target = if cur.eat_keyword("fun") {
        &mut col.funs
    } else if cur.eat_keyword("pred") {
        &mut col.preds
    } else {
        diags.push(cur.error(Code::P002, "expected `fun` or `pred`"));
        return;
    };
    while !cur.at_end() {
        let c = cur.col();
        match cur.ident("a symbol name") {
            Ok(s) => target.push((s, line.no, c)),
            Err(d) => {
                diags.push(d);
                return;
            }
        }
    }
}

fn parse_graph(
    lines: &[Line],
    header: usize,
    alphabet: &Alphabet,
    spans: &mut Spans,
    diags: &mut Vec<Diagnostic>,
) -> Option<Digraph> {
    let before = diags.len();
    let mut root: Option<(String, usize, usize)> = None;
    let mut vertices: IndexMap<String, Option<String>> = IndexMap::new();
    let mut edges: Vec<(String, String, Option<Bit>, usize, usize)> = Vec::new();
    for line in lines {
        let mut cur = line.cursor();
        let res: PResult<()> = (|| {
            if cur.eat_keyword("root") {
                let c = cur.col();
                let r = cur.ident("a vertex id")?;
                cur.finish()?;
                if root.is_some() {
                    return Err(Diagnostic {
                        line: line.no,
                        column: 1,
                        code: Code::P006,
                        message: "duplicate root".into(),
                    });
                }
                root = Some((r, line.no, c));
            } else if cur.eat_keyword("v") {
                let c = cur.col();
                let id = cur.ident("a vertex id")?;
                if vertices.contains_key(&id) {
                    return Err(Diagnostic {
                        line: line.no,
                        column: c,
                        code: Code::P006,
                        message: format!("duplicate vertex `{id}`"),
                    });
                }
                // Declared even if the rest of the line is bad, to avoid
                // follow-up "unknown vertex" noise.
                spans.vertices.insert(id.clone(), (line.no, c));
                vertices.insert(id.clone(), None);
                let label = if cur.eat(":") {
                    let lc = cur.col();
                    let l = cur.ident("a label")?;
                    if !alphabet.contains(&l) {
                        return Err(Diagnostic {
                            line: line.no,
                            column: lc,
                            code: Code::P004,
                            message: format!("label `{l}` is not declared in ALPHABET"),
                        });
                    }
                    Some(l)
                } else {
                    None
                };
                cur.finish()?;
                vertices.insert(id, label);
            } else if cur.eat_keyword("edge") {
                let c = cur.col();
                let a = cur.ident("a vertex id")?;
                let bit = match cur.bump() {
                    Some(Tok::Arrow(b)) => *b,
                    _ => {
                        cur.pos -= 1;
                        return Err(cur.unexpected("`->`, `->0` or `->1`"));
                    }
                };
                let b = cur.ident("a vertex id")?;
                cur.finish()?;
                edges.push((a, b, bit, line.no, c));
            } else {
                return Err(cur.error(Code::P002, "expected `root`, `v` or `edge`"));
            }
            Ok(())
        })();
        if let Err(d) = res {
            diags.push(d);
        }
    }

    let Some((root, rl, rc)) = root else {
        diags.push(Diagnostic {
            line: header,
            column: 1,
            code: Code::P008,
            message: "GRAPH section has no root".into(),
        });
        return None;
    };
    if !vertices.contains_key(&root) {
        diags.push(Diagnostic {
            line: rl,
            column: rc,
            code: Code::P007,
            message: format!("root `{root}` is not a declared vertex"),
        });
    }
    let mut seen_pairs = HashSet::new();
    let mut pred_labels: HashSet<(String, Bit)> = HashSet::new();
    for (a, b, bit, no, c) in &edges {
        for end in [a, b] {
            if !vertices.contains_key(end) {
                diags.push(Diagnostic {
                    line: *no,
                    column: *c,
                    code: Code::P007,
                    message: format!("unknown vertex `{end}`"),
                });
            }
        }
        if !seen_pairs.insert((a.clone(), b.clone())) {
            diags.push(Diagnostic {
                line: *no,
                column: *c,
                code: Code::P006,
                message: format!("duplicate edge {a} -> {b}"),
            });
        }
        let is_pred = vertices.get(a).and_then(|l| l.as_deref()).is_some_and(|l| alphabet.is_predicate(l));
        if let (true, Some(bit)) = (is_pred, bit) {
            if !pred_labels.insert((a.clone(), *bit)) {
                diags.push(Diagnostic {
                    line: *no,
                    column: *c,
                    code: Code::P005,
                    message: format!("duplicate edge label on predicate vertex `{a}` (label {bit})"),
                });
            }
        }
    }
    if diags.len() > before {
        return None;
    }
    let g = Digraph::from_parts(vertices, edges.into_iter().map(|(a, b, l, _, _)| (a, b, l)), &root)
        .expect("checked above");
    Some(g)
}

fn parse_interp(
    lines: &[Line],
    header: usize,
    alphabet: &Alphabet,
    diags: &mut Vec<Diagnostic>,
) -> Option<Interpretation> {
    let before = diags.len();
    let mut domains: BTreeMap<&'static str, DomainDecl> = BTreeMap::new();
    let mut functions: IndexMap<String, Expr> = IndexMap::new();
    let mut predicates: IndexMap<String, Expr> = IndexMap::new();
    let mut bodies: Vec<(String, bool, Expr, usize, usize)> = Vec::new();

    for line in lines {
        let mut cur = line.cursor();
        let res: PResult<()> = (|| {
            if cur.eat_keyword("domain") {
                let c = cur.col();
                let role = match cur.ident("`main`, `input` or `output`")?.as_str() {
                    "main" => DomainRole::Main,
                    "input" => DomainRole::Input,
                    "output" => DomainRole::Output,
                    other => {
                        return Err(Diagnostic {
                            line: line.no,
                            column: c,
                            code: Code::P003,
                            message: format!("unknown domain `{other}`"),
                        })
                    }
                };
                if !cur.eat_keyword("arity") {
                    return Err(cur.unexpected("`arity`"));
                }
                let ac = cur.col();
                let arity = cur.int()?;
                let arity = usize::try_from(arity).ok().filter(|a| *a >= 1).ok_or(Diagnostic {
                    line: line.no,
                    column: ac,
                    code: Code::P010,
                    message: "arity must be at least 1".into(),
                })?;
                let dc = cur.col();
                let decl = if cur.eat_keyword("range") {
                    let mut ranges = Vec::new();
                    while !cur.at_end() {
                        let lo = cur.int()?;
                        cur.expect("..")?;
                        let hi = cur.int()?;
                        ranges.push((lo, hi));
                    }
                    if ranges.len() != arity {
                        return Err(Diagnostic {
                            line: line.no,
                            column: dc,
                            code: Code::P010,
                            message: format!("{} range(s) given for arity {arity}", ranges.len()),
                        });
                    }
                    DomainDecl::boxed(role, ranges)
                } else if cur.eat_keyword("values") {
                    let mut values = Vec::new();
                    while !cur.at_end() {
                        values.push(cur.value()?);
                    }
                    DomainDecl::finite(role, arity, values)
                } else {
                    return Err(cur.unexpected("`range` or `values`"));
                };
                let decl = decl.map_err(|e| Diagnostic {
                    line: line.no,
                    column: dc,
                    code: Code::P010,
                    message: e.to_string(),
                })?;
                if domains.insert(role.keyword(), decl).is_some() {
                    return Err(Diagnostic {
                        line: line.no,
                        column: c,
                        code: Code::P006,
                        message: format!("duplicate {role} domain"),
                    });
                }
            } else if matches!(cur.peek(), Some(Tok::Ident(k)) if k == "fun" || k == "pred") {
                let is_pred = cur.eat_keyword("pred");
                if !is_pred {
                    cur.eat_keyword("fun");
                }
                let c = cur.col();
                let name = cur.ident("a symbol name")?;
                cur.expect("(")?;
                let param = cur.ident("a parameter name")?;
                cur.expect(")")?;
                cur.expect("=")?;
                let body = ExprParser { cur: &mut cur, param }.expr()?;
                cur.finish()?;
                bodies.push((name, is_pred, body, line.no, c));
            } else {
                return Err(cur.error(Code::P002, "expected `domain`, `fun` or `pred`"));
            }
            Ok(())
        })();
        if let Err(d) = res {
            diags.push(d);
        }
    }

    for role in ["main", "input", "output"] {
        if !domains.contains_key(role) {
            diags.push(Diagnostic {
                line: header,
                column: 1,
                code: Code::P008,
                message: format!("missing {role} domain"),
            });
        }
    }
    for (name, is_pred, body, no, c) in bodies {
        let declared_ok = if is_pred { alphabet.is_predicate(&name) } else { alphabet.is_function(&name) };
        if !declared_ok {
            let kind = if is_pred { "predicate" } else { "function" };
            diags.push(Diagnostic {
                line: no,
                column: c,
                code: Code::P004,
                message: format!("`{name}` is not a declared {kind} symbol"),
            });
            continue;
        }
        if let (Some(main), Some(input), Some(output)) =
            (domains.get("main"), domains.get("input"), domains.get("output"))
        {
            let arg = if name == crate::graph::INI { input.arity } else { main.arity };
            let expected = if is_pred {
                1
            } else if name == crate::graph::FIN {
                output.arity
            } else {
                main.arity
            };
            match body.shape(arg) {
                Err(e) => {
                    diags.push(Diagnostic { line: no, column: c, code: Code::P011, message: format!("`{name}`: {e}") })
                }
                Ok(s) if s.result_arity() != expected => diags.push(Diagnostic {
                    line: no,
                    column: c,
                    code: Code::P011,
                    message: format!("`{name}` yields arity {}, expected {expected}", s.result_arity()),
                }),
                Ok(_) => {}
            }
        }
        let map = if is_pred { &mut predicates } else { &mut functions };
        if map.insert(name.clone(), body).is_some() {
            diags.push(Diagnostic {
                line: no,
                column: c,
                code: Code::P006,
                message: format!("`{name}` defined twice"),
            });
        }
    }
    for s in alphabet.functions().chain(alphabet.predicates()) {
        if !functions.contains_key(s) && !predicates.contains_key(s) {
            diags.push(Diagnostic {
                line: header,
                column: 1,
                code: Code::P008,
                message: format!("no definition for `{s}`"),
            });
        }
    }
    if diags.len() > before {
        return None;
    }
    // Keep alphabet order so printing is canonical.
    let functions = alphabet.functions().map(|f| (f.to_string(), functions[f].clone())).collect();
    let predicates = alphabet.predicates().map(|p| (p.to_string(), predicates[p].clone())).collect();
    Some(Interpretation {
        main: domains.remove("main").expect("checked"),
        input: domains.remove("input").expect("checked"),
        output: domains.remove("output").expect("checked"),
        functions,
        predicates,
    })
}

fn parse_process(
    lines: &[Line],
    header: usize,
    alphabet: &Alphabet,
    spans: &mut Spans,
    diags: &mut Vec<Diagnostic>,
) -> Option<AlgorithmProcess> {
    let before = diags.len();
    let mut root = None;
    let mut fin = None;
    // Equation names first, so identifiers can be told apart from actions.
    let mut variables = HashSet::new();
    for line in lines {
        if let (Some(Tok::Ident(x)), Some(Tok::Sym("="))) =
            (line.toks.first().map(|t| &t.tok), line.toks.get(1).map(|t| &t.tok))
        {
            variables.insert(x.clone());
        }
    }
    let mut equations: IndexMap<String, ProcTerm> = IndexMap::new();
    for line in lines {
        let mut cur = line.cursor();
        let res: PResult<()> = (|| {
            if matches!(cur.peek_at(1), Some(Tok::Sym("="))) {
                let c = cur.col();
                let x = cur.ident("a variable")?;
                cur.expect("=")?;
                let t = ProcParser { cur: &mut cur, alphabet, variables: &variables }.sum()?;
                cur.finish()?;
                if !crate::procalg::is_linear(&t) {
                    return Err(Diagnostic {
                        line: line.no,
                        column: c,
                        code: Code::P012,
                        message: format!("the equation for {x} is not linear"),
                    });
                }
                if equations.contains_key(&x) {
                    return Err(Diagnostic {
                        line: line.no,
                        column: c,
                        code: Code::P006,
                        message: format!("second equation for {x}"),
                    });
                }
                spans.equations.insert(x.clone(), (line.no, c));
                equations.insert(x, t);
            } else if cur.eat_keyword("root") {
                root = Some(cur.ident("a variable")?);
                cur.finish()?;
            } else if cur.eat_keyword("final") {
                fin = Some(cur.ident("a variable")?);
                cur.finish()?;
            } else {
                return Err(cur.error(Code::P002, "expected `root`, `final` or an equation"));
            }
            Ok(())
        })();
        if let Err(d) = res {
            diags.push(d);
        }
    }
    let (Some(root), Some(fin)) = (root, fin) else {
        diags.push(Diagnostic {
            line: header,
            column: 1,
            code: Code::P008,
            message: "PROCESS needs `root` and `final`".into(),
        });
        return None;
    };
    for x in [&root, &fin] {
        if !equations.contains_key(x) {
            diags.push(Diagnostic {
                line: header,
                column: 1,
                code: Code::P012,
                message: format!("no equation for {x}"),
            });
        }
    }
    if diags.len() > before {
        return None;
    }
    Some(AlgorithmProcess { root, epsilon: fin, spec: LinearSpec { equations } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file() {
        let d = parse("").unwrap_err();
        assert_eq!(d[0].code, Code::P001);
        assert_eq!(d[0].message, "missing ALPHABET section");
    }

    #[test]
    fn duplicate_predicate_edge_label() {
        let text = "ALPHABET\nfun ini fin\npred p\nGRAPH\nroot r\nv r : ini\nv c : p\nv h : fin\nv g : fin\n\
                    edge r -> c\nedge c ->1 h\nedge c ->1 g\n";
        let d = parse(text).unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, Code::P005);
        assert_eq!((d[0].line, d[0].column), (12, 6));
        assert!(d[0].message.contains("duplicate edge label on predicate vertex"));
    }

    #[test]
    fn expressions() {
        let text = "ALPHABET\nfun ini fin f\nINTERP\ndomain main arity 2 range -1..3 0..0\n\
                    domain input arity 1 values <0> <2>\ndomain output arity 1 range 0..1\n\
                    fun ini(y) = <y[0], 0>\nfun fin(x) = x[0] * 2 % 3 - -1 = 1\n\
                    fun f(x) = if x[0] < 3 then <x[0] + 1, x[1]> else <-(x[0]), 0>\n";
        let doc = parse(text).unwrap();
        let i = doc.interp.unwrap();
        assert_eq!(i.functions["ini"].to_string(), "<x[0], 0>");
        assert_eq!(i.functions["fin"].to_string(), "x[0] * 2 % 3 - -1 = 1");
        assert_eq!(i.functions["f"].to_string(), "if x[0] < 3 then <x[0] + 1, x[1]> else <-x[0], 0>");
        assert_eq!(i.input.enumerate(10).unwrap(), vec![Value::scalar(0), Value::scalar(2)]);
    }

    #[test]
    fn diagnostics_are_located() {
        let text = "ALPHABET\nfun ini fin\nGRAPH\nroot r\nv r : nope\nedge r -> q\nwat\n";
        let d = parse(text).unwrap_err();
        let codes: Vec<_> = d.iter().map(|d| (d.line, d.code)).collect();
        assert_eq!(codes, vec![(5, Code::P004), (6, Code::P007), (7, Code::P002)]);
    }

    #[test]
    fn process_section() {
        let text = "ALPHABET\nfun ini fin\npred p\nPROCESS\nroot X\nfinal X_ε\n\
                    X = true :-> MEM := ini(MEM) . Y\n\
                    Y = p(MEM) = 1 :-> MEM := MEM . Y + !(p(MEM) = 1) & MEM = <0> :-> tick . X_ε\n\
                    X_ε = true :-> eps\n";
        let doc = parse(text).unwrap();
        let p = doc.process.unwrap();
        assert_eq!(p.spec.equations.len(), 3);
        assert_eq!(
            p.spec.get("Y").unwrap().to_string(),
            "p(MEM) = 1 :-> MEM := MEM . Y + (!p(MEM) = 1 & MEM = <0>) :-> tick . X_ε"
        );
        let bad = "ALPHABET\nfun ini fin\nPROCESS\nroot X\nfinal E\nX = true :-> eps + delta\nE = true :-> eps\n";
        assert_eq!(parse(bad).unwrap_err()[0].code, Code::P012);
    }
}
