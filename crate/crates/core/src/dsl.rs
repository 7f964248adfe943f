//! Text format for presentations and named forms.
//!
//! ```text
//! # derived critical locus of x^3
//! algebra rcrit {
//!   gen x: degree 0, weight 1;
//!   gen xi: degree -1, weight 2;
//!   d xi = 3*x^2;
//!   form omega = d x * d xi;
//! }
//! strict_nonpositive;
//! ```
//!
//! Inside a `form` literal, `d x` denotes the de Rham generator δx.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::cdga::{
    build_presentation, BuildOptions, CdgaError, DiffAssignment, FreeAlgebra, GeneratorDecl,
    Polynomial, Presentation,
};
use crate::derham::DeRhamAlgebra;
use crate::kernel::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("semantic error at {line}:{col}: {msg}")]
    Semantic { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Algebra(#[from] CdgaError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Eof,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, DslError> {
    let mut lx = Lexer {
        chars: src.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        while let Some(&c) = lx.chars.peek() {
            if c == '#' {
                while let Some(&c) = lx.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    lx.bump();
                }
            } else if c.is_whitespace() {
                lx.bump();
            } else {
                break;
            }
        }
        let pos = Pos {
            line: lx.line,
            col: lx.col,
        };
        let Some(&c) = lx.chars.peek() else {
            out.push((Tok::Eof, pos));
            return Ok(out);
        };
        if c.is_alphabetic() {
            let mut s = String::new();
            while let Some(&c) = lx.chars.peek() {
                if c.is_alphabetic() || c.is_ascii_digit() || c == '_' {
                    s.push(c);
                    lx.bump();
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(s), pos));
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = lx.chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    lx.bump();
                } else {
                    break;
                }
            }
            out.push((Tok::Int(s.parse().expect("digits")), pos));
        } else if "{}:;,=+-*^/()".contains(c) {
            lx.bump();
            out.push((Tok::Sym(c), pos));
        } else {
            return Err(DslError::Syntax {
                line: pos.line,
                col: pos.col,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
}

impl Lexer<'_> {
    fn bump(&mut self) {
        if let Some(c) = self.chars.next() {
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
    }
}

/// Polynomial expression as written.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(String, Pos),
    /// `d x` inside a form literal.
    Delta(String, Pos),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Resolves a name (and whether it is under `d`) to a generator index and
/// its degree.
pub type Lookup<'a> = dyn Fn(&str, bool) -> Option<(usize, i64)> + 'a;

impl Expr {
    /// Evaluates in `alg`. The second component is the degree of the
    /// expression as written, `None` for a literal zero.
    pub fn eval(&self, alg: &FreeAlgebra, lookup: &Lookup) -> Result<(Polynomial, Option<i64>), DslError> {
        match self {
            Expr::Num(c) => {
                let formal = if num_traits::Zero::is_zero(c) { None } else { Some(0) };
                Ok((alg.constant(c.clone()), formal))
            }
            Expr::Var(name, pos) | Expr::Delta(name, pos) => {
                let delta = matches!(self, Expr::Delta(..));
                let (k, deg) = lookup(name, delta).ok_or_else(|| DslError::Semantic {
                    line: pos.line,
                    col: pos.col,
                    msg: if delta {
                        format!("d {name} is not available here")
                    } else {
                        format!("unknown name {name}")
                    },
                })?;
                Ok((alg.var(k), Some(deg)))
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (pa, fa) = a.eval(alg, lookup)?;
                let (pb, fb) = b.eval(alg, lookup)?;
                let formal = match (fa, fb) {
                    (Some(x), Some(y)) if x != y => {
                        let pos = self.pos().unwrap_or(Pos { line: 0, col: 0 });
                        return Err(DslError::Semantic {
                            line: pos.line,
                            col: pos.col,
                            msg: format!("sum of terms of degrees {x} and {y}"),
                        });
                    }
                    (Some(x), _) | (_, Some(x)) => Some(x),
                    _ => None,
                };
                let p = if matches!(self, Expr::Add(..)) { pa.add(&pb) } else { pa.sub(&pb) };
                Ok((p, formal))
            }
            Expr::Mul(a, b) => {
                let (pa, fa) = a.eval(alg, lookup)?;
                let (pb, fb) = b.eval(alg, lookup)?;
                let formal = match (fa, fb) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                };
                Ok((alg.mul(&pa, &pb), formal))
            }
            Expr::Neg(a) => {
                let (p, f) = a.eval(alg, lookup)?;
                Ok((p.neg(), f))
            }
            Expr::Pow(a, e) => {
                let (p, f) = a.eval(alg, lookup)?;
                let formal = match f {
                    Some(x) if *e > 0 => Some(x * *e as i64),
                    Some(_) => Some(0),
                    None => None,
                };
                Ok((alg.pow(&p, *e), formal))
            }
        }
    }

    fn pos(&self) -> Option<Pos> {
        match self {
            Expr::Num(_) => None,
            Expr::Var(_, p) | Expr::Delta(_, p) => Some(*p),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.pos().or_else(|| b.pos()),
            Expr::Neg(a) | Expr::Pow(a, _) => a.pos(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenStmt {
    pub decl: GeneratorDecl,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct DiffStmt {
    pub generator: String,
    pub expr: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct FormStmt {
    pub name: String,
    pub expr: Expr,
    pub pos: Pos,
}

/// Parsed document before validation.
#[derive(Clone, Debug, Default)]
pub struct Ast {
    pub algebra_name: Option<String>,
    pub gens: Vec<GenStmt>,
    pub diffs: Vec<DiffStmt>,
    pub forms: Vec<FormStmt>,
    pub directives: BTreeMap<String, Option<i64>>,
}

/// A validated document: one presentation plus named form literals.
#[derive(Clone, Debug)]
pub struct DslDocument {
    pub name: Option<String>,
    pub presentation: Presentation,
    pub forms: Vec<FormStmt>,
    pub directives: BTreeMap<String, Option<i64>>,
}

const DIRECTIVES: &[&str] = &["strict_nonpositive", "truncate_degree", "weight_max"];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        let p = self.pos();
        Err(DslError::Syntax {
            line: p.line,
            col: p.col,
            msg: msg.into(),
        })
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), DslError> {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {}", Self::describe(self.peek())))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), DslError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                let p = self.pos();
                self.next();
                Ok((s, p))
            }
            t => self.err(format!("expected identifier, found {}", Self::describe(&t))),
        }
    }

    fn int(&mut self) -> Result<i64, DslError> {
        let neg = if *self.peek() == Tok::Sym('-') {
            self.next();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                let v: i64 = i64::try_from(&n).or_else(|_| self.err("integer out of range"))?;
                Ok(if neg { -v } else { v })
            }
            t => self.err(format!("expected integer, found {}", Self::describe(&t))),
        }
    }

    fn document(&mut self) -> Result<Ast, DslError> {
        let mut ast = Ast::default();
        let mut saw_block = false;
        let mut saw_bare = false;
        while *self.peek() != Tok::Eof {
            let p = self.pos();
            match self.peek().clone() {
                Tok::Ident(s) if s == "algebra" => {
                    if saw_block || saw_bare {
                        return Err(DslError::Semantic {
                            line: p.line,
                            col: p.col,
                            msg: "a document holds exactly one algebra".into(),
                        });
                    }
                    saw_block = true;
                    self.next();
                    let (name, _) = self.ident()?;
                    ast.algebra_name = Some(name);
                    self.expect_sym('{')?;
                    while *self.peek() != Tok::Sym('}') {
                        if *self.peek() == Tok::Eof {
                            return self.err("unterminated algebra block");
                        }
                        self.statement(&mut ast)?;
                    }
                    self.next();
                }
                Tok::Ident(s) if s == "gen" || s == "d" => {
                    if saw_block {
                        return Err(DslError::Semantic {
                            line: p.line,
                            col: p.col,
                            msg: "generators outside the algebra block".into(),
                        });
                    }
                    saw_bare = true;
                    self.statement(&mut ast)?;
                }
                Tok::Ident(s) if s == "form" => self.statement(&mut ast)?,
                Tok::Ident(s) if !is_keyword(&s) => {
                    self.next();
                    let value = if *self.peek() == Tok::Sym('=') {
                        self.next();
                        Some(self.int()?)
                    } else {
                        None
                    };
                    self.expect_sym(';')?;
                    if !DIRECTIVES.contains(&s.as_str()) {
                        return Err(DslError::Semantic {
                            line: p.line,
                            col: p.col,
                            msg: format!("unknown directive {s}"),
                        });
                    }
                    ast.directives.insert(s, value);
                }
                t => return self.err(format!("unexpected {}", Self::describe(&t))),
            }
        }
        Ok(ast)
    }

    fn statement(&mut self, ast: &mut Ast) -> Result<(), DslError> {
        let p = self.pos();
        match self.peek().clone() {
            Tok::Ident(s) if s == "gen" => {
                self.next();
                let (name, _) = self.ident()?;
                self.expect_sym(':')?;
                let mut degree = None;
                let mut weight = None;
                loop {
                    match self.peek().clone() {
                        Tok::Ident(k) if k == "degree" => {
                            self.next();
                            degree = Some(self.int()?);
                        }
                        Tok::Ident(k) if k == "weight" => {
                            self.next();
                            let w = self.int()?;
                            if w < 0 || w > u32::MAX as i64 {
                                return self.err("weight out of range");
                            }
                            weight = Some(w as u32);
                        }
                        t => return self.err(format!("expected `degree` or `weight`, found {}", Self::describe(&t))),
                    }
                    if *self.peek() == Tok::Sym(',') {
                        self.next();
                    } else {
                        break;
                    }
                }
                self.expect_sym(';')?;
                let Some(degree) = degree else {
                    return Err(DslError::Semantic {
                        line: p.line,
                        col: p.col,
                        msg: format!("generator {name} has no degree"),
                    });
                };
                ast.gens.push(GenStmt {
                    decl: GeneratorDecl {
                        name,
                        degree,
                        weight: weight.unwrap_or(1),
                    },
                    pos: p,
                });
            }
            Tok::Ident(s) if s == "d" => {
                self.next();
                let (generator, _) = self.ident()?;
                self.expect_sym('=')?;
                let expr = self.expr(false)?;
                self.expect_sym(';')?;
                ast.diffs.push(DiffStmt { generator, expr, pos: p });
            }
            Tok::Ident(s) if s == "form" => {
                self.next();
                let (name, _) = self.ident()?;
                self.expect_sym('=')?;
                let expr = self.expr(true)?;
                self.expect_sym(';')?;
                ast.forms.push(FormStmt { name, expr, pos: p });
            }
            t => return self.err(format!("expected `gen`, `d` or `form`, found {}", Self::describe(&t))),
        }
        Ok(())
    }

    fn expr(&mut self, form: bool) -> Result<Expr, DslError> {
        let mut lhs = self.term(form)?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term(form)?));
                }
                Tok::Sym('-') => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term(form)?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self, form: bool) -> Result<Expr, DslError> {
        let mut lhs = self.unary(form)?;
        while *self.peek() == Tok::Sym('*') {
            self.next();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary(form)?));
        }
        Ok(lhs)
    }

    fn unary(&mut self, form: bool) -> Result<Expr, DslError> {
        if *self.peek() == Tok::Sym('-') {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary(form)?)));
        }
        let base = self.atom(form)?;
        if *self.peek() == Tok::Sym('^') {
            self.next();
            let e = self.int()?;
            if e < 0 || e > u16::MAX as i64 {
                return self.err("exponent out of range");
            }
            return Ok(Expr::Pow(Box::new(base), e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self, form: bool) -> Result<Expr, DslError> {
        let p = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                if *self.peek() == Tok::Sym('/') {
                    self.next();
                    let Tok::Int(d) = self.peek().clone() else {
                        return self.err("expected denominator");
                    };
                    if num_traits::Zero::is_zero(&d) {
                        return self.err("zero denominator");
                    }
                    self.next();
                    return Ok(Expr::Num(Rational::new(n, d)));
                }
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Tok::Ident(s) if s == "d" => {
                if !form {
                    return self.err("`d` is only allowed inside form literals");
                }
                self.next();
                let (name, np) = self.ident()?;
                Ok(Expr::Delta(name, np))
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.next();
                Ok(Expr::Var(s, p))
            }
            Tok::Sym('(') => {
                self.next();
                let e = self.expr(form)?;
                self.expect_sym(')')?;
                Ok(e)
            }
            t => self.err(format!("expected a term, found {}", Self::describe(&t))),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "algebra" | "gen" | "d" | "form" | "degree" | "weight")
}

pub fn parse_ast(src: &str) -> Result<Ast, DslError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    p.document()
}

/// Parses a bare polynomial or form expression such as `x^3 - 1/2*y`.
pub fn parse_expr(src: &str, form: bool) -> Result<Expr, DslError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr(form)?;
    if *p.peek() != Tok::Eof {
        return p.err(format!("trailing input {}", Parser::describe(p.peek())));
    }
    Ok(e)
}

/// Options that the caller imposes on top of the document's directives.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    pub strict_nonpositive: bool,
    pub truncate: Option<usize>,
}

pub fn parse(src: &str) -> Result<DslDocument, DslError> {
    parse_with(src, ParseOptions::default())
}

pub fn parse_with(src: &str, opts: ParseOptions) -> Result<DslDocument, DslError> {
    let ast = parse_ast(src)?;
    let strict = opts.strict_nonpositive || ast.directives.contains_key("strict_nonpositive");
    let truncate = opts.truncate.or_else(|| {
        ast.directives
            .get("truncate_degree")
            .copied()
            .flatten()
            .map(|n| n.max(0) as usize)
    });
    let decls: Vec<GeneratorDecl> = ast.gens.iter().map(|g| g.decl.clone()).collect();
    let gen_only = build_presentation(&decls, &[], BuildOptions::default()).map_err(|e| locate(e, &ast))?;
    let alg = gen_only.algebra();
    let lookup = |name: &str, delta: bool| {
        if delta {
            return None;
        }
        alg.index_of(name).map(|k| (k, alg.gens()[k].degree))
    };
    let mut diffs = Vec::new();
    for s in &ast.diffs {
        if alg.index_of(&s.generator).is_none() {
            return Err(DslError::Semantic {
                line: s.pos.line,
                col: s.pos.col,
                msg: format!("d of undeclared generator {}", s.generator),
            });
        }
        let (value, formal) = s.expr.eval(alg, &lookup)?;
        let k = alg.index_of(&s.generator).unwrap();
        let want = alg.gens()[k].degree + 1;
        if let Some(f) = formal {
            if f != want {
                return Err(DslError::Semantic {
                    line: s.pos.line,
                    col: s.pos.col,
                    msg: format!(
                        "bidegree mismatch: d {} must have degree {want}, expression has degree {f}",
                        s.generator
                    ),
                });
            }
        }
        diffs.push(DiffAssignment {
            generator: s.generator.clone(),
            value,
            formal_degree: formal,
        });
    }
    let presentation = build_presentation(
        &decls,
        &diffs,
        BuildOptions {
            strict_nonpositive: strict,
            truncate,
        },
    )
    .map_err(|e| locate(e, &ast))?;
    let doc = DslDocument {
        name: ast.algebra_name.clone(),
        presentation,
        forms: ast.forms.clone(),
        directives: ast.directives.clone(),
    };
    let dr = DeRhamAlgebra::new(&doc.presentation);
    for f in &doc.forms {
        eval_form(&dr, &f.expr)?;
    }
    Ok(doc)
}

fn locate(e: CdgaError, ast: &Ast) -> DslError {
    let name = match &e {
        CdgaError::DuplicateName(n) | CdgaError::NonpositiveWeight(n) | CdgaError::PositiveDegree(n) => Some(n.clone()),
        CdgaError::DSquaredNonzero { generator, .. } | CdgaError::InhomogeneousDifferential { generator, .. } => {
            Some(generator.clone())
        }
        _ => None,
    };
    let pos = name.and_then(|n| {
        ast.diffs
            .iter()
            .find(|d| d.generator == n)
            .map(|d| d.pos)
            .or_else(|| ast.gens.iter().rev().find(|g| g.decl.name == n).map(|g| g.pos))
    });
    match pos {
        Some(p) => DslError::Semantic {
            line: p.line,
            col: p.col,
            msg: e.to_string(),
        },
        None => DslError::Algebra(e),
    }
}

/// Evaluates a form expression in the de Rham algebra.
pub fn eval_form(dr: &DeRhamAlgebra, expr: &Expr) -> Result<Polynomial, DslError> {
    let alg = dr.algebra();
    let g = dr.base().nvars();
    let lookup = |name: &str, delta: bool| {
        let k = dr.base().algebra().index_of(name)?;
        let idx = if delta { g + k } else { k };
        Some((idx, alg.gens()[idx].degree))
    };
    Ok(expr.eval(alg, &lookup)?.0)
}

/// Evaluates a function expression in the base algebra.
pub fn eval_function(p: &Presentation, expr: &Expr) -> Result<Polynomial, DslError> {
    let alg = p.algebra();
    let lookup = |name: &str, delta: bool| {
        if delta {
            return None;
        }
        alg.index_of(name).map(|k| (k, alg.gens()[k].degree))
    };
    Ok(expr.eval(alg, &lookup)?.0)
}

impl DslDocument {
    pub fn form(&self, name: &str, dr: &DeRhamAlgebra) -> Option<Result<Polynomial, DslError>> {
        self.forms
            .iter()
            .find(|f| f.name == name)
            .map(|f| eval_form(dr, &f.expr))
    }

    pub fn directive(&self, name: &str) -> Option<Option<i64>> {
        self.directives.get(name).copied()
    }
}

/// Convenience for tests and fixtures: parses a document and panics with
/// the diagnostic on failure.
pub fn presentation(src: &str) -> Presentation {
    match parse(src) {
        Ok(d) => d.presentation,
        Err(e) => panic!("{e}"),
    }
}

/// Convenience: evaluates `src` as a function on `p`.
pub fn function(p: &Presentation, src: &str) -> Polynomial {
    let e = parse_expr(src, false).unwrap_or_else(|e| panic!("{e}"));
    eval_function(p, &e).unwrap_or_else(|e| panic!("{e}"))
}

/// Convenience: evaluates `src` as a form on `dr`.
pub fn form(dr: &DeRhamAlgebra, src: &str) -> Polynomial {
    let e = parse_expr(src, true).unwrap_or_else(|e| panic!("{e}"));
    eval_form(dr, &e).unwrap_or_else(|e| panic!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    #[test]
    fn algebra_block_with_one_generator() {
        let doc = parse("algebra A { gen x : degree 0, weight 1; }").unwrap();
        assert_eq!(doc.presentation.nvars(), 1);
        assert!(doc.presentation.d_of(0).is_zero());
        assert_eq!(doc.name.as_deref(), Some("A"));
    }

    #[test]
    fn rcrit_file_round_trips() {
        let p = presentation("gen x: degree 0, weight 1; gen xi: degree -1, weight 2; d xi = 3*x^2;");
        let x = p.var("x").unwrap();
        assert_eq!(*p.d_of(1), p.algebra().pow(&x, 2).scale(&rat(3)));
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let e = parse("gen x: degree 0, weight 1; d x = x;").unwrap_err();
        assert!(matches!(e, DslError::Semantic { line: 1, .. }), "{e}");
    }

    #[test]
    fn odd_square_differential_is_rejected() {
        let e = parse("gen a: degree -1, weight 1; d a = a*a;").unwrap_err();
        assert!(matches!(e, DslError::Semantic { .. }), "{e}");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse("gen x: degree 0, weight 1;\ngen y degree 0;").unwrap_err();
        assert_eq!(
            e,
            DslError::Syntax {
                line: 2,
                col: 7,
                msg: "expected `:`, found `degree`".into()
            }
        );
    }

    #[test]
    fn rationals_comments_and_directives() {
        let doc = parse(
            "# comment\nalgebra P { gen x: degree 0, weight 2; gen e: degree -1, weight 2; d e = 3/4*x; }\nstrict_nonpositive;\nweight_max = 6;",
        )
        .unwrap();
        assert!(doc.presentation.strict_nonpositive());
        assert_eq!(doc.directive("weight_max"), Some(Some(6)));
        let x = doc.presentation.var("x").unwrap();
        assert_eq!(*doc.presentation.d_of(1), x.scale(&crate::kernel::ratio(3, 4)));
    }

    #[test]
    fn unknown_names_are_semantic_errors() {
        let e = parse("gen x: degree 0; d y = 0;").unwrap_err();
        assert!(matches!(e, DslError::Semantic { .. }));
        let e = parse("gen x: degree -1; d x = z;").unwrap_err();
        assert!(matches!(e, DslError::Semantic { .. }));
    }

    #[test]
    fn forms_use_d_for_de_rham_generators() {
        let doc = parse("gen x: degree 0; gen y: degree 0; form w = d x * d y;").unwrap();
        let dr = DeRhamAlgebra::new(&doc.presentation);
        let w = doc.form("w", &dr).unwrap().unwrap();
        assert_eq!(dr.algebra().tridegree(&w), Some((0, 2, 2)));
    }
}
