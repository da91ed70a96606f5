use std::collections::HashMap;

use num_bigint::BigInt;

use super::ast::{AttrValue, CmpOp, ScriptCommand, Sort, Term};
use super::lexer::{CharSource, Lexer, StrSource, Token, TokenKind};
use super::FrontendError;

/// Recognized SMT-LIB commands that lie outside the supported subset.
const UNSUPPORTED_COMMANDS: &[&str] = &[
    "check-sat-assuming",
    "declare-datatype",
    "declare-datatypes",
    "declare-sort",
    "define-const",
    "define-fun",
    "define-fun-rec",
    "define-funs-rec",
    "define-sort",
    "echo",
    "get-assertions",
    "get-assignment",
    "get-info",
    "get-option",
    "get-proof",
    "get-unsat-assumptions",
    "get-value",
    "reset",
    "reset-assertions",
];

/// Declared symbols with SMT-LIB scoping: declarations made after a `push`
/// disappear with the matching `pop`.
#[derive(Debug, Clone)]
pub struct DeclEnv {
    sorts: HashMap<String, Sort>,
    scopes: Vec<Vec<String>>,
}

impl Default for DeclEnv {
    fn default() -> Self {
        DeclEnv {
            sorts: HashMap::new(),
            scopes: vec![Vec::new()],
        }
    }
}

impl DeclEnv {
    pub fn sort_of(&self, name: &str) -> Option<Sort> {
        self.sorts.get(name).copied()
    }

    /// Number of open `push` scopes.
    pub fn depth(&self) -> usize {
        self.scopes.len() - 1
    }

    fn declare(&mut self, name: &str, sort: Sort) -> bool {
        if self.sorts.contains_key(name) {
            return false;
        }
        self.sorts.insert(name.to_string(), sort);
        self.scopes.last_mut().unwrap().push(name.to_string());
        true
    }

    fn push(&mut self, n: u32) {
        for _ in 0..n {
            self.scopes.push(Vec::new());
        }
    }

    fn pop(&mut self, n: u32) {
        for _ in 0..n {
            for name in self.scopes.pop().unwrap() {
                self.sorts.remove(&name);
            }
        }
    }
}

enum SExpr<'a> {
    Atom(&'a Token),
    List(&'a Token, Vec<SExpr<'a>>),
}

impl<'a> SExpr<'a> {
    fn token(&self) -> &'a Token {
        match self {
            SExpr::Atom(t) | SExpr::List(t, _) => t,
        }
    }
}

fn parse_err(tok: &Token, message: impl Into<String>) -> FrontendError {
    FrontendError::Parse {
        line: tok.line,
        col: tok.col,
        message: message.into(),
    }
}

fn sort_err(tok: &Token, message: impl Into<String>) -> FrontendError {
    FrontendError::Sort {
        line: tok.line,
        col: tok.col,
        message: message.into(),
    }
}

fn build_sexpr<'a>(tokens: &'a [Token], pos: &mut usize) -> Result<SExpr<'a>, FrontendError> {
    let tok = &tokens[*pos];
    *pos += 1;
    match tok.kind {
        TokenKind::LParen => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(parse_err(tok, "unbalanced parenthesis")),
                    Some(t) if t.kind == TokenKind::RParen => {
                        *pos += 1;
                        return Ok(SExpr::List(tok, items));
                    }
                    Some(t) if t.kind == TokenKind::Eof => return Err(parse_err(t, "unexpected end of input")),
                    Some(_) => items.push(build_sexpr(tokens, pos)?),
                }
            }
        }
        TokenKind::RParen => Err(parse_err(tok, "unexpected `)`")),
        TokenKind::Eof => Err(parse_err(tok, "unexpected end of input")),
        _ => Ok(SExpr::Atom(tok)),
    }
}

/// Parses one command from `tokens`, which must hold exactly one balanced
/// parenthesized command. Declarations and scope changes are applied to
/// `env`.
pub fn parse_command(tokens: &[Token], env: &mut DeclEnv) -> Result<ScriptCommand, FrontendError> {
    let first = tokens.first().ok_or_else(|| FrontendError::Parse {
        line: 1,
        col: 1,
        message: "empty command".into(),
    })?;
    if first.kind != TokenKind::LParen {
        return Err(parse_err(first, format!("expected `(`, found `{}`", first.text)));
    }
    let mut pos = 0;
    let sexpr = build_sexpr(tokens, &mut pos)?;
    if let Some(extra) = tokens.get(pos).filter(|t| t.kind != TokenKind::Eof) {
        return Err(parse_err(extra, "trailing tokens after command"));
    }
    let SExpr::List(open, items) = sexpr else {
        unreachable!()
    };
    let (head, args) = match items.split_first() {
        Some((SExpr::Atom(h), args)) if h.kind == TokenKind::Symbol => (*h, args),
        Some((other, _)) => return Err(parse_err(other.token(), "expected a command name")),
        None => return Err(parse_err(open, "empty command")),
    };
    let name = head.text.as_str();
    let arity = |n: usize| -> Result<(), FrontendError> {
        if args.len() != n {
            Err(parse_err(
                head,
                format!("`{name}` expects {n} argument(s), got {}", args.len()),
            ))
        } else {
            Ok(())
        }
    };
    match name {
        "set-logic" => {
            arity(1)?;
            Ok(ScriptCommand::SetLogic(symbol(&args[0])?.to_string()))
        }
        "set-option" | "set-info" => {
            let (kw, value) = attribute(head, args)?;
            Ok(if name == "set-option" {
                ScriptCommand::SetOption(kw, value)
            } else {
                ScriptCommand::SetInfo(kw, value)
            })
        }
        "declare-const" => {
            arity(2)?;
            let sym = symbol(&args[0])?;
            let sort = parse_sort(&args[1])?;
            declare(env, &args[0], sym, sort)?;
            Ok(ScriptCommand::DeclareConst(sym.to_string(), sort))
        }
        "declare-fun" => {
            arity(3)?;
            let sym = symbol(&args[0])?;
            match &args[1] {
                SExpr::List(_, params) if params.is_empty() => {}
                other => return Err(parse_err(other.token(), "functions with arguments are not supported")),
            }
            let sort = parse_sort(&args[2])?;
            declare(env, &args[0], sym, sort)?;
            Ok(ScriptCommand::DeclareFun(sym.to_string(), sort))
        }
        "assert" => {
            arity(1)?;
            let (term_expr, name) = match &args[0] {
                SExpr::List(_, inner) if matches!(inner.first(), Some(SExpr::Atom(t)) if t.text == "!") => {
                    if inner.len() < 2 {
                        return Err(parse_err(args[0].token(), "annotation without a term"));
                    }
                    (&inner[1], named_attribute(&inner[2..])?)
                }
                other => (other, None),
            };
            let mut ctx = TermCtx { env, lets: Vec::new() };
            let (term, sort) = ctx.term(term_expr)?;
            if sort != Sort::Bool {
                return Err(sort_err(term_expr.token(), "asserted term must be Boolean"));
            }
            Ok(ScriptCommand::Assert { term, name })
        }
        "push" | "pop" => {
            let n = match args {
                [] => 1,
                [arg] => count(arg)?,
                _ => return Err(parse_err(head, format!("`{name}` takes at most one argument"))),
            };
            if name == "push" {
                env.push(n);
                Ok(ScriptCommand::Push(n))
            } else {
                if n as usize > env.depth() {
                    return Err(parse_err(
                        head,
                        format!("cannot pop {n} level(s), only {} pushed", env.depth()),
                    ));
                }
                env.pop(n);
                Ok(ScriptCommand::Pop(n))
            }
        }
        "check-sat" => arity(0).map(|_| ScriptCommand::CheckSat),
        "get-model" => arity(0).map(|_| ScriptCommand::GetModel),
        "get-unsat-core" => arity(0).map(|_| ScriptCommand::GetUnsatCore),
        "exit" => arity(0).map(|_| ScriptCommand::Exit),
        other if UNSUPPORTED_COMMANDS.contains(&other) => Err(FrontendError::UnsupportedCommand {
            line: head.line,
            col: head.col,
            name: other.to_string(),
        }),
        other => Err(parse_err(head, format!("unknown command `{other}`"))),
    }
}

fn declare(env: &mut DeclEnv, at: &SExpr<'_>, name: &str, sort: Sort) -> Result<(), FrontendError> {
    if matches!(name, "true" | "false") || !env.declare(name, sort) {
        return Err(parse_err(at.token(), format!("symbol `{name}` is already declared")));
    }
    Ok(())
}

fn symbol<'a>(e: &SExpr<'a>) -> Result<&'a str, FrontendError> {
    match e {
        SExpr::Atom(t) if t.kind == TokenKind::Symbol => Ok(t.symbol_name()),
        other => Err(parse_err(other.token(), "expected a symbol")),
    }
}

fn count(e: &SExpr<'_>) -> Result<u32, FrontendError> {
    match e {
        SExpr::Atom(t) if t.kind == TokenKind::Numeral => match t.text.parse::<u32>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(parse_err(t, "push/pop count must be between 1 and 2^32-1")),
        },
        other => Err(parse_err(other.token(), "expected a numeral")),
    }
}

fn parse_sort(e: &SExpr<'_>) -> Result<Sort, FrontendError> {
    match e {
        SExpr::Atom(t) if t.kind == TokenKind::Symbol && t.text == "Int" => Ok(Sort::Int),
        SExpr::Atom(t) if t.kind == TokenKind::Symbol && t.text == "Bool" => Ok(Sort::Bool),
        other => Err(sort_err(other.token(), "only Int and Bool sorts are supported")),
    }
}

fn render(e: &SExpr<'_>) -> String {
    match e {
        SExpr::Atom(t) => t.text.clone(),
        SExpr::List(_, items) => {
            let inner: Vec<String> = items.iter().map(render).collect();
            format!("({})", inner.join(" "))
        }
    }
}

fn attr_value(e: &SExpr<'_>) -> AttrValue {
    match e {
        SExpr::Atom(t) => match t.kind {
            TokenKind::Symbol => AttrValue::Symbol(t.symbol_name().to_string()),
            TokenKind::Numeral => AttrValue::Numeral(t.text.parse().unwrap()),
            TokenKind::StringLit => AttrValue::Str(t.string_value()),
            _ => AttrValue::Other(t.text.clone()),
        },
        list => AttrValue::Other(render(list)),
    }
}

fn attribute(head: &Token, args: &[SExpr<'_>]) -> Result<(String, AttrValue), FrontendError> {
    match args {
        [SExpr::Atom(k)] if k.kind == TokenKind::Keyword => Ok((k.text.clone(), AttrValue::None)),
        [SExpr::Atom(k), v] if k.kind == TokenKind::Keyword => Ok((k.text.clone(), attr_value(v))),
        [first, ..] if !matches!(first, SExpr::Atom(k) if k.kind == TokenKind::Keyword) => {
            Err(parse_err(first.token(), "expected a keyword"))
        }
        _ => Err(parse_err(head, "expected `:keyword value`")),
    }
}

/// Extracts the `:named` symbol from an annotation attribute list; other
/// attributes are accepted and ignored.
fn named_attribute(attrs: &[SExpr<'_>]) -> Result<Option<String>, FrontendError> {
    let mut name = None;
    let mut i = 0;
    while i < attrs.len() {
        let key = match &attrs[i] {
            SExpr::Atom(t) if t.kind == TokenKind::Keyword => t,
            other => return Err(parse_err(other.token(), "expected an attribute keyword")),
        };
        let has_value =
            matches!(attrs.get(i + 1), Some(v) if !matches!(v, SExpr::Atom(t) if t.kind == TokenKind::Keyword));
        if key.text == ":named" {
            if !has_value {
                return Err(parse_err(key, "`:named` requires a symbol"));
            }
            name = Some(symbol(&attrs[i + 1])?.to_string());
        }
        i += if has_value { 2 } else { 1 };
    }
    Ok(name)
}

struct TermCtx<'e> {
    env: &'e DeclEnv,
    lets: Vec<HashMap<String, (Term, Sort)>>,
}

impl TermCtx<'_> {
    fn term(&mut self, e: &SExpr<'_>) -> Result<(Term, Sort), FrontendError> {
        match e {
            SExpr::Atom(t) => self.atom(t),
            SExpr::List(open, items) => {
                let (head, args) = items.split_first().ok_or_else(|| parse_err(open, "empty term"))?;
                match head {
                    SExpr::Atom(h) if h.kind == TokenKind::Reserved && h.text == "let" => self.let_term(h, args),
                    SExpr::Atom(h) if h.kind == TokenKind::Reserved && h.text == "!" => {
                        let inner = args.first().ok_or_else(|| parse_err(h, "annotation without a term"))?;
                        named_attribute(&args[1..])?;
                        self.term(inner)
                    }
                    SExpr::Atom(h) if h.kind == TokenKind::Symbol => self.app(h, args),
                    other => Err(parse_err(
                        other.token(),
                        format!("unsupported term head `{}`", render(other)),
                    )),
                }
            }
        }
    }

    fn atom(&self, t: &Token) -> Result<(Term, Sort), FrontendError> {
        match t.kind {
            TokenKind::Numeral => Ok((Term::Const(t.text.parse::<BigInt>().unwrap()), Sort::Int)),
            TokenKind::Decimal => Err(sort_err(t, "real-valued literals are not supported")),
            TokenKind::Symbol => {
                let name = t.symbol_name();
                for scope in self.lets.iter().rev() {
                    if let Some((term, sort)) = scope.get(name) {
                        return Ok((term.clone(), *sort));
                    }
                }
                match name {
                    "true" => return Ok((Term::BoolConst(true), Sort::Bool)),
                    "false" => return Ok((Term::BoolConst(false), Sort::Bool)),
                    _ => {}
                }
                match self.env.sort_of(name) {
                    Some(sort) => Ok((Term::Var(name.to_string()), sort)),
                    None => Err(FrontendError::UnknownSymbol {
                        line: t.line,
                        col: t.col,
                        symbol: name.to_string(),
                    }),
                }
            }
            _ => Err(parse_err(t, format!("unexpected `{}` in term", t.text))),
        }
    }

    fn let_term(&mut self, head: &Token, args: &[SExpr<'_>]) -> Result<(Term, Sort), FrontendError> {
        let [SExpr::List(_, bindings), body] = args else {
            return Err(parse_err(head, "malformed let"));
        };
        // parallel let: bindings are evaluated in the enclosing scope
        let mut scope = HashMap::new();
        for b in bindings {
            match b {
                SExpr::List(_, pair) if pair.len() == 2 => {
                    let name = symbol(&pair[0])?;
                    let bound = self.term(&pair[1])?;
                    if scope.insert(name.to_string(), bound).is_some() {
                        return Err(parse_err(pair[0].token(), format!("duplicate let binding `{name}`")));
                    }
                }
                other => return Err(parse_err(other.token(), "malformed let binding")),
            }
        }
        self.lets.push(scope);
        let result = self.term(body);
        self.lets.pop();
        result
    }

    fn args(&mut self, args: &[SExpr<'_>], expect: Sort) -> Result<Vec<Term>, FrontendError> {
        args.iter()
            .map(|a| {
                let (t, s) = self.term(a)?;
                if s != expect {
                    return Err(sort_err(a.token(), format!("expected a {expect} term, found {s}")));
                }
                Ok(t)
            })
            .collect()
    }

    fn app(&mut self, h: &Token, args: &[SExpr<'_>]) -> Result<(Term, Sort), FrontendError> {
        let name = h.symbol_name();
        let need = |min: usize| -> Result<(), FrontendError> {
            if args.len() < min {
                Err(parse_err(h, format!("`{name}` expects at least {min} argument(s)")))
            } else {
                Ok(())
            }
        };
        let bool_ = |t: Term| Ok((t, Sort::Bool));
        match name {
            "not" => {
                if args.len() != 1 {
                    return Err(parse_err(h, "`not` expects 1 argument"));
                }
                let mut v = self.args(args, Sort::Bool)?;
                bool_(Term::Not(Box::new(v.pop().unwrap())))
            }
            "and" => bool_(Term::And(self.args(args, Sort::Bool)?)),
            "or" => bool_(Term::Or(self.args(args, Sort::Bool)?)),
            "xor" => {
                need(2)?;
                let v = self.args(args, Sort::Bool)?;
                let mut it = v.into_iter();
                let first = it.next().unwrap();
                bool_(it.fold(first, |acc, t| Term::Xor(Box::new(acc), Box::new(t))))
            }
            "=>" => {
                need(2)?;
                let v = self.args(args, Sort::Bool)?;
                let mut it = v.into_iter().rev();
                let last = it.next().unwrap();
                bool_(it.fold(last, |acc, t| Term::Implies(Box::new(t), Box::new(acc))))
            }
            "ite" => {
                if args.len() != 3 {
                    return Err(parse_err(h, "`ite` expects 3 arguments"));
                }
                let c = self.args(&args[..1], Sort::Bool)?.pop().unwrap();
                let (t, ts) = self.term(&args[1])?;
                let (e, es) = self.term(&args[2])?;
                if ts != es {
                    return Err(sort_err(&args[2].token().clone(), "ite branches have different sorts"));
                }
                if ts == Sort::Int {
                    return Err(sort_err(h, "integer-valued ite is not supported"));
                }
                bool_(Term::Ite(Box::new(c), Box::new(t), Box::new(e)))
            }
            "=" | "distinct" => {
                need(2)?;
                let (_, sort) = self.term(&args[0])?;
                let v = self.args(args, sort)?;
                let pairs = |adjacent: bool| -> Vec<(Term, Term)> {
                    let mut out = Vec::new();
                    for i in 0..v.len() {
                        for j in i + 1..v.len() {
                            if !adjacent || j == i + 1 {
                                out.push((v[i].clone(), v[j].clone()));
                            }
                        }
                    }
                    out
                };
                let conj = |mut ts: Vec<Term>| {
                    if ts.len() == 1 {
                        ts.pop().unwrap()
                    } else {
                        Term::And(ts)
                    }
                };
                let term = match (name, sort) {
                    ("=", Sort::Int) => conj(
                        pairs(true)
                            .into_iter()
                            .map(|(a, b)| Term::Cmp(CmpOp::Eq, Box::new(a), Box::new(b)))
                            .collect(),
                    ),
                    ("=", Sort::Bool) => conj(
                        pairs(true)
                            .into_iter()
                            .map(|(a, b)| Term::Not(Box::new(Term::Xor(Box::new(a), Box::new(b)))))
                            .collect(),
                    ),
                    (_, Sort::Int) => Term::Distinct(v),
                    (_, Sort::Bool) => conj(
                        pairs(false)
                            .into_iter()
                            .map(|(a, b)| Term::Xor(Box::new(a), Box::new(b)))
                            .collect(),
                    ),
                };
                bool_(term)
            }
            "<" | "<=" | ">" | ">=" => {
                need(2)?;
                let op = match name {
                    "<" => CmpOp::Lt,
                    "<=" => CmpOp::Le,
                    ">" => CmpOp::Gt,
                    _ => CmpOp::Ge,
                };
                let v = self.args(args, Sort::Int)?;
                let mut cmps: Vec<Term> = v
                    .windows(2)
                    .map(|w| Term::Cmp(op, Box::new(w[0].clone()), Box::new(w[1].clone())))
                    .collect();
                bool_(if cmps.len() == 1 {
                    cmps.pop().unwrap()
                } else {
                    Term::And(cmps)
                })
            }
            "-" => {
                need(1)?;
                let v = self.args(args, Sort::Int)?;
                let mut it = v.into_iter();
                let first = it.next().unwrap();
                if args.len() == 1 {
                    return Ok((Term::Neg(Box::new(first)), Sort::Int));
                }
                Ok((
                    it.fold(first, |acc, t| Term::Sub(Box::new(acc), Box::new(t))),
                    Sort::Int,
                ))
            }
            "+" => {
                need(1)?;
                let v = self.args(args, Sort::Int)?;
                let mut it = v.into_iter();
                let first = it.next().unwrap();
                Ok((
                    it.fold(first, |acc, t| Term::Add(Box::new(acc), Box::new(t))),
                    Sort::Int,
                ))
            }
            "*" | "div" | "mod" | "abs" | "/" | "to_real" | "to_int" | "is_int" => Err(parse_err(
                h,
                format!("function `{name}` is outside integer difference logic"),
            )),
            _ if self.env.sort_of(name).is_some() => Err(sort_err(
                h,
                format!("`{name}` is a constant and cannot be applied to arguments"),
            )),
            _ => Err(FrontendError::UnknownSymbol {
                line: h.line,
                col: h.col,
                symbol: name.to_string(),
            }),
        }
    }
}

/// Incremental command reader: each call to [`Parser::next_command`]
/// consumes exactly one balanced command and returns without reading
/// further input.
pub struct Parser<S> {
    lexer: Lexer<S>,
    env: DeclEnv,
    /// The last error left the lexer inside a command.
    resync: bool,
}

impl<'a> Parser<StrSource<'a>> {
    pub fn from_str(input: &'a str) -> Self {
        Parser::new(StrSource::new(input))
    }
}

impl<S: CharSource> Parser<S> {
    pub fn new(src: S) -> Self {
        Parser {
            lexer: Lexer::new(src),
            env: DeclEnv::default(),
            resync: false,
        }
    }

    pub fn env(&self) -> &DeclEnv {
        &self.env
    }

    /// After an error that left a command unfinished, skips the rest of
    /// the current input line so interactive sessions can resynchronize.
    /// Errors in a complete command need no skipping.
    pub fn recover(&mut self) {
        if self.resync {
            self.lexer.skip_line();
            self.resync = false;
        }
    }

    fn command_tokens(&mut self) -> Result<Option<Vec<Token>>, FrontendError> {
        let first = self.lexer.next_token()?;
        match first.kind {
            TokenKind::Eof => return Ok(None),
            TokenKind::LParen => {}
            _ => return Err(parse_err(&first, format!("expected `(`, found `{}`", first.text))),
        }
        let mut depth = 1usize;
        let mut toks = vec![first];
        while depth > 0 {
            let t = self.lexer.next_token()?;
            match t.kind {
                TokenKind::LParen => depth += 1,
                TokenKind::RParen => depth -= 1,
                TokenKind::Eof => return Err(parse_err(&toks[0], "unexpected end of input inside this command")),
                _ => {}
            }
            toks.push(t);
        }
        Ok(Some(toks))
    }

    pub fn next_command(&mut self) -> Option<Result<ScriptCommand, FrontendError>> {
        self.resync = false;
        match self.command_tokens() {
            Ok(None) => None,
            Ok(Some(toks)) => Some(parse_command(&toks, &mut self.env)),
            Err(e) => {
                self.resync = true;
                Some(Err(e))
            }
        }
    }
}

/// Parses a whole script eagerly; the first error aborts.
pub fn parse_script(input: &str) -> Result<Vec<ScriptCommand>, FrontendError> {
    let mut parser = Parser::from_str(input);
    let mut out = Vec::new();
    while let Some(cmd) = parser.next_command() {
        out.push(cmd?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smtlib::lexer::ReaderSource;

    fn one(src: &str) -> Result<ScriptCommand, FrontendError> {
        let mut cmds = parse_script(src)?;
        assert_eq!(cmds.len(), 1);
        Ok(cmds.pop().unwrap())
    }

    fn var(s: &str) -> Box<Term> {
        Box::new(Term::Var(s.into()))
    }

    #[test]
    fn declare_const() {
        assert_eq!(
            one("(declare-const x Int)").unwrap(),
            ScriptCommand::DeclareConst("x".into(), Sort::Int)
        );
        assert_eq!(
            one("(declare-fun p () Bool)").unwrap(),
            ScriptCommand::DeclareFun("p".into(), Sort::Bool)
        );
    }

    #[test]
    fn named_assertion() {
        let cmds = parse_script("(declare-const x Int)(declare-const y Int)(assert (! (< x y) :named a1))").unwrap();
        assert_eq!(
            cmds[2],
            ScriptCommand::Assert {
                term: Term::Cmp(CmpOp::Lt, var("x"), var("y")),
                name: Some("a1".into()),
            }
        );
        let cmds = parse_script("(declare-const x Int)(assert (< x 1))").unwrap();
        assert!(matches!(&cmds[1], ScriptCommand::Assert { name: None, .. }));
    }

    #[test]
    fn sort_clash() {
        let err = parse_script("(declare-const x Int)(declare-const p Bool)(assert (<= x p))").unwrap_err();
        assert!(matches!(err, FrontendError::Sort { line: 1, col: 58, .. }), "{err:?}");
        let err = parse_script("(declare-const p Bool)(declare-const q Bool)(assert (<= p q))").unwrap_err();
        assert!(matches!(err, FrontendError::Sort { .. }));
        let err = parse_script("(declare-const x Int)(assert (and x true))").unwrap_err();
        assert!(matches!(err, FrontendError::Sort { .. }));
        let err = parse_script("(declare-const x Int)(assert (+ x 1))").unwrap_err();
        assert!(matches!(err, FrontendError::Sort { .. }));
    }

    #[test]
    fn unknown_and_unsupported() {
        assert!(matches!(
            parse_script("(assert (< x 1))"),
            Err(FrontendError::UnknownSymbol { ref symbol, .. }) if symbol == "x"
        ));
        assert!(matches!(
            parse_script("(get-value (x))"),
            Err(FrontendError::UnsupportedCommand { ref name, .. }) if name == "get-value"
        ));
        assert!(matches!(
            parse_script("(define-fun f () Int 3)"),
            Err(FrontendError::UnsupportedCommand { .. })
        ));
        assert!(matches!(parse_script("(frobnicate)"), Err(FrontendError::Parse { .. })));
        assert!(matches!(
            parse_script("(declare-fun f (Int) Int)"),
            Err(FrontendError::Parse { .. })
        ));
        assert!(matches!(
            parse_script("(declare-const r Real)"),
            Err(FrontendError::Sort { .. })
        ));
    }

    #[test]
    fn empty_and_four_command_scripts() {
        assert!(parse_script("").unwrap().is_empty());
        assert!(parse_script("  ; only a comment\n").unwrap().is_empty());
        let cmds =
            parse_script("(set-logic QF_IDL)\n(declare-fun x () Int)\n(assert (>= x 0))\n(check-sat)\n").unwrap();
        assert_eq!(cmds.len(), 4);
        assert_eq!(cmds[0], ScriptCommand::SetLogic("QF_IDL".into()));
        assert_eq!(cmds[3], ScriptCommand::CheckSat);
    }

    #[test]
    fn typical_benchmark_preamble() {
        let src = r#"(set-info :smt-lib-version 2.6)
(set-logic QF_IDL)
(set-info :source |
Generated by: someone
|)
(set-info :license "https://creativecommons.org/licenses/by/4.0/")
(set-info :category "crafted")
(set-info :status unsat)
(declare-fun s_0 () Int)
(declare-fun s_1 () Int)
(declare-fun b () Bool)
(assert (let ((?v_0 (- s_0 s_1))) (and (<= ?v_0 2) (or b (>= ?v_0 3)))))
(assert (not b))
(check-sat)
(exit)
"#;
        let cmds = parse_script(src).unwrap();
        assert_eq!(cmds.len(), 13);
        assert_eq!(
            cmds[5],
            ScriptCommand::SetInfo(":status".into(), AttrValue::Symbol("unsat".into()))
        );
        let ScriptCommand::Assert { term, .. } = &cmds[9] else {
            panic!()
        };
        let diff = Term::Sub(var("s_0"), var("s_1"));
        assert_eq!(
            term,
            &Term::And(vec![
                Term::Cmp(CmpOp::Le, Box::new(diff.clone()), Box::new(Term::Const(2.into()))),
                Term::Or(vec![
                    Term::Var("b".into()),
                    Term::Cmp(CmpOp::Ge, Box::new(diff), Box::new(Term::Const(3.into()))),
                ]),
            ])
        );
    }

    #[test]
    fn let_shadowing_is_parallel() {
        let cmds = parse_script(
            "(declare-const x Int)(declare-const y Int)\
             (assert (let ((x y) (y x)) (< x y)))",
        )
        .unwrap();
        let ScriptCommand::Assert { term, .. } = &cmds[2] else {
            panic!()
        };
        assert_eq!(term, &Term::Cmp(CmpOp::Lt, var("y"), var("x")));
    }

    #[test]
    fn nary_operators() {
        let cmds = parse_script(
            "(declare-const x Int)(declare-const y Int)(declare-const z Int)\
             (declare-const p Bool)(declare-const q Bool)\
             (assert (< x y z))(assert (= p q))(assert (- x y z))",
        );
        // the last assertion is Int-sorted
        assert!(matches!(cmds, Err(FrontendError::Sort { .. })));
        let cmds = parse_script(
            "(declare-const x Int)(declare-const y Int)(declare-const z Int)\
             (declare-const p Bool)(declare-const q Bool)\
             (assert (< x y z))(assert (= p q))(assert (=> p q p))(assert (distinct x y z))",
        )
        .unwrap();
        let terms: Vec<&Term> = cmds
            .iter()
            .filter_map(|c| match c {
                ScriptCommand::Assert { term, .. } => Some(term),
                _ => None,
            })
            .collect();
        assert_eq!(
            terms[0],
            &Term::And(vec![
                Term::Cmp(CmpOp::Lt, var("x"), var("y")),
                Term::Cmp(CmpOp::Lt, var("y"), var("z")),
            ])
        );
        assert_eq!(terms[1], &Term::Not(Box::new(Term::Xor(var("p"), var("q")))));
        assert_eq!(
            terms[2],
            &Term::Implies(var("p"), Box::new(Term::Implies(var("q"), var("p"))))
        );
        assert!(matches!(terms[3], Term::Distinct(v) if v.len() == 3));
    }

    #[test]
    fn push_pop_scoping() {
        let ok = parse_script("(push 1)(declare-const x Int)(assert (< x 0))(pop 1)(declare-const x Int)").unwrap();
        assert_eq!(ok.len(), 5);
        assert!(matches!(
            parse_script("(push)(declare-const x Int)(pop)(assert (< x 0))"),
            Err(FrontendError::UnknownSymbol { .. })
        ));
        assert!(matches!(parse_script("(pop 1)"), Err(FrontendError::Parse { .. })));
        assert_eq!(parse_script("(push)").unwrap(), vec![ScriptCommand::Push(1)]);
        assert!(parse_script("(push 0)").is_err());
    }

    #[test]
    fn duplicate_declaration() {
        assert!(matches!(
            parse_script("(declare-const x Int)(declare-const x Bool)"),
            Err(FrontendError::Parse { .. })
        ));
    }

    #[test]
    fn streaming_matches_batch() {
        let src = "(set-logic QF_IDL)\n(declare-const x Int)\n(push 1)\n\
                   (assert (! (> x 2) :named big))\n(check-sat)\n(pop 1)\n(get-model)\n";
        let batch = parse_script(src).unwrap();
        let mut p = Parser::new(ReaderSource::new(src.as_bytes()));
        let mut streamed = Vec::new();
        while let Some(c) = p.next_command() {
            streamed.push(c.unwrap());
        }
        assert_eq!(batch, streamed);
    }

    #[test]
    fn interactive_recovery() {
        let src = "(assert (< x {))\n(check-sat)\n";
        let mut p = Parser::new(ReaderSource::new(src.as_bytes()));
        assert!(matches!(p.next_command(), Some(Err(FrontendError::Lex { .. }))));
        p.recover();
        assert_eq!(p.next_command().unwrap().unwrap(), ScriptCommand::CheckSat);
        assert!(p.next_command().is_none());
    }

    #[test]
    fn semantic_error_keeps_rest_of_line() {
        let src = "(assert (< x 1)) (check-sat)\n";
        let mut p = Parser::new(ReaderSource::new(src.as_bytes()));
        assert!(matches!(
            p.next_command(),
            Some(Err(FrontendError::UnknownSymbol { .. }))
        ));
        p.recover();
        assert_eq!(p.next_command().unwrap().unwrap(), ScriptCommand::CheckSat);
    }

    #[test]
    fn incomplete_command_errors_inside_input() {
        let src = "(declare-const x Int)\n(assert (< x 1)";
        let err = parse_script(src).unwrap_err();
        let (line, col) = err.position().unwrap();
        assert!(line as usize <= src.lines().count());
        assert!(col >= 1);
    }
}
