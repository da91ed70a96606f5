use std::fmt;

use num_bigint::BigInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Int,
    Bool,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Int => f.write_str("Int"),
            Sort::Bool => f.write_str("Bool"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
        }
    }

    pub fn holds<T: Ord>(self, a: &T, b: &T) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
        }
    }
}

/// Sort-checked term. Arithmetic variants only occur below `Cmp` and
/// `Distinct`; a `Var` is Int-sorted there and Bool-sorted everywhere else.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Const(BigInt),
    Var(String),
    Neg(Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Add(Box<Term>, Box<Term>),
    Cmp(CmpOp, Box<Term>, Box<Term>),
    Distinct(Vec<Term>),
    Not(Box<Term>),
    And(Vec<Term>),
    Or(Vec<Term>),
    Xor(Box<Term>, Box<Term>),
    Implies(Box<Term>, Box<Term>),
    Ite(Box<Term>, Box<Term>, Box<Term>),
    BoolConst(bool),
}

/// Variable assignment used by [`Term::eval_bool`].
pub trait Valuation {
    fn int_value(&self, name: &str) -> BigInt;
    fn bool_value(&self, name: &str) -> bool;
}

impl Term {
    pub fn eval_int(&self, val: &dyn Valuation) -> BigInt {
        match self {
            Term::Const(c) => c.clone(),
            Term::Var(v) => val.int_value(v),
            Term::Neg(t) => -t.eval_int(val),
            Term::Sub(a, b) => a.eval_int(val) - b.eval_int(val),
            Term::Add(a, b) => a.eval_int(val) + b.eval_int(val),
            other => panic!("not an integer term: {other}"),
        }
    }

    pub fn eval_bool(&self, val: &dyn Valuation) -> bool {
        match self {
            Term::BoolConst(b) => *b,
            Term::Var(v) => val.bool_value(v),
            Term::Cmp(op, a, b) => op.holds(&a.eval_int(val), &b.eval_int(val)),
            Term::Distinct(ts) => {
                let vs: Vec<BigInt> = ts.iter().map(|t| t.eval_int(val)).collect();
                (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| vs[i] != vs[j]))
            }
            Term::Not(t) => !t.eval_bool(val),
            Term::And(ts) => ts.iter().all(|t| t.eval_bool(val)),
            Term::Or(ts) => ts.iter().any(|t| t.eval_bool(val)),
            Term::Xor(a, b) => a.eval_bool(val) != b.eval_bool(val),
            Term::Implies(a, b) => !a.eval_bool(val) || b.eval_bool(val),
            Term::Ite(c, t, e) => {
                if c.eval_bool(val) {
                    t.eval_bool(val)
                } else {
                    e.eval_bool(val)
                }
            }
            other => panic!("not a Boolean term: {other}"),
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, ts: &[Term]) -> fmt::Result {
    write!(f, "({head}")?;
    for t in ts {
        write!(f, " {t}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) if c.sign() == num_bigint::Sign::Minus => write!(f, "(- {})", -c),
            Term::Const(c) => write!(f, "{c}"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Neg(t) => write!(f, "(- {t})"),
            Term::Sub(a, b) => write!(f, "(- {a} {b})"),
            Term::Add(a, b) => write!(f, "(+ {a} {b})"),
            Term::Cmp(op, a, b) => write!(f, "({} {a} {b})", op.symbol()),
            Term::Distinct(ts) => write_list(f, "distinct", ts),
            Term::Not(t) => write!(f, "(not {t})"),
            Term::And(ts) => write_list(f, "and", ts),
            Term::Or(ts) => write_list(f, "or", ts),
            Term::Xor(a, b) => write!(f, "(xor {a} {b})"),
            Term::Implies(a, b) => write!(f, "(=> {a} {b})"),
            Term::Ite(c, t, e) => write!(f, "(ite {c} {t} {e})"),
            Term::BoolConst(b) => write!(f, "{b}"),
        }
    }
}

/// Attribute value of `set-option` / `set-info`, kept as source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttrValue {
    None,
    Symbol(String),
    Numeral(BigInt),
    Str(String),
    Other(String),
}

impl AttrValue {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            AttrValue::Symbol(s) if s == "true" => Some(true),
            AttrValue::Symbol(s) if s == "false" => Some(false),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptCommand {
    SetLogic(String),
    SetOption(String, AttrValue),
    SetInfo(String, AttrValue),
    DeclareFun(String, Sort),
    DeclareConst(String, Sort),
    Assert { term: Term, name: Option<String> },
    Push(u32),
    Pop(u32),
    CheckSat,
    GetModel,
    GetUnsatCore,
    Exit,
}
