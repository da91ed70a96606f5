//! Rewrites sort-checked terms into a Boolean skeleton over interned
//! difference atoms, and encodes skeletons into CNF.

mod atoms;
mod tseitin;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::smtlib::{CmpOp, Term};

pub use atoms::{AtomId, AtomLit, AtomTable, DiffAtom, VarId, VarTable, MAX_CONSTANT};
pub use tseitin::{negate, tseitin_cnf, Cnf, LitMapper, Root};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("not a difference constraint: {term}")]
    NonDifferenceTerm { term: String },
    #[error("constant out of range (|c| must be below 2^62): {term}")]
    ConstantOverflow { term: String },
}

/// Boolean structure over atom literals and Boolean variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Skeleton {
    Const(bool),
    Atom(AtomLit),
    Bool(String),
    Not(Box<Skeleton>),
    And(Vec<Skeleton>),
    Or(Vec<Skeleton>),
    Xor(Box<Skeleton>, Box<Skeleton>),
    Ite(Box<Skeleton>, Box<Skeleton>, Box<Skeleton>),
}

impl Skeleton {
    pub fn not(s: Skeleton) -> Skeleton {
        match s {
            Skeleton::Const(b) => Skeleton::Const(!b),
            Skeleton::Atom(l) => Skeleton::Atom(!l),
            Skeleton::Not(inner) => *inner,
            other => Skeleton::Not(Box::new(other)),
        }
    }

    pub fn and(parts: Vec<Skeleton>) -> Skeleton {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Skeleton::Const(true) => {}
                Skeleton::Const(false) => return Skeleton::Const(false),
                Skeleton::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Skeleton::Const(true),
            1 => out.pop().unwrap(),
            _ => Skeleton::And(out),
        }
    }

    pub fn or(parts: Vec<Skeleton>) -> Skeleton {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Skeleton::Const(false) => {}
                Skeleton::Const(true) => return Skeleton::Const(true),
                Skeleton::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Skeleton::Const(false),
            1 => out.pop().unwrap(),
            _ => Skeleton::Or(out),
        }
    }

    pub fn xor(a: Skeleton, b: Skeleton) -> Skeleton {
        match (a, b) {
            (Skeleton::Const(x), Skeleton::Const(y)) => Skeleton::Const(x != y),
            (Skeleton::Const(false), o) | (o, Skeleton::Const(false)) => o,
            (Skeleton::Const(true), o) | (o, Skeleton::Const(true)) => Skeleton::not(o),
            (a, b) => Skeleton::Xor(Box::new(a), Box::new(b)),
        }
    }

    pub fn ite(c: Skeleton, t: Skeleton, e: Skeleton) -> Skeleton {
        match (c, t, e) {
            (Skeleton::Const(true), t, _) => t,
            (Skeleton::Const(false), _, e) => e,
            (c, Skeleton::Const(true), e) => Skeleton::or(vec![c, e]),
            (c, Skeleton::Const(false), e) => Skeleton::and(vec![Skeleton::not(c), e]),
            (c, t, Skeleton::Const(true)) => Skeleton::or(vec![Skeleton::not(c), t]),
            (c, t, Skeleton::Const(false)) => Skeleton::and(vec![c, t]),
            (c, t, e) => Skeleton::Ite(Box::new(c), Box::new(t), Box::new(e)),
        }
    }
}

/// `sum(coeff * var) + constant`.
#[derive(Debug, Default)]
struct Linear {
    coeffs: BTreeMap<String, BigInt>,
    constant: BigInt,
}

impl Linear {
    fn scale(mut self, k: i32) -> Linear {
        for v in self.coeffs.values_mut() {
            *v *= k;
        }
        self.constant *= k;
        self
    }

    fn add(mut self, other: Linear) -> Linear {
        for (v, c) in other.coeffs {
            *self.coeffs.entry(v).or_default() += c;
        }
        self.constant += other.constant;
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }
}

fn linear(t: &Term) -> Linear {
    match t {
        Term::Const(c) => Linear {
            constant: c.clone(),
            ..Default::default()
        },
        Term::Var(v) => {
            let mut coeffs = BTreeMap::new();
            coeffs.insert(v.clone(), BigInt::one());
            Linear {
                coeffs,
                constant: BigInt::zero(),
            }
        }
        Term::Neg(a) => linear(a).scale(-1),
        Term::Add(a, b) => linear(a).add(linear(b)),
        Term::Sub(a, b) => linear(a).add(linear(b).scale(-1)),
        other => panic!("non-arithmetic term below a comparison: {other}"),
    }
}

/// Owns the integer-variable and atom tables of one problem.
#[derive(Debug, Clone, Default)]
pub struct Normalizer {
    pub vars: VarTable,
    pub atoms: AtomTable,
}

impl Normalizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_int(&mut self, name: &str) -> VarId {
        self.vars.intern(name)
    }

    /// Builds the difference atom `x - y (op) 0` for `diff = lhs - rhs`,
    /// or a constant when all variables cancel.
    fn compare(&mut self, op: CmpOp, diff: Linear, source: &Term) -> Result<Skeleton, NormalizeError> {
        let one = BigInt::one();
        let minus_one = -BigInt::one();
        let mut pos = None;
        let mut neg = None;
        for (v, c) in &diff.coeffs {
            if *c == one && pos.is_none() {
                pos = Some(v.as_str());
            } else if *c == minus_one && neg.is_none() {
                neg = Some(v.as_str());
            } else {
                return Err(non_difference(source));
            }
        }
        // x - y + k (op) 0  <=>  x - y (op) -k
        let k = -diff.constant.clone();
        if pos.is_none() && neg.is_none() {
            return Ok(Skeleton::Const(op.holds(&BigInt::zero(), &k)));
        }
        let x = pos.map_or(VarId::ZERO, |n| self.vars.intern(n));
        let y = neg.map_or(VarId::ZERO, |n| self.vars.intern(n));
        let atom = |me: &mut Self, x: VarId, y: VarId, c: BigInt| -> Result<Skeleton, NormalizeError> {
            let c = c
                .to_i64()
                .filter(|c| c.abs() <= MAX_CONSTANT)
                .ok_or_else(|| NormalizeError::ConstantOverflow {
                    term: source.to_string(),
                })?;
            Ok(Skeleton::Atom(me.atoms.intern(DiffAtom::new(x, y, c))))
        };
        Ok(match op {
            CmpOp::Le => atom(self, x, y, k)?,
            CmpOp::Lt => atom(self, x, y, k - 1)?,
            CmpOp::Ge => atom(self, y, x, -k)?,
            CmpOp::Gt => atom(self, y, x, -k - 1)?,
            CmpOp::Eq => Skeleton::and(vec![atom(self, x, y, k.clone())?, atom(self, y, x, -k)?]),
        })
    }

    /// Rewrites a comparison or `distinct` term into difference atoms.
    pub fn normalize_atom(&mut self, t: &Term) -> Result<Skeleton, NormalizeError> {
        match t {
            Term::Cmp(op, a, b) => {
                let diff = linear(a).add(linear(b).scale(-1));
                self.compare(*op, diff, t)
            }
            Term::Distinct(ts) => {
                let mut parts = Vec::new();
                for i in 0..ts.len() {
                    for j in i + 1..ts.len() {
                        let d = || linear(&ts[i]).add(linear(&ts[j]).scale(-1));
                        parts.push(Skeleton::or(vec![
                            self.compare(CmpOp::Lt, d(), t)?,
                            self.compare(CmpOp::Gt, d(), t)?,
                        ]));
                    }
                }
                Ok(Skeleton::and(parts))
            }
            other => panic!("normalize_atom called on a non-comparison: {other}"),
        }
    }

    /// Converts a Boolean term into a skeleton with constants folded.
    pub fn skeleton(&mut self, t: &Term) -> Result<Skeleton, NormalizeError> {
        Ok(match t {
            Term::BoolConst(b) => Skeleton::Const(*b),
            Term::Var(v) => Skeleton::Bool(v.clone()),
            Term::Cmp(..) | Term::Distinct(_) => self.normalize_atom(t)?,
            Term::Not(a) => Skeleton::not(self.skeleton(a)?),
            Term::And(ts) => Skeleton::and(ts.iter().map(|t| self.skeleton(t)).collect::<Result<_, _>>()?),
            Term::Or(ts) => Skeleton::or(ts.iter().map(|t| self.skeleton(t)).collect::<Result<_, _>>()?),
            Term::Xor(a, b) => Skeleton::xor(self.skeleton(a)?, self.skeleton(b)?),
            Term::Implies(a, b) => Skeleton::or(vec![Skeleton::not(self.skeleton(a)?), self.skeleton(b)?]),
            Term::Ite(c, a, b) => Skeleton::ite(self.skeleton(c)?, self.skeleton(a)?, self.skeleton(b)?),
            other => panic!("integer term in Boolean position: {other}"),
        })
    }
}

fn non_difference(t: &Term) -> NormalizeError {
    NormalizeError::NonDifferenceTerm { term: t.to_string() }
}
