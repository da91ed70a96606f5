//! Reference procedures that share no code with the solver: a textbook
//! cubic Floyd–Warshall, a super-source Bellman–Ford feasibility check and
//! a truth-table enumerator over difference atoms.

use std::collections::HashMap;

use thiserror::Error;

use crate::theory::Weight;

/// Row-major distances, `None` for no path.
pub type DistRows<W> = Vec<Vec<Option<W>>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("negative cycle")]
pub struct NegativeCycle;

/// All-pairs shortest paths over vertices `0..n` by the O(n³) closure.
/// `edges` holds `(from, to, weight)`.
pub fn scratch_floyd_warshall<W: Weight>(n: usize, edges: &[(usize, usize, W)]) -> Result<DistRows<W>, NegativeCycle> {
    let mut d: DistRows<W> = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(W::zero());
    }
    for &(u, v, w) in edges {
        if d[u][v].is_none_or(|old| w < old) {
            d[u][v] = Some(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                let Some(kj) = d[k][j] else { continue };
                if d[i][j].is_none_or(|old| ik + kj < old) {
                    d[i][j] = Some(ik + kj);
                }
            }
        }
    }
    if (0..n).any(|i| d[i][i].is_some_and(|x| x < W::zero())) {
        return Err(NegativeCycle);
    }
    Ok(d)
}

/// The constraint `v[x] - v[y] <= c` over integer variables indexed from 0;
/// variable 0 is the constant zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OAtom {
    pub x: usize,
    pub y: usize,
    pub c: i64,
}

impl OAtom {
    pub fn new(x: usize, y: usize, c: i64) -> OAtom {
        OAtom { x, y, c }
    }

    /// Integer complement: `v[y] - v[x] <= -c - 1`.
    pub fn negated(self) -> OAtom {
        OAtom {
            x: self.y,
            y: self.x,
            c: -self.c - 1,
        }
    }

    pub fn holds(&self, values: &[i128]) -> bool {
        values[self.x] - values[self.y] <= self.c as i128
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// Values for variables `0..n`, with variable 0 at 0.
    Sat(Vec<i128>),
    Unsat,
}

/// Feasibility of a conjunction over variables `0..n` by Bellman–Ford from
/// a virtual source joined to every variable with weight 0.
pub fn bellman_ford_consistent(n: usize, atoms: &[OAtom]) -> Feasibility {
    let mut dist = vec![0i128; n];
    for round in 0..=n {
        let mut changed = false;
        for a in atoms {
            // x - y <= c is the edge y -> x with weight c.
            let cand = dist[a.y] + a.c as i128;
            if cand < dist[a.x] {
                dist[a.x] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        if round == n {
            return Feasibility::Unsat;
        }
    }
    let z = dist.first().copied().unwrap_or(0);
    Feasibility::Sat(dist.into_iter().map(|d| d - z).collect())
}

/// Quantifier-free difference-logic formula used by the generators and the
/// enumeration oracle. Integer variables are indices with 0 the zero
/// variable; Boolean variables have their own index space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    /// `v[x] - v[y] <= c`
    Le(OAtom),
    /// `v[x] - v[y] = c`
    Eq(usize, usize, i64),
    /// `v[x] - v[y] != c`
    Distinct(usize, usize, i64),
    Bool(usize),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Ite(Box<Formula>, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn eval(&self, ints: &[i128], bools: &[bool]) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Le(a) => a.holds(ints),
            Formula::Eq(x, y, c) => ints[*x] - ints[*y] == *c as i128,
            Formula::Distinct(x, y, c) => ints[*x] - ints[*y] != *c as i128,
            Formula::Bool(b) => bools[*b],
            Formula::Not(f) => !f.eval(ints, bools),
            Formula::And(v) => v.iter().all(|f| f.eval(ints, bools)),
            Formula::Or(v) => v.iter().any(|f| f.eval(ints, bools)),
            Formula::Xor(a, b) => a.eval(ints, bools) != b.eval(ints, bools),
            Formula::Implies(a, b) => !a.eval(ints, bools) || b.eval(ints, bools),
            Formula::Ite(c, t, e) => {
                if c.eval(ints, bools) {
                    t.eval(ints, bools)
                } else {
                    e.eval(ints, bools)
                }
            }
        }
    }

    /// Largest integer and Boolean variable index plus one.
    pub fn extent(&self) -> (usize, usize) {
        let mut ints = 1;
        let mut bools = 0;
        self.visit(&mut |f| match f {
            Formula::Le(a) => ints = ints.max(a.x + 1).max(a.y + 1),
            Formula::Eq(x, y, _) | Formula::Distinct(x, y, _) => ints = ints.max(x + 1).max(y + 1),
            Formula::Bool(b) => bools = bools.max(b + 1),
            _ => {}
        });
        (ints, bools)
    }

    fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) => a.visit(f),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|x| x.visit(f)),
            Formula::Xor(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Ite(a, b, c) => {
                a.visit(f);
                b.visit(f);
                c.visit(f);
            }
            _ => {}
        }
    }
}

/// Maximum number of free atoms the enumeration oracle will expand.
pub const ATOM_BUDGET: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("formula has {0} atoms, above the enumeration budget")]
    AtomBudgetExceeded(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Sat => "sat",
            Verdict::Unsat => "unsat",
        }
    }
}

/// Propositional skeleton over numbered atoms.
enum Skel {
    Const(bool),
    Atom(usize, bool),
    Bool(usize),
    Not(Box<Skel>),
    And(Vec<Skel>),
    Or(Vec<Skel>),
    Xor(Box<Skel>, Box<Skel>),
    Ite(Box<Skel>, Box<Skel>, Box<Skel>),
}

impl Skel {
    fn eval(&self, atoms: &[bool], bools: &[bool]) -> bool {
        match self {
            Skel::Const(b) => *b,
            Skel::Atom(i, pos) => atoms[*i] == *pos,
            Skel::Bool(b) => bools[*b],
            Skel::Not(a) => !a.eval(atoms, bools),
            Skel::And(v) => v.iter().all(|s| s.eval(atoms, bools)),
            Skel::Or(v) => v.iter().any(|s| s.eval(atoms, bools)),
            Skel::Xor(a, b) => a.eval(atoms, bools) != b.eval(atoms, bools),
            Skel::Ite(c, t, e) => {
                if c.eval(atoms, bools) {
                    t.eval(atoms, bools)
                } else {
                    e.eval(atoms, bools)
                }
            }
        }
    }
}

#[derive(Default)]
struct AtomIndex {
    atoms: Vec<OAtom>,
    index: HashMap<OAtom, usize>,
}

impl AtomIndex {
    /// Atom literal for `a`, sharing one entry between an atom and its
    /// complement. Self-differences are constants.
    fn leaf(&mut self, a: OAtom) -> Skel {
        if a.x == a.y {
            return Skel::Const(0 <= a.c);
        }
        let (canon, pos) = if a.x < a.y { (a, true) } else { (a.negated(), false) };
        let next = self.atoms.len();
        let i = *self.index.entry(canon).or_insert(next);
        if i == next {
            self.atoms.push(canon);
        }
        Skel::Atom(i, pos)
    }

    fn skel(&mut self, f: &Formula) -> Skel {
        match f {
            Formula::Const(b) => Skel::Const(*b),
            Formula::Le(a) => self.leaf(*a),
            Formula::Eq(x, y, c) => Skel::And(vec![
                self.leaf(OAtom::new(*x, *y, *c)),
                self.leaf(OAtom::new(*y, *x, -*c)),
            ]),
            Formula::Distinct(x, y, c) => Skel::Or(vec![
                self.leaf(OAtom::new(*x, *y, *c - 1)),
                self.leaf(OAtom::new(*y, *x, -*c - 1)),
            ]),
            Formula::Bool(b) => Skel::Bool(*b),
            Formula::Not(a) => Skel::Not(Box::new(self.skel(a))),
            Formula::And(v) => Skel::And(v.iter().map(|g| self.skel(g)).collect()),
            Formula::Or(v) => Skel::Or(v.iter().map(|g| self.skel(g)).collect()),
            Formula::Xor(a, b) => Skel::Xor(Box::new(self.skel(a)), Box::new(self.skel(b))),
            Formula::Implies(a, b) => Skel::Or(vec![Skel::Not(Box::new(self.skel(a))), self.skel(b)]),
            Formula::Ite(c, t, e) => Skel::Ite(Box::new(self.skel(c)), Box::new(self.skel(t)), Box::new(self.skel(e))),
        }
    }
}

/// Ground truth for a conjunction of formulas. Every truth assignment to
/// the atoms and Boolean variables is tried; an assignment that satisfies
/// the skeleton is checked for integer feasibility with Bellman–Ford.
///
/// Assertions that are a single `Le` atom are fixed true rather than
/// enumerated, so only the remaining atoms count against [`ATOM_BUDGET`].
pub fn enumerate_oracle(assertions: &[Formula]) -> Result<Verdict, OracleError> {
    let mut ints = 1;
    let mut nbools = 0;
    for f in assertions {
        let (i, b) = f.extent();
        ints = ints.max(i);
        nbools = nbools.max(b);
    }
    let mut fixed = Vec::new();
    let mut rest = Vec::new();
    for f in assertions {
        match f {
            Formula::Le(a) => fixed.push(*a),
            other => rest.push(other.clone()),
        }
    }
    if fixed.iter().any(|a| a.x == a.y && a.c < 0) {
        return Ok(Verdict::Unsat);
    }
    let mut index = AtomIndex::default();
    let skel = Skel::And(rest.iter().map(|f| index.skel(f)).collect());
    let n = index.atoms.len();
    if n > ATOM_BUDGET {
        return Err(OracleError::AtomBudgetExceeded(n));
    }
    let total = n + nbools;
    let mut atom_vals = vec![false; n];
    let mut bool_vals = vec![false; nbools];
    let mut lits = Vec::with_capacity(fixed.len() + n);
    for mask in 0u64..(1u64 << total) {
        for (i, v) in atom_vals.iter_mut().enumerate() {
            *v = mask >> i & 1 == 1;
        }
        for (i, v) in bool_vals.iter_mut().enumerate() {
            *v = mask >> (n + i) & 1 == 1;
        }
        if !skel.eval(&atom_vals, &bool_vals) {
            continue;
        }
        lits.clear();
        lits.extend_from_slice(&fixed);
        for (a, &v) in index.atoms.iter().zip(&atom_vals) {
            lits.push(if v { *a } else { a.negated() });
        }
        if let Feasibility::Sat(_) = bellman_ford_consistent(ints, &lits) {
            return Ok(Verdict::Sat);
        }
    }
    Ok(Verdict::Unsat)
}
