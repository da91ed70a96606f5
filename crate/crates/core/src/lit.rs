//! Boolean variables, literals and clauses shared by the CNF layer, the SAT
//! core and the theory engine.

use std::fmt;
use std::ops::Not;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn lit(self, positive: bool) -> Lit {
        Lit::new(self, positive)
    }
}

/// A literal packed as `var << 1 | negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit((var.0 << 1) | (!positive as u32))
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self.0 & 1 == 1
    }

    /// Dense index usable for per-literal tables (watch lists).
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// DIMACS integer: 1-based variable index, sign is polarity.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var().0 as i64 + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "v{}", self.var().0)
        } else {
            write!(f, "-v{}", self.var().0)
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Three-valued assignment state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LBool {
    True,
    False,
    Undef,
}

impl LBool {
    #[inline]
    pub fn from_bool(b: bool) -> LBool {
        if b {
            LBool::True
        } else {
            LBool::False
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseOrigin {
    /// Root clause of the assertion with this ordinal.
    Input(usize),
    Tseitin,
    Learned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    lits: Vec<Lit>,
    origin: ClauseOrigin,
}

impl Clause {
    /// Builds a clause, removing duplicate literals. Returns `None` for
    /// tautologies (a literal together with its negation).
    ///
    /// Panics on an empty literal list.
    pub fn new(mut lits: Vec<Lit>, origin: ClauseOrigin) -> Option<Clause> {
        assert!(!lits.is_empty(), "clauses must be non-empty");
        lits.sort_unstable();
        lits.dedup();
        // after sorting, complementary literals are adjacent
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return None;
        }
        Some(Clause { lits, origin })
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn origin(&self) -> ClauseOrigin {
        self.origin
    }

    pub fn into_lits(self) -> Vec<Lit> {
        self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// Prepends a guard literal (used for selector-guarded input clauses).
    pub fn guarded(self, guard: Lit) -> Option<Clause> {
        let mut lits = self.lits;
        lits.push(guard);
        Clause::new(lits, self.origin)
    }
}
