use std::collections::HashMap;
use std::fmt;

/// Dense integer-variable identifier. Index 0 is the zero variable, which
/// always takes the value 0 and encodes unary bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub const ZERO: VarId = VarId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Largest constant magnitude accepted in an atom.
pub const MAX_CONSTANT: i64 = (1 << 62) - 1;

/// The constraint `x - y <= c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiffAtom {
    pub x: VarId,
    pub y: VarId,
    pub c: i64,
}

impl DiffAtom {
    pub fn new(x: VarId, y: VarId, c: i64) -> DiffAtom {
        DiffAtom { x, y, c }
    }

    /// Integer complement: `not (x - y <= c)` is `y - x <= -c - 1`.
    pub fn negated(self) -> DiffAtom {
        DiffAtom {
            x: self.y,
            y: self.x,
            c: -self.c - 1,
        }
    }

    pub fn holds(&self, value: impl Fn(VarId) -> i128) -> bool {
        value(self.x) - value(self.y) <= self.c as i128
    }
}

impl fmt::Display for DiffAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{} - v{} <= {}", self.x.0, self.y.0, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub u32);

/// An interned atom with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AtomLit {
    pub atom: AtomId,
    pub positive: bool,
}

impl std::ops::Not for AtomLit {
    type Output = AtomLit;

    fn not(self) -> AtomLit {
        AtomLit {
            atom: self.atom,
            positive: !self.positive,
        }
    }
}

/// Interning table. An atom and its integer complement share one entry;
/// the stored representative always has `x < y`.
#[derive(Debug, Clone, Default)]
pub struct AtomTable {
    atoms: Vec<DiffAtom>,
    index: HashMap<DiffAtom, AtomId>,
}

impl AtomTable {
    /// Interns `x - y <= c`. Panics if `x == y`; callers fold those to a
    /// constant.
    pub fn intern(&mut self, atom: DiffAtom) -> AtomLit {
        assert_ne!(atom.x, atom.y, "self-difference atoms must be folded");
        let (canon, positive) = if atom.x < atom.y {
            (atom, true)
        } else {
            (atom.negated(), false)
        };
        let next = AtomId(self.atoms.len() as u32);
        let id = *self.index.entry(canon).or_insert_with(|| {
            self.atoms.push(canon);
            next
        });
        AtomLit { atom: id, positive }
    }

    /// Representative atom of `id` (the positive polarity).
    pub fn atom(&self, id: AtomId) -> DiffAtom {
        self.atoms[id.0 as usize]
    }

    /// The constraint denoted by a literal.
    pub fn resolve(&self, lit: AtomLit) -> DiffAtom {
        let a = self.atom(lit.atom);
        if lit.positive {
            a
        } else {
            a.negated()
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, DiffAtom)> + '_ {
        self.atoms.iter().enumerate().map(|(i, a)| (AtomId(i as u32), *a))
    }
}

/// Integer variable names to dense ids. The zero variable is pre-registered
/// under a name that cannot be written as an SMT-LIB simple symbol.
#[derive(Debug, Clone)]
pub struct VarTable {
    names: Vec<String>,
    by_name: HashMap<String, VarId>,
}

impl Default for VarTable {
    fn default() -> Self {
        VarTable {
            names: vec!["|zero|".to_string()],
            by_name: HashMap::new(),
        }
    }
}

impl VarTable {
    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&id) = self.by_name.get(name) {
            return id;
        }
        let id = VarId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.by_name.insert(name.to_string(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id.index()]
    }

    /// Number of variables including the zero variable.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complement_identity() {
        let (x, y) = (VarId(1), VarId(2));
        assert_eq!(DiffAtom::new(x, y, 3).negated(), DiffAtom::new(y, x, -4));
        assert_eq!(DiffAtom::new(x, y, 3).negated().negated(), DiffAtom::new(x, y, 3));
    }

    #[test]
    fn complement_shares_entry() {
        let mut t = AtomTable::default();
        let a = t.intern(DiffAtom::new(VarId(1), VarId(2), 3));
        let b = t.intern(DiffAtom::new(VarId(2), VarId(1), -4));
        assert_eq!(a, !b);
        assert_eq!(t.len(), 1);
        let c = t.intern(DiffAtom::new(VarId(2), VarId(1), 3));
        assert_ne!(c.atom, a.atom);
        assert_eq!(t.resolve(b), DiffAtom::new(VarId(2), VarId(1), -4));
    }

    #[test]
    fn interning_matches_structural_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut t = AtomTable::default();
        let mut seen: Vec<(DiffAtom, AtomLit)> = Vec::new();
        for _ in 0..500 {
            let x = VarId(rng.gen_range(0..5));
            let mut y = VarId(rng.gen_range(0..5));
            if y == x {
                y = VarId((x.0 + 1) % 5);
            }
            let a = DiffAtom::new(x, y, rng.gen_range(-4..=4));
            let l = t.intern(a);
            assert_eq!(t.resolve(l), a);
            for (b, m) in &seen {
                assert_eq!(*b == a, *m == l);
                assert_eq!(b.negated() == a, !*m == l);
            }
            seen.push((a, l));
        }
    }

    #[test]
    fn exactly_one_of_atom_and_negation_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut t = AtomTable::default();
        let mut lits = Vec::new();
        for _ in 0..40 {
            let x = VarId(rng.gen_range(0..6));
            let y = VarId((x.0 + rng.gen_range(1..6)) % 6);
            lits.push(t.intern(DiffAtom::new(x, y, rng.gen_range(-10..=10))));
        }
        for _ in 0..1000 {
            let vals: Vec<i128> = (0..6)
                .map(|i| if i == 0 { 0 } else { rng.gen_range(-20..=20) })
                .collect();
            let v = |id: VarId| vals[id.index()];
            for &l in &lits {
                let pos = t.resolve(l).holds(v);
                let neg = t.resolve(!l).holds(v);
                assert!(pos ^ neg);
            }
        }
    }
}
