use crate::lit::{Clause, ClauseOrigin, Lit, Var};

use super::{AtomId, Skeleton};

/// Maps skeleton leaves to SAT variables and allocates gate variables.
pub trait LitMapper {
    fn fresh(&mut self) -> Var;
    fn atom(&mut self, atom: AtomId) -> Var;
    fn bool_var(&mut self, name: &str) -> Var;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Root {
    /// The formula folded to a constant; no clauses were produced.
    Const(bool),
    Lit(Lit),
}

#[derive(Debug, Clone)]
pub struct Cnf {
    pub clauses: Vec<Clause>,
    pub root: Root,
}

pub fn negate(l: Lit) -> Lit {
    !l
}

struct Encoder<'m> {
    mapper: &'m mut dyn LitMapper,
    clauses: Vec<Clause>,
}

impl Encoder<'_> {
    fn emit(&mut self, lits: Vec<Lit>) {
        if let Some(c) = Clause::new(lits, ClauseOrigin::Tseitin) {
            self.clauses.push(c);
        }
    }

    fn encode(&mut self, f: &Skeleton) -> Lit {
        match f {
            Skeleton::Atom(a) => self.mapper.atom(a.atom).lit(a.positive),
            Skeleton::Bool(name) => self.mapper.bool_var(name).lit(true),
            Skeleton::Not(a) => negate(self.encode(a)),
            Skeleton::Const(b) => {
                let g = self.mapper.fresh().lit(true);
                self.emit(vec![if *b { g } else { !g }]);
                g
            }
            Skeleton::And(parts) => {
                let ins: Vec<Lit> = parts.iter().map(|p| self.encode(p)).collect();
                let g = self.mapper.fresh().lit(true);
                for &l in &ins {
                    self.emit(vec![!g, l]);
                }
                let mut big: Vec<Lit> = ins.iter().map(|&l| !l).collect();
                big.push(g);
                self.emit(big);
                g
            }
            Skeleton::Or(parts) => {
                let ins: Vec<Lit> = parts.iter().map(|p| self.encode(p)).collect();
                let g = self.mapper.fresh().lit(true);
                for &l in &ins {
                    self.emit(vec![g, !l]);
                }
                let mut big = ins;
                big.push(!g);
                self.emit(big);
                g
            }
            Skeleton::Xor(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                let g = self.mapper.fresh().lit(true);
                self.emit(vec![!g, a, b]);
                self.emit(vec![!g, !a, !b]);
                self.emit(vec![g, !a, b]);
                self.emit(vec![g, a, !b]);
                g
            }
            Skeleton::Ite(c, t, e) => {
                let (c, t, e) = (self.encode(c), self.encode(t), self.encode(e));
                let g = self.mapper.fresh().lit(true);
                self.emit(vec![!g, !c, t]);
                self.emit(vec![!g, c, e]);
                self.emit(vec![g, !c, !t]);
                self.emit(vec![g, c, !e]);
                g
            }
        }
    }
}

/// Tseitin encoding with full (two-sided) gate definitions. Gate clauses
/// are tagged `Tseitin`; the root is asserted by a unit clause tagged
/// `Input(assertion_index)`.
pub fn tseitin_cnf(f: &Skeleton, assertion_index: usize, mapper: &mut dyn LitMapper) -> Cnf {
    if let Skeleton::Const(b) = f {
        return Cnf {
            clauses: Vec::new(),
            root: Root::Const(*b),
        };
    }
    let mut enc = Encoder {
        mapper,
        clauses: Vec::new(),
    };
    let root = enc.encode(f);
    let mut clauses = enc.clauses;
    clauses.push(Clause::new(vec![root], ClauseOrigin::Input(assertion_index)).unwrap());
    Cnf {
        clauses,
        root: Root::Lit(root),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::AtomLit;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    #[derive(Default)]
    struct Mapper {
        next: u32,
        atoms: HashMap<AtomId, Var>,
        bools: HashMap<String, Var>,
    }

    impl LitMapper for Mapper {
        fn fresh(&mut self) -> Var {
            self.next += 1;
            Var(self.next - 1)
        }
        fn atom(&mut self, atom: AtomId) -> Var {
            if let Some(&v) = self.atoms.get(&atom) {
                return v;
            }
            let v = self.fresh();
            self.atoms.insert(atom, v);
            v
        }
        fn bool_var(&mut self, name: &str) -> Var {
            if let Some(&v) = self.bools.get(name) {
                return v;
            }
            let v = self.fresh();
            self.bools.insert(name.to_string(), v);
            v
        }
    }

    fn leaf(i: u32, pos: bool) -> Skeleton {
        Skeleton::Atom(AtomLit {
            atom: AtomId(i),
            positive: pos,
        })
    }

    #[test]
    fn single_literal_needs_no_gates() {
        let mut m = Mapper::default();
        let cnf = tseitin_cnf(&leaf(0, false), 3, &mut m);
        assert_eq!(cnf.clauses.len(), 1);
        assert_eq!(cnf.clauses[0].lits(), &[Var(0).lit(false)]);
        assert_eq!(cnf.clauses[0].origin(), ClauseOrigin::Input(3));
    }

    #[test]
    fn or_gate_has_three_clauses_plus_root() {
        let mut m = Mapper::default();
        let cnf = tseitin_cnf(&Skeleton::Or(vec![leaf(0, true), leaf(1, true)]), 0, &mut m);
        let gates: Vec<_> = cnf
            .clauses
            .iter()
            .filter(|c| c.origin() == ClauseOrigin::Tseitin)
            .collect();
        assert_eq!(gates.len(), 3);
        assert_eq!(cnf.clauses.len(), 4);
        assert_eq!(cnf.root, Root::Lit(Var(2).lit(true)));
    }

    #[test]
    fn constants_produce_no_clauses() {
        let mut m = Mapper::default();
        assert_eq!(tseitin_cnf(&Skeleton::Const(false), 0, &mut m).root, Root::Const(false));
    }

    #[test]
    fn negate_is_involution() {
        for v in 0..8 {
            let l = Var(v).lit(v % 2 == 0);
            assert_eq!(negate(negate(l)), l);
        }
    }

    fn random_tree(rng: &mut ChaCha8Rng, budget: &mut i32, leaves: u32) -> Skeleton {
        *budget -= 1;
        if *budget <= 0 || rng.gen_bool(0.3) {
            return if rng.gen_bool(0.8) {
                leaf(rng.gen_range(0..leaves), rng.gen())
            } else {
                Skeleton::Bool(format!("p{}", rng.gen_range(0..2)))
            };
        }
        let mut sub = |rng: &mut ChaCha8Rng| random_tree(rng, budget, leaves);
        match rng.gen_range(0..5) {
            0 => Skeleton::Not(Box::new(sub(rng))),
            1 => Skeleton::And(vec![sub(rng), sub(rng), sub(rng)]),
            2 => Skeleton::Or(vec![sub(rng), sub(rng)]),
            3 => Skeleton::Xor(Box::new(sub(rng)), Box::new(sub(rng))),
            _ => Skeleton::Ite(Box::new(sub(rng)), Box::new(sub(rng)), Box::new(sub(rng))),
        }
    }

    fn eval(f: &Skeleton, atoms: &HashMap<AtomId, bool>, bools: &HashMap<String, bool>) -> bool {
        match f {
            Skeleton::Const(b) => *b,
            Skeleton::Atom(a) => atoms[&a.atom] == a.positive,
            Skeleton::Bool(n) => bools[n],
            Skeleton::Not(a) => !eval(a, atoms, bools),
            Skeleton::And(v) => v.iter().all(|p| eval(p, atoms, bools)),
            Skeleton::Or(v) => v.iter().any(|p| eval(p, atoms, bools)),
            Skeleton::Xor(a, b) => eval(a, atoms, bools) != eval(b, atoms, bools),
            Skeleton::Ite(c, t, e) => {
                if eval(c, atoms, bools) {
                    eval(t, atoms, bools)
                } else {
                    eval(e, atoms, bools)
                }
            }
        }
    }

    /// Plain backtracking satisfiability check over the remaining variables.
    fn brute_sat(clauses: &[Vec<Lit>], assign: &mut Vec<Option<bool>>) -> bool {
        let mut open = None;
        for c in clauses {
            let mut sat = false;
            let mut unassigned = None;
            for &l in c {
                match assign[l.var().index()] {
                    Some(v) if v == l.is_positive() => sat = true,
                    Some(_) => {}
                    None => unassigned = Some(l.var()),
                }
            }
            if !sat {
                match unassigned {
                    None => return false,
                    Some(v) => open = open.or(Some(v)),
                }
            }
        }
        let Some(v) = open else { return true };
        for b in [false, true] {
            assign[v.index()] = Some(b);
            if brute_sat(clauses, assign) {
                assign[v.index()] = None;
                return true;
            }
        }
        assign[v.index()] = None;
        false
    }

    /// Projected onto atom and Boolean variables, the CNF has the same
    /// models as the source formula.
    #[test]
    fn random_trees_preserve_truth_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..60 {
            let mut budget = 20;
            let f = random_tree(&mut rng, &mut budget, 6);
            let mut m = Mapper::default();
            let cnf = tseitin_cnf(&f, 0, &mut m);
            let clauses: Vec<Vec<Lit>> = cnf.clauses.iter().map(|c| c.lits().to_vec()).collect();
            let leaves: Vec<(Option<AtomId>, Option<String>, Var)> = m
                .atoms
                .iter()
                .map(|(a, v)| (Some(*a), None, *v))
                .chain(m.bools.iter().map(|(n, v)| (None, Some(n.clone()), *v)))
                .collect();
            assert!(leaves.len() <= 12);
            for mask in 0u32..(1 << leaves.len()) {
                let mut atoms = HashMap::new();
                let mut bools = HashMap::new();
                let mut assign = vec![None; m.next as usize];
                for (i, (a, b, v)) in leaves.iter().enumerate() {
                    let val = mask >> i & 1 == 1;
                    assign[v.index()] = Some(val);
                    if let Some(a) = a {
                        atoms.insert(*a, val);
                    }
                    if let Some(b) = b {
                        bools.insert(b.clone(), val);
                    }
                }
                assert_eq!(eval(&f, &atoms, &bools), brute_sat(&clauses, &mut assign), "{f:?}");
            }
        }
    }
}
