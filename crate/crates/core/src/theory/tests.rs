use super::*;
use crate::sat::Theory;
use crate::testkit::{bellman_ford_consistent, scratch_floyd_warshall, Feasibility, OAtom};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const X: VarId = VarId(1);
const Y: VarId = VarId(2);
const Z3: VarId = VarId(3);

fn a(x: VarId, y: VarId, c: i64) -> DiffAtom {
    DiffAtom::new(x, y, c)
}

/// Distinct placeholder literal per assertion, for tests that drive the
/// theory directly.
fn tag(i: u32) -> Lit {
    Var(i).lit(true)
}

fn d<W: Weight>(t: &DiffTheory<W>, from: VarId, to: VarId) -> Option<W> {
    t.matrix().get(t.vertex_of(from).unwrap(), t.vertex_of(to).unwrap())
}

fn scratch<W: Weight>(t: &DiffTheory<W>) -> Vec<Vec<Option<W>>> {
    let edges: Vec<(usize, usize, W)> = t.committed_edges().iter().map(|e| (e.from, e.to, e.weight)).collect();
    scratch_floyd_warshall(t.matrix().dim(), &edges).expect("committed graph is consistent")
}

#[test]
fn vertices() {
    let mut t: DiffTheory<i64> = DiffTheory::new();
    assert_eq!(t.ensure_vertex(VarId::ZERO), 0);
    assert_eq!(t.matrix().dim(), 1);
    assert_eq!(t.matrix().get(0, 0), Some(0));
    for v in 1..=3 {
        t.ensure_vertex(VarId(v));
    }
    let m = t.matrix();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(m.get(i, j), if i == j { Some(0) } else { None });
        }
    }
    let mut t: DiffTheory<i64> = DiffTheory::new();
    t.assert_edge(a(VarId(5), VarId(9), 1), tag(0), 0).unwrap();
    t.ensure_vertex(VarId(5));
    t.assert_edge(a(VarId(9), VarId(7), 1), tag(1), 0).unwrap();
    assert_eq!(t.matrix().dim(), 4);
}

#[test]
fn tight_equality_then_conflict() {
    let mut t: DiffTheory<i64> = DiffTheory::new();
    t.assert_edge(a(X, Y, 3), tag(0), 1).unwrap();
    assert_eq!(d(&t, Y, X), Some(3));
    assert_eq!(d(&t, X, Y), None);
    t.assert_edge(a(Y, X, -3), tag(1), 1).unwrap();
    assert_eq!(d(&t, X, Y), Some(-3));
    assert_eq!(d(&t, Y, X), Some(3));
    assert_eq!(d(&t, X, X), Some(0));
    assert_eq!(d(&t, Y, Y), Some(0));
    let before = t.matrix().clone();
    let c = t.assert_edge(a(Y, X, -4), tag(2), 1).unwrap_err();
    assert_eq!(c.lits, vec![tag(2), tag(0)]);
    assert_eq!(c.atoms, vec![a(Y, X, -4), a(X, Y, 3)]);
    assert_eq!(t.matrix(), &before, "a conflict leaves the state untouched");
}

#[test]
fn three_cycle_explanation() {
    // x <= y + 1, y <= z + 1, z <= x - 3
    let mut t: DiffTheory<i64> = DiffTheory::new();
    t.assert_edge(a(X, Y, 1), tag(0), 1).unwrap();
    t.assert_edge(a(Y, Z3, 1), tag(1), 1).unwrap();
    let c = t.assert_edge(a(Z3, X, -3), tag(2), 1).unwrap_err();
    let mut lits = c.lits.clone();
    lits.sort();
    assert_eq!(lits, vec![tag(0), tag(1), tag(2)]);
    assert_eq!(c.atoms.iter().map(|a| a.c).sum::<i64>(), -1);
}

#[test]
fn weaker_parallel_constraint_is_a_no_op() {
    let mut t: DiffTheory<i64> = DiffTheory::new();
    t.assert_edge(a(X, Y, 1), tag(0), 1).unwrap();
    let m = t.matrix().clone();
    t.assert_edge(a(X, Y, 4), tag(1), 2).unwrap();
    assert_eq!(t.matrix(), &m);
    assert_eq!(t.committed_edges().len(), 1);
    assert_eq!(t.stats().redundant_edges, 1);
    t.assert_edge(a(X, Y, 0), tag(2), 2).unwrap();
    assert_eq!(d(&t, Y, X), Some(0));
    t.backtrack_to(1);
    assert_eq!(t.matrix(), &m);
}

#[test]
fn backtracking() {
    let mut t: DiffTheory<i64> = DiffTheory::new();
    t.ensure_vertex(X);
    t.ensure_vertex(Y);
    t.ensure_vertex(Z3);
    let empty = t.matrix().clone();
    t.assert_edge(a(X, Y, 2), tag(0), 1).unwrap();
    let level1 = t.matrix().clone();
    t.assert_edge(a(Y, Z3, -1), tag(1), 2).unwrap();
    t.assert_edge(a(Z3, X, 5), tag(2), 2).unwrap();
    t.backtrack_to(1);
    assert_eq!(t.matrix(), &level1);
    assert_eq!(t.committed_edges().len(), 1);
    t.backtrack_to(0);
    assert_eq!(t.matrix(), &empty);
    assert!(t.committed_edges().is_empty());
    assert_eq!(t.matrix().dim(), 4, "vertices survive backtracking");
}

#[test]
fn implied_atoms_examples() {
    let mut t: DiffTheory<i64> = DiffTheory::new();
    t.register_atom(Var(0), a(X, Y, 1));
    t.register_atom(Var(1), a(X, Y, 5));
    t.assert_lit(Var(0).lit(true), 1).unwrap();
    let mut out = Vec::new();
    t.propagate(&mut out);
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].0, Var(1).lit(true));
    assert_eq!(t.explain(out[0].0, out[0].1), vec![Var(0).lit(true)]);

    let mut t: DiffTheory<i64> = DiffTheory::new();
    t.register_atom(Var(0), a(X, Y, 1));
    t.register_atom(Var(1), a(Y, Z3, 1));
    t.register_atom(Var(2), a(X, Z3, 0));
    t.assert_lit(Var(0).lit(true), 1).unwrap();
    t.assert_lit(Var(1).lit(true), 1).unwrap();
    let mut out = Vec::new();
    t.propagate(&mut out);
    assert!(out.is_empty(), "{out:?}");
    assert_eq!(d(&t, Z3, X), Some(2));
    assert_eq!(d(&t, X, Z3), None);
}

#[test]
fn negative_implication() {
    // x - y <= -2 implies not (y - x <= 1)
    let mut t: DiffTheory<i64> = DiffTheory::new();
    t.register_atom(Var(0), a(X, Y, -2));
    t.register_atom(Var(1), a(Y, X, 1));
    t.assert_lit(Var(0).lit(true), 1).unwrap();
    let mut out = Vec::new();
    t.propagate(&mut out);
    assert_eq!(out.iter().map(|p| p.0).collect::<Vec<_>>(), vec![Var(1).lit(false)]);
}

#[test]
fn models() {
    let mut t: DiffTheory<i64> = DiffTheory::new();
    t.ensure_vertex(X);
    t.ensure_vertex(Y);
    let m = t.extract_model();
    assert!(m.iter().all(|(_, v)| v == 0));
    t.assert_edge(a(X, Y, 3), tag(0), 0).unwrap();
    let m = t.extract_model();
    assert_eq!(m.value(VarId::ZERO), 0);
    assert!(m.value(X) - m.value(Y) <= 3);
    assert_eq!(m.value(VarId(42)), 0);
}

/// Random assert/backtrack sequence; after every step the matrix equals the
/// scratch closure of the committed edges, every conflict is a genuine
/// negative cycle that disappears without the new atom, and the model
/// satisfies every committed atom.
fn fuzz_sequence<W: Weight>(seed: u64, steps: usize, n: u32, w: i64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t: DiffTheory<W> = DiffTheory::new();
    for v in 1..n {
        t.ensure_vertex(VarId(v));
    }
    let mut level = 0u32;
    for step in 0..steps {
        if level > 0 && rng.gen_bool(0.15) {
            level = rng.gen_range(0..level);
            t.backtrack_to(level);
        } else {
            if rng.gen_bool(0.5) {
                level += 1;
            }
            let x = rng.gen_range(0..n);
            let y = (x + rng.gen_range(1..n)) % n;
            let atom = a(VarId(x), VarId(y), rng.gen_range(-w..=w));
            let before = t.matrix().clone();
            match t.assert_edge(atom, tag(step as u32), level) {
                Ok(()) => {
                    for i in 0..n as usize {
                        for j in 0..n as usize {
                            let (old, new) = (before.get(i, j), t.matrix().get(i, j));
                            if let Some(o) = old {
                                assert!(new.is_some_and(|nw| nw <= o), "monotone");
                            }
                        }
                    }
                }
                Err(c) => {
                    assert_eq!(t.matrix(), &before);
                    assert_eq!(c.atoms[0], atom);
                    let sum: i64 = c.atoms.iter().map(|a| a.c).sum();
                    assert!(sum < 0);
                    let to_o = |d: &DiffAtom| OAtom::new(d.x.index(), d.y.index(), d.c);
                    let all: Vec<OAtom> = c.atoms.iter().map(to_o).collect();
                    assert_eq!(bellman_ford_consistent(n as usize, &all), Feasibility::Unsat);
                    assert!(matches!(
                        bellman_ford_consistent(n as usize, &all[1..]),
                        Feasibility::Sat(_)
                    ));
                }
            }
        }
        assert!(t.matrix().is_closed());
        assert_eq!(t.matrix().to_rows(), scratch(&t));
        let m = t.extract_model();
        for e in t.committed_edges() {
            assert!(m.satisfies(&e.atom));
        }
    }
}

#[test]
fn fuzz_against_scratch_closure() {
    for seed in 0..60 {
        fuzz_sequence::<i64>(seed, 50, 8, 8);
    }
    for seed in 0..20 {
        fuzz_sequence::<i32>(seed, 100, 10, 5);
        fuzz_sequence::<i128>(seed, 100, 6, 20);
    }
}

#[test]
fn undo_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let mut t: DiffTheory<i64> = DiffTheory::new();
        for v in 1..6 {
            t.ensure_vertex(VarId(v));
        }
        for i in 0..6 {
            let x = rng.gen_range(0..6);
            let y = (x + rng.gen_range(1..6)) % 6;
            let _ = t.assert_edge(a(VarId(x), VarId(y), rng.gen_range(-3..=8)), tag(i), 1);
        }
        let m = t.matrix().clone();
        let edges = t.committed_edges().to_vec();
        for i in 0..4 {
            let x = rng.gen_range(0..6);
            let y = (x + rng.gen_range(1..6)) % 6;
            let _ = t.assert_edge(a(VarId(x), VarId(y), rng.gen_range(-3..=3)), tag(10 + i), 2);
        }
        t.backtrack_to(1);
        assert_eq!(t.matrix(), &m);
        assert_eq!(t.committed_edges(), edges.as_slice());
    }
}

/// Clone-and-refute: asserting the negation of any implied literal into a
/// copy of the state must conflict.
#[test]
fn implications_are_entailed() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut implied = 0;
    for _ in 0..200 {
        let mut t: DiffTheory<i64> = DiffTheory::new();
        let n = 5;
        for k in 0..12u32 {
            let x = rng.gen_range(0..n);
            let y = (x + rng.gen_range(1..n)) % n;
            t.register_atom(Var(k), a(VarId(x), VarId(y), rng.gen_range(-4..=4)));
        }
        for _ in 0..4 {
            let k = rng.gen_range(0..12u32);
            let lit = Var(k).lit(rng.gen());
            if t.assert_lit(lit, 1).is_err() {
                break;
            }
        }
        for (lit, handle) in t.implied_atoms() {
            implied += 1;
            let mut refute = t.clone();
            let neg = refute.atom_of(!lit).unwrap();
            assert!(refute.assert_edge(neg, tag(99), 1).is_err());
            let expl = t.explain_implied(lit, handle);
            // The explanation alone entails the literal.
            let mut fresh: DiffTheory<i64> = DiffTheory::new();
            for l in &expl {
                fresh.assert_edge(t.atom_of(*l).unwrap(), *l, 1).unwrap();
            }
            assert!(fresh.assert_edge(neg, tag(99), 1).is_err());
        }
    }
    assert!(implied > 100, "{implied}");
}

/// Every registered, unassigned atom decided by the matrix is reported.
#[test]
fn propagation_is_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let mut t: DiffTheory<i64> = DiffTheory::new();
        let mut atoms = Vec::new();
        for k in 0..10u32 {
            let x = rng.gen_range(0..4);
            let y = (x + rng.gen_range(1..4)) % 4;
            let at = a(VarId(x), VarId(y), rng.gen_range(-3..=3));
            t.register_atom(Var(k), at);
            atoms.push(at);
        }
        let mut asserted = std::collections::HashSet::new();
        for _ in 0..3 {
            let k = rng.gen_range(0..10u32);
            if t.assert_lit(Var(k).lit(true), 1).is_ok() {
                asserted.insert(k);
            }
        }
        let implied: Vec<Lit> = t.implied_atoms().into_iter().map(|p| p.0).collect();
        for (k, at) in atoms.iter().enumerate() {
            if asserted.contains(&(k as u32)) {
                continue;
            }
            for pol in [true, false] {
                let cand = if pol { *at } else { at.negated() };
                let mut refute = t.clone();
                let entailed = refute.assert_edge(cand.negated(), tag(99), 1).is_err();
                assert_eq!(entailed, implied.contains(&Var(k as u32).lit(pol)), "{cand}");
            }
        }
    }
}

proptest! {
    #[test]
    fn random_sequences_match_scratch(seed in any::<u64>()) {
        fuzz_sequence::<i64>(seed, 30, 6, 8);
    }
}
