//! Seeded random instances and push/pop scripts, rendered to SMT-LIB with
//! varied surface syntax.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracles::{Formula, OAtom};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    /// Each assertion is a single leaf.
    Conjunction,
    /// `clauses` assertions, each a disjunction of `k` leaves.
    Cnf { k: usize, clauses: usize },
    /// A few assertions, each a random connective tree.
    RandomTree { depth: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomInstanceSpec {
    /// Integer variables, not counting the zero variable.
    pub vars: usize,
    /// Upper bound on distinct atoms after expanding `=` and `distinct`.
    pub atoms: usize,
    pub lo: i64,
    pub hi: i64,
    pub bools: usize,
    pub structure: Structure,
    pub seed: u64,
}

impl RandomInstanceSpec {
    pub fn small(seed: u64) -> RandomInstanceSpec {
        RandomInstanceSpec {
            vars: 4,
            atoms: 8,
            lo: -5,
            hi: 5,
            bools: 1,
            structure: Structure::Cnf { k: 2, clauses: 5 },
            seed,
        }
    }
}

/// A generated problem: one formula per assertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub vars: usize,
    pub bools: usize,
    pub assertions: Vec<Formula>,
}

/// Fixed set of leaves whose expansion stays within an atom budget.
fn leaf_pool(rng: &mut ChaCha8Rng, spec: &RandomInstanceSpec) -> Vec<Formula> {
    let mut pool = Vec::new();
    let mut used = 0;
    let mut attempts = 0;
    while used < spec.atoms && attempts < 1000 {
        attempts += 1;
        let x = rng.gen_range(0..=spec.vars);
        let y = (x + rng.gen_range(1..=spec.vars)) % (spec.vars + 1);
        let c = rng.gen_range(spec.lo..=spec.hi);
        let (leaf, cost) = match rng.gen_range(0..10) {
            0 => (Formula::Eq(x, y, c), 2),
            1 => (Formula::Distinct(x, y, c), 2),
            _ => (Formula::Le(OAtom::new(x, y, c)), 1),
        };
        if used + cost > spec.atoms || pool.contains(&leaf) {
            continue;
        }
        // Parallel leaves over one pair share atoms when constants differ by
        // one; count conservatively so the budget is a hard bound.
        used += cost;
        pool.push(leaf);
    }
    pool
}

fn pick_leaf(rng: &mut ChaCha8Rng, pool: &[Formula], bools: usize) -> Formula {
    let f = if bools > 0 && rng.gen_bool(0.15) {
        Formula::Bool(rng.gen_range(0..bools))
    } else {
        pool.choose(rng).cloned().unwrap_or(Formula::Const(true))
    };
    if rng.gen_bool(0.3) {
        Formula::Not(Box::new(f))
    } else {
        f
    }
}

fn random_tree(rng: &mut ChaCha8Rng, pool: &[Formula], bools: usize, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return pick_leaf(rng, pool, bools);
    }
    let sub = |rng: &mut ChaCha8Rng| random_tree(rng, pool, bools, depth - 1);
    match rng.gen_range(0..7) {
        0 => Formula::Not(Box::new(sub(rng))),
        1 | 2 => {
            let n = rng.gen_range(2..=3);
            Formula::And((0..n).map(|_| sub(rng)).collect())
        }
        3 | 4 => {
            let n = rng.gen_range(2..=3);
            Formula::Or((0..n).map(|_| sub(rng)).collect())
        }
        5 => {
            if rng.gen_bool(0.5) {
                Formula::Xor(Box::new(sub(rng)), Box::new(sub(rng)))
            } else {
                Formula::Implies(Box::new(sub(rng)), Box::new(sub(rng)))
            }
        }
        _ => Formula::Ite(Box::new(sub(rng)), Box::new(sub(rng)), Box::new(sub(rng))),
    }
}

/// Deterministic per `spec.seed`.
pub fn generate(spec: &RandomInstanceSpec) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pool = leaf_pool(&mut rng, spec);
    let assertions = match spec.structure {
        Structure::Conjunction => pool.clone(),
        Structure::Cnf { k, clauses } => (0..clauses)
            .map(|_| {
                let lits: Vec<Formula> = (0..k).map(|_| pick_leaf(&mut rng, &pool, spec.bools)).collect();
                if lits.len() == 1 {
                    lits.into_iter().next().unwrap()
                } else {
                    Formula::Or(lits)
                }
            })
            .collect(),
        Structure::RandomTree { depth } => {
            let n = rng.gen_range(1..=3);
            (0..n)
                .map(|_| random_tree(&mut rng, &pool, spec.bools, depth))
                .collect()
        }
    };
    Instance {
        vars: spec.vars,
        bools: spec.bools,
        assertions,
    }
}

/// Random instance parameters for verdict-agreement testing, within the enumeration budget.
pub fn random_spec(rng: &mut impl Rng) -> RandomInstanceSpec {
    let structure = match rng.gen_range(0..3) {
        0 => Structure::Conjunction,
        1 => Structure::Cnf {
            k: rng.gen_range(1..=3),
            clauses: rng.gen_range(1..=8),
        },
        _ => Structure::RandomTree {
            depth: rng.gen_range(1..=4),
        },
    };
    let hi = rng.gen_range(1..=8);
    RandomInstanceSpec {
        vars: rng.gen_range(1..=5),
        atoms: rng.gen_range(1..=12),
        lo: -hi,
        hi,
        bools: rng.gen_range(0..=2),
        structure,
        seed: rng.gen(),
    }
}

pub fn int_name(i: usize) -> String {
    format!("x{i}")
}

pub fn bool_name(i: usize) -> String {
    format!("p{i}")
}

fn constant(c: i64) -> String {
    if c < 0 {
        format!("(- {})", c.unsigned_abs())
    } else {
        c.to_string()
    }
}

/// The term `v[x] - v[y]` with the zero variable elided.
fn difference(x: usize, y: usize) -> String {
    match (x, y) {
        (0, 0) => "0".to_string(),
        (x, 0) => int_name(x),
        (0, y) => format!("(- {})", int_name(y)),
        (x, y) => format!("(- {} {})", int_name(x), int_name(y)),
    }
}

/// Renders formulas as SMT-LIB terms, choosing among equivalent spellings.
pub struct Renderer {
    rng: ChaCha8Rng,
}

impl Renderer {
    pub fn new(seed: u64) -> Renderer {
        Renderer {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn le(&mut self, a: &OAtom) -> String {
        let d = difference(a.x, a.y);
        let both = a.x != 0 && a.y != 0;
        match self.rng.gen_range(0..8) {
            0 => format!("(< {d} {})", constant(a.c + 1)),
            1 => format!("(>= {} {d})", constant(a.c)),
            2 => format!("(not (> {d} {}))", constant(a.c)),
            3 if both => format!("(<= {} (+ {} {}))", int_name(a.x), int_name(a.y), constant(a.c)),
            4 if both => format!("(>= {} (- {} {}))", int_name(a.y), int_name(a.x), constant(a.c)),
            5 => format!("(let ((d {d})) (<= d {}))", constant(a.c)),
            6 => format!("(>= (- {d}) (- {}))", constant(a.c)),
            _ => format!("(<= {d} {})", constant(a.c)),
        }
    }

    pub fn term(&mut self, f: &Formula) -> String {
        match f {
            Formula::Const(b) => b.to_string(),
            Formula::Le(a) => self.le(a),
            Formula::Eq(x, y, c) => {
                let d = difference(*x, *y);
                match self.rng.gen_range(0..4) {
                    0 => format!("(= {} {d})", constant(*c)),
                    1 => format!("(and (<= {d} {c}) (>= {d} {c}))", c = constant(*c)),
                    2 if *x != 0 && *y != 0 => {
                        format!("(= {} (+ {} {}))", int_name(*x), int_name(*y), constant(*c))
                    }
                    _ => format!("(= {d} {})", constant(*c)),
                }
            }
            Formula::Distinct(x, y, c) => {
                let d = difference(*x, *y);
                if self.rng.gen_bool(0.5) {
                    format!("(distinct {d} {})", constant(*c))
                } else {
                    format!("(not (= {d} {}))", constant(*c))
                }
            }
            Formula::Bool(b) => bool_name(*b),
            Formula::Not(a) => format!("(not {})", self.term(a)),
            Formula::And(v) => self.nary("and", v),
            Formula::Or(v) => self.nary("or", v),
            Formula::Xor(a, b) => format!("(xor {} {})", self.term(a), self.term(b)),
            Formula::Implies(a, b) => format!("(=> {} {})", self.term(a), self.term(b)),
            Formula::Ite(c, t, e) => format!("(ite {} {} {})", self.term(c), self.term(t), self.term(e)),
        }
    }

    fn nary(&mut self, op: &str, v: &[Formula]) -> String {
        if v.is_empty() {
            return (op == "and").to_string();
        }
        let parts: Vec<String> = v.iter().map(|f| self.term(f)).collect();
        format!("({op} {})", parts.join(" "))
    }
}

/// Preamble declaring `x1..=x{vars}` and `p0..p{bools}`.
pub fn declarations(vars: usize, bools: usize) -> String {
    let mut out = String::from("(set-logic QF_IDL)\n");
    for i in 1..=vars {
        let _ = writeln!(out, "(declare-fun {} () Int)", int_name(i));
    }
    for i in 0..bools {
        let _ = writeln!(out, "(declare-const {} Bool)", bool_name(i));
    }
    out
}

pub fn assertion_name(i: usize) -> String {
    format!("a{i}")
}

/// Batch script with every assertion named `a{i}`, followed by
/// `(check-sat)` and, when asked, `(get-model)` or `(get-unsat-core)`.
pub fn render_instance(inst: &Instance, seed: u64, tail: &[&str]) -> String {
    let mut r = Renderer::new(seed);
    let mut out = String::from("(set-option :produce-models true)\n");
    out.push_str(&declarations(inst.vars, inst.bools));
    for (i, f) in inst.assertions.iter().enumerate() {
        let _ = writeln!(out, "(assert (! {} :named {}))", r.term(f), assertion_name(i));
    }
    out.push_str("(check-sat)\n");
    for t in tail {
        out.push_str(t);
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptStep {
    Assert(usize),
    Push,
    Pop,
    CheckSat,
}

/// A push/pop script over a shared pool of formulas. `formulas[i]` is
/// asserted under the name `a{i}`; re-asserting a popped formula reuses its
/// name.
#[derive(Debug, Clone)]
pub struct PushPopScript {
    pub vars: usize,
    pub bools: usize,
    pub formulas: Vec<Formula>,
    pub steps: Vec<ScriptStep>,
}

impl PushPopScript {
    /// Active assertion indices at each `(check-sat)`, in order.
    pub fn active_sets(&self) -> Vec<Vec<usize>> {
        let mut frames: Vec<Vec<usize>> = vec![Vec::new()];
        let mut out = Vec::new();
        for s in &self.steps {
            match s {
                ScriptStep::Assert(i) => frames.last_mut().unwrap().push(*i),
                ScriptStep::Push => frames.push(Vec::new()),
                ScriptStep::Pop => {
                    frames.pop();
                }
                ScriptStep::CheckSat => out.push(frames.concat()),
            }
        }
        out
    }

    pub fn render(&self, seed: u64) -> String {
        let mut r = Renderer::new(seed);
        let mut out = declarations(self.vars, self.bools);
        for s in &self.steps {
            match s {
                ScriptStep::Assert(i) => {
                    let _ = writeln!(
                        out,
                        "(assert (! {} :named {}))",
                        r.term(&self.formulas[*i]),
                        assertion_name(*i)
                    );
                }
                ScriptStep::Push => out.push_str("(push 1)\n"),
                ScriptStep::Pop => out.push_str("(pop 1)\n"),
                ScriptStep::CheckSat => out.push_str("(check-sat)\n"),
            }
        }
        out
    }
}

/// Random push/pop script with at most `max_checks` check-sats. The formula
/// pool is drawn from a single leaf pool of at most 12 atoms, so every
/// active set stays within the enumeration budget.
pub fn random_push_pop_script(seed: u64, max_checks: usize) -> PushPopScript {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = RandomInstanceSpec {
        vars: rng.gen_range(2..=4),
        atoms: rng.gen_range(4..=12),
        lo: -4,
        hi: 4,
        bools: rng.gen_range(0..=1),
        structure: Structure::RandomTree { depth: 2 },
        seed: rng.gen(),
    };
    let pool = leaf_pool(&mut rng, &spec);
    let formulas: Vec<Formula> = (0..rng.gen_range(3..=8))
        .map(|_| {
            if rng.gen_bool(0.5) {
                pick_leaf(&mut rng, &pool, spec.bools)
            } else {
                random_tree(&mut rng, &pool, spec.bools, 2)
            }
        })
        .collect();
    let mut steps = Vec::new();
    let mut depth = 0usize;
    let mut checks = 0;
    let mut live: Vec<Vec<usize>> = vec![Vec::new()];
    while checks < max_checks {
        match rng.gen_range(0..10) {
            0..=3 => {
                // Names must be unique among live assertions.
                let taken: Vec<usize> = live.concat();
                let free: Vec<usize> = (0..formulas.len()).filter(|i| !taken.contains(i)).collect();
                if let Some(&i) = free.choose(&mut rng) {
                    steps.push(ScriptStep::Assert(i));
                    live.last_mut().unwrap().push(i);
                }
            }
            4 | 5 => {
                steps.push(ScriptStep::Push);
                live.push(Vec::new());
                depth += 1;
            }
            6 | 7 if depth > 0 => {
                steps.push(ScriptStep::Pop);
                live.pop();
                depth -= 1;
            }
            _ => {
                steps.push(ScriptStep::CheckSat);
                checks += 1;
            }
        }
    }
    PushPopScript {
        vars: spec.vars,
        bools: spec.bools,
        formulas,
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smtlib::parse_script;
    use crate::testkit::oracles::enumerate_oracle;

    #[test]
    fn generation_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let spec = random_spec(&mut rng);
            assert_eq!(generate(&spec), generate(&spec));
            let inst = generate(&spec);
            assert_eq!(render_instance(&inst, 4, &[]), render_instance(&inst, 4, &[]));
        }
    }

    #[test]
    fn generated_instances_fit_the_budget_and_parse() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let spec = random_spec(&mut rng);
            let inst = generate(&spec);
            assert!(enumerate_oracle(&inst.assertions).is_ok());
            let text = render_instance(&inst, spec.seed, &["(get-model)"]);
            parse_script(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        }
    }

    #[test]
    fn push_pop_scripts_parse() {
        for seed in 0..100 {
            let s = random_push_pop_script(seed, 5);
            assert_eq!(s.active_sets().len(), 5);
            for set in s.active_sets() {
                let f: Vec<Formula> = set.iter().map(|&i| s.formulas[i].clone()).collect();
                assert!(enumerate_oracle(&f).is_ok());
            }
            let text = s.render(seed);
            parse_script(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        }
    }

    #[test]
    fn renderer_variants_are_equivalent() {
        // Each spelling of a leaf evaluates like the leaf itself.
        use crate::smtlib::{ScriptCommand, Term, Valuation};
        use num_bigint::BigInt;
        struct V(Vec<i64>);
        impl Valuation for V {
            fn int_value(&self, name: &str) -> BigInt {
                BigInt::from(self.0[name[1..].parse::<usize>().unwrap()])
            }
            fn bool_value(&self, _: &str) -> bool {
                false
            }
        }
        let leaves = [
            Formula::Le(OAtom::new(1, 2, -2)),
            Formula::Le(OAtom::new(0, 1, 3)),
            Formula::Le(OAtom::new(2, 0, 0)),
            Formula::Eq(1, 2, 1),
            Formula::Eq(0, 2, -1),
            Formula::Distinct(2, 1, 0),
        ];
        let mut r = Renderer::new(0);
        for f in &leaves {
            for _ in 0..12 {
                let text = format!("{}(assert {})", declarations(2, 0), r.term(f));
                let cmds = parse_script(&text).unwrap();
                let ScriptCommand::Assert { term, .. } = cmds.last().unwrap() else {
                    panic!()
                };
                let term: &Term = term;
                for x in -3..=3 {
                    for y in -3..=3 {
                        let v = V(vec![0, x, y]);
                        assert_eq!(term.eval_bool(&v), f.eval(&[0, x as i128, y as i128], &[]), "{text}");
                    }
                }
            }
        }
    }
}
