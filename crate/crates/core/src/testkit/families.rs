//! Scalable benchmark families with verdicts known by construction, and a
//! verdict manifest writer.

use std::fmt::{self, Write as _};
use std::io;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::generate::{int_name, Renderer};
use super::oracles::{bellman_ford_consistent, Feasibility, Formula, OAtom, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// A cycle `x_i - x_{i+1} <= w_i` of total weight -1 plus satisfiable
    /// upper-bound distractors. Unsat; the cycle is the only minimal core.
    NegativeCycleChain(usize),
    /// A path of `n` variables where each step either stays below `a_i`
    /// or jumps at least `b_i`, closed by bounds on the total span that
    /// every combination of choices meets. Sat.
    DiamondGrid(usize),
    /// `n` jobs with release/deadline windows on `w` machines; jobs on one
    /// machine must not overlap. Windows are built around a planted
    /// schedule, so the instance is sat.
    WindowScheduling(usize, usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::NegativeCycleChain(n) => write!(f, "negative-cycle-chain-{n}"),
            Family::DiamondGrid(n) => write!(f, "diamond-grid-{n}"),
            Family::WindowScheduling(n, w) => write!(f, "window-scheduling-{n}-{w}"),
        }
    }
}

/// A benchmark as formulas over integer variables `1..=vars` (0 is the
/// zero variable) together with assertion names.
#[derive(Debug, Clone)]
pub struct Benchmark {
    pub family: Family,
    pub vars: usize,
    pub assertions: Vec<(String, Formula)>,
    pub verdict: Verdict,
}

fn le(x: usize, y: usize, c: i64) -> Formula {
    Formula::Le(OAtom::new(x, y, c))
}

fn ge(x: usize, y: usize, c: i64) -> Formula {
    // x - y >= c  <=>  y - x <= -c
    Formula::Le(OAtom::new(y, x, -c))
}

fn negative_cycle_chain(n: usize, rng: &mut ChaCha8Rng) -> Benchmark {
    let mut w: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
    let rest: i64 = w[..n - 1].iter().sum();
    w[n - 1] = -1 - rest;
    let mut assertions = Vec::new();
    for i in 0..n {
        let (x, y) = (i + 1, (i + 1) % n + 1);
        assertions.push((format!("c{i}"), le(x, y, w[i])));
    }
    for i in 0..n {
        assertions.push((format!("u{i}"), le(i + 1, 0, 100)));
    }
    Benchmark {
        family: Family::NegativeCycleChain(n),
        vars: n,
        assertions,
        verdict: Verdict::Unsat,
    }
}

fn diamond_grid(n: usize, rng: &mut ChaCha8Rng) -> Benchmark {
    let mut assertions = Vec::new();
    let (mut lo, mut hi) = (0i64, 0i64);
    for i in 0..n - 1 {
        let a = rng.gen_range(-3..=3);
        let b = a + rng.gen_range(1..=4);
        lo += a;
        hi += b;
        let (x, y) = (i + 2, i + 1);
        assertions.push((format!("d{i}"), Formula::Or(vec![le(x, y, a), ge(x, y, b)])));
    }
    assertions.push(("span-hi".to_string(), le(n, 1, hi)));
    assertions.push(("span-lo".to_string(), ge(n, 1, lo)));
    assertions.push(("origin".to_string(), Formula::Eq(1, 0, 0)));
    Benchmark {
        family: Family::DiamondGrid(n),
        vars: n,
        assertions,
        verdict: Verdict::Sat,
    }
}

fn window_scheduling(n: usize, machines: usize, rng: &mut ChaCha8Rng) -> Benchmark {
    let machines = machines.max(1);
    let dur: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
    let mut machine_of: Vec<usize> = (0..n).map(|i| i % machines).collect();
    machine_of.shuffle(rng);
    let mut start = vec![0i64; n];
    for m in 0..machines {
        let mut jobs: Vec<usize> = (0..n).filter(|&j| machine_of[j] == m).collect();
        jobs.shuffle(rng);
        let mut t = 0;
        for j in jobs {
            t += rng.gen_range(0..=2);
            start[j] = t;
            t += dur[j];
        }
    }
    let mut assertions = Vec::new();
    for j in 0..n {
        let release = start[j] - rng.gen_range(0..=3);
        let deadline = start[j] + dur[j] + rng.gen_range(0..=3);
        // release <= s_j and s_j + d_j <= deadline, against the zero variable.
        assertions.push((format!("r{j}"), ge(j + 1, 0, release)));
        assertions.push((format!("e{j}"), le(j + 1, 0, deadline - dur[j])));
    }
    for i in 0..n {
        for j in i + 1..n {
            if machine_of[i] != machine_of[j] {
                continue;
            }
            // s_i + d_i <= s_j  or  s_j + d_j <= s_i
            assertions.push((
                format!("m{i}-{j}"),
                Formula::Or(vec![le(i + 1, j + 1, -dur[i]), le(j + 1, i + 1, -dur[j])]),
            ));
        }
    }
    Benchmark {
        family: Family::WindowScheduling(n, machines),
        vars: n,
        assertions,
        verdict: Verdict::Sat,
    }
}

/// Deterministic per `(family, seed)`. Panics when `n < 2`.
pub fn benchmark(family: Family, seed: u64) -> Benchmark {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::NegativeCycleChain(n) => {
            assert!(n >= 2);
            negative_cycle_chain(n, &mut rng)
        }
        Family::DiamondGrid(n) => {
            assert!(n >= 2);
            diamond_grid(n, &mut rng)
        }
        Family::WindowScheduling(n, w) => {
            assert!(n >= 2);
            window_scheduling(n, w, &mut rng)
        }
    }
}

impl Benchmark {
    pub fn formulas(&self) -> Vec<Formula> {
        self.assertions.iter().map(|(_, f)| f.clone()).collect()
    }

    /// SMT-LIB script ending in `(check-sat)`.
    pub fn to_smtlib(&self, seed: u64) -> String {
        let mut r = Renderer::new(seed);
        let mut out = String::new();
        let _ = writeln!(out, "(set-info :smt-lib-version 2.6)");
        let _ = writeln!(out, "(set-info :source |{}|)", self.family);
        let _ = writeln!(out, "(set-info :status {})", self.verdict.as_str());
        out.push_str("(set-logic QF_IDL)\n");
        for i in 1..=self.vars {
            let _ = writeln!(out, "(declare-fun {} () Int)", int_name(i));
        }
        for (name, f) in &self.assertions {
            let _ = writeln!(out, "(assert (! {} :named {name}))", r.term(f));
        }
        out.push_str("(check-sat)\n(exit)\n");
        out
    }
}

/// Renders `family` with `seed`.
pub fn emit_benchmark(family: Family, seed: u64) -> String {
    benchmark(family, seed).to_smtlib(seed)
}

/// Verdict of a formula list whose non-unit assertions are binary
/// disjunctions of atoms, by trying every choice of disjunct and checking
/// each resulting conjunction with Bellman–Ford. Returns `None` for other
/// shapes or more than `max_choices` disjunctions.
pub fn disjunct_choice_oracle(vars: usize, formulas: &[Formula], max_choices: usize) -> Option<Verdict> {
    let mut units = Vec::new();
    let mut choices: Vec<[OAtom; 2]> = Vec::new();
    for f in formulas {
        match f {
            Formula::Le(a) => units.push(*a),
            Formula::Eq(x, y, c) => {
                units.push(OAtom::new(*x, *y, *c));
                units.push(OAtom::new(*y, *x, -*c));
            }
            Formula::Or(v) => match v.as_slice() {
                [Formula::Le(a), Formula::Le(b)] => choices.push([*a, *b]),
                _ => return None,
            },
            _ => return None,
        }
    }
    if choices.len() > max_choices {
        return None;
    }
    let mut atoms = Vec::with_capacity(units.len() + choices.len());
    for mask in 0u64..(1u64 << choices.len()) {
        atoms.clear();
        atoms.extend_from_slice(&units);
        for (i, c) in choices.iter().enumerate() {
            atoms.push(c[(mask >> i & 1) as usize]);
        }
        if let Feasibility::Sat(_) = bellman_ford_consistent(vars + 1, &atoms) {
            return Some(Verdict::Sat);
        }
    }
    Some(Verdict::Unsat)
}

/// Writes each benchmark as `<dir>/<family>.smt2` plus `<dir>/manifest.tsv`
/// with one `path<TAB>verdict` line per instance. Returns the manifest text.
pub fn write_suite(dir: &Path, families: &[Family], seed: u64) -> io::Result<String> {
    std::fs::create_dir_all(dir)?;
    let mut manifest = String::new();
    for &fam in families {
        let b = benchmark(fam, seed);
        let path = dir.join(format!("{fam}.smt2"));
        std::fs::write(&path, b.to_smtlib(seed))?;
        let _ = writeln!(manifest, "{}\t{}", path.display(), b.verdict.as_str());
    }
    std::fs::write(dir.join("manifest.tsv"), &manifest)?;
    Ok(manifest)
}

/// Parses manifest text into `(path, verdict)` pairs.
pub fn parse_manifest(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .filter_map(|l| {
            let (p, v) = l.split_once('\t')?;
            Some((p.to_string(), v.trim().to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smtlib::parse_script;
    use crate::testkit::oracles::enumerate_oracle;

    #[test]
    fn chain_is_unsat_and_every_proper_subset_is_sat() {
        for n in 3..=8 {
            let b = benchmark(Family::NegativeCycleChain(n), 7);
            let f = b.formulas();
            assert_eq!(enumerate_oracle(&f), Ok(Verdict::Unsat));
            for drop in 0..n {
                let rest: Vec<Formula> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, g)| g.clone())
                    .collect();
                assert_eq!(enumerate_oracle(&rest), Ok(Verdict::Sat));
            }
        }
    }

    #[test]
    fn diamond_grid_is_sat() {
        for n in [2, 4, 8] {
            let b = benchmark(Family::DiamondGrid(n), 1);
            assert_eq!(disjunct_choice_oracle(n, &b.formulas(), 16), Some(Verdict::Sat));
        }
        let b = benchmark(Family::DiamondGrid(4), 3);
        assert_eq!(enumerate_oracle(&b.formulas()), Ok(Verdict::Sat));
    }

    #[test]
    fn window_scheduling_verdicts() {
        let b = benchmark(Family::WindowScheduling(5, 2), 0);
        assert_eq!(enumerate_oracle(&b.formulas()), Ok(b.verdict));
        for seed in 0..20 {
            for (n, w) in [(4, 1), (6, 2), (7, 3)] {
                let b = benchmark(Family::WindowScheduling(n, w), seed);
                assert_eq!(disjunct_choice_oracle(n, &b.formulas(), 16), Some(b.verdict));
            }
        }
    }

    #[test]
    fn emitted_text_parses_and_is_deterministic() {
        for fam in [
            Family::NegativeCycleChain(5),
            Family::DiamondGrid(10),
            Family::WindowScheduling(6, 2),
        ] {
            let t = emit_benchmark(fam, 3);
            assert_eq!(t, emit_benchmark(fam, 3));
            parse_script(&t).unwrap();
        }
    }

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let text = write_suite(dir.path(), &[Family::NegativeCycleChain(3), Family::DiamondGrid(4)], 0).unwrap();
        let rows = parse_manifest(&text);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].1, "unsat");
        assert_eq!(rows[1].1, "sat");
        assert!(Path::new(&rows[0].0).exists());
    }
}
