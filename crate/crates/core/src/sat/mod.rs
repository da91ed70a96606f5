//! CDCL SAT solver: two-watched-literal propagation, first-UIP learning,
//! activity-based branching with phase saving, Luby restarts and solving
//! under assumptions. A [`Theory`] is consulted through callbacks, which
//! turns the solver into the Boolean half of a DPLL(T) loop.

mod heap;

use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lit::{Clause, LBool, Lit, Var};
use heap::VarHeap;

/// Callback seam between the SAT core and a theory solver.
///
/// Literals are forwarded in trail order; every conflict and explanation is
/// expressed as a set of literals that are currently true.
pub trait Theory {
    /// A literal was assigned at `level`. On inconsistency, returns true
    /// literals whose conjunction the theory refutes.
    fn assert_lit(&mut self, lit: Lit, level: u32) -> Result<(), Vec<Lit>>;

    /// Unassigned literals implied by the asserted ones, each with a handle
    /// for [`Theory::explain`].
    fn propagate(&mut self, out: &mut Vec<(Lit, u32)>);

    /// True literals, assigned before `lit`, that imply `lit`.
    fn explain(&mut self, lit: Lit, handle: u32) -> Vec<Lit>;

    /// Undo everything asserted above `level`.
    fn backtrack(&mut self, level: u32);

    fn final_check(&mut self) -> Result<(), Vec<Lit>> {
        Ok(())
    }

    /// Called on a full consistent assignment before the solver backtracks.
    fn on_model(&mut self) {}
}

/// Pure propositional solving.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoTheory;

impl Theory for NoTheory {
    fn assert_lit(&mut self, _: Lit, _: u32) -> Result<(), Vec<Lit>> {
        Ok(())
    }
    fn propagate(&mut self, _: &mut Vec<(Lit, u32)>) {}
    fn explain(&mut self, _: Lit, _: u32) -> Vec<Lit> {
        unreachable!("no theory propagations were made")
    }
    fn backtrack(&mut self, _: u32) {}
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    /// Level-0 fact or unassigned.
    None,
    Decision,
    Clause(u32),
    Theory(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownReason {
    ConflictBudget,
    Timeout,
    Cancelled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverResult {
    /// Value of every variable.
    Sat(Vec<bool>),
    /// Subset of the assumptions that is inconsistent with the clauses.
    Unsat(Vec<Lit>),
    Unknown(UnknownReason),
}

/// Signalled when a clause is inconsistent with the level-0 assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopLevelConflict;

#[derive(Debug, Clone, Default)]
pub struct SearchLimits {
    pub conflicts: Option<u64>,
    pub deadline: Option<Instant>,
    pub cancel: Option<Arc<AtomicBool>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SatStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learned: u64,
    pub theory_conflicts: u64,
    pub theory_propagations: u64,
}

/// A conflict: every literal is false under the current assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conflict {
    Clause(u32),
    Lits(Vec<Lit>),
}

#[derive(Debug, Clone)]
struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;
const RESTART_BASE: f64 = 64.0;
const LEARNT_LIMIT: usize = 50_000;

enum Search {
    Restart,
    Done(SolverResult),
}

/// Element `x` of the Luby sequence scaled by powers of `y`.
pub fn luby(y: f64, mut x: u64) -> f64 {
    let mut size = 1u64;
    let mut seq = 0i32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

#[derive(Debug, Clone)]
pub struct Solver {
    ok: bool,
    clauses: Vec<ClauseData>,
    num_learnts: usize,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<LBool>,
    level: Vec<u32>,
    reason: Vec<Reason>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    th_head: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    order: VarHeap,
    polarity: Vec<bool>,
    seen: Vec<bool>,
    rng: Option<ChaCha8Rng>,
    learnt_log: Option<Vec<Vec<Lit>>>,
    theory_buf: Vec<(Lit, u32)>,
    stats: SatStats,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(0)
    }
}

impl Solver {
    /// A non-zero `seed` perturbs the initial variable order; seed 0 keeps
    /// the plain lowest-index-first order.
    pub fn new(seed: u64) -> Solver {
        Solver {
            ok: true,
            clauses: Vec::new(),
            num_learnts: 0,
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            th_head: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            order: VarHeap::default(),
            polarity: Vec::new(),
            seen: Vec::new(),
            rng: (seed != 0).then(|| ChaCha8Rng::seed_from_u64(seed)),
            learnt_log: None,
            theory_buf: Vec::new(),
            stats: SatStats::default(),
        }
    }

    pub fn new_var(&mut self) -> Var {
        let v = Var(self.assigns.len() as u32);
        self.assigns.push(LBool::Undef);
        self.level.push(0);
        self.reason.push(Reason::None);
        self.polarity.push(false);
        self.seen.push(false);
        let act = self.rng.as_mut().map_or(0.0, |r| r.gen::<f64>() * 1e-5);
        self.activity.push(act);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.order.insert(v, &self.activity);
        v
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn stats(&self) -> SatStats {
        self.stats
    }

    /// False once the clause set is known to be unsatisfiable regardless of
    /// assumptions.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    pub fn trail(&self) -> &[Lit] {
        &self.trail
    }

    pub fn level_of(&self, v: Var) -> u32 {
        self.level[v.index()]
    }

    /// Starts recording every learned clause, for determinism checks.
    pub fn record_learnts(&mut self) {
        self.learnt_log.get_or_insert_with(Vec::new);
    }

    pub fn learnt_log(&self) -> &[Vec<Lit>] {
        self.learnt_log.as_deref().unwrap_or(&[])
    }

    /// Currently stored learned clauses.
    pub fn learnt_clauses(&self) -> impl Iterator<Item = &[Lit]> {
        self.clauses
            .iter()
            .filter(|c| c.learnt && !c.deleted)
            .map(|c| c.lits.as_slice())
    }

    #[inline]
    pub fn value(&self, lit: Lit) -> LBool {
        match self.assigns[lit.var().index()] {
            LBool::Undef => LBool::Undef,
            LBool::True => LBool::from_bool(lit.is_positive()),
            LBool::False => LBool::from_bool(lit.is_negative()),
        }
    }

    fn enqueue(&mut self, lit: Lit, reason: Reason) {
        let v = lit.var().index();
        debug_assert_eq!(self.assigns[v], LBool::Undef);
        self.assigns[v] = LBool::from_bool(lit.is_positive());
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn new_decision_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[lits[0].code()].push(Watcher { cref, blocker: lits[1] });
        self.watches[lits[1].code()].push(Watcher { cref, blocker: lits[0] });
        self.clauses.push(ClauseData {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        if learnt {
            self.num_learnts += 1;
        }
        cref
    }

    /// Adds a problem clause. Must be called at decision level 0.
    pub fn add_clause(&mut self, clause: Clause) -> Result<(), TopLevelConflict> {
        assert_eq!(self.decision_level(), 0, "clauses are added at the root");
        if !self.ok {
            return Err(TopLevelConflict);
        }
        let mut lits = Vec::with_capacity(clause.len());
        for &l in clause.lits() {
            match self.value(l) {
                LBool::True => return Ok(()),
                LBool::False => {}
                LBool::Undef => lits.push(l),
            }
        }
        match lits.len() {
            0 => {
                self.ok = false;
                Err(TopLevelConflict)
            }
            1 => {
                self.enqueue(lits[0], Reason::None);
                if self.propagate().is_some() {
                    self.ok = false;
                    return Err(TopLevelConflict);
                }
                Ok(())
            }
            _ => {
                self.attach(lits, false);
                Ok(())
            }
        }
    }

    /// Opens a new decision level and assigns `lit` (used by tests and
    /// tools that drive the solver by hand).
    pub fn decide(&mut self, lit: Lit) {
        self.new_decision_level();
        self.enqueue(lit, Reason::Decision);
    }

    /// Exhaustive Boolean unit propagation. Returns the conflicting clause.
    pub fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == LBool::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                if self.clauses[cref].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == LBool::True {
                    ws[j] = Watcher {
                        cref: w.cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != LBool::False {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[l.code()].push(Watcher {
                            cref: w.cref,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = w;
                j += 1;
                if self.value(first) == LBool::False {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Reason::Clause(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    /// Boolean propagation interleaved with theory assertion and theory
    /// propagation, until a joint fixpoint or a conflict.
    fn propagate_all(&mut self, theory: &mut dyn Theory) -> Option<Conflict> {
        loop {
            if let Some(c) = self.propagate() {
                return Some(Conflict::Clause(c));
            }
            let level = self.decision_level();
            while self.th_head < self.trail.len() {
                let lit = self.trail[self.th_head];
                self.th_head += 1;
                if let Err(expl) = theory.assert_lit(lit, level) {
                    self.stats.theory_conflicts += 1;
                    return Some(Conflict::Lits(expl.into_iter().map(|l| !l).collect()));
                }
            }
            let mut buf = std::mem::take(&mut self.theory_buf);
            buf.clear();
            theory.propagate(&mut buf);
            let mut progressed = false;
            for &(lit, handle) in &buf {
                match self.value(lit) {
                    LBool::Undef => {
                        self.enqueue(lit, Reason::Theory(handle));
                        self.stats.theory_propagations += 1;
                        progressed = true;
                    }
                    LBool::True => {}
                    LBool::False => debug_assert!(false, "theory implied a false literal"),
                }
            }
            self.theory_buf = buf;
            if !progressed {
                return None;
            }
        }
    }

    fn cancel_until(&mut self, level: u32, theory: &mut dyn Theory) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = lit.var();
            self.assigns[v.index()] = LBool::Undef;
            self.reason[v.index()] = Reason::None;
            self.polarity[v.index()] = lit.is_positive();
            self.order.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
        self.th_head = self.th_head.min(self.trail.len());
        theory.backtrack(level);
    }

    /// The literals of `p`'s reason clause other than `p` (all false).
    fn reason_lits(&mut self, p: Lit, theory: &mut dyn Theory) -> Vec<Lit> {
        match self.reason[p.var().index()] {
            Reason::Clause(c) => {
                if self.clauses[c as usize].learnt {
                    self.bump_clause(c);
                }
                self.clauses[c as usize]
                    .lits
                    .iter()
                    .copied()
                    .filter(|l| l.var() != p.var())
                    .collect()
            }
            Reason::Theory(h) => theory.explain(p, h).into_iter().map(|l| !l).collect(),
            Reason::None | Reason::Decision => Vec::new(),
        }
    }

    fn bump_var(&mut self, v: Var) {
        self.activity[v.index()] += self.var_inc;
        if self.activity[v.index()] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, c: u32) {
        let c = c as usize;
        self.clauses[c].activity += self.cla_inc;
        if self.clauses[c].activity > 1e20 {
            for cl in self.clauses.iter_mut().filter(|c| c.learnt) {
                cl.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. `conflict` must have at least one
    /// literal at the current decision level. Returns the learned clause,
    /// asserting literal first, and the backjump level.
    pub fn analyze_conflict(&mut self, conflict: &Conflict, theory: &mut dyn Theory) -> (Vec<Lit>, u32) {
        let mut lits = match conflict {
            Conflict::Clause(c) => {
                if self.clauses[*c as usize].learnt {
                    self.bump_clause(*c);
                }
                self.clauses[*c as usize].lits.clone()
            }
            Conflict::Lits(v) => v.clone(),
        };
        let dl = self.decision_level();
        let mut learnt = vec![Lit::new(Var(0), true)];
        let mut path = 0usize;
        let mut index = self.trail.len();
        let p = loop {
            for &q in &lits {
                let v = q.var();
                if !self.seen[v.index()] && self.level[v.index()] > 0 {
                    self.bump_var(v);
                    self.seen[v.index()] = true;
                    if self.level[v.index()] >= dl {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let p = self.trail[index];
            self.seen[p.var().index()] = false;
            path -= 1;
            if path == 0 {
                break p;
            }
            lits = self.reason_lits(p, theory);
        };
        learnt[0] = !p;
        for l in &learnt[1..] {
            self.seen[l.var().index()] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var().index()] > self.level[learnt[max_i].var().index()] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[learnt[1].var().index()];
        }
        (learnt, bt)
    }

    /// Returns the subset of assumptions responsible for `p` being true,
    /// where `!p` is an assumption.
    fn analyze_final(&mut self, p: Lit, theory: &mut dyn Theory) -> Vec<Lit> {
        let mut out = vec![!p];
        if self.decision_level() == 0 {
            return out;
        }
        self.seen[p.var().index()] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let x = self.trail[i];
            let v = x.var().index();
            if !self.seen[v] {
                continue;
            }
            if self.reason[v] == Reason::Decision {
                out.push(x);
            } else {
                for q in self.reason_lits(x, theory) {
                    if self.level[q.var().index()] > 0 {
                        self.seen[q.var().index()] = true;
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[p.var().index()] = false;
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Learns from `conflict` and backjumps. Returns false when the
    /// conflict holds at level 0.
    fn resolve_conflict(&mut self, conflict: Conflict, theory: &mut dyn Theory) -> bool {
        self.stats.conflicts += 1;
        let max_level = match &conflict {
            Conflict::Clause(c) => self.clauses[*c as usize].lits.iter(),
            Conflict::Lits(v) => v.iter(),
        }
        .map(|l| self.level[l.var().index()])
        .max()
        .unwrap_or(0);
        if max_level == 0 {
            self.ok = false;
            return false;
        }
        if max_level < self.decision_level() {
            self.cancel_until(max_level, theory);
        }
        let (learnt, bt) = self.analyze_conflict(&conflict, theory);
        self.cancel_until(bt, theory);
        self.stats.learned += 1;
        if let Some(log) = self.learnt_log.as_mut() {
            log.push(learnt.clone());
        }
        let asserting = learnt[0];
        if learnt.len() == 1 {
            self.enqueue(asserting, Reason::None);
        } else {
            let cref = self.attach(learnt, true);
            self.bump_clause(cref);
            self.enqueue(asserting, Reason::Clause(cref));
        }
        self.var_inc /= VAR_DECAY;
        self.cla_inc /= CLAUSE_DECAY;
        true
    }

    fn locked(&self, cref: usize) -> bool {
        let l0 = self.clauses[cref].lits[0];
        self.value(l0) == LBool::True && self.reason[l0.var().index()] == Reason::Clause(cref as u32)
    }

    /// Deletes the less active half of the learned clauses.
    fn reduce_db(&mut self) {
        let mut cands: Vec<usize> = (0..self.clauses.len())
            .filter(|&i| {
                let c = &self.clauses[i];
                c.learnt && !c.deleted && c.lits.len() > 2 && !self.locked(i)
            })
            .collect();
        cands.sort_by(|&a, &b| {
            self.clauses[a]
                .activity
                .total_cmp(&self.clauses[b].activity)
                .then(a.cmp(&b))
        });
        for &i in &cands[..cands.len() / 2] {
            self.clauses[i].deleted = true;
            self.clauses[i].lits = Vec::new();
            self.num_learnts -= 1;
        }
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.order.pop(&self.activity) {
            if self.assigns[v.index()] == LBool::Undef {
                return Some(v.lit(self.polarity[v.index()]));
            }
        }
        None
    }

    fn limit_hit(&self, limits: &SearchLimits, start_conflicts: u64) -> Option<UnknownReason> {
        if let Some(c) = &limits.cancel {
            if c.load(Ordering::Relaxed) {
                return Some(UnknownReason::Cancelled);
            }
        }
        if let Some(max) = limits.conflicts {
            if self.stats.conflicts - start_conflicts >= max {
                return Some(UnknownReason::ConflictBudget);
            }
        }
        if let Some(d) = limits.deadline {
            if Instant::now() >= d {
                return Some(UnknownReason::Timeout);
            }
        }
        None
    }

    fn search(
        &mut self,
        theory: &mut dyn Theory,
        assumptions: &[Lit],
        restart_after: u64,
        limits: &SearchLimits,
        start_conflicts: u64,
    ) -> Search {
        let mut conflicts_here = 0u64;
        loop {
            if let Some(conflict) = self.propagate_all(theory) {
                if !self.resolve_conflict(conflict, theory) {
                    return Search::Done(SolverResult::Unsat(Vec::new()));
                }
                conflicts_here += 1;
                if let Some(why) = self.limit_hit(limits, start_conflicts) {
                    return Search::Done(SolverResult::Unknown(why));
                }
                continue;
            }
            if conflicts_here >= restart_after {
                self.cancel_until(0, theory);
                return Search::Restart;
            }
            if self.num_learnts >= LEARNT_LIMIT {
                self.reduce_db();
            }
            let mut next = None;
            while (self.decision_level() as usize) < assumptions.len() {
                let a = assumptions[self.decision_level() as usize];
                match self.value(a) {
                    LBool::True => self.new_decision_level(),
                    LBool::False => {
                        let failed = self.analyze_final(!a, theory);
                        return Search::Done(SolverResult::Unsat(failed));
                    }
                    LBool::Undef => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let next = match next {
                Some(l) => l,
                None => match self.pick_branch() {
                    Some(l) => {
                        self.stats.decisions += 1;
                        l
                    }
                    None => match theory.final_check() {
                        Ok(()) => {
                            theory.on_model();
                            let model = self.assigns.iter().map(|&a| a == LBool::True).collect();
                            return Search::Done(SolverResult::Sat(model));
                        }
                        Err(expl) => {
                            self.stats.theory_conflicts += 1;
                            let c = Conflict::Lits(expl.into_iter().map(|l| !l).collect());
                            if !self.resolve_conflict(c, theory) {
                                return Search::Done(SolverResult::Unsat(Vec::new()));
                            }
                            continue;
                        }
                    },
                },
            };
            self.new_decision_level();
            self.enqueue(next, Reason::Decision);
        }
    }

    /// Solves under `assumptions`. The solver is back at level 0 when this
    /// returns.
    pub fn solve(&mut self, theory: &mut dyn Theory, assumptions: &[Lit], limits: &SearchLimits) -> SolverResult {
        if !self.ok {
            return SolverResult::Unsat(Vec::new());
        }
        let start = self.stats.conflicts;
        let mut restarts = 0u64;
        let result = loop {
            let budget = (luby(2.0, restarts) * RESTART_BASE) as u64;
            match self.search(theory, assumptions, budget, limits, start) {
                Search::Restart => {
                    restarts += 1;
                    self.stats.restarts += 1;
                    if let Some(why) = self.limit_hit(limits, start) {
                        break SolverResult::Unknown(why);
                    }
                }
                Search::Done(r) => break r,
            }
        };
        self.cancel_until(0, theory);
        result
    }

    /// Checks the two-watched-literal invariant after a conflict-free
    /// propagation: every clause is satisfied or both watches are
    /// unassigned.
    pub fn watch_invariant_holds(&self) -> bool {
        self.clauses.iter().enumerate().all(|(i, c)| {
            if c.deleted {
                return true;
            }
            let watched = |l: Lit| self.watches[l.code()].iter().any(|w| w.cref as usize == i);
            if !watched(c.lits[0]) || !watched(c.lits[1]) {
                return false;
            }
            c.lits.iter().any(|&l| self.value(l) == LBool::True)
                || (self.value(c.lits[0]) == LBool::Undef && self.value(c.lits[1]) == LBool::Undef)
        })
    }

    /// Problem clauses plus level-0 units in DIMACS CNF.
    pub fn to_dimacs(&self) -> String {
        let units: Vec<Lit> = match self.trail_lim.first() {
            Some(&lim) => self.trail[..lim].to_vec(),
            None => self.trail.clone(),
        };
        let problem: Vec<&ClauseData> = self.clauses.iter().filter(|c| !c.learnt && !c.deleted).collect();
        let mut out = format!("p cnf {} {}\n", self.num_vars(), problem.len() + units.len());
        for l in units {
            let _ = writeln!(out, "{} 0", l.to_dimacs());
        }
        for c in problem {
            for l in &c.lits {
                let _ = write!(out, "{} ", l.to_dimacs());
            }
            out.push_str("0\n");
        }
        out
    }
}
