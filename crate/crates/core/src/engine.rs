//! Solver sessions: the assertion stack with push/pop, named assertions
//! guarded by selector literals, and the check-sat loop coupling the SAT
//! core to the difference-logic theory.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{mpsc, Arc};
use std::thread;
use std::time::Duration;

use num_bigint::BigInt;
use thiserror::Error;

use crate::lit::{Clause, ClauseOrigin, Lit, Var};
use crate::normalize::{tseitin_cnf, AtomId, AtomTable, LitMapper, NormalizeError, Normalizer, Root};
use crate::sat::{SearchLimits, Solver, SolverResult};
use crate::smtlib::{AttrValue, ScriptCommand, Sort, Term, Valuation};
use crate::{IdlModel, IdlTheory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Whole script parsed up front; the first error aborts.
    #[default]
    Batch,
    /// One command at a time; errors are reported and the session goes on.
    Interactive,
    /// Batch with unsat cores always enabled.
    UnsatCore,
}

#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub mode: Mode,
    pub produce_unsat_cores: bool,
    pub theory_propagation: bool,
    pub minimize_core: bool,
    pub seed: u64,
    /// Conflicts allowed per check-sat.
    pub conflict_budget: Option<u64>,
    /// Wall-clock time allowed per check-sat.
    pub time_budget: Option<Duration>,
    /// Keep the shortest-path matrix of the last model for dumping.
    pub keep_matrix: bool,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            mode: Mode::Batch,
            produce_unsat_cores: false,
            theory_propagation: true,
            minimize_core: false,
            seed: 0,
            conflict_budget: None,
            time_budget: None,
            keep_matrix: false,
        }
    }
}

impl SessionConfig {
    pub fn cores_enabled(&self) -> bool {
        self.produce_unsat_cores || self.mode == Mode::UnsatCore
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("unsupported logic {0}")]
    UnsupportedLogic(String),
    #[error("{0}")]
    Normalize(#[from] NormalizeError),
    #[error("model is not available")]
    NoModel,
    #[error("unsat core is not available")]
    NoCore,
    #[error("unsat core production is not enabled")]
    CoresDisabled,
    /// The solver produced a model that falsifies an active assertion.
    #[error("internal error: {0}")]
    Internal(String),
}

impl EngineError {
    pub fn is_internal(&self) -> bool {
        matches!(self, EngineError::Internal(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Response {
    /// Nothing is printed.
    Silent,
    Success,
    Sat,
    Unsat,
    Unknown,
    Unsupported,
    Model(Vec<(String, Value)>),
    Core(Vec<String>),
    Exit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i128),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) if *v < 0 => write!(f, "(- {})", v.unsigned_abs()),
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

fn quote(name: &str) -> String {
    let simple = !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c));
    if simple {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

impl fmt::Display for Response {
    /// SMT-LIB text without a trailing newline; empty for `Silent` and
    /// `Exit`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Response::Silent | Response::Exit => Ok(()),
            Response::Success => f.write_str("success"),
            Response::Sat => f.write_str("sat"),
            Response::Unsat => f.write_str("unsat"),
            Response::Unknown => f.write_str("unknown"),
            Response::Unsupported => f.write_str("unsupported"),
            Response::Model(entries) => {
                f.write_str("(model\n")?;
                for (name, v) in entries {
                    let sort = if matches!(v, Value::Int(_)) { "Int" } else { "Bool" };
                    writeln!(f, "  (define-fun {} () {sort} {v})", quote(name))?;
                }
                f.write_str(")")
            }
            Response::Core(names) => {
                let names: Vec<String> = names.iter().map(|n| quote(n)).collect();
                write!(f, "({})", names.join(" "))
            }
        }
    }
}

/// Text of an error response.
pub fn error_response(message: &str) -> String {
    format!("(error \"{}\")", message.replace('"', "\"\""))
}

#[derive(Debug, Clone)]
struct AssertionRecord {
    term: Term,
    name: Option<String>,
    selector: Var,
}

#[derive(Debug, Clone)]
enum LastAnswer {
    None,
    Sat(Vec<(String, Value)>),
    Unsat(Vec<usize>),
    Unknown,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SessionStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub theory_conflicts: u64,
    pub theory_propagations: u64,
    pub fw_cell_updates: u64,
    pub edge_assertions: u64,
    pub max_vertices: u64,
    pub check_sats: u64,
}

impl SessionStats {
    /// `key=value` pairs in a fixed order.
    pub fn pairs(&self) -> Vec<(&'static str, u64)> {
        vec![
            ("decisions", self.decisions),
            ("conflicts", self.conflicts),
            ("propagations", self.propagations),
            ("theory_conflicts", self.theory_conflicts),
            ("theory_propagations", self.theory_propagations),
            ("fw_cell_updates", self.fw_cell_updates),
            ("edge_assertions", self.edge_assertions),
            ("max_vertices", self.max_vertices),
            ("check_sats", self.check_sats),
        ]
    }
}

struct Mapper<'a> {
    sat: &'a mut Solver,
    theory: &'a mut IdlTheory,
    atoms: &'a AtomTable,
    atom_var: &'a mut HashMap<AtomId, Var>,
    bool_var: &'a mut HashMap<String, Var>,
}

impl LitMapper for Mapper<'_> {
    fn fresh(&mut self) -> Var {
        self.sat.new_var()
    }

    fn atom(&mut self, atom: AtomId) -> Var {
        if let Some(&v) = self.atom_var.get(&atom) {
            return v;
        }
        let v = self.sat.new_var();
        self.theory.register_atom(v, self.atoms.atom(atom));
        self.atom_var.insert(atom, v);
        v
    }

    fn bool_var(&mut self, name: &str) -> Var {
        if let Some(&v) = self.bool_var.get(name) {
            return v;
        }
        let v = self.sat.new_var();
        self.bool_var.insert(name.to_string(), v);
        v
    }
}

struct ModelValuation<'a> {
    ints: &'a HashMap<String, i128>,
    bools: &'a HashMap<String, bool>,
}

impl Valuation for ModelValuation<'_> {
    fn int_value(&self, name: &str) -> BigInt {
        BigInt::from(self.ints.get(name).copied().unwrap_or(0))
    }

    fn bool_value(&self, name: &str) -> bool {
        self.bools.get(name).copied().unwrap_or(false)
    }
}

/// One solver session.
#[derive(Debug)]
pub struct Session {
    config: SessionConfig,
    print_success: bool,
    norm: Normalizer,
    sat: Solver,
    theory: IdlTheory,
    atom_var: HashMap<AtomId, Var>,
    bool_var: HashMap<String, Var>,
    /// Declared symbols in order, with the stack depth they belong to.
    decls: Vec<(String, Sort, usize)>,
    records: Vec<AssertionRecord>,
    frames: Vec<usize>,
    assertion_count: usize,
    last: LastAnswer,
    cancel: Arc<AtomicBool>,
    check_sats: u64,
}

impl Session {
    pub fn new(config: SessionConfig) -> Session {
        let mut theory = IdlTheory::new();
        theory.set_propagation(config.theory_propagation);
        theory.set_keep_matrix(config.keep_matrix);
        Session {
            sat: Solver::new(config.seed),
            config,
            print_success: false,
            norm: Normalizer::new(),
            theory,
            atom_var: HashMap::new(),
            bool_var: HashMap::new(),
            decls: Vec::new(),
            records: Vec::new(),
            frames: Vec::new(),
            assertion_count: 0,
            last: LastAnswer::None,
            cancel: Arc::new(AtomicBool::new(false)),
            check_sats: 0,
        }
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    /// Flag that aborts a running check-sat with `unknown` when set.
    pub fn cancel_flag(&self) -> Arc<AtomicBool> {
        Arc::clone(&self.cancel)
    }

    pub fn stats(&self) -> SessionStats {
        let s = self.sat.stats();
        let t = self.theory.stats();
        SessionStats {
            decisions: s.decisions,
            conflicts: s.conflicts,
            propagations: s.propagations,
            theory_conflicts: t.theory_conflicts,
            theory_propagations: s.theory_propagations,
            fw_cell_updates: t.fw_cell_updates,
            edge_assertions: t.edge_assertions,
            max_vertices: t.max_vertices,
            check_sats: self.check_sats,
        }
    }

    pub fn theory(&self) -> &IdlTheory {
        &self.theory
    }

    /// Current clause database in DIMACS CNF.
    pub fn dimacs(&self) -> String {
        self.sat.to_dimacs()
    }

    /// Shortest-path matrix of the last model if one was kept, otherwise
    /// the current one, as TSV.
    pub fn apsp_tsv(&self) -> String {
        self.theory
            .model_matrix()
            .unwrap_or_else(|| self.theory.matrix())
            .to_tsv()
    }

    /// Number of active assertions.
    pub fn assertion_count(&self) -> usize {
        self.records.len()
    }

    fn done(&self) -> Response {
        if self.print_success {
            Response::Success
        } else {
            Response::Silent
        }
    }

    pub fn execute(&mut self, cmd: &ScriptCommand) -> Result<Response, EngineError> {
        match cmd {
            ScriptCommand::SetLogic(l) => {
                if l != "QF_IDL" {
                    return Err(EngineError::UnsupportedLogic(l.clone()));
                }
                Ok(self.done())
            }
            ScriptCommand::SetOption(name, value) => self.set_option(name, value),
            ScriptCommand::SetInfo(..) => Ok(self.done()),
            ScriptCommand::DeclareFun(name, sort) | ScriptCommand::DeclareConst(name, sort) => {
                if *sort == Sort::Int {
                    self.norm.declare_int(name);
                }
                self.decls.push((name.clone(), *sort, self.frames.len()));
                Ok(self.done())
            }
            ScriptCommand::Assert { term, name } => {
                self.assert(term, name.clone())?;
                Ok(self.done())
            }
            ScriptCommand::Push(n) => {
                for _ in 0..*n {
                    self.frames.push(self.records.len());
                }
                self.last = LastAnswer::None;
                Ok(self.done())
            }
            ScriptCommand::Pop(n) => {
                for _ in 0..*n {
                    self.pop();
                }
                self.last = LastAnswer::None;
                Ok(self.done())
            }
            ScriptCommand::CheckSat => self.check_sat(),
            ScriptCommand::GetModel => match &self.last {
                LastAnswer::Sat(m) => Ok(Response::Model(m.clone())),
                _ => Err(EngineError::NoModel),
            },
            ScriptCommand::GetUnsatCore => self.unsat_core().map(Response::Core),
            ScriptCommand::Exit => Ok(Response::Exit),
        }
    }

    fn set_option(&mut self, name: &str, value: &AttrValue) -> Result<Response, EngineError> {
        match (name, value.as_bool()) {
            (":produce-unsat-cores", Some(b)) => {
                self.config.produce_unsat_cores = b || self.config.mode == Mode::UnsatCore;
                Ok(self.done())
            }
            (":print-success", Some(b)) => {
                self.print_success = b;
                Ok(self.done())
            }
            (":produce-models", Some(_)) => Ok(self.done()),
            _ => Ok(Response::Unsupported),
        }
    }

    fn assert(&mut self, term: &Term, name: Option<String>) -> Result<(), EngineError> {
        let skel = self.norm.skeleton(term)?;
        let index = self.assertion_count;
        self.assertion_count += 1;
        let selector = self.sat.new_var();
        let guard = selector.lit(false);
        let mut mapper = Mapper {
            sat: &mut self.sat,
            theory: &mut self.theory,
            atoms: &self.norm.atoms,
            atom_var: &mut self.atom_var,
            bool_var: &mut self.bool_var,
        };
        let cnf = tseitin_cnf(&skel, index, &mut mapper);
        let mut clauses = Vec::with_capacity(cnf.clauses.len() + 1);
        for c in cnf.clauses {
            if c.origin() == ClauseOrigin::Input(index) {
                clauses.extend(c.guarded(guard));
            } else {
                clauses.push(c);
            }
        }
        if cnf.root == Root::Const(false) {
            clauses.extend(Clause::new(vec![guard], ClauseOrigin::Input(index)));
        }
        for c in clauses {
            // Gate definitions are satisfiable on their own and input
            // clauses carry an unassigned guard, so this cannot fail on a
            // consistent database; an inconsistent one answers unsat anyway.
            let _ = self.sat.add_clause(c);
        }
        self.records.push(AssertionRecord {
            term: term.clone(),
            name,
            selector,
        });
        self.last = LastAnswer::None;
        Ok(())
    }

    fn pop(&mut self) {
        let Some(keep) = self.frames.pop() else { return };
        for r in self.records.drain(keep..) {
            let _ = self
                .sat
                .add_clause(Clause::new(vec![r.selector.lit(false)], ClauseOrigin::Tseitin).unwrap());
        }
        let depth = self.frames.len();
        self.decls.retain(|d| d.2 <= depth);
    }

    fn limits(&self) -> SearchLimits {
        SearchLimits {
            conflicts: self.config.conflict_budget,
            deadline: None,
            cancel: Some(Arc::clone(&self.cancel)),
        }
    }

    /// Runs the solver under `assumptions`, with a watchdog thread that
    /// raises the cancel flag when the time budget runs out.
    fn solve(&mut self, assumptions: &[Lit]) -> SolverResult {
        let limits = self.limits();
        let Some(budget) = self.config.time_budget else {
            return self.sat.solve(&mut self.theory, assumptions, &limits);
        };
        self.cancel.store(false, Ordering::SeqCst);
        let (tx, rx) = mpsc::channel::<()>();
        let flag = Arc::clone(&self.cancel);
        let watchdog = thread::spawn(move || {
            if let Err(mpsc::RecvTimeoutError::Timeout) = rx.recv_timeout(budget) {
                flag.store(true, Ordering::SeqCst);
            }
        });
        let result = self.sat.solve(&mut self.theory, assumptions, &limits);
        drop(tx);
        let _ = watchdog.join();
        self.cancel.store(false, Ordering::SeqCst);
        result
    }

    fn active_selectors(&self) -> Vec<Lit> {
        self.records.iter().map(|r| r.selector.lit(true)).collect()
    }

    pub fn check_sat(&mut self) -> Result<Response, EngineError> {
        self.check_sats += 1;
        let assumptions = self.active_selectors();
        match self.solve(&assumptions) {
            SolverResult::Sat(assignment) => {
                let model = self.build_model(&assignment)?;
                self.last = LastAnswer::Sat(model);
                Ok(Response::Sat)
            }
            SolverResult::Unsat(failed) => {
                let failed: HashSet<Var> = failed.iter().map(|l| l.var()).collect();
                let core = (0..self.records.len())
                    .filter(|&i| failed.contains(&self.records[i].selector))
                    .collect();
                self.last = LastAnswer::Unsat(core);
                Ok(Response::Unsat)
            }
            SolverResult::Unknown(_) => {
                self.last = LastAnswer::Unknown;
                Ok(Response::Unknown)
            }
        }
    }

    /// Values for the declared symbols, checked against every active
    /// assertion.
    fn build_model(&self, assignment: &[bool]) -> Result<Vec<(String, Value)>, EngineError> {
        let idl: &IdlModel = self
            .theory
            .last_model()
            .ok_or_else(|| EngineError::Internal("sat answer without a theory model".into()))?;
        let mut ints = HashMap::new();
        let mut bools = HashMap::new();
        let mut out = Vec::new();
        for (name, sort, _) in &self.decls {
            let v = match sort {
                Sort::Int => {
                    let v = self.norm.vars.get(name).map_or(0, |id| idl.value(id));
                    ints.insert(name.clone(), v);
                    Value::Int(v)
                }
                Sort::Bool => {
                    let v = self.bool_var.get(name).is_some_and(|v| assignment[v.index()]);
                    bools.insert(name.clone(), v);
                    Value::Bool(v)
                }
            };
            out.push((name.clone(), v));
        }
        let val = ModelValuation {
            ints: &ints,
            bools: &bools,
        };
        for r in &self.records {
            if !r.term.eval_bool(&val) {
                return Err(EngineError::Internal(format!("model falsifies assertion {}", r.term)));
            }
        }
        Ok(out)
    }

    fn unsat_core(&mut self) -> Result<Vec<String>, EngineError> {
        if !self.config.cores_enabled() {
            return Err(EngineError::CoresDisabled);
        }
        let LastAnswer::Unsat(core) = &self.last else {
            return Err(EngineError::NoCore);
        };
        let mut core = core.clone();
        if self.config.minimize_core {
            core = self.minimize(core);
            self.last = LastAnswer::Unsat(core.clone());
        }
        Ok(core.iter().filter_map(|&i| self.records[i].name.clone()).collect())
    }

    /// Deletion-based minimization: drop each member in turn and keep the
    /// drop whenever the rest is still unsat. A member whose removal does
    /// not give unsat (including on budget exhaustion) is kept.
    fn minimize(&mut self, mut core: Vec<usize>) -> Vec<usize> {
        let mut needed = HashSet::new();
        while let Some(&cand) = core.iter().find(|k| !needed.contains(*k)) {
            let trial: Vec<usize> = core.iter().copied().filter(|&k| k != cand).collect();
            let assumptions: Vec<Lit> = trial.iter().map(|&k| self.records[k].selector.lit(true)).collect();
            match self.solve(&assumptions) {
                SolverResult::Unsat(failed) => {
                    let failed: HashSet<Var> = failed.iter().map(|l| l.var()).collect();
                    core = trial
                        .into_iter()
                        .filter(|&k| failed.contains(&self.records[k].selector))
                        .collect();
                }
                _ => {
                    needed.insert(cand);
                }
            }
        }
        core
    }
}
