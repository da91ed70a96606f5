//! Integer difference logic theory. Asserted atoms become weighted edges of
//! a constraint graph whose all-pairs shortest paths are kept exact by an
//! O(n²) incremental Floyd–Warshall step per new edge.
//!
//! Atom `x - y <= c` is the edge `y -> x` with weight `c`; a path `u ~> v`
//! of weight `w` therefore witnesses `v - u <= w`, and the conjunction is
//! satisfiable iff no cycle has negative weight.

mod matrix;

use std::collections::{BTreeMap, HashMap};
use std::fmt::{Debug, Display};

use num_traits::{PrimInt, Signed};

use crate::lit::{Lit, Var};
use crate::normalize::{DiffAtom, VarId};
use crate::sat;

pub use matrix::ApspMatrix;

/// Signed integer type used for edge weights and path sums.
pub trait Weight: PrimInt + Signed + Debug + Display + Send + Sync + 'static {}

impl<T: PrimInt + Signed + Debug + Display + Send + Sync + 'static> Weight for T {}

fn weight_of<W: Weight>(c: i64) -> W {
    W::from(c).expect("atom constant does not fit the weight type")
}

/// A committed constraint-graph edge with the literal that supports it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge<W> {
    pub from: usize,
    pub to: usize,
    pub weight: W,
    pub lit: Lit,
    pub atom: DiffAtom,
}

/// Asserted literals whose conjunction is infeasible, together with the
/// difference constraints they stand for. The constants sum to less than
/// zero around the cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryConflict {
    pub lits: Vec<Lit>,
    pub atoms: Vec<DiffAtom>,
}

/// Integer assignment to the variables of the constraint graph. Variables
/// that never appeared in an atom read as 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdlModel<W> {
    values: BTreeMap<VarId, W>,
}

impl<W: Weight> IdlModel<W> {
    pub fn value(&self, v: VarId) -> W {
        self.values.get(&v).copied().unwrap_or_else(W::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, W)> + '_ {
        self.values.iter().map(|(&v, &w)| (v, w))
    }

    pub fn satisfies(&self, atom: &DiffAtom) -> bool {
        self.value(atom.x) - self.value(atom.y) <= weight_of(atom.c)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TheoryStats {
    /// Matrix cells lowered by incremental updates.
    pub fw_cell_updates: u64,
    /// Atom literals received, including redundant ones.
    pub edge_assertions: u64,
    pub edges_committed: u64,
    pub redundant_edges: u64,
    pub theory_conflicts: u64,
    pub propagations: u64,
    pub max_vertices: u64,
}

#[derive(Debug, Clone, Copy)]
struct Mark {
    level: u32,
    cells: usize,
    edges: usize,
    assigned: usize,
}

/// The difference-logic solver. Implements [`sat::Theory`] over the SAT
/// variables registered with [`DiffTheory::register_atom`].
#[derive(Debug, Clone)]
pub struct DiffTheory<W> {
    matrix: ApspMatrix<W>,
    vertex_of: HashMap<VarId, usize>,
    vertex_var: Vec<VarId>,
    atoms: Vec<DiffAtom>,
    atom_var: Vec<Var>,
    by_var: Vec<Option<u32>>,
    assigned: Vec<bool>,
    assigned_log: Vec<u32>,
    edges: Vec<Edge<W>>,
    cell_log: Vec<(u32, u32, Option<W>)>,
    marks: Vec<Mark>,
    propagation: bool,
    dirty: bool,
    keep_matrix: bool,
    last_model: Option<IdlModel<W>>,
    last_matrix: Option<ApspMatrix<W>>,
    row_buf: Vec<(usize, W)>,
    stats: TheoryStats,
}

impl<W: Weight> Default for DiffTheory<W> {
    fn default() -> Self {
        DiffTheory::new()
    }
}

impl<W: Weight> DiffTheory<W> {
    /// A fresh theory holding only the zero variable.
    pub fn new() -> DiffTheory<W> {
        let mut t = DiffTheory {
            matrix: ApspMatrix::new(0),
            vertex_of: HashMap::new(),
            vertex_var: Vec::new(),
            atoms: Vec::new(),
            atom_var: Vec::new(),
            by_var: Vec::new(),
            assigned: Vec::new(),
            assigned_log: Vec::new(),
            edges: Vec::new(),
            cell_log: Vec::new(),
            marks: Vec::new(),
            propagation: true,
            dirty: true,
            keep_matrix: false,
            last_model: None,
            last_matrix: None,
            row_buf: Vec::new(),
            stats: TheoryStats::default(),
        };
        t.ensure_vertex(VarId::ZERO);
        t
    }

    pub fn set_propagation(&mut self, on: bool) {
        self.propagation = on;
    }

    /// Keep a copy of the matrix at every model, for debug dumps.
    pub fn set_keep_matrix(&mut self, on: bool) {
        self.keep_matrix = on;
    }

    pub fn stats(&self) -> TheoryStats {
        self.stats
    }

    pub fn matrix(&self) -> &ApspMatrix<W> {
        &self.matrix
    }

    /// Matrix captured at the most recent model, if kept.
    pub fn model_matrix(&self) -> Option<&ApspMatrix<W>> {
        self.last_matrix.as_ref()
    }

    pub fn last_model(&self) -> Option<&IdlModel<W>> {
        self.last_model.as_ref()
    }

    pub fn vertex_of(&self, v: VarId) -> Option<usize> {
        self.vertex_of.get(&v).copied()
    }

    /// Variable of each matrix row, in vertex order.
    pub fn vertex_vars(&self) -> &[VarId] {
        &self.vertex_var
    }

    /// Edges currently in the graph, in commit order.
    pub fn committed_edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    /// Adds a row and column for `v` if it has none. Vertices are never
    /// removed, not even on backtrack.
    pub fn ensure_vertex(&mut self, v: VarId) -> usize {
        if let Some(&i) = self.vertex_of.get(&v) {
            return i;
        }
        let i = self.matrix.add_vertex();
        self.vertex_of.insert(v, i);
        self.vertex_var.push(v);
        self.stats.max_vertices = self.stats.max_vertices.max(self.matrix.dim() as u64);
        i
    }

    /// Associates SAT variable `var` with `atom`: the positive literal
    /// asserts `atom`, the negative one its integer complement.
    pub fn register_atom(&mut self, var: Var, atom: DiffAtom) {
        self.ensure_vertex(atom.x);
        self.ensure_vertex(atom.y);
        if self.by_var.len() <= var.index() {
            self.by_var.resize(var.index() + 1, None);
        }
        assert!(self.by_var[var.index()].is_none(), "variable registered twice");
        self.by_var[var.index()] = Some(self.atoms.len() as u32);
        self.atoms.push(atom);
        self.atom_var.push(var);
        self.assigned.push(false);
        self.dirty = true;
    }

    /// The constraint a literal stands for, if it is an atom literal.
    pub fn atom_of(&self, lit: Lit) -> Option<DiffAtom> {
        let k = (*self.by_var.get(lit.var().index())?)?;
        let a = self.atoms[k as usize];
        Some(if lit.is_positive() { a } else { a.negated() })
    }

    fn current_level(&self) -> u32 {
        self.marks.last().map_or(0, |m| m.level)
    }

    fn open_level(&mut self, level: u32) {
        if level > self.current_level() {
            self.marks.push(Mark {
                level,
                cells: self.cell_log.len(),
                edges: self.edges.len(),
                assigned: self.assigned_log.len(),
            });
        }
    }

    /// Asserts the constraint `atom`, supported by `lit`, at decision level
    /// `level`. On conflict nothing is changed.
    pub fn assert_edge(&mut self, atom: DiffAtom, lit: Lit, level: u32) -> Result<(), TheoryConflict> {
        debug_assert!(level >= self.current_level());
        self.stats.edge_assertions += 1;
        let x = self.ensure_vertex(atom.x);
        let y = self.ensure_vertex(atom.y);
        let c: W = weight_of(atom.c);
        if let Some(dxy) = self.matrix.get(x, y) {
            if dxy + c < W::zero() {
                self.stats.theory_conflicts += 1;
                let path = self.shortest_path(x, y, self.edges.len());
                let mut lits = vec![lit];
                let mut atoms = vec![atom];
                for e in path {
                    lits.push(self.edges[e].lit);
                    atoms.push(self.edges[e].atom);
                }
                return Err(TheoryConflict { lits, atoms });
            }
        }
        if let Some(dyx) = self.matrix.get(y, x) {
            if dyx <= c {
                self.stats.redundant_edges += 1;
                return Ok(());
            }
        }
        self.open_level(level);
        self.edges.push(Edge {
            from: y,
            to: x,
            weight: c,
            lit,
            atom,
        });
        self.stats.edges_committed += 1;
        self.commit(y, x, c, level > 0);
        self.dirty = true;
        Ok(())
    }

    /// Lowers every D[i][j] to D[i][from] + w + D[to][j] where shorter.
    /// Row `to` and column `from` cannot change (that would need a negative
    /// cycle), so the update is done in place.
    fn commit(&mut self, from: usize, to: usize, w: W, log: bool) {
        let n = self.matrix.dim();
        self.row_buf.clear();
        self.row_buf.extend(
            self.matrix
                .row(to)
                .iter()
                .enumerate()
                .filter_map(|(j, d)| d.map(|d| (j, d))),
        );
        let mut updates = 0u64;
        for i in 0..n {
            let Some(d_if) = self.matrix.get(i, from) else { continue };
            let base = d_if + w;
            let row = self.matrix.row_mut(i);
            for &(j, d_tj) in &self.row_buf {
                let cand = base + d_tj;
                match row[j] {
                    Some(d) if d <= cand => {}
                    old => {
                        if log {
                            self.cell_log.push((i as u32, j as u32, old));
                        }
                        row[j] = Some(cand);
                        updates += 1;
                    }
                }
            }
        }
        self.stats.fw_cell_updates += updates;
    }

    /// Edge indices of a shortest `from ~> to` path using only the first
    /// `prefix` committed edges, found by Bellman–Ford.
    fn shortest_path(&self, from: usize, to: usize, prefix: usize) -> Vec<usize> {
        let n = self.matrix.dim();
        let edges = &self.edges[..prefix];
        let mut dist: Vec<Option<W>> = vec![None; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        dist[from] = Some(W::zero());
        for _ in 0..n {
            let mut changed = false;
            for (k, e) in edges.iter().enumerate() {
                let Some(d) = dist[e.from] else { continue };
                let nd = d + e.weight;
                if dist[e.to].is_none_or(|old| nd < old) {
                    dist[e.to] = Some(nd);
                    pred[e.to] = Some(k);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            let k = pred[v].expect("a path exists in the committed graph");
            path.push(k);
            v = edges[k].from;
            assert!(path.len() <= n, "predecessor cycle in a consistent graph");
        }
        path.reverse();
        path
    }

    /// Undoes every assertion made above `level`.
    pub fn backtrack_to(&mut self, level: u32) {
        while let Some(m) = self.marks.last().copied() {
            if m.level <= level {
                break;
            }
            self.marks.pop();
            for (i, j, old) in self.cell_log.drain(m.cells..).rev() {
                self.matrix.set(i as usize, j as usize, old);
            }
            self.edges.truncate(m.edges);
            for k in self.assigned_log.drain(m.assigned..) {
                self.assigned[k as usize] = false;
            }
            self.dirty = true;
        }
    }

    /// Integer model of the current graph: the shortest distance from a
    /// virtual source with zero-weight edges to every vertex, shifted so the
    /// zero variable is 0. The matrix already holds every path weight, so
    /// the distance of `v` is the least entry of column `v`.
    pub fn extract_model(&self) -> IdlModel<W> {
        let n = self.matrix.dim();
        let dist: Vec<W> = (0..n)
            .map(|v| {
                (0..n)
                    .filter_map(|u| self.matrix.get(u, v))
                    .fold(W::zero(), |a, b| a.min(b))
            })
            .collect();
        let z = dist[self.vertex_of[&VarId::ZERO]];
        IdlModel {
            values: self.vertex_var.iter().zip(&dist).map(|(&v, &d)| (v, d - z)).collect(),
        }
    }

    /// Unassigned registered atoms decided by the current matrix. Handles
    /// record the number of committed edges, which bounds the explanation.
    pub fn implied_atoms(&self) -> Vec<(Lit, u32)> {
        let handle = self.edges.len() as u32;
        let mut out = Vec::new();
        for (k, a) in self.atoms.iter().enumerate() {
            if self.assigned[k] {
                continue;
            }
            let x = self.vertex_of[&a.x];
            let y = self.vertex_of[&a.y];
            let c: W = weight_of(a.c);
            if self.matrix.get(y, x).is_some_and(|d| d <= c) {
                out.push((self.atom_var[k].lit(true), handle));
            } else if self.matrix.get(x, y).is_some_and(|d| d <= -c - W::one()) {
                out.push((self.atom_var[k].lit(false), handle));
            }
        }
        out
    }

    /// Supporting literals of an implied literal.
    pub fn explain_implied(&self, lit: Lit, handle: u32) -> Vec<Lit> {
        let a = self.atom_of(lit).expect("explained literal is an atom");
        let x = self.vertex_of[&a.x];
        let y = self.vertex_of[&a.y];
        self.shortest_path(y, x, handle as usize)
            .into_iter()
            .map(|e| self.edges[e].lit)
            .collect()
    }
}

impl<W: Weight> sat::Theory for DiffTheory<W> {
    fn assert_lit(&mut self, lit: Lit, level: u32) -> Result<(), Vec<Lit>> {
        let Some(&Some(k)) = self.by_var.get(lit.var().index()) else {
            return Ok(());
        };
        let a = self.atoms[k as usize];
        let atom = if lit.is_positive() { a } else { a.negated() };
        self.assert_edge(atom, lit, level).map_err(|c| c.lits)?;
        self.open_level(level);
        self.assigned[k as usize] = true;
        if level > 0 {
            self.assigned_log.push(k);
        }
        Ok(())
    }

    fn propagate(&mut self, out: &mut Vec<(Lit, u32)>) {
        if !self.propagation || !self.dirty {
            return;
        }
        self.dirty = false;
        let found = self.implied_atoms();
        self.stats.propagations += found.len() as u64;
        out.extend(found);
    }

    fn explain(&mut self, lit: Lit, handle: u32) -> Vec<Lit> {
        self.explain_implied(lit, handle)
    }

    fn backtrack(&mut self, level: u32) {
        self.backtrack_to(level);
    }

    fn final_check(&mut self) -> Result<(), Vec<Lit>> {
        debug_assert!((0..self.matrix.dim()).all(|i| self.matrix.get(i, i) == Some(W::zero())));
        Ok(())
    }

    fn on_model(&mut self) {
        self.last_model = Some(self.extract_model());
        if self.keep_matrix {
            self.last_matrix = Some(self.matrix.clone());
        }
    }
}

#[cfg(test)]
mod tests;
