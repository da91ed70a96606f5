use std::fmt::Write as _;

use super::Weight;

/// Dense all-pairs shortest-path matrix. `None` is the explicit NoPath
/// marker; it never takes part in arithmetic.
///
/// Storage grows by doubling so that adding vertices one at a time costs
/// amortized O(n) per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApspMatrix<W> {
    n: usize,
    cap: usize,
    cells: Vec<Option<W>>,
}

impl<W: Weight> Default for ApspMatrix<W> {
    fn default() -> Self {
        ApspMatrix::new(0)
    }
}

impl<W: Weight> ApspMatrix<W> {
    /// An `n`-vertex matrix with no edges.
    pub fn new(n: usize) -> ApspMatrix<W> {
        let mut m = ApspMatrix {
            n: 0,
            cap: 0,
            cells: Vec::new(),
        };
        for _ in 0..n {
            m.add_vertex();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<W> {
        debug_assert!(i < self.n && j < self.n);
        self.cells[i * self.cap + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, d: Option<W>) {
        debug_assert!(i < self.n && j < self.n);
        self.cells[i * self.cap + j] = d;
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[Option<W>] {
        &self.cells[i * self.cap..i * self.cap + self.n]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [Option<W>] {
        &mut self.cells[i * self.cap..i * self.cap + self.n]
    }

    /// Appends a vertex with distance 0 to itself and no other paths.
    /// Returns its index.
    pub fn add_vertex(&mut self) -> usize {
        if self.n == self.cap {
            let cap = (self.cap * 2).max(4);
            let mut cells = vec![None; cap * cap];
            for i in 0..self.n {
                cells[i * cap..i * cap + self.n].copy_from_slice(self.row(i));
            }
            self.cells = cells;
            self.cap = cap;
        }
        let v = self.n;
        self.n += 1;
        self.set(v, v, Some(W::zero()));
        v
    }

    /// Row-major TSV, `inf` for NoPath.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    out.push('\t');
                }
                match self.get(i, j) {
                    Some(d) => {
                        let _ = write!(out, "{d}");
                    }
                    None => out.push_str("inf"),
                }
            }
            out.push('\n');
        }
        out
    }

    /// All entries, row-major.
    pub fn to_rows(&self) -> Vec<Vec<Option<W>>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Zero diagonal and the triangle inequality over every triple.
    /// Cubic; meant for tests.
    pub fn is_closed(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            if self.get(i, i) != Some(W::zero()) {
                return false;
            }
        }
        for k in 0..n {
            for i in 0..n {
                let Some(ik) = self.get(i, k) else { continue };
                for j in 0..n {
                    let Some(kj) = self.get(k, j) else { continue };
                    match self.get(i, j) {
                        Some(ij) if ij <= ik + kj => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_keeps_entries() {
        let mut m: ApspMatrix<i64> = ApspMatrix::new(3);
        m.set(0, 2, Some(-5));
        m.set(2, 1, Some(7));
        for _ in 0..10 {
            m.add_vertex();
        }
        assert_eq!(m.dim(), 13);
        assert_eq!(m.get(0, 2), Some(-5));
        assert_eq!(m.get(2, 1), Some(7));
        assert_eq!(m.get(12, 12), Some(0));
        assert_eq!(m.get(12, 0), None);
    }

    #[test]
    fn tsv_dump() {
        let mut m: ApspMatrix<i32> = ApspMatrix::new(2);
        m.set(1, 0, Some(-3));
        assert_eq!(m.to_tsv(), "0\tinf\n-3\t0\n");
    }

    #[test]
    fn fresh_matrix_is_closed() {
        let m: ApspMatrix<i64> = ApspMatrix::new(5);
        assert!(m.is_closed());
        let mut bad = m.clone();
        bad.set(0, 1, Some(1));
        bad.set(1, 2, Some(1));
        assert!(!bad.is_closed());
    }
}
