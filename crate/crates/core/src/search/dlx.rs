//! Dancing links for Algorithm X.

use rayon::prelude::*;

use super::Budget;

const ROOT: usize = 0;
const NO_ROW: u32 = u32::MAX;

/// Toroidal doubly linked sparse 0/1 matrix.
///
/// Node 0 is the root, nodes `1..=ncols` are column headers, and the rest
/// are the 1-entries of the rows, in row order.
#[derive(Debug, Clone)]
pub(crate) struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<u32>,
    size: Vec<usize>,
}

impl Dlx {
    pub(crate) fn new(ncols: usize, rows: &[Vec<u32>]) -> Dlx {
        let n = ncols + 1;
        let mut d = Dlx {
            left: (0..n).map(|i| if i == 0 { ncols } else { i - 1 }).collect(),
            right: (0..n).map(|i| if i == ncols { 0 } else { i + 1 }).collect(),
            up: (0..n).collect(),
            down: (0..n).collect(),
            col: (0..n).collect(),
            row: vec![NO_ROW; n],
            size: vec![0; n],
        };
        for (r, cols) in rows.iter().enumerate() {
            let first = d.col.len();
            for (k, &c) in cols.iter().enumerate() {
                let header = c as usize + 1;
                let node = d.col.len();
                let last = d.up[header];
                d.up.push(last);
                d.down.push(header);
                d.down[last] = node;
                d.up[header] = node;
                let (l, rt) = if k == 0 { (node, node) } else { (node - 1, first) };
                d.left.push(l);
                d.right.push(rt);
                if k > 0 {
                    d.right[node - 1] = node;
                    d.left[first] = node;
                }
                d.col.push(header);
                d.row.push(r as u32);
                d.size[header] += 1;
            }
        }
        d
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Column with fewest remaining rows; `None` when no column is left.
    fn choose_column(&self) -> Option<usize> {
        let mut best = None;
        let mut best_size = usize::MAX;
        let mut c = self.right[ROOT];
        while c != ROOT {
            if self.size[c] < best_size {
                best_size = self.size[c];
                best = Some(c);
                if best_size == 0 {
                    break;
                }
            }
            c = self.right[c];
        }
        best
    }

    fn rows_of(&self, c: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = self.down[c];
        while i != c {
            out.push(i);
            i = self.down[i];
        }
        out
    }

    fn select(&mut self, node: usize) {
        let mut j = self.right[node];
        while j != node {
            self.cover(self.col[j]);
            j = self.right[j];
        }
    }

    fn deselect(&mut self, node: usize) {
        let mut j = self.left[node];
        while j != node {
            self.uncover(self.col[j]);
            j = self.left[j];
        }
    }

    fn search(
        &mut self,
        partial: &mut Vec<u32>,
        max_len: Option<usize>,
        budget: &Budget,
        out: &mut Vec<Vec<u32>>,
    ) -> Result<(), ()> {
        budget.tick()?;
        let Some(c) = self.choose_column() else {
            let mut sol = partial.clone();
            sol.sort_unstable();
            out.push(sol);
            return Ok(());
        };
        if self.size[c] == 0 || max_len.is_some_and(|m| partial.len() >= m) {
            return Ok(());
        }
        self.cover(c);
        let mut i = self.down[c];
        let mut result = Ok(());
        while i != c {
            partial.push(self.row[i]);
            self.select(i);
            result = self.search(partial, max_len, budget, out);
            self.deselect(i);
            partial.pop();
            if result.is_err() {
                break;
            }
            i = self.down[i];
        }
        self.uncover(c);
        result
    }
}

/// All exact covers, each as sorted row indices, in sorted order. The root
/// branches are explored in parallel when `parallel` is set.
pub(crate) fn exact_covers(
    ncols: usize,
    rows: &[Vec<u32>],
    max_len: Option<usize>,
    budget: &Budget,
    parallel: bool,
) -> Result<Vec<Vec<u32>>, ()> {
    let mut root = Dlx::new(ncols, rows);
    budget.tick()?;
    let Some(c) = root.choose_column() else {
        return Ok(vec![Vec::new()]);
    };
    if root.size[c] == 0 || max_len == Some(0) {
        return Ok(Vec::new());
    }
    root.cover(c);
    let branches = root.rows_of(c);
    let run = |&node: &usize| -> Result<Vec<Vec<u32>>, ()> {
        let mut d = root.clone();
        let mut partial = vec![d.row[node]];
        d.select(node);
        let mut out = Vec::new();
        d.search(&mut partial, max_len, budget, &mut out)?;
        Ok(out)
    };
    let parts: Vec<Result<Vec<Vec<u32>>, ()>> = if parallel {
        branches.par_iter().map(run).collect()
    } else {
        branches.iter().map(run).collect()
    };
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    all.sort();
    Ok(all)
}
