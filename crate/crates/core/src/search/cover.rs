//! Enumeration of minimal covers of a fixed size.
//!
//! Every uncovered column must be hit by some chosen row. Branching on the
//! column with fewest admissible rows, the k-th branch takes the k-th row and
//! blocks rows 0..k for the whole subtree, so each row set is produced once.
//! A chosen row always covers the branching column, hence no row is ever
//! added without covering a new point. Sets that become covers early cannot
//! be completed to a minimal cover and are cut off.

use rayon::prelude::*;

use super::Budget;

struct CoverState<'a> {
    row_cols: &'a [Vec<u32>],
    col_rows: &'a [Vec<u32>],
    count: Vec<u32>,
    blocked: Vec<bool>,
    uncovered: usize,
    chosen: Vec<u32>,
    max_gain: usize,
}

impl<'a> CoverState<'a> {
    fn new(ncols: usize, row_cols: &'a [Vec<u32>], col_rows: &'a [Vec<u32>]) -> Self {
        CoverState {
            row_cols,
            col_rows,
            count: vec![0; ncols],
            blocked: vec![false; row_cols.len()],
            uncovered: ncols,
            chosen: Vec::new(),
            max_gain: row_cols.iter().map(Vec::len).max().unwrap_or(0),
        }
    }

    fn push(&mut self, r: u32) {
        for &c in &self.row_cols[r as usize] {
            if self.count[c as usize] == 0 {
                self.uncovered -= 1;
            }
            self.count[c as usize] += 1;
        }
        self.chosen.push(r);
    }

    fn pop(&mut self) {
        let r = self.chosen.pop().expect("nonempty");
        for &c in &self.row_cols[r as usize] {
            self.count[c as usize] -= 1;
            if self.count[c as usize] == 0 {
                self.uncovered += 1;
            }
        }
    }

    fn is_minimal(&self) -> bool {
        self.chosen
            .iter()
            .all(|&r| self.row_cols[r as usize].iter().any(|&c| self.count[c as usize] == 1))
    }

    /// Upper bound on the number of columns `remaining` more rows can cover.
    fn capacity(&self, remaining: usize) -> usize {
        let mut hist = vec![0usize; self.max_gain + 1];
        for (r, cols) in self.row_cols.iter().enumerate() {
            if !self.blocked[r] {
                let gain = cols.iter().filter(|&&c| self.count[c as usize] == 0).count();
                hist[gain] += 1;
            }
        }
        let (mut left, mut total) = (remaining, 0);
        for gain in (1..hist.len()).rev() {
            let take = hist[gain].min(left);
            total += take * gain;
            left -= take;
            if left == 0 {
                break;
            }
        }
        total
    }

    fn branch_column(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (c, &n) in self.count.iter().enumerate() {
            if n > 0 {
                continue;
            }
            let options = self.col_rows[c].iter().filter(|&&r| !self.blocked[r as usize]).count();
            if best.is_none_or(|(_, b)| options < b) {
                best = Some((c, options));
                if options == 0 {
                    break;
                }
            }
        }
        best
    }

    fn search(&mut self, target: usize, budget: &Budget, out: &mut Vec<Vec<u32>>) -> Result<(), ()> {
        budget.tick()?;
        if self.chosen.len() == target {
            if self.uncovered == 0 && self.is_minimal() {
                let mut sol = self.chosen.clone();
                sol.sort_unstable();
                out.push(sol);
            }
            return Ok(());
        }
        if self.uncovered == 0 || self.capacity(target - self.chosen.len()) < self.uncovered {
            return Ok(());
        }
        let Some((c, options)) = self.branch_column() else {
            return Ok(());
        };
        if options == 0 {
            return Ok(());
        }
        let candidates: Vec<u32> =
            self.col_rows[c].iter().copied().filter(|&r| !self.blocked[r as usize]).collect();
        let mut result = Ok(());
        for &r in &candidates {
            self.blocked[r as usize] = true;
            self.push(r);
            result = self.search(target, budget, out);
            self.pop();
            if result.is_err() {
                break;
            }
        }
        for &r in &candidates {
            self.blocked[r as usize] = false;
        }
        result
    }
}

fn transpose(ncols: usize, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut col_rows = vec![Vec::new(); ncols];
    for (r, cols) in rows.iter().enumerate() {
        for &c in cols {
            col_rows[c as usize].push(r as u32);
        }
    }
    col_rows
}

/// All minimal covers with exactly `target` rows, as sorted row indices,
/// in sorted order.
pub(crate) fn minimal_covers(
    ncols: usize,
    rows: &[Vec<u32>],
    target: usize,
    budget: &Budget,
    parallel: bool,
) -> Result<Vec<Vec<u32>>, ()> {
    let col_rows = transpose(ncols, rows);
    let root = CoverState::new(ncols, rows, &col_rows);
    budget.tick()?;
    if root.chosen.len() == target {
        return Ok(if root.uncovered == 0 { vec![Vec::new()] } else { Vec::new() });
    }
    if root.uncovered == 0 || root.capacity(target) < root.uncovered {
        return Ok(Vec::new());
    }
    let Some((c, _)) = root.branch_column() else {
        return Ok(Vec::new());
    };
    let candidates = col_rows[c].clone();
    let run = |k: usize| -> Result<Vec<Vec<u32>>, ()> {
        let mut st = CoverState::new(ncols, rows, &col_rows);
        for &r in &candidates[..=k] {
            st.blocked[r as usize] = true;
        }
        st.push(candidates[k]);
        let mut out = Vec::new();
        st.search(target, budget, &mut out)?;
        Ok(out)
    };
    let parts: Vec<Result<Vec<Vec<u32>>, ()>> = if parallel {
        (0..candidates.len()).into_par_iter().map(run).collect()
    } else {
        (0..candidates.len()).map(run).collect()
    };
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    all.sort();
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> Budget {
        Budget::new(10_000_000)
    }

    fn brute(ncols: usize, rows: &[Vec<u32>], k: usize) -> Vec<Vec<u32>> {
        let n = rows.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let chosen: Vec<u32> = (0..n as u32).filter(|r| mask >> r & 1 == 1).collect();
            let mut count = vec![0; ncols];
            for &r in &chosen {
                for &c in &rows[r as usize] {
                    count[c as usize] += 1;
                }
            }
            let covers = count.iter().all(|&x| x > 0);
            let minimal = chosen
                .iter()
                .all(|&r| rows[r as usize].iter().any(|&c| count[c as usize] == 1));
            if covers && minimal {
                out.push(chosen);
            }
        }
        out
    }

    #[test]
    fn matches_subset_enumeration() {
        // all 2- and 3-subsets of a 5-set as rows
        let mut rows = Vec::new();
        for a in 0..5u32 {
            for b in a + 1..5 {
                rows.push(vec![a, b]);
                for c in b + 1..5 {
                    rows.push(vec![a, b, c]);
                }
            }
        }
        for k in 1..=4 {
            let fast = minimal_covers(5, &rows, k, &budget(), false).unwrap();
            let mut slow = brute(5, &rows, k);
            slow.sort();
            assert_eq!(fast, slow, "k={k}");
            assert_eq!(minimal_covers(5, &rows, k, &budget(), true).unwrap(), fast);
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(minimal_covers(0, &[], 0, &budget(), false).unwrap(), vec![Vec::<u32>::new()]);
        assert!(minimal_covers(0, &[], 1, &budget(), false).unwrap().is_empty());
        assert!(minimal_covers(2, &[vec![0]], 1, &budget(), false).unwrap().is_empty());
    }
}
