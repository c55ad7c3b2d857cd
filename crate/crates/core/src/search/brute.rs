//! Plain subset backtracking, kept deliberately independent of the other
//! engines: rows are visited in index order with no column heuristic.

use super::Budget;

pub(crate) fn exact(ncols: usize, rows: &[Vec<u32>], budget: &Budget) -> Result<Vec<Vec<u32>>, ()> {
    fn go(
        i: usize,
        rows: &[Vec<u32>],
        used: &mut Vec<bool>,
        chosen: &mut Vec<u32>,
        budget: &Budget,
        out: &mut Vec<Vec<u32>>,
    ) -> Result<(), ()> {
        budget.tick()?;
        if i == rows.len() {
            if used.iter().all(|&u| u) {
                out.push(chosen.clone());
            }
            return Ok(());
        }
        // skip row i
        go(i + 1, rows, used, chosen, budget, out)?;
        // take row i if disjoint from what is chosen
        if rows[i].iter().all(|&c| !used[c as usize]) {
            for &c in &rows[i] {
                used[c as usize] = true;
            }
            chosen.push(i as u32);
            let r = go(i + 1, rows, used, chosen, budget, out);
            chosen.pop();
            for &c in &rows[i] {
                used[c as usize] = false;
            }
            r?;
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(0, rows, &mut vec![false; ncols], &mut Vec::new(), budget, &mut out)?;
    Ok(out)
}

pub(crate) fn minimal_covers(
    ncols: usize,
    rows: &[Vec<u32>],
    k: usize,
    budget: &Budget,
) -> Result<Vec<Vec<u32>>, ()> {
    fn go(
        start: usize,
        k: usize,
        rows: &[Vec<u32>],
        ncols: usize,
        chosen: &mut Vec<u32>,
        budget: &Budget,
        out: &mut Vec<Vec<u32>>,
    ) -> Result<(), ()> {
        budget.tick()?;
        if chosen.len() == k {
            let mut count = vec![0u32; ncols];
            for &r in chosen.iter() {
                for &c in &rows[r as usize] {
                    count[c as usize] += 1;
                }
            }
            let covers = count.iter().all(|&n| n > 0);
            let minimal =
                chosen.iter().all(|&r| rows[r as usize].iter().any(|&c| count[c as usize] == 1));
            if covers && minimal {
                out.push(chosen.clone());
            }
            return Ok(());
        }
        for r in start..rows.len() {
            chosen.push(r as u32);
            let res = go(r + 1, k, rows, ncols, chosen, budget, out);
            chosen.pop();
            res?;
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(0, k, rows, ncols, &mut Vec::new(), budget, &mut out)?;
    Ok(out)
}
