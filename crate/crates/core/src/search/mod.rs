//! Exhaustive search for line sets partitioning (or covering) the internal
//! points of the conic.
//!
//! Columns of a [`CoverInstance`] are the internal points; rows are the
//! secant and external lines (tangents carry no internal point). Exact mode
//! runs dancing links; cover mode enumerates minimal covers of a fixed size.
//! [`brute_force_solve`] is a naive independent oracle for small q.

mod brute;
mod cover;
mod dlx;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::conic::{ConicGeometry, LineClass};
use crate::error::{Error, Result};
use crate::families::{verify_partition, LineSet, Provenance};
use crate::gf::FieldDescriptor;
use crate::plane::{LineId, PointId};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

const PROGRESS_EVERY: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverMode {
    /// Every internal point on exactly one line.
    Exact,
    /// Every internal point on at least one line; minimal covers only.
    #[serde(rename = "cover")]
    AtLeastOnce,
}

impl std::str::FromStr for CoverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<CoverMode> {
        match s {
            "exact" => Ok(CoverMode::Exact),
            "cover" => Ok(CoverMode::AtLeastOnce),
            _ => Err(Error::Usage(format!("unknown mode {s:?}"))),
        }
    }
}

/// Shared search-node counter with a hard limit.
pub(crate) struct Budget {
    limit: u64,
    used: AtomicU64,
    exceeded: AtomicBool,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Budget {
        Budget { limit, used: AtomicU64::new(0), exceeded: AtomicBool::new(false) }
    }

    #[inline]
    pub(crate) fn tick(&self) -> std::result::Result<(), ()> {
        let n = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.limit || self.exceeded.load(Ordering::Relaxed) {
            self.exceeded.store(true, Ordering::Relaxed);
            return Err(());
        }
        if n % PROGRESS_EVERY == 0 {
            log::info!("search: {n} nodes");
        }
        Ok(())
    }

    pub(crate) fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed).min(self.limit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    field: FieldDescriptor,
    columns: Vec<PointId>,
    rows: Vec<LineId>,
    row_columns: Vec<Vec<u32>>,
    mode: CoverMode,
    size_filter: Option<usize>,
}

impl CoverInstance {
    /// An instance from explicit parts; `row_columns` index into `columns`.
    pub fn from_parts(
        field: FieldDescriptor,
        columns: Vec<PointId>,
        rows: Vec<LineId>,
        row_columns: Vec<Vec<u32>>,
        mode: CoverMode,
        size_filter: Option<usize>,
    ) -> Result<CoverInstance> {
        if rows.len() != row_columns.len()
            || row_columns.iter().flatten().any(|&c| c as usize >= columns.len())
        {
            return Err(Error::Usage("malformed cover instance".into()));
        }
        Ok(CoverInstance { field, columns, rows, row_columns, mode, size_filter })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn columns(&self) -> &[PointId] {
        &self.columns
    }

    pub fn rows(&self) -> &[LineId] {
        &self.rows
    }

    pub fn row_columns(&self) -> &[Vec<u32>] {
        &self.row_columns
    }

    pub fn mode(&self) -> CoverMode {
        self.mode
    }

    pub fn size_filter(&self) -> Option<usize> {
        self.size_filter
    }

    fn to_line_set(&self, rows: &[u32]) -> LineSet {
        let mut ids: Vec<LineId> = rows.iter().map(|&r| self.rows[r as usize]).collect();
        ids.sort_unstable();
        LineSet::from_sorted(self.field.clone(), ids, Provenance::SearchResult)
    }
}

/// Internal points as columns, secant and external lines as rows, both in
/// id order.
pub fn build_instance(geom: &ConicGeometry, mode: CoverMode, size_filter: Option<usize>) -> CoverInstance {
    let columns = geom.internal_points();
    let mut col_of = vec![u32::MAX; geom.plane().size()];
    for (i, p) in columns.iter().enumerate() {
        col_of[p.index()] = i as u32;
    }
    let rows: Vec<LineId> = geom
        .plane()
        .line_ids()
        .filter(|&l| geom.classify_line(l).class != LineClass::Tangent)
        .collect();
    let row_columns = rows
        .iter()
        .map(|&l| {
            geom.plane()
                .points_on(l)
                .iter()
                .map(|p| col_of[p.index()])
                .filter(|&c| c != u32::MAX)
                .collect()
        })
        .collect();
    CoverInstance {
        field: geom.field().descriptor().clone(),
        columns,
        rows,
        row_columns,
        mode,
        size_filter,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub solutions: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub field: FieldDescriptor,
    pub mode: CoverMode,
    pub size_filter: Option<usize>,
    pub solutions: Vec<LineSet>,
    pub stats: SearchStats,
}

impl SolutionSet {
    /// Number of solutions of each size, ascending by size.
    pub fn size_histogram(&self) -> Vec<(usize, usize)> {
        let mut h = std::collections::BTreeMap::new();
        for s in &self.solutions {
            *h.entry(s.len()).or_insert(0) += 1;
        }
        h.into_iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub node_budget: u64,
    /// Worker threads; 1 runs single-threaded, 0 uses the rayon default.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { node_budget: DEFAULT_NODE_BUDGET, threads: 0 }
    }
}

fn in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// Every solution of the instance, verified and sorted by line ids.
pub fn solve_all(geom: &ConicGeometry, instance: &CoverInstance, opts: &SearchOptions) -> Result<SolutionSet> {
    if instance.field != *geom.field().descriptor() {
        return Err(Error::FieldMismatch);
    }
    let start = Instant::now();
    let budget = Budget::new(opts.node_budget);
    let ncols = instance.columns.len();
    let parallel = opts.threads != 1;
    let raw = in_pool(opts.threads, || match instance.mode {
        CoverMode::Exact => {
            dlx::exact_covers(ncols, &instance.row_columns, instance.size_filter, &budget, parallel)
        }
        CoverMode::AtLeastOnce => match instance.size_filter {
            Some(k) => cover::minimal_covers(ncols, &instance.row_columns, k, &budget, parallel),
            None => Ok(Vec::new()),
        },
    });
    if instance.mode == CoverMode::AtLeastOnce && instance.size_filter.is_none() {
        return Err(Error::MissingSize);
    }
    let raw = raw.map_err(|_| Error::InstanceTooLarge(opts.node_budget))?;
    let mut solutions = Vec::with_capacity(raw.len());
    for rows in &raw {
        let set = instance.to_line_set(rows);
        if instance.size_filter.is_some_and(|k| set.len() != k) {
            continue;
        }
        let report = verify_partition(geom, &set);
        let ok = match instance.mode {
            CoverMode::Exact => report.is_exact_partition,
            CoverMode::AtLeastOnce => report.uncovered_internal == 0,
        };
        assert!(ok, "search produced an invalid solution: {:?}", set.line_ids());
        solutions.push(set);
    }
    solutions.sort_by(|a, b| a.line_ids().cmp(b.line_ids()));
    let stats = SearchStats { nodes: budget.used(), solutions: solutions.len(), elapsed: start.elapsed() };
    log::info!("search finished: {} solutions, {} nodes", stats.solutions, stats.nodes);
    Ok(SolutionSet {
        field: instance.field.clone(),
        mode: instance.mode,
        size_filter: instance.size_filter,
        solutions,
        stats,
    })
}

/// Naive backtracking over rows with no linked structures or heuristics.
/// Intended for q <= 5 only.
pub fn brute_force_solve(instance: &CoverInstance, node_budget: u64) -> Result<SolutionSet> {
    let start = Instant::now();
    let budget = Budget::new(node_budget);
    let ncols = instance.columns.len();
    let raw = match instance.mode {
        CoverMode::Exact => brute::exact(ncols, &instance.row_columns, &budget),
        CoverMode::AtLeastOnce => {
            let k = instance.size_filter.ok_or(Error::MissingSize)?;
            brute::minimal_covers(ncols, &instance.row_columns, k, &budget)
        }
    }
    .map_err(|_| Error::InstanceTooLarge(node_budget))?;
    let mut solutions: Vec<LineSet> = raw
        .iter()
        .map(|rows| instance.to_line_set(rows))
        .filter(|s| instance.size_filter.is_none_or(|k| s.len() == k))
        .collect();
    solutions.sort_by(|a, b| a.line_ids().cmp(b.line_ids()));
    let stats = SearchStats { nodes: budget.used(), solutions: solutions.len(), elapsed: start.elapsed() };
    Ok(SolutionSet {
        field: instance.field.clone(),
        mode: instance.mode,
        size_filter: instance.size_filter,
        solutions,
        stats,
    })
}
