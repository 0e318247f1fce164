//! Exact maximum C_h[g]-sets in `[n]` by branch and bound, and a greedy
//! baseline.
//!
//! Both scan candidate elements in ascending order and keep, for every
//! translation class of h-subsets of the partial set, its number of members.
//! A candidate is rejected when some class would reach `g` members. Because
//! the candidate exceeds every chosen element, the new h-subsets are the
//! candidate together with `h - 1` chosen elements, and their pattern is
//! read off relative to the smallest chosen one.

use std::collections::HashMap;

use crate::error::{parameter, Error, Result};
use crate::group::{GSet, GroupDescriptor};
use crate::pattern::for_each_combination;

/// Default node budget of the exact search.
pub const DEFAULT_NODE_CAP: u64 = 1_000_000_000;

const DENSE_LIMIT: u64 = 1 << 24;

/// Best set found for one `n`. `best_set` is 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub n: u64,
    pub h: usize,
    pub g: usize,
    pub best_size: usize,
    pub best_set: GSet,
    pub nodes_explored: u64,
    pub optimal: bool,
}

/// Class-size bookkeeping keyed by `(l_1, ..., l_{h-1})` in radix `n`.
enum Counter {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl Counter {
    fn new(n: u64, h: usize) -> Self {
        match n.checked_pow(h as u32 - 1) {
            Some(size) if size <= DENSE_LIMIT => Counter::Dense(vec![0; size as usize]),
            _ => Counter::Sparse(HashMap::new()),
        }
    }

    #[inline]
    fn bump(&mut self, key: u64) -> u32 {
        match self {
            Counter::Dense(v) => {
                v[key as usize] += 1;
                v[key as usize]
            }
            Counter::Sparse(m) => {
                let c = m.entry(key).or_insert(0);
                *c += 1;
                *c
            }
        }
    }

    #[inline]
    fn unbump(&mut self, key: u64) {
        match self {
            Counter::Dense(v) => v[key as usize] -= 1,
            Counter::Sparse(m) => {
                let c = m.get_mut(&key).expect("unbump of a missing class");
                *c -= 1;
                if *c == 0 {
                    m.remove(&key);
                }
            }
        }
    }
}

/// Incrementally maintained partial C_h[g]-set in `[0, n)`.
struct Partial {
    n: u64,
    h: usize,
    g: u32,
    chosen: Vec<u64>,
    counts: Counter,
    // Keys bumped by each push, for undo.
    journal: Vec<Vec<u64>>,
}

impl Partial {
    fn new(n: u64, h: usize, g: usize) -> Self {
        Partial {
            n,
            h,
            g: g as u32,
            chosen: Vec::new(),
            counts: Counter::new(n, h),
            journal: Vec::new(),
        }
    }

    /// Adds `a` (larger than every chosen element) if the set stays C_h[g].
    fn try_push(&mut self, a: u64) -> bool {
        let mut bumped = Vec::new();
        let mut ok = true;
        if self.chosen.len() + 1 >= self.h {
            let (n, g, chosen, counts) = (self.n, self.g, &self.chosen, &mut self.counts);
            for_each_combination(chosen.len(), self.h - 1, |idx| {
                if !ok {
                    return;
                }
                let base = chosen[idx[0]];
                let key = idx[1..]
                    .iter()
                    .map(|&i| chosen[i] - base)
                    .chain(std::iter::once(a - base))
                    .fold(0u64, |acc, d| acc * n + d);
                bumped.push(key);
                if counts.bump(key) >= g {
                    ok = false;
                }
            });
        }
        if !ok {
            for key in bumped {
                self.counts.unbump(key);
            }
            return false;
        }
        self.chosen.push(a);
        self.journal.push(bumped);
        true
    }

    fn pop(&mut self) {
        self.chosen.pop();
        for key in self.journal.pop().expect("pop without push") {
            self.counts.unbump(key);
        }
    }
}

fn check_params(n: u64, h: usize, g: usize) -> Result<()> {
    if !(g >= h && h >= 2) {
        return Err(parameter(format!("need g >= h >= 2, got h={h}, g={g}")));
    }
    if n == 0 {
        return Err(parameter("n must be at least 1"));
    }
    if n > 4096 {
        return Err(parameter(format!("n = {n} is beyond the supported search range")));
    }
    Ok(())
}

struct Search<'a> {
    n: u64,
    partial: Partial,
    best: Vec<u64>,
    nodes: u64,
    node_cap: u64,
    aborted: bool,
    // Optimal sizes for shorter intervals: table[len] bounds what fits in len slots.
    table: &'a [usize],
}

impl Search<'_> {
    fn bound(&self, next: u64) -> usize {
        let remaining = (self.n - next) as usize;
        let extra = self.table.get(remaining).copied().unwrap_or(remaining).min(remaining);
        self.partial.chosen.len() + extra
    }

    fn dfs(&mut self, next: u64) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_cap {
            self.aborted = true;
            return;
        }
        if self.partial.chosen.len() > self.best.len() {
            self.best = self.partial.chosen.clone();
        }
        if next == self.n || self.bound(next) <= self.best.len() {
            return;
        }
        if self.partial.try_push(next) {
            self.dfs(next + 1);
            self.partial.pop();
        }
        self.dfs(next + 1);
    }
}

/// Exact maximum C_h[g]-set in `[n]`. Among maximum sets the
/// lexicographically smallest is returned. When the node budget runs out the
/// best set so far is returned with `optimal = false`.
pub fn max_chg_exact(n: u64, h: usize, g: usize, node_cap: u64) -> Result<SearchResult> {
    max_chg_with_table(n, h, g, node_cap, &[])
}

fn max_chg_with_table(n: u64, h: usize, g: usize, node_cap: u64, table: &[usize]) -> Result<SearchResult> {
    check_params(n, h, g)?;
    let mut search = Search {
        n,
        partial: Partial::new(n, h, g),
        best: Vec::new(),
        nodes: 0,
        node_cap,
        aborted: false,
        table,
    };
    // Any C_h[g]-set can be translated to start at 0.
    search.partial.try_push(0);
    search.dfs(1);
    let optimal = !search.aborted;
    let group = GroupDescriptor::interval(n)?;
    Ok(SearchResult {
        n,
        h,
        g,
        best_size: search.best.len(),
        best_set: GSet::from_values(group, search.best)?,
        nodes_explored: search.nodes,
        optimal,
    })
}

/// Scans `0..n` and keeps every element that leaves the set C_h[g].
pub fn greedy_chg(n: u64, h: usize, g: usize) -> Result<GSet> {
    check_params(n, h, g)?;
    let mut partial = Partial::new(n, h, g);
    for a in 0..n {
        partial.try_push(a);
    }
    GSet::from_values(GroupDescriptor::interval(n)?, partial.chosen)
}

/// Exact results for `n = 1..=n_max`. Each run reuses the smaller optima to
/// bound how many elements fit in the unscanned tail.
pub fn max_table(n_max: u64, h: usize, g: usize, node_cap: u64) -> Result<Vec<SearchResult>> {
    let mut results: Vec<SearchResult> = Vec::new();
    // table[len] = best size for an interval of len slots, valid only while all runs are optimal.
    let mut table = vec![0usize];
    for n in 1..=n_max {
        let res = max_chg_with_table(n, h, g, node_cap, &table)?;
        if let Some(prev) = results.last() {
            if prev.optimal && res.optimal && !(prev.best_size..=prev.best_size + 1).contains(&res.best_size) {
                return Err(Error::Internal(format!(
                    "table step from n={} ({}) to n={n} ({}) is not 0 or 1",
                    prev.n, prev.best_size, res.best_size
                )));
            }
        }
        if res.optimal && table.len() == n as usize {
            table.push(res.best_size);
        }
        results.push(res);
    }
    Ok(results)
}
