//! Exact decision procedures for the C_h[g] and weak C_h[g] properties and
//! the difference-matrix correspondence with the Zarankiewicz problem.
//!
//! `A` is C_h[g] iff every translation class of h-subsets of `A` has at most
//! `g - 1` bases. It is weak C_h[g] iff no class contains `g` pairwise
//! disjoint translates.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{parameter, structural, Error, Result};
use crate::group::{Elem, GSet, GroupDescriptor, KeyOps};
use crate::pattern::{class_counts, PatternKey};

/// Default cap on enumerated h-subsets.
pub const DEFAULT_SUBSET_CAP: u128 = 100_000_000;
/// Default cap on the group order for difference matrices.
pub const DEFAULT_ZMATRIX_ORDER_CAP: u64 = 512;

/// A violating configuration: `pattern + b` lies in the host set for every
/// base `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub pattern: GSet,
    pub bases: Vec<Elem>,
}

impl Witness {
    /// Re-checks the witness by direct containment. With `disjoint` the
    /// translates must also be pairwise disjoint.
    pub fn is_valid_in(&self, host: &GSet, disjoint: bool) -> bool {
        let group = host.group();
        let distinct: HashSet<&Elem> = self.bases.iter().collect();
        if distinct.len() != self.bases.len() {
            return false;
        }
        let mut seen = HashSet::new();
        for b in &self.bases {
            let mut translate = Vec::with_capacity(self.pattern.len());
            for x in self.pattern.elems() {
                match group.add(x, b) {
                    Ok(y) if host.contains(&y) => translate.push(y),
                    _ => return false,
                }
            }
            if disjoint && !translate.into_iter().all(|y| seen.insert(y)) {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn holds() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    fn fails(witness: Witness) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn check_params(group: GroupDescriptor, a: &GSet, h: usize, g: usize) -> Result<()> {
    if !(g >= h && h >= 2) {
        return Err(parameter(format!("need g >= h >= 2, got h={h}, g={g}")));
    }
    if a.group() != group {
        return Err(structural(format!("set lives in {}, not {group}", a.group())));
    }
    Ok(())
}

fn check_cap(a: &GSet, h: usize, cap: u128) -> Result<()> {
    let needed = binomial(a.len() as u64, h as u64);
    if needed > cap {
        return Err(Error::Resource {
            what: "h-subsets",
            needed,
            cap,
        });
    }
    Ok(())
}

/// Membership oracle over keys.
struct KeySet {
    ops: KeyOps,
    sorted: Vec<u64>,
}

impl KeySet {
    fn new(a: &GSet) -> Self {
        KeySet {
            ops: a.group().key_ops(),
            sorted: a.keys(),
        }
    }

    fn contains(&self, k: u64) -> bool {
        self.sorted.binary_search(&k).is_ok()
    }

    /// Keys of `pattern + base` if it lies inside the set.
    fn translate_inside(&self, pattern: &[u64], base: u64) -> Option<Vec<u64>> {
        let t: Vec<u64> = pattern.iter().map(|&x| self.ops.add(x, base)).collect();
        t.iter().all(|&y| self.contains(y)).then_some(t)
    }

    /// Every base of `pattern` in the set, ascending. The pattern contains
    /// the identity, so bases are members.
    fn bases_of(&self, pattern: &[u64]) -> Vec<u64> {
        self.sorted
            .iter()
            .copied()
            .filter(|&b| self.translate_inside(pattern, b).is_some())
            .collect()
    }
}

fn witness(group: GroupDescriptor, pattern: &[u64], bases: impl IntoIterator<Item = u64>) -> Result<Witness> {
    let pattern_group = match group {
        GroupDescriptor::IntegerInterval { n } => GroupDescriptor::IntegerInterval {
            n: n.max(pattern.last().map_or(0, |&v| v + 1)),
        },
        g => g,
    };
    Ok(Witness {
        pattern: GSet::from_keys(pattern_group, pattern.iter().copied())?,
        bases: bases.into_iter().map(|k| group.decode(k)).collect(),
    })
}

/// Classes with at least `g` bases, in ascending pattern-key order.
fn heavy_classes(a: &GSet, h: usize, g: usize) -> Vec<PatternKey> {
    let counts = class_counts(a.group().key_ops(), &a.keys(), h);
    let mut heavy: Vec<PatternKey> = counts
        .into_iter()
        .filter(|&(_, c)| c >= g as u64)
        .map(|(k, _)| k)
        .collect();
    heavy.sort_unstable();
    heavy
}

/// Exact C_h[g] test. The reported witness is the smallest violating
/// pattern with its `g` smallest bases.
pub fn verify_chg(group: GroupDescriptor, a: &GSet, h: usize, g: usize, cap: u128) -> Result<Verdict> {
    check_params(group, a, h, g)?;
    check_cap(a, h, cap)?;
    let heavy = heavy_classes(a, h, g);
    let Some(pattern) = heavy.first() else {
        return Ok(Verdict::holds());
    };
    let set = KeySet::new(a);
    let bases = set.bases_of(pattern);
    if bases.len() < g {
        return Err(Error::Internal(format!(
            "class {pattern:?} counted at least {g} bases but has {}",
            bases.len()
        )));
    }
    Ok(Verdict::fails(witness(group, pattern, bases.into_iter().take(g))?))
}

/// Finds `need` pairwise disjoint translates among `translates` (each a
/// sorted key list), restricted to the indices in `candidates`. Returns the
/// lexicographically first selection.
pub(crate) fn disjoint_selection(translates: &[Vec<u64>], candidates: &[usize], need: usize) -> Option<Vec<usize>> {
    fn disjoint(a: &[u64], b: &[u64]) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    fn dfs(t: &[Vec<u64>], cand: &[usize], start: usize, need: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == need {
            return true;
        }
        for pos in start..cand.len() {
            if cand.len() - pos < need - chosen.len() {
                return false;
            }
            let i = cand[pos];
            if chosen.iter().all(|&c| disjoint(&t[c], &t[i])) {
                chosen.push(i);
                if dfs(t, cand, pos + 1, need, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::with_capacity(need);
    dfs(translates, candidates, 0, need, &mut chosen).then_some(chosen)
}

fn sorted_translate(set: &KeySet, pattern: &[u64], base: u64) -> Vec<u64> {
    let mut t = set
        .translate_inside(pattern, base)
        .expect("base was taken from the class");
    t.sort_unstable();
    t
}

/// Exact weak C_h[g] test.
pub fn verify_weak_chg(group: GroupDescriptor, a: &GSet, h: usize, g: usize, cap: u128) -> Result<Verdict> {
    check_params(group, a, h, g)?;
    check_cap(a, h, cap)?;
    let heavy = heavy_classes(a, h, g);
    let set = KeySet::new(a);
    let found = heavy.par_iter().find_map_first(|pattern| {
        let bases = set.bases_of(pattern);
        let translates: Vec<Vec<u64>> = bases.iter().map(|&b| sorted_translate(&set, pattern, b)).collect();
        let all: Vec<usize> = (0..bases.len()).collect();
        disjoint_selection(&translates, &all, g)
            .map(|sel| (pattern.clone(), sel.into_iter().map(|i| bases[i]).collect::<Vec<_>>()))
    });
    match found {
        None => Ok(Verdict::holds()),
        Some((pattern, bases)) => Ok(Verdict::fails(witness(group, &pattern, bases)?)),
    }
}

/// Reads an interval set as residues modulo `2n`.
pub fn interval_to_cyclic(a: &GSet) -> Result<GSet> {
    let GroupDescriptor::IntegerInterval { n } = a.group() else {
        return Err(structural(format!("{} is not an integer interval", a.group())));
    };
    let cyclic = GroupDescriptor::cyclic(2 * n)?;
    GSet::new(cyclic, a.elems().to_vec())
}

/// The `n x n` 0-1 matrix with a one at `(i, j)` iff `b_i + b_j` lies in
/// `A`, where `b_0, ..., b_{n-1}` enumerate the group in key order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZMatrix {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    group: GroupDescriptor,
    set: GSet,
}

impl ZMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> GroupDescriptor {
        self.group
    }

    pub fn set(&self) -> &GSet {
        &self.set
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.row(i)[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|w| w.count_ones() as u64).sum())
            .collect()
    }

    pub fn ones(&self) -> u64 {
        self.rows.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Plain PBM (`P1`) rendering.
    pub fn to_pbm(&self) -> String {
        let mut out = format!("P1\n{} {}\n", self.n, self.n);
        for i in 0..self.n {
            let line: Vec<&str> = (0..self.n).map(|j| if self.get(i, j) { "1" } else { "0" }).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    fn column_bits(&self, j: usize) -> Vec<u64> {
        let mut col = vec![0u64; self.words];
        for i in 0..self.n {
            if self.get(i, j) {
                col[i / 64] |= 1 << (i % 64);
            }
        }
        col
    }
}

pub fn build_zmatrix(group: GroupDescriptor, a: &GSet, order_cap: u64) -> Result<ZMatrix> {
    if !group.is_group() {
        return Err(parameter(
            "difference matrices need a finite group, not an integer interval",
        ));
    }
    if a.group() != group {
        return Err(structural(format!("set lives in {}, not {group}", a.group())));
    }
    let order = group.order();
    if order > order_cap {
        return Err(Error::Resource {
            what: "group order",
            needed: order as u128,
            cap: order_cap as u128,
        });
    }
    let n = order as usize;
    let words = n.div_ceil(64);
    let ops = group.key_ops();
    let mut member = vec![false; n];
    for k in a.keys() {
        member[k as usize] = true;
    }
    let mut rows = vec![0u64; n * words];
    for i in 0..n {
        for j in 0..n {
            if member[ops.add(i as u64, j as u64) as usize] {
                rows[i * words + j / 64] |= 1 << (j % 64);
            }
        }
    }
    let m = ZMatrix {
        n,
        words,
        rows,
        group,
        set: a.clone(),
    };
    if let Some(bad) = m.row_sums().iter().position(|&s| s != a.len() as u64) {
        return Err(Error::Internal(format!(
            "row {bad} of the difference matrix does not sum to |A|"
        )));
    }
    Ok(m)
}

/// Tests whether `m` avoids a `g x h` all-ones submatrix: no `h` columns
/// share `g` rows of ones.
pub fn check_kgh_free(m: &ZMatrix, g: usize, h: usize, cap: u128) -> Result<Verdict> {
    if g == 0 || h == 0 {
        return Err(parameter("submatrix dimensions must be positive"));
    }
    let needed = binomial(m.n as u64, h as u64).saturating_mul(m.n as u128);
    if needed > cap {
        return Err(Error::Resource {
            what: "column subsets x rows",
            needed,
            cap,
        });
    }
    let cols: Vec<Vec<u64>> = (0..m.n).map(|j| m.column_bits(j)).collect();

    fn popcount(v: &[u64]) -> usize {
        v.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn dfs(
        cols: &[Vec<u64>],
        acc: &[u64],
        start: usize,
        h: usize,
        g: usize,
        chosen: &mut Vec<usize>,
    ) -> Option<Vec<u64>> {
        if chosen.len() == h {
            return Some(acc.to_vec());
        }
        for j in start..cols.len() {
            if cols.len() - j < h - chosen.len() {
                break;
            }
            let next: Vec<u64> = acc.iter().zip(&cols[j]).map(|(a, b)| a & b).collect();
            if popcount(&next) < g {
                continue;
            }
            chosen.push(j);
            if let Some(rows) = dfs(cols, &next, j + 1, h, g, chosen) {
                return Some(rows);
            }
            chosen.pop();
        }
        None
    }

    let full: Vec<u64> = (0..m.words)
        .map(|w| {
            let lo = w * 64;
            let bits = (m.n - lo).min(64);
            if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            }
        })
        .collect();
    let mut chosen = Vec::with_capacity(h);
    let Some(rows) = dfs(&cols, &full, 0, h, g, &mut chosen) else {
        return Ok(Verdict::holds());
    };
    let row_ids = (0..m.n).filter(|&i| rows[i / 64] >> (i % 64) & 1 == 1).take(g);
    let group = m.group;
    Ok(Verdict::fails(Witness {
        pattern: GSet::from_keys(group, chosen.iter().map(|&j| j as u64))?,
        bases: row_ids.map(|i| group.decode(i as u64)).collect(),
    }))
}
