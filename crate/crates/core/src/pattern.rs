//! Translation classes of h-subsets.
//!
//! Two subsets are in the same class when one is a translate of the other.
//! Each class is named by its canonical pattern: for genuine groups the
//! lexicographically smallest of the candidates `X - x` (`x` in `X`), for the
//! integer interval `X - min(X)`. A class's bases are every `k` with
//! `pattern + k` inside the host set; a subset fixed by a nontrivial
//! translation (a union of cosets) contributes one base per stabilizing shift.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{structural, Result};
use crate::group::{Elem, GSet, GroupDescriptor, KeyOps};

/// Canonical pattern of a translation class plus every base at which it
/// occurs inside the host set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternClass {
    pub pattern: GSet,
    pub bases: Vec<Elem>,
}

pub(crate) type PatternKey = Box<[u64]>;

/// Writes the canonical pattern of the sorted key slice `xs` into `pattern`
/// and every shift `s` with `pattern + s = xs` into `shifts` (ascending).
#[inline]
pub(crate) fn canonical_into(ops: KeyOps, xs: &[u64], pattern: &mut Vec<u64>, shifts: &mut Vec<u64>) {
    pattern.clear();
    shifts.clear();
    if let KeyOps::Integer = ops {
        let base = xs[0];
        pattern.extend(xs.iter().map(|&x| x - base));
        shifts.push(base);
        return;
    }
    let mut cand = Vec::with_capacity(xs.len());
    for &x in xs {
        cand.clear();
        cand.extend(xs.iter().map(|&y| ops.sub(y, x)));
        cand.sort_unstable();
        if shifts.is_empty() || cand < *pattern {
            pattern.clear();
            pattern.extend_from_slice(&cand);
            shifts.clear();
            shifts.push(x);
        } else if cand == *pattern {
            shifts.push(x);
        }
    }
    shifts.sort_unstable();
}

/// Calls `f` with every `r`-subset of `0..m` in colexicographic order.
pub(crate) fn for_each_combination(m: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if r > m {
        return;
    }
    let mut c: Vec<usize> = (0..r).collect();
    loop {
        f(&c);
        let mut j = 0;
        while j < r {
            let limit = if j + 1 < r { c[j + 1] } else { m };
            if c[j] + 1 < limit {
                break;
            }
            j += 1;
        }
        if j == r {
            return;
        }
        c[j] += 1;
        for (i, slot) in c.iter_mut().enumerate().take(j) {
            *slot = i;
        }
    }
}

/// Enumerates all `h`-subsets of the sorted `keys`, grouped by largest member
/// (one parallel task per largest member), and folds the per-subset
/// canonical pattern and shifts into a class map. The merged map does not
/// depend on scheduling.
pub(crate) fn fold_classes<V, R, M>(ops: KeyOps, keys: &[u64], h: usize, record: R, merge: M) -> HashMap<PatternKey, V>
where
    V: Default + Send,
    R: Fn(&mut V, &[u64]) + Sync,
    M: Fn(&mut V, V) + Sync,
{
    if h == 0 || h > keys.len() {
        return HashMap::new();
    }
    (h - 1..keys.len())
        .into_par_iter()
        .fold(HashMap::new, |mut map: HashMap<PatternKey, V>, top| {
            let mut subset = vec![0u64; h];
            let mut pattern = Vec::with_capacity(h);
            let mut shifts = Vec::with_capacity(h);
            subset[h - 1] = keys[top];
            for_each_combination(top, h - 1, |idx| {
                for (slot, &i) in subset.iter_mut().zip(idx) {
                    *slot = keys[i];
                }
                canonical_into(ops, &subset, &mut pattern, &mut shifts);
                match map.get_mut(pattern.as_slice()) {
                    Some(v) => record(v, &shifts),
                    None => {
                        let mut v = V::default();
                        record(&mut v, &shifts);
                        map.insert(pattern.clone().into_boxed_slice(), v);
                    }
                }
            });
            map
        })
        .reduce(HashMap::new, |a, b| {
            let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            for (k, v) in small {
                match big.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        big.insert(k, v);
                    }
                }
            }
            big
        })
}

/// Number of bases of every class.
pub(crate) fn class_counts(ops: KeyOps, keys: &[u64], h: usize) -> HashMap<PatternKey, u64> {
    fold_classes(ops, keys, h, |c: &mut u64, s| *c += s.len() as u64, |a, b| *a += b)
}

/// Canonical representative of the translation class of `x`, and the shift
/// with `pattern + shift = x` (the smallest one when several exist).
pub fn canonicalize(group: GroupDescriptor, x: &GSet) -> Result<(GSet, Elem)> {
    if x.is_empty() {
        return Err(structural("cannot canonicalize an empty set"));
    }
    let keys = x.keys();
    let (mut pattern, mut shifts) = (Vec::new(), Vec::new());
    canonical_into(group.key_ops(), &keys, &mut pattern, &mut shifts);
    let pattern_group = pattern_group(group, &pattern);
    Ok((GSet::from_keys(pattern_group, pattern)?, group.decode(shifts[0])))
}

fn pattern_group(group: GroupDescriptor, pattern: &[u64]) -> GroupDescriptor {
    match group {
        GroupDescriptor::IntegerInterval { n } => GroupDescriptor::IntegerInterval {
            n: n.max(pattern.last().map_or(0, |&v| v + 1)),
        },
        g => g,
    }
}

/// Partitions the `h`-subsets of `a` into translation classes, sorted by
/// canonical pattern. Returns an empty list when `h > |a|`.
pub fn enumerate_pattern_classes(group: GroupDescriptor, a: &GSet, h: usize) -> Result<Vec<PatternClass>> {
    if h == 0 {
        return Err(structural("pattern size must be at least 1"));
    }
    if a.group() != group {
        return Err(structural(format!("set lives in {}, not {group}", a.group())));
    }
    let keys = a.keys();
    let map = fold_classes(
        group.key_ops(),
        &keys,
        h,
        |v: &mut Vec<u64>, s| v.extend_from_slice(s),
        |a, b| a.extend(b),
    );
    let mut classes: Vec<(PatternKey, Vec<u64>)> = map.into_iter().collect();
    classes.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    classes
        .into_iter()
        .map(|(pattern, mut bases)| {
            bases.sort_unstable();
            bases.dedup();
            Ok(PatternClass {
                pattern: GSet::from_keys(pattern_group(group, &pattern), pattern.iter().copied())?,
                bases: bases.into_iter().map(|k| group.decode(k)).collect(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::translate;

    fn z(n: u64, vals: &[u64]) -> GSet {
        GSet::from_values(GroupDescriptor::interval(n).unwrap(), vals.iter().copied()).unwrap()
    }

    #[test]
    fn colex_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| seen.push(c.to_vec()));
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]
        );
        let mut count = 0;
        for_each_combination(3, 0, |c| {
            assert!(c.is_empty());
            count += 1;
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn canonicalize_interval_subtracts_minimum() {
        let (p, s) = canonicalize(GroupDescriptor::interval(10).unwrap(), &z(10, &[4, 7, 9])).unwrap();
        assert_eq!(p.values(), vec![0, 3, 5]);
        assert_eq!(s, Elem::scalar(4));
    }

    #[test]
    fn canonicalize_cyclic_translates_agree() {
        let g = GroupDescriptor::cyclic(7).unwrap();
        let a = GSet::from_values(g, [1, 3]).unwrap();
        let b = GSet::from_values(g, [4, 6]).unwrap();
        assert_eq!(canonicalize(g, &a).unwrap().0, canonicalize(g, &b).unwrap().0);
        assert_eq!(canonicalize(g, &a).unwrap().0.values(), vec![0, 2]);
    }

    #[test]
    fn canonicalize_cyclic_lex_minimum() {
        // Oracle: every shift of {0,1,2} in Z_5, minimum of the sorted tuples.
        let g = GroupDescriptor::cyclic(5).unwrap();
        let x = [0u64, 1, 2];
        let best = x
            .iter()
            .map(|&s| {
                let mut v: Vec<u64> = x.iter().map(|&y| (y + 5 - s) % 5).collect();
                v.sort();
                v
            })
            .min()
            .unwrap();
        assert_eq!(best, vec![0, 1, 2]);
        let (p, shift) = canonicalize(g, &GSet::from_values(g, x).unwrap()).unwrap();
        assert_eq!(p.values(), best);
        assert_eq!(shift, Elem::scalar(0));
    }

    #[test]
    fn canonicalize_empty_is_error() {
        let g = GroupDescriptor::cyclic(5).unwrap();
        assert!(canonicalize(g, &GSet::new(g, vec![]).unwrap()).is_err());
    }

    #[test]
    fn classes_of_small_interval() {
        let g = GroupDescriptor::interval(5).unwrap();
        // {1,2,3} in 1-based terms.
        let classes = enumerate_pattern_classes(g, &z(5, &[0, 1, 2]), 2).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].pattern.values(), vec![0, 1]);
        assert_eq!(classes[0].bases, vec![Elem::scalar(0), Elem::scalar(1)]);
        assert_eq!(classes[1].pattern.values(), vec![0, 2]);
        assert_eq!(classes[1].bases, vec![Elem::scalar(0)]);

        let ap = enumerate_pattern_classes(g, &z(5, &[0, 1, 2, 3, 4]), 2).unwrap();
        assert_eq!(ap[0].pattern.values(), vec![0, 1]);
        assert_eq!(ap[0].bases.len(), 4);

        assert!(enumerate_pattern_classes(g, &z(5, &[0, 1]), 3).unwrap().is_empty());
    }

    #[test]
    fn full_cyclic_group_has_full_orbits() {
        let g = GroupDescriptor::cyclic(5).unwrap();
        let all = GSet::from_values(g, 0..5).unwrap();
        let classes = enumerate_pattern_classes(g, &all, 2).unwrap();
        // Brute force: classes of 2-subsets of Z_5 are the differences {±1}, {±2}.
        let mut brute: Vec<Vec<u64>> = Vec::new();
        for a in 0..5u64 {
            for b in a + 1..5 {
                let mut best = None;
                for s in [a, b] {
                    let mut v = vec![(a + 5 - s) % 5, (b + 5 - s) % 5];
                    v.sort();
                    best = Some(best.map_or(v.clone(), |x: Vec<u64>| x.min(v)));
                }
                brute.push(best.unwrap());
            }
        }
        brute.sort();
        brute.dedup();
        assert_eq!(classes.len(), brute.len());
        for c in &classes {
            assert_eq!(c.bases.len(), 5);
        }
    }

    #[test]
    fn periodic_pattern_counts_every_stabilizing_base() {
        // {0,2} in Z_4 is fixed by +2, so both 0 and 2 are bases of the one subset.
        let g = GroupDescriptor::cyclic(4).unwrap();
        let classes = enumerate_pattern_classes(g, &GSet::from_values(g, [0, 2]).unwrap(), 2).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].bases, vec![Elem::scalar(0), Elem::scalar(2)]);
    }

    #[test]
    fn translate_examples() {
        let g = GroupDescriptor::cyclic(5).unwrap();
        let x = GSet::from_values(g, [0, 1]).unwrap();
        assert_eq!(translate(g, &x, &Elem::scalar(3)).unwrap().values(), vec![3, 4]);
        assert_eq!(translate(g, &x, &g.identity()).unwrap(), x);

        let p = GroupDescriptor::product(3, 2).unwrap();
        let x = GSet::new(p, vec![Elem(vec![0, 0]), Elem(vec![1, 2])]).unwrap();
        let t = translate(p, &x, &Elem(vec![2, 1])).unwrap();
        assert_eq!(t.elems(), &[Elem(vec![0, 0]), Elem(vec![2, 1])]);
    }
}
