//! Explicit constructions: sphere sets in `F_p^3`, norm sets in `F_{q^h}`,
//! the carry-free digit embedding into the integers, a Sidon baseline and
//! the randomized deletion construction of weak sets.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{np_density, Density};
use crate::error::{parameter, structural, AttemptStats, Error, Result};
use crate::field::{is_prime, quadratic_character, ExtField};
use crate::group::{Elem, GSet, GroupDescriptor, KeyOps};
use crate::pattern::fold_classes;
use crate::verify::{disjoint_selection, verify_weak_chg, DEFAULT_SUBSET_CAP};

/// Default cap on the size of an enumerated ambient group.
pub const DEFAULT_CONSTRUCTION_CAP: u64 = 1 << 24;

/// Generator used for every randomized construction.
pub const RNG_NAME: &str =
    "rand_chacha 0.3 ChaCha8Rng; attempt seed = splitmix64(seed + (attempt+1)*0x9e3779b97f4a7c15)";

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(parameter(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Smallest non-residue when `p = 1 (mod 4)`, otherwise the smallest nonzero
/// residue (which is 1).
pub fn sphere_alpha(p: u64) -> Result<u64> {
    require_odd_prime(p)?;
    let want = if p % 4 == 1 { -1 } else { 1 };
    for a in 1..p {
        if quadratic_character(p, a)? == want {
            return Ok(a);
        }
    }
    Err(Error::Internal(format!("no suitable alpha mod {p}")))
}

/// `{x in F_p^3 : x1^2 + x2^2 + x3^2 = alpha}`.
pub fn sphere_set(p: u64, cap: u64) -> Result<GSet> {
    let alpha = sphere_alpha(p)?;
    let order = p.checked_pow(3).unwrap_or(u64::MAX);
    if order > cap {
        return Err(Error::Resource {
            what: "sphere ambient group",
            needed: order as u128,
            cap: cap as u128,
        });
    }
    let group = GroupDescriptor::product(p, 3)?;
    let sq: Vec<u64> = (0..p).map(|x| x * x % p).collect();
    let mut elems = Vec::new();
    for x1 in 0..p {
        for x2 in 0..p {
            let partial = (sq[x1 as usize] + sq[x2 as usize]) % p;
            for x3 in 0..p {
                if (partial + sq[x3 as usize]) % p == alpha {
                    elems.push(Elem(vec![x1, x2, x3]));
                }
            }
        }
    }
    if (elems.len() as u64) < p * p - p {
        return Err(Error::Internal(format!(
            "sphere mod {p} has only {} points",
            elems.len()
        )));
    }
    Ok(GSet::from_sorted_unchecked(group, elems))
}

/// Norm-one elements of `F_{q^h}`, as a subset of `Z_q^h`, together with
/// the guaranteed multiplicity parameter `g = h! + 1`.
pub fn norm_set(q: u64, h: usize, cap: u64) -> Result<(GSet, usize)> {
    let field = ExtField::new(q, h, cap)?;
    let group = field.additive_group();
    let mut elems = Vec::new();
    for x in field.elements() {
        if field.norm(&x)? == 1 {
            elems.push(field.additive_coords(&x));
        }
    }
    let expected = (field.order() - 1) / (q - 1);
    if elems.len() as u64 != expected {
        return Err(Error::Internal(format!(
            "norm set has {} elements, expected {expected}",
            elems.len()
        )));
    }
    let g = (1..=h)
        .try_fold(1usize, |acc, i| acc.checked_mul(i))
        .and_then(|f| f.checked_add(1));
    let g = g.ok_or_else(|| parameter(format!("{h}! + 1 overflows")))?;
    Ok((GSet::new(group, elems)?, g))
}

/// Positional map `x -> x_1 + base x_2 + base^2 x_3 + ...` from `Z_m^d` into
/// the integers. With `base >= 2m` no digit sum of two elements carries. The
/// image lies in the interval `[0, m base^(d-1))`.
pub fn freiman_embed(base: u64, x: &GSet) -> Result<GSet> {
    let GroupDescriptor::Product { q: m, d } = x.group() else {
        return Err(structural(format!(
            "digit embedding needs a product group, got {}",
            x.group()
        )));
    };
    if base < 2 * m {
        return Err(parameter(format!(
            "base {base} < 2*{m}: sums of two elements would carry"
        )));
    }
    let bound = base
        .checked_pow(d - 1)
        .and_then(|b| b.checked_mul(m))
        .ok_or_else(|| parameter(format!("{m} * {base}^{} overflows", d - 1)))?;
    let image = x.elems().iter().map(|e| digit_value(base, e.coords()));
    let out = GSet::from_values(GroupDescriptor::interval(bound)?, image)?;
    if out.len() != x.len() {
        return Err(Error::Internal("digit embedding is not injective".into()));
    }
    Ok(out)
}

/// Positional value with the first coordinate least significant.
pub fn digit_value(base: u64, coords: &[u64]) -> u64 {
    coords.iter().rev().fold(0, |acc, &c| acc * base + c)
}

/// Largest odd prime `p` with `4p^3 <= n`.
pub fn c33_prime(n: u64) -> Result<u64> {
    if n < 108 {
        return Err(parameter(format!("n = {n} < 108 leaves no odd prime with 4p^3 <= n")));
    }
    let mut p = ((n / 4) as f64).cbrt() as u64 + 1;
    while 4 * p.pow(3) > n {
        p -= 1;
    }
    while p >= 3 {
        if p % 2 == 1 && is_prime(p) {
            return Ok(p);
        }
        p -= 1;
    }
    Err(Error::Internal(format!("no odd prime below cube root of {n}/4")))
}

/// Sphere set for the largest admissible prime, embedded into `[n]` with
/// base `2p`. Returns the prime used.
pub fn embedded_c33(n: u64, cap: u64) -> Result<(GSet, u64)> {
    let p = c33_prime(n)?;
    let image = freiman_embed(2 * p, &sphere_set(p, cap)?)?;
    let set = GSet::new(GroupDescriptor::interval(n)?, image.elems().to_vec())?;
    Ok((set, p))
}

/// `{2pi + (i^2 mod p) : 0 <= i < p}`, a Sidon set in `[0, 2p^2)`.
pub fn sidon_baseline(p: u64) -> Result<GSet> {
    if !is_prime(p) {
        return Err(parameter(format!("{p} is not prime")));
    }
    let group = GroupDescriptor::interval(2 * p * p)?;
    GSet::from_values(group, (0..p).map(|i| 2 * p * i + i * i % p))
}

/// Elements `m` of `s` that are the largest base of `g` pairwise disjoint
/// translates of a common `h`-element pattern inside `s`.
pub fn detect_bad(s: &GSet, h: usize, g: usize) -> Result<GSet> {
    if h < 2 || g < 2 {
        return Err(parameter(format!("need h, g >= 2, got h={h}, g={g}")));
    }
    if s.group().is_group() {
        return Err(structural("bad elements are defined for integer sets"));
    }
    if s.len() < g * h {
        return Ok(GSet::from_sorted_unchecked(s.group(), Vec::new()));
    }
    let keys = s.keys();
    let classes = fold_classes(
        KeyOps::Integer,
        &keys,
        h,
        |v: &mut Vec<u64>, shifts| v.extend_from_slice(shifts),
        |a, b| a.extend(b),
    );
    let mut heavy: Vec<_> = classes.into_iter().filter(|(_, b)| b.len() >= g).collect();
    heavy.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let bad: BTreeSet<u64> = heavy
        .par_iter()
        .flat_map_iter(|(pattern, bases)| {
            let mut bases = bases.clone();
            bases.sort_unstable();
            let translates: Vec<Vec<u64>> = bases
                .iter()
                .map(|&b| pattern.iter().map(|&x| x + b).collect())
                .collect();
            let mut found = Vec::new();
            for top in g - 1..bases.len() {
                let below: Vec<usize> = (0..top)
                    .filter(|&i| translates[i].iter().all(|x| translates[top].binary_search(x).is_err()))
                    .collect();
                if disjoint_selection(&translates, &below, g - 1).is_some() {
                    found.push(bases[top]);
                }
            }
            found
        })
        .collect();
    GSet::from_values(s.group(), bad)
}

/// Deterministic child seed of attempt `attempt`.
pub fn attempt_seed(seed: u64, attempt: u32) -> u64 {
    let mut z = seed.wrapping_add((attempt as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Includes each element of `[0, n)` independently with probability `p`,
/// one uniform draw per element.
pub fn sample_subset(n: u64, p: f64, seed: u64) -> Result<GSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = (0..n).filter(|_| rng.gen::<f64>() < p);
    GSet::from_values(GroupDescriptor::interval(n)?, picked)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakOutcome {
    pub set: GSet,
    pub attempts_used: u32,
    pub seed_used: u64,
    pub sampled: usize,
    pub bad: usize,
    pub density: Density,
}

/// Sample-and-delete construction of a weak C_h[g]-set in `[n]`. Accepts
/// the first attempt with `|S| >= np/2` and `|S_bad| <= np/4`.
pub fn weak_random_set(n: u64, h: usize, g: usize, seed: u64, max_attempts: u32) -> Result<WeakOutcome> {
    if !(g >= h && h >= 2) {
        return Err(parameter(format!("need g >= h >= 2, got h={h}, g={g}")));
    }
    let density = np_density(n as f64, h as u32, g as u32)?;
    let mut history = Vec::new();
    for attempt in 0..max_attempts {
        let child = attempt_seed(seed, attempt);
        let s = sample_subset(n, density.p, child)?;
        let bad = detect_bad(&s, h, g)?;
        history.push(AttemptStats {
            attempt,
            seed: child,
            sampled: s.len(),
            bad: bad.len(),
        });
        if (s.len() as f64) < density.np / 2.0 || (bad.len() as f64) > density.np / 4.0 {
            continue;
        }
        let kept: Vec<Elem> = s.elems().iter().filter(|e| !bad.contains(e)).cloned().collect();
        let set = GSet::from_sorted_unchecked(s.group(), kept);
        let verdict = verify_weak_chg(set.group(), &set, h, g, DEFAULT_SUBSET_CAP)?;
        if !verdict.holds {
            return Err(Error::Internal(format!(
                "deletion left a weak violation: {:?}",
                verdict.witness
            )));
        }
        return Ok(WeakOutcome {
            set,
            attempts_used: attempt + 1,
            seed_used: child,
            sampled: s.len(),
            bad: bad.len(),
            density,
        });
    }
    Err(Error::Exhausted { attempts: history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_chg;

    const CAP: u128 = DEFAULT_SUBSET_CAP;

    fn z(n: u64, one_based: &[u64]) -> GSet {
        GSet::from_values(GroupDescriptor::interval(n).unwrap(), one_based.iter().map(|v| v - 1)).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(sphere_alpha(3).unwrap(), 1);
        assert_eq!(sphere_alpha(5).unwrap(), 2);
        assert_eq!(sphere_alpha(7).unwrap(), 1);
        assert_eq!(sphere_alpha(13).unwrap(), 2);
        assert!(sphere_alpha(2).is_err());
        assert!(sphere_alpha(9).is_err());
    }

    #[test]
    fn sphere_counts_match_brute_force() {
        for p in [3u64, 5, 7, 11] {
            let alpha = sphere_alpha(p).unwrap();
            let mut count = 0;
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        if (a * a + b * b + c * c) % p == alpha {
                            count += 1;
                        }
                    }
                }
            }
            let s = sphere_set(p, DEFAULT_CONSTRUCTION_CAP).unwrap();
            assert_eq!(s.len(), count);
            assert!(s.len() as u64 >= p * p - p);
        }
        assert_eq!(sphere_set(3, DEFAULT_CONSTRUCTION_CAP).unwrap().len(), 6);
        assert!(matches!(sphere_set(31, 1000), Err(Error::Resource { .. })));
    }

    #[test]
    fn norm_set_sizes() {
        assert_eq!(norm_set(2, 2, 4096).unwrap().0.len(), 3);
        let (a, g) = norm_set(3, 2, 4096).unwrap();
        assert_eq!((a.len(), g), (4, 3));
        assert_eq!(norm_set(2, 3, 4096).unwrap().0.len(), 7);
    }

    #[test]
    fn freiman_examples() {
        let g = GroupDescriptor::product(3, 2).unwrap();
        let x = GSet::new(g, vec![Elem(vec![2, 1]), Elem(vec![0, 0])]).unwrap();
        let img = freiman_embed(6, &x).unwrap();
        assert_eq!(img.values(), vec![0, 8]);
        assert_eq!(img.group(), GroupDescriptor::IntegerInterval { n: 18 });
        assert_eq!(digit_value(6, &[1, 0]) + digit_value(6, &[2, 2]), 15);
        assert_eq!(digit_value(6, &[2, 1]) + digit_value(6, &[1, 1]), 15);
        assert!(matches!(freiman_embed(5, &x), Err(Error::Parameter(_))));
    }

    #[test]
    fn c33_prime_selection() {
        assert_eq!(c33_prime(500).unwrap(), 5);
        assert_eq!(c33_prime(108).unwrap(), 3);
        assert_eq!(c33_prime(5488).unwrap(), 11);
        assert_eq!(c33_prime(8787).unwrap(), 11);
        assert_eq!(c33_prime(8788).unwrap(), 13);
        assert!(c33_prime(107).is_err());
    }

    #[test]
    fn embedded_examples() {
        let (a, p) = embedded_c33(500, DEFAULT_CONSTRUCTION_CAP).unwrap();
        assert_eq!(p, 5);
        assert!(a.len() >= 20);
        assert!(a.values().iter().all(|&v| v < 500));
        let (b, _) = embedded_c33(108, DEFAULT_CONSTRUCTION_CAP).unwrap();
        assert_eq!(b.len(), 6);
        assert!(verify_chg(b.group(), &b, 3, 3, CAP).unwrap().holds);
        assert!(embedded_c33(100, DEFAULT_CONSTRUCTION_CAP).is_err());
    }

    #[test]
    fn sidon_baseline_examples() {
        assert_eq!(sidon_baseline(2).unwrap().values(), vec![0, 5]);
        assert_eq!(sidon_baseline(3).unwrap().values(), vec![0, 7, 13]);
        for p in [5u64, 7, 11, 13] {
            let s = sidon_baseline(p).unwrap();
            assert_eq!(s.len() as u64, p);
            assert!(verify_chg(s.group(), &s, 2, 2, CAP).unwrap().holds);
        }
    }

    #[test]
    fn detect_bad_examples() {
        // 1-based: {1,2},{3,4} are disjoint translates of {0,1} and {1,3},{2,4}
        // of {0,2}, so 3 and 2 are both bad.
        assert_eq!(detect_bad(&z(4, &[1, 2, 3, 4]), 2, 2).unwrap().values(), vec![1, 2]);
        assert!(detect_bad(&z(8, &[1, 2, 4, 8]), 2, 2).unwrap().is_empty());
        assert!(detect_bad(&z(5, &[1, 2, 3]), 2, 2).unwrap().is_empty());
        assert!(detect_bad(&z(5, &[1, 2, 3]), 2, 1).is_err());
    }

    #[test]
    fn attempt_seeds_differ() {
        let seeds: BTreeSet<u64> = (0..64).map(|a| attempt_seed(7, a)).collect();
        assert_eq!(seeds.len(), 64);
        assert_eq!(attempt_seed(7, 3), attempt_seed(7, 3));
    }

    #[test]
    fn weak_random_set_is_reproducible() {
        let a = weak_random_set(100_000, 2, 2, 11, 64).unwrap();
        let b = weak_random_set(100_000, 2, 2, 11, 64).unwrap();
        assert_eq!(a, b);
        assert!(a.set.len() as f64 > a.density.np / 4.0);
        assert!(verify_weak_chg(a.set.group(), &a.set, 2, 2, CAP).unwrap().holds);
    }

    #[test]
    fn weak_random_set_errors() {
        assert!(matches!(weak_random_set(0, 2, 2, 1, 4), Err(Error::Parameter(_))));
        match weak_random_set(100_000, 2, 2, 1, 0) {
            Err(Error::Exhausted { attempts }) => assert!(attempts.is_empty()),
            other => panic!("{other:?}"),
        }
    }
}
