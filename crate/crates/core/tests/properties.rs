use chg_core::bounds::{eq3_group, np_density, thm5_lower};
use chg_core::construct::{detect_bad, freiman_embed, norm_set, sample_subset, sidon_baseline, sphere_set};
use chg_core::field::DEFAULT_FIELD_CAP;
use chg_core::pattern::enumerate_pattern_classes;
use chg_core::verify::{interval_to_cyclic, verify_chg, verify_weak_chg, DEFAULT_SUBSET_CAP};
use chg_core::{canonicalize, translate, Elem, GSet, GroupDescriptor};
use proptest::prelude::*;

fn interval(n: u64, values: &[u64]) -> GSet {
    GSet::from_values(GroupDescriptor::interval(n).unwrap(), values.iter().copied()).unwrap()
}

fn holds(a: &GSet, h: usize, g: usize) -> bool {
    verify_chg(a.group(), a, h, g, DEFAULT_SUBSET_CAP).unwrap().holds
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn subset_of(n: u64) -> impl Strategy<Value = GSet> {
    proptest::collection::btree_set(0..n, 0..=n as usize)
        .prop_map(move |s| GSet::from_values(GroupDescriptor::interval(n).unwrap(), s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdict_is_monotone_in_g(a in subset_of(20), h in 2usize..4) {
        let verdicts: Vec<bool> = (h..h + 4).map(|g| holds(&a, h, g)).collect();
        for w in verdicts.windows(2) {
            prop_assert!(!w[0] || w[1]);
        }
    }

    #[test]
    fn chg_implies_weak(a in subset_of(18), h in 2usize..4, extra in 0usize..3) {
        let g = h + extra;
        if holds(&a, h, g) {
            prop_assert!(verify_weak_chg(a.group(), &a, h, g, DEFAULT_SUBSET_CAP).unwrap().holds);
        }
    }

    #[test]
    fn witnesses_are_genuine(a in subset_of(20), h in 2usize..4, extra in 0usize..2) {
        let g = h + extra;
        let v = verify_chg(a.group(), &a, h, g, DEFAULT_SUBSET_CAP).unwrap();
        if let Some(w) = v.witness {
            prop_assert_eq!(w.bases.len(), g);
            prop_assert!(w.is_valid_in(&a, false));
        }
        let v = verify_weak_chg(a.group(), &a, h, g, DEFAULT_SUBSET_CAP).unwrap();
        if let Some(w) = v.witness {
            prop_assert!(w.is_valid_in(&a, true));
        }
    }

    #[test]
    fn interval_sets_transfer_to_double_cyclic(a in subset_of(16), h in 2usize..4, extra in 0usize..2) {
        let g = h + extra;
        // C_h[g] in Z_2n implies C_h[g] in Z for subsets of [n].
        let c = interval_to_cyclic(&a).unwrap();
        if holds(&c, h, g) {
            prop_assert!(holds(&a, h, g));
        }
    }

    #[test]
    fn canonical_pattern_is_translation_invariant(
        n in 2u64..40,
        xs in proptest::collection::btree_set(0u64..40, 1..6),
        k in 0u64..40,
    ) {
        let group = GroupDescriptor::cyclic(n).unwrap();
        let x = GSet::from_values(group, xs.into_iter().map(|v| v % n)).unwrap();
        let shifted = translate(group, &x, &Elem::scalar(k % n)).unwrap();
        prop_assert_eq!(canonicalize(group, &x).unwrap().0, canonicalize(group, &shifted).unwrap().0);
    }

    #[test]
    fn classes_partition_interval_subsets(a in subset_of(14), h in 1usize..4) {
        let classes = enumerate_pattern_classes(a.group(), &a, h).unwrap();
        let total: usize = classes.iter().map(|c| c.bases.len()).sum();
        prop_assert_eq!(total as u64, binom(a.len() as u64, h as u64));
    }

    #[test]
    fn removing_bad_elements_leaves_weak_set(n in 10u64..=60, seed in any::<u64>(), hg in 0usize..3) {
        let (h, g) = [(2, 2), (2, 3), (3, 3)][hg];
        let s = sample_subset(n, 0.35, seed).unwrap();
        let bad = detect_bad(&s, h, g).unwrap();
        let kept: Vec<u64> = s.values().into_iter().filter(|v| !bad.values().contains(v)).collect();
        let rest = interval(n, &kept);
        prop_assert!(verify_weak_chg(rest.group(), &rest, h, g, DEFAULT_SUBSET_CAP).unwrap().holds);
    }
}

#[test]
fn product_group_classes_account_for_stabilizers() {
    // In Z_2^3 every pair {x, x+v} is fixed by adding v, so each class of
    // 2-subsets has twice as many bases as subsets.
    let group = GroupDescriptor::product(2, 3).unwrap();
    let all = GSet::from_keys(group, 0..8).unwrap();
    let classes = enumerate_pattern_classes(group, &all, 2).unwrap();
    assert_eq!(classes.len(), 7);
    let total: usize = classes.iter().map(|c| c.bases.len()).sum();
    assert_eq!(total, 2 * binom(8, 2) as usize);
}

#[test]
fn sphere_and_norm_sets_verify_and_respect_bounds() {
    for p in [3u64, 5, 7] {
        let a = sphere_set(p, 1 << 20).unwrap();
        assert!(holds(&a, 3, 3), "sphere {p}");
        assert!(a.len() as f64 <= eq3_group((p * p * p) as f64, 3, 3).unwrap());
    }
    for (q, h) in [(2u64, 2usize), (3, 2), (7, 2), (2, 3), (3, 3), (2, 4)] {
        let (a, g) = norm_set(q, h, DEFAULT_FIELD_CAP).unwrap();
        assert_eq!(a.len() as u64, (q.pow(h as u32) - 1) / (q - 1));
        assert!(holds(&a, h, g), "norm ({q},{h})");
    }
}

#[test]
fn embedded_sidon_sets_stay_sidon() {
    for p in [3u64, 5, 7, 11] {
        let (a, _) = norm_set(p, 2, DEFAULT_FIELD_CAP).unwrap();
        assert!(holds(&a, 2, 3));
        let image = freiman_embed(2 * p, &a).unwrap();
        assert!(holds(&image, 2, 3), "C_2[3] lost under embedding for q={p}");
    }
    for p in [5u64, 7, 11, 13] {
        let s = sidon_baseline(p).unwrap();
        assert_eq!(s.len() as u64, p);
        assert!(holds(&s, 2, 2));
    }
}

#[test]
fn density_identities() {
    for (n, h, g) in [(1e4, 2, 3), (1e6, 2, 2), (1e6, 3, 3), (1e8, 3, 5)] {
        let d = np_density(n, h, g).unwrap();
        let lower = thm5_lower(n, h, g).unwrap();
        assert!((lower - d.np / 4.0).abs() <= 1e-9 * lower);
    }
}
