use itersum::{groups_up_to, kneser_data, Group, GroupSubset};
use proptest::prelude::*;
use std::sync::OnceLock;

fn naive_sumset(a: &GroupSubset, b: &GroupSubset) -> GroupSubset {
    let g = a.group();
    let mut idx = Vec::new();
    for x in a.indices() {
        for y in b.indices() {
            idx.push(g.add_index(x, y));
        }
    }
    GroupSubset::from_indices(g, &idx).unwrap()
}

fn subsets(g: &Group) -> Vec<GroupSubset> {
    let n = g.order();
    (1u64..1 << n)
        .map(|mask| {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            GroupSubset::from_indices(g, &idx).unwrap()
        })
        .collect()
}

fn from_mask(g: &Group, mask: u64) -> GroupSubset {
    let mut idx: Vec<usize> = (0..g.order()).filter(|&i| mask >> i & 1 == 1).collect();
    if idx.is_empty() {
        idx.push((mask % g.order() as u64) as usize);
    }
    GroupSubset::from_indices(g, &idx).unwrap()
}

fn groups_64() -> &'static [Group] {
    static G: OnceLock<Vec<Group>> = OnceLock::new();
    G.get_or_init(|| groups_up_to(64))
}

#[test]
fn sumset_matches_double_loop() {
    for g in groups_up_to(8) {
        let all = subsets(&g);
        for a in &all {
            for b in &all {
                let s = a.sumset(b).unwrap();
                assert_eq!(s, naive_sumset(a, b), "{g} {a} {b}");
                assert!(s.len() >= a.len().max(b.len()));
                assert_eq!(s, b.sumset(a).unwrap());
                let reps = a.rep_counts(b).unwrap();
                assert_eq!(reps.iter().sum::<usize>(), a.len() * b.len());
                for x in 0..g.order() {
                    assert_eq!(reps[x] > 0, s.contains_index(x));
                }
            }
        }
    }
}

#[test]
fn sumset_associative_on_triples() {
    for g in groups_up_to(6) {
        let all = subsets(&g);
        for a in &all {
            for b in &all {
                let ab = a.sumset(b).unwrap();
                for c in &all {
                    let left = ab.sumset(c).unwrap();
                    let right = a.sumset(&b.sumset(c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }
}

#[test]
fn stabilizer_is_largest_period() {
    for g in groups_up_to(12) {
        let subs = g.all_subgroups().unwrap();
        for a in subsets(&g) {
            let h = a.stabilizer();
            assert!(a.is_periodic_under(&h));
            for k in subs {
                if a.is_periodic_under(k) {
                    assert!(k.is_subgroup_of(&h), "{g} {a}");
                }
            }
        }
    }
}

#[test]
fn aperiodicity_descends() {
    for g in groups_up_to(12) {
        for a in subsets(&g) {
            let multiples = a.multiples(6).unwrap();
            for n in 1..multiples.len() {
                if multiples[n].is_aperiodic() {
                    assert!(multiples[..n].iter().all(|m| m.is_aperiodic()), "{g} {a} {n}");
                }
            }
        }
    }
}

#[test]
fn kneser_on_triples() {
    for g in groups_up_to(6) {
        let all = subsets(&g);
        for a in &all {
            for b in &all {
                for c in &all {
                    let k = kneser_data(&[a.clone(), b.clone(), c.clone()]).unwrap();
                    assert!(k.lhs as i64 >= k.bound);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn random_sumsets(gi in 0usize..1000, ma in any::<u64>(), mb in any::<u64>()) {
        let groups = groups_64();
        let g = &groups[gi % groups.len()];
        let a = from_mask(g, ma);
        let b = from_mask(g, mb);
        prop_assert_eq!(a.sumset(&b).unwrap(), naive_sumset(&a, &b));
    }
}
