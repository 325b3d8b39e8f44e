use itersum::{groups_up_to, make_group, Group, GroupSubset, Subgroup};

fn closed_subsets(g: &Group) -> usize {
    let n = g.order();
    let mut count = 0;
    for mask in 1u32..1 << n {
        if mask & 1 == 0 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let closed = members
            .iter()
            .all(|&a| members.iter().all(|&b| mask >> g.add_index(a, b) & 1 == 1));
        if closed {
            count += 1;
        }
    }
    count
}

#[test]
fn arithmetic_laws() {
    for g in groups_up_to(32) {
        let exp = g.exponent() as i64;
        for x in g.elements() {
            assert_eq!(g.add(x, g.neg(x)), g.zero());
            assert_eq!(g.mul(exp, x), g.zero());
            assert_eq!(g.exponent() % g.order_of(x), 0);
            for y in g.elements() {
                assert_eq!(g.add(x, y), g.add(y, x));
            }
        }
    }
}

#[test]
fn quotient_maps_are_homomorphisms() {
    for g in groups_up_to(32) {
        for h in g.all_subgroups().unwrap() {
            let q = g.quotient(h).unwrap();
            assert_eq!(q.target().order() * h.order(), g.order());
            let t = q.table();
            let tg = q.target();
            for a in 0..g.order() {
                for b in 0..g.order() {
                    let lhs = t[g.add_index(a, b)] as usize;
                    assert_eq!(lhs, tg.add_index(t[a] as usize, t[b] as usize));
                }
            }
            let kernel: Vec<usize> = (0..g.order()).filter(|&x| t[x] == 0).collect();
            assert_eq!(kernel, h.members().indices());
        }
    }
}

#[test]
fn subgroup_lattice_matches_brute_force() {
    for g in groups_up_to(16) {
        let subs = g.all_subgroups().unwrap();
        for h in subs {
            let m = h.members();
            for a in m.elements() {
                for b in m.elements() {
                    assert!(m.contains(g.add(a, b)));
                }
            }
        }
        assert_eq!(subs.len(), closed_subsets(&g), "{g}");
    }
    assert_eq!(make_group(&[2, 2]).unwrap().all_subgroups().unwrap().len(), 5);
}

#[test]
fn affine_hull_is_minimal() {
    for g in groups_up_to(12) {
        let subs: Vec<Subgroup> = g.all_subgroups().unwrap().to_vec();
        let n = g.order();
        for mask in 1u64..1 << n {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let a = GroupSubset::from_indices(&g, &idx).unwrap();
            let hull = a.affine_hull().unwrap();
            let shifted = a.translate_index(g.neg_index(idx[0]));
            let best = subs
                .iter()
                .filter(|h| shifted.is_subset(h.members()))
                .min_by_key(|h| h.order())
                .unwrap();
            assert_eq!(&hull, best, "{g} {a}");
        }
    }
}
