use itersum::{groups_up_to, sequence_leaders, Error, Group, Sequence, Symmetries};
use proptest::prelude::*;

/// Sums of all `n`-term subsequences, by choosing a multiplicity for each
/// support element.
fn naive_subsums(s: &Sequence, n: usize) -> Vec<usize> {
    let g = s.group();
    let mult = s.multiplicities();
    let mut out = vec![false; g.order()];
    fn walk(g: &Group, mult: &[u16], pos: usize, left: usize, acc: usize, out: &mut [bool]) {
        if pos == mult.len() {
            if left == 0 {
                out[acc] = true;
            }
            return;
        }
        let mut sum = acc;
        for k in 0..=(mult[pos] as usize).min(left) {
            walk(g, mult, pos + 1, left - k, sum, out);
            sum = g.add_index(sum, pos);
        }
    }
    walk(g, mult, 0, n, 0, &mut out);
    (0..g.order()).filter(|&x| out[x]).collect()
}

/// Every multiset of each length up to `max_len` over `g`.
fn all_sequences(g: &Group, max_len: usize) -> Vec<Sequence> {
    let id = Symmetries::identity(g);
    (0..=max_len)
        .flat_map(|len| sequence_leaders(&id, len, len, u64::MAX).unwrap())
        .collect()
}

fn check_identities(s: &Sequence) {
    for n in 0..=s.len() {
        let sums = s.subsums(n).unwrap();
        assert_eq!(sums, s.cap_multiplicities(n).subsums(n).unwrap(), "{s:?} {n}");
        assert!(s.duality_check(n).unwrap(), "{s:?} {n}");
    }
}

fn check_kneser(s: &Sequence, violations: &mut usize, lemma: &mut usize) {
    for n in 1..=s.len() {
        match s.subsum_kneser_report(n) {
            Ok(r) => {
                if (r.actual as i64) < r.bound || r.rho < 0 {
                    *violations += 1;
                }
            }
            Err(Error::Precondition(_)) => continue,
            Err(e) => panic!("{e}"),
        }
        let extra = s.partition_extra_check(n).unwrap();
        if extra.applicable {
            *lemma += 1;
            assert!(extra.holds, "{s:?} n={n}: {extra:?}");
        }
    }
}

#[test]
fn dp_matches_enumeration() {
    for g in groups_up_to(8) {
        let max_len = if g.order() <= 4 { 10 } else { 7 };
        for s in all_sequences(&g, max_len) {
            for n in 0..=s.len() {
                assert_eq!(s.subsums(n).unwrap().indices(), naive_subsums(&s, n), "{s:?} {n}");
            }
        }
    }
}

#[test]
fn identities_capping_duality_kneser() {
    let mut violations = 0;
    let mut lemma = 0;
    for g in groups_up_to(8) {
        let max_len = if g.order() <= 4 { 10 } else { 7 };
        for s in all_sequences(&g, max_len) {
            check_identities(&s);
            check_kneser(&s, &mut violations, &mut lemma);
        }
    }
    assert_eq!(violations, 0);
    assert!(lemma > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn random_larger_sequences(gi in 0usize..100, terms in prop::collection::vec(0usize..64, 8..40)) {
        let groups = groups_up_to(32);
        let g = &groups[gi % groups.len()];
        let terms: Vec<usize> = terms.iter().map(|t| t % g.order()).collect();
        let s = Sequence::from_terms(g, &terms).unwrap();
        check_identities(&s);
        let mut violations = 0;
        let mut lemma = 0;
        check_kneser(&s, &mut violations, &mut lemma);
        prop_assert_eq!(violations, 0);
    }
}
