//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use itersum::{
    build_example, check_cor_large_n, classify_elementary, classify_kst, classify_main,
    classify_size3, davenport, dstar, groups_up_to, kneser_data, make_group, parse_group,
    sequence_leaders, size3_cardinality_spectrum, subset_orbits, verify_egz, verify_main_nsums,
    verify_main_olson, verify_olson, Error, ExampleParams, Family, Group, GroupSubset, Sequence,
    Subgroup, Symmetries, DEFAULT_NODE_BUDGET,
};
use itersum_harness::{run_sweep, sorted_canonical, SweepConfig, Task};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
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

fn sumset_oracle() -> Outcome {
    let mut pairs = 0u64;
    let mut bad = 0u64;
    for g in groups_up_to(8) {
        let all = subsets(&g);
        for a in &all {
            for b in &all {
                pairs += 1;
                if a.sumset(b).unwrap() != naive_sumset(a, b) {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("{pairs} pairs, {bad} mismatches"))
}

fn kneser_inequality() -> Outcome {
    let mut checked = 0u64;
    let mut bad = 0u64;
    for g in groups_up_to(10) {
        let all = subsets(&g);
        for a in &all {
            for b in &all {
                checked += 1;
                let k = kneser_data(&[a.clone(), b.clone()]).unwrap();
                if (k.lhs as i64) < k.bound {
                    bad += 1;
                }
            }
        }
    }
    // the inequality is invariant under translating each set
    for g in groups_up_to(8) {
        let with_zero: Vec<GroupSubset> = subsets(&g).into_iter().filter(|s| s.contains_index(0)).collect();
        for a in &with_zero {
            for b in &with_zero {
                for c in &with_zero {
                    checked += 1;
                    let k = kneser_data(&[a.clone(), b.clone(), c.clone()]).unwrap();
                    if (k.lhs as i64) < k.bound {
                        bad += 1;
                    }
                }
            }
        }
    }
    outcome(bad == 0, format!("{checked} pairs and triples, {bad} violations"))
}

fn elementary_sizes() -> Outcome {
    let mut typed = 0u64;
    let mut bad = 0u64;
    for g in groups_up_to(8) {
        let all = subsets(&g);
        for a in &all {
            for b in &all {
                let excess = a.sumset(b).unwrap().len() as i64 - a.len() as i64 - b.len() as i64;
                for t in classify_elementary(a, b).unwrap() {
                    typed += 1;
                    if t.tag.excess() != excess || !t.verify(a, b) {
                        bad += 1;
                    }
                }
            }
        }
    }
    outcome(bad == 0 && typed > 0, format!("{typed} typed pairs, {bad} violations"))
}

fn kst_completeness() -> Outcome {
    let mut qualifying = 0u64;
    let mut bad = 0u64;
    for g in groups_up_to(8) {
        let all = subsets(&g);
        for a in &all {
            for b in &all {
                match classify_kst(a, b) {
                    Ok(cases) => {
                        qualifying += 1;
                        if cases.is_empty() || !cases.iter().all(|c| c.verify(a, b)) {
                            bad += 1;
                        }
                    }
                    Err(Error::Precondition(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
    outcome(bad == 0 && qualifying > 0, format!("{qualifying} qualifying pairs, {bad} empty or unverified"))
}

fn size3_lemma() -> Outcome {
    let mut groups: Vec<Group> = (3..=25).map(|m| make_group(&[m]).unwrap()).collect();
    groups.push(make_group(&[5, 5]).unwrap());
    for k in 1..=8 {
        groups.push(make_group(&[2, 2 * k]).unwrap());
    }
    groups.dedup();
    let mut applicable = 0u64;
    let mut bad = 0u64;
    for g in &groups {
        let m = g.order();
        let top = 8.max(m / 2 + 2);
        // both the hypotheses and the conclusions are translation invariant
        for x in 1..m {
            for y in x + 1..m {
                let a = GroupSubset::from_indices(g, &[0, x, y]).unwrap();
                for n in 3..=top {
                    let c = classify_size3(&a, n).unwrap();
                    if !c.is_applicable() {
                        continue;
                    }
                    applicable += 1;
                    let card = a.iterated_sumset(n as i64).unwrap().len();
                    let spec = size3_cardinality_spectrum(&a, n).unwrap();
                    let ok = spec.in_spectrum
                        && !c.cases().is_empty()
                        && c.cases().iter().all(|cs| cs.predicted_card.contains(&card) && cs.verify(&a));
                    if !ok {
                        bad += 1;
                    }
                }
            }
        }
    }
    outcome(bad == 0 && applicable > 0, format!("{applicable} qualifying (A, n), {bad} failures"))
}

fn main_theorem() -> Outcome {
    let mut applicable = 0u64;
    let mut bad = 0u64;
    for g in groups_up_to(16) {
        let sym = Symmetries::affine(&g).unwrap();
        for orbit in subset_orbits(&sym).unwrap() {
            let a = &orbit.representative;
            for n in 3..=8 {
                let c = classify_main(a, n).unwrap();
                if !c.is_applicable() {
                    continue;
                }
                applicable += 1;
                let card = a.iterated_sumset(n as i64).unwrap().len();
                let ok = !c.cases().is_empty()
                    && c.cases().iter().all(|cs| cs.predicted_card.contains(&card) && cs.verify(a));
                if !ok {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0 && applicable > 0, format!("{applicable} qualifying orbits, {bad} failures"))
}

fn large_n_corollary() -> Outcome {
    let mut checked = 0u64;
    let mut bad = 0u64;
    for g in groups_up_to(16) {
        let exp = g.exponent();
        let sym = Symmetries::affine(&g).unwrap();
        for orbit in subset_orbits(&sym).unwrap() {
            let a = &orbit.representative;
            if !a.affine_hull().unwrap().is_full() {
                continue;
            }
            for n in exp..=exp + 3 {
                if n * a.len() <= g.order() {
                    continue;
                }
                checked += 1;
                let full = a.iterated_sumset(n as i64).unwrap().is_full();
                let rep = check_cor_large_n(a, n).unwrap().cor2;
                if !full || !rep.holds {
                    bad += 1;
                }
            }
        }
    }
    let g = make_group(&[4, 4]).unwrap();
    let e = |x, y| g.from_coords(&[x, y]).unwrap();
    let h0 = Subgroup::generated(&g, &[e(1, 0)]);
    let k = Subgroup::generated(&g, &[e(2, 0)]);
    let a = h0.members().union(&k.members().translate(e(0, 1)));
    let three = naive_sumset(&naive_sumset(&a, &a), &a);
    let rep = check_cor_large_n(&a, 3).unwrap().cor2;
    let witness_ok = three.len() == 14
        && three.stabilizer() == k
        && rep.observed.card == 14
        && rep.observed.stabilizer == k
        && rep.applicable
        && rep.holds;
    outcome(
        bad == 0 && witness_ok,
        format!("{checked} instances, {bad} exceptions; C4xC4 |3A| = {} witness {}", three.len(), if witness_ok { "ok" } else { "bad" }),
    )
}

/// Sequences of every length up to `max_len`.
fn sequences(g: &Group, max_len: usize) -> Vec<Sequence> {
    let id = Symmetries::identity(g);
    (0..=max_len)
        .flat_map(|len| sequence_leaders(&id, len, len, u64::MAX).unwrap())
        .collect()
}

fn random_sequences(count: usize) -> Vec<Sequence> {
    let groups = groups_up_to(32);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..count)
        .map(|_| {
            let g = &groups[rng.gen_range(1..groups.len())];
            let len = rng.gen_range(11..=30);
            let terms: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g.order())).collect();
            Sequence::from_terms(g, &terms).unwrap()
        })
        .collect()
}

fn subsum_identities(corpus: &[Sequence]) -> Outcome {
    let mut checked = 0u64;
    let mut bad = 0u64;
    for s in corpus {
        for n in 0..=s.len() {
            checked += 1;
            let sums = s.subsums(n).unwrap();
            if sums != s.cap_multiplicities(n).subsums(n).unwrap() || !s.duality_check(n).unwrap() {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("{} sequences, {checked} (S, n), {bad} violations", corpus.len()))
}

fn subsum_kneser(corpus: &[Sequence]) -> Outcome {
    let mut checked = 0u64;
    let mut bad = 0u64;
    for s in corpus {
        for n in 1..=s.len() {
            match s.subsum_kneser_report(n) {
                Ok(r) => {
                    checked += 1;
                    if (r.actual as i64) < r.bound || r.rho < 0 {
                        bad += 1;
                    }
                }
                Err(Error::Precondition(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
    outcome(bad == 0 && checked > 0, format!("{checked} reports, {bad} violations"))
}

fn partition_lemma(corpus: &[Sequence]) -> Outcome {
    let mut applicable = 0u64;
    let mut bad = 0u64;
    for s in corpus {
        for n in 1..=s.len() {
            match s.partition_extra_check(n) {
                Ok(c) if c.applicable => {
                    applicable += 1;
                    if !c.holds {
                        bad += 1;
                    }
                }
                Ok(_) | Err(Error::Precondition(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
    outcome(bad == 0 && applicable > 0, format!("{applicable} applicable (S, n), {bad} violations"))
}

fn egz_olson() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for lit in ["C2", "C3", "C4", "C2xC2"] {
        let g = parse_group(lit).unwrap();
        let e = verify_egz(&g, DEFAULT_NODE_BUDGET).unwrap();
        let o = verify_olson(&g, DEFAULT_NODE_BUDGET).unwrap();
        ok &= e.passed() && o.passed() && e.instances_checked > 0;
        lines.push(format!("{lit} egz {} olson {}", e.counterexamples.len(), o.counterexamples.len()));
    }
    outcome(ok, format!("counterexamples: {}", lines.join(", ")))
}

fn main_olson() -> Outcome {
    let mut runs = 0;
    let mut counter = 0;
    let mut ok = true;
    for g in groups_up_to(11) {
        for n in 2..=4 {
            let v = verify_main_olson(&g, n, 4, DEFAULT_NODE_BUDGET).unwrap();
            runs += 1;
            counter += v.counterexamples.len();
        }
    }
    for (m, n) in [(vec![2, 2], 2), (vec![2, 4], 4)] {
        let g = make_group(&m).unwrap();
        let v = verify_main_olson(&g, n, 1, DEFAULT_NODE_BUDGET).unwrap();
        runs += 1;
        counter += v.counterexamples.len();
        ok &= v.instances_checked > 0;
    }
    outcome(ok && counter == 0, format!("{runs} verdicts, {counter} counterexamples"))
}

fn main_nsums() -> Outcome {
    let mut runs = 0;
    let mut counter = 0;
    // every group of order at most 9, which includes those of exponent at most 3
    for g in groups_up_to(9) {
        for n in 1..=4 {
            let v = verify_main_nsums(&g, n, 4, DEFAULT_NODE_BUDGET).unwrap();
            runs += 1;
            counter += v.counterexamples.len();
        }
    }
    for (m, ns) in [(6, 2..=4), (8, 3..=5)] {
        let g = make_group(&[m]).unwrap();
        for n in ns {
            let v = verify_main_nsums(&g, n, 3, DEFAULT_NODE_BUDGET).unwrap();
            runs += 1;
            counter += v.counterexamples.len();
        }
    }
    outcome(counter == 0, format!("{runs} verdicts, {counter} counterexamples"))
}

fn extremal_witnesses() -> Outcome {
    let cases: [(Family, &str, usize); 7] = [
        (Family::A1, "C4", 5),
        (Family::A2, "C2xC2", 5),
        (Family::A3, "C3xC3", 12),
        (Family::B1, "C10", 12),
        (Family::B1, "C12", 16),
        (Family::B2, "C2xC5", 12),
        (Family::B3, "C4xC8", 42),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (family, lit, len) in cases {
        let g = parse_group(lit).unwrap();
        match build_example(family, &g, &ExampleParams::default()) {
            Ok(w) => {
                let good = w.all_hold() && w.sequence.len() == len;
                ok &= good;
                notes.push(format!("{family:?}/{lit} |S|={} {}", w.sequence.len(), if good { "ok" } else { "FAILED" }));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("{family:?}/{lit} {e}"));
            }
        }
    }
    let c4 = parse_group("C4").unwrap();
    let a1 = build_example(Family::A1, &c4, &ExampleParams::default()).unwrap();
    let sums = a1.sequence.subsums(4).unwrap();
    ok &= sums.indices() == [0, 1, 3];
    let v4 = parse_group("C2xC2").unwrap();
    let a2 = build_example(Family::A2, &v4, &ExampleParams::default()).unwrap();
    let expect = GroupSubset::from_elements(
        &v4,
        &[v4.from_coords(&[0, 0]).unwrap(), v4.from_coords(&[0, 1]).unwrap(), v4.from_coords(&[1, 1]).unwrap()],
    )
    .unwrap();
    ok &= a2.sequence.subsums(4).unwrap() == expect;
    let b3 = build_example(Family::B3, &parse_group("C4xC8").unwrap(), &ExampleParams::default()).unwrap();
    ok &= b3.subsequence.as_ref().is_some_and(|s| s.len() == 39);
    outcome(ok, notes.join("; "))
}

fn davenport_constants() -> Outcome {
    let d = |g: &Group| davenport(g, DEFAULT_NODE_BUDGET).unwrap();
    let mut ok = d(&make_group(&[2, 2]).unwrap()) == 3 && d(&make_group(&[3, 3]).unwrap()) == 5;
    for n in 2..=12 {
        ok &= d(&make_group(&[n]).unwrap()) == n;
    }
    let mut checked = 0;
    for g in groups_up_to(16) {
        let v = d(&g);
        checked += 1;
        ok &= dstar(&g) <= v && v <= g.order();
    }
    outcome(ok, format!("{checked} groups bounded, named values matched: {ok}"))
}

fn determinism() -> Outcome {
    let mut config = SweepConfig::new(Task::ClassifyMain, groups_up_to(16));
    config.n_values = Some((3..=8).collect());
    let mut runs = Vec::new();
    for workers in [1, 8] {
        config.workers = workers;
        let s = run_sweep(&config).unwrap();
        runs.push((s.counts.clone(), sorted_canonical(&s.records).join("\n")));
    }
    let same = runs[0].0 == runs[1].0 && runs[0].1.as_bytes() == runs[1].1.as_bytes();
    outcome(
        same && runs[0].0.failed == 0,
        format!("{} records, {} bytes, failed {}", runs[0].0.checked, runs[0].1.len(), runs[0].0.failed),
    )
}

fn main() {
    let small: Vec<Sequence> = groups_up_to(8).iter().flat_map(|g| sequences(g, 10)).collect();
    let mut corpus = small.clone();
    corpus.extend(random_sequences(10_000));
    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let minutes = |m: u64| Duration::from_secs(60 * m);
    let criteria: Vec<(u32, &str, Duration, Check)> = vec![
        (1, "sumset oracle equivalence", minutes(1), Box::new(sumset_oracle)),
        (2, "Kneser inequality", minutes(5), Box::new(kneser_inequality)),
        (3, "elementary type size identities", minutes(5), Box::new(elementary_sizes)),
        (4, "critical pair completeness", minutes(10), Box::new(kst_completeness)),
        (5, "three-element sets", minutes(10), Box::new(size3_lemma)),
        (6, "iterated sumset structure", minutes(30), Box::new(main_theorem)),
        (7, "large n sumsets", minutes(10), Box::new(large_n_corollary)),
        (8, "capping and duality", minutes(5), Box::new(|| subsum_identities(&corpus))),
        (9, "subsum Kneser bound", minutes(5), Box::new(|| subsum_kneser(&corpus))),
        (10, "set partition extra check", minutes(10), Box::new(|| partition_lemma(&small))),
        (11, "EGZ and Olson", minutes(10), Box::new(egz_olson)),
        (12, "length |G| + n subsums", minutes(60), Box::new(main_olson)),
        (13, "n-term subsums", minutes(60), Box::new(main_nsums)),
        (14, "extremal sequences", minutes(5), Box::new(extremal_witnesses)),
        (15, "Davenport constants", minutes(10), Box::new(davenport_constants)),
        (16, "sweep determinism", minutes(30), Box::new(determinism)),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let out = check();
        let elapsed = start.elapsed();
        let ok = out.ok && elapsed < limit;
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{id:2}] {name}: {} ({:.2}s, limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{failed} of 16 criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
