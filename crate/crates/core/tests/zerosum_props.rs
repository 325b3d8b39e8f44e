use itersum::{
    build_example, davenport, dstar, groups_up_to, make_group, parse_group, parse_sequence,
    verify_egz, verify_olson, ExampleParams, Family, Group, DEFAULT_NODE_BUDGET,
};

#[test]
fn davenport_between_bounds() {
    for g in groups_up_to(16) {
        let d = davenport(&g, DEFAULT_NODE_BUDGET).unwrap();
        assert!(dstar(&g) <= d && d <= g.order().max(1), "{g}");
    }
    for n in 1..=12 {
        let g = if n == 1 { Group::trivial() } else { make_group(&[n]).unwrap() };
        assert_eq!(davenport(&g, DEFAULT_NODE_BUDGET).unwrap(), n);
    }
}

#[test]
fn egz_and_olson_small() {
    for lit in ["C2", "C3", "C4", "C2xC2"] {
        let g = parse_group(lit).unwrap();
        let egz = verify_egz(&g, DEFAULT_NODE_BUDGET).unwrap();
        assert!(egz.passed() && egz.instances_checked > 0, "{lit}");
        let olson = verify_olson(&g, DEFAULT_NODE_BUDGET).unwrap();
        assert!(olson.passed(), "{lit}");
    }
}

#[test]
fn egz_bound_is_sharp() {
    // 0^{n-1} 1^{n-1} has no zero-sum subsequence of length n
    let g = make_group(&[5]).unwrap();
    let s = parse_sequence(&g, "0^4 1^4").unwrap();
    assert!(!s.subsums(5).unwrap().contains_index(0));
}

#[test]
fn extremal_examples_hold() {
    let cases = [
        (Family::A1, "C4"),
        (Family::A1, "C9"),
        (Family::A1, "C12"),
        (Family::A2, "C2xC2"),
        (Family::A2, "C3xC6"),
        (Family::A3, "C3xC3"),
        (Family::A3, "C2xC2xC2"),
        (Family::B1, "C10"),
        (Family::B1, "C12"),
        (Family::B1, "C15"),
        (Family::B2, "C2xC6"),
        (Family::B2, "C3xC6"),
        (Family::B3, "C4xC8"),
        (Family::B3, "C2xC2xC4"),
    ];
    for (family, lit) in cases {
        let g = parse_group(lit).unwrap();
        let w = build_example(family, &g, &ExampleParams::default()).unwrap();
        assert!(w.all_hold(), "{family:?} {lit}: {:#?}", w.claims);
        assert!(!w.sequence.is_empty());
    }
}
