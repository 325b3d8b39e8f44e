//! Turns engine results into catalog records. Shared by the single-instance
//! subcommands and the sweep driver.

use crate::catalog::{CatalogRecord, RecordKey, RecordKind, Status};
use itersum::{
    build_example, check_cor_large_n, classify_elementary, classify_kst, classify_main,
    classify_size3, davenport, dstar, format_element, format_sequence, format_subset,
    kneser_data, verify_egz, verify_main_nsums_with, verify_main_olson, verify_olson,
    CorollaryKind, Error, ExampleParams, Family, Group, GroupSubset, Sequence, TheoremVerdict,
};
use serde_json::json;
use std::time::Instant;

/// Which verifier a verdict record comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictTask {
    Egz,
    Olson,
    MainOlson { n: usize, item: u8 },
    MainNSums { n: usize, item: u8, extra: usize },
}

fn timed(start: Instant, rec: CatalogRecord) -> CatalogRecord {
    rec.with_elapsed(start.elapsed())
}

fn inconclusive(kind: RecordKind, key: RecordKey, err: &Error) -> CatalogRecord {
    CatalogRecord::new(kind, key, Status::Inconclusive, json!({ "error": err.to_string() }))
}

fn not_applicable(kind: RecordKind, key: RecordKey, reason: String) -> CatalogRecord {
    CatalogRecord::new(kind, key, Status::NotApplicable, json!({ "reason": reason }))
}

/// Maps recoverable engine errors to records and passes the rest through.
fn settle(
    kind: RecordKind,
    key: RecordKey,
    r: Result<CatalogRecord, Error>,
) -> Result<CatalogRecord, Error> {
    match r {
        Ok(rec) => Ok(rec),
        Err(Error::NotApplicable(why)) | Err(Error::Precondition(why)) => {
            Ok(not_applicable(kind, key, why))
        }
        Err(e @ Error::Budget { .. }) => Ok(inconclusive(kind, key, &e)),
        Err(e) => Err(e),
    }
}

pub fn sumset_record(a: &GroupSubset, b: &GroupSubset) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let s = a.sumset(b)?;
    let key = RecordKey::new(a.group(), format!("{} + {}", format_subset(a), format_subset(b)), "");
    let payload = json!({
        "sumset": format_subset(&s),
        "card": s.len(),
        "stabilizer_order": s.stabilizer().order(),
    });
    Ok(timed(start, CatalogRecord::new(RecordKind::Classification, key, Status::Pass, payload)))
}

pub fn iterated_record(a: &GroupSubset, n: usize) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let s = a.iterated_sumset(n as i64)?;
    let key = RecordKey::new(a.group(), format_subset(a), format!("n={n}"));
    let payload = json!({
        "sumset": format_subset(&s),
        "card": s.len(),
        "stabilizer_order": s.stabilizer().order(),
    });
    Ok(timed(start, CatalogRecord::new(RecordKind::Classification, key, Status::Pass, payload)))
}

/// Structure classification of `nA`, with `size3` forcing the three-element
/// classifier.
pub fn classify_record(a: &GroupSubset, n: usize, size3: bool) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let key = RecordKey::new(
        a.group(),
        format_subset(a),
        format!("n={n}{}", if size3 { " size3" } else { "" }),
    );
    let c = if size3 { classify_size3(a, n)? } else { classify_main(a, n)? };
    let card = a.iterated_sumset(n as i64)?.len();
    let status = if !c.is_applicable() {
        Status::NotApplicable
    } else if !c.cases().is_empty()
        && c.cases()
            .iter()
            .all(|cs| cs.predicted_card.contains(&card) && cs.verify(a))
    {
        Status::Pass
    } else {
        Status::Fail
    };
    let tags: Vec<&str> = c.cases().iter().map(|cs| cs.tag.name()).collect();
    let payload = json!({ "card": card, "tags": tags, "classification": c });
    Ok(timed(start, CatalogRecord::new(RecordKind::Classification, key, status, payload)))
}

pub fn elementary_record(a: &GroupSubset, b: &GroupSubset) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let key = RecordKey::new(a.group(), format!("{} + {}", format_subset(a), format_subset(b)), "elementary");
    let types = classify_elementary(a, b)?;
    let excess = a.sumset(b)?.len() as i64 - a.len() as i64 - b.len() as i64;
    let status = if types.is_empty() {
        Status::NotApplicable
    } else if types.iter().all(|t| t.tag.excess() == excess && t.verify(a, b)) {
        Status::Pass
    } else {
        Status::Fail
    };
    let tags: Vec<&str> = types.iter().map(|t| t.tag.name()).collect();
    let payload = json!({ "tags": tags, "types": types });
    Ok(timed(start, CatalogRecord::new(RecordKind::Classification, key, status, payload)))
}

pub fn kst_record(a: &GroupSubset, b: &GroupSubset) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let key = RecordKey::new(a.group(), format!("{} + {}", format_subset(a), format_subset(b)), "kst");
    let r = classify_kst(a, b).map(|cases| {
        let status = if !cases.is_empty() && cases.iter().all(|c| c.verify(a, b)) {
            Status::Pass
        } else {
            Status::Fail
        };
        let tags: Vec<&str> = cases.iter().map(|c| c.tag.name()).collect();
        CatalogRecord::new(
            RecordKind::Classification,
            key.clone(),
            status,
            json!({ "tags": tags, "cases": cases }),
        )
    });
    settle(RecordKind::Classification, key, r).map(|r| timed(start, r))
}

pub fn kneser_record(sets: &[GroupSubset]) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let g = sets.first().ok_or(Error::EmptyInput)?.group();
    let input: Vec<String> = sets.iter().map(format_subset).collect();
    let key = RecordKey::new(g, input.join(" + "), "kneser");
    let k = kneser_data(sets)?;
    let status = if k.lhs as i64 >= k.bound { Status::Pass } else { Status::Fail };
    Ok(timed(start, CatalogRecord::new(RecordKind::Verdict, key, status, k)))
}

pub fn subsums_record(s: &Sequence, n: Option<usize>) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let key = RecordKey::new(
        s.group(),
        format_sequence(s),
        n.map(|n| format!("n={n}")).unwrap_or_default(),
    );
    let payload = match n {
        Some(n) => {
            let sums = s.subsums(n)?;
            json!({ "n": n, "subsums": format_subset(&sums), "card": sums.len() })
        }
        None => {
            let all: Vec<String> = s.subsums_up_to(s.len())?.iter().map(format_subset).collect();
            json!({ "subsums": all })
        }
    };
    Ok(timed(start, CatalogRecord::new(RecordKind::Classification, key, Status::Pass, payload)))
}

pub fn coset_record(s: &Sequence) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let key = RecordKey::new(s.group(), format_sequence(s), "coset");
    let c = s.coset_condition()?;
    Ok(timed(start, CatalogRecord::new(RecordKind::Classification, key, Status::Pass, c)))
}

pub fn kneser_report_record(s: &Sequence, n: usize) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let key = RecordKey::new(s.group(), format_sequence(s), format!("n={n} kneser"));
    let r = s.subsum_kneser_report(n).map(|rep| {
        let ok = rep.actual as i64 >= rep.bound && rep.rho >= 0;
        let status = if ok { Status::Pass } else { Status::Fail };
        CatalogRecord::new(RecordKind::Verdict, key.clone(), status, rep)
    });
    settle(RecordKind::Verdict, key, r).map(|r| timed(start, r))
}

pub fn partition_record(s: &Sequence, sub_len: usize, n: usize, budget: u64) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let key = RecordKey::new(s.group(), format_sequence(s), format!("n={n} len={sub_len}"));
    let r = s.partition_search(sub_len, n, budget).map(|out| {
        let status = if out.found { Status::Pass } else { Status::Fail };
        CatalogRecord::new(RecordKind::Witness, key.clone(), status, out)
    });
    settle(RecordKind::Witness, key, r).map(|r| timed(start, r))
}

/// The set-partition extra check for every `n` it applies to.
pub fn lemma_record(s: &Sequence) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let key = RecordKey::new(s.group(), format_sequence(s), "lemma");
    let mut applicable = Vec::new();
    let mut failures = Vec::new();
    for n in 1..=s.len() {
        match s.partition_extra_check(n) {
            Ok(c) if c.applicable => {
                applicable.push(n);
                if !c.holds {
                    failures.push(json!({ "n": n, "check": c }));
                }
            }
            Ok(_) | Err(Error::Precondition(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let status = if !failures.is_empty() {
        Status::Fail
    } else if applicable.is_empty() {
        Status::NotApplicable
    } else {
        Status::Pass
    };
    let payload = json!({ "applicable_n": applicable, "failures": failures });
    Ok(timed(start, CatalogRecord::new(RecordKind::Verdict, key, status, payload)))
}

pub fn corollary_record(a: &GroupSubset, n: usize, kind: CorollaryKind) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let name = match kind {
        CorollaryKind::Cor1 => "cor1",
        CorollaryKind::Cor2 => "cor2",
    };
    let key = RecordKey::new(a.group(), format_subset(a), format!("n={n} {name}"));
    let r = check_cor_large_n(a, n)?;
    let rep = match kind {
        CorollaryKind::Cor1 => r.cor1,
        CorollaryKind::Cor2 => r.cor2,
    };
    let status = if !rep.applicable {
        Status::NotApplicable
    } else if rep.holds {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(timed(start, CatalogRecord::new(RecordKind::Verdict, key, status, rep)))
}

pub fn verdict_payload(v: &TheoremVerdict) -> serde_json::Value {
    let counter: Vec<String> = v.counterexamples.iter().map(format_sequence).collect();
    json!({
        "theorem": v.theorem,
        "parameters": v.parameters,
        "instances_checked": v.instances_checked,
        "sequences_covered": v.sequences_covered,
        "counterexamples": counter,
        "passed": v.passed(),
    })
}

pub fn verdict_record(g: &Group, task: VerdictTask, budget: u64) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let (name, params) = match task {
        VerdictTask::Egz => ("egz", String::new()),
        VerdictTask::Olson => ("olson", String::new()),
        VerdictTask::MainOlson { n, item } => ("t12", format!("n={n} item={item}")),
        VerdictTask::MainNSums { n, item, extra } => ("t15", format!("n={n} item={item} extra={extra}")),
    };
    let key = RecordKey::new(g, name, params);
    let r = match task {
        VerdictTask::Egz => verify_egz(g, budget),
        VerdictTask::Olson => verify_olson(g, budget),
        VerdictTask::MainOlson { n, item } => verify_main_olson(g, n, item, budget),
        VerdictTask::MainNSums { n, item, extra } => verify_main_nsums_with(g, n, item, budget, extra),
    }
    .map(|v| {
        let status = if v.passed() { Status::Pass } else { Status::Fail };
        CatalogRecord::new(RecordKind::Verdict, key.clone(), status, verdict_payload(&v))
    });
    settle(RecordKind::Verdict, key, r).map(|r| timed(start, r))
}

pub fn davenport_record(g: &Group, budget: u64) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let key = RecordKey::new(g, "davenport", "");
    let lower = dstar(g);
    let r = davenport(g, budget).map(|d| {
        let ok = lower <= d && d <= g.order().max(1);
        let status = if ok { Status::Pass } else { Status::Fail };
        CatalogRecord::new(
            RecordKind::Constant,
            key.clone(),
            status,
            json!({ "davenport": d, "dstar": lower, "order": g.order() }),
        )
    });
    settle(RecordKind::Constant, key, r).map(|r| timed(start, r))
}

pub fn example_record(family: Family, g: &Group, params: &ExampleParams) -> Result<CatalogRecord, Error> {
    let start = Instant::now();
    let key = RecordKey::new(g, format!("{family:?}"), "");
    let r = build_example(family, g, params).map(|w| {
        let status = if w.all_hold() { Status::Pass } else { Status::Fail };
        let payload = json!({
            "family": w.family,
            "g": format_element(g, w.g),
            "h": format_subset(w.h.members()),
            "sequence": format_sequence(&w.sequence),
            "length": w.sequence.len(),
            "subsequence": w.subsequence.as_ref().map(format_sequence),
            "claims": w.claims,
        });
        CatalogRecord::new(RecordKind::Witness, key.clone(), status, payload)
    });
    settle(RecordKind::Witness, key, r).map(|r| timed(start, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itersum::{make_group, parse_subset};

    #[test]
    fn classify_record_example() {
        let g = make_group(&[12]).unwrap();
        let a = parse_subset(&g, "{0,1,2}").unwrap();
        let r = classify_record(&a, 4, false).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.payload["card"], 9);
        assert!(r.payload["tags"].as_array().unwrap().iter().any(|t| t == "L3.i.a"));
    }

    #[test]
    fn unmet_hypotheses_become_records() {
        let g = make_group(&[6]).unwrap();
        let r = verdict_record(&g, VerdictTask::MainOlson { n: 1, item: 4 }, 1000).unwrap();
        assert_eq!(r.status, Status::NotApplicable);
        let r = davenport_record(&make_group(&[2, 2, 2, 2]).unwrap(), 2).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
        let a = parse_subset(&g, "{0}").unwrap();
        assert_eq!(kst_record(&a, &a).unwrap().status, Status::NotApplicable);
    }
}
