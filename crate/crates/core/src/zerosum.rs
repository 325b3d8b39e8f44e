//! Zero-sum constants, exhaustive checks of the subsequence-sum theorems and
//! the extremal sequences showing their bounds are tight.

use crate::bits::Bits;
use crate::enumerate::{sequence_leaders, Symmetries};
use crate::error::{Error, Result};
use crate::group::{is_prime, smallest_prime_factor, Element, Group, Subgroup};
use crate::sequence::Sequence;
use crate::subset::GroupSubset;
use rayon::prelude::*;
use serde::Serialize;
use std::time::{Duration, Instant};

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// `1 + Σ (m_i - 1)` over the invariant factors.
pub fn dstar(g: &Group) -> usize {
    1 + g.moduli().iter().map(|m| m - 1).sum::<usize>()
}

/// Exact Davenport constant by depth-first search over zero-sum-free
/// sequences with nondecreasing terms.
pub fn davenport(g: &Group, budget: u64) -> Result<usize> {
    let order = g.order();
    if order == 1 {
        return Ok(1);
    }
    let mut best = 0usize;
    let mut nodes = 0u64;
    let sums = Bits::new(order);
    zero_free(g, 1, 0, &sums, &mut best, &mut nodes, budget)?;
    Ok(best + 1)
}

fn zero_free(
    g: &Group,
    from: usize,
    len: usize,
    sums: &Bits,
    best: &mut usize,
    nodes: &mut u64,
    budget: u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::Budget {
            what: "zero-sum-free search".into(),
            limit: budget as usize,
        });
    }
    *best = (*best).max(len);
    // every new term adds at least one new nonzero subsum
    let room = g.order() - 1 - sums.count();
    if len + room <= *best {
        return Ok(());
    }
    for x in from..g.order() {
        if sums.contains(g.neg_index(x)) {
            continue;
        }
        let mut next = g.translate_bits(sums, x);
        next.union_with(sums);
        next.insert(x);
        if next.contains(0) {
            continue;
        }
        zero_free(g, x, len + 1, &next, best, nodes, budget)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Egz,
    Olson,
    /// `Σ_{|G|}(S) = G` for `|S| = |G| + n`.
    MainOlson,
    /// `Σ_n(S) = G` for `|S| >= n + |G| - 1`.
    MainNSums,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Egz => "egz",
            Theorem::Olson => "olson",
            Theorem::MainOlson => "t12",
            Theorem::MainNSums => "t15",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerdictParameters {
    pub n: Option<usize>,
    pub lengths: Vec<usize>,
    pub item: Option<u8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremVerdict {
    pub theorem: Theorem,
    pub group: Group,
    pub parameters: VerdictParameters,
    /// Orbit representatives examined.
    pub instances_checked: u64,
    /// Sequences covered by those representatives.
    pub sequences_covered: u64,
    pub counterexamples: Vec<Sequence>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl TheoremVerdict {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Affine maps when the automorphism group is small enough to list,
/// otherwise the identity.
pub fn default_symmetries(g: &Group) -> Symmetries {
    Symmetries::affine(g).unwrap_or_else(|_| Symmetries::identity(g))
}

struct Sweep {
    sym: Symmetries,
    budget: u64,
}

impl Sweep {
    /// Runs `bad` over every leader of the given length and multiplicity
    /// cap that passes `keep`.
    fn run(
        &self,
        len: usize,
        max_mult: usize,
        keep: impl Fn(&Sequence) -> Result<bool> + Sync,
        bad: impl Fn(&Sequence) -> Result<bool> + Sync,
    ) -> Result<(u64, u64, Vec<Sequence>)> {
        let leaders = sequence_leaders(&self.sym, len, max_mult, self.budget)?;
        let results: Vec<Result<Option<(u64, bool)>>> = leaders
            .par_iter()
            .map(|s| {
                if !keep(s)? {
                    return Ok(None);
                }
                let orbit = self.sym.orbit_size(s.multiplicities()) as u64;
                Ok(Some((orbit, bad(s)?)))
            })
            .collect();
        let mut checked = 0;
        let mut covered = 0;
        let mut counter = Vec::new();
        for (s, r) in leaders.iter().zip(results) {
            if let Some((orbit, is_bad)) = r? {
                checked += 1;
                covered += orbit;
                if is_bad {
                    counter.push(s.clone());
                }
            }
        }
        Ok((checked, covered, counter))
    }
}

fn verdict(
    theorem: Theorem,
    g: &Group,
    parameters: VerdictParameters,
    start: Instant,
    parts: Vec<(u64, u64, Vec<Sequence>)>,
) -> TheoremVerdict {
    let mut v = TheoremVerdict {
        theorem,
        group: g.clone(),
        parameters,
        instances_checked: 0,
        sequences_covered: 0,
        counterexamples: vec![],
        elapsed: Duration::ZERO,
    };
    for (c, cov, bad) in parts {
        v.instances_checked += c;
        v.sequences_covered += cov;
        v.counterexamples.extend(bad);
    }
    v.elapsed = start.elapsed();
    v
}

/// Every sequence of length `2|G| - 1` has a zero-sum subsequence of
/// length `|G|`.
pub fn verify_egz(g: &Group, budget: u64) -> Result<TheoremVerdict> {
    let start = Instant::now();
    let order = g.order();
    let len = 2 * order - 1;
    let sweep = Sweep {
        sym: default_symmetries(g),
        budget,
    };
    let part = sweep.run(len, len, |_| Ok(true), |s| Ok(!s.subsums(order)?.contains_index(0)))?;
    Ok(verdict(
        Theorem::Egz,
        g,
        VerdictParameters {
            n: Some(order),
            lengths: vec![len],
            item: None,
        },
        start,
        vec![part],
    ))
}

/// Sequences of length `2|G| - 1` satisfying the coset condition have
/// `Σ_{|G|}(S) = G`.
pub fn verify_olson(g: &Group, budget: u64) -> Result<TheoremVerdict> {
    let start = Instant::now();
    let order = g.order();
    let len = 2 * order - 1;
    let sweep = Sweep {
        sym: default_symmetries(g),
        budget,
    };
    let part = sweep.run(
        len,
        len,
        |s| s.satisfies_coset_condition(),
        |s| Ok(!s.subsums(order)?.is_full()),
    )?;
    Ok(verdict(
        Theorem::Olson,
        g,
        VerdictParameters {
            n: Some(order),
            lengths: vec![len],
            item: None,
        },
        start,
        vec![part],
    ))
}

/// Checks the hypothesis of the numbered item for `(G, n)`.
pub fn item_hypothesis(theorem: Theorem, g: &Group, n: usize, item: u8) -> Result<()> {
    let order = g.order();
    let exp = g.exponent();
    let fail = |why: String| Err(Error::NotApplicable(why));
    let min_n = if theorem == Theorem::MainOlson { 2 } else { 1 };
    if n < min_n {
        return fail(format!("n = {n} is below {min_n}"));
    }
    match item {
        1 => {
            if n < exp {
                return fail(format!("n = {n} is below exp(G) = {exp}"));
            }
        }
        2 => {
            let h = order / exp;
            if n + 1 < exp || !(is_prime(h) || is_prime(exp)) {
                return fail(format!(
                    "item 2 needs n >= exp(G) - 1 and |H| = {h} or exp(G) = {exp} prime"
                ));
            }
        }
        3 => {
            let p = smallest_prime_factor(order).unwrap_or(1);
            if !g.is_cyclic() || order < 2 || n + 1 < order / p {
                return fail(format!("item 3 needs G cyclic and n >= |G|/p - 1 = {}", (order / p.max(1)).saturating_sub(1)));
            }
        }
        4 => {
            let ok = match theorem {
                Theorem::MainOlson => exp <= 3 || order < 12 || (exp == 4 && order == 16),
                _ => exp <= 3 || order < 10,
            };
            if !ok {
                return fail(format!("item 4 does not cover {g}"));
            }
        }
        _ => return Err(Error::InvalidArgument(format!("unknown item {item}"))),
    }
    if theorem != Theorem::MainOlson && theorem != Theorem::MainNSums {
        return Err(Error::InvalidArgument("items belong to the main theorems".into()));
    }
    Ok(())
}

/// `Σ_{|G|}(S) = G` for every `S` with `|S| = |G| + n`, `h(S) <= n` and the
/// coset condition.
pub fn verify_main_olson(g: &Group, n: usize, item: u8, budget: u64) -> Result<TheoremVerdict> {
    item_hypothesis(Theorem::MainOlson, g, n, item)?;
    let start = Instant::now();
    let order = g.order();
    let len = order + n;
    let sweep = Sweep {
        sym: default_symmetries(g),
        budget,
    };
    let part = sweep.run(
        len,
        n,
        |s| s.satisfies_coset_condition(),
        |s| Ok(!s.subsums(order)?.is_full()),
    )?;
    Ok(verdict(
        Theorem::MainOlson,
        g,
        VerdictParameters {
            n: Some(n),
            lengths: vec![len],
            item: Some(item),
        },
        start,
        vec![part],
    ))
}

/// `Σ_n(S) = G` for every `S` with `|S| = n + |G| - 1`, `h(S) <= n` and the
/// coset condition.
pub fn verify_main_nsums(g: &Group, n: usize, item: u8, budget: u64) -> Result<TheoremVerdict> {
    verify_main_nsums_with(g, n, item, budget, 0)
}

/// As [`verify_main_nsums`], also sweeping lengths up to `extra` beyond the
/// minimal one.
pub fn verify_main_nsums_with(
    g: &Group,
    n: usize,
    item: u8,
    budget: u64,
    extra: usize,
) -> Result<TheoremVerdict> {
    item_hypothesis(Theorem::MainNSums, g, n, item)?;
    let start = Instant::now();
    let base = n + g.order() - 1;
    let sweep = Sweep {
        sym: default_symmetries(g),
        budget,
    };
    let mut parts = Vec::new();
    let lengths: Vec<usize> = (base..=base + extra).collect();
    for &len in &lengths {
        parts.push(sweep.run(
            len,
            n,
            |s| s.satisfies_coset_condition(),
            |s| Ok(!s.subsums(n)?.is_full()),
        )?);
    }
    Ok(verdict(
        Theorem::MainNSums,
        g,
        VerdictParameters {
            n: Some(n),
            lengths,
            item: Some(item),
        },
        start,
        parts,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::A1,
        Family::A2,
        Family::A3,
        Family::B1,
        Family::B2,
        Family::B3,
    ];

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Some(Family::A1),
            "A2" => Some(Family::A2),
            "A3" => Some(Family::A3),
            "B1" => Some(Family::B1),
            "B2" => Some(Family::B2),
            "B3" => Some(Family::B3),
            _ => None,
        }
    }
}

/// Optional choices for the decomposition `G = H ⊕ <g>` and the subgroup
/// `K` of the last family.
#[derive(Clone, Debug, Default)]
pub struct ExampleParams {
    pub g: Option<Element>,
    pub h: Option<Subgroup>,
    pub k: Option<Subgroup>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub holds: bool,
}

impl Claim {
    fn new(name: &str, expected: impl ToString, observed: impl ToString, holds: bool) -> Claim {
        Claim {
            name: name.into(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            holds,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremalWitness {
    pub family: Family,
    pub group: Group,
    pub g: Element,
    pub h: Subgroup,
    /// The displayed sequence (`S` or `S'`).
    pub sequence: Sequence,
    /// The chosen subsequence `S | S'`, when the family selects one.
    pub subsequence: Option<Sequence>,
    pub claims: Vec<Claim>,
}

impl ExtremalWitness {
    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

/// `(g, H)` with `G = H ⊕ <g>` and `ord(g) = exp(G)`.
fn decomposition(g: &Group, params: &ExampleParams) -> Result<(usize, Subgroup)> {
    let exp = g.exponent();
    let x = match params.g {
        Some(x) => g.element(x.index())?.index(),
        None => {
            let mut coords = vec![0i64; g.rank()];
            if let Some(last) = coords.last_mut() {
                *last = 1;
            }
            g.from_coords(&coords)?.index()
        }
    };
    let h = match &params.h {
        Some(h) => h.clone(),
        None => {
            let gens: Vec<Element> = (0..g.rank().saturating_sub(1))
                .map(|i| {
                    let mut c = vec![0i64; g.rank()];
                    c[i] = 1;
                    g.from_coords(&c).unwrap()
                })
                .collect();
            Subgroup::generated(g, &gens)
        }
    };
    let cyc = Subgroup::generated(g, &[Element::raw(x)]);
    let meet = cyc.members().intersection(h.members());
    if g.order_of_index(x) != exp || meet.len() != 1 || h.order() * exp != g.order() {
        return Err(Error::NotApplicable(format!(
            "{g} is not H ⊕ <g> with ord(g) = exp(G) for the given choice"
        )));
    }
    Ok((x, h))
}

fn counts_from(g: &Group, parts: &[(usize, usize)]) -> Result<Sequence> {
    let mut mult = vec![0usize; g.order()];
    for &(x, c) in parts {
        mult[x] += c;
    }
    Sequence::from_counts(g, &mult)
}

fn avoidance(name: &str, s: &Sequence, n: usize) -> Result<Claim> {
    let sums = s.subsums(n)?;
    let missing = sums.complement();
    Ok(Claim::new(
        name,
        "a proper subset of G",
        format!("{sums}, missing {missing}"),
        !missing.is_empty(),
    ))
}

fn duality(name: &str, s: &Sequence, m: usize, k: usize) -> Result<Claim> {
    let lhs = s.subsums(m)?;
    let rhs = s.subsums(k)?.negate().translate(s.sum());
    Ok(Claim::new(name, format!("σ(S) - Σ_{k}(S)"), lhs.to_string(), lhs == rhs))
}

fn coset(name: &str, s: &Sequence, expected: bool) -> Result<Claim> {
    let got = s.satisfies_coset_condition()?;
    Ok(Claim::new(name, expected, got, got == expected))
}

fn length(name: &str, s: &Sequence, expected: usize) -> Claim {
    Claim::new(name, expected, s.len(), s.len() == expected)
}

/// Greedy subsequence of `s` of length `len`: first the listed floors, then
/// remaining terms in index order.
fn choose_sub(g: &Group, s: &Sequence, floors: &[(usize, usize)], len: usize) -> Result<Option<Sequence>> {
    let mut mult = vec![0usize; g.order()];
    let mut total = 0;
    for &(x, c) in floors {
        let take = c.min(s.multiplicities()[x] as usize);
        mult[x] = take;
        total += take;
    }
    if total > len {
        return Ok(None);
    }
    for x in 0..g.order() {
        let room = s.multiplicities()[x] as usize - mult[x];
        let take = room.min(len - total);
        mult[x] += take;
        total += take;
    }
    if total < len {
        return Ok(None);
    }
    Sequence::from_counts(g, &mult).map(Some)
}

/// Builds one of the extremal sequences and re-checks every stated claim.
pub fn build_example(family: Family, g: &Group, params: &ExampleParams) -> Result<ExtremalWitness> {
    let order = g.order();
    let exp = g.exponent();
    let na = |why: &str| Err(Error::NotApplicable(why.to_string()));
    let composite = |m: usize| m >= 4 && !is_prime(m);
    let mut claims = Vec::new();
    let (x, h, sequence, subsequence) = match family {
        Family::A1 | Family::B1 => {
            if !g.is_cyclic() || !composite(order) {
                return na("needs a cyclic group of composite order");
            }
            if family == Family::B1 && order < 10 {
                return na("needs |G| >= 10");
            }
            let p = smallest_prime_factor(order).unwrap();
            let x = match params.g {
                Some(e) if g.order_of(e) == order => e.index(),
                Some(_) => return na("g must generate G"),
                None => 1,
            };
            let h = Subgroup::generated(g, &[Element::raw(order / p)]);
            let q = order / p;
            if family == Family::A1 {
                let mut parts = vec![(x, q - 1)];
                parts.extend(h.members().bits().iter().map(|y| (y, q)));
                let s = counts_from(g, &parts)?;
                claims.push(length("length", &s, order + q - 1));
                claims.push(coset("coset_condition", &s, true)?);
                claims.push(avoidance("avoidance", &s, order)?);
                claims.push(duality("duality", &s, order, q - 1)?);
                (x, h, s, None)
            } else {
                let k = q - 2;
                let support = h.members().union(&h.coset_of(x));
                let parts: Vec<(usize, usize)> = support.bits().iter().map(|y| (y, k)).collect();
                let s1 = counts_from(g, &parts)?;
                claims.push(length("length", &s1, 2 * order - 4 * p));
                claims.push(Claim::new(
                    "length_bound",
                    format!(">= {}", order + q - 3),
                    s1.len(),
                    s1.len() + 3 >= order + q,
                ));
                claims.push(Claim::new(
                    "max_multiplicity",
                    format!("<= {k}"),
                    s1.max_multiplicity(),
                    s1.max_multiplicity() <= k,
                ));
                claims.push(avoidance("avoidance", &s1, k)?);
                claims.push(coset("coset_condition", &s1, true)?);
                let mut floors: Vec<(usize, usize)> = h.members().bits().iter().map(|y| (y, k)).collect();
                floors.push((x, k));
                let sub = choose_sub(g, &s1, &floors, order + q - 2)?;
                if let Some(s) = &sub {
                    claims.push(length("sub_length", s, order + q - 2));
                    claims.push(coset("sub_coset_condition", s, true)?);
                    claims.push(avoidance("sub_avoidance", s, order)?);
                    claims.push(duality("sub_duality", s, order, k)?);
                }
                (x, h, s1, sub)
            }
        }
        Family::A2 | Family::A3 | Family::B2 | Family::B3 => {
            let (x, h) = decomposition(g, params)?;
            match family {
                Family::A2 => {
                    if g.is_cyclic() {
                        return na("needs a non-cyclic group");
                    }
                    let mut parts = vec![(x, exp - 1)];
                    parts.extend(h.members().bits().iter().map(|y| (y, exp)));
                    let s = counts_from(g, &parts)?;
                    claims.push(length("length", &s, order + exp - 1));
                    claims.push(coset("coset_condition", &s, true)?);
                    claims.push(avoidance("avoidance", &s, order)?);
                    claims.push(duality("duality", &s, order, exp - 1)?);
                    (x, h, s, None)
                }
                Family::A3 => {
                    if g.is_cyclic() || g.moduli() == [2, 2] || h.order() < exp {
                        return na("needs G non-cyclic, not C2xC2, with |H| >= exp(G)");
                    }
                    let mut support = h.members().clone();
                    support.insert(Element::raw(x));
                    let support = support.difference(&GroupSubset::singleton(g, g.zero()));
                    let parts: Vec<(usize, usize)> = support.bits().iter().map(|y| (y, exp + 1)).collect();
                    let s1 = counts_from(g, &parts)?;
                    claims.push(length("length", &s1, order + h.order()));
                    claims.push(avoidance("avoidance", &s1, exp)?);
                    let floors: Vec<(usize, usize)> = support.bits().iter().map(|y| (y, exp)).collect();
                    let sub = choose_sub(g, &s1, &floors, order + exp)?;
                    if let Some(s) = &sub {
                        claims.push(length("sub_length", s, order + exp));
                        claims.push(coset("sub_coset_condition", s, true)?);
                        claims.push(avoidance("sub_avoidance", s, order)?);
                        claims.push(duality("sub_duality", s, order, exp)?);
                    }
                    (x, h, s1, sub)
                }
                Family::B2 => {
                    if h.is_trivial() || exp < 5 {
                        return na("needs H nontrivial and exp(G) >= 5");
                    }
                    let support = h.members().union(&h.coset_of(x));
                    let parts: Vec<(usize, usize)> = support.bits().iter().map(|y| (y, exp - 2)).collect();
                    let s1 = counts_from(g, &parts)?;
                    claims.push(length("length", &s1, 2 * order - 4 * h.order()));
                    claims.push(Claim::new(
                        "length_bound",
                        format!(">= {}", order + exp - 2),
                        s1.len(),
                        s1.len() + 2 >= order + exp,
                    ));
                    claims.push(avoidance("avoidance", &s1, exp - 2)?);
                    (x, h, s1, None)
                }
                _ => {
                    if !composite(h.order()) || !composite(exp) {
                        return na("needs |H| and exp(G) composite");
                    }
                    let p = smallest_prime_factor(h.order()).unwrap();
                    let k = match &params.k {
                        Some(k) if k.is_subgroup_of(&h) && k.order() * p == h.order() => k.clone(),
                        Some(_) => return na("K must be a subgroup of H of order |H|/p"),
                        None => g
                            .all_subgroups()?
                            .iter()
                            .find(|k| k.is_subgroup_of(&h) && k.order() * p == h.order())
                            .cloned()
                            .ok_or_else(|| Error::NotApplicable("no subgroup of index p in H".into()))?,
                    };
                    let support = h.members().union(&k.coset_of(x));
                    let parts: Vec<(usize, usize)> = support.bits().iter().map(|y| (y, exp - 1)).collect();
                    let s1 = counts_from(g, &parts)?;
                    let m = exp;
                    claims.push(length("length", &s1, (p + 1) * h.order() * (m - 1) / p));
                    // |S'| = |G| + (m-p-1)|G|/(pm)
                    let extra_num = (m - p - 1) * order;
                    claims.push(Claim::new(
                        "length_identity",
                        format!("|G| + {extra_num}/{}", p * m),
                        s1.len(),
                        (s1.len() - order) * p * m == extra_num,
                    ));
                    claims.push(avoidance("avoidance", &s1, m - 1)?);
                    claims.push(b3_chain(order, h.order(), p, m));
                    claims.push(Claim::new(
                        "length_bound",
                        format!(">= {}", order + m - 2),
                        s1.len(),
                        s1.len() + 2 >= order + m && (order == 16 || s1.len() + 1 >= order + m),
                    ));
                    claims.push(coset("coset_condition", &s1, true)?);
                    let sub = if order != 16 {
                        let mut floors: Vec<(usize, usize)> = h.members().bits().iter().map(|y| (y, m - 1)).collect();
                        floors.push((x, m - 1));
                        choose_sub(g, &s1, &floors, order + m - 1)?
                    } else {
                        None
                    };
                    if let Some(s) = &sub {
                        claims.push(length("sub_length", s, order + m - 1));
                        claims.push(Claim::new(
                            "sub_max_multiplicity",
                            format!("<= {}", m - 1),
                            s.max_multiplicity(),
                            s.max_multiplicity() < m,
                        ));
                        claims.push(coset("sub_coset_condition", s, true)?);
                        claims.push(avoidance("sub_avoidance", s, order)?);
                        claims.push(duality("sub_duality", s, order, m - 1)?);
                    }
                    (x, h, s1, sub)
                }
            }
        }
    };
    Ok(ExtremalWitness {
        family,
        group: g.clone(),
        g: Element::raw(x),
        h,
        sequence,
        subsequence,
        claims,
    })
}

/// Numeric re-check of the inequality chain for the last family.
fn b3_chain(order: usize, h: usize, p: usize, m: usize) -> Claim {
    let lhs_a = order >= m * p * p;
    let lhs_b = m >= 2 * p;
    // m - 2 >= (m-p-1)|G|/(pm) forces p = 2, then m = 4 = exp and |G| = 16
    let tight = (m - 2) * p * m >= (m - p - 1) * order;
    let consequence = !tight || (p == 2 && m == 4 && order == 16);
    let ok = order == m * h && lhs_a && lhs_b && consequence;
    Claim::new(
        "arithmetic_chain",
        "|G| >= mp^2, m >= 2p, tightness only at p = 2, m = 4, |G| = 16",
        format!("|G| = {order}, |H| = {h}, p = {p}, m = {m}, tight = {tight}"),
        ok,
    )
}
