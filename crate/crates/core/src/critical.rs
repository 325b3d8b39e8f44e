//! Critical pairs: Kneser data, the pigeonhole bound, Kemperman's elementary
//! pairs and the structure cases for `|A+B| <= |A|+|B|` with `A+B`
//! aperiodic.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{Element, Group, Subgroup};
use crate::subset::{GroupSubset, ProgressionCover};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct KneserData {
    pub h: Subgroup,
    pub lhs: usize,
    pub bound: i64,
    pub rho: usize,
}

/// Stabilizer of `A_1 + ... + A_n` and both sides of Kneser's inequality.
pub fn kneser_data(sets: &[GroupSubset]) -> Result<KneserData> {
    let first = sets.first().ok_or(Error::EmptyInput)?;
    let g = first.group();
    let mut total = GroupSubset::from_indices(g, &[0])?;
    for s in sets {
        if s.is_empty() {
            return Err(Error::EmptyInput);
        }
        total = total.sumset(s)?;
    }
    let h = total.stabilizer();
    let mut closed = 0usize;
    let mut rho = 0usize;
    for s in sets {
        let c = s.coset_closure(&h).len();
        closed += c;
        rho += c - s.len();
    }
    let bound = closed as i64 - (sets.len() as i64 - 1) * h.order() as i64;
    Ok(KneserData {
        lhs: total.len(),
        bound,
        rho,
        h,
    })
}

/// If `|A| + |B| >= |G| + r`, checks `A + B = G` with every element
/// represented at least `r` times.
pub fn pigeonhole_check(a: &GroupSubset, b: &GroupSubset, r: usize) -> Result<bool> {
    let order = a.group().order();
    if r < 1 || a.len() + b.len() < order + r {
        return Err(Error::Precondition(format!(
            "|A| + |B| = {} is below |G| + r = {}",
            a.len() + b.len(),
            order + r
        )));
    }
    let counts = a.rep_counts(b)?;
    Ok(counts.iter().all(|&c| c >= r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ElementaryTag {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
}

impl ElementaryTag {
    pub const ALL: [ElementaryTag; 8] = [
        ElementaryTag::I,
        ElementaryTag::II,
        ElementaryTag::III,
        ElementaryTag::IV,
        ElementaryTag::V,
        ElementaryTag::VI,
        ElementaryTag::VII,
        ElementaryTag::VIII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElementaryTag::I => "I",
            ElementaryTag::II => "II",
            ElementaryTag::III => "III",
            ElementaryTag::IV => "IV",
            ElementaryTag::V => "V",
            ElementaryTag::VI => "VI",
            ElementaryTag::VII => "VII",
            ElementaryTag::VIII => "VIII",
        }
    }

    /// `|A+B| - |A| - |B|` for pairs of this type.
    pub fn excess(self) -> i64 {
        match self {
            ElementaryTag::I | ElementaryTag::II | ElementaryTag::III | ElementaryTag::IV => -1,
            _ => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
    Both,
}

fn side(on_a: bool, on_b: bool) -> Option<Side> {
    match (on_a, on_b) {
        (true, true) => Some(Side::Both),
        (true, false) => Some(Side::A),
        (false, true) => Some(Side::B),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementaryDetail {
    Singleton {
        side: Side,
    },
    Progressions {
        difference: Element,
    },
    UniqueExpression {
        element: Element,
    },
    /// `B = -(H \ A)`.
    ComplementPair,
    SizeTwo {
        side: Side,
    },
    EqualTriples,
    /// `side` is the summand of size 3.
    DoubledTriple {
        side: Side,
    },
    Klein {
        k1: Subgroup,
        k2: Subgroup,
        k: Subgroup,
        y: Element,
        x_a: Element,
        x_b: Element,
        r_a: usize,
        r_b: usize,
    },
}

/// `X = z_A + A`, `Y = z_B + B` with `A, B ⊆ H = <X+Y>_*` of the given type.
#[derive(Clone, Debug, Serialize)]
pub struct ElementaryType {
    pub tag: ElementaryTag,
    pub hull: Subgroup,
    pub z_a: Element,
    pub z_b: Element,
    pub detail: ElementaryDetail,
}

impl ElementaryType {
    /// Re-checks the defining condition of the type from the witness.
    pub fn verify(&self, x: &GroupSubset, y: &GroupSubset) -> bool {
        let a = x.translate_index(x.group().neg_index(self.z_a.index()));
        let b = y.translate_index(y.group().neg_index(self.z_b.index()));
        let h = &self.hull;
        if !a.is_subset(h.members()) || !b.is_subset(h.members()) {
            return false;
        }
        if let ElementaryDetail::Klein {
            k1,
            k2,
            k,
            y: step,
            x_a,
            x_b,
            r_a,
            r_b,
        } = &self.detail
        {
            let g = x.group();
            let ord = quotient_order(g, k, step.index());
            return k.order() == 4
                && k1.order() == 2
                && k2.order() == 2
                && k1 != k2
                && k1.is_subgroup_of(k)
                && k2.is_subgroup_of(k)
                && !k.contains(*step)
                && h.contains(*step)
                && k.contains(*x_a)
                && k.contains(*x_b)
                && *r_a >= 1
                && *r_b >= 1
                && r_a + r_b < ord
                && klein_chain(g, k1, k2, k, step.index(), x_a.index(), *r_a) == *a.bits()
                && klein_chain(g, k1, k2, k, step.index(), x_b.index(), *r_b) == *b.bits();
        }
        test_type(self.tag, &a, &b, h)
    }
}

/// Order of `y + K` in `G/K`.
pub(crate) fn quotient_order(g: &Group, k: &Subgroup, y: usize) -> usize {
    let mut x = y;
    let mut o = 1;
    while !k.contains_index(x) {
        x = g.add_index(x, y);
        o += 1;
    }
    o
}

/// `∪_{j=from}^{to} (j y + H)` as a bitset.
pub(crate) fn coset_chain(g: &Group, h: &Subgroup, y: usize, from: usize, to: usize) -> Bits {
    let mut out = Bits::new(g.order());
    let mut t = g.mul_index(from as i64, y);
    for _ in from..=to {
        out.union_with(&g.translate_bits(h.members().bits(), t));
        t = g.add_index(t, y);
    }
    out
}

/// `(x + K_1) ∪ (y + K) ∪ ... ∪ ((r-1) y + K) ∪ (r y + K_2)`.
pub(crate) fn klein_chain(
    g: &Group,
    k1: &Subgroup,
    k2: &Subgroup,
    k: &Subgroup,
    y: usize,
    x: usize,
    r: usize,
) -> Bits {
    let mut out = g.translate_bits(k1.members().bits(), x);
    if r >= 2 {
        out.union_with(&coset_chain(g, k, y, 1, r - 1));
    }
    out.union_with(&g.translate_bits(k2.members().bits(), g.mul_index(r as i64, y)));
    out
}

/// Checks the translation-invariant part of a type on normalized `A, B ⊆ H`.
fn test_type(tag: ElementaryTag, a: &GroupSubset, b: &GroupSubset, h: &Subgroup) -> bool {
    let (la, lb) = (a.len(), b.len());
    match tag {
        ElementaryTag::I => la == 1 || lb == 1,
        ElementaryTag::II => progression_difference(a, b, h).is_some(),
        ElementaryTag::III => {
            la + lb == h.order() + 1 && a.unique_expression_elements(b).unwrap().len() == 1
        }
        ElementaryTag::IV => {
            let comp = h.members().difference(a).negate();
            if comp != *b {
                return false;
            }
            let s = a.sum(b);
            s.is_aperiodic() && a.unique_expression_elements(b).unwrap().is_empty()
        }
        ElementaryTag::V => (la == 2 || lb == 2) && a.sum(b).len() == la + lb,
        ElementaryTag::VI => la == 3 && lb == 3 && a == b && a.sum(b).len() == 6,
        ElementaryTag::VII => seven_side(a, b, h).is_some(),
        ElementaryTag::VIII => false,
    }
}

fn progression_difference(a: &GroupSubset, b: &GroupSubset, h: &Subgroup) -> Option<usize> {
    let g = a.group();
    let (la, lb) = (a.len(), b.len());
    if la < 2 || lb < 2 || la + lb < 4 {
        return None;
    }
    h.members().bits().iter().find(|&d| {
        d != 0
            && g.order_of_index(d) + 1 >= la + lb
            && a.is_progression_with_difference(d)
            && b.is_progression_with_difference(d)
    })
}

fn seven_side(a: &GroupSubset, b: &GroupSubset, h: &Subgroup) -> Option<Side> {
    let one = |p: &GroupSubset, q: &GroupSubset| -> bool {
        if p.len() != 3 {
            return false;
        }
        let two = p.sum(p);
        if two.len() != 6 {
            return false;
        }
        let hm = h.members();
        *q == hm.difference(&two).negate() && *p == hm.difference(&p.sum(q)).negate()
    };
    side(one(a, b), one(b, a))
}

/// Every elementary type of `(X, Y)` relative to `H = <X+Y>_*`, one witness
/// per type.
pub fn classify_elementary(x: &GroupSubset, y: &GroupSubset) -> Result<Vec<ElementaryType>> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sum = x.sumset(y)?;
    let h = sum.affine_hull()?;
    let g = x.group();
    let xa = x.min_index().unwrap();
    let yb = y.min_index().unwrap();
    let a = x.translate_index(g.neg_index(xa));
    let b = y.translate_index(g.neg_index(yb));
    let mut out = Vec::new();
    let push = |out: &mut Vec<ElementaryType>, tag, za: usize, zb: usize, detail| {
        out.push(ElementaryType {
            tag,
            hull: h.clone(),
            z_a: Element::raw(za),
            z_b: Element::raw(zb),
            detail,
        })
    };
    let (la, lb) = (a.len(), b.len());

    if let Some(s) = side(la == 1, lb == 1) {
        push(&mut out, ElementaryTag::I, xa, yb, ElementaryDetail::Singleton { side: s });
    }
    if let Some(d) = progression_difference(&a, &b, &h) {
        push(
            &mut out,
            ElementaryTag::II,
            xa,
            yb,
            ElementaryDetail::Progressions {
                difference: Element::raw(d),
            },
        );
    }
    if la + lb == h.order() + 1 {
        let u = a.unique_expression_elements(&b)?;
        if u.len() == 1 {
            push(
                &mut out,
                ElementaryTag::III,
                xa,
                yb,
                ElementaryDetail::UniqueExpression {
                    element: Element::raw(u.min_index().unwrap()),
                },
            );
        }
    }
    if la + lb == h.order() {
        // Y = (z_B + H) \ (w - X) with w = z_A + z_B
        let coset_y = h.coset_of(yb);
        let holes = coset_y.difference(y);
        if let Some(w) = x.negate().translate_onto(&holes) {
            let zb = g.sub_index(w, xa);
            let a4 = x.translate_index(g.neg_index(xa));
            let b4 = y.translate_index(g.neg_index(zb));
            if test_type(ElementaryTag::IV, &a4, &b4, &h) {
                push(&mut out, ElementaryTag::IV, xa, zb, ElementaryDetail::ComplementPair);
            }
        }
    }
    if let Some(s) = side(la == 2, lb == 2) {
        if sum.len() == la + lb {
            push(&mut out, ElementaryTag::V, xa, yb, ElementaryDetail::SizeTwo { side: s });
        }
    }
    if la == 3 && lb == 3 && sum.len() == 6 {
        if let Some(z) = x.translate_onto(y) {
            // A = X - x_a and B = Y - (z + x_a) coincide
            push(
                &mut out,
                ElementaryTag::VI,
                xa,
                g.add_index(z, xa),
                ElementaryDetail::EqualTriples,
            );
        }
    }
    if (la == 3 || lb == 3) && sum.len() + 3 == h.order() {
        'seven: for za in h.coset_of(xa).bits().iter() {
            let a7 = x.translate_index(g.neg_index(za));
            for zb in h.coset_of(yb).bits().iter() {
                let b7 = y.translate_index(g.neg_index(zb));
                if let Some(s) = seven_side(&a7, &b7, &h) {
                    push(
                        &mut out,
                        ElementaryTag::VII,
                        za,
                        zb,
                        ElementaryDetail::DoubledTriple { side: s },
                    );
                    break 'seven;
                }
            }
        }
    }
    if la % 4 == 0 && lb % 4 == 0 && sum.len() == la + lb {
        if let Some(t) = find_klein(x, y, &h)? {
            out.push(t);
        }
    }
    Ok(out)
}

/// Klein-four subgroups `K < H` with the ordered pairs of their order-2
/// subgroups.
fn klein_triples(g: &Group, h: &Subgroup) -> Result<Vec<(Subgroup, Subgroup, Subgroup)>> {
    let mut out = Vec::new();
    for k in g.all_subgroups()? {
        if k.order() != 4 || !k.is_subgroup_of(h) || k == h {
            continue;
        }
        let inv: Vec<usize> = k.members().bits().iter().filter(|&e| e != 0).collect();
        if inv.iter().any(|&e| g.order_of_index(e) != 2) {
            continue;
        }
        let halves: Vec<Subgroup> = inv
            .iter()
            .map(|&e| Subgroup::generated(g, &[Element::raw(e)]))
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    out.push((halves[i].clone(), halves[j].clone(), k.clone()));
                }
            }
        }
    }
    Ok(out)
}

fn find_klein(x: &GroupSubset, y: &GroupSubset, h: &Subgroup) -> Result<Option<ElementaryType>> {
    let g = x.group();
    let r_a = x.len() / 4;
    let r_b = y.len() / 4;
    for (k1, k2, k) in klein_triples(g, h)? {
        let k1_reps: Vec<usize> = k.members().bits().iter().filter(|&e| k1.coset_rep(k1.coset_label(e)) == e).collect();
        for step in h.members().bits().iter() {
            if k.contains_index(step) || r_a + r_b >= quotient_order(g, &k, step) {
                continue;
            }
            let find = |set: &GroupSubset, r: usize| -> Option<(usize, usize)> {
                k1_reps.iter().find_map(|&xk| {
                    let bits = klein_chain(g, &k1, &k2, &k, step, xk, r);
                    GroupSubset::from_bits(g.clone(), bits)
                        .translate_onto(set)
                        .map(|z| (xk, z))
                })
            };
            let Some((x_a, z_a)) = find(x, r_a) else { continue };
            let Some((x_b, z_b)) = find(y, r_b) else { continue };
            return Ok(Some(ElementaryType {
                tag: ElementaryTag::VIII,
                hull: h.clone(),
                z_a: Element::raw(z_a),
                z_b: Element::raw(z_b),
                detail: ElementaryDetail::Klein {
                    k1,
                    k2,
                    k,
                    y: Element::raw(step),
                    x_a: Element::raw(x_a),
                    x_b: Element::raw(x_b),
                    r_a,
                    r_b,
                },
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum KstTag {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "vi")]
    VI,
}

impl KstTag {
    pub fn name(self) -> &'static str {
        match self {
            KstTag::I => "i",
            KstTag::II => "ii",
            KstTag::III => "iii",
            KstTag::IV => "iv",
            KstTag::V => "v",
            KstTag::VI => "vi",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubConditions {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
    pub e: bool,
}

impl SubConditions {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c && self.d && self.e
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KstWitness {
    Elementary {
        types: Vec<ElementaryType>,
    },
    /// `C = A - (G \ (A+B))` equals `D = -(G \ B)`, or `D \ {x}`.
    Complements {
        removed: Option<Element>,
    },
    Progressions {
        p_a: ProgressionCover,
        p_b: ProgressionCover,
    },
    /// `z + S = {x} ∪ (y+H) ∪ ... ∪ (r y + H) ∪ {(r+1) y}` for both summands.
    TwoChain {
        h: Subgroup,
        y: Element,
        x_a: Element,
        x_b: Element,
        r_a: usize,
        r_b: usize,
        z_a: Element,
        z_b: Element,
    },
    /// `z + S = {0} ∪ (y + (H \ {x})) ∪ (2y+H) ∪ ... ∪ (r y + H)`.
    PuncturedChain {
        h: Subgroup,
        y: Element,
        x: Element,
        r_a: usize,
        r_b: usize,
        z_a: Element,
        z_b: Element,
    },
    QuasiPeriodic {
        h: Subgroup,
        a_empty: GroupSubset,
        b_empty: GroupSubset,
        quotient_types: Vec<ElementaryTag>,
        conditions: SubConditions,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct KstCase {
    pub tag: KstTag,
    pub witness: KstWitness,
}

/// `{x} ∪ (y+H) ∪ ... ∪ (r y + H) ∪ {(r+1) y}`.
pub(crate) fn two_chain(g: &Group, h: &Subgroup, y: usize, x: usize, r: usize) -> Bits {
    let mut out = coset_chain(g, h, y, 1, r);
    out.insert(x);
    out.insert(g.mul_index(r as i64 + 1, y));
    out
}

/// `{0} ∪ (y + (H \ {x})) ∪ (2y+H) ∪ ... ∪ (r y + H)`.
pub(crate) fn punctured_chain(g: &Group, h: &Subgroup, y: usize, x: usize, r: usize) -> Bits {
    let mut out = coset_chain(g, h, y, 1, r);
    out.remove(g.add_index(y, x));
    out.insert(0);
    out
}

impl KstCase {
    /// Re-checks the case's defining equalities from the witness.
    pub fn verify(&self, a: &GroupSubset, b: &GroupSubset) -> bool {
        let g = a.group();
        let shift = |s: &GroupSubset, z: &Element| s.translate(*z);
        match &self.witness {
            KstWitness::Elementary { types } => {
                !types.is_empty()
                    && types
                        .iter()
                        .all(|t| t.tag != ElementaryTag::III && t.verify(a, b))
            }
            KstWitness::Complements { removed } => match complement_case(a, b) {
                Some(r) => r == *removed,
                None => false,
            },
            KstWitness::Progressions { p_a, p_b } => {
                let same = p_a.difference == p_b.difference
                    || p_a.length == 1
                    || p_b.length == 1;
                same && a.is_subset(&p_a.members(g))
                    && b.is_subset(&p_b.members(g))
                    && p_a.length <= a.len() + 1
                    && p_b.length <= b.len() + 1
            }
            KstWitness::TwoChain {
                h,
                y,
                x_a,
                x_b,
                r_a,
                r_b,
                z_a,
                z_b,
            } => {
                h.order() == 2
                    && !h.contains(*y)
                    && h.contains(*x_a)
                    && h.contains(*x_b)
                    && *r_a >= 1
                    && *r_b >= 1
                    && r_a + r_b + 3 <= quotient_order(g, h, y.index())
                    && *shift(a, z_a).bits() == two_chain(g, h, y.index(), x_a.index(), *r_a)
                    && *shift(b, z_b).bits() == two_chain(g, h, y.index(), x_b.index(), *r_b)
            }
            KstWitness::PuncturedChain {
                h,
                y,
                x,
                r_a,
                r_b,
                z_a,
                z_b,
            } => {
                let min_r = if h.order() == 2 { 2 } else { 1 };
                !h.is_trivial()
                    && !h.is_full()
                    && !h.contains(*y)
                    && h.contains(*x)
                    && *r_a >= min_r
                    && *r_b >= min_r
                    && r_a + r_b < quotient_order(g, h, y.index())
                    && *shift(a, z_a).bits() == punctured_chain(g, h, y.index(), x.index(), *r_a)
                    && *shift(b, z_b).bits() == punctured_chain(g, h, y.index(), x.index(), *r_b)
            }
            KstWitness::QuasiPeriodic {
                h,
                a_empty,
                b_empty,
                ..
            } => quasi_periodic_conditions(a, b, h, a_empty, b_empty)
                .map(|(c, _)| c.all())
                .unwrap_or(false),
        }
    }
}

/// Every structure case of Theorem-2.2 type for an aperiodic critical pair.
pub fn classify_kst(a: &GroupSubset, b: &GroupSubset) -> Result<Vec<KstCase>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let g = a.group();
    let sum = a.sumset(b)?;
    if g.is_trivial() {
        return Err(Error::Precondition("the group is trivial".into()));
    }
    if !sum.affine_hull()?.is_full() {
        return Err(Error::Precondition("<A+B>_* is a proper subgroup".into()));
    }
    if sum.len() > a.len() + b.len() {
        return Err(Error::Precondition(format!(
            "|A+B| = {} exceeds |A| + |B| = {}",
            sum.len(),
            a.len() + b.len()
        )));
    }
    if !sum.is_aperiodic() {
        return Err(Error::Precondition("A+B is periodic".into()));
    }
    let mut out = Vec::new();

    let types: Vec<ElementaryType> = classify_elementary(a, b)?
        .into_iter()
        .filter(|t| t.tag != ElementaryTag::III)
        .collect();
    if !types.is_empty() {
        out.push(KstCase {
            tag: KstTag::I,
            witness: KstWitness::Elementary { types },
        });
    }

    if sum.len() == a.len() + b.len() && sum.len() + 2 >= g.order() {
        if let Some(removed) = complement_case(a, b) {
            out.push(KstCase {
                tag: KstTag::II,
                witness: KstWitness::Complements { removed },
            });
        }
    }

    if let Some((p_a, p_b)) = common_progressions(a, b)? {
        out.push(KstCase {
            tag: KstTag::III,
            witness: KstWitness::Progressions { p_a, p_b },
        });
    }

    if let Some(w) = find_two_chain(a, b)? {
        out.push(KstCase {
            tag: KstTag::IV,
            witness: w,
        });
    }
    if let Some(w) = find_punctured_chain(a, b)? {
        out.push(KstCase {
            tag: KstTag::V,
            witness: w,
        });
    }
    if let Some(w) = find_quasi_periodic(a, b)? {
        out.push(KstCase {
            tag: KstTag::VI,
            witness: w,
        });
    }
    Ok(out)
}

/// `Some(None)` when `A - (G\(A+B)) = -(G\B)`, `Some(Some(x))` when it
/// equals `-(G\B) \ {x}` and `|A+B| = |G|-1`.
fn complement_case(a: &GroupSubset, b: &GroupSubset) -> Option<Option<Element>> {
    let g = a.group();
    let sum = a.sum(b);
    if sum.len() != a.len() + b.len() || sum.len() + 2 < g.order() {
        return None;
    }
    let c = a.sum(&sum.complement().negate());
    let d = b.complement().negate();
    if c == d {
        return Some(None);
    }
    if sum.len() + 1 == g.order() && c.is_subset(&d) && d.len() == c.len() + 1 {
        let x = d.difference(&c).min_index().unwrap();
        return Some(Some(Element::raw(x)));
    }
    None
}

fn common_progressions(
    a: &GroupSubset,
    b: &GroupSubset,
) -> Result<Option<(ProgressionCover, ProgressionCover)>> {
    let ca = a.progression_covers(a.len() + 1)?;
    let cb = b.progression_covers(b.len() + 1)?;
    // a length-1 progression has every difference
    if let Some(p) = ca.iter().find(|p| p.length == 1) {
        if let Some(q) = cb.first() {
            return Ok(Some((p.clone(), q.clone())));
        }
    }
    if let Some(q) = cb.iter().find(|q| q.length == 1) {
        if let Some(p) = ca.first() {
            return Ok(Some((p.clone(), q.clone())));
        }
    }
    for p in &ca {
        if let Some(q) = cb.iter().find(|q| q.difference == p.difference) {
            return Ok(Some((p.clone(), q.clone())));
        }
    }
    Ok(None)
}

fn find_two_chain(a: &GroupSubset, b: &GroupSubset) -> Result<Option<KstWitness>> {
    let g = a.group();
    if a.len() < 4 || b.len() < 4 || !a.len().is_multiple_of(2) || !b.len().is_multiple_of(2) {
        return Ok(None);
    }
    let r_a = (a.len() - 2) / 2;
    let r_b = (b.len() - 2) / 2;
    for h in g.all_subgroups()?.iter().filter(|h| h.order() == 2) {
        for y in 0..g.order() {
            if h.contains_index(y) || r_a + r_b + 3 > quotient_order(g, h, y) {
                continue;
            }
            let fit = |s: &GroupSubset, r: usize| -> Option<(usize, usize)> {
                h.members().bits().iter().find_map(|x| {
                    let target = GroupSubset::from_bits(g.clone(), two_chain(g, h, y, x, r));
                    // z + S = target
                    s.translate_onto(&target).map(|z| (x, z))
                })
            };
            let Some((x_a, z_a)) = fit(a, r_a) else { continue };
            let Some((x_b, z_b)) = fit(b, r_b) else { continue };
            return Ok(Some(KstWitness::TwoChain {
                h: h.clone(),
                y: Element::raw(y),
                x_a: Element::raw(x_a),
                x_b: Element::raw(x_b),
                r_a,
                r_b,
                z_a: Element::raw(z_a),
                z_b: Element::raw(z_b),
            }));
        }
    }
    Ok(None)
}

fn find_punctured_chain(a: &GroupSubset, b: &GroupSubset) -> Result<Option<KstWitness>> {
    let g = a.group();
    for h in g.all_subgroups()? {
        if h.is_trivial() || h.is_full() {
            continue;
        }
        let k = h.order();
        if !a.len().is_multiple_of(k) || !b.len().is_multiple_of(k) {
            continue;
        }
        let (r_a, r_b) = (a.len() / k, b.len() / k);
        let min_r = if k == 2 { 2 } else { 1 };
        if r_a < min_r || r_b < min_r {
            continue;
        }
        for y in 0..g.order() {
            if h.contains_index(y) || r_a + r_b >= quotient_order(g, h, y) {
                continue;
            }
            for x in h.members().bits().iter() {
                let ta = GroupSubset::from_bits(g.clone(), punctured_chain(g, h, y, x, r_a));
                let Some(z_a) = a.translate_onto(&ta) else { continue };
                let tb = GroupSubset::from_bits(g.clone(), punctured_chain(g, h, y, x, r_b));
                let Some(z_b) = b.translate_onto(&tb) else { continue };
                return Ok(Some(KstWitness::PuncturedChain {
                    h: h.clone(),
                    y: Element::raw(y),
                    x: Element::raw(x),
                    r_a,
                    r_b,
                    z_a: Element::raw(z_a),
                    z_b: Element::raw(z_b),
                }));
            }
        }
    }
    Ok(None)
}

/// Evaluates sub-conditions (a)-(e) of the quasi-periodic case; also returns
/// the elementary types of the image pair.
fn quasi_periodic_conditions(
    a: &GroupSubset,
    b: &GroupSubset,
    h: &Subgroup,
    a_empty: &GroupSubset,
    b_empty: &GroupSubset,
) -> Result<(SubConditions, Vec<ElementaryTag>)> {
    let g = a.group();
    if h.is_trivial() || h.is_full() || a_empty.is_empty() || b_empty.is_empty() {
        return Err(Error::InvalidArgument("degenerate quasi-periodic data".into()));
    }
    let q = g.quotient(h)?;
    let pa = q.push_subset(a);
    let pb = q.push_subset(b);
    let quotient_types: Vec<ElementaryTag> = classify_elementary(&pa, &pb)?
        .into_iter()
        .map(|t| t.tag)
        .filter(|t| matches!(t, ElementaryTag::I | ElementaryTag::II | ElementaryTag::III))
        .collect();
    let cond_a = !quotient_types.is_empty();

    let ea = q.image_index(a_empty.min_index().unwrap());
    let eb = q.image_index(b_empty.min_index().unwrap());
    let target = q.target().add_index(ea, eb);
    let cond_b = pa.rep_count_index(&pb, target) == 1;

    let sum = a.sum(b);
    let tight = sum.len() == a.len() + b.len();
    let rest_ok = |s: &GroupSubset, e: &GroupSubset| {
        let rest = s.difference(e);
        let lhs = rest.len() as i64;
        let rhs = rest.coset_closure(h).len() as i64 - 1;
        lhs > rhs || (lhs == rhs && tight)
    };
    let cond_c = rest_ok(a, a_empty) && rest_ok(b, b_empty);

    let core = a_empty.sum(b_empty);
    let diff = core.len() as i64 - a_empty.len() as i64 - b_empty.len() as i64;
    let cap = sum.len() as i64 - a.len() as i64 - b.len() as i64;
    let cond_d = core.is_aperiodic() && -1 <= diff && diff <= cap;

    let cond_e = sum.difference(&core).is_periodic_under(h);
    Ok((
        SubConditions {
            a: cond_a,
            b: cond_b,
            c: cond_c,
            d: cond_d,
            e: cond_e,
        },
        quotient_types,
    ))
}

fn find_quasi_periodic(a: &GroupSubset, b: &GroupSubset) -> Result<Option<KstWitness>> {
    let g = a.group();
    for h in g.all_subgroups()? {
        if h.is_trivial() || h.is_full() {
            continue;
        }
        let da = a.coset_decomposition(h)?;
        let db = b.coset_decomposition(h)?;
        for (_, sa) in &da.slices {
            for (_, sb) in &db.slices {
                let (conds, types) = quasi_periodic_conditions(a, b, h, sa, sb)?;
                if conds.all() {
                    return Ok(Some(KstWitness::QuasiPeriodic {
                        h: h.clone(),
                        a_empty: sa.clone(),
                        b_empty: sb.clone(),
                        quotient_types: types,
                        conditions: conds,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    fn set(g: &Group, xs: &[usize]) -> GroupSubset {
        GroupSubset::from_indices(g, xs).unwrap()
    }

    fn tags(v: &[ElementaryType]) -> Vec<ElementaryTag> {
        v.iter().map(|t| t.tag).collect()
    }

    #[test]
    fn kneser_examples() {
        let c5 = make_group(&[5]).unwrap();
        let k = kneser_data(&[set(&c5, &[0, 1]), set(&c5, &[0, 1])]).unwrap();
        assert!(k.h.is_trivial());
        assert_eq!((k.lhs, k.bound, k.rho), (3, 3, 0));

        // (A_1 + G) \ A_1 and (A_2 + G) \ A_2 have two elements each
        let c4 = make_group(&[4]).unwrap();
        let k = kneser_data(&[set(&c4, &[0, 2]), set(&c4, &[0, 1])]).unwrap();
        assert!(k.h.is_full());
        assert_eq!((k.lhs, k.bound, k.rho), (4, 4, 4));

        let c6 = make_group(&[6]).unwrap();
        let a = set(&c6, &[0, 1]);
        let k = kneser_data(&[a.clone(), a.clone(), a]).unwrap();
        assert!(k.h.is_trivial());
        assert_eq!((k.lhs, k.bound), (4, 4));
        assert_eq!(kneser_data(&[]).unwrap_err(), Error::EmptyInput);
    }

    #[test]
    fn pigeonhole_examples() {
        let c4 = make_group(&[4]).unwrap();
        let a = set(&c4, &[0, 1, 2]);
        assert!(pigeonhole_check(&a, &a, 2).unwrap());
        let c3 = make_group(&[3]).unwrap();
        assert!(pigeonhole_check(&GroupSubset::full(&c3), &set(&c3, &[0]), 1).unwrap());
        let c5 = make_group(&[5]).unwrap();
        let a = set(&c5, &[0, 1]);
        assert!(matches!(pigeonhole_check(&a, &a, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn elementary_examples() {
        let c7 = make_group(&[7]).unwrap();
        let t = classify_elementary(&set(&c7, &[5]), &set(&c7, &[0, 2, 3])).unwrap();
        assert!(tags(&t).contains(&ElementaryTag::I));

        let t = classify_elementary(&set(&c7, &[0, 1]), &set(&c7, &[0, 1, 2])).unwrap();
        let ii = t.iter().find(|t| t.tag == ElementaryTag::II).unwrap();
        match ii.detail {
            ElementaryDetail::Progressions { difference } => assert_eq!(difference.index(), 1),
            _ => panic!(),
        }

        let a = set(&c7, &[0, 1, 3]);
        let b = set(&c7, &[1, 2, 3, 5]);
        let t = classify_elementary(&a, &b).unwrap();
        assert!(tags(&t).contains(&ElementaryTag::IV), "{:?}", tags(&t));
        for w in &t {
            assert!(w.verify(&a, &b));
        }
    }

    #[test]
    fn klein_type_is_found() {
        let g = make_group(&[2, 8]).unwrap();
        let e = |a, b| g.from_coords(&[a, b]).unwrap();
        let k1 = Subgroup::generated(&g, &[e(1, 0)]);
        let k2 = Subgroup::generated(&g, &[e(0, 4)]);
        let k = Subgroup::generated(&g, &[e(1, 0), e(0, 4)]);
        let y = e(0, 1).index();
        let a = GroupSubset::from_bits(g.clone(), klein_chain(&g, &k1, &k2, &k, y, 0, 1));
        let b = GroupSubset::from_bits(g.clone(), klein_chain(&g, &k1, &k2, &k, y, 0, 1));
        let t = classify_elementary(&a, &b).unwrap();
        let viii = t.iter().find(|t| t.tag == ElementaryTag::VIII).expect("type VIII");
        assert!(viii.verify(&a, &b));
        assert_eq!(a.sumset(&b).unwrap().len(), 8);
    }

    #[test]
    fn kst_examples() {
        let c7 = make_group(&[7]).unwrap();
        let a = set(&c7, &[0, 1]);
        let b = set(&c7, &[0, 1, 2]);
        let cases = classify_kst(&a, &b).unwrap();
        let first = cases.iter().find(|c| c.tag == KstTag::I).unwrap();
        match &first.witness {
            KstWitness::Elementary { types } => assert!(types.iter().any(|t| t.tag == ElementaryTag::II)),
            _ => panic!(),
        }
        for c in &cases {
            assert!(c.verify(&a, &b));
        }

        let a = set(&c7, &[0, 1, 3]);
        let b = set(&c7, &[1, 2, 3, 5]);
        let cases = classify_kst(&a, &b).unwrap();
        assert!(cases.iter().any(|c| matches!(&c.witness,
            KstWitness::Elementary { types } if types.iter().any(|t| t.tag == ElementaryTag::IV))));

        let c8 = make_group(&[8]).unwrap();
        let a = set(&c8, &[0, 1, 2]);
        let b = set(&c8, &[0, 1, 2, 4]);
        let s = a.sumset(&b).unwrap();
        assert_eq!(s.len(), 7);
        assert!(!classify_kst(&a, &b).unwrap().is_empty());
        assert!(matches!(
            classify_kst(&set(&c8, &[0, 4]), &set(&c8, &[0, 4])),
            Err(Error::Precondition(_))
        ));
    }
}
