//! Subsets of a finite abelian group and the sumset algebra over them.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{gcd, Element, Group, Subgroup};
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

#[derive(Clone, PartialEq, Eq)]
pub struct GroupSubset {
    group: Group,
    bits: Bits,
}

impl Hash for GroupSubset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.group.moduli().hash(state);
        self.bits.hash(state);
    }
}

impl PartialOrd for GroupSubset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupSubset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.group
            .moduli()
            .cmp(other.group.moduli())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

fn check_same(a: &Group, b: &Group) -> Result<()> {
    if a.same(b) {
        Ok(())
    } else {
        Err(Error::GroupMismatch {
            left: a.to_string(),
            right: b.to_string(),
        })
    }
}

impl GroupSubset {
    pub fn empty(g: &Group) -> Self {
        GroupSubset {
            group: g.clone(),
            bits: Bits::new(g.order()),
        }
    }

    pub fn full(g: &Group) -> Self {
        GroupSubset {
            group: g.clone(),
            bits: Bits::full(g.order()),
        }
    }

    pub fn singleton(g: &Group, x: Element) -> Self {
        GroupSubset::from_indices_unchecked(g, [x.index()])
    }

    pub fn from_bits(group: Group, bits: Bits) -> Self {
        debug_assert_eq!(bits.len(), group.order());
        GroupSubset { group, bits }
    }

    pub fn from_indices(g: &Group, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            g.element(i)?;
        }
        Ok(GroupSubset::from_indices_unchecked(g, indices.iter().copied()))
    }

    pub fn from_elements(g: &Group, elems: &[Element]) -> Result<Self> {
        let idx: Vec<usize> = elems.iter().map(|e| e.index()).collect();
        GroupSubset::from_indices(g, &idx)
    }

    pub(crate) fn from_indices_unchecked(g: &Group, indices: impl IntoIterator<Item = usize>) -> Self {
        GroupSubset {
            group: g.clone(),
            bits: Bits::from_indices(g.order(), indices),
        }
    }

    #[inline]
    pub fn group(&self) -> &Group {
        &self.group
    }

    #[inline]
    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.bits.contains(x.index())
    }

    #[inline]
    pub fn contains_index(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.bits.iter().collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.bits.iter().map(Element::raw)
    }

    pub fn min_index(&self) -> Option<usize> {
        self.bits.first()
    }

    pub fn insert(&mut self, x: Element) {
        self.bits.insert(x.index());
    }

    pub fn union(&self, other: &GroupSubset) -> GroupSubset {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        GroupSubset::from_bits(self.group.clone(), bits)
    }

    pub fn intersection(&self, other: &GroupSubset) -> GroupSubset {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        GroupSubset::from_bits(self.group.clone(), bits)
    }

    pub fn difference(&self, other: &GroupSubset) -> GroupSubset {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        GroupSubset::from_bits(self.group.clone(), bits)
    }

    /// `G \ A`.
    pub fn complement(&self) -> GroupSubset {
        GroupSubset::from_bits(self.group.clone(), self.bits.complement())
    }

    pub fn is_subset(&self, other: &GroupSubset) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &GroupSubset) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn translate(&self, t: Element) -> GroupSubset {
        self.translate_index(t.index())
    }

    pub fn translate_index(&self, t: usize) -> GroupSubset {
        GroupSubset::from_bits(self.group.clone(), self.group.translate_bits(&self.bits, t))
    }

    /// `-A`.
    pub fn negate(&self) -> GroupSubset {
        GroupSubset::from_bits(self.group.clone(), self.group.negate_bits(&self.bits))
    }

    /// `{k a : a in A}` (not necessarily of the same size).
    pub fn scale(&self, k: i64) -> GroupSubset {
        GroupSubset::from_indices_unchecked(
            &self.group,
            self.bits.iter().map(|a| self.group.mul_index(k, a)),
        )
    }

    /// Image under a permutation table of the group.
    pub fn map(&self, table: &[u32]) -> GroupSubset {
        GroupSubset::from_indices_unchecked(&self.group, self.bits.iter().map(|a| table[a] as usize))
    }

    /// `A + B`, built as the union of translates of the larger set.
    pub fn sumset(&self, other: &GroupSubset) -> Result<GroupSubset> {
        check_same(&self.group, &other.group)?;
        Ok(self.sum(other))
    }

    pub(crate) fn sum(&self, other: &GroupSubset) -> GroupSubset {
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let g = &self.group;
        let mut out = Bits::new(g.order());
        if small.is_empty() {
            return GroupSubset::from_bits(g.clone(), out);
        }
        for t in small.bits.iter() {
            out.union_with(&g.translate_bits(&big.bits, t));
            if out.is_full() {
                break;
            }
        }
        GroupSubset::from_bits(g.clone(), out)
    }

    /// `A - B`.
    pub fn minus(&self, other: &GroupSubset) -> Result<GroupSubset> {
        check_same(&self.group, &other.group)?;
        Ok(self.sum(&other.negate()))
    }

    /// `r_{A+B}(x) = |(x - B) ∩ A|`.
    pub fn rep_count(&self, other: &GroupSubset, x: Element) -> Result<usize> {
        check_same(&self.group, &other.group)?;
        Ok(self.rep_count_index(other, x.index()))
    }

    pub(crate) fn rep_count_index(&self, other: &GroupSubset, x: usize) -> usize {
        let g = &self.group;
        other
            .bits
            .iter()
            .filter(|&b| self.bits.contains(g.sub_index(x, b)))
            .count()
    }

    /// Representation counts for every element of `G`.
    pub fn rep_counts(&self, other: &GroupSubset) -> Result<Vec<usize>> {
        check_same(&self.group, &other.group)?;
        let g = &self.group;
        let mut counts = vec![0usize; g.order()];
        for a in self.bits.iter() {
            for b in other.bits.iter() {
                counts[g.add_index(a, b)] += 1;
            }
        }
        Ok(counts)
    }

    pub fn unique_expression_elements(&self, other: &GroupSubset) -> Result<GroupSubset> {
        let counts = self.rep_counts(other)?;
        Ok(GroupSubset::from_indices_unchecked(
            &self.group,
            (0..counts.len()).filter(|&x| counts[x] == 1),
        ))
    }

    /// `nA`, with `0A = {0}`.
    pub fn iterated_sumset(&self, n: i64) -> Result<GroupSubset> {
        if n < 0 {
            return Err(Error::InvalidArgument(format!("negative multiple {n}")));
        }
        Ok(self.multiples(n as usize)?.pop().unwrap())
    }

    /// `[0A, 1A, ..., nA]`. Once some `kA` is the whole group the rest are
    /// copies.
    pub fn multiples(&self, n: usize) -> Result<Vec<GroupSubset>> {
        if n >= 1 && self.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut out = Vec::with_capacity(n + 1);
        out.push(GroupSubset::from_indices_unchecked(&self.group, [0]));
        for k in 1..=n {
            let prev = &out[k - 1];
            let next = if prev.is_full() {
                prev.clone()
            } else if k == 1 {
                self.clone()
            } else {
                prev.sum(self)
            };
            out.push(next);
        }
        Ok(out)
    }

    /// `H(A) = {x : x + A = A}`; the stabilizer of the empty set is `G`.
    pub fn stabilizer(&self) -> Subgroup {
        let g = &self.group;
        let Some(a0) = self.min_index() else {
            return Subgroup::full(g);
        };
        if self.is_full() {
            return Subgroup::full(g);
        }
        let mut members = Bits::new(g.order());
        for a in self.bits.iter() {
            let x = g.sub_index(a, a0);
            if members.contains(x) {
                continue;
            }
            if g.translate_bits(&self.bits, x) == self.bits {
                members.insert(x);
            }
        }
        Subgroup::from_closed_bits(g, members)
    }

    pub fn is_aperiodic(&self) -> bool {
        self.stabilizer().is_trivial()
    }

    /// Whether `A` is a union of `H`-cosets.
    pub fn is_periodic_under(&self, h: &Subgroup) -> bool {
        self.bits.iter().all(|a| {
            h.members()
                .bits
                .iter()
                .all(|x| self.bits.contains(self.group.add_index(a, x)))
        })
    }

    /// `<A>_* = <A - A>`, the smallest subgroup with a coset containing `A`.
    pub fn affine_hull(&self) -> Result<Subgroup> {
        let g = &self.group;
        let a0 = self.min_index().ok_or(Error::EmptyInput)?;
        let mut span = g.closure_bits([]);
        for a in self.bits.iter() {
            let d = g.sub_index(a, a0);
            if !span.contains(d) {
                span = g.extend_bits(&span, d);
            }
        }
        Ok(Subgroup::from_closed_bits(g, span))
    }

    /// `H + A`.
    pub fn coset_closure(&self, h: &Subgroup) -> GroupSubset {
        self.sum(h.members())
    }

    /// `(H + A) \ A`.
    pub fn relative_complement(&self, h: &Subgroup) -> GroupSubset {
        self.coset_closure(h).difference(self)
    }

    pub fn coset_decomposition(&self, h: &Subgroup) -> Result<CosetDecomposition> {
        check_same(&self.group, h.group())?;
        if self.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut slices: Vec<(Element, GroupSubset)> = Vec::new();
        let mut seen = vec![usize::MAX; h.coset_count()];
        for a in self.bits.iter() {
            let l = h.coset_label(a);
            if seen[l] == usize::MAX {
                seen[l] = slices.len();
                slices.push((
                    Element::raw(h.coset_rep(l)),
                    GroupSubset::empty(&self.group),
                ));
            }
            slices[seen[l]].1.bits.insert(a);
        }
        slices.sort_by_key(|(rep, _)| *rep);
        Ok(CosetDecomposition {
            subgroup: h.clone(),
            slices,
        })
    }

    /// Every `H`-quasi-periodic decomposition of `A`; see
    /// [`QuasiPeriodicDecomposition`] for the convention on periodic sets.
    pub fn quasi_periodic_decompositions(&self, h: &Subgroup) -> Result<Vec<QuasiPeriodicDecomposition>> {
        let dec = self.coset_decomposition(h)?;
        let proper: Vec<&(Element, GroupSubset)> = dec
            .slices
            .iter()
            .filter(|(_, s)| s.len() < h.order())
            .collect();
        let (a_empty, fully_periodic) = match proper.len() {
            0 => (dec.slices[0].1.clone(), true),
            1 => (proper[0].1.clone(), false),
            _ => return Ok(Vec::new()),
        };
        Ok(vec![QuasiPeriodicDecomposition {
            subgroup: h.clone(),
            periodic_part: self.difference(&a_empty),
            a_empty,
            fully_periodic,
        }])
    }

    /// If `A` is an arithmetic progression with difference `d`, its first term.
    /// A full coset of `<d>` reports its minimal element.
    pub fn progression_start(&self, d: usize) -> Option<usize> {
        let g = &self.group;
        let n = self.len();
        if n == 0 {
            return None;
        }
        if n == 1 {
            return self.min_index();
        }
        if d == 0 {
            return None;
        }
        let mut start = None;
        for a in self.bits.iter() {
            if !self.bits.contains(g.sub_index(a, d)) {
                if start.is_some() {
                    return None;
                }
                start = Some(a);
            }
        }
        match start {
            Some(s) => {
                let mut x = s;
                for _ in 1..n {
                    x = g.add_index(x, d);
                    if !self.bits.contains(x) {
                        return None;
                    }
                }
                Some(s)
            }
            None => {
                // every a - d lies in A: A is a union of <d>-cosets
                let a0 = self.min_index().unwrap();
                (g.order_of_index(d) == n).then_some(a0)
            }
        }
    }

    pub fn is_progression_with_difference(&self, d: usize) -> bool {
        self.progression_start(d).is_some()
    }

    /// All progressions `P` of length at most `max_len` covering `A`, up to
    /// reversal, sorted by (length, difference, start).
    pub fn progression_covers(&self, max_len: usize) -> Result<Vec<ProgressionCover>> {
        let g = &self.group;
        let a0 = self.min_index().ok_or(Error::EmptyInput)?;
        let k = self.len();
        if max_len < k {
            return Err(Error::InvalidArgument(format!(
                "max_len {max_len} is smaller than |A| = {k}"
            )));
        }
        let mut keys: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
        if k == 1 {
            keys.insert((1, 0, a0));
        }
        for d in 1..g.order() {
            let ord = g.order_of_index(d);
            let top = max_len.min(ord);
            if top < k.max(2) {
                continue;
            }
            for j in 0..top {
                let s = g.sub_index(a0, g.mul_index(j as i64, d));
                // shortest prefix of s, s+d, ... containing A
                let mut hit = 0;
                let mut x = s;
                let mut need = None;
                for len in 1..=top {
                    if self.bits.contains(x) {
                        hit += 1;
                    }
                    if hit == k {
                        need = Some(len);
                        break;
                    }
                    x = g.add_index(x, d);
                }
                let Some(need) = need else { continue };
                for len in need.max(2)..=top {
                    keys.insert(canonical_progression(g, d, s, len));
                }
            }
        }
        Ok(keys
            .into_iter()
            .map(|(len, d, s)| ProgressionCover::build(self, d, s, len))
            .collect())
    }

    /// `s A + y` on a cyclic group with `gcd(s, |G|) = 1`.
    pub fn affine_transform(&self, s: i64, y: Element) -> Result<GroupSubset> {
        let g = &self.group;
        if !g.is_cyclic() {
            return Err(Error::InvalidTransform(format!("{g} is not cyclic")));
        }
        let m = g.order() as i64;
        if gcd(s.rem_euclid(m) as usize, m as usize) != 1 {
            return Err(Error::InvalidTransform(format!("gcd({s}, {m}) != 1")));
        }
        g.element(y.index())?;
        Ok(self.scale(s).translate(y))
    }

    /// Whether some translate of `A` equals `B`; returns the smallest `z`
    /// with `z + A = B`.
    pub fn translate_onto(&self, other: &GroupSubset) -> Option<usize> {
        if self.len() != other.len() {
            return None;
        }
        let g = &self.group;
        let a0 = self.min_index()?;
        let mut out = None;
        for b in other.bits.iter() {
            let z = g.sub_index(b, a0);
            if g.translate_bits(&self.bits, z) == other.bits {
                out = Some(out.map_or(z, |o: usize| o.min(z)));
            }
        }
        out
    }
}

/// Canonical key for the progression `{s + k d : k < len}` up to reversal.
fn canonical_progression(g: &Group, d: usize, s: usize, len: usize) -> (usize, usize, usize) {
    let nd = g.neg_index(d);
    if len == g.order_of_index(d) {
        // a full coset of <d>: every start describes the same set
        let coset = g.translate_bits(&g.closure_bits([d]), s);
        return (len, d.min(nd), coset.first().unwrap());
    }
    let end = g.add_index(s, g.mul_index(len as i64 - 1, d));
    if nd < d {
        (len, nd, end)
    } else if nd == d {
        (len, d, s.min(end))
    } else {
        (len, d, s)
    }
}

impl fmt::Display for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.bits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.group, self)
    }
}

impl Serialize for GroupSubset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.bits.iter())
    }
}

/// The `H`-coset slices of a set, keyed by the minimal element of each coset.
#[derive(Clone, Debug, Serialize)]
pub struct CosetDecomposition {
    pub subgroup: Subgroup,
    pub slices: Vec<(Element, GroupSubset)>,
}

/// `A = (A \ A_empty) ∪ A_empty` with the first part `H`-periodic and
/// `A_empty` inside one coset. When `A` is itself `H`-periodic the slice with
/// the smallest coset representative is chosen and `fully_periodic` is set.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiPeriodicDecomposition {
    pub subgroup: Subgroup,
    pub periodic_part: GroupSubset,
    pub a_empty: GroupSubset,
    pub fully_periodic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgressionCover {
    pub difference: Element,
    pub start: Element,
    pub length: usize,
    /// Members of `P \ A`, in progression order.
    pub holes: Vec<Element>,
}

impl ProgressionCover {
    fn build(a: &GroupSubset, d: usize, s: usize, len: usize) -> ProgressionCover {
        let g = a.group();
        let mut holes = Vec::new();
        let mut x = s;
        for _ in 0..len {
            if !a.contains_index(x) {
                holes.push(Element::raw(x));
            }
            x = g.add_index(x, d);
        }
        ProgressionCover {
            difference: Element::raw(d),
            start: Element::raw(s),
            length: len,
            holes,
        }
    }

    pub fn members(&self, g: &Group) -> GroupSubset {
        let mut x = self.start.index();
        let mut out = Vec::with_capacity(self.length);
        for _ in 0..self.length {
            out.push(x);
            x = g.add_index(x, self.difference.index());
        }
        GroupSubset::from_indices_unchecked(g, out)
    }

    /// Positions of the holes within the progression (0-based).
    pub fn hole_positions(&self, g: &Group) -> Vec<usize> {
        let mut x = self.start.index();
        let mut out = Vec::new();
        for k in 0..self.length {
            if self.holes.iter().any(|h| h.index() == x) {
                out.push(k);
            }
            x = g.add_index(x, self.difference.index());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    fn set(g: &Group, xs: &[usize]) -> GroupSubset {
        GroupSubset::from_indices(g, xs).unwrap()
    }

    fn naive_sum(a: &GroupSubset, b: &GroupSubset) -> Vec<usize> {
        let g = a.group();
        let mut v: Vec<usize> = a
            .indices()
            .iter()
            .flat_map(|&x| b.indices().into_iter().map(move |y| g.add_index(x, y)))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn sumset_examples() {
        let c5 = make_group(&[5]).unwrap();
        assert_eq!(set(&c5, &[0, 1]).sumset(&set(&c5, &[0, 1])).unwrap().indices(), vec![0, 1, 2]);
        let c7 = make_group(&[7]).unwrap();
        let a = set(&c7, &[0, 1, 3]);
        let b = set(&c7, &[1, 2, 3, 5]);
        assert_eq!(a.sumset(&b).unwrap().indices(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(a.sumset(&b).unwrap().indices(), naive_sum(&a, &b));
        let zero = set(&c7, &[0]);
        assert_eq!(zero.sumset(&b).unwrap(), b);
        let c4 = make_group(&[4]).unwrap();
        assert!(matches!(
            set(&c4, &[0]).sumset(&zero),
            Err(Error::GroupMismatch { .. })
        ));
        assert!(GroupSubset::empty(&c7).sumset(&b).unwrap().is_empty());
    }

    #[test]
    fn rep_count_examples() {
        let c4 = make_group(&[4]).unwrap();
        let a = set(&c4, &[0, 1]);
        let b = set(&c4, &[0, 1, 2]);
        assert_eq!(a.rep_count(&b, Element::raw(2)).unwrap(), 2);
        assert_eq!(a.unique_expression_elements(&b).unwrap().indices(), vec![0, 3]);
        let c7 = make_group(&[7]).unwrap();
        let a = set(&c7, &[0, 1, 3]);
        let b = set(&c7, &[1, 2, 3, 5]);
        assert_eq!(a.rep_count(&b, Element::raw(1)).unwrap(), 2);
        assert!(a.unique_expression_elements(&b).unwrap().is_empty());
        let s = set(&c7, &[0]);
        assert_eq!(s.rep_count(&s, Element::raw(0)).unwrap(), 1);
        let a = set(&c7, &[2]);
        let b = set(&c7, &[6]);
        assert_eq!(a.unique_expression_elements(&b).unwrap().indices(), vec![1]);
    }

    #[test]
    fn iterated_sumset_examples() {
        let c12 = make_group(&[12]).unwrap();
        let a = set(&c12, &[0, 1, 2]);
        assert_eq!(a.iterated_sumset(0).unwrap().indices(), vec![0]);
        assert_eq!(a.iterated_sumset(4).unwrap().indices(), (0..=8).collect::<Vec<_>>());
        let c8 = make_group(&[8]).unwrap();
        let a = set(&c8, &[0, 4, 1]);
        let three = a.iterated_sumset(3).unwrap();
        let mut brute = Vec::new();
        for x in [0, 4, 1] {
            for y in [0, 4, 1] {
                for z in [0, 4, 1] {
                    brute.push((x + y + z) % 8);
                }
            }
        }
        brute.sort();
        brute.dedup();
        assert_eq!(three.indices(), brute);
        assert_eq!(three.len(), 7);
        assert!(matches!(a.iterated_sumset(-1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn stabilizer_examples() {
        let c6 = make_group(&[6]).unwrap();
        assert_eq!(set(&c6, &[0, 3]).stabilizer().members().indices(), vec![0, 3]);
        assert!(set(&c6, &[0, 1]).stabilizer().is_trivial());
        assert!(GroupSubset::full(&c6).stabilizer().is_full());
        assert!(GroupSubset::empty(&c6).stabilizer().is_full());
    }

    #[test]
    fn affine_hull_examples() {
        let c8 = make_group(&[8]).unwrap();
        assert_eq!(set(&c8, &[1, 5]).affine_hull().unwrap().members().indices(), vec![0, 4]);
        let c24 = make_group(&[2, 4]).unwrap();
        let x = c24.from_coords(&[0, 1]).unwrap();
        assert!(GroupSubset::singleton(&c24, x).affine_hull().unwrap().is_trivial());
        let c6 = make_group(&[6]).unwrap();
        assert!(set(&c6, &[1, 2, 4]).affine_hull().unwrap().is_full());
        assert_eq!(GroupSubset::empty(&c6).affine_hull().unwrap_err(), Error::EmptyInput);
    }

    #[test]
    fn coset_decomposition_examples() {
        let c8 = make_group(&[8]).unwrap();
        let h = Subgroup::generated(&c8, &[Element::raw(4)]);
        let d = set(&c8, &[0, 4, 1]).coset_decomposition(&h).unwrap();
        let slices: Vec<Vec<usize>> = d.slices.iter().map(|(_, s)| s.indices()).collect();
        assert_eq!(slices, vec![vec![0, 4], vec![1]]);

        let c4 = make_group(&[4]).unwrap();
        let d = set(&c4, &[1, 3]).coset_decomposition(&Subgroup::full(&c4)).unwrap();
        assert_eq!(d.slices.len(), 1);

        let c24 = make_group(&[2, 4]).unwrap();
        let h = Subgroup::generated(&c24, &[c24.from_coords(&[0, 2]).unwrap()]);
        let a = GroupSubset::from_elements(
            &c24,
            &[
                c24.from_coords(&[0, 0]).unwrap(),
                c24.from_coords(&[0, 1]).unwrap(),
                c24.from_coords(&[1, 0]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(a.coset_decomposition(&h).unwrap().slices.len(), 3);
    }

    #[test]
    fn quasi_periodic_examples() {
        let c8 = make_group(&[8]).unwrap();
        let h = Subgroup::generated(&c8, &[Element::raw(4)]);
        let q = set(&c8, &[0, 4, 1]).quasi_periodic_decompositions(&h).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].periodic_part.indices(), vec![0, 4]);
        assert_eq!(q[0].a_empty.indices(), vec![1]);
        assert!(!q[0].fully_periodic);
        assert!(set(&c8, &[0, 1]).quasi_periodic_decompositions(&h).unwrap().is_empty());

        let c4 = make_group(&[4]).unwrap();
        let h = Subgroup::generated(&c4, &[Element::raw(2)]);
        let q = set(&c4, &[0, 2]).quasi_periodic_decompositions(&h).unwrap();
        assert_eq!(q.len(), 1);
        assert!(q[0].periodic_part.is_empty());
        assert_eq!(q[0].a_empty.indices(), vec![0, 2]);
        assert!(q[0].fully_periodic);
    }

    #[test]
    fn relative_complement_examples() {
        let c4 = make_group(&[4]).unwrap();
        assert_eq!(
            set(&c4, &[0, 1]).relative_complement(&Subgroup::full(&c4)).indices(),
            vec![2, 3]
        );
        let c8 = make_group(&[8]).unwrap();
        let h = Subgroup::generated(&c8, &[Element::raw(4)]);
        assert_eq!(set(&c8, &[0, 1]).relative_complement(&h).indices(), vec![4, 5]);
        assert!(set(&c8, &[0, 4]).relative_complement(&h).is_empty());
    }

    #[test]
    fn progression_cover_examples() {
        let c7 = make_group(&[7]).unwrap();
        let covers = set(&c7, &[0, 1, 2]).progression_covers(4).unwrap();
        assert!(covers
            .iter()
            .any(|c| c.difference.index() == 1 && c.start.index() == 0 && c.length == 3 && c.holes.is_empty()));

        let c12 = make_group(&[12]).unwrap();
        let covers = set(&c12, &[0, 1, 3]).progression_covers(4).unwrap();
        assert!(covers.iter().any(|c| c.difference.index() == 1
            && c.start.index() == 0
            && c.length == 4
            && c.holes == vec![Element::raw(2)]));

        // brute force over all (d, start) for C7, A = {0,1,3}, length 3
        let a = set(&c7, &[0, 1, 3]);
        let mut expected = BTreeSet::new();
        for d in 1..7usize {
            for s in 0..7usize {
                let p: BTreeSet<usize> = (0..3).map(|k| (s + k * d) % 7).collect();
                if [0, 1, 3].iter().all(|x| p.contains(x)) {
                    expected.insert(p.into_iter().collect::<Vec<_>>());
                }
            }
        }
        let covers = a.progression_covers(3).unwrap();
        let got: BTreeSet<Vec<usize>> = covers.iter().map(|c| c.members(&c7).indices()).collect();
        assert_eq!(got, expected);
        assert_eq!(covers.len(), expected.len());
        // {0,1,3} is not a 3-term progression in C7, but {0,1,2,3} covers it
        assert!(covers.is_empty());
        assert!(!a.progression_covers(4).unwrap().is_empty());
    }

    #[test]
    fn affine_transform_examples() {
        let c7 = make_group(&[7]).unwrap();
        assert_eq!(
            set(&c7, &[0, 1, 3]).affine_transform(2, Element::raw(0)).unwrap().indices(),
            vec![0, 2, 6]
        );
        let c9 = make_group(&[9]).unwrap();
        assert_eq!(
            set(&c9, &[0, 1]).affine_transform(1, Element::raw(3)).unwrap().indices(),
            vec![3, 4]
        );
        let c6 = make_group(&[6]).unwrap();
        assert!(matches!(
            set(&c6, &[0, 1]).affine_transform(2, Element::raw(0)),
            Err(Error::InvalidTransform(_))
        ));
        let v4 = make_group(&[2, 2]).unwrap();
        assert!(set(&v4, &[0]).affine_transform(1, Element::raw(0)).is_err());
    }

    #[test]
    fn progression_start_detects_arithmetic_progressions() {
        let c12 = make_group(&[12]).unwrap();
        assert_eq!(set(&c12, &[11, 1, 3]).progression_start(2), Some(11));
        assert_eq!(set(&c12, &[0, 4, 8]).progression_start(4), Some(0));
        assert_eq!(set(&c12, &[0, 1, 3]).progression_start(1), None);
    }
}
