//! Sequences over a group (multisets of terms) and their subsequence sums.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{Element, Group, QuotientMap, Subgroup};
use crate::subset::GroupSubset;
use serde::{Serialize, Serializer};
use std::fmt;

/// A sequence stored as its multiplicity vector `v_g(S)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sequence {
    group: Group,
    mult: Vec<u16>,
    length: usize,
}

impl Sequence {
    pub fn empty(g: &Group) -> Sequence {
        Sequence {
            group: g.clone(),
            mult: vec![0; g.order()],
            length: 0,
        }
    }

    /// Builds a sequence from a multiplicity per element index.
    pub fn from_counts(g: &Group, counts: &[usize]) -> Result<Sequence> {
        if counts.len() != g.order() {
            return Err(Error::InvalidArgument(format!(
                "multiplicity vector has length {}, group order is {}",
                counts.len(),
                g.order()
            )));
        }
        let mut mult = Vec::with_capacity(counts.len());
        for &c in counts {
            mult.push(u16::try_from(c).map_err(|_| {
                Error::InvalidArgument(format!("multiplicity {c} exceeds {}", u16::MAX))
            })?);
        }
        Ok(Sequence {
            group: g.clone(),
            length: counts.iter().sum(),
            mult,
        })
    }

    /// Builds a sequence from a list of terms (element indices).
    pub fn from_terms(g: &Group, terms: &[usize]) -> Result<Sequence> {
        let mut counts = vec![0usize; g.order()];
        for &t in terms {
            g.element(t)?;
            counts[t] += 1;
        }
        Sequence::from_counts(g, &counts)
    }

    /// Adds `count` copies of `x`.
    pub fn push(&mut self, x: Element, count: usize) -> Result<()> {
        self.group.element(x.index())?;
        let total = self.mult[x.index()] as usize + count;
        self.mult[x.index()] = u16::try_from(total)
            .map_err(|_| Error::InvalidArgument(format!("multiplicity {total} exceeds {}", u16::MAX)))?;
        self.length += count;
        Ok(())
    }

    pub(crate) fn from_mult_unchecked(g: &Group, mult: Vec<u16>) -> Sequence {
        let length = mult.iter().map(|&m| m as usize).sum();
        Sequence {
            group: g.clone(),
            mult,
            length,
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn multiplicities(&self) -> &[u16] {
        &self.mult
    }

    pub fn multiplicity(&self, x: Element) -> usize {
        self.mult[x.index()] as usize
    }

    /// `|S|`.
    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// `h(S)`, the maximum multiplicity.
    pub fn max_multiplicity(&self) -> usize {
        self.mult.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn support(&self) -> GroupSubset {
        GroupSubset::from_indices_unchecked(
            &self.group,
            (0..self.mult.len()).filter(|&i| self.mult[i] > 0),
        )
    }

    /// `σ(S)`.
    pub fn sum(&self) -> Element {
        let g = &self.group;
        let mut acc = 0;
        for (x, &m) in self.mult.iter().enumerate() {
            if m > 0 {
                acc = g.add_index(acc, g.mul_index(m as i64, x));
            }
        }
        Element::raw(acc)
    }

    /// Terms in ascending index order.
    pub fn terms(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.length);
        for (x, &m) in self.mult.iter().enumerate() {
            out.extend(std::iter::repeat_n(x, m as usize));
        }
        out
    }

    pub fn divides(&self, other: &Sequence) -> bool {
        self.group.same(&other.group) && self.mult.iter().zip(&other.mult).all(|(a, b)| a <= b)
    }

    /// `S'` with `v_x(S') = min(v_x(S), n)`.
    pub fn cap_multiplicities(&self, n: usize) -> Sequence {
        let cap = n.min(u16::MAX as usize) as u16;
        Sequence::from_mult_unchecked(&self.group, self.mult.iter().map(|&m| m.min(cap)).collect())
    }

    /// Image under a quotient map.
    pub fn push_forward(&self, q: &QuotientMap) -> Sequence {
        let mut mult = vec![0u16; q.target().order()];
        for (x, &m) in self.mult.iter().enumerate() {
            mult[q.image_index(x)] += m;
        }
        Sequence::from_mult_unchecked(q.target(), mult)
    }

    /// `Σ_n(S)`, the set of sums of `n`-term subsequences.
    pub fn subsums(&self, n: usize) -> Result<GroupSubset> {
        if n > self.length {
            return Err(Error::InvalidArgument(format!(
                "n = {n} exceeds sequence length {}",
                self.length
            )));
        }
        Ok(self.subsum_table(n, false).pop().unwrap())
    }

    /// `[Σ_0(S), ..., Σ_n(S)]` for `n <= |S|`.
    pub fn subsums_up_to(&self, n: usize) -> Result<Vec<GroupSubset>> {
        if n > self.length {
            return Err(Error::InvalidArgument(format!(
                "n = {n} exceeds sequence length {}",
                self.length
            )));
        }
        Ok(self.subsum_table(n, true))
    }

    /// Dynamic programme over the support: `dp[k]` holds the sums of the
    /// `k`-term subsequences using the elements processed so far.
    fn subsum_table(&self, n: usize, keep_all: bool) -> Vec<GroupSubset> {
        let g = &self.group;
        let order = g.order();
        let mut dp: Vec<Bits> = vec![Bits::new(order); n + 1];
        dp[0].insert(0);
        let mut used = 0usize;
        let mut remaining = self.length;
        for (x, &m) in self.mult.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let m = m as usize;
            remaining -= m;
            let prev = dp.clone();
            let reach = (used + m).min(n);
            // the final answer only needs k with k + remaining >= n
            let lowest = if keep_all { 0 } else { n.saturating_sub(remaining) };
            for k in (lowest.max(1)..=reach).rev() {
                let mut acc = prev[k].clone();
                let mut shift = 0usize;
                for j in 1..=m.min(k) {
                    shift = g.add_index(shift, x);
                    if k - j > used {
                        continue;
                    }
                    let src = &prev[k - j];
                    if !src.is_empty() {
                        acc.union_with(&g.translate_bits(src, shift));
                    }
                }
                dp[k] = acc;
            }
            used += m;
        }
        if keep_all {
            dp.into_iter()
                .map(|b| GroupSubset::from_bits(g.clone(), b))
                .collect()
        } else {
            vec![GroupSubset::from_bits(g.clone(), dp.pop().unwrap())]
        }
    }

    /// Checks `Σ_n(S) = σ(S) - Σ_{|S|-n}(S)`.
    pub fn duality_check(&self, n: usize) -> Result<bool> {
        let lhs = self.subsums(n)?;
        let rhs = self
            .subsums(self.length - n)?
            .negate()
            .translate(self.sum());
        Ok(lhs == rhs)
    }

    /// Every proper subgroup `H` (the trivial one included) and coset
    /// `α + H` with fewer than `|G/H| - 1` terms outside it.
    pub fn coset_condition(&self) -> Result<CosetCondition> {
        let mut violations = Vec::new();
        for h in self.group.all_subgroups()? {
            if h.is_full() {
                continue;
            }
            for (label, inside) in self.coset_counts(h).into_iter().enumerate() {
                let outside = self.length - inside;
                if outside + 1 < h.index_in_group() {
                    violations.push(CosetViolation {
                        subgroup: h.clone(),
                        alpha: Element::raw(h.coset_rep(label)),
                        outside_count: outside,
                    });
                }
            }
        }
        Ok(CosetCondition {
            holds: violations.is_empty(),
            violations,
        })
    }

    /// Same verdict as [`Sequence::coset_condition`], stopping at the first
    /// violation.
    pub fn satisfies_coset_condition(&self) -> Result<bool> {
        if self.length + 1 < self.group.order() {
            // the trivial subgroup needs |G| - 1 terms outside each point
            if !self.group.is_trivial() {
                return Ok(false);
            }
        }
        for h in self.group.all_subgroups()? {
            if h.is_full() {
                continue;
            }
            let need = h.index_in_group() - 1;
            if self
                .coset_counts(h)
                .into_iter()
                .any(|inside| self.length - inside < need)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn coset_counts(&self, h: &Subgroup) -> Vec<usize> {
        let mut counts = vec![0usize; h.coset_count()];
        for (x, &m) in self.mult.iter().enumerate() {
            counts[h.coset_label(x)] += m as usize;
        }
        counts
    }

    /// The data of the subsum version of Kneser's theorem for `Σ_n(S)`.
    pub fn subsum_kneser_report(&self, n: usize) -> Result<SubsumKneserReport> {
        let h_s = self.max_multiplicity();
        if n < 1 || h_s > n || n > self.length {
            return Err(Error::Precondition(format!(
                "need 1 <= h(S) = {h_s} <= n = {n} <= |S| = {}",
                self.length
            )));
        }
        let sigma = self.subsums(n)?;
        let data = KneserClasses::new(self, &sigma, n)?;
        let hs = data.h.order() as i64;
        let n_i = n as i64;
        let big_n = data.x.len() as i64;
        let e = data.e as i64;
        let rho = big_n * hs * n_i + e - self.length as i64;
        let bound = ((big_n - 1) * n_i + e + 1) * hs;
        Ok(SubsumKneserReport {
            x: data.x,
            big_n: big_n as usize,
            e: data.e,
            rho,
            bound,
            actual: sigma.len(),
            h: data.h,
        })
    }

    /// Backtracking search for an `n`-setpartition `A_1 ... A_n` with
    /// `S(A) | S` and `|S(A)| = sub_len` that satisfies one of the two
    /// alternatives of the Partition Theorem.
    pub fn partition_search(&self, sub_len: usize, n: usize, budget: u64) -> Result<PartitionOutcome> {
        let capacity: usize = self.mult.iter().map(|&m| (m as usize).min(n)).sum();
        if n < 1 || n > sub_len || sub_len > capacity {
            return Err(Error::Precondition(format!(
                "no subsequence of length {sub_len} with h <= n = {n} <= {sub_len} exists"
            )));
        }
        let sigma = self.subsums(n)?;
        let classes = KneserClasses::new(self, &sigma, n)?;
        let mut search = PartitionSearch {
            seq: self,
            n,
            sub_len,
            budget,
            nodes: 0,
            sigma: &sigma,
            classes: &classes,
            support: (0..self.mult.len()).filter(|&x| self.mult[x] > 0).collect(),
            blocks: vec![Bits::new(self.group.order()); n],
            sizes: vec![0; n],
            found: None,
        };
        let suffix_cap: Vec<usize> = {
            let mut v = vec![0usize; search.support.len() + 1];
            for i in (0..search.support.len()).rev() {
                v[i] = v[i + 1] + (self.mult[search.support[i]] as usize).min(n);
            }
            v
        };
        search.run(0, 0, &suffix_cap);
        let nodes = search.nodes;
        Ok(match search.found {
            Some((blocks, branch)) => PartitionOutcome {
                found: true,
                partition: Some(SetPartition {
                    blocks: blocks
                        .into_iter()
                        .map(|b| GroupSubset::from_bits(self.group.clone(), b))
                        .collect(),
                }),
                branch: Some(branch),
                nodes,
            },
            None => PartitionOutcome {
                found: false,
                partition: None,
                branch: None,
                nodes,
            },
        })
    }

    /// With `S' = S`: when `|Σ_n(S)| < |S| - n + 1`, checks that `<Z>_*` is
    /// either `H` or `<supp(S)>_*`, where `Z` is the union of the
    /// `H`-cosets holding at least `n` terms.
    pub fn partition_extra_check(&self, n: usize) -> Result<PartitionExtraCheck> {
        let h_s = self.max_multiplicity();
        if n < 1 || h_s > n || n > self.length {
            return Err(Error::Precondition(format!(
                "need 1 <= h(S) = {h_s} <= n = {n} <= |S| = {}",
                self.length
            )));
        }
        let sigma = self.subsums(n)?;
        if sigma.len() + n > self.length {
            return Ok(PartitionExtraCheck {
                applicable: false,
                h: None,
                z: None,
                z_hull: None,
                holds: true,
            });
        }
        let classes = KneserClasses::new(self, &sigma, n)?;
        let z = classes.z.clone();
        if z.is_empty() {
            return Ok(PartitionExtraCheck {
                applicable: true,
                h: Some(classes.h),
                z: Some(z),
                z_hull: None,
                holds: false,
            });
        }
        let hull = z.affine_hull()?;
        let supp_hull = self.support().affine_hull()?;
        let holds = hull == classes.h || hull == supp_hull;
        Ok(PartitionExtraCheck {
            applicable: true,
            h: Some(classes.h),
            z: Some(z),
            z_hull: Some(hull),
            holds,
        })
    }
}

/// `H = H(Σ_n(S))`, the classes `X ⊆ G/H` of multiplicity at least `n` in
/// `φ_H(S)`, `Z = φ_H^{-1}(X)` and the number `e` of terms outside `Z`.
struct KneserClasses {
    h: Subgroup,
    x: GroupSubset,
    z: GroupSubset,
    e: usize,
}

impl KneserClasses {
    fn new(seq: &Sequence, sigma: &GroupSubset, n: usize) -> Result<KneserClasses> {
        let h = sigma.stabilizer();
        let q = seq.group.quotient(&h)?;
        let image = seq.push_forward(&q);
        let x = GroupSubset::from_indices_unchecked(
            q.target(),
            (0..q.target().order()).filter(|&c| image.mult[c] as usize >= n),
        );
        let z = q.preimage(&x);
        let e = seq
            .mult
            .iter()
            .enumerate()
            .filter(|&(g, _)| !z.contains_index(g))
            .map(|(_, &m)| m as usize)
            .sum();
        Ok(KneserClasses { h, x, z, e })
    }
}

struct PartitionSearch<'a> {
    seq: &'a Sequence,
    n: usize,
    sub_len: usize,
    budget: u64,
    nodes: u64,
    sigma: &'a GroupSubset,
    classes: &'a KneserClasses,
    support: Vec<usize>,
    blocks: Vec<Bits>,
    sizes: Vec<usize>,
    found: Option<(Vec<Bits>, u8)>,
}

impl PartitionSearch<'_> {
    /// Assigns copies of `support[i]` to distinct blocks. Blocks that are
    /// still identical are interchangeable, so only the first few blocks of
    /// each run of equal blocks are ever chosen.
    fn run(&mut self, i: usize, placed: usize, suffix_cap: &[usize]) -> bool {
        if self.found.is_some() || self.nodes >= self.budget {
            return self.found.is_some();
        }
        self.nodes += 1;
        if placed + suffix_cap[i] < self.sub_len {
            return false;
        }
        if i == self.support.len() {
            return placed == self.sub_len && self.check_leaf();
        }
        let x = self.support[i];
        let max_c = (self.seq.mult[x] as usize).min(self.n).min(self.sub_len - placed);
        // runs of identical blocks: blocks are kept sorted so equal ones are adjacent
        let runs = self.runs();
        for c in (0..=max_c).rev() {
            let mut pick = vec![0usize; runs.len()];
            if self.choose(i, placed, c, &runs, 0, &mut pick, suffix_cap) {
                return true;
            }
            if self.nodes >= self.budget {
                return false;
            }
        }
        false
    }

    fn runs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for j in 0..self.n {
            match out.last_mut() {
                Some((start, len)) if self.blocks[*start] == self.blocks[j] => *len += 1,
                _ => out.push((j, 1)),
            }
        }
        // prefer the smallest blocks first
        out.sort_by_key(|&(start, _)| (self.sizes[start], start));
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        i: usize,
        placed: usize,
        left: usize,
        runs: &[(usize, usize)],
        r: usize,
        pick: &mut Vec<usize>,
        suffix_cap: &[usize],
    ) -> bool {
        if left == 0 {
            let x = self.support[i];
            let total: usize = pick.iter().sum();
            let mut touched = Vec::new();
            for (k, &(start, _)) in runs.iter().enumerate() {
                for j in start..start + pick[k] {
                    self.blocks[j].insert(x);
                    self.sizes[j] += 1;
                    touched.push(j);
                }
            }
            let ok = self.run(i + 1, placed + total, suffix_cap);
            for j in touched {
                self.blocks[j].remove(x);
                self.sizes[j] -= 1;
            }
            return ok;
        }
        if r == runs.len() {
            return false;
        }
        let avail = runs[r].1;
        let rest: usize = runs[r + 1..].iter().map(|&(_, l)| l).sum();
        let lo = left.saturating_sub(rest);
        for take in (lo..=avail.min(left)).rev() {
            pick[r] = take;
            if self.choose(i, placed, left - take, runs, r + 1, pick, suffix_cap) {
                return true;
            }
            if self.nodes >= self.budget {
                break;
            }
        }
        pick[r] = 0;
        false
    }

    fn check_leaf(&mut self) -> bool {
        if self.sizes.contains(&0) {
            return false;
        }
        let g = self.seq.group();
        let mut acc = GroupSubset::from_indices_unchecked(g, [0]);
        for b in &self.blocks {
            acc = acc.sum(&GroupSubset::from_bits(g.clone(), b.clone()));
        }
        if acc.len() + self.n > self.sub_len {
            self.found = Some((self.blocks.clone(), 1));
            return true;
        }
        if self.branch_two(&acc) {
            self.found = Some((self.blocks.clone(), 2));
            return true;
        }
        false
    }

    fn branch_two(&self, acc: &GroupSubset) -> bool {
        let h = &self.classes.h;
        let z = &self.classes.z;
        if h.is_trivial() || acc != self.sigma {
            return false;
        }
        let g = self.seq.group();
        // terms of S left unused must lie in Z
        let mut used = vec![0usize; g.order()];
        for b in &self.blocks {
            for x in b.iter() {
                used[x] += 1;
            }
        }
        for (x, &m) in self.seq.mult.iter().enumerate() {
            if (m as usize) > used[x] && !z.contains_index(x) {
                return false;
            }
        }
        self.blocks.iter().all(|b| {
            let block = GroupSubset::from_bits(g.clone(), b.clone());
            block.difference(z).len() <= 1 && z.is_subset(&block.coset_closure(h))
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetViolation {
    pub subgroup: Subgroup,
    pub alpha: Element,
    pub outside_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetCondition {
    pub holds: bool,
    pub violations: Vec<CosetViolation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsumKneserReport {
    pub h: Subgroup,
    /// Classes of `G/H`, as a subset of the quotient group.
    pub x: GroupSubset,
    pub big_n: usize,
    pub e: usize,
    pub rho: i64,
    pub bound: i64,
    pub actual: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SetPartition {
    pub blocks: Vec<GroupSubset>,
}

impl SetPartition {
    /// The underlying sequence `S(A)`.
    pub fn underlying(&self, g: &Group) -> Sequence {
        let mut counts = vec![0usize; g.order()];
        for b in &self.blocks {
            for x in b.bits().iter() {
                counts[x] += 1;
            }
        }
        Sequence::from_counts(g, &counts).expect("block multiplicities fit")
    }

    pub fn sumset(&self, g: &Group) -> GroupSubset {
        let mut acc = GroupSubset::from_indices_unchecked(g, [0]);
        for b in &self.blocks {
            acc = acc.sum(b);
        }
        acc
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionOutcome {
    pub found: bool,
    pub partition: Option<SetPartition>,
    pub branch: Option<u8>,
    pub nodes: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionExtraCheck {
    pub applicable: bool,
    pub h: Option<Subgroup>,
    pub z: Option<GroupSubset>,
    pub z_hull: Option<Subgroup>,
    pub holds: bool,
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence({}, {:?})", self.group, self.mult)
    }
}

impl Serialize for Sequence {
    /// Serialized as the multiplicity vector.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.mult.iter())
    }
}
