//! Finite abelian groups `C_{m_1} x ... x C_{m_r}` with `m_1 | ... | m_r`.
//!
//! Elements are encoded as mixed-radix indices with the first modulus as the
//! most significant digit, so every bitset over a group has a fixed layout.
//! Groups are interned: constructing the same invariant factors twice returns
//! the same handle, and the lazily built tables (Cayley table, subgroup
//! lattice, quotients, automorphisms) are shared by every user.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::subset::GroupSubset;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest group handled by single-instance operations.
pub const DEFAULT_ORDER_CAP: usize = 4096;
/// Maximum number of subgroups enumerated before giving up.
pub const DEFAULT_SUBGROUP_BUDGET: usize = 250_000;
/// Maximum number of automorphisms materialized.
pub const DEFAULT_AUTOMORPHISM_BUDGET: usize = 400_000;

const CAYLEY_LIMIT: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(usize);

impl Element {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    pub(crate) fn raw(index: usize) -> Self {
        Element(index)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
pub struct Group(Arc<GroupInner>);

struct GroupInner {
    moduli: Vec<usize>,
    order: usize,
    exponent: usize,
    weights: Vec<usize>,
    neg: Vec<u32>,
    cayley: OnceLock<Option<Vec<u16>>>,
    subgroups: OnceLock<Result<Vec<Subgroup>>>,
    quotients: Mutex<HashMap<Bits, QuotientMap>>,
    automorphisms: OnceLock<Result<Arc<Vec<Vec<u32>>>>>,
}

fn registry() -> &'static Mutex<HashMap<Vec<usize>, Group>> {
    static REGISTRY: OnceLock<Mutex<HashMap<Vec<usize>, Group>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds the group `C_{m_1} x ... x C_{m_k}` and normalizes it to invariant
/// factors (so `[3, 2]` becomes `C6`). An empty list is the trivial group.
pub fn make_group(moduli: &[usize]) -> Result<Group> {
    if let Some(&bad) = moduli.iter().find(|&&m| m < 2) {
        return Err(Error::InvalidModulus(bad));
    }
    let mut prime_parts: Vec<(usize, usize)> = Vec::new();
    for &m in moduli {
        prime_parts.extend(factorize(m).into_iter().map(|(p, e)| (p, p.pow(e as u32))));
    }
    Ok(Group::interned(invariant_factors_from_prime_powers(&prime_parts)))
}

/// Regroups prime powers `(p, p^e)` into the invariant-factor chain.
pub(crate) fn invariant_factors_from_prime_powers(parts: &[(usize, usize)]) -> Vec<usize> {
    let mut by_prime: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(p, q) in parts {
        if q > 1 {
            by_prime.entry(p).or_default().push(q);
        }
    }
    let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1usize; rank];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (k, &q) in powers.iter().enumerate() {
            factors[rank - 1 - k] *= q;
        }
    }
    factors
}

pub(crate) fn factorize(mut n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn smallest_prime_factor(n: usize) -> Option<usize> {
    factorize(n).first().map(|&(p, _)| p)
}

pub(crate) fn is_prime(n: usize) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Invariant factors of a finite abelian group given the order of each of
/// its elements.
pub(crate) fn invariant_factors_from_orders(orders: &[usize]) -> Vec<usize> {
    let size = orders.len();
    let mut parts = Vec::new();
    for (p, e) in factorize(size) {
        // counts[j] = #{x : p^j x = 0}
        let mut counts = Vec::with_capacity(e + 1);
        for j in 0..=e {
            let pj = p.pow(j as u32);
            counts.push(orders.iter().filter(|&&o| pj % o == 0).count());
        }
        // at_least[j] = number of cyclic p-factors of exponent >= j
        let mut at_least = vec![0usize; e + 2];
        for j in 1..=e {
            let mut ratio = counts[j] / counts[j - 1];
            let mut k = 0;
            while ratio > 1 {
                ratio /= p;
                k += 1;
            }
            at_least[j] = k;
        }
        for j in 1..=e {
            let exact = at_least[j] - at_least[j + 1];
            for _ in 0..exact {
                parts.push((p, p.pow(j as u32)));
            }
        }
    }
    invariant_factors_from_prime_powers(&parts)
}

impl Group {
    fn interned(moduli: Vec<usize>) -> Group {
        let mut reg = registry().lock().unwrap();
        if let Some(g) = reg.get(&moduli) {
            return g.clone();
        }
        let order: usize = moduli.iter().product();
        let exponent = moduli.last().copied().unwrap_or(1);
        let mut weights = vec![1usize; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            weights[i] = weights[i + 1] * moduli[i + 1];
        }
        let mut inner = GroupInner {
            moduli: moduli.clone(),
            order,
            exponent,
            weights,
            neg: Vec::new(),
            cayley: OnceLock::new(),
            subgroups: OnceLock::new(),
            quotients: Mutex::new(HashMap::new()),
            automorphisms: OnceLock::new(),
        };
        inner.neg = (0..order)
            .map(|x| {
                let mut out = 0;
                for (k, (&m, &w)) in inner.moduli.iter().zip(&inner.weights).enumerate() {
                    let _ = k;
                    let a = (x / w) % m;
                    out += ((m - a) % m) * w;
                }
                out as u32
            })
            .collect();
        let g = Group(Arc::new(inner));
        reg.insert(moduli, g.clone());
        g
    }

    pub fn trivial() -> Group {
        Group::interned(Vec::new())
    }

    pub fn cyclic(m: usize) -> Result<Group> {
        if m == 1 {
            return Ok(Group::trivial());
        }
        make_group(&[m])
    }

    #[inline]
    pub fn moduli(&self) -> &[usize] {
        &self.0.moduli
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.order
    }

    #[inline]
    pub fn exponent(&self) -> usize {
        self.0.exponent
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.0.moduli.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank() <= 1
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn same(&self, other: &Group) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.moduli == other.0.moduli
    }

    pub fn zero(&self) -> Element {
        Element(0)
    }

    pub fn element(&self, index: usize) -> Result<Element> {
        if index < self.order() {
            Ok(Element(index))
        } else {
            Err(Error::InvalidElement {
                index,
                order: self.order(),
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.order()).map(Element)
    }

    /// Encodes a coordinate tuple; coordinates are reduced modulo each factor.
    pub fn from_coords(&self, coords: &[i64]) -> Result<Element> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates for {}, got {}",
                self.rank(),
                self,
                coords.len()
            )));
        }
        let idx = coords
            .iter()
            .zip(self.moduli())
            .zip(&self.0.weights)
            .map(|((&a, &m), &w)| (a.rem_euclid(m as i64) as usize) * w)
            .sum();
        Ok(Element(idx))
    }

    pub fn coords(&self, x: Element) -> Vec<usize> {
        self.coords_of(x.0)
    }

    pub(crate) fn coords_of(&self, x: usize) -> Vec<usize> {
        self.moduli()
            .iter()
            .zip(&self.0.weights)
            .map(|(&m, &w)| (x / w) % m)
            .collect()
    }

    fn cayley(&self) -> Option<&[u16]> {
        self.0
            .cayley
            .get_or_init(|| {
                let n = self.order();
                if self.is_cyclic() || n > CAYLEY_LIMIT {
                    return None;
                }
                let mut t = vec![0u16; n * n];
                for a in 0..n {
                    for b in 0..n {
                        t[a * n + b] = self.add_slow(a, b) as u16;
                    }
                }
                Some(t)
            })
            .as_deref()
    }

    fn add_slow(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&m, &w) in self.moduli().iter().zip(&self.0.weights) {
            out += (((a / w) % m + (b / w) % m) % m) * w;
        }
        out
    }

    /// Index-level addition; callers guarantee both indices are in range.
    #[inline]
    pub fn add_index(&self, a: usize, b: usize) -> usize {
        let n = self.order();
        if self.rank() <= 1 {
            let s = a + b;
            return if s >= n { s - n } else { s };
        }
        match self.cayley() {
            Some(t) => t[a * n + b] as usize,
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg_index(&self, a: usize) -> usize {
        self.0.neg[a] as usize
    }

    #[inline]
    pub fn sub_index(&self, a: usize, b: usize) -> usize {
        self.add_index(a, self.neg_index(b))
    }

    pub fn mul_index(&self, k: i64, a: usize) -> usize {
        let mut out = 0;
        for (&m, &w) in self.moduli().iter().zip(&self.0.weights) {
            let c = (a / w) % m;
            let v = ((c as i128 * k as i128).rem_euclid(m as i128)) as usize;
            out += v * w;
        }
        out
    }

    pub fn order_of_index(&self, a: usize) -> usize {
        self.moduli()
            .iter()
            .zip(&self.0.weights)
            .map(|(&m, &w)| m / gcd((a / w) % m, m))
            .fold(1, lcm)
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        Element(self.add_index(a.0, b.0))
    }

    pub fn neg(&self, a: Element) -> Element {
        Element(self.neg_index(a.0))
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        Element(self.sub_index(a.0, b.0))
    }

    pub fn mul(&self, k: i64, a: Element) -> Element {
        Element(self.mul_index(k, a.0))
    }

    /// Least `n >= 1` with `n x = 0`.
    pub fn order_of(&self, x: Element) -> usize {
        self.order_of_index(x.0)
    }

    /// Translation of a bitset by `t`.
    pub(crate) fn translate_bits(&self, bits: &Bits, t: usize) -> Bits {
        if t == 0 {
            return bits.clone();
        }
        if self.rank() == 1 {
            return bits.rotated(t);
        }
        let mut out = Bits::new(self.order());
        for x in bits.iter() {
            out.insert(self.add_index(x, t));
        }
        out
    }

    pub(crate) fn negate_bits(&self, bits: &Bits) -> Bits {
        Bits::from_indices(self.order(), bits.iter().map(|x| self.neg_index(x)))
    }

    /// Subgroup generated by the given element indices, as a bitset.
    pub(crate) fn closure_bits(&self, gens: impl IntoIterator<Item = usize>) -> Bits {
        let mut h = Bits::new(self.order());
        h.insert(0);
        for g in gens {
            h = self.extend_bits(&h, g);
        }
        h
    }

    /// `H + <g>` for a subgroup bitset `H`.
    pub(crate) fn extend_bits(&self, h: &Bits, g: usize) -> Bits {
        let mut out = h.clone();
        let mut x = g;
        while !h.contains(x) {
            out.union_with(&self.translate_bits(h, x));
            x = self.add_index(x, g);
        }
        out
    }

    /// All subgroups, sorted by order and then by member list.
    pub fn all_subgroups(&self) -> Result<&[Subgroup]> {
        self.0
            .subgroups
            .get_or_init(|| self.enumerate_subgroups(DEFAULT_SUBGROUP_BUDGET))
            .as_deref()
            .map_err(Clone::clone)
    }

    /// Fresh enumeration with an explicit budget on the number of subgroups.
    pub fn all_subgroups_with_budget(&self, budget: usize) -> Result<Vec<Subgroup>> {
        self.enumerate_subgroups(budget)
    }

    fn enumerate_subgroups(&self, budget: usize) -> Result<Vec<Subgroup>> {
        let n = self.order();
        if n > DEFAULT_ORDER_CAP {
            return Err(Error::Budget {
                what: format!("group order {n}"),
                limit: DEFAULT_ORDER_CAP,
            });
        }
        let trivial = self.closure_bits([]);
        let mut seen: HashSet<Bits> = HashSet::new();
        let mut found: Vec<(Bits, Vec<usize>)> = Vec::new();
        seen.insert(trivial.clone());
        found.push((trivial, Vec::new()));
        let mut next = 0;
        while next < found.len() {
            let (h, gens) = found[next].clone();
            next += 1;
            // <H, g> only depends on the coset g + H
            let mut covered = h.clone();
            for g in 0..n {
                if covered.contains(g) {
                    continue;
                }
                covered.union_with(&self.translate_bits(&h, g));
                let ext = self.extend_bits(&h, g);
                if seen.insert(ext.clone()) {
                    if found.len() >= budget {
                        return Err(Error::Budget {
                            what: format!("subgroup count of {self}"),
                            limit: budget,
                        });
                    }
                    let mut gens = gens.clone();
                    gens.push(g);
                    found.push((ext, gens));
                }
            }
        }
        let mut subs: Vec<Subgroup> = found
            .into_iter()
            .map(|(bits, gens)| {
                Subgroup::from_parts(GroupSubset::from_bits(self.clone(), bits), gens)
            })
            .collect();
        subs.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.members().bits().cmp(b.members().bits()))
        });
        Ok(subs)
    }

    /// The natural map onto `G/H`, with the target in invariant-factor form.
    pub fn quotient(&self, h: &Subgroup) -> Result<QuotientMap> {
        if !h.group().same(self) {
            return Err(Error::GroupMismatch {
                left: self.to_string(),
                right: h.group().to_string(),
            });
        }
        if let Some(q) = self.0.quotients.lock().unwrap().get(h.members().bits()) {
            return Ok(q.clone());
        }
        let q = QuotientMap::build(self, h)?;
        self.0
            .quotients
            .lock()
            .unwrap()
            .insert(h.members().bits().clone(), q.clone());
        Ok(q)
    }

    /// All automorphisms as permutations (`perm[x] = phi(x)`).
    pub fn automorphisms(&self) -> Result<Arc<Vec<Vec<u32>>>> {
        self.0
            .automorphisms
            .get_or_init(|| {
                self.enumerate_automorphisms(DEFAULT_AUTOMORPHISM_BUDGET)
                    .map(Arc::new)
            })
            .clone()
    }

    fn enumerate_automorphisms(&self, budget: usize) -> Result<Vec<Vec<u32>>> {
        let n = self.order();
        if n > 64 {
            return Err(Error::Budget {
                what: format!("automorphism search on group of order {n}"),
                limit: 64,
            });
        }
        let moduli = self.moduli().to_vec();
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(moduli.len());
        let mut span = Bits::new(n);
        span.insert(0);
        self.aut_search(&moduli, &mut images, &span, budget, &mut out)?;
        Ok(out)
    }

    fn aut_search(
        &self,
        moduli: &[usize],
        images: &mut Vec<usize>,
        span: &Bits,
        budget: usize,
        out: &mut Vec<Vec<u32>>,
    ) -> Result<()> {
        let k = images.len();
        if k == moduli.len() {
            if out.len() >= budget {
                return Err(Error::Budget {
                    what: format!("automorphism count of {self}"),
                    limit: budget,
                });
            }
            out.push(self.expand_hom(images).into_iter().map(|x| x as u32).collect());
            return Ok(());
        }
        let m = moduli[k];
        let target = span.count() * m;
        for g in 0..self.order() {
            if !m.is_multiple_of(self.order_of_index(g)) {
                continue;
            }
            let ext = self.extend_bits(span, g);
            if ext.count() != target {
                continue;
            }
            images.push(g);
            self.aut_search(moduli, images, &ext, budget, out)?;
            images.pop();
        }
        Ok(())
    }

    /// Image table of the homomorphism sending the standard basis to `images`.
    fn expand_hom(&self, images: &[usize]) -> Vec<usize> {
        expand_from_basis(self.moduli(), images, &|a, b| self.add_index(a, b))
    }
}

/// Given images of the standard basis of `C_{m_1} x ... x C_{m_r}`, returns
/// the image of every element index of that standard group.
pub(crate) fn expand_from_basis(
    moduli: &[usize],
    images: &[usize],
    add: &dyn Fn(usize, usize) -> usize,
) -> Vec<usize> {
    let size: usize = moduli.iter().product();
    let mut weights = vec![1usize; moduli.len()];
    for i in (0..moduli.len().saturating_sub(1)).rev() {
        weights[i] = weights[i + 1] * moduli[i + 1];
    }
    let mut map = vec![0usize; size];
    for t in 1..size {
        let j = (0..moduli.len())
            .rev()
            .find(|&j| !(t / weights[j]).is_multiple_of(moduli[j]))
            .unwrap();
        map[t] = add(map[t - weights[j]], images[j]);
    }
    map
}

/// Finds images `g_1..g_r` of a standard basis for `moduli` inside a concrete
/// abelian group on `0..k` (zero at 0) such that the induced map is an
/// isomorphism.
pub(crate) fn find_basis(
    moduli: &[usize],
    k: usize,
    add: &dyn Fn(usize, usize) -> usize,
    orders: &[usize],
) -> Option<Vec<usize>> {
    fn extend(
        span: &[bool],
        g: usize,
        m: usize,
        add: &dyn Fn(usize, usize) -> usize,
    ) -> Option<Vec<bool>> {
        let mut x = g;
        for _ in 1..m {
            if span[x] {
                return None;
            }
            x = add(x, g);
        }
        let members: Vec<usize> = (0..span.len()).filter(|&i| span[i]).collect();
        let mut out = span.to_vec();
        let mut x = g;
        for _ in 1..m {
            for &s in &members {
                out[add(s, x)] = true;
            }
            x = add(x, g);
        }
        Some(out)
    }

    fn search(
        pos: usize,
        moduli: &[usize],
        span: &[bool],
        images: &mut [usize],
        add: &dyn Fn(usize, usize) -> usize,
        orders: &[usize],
    ) -> bool {
        if pos == 0 {
            return true;
        }
        let i = pos - 1;
        let m = moduli[i];
        for g in 0..span.len() {
            if orders[g] != m {
                continue;
            }
            if let Some(next) = extend(span, g, m, add) {
                images[i] = g;
                if search(i, moduli, &next, images, add, orders) {
                    return true;
                }
            }
        }
        false
    }

    let mut span = vec![false; k];
    if k == 0 {
        return None;
    }
    span[0] = true;
    let mut images = vec![0usize; moduli.len()];
    if search(moduli.len(), moduli, &span, &mut images, add, orders) {
        Some(images)
    } else {
        None
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Group {}

impl std::hash::Hash for Group {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.moduli().hash(state);
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "C1");
        }
        let parts: Vec<String> = self.moduli().iter().map(|m| format!("C{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl Serialize for Group {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({self})")
    }
}

struct CosetTable {
    label: Vec<u32>,
    reps: Vec<u32>,
}

#[derive(Clone)]
pub struct Subgroup {
    members: GroupSubset,
    generators: Vec<Element>,
    cosets: Arc<CosetTable>,
}

impl Subgroup {
    fn from_parts(members: GroupSubset, gens: Vec<usize>) -> Subgroup {
        let g = members.group().clone();
        let n = g.order();
        let mut label = vec![u32::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if label[x] != u32::MAX {
                continue;
            }
            let l = reps.len() as u32;
            reps.push(x as u32);
            for h in members.bits().iter() {
                label[g.add_index(x, h)] = l;
            }
        }
        Subgroup {
            members,
            generators: gens.into_iter().map(Element).collect(),
            cosets: Arc::new(CosetTable { label, reps }),
        }
    }

    pub fn trivial(g: &Group) -> Subgroup {
        Subgroup::generated(g, &[])
    }

    pub fn full(g: &Group) -> Subgroup {
        let gens: Vec<Element> = (0..g.rank()).map(|i| Element(g.0.weights[i])).collect();
        Subgroup::from_parts(
            GroupSubset::full(g),
            gens.into_iter().map(Element::index).collect(),
        )
    }

    pub fn generated(g: &Group, gens: &[Element]) -> Subgroup {
        let bits = g.closure_bits(gens.iter().map(|e| e.0));
        Subgroup::from_parts(
            GroupSubset::from_bits(g.clone(), bits),
            gens.iter().map(|e| e.0).collect(),
        )
    }

    /// Validates that `set` is a subgroup.
    pub fn from_subset(set: &GroupSubset) -> Result<Subgroup> {
        let g = set.group();
        if !set.contains_index(0) {
            return Err(Error::InvalidSubgroup("does not contain 0".into()));
        }
        for a in set.bits().iter() {
            for b in set.bits().iter() {
                if !set.contains_index(g.add_index(a, b)) {
                    return Err(Error::InvalidSubgroup(format!(
                        "{a} + {b} leaves the set"
                    )));
                }
            }
        }
        let mut gens = Vec::new();
        let mut span = g.closure_bits([]);
        for x in set.bits().iter() {
            if !span.contains(x) {
                span = g.extend_bits(&span, x);
                gens.push(x);
            }
        }
        Ok(Subgroup::from_parts(set.clone(), gens))
    }

    pub(crate) fn from_closed_bits(g: &Group, bits: Bits) -> Subgroup {
        let mut gens = Vec::new();
        let mut span = g.closure_bits([]);
        for x in bits.iter() {
            if !span.contains(x) {
                span = g.extend_bits(&span, x);
                gens.push(x);
            }
        }
        Subgroup::from_parts(GroupSubset::from_bits(g.clone(), bits), gens)
    }

    pub fn group(&self) -> &Group {
        self.members.group()
    }

    pub fn members(&self) -> &GroupSubset {
        &self.members
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index_in_group(&self) -> usize {
        self.group().order() / self.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.group().order()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.members.contains_index(x.0)
    }

    pub fn contains_index(&self, x: usize) -> bool {
        self.members.contains_index(x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.bits().is_subset(other.members.bits())
    }

    /// Coset label of `x`; labels are numbered by minimal representative.
    #[inline]
    pub fn coset_label(&self, x: usize) -> usize {
        self.cosets.label[x] as usize
    }

    pub fn coset_count(&self) -> usize {
        self.cosets.reps.len()
    }

    /// Minimal element of the coset with the given label.
    pub fn coset_rep(&self, label: usize) -> usize {
        self.cosets.reps[label] as usize
    }

    /// The coset `x + H`.
    pub fn coset_of(&self, x: usize) -> GroupSubset {
        self.members.translate_index(x)
    }

    pub fn invariant_factors(&self) -> Vec<usize> {
        let g = self.group();
        let orders: Vec<usize> = self
            .members
            .bits()
            .iter()
            .map(|x| g.order_of_index(x))
            .collect();
        invariant_factors_from_orders(&orders)
    }

    /// A standard group isomorphic to this subgroup, with the embedding
    /// `standard index -> member of G`.
    pub fn as_group(&self) -> Result<(Group, Vec<usize>)> {
        let target = Group::interned(self.invariant_factors());
        let g = self.group();
        let members: Vec<usize> = self.members.bits().iter().collect();
        let mut local = vec![usize::MAX; g.order()];
        for (i, &x) in members.iter().enumerate() {
            local[x] = i;
        }
        let add = |a: usize, b: usize| local[g.add_index(members[a], members[b])];
        let orders: Vec<usize> = members.iter().map(|&x| g.order_of_index(x)).collect();
        let basis = find_basis(target.moduli(), members.len(), &add, &orders)
            .ok_or_else(|| Error::InvalidSubgroup("no isomorphism to invariant form".into()))?;
        let map = expand_from_basis(target.moduli(), &basis, &add);
        Ok((target, map.into_iter().map(|i| members[i]).collect()))
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{}", self.members)
    }
}

impl Serialize for Subgroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(s)
    }
}

#[derive(Clone)]
pub struct QuotientMap {
    source: Group,
    kernel: Subgroup,
    target: Group,
    table: Arc<Vec<u32>>,
}

impl QuotientMap {
    fn build(g: &Group, h: &Subgroup) -> Result<QuotientMap> {
        let k = h.coset_count();
        let add = |a: usize, b: usize| h.coset_label(g.add_index(h.coset_rep(a), h.coset_rep(b)));
        let orders: Vec<usize> = (0..k)
            .map(|l| {
                let mut x = l;
                let mut o = 1;
                while x != 0 {
                    x = add(x, l);
                    o += 1;
                }
                o
            })
            .collect();
        let target = Group::interned(invariant_factors_from_orders(&orders));
        let basis = find_basis(target.moduli(), k, &add, &orders)
            .ok_or_else(|| Error::InvalidSubgroup("quotient has no invariant basis".into()))?;
        let std_to_label = expand_from_basis(target.moduli(), &basis, &add);
        let mut label_to_std = vec![0u32; k];
        for (t, &l) in std_to_label.iter().enumerate() {
            label_to_std[l] = t as u32;
        }
        let table = (0..g.order())
            .map(|x| label_to_std[h.coset_label(x)])
            .collect();
        Ok(QuotientMap {
            source: g.clone(),
            kernel: h.clone(),
            target,
            table: Arc::new(table),
        })
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn image_index(&self, x: usize) -> usize {
        self.table[x] as usize
    }

    pub fn image(&self, x: Element) -> Element {
        Element(self.image_index(x.0))
    }

    pub fn push_subset(&self, a: &GroupSubset) -> GroupSubset {
        GroupSubset::from_indices_unchecked(
            &self.target,
            a.bits().iter().map(|x| self.image_index(x)),
        )
    }

    /// `phi_H^{-1}(X)` for a subset `X` of the quotient.
    pub fn preimage(&self, x: &GroupSubset) -> GroupSubset {
        GroupSubset::from_indices_unchecked(
            &self.source,
            (0..self.source.order()).filter(|&s| x.contains_index(self.image_index(s))),
        )
    }
}

/// Every abelian group of the given order, one per isomorphism type, sorted
/// by rank and then by invariant factors.
pub fn groups_of_order(n: usize) -> Vec<Group> {
    if n == 1 {
        return vec![Group::trivial()];
    }
    fn partitions(e: usize, max: usize) -> Vec<Vec<usize>> {
        if e == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=e.min(max)).rev() {
            for mut rest in partitions(e - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut combos: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for combo in &combos {
            for part in partitions(e, e) {
                let mut c = combo.clone();
                c.extend(part.iter().map(|&k| (p, p.pow(k as u32))));
                next.push(c);
            }
        }
        combos = next;
    }
    let mut groups: Vec<Group> = combos
        .iter()
        .map(|c| Group::interned(invariant_factors_from_prime_powers(c)))
        .collect();
    groups.sort_by(|a, b| {
        a.rank()
            .cmp(&b.rank())
            .then_with(|| a.moduli().cmp(b.moduli()))
    });
    groups
}

/// Every abelian group with order in `1..=max_order`.
pub fn groups_up_to(max_order: usize) -> Vec<Group> {
    (1..=max_order).flat_map(groups_of_order).collect()
}
