//! Exhaustive enumeration of subsets and sequences up to symmetry.

use crate::error::{Error, Result};
use crate::group::Group;
use crate::sequence::Sequence;
use crate::subset::GroupSubset;

/// Largest group whose subsets are enumerated through a visited bitmap.
pub const SUBSET_ORDER_CAP: usize = 24;

/// A set of permutations of the element indices of a group, closed under
/// composition.
#[derive(Clone, Debug)]
pub struct Symmetries {
    group: Group,
    /// `perm[x]` is the image of `x`.
    perms: Vec<Vec<u32>>,
    /// `inv[y]` is the preimage of `y`.
    inverses: Vec<Vec<u32>>,
}

impl Symmetries {
    pub fn identity(g: &Group) -> Symmetries {
        Self::from_perms(g, vec![(0..g.order() as u32).collect()])
    }

    /// All automorphisms of `G`.
    pub fn automorphisms(g: &Group) -> Result<Symmetries> {
        let auts = g.automorphisms()?;
        Ok(Self::from_perms(g, auts.as_ref().clone()))
    }

    /// All maps `x -> σ(x) + t` with `σ` an automorphism.
    pub fn affine(g: &Group) -> Result<Symmetries> {
        let auts = g.automorphisms()?;
        let mut perms = Vec::with_capacity(auts.len() * g.order());
        for t in 0..g.order() {
            for s in auts.iter() {
                perms.push(s.iter().map(|&x| g.add_index(x as usize, t) as u32).collect());
            }
        }
        Ok(Self::from_perms(g, perms))
    }

    fn from_perms(g: &Group, perms: Vec<Vec<u32>>) -> Symmetries {
        let inverses = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0u32; p.len()];
                for (x, &y) in p.iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                inv
            })
            .collect();
        Symmetries {
            group: g.clone(),
            perms,
            inverses,
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perms(&self) -> &[Vec<u32>] {
        &self.perms
    }

    /// Whether `v` is lexicographically maximal among its images
    /// `w[σ(x)] = v[x]`.
    pub fn is_lex_leader(&self, v: &[u16]) -> bool {
        for inv in &self.inverses {
            for (j, &vj) in v.iter().enumerate() {
                let wj = v[inv[j] as usize];
                if wj > vj {
                    return false;
                }
                if wj < vj {
                    break;
                }
            }
        }
        true
    }

    /// Size of the orbit of `v`.
    pub fn orbit_size(&self, v: &[u16]) -> usize {
        let stab = self
            .inverses
            .iter()
            .filter(|inv| v.iter().enumerate().all(|(j, &vj)| v[inv[j] as usize] == vj))
            .count();
        self.perms.len() / stab.max(1)
    }
}

/// One representative of an orbit of subsets.
#[derive(Clone, Debug)]
pub struct SubsetOrbit {
    pub representative: GroupSubset,
    pub orbit_size: usize,
}

/// Nonempty subsets of `G` up to the given symmetries; the representative of
/// each orbit is the one with the smallest bitmask.
pub fn subset_orbits(sym: &Symmetries) -> Result<Vec<SubsetOrbit>> {
    let g = sym.group();
    let n = g.order();
    if n > SUBSET_ORDER_CAP {
        return Err(Error::Budget {
            what: format!("subset enumeration over a group of order {n}"),
            limit: SUBSET_ORDER_CAP,
        });
    }
    let total = 1u64 << n;
    let mut seen = vec![0u64; (total as usize).div_ceil(64)];
    let mut out = Vec::new();
    for mask in 1..total {
        if seen[(mask / 64) as usize] >> (mask % 64) & 1 == 1 {
            continue;
        }
        let mut size = 0;
        for p in sym.perms() {
            let mut img = 0u64;
            let mut m = mask;
            while m != 0 {
                let x = m.trailing_zeros() as usize;
                img |= 1 << p[x];
                m &= m - 1;
            }
            let (w, b) = ((img / 64) as usize, img % 64);
            if seen[w] >> b & 1 == 0 {
                seen[w] |= 1 << b;
                size += 1;
            }
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        out.push(SubsetOrbit {
            representative: GroupSubset::from_indices(g, &idx)?,
            orbit_size: size,
        });
    }
    Ok(out)
}

/// All multiplicity vectors of total `len` with entries at most `max_mult`,
/// in decreasing lexicographic order, that are lex-leaders under `sym`.
/// Fails once more than `budget` candidate vectors are visited.
pub fn sequence_leaders(
    sym: &Symmetries,
    len: usize,
    max_mult: usize,
    budget: u64,
) -> Result<Vec<Sequence>> {
    let g = sym.group();
    let k = g.order();
    let cap = max_mult.min(u16::MAX as usize);
    if k * cap < len {
        return Ok(vec![]);
    }
    let mut v = vec![0u16; k];
    let mut out = Vec::new();
    let mut visited = 0u64;
    fill(sym, &mut v, 0, len, cap, budget, &mut visited, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn fill(
    sym: &Symmetries,
    v: &mut Vec<u16>,
    pos: usize,
    left: usize,
    cap: usize,
    budget: u64,
    visited: &mut u64,
    out: &mut Vec<Sequence>,
) -> Result<()> {
    let k = v.len();
    if pos == k {
        if left == 0 {
            *visited += 1;
            if *visited > budget {
                return Err(Error::Budget {
                    what: "multiset enumeration".into(),
                    limit: budget as usize,
                });
            }
            if sym.is_lex_leader(v) {
                out.push(Sequence::from_mult_unchecked(sym.group(), v.clone()));
            }
        }
        return Ok(());
    }
    let room = (k - pos - 1) * cap;
    let hi = cap.min(left);
    let lo = left.saturating_sub(room);
    for c in (lo..=hi).rev() {
        v[pos] = c as u16;
        fill(sym, v, pos + 1, left - c, cap, budget, visited, out)?;
    }
    v[pos] = 0;
    Ok(())
}

/// Number of multiplicity vectors of total `len` with entries at most
/// `max_mult` over `k` coordinates.
pub fn count_bounded_vectors(k: usize, len: usize, max_mult: usize) -> u128 {
    let mut ways = vec![0u128; len + 1];
    ways[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u128; len + 1];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for c in 0..=max_mult.min(len - s) {
                next[s + c] += w;
            }
        }
        ways = next;
    }
    ways[len]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    #[test]
    fn orbit_sizes_sum_to_total() {
        for m in [[2, 2].as_slice(), &[6], &[2, 4], &[3, 3]] {
            let g = make_group(m).unwrap();
            for sym in [Symmetries::identity(&g), Symmetries::automorphisms(&g).unwrap(), Symmetries::affine(&g).unwrap()] {
                let orbits = subset_orbits(&sym).unwrap();
                let total: usize = orbits.iter().map(|o| o.orbit_size).sum();
                assert_eq!(total, (1 << g.order()) - 1);
            }
        }
    }

    #[test]
    fn leaders_cover_every_vector() {
        let g = make_group(&[2, 2]).unwrap();
        let sym = Symmetries::automorphisms(&g).unwrap();
        let all = sequence_leaders(&Symmetries::identity(&g), 7, 7, u64::MAX).unwrap();
        assert_eq!(all.len() as u128, count_bounded_vectors(4, 7, 7));
        let leaders = sequence_leaders(&sym, 7, 7, u64::MAX).unwrap();
        let covered: usize = leaders.iter().map(|s| sym.orbit_size(s.multiplicities())).sum();
        assert_eq!(covered, all.len());
        assert!(matches!(
            sequence_leaders(&sym, 7, 7, 3),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn affine_maps_count() {
        let g = make_group(&[8]).unwrap();
        assert_eq!(Symmetries::affine(&g).unwrap().len(), 32);
    }
}
