//! H-indexed equivalence relations on N: admissibility, enumeration, the
//! refinement order with its lattice operations, and the coarse relation
//! associated to a candidate action.

use crate::action::CandidateAction;
use crate::error::{Error, Result};
use crate::monoid::{Elem, FiniteMonoid};
use crate::partition::{self, Partition};

/// A family of equivalence relations on N's elements, one per element of H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedEqRel {
    pub h: FiniteMonoid,
    pub n: FiniteMonoid,
    /// `partitions[h]` is the partition of N at index h, min-encoded.
    pub partitions: Vec<Partition>,
}

impl IndexedEqRel {
    pub fn new(h: FiniteMonoid, n: FiniteMonoid, partitions: Vec<Partition>) -> Result<Self> {
        if partitions.len() != h.size() {
            return Err(Error::DimensionMismatch(format!(
                "{} partitions for |H| = {}",
                partitions.len(),
                h.size()
            )));
        }
        for (idx, p) in partitions.iter().enumerate() {
            if p.len() != n.size() || !partition::is_canonical(p) {
                return Err(Error::DimensionMismatch(format!(
                    "partition at index {idx} is not a canonical partition of |N| = {}",
                    n.size()
                )));
            }
        }
        Ok(IndexedEqRel { h, n, partitions })
    }

    /// The discrete relation at every index.
    pub fn fine(h: FiniteMonoid, n: FiniteMonoid) -> Self {
        let partitions = vec![partition::discrete(n.size()); h.size()];
        IndexedEqRel { h, n, partitions }
    }

    #[inline]
    pub fn related(&self, h: Elem, a: Elem, b: Elem) -> bool {
        self.partitions[h][a] == self.partitions[h][b]
    }

    /// Least element of the class of `x` at index `h`.
    #[inline]
    pub fn class_min(&self, h: Elem, x: Elem) -> Elem {
        self.partitions[h][x]
    }

    /// Members of the class of `x` at index `h`, ascending.
    pub fn class_members(&self, h: Elem, x: Elem) -> Vec<Elem> {
        let c = self.partitions[h][x];
        (0..self.n.size())
            .filter(|&y| self.partitions[h][y] == c)
            .collect()
    }

    /// Sorted class representatives at index `h`.
    pub fn class_reps(&self, h: Elem) -> Vec<Elem> {
        let mut reps: Vec<Elem> = self.partitions[h].clone();
        reps.sort_unstable();
        reps.dedup();
        reps
    }

    /// Flattened encoding used for deterministic ordering of relations.
    pub fn encoding(&self) -> Vec<usize> {
        self.partitions.iter().flatten().copied().collect()
    }

    fn same_shape(&self, other: &IndexedEqRel) -> Result<()> {
        if self.h != other.h || self.n != other.n {
            return Err(Error::ShapeMismatch(
                "relations over different (H, N)".into(),
            ));
        }
        Ok(())
    }
}

/// First admissibility failure, in the numbered order of the definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityViolation {
    /// Condition 1: the relation at the identity index is not discrete.
    IdentityNotDiscrete { n1: Elem, n2: Elem },
    /// Condition 2: n1 ~^h n2 but x*n1 !~^h x*n2.
    LeftTranslation {
        h: Elem,
        n1: Elem,
        n2: Elem,
        x: Elem,
    },
    /// Condition 3: n1 ~^h n2 but n1 !~^{h*y} n2.
    RightIndex {
        h: Elem,
        n1: Elem,
        n2: Elem,
        y: Elem,
    },
}

/// Check the three admissibility conditions, reporting the first failure.
pub fn check_admissible(e: &IndexedEqRel) -> Option<AdmissibilityViolation> {
    let one = e.h.identity;
    let nn = e.n.size();
    for a in 0..nn {
        for b in a + 1..nn {
            if e.related(one, a, b) {
                return Some(AdmissibilityViolation::IdentityNotDiscrete { n1: a, n2: b });
            }
        }
    }
    for h in e.h.elems() {
        for a in 0..nn {
            for b in a + 1..nn {
                if !e.related(h, a, b) {
                    continue;
                }
                for x in 0..nn {
                    if !e.related(h, e.n.mul(x, a), e.n.mul(x, b)) {
                        return Some(AdmissibilityViolation::LeftTranslation {
                            h,
                            n1: a,
                            n2: b,
                            x,
                        });
                    }
                }
            }
        }
    }
    for h in e.h.elems() {
        for a in 0..nn {
            for b in a + 1..nn {
                if !e.related(h, a, b) {
                    continue;
                }
                for y in e.h.elems() {
                    if !e.related(e.h.mul(h, y), a, b) {
                        return Some(AdmissibilityViolation::RightIndex { h, n1: a, n2: b, y });
                    }
                }
            }
        }
    }
    None
}

/// All admissible relations over (H, N), in lexicographic order of their
/// encodings. The identity index is pinned to the discrete partition, which
/// condition 1 forces anyway.
pub fn enumerate_admissible(h: &FiniteMonoid, n: &FiniteMonoid) -> Result<Vec<IndexedEqRel>> {
    enumerate_admissible_with_budget(h, n, crate::caps::Caps::default().enumeration_budget)
}

pub fn enumerate_admissible_with_budget(
    h: &FiniteMonoid,
    n: &FiniteMonoid,
    budget: u64,
) -> Result<Vec<IndexedEqRel>> {
    let per_index = partition::enumerate_partitions(n.size());
    let free_slots = h.size().saturating_sub(1);
    let candidates = (per_index.len() as u64).checked_pow(free_slots as u32);
    match candidates {
        Some(c) if c <= budget => {}
        _ => {
            return Err(Error::CapExceeded(format!(
                "{}^{} candidate relation families exceed budget {}",
                per_index.len(),
                free_slots,
                budget
            )))
        }
    }

    let free_indices: Vec<Elem> = h.elems().filter(|&i| i != h.identity).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; free_indices.len()];
    loop {
        let mut partitions = vec![partition::discrete(n.size()); h.size()];
        for (slot, &idx) in free_indices.iter().enumerate() {
            partitions[idx] = per_index[choice[slot]].clone();
        }
        let rel = IndexedEqRel {
            h: h.clone(),
            n: n.clone(),
            partitions,
        };
        if check_admissible(&rel).is_none() {
            out.push(rel);
        }
        // Odometer over the free slots.
        let mut slot = free_indices.len();
        loop {
            if slot == 0 {
                out.sort_by_key(|r| r.encoding());
                return Ok(out);
            }
            slot -= 1;
            choice[slot] += 1;
            if choice[slot] < per_index.len() {
                break;
            }
            choice[slot] = 0;
        }
    }
}

/// True iff every class of `e1` is contained in a class of `e2`, per index.
pub fn refines(e1: &IndexedEqRel, e2: &IndexedEqRel) -> Result<bool> {
    e1.same_shape(e2)?;
    Ok(e1
        .partitions
        .iter()
        .zip(&e2.partitions)
        .all(|(p, q)| partition::refines(p, q)))
}

/// Pointwise intersection of the two families.
pub fn meet(e1: &IndexedEqRel, e2: &IndexedEqRel) -> Result<IndexedEqRel> {
    e1.same_shape(e2)?;
    let partitions = e1
        .partitions
        .iter()
        .zip(&e2.partitions)
        .map(|(p, q)| partition::meet(p, q))
        .collect();
    Ok(IndexedEqRel {
        h: e1.h.clone(),
        n: e1.n.clone(),
        partitions,
    })
}

/// Pointwise transitive closure of the union of the two families.
pub fn join(e1: &IndexedEqRel, e2: &IndexedEqRel) -> Result<IndexedEqRel> {
    e1.same_shape(e2)?;
    let partitions = e1
        .partitions
        .iter()
        .zip(&e2.partitions)
        .map(|(p, q)| partition::join(p, q))
        .collect();
    Ok(IndexedEqRel {
        h: e1.h.clone(),
        n: e1.n.clone(),
        partitions,
    })
}

/// The coarse relation of a candidate action: n ~^h n' iff every (x, y)
/// with x*h*y = 1 has alpha(x, n) = alpha(x, n').
///
/// For each h the relevant x-set {x : exists y. x*h*y = 1} is precomputed
/// with one scan of H x H; elements are then grouped by their value vector
/// over that set. Always a family of equivalence relations; admissible
/// exactly when the action is valid.
pub fn coarse_equivalence(alpha: &CandidateAction) -> IndexedEqRel {
    let h = &alpha.h;
    let n = &alpha.n;
    let mut partitions = Vec::with_capacity(h.size());
    for hh in h.elems() {
        let xs: Vec<Elem> = h
            .elems()
            .filter(|&x| h.elems().any(|y| h.mul(h.mul(x, hh), y) == h.identity))
            .collect();
        let keys: Vec<Vec<Elem>> = n
            .elems()
            .map(|e| xs.iter().map(|&x| alpha.apply(x, e)).collect())
            .collect();
        let mut first = std::collections::BTreeMap::new();
        for (e, key) in keys.iter().enumerate() {
            first.entry(key.clone()).or_insert(e);
        }
        partitions.push(n.elems().map(|e| first[&keys[e]]).collect());
    }
    IndexedEqRel {
        h: h.clone(),
        n: n.clone(),
        partitions,
    }
}
