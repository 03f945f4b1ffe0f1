//! Factor sets over a compatible pair, inner factor sets, the second
//! cohomology group, the pushforward along the WAct order, and the Baer
//! sum realized as class addition.

use crate::action::CompatiblePair;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::monoid::{AbelianGroupWitness, Elem};

/// First factor-set condition failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorSetViolation {
    /// g(h, 1) !~^h 1.
    RightUnit { h: Elem },
    /// g(1, h) !~^h 1.
    LeftUnit { h: Elem },
    /// g(x,y)*g(xy,z) !~^{xyz} phi(x, g(y,z))*g(x,yz).
    Cocycle { x: Elem, y: Elem, z: Elem },
}

impl std::fmt::Display for FactorSetViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FactorSetViolation::RightUnit { h } => write!(f, "unit condition fails at ({h}, 1)"),
            FactorSetViolation::LeftUnit { h } => write!(f, "unit condition fails at (1, {h})"),
            FactorSetViolation::Cocycle { x, y, z } => {
                write!(f, "cocycle condition fails at triple ({x},{y},{z})")
            }
        }
    }
}

fn check_shape(g: &[Vec<Elem>], pair: &CompatiblePair) -> Result<()> {
    let hn = pair.relation.h.size();
    let nn = pair.relation.n.size();
    if g.len() != hn || g.iter().any(|row| row.len() != hn) {
        return Err(Error::ShapeMismatch(format!(
            "factor set must be {hn}x{hn}"
        )));
    }
    if g.iter().flatten().any(|&v| v >= nn) {
        return Err(Error::ShapeMismatch("factor-set value out of range".into()));
    }
    Ok(())
}

/// Check the unit and cocycle conditions of a factor set under the
/// pair's relation, reporting the first violation.
pub fn check_factor_set(
    g: &[Vec<Elem>],
    pair: &CompatiblePair,
) -> Result<Option<FactorSetViolation>> {
    check_shape(g, pair)?;
    let e = &pair.relation;
    let h_m = &e.h;
    let n_m = &e.n;
    let one = h_m.identity;
    for h in h_m.elems() {
        if !e.related(h, g[h][one], n_m.identity) {
            return Ok(Some(FactorSetViolation::RightUnit { h }));
        }
        if !e.related(h, g[one][h], n_m.identity) {
            return Ok(Some(FactorSetViolation::LeftUnit { h }));
        }
    }
    for x in h_m.elems() {
        for y in h_m.elems() {
            for z in h_m.elems() {
                let xy = h_m.mul(x, y);
                let yz = h_m.mul(y, z);
                let idx = h_m.mul(xy, z);
                let lhs = n_m.mul(g[x][y], g[xy][z]);
                let rhs = n_m.mul(pair.action.apply(x, g[y][z]), g[x][yz]);
                if !e.related(idx, lhs, rhs) {
                    return Ok(Some(FactorSetViolation::Cocycle { x, y, z }));
                }
            }
        }
    }
    Ok(None)
}

/// The inner factor set of a unit-preserving map t: H -> N,
/// dt(h, h') = phi(h, t(h')) * t(h*h')^{-1} * t(h).
pub fn inner_factor_set(
    t: &[Elem],
    pair: &CompatiblePair,
    witness: &AbelianGroupWitness,
) -> Result<Vec<Vec<Elem>>> {
    let h_m = &pair.relation.h;
    let n_m = &pair.relation.n;
    if t.len() != h_m.size() {
        return Err(Error::SizeMismatch {
            expected: h_m.size(),
            got: t.len(),
        });
    }
    if t[h_m.identity] != n_m.identity {
        return Err(Error::UnitNotPreserved {
            got: t[h_m.identity],
        });
    }
    let table = h_m
        .elems()
        .map(|h| {
            h_m.elems()
                .map(|hp| {
                    let a = pair.action.apply(h, t[hp]);
                    let b = witness.inv(t[h_m.mul(h, hp)]);
                    n_m.mul(n_m.mul(a, b), t[h])
                })
                .collect()
        })
        .collect();
    Ok(table)
}

/// First unit-preserving t with (dt + g2) ~ g1 pointwise, if any, in
/// lexicographic order of t. No revalidation of the inputs.
fn witness_raw(
    g1: &[Vec<Elem>],
    g2: &[Vec<Elem>],
    pair: &CompatiblePair,
    witness: &AbelianGroupWitness,
) -> Option<Vec<Elem>> {
    let e = &pair.relation;
    let h_m = &e.h;
    let n_m = &e.n;
    let nn = n_m.size();
    let free: Vec<Elem> = h_m.elems().filter(|&h| h != h_m.identity).collect();
    let mut t = vec![n_m.identity; h_m.size()];
    let mut choice = vec![0usize; free.len()];
    loop {
        for (slot, &h) in free.iter().enumerate() {
            t[h] = choice[slot];
        }
        let dt = inner_factor_set(&t, pair, witness).expect("unit preserved by construction");
        let ok = h_m.elems().all(|h| {
            h_m.elems().all(|hp| {
                let idx = h_m.mul(h, hp);
                e.related(idx, n_m.mul(dt[h][hp], g2[h][hp]), g1[h][hp])
            })
        });
        if ok {
            return Some(t);
        }
        let mut slot = free.len();
        loop {
            if slot == 0 {
                return None;
            }
            slot -= 1;
            choice[slot] += 1;
            if choice[slot] < nn {
                break;
            }
            choice[slot] = 0;
        }
    }
}

fn equivalent_raw(
    g1: &[Vec<Elem>],
    g2: &[Vec<Elem>],
    pair: &CompatiblePair,
    witness: &AbelianGroupWitness,
) -> bool {
    witness_raw(g1, g2, pair, witness).is_some()
}

/// Are two factor sets cohomologous: does some unit-preserving t make
/// (dt + g2) agree with g1 pointwise up to ~? Decided by exhaustive
/// search over all |N|^(|H|-1) candidate maps t.
pub fn factor_sets_equivalent(
    g1: &[Vec<Elem>],
    g2: &[Vec<Elem>],
    pair: &CompatiblePair,
    witness: &AbelianGroupWitness,
) -> Result<bool> {
    Ok(factor_set_equivalence_witness(g1, g2, pair, witness)?.is_some())
}

/// The first map t witnessing g1 ~ (dt + g2), when the classes agree.
pub fn factor_set_equivalence_witness(
    g1: &[Vec<Elem>],
    g2: &[Vec<Elem>],
    pair: &CompatiblePair,
    witness: &AbelianGroupWitness,
) -> Result<Option<Vec<Elem>>> {
    for g in [g1, g2] {
        if let Some(v) = check_factor_set(g, pair)? {
            return Err(Error::ContextMismatch(format!(
                "input is not a factor set: {v}"
            )));
        }
    }
    Ok(witness_raw(g1, g2, pair, witness))
}

/// The second cohomology group of a compatible pair: factor-set classes
/// under pointwise addition of representatives.
#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    pub pair: CompatiblePair,
    pub witness: AbelianGroupWitness,
    /// Lexicographically least member of each class, in discovery order
    /// (which is lexicographic as well).
    pub classes: Vec<Vec<Vec<Elem>>>,
    /// `addition[i][j]` = index of the class of rep_i + rep_j.
    pub addition: Vec<Vec<usize>>,
    /// Additive inverse per class.
    pub negation: Vec<usize>,
    /// Index of the class of the constant-identity factor set.
    pub zero: usize,
}

impl CohomologyGroup {
    pub fn order(&self) -> usize {
        self.classes.len()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.addition[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.negation[a]
    }

    /// Class index of an arbitrary factor set in this context.
    pub fn class_of(&self, g: &[Vec<Elem>]) -> Result<usize> {
        if let Some(v) = check_factor_set(g, &self.pair)? {
            return Err(Error::ContextMismatch(format!(
                "not a factor set here: {v}"
            )));
        }
        self.classes
            .iter()
            .position(|rep| equivalent_raw(g, rep, &self.pair, &self.witness))
            .ok_or_else(|| Error::ContextMismatch("factor set matches no enumerated class".into()))
    }
}

/// Enumerate factor sets up to per-cell classes and quotient them by
/// equivalence.
///
/// Cells touching the identity of H are pinned to the least member of
/// the class of 1 at their index (the unit conditions force the class);
/// every other cell ranges over the class representatives of N/~ at its
/// product index. Each surviving table is the least member of its
/// per-cell-class orbit, so class representatives are canonical.
pub fn cohomology_group(
    pair: &CompatiblePair,
    witness: &AbelianGroupWitness,
) -> Result<CohomologyGroup> {
    cohomology_group_with_budget(pair, witness, Caps::default().enumeration_budget)
}

pub fn cohomology_group_with_budget(
    pair: &CompatiblePair,
    witness: &AbelianGroupWitness,
    budget: u64,
) -> Result<CohomologyGroup> {
    if witness.monoid != pair.relation.n {
        return Err(Error::KernelNotAbelianGroup(
            "witness is for a different kernel".into(),
        ));
    }
    let e = &pair.relation;
    let h_m = &e.h;
    let n_m = &e.n;
    let one = h_m.identity;

    // Free cells in row-major order, with their candidate values.
    let mut free_cells: Vec<(Elem, Elem, Vec<Elem>)> = Vec::new();
    let mut count: u64 = 1;
    for h in h_m.elems() {
        for hp in h_m.elems() {
            if h == one || hp == one {
                continue;
            }
            let reps = e.class_reps(h_m.mul(h, hp));
            count = count.saturating_mul(reps.len() as u64);
            free_cells.push((h, hp, reps));
        }
    }
    if count > budget {
        return Err(Error::CapExceeded(format!(
            "{count} candidate factor sets exceed budget {budget}"
        )));
    }

    let mut base = vec![vec![n_m.identity; h_m.size()]; h_m.size()];
    for h in h_m.elems() {
        base[h][one] = e.class_min(h, n_m.identity);
        base[one][h] = e.class_min(h, n_m.identity);
    }

    let mut factor_sets: Vec<Vec<Vec<Elem>>> = Vec::new();
    let mut choice = vec![0usize; free_cells.len()];
    loop {
        let mut g = base.clone();
        for (slot, &(h, hp, ref reps)) in free_cells.iter().enumerate() {
            g[h][hp] = reps[choice[slot]];
        }
        if check_factor_set(&g, pair)?.is_none() {
            factor_sets.push(g);
        }
        let mut slot = free_cells.len();
        loop {
            if slot == 0 {
                factor_sets.sort();
                return finish_group(pair, witness, factor_sets);
            }
            slot -= 1;
            choice[slot] += 1;
            if choice[slot] < free_cells[slot].2.len() {
                break;
            }
            choice[slot] = 0;
        }
    }
}

fn finish_group(
    pair: &CompatiblePair,
    witness: &AbelianGroupWitness,
    factor_sets: Vec<Vec<Vec<Elem>>>,
) -> Result<CohomologyGroup> {
    let mut classes: Vec<Vec<Vec<Elem>>> = Vec::new();
    for g in &factor_sets {
        if !classes
            .iter()
            .any(|rep| equivalent_raw(g, rep, pair, witness))
        {
            classes.push(g.clone());
        }
    }

    let n_m = &pair.relation.n;
    let pointwise = |a: &[Vec<Elem>], b: &[Vec<Elem>]| -> Vec<Vec<Elem>> {
        a.iter()
            .zip(b)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| n_m.mul(x, y)).collect())
            .collect()
    };
    let locate = |g: &[Vec<Elem>]| -> Result<usize> {
        classes
            .iter()
            .position(|rep| equivalent_raw(g, rep, pair, witness))
            .ok_or_else(|| Error::ContextMismatch("class sum left the enumerated set".into()))
    };

    let k = classes.len();
    let mut addition = vec![vec![0usize; k]; k];
    for i in 0..k {
        for j in 0..k {
            addition[i][j] = locate(&pointwise(&classes[i], &classes[j]))?;
        }
    }
    let unit_table = vec![vec![n_m.identity; pair.relation.h.size()]; pair.relation.h.size()];
    let zero = locate(&unit_table)?;
    let mut negation = vec![0usize; k];
    for i in 0..k {
        let inv_table: Vec<Vec<Elem>> = classes[i]
            .iter()
            .map(|row| row.iter().map(|&v| witness.inv(v)).collect())
            .collect();
        negation[i] = locate(&inv_table)?;
    }

    // The quotient must be an abelian group; anything else is a defect
    // in the enumeration above.
    for i in 0..k {
        if addition[i][zero] != i || addition[zero][i] != i || addition[i][negation[i]] != zero {
            return Err(Error::ContextMismatch(
                "class addition is not a group".into(),
            ));
        }
        for j in 0..k {
            if addition[i][j] != addition[j][i] {
                return Err(Error::ContextMismatch(
                    "class addition is not commutative".into(),
                ));
            }
            for l in 0..k {
                if addition[addition[i][j]][l] != addition[i][addition[j][l]] {
                    return Err(Error::ContextMismatch(
                        "class addition is not associative".into(),
                    ));
                }
            }
        }
    }

    Ok(CohomologyGroup {
        pair: pair.clone(),
        witness: witness.clone(),
        classes,
        addition,
        negation,
        zero,
    })
}

/// The full pushforward map between comparable contexts, verified to be
/// a group homomorphism.
pub fn pushforward_map(src: &CohomologyGroup, dst: &CohomologyGroup) -> Result<Vec<usize>> {
    if !src.pair.leq(&dst.pair)? {
        return Err(Error::NotComparable(
            "pushforward needs (E, [phi]) <= (E', [phi'])".into(),
        ));
    }
    let map: Vec<usize> = src
        .classes
        .iter()
        .map(|rep| dst.class_of(rep))
        .collect::<Result<_>>()?;
    for a in 0..src.order() {
        for b in 0..src.order() {
            if map[src.add(a, b)] != dst.add(map[a], map[b]) {
                return Err(Error::ContextMismatch(
                    "pushforward is not a homomorphism".into(),
                ));
            }
        }
    }
    if map[src.zero] != dst.zero {
        return Err(Error::ContextMismatch(
            "pushforward does not preserve zero".into(),
        ));
    }
    Ok(map)
}

/// Image of one class under the pushforward.
pub fn pushforward_l(src: &CohomologyGroup, class: usize, dst: &CohomologyGroup) -> Result<usize> {
    let map = pushforward_map(src, dst)?;
    map.get(class)
        .copied()
        .ok_or_else(|| Error::ContextMismatch(format!("class index {class} out of range")))
}

/// Baer sum of two classes in the same group.
pub fn baer_sum(group: &CohomologyGroup, class1: usize, class2: usize) -> Result<usize> {
    if class1 >= group.order() || class2 >= group.order() {
        return Err(Error::ContextMismatch("class index out of range".into()));
    }
    Ok(group.add(class1, class2))
}
