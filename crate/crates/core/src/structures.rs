//! The structures layered over the cohomology groups: the inverse monoid
//! of (relation, class) pairs for a fixed valid action, the inverse
//! category whose objects are valid actions, and the ordered groupoid of
//! compatible pairs, cross-checked against the core of the Grothendieck
//! construction of the pushforward functor.

use std::collections::BTreeMap;

use crate::action::{self, wact_poset_with_budget, CandidateAction, CompatiblePair, WActPoset};
use crate::caps::Caps;
use crate::cohomology::{cohomology_group_with_budget, pushforward_map, CohomologyGroup};
use crate::error::{Error, Result};
use crate::indexed::{self, IndexedEqRel};
use crate::monoid::{AbelianGroupWitness, Elem, FiniteMonoid};

/// The inverse monoid of pairs `(E, [g])` over a fixed valid action:
/// E ranges over the relations compatible with the action and `[g]` over
/// the cohomology classes at `(E, [phi])`.
#[derive(Debug, Clone)]
pub struct TildeH2Monoid {
    pub action: CandidateAction,
    /// Compatible relations in canonical (encoding) order.
    pub relations: Vec<IndexedEqRel>,
    /// Cohomology group per relation, in the same order.
    pub groups: Vec<CohomologyGroup>,
    /// Elements as (relation index, class index), relation-major.
    pub elements: Vec<(usize, usize)>,
    pub operation: Vec<Vec<usize>>,
    /// Position of (bottom relation, zero class), the monoid unit.
    pub zero: usize,
    /// Generalized inverse per element: `(E, [-g])` for `(E, [g])`.
    pub inverse: Vec<usize>,
}

impl TildeH2Monoid {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// The operation table realized as a finite monoid.
    pub fn as_monoid(&self) -> FiniteMonoid {
        let labels = self
            .elements
            .iter()
            .map(|&(r, c)| format!("(E{r},g{c})"))
            .collect();
        FiniteMonoid::with_cap(
            format!("tilde_h2({},{})", self.action.n.name, self.action.h.name),
            labels,
            self.zero,
            self.operation.clone(),
            usize::MAX,
        )
        .expect("verified at construction")
    }
}

/// Build the inverse monoid for a valid action over an abelian kernel.
pub fn tilde_h2_monoid(
    alpha: &CandidateAction,
    witness: &AbelianGroupWitness,
) -> Result<TildeH2Monoid> {
    tilde_h2_monoid_with_budget(alpha, witness, Caps::default().enumeration_budget)
}

pub fn tilde_h2_monoid_with_budget(
    alpha: &CandidateAction,
    witness: &AbelianGroupWitness,
    budget: u64,
) -> Result<TildeH2Monoid> {
    let lattice = action::enumerate_compatible_relations(alpha)?;
    let relations = lattice.relations.clone();
    let mut groups = Vec::with_capacity(relations.len());
    for e in &relations {
        let pair = CompatiblePair::new(e.clone(), alpha.clone())?;
        groups.push(cohomology_group_with_budget(&pair, witness, budget)?);
    }

    let mut elements = Vec::new();
    for (r, group) in groups.iter().enumerate() {
        for c in 0..group.order() {
            elements.push((r, c));
        }
    }
    let pos = |r: usize, c: usize| -> Result<usize> {
        elements
            .iter()
            .position(|&(rr, cc)| rr == r && cc == c)
            .ok_or_else(|| Error::ContextMismatch("element left the enumerated set".into()))
    };

    let rel_index = |e: &IndexedEqRel| -> Result<usize> {
        relations.iter().position(|r| r == e).ok_or_else(|| {
            Error::ContextMismatch("join left the compatible-relation lattice".into())
        })
    };

    let k = elements.len();
    let mut operation = vec![vec![0usize; k]; k];
    for (i, &(r1, c1)) in elements.iter().enumerate() {
        for (j, &(r2, c2)) in elements.iter().enumerate() {
            let joined = indexed::join(&relations[r1], &relations[r2])?;
            let rj = rel_index(&joined)?;
            let l1 = pushforward_map(&groups[r1], &groups[rj])?;
            let l2 = pushforward_map(&groups[r2], &groups[rj])?;
            let sum = groups[rj].add(l1[c1], l2[c2]);
            operation[i][j] = pos(rj, sum)?;
        }
    }

    let zero = pos(lattice.bottom, groups[lattice.bottom].zero)?;
    let mut inverse = vec![0usize; k];
    for (i, &(r, c)) in elements.iter().enumerate() {
        inverse[i] = pos(r, groups[r].neg(c))?;
    }

    // Monoid laws, with the bottom-zero pair as unit.
    for i in 0..k {
        if operation[i][zero] != i || operation[zero][i] != i {
            return Err(Error::ContextMismatch("bottom zero is not a unit".into()));
        }
        for j in 0..k {
            for l in 0..k {
                if operation[operation[i][j]][l] != operation[i][operation[j][l]] {
                    return Err(Error::ContextMismatch(
                        "operation is not associative".into(),
                    ));
                }
            }
        }
    }

    Ok(TildeH2Monoid {
        action: alpha.clone(),
        relations,
        groups,
        elements,
        operation,
        zero,
        inverse,
    })
}

/// Unique-generalized-inverse test: every x has exactly one y with
/// x y x = x and y x y = y. The equivalent regular-with-commuting-
/// idempotents route is computed alongside and must agree.
pub fn check_inverse_monoid(m: &FiniteMonoid) -> bool {
    let unique = m.elems().all(|x| {
        m.elems()
            .filter(|&y| m.mul(m.mul(x, y), x) == x && m.mul(m.mul(y, x), y) == y)
            .count()
            == 1
    });
    let regular = m
        .elems()
        .all(|x| m.elems().any(|y| m.mul(m.mul(x, y), x) == x));
    let idempotents: Vec<Elem> = m.elems().filter(|&e| m.mul(e, e) == e).collect();
    let commuting = idempotents
        .iter()
        .all(|&a| idempotents.iter().all(|&b| m.mul(a, b) == m.mul(b, a)));
    debug_assert_eq!(
        unique,
        regular && commuting,
        "inverse-monoid routes disagree"
    );
    unique && regular && commuting
}

/// Composition tables sized rows = |hom(i, j)|, cols = |hom(j, k)|, so
/// empty hom-sets always produce structurally equal tables.
fn sized_compose(hom_sizes: &[Vec<usize>]) -> Vec<Vec<Vec<Vec<Vec<usize>>>>> {
    let n = hom_sizes.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| vec![vec![0usize; hom_sizes[j][k]]; hom_sizes[i][j]])
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// A finite category with explicit hom-lists and composition tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    pub object_labels: Vec<String>,
    /// Morphism labels per (source, target).
    pub hom_labels: Vec<Vec<Vec<String>>>,
    /// `compose[i][j][k][f][g]`: index in hom(i, k) of "f then g" for
    /// f in hom(i, j), g in hom(j, k).
    pub compose: Vec<Vec<Vec<Vec<Vec<usize>>>>>,
    /// `identity[i]`: index of the identity in hom(i, i).
    pub identity: Vec<usize>,
}

impl FiniteCategory {
    pub fn object_count(&self) -> usize {
        self.object_labels.len()
    }

    pub fn hom_size(&self, i: usize, j: usize) -> usize {
        self.hom_labels[i][j].len()
    }

    /// First category-law violation, if any: identity laws and
    /// associativity over every composable triple.
    pub fn check_laws(&self) -> Option<String> {
        let n = self.object_count();
        for i in 0..n {
            if self.identity[i] >= self.hom_size(i, i) {
                return Some(format!("identity index out of range at object {i}"));
            }
            for j in 0..n {
                for f in 0..self.hom_size(i, j) {
                    if self.compose[i][i][j][self.identity[i]][f] != f {
                        return Some(format!("left identity fails at {i}->{j} morphism {f}"));
                    }
                    if self.compose[i][j][j][f][self.identity[j]] != f {
                        return Some(format!("right identity fails at {i}->{j} morphism {f}"));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        for f in 0..self.hom_size(i, j) {
                            for g in 0..self.hom_size(j, k) {
                                for h in 0..self.hom_size(k, l) {
                                    let fg = self.compose[i][j][k][f][g];
                                    let gh = self.compose[j][k][l][g][h];
                                    if self.compose[i][k][l][fg][h] != self.compose[i][j][l][f][gh]
                                    {
                                        return Some(format!(
                                            "associativity fails at {i}->{j}->{k}->{l}"
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Generalized inverses of f: i -> j, i.e. g: j -> i with f g f = f
    /// and g f g = g.
    fn generalized_inverses(&self, i: usize, j: usize, f: usize) -> Vec<usize> {
        (0..self.hom_size(j, i))
            .filter(|&g| {
                let fg = self.compose[i][j][i][f][g];
                let fgf = self.compose[i][i][j][fg][f];
                let gf = self.compose[j][i][j][g][f];
                let gfg = self.compose[j][j][i][gf][g];
                fgf == f && gfg == g
            })
            .collect()
    }

    /// Does every morphism have a unique generalized inverse?
    pub fn check_inverse_category(&self) -> bool {
        let n = self.object_count();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..self.hom_size(i, j)).all(|f| self.generalized_inverses(i, j, f).len() == 1)
            })
        })
    }

    /// Is every morphism two-sidedly invertible?
    pub fn check_groupoid(&self) -> bool {
        let n = self.object_count();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..self.hom_size(i, j)).all(|f| {
                    (0..self.hom_size(j, i)).any(|g| {
                        self.compose[i][j][i][f][g] == self.identity[i]
                            && self.compose[j][i][j][g][f] == self.identity[j]
                    })
                })
            })
        })
    }
}

/// The inverse category of valid actions: hom(phi, phi') collects the
/// pairs `(E, [g])` with E compatible with both actions and the actions
/// equivalent under E.
#[derive(Debug, Clone)]
pub struct TildeH2Category {
    pub category: FiniteCategory,
    /// Valid action tables, in lexicographic order.
    pub objects: Vec<CandidateAction>,
    /// Admissible relations referenced by the morphisms.
    pub relations: Vec<IndexedEqRel>,
    /// Morphism payloads per (source, target): (relation index, class).
    pub morphisms: Vec<Vec<Vec<(usize, usize)>>>,
}

/// All valid candidate actions over (H, N), lexicographically ordered.
///
/// The identity row is forced; rows at right-invertible indices must be
/// unit-preserving multiplicative endomorphisms of N, which prunes the
/// scan considerably; every remaining table is checked through its
/// coarse relation.
pub fn enumerate_valid_actions(
    h_m: &FiniteMonoid,
    n_m: &FiniteMonoid,
    budget: u64,
) -> Result<Vec<CandidateAction>> {
    let nn = n_m.size();
    let mut all_rows: Vec<Vec<Elem>> = vec![vec![]];
    for _ in 0..nn {
        let mut next = Vec::with_capacity(all_rows.len() * nn);
        for row in &all_rows {
            for v in 0..nn {
                let mut r = row.clone();
                r.push(v);
                next.push(r);
            }
        }
        all_rows = next;
    }
    let endos: Vec<Vec<Elem>> = all_rows
        .iter()
        .filter(|row| {
            row[n_m.identity] == n_m.identity
                && (0..nn).all(|a| (0..nn).all(|b| row[n_m.mul(a, b)] == n_m.mul(row[a], row[b])))
        })
        .cloned()
        .collect();

    let identity_row: Vec<Elem> = n_m.elems().collect();
    let mut per_index: Vec<&[Vec<Elem>]> = Vec::with_capacity(h_m.size());
    let id_slot = [identity_row.clone()];
    for h in h_m.elems() {
        if h == h_m.identity {
            per_index.push(&id_slot);
        } else if h_m.elems().any(|y| h_m.mul(h, y) == h_m.identity) {
            per_index.push(&endos);
        } else {
            per_index.push(&all_rows);
        }
    }
    let mut count: u64 = 1;
    for rows in &per_index {
        count = count.saturating_mul(rows.len() as u64);
    }
    if count > budget {
        return Err(Error::CapExceeded(format!(
            "{count} candidate action tables exceed budget {budget}"
        )));
    }

    let mut out = Vec::new();
    let mut choice = vec![0usize; h_m.size()];
    loop {
        let table: Vec<Vec<Elem>> = per_index
            .iter()
            .zip(&choice)
            .map(|(rows, &c)| rows[c].clone())
            .collect();
        let alpha = CandidateAction {
            h: h_m.clone(),
            n: n_m.clone(),
            table,
        };
        if action::is_valid(&alpha).0 {
            out.push(alpha);
        }
        let mut slot = h_m.size();
        let done = loop {
            if slot == 0 {
                break true;
            }
            slot -= 1;
            choice[slot] += 1;
            if choice[slot] < per_index[slot].len() {
                break false;
            }
            choice[slot] = 0;
        };
        if done {
            break;
        }
    }
    out.sort_by_key(|a| a.encoding());
    Ok(out)
}

/// Build the inverse category of valid actions over an abelian kernel.
pub fn tilde_h2_category(
    h_m: &FiniteMonoid,
    n_m: &FiniteMonoid,
    witness: &AbelianGroupWitness,
) -> Result<TildeH2Category> {
    tilde_h2_category_with_budget(h_m, n_m, witness, Caps::default().enumeration_budget)
}

pub fn tilde_h2_category_with_budget(
    h_m: &FiniteMonoid,
    n_m: &FiniteMonoid,
    witness: &AbelianGroupWitness,
    budget: u64,
) -> Result<TildeH2Category> {
    let objects = enumerate_valid_actions(h_m, n_m, budget)?;
    // Explicit composition tables and the law scan are quartic in the
    // object count.
    let work = (objects.len() as u64).checked_pow(4);
    match work {
        Some(w) if w <= budget => {}
        _ => {
            return Err(Error::CapExceeded(format!(
                "{} valid actions make the explicit category too large for budget {budget}",
                objects.len()
            )))
        }
    }
    let relations = indexed::enumerate_admissible_with_budget(h_m, n_m, budget)?;
    let compatible: Vec<Vec<bool>> = objects
        .iter()
        .map(|alpha| {
            relations
                .iter()
                .map(|e| matches!(action::check_compatible(alpha, e), Ok(None)))
                .collect()
        })
        .collect();

    // One cohomology group per (relation, action class under it); class
    // indices agree across equivalent actions because the enumeration
    // depends on the action only up to ~.
    let mut group_cache: BTreeMap<(usize, Vec<Elem>), CohomologyGroup> = BTreeMap::new();
    let mut group_for = |rel_idx: usize,
                         obj: &CandidateAction,
                         relations: &[IndexedEqRel]|
     -> Result<CohomologyGroup> {
        let e = &relations[rel_idx];
        let class_table: Vec<Elem> =
            e.h.elems()
                .flat_map(|h| e.n.elems().map(move |x| e.class_min(h, obj.apply(h, x))))
                .collect();
        if let Some(g) = group_cache.get(&(rel_idx, class_table.clone())) {
            return Ok(g.clone());
        }
        let pair = CompatiblePair::new(e.clone(), obj.clone())?;
        let group = cohomology_group_with_budget(&pair, witness, budget)?;
        group_cache.insert((rel_idx, class_table), group.clone());
        Ok(group)
    };

    let nobj = objects.len();
    let mut morphisms: Vec<Vec<Vec<(usize, usize)>>> = vec![vec![Vec::new(); nobj]; nobj];
    for (a, phi) in objects.iter().enumerate() {
        for (b, psi) in objects.iter().enumerate() {
            for (r, e) in relations.iter().enumerate() {
                if !compatible[a][r] || !compatible[b][r] {
                    continue;
                }
                if !action::tables_equivalent_under(e, phi, psi) {
                    continue;
                }
                let group = group_for(r, phi, &relations)?;
                for c in 0..group.order() {
                    morphisms[a][b].push((r, c));
                }
            }
        }
    }

    let mut compose = vec![vec![vec![Vec::<Vec<usize>>::new(); nobj]; nobj]; nobj];
    for a in 0..nobj {
        for b in 0..nobj {
            for c in 0..nobj {
                let mut table = vec![vec![0usize; morphisms[b][c].len()]; morphisms[a][b].len()];
                for (fi, &(r1, c1)) in morphisms[a][b].iter().enumerate() {
                    for (gi, &(r2, c2)) in morphisms[b][c].iter().enumerate() {
                        let joined = indexed::join(&relations[r1], &relations[r2])?;
                        let rj = relations.iter().position(|e| *e == joined).ok_or_else(|| {
                            Error::ContextMismatch("join is not admissible".into())
                        })?;
                        let g1 = group_for(r1, &objects[a], &relations)?;
                        let g2 = group_for(r2, &objects[b], &relations)?;
                        let gj_src = group_for(rj, &objects[a], &relations)?;
                        let gj_mid = group_for(rj, &objects[b], &relations)?;
                        let l1 = pushforward_map(&g1, &gj_src)?;
                        let l2 = pushforward_map(&g2, &gj_mid)?;
                        let sum = gj_src.add(l1[c1], l2[c2]);
                        let target = morphisms[a][c]
                            .iter()
                            .position(|&(r, cl)| r == rj && cl == sum)
                            .ok_or_else(|| {
                                Error::ContextMismatch(
                                    "composite is missing from the hom-set".into(),
                                )
                            })?;
                        table[fi][gi] = target;
                    }
                }
                compose[a][b][c] = table;
            }
        }
    }

    // Identity at phi: the zero class over the finest compatible relation.
    let mut identity = Vec::with_capacity(nobj);
    for (a, phi) in objects.iter().enumerate() {
        let lattice = action::enumerate_compatible_relations(phi)?;
        let bottom = &lattice.relations[lattice.bottom];
        let r = relations.iter().position(|e| e == bottom).unwrap();
        let group = group_for(r, phi, &relations)?;
        let idx = morphisms[a][a]
            .iter()
            .position(|&(rr, cc)| rr == r && cc == group.zero)
            .ok_or_else(|| Error::ContextMismatch("identity missing from hom-set".into()))?;
        identity.push(idx);
    }

    let object_labels = objects
        .iter()
        .map(|o| format!("phi{:?}", o.encoding()))
        .collect();
    let hom_labels = (0..nobj)
        .map(|a| {
            (0..nobj)
                .map(|b| {
                    morphisms[a][b]
                        .iter()
                        .map(|&(r, c)| format!("(E{r},g{c})"))
                        .collect()
                })
                .collect()
        })
        .collect();
    let category = FiniteCategory {
        object_labels,
        hom_labels,
        compose,
        identity,
    };
    if let Some(violation) = category.check_laws() {
        return Err(Error::ContextMismatch(format!(
            "category laws fail: {violation}"
        )));
    }
    if !category.check_inverse_category() {
        return Err(Error::ContextMismatch("not an inverse category".into()));
    }
    Ok(TildeH2Category {
        category,
        objects,
        relations,
        morphisms,
    })
}

/// The ordered groupoid of compatible pairs: endomorphism hom-sets are
/// the cohomology groups, every other hom-set is empty, and both objects
/// and morphisms carry the reverse of the WAct order.
#[derive(Debug, Clone)]
pub struct HatH2Groupoid {
    pub category: FiniteCategory,
    pub poset: WActPoset,
    pub groups: Vec<CohomologyGroup>,
    /// Reverse WAct order on objects.
    pub object_leq: Vec<Vec<bool>>,
    /// Order on morphisms, as (object, class) against (object, class).
    pub morphism_leq: Vec<Vec<bool>>,
    /// Flattened morphism list: (object index, class index).
    pub morphism_index: Vec<(usize, usize)>,
}

pub fn hat_h2_groupoid(
    h_m: &FiniteMonoid,
    n_m: &FiniteMonoid,
    witness: &AbelianGroupWitness,
) -> Result<HatH2Groupoid> {
    hat_h2_groupoid_with_budget(h_m, n_m, witness, Caps::default().enumeration_budget)
}

pub fn hat_h2_groupoid_with_budget(
    h_m: &FiniteMonoid,
    n_m: &FiniteMonoid,
    witness: &AbelianGroupWitness,
    budget: u64,
) -> Result<HatH2Groupoid> {
    let poset = wact_poset_with_budget(h_m, n_m, budget)?;
    let mut groups = Vec::with_capacity(poset.pairs.len());
    for pair in &poset.pairs {
        groups.push(cohomology_group_with_budget(pair, witness, budget)?);
    }
    let nobj = poset.pairs.len();

    let hom_labels: Vec<Vec<Vec<String>>> = (0..nobj)
        .map(|i| {
            (0..nobj)
                .map(|j| {
                    if i == j {
                        (0..groups[i].order()).map(|c| format!("g{c}")).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect()
        })
        .collect();
    let hom_sizes: Vec<Vec<usize>> = (0..nobj)
        .map(|i| (0..nobj).map(|j| hom_labels[i][j].len()).collect())
        .collect();
    let mut compose = sized_compose(&hom_sizes);
    for i in 0..nobj {
        let k = groups[i].order();
        let mut table = vec![vec![0usize; k]; k];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = groups[i].add(a, b);
            }
        }
        compose[i][i][i] = table;
    }
    let identity: Vec<usize> = groups.iter().map(|g| g.zero).collect();
    let object_labels = (0..nobj).map(|i| format!("pair{i}")).collect();
    let category = FiniteCategory {
        object_labels,
        hom_labels,
        compose,
        identity,
    };
    if let Some(violation) = category.check_laws() {
        return Err(Error::ContextMismatch(format!(
            "groupoid laws fail: {violation}"
        )));
    }
    if !category.check_groupoid() {
        return Err(Error::ContextMismatch(
            "hom-groups are not invertible".into(),
        ));
    }

    // Reverse of the WAct order on objects.
    let mut object_leq = vec![vec![false; nobj]; nobj];
    for i in 0..nobj {
        for j in 0..nobj {
            object_leq[i][j] = poset.leq[j][i];
        }
    }

    // Morphism order: [g1] at p1 precedes [g2] at p2 when p1 precedes p2
    // and [g1] is the pushforward of [g2] into the coarser context.
    let mut morphism_index = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        for c in 0..g.order() {
            morphism_index.push((i, c));
        }
    }
    let nmor = morphism_index.len();
    let mut morphism_leq = vec![vec![false; nmor]; nmor];
    for (a, &(i, c1)) in morphism_index.iter().enumerate() {
        for (b, &(j, c2)) in morphism_index.iter().enumerate() {
            if !object_leq[i][j] {
                continue;
            }
            let map = pushforward_map(&groups[j], &groups[i])?;
            morphism_leq[a][b] = map[c2] == c1;
        }
    }

    Ok(HatH2Groupoid {
        category,
        poset,
        groups,
        object_leq,
        morphism_leq,
        morphism_index,
    })
}

/// The Grothendieck construction of the pushforward functor over WAct:
/// hom(p, q) is the cohomology group at q when p <= q, composition adds
/// after pushing the first argument forward.
pub fn grothendieck_of_pushforward(
    poset: &WActPoset,
    groups: &[CohomologyGroup],
) -> Result<FiniteCategory> {
    let nobj = poset.pairs.len();
    let hom_labels: Vec<Vec<Vec<String>>> = (0..nobj)
        .map(|i| {
            (0..nobj)
                .map(|j| {
                    if poset.leq[i][j] {
                        (0..groups[j].order()).map(|c| format!("g{c}")).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect()
        })
        .collect();
    let hom_sizes: Vec<Vec<usize>> = (0..nobj)
        .map(|i| (0..nobj).map(|j| hom_labels[i][j].len()).collect())
        .collect();
    let mut compose = sized_compose(&hom_sizes);
    for i in 0..nobj {
        for j in 0..nobj {
            if !poset.leq[i][j] {
                continue;
            }
            for k in 0..nobj {
                if !poset.leq[j][k] || !poset.leq[i][k] {
                    continue;
                }
                let push = pushforward_map(&groups[j], &groups[k])?;
                let mut table = vec![vec![0usize; groups[k].order()]; groups[j].order()];
                for (f, row) in table.iter_mut().enumerate() {
                    for (g, cell) in row.iter_mut().enumerate() {
                        *cell = groups[k].add(g, push[f]);
                    }
                }
                compose[i][j][k] = table;
            }
        }
    }
    let identity: Vec<usize> = groups.iter().map(|g| g.zero).collect();
    let object_labels = (0..nobj).map(|i| format!("pair{i}")).collect();
    let category = FiniteCategory {
        object_labels,
        hom_labels,
        compose,
        identity,
    };
    if let Some(violation) = category.check_laws() {
        return Err(Error::ContextMismatch(format!(
            "grothendieck category laws fail: {violation}"
        )));
    }
    Ok(category)
}

/// The groupoid of invertible morphisms of a finite category, with
/// hom-sets re-indexed in their original order.
pub fn core_of(category: &FiniteCategory) -> FiniteCategory {
    let n = category.object_count();
    let mut keep: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            for f in 0..category.hom_size(i, j) {
                let invertible = (0..category.hom_size(j, i)).any(|g| {
                    category.compose[i][j][i][f][g] == category.identity[i]
                        && category.compose[j][i][j][g][f] == category.identity[j]
                });
                if invertible {
                    keep[i][j].push(f);
                }
            }
        }
    }
    let hom_labels: Vec<Vec<Vec<String>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    keep[i][j]
                        .iter()
                        .map(|&f| category.hom_labels[i][j][f].clone())
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut compose = vec![vec![vec![Vec::<Vec<usize>>::new(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut table = vec![vec![0usize; keep[j][k].len()]; keep[i][j].len()];
                for (fi, &f) in keep[i][j].iter().enumerate() {
                    for (gi, &g) in keep[j][k].iter().enumerate() {
                        let composite = category.compose[i][j][k][f][g];
                        let pos = keep[i][k]
                            .iter()
                            .position(|&x| x == composite)
                            .expect("composite of invertibles is invertible");
                        table[fi][gi] = pos;
                    }
                }
                compose[i][j][k] = table;
            }
        }
    }
    let identity: Vec<usize> = (0..n)
        .map(|i| {
            keep[i][i]
                .iter()
                .position(|&f| f == category.identity[i])
                .expect("identity is invertible")
        })
        .collect();
    FiniteCategory {
        object_labels: category.object_labels.clone(),
        hom_labels,
        compose,
        identity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::monoid::abelian_group_witness;

    fn proj_two_z2() -> CandidateAction {
        CandidateAction::new(
            fixtures::two(),
            fixtures::z(2),
            vec![vec![0, 1], vec![0, 0]],
        )
        .unwrap()
    }

    #[test]
    fn tilde_monoid_of_projection_is_a_two_element_semilattice() {
        let w = abelian_group_witness(&fixtures::z(2)).unwrap();
        let t = tilde_h2_monoid(&proj_two_z2(), &w).unwrap();
        assert_eq!(t.size(), 2);
        let m = t.as_monoid();
        assert!(m.elems().all(|x| m.mul(x, x) == x));
        assert!(check_inverse_monoid(&m));
    }

    #[test]
    fn tilde_monoid_of_identity_on_z2_is_h2() {
        let w = abelian_group_witness(&fixtures::z(2)).unwrap();
        let id = CandidateAction::identity_action(fixtures::z(2), fixtures::z(2));
        let t = tilde_h2_monoid(&id, &w).unwrap();
        assert_eq!(t.size(), 2);
        let m = t.as_monoid();
        assert!(crate::monoid::find_isomorphism(&m, &fixtures::z(2)).is_some());
        assert!(check_inverse_monoid(&m));
    }

    #[test]
    fn tilde_monoid_over_trivial_h_is_trivial() {
        let w = abelian_group_witness(&fixtures::z(3)).unwrap();
        let id = CandidateAction::identity_action(fixtures::trivial(), fixtures::z(3));
        let t = tilde_h2_monoid(&id, &w).unwrap();
        assert_eq!(t.size(), 1);
    }

    #[test]
    fn tilde_monoid_idempotents_are_the_zero_classes() {
        let w = abelian_group_witness(&fixtures::z(2)).unwrap();
        let id = CandidateAction::identity_action(fixtures::z(2), fixtures::z(2));
        for alpha in [proj_two_z2(), id] {
            let t = tilde_h2_monoid(&alpha, &w).unwrap();
            let m = t.as_monoid();
            for (i, &(r, c)) in t.elements.iter().enumerate() {
                let idempotent = m.mul(i, i) == i;
                assert_eq!(idempotent, c == t.groups[r].zero);
            }
        }
    }

    #[test]
    fn inverse_monoid_checks_on_catalog_fixtures() {
        assert!(check_inverse_monoid(&fixtures::z(4)));
        assert!(check_inverse_monoid(&fixtures::s3()));
        assert!(check_inverse_monoid(&fixtures::two()));
        assert!(!check_inverse_monoid(&fixtures::left_zero_plus_identity()));
    }

    #[test]
    fn valid_actions_over_two_z2() {
        let all = enumerate_valid_actions(&fixtures::two(), &fixtures::z(2), 1 << 20).unwrap();
        assert_eq!(all.len(), 4);
        for a in &all {
            assert_eq!(a.table[0], vec![0, 1]);
        }
    }

    #[test]
    fn valid_actions_over_z2_z2_is_only_the_identity() {
        let all = enumerate_valid_actions(&fixtures::z(2), &fixtures::z(2), 1 << 20).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(
            all[0],
            CandidateAction::identity_action(fixtures::z(2), fixtures::z(2))
        );
    }

    #[test]
    fn tilde_category_over_two_z2() {
        let w = abelian_group_witness(&fixtures::z(2)).unwrap();
        let cat = tilde_h2_category(&fixtures::two(), &fixtures::z(2), &w).unwrap();
        assert_eq!(cat.objects.len(), 4);
        assert!(cat.category.check_inverse_category());
        // Endo hom-sets match the tilde monoids object by object.
        for (i, obj) in cat.objects.iter().enumerate() {
            let t = tilde_h2_monoid(obj, &w).unwrap();
            assert_eq!(cat.category.hom_size(i, i), t.size());
        }
    }

    #[test]
    fn tilde_category_over_z2_z3_has_two_isolated_objects() {
        let w = abelian_group_witness(&fixtures::z(3)).unwrap();
        let cat = tilde_h2_category(&fixtures::z(2), &fixtures::z(3), &w).unwrap();
        // Identity and inversion actions; no shared relation makes them
        // equivalent, so the cross hom-sets are empty.
        assert_eq!(cat.objects.len(), 2);
        assert_eq!(cat.category.hom_size(0, 1), 0);
        assert_eq!(cat.category.hom_size(1, 0), 0);
        assert_eq!(cat.category.hom_size(0, 0), 1);
        assert_eq!(cat.category.hom_size(1, 1), 1);
    }

    #[test]
    fn oversized_valid_action_categories_are_refused() {
        let w = abelian_group_witness(&fixtures::z(4)).unwrap();
        // 256 valid actions over (two, z4): the explicit category would
        // need a quartic law scan, so the budget refuses it.
        let err = tilde_h2_category(&fixtures::two(), &fixtures::z(4), &w);
        assert!(matches!(err, Err(crate::error::Error::CapExceeded(_))));
    }

    #[test]
    fn hat_groupoid_orders_satisfy_the_ordered_groupoid_axioms() {
        for (h, n) in [
            (fixtures::two(), fixtures::z(2)),
            (fixtures::two(), fixtures::z(4)),
            (fixtures::z(2), fixtures::z(2)),
        ] {
            let w = abelian_group_witness(&n).unwrap();
            let hat = hat_h2_groupoid(&h, &n, &w).unwrap();
            let nobj = hat.poset.pairs.len();
            // Object order: partial order.
            for i in 0..nobj {
                assert!(hat.object_leq[i][i]);
                for j in 0..nobj {
                    if i != j && hat.object_leq[i][j] {
                        assert!(!hat.object_leq[j][i]);
                    }
                    for k in 0..nobj {
                        if hat.object_leq[i][j] && hat.object_leq[j][k] {
                            assert!(hat.object_leq[i][k]);
                        }
                    }
                }
            }
            // Morphism order: partial order, monotone under inverses and
            // composition (hom-sets are endo groups, so composable pairs
            // share their object).
            let nm = hat.morphism_index.len();
            for a in 0..nm {
                assert!(hat.morphism_leq[a][a]);
                let (i, c1) = hat.morphism_index[a];
                for b in 0..nm {
                    let (j, c2) = hat.morphism_index[b];
                    if a != b && hat.morphism_leq[a][b] {
                        assert!(!hat.morphism_leq[b][a]);
                    }
                    for c in 0..nm {
                        if hat.morphism_leq[a][b] && hat.morphism_leq[b][c] {
                            assert!(hat.morphism_leq[a][c]);
                        }
                    }
                    if !hat.morphism_leq[a][b] {
                        continue;
                    }
                    assert!(hat.object_leq[i][j]);
                    // Inverses stay ordered.
                    let na = hat
                        .morphism_index
                        .iter()
                        .position(|&(o, c)| o == i && c == hat.groups[i].neg(c1))
                        .unwrap();
                    let nb = hat
                        .morphism_index
                        .iter()
                        .position(|&(o, c)| o == j && c == hat.groups[j].neg(c2))
                        .unwrap();
                    assert!(hat.morphism_leq[na][nb]);
                    // Composition with a second ordered pair at the same
                    // endpoints stays ordered.
                    for d in 0..nm {
                        let (k, c3) = hat.morphism_index[d];
                        if k != i {
                            continue;
                        }
                        for e in 0..nm {
                            let (l, c4) = hat.morphism_index[e];
                            if l != j || !hat.morphism_leq[d][e] {
                                continue;
                            }
                            let left = hat
                                .morphism_index
                                .iter()
                                .position(|&(o, c)| o == i && c == hat.groups[i].add(c1, c3))
                                .unwrap();
                            let right = hat
                                .morphism_index
                                .iter()
                                .position(|&(o, c)| o == j && c == hat.groups[j].add(c2, c4))
                                .unwrap();
                            assert!(hat.morphism_leq[left][right]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tilde_category_over_trivial_h() {
        let w = abelian_group_witness(&fixtures::z(2)).unwrap();
        let cat = tilde_h2_category(&fixtures::trivial(), &fixtures::z(2), &w).unwrap();
        assert_eq!(cat.objects.len(), 1);
        assert_eq!(cat.category.hom_size(0, 0), 1);
    }

    #[test]
    fn hat_groupoid_over_two_z2_has_three_objects_and_two_strict_relations() {
        let w = abelian_group_witness(&fixtures::z(2)).unwrap();
        let hat = hat_h2_groupoid(&fixtures::two(), &fixtures::z(2), &w).unwrap();
        assert_eq!(hat.poset.pairs.len(), 3);
        assert!(hat.groups.iter().all(|g| g.order() == 1));
        let strict: usize = (0..3)
            .map(|i| (0..3).filter(|&j| i != j && hat.object_leq[i][j]).count())
            .sum();
        assert_eq!(strict, 2);
        // Object order axioms.
        for i in 0..3 {
            assert!(hat.object_leq[i][i]);
            for j in 0..3 {
                if i != j {
                    assert!(!(hat.object_leq[i][j] && hat.object_leq[j][i]));
                }
            }
        }
    }

    #[test]
    fn hat_groupoid_endo_group_over_z2_z2_is_z2() {
        let w = abelian_group_witness(&fixtures::z(2)).unwrap();
        let hat = hat_h2_groupoid(&fixtures::z(2), &fixtures::z(2), &w).unwrap();
        assert_eq!(hat.poset.pairs.len(), 1);
        assert_eq!(hat.groups[0].order(), 2);
    }

    #[test]
    fn hat_groupoid_is_the_core_of_the_grothendieck_construction() {
        let w = abelian_group_witness(&fixtures::z(2)).unwrap();
        for (h, n) in [
            (fixtures::two(), fixtures::z(2)),
            (fixtures::z(2), fixtures::z(2)),
        ] {
            let hat = hat_h2_groupoid(&h, &n, &w).unwrap();
            let total = grothendieck_of_pushforward(&hat.poset, &hat.groups).unwrap();
            let core = core_of(&total);
            assert_eq!(core, hat.category);
        }
    }
}
