//! Candidate actions of H on N, the six compatibility conditions, action
//! equivalence, validity via the coarse relation, and the poset WAct(H, N)
//! of compatible pairs.

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::indexed::{self, IndexedEqRel};
use crate::monoid::{Elem, FiniteMonoid};

/// A total table H x N -> N, rows indexed by H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateAction {
    pub h: FiniteMonoid,
    pub n: FiniteMonoid,
    pub table: Vec<Vec<Elem>>,
}

impl CandidateAction {
    pub fn new(h: FiniteMonoid, n: FiniteMonoid, table: Vec<Vec<Elem>>) -> Result<Self> {
        if table.len() != h.size() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows for |H| = {}",
                table.len(),
                h.size()
            )));
        }
        for row in &table {
            if row.len() != n.size() {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} for |N| = {}",
                    row.len(),
                    n.size()
                )));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n.size()) {
                return Err(Error::MalformedTable(format!(
                    "action value {v} out of range"
                )));
            }
        }
        Ok(CandidateAction { h, n, table })
    }

    /// The true action alpha(h, n) = n for every h.
    pub fn identity_action(h: FiniteMonoid, n: FiniteMonoid) -> Self {
        let table = vec![n.elems().collect::<Vec<_>>(); h.size()];
        CandidateAction { h, n, table }
    }

    #[inline]
    pub fn apply(&self, h: Elem, e: Elem) -> Elem {
        self.table[h][e]
    }

    /// Flattened table for deterministic ordering.
    pub fn encoding(&self) -> Vec<usize> {
        self.table.iter().flatten().copied().collect()
    }

    fn same_shape(&self, e: &IndexedEqRel) -> Result<()> {
        if self.h != e.h || self.n != e.n {
            return Err(Error::ShapeMismatch(
                "action and relation over different (H, N)".into(),
            ));
        }
        Ok(())
    }
}

/// First compatibility failure, in the numbered order of the definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompatibilityViolation {
    /// 1: n1 ~^h n2 but n1*a(h,x) !~^h n2*a(h,x).
    RightFactor {
        h: Elem,
        n1: Elem,
        n2: Elem,
        x: Elem,
    },
    /// 2: n1 ~^h n2 but a(x,n1) !~^{x*h} a(x,n2).
    IndexedImage {
        h: Elem,
        n1: Elem,
        n2: Elem,
        x: Elem,
    },
    /// 3: a(h, n1*n2) !~^h a(h,n1)*a(h,n2).
    Multiplicative { h: Elem, n1: Elem, n2: Elem },
    /// 4: a(h1*h2, n) !~^{h1*h2} a(h1, a(h2, n)).
    Composition { h1: Elem, h2: Elem, n: Elem },
    /// 5: a(h, 1) !~^h 1.
    UnitValue { h: Elem },
    /// 6: a(1, n) !~^1 n.
    IdentityRow { n: Elem },
}

/// Check the six conditions of a compatible action against `e`,
/// reporting the first failure in numbered order.
pub fn check_compatible(
    alpha: &CandidateAction,
    e: &IndexedEqRel,
) -> Result<Option<CompatibilityViolation>> {
    alpha.same_shape(e)?;
    let h_m = &alpha.h;
    let n_m = &alpha.n;

    // (1) right multiplication by an action value preserves classes.
    for h in h_m.elems() {
        for n1 in n_m.elems() {
            for n2 in n1 + 1..n_m.size() {
                if !e.related(h, n1, n2) {
                    continue;
                }
                for x in n_m.elems() {
                    let a = n_m.mul(n1, alpha.apply(h, x));
                    let b = n_m.mul(n2, alpha.apply(h, x));
                    if !e.related(h, a, b) {
                        return Ok(Some(CompatibilityViolation::RightFactor { h, n1, n2, x }));
                    }
                }
            }
        }
    }
    // (2) acting by x sends ~^h classes into ~^{x*h} classes.
    for h in h_m.elems() {
        for n1 in n_m.elems() {
            for n2 in n1 + 1..n_m.size() {
                if !e.related(h, n1, n2) {
                    continue;
                }
                for x in h_m.elems() {
                    let idx = h_m.mul(x, h);
                    if !e.related(idx, alpha.apply(x, n1), alpha.apply(x, n2)) {
                        return Ok(Some(CompatibilityViolation::IndexedImage { h, n1, n2, x }));
                    }
                }
            }
        }
    }
    // (3) multiplicative up to ~^h.
    for h in h_m.elems() {
        for n1 in n_m.elems() {
            for n2 in n_m.elems() {
                let lhs = alpha.apply(h, n_m.mul(n1, n2));
                let rhs = n_m.mul(alpha.apply(h, n1), alpha.apply(h, n2));
                if !e.related(h, lhs, rhs) {
                    return Ok(Some(CompatibilityViolation::Multiplicative { h, n1, n2 }));
                }
            }
        }
    }
    // (4) composition up to ~^{h1*h2}.
    for h1 in h_m.elems() {
        for h2 in h_m.elems() {
            let idx = h_m.mul(h1, h2);
            for n in n_m.elems() {
                let lhs = alpha.apply(idx, n);
                let rhs = alpha.apply(h1, alpha.apply(h2, n));
                if !e.related(idx, lhs, rhs) {
                    return Ok(Some(CompatibilityViolation::Composition { h1, h2, n }));
                }
            }
        }
    }
    // (5) unit of N is fixed up to ~^h.
    for h in h_m.elems() {
        if !e.related(h, alpha.apply(h, n_m.identity), n_m.identity) {
            return Ok(Some(CompatibilityViolation::UnitValue { h }));
        }
    }
    // (6) identity of H acts as the identity up to ~^1.
    for n in n_m.elems() {
        if !e.related(h_m.identity, alpha.apply(h_m.identity, n), n) {
            return Ok(Some(CompatibilityViolation::IdentityRow { n }));
        }
    }
    Ok(None)
}

/// Pointwise class equality of two action tables under `e`, with no
/// compatibility requirement. Internal building block.
pub(crate) fn tables_equivalent_under(
    e: &IndexedEqRel,
    a: &CandidateAction,
    b: &CandidateAction,
) -> bool {
    e.h.elems().all(|h| {
        e.n.elems()
            .all(|x| e.related(h, a.apply(h, x), b.apply(h, x)))
    })
}

/// Are two actions equivalent with respect to `e`? Both must be
/// compatible with `e`.
pub fn actions_equivalent(
    a: &CandidateAction,
    b: &CandidateAction,
    e: &IndexedEqRel,
) -> Result<bool> {
    for (name, alpha) in [("first", a), ("second", b)] {
        if check_compatible(alpha, e)?.is_some() {
            return Err(Error::NotCompatible(format!(
                "{name} action is not compatible"
            )));
        }
    }
    Ok(tables_equivalent_under(e, a, b))
}

/// Is the candidate action compatible with some admissible relation?
///
/// Decided through the coarse relation: valid iff the coarse relation is
/// admissible and the action is compatible with it. The witness relation
/// is returned either way.
pub fn is_valid(alpha: &CandidateAction) -> (bool, IndexedEqRel) {
    let coarse = indexed::coarse_equivalence(alpha);
    let ok = indexed::check_admissible(&coarse).is_none()
        && matches!(check_compatible(alpha, &coarse), Ok(None));
    (ok, coarse)
}

/// All actions compatible with `e`, in lexicographic table order.
///
/// The identity row is pinned to the identity map (condition 6 forces it,
/// since admissible relations are discrete at the identity index); the
/// remaining rows are filled by depth-first search. Per-row conditions
/// (1), (2), (3), (5) prune a row as soon as it is chosen, and every
/// instance of condition (4) is checked as soon as its three rows exist.
pub fn enumerate_compatible_actions(e: &IndexedEqRel) -> Result<Vec<CandidateAction>> {
    enumerate_compatible_actions_with_budget(e, Caps::default().enumeration_budget)
}

pub fn enumerate_compatible_actions_with_budget(
    e: &IndexedEqRel,
    budget: u64,
) -> Result<Vec<CandidateAction>> {
    if indexed::check_admissible(e).is_some() {
        return Err(Error::NotCompatible("relation is not admissible".into()));
    }
    let h_m = e.h.clone();
    let n_m = e.n.clone();
    let nn = n_m.size();

    let row_candidates_count = (nn as u64).checked_pow(nn as u32);
    match row_candidates_count {
        Some(c) if c <= budget => {}
        _ => {
            return Err(Error::CapExceeded(format!(
                "{nn}^{nn} candidate rows exceed budget {budget}"
            )))
        }
    }

    // All rows passing the single-row conditions at index h.
    let row_ok = |h: Elem, row: &[Elem]| -> bool {
        // (5) row fixes the unit of N up to ~^h.
        if !e.related(h, row[n_m.identity], n_m.identity) {
            return false;
        }
        // (3) multiplicative up to ~^h.
        for a in 0..nn {
            for b in 0..nn {
                if !e.related(h, row[n_m.mul(a, b)], n_m.mul(row[a], row[b])) {
                    return false;
                }
            }
        }
        // (1) right multiplication by row values preserves ~^h.
        for a in 0..nn {
            for b in a + 1..nn {
                if !e.related(h, a, b) {
                    continue;
                }
                for x in 0..nn {
                    if !e.related(h, n_m.mul(a, row[x]), n_m.mul(b, row[x])) {
                        return false;
                    }
                }
            }
        }
        // (2) with x = h: the row sends ~^{h'} classes into ~^{h*h'} classes.
        for hp in h_m.elems() {
            let idx = h_m.mul(h, hp);
            for a in 0..nn {
                for b in a + 1..nn {
                    if e.related(hp, a, b) && !e.related(idx, row[a], row[b]) {
                        return false;
                    }
                }
            }
        }
        true
    };

    let mut all_rows: Vec<Vec<Elem>> = Vec::new();
    {
        let mut row = vec![0usize; nn];
        loop {
            all_rows.push(row.clone());
            let mut i = nn;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                row[i] += 1;
                if row[i] < nn {
                    break;
                }
                row[i] = 0;
            }
            if row.iter().all(|&v| v == 0) {
                break;
            }
        }
    }

    let identity_row: Vec<Elem> = n_m.elems().collect();
    let mut per_index: Vec<Vec<Vec<Elem>>> = Vec::with_capacity(h_m.size());
    for h in h_m.elems() {
        if h == h_m.identity {
            per_index.push(vec![identity_row.clone()]);
        } else {
            per_index.push(all_rows.iter().filter(|r| row_ok(h, r)).cloned().collect());
        }
    }

    // (4) instances grouped by the latest row they mention, for the DFS.
    let order: Vec<Elem> = h_m.elems().collect();
    let slot_of: Vec<usize> = order.clone();
    let mut cond4_at: Vec<Vec<(Elem, Elem)>> = vec![Vec::new(); h_m.size()];
    for h1 in h_m.elems() {
        for h2 in h_m.elems() {
            let prod = h_m.mul(h1, h2);
            let latest = slot_of[h1].max(slot_of[h2]).max(slot_of[prod]);
            cond4_at[latest].push((h1, h2));
        }
    }

    struct Dfs<'a> {
        e: &'a IndexedEqRel,
        n_m: &'a FiniteMonoid,
        h_m: &'a FiniteMonoid,
        per_index: &'a [Vec<Vec<Elem>>],
        cond4_at: &'a [Vec<(Elem, Elem)>],
        rows: Vec<Vec<Elem>>,
        out: Vec<CandidateAction>,
        visited: u64,
        budget: u64,
    }

    impl Dfs<'_> {
        fn go(&mut self, slot: usize) -> Result<()> {
            if slot == self.per_index.len() {
                self.out.push(CandidateAction {
                    h: self.h_m.clone(),
                    n: self.n_m.clone(),
                    table: self.rows.clone(),
                });
                return Ok(());
            }
            for cand in &self.per_index[slot] {
                self.visited += 1;
                if self.visited > self.budget {
                    return Err(Error::CapExceeded(format!(
                        "action search exceeded budget {}",
                        self.budget
                    )));
                }
                self.rows[slot] = cand.clone();
                let ok = self.cond4_at[slot].iter().all(|&(h1, h2)| {
                    let prod = self.h_m.mul(h1, h2);
                    self.n_m.elems().all(|n| {
                        let lhs = self.rows[prod][n];
                        let rhs = self.rows[h1][self.rows[h2][n]];
                        self.e.related(prod, lhs, rhs)
                    })
                });
                if ok {
                    self.go(slot + 1)?;
                }
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        e,
        n_m: &n_m,
        h_m: &h_m,
        per_index: &per_index,
        cond4_at: &cond4_at,
        rows: vec![Vec::new(); h_m.size()],
        out: Vec::new(),
        visited: 0,
        budget,
    };
    dfs.go(0)?;
    let mut out = dfs.out;
    out.sort_by_key(|a| a.encoding());
    Ok(out)
}

/// A compatible pair (E, phi): the relation together with the canonical
/// representative of the action class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatiblePair {
    pub relation: IndexedEqRel,
    pub action: CandidateAction,
}

impl CompatiblePair {
    pub fn new(relation: IndexedEqRel, action: CandidateAction) -> Result<Self> {
        if indexed::check_admissible(&relation).is_some() {
            return Err(Error::IncompatiblePair("relation is not admissible".into()));
        }
        if check_compatible(&action, &relation)?.is_some() {
            return Err(Error::IncompatiblePair(
                "action fails the compatibility conditions".into(),
            ));
        }
        Ok(CompatiblePair { relation, action })
    }

    /// Order of WAct: `(E, [phi]) <= (E', [phi'])` iff E refines E' and the
    /// actions agree pointwise up to ~ of E'.
    pub fn leq(&self, other: &CompatiblePair) -> Result<bool> {
        Ok(indexed::refines(&self.relation, &other.relation)?
            && tables_equivalent_under(&other.relation, &self.action, &other.action))
    }
}

/// The poset WAct(H, N): compatible pairs up to action equivalence.
#[derive(Debug, Clone)]
pub struct WActPoset {
    pub pairs: Vec<CompatiblePair>,
    /// `leq[i][j]` iff pair i <= pair j.
    pub leq: Vec<Vec<bool>>,
}

impl WActPoset {
    /// Index of the pair with this relation whose action class contains
    /// `action`.
    pub fn index_of(&self, relation: &IndexedEqRel, action: &CandidateAction) -> Option<usize> {
        self.pairs.iter().position(|p| {
            p.relation == *relation && tables_equivalent_under(relation, &p.action, action)
        })
    }
}

/// Build WAct(H, N): enumerate admissible relations, the actions
/// compatible with each, quotient actions by equivalence keeping the
/// lexicographically least table, and order the resulting pairs.
pub fn wact_poset(h: &FiniteMonoid, n: &FiniteMonoid) -> Result<WActPoset> {
    wact_poset_with_budget(h, n, Caps::default().enumeration_budget)
}

pub fn wact_poset_with_budget(
    h: &FiniteMonoid,
    n: &FiniteMonoid,
    budget: u64,
) -> Result<WActPoset> {
    let relations = indexed::enumerate_admissible_with_budget(h, n, budget)?;
    let mut pairs = Vec::new();
    for e in &relations {
        let actions = enumerate_compatible_actions_with_budget(e, budget)?;
        // Group by the pointwise class table; enumeration order is
        // lexicographic, so the first member of each group is the
        // canonical representative.
        let mut seen: Vec<(Vec<Elem>, usize)> = Vec::new();
        for alpha in &actions {
            let class_table: Vec<Elem> =
                e.h.elems()
                    .flat_map(|hh| {
                        e.n.elems()
                            .map(move |x| e.class_min(hh, alpha.apply(hh, x)))
                    })
                    .collect();
            if !seen.iter().any(|(t, _)| *t == class_table) {
                seen.push((class_table, pairs.len()));
                pairs.push(CompatiblePair {
                    relation: e.clone(),
                    action: alpha.clone(),
                });
            }
        }
    }
    let mut leq = vec![vec![false; pairs.len()]; pairs.len()];
    for (i, a) in pairs.iter().enumerate() {
        for (j, b) in pairs.iter().enumerate() {
            leq[i][j] = a.leq(b)?;
        }
    }
    Ok(WActPoset { pairs, leq })
}

/// The lattice of relations compatible with a valid action, ordered by
/// refinement, with its bottom (finest) and top (the coarse relation).
#[derive(Debug, Clone)]
pub struct CompatibleRelationLattice {
    pub relations: Vec<IndexedEqRel>,
    pub leq: Vec<Vec<bool>>,
    pub bottom: usize,
    pub top: usize,
}

/// All admissible relations compatible with `alpha`, with the refinement
/// order. Fails with `InvalidAction` when the action is not valid.
pub fn enumerate_compatible_relations(
    alpha: &CandidateAction,
) -> Result<CompatibleRelationLattice> {
    let (valid, coarse) = is_valid(alpha);
    if !valid {
        return Err(Error::InvalidAction(
            "not compatible with its coarse relation".into(),
        ));
    }
    let relations: Vec<IndexedEqRel> = indexed::enumerate_admissible(&alpha.h, &alpha.n)?
        .into_iter()
        .filter(|e| matches!(check_compatible(alpha, e), Ok(None)))
        .collect();
    let mut leq = vec![vec![false; relations.len()]; relations.len()];
    for (i, a) in relations.iter().enumerate() {
        for (j, b) in relations.iter().enumerate() {
            leq[i][j] = indexed::refines(a, b)?;
        }
    }
    let top = relations.iter().position(|e| *e == coarse).ok_or_else(|| {
        Error::InvalidAction("coarse relation missing from the compatible set".into())
    })?;
    let bottom = (0..relations.len())
        .find(|&i| (0..relations.len()).all(|j| leq[i][j]))
        .expect("meet of all compatible relations is compatible");
    Ok(CompatibleRelationLattice {
        relations,
        leq,
        bottom,
        top,
    })
}
