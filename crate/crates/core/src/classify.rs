//! The end-to-end classification pipeline: WAct, cohomology and Z^1
//! groups, the extension census with its hom-set matrix, the inverse
//! monoids and categories, the oracle cross-checks, and the theorem-check
//! ledger. Output is a deterministic JSON report.

use serde::Serialize;

use crate::action::{self, wact_poset_with_budget, CandidateAction};
use crate::caps::Caps;
use crate::cohomology::{cohomology_group_with_budget, pushforward_map, CohomologyGroup};
use crate::error::{Error, Result};
use crate::extension::{check_short_five, hom_set, reconstruct, z1_group_with_budget};
use crate::indexed;
use crate::monoid::{abelian_group_witness, find_isomorphism, FiniteMonoid};
use crate::oracle::{oracle_enumerate_cosetal_extensions, OracleExtensionClass};
use crate::product::{
    check_cosetal, check_special_schreier, check_weakly_schreier, induced_split_extension,
};
use crate::structures::{
    check_inverse_monoid, core_of, grothendieck_of_pushforward, hat_h2_groupoid_with_budget,
    tilde_h2_monoid_with_budget,
};

pub const REPORT_SCHEMA: &str = "cosetal-kit/1";

#[derive(Debug, Clone, Serialize)]
pub struct MonoidDescriptor {
    pub name: String,
    pub size: usize,
    pub is_group: bool,
    pub is_abelian: bool,
}

impl MonoidDescriptor {
    fn of(m: &FiniteMonoid) -> Self {
        MonoidDescriptor {
            name: m.name.clone(),
            size: m.size(),
            is_group: m.is_group(),
            is_abelian: m.is_commutative(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    /// Partition arrays per index of H.
    pub relation: Vec<Vec<usize>>,
    /// Canonical representative action table.
    pub action: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WActReport {
    pub pairs: Vec<PairReport>,
    pub leq: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    /// Index of the WAct pair this group belongs to.
    pub pair_index: usize,
    pub order: usize,
    pub addition: Vec<Vec<usize>>,
    pub zero: usize,
    pub representatives: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionClassReport {
    pub pair_index: usize,
    pub cohomology_class: usize,
    pub monoid_size: usize,
    pub monoid_table: Vec<Vec<usize>>,
    pub cosetal: bool,
    pub special_schreier: bool,
    pub oracle_bucket_size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TildeMonoidReport {
    pub action: Vec<Vec<usize>>,
    pub size: usize,
    pub operation: Vec<Vec<usize>>,
    pub zero: usize,
    /// Element indices of the idempotents; together with `operation`
    /// restricted to them this is the semilattice of zero classes.
    pub idempotents: Vec<usize>,
    pub inverse_monoid: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HatGroupoidReport {
    pub object_count: usize,
    pub endo_group_orders: Vec<usize>,
    pub object_leq: Vec<Vec<bool>>,
    pub strict_object_relations: usize,
    /// Flattened morphisms as (object, class) pairs, with their order.
    pub morphisms: Vec<(usize, usize)>,
    pub morphism_leq: Vec<Vec<bool>>,
    pub core_agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    /// Raw factor-set survivor count per WAct pair.
    pub raw_factor_sets_per_pair: Vec<usize>,
    /// Extension iso-class count per WAct pair.
    pub classes_per_pair: Vec<usize>,
    pub total_classes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerEntry {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub schema: String,
    pub h: MonoidDescriptor,
    pub n: MonoidDescriptor,
    pub wact: WActReport,
    pub cohomology: Vec<GroupReport>,
    pub z1: Vec<GroupReport>,
    pub extensions: Vec<ExtensionClassReport>,
    /// `hom_matrix[i][j]` = |Hom(ext_i, ext_j)| over the census classes.
    pub hom_matrix: Vec<Vec<usize>>,
    pub tilde_monoids: Vec<TildeMonoidReport>,
    pub hat_groupoid: HatGroupoidReport,
    pub oracle: OracleReport,
    pub ledger: Vec<LedgerEntry>,
}

impl ClassificationReport {
    pub fn all_checks_pass(&self) -> bool {
        self.ledger.iter().all(|entry| entry.pass)
    }

    /// Canonical serialization: stable field order, two-space indent.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

fn group_report(pair_index: usize, group: &CohomologyGroup) -> GroupReport {
    GroupReport {
        pair_index,
        order: group.order(),
        addition: group.addition.clone(),
        zero: group.zero,
        representatives: group.classes.clone(),
    }
}

/// Classify every cosetal extension of H by the abelian group N and
/// cross-check the pipeline against the brute-force census.
pub fn classify(h: &FiniteMonoid, n: &FiniteMonoid, caps: &Caps) -> Result<ClassificationReport> {
    if h.size() > caps.classify_size || n.size() > caps.classify_size {
        return Err(Error::CapExceeded(format!(
            "classification is capped at size {} (got |H| = {}, |N| = {})",
            caps.classify_size,
            h.size(),
            n.size()
        )));
    }
    let witness = abelian_group_witness(n)?;
    let budget = caps.enumeration_budget;
    let mut ledger: Vec<LedgerEntry> = Vec::new();
    let mut check = |name: &str, pass: bool, detail: String| {
        ledger.push(LedgerEntry {
            check: name.into(),
            pass,
            detail,
        });
    };

    // WAct and the per-pair groups.
    let poset = wact_poset_with_budget(h, n, budget)?;
    let mut cohomology_groups = Vec::with_capacity(poset.pairs.len());
    let mut z1_groups = Vec::with_capacity(poset.pairs.len());
    for pair in &poset.pairs {
        cohomology_groups.push(cohomology_group_with_budget(pair, &witness, budget)?);
        z1_groups.push(z1_group_with_budget(pair, &witness, budget)?);
    }

    // Induced split extensions: weakly Schreier always, cosetal iff the
    // kernel is a group (true here), special Schreier iff Schreier.
    let mut ws_ok = true;
    let mut cosetal_ok = true;
    for pair in &poset.pairs {
        let (_, split) = induced_split_extension(pair)?;
        ws_ok &= check_weakly_schreier(&split)?;
        cosetal_ok &= check_cosetal(&split.ext)? == n.is_group();
    }
    check(
        "weakly-schreier",
        ws_ok,
        "every induced split extension".into(),
    );
    check(
        "cosetal-iff-group-kernel",
        cosetal_ok,
        format!("kernel {} is a group: {}", n.name, n.is_group()),
    );

    // Coarse-relation maximality over every valid action of the census.
    let mut coarse_ok = true;
    for pair in &poset.pairs {
        let (valid, coarse) = action::is_valid(&pair.action);
        coarse_ok &= valid;
        coarse_ok &= indexed::refines(&pair.relation, &coarse)?;
        coarse_ok &= matches!(action::check_compatible(&pair.action, &coarse), Ok(None));
    }
    check(
        "coarse-relation-maximality",
        coarse_ok,
        "E <= E_alpha for every pair".into(),
    );

    // The census, with invariant agreement per bucket.
    let census = oracle_enumerate_cosetal_extensions(h, n, &witness, caps)?;
    let mut per_pair_classes = vec![0usize; poset.pairs.len()];
    for class in &census {
        per_pair_classes[class.pair_index] += 1;
    }
    let mut raw_per_pair = vec![0usize; poset.pairs.len()];
    for class in &census {
        raw_per_pair[class.pair_index] += class.bucket_size;
    }
    let counts_ok = per_pair_classes
        .iter()
        .zip(&cohomology_groups)
        .all(|(&c, g)| c == g.order());
    check(
        "oracle-counts",
        counts_ok,
        format!("census classes per pair {per_pair_classes:?}"),
    );

    // Reconstruction round-trips every representative.
    let mut recon_ok = true;
    for class in &census {
        let (wsd, _) = reconstruct(&class.representative, &witness)?;
        recon_ok &= find_isomorphism(&wsd.monoid, &class.representative.g).is_some();
    }
    check(
        "reconstruction",
        recon_ok,
        "twisted product of invariants is isomorphic".into(),
    );

    // Hom matrix with the morphism-existence theorem and End = Z1.
    let mut hom_matrix = vec![vec![0usize; census.len()]; census.len()];
    let mut existence_ok = true;
    let mut short_five_ok = true;
    let mut end_z1_ok = true;
    for (i, a) in census.iter().enumerate() {
        for (j, b) in census.iter().enumerate() {
            let morphisms = hom_set(&a.representative, &b.representative, &witness)?;
            hom_matrix[i][j] = morphisms.len();
            let leq = a.invariants.pair.leq(&b.invariants.pair)?;
            let classes_agree = leq
                && crate::cohomology::factor_sets_equivalent(
                    &a.invariants.factor_set,
                    &b.invariants.factor_set,
                    &b.invariants.pair,
                    &witness,
                )?;
            existence_ok &= morphisms.is_empty() != classes_agree;
            if classes_agree {
                let codomain_z1 = z1_group_with_budget(&b.invariants.pair, &witness, budget)?;
                existence_ok &= morphisms.len() == codomain_z1.order();
            }
            if i == j {
                end_z1_ok &= morphisms.len() == {
                    let z1 = z1_group_with_budget(&a.invariants.pair, &witness, budget)?;
                    z1.order()
                };
                for m in &morphisms {
                    short_five_ok &=
                        check_short_five(&m.map, &a.representative, &b.representative, &witness)?;
                }
            }
        }
    }
    check(
        "morphism-existence-iff",
        existence_ok,
        "hom nonempty iff invariants ordered".into(),
    );
    check(
        "short-five",
        short_five_ok,
        "every shared-invariant morphism inverts".into(),
    );
    check(
        "end-iso-z1",
        end_z1_ok,
        "endomorphism counts match Z1 orders".into(),
    );

    // Tilde monoids for the distinct canonical actions of WAct.
    let mut tilde_actions: Vec<CandidateAction> = Vec::new();
    for pair in &poset.pairs {
        if !tilde_actions.contains(&pair.action) {
            tilde_actions.push(pair.action.clone());
        }
    }
    tilde_actions.sort_by_key(|a| a.encoding());
    let mut tilde_reports = Vec::new();
    let mut inverse_ok = true;
    for alpha in &tilde_actions {
        let t = tilde_h2_monoid_with_budget(alpha, &witness, budget)?;
        let m = t.as_monoid();
        let inv = check_inverse_monoid(&m);
        inverse_ok &= inv;
        // The designated inverse must be the unique generalized one.
        for (i, &j) in t.inverse.iter().enumerate() {
            let gen: Vec<usize> = m
                .elems()
                .filter(|&y| m.mul(m.mul(i, y), i) == i && m.mul(m.mul(y, i), y) == y)
                .collect();
            inverse_ok &= gen == vec![j];
        }
        tilde_reports.push(TildeMonoidReport {
            action: alpha.table.clone(),
            size: t.size(),
            operation: t.operation.clone(),
            zero: t.zero,
            idempotents: m.elems().filter(|&x| m.mul(x, x) == x).collect(),
            inverse_monoid: inv,
        });
    }
    check(
        "inverse-monoid",
        inverse_ok,
        "tilde monoids with designated inverses".into(),
    );

    // Pushforward functoriality along every comparable chain of pairs.
    let mut functorial_ok = true;
    for (i, gi) in cohomology_groups.iter().enumerate() {
        let id_map = pushforward_map(gi, gi)?;
        functorial_ok &= id_map == (0..gi.order()).collect::<Vec<_>>();
        for (j, gj) in cohomology_groups.iter().enumerate() {
            if !poset.leq[i][j] {
                continue;
            }
            let ij = pushforward_map(gi, gj)?;
            for (k, gk) in cohomology_groups.iter().enumerate() {
                if !poset.leq[j][k] {
                    continue;
                }
                let jk = pushforward_map(gj, gk)?;
                let ik = pushforward_map(gi, gk)?;
                let composed: Vec<usize> = ij.iter().map(|&c| jk[c]).collect();
                functorial_ok &= composed == ik;
            }
        }
    }
    check(
        "l-functoriality",
        functorial_ok,
        "l composes along WAct chains".into(),
    );

    // The ordered groupoid of compatible pairs, against the core of the
    // Grothendieck construction.
    let hat = hat_h2_groupoid_with_budget(h, n, &witness, budget)?;
    let total = grothendieck_of_pushforward(&hat.poset, &hat.groups)?;
    let core = core_of(&total);
    let core_agrees = core == hat.category;
    check(
        "core-of-grothendieck",
        core_agrees,
        "hat groupoid equals the core".into(),
    );

    let strict_object_relations = (0..hat.poset.pairs.len())
        .map(|i| {
            (0..hat.poset.pairs.len())
                .filter(|&j| i != j && hat.object_leq[i][j])
                .count()
        })
        .sum();

    let mut extension_reports = Vec::with_capacity(census.len());
    for class in &census {
        extension_reports.push(extension_class_report(class, &cohomology_groups, &poset)?);
    }

    let report = ClassificationReport {
        schema: REPORT_SCHEMA.into(),
        h: MonoidDescriptor::of(h),
        n: MonoidDescriptor::of(n),
        wact: WActReport {
            pairs: poset
                .pairs
                .iter()
                .map(|p| PairReport {
                    relation: p.relation.partitions.clone(),
                    action: p.action.table.clone(),
                })
                .collect(),
            leq: poset.leq.clone(),
        },
        cohomology: cohomology_groups
            .iter()
            .enumerate()
            .map(|(i, g)| group_report(i, g))
            .collect(),
        z1: z1_groups
            .iter()
            .enumerate()
            .map(|(i, z)| GroupReport {
                pair_index: i,
                order: z.order(),
                addition: z.addition.clone(),
                zero: z.zero,
                representatives: z.classes.iter().map(|t| vec![t.clone()]).collect(),
            })
            .collect(),
        extensions: extension_reports,
        hom_matrix,
        tilde_monoids: tilde_reports,
        hat_groupoid: HatGroupoidReport {
            object_count: hat.poset.pairs.len(),
            endo_group_orders: hat.groups.iter().map(|g| g.order()).collect(),
            object_leq: hat.object_leq.clone(),
            strict_object_relations,
            morphisms: hat.morphism_index.clone(),
            morphism_leq: hat.morphism_leq.clone(),
            core_agrees,
        },
        oracle: OracleReport {
            raw_factor_sets_per_pair: raw_per_pair,
            classes_per_pair: per_pair_classes,
            total_classes: census.len(),
        },
        ledger,
    };
    Ok(report)
}

fn extension_class_report(
    class: &OracleExtensionClass,
    groups: &[CohomologyGroup],
    poset: &action::WActPoset,
) -> Result<ExtensionClassReport> {
    let pair_index = poset
        .index_of(
            &class.invariants.pair.relation,
            &class.invariants.pair.action,
        )
        .ok_or_else(|| Error::ContextMismatch("census pair missing from WAct".into()))?;
    let cohomology_class = groups[pair_index].class_of(&class.invariants.factor_set)?;
    Ok(ExtensionClassReport {
        pair_index,
        cohomology_class,
        monoid_size: class.representative.g.size(),
        monoid_table: class.representative.g.table.clone(),
        cosetal: check_cosetal(&class.representative)?,
        special_schreier: check_special_schreier(&class.representative)?,
        oracle_bucket_size: class.bucket_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn classify_two_z2_matches_the_worked_example() {
        let report = classify(&fixtures::two(), &fixtures::z(2), &Caps::default()).unwrap();
        assert!(report.all_checks_pass());
        assert_eq!(report.wact.pairs.len(), 3);
        assert!(report.cohomology.iter().all(|g| g.order == 1));
        assert_eq!(report.oracle.total_classes, 3);
        // M3 appears as the 3-element class: cosetal, not special Schreier.
        let m3 = report
            .extensions
            .iter()
            .find(|e| e.monoid_size == 3)
            .unwrap();
        assert!(m3.cosetal && !m3.special_schreier);
    }

    #[test]
    fn classify_z2_z2_finds_the_order_two_group() {
        let report = classify(&fixtures::z(2), &fixtures::z(2), &Caps::default()).unwrap();
        assert!(report.all_checks_pass());
        assert_eq!(report.wact.pairs.len(), 1);
        assert_eq!(report.cohomology[0].order, 2);
        assert_eq!(report.oracle.total_classes, 2);
    }

    #[test]
    fn classify_trivial_h_is_a_degenerate_singleton() {
        let report = classify(&fixtures::trivial(), &fixtures::z(3), &Caps::default()).unwrap();
        assert!(report.all_checks_pass());
        assert_eq!(report.wact.pairs.len(), 1);
        assert_eq!(report.oracle.total_classes, 1);
    }

    #[test]
    fn classify_m3_z2_finds_the_twisted_absorbing_extension() {
        let report = classify(&fixtures::m3(), &fixtures::z(2), &Caps::default()).unwrap();
        assert!(report.all_checks_pass());
        assert_eq!(report.wact.pairs.len(), 3);
        // The coarse pair carries a nontrivial group: delta-t(1,1) = 2t(1)
        // vanishes over z2, so g(1,1) = 1 is not inner.
        let orders: Vec<usize> = report.cohomology.iter().map(|g| g.order).collect();
        assert_eq!(orders, vec![2, 1, 1]);
        assert_eq!(report.oracle.total_classes, 4);
        // Both five-element coarse extensions fail witness uniqueness.
        for ext in report.extensions.iter().filter(|e| e.monoid_size == 5) {
            assert!(ext.cosetal && !ext.special_schreier);
        }
        // The twisted coarse class (index 1) receives morphisms only
        // from itself: pushforwards of the trivial fine classes miss it.
        for i in [0, 2, 3] {
            assert_eq!(report.hom_matrix[i][1], 0);
        }
        assert_eq!(report.hom_matrix[1][1], 2);
    }

    #[test]
    fn classify_left_zero_base_has_five_classes() {
        let report = classify(
            &fixtures::left_zero_plus_identity(),
            &fixtures::z(2),
            &Caps::default(),
        )
        .unwrap();
        assert!(report.all_checks_pass());
        assert_eq!(report.wact.pairs.len(), 5);
        assert_eq!(report.oracle.total_classes, 5);
        assert!(report.cohomology.iter().all(|g| g.order == 1));
    }

    #[test]
    fn classify_refuses_non_group_kernels_and_oversize_inputs() {
        assert!(matches!(
            classify(&fixtures::z(2), &fixtures::two(), &Caps::default()),
            Err(Error::NotAGroup { .. })
        ));
        assert!(matches!(
            classify(&fixtures::s3(), &fixtures::z(2), &Caps::default()),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn classification_report_is_deterministic() {
        let a = classify(&fixtures::two(), &fixtures::z(2), &Caps::default())
            .unwrap()
            .to_json();
        let b = classify(&fixtures::two(), &fixtures::z(2), &Caps::default())
            .unwrap()
            .to_json();
        assert_eq!(a, b);
    }
}
