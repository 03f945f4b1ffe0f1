//! Weak semidirect products, their factor-set twists, the split
//! extensions they induce, and the weakly Schreier / cosetal / special
//! Schreier predicates.

use crate::action::CompatiblePair;
use crate::cohomology;
use crate::error::{Error, Result};
use crate::extension::{check_extension, ExtensionPresentation};
use crate::monoid::{AbelianGroupWitness, Elem, FiniteMonoid, MonoidMap};

/// A monoid on the disjoint union of the quotients N/~^h, realized as a
/// multiplication table over (class representative, h) pairs.
#[derive(Debug, Clone)]
pub struct WSDMonoid {
    pub pair: CompatiblePair,
    /// Factor-set table when the product is twisted, `None` otherwise.
    pub twist: Option<Vec<Vec<Elem>>>,
    /// Carrier in construction order: (least class member, h).
    pub carrier: Vec<(Elem, Elem)>,
    pub monoid: FiniteMonoid,
}

impl WSDMonoid {
    /// Index of `([n], h)` in the carrier.
    pub fn index_of(&self, n: Elem, h: Elem) -> Elem {
        let rep = self.pair.relation.class_min(h, n);
        self.carrier
            .iter()
            .position(|&(r, hh)| r == rep && hh == h)
            .expect("carrier covers every class")
    }
}

fn build_wsd(pair: &CompatiblePair, twist: Option<&[Vec<Elem>]>) -> Result<WSDMonoid> {
    let e = &pair.relation;
    let h_m = &e.h;
    let n_m = &e.n;
    let mut carrier = Vec::new();
    for h in h_m.elems() {
        for rep in e.class_reps(h) {
            carrier.push((rep, h));
        }
    }
    let pos = |n: Elem, h: Elem| -> Elem {
        let rep = e.class_min(h, n);
        carrier
            .iter()
            .position(|&(r, hh)| r == rep && hh == h)
            .expect("carrier")
    };

    // Raw product of representatives; checked below to be independent of
    // the representative choice.
    let cell = |a: Elem, ha: Elem, b: Elem, hb: Elem| -> (Elem, Elem) {
        let mut v = n_m.mul(a, pair.action.apply(ha, b));
        if let Some(g) = twist {
            v = n_m.mul(v, g[ha][hb]);
        }
        (v, h_m.mul(ha, hb))
    };

    let size = carrier.len();
    let mut table = vec![vec![0usize; size]; size];
    for (i, &(a, ha)) in carrier.iter().enumerate() {
        for (j, &(b, hb)) in carrier.iter().enumerate() {
            let (v, hh) = cell(a, ha, b, hb);
            table[i][j] = pos(v, hh);
            // The landing class must not depend on which members of the
            // two classes we multiply.
            for &a2 in &e.class_members(ha, a) {
                for &b2 in &e.class_members(hb, b) {
                    let (v2, hh2) = cell(a2, ha, b2, hb);
                    if hh2 != hh || !e.related(hh, v, v2) {
                        return Err(Error::IncompatiblePair(format!(
                            "product of classes at ({ha},{hb}) depends on representatives"
                        )));
                    }
                }
            }
        }
    }

    let labels = carrier
        .iter()
        .map(|&(r, h)| format!("([{}],{})", n_m.label(r), h_m.label(h)))
        .collect();
    let name = match twist {
        None => format!("wsd({},{})", n_m.name, h_m.name),
        Some(_) => format!("twp({},{})", n_m.name, h_m.name),
    };
    let identity = pos(n_m.identity, h_m.identity);
    let monoid = FiniteMonoid::with_cap(name, labels, identity, table, usize::MAX)
        .map_err(|err| Error::IncompatiblePair(format!("product table is not a monoid: {err}")))?;
    Ok(WSDMonoid {
        pair: pair.clone(),
        twist: twist.map(|g| g.to_vec()),
        carrier,
        monoid,
    })
}

/// The weak semidirect product of a compatible pair. N may be any monoid.
pub fn weak_semidirect(pair: &CompatiblePair) -> Result<WSDMonoid> {
    build_wsd(pair, None)
}

/// The twisted product for a factor set `g` over an abelian group kernel.
/// With the constant-identity factor set this coincides with
/// [`weak_semidirect`] table for table.
pub fn twisted_product(
    witness: &AbelianGroupWitness,
    pair: &CompatiblePair,
    g: &[Vec<Elem>],
) -> Result<WSDMonoid> {
    if witness.monoid != pair.relation.n {
        return Err(Error::KernelNotAbelianGroup(
            "witness is for a different kernel".into(),
        ));
    }
    if let Some(violation) = cohomology::check_factor_set(g, pair)? {
        return Err(Error::NotFactorSet(violation.to_string()));
    }
    build_wsd(pair, Some(g))
}

/// A split extension: an extension together with a homomorphic section.
#[derive(Debug, Clone)]
pub struct SplitExtension {
    pub ext: ExtensionPresentation,
    pub section: MonoidMap,
}

impl SplitExtension {
    /// Validate the splitting data: the section must be a homomorphism
    /// H -> G with e after s the identity, over a genuine extension.
    pub fn new(ext: ExtensionPresentation, section: MonoidMap) -> Result<Self> {
        if section.domain != ext.h || section.codomain != ext.g {
            return Err(Error::NotSplitExtension(
                "section has the wrong shape".into(),
            ));
        }
        if !crate::monoid::check_homomorphism(&section) {
            return Err(Error::NotSplitExtension(
                "section is not a homomorphism".into(),
            ));
        }
        for h in ext.h.elems() {
            if ext.projection.apply(section.apply(h)) != h {
                return Err(Error::NotSplitExtension(format!("e(s({h})) != {h}")));
            }
        }
        if !check_extension(&ext)? {
            return Err(Error::NotSplitExtension(
                "underlying diagram is not an extension".into(),
            ));
        }
        Ok(SplitExtension { ext, section })
    }
}

/// The split extension induced by a compatible pair:
/// `k(n) = ([n], 1)`, `e([n], h) = h`, `s(h) = ([1], h)`.
pub fn induced_split_extension(pair: &CompatiblePair) -> Result<(WSDMonoid, SplitExtension)> {
    let wsd = weak_semidirect(pair)?;
    let n_m = pair.relation.n.clone();
    let h_m = pair.relation.h.clone();
    let g_m = wsd.monoid.clone();

    let k_image: Vec<Elem> = n_m.elems().map(|n| wsd.index_of(n, h_m.identity)).collect();
    let e_image: Vec<Elem> = wsd.carrier.iter().map(|&(_, h)| h).collect();
    let s_image: Vec<Elem> = h_m.elems().map(|h| wsd.index_of(n_m.identity, h)).collect();

    let k = MonoidMap::new(n_m.clone(), g_m.clone(), k_image)?;
    let e = MonoidMap::new(g_m.clone(), h_m.clone(), e_image)?;
    let s = MonoidMap::new(h_m, g_m, s_image)?;
    let ext = ExtensionPresentation::new(k, e)?;
    let split = SplitExtension::new(ext, s)?;
    Ok((wsd, split))
}

/// Does every g factor as k(n) * s(e(g)) for some n?
pub fn check_weakly_schreier(se: &SplitExtension) -> Result<bool> {
    let ext = &se.ext;
    let g_m = &ext.g;
    Ok(g_m.elems().all(|g| {
        let tail = se.section.apply(ext.projection.apply(g));
        ext.n
            .elems()
            .any(|n| g_m.mul(ext.kernel_map.apply(n), tail) == g)
    }))
}

/// Is the extension (right) cosetal: whenever e(g) = e(g'), some n has
/// g = k(n) * g'?
pub fn check_cosetal(ext: &ExtensionPresentation) -> Result<bool> {
    if !check_extension(ext)? {
        return Err(Error::NotExtension(
            "cosetal check needs an extension".into(),
        ));
    }
    Ok(cosetal_witness_failure(ext).is_none())
}

/// First fibre pair with no coset witness, if any. Assumes the diagram
/// was already validated.
pub(crate) fn cosetal_witness_failure(ext: &ExtensionPresentation) -> Option<(Elem, Elem)> {
    let g_m = &ext.g;
    for g in g_m.elems() {
        for g2 in g_m.elems() {
            if ext.projection.apply(g) != ext.projection.apply(g2) {
                continue;
            }
            let hit = ext
                .n
                .elems()
                .any(|n| g_m.mul(ext.kernel_map.apply(n), g2) == g);
            if !hit {
                return Some((g, g2));
            }
        }
    }
    None
}

/// Is the extension special Schreier: the coset witness exists and is
/// unique for every fibre pair?
pub fn check_special_schreier(ext: &ExtensionPresentation) -> Result<bool> {
    if !check_extension(ext)? {
        return Err(Error::NotExtension(
            "special Schreier check needs an extension".into(),
        ));
    }
    let g_m = &ext.g;
    for g in g_m.elems() {
        for g2 in g_m.elems() {
            if ext.projection.apply(g) != ext.projection.apply(g2) {
                continue;
            }
            let witnesses = ext
                .n
                .elems()
                .filter(|&n| g_m.mul(ext.kernel_map.apply(n), g2) == g)
                .count();
            if witnesses != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::CandidateAction;
    use crate::fixtures;
    use crate::indexed;
    use crate::monoid::{abelian_group_witness, find_isomorphism};

    fn pair_two_z2(coarse: bool) -> CompatiblePair {
        let all = indexed::enumerate_admissible(&fixtures::two(), &fixtures::z(2)).unwrap();
        let rel = if coarse {
            all[0].clone()
        } else {
            all[1].clone()
        };
        let proj = CandidateAction::new(
            fixtures::two(),
            fixtures::z(2),
            vec![vec![0, 1], vec![0, 0]],
        )
        .unwrap();
        CompatiblePair::new(rel, proj).unwrap()
    }

    fn pair_z2_z2_id() -> CompatiblePair {
        let rel = indexed::IndexedEqRel::fine(fixtures::z(2), fixtures::z(2));
        let id = CandidateAction::identity_action(fixtures::z(2), fixtures::z(2));
        CompatiblePair::new(rel, id).unwrap()
    }

    #[test]
    fn coarse_projection_product_is_m3() {
        let wsd = weak_semidirect(&pair_two_z2(true)).unwrap();
        assert_eq!(wsd.monoid.size(), 3);
        assert!(find_isomorphism(&wsd.monoid, &fixtures::m3()).is_some());
    }

    #[test]
    fn fine_projection_product_has_four_elements() {
        let wsd = weak_semidirect(&pair_two_z2(false)).unwrap();
        assert_eq!(wsd.monoid.size(), 4);
        // ([n], bot) is left absorbing on the bot fibre.
        let bot0 = wsd.index_of(0, 1);
        let top1 = wsd.index_of(1, 0);
        assert_eq!(wsd.monoid.mul(bot0, top1), bot0);
    }

    #[test]
    fn trivial_h_product_is_n() {
        let rel = indexed::IndexedEqRel::fine(fixtures::trivial(), fixtures::z(3));
        let act = CandidateAction::identity_action(fixtures::trivial(), fixtures::z(3));
        let pair = CompatiblePair::new(rel, act).unwrap();
        let wsd = weak_semidirect(&pair).unwrap();
        assert!(find_isomorphism(&wsd.monoid, &fixtures::z(3)).is_some());
    }

    #[test]
    fn unit_twist_reproduces_the_weak_semidirect_table() {
        let pair = pair_two_z2(true);
        let witness = abelian_group_witness(&fixtures::z(2)).unwrap();
        let g = vec![vec![0, 0], vec![0, 0]];
        let twisted = twisted_product(&witness, &pair, &g).unwrap();
        let plain = weak_semidirect(&pair).unwrap();
        assert_eq!(twisted.monoid.table, plain.monoid.table);
    }

    #[test]
    fn z4_and_klein_from_twists_over_z2_z2() {
        let pair = pair_z2_z2_id();
        let witness = abelian_group_witness(&fixtures::z(2)).unwrap();
        let nontrivial = twisted_product(&witness, &pair, &[vec![0, 0], vec![0, 1]]).unwrap();
        assert!(find_isomorphism(&nontrivial.monoid, &fixtures::z(4)).is_some());
        let trivial = twisted_product(&witness, &pair, &[vec![0, 0], vec![0, 0]]).unwrap();
        assert!(find_isomorphism(&trivial.monoid, &fixtures::klein()).is_some());
    }

    #[test]
    fn witness_for_the_wrong_kernel_is_refused() {
        let pair = pair_z2_z2_id();
        let w3 = abelian_group_witness(&fixtures::z(3)).unwrap();
        assert!(matches!(
            twisted_product(&w3, &pair, &[vec![0, 0], vec![0, 0]]),
            Err(Error::KernelNotAbelianGroup(_))
        ));
    }

    #[test]
    fn non_factor_set_is_refused() {
        let pair = pair_z2_z2_id();
        let witness = abelian_group_witness(&fixtures::z(2)).unwrap();
        // g(1, sigma) = 1 breaks the unit condition at a discrete index.
        let g = vec![vec![0, 1], vec![0, 0]];
        assert!(matches!(
            twisted_product(&witness, &pair, &g),
            Err(Error::NotFactorSet(_))
        ));
    }

    #[test]
    fn induced_split_extensions_are_weakly_schreier() {
        for pair in [pair_two_z2(true), pair_two_z2(false), pair_z2_z2_id()] {
            let (_, split) = induced_split_extension(&pair).unwrap();
            assert!(check_weakly_schreier(&split).unwrap());
        }
    }

    #[test]
    fn induced_coarse_extension_is_z2_into_m3() {
        let (wsd, split) = induced_split_extension(&pair_two_z2(true)).unwrap();
        assert!(find_isomorphism(&wsd.monoid, &fixtures::m3()).is_some());
        assert!(split.ext.kernel_map.is_injective());
        assert_eq!(split.ext.h, fixtures::two());
    }

    #[test]
    fn product_projection_split_is_weakly_schreier_but_not_cosetal() {
        // two x two projecting onto the second coordinate, with the
        // diagonal-free section y -> (top, y).
        let two = fixtures::two();
        let pairs: Vec<(usize, usize)> = vec![(0, 0), (0, 1), (1, 0), (1, 1)];
        let idx = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).unwrap();
        let table = pairs
            .iter()
            .map(|&(a, b)| {
                pairs
                    .iter()
                    .map(|&(c, d)| idx(two.mul(a, c), two.mul(b, d)))
                    .collect()
            })
            .collect();
        let labels = pairs.iter().map(|&(a, b)| format!("({a},{b})")).collect();
        let g_m = FiniteMonoid::new("two_sq", labels, 0, table).unwrap();
        let k = MonoidMap::new(two.clone(), g_m.clone(), vec![idx(0, 0), idx(1, 0)]).unwrap();
        let e = MonoidMap::new(
            g_m.clone(),
            two.clone(),
            pairs.iter().map(|&(_, b)| b).collect(),
        )
        .unwrap();
        let s = MonoidMap::new(two.clone(), g_m, vec![idx(0, 0), idx(0, 1)]).unwrap();
        let ext = ExtensionPresentation::new(k, e).unwrap();
        let split = SplitExtension::new(ext.clone(), s).unwrap();
        assert!(check_weakly_schreier(&split).unwrap());
        assert!(!check_cosetal(&ext).unwrap());
    }

    #[test]
    fn m3_extension_is_cosetal_but_not_special_schreier() {
        let (_, split) = induced_split_extension(&pair_two_z2(true)).unwrap();
        assert!(check_cosetal(&split.ext).unwrap());
        assert!(!check_special_schreier(&split.ext).unwrap());
    }

    #[test]
    fn fine_projection_extension_is_special_schreier() {
        let (_, split) = induced_split_extension(&pair_two_z2(false)).unwrap();
        assert!(check_cosetal(&split.ext).unwrap());
        assert!(check_special_schreier(&split.ext).unwrap());
    }

    #[test]
    fn trivial_h_induced_split_is_n_onto_the_point() {
        let rel = indexed::IndexedEqRel::fine(fixtures::trivial(), fixtures::z(3));
        let act = CandidateAction::identity_action(fixtures::trivial(), fixtures::z(3));
        let pair = CompatiblePair::new(rel, act).unwrap();
        let (wsd, split) = induced_split_extension(&pair).unwrap();
        assert_eq!(split.ext.h.size(), 1);
        assert!(find_isomorphism(&wsd.monoid, &fixtures::z(3)).is_some());
        assert!(check_weakly_schreier(&split).unwrap());
    }

    #[test]
    fn diagonal_section_on_the_klein_extension_is_weakly_schreier() {
        let z2 = fixtures::z(2);
        let pair = pair_z2_z2_id();
        let witness = abelian_group_witness(&z2).unwrap();
        let klein = twisted_product(&witness, &pair, &[vec![0, 0], vec![0, 0]]).unwrap();
        let ext = crate::extension::presentation_of_twisted(&klein).unwrap();
        // Diagonal section ([1], sigma) instead of ([0], sigma).
        let diag = MonoidMap::new(
            z2,
            klein.monoid.clone(),
            vec![klein.index_of(0, 0), klein.index_of(1, 1)],
        )
        .unwrap();
        let mut base = ext.clone();
        base.section = None;
        let split = SplitExtension::new(base, diag).unwrap();
        assert!(check_weakly_schreier(&split).unwrap());
    }

    #[test]
    fn group_extension_is_cosetal_and_special_schreier() {
        let pair = pair_z2_z2_id();
        let witness = abelian_group_witness(&fixtures::z(2)).unwrap();
        let z4_like = twisted_product(&witness, &pair, &[vec![0, 0], vec![0, 1]]).unwrap();
        let ext = crate::extension::presentation_of_twisted(&z4_like).unwrap();
        assert!(check_cosetal(&ext).unwrap());
        assert!(check_special_schreier(&ext).unwrap());
    }
}
