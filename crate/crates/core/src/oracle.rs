//! Brute-force oracles: the raw factor-set scan with no normalization
//! shortcuts, and the cosetal-extension census that buckets twisted
//! products by explicit isomorphism search. The classifying pipeline is
//! checked against these counts.

use crate::action::{wact_poset_with_budget, CompatiblePair};
use crate::caps::Caps;
use crate::cohomology::check_factor_set;
use crate::error::{Error, Result};
use crate::extension::{
    extensions_isomorphic, extract_invariants, presentation_of_twisted, CosetalInvariants,
    ExtensionPresentation,
};
use crate::monoid::{AbelianGroupWitness, Elem, FiniteMonoid};
use crate::product::twisted_product;

/// Every table H x H -> N passing `check_factor_set`, in lexicographic
/// order. Scans all |N|^(|H|^2) tables; the budget guards the blowup.
pub fn oracle_enumerate_factor_sets(pair: &CompatiblePair) -> Result<Vec<Vec<Vec<Elem>>>> {
    oracle_enumerate_factor_sets_with_budget(pair, Caps::default().enumeration_budget)
}

pub fn oracle_enumerate_factor_sets_with_budget(
    pair: &CompatiblePair,
    budget: u64,
) -> Result<Vec<Vec<Vec<Elem>>>> {
    let hn = pair.relation.h.size();
    let nn = pair.relation.n.size();
    let cells = hn * hn;
    let count = (nn as u64).checked_pow(cells as u32);
    match count {
        Some(c) if c <= budget => {}
        _ => {
            return Err(Error::CapExceeded(format!(
                "{nn}^{cells} raw factor-set tables exceed budget {budget}"
            )))
        }
    }

    let mut out = Vec::new();
    let mut flat = vec![0usize; cells];
    loop {
        let table: Vec<Vec<Elem>> = (0..hn)
            .map(|r| flat[r * hn..(r + 1) * hn].to_vec())
            .collect();
        if check_factor_set(&table, pair)?.is_none() {
            out.push(table);
        }
        let mut i = cells;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            flat[i] += 1;
            if flat[i] < nn {
                break false;
            }
            flat[i] = 0;
        };
        if done {
            return Ok(out);
        }
    }
}

/// One isomorphism class of cosetal extensions found by the census.
#[derive(Debug, Clone)]
pub struct OracleExtensionClass {
    pub representative: ExtensionPresentation,
    pub invariants: CosetalInvariants,
    /// Index of the WAct pair whose products populated this bucket.
    pub pair_index: usize,
    /// Raw factor-set tables that landed in this bucket.
    pub bucket_size: usize,
}

/// Build the twisted product of every (pair, raw factor set) combination
/// and bucket the resulting extensions by brute-force isomorphism.
pub fn oracle_enumerate_cosetal_extensions(
    h: &FiniteMonoid,
    n: &FiniteMonoid,
    witness: &AbelianGroupWitness,
    caps: &Caps,
) -> Result<Vec<OracleExtensionClass>> {
    if h.size() > caps.oracle_h_size {
        return Err(Error::CapExceeded(format!(
            "|H| = {} exceeds the oracle cap {}",
            h.size(),
            caps.oracle_h_size
        )));
    }
    let poset = wact_poset_with_budget(h, n, caps.enumeration_budget)?;
    let mut classes: Vec<OracleExtensionClass> = Vec::new();
    for (pair_index, pair) in poset.pairs.iter().enumerate() {
        let raw = oracle_enumerate_factor_sets_with_budget(pair, caps.enumeration_budget)?;
        for g in &raw {
            let wsd = twisted_product(witness, pair, g)?;
            let ext = presentation_of_twisted(&wsd)?;
            match classes
                .iter_mut()
                .find(|c| extensions_isomorphic(&c.representative, &ext).is_some())
            {
                Some(class) => class.bucket_size += 1,
                None => {
                    let invariants = extract_invariants(&ext, witness)?;
                    classes.push(OracleExtensionClass {
                        representative: ext,
                        invariants,
                        pair_index,
                        bucket_size: 1,
                    });
                }
            }
        }
    }
    Ok(classes)
}
