//! Finite monoids as multiplication tables, homomorphisms between them,
//! abelian-group witnesses, congruences and their quotients.
//!
//! Elements are dense indices `0..size`. The identity is stored explicitly
//! and is not required to sit at index 0, so catalog tables load verbatim.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::UnionFind;

/// Element of a finite monoid, by index.
pub type Elem = usize;

/// Default refusal threshold for monoid sizes. Everything downstream is
/// exponential in these sizes, so oversized inputs fail fast.
pub const DEFAULT_SIZE_CAP: usize = 64;

/// First law violation found while validating a multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoidDefect {
    /// Row `row` has length `len` in a table with `rows` rows.
    NotSquare { row: usize, len: usize, rows: usize },
    /// Cell (a, b) holds an index outside `0..size`.
    OutOfRange { a: Elem, b: Elem, value: usize },
    /// Declared identity index is outside `0..size`.
    IdentityOutOfRange { identity: usize },
    /// (a*b)*c != a*(b*c).
    NotAssociative { a: Elem, b: Elem, c: Elem },
    /// identity*a != a or a*identity != a.
    UnitLaw { element: Elem },
}

impl std::fmt::Display for MonoidDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MonoidDefect::NotSquare { row, len, rows } => {
                write!(f, "row {row} has length {len}, expected {rows}")
            }
            MonoidDefect::OutOfRange { a, b, value } => {
                write!(f, "cell ({a},{b}) holds out-of-range index {value}")
            }
            MonoidDefect::IdentityOutOfRange { identity } => {
                write!(f, "identity index {identity} out of range")
            }
            MonoidDefect::NotAssociative { a, b, c } => {
                write!(f, "associativity fails at triple ({a},{b},{c})")
            }
            MonoidDefect::UnitLaw { element } => {
                write!(f, "unit law fails at element {element}")
            }
        }
    }
}

/// Validate a multiplication table against the monoid laws.
///
/// Shape problems surface as `Err`; law violations come back as
/// `Ok(Some(defect))` naming the first violating triple (associativity is
/// scanned in lexicographic order before the unit laws).
pub fn check_monoid(table: &[Vec<Elem>], identity: usize) -> Result<Option<MonoidDefect>> {
    let n = table.len();
    for (row, r) in table.iter().enumerate() {
        if r.len() != n {
            return Err(Error::MalformedTable(
                MonoidDefect::NotSquare {
                    row,
                    len: r.len(),
                    rows: n,
                }
                .to_string(),
            ));
        }
        for (col, &v) in r.iter().enumerate() {
            if v >= n {
                return Err(Error::MalformedTable(
                    MonoidDefect::OutOfRange {
                        a: row,
                        b: col,
                        value: v,
                    }
                    .to_string(),
                ));
            }
        }
    }
    if identity >= n {
        return Err(Error::MalformedTable(
            MonoidDefect::IdentityOutOfRange { identity }.to_string(),
        ));
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Ok(Some(MonoidDefect::NotAssociative { a, b, c }));
                }
            }
        }
    }
    for a in 0..n {
        if table[identity][a] != a || table[a][identity] != a {
            return Ok(Some(MonoidDefect::UnitLaw { element: a }));
        }
    }
    Ok(None)
}

/// A finite monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMonoid {
    pub name: String,
    pub elements: Vec<String>,
    pub identity: Elem,
    pub table: Vec<Vec<Elem>>,
}

impl FiniteMonoid {
    /// Build and validate a monoid, refusing tables above [`DEFAULT_SIZE_CAP`].
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        identity: Elem,
        table: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        Self::with_cap(name, elements, identity, table, DEFAULT_SIZE_CAP)
    }

    /// Build and validate a monoid with an explicit size cap.
    pub fn with_cap(
        name: impl Into<String>,
        elements: Vec<String>,
        identity: Elem,
        table: Vec<Vec<Elem>>,
        cap: usize,
    ) -> Result<Self> {
        if table.len() > cap {
            return Err(Error::CapExceeded(format!(
                "monoid size {} exceeds cap {}",
                table.len(),
                cap
            )));
        }
        if elements.len() != table.len() {
            return Err(Error::MalformedTable(format!(
                "{} element names for a table of size {}",
                elements.len(),
                table.len()
            )));
        }
        match check_monoid(&table, identity)? {
            None => Ok(FiniteMonoid {
                name: name.into(),
                elements,
                identity,
                table,
            }),
            Some(defect) => Err(Error::NotAMonoid(defect.to_string())),
        }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a][b]
    }

    pub fn elems(&self) -> std::ops::Range<Elem> {
        0..self.size()
    }

    pub fn label(&self, e: Elem) -> &str {
        &self.elements[e]
    }

    /// Product of a slice of elements, left to right.
    pub fn product(&self, xs: &[Elem]) -> Elem {
        xs.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }

    pub fn is_commutative(&self) -> bool {
        self.elems()
            .all(|a| (a + 1..self.size()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Two-sided inverse of `a`, if any.
    pub fn inverse_of(&self, a: Elem) -> Option<Elem> {
        self.elems()
            .find(|&b| self.mul(a, b) == self.identity && self.mul(b, a) == self.identity)
    }

    pub fn is_group(&self) -> bool {
        self.elems().all(|a| self.inverse_of(a).is_some())
    }

    /// The same monoid with elements renamed along a permutation:
    /// element `i` of the result is element `perm[i]` of `self`.
    pub fn relabel(&self, perm: &[Elem]) -> Result<Self> {
        if perm.len() != self.size() {
            return Err(Error::SizeMismatch {
                expected: self.size(),
                got: perm.len(),
            });
        }
        let mut inv = vec![usize::MAX; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            if p >= perm.len() || inv[p] != usize::MAX {
                return Err(Error::MalformedTable("not a permutation".into()));
            }
            inv[p] = i;
        }
        let n = self.size();
        let table: Vec<Vec<Elem>> = (0..n)
            .map(|a| (0..n).map(|b| inv[self.mul(perm[a], perm[b])]).collect())
            .collect();
        let elements = perm.iter().map(|&p| self.elements[p].clone()).collect();
        FiniteMonoid::with_cap(
            self.name.clone(),
            elements,
            inv[self.identity],
            table,
            usize::MAX,
        )
    }
}

/// Witness that a monoid is an abelian group: one inverse per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupWitness {
    pub monoid: FiniteMonoid,
    pub inverse: Vec<Elem>,
}

impl AbelianGroupWitness {
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }
}

/// Certify `m` as an abelian group, or refuse naming the witness element
/// (first non-invertible element, checked before commutativity).
pub fn abelian_group_witness(m: &FiniteMonoid) -> Result<AbelianGroupWitness> {
    let mut inverse = Vec::with_capacity(m.size());
    for a in m.elems() {
        match m.inverse_of(a) {
            Some(b) => inverse.push(b),
            None => return Err(Error::NotAGroup { witness: a }),
        }
    }
    for a in m.elems() {
        for b in a + 1..m.size() {
            if m.mul(a, b) != m.mul(b, a) {
                return Err(Error::NotAbelian { a, b });
            }
        }
    }
    Ok(AbelianGroupWitness {
        monoid: m.clone(),
        inverse,
    })
}

/// A map between finite monoids, given elementwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidMap {
    pub domain: FiniteMonoid,
    pub codomain: FiniteMonoid,
    pub image: Vec<Elem>,
}

impl MonoidMap {
    /// Build a map, checking only shape (use [`check_homomorphism`] for laws).
    pub fn new(domain: FiniteMonoid, codomain: FiniteMonoid, image: Vec<Elem>) -> Result<Self> {
        if image.len() != domain.size() {
            return Err(Error::SizeMismatch {
                expected: domain.size(),
                got: image.len(),
            });
        }
        if let Some(&v) = image.iter().find(|&&v| v >= codomain.size()) {
            return Err(Error::MalformedTable(format!(
                "image value {v} out of range"
            )));
        }
        Ok(MonoidMap {
            domain,
            codomain,
            image,
        })
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.image[a]
    }

    /// The constant-identity map, which plays the role of zero.
    pub fn zero(domain: FiniteMonoid, codomain: FiniteMonoid) -> Self {
        let image = vec![codomain.identity; domain.size()];
        MonoidMap {
            domain,
            codomain,
            image,
        }
    }

    pub fn identity(m: FiniteMonoid) -> Self {
        let image = m.elems().collect();
        MonoidMap {
            domain: m.clone(),
            codomain: m,
            image,
        }
    }

    /// `other` after `self` (self first).
    pub fn then(&self, other: &MonoidMap) -> Result<MonoidMap> {
        if self.codomain != other.domain {
            return Err(Error::ShapeMismatch("composition domain mismatch".into()));
        }
        let image = self.image.iter().map(|&a| other.apply(a)).collect();
        MonoidMap::new(self.domain.clone(), other.codomain.clone(), image)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.size()];
        self.image
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain.size()];
        for &v in &self.image {
            seen[v] = true;
        }
        seen.into_iter().all(|s| s)
    }
}

/// True iff `f` preserves the unit and multiplication.
pub fn check_homomorphism(f: &MonoidMap) -> bool {
    if f.apply(f.domain.identity) != f.codomain.identity {
        return false;
    }
    f.domain.elems().all(|a| {
        f.domain
            .elems()
            .all(|b| f.apply(f.domain.mul(a, b)) == f.codomain.mul(f.apply(a), f.apply(b)))
    })
}

/// A two-sided congruence, stored as a class-of-minimum-element array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub monoid: FiniteMonoid,
    /// `class_of[e]` is the least element of e's class.
    pub class_of: Vec<Elem>,
}

impl Congruence {
    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Sorted distinct class representatives.
    pub fn representatives(&self) -> Vec<Elem> {
        let mut reps: Vec<Elem> = self.class_of.clone();
        reps.sort_unstable();
        reps.dedup();
        reps
    }
}

/// Smallest congruence containing the given pairs, by fixed-point
/// saturation: union-find seeded with the pairs and closed under left and
/// right translation until stable.
pub fn congruence_closure(m: &FiniteMonoid, pairs: &[(Elem, Elem)]) -> Result<Congruence> {
    let n = m.size();
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(Error::MalformedTable(format!(
                "pair ({a},{b}) out of range"
            )));
        }
    }
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(Elem, Elem)> = pairs.to_vec();
    while let Some((a, b)) = work.pop() {
        if uf.union(a, b) {
            for x in 0..n {
                work.push((m.mul(x, a), m.mul(x, b)));
                work.push((m.mul(a, x), m.mul(b, x)));
            }
        }
    }
    Ok(Congruence {
        monoid: m.clone(),
        class_of: uf.min_encoding(),
    })
}

/// Quotient monoid of a congruence, plus the projection map.
///
/// Classes are represented by their least element; quotient element `i`
/// is the i-th representative in ascending order.
pub fn quotient(c: &Congruence) -> Result<(FiniteMonoid, MonoidMap)> {
    let reps = c.representatives();
    let pos_of_rep = |r: Elem| reps.binary_search(&r).expect("representative");
    let table: Vec<Vec<Elem>> = reps
        .iter()
        .map(|&a| {
            reps.iter()
                .map(|&b| pos_of_rep(c.class_of[c.monoid.mul(a, b)]))
                .collect()
        })
        .collect();
    let labels: Vec<String> = reps
        .iter()
        .map(|&r| {
            let members: Vec<&str> = c
                .monoid
                .elems()
                .filter(|&e| c.class_of[e] == r)
                .map(|e| c.monoid.label(e))
                .collect();
            format!("{{{}}}", members.join("|"))
        })
        .collect();
    let q = FiniteMonoid::with_cap(
        format!("{}/~", c.monoid.name),
        labels,
        pos_of_rep(c.class_of[c.monoid.identity]),
        table,
        usize::MAX,
    )?;
    let image = c
        .monoid
        .elems()
        .map(|e| pos_of_rep(c.class_of[e]))
        .collect();
    let proj = MonoidMap::new(c.monoid.clone(), q.clone(), image)?;
    Ok((q, proj))
}

/// Kernel of a homomorphism: the submonoid sent to the identity, with its
/// inclusion map.
pub fn kernel(f: &MonoidMap) -> Result<(FiniteMonoid, MonoidMap)> {
    if !check_homomorphism(f) {
        return Err(Error::NotHomomorphism(
            "kernel of a non-homomorphism".into(),
        ));
    }
    let members: Vec<Elem> = f
        .domain
        .elems()
        .filter(|&a| f.apply(a) == f.codomain.identity)
        .collect();
    let pos = |e: Elem| members.binary_search(&e).expect("kernel is closed");
    let table: Vec<Vec<Elem>> = members
        .iter()
        .map(|&a| members.iter().map(|&b| pos(f.domain.mul(a, b))).collect())
        .collect();
    let labels = members
        .iter()
        .map(|&e| f.domain.label(e).to_string())
        .collect();
    let k = FiniteMonoid::with_cap(
        format!("ker({})", f.domain.name),
        labels,
        pos(f.domain.identity),
        table,
        usize::MAX,
    )?;
    let incl = MonoidMap::new(k.clone(), f.domain.clone(), members)?;
    Ok((k, incl))
}

/// Cokernel of a homomorphism: the congruence generated by `f(x) ~ 1`,
/// its quotient monoid, and the projection.
pub fn cokernel(f: &MonoidMap) -> Result<(Congruence, FiniteMonoid, MonoidMap)> {
    if !check_homomorphism(f) {
        return Err(Error::NotHomomorphism(
            "cokernel of a non-homomorphism".into(),
        ));
    }
    let pairs: Vec<(Elem, Elem)> = f
        .domain
        .elems()
        .map(|x| (f.apply(x), f.codomain.identity))
        .collect();
    let c = congruence_closure(&f.codomain, &pairs)?;
    let (q, proj) = quotient(&c)?;
    Ok((c, q, proj))
}

/// Brute-force search for a monoid isomorphism, as an image array on `a`'s
/// elements. Identity must map to identity; the rest is backtracking with
/// table-consistency pruning.
pub fn find_isomorphism(a: &FiniteMonoid, b: &FiniteMonoid) -> Option<Vec<Elem>> {
    if a.size() != b.size() {
        return None;
    }
    let n = a.size();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[a.identity] = b.identity;
    used[b.identity] = true;
    // Assign non-identity elements in index order.
    let order: Vec<Elem> = a.elems().filter(|&e| e != a.identity).collect();

    fn consistent(a: &FiniteMonoid, b: &FiniteMonoid, map: &[Elem]) -> bool {
        for x in a.elems() {
            if map[x] == usize::MAX {
                continue;
            }
            for y in a.elems() {
                if map[y] == usize::MAX {
                    continue;
                }
                let img = map[a.mul(x, y)];
                if img != usize::MAX && img != b.mul(map[x], map[y]) {
                    return false;
                }
            }
        }
        true
    }

    fn search(
        a: &FiniteMonoid,
        b: &FiniteMonoid,
        order: &[Elem],
        pos: usize,
        map: &mut Vec<Elem>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let x = order[pos];
        for y in b.elems() {
            if used[y] {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if consistent(a, b, map) && search(a, b, order, pos + 1, map, used) {
                return true;
            }
            map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }

    if search(a, b, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn two_is_a_valid_monoid() {
        let two = fixtures::two();
        assert_eq!(check_monoid(&two.table, two.identity).unwrap(), None);
    }

    #[test]
    fn broken_unit_table_reports_violation() {
        // a*a=b, a*b=a, b*a=b, b*b=b with claimed identity a.
        let table = vec![vec![1, 0], vec![1, 1]];
        let defect = check_monoid(&table, 0).unwrap();
        assert!(defect.is_some());
        assert!(FiniteMonoid::new("bad", vec!["a".into(), "b".into()], 0, table).is_err());
    }

    #[test]
    fn z4_is_a_valid_abelian_group() {
        let z4 = fixtures::z(4);
        assert_eq!(check_monoid(&z4.table, z4.identity).unwrap(), None);
        let w = abelian_group_witness(&z4).unwrap();
        assert_eq!(w.inverse, vec![0, 3, 2, 1]);
    }

    #[test]
    fn z2_witness_is_self_inverse() {
        let w = abelian_group_witness(&fixtures::z(2)).unwrap();
        assert_eq!(w.inverse, vec![0, 1]);
    }

    #[test]
    fn two_is_not_a_group() {
        let err = abelian_group_witness(&fixtures::two()).unwrap_err();
        assert_eq!(err, Error::NotAGroup { witness: 1 });
    }

    #[test]
    fn s3_is_not_abelian() {
        let err = abelian_group_witness(&fixtures::s3()).unwrap_err();
        assert!(matches!(err, Error::NotAbelian { .. }));
    }

    #[test]
    fn malformed_tables_are_refused() {
        assert!(matches!(
            check_monoid(&[vec![0, 1], vec![0]], 0),
            Err(Error::MalformedTable(_))
        ));
        assert!(matches!(
            check_monoid(&[vec![0, 2], vec![1, 0]], 0),
            Err(Error::MalformedTable(_))
        ));
        assert!(matches!(
            check_monoid(&[vec![0]], 3),
            Err(Error::MalformedTable(_))
        ));
    }

    #[test]
    fn homomorphism_checks() {
        let z2 = fixtures::z(2);
        let two = fixtures::two();
        let id = MonoidMap::identity(z2.clone());
        assert!(check_homomorphism(&id));
        let zero = MonoidMap::zero(z2.clone(), two.clone());
        assert!(check_homomorphism(&zero));
        let swap = MonoidMap::new(z2.clone(), z2.clone(), vec![1, 0]).unwrap();
        assert!(!check_homomorphism(&swap));
    }

    #[test]
    fn congruence_closure_on_z4() {
        let z4 = fixtures::z(4);
        let c = congruence_closure(&z4, &[(2, 0)]).unwrap();
        assert_eq!(c.class_of, vec![0, 1, 0, 1]);
    }

    #[test]
    fn congruence_closure_empty_is_discrete() {
        let s3 = fixtures::s3();
        let c = congruence_closure(&s3, &[]).unwrap();
        assert_eq!(c.class_of, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn congruence_closure_on_m3() {
        let m3 = fixtures::m3();
        let c = congruence_closure(&m3, &[(1, 0)]).unwrap();
        assert_eq!(c.class_of, vec![0, 0, 2]);
    }

    #[test]
    fn kernel_of_m3_projection_is_z2() {
        let m3 = fixtures::m3();
        let two = fixtures::two();
        let e = MonoidMap::new(m3.clone(), two.clone(), vec![0, 0, 1]).unwrap();
        let (k, incl) = kernel(&e).unwrap();
        assert_eq!(k.size(), 2);
        assert!(find_isomorphism(&k, &fixtures::z(2)).is_some());
        assert!(check_homomorphism(&incl));
    }

    #[test]
    fn kernel_of_identity_is_trivial_and_of_zero_is_everything() {
        let z4 = fixtures::z(4);
        let (k, _) = kernel(&MonoidMap::identity(z4.clone())).unwrap();
        assert_eq!(k.size(), 1);
        let (k, _) = kernel(&MonoidMap::zero(z4.clone(), fixtures::z(2))).unwrap();
        assert_eq!(k.size(), 4);
    }

    #[test]
    fn cokernel_of_z2_into_m3_is_two() {
        let m3 = fixtures::m3();
        let z2 = fixtures::z(2);
        let k = MonoidMap::new(z2, m3, vec![0, 1]).unwrap();
        let (c, q, proj) = cokernel(&k).unwrap();
        assert_eq!(c.class_of, vec![0, 0, 2]);
        assert!(find_isomorphism(&q, &fixtures::two()).is_some());
        assert!(check_homomorphism(&proj));
    }

    #[test]
    fn cokernel_of_identity_and_of_trivial_inclusion() {
        let z4 = fixtures::z(4);
        let (_, q, _) = cokernel(&MonoidMap::identity(z4.clone())).unwrap();
        assert_eq!(q.size(), 1);
        let one = fixtures::trivial();
        let incl = MonoidMap::new(one, z4.clone(), vec![0]).unwrap();
        let (_, q, _) = cokernel(&incl).unwrap();
        assert!(find_isomorphism(&q, &z4).is_some());
    }

    #[test]
    fn kernel_then_map_is_zero() {
        let m3 = fixtures::m3();
        let two = fixtures::two();
        let e = MonoidMap::new(m3.clone(), two.clone(), vec![0, 0, 1]).unwrap();
        let (_, incl) = kernel(&e).unwrap();
        let composed = incl.then(&e).unwrap();
        assert_eq!(composed, MonoidMap::zero(composed.domain.clone(), two));
    }

    #[test]
    fn isomorphism_search_separates_z4_from_klein() {
        assert!(find_isomorphism(&fixtures::z(4), &fixtures::klein()).is_none());
        assert!(find_isomorphism(&fixtures::z(4), &fixtures::z(4)).is_some());
    }

    #[test]
    fn oversized_tables_are_refused_by_default() {
        let n = DEFAULT_SIZE_CAP + 1;
        let table: Vec<Vec<Elem>> = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        assert!(matches!(
            FiniteMonoid::new("big", labels, 0, table),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn relabel_moves_the_identity() {
        let z3 = fixtures::z(3);
        let p = z3.relabel(&[2, 0, 1]).unwrap();
        assert_eq!(check_monoid(&p.table, p.identity).unwrap(), None);
        assert_eq!(p.identity, 1);
        assert!(find_isomorphism(&p, &z3).is_some());
    }
}
