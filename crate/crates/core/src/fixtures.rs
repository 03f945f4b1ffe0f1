//! The in-repo monoid catalog. Every worked example in the test suite is
//! reproducible from these tables.

use crate::monoid::FiniteMonoid;

/// The two-element meet-semilattice {top, bot} with identity top.
pub fn two() -> FiniteMonoid {
    FiniteMonoid::new(
        "two",
        vec!["top".into(), "bot".into()],
        0,
        vec![vec![0, 1], vec![1, 1]],
    )
    .expect("catalog table")
}

/// The cyclic group of order `n` under addition.
pub fn z(n: usize) -> FiniteMonoid {
    assert!(n >= 1, "z(n) needs n >= 1");
    let table = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    let labels = (0..n).map(|i| i.to_string()).collect();
    FiniteMonoid::new(format!("z{n}"), labels, 0, table).expect("catalog table")
}

/// The one-element monoid.
pub fn trivial() -> FiniteMonoid {
    FiniteMonoid::new("one", vec!["1".into()], 0, vec![vec![0]]).expect("catalog table")
}

/// The Klein four-group.
pub fn klein() -> FiniteMonoid {
    FiniteMonoid::new(
        "klein",
        vec!["e".into(), "a".into(), "b".into(), "ab".into()],
        0,
        vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ],
    )
    .expect("catalog table")
}

/// Addition mod 2 with an absorbing element adjoined: {0, 1, inf}.
pub fn m3() -> FiniteMonoid {
    FiniteMonoid::new(
        "m3",
        vec!["0".into(), "1".into(), "inf".into()],
        0,
        vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 2]],
    )
    .expect("catalog table")
}

/// The symmetric group on three letters.
///
/// Element order: e, (12), (13), (23), (123), (132); composition acts
/// left-to-right on points.
pub fn s3() -> FiniteMonoid {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2], // e
        [1, 0, 2], // (12)
        [2, 1, 0], // (13)
        [0, 2, 1], // (23)
        [1, 2, 0], // (123)
        [2, 0, 1], // (132)
    ];
    let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).expect("closed");
    let table = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| {
                    let composed = [b[a[0]], b[a[1]], b[a[2]]];
                    index_of(&composed)
                })
                .collect()
        })
        .collect();
    let labels = vec![
        "e".into(),
        "(12)".into(),
        "(13)".into(),
        "(23)".into(),
        "(123)".into(),
        "(132)".into(),
    ];
    FiniteMonoid::new("s3", labels, 0, table).expect("catalog table")
}

/// Two-element left-zero semigroup with an identity adjoined: {e, a, b}
/// where a*x = a and b*x = b for x in {a, b}.
pub fn left_zero_plus_identity() -> FiniteMonoid {
    FiniteMonoid::new(
        "lz1",
        vec!["e".into(), "a".into(), "b".into()],
        0,
        vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
    )
    .expect("catalog table")
}

/// Look up a catalog monoid by name.
pub fn by_name(name: &str) -> Option<FiniteMonoid> {
    match name {
        "two" => Some(two()),
        "z2" => Some(z(2)),
        "z3" => Some(z(3)),
        "z4" => Some(z(4)),
        "one" | "trivial" => Some(trivial()),
        "klein" => Some(klein()),
        "m3" => Some(m3()),
        "s3" => Some(s3()),
        "lz1" => Some(left_zero_plus_identity()),
        _ => None,
    }
}

/// Catalog names, in the order used by reports and the shipped files.
pub const CATALOG: &[&str] = &["two", "z2", "z3", "z4", "one", "klein", "m3", "s3", "lz1"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::check_monoid;

    #[test]
    fn every_catalog_table_is_a_monoid() {
        for name in CATALOG {
            let m = by_name(name).unwrap();
            assert_eq!(check_monoid(&m.table, m.identity).unwrap(), None, "{name}");
        }
    }

    #[test]
    fn s3_is_a_nonabelian_group() {
        let s3 = s3();
        assert!(s3.is_group());
        assert!(!s3.is_commutative());
    }

    #[test]
    fn left_zero_fixture_shape() {
        let m = left_zero_plus_identity();
        assert_eq!(m.mul(1, 2), 1);
        assert_eq!(m.mul(2, 1), 2);
    }
}
