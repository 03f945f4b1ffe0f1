//! Set partitions in class-of-minimum-element encoding, plus the
//! union-find used for congruence saturation.
//!
//! A partition of `0..n` is a `Vec<usize>` where entry `i` holds the least
//! element of i's class, so equality of partitions is array equality and
//! class ids are stable across runs.

/// Plain union-find with path compression.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    /// Merge the classes of `a` and `b`; true iff they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // Keep the smaller index as root so min-encoding falls out directly.
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Canonical class-of-min array for the current classes.
    pub fn min_encoding(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|i| self.find(i)).collect()
    }
}

/// A partition in class-of-min encoding.
pub type Partition = Vec<usize>;

/// The partition with singleton classes.
pub fn discrete(n: usize) -> Partition {
    (0..n).collect()
}

/// The partition with a single class.
pub fn total(n: usize) -> Partition {
    vec![0; n]
}

/// True iff `p` is a well-formed class-of-min encoding.
pub fn is_canonical(p: &Partition) -> bool {
    p.iter().enumerate().all(|(i, &c)| c <= i && p[c] == c)
}

/// Re-encode an arbitrary class-id array into class-of-min form.
pub fn canonicalize(ids: &[usize]) -> Partition {
    let n = ids.len();
    let mut min_of = std::collections::BTreeMap::new();
    for i in 0..n {
        min_of.entry(ids[i]).or_insert(i);
    }
    (0..n).map(|i| min_of[&ids[i]]).collect()
}

/// All partitions of `0..n`, as restricted-growth strings converted to
/// min-encoding, in lexicographic order of the encodings.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        out.push(canonicalize(&rgs));
        // Next restricted growth string.
        let mut i = n - 1;
        loop {
            let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
            if i > 0 && rgs[i] <= max_prefix {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
        }
    }
}

/// True iff every class of `p` is contained in a class of `q`.
pub fn refines(p: &Partition, q: &Partition) -> bool {
    p.iter().enumerate().all(|(i, &c)| q[i] == q[c])
}

/// Common refinement: classes are intersections of classes.
pub fn meet(p: &Partition, q: &Partition) -> Partition {
    let n = p.len();
    let mut first = std::collections::BTreeMap::new();
    for i in 0..n {
        first.entry((p[i], q[i])).or_insert(i);
    }
    (0..n).map(|i| first[&(p[i], q[i])]).collect()
}

/// Finest common coarsening: transitive closure of the union.
pub fn join(p: &Partition, q: &Partition) -> Partition {
    let n = p.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        uf.union(i, p[i]);
        uf.union(i, q[i]);
    }
    uf.min_encoding()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts_are_bell_numbers() {
        assert_eq!(enumerate_partitions(1).len(), 1);
        assert_eq!(enumerate_partitions(2).len(), 2);
        assert_eq!(enumerate_partitions(3).len(), 5);
        assert_eq!(enumerate_partitions(4).len(), 15);
        assert_eq!(enumerate_partitions(5).len(), 52);
    }

    #[test]
    fn enumeration_is_sorted_and_canonical() {
        let all = enumerate_partitions(4);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert!(all.iter().all(is_canonical));
    }

    #[test]
    fn lattice_operations() {
        let a = vec![0, 0, 2, 2];
        let b = vec![0, 1, 1, 3];
        assert_eq!(meet(&a, &b), discrete(4));
        assert_eq!(join(&a, &b), vec![0, 0, 0, 0]);
        assert!(refines(&discrete(4), &a));
        assert!(refines(&a, &join(&a, &b)));
        assert!(!refines(&a, &b));
        assert_eq!(join(&a, &a), a);
        assert_eq!(meet(&a, &a), a);
    }
}
