//! Union-find and the finite quotient sets it produces.

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if the two classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Freezes the partition. Classes are numbered by their smallest member,
    /// so the numbering does not depend on the order of the unions.
    pub fn into_quotient(mut self) -> QuotientSet {
        let n = self.len();
        let mut root_class = vec![usize::MAX; n];
        let mut class_of = Vec::with_capacity(n);
        let mut members: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if root_class[r] == usize::MAX {
                root_class[r] = members.len();
                members.push(Vec::new());
            }
            class_of.push(root_class[r]);
            members[root_class[r]].push(x);
        }
        QuotientSet { class_of, members }
    }
}

/// A partition of `0..n` into classes with deterministic numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSet {
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl QuotientSet {
    pub fn class_count(&self) -> usize {
        self.members.len()
    }

    pub fn element_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// Smallest member of the class.
    pub fn representative(&self, class: usize) -> usize {
        self.members[class][0]
    }

    pub fn members(&self, class: usize) -> &[usize] {
        &self.members[class]
    }

    pub fn classes(&self) -> impl Iterator<Item = &[usize]> {
        self.members.iter().map(Vec::as_slice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_numbered_by_smallest_member() {
        let mut uf = UnionFind::new(6);
        uf.union(5, 3);
        uf.union(4, 1);
        uf.union(3, 1);
        let q = uf.into_quotient();
        assert_eq!(q.class_count(), 3);
        assert_eq!(q.members(0), &[0]);
        assert_eq!(q.members(1), &[1, 3, 4, 5]);
        assert_eq!(q.members(2), &[2]);
        assert_eq!(q.class_of(5), 1);
        assert_eq!(q.representative(1), 1);
    }

    #[test]
    fn union_reports_merges() {
        let mut uf = UnionFind::new(3);
        assert!(uf.union(0, 1));
        assert!(!uf.union(1, 0));
        assert_eq!(uf.find(0), uf.find(1));
    }
}
