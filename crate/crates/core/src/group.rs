//! Small finite groups given by a Cayley table.

/// `table[a][b]` is the index of `a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl CayleyTable {
    /// Builds the table of a finite set of elements under `mul`. Returns
    /// `None` if the set is not closed, has no identity, or lacks inverses.
    pub fn from_elements<T>(elems: &[T], mul: impl Fn(&T, &T) -> T, eq: impl Fn(&T, &T) -> bool) -> Option<Self> {
        let find = |x: &T| elems.iter().position(|e| eq(e, x));
        let mut table = Vec::with_capacity(elems.len());
        for a in elems {
            let row: Option<Vec<usize>> = elems.iter().map(|b| find(&mul(a, b))).collect();
            table.push(row?);
        }
        Self::from_table(table)
    }

    pub fn from_table(table: Vec<Vec<usize>>) -> Option<Self> {
        let n = table.len();
        let identity = (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))?;
        let t = CayleyTable { table, identity };
        (0..n).all(|a| t.inverse(a).is_some()).then_some(t)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.order()).find(|&b| self.table[a][b] == self.identity)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        let n = self.order();
        (0..n).filter(|&a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    /// Greedy generating set: scans elements in index order and keeps any
    /// element not yet in the generated subgroup.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        for a in 0..self.order() {
            if !span.contains(&a) {
                gens.push(a);
                span = self.generated(&gens);
            }
        }
        gens
    }

    /// Order 8 with an element `a` of order 4 and an involution `b` outside
    /// `<a>` such that `b a b^-1 = a^-1`.
    pub fn is_dihedral_8(&self) -> bool {
        if self.order() != 8 {
            return false;
        }
        let n = self.order();
        (0..n).filter(|&a| self.element_order(a) == 4).any(|a| {
            let cyc = self.generated(&[a]);
            let ainv = self.inverse(a).unwrap();
            (0..n).filter(|b| !cyc.contains(b) && self.element_order(*b) == 2).any(|b| {
                let binv = self.inverse(b).unwrap();
                self.mul(self.mul(b, a), binv) == ainv
            })
        })
    }

    /// Number of elements of each order, as `(order, count)` increasing.
    pub fn order_statistics(&self) -> Vec<(usize, usize)> {
        let mut m = std::collections::BTreeMap::new();
        for a in 0..self.order() {
            *m.entry(self.element_order(a)).or_insert(0) += 1;
        }
        m.into_iter().collect()
    }
}

/// Permutations compose as functions: `(p ∘ q)[i] = p[q[i]]`.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}
