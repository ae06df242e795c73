//! Strict preference relations over at most 64 candidates, stored as one
//! bitmask row per candidate: bit `b` of `rows[a]` is set when `a` is
//! preferred to `b`.

use super::Candidate;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Relation {
    rows: Vec<u64>,
}

impl Relation {
    pub fn empty(m: usize) -> Self {
        Relation { rows: vec![0; m] }
    }

    /// Transitive closure of the given pairs. Returns `None` if the closure
    /// contains a cycle.
    pub fn closure_of(m: usize, pairs: &[(Candidate, Candidate)]) -> Option<Self> {
        let mut rel = Relation::empty(m);
        for &(a, b) in pairs {
            rel.rows[a.0] |= 1 << b.0;
        }
        rel.close();
        rel.is_acyclic().then_some(rel)
    }

    pub fn from_order(order: &[Candidate]) -> Self {
        let mut rel = Relation::empty(order.len());
        let mut below = 0u64;
        for c in order.iter().rev() {
            rel.rows[c.0] = below;
            below |= 1 << c.0;
        }
        rel
    }

    fn close(&mut self) {
        let m = self.rows.len();
        for k in 0..m {
            let row_k = self.rows[k];
            for i in 0..m {
                if self.rows[i] >> k & 1 == 1 {
                    self.rows[i] |= row_k;
                }
            }
        }
    }

    fn is_acyclic(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r >> i & 1 == 0)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn prefers(&self, a: Candidate, b: Candidate) -> bool {
        self.rows[a.0] >> b.0 & 1 == 1
    }

    /// Candidates ranked above `b`.
    pub fn above(&self, b: Candidate) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| *r >> b.0 & 1 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn is_total(&self) -> bool {
        let m = self.rows.len();
        self.pair_count() == m * (m.saturating_sub(1)) / 2
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// The total order of a total relation, most preferred first.
    pub fn as_order(&self) -> Option<Vec<Candidate>> {
        if !self.is_total() {
            return None;
        }
        let mut order: Vec<Candidate> = (0..self.rows.len()).map(Candidate).collect();
        order.sort_by_key(|c| std::cmp::Reverse(self.rows[c.0].count_ones()));
        Some(order)
    }

    pub fn pairs(&self) -> Vec<(Candidate, Candidate)> {
        let m = self.rows.len();
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if self.rows[a] >> b & 1 == 1 {
                    out.push((Candidate(a), Candidate(b)));
                }
            }
        }
        out
    }

    /// Covering pairs of the relation (its transitive reduction). The closure
    /// of the result is the relation itself.
    pub fn covering_pairs(&self) -> Vec<(Candidate, Candidate)> {
        self.pairs()
            .into_iter()
            .filter(|&(a, b)| {
                // a > b is implied if some c sits strictly between them
                self.rows[a.0] & self.above(b) == 0
            })
            .collect()
    }

    /// Whether `order` (a permutation) is an extension of this relation.
    pub fn admits(&self, order: &[Candidate]) -> bool {
        let mut placed = 0u64;
        for c in order {
            if self.above(*c) & !placed != 0 {
                return false;
            }
            placed |= 1 << c.0;
        }
        true
    }
}
