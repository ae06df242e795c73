//! Completions of partial ballots: linear extensions, optionally restricted
//! to orders that are single-peaked along an axis.

use std::collections::HashMap;

use super::{Axis, Candidate, PartialBallot, Relation};
use crate::error::{Error, Result};

/// Depth-first enumeration of the linear extensions of a relation, in
/// lexicographic order of the candidate sequences.
#[derive(Clone, Debug)]
pub struct LinearExtensions {
    above: Vec<u64>,
    prefix: Vec<Candidate>,
    placed: u64,
    next: Vec<usize>,
    done: bool,
}

impl LinearExtensions {
    pub(crate) fn new(rel: &Relation) -> Self {
        let m = rel.len();
        LinearExtensions {
            above: (0..m).map(|b| rel.above(Candidate(b))).collect(),
            prefix: Vec::with_capacity(m),
            placed: 0,
            next: vec![0; m + 1],
            done: m == 0,
        }
    }

    fn pop(&mut self) {
        if let Some(c) = self.prefix.pop() {
            self.placed &= !(1 << c.0);
        }
    }
}

impl Iterator for LinearExtensions {
    type Item = Vec<Candidate>;

    fn next(&mut self) -> Option<Vec<Candidate>> {
        let m = self.above.len();
        loop {
            if self.done {
                return None;
            }
            let depth = self.prefix.len();
            if depth == m {
                let out = self.prefix.clone();
                self.pop();
                return Some(out);
            }
            let found = (self.next[depth]..m)
                .find(|&c| self.placed >> c & 1 == 0 && self.above[c] & !self.placed == 0);
            match found {
                Some(c) => {
                    self.next[depth] = c + 1;
                    self.next[depth + 1] = 0;
                    self.prefix.push(Candidate(c));
                    self.placed |= 1 << c;
                }
                None if depth == 0 => self.done = true,
                None => self.pop(),
            }
        }
    }
}

/// Number of linear extensions, by dynamic programming over the set of
/// already-placed candidates. Saturates at `u128::MAX`.
pub(crate) fn count_extensions(rel: &Relation) -> u128 {
    fn go(placed: u64, full: u64, above: &[u64], memo: &mut HashMap<u64, u128>) -> u128 {
        if placed == full {
            return 1;
        }
        if let Some(&n) = memo.get(&placed) {
            return n;
        }
        let mut total: u128 = 0;
        for (c, &ab) in above.iter().enumerate() {
            if placed >> c & 1 == 0 && ab & !placed == 0 {
                total = total.saturating_add(go(placed | 1 << c, full, above, memo));
            }
        }
        memo.insert(placed, total);
        total
    }
    let m = rel.len();
    let above: Vec<u64> = (0..m).map(|b| rel.above(Candidate(b))).collect();
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    go(0, full, &above, &mut HashMap::new())
}

pub fn count_linear_extensions(ballot: &PartialBallot) -> u128 {
    count_extensions(ballot.relation())
}

pub(crate) fn extensions_of(rel: &Relation, cap: u64) -> Result<LinearExtensions> {
    if count_extensions(rel) > cap as u128 {
        return Err(Error::CapExceeded { cap });
    }
    Ok(LinearExtensions::new(rel))
}

/// Every completion of `ballot`, or `CapExceeded` if there are more than `cap`.
pub fn linear_extensions(ballot: &PartialBallot, cap: u64) -> Result<LinearExtensions> {
    extensions_of(ballot.relation(), cap)
}

/// True iff every top segment of `order` is a contiguous interval of the axis.
pub fn is_single_peaked(order: &[Candidate], axis: &Axis) -> bool {
    let Some(&peak) = order.first() else {
        return true;
    };
    if order.len() != axis.len() {
        return false;
    }
    let p = axis.position(peak);
    let (mut lo, mut hi) = (p, p);
    for &c in &order[1..] {
        let q = axis.position(c);
        if lo > 0 && q == lo - 1 {
            lo -= 1;
        } else if q == hi + 1 {
            hi += 1;
        } else {
            return false;
        }
    }
    true
}

pub(crate) fn sp_extensions_of(rel: &Relation, axis: &Axis) -> Vec<Vec<Candidate>> {
    // grow an interval around each possible peak, placing a candidate only
    // once everything it must follow has been placed
    fn grow(
        lo: usize,
        hi: usize,
        placed: u64,
        prefix: &mut Vec<Candidate>,
        axis: &Axis,
        above: &[u64],
        out: &mut Vec<Vec<Candidate>>,
    ) {
        let n = axis.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let mut step = |pos: usize, lo: usize, hi: usize, prefix: &mut Vec<Candidate>| {
            let c = axis.order()[pos];
            if above[c.0] & !placed == 0 {
                prefix.push(c);
                grow(lo, hi, placed | 1 << c.0, prefix, axis, above, out);
                prefix.pop();
            }
        };
        if lo > 0 {
            step(lo - 1, lo - 1, hi, prefix);
        }
        if hi + 1 < n {
            step(hi + 1, lo, hi + 1, prefix);
        }
    }
    let m = rel.len();
    let above: Vec<u64> = (0..m).map(|b| rel.above(Candidate(b))).collect();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(m);
    for pos in 0..axis.len() {
        let peak = axis.order()[pos];
        if above[peak.0] == 0 {
            prefix.push(peak);
            grow(pos, pos, 1 << peak.0, &mut prefix, axis, &above, &mut out);
            prefix.pop();
        }
    }
    out.sort();
    out
}

/// Number of single-peaked completions. The placed set is always an axis
/// interval, so this is a dynamic program over intervals.
pub(crate) fn count_sp_extensions(rel: &Relation, axis: &Axis) -> u128 {
    let n = axis.len();
    let above: Vec<u64> = (0..rel.len()).map(|b| rel.above(Candidate(b))).collect();
    let mask = |lo: usize, hi: usize| -> u64 {
        axis.order()[lo..=hi]
            .iter()
            .fold(0, |acc, c| acc | 1 << c.0)
    };
    // ways[lo][hi]: number of ways to finish once exactly [lo, hi] is placed
    let mut ways = vec![vec![0u128; n]; n];
    for len in (1..=n).rev() {
        for lo in 0..=n - len {
            let hi = lo + len - 1;
            if len == n {
                ways[lo][hi] = 1;
                continue;
            }
            let placed = mask(lo, hi);
            let mut w: u128 = 0;
            if lo > 0 && above[axis.order()[lo - 1].0] & !placed == 0 {
                w = w.saturating_add(ways[lo - 1][hi]);
            }
            if hi + 1 < n && above[axis.order()[hi + 1].0] & !placed == 0 {
                w = w.saturating_add(ways[lo][hi + 1]);
            }
            ways[lo][hi] = w;
        }
    }
    (0..n)
        .filter(|&p| above[axis.order()[p].0] == 0)
        .fold(0u128, |acc, p| acc.saturating_add(ways[p][p]))
}

/// The completions of `ballot` that are single-peaked along `axis`, in
/// lexicographic order. There are at most `2^(m-1)` of them.
pub fn single_peaked_extensions(
    ballot: &PartialBallot,
    axis: &Axis,
    cap: u64,
) -> Result<std::vec::IntoIter<Vec<Candidate>>> {
    if axis.len() != ballot.num_candidates() {
        return Err(Error::InvalidProfile(
            "axis and ballot disagree on candidates".into(),
        ));
    }
    if count_sp_extensions(ballot.relation(), axis) > cap as u128 {
        return Err(Error::CapExceeded { cap });
    }
    Ok(sp_extensions_of(ballot.relation(), axis).into_iter())
}
