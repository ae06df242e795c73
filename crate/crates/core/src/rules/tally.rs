//! Additive sufficient statistics for each rule family.
//!
//! Every rule is anonymous and additive in ballot weight, so a complete
//! profile can be summarised by a vector that grows by one contribution per
//! ballot. Two completions with equal statistics have equal outcomes, which
//! lets completion search deduplicate states.

use crate::error::{add_weight, mul_weight, Result};
use crate::profile::Candidate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum StatKind {
    Scores,
    Pairwise,
    Runoff,
    Orders,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Stat {
    Scores(Vec<u64>),
    /// `upper[pair_index(i, j)]` for `i < j` is the weight preferring `i` to `j`.
    Pairwise {
        total: u64,
        upper: Vec<u64>,
    },
    /// First-place weights plus pairwise tallies.
    Runoff {
        total: u64,
        firsts: Vec<u64>,
        upper: Vec<u64>,
    },
    /// Distinct orders with their total weight, sorted by order.
    Orders {
        total: u64,
        orders: Vec<(Vec<u8>, u64)>,
    },
}

pub(crate) fn pair_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

fn add_pairs(upper: &mut [u64], m: usize, order: &[Candidate], w: u64) -> Result<()> {
    for (x, a) in order.iter().enumerate() {
        for b in &order[x + 1..] {
            if a.0 < b.0 {
                let cell = &mut upper[pair_index(m, a.0, b.0)];
                *cell = add_weight(*cell, w)?;
            }
        }
    }
    Ok(())
}

impl Stat {
    pub fn empty(kind: StatKind, m: usize) -> Stat {
        let pairs = m * m.saturating_sub(1) / 2;
        match kind {
            StatKind::Scores => Stat::Scores(vec![0; m]),
            StatKind::Pairwise => Stat::Pairwise {
                total: 0,
                upper: vec![0; pairs],
            },
            StatKind::Runoff => Stat::Runoff {
                total: 0,
                firsts: vec![0; m],
                upper: vec![0; pairs],
            },
            StatKind::Orders => Stat::Orders {
                total: 0,
                orders: Vec::new(),
            },
        }
    }

    /// Adds one ballot. `scoring` is only consulted for `Scores`.
    pub fn add(&mut self, scoring: &[u64], order: &[Candidate], w: u64) -> Result<()> {
        let m = order.len();
        match self {
            Stat::Scores(scores) => {
                for (pos, c) in order.iter().enumerate() {
                    scores[c.0] = add_weight(scores[c.0], mul_weight(scoring[pos], w)?)?;
                }
            }
            Stat::Pairwise { total, upper } => {
                *total = add_weight(*total, w)?;
                add_pairs(upper, m, order, w)?;
            }
            Stat::Runoff {
                total,
                firsts,
                upper,
            } => {
                *total = add_weight(*total, w)?;
                firsts[order[0].0] = add_weight(firsts[order[0].0], w)?;
                add_pairs(upper, m, order, w)?;
            }
            Stat::Orders { total, orders } => {
                *total = add_weight(*total, w)?;
                let key: Vec<u8> = order.iter().map(|c| c.0 as u8).collect();
                match orders.binary_search_by(|(k, _)| k.as_slice().cmp(&key)) {
                    Ok(i) => orders[i].1 = add_weight(orders[i].1, w)?,
                    Err(i) => orders.insert(i, (key, w)),
                }
            }
        }
        Ok(())
    }

    /// Adds another statistic of the same kind.
    pub fn absorb(&mut self, other: &Stat) -> Result<()> {
        fn sum(into: &mut [u64], from: &[u64]) -> Result<()> {
            for (a, b) in into.iter_mut().zip(from) {
                *a = add_weight(*a, *b)?;
            }
            Ok(())
        }
        match (self, other) {
            (Stat::Scores(a), Stat::Scores(b)) => sum(a, b),
            (Stat::Pairwise { total, upper }, Stat::Pairwise { total: t, upper: u }) => {
                *total = add_weight(*total, *t)?;
                sum(upper, u)
            }
            (
                Stat::Runoff {
                    total,
                    firsts,
                    upper,
                },
                Stat::Runoff {
                    total: t,
                    firsts: f,
                    upper: u,
                },
            ) => {
                *total = add_weight(*total, *t)?;
                sum(firsts, f)?;
                sum(upper, u)
            }
            (
                Stat::Orders { total, orders },
                Stat::Orders {
                    total: t,
                    orders: o,
                },
            ) => {
                *total = add_weight(*total, *t)?;
                for (key, w) in o {
                    match orders.binary_search_by(|(k, _)| k.cmp(key)) {
                        Ok(i) => orders[i].1 = add_weight(orders[i].1, *w)?,
                        Err(i) => orders.insert(i, (key.clone(), *w)),
                    }
                }
                Ok(())
            }
            _ => unreachable!("statistics of different kinds"),
        }
    }

    /// A key that is equal for two partial sums whenever every completion
    /// adding `remaining` more weight (to a final total of `total`) leads to
    /// the same outcome. Pairwise tallies whose sign can no longer change are
    /// collapsed.
    pub fn canonical(&self, final_total: u64, remaining: u64) -> Stat {
        let t = final_total as u128;
        let clamp = |upper: &[u64]| -> Vec<u64> {
            upper
                .iter()
                .map(|&x| {
                    if 2 * x as u128 > t {
                        u64::MAX
                    } else if 2 * (x as u128 + remaining as u128) < t {
                        u64::MAX - 1
                    } else {
                        x
                    }
                })
                .collect()
        };
        match self {
            Stat::Pairwise { total, upper } => Stat::Pairwise {
                total: *total,
                upper: clamp(upper),
            },
            Stat::Runoff {
                total,
                firsts,
                upper,
            } => Stat::Runoff {
                total: *total,
                firsts: firsts.clone(),
                upper: clamp(upper),
            },
            other => other.clone(),
        }
    }
}

/// Pairwise view over a complete profile's tallies.
pub(crate) struct Pairwise<'a> {
    m: usize,
    total: u64,
    upper: &'a [u64],
}

impl<'a> Pairwise<'a> {
    pub fn new(m: usize, total: u64, upper: &'a [u64]) -> Self {
        Pairwise { m, total, upper }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Weight preferring `a` to `b`.
    pub fn n(&self, a: Candidate, b: Candidate) -> u64 {
        use std::cmp::Ordering::*;
        match a.0.cmp(&b.0) {
            Less => self.upper[pair_index(self.m, a.0, b.0)],
            Greater => self.total - self.upper[pair_index(self.m, b.0, a.0)],
            Equal => 0,
        }
    }

    /// `Greater` if `a` has a strict weighted majority over `b`, `Equal` on
    /// an exact half.
    pub fn contest(&self, a: Candidate, b: Candidate) -> std::cmp::Ordering {
        (2 * self.n(a, b) as u128).cmp(&(self.total as u128))
    }
}
