//! Outcome computation from rule statistics.
//!
//! Each rule yields a [`Decision`]: the set of candidates that win under
//! some way of resolving the rule's internal ties, and the winner when every
//! tie goes to the lowest candidate index. Favoring or opposing a candidate
//! is then a lookup in the set, which is the same as searching over every
//! tie resolution for the best or worst one.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::tally::{Pairwise, Stat};
use super::{AgendaTree, Pairing, Rule, TieBreak};
use crate::error::{Error, Result};
use crate::profile::{Candidate, CandidateSet};

/// Reachable states allowed when branching on elimination ties.
pub(crate) const TIE_BRANCH_LIMIT: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decision {
    pub outcomes: CandidateSet,
    pub lexicographic: Candidate,
}

impl Decision {
    fn single(c: Candidate) -> Self {
        Decision {
            outcomes: CandidateSet::singleton(c),
            lexicographic: c,
        }
    }

    pub fn winner(&self, tb: TieBreak) -> Candidate {
        match tb {
            TieBreak::Lexicographic => self.lexicographic,
            TieBreak::Favor(c) if self.outcomes.contains(c) => c,
            TieBreak::Favor(_) => self.lexicographic,
            TieBreak::Against(c) if self.lexicographic != c => self.lexicographic,
            TieBreak::Against(c) => {
                let mut rest = self.outcomes;
                rest.remove(c);
                rest.first().unwrap_or(c)
            }
        }
    }
}

fn argmax<T: Ord + Copy>(values: impl Iterator<Item = (Candidate, T)>) -> Decision {
    let mut best: Option<T> = None;
    let mut set = CandidateSet::empty();
    for (c, v) in values {
        match best.map(|b| v.cmp(&b)) {
            None | Some(Ordering::Greater) => {
                best = Some(v);
                set = CandidateSet::singleton(c);
            }
            Some(Ordering::Equal) => set.insert(c),
            Some(Ordering::Less) => {}
        }
    }
    Decision {
        outcomes: set,
        lexicographic: set.first().expect("no candidates"),
    }
}

fn pairwise_view(stat: &Stat, m: usize) -> Pairwise<'_> {
    match stat {
        Stat::Pairwise { total, upper } | Stat::Runoff { total, upper, .. } => {
            Pairwise::new(m, *total, upper)
        }
        _ => unreachable!("rule needs pairwise tallies"),
    }
}

pub(crate) fn decide(rule: &Rule, stat: &Stat, m: usize) -> Result<Decision> {
    if m == 1 {
        return Ok(Decision::single(Candidate(0)));
    }
    match rule {
        Rule::Scoring(_) => {
            let Stat::Scores(scores) = stat else {
                unreachable!()
            };
            Ok(argmax(
                scores.iter().enumerate().map(|(i, &s)| (Candidate(i), s)),
            ))
        }
        Rule::Cup(agenda) => Ok(cup(agenda, &pairwise_view(stat, m))),
        Rule::Copeland => {
            let pw = pairwise_view(stat, m);
            let scores = copeland_scores(&pw, m);
            Ok(argmax(
                scores.iter().enumerate().map(|(i, &s)| (Candidate(i), s)),
            ))
        }
        Rule::Copeland2 => Ok(copeland2(&pairwise_view(stat, m), m)),
        Rule::PluralityRunoff => {
            let Stat::Runoff { firsts, .. } = stat else {
                unreachable!()
            };
            Ok(runoff(firsts, &pairwise_view(stat, m)))
        }
        Rule::Stv => {
            let Stat::Orders { total, orders } = stat else {
                unreachable!()
            };
            stv(orders, *total, m)
        }
        Rule::Hybrid(pairing) => {
            let Stat::Orders { total, orders } = stat else {
                unreachable!()
            };
            hybrid(pairing, orders, *total, m)
        }
    }
}

fn cup(tree: &AgendaTree, pw: &Pairwise) -> Decision {
    match tree {
        AgendaTree::Leaf(c) => Decision::single(*c),
        AgendaTree::Match(l, r) => {
            let left = cup(l, pw);
            let right = cup(r, pw);
            let mut outcomes = CandidateSet::empty();
            for x in left.outcomes.iter() {
                for y in right.outcomes.iter() {
                    match pw.contest(x, y) {
                        Ordering::Greater => outcomes.insert(x),
                        Ordering::Less => outcomes.insert(y),
                        Ordering::Equal => {
                            outcomes.insert(x);
                            outcomes.insert(y);
                        }
                    }
                }
            }
            let (a, b) = (left.lexicographic, right.lexicographic);
            let lexicographic = match pw.contest(a, b) {
                Ordering::Greater => a,
                Ordering::Less => b,
                Ordering::Equal => a.min(b),
            };
            Decision {
                outcomes,
                lexicographic,
            }
        }
    }
}

pub(crate) fn copeland_scores(pw: &Pairwise, m: usize) -> Vec<i64> {
    (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i)
                .map(|j| match pw.contest(Candidate(i), Candidate(j)) {
                    Ordering::Greater => 1,
                    Ordering::Less => -1,
                    Ordering::Equal => 0,
                })
                .sum()
        })
        .collect()
}

fn copeland2(pw: &Pairwise, m: usize) -> Decision {
    let scores = copeland_scores(pw, m);
    let top = argmax(scores.iter().enumerate().map(|(i, &s)| (Candidate(i), s)));
    argmax(top.outcomes.iter().map(|c| {
        let defeated: i64 = (0..m)
            .filter(|&j| pw.contest(c, Candidate(j)) == Ordering::Greater)
            .map(|j| scores[j])
            .sum();
        (c, defeated)
    }))
}

fn majority_of(pw: &Pairwise, a: Candidate, b: Candidate) -> Decision {
    match pw.contest(a, b) {
        Ordering::Greater => Decision::single(a),
        Ordering::Less => Decision::single(b),
        Ordering::Equal => Decision {
            outcomes: [a, b].into_iter().collect(),
            lexicographic: a.min(b),
        },
    }
}

fn runoff(firsts: &[u64], pw: &Pairwise) -> Decision {
    let total = pw.total() as u128;
    if let Some(c) = (0..firsts.len()).find(|&c| 2 * firsts[c] as u128 > total) {
        return Decision::single(Candidate(c));
    }
    let mut ranked: Vec<usize> = (0..firsts.len()).collect();
    ranked.sort_by_key(|&c| (std::cmp::Reverse(firsts[c]), c));
    let lex = majority_of(pw, Candidate(ranked[0]), Candidate(ranked[1])).lexicographic;

    // every admissible choice of the two finalists
    let top = firsts[ranked[0]];
    let leaders: Vec<usize> = ranked
        .iter()
        .copied()
        .filter(|&c| firsts[c] == top)
        .collect();
    let mut finals = Vec::new();
    if leaders.len() >= 2 {
        for (i, &a) in leaders.iter().enumerate() {
            for &b in &leaders[i + 1..] {
                finals.push((a, b));
            }
        }
    } else {
        let second = firsts[ranked[1]];
        for &b in ranked[1..].iter().filter(|&&c| firsts[c] == second) {
            finals.push((ranked[0], b));
        }
    }
    let outcomes = finals
        .into_iter()
        .map(|(a, b)| majority_of(pw, Candidate(a), Candidate(b)).outcomes)
        .fold(CandidateSet::empty(), CandidateSet::union);
    Decision {
        outcomes,
        lexicographic: lex,
    }
}

/// First-place weight of each candidate in `remaining`.
fn firsts_among(orders: &[(Vec<u8>, u64)], remaining: u64, m: usize) -> Vec<u64> {
    let mut firsts = vec![0u64; m];
    for (order, w) in orders {
        if let Some(&c) = order.iter().find(|&&c| remaining >> c & 1 == 1) {
            firsts[c as usize] += w;
        }
    }
    firsts
}

enum Round {
    Elected(Candidate),
    /// Candidates tied for elimination.
    Eliminate(Vec<Candidate>),
}

fn stv_round(orders: &[(Vec<u8>, u64)], total: u64, remaining: u64, m: usize) -> Round {
    if remaining.count_ones() == 1 {
        return Round::Elected(Candidate(remaining.trailing_zeros() as usize));
    }
    let firsts = firsts_among(orders, remaining, m);
    let alive = (0..m).filter(|&c| remaining >> c & 1 == 1);
    if let Some(c) = alive
        .clone()
        .find(|&c| 2 * firsts[c] as u128 > total as u128)
    {
        return Round::Elected(Candidate(c));
    }
    let low = alive.clone().map(|c| firsts[c]).min().unwrap_or(0);
    Round::Eliminate(alive.filter(|&c| firsts[c] == low).map(Candidate).collect())
}

fn stv(orders: &[(Vec<u8>, u64)], total: u64, m: usize) -> Result<Decision> {
    fn explore(
        orders: &[(Vec<u8>, u64)],
        total: u64,
        m: usize,
        remaining: u64,
        memo: &mut HashMap<u64, CandidateSet>,
    ) -> Result<CandidateSet> {
        if let Some(s) = memo.get(&remaining) {
            return Ok(*s);
        }
        if memo.len() >= TIE_BRANCH_LIMIT {
            return Err(Error::TieBranchLimit(TIE_BRANCH_LIMIT));
        }
        let set = match stv_round(orders, total, remaining, m) {
            Round::Elected(c) => CandidateSet::singleton(c),
            Round::Eliminate(tied) => {
                let mut set = CandidateSet::empty();
                for c in tied {
                    set = set.union(explore(orders, total, m, remaining & !(1 << c.0), memo)?);
                }
                set
            }
        };
        memo.insert(remaining, set);
        Ok(set)
    }

    let all = CandidateSet::all(m).0;
    let mut remaining = all;
    let lexicographic = loop {
        match stv_round(orders, total, remaining, m) {
            Round::Elected(c) => break c,
            Round::Eliminate(tied) => {
                let loser = tied.iter().max().expect("nonempty tie");
                remaining &= !(1 << loser.0);
            }
        }
    };
    let outcomes = explore(orders, total, m, all, &mut HashMap::new())?;
    Ok(Decision {
        outcomes,
        lexicographic,
    })
}

fn hybrid(pairing: &Pairing, orders: &[(Vec<u8>, u64)], total: u64, m: usize) -> Result<Decision> {
    let n = |a: Candidate, b: Candidate| -> u64 {
        orders
            .iter()
            .filter(|(o, _)| {
                let pa = o.iter().position(|&c| c as usize == a.0);
                let pb = o.iter().position(|&c| c as usize == b.0);
                pa < pb
            })
            .map(|(_, w)| w)
            .sum()
    };
    // possible survivors of each pre-round match
    let mut options: Vec<Vec<Candidate>> = Vec::new();
    let mut lex_survivors = 0u64;
    for &(a, b) in &pairing.pairs {
        match (2 * n(a, b) as u128).cmp(&(total as u128)) {
            Ordering::Greater => options.push(vec![a]),
            Ordering::Less => options.push(vec![b]),
            Ordering::Equal => options.push(vec![a, b]),
        }
        lex_survivors |= 1 << options.last().unwrap().iter().min().unwrap().0;
    }
    let base = pairing.bye.map_or(0, |c| 1u64 << c.0);
    let branches: usize = options.iter().filter(|o| o.len() > 1).count();
    if branches >= 20 {
        return Err(Error::TieBranchLimit(1 << branches));
    }

    let plurality = |survivors: u64| -> Decision {
        let firsts = firsts_among(orders, survivors, m);
        argmax(
            (0..m)
                .filter(|&c| survivors >> c & 1 == 1)
                .map(|c| (Candidate(c), firsts[c])),
        )
    };
    let lexicographic = plurality(base | lex_survivors).lexicographic;
    let mut outcomes = CandidateSet::empty();
    let mut stack = vec![(0usize, base)];
    while let Some((i, survivors)) = stack.pop() {
        if i == options.len() {
            outcomes = outcomes.union(plurality(survivors).outcomes);
            continue;
        }
        for c in &options[i] {
            stack.push((i + 1, survivors | 1 << c.0));
        }
    }
    Ok(Decision {
        outcomes,
        lexicographic,
    })
}
