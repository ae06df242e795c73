//! Depth-first search over joint completions of an incomplete profile.
//!
//! Each undetermined ballot becomes a slot with a list of admissible total
//! orders. Slots are visited heaviest first. Partial sums of the rule's
//! statistic are memoized per depth, so the cap bounds the number of distinct
//! states visited rather than the number of raw completions.

use std::collections::{HashMap, HashSet};

use crate::error::{add_weight, Error, Result};
use crate::profile::{
    extensions_of, sp_extensions_of, Axis, Ballot, Candidate, CandidateSet, LinearExtensions,
    PartialBallot, Profile, Relation, WeightedBallot,
};
use crate::rules::{Evaluator, Stat};

/// Default limit on distinct search states.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Where a slot's ballot came from in the profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Source {
    Ballot(usize),
    Unknown(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Slot {
    pub source: Source,
    pub weight: u64,
    pub options: Vec<Vec<Candidate>>,
}

/// Which total orders a free ballot may take.
#[derive(Clone, Copy)]
pub(crate) enum Domain<'a> {
    Any,
    SinglePeaked(&'a Axis),
}

impl Domain<'_> {
    pub fn completions(&self, rel: &Relation, cap: u64) -> Result<Vec<Vec<Candidate>>> {
        let orders: Vec<_> = match self {
            Domain::Any => extensions_of(rel, cap)?.collect(),
            Domain::SinglePeaked(axis) => sp_extensions_of(rel, axis),
        };
        if orders.len() as u64 > cap {
            return Err(Error::CapExceeded { cap });
        }
        Ok(orders)
    }
}

pub(crate) fn all_orders(m: usize) -> impl Iterator<Item = Vec<Candidate>> {
    LinearExtensions::new(&Relation::empty(m))
}

/// Splits a profile into fixed ballots and free slots. `relation_of` picks
/// the constraint each partial ballot must respect.
pub(crate) fn split_profile(
    profile: &Profile,
    domain: Domain,
    cap: u64,
    relation_of: impl Fn(&PartialBallot) -> Relation,
) -> Result<(Vec<WeightedBallot>, Vec<Slot>)> {
    let m = profile.num_candidates();
    let mut fixed = Vec::new();
    let mut slots = Vec::new();
    let mut cache: HashMap<Relation, Vec<Vec<Candidate>>> = HashMap::new();
    let mut options = |rel: Relation| -> Result<Vec<Vec<Candidate>>> {
        if let Some(o) = cache.get(&rel) {
            return Ok(o.clone());
        }
        let o = domain.completions(&rel, cap)?;
        cache.insert(rel, o.clone());
        Ok(o)
    };
    for (i, ballot) in profile.ballots().iter().enumerate() {
        match ballot {
            Ballot::Complete(b) => fixed.push(b.clone()),
            Ballot::Partial(p) => {
                let rel = relation_of(p);
                if rel.is_total() {
                    let order = rel.as_order().expect("total relation");
                    fixed.push(WeightedBallot::new(order, p.weight())?);
                } else {
                    let options = options(rel)?;
                    slots.push(Slot {
                        source: Source::Ballot(i),
                        weight: p.weight(),
                        options,
                    });
                }
            }
        }
    }
    for (j, &w) in profile.unknown_blocks().iter().enumerate() {
        let options = options(Relation::empty(m))?;
        slots.push(Slot {
            source: Source::Unknown(j),
            weight: w,
            options,
        });
    }
    Ok((fixed, slots))
}

/// When the search may stop early.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Stop {
    /// Explore everything (or until every candidate has been seen).
    Exhaust,
    /// Stop once two different possible winners are known.
    TwoWinners,
    /// Stop at the first completion under which this candidate can win.
    Reach(Candidate),
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Found {
    pub outcomes: CandidateSet,
    /// The completion that reached the target, one order per slot.
    pub witness: Option<Vec<(Source, Vec<Candidate>)>>,
    pub states: u64,
}

pub(crate) struct Search<'a> {
    ev: Evaluator<'a>,
    base: Stat,
    slots: Vec<Slot>,
    /// Per slot: distinct statistic contributions with a representative option.
    deltas: Vec<Vec<(Stat, usize)>>,
    /// Weight still free after each depth.
    remaining: Vec<u64>,
    total: u64,
    cap: u64,
}

impl<'a> Search<'a> {
    pub fn new(
        ev: Evaluator<'a>,
        fixed: &[WeightedBallot],
        mut slots: Vec<Slot>,
        cap: u64,
    ) -> Result<Self> {
        let base = ev.stat_of(fixed)?;
        slots.sort_by(|a, b| b.weight.cmp(&a.weight).then(a.source.cmp(&b.source)));
        let mut total = fixed
            .iter()
            .try_fold(0, |acc, b| add_weight(acc, b.weight()))?;
        for s in &slots {
            total = add_weight(total, s.weight)?;
        }
        let mut remaining = Vec::with_capacity(slots.len() + 1);
        let mut left = total - fixed.iter().map(|b| b.weight()).sum::<u64>();
        remaining.push(left);
        for s in &slots {
            left -= s.weight;
            remaining.push(left);
        }
        let mut search = Search {
            ev,
            base,
            slots,
            deltas: Vec::new(),
            remaining,
            total,
            cap,
        };
        search.build_deltas()?;
        Ok(search)
    }

    fn build_deltas(&mut self) -> Result<()> {
        self.deltas = self
            .slots
            .iter()
            .map(|slot| {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                for (k, order) in slot.options.iter().enumerate() {
                    let mut d = self.ev.empty();
                    self.ev.add(&mut d, order, slot.weight)?;
                    if seen.insert(d.clone()) {
                        out.push((d, k));
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(())
    }

    /// Tries orders that rank `c` higher first.
    pub fn prefer(&mut self, c: Candidate) {
        for slot in &mut self.slots {
            slot.options.sort_by_key(|o| o.iter().position(|&x| x == c));
        }
        // rebuilding cannot fail: the same sums were computed in `new`
        self.build_deltas()
            .expect("contributions already validated");
    }

    pub fn run(&self, stop: Stop) -> Result<Found> {
        let mut state = State {
            visited: vec![HashSet::new(); self.slots.len() + 1],
            path: Vec::with_capacity(self.slots.len()),
            found: Found::default(),
        };
        self.dfs(0, &self.base, stop, &mut state)?;
        Ok(state.found)
    }

    fn visit(&self, depth: usize, stat: &Stat, state: &mut State) -> Result<bool> {
        let key = stat.canonical(self.total, self.remaining[depth]);
        if !state.visited[depth].insert(key) {
            return Ok(false);
        }
        state.found.states += 1;
        if state.found.states > self.cap {
            return Err(Error::CapExceeded { cap: self.cap });
        }
        Ok(true)
    }

    /// Returns true when the search should stop.
    fn dfs(&self, depth: usize, stat: &Stat, stop: Stop, state: &mut State) -> Result<bool> {
        if depth == self.slots.len() {
            let outcomes = self.ev.decide(stat)?.outcomes;
            let found = &mut state.found;
            found.outcomes = found.outcomes.union(outcomes);
            return Ok(match stop {
                Stop::Exhaust => found.outcomes == CandidateSet::all(self.ev.m),
                Stop::TwoWinners => found.outcomes.len() >= 2,
                Stop::Reach(c) if outcomes.contains(c) => {
                    found.witness = Some(
                        state
                            .path
                            .iter()
                            .enumerate()
                            .map(|(d, &k)| {
                                let slot = &self.slots[d];
                                (slot.source, slot.options[k].clone())
                            })
                            .collect(),
                    );
                    true
                }
                Stop::Reach(_) => false,
            });
        }
        for (delta, k) in &self.deltas[depth] {
            let mut next = stat.clone();
            next.absorb(delta)?;
            if !self.visit(depth + 1, &next, state)? {
                continue;
            }
            state.path.push(*k);
            let done = self.dfs(depth + 1, &next, stop, state)?;
            state.path.pop();
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

struct State {
    visited: Vec<HashSet<Stat>>,
    path: Vec<usize>,
    found: Found,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::Rule;

    #[test]
    fn plurality_unknown_block_collapses_to_first_places() {
        let p = Profile::parse("candidates: A B C\nvote w=3 A>B>C\nunknown w=2\n").unwrap();
        let (fixed, slots) =
            split_profile(&p, Domain::Any, DEFAULT_CAP, |b| b.relation().clone()).unwrap();
        let rule = Rule::parse("plurality", &p).unwrap();
        let search = Search::new(Evaluator::new(&rule, 3).unwrap(), &fixed, slots, 100).unwrap();
        assert_eq!(search.deltas[0].len(), 3);
        let found = search.run(Stop::Exhaust).unwrap();
        assert_eq!(found.outcomes, CandidateSet::singleton(Candidate(0)));
    }

    #[test]
    fn reach_returns_a_witness() {
        let p = Profile::parse("candidates: A B\nvote w=1 A>B\nunknown w=2\n").unwrap();
        let (fixed, slots) =
            split_profile(&p, Domain::Any, DEFAULT_CAP, |b| b.relation().clone()).unwrap();
        let rule = Rule::Copeland;
        let search = Search::new(Evaluator::new(&rule, 2).unwrap(), &fixed, slots, 100).unwrap();
        let found = search.run(Stop::Reach(Candidate(1))).unwrap();
        let witness = found.witness.unwrap();
        assert_eq!(
            witness,
            vec![(Source::Unknown(0), vec![Candidate(1), Candidate(0)])]
        );
    }

    #[test]
    fn cap_counts_states() {
        let p =
            Profile::parse("candidates: A B C D\nunknown w=1\nunknown w=1\nunknown w=1\n").unwrap();
        let (fixed, slots) =
            split_profile(&p, Domain::Any, DEFAULT_CAP, |b| b.relation().clone()).unwrap();
        let search =
            Search::new(Evaluator::new(&Rule::Stv, 4).unwrap(), &fixed, slots, 200).unwrap();
        assert_eq!(
            search.run(Stop::TwoWinners).map(|f| f.outcomes.len()),
            Ok(2)
        );
        assert!(matches!(
            search.run(Stop::Exhaust),
            Err(Error::CapExceeded { cap: 200 })
        ));
    }
}
