//! Making a target candidate win by changing some of the votes.
//!
//! In the coalition model a set of ballots may be replaced by any total
//! orders. In the preference model every ballot keeps its locked pairs and
//! everything else may be reordered. Ties are broken for the target.

use crate::error::{Error, Result};
use crate::profile::{majority_matrix, Ballot, Candidate, CandidateSet, Profile, WeightedBallot};
use crate::rules::{AgendaTree, Evaluator, Rule};
use crate::search::{all_orders, split_profile, Domain, Search, Slot, Source, Stop};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationInstance {
    pub rule: Rule,
    pub target: Candidate,
    pub profile: Profile,
    /// Ballot indices whose whole order is free (coalition model only).
    pub coalition: Vec<usize>,
}

/// New total orders for some ballots, keyed by ballot index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub orders: Vec<(usize, Vec<Candidate>)>,
}

impl Assignment {
    /// The complete profile obtained by applying the assignment. Ballots not
    /// assigned must already be complete.
    pub fn apply(&self, profile: &Profile) -> Result<Profile> {
        let mut ballots = Vec::with_capacity(profile.ballots().len());
        for (i, ballot) in profile.ballots().iter().enumerate() {
            let b = match self.orders.iter().find(|(j, _)| *j == i) {
                Some((_, order)) => WeightedBallot::new(order.clone(), ballot.weight())?,
                None => ballot.as_complete().ok_or_else(|| {
                    Error::InvalidProfile(format!("ballot {} left incomplete", i + 1))
                })?,
            };
            ballots.push(b);
        }
        Ok(profile.with_complete_ballots(ballots))
    }

    fn from_witness(witness: Vec<(Source, Vec<Candidate>)>) -> Self {
        let mut orders: Vec<_> = witness
            .into_iter()
            .map(|(source, order)| match source {
                Source::Ballot(i) => (i, order),
                Source::Unknown(_) => unreachable!("manipulation profiles have no unknown weight"),
            })
            .collect();
        orders.sort();
        Assignment { orders }
    }
}

impl ManipulationInstance {
    fn check(&self) -> Result<()> {
        let p = &self.profile;
        p.validate()?;
        self.rule.validate(p.num_candidates())?;
        if self.target.0 >= p.num_candidates() {
            return Err(Error::InvalidInstance(format!(
                "unknown target {}",
                self.target
            )));
        }
        if !p.unknown_blocks().is_empty() {
            return Err(Error::ModelMismatch(
                "manipulation instances have no unknown weight".into(),
            ));
        }
        Ok(())
    }

    fn check_coalition(&self) -> Result<()> {
        self.check()?;
        let ballots = self.profile.ballots();
        for &i in &self.coalition {
            match ballots.get(i) {
                None => return Err(Error::InvalidInstance(format!("no ballot with index {i}"))),
                Some(Ballot::Partial(p)) if p.has_locked() => {
                    return Err(Error::ModelMismatch(
                        "coalition ballots cannot have locked pairs".into(),
                    ))
                }
                Some(_) => {}
            }
        }
        for (i, b) in ballots.iter().enumerate() {
            if !self.coalition.contains(&i) && b.as_complete().is_none() {
                return Err(Error::ModelMismatch(format!(
                    "ballot {} is outside the coalition but incomplete",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    fn coalition_indices(&self) -> Vec<usize> {
        let mut c = self.coalition.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Non-coalition ballots and the coalition's total weight.
    fn split_coalition(&self) -> (Vec<WeightedBallot>, u64) {
        let mut fixed = Vec::new();
        let mut weight = 0;
        for (i, b) in self.profile.ballots().iter().enumerate() {
            if self.coalition.contains(&i) {
                weight += b.weight();
            } else {
                fixed.push(b.as_complete().expect("checked"));
            }
        }
        (fixed, weight)
    }
}

/// Candidates that can win each cup subtree when `extra` additional weight
/// may be put behind any pairwise comparison. `n(a, b)` is the committed
/// weight preferring `a` to `b`.
pub(crate) fn cup_coalition_winners(
    agenda: &AgendaTree,
    n: impl Fn(Candidate, Candidate) -> u64,
    total: u64,
    extra: u64,
) -> CandidateSet {
    CupPlanner { n, total, extra }.winners(agenda)
}

struct CupPlanner<F> {
    n: F,
    total: u64,
    extra: u64,
}

impl<F: Fn(Candidate, Candidate) -> u64> CupPlanner<F> {
    fn can_beat(&self, a: Candidate, b: Candidate) -> bool {
        2 * ((self.n)(a, b) as u128 + self.extra as u128) >= self.total as u128
    }

    fn winners(&self, tree: &AgendaTree) -> CandidateSet {
        match tree {
            AgendaTree::Leaf(c) => CandidateSet::singleton(*c),
            AgendaTree::Match(l, r) => {
                let (wl, wr) = (self.winners(l), self.winners(r));
                let side = |mine: CandidateSet, theirs: CandidateSet| {
                    mine.iter()
                        .filter(|&x| theirs.iter().any(|y| self.can_beat(x, y)))
                        .collect()
                };
                CandidateSet::union(side(wl, wr), side(wr, wl))
            }
        }
    }

    /// Records, for each candidate, the depth at which the plan making `x`
    /// win `tree` eliminates it.
    fn plan(&self, tree: &AgendaTree, x: Candidate, depth: usize, elim: &mut [usize]) {
        if let AgendaTree::Match(l, r) = tree {
            let (mine, theirs) = if l.leaves().contains(&x) {
                (l, r)
            } else {
                (r, l)
            };
            let y = self
                .winners(theirs)
                .iter()
                .find(|&y| self.can_beat(x, y))
                .expect("x is a possible winner of this subtree");
            elim[y.0] = depth;
            self.plan(mine, x, depth + 1, elim);
            self.plan(theirs, y, depth + 1, elim);
        }
    }

    /// One order for every manipulator: the target first, then candidates
    /// eliminated later in the plan above those eliminated earlier.
    fn order(&self, agenda: &AgendaTree, target: Candidate, m: usize) -> Option<Vec<Candidate>> {
        if !self.winners(agenda).contains(target) {
            return None;
        }
        let mut elim = vec![usize::MAX; m];
        self.plan(agenda, target, 0, &mut elim);
        elim[target.0] = 0;
        let mut order: Vec<Candidate> = (0..m).map(Candidate).collect();
        order.sort_by_key(|&c| (c != target, elim[c.0], c));
        Some(order)
    }
}

/// Finds orders for the coalition's ballots that make the target win.
pub fn coalition_manipulate(inst: &ManipulationInstance, cap: u64) -> Result<Option<Assignment>> {
    inst.check_coalition()?;
    let m = inst.profile.num_candidates();
    let (fixed, weight) = inst.split_coalition();
    if let Rule::Cup(agenda) = &inst.rule {
        // the coalition stands in as unknown weight so the total is unchanged
        let mut rest = inst.profile.with_complete_ballots(fixed);
        if weight > 0 {
            rest.push_unknown(weight)?;
        }
        let mm = majority_matrix(&rest)?;
        let planner = CupPlanner {
            n: |a, b| mm.fixed(a, b),
            total: inst.profile.total_weight()?,
            extra: weight,
        };
        return Ok(planner.order(agenda, inst.target, m).map(|order| {
            let coalition = inst.coalition_indices();
            Assignment {
                orders: coalition.into_iter().map(|i| (i, order.clone())).collect(),
            }
        }));
    }
    coalition_by_search(inst, fixed, cap)
}

fn coalition_by_search(
    inst: &ManipulationInstance,
    fixed: Vec<WeightedBallot>,
    cap: u64,
) -> Result<Option<Assignment>> {
    let m = inst.profile.num_candidates();
    let ballots = inst.profile.ballots();
    let coalition = inst.coalition_indices();
    let options: Vec<Vec<Candidate>> = all_orders(m).collect();
    if options.len() as u64 > cap {
        return Err(Error::CapExceeded { cap });
    }
    let slots = coalition
        .iter()
        .map(|&i| Slot {
            source: Source::Ballot(i),
            weight: ballots[i].weight(),
            options: options.clone(),
        })
        .collect();
    let mut search = Search::new(Evaluator::new(&inst.rule, m)?, &fixed, slots, cap)?;
    search.prefer(inst.target);
    let found = search.run(Stop::Reach(inst.target))?;
    Ok(found.witness.map(Assignment::from_witness))
}

/// Puts the target first on every coalition ballot, the rest in index
/// order, and succeeds if that makes the target the Condorcet winner.
pub fn condorcet_coalition_manipulate(inst: &ManipulationInstance) -> Result<Option<Assignment>> {
    inst.check_coalition()?;
    let m = inst.profile.num_candidates();
    let t = inst.target;
    let order: Vec<Candidate> = std::iter::once(t)
        .chain((0..m).map(Candidate).filter(|&c| c != t))
        .collect();
    let coalition = inst.coalition_indices();
    let assignment = Assignment {
        orders: coalition.into_iter().map(|i| (i, order.clone())).collect(),
    };
    let mm = majority_matrix(&assignment.apply(&inst.profile)?)?;
    let wins = (0..m).map(Candidate).all(|j| j == t || mm.majority(t, j));
    Ok(wins.then_some(assignment))
}

/// Completes every ballot, respecting only its locked pairs, so that the
/// target wins.
pub fn preference_manipulate(inst: &ManipulationInstance, cap: u64) -> Result<Option<Assignment>> {
    inst.check()?;
    let m = inst.profile.num_candidates();
    let (fixed, slots) = split_profile(&inst.profile, Domain::Any, cap, |b| {
        b.locked_only().relation().clone()
    })?;
    let mut search = Search::new(Evaluator::new(&inst.rule, m)?, &fixed, slots, cap)?;
    search.prefer(inst.target);
    let found = search.run(Stop::Reach(inst.target))?;
    Ok(found.witness.map(Assignment::from_witness))
}
