//! Deciding whether elicitation can stop: the winner is the same however the
//! missing preferences are filled in.
//!
//! A candidate is a possible winner if some joint completion lets it win when
//! ties are broken in its favor. Elicitation is over exactly when there is a
//! single possible winner.

use crate::error::{Error, Result};
use crate::manipulation::cup_coalition_winners;
use crate::profile::{
    count_sp_extensions, is_single_peaked, majority_matrix, Axis, Ballot, Candidate, CandidateSet,
    LinearExtensions, Profile, Relation, WeightedBallot,
};
use crate::rules::{decision, AgendaTree, Evaluator, Pairing, Rule};
use crate::search::{split_profile, Domain, Search, Stop};

fn search(
    rule: &Rule,
    profile: &Profile,
    domain: Domain,
    cap: u64,
    stop: Stop,
) -> Result<CandidateSet> {
    profile.validate()?;
    let (fixed, slots) = split_profile(profile, domain, cap, |b| b.relation().clone())?;
    let ev = Evaluator::new(rule, profile.num_candidates())?;
    Ok(Search::new(ev, &fixed, slots, cap)?.run(stop)?.outcomes)
}

/// Pairwise weights of the cast ballots, plus the unknown weight.
fn cast_tallies(profile: &Profile) -> Result<(Vec<WeightedBallot>, u64)> {
    if !profile.is_partial_vote() {
        return Err(Error::ModelMismatch(
            "coarse elicitation needs complete ballots plus unknown weight".into(),
        ));
    }
    let cast = profile
        .ballots()
        .iter()
        .map(|b| b.as_complete().expect("checked above"))
        .collect();
    Ok((cast, profile.unknown_weight()?))
}

fn cup_coarse_winners(agenda: &AgendaTree, profile: &Profile) -> Result<CandidateSet> {
    profile.validate()?;
    agenda.validate(profile.num_candidates())?;
    let (_, unknown) = cast_tallies(profile)?;
    let mm = majority_matrix(profile)?;
    Ok(cup_coalition_winners(
        agenda,
        |a, b| mm.fixed(a, b),
        mm.total(),
        unknown,
    ))
}

/// Every candidate that wins under some joint completion.
pub fn possible_winners(rule: &Rule, profile: &Profile, cap: u64) -> Result<CandidateSet> {
    if let Rule::Cup(agenda) = rule {
        if profile.is_partial_vote() {
            return cup_coarse_winners(agenda, profile);
        }
    }
    search(rule, profile, Domain::Any, cap, Stop::Exhaust)
}

/// Whether the winner is fixed however the unknown agents vote. Only unknown
/// weight may be missing.
pub fn coarse_elicitation_over(rule: &Rule, profile: &Profile, cap: u64) -> Result<bool> {
    if let Rule::Cup(agenda) = rule {
        return Ok(cup_coarse_winners(agenda, profile)?.len() == 1);
    }
    cast_tallies(profile)?;
    fine_elicitation_over(rule, profile, cap)
}

/// Whether the winner is fixed however the partial ballots and the unknown
/// weight are completed.
pub fn fine_elicitation_over(rule: &Rule, profile: &Profile, cap: u64) -> Result<bool> {
    Ok(search(rule, profile, Domain::Any, cap, Stop::TwoWinners)?.len() == 1)
}

/// Extension of `rel` that, for each pair in turn, puts the first candidate
/// above the second unless that is already ruled out.
fn prioritized(rel: &Relation, priorities: &[(Candidate, Candidate)]) -> Vec<Candidate> {
    let mut pairs = rel.pairs();
    let mut cur = rel.clone();
    for &(a, b) in priorities {
        if !cur.prefers(b, a) && !cur.prefers(a, b) {
            pairs.push((a, b));
            cur = Relation::closure_of(rel.len(), &pairs).expect("consistent by construction");
        }
    }
    LinearExtensions::new(&cur)
        .next()
        .expect("acyclic relation")
}

/// Fine elicitation for the cup with at most three candidates, checking four
/// canonical completions instead of all of them.
pub fn cup3_fine_over(agenda: &AgendaTree, profile: &Profile) -> Result<bool> {
    let m = profile.num_candidates();
    if m > 3 {
        return Err(Error::ModelMismatch(
            "the four-completion test needs at most 3 candidates".into(),
        ));
    }
    profile.validate()?;
    agenda.validate(m)?;
    if m == 1 {
        return Ok(true);
    }
    let c = Candidate;
    let completions: Vec<Vec<(Candidate, Candidate)>> = if m == 2 {
        vec![vec![(c(0), c(1))], vec![(c(1), c(0))]]
    } else {
        // ((x, y), z) up to the order of the two matches
        let (x, y, z) = match agenda {
            AgendaTree::Match(l, r) => match (&**l, &**r) {
                (AgendaTree::Match(a, b), AgendaTree::Leaf(z))
                | (AgendaTree::Leaf(z), AgendaTree::Match(a, b)) => {
                    (a.leaves()[0], b.leaves()[0], *z)
                }
                _ => unreachable!("validated three-leaf agenda"),
            },
            AgendaTree::Leaf(_) => unreachable!("validated three-leaf agenda"),
        };
        vec![
            vec![(x, y), (x, z)],
            vec![(y, x), (y, z)],
            vec![(z, x), (x, y)],
            vec![(z, y), (y, x)],
        ]
    };
    let rule = Rule::Cup(agenda.clone());
    let mut union = CandidateSet::empty();
    for priorities in completions {
        let ballots = profile
            .ballots()
            .iter()
            .map(|b| (b.to_partial().relation().clone(), b.weight()))
            .chain(
                profile
                    .unknown_blocks()
                    .iter()
                    .map(|&w| (Relation::empty(m), w)),
            )
            .map(|(rel, w)| WeightedBallot::new(prioritized(&rel, &priorities), w))
            .collect::<Result<Vec<_>>>()?;
        let complete = profile.with_complete_ballots(ballots);
        union = union.union(decision(&rule, &complete)?.outcomes);
    }
    Ok(union.len() == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CondorcetStatus {
    /// This candidate is the Condorcet winner in every completion.
    True(Candidate),
    /// No completion has a Condorcet winner.
    False,
    NotDetermined,
}

/// Classifies a profile by whether its committed pairwise weight already
/// settles the Condorcet winner.
pub fn condorcet_winner_fixed(profile: &Profile) -> Result<CondorcetStatus> {
    let mm = majority_matrix(profile)?;
    let w = mm.total() as u128;
    let cands: Vec<Candidate> = profile.candidates().collect();
    if let Some(&c) = cands.iter().find(|&&c| {
        cands
            .iter()
            .all(|&j| j == c || 2 * mm.fixed(c, j) as u128 > w)
    }) {
        return Ok(CondorcetStatus::True(c));
    }
    let blocked = |c: Candidate| {
        cands
            .iter()
            .any(|&j| j != c && 2 * mm.fixed(j, c) as u128 >= w)
    };
    if cands.iter().all(|&c| blocked(c)) {
        Ok(CondorcetStatus::False)
    } else {
        Ok(CondorcetStatus::NotDetermined)
    }
}

fn check_single_peaked(profile: &Profile, axis: &Axis) -> Result<()> {
    if axis.len() != profile.num_candidates() {
        return Err(Error::InvalidProfile(
            "axis and profile disagree on candidates".into(),
        ));
    }
    for (i, ballot) in profile.ballots().iter().enumerate() {
        let ok = match ballot {
            Ballot::Complete(b) => is_single_peaked(b.order(), axis),
            Ballot::Partial(p) => count_sp_extensions(p.relation(), axis) > 0,
        };
        if !ok {
            return Err(Error::NotCompletableSp(format!(
                "ballot {} has no single-peaked completion",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Fine elicitation when every completion must be single-peaked along `axis`.
pub fn fine_sp_elicitation_over(
    rule: &Rule,
    profile: &Profile,
    axis: &Axis,
    cap: u64,
) -> Result<bool> {
    check_single_peaked(profile, axis)?;
    Ok(search(
        rule,
        profile,
        Domain::SinglePeaked(axis),
        cap,
        Stop::TwoWinners,
    )?
    .len()
        == 1)
}

/// The cup under single-peaked completions, answered both by the unrestricted
/// Condorcet test and by enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpShortcutReport {
    pub condorcet: CondorcetStatus,
    /// What the Condorcet test alone would answer.
    pub shortcut: bool,
    pub exhaustive: bool,
}

impl SpShortcutReport {
    pub fn diverges(&self) -> bool {
        self.shortcut != self.exhaustive
    }
}

pub fn cup_sp_shortcut_report(
    agenda: &AgendaTree,
    profile: &Profile,
    axis: &Axis,
    cap: u64,
) -> Result<SpShortcutReport> {
    let exhaustive = fine_sp_elicitation_over(&Rule::Cup(agenda.clone()), profile, axis, cap)?;
    let condorcet = condorcet_winner_fixed(profile)?;
    let shortcut = matches!(condorcet, CondorcetStatus::True(_));
    Ok(SpShortcutReport {
        condorcet,
        shortcut,
        exhaustive,
    })
}

/// Coarse elicitation for the pre-round hybrid rule. The work is exponential
/// only in the number of pre-round matches the unknown weight can still swing.
pub fn hybrid_coarse_over(pairing: &Pairing, profile: &Profile, cap: u64) -> Result<bool> {
    profile.validate()?;
    let m = profile.num_candidates();
    pairing.validate(m)?;
    let (cast, unknown) = cast_tallies(profile)?;
    let total = profile.total_weight()? as u128;
    let u = unknown as u128;
    let mm = majority_matrix(profile)?;

    // survivors each match can produce
    let mut base = CandidateSet::empty();
    if let Some(c) = pairing.bye {
        base.insert(c);
    }
    let mut flexible = Vec::new();
    for &(a, b) in &pairing.pairs {
        let can = |x: Candidate, y: Candidate| 2 * (mm.fixed(x, y) as u128 + u) >= total;
        match (can(a, b), can(b, a)) {
            (true, true) => flexible.push((a, b)),
            (true, false) => base.insert(a),
            (false, true) => base.insert(b),
            (false, false) => unreachable!("one side always reaches half"),
        }
    }
    if flexible.len() >= 64 || 1u64 << flexible.len() > cap {
        return Err(Error::CapExceeded { cap });
    }

    let mut winners = CandidateSet::empty();
    for bits in 0..1u64 << flexible.len() {
        let mut survivors = base;
        for (i, &(a, b)) in flexible.iter().enumerate() {
            survivors.insert(if bits >> i & 1 == 0 { a } else { b });
        }
        let mut tops = vec![0u128; m];
        for ballot in &cast {
            let top = ballot
                .order()
                .iter()
                .find(|&&c| survivors.contains(c))
                .expect("nonempty");
            tops[top.0] += ballot.weight() as u128;
        }
        for b in survivors.iter() {
            if survivors.iter().all(|x| tops[b.0] + u >= tops[x.0]) {
                winners.insert(b);
            }
        }
        if winners.len() >= 2 {
            return Ok(false);
        }
    }
    Ok(winners.len() == 1)
}

#[cfg(test)]
mod tests;
