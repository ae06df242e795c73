//! Number partitioning instances turned into elections, and a harness that
//! checks each construction against a partition oracle.
//!
//! For a bag `k_1..k_n` with sum `2k`:
//!
//! - cup elicitation is still open iff the bag splits into two halves of `k`;
//! - STV elicitation under single-peaked completions, likewise;
//! - cup and Copeland preference manipulation succeed iff it splits.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::elicitation::{fine_elicitation_over, fine_sp_elicitation_over};
use crate::error::{Error, Result};
use crate::manipulation::{preference_manipulate, ManipulationInstance};
use crate::profile::{Axis, Candidate, PartialBallot, Profile};
use crate::rules::{winner, AgendaTree, Rule, TieBreak};

/// A bag of positive integers with an even sum, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionInstance {
    numbers: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(mut numbers: Vec<u64>) -> Result<Self> {
        if numbers.is_empty() {
            return Err(Error::InvalidInstance("empty bag".into()));
        }
        if numbers.contains(&0) {
            return Err(Error::InvalidInstance(
                "bag entries must be positive".into(),
            ));
        }
        let sum = numbers
            .iter()
            .try_fold(0u64, |a, &x| a.checked_add(x))
            .ok_or(Error::Overflow)?;
        if sum % 2 != 0 {
            return Err(Error::InvalidInstance(format!("bag sum {sum} is odd")));
        }
        if sum > u64::MAX / 32 {
            return Err(Error::Overflow);
        }
        numbers.sort_unstable();
        Ok(PartitionInstance { numbers })
    }

    pub fn numbers(&self) -> &[u64] {
        &self.numbers
    }

    /// `k`, half the sum.
    pub fn half_sum(&self) -> u64 {
        self.numbers.iter().sum::<u64>() / 2
    }
}

impl FromStr for PartitionInstance {
    type Err = Error;

    /// Parses `1,1,2`.
    fn from_str(s: &str) -> Result<Self> {
        let numbers = s
            .split(',')
            .map(|x| x.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidInstance(format!("bad bag {s:?}")))?;
        PartitionInstance::new(numbers)
    }
}

impl fmt::Display for PartitionInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.numbers.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Tries every subset. Only for small bags.
pub fn has_partition_brute(numbers: &[u64]) -> bool {
    let n = numbers.len();
    assert!(n < 32, "brute-force partition oracle is for small bags");
    let sum: u64 = numbers.iter().sum();
    sum.is_multiple_of(2)
        && (0u64..1 << n).any(|mask| {
            let part: u64 = (0..n)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| numbers[i])
                .sum();
            2 * part == sum
        })
}

/// Subset-sum table up to half the sum.
pub fn has_partition_dp(numbers: &[u64]) -> bool {
    let sum: u64 = numbers.iter().sum();
    if !sum.is_multiple_of(2) {
        return false;
    }
    let half = (sum / 2) as usize;
    let mut reach = vec![false; half + 1];
    reach[0] = true;
    for &x in numbers {
        let x = x as usize;
        for s in (x..=half).rev() {
            reach[s] |= reach[s - x];
        }
    }
    reach[half]
}

fn labels(n: usize) -> Profile {
    Profile::new(["A", "B", "C", "D", "E"].into_iter().take(n)).expect("static labels")
}

fn order(p: &Profile, chain: &str) -> Vec<Candidate> {
    chain
        .chars()
        .map(|c| p.candidate(&c.to_string()).expect("static label"))
        .collect()
}

fn pair(p: &Profile, a: &str, b: &str) -> (Candidate, Candidate) {
    (
        p.candidate(a).expect("static label"),
        p.candidate(b).expect("static label"),
    )
}

/// The cup elicitation instance: agenda (((A,B),C),D), one partial ballot
/// with only `A>C` known for every number after the first. With `balanced`,
/// a fifth candidate E is added at the bottom of every vote and the agenda
/// becomes (((A,B),C),(D,E)).
pub fn gen_cup_elicitation(p: &PartitionInstance, balanced: bool) -> Result<(Profile, AgendaTree)> {
    let k = p.half_sum();
    let k1 = p.numbers[0];
    let mut prof = labels(if balanced { 5 } else { 4 });
    let suffix = if balanced { "E" } else { "" };
    for (chain, w) in [
        ("CDBA", 1),
        ("CDAB", 2 * k - 1),
        ("DBCA", 2 * k - 1),
        ("DBAC", 2 * k1),
    ] {
        let o = order(&prof, &format!("{chain}{suffix}"));
        prof.push_vote(o, w)?;
    }
    let mut pairs = vec![pair(&prof, "A", "C")];
    if balanced {
        pairs.extend(["A", "B", "C", "D"].map(|x| pair(&prof, x, "E")));
    }
    for &ki in &p.numbers[1..] {
        prof.push_partial(PartialBallot::new(prof.num_candidates(), &pairs, 2 * ki)?)?;
    }
    let text = if balanced {
        "(((A,B),C),(D,E))"
    } else {
        "(((A,B),C),D)"
    };
    let agenda = AgendaTree::parse(text, &prof)?;
    Ok((prof, agenda))
}

/// The STV instance over the axis A B C: three fixed blocks and one wholly
/// unspecified ballot per number, to be completed single-peaked.
pub fn gen_stv_sp_elicitation(p: &PartitionInstance) -> Result<(Profile, Axis)> {
    let k = p.half_sum();
    let mut prof = labels(3);
    for (chain, w) in [("BCA", 6 * k - 1), ("ABC", 4 * k), ("CBA", 4 * k)] {
        let o = order(&prof, chain);
        prof.push_vote(o, w)?;
    }
    for &ki in &p.numbers {
        prof.push_partial(PartialBallot::new(3, &[], 2 * ki)?)?;
    }
    let axis = Axis::new(order(&prof, "ABC"))?;
    prof.set_axis(axis.clone())?;
    Ok((prof, axis))
}

/// Cup preference manipulation with agenda ((A,B),C) and target C. Each
/// number gives a ballot whose only locked preference is `A>C`.
pub fn gen_cup_preference_manipulation(p: &PartitionInstance) -> Result<ManipulationInstance> {
    let k = p.half_sum();
    let mut prof = labels(3);
    for (chain, w) in [("CBA", 1), ("CAB", 2 * k - 1), ("BCA", 2 * k - 1)] {
        let o = order(&prof, chain);
        prof.push_vote(o, w)?;
    }
    let ac = [pair(&prof, "A", "C")];
    for &ki in &p.numbers {
        prof.push_partial(PartialBallot::new(3, &ac, 2 * ki)?.with_locked(&ac)?)?;
    }
    let agenda = AgendaTree::parse("((A,B),C)", &prof)?;
    let target = prof.candidate("C").expect("static label");
    Ok(ManipulationInstance {
        rule: Rule::Cup(agenda),
        target,
        profile: prof,
        coalition: vec![],
    })
}

/// Copeland preference manipulation with target C. Each number gives a
/// ballot with `A>C` and `B>C` locked and A against B free. The total
/// weight is even, so odd-weight checking is switched off.
pub fn gen_copeland_preference_manipulation(p: &PartitionInstance) -> Result<ManipulationInstance> {
    let k = p.half_sum();
    let mut prof = labels(3);
    prof.set_strict_odd(false);
    for (chain, w) in [("CAB", k), ("CBA", k)] {
        let o = order(&prof, chain);
        prof.push_vote(o, w)?;
    }
    let locked = [pair(&prof, "A", "C"), pair(&prof, "B", "C")];
    for &ki in &p.numbers {
        prof.push_partial(PartialBallot::new(3, &locked, ki)?.with_locked(&locked)?)?;
    }
    let target = prof.candidate("C").expect("static label");
    Ok(ManipulationInstance {
        rule: Rule::Copeland,
        target,
        profile: prof,
        coalition: vec![],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    CupElicit,
    StvSpElicit,
    CupManip,
    CopelandManip,
}

impl ReductionKind {
    pub const ALL: [ReductionKind; 4] = [
        ReductionKind::CupElicit,
        ReductionKind::StvSpElicit,
        ReductionKind::CupManip,
        ReductionKind::CopelandManip,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ReductionKind::CupElicit => "cup-elicit",
            ReductionKind::StvSpElicit => "stv-sp-elicit",
            ReductionKind::CupManip => "cup-manip",
            ReductionKind::CopelandManip => "copeland-manip",
        }
    }
}

impl FromStr for ReductionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReductionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInstance(format!("unknown reduction kind {s:?}")))
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub kind: ReductionKind,
    pub bag: PartitionInstance,
    /// Elicitation still open, or manipulation possible.
    pub decision: bool,
    pub partition: bool,
    /// False if a manipulation witness failed to replay.
    pub witness_ok: bool,
}

impl ReductionReport {
    pub fn holds(&self) -> bool {
        self.witness_ok && self.decision == self.partition
    }
}

fn manipulation_answer(inst: &ManipulationInstance, cap: u64) -> Result<(bool, bool)> {
    match preference_manipulate(inst, cap)? {
        None => Ok((false, true)),
        Some(a) => {
            let w = winner(
                &inst.rule,
                &a.apply(&inst.profile)?,
                TieBreak::Favor(inst.target),
            )?;
            Ok((true, w == inst.target))
        }
    }
}

/// Builds the instance for `kind`, runs the decision procedure on it and
/// compares with the partition oracle.
pub fn verify_reduction(
    kind: ReductionKind,
    p: &PartitionInstance,
    cap: u64,
) -> Result<ReductionReport> {
    let (decision, witness_ok) = match kind {
        ReductionKind::CupElicit => {
            let (prof, agenda) = gen_cup_elicitation(p, false)?;
            (
                !fine_elicitation_over(&Rule::Cup(agenda), &prof, cap)?,
                true,
            )
        }
        ReductionKind::StvSpElicit => {
            let (prof, axis) = gen_stv_sp_elicitation(p)?;
            (
                !fine_sp_elicitation_over(&Rule::Stv, &prof, &axis, cap)?,
                true,
            )
        }
        ReductionKind::CupManip => manipulation_answer(&gen_cup_preference_manipulation(p)?, cap)?,
        ReductionKind::CopelandManip => {
            manipulation_answer(&gen_copeland_preference_manipulation(p)?, cap)?
        }
    };
    Ok(ReductionReport {
        kind,
        bag: p.clone(),
        decision,
        partition: has_partition_dp(p.numbers()),
        witness_ok,
    })
}

/// Every bag of `1..=max_n` numbers from `1..=max_v` with an even sum.
pub fn all_bags(max_n: usize, max_v: u64) -> Vec<PartitionInstance> {
    fn extend(cur: &mut Vec<u64>, max_n: usize, max_v: u64, out: &mut Vec<PartitionInstance>) {
        if !cur.is_empty() && cur.iter().sum::<u64>() % 2 == 0 {
            out.push(PartitionInstance {
                numbers: cur.clone(),
            });
        }
        if cur.len() == max_n {
            return;
        }
        let lo = cur.last().copied().unwrap_or(1);
        for v in lo..=max_v {
            cur.push(v);
            extend(cur, max_n, max_v, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_n, max_v, &mut out);
    out
}

/// Runs [`verify_reduction`] on every bag, in parallel.
pub fn sweep(
    kind: ReductionKind,
    bags: &[PartitionInstance],
    cap: u64,
) -> Result<Vec<ReductionReport>> {
    bags.par_iter()
        .map(|p| verify_reduction(kind, p, cap))
        .collect()
}

#[cfg(test)]
mod tests;
