//! Win probabilities over explicit distributions of complete profiles.
//!
//! A distribution is a list of scenarios, each a complete profile with an
//! exact rational probability. Correlated voters are expressed by putting
//! their joint choices in the same scenario.
//!
//! ```text
//! candidates: A B C
//! scenario p=1/2
//! vote w=2 A>B>C
//! vote w=1 C>B>A
//! scenario p=1/2
//! vote w=2 B>A>C
//! vote w=1 C>B>A
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::manipulation::ManipulationInstance;
use crate::profile::format::{apply_line, strip, write_ballot};
use crate::profile::{Candidate, Profile, WeightedBallot};
use crate::rules::{winner, Rule, TieBreak};
use crate::search::{split_profile, Domain};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioDistribution {
    scenarios: Vec<(Profile, BigRational)>,
}

impl ScenarioDistribution {
    /// Checks that every scenario is complete, all share candidates and
    /// total weight, and the probabilities are positive and sum to one.
    pub fn new(scenarios: Vec<(Profile, BigRational)>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidDistribution(msg));
        let Some((first, _)) = scenarios.first() else {
            return bad("no scenarios".into());
        };
        let total = first.total_weight()?;
        let mut sum = BigRational::zero();
        for (i, (p, prob)) in scenarios.iter().enumerate() {
            if !p.is_complete() {
                return bad(format!("scenario {} is not a complete profile", i + 1));
            }
            if p.labels() != first.labels() {
                return bad(format!("scenario {} has different candidates", i + 1));
            }
            if p.total_weight()? != total {
                return bad(format!("scenario {} has a different total weight", i + 1));
            }
            if !prob.is_positive() {
                return bad(format!("scenario {} has a non-positive probability", i + 1));
            }
            sum += prob;
        }
        if !sum.is_one() {
            return bad(format!("probabilities sum to {sum}, not 1"));
        }
        Ok(ScenarioDistribution { scenarios })
    }

    pub fn scenarios(&self) -> &[(Profile, BigRational)] {
        &self.scenarios
    }

    pub fn num_candidates(&self) -> usize {
        self.scenarios[0].0.num_candidates()
    }

    pub fn reference(&self) -> &Profile {
        &self.scenarios[0].0
    }

    pub fn set_strict_odd(&mut self, strict: bool) {
        for (p, _) in &mut self.scenarios {
            p.set_strict_odd(strict);
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut global: Option<Profile> = None;
        let mut blocks: Vec<(Option<Profile>, BigRational)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = strip(raw);
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("scenario") {
                let p = rest
                    .trim()
                    .strip_prefix("p=")
                    .ok_or_else(|| Error::parse(i + 1, "expected scenario p=<rational>"))?;
                let prob = parse_rational(p).map_err(|e| Error::parse(i + 1, e.to_string()))?;
                blocks.push((global.as_ref().map(Profile::empty_like), prob));
            } else if let Some((profile, _)) = blocks.last_mut() {
                apply_line(profile, line, i + 1)?;
            } else if line.starts_with("candidates:") {
                apply_line(&mut global, line, i + 1)?;
            } else {
                return Err(Error::parse(
                    i + 1,
                    "profile line before the first scenario",
                ));
            }
        }
        let scenarios = blocks
            .into_iter()
            .enumerate()
            .map(|(i, (p, prob))| {
                p.map(|p| (p, prob)).ok_or_else(|| {
                    Error::InvalidDistribution(format!("scenario {} has no candidates", i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ScenarioDistribution::new(scenarios)
    }
}

impl fmt::Display for ScenarioDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "candidates: {}", self.reference().labels().join(" "))?;
        for (p, prob) in &self.scenarios {
            writeln!(f, "scenario p={prob}")?;
            for b in p.ballots() {
                write_ballot(p, b, f)?;
            }
        }
        Ok(())
    }
}

/// Parses `1/3`, `1` or `0`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let r = BigRational::from_str(text.trim())
        .map_err(|_| Error::InvalidDistribution(format!("bad rational {text:?}")))?;
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationQuery {
    pub target: Candidate,
    /// Strict lower bound on the win probability, in `[0, 1]`.
    pub threshold: BigRational,
    pub rule: Rule,
    pub tb: TieBreak,
}

/// Exact probability that `target` wins.
pub fn win_probability(
    dist: &ScenarioDistribution,
    rule: &Rule,
    target: Candidate,
    tb: TieBreak,
) -> Result<BigRational> {
    if target.0 >= dist.num_candidates() {
        return Err(Error::InvalidDistribution(format!(
            "unknown target {target}"
        )));
    }
    let wins = dist
        .scenarios
        .par_iter()
        .map(|(p, prob)| Ok((winner(rule, p, tb)? == target).then(|| prob.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(wins
        .into_iter()
        .flatten()
        .fold(BigRational::zero(), |acc, p| acc + p))
}

/// Whether the target's win probability is strictly above the threshold.
pub fn evaluate(dist: &ScenarioDistribution, query: &EvaluationQuery) -> Result<bool> {
    let r = &query.threshold;
    if r.is_negative() || *r > BigRational::one() {
        return Err(Error::InvalidDistribution(format!(
            "threshold {r} is outside [0, 1]"
        )));
    }
    Ok(win_probability(dist, &query.rule, query.target, query.tb)? > *r)
}

/// Turns a preference manipulation instance into an evaluation question with
/// the same answer. Every weight-`k` ballot becomes `k` unit ballots that
/// always vote alike, and each joint completion of the manipulable
/// preferences is one equally likely scenario. `cap` bounds the number of
/// scenarios.
pub fn reduction_from_preference_manipulation(
    inst: &ManipulationInstance,
    cap: u64,
) -> Result<(ScenarioDistribution, EvaluationQuery)> {
    let profile = &inst.profile;
    profile.validate()?;
    inst.rule.validate(profile.num_candidates())?;
    if !profile.unknown_blocks().is_empty() {
        return Err(Error::ModelMismatch(
            "manipulation instances have no unknown weight".into(),
        ));
    }
    let (fixed, slots) = split_profile(profile, Domain::Any, cap, |b| {
        b.locked_only().relation().clone()
    })?;
    let count = slots
        .iter()
        .try_fold(1u64, |acc, s| {
            acc.checked_mul(s.options.len() as u64)
                .filter(|&n| n <= cap)
        })
        .ok_or(Error::CapExceeded { cap })?;

    fn units(order: &[Candidate], w: u64) -> impl Iterator<Item = WeightedBallot> + '_ {
        (0..w).map(move |_| WeightedBallot::new(order.to_vec(), 1).expect("valid order"))
    }
    let base: Vec<WeightedBallot> = fixed
        .iter()
        .flat_map(|b| units(b.order(), b.weight()))
        .collect();
    let prob = BigRational::new(BigInt::one(), BigInt::from(count));
    let mut scenarios = Vec::with_capacity(count as usize);
    let mut choice = vec![0usize; slots.len()];
    loop {
        let mut ballots = base.clone();
        for (slot, &k) in slots.iter().zip(&choice) {
            ballots.extend(units(&slot.options[k], slot.weight));
        }
        scenarios.push((profile.with_complete_ballots(ballots), prob.clone()));
        // odometer over the slots' options
        let Some(i) = (0..slots.len()).find(|&i| choice[i] + 1 < slots[i].options.len()) else {
            break;
        };
        choice[i] += 1;
        choice[..i].iter_mut().for_each(|c| *c = 0);
    }
    let query = EvaluationQuery {
        target: inst.target,
        threshold: BigRational::zero(),
        rule: inst.rule.clone(),
        tb: TieBreak::Favor(inst.target),
    };
    Ok((ScenarioDistribution::new(scenarios)?, query))
}

/// One independently voting agent: a weight and a distribution over orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoterMarginal {
    pub weight: u64,
    pub orders: Vec<(Vec<Candidate>, BigRational)>,
}

/// The joint distribution of independent voters on top of the complete
/// ballots of `base`. Fails with `CapExceeded` past `cap` scenarios.
pub fn independent_product(
    base: &Profile,
    voters: &[VoterMarginal],
    cap: u64,
) -> Result<ScenarioDistribution> {
    let fixed = base.complete_ballots()?;
    let mut scenarios: Vec<(Vec<WeightedBallot>, BigRational)> = vec![(fixed, BigRational::one())];
    for v in voters {
        let next = scenarios.len() as u128 * v.orders.len() as u128;
        if next > cap as u128 {
            return Err(Error::CapExceeded { cap });
        }
        scenarios = scenarios
            .into_iter()
            .flat_map(|(ballots, p)| {
                v.orders.iter().map(move |(order, q)| {
                    let mut b = ballots.clone();
                    b.push(WeightedBallot::new(order.clone(), v.weight)?);
                    Ok((b, &p * q))
                })
            })
            .collect::<Result<_>>()?;
    }
    ScenarioDistribution::new(
        scenarios
            .into_iter()
            .map(|(b, p)| (base.with_complete_ballots(b), p))
            .collect(),
    )
}

#[cfg(test)]
mod tests;
