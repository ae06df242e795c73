//! Winner determination for scoring rules, the cup, Copeland (first and
//! second order), plurality with runoff, STV and a cup pre-round followed by
//! plurality.
//!
//! Ties are resolved by a [`TieBreak`] policy over the whole run of the
//! rule: favoring a candidate picks the tie resolutions under which it wins
//! if any exist, opposing it picks resolutions under which it loses.

mod agenda;
mod decide;
mod tally;

use std::fmt;

pub use agenda::AgendaTree;
pub use decide::Decision;
pub(crate) use tally::{Pairwise, Stat, StatKind};

use crate::error::{Error, Result};
use crate::profile::{Candidate, CandidateSet, Profile, WeightedBallot};

/// Points for each rank position, best position first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScoringVector(Vec<u64>);

impl ScoringVector {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidRule("empty scoring vector".into()));
        }
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidRule(
                "scoring vector must be non-increasing".into(),
            ));
        }
        if weights.len() > 1 && weights.first() == weights.last() {
            return Err(Error::InvalidRule(
                "scoring vector must not be constant".into(),
            ));
        }
        Ok(ScoringVector(weights))
    }

    pub fn plurality(m: usize) -> Self {
        let mut w = vec![0; m];
        w[0] = 1;
        ScoringVector(w)
    }

    pub fn veto(m: usize) -> Self {
        let mut w = vec![1; m];
        w[m - 1] = 0;
        ScoringVector(w)
    }

    pub fn borda(m: usize) -> Self {
        ScoringVector((0..m as u64).rev().collect())
    }

    pub fn weights(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TieBreak {
    Favor(Candidate),
    Against(Candidate),
    Lexicographic,
}

impl TieBreak {
    /// Parses `lex`, `favor:C` or `against:C`.
    pub fn parse(text: &str, profile: &Profile) -> Result<Self> {
        let lookup = |label: &str| {
            profile
                .candidate(label)
                .ok_or_else(|| Error::InvalidRule(format!("unknown candidate {label:?}")))
        };
        match text.split_once(':') {
            None if text == "lex" => Ok(TieBreak::Lexicographic),
            Some(("favor", c)) => Ok(TieBreak::Favor(lookup(c)?)),
            Some(("against", c)) => Ok(TieBreak::Against(lookup(c)?)),
            _ => Err(Error::InvalidRule(format!("bad tie-break {text:?}"))),
        }
    }

    fn validate(&self, m: usize) -> Result<()> {
        match self {
            TieBreak::Favor(c) | TieBreak::Against(c) if c.0 >= m => Err(Error::InvalidRule(
                format!("tie-break names unknown candidate {c}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Pre-round matches of the hybrid rule, plus an optional bye.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pairing {
    pub pairs: Vec<(Candidate, Candidate)>,
    pub bye: Option<Candidate>,
}

impl Pairing {
    pub fn new(pairs: Vec<(Candidate, Candidate)>, bye: Option<Candidate>) -> Self {
        Pairing { pairs, bye }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        let mut seen = CandidateSet::empty();
        let all = self.pairs.iter().flat_map(|&(a, b)| [a, b]).chain(self.bye);
        for c in all {
            if c.0 >= m || seen.contains(c) {
                return Err(Error::InvalidRule(
                    "pairing must cover each candidate once".into(),
                ));
            }
            seen.insert(c);
        }
        if seen != CandidateSet::all(m) {
            return Err(Error::InvalidRule(
                "pairing must cover each candidate once".into(),
            ));
        }
        if self.bye.is_some() && m.is_multiple_of(2) {
            return Err(Error::InvalidRule(
                "a bye needs an odd number of candidates".into(),
            ));
        }
        Ok(())
    }

    /// The pre-round opponent of `c`, or `None` for the bye.
    pub fn opponent(&self, c: Candidate) -> Option<Candidate> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == c {
                Some(b)
            } else if b == c {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Parses `(A,B)(C,D)`, with `(E)` for a bye.
    pub fn parse(text: &str, profile: &Profile) -> Result<Self> {
        let bad = || Error::InvalidRule(format!("bad pairing {text:?}"));
        let lookup = |label: &str| {
            profile
                .candidate(label.trim())
                .ok_or_else(|| Error::InvalidRule(format!("unknown candidate {label:?}")))
        };
        let mut pairs = Vec::new();
        let mut bye = None;
        let mut rest = text.trim();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = inner.find(')').ok_or_else(bad)?;
            let group = &inner[..close];
            match group.split_once(',') {
                Some((a, b)) => pairs.push((lookup(a)?, lookup(b)?)),
                None if bye.is_none() => bye = Some(lookup(group)?),
                None => return Err(bad()),
            }
            rest = inner[close + 1..].trim_start();
        }
        let pairing = Pairing { pairs, bye };
        pairing.validate(profile.num_candidates())?;
        Ok(pairing)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Scoring(ScoringVector),
    Cup(AgendaTree),
    Copeland,
    /// Copeland, ties broken by the summed scores of defeated opponents.
    Copeland2,
    PluralityRunoff,
    Stv,
    /// One cup round over the pairing, then plurality among the survivors.
    Hybrid(Pairing),
}

impl Rule {
    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            Rule::Scoring(v) if v.weights().len() != m => Err(Error::InvalidRule(format!(
                "scoring vector has {} entries for {m} candidates",
                v.weights().len()
            ))),
            Rule::Cup(t) => t.validate(m),
            Rule::Hybrid(p) => p.validate(m),
            _ => Ok(()),
        }
    }

    pub(crate) fn stat_kind(&self) -> StatKind {
        match self {
            Rule::Scoring(_) => StatKind::Scores,
            Rule::Cup(_) | Rule::Copeland | Rule::Copeland2 => StatKind::Pairwise,
            Rule::PluralityRunoff => StatKind::Runoff,
            Rule::Stv | Rule::Hybrid(_) => StatKind::Orders,
        }
    }

    /// Elects the Condorcet winner whenever one exists.
    pub fn is_condorcet_consistent(&self) -> bool {
        matches!(self, Rule::Cup(_) | Rule::Copeland | Rule::Copeland2)
    }

    /// Parses the command-line rule syntax: `plurality`, `veto`, `borda`,
    /// `scoring:3,1,0,0`, `cup:((A,B),(C,D))`, `copeland`, `copeland2`,
    /// `runoff`, `stv`, `hybrid:(A,B)(C,D)`.
    pub fn parse(text: &str, profile: &Profile) -> Result<Self> {
        let m = profile.num_candidates();
        let (name, arg) = match text.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (text, None),
        };
        let rule = match (name, arg) {
            ("plurality", None) => Rule::Scoring(ScoringVector::plurality(m)),
            ("veto", None) => Rule::Scoring(ScoringVector::veto(m)),
            ("borda", None) => Rule::Scoring(ScoringVector::borda(m)),
            ("scoring", Some(a)) => {
                let weights = a
                    .split(',')
                    .map(|w| w.trim().parse::<u64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidRule(format!("bad scoring vector {a:?}")))?;
                Rule::Scoring(ScoringVector::new(weights)?)
            }
            ("cup", Some(a)) => Rule::Cup(AgendaTree::parse(a, profile)?),
            ("copeland", None) => Rule::Copeland,
            ("copeland2", None) => Rule::Copeland2,
            ("runoff", None) => Rule::PluralityRunoff,
            ("stv", None) => Rule::Stv,
            ("hybrid", Some(a)) => Rule::Hybrid(Pairing::parse(a, profile)?),
            _ => return Err(Error::InvalidRule(format!("unknown rule {text:?}"))),
        };
        rule.validate(m)?;
        Ok(rule)
    }

    pub fn display<'a>(&'a self, profile: &'a Profile) -> impl fmt::Display + 'a {
        RuleDisplay {
            rule: self,
            profile,
        }
    }
}

struct RuleDisplay<'a> {
    rule: &'a Rule,
    profile: &'a Profile,
}

impl fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.profile;
        match self.rule {
            Rule::Scoring(v) => {
                let w: Vec<String> = v.weights().iter().map(u64::to_string).collect();
                write!(f, "scoring:{}", w.join(","))
            }
            Rule::Cup(t) => write!(f, "cup:{}", t.display(p)),
            Rule::Copeland => f.write_str("copeland"),
            Rule::Copeland2 => f.write_str("copeland2"),
            Rule::PluralityRunoff => f.write_str("runoff"),
            Rule::Stv => f.write_str("stv"),
            Rule::Hybrid(pairing) => {
                f.write_str("hybrid:")?;
                for &(a, b) in &pairing.pairs {
                    write!(f, "({},{})", p.label(a), p.label(b))?;
                }
                if let Some(c) = pairing.bye {
                    write!(f, "({})", p.label(c))?;
                }
                Ok(())
            }
        }
    }
}

/// Builds a rule's statistic and decides outcomes; shared by winner
/// determination and the completion searches.
#[derive(Clone, Copy)]
pub(crate) struct Evaluator<'a> {
    pub rule: &'a Rule,
    pub m: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(rule: &'a Rule, m: usize) -> Result<Self> {
        rule.validate(m)?;
        Ok(Evaluator { rule, m })
    }

    fn scoring(&self) -> &'a [u64] {
        match self.rule {
            Rule::Scoring(v) => v.weights(),
            _ => &[],
        }
    }

    pub fn empty(&self) -> Stat {
        Stat::empty(self.rule.stat_kind(), self.m)
    }

    pub fn add(&self, stat: &mut Stat, order: &[Candidate], w: u64) -> Result<()> {
        stat.add(self.scoring(), order, w)
    }

    pub fn stat_of(&self, ballots: &[WeightedBallot]) -> Result<Stat> {
        let mut stat = self.empty();
        for b in ballots {
            self.add(&mut stat, b.order(), b.weight())?;
        }
        Ok(stat)
    }

    pub fn decide(&self, stat: &Stat) -> Result<Decision> {
        decide::decide(self.rule, stat, self.m)
    }
}

fn complete_input(profile: &Profile) -> Result<Vec<WeightedBallot>> {
    profile.validate()?;
    profile.complete_ballots()
}

/// Tie-resolution outcomes of `rule` on a complete profile.
pub fn decision(rule: &Rule, profile: &Profile) -> Result<Decision> {
    let ballots = complete_input(profile)?;
    let ev = Evaluator::new(rule, profile.num_candidates())?;
    ev.decide(&ev.stat_of(&ballots)?)
}

pub fn winner(rule: &Rule, profile: &Profile, tb: TieBreak) -> Result<Candidate> {
    tb.validate(profile.num_candidates())?;
    Ok(decision(rule, profile)?.winner(tb))
}

/// Pairwise wins minus pairwise losses; exact halves count as neither.
pub fn copeland_score(profile: &Profile, c: Candidate) -> Result<i64> {
    let ballots = complete_input(profile)?;
    let m = profile.num_candidates();
    if c.0 >= m {
        return Err(Error::InvalidRule(format!("unknown candidate {c}")));
    }
    let ev = Evaluator::new(&Rule::Copeland, m)?;
    let Stat::Pairwise { total, upper } = ev.stat_of(&ballots)? else {
        unreachable!()
    };
    Ok(decide::copeland_scores(&Pairwise::new(m, total, &upper), m)[c.0])
}

pub fn cup_winner(agenda: &AgendaTree, profile: &Profile, tb: TieBreak) -> Result<Candidate> {
    winner(&Rule::Cup(agenda.clone()), profile, tb)
}

pub fn hybrid_winner(pairing: &Pairing, profile: &Profile, tb: TieBreak) -> Result<Candidate> {
    winner(&Rule::Hybrid(pairing.clone()), profile, tb)
}

/// The Condorcet winner of a complete profile, if there is one.
pub fn condorcet_winner(profile: &Profile) -> Result<Option<Candidate>> {
    let ballots = complete_input(profile)?;
    let m = profile.num_candidates();
    let ev = Evaluator::new(&Rule::Copeland, m)?;
    let Stat::Pairwise { total, upper } = ev.stat_of(&ballots)? else {
        unreachable!()
    };
    let pw = Pairwise::new(m, total, &upper);
    Ok(profile.candidates().find(|&c| {
        profile
            .candidates()
            .all(|d| d == c || pw.contest(c, d) == std::cmp::Ordering::Greater)
    }))
}
