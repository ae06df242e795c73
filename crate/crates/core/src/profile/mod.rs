//! Candidates, weighted ballots and profiles, including incomplete ones.
//!
//! A profile mixes complete ballots, partial ballots (a consistent set of
//! ordered pairs with a weight) and blocks of wholly unknown weight. Each
//! unknown block is one agent of the given weight whose vote is not known.

mod extensions;
pub(crate) mod format;
mod relation;

use std::collections::HashSet;
use std::fmt;

pub use extensions::{
    count_linear_extensions, is_single_peaked, linear_extensions, single_peaked_extensions,
    LinearExtensions,
};
pub(crate) use extensions::{count_sp_extensions, extensions_of, sp_extensions_of};
pub(crate) use relation::Relation;

use crate::error::{add_weight, Error, Result};

/// Profiles support at most this many candidates (bitmask relations).
pub const MAX_CANDIDATES: usize = 64;

/// A candidate, referred to by its dense index `0..m` in the election.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate(pub usize);

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A small set of candidates as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CandidateSet(pub u64);

impl CandidateSet {
    pub fn empty() -> Self {
        CandidateSet(0)
    }

    pub fn all(m: usize) -> Self {
        if m >= 64 {
            CandidateSet(u64::MAX)
        } else {
            CandidateSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(c: Candidate) -> Self {
        CandidateSet(1 << c.0)
    }

    pub fn insert(&mut self, c: Candidate) {
        self.0 |= 1 << c.0;
    }

    pub fn remove(&mut self, c: Candidate) {
        self.0 &= !(1 << c.0);
    }

    pub fn contains(&self, c: Candidate) -> bool {
        self.0 >> c.0 & 1 == 1
    }

    pub fn union(self, other: Self) -> Self {
        CandidateSet(self.0 | other.0)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Lowest-indexed member.
    pub fn first(&self) -> Option<Candidate> {
        (self.0 != 0).then(|| Candidate(self.0.trailing_zeros() as usize))
    }

    pub fn iter(&self) -> impl Iterator<Item = Candidate> + '_ {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1).map(Candidate)
    }
}

impl FromIterator<Candidate> for CandidateSet {
    fn from_iter<I: IntoIterator<Item = Candidate>>(iter: I) -> Self {
        let mut s = CandidateSet::empty();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

fn check_permutation(order: &[Candidate], m: usize) -> Result<()> {
    if order.len() != m {
        return Err(Error::InvalidProfile(format!(
            "ballot ranks {} candidates, expected {m}",
            order.len()
        )));
    }
    let mut seen = 0u64;
    for c in order {
        if c.0 >= m || seen >> c.0 & 1 == 1 {
            return Err(Error::InvalidProfile(format!(
                "ballot is not a permutation of 0..{m}"
            )));
        }
        seen |= 1 << c.0;
    }
    Ok(())
}

/// A complete vote: a total order over all candidates with a positive weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedBallot {
    order: Vec<Candidate>,
    weight: u64,
}

impl WeightedBallot {
    pub fn new(order: Vec<Candidate>, weight: u64) -> Result<Self> {
        if weight == 0 {
            return Err(Error::InvalidProfile(
                "ballot weight must be positive".into(),
            ));
        }
        check_permutation(&order, order.len())?;
        Ok(WeightedBallot { order, weight })
    }

    pub fn order(&self) -> &[Candidate] {
        &self.order
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn prefers(&self, a: Candidate, b: Candidate) -> bool {
        let pa = self.order.iter().position(|&c| c == a);
        let pb = self.order.iter().position(|&c| c == b);
        matches!((pa, pb), (Some(x), Some(y)) if x < y)
    }

    pub fn to_partial(&self) -> PartialBallot {
        let closure = Relation::from_order(&self.order);
        PartialBallot {
            weight: self.weight,
            locked: Relation::empty(self.order.len()),
            closure,
        }
    }
}

/// An incomplete vote. Only the transitive closure of the declared pairs is
/// stored; `locked` marks pairs that manipulation may never alter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialBallot {
    closure: Relation,
    locked: Relation,
    weight: u64,
}

impl PartialBallot {
    pub fn new(m: usize, pairs: &[(Candidate, Candidate)], weight: u64) -> Result<Self> {
        if weight == 0 {
            return Err(Error::InvalidProfile(
                "ballot weight must be positive".into(),
            ));
        }
        if m > MAX_CANDIDATES {
            return Err(Error::InvalidProfile(format!(
                "at most {MAX_CANDIDATES} candidates"
            )));
        }
        if let Some(&(a, b)) = pairs.iter().find(|(a, b)| a.0 >= m || b.0 >= m) {
            return Err(Error::InvalidProfile(format!(
                "pair ({a}, {b}) out of range"
            )));
        }
        let closure = Relation::closure_of(m, pairs)
            .ok_or_else(|| Error::Inconsistent("pairs contain a cycle".into()))?;
        Ok(PartialBallot {
            closure,
            locked: Relation::empty(m),
            weight,
        })
    }

    /// Marks pairs as locked. Every locked pair must follow from the ballot.
    pub fn with_locked(mut self, pairs: &[(Candidate, Candidate)]) -> Result<Self> {
        let m = self.closure.len();
        let locked = Relation::closure_of(m, pairs)
            .ok_or_else(|| Error::Inconsistent("locked pairs contain a cycle".into()))?;
        if !locked.is_subset_of(&self.closure) {
            return Err(Error::Inconsistent(
                "locked pairs are not implied by the ballot".into(),
            ));
        }
        self.locked = locked;
        Ok(self)
    }

    pub fn num_candidates(&self) -> usize {
        self.closure.len()
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn prefers(&self, a: Candidate, b: Candidate) -> bool {
        self.closure.prefers(a, b)
    }

    pub fn is_locked(&self, a: Candidate, b: Candidate) -> bool {
        self.locked.prefers(a, b)
    }

    pub fn is_total(&self) -> bool {
        self.closure.is_total()
    }

    /// Covering pairs of the closure, sorted.
    pub fn pairs(&self) -> Vec<(Candidate, Candidate)> {
        self.closure.covering_pairs()
    }

    pub fn closure_pairs(&self) -> Vec<(Candidate, Candidate)> {
        self.closure.pairs()
    }

    pub fn locked_pairs(&self) -> Vec<(Candidate, Candidate)> {
        self.locked.covering_pairs()
    }

    pub fn has_locked(&self) -> bool {
        self.locked.pair_count() > 0
    }

    pub fn to_weighted(&self) -> Option<WeightedBallot> {
        self.closure.as_order().map(|order| WeightedBallot {
            order,
            weight: self.weight,
        })
    }

    /// The same ballot restricted to its locked pairs: everything else becomes free.
    pub fn locked_only(&self) -> PartialBallot {
        PartialBallot {
            closure: self.locked.clone(),
            locked: self.locked.clone(),
            weight: self.weight,
        }
    }

    pub fn admits(&self, order: &[Candidate]) -> bool {
        order.len() == self.closure.len() && self.closure.admits(order)
    }

    pub(crate) fn relation(&self) -> &Relation {
        &self.closure
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ballot {
    Complete(WeightedBallot),
    Partial(PartialBallot),
}

impl Ballot {
    pub fn weight(&self) -> u64 {
        match self {
            Ballot::Complete(b) => b.weight,
            Ballot::Partial(b) => b.weight,
        }
    }

    pub fn prefers(&self, a: Candidate, b: Candidate) -> bool {
        match self {
            Ballot::Complete(x) => x.prefers(a, b),
            Ballot::Partial(x) => x.prefers(a, b),
        }
    }

    /// The ballot as a complete vote, if its order is fully specified.
    pub fn as_complete(&self) -> Option<WeightedBallot> {
        match self {
            Ballot::Complete(b) => Some(b.clone()),
            Ballot::Partial(p) => p.to_weighted(),
        }
    }

    pub fn to_partial(&self) -> PartialBallot {
        match self {
            Ballot::Complete(b) => b.to_partial(),
            Ballot::Partial(p) => p.clone(),
        }
    }
}

/// A left-to-right ordering of the candidates for single-peaked preferences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    order: Vec<Candidate>,
    position: Vec<usize>,
}

impl Axis {
    pub fn new(order: Vec<Candidate>) -> Result<Self> {
        check_permutation(&order, order.len())?;
        let mut position = vec![0; order.len()];
        for (i, c) in order.iter().enumerate() {
            position[c.0] = i;
        }
        Ok(Axis { order, position })
    }

    pub fn order(&self) -> &[Candidate] {
        &self.order
    }

    pub fn position(&self, c: Candidate) -> usize {
        self.position[c.0]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// An election: candidate labels, ballots, unknown blocks and options.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    candidates: Vec<String>,
    ballots: Vec<Ballot>,
    unknown: Vec<u64>,
    axis: Option<Axis>,
    strict_odd: bool,
}

impl Profile {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let candidates: Vec<String> = labels.into_iter().map(Into::into).collect();
        if candidates.is_empty() {
            return Err(Error::InvalidProfile("no candidates".into()));
        }
        if candidates.len() > MAX_CANDIDATES {
            return Err(Error::InvalidProfile(format!(
                "at most {MAX_CANDIDATES} candidates"
            )));
        }
        let mut seen = HashSet::new();
        for l in &candidates {
            if l.is_empty()
                || l.chars()
                    .any(|ch| ch.is_whitespace() || ",>()#=".contains(ch))
            {
                return Err(Error::InvalidProfile(format!("bad candidate label {l:?}")));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidProfile(format!("duplicate candidate {l}")));
            }
        }
        Ok(Profile {
            candidates,
            ballots: Vec::new(),
            unknown: Vec::new(),
            axis: None,
            strict_odd: true,
        })
    }

    /// Same candidates and options, no ballots.
    pub fn empty_like(&self) -> Self {
        Profile {
            candidates: self.candidates.clone(),
            ballots: Vec::new(),
            unknown: Vec::new(),
            axis: self.axis.clone(),
            strict_odd: self.strict_odd,
        }
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.candidates
    }

    pub fn label(&self, c: Candidate) -> &str {
        &self.candidates[c.0]
    }

    pub fn candidate(&self, label: &str) -> Option<Candidate> {
        self.candidates
            .iter()
            .position(|l| l == label)
            .map(Candidate)
    }

    pub fn candidates(&self) -> impl Iterator<Item = Candidate> {
        (0..self.candidates.len()).map(Candidate)
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn unknown_blocks(&self) -> &[u64] {
        &self.unknown
    }

    pub fn axis(&self) -> Option<&Axis> {
        self.axis.as_ref()
    }

    pub fn strict_odd(&self) -> bool {
        self.strict_odd
    }

    pub fn set_strict_odd(&mut self, strict: bool) {
        self.strict_odd = strict;
    }

    pub fn set_axis(&mut self, axis: Axis) -> Result<()> {
        if axis.len() != self.num_candidates() {
            return Err(Error::InvalidProfile(
                "axis must list every candidate".into(),
            ));
        }
        self.axis = Some(axis);
        Ok(())
    }

    pub fn push_vote(&mut self, order: Vec<Candidate>, weight: u64) -> Result<()> {
        check_permutation(&order, self.num_candidates())?;
        self.ballots
            .push(Ballot::Complete(WeightedBallot::new(order, weight)?));
        Ok(())
    }

    pub fn push_partial(&mut self, ballot: PartialBallot) -> Result<()> {
        if ballot.num_candidates() != self.num_candidates() {
            return Err(Error::InvalidProfile(
                "partial ballot over a different candidate set".into(),
            ));
        }
        self.ballots.push(Ballot::Partial(ballot));
        Ok(())
    }

    pub fn push_ballot(&mut self, ballot: Ballot) -> Result<()> {
        match ballot {
            Ballot::Complete(b) => {
                check_permutation(&b.order, self.num_candidates())?;
                self.ballots.push(Ballot::Complete(b));
                Ok(())
            }
            Ballot::Partial(p) => self.push_partial(p),
        }
    }

    pub fn push_unknown(&mut self, weight: u64) -> Result<()> {
        if weight == 0 {
            return Err(Error::InvalidProfile(
                "unknown weight must be positive".into(),
            ));
        }
        self.unknown.push(weight);
        Ok(())
    }

    pub fn cast_weight(&self) -> Result<u64> {
        self.ballots
            .iter()
            .try_fold(0, |acc, b| add_weight(acc, b.weight()))
    }

    pub fn unknown_weight(&self) -> Result<u64> {
        self.unknown
            .iter()
            .try_fold(0, |acc, &w| add_weight(acc, w))
    }

    pub fn total_weight(&self) -> Result<u64> {
        add_weight(self.cast_weight()?, self.unknown_weight()?)
    }

    /// Every ballot fully specified and no unknown weight.
    pub fn is_complete(&self) -> bool {
        self.unknown.is_empty() && self.ballots.iter().all(|b| b.as_complete().is_some())
    }

    /// Only complete ballots plus unknown blocks (the partial-vote model).
    pub fn is_partial_vote(&self) -> bool {
        self.ballots.iter().all(|b| b.as_complete().is_some())
    }

    pub fn validate(&self) -> Result<()> {
        let total = self.total_weight()?;
        if total == 0 {
            return Err(Error::InvalidProfile("profile has no weight".into()));
        }
        if self.strict_odd && total % 2 == 0 {
            return Err(Error::InvalidProfile(format!(
                "total weight {total} is even (strict odd-weight mode is on)"
            )));
        }
        Ok(())
    }

    /// The complete ballots of a complete profile.
    pub fn complete_ballots(&self) -> Result<Vec<WeightedBallot>> {
        if !self.unknown.is_empty() {
            return Err(Error::InvalidProfile("profile has unknown weight".into()));
        }
        self.ballots
            .iter()
            .map(|b| {
                b.as_complete()
                    .ok_or_else(|| Error::InvalidProfile("profile has partial ballots".into()))
            })
            .collect()
    }

    /// A complete profile with the given ballots replacing all ballots and unknown blocks.
    pub fn with_complete_ballots(&self, ballots: Vec<WeightedBallot>) -> Profile {
        let mut p = self.empty_like();
        p.ballots = ballots.into_iter().map(Ballot::Complete).collect();
        p
    }

    pub fn parse(text: &str) -> Result<Self> {
        format::parse_profile(text)
    }

    pub fn order_string(&self, order: &[Candidate]) -> String {
        order
            .iter()
            .map(|c| self.label(*c))
            .collect::<Vec<_>>()
            .join(">")
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format::write_profile(self, f)
    }
}

/// Weighted pairwise tallies of a (possibly incomplete) profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajorityMatrix {
    m: usize,
    total: u64,
    fixed: Vec<u64>,
}

impl MajorityMatrix {
    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Committed weight preferring `a` to `b`.
    pub fn fixed(&self, a: Candidate, b: Candidate) -> u64 {
        self.fixed[a.0 * self.m + b.0]
    }

    /// Weight not yet committed on the `a` versus `b` comparison.
    pub fn free(&self, a: Candidate, b: Candidate) -> u64 {
        if a == b {
            0
        } else {
            self.total - self.fixed(a, b) - self.fixed(b, a)
        }
    }

    /// `a` beats `b` by a strict weighted majority on committed weight alone.
    pub fn majority(&self, a: Candidate, b: Candidate) -> bool {
        2 * self.fixed(a, b) as u128 > self.total as u128
    }
}

pub fn majority_matrix(profile: &Profile) -> Result<MajorityMatrix> {
    profile.validate()?;
    let m = profile.num_candidates();
    let mut fixed = vec![0u64; m * m];
    for ballot in profile.ballots() {
        let w = ballot.weight();
        let rel = match ballot {
            Ballot::Complete(b) => Relation::from_order(&b.order),
            Ballot::Partial(p) => p.closure.clone(),
        };
        for (a, b) in rel.pairs() {
            let cell = &mut fixed[a.0 * m + b.0];
            *cell = add_weight(*cell, w)?;
        }
    }
    Ok(MajorityMatrix {
        m,
        total: profile.total_weight()?,
        fixed,
    })
}
