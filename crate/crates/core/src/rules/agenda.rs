use std::fmt;

use crate::error::{Error, Result};
use crate::profile::{Candidate, CandidateSet, Profile};

/// The agenda of a cup: a binary tree with one candidate on each leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AgendaTree {
    Leaf(Candidate),
    Match(Box<AgendaTree>, Box<AgendaTree>),
}

impl AgendaTree {
    pub fn leaf(c: Candidate) -> Self {
        AgendaTree::Leaf(c)
    }

    pub fn pair(left: AgendaTree, right: AgendaTree) -> Self {
        AgendaTree::Match(Box::new(left), Box::new(right))
    }

    /// Left-deep agenda: the first two candidates meet, the winner meets
    /// the third, and so on.
    pub fn ladder(order: &[Candidate]) -> Option<Self> {
        let (first, rest) = order.split_first()?;
        Some(rest.iter().fold(AgendaTree::Leaf(*first), |acc, &c| {
            AgendaTree::pair(acc, AgendaTree::Leaf(c))
        }))
    }

    pub fn leaves(&self) -> Vec<Candidate> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Candidate>) {
        match self {
            AgendaTree::Leaf(c) => out.push(*c),
            AgendaTree::Match(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    fn depth_range(&self) -> (usize, usize) {
        match self {
            AgendaTree::Leaf(_) => (0, 0),
            AgendaTree::Match(l, r) => {
                let (lmin, lmax) = l.depth_range();
                let (rmin, rmax) = r.depth_range();
                (lmin.min(rmin) + 1, lmax.max(rmax) + 1)
            }
        }
    }

    /// Leaf depths differ by at most one.
    pub fn is_balanced(&self) -> bool {
        let (lo, hi) = self.depth_range();
        hi - lo <= 1
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        let leaves = self.leaves();
        let set: CandidateSet = leaves.iter().copied().collect();
        if leaves.len() != m || set != CandidateSet::all(m) || leaves.iter().any(|c| c.0 >= m) {
            return Err(Error::InvalidRule(
                "agenda leaves must list every candidate exactly once".into(),
            ));
        }
        Ok(())
    }

    /// Parses `((A,B),(C,D))`.
    pub fn parse(text: &str, profile: &Profile) -> Result<Self> {
        let tokens: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_node(&tokens, &mut pos, profile)?;
        if pos != tokens.len() {
            return Err(Error::InvalidRule(format!(
                "trailing input in agenda {text:?}"
            )));
        }
        tree.validate(profile.num_candidates())?;
        Ok(tree)
    }

    pub fn display<'a>(&'a self, profile: &'a Profile) -> impl fmt::Display + 'a {
        AgendaDisplay {
            tree: self,
            profile,
        }
    }
}

fn parse_node(tokens: &[char], pos: &mut usize, profile: &Profile) -> Result<AgendaTree> {
    if tokens.get(*pos) == Some(&'(') {
        *pos += 1;
        let left = parse_node(tokens, pos, profile)?;
        if tokens.get(*pos) != Some(&',') {
            return Err(Error::InvalidRule("expected ',' in agenda".into()));
        }
        *pos += 1;
        let right = parse_node(tokens, pos, profile)?;
        if tokens.get(*pos) != Some(&')') {
            return Err(Error::InvalidRule("expected ')' in agenda".into()));
        }
        *pos += 1;
        return Ok(AgendaTree::pair(left, right));
    }
    let start = *pos;
    while *pos < tokens.len() && !"(),".contains(tokens[*pos]) {
        *pos += 1;
    }
    let label: String = tokens[start..*pos].iter().collect();
    profile
        .candidate(&label)
        .map(AgendaTree::Leaf)
        .ok_or_else(|| Error::InvalidRule(format!("unknown candidate {label:?} in agenda")))
}

struct AgendaDisplay<'a> {
    tree: &'a AgendaTree,
    profile: &'a Profile,
}

impl fmt::Display for AgendaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tree {
            AgendaTree::Leaf(c) => write!(f, "{}", self.profile.label(*c)),
            AgendaTree::Match(l, r) => write!(
                f,
                "({},{})",
                l.display(self.profile),
                r.display(self.profile)
            ),
        }
    }
}
