//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the library's search or rule code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use elicit_core::profile::{Candidate, PartialBallot, Profile};
use elicit_core::rules::{AgendaTree, Rule};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Order = Vec<usize>;
pub type Ballots = [(Order, u64)];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn label(c: usize) -> String {
    ((b'A' + c as u8) as char).to_string()
}

pub fn labels(m: usize) -> Vec<String> {
    (0..m).map(label).collect()
}

pub fn cands(order: &[usize]) -> Vec<Candidate> {
    order.iter().map(|&c| Candidate(c)).collect()
}

pub fn ids(order: &[Candidate]) -> Order {
    order.iter().map(|c| c.0).collect()
}

pub fn random_order(rng: &mut impl Rng, m: usize) -> Order {
    let mut o: Order = (0..m).collect();
    o.shuffle(rng);
    o
}

/// Some pairs implied by a random order.
pub fn random_pairs(rng: &mut impl Rng, m: usize, keep: f64) -> Vec<(usize, usize)> {
    let o = random_order(rng, m);
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if rng.gen_bool(keep) {
                pairs.push((o[i], o[j]));
            }
        }
    }
    pairs
}

/// A profile with complete votes, partial ballots and unknown blocks.
pub fn profile(
    m: usize,
    votes: &Ballots,
    partials: &[(Vec<(usize, usize)>, u64)],
    unknown: &[u64],
) -> Profile {
    let mut p = Profile::new(labels(m)).unwrap();
    for (o, w) in votes {
        p.push_vote(cands(o), *w).unwrap();
    }
    for (pairs, w) in partials {
        let pairs: Vec<_> = pairs
            .iter()
            .map(|&(a, b)| (Candidate(a), Candidate(b)))
            .collect();
        p.push_partial(PartialBallot::new(m, &pairs, *w).unwrap())
            .unwrap();
    }
    for &w in unknown {
        p.push_unknown(w).unwrap();
    }
    p
}

pub fn total(ballots: &Ballots) -> u64 {
    ballots.iter().map(|(_, w)| w).sum()
}

fn pos(order: &[usize], c: usize) -> usize {
    order.iter().position(|&x| x == c).unwrap()
}

/// `n[a][b]`: weight ranking `a` above `b`.
pub fn pairwise(m: usize, ballots: &Ballots) -> Vec<Vec<u64>> {
    let mut n = vec![vec![0; m]; m];
    for (o, w) in ballots {
        for i in 0..m {
            for j in i + 1..m {
                n[o[i]][o[j]] += w;
            }
        }
    }
    n
}

pub fn condorcet_winner(m: usize, ballots: &Ballots) -> Option<usize> {
    let n = pairwise(m, ballots);
    (0..m).find(|&c| (0..m).all(|j| j == c || n[c][j] > n[j][c]))
}

/// Every total order consistent with `pairs`.
pub fn extensions(m: usize, pairs: &[(usize, usize)]) -> Vec<Order> {
    (0..m)
        .permutations(m)
        .filter(|o| pairs.iter().all(|&(a, b)| pos(o, a) < pos(o, b)))
        .collect()
}

/// Cartesian product of option lists; one empty choice if there are none.
pub fn product<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    lists.iter().fold(vec![Vec::new()], |acc, options| {
        acc.into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}

/// Every complete weighted profile obtained by completing the partial
/// ballots and giving each unknown block one order.
pub fn completions(
    m: usize,
    votes: &Ballots,
    partials: &[(Vec<(usize, usize)>, u64)],
    unknown: &[u64],
) -> Vec<Vec<(Order, u64)>> {
    let mut lists: Vec<Vec<(Order, u64)>> = Vec::new();
    for (pairs, w) in partials {
        lists.push(extensions(m, pairs).into_iter().map(|o| (o, *w)).collect());
    }
    for &w in unknown {
        lists.push(extensions(m, &[]).into_iter().map(|o| (o, w)).collect());
    }
    product(&lists)
        .into_iter()
        .map(|choice| votes.iter().cloned().chain(choice).collect())
        .collect()
}

#[derive(Clone, Debug)]
pub enum Tree {
    Leaf(usize),
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn random(rng: &mut impl Rng, m: usize) -> Tree {
        fn build(rng: &mut impl Rng, leaves: &[usize]) -> Tree {
            if leaves.len() == 1 {
                return Tree::Leaf(leaves[0]);
            }
            let cut = rng.gen_range(1..leaves.len());
            Tree::Node(
                Box::new(build(rng, &leaves[..cut])),
                Box::new(build(rng, &leaves[cut..])),
            )
        }
        let leaves = random_order(rng, m);
        build(rng, &leaves)
    }

    pub fn text(&self) -> String {
        match self {
            Tree::Leaf(c) => label(*c),
            Tree::Node(l, r) => format!("({},{})", l.text(), r.text()),
        }
    }

    pub fn agenda(&self, p: &Profile) -> AgendaTree {
        AgendaTree::parse(&self.text(), p).unwrap()
    }

    pub fn rule(&self, p: &Profile) -> Rule {
        Rule::Cup(self.agenda(p))
    }

    /// Candidates that win under some resolution of tied matches.
    pub fn outcomes(&self, n: &[Vec<u64>]) -> BTreeSet<usize> {
        match self {
            Tree::Leaf(c) => BTreeSet::from([*c]),
            Tree::Node(l, r) => {
                let (wl, wr) = (l.outcomes(n), r.outcomes(n));
                let mut out = BTreeSet::new();
                for &x in &wl {
                    for &y in &wr {
                        if n[x][y] >= n[y][x] {
                            out.insert(x);
                        }
                        if n[y][x] >= n[x][y] {
                            out.insert(y);
                        }
                    }
                }
                out
            }
        }
    }
}

fn firsts(m: usize, ballots: &Ballots, alive: &BTreeSet<usize>) -> Vec<u64> {
    let mut f = vec![0; m];
    for (o, w) in ballots {
        if let Some(&c) = o.iter().find(|c| alive.contains(c)) {
            f[c] += w;
        }
    }
    f
}

/// STV winners over every way of breaking elimination ties.
pub fn stv_outcomes(m: usize, ballots: &Ballots) -> BTreeSet<usize> {
    fn go(m: usize, ballots: &Ballots, alive: BTreeSet<usize>, out: &mut BTreeSet<usize>) {
        if alive.len() == 1 {
            out.extend(alive);
            return;
        }
        let f = firsts(m, ballots, &alive);
        let t = total(ballots);
        if let Some(&c) = alive.iter().find(|&&c| 2 * f[c] > t) {
            out.insert(c);
            return;
        }
        let low = alive.iter().map(|&c| f[c]).min().unwrap();
        for &c in alive.iter().filter(|&&c| f[c] == low) {
            let mut rest = alive.clone();
            rest.remove(&c);
            go(m, ballots, rest, out);
        }
    }
    let mut out = BTreeSet::new();
    go(m, ballots, (0..m).collect(), &mut out);
    out
}

/// Pre-round pairwise matches, then plurality among survivors, over every
/// resolution of ties.
pub fn hybrid_outcomes(
    m: usize,
    pairs: &[(usize, usize)],
    bye: Option<usize>,
    ballots: &Ballots,
) -> BTreeSet<usize> {
    let n = pairwise(m, ballots);
    let options: Vec<Vec<usize>> = pairs
        .iter()
        .map(|&(a, b)| {
            let mut o = Vec::new();
            if n[a][b] >= n[b][a] {
                o.push(a);
            }
            if n[b][a] >= n[a][b] {
                o.push(b);
            }
            o
        })
        .collect();
    let mut out = BTreeSet::new();
    for choice in product(&options) {
        let alive: BTreeSet<usize> = choice.into_iter().chain(bye).collect();
        let f = firsts(m, ballots, &alive);
        let best = alive.iter().map(|&c| f[c]).max().unwrap();
        out.extend(alive.iter().copied().filter(|&c| f[c] == best));
    }
    out
}

pub fn copeland_outcomes(m: usize, ballots: &Ballots) -> BTreeSet<usize> {
    let n = pairwise(m, ballots);
    let score = |c: usize| -> i64 {
        (0..m)
            .filter(|&j| j != c)
            .map(|j| (n[c][j] > n[j][c]) as i64 - (n[j][c] > n[c][j]) as i64)
            .sum()
    };
    let best = (0..m).map(score).max().unwrap();
    (0..m).filter(|&c| score(c) == best).collect()
}

/// Whether the bag splits into two halves of equal sum, by subset enumeration.
pub fn has_partition(numbers: &[u64]) -> bool {
    let total: u64 = numbers.iter().sum();
    total.is_multiple_of(2)
        && (0u32..1 << numbers.len()).any(|mask| {
            numbers
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| v)
                .sum::<u64>()
                * 2
                == total
        })
}

/// All bags of up to `max_n` values in `1..=max_v` with an even sum, then
/// `random` more with up to `rand_n` values in `1..=rand_v`.
pub fn sweep_bags(
    max_n: usize,
    max_v: u64,
    random: usize,
    rand_n: usize,
    rand_v: u64,
    seed: u64,
) -> Vec<Vec<u64>> {
    let mut bags: Vec<Vec<u64>> = (1..=max_n)
        .flat_map(|n| (1..=max_v).combinations_with_replacement(n))
        .filter(|b| b.iter().sum::<u64>() % 2 == 0)
        .collect();
    let mut r = rng(seed);
    let mut drawn = 0;
    while drawn < random {
        let n = r.gen_range(1..=rand_n);
        let mut b: Vec<u64> = (0..n).map(|_| r.gen_range(1..=rand_v)).collect();
        if b.iter().sum::<u64>() % 2 == 0 {
            b.sort_unstable();
            bags.push(b);
            drawn += 1;
        }
    }
    bags
}
