mod oracle;

use std::collections::BTreeSet;

use elicit_core::elicitation::{fine_sp_elicitation_over, possible_winners};
use elicit_core::manipulation::{preference_manipulate, ManipulationInstance};
use elicit_core::profile::{is_single_peaked, Axis, Candidate, PartialBallot, Profile};
use elicit_core::reductions::has_partition_dp;
use elicit_core::rules::{Rule, TieBreak};
use oracle::*;
use proptest::prelude::*;
use rand::Rng;

const CAP: u64 = 1_000_000;

type Partials = Vec<(Vec<(usize, usize)>, u64)>;

/// A small incomplete profile with an odd total weight.
fn instance(seed: u64, max_m: usize) -> (usize, Vec<(Order, u64)>, Partials, Vec<u64>) {
    let mut r = rng(seed);
    let m = r.gen_range(2..=max_m);
    loop {
        let nv = r.gen_range(0..=3);
        let np = r.gen_range(0..=2);
        let nu = r.gen_range(0..=1);
        let weights: Vec<u64> = (0..nv + np + nu).map(|_| r.gen_range(1..=5)).collect();
        if weights.iter().sum::<u64>() % 2 == 0 {
            continue;
        }
        let votes = weights[..nv]
            .iter()
            .map(|&w| (random_order(&mut r, m), w))
            .collect();
        let partials = weights[nv..nv + np]
            .iter()
            .map(|&w| (random_pairs(&mut r, m, 0.5), w))
            .collect();
        return (m, votes, partials, weights[nv + np..].to_vec());
    }
}

fn scoring_outcomes(weights: &[u64], m: usize, ballots: &[(Order, u64)]) -> BTreeSet<usize> {
    let mut s = vec![0; m];
    for (o, w) in ballots {
        for (i, &c) in o.iter().enumerate() {
            s[c] += weights[i] * w;
        }
    }
    let best = *s.iter().max().unwrap();
    (0..m).filter(|&c| s[c] == best).collect()
}

fn oracle_outcomes(rule: &str, tree: &Tree, m: usize, ballots: &[(Order, u64)]) -> BTreeSet<usize> {
    match rule {
        "plurality" => {
            let mut w = vec![0; m];
            w[0] = 1;
            scoring_outcomes(&w, m, ballots)
        }
        "borda" => scoring_outcomes(&(0..m as u64).rev().collect::<Vec<_>>(), m, ballots),
        "copeland" => copeland_outcomes(m, ballots),
        "stv" => stv_outcomes(m, ballots),
        _ => tree.outcomes(&pairwise(m, ballots)),
    }
}

fn set(s: elicit_core::profile::CandidateSet) -> BTreeSet<usize> {
    s.iter().map(|c| c.0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn possible_winners_match_enumeration(seed in any::<u64>(), which in 0usize..5) {
        let (m, votes, partials, unknown) = instance(seed, 4);
        let p = profile(m, &votes, &partials, &unknown);
        let tree = Tree::random(&mut rng(seed ^ 1), m);
        let name = ["plurality", "borda", "copeland", "stv", "cup"][which];
        let rule = if name == "cup" { tree.rule(&p) } else { Rule::parse(name, &p).unwrap() };
        let expected: BTreeSet<usize> = completions(m, &votes, &partials, &unknown)
            .iter()
            .flat_map(|c| oracle_outcomes(name, &tree, m, c))
            .collect();
        prop_assert_eq!(set(possible_winners(&rule, &p, CAP).unwrap()), expected);
    }

    #[test]
    fn cup_possible_winners_with_unknown_weight(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(2..=4);
        let weights: Vec<u64> = loop {
            let w: Vec<u64> = (0..r.gen_range(2..=5)).map(|_| r.gen_range(1..=5)).collect();
            if w.iter().sum::<u64>() % 2 == 1 {
                break w;
            }
        };
        let votes: Vec<_> = weights[1..].iter().map(|&w| (random_order(&mut r, m), w)).collect();
        let unknown = [weights[0]];
        let p = profile(m, &votes, &[], &unknown);
        let tree = Tree::random(&mut r, m);
        let expected: BTreeSet<usize> = completions(m, &votes, &[], &unknown)
            .iter()
            .flat_map(|c| tree.outcomes(&pairwise(m, c)))
            .collect();
        prop_assert_eq!(set(possible_winners(&tree.rule(&p), &p, CAP).unwrap()), expected);
    }

    #[test]
    fn single_peaked_elicitation_matches_filtered_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(2..=4);
        let axis = random_order(&mut r, m);
        let ax = Axis::new(cands(&axis)).unwrap();
        let sp: Vec<Order> = extensions(m, &[]).into_iter().filter(|o| is_single_peaked(&cands(o), &ax)).collect();
        let (_, _, partials, _) = instance(seed, m.max(2));
        // complete votes drawn from the single-peaked orders, partials kept only if completable
        let mut votes: Vec<(Order, u64)> = (0..r.gen_range(1..=3)).map(|_| (sp[r.gen_range(0..sp.len())].clone(), r.gen_range(1..=5))).collect();
        let partials: Partials = partials
            .into_iter()
            .filter(|(pairs, _)| pairs.iter().all(|&(a, b)| a < m && b < m))
            .filter(|(pairs, _)| sp.iter().any(|o| extensions(m, pairs).contains(o)))
            .collect();
        let total: u64 = votes.iter().map(|v| v.1).chain(partials.iter().map(|p| p.1)).sum();
        votes[0].1 += 1 - total % 2;
        let p = profile(m, &votes, &partials, &[]);
        let lists: Vec<Vec<(Order, u64)>> = partials
            .iter()
            .map(|(pairs, w)| extensions(m, pairs).into_iter().filter(|o| sp.contains(o)).map(|o| (o, *w)).collect())
            .collect();
        let winners: BTreeSet<usize> = product(&lists)
            .into_iter()
            .flat_map(|choice| {
                let all: Vec<_> = votes.iter().cloned().chain(choice).collect();
                stv_outcomes(m, &all)
            })
            .collect();
        prop_assert_eq!(fine_sp_elicitation_over(&Rule::Stv, &p, &ax, CAP).unwrap(), winners.len() == 1);
    }

    #[test]
    fn preference_manipulation_matches_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(2..=3);
        let n = r.gen_range(1..=4);
        let weights: Vec<u64> = loop {
            let w: Vec<u64> = (0..n).map(|_| r.gen_range(1..=4)).collect();
            if w.iter().sum::<u64>() % 2 == 1 {
                break w;
            }
        };
        let mut p = Profile::new(labels(m)).unwrap();
        let mut options = Vec::new();
        for &w in &weights {
            let order = random_order(&mut r, m);
            let locked: Vec<(usize, usize)> = random_pairs(&mut r, m, 0.4)
                .into_iter()
                .filter(|&(a, b)| {
                    order.iter().position(|&c| c == a) < order.iter().position(|&c| c == b)
                })
                .collect();
            let pairs: Vec<_> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                .map(|(i, j)| (Candidate(order[i]), Candidate(order[j]))).collect();
            let lk: Vec<_> = locked.iter().map(|&(a, b)| (Candidate(a), Candidate(b))).collect();
            p.push_partial(PartialBallot::new(m, &pairs, w).unwrap().with_locked(&lk).unwrap()).unwrap();
            options.push(extensions(m, &locked).into_iter().map(|o| (o, w)).collect::<Vec<_>>());
        }
        let target = r.gen_range(0..m);
        let tree = Tree::random(&mut r, m);
        let expected = product(&options).iter().any(|c| tree.outcomes(&pairwise(m, c)).contains(&target));
        let inst = ManipulationInstance { rule: tree.rule(&p), target: Candidate(target), profile: p, coalition: vec![] };
        let got = preference_manipulate(&inst, CAP).unwrap();
        prop_assert_eq!(got.is_some(), expected);
        if let Some(a) = got {
            let done = a.apply(&inst.profile).unwrap();
            prop_assert_eq!(elicit_core::rules::winner(&inst.rule, &done, TieBreak::Favor(inst.target)).unwrap(), inst.target);
        }
    }

    #[test]
    fn partition_dp_matches_subsets(bag in proptest::collection::vec(1u64..20, 1..10)) {
        prop_assert_eq!(has_partition_dp(&bag), has_partition(&bag));
    }

    #[test]
    fn profile_text_round_trips(seed in any::<u64>()) {
        let (m, votes, partials, unknown) = instance(seed, 5);
        let p = profile(m, &votes, &partials, &unknown);
        prop_assert_eq!(Profile::parse(&p.to_string()).unwrap(), p);
    }
}
