use super::*;
use crate::manipulation::preference_manipulate;
use crate::search::DEFAULT_CAP;

fn c(i: usize) -> Candidate {
    Candidate(i)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

const TWO: &str = "\
candidates: A B C
scenario p=1/2
vote w=2 A>B>C
vote w=1 C>B>A
scenario p=1/2   # B wins here
vote w=2 B>A>C
vote w=1 C>B>A
";

#[test]
fn parse_and_print_round_trip() {
    let d = ScenarioDistribution::parse(TWO).unwrap();
    assert_eq!(d.scenarios().len(), 2);
    assert_eq!(ScenarioDistribution::parse(&d.to_string()).unwrap(), d);
}

#[test]
fn probabilities_are_exact() {
    let d = ScenarioDistribution::parse(TWO).unwrap();
    let rule = Rule::parse("plurality", d.reference()).unwrap();
    let p = win_probability(&d, &rule, c(0), TieBreak::Lexicographic).unwrap();
    assert_eq!(p, q(1, 2));
    let query = |r| EvaluationQuery {
        target: c(0),
        threshold: r,
        rule: rule.clone(),
        tb: TieBreak::Lexicographic,
    };
    assert!(evaluate(&d, &query(q(0, 1))).unwrap());
    assert!(!evaluate(&d, &query(q(1, 2))).unwrap());
    assert!(!evaluate(&d, &query(q(1, 1))).unwrap());
    assert!(evaluate(&d, &query(q(3, 2))).is_err());
}

#[test]
fn stv_thirds() {
    let text = "\
scenario p=1/3
candidates: A B C
vote w=1 A>B>C
scenario p=1/3
candidates: A B C
vote w=1 B>A>C
scenario p=1/3
candidates: A B C
vote w=1 C>B>A
";
    let d = ScenarioDistribution::parse(text).unwrap();
    let mut sum = BigRational::zero();
    for x in 0..3 {
        let p = win_probability(&d, &Rule::Stv, c(x), TieBreak::Lexicographic).unwrap();
        assert_eq!(p, q(1, 3));
        sum += p;
    }
    assert!(sum.is_one());
}

#[test]
fn invalid_distributions_are_rejected() {
    let short = TWO.replace("p=1/2   #", "p=1/3 #");
    assert!(matches!(
        ScenarioDistribution::parse(&short),
        Err(Error::InvalidDistribution(_))
    ));
    let heavier = TWO
        .replace("vote w=1 C>B>A\n", "vote w=3 C>B>A\n")
        .replacen("vote w=3", "vote w=1", 1);
    assert!(ScenarioDistribution::parse(&heavier).is_err());
    assert!(matches!(
        ScenarioDistribution::parse("candidates: A B\nscenario p=1\nunknown w=1\n"),
        Err(Error::InvalidDistribution(_))
    ));
}

#[test]
fn reduction_matches_manipulation() {
    let text =
        "candidates: A B C\nvote w=2 C>A>B\nvote w=2 B>A>C\npartial w=1 pairs=A>B,B>C locked=A>B\n";
    for target in 0..3 {
        let profile = Profile::parse(text).unwrap();
        let inst = ManipulationInstance {
            rule: Rule::Copeland,
            target: c(target),
            profile,
            coalition: vec![],
        };
        let (dist, query) = reduction_from_preference_manipulation(&inst, DEFAULT_CAP).unwrap();
        assert_eq!(dist.scenarios().len(), 3);
        assert!(dist
            .scenarios()
            .iter()
            .all(|(p, _)| p.ballots().iter().all(|b| b.weight() == 1)));
        let manip = preference_manipulate(&inst, DEFAULT_CAP).unwrap();
        assert_eq!(
            evaluate(&dist, &query).unwrap(),
            manip.is_some(),
            "target {target}"
        );
    }
}

#[test]
fn nothing_manipulable_gives_one_scenario() {
    let profile = Profile::parse("candidates: A B\nvote w=3 A>B\n").unwrap();
    let inst = ManipulationInstance {
        rule: Rule::Copeland,
        target: c(0),
        profile,
        coalition: vec![],
    };
    let (dist, query) = reduction_from_preference_manipulation(&inst, DEFAULT_CAP).unwrap();
    assert_eq!(dist.scenarios().len(), 1);
    assert!(evaluate(&dist, &query).unwrap());
}

#[test]
fn product_of_independent_voters() {
    let base = Profile::parse("candidates: A B\nvote w=1 A>B\n").unwrap();
    let coin = VoterMarginal {
        weight: 1,
        orders: vec![(vec![c(0), c(1)], q(1, 3)), (vec![c(1), c(0)], q(2, 3))],
    };
    let mut d = independent_product(&base, &[coin.clone(), coin], DEFAULT_CAP).unwrap();
    assert_eq!(d.scenarios().len(), 4);
    d.set_strict_odd(true);
    // B needs both coins
    let p = win_probability(&d, &Rule::Copeland, c(1), TieBreak::Lexicographic).unwrap();
    assert_eq!(p, q(4, 9));
}
