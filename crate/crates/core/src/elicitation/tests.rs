use super::*;
use crate::search::DEFAULT_CAP;

fn c(i: usize) -> Candidate {
    Candidate(i)
}

fn parse(text: &str) -> Profile {
    Profile::parse(text).unwrap()
}

#[test]
fn complete_profile_has_one_possible_winner() {
    let p = parse("candidates: A B C\nvote w=2 A>B>C\nvote w=1 B>A>C\n");
    let rule = Rule::parse("plurality", &p).unwrap();
    assert_eq!(
        possible_winners(&rule, &p, DEFAULT_CAP).unwrap(),
        CandidateSet::singleton(c(0))
    );
    assert!(fine_elicitation_over(&rule, &p, DEFAULT_CAP).unwrap());
}

#[test]
fn heavy_unknown_agent_can_elect_anyone() {
    let p = parse("candidates: A B C\nvote w=2 A>B>C\nunknown w=5\n");
    let rule = Rule::parse("plurality", &p).unwrap();
    assert_eq!(
        possible_winners(&rule, &p, DEFAULT_CAP).unwrap(),
        CandidateSet::all(3)
    );
}

#[test]
fn plurality_coarse_examples() {
    let p = parse("candidates: A B C\nvote w=7 A>B>C\nunknown w=2\n");
    let rule = Rule::parse("plurality", &p).unwrap();
    assert!(coarse_elicitation_over(&rule, &p, DEFAULT_CAP).unwrap());

    let p = parse("candidates: A B C\nvote w=4 A>B>C\nvote w=3 B>A>C\nunknown w=2\n");
    assert!(!coarse_elicitation_over(&rule, &p, DEFAULT_CAP).unwrap());

    let p = parse("candidates: A B\nvote w=2 A>B\nunknown w=3\n");
    let rule = Rule::parse("plurality", &p).unwrap();
    assert!(!coarse_elicitation_over(&rule, &p, DEFAULT_CAP).unwrap());
}

#[test]
fn coarse_rejects_partial_ballots() {
    let p = parse("candidates: A B C\npartial w=3 pairs=A>B\n");
    let rule = Rule::Copeland;
    assert!(matches!(
        coarse_elicitation_over(&rule, &p, DEFAULT_CAP),
        Err(Error::ModelMismatch(_))
    ));
}

#[test]
fn cup_coarse_shortcut_matches_search() {
    let p = parse("candidates: A B C D\nvote w=3 A>B>C>D\nvote w=2 D>C>B>A\nunknown w=2\n");
    let rule = Rule::parse("cup:((A,B),(C,D))", &p).unwrap();
    let fast = possible_winners(&rule, &p, DEFAULT_CAP).unwrap();
    let slow = search(&rule, &p, Domain::Any, DEFAULT_CAP, Stop::Exhaust).unwrap();
    assert_eq!(fast, slow);
}

#[test]
fn cup3_examples() {
    let p = parse("candidates: A B\nvote w=2 A>B\nunknown w=1\n");
    let agenda = AgendaTree::parse("(A,B)", &p).unwrap();
    assert!(cup3_fine_over(&agenda, &p).unwrap());

    let p = parse("candidates: A B C\nvote w=1 A>B>C\nvote w=1 B>C>A\nunknown w=3\n");
    let agenda = AgendaTree::parse("((A,B),C)", &p).unwrap();
    assert!(!cup3_fine_over(&agenda, &p).unwrap());

    let p = parse("candidates: A B C D\nvote w=1 A>B>C>D\n");
    let agenda = AgendaTree::parse("((A,B),(C,D))", &p).unwrap();
    assert!(matches!(
        cup3_fine_over(&agenda, &p),
        Err(Error::ModelMismatch(_))
    ));
}

#[test]
fn condorcet_fixed_examples() {
    let p = parse("candidates: A B C\nvote w=3 B>A>C\nvote w=2 B>C>A\n");
    assert_eq!(
        condorcet_winner_fixed(&p).unwrap(),
        CondorcetStatus::True(c(1))
    );

    let p = parse("candidates: A B C\nvote A>B>C\nvote B>C>A\nvote C>A>B\n");
    assert_eq!(condorcet_winner_fixed(&p).unwrap(), CondorcetStatus::False);

    let p = parse("candidates: A B C\nunknown w=3\n");
    assert_eq!(
        condorcet_winner_fixed(&p).unwrap(),
        CondorcetStatus::NotDetermined
    );
}

#[test]
fn single_peaked_restriction_narrows_completions() {
    // C's voter could rank A second, but not on the axis A-B-C
    let p = parse(
        "candidates: A B C\naxis: A B C\nvote w=2 A>B>C\nvote w=2 B>C>A\npartial w=1 pairs=C>B\n",
    );
    let axis = p.axis().unwrap().clone();
    let rule = Rule::parse("cup:((A,B),C)", &p).unwrap();
    assert!(fine_sp_elicitation_over(&rule, &p, &axis, DEFAULT_CAP).unwrap());
    let report = cup_sp_shortcut_report(
        &AgendaTree::parse("((A,B),C)", &p).unwrap(),
        &p,
        &axis,
        DEFAULT_CAP,
    )
    .unwrap();
    assert!(report.exhaustive);
}

#[test]
fn non_single_peaked_ballot_is_rejected() {
    let p = parse("candidates: A B C\naxis: A B C\nvote A>C>B\n");
    let axis = p.axis().unwrap().clone();
    assert!(matches!(
        fine_sp_elicitation_over(&Rule::Stv, &p, &axis, DEFAULT_CAP),
        Err(Error::NotCompletableSp(_))
    ));
}

#[test]
fn hybrid_examples() {
    let p = parse("candidates: A B C D\nvote w=3 A>B>C>D\nvote w=2 B>A>D>C\nvote w=2 C>D>A>B\n");
    let pairing = Pairing::parse("(A,B)(C,D)", &p).unwrap();
    assert!(hybrid_coarse_over(&pairing, &p, DEFAULT_CAP).unwrap());

    let p = parse("candidates: A B C D\nvote w=1 A>B>C>D\nvote w=1 B>A>D>C\nunknown w=5\n");
    let pairing = Pairing::parse("(A,B)(C,D)", &p).unwrap();
    assert!(!hybrid_coarse_over(&pairing, &p, DEFAULT_CAP).unwrap());
}

#[test]
fn hybrid_shortcut_matches_search() {
    let p = parse("candidates: A B C D E\nvote w=3 A>B>C>D>E\nvote w=2 E>D>B>A>C\nvote w=2 C>E>A>B>D\nunknown w=2\n");
    let pairing = Pairing::parse("(A,B)(C,D)(E)", &p).unwrap();
    let fast = hybrid_coarse_over(&pairing, &p, DEFAULT_CAP).unwrap();
    let slow = coarse_elicitation_over(&Rule::Hybrid(pairing), &p, DEFAULT_CAP).unwrap();
    assert_eq!(fast, slow);
}

#[test]
fn hybrid_counts_transferred_votes() {
    // first-place counts alone leave B and D able to catch C; once the
    // pre-round losers' ballots move to C, nothing can
    let p = parse(
        "candidates: A B C D\nvote w=2 C>A>B>D\nvote w=4 B>C>D>A\nvote w=4 D>C>A>B\nvote w=2 A>B>C>D\nunknown w=3\n",
    );
    let pairing = Pairing::parse("(D,C)(B,A)", &p).unwrap();
    assert!(hybrid_coarse_over(&pairing, &p, DEFAULT_CAP).unwrap());
    let rule = Rule::Hybrid(pairing);
    assert_eq!(possible_winners(&rule, &p, DEFAULT_CAP).unwrap(), CandidateSet::singleton(c(2)));
}
