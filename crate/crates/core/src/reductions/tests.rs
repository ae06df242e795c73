use super::*;
use crate::elicitation::possible_winners;
use crate::profile::{majority_matrix, Ballot, CandidateSet};
use crate::search::DEFAULT_CAP;

fn bag(text: &str) -> PartitionInstance {
    text.parse().unwrap()
}

fn weights(p: &Profile) -> (Vec<u64>, Vec<u64>) {
    let mut complete = Vec::new();
    let mut partial = Vec::new();
    for b in p.ballots() {
        match b {
            Ballot::Complete(v) => complete.push(v.weight()),
            Ballot::Partial(v) => partial.push(v.weight()),
        }
    }
    (complete, partial)
}

#[test]
fn bags_are_validated_and_sorted() {
    assert_eq!(bag("3,1,2").numbers(), &[1, 2, 3]);
    assert_eq!(bag("3,1,2").half_sum(), 3);
    assert!("1,2".parse::<PartitionInstance>().is_err());
    assert!("0,2".parse::<PartitionInstance>().is_err());
    assert!("".parse::<PartitionInstance>().is_err());
}

#[test]
fn partition_oracles_agree() {
    for p in all_bags(5, 20).into_iter().step_by(7) {
        assert_eq!(
            has_partition_brute(p.numbers()),
            has_partition_dp(p.numbers()),
            "{p}"
        );
    }
    assert!(has_partition_dp(&[1, 1]));
    assert!(!has_partition_dp(&[1, 3]));
    assert!(!has_partition_dp(&[2]));
}

#[test]
fn cup_elicitation_shape() {
    let (p, agenda) = gen_cup_elicitation(&bag("1,1"), false).unwrap();
    assert_eq!(weights(&p), (vec![1, 1, 1, 2], vec![2]));
    let mm = majority_matrix(&p).unwrap();
    let (b, d) = (p.candidate("B").unwrap(), p.candidate("D").unwrap());
    assert_eq!(mm.fixed(d, b), 5);
    let rule = Rule::Cup(agenda);
    let pw = possible_winners(&rule, &p, DEFAULT_CAP).unwrap();
    let cd: CandidateSet = [p.candidate("C").unwrap(), d].into_iter().collect();
    assert_eq!(pw, cd);

    let (p, _) = gen_cup_elicitation(&bag("1,1,2"), false).unwrap();
    assert_eq!(weights(&p).1, vec![2, 4]);
    let k = 2;
    assert_eq!(p.total_weight().unwrap(), 8 * k - 1);

    let (p, agenda) = gen_cup_elicitation(&bag("2"), false).unwrap();
    assert!(weights(&p).1.is_empty());
    assert!(fine_elicitation_over(&Rule::Cup(agenda), &p, DEFAULT_CAP).unwrap());
}

#[test]
fn balanced_variant_keeps_the_answer() {
    for text in ["1,1", "1,3", "1,2,3", "2,2,2"] {
        let p = bag(text);
        let (prof, agenda) = gen_cup_elicitation(&p, true).unwrap();
        assert!(agenda.is_balanced());
        let open = !fine_elicitation_over(&Rule::Cup(agenda), &prof, DEFAULT_CAP).unwrap();
        assert_eq!(open, has_partition_dp(p.numbers()), "{text}");
    }
}

#[test]
fn stv_shape() {
    let (p, axis) = gen_stv_sp_elicitation(&bag("1,1")).unwrap();
    assert_eq!(weights(&p), (vec![5, 4, 4], vec![2, 2]));
    assert_eq!(axis.len(), 3);
    assert_eq!(p.total_weight().unwrap(), 18 - 1);
}

#[test]
fn manipulation_shapes() {
    let inst = gen_cup_preference_manipulation(&bag("1,1")).unwrap();
    assert_eq!(weights(&inst.profile), (vec![1, 1, 1], vec![2, 2]));
    assert!(inst.profile.strict_odd());
    let inst = gen_copeland_preference_manipulation(&bag("1,1")).unwrap();
    assert_eq!(weights(&inst.profile), (vec![1, 1], vec![1, 1]));
    assert_eq!(inst.profile.total_weight().unwrap(), 4);
    assert!(!inst.profile.strict_odd());
}

#[test]
fn spec_examples_hold() {
    let cases = [
        (ReductionKind::CupElicit, "1,1", true),
        (ReductionKind::CupElicit, "1,3", false),
        (ReductionKind::StvSpElicit, "1,1", true),
        (ReductionKind::StvSpElicit, "1,3", false),
        (ReductionKind::CupManip, "1,1", true),
        (ReductionKind::CupManip, "1,3", false),
        (ReductionKind::CupManip, "2,2", true),
        (ReductionKind::CopelandManip, "1,1", true),
        (ReductionKind::CopelandManip, "1,3", false),
        (ReductionKind::CopelandManip, "3,3", true),
    ];
    for (kind, text, expected) in cases {
        let r = verify_reduction(kind, &bag(text), DEFAULT_CAP).unwrap();
        assert!(r.holds(), "{kind} {text}");
        assert_eq!(r.decision, expected, "{kind} {text}");
    }
}

#[test]
fn small_sweep_holds() {
    let bags = all_bags(3, 4);
    for kind in ReductionKind::ALL {
        for r in sweep(kind, &bags, DEFAULT_CAP).unwrap() {
            assert!(r.holds(), "{} {}", r.kind, r.bag);
        }
    }
}
