//! Line-oriented profile text format.
//!
//! ```text
//! candidates: A B C D
//! vote w=3 C>D>A>B
//! partial w=2 pairs=A>C,B>C locked=A>C
//! unknown w=5
//! axis: A B C D
//! ```

use std::fmt;

use super::{Axis, Ballot, Candidate, PartialBallot, Profile};
use crate::error::{Error, Result};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

fn parse_weight(value: &str, line: usize) -> Result<u64> {
    let w: u64 = value
        .parse()
        .map_err(|_| Error::parse(line, format!("bad weight {value:?}")))?;
    if w == 0 {
        return Err(Error::parse(line, "weight must be positive"));
    }
    Ok(w)
}

fn lookup(profile: &Profile, label: &str, line: usize) -> Result<Candidate> {
    profile
        .candidate(label)
        .ok_or_else(|| Error::parse(line, format!("unknown candidate {label:?}")))
}

/// Parses `A>B>C` into a candidate sequence.
pub(crate) fn parse_chain(profile: &Profile, text: &str, line: usize) -> Result<Vec<Candidate>> {
    text.split('>')
        .map(|l| lookup(profile, l.trim(), line))
        .collect()
}

/// Parses `A>C,B>C` (chains allowed) into ordered pairs.
fn parse_pairs(profile: &Profile, text: &str, line: usize) -> Result<Vec<(Candidate, Candidate)>> {
    let mut pairs = Vec::new();
    for item in text.split(',').filter(|s| !s.trim().is_empty()) {
        let chain = parse_chain(profile, item, line)?;
        if chain.len() < 2 {
            return Err(Error::parse(line, format!("bad pair {item:?}")));
        }
        pairs.extend(chain.windows(2).map(|w| (w[0], w[1])));
    }
    Ok(pairs)
}

/// Shared by the profile and distribution parsers: applies one non-empty,
/// comment-stripped line to `profile`, creating it on `candidates:`.
pub(crate) fn apply_line(profile: &mut Option<Profile>, text: &str, line: usize) -> Result<()> {
    if let Some(rest) = text.strip_prefix("candidates:") {
        if profile.is_some() {
            return Err(Error::parse(line, "duplicate candidates line"));
        }
        let labels: Vec<&str> = rest.split_whitespace().collect();
        *profile = Some(Profile::new(labels).map_err(|e| Error::parse(line, e.to_string()))?);
        return Ok(());
    }
    let p = profile
        .as_mut()
        .ok_or_else(|| Error::parse(line, "candidates line must come first"))?;
    let m = p.num_candidates();
    if let Some(rest) = text.strip_prefix("axis:") {
        let order = rest
            .split_whitespace()
            .map(|l| lookup(p, l, line))
            .collect::<Result<Vec<_>>>()?;
        let axis = Axis::new(order).map_err(|e| Error::parse(line, e.to_string()))?;
        return p
            .set_axis(axis)
            .map_err(|e| Error::parse(line, e.to_string()));
    }
    let mut tokens = text.split_whitespace();
    let keyword = tokens.next().unwrap_or_default();
    let mut weight = 1;
    let mut pairs = None;
    let mut locked = None;
    let mut order = None;
    for tok in tokens {
        if let Some(v) = tok.strip_prefix("w=") {
            weight = parse_weight(v, line)?;
        } else if let Some(v) = tok.strip_prefix("pairs=") {
            pairs = Some(parse_pairs(p, v, line)?);
        } else if let Some(v) = tok.strip_prefix("locked=") {
            locked = Some(parse_pairs(p, v, line)?);
        } else if keyword == "vote" && order.is_none() {
            order = Some(parse_chain(p, tok, line)?);
        } else {
            return Err(Error::parse(line, format!("unexpected token {tok:?}")));
        }
    }
    let wrap = |e: Error| Error::parse(line, e.to_string());
    match keyword {
        "vote" => {
            if pairs.is_some() || locked.is_some() {
                return Err(Error::parse(line, "vote lines take no pairs"));
            }
            let order = order.ok_or_else(|| Error::parse(line, "vote without an order"))?;
            p.push_vote(order, weight).map_err(wrap)
        }
        "partial" => {
            let mut b = PartialBallot::new(m, &pairs.unwrap_or_default(), weight).map_err(wrap)?;
            if let Some(l) = locked {
                b = b.with_locked(&l).map_err(wrap)?;
            }
            p.push_partial(b).map_err(wrap)
        }
        "unknown" => {
            if pairs.is_some() || locked.is_some() {
                return Err(Error::parse(line, "unknown lines take only a weight"));
            }
            p.push_unknown(weight).map_err(wrap)
        }
        other => Err(Error::parse(line, format!("unknown directive {other:?}"))),
    }
}

pub(crate) fn parse_profile(text: &str) -> Result<Profile> {
    let mut profile = None;
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if !line.is_empty() {
            apply_line(&mut profile, line, i + 1)?;
        }
    }
    profile.ok_or_else(|| Error::parse(0, "missing candidates line"))
}

pub(crate) fn strip(line: &str) -> &str {
    strip_comment(line)
}

fn pair_list(p: &Profile, pairs: &[(Candidate, Candidate)]) -> String {
    pairs
        .iter()
        .map(|&(a, b)| format!("{}>{}", p.label(a), p.label(b)))
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn write_ballot(p: &Profile, b: &Ballot, f: &mut impl fmt::Write) -> fmt::Result {
    match b {
        Ballot::Complete(v) => writeln!(f, "vote w={} {}", v.weight(), p.order_string(v.order())),
        Ballot::Partial(pb) => {
            write!(f, "partial w={}", pb.weight())?;
            let pairs = pb.pairs();
            if !pairs.is_empty() {
                write!(f, " pairs={}", pair_list(p, &pairs))?;
            }
            let locked = pb.locked_pairs();
            if !locked.is_empty() {
                write!(f, " locked={}", pair_list(p, &locked))?;
            }
            writeln!(f)
        }
    }
}

pub(crate) fn write_profile(p: &Profile, f: &mut impl fmt::Write) -> fmt::Result {
    writeln!(f, "candidates: {}", p.labels().join(" "))?;
    if let Some(axis) = p.axis() {
        let labels: Vec<&str> = axis.order().iter().map(|c| p.label(*c)).collect();
        writeln!(f, "axis: {}", labels.join(" "))?;
    }
    for b in p.ballots() {
        write_ballot(p, b, f)?;
    }
    for w in p.unknown_blocks() {
        writeln!(f, "unknown w={w}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a sample
candidates: A B C D
vote w=3 C>D>A>B
partial w=2 pairs=A>C,B>C locked=A>C   # trailing comment
partial w=1
vote w=3 C>D>A>B
unknown w=5
axis: A B C D
";

    #[test]
    fn parses_every_directive() {
        let p = Profile::parse(SAMPLE).unwrap();
        assert_eq!(p.num_candidates(), 4);
        assert_eq!(p.ballots().len(), 4);
        assert_eq!(p.unknown_blocks(), &[5]);
        assert_eq!(p.cast_weight().unwrap(), 9);
        assert_eq!(p.axis().unwrap().order().len(), 4);
        let Ballot::Partial(pb) = &p.ballots()[1] else {
            panic!()
        };
        assert!(pb.is_locked(Candidate(0), Candidate(2)));
        assert!(!pb.is_locked(Candidate(1), Candidate(2)));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let p = Profile::parse(SAMPLE).unwrap();
        let text = p.to_string();
        assert_eq!(Profile::parse(&text).unwrap(), p);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = Profile::parse("candidates: A B\nvote w=1 A>X\n").unwrap_err();
        assert_eq!(err, Error::parse(2, "unknown candidate \"X\""));
        assert!(matches!(
            Profile::parse("vote w=1 A>B"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Profile::parse("candidates: A B\npartial w=1 pairs=A>B,B>A"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Profile::parse("candidates: A B\nvote w=0 A>B"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Profile::parse("candidates: A B\nballot A>B"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
