//! The `elicit` command line.
//!
//! Results are printed as `key: value` lines. Generated instance files carry
//! `# rule:`, `# target:` and `# no-strict-odd` comments, which stand in for
//! the corresponding flags when those are not given.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::elicitation::{
    coarse_elicitation_over, condorcet_winner_fixed, cup_sp_shortcut_report, fine_elicitation_over,
    fine_sp_elicitation_over, possible_winners, CondorcetStatus,
};
use crate::error::{Error, Result};
use crate::evaluation::{
    evaluate, parse_rational, win_probability, EvaluationQuery, ScenarioDistribution,
};
use crate::manipulation::{
    coalition_manipulate, preference_manipulate, Assignment, ManipulationInstance,
};
use crate::profile::{Axis, CandidateSet, Profile};
use crate::reductions::{
    all_bags, gen_copeland_preference_manipulation, gen_cup_elicitation,
    gen_cup_preference_manipulation, gen_stv_sp_elicitation, sweep, verify_reduction,
    PartitionInstance, ReductionKind,
};
use crate::rules::{decision, Rule, TieBreak};
use crate::search::DEFAULT_CAP;

#[derive(Parser, Debug)]
#[command(name = "elicit", version, about = "Weighted-vote election analysis")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
struct Global {
    /// Voting rule, e.g. `plurality`, `cup:((A,B),C)`, `hybrid:(A,B)(C,D)`
    #[arg(long, global = true)]
    rule: Option<String>,
    /// Tie-break: `lex`, `favor:C` or `against:C`
    #[arg(long, global = true, default_value = "lex")]
    tb: String,
    /// Limit on distinct search states
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Accept profiles whose total weight is even
    #[arg(long, global = true)]
    no_strict_odd: bool,
    /// Run all parallel work on one thread
    #[arg(long, global = true)]
    single_thread: bool,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Winner of a complete profile
    Winner { profile: PathBuf },
    /// Is the winner fixed whatever the unknown agents vote?
    CoarseOver { profile: PathBuf },
    /// Is the winner fixed whatever the missing preferences are?
    FineOver { profile: PathBuf },
    /// Fine elicitation restricted to single-peaked completions
    FineSpOver {
        profile: PathBuf,
        /// Axis such as `A B C`; defaults to the profile's axis line
        #[arg(long)]
        axis: Option<String>,
    },
    /// Does committed weight already fix the Condorcet winner?
    CondorcetFixed { profile: PathBuf },
    /// Candidates that win under some completion
    PossibleWinners { profile: PathBuf },
    /// Can the given ballots, rewritten freely, make the target win?
    ManipulateCoalition {
        profile: PathBuf,
        #[arg(long)]
        target: Option<String>,
        /// 0-based ballot indices, comma separated
        #[arg(long, value_delimiter = ',')]
        coalition: Vec<usize>,
    },
    /// Can the unlocked preferences be set so the target wins?
    ManipulatePrefs {
        profile: PathBuf,
        #[arg(long)]
        target: Option<String>,
    },
    /// Is the target's win probability strictly above r?
    Evaluate {
        distribution: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "0")]
        r: String,
    },
    /// Write the election built from a partition bag
    GenReduction {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        bag: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Five-candidate balanced agenda (cup-elicit only)
        #[arg(long)]
        balanced: bool,
    },
    /// Check constructions against a partition oracle
    VerifyReduction {
        #[arg(long, default_value = "all")]
        kind: String,
        #[arg(long, conflicts_with_all = ["max_n", "max_v"])]
        bag: Option<String>,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 6)]
        max_v: u64,
    },
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = if cli.global.single_thread {
        match rayon::ThreadPoolBuilder::new().num_threads(1).build() {
            Ok(pool) => {
                let (result, buf) = pool.install(|| {
                    let mut buf = Vec::new();
                    (dispatch(&cli, &mut buf), buf)
                });
                out.write_all(&buf).map_err(io).and(result)
            }
            Err(e) => Err(Error::InvalidInstance(e.to_string())),
        }
    } else {
        dispatch(&cli, out)
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidRule(_) => 2,
        Error::CapExceeded { .. } | Error::TieBranchLimit(_) => 3,
        Error::ModelMismatch(_) => 4,
        _ => 1,
    }
}

/// A profile file and the hints in its comments.
struct Input {
    profile: Profile,
    rule: Option<String>,
    target: Option<String>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInstance(format!("cannot read {}: {e}", path.display())))
}

fn hint<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .find_map(|l| l.trim().strip_prefix('#')?.trim().strip_prefix(key))
        .map(str::trim)
}

fn load(path: &Path, g: &Global) -> Result<Input> {
    let text = read(path)?;
    let mut profile = Profile::parse(&text)?;
    let no_strict = g.no_strict_odd
        || text
            .lines()
            .any(|l| l.trim().strip_prefix('#').map(str::trim) == Some("no-strict-odd"));
    profile.set_strict_odd(!no_strict);
    Ok(Input {
        profile,
        rule: hint(&text, "rule:").map(String::from),
        target: hint(&text, "target:").map(String::from),
    })
}

impl Input {
    fn rule(&self, g: &Global) -> Result<Rule> {
        let text = g
            .rule
            .as_deref()
            .or(self.rule.as_deref())
            .ok_or_else(|| Error::InvalidRule("no --rule given".into()))?;
        Rule::parse(text, &self.profile)
    }

    fn target(&self, flag: &Option<String>) -> Result<crate::profile::Candidate> {
        let label = flag
            .as_deref()
            .or(self.target.as_deref())
            .ok_or_else(|| Error::InvalidInstance("no --target given".into()))?;
        candidate(&self.profile, label)
    }
}

fn candidate(p: &Profile, label: &str) -> Result<crate::profile::Candidate> {
    p.candidate(label)
        .ok_or_else(|| Error::InvalidInstance(format!("unknown candidate {label:?}")))
}

fn names(p: &Profile, set: CandidateSet) -> String {
    set.iter().map(|c| p.label(c)).collect::<Vec<_>>().join(" ")
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidInstance(format!("write failed: {e}"))
}

fn answer(out: &mut dyn Write, value: bool) -> Result<()> {
    writeln!(out, "answer: {value}").map_err(io)
}

fn witness(out: &mut dyn Write, p: &Profile, found: Option<Assignment>) -> Result<()> {
    answer(out, found.is_some())?;
    if let Some(a) = found {
        writeln!(out, "witness:").map_err(io)?;
        write!(out, "{}", a.apply(p)?).map_err(io)?;
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let g = &cli.global;
    match &cli.verb {
        Verb::Winner { profile } => {
            let input = load(profile, g)?;
            let tb = TieBreak::parse(&g.tb, &input.profile)?;
            let d = decision(&input.rule(g)?, &input.profile)?;
            writeln!(out, "winner: {}", input.profile.label(d.winner(tb))).map_err(io)
        }
        Verb::CoarseOver { profile } => {
            let input = load(profile, g)?;
            answer(
                out,
                coarse_elicitation_over(&input.rule(g)?, &input.profile, g.cap)?,
            )
        }
        Verb::FineOver { profile } => {
            let input = load(profile, g)?;
            answer(
                out,
                fine_elicitation_over(&input.rule(g)?, &input.profile, g.cap)?,
            )
        }
        Verb::FineSpOver { profile, axis } => {
            let input = load(profile, g)?;
            let p = &input.profile;
            let axis = match axis {
                Some(text) => Axis::new(
                    text.split_whitespace()
                        .map(|l| candidate(p, l))
                        .collect::<Result<_>>()?,
                )?,
                None => p
                    .axis()
                    .cloned()
                    .ok_or_else(|| Error::InvalidInstance("no axis given".into()))?,
            };
            match input.rule(g)? {
                Rule::Cup(agenda) => {
                    let report = cup_sp_shortcut_report(&agenda, p, &axis, g.cap)?;
                    answer(out, report.exhaustive)?;
                    writeln!(out, "condorcet-shortcut: {}", report.shortcut).map_err(io)?;
                    writeln!(out, "diverges: {}", report.diverges()).map_err(io)
                }
                rule => answer(out, fine_sp_elicitation_over(&rule, p, &axis, g.cap)?),
            }
        }
        Verb::CondorcetFixed { profile } => {
            let input = load(profile, g)?;
            match condorcet_winner_fixed(&input.profile)? {
                CondorcetStatus::True(c) => {
                    writeln!(out, "answer: true\nwinner: {}", input.profile.label(c)).map_err(io)
                }
                CondorcetStatus::False => answer(out, false),
                CondorcetStatus::NotDetermined => {
                    writeln!(out, "answer: not-determined").map_err(io)
                }
            }
        }
        Verb::PossibleWinners { profile } => {
            let input = load(profile, g)?;
            let pw = possible_winners(&input.rule(g)?, &input.profile, g.cap)?;
            writeln!(out, "possible: {}", names(&input.profile, pw)).map_err(io)
        }
        Verb::ManipulateCoalition {
            profile,
            target,
            coalition,
        } => {
            let input = load(profile, g)?;
            let inst = ManipulationInstance {
                rule: input.rule(g)?,
                target: input.target(target)?,
                profile: input.profile.clone(),
                coalition: coalition.clone(),
            };
            witness(out, &inst.profile, coalition_manipulate(&inst, g.cap)?)
        }
        Verb::ManipulatePrefs { profile, target } => {
            let input = load(profile, g)?;
            let inst = ManipulationInstance {
                rule: input.rule(g)?,
                target: input.target(target)?,
                profile: input.profile.clone(),
                coalition: Vec::new(),
            };
            witness(out, &inst.profile, preference_manipulate(&inst, g.cap)?)
        }
        Verb::Evaluate {
            distribution,
            target,
            r,
        } => {
            let mut dist = ScenarioDistribution::parse(&read(distribution)?)?;
            dist.set_strict_odd(!g.no_strict_odd);
            let p = dist.reference();
            let rule = Rule::parse(
                g.rule
                    .as_deref()
                    .ok_or_else(|| Error::InvalidRule("no --rule given".into()))?,
                p,
            )?;
            let target = candidate(p, target)?;
            let tb = TieBreak::parse(&g.tb, p)?;
            let query = EvaluationQuery {
                target,
                threshold: parse_rational(r)?,
                rule,
                tb,
            };
            let prob = win_probability(&dist, &query.rule, target, tb)?;
            writeln!(out, "probability: {prob}").map_err(io)?;
            answer(out, evaluate(&dist, &query)?)
        }
        Verb::GenReduction {
            kind,
            bag,
            output,
            balanced,
        } => {
            let kind: ReductionKind = kind.parse()?;
            let bag: PartitionInstance = bag.parse()?;
            let text = generate(kind, &bag, *balanced)?;
            match output {
                Some(path) => fs::write(path, text).map_err(|e| {
                    Error::InvalidInstance(format!("cannot write {}: {e}", path.display()))
                }),
                None => out.write_all(text.as_bytes()).map_err(io),
            }
        }
        Verb::VerifyReduction {
            kind,
            bag,
            max_n,
            max_v,
        } => {
            let kinds: Vec<ReductionKind> = match kind.as_str() {
                "all" => ReductionKind::ALL.to_vec(),
                k => vec![k.parse()?],
            };
            let mut all_hold = true;
            match bag {
                Some(bag) => {
                    let bag: PartitionInstance = bag.parse()?;
                    for k in kinds {
                        let r = verify_reduction(k, &bag, g.cap)?;
                        all_hold &= r.holds();
                        writeln!(
                            out,
                            "kind: {k}\nbag: {bag}\ndecision: {}\npartition: {}",
                            r.decision, r.partition
                        )
                        .map_err(io)?;
                    }
                }
                None => {
                    let bags = all_bags(*max_n, *max_v);
                    for k in kinds {
                        let reports = sweep(k, &bags, g.cap)?;
                        let agree = reports.iter().filter(|r| r.holds()).count();
                        all_hold &= agree == reports.len();
                        writeln!(out, "kind: {k} instances: {} agree: {agree}", reports.len())
                            .map_err(io)?;
                        for r in reports.iter().filter(|r| !r.holds()) {
                            writeln!(out, "mismatch: {} {}", r.kind, r.bag).map_err(io)?;
                        }
                    }
                }
            }
            let verdict = if all_hold { "holds" } else { "fails" };
            writeln!(out, "biconditional: {verdict}").map_err(io)
        }
    }
}

fn generate(kind: ReductionKind, bag: &PartitionInstance, balanced: bool) -> Result<String> {
    if balanced && kind != ReductionKind::CupElicit {
        return Err(Error::InvalidInstance(
            "--balanced applies to cup-elicit only".into(),
        ));
    }
    let mut text = format!("# {kind} instance for bag {bag}\n");
    let (profile, rule, target) = match kind {
        ReductionKind::CupElicit => {
            let (p, agenda) = gen_cup_elicitation(bag, balanced)?;
            (p, Rule::Cup(agenda), None)
        }
        ReductionKind::StvSpElicit => {
            let (p, _) = gen_stv_sp_elicitation(bag)?;
            (p, Rule::Stv, None)
        }
        ReductionKind::CupManip => {
            let inst = gen_cup_preference_manipulation(bag)?;
            (inst.profile, inst.rule, Some(inst.target))
        }
        ReductionKind::CopelandManip => {
            let inst = gen_copeland_preference_manipulation(bag)?;
            (inst.profile, inst.rule, Some(inst.target))
        }
    };
    text.push_str(&format!("# rule: {}\n", rule.display(&profile)));
    if let Some(t) = target {
        text.push_str(&format!("# target: {}\n", profile.label(t)));
    }
    if !profile.strict_odd() {
        text.push_str("# no-strict-odd\n");
    }
    text.push_str(&profile.to_string());
    Ok(text)
}
