//! Command-line front end: generate instances, run rules, evaluate exact
//! worst-case distortion, sweep corpora, and print the mixed-rule bound
//! curves.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use metric_voting::corpus::{random_corpus, CorpusConfig};
use metric_voting::distortion::exact_distortion;
use metric_voting::election::{gen_radius_lb, gen_random, gen_rcb_lb, ElectionInstance};
use metric_voting::mixtures::{distortion_bound_curve, minimize_distortion_bound, BetaRuleKind};
use metric_voting::rational::{parse_rational, Rational};
use metric_voting::rules::RuleSpec;
use metric_voting::{exec, CandidateDistribution};

#[derive(Parser)]
#[command(name = "mvote", version, about = "metric-distortion voting toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an election instance file.
    Gen(GenArgs),
    /// Print a rule's output distribution on an instance.
    Winner(WinnerArgs),
    /// Exact worst-case distortion of a rule on an instance.
    Distortion(WinnerArgs),
    /// Sweep random instances and emit a per-instance distortion CSV.
    Corpus(CorpusArgs),
    /// Print the mixed-rule distortion bound curve and its minimizer.
    Bounds(BoundsArgs),
    /// Run an adversarial generator across sizes and report the measured
    /// distortion trend.
    Lowerbound(LowerboundArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Instance family.
    #[arg(long, value_enum, default_value_t = Family::Random)]
    family: Family,
    /// Candidate count (random family).
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Voter count (random family).
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rule threshold parameter (adversarial families), e.g. 7/10 or 0.7.
    #[arg(long)]
    beta: Option<String>,
    /// Family size parameter: |U| for radius-lb, T for rcb-lb.
    #[arg(long)]
    size: Option<usize>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    RadiusLb,
    RcbLb,
}

#[derive(Args)]
struct WinnerArgs {
    /// Rule spec, e.g. `ml`, `rcb:beta=0.7`, `mix_radius:B=0.876353`.
    #[arg(long)]
    rule: String,
    /// Instance file path.
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long)]
    rule: String,
    /// Candidate count for every trial.
    #[arg(long)]
    m: usize,
    /// Voter count for every trial.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    kind: MixKind,
    /// Evaluate the bound at this sampling endpoint; otherwise only the
    /// minimizer is printed.
    #[arg(long, name = "B")]
    b: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MixKind {
    Rcb,
    Radius,
}

#[derive(Args)]
struct LowerboundArgs {
    #[arg(long, value_enum)]
    family: LbFamily,
    /// Rule threshold, e.g. 0.7.
    #[arg(long)]
    beta: String,
    /// Comma-separated sizes (|U| or T).
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LbFamily {
    Radius,
    Rcb,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Gen(args) => {
            let instance = match args.family {
                Family::Random => gen_random(args.m, args.n, args.seed),
                Family::RadiusLb => gen_radius_lb(&beta_arg(&args.beta)?, size_arg(&args.size)?)?,
                Family::RcbLb => gen_rcb_lb(&beta_arg(&args.beta)?, size_arg(&args.size)?)?,
            };
            emit(args.out.as_deref(), &instance.to_file_string())?;
        }
        Command::Winner(args) => {
            let rule = RuleSpec::parse(&args.rule)?;
            let instance = load_instance(&args.instance)?;
            println!("{}", rule.evaluate(&instance)?);
        }
        Command::Distortion(args) => {
            let rule = RuleSpec::parse(&args.rule)?;
            let instance = load_instance(&args.instance)?;
            let dist = rule.evaluate(&instance)?;
            let report = exact_distortion(&instance, &dist)?;
            print!("rule {}\n{report}", rule.name());
        }
        Command::Corpus(args) => {
            let rule = RuleSpec::parse(&args.rule)?;
            let cfg = CorpusConfig {
                trials: args.trials,
                m_min: args.m,
                m_max: args.m,
                n_min: args.n,
                n_max: args.n,
                seed: args.seed,
            };
            let instances = random_corpus(&cfg);
            let rows: Vec<Result<(f64, usize), String>> = exec::map(&instances, |e| {
                let dist = rule.evaluate(e).map_err(|err| err.to_string())?;
                let report = exact_distortion(e, &dist).map_err(|err| err.to_string())?;
                Ok((report.value, report.witness_i_star))
            });
            let mut csv = String::from("instance_id,rule,distortion,argmax_i_star\n");
            let mut max = f64::NEG_INFINITY;
            let mut sum = 0.0;
            for (id, row) in rows.into_iter().enumerate() {
                let (value, i_star) = row.map_err(|e| format!("instance {id}: {e}"))?;
                max = max.max(value);
                sum += value;
                csv.push_str(&format!("{id},{},{value:.9},{i_star}\n", rule.name()));
            }
            emit(args.out.as_deref(), &csv)?;
            eprintln!("max {max:.9} mean {:.9}", sum / args.trials as f64);
        }
        Command::Bounds(args) => {
            let kind = match args.kind {
                MixKind::Rcb => BetaRuleKind::Rcb,
                MixKind::Radius => BetaRuleKind::Radius,
            };
            if let Some(b) = args.b {
                println!("bound {:.6}", distortion_bound_curve(kind, b));
            }
            let (b_star, v_star) = minimize_distortion_bound(kind);
            println!("minimizer B {b_star:.6}");
            println!("minimum bound {v_star:.6}");
        }
        Command::Lowerbound(args) => {
            let beta = parse_rational(&args.beta)?;
            println!("size,rule,distortion");
            for &size in &args.sizes {
                let (instance, rule) = match args.family {
                    LbFamily::Radius => {
                        (gen_radius_lb(&beta, size)?, RuleSpec::Radius { beta: beta.clone() })
                    }
                    LbFamily::Rcb => {
                        (gen_rcb_lb(&beta, size)?, RuleSpec::Rcb { beta: beta.clone() })
                    }
                };
                let dist: CandidateDistribution = rule.evaluate(&instance)?;
                let report = exact_distortion(&instance, &dist)?;
                println!("{size},{},{:.6}", rule.name(), report.value);
            }
        }
    }
    Ok(())
}

fn beta_arg(arg: &Option<String>) -> Result<Rational, String> {
    let s = arg.as_deref().ok_or("this family needs --beta")?;
    parse_rational(s).map_err(|e| e.to_string())
}

fn size_arg(arg: &Option<usize>) -> Result<usize, String> {
    arg.ok_or_else(|| "this family needs --size".to_string())
}

fn load_instance(path: &PathBuf) -> Result<ElectionInstance, Box<dyn std::error::Error>> {
    let text = fs::read_to_string(path)?;
    Ok(ElectionInstance::parse(&text)?)
}

fn emit(path: Option<&std::path::Path>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    }
}
