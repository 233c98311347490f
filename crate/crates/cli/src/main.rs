//! `groupshare` — generate platform groups, deal and recover secrets, refresh
//! relators, replay transcripts, and run the padding/reduction benchmark.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use groupshare::experiment::{run_experiment, ExperimentConfig};
use groupshare::presentation::{sample_small_cancellation, GenerationParams, Lambda};
use groupshare::protocol::{ProtocolParams, Scheme};
use groupshare::rng::substream;
use groupshare::shamir::FieldParams;
use groupshare::transcript::{Secret, Session, Transcript};

mod exit;

use exit::CliError;

#[derive(Parser)]
#[command(name = "groupshare", version, about = "Secret sharing over small-cancellation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random C'(λ) presentation.
    GenGroup(GenGroupArgs),
    /// Set up participants (or reuse a transcript) and deal a secret.
    Deal(DealArgs),
    /// Recover the last dealt secret with a subset of participants.
    Recover(RecoverArgs),
    /// Refresh every participant's relators and append the round.
    Update(UpdateArgs),
    /// Re-run a transcript from its seeds and compare byte for byte.
    Replay(ReplayArgs),
    /// Pad short words into long ones and check Dehn reduction recovers them.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenerationFlags {
    /// Number of generators.
    #[arg(long = "n", default_value_t = 40)]
    alphabet: u32,
    #[arg(long, default_value_t = 4)]
    relators: usize,
    #[arg(long, default_value_t = 9)]
    length: usize,
    #[arg(long, default_value = "1/6")]
    lambda: Lambda,
    #[arg(long, default_value_t = 10_000)]
    max_attempts: usize,
}

impl GenerationFlags {
    fn params(&self) -> GenerationParams {
        GenerationParams {
            alphabet: self.alphabet,
            num_relators: self.relators,
            relator_length: self.length,
            lambda: self.lambda,
            max_attempts: self.max_attempts,
        }
    }
}

#[derive(Args)]
struct GenGroupArgs {
    #[command(flatten)]
    generation: GenerationFlags,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the presentation here instead of to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DealArgs {
    /// nn, kn-bin or kn-shortlex. Required unless --append.
    #[arg(long)]
    scheme: Option<Scheme>,
    /// Number of participants. Required unless --append.
    #[arg(long)]
    n: Option<usize>,
    /// Threshold; ignored for nn.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// A 0/1 string for nn, a decimal field element otherwise.
    #[arg(long)]
    secret: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Field modulus; defaults to 101 for kn-bin and the pinned shortlex prime for kn-shortlex.
    #[arg(long)]
    p: Option<u64>,
    /// Target length of published words.
    #[arg(long, default_value_t = 500)]
    pad: usize,
    #[arg(long)]
    transcript: PathBuf,
    /// Deal again on the participants recorded in an existing transcript.
    #[arg(long)]
    append: bool,
}

#[derive(Args)]
struct RecoverArgs {
    #[arg(long)]
    transcript: PathBuf,
    /// Comma-separated 1-based participant ids, e.g. 1,2,3.
    #[arg(long, value_delimiter = ',', required = true)]
    participants: Vec<usize>,
}

#[derive(Args)]
struct UpdateArgs {
    #[arg(long)]
    transcript: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    transcript: PathBuf,
    /// Dealt secrets in order; repeat once per DEAL round.
    #[arg(long)]
    secret: Vec<String>,
    /// Also write the replayed transcript here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 10)]
    groups: usize,
    #[arg(long, default_value_t = 100)]
    words_per_group: usize,
    #[arg(long, default_value_t = 10)]
    max_word_len: usize,
    #[arg(long, default_value_t = 500)]
    pad_target: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_transcript(path: &Path) -> Result<Transcript, CliError> {
    Ok(read(path)?.parse()?)
}

fn gen_group(args: GenGroupArgs) -> Result<(), CliError> {
    let mut rng = substream(args.seed, "gen-group");
    let started = Instant::now();
    let sampled = sample_small_cancellation(&args.generation.params(), &mut rng)?;
    let elapsed = started.elapsed();
    let report = format!("attempts={}\nwall_ms={:.3}", sampled.attempts, elapsed.as_secs_f64() * 1e3);
    match args.out {
        Some(path) => {
            write(&path, &sampled.presentation.to_string())?;
            println!("{report}");
        }
        None => {
            print!("{}", sampled.presentation);
            eprintln!("{report}");
        }
    }
    Ok(())
}

fn deal(args: DealArgs) -> Result<(), CliError> {
    let mut session = if args.append {
        Session::from_transcript(&load_transcript(&args.transcript)?)?
    } else {
        let scheme = args.scheme.ok_or_else(|| CliError::Usage("--scheme is required for a new transcript".into()))?;
        let n = args.n.ok_or_else(|| CliError::Usage("--n is required for a new transcript".into()))?;
        let mut params = match scheme {
            Scheme::Nn => ProtocolParams::nn(n),
            Scheme::KnBinary => ProtocolParams::kn_binary(n, args.k, FieldParams::from_u64(args.p.unwrap_or(101))?),
            Scheme::KnShortlex => ProtocolParams::kn_shortlex(n, args.k),
        };
        if let (Scheme::KnShortlex, Some(p)) = (scheme, args.p) {
            params.field = FieldParams::from_u64(p)?;
        }
        params.pad_target = args.pad;
        Session::new(params, args.seed)?
    };
    let secret = Secret::parse(&args.secret, session.params().scheme)?;
    let round = session.deal(&secret, args.seed)?;
    println!("round={}", round.index);
    println!("public_messages={}", round.public().len());
    write(&args.transcript, &session.transcript().to_string())
}

fn recover(args: RecoverArgs) -> Result<(), CliError> {
    let session = Session::from_transcript(&load_transcript(&args.transcript)?)?;
    println!("{}", session.recover(&args.participants)?);
    Ok(())
}

fn update(args: UpdateArgs) -> Result<(), CliError> {
    let mut session = Session::from_transcript(&load_transcript(&args.transcript)?)?;
    let round = session.update(args.seed)?.index;
    println!("round={round}");
    println!("epoch={}", session.transcript().update_epochs());
    write(&args.transcript, &session.transcript().to_string())
}

fn replay(args: ReplayArgs) -> Result<(), CliError> {
    let text = read(&args.transcript)?;
    let recorded: Transcript = text.parse()?;
    let secrets =
        args.secret.iter().map(|s| Secret::parse(s, recorded.params.scheme)).collect::<Result<Vec<_>, _>>()?;
    let replayed = Session::replay(&recorded, &secrets)?.to_string();
    if let Some(out) = &args.out {
        write(out, &replayed)?;
    }
    if replayed != text {
        let line = replayed
            .lines()
            .zip(text.lines())
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| replayed.lines().count().min(text.lines().count()))
            + 1;
        return Err(CliError::ReplayMismatch { line });
    }
    println!("replay identical ({} rounds)", recorded.rounds.len());
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let config = ExperimentConfig {
        groups: args.groups,
        words_per_group: args.words_per_group,
        max_word_len: args.max_word_len,
        pad_target: args.pad_target,
        seed: args.seed,
        generation: GenerationParams::default(),
    };
    print!("{}", run_experiment(&config)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::GenGroup(a) => gen_group(a),
        Command::Deal(a) => deal(a),
        Command::Recover(a) => recover(a),
        Command::Update(a) => update(a),
        Command::Replay(a) => replay(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
