use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use permcover::charseq::pointwise_crossing_numbers;
use permcover::covering::{
    find_periodic, reduce_to_cyclic, saturate, snap, to_discrete_cover_with_cuts, CoveringError,
    DiscreteCover, PLCoveringSystem, Rational, Reduction,
};
use permcover::markov::CycleLength;
use permcover::perm::{parse_tokens, tokens_to_image, PermNotation};
use permcover::verify::{verify_degree_with_progress, ShardDone, VerifyError};
use permcover::{
    characteristic_sequence_unchecked, check_partition, BoundCheck, CharSeq, CyclicPerm,
    MarkovGraph, Partition, PermError,
};

/// Exit status for a clean run that found a violation, counterexample or no
/// periodic point.
const EXIT_FINDING: u8 = 2;

#[derive(Parser)]
#[command(
    name = "permcover",
    version,
    about = "Convex-hull dynamics of cyclic permutations and PL covering systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a permutation as a cycle word
    Gen {
        #[command(subcommand)]
        family: Family,
        /// Print the one-line image array instead
        #[arg(long, global = true)]
        image: bool,
    },
    /// Characteristic numbers of a permutation
    Charseq(CharseqArgs),
    /// The Markov graph on adjacent pairs
    Graph(GraphArgs),
    /// Check the index bound for every cycle of the given degrees
    Verify(VerifyArgs),
    /// Find a pair witness for a partition of {1..n}
    Partition(PartitionArgs),
    /// Reduce a discrete cover or a covering system to a cyclic permutation
    Reduce(ReduceArgs),
    /// Find an exact periodic point of a covering system
    Periodic(PeriodicArgs),
}

#[derive(Subcommand)]
enum Family {
    /// 1 -> 2 -> .. -> n -> 1
    Shift { n: usize },
    /// The Stefan cycle of degree 2m + 1
    Stefan { m: usize },
    /// A uniformly random n-cycle
    Random {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct PermInput {
    /// Cycle word or image array; read from stdin when omitted
    perm: Option<String>,
    /// Read the input as a cycle word
    #[arg(long, conflicts_with = "image")]
    cycle: bool,
    /// Read the input as a one-line image array
    #[arg(long)]
    image: bool,
}

impl PermInput {
    fn notation(&self) -> PermNotation {
        if self.cycle {
            PermNotation::CycleWord
        } else if self.image {
            PermNotation::Image
        } else {
            PermNotation::Auto
        }
    }

    fn image_array(&self) -> Result<Vec<usize>> {
        let text = match &self.perm {
            Some(p) => p.clone(),
            None => read_input("-")?,
        };
        let tokens = parse_tokens(&text)?;
        Ok(tokens_to_image(&tokens, self.notation())?)
    }

    fn cyclic(&self) -> Result<CyclicPerm> {
        Ok(CyclicPerm::from_image(self.image_array()?)?)
    }
}

#[derive(Args)]
struct CharseqArgs {
    #[command(flatten)]
    input: PermInput,
    /// Print the per-pair numbers (the default)
    #[arg(long)]
    raw: bool,
    /// Print the sorted sequence
    #[arg(long)]
    sorted: bool,
    /// Print one JSON object instead of text
    #[arg(long)]
    json: bool,
    /// Also test sorted[k] <= k; exit 2 when it fails
    #[arg(long)]
    check: bool,
    /// Accept bijections that are not a single cycle
    #[arg(long)]
    allow_nontransitive: bool,
    /// Count crossings of single points instead of hulls (diagnostic)
    #[arg(long)]
    no_hull: bool,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    input: PermInput,
    #[arg(long, conflicts_with_all = ["json", "cycles"])]
    dot: bool,
    #[arg(long, conflicts_with = "cycles")]
    json: bool,
    /// Shortest closed walk through each vertex
    #[arg(long)]
    cycles: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// A degree `n` or an inclusive range `a..b`
    range: String,
    #[arg(long, env = "PERMCOVER_WORKERS")]
    workers: Option<usize>,
    /// Skip one cycle of each reflection pair
    #[arg(long)]
    prune: bool,
    /// Also write all reports to this file as a JSON array
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
    /// Report finished shards on stderr
    #[arg(long)]
    progress: bool,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    input: PermInput,
    /// Block ends t, meaning t and t + 1 lie in different blocks
    #[arg(long, value_delimiter = ',')]
    cuts: Vec<usize>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Cover or system JSON; `-` for stdin
    file: String,
    /// Saturation depth N used for snapping a system
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Extra cut points inside the intervals, e.g. 12 or 7/2
    #[arg(long = "extra-cut", value_name = "X")]
    extra_cuts: Vec<String>,
}

#[derive(Args)]
struct PeriodicArgs {
    /// System JSON; `-` for stdin
    file: String,
    /// Largest period searched
    #[arg(short, long)]
    k: usize,
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn gen(family: &Family, image: bool) -> Result<ExitCode> {
    let f = match *family {
        Family::Shift { n } => CyclicPerm::shift(n)?,
        Family::Stefan { m } => CyclicPerm::stefan(m)?,
        Family::Random { n, seed } => CyclicPerm::random(n, &mut ChaCha8Rng::seed_from_u64(seed))?,
    };
    if image {
        println!("{}", join(f.image()));
    } else {
        println!("{f}");
    }
    Ok(ExitCode::SUCCESS)
}

fn bound_json(check: BoundCheck) -> Value {
    match check {
        BoundCheck::Holds => json!("holds"),
        BoundCheck::Violated { position } => json!({ "violated": position }),
    }
}

fn charseq(args: &CharseqArgs) -> Result<ExitCode> {
    let image = args.input.image_array()?;
    // cycle word for a single cycle, otherwise the image array
    let label = match CyclicPerm::from_image(image.clone()) {
        Ok(f) => f.to_string(),
        Err(e @ PermError::NotTransitive { .. }) => {
            if !args.allow_nontransitive {
                bail!("{e} (pass --allow-nontransitive to continue)");
            }
            eprintln!("warning: {e}");
            join(&image)
        }
        Err(e) => return Err(e.into()),
    };
    let seq = if args.no_hull {
        CharSeq::from_raw(pointwise_crossing_numbers(&image)?)
    } else {
        characteristic_sequence_unchecked(&image)?
    };
    let check = seq.check_bound();

    if args.json {
        let mut out = json!({
            "perm": label,
            "raw": seq.raw,
            "sorted": seq.sorted,
        });
        if args.check {
            out["bound"] = bound_json(check);
        }
        println!("{out}");
    } else {
        let show_raw = args.raw || !args.sorted;
        if show_raw {
            println!("{}", join(&seq.raw));
        }
        if args.sorted {
            println!("{}", join(&seq.sorted));
        }
        if args.check {
            match check {
                BoundCheck::Holds => println!("bound holds"),
                BoundCheck::Violated { position } => {
                    println!("bound violated at index {position}")
                }
            }
        }
    }
    Ok(if args.check && !check.holds() {
        ExitCode::from(EXIT_FINDING)
    } else {
        ExitCode::SUCCESS
    })
}

fn graph(args: &GraphArgs) -> Result<ExitCode> {
    let g = MarkovGraph::build(&args.input.cyclic()?);
    if args.json {
        println!("{}", g.to_json());
    } else if args.cycles {
        for (k, c) in g.cycle_report().cycles.iter().enumerate() {
            match c.length {
                CycleLength::Steps(l) => println!("A{} {l} {}", k + 1, join(&c.witness)),
                CycleLength::Unreachable => println!("A{} unreachable", k + 1),
            }
        }
    } else {
        print!("{}", g.to_dot());
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_range(text: &str) -> Result<(usize, usize)> {
    let parse = |s: &str| -> Result<usize> {
        s.trim()
            .parse()
            .with_context(|| format!("bad degree {s:?}"))
    };
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let n = parse(text)?;
            (n, n)
        }
    };
    if a > b {
        bail!("empty range {text}");
    }
    Ok((a, b))
}

fn verify(args: &VerifyArgs) -> Result<ExitCode> {
    let (lo, hi) = parse_range(&args.range)?;
    let workers = match args.workers {
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let progress = |done: ShardDone| {
        if args.progress {
            eprintln!(
                "shard {}/{} done ({} examined)",
                done.shard + 1,
                done.shards,
                done.examined
            );
        }
    };
    // validate every degree before starting any work
    for n in lo..=hi {
        if n < 2 {
            bail!("degree {n} is below 2");
        }
        if n > permcover::verify::MAX_VERIFY_DEGREE {
            return Err(VerifyError::DegreeTooLarge {
                degree: n,
                cap: permcover::verify::MAX_VERIFY_DEGREE,
            }
            .into());
        }
    }
    let mut reports = Vec::new();
    let mut clean = true;
    for n in lo..=hi {
        let report = verify_degree_with_progress(n, workers, args.prune, &progress)?;
        println!("{}", serde_json::to_string(&report)?);
        clean &= report.violations.is_empty();
        reports.push(report);
    }
    if let Some(path) = &args.json {
        fs::write(path, serde_json::to_string_pretty(&reports)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FINDING)
    })
}

fn partition(args: &PartitionArgs) -> Result<ExitCode> {
    let f = args.input.cyclic()?;
    let p = Partition::new(f.degree(), args.cuts.clone())?;
    match check_partition(&f, &p) {
        Ok(w) => {
            let out = json!({
                "block": w.block,
                "r": w.r,
                "s": w.s,
                "t": if w.adjacent { Some(w.r) } else { None },
                "l": w.l,
                "adjacent": w.adjacent,
            });
            println!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ VerifyError::Counterexample { .. }) => {
            eprintln!("{e}");
            Ok(ExitCode::from(EXIT_FINDING))
        }
        Err(e) => Err(e.into()),
    }
}

fn reduction_json(red: &Reduction) -> Value {
    let relabeling: serde_json::Map<String, Value> = red
        .relabeling
        .iter()
        .map(|(old, new)| (old.to_string(), json!(new)))
        .collect();
    json!({
        "cycle": red.orbit_word(),
        "relabeled": red.perm.to_string(),
        "deleted": red.deleted,
        "dropped": red.dropped,
        "relabeling": relabeling,
    })
}

fn reduce(args: &ReduceArgs) -> Result<ExitCode> {
    let text = read_input(&args.file)?;
    let doc: Value = serde_json::from_str(&text).context("parsing JSON")?;
    if doc.get("intervals").is_some() {
        let sys = PLCoveringSystem::from_json(&text)?;
        let extra = args
            .extra_cuts
            .iter()
            .map(|s| s.parse::<Rational>())
            .collect::<Result<Vec<_>, _>>()?;
        let gap = saturate(&sys, args.depth)?.min_new_gap;
        let snapped = snap(&sys, args.depth)?;
        let discrete = to_discrete_cover_with_cuts(&snapped.system, &extra)?;
        let red = reduce_to_cyclic(&discrete.cover)?;
        let mut out = reduction_json(&red);
        out["pieces"] = json!(discrete.cover.len());
        out["displacement"] = json!(snapped.displacement);
        out["gap"] = json!(gap);
        out["covering_preserved"] = json!(snapped.covering_preserved);
        println!("{out}");
    } else if doc.get("image").is_some() {
        let cover = DiscreteCover::from_json(&text)?;
        println!("{}", reduction_json(&reduce_to_cyclic(&cover)?));
    } else {
        return Err(anyhow!(
            "expected a cover (\"image\") or a system (\"intervals\")"
        ));
    }
    Ok(ExitCode::SUCCESS)
}

fn periodic(args: &PeriodicArgs) -> Result<ExitCode> {
    let sys = PLCoveringSystem::from_json(&read_input(&args.file)?)?;
    match find_periodic(&sys, args.k) {
        Ok(p) => {
            println!("{}", p.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ CoveringError::NotFound { .. }) => {
            eprintln!("not found: {e}");
            Ok(ExitCode::from(EXIT_FINDING))
        }
        Err(e) => Err(e.into()),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Gen { family, image } => gen(family, *image),
        Command::Charseq(a) => charseq(a),
        Command::Graph(a) => graph(a),
        Command::Verify(a) => verify(a),
        Command::Partition(a) => partition(a),
        Command::Reduce(a) => reduce(a),
        Command::Periodic(a) => periodic(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
