//! Command-line front end: multiplier computation with theorem dispatch and
//! hypothesis checklists, basic-commutator enumeration, extremality sweeps,
//! and the brute-force verification suites.
//!
//! Exit codes: 0 success / all checks pass, 1 computation refused or a check
//! failed, 2 usage or parse error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polynil::{
    check_bounds, check_equality_sweep, classify_extremal, classify_extremal_mixed,
    find_inequality_counterexample, multiplier, parse_group, verify_difference_monotonicity,
    witt64, ClassRow, EngineError, HallBasis, HallError, MultiplierReport, ResourceCaps,
    VerificationReport,
};

const CAPS_HELP: &str = "Enumeration resource caps (positive integers):
  POLYNIL_ALPHABET_CAP  largest alphabet the enumerator accepts (default 2000)
  POLYNIL_WEIGHT_CAP    largest commutator weight (default 8)
  POLYNIL_ELEMENT_CAP   most elements one enumeration may produce (default 2000000)";

/// How many basis elements a human-format listing prints before truncating.
const HUMAN_ELEMENT_CAP: usize = 200;

#[derive(Parser)]
#[command(
    name = "polynil",
    version,
    about = "Exact multiplier structure for finitely generated abelian groups \
             and nilpotent products of cyclic groups",
    after_help = CAPS_HELP
)]
struct Cli {
    /// Output format: human-readable text or one JSON record per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Record,
}

#[derive(Subcommand)]
enum Command {
    /// Count the basic commutators of one weight on a given alphabet.
    Witt(WittArgs),
    /// Compute the multiplier of a group expression for a class row.
    Multiplier(MultiplierArgs),
    /// Enumerate basic commutators, optionally those containing a letter.
    Hall(HallArgs),
    /// Sweep every abelian group of order p^m and compare multiplier orders
    /// against the extremal target; exits 0 only if the elementary abelian
    /// group is the unique maximizer at the target.
    Classify(ClassifyArgs),
    /// Run a verification suite; exits 0 only if every check passes.
    #[command(subcommand)]
    Verify(VerifySuite),
}

#[derive(Args)]
struct WittArgs {
    /// Commutator weight (at least 1).
    #[arg(short = 'w', long, value_parser = clap::value_parser!(u32).range(1..))]
    weight: u32,
    /// Alphabet size.
    #[arg(short = 'n', long)]
    letters: u64,
}

#[derive(Args)]
struct MultiplierArgs {
    /// Group expression, e.g. "Z^2 + Z_4 + Z_2" or "Z_9 *2* Z_3".
    #[arg(short = 'g', long)]
    group: String,
    /// Class row c_1,...,c_s; a single integer means s = 1.
    #[arg(short = 'c', long, value_parser = parse_row)]
    row: ClassRow,
}

#[derive(Args)]
struct HallArgs {
    /// Alphabet size.
    #[arg(short = 'n', long)]
    letters: usize,
    /// Commutator weight (at least 1).
    #[arg(short = 'w', long, value_parser = clap::value_parser!(u32).range(1..))]
    weight: u32,
    /// Restrict the listing and the count to elements containing this letter.
    #[arg(long)]
    contains: Option<u32>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Prime p.
    #[arg(short = 'p', long)]
    prime: u64,
    /// Total exponent m; the sweep covers every partition of m.
    #[arg(short = 'm', long)]
    exponent: u32,
    /// Class row c_1,...,c_s.
    #[arg(short = 'c', long, value_parser = parse_row)]
    row: ClassRow,
    /// Uniform product class for every adjacent pair.
    #[arg(short = 'n', long, default_value_t = 1, conflicts_with = "classes")]
    class: u32,
    /// Full pair-class list n_1,...,n_{m-1} for the mixed sweep.
    #[arg(long, value_parser = parse_class_list)]
    classes: Option<ClassList>,
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Find the smallest i with i * w(i) >= w(i+1) for the weight-(c+1)
    /// commutator counts w; finding one is the expected outcome.
    Counterexample(CounterexampleArgs),
    /// Check the multiplier-exponent bounds over all partitions up to a
    /// total, including tightness exactly at the elementary partition.
    Bounds(BoundsArgs),
    /// Replay the telescoping equality across partitions: it must hold
    /// exactly for the all-ones partitions.
    Equality(EqualityArgs),
    /// Check that consecutive differences of the nested exponent sequence
    /// are nondecreasing, cross-checked by direct enumeration.
    Monotonicity(MonotonicityArgs),
}

#[derive(Args)]
struct CounterexampleArgs {
    /// Nilpotency class c; the counts use weight c + 1.
    #[arg(short = 'c', long, value_parser = clap::value_parser!(u32).range(1..))]
    class: u32,
    /// Largest index to try.
    #[arg(long, default_value_t = 50)]
    bound: u64,
}

#[derive(Args)]
struct BoundsArgs {
    /// Prime p.
    #[arg(short = 'p', long)]
    prime: u64,
    /// Largest total exponent swept.
    #[arg(short = 'm', long)]
    exponent: u32,
    /// Class row c_1,...,c_s.
    #[arg(short = 'c', long, value_parser = parse_row)]
    row: ClassRow,
}

#[derive(Args)]
struct EqualityArgs {
    /// Nilpotency class c; the counts use weight c + 1.
    #[arg(short = 'c', long, value_parser = clap::value_parser!(u32).range(1..))]
    class: u32,
    /// Largest partition total swept.
    #[arg(short = 'm', long, default_value_t = 6)]
    max_total: u32,
}

#[derive(Args)]
struct MonotonicityArgs {
    /// Class row c_1,...,c_s (needs c_1 >= n).
    #[arg(short = 'c', long, value_parser = parse_row)]
    row: ClassRow,
    /// Product class n.
    #[arg(short = 'n', long, value_parser = clap::value_parser!(u32).range(1..))]
    class: u32,
    /// Largest alphabet size checked.
    #[arg(short = 'i', long, default_value_t = 6)]
    max_letters: u32,
}

#[derive(Clone)]
struct ClassList(Vec<u32>);

fn parse_u32_list(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<u32>()
                .map_err(|_| format!("expected a comma-separated list of integers, got '{part}'"))
        })
        .collect()
}

fn parse_row(text: &str) -> Result<ClassRow, String> {
    ClassRow::new(parse_u32_list(text)?).map_err(|err| err.to_string())
}

fn parse_class_list(text: &str) -> Result<ClassList, String> {
    Ok(ClassList(parse_u32_list(text)?))
}

fn main() -> ExitCode {
    // Die quietly when the reading end of a pipe goes away, like other
    // line-oriented tools, instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let format = cli.format;
    match cli.command {
        Command::Witt(args) => run_witt(args, format),
        Command::Multiplier(args) => run_multiplier(args, format),
        Command::Hall(args) => run_hall(args, format),
        Command::Classify(args) => run_classify(args, format),
        Command::Verify(suite) => run_verify(suite, format),
    }
}

fn usage_error(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(2)
}

fn refusal(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(1)
}

/// Print an engine error: hypothesis refusals get the one-line reason plus
/// the full checklist (or the serialized checklist in record mode).
fn engine_failure(err: &EngineError, format: Format) -> ExitCode {
    if let EngineError::HypothesesViolated(report) = err {
        match format {
            Format::Human => {
                eprintln!("{err}");
                eprint!("{report}");
            }
            Format::Record => {
                println!("{}", serde_json::json!({ "refused": report }));
            }
        }
        return ExitCode::from(1);
    }
    refusal(err)
}

fn run_witt(args: WittArgs, format: Format) -> ExitCode {
    match witt64(args.weight, args.letters) {
        Ok(value) => {
            match format {
                Format::Human => println!("{value}"),
                Format::Record => println!(
                    "{}",
                    serde_json::json!({
                        "weight": args.weight,
                        "letters": args.letters,
                        "value": value.to_string(),
                    })
                ),
            }
            ExitCode::SUCCESS
        }
        Err(err) => usage_error(err),
    }
}

fn run_multiplier(args: MultiplierArgs, format: Format) -> ExitCode {
    let group = match parse_group(&args.group) {
        Ok(group) => group,
        Err(err) => return usage_error(err),
    };
    match multiplier(&group, &args.row) {
        Ok(report) => {
            match format {
                Format::Human => print_multiplier(&report),
                Format::Record => println!(
                    "{}",
                    serde_json::to_string(&report).expect("report serializes")
                ),
            }
            ExitCode::SUCCESS
        }
        Err(err) => engine_failure(&err, format),
    }
}

fn print_multiplier(report: &MultiplierReport) {
    let mut theorem = report.theorem.label().to_string();
    if !report.agreements.is_empty() {
        for agreement in &report.agreements {
            let label = agreement.label();
            theorem.push('/');
            theorem.push_str(label.strip_prefix("Thm ").unwrap_or(label));
        }
        theorem.push_str(" agree");
    }
    println!("{}, order {}, {}", report.structure, report.order, theorem);
    print!("{}", report.hypotheses);
    let sequence = &report.exponents;
    let entries: Vec<String> = sequence
        .entries
        .iter()
        .map(|(index, value)| format!("{}_{index} = {value}", sequence.name))
        .collect();
    if !entries.is_empty() {
        println!("exponents: {}", entries.join(", "));
    }
}

fn run_hall(args: HallArgs, format: Format) -> ExitCode {
    let caps = ResourceCaps::from_env();
    let basis = match HallBasis::generate(args.letters, args.weight, &caps) {
        Ok(basis) => basis,
        Err(err @ (HallError::ZeroWeight | HallError::LetterOutOfRange { .. })) => {
            return usage_error(err)
        }
        Err(err) => return refusal(err),
    };
    let mut elements = basis.elements_of_weight(args.weight);
    let count = match args.contains {
        Some(letter) => match basis.count_containing(args.weight, letter) {
            Ok(count) => {
                elements.retain(|element| element.contains_letter(letter));
                count
            }
            Err(err) => return usage_error(err),
        },
        None => elements.len(),
    };
    match format {
        Format::Human => {
            for element in elements.iter().take(HUMAN_ELEMENT_CAP) {
                println!("{element}");
            }
            if elements.len() > HUMAN_ELEMENT_CAP {
                println!("... {} more not shown", elements.len() - HUMAN_ELEMENT_CAP);
            }
            println!("count {count}");
        }
        Format::Record => {
            let rendered: Vec<String> = elements.iter().map(ToString::to_string).collect();
            let mut record = serde_json::json!({
                "letters": args.letters,
                "weight": args.weight,
                "count": count,
                "elements": rendered,
            });
            if let Some(letter) = args.contains {
                record["contains"] = serde_json::json!(letter);
            }
            println!("{record}");
        }
    }
    ExitCode::SUCCESS
}

fn run_classify(args: ClassifyArgs, format: Format) -> ExitCode {
    let result = match &args.classes {
        Some(list) => classify_extremal_mixed(args.prime, args.exponent, &args.row, &list.0),
        None => classify_extremal(args.prime, args.exponent, &args.row, args.class),
    };
    let report = match result {
        Ok(report) => report,
        Err(EngineError::Group(err)) => return usage_error(err),
        Err(err) => return engine_failure(&err, format),
    };
    match format {
        Format::Human => println!("{report}"),
        Format::Record => println!(
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        ),
    }
    if report.claim_holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_verify(suite: VerifySuite, format: Format) -> ExitCode {
    match suite {
        VerifySuite::Counterexample(args) => {
            match find_inequality_counterexample(args.class, args.bound) {
                Some(witness) => {
                    match format {
                        Format::Human => {
                            println!("i={}: {} >= {}", witness.index, witness.lhs, witness.rhs)
                        }
                        Format::Record => println!(
                            "{}",
                            serde_json::to_string(&witness).expect("witness serializes")
                        ),
                    }
                    ExitCode::SUCCESS
                }
                None => {
                    match format {
                        Format::Human => {
                            println!("no counterexample for 1 <= i <= {}", args.bound)
                        }
                        Format::Record => println!(
                            "{}",
                            serde_json::json!({ "counterexample": null, "bound": args.bound })
                        ),
                    }
                    ExitCode::from(1)
                }
            }
        }
        VerifySuite::Bounds(args) => match check_bounds(args.prime, args.exponent, &args.row) {
            Ok(report) => emit_report(&report, format),
            Err(err) => engine_failure(&err, format),
        },
        VerifySuite::Equality(args) => {
            emit_report(&check_equality_sweep(args.class, args.max_total), format)
        }
        VerifySuite::Monotonicity(args) => {
            let caps = ResourceCaps::from_env();
            match verify_difference_monotonicity(&args.row, args.class, args.max_letters, &caps) {
                Ok(report) => emit_report(&report, format),
                Err(err) => engine_failure(&err, format),
            }
        }
    }
}

fn emit_report(report: &VerificationReport, format: Format) -> ExitCode {
    match format {
        Format::Human => {
            for record in &report.records {
                let mark = if record.pass { "ok " } else { "FAIL" };
                println!(
                    "[{mark}] {}: {} ({} vs {})",
                    record.instance, record.relation, record.lhs, record.rhs
                );
            }
            println!("{report}");
        }
        Format::Record => {
            for record in &report.records {
                println!(
                    "{}",
                    serde_json::to_string(record).expect("record serializes")
                );
            }
        }
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
