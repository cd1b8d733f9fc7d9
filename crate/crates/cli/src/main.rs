use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sortal::chain::{check_chain, write_counts_csv};
use sortal::family::Context;
use sortal::signature::{parse_signature, Signature, SignatureError, Sort};
use sortal::subst::laws::{
    check_adjunctions, check_distlaws, check_interchange, check_monad_laws, check_oracle, check_strength_laws,
    LawConfig,
};
use sortal::subst::{Assignment, Engine, Mutation};
use sortal::term::{count_terms, enumerate_with, parse_term, print_term, Limits, DEFAULT_HEIGHT_BOUND};
use sortal::verdict::Verdict;

const MAX_SAMPLES: usize = 1_000_000;
/// Carrier bound and number of sorts for the adjunction sweep.
const ADJUNCTION_BOUND: usize = 4;
const ADJUNCTION_SORTS: usize = 3;
/// Longest context in the chain sweep.
const CHAIN_CONTEXT_LEN: usize = 2;
/// Height of sampled terms and top chain level for `check`, capped by the
/// height bound.
const CHECK_HEIGHT: usize = 4;

#[derive(Parser)]
#[command(name = "sortal", version, about = "Well-sorted syntax with binders from multi-sorted binding signatures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a signature file; diagnostics go to standard error.
    Validate { sig: PathBuf },
    /// List the terms of a sort up to a height, or count them per height.
    Enumerate {
        sig: PathBuf,
        /// Comma-separated sorts, index 0 first.
        #[arg(long, default_value = "")]
        context: String,
        #[arg(long)]
        sort: String,
        #[arg(long, default_value_t = 4)]
        max_height: usize,
        /// Print `n,context,sort,count` rows instead of terms.
        #[arg(long)]
        count_only: bool,
    },
    /// Apply `subst f : T(X ++ Y) -> T(Y)` to a term.
    Subst {
        sig: PathBuf,
        #[arg(long, default_value = "")]
        context_x: String,
        #[arg(long, default_value = "")]
        context_y: String,
        /// JSON object from indices of X to terms over Y.
        #[arg(long)]
        assign: PathBuf,
        /// A term over X ++ Y.
        #[arg(long)]
        term: PathBuf,
    },
    /// Run law suites and print one JSON verdict per law.
    Check {
        sig: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, hide = true)]
        mutate: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Monad,
    Strength,
    Distlaw,
    Adjunction,
    Chain,
    Interchange,
    All,
}

/// Failure with the exit code it maps to.
struct Failure(u8, String);

fn usage(message: impl ToString) -> Failure {
    Failure(2, message.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Signature, Failure> {
    parse_signature(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn context(sig: &Signature, text: &str) -> Result<Context, Failure> {
    Context::parse(text, &sig.sorts).map_err(|e| usage(format!("context {text:?}: {e}")))
}

fn sort(sig: &Signature, name: &str) -> Result<Sort, Failure> {
    sig.sort(name).cloned().ok_or_else(|| usage(format!("unknown sort {name}")))
}

/// The height bound: `SORTAL_MAX_HEIGHT` if set, otherwise the default.
fn height_bound() -> Result<usize, Failure> {
    match std::env::var("SORTAL_MAX_HEIGHT") {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("SORTAL_MAX_HEIGHT={v:?} is not a number"))),
        Err(_) => Ok(DEFAULT_HEIGHT_BOUND),
    }
}

fn bounded_height(requested: usize, bound: usize) -> Result<usize, Failure> {
    if requested > bound {
        return Err(usage(format!("height {requested} exceeds the bound {bound}")));
    }
    Ok(requested)
}

fn validate(path: &Path) -> Result<(), Failure> {
    let text = read(path)?;
    match parse_signature(&text) {
        Ok(_) => Ok(()),
        Err(SignatureError::Invalid(diags)) => {
            for d in &diags {
                eprintln!("{}: {d}", path.display());
            }
            Err(Failure(1, String::new()))
        }
        Err(e) => Err(usage(format!("{}: {e}", path.display()))),
    }
}

fn enumerate(
    bound: usize,
    path: &Path,
    ctx: &str,
    sort_name: &str,
    max_height: usize,
    count_only: bool,
) -> Result<(), Failure> {
    let sig = load(path)?;
    let ctx = context(&sig, ctx)?;
    let s = sort(&sig, sort_name)?;
    let max_height = bounded_height(max_height, bound)?;
    if count_only {
        let rows: Vec<_> = (0..=max_height).map(|n| (n, &ctx, &s, count_terms(&sig, &ctx, &s, n))).collect();
        print!("{}", write_counts_csv(rows));
        return Ok(());
    }
    let limits = Limits { max_height: bound, ..Limits::default() };
    let terms = enumerate_with(&sig, &ctx, &s, max_height, limits).map_err(usage)?;
    for t in &terms {
        println!("{}", print_term(&sig, t));
    }
    Ok(())
}

fn subst(path: &Path, x: &str, y: &str, assign: &Path, term: &Path) -> Result<(), Failure> {
    let sig = load(path)?;
    let (x, y) = (context(&sig, x)?, context(&sig, y)?);
    let f = Assignment::from_json(&sig, x.clone(), y.clone(), &read(assign)?).map_err(usage)?;
    let whole: Context = x.entries().iter().chain(y.entries()).cloned().collect();
    let t = parse_term(&sig, &whole, &read(term)?, None).map_err(|e| usage(format!("term: {e}")))?;
    let out = Engine::new(&sig).subst(&f, t.term()).map_err(usage)?;
    println!("{}", print_term(&sig, &out));
    Ok(())
}

fn check(path: &Path, suite: Suite, cfg: LawConfig, mutate: Option<&str>) -> Result<(), Failure> {
    let sig = load(path)?;
    if cfg.samples > MAX_SAMPLES {
        return Err(usage(format!("at most {MAX_SAMPLES} samples")));
    }
    let mutation = match mutate {
        Some(name) => Some(Mutation::from_name(name).ok_or_else(|| usage(format!("unknown mutation {name}")))?),
        None => None,
    };
    let engine = Engine::with_mutation(&sig, mutation);
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let mut verdicts: Vec<Verdict> = Vec::new();
    if wants(Suite::Monad) {
        verdicts.extend(check_monad_laws(&engine, &cfg));
        verdicts.extend(check_oracle(&engine, &cfg));
    }
    if wants(Suite::Strength) {
        verdicts.extend(check_strength_laws(&engine, &cfg));
    }
    if wants(Suite::Distlaw) {
        verdicts.extend(check_distlaws(&engine, &cfg));
    }
    if wants(Suite::Adjunction) {
        verdicts.extend(check_adjunctions(&sig, ADJUNCTION_BOUND, ADJUNCTION_SORTS));
    }
    if wants(Suite::Chain) {
        verdicts.push(check_chain(&sig, CHAIN_CONTEXT_LEN, cfg.max_height));
    }
    if wants(Suite::Interchange) {
        verdicts.extend(check_interchange(&engine, &cfg));
    }
    for v in &verdicts {
        println!("{}", v.to_json_line());
    }
    if verdicts.iter().all(Verdict::passed) {
        Ok(())
    } else {
        Err(Failure(1, String::new()))
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let bound = height_bound()?;
    match &cli.command {
        Command::Validate { sig } => validate(sig),
        Command::Enumerate { sig, context, sort, max_height, count_only } => {
            enumerate(bound, sig, context, sort, *max_height, *count_only)
        }
        Command::Subst { sig, context_x, context_y, assign, term } => subst(sig, context_x, context_y, assign, term),
        Command::Check { sig, suite, seed, samples, mutate } => {
            let cfg = LawConfig { samples: *samples, seed: *seed, max_height: CHECK_HEIGHT.min(bound) };
            check(sig, *suite, cfg, mutate.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, message)) => {
            if !message.is_empty() {
                eprintln!("error: {message}");
            }
            ExitCode::from(code)
        }
    }
}
