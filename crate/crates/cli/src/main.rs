//! `qident` — verify q-hypergeometric summation identities from the command
//! line.
//!
//! Exit codes: 0 all checks passed, 1 some check failed or errored,
//! 2 usage or catalog-parse error, 3 internal error.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qident::algebra::{is_prime_u64, DEFAULT_PRIME};
use qident::catalog::{builtin_catalog, Catalog, Item};
use qident::verifier::{Mode, ModularConfig, SuiteEntry};

#[derive(Parser)]
#[command(name = "qident", version, about = "Exact verifier for terminating q-hypergeometric summation identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the catalog: id, kind, validity range, and the formula.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Extra catalog file merged with the built-in one.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Verify identities symbolically or modularly.
    Verify(CheckArgs),
    /// Run proof-machinery checks: certificates, relations, inductions,
    /// transports (accepts the same selection flags as verify).
    Certify(CheckArgs),
    /// Parse and validate a catalog file.
    Parse { file: PathBuf },
}

#[derive(Args)]
struct CheckArgs {
    /// Spec id to check (repeatable).
    #[arg(long = "id")]
    ids: Vec<String>,
    /// Check every catalog record.
    #[arg(long)]
    all: bool,
    /// Inclusive n range `lo..hi` (default: each spec's own n_min..6).
    #[arg(long, value_parser = parse_range)]
    n: Option<(i64, i64)>,
    #[arg(long, value_enum, default_value_t = ModeArg::Symbolic)]
    mode: ModeArg,
    /// Random evaluation points per check in modular mode.
    #[arg(long, default_value_t = 20)]
    trials: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Modulus for modular mode (odd prime >= 2^31).
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Extra catalog file merged with the built-in one.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Report all elapsed times as 0 so runs are byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Symbolic,
    Modular,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got '{s}'"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower bound '{lo}'"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad upper bound '{hi}'"))?;
    if hi < lo {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    match std::panic::catch_unwind(run) {
        Ok(code) => code,
        Err(_) => {
            eprintln!("error: internal error (panic)");
            ExitCode::from(3)
        }
    }
}

fn run() -> ExitCode {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    match cli.cmd {
        Cmd::List { format, catalog } => {
            let cat = match load_catalog(catalog.as_deref()) {
                Ok(c) => c,
                Err(code) => return code,
            };
            cmd_list(&cat, format)
        }
        Cmd::Verify(args) | Cmd::Certify(args) => cmd_check(&args),
        Cmd::Parse { file } => cmd_parse(&file),
    }
}

fn load_catalog(extra: Option<&std::path::Path>) -> Result<Catalog, ExitCode> {
    let mut cat = builtin_catalog().clone();
    if let Some(path) = extra {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return Err(ExitCode::from(2));
            }
        };
        match qident::catalog::parse(&text) {
            Ok(extra) => {
                if let Err(msg) = cat.merge(extra) {
                    eprintln!("error: {}: {msg}", path.display());
                    return Err(ExitCode::from(2));
                }
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return Err(ExitCode::from(2));
            }
        }
    }
    Ok(cat)
}

fn list_line(item: &Item) -> String {
    format!(
        "{:<6} {:<12} n>={:<4} {}",
        item.id(),
        item.kind_name(),
        item.n_min(),
        item.summary()
    )
}

fn cmd_list(cat: &Catalog, format: Format) -> ExitCode {
    match format {
        Format::Text => {
            for item in cat.items().iter().filter(|i| i.is_spec()) {
                report::emit(&list_line(item));
            }
        }
        Format::Json => {
            let descriptors: Vec<report::SpecDescriptor> = cat
                .items()
                .iter()
                .filter(|i| i.is_spec())
                .map(|i| report::SpecDescriptor {
                    id: i.id().to_string(),
                    kind: i.kind_name().to_string(),
                    n_min: i.n_min(),
                    summary: i.summary(),
                })
                .collect();
            report::emit(&serde_json::to_string(&descriptors).expect("serialize"));
        }
    }
    ExitCode::SUCCESS
}

fn cmd_parse(file: &std::path::Path) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    match qident::catalog::parse(&text) {
        Ok(cat) => {
            let inductions = cat.items().len() - cat.spec_count();
            report::emit(&format!(
                "parsed {} specs ({} induction checks)",
                cat.spec_count(),
                inductions
            ));
            for item in cat.items() {
                report::emit(&list_line(item));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            ExitCode::from(2)
        }
    }
}

fn cmd_check(args: &CheckArgs) -> ExitCode {
    if args.prime < (1 << 31) || args.prime % 2 == 0 || !is_prime_u64(args.prime) {
        eprintln!("error: --prime must be an odd prime >= 2^31");
        return ExitCode::from(2);
    }
    if args.trials == 0 {
        eprintln!("error: --trials must be positive");
        return ExitCode::from(2);
    }
    if args.ids.is_empty() && !args.all {
        eprintln!("error: select specs with --id <ID> (repeatable) or --all");
        return ExitCode::from(2);
    }
    let cat = match load_catalog(args.catalog.as_deref()) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let mut ids: Vec<String> = if args.all {
        cat.items().iter().map(|i| i.id().to_string()).collect()
    } else {
        args.ids.clone()
    };
    ids.sort();
    ids.dedup();
    for id in &ids {
        if cat.get(id).is_none() {
            eprintln!("error: unknown spec id '{id}'");
            return ExitCode::from(2);
        }
    }
    let mode = match args.mode {
        ModeArg::Symbolic => Mode::Symbolic,
        ModeArg::Modular => Mode::Modular,
    };
    let mut selection: Vec<SuiteEntry> = Vec::new();
    for id in &ids {
        let item = cat.get(id).expect("validated");
        let (lo, hi) = match args.n {
            Some(range) => range,
            None => (item.n_min(), 6.max(item.n_min())),
        };
        for n in lo..=hi {
            selection.push(SuiteEntry { id: id.clone(), n, mode });
        }
    }
    selection.sort_by(|x, y| (&x.id, x.n).cmp(&(&y.id, y.n)));
    selection.dedup();

    let cfg = ModularConfig {
        prime: args.prime,
        trials: args.trials,
        seed: args.seed,
        max_pole_retries: 100,
    };
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));

    let results = report::execute(
        &cat,
        &selection,
        &cfg,
        jobs,
        args.format == Format::Text,
        args.no_timing,
    );
    let pass = qident::verifier::aggregate_pass(&results);
    match args.format {
        Format::Text => {
            report::emit(&format!("aggregate: {}", if pass { "pass" } else { "fail" }));
        }
        Format::Json => {
            report::emit(&report::to_json(&cfg, &results, pass));
        }
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
