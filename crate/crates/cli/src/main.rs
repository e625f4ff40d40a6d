//! `biset`: batch front end for the double Burnside computations.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use biset_core::biset::BisetRegistry;
use biset_core::linalg::FieldSpec;
use biset_core::{Budget, Error};
use clap::{Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "biset", version, about = "Exact computations in double Burnside algebras of small groups")]
struct Cli {
    /// Characteristic of the coefficient field: 0 or a prime.
    #[arg(long = "char", global = true, default_value = "0")]
    characteristic: String,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Directory for cached canonical bases.
    #[arg(long, global = true, env = "BISET_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Worker threads; verdicts do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Wall-clock budget, e.g. `90s`, `10m`, `2h`.
    #[arg(long, global = true, default_value = "10m", value_parser = humantime::parse_duration)]
    budget: Duration,

    /// Cap on the number of biset products one span search may try.
    #[arg(long, global = true)]
    max_products: Option<u64>,

    /// Seed recorded in the report metadata; no verdict depends on it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical basis of B(G, H) with the invariants of each label.
    Basis {
        left: String,
        right: String,
        /// Print counts only.
        #[arg(long)]
        summary: bool,
    },
    /// Compose basis label I of B(G,H) with basis label J of B(H,K).
    Compose {
        g: String,
        h: String,
        k: String,
        i: usize,
        j: usize,
        /// Recompute with the explicit orbit construction and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Butterfly factorization of basis label I of B(G,H).
    Butterfly { g: String, h: String, i: usize },
    /// Decide whether H is k-generated by G.
    Generates {
        h: String,
        g: String,
        /// Write the certificate record to this file.
        #[arg(long)]
        certificate_out: Option<PathBuf>,
        /// Skip the quotient shortcut.
        #[arg(long)]
        force_span: bool,
    },
    /// Decide the non-vanishing property of G.
    Nv { g: String },
    /// Semisimplicity of kB(G,G).
    Semisimple {
        g: String,
        /// Also compute the radical of the trace form over Q.
        #[arg(long)]
        radical: bool,
    },
    /// Whether every subgroup of G is isomorphic to a quotient.
    Ssd { g: String },
    /// Dimension of the simple functor S_{P,k} at G in characteristic 0.
    SimpleDim { p: String, g: String },
    /// Conjugacy classes of sections of G.
    Sections {
        g: String,
        /// Only sections with |T/S| equal to this.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Rank of the trace Gram form on kB(G,G).
    TraceGram { g: String },
    /// Action of kB(G,G) on kB(G), and the N(G), N'(G) submodule check.
    BurnsideModule { g: String },
    /// Dimension of the essential quotient of kB(H,H), against |Out(H)|.
    EssentialOut { h: String },
    /// Recompose a certificate record and check it equals the identity.
    Verify { certificate: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Basis { .. } => "basis",
            Command::Compose { .. } => "compose",
            Command::Butterfly { .. } => "butterfly",
            Command::Generates { .. } => "generates",
            Command::Nv { .. } => "nv",
            Command::Semisimple { .. } => "semisimple",
            Command::Ssd { .. } => "ssd",
            Command::SimpleDim { .. } => "simple-dim",
            Command::Sections { .. } => "sections",
            Command::TraceGram { .. } => "trace-gram",
            Command::BurnsideModule { .. } => "burnside-module",
            Command::EssentialOut { .. } => "essential-out",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Exit codes.
mod exit {
    pub const AFFIRMATIVE: u8 = 0;
    pub const NEGATIVE: u8 = 1;
    pub const INCONCLUSIVE: u8 = 2;
    pub const USAGE: u8 = 3;
    pub const PRECONDITION: u8 = 4;
    pub const INTERNAL: u8 = 5;
}

pub(crate) struct Context {
    pub field: FieldSpec,
    pub registry: BisetRegistry,
}

fn error_code(e: &Error) -> (u8, &'static str) {
    match e {
        Error::Budget { .. } => (exit::INCONCLUSIVE, "budget"),
        Error::Parse(_) | Error::InvalidSpec(_) => (exit::USAGE, "parse"),
        Error::Precondition(_) | Error::Mismatch(_) | Error::InvalidTable(_) => (exit::PRECONDITION, "precondition"),
        Error::Cache(_) | Error::Io(_) => (exit::INTERNAL, "io"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::AFFIRMATIVE });
        }
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let start = Instant::now();
    let command = cli.command.name();
    let meta = |elapsed: Duration| output::Meta {
        elapsed_ms: elapsed.as_millis() as u64,
        threads: rayon::current_num_threads(),
        seed: cli.seed,
        cache_dir: cli.cache_dir.as_ref().map(|p| p.display().to_string()),
        version: env!("CARGO_PKG_VERSION"),
    };

    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("biset: cannot configure {n} threads: {e}");
            return ExitCode::from(exit::USAGE);
        }
    }

    let parsed = cli
        .characteristic
        .parse::<FieldSpec>()
        .map_err(|_| Error::Parse(format!("--char expects 0 or a prime, got {:?}", cli.characteristic)));
    let field_label = parsed.as_ref().map_or_else(|_| cli.characteristic.clone(), ToString::to_string);
    let result = parsed.and_then(|field| {
        let mut budget = Budget::default().with_time_limit(cli.budget);
        budget.max_products = cli.max_products;
        let mut registry = BisetRegistry::new(budget);
        if let Some(dir) = &cli.cache_dir {
            registry = registry.with_cache_dir(dir);
        }
        let ctx = Context { field, registry };
        commands::run(&cli.command, &ctx)
    });

    match result {
        Ok(out) => {
            let code = match out.verdict {
                Some(biset_core::functor::Verdict::False) => exit::NEGATIVE,
                Some(biset_core::functor::Verdict::Inconclusive) => exit::INCONCLUSIVE,
                _ => exit::AFFIRMATIVE,
            };
            output::emit(format, command, &field_label, Ok(out), meta(start.elapsed()));
            ExitCode::from(code)
        }
        Err(e) => {
            let (code, kind) = error_code(&e);
            output::emit(
                format,
                command,
                &field_label,
                Err(output::Failure { kind, message: e.to_string() }),
                meta(start.elapsed()),
            );
            ExitCode::from(code)
        }
    }
}
