//! `bicomb`: exact tight spans, matching-criterion certificates, geodesic
//! bicombing construction and diagnostics, and the ray metric on the
//! closure of sup-norm spaces.
//!
//! Every invocation prints one JSON report to stdout. Exit codes separate
//! the tool from the mathematics: 0 means the command ran and the checked
//! property holds, 2 means the command ran and the property fails (with a
//! defect report in the results), 1 means the invocation itself was bad.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand};
use report::CommandOutcome;

#[derive(Parser)]
#[command(name = "bicomb", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the metric axioms of a space file.
    Validate {
        /// Path to a space JSON file.
        space: String,
    },
    /// Tight span of a finite space: dimension and face complex.
    TightSpan {
        space: String,
        /// Include the full face list in the output.
        #[arg(long)]
        faces: bool,
        /// Report the dimension only (default when no flag is given).
        #[arg(long)]
        dim: bool,
        /// Enumeration cap on the number of points.
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    /// The 2(n+1)-point matching criterion and the exhaustive dimension.
    CombDim {
        space: String,
        /// Criterion level to check.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Compute the exact combinatorial dimension by subset sweep.
        #[arg(long)]
        exhaustive: bool,
        /// Cap for the exhaustive sweep.
        #[arg(long, default_value_t = 8)]
        cap: usize,
        /// Certificate for one subset and pairing: `--witness <Z> <I>`
        /// with `Z` like `0,1,2,3` and `I` like `0-1,2-3`.
        #[arg(long, num_args = 2, value_names = ["Z", "I"])]
        witness: Option<Vec<String>>,
    },
    /// Certificate for one subset and pairing of a space.
    DressWitness {
        space: String,
        /// Comma-separated subset indices, e.g. `0,1,2,3`.
        #[arg(long)]
        z: String,
        /// Pairing as dash pairs over the subset indices, e.g. `0-1,2-3`.
        #[arg(long)]
        i: String,
    },
    /// Build or check geodesic bicombings.
    Bicombing {
        #[command(subcommand)]
        action: BicombingAction,
    },
    /// Ray metric and boundary checks for ambient sup-norm space.
    Boundary {
        #[command(subcommand)]
        action: BoundaryAction,
    },
    /// List or emit the example spaces.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
}

#[derive(Args, Clone)]
struct BicombingSource {
    /// Gallery id (`butterfly`, `l-inf:2`, `ngon:6`, ...) or a space JSON
    /// path; finite spaces are realized as tight-span retract spaces.
    #[arg(long)]
    space: String,
    /// Seed bicombing: `linear` for ambient space, `retract` otherwise.
    #[arg(long, default_value = "retract")]
    seed_bicombing: String,
    /// Refinement level to build (1 = the seed itself).
    #[arg(long, default_value_t = 1)]
    levels: u32,
}

#[derive(Subcommand)]
enum BicombingAction {
    /// Run the refinement cascade and report per-level defects.
    Build {
        #[command(flatten)]
        source: BicombingSource,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Scan one axiom and fail (exit 2) when the defect exceeds tolerance.
    Check {
        #[command(flatten)]
        source: BicombingSource,
        /// `conical`, `convex`, `discrete:<n>`, `consistent`, `reversible`
        /// or `geodesic`.
        #[arg(long)]
        axiom: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
}

#[derive(Subcommand)]
enum BoundaryAction {
    /// Ray metric between two closure points of `l-inf:<d>`.
    Dist {
        /// Ambient space id, `l-inf:<d>`.
        #[arg(long, default_value = "l-inf:2")]
        space: String,
        /// Basepoint, e.g. `0,0`.
        #[arg(long)]
        o: String,
        /// Interior point `a,b,..` or boundary direction `dir:a,b,..`.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Seeded verification of one boundary estimate.
    Check {
        /// `phi-r`, `t-T`, `psi`, `cone` or `sandwich`.
        #[arg(long)]
        lemma: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum GalleryAction {
    /// List the available example spaces.
    List,
    /// Emit a finite example space as JSON.
    Emit {
        /// Gallery id, e.g. `ngon:6`.
        id: String,
        /// Write to a file instead of embedding in the report.
        #[arg(short, long)]
        out: Option<String>,
    },
}

fn main() {
    if let Ok(threads) = std::env::var("BICOMB_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build_global();
        }
    }
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    match run(cli) {
        Ok(outcome) => {
            let failed = outcome.failed;
            report::print_report(&argv, outcome, started);
            std::process::exit(if failed { 2 } else { 0 });
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<CommandOutcome> {
    match cli.command {
        Command::Validate { space } => commands::validate(&space),
        Command::TightSpan {
            space,
            faces,
            dim,
            cap,
        } => commands::tight_span(&space, faces, dim, cap),
        Command::CombDim {
            space,
            n,
            exhaustive,
            cap,
            witness,
        } => match witness {
            Some(args) => commands::dress_witness(&space, &args[0], &args[1]),
            None => commands::comb_dim(&space, n, exhaustive, cap),
        },
        Command::DressWitness { space, z, i } => commands::dress_witness(&space, &z, &i),
        Command::Bicombing { action } => match action {
            BicombingAction::Build {
                source,
                tol,
                samples,
                rng_seed,
            } => commands::bicombing_build(
                &source.space,
                &source.seed_bicombing,
                source.levels,
                tol,
                samples,
                rng_seed,
            ),
            BicombingAction::Check {
                source,
                axiom,
                tol,
                samples,
                rng_seed,
            } => commands::bicombing_check(
                &source.space,
                &source.seed_bicombing,
                source.levels,
                &axiom,
                tol,
                samples,
                rng_seed,
            ),
        },
        Command::Boundary { action } => match action {
            BoundaryAction::Dist { space, o, x, y } => commands::boundary_dist(&space, &o, &x, &y),
            BoundaryAction::Check {
                lemma,
                dim,
                samples,
                rng_seed,
                tol,
            } => commands::boundary_check(&lemma, dim, samples, rng_seed, tol),
        },
        Command::Gallery { action } => match action {
            GalleryAction::List => commands::gallery_list(),
            GalleryAction::Emit { id, out } => commands::gallery_emit(&id, out.as_deref()),
        },
    }
}
