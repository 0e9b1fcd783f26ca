mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "fanlab", version, about = "Inverse limits, Mahavier products and fan models on [0, 1]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search exponents bringing x within eps of z.
    Density {
        #[arg(long, value_enum)]
        lemma: Search,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 1 << 20)]
        bound: u64,
        /// Catalog name or JSON file for the property-L family.
        #[arg(long, default_value = "definicija")]
        family: String,
    },
    /// Enumerate Mahavier words from a start point as CSV.
    Mahavier {
        #[arg(long)]
        relation: String,
        #[arg(long)]
        start: f64,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterate the skew map and report which targets the orbit hits.
    Orbit {
        #[arg(long, default_value = "definicija")]
        family: String,
        /// Leading symbols of the one-sided word, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        word: Vec<u8>,
        /// Symbol repeated after `word`.
        #[arg(long, default_value_t = 1)]
        tail: u8,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a point whose skew orbit hits every target in order.
    TransitivePoint {
        #[arg(long, default_value = "definicija")]
        family: String,
        #[arg(long, conflicts_with = "auto")]
        targets: Option<PathBuf>,
        /// Number of enumerated targets with tolerances 2^-i.
        #[arg(long)]
        auto: Option<usize>,
        #[arg(long, default_value_t = 1e-6)]
        floor: f64,
        #[arg(long, default_value_t = 0.5)]
        x0: f64,
        #[arg(long, default_value_t = 1 << 40)]
        bound: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Writes the prefix as `symbol,run_length` rows.
        #[arg(long)]
        prefix_out: Option<PathBuf>,
    },
    /// Build a chain of Mahavier words visiting each cylinder target.
    SigmaChain {
        #[arg(long, default_value = "H")]
        relation: String,
        #[arg(long, conflicts_with = "auto")]
        targets: Option<PathBuf>,
        #[arg(long)]
        auto: Option<usize>,
        #[arg(long, default_value_t = 1 << 30)]
        bound: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a fan or a relation as SVG.
    Render {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 32)]
        samples: usize,
        /// Relation to draw for `--kind relation`.
        #[arg(long, default_value = "exx3")]
        name: String,
        /// Number of random legs for `--kind lelek`.
        #[arg(long, default_value_t = 256)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Point dump `leg_id,t,x,y` for `--kind cantor`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the built-in checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Search {
    Pow23,
    HalfPow,
    #[value(name = "propertyL", alias = "property-l")]
    PropertyL,
    Gabi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Cantor,
    Lelek,
    Relation,
}

fn configure_threads() {
    if let Some(n) = std::env::var("FANLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    configure_threads();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
