//! `strat-ic`: command-line front end for the stratified intersection cohomology toolkit.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use strat_ic::harness::{run, Command, Format, ReportBundle, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "strat-ic", version, about = "Exact intersection cohomology of finite stratified complexes")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate a space and print its canonical form.
    Build(Common),
    /// Constant and pushed-forward sheaves with their hypercohomology.
    Sheaf(Common),
    /// Stratified de Rham ladder and the stratumwise table.
    Derham(Common),
    /// Deligne intersection complex for a perversity.
    Ih(Common),
    /// Duality pairing matrices.
    Duality(Common),
    /// Künneth decomposition of a product `product:A,B`.
    Kunneth(Common),
    /// Intersection numbers of graded cocycles.
    Intersect(Common),
    /// Lagrangian mezzoperversities and refined complexes.
    Mezzo(Common),
    /// Reproduction suite; `--example` selects one scenario.
    Reproduce(Common),
    /// Seeded randomized invariant checks.
    Proptest(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Shipped example name or expression such as `product:s1,s2`.
    #[arg(long)]
    example: Option<String>,
    /// Space JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// `lower-middle`, `upper-middle` or `custom:0,1,1`.
    #[arg(long)]
    perversity: Option<String>,
    /// Mezzoperversity JSON file.
    #[arg(long)]
    mezzo: Option<PathBuf>,
    /// Künneth mode: rational, stratumwise, intersection or integral.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    degree: Option<usize>,
    /// Include sheaf dumps in the report.
    #[arg(long)]
    dump: bool,
    /// `stratumwise` or `hypercohomology`.
    #[arg(long)]
    table: Option<String>,
    /// Graded cocycles JSON file for `intersect`.
    #[arg(long)]
    cycles: Option<PathBuf>,
    /// Flip the cup product sign when the left degree is larger.
    #[arg(long)]
    mutate: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl Cmd {
    fn split(self) -> (Command, Common) {
        match self {
            Cmd::Build(c) => (Command::Build, c),
            Cmd::Sheaf(c) => (Command::Sheaf, c),
            Cmd::Derham(c) => (Command::Derham, c),
            Cmd::Ih(c) => (Command::Ih, c),
            Cmd::Duality(c) => (Command::Duality, c),
            Cmd::Kunneth(c) => (Command::Kunneth, c),
            Cmd::Intersect(c) => (Command::Intersect, c),
            Cmd::Mezzo(c) => (Command::Mezzo, c),
            Cmd::Reproduce(c) => (Command::Reproduce, c),
            Cmd::Proptest(c) => (Command::Proptest, c),
        }
    }
}

fn config(command: Command, c: Common) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(command).with_sources(c.example, c.input)?;
    cfg.perversity = c.perversity;
    cfg.mezzo = c.mezzo;
    cfg.mode = c.mode;
    cfg.format = match c.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Text => Format::Text,
    };
    cfg.seed = c.seed;
    cfg.degree = c.degree;
    cfg.dump = c.dump;
    cfg.table = c.table;
    cfg.cycles = c.cycles;
    cfg.mutate = c.mutate;
    Ok(cfg)
}

fn render(bundle: &ReportBundle, format: Format) -> String {
    match format {
        Format::Json => bundle.to_json(),
        Format::Csv => bundle.to_csv(),
        Format::Text => bundle.to_text(),
    }
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("STRAT_IC_THREADS") {
        let n: usize = v.parse().with_context(|| format!("STRAT_IC_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<bool> {
    init_threads()?;
    let (command, common) = cli.command.split();
    let output = common.output.clone();
    let cfg = config(command, common)?;
    let bundle = run(&cfg)?;
    let text = render(&bundle, cfg.format);
    match output {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    for row in bundle.failures() {
        eprintln!("FAIL {}: expected {:?}, got {}", row.id, row.expected, row.actual);
    }
    Ok(bundle.passed())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
