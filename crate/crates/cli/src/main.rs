use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use horolab_cli::{emit, plan, execute, CliError, Command, ExperimentConfig};

#[derive(Parser)]
#[command(name = "horolab", version, about = "Möbius orthogonality experiments on horocycle orbits")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Fixed-point bits for orbit arithmetic.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
    /// Key-value configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate μ or λ up to N.
    Sieve(Params),
    /// Build the prime-block decomposition of [1, N) and report exact counts.
    Decompose(Params),
    /// Replay the bilinear criterion for ν against a bounded sequence.
    Criterion(Params),
    /// Horocycle orbit coordinates and observable values.
    Orbit(Params),
    /// Pair correlation of an observable along two dilated orbits.
    Correlate(Params),
    /// Sums of ν(n) f(T^n ξ) at a ladder of N.
    Disjointness(Params),
    /// Correlator group of a cusp point.
    Classify(Params),
}

#[derive(Args, Default)]
struct Params {
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    j0: Option<String>,
    #[arg(long)]
    j1: Option<String>,
    /// Prime cutoff P for the pair set.
    #[arg(long)]
    cutoff: Option<String>,
    /// Fixed pair length M; default floor(N / max(p1, p2)).
    #[arg(long)]
    pair_length: Option<String>,
    /// Excluded pairs, `2:3;5:7`.
    #[arg(long)]
    excluded: Option<String>,
    /// `mobius` or `liouville`.
    #[arg(long)]
    nu: Option<String>,
    /// `exp:theta=<real>`, `const:c=<re>` or `csv:<path>`.
    #[arg(long)]
    seq: Option<String>,
    /// `point:identity`, `point:cusp:x=<real>`, `point:lower:t=<real>` or `point:matrix:a,b,c,d`.
    #[arg(long)]
    point: Option<String>,
    /// `obs:bump:y0=..,width=..`, `obs:framed-bump:..`, `obs:cusp-step:y1=..,y2=..` or `obs:const:c=..`.
    #[arg(long)]
    obs: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// Subtract the Haar mean before correlating.
    #[arg(long)]
    center: Option<String>,
    /// Comma-separated N values.
    #[arg(long)]
    ladder: Option<String>,
    /// Point descriptor: `inf`, `p/q`, `surd:a,b,c`, `sqrt:d`, `golden`, `e`, `pi`.
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    y_max: Option<String>,
    #[arg(long)]
    nx: Option<String>,
    #[arg(long)]
    ns: Option<String>,
    #[arg(long)]
    ntheta: Option<String>,
    /// `auto`, `double` or a bit count.
    #[arg(long)]
    precision: Option<String>,
    /// Also write the CSV table here.
    #[arg(long)]
    series: Option<PathBuf>,
}

impl Params {
    fn pairs(&self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("n", self.n.clone()),
            ("alpha", self.alpha.clone()),
            ("j0", self.j0.clone()),
            ("j1", self.j1.clone()),
            ("cutoff", self.cutoff.clone()),
            ("pair_length", self.pair_length.clone()),
            ("excluded", self.excluded.clone()),
            ("nu", self.nu.clone()),
            ("seq", self.seq.clone()),
            ("point", self.point.clone()),
            ("obs", self.obs.clone()),
            ("p", self.p.clone()),
            ("q", self.q.clone()),
            ("center", self.center.clone()),
            ("ladder", self.ladder.clone()),
            ("z", self.z.clone()),
            ("y_max", self.y_max.clone()),
            ("nx", self.nx.clone()),
            ("ns", self.ns.clone()),
            ("ntheta", self.ntheta.clone()),
            ("precision", self.precision.clone()),
            ("series", self.series.as_ref().map(|p| p.display().to_string())),
        ]
    }
}

fn flags(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let (command, params) = match &cli.command {
        Cmd::Sieve(p) => (Command::Sieve, p),
        Cmd::Decompose(p) => (Command::Decompose, p),
        Cmd::Criterion(p) => (Command::Criterion, p),
        Cmd::Orbit(p) => (Command::Orbit, p),
        Cmd::Correlate(p) => (Command::Correlate, p),
        Cmd::Disjointness(p) => (Command::Disjointness, p),
        Cmd::Classify(p) => (Command::Classify, p),
    };
    let mut c = ExperimentConfig {
        command: Some(command),
        ..Default::default()
    };
    let mut pairs = params.pairs();
    pairs.push(("out", cli.out.as_ref().map(|p| p.display().to_string())));
    pairs.push(("threads", cli.threads.map(|t| t.to_string())));
    pairs.push(("precision", cli.precision_bits.map(|b| b.to_string())));
    pairs.push(("format", cli.format.clone()));
    for (k, v) in pairs {
        if let Some(v) = v {
            if !command.accepts(k) {
                return Err(CliError::Config(format!("`--{}` does not apply to `{command}`", k.replace('_', "-"))));
            }
            c.set(k, &v)?;
        }
    }
    Ok(c)
}

fn real_main(cli: Cli) -> Result<()> {
    let overrides = flags(&cli)?;
    let base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
            ExperimentConfig::parse(&text)?
        }
        None => ExperimentConfig::default(),
    };
    let config = base.overlay(&overrides);
    let plan = plan(&config)?;
    if let Some(t) = plan.config.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let report = execute(&plan)?;
    if let Some(text) = emit(&report, &plan.config)? {
        print!("{text}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast_ref::<CliError>() {
            Some(ce) => {
                eprintln!("error[{}]: {ce}", ce.code());
                ExitCode::from(ce.exit_code() as u8)
            }
            None => {
                eprintln!("error: {e:#}");
                ExitCode::FAILURE
            }
        },
    }
}
