use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maxpres::harness::format::parse_graph_db;
use maxpres::harness::random;
use maxpres::harness::verify::verify_instance;
use maxpres::harness::{
    ingest_edge_lists, parse_database, stats, verify_random, write_database, write_patterns,
    ExperimentSpec, Format, Taus,
};
use maxpres::{
    mine, mine_via_reduction, oracle_max, Database, Domain, Error, GraphClass, LevelStats, Pattern,
    Predicate, Reduction, ReductionSpec, Result, SupportThreshold,
};

#[derive(Parser)]
#[command(
    name = "maxpres",
    version,
    about = "Maximal frequent pattern mining through maximality-preserving reductions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine the maximal feasible frequent patterns of a database.
    Mine {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tau: TauArgs,
        #[command(flatten)]
        phi: PhiArgs,
        /// Reduction chain to mine through, e.g. `g2bdg3` or `compose:fis2seq,seq2dag`.
        #[arg(long = "reduce")]
        reduction: Option<String>,
    },
    /// Map a database through a reduction, or back with `--inverse`.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long = "reduce")]
        reduction: Option<String>,
        /// Read a reduced database and map it back to its source domain.
        #[arg(long)]
        inverse: bool,
    },
    /// Exhaustive reference answer for small databases.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tau: TauArgs,
        #[command(flatten)]
        phi: PhiArgs,
    },
    /// Compare miner and oracle on one database or on random instances.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tau: TauArgs,
        #[command(flatten)]
        phi: PhiArgs,
        #[arg(long = "reduce")]
        reduction: Option<String>,
        /// Verify this many random instances instead of an input file.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Per-size pattern counts and maximal counts over a threshold sweep.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tau: TauArgs,
        #[command(flatten)]
        phi: PhiArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Input file (`-` for stdin); edge lists accept several files or directories.
    inputs: Vec<PathBuf>,
    /// itemset, pairs, sequence or graph.
    #[arg(long, default_value = "itemset")]
    domain: String,
    /// Graph class: T, BDG(k), G, DAG or DirG.
    #[arg(long)]
    class: Option<String>,
    /// fimi, gspan or edgelist.
    #[arg(long)]
    format: Option<String>,
    /// keep or split disconnected input graphs.
    #[arg(long, default_value = "keep")]
    components: String,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TauArgs {
    /// Absolute support threshold.
    #[arg(long, conflicts_with = "tau_frac")]
    tau: Option<usize>,
    /// Threshold as a fraction of the database size, rounded up.
    #[arg(long)]
    tau_frac: Option<f64>,
    /// Inclusive threshold range `a..b`.
    #[arg(long)]
    tau_range: Option<String>,
}

#[derive(Args)]
struct PhiArgs {
    /// Feasibility predicate, e.g. `always`, `connected-edges` or `preimage(g2fis)`.
    #[arg(long, default_value = "always")]
    phi: String,
}

impl PhiArgs {
    fn predicate(&self) -> Result<Predicate> {
        Predicate::parse(&self.phi)
    }
}

impl TauArgs {
    /// The single threshold, fixed or relative.
    fn single(&self) -> Option<Taus> {
        match (self.tau, self.tau_frac) {
            (Some(t), _) => Some(Taus::Fixed(t)),
            (None, Some(f)) => Some(Taus::Fraction(f)),
            (None, None) => None,
        }
    }

    /// The thresholds to run, with the range taking precedence.
    fn taus(&self) -> Result<Taus> {
        match &self.tau_range {
            Some(r) => Taus::parse_range(r),
            None => self
                .single()
                .ok_or_else(|| Error::Usage("give --tau, --tau-frac or --tau-range".into())),
        }
    }
}

struct Loaded {
    db: Database,
    spec: ExperimentSpec,
}

impl InputArgs {
    fn class(&self) -> Result<Option<GraphClass>> {
        self.class.as_deref().map(str::parse).transpose()
    }

    fn domain(&self) -> Result<Domain> {
        let domain: Domain = self.domain.parse()?;
        Ok(match (domain, self.class()?) {
            (Domain::Graph(_), Some(c)) => Domain::Graph(c),
            (d, Some(_)) => {
                return Err(Error::Usage(format!("--class applies to graphs, not {d}")))
            }
            (d, None) => d,
        })
    }

    fn spec(&self, taus: Taus) -> Result<ExperimentSpec> {
        let mut spec = ExperimentSpec::new(self.inputs.clone(), self.domain()?, taus);
        spec.format = self.format.as_deref().map(str::parse).transpose()?;
        spec.components = self.components.parse()?;
        spec.output = self.output.clone();
        spec.validate()?;
        Ok(spec)
    }

    fn read_text(&self) -> Result<String> {
        let path = &self.inputs[0];
        if path.as_os_str() == "-" {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            Ok(text)
        } else {
            Ok(std::fs::read_to_string(path)?)
        }
    }

    /// Reads the input as a database of `spec.domain`. Graph input without a
    /// `class` takes G or DirG from the presence of the `d` flag.
    fn load_as(&self, spec: ExperimentSpec, class: Option<GraphClass>) -> Result<Loaded> {
        let domain = spec.domain;
        if spec.format() == Format::EdgeList {
            let directed = matches!(domain, Domain::Graph(c) if c.is_directed());
            let out = ingest_edge_lists(&spec.inputs, directed, spec.components)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            return Ok(Loaded {
                db: out.database,
                spec,
            });
        }
        let text = self.read_text()?;
        let db = match domain {
            Domain::Graph(_) => parse_graph_db(&text, class, spec.components)?,
            other => parse_database(&text, other, spec.components)?,
        };
        Ok(Loaded { db, spec })
    }

    fn load(&self, taus: Taus) -> Result<Loaded> {
        let spec = self.spec(taus)?;
        self.load_as(spec, self.class()?)
    }

    fn install_threads(&self) -> Result<()> {
        if let Some(n) = self.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Error::Usage(format!("cannot start {n} threads: {e}")))?;
        }
        Ok(())
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(path) => std::fs::write(path, text)?,
            None => io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn bind(reduction: Option<&str>, db: &Database) -> Result<Reduction> {
    match reduction {
        Some(s) => s.parse::<ReductionSpec>()?.bind(db),
        None => Ok(Reduction::identity()),
    }
}

fn is_directed(db: &Database) -> bool {
    matches!(db.domain(), Domain::Graph(c) if c.is_directed())
}

fn level_table(out: &mut String, stats: &[LevelStats]) {
    out.push_str("# level\tcandidates\tfrequent\tfeasible_frequent\n");
    for s in stats {
        writeln!(
            out,
            "# {}\t{}\t{}\t{}",
            s.level, s.candidates, s.frequent, s.feasible_frequent
        )
        .unwrap();
    }
}

fn pattern_block(out: &mut String, tau: SupportThreshold, patterns: &[Pattern], directed: bool) {
    writeln!(out, "# tau={tau} maximal={}", patterns.len()).unwrap();
    out.push_str(&write_patterns(patterns, directed));
}

fn cmd_mine(
    input: &InputArgs,
    tau: &TauArgs,
    phi: &PhiArgs,
    reduction: Option<&str>,
) -> Result<()> {
    let loaded = input.load(tau.taus()?)?;
    let phi = phi.predicate()?;
    let r = bind(reduction, &loaded.db)?;
    let mut out = String::new();
    for t in loaded.spec.taus.resolve(loaded.db.len())? {
        let result = if r.is_identity() {
            mine(&loaded.db, t, &phi)?
        } else {
            mine_via_reduction(&r, &loaded.db, t, &phi)?
        };
        pattern_block(&mut out, t, &result.maximal, is_directed(&loaded.db));
        level_table(&mut out, &result.stats);
    }
    input.emit(&out)
}

fn cmd_oracle(input: &InputArgs, tau: &TauArgs, phi: &PhiArgs) -> Result<()> {
    let loaded = input.load(tau.taus()?)?;
    let phi = phi.predicate()?;
    let mut out = String::new();
    for t in loaded.spec.taus.resolve(loaded.db.len())? {
        let maximal = oracle_max(&loaded.db, t, &phi)?;
        pattern_block(&mut out, t, &maximal, is_directed(&loaded.db));
    }
    input.emit(&out)
}

fn cmd_reduce(input: &InputArgs, reduction: Option<&str>, inverse: bool) -> Result<()> {
    if !inverse {
        let loaded = input.load(Taus::Fixed(1))?;
        let chain =
            reduction.ok_or_else(|| Error::Usage("reduce needs --reduce <chain>".into()))?;
        let r = bind(Some(chain), &loaded.db)?;
        let reduced = r.reduce_database(&loaded.db)?;
        let mut out = format!("# reduction {}\n", r.id());
        out.push_str(&write_database(&reduced));
        return input.emit(&out);
    }
    if input.inputs.len() != 1 {
        return Err(Error::Usage("--inverse reads exactly one input".into()));
    }
    let text = input.read_text()?;
    let header = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("# reduction "))
        .map(|s| s.trim().to_string());
    let chain = reduction
        .map(str::to_string)
        .or(header)
        .ok_or_else(|| Error::Usage("--inverse needs --reduce or a `# reduction` header".into()))?;
    let r = chain.parse::<ReductionSpec>()?.bind_explicit()?;
    let (source, target) = match (r.source_domain(), r.target_domain()) {
        (Some(s), Some(t)) => (s, t),
        _ => return input.emit(&text),
    };
    let mut spec = ExperimentSpec::new(input.inputs.clone(), target, Taus::Fixed(1));
    spec.components = input.components.parse()?;
    let class = match target {
        Domain::Graph(c) => Some(c),
        _ => None,
    };
    let reduced = input.load_as(spec, class)?.db;
    let rows = reduced
        .transactions()
        .iter()
        .map(|q| {
            r.inverse(q)?.ok_or_else(|| Error::NoPreimage {
                reduction: r.id(),
                pattern: q.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let db = Database::new(source, rows)?;
    input.emit(&write_database(&db))
}

fn cmd_verify(
    input: &InputArgs,
    tau: &TauArgs,
    phi: &PhiArgs,
    reduction: Option<&str>,
    count: Option<usize>,
    seed: u64,
) -> Result<()> {
    let report = match count {
        Some(n) => verify_random(n, seed)?,
        None => {
            let loaded = input.load(tau.taus()?)?;
            let phi = phi.predicate()?;
            let r = bind(reduction, &loaded.db)?;
            let mut rng = random::rng(seed);
            let mut all = maxpres::harness::VerifyReport::default();
            for t in loaded.spec.taus.resolve(loaded.db.len())? {
                all.checks
                    .extend(verify_instance(&loaded.db, t, &phi, &r, &mut rng)?.checks);
            }
            all
        }
    };
    input.emit(&report.to_string())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "{} of {} checks failed",
            report.failures().count(),
            report.checks.len()
        )))
    }
}

fn cmd_stats(input: &InputArgs, tau: &TauArgs, phi: &PhiArgs) -> Result<()> {
    let single = tau
        .single()
        .ok_or_else(|| Error::Usage("stats needs --tau or --tau-frac for the size table".into()))?;
    let loaded = input.load(single)?;
    let phi = phi.predicate()?;
    let t = loaded.spec.taus.resolve(loaded.db.len())?[0];
    let range = match &tau.tau_range {
        Some(r) => match Taus::parse_range(r)? {
            Taus::Range(r) => r,
            _ => unreachable!("parse_range returns a range"),
        },
        None => 1..=loaded.db.len().max(1),
    };
    input.emit(&stats(&loaded.db, t, range, &phi)?.to_tsv())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Mine {
            input,
            tau,
            phi,
            reduction,
        } => {
            input.install_threads()?;
            cmd_mine(input, tau, phi, reduction.as_deref())
        }
        Command::Reduce {
            input,
            reduction,
            inverse,
        } => {
            input.install_threads()?;
            cmd_reduce(input, reduction.as_deref(), *inverse)
        }
        Command::Oracle { input, tau, phi } => {
            input.install_threads()?;
            cmd_oracle(input, tau, phi)
        }
        Command::Verify {
            input,
            tau,
            phi,
            reduction,
            random,
            seed,
        } => {
            input.install_threads()?;
            if random.is_none() && input.inputs.is_empty() {
                return Err(Error::Usage(
                    "verify needs an input or --random <count>".into(),
                ));
            }
            cmd_verify(input, tau, phi, reduction.as_deref(), *random, *seed)
        }
        Command::Stats { input, tau, phi } => {
            input.install_threads()?;
            cmd_stats(input, tau, phi)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = e.kind();
            eprintln!("error[{}]: {e}", kind.tag());
            ExitCode::from(kind.exit_code() as u8)
        }
    }
}
