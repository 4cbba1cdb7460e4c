use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use filterlab::checks::{self, Certificate, CheckBounds, SearchSummary};
use filterlab::filter::{enumerate_filters, FilterFamily, FiniteFilter, IndexSet};
use filterlab::space::{topologies_up_to, DedupMode, EnumerationLimits, FiniteSpace, SpaceCatalogue};
use filterlab::theorem::{cor22_check, cor23_check, cor54_check, comfort_report, thm21_check, Bounds};
use filterlab::LabError;

mod render;

#[derive(Parser)]
#[command(name = "filterlab", version, about = "Exhaustive checks for filter convergence on finite spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; text is a lossy rendering of the JSON
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads
    #[arg(long, global = true, default_value_t = default_jobs())]
    jobs: usize,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dedup {
    Labeled,
    UpToHomeomorphism,
}

impl From<Dedup> for DedupMode {
    fn from(d: Dedup) -> Self {
        match d {
            Dedup::Labeled => DedupMode::Labeled,
            Dedup::UpToHomeomorphism => DedupMode::UpToHomeomorphism,
        }
    }
}

#[derive(Args, Clone)]
struct Grid {
    /// Only spaces with exactly this many points
    #[arg(long, conflicts_with = "max_points")]
    points: Option<usize>,

    /// Spaces with 1 to this many points [default: 3]
    #[arg(long)]
    max_points: Option<usize>,

    /// Filters on index sets of size 1 to this
    #[arg(long, default_value_t = 2)]
    max_index: usize,

    /// Factor bound for product conditions
    #[arg(long, default_value_t = 3)]
    product_bound: usize,

    /// Catalogue size bound for the thm21 check
    #[arg(long, default_value_t = 3)]
    max_catalogue: usize,

    #[arg(long, value_enum, default_value_t = Dedup::Labeled)]
    dedup: Dedup,
}

impl Grid {
    fn bounds(&self) -> CheckBounds {
        let (min_points, max_points) = match (self.points, self.max_points) {
            (Some(p), _) => (p, p),
            (None, Some(m)) => (1, m),
            (None, None) => (1, 3),
        };
        CheckBounds {
            min_points,
            max_points,
            max_index: self.max_index,
            product_bound: self.product_bound,
            max_catalogue: self.max_catalogue,
            dedup: self.dedup.into(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Thm21,
    Cor22,
    Cor23,
}

#[derive(Subcommand)]
enum Command {
    /// List the topologies in a point range
    Enumerate {
        #[command(flatten)]
        grid: Grid,
    },
    /// Run a named check and emit one certificate per instance
    Check {
        name: String,
        #[command(flatten)]
        grid: Grid,
    },
    /// Run a named check and emit only the violations
    Search {
        name: String,
        #[command(flatten)]
        grid: Grid,
    },
    /// Re-run certificates (JSON lines or an array) and compare
    Certify {
        /// Certificate file; stdin when absent
        input: Option<PathBuf>,
    },
    /// Comfort preorder on filters relative to a catalogue
    Comfort {
        /// Catalogue file or inline JSON; the grid's spaces when absent
        #[arg(long)]
        catalogue: Option<String>,
        /// Filter list file or inline JSON; all filters up to --max-index when absent
        #[arg(long)]
        filters: Option<String>,
        #[command(flatten)]
        grid: Grid,
    },
    /// Product theorem conditions for a catalogue and a filter family
    Thm21 {
        #[arg(long)]
        catalogue: String,
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 3)]
        product_bound: usize,
        #[arg(long, value_enum, default_value_t = Variant::Thm21)]
        variant: Variant,
    },
    /// Sequential compactness of products of catalogue members
    Cor54 {
        #[arg(long)]
        catalogue: Option<String>,
        /// Largest power and factor count examined
        #[arg(long, default_value_t = 3)]
        power_bound: usize,
        #[command(flatten)]
        grid: Grid,
    },
}

enum Failure {
    Input(String, Option<(usize, usize)>),
    Resource(String),
    Internal(String),
    Io(io::Error),
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Resource(m) => Failure::Resource(m),
            LabError::Internal(m) => Failure::Internal(m),
            other => Failure::Input(other.to_string(), None),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Input(..) | Failure::Io(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn report(&self) -> Value {
        match self {
            Failure::Input(m, pos) => {
                let mut v = json!({"error": "input", "message": m});
                if let Some((line, column)) = pos {
                    v["line"] = json!(line);
                    v["column"] = json!(column);
                }
                v
            }
            Failure::Resource(m) => json!({"error": "resource", "message": m}),
            Failure::Internal(m) => json!({"error": "internal", "message": m}),
            Failure::Io(e) => json!({"error": "io", "message": e.to_string()}),
        }
    }
}

type Outcome = Result<bool, Failure>;

/// Reads `arg` as inline JSON when it looks like JSON, else as a path.
fn load_text(arg: &str) -> Result<String, Failure> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Input(format!("cannot read {arg}: {e}"), None))
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| {
        let pos = (e.line() > 0).then(|| (e.line(), e.column()));
        Failure::Input(format!("{what}: {e}"), pos)
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CatalogueWire {
    Catalogue(SpaceCatalogue),
    List(Vec<FiniteSpace>),
    Single(FiniteSpace),
}

fn load_catalogue(arg: &str) -> Result<SpaceCatalogue, Failure> {
    let text = load_text(arg)?;
    // Parse once as a plain value so syntax errors keep their position.
    let _: Value = parse_json(&text, "catalogue")?;
    let wire: CatalogueWire = parse_json(&text, "catalogue")?;
    let cat = match wire {
        CatalogueWire::Catalogue(c) => c,
        CatalogueWire::List(v) => SpaceCatalogue::labeled(v),
        CatalogueWire::Single(x) => SpaceCatalogue::labeled(vec![x]),
    };
    if cat.is_empty() {
        return Err(Failure::Input("catalogue is empty".into(), None));
    }
    Ok(cat)
}

fn grid_catalogue(b: &CheckBounds) -> Result<SpaceCatalogue, Failure> {
    let all = topologies_up_to(b.max_points, b.dedup, &EnumerationLimits::default())?;
    Ok(SpaceCatalogue {
        dedup: b.dedup,
        spaces: all.spaces.into_iter().filter(|x| x.len() >= b.min_points).collect(),
    })
}

struct Out {
    sink: Box<dyn Write>,
    format: Format,
}

impl Out {
    fn json(&mut self, v: &impl Serialize) -> io::Result<()> {
        serde_json::to_writer(&mut self.sink, v)?;
        writeln!(self.sink)
    }

    fn report(&mut self, v: &impl Serialize, text: impl FnOnce() -> String) -> io::Result<()> {
        match self.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut self.sink, v)?;
                writeln!(self.sink)
            }
            Format::Text => write!(self.sink, "{}", text()),
        }
    }

    fn certificates(&mut self, certs: &[Certificate]) -> io::Result<()> {
        for (i, c) in certs.iter().enumerate() {
            match self.format {
                Format::Json => self.json(c)?,
                Format::Text => writeln!(self.sink, "{}", render::certificate(i, c))?,
            }
        }
        Ok(())
    }

    fn summary(&mut self, s: &SearchSummary) -> io::Result<()> {
        match self.format {
            Format::Json => self.json(&json!({"summary": s})),
            Format::Text => writeln!(
                self.sink,
                "{}: {} checked, {} violations",
                s.check, s.checked, s.violations
            ),
        }
    }
}

fn read_certificates(input: Option<&PathBuf>) -> Result<Vec<Certificate>, Failure> {
    let text = match input {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display()), None))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    if text.trim_start().starts_with('[') {
        return parse_json(&text, "certificates");
    }
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(line).map_err(|e| {
            Failure::Input(format!("certificates: {e}"), Some((n + 1, e.column())))
        })?;
        if v.get("summary").is_some() {
            continue;
        }
        let c = serde_json::from_value(v)
            .map_err(|e| Failure::Input(format!("certificates: {e}"), Some((n + 1, 1))))?;
        out.push(c);
    }
    Ok(out)
}

fn all_filters(max_index: usize) -> Result<Vec<FiniteFilter>, Failure> {
    let mut fs = Vec::new();
    for k in 1..=max_index {
        fs.extend(enumerate_filters(&IndexSet::standard(k)?, max_index)?);
    }
    Ok(fs)
}

fn run(cli: &Cli, out: &mut Out) -> Outcome {
    let jobs = cli.jobs.max(1);
    match &cli.command {
        Command::Enumerate { grid } => {
            let b = grid.bounds();
            let cat = grid_catalogue(&b)?;
            let kind = match b.dedup {
                DedupMode::Labeled => "labeled",
                DedupMode::UpToHomeomorphism => "up-to-homeomorphism",
            };
            let line = format!("{} {kind} topologies", cat.len());
            out.report(&json!({"report": line, "count": cat.len(), "catalogue": cat}), || {
                render::catalogue(&line, &cat)
            })?;
            Ok(true)
        }
        Command::Check { name, grid } | Command::Search { name, grid } => {
            if !checks::is_registered(name) {
                return Err(LabError::Input(format!(
                    "unknown check {name:?}; known: {}",
                    checks::CHECKS.iter().map(|c| c.name).collect::<Vec<_>>().join(", ")
                ))
                .into());
            }
            let b = grid.bounds();
            let (certs, summary) = if matches!(cli.command, Command::Check { .. }) {
                let all = checks::run_check(name, &b, jobs)?;
                let summary = SearchSummary {
                    check: name.clone(),
                    checked: all.len() as u64,
                    violations: all.iter().filter(|c| !c.value).count() as u64,
                };
                (all, summary)
            } else {
                checks::search(name, &b, jobs)?
            };
            out.certificates(&certs)?;
            out.summary(&summary)?;
            Ok(summary.violations == 0)
        }
        Command::Certify { input } => {
            let certs = read_certificates(input.as_ref())?;
            let mut good = 0;
            for (i, c) in certs.iter().enumerate() {
                let ok = checks::reverify(c)?;
                good += usize::from(ok);
                match out.format {
                    Format::Json => out.json(&json!({"index": i, "claim": c.claim, "reverified": ok}))?,
                    Format::Text => writeln!(
                        out.sink,
                        "{} #{i} {}",
                        if ok { "OK  " } else { "BAD " },
                        c.claim
                    )?,
                }
            }
            match out.format {
                Format::Json => out.json(&json!({"summary": {"certificates": certs.len(), "reverified": good}}))?,
                Format::Text => writeln!(out.sink, "{good} of {} certificates reverified", certs.len())?,
            }
            Ok(good == certs.len())
        }
        Command::Comfort { catalogue, filters, grid } => {
            let b = grid.bounds();
            let cat = match catalogue {
                Some(c) => load_catalogue(c)?,
                None => grid_catalogue(&b)?,
            };
            let fs = match filters {
                Some(f) => parse_json::<Vec<FiniteFilter>>(&load_text(f)?, "filters")?,
                None => all_filters(b.max_index)?,
            };
            let r = comfort_report(&fs, &cat)?;
            out.report(&r, || render::comfort(&r))?;
            Ok(true)
        }
        Command::Thm21 { catalogue, family, product_bound, variant } => {
            let cat = load_catalogue(catalogue)?;
            let fam: FilterFamily = parse_json(&load_text(family)?, "family")?;
            fam.validate()?;
            let bounds = Bounds {
                product_bound: *product_bound,
                ..Bounds::default()
            };
            match variant {
                Variant::Thm21 => {
                    let r = thm21_check(&cat, &fam, &bounds)?;
                    out.report(&r, || render::thm21(&r))?;
                    Ok(r.consistent)
                }
                Variant::Cor22 => {
                    let r = cor22_check(&cat, &fam, &bounds)?;
                    out.report(&r, || render::cor22(&r))?;
                    Ok(r.consistent)
                }
                Variant::Cor23 => {
                    if cat.len() != 1 {
                        return Err(Failure::Input("cor23 takes a single space".into(), None));
                    }
                    let r = cor23_check(&cat.spaces[0], &fam, *product_bound)?;
                    out.report(&r, || render::cor23(&r))?;
                    Ok(r.consistent)
                }
            }
        }
        Command::Cor54 { catalogue, power_bound, grid } => {
            let cat = match catalogue {
                Some(c) => load_catalogue(c)?,
                None => grid_catalogue(&grid.bounds())?,
            };
            let r = cor54_check(&cat, *power_bound)?;
            out.report(&r, || render::cor54(&r))?;
            Ok(r.consistent)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let sink: Box<dyn Write> = match &cli.output {
        Some(p) => match fs::File::create(p) {
            Ok(f) => Box::new(io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("{}", Failure::Io(e).report());
                return ExitCode::from(2);
            }
        },
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    let mut out = Out {
        sink,
        format: cli.format,
    };
    let result = run(&cli, &mut out);
    if let Err(e) = out.sink.flush() {
        eprintln!("{}", Failure::Io(e).report());
        return ExitCode::from(2);
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("{}", f.report());
            ExitCode::from(f.exit())
        }
    }
}
