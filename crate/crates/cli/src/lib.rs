//! The `quasitour` command line.
//!
//! [`run`] takes the argument list and two writers and returns the process
//! exit code, so the whole interface can be driven in-process by tests.
//!
//! Exit codes: 0 success, 1 a failed identity or a negative `certify-qr`
//! verdict, 2 usage or parse errors, 3 I/O errors, 4 exact-mode size bound
//! exceeded.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use quasitour::flagcalc::{run_identities, IdentityCase, IdentityReport};
use quasitour::format::{parse_trn, report_json, search_json, write_trn, TrnFile};
use quasitour::generators;
use quasitour::qrlab::{minimize_density, qr_report, CensusMode, QrReport, Thresholds, Verdict};
use quasitour::{Error, Tournament};
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_BOUNDS: i32 = 4;

/// Prefix of the comment line that records how a file was generated.
pub const SOURCE_TAG: &str = " source: ";

#[derive(Parser, Debug)]
#[command(name = "quasitour", version, about = "Tournament census, flag identities and quasi-randomness checks")]
pub struct Cli {
    /// Worker threads; 0 picks the number of CPUs. Never changes the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a tournament file.
    Gen {
        #[command(subcommand)]
        model: Model,
    },
    /// Print the quasi-randomness report of a tournament file as JSON.
    Analyze(AnalyzeArgs),
    /// Verify the builtin flag identities.
    Identities,
    /// Search for tournaments with few transitive k-subsets.
    Minimize(MinimizeArgs),
    /// Print only the verdict; exit 0 if quasi-random-like, 1 otherwise.
    CertifyQr(AnalyzeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the tournament here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record the generator in a `# source:` header line.
    #[arg(long)]
    pub comment: bool,
}

#[derive(Subcommand, Debug)]
pub enum Model {
    /// Uniformly random orientation of every pair.
    Random {
        n: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Vertex i beats j iff i < j.
    Transitive {
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Quadratic residue tournament; q prime, q = 3 mod 4.
    Paley {
        q: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Circulant tournament of odd order.
    Rotational {
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Replace each vertex of the input by m transitively ordered copies.
    Blowup {
        m: usize,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Reverse the listed arcs of the input, in order: `flip u1 v1 u2 v2 ...`.
    Flip {
        #[arg(required = true, num_args = 2..)]
        vertices: Vec<usize>,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Args, Debug, Clone)]
pub struct AnalyzeArgs {
    /// Tournament file, or `-` for standard input.
    pub file: PathBuf,
    /// Largest sub-tournament size to census.
    #[arg(long, default_value_t = 4)]
    pub s_max: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Samples per size in sampled mode.
    #[arg(long, default_value_t = 200_000)]
    pub samples: u64,
    /// Required in sampled mode.
    #[arg(long, required_if_eq("mode", "sampled"))]
    pub seed: Option<u64>,
    /// Override the flag deviation threshold.
    #[arg(long)]
    pub deviation_threshold: Option<f64>,
    /// Override the P2 threshold.
    #[arg(long)]
    pub p2_threshold: Option<f64>,
    /// Override the P1 threshold.
    #[arg(long)]
    pub p1_threshold: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct MinimizeArgs {
    pub k: usize,
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    /// Move evaluations per restart.
    #[arg(long, default_value_t = 10_000)]
    pub steps: u64,
    /// Also write the best tournament found.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "quasitour: {e}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(cli.command, out, err));
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "quasitour: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CmdResult {
    match command {
        Command::Gen { model } => cmd_gen(model, out, err),
        Command::Analyze(args) => cmd_analyze(&args, out),
        Command::Identities => {
            let cases = quasitour::flagcalc::identity_catalog().map_err(Failure::usage)?;
            identities_with(&cases, out, err)
        }
        Command::Minimize(args) => cmd_minimize(&args, out),
        Command::CertifyQr(args) => cmd_certify(&args, out),
    }
}

fn stdout_error(e: io::Error) -> Failure {
    Failure { code: EXIT_IO, message: format!("standard output: {e}") }
}

fn read_input(path: &Path) -> Result<TrnFile, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::io(path, e))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::io(path, e))?
    };
    parse_trn(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Generator name and parameters, e.g. `random n=200 seed=7`.
fn descriptor(model: &Model) -> String {
    match model {
        Model::Random { n, seed, .. } => format!("random n={n} seed={seed}"),
        Model::Transitive { n, .. } => format!("transitive n={n}"),
        Model::Paley { q, .. } => format!("paley q={q}"),
        Model::Rotational { n, .. } => format!("rotational n={n}"),
        Model::Blowup { m, .. } => format!("blowup m={m}"),
        Model::Flip { vertices, .. } => {
            let pairs: Vec<String> = vertices.chunks(2).map(|p| format!("{}:{}", p[0], p[1])).collect();
            format!("flip pairs={}", pairs.join(","))
        }
    }
}

fn cmd_gen(model: Model, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CmdResult {
    let desc = descriptor(&model);
    let (tournament, mut comments, output) = match model {
        Model::Random { n, seed, output } => (generators::random_tournament(n, seed), vec![], output),
        Model::Transitive { n, output } => (generators::transitive(n), vec![], output),
        Model::Paley { q, output } => (generators::paley(q).map_err(Failure::usage)?, vec![], output),
        Model::Rotational { n, output } => (generators::rotational(n).map_err(Failure::usage)?, vec![], output),
        Model::Blowup { m, input, output } => {
            let base = read_input(&input)?;
            (generators::blowup(&base.tournament, m).map_err(Failure::usage)?, base.comments, output)
        }
        Model::Flip { vertices, input, output } => {
            if vertices.len() % 2 != 0 {
                return Err(Failure::usage("flip needs an even number of vertices"));
            }
            let base = read_input(&input)?;
            let pairs: Vec<(usize, usize)> = vertices.chunks(2).map(|p| (p[0], p[1])).collect();
            let t = generators::flip_arcs(&base.tournament, &pairs).map_err(Failure::usage)?;
            (t, base.comments, output)
        }
    };
    if !output.comment {
        comments.clear();
    } else {
        comments.push(format!("{SOURCE_TAG}{desc}"));
    }
    let n = tournament.n();
    let text = write_trn(&TrnFile { comments, tournament });
    let summary = format!("n={n} source=\"{desc}\"");
    match &output.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::io(path, e))?;
            writeln!(out, "{summary}").map_err(stdout_error)?;
        }
        None => {
            out.write_all(text.as_bytes()).map_err(stdout_error)?;
            let _ = writeln!(err, "{summary}");
        }
    }
    Ok(EXIT_OK)
}

fn param_value(v: &str) -> Value {
    v.parse::<u64>().map_or_else(|_| Value::String(v.to_string()), Value::from)
}

/// Source description for the report: the path and, when the file carries
/// `# source:` lines, the last generator with its parameters.
pub fn source_json(path: &Path, comments: &[String]) -> Value {
    let sources: Vec<&str> = comments.iter().filter_map(|c| c.strip_prefix(SOURCE_TAG)).collect();
    let mut obj = Map::new();
    obj.insert("path".into(), Value::String(path.display().to_string()));
    let (generator, params, seed) = match sources.last() {
        Some(last) => {
            let mut words = last.split_whitespace();
            let generator = words.next().map(|g| Value::String(g.to_string())).unwrap_or(Value::Null);
            let mut params = Map::new();
            let mut seed = Value::Null;
            for w in words {
                if let Some((key, value)) = w.split_once('=') {
                    if key == "seed" {
                        seed = param_value(value);
                    } else {
                        params.insert(key.to_string(), param_value(value));
                    }
                }
            }
            (generator, Value::Object(params), seed)
        }
        None => (Value::Null, Value::Object(Map::new()), Value::Null),
    };
    obj.insert("generator".into(), generator);
    obj.insert("params".into(), params);
    obj.insert("seed".into(), seed);
    let history: Vec<Value> = sources
        .iter()
        .take(sources.len().saturating_sub(1))
        .map(|s| Value::String(s.to_string()))
        .collect();
    obj.insert("derived_from".into(), Value::Array(history));
    Value::Object(obj)
}

fn analyze_report(args: &AnalyzeArgs) -> Result<(QrReport, Value), Failure> {
    let file = read_input(&args.file)?;
    let t: &Tournament = &file.tournament;
    let mode = match args.mode {
        Mode::Exact => CensusMode::Exact,
        Mode::Sampled => {
            let seed = args.seed.ok_or_else(|| Failure::usage("sampled mode needs --seed"))?;
            if args.samples == 0 {
                return Err(Failure::usage("--samples must be positive"));
            }
            CensusMode::Sampled { samples: args.samples, seed }
        }
    };
    let mut th = Thresholds::default_for(t.n());
    for (slot, value) in [
        (&mut th.deviation, args.deviation_threshold),
        (&mut th.p2, args.p2_threshold),
        (&mut th.p1_maxdev, args.p1_threshold),
    ] {
        if let Some(v) = value {
            if !v.is_finite() || v < 0.0 {
                return Err(Failure::usage(format!("threshold {v} must be a nonnegative number")));
            }
            *slot = v;
        }
    }
    let report = qr_report(t, args.s_max, mode, th).map_err(|e| {
        let code = match (&e, args.mode) {
            (Error::ExactBound { .. }, _) | (Error::TooLarge { .. }, Mode::Exact) => EXIT_BOUNDS,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    })?;
    Ok((report, source_json(&args.file, &file.comments)))
}

fn write_json(out: &mut (dyn Write + Send), value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    writeln!(out, "{text}").map_err(stdout_error)
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut (dyn Write + Send)) -> CmdResult {
    let (report, source) = analyze_report(args)?;
    write_json(out, &report_json(&report, source))?;
    Ok(EXIT_OK)
}

fn cmd_certify(args: &AnalyzeArgs, out: &mut (dyn Write + Send)) -> CmdResult {
    let (report, _) = analyze_report(args)?;
    writeln!(out, "{}", report.verdict.as_str()).map_err(stdout_error)?;
    Ok(match report.verdict {
        Verdict::QuasiRandomLike => EXIT_OK,
        Verdict::NotQuasiRandomLike => EXIT_FAILED,
    })
}

fn identity_line(r: &IdentityReport) -> String {
    let verdict = if r.equal { "OK" } else { "FAIL" };
    format!("{verdict:<4}  size {}  {}", r.size, r.name)
}

/// Verifies `cases`, printing one line per identity. Returns 0 iff all hold.
pub fn identities_with(cases: &[IdentityCase], out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CmdResult {
    let reports = run_identities(cases).map_err(Failure::usage)?;
    for r in &reports {
        writeln!(out, "{}", identity_line(r)).map_err(stdout_error)?;
    }
    let failed = reports.iter().filter(|r| !r.equal).count();
    for r in reports.iter().filter(|r| !r.equal) {
        let terms: Vec<String> = r.discrepancy.iter().map(|(c, q)| format!("{q}*{c}")).collect();
        let _ = writeln!(err, "{}: lhs - rhs = {}", r.name, terms.join(" + "));
    }
    let _ = writeln!(err, "{} of {} identities hold", reports.len() - failed, reports.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_minimize(args: &MinimizeArgs, out: &mut (dyn Write + Send)) -> CmdResult {
    let result = minimize_density(args.k, args.n, args.seed, args.restarts, args.steps).map_err(Failure::usage)?;
    if let Some(path) = &args.out {
        let file = TrnFile {
            comments: vec![format!(
                "{SOURCE_TAG}minimize k={} n={} restarts={} steps={} seed={}",
                args.k, args.n, args.restarts, args.steps, args.seed
            )],
            tournament: result.best.clone(),
        };
        fs::write(path, write_trn(&file)).map_err(|e| Failure::io(path, e))?;
    }
    let mut value = search_json(&result);
    value["out"] = args.out.as_ref().map_or(Value::Null, |p| json!(p.display().to_string()));
    write_json(out, &value)?;
    Ok(EXIT_OK)
}
