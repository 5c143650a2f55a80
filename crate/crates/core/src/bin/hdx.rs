use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use hdx::complex::json::{from_json, to_json, ComplexDocument};
use hdx::complex::{self, BuildOptions, ComplexKind, Face, DEFAULT_SIZE_CAP};
use hdx::expansion::{self, VerifyOptions, DEFAULT_TOLERANCE};
use hdx::report::{self, REPORT_FORMAT_VERSION};
use hdx::walks::{self, SpectrumOptions, WalkKind};
use hdx::{gen_graph, load_graph, Complex, GraphKind, WeightedGraph};

/// Seed used whenever `--seed` is not given.
const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "hdx", version, about = "Weighted product complexes, high-order walks and expansion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated graph as an edge list.
    GenGraph(GenGraphArgs),
    /// Build Z or Q and write it as JSON.
    Build(BuildArgs),
    /// Spectrum of a walk operator on one level, as CSV.
    Spectrum(SpectrumArgs),
    /// Link gaps at one level (or the full profile), as JSON.
    LocalSweep(LocalSweepArgs),
    /// TV distance to stationarity of the up-down walk from a point mass, as CSV.
    Mix(MixArgs),
    /// Run the theorem harness; exit 0 iff every non-skipped check passes.
    Verify(VerifyArgs),
    /// Z-vs-Q table of up-down gaps and local expansion per level, as CSV.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GraphType {
    Cycle,
    Complete,
    RandomRegular,
}

impl From<GraphType> for GraphKind {
    fn from(t: GraphType) -> Self {
        match t {
            GraphType::Cycle => GraphKind::Cycle,
            GraphType::Complete => GraphKind::Complete,
            GraphType::RandomRegular => GraphKind::RandomRegular,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum KindArg {
    Z,
    Q,
}

impl From<KindArg> for ComplexKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Z => ComplexKind::Z,
            KindArg::Q => ComplexKind::Q,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum WalkArg {
    Up,
    Down,
    Updown,
    Downup,
}

impl From<WalkArg> for WalkKind {
    fn from(w: WalkArg) -> Self {
        match w {
            WalkArg::Up => WalkKind::Up,
            WalkArg::Down => WalkKind::Down,
            WalkArg::Updown => WalkKind::UpDown,
            WalkArg::Downup => WalkKind::DownUp,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct GenGraphArgs {
    #[arg(long = "type", value_enum)]
    kind: GraphType,
    #[arg(long)]
    n: usize,
    /// Degree, for random-regular.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output path; stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Either `--graph FILE` or a generator spec.
#[derive(Args, Debug, Serialize)]
struct GraphSource {
    #[arg(long, conflicts_with = "gen_type")]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, requires = "gen_n")]
    gen_type: Option<GraphType>,
    #[arg(long)]
    gen_n: Option<usize>,
    #[arg(long)]
    gen_d: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl GraphSource {
    fn load(&self) -> hdx::Result<WeightedGraph> {
        match (&self.graph, self.gen_type, self.gen_n) {
            (Some(path), _, _) => load_graph(path),
            (None, Some(kind), Some(n)) => gen_graph(kind.into(), n, self.gen_d, self.seed),
            _ => Err(hdx::Error::InvalidParameter("give --graph FILE or --gen-type with --gen-n".into())),
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct BuildArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long = "H")]
    h: usize,
    #[arg(long = "s")]
    s: usize,
    #[arg(long, value_enum, default_value = "z")]
    kind: KindArg,
    /// Refuse builds whose predicted top level exceeds this many faces.
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
    size_cap: u128,
    /// Allow Q on weighted graphs (split top faces take w_G, pure take 1).
    #[arg(long)]
    weighted_q: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SpectrumArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    level: isize,
    #[arg(long, value_enum, default_value = "updown")]
    walk: WalkArg,
    /// Refuse eigensolves above this matrix size.
    #[arg(long, default_value_t = hdx::linalg::DEFAULT_EIGEN_CAP)]
    eigen_cap: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct LocalSweepArgs {
    #[arg(long)]
    complex: PathBuf,
    /// Level in 0..=H-2; all levels from -1 if omitted.
    #[arg(long)]
    level: Option<isize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct MixArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    level: isize,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Start face: an index into the level, or `v:b,v:b,...`.
    #[arg(long, default_value = "0")]
    start: String,
    /// Also write a sampled trajectory of face indices to this path.
    #[arg(long)]
    sample_path: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long = "H")]
    h: usize,
    #[arg(long = "s")]
    s: usize,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Report values outside the theorem hypotheses instead of refusing.
    #[arg(long)]
    explore: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct CompareArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long = "H")]
    h: usize,
    #[arg(long = "s")]
    s: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// What every report embeds to make the run reproducible.
#[derive(Serialize)]
struct RunConfig<'a, T: Serialize> {
    subcommand: &'static str,
    args: &'a T,
    version: &'static str,
}

fn run_config<T: Serialize>(subcommand: &'static str, args: &T) -> serde_json::Value {
    serde_json::to_value(RunConfig { subcommand, args, version: env!("CARGO_PKG_VERSION") })
        .expect("config serializes")
}

fn emit(output: Option<&Path>, contents: &str) -> hdx::Result<()> {
    match output {
        Some(path) => report::write_atomic(path, contents.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// CSV outputs carry their config in a `<output>.run.json` sidecar.
fn emit_csv(output: Option<&Path>, contents: &str, config: serde_json::Value) -> hdx::Result<()> {
    if let Some(path) = output {
        let mut sidecar = path.as_os_str().to_owned();
        sidecar.push(".run.json");
        let doc = json!({ "format_version": REPORT_FORMAT_VERSION, "config": config });
        report::write_atomic(Path::new(&sidecar), serde_json::to_string_pretty(&doc)?.as_bytes())?;
    }
    emit(output, contents)
}

fn load_complex(path: &Path) -> hdx::Result<Complex> {
    let doc: ComplexDocument = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    from_json(&doc)
}

fn cmd_gen_graph(args: &GenGraphArgs) -> hdx::Result<()> {
    let g = gen_graph(args.kind.into(), args.n, args.d, args.seed)?;
    emit(args.output.as_deref(), &g.to_edge_list())
}

fn cmd_build(args: &BuildArgs) -> hdx::Result<()> {
    let g = args.source.load()?;
    let options = BuildOptions { size_cap: args.size_cap, weighted_q: args.weighted_q };
    let c = complex::build(args.kind.into(), &g, args.h, args.s, &options)?;
    let text = serde_json::to_string(&to_json(&c))?;
    emit(args.output.as_deref(), &text)
}

fn cmd_spectrum(args: &SpectrumArgs) -> hdx::Result<()> {
    let c = load_complex(&args.complex)?;
    let w = walks::walk(&c, args.level, args.walk.into())?;
    let pi = walks::stationary(&c, args.level)?;
    let options = SpectrumOptions { eigen_cap: args.eigen_cap, ..Default::default() };
    let spectrum = walks::operator_spectrum_with(&w, &pi, &options)?;
    emit_csv(args.output.as_deref(), &report::spectrum_csv(&[spectrum]), run_config("spectrum", args))
}

fn cmd_local_sweep(args: &LocalSweepArgs) -> hdx::Result<()> {
    let c = load_complex(&args.complex)?;
    let result = match args.level {
        Some(k) => serde_json::to_value(expansion::local_sweep(&c, k)?)?,
        None => {
            let profile = expansion::expansion_profile(&c)?;
            json!({
                "levels": profile.levels,
                "class_gaps": expansion::class_gap_summary(&profile),
                "global": expansion::global_expansion(&c)?,
            })
        }
    };
    let doc = json!({
        "format_version": REPORT_FORMAT_VERSION,
        "config": run_config("local-sweep", args),
        "result": result,
    });
    emit(args.output.as_deref(), &serde_json::to_string_pretty(&doc)?)
}

fn cmd_mix(args: &MixArgs) -> hdx::Result<()> {
    let c = load_complex(&args.complex)?;
    let level = c.level(args.level)?;
    let start: Face = match args.start.parse::<usize>() {
        Ok(i) => level
            .faces()
            .get(i)
            .cloned()
            .ok_or(hdx::Error::DimensionMismatch { expected: level.len(), got: i })?,
        Err(_) => args.start.parse()?,
    };
    let trace = walks::mixing_trace(&c, args.level, &start, args.steps)?;
    if let Some(path) = &args.sample_path {
        let w = walks::updown(&c, args.level)?;
        let at = level.index_of(&start).expect("start is in the level");
        let path_indices = walks::sample_path(&w, at, args.steps, args.seed)?;
        let mut out = String::from("step,face_index\n");
        for (step, i) in path_indices.iter().enumerate() {
            out.push_str(&format!("{step},{i}\n"));
        }
        report::write_atomic(path, out.as_bytes())?;
    }
    emit_csv(args.output.as_deref(), &report::tv_csv(&trace), run_config("mix", args))
}

fn cmd_verify(args: &VerifyArgs) -> hdx::Result<bool> {
    let g = args.source.load()?;
    let options = VerifyOptions { tolerance: args.tol, explore: args.explore };
    let mut rep = expansion::verify_theorems(&g, args.h, args.s, &options)?;
    rep.config = run_config("verify", args);
    for failure in rep.failures() {
        eprintln!("FAIL {}: expected {} computed {}", failure.check_id, failure.expected, failure.computed);
    }
    emit(args.output.as_deref(), &serde_json::to_string_pretty(&rep)?)?;
    Ok(rep.pass)
}

fn cmd_compare(args: &CompareArgs) -> hdx::Result<()> {
    let g = args.source.load()?;
    let (z, q) = (complex::build_z(&g, args.h, args.s)?, complex::build_q(&g, args.h, args.s)?);
    let ((z_profile, z_gaps), (q_profile, q_gaps)) = rayon::join(|| compare_side(&z), || compare_side(&q));
    let (z_profile, z_gaps, q_profile, q_gaps) = (z_profile?, z_gaps?, q_profile?, q_gaps?);
    let mut out = String::from("k,updown_gap_z,updown_gap_q,local_z,local_q\n");
    let cell = |x: Option<f64>| x.map(report::format_float).unwrap_or_default();
    for k in -1..args.h as isize {
        let gap = |gaps: &[f64]| if k >= 0 { gaps.get(k as usize).copied() } else { None };
        out.push_str(&format!(
            "{k},{},{},{},{}\n",
            cell(gap(&z_gaps)),
            cell(gap(&q_gaps)),
            cell(z_profile.nu(k)),
            cell(q_profile.nu(k))
        ));
    }
    emit_csv(args.output.as_deref(), &out, run_config("compare", args))
}

fn compare_side(c: &Complex) -> (hdx::Result<expansion::ExpansionProfile>, hdx::Result<Vec<f64>>) {
    rayon::join(
        || expansion::expansion_profile(c),
        || {
            use rayon::prelude::*;
            (0..c.dim() as isize)
                .into_par_iter()
                .map(|k| {
                    let spectrum = walks::operator_spectrum(&walks::updown(c, k)?, &walks::stationary(c, k)?)?;
                    Ok(spectrum.gap)
                })
                .collect()
        },
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::GenGraph(a) => cmd_gen_graph(a).map(|_| true),
        Command::Build(a) => cmd_build(a).map(|_| true),
        Command::Spectrum(a) => cmd_spectrum(a).map(|_| true),
        Command::LocalSweep(a) => cmd_local_sweep(a).map(|_| true),
        Command::Mix(a) => cmd_mix(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Compare(a) => cmd_compare(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
