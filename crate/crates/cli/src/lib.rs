//! `fpqual` command-line front end: per-image scoring, block-map export,
//! corpus comparison, score-level evaluation and fixture synthesis.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fpqual_core::evaluation::{
    metric_correlation_matrix, rejection_sweep, subject_separations, OperatingRates, QualityKey, ScoreSet,
};
use fpqual_core::imagecore::{load_image, GrayImage};
use fpqual_core::synth::{
    degrade, generate_grating, generate_score_set, generate_whorl, DegradationSpec, SyntheticScoreSpec,
    RNG_ALGORITHM,
};
use fpqual_core::{Analysis, Metric, QualityReport, ToolConfig};
use rayon::prelude::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

const DEFAULT_FRACTIONS: &str = "0,0.05,0.1,0.15,0.2,0.25,0.3";

#[derive(Parser, Debug)]
#[command(name = "fpqual", version, about = "Fingerprint image-quality assessment")]
struct Cli {
    /// Flat key = value configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Image resolution in dots per inch.
    #[arg(long, global = true)]
    dpi: Option<u32>,
    /// Block side in pixels, or `auto` to derive it from the resolution.
    #[arg(long, global = true, value_name = "PX|auto")]
    block_size: Option<String>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    dump_config: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Global quality scores, one CSV record per image.
    Score(ScoreArgs),
    /// Per-block quality maps of one image.
    Map(MapArgs),
    /// Pearson correlation matrix of the metrics over a corpus.
    Compare(CompareArgs),
    /// Error rates as the lowest-quality comparisons are rejected.
    Evaluate(EvaluateArgs),
    /// Write synthetic fixtures.
    #[command(subcommand)]
    Synth(SynthCommand),
}

#[derive(Args, Debug)]
struct ScoreArgs {
    /// Image files or directories of .pgm/.png images.
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    /// Comma-separated metric names.
    #[arg(long)]
    metrics: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory receiving `<image>.spectrum.csv` ring energies.
    #[arg(long, value_name = "DIR")]
    dump_spectrum: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MapArgs {
    image: PathBuf,
    /// Comma-separated block-level metric names.
    #[arg(long)]
    metrics: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory receiving `<image>_<metric>.pgm` heatmaps, one pixel per block.
    #[arg(long, value_name = "DIR")]
    heatmap: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Image files or directories of .pgm/.png images.
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    #[arg(long)]
    metrics: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Score CSV: kind,score,q_enrol,q_test[,subject][,metric columns].
    scores: PathBuf,
    /// `pair` for sqrt(q_enrol·q_test), or the name of a metric column.
    #[arg(long, default_value = "pair")]
    quality: String,
    /// Ascending rejection fractions in [0, 1).
    #[arg(long, default_value = DEFAULT_FRACTIONS)]
    fractions: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where the per-subject separation CSV goes; appended to the main output otherwise.
    #[arg(long, value_name = "FILE")]
    separation_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum SynthCommand {
    /// Planar sinusoidal grating.
    Grating {
        #[arg(long, default_value_t = 400)]
        width: usize,
        #[arg(long, default_value_t = 560)]
        height: usize,
        /// Ridge direction in degrees.
        #[arg(long, default_value_t = 0.0)]
        angle: f64,
        #[arg(long, default_value_t = 10.0)]
        period: f64,
        #[arg(long, default_value_t = 1.0)]
        contrast: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Concentric rings around the image center.
    Whorl {
        #[arg(long, default_value_t = 400)]
        width: usize,
        #[arg(long, default_value_t = 560)]
        height: usize,
        #[arg(long, default_value_t = 10.0)]
        period: f64,
        #[arg(long, default_value_t = 1.0)]
        contrast: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Degraded copy of an image.
    Degrade {
        input: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        blur: usize,
        #[arg(long, default_value_t = 1.0)]
        contrast: f64,
        #[arg(long, default_value_t = 0.0)]
        occlusion: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Genuine and impostor scores whose genuine mean follows quality.
    Scores {
        #[arg(long, default_value_t = 10_000)]
        genuine: usize,
        #[arg(long, default_value_t = 10_000)]
        impostor: usize,
        #[arg(long, default_value_t = 3.0)]
        genuine_mean: f64,
        #[arg(long, default_value_t = 1.0)]
        genuine_sd: f64,
        #[arg(long, default_value_t = 0.0)]
        impostor_mean: f64,
        #[arg(long, default_value_t = 1.0)]
        impostor_sd: f64,
        /// Slope of the genuine mean against paired quality.
        #[arg(long, default_value_t = 4.0)]
        coupling: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Why a command stopped.
enum Failure {
    /// Bad flags or configuration; nothing was processed.
    Config(String),
    /// Processing failed.
    Runtime(String),
}

impl Failure {
    fn config(e: impl std::fmt::Display) -> Self {
        Failure::Config(e.to_string())
    }

    fn runtime(e: impl std::fmt::Display) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the tool with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let config = effective_config(&cli)?;
    if cli.dump_config {
        stdout.write_all(config.dump().as_bytes()).map_err(Failure::runtime)?;
        return Ok(EXIT_OK);
    }
    match cli.command {
        None => Err(Failure::Config("no subcommand given (see --help)".into())),
        Some(Command::Score(args)) => cmd_score(&config, args, stdout, stderr),
        Some(Command::Map(args)) => cmd_map(&config, args, stdout, stderr),
        Some(Command::Compare(args)) => cmd_compare(&config, args, stdout, stderr),
        Some(Command::Evaluate(args)) => cmd_evaluate(&config, args, stdout),
        Some(Command::Synth(cmd)) => cmd_synth(&config, cmd, stdout),
    }
}

/// Configuration file, then flag overrides, validated before any input is read.
fn effective_config(cli: &Cli) -> Result<ToolConfig, Failure> {
    let mut config = match &cli.config {
        Some(path) => ToolConfig::load(path).map_err(Failure::config)?,
        None => ToolConfig::default(),
    };
    if let Some(dpi) = cli.dpi {
        config.dpi = dpi;
    }
    if let Some(bs) = &cli.block_size {
        config.set("block_size", bs).map_err(Failure::config)?;
    }
    config.validate().map_err(Failure::config)?;
    Ok(config)
}

/// Collects the bytes of one output stream, written to `--out` or stdout at the end.
fn emit(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(bytes).map_err(Failure::runtime),
    }
}

fn is_image_file(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm") || e.eq_ignore_ascii_case("png"))
}

/// Files named on the command line, plus the .pgm/.png entries of named
/// directories in name order.
fn expand_inputs(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| Failure::runtime(format!("cannot list {}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|e| e.is_file() && is_image_file(e))
                .collect();
            entries.sort();
            out.extend(entries);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(Failure::runtime("no input images"));
    }
    Ok(out)
}

fn parse_metrics(list: Option<&str>, default: &[Metric]) -> Result<Vec<Metric>, Failure> {
    match list {
        Some(list) => Metric::parse_list(list).map_err(Failure::config),
        None => Ok(default.to_vec()),
    }
}

fn load(path: &Path, config: &ToolConfig) -> fpqual_core::Result<GrayImage> {
    load_image(path, Some(config.dpi))
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "image".into(), |s| s.to_string_lossy().into_owned())
}

/// Scores every image in parallel; results come back in input order.
fn score_all(
    config: &ToolConfig,
    paths: &[PathBuf],
    metrics: &[Metric],
    spectrum_dir: Option<&Path>,
) -> Vec<Result<QualityReport, String>> {
    paths
        .par_iter()
        .map(|path| {
            let img = load(path, config).map_err(|e| e.to_string())?;
            let analysis = Analysis::new(&img, config).map_err(|e| e.to_string())?;
            let scores = metrics
                .iter()
                .map(|&m| analysis.score(m).map(|s| (m, s)))
                .collect::<fpqual_core::Result<Vec<_>>>()
                .map_err(|e| e.to_string())?;
            if let Some(dir) = spectrum_dir {
                let bands = analysis.spectral_bands().map_err(|e| e.to_string())?;
                let target = dir.join(format!("{}.spectrum.csv", file_stem(path)));
                let mut buf = Vec::new();
                bands.write_csv(&mut buf).map_err(|e| e.to_string())?;
                fs::write(&target, buf).map_err(|e| format!("cannot write {}: {e}", target.display()))?;
            }
            Ok(QualityReport {
                image: path.display().to_string(),
                scores,
            })
        })
        .collect()
}

/// Writes failures and warnings to stderr; returns the successful reports.
fn report_problems(results: Vec<Result<QualityReport, String>>, paths: &[PathBuf], stderr: &mut dyn Write) -> (Vec<QualityReport>, usize) {
    let mut ok = Vec::new();
    let mut failed = 0;
    for (path, r) in paths.iter().zip(results) {
        match r {
            Ok(report) => {
                for w in report.warnings() {
                    let _ = writeln!(stderr, "warning: {}: {w}", report.image);
                }
                ok.push(report);
            }
            Err(e) => {
                failed += 1;
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
            }
        }
    }
    (ok, failed)
}

fn cmd_score(config: &ToolConfig, args: ScoreArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let metrics = parse_metrics(args.metrics.as_deref(), &Metric::ALL)?;
    if let Some(dir) = &args.dump_spectrum {
        fs::create_dir_all(dir).map_err(|e| Failure::runtime(format!("cannot create {}: {e}", dir.display())))?;
    }
    let paths = expand_inputs(&args.paths)?;
    let results = score_all(config, &paths, &metrics, args.dump_spectrum.as_deref());
    let (reports, failed) = report_problems(results, &paths, stderr);

    let mut buf = Vec::new();
    let names: Vec<&str> = metrics.iter().map(|m| m.name()).collect();
    let _ = writeln!(buf, "# fpqual score {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(buf, "# images: {} scored, {} failed", reports.len(), failed);
    let _ = writeln!(buf, "image,{}", names.join(","));
    for r in &reports {
        let cells: Vec<String> = r.scores.iter().map(|(_, s)| format!("{:.6}", s.value)).collect();
        let _ = writeln!(buf, "{},{}", csv_field(&r.image), cells.join(","));
    }
    emit(args.out.as_deref(), &buf, stdout)?;
    Ok(if failed > 0 { EXIT_FAILURE } else { EXIT_OK })
}

/// Quotes a CSV field when it holds a separator, quote or line break.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_map(config: &ToolConfig, args: MapArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let local: Vec<Metric> = Metric::ALL.into_iter().filter(|m| m.is_local()).collect();
    let metrics = parse_metrics(args.metrics.as_deref(), &local)?;
    if let Some(m) = metrics.iter().find(|m| !m.is_local()) {
        return Err(Failure::Config(format!("metric '{m}' has no block map")));
    }
    let img = load(&args.image, config).map_err(|e| Failure::runtime(format!("{}: {e}", args.image.display())))?;
    let analysis = Analysis::new(&img, config).map_err(|e| Failure::runtime(format!("{}: {e}", args.image.display())))?;
    if let Some(dir) = &args.heatmap {
        fs::create_dir_all(dir).map_err(|e| Failure::runtime(format!("cannot create {}: {e}", dir.display())))?;
    }
    let grid = analysis.field().grid();
    let mut buf = Vec::new();
    let _ = writeln!(buf, "# fpqual map {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(buf, "# image: {}", args.image.display());
    let _ = writeln!(buf, "# blocks: {} cols x {} rows of {} px", grid.cols(), grid.rows(), grid.block_size());
    for m in metrics {
        let (map, score) = analysis.local(m).map_err(Failure::runtime)?;
        if let Some(w) = &score.warning {
            let _ = writeln!(stderr, "warning: {}: {m}: {w}", args.image.display());
        }
        let _ = writeln!(buf, "# metric: {m}");
        let _ = writeln!(buf, "# global: {:.6}", score.value);
        map.write_csv(&mut buf).map_err(Failure::runtime)?;
        if let Some(dir) = &args.heatmap {
            let target = dir.join(format!("{}_{m}.pgm", file_stem(&args.image)));
            map.heatmap().save_pgm(&target).map_err(Failure::runtime)?;
        }
    }
    emit(args.out.as_deref(), &buf, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_compare(config: &ToolConfig, args: CompareArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let metrics = parse_metrics(args.metrics.as_deref(), &Metric::ALL)?;
    if metrics.len() < 2 {
        return Err(Failure::Config("compare needs at least two metrics".into()));
    }
    let paths = expand_inputs(&args.paths)?;
    let (reports, failed) = report_problems(score_all(config, &paths, &metrics, None), &paths, stderr);
    if reports.len() < 2 {
        return Err(Failure::Runtime(format!("{} usable images; compare needs at least two", reports.len())));
    }
    let names: Vec<String> = metrics.iter().map(|m| m.to_string()).collect();
    let table: Vec<Vec<f64>> = reports
        .iter()
        .map(|r| r.scores.iter().map(|(_, s)| s.value).collect())
        .collect();
    let matrix = metric_correlation_matrix(&names, &table).map_err(Failure::runtime)?;

    let mut buf = Vec::new();
    let _ = writeln!(buf, "# fpqual compare {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(buf, "# images: {} scored, {} failed", reports.len(), failed);
    let _ = writeln!(buf, "metric,{}", names.join(","));
    for (name, row) in names.iter().zip(&matrix.values) {
        let cells: Vec<String> = row.iter().map(|v| v.map_or_else(|| "NA".into(), |v| format!("{v:.6}"))).collect();
        let _ = writeln!(buf, "{name},{}", cells.join(","));
    }
    for (name, row) in names.iter().zip(&matrix.values) {
        if row.iter().all(Option::is_none) {
            let _ = writeln!(stderr, "warning: {name} is constant over the corpus; its correlations are undefined");
        }
    }
    emit(args.out.as_deref(), &buf, stdout)?;
    Ok(if failed > 0 { EXIT_FAILURE } else { EXIT_OK })
}

fn parse_fractions(list: &str) -> Result<Vec<f64>, Failure> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| Failure::Config(format!("invalid rejection fraction '{s}'"))))
        .collect()
}

fn cmd_evaluate(config: &ToolConfig, args: EvaluateArgs, stdout: &mut dyn Write) -> Outcome {
    let fractions = parse_fractions(&args.fractions)?;
    let file = fs::File::open(&args.scores)
        .map_err(|e| Failure::runtime(format!("cannot read {}: {e}", args.scores.display())))?;
    let set = ScoreSet::read_csv(file, args.scores.display().to_string())
        .map_err(|e| Failure::runtime(format!("{}: {e}", args.scores.display())))?;
    let key = QualityKey::parse(&args.quality);
    let rates = OperatingRates {
        frr: config.operating_frr,
        far: config.operating_far,
    };
    let curve = rejection_sweep(&set, &key, &fractions, rates).map_err(|e| match e {
        fpqual_core::Error::InvalidParameter(_) => Failure::config(e),
        other => Failure::runtime(other),
    })?;

    let count = |kind| set.records().iter().filter(|r| r.kind == kind).count();
    let mut buf = Vec::new();
    let _ = writeln!(buf, "# fpqual evaluate {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(buf, "# scores: {}", set.source());
    let _ = writeln!(
        buf,
        "# genuine: {}, impostor: {}",
        count(fpqual_core::evaluation::ScoreKind::Genuine),
        count(fpqual_core::evaluation::ScoreKind::Impostor)
    );
    let _ = writeln!(buf, "# quality: {}", args.quality);
    let _ = writeln!(buf, "# far_at_frr: FAR at FRR = {}; frr_at_far: FRR at FAR = {}", rates.frr, rates.far);
    curve.write_csv(&mut buf).map_err(Failure::runtime)?;
    if let (Some(first), Some(last)) = (curve.points.first(), curve.points.last()) {
        let cell = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"));
        let _ = writeln!(
            buf,
            "# summary: EER {} at fraction {} -> {} at fraction {}; FRR at FAR {} -> {}",
            cell(first.eer),
            first.fraction,
            cell(last.eer),
            last.fraction,
            cell(first.frr_at_far),
            cell(last.frr_at_far)
        );
    }

    if set.has_subjects() {
        let mut sep = Vec::new();
        let _ = writeln!(sep, "subject,genuine_score,separation");
        for s in subject_separations(&set) {
            let value = s.separation.as_ref().map_or_else(|_| "NA".to_string(), |v| format!("{v:.6}"));
            let _ = writeln!(sep, "{},{},{}", csv_field(&s.subject), s.genuine_score, value);
        }
        match &args.separation_out {
            Some(path) => fs::write(path, &sep)
                .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))?,
            None => {
                let _ = writeln!(buf, "# subject separation");
                buf.extend_from_slice(&sep);
            }
        }
    }
    emit(args.out.as_deref(), &buf, stdout)?;
    Ok(EXIT_OK)
}

/// Writes `key = value` lines to `<path>.meta`.
fn write_meta(path: &Path, lines: &[(&str, String)]) -> Result<(), Failure> {
    let mut meta = path.as_os_str().to_owned();
    meta.push(".meta");
    let text: String = lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    fs::write(&meta, text).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", Path::new(&meta).display())))
}

fn save_image(img: &GrayImage, path: &Path) -> Result<(), Failure> {
    img.save_pgm(path).map_err(Failure::runtime)
}

fn cmd_synth(config: &ToolConfig, cmd: SynthCommand, stdout: &mut dyn Write) -> Outcome {
    let version = env!("CARGO_PKG_VERSION").to_string();
    match cmd {
        SynthCommand::Grating { width, height, angle, period, contrast, out } => {
            let img = generate_grating(width, height, angle.to_radians(), period, contrast)
                .map_err(Failure::config)?
                .with_dpi(config.dpi)
                .map_err(Failure::config)?;
            save_image(&img, &out)?;
            write_meta(
                &out,
                &[
                    ("generator", "grating".into()),
                    ("fpqual", version),
                    ("width", width.to_string()),
                    ("height", height.to_string()),
                    ("angle_degrees", angle.to_string()),
                    ("period", period.to_string()),
                    ("contrast", contrast.to_string()),
                    ("dpi", config.dpi.to_string()),
                ],
            )?;
        }
        SynthCommand::Whorl { width, height, period, contrast, out } => {
            let (img, _) = generate_whorl(width, height, period, contrast).map_err(Failure::config)?;
            let img = img.with_dpi(config.dpi).map_err(Failure::config)?;
            save_image(&img, &out)?;
            write_meta(
                &out,
                &[
                    ("generator", "whorl".into()),
                    ("fpqual", version),
                    ("width", width.to_string()),
                    ("height", height.to_string()),
                    ("period", period.to_string()),
                    ("contrast", contrast.to_string()),
                    ("dpi", config.dpi.to_string()),
                ],
            )?;
        }
        SynthCommand::Degrade { input, noise, blur, contrast, occlusion, seed, out } => {
            let spec = DegradationSpec {
                noise_sigma: noise,
                blur_radius: blur,
                contrast_scale: contrast,
                occlusion_fraction: occlusion,
            };
            spec.validate().map_err(Failure::config)?;
            let img = load(&input, config).map_err(|e| Failure::runtime(format!("{}: {e}", input.display())))?;
            save_image(&degrade(&img, &spec, seed).map_err(Failure::runtime)?, &out)?;
            write_meta(
                &out,
                &[
                    ("generator", "degrade".into()),
                    ("fpqual", version),
                    ("input", input.display().to_string()),
                    ("noise_sigma", noise.to_string()),
                    ("blur_radius", blur.to_string()),
                    ("contrast_scale", contrast.to_string()),
                    ("occlusion_fraction", occlusion.to_string()),
                    ("seed", seed.to_string()),
                    ("rng", RNG_ALGORITHM.into()),
                ],
            )?;
        }
        SynthCommand::Scores {
            genuine,
            impostor,
            genuine_mean,
            genuine_sd,
            impostor_mean,
            impostor_sd,
            coupling,
            seed,
            out,
        } => {
            let spec = SyntheticScoreSpec {
                n_genuine: genuine,
                n_impostor: impostor,
                genuine_mean,
                genuine_sd,
                impostor_mean,
                impostor_sd,
                coupling,
                seed,
            };
            let set = generate_score_set(&spec).map_err(Failure::config)?;
            let mut buf = Vec::new();
            set.write_csv(&mut buf).map_err(Failure::runtime)?;
            fs::write(&out, buf).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", out.display())))?;
            write_meta(
                &out,
                &[
                    ("generator", "scores".into()),
                    ("fpqual", version),
                    ("n_genuine", genuine.to_string()),
                    ("n_impostor", impostor.to_string()),
                    ("genuine_mean", genuine_mean.to_string()),
                    ("genuine_sd", genuine_sd.to_string()),
                    ("impostor_mean", impostor_mean.to_string()),
                    ("impostor_sd", impostor_sd.to_string()),
                    ("coupling", coupling.to_string()),
                    ("seed", seed.to_string()),
                    ("rng", RNG_ALGORITHM.into()),
                ],
            )?;
        }
    }
    let _ = stdout.flush();
    Ok(EXIT_OK)
}
