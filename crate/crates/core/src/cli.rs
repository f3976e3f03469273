//! Command-line front end: `detect`, `compare`, `synth` and `eval`.
//!
//! Exit codes: 0 success, 1 bad arguments, 2 I/O failure or malformed input
//! file, 3 configuration that violates a module precondition. Every run
//! echoes its fully resolved configuration as one JSON line on stderr;
//! `--print-config` prints it to stdout instead and exits without running.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::baselines::{canny_edges, sobel_edges_rms, CannyConfig, DEFAULT_RMS_SCALE};
use crate::dwt::{dump_pyramid, dwt2_multilevel, Wavelet};
use crate::energy::EnergyMode;
use crate::error::{Error, Result};
use crate::eval::{
    generate, score, EvalReport, Orientation, PatternKind, ScoreRecord, SyntheticSpec,
    DEFAULT_ALPHA, DEFAULT_TOLERANCE_PX,
};
use crate::fis::{Aggregation, FuzzyRuleBase};
use crate::imgio::{load_image, save_image, GrayImage};
use crate::pipeline::{detect_edges, BandScaling, PipelineConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fuzzy-edge",
    version,
    about = "Wavelet energy + fuzzy inference edge detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect edges in one image.
    Detect(DetectArgs),
    /// Run the proposed detector and the Sobel and Canny baselines side by side.
    Compare(CompareArgs),
    /// Generate a synthetic image and its edge truth.
    Synth(SynthArgs),
    /// Score a binary edge map against a truth map.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct PipelineArgs {
    #[arg(long, default_value = "db2")]
    wavelet: Wavelet,
    #[arg(long, default_value_t = 1)]
    levels: usize,
    #[arg(long, default_value = "directional")]
    energy: EnergyMode,
    /// JSON rule base replacing the bundled one.
    #[arg(long, value_name = "PATH.json")]
    rules: Option<PathBuf>,
    #[arg(long, default_value = "sum")]
    agg: Aggregation,
    /// Edge strength at or above which a pixel is an edge.
    #[arg(long, default_value_t = 128.0, conflicts_with = "no_threshold")]
    threshold: f64,
    /// Produce the strength map only.
    #[arg(long)]
    no_threshold: bool,
    /// Mapping of subband energy onto the fuzzy universe: linear or log.
    #[arg(long, default_value = "log")]
    band_scaling: String,
    /// Dynamic range kept by log band scaling (default: 8-bit range, about 48.1 dB).
    #[arg(long, value_name = "DB")]
    dynamic_range_db: Option<f64>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long = "out", value_name = "PATH")]
    output: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Write subbands, per-level strength maps and a manifest here.
    #[arg(long, value_name = "DIR")]
    debug_dir: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
    /// Truth map; enables the JSON score report.
    #[arg(long, value_name = "PATH")]
    truth: Option<PathBuf>,
    /// Extra truth map for one edge subset, scored separately (repeatable).
    #[arg(long, value_name = "NAME=PATH", value_parser = parse_region_truth)]
    region_truth: Vec<(String, PathBuf)>,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long, default_value_t = DEFAULT_RMS_SCALE)]
    sobel_scale: f64,
    #[arg(long, default_value_t = CannyConfig::default().gaussian_sigma)]
    canny_sigma: f64,
    #[arg(long, default_value_t = CannyConfig::default().low_ratio)]
    canny_low_ratio: f64,
    #[arg(long, default_value_t = CannyConfig::default().high_percentile)]
    canny_high_percentile: f64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE_PX)]
    tolerance: u32,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long)]
    print_config: bool,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    kind: PatternKind,
    #[arg(long, value_name = "WxH", value_parser = parse_size)]
    size: (usize, usize),
    /// Step height (for lowcontrast, the small step; default 255, or 16 for lowcontrast).
    #[arg(long)]
    contrast: Option<f64>,
    #[arg(long, default_value = "vertical")]
    orientation: Orientation,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "out", value_name = "PATH")]
    output: PathBuf,
    #[arg(long)]
    print_config: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, value_name = "PATH")]
    pred: PathBuf,
    #[arg(long, value_name = "PATH")]
    truth: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE_PX)]
    tolerance: u32,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long)]
    print_config: bool,
}

fn parse_size(s: &str) -> std::result::Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got '{s}'"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad size '{s}': {e}"))
    };
    Ok((parse(w)?, parse(h)?))
}

fn parse_region_truth(s: &str) -> std::result::Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => {
            Ok((name.to_string(), PathBuf::from(path)))
        }
        _ => Err(format!("expected NAME=PATH, got '{s}'")),
    }
}

/// Replaces the extension of `path` with `suffix`, e.g. `e.pgm` + `bin.pgm` gives `e.bin.pgm`.
pub fn sibling_path(path: &Path, suffix: &str) -> PathBuf {
    let mut p = path.to_path_buf();
    p.set_extension(suffix);
    p
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::DimensionMismatch(_) => EXIT_USAGE,
        Error::Io { .. } | Error::Format(_) | Error::Unsupported(_) | Error::Json(_) => EXIT_IO,
        Error::Precondition(_) | Error::RuleBase(_) => EXIT_PRECONDITION,
    }
}

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Prints the config and reports whether the command should stop there.
fn echo_config(
    config: &Value,
    print_only: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool> {
    let io = |e| Error::io("<stdout>", e);
    if print_only {
        writeln!(out, "{}", serde_json::to_string_pretty(config)?).map_err(io)?;
    } else {
        writeln!(err, "{}", serde_json::to_string(config)?)
            .map_err(|e| Error::io("<stderr>", e))?;
    }
    Ok(print_only)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Detect(a) => cmd_detect(a, out, err),
        Command::Compare(a) => cmd_compare(a, out, err),
        Command::Synth(a) => cmd_synth(a, out, err),
        Command::Eval(a) => cmd_eval(a, out, err),
    }
}

fn pipeline_config(a: &PipelineArgs) -> Result<PipelineConfig> {
    let rule_base = match &a.rules {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let doc = serde_json::from_str(&text)?;
            FuzzyRuleBase::from_document(doc)?
        }
        None => crate::pipeline::default_rule_base(),
    };
    let band_scaling = match (a.band_scaling.parse::<BandScaling>()?, a.dynamic_range_db) {
        (BandScaling::Log { .. }, Some(db)) => BandScaling::Log {
            dynamic_range_db: db,
        },
        (BandScaling::Linear, Some(_)) => {
            return Err(Error::InvalidArgument(
                "--dynamic-range-db only applies to log band scaling".into(),
            ))
        }
        (s, None) => s,
    };
    let config = PipelineConfig {
        wavelet: a.wavelet,
        levels: a.levels,
        energy_mode: a.energy,
        band_scaling,
        rule_base,
        aggregation: a.agg,
        binary_threshold: (!a.no_threshold).then_some(a.threshold),
    };
    config.validate()?;
    Ok(config)
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn cmd_detect(a: DetectArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let config = pipeline_config(&a.pipeline)?;
    let binary_path = config
        .binary_threshold
        .map(|_| sibling_path(&a.output, "bin.pgm"));
    let echo = json!({
        "command": "detect",
        "input": path_str(&a.input),
        "output": path_str(&a.output),
        "binary_output": binary_path.as_deref().map(path_str),
        "debug_dir": a.debug_dir.as_deref().map(path_str),
        "pipeline": config,
    });
    if echo_config(&echo, a.print_config, out, err)? {
        return Ok(());
    }

    let img = load_image(&a.input)?;
    let result = detect_edges(&img, &config)?;
    save_image(&result.strength, &a.output)?;
    if let (Some(path), Some(binary)) = (&binary_path, &result.binary) {
        save_image(binary, path)?;
    }
    if let Some(dir) = &a.debug_dir {
        let floor = img.min();
        let pyramid = dwt2_multilevel(
            &img.map(|v| v - floor),
            &config.wavelet.filters(),
            config.levels,
        )?;
        dump_pyramid(&pyramid, dir)?;
        for (k, map) in result.per_level_maps.iter().enumerate() {
            save_image(map, dir.join(format!("level{}_strength.pgm", k + 1)))?;
        }
    }
    Ok(())
}

fn cmd_compare(a: CompareArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let config = pipeline_config(&a.pipeline)?;
    if config.binary_threshold.is_none() {
        return Err(Error::Precondition(
            "compare needs a binary map; drop --no-threshold".into(),
        ));
    }
    let canny = CannyConfig {
        gaussian_sigma: a.canny_sigma,
        low_ratio: a.canny_low_ratio,
        high_percentile: a.canny_high_percentile,
    };
    canny.validate()?;
    if !(a.sobel_scale.is_finite() && a.sobel_scale >= 0.0) {
        return Err(Error::Precondition(format!(
            "Sobel scale must be nonnegative, got {}",
            a.sobel_scale
        )));
    }
    if !(a.alpha.is_finite() && a.alpha > 0.0) {
        return Err(Error::Precondition(format!(
            "alpha must be positive, got {}",
            a.alpha
        )));
    }
    let echo = json!({
        "command": "compare",
        "input": path_str(&a.input),
        "out_dir": path_str(&a.out_dir),
        "truth": a.truth.as_deref().map(path_str),
        "region_truths": a.region_truth.iter().map(|(n, p)| json!({"name": n, "path": path_str(p)})).collect::<Vec<_>>(),
        "pipeline": config,
        "sobel": {"rms_scale": a.sobel_scale},
        "canny": canny,
        "score": {"tolerance_px": a.tolerance, "alpha": a.alpha},
    });
    if echo_config(&echo, a.print_config, out, err)? {
        return Ok(());
    }

    let img = load_image(&a.input)?;
    let mut truths: Vec<(Option<String>, GrayImage)> = Vec::new();
    if let Some(p) = &a.truth {
        truths.push((None, load_image(p)?));
    }
    for (name, p) in &a.region_truth {
        truths.push((Some(name.clone()), load_image(p)?));
    }
    for (_, t) in &truths {
        if t.dimensions() != img.dimensions() {
            return Err(Error::DimensionMismatch(format!(
                "truth is {}x{} but image is {}x{}",
                t.width(),
                t.height(),
                img.width(),
                img.height()
            )));
        }
    }

    std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::io(&a.out_dir, e))?;
    let proposed = detect_edges(&img, &config)?;
    let proposed_binary = proposed.binary.expect("threshold is set");
    let sobel = sobel_edges_rms(&img, a.sobel_scale)?;
    let canny_map = canny_edges(&img, &canny)?;
    save_image(&proposed.strength, a.out_dir.join("proposed_strength.pgm"))?;
    let detectors = [
        ("proposed", &proposed_binary),
        ("sobel", &sobel),
        ("canny", &canny_map),
    ];
    for (name, map) in detectors {
        save_image(map, a.out_dir.join(format!("{name}.pgm")))?;
    }

    if !truths.is_empty() {
        let mut records = Vec::new();
        for (name, map) in detectors {
            for (region, truth) in &truths {
                records.push(ScoreRecord {
                    image: path_str(&a.input),
                    spec: None,
                    detector: name.to_string(),
                    region: region.clone(),
                    score: score(map, truth, a.tolerance, a.alpha)?,
                });
            }
        }
        let report = EvalReport::from_records(records);
        let path = a.out_dir.join("report.json");
        std::fs::write(&path, report.to_json() + "\n").map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

fn cmd_synth(a: SynthArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let (width, height) = a.size;
    let spec = SyntheticSpec {
        kind: a.kind,
        width,
        height,
        contrast: a.contrast.unwrap_or(a.kind.default_contrast()),
        orientation: a.orientation,
        noise_sigma: a.noise,
        seed: a.seed,
    };
    spec.validate()?;
    let truth_path = sibling_path(&a.output, "truth.pgm");
    let echo = json!({
        "command": "synth",
        "spec": spec,
        "output": path_str(&a.output),
        "truth_output": path_str(&truth_path),
    });
    if echo_config(&echo, a.print_config, out, err)? {
        return Ok(());
    }
    let s = generate(&spec)?;
    save_image(&s.image, &a.output)?;
    save_image(&s.truth, &truth_path)?;
    for (name, t) in &s.region_truths {
        save_image(t, sibling_path(&a.output, &format!("truth.{name}.pgm")))?;
    }
    Ok(())
}

fn cmd_eval(a: EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let echo = json!({
        "command": "eval",
        "pred": path_str(&a.pred),
        "truth": path_str(&a.truth),
        "tolerance_px": a.tolerance,
        "alpha": a.alpha,
    });
    if echo_config(&echo, a.print_config, out, err)? {
        return Ok(());
    }
    let pred = load_image(&a.pred)?;
    let truth = load_image(&a.truth)?;
    let s = score(&pred, &truth, a.tolerance, a.alpha)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&s)?).map_err(|e| Error::io("<stdout>", e))?;
    Ok(())
}
