//! Command-line front end for the painterly stylization pipeline.
//!
//! Subcommands: `stylize` one image, `batch` a directory, and `compare`
//! the stroke-jaggedness of the two orientation estimators on one image.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tractbrush::config::parse_config_file;
use tractbrush::field::{coherence, eigen2, estimator_or_err};
use tractbrush::pipeline::{smoothness_metric, stylize, StylizationConfig};
use tractbrush::raster::{decode_image, encode_png, ColorImage};
use tractbrush::render::export_svg;

#[derive(Parser)]
#[command(
    name = "tractbrush",
    version,
    about = "Painterly image stylization: brush strokes traced along the image's orientation field"
)]
struct Cli {
    /// Configuration file (`key = value` lines, `#` comments); standard
    /// four-layer defaults fill in anything absent.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override the configuration's RNG seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stylize one image (PNG or JPEG in, PNG out).
    Stylize {
        input: PathBuf,
        output: PathBuf,

        /// Orientation-field estimator (structure_tensor/st or gradient/grad).
        #[arg(long, value_name = "KIND")]
        field: Option<String>,

        /// Also export the strokes as an SVG document.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,

        /// Dump traced tracts as text, one per line ("x0,y0 x1,y1 ..."), in
        /// each layer's working-image coordinates.
        #[arg(long, value_name = "PATH")]
        dump_tracts: Option<PathBuf>,

        /// Dump the chosen estimator's coherence map at full resolution as a
        /// greyscale PNG heatmap (white = coherence 1).
        #[arg(long, value_name = "PATH")]
        dump_coherence: Option<PathBuf>,
    },
    /// Stylize every PNG/JPEG in a directory with one configuration,
    /// writing `<out_dir>/<stem>.png` for each (filename order; first
    /// failure aborts).
    Batch {
        in_dir: PathBuf,
        out_dir: PathBuf,

        /// Orientation-field estimator (structure_tensor/st or gradient/grad).
        #[arg(long, value_name = "KIND")]
        field: Option<String>,
    },
    /// Print the stroke-jaggedness metric for both estimators on one image
    /// (lower is smoother).
    Compare { input: PathBuf },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    let mut cfg = match &cli.config {
        Some(path) => parse_config_file(path).map_err(|e| e.to_string())?,
        None => StylizationConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.rng_seed = seed;
    }

    match cli.command {
        Command::Stylize { input, output, field, svg, dump_tracts, dump_coherence } => {
            apply_field_override(&mut cfg, field)?;
            let original = load_image(&input)?;
            let (canvas, records) = stylize(&original, &cfg).map_err(|e| e.to_string())?;
            write_png(&output, canvas.image())?;

            if let Some(path) = svg {
                let strokes: Vec<_> = records.iter().map(|r| r.stroke.clone()).collect();
                let doc =
                    export_svg(&strokes, original.width(), original.height(), cfg.background);
                write_file(&path, doc.as_bytes())?;
            }
            if let Some(path) = dump_tracts {
                let mut text = String::new();
                for record in &records {
                    let mut line = String::new();
                    for p in record.tract.points() {
                        if !line.is_empty() {
                            line.push(' ');
                        }
                        let _ = write!(line, "{:.4},{:.4}", p.x, p.y);
                    }
                    text.push_str(&line);
                    text.push('\n');
                }
                write_file(&path, text.as_bytes())?;
            }
            if let Some(path) = dump_coherence {
                write_png(&path, &coherence_heatmap(&original, &cfg)?)?;
            }
            Ok(())
        }
        Command::Batch { in_dir, out_dir, field } => {
            apply_field_override(&mut cfg, field)?;
            let images = list_images(&in_dir)?;
            if images.is_empty() {
                return Err(format!("no PNG or JPEG images in `{}`", in_dir.display()));
            }
            std::fs::create_dir_all(&out_dir)
                .map_err(|e| format!("cannot create `{}`: {e}", out_dir.display()))?;
            for input in images {
                let original = load_image(&input)?;
                let (canvas, _) = stylize(&original, &cfg)
                    .map_err(|e| format!("{}: {e}", input.display()))?;
                let stem = input.file_stem().unwrap_or_default();
                let output = out_dir.join(stem).with_extension("png");
                write_png(&output, canvas.image())?;
                println!("{} -> {}", input.display(), output.display());
            }
            Ok(())
        }
        Command::Compare { input } => {
            let original = load_image(&input)?;
            println!("{:<18} {}", "estimator", "jaggedness");
            for kind in ["structure_tensor", "gradient"] {
                let run_cfg = StylizationConfig { field_kind: kind.into(), ..cfg.clone() };
                let (_, records) = stylize(&original, &run_cfg).map_err(|e| e.to_string())?;
                let metric = smoothness_metric(&records)
                    .map_err(|e| format!("{kind}: {e}"))?;
                println!("{kind:<18} {metric:.6}");
            }
            Ok(())
        }
    }
}

/// Replaces the configured estimator with a command-line override,
/// validating the name against the registry either way.
fn apply_field_override(cfg: &mut StylizationConfig, field: Option<String>) -> Result<(), String> {
    if let Some(kind) = field {
        cfg.field_kind = kind;
    }
    let canonical = estimator_or_err(&cfg.field_kind).map_err(|e| e.to_string())?;
    cfg.field_kind = canonical.name().to_string();
    Ok(())
}

fn load_image(path: &Path) -> Result<ColorImage, String> {
    let bytes =
        std::fs::read(path).map_err(|e| format!("cannot read `{}`: {e}", path.display()))?;
    decode_image(&bytes).map_err(|e| format!("cannot decode `{}`: {e}", path.display()))
}

fn write_png(path: &Path, img: &ColorImage) -> Result<(), String> {
    let bytes = encode_png(img).map_err(|e| e.to_string())?;
    write_file(path, &bytes)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), String> {
    std::fs::write(path, bytes).map_err(|e| format!("cannot write `{}`: {e}", path.display()))
}

/// PNG/JPEG paths inside `dir`, sorted by file name.
fn list_images(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| format!("cannot read `{}`: {e}", dir.display()))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| format!("cannot read `{}`: {e}", dir.display()))?.path();
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or_default().to_lowercase();
        if path.is_file() && matches!(ext.as_str(), "png" | "jpg" | "jpeg") {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

/// Greyscale coherence map of the configured estimator's field, built on the
/// full-resolution greyscale image.
fn coherence_heatmap(original: &ColorImage, cfg: &StylizationConfig) -> Result<ColorImage, String> {
    let grey = original.to_greyscale();
    let field = estimator_or_err(&cfg.field_kind)
        .and_then(|est| est.build(&grey, cfg.sigma_d, cfg.rho))
        .map_err(|e| e.to_string())?;
    let mut heat = ColorImage::new(original.width(), original.height(), [0.0; 3]);
    for y in 0..heat.height() {
        for x in 0..heat.width() {
            let (sxx, sxy, syy) = field.components(x, y);
            let e = eigen2(sxx, sxy, syy);
            let v = coherence(e.lambda1, e.lambda2) * 255.0;
            heat.set(x, y, [v, v, v]);
        }
    }
    Ok(heat)
}
