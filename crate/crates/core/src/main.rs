use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use dermbench::dataset::{
    default_ph2_selection, ingest_ham10000, ingest_ph2, merge_manifests, summarize, IngestOptions, Manifest,
    MissingImagePolicy,
};
use dermbench::metrics::{read_operator_points, ScoreMatrix};
use dermbench::preprocess::{preprocess_batch, PreprocessSpec, UndecodablePolicy};
use dermbench::report::{compare, evaluate, write_compare_artifacts, write_eval_artifacts, Format};
use dermbench::split::{stratified_split, verify_split, SplitSpec};
use dermbench::{ClassId, Error, Result};

#[derive(Parser)]
#[command(name = "dermbench", version, about = "Dermoscopy classification benchmark harness")]
struct Cli {
    /// Table format for eval and compare.
    #[arg(long, global = true, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    /// Directory for eval and compare artifacts.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Manifest operations.
    Manifest {
        #[command(subcommand)]
        action: ManifestCommand,
    },
    /// Assign TRAIN/VAL/TEST by stratified, seeded partitioning.
    Split {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, env = "DERMBENCH_SEED")]
        seed: u64,
        #[arg(long, default_value = "0.7,0.15,0.15")]
        fractions: String,
        #[arg(long)]
        group_by_lesion: bool,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Resize every image in a manifest and write a checksummed manifest.
    Preprocess {
        #[arg(long)]
        manifest: PathBuf,
        /// WIDTHxHEIGHT, e.g. 224x224 or 299x299.
        #[arg(long)]
        size: String,
        #[arg(long)]
        skip_undecodable: bool,
        /// Output directory for images and `manifest.csv`.
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Evaluate one or more score files.
    Eval {
        #[arg(long = "scores", required = true, num_args = 1..)]
        scores: Vec<PathBuf>,
        /// Model names, in score-file order (default: file stem).
        #[arg(long = "name")]
        names: Vec<String>,
    },
    /// Compare models against reader operating points.
    Compare {
        #[arg(long = "scores", required = true, num_args = 1..)]
        scores: Vec<PathBuf>,
        #[arg(long = "name")]
        names: Vec<String>,
        #[arg(long)]
        operators: PathBuf,
        /// Comma-separated class codes.
        #[arg(long, default_value = "MEL,BCC")]
        classes: String,
    },
}

#[derive(Subcommand)]
enum ManifestCommand {
    /// Merge HAM10000 and PH² into one manifest.
    Build {
        #[arg(long)]
        ham10000_meta: PathBuf,
        #[arg(long)]
        ham10000_images: PathBuf,
        #[arg(long)]
        ph2_index: PathBuf,
        #[arg(long)]
        ph2_images: PathBuf,
        /// Also keep PH² common nevi (as NV).
        #[arg(long)]
        ph2_all_classes: bool,
        /// Warn and skip records whose image file is missing.
        #[arg(long)]
        skip_missing: bool,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors are validation errors (1); --help and --version succeed.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let format = match cli.format {
        TableFormat::Csv => Format::Csv,
        TableFormat::Md => Format::Markdown,
    };
    match cli.command {
        Command::Manifest {
            action:
                ManifestCommand::Build {
                    ham10000_meta,
                    ham10000_images,
                    ph2_index,
                    ph2_images,
                    ph2_all_classes,
                    skip_missing,
                    output,
                },
        } => {
            let opts = IngestOptions {
                missing_images: if skip_missing {
                    MissingImagePolicy::Skip
                } else {
                    MissingImagePolicy::Error
                },
            };
            let selection: HashSet<ClassId> = if ph2_all_classes {
                ClassId::ALL.into_iter().collect()
            } else {
                default_ph2_selection()
            };
            let ham = ingest_ham10000(&ham10000_meta, &ham10000_images, &opts)?;
            let ph2 = ingest_ph2(&ph2_index, &ph2_images, &selection, &opts)?;
            let skipped = ham.skipped_missing.len() + ph2.skipped_missing.len();
            let merged = merge_manifests(ham.records, ph2.records)?;
            merged.write(&output)?;
            println!("{}", summarize(&merged));
            if skipped > 0 {
                println!("skipped (missing image): {skipped}");
            }
            println!("PH2 lesions not selected: {}", ph2.deselected);
        }
        Command::Split {
            manifest,
            seed,
            fractions,
            group_by_lesion,
            output,
        } => {
            let spec = SplitSpec::new(SplitSpec::parse_fractions(&fractions)?, seed, group_by_lesion)?;
            let m = Manifest::read(&manifest)?;
            let out = stratified_split(&m, &spec)?;
            out.manifest.write(&output)?;
            let report = verify_split(&out.manifest)?;
            println!(
                "TRAIN {} ({:.4})  VAL {} ({:.4})  TEST {} ({:.4})",
                report.totals[0],
                report.fractions[0],
                report.totals[1],
                report.fractions[1],
                report.totals[2],
                report.fractions[2]
            );
            if let Some(leak) = report.leakage {
                println!("lesion leakage across splits: {leak}");
            }
        }
        Command::Preprocess {
            manifest,
            size,
            skip_undecodable,
            output,
        } => {
            let spec = PreprocessSpec::parse_size(&size)?;
            let m = Manifest::read(&manifest)?;
            let policy = if skip_undecodable {
                UndecodablePolicy::Skip
            } else {
                UndecodablePolicy::Error
            };
            let out = preprocess_batch(&m, &spec, &output, policy)?;
            let manifest_path = output.join("manifest.csv");
            out.manifest.write(&manifest_path)?;
            println!("wrote {} image(s) and {}", out.manifest.len(), manifest_path.display());
            if !out.skipped.is_empty() {
                println!("skipped (undecodable): {}", out.skipped.join(", "));
            }
        }
        Command::Eval { scores, names } => {
            let models = load_models(&scores, &names)?;
            let reports: Vec<_> = models
                .par_iter()
                .map(|(name, m)| evaluate(m, name))
                .collect::<Result<_>>()?;
            let written = write_eval_artifacts(&reports, &cli.out_dir, format)?;
            print!("{}", dermbench::report::table1(&reports, format));
            println!("wrote {} file(s) under {}", written.len(), cli.out_dir.display());
        }
        Command::Compare {
            scores,
            names,
            operators,
            classes,
        } => {
            let models = load_models(&scores, &names)?;
            let points = read_operator_points(&operators)?;
            let classes: Vec<ClassId> = classes.split(',').map(str::parse).collect::<Result<_>>()?;
            let cmp = compare(&models, &points, &classes)?;
            let written = write_compare_artifacts(&cmp, &cli.out_dir, format)?;
            print!("{}", dermbench::report::table3(&cmp, format));
            println!("wrote {} file(s) under {}", written.len(), cli.out_dir.display());
        }
    }
    Ok(())
}

fn load_models(paths: &[PathBuf], names: &[String]) -> Result<Vec<(String, ScoreMatrix)>> {
    if !names.is_empty() && names.len() != paths.len() {
        return Err(Error::Invalid(format!(
            "{} --name value(s) for {} score file(s)",
            names.len(),
            paths.len()
        )));
    }
    paths
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let name = names.get(i).cloned().unwrap_or_else(|| stem(p));
            ScoreMatrix::read(p).map(|m| (name, m))
        })
        .collect()
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".into())
}
