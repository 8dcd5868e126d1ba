//! Evaluate score files and write every report artifact.
//!
//! ```text
//! cargo run --example evaluate_scores -- [out_dir] [scores.csv ...]
//! ```
//!
//! Defaults to the bundled perfect, uniform and mixed score fixtures.

use std::path::{Path, PathBuf};

use dermbench::metrics::ScoreMatrix;
use dermbench::report::{evaluate, table1, table2, write_eval_artifacts, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let scratch = tempfile::tempdir()?;
    let out_dir = args
        .first()
        .map(PathBuf::from)
        .unwrap_or_else(|| scratch.path().to_path_buf());
    let files: Vec<PathBuf> = if args.len() > 1 {
        args[1..].iter().map(PathBuf::from).collect()
    } else {
        let fx = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
        ["scores_perfect.csv", "scores_uniform.csv", "scores_mixed.csv"]
            .map(|f| fx.join(f))
            .to_vec()
    };

    let mut reports = Vec::new();
    for f in &files {
        let m = ScoreMatrix::read(f)?;
        let name = f.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
        reports.push(evaluate(&m, name)?);
    }

    println!("{}", table1(&reports, Format::Markdown));
    println!("{}", table2(&reports, Format::Markdown));
    for r in &reports {
        println!(
            "{}: macro AUC {:.6} (interpolated curve) vs {:.6} (mean of class AUCs); excluded {:?}",
            r.model_name,
            r.macro_auc,
            r.macro_auc_mean_of_aucs,
            r.excluded_classes()
        );
    }

    let written = write_eval_artifacts(&reports, &out_dir, Format::Csv)?;
    println!("\n{} files under {}", written.len(), out_dir.display());
    Ok(())
}
