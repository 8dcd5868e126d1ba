//! Compare a model's melanoma and BCC curves against reader operating
//! points.
//!
//! ```text
//! cargo run --example dermatologist_comparison -- [scores.csv] [operators.csv] [out_dir]
//! ```

use std::path::{Path, PathBuf};

use dermbench::metrics::{point_auc, read_operator_points, ScoreMatrix};
use dermbench::report::{compare, table3, write_compare_artifacts, Format};
use dermbench::ClassId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: PathBuf| args.get(i).map(PathBuf::from).unwrap_or(default);
    let scores = arg(0, fx.join("scores_mixed.csv"));
    let operators = arg(1, fx.join("operators.csv"));
    let scratch = tempfile::tempdir()?;
    let out_dir = arg(2, scratch.path().to_path_buf());

    let points = read_operator_points(&operators)?;
    for p in &points {
        println!(
            "{:<10} {:<4} sens {:.4} spec {:.4} -> AUC {:.4}",
            p.name,
            p.target_class.code(),
            p.sensitivity,
            p.specificity,
            point_auc(p)
        );
    }

    let model = ScoreMatrix::read(&scores)?;
    let cmp = compare(&[("model".into(), model)], &points, &[ClassId::Mel, ClassId::Bcc])?;
    println!("\n{}", table3(&cmp, Format::Markdown));
    for c in &cmp.rows[0].per_class {
        println!(
            "{}: model TPR {:.4} at the readers' mean FPR -> {:?}",
            c.class.code(),
            c.dominance.model_tpr,
            c.dominance.verdict
        );
    }
    let written = write_compare_artifacts(&cmp, &out_dir, Format::Csv)?;
    println!("\n{} files under {}", written.len(), out_dir.display());
    Ok(())
}
