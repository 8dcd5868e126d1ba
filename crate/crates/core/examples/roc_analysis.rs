//! One-vs-rest ROC curves, micro and macro averaging, and SVG output.

use std::path::Path;

use dermbench::metrics::{auc_trapezoid, macro_roc_auc, micro_roc, roc_curve, roc_curve_binary, ScoreMatrix};
use dermbench::report::{emit_svg, roc_csv, LabeledCurve, SvgStyle};
use dermbench::ClassId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Tied scores (0.4) move the curve diagonally and count half a pair.
    let scores = [0.9, 0.8, 0.4, 0.4, 0.35, 0.1];
    let truth = [true, true, true, false, false, false];
    let curve = roc_curve_binary(&scores, &truth)?;
    print!("{}", roc_csv(&curve));
    println!("AUC {:.4}\n", auc_trapezoid(&curve));

    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/scores_mixed.csv");
    let m = ScoreMatrix::read(&path)?;
    let mut labeled = Vec::new();
    let mut curves = Vec::new();
    for c in ClassId::ALL {
        curves.push((c, roc_curve(&m, c)?));
    }
    for (c, k) in &curves {
        println!("{:<8} AUC {:.4}", c.code(), auc_trapezoid(k));
        labeled.push(LabeledCurve::new(c.table_heading(), k));
    }
    let micro = micro_roc(&m)?;
    let macro_ = macro_roc_auc(&m)?;
    println!("micro    AUC {:.4}", auc_trapezoid(&micro));
    println!(
        "macro    AUC {:.4} (mean of classes {:.4})",
        macro_.auc, macro_.mean_of_aucs
    );

    let mut micro_l = LabeledCurve::new("micro", &micro);
    micro_l.dashed = true;
    labeled.push(micro_l);
    let style = SvgStyle {
        title: Some("scores_mixed".into()),
        ..SvgStyle::default()
    };
    let svg = emit_svg(&labeled, &[], &style);
    let out = tempfile::Builder::new().suffix(".svg").tempfile()?;
    std::fs::write(out.path(), &svg)?;
    let (_, kept) = out.keep()?;
    println!("\nSVG ({} bytes) written to {}", svg.len(), kept.display());
    Ok(())
}
