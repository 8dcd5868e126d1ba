//! Writes rendered reports to disk. Every file goes through
//! [`write_atomic`](crate::io::write_atomic).
//!
//! Evaluation layout under `out_dir`:
//!
//! ```text
//! table1.{csv,md}            per-class / macro / micro AUC, one row per model
//! table2.{csv,md}            micro/macro precision, F1, AUC
//! <model>/confusion_counts.csv
//! <model>/confusion_normalized.csv
//! <model>/roc_<CLASS>.csv    plus roc_micro.csv and roc_macro.csv
//! <model>/roc_<CLASS>.svg
//! <model>/roc_all.svg        all classes with micro and macro curves
//! <model>/report.json
//! ```

use std::path::{Path, PathBuf};

use super::svg::{emit_svg, LabeledCurve, SvgStyle};
use super::tables::{confusion_csv, normalized_confusion_csv, percent, table1, table2, table3};
use super::{Comparison, EvalReport, Format};
use crate::error::{Error, Result};
use crate::io::{csv_writer, finish_csv, write_atomic};
use crate::metrics::{RocCurve, RocPoint};
use crate::taxonomy::ClassId;

/// `fpr,tpr,threshold` rows using the shortest exact decimal form of each
/// value, so parsing gives back the same floats.
pub fn roc_csv(curve: &RocCurve) -> String {
    let mut w = csv_writer();
    w.write_record(["fpr", "tpr", "threshold"]).expect("in-memory write");
    for p in curve.points() {
        w.write_record([p.fpr.to_string(), p.tpr.to_string(), p.threshold.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(finish_csv(w)).expect("ascii")
}

pub fn parse_roc_csv(text: &str) -> Result<RocCurve> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::csv("roc csv", e))?;
        let row = rec.position().map(|p| p.line()).unwrap_or(0);
        let num = |i: usize| -> Result<f64> {
            let s = rec.get(i).unwrap_or("");
            s.parse()
                .map_err(|_| Error::row("roc csv", row, format!("cannot parse `{s}`")))
        };
        points.push(RocPoint {
            fpr: num(0)?,
            tpr: num(1)?,
            threshold: num(2)?,
        });
    }
    RocCurve::from_points(points)
}

fn safe_name(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() || s.chars().all(|c| c == '.') {
        "model".into()
    } else {
        s
    }
}

fn put(path: PathBuf, content: impl AsRef<[u8]>, written: &mut Vec<PathBuf>) -> Result<()> {
    write_atomic(&path, content.as_ref())?;
    written.push(path);
    Ok(())
}

pub fn write_eval_artifacts(reports: &[EvalReport], out_dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    let ext = format.extension();
    let mut written = Vec::new();
    put(
        out_dir.join(format!("table1.{ext}")),
        table1(reports, format),
        &mut written,
    )?;
    put(
        out_dir.join(format!("table2.{ext}")),
        table2(reports, format),
        &mut written,
    )?;

    for r in reports {
        let dir = out_dir.join(safe_name(&r.model_name));
        put(
            dir.join("confusion_counts.csv"),
            confusion_csv(&r.confusion),
            &mut written,
        )?;
        put(
            dir.join("confusion_normalized.csv"),
            normalized_confusion_csv(&r.confusion),
            &mut written,
        )?;

        let mut all = Vec::new();
        for c in ClassId::ALL {
            let Some(curve) = r.curves[c].as_ref() else {
                continue;
            };
            put(dir.join(format!("roc_{}.csv", c.code())), roc_csv(curve), &mut written)?;
            let auc = r.class(c).auc.unwrap_or(f64::NAN);
            let label = format!("{} (AUC {})", c.table_heading(), percent(auc));
            let style = SvgStyle {
                title: Some(format!("{} - {}", r.model_name, c.description())),
                ..SvgStyle::default()
            };
            put(
                dir.join(format!("roc_{}.svg", c.code())),
                emit_svg(&[LabeledCurve::new(label.clone(), curve)], &[], &style),
                &mut written,
            )?;
            all.push(LabeledCurve::new(label, curve));
        }
        put(dir.join("roc_micro.csv"), roc_csv(&r.micro_curve), &mut written)?;
        put(dir.join("roc_macro.csv"), roc_csv(&r.macro_curve), &mut written)?;

        let mut micro = LabeledCurve::new(format!("micro (AUC {})", percent(r.micro_auc)), &r.micro_curve);
        micro.color = Some("#000000".into());
        micro.dashed = true;
        let mut macro_ = LabeledCurve::new(format!("macro (AUC {})", percent(r.macro_auc)), &r.macro_curve);
        macro_.color = Some("#444444".into());
        macro_.dashed = true;
        all.push(micro);
        all.push(macro_);
        let style = SvgStyle {
            title: Some(format!("{} - all classes", r.model_name)),
            ..SvgStyle::default()
        };
        put(dir.join("roc_all.svg"), emit_svg(&all, &[], &style), &mut written)?;

        let json = serde_json::to_string_pretty(r).map_err(|e| Error::Invalid(e.to_string()))?;
        put(dir.join("report.json"), json + "\n", &mut written)?;
    }
    Ok(written)
}

/// Writes `table3.{csv,md}`, `comparison.csv` (per model and class: both
/// AUCs, model TPR at the reader FPR, verdict), `comparison.json`, and one
/// `roc_vs_operators_<CLASS>.svg` per target class.
pub fn write_compare_artifacts(cmp: &Comparison, out_dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    let ext = format.extension();
    let mut written = Vec::new();
    put(out_dir.join(format!("table3.{ext}")), table3(cmp, format), &mut written)?;

    let mut w = csv_writer();
    w.write_record([
        "model",
        "class",
        "model_auc",
        "operator_auc",
        "model_tpr_at_operator_fpr",
        "verdict",
    ])
    .expect("in-memory write");
    for row in &cmp.rows {
        for c in &row.per_class {
            let verdict = serde_json::to_value(c.dominance.verdict)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            w.write_record([
                row.model.clone(),
                c.class.code().to_string(),
                percent(c.model_auc),
                percent(c.operator_auc),
                format!("{:.4}", c.dominance.model_tpr),
                verdict,
            ])
            .expect("in-memory write");
        }
    }
    put(out_dir.join("comparison.csv"), finish_csv(w), &mut written)?;

    let json = serde_json::to_string_pretty(cmp).map_err(|e| Error::Invalid(e.to_string()))?;
    put(out_dir.join("comparison.json"), json + "\n", &mut written)?;

    for (k, &class) in cmp.classes.iter().enumerate() {
        let curves: Vec<LabeledCurve<'_>> = cmp
            .rows
            .iter()
            .map(|row| {
                let c = &row.per_class[k];
                LabeledCurve::new(format!("{} (AUC {})", row.model, percent(c.model_auc)), &c.curve)
            })
            .collect();
        let mut points: Vec<_> = cmp
            .operator_points
            .iter()
            .filter(|p| p.target_class == class)
            .cloned()
            .collect();
        points.push(cmp.operator_means[k].clone());
        let style = SvgStyle {
            title: Some(format!("{} vs readers", class.description())),
            highlight: Some(cmp.operator_means[k].name.clone()),
            ..SvgStyle::default()
        };
        put(
            out_dir.join(format!("roc_vs_operators_{}.svg", class.code())),
            emit_svg(&curves, &points, &style),
            &mut written,
        )?;
    }
    Ok(written)
}
