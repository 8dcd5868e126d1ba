//! Result tables. Values are percentages rounded half away from zero to two
//! decimals; nothing else is done to them.

use super::{Comparison, EvalReport, Format};
use crate::io::{csv_writer, finish_csv};
use crate::metrics::ConfusionMatrix;
use crate::taxonomy::ClassId;

pub fn round_half_away(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (x * scale).round() / scale
}

/// A [0, 1] value as a two-decimal percentage string, e.g. `98.16`.
pub fn percent(x: f64) -> String {
    format!("{:.2}", round_half_away(x * 100.0, 2))
}

fn render(header: &[String], rows: &[Vec<String>], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(header).expect("in-memory write");
            for r in rows {
                w.write_record(r).expect("in-memory write");
            }
            String::from_utf8(finish_csv(w)).expect("utf-8 input")
        }
        Format::Markdown => {
            let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
            let mut s = line(header);
            s.push_str(&line(&vec!["---".to_string(); header.len()]));
            for r in rows {
                s.push_str(&line(r));
            }
            s
        }
    }
}

pub fn table1_header() -> Vec<String> {
    let mut h = vec!["Algorithm".to_string()];
    h.extend(ClassId::ALL.iter().map(|c| c.table_heading().to_string()));
    h.push("Macro".into());
    h.push("Micro".into());
    h
}

/// Per-class, macro and micro ROC AUC, one row per model.
pub fn table1(reports: &[EvalReport], format: Format) -> String {
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let mut row = vec![r.model_name.clone()];
            row.extend(
                r.per_class
                    .iter()
                    .map(|c| c.auc.map(percent).unwrap_or_else(|| "excluded".into())),
            );
            row.push(percent(r.macro_auc));
            row.push(percent(r.micro_auc));
            row
        })
        .collect();
    render(&table1_header(), &rows, format)
}

/// Micro and macro precision, F1 and ROC AUC, one row per model.
pub fn table2(reports: &[EvalReport], format: Format) -> String {
    let header: Vec<String> = [
        "Classifier",
        "Precision Micro",
        "Precision Macro",
        "F1 Micro",
        "F1 Macro",
        "ROC AUC Micro",
        "ROC AUC Macro",
    ]
    .map(String::from)
    .to_vec();
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.model_name.clone(),
                percent(r.micro_prf.precision),
                percent(r.macro_prf.precision),
                percent(r.micro_prf.f1),
                percent(r.macro_prf.f1),
                percent(r.micro_auc),
                percent(r.macro_auc),
            ]
        })
        .collect();
    render(&header, &rows, format)
}

/// Reader AUC (from the mean operating point) followed by each model's AUC,
/// one column per target class.
pub fn table3(cmp: &Comparison, format: Format) -> String {
    let mut header = vec!["Classifier".to_string()];
    header.extend(cmp.classes.iter().map(|c| c.table_heading().to_string()));
    let mut rows = vec![{
        let mut r = vec![cmp.operator_label.clone()];
        r.extend(cmp.operator_means.iter().map(|p| percent(crate::metrics::point_auc(p))));
        r
    }];
    for m in &cmp.rows {
        let mut r = vec![m.model.clone()];
        r.extend(m.per_class.iter().map(|c| percent(c.model_auc)));
        rows.push(r);
    }
    render(&header, &rows, format)
}

fn confusion_header() -> Vec<String> {
    let mut h = vec!["true\\predicted".to_string()];
    h.extend(ClassId::ALL.iter().map(|c| c.code().to_string()));
    h
}

pub fn confusion_csv(cm: &ConfusionMatrix) -> String {
    let rows: Vec<Vec<String>> = ClassId::ALL
        .iter()
        .map(|&t| {
            let mut r = vec![t.code().to_string()];
            r.extend(ClassId::ALL.iter().map(|&p| cm.get(t, p).to_string()));
            r
        })
        .collect();
    render(&confusion_header(), &rows, Format::Csv)
}

/// Row-normalized matrix; the diagonal is per-class recall.
pub fn normalized_confusion_csv(cm: &ConfusionMatrix) -> String {
    let n = cm.row_normalized();
    let rows: Vec<Vec<String>> = ClassId::ALL
        .iter()
        .map(|&t| {
            let mut r = vec![t.code().to_string()];
            r.extend(n[t.index()].iter().map(|v| format!("{v:.4}")));
            r
        })
        .collect();
    render(&confusion_header(), &rows, Format::Csv)
}
