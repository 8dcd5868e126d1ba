//! Evaluation reports and their rendered forms: result tables, confusion
//! matrices, ROC point files and SVG plots.

mod artifacts;
mod compare;
mod svg;
mod tables;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{
    auc_trapezoid, confusion_matrix, macro_average, macro_roc_auc, micro_average, micro_roc, per_class_prf, roc_curve,
    ConfusionMatrix, MacroPrf, PrfTriple, RocCurve, ScoreMatrix,
};
use crate::taxonomy::{ClassId, ClassMap};

pub use artifacts::{parse_roc_csv, roc_csv, write_compare_artifacts, write_eval_artifacts};
pub use compare::{compare, ClassComparison, Comparison, ComparisonRow};
pub use svg::{emit_svg, escape_xml, LabeledCurve, SvgStyle};
pub use tables::{
    confusion_csv, normalized_confusion_csv, percent, round_half_away, table1, table1_header, table2, table3,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Markdown,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Markdown => "md",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Markdown),
            _ => Err(Error::Invalid(format!("unknown format `{s}` (expected csv or md)"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassResult {
    pub class: ClassId,
    /// `None` when the class lacks positives or negatives in the scores.
    pub auc: Option<f64>,
    pub prf: PrfTriple,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub model_name: String,
    pub samples: usize,
    pub per_class: Vec<ClassResult>,
    pub micro_auc: f64,
    /// AUC of the averaged per-class curve.
    pub macro_auc: f64,
    pub macro_auc_mean_of_aucs: f64,
    pub micro_prf: PrfTriple,
    pub macro_prf: MacroPrf,
    pub confusion: ConfusionMatrix,
    #[serde(skip)]
    pub curves: ClassMap<Option<RocCurve>>,
    #[serde(skip)]
    pub micro_curve: RocCurve,
    #[serde(skip)]
    pub macro_curve: RocCurve,
}

impl EvalReport {
    pub fn class(&self, c: ClassId) -> &ClassResult {
        &self.per_class[c.index()]
    }

    pub fn excluded_classes(&self) -> Vec<ClassId> {
        self.per_class
            .iter()
            .filter(|r| r.auc.is_none())
            .map(|r| r.class)
            .collect()
    }
}

/// Runs every metric over one score matrix.
pub fn evaluate(m: &ScoreMatrix, model_name: &str) -> Result<EvalReport> {
    let cm = confusion_matrix(m);
    let mut curves = ClassMap::<Option<RocCurve>>::default();
    let mut per_class = Vec::with_capacity(ClassId::ALL.len());
    for c in ClassId::ALL {
        let curve = match roc_curve(m, c) {
            Ok(curve) => Some(curve),
            Err(Error::AucUndefined { .. }) => None,
            Err(e) => return Err(e),
        };
        per_class.push(ClassResult {
            class: c,
            auc: curve.as_ref().map(auc_trapezoid),
            prf: per_class_prf(&cm, c),
        });
        curves[c] = curve;
    }
    let triples: Vec<PrfTriple> = per_class.iter().map(|r| r.prf).collect();
    let macro_roc = macro_roc_auc(m)?;
    let micro_curve = micro_roc(m)?;
    Ok(EvalReport {
        model_name: model_name.to_string(),
        samples: m.len(),
        micro_auc: auc_trapezoid(&micro_curve),
        macro_auc: macro_roc.auc,
        macro_auc_mean_of_aucs: macro_roc.mean_of_aucs,
        micro_prf: micro_average(&cm),
        macro_prf: macro_average(&triples, false)?,
        confusion: cm,
        per_class,
        curves,
        micro_curve,
        macro_curve: macro_roc.curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_hot_matrix() -> ScoreMatrix {
        let truths: Vec<ClassId> = ClassId::ALL.iter().copied().cycle().take(24).collect();
        let rows = truths
            .iter()
            .map(|c| {
                let mut r = [0.0; 8];
                r[c.index()] = 1.0;
                r
            })
            .collect();
        ScoreMatrix::from_rows(truths, rows).unwrap()
    }

    #[test]
    fn perfect_scores_evaluate_to_one() {
        let r = evaluate(&one_hot_matrix(), "perfect").unwrap();
        assert!(r.per_class.iter().all(|c| c.auc == Some(1.0)));
        assert_eq!(r.micro_auc, 1.0);
        assert_eq!(r.macro_auc, 1.0);
        assert_eq!(r.micro_prf.f1, 1.0);
        assert!(r.confusion.is_diagonal());
        assert!(r.excluded_classes().is_empty());
    }

    #[test]
    fn missing_class_is_marked_not_dropped() {
        let truths = vec![ClassId::Mel, ClassId::Nv, ClassId::Nv];
        let rows = vec![
            [0.6, 0.4, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.3, 0.7, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ];
        let r = evaluate(&ScoreMatrix::from_rows(truths, rows).unwrap(), "m").unwrap();
        assert_eq!(r.per_class.len(), 8);
        assert_eq!(r.excluded_classes().len(), 6);
        assert_eq!(r.macro_prf.included, 2);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("md".parse::<Format>().unwrap(), Format::Markdown);
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert!("xlsx".parse::<Format>().is_err());
    }
}
