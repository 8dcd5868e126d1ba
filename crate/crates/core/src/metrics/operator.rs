//! Single operating points (e.g. a reader's sensitivity/specificity) and how
//! they compare with a model's ROC curve.
//!
//! Operator files are CSV with the header
//! `name,target_class,sensitivity,specificity`.

use std::path::Path;

use serde::Serialize;

use super::roc::{auc_trapezoid, RocCurve, RocPoint};
use crate::error::{Error, Result};
use crate::io::{column, open_csv, row_number};
use crate::taxonomy::ClassId;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorPoint {
    pub name: String,
    pub sensitivity: f64,
    pub specificity: f64,
    pub target_class: ClassId,
}

impl OperatorPoint {
    pub fn new(name: impl Into<String>, target_class: ClassId, sensitivity: f64, specificity: f64) -> Result<Self> {
        for (what, v) in [("sensitivity", sensitivity), ("specificity", specificity)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Invalid(format!("{what} {v} is outside [0, 1]")));
            }
        }
        Ok(OperatorPoint {
            name: name.into(),
            sensitivity,
            specificity,
            target_class,
        })
    }

    pub fn fpr(&self) -> f64 {
        1.0 - self.specificity
    }

    /// The three-point curve (0,0) → (1 − specificity, sensitivity) → (1,1).
    pub fn curve(&self) -> RocCurve {
        let p = |fpr, tpr| RocPoint {
            fpr,
            tpr,
            threshold: f64::NAN,
        };
        RocCurve::from_points(vec![p(0.0, 0.0), p(self.fpr(), self.sensitivity), p(1.0, 1.0)])
            .expect("rates validated on construction")
    }
}

/// AUC of the operator's three-point curve, `(sensitivity + specificity) / 2`.
pub fn point_auc(p: &OperatorPoint) -> f64 {
    (p.sensitivity + p.specificity) / 2.0
}

/// Same quantity, integrated with the trapezoid rule over [`OperatorPoint::curve`].
pub fn point_auc_by_trapezoid(p: &OperatorPoint) -> f64 {
    auc_trapezoid(&p.curve())
}

/// Mean sensitivity and specificity of the points for one class.
pub fn mean_point(points: &[OperatorPoint], class: ClassId, name: &str) -> Option<OperatorPoint> {
    let sel: Vec<_> = points.iter().filter(|p| p.target_class == class).collect();
    if sel.is_empty() {
        return None;
    }
    let n = sel.len() as f64;
    Some(OperatorPoint {
        name: name.to_string(),
        sensitivity: sel.iter().map(|p| p.sensitivity).sum::<f64>() / n,
        specificity: sel.iter().map(|p| p.specificity).sum::<f64>() / n,
        target_class: class,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ModelDominates,
    OperatorDominates,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dominance {
    pub verdict: Verdict,
    /// Model TPR at the operator's false-positive rate.
    pub model_tpr: f64,
}

/// Compares the model's TPR at the operator's FPR with the operator's
/// sensitivity. Exact equality is indeterminate.
pub fn dominance_check(curve: &RocCurve, p: &OperatorPoint) -> Dominance {
    let model_tpr = curve.tpr_at(p.fpr());
    let verdict = if model_tpr > p.sensitivity {
        Verdict::ModelDominates
    } else if model_tpr < p.sensitivity {
        Verdict::OperatorDominates
    } else {
        Verdict::Indeterminate
    };
    Dominance { verdict, model_tpr }
}

pub fn read_operator_points(path: &Path) -> Result<Vec<OperatorPoint>> {
    let file = path.display().to_string();
    let mut rdr = open_csv(path)?;
    let headers = rdr.headers().map_err(|e| Error::csv(&file, e))?.clone();
    let c_name = column(&headers, "name", &file)?;
    let c_class = column(&headers, "target_class", &file)?;
    let c_sens = column(&headers, "sensitivity", &file)?;
    let c_spec = column(&headers, "specificity", &file)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::csv(&file, e))?;
        let row = row_number(&rec);
        let bad = |m: String| Error::row(&file, row, m);
        let get = |i: usize| rec.get(i).unwrap_or("");
        let class: ClassId = get(c_class).parse().map_err(|e: Error| bad(e.to_string()))?;
        let num = |i: usize, what: &str| {
            get(i)
                .parse::<f64>()
                .map_err(|_| bad(format!("cannot parse {what} `{}`", get(i))))
        };
        let p = OperatorPoint::new(
            get(c_name),
            class,
            num(c_sens, "sensitivity")?,
            num(c_spec, "specificity")?,
        )
        .map_err(|e| bad(e.to_string()))?;
        out.push(p);
    }
    Ok(out)
}
