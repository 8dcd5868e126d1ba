use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{
    auc_trapezoid, dominance_check, mean_point, point_auc, roc_curve, Dominance, OperatorPoint, RocCurve, ScoreMatrix,
};
use crate::taxonomy::ClassId;

#[derive(Debug, Clone, Serialize)]
pub struct ClassComparison {
    pub class: ClassId,
    pub model_auc: f64,
    /// AUC of the mean operating point.
    pub operator_auc: f64,
    /// Model against the mean operating point.
    pub dominance: Dominance,
    #[serde(skip)]
    pub curve: RocCurve,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub model: String,
    pub per_class: Vec<ClassComparison>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub classes: Vec<ClassId>,
    /// Row label for the operators in the rendered table.
    pub operator_label: String,
    /// One mean point per target class, in `classes` order, named `mean`.
    pub operator_means: Vec<OperatorPoint>,
    /// Every supplied point for a target class.
    pub operator_points: Vec<OperatorPoint>,
    pub rows: Vec<ComparisonRow>,
}

/// Compares each model's one-vs-rest curve on every target class with the
/// averaged operating point of the readers for that class.
pub fn compare(
    models: &[(String, ScoreMatrix)],
    operators: &[OperatorPoint],
    classes: &[ClassId],
) -> Result<Comparison> {
    if models.is_empty() {
        return Err(Error::Invalid("comparison needs at least one score file".into()));
    }
    if classes.is_empty() {
        return Err(Error::Invalid("comparison needs at least one target class".into()));
    }
    let mut means = Vec::with_capacity(classes.len());
    for &c in classes {
        let m = mean_point(operators, c, "mean")
            .ok_or_else(|| Error::Invalid(format!("no operator points for target class {c}")))?;
        means.push(m);
    }
    for p in operators.iter().filter(|p| !classes.contains(&p.target_class)) {
        log::warn!(
            "operator point `{}` targets {} which is not compared",
            p.name,
            p.target_class
        );
    }

    let mut rows = Vec::with_capacity(models.len());
    for (name, m) in models {
        let mut per_class = Vec::with_capacity(classes.len());
        for (&c, mean) in classes.iter().zip(&means) {
            let curve = roc_curve(m, c).map_err(|e| match e {
                Error::AucUndefined { .. } => Error::Invalid(format!(
                    "operator points target {c} but `{name}` cannot be scored on it: {e}"
                )),
                e => e,
            })?;
            per_class.push(ClassComparison {
                class: c,
                model_auc: auc_trapezoid(&curve),
                operator_auc: point_auc(mean),
                dominance: dominance_check(&curve, mean),
                curve,
            });
        }
        rows.push(ComparisonRow {
            model: name.clone(),
            per_class,
        });
    }
    Ok(Comparison {
        classes: classes.to_vec(),
        operator_label: "Dermatologist".into(),
        operator_means: means,
        operator_points: operators
            .iter()
            .filter(|p| classes.contains(&p.target_class))
            .cloned()
            .collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Verdict;
    use crate::report::{table3, Format};

    fn perfect() -> ScoreMatrix {
        let truths = vec![ClassId::Mel, ClassId::Bcc, ClassId::Nv, ClassId::Nv];
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
    fn perfect_model_dominates() {
        let ops = vec![OperatorPoint::new("d1", ClassId::Mel, 0.8, 0.8).unwrap()];
        let cmp = compare(&[("m".into(), perfect())], &ops, &[ClassId::Mel]).unwrap();
        let c = &cmp.rows[0].per_class[0];
        assert_eq!(c.model_auc, 1.0);
        assert!((c.operator_auc - 0.8).abs() < 1e-15);
        assert_eq!(c.dominance.verdict, Verdict::ModelDominates);
    }

    #[test]
    fn table3_layout() {
        let ops = vec![
            OperatorPoint::new("d1", ClassId::Mel, 0.80, 0.8452).unwrap(),
            OperatorPoint::new("d1", ClassId::Bcc, 0.90, 0.8764).unwrap(),
        ];
        let models = [("A".to_string(), perfect()), ("B".to_string(), perfect())];
        let cmp = compare(&models, &ops, &[ClassId::Mel, ClassId::Bcc]).unwrap();
        let t = table3(&cmp, Format::Csv);
        assert_eq!(
            t,
            "Classifier,Mel,BCC\nDermatologist,82.26,88.82\nA,100.00,100.00\nB,100.00,100.00\n"
        );
    }

    #[test]
    fn errors() {
        let ops = vec![OperatorPoint::new("d1", ClassId::Df, 0.8, 0.8).unwrap()];
        // DF has no samples in the scores
        assert!(compare(&[("m".into(), perfect())], &ops, &[ClassId::Df]).is_err());
        // no operator points for MEL
        assert!(compare(&[("m".into(), perfect())], &ops, &[ClassId::Mel]).is_err());
        assert!(compare(&[], &ops, &[ClassId::Df]).is_err());
    }
}
