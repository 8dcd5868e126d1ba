//! Classification metrics over score matrices: confusion matrices,
//! precision/recall/F1 with micro and macro averaging, ROC curves and AUC,
//! and comparison against single operating points.

mod confusion;
mod operator;
mod prf;
mod roc;
mod scores;

pub use confusion::ConfusionMatrix;
pub use operator::{
    dominance_check, mean_point, point_auc, point_auc_by_trapezoid, read_operator_points, Dominance, OperatorPoint,
    Verdict,
};
pub use prf::{macro_average, micro_average, per_class_prf, MacroPrf, PrfTriple};
pub use roc::{
    auc_trapezoid, macro_from_curves, macro_roc_auc, micro_roc, roc_curve, roc_curve_binary, MacroRoc, RocCurve,
    RocPoint,
};
pub use scores::{argmax, format_probability, ScoreMatrix, ScoreRow, ROW_SUM_TOLERANCE};

/// Confusion matrix of a score matrix (argmax, ties to the lowest index).
pub fn confusion_matrix(m: &ScoreMatrix) -> ConfusionMatrix {
    ConfusionMatrix::from_scores(m)
}
