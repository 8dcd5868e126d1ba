//! One-vs-rest ROC curves and trapezoidal AUC.
//!
//! Thresholds sweep the distinct scores from high to low. Samples sharing a
//! score move together as one block, so a tie between a positive and a
//! negative becomes a diagonal segment and contributes half a pair to the
//! area. That makes the trapezoidal AUC equal to the Mann–Whitney statistic
//! with ties counted 0.5.

use serde::Serialize;

use super::scores::ScoreMatrix;
use crate::error::{Error, Result};
use crate::taxonomy::ClassId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Score at or above which samples are called positive. The `(0, 0)`
    /// anchor uses `+inf`; averaged curves carry `NaN`.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    points: Vec<RocPoint>,
}

impl RocCurve {
    /// Checks that the curve starts at (0, 0), ends at (1, 1), and that both
    /// rates are non-decreasing within `[0, 1]`.
    pub fn from_points(points: Vec<RocPoint>) -> Result<Self> {
        let bad = |m: &str| Err(Error::Invalid(format!("invalid ROC curve: {m}")));
        let (Some(first), Some(last)) = (points.first(), points.last()) else {
            return bad("no points");
        };
        if (first.fpr, first.tpr) != (0.0, 0.0) {
            return bad("first point is not (0, 0)");
        }
        if (last.fpr, last.tpr) != (1.0, 1.0) {
            return bad("last point is not (1, 1)");
        }
        for w in points.windows(2) {
            if w[1].fpr < w[0].fpr || w[1].tpr < w[0].tpr {
                return bad("rates decrease along the curve");
            }
        }
        if points
            .iter()
            .any(|p| !(0.0..=1.0).contains(&p.fpr) || !(0.0..=1.0).contains(&p.tpr))
        {
            return bad("rate outside [0, 1]");
        }
        Ok(RocCurve { points })
    }

    /// The chance diagonal.
    pub fn diagonal() -> Self {
        RocCurve {
            points: vec![
                RocPoint {
                    fpr: 0.0,
                    tpr: 0.0,
                    threshold: f64::INFINITY,
                },
                RocPoint {
                    fpr: 1.0,
                    tpr: 1.0,
                    threshold: f64::NAN,
                },
            ],
        }
    }

    pub fn points(&self) -> &[RocPoint] {
        &self.points
    }

    /// TPR at a given FPR by linear interpolation. Where the curve rises
    /// vertically at `fpr` the highest TPR reached there is returned.
    pub fn tpr_at(&self, fpr: f64) -> f64 {
        let pts = &self.points;
        let fpr = fpr.clamp(0.0, 1.0);
        // last index whose fpr <= target
        let i = pts.partition_point(|p| p.fpr <= fpr).saturating_sub(1);
        let a = pts[i];
        if a.fpr == fpr || i + 1 == pts.len() {
            return a.tpr;
        }
        let b = pts[i + 1];
        a.tpr + (b.tpr - a.tpr) * (fpr - a.fpr) / (b.fpr - a.fpr)
    }

    /// Lowest and highest TPR on the curve at `fpr`; they differ only where
    /// the curve rises vertically.
    pub fn tpr_range_at(&self, fpr: f64) -> (f64, f64) {
        let pts = &self.points;
        let fpr = fpr.clamp(0.0, 1.0);
        let first = pts.partition_point(|p| p.fpr < fpr);
        let hi = self.tpr_at(fpr);
        match pts.get(first) {
            Some(p) if p.fpr == fpr => (p.tpr, hi),
            _ => (hi, hi),
        }
    }

    pub fn auc(&self) -> f64 {
        auc_trapezoid(self)
    }
}

/// Trapezoidal integral of TPR over FPR.
pub fn auc_trapezoid(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) / 2.0)
        .sum()
}

/// ROC curve for arbitrary real scores and binary labels.
pub fn roc_curve_binary(scores: &[f64], positive: &[bool]) -> Result<RocCurve> {
    if scores.len() != positive.len() {
        return Err(Error::Invalid(format!(
            "{} scores but {} labels",
            scores.len(),
            positive.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Invalid("NaN score".into()));
    }
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Invalid(format!(
            "AUC undefined: {n_pos} positive and {n_neg} negative sample(s)"
        )));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: f64::INFINITY,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        while i < order.len() && scores[order[i]] == threshold {
            if positive[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / n_neg as f64,
            tpr: tp as f64 / n_pos as f64,
            threshold,
        });
    }
    Ok(RocCurve { points })
}

/// One-vs-rest curve for `class`.
pub fn roc_curve(m: &ScoreMatrix, class: ClassId) -> Result<RocCurve> {
    let positive = m.is_positive(class);
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::AucUndefined {
            class,
            positives: n_pos,
            negatives: n_neg,
        });
    }
    roc_curve_binary(&m.column(class), &positive)
}

/// Pools every (sample, class) pair into one binary problem.
pub fn micro_roc(m: &ScoreMatrix) -> Result<RocCurve> {
    let mut scores = Vec::with_capacity(m.len() * ClassId::ALL.len());
    let mut positive = Vec::with_capacity(scores.capacity());
    for (row, &truth) in m.rows().iter().zip(m.truths()) {
        for c in ClassId::ALL {
            scores.push(row[c.index()]);
            positive.push(c == truth);
        }
    }
    roc_curve_binary(&scores, &positive)
}

#[derive(Debug, Clone, Serialize)]
pub struct MacroRoc {
    /// AUC of the pointwise-averaged curve.
    pub auc: f64,
    /// Plain mean of the per-class AUCs.
    pub mean_of_aucs: f64,
    pub curve: RocCurve,
    pub included: Vec<ClassId>,
    pub excluded: Vec<ClassId>,
}

/// Averages the per-class curves on the union of their FPR values by linear
/// interpolation and integrates the result. Vertical steps are kept: at a
/// grid value both the averaged lower and upper TPR are emitted.
/// Classes lacking positives or negatives are excluded with a warning.
pub fn macro_roc_auc(m: &ScoreMatrix) -> Result<MacroRoc> {
    let mut curves = Vec::new();
    let mut included = Vec::new();
    let mut excluded = Vec::new();
    for c in ClassId::ALL {
        match roc_curve(m, c) {
            Ok(curve) => {
                curves.push(curve);
                included.push(c);
            }
            Err(Error::AucUndefined { .. }) => {
                log::warn!("class {c} excluded from macro ROC: needs positives and negatives");
                excluded.push(c);
            }
            Err(e) => return Err(e),
        }
    }
    macro_from_curves(&curves).map(|(curve, auc, mean_of_aucs)| MacroRoc {
        auc,
        mean_of_aucs,
        curve,
        included,
        excluded,
    })
}

/// Pointwise average of curves; returns (curve, its AUC, mean of AUCs).
pub fn macro_from_curves(curves: &[RocCurve]) -> Result<(RocCurve, f64, f64)> {
    if curves.is_empty() {
        return Err(Error::NothingToAverage(
            "macro ROC: no class has both positives and negatives",
        ));
    }
    let mut grid: Vec<f64> = curves.iter().flat_map(|c| c.points.iter().map(|p| p.fpr)).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let n = curves.len() as f64;
    // Every curve starts at (0, 0), so the grid's first value yields the anchor.
    let mut points = Vec::with_capacity(grid.len() * 2);
    for &x in &grid {
        let (lo, hi) = curves
            .iter()
            .map(|c| c.tpr_range_at(x))
            .fold((0.0, 0.0), |(a, b), (l, h)| (a + l, b + h));
        let (lo, hi) = ((lo / n).min(1.0), (hi / n).min(1.0));
        if lo < hi {
            points.push(RocPoint {
                fpr: x,
                tpr: lo,
                threshold: f64::NAN,
            });
        }
        points.push(RocPoint {
            fpr: x,
            tpr: hi,
            threshold: f64::NAN,
        });
    }
    // Averaging ones can land a hair under one; pin the end anchor.
    if let Some(last) = points.last_mut() {
        last.tpr = 1.0;
    }
    let curve = RocCurve { points };
    let auc = auc_trapezoid(&curve);
    let mean_of_aucs = curves.iter().map(auc_trapezoid).sum::<f64>() / n;
    Ok((curve, auc, mean_of_aucs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: &RocCurve) -> Vec<(f64, f64)> {
        c.points().iter().map(|p| (p.fpr, p.tpr)).collect()
    }

    #[test]
    fn separated_scores_enumerated() {
        let c = roc_curve_binary(&[0.9, 0.8, 0.2, 0.1], &[true, true, false, false]).unwrap();
        assert_eq!(pts(&c), [(0.0, 0.0), (0.0, 0.5), (0.0, 1.0), (0.5, 1.0), (1.0, 1.0)]);
        assert_eq!(c.points()[1].threshold, 0.9);
        assert_eq!(auc_trapezoid(&c), 1.0);
    }

    #[test]
    fn identical_scores_single_block() {
        let c = roc_curve_binary(&[0.3; 5], &[true, false, true, false, false]).unwrap();
        assert_eq!(pts(&c), [(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(auc_trapezoid(&c), 0.5);
    }

    #[test]
    fn three_of_four_pairs() {
        let c = roc_curve_binary(&[0.9, 0.4, 0.5, 0.1], &[true, true, false, false]).unwrap();
        assert_eq!(auc_trapezoid(&c), 0.75);
    }

    #[test]
    fn one_sided_labels_are_rejected() {
        assert!(roc_curve_binary(&[0.1, 0.2], &[true, true]).is_err());
        assert!(roc_curve_binary(&[0.1, f64::NAN], &[true, false]).is_err());
        let m = ScoreMatrix::from_rows(vec![ClassId::Mel], vec![[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(
            roc_curve(&m, ClassId::Mel),
            Err(Error::AucUndefined {
                class: ClassId::Mel,
                positives: 1,
                negatives: 0
            })
        ));
    }

    #[test]
    fn tpr_interpolation() {
        let d = RocCurve::diagonal();
        assert_eq!(d.tpr_at(0.25), 0.25);
        let c = roc_curve_binary(&[0.9, 0.8, 0.2, 0.1], &[true, true, false, false]).unwrap();
        // vertical step at fpr 0 reports the top.
        assert_eq!(c.tpr_at(0.0), 1.0);
        assert_eq!(c.tpr_at(0.7), 1.0);
    }

    #[test]
    fn from_points_validates() {
        let p = |fpr, tpr| RocPoint {
            fpr,
            tpr,
            threshold: 0.0,
        };
        assert!(RocCurve::from_points(vec![p(0.0, 0.0), p(1.0, 1.0)]).is_ok());
        assert!(RocCurve::from_points(vec![p(0.0, 0.1), p(1.0, 1.0)]).is_err());
        assert!(RocCurve::from_points(vec![p(0.0, 0.0), p(0.5, 0.6), p(0.4, 0.7), p(1.0, 1.0)]).is_err());
        assert!(RocCurve::from_points(vec![]).is_err());
    }

    #[test]
    fn identical_curves_macro_equals_each() {
        let c = roc_curve_binary(&[0.9, 0.4, 0.5, 0.1], &[true, true, false, false]).unwrap();
        let (_, auc, mean) = macro_from_curves(&[c.clone(), c.clone(), c]).unwrap();
        assert_eq!(mean, 0.75);
        assert!((auc - 0.75).abs() < 1e-15);
        assert!(macro_from_curves(&[]).is_err());
    }
}
