//! Precision, recall and F1.
//!
//! ```text
//! precision = TP / (TP + FP)
//! recall    = TP / (TP + FN)
//! F1        = 2·TP / (2·TP + FP + FN)
//! ```
//!
//! A zero denominator yields 0. A class with no support (`TP + FN = 0`) is
//! *degenerate*: its recall is undefined, and macro averages leave it out
//! unless asked otherwise.

use serde::Serialize;

use super::confusion::ConfusionMatrix;
use crate::error::{Error, Result};
use crate::taxonomy::ClassId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrfTriple {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    /// No true samples of the class.
    pub degenerate: bool,
    /// Nothing was predicted as the class, so precision is 0/0.
    pub precision_undefined: bool,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl PrfTriple {
    pub fn from_counts(tp: u64, fp: u64, fn_: u64) -> Self {
        PrfTriple {
            precision: ratio(tp, tp + fp),
            recall: ratio(tp, tp + fn_),
            f1: ratio(2 * tp, 2 * tp + fp + fn_),
            tp,
            fp,
            fn_,
            degenerate: tp + fn_ == 0,
            precision_undefined: tp + fp == 0,
        }
    }
}

pub fn per_class_prf(cm: &ConfusionMatrix, class: ClassId) -> PrfTriple {
    let tp = cm.get(class, class);
    PrfTriple::from_counts(tp, cm.predicted(class) - tp, cm.support(class) - tp)
}

/// Pools TP, FP and FN over all classes before applying the formulas.
pub fn micro_average(cm: &ConfusionMatrix) -> PrfTriple {
    let (tp, fp, fn_) = ClassId::ALL
        .iter()
        .map(|&c| per_class_prf(cm, c))
        .fold((0, 0, 0), |(a, b, c), t| (a + t.tp, b + t.fp, c + t.fn_));
    PrfTriple::from_counts(tp, fp, fn_)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MacroPrf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub included: usize,
    pub excluded: usize,
}

/// Unweighted mean over classes. Degenerate classes are skipped unless
/// `include_degenerate` is set.
pub fn macro_average(triples: &[PrfTriple], include_degenerate: bool) -> Result<MacroPrf> {
    let kept: Vec<&PrfTriple> = triples.iter().filter(|t| include_degenerate || !t.degenerate).collect();
    let excluded = triples.len() - kept.len();
    if kept.is_empty() {
        return Err(Error::NothingToAverage("a macro average: every class is degenerate"));
    }
    if excluded > 0 {
        log::warn!("macro average excludes {excluded} class(es) with no support");
    }
    let n = kept.len() as f64;
    let mean = |f: fn(&PrfTriple) -> f64| kept.iter().map(|t| f(t)).sum::<f64>() / n;
    Ok(MacroPrf {
        precision: mean(|t| t.precision),
        recall: mean(|t| t.recall),
        f1: mean(|t| t.f1),
        included: kept.len(),
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClassId::*;

    #[test]
    fn substitute_counts() {
        let t = PrfTriple::from_counts(3, 1, 2);
        assert_eq!(t.precision, 0.75);
        assert_eq!(t.recall, 0.6);
        assert_eq!(t.f1, 6.0 / 9.0);
        assert!(!t.degenerate);
    }

    #[test]
    fn empty_class_is_degenerate_zero() {
        let cm = ConfusionMatrix::from_pairs([(Mel, Mel), (Nv, Nv)]);
        let t = per_class_prf(&cm, Df);
        assert_eq!((t.precision, t.recall, t.f1), (0.0, 0.0, 0.0));
        assert!(t.degenerate);
        assert!(t.precision_undefined);
    }

    #[test]
    fn perfect_matrix_gives_ones() {
        let cm = ConfusionMatrix::from_pairs([(Mel, Mel), (Nv, Nv), (Nv, Nv), (Vasc, Vasc)]);
        for c in [Mel, Nv, Vasc] {
            let t = per_class_prf(&cm, c);
            assert_eq!((t.precision, t.recall, t.f1), (1.0, 1.0, 1.0));
        }
        let m = micro_average(&cm);
        assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn per_class_counts_from_matrix() {
        let cm = ConfusionMatrix::from_pairs([(Mel, Mel), (Mel, Nv), (Nv, Mel), (Nv, Nv), (Nv, Nv)]);
        let t = per_class_prf(&cm, Nv);
        assert_eq!((t.tp, t.fp, t.fn_), (2, 1, 1));
        let micro = micro_average(&cm);
        assert_eq!(micro.precision, 3.0 / 5.0);
        assert_eq!(micro.recall, micro.precision);
        assert_eq!(micro.f1, micro.precision);
    }

    #[test]
    fn macro_means() {
        let a = PrfTriple {
            f1: 0.6,
            ..PrfTriple::from_counts(1, 1, 0)
        };
        let b = PrfTriple {
            f1: 1.0,
            ..PrfTriple::from_counts(1, 0, 0)
        };
        assert_eq!(macro_average(&[a, b], false).unwrap().f1, 0.8);

        let ps = [0.5, 0.75, 1.0].map(|p| PrfTriple {
            precision: p,
            ..PrfTriple::from_counts(1, 0, 0)
        });
        assert_eq!(macro_average(&ps, false).unwrap().precision, 0.75);

        let same = [PrfTriple::from_counts(3, 1, 2); 4];
        let m = macro_average(&same, false).unwrap();
        assert_eq!(
            (m.precision, m.recall, m.f1),
            (same[0].precision, same[0].recall, same[0].f1)
        );
    }

    #[test]
    fn macro_degenerate_handling() {
        let good = PrfTriple::from_counts(1, 0, 0);
        let empty = PrfTriple::from_counts(0, 0, 0);
        let m = macro_average(&[good, empty], false).unwrap();
        assert_eq!((m.precision, m.included, m.excluded), (1.0, 1, 1));
        let m = macro_average(&[good, empty], true).unwrap();
        assert_eq!(m.precision, 0.5);
        assert!(macro_average(&[empty, empty], false).is_err());
    }
}
