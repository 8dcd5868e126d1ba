use serde::Serialize;

use super::scores::ScoreMatrix;
use crate::taxonomy::{ClassId, NUM_CLASSES};

/// Counts indexed `[true class][predicted class]`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionMatrix {
    counts: [[u64; NUM_CLASSES]; NUM_CLASSES],
}

impl ConfusionMatrix {
    pub fn from_counts(counts: [[u64; NUM_CLASSES]; NUM_CLASSES]) -> Self {
        ConfusionMatrix { counts }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (ClassId, ClassId)>) -> Self {
        let mut cm = ConfusionMatrix::default();
        for (t, p) in pairs {
            cm.counts[t.index()][p.index()] += 1;
        }
        cm
    }

    /// Tallies argmax predictions (ties to the lowest index) against truth.
    pub fn from_scores(m: &ScoreMatrix) -> Self {
        Self::from_pairs(m.truths().iter().copied().zip(m.predictions()))
    }

    pub fn counts(&self) -> &[[u64; NUM_CLASSES]; NUM_CLASSES] {
        &self.counts
    }

    pub fn get(&self, truth: ClassId, predicted: ClassId) -> u64 {
        self.counts[truth.index()][predicted.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn support(&self, class: ClassId) -> u64 {
        self.counts[class.index()].iter().sum()
    }

    pub fn predicted(&self, class: ClassId) -> u64 {
        self.counts.iter().map(|row| row[class.index()]).sum()
    }

    pub fn trace(&self) -> u64 {
        (0..NUM_CLASSES).map(|i| self.counts[i][i]).sum()
    }

    /// Each row divided by its support, so the diagonal holds per-class
    /// recall. Rows with no support are all zero.
    pub fn row_normalized(&self) -> [[f64; NUM_CLASSES]; NUM_CLASSES] {
        self.counts.map(|row| {
            let s: u64 = row.iter().sum();
            row.map(|v| if s == 0 { 0.0 } else { v as f64 / s as f64 })
        })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..NUM_CLASSES).all(|i| (0..NUM_CLASSES).all(|j| i == j || self.counts[i][j] == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClassId::*;

    #[test]
    fn direct_tally_two_class_embedding() {
        let truths = [Mel, Mel, Nv, Nv, Nv];
        let preds = [Mel, Nv, Nv, Nv, Mel];
        let cm = ConfusionMatrix::from_pairs(truths.into_iter().zip(preds));
        assert_eq!(cm.get(Mel, Mel), 1);
        assert_eq!(cm.get(Mel, Nv), 1);
        assert_eq!(cm.get(Nv, Mel), 1);
        assert_eq!(cm.get(Nv, Nv), 2);
        assert_eq!(cm.total(), 5);
        assert_eq!(cm.support(Nv), 3);
        assert_eq!(cm.predicted(Mel), 2);
    }

    #[test]
    fn perfect_predictions_are_diagonal() {
        let cm = ConfusionMatrix::from_pairs(ClassId::ALL.into_iter().map(|c| (c, c)));
        assert!(cm.is_diagonal());
        assert_eq!(cm.trace(), 8);
    }

    #[test]
    fn normalized_diagonal_is_recall() {
        let cm = ConfusionMatrix::from_pairs([(Bcc, Bcc), (Bcc, Bcc), (Bcc, Mel), (Bcc, Nv)]);
        let n = cm.row_normalized();
        assert_eq!(n[Bcc.index()][Bcc.index()], 0.5);
        assert_eq!(n[Bcc.index()].iter().sum::<f64>(), 1.0);
        assert!(n[Df.index()].iter().all(|&v| v == 0.0));
    }
}
