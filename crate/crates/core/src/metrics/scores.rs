//! Score files: one softmax row per image.
//!
//! Format: UTF-8 CSV with LF endings and the header
//! `image_id,true_label,MEL,NV,BCC,AKIEC,BKL,DF,VASC,ATYP_NV`. Probabilities
//! are decimals; [`ScoreMatrix::to_csv_bytes`] writes ten significant digits.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::{csv_writer, finish_csv, open_csv, row_number, write_atomic};
use crate::taxonomy::{ClassId, NUM_CLASSES};

/// Allowed deviation of a row sum from one.
pub const ROW_SUM_TOLERANCE: f64 = 1e-4;

pub type ScoreRow = [f64; NUM_CLASSES];

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    image_ids: Vec<String>,
    truths: Vec<ClassId>,
    scores: Vec<ScoreRow>,
}

fn check_row(row: &ScoreRow) -> std::result::Result<(), String> {
    if let Some((i, p)) = row.iter().enumerate().find(|(_, p)| !(0.0..=1.0).contains(*p)) {
        return Err(format!("probability {p} for {} is outside [0, 1]", ClassId::ALL[i]));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
        return Err(format!("row sums to {sum}, not 1 within {ROW_SUM_TOLERANCE}"));
    }
    Ok(())
}

impl ScoreMatrix {
    /// Validates every row (range, row sum, unique id). The matrix must not
    /// be empty.
    pub fn new(image_ids: Vec<String>, truths: Vec<ClassId>, scores: Vec<ScoreRow>) -> Result<Self> {
        if image_ids.len() != truths.len() || truths.len() != scores.len() {
            return Err(Error::Invalid(format!(
                "length mismatch: {} ids, {} labels, {} score rows",
                image_ids.len(),
                truths.len(),
                scores.len()
            )));
        }
        if scores.is_empty() {
            return Err(Error::Invalid("score matrix has no rows".into()));
        }
        let mut seen = HashSet::new();
        for (i, (id, row)) in image_ids.iter().zip(&scores).enumerate() {
            // +2: 1-based, after the header row.
            let n = i as u64 + 2;
            if !seen.insert(id.as_str()) {
                return Err(Error::row("scores", n, format!("duplicate image_id `{id}`")));
            }
            check_row(row).map_err(|m| Error::row("scores", n, m))?;
        }
        Ok(ScoreMatrix {
            image_ids,
            truths,
            scores,
        })
    }

    /// Builds a matrix with generated ids `s0, s1, ...`.
    pub fn from_rows(truths: Vec<ClassId>, scores: Vec<ScoreRow>) -> Result<Self> {
        let ids = (0..truths.len()).map(|i| format!("s{i}")).collect();
        Self::new(ids, truths, scores)
    }

    pub fn len(&self) -> usize {
        self.truths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truths.is_empty()
    }

    pub fn image_ids(&self) -> &[String] {
        &self.image_ids
    }

    pub fn truths(&self) -> &[ClassId] {
        &self.truths
    }

    pub fn rows(&self) -> &[ScoreRow] {
        &self.scores
    }

    /// Scores for one class across all samples.
    pub fn column(&self, class: ClassId) -> Vec<f64> {
        self.scores.iter().map(|r| r[class.index()]).collect()
    }

    /// One-vs-rest labels for `class`.
    pub fn is_positive(&self, class: ClassId) -> Vec<bool> {
        self.truths.iter().map(|&t| t == class).collect()
    }

    /// Argmax of each row; ties go to the lowest class index.
    pub fn predictions(&self) -> Vec<ClassId> {
        self.scores.iter().map(argmax).collect()
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = path.display().to_string();
        let mut rdr = open_csv(path)?;
        let headers = rdr.headers().map_err(|e| Error::csv(&file, e))?.clone();
        let expected: Vec<&str> = std::iter::once("image_id")
            .chain(std::iter::once("true_label"))
            .chain(ClassId::ALL.iter().map(|c| c.code()))
            .collect();
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(Error::row(&file, 1, format!("header must be `{}`", expected.join(","))));
        }

        let mut ids = Vec::new();
        let mut truths = Vec::new();
        let mut scores = Vec::new();
        let mut seen = HashSet::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::csv(&file, e))?;
            let row = row_number(&rec);
            let bad = |m: String| Error::row(&file, row, m);
            let id = rec.get(0).unwrap_or("");
            if id.is_empty() {
                return Err(bad("empty image_id".into()));
            }
            if !seen.insert(id.to_string()) {
                return Err(bad(format!("duplicate image_id `{id}`")));
            }
            let label: ClassId = rec
                .get(1)
                .unwrap_or("")
                .parse()
                .map_err(|e: Error| bad(e.to_string()))?;
            let mut r = [0.0; NUM_CLASSES];
            for (k, slot) in r.iter_mut().enumerate() {
                let s = rec.get(k + 2).unwrap_or("");
                *slot = s
                    .parse::<f64>()
                    .map_err(|_| bad(format!("cannot parse probability `{s}` for {}", ClassId::ALL[k])))?;
            }
            check_row(&r).map_err(bad)?;
            ids.push(id.to_string());
            truths.push(label);
            scores.push(r);
        }
        if scores.is_empty() {
            return Err(Error::row(&file, 1, "score file has no rows"));
        }
        Ok(ScoreMatrix {
            image_ids: ids,
            truths,
            scores,
        })
    }

    pub fn to_csv_bytes(&self) -> Vec<u8> {
        let mut w = csv_writer();
        let mut header = vec!["image_id", "true_label"];
        header.extend(ClassId::ALL.iter().map(|c| c.code()));
        w.write_record(&header).expect("in-memory write");
        for ((id, t), row) in self.image_ids.iter().zip(&self.truths).zip(&self.scores) {
            let mut fields = vec![id.clone(), t.code().to_string()];
            fields.extend(row.iter().map(|p| format_probability(*p)));
            w.write_record(&fields).expect("in-memory write");
        }
        finish_csv(w)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_csv_bytes())
    }
}

/// Ten significant digits in scientific notation, e.g. `1.250000000e-1`.
pub fn format_probability(p: f64) -> String {
    format!("{p:.9e}")
}

pub fn argmax(row: &ScoreRow) -> ClassId {
    let mut best = 0;
    for k in 1..NUM_CLASSES {
        if row[k] > row[best] {
            best = k;
        }
    }
    ClassId::ALL[best]
}
