//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use dermbench::dataset::{
    default_ph2_selection, ingest_ham10000, ingest_ph2, merge_manifests, IngestOptions, Manifest,
};
use dermbench::metrics::{ScoreMatrix, ScoreRow};
use dermbench::{ClassId, NUM_CLASSES};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Image trees matching the fixture metadata, with empty files. Ingestion
/// only checks that a file exists.
pub struct ImageTree {
    pub root: tempfile::TempDir,
    pub ham: PathBuf,
    pub ph2: PathBuf,
}

pub fn image_tree() -> ImageTree {
    let root = tempfile::tempdir().unwrap();
    let ham = root.path().join("ham");
    let ph2 = root.path().join("ph2");
    let parts = [ham.join("HAM10000_images_part_1"), ham.join("HAM10000_images_part_2")];
    for p in &parts {
        fs::create_dir_all(p).unwrap();
    }
    let mut rdr = csv::Reader::from_path(fixture("ham10000_metadata.csv")).unwrap();
    for (k, rec) in rdr.records().enumerate() {
        let id = rec.unwrap()[1].to_string();
        fs::write(parts[k % 2].join(format!("{id}.jpg")), b"").unwrap();
    }
    let mut rdr = csv::Reader::from_path(fixture("ph2_index.csv")).unwrap();
    for rec in rdr.records() {
        let name = rec.unwrap()[0].to_string();
        let dir = ph2.join(&name).join(format!("{name}_Dermoscopic_Image"));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join(format!("{name}.bmp")), b"").unwrap();
    }
    ImageTree { root, ham, ph2 }
}

/// The merged manifest built from the checked-in metadata.
pub fn full_manifest(tree: &ImageTree) -> Manifest {
    let opts = IngestOptions::default();
    let ham = ingest_ham10000(&fixture("ham10000_metadata.csv"), &tree.ham, &opts).unwrap();
    let ph2 = ingest_ph2(&fixture("ph2_index.csv"), &tree.ph2, &default_ph2_selection(), &opts).unwrap();
    merge_manifests(ham.records, ph2.records).unwrap()
}

/// A random score matrix with `1..=max_n` rows. Rows are small integer
/// weights divided by their sum, so equal scores within a column are common.
pub fn random_scores(rng: &mut impl Rng, max_n: usize) -> ScoreMatrix {
    let n = rng.gen_range(1..=max_n);
    let mut truths = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let truth = ClassId::ALL[rng.gen_range(0..NUM_CLASSES)];
        let mut w = [0u32; NUM_CLASSES];
        for v in &mut w {
            *v = rng.gen_range(0..=4);
        }
        if rng.gen_bool(0.5) {
            w[truth.index()] += rng.gen_range(0..=6);
        }
        let sum: u32 = w.iter().sum();
        let row: ScoreRow = if sum == 0 {
            [1.0 / NUM_CLASSES as f64; NUM_CLASSES]
        } else {
            w.map(|v| v as f64 / sum as f64)
        };
        truths.push(truth);
        rows.push(row);
    }
    ScoreMatrix::from_rows(truths, rows).unwrap()
}

/// Tie-aware Mann–Whitney statistic by direct pair counting.
pub fn mann_whitney(scores: &[f64], positive: &[bool]) -> Option<f64> {
    let pos: Vec<f64> = scores.iter().zip(positive).filter(|p| *p.1).map(|p| *p.0).collect();
    let neg: Vec<f64> = scores.iter().zip(positive).filter(|p| !*p.1).map(|p| *p.0).collect();
    if pos.is_empty() || neg.is_empty() {
        return None;
    }
    // twice the U statistic, so ties stay integral
    let mut twice_u: u64 = 0;
    for &p in &pos {
        for &q in &neg {
            twice_u += match p.partial_cmp(&q).unwrap() {
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 0,
            };
        }
    }
    Some(twice_u as f64 / (2 * pos.len() * neg.len()) as f64)
}

/// Direct per-pixel bilinear sampling with half-pixel centres, written
/// without shared code from the library.
pub fn reference_resize(src: &[u8], sw: usize, sh: usize, dw: usize, dh: usize) -> Vec<u8> {
    fn coord(d: usize, s: usize, dn: usize) -> (usize, usize, f64) {
        let mut x = (d as f64 + 0.5) * (s as f64 / dn as f64) - 0.5;
        if x < 0.0 {
            x = 0.0;
        }
        if x > (s - 1) as f64 {
            x = (s - 1) as f64;
        }
        let i = x.floor() as usize;
        let j = if i + 1 < s { i + 1 } else { s - 1 };
        (i, j, x - x.floor())
    }
    let at = |x: usize, y: usize, c: usize| src[(y * sw + x) * 3 + c] as f64;
    let mut out = vec![0u8; dw * dh * 3];
    for y in 0..dh {
        let (y0, y1, ty) = coord(y, sh, dh);
        for x in 0..dw {
            let (x0, x1, tx) = coord(x, sw, dw);
            for c in 0..3 {
                let a = at(x0, y0, c) * (1.0 - tx) + at(x1, y0, c) * tx;
                let b = at(x0, y1, c) * (1.0 - tx) + at(x1, y1, c) * tx;
                let v = a * (1.0 - ty) + b * ty;
                let r = if v >= 0.0 { (v + 0.5).floor() } else { (v - 0.5).ceil() };
                out[(y * dw + x) * 3 + c] = r.clamp(0.0, 255.0) as u8;
            }
        }
    }
    out
}
