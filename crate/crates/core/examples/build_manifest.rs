//! Assemble the merged HAM10000 + PH² manifest.
//!
//! ```text
//! cargo run --example build_manifest -- <ham_meta.csv> <ham_images/> <ph2_index> <ph2_images/> [out.csv]
//! ```
//!
//! With no arguments the bundled metadata fixtures are used, with empty
//! placeholder image files created in a temporary directory.

use std::fs;
use std::path::{Path, PathBuf};

use dermbench::dataset::{
    default_ph2_selection, ingest_ham10000, ingest_ph2, merge_manifests, summarize, IngestOptions,
};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn placeholder_images(root: &Path) -> Result<(PathBuf, PathBuf), Box<dyn std::error::Error>> {
    let ham = root.join("ham");
    let ph2 = root.join("ph2");
    let touch = |p: PathBuf| fs::write(&p, b"");
    fs::create_dir_all(&ham)?;
    let mut rdr = csv::Reader::from_path(fixtures().join("ham10000_metadata.csv"))?;
    for rec in rdr.records() {
        let rec = rec?;
        touch(ham.join(format!("{}.jpg", &rec[1])))?;
    }
    let mut rdr = csv::Reader::from_path(fixtures().join("ph2_index.csv"))?;
    for rec in rdr.records() {
        let rec = rec?;
        let dir = ph2.join(&rec[0]).join(format!("{}_Dermoscopic_Image", &rec[0]));
        fs::create_dir_all(&dir)?;
        touch(dir.join(format!("{}.bmp", &rec[0])))?;
    }
    Ok((ham, ph2))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let scratch = tempfile::tempdir()?;
    let (meta, ham_dir, index, ph2_dir) = if args.len() >= 4 {
        (
            PathBuf::from(&args[0]),
            PathBuf::from(&args[1]),
            PathBuf::from(&args[2]),
            PathBuf::from(&args[3]),
        )
    } else {
        let (ham, ph2) = placeholder_images(scratch.path())?;
        (
            fixtures().join("ham10000_metadata.csv"),
            ham,
            fixtures().join("ph2_index.csv"),
            ph2,
        )
    };
    let out = args
        .get(4)
        .map(PathBuf::from)
        .unwrap_or_else(|| scratch.path().join("manifest.csv"));

    let opts = IngestOptions::default();
    let ham = ingest_ham10000(&meta, &ham_dir, &opts)?;
    let ph2 = ingest_ph2(&index, &ph2_dir, &default_ph2_selection(), &opts)?;
    println!("HAM10000\n{}", summarize(&ham.records));
    println!(
        "PH2 (selected; {} common nevi left out)\n{}",
        ph2.deselected,
        summarize(&ph2.records)
    );

    let merged = merge_manifests(ham.records, ph2.records)?;
    println!("merged\n{}", summarize(&merged));
    merged.write(&out)?;
    println!("wrote {}", out.display());
    Ok(())
}
