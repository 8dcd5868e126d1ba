//! Seeded 70/15/15 split of the bundled HAM10000 metadata, per image and
//! per lesion.
//!
//! ```text
//! cargo run --example stratified_split -- [seed]
//! ```

use std::path::Path;

use dermbench::dataset::{Manifest, ManifestRecord, Source};
use dermbench::split::{stratified_split, verify_split, SplitSpec};
use dermbench::{ClassId, Error};

fn load() -> Result<Manifest, Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/ham10000_metadata.csv");
    let mut rdr = csv::Reader::from_path(&path)?;
    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let label = ClassId::from_ham10000_code(&rec[2]).ok_or_else(|| Error::UnknownLabel(rec[2].to_string()))?;
        let id = &rec[1];
        records.push(ManifestRecord::new(id, format!("{id}.jpg"), Source::Ham10000, label).with_lesion(&rec[0]));
    }
    Ok(Manifest::new(records)?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse().unwrap_or(0)).unwrap_or(42);
    let manifest = load()?;

    for grouped in [false, true] {
        let spec = SplitSpec::with_seed(seed).grouped(grouped);
        let out = stratified_split(&manifest, &spec)?;
        let report = verify_split(&out.manifest)?;
        println!("seed {seed}, group by lesion: {grouped}");
        println!("  {:<8} {:>6} {:>6} {:>6}", "class", "TRAIN", "VAL", "TEST");
        for c in ClassId::ALL {
            let [a, b, t] = [0, 1, 2].map(|k| report.counts[k][c]);
            if a + b + t > 0 {
                println!("  {:<8} {a:>6} {b:>6} {t:>6}", c.code());
            }
        }
        println!(
            "  fractions {:.4} / {:.4} / {:.4}, leakage {:?}",
            report.fractions[0], report.fractions[1], report.fractions[2], report.leakage
        );
        for w in &out.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
