//! Resize a synthetic 600x450 dermoscopy-sized image to both network input
//! sizes and print the output checksums.

use dermbench::dataset::{Manifest, ManifestRecord, Source};
use dermbench::preprocess::{preprocess_batch, resize_image, PreprocessSpec, UndecodablePolicy};
use dermbench::ClassId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;

    // radial blob on a skin-toned background
    let img = image::RgbImage::from_fn(600, 450, |x, y| {
        let (dx, dy) = (x as f64 - 300.0, y as f64 - 225.0);
        let r = (dx * dx + dy * dy).sqrt() / 200.0;
        let k = (1.0 - r).clamp(0.0, 1.0);
        image::Rgb([
            (220.0 - 140.0 * k) as u8,
            (170.0 - 120.0 * k) as u8,
            (140.0 - 100.0 * k) as u8,
        ])
    });
    let src = dir.path().join("ISIC_demo.png");
    img.save(&src)?;

    let small = resize_image(&img, &PreprocessSpec::new(8, 6))?;
    println!("8x6 thumbnail, red channel:");
    for row in small.rows() {
        let line: Vec<String> = row.map(|p| format!("{:>3}", p[0])).collect();
        println!("  {}", line.join(" "));
    }

    let manifest = Manifest::new(vec![ManifestRecord::new(
        "ISIC_demo",
        &src,
        Source::Ham10000,
        ClassId::Mel,
    )])?;
    for spec in [PreprocessSpec::standard(), PreprocessSpec::inception()] {
        let out_dir = dir.path().join(format!("{}x{}", spec.width, spec.height));
        let out = preprocess_batch(&manifest, &spec, &out_dir, UndecodablePolicy::Error)?;
        for r in out.manifest.iter() {
            println!(
                "{}x{}  {}  sha256 {}",
                spec.width,
                spec.height,
                r.path.display(),
                r.checksum.as_deref().unwrap_or("-")
            );
        }
    }
    Ok(())
}
