//! Image resizing to model input resolution.
//!
//! Resampling is bilinear with half-pixel centres. For an output pixel at
//! column `dx` the source coordinate is `(dx + 0.5) * (src_w / dst_w) - 0.5`,
//! clamped to `[0, src_w - 1]`; rows are handled the same way. With
//! `x0 = floor(x)`, `x1 = min(x0 + 1, src_w - 1)` and `t = x - x0`, each
//! channel is
//!
//! ```text
//! top    = p(x0, y0) * (1 - tx) + p(x1, y0) * tx
//! bottom = p(x0, y1) * (1 - tx) + p(x1, y1) * tx
//! value  = top * (1 - ty) + bottom * ty
//! ```
//!
//! evaluated in `f64` in exactly that order and rounded half away from zero
//! to `u8`. Output is bit-exact for a given input.

use std::path::{Path, PathBuf};

use image::RgbImage;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::dataset::{Manifest, ManifestRecord};
use crate::error::{Error, Result};
use crate::io::write_atomic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    #[default]
    Bilinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Png,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreprocessSpec {
    pub width: u32,
    pub height: u32,
    pub interpolation: Interpolation,
    pub output_format: OutputFormat,
}

impl PreprocessSpec {
    pub fn new(width: u32, height: u32) -> Self {
        PreprocessSpec {
            width,
            height,
            interpolation: Interpolation::Bilinear,
            output_format: OutputFormat::Png,
        }
    }

    /// 299×299, the Inception v3 input size.
    pub fn inception() -> Self {
        Self::new(299, 299)
    }

    /// 224×224, used by the other three backbones.
    pub fn standard() -> Self {
        Self::new(224, 224)
    }

    /// Whether the size is one of the two the fine-tuning recipes use.
    pub fn is_recipe_size(&self) -> bool {
        matches!((self.width, self.height), (299, 299) | (224, 224))
    }

    /// Parses `224x224`.
    pub fn parse_size(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("size must look like 224x224, got `{s}`"));
        let (w, h) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
        let w: u32 = w.trim().parse().map_err(|_| bad())?;
        let h: u32 = h.trim().parse().map_err(|_| bad())?;
        if w == 0 || h == 0 {
            return Err(bad());
        }
        Ok(Self::new(w, h))
    }
}

/// Per-output-coordinate sampling positions along one axis.
#[derive(Debug, Clone, Copy)]
struct Tap {
    lo: usize,
    hi: usize,
    t: f64,
}

fn taps(src: u32, dst: u32) -> Vec<Tap> {
    let scale = src as f64 / dst as f64;
    let max = (src - 1) as f64;
    (0..dst)
        .map(|d| {
            let x = ((d as f64 + 0.5) * scale - 0.5).clamp(0.0, max);
            let lo = x.floor();
            let lo_i = lo as usize;
            Tap {
                lo: lo_i,
                hi: (lo_i + 1).min(src as usize - 1),
                t: x - lo,
            }
        })
        .collect()
}

#[inline]
fn to_u8(v: f64) -> u8 {
    // f64::round rounds half away from zero.
    v.round().clamp(0.0, 255.0) as u8
}

pub fn resize_image(image: &RgbImage, spec: &PreprocessSpec) -> Result<RgbImage> {
    let (sw, sh) = image.dimensions();
    if sw == 0 || sh == 0 {
        return Err(Error::ZeroDimension { width: sw, height: sh });
    }
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::ZeroDimension {
            width: spec.width,
            height: spec.height,
        });
    }
    let Interpolation::Bilinear = spec.interpolation;
    let cols = taps(sw, spec.width);
    let rows = taps(sh, spec.height);
    let src = image.as_raw();
    let stride = sw as usize * 3;
    let px = |x: usize, y: usize, c: usize| src[y * stride + x * 3 + c] as f64;

    let mut out = Vec::with_capacity(spec.width as usize * spec.height as usize * 3);
    for ry in &rows {
        for cx in &cols {
            for c in 0..3 {
                let top = px(cx.lo, ry.lo, c) * (1.0 - cx.t) + px(cx.hi, ry.lo, c) * cx.t;
                let bottom = px(cx.lo, ry.hi, c) * (1.0 - cx.t) + px(cx.hi, ry.hi, c) * cx.t;
                out.push(to_u8(top * (1.0 - ry.t) + bottom * ry.t));
            }
        }
    }
    Ok(RgbImage::from_raw(spec.width, spec.height, out).expect("buffer sized to dimensions"))
}

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn encode_png(image: &RgbImage) -> Result<Vec<u8>> {
    let mut buf = std::io::Cursor::new(Vec::new());
    image
        .write_to(&mut buf, image::ImageFormat::Png)
        .map_err(|e| Error::Invalid(format!("PNG encoding failed: {e}")))?;
    Ok(buf.into_inner())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UndecodablePolicy {
    #[default]
    Error,
    Skip,
}

#[derive(Debug, Clone)]
pub struct PreprocessOutcome {
    /// One row per written image, pointing at the output file and carrying
    /// the SHA-256 of its bytes in `checksum`.
    pub manifest: Manifest,
    /// Image ids left out because their source could not be decoded.
    pub skipped: Vec<String>,
}

enum Processed {
    Done(ManifestRecord),
    Skipped(String),
}

fn process_one(
    record: &ManifestRecord,
    spec: &PreprocessSpec,
    out_dir: &Path,
    policy: UndecodablePolicy,
) -> Result<Processed> {
    let decoded = image::ImageReader::open(&record.path)
        .map_err(|e| Error::io(&record.path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(&record.path, e))?
        .decode();
    let decoded = match decoded {
        Ok(img) => img,
        Err(e) if policy == UndecodablePolicy::Skip => {
            log::warn!("skipping `{}`: {e}", record.image_id);
            return Ok(Processed::Skipped(record.image_id.clone()));
        }
        Err(e) => {
            return Err(Error::Decode {
                image_id: record.image_id.clone(),
                source: e,
            })
        }
    };
    let resized = resize_image(&decoded.to_rgb8(), spec)?;
    let bytes = encode_png(&resized)?;
    let path: PathBuf = out_dir.join(format!("{}.png", record.image_id));
    write_atomic(&path, &bytes)?;
    Ok(Processed::Done(ManifestRecord {
        path,
        checksum: Some(sha256_hex(&bytes)),
        ..record.clone()
    }))
}

/// Resizes every record's image into `out_dir/<image_id>.png`, in parallel.
/// Output order follows input order whatever the thread count.
pub fn preprocess_batch(
    manifest: &Manifest,
    spec: &PreprocessSpec,
    out_dir: &Path,
    policy: UndecodablePolicy,
) -> Result<PreprocessOutcome> {
    if !spec.is_recipe_size() {
        log::warn!(
            "target size {}x{} is not one of the recipe sizes (299x299, 224x224)",
            spec.width,
            spec.height
        );
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let results: Vec<Result<Processed>> = manifest
        .records()
        .par_iter()
        .map(|r| process_one(r, spec, out_dir, policy))
        .collect();

    let mut records = Vec::with_capacity(results.len());
    let mut skipped = Vec::new();
    for r in results {
        match r? {
            Processed::Done(rec) => records.push(rec),
            Processed::Skipped(id) => skipped.push(id),
        }
    }
    Ok(PreprocessOutcome {
        manifest: Manifest::new(records)?,
        skipped,
    })
}
