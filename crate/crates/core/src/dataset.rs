//! Dataset ingestion: HAM10000 metadata, the PH² index, and the merged
//! manifest file.
//!
//! A manifest is a comma-separated UTF-8 file with LF line endings and the
//! header `image_id,path,source,label,lesion_id,split`. `label` holds the
//! symbolic class code and `split` stays empty until a split is assigned.
//! Preprocessed manifests append a `checksum` column.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{column, csv_writer, finish_csv, open_csv, row_number, write_atomic};
use crate::taxonomy::{ClassId, ClassMap};

pub const MANIFEST_HEADER: [&str; 6] = ["image_id", "path", "source", "label", "lesion_id", "split"];

const IMAGE_EXTENSIONS: [&str; 5] = ["jpg", "jpeg", "png", "bmp", "tif"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Source {
    #[serde(rename = "HAM10000")]
    Ham10000,
    #[serde(rename = "PH2")]
    Ph2,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Ham10000 => "HAM10000",
            Source::Ph2 => "PH2",
        })
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "HAM10000" => Ok(Source::Ham10000),
            "PH2" | "PH²" => Ok(Source::Ph2),
            _ => Err(Error::Invalid(format!("unknown source dataset `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Split {
    #[serde(rename = "TRAIN")]
    Train,
    #[serde(rename = "VAL")]
    Val,
    #[serde(rename = "TEST")]
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "TRAIN",
            Split::Val => "VAL",
            Split::Test => "TEST",
        })
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TRAIN" => Ok(Split::Train),
            "VAL" => Ok(Split::Val),
            "TEST" => Ok(Split::Test),
            _ => Err(Error::Invalid(format!("unknown split `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRecord {
    pub image_id: String,
    pub path: PathBuf,
    pub source: Source,
    pub label: ClassId,
    pub lesion_id: Option<String>,
    pub split: Option<Split>,
    /// Present only on preprocessed manifests.
    pub checksum: Option<String>,
}

impl ManifestRecord {
    pub fn new(image_id: impl Into<String>, path: impl Into<PathBuf>, source: Source, label: ClassId) -> Self {
        ManifestRecord {
            image_id: image_id.into(),
            path: path.into(),
            source,
            label,
            lesion_id: None,
            split: None,
            checksum: None,
        }
    }

    pub fn with_lesion(mut self, lesion_id: impl Into<String>) -> Self {
        self.lesion_id = Some(lesion_id.into());
        self
    }
}

/// An ordered list of records with unique image ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    records: Vec<ManifestRecord>,
}

impl Manifest {
    /// Builds a manifest, rejecting duplicate ids and PH² records whose
    /// label is outside {MEL, NV, ATYP_NV}.
    pub fn new(records: Vec<ManifestRecord>) -> Result<Self> {
        let dups = duplicate_ids(records.iter().map(|r| r.image_id.as_str()));
        if !dups.is_empty() {
            return Err(Error::DuplicateIds(dups));
        }
        if let Some(r) = records
            .iter()
            .find(|r| r.source == Source::Ph2 && !matches!(r.label, ClassId::Mel | ClassId::AtypNv | ClassId::Nv))
        {
            return Err(Error::Invalid(format!(
                "PH2 record `{}` carries label {} which PH2 does not provide",
                r.image_id, r.label
            )));
        }
        Ok(Manifest { records })
    }

    pub fn records(&self) -> &[ManifestRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<ManifestRecord> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ManifestRecord> {
        self.records.iter()
    }

    fn has_checksums(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.checksum.is_some())
    }

    pub fn to_csv_bytes(&self) -> Vec<u8> {
        let with_checksum = self.has_checksums();
        let mut w = csv_writer();
        let mut header: Vec<&str> = MANIFEST_HEADER.to_vec();
        if with_checksum {
            header.push("checksum");
        }
        w.write_record(&header).expect("in-memory write");
        for r in &self.records {
            let path = r.path.to_string_lossy();
            let source = r.source.to_string();
            let split = r.split.map(|s| s.to_string()).unwrap_or_default();
            let mut row = vec![
                r.image_id.as_str(),
                path.as_ref(),
                source.as_str(),
                r.label.code(),
                r.lesion_id.as_deref().unwrap_or(""),
                split.as_str(),
            ];
            if with_checksum {
                row.push(r.checksum.as_deref().unwrap_or(""));
            }
            w.write_record(&row).expect("in-memory write");
        }
        finish_csv(w)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_csv_bytes())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = path.display().to_string();
        let mut rdr = open_csv(path)?;
        let headers = rdr.headers().map_err(|e| Error::csv(&file, e))?.clone();
        let col = |name| column(&headers, name, &file);
        let (c_id, c_path, c_src, c_label, c_lesion, c_split) = (
            col("image_id")?,
            col("path")?,
            col("source")?,
            col("label")?,
            col("lesion_id")?,
            col("split")?,
        );
        let c_sum = column(&headers, "checksum", &file).ok();

        let mut records = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::csv(&file, e))?;
            let row = row_number(&rec);
            let field = |i: usize| rec.get(i).unwrap_or("");
            let bad = |msg: String| Error::row(&file, row, msg);
            let image_id = field(c_id);
            if image_id.is_empty() {
                return Err(bad("empty image_id".into()));
            }
            let label = field(c_label).parse::<ClassId>().map_err(|e| bad(e.to_string()))?;
            let source = field(c_src).parse::<Source>().map_err(|e| bad(e.to_string()))?;
            let split = match field(c_split) {
                "" => None,
                s => Some(s.parse::<Split>().map_err(|e| bad(e.to_string()))?),
            };
            let opt = |s: &str| (!s.is_empty()).then(|| s.to_string());
            records.push(ManifestRecord {
                image_id: image_id.to_string(),
                path: PathBuf::from(field(c_path)),
                source,
                label,
                lesion_id: opt(field(c_lesion)),
                split,
                checksum: c_sum.and_then(|i| opt(field(i))),
            });
        }
        Manifest::new(records)
    }
}

impl<'a> IntoIterator for &'a Manifest {
    type Item = &'a ManifestRecord;
    type IntoIter = std::slice::Iter<'a, ManifestRecord>;

    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

fn duplicate_ids<'a>(ids: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut dups: Vec<String> = ids.filter(|id| !seen.insert(*id)).map(str::to_string).collect();
    dups.sort();
    dups.dedup();
    dups
}

/// What to do when a listed image has no file on disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingImagePolicy {
    #[default]
    Error,
    /// Log a warning and leave the record out; the skipped id is reported.
    Skip,
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub missing_images: MissingImagePolicy,
}

#[derive(Debug, Clone, Default)]
pub struct IngestOutcome {
    pub records: Vec<ManifestRecord>,
    /// Image ids dropped because their file was missing.
    pub skipped_missing: Vec<String>,
    /// Rows not returned because their label was not selected.
    pub deselected: usize,
}

/// Maps file stems to paths for every image file under `dir`, down to
/// `depth` levels. The first path in file-name order wins on stem clashes.
fn index_images(dir: &Path, depth: usize) -> Result<HashMap<String, PathBuf>> {
    let mut index = HashMap::new();
    for entry in walkdir::WalkDir::new(dir).max_depth(depth).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(dir).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let path = entry.path();
        let is_image = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()));
        if !is_image {
            continue;
        }
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            index.entry(stem.to_string()).or_insert_with(|| path.to_path_buf());
        }
    }
    Ok(index)
}

fn resolve_image(
    index: &HashMap<String, PathBuf>,
    image_id: &str,
    dir: &Path,
    opts: &IngestOptions,
    skipped: &mut Vec<String>,
) -> Result<Option<PathBuf>> {
    match index.get(image_id) {
        Some(p) => Ok(Some(p.clone())),
        None => match opts.missing_images {
            MissingImagePolicy::Error => Err(Error::MissingImage {
                image_id: image_id.to_string(),
                dir: dir.to_path_buf(),
            }),
            MissingImagePolicy::Skip => {
                log::warn!("skipping `{image_id}`: no image file under {}", dir.display());
                skipped.push(image_id.to_string());
                Ok(None)
            }
        },
    }
}

/// Reads the HAM10000 metadata table (`lesion_id,image_id,dx,...`) and
/// resolves each image under `image_dir` (searched two levels deep, so the
/// two-part release layout works unchanged).
pub fn ingest_ham10000(metadata_file: &Path, image_dir: &Path, opts: &IngestOptions) -> Result<IngestOutcome> {
    let file = metadata_file.display().to_string();
    let mut rdr = open_csv(metadata_file)?;
    let headers = rdr.headers().map_err(|e| Error::csv(&file, e))?.clone();
    let c_id = column(&headers, "image_id", &file)?;
    let c_lesion = column(&headers, "lesion_id", &file)?;
    let c_dx = column(&headers, "dx", &file)?;

    let index = index_images(image_dir, 2)?;
    let mut out = IngestOutcome::default();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::csv(&file, e))?;
        let row = row_number(&rec);
        let image_id = rec.get(c_id).unwrap_or("");
        let lesion_id = rec.get(c_lesion).unwrap_or("");
        let dx = rec.get(c_dx).unwrap_or("");
        if image_id.is_empty() {
            return Err(Error::row(&file, row, "empty image_id"));
        }
        let label = ClassId::from_ham10000_code(dx)
            .ok_or_else(|| Error::row(&file, row, format!("unknown diagnosis code `{dx}` for `{image_id}`")))?;
        let Some(path) = resolve_image(&index, image_id, image_dir, opts, &mut out.skipped_missing)? else {
            continue;
        };
        let mut r = ManifestRecord::new(image_id, path, Source::Ham10000, label);
        if !lesion_id.is_empty() {
            r.lesion_id = Some(lesion_id.to_string());
        }
        out.records.push(r);
    }
    Ok(out)
}

/// The PH² selection used by default: atypical nevi and melanoma.
pub fn default_ph2_selection() -> HashSet<ClassId> {
    [ClassId::Mel, ClassId::AtypNv].into_iter().collect()
}

/// Reads the PH² index and keeps lesions whose mapped label is in
/// `selected`.
///
/// Two index layouts are accepted: a CSV with `image_name` and
/// `clinical_diagnosis` columns, or the `||`-delimited text table shipped
/// with the dataset (its `Name` and `Clinical Diagnosis` columns are used).
/// Images are looked up three levels under `image_dir`, which covers the
/// `IMDxxx/IMDxxx_Dermoscopic_Image/IMDxxx.bmp` release layout.
pub fn ingest_ph2(
    index_file: &Path,
    image_dir: &Path,
    selected: &HashSet<ClassId>,
    opts: &IngestOptions,
) -> Result<IngestOutcome> {
    let file = index_file.display().to_string();
    let text = std::fs::read_to_string(index_file).map_err(|e| Error::io(index_file, e))?;
    let rows = if text.trim_start().starts_with("||") {
        parse_ph2_pipe_table(&text, &file)?
    } else {
        parse_ph2_csv(index_file, &file)?
    };

    let index = index_images(image_dir, 3)?;
    let mut out = IngestOutcome::default();
    for (row, name, diagnosis) in rows {
        let label = ClassId::from_ph2_diagnosis(&diagnosis).ok_or_else(|| {
            Error::row(
                &file,
                row,
                format!("unmapped clinical diagnosis `{diagnosis}` for `{name}`"),
            )
        })?;
        if !selected.contains(&label) {
            out.deselected += 1;
            continue;
        }
        let Some(path) = resolve_image(&index, &name, image_dir, opts, &mut out.skipped_missing)? else {
            continue;
        };
        out.records
            .push(ManifestRecord::new(name.clone(), path, Source::Ph2, label).with_lesion(name));
    }
    Ok(out)
}

type Ph2Row = (u64, String, String);

fn parse_ph2_csv(path: &Path, file: &str) -> Result<Vec<Ph2Row>> {
    let mut rdr = open_csv(path)?;
    let headers = rdr.headers().map_err(|e| Error::csv(file, e))?.clone();
    let c_name = column(&headers, "image_name", file)?;
    let c_dx = column(&headers, "clinical_diagnosis", file)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::csv(file, e))?;
        let row = row_number(&rec);
        let name = rec.get(c_name).unwrap_or("");
        if name.is_empty() {
            return Err(Error::row(file, row, "empty image_name"));
        }
        rows.push((row, name.to_string(), rec.get(c_dx).unwrap_or("").to_string()));
    }
    Ok(rows)
}

fn parse_ph2_pipe_table(text: &str, file: &str) -> Result<Vec<Ph2Row>> {
    let split_cells = |line: &str| -> Vec<String> {
        line.trim()
            .trim_start_matches("||")
            .trim_end_matches("||")
            .split("||")
            .map(|c| c.trim().to_string())
            .collect()
    };
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| l.trim_start().starts_with("||"));
    let (_, header) = lines.next().ok_or_else(|| Error::row(file, 1, "missing header row"))?;
    let header = split_cells(header);
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::row(file, 1, format!("missing column `{name}`")))
    };
    let c_name = find("Name")?;
    let c_dx = find("Clinical Diagnosis")?;

    let mut rows = Vec::new();
    for (i, line) in lines {
        let row = i as u64 + 1;
        let cells = split_cells(line);
        let (Some(name), Some(dx)) = (cells.get(c_name), cells.get(c_dx)) else {
            return Err(Error::row(
                file,
                row,
                format!("expected at least {} cells", c_name.max(c_dx) + 1),
            ));
        };
        if name.is_empty() {
            return Err(Error::row(file, row, "empty image name"));
        }
        rows.push((row, name.clone(), dx.clone()));
    }
    Ok(rows)
}

/// Concatenates two record lists. Colliding image ids are an error; ids are
/// never rewritten to make them unique.
pub fn merge_manifests(a: Vec<ManifestRecord>, b: Vec<ManifestRecord>) -> Result<Manifest> {
    let mut records = a;
    records.extend(b);
    Manifest::new(records)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DatasetSummary {
    pub per_class_counts: ClassMap<usize>,
    pub total: usize,
}

pub fn summarize<'a>(records: impl IntoIterator<Item = &'a ManifestRecord>) -> DatasetSummary {
    let mut s = DatasetSummary::default();
    for r in records {
        s.per_class_counts[r.label] += 1;
        s.total += 1;
    }
    s
}

impl fmt::Display for DatasetSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, n) in self.per_class_counts.iter() {
            writeln!(f, "{:<8} {n:>6}", c.code())?;
        }
        write!(f, "{:<8} {:>6}", "total", self.total)
    }
}
