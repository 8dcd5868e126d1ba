use std::path::PathBuf;

use crate::taxonomy::ClassId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Csv {
        context: String,
        #[source]
        source: csv::Error,
    },

    /// A row of an input table failed validation. `row` is 1-based and counts
    /// the header as row 1, so it matches what an editor shows.
    #[error("{file}: row {row}: {message}")]
    InvalidRow { file: String, row: u64, message: String },

    #[error("unknown class label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate image ids: {}", .0.join(", "))]
    DuplicateIds(Vec<String>),

    #[error("image file for `{image_id}` not found under {}", dir.display())]
    MissingImage { image_id: String, dir: PathBuf },

    #[error("image `{image_id}` could not be decoded: {source}")]
    Decode {
        image_id: String,
        #[source]
        source: image::ImageError,
    },

    #[error("image has a zero dimension ({width}x{height})")]
    ZeroDimension { width: u32, height: u32 },

    #[error("invalid split specification: {0}")]
    InvalidSplitSpec(String),

    #[error("{0} record(s) have no split assigned")]
    Unassigned(usize),

    #[error("AUC undefined for class {class}: {positives} positive and {negatives} negative sample(s)")]
    AucUndefined {
        class: ClassId,
        positives: usize,
        negatives: usize,
    },

    #[error("no class qualifies for {0}")]
    NothingToAverage(&'static str),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(context: impl Into<String>, source: csv::Error) -> Self {
        Error::Csv {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn row(file: impl Into<String>, row: u64, message: impl Into<String>) -> Self {
        Error::InvalidRow {
            file: file.into(),
            row,
            message: message.into(),
        }
    }

    /// True when the failure came from the filesystem rather than from the
    /// content of an input.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::Csv { source, .. } => source.is_io_error(),
            Error::Decode { source, .. } => matches!(source, image::ImageError::IoError(_)),
            _ => false,
        }
    }

    /// Process exit code: 1 for validation failures, 2 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        if self.is_io() {
            2
        } else {
            1
        }
    }
}
