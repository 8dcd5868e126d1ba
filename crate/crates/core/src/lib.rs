//! Evaluation harness for 8-class dermoscopy lesion classifiers.
//!
//! The pipeline, module by module:
//!
//! - [`taxonomy`]: the eight classes and their fixed order.
//! - [`dataset`]: HAM10000 and PH² ingestion, manifest files, class tallies.
//! - [`split`]: seeded, stratified 70/15/15 partitioning.
//! - [`preprocess`]: bit-exact bilinear resizing to 299×299 or 224×224.
//! - [`metrics`]: confusion matrices, precision/recall/F1, ROC/AUC with
//!   micro and macro averaging, reader operating points.
//! - [`report`]: result tables, ROC point files and SVG plots.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory; the
//! `dermbench` binary exposes the same operations on the command line.

pub mod dataset;
pub mod error;
pub mod io;
pub mod metrics;
pub mod preprocess;
pub mod report;
pub mod split;
pub mod taxonomy;

pub use error::{Error, Result};
pub use taxonomy::{ClassId, ClassMap, NUM_CLASSES};
