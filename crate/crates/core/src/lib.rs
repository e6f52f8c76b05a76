//! Figure and table bounding-box labels for scientific documents.
//!
//! The crate covers three stages:
//!
//! * label induction from markup-derived evidence, either by diffing page
//!   renders of a LaTeX document against a recompiled version with framed
//!   floats and colored captions ([`latex`]), or by aligning publisher XML
//!   captions, figure images and table cells with the PDF text layer and
//!   page raster ([`xml`]);
//! * post-processing of detector-backend grid predictions into figure and
//!   caption pairs ([`detection`]);
//! * evaluation of predicted boxes against ground truth at IOU 0.8
//!   ([`evaluation`]).
//!
//! Records move between stages as JSON lines ([`records`]); [`pipeline`]
//! holds the batch commands behind the `figlabel` binary.

pub mod assignment;
pub mod detection;
pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod latex;
pub mod pipeline;
pub mod records;
pub mod stats;
pub mod xml;

pub use assignment::{solve_assignment, Assignment};
pub use error::{Error, Result};
pub use geometry::{center, enclosing_box, iou, BBox, Point};
pub use records::{InducedLabel, Kind, Provenance};
