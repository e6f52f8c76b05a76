//! Label induction for LaTeX sources.
//!
//! The main file is recompiled with framed floats (red for figures, yellow
//! for tables) and colored captions (green names, blue text). Diffing the
//! rasterized pages of the two builds leaves only the frames and captions,
//! which are then located as connected components and assembled into
//! labels with the caption carved out of each float.

mod assemble;
mod carve;
mod components;
mod preamble;
mod raster;

pub use assemble::{assemble_labels, group_captions, CaptionGroup};
pub use carve::carve_caption;
pub use components::{
    extract_components, min_component_size, ColorClass, DiffComponent, COLOR_TOLERANCE,
};
pub use preamble::{inject_preamble, PREAMBLE_BLOCK};
pub use raster::{diff_pages, Mask, PageRaster, DEFAULT_DPI, DIFF_TOLERANCE};
