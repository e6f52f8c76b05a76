//! Label induction from publisher XML auxiliary data.
//!
//! Captions are found in the PDF text layer by approximate substring
//! matching, figures on the page raster by multi-scale template matching,
//! and tables by a bag-of-words interval search over the page tokens.

mod assemble;
mod bow;
mod fuzzy;
mod locate;
mod template;

pub use assemble::{assemble_xml_labels, LocatedItem, SkipReason, XmlOutcome};
pub use bow::{bag_of_words_interval, IntervalMatch};
pub use fuzzy::{fuzzy_substring, levenshtein, FuzzyMatch};
pub use locate::{
    locate_caption, locate_caption_page, locate_table, normalize_token, tokenize, CaptionLocation,
    PageText, TableLocation, TextToken, MAX_CAPTION_DISTANCE,
};
pub use template::{
    accept_figure_match, match_template_multiscale, resize, scale_grid, LumaRaster, TemplateMatch,
    MIN_TEMPLATE_SCORE, SCALE_COUNT, SCALE_MAX, SCALE_MIN,
};
