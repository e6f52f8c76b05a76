use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::geometry::BBox;
use crate::records::Kind;

/// A paragraph of page text with its box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Paragraph {
    pub text: String,
    pub page: usize,
    pub bbox: BBox,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaptionBlock {
    pub kind: Kind,
    /// Number as written, e.g. `"3"` or `"IV"`.
    pub number: String,
    pub text: String,
    pub bbox: BBox,
}

/// Paragraph-initial caption header, case-insensitive:
/// `figure | fig. | fig | table`, optional whitespace, a decimal or roman
/// number, then `.`, `:`, whitespace or the end of the text.
fn header() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?i)^(figure|fig\.|fig|table)\s*([0-9]+|m{0,4}(?:cm|cd|d?c{0,3})(?:xc|xl|l?x{0,3})(?:ix|iv|v?i{0,3}))(?:[.:]|\s|$)",
        )
        .unwrap()
    })
}

/// Kind and number of a caption header at the start of `text`.
pub fn caption_header(text: &str) -> Option<(Kind, String)> {
    let caps = header().captures(text.trim_start())?;
    let number = caps.get(2)?.as_str();
    if number.is_empty() {
        return None;
    }
    let kind = if caps[1].to_ascii_lowercase().starts_with("fig") {
        Kind::Figure
    } else {
        Kind::Table
    };
    Some((kind, number.to_string()))
}

/// Canonical name such as `"Figure 3"` for a caption text.
pub fn caption_name(text: &str) -> Option<String> {
    caption_header(text).map(|(kind, number)| match kind {
        Kind::Figure => format!("Figure {number}"),
        Kind::Table => format!("Table {number}"),
    })
}

/// One caption block per paragraph that opens with a caption header.
pub fn detect_caption_blocks(paragraphs: &[Paragraph]) -> Vec<CaptionBlock> {
    paragraphs
        .iter()
        .filter_map(|p| {
            let (kind, number) = caption_header(&p.text)?;
            Some(CaptionBlock {
                kind,
                number,
                text: p.text.trim_start().to_string(),
                bbox: p.bbox,
            })
        })
        .collect()
}
