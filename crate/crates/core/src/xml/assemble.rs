use crate::detection::caption_name;
use crate::geometry::BBox;
use crate::records::{InducedLabel, Kind, Provenance};

use super::template::MIN_TEMPLATE_SCORE;

/// A figure or table placed on a page by the XML route.
#[derive(Debug, Clone, PartialEq)]
pub struct LocatedItem {
    pub kind: Kind,
    pub page_index: usize,
    pub figure_box: BBox,
    pub caption_box: Option<BBox>,
    pub caption_text: String,
    /// Template-matching score for items located from an image file.
    pub template_score: Option<f64>,
}

/// Why a paper produced no labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    CaptionNotFound,
    TemplateScore,
}

impl SkipReason {
    pub fn as_str(self) -> &'static str {
        match self {
            SkipReason::CaptionNotFound => "caption-not-found",
            SkipReason::TemplateScore => "template-score",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct XmlOutcome {
    pub labels: Vec<InducedLabel>,
    pub skip: Option<SkipReason>,
}

/// Packages located items as label records. A single figure match scoring
/// below 0.8 drops the whole paper.
///
/// `pages` holds `(width, height)` of each page raster.
pub fn assemble_xml_labels(paper_id: &str, items: &[LocatedItem], pages: &[(u32, u32)], dpi: u32) -> XmlOutcome {
    if items
        .iter()
        .any(|it| it.template_score.is_some_and(|s| s < MIN_TEMPLATE_SCORE))
    {
        return XmlOutcome {
            labels: Vec::new(),
            skip: Some(SkipReason::TemplateScore),
        };
    }
    let labels = items
        .iter()
        .map(|it| {
            let (page_width, page_height) = pages.get(it.page_index).copied().unwrap_or((0, 0));
            InducedLabel {
                paper_id: paper_id.to_string(),
                page: it.page_index,
                kind: it.kind,
                figure_box: it.figure_box,
                caption_box: it.caption_box,
                caption_text: Some(it.caption_text.clone()),
                name: caption_name(&it.caption_text),
                dpi,
                page_width,
                page_height,
                provenance: Provenance::Xml,
                score: it.template_score,
            }
        })
        .collect();
    XmlOutcome { labels, skip: None }
}
