//! Post-processing of detector-backend outputs.
//!
//! A backend (any network run over the page image) writes one JSON array of
//! grid-cell predictions per page. Those are thresholded, de-duplicated by
//! non-maximum suppression and paired with caption paragraphs found by a
//! header pattern, minimizing the total distance between box centers.

mod captions;
mod nms;
mod pairing;

pub use captions::{caption_header, caption_name, detect_caption_blocks, CaptionBlock, Paragraph};
pub use nms::{nms, threshold_detections, Detection, GridPrediction, DEFAULT_CONFIDENCE, DEFAULT_NMS_IOU};
pub use pairing::{pair_figures_captions, FigureCaptionPair};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::BBox;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPrediction {
    row: i64,
    col: i64,
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    confidence: f64,
}

/// Parses a backend predictions file: a JSON array of
/// `{row, col, x1, y1, x2, y2, confidence}`.
pub fn parse_predictions(text: &str) -> Result<Vec<GridPrediction>> {
    let raw: Vec<RawPrediction> =
        serde_json::from_str(text).map_err(|e| Error::parse("backend predictions", &e))?;
    raw.into_iter()
        .enumerate()
        .map(|(i, p)| {
            if p.row < 0 || p.col < 0 {
                return Err(Error::Schema(format!("prediction {i}: negative grid index")));
            }
            if !(0.0..=1.0).contains(&p.confidence) {
                return Err(Error::Schema(format!(
                    "prediction {i}: confidence {} outside [0, 1]",
                    p.confidence
                )));
            }
            let bbox = BBox::new(p.x1, p.y1, p.x2, p.y2)
                .map_err(|e| Error::Schema(format!("prediction {i}: {e}")))?;
            Ok(GridPrediction {
                row: p.row as usize,
                col: p.col as usize,
                bbox,
                confidence: p.confidence,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageParams {
    pub confidence_threshold: f64,
    pub nms_iou: f64,
}

impl Default for PageParams {
    fn default() -> Self {
        Self {
            confidence_threshold: DEFAULT_CONFIDENCE,
            nms_iou: DEFAULT_NMS_IOU,
        }
    }
}

/// Threshold, suppress, find captions and pair them for one page.
pub fn run_page(backend_json: &str, paragraphs: &[Paragraph], params: &PageParams) -> Result<Vec<FigureCaptionPair>> {
    let preds = parse_predictions(backend_json)?;
    let kept = threshold_detections(&preds, params.confidence_threshold)?;
    let figures = nms(&kept, params.nms_iou);
    let captions = detect_caption_blocks(paragraphs);
    pair_figures_captions(&figures, &captions)
}
