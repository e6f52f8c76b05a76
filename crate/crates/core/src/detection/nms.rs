use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{iou, BBox};

pub const DEFAULT_CONFIDENCE: f64 = 0.5;
pub const DEFAULT_NMS_IOU: f64 = 0.5;

/// One grid cell's box and confidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPrediction {
    pub row: usize,
    pub col: usize,
    pub bbox: BBox,
    pub confidence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub bbox: BBox,
    pub confidence: f64,
}

/// Descending confidence, then larger area, then top-most, then left-most.
fn rank(a: &Detection, b: &Detection) -> Ordering {
    b.confidence
        .total_cmp(&a.confidence)
        .then_with(|| b.bbox.area().total_cmp(&a.bbox.area()))
        .then_with(|| a.bbox.y1.total_cmp(&b.bbox.y1))
        .then_with(|| a.bbox.x1.total_cmp(&b.bbox.x1))
}

/// Keeps predictions with confidence strictly above `threshold`, ordered by
/// descending confidence.
pub fn threshold_detections(preds: &[GridPrediction], threshold: f64) -> Result<Vec<Detection>> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidThreshold(threshold));
    }
    let mut kept: Vec<Detection> = preds
        .iter()
        .filter(|p| p.confidence > threshold)
        .map(|p| Detection {
            bbox: p.bbox,
            confidence: p.confidence,
        })
        .collect();
    kept.sort_by(|a, b| b.confidence.total_cmp(&a.confidence));
    Ok(kept)
}

/// Greedy non-maximum suppression: repeatedly keep the best remaining
/// detection and drop every remaining one overlapping it with
/// IOU ≥ `iou_threshold`.
pub fn nms(dets: &[Detection], iou_threshold: f64) -> Vec<Detection> {
    let mut order: Vec<Detection> = dets.to_vec();
    order.sort_by(rank);
    let mut keep: Vec<Detection> = Vec::new();
    for d in order {
        if keep.iter().all(|k| iou(&k.bbox, &d.bbox) < iou_threshold) {
            keep.push(d);
        }
    }
    keep
}
