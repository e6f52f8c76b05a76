use std::collections::VecDeque;

use crate::geometry::BBox;

use super::raster::{Mask, PageRaster};

/// Largest Euclidean RGB distance between a component's mean color and its
/// reference color.
pub const COLOR_TOLERANCE: f64 = 120.0;

const MIN_COMPONENT_PIXELS_AT_100_DPI: f64 = 20.0;

/// Diff colors produced by the injected preamble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorClass {
    /// Red figure frame.
    FigureFrame,
    /// Yellow table frame.
    TableFrame,
    /// Green caption label ("Figure 1:").
    FigureName,
    /// Blue caption body.
    CaptionText,
}

impl ColorClass {
    pub const ALL: [ColorClass; 4] = [
        ColorClass::FigureFrame,
        ColorClass::TableFrame,
        ColorClass::FigureName,
        ColorClass::CaptionText,
    ];

    pub fn reference(self) -> [u8; 3] {
        match self {
            ColorClass::FigureFrame => [255, 0, 0],
            ColorClass::TableFrame => [255, 255, 0],
            ColorClass::FigureName => [0, 255, 0],
            ColorClass::CaptionText => [0, 0, 255],
        }
    }

    pub fn is_frame(self) -> bool {
        matches!(self, ColorClass::FigureFrame | ColorClass::TableFrame)
    }

    /// Nearest reference color, or `None` beyond [`COLOR_TOLERANCE`].
    pub fn classify(mean: [f64; 3]) -> Option<ColorClass> {
        ColorClass::ALL
            .iter()
            .map(|&c| {
                let r = c.reference();
                let d = (0..3)
                    .map(|i| (mean[i] - f64::from(r[i])).powi(2))
                    .sum::<f64>()
                    .sqrt();
                (c, d)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .filter(|&(_, d)| d <= COLOR_TOLERANCE)
            .map(|(c, _)| c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffComponent {
    /// Pixel extent: `x2`/`y2` are one past the last member pixel.
    pub bbox: BBox,
    pub color_class: ColorClass,
    pub pixel_count: usize,
}

/// Minimum component size at `dpi`: 20 pixels at 100 dpi, scaled with dpi².
pub fn min_component_size(dpi: u32) -> usize {
    let scale = f64::from(dpi) / 100.0;
    (MIN_COMPONENT_PIXELS_AT_100_DPI * scale * scale).ceil().max(1.0) as usize
}

const NEIGHBORS: [(i64, i64); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// Labels 8-connected regions of the mask and classifies each by the mean
/// color of its pixels on the modified page. Components are returned in
/// raster order of their first pixel.
pub fn extract_components(mask: &Mask, modified: &PageRaster) -> Vec<DiffComponent> {
    assert_eq!(
        (mask.width, mask.height),
        (modified.width(), modified.height()),
        "mask and page dimensions differ"
    );
    let (w, h) = (mask.width as i64, mask.height as i64);
    let min_size = min_component_size(modified.dpi);
    let mut seen = vec![false; mask.bits.len()];
    let mut queue = VecDeque::new();
    let mut out = Vec::new();

    for start in 0..mask.bits.len() {
        if !mask.bits[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let (mut x1, mut y1, mut x2, mut y2) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
        let mut sum = [0u64; 3];
        let mut count = 0usize;
        while let Some(idx) = queue.pop_front() {
            let (x, y) = (idx as i64 % w, idx as i64 / w);
            x1 = x1.min(x);
            y1 = y1.min(y);
            x2 = x2.max(x);
            y2 = y2.max(y);
            let px = modified.image.get_pixel(x as u32, y as u32).0;
            for c in 0..3 {
                sum[c] += u64::from(px[c]);
            }
            count += 1;
            for (dx, dy) in NEIGHBORS {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w || ny >= h {
                    continue;
                }
                let n = (ny * w + nx) as usize;
                if mask.bits[n] && !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
        if count < min_size {
            continue;
        }
        let mean = sum.map(|s| s as f64 / count as f64);
        let Some(color_class) = ColorClass::classify(mean) else {
            continue;
        };
        out.push(DiffComponent {
            bbox: BBox {
                x1: x1 as f64,
                y1: y1 as f64,
                x2: (x2 + 1) as f64,
                y2: (y2 + 1) as f64,
            },
            color_class,
            pixel_count: count,
        });
    }
    out
}
