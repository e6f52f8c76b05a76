use crate::assignment::solve_assignment;
use crate::error::Result;

use super::captions::CaptionBlock;
use super::nms::Detection;

#[derive(Debug, Clone, PartialEq)]
pub struct FigureCaptionPair {
    pub figure: Detection,
    pub caption: CaptionBlock,
    pub center_distance: f64,
}

/// Pairs figures with captions so that the total distance between box
/// centers is minimal; returns `min(figures, captions)` pairs in figure
/// order.
pub fn pair_figures_captions(figures: &[Detection], captions: &[CaptionBlock]) -> Result<Vec<FigureCaptionPair>> {
    let cost: Vec<Vec<f64>> = figures
        .iter()
        .map(|f| {
            let fc = f.bbox.center();
            captions.iter().map(|c| fc.distance(&c.bbox.center())).collect()
        })
        .collect();
    if figures.is_empty() || captions.is_empty() {
        return Ok(Vec::new());
    }
    let assignment = solve_assignment(&cost)?;
    Ok(assignment
        .pairs
        .into_iter()
        .map(|(f, c)| FigureCaptionPair {
            figure: figures[f],
            caption: captions[c].clone(),
            center_distance: cost[f][c],
        })
        .collect())
}
