use crate::assignment::solve_assignment;
use crate::geometry::{enclosing_box, BBox};
use crate::records::{InducedLabel, Kind, Provenance};

use super::carve::carve_caption;
use super::components::{ColorClass, DiffComponent};
use super::raster::PageRaster;

/// Fraction of the page height within which caption pieces are merged.
const CAPTION_MERGE_FRACTION: f64 = 0.02;

/// Caption pieces (green label and blue text) that belong together.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptionGroup {
    pub members: Vec<BBox>,
    pub bbox: BBox,
}

fn gap(a1: f64, a2: f64, b1: f64, b2: f64) -> f64 {
    (a1.max(b1) - a2.min(b2)).max(0.0)
}

/// Merges caption components whose boxes lie within `0.02 * page_height`
/// of each other on both axes (overlap counts as zero gap), transitively.
pub fn group_captions(components: &[DiffComponent], page_height: f64) -> Vec<CaptionGroup> {
    let boxes: Vec<BBox> = components
        .iter()
        .filter(|c| !c.color_class.is_frame())
        .map(|c| c.bbox)
        .collect();
    let tol = CAPTION_MERGE_FRACTION * page_height;
    let mut parent: Vec<usize> = (0..boxes.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..boxes.len() {
        for j in (i + 1)..boxes.len() {
            let (a, b) = (&boxes[i], &boxes[j]);
            if gap(a.y1, a.y2, b.y1, b.y2) <= tol && gap(a.x1, a.x2, b.x1, b.x2) <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<BBox>)> = Vec::new();
    for (i, b) in boxes.iter().enumerate() {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(*b),
            None => groups.push((root, vec![*b])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let bbox = enclosing_box(&members).expect("group is nonempty");
            CaptionGroup { members, bbox }
        })
        .collect()
}

/// Turns one page's diff components into labels.
///
/// Frames become figures (red) or tables (yellow). Caption groups are
/// paired with frames by minimum total center distance; a group may only
/// pair with a frame it overlaps. Each paired frame has its caption carved
/// out; unpaired frames keep their full extent and no caption.
pub fn assemble_labels(
    paper_id: &str,
    page_index: usize,
    components: &[DiffComponent],
    page: &PageRaster,
) -> Vec<InducedLabel> {
    let mut frames: Vec<&DiffComponent> = components.iter().filter(|c| c.color_class.is_frame()).collect();
    frames.sort_by(|a, b| {
        (a.bbox.y1, a.bbox.x1)
            .partial_cmp(&(b.bbox.y1, b.bbox.x1))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let groups = group_captions(components, f64::from(page.height()));

    let mut assigned: Vec<Option<&CaptionGroup>> = vec![None; frames.len()];
    if !frames.is_empty() && !groups.is_empty() {
        let forbidden = 1e9;
        let cost: Vec<Vec<f64>> = frames
            .iter()
            .map(|f| {
                groups
                    .iter()
                    .map(|g| {
                        if f.bbox.intersection(&g.bbox).is_some() {
                            f.bbox.center().distance(&g.bbox.center())
                        } else {
                            forbidden
                        }
                    })
                    .collect()
            })
            .collect();
        let assignment = solve_assignment(&cost).expect("distances are finite");
        for (fi, gi) in assignment.pairs {
            if cost[fi][gi] < forbidden {
                assigned[fi] = Some(&groups[gi]);
            }
        }
    }

    frames
        .iter()
        .zip(assigned)
        .map(|(frame, group)| {
            let kind = match frame.color_class {
                ColorClass::TableFrame => Kind::Table,
                _ => Kind::Figure,
            };
            let (figure_box, caption_box) = match group {
                Some(g) => match carve_caption(&frame.bbox, &g.members) {
                    Ok(carved) => (carved, g.bbox.intersection(&frame.bbox)),
                    Err(_) => (frame.bbox, None),
                },
                None => (frame.bbox, None),
            };
            InducedLabel {
                paper_id: paper_id.to_string(),
                page: page_index,
                kind,
                figure_box,
                caption_box,
                caption_text: None,
                name: None,
                dpi: page.dpi,
                page_width: page.width(),
                page_height: page.height(),
                provenance: Provenance::Latex,
                score: None,
            }
        })
        .collect()
}
