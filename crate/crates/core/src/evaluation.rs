//! Scoring predicted boxes against ground truth.
//!
//! On every page and for each kind separately, predictions are matched to
//! true boxes by an optimal assignment; a match counts when its IOU is
//! strictly above the threshold (0.8 by default).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::assignment::solve_assignment;
use crate::geometry::{iou, BBox};
use crate::records::{InducedLabel, Kind};

pub const DEFAULT_EVAL_IOU: f64 = 0.8;

/// Cost of a pair that cannot count as a match. Any real cost is at most
/// 1, so the solver trades at most one feasible match for another as long
/// as fewer than 50 pairs are assigned on a page.
pub const INFEASIBLE_COST: f64 = 10.0;

/// Optimal one-to-one matching of `preds` to `truths`; returns
/// `(pred, truth)` index pairs whose IOU exceeds `iou_threshold`, in
/// prediction order.
pub fn match_page(preds: &[BBox], truths: &[BBox], iou_threshold: f64) -> Vec<(usize, usize)> {
    if preds.is_empty() || truths.is_empty() {
        return Vec::new();
    }
    let ious: Vec<Vec<f64>> = preds
        .iter()
        .map(|p| truths.iter().map(|t| iou(p, t)).collect())
        .collect();
    let cost: Vec<Vec<f64>> = ious
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| if v > iou_threshold { 1.0 - v } else { INFEASIBLE_COST })
                .collect()
        })
        .collect();
    let assignment = solve_assignment(&cost).expect("finite rectangular cost matrix");
    assignment
        .pairs
        .into_iter()
        .filter(|&(p, t)| ious[p][t] > iou_threshold)
        .collect()
}

/// Lowercases, collapses whitespace runs and strips punctuation at both
/// ends.
pub fn normalize_caption_text(text: &str) -> String {
    let lowered = text.to_lowercase();
    let collapsed = lowered.split_whitespace().collect::<Vec<_>>().join(" ");
    collapsed
        .trim_matches(|c: char| c.is_ascii_punctuation() || c.is_whitespace())
        .to_string()
}

/// A predicted caption is correct when its box overlaps the true one with
/// IOU above 0.8 or its normalized text equals the true text.
pub fn caption_correct(pred_box: &BBox, pred_text: Option<&str>, truth_box: &BBox, truth_text: Option<&str>) -> bool {
    if iou(pred_box, truth_box) > DEFAULT_EVAL_IOU {
        return true;
    }
    match (pred_text, truth_text) {
        (Some(p), Some(t)) => normalize_caption_text(p) == normalize_caption_text(t),
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

impl Counts {
    pub fn add(&mut self, other: Counts) {
        self.true_positives += other.true_positives;
        self.false_positives += other.false_positives;
        self.false_negatives += other.false_negatives;
    }

    pub fn precision(&self) -> f64 {
        ratio(self.true_positives, self.true_positives + self.false_positives)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.true_positives, self.true_positives + self.false_negatives)
    }

    pub fn f1(&self) -> f64 {
        let p = self.precision();
        let r = self.recall();
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CaptionCounts {
    /// Matched boxes whose true record carries a caption.
    pub evaluated: usize,
    pub correct: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalReport {
    pub figure: Counts,
    pub table: Counts,
    pub captions: CaptionCounts,
}

impl EvalReport {
    pub fn kind(&self, kind: Kind) -> Counts {
        match kind {
            Kind::Figure => self.figure,
            Kind::Table => self.table,
        }
    }

    pub fn pooled(&self) -> Counts {
        let mut c = self.figure;
        c.add(self.table);
        c
    }

    pub fn to_json(&self) -> String {
        let block = |c: &Counts| {
            format!(
                "{{\"true_positives\":{},\"false_positives\":{},\"false_negatives\":{},\"precision\":{:.6},\"recall\":{:.6},\"f1\":{:.6}}}",
                c.true_positives,
                c.false_positives,
                c.false_negatives,
                c.precision(),
                c.recall(),
                c.f1()
            )
        };
        format!(
            "{{\"figure\":{},\"table\":{},\"pooled\":{},\"captions\":{{\"evaluated\":{},\"correct\":{},\"accuracy\":{:.6}}}}}\n",
            block(&self.figure),
            block(&self.table),
            block(&self.pooled()),
            self.captions.evaluated,
            self.captions.correct,
            ratio(self.captions.correct, self.captions.evaluated)
        )
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<8}  {:>6}  {:>6}  {:>6}  {:>9}  {:>6}  {:>6}",
            "kind", "tp", "fp", "fn", "precision", "recall", "f1"
        );
        for (name, c) in [("figure", self.figure), ("table", self.table), ("pooled", self.pooled())] {
            let _ = writeln!(
                s,
                "{:<8}  {:>6}  {:>6}  {:>6}  {:>9.4}  {:>6.4}  {:>6.4}",
                name,
                c.true_positives,
                c.false_positives,
                c.false_negatives,
                c.precision(),
                c.recall(),
                c.f1()
            );
        }
        let _ = writeln!(
            s,
            "captions  {}/{} correct",
            self.captions.correct, self.captions.evaluated
        );
        s
    }
}

type PageKey<'a> = (&'a str, usize, Kind);

fn group(records: &[InducedLabel]) -> BTreeMap<PageKey<'_>, Vec<&InducedLabel>> {
    let mut pages: BTreeMap<PageKey<'_>, Vec<&InducedLabel>> = BTreeMap::new();
    for r in records {
        pages.entry((r.paper_id.as_str(), r.page, r.kind)).or_default().push(r);
    }
    pages
}

/// Matches every (paper, page, kind) group and accumulates the counts.
pub fn score_corpus(preds: &[InducedLabel], truths: &[InducedLabel], iou_threshold: f64) -> EvalReport {
    let pred_pages = group(preds);
    let truth_pages = group(truths);
    let mut keys: Vec<PageKey<'_>> = pred_pages.keys().chain(truth_pages.keys()).copied().collect();
    keys.sort();
    keys.dedup();

    let mut report = EvalReport::default();
    for key in keys {
        let p = pred_pages.get(&key).map(Vec::as_slice).unwrap_or(&[]);
        let t = truth_pages.get(&key).map(Vec::as_slice).unwrap_or(&[]);
        let pb: Vec<BBox> = p.iter().map(|r| r.figure_box).collect();
        let tb: Vec<BBox> = t.iter().map(|r| r.figure_box).collect();
        let matches = match_page(&pb, &tb, iou_threshold);
        let counts = Counts {
            true_positives: matches.len(),
            false_positives: p.len() - matches.len(),
            false_negatives: t.len() - matches.len(),
        };
        match key.2 {
            Kind::Figure => report.figure.add(counts),
            Kind::Table => report.table.add(counts),
        }
        for (pi, ti) in matches {
            let (pred, truth) = (p[pi], t[ti]);
            let Some(truth_cap) = truth.caption_box else { continue };
            report.captions.evaluated += 1;
            let ok = pred.caption_box.is_some_and(|pc| {
                caption_correct(&pc, pred.caption_text.as_deref(), &truth_cap, truth.caption_text.as_deref())
            });
            if ok {
                report.captions.correct += 1;
            }
        }
    }
    report
}
