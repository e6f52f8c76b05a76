//! Batch commands and on-disk formats.
//!
//! Page rasters and backend prediction files are named `page-NNNN.<ext>`
//! with contiguous numbers; the first file is page 0 in every record and
//! in the `page` field of `tokens.json` and `paragraphs.json`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufReader, Write as _};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::detection::{self, PageParams, Paragraph};
use crate::error::{Error, Result};
use crate::evaluation::{score_corpus, EvalReport};
use crate::geometry::BBox;
use crate::latex::{assemble_labels, diff_pages, extract_components, PageRaster};
use crate::records::{read_records, write_records, InducedLabel, Kind, Provenance};
use crate::stats::{corpus_stats, CorpusStats};
use crate::xml::{
    assemble_xml_labels, locate_caption, locate_table, match_template_multiscale, LocatedItem, LumaRaster, SkipReason,
    TextToken,
};

fn page_file_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^page-(\d{4})\.([a-z]+)$").unwrap())
}

fn page_name(n: u32, ext: &str) -> String {
    format!("page-{n:04}.{ext}")
}

/// Page numbers of `page-NNNN.<ext>` files in `dir`, ascending.
fn page_numbers(dir: &Path, ext: &str) -> Result<Vec<u32>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut numbers = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name();
        let Some(name) = name.to_str() else { continue };
        if let Some(c) = page_file_re().captures(name) {
            if &c[2] == ext {
                numbers.push(c[1].parse::<u32>().expect("four digits"));
            }
        }
    }
    numbers.sort_unstable();
    Ok(numbers)
}

/// Paths of the page files in `dir`. Numbers must run without gaps.
pub fn list_pages(dir: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    let numbers = page_numbers(dir, ext)?;
    if let Some(&first) = numbers.first() {
        for (i, &n) in numbers.iter().enumerate() {
            let expected = first + i as u32;
            if n != expected {
                return Err(Error::PageMismatch(format!(
                    "missing {} in {}",
                    page_name(expected, ext),
                    dir.display()
                )));
            }
        }
    }
    Ok(numbers.iter().map(|&n| dir.join(page_name(n, ext))).collect())
}

/// Writes `contents` to a temporary file next to `path` and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(|e| Error::io(parent, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn read_label_file(path: &Path) -> Result<Vec<InducedLabel>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_records(BufReader::new(file))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path.display().to_string(), &e))
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
}

fn paper_id_of(dir: &Path) -> String {
    dir.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string())
}

/// Sorts records by paper, page, kind and position so output order does not
/// depend on scheduling.
fn sort_records(records: &mut [InducedLabel]) {
    records.sort_by(|a, b| {
        (a.paper_id.as_str(), a.page)
            .cmp(&(b.paper_id.as_str(), b.page))
            .then_with(|| a.figure_box.y1.total_cmp(&b.figure_box.y1))
            .then_with(|| a.figure_box.x1.total_cmp(&b.figure_box.x1))
            .then_with(|| a.kind.cmp(&b.kind))
    });
}

/// Machine-readable one-line run summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub command: &'static str,
    pub papers: usize,
    pub records: usize,
    pub skipped: Vec<Skipped>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub paper_id: String,
    pub reason: &'static str,
}

impl Summary {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("summary serialization")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    pub records: Vec<InducedLabel>,
    pub summary: Summary,
}

/// Induces labels for one paper from two directories of page renders.
pub fn cmd_induce_latex(
    original_dir: &Path,
    modified_dir: &Path,
    paper_id: &str,
    dpi: u32,
    workers: usize,
) -> Result<Batch> {
    let original = page_numbers(original_dir, "png")?;
    let modified = page_numbers(modified_dir, "png")?;
    if let Some(n) = original.iter().find(|n| !modified.contains(n)) {
        return Err(Error::PageMismatch(format!(
            "{} missing from {}",
            page_name(*n, "png"),
            modified_dir.display()
        )));
    }
    if let Some(n) = modified.iter().find(|n| !original.contains(n)) {
        return Err(Error::PageMismatch(format!(
            "{} missing from {}",
            page_name(*n, "png"),
            original_dir.display()
        )));
    }
    let original = list_pages(original_dir, "png")?;
    let modified = list_pages(modified_dir, "png")?;

    let pages: Vec<Vec<InducedLabel>> = pool(workers).install(|| {
        original
            .par_iter()
            .zip(modified.par_iter())
            .enumerate()
            .map(|(i, (o, m))| {
                let o = PageRaster::load(o, dpi)?;
                let m = PageRaster::load(m, dpi)?;
                let mask = diff_pages(&o, &m)?;
                let comps = extract_components(&mask, &m);
                log::debug!("{paper_id} page {i}: {} components", comps.len());
                Ok(assemble_labels(paper_id, i, &comps, &m))
            })
            .collect::<Result<_>>()
    })?;
    let mut records: Vec<InducedLabel> = pages.into_iter().flatten().collect();
    sort_records(&mut records);
    let summary = Summary {
        command: "induce-latex",
        papers: 1,
        records: records.len(),
        skipped: Vec::new(),
    };
    Ok(Batch { records, summary })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBoxedText {
    text: String,
    page: usize,
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
}

impl RawBoxedText {
    fn bbox(&self, what: &str, i: usize) -> Result<BBox> {
        BBox::new(self.x1, self.y1, self.x2, self.y2).map_err(|e| Error::Schema(format!("{what} entry {i}: {e}")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AuxEntry {
    #[serde(rename = "type")]
    kind: Kind,
    caption: String,
    #[serde(default)]
    image_file: Option<String>,
    #[serde(default)]
    cells: Option<Vec<String>>,
}

/// Labels for one paper directory holding page rasters, `tokens.json` and
/// `aux.json`.
pub fn induce_xml_paper(dir: &Path, dpi: u32) -> Result<(Vec<InducedLabel>, Option<SkipReason>)> {
    let paper_id = paper_id_of(dir);
    let page_paths = list_pages(dir, "png")?;
    let rasters: Vec<PageRaster> = page_paths
        .iter()
        .map(|p| PageRaster::load(p, dpi))
        .collect::<Result<_>>()?;
    let dims: Vec<(u32, u32)> = rasters.iter().map(|r| (r.width(), r.height())).collect();

    let raw_tokens: Vec<RawBoxedText> = read_json(&dir.join("tokens.json"))?;
    let mut pages: Vec<Vec<TextToken>> = vec![Vec::new(); rasters.len()];
    for (i, t) in raw_tokens.iter().enumerate() {
        let bbox = t.bbox("tokens.json", i)?;
        let page = pages.get_mut(t.page).ok_or_else(|| {
            Error::Schema(format!("tokens.json entry {i}: page {} beyond {} pages", t.page, dims.len()))
        })?;
        page.push(TextToken {
            text: t.text.clone(),
            bbox,
            page_index: t.page,
        });
    }
    let aux: Vec<AuxEntry> = read_json(&dir.join("aux.json"))?;

    let mut items = Vec::with_capacity(aux.len());
    for (i, entry) in aux.iter().enumerate() {
        let located = match entry.kind {
            Kind::Figure => {
                let image = entry
                    .image_file
                    .as_deref()
                    .ok_or_else(|| Error::Schema(format!("aux.json entry {i}: figure without image_file")))?;
                let caption = match locate_caption(&entry.caption, &pages) {
                    Ok(c) => c,
                    Err(Error::CaptionNotFound { normalized_distance }) => {
                        log::info!("{paper_id}: caption {i} not found ({normalized_distance:.3})");
                        return Ok((Vec::new(), Some(SkipReason::CaptionNotFound)));
                    }
                    Err(e) => return Err(e),
                };
                let path = dir.join(image);
                let template = image::open(&path).map_err(|source| Error::Image { path, source })?;
                let template = LumaRaster::from_rgb(&template.to_rgb8());
                let page = LumaRaster::from_rgb(&rasters[caption.page_index].image);
                let m = match match_template_multiscale(&page, &template) {
                    Ok(m) => m,
                    Err(Error::TemplateTooLarge) => {
                        return Ok((Vec::new(), Some(SkipReason::TemplateScore)));
                    }
                    Err(e) => return Err(e),
                };
                log::debug!("{paper_id}: figure {i} score {:.4} scale {:.4}", m.score, m.scale);
                LocatedItem {
                    kind: Kind::Figure,
                    page_index: caption.page_index,
                    figure_box: m.bbox,
                    caption_box: caption.caption_box,
                    caption_text: entry.caption.clone(),
                    template_score: Some(m.score),
                }
            }
            Kind::Table => {
                let cells = entry
                    .cells
                    .as_deref()
                    .ok_or_else(|| Error::Schema(format!("aux.json entry {i}: table without cells")))?;
                match locate_table(cells, &entry.caption, &pages) {
                    Ok(t) => LocatedItem {
                        kind: Kind::Table,
                        page_index: t.page_index,
                        figure_box: t.figure_box,
                        caption_box: t.caption_box,
                        caption_text: entry.caption.clone(),
                        template_score: None,
                    },
                    Err(Error::CaptionNotFound { .. }) => {
                        return Ok((Vec::new(), Some(SkipReason::CaptionNotFound)));
                    }
                    Err(e) => return Err(e),
                }
            }
        };
        items.push(located);
    }
    let outcome = assemble_xml_labels(&paper_id, &items, &dims, dpi);
    Ok((outcome.labels, outcome.skip))
}

/// Runs [`induce_xml_paper`] over paper directories; records come out
/// ordered by paper id.
pub fn cmd_induce_xml(dirs: &[PathBuf], dpi: u32, workers: usize) -> Result<Batch> {
    let mut dirs: Vec<&PathBuf> = dirs.iter().collect();
    dirs.sort_by_key(|d| paper_id_of(d));
    let results: Vec<(String, Vec<InducedLabel>, Option<SkipReason>)> = pool(workers).install(|| {
        dirs.par_iter()
            .map(|d| induce_xml_paper(d, dpi).map(|(labels, skip)| (paper_id_of(d), labels, skip)))
            .collect::<Result<_>>()
    })?;
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (paper_id, labels, skip) in results {
        if let Some(reason) = skip {
            skipped.push(Skipped {
                paper_id,
                reason: reason.as_str(),
            });
        }
        records.extend(labels);
    }
    sort_records(&mut records);
    let summary = Summary {
        command: "induce-xml",
        papers: dirs.len(),
        records: records.len(),
        skipped,
    };
    Ok(Batch { records, summary })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractParams {
    pub page: PageParams,
    pub dpi: u32,
    pub page_width: u32,
    pub page_height: u32,
}

impl ExtractParams {
    /// US-letter page size at `dpi`.
    pub fn letter(dpi: u32) -> Self {
        Self {
            page: PageParams::default(),
            dpi,
            page_width: dpi * 17 / 2,
            page_height: dpi * 11,
        }
    }
}

/// Figure and caption pairs for one paper directory holding per-page
/// backend files `page-NNNN.json` and `paragraphs.json`.
pub fn extract_paper(dir: &Path, params: &ExtractParams) -> Result<Vec<InducedLabel>> {
    let paper_id = paper_id_of(dir);
    let page_paths = list_pages(dir, "json")?;
    let raw: Vec<RawBoxedText> = read_json(&dir.join("paragraphs.json"))?;
    let mut by_page: BTreeMap<usize, Vec<Paragraph>> = BTreeMap::new();
    for (i, p) in raw.iter().enumerate() {
        let bbox = p.bbox("paragraphs.json", i)?;
        by_page.entry(p.page).or_default().push(Paragraph {
            text: p.text.clone(),
            page: p.page,
            bbox,
        });
    }
    let mut records = Vec::new();
    for (page_index, path) in page_paths.iter().enumerate() {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let paragraphs = by_page.get(&page_index).map(Vec::as_slice).unwrap_or(&[]);
        let pairs = detection::run_page(&text, paragraphs, &params.page).map_err(|e| match e {
            Error::Parse { line, column, message, .. } => Error::Parse {
                what: path.display().to_string(),
                line,
                column,
                message,
            },
            Error::Schema(msg) => Error::Schema(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        for pair in pairs {
            records.push(InducedLabel {
                paper_id: paper_id.clone(),
                page: page_index,
                kind: pair.caption.kind,
                figure_box: pair.figure.bbox,
                caption_box: Some(pair.caption.bbox),
                caption_text: Some(pair.caption.text.clone()),
                name: detection::caption_name(&pair.caption.text),
                dpi: params.dpi,
                page_width: params.page_width,
                page_height: params.page_height,
                provenance: Provenance::Detector,
                score: Some(pair.figure.confidence),
            });
        }
    }
    Ok(records)
}

pub fn cmd_extract(dirs: &[PathBuf], params: &ExtractParams, workers: usize) -> Result<Batch> {
    let mut dirs: Vec<&PathBuf> = dirs.iter().collect();
    dirs.sort_by_key(|d| paper_id_of(d));
    let results: Vec<Vec<InducedLabel>> = pool(workers).install(|| {
        dirs.par_iter()
            .map(|d| extract_paper(d, params))
            .collect::<Result<_>>()
    })?;
    let mut records: Vec<InducedLabel> = results.into_iter().flatten().collect();
    sort_records(&mut records);
    let summary = Summary {
        command: "extract",
        papers: dirs.len(),
        records: records.len(),
        skipped: Vec::new(),
    };
    Ok(Batch { records, summary })
}

pub fn cmd_evaluate(pred_file: &Path, truth_file: &Path, iou_threshold: f64) -> Result<EvalReport> {
    if !(0.0..=1.0).contains(&iou_threshold) {
        return Err(Error::InvalidThreshold(iou_threshold));
    }
    let preds = read_label_file(pred_file)?;
    let truths = read_label_file(truth_file)?;
    Ok(score_corpus(&preds, &truths, iou_threshold))
}

pub fn cmd_stats(label_file: &Path) -> Result<CorpusStats> {
    Ok(corpus_stats(&read_label_file(label_file)?))
}

/// Serialized records of a batch.
pub fn render_records(batch: &Batch) -> String {
    write_records(&batch.records)
}
