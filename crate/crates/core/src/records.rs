//! Label records and their JSON-lines encoding.
//!
//! One record per line, keys in a fixed order, coordinates printed with four
//! decimals and scores with six, so identical inputs always serialize to
//! identical bytes.

use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::BBox;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Figure,
    Table,
}

impl Kind {
    pub const ALL: [Kind; 2] = [Kind::Figure, Kind::Table];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Figure => "figure",
            Kind::Table => "table",
        }
    }
}

/// Where a record came from: one of the two induction routes, or a detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Latex,
    Xml,
    Detector,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Latex => "latex",
            Provenance::Xml => "xml",
            Provenance::Detector => "detector",
        }
    }
}

/// One figure or table on one page.
///
/// Ground-truth files use the same record type.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedLabel {
    pub paper_id: String,
    pub page: usize,
    pub kind: Kind,
    pub figure_box: BBox,
    pub caption_box: Option<BBox>,
    pub caption_text: Option<String>,
    pub name: Option<String>,
    pub dpi: u32,
    pub page_width: u32,
    pub page_height: u32,
    pub provenance: Provenance,
    /// Detector confidence or template-match score, when one exists.
    pub score: Option<f64>,
}

pub type GroundTruthRecord = InducedLabel;

impl InducedLabel {
    pub fn to_json_line(&self) -> String {
        let mut s = String::with_capacity(256);
        let q = |v: &str| serde_json::to_string(v).expect("string serialization");
        let _ = write!(
            s,
            "{{\"schema_version\":\"{}\",\"paper_id\":{},\"page\":{},\"kind\":\"{}\",",
            SCHEMA_VERSION,
            q(&self.paper_id),
            self.page,
            self.kind.as_str()
        );
        let b = &self.figure_box;
        let _ = write!(
            s,
            "\"fig_x1\":{:.4},\"fig_y1\":{:.4},\"fig_x2\":{:.4},\"fig_y2\":{:.4},",
            b.x1, b.y1, b.x2, b.y2
        );
        match &self.caption_box {
            Some(c) => {
                let _ = write!(
                    s,
                    "\"cap_x1\":{:.4},\"cap_y1\":{:.4},\"cap_x2\":{:.4},\"cap_y2\":{:.4},",
                    c.x1, c.y1, c.x2, c.y2
                );
            }
            None => s.push_str("\"cap_x1\":null,\"cap_y1\":null,\"cap_x2\":null,\"cap_y2\":null,"),
        }
        let opt = |v: &Option<String>| v.as_deref().map_or_else(|| "null".to_string(), q);
        let _ = write!(
            s,
            "\"caption_text\":{},\"name\":{},\"dpi\":{},\"page_width\":{},\"page_height\":{},\"provenance\":\"{}\",\"score\":",
            opt(&self.caption_text),
            opt(&self.name),
            self.dpi,
            self.page_width,
            self.page_height,
            self.provenance.as_str()
        );
        match self.score {
            Some(v) => {
                let _ = write!(s, "{v:.6}");
            }
            None => s.push_str("null"),
        }
        s.push('}');
        s
    }

    /// Parses one line; `line_no` is 1-based and only used for diagnostics.
    pub fn from_json_line(line: &str, line_no: usize) -> Result<Self> {
        let raw: RawRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
            what: "label record".into(),
            line: line_no,
            column: e.column(),
            message: e.to_string(),
        })?;
        raw.into_label(line_no)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    schema_version: String,
    paper_id: String,
    page: usize,
    kind: Kind,
    fig_x1: f64,
    fig_y1: f64,
    fig_x2: f64,
    fig_y2: f64,
    cap_x1: Option<f64>,
    cap_y1: Option<f64>,
    cap_x2: Option<f64>,
    cap_y2: Option<f64>,
    caption_text: Option<String>,
    name: Option<String>,
    dpi: u32,
    page_width: u32,
    page_height: u32,
    provenance: Provenance,
    #[serde(default)]
    score: Option<f64>,
}

impl RawRecord {
    fn into_label(self, line_no: usize) -> Result<InducedLabel> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "line {line_no}: schema_version {:?}, expected {SCHEMA_VERSION:?}",
                self.schema_version
            )));
        }
        let bad_box = |what: &str| Error::Schema(format!("line {line_no}: invalid {what} box"));
        let figure_box = BBox::new(self.fig_x1, self.fig_y1, self.fig_x2, self.fig_y2)
            .map_err(|_| bad_box("figure"))?;
        let caption_box = match (self.cap_x1, self.cap_y1, self.cap_x2, self.cap_y2) {
            (Some(x1), Some(y1), Some(x2), Some(y2)) => {
                Some(BBox::new(x1, y1, x2, y2).map_err(|_| bad_box("caption"))?)
            }
            (None, None, None, None) => None,
            _ => {
                return Err(Error::Schema(format!(
                    "line {line_no}: caption coordinates must be all null or all present"
                )))
            }
        };
        Ok(InducedLabel {
            paper_id: self.paper_id,
            page: self.page,
            kind: self.kind,
            figure_box,
            caption_box,
            caption_text: self.caption_text,
            name: self.name,
            dpi: self.dpi,
            page_width: self.page_width,
            page_height: self.page_height,
            provenance: self.provenance,
            score: self.score,
        })
    }
}

pub fn write_records(records: &[InducedLabel]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_json_line());
        out.push('\n');
    }
    out
}

/// Reads a JSON-lines stream; blank lines are skipped.
pub fn read_records<R: BufRead>(reader: R) -> Result<Vec<InducedLabel>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<label stream>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(InducedLabel::from_json_line(&line, i + 1)?);
    }
    Ok(out)
}
