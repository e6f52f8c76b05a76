use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{enclosing_box, BBox};

use super::bow::bag_of_words_interval;
use super::fuzzy::{fuzzy_substring, FuzzyMatch};

/// Captions whose best match needs more edits than this fraction of their
/// length are treated as absent from the PDF.
pub const MAX_CAPTION_DISTANCE: f64 = 0.5;

/// One word from the PDF text layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextToken {
    pub text: String,
    pub bbox: BBox,
    pub page_index: usize,
}

/// Case-folds a word and strips leading and trailing punctuation.
pub fn normalize_token(word: &str) -> String {
    word.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase()
}

/// Whitespace tokenization followed by [`normalize_token`]; empty results
/// are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(normalize_token)
        .filter(|w| !w.is_empty())
        .collect()
}

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// A page's tokens joined by single spaces, with each token's char span.
#[derive(Debug, Clone, PartialEq)]
pub struct PageText {
    pub chars: Vec<char>,
    pub spans: Vec<(usize, usize)>,
}

impl PageText {
    pub fn new(tokens: &[TextToken]) -> Self {
        let mut chars = Vec::new();
        let mut spans = Vec::with_capacity(tokens.len());
        for (i, t) in tokens.iter().enumerate() {
            if i > 0 {
                chars.push(' ');
            }
            let start = chars.len();
            chars.extend(t.text.chars());
            spans.push((start, chars.len()));
        }
        Self { chars, spans }
    }

    /// Indices of tokens overlapping the char range `[start, end)`.
    pub fn tokens_in(&self, start: usize, end: usize) -> Vec<usize> {
        self.spans
            .iter()
            .enumerate()
            .filter(|(_, &(s, e))| s < end && start < e)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Finds the page whose text contains the closest approximate occurrence
/// of the caption. Ties go to the earliest page.
pub fn locate_caption_page(caption_text: &str, pages: &[Vec<char>]) -> Result<(usize, FuzzyMatch)> {
    let needle: Vec<char> = collapse_whitespace(caption_text).chars().collect();
    let mut best: Option<(usize, FuzzyMatch)> = None;
    for (i, page) in pages.iter().enumerate() {
        let m = fuzzy_substring(&needle, page);
        if best.map_or(true, |(_, b)| m.distance < b.distance) {
            best = Some((i, m));
        }
    }
    let (page, m) = best.ok_or(Error::CaptionNotFound {
        normalized_distance: f64::INFINITY,
    })?;
    let normalized = if needle.is_empty() {
        0.0
    } else {
        m.distance as f64 / needle.len() as f64
    };
    if normalized > MAX_CAPTION_DISTANCE {
        return Err(Error::CaptionNotFound {
            normalized_distance: normalized,
        });
    }
    Ok((page, m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaptionLocation {
    pub page_index: usize,
    pub matched: FuzzyMatch,
    /// Enclosing box of the tokens inside the matched span.
    pub caption_box: Option<BBox>,
}

/// Locates a caption on the per-page token lists.
pub fn locate_caption(caption_text: &str, pages: &[Vec<TextToken>]) -> Result<CaptionLocation> {
    let texts: Vec<PageText> = pages.iter().map(|p| PageText::new(p)).collect();
    let chars: Vec<Vec<char>> = texts.iter().map(|t| t.chars.clone()).collect();
    let (page_index, matched) = locate_caption_page(caption_text, &chars)?;
    let hits = texts[page_index].tokens_in(matched.start, matched.end);
    let caption_box = enclosing_box(hits.iter().map(|&i| &pages[page_index][i].bbox)).ok();
    Ok(CaptionLocation {
        page_index,
        matched,
        caption_box,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableLocation {
    pub page_index: usize,
    pub figure_box: BBox,
    pub caption_box: Option<BBox>,
    /// Bag-of-words distance of the chosen token interval.
    pub distance: usize,
    /// First and last page token (inclusive) of the table body.
    pub token_range: (usize, usize),
}

/// Finds a table from its cell text: the caption picks the page, and the
/// token interval on that page closest to the cells as a bag of words gives
/// the table body.
pub fn locate_table(cells: &[String], caption_text: &str, pages: &[Vec<TextToken>]) -> Result<TableLocation> {
    let caption = locate_caption(caption_text, pages)?;
    let tokens = &pages[caption.page_index];
    let table_words: Vec<String> = cells.iter().flat_map(|c| tokenize(c)).collect();

    // Tokens that normalize to nothing (stray punctuation) are skipped; the
    // index map leads back to the page token list.
    let (index_map, words): (Vec<usize>, Vec<String>) = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| (i, normalize_token(&t.text)))
        .filter(|(_, w)| !w.is_empty())
        .unzip();
    let interval = bag_of_words_interval(&table_words, &words).ok_or(Error::CaptionNotFound {
        normalized_distance: f64::INFINITY,
    })?;
    let (first, last) = (index_map[interval.start_token], index_map[interval.end_token]);
    let figure_box = enclosing_box(tokens[first..=last].iter().map(|t| &t.bbox))?;
    Ok(TableLocation {
        page_index: caption.page_index,
        figure_box,
        caption_box: caption.caption_box,
        distance: interval.distance,
        token_range: (first, last),
    })
}
