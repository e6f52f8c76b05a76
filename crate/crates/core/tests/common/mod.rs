//! Synthetic pages, fixture corpora and brute-force oracles shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use figlabel::xml::{resize, scale_grid, LumaRaster};
use figlabel::{BBox, Kind};
use image::{Rgb, RgbImage};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const WHITE: Rgb<u8> = Rgb([255, 255, 255]);
pub const BLACK: Rgb<u8> = Rgb([0, 0, 0]);
pub const RED: Rgb<u8> = Rgb([255, 0, 0]);
pub const YELLOW: Rgb<u8> = Rgb([255, 255, 0]);
pub const GREEN: Rgb<u8> = Rgb([0, 255, 0]);
pub const BLUE: Rgb<u8> = Rgb([0, 0, 255]);

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn bb(x1: f64, y1: f64, x2: f64, y2: f64) -> BBox {
    BBox::new(x1, y1, x2, y2).unwrap()
}

/// Fills `[x1, x2) × [y1, y2)`.
pub fn fill(img: &mut RgbImage, x1: u32, y1: u32, x2: u32, y2: u32, color: Rgb<u8>) {
    for y in y1..y2.min(img.height()) {
        for x in x1..x2.min(img.width()) {
            img.put_pixel(x, y, color);
        }
    }
}

/// Outline of `[x1, x2) × [y1, y2)`, `t` pixels thick, drawn inwards.
pub fn outline(img: &mut RgbImage, x1: u32, y1: u32, x2: u32, y2: u32, t: u32, color: Rgb<u8>) {
    fill(img, x1, y1, x2, y1 + t, color);
    fill(img, x1, y2 - t, x2, y2, color);
    fill(img, x1, y1, x1 + t, y2, color);
    fill(img, x2 - t, y1, x2, y2, color);
}

// ---------------------------------------------------------------------------
// LaTeX diff pages

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
    Left,
    Right,
}

/// What a drawn float should come back as.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedFloat {
    pub kind: Kind,
    pub frame: BBox,
    pub caption: BBox,
    pub figure: BBox,
    pub side: Side,
}

pub struct LatexPage {
    pub original: RgbImage,
    pub modified: RgbImage,
    pub floats: Vec<ExpectedFloat>,
}

pub const LATEX_PAGE_W: u32 = 850;
pub const LATEX_PAGE_H: u32 = 1100;

const WORD_H: u32 = 8;
const WORD_GAP: u32 = 5;
const LINE_GAP: u32 = 4;
const MARGIN: u32 = 8;

/// Word bars laid out in lines inside `[x1, x2)` starting at `y`; returns
/// the bars, the first one being the caption label.
fn caption_words(rng: &mut StdRng, x1: u32, x2: u32, y: u32, lines: u32) -> Vec<(u32, u32, u32, u32)> {
    let mut bars = Vec::new();
    for line in 0..lines {
        let top = y + line * (WORD_H + LINE_GAP);
        let mut x = x1;
        loop {
            let w = rng.gen_range(14..50);
            if x + w > x2 {
                break;
            }
            bars.push((x, top, x + w, top + WORD_H));
            x += w + WORD_GAP;
        }
        // Stretch the last word to the line end so lines span the column.
        if let Some(last) = bars.last_mut() {
            last.2 = x2;
        }
    }
    bars
}

fn bars_box(bars: &[(u32, u32, u32, u32)]) -> BBox {
    let x1 = bars.iter().map(|b| b.0).min().unwrap();
    let y1 = bars.iter().map(|b| b.1).min().unwrap();
    let x2 = bars.iter().map(|b| b.2).max().unwrap();
    let y2 = bars.iter().map(|b| b.3).max().unwrap();
    bb(x1 as f64, y1 as f64, x2 as f64, y2 as f64)
}

/// A page pair with 1 to 3 stacked floats, each with a caption on one side
/// inside its frame, plus body text and float content that both renders
/// share.
pub fn latex_page(seed: u64) -> LatexPage {
    let mut rng = rng(seed);
    let (w, h) = (LATEX_PAGE_W, LATEX_PAGE_H);
    let mut original = RgbImage::from_pixel(w, h, WHITE);
    let n = rng.gen_range(1..=3u32);
    let slot = (h - 100) / n;
    let mut floats = Vec::new();
    let mut modified_layers: Vec<(Vec<(u32, u32, u32, u32)>, (u32, u32, u32, u32), Rgb<u8>)> = Vec::new();

    for i in 0..n {
        let slot_top = 50 + i * slot;
        let fh = rng.gen_range(160..=(slot - 50).min(420));
        let fw = rng.gen_range(320..=760);
        let fx = rng.gen_range(40..=(w - 40 - fw));
        let fy = slot_top + rng.gen_range(0..=(slot - 40 - fh));
        let (x1, y1, x2, y2) = (fx, fy, fx + fw, fy + fh);
        let kind = if rng.gen_bool(0.5) { Kind::Figure } else { Kind::Table };
        let side = [Side::Above, Side::Below, Side::Left, Side::Right][rng.gen_range(0..4)];

        let inner = (x1 + MARGIN, y1 + MARGIN, x2 - MARGIN, y2 - MARGIN);
        let bars = match side {
            Side::Above | Side::Below => {
                let lines = rng.gen_range(1..=3);
                let cap_h = lines * (WORD_H + LINE_GAP) - LINE_GAP;
                let top = if side == Side::Above { inner.1 } else { inner.3 - cap_h };
                caption_words(&mut rng, inner.0, inner.2, top, lines)
            }
            Side::Left | Side::Right => {
                let col_w = (fw as f64 * rng.gen_range(0.18..0.30)) as u32;
                let max_lines = (fh - 2 * MARGIN + LINE_GAP) / (WORD_H + LINE_GAP);
                let lines = rng.gen_range((max_lines * 3 / 4).max(1)..=max_lines);
                let (cx1, cx2) = if side == Side::Left {
                    (inner.0, inner.0 + col_w)
                } else {
                    (inner.2 - col_w, inner.2)
                };
                caption_words(&mut rng, cx1, cx2, inner.1, lines)
            }
        };
        let caption = bars_box(&bars);
        let frame = bb(x1 as f64, y1 as f64, x2 as f64, y2 as f64);
        let figure = match side {
            Side::Above => bb(frame.x1, caption.y2, frame.x2, frame.y2),
            Side::Below => bb(frame.x1, frame.y1, frame.x2, caption.y1),
            Side::Left => bb(caption.x2, frame.y1, frame.x2, frame.y2),
            Side::Right => bb(frame.x1, frame.y1, caption.x1, frame.y2),
        };

        // Float content: identical in both renders, kept clear of the
        // caption so it never joins a diff component.
        let (cx1, cy1, cx2, cy2) = (
            figure.x1 as u32 + 2 * MARGIN,
            figure.y1 as u32 + 2 * MARGIN,
            figure.x2 as u32 - 2 * MARGIN,
            figure.y2 as u32 - 2 * MARGIN,
        );
        if cx2 > cx1 + 4 && cy2 > cy1 + 4 {
            fill(&mut original, cx1, cy1, cx2, cy2, Rgb([190, 190, 190]));
            fill(&mut original, cx1 + 2, cy1 + 2, (cx1 + cx2) / 2, (cy1 + cy2) / 2, Rgb([60, 90, 140]));
        }
        for &(a, b, c, d) in &bars {
            fill(&mut original, a, b, c, d, BLACK);
        }
        let frame_color = if kind == Kind::Figure { RED } else { YELLOW };
        modified_layers.push((bars, (x1, y1, x2, y2), frame_color));
        floats.push(ExpectedFloat { kind, frame, caption, figure, side });
    }

    // Body text in the right margin strip, shared by both renders.
    for line in 0..40 {
        let y = 40 + line * 25;
        fill(&mut original, w - 30, y, w - 8, y + WORD_H, BLACK);
    }

    let mut modified = original.clone();
    for (bars, (x1, y1, x2, y2), color) in modified_layers {
        outline(&mut modified, x1, y1, x2, y2, 2, color);
        for (k, &(a, b, c, d)) in bars.iter().enumerate() {
            fill(&mut modified, a, b, c, d, if k == 0 { GREEN } else { BLUE });
        }
    }
    LatexPage { original, modified, floats }
}

// ---------------------------------------------------------------------------
// Template matching pages

/// Smooth random texture: a few low-frequency sinusoids.
pub fn texture(rng: &mut StdRng, width: usize, height: usize) -> LumaRaster {
    let waves: Vec<(f64, f64, f64, f64)> = (0..5)
        .map(|_| {
            (
                rng.gen_range(0.02..0.09),
                rng.gen_range(0.02..0.09),
                rng.gen_range(0.0..6.28),
                rng.gen_range(20.0..45.0),
            )
        })
        .collect();
    let data = (0..width * height)
        .map(|i| {
            let (x, y) = ((i % width) as f64, (i / width) as f64);
            let v: f64 = waves.iter().map(|&(fx, fy, p, a)| a * (fx * x + fy * y + p).sin()).sum();
            (128.0 + v).clamp(0.0, 255.0)
        })
        .collect();
    LumaRaster::new(width, height, data)
}

pub struct TemplatePage {
    pub page: LumaRaster,
    pub template: LumaRaster,
    pub placed: BBox,
    pub scale: f64,
}

pub fn luma_to_rgb(r: &LumaRaster) -> RgbImage {
    RgbImage::from_fn(r.width as u32, r.height as u32, |x, y| {
        let v = r.get(x as usize, y as usize).round().clamp(0.0, 255.0) as u8;
        Rgb([v, v, v])
    })
}

/// Size of `template` when its largest dimension spans `scale` of the
/// corresponding page dimension.
pub fn scaled_dims(page_w: usize, page_h: usize, tw: usize, th: usize, scale: f64) -> (usize, usize) {
    if tw >= th {
        let w = (scale * page_w as f64).round();
        (w as usize, (th as f64 * w / tw as f64).round() as usize)
    } else {
        let h = (scale * page_h as f64).round();
        ((tw as f64 * h / th as f64).round() as usize, h as usize)
    }
}

/// White page with text bars and a template pasted at a random scale in
/// [0.10, 0.95].
pub fn template_page(seed: u64, scale: Option<f64>) -> TemplatePage {
    let mut rng = rng(seed);
    let (pw, ph) = (400usize, 520usize);
    let tw = rng.gen_range(160..320);
    let th = rng.gen_range(120..260);
    let template = texture(&mut rng, tw, th);
    // Redraw scales at which the template would not fit on the page.
    let (scale, sw, sh) = loop {
        let s = scale.unwrap_or_else(|| rng.gen_range(0.10..=0.95));
        let (sw, sh) = scaled_dims(pw, ph, tw, th, s);
        if sw <= pw && sh <= ph {
            break (s, sw, sh);
        }
        assert!(scale.is_none(), "template does not fit at scale {s}");
    };
    let placed_img = resize(&template, sw, sh);

    let mut data = vec![255.0; pw * ph];
    for line in (10..ph - 10).step_by(14) {
        let mut x = 10;
        while x + 40 < pw - 10 {
            let len = rng.gen_range(15..40);
            for y in line..line + 7 {
                for xx in x..x + len {
                    data[y * pw + xx] = 20.0;
                }
            }
            x += len + 6;
        }
    }
    let ox = rng.gen_range(0..=pw - sw);
    let oy = rng.gen_range(0..=ph - sh);
    for y in 0..sh {
        for x in 0..sw {
            data[(oy + y) * pw + ox + x] = placed_img.get(x, y);
        }
    }
    TemplatePage {
        page: LumaRaster::new(pw, ph, data),
        template,
        placed: bb(ox as f64, oy as f64, (ox + sw) as f64, (oy + sh) as f64),
        scale,
    }
}

/// Scale from the matcher's grid, so a pasted template can be recovered
/// pixel for pixel.
pub fn grid_scale(i: usize) -> f64 {
    scale_grid()[i]
}

// ---------------------------------------------------------------------------
// Brute-force oracles

/// Plain two-row Levenshtein distance.
pub fn edit_distance(a: &[char], b: &[char]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, cb) in b.iter().enumerate() {
            cur[j + 1] = (prev[j] + usize::from(ca != cb)).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

/// Minimum edit distance between `needle` and any substring of `haystack`,
/// the empty substring included.
pub fn min_substring_distance(needle: &[char], haystack: &[char]) -> usize {
    let mut best = needle.len();
    for i in 0..=haystack.len() {
        for j in i..=haystack.len() {
            best = best.min(edit_distance(needle, &haystack[i..j]));
        }
    }
    best
}

/// Smallest symmetric multiset difference over all nonempty intervals.
pub fn min_interval_distance(table: &[String], page: &[String]) -> Option<usize> {
    let mut best = None;
    for s in 0..page.len() {
        for e in s..page.len() {
            let mut counts: BTreeMap<&str, i64> = BTreeMap::new();
            for w in table {
                *counts.entry(w).or_default() += 1;
            }
            for w in &page[s..=e] {
                *counts.entry(w).or_default() -= 1;
            }
            let d: usize = counts.values().map(|c| c.unsigned_abs() as usize).sum();
            best = Some(best.map_or(d, |b: usize| b.min(d)));
        }
    }
    best
}

/// Minimum total cost over all injections of the smaller side into the
/// larger.
pub fn min_assignment_cost(cost: &[Vec<f64>]) -> f64 {
    let rows = cost.len();
    let cols = cost.first().map_or(0, Vec::len);
    let t: Vec<Vec<f64>>;
    let m = if rows <= cols {
        cost
    } else {
        t = (0..cols).map(|c| (0..rows).map(|r| cost[r][c]).collect()).collect();
        &t[..]
    };
    fn rec(m: &[Vec<f64>], r: usize, used: &mut Vec<bool>) -> f64 {
        if r == m.len() {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                best = best.min(m[r][c] + rec(m, r + 1, used));
                used[c] = false;
            }
        }
        best
    }
    if m.is_empty() {
        return 0.0;
    }
    rec(m, 0, &mut vec![false; m[0].len()])
}

// ---------------------------------------------------------------------------
// On-disk fixture corpus

pub fn write_png(path: &Path, img: &RgbImage) {
    img.save(path).unwrap();
}

/// `<root>/latex/<paper>/{original,modified}/page-NNNN.png`; returns the
/// expected float count.
pub fn write_latex_paper(root: &Path, paper: &str, seeds: &[u64]) -> usize {
    let dir = root.join("latex").join(paper);
    fs::create_dir_all(dir.join("original")).unwrap();
    fs::create_dir_all(dir.join("modified")).unwrap();
    let mut floats = 0;
    for (i, &seed) in seeds.iter().enumerate() {
        let page = latex_page(seed);
        let name = format!("page-{:04}.png", i + 1);
        write_png(&dir.join("original").join(&name), &page.original);
        write_png(&dir.join("modified").join(&name), &page.modified);
        floats += page.floats.len();
    }
    floats
}

fn token_json(text: &str, page: usize, x: f64, y: f64) -> String {
    let w = 7.0 * text.chars().count() as f64;
    format!(
        r#"{{"text":{},"page":{page},"x1":{x},"y1":{y},"x2":{},"y2":{}}}"#,
        serde_json::to_string(text).unwrap(),
        x + w,
        y + 10.0
    )
}

/// Lays `words` out in lines from `(x, y)` and returns token JSON entries.
fn token_lines(words: &[&str], page: usize, x: f64, y: f64, per_line: usize) -> Vec<String> {
    words
        .iter()
        .enumerate()
        .map(|(i, w)| token_json(w, page, x + 55.0 * (i % per_line) as f64, y + 14.0 * (i / per_line) as f64))
        .collect()
}

/// One XML-route paper: two pages, a figure image on page 1 with its
/// caption below it, and a table on page 0. With `mismatched`, the figure
/// file is an unrelated texture.
pub fn write_xml_paper(root: &Path, paper: &str, seed: u64, mismatched: bool) {
    let dir = root.join("xml").join(paper);
    fs::create_dir_all(&dir).unwrap();
    let mut rng = rng(seed);
    let (pw, ph) = (400usize, 520usize);

    let figure = texture(&mut rng, 240, 160);
    let scale = grid_scale(25);
    let (sw, sh) = scaled_dims(pw, ph, 240, 160, scale);
    let placed = resize(&figure, sw, sh);
    let (ox, oy) = (60usize, 80usize);
    let mut page1 = vec![255.0; pw * ph];
    for y in 0..sh {
        for x in 0..sw {
            page1[(oy + y) * pw + ox + x] = placed.get(x, y);
        }
    }
    let page0 = LumaRaster::new(pw, ph, vec![255.0; pw * ph]);
    write_png(&dir.join("page-0001.png"), &luma_to_rgb(&page0));
    write_png(&dir.join("page-0002.png"), &luma_to_rgb(&LumaRaster::new(pw, ph, page1)));
    let image = if mismatched { texture(&mut rng, 240, 160) } else { figure };
    write_png(&dir.join("figure1.png"), &luma_to_rgb(&image));

    let cap_y = (oy + sh + 10) as f64;
    let mut tokens = Vec::new();
    tokens.extend(token_lines(&["Some", "introduction", "text", "here."], 0, 40.0, 30.0, 4));
    tokens.extend(token_lines(&["Table", "1:", "Error", "rates", "by", "model."], 0, 40.0, 60.0, 6));
    tokens.extend(token_lines(&["Model", "Error", "base", "0.31", "ours", "0.12"], 0, 60.0, 80.0, 2));
    tokens.extend(token_lines(&["Conclusion", "follows."], 0, 40.0, 200.0, 4));
    tokens.extend(token_lines(&["Figure", "1:", "Learning", "curves", "for", "both", "models."], 1, 60.0, cap_y, 7));
    tokens.extend(token_lines(&["More", "body", "text."], 1, 40.0, cap_y + 40.0, 4));
    fs::write(dir.join("tokens.json"), format!("[{}]", tokens.join(",\n"))).unwrap();

    let aux = r#"[
{"type":"figure","caption":"Figure 1: Learning curves for both models.","image_file":"figure1.png"},
{"type":"table","caption":"Table 1: Error rates by model.","cells":["Model","Error","base","0.31","ours","0.12"]}
]"#;
    fs::write(dir.join("aux.json"), aux).unwrap();
}

/// One detector-backend paper with two pages: page 0 has two boxes that
/// collapse under suppression plus a low-confidence box, page 1 has a
/// table box with its caption.
pub fn write_extract_paper(root: &Path, paper: &str, shift: f64) {
    let dir = root.join("extract").join(paper);
    fs::create_dir_all(&dir).unwrap();
    let p0 = format!(
        r#"[
{{"row":3,"col":4,"x1":{a},"y1":40,"x2":{b},"y2":300,"confidence":0.92}},
{{"row":3,"col":5,"x1":{c},"y1":42,"x2":{d},"y2":298,"confidence":0.88}},
{{"row":9,"col":1,"x1":10,"y1":500,"x2":30,"y2":520,"confidence":0.2}}
]"#,
        a = 50.0 + shift,
        b = 400.0 + shift,
        c = 52.0 + shift,
        d = 402.0 + shift
    );
    let p1 = r#"[{"row":2,"col":2,"x1":60,"y1":100,"x2":500,"y2":260,"confidence":0.77}]"#;
    fs::write(dir.join("page-0001.json"), p0).unwrap();
    fs::write(dir.join("page-0002.json"), p1).unwrap();
    let paragraphs = format!(
        r#"[
{{"text":"Figure 1: A chart of results.","page":0,"x1":{},"y1":310,"x2":400,"y2":330}},
{{"text":"Body paragraph mentioning figure 1.","page":0,"x1":50,"y1":400,"x2":500,"y2":440}},
{{"text":"Table I. Timing breakdown.","page":1,"x1":60,"y1":70,"x2":500,"y2":90}}
]"#,
        50.0 + shift
    );
    fs::write(dir.join("paragraphs.json"), paragraphs).unwrap();
}
