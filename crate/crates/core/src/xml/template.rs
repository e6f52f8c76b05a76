//! Multi-scale template matching with mean-normalized cross-correlation.
//!
//! For every placement the score is
//! `Σ T'·W' / sqrt(Σ T'² · Σ W'²)`, where `T'` and `W'` are the template and
//! the page window with their means removed. The numerator is computed for
//! all placements at once by FFT cross-correlation; window means and
//! energies come from integral images.

use std::sync::Arc;

use image::RgbImage;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::geometry::BBox;

pub const SCALE_COUNT: usize = 45;
pub const SCALE_MIN: f64 = 0.10;
pub const SCALE_MAX: f64 = 0.95;

/// Lowest similarity at which a figure match is trusted.
pub const MIN_TEMPLATE_SCORE: f64 = 0.8;

/// Relative energy below which a window or template is treated as flat.
const FLAT_EPS: f64 = 1e-9;

/// Single-channel floating-point raster, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LumaRaster {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl LumaRaster {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width * height, "raster size mismatch");
        Self { width, height, data }
    }

    /// Luminance `0.299 R + 0.587 G + 0.114 B`.
    pub fn from_rgb(img: &RgbImage) -> Self {
        let data = img
            .pixels()
            .map(|p| 0.299 * f64::from(p[0]) + 0.587 * f64::from(p[1]) + 0.114 * f64::from(p[2]))
            .collect();
        Self::new(img.width() as usize, img.height() as usize, data)
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn crop(&self, x: usize, y: usize, w: usize, h: usize) -> Self {
        let mut data = Vec::with_capacity(w * h);
        for row in y..y + h {
            data.extend_from_slice(&self.data[row * self.width + x..row * self.width + x + w]);
        }
        Self::new(w, h, data)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemplateMatch {
    pub bbox: BBox,
    pub score: f64,
    /// Template's largest dimension relative to the matching page dimension.
    pub scale: f64,
}

/// True unless the score falls below [`MIN_TEMPLATE_SCORE`].
pub fn accept_figure_match(m: &TemplateMatch) -> bool {
    m.score >= MIN_TEMPLATE_SCORE
}

/// The 45 linearly spaced scales from 0.10 to 0.95 inclusive.
pub fn scale_grid() -> Vec<f64> {
    let step = (SCALE_MAX - SCALE_MIN) / (SCALE_COUNT - 1) as f64;
    (0..SCALE_COUNT).map(|k| SCALE_MIN + step * k as f64).collect()
}

/// Resamples one axis: box averaging when shrinking, linear interpolation
/// when enlarging, a plain copy when the length is unchanged.
fn resample_axis(src: &[f64], out_len: usize) -> Vec<f64> {
    let n = src.len();
    if out_len == n {
        return src.to_vec();
    }
    let ratio = n as f64 / out_len as f64;
    if out_len < n {
        (0..out_len)
            .map(|i| {
                let lo = i as f64 * ratio;
                let hi = lo + ratio;
                let mut acc = 0.0;
                let mut k = lo.floor() as usize;
                while (k as f64) < hi && k < n {
                    let cover = (hi.min(k as f64 + 1.0) - lo.max(k as f64)).max(0.0);
                    acc += src[k] * cover;
                    k += 1;
                }
                acc / ratio
            })
            .collect()
    } else {
        (0..out_len)
            .map(|i| {
                let pos = ((i as f64 + 0.5) * ratio - 0.5).clamp(0.0, (n - 1) as f64);
                let k = pos.floor() as usize;
                let t = pos - k as f64;
                if k + 1 < n {
                    src[k] * (1.0 - t) + src[k + 1] * t
                } else {
                    src[k]
                }
            })
            .collect()
    }
}

/// Separable resize: area averaging along axes that shrink, bilinear along
/// axes that grow.
pub fn resize(src: &LumaRaster, width: usize, height: usize) -> LumaRaster {
    assert!(width > 0 && height > 0, "resize to empty raster");
    let mut horizontal = Vec::with_capacity(width * src.height);
    for row in src.data.chunks(src.width) {
        horizontal.extend(resample_axis(row, width));
    }
    let mut out = vec![0.0; width * height];
    let mut column = vec![0.0; src.height];
    for x in 0..width {
        for (y, v) in column.iter_mut().enumerate() {
            *v = horizontal[y * width + x];
        }
        for (y, v) in resample_axis(&column, height).into_iter().enumerate() {
            out[y * width + x] = v;
        }
    }
    LumaRaster::new(width, height, out)
}

/// Template size at `scale`: its largest dimension spans `scale` of the
/// corresponding page dimension, aspect ratio preserved.
fn scaled_size(page: &LumaRaster, template: &LumaRaster, scale: f64) -> (usize, usize) {
    let (tw, th) = (template.width as f64, template.height as f64);
    if tw >= th {
        let w = (scale * page.width as f64).round();
        (w as usize, (th * w / tw).round() as usize)
    } else {
        let h = (scale * page.height as f64).round();
        ((tw * h / th).round() as usize, h as usize)
    }
}

struct Spectrum2d {
    width: usize,
    height: usize,
    row_fft: Arc<dyn Fft<f64>>,
    col_fft: Arc<dyn Fft<f64>>,
    row_ifft: Arc<dyn Fft<f64>>,
    col_ifft: Arc<dyn Fft<f64>>,
}

impl Spectrum2d {
    fn new(width: usize, height: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            width,
            height,
            row_fft: planner.plan_fft_forward(width),
            col_fft: planner.plan_fft_forward(height),
            row_ifft: planner.plan_fft_inverse(width),
            col_ifft: planner.plan_fft_inverse(height),
        }
    }

    /// Forward 2-D transform; the result is stored column-major.
    fn forward(&self, data: &mut Vec<Complex<f64>>) {
        self.row_fft.process(data);
        *data = transpose(data, self.width, self.height);
        self.col_fft.process(data);
    }

    /// Inverse of [`Spectrum2d::forward`], unnormalized.
    fn inverse(&self, data: &mut Vec<Complex<f64>>) {
        self.col_ifft.process(data);
        *data = transpose(data, self.height, self.width);
        self.row_ifft.process(data);
    }
}

/// Transposes a row-major `width × height` buffer.
fn transpose(data: &[Complex<f64>], width: usize, height: usize) -> Vec<Complex<f64>> {
    let mut out = vec![Complex::default(); data.len()];
    for y in 0..height {
        for x in 0..width {
            out[x * height + y] = data[y * width + x];
        }
    }
    out
}

/// Summed-area table with one row and column of zero padding.
struct Integral {
    stride: usize,
    sum: Vec<f64>,
}

impl Integral {
    fn new(width: usize, height: usize, f: impl Fn(usize) -> f64) -> Self {
        let stride = width + 1;
        let mut sum = vec![0.0; stride * (height + 1)];
        for y in 0..height {
            let mut row = 0.0;
            for x in 0..width {
                row += f(y * width + x);
                sum[(y + 1) * stride + x + 1] = sum[y * stride + x + 1] + row;
            }
        }
        Self { stride, sum }
    }

    fn rect(&self, x: usize, y: usize, w: usize, h: usize) -> f64 {
        let s = self.stride;
        self.sum[(y + h) * s + x + w] - self.sum[y * s + x + w] - self.sum[(y + h) * s + x]
            + self.sum[y * s + x]
    }
}

struct PreparedPage {
    width: usize,
    height: usize,
    fft: Spectrum2d,
    spectrum: Vec<Complex<f64>>,
    sums: Integral,
    squares: Integral,
}

impl PreparedPage {
    fn new(page: &LumaRaster) -> Self {
        // Centering the page keeps the integral images small; NCC does not
        // depend on the page offset.
        let mean = page.data.iter().sum::<f64>() / page.data.len() as f64;
        let centered: Vec<f64> = page.data.iter().map(|v| v - mean).collect();
        let fft = Spectrum2d::new(page.width, page.height);
        let mut spectrum: Vec<Complex<f64>> = centered.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fft.forward(&mut spectrum);
        Self {
            width: page.width,
            height: page.height,
            sums: Integral::new(page.width, page.height, |i| centered[i]),
            squares: Integral::new(page.width, page.height, |i| centered[i] * centered[i]),
            fft,
            spectrum,
        }
    }

    /// Best placement of `template` by NCC: `(score, x, y)`, first maximum in
    /// row-major order.
    fn best_placement(&self, template: &LumaRaster) -> (f64, usize, usize) {
        let (tw, th) = (template.width, template.height);
        let n = (tw * th) as f64;
        let t_mean = template.data.iter().sum::<f64>() / n;
        let t_centered: Vec<f64> = template.data.iter().map(|v| v - t_mean).collect();
        let t_energy: f64 = t_centered.iter().map(|v| v * v).sum();
        let t_scale: f64 = template.data.iter().map(|v| v * v).sum();
        if t_energy <= FLAT_EPS * t_scale.max(1.0) {
            return (0.0, 0, 0);
        }

        let mut padded = vec![Complex::default(); self.width * self.height];
        for y in 0..th {
            for x in 0..tw {
                padded[y * self.width + x] = Complex::new(t_centered[y * tw + x], 0.0);
            }
        }
        self.fft.forward(&mut padded);
        for (t, p) in padded.iter_mut().zip(&self.spectrum) {
            *t = p * t.conj();
        }
        self.fft.inverse(&mut padded);
        let norm = (self.width * self.height) as f64;

        let mut best = (f64::NEG_INFINITY, 0, 0);
        for y in 0..=(self.height - th) {
            for x in 0..=(self.width - tw) {
                let s1 = self.sums.rect(x, y, tw, th);
                let s2 = self.squares.rect(x, y, tw, th);
                let w_energy = s2 - s1 * s1 / n;
                let score = if w_energy <= FLAT_EPS * s2.max(1.0) {
                    0.0
                } else {
                    let num = padded[y * self.width + x].re / norm;
                    (num / (t_energy * w_energy).sqrt()).clamp(-1.0, 1.0)
                };
                if score > best.0 {
                    best = (score, x, y);
                }
            }
        }
        best
    }
}

/// Searches the 45 scales for the best NCC placement of `template` on
/// `page`. Ties go to the smaller scale, then the top-most and left-most
/// placement.
pub fn match_template_multiscale(page: &LumaRaster, template: &LumaRaster) -> Result<TemplateMatch> {
    if page.data.is_empty() || template.data.is_empty() {
        return Err(Error::TemplateTooLarge);
    }
    let prepared = PreparedPage::new(page);
    let per_scale: Vec<Option<TemplateMatch>> = scale_grid()
        .into_par_iter()
        .map(|scale| {
            let (w, h) = scaled_size(page, template, scale);
            if w == 0 || h == 0 || w * h < 2 || w > page.width || h > page.height {
                return None;
            }
            let scaled = resize(template, w, h);
            let (score, x, y) = prepared.best_placement(&scaled);
            Some(TemplateMatch {
                bbox: BBox {
                    x1: x as f64,
                    y1: y as f64,
                    x2: (x + w) as f64,
                    y2: (y + h) as f64,
                },
                score,
                scale,
            })
        })
        .collect();
    per_scale
        .into_iter()
        .flatten()
        .reduce(|best, m| if m.score > best.score { m } else { best })
        .ok_or(Error::TemplateTooLarge)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Smooth deterministic texture with structure at several frequencies.
    fn textured(width: usize, height: usize) -> LumaRaster {
        let data = (0..width * height)
            .map(|i| {
                let (x, y) = ((i % width) as f64, (i / width) as f64);
                128.0
                    + 50.0 * (x / 13.0).sin() * (y / 17.0).cos()
                    + 40.0 * ((x + 2.0 * y) / 29.0).sin()
                    + 25.0 * ((x * y) / 900.0).cos()
            })
            .collect();
        LumaRaster::new(width, height, data)
    }

    #[test]
    fn grid_endpoints() {
        let g = scale_grid();
        assert_eq!(g.len(), 45);
        assert!((g[0] - 0.10).abs() < 1e-12);
        assert!((g[44] - 0.95).abs() < 1e-12);
        assert!((g[1] - g[0] - 0.85 / 44.0).abs() < 1e-12);
    }

    #[test]
    fn resize_identity_and_box_average() {
        let r = textured(7, 5);
        assert_eq!(resize(&r, 7, 5), r);
        let two = LumaRaster::new(4, 2, vec![0.0, 2.0, 4.0, 6.0, 2.0, 4.0, 6.0, 8.0]);
        let half = resize(&two, 2, 1);
        assert_eq!(half.data, vec![2.0, 6.0]);
    }

    #[test]
    fn resize_upscale_preserves_constants() {
        let flat = LumaRaster::new(3, 3, vec![7.0; 9]);
        assert!(resize(&flat, 8, 5).data.iter().all(|&v| (v - 7.0).abs() < 1e-12));
    }

    #[test]
    fn self_crop_matches_exactly() {
        // 200 px wide crop; page width chosen so a grid scale maps to 200 px.
        let scale = scale_grid()[20];
        let width = (200.0 / scale).round() as usize;
        assert_eq!((scale * width as f64).round() as usize, 200);
        let page = textured(width, 300);
        let crop = page.crop(50, 40, 200, 120);
        let m = match_template_multiscale(&page, &crop).unwrap();
        assert_eq!(m.bbox, BBox::new(50.0, 40.0, 250.0, 160.0).unwrap());
        assert!((m.score - 1.0).abs() < 1e-6, "score {}", m.score);
        assert!(accept_figure_match(&m));
    }

    #[test]
    fn downscaled_crop_is_recovered() {
        let scale = scale_grid()[20];
        let width = (200.0 / scale).round() as usize;
        let page = textured(width, 300);
        let crop = page.crop(50, 40, 200, 120);
        let small = resize(&crop, 100, 60);
        let m = match_template_multiscale(&page, &small).unwrap();
        let c = m.bbox.center();
        assert!((c.x - 150.0).abs() <= 0.02 * width as f64, "center {c:?}");
        assert!((c.y - 100.0).abs() <= 0.02 * 300.0, "center {c:?}");
        assert!(m.score > 0.95, "score {}", m.score);
    }

    #[test]
    fn flat_template_scores_zero() {
        let page = textured(120, 90);
        let flat = LumaRaster::new(30, 20, vec![128.0; 600]);
        let m = match_template_multiscale(&page, &flat).unwrap();
        assert!(m.score <= 0.0);
    }

    #[test]
    fn affine_intensity_invariance() {
        let page = textured(150, 110);
        let crop = page.crop(20, 30, 60, 40);
        let shifted = LumaRaster::new(60, 40, crop.data.iter().map(|v| 0.5 * v + 30.0).collect());
        let a = match_template_multiscale(&page, &crop).unwrap();
        let b = match_template_multiscale(&page, &shifted).unwrap();
        assert_eq!(a.bbox, b.bbox);
        assert_eq!(a.scale, b.scale);
        assert!((a.score - b.score).abs() < 1e-6);
    }

    #[test]
    fn threshold_boundary() {
        let m = |score| TemplateMatch { bbox: BBox::new(0.0, 0.0, 1.0, 1.0).unwrap(), score, scale: 0.5 };
        assert!(accept_figure_match(&m(0.95)));
        assert!(!accept_figure_match(&m(0.79)));
        assert!(accept_figure_match(&m(0.8)));
    }

    #[test]
    fn oversized_template_is_rejected_at_every_scale() {
        // Extreme aspect ratio: tall page, very wide template.
        let page = textured(20, 400);
        let tpl = textured(400, 2);
        // At every scale the template width fits but the height rounds to 0.
        assert!(matches!(match_template_multiscale(&page, &tpl), Err(Error::TemplateTooLarge)));
    }
}
