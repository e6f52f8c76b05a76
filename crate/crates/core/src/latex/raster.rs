use std::path::Path;

use image::RgbImage;

use crate::error::{Error, Result};

/// Per-channel difference (out of 255) above which a pixel counts as changed.
pub const DIFF_TOLERANCE: u8 = 8;

pub const DEFAULT_DPI: u32 = 100;

/// One rasterized page, 8-bit RGB, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PageRaster {
    pub dpi: u32,
    pub image: RgbImage,
}

impl PageRaster {
    pub fn new(image: RgbImage, dpi: u32) -> Result<Self> {
        if image.width() == 0 || image.height() == 0 {
            return Err(Error::PageMismatch("page raster has zero extent".into()));
        }
        Ok(Self { dpi, image })
    }

    /// Blank white page.
    pub fn blank(width: u32, height: u32, dpi: u32) -> Self {
        Self {
            dpi,
            image: RgbImage::from_pixel(width, height, image::Rgb([255, 255, 255])),
        }
    }

    pub fn load(path: &Path, dpi: u32) -> Result<Self> {
        let img = image::open(path).map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?;
        Self::new(img.to_rgb8(), dpi)
    }

    pub fn width(&self) -> u32 {
        self.image.width()
    }

    pub fn height(&self) -> u32 {
        self.image.height()
    }
}

/// Binary changed-pixel mask, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub width: u32,
    pub height: u32,
    pub bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width as usize * height as usize],
        }
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, v: bool) {
        self.bits[y as usize * self.width as usize + x as usize] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Marks every pixel whose largest per-channel absolute difference exceeds
/// [`DIFF_TOLERANCE`].
pub fn diff_pages(original: &PageRaster, modified: &PageRaster) -> Result<Mask> {
    if original.width() != modified.width()
        || original.height() != modified.height()
        || original.dpi != modified.dpi
    {
        return Err(Error::PageMismatch(format!(
            "{}x{}@{}dpi vs {}x{}@{}dpi",
            original.width(),
            original.height(),
            original.dpi,
            modified.width(),
            modified.height(),
            modified.dpi
        )));
    }
    let bits = original
        .image
        .pixels()
        .zip(modified.image.pixels())
        .map(|(a, b)| {
            a.0.iter()
                .zip(b.0.iter())
                .map(|(&p, &q)| p.abs_diff(q))
                .max()
                .unwrap_or(0)
                > DIFF_TOLERANCE
        })
        .collect();
    Ok(Mask {
        width: original.width(),
        height: original.height(),
        bits,
    })
}
