use crate::error::{Error, Result};
use crate::geometry::BBox;

/// Largest region of `float_box` free of caption text.
///
/// Takes the enclosing box of the captions (clipped to the float) and picks
/// the biggest of the four bands of the float above, below, left and right
/// of it. Ties go to the earlier band in that order. The result is exact
/// whenever the captions form a single band, and never overlaps a caption
/// otherwise.
pub fn carve_caption(float_box: &BBox, caption_boxes: &[BBox]) -> Result<BBox> {
    let clipped: Vec<BBox> = caption_boxes
        .iter()
        .filter_map(|c| c.intersection(float_box))
        .collect();
    let Some(cap) = clipped.iter().copied().reduce(|a, b| a.union(&b)) else {
        return Ok(*float_box);
    };
    let f = float_box;
    let bands = [
        BBox { x1: f.x1, y1: f.y1, x2: f.x2, y2: cap.y1 },
        BBox { x1: f.x1, y1: cap.y2, x2: f.x2, y2: f.y2 },
        BBox { x1: f.x1, y1: f.y1, x2: cap.x1, y2: f.y2 },
        BBox { x1: cap.x2, y1: f.y1, x2: f.x2, y2: f.y2 },
    ];
    let mut best: Option<BBox> = None;
    for band in bands.into_iter().filter(BBox::is_valid) {
        if best.map_or(true, |b| band.area() > b.area()) {
            best = Some(band);
        }
    }
    best.ok_or(Error::CaptionCoversFloat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bb(x1: f64, y1: f64, x2: f64, y2: f64) -> BBox {
        BBox::new(x1, y1, x2, y2).unwrap()
    }

    #[test]
    fn caption_below() {
        let f = bb(0.0, 0.0, 100.0, 100.0);
        assert_eq!(carve_caption(&f, &[bb(0.0, 80.0, 100.0, 100.0)]).unwrap(), bb(0.0, 0.0, 100.0, 80.0));
    }

    #[test]
    fn no_captions_is_identity() {
        let f = bb(0.0, 0.0, 100.0, 100.0);
        assert_eq!(carve_caption(&f, &[]).unwrap(), f);
    }

    #[test]
    fn caption_to_the_right() {
        let f = bb(0.0, 0.0, 100.0, 100.0);
        assert_eq!(carve_caption(&f, &[bb(80.0, 0.0, 100.0, 100.0)]).unwrap(), bb(0.0, 0.0, 80.0, 100.0));
    }

    #[test]
    fn caption_above_table() {
        let f = bb(10.0, 10.0, 210.0, 110.0);
        let caps = [bb(20.0, 12.0, 60.0, 20.0), bb(62.0, 12.0, 200.0, 20.0), bb(20.0, 22.0, 150.0, 30.0)];
        assert_eq!(carve_caption(&f, &caps).unwrap(), bb(10.0, 30.0, 210.0, 110.0));
    }

    #[test]
    fn full_cover_is_an_error() {
        let f = bb(0.0, 0.0, 10.0, 10.0);
        assert!(matches!(
            carve_caption(&f, &[bb(-1.0, -1.0, 11.0, 11.0)]),
            Err(Error::CaptionCoversFloat)
        ));
    }

    fn arb_config() -> impl Strategy<Value = (BBox, Vec<BBox>)> {
        (0.0..50.0f64, 0.0..50.0f64, 20.0..200.0f64, 20.0..200.0f64).prop_flat_map(|(x, y, w, h)| {
            let f = bb(x, y, x + w, y + h);
            let cap = (0.0..0.9f64, 0.0..0.9f64, 0.05..0.5f64, 0.05..0.5f64).prop_map(move |(u, v, cw, ch)| {
                let x1 = x + u * w;
                let y1 = y + v * h;
                bb(x1, y1, (x1 + cw * w).min(x + w), (y1 + ch * h).min(y + h))
            });
            (Just(f), prop::collection::vec(cap, 1..4))
        })
    }

    proptest! {
        #[test]
        fn carved_box_is_inside_and_caption_free((f, caps) in arb_config()) {
            if let Ok(c) = carve_caption(&f, &caps) {
                prop_assert!(f.contains(&c));
                for cap in &caps {
                    prop_assert!(c.intersection(cap).is_none());
                }
            }
        }
    }
}
