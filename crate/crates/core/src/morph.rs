//! Flow-guided view interpolation between the two halves of a stereo pair.
//!
//! Intermediate views warp both endpoints towards time `t` by inverse
//! (backward-sampling) warping and cross-dissolve them linearly. All
//! arithmetic stays in floating point until a single final rounding.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flow::FlowField;
use crate::raster::{quantize, RasterImage, StereoFrame, CHANNELS};

/// Equally sized views ordered from the left endpoint (index 0) to the
/// right endpoint (last index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViewSequence {
    views: Vec<RasterImage>,
}

impl ViewSequence {
    pub fn new(views: Vec<RasterImage>) -> Result<Self> {
        let first = views
            .first()
            .ok_or_else(|| Error::Layout("a view sequence needs at least one view".into()))?
            .dims();
        if let Some((k, bad)) = views.iter().enumerate().find(|(_, v)| v.dims() != first) {
            return Err(Error::DimensionMismatch(format!(
                "view {k} is {:?}, expected {first:?}",
                bad.dims()
            )));
        }
        Ok(Self { views })
    }

    pub fn count(&self) -> usize {
        self.views.len()
    }

    /// Width and height shared by every view.
    pub fn view_dims(&self) -> (u32, u32) {
        self.views[0].dims()
    }

    pub fn views(&self) -> &[RasterImage] {
        &self.views
    }

    pub fn get(&self, k: usize) -> Option<&RasterImage> {
        self.views.get(k)
    }

    /// Middle of the sequence: the zero-parallax view.
    pub fn center_index(&self) -> usize {
        self.views.len() / 2
    }

    pub fn into_views(self) -> Vec<RasterImage> {
        self.views
    }
}

fn check_dims(image: &RasterImage, field: &FlowField) -> Result<()> {
    if image.dims() != field.dims() {
        return Err(Error::DimensionMismatch(format!(
            "image {:?} vs flow {:?}",
            image.dims(),
            field.dims()
        )));
    }
    Ok(())
}

fn warp_samples(image: &RasterImage, field: &FlowField, scale: f64) -> Vec<f64> {
    let (w, h) = image.dims();
    let mut out = Vec::with_capacity(w as usize * h as usize * CHANNELS);
    for y in 0..h {
        for x in 0..w {
            let (u, v) = field.get(x, y);
            let sx = x as f64 - scale * u as f64;
            let sy = y as f64 - scale * v as f64;
            out.extend_from_slice(&image.sample_bilinear(sx, sy));
        }
    }
    out
}

/// `out(x, y) = image(x - scale·u, y - scale·v)`, bilinear with edge clamping.
pub fn warp_image(image: &RasterImage, field: &FlowField, scale: f64) -> Result<RasterImage> {
    check_dims(image, field)?;
    let (w, h) = image.dims();
    let data = warp_samples(image, field, scale)
        .into_iter()
        .map(quantize)
        .collect();
    RasterImage::new(w, h, data)
}

/// Blend of `left` warped forward by `t` and `right` warped backward by
/// `1 - t`, weighted `1 - t` and `t`.
pub fn morph_frame(
    left: &RasterImage,
    right: &RasterImage,
    forward: &FlowField,
    backward: &FlowField,
    t: f64,
) -> Result<RasterImage> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::BlendOutOfRange(t));
    }
    if left.dims() != right.dims() {
        return Err(Error::DimensionMismatch(format!(
            "left {:?} vs right {:?}",
            left.dims(),
            right.dims()
        )));
    }
    check_dims(left, forward)?;
    check_dims(right, backward)?;

    let from_left = warp_samples(left, forward, t);
    let from_right = warp_samples(right, backward, 1.0 - t);
    let data = from_left
        .iter()
        .zip(&from_right)
        .map(|(&a, &b)| quantize((1.0 - t) * a + t * b))
        .collect();
    let (w, h) = left.dims();
    RasterImage::new(w, h, data)
}

/// Interpolation parameter of view `k` out of `count`.
#[inline]
pub fn view_time(k: usize, count: usize) -> f64 {
    k as f64 / (count - 1) as f64
}

/// `count` views from left (`t = 0`) to right (`t = 1`), evenly spaced.
pub fn generate_views(
    frame: &StereoFrame,
    forward: &FlowField,
    backward: &FlowField,
    count: usize,
) -> Result<ViewSequence> {
    if count < 2 {
        return Err(Error::TooFewViews(count));
    }
    let views = (0..count)
        .into_par_iter()
        .map(|k| {
            morph_frame(
                frame.left(),
                frame.right(),
                forward,
                backward,
                view_time(k, count),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    ViewSequence::new(views)
}

/// Looping animated GIF of the sequence, `delay_cs` hundredths of a second
/// per frame.
pub fn save_gif(views: &ViewSequence, path: impl AsRef<Path>, delay_cs: u16) -> Result<()> {
    let path = path.as_ref();
    let (w, h) = views.view_dims();
    let (gw, gh) = match (u16::try_from(w), u16::try_from(h)) {
        (Ok(gw), Ok(gh)) => (gw, gh),
        _ => {
            return Err(Error::InvalidRaster(format!(
                "{w}x{h} exceeds the GIF size limit"
            )))
        }
    };
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut encoder = gif::Encoder::new(BufWriter::new(file), gw, gh, &[])?;
    encoder.set_repeat(gif::Repeat::Infinite)?;
    for view in views.views() {
        let mut frame = gif::Frame::from_rgb_speed(gw, gh, view.data(), 10);
        frame.delay = delay_cs;
        encoder.write_frame(&frame)?;
    }
    Ok(())
}
