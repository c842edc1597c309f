//! RGB rasters, PNG I/O and stereo-pair ingestion.
//!
//! Rasters are stored row-major with the top row first. Everything
//! downstream (flow, morph, quilt, lenticular mapping) shares this
//! convention; the quilt's bottom-up tile order is an indexing rule of the
//! quilt module only.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use crate::error::{Error, Result};

pub const CHANNELS: usize = 3;

/// 8-bit RGB image.
#[derive(Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl std::fmt::Debug for RasterImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RasterImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl RasterImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidRaster(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize * CHANNELS;
        if data.len() != expected {
            return Err(Error::InvalidRaster(format!(
                "{width}x{height} RGB needs {expected} samples, got {}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Solid-colour raster. Panics on zero dimensions.
    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        assert!(
            width > 0 && height > 0,
            "raster dimensions must be positive"
        );
        let data = rgb
            .iter()
            .copied()
            .cycle()
            .take(width as usize * height as usize * CHANNELS)
            .collect();
        Self {
            width,
            height,
            data,
        }
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> [u8; 3]) -> Self {
        assert!(
            width > 0 && height > 0,
            "raster dimensions must be positive"
        );
        let mut data = Vec::with_capacity(width as usize * height as usize * CHANNELS);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * CHANNELS;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    /// One row of interleaved samples.
    #[inline]
    pub fn row(&self, y: u32) -> &[u8] {
        let stride = self.width as usize * CHANNELS;
        &self.data[y as usize * stride..(y as usize + 1) * stride]
    }

    /// Bilinear sample at a continuous position (pixel centres on integers),
    /// clamping to the nearest edge pixel outside the grid.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> [f64; 3] {
        let max_x = (self.width - 1) as f64;
        let max_y = (self.height - 1) as f64;
        let x = x.clamp(0.0, max_x);
        let y = y.clamp(0.0, max_y);
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = x - x0;
        let fy = y - y0;
        let x0 = x0 as u32;
        let y0 = y0 as u32;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);

        let p00 = self.pixel(x0, y0);
        let p10 = self.pixel(x1, y0);
        let p01 = self.pixel(x0, y1);
        let p11 = self.pixel(x1, y1);
        let mut out = [0.0; 3];
        for c in 0..CHANNELS {
            // Zero-weight taps are skipped so integer positions reproduce
            // the source sample exactly.
            let mut top = p00[c] as f64;
            if fx > 0.0 {
                top = top * (1.0 - fx) + p10[c] as f64 * fx;
            }
            let mut value = top;
            if fy > 0.0 {
                let mut bottom = p01[c] as f64;
                if fx > 0.0 {
                    bottom = bottom * (1.0 - fx) + p11[c] as f64 * fx;
                }
                value = top * (1.0 - fy) + bottom * fy;
            }
            out[c] = value;
        }
        out
    }
}

/// Round and clamp a floating-point sample to 8 bits.
#[inline]
pub(crate) fn quantize(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Left and right halves of a side-by-side stereo capture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StereoFrame {
    left: RasterImage,
    right: RasterImage,
}

impl StereoFrame {
    pub fn new(left: RasterImage, right: RasterImage) -> Result<Self> {
        if left.dims() != right.dims() {
            return Err(Error::DimensionMismatch(format!(
                "stereo halves differ: left {:?}, right {:?}",
                left.dims(),
                right.dims()
            )));
        }
        Ok(Self { left, right })
    }

    pub fn left(&self) -> &RasterImage {
        &self.left
    }

    pub fn right(&self) -> &RasterImage {
        &self.right
    }

    pub fn into_parts(self) -> (RasterImage, RasterImage) {
        (self.left, self.right)
    }
}

/// Decode a PNG into RGB. Grayscale, paletted and low-bit-depth images are
/// expanded; alpha channels are dropped.
pub fn load_png(path: impl AsRef<Path>) -> Result<RasterImage> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let decode_err = |source| Error::PngDecode {
        path: path.to_owned(),
        source,
    };

    let mut decoder = png::Decoder::new(BufReader::new(file));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(decode_err)?;
    let depth = reader.info().bit_depth as u8;
    if depth > 8 {
        return Err(Error::UnsupportedBitDepth(depth));
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::InvalidRaster("PNG too large to decode".into()))?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf).map_err(decode_err)?;
    buf.truncate(info.buffer_size());

    let pixels = info.width as usize * info.height as usize;
    let data = match info.color_type {
        png::ColorType::Rgb => buf,
        png::ColorType::Rgba => buf
            .chunks_exact(4)
            .flat_map(|p| [p[0], p[1], p[2]])
            .collect(),
        png::ColorType::Grayscale => buf.iter().flat_map(|&g| [g, g, g]).collect(),
        png::ColorType::GrayscaleAlpha => buf
            .chunks_exact(2)
            .flat_map(|p| [p[0], p[0], p[0]])
            .collect(),
        png::ColorType::Indexed => {
            // EXPAND resolves palettes, so this is unreachable for valid files.
            return Err(Error::InvalidRaster("unexpanded paletted PNG".into()));
        }
    };
    debug_assert_eq!(data.len(), pixels * CHANNELS);
    RasterImage::new(info.width, info.height, data)
}

/// Write an 8-bit RGB PNG.
pub fn save_png(image: &RasterImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let encode_err = |source| Error::PngEncode {
        path: path.to_owned(),
        source,
    };
    let mut encoder = png::Encoder::new(BufWriter::new(file), image.width, image.height);
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder.write_header().map_err(encode_err)?;
    writer.write_image_data(&image.data).map_err(encode_err)?;
    writer.finish().map_err(encode_err)
}

/// Cut a side-by-side capture into its left and right halves.
pub fn split_stereo(frame: &RasterImage) -> Result<StereoFrame> {
    if !frame.width.is_multiple_of(2) {
        return Err(Error::OddWidth(frame.width));
    }
    let half = frame.width / 2;
    let half_stride = half as usize * CHANNELS;
    let mut left = Vec::with_capacity(frame.data.len() / 2);
    let mut right = Vec::with_capacity(frame.data.len() / 2);
    for y in 0..frame.height {
        let row = frame.row(y);
        left.extend_from_slice(&row[..half_stride]);
        right.extend_from_slice(&row[half_stride..]);
    }
    StereoFrame::new(
        RasterImage::new(half, frame.height, left)?,
        RasterImage::new(half, frame.height, right)?,
    )
}

/// Place two equal-height rasters side by side.
pub fn concat_horizontal(left: &RasterImage, right: &RasterImage) -> Result<RasterImage> {
    if left.height != right.height {
        return Err(Error::DimensionMismatch(format!(
            "heights differ: {} vs {}",
            left.height, right.height
        )));
    }
    let mut data = Vec::with_capacity(left.data.len() + right.data.len());
    for y in 0..left.height {
        data.extend_from_slice(left.row(y));
        data.extend_from_slice(right.row(y));
    }
    RasterImage::new(left.width + right.width, left.height, data)
}

/// Bilinear resize using pixel-centre alignment. Same-size resizes are exact.
pub fn resize_bilinear(image: &RasterImage, width: u32, height: u32) -> Result<RasterImage> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidRaster(format!(
            "resize target {width}x{height} must be positive"
        )));
    }
    if image.dims() == (width, height) {
        return Ok(image.clone());
    }
    let sx = image.width as f64 / width as f64;
    let sy = image.height as f64 / height as f64;
    let mut data = Vec::with_capacity(width as usize * height as usize * CHANNELS);
    for y in 0..height {
        let src_y = (y as f64 + 0.5) * sy - 0.5;
        for x in 0..width {
            let src_x = (x as f64 + 0.5) * sx - 0.5;
            let p = image.sample_bilinear(src_x, src_y);
            data.extend(p.iter().map(|&v| quantize(v)));
        }
    }
    RasterImage::new(width, height, data)
}

/// Copy out a `width`×`height` window whose top-left corner is `(x, y)`.
pub fn crop(image: &RasterImage, x: u32, y: u32, width: u32, height: u32) -> Result<RasterImage> {
    if x + width > image.width || y + height > image.height {
        return Err(Error::InvalidRaster(format!(
            "crop {width}x{height}+{x}+{y} exceeds {}x{}",
            image.width, image.height
        )));
    }
    let start = x as usize * CHANNELS;
    let len = width as usize * CHANNELS;
    let mut data = Vec::with_capacity(len * height as usize);
    for row in y..y + height {
        data.extend_from_slice(&image.row(row)[start..start + len]);
    }
    RasterImage::new(width, height, data)
}

/// Resize to `target_width` keeping the aspect ratio, then keep
/// `target_height` rows starting at `crop_top`.
///
/// Both halves of a stereo pair must use the same `crop_top`.
pub fn prepare_view(
    image: &RasterImage,
    target_width: u32,
    target_height: u32,
    crop_top: u32,
) -> Result<RasterImage> {
    if target_width == 0 || target_height == 0 {
        return Err(Error::InvalidRaster(format!(
            "target {target_width}x{target_height} must be positive"
        )));
    }
    let scaled_height =
        ((image.height as f64 * target_width as f64 / image.width as f64).round() as u32).max(1);
    let bottom = crop_top as u64 + target_height as u64;
    if bottom > scaled_height as u64 {
        return Err(Error::CropOutOfBounds {
            top: crop_top,
            bottom: bottom as u32,
            height: scaled_height,
        });
    }
    let scaled = resize_bilinear(image, target_width, scaled_height)?;
    if crop_top == 0 && target_height == scaled_height {
        return Ok(scaled);
    }
    crop(&scaled, 0, crop_top, target_width, target_height)
}

/// Single-channel floating-point image.
#[derive(Clone, Debug, PartialEq)]
pub struct LumaImage {
    width: u32,
    height: u32,
    data: Vec<f32>,
}

impl LumaImage {
    pub fn new(width: u32, height: u32, data: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width as usize * height as usize {
            return Err(Error::InvalidRaster(format!(
                "{width}x{height} luma grid with {} samples",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> f32) -> Self {
        assert!(width > 0 && height > 0, "luma dimensions must be positive");
        let mut data = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    #[inline]
    pub fn data(&self) -> &[f32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> f32 {
        self.data[y as usize * self.width as usize + x as usize]
    }
}

/// Rec.601 luma in [0, 1].
pub fn to_grayscale(image: &RasterImage) -> LumaImage {
    let data = image
        .data
        .chunks_exact(CHANNELS)
        .map(|p| {
            let luma = 0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64;
            (luma / 255.0) as f32
        })
        .collect();
    LumaImage {
        width: image.width,
        height: image.height,
        data,
    }
}
